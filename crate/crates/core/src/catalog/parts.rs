//! Reusable model fragments: link, router, switch and controller.

use crate::san::{activity, all, case, ite, mark, param, Assign, Cond, Expr, SanBuilder};

/// Naming of one network element inside a composite model.
///
/// Failure places are `failed_<KIND><sfx>`, activities `<KIND>_F<sfx>`, and
/// the up place is `working` (which does not always follow the suffix, e.g.
/// `Working_R` next to unsuffixed `failed_CHW` in the rll listing).
#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub working: String,
    pub sfx: String,
}

impl Unit {
    pub fn new(working: &str, sfx: &str) -> Self {
        Unit { working: working.to_string(), sfx: sfx.to_string() }
    }

    /// `Working_S1` with suffix `_S1`.
    pub fn indexed(base: &str, sfx: &str) -> Self {
        Unit::new(&format!("{base}{sfx}"), sfx)
    }

    pub fn place(&self, name: &str) -> String {
        format!("{name}{}", self.sfx)
    }

    pub fn failed(&self, kind: &str) -> String {
        format!("failed_{kind}{}", self.sfx)
    }

    pub fn act(&self, name: &str) -> String {
        format!("{name}{}", self.sfx)
    }
}

/// All listed places hold exactly one token.
pub(crate) fn all_working<'a>(units: impl IntoIterator<Item = &'a Unit>) -> Cond {
    all(units.into_iter().map(|u| mark(&u.working).is(1)))
}

/// Common-mode failure of a group triggered from a coverage case.
///
/// `coverage` is the probability that the failure stays single when the whole
/// group is working; otherwise the output gate `gate` fails every member.
#[derive(Debug, Clone)]
pub(crate) struct Correlated {
    pub coverage: &'static str,
    pub group_up: Cond,
    pub gate: String,
}

/// Failure/recovery pair moving the unit's token between `working` and
/// `failed_<kind>`. Correlated failures put the group case first, matching the
/// listings (`case 1` is the common-mode branch).
pub(crate) fn failure_pair(
    b: &mut SanBuilder,
    u: &Unit,
    kind: &str,
    fail_rate: &str,
    rcv_rate: &str,
    corr: Option<&Correlated>,
) {
    let failed = u.failed(kind);
    let f = activity(&u.act(&format!("{kind}_F")), param(fail_rate)).from(&u.working);
    let f = match corr {
        None => f.to(&failed),
        Some(c) => {
            let cov = param(c.coverage);
            f.case(case(ite(c.group_up.clone(), 1.0 - cov.clone(), 0)).gate(&c.gate))
                .case(case(ite(c.group_up.clone(), cov, 1)).to(&failed))
        }
    };
    b.activity(f.build());
    b.activity(activity(&u.act(&format!("{kind}_R")), param(rcv_rate)).from(&failed).to(&u.working).build());
}

/// Output gate emptying every member's working place and marking `kind` failed.
pub(crate) fn group_failure_gate(b: &mut SanBuilder, id: &str, units: &[Unit], kind: &str) {
    let mut f: Vec<Assign> = units.iter().map(|u| Assign::set(&u.working, 0)).collect();
    f.extend(units.iter().map(|u| Assign::set(&u.failed(kind), 1)));
    b.output_gate(id, f);
}

/// How the CHW_R activity (spare card back into service) is parameterized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ChwRecovery {
    /// `chw_fail_rate`, as printed in the cut-set listings.
    AsListed,
    /// `chw_rcv_rate`.
    RecoveryRate,
}

/// Router places other than the working place, in listing order.
pub(crate) fn router_places(b: &mut SanBuilder, u: &Unit, with_man: bool) {
    b.place(&u.working, 1);
    for kind in ["CHW", "FHW", "FHWt"] {
        b.place(&u.failed(kind), 0);
    }
    if with_man {
        b.place(&u.failed("MAN"), 0);
    }
    b.place(&u.failed("SW"), 0);
    b.place(&u.place("spare_CHW"), 0);
    b.place(&u.place("sys_down"), 0);
}

/// Duplicated control card: a covered failure moves the router onto the
/// spare card, an uncovered one brings the router down until `UCHW_R`.
pub(crate) fn router_chw(b: &mut SanBuilder, u: &Unit, recovery: ChwRecovery, corr: Option<&Correlated>) {
    let spare = u.place("spare_CHW");
    let failed = u.failed("CHW");
    let down = u.place("sys_down");
    let cvg = param("chw_cvg");
    b.activity(
        activity(&u.act("CHW_F"), 2.0 * param("chw_fail_rate"))
            .from(&u.working)
            .case(case(1.0 - cvg.clone()).to(&down))
            .case(case(cvg).to(&spare))
            .build(),
    );
    let f2 = activity(&u.act("CHW_F2"), param("chw_fail_rate")).from(&spare);
    let f2 = match corr {
        None => f2.to(&failed),
        Some(c) => {
            let cov = param(c.coverage);
            f2.case(case(ite(c.group_up.clone(), cov.clone(), 1)).to(&failed))
                .case(case(ite(c.group_up.clone(), 1.0 - cov, 0)).gate(&c.gate))
        }
    };
    b.activity(f2.build());
    let r_rate = match recovery {
        ChwRecovery::AsListed => param("chw_fail_rate"),
        ChwRecovery::RecoveryRate => param("chw_rcv_rate"),
    };
    b.activity(activity(&u.act("CHW_R"), r_rate).from(&spare).to(&u.working).build());
    b.activity(activity(&u.act("CHW_R2"), param("chw_rcv_rate")).from(&failed).to(&spare).build());
    b.activity(activity(&u.act("UCHW_R"), param("uchw_rcv_rate")).from(&down).to(&spare).build());
}

/// Plain two-state link `working` / `failed` with activities `L_F<sfx>`, `L_R<sfx>`.
pub(crate) fn link(b: &mut SanBuilder, working: &str, failed: &str, sfx: &str) {
    b.activity(activity(&format!("L_F{sfx}"), param("link_fail_rate")).from(working).to(failed).build());
    b.activity(activity(&format!("L_R{sfx}"), param("link_rcv_rate")).from(failed).to(working).build());
}

/// Correlation source (GEO, PHY, COM, MIS, CIS).
///
/// `<act>_F<sfx>` fires through input gate `ig`, which empties the `affected`
/// working places, and parks a token in `place`; `<act>_R<sfx>` returns it
/// through output gate `og`, which restores them.
#[derive(Debug, Clone)]
pub(crate) struct Source<'a> {
    pub act: &'a str,
    pub sfx: &'a str,
    pub place: &'a str,
    pub ig: &'a str,
    pub og: &'a str,
    pub fail_rate: &'a str,
    pub rcv_rate: &'a str,
}

impl Source<'_> {
    pub fn add(&self, b: &mut SanBuilder, predicate: Cond, affected: &[&str]) {
        b.input_gate(self.ig, predicate, affected.iter().map(|p| Assign::set(p, 0)).collect());
        b.output_gate(self.og, affected.iter().map(|p| Assign::set(p, 1)).collect());
        b.activity(
            activity(&format!("{}_F{}", self.act, self.sfx), param(self.fail_rate)).gate(self.ig).to(self.place).build(),
        );
        b.activity(
            activity(&format!("{}_R{}", self.act, self.sfx), param(self.rcv_rate))
                .from(self.place)
                .out_gate(self.og)
                .build(),
        );
    }
}

pub(crate) const GEO: Source<'static> = Source {
    act: "GEO",
    sfx: "",
    place: "GEO",
    ig: "IG_GF",
    og: "OG_GR",
    fail_rate: "geo_fail_rate",
    rcv_rate: "geo_rcv_rate",
};

pub(crate) const PHY: Source<'static> = Source {
    act: "PHY",
    sfx: "",
    place: "PHY",
    ig: "IG_PF",
    og: "OG_PR",
    fail_rate: "phy_fail_rate",
    rcv_rate: "phy_rcv_rate",
};

pub(crate) const MIS: Source<'static> = Source {
    act: "MIS",
    sfx: "",
    place: "MIS",
    ig: "IG_MF",
    og: "OG_MR",
    fail_rate: "mis_fail_rate",
    rcv_rate: "mis_rcv_rate",
};

/// Naming of one controller replica: `Active_proc<sfx>`, `failed_HW<sfx>`, ...
#[derive(Debug, Clone)]
pub(crate) struct Ctl {
    pub sfx: String,
}

impl Ctl {
    pub fn new(sfx: &str) -> Self {
        Ctl { sfx: sfx.to_string() }
    }

    pub fn p(&self, name: &str) -> String {
        format!("{name}{}", self.sfx)
    }

    pub fn m(&self, name: &str) -> Expr {
        mark(&self.p(name))
    }

    /// Neither down nor under manual error: `sys_down==0 && sw_sys_down==0 && failed_MAN==0`.
    pub fn healthy(&self) -> Cond {
        all([self.m("sys_down").is(0), self.m("sw_sys_down").is(0), self.m("failed_MAN").is(0)])
    }

    /// Unavailable: fewer than `K_th` active processors, or any failure place marked.
    pub fn down(&self) -> Cond {
        self.m("Active_proc").lt(param("K_th"))
            | self.m("failed_MAN").is(1)
            | self.m("sys_down").is(1)
            | self.m("sw_sys_down").is(1)
    }

    pub fn places(&self, b: &mut SanBuilder) {
        b.place(&self.p("Active_proc"), param("N_proc"));
        for p in ["failed_HW", "failed_MAN", "failed_SW", "sw_sys_down", "sys_down"] {
            b.place(&self.p(p), 0);
        }
    }

    /// `Active_proc = N_proc - failed_HW; failed_SW = 0;`
    fn reset(&self) -> Vec<Assign> {
        vec![
            Assign::set(&self.p("Active_proc"), param("N_proc") - self.m("failed_HW")),
            Assign::set(&self.p("failed_SW"), 0),
        ]
    }

    /// OG_MAN, OG_SD and OG_SSD. `hw_inc` is the `failed_HW++` expression of OG_SD.
    pub fn output_gates(&self, b: &mut SanBuilder, hw_inc: Expr) {
        b.output_gate(&self.p("OG_MAN"), self.reset());
        let mut sd = vec![Assign::set(&self.p("failed_HW"), hw_inc)];
        sd.extend(self.reset());
        b.output_gate(&self.p("OG_SD"), sd);
        b.output_gate(&self.p("OG_SSD"), self.reset());
    }

    /// SW_F rate: `sw_fail_rate` at or above the threshold, scaled by the
    /// number of active processors below it.
    pub fn sw_rate(&self, rate: &str) -> Expr {
        let active = self.m("Active_proc");
        ite(active.clone().ge(param("K_th")), param(rate), param(rate) * active)
    }

    /// Activities whose definition does not depend on the replica's neighbours.
    pub fn common_activities(&self, b: &mut SanBuilder, sw_rcv: &str) {
        b.activity(
            activity(&self.p("HW_F2"), param("hw_fail_rate") * self.m("failed_SW"))
                .from(&self.p("failed_SW"))
                .to(&self.p("failed_HW"))
                .build(),
        );
        b.activity(
            activity(&self.p("HW_R"), param("hw_rcv_rate")).from(&self.p("failed_HW")).to(&self.p("Active_proc")).build(),
        );
        b.activity(
            activity(&self.p("MAN_R"), param("man_rcv_rate"))
                .from(&self.p("failed_MAN"))
                .out_gate(&self.p("OG_MAN"))
                .build(),
        );
        b.activity(
            activity(&self.p("SW_R"), param(sw_rcv)).from(&self.p("failed_SW")).to(&self.p("Active_proc")).build(),
        );
        b.activity(
            activity(&self.p("UHW_R"), param("uhw_rcv_rate")).from(&self.p("sys_down")).out_gate(&self.p("OG_SD")).build(),
        );
        b.activity(
            activity(&self.p("USW_R"), param("usw_rcv_rate"))
                .from(&self.p("sw_sys_down"))
                .out_gate(&self.p("OG_SSD"))
                .build(),
        );
    }
}

/// Standalone SDN controller fragment as used by SDNcontroller, csl and css.
pub(crate) fn controller(b: &mut SanBuilder, sw_fail: &str, sw_rcv: &str) {
    let c = Ctl::new("");
    let hw_cvg = param("hw_cvg");
    let sw_cvg = param("sw_cvg");
    b.activity(
        activity("HW_F1", c.m("Active_proc") * param("hw_fail_rate"))
            .from("Active_proc")
            .case(case(ite(c.healthy(), 1.0 - hw_cvg.clone(), 0)).to("sys_down"))
            .case(case(ite(c.healthy(), hw_cvg, 1)).to("failed_HW"))
            .build(),
    );
    b.activity(activity("MAN_F", param("man_fail_rate")).gate("IG_MAN").to("failed_MAN").build());
    b.activity(
        activity("SW_F", c.sw_rate(sw_fail))
            .gate("IG_SW")
            .case(case(1.0 - sw_cvg.clone()).to("sw_sys_down"))
            .case(case(sw_cvg).to("failed_SW"))
            .build(),
    );
    c.common_activities(b, sw_rcv);
    b.input_gate("IG_MAN", c.healthy(), vec![]);
    b.input_gate("IG_SW", c.healthy() & c.m("Active_proc").gt(0), vec![Assign::dec("Active_proc")]);
    c.output_gates(b, mark("failed_HW") + 1);
}
