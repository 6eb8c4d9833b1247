//! One builder per catalog model.

use super::parts::{
    all_working, controller, failure_pair, group_failure_gate, link, router_chw, router_places, ChwRecovery, Correlated,
    Ctl, Source, Unit, GEO, MIS, PHY,
};
use crate::san::{activity, all, case, ite, mark, param, Assign, Cond, SanBuilder, SanModel};

const ROUTER_KINDS: [(&str, &str, &str); 3] =
    [("FHW", "fhw_fail_rate", "fhw_rcv_rate"), ("FHWt", "fhwt_fail_rate", "fhwt_rcv_rate"), ("SW", "sw_fail_rate", "sw_rcv_rate")];

const MAN: (&str, &str, &str) = ("MAN", "man_fail_rate", "man_rcv_rate");

fn group(coverage: &'static str, group_up: Cond, gate: &str) -> Correlated {
    Correlated { coverage, group_up, gate: gate.to_string() }
}

fn others(units: &[Unit], i: usize) -> Vec<&Unit> {
    units.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, u)| u).collect()
}

pub(crate) fn link_model() -> SanModel {
    let mut b = SanBuilder::new("link");
    b.place("Working", 1).place("Failed", 0);
    link(&mut b, "Working", "Failed", "");
    b.finish()
}

/// Single router. The spare card returns to service at `chw_rcv_rate`.
pub(crate) fn router() -> SanModel {
    let mut b = SanBuilder::new("router");
    let u = Unit::new("Working", "");
    router_places(&mut b, &u, true);
    router_chw(&mut b, &u, ChwRecovery::RecoveryRate, None);
    for (kind, f, r) in ROUTER_KINDS.into_iter().chain([MAN]) {
        failure_pair(&mut b, &u, kind, f, r, None);
    }
    b.finish()
}

pub(crate) fn switch() -> SanModel {
    let mut b = SanBuilder::new("switch");
    let u = Unit::new("Working", "");
    b.place("Working", 1);
    for (kind, f, r) in ROUTER_KINDS {
        b.place(&u.failed(kind), 0);
        failure_pair(&mut b, &u, kind, f, r, None);
    }
    b.finish()
}

pub(crate) fn sdn_controller() -> SanModel {
    let mut b = SanBuilder::new("controller");
    Ctl::new("").places(&mut b);
    controller(&mut b, "sw_fail_rate", "sw_rcv_rate");
    b.finish()
}

pub(crate) fn ll() -> SanModel {
    let mut b = SanBuilder::new("ll");
    for p in ["Working_L1", "Working_L2"] {
        b.place(p, 1);
    }
    for p in ["Failed_L1", "Failed_L2", "GEO", "PHY"] {
        b.place(p, 0);
    }
    link(&mut b, "Working_L1", "Failed_L1", "1");
    link(&mut b, "Working_L2", "Failed_L2", "2");
    let both = all([mark("Working_L1").is(1), mark("Working_L2").is(1)]);
    GEO.add(&mut b, both.clone(), &["Working_L1", "Working_L2"]);
    PHY.add(&mut b, both, &["Working_L1", "Working_L2"]);
    b.finish()
}

/// Two routers with common-mode failures driven by `tmi_cvg` and a shared
/// operation and management place `Failed_MAN`.
pub(crate) fn rr(recovery: ChwRecovery) -> SanModel {
    let mut b = SanBuilder::new("rr");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2")];
    b.place("Failed_MAN", 0).place("GEO", 0);
    for u in &units {
        router_places(&mut b, u, false);
    }
    let both = all_working(&units);
    for (i, u) in units.iter().enumerate() {
        router_chw(&mut b, u, recovery, Some(&group("tmi_cvg", all_working(others(&units, i)), "OG_CHW")));
        for (kind, f, r) in ROUTER_KINDS {
            failure_pair(&mut b, u, kind, f, r, Some(&group("tmi_cvg", both.clone(), &format!("OG_{kind}"))));
        }
    }
    for kind in ["CHW", "FHW", "FHWt", "SW"] {
        group_failure_gate(&mut b, &format!("OG_{kind}"), &units, kind);
    }
    GEO.add(&mut b, both.clone(), &["Working_S1", "Working_S2"]);
    Source {
        act: "MAN",
        sfx: "",
        place: "Failed_MAN",
        ig: "IG_MF",
        og: "OG_MR",
        fail_rate: "man_fail_rate",
        rcv_rate: "man_rcv_rate",
    }
    .add(&mut b, both, &["Working_S1", "Working_S2"]);
    b.finish()
}

/// Routers with per-router O&M failures and homogeneous-equipment
/// correlation (`heq_cvg`). As listed, the common-mode O&M gate `OG_MAN`
/// marks `failed_SW_*`.
fn routers_heq(b: &mut SanBuilder, units: &[Unit], recovery: ChwRecovery) {
    for u in units {
        router_places(b, u, true);
    }
    let every = all_working(units);
    for (i, u) in units.iter().enumerate() {
        router_chw(b, u, recovery, Some(&group("heq_cvg", all_working(others(units, i)), "OG_CHW")));
        for (kind, f, r) in ROUTER_KINDS.into_iter().chain([MAN]) {
            failure_pair(b, u, kind, f, r, Some(&group("heq_cvg", every.clone(), &format!("OG_{kind}"))));
        }
    }
    for kind in ["CHW", "FHW", "FHWt"] {
        group_failure_gate(b, &format!("OG_{kind}"), units, kind);
    }
    group_failure_gate(b, "OG_MAN", units, "SW");
    group_failure_gate(b, "OG_SW", units, "SW");
}

/// Two routers and one link (listed under the name `rl`).
pub(crate) fn rrl(recovery: ChwRecovery) -> SanModel {
    let mut b = SanBuilder::new("rrl");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2")];
    b.place("Failed_L", 0).place("GEO", 0).place("Working_L", 1);
    routers_heq(&mut b, &units, recovery);
    link(&mut b, "Working_L", "Failed_L", "");
    GEO.add(&mut b, all([mark("Working_L").is(1), mark("Working_S2").is(1)]), &["Working_L", "Working_S2"]);
    b.finish()
}

/// Three routers. Every common-mode branch, `SW_F_S2` included, requires all
/// three routers to be working.
pub(crate) fn rrr(recovery: ChwRecovery) -> SanModel {
    let mut b = SanBuilder::new("rrr");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2"), Unit::indexed("Working", "_S3")];
    routers_heq(&mut b, &units, recovery);
    b.finish()
}

/// One router and two links with geographic and physical-proximity correlation.
pub(crate) fn rll(recovery: ChwRecovery) -> SanModel {
    let mut b = SanBuilder::new("rll");
    let u = Unit::new("Working_R", "");
    router_places(&mut b, &u, true);
    for p in ["Working_L1", "Working_L2"] {
        b.place(p, 1);
    }
    for p in ["Failed_L1", "Failed_L2", "GEO", "PHY"] {
        b.place(p, 0);
    }
    router_chw(&mut b, &u, recovery, None);
    for (kind, f, r) in ROUTER_KINDS.into_iter().chain([MAN]) {
        failure_pair(&mut b, &u, kind, f, r, None);
    }
    link(&mut b, "Working_L1", "Failed_L1", "1");
    link(&mut b, "Working_L2", "Failed_L2", "2");
    let links = [mark("Working_L1").is(1), mark("Working_L2").is(1)];
    GEO.add(
        &mut b,
        all(links.iter().cloned().chain([mark("Working_R").is(1)])),
        &["Working_L1", "Working_L2", "Working_R"],
    );
    PHY.add(&mut b, all(links), &["Working_L1", "Working_L2"]);
    b.finish()
}

fn switches(b: &mut SanBuilder, units: &[Unit], coverage: &'static str) {
    let every = all_working(units);
    for u in units {
        b.place(&u.working, 1);
        for (kind, f, r) in ROUTER_KINDS {
            b.place(&u.failed(kind), 0);
            failure_pair(b, u, kind, f, r, Some(&group(coverage, every.clone(), &format!("OG_{kind}"))));
        }
    }
    for kind in ["FHW", "FHWt", "SW"] {
        group_failure_gate(b, &format!("OG_{kind}"), units, kind);
    }
}

pub(crate) fn ss() -> SanModel {
    let mut b = SanBuilder::new("ss");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2")];
    b.place("GEO", 0).place("MIS", 0);
    switches(&mut b, &units, "tmi_cvg");
    let both = all_working(&units);
    GEO.add(&mut b, both.clone(), &["Working_S1", "Working_S2"]);
    MIS.add(&mut b, both, &["Working_S1", "Working_S2"]);
    b.finish()
}

pub(crate) fn ssl() -> SanModel {
    let mut b = SanBuilder::new("ssl");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2")];
    b.place("Failed_L", 0).place("GEO", 0).place("Working_L", 1);
    switches(&mut b, &units, "heq_cvg");
    link(&mut b, "Working_L", "Failed_L", "");
    GEO.add(&mut b, all([mark("Working_L").is(1), mark("Working_S2").is(1)]), &["Working_L", "Working_S2"]);
    b.finish()
}

pub(crate) fn sss() -> SanModel {
    let mut b = SanBuilder::new("sss");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2"), Unit::indexed("Working", "_S3")];
    switches(&mut b, &units, "heq_cvg");
    b.finish()
}

/// One switch and two links. The listing's `fhw_t_*` rate names are the
/// `fhwt_*` study variables.
pub(crate) fn sll() -> SanModel {
    let mut b = SanBuilder::new("sll");
    let u = Unit::new("Working_S", "");
    b.place("Working_S", 1);
    for (kind, f, r) in ROUTER_KINDS {
        b.place(&u.failed(kind), 0);
        failure_pair(&mut b, &u, kind, f, r, None);
    }
    for p in ["Working_L1", "Working_L2"] {
        b.place(p, 1);
    }
    for p in ["Failed_L1", "Failed_L2", "GEO", "PHY"] {
        b.place(p, 0);
    }
    link(&mut b, "Working_L1", "Failed_L1", "1");
    link(&mut b, "Working_L2", "Failed_L2", "2");
    let links = [mark("Working_L1").is(1), mark("Working_L2").is(1)];
    GEO.add(
        &mut b,
        all(links.iter().cloned().chain([mark("Working_S").is(1)])),
        &["Working_L1", "Working_L2", "Working_S"],
    );
    PHY.add(&mut b, all(links), &["Working_L1", "Working_L2"]);
    b.finish()
}

fn cis(sfx: &'static str, place: &'static str, ig: &'static str, og: &'static str) -> Source<'static> {
    Source { act: "CIS", sfx, place, ig, og, fail_rate: "cis_fail_rate", rcv_rate: "cis_rcv_rate" }
}

/// Controller, switch and link. The controller's software uses `csw_*` rates.
pub(crate) fn csl() -> SanModel {
    let mut b = SanBuilder::new("csl");
    let ctl = Ctl::new("");
    ctl.places(&mut b);
    b.place("CIS", 0).place("Failed_L", 0).place("GEO", 0).place("Working_L", 1).place("Working_S", 1);
    controller(&mut b, "csw_fail_rate", "csw_rcv_rate");
    let s = Unit::new("Working_S", "_S");
    for (kind, f, r) in ROUTER_KINDS {
        b.place(&s.failed(kind), 0);
        failure_pair(&mut b, &s, kind, f, r, None);
    }
    link(&mut b, "Working_L", "Failed_L", "");
    cis("", "CIS", "IG_CF", "OG_CR").add(
        &mut b,
        all([mark("CIS").is(0), mark("Working_S").is(1)]) & ctl.healthy(),
        &["Working_S"],
    );
    GEO.add(&mut b, all([mark("Working_L").is(1), mark("Working_S").is(1)]), &["Working_L", "Working_S"]);
    b.finish()
}

/// Controller and two switches with shared and per-switch compatibility issues.
pub(crate) fn css() -> SanModel {
    let mut b = SanBuilder::new("css");
    let ctl = Ctl::new("");
    ctl.places(&mut b);
    b.place("CIS", 0).place("CIS_S1", 0).place("CIS_S2", 0).place("GEO", 0);
    controller(&mut b, "csw_fail_rate", "csw_rcv_rate");
    let units = [Unit::indexed("Working", "_S1"), Unit::indexed("Working", "_S2")];
    for u in &units {
        b.place(&u.working, 1);
        for (kind, f, r) in ROUTER_KINDS {
            b.place(&u.failed(kind), 0);
            failure_pair(&mut b, u, kind, f, r, None);
        }
    }
    let both = all_working(&units);
    cis("", "CIS", "IG_CF", "OG_CR").add(&mut b, both.clone() & ctl.healthy(), &["Working_S1", "Working_S2"]);
    cis("_S1", "CIS_S1", "IG_CF_S1", "OG_CR_S1").add(
        &mut b,
        all([mark("CIS_S2").is(0), mark("Working_S1").is(1)]) & ctl.healthy(),
        &["Working_S1"],
    );
    cis("_S2", "CIS_S2", "IG_CF_S2", "OG_CR_S2").add(
        &mut b,
        all([mark("CIS_S1").is(0), mark("Working_S2").is(1)]) & ctl.healthy(),
        &["Working_S2"],
    );
    GEO.add(&mut b, both, &["Working_S1", "Working_S2"]);
    b.finish()
}

/// Two controller replicas with traffic-migration coupling and a shared
/// misconfiguration place.
///
/// Deviations from the listing, both needed for a well-formed model:
/// `HW_F1_C2` case 1 mirrors `HW_F1_C1` (the listing swaps its branches,
/// which breaks normalization), and the `Active_proc--` of `OG_TH_*` /
/// `OG_TS_*` together with the `failed_HW++` of `OG_SD_*` saturate at 0 and
/// `N_proc`, since a replica with every processor failed can be taken down.
pub(crate) fn cc() -> SanModel {
    let mut b = SanBuilder::new("cc");
    let c = [Ctl::new("_C1"), Ctl::new("_C2")];
    for x in &c {
        x.places(&mut b);
    }
    b.place("MIS", 0);
    let mis_ok = mark("MIS").is(0);
    let tmi = param("tmi_cvg");
    let hw_cvg = param("hw_cvg");
    let sw_cvg = param("sw_cvg");
    for (i, me) in c.iter().enumerate() {
        let other = &c[1 - i];
        let ok = mis_ok.clone() & me.healthy();
        let handover = other.healthy() & me.m("Active_proc").is(param("K_th"));
        b.activity(
            activity(&me.p("HW_F1"), me.m("Active_proc") * param("hw_fail_rate"))
                .from(&me.p("Active_proc"))
                .case(case(ite(ok.clone(), 1.0 - hw_cvg.clone(), 0)).to(&me.p("sys_down")))
                .case(
                    case(ite(
                        ok.clone(),
                        ite(handover.clone(), hw_cvg.clone() * tmi.clone(), hw_cvg.clone()),
                        1,
                    ))
                    .to(&me.p("failed_HW")),
                )
                .case(
                    case(ite(ok.clone(), ite(handover.clone(), hw_cvg.clone() * (1.0 - tmi.clone()), 0), 0))
                        .gate(&me.p("OG_TH")),
                )
                .build(),
        );
        b.activity(
            activity(&me.p("SW_F"), me.sw_rate("sw_fail_rate"))
                .gate(&me.p("IG_SW"))
                .case(case(1.0 - sw_cvg.clone()).to(&me.p("sw_sys_down")))
                .case(case(ite(handover.clone(), sw_cvg.clone() * tmi.clone(), sw_cvg.clone())).to(&me.p("failed_SW")))
                .case(case(ite(handover.clone(), sw_cvg.clone() * (1.0 - tmi.clone()), 0)).gate(&me.p("OG_TS")))
                .build(),
        );
        let peer_ok = all([other.m("failed_MAN").is(0), other.m("sys_down").is(0), other.m("sw_sys_down").is(0)]);
        b.activity(
            activity(&me.p("MAN_F"), param("man_fail_rate"))
                .gate(&me.p("IG_MAN"))
                .case(case(ite(peer_ok.clone(), tmi.clone(), 1)).to(&me.p("failed_MAN")))
                .case(case(ite(peer_ok, 1.0 - tmi.clone(), 0)).gate("OG_TM"))
                .build(),
        );
        me.common_activities(&mut b, "sw_rcv_rate");

        let ig_man = all([mis_ok.clone(), me.m("failed_MAN").is(0), me.m("sys_down").is(0), me.m("sw_sys_down").is(0)]);
        b.input_gate(&me.p("IG_MAN"), ig_man, vec![]);
        // IG_SW_C2 does not test MIS in the listing.
        let mut ig_sw = vec![me.m("failed_MAN").is(0), me.m("sys_down").is(0), me.m("sw_sys_down").is(0)];
        if i == 0 {
            ig_sw.insert(0, mis_ok.clone());
        }
        ig_sw.push(me.m("Active_proc").gt(0));
        b.input_gate(&me.p("IG_SW"), all(ig_sw), vec![Assign::dec(&me.p("Active_proc"))]);

        let hw = me.m("failed_HW");
        me.output_gates(&mut b, ite(hw.clone().lt(param("N_proc")), hw.clone() + 1, hw));

        let peer_active = other.m("Active_proc");
        let peer_dec = ite(peer_active.clone().gt(0), peer_active - 1, 0);
        b.output_gate(
            &me.p("OG_TH"),
            vec![
                Assign::set(&other.p("sys_down"), 1),
                Assign::set(&other.p("Active_proc"), peer_dec.clone()),
                Assign::inc(&me.p("failed_HW")),
            ],
        );
        b.output_gate(
            &me.p("OG_TS"),
            vec![
                Assign::set(&other.p("sw_sys_down"), 1),
                Assign::set(&other.p("Active_proc"), peer_dec),
                Assign::inc(&me.p("failed_SW")),
            ],
        );
    }
    b.output_gate("OG_TM", vec![Assign::set("failed_MAN_C1", 1), Assign::set("failed_MAN_C2", 1)]);
    let all_ok = all([
        mis_ok,
        c[0].m("failed_MAN").is(0),
        c[0].m("sys_down").is(0),
        c[0].m("sw_sys_down").is(0),
        c[1].m("failed_MAN").is(0),
        c[1].m("sys_down").is(0),
        c[1].m("sw_sys_down").is(0),
    ]);
    MIS.add(&mut b, all_ok, &[]);
    b.finish()
}
