use approx::assert_relative_eq;
use proptest::prelude::*;

use san_avail::catalog::{self, BuildOptions, CatalogId};
use san_avail::san::{
    activity, case, mark, param, validate_model, Assign, Bindings, CompiledModel, Marking, SanBuilder, SanError,
};

fn instance(id: CatalogId) -> (CompiledModel, Bindings) {
    let params = catalog::default_params(id, id.default_study()).unwrap();
    let inst = catalog::instantiate(id, &params, BuildOptions::default()).unwrap();
    (inst.model, inst.bindings)
}

fn tokens(model: &CompiledModel, m: &Marking, place: &str) -> u32 {
    m.tokens()[model.place_index(place).unwrap()]
}

fn enabled_set(model: &CompiledModel, m: &Marking, b: &Bindings) -> Vec<String> {
    let mut v: Vec<String> = model.enabled(m, b).unwrap().into_iter().map(String::from).collect();
    v.sort();
    v
}

#[test]
fn catalog_models_are_well_formed() {
    for id in CatalogId::ALL {
        assert!(validate_model(&catalog::build(id)).is_empty(), "{id}");
        assert!(validate_model(&catalog::build_with(id, BuildOptions { corrected: true })).is_empty(), "{id}");
    }
}

#[test]
fn arc_to_unknown_place_is_reported() {
    let mut b = SanBuilder::new("broken");
    b.place("Working_L", 1).place("Failed_L", 0);
    b.activity(activity("L_F", param("link_fail_rate")).from("Wrking_L").to("Failed_L").build());
    let diags = validate_model(&b.finish());
    assert_eq!(diags.len(), 1);
    assert!(diags[0].to_string().contains("Wrking_L"), "{}", diags[0]);
    assert!(diags[0].location.contains("L_F"), "{}", diags[0]);
}

#[test]
fn duplicate_place_is_reported() {
    let mut b = SanBuilder::new("dup");
    b.place("P", 1).place("P", 0);
    b.activity(activity("A", 1.0).from("P").to("P").build());
    assert!(!validate_model(&b.finish()).is_empty());
}

#[test]
fn ll_initial_enabling() {
    let (model, b) = instance(CatalogId::Ll);
    let m = model.initial_marking(&b).unwrap();
    assert_eq!(enabled_set(&model, &m, &b), ["GEO_F", "L_F1", "L_F2", "PHY_F"]);
}

#[test]
fn ll_correlated_failures_need_both_links() {
    let (model, b) = instance(CatalogId::Ll);
    let m = model.marking_from(&[("Working_L1", 0), ("Failed_L1", 1), ("Working_L2", 1)]).unwrap();
    let en = enabled_set(&model, &m, &b);
    assert!(en.contains(&"L_R1".to_string()));
    assert!(!en.contains(&"GEO_F".to_string()));
    assert!(!en.contains(&"PHY_F".to_string()));
}

#[test]
fn zero_rate_disables_activity() {
    let (model, b) = instance(CatalogId::Controller);
    let m = model.initial_marking(&b).unwrap();
    assert_eq!(tokens(&model, &m, "failed_SW"), 0);
    assert!(!enabled_set(&model, &m, &b).contains(&"HW_F2".to_string()));
}

#[test]
fn geo_failure_takes_down_both_links() {
    let (model, b) = instance(CatalogId::Ll);
    let m = model.initial_marking(&b).unwrap();
    let a = model.activity_index("GEO_F").unwrap();
    let next = model.fire(a, 0, &m, &b).unwrap();
    assert_eq!(tokens(&model, &next, "GEO"), 1);
    assert_eq!(tokens(&model, &next, "Working_L1"), 0);
    assert_eq!(tokens(&model, &next, "Working_L2"), 0);
}

#[test]
fn covered_software_failure_decrements_active_processors() {
    let (model, b) = instance(CatalogId::Controller);
    let m = model.initial_marking(&b).unwrap();
    assert_eq!(tokens(&model, &m, "Active_proc"), 10);
    let a = model.activity_index("SW_F").unwrap();
    let probs = model.case_probs(a, &m, &b).unwrap();
    assert_relative_eq!(probs[0], 0.1, max_relative = 1e-12);
    assert_relative_eq!(probs[1], 0.9, max_relative = 1e-12);
    let next = model.fire(a, 1, &m, &b).unwrap();
    assert_eq!(tokens(&model, &next, "Active_proc"), 9);
    assert_eq!(tokens(&model, &next, "failed_SW"), 1);
}

#[test]
fn link_failure_and_repair_round_trip() {
    let (model, b) = instance(CatalogId::Link);
    let m0 = model.initial_marking(&b).unwrap();
    let down = model.fire(model.activity_index("L_F").unwrap(), 0, &m0, &b).unwrap();
    assert_eq!(tokens(&model, &down, "Failed"), 1);
    let up = model.fire(model.activity_index("L_R").unwrap(), 0, &down, &b).unwrap();
    assert_eq!(up, m0);
}

#[test]
fn firing_disabled_activity_is_an_error() {
    let (model, b) = instance(CatalogId::Link);
    let m0 = model.initial_marking(&b).unwrap();
    let err = model.fire(model.activity_index("L_R").unwrap(), 0, &m0, &b).unwrap_err();
    assert!(matches!(err, SanError::NotEnabled { .. }), "{err}");
}

#[test]
fn cc_hardware_failure_cases_at_threshold() {
    let (model, b) = instance(CatalogId::Cc);
    let (hw_cvg, tmi) = (0.97, 0.9);
    let a = model.activity_index("HW_F1_C1").unwrap();
    let at_threshold = model.marking_from(&[("Active_proc_C1", 8), ("Active_proc_C2", 10), ("failed_HW_C1", 2)]).unwrap();
    let p = model.case_probs(a, &at_threshold, &b).unwrap();
    assert_eq!(p.len(), 3);
    assert_relative_eq!(p[0], 1.0 - hw_cvg, max_relative = 1e-14);
    assert_relative_eq!(p[1], hw_cvg * tmi, max_relative = 1e-14);
    assert_relative_eq!(p[2], hw_cvg * (1.0 - tmi), max_relative = 1e-14);

    let above = model.initial_marking(&b).unwrap();
    let p = model.case_probs(a, &above, &b).unwrap();
    assert_relative_eq!(p[0], 1.0 - hw_cvg, max_relative = 1e-14);
    assert_relative_eq!(p[1], hw_cvg, max_relative = 1e-14);
    assert_eq!(p[2], 0.0);
}

#[test]
fn single_case_activity_has_unit_distribution() {
    let (model, b) = instance(CatalogId::Link);
    let m0 = model.initial_marking(&b).unwrap();
    assert_eq!(model.case_probs(model.activity_index("L_F").unwrap(), &m0, &b).unwrap(), vec![1.0]);
}

fn gate_order_model() -> CompiledModel {
    let mut b = SanBuilder::new("order");
    b.place("A", 1).place("B", 0).place("C", 0);
    b.input_gate("IG", mark("A").is(0), vec![Assign::set("B", mark("B") + 1.0)]);
    b.output_gate("OG", vec![Assign::set("C", mark("B") * 10.0)]);
    b.activity(activity("T", 1.0).from("A").gate("IG").case(case(1.0).to("B").gate("OG")).build());
    b.finish().compile().unwrap()
}

#[test]
fn firing_order_is_arcs_gates_arcs_gates() {
    let model = gate_order_model();
    let b = model.bind(&Default::default()).unwrap();
    let m0 = model.initial_marking(&b).unwrap();
    // Input gate predicates are read before the input arc consumes `A`.
    assert!(model.enabled(&m0, &b).unwrap().is_empty());

    let mut b2 = SanBuilder::new("order2");
    b2.place("A", 1).place("B", 0).place("C", 0);
    b2.input_gate("IG", mark("A").is(1), vec![Assign::set("B", mark("A") + 5.0)]);
    b2.output_gate("OG", vec![Assign::set("C", mark("B") * 10.0)]);
    b2.activity(activity("T", 1.0).from("A").gate("IG").case(case(1.0).to("B").gate("OG")).build());
    let model = b2.finish().compile().unwrap();
    let b = model.bind(&Default::default()).unwrap();
    let m1 = model.fire(0, 0, &model.initial_marking(&b).unwrap(), &b).unwrap();
    // A consumed (0) before IG sets B = 0 + 5; arc adds 1; OG sees 6.
    assert_eq!(m1.tokens(), &[0, 6, 60]);
}

#[test]
fn negative_token_result_names_the_gate() {
    let mut b = SanBuilder::new("neg");
    b.place("P", 1).place("Q", 0);
    b.output_gate("OG_BAD", vec![Assign::dec("Q")]);
    b.activity(activity("T", 1.0).from("P").out_gate("OG_BAD").build());
    let model = b.finish().compile().unwrap();
    let bind = model.bind(&Default::default()).unwrap();
    let err = model.fire(0, 0, &model.initial_marking(&bind).unwrap(), &bind).unwrap_err();
    assert!(matches!(&err, SanError::NegativeTokens { gate, .. } if gate == "OG_BAD"), "{err}");
}

#[test]
fn unnormalized_cases_are_rejected() {
    let mut b = SanBuilder::new("cases");
    b.place("P", 1).place("Q", 0);
    b.activity(activity("T", 1.0).from("P").case(case(0.5).to("Q")).case(case(0.6).to("Q")).build());
    let model = b.finish().compile().unwrap();
    let bind = model.bind(&Default::default()).unwrap();
    let err = model.case_probs(0, &model.initial_marking(&bind).unwrap(), &bind).unwrap_err();
    assert!(matches!(err, SanError::Normalization { .. }), "{err}");
}

#[test]
fn missing_parameter_is_an_error() {
    let model = catalog::build(CatalogId::Link).compile().unwrap();
    let err = model.bind(&Default::default()).unwrap_err();
    assert!(matches!(err, SanError::MissingParam { .. }), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enabling_and_firing_are_pure(steps in proptest::collection::vec((0usize..64, 0usize..4), 1..60)) {
        let (model, b) = instance(CatalogId::Rrl);
        let mut m = model.initial_marking(&b).unwrap();
        for (pick, c) in steps {
            let en = model.enabled_rates(&m, &b).unwrap();
            prop_assert_eq!(&en, &model.enabled_rates(&m, &b).unwrap());
            let (a, _) = en[pick % en.len()];
            let probs = model.case_probs(a, &m, &b).unwrap();
            let live: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
            let case = live[c % live.len()];
            let next = model.fire(a, case, &m, &b).unwrap();
            prop_assert_eq!(&next, &model.fire(a, case, &m, &b).unwrap());
            m = next;
        }
    }
}
