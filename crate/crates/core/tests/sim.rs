use proptest::prelude::*;

use san_avail::catalog::{self, BuildOptions, CatalogId, Instance};
use san_avail::ctmc;
use san_avail::san::{activity, mark, ParamSet, RewardVariable, SanBuilder};
use san_avail::sim::{derive_seed, replication_rng, run_estimate, simulate_replication, SimConfig, SimError};

fn instance(id: CatalogId, params: &ParamSet) -> Instance {
    catalog::instantiate(id, params, BuildOptions::default()).unwrap()
}

fn defaults(id: CatalogId) -> ParamSet {
    catalog::default_params(id, id.default_study()).unwrap()
}

#[test]
fn link_interval_contains_closed_form() {
    let inst = instance(CatalogId::Link, &defaults(CatalogId::Link));
    let est = run_estimate(&inst.model, &inst.bindings, &inst.reward, &SimConfig::default()).unwrap();
    let exact = 1e-6 / (1e-6 + 0.01);
    assert!(est.converged);
    assert!(est.contains(exact), "{est:?} vs {exact}");
    assert!(est.half_width.unwrap() <= 0.1 * est.mean);
}

#[test]
fn controller_interval_contains_ctmc_value() {
    let inst = instance(CatalogId::Controller, &defaults(CatalogId::Controller));
    let exact = ctmc::solve(&inst.model, &inst.bindings, &inst.reward, 10_000).unwrap().value;
    let est = run_estimate(&inst.model, &inst.bindings, &inst.reward, &SimConfig::default()).unwrap();
    assert!(est.contains(exact), "{est:?} vs {exact}");
}

#[test]
fn ll_with_correlations_agrees_with_ctmc() {
    let inst = instance(CatalogId::Ll, &defaults(CatalogId::Ll));
    let exact = ctmc::solve(&inst.model, &inst.bindings, &inst.reward, 100).unwrap().value;
    let est = run_estimate(&inst.model, &inst.bindings, &inst.reward, &SimConfig { seed: 7, ..SimConfig::default() })
        .unwrap();
    assert!(est.contains(exact), "{est:?} vs {exact}");
}

#[test]
fn same_seed_gives_identical_estimate() {
    let inst = instance(CatalogId::Rll, &defaults(CatalogId::Rll));
    let cfg = SimConfig { seed: 42, t_end: 1e6, ..SimConfig::default() };
    let a = run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg).unwrap();
    let b = run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn estimate_does_not_depend_on_thread_count() {
    let inst = instance(CatalogId::Ssl, &defaults(CatalogId::Ssl));
    let cfg = SimConfig { seed: 3, t_end: 1e6, max_replications: 300, ..SimConfig::default() };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn single_replication_has_no_interval() {
    let inst = instance(CatalogId::Link, &defaults(CatalogId::Link));
    let cfg = SimConfig { min_replications: 1, max_replications: 1, ..SimConfig::default() };
    let est = run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg).unwrap();
    assert_eq!(est.replications, 1);
    assert!(!est.converged);
    assert_eq!(est.half_width, None);
    assert_eq!(est.ci_low, None);
    assert!(!est.contains(est.mean));
}

#[test]
fn absorbing_up_state_gives_zero() {
    let mut b = SanBuilder::new("static");
    b.place("Working", 1).place("Failed", 0);
    b.activity(activity("F", 1.0).from("Failed").to("Working").build());
    let model = b.finish().compile().unwrap();
    let bind = model.bind(&ParamSet::new()).unwrap();
    let reward = RewardVariable::new("U", mark("Working").is(0)).compile(&model).unwrap();
    let x = simulate_replication(&model, &bind, &reward, 1e7, &mut replication_rng(1, 0)).unwrap();
    assert_eq!(x, 0.0);
    let est = run_estimate(&model, &bind, &reward, &SimConfig::default()).unwrap();
    assert_eq!(est.mean, 0.0);
    assert!(!est.converged);
    assert_eq!(est.replications, SimConfig::default().max_replications);
}

#[test]
fn absorbing_down_state_gives_one() {
    let mut b = SanBuilder::new("dead");
    b.place("Working", 0);
    b.activity(activity("R", 1.0).from("Working").to("Working").build());
    let model = b.finish().compile().unwrap();
    let bind = model.bind(&ParamSet::new()).unwrap();
    let reward = RewardVariable::new("U", mark("Working").is(0)).compile(&model).unwrap();
    assert_eq!(simulate_replication(&model, &bind, &reward, 10.0, &mut replication_rng(1, 0)).unwrap(), 1.0);
}

#[test]
fn ll_unavailability_grows_with_physical_spread() {
    let cfg = SimConfig::default();
    let est = |phy: f64| {
        let inst = instance(CatalogId::Ll, &defaults(CatalogId::Ll).with("phy_fail_rate", phy));
        run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg).unwrap()
    };
    let high = est(1e-5);
    let low = est(1e-9);
    assert!(high.ci_low.unwrap() > low.ci_high.unwrap(), "{high:?} vs {low:?}");
}

#[test]
fn invalid_configs_are_rejected() {
    let inst = instance(CatalogId::Link, &defaults(CatalogId::Link));
    let bad = [
        SimConfig { t_end: 0.0, ..SimConfig::default() },
        SimConfig { confidence_level: 1.0, ..SimConfig::default() },
        SimConfig { relative_half_width: 0.0, ..SimConfig::default() },
        SimConfig { min_replications: 20, max_replications: 10, ..SimConfig::default() },
    ];
    for cfg in bad {
        let err = run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg).unwrap_err();
        assert!(matches!(err, SimError::Config(_)), "{err}");
    }
}

#[test]
fn derived_seeds_are_distinct() {
    let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(1, i)).collect();
    assert_eq!(seeds.len(), 1000);
    assert_eq!(derive_seed(9, 4), derive_seed(9, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn replication_value_is_a_fraction(seed in any::<u64>(), r in 0u64..1000, pick in 0usize..16) {
        let id = CatalogId::ALL[pick];
        let inst = instance(id, &defaults(id));
        let x = simulate_replication(&inst.model, &inst.bindings, &inst.reward, 1e5, &mut replication_rng(seed, r)).unwrap();
        prop_assert!((0.0..=1.0).contains(&x));
        let y = simulate_replication(&inst.model, &inst.bindings, &inst.reward, 1e5, &mut replication_rng(seed, r)).unwrap();
        prop_assert_eq!(x.to_bits(), y.to_bits());
    }
}
