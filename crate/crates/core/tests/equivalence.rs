use lotdp_core::dp::{solve_multi_with, MultiStrategy};
use lotdp_core::gen::{generate, GenConfig};
use lotdp_core::oracle::{grid_oracle, structural_oracle};
use lotdp_core::{
    solution_cost, solve, validate_instance, Instance, Mode, Rational, SolveOptions, Supplier,
};
use proptest::prelude::*;

fn supplier() -> impl Strategy<Value = Supplier> {
    (0i64..=10, 0i64..=10, 1i64..=10, 0i64..=6)
        .prop_map(|(a, b, m, extra)| Supplier::new(a, b, m, m + extra))
}

fn small_batch_supplier() -> impl Strategy<Value = Supplier> {
    (0i64..=10, 0i64..=10, 1i64..=3, 0i64..=9)
        .prop_map(|(a, b, m, extra)| Supplier::new(a, b, m, m + extra))
}

fn instance(max_n: usize, mode: Mode) -> impl Strategy<Value = Instance> {
    instance_of(supplier(), max_n, mode)
}

fn instance_of(
    supplier: impl Strategy<Value = Supplier>,
    max_n: usize,
    mode: Mode,
) -> impl Strategy<Value = Instance> {
    (
        prop::collection::vec(supplier, 1..=max_n),
        1i128..=4,
        1i128..=3,
        1i64..=3,
        0u32..=100,
    )
        .prop_map(move |(suppliers, ln, ld, c, frac)| {
            let cap: i64 = suppliers.iter().map(|s| s.max_total).sum();
            let demand = (cap * frac as i64) / 100;
            Instance::new(suppliers, demand, Rational::new(ln, ld), c, mode)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn dp_matches_structural_oracle(inst in instance(4, Mode::Single)) {
        let rep = solve(&inst).unwrap();
        let oracle = structural_oracle(&inst).unwrap();
        prop_assert_eq!(rep.solution.objective, oracle.objective);
        prop_assert_eq!(solution_cost(&inst, &rep.solution).unwrap(), rep.solution.objective);
        prop_assert!(rep.solution.total_volume() >= Rational::from(inst.demand));
    }

    #[test]
    fn oracles_agree(inst in instance(2, Mode::Single)) {
        let a = structural_oracle(&inst).unwrap();
        let b = grid_oracle(&inst, inst.n()).unwrap();
        prop_assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn multi_strategies_agree(inst in instance(3, Mode::Multi)) {
        let opts = SolveOptions::default();
        let a = solve_multi_with(&inst, MultiStrategy::Aggregated, &opts).unwrap();
        let d = solve_multi_with(&inst, MultiStrategy::Duplication, &opts).unwrap();
        prop_assert_eq!(a.solution.objective, d.solution.objective);

        // more batches can only help
        let single = solve(&inst.clone().with_mode(Mode::Single)).unwrap();
        prop_assert!(a.solution.objective <= single.solution.objective);
    }

    #[test]
    fn multi_strategies_agree_with_many_batches(
        inst in instance_of(small_batch_supplier(), 3, Mode::Multi)
    ) {
        let opts = SolveOptions::default();
        let a = solve_multi_with(&inst, MultiStrategy::Aggregated, &opts).unwrap();
        let d = solve_multi_with(&inst, MultiStrategy::Duplication, &opts).unwrap();
        prop_assert_eq!(a.solution.objective, d.solution.objective);
    }
}

#[test]
fn generated_instances_validate_and_round_trip() {
    for seed in 0..100 {
        let cfg = GenConfig {
            n: 1 + seed as usize % 5,
            lambda_max: 3,
            ..GenConfig::default()
        };
        let inst = generate(&cfg, seed).unwrap();
        assert!(validate_instance(&inst).is_ok(), "seed {seed}");
        let text = lotdp_core::io::instance_to_json(&inst);
        assert_eq!(lotdp_core::io::parse_instance(&text).unwrap(), inst);
    }
    let bad = generate(
        &GenConfig {
            infeasible: true,
            ..GenConfig::default()
        },
        3,
    )
    .unwrap();
    assert!(validate_instance(&bad).is_infeasible_demand());
}
