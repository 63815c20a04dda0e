mod common;

use common::{random_pair, to_f64_law, vertex_oracle};
use mixcenter::discrete_mix::{
    enumerate_centers, exchangeable_permute, lp_feasible_center, FeasibilityOptions, Verdict,
};
use mixcenter::distributions::FiniteDiscrete;
use mixcenter::rng::substream;
use proptest::prelude::*;

fn marginals(inst: &common::PairInstance) -> Vec<FiniteDiscrete> {
    vec![
        FiniteDiscrete::new(to_f64_law(&inst.a)).unwrap(),
        FiniteDiscrete::new(to_f64_law(&inst.b)).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplex_agrees_with_vertex_enumeration(seed in any::<u64>()) {
        let inst = random_pair(&mut substream(seed, "pair", 0));
        let ms = marginals(&inst);
        let expected = vertex_oracle(&inst);
        for exact in [false, true] {
            let opts = FeasibilityOptions { exact, ..Default::default() };
            let v = lp_feasible_center(&ms, inst.c as f64, opts).unwrap();
            prop_assert_eq!(v.is_feasible(), expected, "{:?} exact={}", inst, exact);
            match v {
                Verdict::Feasible { coupling, .. } => {
                    prop_assert!(coupling.certify(&ms, inst.c as f64, 1e-9, 1e-10).is_ok());
                    prop_assert!(coupling.weights.iter().all(|&w| w >= 0.0));
                }
                Verdict::Infeasible { certificate } => prop_assert!(certificate.is_valid(1e-9)),
                Verdict::Borderline { .. } => prop_assert!(false, "borderline on an exact instance"),
            }
        }
    }

    #[test]
    fn enumerated_centers_lie_within_the_bounds(seed in any::<u64>()) {
        let inst = random_pair(&mut substream(seed, "pair", 1));
        let ms = marginals(&inst);
        let set = enumerate_centers(&ms, FeasibilityOptions::default()).unwrap();
        prop_assert_eq!(set.centers.len(), set.certificates.len());
        for (&c, cert) in set.centers.iter().zip(&set.certificates) {
            prop_assert!(c >= set.bounds.0 - 1e-9 && c <= set.bounds.1 + 1e-9);
            prop_assert!(cert.certify(&ms, c, 1e-9, 1e-10).is_ok());
        }
        // a finite center equals the sum of the means
        let mean: f64 = ms.iter().map(|m| m.mean()).sum();
        prop_assert!(set.centers.iter().all(|c| (c - mean).abs() < 1e-9));
    }

    #[test]
    fn symmetrization_keeps_sums_and_equalizes_marginals(seed in any::<u64>()) {
        let inst = random_pair(&mut substream(seed, "pair", 2));
        let ms = marginals(&inst);
        if let Verdict::Feasible { coupling, .. } = lp_feasible_center(&ms, inst.c as f64, FeasibilityOptions::default()).unwrap() {
            let s = exchangeable_permute(&coupling).unwrap();
            prop_assert!(s.max_sum_deviation(inst.c as f64) <= 1e-9);
            let m0 = s.marginal(0);
            let m1 = s.marginal(1);
            prop_assert_eq!(m0.len(), m1.len());
            for (a, b) in m0.iter().zip(&m1) {
                prop_assert_eq!(a.0, b.0);
                prop_assert!((a.1 - b.1).abs() < 1e-15);
            }
        }
    }
}
