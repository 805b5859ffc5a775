mod common;

use luders::cli::format::{rational, sig12};
use luders::linalg::{inner, tensor, StateVector};
use luders::measurement::{born_distribution, collapse, sequence_distribution};
use luders::observables::{embed, observable_f, pauli, PauliAxis};
use luders::scenario::{parse_scenario, ErrorKind};
use luders::Config;
use num_complex::Complex64;
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let amps = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            StateVector::new(n, amps).unwrap().normalized().unwrap()
        })
}

fn axis() -> impl Strategy<Value = PauliAxis> {
    prop_oneof![Just(PauliAxis::X), Just(PauliAxis::Y), Just(PauliAxis::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_is_conjugate_symmetric(a in state(3), b in state(3)) {
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-14);
    }

    #[test]
    fn tensor_is_associative(a in state(1), b in state(2), c in state(2)) {
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-15);
    }

    #[test]
    fn born_probabilities_sum_to_one(psi in state(5), a in axis(), site in 1usize..=5) {
        let config = Config::default();
        let f = embed(&observable_f(), &[5, 3, 1, 2], 5).unwrap();
        for obs in [f, pauli(a, site, 5).unwrap()] {
            let d = born_distribution(&psi, &obs, &config).unwrap();
            prop_assert!((d.total() - 1.0).abs() < 1e-10);
            prop_assert!(d.entries.iter().all(|(_, p)| *p >= 0.0));
        }
    }

    #[test]
    fn repeated_measurement_is_certain(psi in state(4), pick in 0usize..3) {
        let config = Config::default();
        let f = observable_f();
        let d = born_distribution(&psi, &f, &config).unwrap();
        let (label, p) = &d.entries[pick];
        prop_assume!(*p > 1e-9);
        let post = collapse(&psi, &f, label[0], &config).unwrap().post_state;
        prop_assert!(born_distribution(&post, &f, &config).unwrap().prob_of(label[0]) >= 1.0 - 1e-10);
    }

    #[test]
    fn disjoint_measurements_commute(psi in state(3), a in axis(), b in axis()) {
        let config = Config::default();
        let (x, y) = (pauli(a, 1, 3).unwrap(), pauli(b, 3, 3).unwrap());
        let xy = sequence_distribution(&psi, &[&x, &y], &config).unwrap();
        let yx = sequence_distribution(&psi, &[&y, &x], &config).unwrap();
        for (label, p) in &xy.entries {
            prop_assert!((p - yx.prob(&[label[1], label[0]])).abs() < 1e-10);
        }
    }

    #[test]
    fn parser_round_trip(seed in any::<u64>()) {
        let text = common::gen_scenario(&mut common::rng(seed));
        match parse_scenario(&text) {
            Ok(first) => {
                let printed = first.to_string();
                let second = parse_scenario(&printed).unwrap();
                prop_assert!(first.equivalent(&second, 1e-10));
                prop_assert_eq!(printed, second.to_string());
            }
            Err(e) => prop_assert!(e.kind == ErrorKind::Semantic && e.message.contains("zero vector"), "{}", e),
        }
    }

    #[test]
    fn twelve_digit_printing_is_accurate(x in -1e6f64..1e6) {
        let back: f64 = sig12(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
    }

    #[test]
    fn small_fractions_are_recognized(q in 1u64..=144, p_frac in 0.0f64..1.0) {
        let p = (p_frac * q as f64).floor() as i64;
        let (num, den) = rational(p as f64 / q as f64).unwrap();
        prop_assert_eq!(num * q as i64, p * den as i64);
        prop_assert!(den <= q);
    }
}
