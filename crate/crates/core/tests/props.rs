//! Property tests: structural identities that must hold across the parameter
//! space, not just at frozen reference points.

use proptest::prelude::*;
use sqznum::cohen_dist::cohen_closed_form;
use sqznum::compare::{compare, last_maximum};
use sqznum::distribution::{Distribution, Method};
use sqznum::exact_dist::{
    exact_amplitude, exact_amplitude_raw, exact_amplitudes, exact_distribution,
    exact_distribution_recurrence,
};
use sqznum::special_fn::{gauss_hermite_rule, hermite_function, integrate_adaptive, laguerre};
use sqznum::states::SqueezedNumberState;
use sqznum::wkb_engine::WkbState;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // the rule integrates e^{-x^2} exactly and its nodes come sorted and
    // antisymmetric at every order
    #[test]
    fn quadrature_rule_shape(order in 1usize..=256) {
        let rule = gauss_hermite_rule::<f64>(order).unwrap();
        prop_assert_eq!(rule.nodes.len(), order);
        let total: f64 = rule.weights.iter().sum();
        prop_assert!(rel(total, std::f64::consts::PI.sqrt()) < 1e-12);
        for i in 0..order {
            prop_assert!(rule.weights[i] > 0.0);
            prop_assert_eq!(rule.nodes[i], -rule.nodes[order - 1 - i]);
            if i > 0 {
                prop_assert!(rule.nodes[i] > rule.nodes[i - 1]);
            }
        }
    }

    // normalized Hermite functions are orthonormal under the rule once the
    // Gaussian is restored (finite here because the order stays moderate)
    #[test]
    fn hermite_orthonormality(i in 0usize..=40, j in 0usize..=40) {
        let rule = gauss_hermite_rule::<f64>(128).unwrap();
        let mut acc = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * (x * x).exp() * hermite_function(i, x) * hermite_function(j, x);
        }
        let expect = if i == j { 1.0 } else { 0.0 };
        prop_assert!((acc - expect).abs() < 1e-10, "i={i} j={j} acc={acc}");
    }

    // global amplitude bound: no normalized Hermite function anywhere beats
    // the ground state's peak by much (the true bound is pi^{-1/4})
    #[test]
    fn hermite_function_bounded(n in 0usize..=500, x in -50.0f64..50.0) {
        prop_assert!(hermite_function(n, x).abs() < 0.9);
    }

    #[test]
    fn laguerre_at_zero_is_one(n in 0usize..=300) {
        prop_assert_eq!(laguerre(n, 0.0), 1.0);
    }

    // wavefunction parity is exact in bits, and r = 0 reduces to the bare
    // Hermite function with no arithmetic detour
    #[test]
    fn position_wavefunction_parity_and_limit(
        n in 0usize..=60,
        r in -1.5f64..1.5,
        x in 0.01f64..8.0,
    ) {
        let state = SqueezedNumberState::new(n, r);
        let plus = state.psi_position(x);
        let minus = state.psi_position(-x);
        let expected = if n % 2 == 0 { plus } else { -plus };
        prop_assert_eq!(minus.to_bits(), expected.to_bits());

        let bare = SqueezedNumberState::new(n, 0.0);
        prop_assert_eq!(bare.psi_position(x).to_bits(), hermite_function(n, x).to_bits());
    }

    // the momentum wavefunction is the position wavefunction of the
    // oppositely squeezed state, exactly
    #[test]
    fn momentum_wavefunction_matches_mirror(
        n in 0usize..=60,
        r in -1.5f64..1.5,
        p in -8.0f64..8.0,
    ) {
        let state = SqueezedNumberState::new(n, r);
        let mirror = SqueezedNumberState::new(n, -r);
        prop_assert_eq!(state.psi_momentum(p).to_bits(), mirror.psi_position(p).to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // classical energy conservation: p(x)^2 + e^{4r} x^2 = e^{4r} eps^2
    #[test]
    fn classical_momentum_energy(n in 0usize..=80, r in -1.0f64..2.0, frac in 0.0f64..0.999) {
        let state = WkbState::new(n, r);
        let x = state.epsilon * frac;
        let p = state.classical_momentum(x).unwrap();
        let e4r = (4.0 * r).exp();
        let energy = p * p + e4r * x * x;
        prop_assert!(rel(energy, e4r * state.epsilon * state.epsilon) < 1e-12);
    }

    // squeezing only rescales the action's argument: S_r(e^{-r} y) = S_0(y)
    #[test]
    fn action_scaling(n in 0usize..=60, r in -1.0f64..2.0, frac in -0.999f64..0.999) {
        let bare = WkbState::new(n, 0.0);
        let squeezed = WkbState::new(n, r);
        let y = bare.epsilon * frac;
        let s0 = bare.action(y).unwrap();
        let sr = squeezed.action((-r).exp() * y).unwrap();
        prop_assert!((sr - s0).abs() < 1e-10 * s0.abs().max(1.0));
    }

    // the closed-form action equals the defining momentum integral
    #[test]
    fn action_matches_momentum_integral(n in 0usize..=30, r in -0.5f64..1.5, frac in 0.0f64..0.95) {
        let state = WkbState::new(n, r);
        let x = state.epsilon * frac;
        let closed = state.action(x).unwrap();
        let numeric = integrate_adaptive(
            |t: f64| state.classical_momentum(t).unwrap_or(0.0),
            x,
            state.epsilon,
            1e-12,
        ).unwrap();
        prop_assert!((closed - numeric).abs() < 1e-8 * closed.abs().max(1e-3));
    }

    // semiclassical wavefunction parity matches the state's parity
    #[test]
    fn wkb_wavefunction_reflection(n in 0usize..=60, r in -1.0f64..2.0, frac in 0.001f64..0.9) {
        let state = WkbState::new(n, r);
        let x = state.epsilon * frac;
        let plus = state.wkb_wavefunction(x).unwrap();
        let minus = state.wkb_wavefunction(-x).unwrap();
        let expected = if n % 2 == 0 { plus } else { -plus };
        prop_assert!((minus - expected).abs() < 1e-10 * plus.abs().max(1e-6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // the two closed-form ground-state identities, from the Gaussian overlap
    // integral done by hand: W(0,0,r) = sech(r)^{1/2}, W(1,1,r) = sech(r)^{3/2}
    #[test]
    fn ground_state_overlap_closed_form(r in 0.05f64..2.5) {
        let sech = 1.0 / r.cosh();
        prop_assert!(rel(exact_amplitude(0, 0, r).unwrap(), sech.sqrt()) < 1e-12);
        prop_assert!(rel(exact_amplitude(1, 1, r).unwrap(), sech.powf(1.5)) < 1e-12);
    }

    // odd m - n annihilates exactly, and the raw quadrature agrees to its
    // cancellation floor
    #[test]
    fn parity_annihilation(m in 0usize..=500, n in 0usize..=40, r in 0.1f64..2.0) {
        let m = if (m + n) % 2 == 0 { m + 1 } else { m };
        prop_assert_eq!(exact_amplitude(m, n, r).unwrap(), 0.0);
        if m + n <= 200 {
            prop_assert!(exact_amplitude_raw(m, n, r).unwrap().abs() < 1e-13);
        }
    }

    // transposing the indices mirrors the squeezing direction
    #[test]
    fn amplitude_transpose_symmetry(m in 0usize..=40, n in 0usize..=40, r in 0.05f64..2.0) {
        let w1 = exact_amplitude(m, n, r).unwrap();
        let w2 = exact_amplitude(n, m, -r).unwrap();
        prop_assert!((w1 - w2).abs() < 1e-10 * w1.abs().max(1e-14));
    }

    // the batch evaluator and the single-entry evaluator share values
    #[test]
    fn batch_matches_singles(n in 0usize..=12, r in 0.1f64..1.8, m_max in 10usize..=60) {
        let batch = exact_amplitudes(n, r, m_max).unwrap();
        for m in (n % 2..=m_max).step_by(17) {
            let single = exact_amplitude(m, n, r).unwrap();
            prop_assert!((batch[m] - single).abs() < 1e-12 * single.abs().max(1e-15));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // distributions are probability-like: unflagged entries live in [0, 1]
    // and exact partial sums never exceed 1
    #[test]
    fn distribution_invariants(n in 0usize..=8, r in 0.0f64..1.6, m_max in 5usize..=80) {
        let dists = [
            exact_distribution::<f64>(n, r, m_max).unwrap(),
            exact_distribution_recurrence::<f64>(n, r, m_max).unwrap(),
            sqznum::cohen_dist::cohen_distribution::<f64>(n, r, m_max),
        ];
        for d in &dists {
            for m in 0..=m_max {
                if d.flags[m].is_none() {
                    prop_assert!(d.values[m] >= 0.0 && d.values[m] <= 1.0);
                }
            }
        }
        prop_assert!(dists[0].sum() <= 1.0 + 1e-9);
        prop_assert!(dists[1].sum() <= 1.0 + 1e-9);
    }

    // total variation is symmetric to the bit
    #[test]
    fn total_variation_symmetry(n in 0usize..=6, r in 0.2f64..1.4) {
        let a = exact_distribution::<f64>(n, r, 50).unwrap();
        let b = sqznum::cohen_dist::cohen_distribution::<f64>(n, r, 50);
        let ab = compare(&a, &b).unwrap().total_variation;
        let ba = compare(&b, &a).unwrap().total_variation;
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
    }

    // the last-maximum location ignores overall scale
    #[test]
    fn last_maximum_scale_invariance(
        raw in proptest::collection::vec(1e-6f64..1.0, 4..40),
        scale in 0.25f64..4.0,
    ) {
        let mut values = Vec::with_capacity(raw.len() * 2);
        for v in &raw {
            values.push(*v);
            values.push(0.0);
        }
        let d = Distribution {
            n: 0,
            r: 1.0,
            method: Method::ExactQuadrature,
            values: values.clone(),
            flags: vec![None; values.len()],
            notes: vec![],
        };
        let scaled = Distribution {
            values: values.iter().map(|v| v * scale).collect(),
            flags: d.flags.clone(),
            notes: vec![],
            ..d.clone()
        };
        match (last_maximum(&d), last_maximum(&scaled)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "divergent outcomes {a:?} vs {b:?}"),
        }
    }

    // one Wigner marginal identity at a random probe: integrating out p
    // recovers the position density
    #[test]
    fn wigner_position_marginal(n in 0usize..=10, r in 0.0f64..2.5, x in -2.0f64..2.0) {
        let state = SqueezedNumberState::new(n, r);
        // momentum support stretches as e^{+r}; the +6 puts the cutoff deep
        // into the Gaussian tail in the stretched variable
        let half_width = r.exp() * (((2 * n + 1) as f64).sqrt() + 6.0);
        let marginal = integrate_adaptive(
            |p: f64| state.wigner(x, p),
            -half_width,
            half_width,
            1e-10,
        ).unwrap();
        let psi = state.psi_position(x);
        prop_assert!((marginal - psi * psi).abs() < 1e-8);
    }
}

// deterministic structural checks that belong with the properties

// the closed-form estimate's even-step zeros sit exactly where the momentum
// wavefunction changes sign; each sign change pins a near-zero within one
// allowed step
#[test]
fn cohen_zeros_align_with_momentum_nodes() {
    for &(n, r) in &[(4usize, 1.0f64), (5, 2.0), (7, 1.5)] {
        let m_top = (((2 * n + 1) as f64 * (2.0 * r).exp() - 1.0) / 2.0).ceil() as usize + 40;
        let start = n % 2;
        let y = |m: usize| (-r).exp() * ((2 * m + 1) as f64).sqrt();
        let mut checked = 0;
        let mut m = start;
        while m + 2 <= m_top {
            let a = hermite_function(n, y(m));
            let b = hermite_function(n, y(m + 2));
            if a != 0.0 && b != 0.0 && a.signum() != b.signum() {
                // a node lies between: the closed form must dip here relative
                // to the flanking allowed entries
                let dip = cohen_closed_form(m, n, r).min(cohen_closed_form(m + 2, n, r));
                let flank = if m >= 2 {
                    cohen_closed_form(m - 2, n, r).max(cohen_closed_form(m + 4, n, r))
                } else {
                    cohen_closed_form(m + 4, n, r)
                };
                assert!(
                    dip < flank,
                    "no dip at sign change near m={m}, n={n}, r={r}"
                );
                checked += 1;
            }
            m += 2;
        }
        assert_eq!(
            checked,
            n / 2,
            "expected one sign change per positive momentum node"
        );
    }
}

// at r = 0 the semiclassical wavefunction tracks the exact one better and
// better as n grows (measured away from the turning points)
#[test]
fn wkb_accuracy_improves_with_n() {
    let mut previous = f64::INFINITY;
    for &n in &[5usize, 10, 20, 40] {
        let state = WkbState::new(n, 0.0);
        let mut num = 0.0;
        let mut den = 0.0;
        let samples = 2000;
        for i in 0..samples {
            let x = state.epsilon * 0.85 * ((i as f64 + 0.5) / samples as f64);
            let wkb = state.wkb_wavefunction(x).unwrap();
            let exact = hermite_function(n, x);
            num += (wkb - exact) * (wkb - exact);
            den += exact * exact;
        }
        let l2 = (num / den).sqrt();
        assert!(
            l2 < previous,
            "L2 deviation grew at n={n}: {l2} vs {previous}"
        );
        previous = l2;
    }
}
