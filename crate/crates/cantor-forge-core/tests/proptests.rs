//! Randomized structural properties of the core: refinement nesting,
//! affine invariance of thickness, and monotonicity of the relaxed
//! thickness in its tolerance parameter.

use cantor_forge_core::thickness::{eps_thickness_pure, thickness};
use cantor_forge_core::{CantorSpec, Rational};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random spec with 2 or 3 children: integer child lengths and gap lengths
/// normalized so the first child starts at 0 and the last ends at 1.
fn spec_strategy() -> impl Strategy<Value = CantorSpec> {
    (2usize..=3, proptest::collection::vec(1i64..12, 5)).prop_map(|(n, parts)| {
        let lens = &parts[..n];
        let gaps = &parts[n..2 * n - 1];
        let total: i64 = lens.iter().sum::<i64>() + gaps.iter().sum::<i64>();
        let mut children = Vec::new();
        let mut off = 0i64;
        for i in 0..n {
            children.push((r(off, total), r(lens[i], total)));
            off += lens[i];
            if i < n - 1 {
                off += gaps[i];
            }
        }
        CantorSpec::new((r(0, 1), r(1, 1)), children).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refinement_is_nested_and_ordered(spec in spec_strategy(), depth in 1u32..4) {
        let coarse = spec.refine(depth - 1).unwrap();
        let fine = spec.refine(depth).unwrap();
        for w in fine.pieces.windows(2) {
            prop_assert!(w[0].1 < w[1].0, "pieces must be ordered with positive gaps");
        }
        for piece in &fine.pieces {
            prop_assert!(
                coarse.pieces.iter().any(|c| c.0 <= piece.0 && piece.1 <= c.1),
                "every piece must be nested in a coarser piece"
            );
        }
        let total = |a: &cantor_forge_core::cantor::Approximant| -> Rational {
            a.pieces.iter().map(|(lo, hi)| hi - lo).sum()
        };
        prop_assert!(total(&fine) < total(&coarse));
    }

    #[test]
    fn thickness_is_affine_invariant(
        spec in spec_strategy(),
        scale in 1i64..20,
        shift in -10i64..10,
    ) {
        let moved = spec.affine_image(&r(scale, 3), &r(shift, 7)).unwrap();
        let a = thickness(&spec).unwrap();
        let b = thickness(&moved).unwrap();
        prop_assert_eq!(a.value(), b.value());
    }

    #[test]
    fn relaxed_thickness_is_monotone_in_eps(
        spec in spec_strategy(),
        e1 in 0i64..40,
        e2 in 0i64..40,
    ) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let t_lo = eps_thickness_pure(&spec, &r(lo, 41)).unwrap();
        let t_hi = eps_thickness_pure(&spec, &r(hi, 41)).unwrap();
        prop_assert!(t_hi <= t_lo, "larger tolerance cuts bridges shorter");
        let tau = thickness(&spec).unwrap();
        prop_assert!(&t_lo <= tau.value().unwrap());
        prop_assert_eq!(&eps_thickness_pure(&spec, &r(0, 1)).unwrap(), tau.value().unwrap());
    }
}
