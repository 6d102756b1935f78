//! Property-based invariants of the geometric engine.

use num_traits::Zero;
use proptest::prelude::*;

use singlab_core::covolume::{covol, lelong_k, mixed_covol, unit_simplex};
use singlab_core::mulideal;
use singlab_core::polyhedron::NewtonPolyhedron;
use singlab_core::rat::{rat, rat_int, Rat};
use singlab_core::thresholds::{classify_mceq, lambda_lp, lambda_ray, lct, verify_chain};

/// A small positive rational: numerator 0..=limit, denominator 1..=3.
fn small_rat(limit: i64) -> impl Strategy<Value = Rat> {
    (0..=limit, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

/// Random diagram with a bounded complement: one axis generator per axis
/// plus a few interior points.
fn bounded_diagram(n: usize) -> impl Strategy<Value = NewtonPolyhedron> {
    let axis = proptest::collection::vec(1i64..=6, n);
    let interior = proptest::collection::vec(proptest::collection::vec(small_rat(6), n), 0..3);
    (axis, interior).prop_map(move |(axis, interior)| {
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        for (j, &r) in axis.iter().enumerate() {
            let mut e = vec![Rat::zero(); n];
            e[j] = rat_int(r);
            gens.push(e);
        }
        // The origin would absorb the whole orthant (lambda = 0, lct = inf);
        // interior points must be nonzero.
        gens.extend(interior.into_iter().filter(|g| !g.iter().all(Rat::is_zero)));
        NewtonPolyhedron::from_generators(n, gens).expect("valid diagram")
    })
}

/// Random diagram, possibly with an unbounded complement (no axis points
/// guaranteed); at least one generator.
fn any_diagram(n: usize) -> impl Strategy<Value = NewtonPolyhedron> {
    proptest::collection::vec(proptest::collection::vec(small_rat(5), n), 1..4).prop_filter_map(
        "needs a nonzero generator",
        move |gens| {
            if gens.iter().all(|g| g.iter().all(Rat::is_zero)) {
                return None;
            }
            NewtonPolyhedron::from_generators(n, gens).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Appending a point already inside the region leaves every invariant
    /// unchanged (pruning is sound).
    #[test]
    fn pruning_preserves_the_region(p in bounded_diagram(2), w in small_rat(3)) {
        let mut gens = p.generators().to_vec();
        // Midpoint of two generators pushed up the orthant stays inside.
        let a = &gens[0];
        let b = gens.last().unwrap();
        let mid: Vec<Rat> = a.iter().zip(b).map(|(x, y)| (x + y) / rat_int(2) + &w).collect();
        gens.push(mid);
        let q = NewtonPolyhedron::from_generators(2, gens).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(lambda_lp(&q).unwrap(), lambda_lp(&p).unwrap());
        prop_assert_eq!(covol(&q).unwrap(), covol(&p).unwrap());
    }

    /// The two lambda formulations agree exactly.
    #[test]
    fn lambda_lp_equals_lambda_ray(p in (2usize..=4).prop_flat_map(any_diagram)) {
        prop_assert_eq!(lambda_lp(&p).unwrap(), lambda_ray(&p).unwrap());
    }

    /// Same agreement on the bounded corpus, any dimension in range.
    #[test]
    fn lambda_agreement_bounded(p in (2usize..=4).prop_flat_map(bounded_diagram)) {
        prop_assert_eq!(lambda_lp(&p).unwrap(), lambda_ray(&p).unwrap());
    }

    /// Skoda and the generalized chain are theorems: verify_chain must
    /// return a report (it aborts internally on any violation).
    #[test]
    fn chains_never_violated(p in (2usize..=3).prop_flat_map(bounded_diagram)) {
        let report = verify_chain(&p).unwrap();
        prop_assert_eq!(report.lelong.len(), report.codim_l);
        prop_assert!(report.skoda.lower_holds && report.skoda.upper_holds);
    }

    /// Mixed covolume: diagonal collapse and symmetry.
    #[test]
    fn mixed_covol_diagonal_and_symmetric(
        a in bounded_diagram(2),
        b in bounded_diagram(2),
    ) {
        prop_assert_eq!(mixed_covol(&[&a, &a]).unwrap(), covol(&a).unwrap());
        prop_assert_eq!(
            mixed_covol(&[&a, &b]).unwrap(),
            mixed_covol(&[&b, &a]).unwrap()
        );
    }

    /// Mixed covolume is Minkowski-linear in each slot.
    #[test]
    fn mixed_covol_minkowski_linear(
        a in bounded_diagram(2),
        b in bounded_diagram(2),
        c in bounded_diagram(2),
    ) {
        let ab = a.minkowski_sum(&b).unwrap();
        let lhs = mixed_covol(&[&ab, &c]).unwrap();
        let rhs = mixed_covol(&[&a, &c]).unwrap() + mixed_covol(&[&b, &c]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// covol scales with degree n under dilation.
    #[test]
    fn covol_degree_n_scaling(p in bounded_diagram(3), c in 1i64..=4) {
        let scaled = p.scale(&rat_int(c)).unwrap();
        let expected = covol(&p).unwrap() * rat_int(c * c * c);
        prop_assert_eq!(covol(&scaled).unwrap(), expected);
    }

    /// Diagrams of the form B * Delta_J classify exactly; the classifier
    /// pairs with Skoda lower equality exactly when J is everything.
    #[test]
    fn mceq_classifier_constructive(
        n in 2usize..=4,
        b in (1i64..=5, 1i64..=3).prop_map(|(p, q)| rat(p, q)),
        mask in 1u32..15,
    ) {
        let j_set: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        prop_assume!(!j_set.is_empty());
        let gens: Vec<Vec<Rat>> = j_set
            .iter()
            .map(|&j| {
                let mut e = vec![Rat::zero(); n];
                e[j] = b.clone();
                e
            })
            .collect();
        let p = NewtonPolyhedron::from_generators(n, gens).unwrap();
        let (got_b, got_j) = classify_mceq(&p).expect("B*Delta_J must classify");
        prop_assert_eq!(got_b, b);
        let expect_j: Vec<usize> = j_set.iter().map(|j| j + 1).collect();
        prop_assert_eq!(got_j, expect_j);
    }

    /// Perturbing one generator off the common scale breaks the class.
    #[test]
    fn mceq_classifier_rejects_perturbations(n in 2usize..=3, b in 2i64..=5) {
        let mut gens: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                let mut e = vec![Rat::zero(); n];
                e[j] = rat_int(b);
                e
            })
            .collect();
        gens[0][0] += rat(1, 2);
        let p = NewtonPolyhedron::from_generators(n, gens).unwrap();
        prop_assert_eq!(classify_mceq(&p), None);
    }

    /// Multiplier ideal membership is upward closed and antitone in the
    /// scale c.
    #[test]
    fn mulideal_membership_monotone(
        p in bounded_diagram(2),
        alpha in proptest::collection::vec(0u64..4, 2),
        bump in 0usize..2,
    ) {
        let c_small = rat(1, 2);
        let c_big = rat_int(2);
        if mulideal::member(&p, &alpha, &c_big).unwrap() {
            // Larger exponents stay members.
            let mut up = alpha.clone();
            up[bump] += 1;
            prop_assert!(mulideal::member(&p, &up, &c_big).unwrap());
            // Shrinking the scale enlarges the ideal.
            prop_assert!(mulideal::member(&p, &alpha, &c_small).unwrap());
        }
    }

    /// Every minimal generator is a member and no generator dominates
    /// another.
    #[test]
    fn mulideal_generators_are_minimal_members(p in bounded_diagram(2)) {
        let c = rat_int(1);
        let gens = mulideal::generators(&p, &c).unwrap();
        let rows: Vec<Vec<u64>> = gens
            .exponents
            .iter()
            .map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect())
            .collect();
        for a in &rows {
            prop_assert!(mulideal::member(&p, a, &c).unwrap());
        }
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                if i != j {
                    prop_assert!(!a.iter().zip(b).all(|(x, y)| x <= y));
                }
            }
        }
    }

    /// Dilating the diagram by c multiplies lambda by c, so lct divides.
    #[test]
    fn lct_scales_inversely(p in bounded_diagram(2), c in (1i64..=5, 1i64..=3)) {
        let c = rat(c.0, c.1);
        let base = lct(&p).unwrap().expect("bounded diagram has finite lct");
        let scaled = lct(&p.scale(&c).unwrap()).unwrap().unwrap();
        prop_assert_eq!(scaled, base / c);
    }

    /// L_1 equals the minimal l^1-norm of the generators (closed form).
    #[test]
    fn lelong_1_closed_form(p in (2usize..=3).prop_flat_map(any_diagram)) {
        let expected = p
            .generators()
            .iter()
            .map(|g| g.iter().sum::<Rat>())
            .min()
            .unwrap();
        prop_assert_eq!(lelong_k(&p, 1).unwrap(), expected);
    }

    /// Truncation only adds axis points: the truncated diagram contains
    /// every original generator, and L_k(Delta) stays 1 at full scale.
    #[test]
    fn truncation_contains_generators(p in any_diagram(2), r in 4i64..=8) {
        let t = p.truncate(&rat_int(r)).unwrap();
        prop_assert!(t.is_bounded_complement());
        for g in p.generators() {
            prop_assert!(t.contains(g).unwrap());
        }
    }
}

#[test]
fn lelong_of_corner_is_one_for_all_k() {
    for n in 2..=4 {
        let d = unit_simplex(n);
        for k in 1..=n {
            assert_eq!(lelong_k(&d, k).unwrap(), rat_int(1));
        }
    }
}
