//! Property tests for the module invariants: canonical-form laws of the
//! subspace arithmetic, symplectic orthogonal involution, monoid laws of the
//! isomorphism classes, and closure of relation composition.

use proptest::prelude::*;

use gslrel::grouprep::GroupAction;
use gslrel::linalg::{Mat, Rat, Subspace};
use gslrel::sample::{ModelSpec, SampledSpace, Sampler};
use gslrel::symplectic::SympGSpace;
use gslrel::CanRel;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| gslrel::linalg::ratq(n, d))
}

fn mat_strategy(max_rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    (0..=max_rows).prop_flat_map(move |rows| {
        proptest::collection::vec(rat_strategy(), rows * cols)
            .prop_map(move |data| Mat::new(rows, cols, data))
    })
}

fn subspace_strategy(ambient: usize) -> impl Strategy<Value = Subspace> {
    mat_strategy(ambient + 1, ambient).prop_map(move |m| Subspace::from_spanning_rows(ambient, &m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(m in mat_strategy(4, 4)) {
        let once = m.rref_canonical();
        prop_assert_eq!(once.rref_canonical(), once);
    }

    #[test]
    fn dimension_formula(a in subspace_strategy(4), b in subspace_strategy(4)) {
        let sum = a.sum(&b).unwrap();
        let inter = a.intersect(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), sum.dim() + inter.dim());
        prop_assert!(sum.contains(&a) && sum.contains(&b));
        prop_assert!(a.contains(&inter) && b.contains(&inter));
    }

    #[test]
    fn complement_is_exact(inner in subspace_strategy(4), extra in subspace_strategy(4)) {
        let outer = inner.sum(&extra).unwrap();
        let w = Subspace::complement_extend(&inner, &outer).unwrap();
        prop_assert!(inner.intersect(&w).unwrap().is_zero());
        prop_assert_eq!(inner.sum(&w).unwrap(), outer);
    }

    #[test]
    fn subspace_round_trips_through_spanning_sets(s in subspace_strategy(5), shuffle in any::<u64>()) {
        // rebuild from doubled and reordered spanning rows
        let b = s.basis();
        let mut rows = b.clone().vstack(b);
        if rows.rows() > 1 && shuffle % 2 == 0 {
            rows = rows.select_rows(1..rows.rows()).vstack(&rows.select_rows(0..1));
        }
        prop_assert_eq!(Subspace::from_spanning_rows(s.ambient_dim(), &rows), s);
    }

    #[test]
    fn kernel_annihilates(m in mat_strategy(3, 4)) {
        let k = Subspace::kernel(&m);
        prop_assert_eq!(k.dim(), 4 - m.rank());
        for r in 0..k.dim() {
            let v: Vec<Rat> = k.basis().row(r).to_vec();
            prop_assert!(m.apply(&v).iter().all(num::Zero::is_zero));
        }
    }

    #[test]
    fn symplectic_orthogonal_is_involutive(s in subspace_strategy(4)) {
        let v = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let o = v.symp_orthogonal(&s).unwrap();
        prop_assert_eq!(s.dim() + o.dim(), 4);
        prop_assert_eq!(v.symp_orthogonal(&o).unwrap(), s);
    }
}

#[test]
fn dual_and_product_space_laws() {
    let mut s = Sampler::new(ModelSpec::Z4, 31, 0);
    let a = s.space(2);
    let b = s.space(2);
    let c = s.space(1);
    assert_eq!(a.space.dual().dual(), a.space);
    // block products associate on the nose: the reindexing map is the identity
    let left = a
        .space
        .product(&b.space)
        .unwrap()
        .product(&c.space)
        .unwrap();
    let right = a
        .space
        .product(&b.space.product(&c.space).unwrap())
        .unwrap();
    assert_eq!(left, right);
    // unit laws up to the identity reindexing
    let unit = SympGSpace::unit(a.space.action());
    assert_eq!(unit.product(&a.space).unwrap(), a.space);
    assert_eq!(a.space.product(&unit).unwrap(), a.space);
}

#[test]
fn orthogonal_of_invariant_is_invariant() {
    for model in [
        ModelSpec::Z2,
        ModelSpec::Z4,
        ModelSpec::S3,
        ModelSpec::Circle,
    ] {
        for trial in 0..6 {
            let mut s = Sampler::new(model, 37, trial);
            let sp = s.space(2);
            let sub = s.invariant_subspace(sp.space.action());
            let orth = sp.space.symp_orthogonal(&sub).unwrap();
            assert!(sp.space.action().is_invariant(&orth));
        }
    }
}

#[test]
fn iso_class_additive_and_conjugation_stable() {
    for model in [ModelSpec::Z2, ModelSpec::Z4, ModelSpec::S3] {
        for trial in 0..8 {
            let mut s = Sampler::new(model, 41, trial);
            let sp = s.space(2);
            let phi = s.symplectomorphism(&sp);
            let s1 = sp.lag0.map_by(&phi);
            let action1 = sp.space.action().restrict(&sp.lag1).unwrap();
            let sub1 = s.invariant_subspace(&action1);
            let s2 =
                Subspace::from_spanning_rows(sp.space.dim(), &sub1.basis().mul(sp.lag1.basis()))
                    .map_by(&phi);
            // s1 and s2 are invariant with zero intersection
            let action = sp.space.action();
            let total = s1.sum(&s2).unwrap();
            let lhs = action.iso_class(&total).unwrap();
            let rhs = action
                .iso_class(&s1)
                .unwrap()
                .add(&action.iso_class(&s2).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "additivity over invariant direct sums");

            // conjugation stability: map s1 through every group element
            if let GroupAction::Finite(f) = action {
                for g in f.mats() {
                    let moved = s1.map_by(g);
                    assert_eq!(
                        action.iso_class(&moved).unwrap(),
                        action.iso_class(&s1).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn class_monoid_is_commutative() {
    let mut s = Sampler::new(ModelSpec::S3, 43, 0);
    let (a, _) = s.class_with_witness(2);
    let (b, _) = s.class_with_witness(2);
    let (c, _) = s.class_with_witness(2);
    let zero = s.base().zero_class();
    assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
    assert_eq!(a.add(&zero).unwrap(), a);
    assert_eq!(
        a.add(&b).unwrap().add(&c).unwrap(),
        a.add(&b.add(&c).unwrap()).unwrap()
    );
}

#[test]
fn composition_and_products_stay_valid() {
    for model in [ModelSpec::Trivial, ModelSpec::Z2, ModelSpec::Circle] {
        for trial in 0..6 {
            let mut s = Sampler::new(model, 47, trial);
            let x = s.space(1);
            let y = s.space(1);
            let z = s.space(1);
            let f = s.relation(&x, &y);
            let g = s.relation(&y, &z);
            let composed = f.compose(&g).unwrap();
            // revalidate through the public constructor
            assert!(CanRel::new(
                composed.source().clone(),
                composed.target().clone(),
                composed.sub().clone()
            )
            .is_ok());
            let prod = f.product_rel(&g).unwrap();
            assert!(CanRel::new(
                prod.source().clone(),
                prod.target().clone(),
                prod.sub().clone()
            )
            .is_ok());
        }
    }
}

#[test]
fn compose_associativity_on_relations() {
    for model in [ModelSpec::Trivial, ModelSpec::S3, ModelSpec::Circle] {
        for trial in 0..8 {
            let mut s = Sampler::new(model, 53, trial);
            let spaces: Vec<SampledSpace> = (0..4).map(|_| s.space(1)).collect();
            let f = s.relation(&spaces[0], &spaces[1]);
            let g = s.relation(&spaces[1], &spaces[2]);
            let h = s.relation(&spaces[2], &spaces[3]);
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
