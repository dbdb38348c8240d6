//! The two normal-form constructions: the minimal hyper-Lagrangian
//! representative of a (shadow, excess) pair with optional stabilization,
//! and the equivariant block decomposition of a (V, L, I) triple into
//! standard dual pairs.

use crate::error::{Error, Result};
use crate::grouprep::{
    invariant_complement_within, invariant_lagrangian_complement, GroupAction, IsoClass,
};
use crate::linalg::{rat, Mat, Subspace};
use crate::relations::CanRel;
use crate::symplectic::{doubled_space, dual_basis_rows, standard_omega, SympGSpace};

use super::Word;

/// A hyper-Lagrangian subspace of X in reduction/coreduction form: an
/// invariant coisotropic C and an invariant Lagrangian L inside an
/// intermediate space Q, with shadow C∘L and excess [C ∩ L].
#[derive(Debug, Clone)]
pub struct HyperLagrangianForm {
    pub ambient: SympGSpace,
    pub intermediate: SympGSpace,
    pub coisotropic: Subspace,
    pub lagrangian: Subspace,
    pub reduction: CanRel,
    pub insertion: CanRel,
    pub shadow: CanRel,
    pub excess: IsoClass,
}

impl HyperLagrangianForm {
    /// The form as a two-factor word X <- Q <- 1.
    pub fn to_word(&self) -> Word {
        Word::new(vec![self.reduction.clone(), self.insertion.clone()])
            .expect("the two legs chain through Q")
    }
}

/// Builds a representative of the isomorphism class as a concrete action.
/// The trivial model and trivial characters are realized directly, circle
/// classes are realized as block rotations, and everything else needs an
/// explicit witness representation whose class is verified.
fn realize_class(
    model: &GroupAction,
    class: &IsoClass,
    witness: Option<&GroupAction>,
) -> Result<GroupAction> {
    if let Some(w) = witness {
        if !w.same_model(model) {
            return Err(Error::GroupModelMismatch);
        }
        if &w.class_of_whole() != class {
            return Err(Error::WitnessClassMismatch);
        }
        return Ok(w.clone());
    }
    match (model, class) {
        (GroupAction::Trivial { .. }, IsoClass::TrivialDim(d)) => Ok(GroupAction::trivial(*d)),
        (GroupAction::Finite(_), IsoClass::FiniteChar(chars)) => {
            // only the trivial character is realizable without a witness
            let dim = chars.first().cloned().unwrap_or_else(|| rat(0));
            if dim.denom() != &num::BigInt::from(1) || chars.iter().any(|c| c != &dim) {
                return Err(Error::UnrealizableClass);
            }
            let d = num::ToPrimitive::to_usize(dim.numer()).ok_or(Error::UnrealizableClass)?;
            Ok(model.trivial_rep_like(d))
        }
        (GroupAction::Circle(_), IsoClass::CircleWeights(mults)) => {
            let mut gen = Mat::zero(0, 0);
            for (&k, &mult) in mults {
                for _ in 0..mult {
                    if k == 0 {
                        gen = gen.block_diag(&Mat::zero(1, 1));
                    } else {
                        let mut rot = Mat::zero(2, 2);
                        rot[(0, 1)] = rat(-(k as i64));
                        rot[(1, 0)] = rat(k as i64);
                        gen = gen.block_diag(&rot);
                    }
                }
            }
            GroupAction::circle(gen)
        }
        _ => Err(Error::GroupModelMismatch),
    }
}

/// Normal form of a hyper-Lagrangian subspace with shadow Λ and excess K:
/// inside Q = X x (E ⊕ E*) x (Q^r ⊕ Q^r*), take C = X x E x Q^r and
/// L = Λ x E x Q^r*. Larger r gives larger but WW-equal representatives.
pub fn hyper_normal_form(
    x: &SympGSpace,
    lambda: &Subspace,
    class: &IsoClass,
    r: usize,
    witness: Option<&GroupAction>,
) -> Result<HyperLagrangianForm> {
    if !x.classify(lambda)?.lagrangian {
        return Err(Error::NotLagrangian);
    }
    if !x.action().is_invariant(lambda) {
        return Err(Error::NotInvariant);
    }
    if !class.same_model(&x.action().zero_class()) {
        return Err(Error::GroupModelMismatch);
    }
    let e = realize_class(x.action(), class, witness)?;
    let d = e.dim();
    let nx = x.dim();

    let ee = doubled_space(&e);
    let rr = SympGSpace::new(standard_omega(r), x.action().trivial_rep_like(2 * r))
        .expect("the stabilizer block is symplectic");
    let q_space = x.product(&ee)?.product(&rr)?;
    let q = q_space.dim();

    // coordinate offsets in Q: X | E | E* | R | R*
    let off_e = nx;
    let off_r = nx + 2 * d;
    let off_rstar = nx + 2 * d + r;

    let e_block = Subspace::full(d).embed_cols(q, off_e);
    let r_block = Subspace::full(r).embed_cols(q, off_r);
    let rstar_block = Subspace::full(r).embed_cols(q, off_rstar);
    let x_block = Subspace::full(nx).embed_cols(q, 0);

    let coisotropic = x_block.sum(&e_block)?.sum(&r_block)?;
    let lagrangian = lambda.embed_cols(q, 0).sum(&e_block)?.sum(&rstar_block)?;

    // reduction X <- Q: {(x, (x, e, 0, t, 0))}
    let mut red_rows = Mat::zero(nx + d + r, nx + q);
    for i in 0..nx {
        red_rows[(i, i)] = rat(1);
        red_rows[(i, nx + i)] = rat(1);
    }
    for i in 0..d {
        red_rows[(nx + i, nx + off_e + i)] = rat(1);
    }
    for i in 0..r {
        red_rows[(nx + d + i, nx + off_r + i)] = rat(1);
    }
    let reduction = CanRel::from_rows(x.clone(), q_space.clone(), &red_rows)?;
    let insertion = CanRel::lagrangian_insertion(&q_space, &lagrangian)?;

    let word = Word::new(vec![reduction.clone(), insertion.clone()])?;
    let shadow = word.shadow();
    let excess = word.excess();
    debug_assert_eq!(shadow.sub(), lambda);
    debug_assert_eq!(&excess, class);
    debug_assert!(q_space.classify(&coisotropic)?.coisotropic);
    debug_assert!(q_space.classify(&lagrangian)?.lagrangian);
    // the trajectory space of the two-leg word is C^omega ∩ L = (C + L)^omega
    debug_assert_eq!(
        q_space.action().iso_class(
            &q_space
                .symp_orthogonal(&coisotropic)?
                .intersect(&lagrangian)?
        )?,
        excess
    );

    Ok(HyperLagrangianForm {
        ambient: x.clone(),
        intermediate: q_space,
        coisotropic,
        lagrangian,
        reduction,
        insertion,
        shadow,
        excess,
    })
}

/// The six invariant blocks of the (V, L, I) decomposition, in model order.
#[derive(Debug, Clone)]
pub struct Lemma4Blocks {
    pub a: Subspace,
    pub a_star: Subspace,
    pub j_star: Subspace,
    pub j: Subspace,
    pub r_star: Subspace,
    pub r: Subspace,
}

/// Equivariant normal form of a triple (V, L, I): an exact symplectic,
/// equivariant change of basis onto a model space split into standard dual
/// pairs (A, A*), (J*, J), (R*, R) with A = I ∩ L, L = A ⊕ J* ⊕ R* and
/// I = A ⊕ J.
#[derive(Debug, Clone)]
pub struct Lemma4Form {
    /// Change of basis V -> model with transform^T · model_omega · transform = omega_V.
    pub transform: Mat,
    pub blocks: Lemma4Blocks,
    pub model_omega: Mat,
    /// Block-diagonal model action: restrictions on A, J*, R* and their
    /// contragredients on the dual blocks.
    pub model_action: GroupAction,
    /// (dim A, dim J, dim R).
    pub dims: (usize, usize, usize),
}

/// Classifying data of the normal form: block dimensions together with the
/// isomorphism classes of A, J and R. Triples with equal iso-class data
/// produce equal signatures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma4Signature {
    pub dims: (usize, usize, usize),
    pub classes: (IsoClass, IsoClass, IsoClass),
    pub model_omega: Mat,
}

impl Lemma4Form {
    pub fn signature(&self, action: &GroupAction) -> Lemma4Signature {
        Lemma4Signature {
            dims: self.dims,
            classes: (
                action
                    .iso_class(&self.blocks.a)
                    .expect("block is invariant"),
                action
                    .iso_class(&self.blocks.j)
                    .expect("block is invariant"),
                action
                    .iso_class(&self.blocks.r)
                    .expect("block is invariant"),
            ),
            model_omega: self.model_omega.clone(),
        }
    }
}

pub fn lemma4_normal_form(v: &SympGSpace, l: &Subspace, i: &Subspace) -> Result<Lemma4Form> {
    let action = v.action();
    if matches!(action, GroupAction::Circle(_)) {
        return Err(Error::UnsupportedGroupModel);
    }
    if !action.is_invariant(l) || !action.is_invariant(i) {
        return Err(Error::NotInvariant);
    }
    if !v.classify(l)?.lagrangian {
        return Err(Error::NotLagrangian);
    }
    if !v.classify(i)?.isotropic {
        return Err(Error::NotIsotropic);
    }
    let n = v.dim();
    let zero = Subspace::zero(n);

    let a = l.intersect(i)?;
    let j = invariant_complement_within(action, i, &a, &zero.intersect(i)?)?;
    let k = invariant_complement_within(action, l, &a, &zero.intersect(l)?)?;
    let m = invariant_lagrangian_complement(v, l, &j)?;

    let a_star = m.intersect(&v.symp_orthogonal(&k)?)?;
    let k_prime = m.intersect(&v.symp_orthogonal(&a)?)?;
    let r = invariant_complement_within(action, &k_prime, &j, &zero.intersect(&k_prime)?)?;
    let j_star = k.intersect(&v.symp_orthogonal(&r)?)?;
    let r_star = k.intersect(&v.symp_orthogonal(&j)?)?;

    let (da, dj, dr) = (a.dim(), j.dim(), r.dim());
    debug_assert_eq!(da + dj + dr, n / 2);

    // model basis columns: A, A* (dual to A), J*, J (dual to J*), R*, R (dual to R*)
    let rows = a
        .basis()
        .clone()
        .vstack(&dual_basis_rows(v, &a, &a_star))
        .vstack(j_star.basis())
        .vstack(&dual_basis_rows(v, &j_star, &j))
        .vstack(r_star.basis())
        .vstack(&dual_basis_rows(v, &r_star, &r));
    let columns = rows.transpose();

    // expected model form: one standard dual pair per block pair
    let mut model_omega = Mat::zero(n, n);
    let place_pair = |first: usize, second: usize, size: usize, m: &mut Mat| {
        for t in 0..size {
            m[(first + t, second + t)] = rat(1);
            m[(second + t, first + t)] = rat(-1);
        }
    };
    place_pair(0, da, da, &mut model_omega);
    place_pair(2 * da, 2 * da + dj, dj, &mut model_omega);
    place_pair(2 * da + 2 * dj, 2 * da + 2 * dj + dr, dr, &mut model_omega);

    let pulled = columns.transpose().mul(v.omega()).mul(&columns);
    assert_eq!(pulled, model_omega, "block pairing must come out standard");

    let transform = columns.inverse().expect("block bases span the space");

    let sigma_a = action.restrict(&a)?;
    let sigma_jstar = action.restrict(&j_star)?;
    let sigma_rstar = action.restrict(&r_star)?;
    let model_action = sigma_a
        .product(&sigma_a.contragredient())?
        .product(&sigma_jstar)?
        .product(&sigma_jstar.contragredient())?
        .product(&sigma_rstar)?
        .product(&sigma_rstar.contragredient())?;

    Ok(Lemma4Form {
        transform,
        blocks: Lemma4Blocks {
            a,
            a_star,
            j_star,
            j,
            r_star,
            r,
        },
        model_omega,
        model_action,
        dims: (da, dj, dr),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::close_group;
    use crate::wwcat::IndexedRel;

    fn m(cols: usize, rows: &[&[i64]]) -> Mat {
        Mat::from_int_rows(cols, rows)
    }

    fn sub(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_spanning_rows(ambient, &m(ambient, rows))
    }

    fn q2() -> SympGSpace {
        SympGSpace::standard(1, GroupAction::trivial(2)).unwrap()
    }

    #[test]
    fn hyper_normal_form_dims() {
        let x = q2();
        let lam = sub(2, &[&[1, 0]]);
        let form = hyper_normal_form(&x, &lam, &IsoClass::TrivialDim(1), 0, None).unwrap();
        assert_eq!(form.intermediate.dim(), 4);
        assert_eq!(form.coisotropic.dim(), 3);
        assert_eq!(form.lagrangian.dim(), 2);
        assert_eq!(form.excess, IsoClass::TrivialDim(1));
        assert_eq!(form.shadow.sub(), &lam);
        assert!(form.reduction.is_reduction());
        assert!(form.insertion.is_coreduction());
    }

    #[test]
    fn hyper_normal_form_zero_class_is_minimal() {
        let x = q2();
        let lam = sub(2, &[&[1, 0]]);
        let form = hyper_normal_form(&x, &lam, &IsoClass::TrivialDim(0), 0, None).unwrap();
        assert_eq!(form.intermediate.dim(), 2);
        assert_eq!(form.coisotropic, Subspace::full(2));
        assert_eq!(form.lagrangian, lam);
        assert!(form.excess.is_zero());
    }

    #[test]
    fn stabilization_is_ww_equal() {
        let x = q2();
        let lam = sub(2, &[&[1, 0]]);
        let k = IsoClass::TrivialDim(1);
        let forms: Vec<_> = (0..3)
            .map(|r| hyper_normal_form(&x, &lam, &k, r, None).unwrap())
            .collect();
        let base = forms[0].to_word().normalize();
        for f in &forms[1..] {
            let n = f.to_word().normalize();
            assert!(n.equal(&base).unwrap());
        }
    }

    #[test]
    fn unrealizable_class_needs_witness() {
        let z2 = close_group(&[Mat::identity(2).neg()]).unwrap();
        let x = SympGSpace::standard(1, z2.clone()).unwrap();
        let lam = sub(2, &[&[1, 0]]);
        let sign_class = IsoClass::FiniteChar(vec![rat(1), rat(-1)]);
        assert_eq!(
            hyper_normal_form(&x, &lam, &sign_class, 0, None).unwrap_err(),
            Error::UnrealizableClass
        );
        // a witness with the right class makes it work: restrict the ambient
        // sign action to a line
        let witness = z2.restrict(&sub(2, &[&[1, 0]])).unwrap();
        let form = hyper_normal_form(&x, &lam, &sign_class, 1, Some(&witness)).unwrap();
        assert_eq!(form.excess, sign_class);
        // and a wrong-class witness is rejected
        let wrong = z2.restrict(&Subspace::zero(2)).unwrap();
        assert_eq!(
            hyper_normal_form(&x, &lam, &sign_class, 0, Some(&wrong)).unwrap_err(),
            Error::WitnessClassMismatch
        );
    }

    #[test]
    fn circle_class_realized_constructively() {
        let rot = m(2, &[&[0, -1], &[1, 0]]);
        let circle = GroupAction::circle(rot).unwrap();
        let x = SympGSpace::standard(1, circle).unwrap();
        let lam = Subspace::kernel(&m(2, &[&[1, 0]]));
        // span{e2} is not invariant under the rotation; use the whole-class
        // machinery on an invariant Lagrangian instead: there is none in this
        // space, so test realize via the excess argument on the unit space
        let unit = SympGSpace::unit(x.action());
        let k = IsoClass::CircleWeights([(2u32, 1usize)].into_iter().collect());
        let form = hyper_normal_form(&unit, &Subspace::zero(0), &k, 1, None).unwrap();
        assert_eq!(form.excess, k);
        assert_eq!(form.intermediate.dim(), 4 + 2);
        let _ = lam;
    }

    #[test]
    fn lemma4_forced_blocks() {
        let v = q2();
        let l = sub(2, &[&[1, 0]]);
        // I = 0: everything lands in the R pair
        let form = lemma4_normal_form(&v, &l, &Subspace::zero(2)).unwrap();
        assert_eq!(form.dims, (0, 0, 1));
        // I = L: everything lands in the A pair
        let form = lemma4_normal_form(&v, &l, &l).unwrap();
        assert_eq!(form.dims, (1, 0, 0));
    }

    #[test]
    fn lemma4_transform_is_symplectic_and_block_correct() {
        let v = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let l = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let i = sub(4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert!(v.classify(&i).unwrap().isotropic);
        let form = lemma4_normal_form(&v, &l, &i).unwrap();
        let (da, dj, dr) = form.dims;
        assert_eq!((da, dj, dr), (1, 1, 0));

        // symplectic: T^t · model_omega · T = omega_V
        let t = &form.transform;
        assert_eq!(t.transpose().mul(&form.model_omega).mul(t), *v.omega());

        // block-correct: L maps onto the A ⊕ J* ⊕ R* coordinates, I onto A ⊕ J
        let n = v.dim();
        let l_model = l.map_by(t);
        let mut expect_l = Mat::zero(0, n);
        expect_l = expect_l.vstack(&Mat::identity(da).embed_cols(n, 0));
        expect_l = expect_l.vstack(&Mat::identity(dj).embed_cols(n, 2 * da));
        expect_l = expect_l.vstack(&Mat::identity(dr).embed_cols(n, 2 * da + 2 * dj));
        assert_eq!(l_model, Subspace::from_spanning_rows(n, &expect_l));

        let i_model = i.map_by(t);
        let mut expect_i = Mat::zero(0, n);
        expect_i = expect_i.vstack(&Mat::identity(da).embed_cols(n, 0));
        expect_i = expect_i.vstack(&Mat::identity(dj).embed_cols(n, 2 * da + dj));
        assert_eq!(i_model, Subspace::from_spanning_rows(n, &expect_i));
    }

    #[test]
    fn lemma4_equivariance_for_z2() {
        let gen = m(
            4,
            &[&[-1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]],
        );
        let action = close_group(&[gen]).unwrap();
        let v = SympGSpace::standard(2, action.clone()).unwrap();
        let l = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let i = sub(4, &[&[1, 0, 0, 0]]);
        let form = lemma4_normal_form(&v, &l, &i).unwrap();

        let GroupAction::Finite(orig) = &action else {
            panic!()
        };
        let GroupAction::Finite(model) = &form.model_action else {
            panic!()
        };
        for (g, gm) in orig.mats().iter().zip(model.mats()) {
            assert_eq!(form.transform.mul(g), gm.mul(&form.transform));
        }
    }

    #[test]
    fn lemma4_rejects_circle_and_bad_inputs() {
        let circle = GroupAction::circle(m(2, &[&[0, -1], &[1, 0]])).unwrap();
        let v = SympGSpace::standard(1, circle).unwrap();
        assert_eq!(
            lemma4_normal_form(&v, &Subspace::zero(2), &Subspace::zero(2)).unwrap_err(),
            Error::UnsupportedGroupModel
        );
        let v = q2();
        assert_eq!(
            lemma4_normal_form(&v, &Subspace::zero(2), &Subspace::zero(2)).unwrap_err(),
            Error::NotLagrangian
        );
        assert_eq!(
            lemma4_normal_form(&v, &sub(2, &[&[1, 0]]), &Subspace::full(2)).unwrap_err(),
            Error::NotIsotropic
        );
    }

    #[test]
    fn normal_form_round_trip_through_words() {
        // build a word with nonzero excess, then rebuild a normal form with
        // the same shadow/excess and compare as WW morphisms
        let x = q2();
        let lam = sub(2, &[&[1, 0]]);
        let ell = CanRel::lagrangian_insertion(&x, &lam).unwrap();
        let word = Word::new(vec![ell.clone(), ell.transpose(), ell.clone()]).unwrap();
        let normalized = word.normalize();
        let form =
            hyper_normal_form(&x, normalized.rel().sub(), normalized.index(), 2, None).unwrap();
        let rebuilt = form.to_word().normalize();
        assert!(rebuilt
            .equal(&IndexedRel::new(normalized.rel().clone(), normalized.index().clone()).unwrap())
            .unwrap());
    }
}
