//! Invariant complements by group averaging.
//!
//! Complements to L are encoded as graphs of linear maps from a fixed base
//! complement into L; averaging those maps with exact weights 1/|G| yields an
//! invariant complement, which in the symplectic case is arranged to stay
//! Lagrangian by extending a symmetric partial map before averaging. Only the
//! trivial and finite models are supported: for the circle the average is not
//! a finite sum in this representation.

use num::One;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Rat, Subspace};
use crate::symplectic::SympGSpace;

use super::GroupAction;

fn require_averageable(action: &GroupAction) -> Result<()> {
    match action {
        GroupAction::Circle(_) => Err(Error::UnsupportedGroupModel),
        _ => Ok(()),
    }
}

/// Rows of the invariant complement obtained by averaging the translates of
/// the complement spanned by `base_rows` over the splitting L ⊕ base.
fn average_graph(action: &GroupAction, l_rows: &Mat, base_rows: &Mat) -> Mat {
    let GroupAction::Finite(f) = action else {
        return base_rows.clone();
    };
    let dl = l_rows.rows();
    let d = base_rows.rows();
    let split = l_rows.transpose().hstack(&base_rows.transpose());
    let split_inv = split
        .inverse()
        .expect("L and the base complement span the space");
    let mut acc = Mat::zero(d, dl);
    for g in f.mats() {
        let translated = base_rows.mul(&g.transpose());
        let coords = split_inv.mul(&translated.transpose());
        let alpha = coords.select_rows(0..dl).transpose();
        let beta = coords.select_rows(dl..dl + d).transpose();
        let lambda = beta
            .inverse()
            .expect("group translates of a complement to an invariant subspace stay complements")
            .mul(&alpha);
        acc = acc.add(&lambda);
    }
    let avg = acc.scale(&Rat::new(
        num::BigInt::one(),
        num::BigInt::from(f.mats().len()),
    ));
    base_rows.add(&avg.mul(l_rows))
}

/// Invariant complement M to L with J ⊆ M, for invariant L and J with
/// L ∩ J = 0. Trivial and finite models only.
pub fn invariant_complement(action: &GroupAction, l: &Subspace, j: &Subspace) -> Result<Subspace> {
    require_averageable(action)?;
    let n = action.dim();
    if l.ambient_dim() != n || j.ambient_dim() != n {
        return Err(Error::DimensionMismatch(l.ambient_dim(), n));
    }
    if !action.is_invariant(l) || !action.is_invariant(j) {
        return Err(Error::NotInvariant);
    }
    if !l.intersect(j)?.is_zero() {
        return Err(Error::NotIndependent(
            "L and J must intersect trivially".into(),
        ));
    }
    let lj = l.sum(j)?;
    let w = Subspace::complement_extend(&lj, &Subspace::full(n))?;
    let base = j.sum(&w)?;
    let rows = average_graph(action, l.basis(), base.basis());
    let m = Subspace::from_spanning_rows(n, &rows);
    debug_assert!(action.is_invariant(&m));
    debug_assert!(m.contains(j));
    debug_assert!(l.intersect(&m).unwrap().is_zero());
    debug_assert!(l.sum(&m).unwrap().is_full());
    Ok(m)
}

/// Invariant complement taken inside an invariant subspace `outer` instead of
/// the whole ambient space: returns invariant M ⊆ outer with L ⊕ M = outer
/// and J ⊆ M.
pub fn invariant_complement_within(
    action: &GroupAction,
    outer: &Subspace,
    l: &Subspace,
    j: &Subspace,
) -> Result<Subspace> {
    require_averageable(action)?;
    if !outer.contains(l) || !outer.contains(j) {
        return Err(Error::ContainmentViolation(
            "L and J must lie inside outer".into(),
        ));
    }
    let restricted = action.restrict(outer)?;
    let l_in = Subspace::from_spanning_rows(outer.dim(), &l.coords_in(outer)?);
    let j_in = Subspace::from_spanning_rows(outer.dim(), &j.coords_in(outer)?);
    let m_in = invariant_complement(&restricted, &l_in, &j_in)?;
    Ok(Subspace::from_spanning_rows(
        outer.ambient_dim(),
        &m_in.basis().mul(outer.basis()),
    ))
}

/// Any (not necessarily invariant) Lagrangian complement to a Lagrangian L:
/// starts from a plain complement W and corrects each basis vector inside L
/// so the result is isotropic. Returns basis rows.
fn lagrangian_complement_rows(v: &SympGSpace, l: &Subspace) -> Mat {
    let n = v.dim();
    let w =
        Subspace::complement_extend(l, &Subspace::full(n)).expect("L sits inside the full space");
    let bw = w.basis().clone();
    let bl = l.basis();
    // pairing D_ia = omega(w_i, l_a) is invertible because L is Lagrangian
    let d = bw.mul(v.omega()).mul(&bl.transpose());
    let s = bw.mul(v.omega()).mul(&bw.transpose());
    let half = Rat::new(num::BigInt::from(-1), num::BigInt::from(2));
    let corrections = d
        .inverse()
        .expect("Lagrangian pairing is perfect")
        .mul(&s.scale(&half));
    bw.add(&corrections.transpose().mul(bl))
}

/// Invariant Lagrangian complement M to an invariant Lagrangian L with
/// J ⊆ M, for invariant isotropic J with L ∩ J = 0. The base Lagrangian
/// complement through J is produced by extending the symmetric partial map
/// carried by J with the bilinear rule b(x+w, x'+w') = r(x)(x') + r(x)(w') +
/// r(x')(w); averaging symmetric maps keeps the result Lagrangian.
pub fn invariant_lagrangian_complement(
    v: &SympGSpace,
    l: &Subspace,
    j: &Subspace,
) -> Result<Subspace> {
    let action = v.action();
    require_averageable(action)?;
    let n = v.dim();
    if l.ambient_dim() != n || j.ambient_dim() != n {
        return Err(Error::DimensionMismatch(l.ambient_dim(), n));
    }
    if !action.is_invariant(l) || !action.is_invariant(j) {
        return Err(Error::NotInvariant);
    }
    if !v.classify(l)?.lagrangian {
        return Err(Error::NotLagrangian);
    }
    if !v.classify(j)?.isotropic {
        return Err(Error::NotIsotropic);
    }
    if !l.intersect(j)?.is_zero() {
        return Err(Error::NotIndependent(
            "L and J must intersect trivially".into(),
        ));
    }
    if n == 0 {
        return Ok(Subspace::zero(0));
    }
    let h = n / 2;
    let bl = l.basis();
    let base = lagrangian_complement_rows(v, l);

    // coordinates of J over the splitting L ⊕ base
    let split = bl.transpose().hstack(&base.transpose());
    let split_inv = split
        .inverse()
        .expect("L and its Lagrangian complement span the space");
    let coords = split_inv.mul(&j.basis().transpose());
    let alpha = coords.select_rows(0..h); // h x dimJ, L-coordinates
    let beta = coords.select_rows(h..n); // h x dimJ, base-coordinates

    // canonical basis of the base-projection of J, expressed over beta
    let k_coords = Subspace::from_spanning_rows(h, &beta.transpose());
    let k = k_coords.dim();
    debug_assert_eq!(
        k,
        j.dim(),
        "J projects injectively onto the base complement"
    );
    let combo = beta
        .solve(&k_coords.basis().transpose())
        .expect("canonical rows span the same space");
    // mu_s = L-part of the J-element whose base-part is the s-th canonical row
    let mu = alpha.mul(&combo).transpose().mul(bl); // k x n, vectors in V

    // phi[s][u] = omega(mu_s, base_u)
    let phi = mu.mul(v.omega()).mul(&base.transpose()); // k x h

    // symmetric bilinear extension in the basis (K-part, chosen complement)
    let wc = Subspace::complement_extend(&k_coords, &Subspace::full(h))?;
    let p = k_coords.basis().vstack(wc.basis()); // h x h invertible
    let t = phi.mul(&p.transpose()); // k x h
    let mut bp = Mat::zero(h, h);
    for i in 0..h {
        for jj in 0..h {
            if i < k {
                bp[(i, jj)] = t[(i, jj)].clone();
            } else if jj < k {
                bp[(i, jj)] = t[(jj, i)].clone();
            }
        }
    }
    let p_inv = p.inverse().expect("basis change is invertible");
    let b_std = p_inv.mul(&bp).mul(&p_inv.transpose()); // symmetric, base coordinates

    // solve omega(s(e_u), .) = b(e_u, .) for the correction map into L
    let pairing = bl.mul(v.omega()).mul(&base.transpose()); // h x h invertible
    let correction = pairing
        .transpose()
        .inverse()
        .expect("Lagrangian pairing is perfect")
        .mul(&b_std);
    let n0 = base.add(&correction.transpose().mul(bl));

    let rows = average_graph(action, bl, &n0);
    let m = Subspace::from_spanning_rows(n, &rows);
    debug_assert!(action.is_invariant(&m));
    debug_assert!(m.contains(j));
    debug_assert!(v.classify(&m).unwrap().lagrangian);
    debug_assert!(l.intersect(&m).unwrap().is_zero());
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::close_group;

    fn m(cols: usize, rows: &[&[i64]]) -> Mat {
        Mat::from_int_rows(cols, rows)
    }

    fn sub(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_spanning_rows(ambient, &m(ambient, rows))
    }

    fn check_complement(action: &GroupAction, l: &Subspace, j: &Subspace, out: &Subspace) {
        assert!(action.is_invariant(out));
        assert!(out.contains(j));
        assert!(l.intersect(out).unwrap().is_zero());
        assert!(l.sum(out).unwrap().is_full());
    }

    #[test]
    fn trivial_base_complement() {
        let action = GroupAction::trivial(2);
        let l = sub(2, &[&[1, 0]]);
        let out = invariant_complement(&action, &l, &Subspace::zero(2)).unwrap();
        assert_eq!(out, sub(2, &[&[0, 1]]));
    }

    #[test]
    fn sign_action_complement_keeps_j() {
        let action = close_group(&[Mat::identity(2).neg()]).unwrap();
        let l = sub(2, &[&[1, 0]]);
        let j = sub(2, &[&[0, 1]]);
        let out = invariant_complement(&action, &l, &j).unwrap();
        assert_eq!(out, j);
        check_complement(&action, &l, &j, &out);
    }

    #[test]
    fn mixed_action_complement_is_invariant() {
        // swap action: the greedy base complement span{e2} of span{(1,1)} is
        // not invariant, so averaging must tilt it onto span{(1,-1)}
        let action = close_group(&[m(2, &[&[0, 1], &[1, 0]])]).unwrap();
        let l = sub(2, &[&[1, 1]]);
        let out = invariant_complement(&action, &l, &Subspace::zero(2)).unwrap();
        check_complement(&action, &l, &Subspace::zero(2), &out);
        assert_eq!(out, sub(2, &[&[1, -1]]));
    }

    #[test]
    fn circle_model_rejected() {
        let action = GroupAction::circle(m(2, &[&[0, -1], &[1, 0]])).unwrap();
        assert_eq!(
            invariant_complement(&action, &Subspace::zero(2), &Subspace::zero(2)).unwrap_err(),
            Error::UnsupportedGroupModel
        );
    }

    #[test]
    fn lagrangian_complement_trivial_group() {
        let v = SympGSpace::standard(1, GroupAction::trivial(2)).unwrap();
        let l = sub(2, &[&[1, 0]]);
        let out = invariant_lagrangian_complement(&v, &l, &Subspace::zero(2)).unwrap();
        assert_eq!(out, sub(2, &[&[0, 1]]));
    }

    #[test]
    fn lagrangian_complement_contains_isotropic_j() {
        let v = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let l = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let j = sub(4, &[&[0, 0, 1, 0]]);
        let out = invariant_lagrangian_complement(&v, &l, &j).unwrap();
        assert!(out.contains(&j));
        assert!(v.classify(&out).unwrap().lagrangian);
        assert!(l.intersect(&out).unwrap().is_zero());
    }

    #[test]
    fn lagrangian_j_forces_m_equal_j() {
        let v = SympGSpace::standard(1, GroupAction::trivial(2)).unwrap();
        let l = sub(2, &[&[1, 0]]);
        let j = sub(2, &[&[1, 1]]);
        assert!(v.classify(&j).unwrap().lagrangian);
        let out = invariant_lagrangian_complement(&v, &l, &j).unwrap();
        assert_eq!(out, j);
    }

    #[test]
    fn lagrangian_complement_skew_j_tilts_m() {
        // J = span{(0,1,1,0)} is isotropic and meets neither coordinate
        // Lagrangian; M must tilt to contain it
        let v = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let l = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let j = sub(4, &[&[0, 1, 1, 0]]);
        assert!(v.classify(&j).unwrap().isotropic);
        let out = invariant_lagrangian_complement(&v, &l, &j).unwrap();
        assert!(out.contains(&j));
        assert!(v.classify(&out).unwrap().lagrangian);
        assert!(l.intersect(&out).unwrap().is_zero());
    }

    #[test]
    fn lagrangian_complement_z2_equivariant() {
        let action = close_group(&[m(
            4,
            &[&[-1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]],
        )])
        .unwrap();
        let v = SympGSpace::standard(2, action.clone()).unwrap();
        let l = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let j = sub(4, &[&[0, 0, 1, 0]]);
        let out = invariant_lagrangian_complement(&v, &l, &j).unwrap();
        assert!(action.is_invariant(&out));
        assert!(out.contains(&j));
        assert!(v.classify(&out).unwrap().lagrangian);
        assert!(l.intersect(&out).unwrap().is_zero());
    }

    #[test]
    fn precondition_errors() {
        let v = SympGSpace::standard(1, GroupAction::trivial(2)).unwrap();
        let l = sub(2, &[&[1, 0]]);
        // J not disjoint from L
        assert!(matches!(
            invariant_lagrangian_complement(&v, &l, &l).unwrap_err(),
            Error::NotIndependent(_)
        ));
        // L not Lagrangian
        assert_eq!(
            invariant_lagrangian_complement(&v, &Subspace::zero(2), &Subspace::zero(2))
                .unwrap_err(),
            Error::NotLagrangian
        );
        // J not isotropic (omega(e1, e3) = 1 in the standard form)
        let v4 = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let l4 = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert_eq!(
            invariant_lagrangian_complement(&v4, &l4, &sub(4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]))
                .unwrap_err(),
            Error::NotIsotropic
        );
    }
}
