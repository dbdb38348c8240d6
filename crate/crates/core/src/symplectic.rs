//! Symplectic G-spaces over the rationals: forms, duals, products, the
//! symplectic orthogonal, and classification of subspaces.

use crate::error::{Error, Result};
use crate::grouprep::GroupAction;
use crate::linalg::{rat, Mat, Subspace};

/// A rational symplectic vector space with a compatible group action. The
/// form is an arbitrary nondegenerate antisymmetric matrix (not necessarily
/// the standard one), and every group element must preserve it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SympGSpace {
    omega: Mat,
    action: GroupAction,
}

/// Non-exclusive classification flags of a subspace of a symplectic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubspaceKind {
    pub isotropic: bool,
    pub coisotropic: bool,
    pub lagrangian: bool,
    pub symplectic: bool,
}

impl SympGSpace {
    pub fn new(omega: Mat, action: GroupAction) -> Result<SympGSpace> {
        if !omega.is_square() {
            return Err(Error::ShapeMismatch("omega must be square".into()));
        }
        let n = omega.rows();
        if action.dim() != n {
            return Err(Error::DimensionMismatch(action.dim(), n));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::Degenerate);
        }
        if omega.transpose() != omega.neg() {
            return Err(Error::NotAntisymmetric);
        }
        if omega.rank() != n {
            return Err(Error::Degenerate);
        }
        match &action {
            GroupAction::Trivial { .. } => {}
            GroupAction::Finite(f) => {
                for g in f.mats() {
                    if g.transpose().mul(&omega).mul(g) != omega {
                        return Err(Error::NotSymplecticAction);
                    }
                }
            }
            GroupAction::Circle(c) => {
                let a = c.generator();
                if !a.transpose().mul(&omega).add(&omega.mul(a)).is_zero() {
                    return Err(Error::NotSymplecticAction);
                }
            }
        }
        Ok(SympGSpace { omega, action })
    }

    /// Q^{2n} with the standard form [[0, I], [-I, 0]].
    pub fn standard(n: usize, action: GroupAction) -> Result<SympGSpace> {
        SympGSpace::new(standard_omega(n), action)
    }

    /// The unit object: the zero-dimensional space over the same group model.
    pub fn unit(model_like: &GroupAction) -> SympGSpace {
        SympGSpace {
            omega: Mat::zero(0, 0),
            action: model_like.unit_like(),
        }
    }

    pub fn dim(&self) -> usize {
        self.omega.rows()
    }

    pub fn omega(&self) -> &Mat {
        &self.omega
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn is_unit(&self) -> bool {
        self.dim() == 0
    }

    /// Same space and action, form multiplied by -1.
    pub fn dual(&self) -> SympGSpace {
        SympGSpace {
            omega: self.omega.neg(),
            action: self.action.clone(),
        }
    }

    /// Cartesian product; A-coordinates first, then B-coordinates.
    pub fn product(&self, other: &SympGSpace) -> Result<SympGSpace> {
        Ok(SympGSpace {
            omega: self.omega.block_diag(&other.omega),
            action: self.action.product(&other.action)?,
        })
    }

    /// S^omega = {v : omega(v, s) = 0 for all s in S}.
    pub fn symp_orthogonal(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch(s.ambient_dim(), self.dim()));
        }
        Ok(Subspace::kernel(&s.basis().mul(&self.omega.transpose())))
    }

    pub fn classify(&self, s: &Subspace) -> Result<SubspaceKind> {
        let orth = self.symp_orthogonal(s)?;
        let isotropic = orth.contains(s);
        let coisotropic = s.contains(&orth);
        let symplectic = s.intersect(&orth)?.is_zero();
        Ok(SubspaceKind {
            isotropic,
            coisotropic,
            lagrangian: isotropic && coisotropic,
            symplectic,
        })
    }

    pub fn is_lagrangian(&self, s: &Subspace) -> bool {
        self.classify(s).map(|k| k.lagrangian).unwrap_or(false)
    }
}

/// The standard antisymmetric form on Q^{2n}.
pub fn standard_omega(n: usize) -> Mat {
    let mut m = Mat::zero(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = rat(1);
        m[(n + i, i)] = rat(-1);
    }
    m
}

/// The symplectic space E ⊕ E* with the canonical pairing form and the
/// contragredient action on E*; both coordinate halves are invariant
/// Lagrangians.
pub fn doubled_space(e: &GroupAction) -> SympGSpace {
    let d = e.dim();
    let mut omega = Mat::zero(2 * d, 2 * d);
    for i in 0..d {
        omega[(i, d + i)] = rat(-1);
        omega[(d + i, i)] = rat(1);
    }
    let action = e.product(&e.contragredient()).expect("same model");
    SympGSpace::new(omega, action).expect("the doubled space is symplectic")
}

/// Omega-dual basis rows: rows q_t in the span of `second` with
/// omega(first_s, q_t) = delta_st. The omega-pairing between the two
/// subspaces must be perfect.
pub fn dual_basis_rows(v: &SympGSpace, first: &Subspace, second: &Subspace) -> Mat {
    let pairing = first
        .basis()
        .mul(v.omega())
        .mul(&second.basis().transpose());
    pairing
        .inverse()
        .expect("the two blocks pair perfectly")
        .transpose()
        .mul(second.basis())
}
