use num::Zero;

use super::mat::{Mat, Rat};
use crate::error::{Error, Result};

/// A linear subspace of rational n-space, stored as its unique reduced
/// row-echelon basis with pivot columns ascending and zero rows deleted.
/// Two values represent the same subspace iff the stored fields are equal,
/// so `==` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    /// Canonicalizes an arbitrary spanning set given as matrix rows.
    pub fn from_spanning_rows(ambient: usize, rows: &Mat) -> Self {
        assert_eq!(
            rows.cols(),
            ambient,
            "spanning rows must live in the ambient space"
        );
        Subspace {
            ambient,
            basis: rows.rref_canonical(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Null space {v : m v = 0}; dim = cols - rank.
    pub fn kernel(m: &Mat) -> Subspace {
        let n = m.cols();
        let (r, pivots) = m.rref_with_pivots();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; n];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..n).filter(|&c| !pivot_set[c]).collect();
        let mut rows = Mat::zero(free.len(), n);
        for (k, &fc) in free.iter().enumerate() {
            rows[(k, fc)] = crate::linalg::rat(1);
            for (i, &p) in pivots.iter().enumerate() {
                rows[(k, p)] = -r[(i, fc)].clone();
            }
        }
        Subspace::from_spanning_rows(n, &rows)
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // reduce v against the canonical basis
        let mut v = v.to_vec();
        for i in 0..self.basis.rows() {
            let p = self
                .basis
                .row(i)
                .iter()
                .position(|x| !x.is_zero())
                .expect("canonical basis has no zero rows");
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (j, slot) in v.iter_mut().enumerate() {
                    let t = &*slot - &c * &self.basis[(i, j)];
                    *slot = t;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && (0..other.dim()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_spanning_rows(
            self.ambient,
            &self.basis.vstack(&other.basis),
        ))
    }

    /// Zassenhaus: row-reduce [A|A; B|0]; rows with zero left half carry the
    /// intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Mat::zero(other.basis.rows(), n));
        let r = top.vstack(&bottom).rref_canonical();
        let mut inter_rows = Mat::zero(0, n);
        for i in 0..r.rows() {
            if r.row(i)[..n].iter().all(Zero::is_zero) {
                inter_rows = inter_rows.vstack(&Mat::from_fn(1, n, |_, c| r[(i, n + c)].clone()));
            }
        }
        Ok(Subspace::from_spanning_rows(n, &inter_rows))
    }

    /// Coordinates of this subspace's basis relative to `outer`'s basis:
    /// returns C with C * outer.basis = self.basis. Errors unless self ⊆ outer.
    pub fn coords_in(&self, outer: &Subspace) -> Result<Mat> {
        self.check_ambient(outer)?;
        // solve outer.basis^T * X = self.basis^T
        let x = outer
            .basis
            .transpose()
            .solve(&self.basis.transpose())
            .ok_or_else(|| Error::ContainmentViolation("subspace not contained in outer".into()))?;
        Ok(x.transpose())
    }

    /// Deterministic complement of `inner` inside `outer`: spans the rows of
    /// `outer`'s canonical basis whose index avoids the pivot columns of
    /// `inner` written in coordinates relative to that basis, taken in
    /// ascending order. Satisfies inner ⊕ W = outer exactly.
    pub fn complement_extend(inner: &Subspace, outer: &Subspace) -> Result<Subspace> {
        inner.check_ambient(outer)?;
        if !outer.contains(inner) {
            return Err(Error::ContainmentViolation(
                "inner subspace not contained in outer".into(),
            ));
        }
        let coords = inner.coords_in(outer)?;
        let (_, pivots) = coords.rref_with_pivots();
        let k = outer.dim();
        let mut keep = vec![true; k];
        for &p in &pivots {
            keep[p] = false;
        }
        let mut rows = Mat::zero(0, outer.ambient);
        for (i, &kept) in keep.iter().enumerate() {
            if kept {
                rows = rows.vstack(&Mat::from_fn(1, outer.ambient, |_, c| {
                    outer.basis[(i, c)].clone()
                }));
            }
        }
        Ok(Subspace::from_spanning_rows(outer.ambient, &rows))
    }

    /// Rows annihilating this subspace: self = kernel of the result.
    pub fn constraints(&self) -> Mat {
        Subspace::kernel(&self.basis).basis.clone()
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn map_by(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::from_spanning_rows(m.rows(), &self.basis.mul(&m.transpose()))
    }

    /// Image of the coordinate projection keeping `range`.
    pub fn project_cols(&self, range: std::ops::Range<usize>) -> Subspace {
        let width = range.len();
        Subspace::from_spanning_rows(width, &self.basis.select_cols(range))
    }

    /// Embeds into a wider space at a column offset.
    pub fn embed_cols(&self, total: usize, offset: usize) -> Subspace {
        Subspace::from_spanning_rows(total, &self.basis.embed_cols(total, offset))
    }

    /// Direct-sum embedding: self into the first block, other into the second.
    pub fn block_sum(&self, other: &Subspace) -> Subspace {
        let total = self.ambient + other.ambient;
        let a = self.basis.embed_cols(total, 0);
        let b = other.basis.embed_cols(total, self.ambient);
        Subspace::from_spanning_rows(total, &a.vstack(&b))
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of Q^{}) {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}
