//! Equivariant linear canonical relations: construction, validation,
//! set-theoretic composition, pairwise excess, monicity, reductions and
//! coreductions, graphs, units/counits, and factorization.
//!
//! Coordinate conventions, fixed once:
//!
//! * f: X <- Y is stored on X-coordinates followed by Y-coordinates.
//! * Composition of f: X <- Y with g: Y <- Z works inside X x Y x Y x Z with
//!   the diagonal constraint y1 = y2 placed on the two middle blocks.
//! * delta_X and epsilon_X are both the diagonal {(x, x)} of X x Xbar; they
//!   differ only in their source/target assignment.

use crate::error::{Error, Result};
use crate::grouprep::IsoClass;
use crate::linalg::{rat, Mat, Subspace};
use crate::symplectic::SympGSpace;

/// An equivariant linear canonical relation f: X <- Y, stored as an
/// invariant Lagrangian subspace of X x Ybar. `source` is the codomain X,
/// `target` the domain Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanRel {
    source: SympGSpace,
    target: SympGSpace,
    sub: Subspace,
}

impl CanRel {
    /// Validates and canonicalizes: the subspace must be Lagrangian in
    /// X x Ybar and invariant under the product action.
    pub fn new(source: SympGSpace, target: SympGSpace, sub: Subspace) -> Result<CanRel> {
        let ambient = source.dim() + target.dim();
        if sub.ambient_dim() != ambient {
            return Err(Error::DimensionMismatch(sub.ambient_dim(), ambient));
        }
        let pairing = source.product(&target.dual())?;
        if !pairing.classify(&sub)?.lagrangian {
            return Err(Error::NotLagrangian);
        }
        if !pairing.action().is_invariant(&sub) {
            return Err(Error::NotInvariant);
        }
        Ok(CanRel {
            source,
            target,
            sub,
        })
    }

    /// Builds from spanning rows, canonicalizing first.
    pub fn from_rows(source: SympGSpace, target: SympGSpace, rows: &Mat) -> Result<CanRel> {
        let sub = Subspace::from_spanning_rows(source.dim() + target.dim(), rows);
        CanRel::new(source, target, sub)
    }

    pub fn source(&self) -> &SympGSpace {
        &self.source
    }

    pub fn target(&self) -> &SympGSpace {
        &self.target
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    /// The product space X x Ybar the relation lives in.
    pub fn pairing_space(&self) -> SympGSpace {
        self.source
            .product(&self.target.dual())
            .expect("a validated relation has matching models")
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// Identity relation: the diagonal of X x Xbar.
    pub fn identity(x: &SympGSpace) -> CanRel {
        let n = x.dim();
        let rows = Mat::identity(n).hstack(&Mat::identity(n));
        CanRel::from_rows(x.clone(), x.clone(), &rows).expect("the diagonal is always valid")
    }

    /// An invariant Lagrangian of X as a morphism X <- 1.
    pub fn lagrangian_insertion(x: &SympGSpace, lag: &Subspace) -> Result<CanRel> {
        CanRel::new(x.clone(), SympGSpace::unit(x.action()), lag.clone())
    }

    /// Swaps source and target together with their coordinate blocks.
    pub fn transpose(&self) -> CanRel {
        let x = self.source.dim();
        let y = self.target.dim();
        let b = self.sub.basis();
        let rows = b.select_cols(x..x + y).hstack(&b.select_cols(0..x));
        CanRel {
            source: self.target.clone(),
            target: self.source.clone(),
            sub: Subspace::from_spanning_rows(x + y, &rows),
        }
    }

    fn check_composable(&self, other: &CanRel) -> Result<()> {
        if self.target != other.source {
            return Err(Error::NotComposable);
        }
        Ok(())
    }

    /// Set-theoretic composition: the image of (f x g) ∩ (X x Δ_Y x Zbar)
    /// under the projection to X x Zbar. Always an invariant Lagrangian.
    pub fn compose(&self, other: &CanRel) -> Result<CanRel> {
        self.check_composable(other)?;
        let x = self.source.dim();
        let y = self.target.dim();
        let z = other.target.dim();
        let total = x + 2 * y + z;
        let cf = self.sub.constraints().embed_cols(total, 0);
        let cg = other.sub.constraints().embed_cols(total, x + y);
        let mut diag = Mat::zero(y, total);
        for i in 0..y {
            diag[(i, x + i)] = rat(1);
            diag[(i, x + y + i)] = rat(-1);
        }
        let w = Subspace::kernel(&cf.vstack(&cg).vstack(&diag));
        let b = w.basis();
        let rows = b.select_cols(0..x).hstack(&b.select_cols(x + 2 * y..total));
        let sub = Subspace::from_spanning_rows(x + z, &rows);
        Ok(CanRel {
            source: self.source.clone(),
            target: other.target.clone(),
            sub,
        })
    }

    /// The trajectory space of the pair: T = {q in Y : (0,q) in f, (q,0) in g},
    /// an invariant subspace of Y.
    pub fn pair_trajectories(&self, other: &CanRel) -> Result<Subspace> {
        self.check_composable(other)?;
        let x = self.source.dim();
        let y = self.target.dim();
        let cf_y = self.sub.constraints().select_cols(x..x + y);
        let cg_y = other.sub.constraints().select_cols(0..y);
        Ok(Subspace::kernel(&cf_y.vstack(&cg_y)))
    }

    /// Excess of the composable pair: the isomorphism class of the
    /// trajectory space as a linear G-space.
    pub fn pair_excess(&self, other: &CanRel) -> Result<IsoClass> {
        let t = self.pair_trajectories(other)?;
        self.target.action().iso_class(&t)
    }

    /// Monicity of the pair, decided by vanishing of the excess class and
    /// cross-checked against the injectivity-over-0 intersection and the
    /// transversality rank condition; the three always agree.
    pub fn is_congenial(&self, other: &CanRel) -> Result<bool> {
        self.check_composable(other)?;
        let x = self.source.dim();
        let y = self.target.dim();
        let z = other.target.dim();
        let total = x + 2 * y + z;

        // route 1: the excess class vanishes
        let by_class = self.pair_excess(other)?.is_zero();

        // route 2: (f x g) ∩ ({0} x Δ_Y x {0}) = {0}
        let fxg = self.sub.block_sum(&other.sub);
        let mut diag_rows = Mat::zero(y, total);
        for i in 0..y {
            diag_rows[(i, x + i)] = rat(1);
            diag_rows[(i, x + y + i)] = rat(1);
        }
        let pinched = Subspace::from_spanning_rows(total, &diag_rows);
        let by_kernel = fxg.intersect(&pinched)?.is_zero();

        // route 3: transversality of f x g with X x Δ_Y x Zbar
        let mut wide_rows = Mat::zero(x + y + z, total);
        for i in 0..x {
            wide_rows[(i, i)] = rat(1);
        }
        for i in 0..y {
            wide_rows[(x + i, x + i)] = rat(1);
            wide_rows[(x + i, x + y + i)] = rat(1);
        }
        for i in 0..z {
            wide_rows[(x + y + i, x + 2 * y + i)] = rat(1);
        }
        let wide = Subspace::from_spanning_rows(total, &wide_rows);
        let by_rank = fxg.sum(&wide)?.is_full();

        assert_eq!(by_class, by_kernel, "excess and kernel routes must agree");
        assert_eq!(
            by_class, by_rank,
            "excess and transversality routes must agree"
        );
        Ok(by_class)
    }

    /// Single-valued: no nonzero (x, 0) in f.
    pub fn is_single_valued(&self) -> bool {
        let left = Subspace::full(self.source.dim()).block_sum(&Subspace::zero(self.target.dim()));
        self.sub.intersect(&left).expect("same ambient").is_zero()
    }

    /// Surjective: the projection of f to X is all of X.
    pub fn is_surjective(&self) -> bool {
        self.sub.project_cols(0..self.source.dim()).is_full()
    }

    /// Injective: no nonzero (0, y) in f.
    pub fn is_injective(&self) -> bool {
        let right = Subspace::zero(self.source.dim()).block_sum(&Subspace::full(self.target.dim()));
        self.sub.intersect(&right).expect("same ambient").is_zero()
    }

    /// Everywhere defined: the projection of f to Y is all of Y.
    pub fn is_everywhere_defined(&self) -> bool {
        let x = self.source.dim();
        self.sub.project_cols(x..x + self.target.dim()).is_full()
    }

    pub fn is_reduction(&self) -> bool {
        self.is_surjective() && self.is_single_valued()
    }

    pub fn is_coreduction(&self) -> bool {
        self.is_injective() && self.is_everywhere_defined()
    }

    /// Factors f: X <- Y through Q = X x Ybar x Y as a reduction after a
    /// coreduction: c = {((x, y', y), y) : (x, y') in f} and
    /// r = {(x, (x, y, y))}. The pair is congenial and composes back to f.
    pub fn factor(&self) -> (CanRel, CanRel) {
        let x = self.source.dim();
        let y = self.target.dim();
        let q_space = self
            .source
            .product(&self.target.dual())
            .and_then(|p| p.product(&self.target))
            .expect("models match");
        let q = q_space.dim();

        // c: Q <- Y
        let f_rows = self.sub.basis().embed_cols(q + y, 0);
        let mut free_rows = Mat::zero(y, q + y);
        for i in 0..y {
            free_rows[(i, x + y + i)] = rat(1);
            free_rows[(i, q + i)] = rat(1);
        }
        let c = CanRel::from_rows(
            q_space.clone(),
            self.target.clone(),
            &f_rows.vstack(&free_rows),
        )
        .expect("the coreduction leg is always valid");

        // r: X <- Q
        let mut r_rows = Mat::zero(x + y, x + q);
        for i in 0..x {
            r_rows[(i, i)] = rat(1);
            r_rows[(i, x + i)] = rat(1);
        }
        for i in 0..y {
            r_rows[(x + i, x + x + i)] = rat(1);
            r_rows[(x + i, x + x + y + i)] = rat(1);
        }
        let r = CanRel::from_rows(self.source.clone(), q_space, &r_rows)
            .expect("the reduction leg is always valid");
        (r, c)
    }

    /// Reinterprets f: X <- Y as its graph X x Ybar <- 1.
    pub fn graph(&self) -> CanRel {
        CanRel {
            source: self.pairing_space(),
            target: SympGSpace::unit(self.source.action()),
            sub: self.sub.clone(),
        }
    }

    /// Monoidal product: (X1 x X2) <- (Y1 x Y2) on the reindexed direct sum
    /// of the underlying subspaces.
    pub fn product_rel(&self, other: &CanRel) -> Result<CanRel> {
        let source = self.source.product(&other.source)?;
        let target = self.target.product(&other.target)?;
        let (x1, y1) = (self.source.dim(), self.target.dim());
        let (x2, y2) = (other.source.dim(), other.target.dim());
        let total = x1 + x2 + y1 + y2;
        let bf = self.sub.basis();
        let rows_f = bf
            .select_cols(0..x1)
            .embed_cols(total, 0)
            .add(&bf.select_cols(x1..x1 + y1).embed_cols(total, x1 + x2));
        let bg = other.sub.basis();
        let rows_g = bg
            .select_cols(0..x2)
            .embed_cols(total, x1)
            .add(&bg.select_cols(x2..x2 + y2).embed_cols(total, x1 + x2 + y1));
        let sub = Subspace::from_spanning_rows(total, &rows_f.vstack(&rows_g));
        Ok(CanRel {
            source,
            target,
            sub,
        })
    }
}

/// The unit delta_X: X x Xbar <- 1, given by the diagonal.
pub fn delta(x: &SympGSpace) -> CanRel {
    let n = x.dim();
    let rows = Mat::identity(n).hstack(&Mat::identity(n));
    let pairing = x.product(&x.dual()).expect("same model");
    CanRel::from_rows(pairing, SympGSpace::unit(x.action()), &rows)
        .expect("the diagonal is always valid")
}

/// The counit epsilon_X: 1 <- X x Xbar, the same diagonal with the opposite
/// source/target assignment.
pub fn epsilon(x: &SympGSpace) -> CanRel {
    let n = x.dim();
    let rows = Mat::identity(n).hstack(&Mat::identity(n));
    let pairing = x.product(&x.dual()).expect("same model");
    CanRel::from_rows(SympGSpace::unit(x.action()), pairing, &rows)
        .expect("the diagonal is always valid")
}

/// The braiding B x A <- A x B, the graph of the coordinate swap.
pub fn swap_rel(a: &SympGSpace, b: &SympGSpace) -> Result<CanRel> {
    let source = b.product(a)?;
    let target = a.product(b)?;
    let (da, db) = (a.dim(), b.dim());
    let total = 2 * (da + db);
    let mut rows = Mat::zero(da + db, total);
    for i in 0..da {
        rows[(i, db + i)] = rat(1);
        rows[(i, da + db + i)] = rat(1);
    }
    for j in 0..db {
        rows[(da + j, j)] = rat(1);
        rows[(da + j, da + db + da + j)] = rat(1);
    }
    CanRel::from_rows(source, target, &rows)
}

/// The projection endo-relation of an invariant coisotropic C:
/// {(c + z, c) : c in C, z in C^omega}. Its fixed-point set is C itself.
pub fn projection_onto_coisotropic(x: &SympGSpace, c: &Subspace) -> Result<CanRel> {
    let kind = x.classify(c)?;
    if !kind.coisotropic {
        return Err(Error::NotCoisotropic);
    }
    if !x.action().is_invariant(c) {
        return Err(Error::NotInvariant);
    }
    let n = x.dim();
    let corth = x.symp_orthogonal(c)?;
    let diag = c.basis().hstack(c.basis());
    let left = corth.basis().embed_cols(2 * n, 0);
    CanRel::from_rows(x.clone(), x.clone(), &diag.vstack(&left))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{close_group, GroupAction};

    fn m(cols: usize, rows: &[&[i64]]) -> Mat {
        Mat::from_int_rows(cols, rows)
    }

    fn sub(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_spanning_rows(ambient, &m(ambient, rows))
    }

    fn q2() -> SympGSpace {
        SympGSpace::standard(1, GroupAction::trivial(2)).unwrap()
    }

    /// Graph of a symplectic matrix as a relation X <- Y.
    fn graph_of(a: &Mat, x: &SympGSpace, y: &SympGSpace) -> CanRel {
        let rows = a.transpose().hstack(&Mat::identity(y.dim()));
        CanRel::from_rows(x.clone(), y.clone(), &rows).unwrap()
    }

    #[test]
    fn diagonal_is_identity_relation() {
        let x = q2();
        let id = CanRel::identity(&x);
        assert!(id.is_reduction() && id.is_coreduction());
        let f = graph_of(&m(2, &[&[1, 1], &[0, 1]]), &x, &x);
        assert_eq!(id.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id).unwrap(), f);
    }

    #[test]
    fn insertion_and_wrong_dimension() {
        let x = q2();
        let ell = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        assert!(ell.is_coreduction());
        assert!(!ell.is_reduction());
        let ell_t = ell.transpose();
        assert!(ell_t.is_reduction());
        assert!(!ell_t.is_coreduction());
        // a 1-dimensional subspace of X x Xbar is not Lagrangian
        assert_eq!(
            CanRel::from_rows(x.clone(), x.clone(), &m(4, &[&[1, 0, 0, 0]])).unwrap_err(),
            Error::NotLagrangian
        );
    }

    #[test]
    fn make_relation_rejects_noninvariant() {
        let z4 = close_group(&[m(2, &[&[0, -1], &[1, 0]])]).unwrap();
        let x = SympGSpace::standard(1, z4).unwrap();
        let unit = SympGSpace::unit(x.action());
        // span{e1} is Lagrangian but not Z/4-invariant
        assert_eq!(
            CanRel::new(x, unit, sub(2, &[&[1, 0]])).unwrap_err(),
            Error::NotInvariant
        );
    }

    #[test]
    fn transpose_is_involutive_and_flips_graphs() {
        let x = q2();
        let a = m(2, &[&[1, 1], &[0, 1]]);
        let f = graph_of(&a, &x, &x);
        assert_eq!(f.transpose().transpose(), f);
        let finv = graph_of(&a.inverse().unwrap(), &x, &x);
        assert_eq!(f.transpose(), finv);
        let delta_x = CanRel::identity(&x);
        assert_eq!(delta_x.transpose(), delta_x);
    }

    #[test]
    fn graphs_compose_like_matrices() {
        let x = q2();
        let a = m(2, &[&[1, 1], &[0, 1]]);
        let b = m(2, &[&[1, 0], &[2, 1]]);
        let f = graph_of(&a, &x, &x);
        let g = graph_of(&b, &x, &x);
        assert_eq!(f.compose(&g).unwrap(), graph_of(&a.mul(&b), &x, &x));
    }

    #[test]
    fn insertion_composition_collapses_to_unit() {
        let x = q2();
        let ell = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        let composite = ell.transpose().compose(&ell).unwrap();
        assert!(composite.source().is_unit() && composite.target().is_unit());
        assert_eq!(composite.sub(), &Subspace::zero(0));
    }

    #[test]
    fn pair_excess_cases() {
        let x = q2();
        let ell = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        let em = CanRel::lagrangian_insertion(&x, &sub(2, &[&[0, 1]])).unwrap();
        let f = graph_of(&m(2, &[&[1, 1], &[0, 1]]), &x, &x);

        assert!(CanRel::identity(&x).pair_excess(&f).unwrap().is_zero());
        assert_eq!(
            ell.transpose().pair_excess(&ell).unwrap(),
            IsoClass::TrivialDim(1)
        );
        assert!(em.transpose().pair_excess(&ell).unwrap().is_zero());
        // X <- 1 cannot be followed by another X <- 1
        assert_eq!(ell.pair_excess(&ell).unwrap_err(), Error::NotComposable);
    }

    #[test]
    fn congeniality_routes_agree() {
        let x = q2();
        let ell = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        let em = CanRel::lagrangian_insertion(&x, &sub(2, &[&[0, 1]])).unwrap();
        let f = graph_of(&m(2, &[&[1, 0], &[2, 1]]), &x, &x);

        assert!(CanRel::identity(&x).is_congenial(&f).unwrap());
        assert!(!ell.transpose().is_congenial(&ell).unwrap());
        assert!(em.transpose().is_congenial(&ell).unwrap());
    }

    #[test]
    fn factor_satisfies_postconditions() {
        let x = q2();
        for f in [
            CanRel::identity(&x),
            graph_of(&m(2, &[&[1, 1], &[0, 1]]), &x, &x),
            CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap(),
        ] {
            let (r, c) = f.factor();
            assert!(r.is_reduction());
            assert!(c.is_coreduction());
            assert!(r.is_congenial(&c).unwrap());
            assert_eq!(r.compose(&c).unwrap(), f);
        }
        // the zero-space identity factors through the unique morphisms on 1
        let unit = SympGSpace::unit(&GroupAction::trivial(0));
        let one = CanRel::identity(&unit);
        let (r, c) = one.factor();
        assert_eq!(r.compose(&c).unwrap(), one);
    }

    #[test]
    fn graph_delta_epsilon_shapes() {
        let x = q2();
        let id = CanRel::identity(&x);
        let d = delta(&x);
        assert_eq!(id.graph().sub(), d.sub());
        assert_eq!(id.graph().source(), d.source());

        let unit = SympGSpace::unit(x.action());
        assert_eq!(delta(&unit), CanRel::identity(&unit));

        let ell = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        assert_eq!(ell.graph().sub(), ell.sub());

        let e = epsilon(&x);
        assert!(e.source().is_unit());
        assert_eq!(e.target().dim(), 4);
    }

    #[test]
    fn product_rel_blocks() {
        let x = q2();
        let idx = CanRel::identity(&x);
        let prod = idx.product_rel(&idx).unwrap();
        let xx = x.product(&x).unwrap();
        assert_eq!(prod, CanRel::identity(&xx));

        let unit = SympGSpace::unit(x.action());
        let f = graph_of(&m(2, &[&[1, 1], &[0, 1]]), &x, &x);
        let f1 = f.product_rel(&CanRel::identity(&unit)).unwrap();
        assert_eq!(f1.sub(), f.sub());

        let ell = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        let p = f.product_rel(&ell).unwrap();
        assert_eq!(p.sub().dim(), f.sub().dim() + ell.sub().dim());
    }

    #[test]
    fn composition_image_contains_diagonal_of_image() {
        let x = q2();
        for f in [
            graph_of(&m(2, &[&[1, 3], &[0, 1]]), &x, &x),
            CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap(),
        ] {
            let comp = f.compose(&f.transpose()).unwrap();
            let image = f.sub().project_cols(0..2);
            let diag = image.basis().hstack(image.basis());
            let diag_sub = Subspace::from_spanning_rows(4, &diag);
            assert!(comp.sub().contains(&diag_sub));
        }
    }

    #[test]
    fn projection_relation_shape() {
        let x = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let c = sub(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let p = projection_onto_coisotropic(&x, &c).unwrap();
        assert!(p.is_endomorphism());
        // fixed points of the projection: exactly C
        let n = x.dim();
        let cf = p.sub().constraints();
        let fixed = Subspace::kernel(&cf.select_cols(0..n).add(&cf.select_cols(n..2 * n)));
        assert_eq!(fixed, c);
        // a non-coisotropic input is rejected
        assert_eq!(
            projection_onto_coisotropic(&x, &sub(4, &[&[1, 0, 0, 0]])).unwrap_err(),
            Error::NotCoisotropic
        );
    }

    #[test]
    fn swap_rel_is_valid_and_involutive() {
        let x = q2();
        let y = SympGSpace::standard(2, GroupAction::trivial(4)).unwrap();
        let s = swap_rel(&x, &y).unwrap();
        let s_back = swap_rel(&y, &x).unwrap();
        let roundtrip = s_back.compose(&s).unwrap();
        let xy = x.product(&y).unwrap();
        assert_eq!(roundtrip, CanRel::identity(&xy));
    }
}
