//! Seeded random generation of valid instances for the law-verification
//! harness: invariant subspaces, symplectic G-spaces with a remembered pair
//! of transverse invariant Lagrangians, equivariant symplectomorphisms, and
//! from those relations, words and indexed relations.
//!
//! Generator contract: spaces are built as W ⊕ W* for a random invariant
//! subrepresentation W of a fixed base representation (cut by averaging a
//! random subspace's projector for finite groups, by intersecting with
//! generator-stable kernels for the circle). Invariant Lagrangians are
//! images of the W-summand under random invariant symplectomorphisms
//! assembled from equivariant symmetric shears and an equivariant block
//! diagonal. Everything produced validates exactly.

use num::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grouprep::{close_group, reynolds_conjugate, GroupAction, IsoClass};
use crate::linalg::{rat, Mat, Rat, Subspace};
use crate::relations::CanRel;
use crate::symplectic::{doubled_space, dual_basis_rows, SympGSpace};
use crate::wwcat::{IndexedRel, Word};

/// The group models exercised by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSpec {
    Trivial,
    Z2,
    Z4,
    S3,
    Circle,
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Trivial => "trivial",
            ModelSpec::Z2 => "z2",
            ModelSpec::Z4 => "z4",
            ModelSpec::S3 => "s3",
            ModelSpec::Circle => "circle",
        }
    }

    pub fn parse(s: &str) -> Option<ModelSpec> {
        match s {
            "trivial" => Some(ModelSpec::Trivial),
            "finite" | "z2" => Some(ModelSpec::Z2),
            "z4" => Some(ModelSpec::Z4),
            "s3" => Some(ModelSpec::S3),
            "circle" => Some(ModelSpec::Circle),
            _ => None,
        }
    }

    /// Base representation whose invariant subspaces supply the random
    /// subrepresentations W.
    pub fn base_action(&self) -> GroupAction {
        match self {
            ModelSpec::Trivial => GroupAction::trivial(4),
            ModelSpec::Z2 => {
                // trivial ⊕ trivial ⊕ sign ⊕ sign
                let g = Mat::from_int_rows(
                    4,
                    &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]],
                );
                close_group(&[g]).expect("Z/2 closes")
            }
            ModelSpec::Z4 => {
                // rotation ⊕ trivial ⊕ sign
                let g = Mat::from_int_rows(
                    4,
                    &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]],
                );
                close_group(&[g]).expect("Z/4 closes")
            }
            ModelSpec::S3 => {
                // standard 2-dimensional ⊕ trivial ⊕ sign
                let r = Mat::from_int_rows(
                    4,
                    &[&[0, -1, 0, 0], &[1, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
                );
                let s = Mat::from_int_rows(
                    4,
                    &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]],
                );
                close_group(&[r, s]).expect("S3 closes")
            }
            ModelSpec::Circle => {
                // weights 0, 1, 2
                let a = Mat::from_int_rows(
                    5,
                    &[
                        &[0, 0, 0, 0, 0],
                        &[0, 0, -1, 0, 0],
                        &[0, 1, 0, 0, 0],
                        &[0, 0, 0, 0, -2],
                        &[0, 0, 0, 2, 0],
                    ],
                );
                GroupAction::circle(a).expect("rotation blocks are valid")
            }
        }
    }
}

/// A sampled symplectic G-space with a remembered transverse pair of
/// invariant Lagrangians (the two coordinate halves of W ⊕ W*, transported
/// through products and duals).
#[derive(Debug, Clone)]
pub struct SampledSpace {
    pub space: SympGSpace,
    pub lag0: Subspace,
    pub lag1: Subspace,
}

impl SampledSpace {
    pub fn unit(model: &GroupAction) -> SampledSpace {
        SampledSpace {
            space: SympGSpace::unit(model),
            lag0: Subspace::zero(0),
            lag1: Subspace::zero(0),
        }
    }

    /// X x Ybar with the splitting (lag0_X ⊕ lag1_Y, lag1_X ⊕ lag0_Y).
    pub fn pairing(x: &SampledSpace, y: &SampledSpace) -> SampledSpace {
        SampledSpace {
            space: x.space.product(&y.space.dual()).expect("same model"),
            lag0: x.lag0.block_sum(&y.lag1),
            lag1: x.lag1.block_sum(&y.lag0),
        }
    }

    pub fn product(x: &SampledSpace, y: &SampledSpace) -> SampledSpace {
        SampledSpace {
            space: x.space.product(&y.space).expect("same model"),
            lag0: x.lag0.block_sum(&y.lag0),
            lag1: x.lag1.block_sum(&y.lag1),
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    base: GroupAction,
    model: ModelSpec,
}

impl Sampler {
    /// Deterministic sampler: one stream per trial keeps trials independent
    /// and individually replayable.
    pub fn new(model: ModelSpec, seed: u64, stream: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler {
            rng,
            base: model.base_action(),
            model,
        }
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    pub fn base(&self) -> &GroupAction {
        &self.base
    }

    fn small_int(&mut self) -> i64 {
        // biased toward small values, zeros included
        *[-2, -1, -1, 0, 0, 0, 1, 1, 2]
            .get(self.rng.gen_range(0..9))
            .unwrap()
    }

    fn small_rat(&mut self) -> Rat {
        rat(self.small_int())
    }

    fn random_rows(&mut self, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = self.small_rat();
            }
        }
        m
    }

    /// Random invariant subspace of the action's space, per the generator
    /// contract.
    pub fn invariant_subspace(&mut self, action: &GroupAction) -> Subspace {
        let n = action.dim();
        let k = self.rng.gen_range(0..=n);
        let raw = self.random_rows(k, n);
        let s0 = Subspace::from_spanning_rows(n, &raw);
        match action {
            GroupAction::Trivial { .. } => s0,
            GroupAction::Finite(_) => {
                if s0.is_zero() {
                    return s0;
                }
                // image of the averaged projector onto s0
                let w = Subspace::complement_extend(&s0, &Subspace::full(n))
                    .expect("s0 sits inside the full space");
                let basis = s0.basis().transpose().hstack(&w.basis().transpose());
                let selector = Mat::identity(s0.dim()).block_diag(&Mat::zero(w.dim(), w.dim()));
                let projector = basis
                    .mul(&selector)
                    .mul(&basis.inverse().expect("complement spans"));
                let averaged = reynolds_conjugate(action, &projector).expect("finite model");
                Subspace::from_spanning_rows(n, &averaged.transpose())
            }
            GroupAction::Circle(c) => {
                // largest generator-stable subspace inside s0
                let constraints = s0.constraints();
                let mut power = Mat::identity(n);
                let mut stacked = Mat::zero(0, n);
                for _ in 0..n {
                    stacked = stacked.vstack(&constraints.mul(&power));
                    power = power.mul(c.generator());
                }
                Subspace::kernel(&stacked)
            }
        }
    }

    /// Random subrepresentation of the base with dimension at most max_dim.
    pub fn rep(&mut self, max_dim: usize) -> GroupAction {
        for _ in 0..12 {
            let s = self.invariant_subspace(&self.base.clone());
            if s.dim() <= max_dim && (s.dim() > 0 || self.rng.gen_bool(0.25)) {
                return self
                    .base
                    .restrict(&s)
                    .expect("sampled subspace is invariant");
            }
        }
        self.base.unit_like()
    }

    /// Random symplectic G-space W ⊕ W* with its coordinate splitting.
    pub fn space(&mut self, max_w_dim: usize) -> SampledSpace {
        let w = self.rep(max_w_dim);
        let d = w.dim();
        let space = doubled_space(&w);
        SampledSpace {
            space,
            lag0: Subspace::full(d).embed_cols(2 * d, 0),
            lag1: Subspace::full(d).embed_cols(2 * d, d),
        }
    }

    /// Basis of the space of equivariant maps between two restricted actions
    /// (as matrices from `from`-coordinates to `to`-coordinates), optionally
    /// intersected with the symmetric matrices.
    fn equivariant_maps(
        &self,
        from: &RestrictedAction,
        to: &RestrictedAction,
        symmetric: bool,
    ) -> Vec<Mat> {
        let d = from.dim;
        if d != to.dim {
            return Vec::new();
        }
        if d == 0 {
            return Vec::new();
        }
        let entries = d * d;
        let mut constraints = Mat::zero(0, entries);
        // vectorized condition to(g) * B - B * from(g) = 0 per generator
        for (gt, gf) in to.gens.iter().zip(&from.gens) {
            let mut rows = Mat::zero(entries, entries);
            for i in 0..d {
                for j in 0..d {
                    let row = i * d + j;
                    for k in 0..d {
                        rows[(row, k * d + j)] += gt[(i, k)].clone();
                        rows[(row, i * d + k)] -= gf[(k, j)].clone();
                    }
                }
            }
            constraints = constraints.vstack(&rows);
        }
        if symmetric {
            let mut rows = Mat::zero(entries, entries);
            for i in 0..d {
                for j in 0..d {
                    let row = i * d + j;
                    rows[(row, i * d + j)] += rat(1);
                    rows[(row, j * d + i)] -= rat(1);
                }
            }
            constraints = constraints.vstack(&rows);
        }
        let kernel = Subspace::kernel(&constraints);
        (0..kernel.dim())
            .map(|r| Mat::from_fn(d, d, |i, j| kernel.basis()[(r, i * d + j)].clone()))
            .collect()
    }

    fn random_combination(&mut self, basis: &[Mat], d: usize) -> Mat {
        let mut out = Mat::zero(d, d);
        for b in basis {
            let c = self.small_rat();
            if !c.is_zero() {
                out = out.add(&b.scale(&c));
            }
        }
        out
    }

    /// Random invariant symplectomorphism of the sampled space, as a matrix
    /// on ambient coordinates. Composed from equivariant symmetric shears in
    /// both directions and an equivariant invertible block map.
    pub fn symplectomorphism(&mut self, sp: &SampledSpace) -> Mat {
        let n = sp.space.dim();
        let h = n / 2;
        if n == 0 {
            return Mat::identity(0);
        }
        let b = sp.lag0.basis().clone();
        let c = dual_basis_rows(&sp.space, &sp.lag0, &sp.lag1);
        let frame = b.transpose().hstack(&c.transpose());
        let frame_inv = frame.inverse().expect("the two Lagrangians are transverse");

        let act0 = RestrictedAction::new(sp.space.action(), &b);
        let act1 = RestrictedAction::new(sp.space.action(), &c);
        let uppers = self.equivariant_maps(&act1, &act0, true);
        let lowers = self.equivariant_maps(&act0, &act1, true);
        let diags = self.equivariant_maps(&act0, &act0, false);

        let mut phi = Mat::identity(n);
        let steps = self.rng.gen_range(1..=3);
        for _ in 0..steps {
            let kind = self.rng.gen_range(0..3);
            let block = match kind {
                0 => {
                    let bmat = self.random_combination(&uppers, h);
                    // (u, w) -> (u + B w, w)
                    let mut m = Mat::identity(n);
                    for i in 0..h {
                        for j in 0..h {
                            m[(i, h + j)] = bmat[(i, j)].clone();
                        }
                    }
                    m
                }
                1 => {
                    let cmat = self.random_combination(&lowers, h);
                    let mut m = Mat::identity(n);
                    for i in 0..h {
                        for j in 0..h {
                            m[(h + i, j)] = cmat[(i, j)].clone();
                        }
                    }
                    m
                }
                _ => {
                    // invertible equivariant U on lag0, inverse-transpose on lag1
                    let mut u = Mat::identity(h);
                    for _ in 0..6 {
                        let candidate = self.random_combination(&diags, h);
                        if candidate.rank() == h {
                            u = candidate;
                            break;
                        }
                    }
                    let uinvt = u.inverse().expect("chosen invertible").transpose();
                    u.block_diag(&uinvt)
                }
            };
            phi = phi.mul(&block);
        }
        frame.mul(&phi).mul(&frame_inv)
    }

    /// Random invariant Lagrangian of the sampled space.
    pub fn lagrangian(&mut self, sp: &SampledSpace) -> Subspace {
        let phi = self.symplectomorphism(sp);
        sp.lag0.map_by(&phi)
    }

    /// Random relation X <- Y. A quarter of the draws are block relations
    /// L_X x L_Y (maximally non-graph-like: every composition through them
    /// picks up excess), the rest are symplectomorphism images of the
    /// coordinate Lagrangian of X x Ybar.
    pub fn relation(&mut self, x: &SampledSpace, y: &SampledSpace) -> CanRel {
        let sub = if self.rng.gen_bool(0.25) {
            let lx = self.lagrangian(x);
            let ly = self.lagrangian(y);
            lx.block_sum(&ly)
        } else {
            let pairing = SampledSpace::pairing(x, y);
            self.lagrangian(&pairing)
        };
        CanRel::new(x.space.clone(), y.space.clone(), sub).expect("sampled Lagrangians validate")
    }

    /// Random composable word through freshly sampled spaces.
    pub fn word(&mut self, len: usize, max_w_dim: usize) -> (Vec<SampledSpace>, Word) {
        let spaces: Vec<SampledSpace> = (0..=len).map(|_| self.space(max_w_dim)).collect();
        let factors: Vec<CanRel> = (0..len)
            .map(|i| self.relation(&spaces[i], &spaces[i + 1]))
            .collect();
        (spaces, Word::new(factors).expect("chain by construction"))
    }

    /// Random isomorphism class together with a witness representation.
    pub fn class_with_witness(&mut self, max_dim: usize) -> (IsoClass, GroupAction) {
        let e = self.rep(max_dim);
        (e.class_of_whole(), e)
    }

    /// Random indexed relation between two sampled spaces.
    pub fn indexed(
        &mut self,
        x: &SampledSpace,
        y: &SampledSpace,
        max_class_dim: usize,
    ) -> IndexedRel {
        let rel = self.relation(x, y);
        let (class, _) = self.class_with_witness(max_class_dim);
        IndexedRel::new(rel, class).expect("same model")
    }

    /// Random invariant coisotropic subspace (the orthogonal of a sampled
    /// invariant isotropic).
    pub fn coisotropic(&mut self, sp: &SampledSpace) -> Subspace {
        let s = self.invariant_subspace(sp.space.action());
        let iso = s
            .intersect(&sp.space.symp_orthogonal(&s).expect("same ambient"))
            .expect("same ambient");
        sp.space.symp_orthogonal(&iso).expect("same ambient")
    }

    /// Random (L, J) with L an invariant Lagrangian and J an invariant
    /// isotropic with L ∩ J = 0, plus the transporting symplectomorphism.
    pub fn lagrangian_with_disjoint_isotropic(
        &mut self,
        sp: &SampledSpace,
    ) -> (Subspace, Subspace) {
        let phi = self.symplectomorphism(sp);
        let l = sp.lag0.map_by(&phi);
        let action1 = sp
            .space
            .action()
            .restrict(&sp.lag1)
            .expect("the splitting is invariant");
        let j_small = self.invariant_subspace(&action1);
        let j = Subspace::from_spanning_rows(sp.space.dim(), &j_small.basis().mul(sp.lag1.basis()))
            .map_by(&phi);
        (l, j)
    }

    /// Random invariant isotropic subspace, allowed to meet a Lagrangian.
    pub fn isotropic(&mut self, sp: &SampledSpace) -> Subspace {
        let s = self.invariant_subspace(sp.space.action());
        s.intersect(&sp.space.symp_orthogonal(&s).expect("same ambient"))
            .expect("same ambient")
    }
}

/// Generator matrices of an action restricted to a chosen basis; for the
/// circle this is the single infinitesimal generator, for the trivial model
/// the list is empty.
struct RestrictedAction {
    dim: usize,
    gens: Vec<Mat>,
}

impl RestrictedAction {
    fn new(action: &GroupAction, basis_rows: &Mat) -> RestrictedAction {
        let bt = basis_rows.transpose();
        let gens = match action {
            GroupAction::Trivial { .. } => Vec::new(),
            GroupAction::Finite(f) => {
                let group = f.group();
                (0..group.num_generators())
                    .map(|gi| {
                        let g = &f.mats()[group.generator_element(gi)];
                        bt.solve(&g.mul(&bt))
                            .expect("basis spans an invariant subspace")
                    })
                    .collect()
            }
            GroupAction::Circle(c) => {
                vec![bt
                    .solve(&c.generator().mul(&bt))
                    .expect("basis spans an invariant subspace")]
            }
        };
        RestrictedAction {
            dim: basis_rows.rows(),
            gens,
        }
    }
}
