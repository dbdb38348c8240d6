//! Group models, invariance checks, isomorphism classes of linear G-spaces,
//! and the averaging constructions that produce invariant complements.
//!
//! Three models are supported: the trivial group, finite matrix groups given
//! by closure of a generator list, and the circle acting through a rational
//! infinitesimal generator similar to a direct sum of integer-weight rotation
//! blocks. Averaging (and everything built on it) is only available where the
//! group average is a finite sum, i.e. for the trivial and finite models.

mod complement;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat, Mat, Rat, Subspace};

pub use complement::{
    invariant_complement, invariant_complement_within, invariant_lagrangian_complement,
};

/// Default cap on finite-group closure; exceeding it signals a non-finite or
/// unreasonably large matrix group.
pub const CLOSURE_CAP: usize = 10_000;

/// Abstract finite group produced by closing a generator list: element 0 is
/// the identity, elements are ordered breadth-first with generators taken in
/// the given order. Products are answered through the stored generator
/// translation columns, so the full multiplication grid never has to be
/// materialized for large groups.
#[derive(Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    num_gens: usize,
    /// gen_cols[i][g] = index of element_i * generator_g.
    gen_cols: Vec<Vec<usize>>,
    /// Generator word (indices into the generator list) for each element.
    words: Vec<Vec<usize>>,
    /// Element index of each generator.
    gen_elems: Vec<usize>,
    /// Element index of each generator's inverse.
    gen_inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_generators(&self) -> usize {
        self.num_gens
    }

    pub fn generator_element(&self, g: usize) -> usize {
        self.gen_elems[g]
    }

    /// Index of element_i * element_j.
    pub fn mult(&self, i: usize, j: usize) -> usize {
        self.words[j]
            .iter()
            .fold(i, |acc, &g| self.gen_cols[acc][g])
    }

    /// Index of the inverse of element_i.
    pub fn inverse(&self, i: usize) -> usize {
        self.words[i]
            .iter()
            .rev()
            .fold(0, |acc, &g| self.mult(acc, self.gen_inverse[g]))
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }
}

/// A finite group together with one rational matrix per element.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    group: Arc<FiniteGroup>,
    mats: Vec<Mat>,
}

impl PartialEq for FiniteAction {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.mats == other.mats
    }
}

impl Eq for FiniteAction {}

impl FiniteAction {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn dim(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn same_group(&self, other: &FiniteAction) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    /// Representation of the same abstract group from images of its
    /// generators. Verifies that the assignment respects every product
    /// against the group's translation structure.
    pub fn from_generator_images(
        group: &Arc<FiniteGroup>,
        images: Vec<Mat>,
    ) -> Result<FiniteAction> {
        if images.len() != group.num_gens {
            return Err(Error::ShapeMismatch(format!(
                "expected {} generator images, got {}",
                group.num_gens,
                images.len()
            )));
        }
        let dim = images.first().map_or(0, Mat::rows);
        for m in &images {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::ShapeMismatch(
                    "generator images must be square of one size".into(),
                ));
            }
            if m.rank() != dim {
                return Err(Error::NotInvertible);
            }
        }
        let mut mats = vec![Mat::identity(dim); group.order];
        // elements are BFS-ordered, so each word prefix is already computed
        for i in 1..group.order {
            let w = &group.words[i];
            let prefix = group.words[i][..w.len() - 1].to_vec();
            let prefix_idx = prefix.iter().fold(0, |acc, &g| group.gen_cols[acc][g]);
            mats[i] = mats[prefix_idx].mul(&images[*w.last().unwrap()]);
        }
        // homomorphism check: rho(e) * rho(g) = rho(e*g) for all e, generators g
        for i in 0..group.order {
            for (g, image) in images.iter().enumerate() {
                let target = group.gen_cols[i][g];
                if mats[i].mul(image) != mats[target] {
                    return Err(Error::ShapeMismatch(
                        "generator images do not define a representation of the group".into(),
                    ));
                }
            }
        }
        Ok(FiniteAction {
            group: Arc::clone(group),
            mats,
        })
    }
}

/// Circle action through an infinitesimal generator A that must be similar
/// to a direct sum of integer-weight rotation blocks and a zero block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleAction {
    generator: Mat,
    /// Positive weights with nonzero multiplicity, ascending.
    weights: Vec<u32>,
}

impl CircleAction {
    /// Validates through the minimal polynomial: the generator is a direct
    /// sum of integer-weight rotation blocks and a zero block exactly when
    /// its minimal polynomial is x^e * prod (x^2 + k^2) with e in {0, 1} and
    /// distinct positive integers k.
    pub fn new(generator: Mat) -> Result<CircleAction> {
        if !generator.is_square() {
            return Err(Error::ShapeMismatch(
                "circle generator must be square".into(),
            ));
        }
        let n = generator.rows();
        if n == 0 {
            return Ok(CircleAction {
                generator,
                weights: Vec::new(),
            });
        }
        let mut mu = generator.minimal_polynomial();
        // strip a single factor of x
        if mu[0].is_zero() {
            mu.remove(0);
            if mu[0].is_zero() {
                return Err(Error::InvalidCircleGenerator);
            }
        }
        // only even powers may remain
        if mu.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return Err(Error::InvalidCircleGenerator);
        }
        // substitute y = x^2; roots must be -k^2 for distinct integers k
        let mut p: Vec<Rat> = mu.iter().step_by(2).cloned().collect();
        if p.iter().any(|c| !c.denom().is_one()) {
            return Err(Error::InvalidCircleGenerator);
        }
        let eigen_bound = generator
            .row_sum_norm()
            .floor()
            .to_integer()
            .to_u64()
            .unwrap_or(0);
        let mut weights: Vec<u32> = Vec::new();
        let mut k: u64 = 1;
        while p.len() > 1 {
            if k > eigen_bound {
                return Err(Error::InvalidCircleGenerator);
            }
            let root = rat(-((k * k) as i64));
            let value = p.iter().rev().fold(Rat::zero(), |acc, c| acc * &root + c);
            if value.is_zero() {
                p = synthetic_divide(&p, &root);
                let again = p.iter().rev().fold(Rat::zero(), |acc, c| acc * &root + c);
                if again.is_zero() {
                    // repeated factor: not semisimple
                    return Err(Error::InvalidCircleGenerator);
                }
                weights.push(k as u32);
            }
            k += 1;
        }
        debug_assert!({
            let a2 = generator.mul(&generator);
            let mut total = Subspace::kernel(&generator).dim();
            for &k in &weights {
                let shift = a2.add(&Mat::identity(n).scale(&rat((k as i64) * (k as i64))));
                total += Subspace::kernel(&shift).dim();
            }
            total == n
        });
        Ok(CircleAction { generator, weights })
    }

    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    /// Validated positive weight set of the ambient space.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }
}

/// A group model together with its representation on one rational space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAction {
    Trivial { dim: usize },
    Finite(FiniteAction),
    Circle(CircleAction),
}

/// Divides a polynomial (ascending coefficients) by (y - root), exactly.
fn synthetic_divide(p: &[Rat], root: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len() - 1];
    let mut carry = Rat::zero();
    for i in (0..p.len() - 1).rev() {
        let c = &p[i + 1] + &carry;
        carry = &c * root;
        out[i] = c;
    }
    debug_assert!((&p[0] + &carry).is_zero(), "root must divide exactly");
    out
}

/// Closes a list of invertible generators into a finite matrix group,
/// breadth-first from the identity with generators in the given order.
pub fn close_group(generators: &[Mat]) -> Result<GroupAction> {
    close_group_capped(generators, CLOSURE_CAP)
}

pub fn close_group_capped(generators: &[Mat], cap: usize) -> Result<GroupAction> {
    if generators.is_empty() {
        return Err(Error::ShapeMismatch(
            "finite model needs at least one generator".into(),
        ));
    }
    let dim = generators[0].rows();
    for g in generators {
        if !g.is_square() || g.rows() != dim {
            return Err(Error::ShapeMismatch(
                "generators must be square of one size".into(),
            ));
        }
        if g.rank() != dim {
            return Err(Error::NotInvertible);
        }
    }
    let mut elems: Vec<Mat> = vec![Mat::identity(dim)];
    let mut index: BTreeMap<Mat, usize> = BTreeMap::new();
    index.insert(elems[0].clone(), 0);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut gen_cols: Vec<Vec<usize>> = Vec::new();
    let mut cursor = 0usize;
    while cursor < elems.len() {
        let mut row = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            let prod = elems[cursor].mul(g);
            let idx = match index.get(&prod) {
                Some(&i) => i,
                None => {
                    if elems.len() >= cap {
                        return Err(Error::ClosureCapExceeded(cap));
                    }
                    let i = elems.len();
                    index.insert(prod.clone(), i);
                    elems.push(prod);
                    let mut w = words[cursor].clone();
                    w.push(gi);
                    words.push(w);
                    i
                }
            };
            row.push(idx);
        }
        gen_cols.push(row);
        cursor += 1;
    }
    let gen_elems: Vec<usize> = generators.iter().map(|g| index[g]).collect();
    // inverse of each generator by walking its cyclic orbit from the identity
    let gen_inverse: Vec<usize> = (0..generators.len())
        .map(|gi| {
            let mut prev = 0usize;
            let mut cur = gen_cols[0][gi];
            while cur != 0 {
                prev = cur;
                cur = gen_cols[cur][gi];
            }
            prev
        })
        .collect();
    let group = FiniteGroup {
        order: elems.len(),
        num_gens: generators.len(),
        gen_cols,
        words,
        gen_elems,
        gen_inverse,
    };
    Ok(GroupAction::Finite(FiniteAction {
        group: Arc::new(group),
        mats: elems,
    }))
}

impl GroupAction {
    pub fn trivial(dim: usize) -> GroupAction {
        GroupAction::Trivial { dim }
    }

    pub fn circle(generator: Mat) -> Result<GroupAction> {
        Ok(GroupAction::Circle(CircleAction::new(generator)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupAction::Trivial { dim } => *dim,
            GroupAction::Finite(f) => f.dim(),
            GroupAction::Circle(c) => c.dim(),
        }
    }

    /// True when the two actions are representations of one abstract group
    /// model, so that product spaces and relations between them make sense.
    pub fn same_model(&self, other: &GroupAction) -> bool {
        match (self, other) {
            (GroupAction::Trivial { .. }, GroupAction::Trivial { .. }) => true,
            (GroupAction::Finite(a), GroupAction::Finite(b)) => a.same_group(b),
            (GroupAction::Circle(_), GroupAction::Circle(_)) => true,
            _ => false,
        }
    }

    /// Block-diagonal action on the direct sum, same abstract group.
    pub fn product(&self, other: &GroupAction) -> Result<GroupAction> {
        if !self.same_model(other) {
            return Err(Error::GroupModelMismatch);
        }
        Ok(match (self, other) {
            (GroupAction::Trivial { dim: a }, GroupAction::Trivial { dim: b }) => {
                GroupAction::Trivial { dim: a + b }
            }
            (GroupAction::Finite(a), GroupAction::Finite(b)) => GroupAction::Finite(FiniteAction {
                group: Arc::clone(&a.group),
                mats: a
                    .mats
                    .iter()
                    .zip(&b.mats)
                    .map(|(x, y)| x.block_diag(y))
                    .collect(),
            }),
            (GroupAction::Circle(a), GroupAction::Circle(b)) => {
                GroupAction::Circle(CircleAction::new(a.generator.block_diag(&b.generator))?)
            }
            _ => unreachable!(),
        })
    }

    /// Dual representation: inverse-transpose per element (minus transpose of
    /// the infinitesimal generator for the circle).
    pub fn contragredient(&self) -> GroupAction {
        match self {
            GroupAction::Trivial { dim } => GroupAction::Trivial { dim: *dim },
            GroupAction::Finite(f) => GroupAction::Finite(FiniteAction {
                group: Arc::clone(&f.group),
                mats: f
                    .mats
                    .iter()
                    .map(|m| {
                        m.inverse()
                            .expect("group elements are invertible")
                            .transpose()
                    })
                    .collect(),
            }),
            GroupAction::Circle(c) => GroupAction::Circle(
                CircleAction::new(c.generator.transpose().neg())
                    .expect("contragredient of a valid circle generator is valid"),
            ),
        }
    }

    /// Zero-dimensional representation of the same abstract model.
    pub fn unit_like(&self) -> GroupAction {
        self.trivial_rep_like(0)
    }

    /// Trivial representation of the same abstract model on a given dimension.
    pub fn trivial_rep_like(&self, dim: usize) -> GroupAction {
        match self {
            GroupAction::Trivial { .. } => GroupAction::Trivial { dim },
            GroupAction::Finite(f) => GroupAction::Finite(FiniteAction {
                group: Arc::clone(&f.group),
                mats: vec![Mat::identity(dim); f.group.order],
            }),
            GroupAction::Circle(_) => GroupAction::Circle(
                CircleAction::new(Mat::zero(dim, dim)).expect("zero generator is valid"),
            ),
        }
    }

    /// True iff the subspace is carried to itself by the whole action.
    pub fn is_invariant(&self, s: &Subspace) -> bool {
        self.restrict(s).is_ok()
    }

    /// The action written in the basis of an invariant subspace.
    pub fn restrict(&self, s: &Subspace) -> Result<GroupAction> {
        assert_eq!(
            s.ambient_dim(),
            self.dim(),
            "subspace must live in the action's space"
        );
        let bt = s.basis().transpose();
        match self {
            GroupAction::Trivial { .. } => Ok(GroupAction::Trivial { dim: s.dim() }),
            GroupAction::Finite(f) => {
                let mut mats = Vec::with_capacity(f.mats.len());
                for g in &f.mats {
                    let m = bt.solve(&g.mul(&bt)).ok_or(Error::NotInvariant)?;
                    mats.push(m);
                }
                Ok(GroupAction::Finite(FiniteAction {
                    group: Arc::clone(&f.group),
                    mats,
                }))
            }
            GroupAction::Circle(c) => {
                let m = bt.solve(&c.generator.mul(&bt)).ok_or(Error::NotInvariant)?;
                Ok(GroupAction::Circle(CircleAction::new(m)?))
            }
        }
    }

    /// Isomorphism class of an invariant subspace as a linear G-space.
    pub fn iso_class(&self, s: &Subspace) -> Result<IsoClass> {
        let restricted = self.restrict(s)?;
        Ok(restricted.class_of_whole())
    }

    /// Isomorphism class of the whole representation space.
    pub fn class_of_whole(&self) -> IsoClass {
        match self {
            GroupAction::Trivial { dim } => IsoClass::TrivialDim(*dim),
            GroupAction::Finite(f) => IsoClass::FiniteChar(
                f.mats
                    .iter()
                    .map(|m| (0..m.rows()).fold(Rat::zero(), |acc, i| acc + &m[(i, i)]))
                    .collect(),
            ),
            GroupAction::Circle(c) => {
                let n = c.dim();
                let mut mults = BTreeMap::new();
                let n0 = Subspace::kernel(&c.generator).dim();
                if n0 > 0 {
                    mults.insert(0u32, n0);
                }
                let a2 = c.generator.mul(&c.generator);
                for &k in &c.weights {
                    let shift = a2.add(&Mat::identity(n).scale(&rat((k as i64) * (k as i64))));
                    let d = Subspace::kernel(&shift).dim();
                    if d > 0 {
                        debug_assert_eq!(d % 2, 0);
                        mults.insert(k, d / 2);
                    }
                }
                IsoClass::CircleWeights(mults)
            }
        }
    }

    /// Zero isomorphism class of this action's model.
    pub fn zero_class(&self) -> IsoClass {
        match self {
            GroupAction::Trivial { .. } => IsoClass::TrivialDim(0),
            GroupAction::Finite(f) => IsoClass::FiniteChar(vec![Rat::zero(); f.group.order]),
            GroupAction::Circle(_) => IsoClass::CircleWeights(BTreeMap::new()),
        }
    }
}

/// An invariant subspace together with the ambient action and the action
/// restricted to a basis of the subspace.
#[derive(Debug, Clone)]
pub struct GSubspaceWitness {
    pub ambient_action: GroupAction,
    pub subspace: Subspace,
    pub restricted: GroupAction,
}

impl GSubspaceWitness {
    pub fn new(ambient_action: GroupAction, subspace: Subspace) -> Result<GSubspaceWitness> {
        let restricted = ambient_action.restrict(&subspace)?;
        Ok(GSubspaceWitness {
            ambient_action,
            subspace,
            restricted,
        })
    }

    pub fn iso_class(&self) -> IsoClass {
        self.restricted.class_of_whole()
    }
}

/// An isomorphism class of finite-dimensional linear G-spaces: a bare
/// dimension for the trivial model, a character vector for a finite group,
/// a finitely supported weight-multiplicity sequence for the circle.
/// Classes form a commutative monoid under direct sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoClass {
    TrivialDim(usize),
    FiniteChar(Vec<Rat>),
    CircleWeights(BTreeMap<u32, usize>),
}

impl IsoClass {
    pub fn same_model(&self, other: &IsoClass) -> bool {
        match (self, other) {
            (IsoClass::TrivialDim(_), IsoClass::TrivialDim(_)) => true,
            (IsoClass::FiniteChar(a), IsoClass::FiniteChar(b)) => a.len() == b.len(),
            (IsoClass::CircleWeights(_), IsoClass::CircleWeights(_)) => true,
            _ => false,
        }
    }

    /// Direct sum of classes (componentwise addition).
    pub fn add(&self, other: &IsoClass) -> Result<IsoClass> {
        if !self.same_model(other) {
            return Err(Error::GroupModelMismatch);
        }
        Ok(match (self, other) {
            (IsoClass::TrivialDim(a), IsoClass::TrivialDim(b)) => IsoClass::TrivialDim(a + b),
            (IsoClass::FiniteChar(a), IsoClass::FiniteChar(b)) => {
                IsoClass::FiniteChar(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (IsoClass::CircleWeights(a), IsoClass::CircleWeights(b)) => {
                let mut out = a.clone();
                for (&k, &m) in b {
                    *out.entry(k).or_insert(0) += m;
                }
                out.retain(|_, m| *m > 0);
                IsoClass::CircleWeights(out)
            }
            _ => unreachable!(),
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            IsoClass::TrivialDim(d) => *d == 0,
            IsoClass::FiniteChar(v) => v.iter().all(Zero::is_zero),
            IsoClass::CircleWeights(m) => m.values().all(|&x| x == 0),
        }
    }

    /// Dimension of any representative.
    pub fn dimension(&self) -> Rat {
        match self {
            IsoClass::TrivialDim(d) => rat(*d as i64),
            IsoClass::FiniteChar(v) => v.first().cloned().unwrap_or_else(Rat::zero),
            IsoClass::CircleWeights(m) => {
                let total: usize = m
                    .iter()
                    .map(|(&k, &mult)| if k == 0 { mult } else { 2 * mult })
                    .sum();
                rat(total as i64)
            }
        }
    }
}

/// Exact equality of isomorphism classes.
pub fn class_equal(a: &IsoClass, b: &IsoClass) -> bool {
    a == b
}

/// Averages a square matrix over the group by conjugation, with exact
/// weights 1/|G|; the result commutes with every element. Identity for the
/// trivial model, unsupported for the circle.
pub fn reynolds_conjugate(action: &GroupAction, m: &Mat) -> Result<Mat> {
    match action {
        GroupAction::Trivial { .. } => Ok(m.clone()),
        GroupAction::Finite(f) => {
            let n = f.dim();
            let mut acc = Mat::zero(n, n);
            for g in &f.mats {
                let ginv = g.inverse().expect("group elements are invertible");
                acc = acc.add(&g.mul(m).mul(&ginv));
            }
            Ok(acc.scale(&Rat::new(
                num::BigInt::one(),
                num::BigInt::from(f.mats.len()),
            )))
        }
        GroupAction::Circle(_) => Err(Error::UnsupportedGroupModel),
    }
}
