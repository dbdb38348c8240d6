//! The Wehrheim-Woodward category of equivariant linear canonical relations:
//! words of relations, trajectory spaces, excess, indexed canonical
//! relations with the classified composition law, traces, and the two
//! normal-form constructions.

mod normal_form;

pub use normal_form::{
    hyper_normal_form, lemma4_normal_form, HyperLagrangianForm, Lemma4Blocks, Lemma4Form,
    Lemma4Signature,
};

use crate::error::{Error, Result};
use crate::grouprep::{GSubspaceWitness, IsoClass};
use crate::linalg::{Mat, Subspace};
use crate::relations::{delta, epsilon, swap_rel, CanRel};
use crate::symplectic::SympGSpace;

/// A composable word of canonical relations; the raw, unclassified form of a
/// WW morphism. Factor i+1's source must equal factor i's target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    factors: Vec<CanRel>,
}

impl Word {
    pub fn new(factors: Vec<CanRel>) -> Result<Word> {
        if factors.is_empty() {
            return Err(Error::InvalidWord(
                "a word needs at least one factor".into(),
            ));
        }
        for pair in factors.windows(2) {
            if pair[0].target() != pair[1].source() {
                return Err(Error::InvalidWord(
                    "factor target does not match the next factor's source".into(),
                ));
            }
        }
        Ok(Word { factors })
    }

    pub fn singleton(f: CanRel) -> Word {
        Word { factors: vec![f] }
    }

    pub fn factors(&self) -> &[CanRel] {
        &self.factors
    }

    pub fn source(&self) -> &SympGSpace {
        self.factors[0].source()
    }

    pub fn target(&self) -> &SympGSpace {
        self.factors.last().unwrap().target()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Word::new(factors)
    }

    /// Set-theoretic composition of the factors (a left fold; composition is
    /// associative so the fold order does not matter).
    pub fn shadow(&self) -> CanRel {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = acc.compose(f).expect("word factors are composable");
        }
        acc
    }

    /// The space of trajectories from 0 to 0: chains (q_1, ..., q_{n-1}) of
    /// intermediate points with (0, q_1) in f_1, (q_i, q_{i+1}) in f_{i+1}
    /// and (q_{n-1}, 0) in f_n, with the componentwise G-action. Length-1
    /// words give the zero space of ambient 0 by convention.
    pub fn trajectory_space(&self) -> GSubspaceWitness {
        let n = self.factors.len();
        let model = self.source().action();
        if n == 1 {
            return GSubspaceWitness::new(model.unit_like(), Subspace::zero(0))
                .expect("the zero space is invariant");
        }
        let inter: Vec<&SympGSpace> = (1..n).map(|i| self.factors[i].source()).collect();
        let dims: Vec<usize> = inter.iter().map(|s| s.dim()).collect();
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total: usize = dims.iter().sum();

        let mut constraints = Mat::zero(0, total);
        // (0, q_1) in f_1
        let x0 = self.factors[0].source().dim();
        let c1 = self.factors[0].sub().constraints();
        constraints = constraints.vstack(
            &c1.select_cols(x0..x0 + dims[0])
                .embed_cols(total, offsets[0]),
        );
        // (q_i, q_{i+1}) in f_{i+1}: adjacent blocks are contiguous
        for (i, &offset) in offsets.iter().take(n - 2).enumerate() {
            let c = self.factors[i + 1].sub().constraints();
            constraints = constraints.vstack(&c.embed_cols(total, offset));
        }
        // (q_{n-1}, 0) in f_n
        let clast = self.factors[n - 1].sub().constraints();
        let ylast = dims[n - 2];
        constraints = constraints.vstack(
            &clast
                .select_cols(0..ylast)
                .embed_cols(total, offsets[n - 2]),
        );

        let t = Subspace::kernel(&constraints);
        let ambient_action = inter
            .iter()
            .skip(1)
            .fold(inter[0].action().clone(), |acc, s| {
                acc.product(s.action()).expect("one model per word")
            });
        GSubspaceWitness::new(ambient_action, t).expect("trajectory spaces are invariant")
    }

    /// Isomorphism class of the trajectory space.
    pub fn excess(&self) -> IsoClass {
        self.trajectory_space().iso_class()
    }

    /// The classified form (shadow, excess) of the word.
    pub fn normalize(&self) -> IndexedRel {
        IndexedRel {
            rel: self.shadow(),
            index: self.excess(),
        }
    }

    /// The graph hypermorphism taken factor by factor: every factor but the
    /// last is tensored with the identity of Ybar and the last is replaced by
    /// its graph, giving a word (X x Ybar) <- ... <- 1 with the same excess.
    pub fn graph_word_direct(&self) -> Word {
        let n = self.factors.len();
        if n == 1 {
            return Word::singleton(self.factors[0].graph());
        }
        let ybar = self.target().dual();
        let id_ybar = CanRel::identity(&ybar);
        let mut factors = Vec::with_capacity(n);
        for f in &self.factors[..n - 1] {
            factors.push(f.product_rel(&id_ybar).expect("same model"));
        }
        factors.push(self.factors[n - 1].graph());
        Word::new(factors).expect("graph word factors chain by construction")
    }

    /// The graph hypermorphism as a two-factor word: the tensor product of
    /// all factor graphs, preceded by the contraction that pins each
    /// Qbar_i x Q_i pair to its diagonal. Same excess again.
    pub fn graph_word_product(&self) -> Word {
        let n = self.factors.len();
        if n == 1 {
            return Word::singleton(self.factors[0].graph());
        }
        let graphs: Vec<CanRel> = self.factors.iter().map(CanRel::graph).collect();
        let tensor = graphs[1..].iter().fold(graphs[0].clone(), |acc, g| {
            acc.product_rel(g).expect("same model")
        });

        let x0 = self.source().dim();
        let y = self.target().dim();
        let big = tensor.source();
        let small = self
            .source()
            .product(&self.target().dual())
            .expect("same model");
        let total_big = big.dim();
        let total = small.dim() + total_big;
        let inter_dims: Vec<usize> = (1..n).map(|i| self.factors[i].source().dim()).collect();

        let mut rows = Mat::zero(0, total);
        // x block: identical in both halves
        let mut xr = Mat::zero(x0, total);
        for i in 0..x0 {
            xr[(i, i)] = crate::linalg::rat(1);
            xr[(i, x0 + y + i)] = crate::linalg::rat(1);
        }
        rows = rows.vstack(&xr);
        // each q_i appears twice in the big space: as Qbar_i then as Q_i
        let mut off = x0 + y + x0;
        for &d in &inter_dims {
            let mut qr = Mat::zero(d, total);
            for i in 0..d {
                qr[(i, off + i)] = crate::linalg::rat(1);
                qr[(i, off + d + i)] = crate::linalg::rat(1);
            }
            rows = rows.vstack(&qr);
            off += 2 * d;
        }
        // y block
        let mut yr = Mat::zero(y, total);
        for i in 0..y {
            yr[(i, x0 + i)] = crate::linalg::rat(1);
            yr[(i, off + i)] = crate::linalg::rat(1);
        }
        rows = rows.vstack(&yr);

        let contraction = CanRel::from_rows(small, big.clone(), &rows)
            .expect("the contraction relation is always valid");
        Word::new(vec![contraction, tensor]).expect("two-factor graph word chains")
    }
}

/// An indexed canonical relation (f, K): the classified form of a WW
/// morphism, a relation together with an isomorphism class of linear
/// G-spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedRel {
    rel: CanRel,
    index: IsoClass,
}

impl IndexedRel {
    pub fn new(rel: CanRel, index: IsoClass) -> Result<IndexedRel> {
        if !index.same_model(&rel.source().action().zero_class()) {
            return Err(Error::GroupModelMismatch);
        }
        Ok(IndexedRel { rel, index })
    }

    /// A bare relation with zero index.
    pub fn from_rel(rel: CanRel) -> IndexedRel {
        let index = rel.source().action().zero_class();
        IndexedRel { rel, index }
    }

    pub fn rel(&self) -> &CanRel {
        &self.rel
    }

    pub fn index(&self) -> &IsoClass {
        &self.index
    }

    /// Composition law of the classified category:
    /// (f', K')(f'', K'') = (f'f'', K' + K'' + excess of the pair).
    pub fn compose(&self, other: &IndexedRel) -> Result<IndexedRel> {
        let pair = self.rel.pair_excess(&other.rel)?;
        Ok(IndexedRel {
            rel: self.rel.compose(&other.rel)?,
            index: self.index.add(&other.index)?.add(&pair)?,
        })
    }

    /// Monoidal product: (f' x f'', K' ⊕ K'').
    pub fn tensor(&self, other: &IndexedRel) -> Result<IndexedRel> {
        Ok(IndexedRel {
            rel: self.rel.product_rel(&other.rel)?,
            index: self.index.add(&other.index)?,
        })
    }

    /// Equality of WW morphisms: same shadow and same excess.
    pub fn equal(&self, other: &IndexedRel) -> Result<bool> {
        if self.rel.source() != other.rel.source() || self.rel.target() != other.rel.target() {
            return Err(Error::NotComposable);
        }
        Ok(self.rel.sub() == other.rel.sub() && self.index == other.index)
    }

    /// Trace of an endomorphism: K ⊕ [fixed-point space of f]. Cross-checked
    /// against the compositional definition through the counit and the graph.
    pub fn trace(&self) -> Result<IsoClass> {
        if !self.rel.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        let x = self.rel.source();
        let n = x.dim();
        let c = self.rel.sub().constraints();
        let fixed = Subspace::kernel(&c.select_cols(0..n).add(&c.select_cols(n..2 * n)));
        let fixed_class = x.action().iso_class(&fixed)?;

        let word = Word::new(vec![epsilon(x), self.rel.graph()])?;
        assert_eq!(
            word.excess(),
            fixed_class,
            "fixed-point and compositional traces must agree"
        );

        self.index.add(&fixed_class)
    }

    /// The shifting action of the endomorphism monoid of the unit object:
    /// K' . (f, K) = (f, K' ⊕ K).
    pub fn shift(&self, class: &IsoClass) -> Result<IndexedRel> {
        Ok(IndexedRel {
            rel: self.rel.clone(),
            index: class.add(&self.index)?,
        })
    }
}

/// The snake word of X under the fixed braiding convention:
/// (eps_X x 1_X) after the middle swap after (1_X x delta_X). Normalizes to
/// the identity of X with zero index, and every pair involved is congenial.
pub fn snake_word(x: &SympGSpace) -> Word {
    let id = CanRel::identity(x);
    let leg1 = id.product_rel(&delta(x)).expect("same model");
    let sigma = id
        .product_rel(&swap_rel(x, &x.dual()).expect("same model"))
        .expect("same model");
    let leg2 = epsilon(x).product_rel(&id).expect("same model");
    Word::new(vec![leg2, sigma, leg1]).expect("snake factors chain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{close_group, GroupAction};
    use crate::linalg::rat;

    fn m(cols: usize, rows: &[&[i64]]) -> Mat {
        Mat::from_int_rows(cols, rows)
    }

    fn sub(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_spanning_rows(ambient, &m(ambient, rows))
    }

    fn q2() -> SympGSpace {
        SympGSpace::standard(1, GroupAction::trivial(2)).unwrap()
    }

    fn ell(x: &SympGSpace) -> CanRel {
        CanRel::lagrangian_insertion(x, &sub(2, &[&[1, 0]])).unwrap()
    }

    #[test]
    fn shadow_cases() {
        let x = q2();
        let id = CanRel::identity(&x);
        // graph of the shear [[1,1],[0,1]]
        let f = CanRel::from_rows(x.clone(), x.clone(), &m(4, &[&[1, 0, 1, 0], &[1, 1, 0, 1]]))
            .unwrap();
        assert_eq!(Word::singleton(f.clone()).shadow(), f);
        let w = Word::new(vec![id.clone(), f.clone(), id.clone()]).unwrap();
        assert_eq!(w.shadow(), f);

        let l = ell(&x);
        let w = Word::new(vec![l.transpose(), l.clone()]).unwrap();
        let s = w.shadow();
        assert!(s.source().is_unit() && s.target().is_unit());
    }

    #[test]
    fn trajectory_space_cases() {
        let x = q2();
        let id = CanRel::identity(&x);
        let w = Word::new(vec![id.clone(), id.clone()]).unwrap();
        assert!(w.trajectory_space().subspace.is_zero());

        let l = ell(&x);
        let w = Word::new(vec![l.transpose(), l.clone()]).unwrap();
        let t = w.trajectory_space();
        assert_eq!(t.subspace, sub(2, &[&[1, 0]]));
        assert_eq!(w.excess(), IsoClass::TrivialDim(1));

        let em = CanRel::lagrangian_insertion(&x, &sub(2, &[&[0, 1]])).unwrap();
        let w = Word::new(vec![em.transpose(), l.clone()]).unwrap();
        assert!(w.trajectory_space().subspace.is_zero());

        // single relation: zero excess by convention
        assert!(Word::singleton(l).excess().is_zero());
    }

    #[test]
    fn excess_sees_the_group() {
        let z2 = close_group(&[Mat::identity(2).neg()]).unwrap();
        let x = SympGSpace::standard(1, z2).unwrap();
        let l = CanRel::lagrangian_insertion(&x, &sub(2, &[&[1, 0]])).unwrap();
        let w = Word::new(vec![l.transpose(), l]).unwrap();
        assert_eq!(w.excess(), IsoClass::FiniteChar(vec![rat(1), rat(-1)]));
    }

    #[test]
    fn normalize_and_congruence() {
        let x = q2();
        let l = ell(&x);
        let w = Word::new(vec![l.transpose(), l.clone()]).unwrap();
        let n = w.normalize();
        assert_eq!(n.index(), &IsoClass::TrivialDim(1));

        // normalize is a congruence with respect to concatenation
        let w1 = Word::singleton(l.transpose());
        let w2 = Word::singleton(l);
        let combined = w1.concat(&w2).unwrap().normalize();
        let composed = w1.normalize().compose(&w2.normalize()).unwrap();
        assert!(combined.equal(&composed).unwrap());
    }

    #[test]
    fn ww_compose_identity_laws() {
        let x = q2();
        let id = IndexedRel::from_rel(CanRel::identity(&x));
        let l = IndexedRel::from_rel(ell(&x));
        let out = id.compose(&l).unwrap();
        assert!(out.equal(&l).unwrap());
        // (l^T, 0)(l, 0) = (1 <- 1, TrivialDim(1))
        let lt = IndexedRel::from_rel(ell(&x).transpose());
        let out = lt.compose(&l).unwrap();
        assert_eq!(out.index(), &IsoClass::TrivialDim(1));
    }

    #[test]
    fn tensor_unit_and_dims() {
        let x = q2();
        let unit = SympGSpace::unit(x.action());
        let f = IndexedRel::from_rel(CanRel::identity(&x));
        let one = IndexedRel::from_rel(CanRel::identity(&unit));
        let out = f.tensor(&one).unwrap();
        assert_eq!(out.rel().sub(), f.rel().sub());
        assert_eq!(out.index(), f.index());

        let l = IndexedRel::from_rel(ell(&x));
        let p = f.tensor(&l).unwrap();
        assert_eq!(
            p.rel().sub().dim(),
            f.rel().sub().dim() + l.rel().sub().dim()
        );
    }

    #[test]
    fn ww_equal_distinguishes_index() {
        let x = q2();
        let f = CanRel::identity(&x);
        let a = IndexedRel::from_rel(f.clone());
        let b = IndexedRel::new(f, IsoClass::TrivialDim(1)).unwrap();
        assert!(!a.equal(&b).unwrap());
        assert!(a.equal(&a).unwrap());
    }

    #[test]
    fn trace_cases() {
        let x = q2();
        let id = IndexedRel::from_rel(CanRel::identity(&x));
        assert_eq!(id.trace().unwrap(), IsoClass::TrivialDim(2));

        // graph of -Id is a valid relation; its fixed space is 0
        let neg = CanRel::from_rows(
            x.clone(),
            x.clone(),
            &Mat::identity(2).neg().hstack(&Mat::identity(2)),
        )
        .unwrap();
        let t = IndexedRel::from_rel(neg.clone()).trace().unwrap();
        assert!(t.is_zero());

        // trace(f, K) = trace(f, 0) ⊕ K
        let shifted = IndexedRel::new(neg, IsoClass::TrivialDim(3)).unwrap();
        assert_eq!(shifted.trace().unwrap(), IsoClass::TrivialDim(3));

        let l = IndexedRel::from_rel(ell(&x));
        assert_eq!(l.trace().unwrap_err(), Error::NotEndomorphism);
    }

    #[test]
    fn shift_action() {
        let x = q2();
        let f = IndexedRel::from_rel(CanRel::identity(&x));
        let shifted = f.shift(&IsoClass::TrivialDim(0)).unwrap();
        assert!(shifted.equal(&f).unwrap());
        let shifted = f.shift(&IsoClass::TrivialDim(2)).unwrap();
        assert_eq!(shifted.index(), &IsoClass::TrivialDim(2));
    }

    #[test]
    fn snake_normalizes_to_identity() {
        for x in [
            q2(),
            SympGSpace::standard(2, GroupAction::trivial(4)).unwrap(),
            SympGSpace::unit(&GroupAction::trivial(0)),
        ] {
            let w = snake_word(&x);
            let n = w.normalize();
            let id = IndexedRel::from_rel(CanRel::identity(&x));
            assert!(n.equal(&id).unwrap());
            // both compositions in the snake are congenial
            let f = w.factors();
            assert!(f[0].is_congenial(&f[1]).unwrap());
            assert!(f[1].is_congenial(&f[2]).unwrap());
        }
    }

    #[test]
    fn graph_words_preserve_excess() {
        let x = q2();
        let l = ell(&x);
        let lt = l.transpose();
        for w in [
            Word::new(vec![lt.clone(), l.clone()]).unwrap(),
            Word::new(vec![CanRel::identity(&x), CanRel::identity(&x)]).unwrap(),
            Word::singleton(l.clone()),
            Word::new(vec![l.clone(), lt.clone(), l.clone()]).unwrap(),
        ] {
            let direct = w.graph_word_direct();
            let product = w.graph_word_product();
            assert_eq!(w.excess(), direct.excess());
            assert_eq!(w.excess(), product.excess());
        }
    }
}
