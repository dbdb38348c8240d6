//! The randomized law-verification suites: each law draws seeded valid
//! instances, checks an exact identity, and on failure produces a replayable
//! counterexample document. The same checks back the acceptance suite and
//! the CLI fuzz command.

use serde_json::{json, Value};

use crate::doc::{
    group_spec_of, iso_class_from_json, iso_class_to_json, mat_from_json, mat_to_json,
    relation_spec_of, space_spec_of, Document, IndexedSpec, ResolvedDocument,
};
use crate::error::{Error, Result};
use crate::grouprep::{
    invariant_complement, invariant_lagrangian_complement, GroupAction, IsoClass,
};
use crate::linalg::{Mat, Subspace};
use crate::relations::{projection_onto_coisotropic, CanRel};
use crate::sample::{ModelSpec, SampledSpace, Sampler};
use crate::symplectic::SympGSpace;
use crate::wwcat::{lemma4_normal_form, snake_word, IndexedRel, Word};

/// The named law suites exposed by the fuzz harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Assoc,
    Prop1,
    Prop2,
    Snake,
    Congruence,
    Lemma3,
    Lemma4,
    Trace,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Assoc,
        Law::Prop1,
        Law::Prop2,
        Law::Snake,
        Law::Congruence,
        Law::Lemma3,
        Law::Lemma4,
        Law::Trace,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Law::Assoc => "assoc",
            Law::Prop1 => "prop1",
            Law::Prop2 => "prop2",
            Law::Snake => "snake",
            Law::Congruence => "congruence",
            Law::Lemma3 => "lemma3",
            Law::Lemma4 => "lemma4",
            Law::Trace => "trace",
        }
    }

    pub fn parse(s: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == s)
    }

    /// Averaging-based laws are unavailable for the circle model.
    pub fn supports(&self, model: ModelSpec) -> bool {
        !matches!(self, Law::Lemma3 | Law::Lemma4) || model != ModelSpec::Circle
    }
}

/// A failed trial: a full document plus replay instructions.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub law: Law,
    pub model: ModelSpec,
    pub trial: u64,
    pub message: String,
    pub document: Document,
    pub replay: Value,
}

impl Counterexample {
    /// The counterexample file: a valid document with an extra replay block.
    pub fn to_json(&self) -> Value {
        let mut v = self.document.to_json();
        let obj = v.as_object_mut().expect("documents serialize to objects");
        obj.insert(
            "replay".into(),
            json!({
                "law": self.law.name(),
                "model": self.model.name(),
                "trial": self.trial,
                "message": self.message,
                "refs": self.replay,
            }),
        );
        v
    }
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: Law,
    pub model: ModelSpec,
    pub trials: u64,
    pub seed: u64,
    pub dim_cap: usize,
    pub failure: Option<Counterexample>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "law": self.law.name(),
            "model": self.model.name(),
            "trials": self.trials,
            "seed": self.seed,
            "dim_cap": self.dim_cap,
            "status": if self.passed() { "ok" } else { "failed" },
        })
    }
}

fn w_cap(dim_cap: usize, spaces: usize) -> usize {
    (dim_cap / (2 * spaces)).max(1)
}

/// Runs a law suite with a deterministic generator: trial i draws from
/// stream i of the seed, so failures replay independently of trial order.
pub fn run_law(
    law: Law,
    model: ModelSpec,
    trials: u64,
    seed: u64,
    dim_cap: usize,
) -> Result<LawReport> {
    if !law.supports(model) {
        return Err(Error::UnsupportedGroupModel);
    }
    let mut failure = None;
    for trial in 0..trials {
        let mut sampler = Sampler::new(model, seed, trial);
        if let Err(cex) = run_trial(law, &mut sampler, trial, dim_cap) {
            failure = Some(*cex);
            break;
        }
    }
    Ok(LawReport {
        law,
        model,
        trials,
        seed,
        dim_cap,
        failure,
    })
}

fn run_trial(
    law: Law,
    s: &mut Sampler,
    trial: u64,
    dim_cap: usize,
) -> std::result::Result<(), Box<Counterexample>> {
    let model = s.model();
    let fail = |message: String, document: Document, replay: Value| {
        Box::new(Counterexample {
            law,
            model,
            trial,
            message,
            document,
            replay,
        })
    };
    match law {
        Law::Assoc => {
            let cap = w_cap(dim_cap, 4);
            let spaces: Vec<SampledSpace> = (0..4).map(|_| s.space(cap)).collect();
            let a = s.indexed(&spaces[0], &spaces[1], cap);
            let b = s.indexed(&spaces[1], &spaces[2], cap);
            let c = s.indexed(&spaces[2], &spaces[3], cap);
            check_assoc(&a, &b, &c).map_err(|msg| {
                let (doc, refs) = doc_for_assoc(s.base(), &spaces, &[&a, &b, &c]);
                fail(msg, doc, refs)
            })
        }
        Law::Prop1 => {
            let len = 1 + (trial as usize % 3);
            let (spaces, word) = s.word(len, w_cap(dim_cap, len + 1));
            check_prop1(&word).map_err(|msg| {
                let (doc, refs) = doc_for_word(s.base(), &spaces, &word);
                fail(msg, doc, refs)
            })
        }
        Law::Prop2 | Law::Congruence => {
            let l1 = 1 + (trial as usize % 2);
            let l2 = 1 + ((trial as usize / 2) % 2);
            let (spaces, word) = s.word(l1 + l2, w_cap(dim_cap, l1 + l2 + 1));
            let first = Word::new(word.factors()[..l1].to_vec()).expect("prefix chains");
            let second = Word::new(word.factors()[l1..].to_vec()).expect("suffix chains");
            let res = if law == Law::Prop2 {
                check_prop2(&first, &second)
            } else {
                check_congruence(&first, &second)
            };
            res.map_err(|msg| {
                let (doc, refs) = doc_for_word_pair(s.base(), &spaces, &first, &second, l1);
                fail(msg, doc, refs)
            })
        }
        Law::Snake => {
            let sp = s.space(w_cap(dim_cap, 1).min(3));
            check_snake(&sp.space).map_err(|msg| {
                let (doc, refs) = doc_for_space(s.base(), &sp.space);
                fail(msg, doc, refs)
            })
        }
        Law::Lemma3 => {
            let sp = s.space(w_cap(dim_cap, 1).min(3));
            let (l, j) = s.lagrangian_with_disjoint_isotropic(&sp);
            check_lemma3(&sp.space, &l, &j).map_err(|msg| {
                let (doc, refs) = doc_for_lemma3(s.base(), &sp.space, &l, &j);
                fail(msg, doc, refs)
            })
        }
        Law::Lemma4 => {
            let sp = s.space(w_cap(dim_cap, 1).min(3));
            let l = s.lagrangian(&sp);
            let i = s.isotropic(&sp);
            let psi = s.symplectomorphism(&sp);
            check_lemma4(&sp.space, &l, &i, Some(&psi)).map_err(|msg| {
                let (doc, refs) = doc_for_lemma4(s.base(), &sp.space, &l, &i, &psi);
                fail(msg, doc, refs)
            })
        }
        Law::Trace => {
            let sp = s.space(w_cap(dim_cap, 1).min(3));
            let c = s.coisotropic(&sp);
            let f = s.relation(&sp, &sp);
            let (k, _) = s.class_with_witness(2);
            check_trace(&sp.space, &c, &f, &k).map_err(|msg| {
                let (doc, refs) = doc_for_trace(s.base(), &sp.space, &c, &f, &k);
                fail(msg, doc, refs)
            })
        }
    }
}

// ---------------------------------------------------------------------------
// checks (shared with the acceptance suite and replay)

pub fn check_assoc(
    a: &IndexedRel,
    b: &IndexedRel,
    c: &IndexedRel,
) -> std::result::Result<(), String> {
    let left = a
        .compose(b)
        .and_then(|ab| ab.compose(c))
        .map_err(|e| format!("left association failed to compose: {e}"))?;
    let right = b
        .compose(c)
        .and_then(|bc| a.compose(&bc))
        .map_err(|e| format!("right association failed to compose: {e}"))?;
    if !left.equal(&right).map_err(|e| e.to_string())? {
        return Err(format!(
            "associativity violated: left index {:?}, right index {:?}",
            left.index(),
            right.index()
        ));
    }
    Ok(())
}

pub fn check_interchange(
    a: &IndexedRel,
    b: &IndexedRel,
    c: &IndexedRel,
    d: &IndexedRel,
) -> std::result::Result<(), String> {
    let compose_first = a
        .compose(b)
        .and_then(|ab| c.compose(d).and_then(|cd| ab.tensor(&cd)))
        .map_err(|e| format!("compose-then-tensor failed: {e}"))?;
    let tensor_first = a
        .tensor(c)
        .and_then(|ac| b.tensor(d).and_then(|bd| ac.compose(&bd)))
        .map_err(|e| format!("tensor-then-compose failed: {e}"))?;
    if !compose_first
        .equal(&tensor_first)
        .map_err(|e| e.to_string())?
    {
        return Err("interchange law violated".into());
    }
    Ok(())
}

pub fn check_prop1(word: &Word) -> std::result::Result<(), String> {
    let base = word.excess();
    let direct = word.graph_word_direct().excess();
    if base != direct {
        return Err(format!(
            "direct graph representative excess {direct:?} differs from word excess {base:?}"
        ));
    }
    let product = word.graph_word_product().excess();
    if base != product {
        return Err(format!(
            "graph-product representative excess {product:?} differs from word excess {base:?}"
        ));
    }
    Ok(())
}

pub fn check_prop2(first: &Word, second: &Word) -> std::result::Result<(), String> {
    let combined = first.concat(second).map_err(|e| e.to_string())?.excess();
    let pair = first
        .shadow()
        .pair_excess(&second.shadow())
        .map_err(|e| e.to_string())?;
    let sum = first
        .excess()
        .add(&second.excess())
        .and_then(|x| x.add(&pair))
        .map_err(|e| e.to_string())?;
    if combined != sum {
        return Err(format!(
            "excess additivity violated: concatenated {combined:?}, summed {sum:?}"
        ));
    }
    Ok(())
}

pub fn check_congruence(first: &Word, second: &Word) -> std::result::Result<(), String> {
    let combined = first.concat(second).map_err(|e| e.to_string())?.normalize();
    let composed = first
        .normalize()
        .compose(&second.normalize())
        .map_err(|e| e.to_string())?;
    if !combined.equal(&composed).map_err(|e| e.to_string())? {
        return Err("normalize is not a congruence on this pair".into());
    }
    Ok(())
}

pub fn check_snake(x: &SympGSpace) -> std::result::Result<(), String> {
    let w = snake_word(x);
    let n = w.normalize();
    let id = IndexedRel::from_rel(CanRel::identity(x));
    if !n.equal(&id).map_err(|e| e.to_string())? {
        return Err(format!(
            "snake composite is not the identity: index {:?}, subspace dim {}",
            n.index(),
            n.rel().sub().dim()
        ));
    }
    let f = w.factors();
    for (i, pair) in f.windows(2).enumerate() {
        if !pair[0].is_congenial(&pair[1]).map_err(|e| e.to_string())? {
            return Err(format!("snake pair {i} is not congenial"));
        }
    }
    Ok(())
}

pub fn check_factor(f: &CanRel) -> std::result::Result<(), String> {
    let (r, c) = f.factor();
    if !r.is_reduction() {
        return Err("factor: first leg is not a reduction".into());
    }
    if !c.is_coreduction() {
        return Err("factor: second leg is not a coreduction".into());
    }
    if !r.is_congenial(&c).map_err(|e| e.to_string())? {
        return Err("factor: the pair is not congenial".into());
    }
    let back = r.compose(&c).map_err(|e| e.to_string())?;
    if back != *f {
        return Err("factor: legs do not compose back to the relation".into());
    }
    Ok(())
}

pub fn check_lemma3(v: &SympGSpace, l: &Subspace, j: &Subspace) -> std::result::Result<(), String> {
    let action = v.action();
    // plain invariant complement
    let m = invariant_complement(action, l, j).map_err(|e| format!("invariant_complement: {e}"))?;
    verify_complement(action, v.dim(), l, j, &m, false, v)?;
    // Lagrangian version (L is Lagrangian, J isotropic by construction)
    let m = invariant_lagrangian_complement(v, l, j)
        .map_err(|e| format!("invariant_lagrangian_complement: {e}"))?;
    verify_complement(action, v.dim(), l, j, &m, true, v)?;
    Ok(())
}

fn verify_complement(
    action: &GroupAction,
    dim: usize,
    l: &Subspace,
    j: &Subspace,
    m: &Subspace,
    lagrangian: bool,
    v: &SympGSpace,
) -> std::result::Result<(), String> {
    if !action.is_invariant(m) {
        return Err("complement is not invariant".into());
    }
    if !m.contains(j) {
        return Err("complement does not contain J".into());
    }
    if !l.intersect(m).map_err(|e| e.to_string())?.is_zero() {
        return Err("complement meets L".into());
    }
    if l.dim() + m.dim() != dim {
        return Err("complement has the wrong dimension".into());
    }
    if lagrangian && !v.classify(m).map_err(|e| e.to_string())?.lagrangian {
        return Err("complement is not Lagrangian".into());
    }
    Ok(())
}

pub fn check_lemma4(
    v: &SympGSpace,
    l: &Subspace,
    i: &Subspace,
    transport: Option<&Mat>,
) -> std::result::Result<(), String> {
    let form = lemma4_normal_form(v, l, i).map_err(|e| format!("lemma4_normal_form: {e}"))?;
    let t = &form.transform;
    if t.transpose().mul(&form.model_omega).mul(t) != *v.omega() {
        return Err("transform is not symplectic".into());
    }
    // equivariance against the independently assembled block action
    match (v.action(), &form.model_action) {
        (GroupAction::Trivial { .. }, _) => {}
        (GroupAction::Finite(orig), GroupAction::Finite(model)) => {
            for (g, gm) in orig.mats().iter().zip(model.mats()) {
                if t.mul(g) != gm.mul(t) {
                    return Err("transform is not equivariant".into());
                }
            }
        }
        _ => return Err("model action has the wrong kind".into()),
    }
    // block correctness
    let (da, dj, dr) = form.dims;
    let n = v.dim();
    let mut l_rows = Mat::zero(0, n);
    l_rows = l_rows.vstack(&Mat::identity(da).embed_cols(n, 0));
    l_rows = l_rows.vstack(&Mat::identity(dj).embed_cols(n, 2 * da));
    l_rows = l_rows.vstack(&Mat::identity(dr).embed_cols(n, 2 * da + 2 * dj));
    if l.map_by(t) != Subspace::from_spanning_rows(n, &l_rows) {
        return Err("L does not map onto the A + J* + R* block".into());
    }
    let mut i_rows = Mat::zero(0, n);
    i_rows = i_rows.vstack(&Mat::identity(da).embed_cols(n, 0));
    i_rows = i_rows.vstack(&Mat::identity(dj).embed_cols(n, 2 * da + dj));
    if i.map_by(t) != Subspace::from_spanning_rows(n, &i_rows) {
        return Err("I does not map onto the A + J block".into());
    }
    // signature determinism: transported inputs have equal class triples and
    // must produce the same signature
    if let Some(psi) = transport {
        let l2 = l.map_by(psi);
        let i2 = i.map_by(psi);
        let form2 = lemma4_normal_form(v, &l2, &i2)
            .map_err(|e| format!("lemma4_normal_form (transported): {e}"))?;
        if form.signature(v.action()) != form2.signature(v.action()) {
            return Err("equal iso-class triples produced different signatures".into());
        }
    }
    Ok(())
}

pub fn check_trace(
    x: &SympGSpace,
    coiso: &Subspace,
    endo: &CanRel,
    shift_class: &IsoClass,
) -> std::result::Result<(), String> {
    let id_trace = IndexedRel::from_rel(CanRel::identity(x))
        .trace()
        .map_err(|e| e.to_string())?;
    let whole = x.action().class_of_whole();
    if id_trace != whole {
        return Err(format!(
            "trace of the identity is {id_trace:?}, expected the class of X {whole:?}"
        ));
    }
    let proj = projection_onto_coisotropic(x, coiso).map_err(|e| e.to_string())?;
    let proj_trace = IndexedRel::from_rel(proj)
        .trace()
        .map_err(|e| e.to_string())?;
    let c_class = x.action().iso_class(coiso).map_err(|e| e.to_string())?;
    if proj_trace != c_class {
        return Err(format!(
            "trace of the projection is {proj_trace:?}, expected the class of C {c_class:?}"
        ));
    }
    let plain = IndexedRel::from_rel(endo.clone())
        .trace()
        .map_err(|e| e.to_string())?;
    let shifted = IndexedRel::new(endo.clone(), shift_class.clone())
        .map_err(|e| e.to_string())?
        .trace()
        .map_err(|e| e.to_string())?;
    let expected = shift_class.add(&plain).map_err(|e| e.to_string())?;
    if shifted != expected {
        return Err("trace does not add the index class".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// counterexample documents

fn base_document(base: &GroupAction) -> Document {
    Document {
        group: Some(group_spec_of(base)),
        ..Document::default()
    }
}

fn add_space(doc: &mut Document, base: &GroupAction, name: &str, space: &SympGSpace) {
    doc.spaces
        .insert(name.to_string(), space_spec_of(space, base));
}

fn add_relation(doc: &mut Document, name: &str, source: &str, target: &str, rel: &CanRel) {
    doc.relations
        .insert(name.to_string(), relation_spec_of(source, target, rel));
}

fn doc_for_assoc(
    base: &GroupAction,
    spaces: &[SampledSpace],
    indexed: &[&IndexedRel; 3],
) -> (Document, Value) {
    let mut doc = base_document(base);
    for (i, sp) in spaces.iter().enumerate() {
        add_space(&mut doc, base, &format!("X{i}"), &sp.space);
    }
    for (i, ir) in indexed.iter().enumerate() {
        let rname = format!("f{i}");
        add_relation(
            &mut doc,
            &rname,
            &format!("X{i}"),
            &format!("X{}", i + 1),
            ir.rel(),
        );
        doc.indexed.insert(
            format!("i{i}"),
            IndexedSpec {
                relation: rname,
                index: ir.index().clone(),
            },
        );
    }
    (doc, json!({ "a": "i0", "b": "i1", "c": "i2" }))
}

fn doc_for_word(base: &GroupAction, spaces: &[SampledSpace], word: &Word) -> (Document, Value) {
    let mut doc = base_document(base);
    for (i, sp) in spaces.iter().enumerate() {
        add_space(&mut doc, base, &format!("X{i}"), &sp.space);
    }
    let mut names = Vec::new();
    for (i, f) in word.factors().iter().enumerate() {
        let rname = format!("f{i}");
        add_relation(
            &mut doc,
            &rname,
            &format!("X{i}"),
            &format!("X{}", i + 1),
            f,
        );
        names.push(rname);
    }
    doc.words.insert("w0".into(), names);
    (doc, json!({ "word": "w0" }))
}

fn doc_for_word_pair(
    base: &GroupAction,
    spaces: &[SampledSpace],
    first: &Word,
    second: &Word,
    split: usize,
) -> (Document, Value) {
    let mut doc = base_document(base);
    for (i, sp) in spaces.iter().enumerate() {
        add_space(&mut doc, base, &format!("X{i}"), &sp.space);
    }
    let mut first_names = Vec::new();
    let mut second_names = Vec::new();
    for (i, f) in first.factors().iter().chain(second.factors()).enumerate() {
        let rname = format!("f{i}");
        add_relation(
            &mut doc,
            &rname,
            &format!("X{i}"),
            &format!("X{}", i + 1),
            f,
        );
        if i < split {
            first_names.push(rname);
        } else {
            second_names.push(rname);
        }
    }
    doc.words.insert("w0".into(), first_names);
    doc.words.insert("w1".into(), second_names);
    (doc, json!({ "first": "w0", "second": "w1" }))
}

fn doc_for_space(base: &GroupAction, space: &SympGSpace) -> (Document, Value) {
    let mut doc = base_document(base);
    add_space(&mut doc, base, "X0", space);
    (doc, json!({ "space": "X0" }))
}

fn doc_for_lemma3(
    base: &GroupAction,
    space: &SympGSpace,
    l: &Subspace,
    j: &Subspace,
) -> (Document, Value) {
    let (doc, _) = doc_for_space(base, space);
    (
        doc,
        json!({ "space": "X0", "l": mat_to_json(l.basis()), "j": mat_to_json(j.basis()) }),
    )
}

fn doc_for_lemma4(
    base: &GroupAction,
    space: &SympGSpace,
    l: &Subspace,
    i: &Subspace,
    psi: &Mat,
) -> (Document, Value) {
    let (doc, _) = doc_for_space(base, space);
    (
        doc,
        json!({
            "space": "X0",
            "l": mat_to_json(l.basis()),
            "i": mat_to_json(i.basis()),
            "psi": mat_to_json(psi),
        }),
    )
}

fn doc_for_trace(
    base: &GroupAction,
    space: &SympGSpace,
    coiso: &Subspace,
    endo: &CanRel,
    class: &IsoClass,
) -> (Document, Value) {
    let mut doc = base_document(base);
    add_space(&mut doc, base, "X0", space);
    add_relation(&mut doc, "f0", "X0", "X0", endo);
    (
        doc,
        json!({
            "space": "X0",
            "coisotropic": mat_to_json(coiso.basis()),
            "endo": "f0",
            "index": iso_class_to_json(class),
        }),
    )
}

// ---------------------------------------------------------------------------
// replay

fn ref_str<'a>(refs: &'a Value, key: &str) -> Result<&'a str> {
    refs.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidDocument(format!("replay refs need a {key:?} name")))
}

fn ref_subspace(refs: &Value, key: &str, ambient: usize) -> Result<Subspace> {
    let m = mat_from_json(
        refs.get(key)
            .ok_or_else(|| Error::InvalidDocument(format!("replay refs need a {key:?} matrix")))?,
        Some(ambient),
    )?;
    Ok(Subspace::from_spanning_rows(ambient, &m))
}

/// Re-runs a law check against entities named by a counterexample's replay
/// block. Returns the law's verdict.
pub fn replay(
    law: Law,
    resolved: &ResolvedDocument,
    refs: &Value,
) -> Result<std::result::Result<(), String>> {
    let lookup_word = |key: &str| -> Result<&Word> {
        let name = ref_str(refs, key)?;
        resolved
            .words
            .get(name)
            .ok_or_else(|| Error::UnresolvedName(name.into()))
    };
    let lookup_space = |key: &str| -> Result<&SympGSpace> {
        let name = ref_str(refs, key)?;
        resolved
            .spaces
            .get(name)
            .ok_or_else(|| Error::UnresolvedName(name.into()))
    };
    Ok(match law {
        Law::Assoc => {
            let get = |key: &str| -> Result<&IndexedRel> {
                let name = ref_str(refs, key)?;
                resolved
                    .indexed
                    .get(name)
                    .ok_or_else(|| Error::UnresolvedName(name.into()))
            };
            check_assoc(get("a")?, get("b")?, get("c")?)
        }
        Law::Prop1 => check_prop1(lookup_word("word")?),
        Law::Prop2 => check_prop2(lookup_word("first")?, lookup_word("second")?),
        Law::Congruence => check_congruence(lookup_word("first")?, lookup_word("second")?),
        Law::Snake => check_snake(lookup_space("space")?),
        Law::Lemma3 => {
            let space = lookup_space("space")?;
            let l = ref_subspace(refs, "l", space.dim())?;
            let j = ref_subspace(refs, "j", space.dim())?;
            check_lemma3(space, &l, &j)
        }
        Law::Lemma4 => {
            let space = lookup_space("space")?;
            let l = ref_subspace(refs, "l", space.dim())?;
            let i = ref_subspace(refs, "i", space.dim())?;
            let psi = refs
                .get("psi")
                .map(|m| mat_from_json(m, Some(space.dim())))
                .transpose()?;
            check_lemma4(space, &l, &i, psi.as_ref())
        }
        Law::Trace => {
            let space = lookup_space("space")?;
            let coiso = ref_subspace(refs, "coisotropic", space.dim())?;
            let endo_name = ref_str(refs, "endo")?;
            let endo = resolved
                .relations
                .get(endo_name)
                .ok_or_else(|| Error::UnresolvedName(endo_name.into()))?;
            let class = iso_class_from_json(
                refs.get("index")
                    .ok_or_else(|| Error::InvalidDocument("replay refs need an index".into()))?,
            )?;
            check_trace(space, &coiso, endo, &class)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_law_passes_a_short_run() {
        for law in Law::ALL {
            for model in [ModelSpec::Trivial, ModelSpec::Z2, ModelSpec::Circle] {
                if !law.supports(model) {
                    assert!(run_law(law, model, 2, 5, 8).is_err());
                    continue;
                }
                let report = run_law(law, model, 3, 5, 8).unwrap();
                assert!(
                    report.passed(),
                    "law {:?} model {:?}: {}",
                    law,
                    model,
                    report
                        .failure
                        .as_ref()
                        .map(|f| f.message.as_str())
                        .unwrap_or("")
                );
            }
        }
    }

    #[test]
    fn counterexamples_replay() {
        // manufacture a counterexample by checking a deliberately wrong law:
        // instead, exercise the machinery by building a doc from a passing
        // trial and replaying its law through the document round trip
        let mut s = Sampler::new(ModelSpec::Z2, 3, 0);
        let cap = 1;
        let spaces: Vec<SampledSpace> = (0..4).map(|_| s.space(cap)).collect();
        let a = s.indexed(&spaces[0], &spaces[1], cap);
        let b = s.indexed(&spaces[1], &spaces[2], cap);
        let c = s.indexed(&spaces[2], &spaces[3], cap);
        let (doc, refs) = doc_for_assoc(s.base(), &spaces, &[&a, &b, &c]);
        let round = Document::parse(&serde_json::to_string(&doc.to_json()).unwrap()).unwrap();
        let resolved = round.resolve().unwrap();
        assert!(replay(Law::Assoc, &resolved, &refs).unwrap().is_ok());
    }

    #[test]
    fn law_parsing() {
        assert_eq!(Law::parse("assoc"), Some(Law::Assoc));
        assert_eq!(Law::parse("lemma4"), Some(Law::Lemma4));
        assert_eq!(Law::parse("nope"), None);
    }
}
