//! Document model: a single JSON file naming a group, spaces, relations,
//! words and indexed relations. Rationals serialize as strings "p/q" (or
//! "p"), matrices as row-major arrays of such strings, so exactness survives
//! serialization.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::grouprep::{close_group, FiniteAction, GroupAction, IsoClass};
use crate::linalg::{rat_parse, rat_string, Mat, Rat};
use crate::relations::CanRel;
use crate::symplectic::{standard_omega, SympGSpace};
use crate::wwcat::{IndexedRel, Word};

/// The document's abstract group, given through a defining representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Trivial,
    Finite { generators: Vec<Mat> },
    Circle { generator: Mat },
}

/// How a space represents the document group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionSpec {
    /// Use the defining representation directly (dimensions must match).
    Default,
    /// The trivial representation of the document group on this space.
    Trivial,
    /// Images of the document group's generators on this space.
    FiniteImages(Vec<Mat>),
    /// Infinitesimal generator on this space (circle model).
    CircleGenerator(Mat),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaSpec {
    Standard,
    Explicit(Mat),
}

#[derive(Debug, Clone)]
pub struct SpaceSpec {
    pub dim: usize,
    pub omega: OmegaSpec,
    pub group: ActionSpec,
}

#[derive(Debug, Clone)]
pub struct RelationSpec {
    pub source: String,
    pub target: String,
    pub basis: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone)]
pub struct IndexedSpec {
    pub relation: String,
    pub index: IsoClass,
}

/// Parsed but unresolved document.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub group: Option<GroupSpec>,
    pub spaces: BTreeMap<String, SpaceSpec>,
    pub relations: BTreeMap<String, RelationSpec>,
    pub words: BTreeMap<String, Vec<String>>,
    pub indexed: BTreeMap<String, IndexedSpec>,
}

/// Fully validated document: every reference resolves and every relation
/// passed Lagrangian/invariance validation.
#[derive(Debug, Clone)]
pub struct ResolvedDocument {
    pub base: GroupAction,
    pub spaces: BTreeMap<String, SympGSpace>,
    pub relations: BTreeMap<String, CanRel>,
    pub words: BTreeMap<String, Word>,
    pub indexed: BTreeMap<String, IndexedRel>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidDocument(msg.into())
}

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(rat_string(r))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat_parse(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::linalg::rat(i))
            } else {
                Err(bad(format!("non-integer numeric rational {n}")))
            }
        }
        _ => Err(bad(format!("expected rational string, got {v}"))),
    }
}

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(rat_to_json).collect()))
            .collect(),
    )
}

/// Reads a row-major matrix; `expected_cols` disambiguates empty matrices.
pub fn mat_from_json(v: &Value, expected_cols: Option<usize>) -> Result<Mat> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("matrix must be an array of rows"))?;
    let mut parsed: Vec<Vec<Rat>> = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| bad("matrix row must be an array"))?;
        parsed.push(row.iter().map(rat_from_json).collect::<Result<_>>()?);
    }
    let cols = match (parsed.first(), expected_cols) {
        (Some(r), Some(c)) => {
            if r.len() != c {
                return Err(bad(format!("expected {} columns, found {}", c, r.len())));
            }
            c
        }
        (Some(r), None) => r.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(bad("ragged matrix rows"));
    }
    let data: Vec<Rat> = parsed.into_iter().flatten().collect();
    Ok(Mat::new(rows.len(), cols, data))
}

pub fn iso_class_to_json(c: &IsoClass) -> Value {
    match c {
        IsoClass::TrivialDim(d) => json!({ "trivial_dim": d }),
        IsoClass::FiniteChar(chars) => {
            json!({ "finite_char": chars.iter().map(rat_to_json).collect::<Vec<_>>() })
        }
        IsoClass::CircleWeights(mults) => {
            let map: Map<String, Value> = mults
                .iter()
                .map(|(k, m)| (k.to_string(), json!(m)))
                .collect();
            json!({ "circle_weights": map })
        }
    }
}

pub fn iso_class_from_json(v: &Value) -> Result<IsoClass> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("iso class must be an object"))?;
    if let Some(d) = obj.get("trivial_dim") {
        let d = d
            .as_u64()
            .ok_or_else(|| bad("trivial_dim must be a count"))?;
        return Ok(IsoClass::TrivialDim(d as usize));
    }
    if let Some(chars) = obj.get("finite_char") {
        let arr = chars
            .as_array()
            .ok_or_else(|| bad("finite_char must be an array"))?;
        let parsed: Vec<Rat> = arr.iter().map(rat_from_json).collect::<Result<_>>()?;
        // the identity entry is the dimension: a nonnegative integer
        if let Some(first) = parsed.first() {
            use num::{One, Signed};
            if !first.denom().is_one() || first.is_negative() {
                return Err(bad(
                    "finite_char: identity entry must be a nonnegative integer",
                ));
            }
        }
        return Ok(IsoClass::FiniteChar(parsed));
    }
    if let Some(w) = obj.get("circle_weights") {
        let obj = w
            .as_object()
            .ok_or_else(|| bad("circle_weights must be an object"))?;
        let mut mults = BTreeMap::new();
        for (k, m) in obj {
            let k: u32 = k.parse().map_err(|_| bad(format!("bad weight {k}")))?;
            let m = m
                .as_u64()
                .ok_or_else(|| bad("multiplicity must be a count"))? as usize;
            if m > 0 {
                mults.insert(k, m);
            }
        }
        return Ok(IsoClass::CircleWeights(mults));
    }
    Err(bad(
        "iso class needs trivial_dim, finite_char or circle_weights",
    ))
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("bad JSON: {e}")))?;
        Document::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Document> {
        let obj = v
            .as_object()
            .ok_or_else(|| bad("document must be an object"))?;
        let mut doc = Document::default();

        if let Some(g) = obj.get("group") {
            let gobj = g
                .as_object()
                .ok_or_else(|| bad("group must be an object"))?;
            let kind = gobj
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("group needs a kind"))?;
            doc.group = Some(match kind {
                "trivial" => GroupSpec::Trivial,
                "finite" => {
                    let gens = gobj
                        .get("generators")
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad("finite group needs generators"))?;
                    GroupSpec::Finite {
                        generators: gens
                            .iter()
                            .map(|m| mat_from_json(m, None))
                            .collect::<Result<_>>()?,
                    }
                }
                "circle" => GroupSpec::Circle {
                    generator: mat_from_json(
                        gobj.get("generator")
                            .ok_or_else(|| bad("circle group needs a generator"))?,
                        None,
                    )?,
                },
                other => return Err(bad(format!("unknown group kind {other:?}"))),
            });
        }

        if let Some(spaces) = obj.get("spaces") {
            let spaces = spaces
                .as_object()
                .ok_or_else(|| bad("spaces must be an object"))?;
            for (name, sv) in spaces {
                let sobj = sv
                    .as_object()
                    .ok_or_else(|| bad("space must be an object"))?;
                let dim = sobj
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad(format!("space {name} needs a dim")))?
                    as usize;
                let omega = match sobj.get("omega") {
                    None => OmegaSpec::Standard,
                    Some(Value::String(s)) if s == "standard" => OmegaSpec::Standard,
                    Some(m) => OmegaSpec::Explicit(mat_from_json(m, Some(dim))?),
                };
                let group = match sobj.get("group") {
                    None => ActionSpec::Default,
                    Some(Value::String(s)) if s == "default" => ActionSpec::Default,
                    Some(Value::String(s)) if s == "trivial" => ActionSpec::Trivial,
                    Some(Value::Object(o)) => {
                        if let Some(gens) = o.get("generators") {
                            let gens = gens
                                .as_array()
                                .ok_or_else(|| bad("generators must be an array"))?;
                            ActionSpec::FiniteImages(
                                gens.iter()
                                    .map(|m| mat_from_json(m, Some(dim)))
                                    .collect::<Result<_>>()?,
                            )
                        } else if let Some(g) = o.get("generator") {
                            ActionSpec::CircleGenerator(mat_from_json(g, Some(dim))?)
                        } else {
                            return Err(bad(format!("space {name}: unusable group override")));
                        }
                    }
                    Some(other) => {
                        return Err(bad(format!("space {name}: bad group field {other}")))
                    }
                };
                doc.spaces
                    .insert(name.clone(), SpaceSpec { dim, omega, group });
            }
        }

        if let Some(rels) = obj.get("relations") {
            let rels = rels
                .as_object()
                .ok_or_else(|| bad("relations must be an object"))?;
            for (name, rv) in rels {
                let robj = rv
                    .as_object()
                    .ok_or_else(|| bad("relation must be an object"))?;
                let source = robj
                    .get("source")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad(format!("relation {name} needs a source")))?
                    .to_string();
                let target = robj
                    .get("target")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad(format!("relation {name} needs a target")))?
                    .to_string();
                let basis_v = robj
                    .get("basis")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad(format!("relation {name} needs a basis")))?;
                let mut basis = Vec::with_capacity(basis_v.len());
                for row in basis_v {
                    let row = row
                        .as_array()
                        .ok_or_else(|| bad("basis row must be an array"))?;
                    basis.push(row.iter().map(rat_from_json).collect::<Result<Vec<_>>>()?);
                }
                doc.relations.insert(
                    name.clone(),
                    RelationSpec {
                        source,
                        target,
                        basis,
                    },
                );
            }
        }

        if let Some(words) = obj.get("words") {
            let words = words
                .as_object()
                .ok_or_else(|| bad("words must be an object"))?;
            for (name, wv) in words {
                let list = wv
                    .as_array()
                    .ok_or_else(|| bad("word must be a list of names"))?;
                let names = list
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| bad("word entries must be relation names"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                doc.words.insert(name.clone(), names);
            }
        }

        if let Some(indexed) = obj.get("indexed") {
            let indexed = indexed
                .as_object()
                .ok_or_else(|| bad("indexed must be an object"))?;
            for (name, iv) in indexed {
                let iobj = iv
                    .as_object()
                    .ok_or_else(|| bad("indexed must be an object"))?;
                let relation = iobj
                    .get("relation")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad(format!("indexed {name} needs a relation")))?
                    .to_string();
                let index = iso_class_from_json(
                    iobj.get("index")
                        .ok_or_else(|| bad(format!("indexed {name} needs an index")))?,
                )?;
                doc.indexed
                    .insert(name.clone(), IndexedSpec { relation, index });
            }
        }

        Ok(doc)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        if let Some(g) = &self.group {
            obj.insert(
                "group".into(),
                match g {
                    GroupSpec::Trivial => json!({ "kind": "trivial" }),
                    GroupSpec::Finite { generators } => json!({
                        "kind": "finite",
                        "generators": generators.iter().map(mat_to_json).collect::<Vec<_>>(),
                    }),
                    GroupSpec::Circle { generator } => json!({
                        "kind": "circle",
                        "generator": mat_to_json(generator),
                    }),
                },
            );
        }
        let spaces: Map<String, Value> = self
            .spaces
            .iter()
            .map(|(name, s)| {
                let mut so = Map::new();
                so.insert("dim".into(), json!(s.dim));
                so.insert(
                    "omega".into(),
                    match &s.omega {
                        OmegaSpec::Standard => json!("standard"),
                        OmegaSpec::Explicit(m) => mat_to_json(m),
                    },
                );
                so.insert(
                    "group".into(),
                    match &s.group {
                        ActionSpec::Default => json!("default"),
                        ActionSpec::Trivial => json!("trivial"),
                        ActionSpec::FiniteImages(mats) => json!({
                            "generators": mats.iter().map(mat_to_json).collect::<Vec<_>>(),
                        }),
                        ActionSpec::CircleGenerator(m) => json!({ "generator": mat_to_json(m) }),
                    },
                );
                (name.clone(), Value::Object(so))
            })
            .collect();
        obj.insert("spaces".into(), Value::Object(spaces));

        let relations: Map<String, Value> = self
            .relations
            .iter()
            .map(|(name, r)| {
                (
                    name.clone(),
                    json!({
                        "source": r.source,
                        "target": r.target,
                        "basis": r
                            .basis
                            .iter()
                            .map(|row| Value::Array(row.iter().map(rat_to_json).collect()))
                            .collect::<Vec<_>>(),
                    }),
                )
            })
            .collect();
        obj.insert("relations".into(), Value::Object(relations));

        let words: Map<String, Value> = self
            .words
            .iter()
            .map(|(name, w)| (name.clone(), json!(w)))
            .collect();
        obj.insert("words".into(), Value::Object(words));

        let indexed: Map<String, Value> = self
            .indexed
            .iter()
            .map(|(name, i)| {
                (
                    name.clone(),
                    json!({ "relation": i.relation, "index": iso_class_to_json(&i.index) }),
                )
            })
            .collect();
        obj.insert("indexed".into(), Value::Object(indexed));

        Value::Object(obj)
    }

    /// Resolves and validates everything: group closure, per-space actions,
    /// relation validation, word chains and indexed classes.
    pub fn resolve(&self) -> Result<ResolvedDocument> {
        let base = match self.group.as_ref().unwrap_or(&GroupSpec::Trivial) {
            GroupSpec::Trivial => GroupAction::trivial(0),
            GroupSpec::Finite { generators } => close_group(generators)?,
            GroupSpec::Circle { generator } => GroupAction::circle(generator.clone())?,
        };

        let mut spaces = BTreeMap::new();
        for (name, spec) in &self.spaces {
            let action = match (&spec.group, &base) {
                (ActionSpec::Default, GroupAction::Trivial { .. }) => {
                    GroupAction::trivial(spec.dim)
                }
                (ActionSpec::Default, other) => {
                    if other.dim() != spec.dim {
                        return Err(bad(format!(
                            "space {name}: default action has dim {}, space has dim {}",
                            other.dim(),
                            spec.dim
                        )));
                    }
                    other.clone()
                }
                (ActionSpec::Trivial, any) => any.trivial_rep_like(spec.dim),
                (ActionSpec::FiniteImages(images), GroupAction::Finite(f)) => GroupAction::Finite(
                    FiniteAction::from_generator_images(f.group(), images.clone())?,
                ),
                (ActionSpec::CircleGenerator(m), GroupAction::Circle(_)) => {
                    GroupAction::circle(m.clone())?
                }
                _ => {
                    return Err(bad(format!(
                        "space {name}: action override does not match the group kind"
                    )))
                }
            };
            let omega = match &spec.omega {
                OmegaSpec::Standard => {
                    if !spec.dim.is_multiple_of(2) {
                        return Err(bad(format!("space {name}: odd dimension")));
                    }
                    standard_omega(spec.dim / 2)
                }
                OmegaSpec::Explicit(m) => m.clone(),
            };
            spaces.insert(name.clone(), SympGSpace::new(omega, action)?);
        }

        let mut relations = BTreeMap::new();
        for (name, spec) in &self.relations {
            let source = spaces
                .get(&spec.source)
                .ok_or_else(|| Error::UnresolvedName(spec.source.clone()))?;
            let target = spaces
                .get(&spec.target)
                .ok_or_else(|| Error::UnresolvedName(spec.target.clone()))?;
            let cols = source.dim() + target.dim();
            let mut rows = Mat::zero(0, cols);
            for (rix, row) in spec.basis.iter().enumerate() {
                if row.len() != cols {
                    return Err(bad(format!(
                        "relation {name}: basis row {rix} has {} entries, expected {cols}",
                        row.len()
                    )));
                }
                let mut rm = Mat::zero(1, cols);
                for (c, val) in row.iter().enumerate() {
                    rm[(0, c)] = val.clone();
                }
                rows = rows.vstack(&rm);
            }
            relations.insert(
                name.clone(),
                CanRel::from_rows(source.clone(), target.clone(), &rows)?,
            );
        }

        let mut words = BTreeMap::new();
        for (name, list) in &self.words {
            let factors = list
                .iter()
                .map(|rname| {
                    relations
                        .get(rname)
                        .cloned()
                        .ok_or_else(|| Error::UnresolvedName(rname.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            words.insert(name.clone(), Word::new(factors)?);
        }

        let mut indexed = BTreeMap::new();
        for (name, spec) in &self.indexed {
            let rel = relations
                .get(&spec.relation)
                .cloned()
                .ok_or_else(|| Error::UnresolvedName(spec.relation.clone()))?;
            indexed.insert(name.clone(), IndexedRel::new(rel, spec.index.clone())?);
        }

        Ok(ResolvedDocument {
            base,
            spaces,
            relations,
            words,
            indexed,
        })
    }
}

/// Extracts a space's action as a document override relative to a base
/// action (the document group's defining representation).
pub fn action_spec_of(space_action: &GroupAction, base: &GroupAction) -> ActionSpec {
    match (space_action, base) {
        (GroupAction::Trivial { .. }, GroupAction::Trivial { .. }) => ActionSpec::Default,
        (GroupAction::Finite(f), GroupAction::Finite(b)) => {
            let group = b.group();
            let images: Vec<Mat> = (0..group.num_generators())
                .map(|gi| f.mats()[group.generator_element(gi)].clone())
                .collect();
            ActionSpec::FiniteImages(images)
        }
        (GroupAction::Circle(c), GroupAction::Circle(_)) => {
            ActionSpec::CircleGenerator(c.generator().clone())
        }
        _ => ActionSpec::Trivial,
    }
}

/// Builds a space spec from a concrete space relative to the base action.
pub fn space_spec_of(space: &SympGSpace, base: &GroupAction) -> SpaceSpec {
    let omega = if space.dim().is_multiple_of(2) && *space.omega() == standard_omega(space.dim() / 2) {
        OmegaSpec::Standard
    } else {
        OmegaSpec::Explicit(space.omega().clone())
    };
    SpaceSpec {
        dim: space.dim(),
        omega,
        group: action_spec_of(space.action(), base),
    }
}

/// Extracts the document group spec from a base action.
pub fn group_spec_of(base: &GroupAction) -> GroupSpec {
    match base {
        GroupAction::Trivial { .. } => GroupSpec::Trivial,
        GroupAction::Finite(f) => {
            let group = f.group();
            GroupSpec::Finite {
                generators: (0..group.num_generators())
                    .map(|gi| f.mats()[group.generator_element(gi)].clone())
                    .collect(),
            }
        }
        GroupAction::Circle(c) => GroupSpec::Circle {
            generator: c.generator().clone(),
        },
    }
}

/// Serializes relation rows for document embedding.
pub fn relation_spec_of(name_source: &str, name_target: &str, rel: &CanRel) -> RelationSpec {
    let b = rel.sub().basis();
    RelationSpec {
        source: name_source.to_string(),
        target: name_target.to_string(),
        basis: (0..b.rows()).map(|r| b.row(r).to_vec()).collect(),
    }
}
