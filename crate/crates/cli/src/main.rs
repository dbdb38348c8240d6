//! Command-line front end: document validation, one-shot computations on
//! named entities, and the randomized law-verification harness.
//!
//! Exit codes: 0 success, 1 validation or property failure (including
//! unresolved names), 2 composability/model/usage mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use gslrel::doc::{iso_class_to_json, mat_to_json, Document, ResolvedDocument};
use gslrel::laws::{replay, run_law, Law};
use gslrel::relations::CanRel;
use gslrel::sample::ModelSpec;
use gslrel::wwcat::Word;
use gslrel::{Error, Subspace};

#[derive(Parser)]
#[command(
    name = "gslrel",
    about = "Equivariant linear canonical relations: validation, composition with excess tracking, normal forms and law fuzzing",
    version
)]
struct Cli {
    /// Compact single-line JSON output (default is pretty-printed JSON)
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document: classify every relation and report invariance
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Set-theoretic composition of two named relations
    Compose {
        #[arg(long)]
        input: PathBuf,
        a: String,
        b: String,
    },
    /// Excess of a named word, or of the word formed by the given relations
    Excess {
        #[arg(long)]
        input: PathBuf,
        #[arg(required = true)]
        names: Vec<String>,
    },
    /// Shadow and excess of a named word
    Normalize {
        #[arg(long)]
        input: PathBuf,
        word: String,
    },
    /// Trace of a named indexed endomorphism
    Trace {
        #[arg(long)]
        input: PathBuf,
        indexed: String,
    },
    /// Factor a named relation into a reduction after a coreduction
    Factor {
        #[arg(long)]
        input: PathBuf,
        relation: String,
    },
    /// Isomorphism class of a named space, or of a relation's subspace
    Isoclass {
        #[arg(long)]
        input: PathBuf,
        name: String,
    },
    /// Run a law suite on seeded random instances, or replay a counterexample
    Fuzz {
        /// One of: assoc, prop1, prop2, snake, congruence, lemma3, lemma4, trace
        #[arg(long, required_unless_present = "replay")]
        law: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "dim-cap", default_value_t = 8)]
        dim_cap: usize,
        /// Group model: trivial, finite (= z2), z2, z4, s3, circle
        #[arg(long, default_value = "trivial")]
        group: String,
        /// Counterexample output path (defaults to counterexample-<law>-<model>-<seed>.json)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replay a previously written counterexample document
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::NotComposable
        | Error::GroupModelMismatch
        | Error::NotEndomorphism
        | Error::UnsupportedGroupModel => 2,
        _ => 1,
    }
}

fn from_core(e: Error) -> Failure {
    fail(code_for(&e), e.to_string())
}

fn load_document(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text).map_err(from_core)
}

fn resolve(path: &Path) -> Result<ResolvedDocument, Failure> {
    load_document(path)?.resolve().map_err(from_core)
}

fn rel_json(rel: &CanRel) -> Value {
    json!({
        "source_dim": rel.source().dim(),
        "target_dim": rel.target().dim(),
        "basis": mat_to_json(rel.sub().basis()),
    })
}

fn cmd_validate(path: &Path) -> Result<Value, Failure> {
    let doc = load_document(path)?;
    let mut errors: Vec<Value> = Vec::new();

    // resolve group and spaces strictly: nothing downstream makes sense
    // without them
    let spaces_doc = Document {
        group: doc.group.clone(),
        spaces: doc.spaces.clone(),
        ..Document::default()
    };
    let resolved_spaces = spaces_doc.resolve().map_err(from_core)?;
    let spaces = &resolved_spaces.spaces;

    let mut relations_report = Map::new();
    let mut valid_relations = std::collections::BTreeMap::new();
    for (name, spec) in &doc.relations {
        let (Some(source), Some(target)) = (spaces.get(&spec.source), spaces.get(&spec.target))
        else {
            errors.push(json!({"entity": name, "error": "unresolved space name"}));
            continue;
        };
        let cols = source.dim() + target.dim();
        if spec.basis.iter().any(|row| row.len() != cols) {
            errors.push(json!({"entity": name, "error": "basis row width mismatch"}));
            continue;
        }
        let mut rows = gslrel::Mat::zero(0, cols);
        for row in &spec.basis {
            let mut rm = gslrel::Mat::zero(1, cols);
            for (c, v) in row.iter().enumerate() {
                rm[(0, c)] = v.clone();
            }
            rows = rows.vstack(&rm);
        }
        let sub = Subspace::from_spanning_rows(cols, &rows);
        let pairing = source.product(&target.dual()).map_err(from_core)?;
        let kind = pairing.classify(&sub).map_err(from_core)?;
        let invariant = pairing.action().is_invariant(&sub);
        relations_report.insert(
            name.clone(),
            json!({
                "isotropic": kind.isotropic,
                "coisotropic": kind.coisotropic,
                "lagrangian": kind.lagrangian,
                "symplectic": kind.symplectic,
                "invariant": invariant,
            }),
        );
        if !kind.lagrangian {
            errors.push(json!({"entity": name, "error": "not Lagrangian"}));
        } else if !invariant {
            errors.push(json!({"entity": name, "error": "not invariant"}));
        } else {
            valid_relations.insert(
                name.clone(),
                CanRel::new(source.clone(), target.clone(), sub).map_err(from_core)?,
            );
        }
    }

    for (name, list) in &doc.words {
        let factors: Option<Vec<CanRel>> = list
            .iter()
            .map(|rname| valid_relations.get(rname).cloned())
            .collect();
        match factors {
            None => errors.push(json!({"entity": name, "error": "word references an unresolved or invalid relation"})),
            Some(f) => {
                if let Err(e) = Word::new(f) {
                    errors.push(json!({"entity": name, "error": e.to_string()}));
                }
            }
        }
    }

    for (name, spec) in &doc.indexed {
        match valid_relations.get(&spec.relation) {
            None => errors.push(json!({"entity": name, "error": "indexed references an unresolved or invalid relation"})),
            Some(rel) => {
                if !spec.index.same_model(&rel.source().action().zero_class()) {
                    errors.push(json!({"entity": name, "error": "index class has the wrong group model"}));
                }
            }
        }
    }

    let ok = errors.is_empty();
    let report = json!({
        "status": if ok { "ok" } else { "invalid" },
        "spaces": spaces.iter().map(|(n, s)| (n.clone(), json!({"dim": s.dim()}))).collect::<Map<_, _>>(),
        "relations": relations_report,
        "errors": errors,
    });
    if ok {
        Ok(report)
    } else {
        Err(fail(
            1,
            serde_json::to_string(&report).expect("report serializes"),
        ))
    }
}

fn lookup<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    name: &str,
) -> Result<&'a T, Failure> {
    map.get(name)
        .ok_or_else(|| fail(1, format!("unresolved name: {name}")))
}

fn word_from_names(resolved: &ResolvedDocument, names: &[String]) -> Result<Word, Failure> {
    if names.len() == 1 {
        if let Some(w) = resolved.words.get(&names[0]) {
            return Ok(w.clone());
        }
    }
    let factors = names
        .iter()
        .map(|n| lookup(&resolved.relations, n).cloned())
        .collect::<Result<Vec<_>, Failure>>()?;
    Word::new(factors).map_err(|e| fail(2, e.to_string()))
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Validate { input } => cmd_validate(input),
        Command::Compose { input, a, b } => {
            let resolved = resolve(input)?;
            let fa = lookup(&resolved.relations, a)?;
            let fb = lookup(&resolved.relations, b)?;
            let composed = fa.compose(fb).map_err(from_core)?;
            let excess = fa.pair_excess(fb).map_err(from_core)?;
            Ok(json!({
                "composition": rel_json(&composed),
                "pair_excess": iso_class_to_json(&excess),
            }))
        }
        Command::Excess { input, names } => {
            let resolved = resolve(input)?;
            let word = word_from_names(&resolved, names)?;
            let witness = word.trajectory_space();
            Ok(json!({
                "excess": iso_class_to_json(&word.excess()),
                "trajectory_dim": witness.subspace.dim(),
            }))
        }
        Command::Normalize { input, word } => {
            let resolved = resolve(input)?;
            let w = word_from_names(&resolved, std::slice::from_ref(word))?;
            let normalized = w.normalize();
            Ok(json!({
                "shadow": rel_json(normalized.rel()),
                "index": iso_class_to_json(normalized.index()),
            }))
        }
        Command::Trace { input, indexed } => {
            let resolved = resolve(input)?;
            let ir = lookup(&resolved.indexed, indexed)?;
            let trace = ir.trace().map_err(from_core)?;
            Ok(json!({ "trace": iso_class_to_json(&trace) }))
        }
        Command::Factor { input, relation } => {
            let resolved = resolve(input)?;
            let f = lookup(&resolved.relations, relation)?;
            let (r, c) = f.factor();
            Ok(json!({
                "intermediate_dim": r.target().dim(),
                "reduction": rel_json(&r),
                "coreduction": rel_json(&c),
            }))
        }
        Command::Isoclass { input, name } => {
            let resolved = resolve(input)?;
            if let Some(space) = resolved.spaces.get(name) {
                return Ok(json!({
                    "isoclass": iso_class_to_json(&space.action().class_of_whole()),
                }));
            }
            if let Some(rel) = resolved.relations.get(name) {
                let pairing = rel.pairing_space();
                let class = pairing.action().iso_class(rel.sub()).map_err(from_core)?;
                return Ok(json!({ "isoclass": iso_class_to_json(&class) }));
            }
            Err(fail(1, format!("unresolved name: {name}")))
        }
        Command::Fuzz {
            law,
            trials,
            seed,
            dim_cap,
            group,
            out,
            replay: replay_path,
        } => {
            if let Some(path) = replay_path {
                return cmd_replay(path);
            }
            let law_name = law
                .as_deref()
                .expect("clap enforces --law without --replay");
            let law =
                Law::parse(law_name).ok_or_else(|| fail(2, format!("unknown law {law_name:?}")))?;
            let model = ModelSpec::parse(group)
                .ok_or_else(|| fail(2, format!("unknown group model {group:?}")))?;
            let report = run_law(law, model, *trials, *seed, *dim_cap).map_err(from_core)?;
            let mut body = report.to_json();
            if let Some(cex) = &report.failure {
                let path = out.clone().unwrap_or_else(|| {
                    PathBuf::from(format!(
                        "counterexample-{}-{}-{}.json",
                        law.name(),
                        model.name(),
                        seed
                    ))
                });
                let text = serde_json::to_string_pretty(&cex.to_json()).expect("serializes");
                std::fs::write(&path, text)
                    .map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))?;
                let obj = body.as_object_mut().expect("report is an object");
                obj.insert("counterexample".into(), json!(path.display().to_string()));
                obj.insert("failed_trial".into(), json!(cex.trial));
                obj.insert("message".into(), json!(cex.message));
                return Err(fail(1, serde_json::to_string(&body).expect("serializes")));
            }
            Ok(body)
        }
    }
}

fn cmd_replay(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| fail(2, format!("bad JSON: {e}")))?;
    let replay_block = value
        .get("replay")
        .ok_or_else(|| fail(2, "counterexample has no replay block"))?;
    let law_name = replay_block
        .get("law")
        .and_then(Value::as_str)
        .ok_or_else(|| fail(2, "replay block has no law"))?;
    let law = Law::parse(law_name).ok_or_else(|| fail(2, format!("unknown law {law_name:?}")))?;
    let refs = replay_block
        .get("refs")
        .ok_or_else(|| fail(2, "replay block has no refs"))?;
    let resolved = Document::from_json(&value)
        .and_then(|d| d.resolve())
        .map_err(from_core)?;
    match replay(law, &resolved, refs).map_err(from_core)? {
        Ok(()) => Ok(json!({ "law": law.name(), "status": "ok" })),
        Err(message) => Err(fail(
            1,
            serde_json::to_string(
                &json!({ "law": law.name(), "status": "failed", "message": message }),
            )
            .expect("serializes"),
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            let text = if cli.json {
                serde_json::to_string(&value)
            } else {
                serde_json::to_string_pretty(&value)
            }
            .expect("output serializes");
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            // machine-readable failures go to stdout when they are JSON
            // reports; the short reason always lands on stderr
            if f.message.starts_with('{') {
                println!("{}", f.message);
            }
            eprintln!("error: {}", short_reason(&f.message));
            ExitCode::from(f.code)
        }
    }
}

fn short_reason(message: &str) -> String {
    if let Ok(v) = serde_json::from_str::<Value>(message) {
        if let Some(m) = v.get("message").and_then(Value::as_str) {
            return m.to_string();
        }
        if let Some(errors) = v.get("errors").and_then(Value::as_array) {
            if let Some(first) = errors.first() {
                return first.to_string();
            }
        }
        return "validation failed".to_string();
    }
    message.to_string()
}
