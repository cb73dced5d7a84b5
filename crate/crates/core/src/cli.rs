//! Command-line front end: tuple files, subcommands and report rendering.
//!
//! A tuple file is TOML:
//!
//! ```toml
//! characteristic = 0
//!
//! [group]
//! constructor = "gamma_quotient"
//! n = 2
//! m_a = 2
//! m_b = 2
//!
//! [[module]]
//! degree = "a"
//! character = { a = "-1", nu = "-1" }
//!
//! [caps]
//! adjoint = 8
//! ```
//!
//! Each module is `M(g, chi)` with `g` the degree word and `chi` given by
//! its values on words generating the centralizer of `g`.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cartan::{
    classify_gcm, explore, finite_type_name, is_positive, rank3_catalog_match, weyl_orbits, ExploreCaps, ExploreStatus, Exploration,
    Root,
};
use crate::groups::{GroupError, GroupSpec};
use crate::nichols::{
    factored, hilbert_oracle_crosscheck, hilbert_series, nichols_dimension, tuple_graded_dims, HilbertSeries,
    NicholsDimension, NicholsError,
};
use crate::scalars::{Characteristic, RootOfUnity, ScalarError};
use crate::skeleton::{
    classify_tuple, realize_skeleton_spec, ClassifyCaps, SkeletonError,
    SkeletonType, TupleReport, Verdict,
};
use crate::ydmod::{cartan_matrix, YDModule, YDTuple, YdError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed tuple file: {0}")]
    Toml(String),
    #[error("module {index}: {reason}")]
    Module { index: usize, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Yd(#[from] YdError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Nichols(#[from] NicholsError),
    #[error(transparent)]
    Cartan(#[from] crate::cartan::CartanError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub degree: String,
    pub character: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleSpec {
    pub characteristic: u32,
    pub group: GroupSpec,
    #[serde(rename = "module")]
    pub modules: Vec<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsSpec>,
}

impl TupleSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Toml(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("tuple specs serialize")
    }

    /// Builds the tuple, in characteristic `ch` when given.
    pub fn build(&self, ch: Option<u32>) -> Result<YDTuple, CliError> {
        let ch = Characteristic::new(ch.unwrap_or(self.characteristic))?;
        let group = Arc::new(self.group.build()?);
        if self.modules.is_empty() {
            return Err(CliError::Toml("at least one [[module]] is required".into()));
        }
        let mut modules = Vec::with_capacity(self.modules.len());
        for (index, m) in self.modules.iter().enumerate() {
            let bad = |reason: String| CliError::Module { index: index + 1, reason };
            let g = group.parse_word(&m.degree).map_err(|e| bad(e.to_string()))?;
            let cent = group.centralizer(g);
            let mut gens = Vec::new();
            let mut values = Vec::new();
            for (w, v) in &m.character {
                let h = group.parse_word(w).map_err(|e| bad(e.to_string()))?;
                if !cent.contains(h) {
                    return Err(bad(format!("{w} does not centralize the degree {}", m.degree)));
                }
                gens.push(h);
                values.push(RootOfUnity::parse(v, ch).map_err(|e| bad(e.to_string()))?);
            }
            let chi = group
                .character_from_values(&cent, &gens, &values)
                .map_err(|e| bad(e.to_string()))?;
            modules.push(YDModule::induce(&group, g, &chi).map_err(|e| bad(e.to_string()))?);
        }
        Ok(YDTuple::new(group, modules, ch)?)
    }

    /// Spec of a tuple whose group was built from `group`.
    pub fn from_tuple(group: GroupSpec, m: &YDTuple) -> Result<Self, CliError> {
        let g = m.group();
        let mut modules = Vec::new();
        for v in m.modules() {
            let (s, chi) = v.simple_data()?;
            let character = chi
                .generators()
                .iter()
                .zip(chi.generator_values())
                .map(|(&h, q)| (g.word(h), q.to_string()))
                .collect();
            modules.push(ModuleSpec {
                degree: g.word(s),
                character,
            });
        }
        Ok(TupleSpec {
            characteristic: m.characteristic().p(),
            group,
            modules,
            caps: None,
        })
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalOpts {
    /// Largest adjoint power tried for a Cartan entry.
    #[arg(long, global = true)]
    pub cap_adjoint: Option<u32>,
    /// Largest number of objects visited while closing under reflections.
    #[arg(long, global = true)]
    pub cap_objects: Option<usize>,
    /// Largest number of roots tracked per object.
    #[arg(long, global = true)]
    pub cap_roots: Option<usize>,
    /// Total degree of the direct symmetrizer computations.
    #[arg(long, global = true)]
    pub oracle_max_degree: Option<u32>,
    /// Overrides the characteristic of the tuple file.
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u32>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Parser)]
#[command(name = "nichols", version, about = "Weyl groupoids, skeletons and Nichols algebras of Yetter-Drinfeld tuples")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Skeleton, Cartan graph and Nichols algebra with all verdicts.
    Classify { file: PathBuf },
    /// Cartan matrix of the tuple and its type.
    Cartan { file: PathBuf },
    /// Closes the tuple under reflections.
    Explore { file: PathBuf },
    /// Hilbert series from the product over positive roots.
    Hilbert {
        file: PathBuf,
        /// One variable per module (default).
        #[arg(long, conflicts_with = "single_t")]
        multivariate: bool,
        /// All variables specialized to one.
        #[arg(long)]
        single_t: bool,
        /// Compare with direct symmetrizer ranks up to this total degree.
        #[arg(long)]
        crosscheck: Option<u32>,
    },
    /// Graded dimensions from the symmetrizer ranks.
    Oracle { file: PathBuf },
    /// Canonical tuple with a skeleton of the given type, as a tuple file.
    Realize {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        theta: Option<usize>,
    },
    /// Position of a rank-three graph in the catalog.
    #[command(name = "catalog-rank3")]
    CatalogRank3 { file: PathBuf },
}

/// Result of a subcommand: rendered output and whether it was conclusive.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub inconclusive: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

fn caps_for(spec: &TupleSpec, opts: &GlobalOpts) -> ClassifyCaps {
    let file = spec.caps.clone().unwrap_or_default();
    let d = ClassifyCaps::default();
    ClassifyCaps {
        explore: ExploreCaps {
            max_objects: opts.cap_objects.or(file.objects).unwrap_or(d.explore.max_objects),
            max_roots: opts.cap_roots.or(file.roots).unwrap_or(d.explore.max_roots),
            adjoint_cap: opts.cap_adjoint.or(file.adjoint).unwrap_or(d.explore.adjoint_cap),
        },
        oracle_degree: opts.oracle_max_degree.or(file.oracle_degree).unwrap_or(d.oracle_degree),
        rank_one_degree: d.rank_one_degree,
    }
}

fn load(path: &PathBuf, opts: &GlobalOpts) -> Result<(TupleSpec, YDTuple, ClassifyCaps), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let spec = TupleSpec::parse(&text)?;
    let m = spec.build(opts.characteristic)?;
    let caps = caps_for(&spec, opts);
    Ok((spec, m, caps))
}

fn root_str(r: &[i64]) -> String {
    format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn big(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn series_json(h: &HilbertSeries) -> Value {
    Value::Array(h.terms().map(|(e, c)| json!({"exponent": e, "coefficient": big(*c)})).collect())
}

fn dimension_json(d: &NicholsDimension) -> Value {
    match d {
        NicholsDimension::Finite(n) => json!({"finite": true, "decimal": n.to_string(), "factored": factored(*n)}),
        NicholsDimension::Infinite(why) => json!({"finite": false, "reason": why}),
    }
}

fn verdict_json(v: &Verdict) -> Value {
    json!({"verdict": v.label(), "evidence": v.evidence.to_string(), "detail": v.detail})
}

fn verdict_line(name: &str, v: &Verdict) -> String {
    format!("verdict {name}: {} ({}) {}\n", v.label(), v.evidence, v.detail)
}

fn components_str(c: &[Vec<usize>]) -> String {
    c.iter()
        .map(|c| format!("{{{}}}", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Text and JSON renderings of a classification report.
pub fn render_report(r: &TupleReport) -> (String, Value) {
    let mut t = String::new();
    let yes = |b: bool| if b { "yes" } else { "no" };
    t += &format!(
        "input: rank {}, characteristic {}, group order {}\n",
        r.rank, r.characteristic, r.group_order
    );
    t += &format!("support generates: {}\n", yes(r.support_generates));
    t += &format!(
        "braid indecomposable: {} {}\n",
        yes(r.braid_indecomposable()),
        components_str(&r.braid_components)
    );
    match &r.cartan {
        Ok(a) => t += &format!("cartan matrix: {a}\n"),
        Err(e) => t += &format!("cartan matrix: unavailable ({e})\n"),
    }
    match &r.skeleton {
        Ok(s) => t += &s.to_string(),
        Err(e) => t += &format!("skeleton: none ({e})\n"),
    }
    t += &format!("skeleton type: {}\n", r.skeleton_type);
    let g = &r.graph;
    t += &format!("graph: {}, objects {}", g.status, g.objects);
    if let Some(n) = g.reduced_objects {
        t += &format!(", reduced {n}");
    }
    if let Some(n) = g.positive_roots {
        t += &format!(", positive roots {n}");
    }
    t += &format!(", standard {}", yes(g.standard));
    if let Some(c) = g.rank3_case {
        t += &format!(", rank-three case {c}");
    }
    t += "\n";
    t += &verdict_line("skeleton", &r.skeleton_verdict);
    t += &verdict_line("groupoid", &r.groupoid_verdict);
    t += &verdict_line("nichols", &r.nichols_verdict);
    match (&r.inconsistency, r.triangle_applies) {
        (Some(why), _) => t += &format!("equivalence: INCONSISTENT {why}\n"),
        (None, true) => t += "equivalence: consistent\n",
        (None, false) => t += "equivalence: not applicable\n",
    }
    if let Some(d) = &r.dimension {
        t += &format!("dimension: {d}\n");
    }
    if let Some(h) = &r.hilbert {
        t += "hilbert series:\n";
        for line in h.to_string().lines() {
            t += &format!("  {line}\n");
        }
    }
    if let Some(cc) = &r.crosscheck {
        let top = cc.lines.last().map_or(0, |l| l.degree);
        t += &format!(
            "oracle cross-check to degree {top}: {}\n",
            if cc.ok() { "match" } else { "MISMATCH" }
        );
    }
    for w in &r.warnings {
        t += &format!("warning: {w}\n");
    }
    let j = json!({
        "rank": r.rank,
        "characteristic": r.characteristic,
        "group_order": r.group_order,
        "support_generates": r.support_generates,
        "braid_indecomposable": r.braid_indecomposable(),
        "braid_components": r.braid_components,
        "cartan_matrix": r.cartan.as_ref().ok().map(|a| a.rows().clone()),
        "skeleton": match &r.skeleton { Ok(s) => Value::String(s.to_string()), Err(e) => json!({"none": e}) },
        "skeleton_type": r.skeleton_type.to_string(),
        "graph": {
            "status": g.status,
            "objects": g.objects,
            "reduced_objects": g.reduced_objects,
            "positive_roots": g.positive_roots,
            "standard": g.standard,
            "rank3_case": g.rank3_case.map(|c| c.to_string()),
            "roots": g.roots,
        },
        "verdicts": {
            "skeleton": verdict_json(&r.skeleton_verdict),
            "groupoid": verdict_json(&r.groupoid_verdict),
            "nichols": verdict_json(&r.nichols_verdict),
        },
        "triangle_applies": r.triangle_applies,
        "inconsistency": r.inconsistency,
        "dimension": r.dimension.as_ref().map(dimension_json),
        "hilbert_series": r.hilbert.as_ref().map(series_json),
        "crosscheck": r.crosscheck.as_ref().map(|c| json!({
            "degree": c.lines.last().map_or(0, |l| l.degree),
            "match": c.ok(),
        })),
        "warnings": r.warnings,
    });
    (t, j)
}

pub fn run_classify(m: &YDTuple, caps: ClassifyCaps) -> Result<Outcome, CliError> {
    let r = classify_tuple(m, caps)?;
    let (text, json) = render_report(&r);
    let capped = [&r.skeleton_verdict, &r.groupoid_verdict, &r.nichols_verdict]
        .iter()
        .any(|v| v.evidence == crate::skeleton::Evidence::CapReached);
    Ok(Outcome {
        text,
        json,
        inconclusive: r.finite().is_none() || (capped && r.groupoid_verdict.finite.is_none()),
    })
}

fn run_cartan(m: &YDTuple, caps: ClassifyCaps) -> Result<Outcome, CliError> {
    let adj = caps.explore.adjoint_cap;
    match cartan_matrix(m, adj)? {
        Ok(a) => {
            let ty = classify_gcm(&a)?;
            let name = finite_type_name(&a).map(|n| n.to_string());
            let mut text = format!("cartan matrix: {a}\ntype: {ty}\n");
            if let Some(n) = &name {
                text += &format!("name: {n}\n");
            }
            Ok(Outcome {
                text,
                json: json!({"cartan_matrix": a.rows(), "type": ty.to_string(), "name": name}),
                inconclusive: false,
            })
        }
        Err((i, j)) => Ok(Outcome {
            text: format!("cartan matrix: entry ({},{}) exceeds the adjoint cap {adj}\n", i + 1, j + 1),
            json: json!({"cartan_matrix": null, "exceeds_cap": [i + 1, j + 1]}),
            inconclusive: true,
        }),
    }
}

fn explore_status(ex: &Exploration) -> (String, bool) {
    match &ex.status {
        ExploreStatus::Complete => ("complete".into(), false),
        ExploreStatus::ObjectCap => ("object cap reached".into(), true),
        ExploreStatus::RootCap => ("root cap reached".into(), true),
        ExploreStatus::ReflectionFailed { object, index, reason } => (
            format!("reflection {} at object {object} failed: {reason}", index + 1),
            true,
        ),
    }
}

fn run_explore(m: &YDTuple, caps: ClassifyCaps) -> Result<Outcome, CliError> {
    let ex = explore(m, caps.explore)?;
    let (status, inconclusive) = explore_status(&ex);
    let mut text = format!("status: {status}\nobjects: {}\n", ex.objects_seen);
    let f = ex.flags;
    text += &format!(
        "finite: {}\ncartan graph: {}\nstandard: {}\nroot axioms: {}\n",
        f.is_finite, f.is_cartan_graph, f.is_standard, f.root_axioms
    );
    let mut objects = Vec::new();
    if let Some(g) = &ex.reduced {
        text += &format!("reduced objects: {}\n", g.num_objects());
        for x in 0..g.num_objects() {
            let refl: Vec<usize> = (0..g.rank()).map(|i| g.reflection(x, i)).collect();
            let roots = ex.root_set(x).map(|r| r.positive).unwrap_or_default();
            text += &format!(
                "  object {x}: {} reflections {:?} positive roots {}\n",
                g.matrix(x),
                refl,
                roots.len()
            );
            objects.push(json!({"matrix": g.matrix(x).rows(), "reflections": refl, "positive_roots": roots}));
        }
    }
    for d in &ex.diagnostics {
        text += &format!("diagnostic: {d}\n");
    }
    let json = json!({
        "status": status,
        "objects": ex.objects_seen,
        "flags": {"finite": f.is_finite, "cartan_graph": f.is_cartan_graph, "standard": f.is_standard, "root_axioms": f.root_axioms},
        "reduced": objects,
        "diagnostics": ex.diagnostics,
    });
    Ok(Outcome { text, json, inconclusive })
}

fn run_hilbert(m: &YDTuple, caps: ClassifyCaps, single_t: bool, crosscheck: Option<u32>) -> Result<Outcome, CliError> {
    let ex = explore(m, caps.explore)?;
    let (status, capped) = explore_status(&ex);
    if !ex.flags.is_finite {
        let dim = nichols_dimension(&ex, caps.rank_one_degree)?;
        return Ok(Outcome {
            text: format!("graph: {status}\ndimension: {dim}\n"),
            json: json!({"graph": status, "dimension": dimension_json(&dim)}),
            inconclusive: capped,
        });
    }
    let h = hilbert_series(&ex, caps.rank_one_degree)?;
    let mut text = String::new();
    let terms = if single_t {
        let c = h.collapse();
        for (k, v) in c.iter().enumerate() {
            text += &format!("{k} : {v}\n");
        }
        Value::Array(c.iter().map(|&v| big(v)).collect())
    } else {
        text += &h.to_string();
        series_json(&h)
    };
    let total = h.total();
    text += &format!("dimension: {total} = {}\n", factored(total));
    let mut json = json!({
        "series": terms,
        "dimension": dimension_json(&NicholsDimension::Finite(total)),
    });
    if let Some(d) = crosscheck {
        let cc = hilbert_oracle_crosscheck(m, &h, d)?;
        for l in &cc.lines {
            let p: u128 = l.predicted.values().sum();
            let c: u128 = l.computed.values().sum();
            text += &format!(
                "crosscheck degree {}: predicted {p} computed {c} {}\n",
                l.degree,
                if l.ok() { "ok" } else { "MISMATCH" }
            );
        }
        json["crosscheck"] = json!({"degree": d, "match": cc.ok()});
    }
    Ok(Outcome {
        text,
        json,
        inconclusive: false,
    })
}

fn run_oracle(m: &YDTuple, caps: ClassifyCaps) -> Result<Outcome, CliError> {
    let dims = tuple_graded_dims(m, caps.oracle_degree)?;
    let mut text = String::new();
    let mut graded = Vec::new();
    for (n, by_degree) in dims.iter().enumerate() {
        let total: u128 = by_degree.values().sum();
        text += &format!("{n} : {total}\n");
        graded.push(big(total));
    }
    Ok(Outcome {
        text,
        json: json!({"graded_dims": graded}),
        inconclusive: false,
    })
}

fn parse_type(ty: &str, theta: Option<usize>) -> Result<SkeletonType, CliError> {
    let lower = ty.to_lowercase();
    match (lower.parse::<SkeletonType>(), theta) {
        (Ok(t), None) => Ok(t),
        (Ok(t), Some(n)) if t.theta() == n => Ok(t),
        _ => {
            let name = lower.split('_').next().unwrap_or(&lower);
            let n = theta.ok_or_else(|| CliError::Toml(format!("--theta is required for {ty}")))?;
            Ok(SkeletonType::from_name(name, n)?)
        }
    }
}

/// Canonical realization of a skeleton type as a tuple file.
pub fn run_realize(ty: SkeletonType, ch: u32) -> Result<TupleSpec, CliError> {
    let (group, m) = realize_skeleton_spec(ty, Characteristic::new(ch)?)?;
    TupleSpec::from_tuple(group, &m)
}

fn run_catalog_rank3(m: &YDTuple, caps: ClassifyCaps) -> Result<Outcome, CliError> {
    let ex = explore(m, caps.explore)?;
    let (status, capped) = explore_status(&ex);
    let Some(g) = ex.reduced.as_ref().filter(|_| ex.flags.is_finite) else {
        return Ok(Outcome {
            text: format!("graph: {status}\ncase: none\n"),
            json: json!({"graph": status, "case": null}),
            inconclusive: capped,
        });
    };
    let (case, perm, columns) = rank3_catalog_match(g)?;
    let x = ex.class_of[0];
    let roots: Vec<Root> = ex.root_set(x).map(|r| r.positive).unwrap_or_default();
    let mut text = format!("case: {case}\n");
    if let Some(p) = &perm {
        text += &format!("permutation: {p:?}\n");
    }
    text += &format!("column property: {columns}\n");
    text += &format!("objects: {}\npositive roots: {}\n", g.num_objects(), roots.len());
    for r in &roots {
        text += &format!("  {}\n", root_str(r));
    }
    let all = ex.roots.as_ref().map(|r| r[x].clone()).unwrap_or_default();
    let orbits: Option<Vec<Vec<Root>>> = weyl_orbits(g, x, &all, caps.explore.max_objects.max(4096))
        .map(|os| os.into_iter().map(|o| o.into_iter().filter(|r| is_positive(r)).collect()).collect());
    if let Some(orbits) = &orbits {
        for o in orbits {
            text += &format!("orbit of {} positive roots through {}\n", o.len(), root_str(&o[0]));
        }
    }
    let json = json!({
        "case": case.to_string(),
        "permutation": perm,
        "column_property": columns,
        "objects": g.num_objects(),
        "positive_roots": roots,
        "orbits": orbits,
    });
    Ok(Outcome {
        text,
        json,
        inconclusive: false,
    })
}

/// Runs a parsed command line; the result is the text to print.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Realize { ty, theta } => {
            let t = parse_type(ty, *theta)?;
            let spec = run_realize(t, opts.characteristic.unwrap_or(0))?;
            let text = spec.to_toml();
            let json = serde_json::to_value(&spec).expect("tuple specs serialize");
            Ok(Outcome {
                text,
                json,
                inconclusive: false,
            })
        }
        Command::Classify { file } => {
            let (_, m, caps) = load(file, opts)?;
            run_classify(&m, caps)
        }
        Command::Cartan { file } => {
            let (_, m, caps) = load(file, opts)?;
            run_cartan(&m, caps)
        }
        Command::Explore { file } => {
            let (_, m, caps) = load(file, opts)?;
            run_explore(&m, caps)
        }
        Command::Hilbert {
            file,
            single_t,
            crosscheck,
            ..
        } => {
            let (_, m, caps) = load(file, opts)?;
            run_hilbert(&m, caps, *single_t, *crosscheck)
        }
        Command::Oracle { file } => {
            let (_, m, caps) = load(file, opts)?;
            run_oracle(&m, caps)
        }
        Command::CatalogRank3 { file } => {
            let (_, m, caps) = load(file, opts)?;
            run_catalog_rank3(&m, caps)
        }
    }
}

/// Entry point of the binary; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.opts.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize"));
            } else {
                print!("{}", out.text);
            }
            if out.inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
