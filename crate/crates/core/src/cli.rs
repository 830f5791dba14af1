//! The `nsd` command line: argument parsing, input loading and report
//! rendering. [`run`] does all the work and returns what the binary prints.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::connectivity::{self, Classification, ComponentKind};
use crate::digraph::Digraph;
use crate::error::{Error, ErrorClass, Result};
use crate::filter::{FilterOracle, IndexSet, SetOp};
use crate::galaxies::{self, GalaxyRelation, InternalMetric};
use crate::ns_connectivity::BoundsCategory;
use crate::numbers::{HyperNat, Relation};
use crate::ultrapower::{Builtin, Decision, DigraphFamily, InternalElement, SelectorSpec, Sort, Ultrapower};

#[derive(Debug, Parser)]
#[command(name = "nsd", version, about = "Exact workbench for nonstandard digraphs")]
struct Cli {
    /// Tower constant c of the filter oracle.
    #[arg(long, global = true, default_value_t = 0)]
    tower: u64,
    /// Number of indices checked pointwise against standard computations.
    #[arg(long, global = true, default_value_t = 64)]
    horizon: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connectedness, arc-count bounds, components and distances.
    Analyze(AnalyzeArgs),
    /// Galaxy decompositions of dipath enlargements.
    Galaxy(GalaxyArgs),
    /// Decide and combine index sets.
    Filter {
        #[command(subcommand)]
        action: FilterAction,
    },
    /// Parse an input file and cross-check it.
    Validate { file: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeAction {
    Classify,
    Bounds,
    Components,
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Strong,
    Unilateral,
    Weak,
}

impl From<KindArg> for ComponentKind {
    fn from(k: KindArg) -> ComponentKind {
        match k {
            KindArg::Strong => ComponentKind::Strong,
            KindArg::Unilateral => ComponentKind::Unilateral,
            KindArg::Weak => ComponentKind::Weak,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct AnalyzeArgs {
    /// Family spec: a JSON file, inline JSON, or a builtin name.
    family: String,
    #[arg(value_enum)]
    action: AnalyzeAction,
    /// Vertex selectors (expressions, JSON, or files).
    selectors: Vec<String>,
    /// Work on the standard digraph D_n instead of the ultrapower.
    #[arg(long)]
    at: Option<u64>,
    #[arg(long, value_enum, default_value_t = KindArg::Strong)]
    kind: KindArg,
    /// Roster file of vertex selectors for `components`.
    #[arg(long)]
    roster: Option<String>,
    /// Measure dipath length instead of semipath distance.
    #[arg(long)]
    directed: bool,
}

#[derive(Debug, Args)]
struct GalaxyArgs {
    family: String,
    /// Roster file and/or one of partition, order, chain, witness.
    #[arg(num_args = 0..=2)]
    operands: Vec<String>,
    /// Standard anchor vertex.
    #[arg(long, default_value = "const:0", allow_hyphen_values = true)]
    anchor: String,
    /// Chain window `a..b`.
    #[arg(long, visible_alias = "range", allow_hyphen_values = true)]
    chain: Option<String>,
}

#[derive(Debug, Subcommand)]
enum FilterAction {
    /// Is the set in the ultrafilter?
    Decide { set: String },
    /// Finite, cofinite or neither.
    Classify { set: String },
    /// Apply union, intersect, difference or complement.
    Op { op: String, sets: Vec<String> },
}

/// What the binary should print and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Parse => 2,
        ErrorClass::Validation => 3,
        ErrorClass::Unsupported => 4,
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome { code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 }, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: error_json("UsageError", "parse", text.trim_end()) },
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = match cli.output {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
                Format::Text => render_text(&report),
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => {
            let class = match e.class() {
                ErrorClass::Parse => "parse",
                ErrorClass::Validation => "validation",
                ErrorClass::Unsupported => "unsupported",
            };
            Outcome { code: exit_code(e.class()), stdout: String::new(), stderr: error_json(e.kind(), class, &e.to_string()) }
        }
    }
}

fn error_json(kind: &str, class: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "class": class, "message": message } }).to_string() + "\n"
}

fn execute(cli: &Cli) -> Result<Value> {
    let ctx = Context { oracle: FilterOracle::new(cli.tower), horizon: cli.horizon };
    let report = match &cli.command {
        Command::Analyze(args) => analyze(&ctx, args)?,
        Command::Galaxy(args) => galaxy(&ctx, args)?,
        Command::Filter { action } => filter(&ctx, action)?,
        Command::Validate { file } => validate(&ctx, file)?,
    };
    Ok(report.finish(&ctx))
}

struct Context {
    oracle: FilterOracle,
    horizon: u64,
}

struct Report {
    command: &'static str,
    case: String,
    inputs: Value,
    results: Value,
    certificates: Vec<Value>,
}

impl Report {
    fn new(command: &'static str, case: impl Into<String>, inputs: Value) -> Report {
        Report { command, case: case.into(), inputs, results: Value::Null, certificates: Vec::new() }
    }

    fn decision(&mut self, claim: impl Into<String>, d: &Decision) {
        self.certificates.push(json!({ "claim": claim.into(), "holds": d.holds, "witness": d.witness }));
    }

    fn hypernat(&mut self, claim: impl Into<String>, holds: bool, x: &HyperNat) {
        self.certificates.push(json!({ "claim": claim.into(), "holds": holds, "hypernat": x }));
    }

    fn finish(self, ctx: &Context) -> Value {
        json!({
            "command": self.command,
            "case": self.case,
            "inputs": self.inputs,
            "results": self.results,
            "certificates": self.certificates,
            "oracle": { "tower": ctx.oracle.tower, "horizon": ctx.horizon },
        })
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

/// A file's contents when `arg` names a file, else `arg` itself.
fn read_input(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")));
    }
    if arg.ends_with(".json") {
        return Err(Error::Parse(format!("cannot read {arg}: no such file")));
    }
    Ok(arg.to_string())
}

fn load_json(arg: &str) -> Result<Value> {
    Ok(serde_json::from_str(&read_input(arg)?)?)
}

fn load_family(arg: &str) -> Result<DigraphFamily> {
    let text = read_input(arg)?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)?;
        if v.get("kind").is_none() && (v.get("arcs").is_some() || v.get("partition").is_some()) {
            return Ok(DigraphFamily::enlargement(serde_json::from_value(v)?));
        }
        return DigraphFamily::from_json_value(&v);
    }
    let name = match trimmed {
        "one_way" => "one_way_dipath_enlargement",
        "two_way" => "two_way_dipath_enlargement",
        other => other,
    };
    Ok(DigraphFamily::builtin(Builtin::from_name(name)?))
}

fn selector_spec(arg: &str) -> Result<SelectorSpec> {
    SelectorSpec::parse(&read_input(arg)?)
}

fn vertex(up: &Ultrapower, spec: SelectorSpec) -> Result<InternalElement> {
    up.element(spec.into_sort(Sort::Vertex)?)
}

fn vertices(up: &Ultrapower, args: &[String]) -> Result<Vec<InternalElement>> {
    args.iter().map(|a| vertex(up, selector_spec(a)?)).collect()
}

/// Vertex and arc rosters: a JSON list of vertex selectors, or
/// `{"vertices": [..], "arcs": [..]}`.
fn load_roster(up: &Ultrapower, arg: &str) -> Result<(Vec<InternalElement>, Vec<InternalElement>)> {
    let v = load_json(arg)?;
    let (vs, arcs) = match &v {
        Value::Array(items) => (items.clone(), Vec::new()),
        Value::Object(map) => {
            let list = |key: &str| match map.get(key) {
                None => Ok(Vec::new()),
                Some(Value::Array(items)) => Ok(items.clone()),
                Some(_) => Err(Error::Parse(format!("roster `{key}` must be a list"))),
            };
            (list("vertices")?, list("arcs")?)
        }
        _ => return Err(Error::Parse("roster must be a list or an object".into())),
    };
    let vs = vs.iter().map(|x| vertex(up, SelectorSpec::from_json(x)?)).collect::<Result<Vec<_>>>()?;
    let arcs = arcs
        .iter()
        .map(|x| up.element(SelectorSpec::from_json(x)?.into_sort(Sort::Arc)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((vs, arcs))
}

fn names(xs: &[InternalElement]) -> Vec<String> {
    xs.iter().map(|x| x.selector().to_string()).collect()
}

fn standard_at(family: &DigraphFamily, n: u64) -> Result<Digraph> {
    family
        .digraph_at(n)
        .ok_or_else(|| Error::UnsupportedFamily(format!("D_{n} of {} is infinite", family.name())))
}

fn label_at(d: &Digraph, x: &InternalElement, n: u64) -> Result<usize> {
    let label = x.labels().eval(n);
    usize::try_from(label)
        .ok()
        .filter(|&v| v < d.vertex_count())
        .ok_or(Error::UnknownId { kind: "vertex", id: label.max(0) as usize })
}

fn grade_name(g: Classification) -> &'static str {
    match g {
        Classification::Strong => "strong",
        Classification::StrictlyUnilateral => "strictly_unilateral",
        Classification::StrictlyWeak => "strictly_weak",
        Classification::Disconnected => "disconnected",
    }
}

const GRADES: [Classification; 4] = [
    Classification::Strong,
    Classification::StrictlyUnilateral,
    Classification::StrictlyWeak,
    Classification::Disconnected,
];

/// The inequality of `category` evaluated on standard counts.
fn inequality_holds(category: BoundsCategory, p: i128, q: i128) -> bool {
    let p1 = (p - 1).max(0);
    let p2 = (p - 2).max(0);
    match category {
        BoundsCategory::CompleteSymmetric => q == p * p1,
        BoundsCategory::Strong => p <= 1 || (p <= q && q <= p * p1),
        BoundsCategory::StrictlyUnilateral => p1 <= q && q <= p1 * p1,
        BoundsCategory::StrictlyWeak => p1 <= q && q <= p1 * p2,
        BoundsCategory::Disconnected => q <= p1 * p2,
    }
}

fn standard_category(d: &Digraph) -> BoundsCategory {
    let p = d.vertex_count();
    if d.is_simple() && d.arc_count() == p * p.saturating_sub(1) {
        return BoundsCategory::CompleteSymmetric;
    }
    match connectivity::classify_digraph(d) {
        Classification::Strong => BoundsCategory::Strong,
        Classification::StrictlyUnilateral => BoundsCategory::StrictlyUnilateral,
        Classification::StrictlyWeak => BoundsCategory::StrictlyWeak,
        Classification::Disconnected => BoundsCategory::Disconnected,
    }
}

fn analyze(ctx: &Context, args: &AnalyzeArgs) -> Result<Report> {
    let family = load_family(&args.family)?;
    let up = Ultrapower::new(family, ctx.oracle);
    let targets = vertices(&up, &args.selectors)?;
    let inputs = json!({
        "family": up.family().to_json_value(),
        "action": to_value(&args.action.to_possible_value().map(|v| v.get_name().to_string())),
        "selectors": names(&targets),
        "at": args.at,
    });
    match args.at {
        Some(n) => analyze_at(&up, args, &targets, n, inputs),
        None => analyze_internal(ctx, &up, args, &targets, inputs),
    }
}

fn analyze_at(up: &Ultrapower, args: &AnalyzeArgs, targets: &[InternalElement], n: u64, inputs: Value) -> Result<Report> {
    let d = standard_at(up.family(), n)?;
    let counts = json!({ "vertices": d.vertex_count(), "arcs": d.arc_count() });
    match args.action {
        AnalyzeAction::Classify => match targets {
            [] => {
                let grade = connectivity::classify_digraph(&d);
                let mut r = Report::new("analyze", grade_name(grade), inputs);
                r.results = json!({ "grade": grade, "counts": counts });
                Ok(r)
            }
            [u, v] => {
                let grade = connectivity::pair_connectedness(&d, label_at(&d, u, n)?, label_at(&d, v, n)?)?;
                let mut r = Report::new("analyze", to_value(&grade).as_str().unwrap_or_default().to_string(), inputs);
                r.results = json!({ "pair_grade": grade, "counts": counts });
                Ok(r)
            }
            _ => Err(Error::Parse("classify takes no selectors or exactly two".into())),
        },
        AnalyzeAction::Bounds => {
            let category = standard_category(&d);
            let (p, q) = (d.vertex_count() as i128, d.arc_count() as i128);
            let mut r = Report::new("analyze", category.name(), inputs);
            r.results = json!({
                "category": category,
                "inequality": category.inequality(),
                "p": p as i64,
                "q": q as i64,
                "simple": d.is_simple(),
                "holds": inequality_holds(category, p, q),
            });
            Ok(r)
        }
        AnalyzeAction::Components => {
            let kind = ComponentKind::from(args.kind);
            let comps = connectivity::components(&d, kind);
            let mut r = Report::new("analyze", to_value(&kind).as_str().unwrap_or_default().to_string(), inputs);
            r.results = json!({ "kind": kind, "components": comps, "counts": counts });
            Ok(r)
        }
        AnalyzeAction::Distance => {
            let [u, v] = targets else {
                return Err(Error::Parse("distance takes exactly two selectors".into()));
            };
            let (a, b) = (label_at(&d, u, n)?, label_at(&d, v, n)?);
            let dist = if args.directed {
                connectivity::directed_distance(&d, a, b)?
            } else {
                connectivity::standard_distance(&d, a, b)?
            };
            let mut r = Report::new("analyze", if args.directed { "dipath" } else { "semipath" }, inputs);
            r.results = json!({ "from": a, "to": b, "distance": dist, "reachable": dist.is_some() });
            Ok(r)
        }
    }
}

fn analyze_internal(ctx: &Context, up: &Ultrapower, args: &AnalyzeArgs, targets: &[InternalElement], inputs: Value) -> Result<Report> {
    match args.action {
        AnalyzeAction::Classify => match targets {
            [] => {
                let c = up.ns_classify_family();
                let mut r = Report::new("analyze", grade_name(c.grade), inputs);
                for g in GRADES {
                    r.decision(format!("D_n is {} for almost all n", grade_name(g)), &up.decide(c.sets.get(g).clone()));
                }
                let pointwise = pointwise(ctx, up.family(), |n, d| {
                    c.sets.get(connectivity::classify_digraph(d)).contains(n)
                });
                r.results = json!({ "grade": c.grade, "family": up.family().name(), "pointwise": pointwise });
                Ok(r)
            }
            [u, v] => {
                let c = up.ns_pair_connectedness(u, v)?;
                let mut r = Report::new("analyze", grade_name(c.grade), inputs);
                r.decision("dipath from u to v", &up.decide(c.reach_forward.clone()));
                r.decision("dipath from v to u", &up.decide(c.reach_backward.clone()));
                r.decision("semipath between u and v", &up.decide(c.semireach.clone()));
                r.decision("dipaths both ways", &up.decide(c.reach_forward.intersect(&c.reach_backward)));
                r.results = json!({ "grade": c.grade });
                Ok(r)
            }
            _ => Err(Error::Parse("classify takes no selectors or exactly two".into())),
        },
        AnalyzeAction::Bounds => {
            let b = up.check_bounds()?;
            let mut r = Report::new("analyze", b.category.name(), inputs);
            r.decision(format!("{} for almost all n", b.category.inequality()), &b.bound);
            if let Some(d) = &b.at_least_three {
                r.decision("p >= 3 for almost all n", d);
            }
            let category = b.category;
            let pointwise = pointwise(ctx, up.family(), |n, d| {
                let (p, q) = (d.vertex_count() as i128, d.arc_count() as i128);
                b.p.as_quasi().eval(n) == p && b.q.as_quasi().eval(n) == q && b.bound.witness.contains(n) == inequality_holds(category, p, q)
            });
            r.results = json!({
                "category": b.category,
                "inequality": b.category.inequality(),
                "p": b.p,
                "q": b.q,
                "p_text": b.p.to_string(),
                "q_text": b.q.to_string(),
                "holds": b.holds,
                "pointwise": pointwise,
            });
            Ok(r)
        }
        AnalyzeAction::Components => {
            let roster = match &args.roster {
                Some(file) => load_roster(up, file)?.0,
                None => targets.to_vec(),
            };
            if roster.is_empty() {
                return Err(Error::Parse("components needs a roster (--roster FILE or selectors)".into()));
            }
            let kind = ComponentKind::from(args.kind);
            let comps = up.ns_components(&roster, kind)?;
            let mut r = Report::new("analyze", to_value(&kind).as_str().unwrap_or_default().to_string(), inputs);
            for i in 0..roster.len() {
                for j in i + 1..roster.len() {
                    let c = up.ns_pair_connectedness(&roster[i], &roster[j])?;
                    let set = match kind {
                        ComponentKind::Strong => c.reach_forward.intersect(&c.reach_backward),
                        ComponentKind::Unilateral => c.reach_forward.union(&c.reach_backward),
                        ComponentKind::Weak => c.semireach,
                    };
                    r.decision(format!("roster {i} and {j} are {}ly connected", to_value(&kind).as_str().unwrap_or_default()), &up.decide(set));
                }
            }
            let named: Vec<Vec<String>> = comps.iter().map(|c| c.iter().map(|&i| roster[i].selector().to_string()).collect()).collect();
            r.results = json!({ "kind": kind, "roster": names(&roster), "components": comps, "members": named });
            Ok(r)
        }
        AnalyzeAction::Distance => {
            let [u, v] = targets else {
                return Err(Error::Parse("distance takes exactly two selectors".into()));
            };
            if args.directed {
                let (k, set) = up.ns_dipath_length(u, v)?;
                let mut r = Report::new("analyze", "dipath", inputs);
                r.decision("dipath from u to v", &up.decide(set));
                let limit = k.limit(&up.oracle());
                r.hypernat("dipath length is unlimited", limit.is_none(), &k);
                r.results = json!({ "distance": k, "text": k.to_string(), "limit": limit, "unlimited": limit.is_none() });
                Ok(r)
            } else {
                let k = up.ns_distance(u, v)?;
                let mut r = Report::new("analyze", "semipath", inputs);
                r.decision("D_n is weakly connected for almost all n", &up.is_weakly_connected_ae());
                let limit = k.limit(&up.oracle());
                r.hypernat("distance is unlimited", limit.is_none(), &k);
                r.results = json!({ "distance": k, "text": k.to_string(), "limit": limit, "unlimited": limit.is_none() });
                Ok(r)
            }
        }
    }
}

/// Checks `agree` on every finite `D_n` with `n` below the horizon.
fn pointwise(ctx: &Context, family: &DigraphFamily, mut agree: impl FnMut(u64, &Digraph) -> bool) -> Value {
    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    for n in 0..ctx.horizon {
        if let Some(d) = family.digraph_at(n) {
            checked += 1;
            if !agree(n, &d) {
                mismatches.push(n);
            }
        }
    }
    json!({ "checked": checked, "mismatches": mismatches })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GalaxyAction {
    Partition,
    Order,
    Chain,
    Witness,
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<i64>> {
    let bad = || Error::Parse(format!("range `{text}` is not of the form a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b || b - a > 64 {
        return Err(Error::Parse(format!("range `{text}` must be nonempty and span at most 65 indices")));
    }
    Ok(a..=b)
}

fn limited_certificate(r: &mut Report, up: &Ultrapower, claim: String, u: &InternalElement, v: &InternalElement) -> Result<bool> {
    let l = galaxies::limitedly_distant(up, u, v)?;
    match l.bound {
        Some(k) => {
            let d = up.decide(l.distance.compare(Relation::Le, &HyperNat::constant(k)));
            r.certificates.push(json!({ "claim": claim, "holds": true, "bound": k, "hypernat": l.distance, "witness": d.witness }));
        }
        None => r.hypernat(claim, false, &l.distance),
    }
    Ok(l.limited)
}

fn galaxy(ctx: &Context, args: &GalaxyArgs) -> Result<Report> {
    let family = load_family(&args.family)?;
    let up = Ultrapower::new(family, ctx.oracle);
    let mut action = None;
    let mut roster_file = None;
    for op in &args.operands {
        let parsed = match op.as_str() {
            "partition" => Some(GalaxyAction::Partition),
            "order" => Some(GalaxyAction::Order),
            "chain" => Some(GalaxyAction::Chain),
            "witness" => Some(GalaxyAction::Witness),
            _ => None,
        };
        match (parsed, action, roster_file) {
            (Some(a), None, _) => action = Some(a),
            (None, _, None) => roster_file = Some(op.as_str()),
            _ => return Err(Error::Parse(format!("unexpected galaxy operand `{op}`"))),
        }
    }
    let action = match (action, &args.chain, roster_file) {
        (Some(a), _, _) => a,
        (None, Some(_), _) => GalaxyAction::Chain,
        (None, None, Some(_)) => GalaxyAction::Partition,
        (None, None, None) => return Err(Error::Parse("galaxy needs an action or a roster".into())),
    };
    let anchor = vertex(&up, selector_spec(&args.anchor)?)?;
    let mut inputs = json!({
        "family": up.family().to_json_value(),
        "anchor": anchor.selector().to_string(),
    });
    let (case, results, certificates) = match action {
        GalaxyAction::Partition | GalaxyAction::Order => {
            let file = roster_file.ok_or_else(|| Error::Parse("this galaxy action needs a roster file".into()))?;
            let (roster, arcs) = load_roster(&up, file)?;
            inputs["roster"] = json!(names(&roster));
            inputs["arcs"] = json!(names(&arcs));
            let mut r = Report::new("galaxy", "", Value::Null);
            let parts = galaxies::galaxy_partition(&up, &roster, &arcs, &anchor)?;
            for g in &parts {
                let rep = &roster[g.vertices[0]];
                for &i in &g.vertices[1..] {
                    limited_certificate(&mut r, &up, format!("roster {i} limitedly distant from roster {}", g.vertices[0]), rep, &roster[i])?;
                }
                limited_certificate(&mut r, &up, format!("galaxy {} is principal", g.id), &anchor, rep)?;
            }
            if action == GalaxyAction::Partition {
                let listed: Vec<Value> = parts
                    .iter()
                    .map(|g| {
                        json!({
                            "id": g.id,
                            "principal": g.principal,
                            "vertices": g.vertices,
                            "arcs": g.arcs,
                            "members": g.vertices.iter().map(|&i| roster[i].selector().to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let results = json!({ "galaxies": listed, "count": parts.len(), "principal": parts.iter().filter(|g| g.principal).count() });
                ("partition", results, r.certificates)
            } else {
                let outer: Vec<usize> = parts.iter().filter(|g| !g.principal).map(|g| g.vertices[0]).collect();
                let mut pairs = Vec::new();
                for (x, &i) in outer.iter().enumerate() {
                    for &j in &outer[x + 1..] {
                        let o = galaxies::galaxy_order(&up, &roster[i], &roster[j], &anchor)?;
                        pairs.push(order_entry(&mut r, &up, i as i64, j as i64, &o));
                    }
                }
                ("order", json!({ "representatives": outer, "pairs": pairs }), r.certificates)
            }
        }
        GalaxyAction::Chain => {
            let range = parse_range(args.chain.as_deref().unwrap_or("-2..2"))?;
            inputs["chain"] = json!([range.start(), range.end()]);
            let chain = galaxies::galaxy_chain(&up, range)?;
            let mut r = Report::new("galaxy", "", Value::Null);
            let mut listed = Vec::new();
            for (j, v) in &chain {
                let limited = limited_certificate(&mut r, &up, format!("galaxy {j} is principal"), &anchor, v)?;
                let d = up.distance(&anchor, v)?;
                listed.push(json!({ "index": j, "representative": v.selector().to_string(), "principal": limited, "distance": d.to_string() }));
            }
            let mut pairs = Vec::new();
            let mut strict = true;
            for x in 0..chain.len() {
                for y in x + 1..chain.len() {
                    let o = galaxies::galaxy_order(&up, &chain[x].1, &chain[y].1, &anchor)?;
                    strict &= o.relation == GalaxyRelation::ACloser;
                    pairs.push(order_entry(&mut r, &up, chain[x].0, chain[y].0, &o));
                }
            }
            let results = json!({ "galaxies": listed, "pairs": pairs, "strictly_ordered": strict, "count": chain.len() });
            ("chain", results, r.certificates)
        }
        GalaxyAction::Witness => {
            let w = galaxies::unlimited_vertex_witness(&up)?;
            let mut r = Report::new("galaxy", "", Value::Null);
            r.decision("D_n is finite for almost all n", &up.is_hyperfinite());
            r.decision("D_n is weakly connected for almost all n", &up.is_weakly_connected_ae());
            let limited = limited_certificate(&mut r, &up, "witness is in the principal galaxy".into(), &anchor, &w)?;
            let d = up.distance(&anchor, &w)?;
            let results = json!({ "selector": w.selector().to_string(), "principal": limited, "distance": d });
            ("witness", results, r.certificates)
        }
    };
    let mut r = Report::new("galaxy", case, inputs);
    r.results = results;
    r.certificates = certificates;
    Ok(r)
}

fn order_entry(r: &mut Report, up: &Ultrapower, a: i64, b: i64, o: &galaxies::GalaxyOrder) -> Value {
    let grows = o.difference.compare_const(Relation::Gt, 0);
    let shrinks = o.difference.compare_const(Relation::Lt, 0);
    match o.relation {
        GalaxyRelation::ACloser => r.decision(format!("d(b) - d(a) > 0 for {a}, {b}"), &up.decide(grows)),
        GalaxyRelation::BCloser => r.decision(format!("d(b) - d(a) < 0 for {a}, {b}"), &up.decide(shrinks)),
        GalaxyRelation::Tied => {}
    }
    json!({ "a": a, "b": b, "relation": o.relation, "difference": o.difference, "difference_text": o.difference.to_string() })
}

fn load_set(arg: &str) -> Result<IndexSet> {
    Ok(serde_json::from_str(&read_input(arg)?)?)
}

fn filter(ctx: &Context, action: &FilterAction) -> Result<Report> {
    let o = ctx.oracle;
    match action {
        FilterAction::Decide { set } => {
            let s = load_set(set)?;
            let d = Decision::new(&o, s.clone());
            let mut r = Report::new("filter", "decide", json!({ "set": s }));
            r.decision("set is in the ultrafilter", &d);
            r.results = json!({ "in_filter": d.holds, "canonical": s, "text": s.to_string() });
            Ok(r)
        }
        FilterAction::Classify { set } => {
            let s = load_set(set)?;
            let d = Decision::new(&o, s.clone());
            let mut r = Report::new("filter", "classify", json!({ "set": s }));
            r.decision("set is in the ultrafilter", &d);
            r.results = json!({ "classification": s.classify(), "in_filter": d.holds, "canonical": s, "text": s.to_string() });
            Ok(r)
        }
        FilterAction::Op { op, sets } => {
            let which = SetOp::parse(op).ok_or_else(|| Error::Parse(format!("unknown set operation `{op}`")))?;
            if sets.len() != which.arity() {
                return Err(Error::Parse(format!("`{op}` takes {} set(s), got {}", which.arity(), sets.len())));
            }
            let loaded = sets.iter().map(|s| load_set(s)).collect::<Result<Vec<_>>>()?;
            let out = IndexSet::apply(which, &loaded[0], loaded.get(1))?;
            let d = Decision::new(&o, out.clone());
            let mut r = Report::new("filter", op.as_str(), json!({ "op": which, "sets": loaded }));
            r.decision("result is in the ultrafilter", &d);
            r.results = json!({ "result": out, "text": out.to_string(), "classification": out.classify(), "in_filter": d.holds });
            Ok(r)
        }
    }
}

fn validate(ctx: &Context, file: &str) -> Result<Report> {
    let v = load_json(file)?;
    let has = |k: &str| v.get(k).is_some();
    if has("kind") {
        let family = DigraphFamily::from_json_value(&v)?;
        let up = Ultrapower::new(family, ctx.oracle);
        let mut r = Report::new("validate", "family", json!({ "file": file }));
        let hyper = up.is_hyperfinite();
        r.decision("D_n is finite for almost all n", &hyper);
        r.decision("D_n is simple for almost all n", &up.is_simple_ae());
        r.decision("D_n is weakly connected for almost all n", &up.is_weakly_connected_ae());
        let grades = up.family().grade_sets();
        let counts = up.family().counts();
        let pointwise = pointwise(ctx, up.family(), |n, d| {
            let count_ok = counts
                .as_ref()
                .is_none_or(|(p, q)| p.eval(n) == d.vertex_count() as i128 && q.eval(n) == d.arc_count() as i128);
            count_ok && grades.get(connectivity::classify_digraph(d)).contains(n)
        });
        r.results = json!({
            "family": up.family().to_json_value(),
            "name": up.family().name(),
            "hyperfinite": hyper.holds,
            "counts": counts.map(|(p, q)| json!({ "p": p.to_string(), "q": q.to_string() })),
            "pointwise": pointwise,
        });
        Ok(r)
    } else if has("residues") {
        let s: IndexSet = serde_json::from_value(v)?;
        let d = Decision::new(&ctx.oracle, s.clone());
        let mut r = Report::new("validate", "index_set", json!({ "file": file }));
        r.decision("set is in the ultrafilter", &d);
        r.results = json!({ "canonical": s, "text": s.to_string(), "classification": s.classify() });
        Ok(r)
    } else if has("polys") {
        let x: HyperNat = serde_json::from_value(v)?;
        let limit = x.limit(&ctx.oracle);
        let mut r = Report::new("validate", "hypernat", json!({ "file": file }));
        r.hypernat("value is unlimited", limit.is_none(), &x);
        r.results = json!({ "canonical": x, "text": x.to_string(), "limit": limit });
        Ok(r)
    } else if has("arcs") || has("partition") {
        let d: Digraph = serde_json::from_value(v)?;
        let grade = connectivity::classify_digraph(&d);
        let mut r = Report::new("validate", "digraph", json!({ "file": file }));
        r.results = json!({
            "canonical": d,
            "vertices": d.vertex_count(),
            "arcs": d.arc_count(),
            "simple": d.is_simple(),
            "grade": grade,
            "strong_components": connectivity::strong_components(&d),
        });
        Ok(r)
    } else {
        Err(Error::Parse(format!("{file} is not a family, digraph, index set or hypernatural")))
    }
}

/// Flattens a report into `path: value` lines.
pub fn render_text(report: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                if map.is_empty() {
                    let _ = writeln!(out, "{prefix}: {{}}");
                }
                for (k, x) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                let _ = writeln!(out, "{prefix}: [{}]", parts.join(", "));
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            other => {
                let _ = writeln!(out, "{prefix}: {}", scalar(other));
            }
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk("", report, &mut out);
    out
}
