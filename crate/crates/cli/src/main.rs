use std::fmt::Write as _;
use std::process::ExitCode;

use affhur::checks::{self, SuiteOptions};
use affhur::hurwitz::{connect_detailed, orbit, AffineReflections, FiniteReflections, HurwitzAction, SearchLimits};
use affhur::intlattice::connection_index;
use affhur::quasicox::{
    absolute_length_affine, affine_simple_reflections, connect_reduced, enumerate_factorizations, fiber,
    generates_affine, is_quasi_coxeter_affine, FactorizationQuery,
};
use affhur::weyl_fin::{absolute_length, is_quasi_coxeter_fin, reduced_factorizations};
use affhur::{AffineReflection, AffineWeylElement, CartanType, CorootVector, Error, FiniteWeylElement, Root, RootSystem};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "affhur", version, about = "Reflection factorizations and Hurwitz orbits in finite and affine Weyl groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,

    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Level bound K for sampled factorizations.
    #[arg(short = 'K', long = "level-bound", global = true, default_value_t = 2)]
    level_bound: i64,

    /// Maximum braid word length explored by searches.
    #[arg(long, global = true, default_value_t = 16)]
    depth: usize,

    /// Maximum number of tuples visited by searches.
    #[arg(long, global = true, env = "AFFHUR_NODE_LIMIT", default_value_t = 1_000_000)]
    nodes: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List roots, coroots, the highest root and the connection index.
    Roots { group: String },
    /// Decide whether an element is quasi-Coxeter.
    CheckQc {
        group: String,
        /// JSON list of reflections ("1,1:1") and translations ("tr:1,0"), multiplied left to right.
        element: String,
        /// Treat the list as a tuple and test whether its entries generate the group.
        #[arg(long)]
        tuple: bool,
    },
    /// Enumerate reflection factorizations with levels in [-K, K].
    Factorize {
        group: String,
        element: String,
        /// Factorization length; defaults to the absolute length.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Absolute reflection length.
    Length {
        group: String,
        element: String,
        /// Largest length tried in affine groups; defaults to twice the rank.
        #[arg(long)]
        ceiling: Option<usize>,
    },
    /// Hurwitz orbit of a tuple of reflections.
    Orbit {
        group: String,
        tuple: String,
        /// Print every tuple of the orbit.
        #[arg(long)]
        list: bool,
    },
    /// Braid word sending one factorization to another.
    Connect { group: String, from: String, to: String },
    /// Tuples obtained by shifting the repeated tail levels by -K..K.
    Fiber { group: String, tuple: String },
    /// Run a verification suite.
    Verify {
        /// lemmas, example-a2, generation or main-theorem
        suite: String,
        /// Comma-separated types, e.g. B2,G2.
        #[arg(long, value_delimiter = ',')]
        groups: Vec<String>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification(String),
    Limits(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Limits(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Verification(_) => "verification",
            Failure::Usage(_) => "usage",
            Failure::Limits(_) => "limits",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Limits(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitsExceeded(_) | Error::LengthCeilingExceeded(_) => Failure::Limits(e.to_string()),
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// A command result: JSON payload, text rendering, and an optional failure
/// that still carries a partial report.
struct Report {
    result: Value,
    text: String,
    failure: Option<Failure>,
}

impl Report {
    fn ok(result: Value, text: String) -> Self {
        Report { result, text, failure: None }
    }
}

struct Group {
    rs: RootSystem,
    affine: bool,
}

fn parse_group(spec: &str) -> Result<Group, Failure> {
    let (affine, name) = match spec.trim().split_once(':') {
        Some((prefix, name)) if prefix.eq_ignore_ascii_case("affine") => (true, name),
        Some(_) => return Err(Failure::Usage(format!("unknown group prefix in {spec:?}"))),
        None => (false, spec),
    };
    let t: CartanType = name.parse()?;
    Ok(Group { rs: RootSystem::from_type(t)?, affine })
}

/// Reads a JSON list of strings, from the argument or from a file given as `@path`.
fn parse_list(arg: &str) -> Result<Vec<String>, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("expected a JSON list of strings: {e}")))
}

fn parse_affine_tuple(g: &Group, arg: &str) -> Result<Vec<AffineReflection>, Failure> {
    let mut out = Vec::new();
    for s in parse_list(arg)? {
        let r: AffineReflection = s.parse()?;
        g.rs.check_root(r.root())?;
        out.push(r);
    }
    Ok(out)
}

fn parse_finite_tuple(g: &Group, arg: &str) -> Result<Vec<Root>, Failure> {
    parse_affine_tuple(g, arg)?
        .into_iter()
        .map(|r| {
            if r.level() == 0 {
                Ok(r.root().clone())
            } else {
                Err(Failure::Usage(format!("{r} has a nonzero level but {} is finite", g.rs.cartan_type())))
            }
        })
        .collect()
}

fn parse_affine_element(g: &Group, arg: &str) -> Result<AffineWeylElement, Failure> {
    let n = g.rs.rank();
    let mut w = AffineWeylElement::identity(n);
    for s in parse_list(arg)? {
        let x = match s.strip_prefix("tr:") {
            Some(v) => {
                let coords: Vec<i64> = v
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Failure::Usage(format!("bad translation {s:?}")))?;
                if coords.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, actual: coords.len() }.into());
                }
                AffineWeylElement::translation(CorootVector::new(coords))
            }
            None => AffineWeylElement::from_reflection(&g.rs, &s.parse()?)?,
        };
        w = w.mul(&x);
    }
    Ok(w)
}

fn parse_finite_element(g: &Group, arg: &str) -> Result<FiniteWeylElement, Failure> {
    Ok(FiniteWeylElement::product_of_reflections(&g.rs, &parse_finite_tuple(g, arg)?)?)
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_roots(g: &Group) -> Result<Report, Failure> {
    let rs = &g.rs;
    let mut rows = Vec::new();
    let mut text = String::new();
    for r in rs.roots() {
        let c = rs.coroot(r)?;
        let kind = if rs.is_simply_laced() { "" } else if rs.is_long(r) { " long" } else { " short" };
        rows.push(json!({"root": r, "coroot": c.coords(), "long": rs.is_long(r)}));
        let _ = writeln!(text, "{:>12}  coroot {c}{kind}", r.to_string());
    }
    let index = connection_index(rs);
    let _ = writeln!(text, "type {}, {} roots, |W0| = {}", rs.cartan_type(), rs.roots().len(), rs.weyl_group_order());
    let _ = writeln!(text, "highest root {}, connection index {index}", rs.highest_root());
    let mut result = json!({
        "type": rs.cartan_type().to_string(),
        "rank": rs.rank(),
        "roots": rows,
        "highest_root": rs.highest_root(),
        "connection_index": index.to_string(),
        "weyl_group_order": rs.weyl_group_order(),
        "ratio_delta": rs.ratio_delta(),
    });
    if g.affine {
        let simple = affine_simple_reflections(rs);
        let _ = writeln!(text, "affine simple reflections {}", join(&simple));
        result["affine_simple_reflections"] = json!(simple);
    }
    Ok(Report::ok(result, text))
}

fn cmd_check_qc(g: &Group, element: &str, as_tuple: bool, k: i64, limits: SearchLimits) -> Result<Report, Failure> {
    let rs = &g.rs;
    if !g.affine {
        let w = parse_finite_element(g, element)?;
        let verdict = is_quasi_coxeter_fin(rs, &w);
        let text = format!("quasi-Coxeter: {verdict} (absolute length {})\n", absolute_length(&w));
        return Ok(Report::ok(json!({"verdict": verdict, "absolute_length": absolute_length(&w)}), text));
    }
    if as_tuple {
        let t = parse_affine_tuple(g, element)?;
        let res = generates_affine(rs, &t, limits)?;
        let w = AffineReflections(rs).product(&t);
        let len = absolute_length_affine(rs, &w, None)?;
        let reduced = len == t.len();
        let verdict = res.generates && reduced;
        let mut text = format!("tuple generates: {}, reduced: {reduced}, quasi-Coxeter witness: {verdict}\n", res.generates);
        if let Some(gap) = res.certificate.level_gap {
            let _ = writeln!(text, "level gap {gap}");
        }
        let result = json!({
            "verdict": verdict,
            "generates": res.generates,
            "reduced": reduced,
            "certificate": res.certificate,
        });
        return Ok(Report::ok(result, text));
    }
    let w = parse_affine_element(g, element)?;
    let rep = is_quasi_coxeter_affine(rs, &w, k, limits)?;
    let mut text = format!("quasi-Coxeter: {}\n", rep.verdict);
    if let Some(t) = &rep.witness {
        let within = if rep.witness_within_bound { "" } else { " (levels outside [-K, K])" };
        let _ = writeln!(text, "witness {}{within}", join(t));
    }
    if let Some(note) = &rep.note {
        let _ = writeln!(text, "{note}");
    }
    Ok(Report::ok(serde_json::to_value(&rep).expect("serializable"), text))
}

fn cmd_factorize(g: &Group, element: &str, length: Option<usize>, k: i64) -> Result<Report, Failure> {
    let rs = &g.rs;
    if !g.affine {
        let w = parse_finite_element(g, element)?;
        if length.is_some_and(|m| m != absolute_length(&w)) {
            return Err(Failure::Usage("finite factorizations are listed at the absolute length only".into()));
        }
        let facs = reduced_factorizations(rs, &w);
        let text: String = facs.iter().map(|f| join(f) + "\n").collect();
        return Ok(Report::ok(json!({"count": facs.len(), "factorizations": facs}), text));
    }
    let w = parse_affine_element(g, element)?;
    let m = match length {
        Some(m) => m,
        None => absolute_length_affine(rs, &w, None)?,
    };
    let facs = enumerate_factorizations(rs, &FactorizationQuery { target: w, length: m, level_bound: k });
    let mut text: String = facs.iter().map(|f| join(f) + "\n").collect();
    let _ = writeln!(text, "{} factorizations of length {m} with levels in [-{k}, {k}]", facs.len());
    Ok(Report::ok(json!({"length": m, "count": facs.len(), "factorizations": facs}), text))
}

fn cmd_length(g: &Group, element: &str, ceiling: Option<usize>) -> Result<Report, Failure> {
    let len = if g.affine {
        absolute_length_affine(&g.rs, &parse_affine_element(g, element)?, ceiling)?
    } else {
        absolute_length(&parse_finite_element(g, element)?)
    };
    Ok(Report::ok(json!({"absolute_length": len}), format!("{len}\n")))
}

fn cmd_orbit(g: &Group, tuple: &str, list: bool, limits: SearchLimits) -> Result<Report, Failure> {
    let (size, exhausted, nodes): (usize, bool, Vec<String>) = if g.affine {
        let t = parse_affine_tuple(g, tuple)?;
        let o = orbit(&AffineReflections(&g.rs), &t, limits);
        (o.len(), o.exhausted, o.nodes.iter().map(|x| join(x)).collect())
    } else {
        let t = parse_finite_tuple(g, tuple)?;
        let o = orbit(&FiniteReflections(&g.rs), &t, limits);
        (o.len(), o.exhausted, o.nodes.iter().map(|x| join(x)).collect())
    };
    let mut text = format!("orbit size {size}{}\n", if exhausted { "" } else { " (search stopped at the limits)" });
    let mut result = json!({"size": size, "exhausted": exhausted});
    if list {
        for x in &nodes {
            let _ = writeln!(text, "{x}");
        }
        result["tuples"] = json!(nodes.iter().map(|x| x.split(' ').collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    let failure = (!exhausted).then(|| Failure::Limits("orbit not exhausted".into()));
    Ok(Report { result, text, failure })
}

fn cmd_connect(g: &Group, from: &str, to: &str, limits: SearchLimits) -> Result<Report, Failure> {
    if !g.affine {
        let fin = FiniteReflections(&g.rs);
        let (t1, t2) = (parse_finite_tuple(g, from)?, parse_finite_tuple(g, to)?);
        if fin.product(&t1) != fin.product(&t2) || t1.len() != t2.len() {
            return Err(Failure::Usage("tuples have different products or lengths".into()));
        }
        let out = connect_detailed(&fin, &t1, &t2, limits)?;
        let limits_hit = out.word.is_none() && !out.exhausted;
        let text = match &out.word {
            Some(w) => format!("{w}\n"),
            None => "no braid word found\n".to_string(),
        };
        let result = json!({"braid_word": out.word, "limits_hit": limits_hit, "nodes_explored": out.nodes_explored});
        let failure = connect_failure(out.word.is_some(), limits_hit);
        return Ok(Report { result, text, failure });
    }
    let aff = AffineReflections(&g.rs);
    let (t1, t2) = (parse_affine_tuple(g, from)?, parse_affine_tuple(g, to)?);
    let w = aff.product(&t1);
    if aff.product(&t2) != w {
        return Err(Failure::Usage("tuples have different products".into()));
    }
    let rep = connect_reduced(&g.rs, &w, &t1, &t2, limits)?;
    let mut text = match &rep.braid_word {
        Some(b) => format!("{b}\n"),
        None => "no braid word found\n".to_string(),
    };
    for s in &rep.stages {
        let _ = writeln!(text, "  {:<9} {:<5} {:>8}us  {}", s.stage, s.ok, s.micros, s.detail);
    }
    let result = json!({
        "braid_word": rep.braid_word,
        "method": rep.method,
        "stage_timings": rep.stages,
        "limits_hit": rep.limits_hit,
    });
    let failure = connect_failure(rep.braid_word.is_some(), rep.limits_hit);
    Ok(Report { result, text, failure })
}

fn connect_failure(found: bool, limits_hit: bool) -> Option<Failure> {
    match (found, limits_hit) {
        (true, _) => None,
        (false, true) => Some(Failure::Limits("search limits reached without a braid word".into())),
        (false, false) => Some(Failure::Verification("the tuples are not Hurwitz equivalent".into())),
    }
}

fn cmd_fiber(g: &Group, tuple: &str, k: i64) -> Result<Report, Failure> {
    if !g.affine {
        return Err(Failure::Usage("fibres are defined for affine groups; use affine:<type>".into()));
    }
    let members = fiber(&g.rs, &parse_affine_tuple(g, tuple)?, k)?;
    let mut text = String::new();
    for m in &members {
        let braid = m.braid.as_ref().map_or("-".to_string(), ToString::to_string);
        let _ = writeln!(text, "{:>3}  {}  {braid}", m.shift, join(&m.tuple));
    }
    Ok(Report::ok(json!({"members": members}), text))
}

fn cmd_verify(suite: &str, groups: &[String], opts: &SuiteOptions) -> Result<Report, Failure> {
    let types: Vec<CartanType> = groups
        .iter()
        .map(|s| parse_group(s).map(|g| g.rs.cartan_type()))
        .collect::<Result<_, _>>()?;
    let results = checks::run_suite(suite, &types, opts)?;
    let mut text = String::new();
    let mut warnings = Vec::new();
    if results.is_empty() {
        warnings.push("no groups given; nothing was checked".to_string());
        eprintln!("warning: no groups given; nothing was checked");
    }
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let group = r.group.as_deref().unwrap_or("-");
        let _ = write!(text, "[{status}] {group:<4} {} ({} cases, {}us)", r.name, r.cases, r.micros);
        if !r.detail.is_empty() {
            let _ = write!(text, ": {}", r.detail);
        }
        text.push('\n');
        if let Some(c) = &r.counterexample {
            let _ = writeln!(text, "       counterexample: {c}");
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(text, "{} checks, {failed} failed", results.len());
    let result = json!({"suite": suite, "passed": failed == 0, "checks": results, "warnings": warnings});
    let failure = (failed > 0).then(|| Failure::Verification(format!("{failed} checks failed")));
    Ok(Report { result, text, failure })
}

fn run(cli: &Cli, limits: SearchLimits) -> Result<Report, Failure> {
    let k = cli.level_bound;
    if k < 0 {
        return Err(Failure::Usage("the level bound must be non-negative".into()));
    }
    match &cli.command {
        Command::Roots { group } => cmd_roots(&parse_group(group)?),
        Command::CheckQc { group, element, tuple } => cmd_check_qc(&parse_group(group)?, element, *tuple, k, limits),
        Command::Factorize { group, element, length } => cmd_factorize(&parse_group(group)?, element, *length, k),
        Command::Length { group, element, ceiling } => cmd_length(&parse_group(group)?, element, *ceiling),
        Command::Orbit { group, tuple, list } => cmd_orbit(&parse_group(group)?, tuple, *list, limits),
        Command::Connect { group, from, to } => cmd_connect(&parse_group(group)?, from, to, limits),
        Command::Fiber { group, tuple } => cmd_fiber(&parse_group(group)?, tuple, k),
        Command::Verify { suite, groups } => {
            let opts = SuiteOptions { seed: cli.seed, level_bound: k, limits };
            cmd_verify(suite, groups, &opts)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Roots { .. } => "roots",
        Command::CheckQc { .. } => "check-qc",
        Command::Factorize { .. } => "factorize",
        Command::Length { .. } => "length",
        Command::Orbit { .. } => "orbit",
        Command::Connect { .. } => "connect",
        Command::Fiber { .. } => "fiber",
        Command::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = SearchLimits::new(cli.depth, cli.nodes);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("warning: {e}");
    }
    let outcome = run(&cli, limits);
    let (report, failure) = match outcome {
        Ok(mut r) => {
            let f = r.failure.take();
            (Some(r), f)
        }
        Err(f) => (None, Some(f)),
    };
    match cli.format {
        Format::Json => {
            let mut doc = json!({
                "tool": "affhur",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command_name(&cli.command),
                "limits": {
                    "level_bound": cli.level_bound,
                    "max_depth": limits.max_depth,
                    "max_nodes": limits.max_nodes,
                    "threads": cli.threads,
                    "seed": cli.seed,
                },
                "result": report.as_ref().map(|r| r.result.clone()),
            });
            if let Some(f) = &failure {
                doc["error"] = json!({"kind": f.kind(), "message": f.message()});
            }
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Text => {
            if let Some(r) = &report {
                print!("{}", r.text);
            }
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
