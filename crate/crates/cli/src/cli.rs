//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 usage or contract error, 2 when a check ran and
//! found a violation.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use arbor_core::cycles::{self, DEFAULT_EXPONENT_BOUND};
use arbor_core::decomposition::{
    classify_even, classify_odd, decompose_even_parent, decompose_odd,
};
use arbor_core::dynamics::DEFAULT_STEP_LIMIT;
use arbor_core::subtrees::{children_chain_check, even_subtree_from_member, odd_subtree};
use arbor_core::trajectories::{mc_chain, mc_closed_form, verify_descent};
use arbor_core::tree::{self, ExpansionPolicy};
use arbor_core::{iterate, trajectory, Error, MapVariant, Natural};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::verify::{batch_verify, VerifyOptions};

pub const BIGINT_ENV: &str = "ARBOR_BIGINT";

#[derive(Debug, Parser)]
#[command(name = "arbor", version, about = "Exact Collatz tree arithmetic and range verification")]
struct Cli {
    /// Emit one JSON value per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Use arbitrary-precision integers (also ARBOR_BIGINT=1).
    #[arg(long, global = true)]
    bigint: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the map `--times` times.
    Step {
        value: String,
        #[arg(long, default_value = "shortcut")]
        variant: MapVariant,
        #[arg(long, default_value_t = 1)]
        times: u64,
    },
    /// Iterate to 1 and report steps and peak.
    Trajectory {
        value: String,
        #[arg(long, default_value = "shortcut")]
        variant: MapVariant,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: u64,
    },
    /// Factor an integer into its tree coordinates.
    Decompose {
        value: String,
        #[arg(long = "as", value_enum, default_value_t = DecomposeMode::Auto)]
        mode: DecomposeMode,
    },
    /// Materialize an even or odd sub-tree.
    Subtree {
        #[command(subcommand)]
        kind: SubtreeKind,
    },
    /// Main-child chain above G from comma-separated row indices.
    Mc { base: String, indices: String },
    /// Odd grandchildren of G through its first productive children.
    Block {
        base: String,
        #[arg(long, default_value_t = 4)]
        count: u32,
    },
    /// Cycle searches.
    Cycles {
        #[command(subcommand)]
        kind: CyclesKind,
    },
    /// Build the reverse tree, audit it, and optionally render it.
    Tree(TreeArgs),
    /// Check that every start in [lo, hi] reaches 1.
    Verify {
        lo: u128,
        hi: u128,
        #[arg(long, default_value = "shortcut")]
        variant: MapVariant,
        #[arg(long)]
        shards: Option<usize>,
        /// Stop each orbit once it drops below its start ([1, lo) taken as verified).
        #[arg(long)]
        assume_below: bool,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecomposeMode {
    /// Odd values as (n, N, h), even values as parents (N, h).
    Auto,
    Odd,
    Parent,
    Classify,
}

#[derive(Debug, Subcommand)]
enum SubtreeKind {
    /// The even sub-tree containing a member (odd child or even parent).
    Even { member: String },
    /// The first `--count` even children of an odd parent.
    Odd {
        parent: String,
        #[arg(long, default_value_t = 8)]
        count: u32,
    },
}

#[derive(Debug, Subcommand)]
enum CyclesKind {
    /// Solve (2^(b+n) - 3^n) k = 2^b - 1 over a window of exponents.
    Diophantine {
        #[arg(long, default_value_t = DEFAULT_EXPONENT_BOUND)]
        bmax: u32,
        #[arg(long, default_value_t = DEFAULT_EXPONENT_BOUND)]
        nmax: u32,
    },
    /// Forward scan of every start up to `--limit`.
    Empirical {
        #[arg(long, default_value_t = 1_000_000)]
        limit: u128,
        #[arg(long, default_value_t = 100_000)]
        step_limit: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Summary,
    Dot,
    Json,
}

#[derive(Debug, clap::Args)]
struct TreeArgs {
    /// Largest value admitted; defaults to the forward peak over [1, --coverage] or 1000.
    #[arg(long)]
    value_bound: Option<u128>,
    #[arg(long, default_value_t = u32::MAX)]
    depth: u32,
    #[arg(long, default_value_t = 50_000_000)]
    nodes: usize,
    /// Audit that every integer in [1, M] is present.
    #[arg(long, value_name = "M")]
    coverage: Option<u128>,
    #[arg(long, value_enum, default_value_t = TreeFormat::Summary)]
    format: TreeFormat,
    /// Write the rendered graph here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Clean,
    Violation,
}

impl Verdict {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Verdict::Clean
        } else {
            Verdict::Violation
        }
    }
}

type Outcome = Result<Verdict, Failure>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

impl Ctx<'_> {
    fn emit(&mut self, human: impl Display, value: Value) -> io::Result<()> {
        if self.json {
            writeln!(self.out, "{value}")
        } else {
            writeln!(self.out, "{human}")
        }
    }
}

/// A decimal number as a JSON number of any width.
fn num(v: &impl Display) -> Value {
    Value::Number(v.to_string().parse().expect("decimal integers are JSON numbers"))
}

fn nums<'a, V: Display + 'a>(vs: impl IntoIterator<Item = &'a V>) -> Value {
    Value::Array(vs.into_iter().map(num).collect())
}

fn joined<'a, V: Display + 'a>(vs: impl IntoIterator<Item = &'a V>) -> String {
    vs.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse<V: Natural>(text: &str) -> Result<V, Failure> {
    if let Ok(v) = text.parse::<V>() {
        return Ok(v);
    }
    if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Failure::Core(Error::Overflow));
    }
    Err(Failure::Usage(format!("malformed integer `{text}`")))
}

fn parse_list(text: &str) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Failure::Usage(format!("malformed index list `{text}`")))
        })
        .collect()
}

/// Run the tool with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if help { write!(out, "{e}") } else { write!(err, "{e}") };
            return if help { 0 } else { 1 };
        }
    };
    let bigint = cli.bigint
        || std::env::var(BIGINT_ENV).is_ok_and(|v| matches!(v.as_str(), "1" | "true" | "yes"));
    let mut ctx = Ctx { out, err, json: cli.json };
    let result = if bigint {
        dispatch::<BigUint>(&cli.command, &mut ctx)
    } else {
        dispatch::<u128>(&cli.command, &mut ctx)
    };
    match result {
        Ok(Verdict::Clean) => 0,
        Ok(Verdict::Violation) => 2,
        Err(e) => {
            let _ = writeln!(ctx.err, "arbor: {e}");
            1
        }
    }
}

fn dispatch<V: Natural>(command: &Command, ctx: &mut Ctx) -> Outcome {
    match command {
        Command::Step { value, variant, times } => {
            let d: V = parse(value)?;
            let r = iterate(&d, *times, *variant)?;
            ctx.emit(&r, json!({"value": num(&d), "variant": variant, "times": times, "result": num(&r)}))?;
            Ok(Verdict::Clean)
        }
        Command::Trajectory { value, variant, step_limit } => {
            let d: V = parse(value)?;
            let t = trajectory(&d, *variant, *step_limit)?;
            let human = format!(
                "{}\nsteps={} peak={} terminated={}",
                joined(&t.values),
                t.steps,
                t.peak,
                t.terminated
            );
            ctx.emit(
                human,
                json!({
                    "start": num(&t.start),
                    "variant": variant,
                    "values": nums(&t.values),
                    "terminated": t.terminated,
                    "steps": t.steps,
                    "peak": num(&t.peak),
                }),
            )?;
            Ok(Verdict::from_ok(t.terminated))
        }
        Command::Decompose { value, mode } => decompose::<V>(value, *mode, ctx),
        Command::Subtree { kind } => subtree::<V>(kind, ctx),
        Command::Mc { base, indices } => {
            let g: V = parse(base)?;
            let m = parse_list(indices)?;
            let chain = mc_chain(&g, &m)?;
            let closed = mc_closed_form(&g, &chain.exponents)?;
            let descends = verify_descent(&chain);
            let ok = descends && &closed == chain.top();
            ctx.emit(
                chain.top(),
                json!({
                    "G": num(&g),
                    "m": m,
                    "b": chain.exponents,
                    "values": nums(&chain.values),
                    "closed_form": num(&closed),
                    "descends": descends,
                    "flower": chain.ends_in_flower(),
                }),
            )?;
            Ok(Verdict::from_ok(ok))
        }
        Command::Block { base, count } => {
            let g: V = parse(base)?;
            for (j, i, v) in tree::grandchild_block(&g, *count)? {
                ctx.emit(format!("{j} {i} {v}"), json!({"j": j, "i": i, "value": num(&v)}))?;
            }
            Ok(Verdict::Clean)
        }
        Command::Cycles { kind: CyclesKind::Diophantine { bmax, nmax } } => diophantine::<V>(*bmax, *nmax, ctx),
        Command::Cycles { kind: CyclesKind::Empirical { limit, step_limit } } => empirical(*limit, *step_limit, ctx),
        Command::Tree(args) => build(args, ctx),
        Command::Verify { lo, hi, variant, shards, assume_below, step_limit } => {
            let shards = shards
                .or_else(|| std::thread::available_parallelism().ok().map(usize::from))
                .unwrap_or(1);
            let opts = VerifyOptions {
                variant: *variant,
                shards,
                assume_below: *assume_below,
                step_limit: *step_limit,
            };
            let report = batch_verify(*lo, *hi, &opts)?;
            let human = format!(
                "[{}, {}] {}: all_converged={} max_steps={} (at {}) max_peak={} (at {}) failures={} elapsed={:.3}s",
                report.lo,
                report.hi,
                report.variant,
                report.all_converged,
                report.max_steps.measure.steps,
                report.max_steps.value,
                report.max_peak.measure.peak,
                report.max_peak.value,
                report.failures.len(),
                report.elapsed.as_secs_f64()
            );
            ctx.emit(human, serde_json::to_value(&report).expect("report serializes"))?;
            Ok(Verdict::from_ok(report.all_converged))
        }
    }
}

fn decompose<V: Natural>(text: &str, mode: DecomposeMode, ctx: &mut Ctx) -> Outcome {
    let x: V = parse(text)?;
    let mode = match mode {
        DecomposeMode::Auto if x.is_odd() => DecomposeMode::Odd,
        DecomposeMode::Auto => DecomposeMode::Parent,
        other => other,
    };
    match mode {
        DecomposeMode::Odd => {
            let d = decompose_odd(&x)?;
            let human = format!(
                "{x} = 2^{} * 3^{} * {} - 1 (n={}, N={}, h={})",
                d.ascent,
                d.width - d.ascent,
                d.cofactor,
                d.ascent,
                d.width,
                d.cofactor
            );
            ctx.emit(human, json!({"n": d.ascent, "N": d.width, "h": num(&d.cofactor)}))?;
        }
        DecomposeMode::Parent => match decompose_even_parent(&x)? {
            Some(p) => {
                let human = format!("{x} = 3^{} * {} - 1 (N={}, h={})", p.width, p.cofactor, p.width, p.cofactor);
                ctx.emit(human, json!({"N": p.width, "h": num(&p.cofactor)}))?;
            }
            None => ctx.emit(format!("{x}: not-parent"), json!({"parent_capable": false}))?,
        },
        DecomposeMode::Classify if x.is_odd() => {
            let c = classify_odd(&x)?;
            ctx.emit(
                format!("{x}: {} with a={}", c.class, c.a),
                json!({"class": c.class.to_string(), "a": num(&c.a)}),
            )?;
        }
        DecomposeMode::Classify => {
            let f = classify_even(&x)?;
            let human = format!(
                "{x}: {} with a={}, b={}, {}",
                f.class(),
                f.odd.a,
                f.exponent,
                if f.parent_capable { "parent-capable" } else { "not parent-capable" }
            );
            let value = json!({
                "class": f.class().to_string(),
                "a": num(&f.odd.a),
                "b": f.exponent,
                "parent_capable": f.parent_capable,
            });
            ctx.emit(human, value)?;
        }
        DecomposeMode::Auto => unreachable!("resolved above"),
    }
    Ok(Verdict::Clean)
}

fn subtree<V: Natural>(kind: &SubtreeKind, ctx: &mut Ctx) -> Outcome {
    match kind {
        SubtreeKind::Even { member } => {
            let x: V = parse(member)?;
            let st = even_subtree_from_member(&x)?;
            let chained = children_chain_check(&st);
            let human = format!(
                "parent {} (N={}, h={}): children {}",
                st.parent,
                st.params.width,
                st.params.cofactor,
                joined(&st.children)
            );
            let value = json!({
                "parent": num(&st.parent),
                "N": st.params.width,
                "h": num(&st.params.cofactor),
                "children": nums(&st.children),
                "main_child": num(st.main_child()),
                "chain_ok": chained,
            });
            ctx.emit(human, value)?;
            Ok(Verdict::from_ok(chained))
        }
        SubtreeKind::Odd { parent, count } => {
            let p: V = parse(parent)?;
            let st = odd_subtree(&p, *count)?;
            let marked: Vec<String> = st
                .children
                .iter()
                .zip(&st.productive)
                .map(|(c, &f)| if f { format!("{c}*") } else { c.to_string() })
                .collect();
            let human = format!(
                "parent {} ({} with a={}): children {} (* = productive)",
                st.parent,
                st.class.class,
                st.class.a,
                marked.join(" ")
            );
            let value = json!({
                "parent": num(&st.parent),
                "class": st.class.class.to_string(),
                "a": num(&st.class.a),
                "children": nums(&st.children),
                "productive": st.productive,
            });
            ctx.emit(human, value)?;
            Ok(Verdict::Clean)
        }
    }
}

fn diophantine<V: Natural>(bmax: u32, nmax: u32, ctx: &mut Ctx) -> Outcome {
    let report = cycles::search_trivial_cycles::<V>(bmax, nmax)?;
    for s in &report.solutions {
        let human = format!("b={} n={} k={} D={} T={}", s.b, s.n, s.k, s.child, s.parent);
        let value = json!({
            "b": s.b,
            "n": s.n,
            "k": num(&s.k),
            "D": num(&s.child),
            "T": num(&s.parent),
            "N": s.decomposition.width,
            "h": num(&s.decomposition.cofactor),
        });
        ctx.emit(human, value)?;
    }
    let human = format!(
        "searched b<={} n<={}: {} positive denominators, {} exact quotients, {} solutions, {} rejected",
        bmax,
        nmax,
        report.positive_denominators,
        report.exact_quotients,
        report.solutions.len(),
        report.rejected.len()
    );
    let value = json!({
        "b_max": bmax,
        "n_max": nmax,
        "positive_denominators": report.positive_denominators,
        "exact_quotients": report.exact_quotients,
        "solutions": report.solutions.len(),
        "rejected": report.rejected.len(),
    });
    ctx.emit(human, value)?;
    let only_root = report.solutions.len() == 1 && report.solutions[0].child.is_unit();
    Ok(Verdict::from_ok(only_root && report.rejected.is_empty()))
}

fn empirical(limit: u128, step_limit: u64, ctx: &mut Ctx) -> Outcome {
    let scan = cycles::search_cycles_empirical(limit, step_limit)?;
    for (start, cycle) in &scan.cycles {
        ctx.emit(
            format!("cycle from {start}: {}", joined(cycle)),
            json!({"start": num(start), "cycle": nums(cycle)}),
        )?;
    }
    let human = format!(
        "scanned [1, {}]: {} cycles avoiding 1, {} starts exhausted the step limit",
        limit,
        scan.cycles.len(),
        scan.exhausted.len()
    );
    ctx.emit(
        human,
        json!({"limit": num(&limit), "cycles": scan.cycles.len(), "exhausted": nums(&scan.exhausted)}),
    )?;
    Ok(Verdict::from_ok(scan.cycles.is_empty() && scan.exhausted.is_empty()))
}

fn build(args: &TreeArgs, ctx: &mut Ctx) -> Outcome {
    let value_bound = match (args.value_bound, args.coverage) {
        (Some(b), _) => b,
        (None, Some(m)) => tree::forward_peak(m)?,
        (None, None) => 1000,
    };
    let policy = ExpansionPolicy {
        value_bound,
        depth_bound: args.depth,
        node_bound: args.nodes,
    };
    let graph = tree::build_tree(policy)?;
    let duplicates = tree::audit_uniqueness(&graph);
    let unsound = tree::audit_edges(&graph);
    let coverage = args.coverage.map(|m| tree::audit_coverage(&graph, m)).transpose()?;

    let rendered_to_stdout = args.format != TreeFormat::Summary && args.output.is_none();
    if args.format != TreeFormat::Summary {
        let mut sink: Box<dyn Write> = match &args.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(&mut *ctx.out),
        };
        match args.format {
            TreeFormat::Dot => sink.write_all(tree::render_dot(&graph).as_bytes())?,
            TreeFormat::Json => {
                tree::write_json(&graph, &mut sink)?;
                sink.write_all(b"\n")?;
            }
            TreeFormat::Summary => unreachable!(),
        }
        sink.flush()?;
    }

    let mut ok = duplicates.is_empty() && unsound.is_empty();
    let mut human = format!(
        "nodes={} edges={} value_bound={} truncated={} duplicates={} unsound_edges={}",
        graph.len(),
        graph.edges().count(),
        value_bound,
        graph.truncated(),
        duplicates.len(),
        unsound.len()
    );
    let mut value = json!({
        "nodes": graph.len(),
        "edges": graph.edges().count(),
        "value_bound": num(&value_bound),
        "truncated": graph.truncated(),
        "duplicates": nums(&duplicates),
        "unsound_edges": unsound.len(),
    });
    if let Some(c) = &coverage {
        ok &= c.missing.is_empty();
        human.push_str(&format!(" coverage[1,{}] missing={}", c.upto, c.missing.len()));
        if !c.precondition_met() {
            human.push_str(&format!(
                " (precondition violated: value bound must reach {})",
                c.required_value_bound
            ));
        }
        value["coverage"] = json!({
            "upto": num(&c.upto),
            "missing": nums(&c.missing),
            "required_value_bound": num(&c.required_value_bound),
            "precondition_met": c.precondition_met(),
        });
    }
    if rendered_to_stdout {
        let line = if ctx.json { value.to_string() } else { human };
        writeln!(ctx.err, "{line}")?;
    } else {
        ctx.emit(human, value)?;
    }
    Ok(Verdict::from_ok(ok))
}
