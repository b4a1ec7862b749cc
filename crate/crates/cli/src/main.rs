use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use coxsys::asymptotics::{bound_chain, landau_table};
use coxsys::congruence::{ball_avoidance_certificate, ball_enumerate, ball_enumerate_cached, word_ball_sizes, Ball, DEFAULT_BALL_CAP};
use coxsys::coxeter::{check_partition, reduce, reduce_loop, replay, CoxeterMatrix, CyclicWord, Partition, Word, DEFAULT_ORBIT_CAP};
use coxsys::hypgeom::{build_hexagon, length_experiments};
use coxsys::numberfield::{ContextSummary, FieldContext};
use coxsys::quotient::{quotient_order, QuotientDatum, DEFAULT_CLOSURE_CAP};
use coxsys::surface::{build_surface, export_surface, systole_report, SurfaceBuild, DEFAULT_TILE_CAP};
use coxsys::tits::{TitsRep, RANK};

#[derive(Parser, Debug)]
#[command(name = "coxsys", version, about = "Coxeter groups W(k), congruence quotients and tessellated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Omit the timestamp so identical runs give identical output.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Reduce a word to its canonical reduced form.
    Reduce(WordArgs),
    /// Homotopy moves taking a short loop to the empty word.
    LoopReduce(WordArgs),
    /// Check a red/blue partition of the generators.
    Partition(PartitionArgs),
    /// Minimal polynomial of 2cos(π/k).
    Minpoly(KArgs),
    /// Gram matrix and its determinant by three methods.
    Gram(KArgs),
    /// Defining relations of ρ as exact matrix identities.
    Relations(KArgs),
    /// Order of ρ(w).
    Order(OrderArgs),
    /// Norm bounds on F-words and on ρ(w) − 1 over a ball.
    Norms(NormArgs),
    /// Enumerate a ball of the Cayley graph.
    Ball(BallArgs),
    /// Ball-avoidance certificate for reduction mod 3^m.
    Avoid(AvoidArgs),
    /// Order of a finite quotient.
    QuotientOrder(QuotientArgs),
    /// Build the tessellated surface of a finite quotient.
    Surface(SurfaceArgs),
    /// The right-angled regular hexagon and its reflections.
    Hexagon(HexagonArgs),
    /// Monte-Carlo arc-length checks.
    Arcs(ArcArgs),
    /// Primorial, Landau and bound-chain tables.
    Bounds(BoundArgs),
}

fn k_range(s: &str) -> Result<u32, String> {
    let k: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if k < 3 {
        return Err("k must be at least 3".into());
    }
    Ok(k)
}

#[derive(Args, Debug, Serialize)]
struct KArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
}

#[derive(Args, Debug, Serialize)]
struct WordArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    /// 1-based letters, e.g. "1,3,1,3".
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
    search_cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct PartitionArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    /// Red generators; the rest are blue.
    #[arg(long, default_value = "1,3,5")]
    red: String,
}

#[derive(Args, Debug, Serialize)]
struct OrderArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 1000)]
    cap: u64,
}

#[derive(Args, Debug, Serialize)]
struct NormArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    /// Radius of the ball on which ∥ρ(w) − 1∥ < 3^l(w) is checked.
    #[arg(long, default_value_t = 4)]
    radius: usize,
}

#[derive(Args, Debug, Serialize)]
struct BallArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    #[arg(long)]
    radius: usize,
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    cap: usize,
    /// Also count canonical reduced words as an independent check.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug, Serialize)]
struct AvoidArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    /// Modulus exponent; defaults to 4k.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    radius: usize,
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct QuotientArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    #[arg(long, conflicts_with = "datum", required_unless_present = "datum")]
    prime: Option<u64>,
    #[arg(long)]
    datum: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct SurfaceArgs {
    #[arg(long, value_parser = k_range)]
    k: u32,
    #[arg(long, conflicts_with = "datum", required_unless_present = "datum")]
    prime: Option<u64>,
    #[arg(long)]
    datum: Option<PathBuf>,
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
    tile_cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct HexagonArgs {
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args, Debug, Serialize)]
struct ArcArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, value_parser = k_range, default_value_t = 4)]
    k: u32,
}

#[derive(Args, Debug, Serialize)]
struct BoundArgs {
    #[arg(long, default_value_t = 10)]
    primorials: usize,
    #[arg(long, default_value_t = 9.5)]
    delta_plus: f64,
    #[arg(long, num_args = 1..)]
    genus: Vec<f64>,
}

/// How a run ended short of success.
enum Failure {
    /// Bad invocation: exit 1.
    Usage(String),
    /// A mathematical check failed: exit 2.
    Check(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: impl std::fmt::Display) -> Failure {
    Failure::Check(e.to_string())
}

fn word_flag(s: &str) -> Result<Word, Failure> {
    let w = s.parse::<Word>().map_err(|e| usage(format!("--word: {e}")))?;
    if let Some(&g) = w.letters().iter().find(|&&g| g >= RANK) {
        return Err(usage(format!("--word: letter {} outside 1..={RANK}", g + 1)));
    }
    Ok(w)
}

fn rep(k: u32) -> Result<TitsRep, Failure> {
    TitsRep::new(k).map_err(|e| usage(format!("--k: {e}")))
}

/// The JSON report and whether every check in it passed.
type Outcome = Result<(Value, bool), Failure>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn load_ball(rep: &TitsRep, radius: usize, cap: usize) -> Result<Ball, Failure> {
    match std::env::var_os("COXSYS_CACHE_DIR") {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            std::fs::create_dir_all(&dir).map_err(|e| usage(format!("COXSYS_CACHE_DIR: {e}")))?;
            let path = dir.join(format!("ball_k{}_r{}.jsonl", rep.k(), radius));
            ball_enumerate_cached(rep, radius, cap, &path).map_err(check)
        }
        None => ball_enumerate(rep, radius, cap).map_err(check),
    }
}

fn load_datum(k: u32, prime: Option<u64>, datum: &Option<PathBuf>) -> Result<QuotientDatum, Failure> {
    match (prime, datum) {
        (Some(p), _) => QuotientDatum::from_tits(k, p).map_err(|e| usage(format!("--prime: {e}"))),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("--datum: {e}")))?;
            let d: QuotientDatum = serde_json::from_str(&text).map_err(|e| usage(format!("--datum: {e}")))?;
            if d.k != k {
                return Err(usage(format!("--datum: file has k = {}, --k is {k}", d.k)));
            }
            Ok(d)
        }
        (None, None) => Err(usage("one of --prime or --datum is required")),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Reduce(a) => {
            let m = CoxeterMatrix::w_k(a.k as u64);
            let w = word_flag(&a.word)?;
            let r = reduce(&w, &m, a.search_cap).map_err(usage)?;
            Ok((
                json!({"input": w, "reduced": r.word, "length": r.word.len(), "canonical": r.canonical, "trace": r.trace}),
                true,
            ))
        }
        Command::LoopReduce(a) => {
            let rep = rep(a.k)?;
            let m = rep.coxeter_matrix();
            let w = CyclicWord::from(word_flag(&a.word)?);
            let p = Partition::w_k_standard();
            let moves = reduce_loop(&w, &m, &p, &rep).map_err(check)?;
            let states = replay(&w, &moves, &m).map_err(check)?;
            let ok = states.last().is_some_and(|s| s.is_empty()) && 2 * moves.len() == w.len();
            Ok((json!({"loop": w.to_string(), "moves": moves, "replayed": ok}), ok))
        }
        Command::Partition(a) => {
            let m = CoxeterMatrix::w_k(a.k as u64);
            let red = word_flag(&a.red).map_err(|_| usage("--red: expected 1-based letters"))?.0;
            let blue = (0..6).filter(|g| !red.contains(g)).collect();
            let p = Partition::new(red, blue, 6).map_err(|e| usage(format!("--red: {e}")))?;
            Ok((to_value(&check_partition(&m, &p).map_err(usage)?), true))
        }
        Command::Minpoly(a) => {
            let ctx = FieldContext::new(a.k).map_err(usage)?;
            Ok((to_value(&ContextSummary::from(&ctx)), true))
        }
        Command::Gram(a) => {
            let rep = rep(a.k)?;
            let (elim, eigen, closed) = (rep.gram_det(), rep.gram_det_eigen(), rep.gram_det_closed_form());
            let ok = elim == eigen && eigen == closed;
            Ok((
                json!({
                    "gram": rep.gram(),
                    "detElimination": elim.to_string(),
                    "detEigen": eigen.to_string(),
                    "detClosedForm": closed.to_string(),
                    "agree": ok,
                }),
                ok,
            ))
        }
        Command::Relations(a) => {
            let rep = rep(a.k)?;
            let r = rep.verify_relations().map_err(check)?;
            let ok = r.braid_orders.iter().all(|&l| l == a.k as u64);
            Ok((to_value(&r), ok))
        }
        Command::Order(a) => {
            let rep = rep(a.k)?;
            let w = word_flag(&a.word)?;
            let n = rep.element_order(&w, a.cap).map_err(check)?;
            Ok((json!({"word": w, "order": n}), true))
        }
        Command::Norms(a) => {
            let rep = rep(a.k)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let f = rep.check_f_words(a.samples, a.max_len, &mut rng);
            let ball = load_ball(&rep, a.radius, DEFAULT_BALL_CAP)?;
            let growth = rep.check_norm_growth(ball.elements.iter().map(|e| (&e.element.coords, e.depth)));
            let ok = f.failures == 0 && growth.failures == 0;
            Ok((json!({"fWords": f, "ballNorms": growth}), ok))
        }
        Command::Ball(a) => {
            let rep = rep(a.k)?;
            let ball = load_ball(&rep, a.radius, a.cap)?;
            let closed = ball.check_closure(&rep);
            let oracle = a.oracle.then(|| word_ball_sizes(&rep.coxeter_matrix(), a.radius));
            let ok = closed && oracle.as_ref().map_or(true, |o| *o == ball.sizes());
            Ok((
                json!({"k": a.k, "radius": a.radius, "sizes": ball.sizes(), "closed": closed, "oracleSizes": oracle}),
                ok,
            ))
        }
        Command::Avoid(a) => {
            let rep = rep(a.k)?;
            let m = a.m.unwrap_or(4 * a.k);
            let ball = load_ball(&rep, a.radius, a.cap)?;
            let cert = ball_avoidance_certificate(&rep, m, &ball).map_err(check)?;
            Ok((to_value(&cert), cert.pass))
        }
        Command::QuotientOrder(a) => {
            let d = load_datum(a.k, a.prime, &a.datum)?;
            let r = quotient_order(&d, cli.seed, a.closure_cap).map_err(check)?;
            Ok((to_value(&r), true))
        }
        Command::Surface(a) => {
            let d = load_datum(a.k, a.prime, &a.datum)?;
            let build = build_surface(&d, a.tile_cap, cli.seed).map_err(check)?;
            match &build {
                SurfaceBuild::CountsOnly(c) => {
                    if a.export.is_some() {
                        return Err(check("COUNTS_ONLY: surface exceeds --tile-cap, nothing to export"));
                    }
                    Ok((json!({"mode": "counts-only", "counts": c}), true))
                }
                SurfaceBuild::Explicit(s) => {
                    let inv = s.check_invariants().map_err(check)?;
                    if let Some(path) = &a.export {
                        export_surface(&build, path).map_err(check)?;
                    }
                    let sys = systole_report(s, None);
                    Ok((
                        json!({
                            "mode": "explicit",
                            "k": s.k, "f0": s.f0, "f1": s.f1, "f2": s.f2, "genus": s.genus,
                            "curves": s.curves.len(),
                            "invariants": inv,
                            "systoles": sys,
                            "exported": a.export,
                        }),
                        inv.all(),
                    ))
                }
            }
        }
        Command::Hexagon(a) => {
            let h = build_hexagon().map_err(check)?;
            let r = h.check(a.tolerance);
            let ok = r.pass;
            Ok((json!({"hexagon": h, "report": r}), ok))
        }
        Command::Arcs(a) => {
            if a.trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let h = build_hexagon().map_err(check)?;
            let r = length_experiments(&h, a.trials, a.k, cli.seed);
            let ok = r.pass;
            Ok((to_value(&r), ok))
        }
        Command::Bounds(a) => {
            if a.primorials == 0 {
                return Err(usage("--primorials must be at least 1"));
            }
            let chain = bound_chain(a.primorials, a.delta_plus, &a.genus).map_err(|e| usage(format!("--delta-plus/--genus: {e}")))?;
            let landau = landau_table(a.primorials);
            let ok = chain.summaries.iter().all(|s| s.monotone);
            Ok((json!({"chain": chain, "landau": landau}), ok))
        }
    }
}

fn tsv(v: &Value) -> String {
    // the table-shaped part of a report: an array of objects somewhere near the top
    fn table(rows: &[Value]) -> Option<String> {
        let first = rows.first()?.as_object()?;
        let cols: Vec<&String> = first.keys().collect();
        let mut out = cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for r in rows {
            let cells: Vec<String> = cols
                .iter()
                .map(|c| match &r[c.as_str()] {
                    Value::String(s) => s.clone(),
                    // comparisons collapse to their verdict
                    Value::Object(o) if o.contains_key("holds") => {
                        if o["indeterminate"] == Value::Bool(true) {
                            "INDETERMINATE".into()
                        } else {
                            o["holds"].to_string()
                        }
                    }
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        Some(out)
    }
    if let Some(rows) = v.pointer("/chain/rows").and_then(Value::as_array) {
        if let Some(t) = table(rows) {
            return t;
        }
    }
    match v {
        Value::Array(rows) => table(rows).unwrap_or_default(),
        Value::Object(map) => map.iter().map(|(k, x)| format!("{k}\t{x}\n")).collect(),
        other => format!("{other}\n"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: --threads: cannot start {n} worker threads");
            return ExitCode::from(1);
        }
    }
    let config = json!({
        "command": to_value(&cli.command),
        "seed": cli.seed,
        "deterministic": cli.deterministic,
        "threads": cli.threads.unwrap_or_else(rayon::current_num_threads),
        "format": cli.format,
    });
    match run(&cli) {
        Ok((result, ok)) => {
            let mut report = json!({"config": config, "verified": ok, "result": result});
            if !cli.deterministic {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
                report["timestamp"] = json!(secs);
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
                Format::Tsv => print!("{}", tsv(&report["result"])),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            println!("{}", serde_json::to_string_pretty(&json!({"config": config, "verified": false, "error": msg})).expect("json"));
            ExitCode::from(2)
        }
    }
}
