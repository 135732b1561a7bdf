//! `khwidth`: reduced Khovanov homology, widths and twist-knot branch sets
//! from the command line.

mod config;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use khwidth::cones::{cone_page, e1_dominates, e1_page, twist_region_e1, ConePage};
use khwidth::diagrams::closure;
use khwidth::khovanov::{kh_reduced_with, kauffman_bracket_oracle, EngineConfig, KhTable, Method};
use khwidth::perturbed::{bn_homology_rank_capped, lee_lower_bound_check};
use khwidth::twistlab::{
    finite_filling_report, tau, tau_rational_with, verify_figure, width_profile, FigureId,
};
use khwidth::{BraidWord, PlanarDiagram};

const EXIT_COMPUTE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "khwidth", version, about = "Reduced Khovanov homology over F2 in the (δ, q) grading")]
struct Cli {
    /// Emit JSON (sorted keys, stable across runs).
    #[arg(long, global = true)]
    json: bool,

    /// Render tables with δ horizontal and q vertical.
    #[arg(long, global = true)]
    ascii: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest diagram the engine accepts (default 28, or the environment
    /// variable KHWIDTH_MAX_CROSSINGS).
    #[arg(long, global = true)]
    max_crossings: Option<usize>,

    /// Homology algorithm.
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,

    /// key = value file presetting the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Cube,
    Scan,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Cube => Method::Cube,
            MethodArg::Scan => Method::Scan,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct LinkInput {
    /// Braid word such as "3: 1 -2 1".
    #[arg(long, conflicts_with = "pd")]
    braid: Option<String>,

    /// Planar diagram JSON file.
    #[arg(long)]
    pd: Option<PathBuf>,
}

impl LinkInput {
    fn braid_word(&self) -> anyhow::Result<BraidWord> {
        let text = self.braid.as_deref().ok_or_else(|| usage("this command needs --braid"))?;
        text.parse().map_err(|e: khwidth::Error| usage(e.to_string()))
    }

    fn diagram(&self) -> anyhow::Result<PlanarDiagram> {
        match (&self.braid, &self.pd) {
            (Some(_), _) => Ok(closure(&self.braid_word()?)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| usage(format!("bad diagram JSON: {e}")))
            }
            (None, None) => Err(usage("give a link with --braid or --pd")),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced Khovanov homology table.
    Kh(LinkInput),
    /// Number of δ-gradings supporting homology.
    Width(LinkInput),
    /// Jones polynomial read off the table.
    Jones {
        #[command(flatten)]
        link: LinkInput,
        /// Also evaluate the Kauffman bracket state sum and compare.
        #[arg(long)]
        check: bool,
    },
    /// Determinant, from the δ-graded Euler characteristic.
    Det(LinkInput),
    /// Branch sets of surgeries on the twist knot K_t.
    Twistknot(TwistArgs),
    /// Two-summand skein cone at one positive crossing.
    Cone {
        #[command(flatten)]
        link: LinkInput,
        #[arg(long)]
        crossing: usize,
    },
    /// E1 page of an iterated cone on a positive braid.
    E1 {
        #[arg(long)]
        braid: String,
        /// Letter indices to resolve, in order (comma separated).
        #[arg(long, value_delimiter = ',', conflicts_with = "region")]
        crossings: Vec<usize>,
        /// Twist region `start,len`: letters start..start+len, all the same
        /// generator.
        #[arg(long)]
        region: Option<String>,
    },
    /// Perturbed homology ranks and the diagonal lower bound.
    Turner(LinkInput),
    /// Recompute figures and report differences.
    Verify {
        /// Figure id: 5, 6, 7:t, 8:t, 9 or claims:t.
        #[arg(long, required_unless_present = "all")]
        figure: Option<String>,
        /// Every figure plus the determinant, width and verdict checks.
        #[arg(long)]
        all: bool,
        /// Include t = 3 instances in --all.
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Args, Debug)]
struct TwistArgs {
    #[arg(long)]
    t: u32,
    /// Integer surgery coefficient.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "slope")]
    framing: Option<i64>,
    /// Rational surgery coefficient p/q.
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<String>,
    /// Framing sweep bounds for `profile`.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<i64>,
    #[arg(value_enum, default_value = "kh")]
    what: TwistWhat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TwistWhat {
    Kh,
    Width,
    Jones,
    Det,
    Braid,
    Profile,
    Report,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Output settings after flags, config file and environment are merged.
pub struct Settings {
    pub json: bool,
    pub ascii: bool,
    pub engine: EngineConfig,
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage_like = e.downcast_ref::<UsageError>().is_some()
                || e.downcast_ref::<khwidth::Error>().is_some_and(is_input_error);
            if usage_like {
                eprintln!("\nFor more information, try '--help'.");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

/// Errors caused by malformed input rather than by the computation.
fn is_input_error(e: &khwidth::Error) -> bool {
    use khwidth::Error::*;
    matches!(
        e,
        Usage(_)
            | BraidSyntax(_)
            | IndexOutOfRange { .. }
            | NoStrands
            | InvalidDiagram(_)
            | NoSuchCrossing(_)
            | DuplicateCrossing(_)
            | ZeroDenominator
            | NotCoprime { .. }
    )
}

fn settings(cli: &Cli) -> anyhow::Result<Settings> {
    let file = match &cli.config {
        Some(path) => config::load(path)?,
        None => config::FileConfig::default(),
    };
    let mut engine = EngineConfig::from_env();
    if let Some(cap) = cli.max_crossings.or(file.max_crossings) {
        engine.max_crossings = cap;
    }
    if let Some(m) = cli.method.map(Method::from).or(file.method) {
        engine.method = m;
    }
    if let Some(n) = cli.threads.or(file.threads) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    Ok(Settings {
        json: cli.json || file.json.unwrap_or(false),
        ascii: cli.ascii || file.ascii.unwrap_or(false),
        engine,
    })
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn emit_json(v: &Value) -> anyhow::Result<()> {
    emit(&serde_json::to_string_pretty(v)?)
}

fn table_text(t: &KhTable, s: &Settings) -> String {
    if s.ascii {
        return t.ascii();
    }
    let mut out = format!("components {}\n", t.component_count());
    for (g, r) in t.entries() {
        out.push_str(&format!("δ={} q={} rank {}\n", verify::half(g.delta2), verify::half(g.q2), r));
    }
    out
}

fn show_table(t: &KhTable, s: &Settings) -> anyhow::Result<()> {
    if s.json {
        emit_json(&t.to_json_value())
    } else {
        emit(&table_text(t, s))
    }
}

fn show_scalar(key: &str, v: Value, s: &Settings) -> anyhow::Result<()> {
    if s.json {
        emit_json(&json!({ key: v }))
    } else {
        emit(&v.as_str().map_or_else(|| v.to_string(), str::to_owned))
    }
}

fn jones_json(t: &KhTable) -> Value {
    let j = t.jones();
    let terms: Vec<[i64; 2]> = j.terms().map(|(e, c)| [e, c]).collect();
    json!({ "jones": j.to_string(), "terms2": terms })
}

fn show_page(p: &ConePage, exact: Option<&KhTable>, s: &Settings) -> anyhow::Result<()> {
    let report = exact.map(|e| e1_dominates(p, e));
    if s.json {
        let mut v = p.to_json_value();
        if let Some(r) = &report {
            v["dominates"] = serde_json::to_value(r)?;
            v["dominates"]["passed"] = json!(r.passed());
        }
        return emit_json(&v);
    }
    let mut out = format!("constants {:?}\n", p.constants);
    for sm in &p.summands {
        out.push_str(&format!(
            "{}  shift [{}, {}]  rank {}\n",
            sm.label,
            verify::half(sm.shift2.0),
            verify::half(sm.shift2.1),
            sm.table.total_rank()
        ));
    }
    if s.ascii {
        let comps = exact.map_or(1, KhTable::component_count);
        out.push_str(&p.total(comps).ascii());
    }
    if let Some(r) = report {
        out.push_str(&format!(
            "dominates: {} (rank violations {}, Euler mismatches {}, defect {})\n",
            if r.passed() { "yes" } else { "no" },
            r.rank_violations.len(),
            r.euler_mismatches.len(),
            r.defect
        ));
    }
    emit(&out)
}

fn parse_slope(s: &str) -> anyhow::Result<(i64, i64)> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p = p.trim().parse().map_err(|_| usage(format!("bad slope {s:?}")))?;
    let q = q.trim().parse().map_err(|_| usage(format!("bad slope {s:?}")))?;
    Ok((p, q))
}

fn twistknot(a: &TwistArgs, s: &Settings) -> anyhow::Result<()> {
    let cfg = &s.engine;
    match a.what {
        TwistWhat::Profile => {
            let lo = a.from.unwrap_or(khwidth::twistlab::ell(a.t));
            let hi = a.to.unwrap_or(lo + 4);
            let p = width_profile(a.t, lo, hi, cfg)?;
            if s.json {
                return emit_json(&serde_json::to_value(&p)?);
            }
            let mut out = String::new();
            for (n, w) in &p.entries {
                out.push_str(&format!("n={n} width {w}\n"));
            }
            out.push_str(&format!("w_K {}  jump framing {:?}\n", p.w_k, p.jump_framing));
            return emit(&out);
        }
        TwistWhat::Report => {
            let r = finite_filling_report(a.t, cfg)?;
            if s.json {
                return emit_json(&serde_json::to_value(&r)?);
            }
            let mut out = format!("t={}  w_K={}  verdict: {}\n", r.t, r.w_k, r.verdict);
            for c in &r.caveats {
                out.push_str(&format!("  note: {c}\n"));
            }
            return emit(&out);
        }
        _ => {}
    }
    let diagram = match (&a.slope, a.framing) {
        (Some(slope), _) => {
            let (p, q) = parse_slope(slope)?;
            if matches!(a.what, TwistWhat::Braid) {
                return Err(usage("rational closures are not braid closures; use --framing"));
            }
            tau_rational_with(a.t, p, q, cfg)?.diagram
        }
        (None, Some(n)) => {
            if matches!(a.what, TwistWhat::Braid) {
                let b = khwidth::twistlab::beta(a.t, n);
                return show_scalar("braid", json!(b.to_string()), s);
            }
            tau(a.t, n)
        }
        (None, None) => return Err(usage("give --framing N or --slope p/q")),
    };
    let table = kh_reduced_with(&diagram, cfg)?;
    match a.what {
        TwistWhat::Kh => show_table(&table, s),
        TwistWhat::Width => show_scalar("width", json!(table.width()?), s),
        TwistWhat::Det => show_scalar("determinant", json!(table.determinant()?), s),
        TwistWhat::Jones => {
            if s.json {
                emit_json(&jones_json(&table))
            } else {
                emit(&table.jones().to_string())
            }
        }
        TwistWhat::Braid | TwistWhat::Profile | TwistWhat::Report => unreachable!(),
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let s = settings(&cli)?;
    let cfg = &s.engine;
    match &cli.command {
        Command::Kh(link) => show_table(&kh_reduced_with(&link.diagram()?, cfg)?, &s)?,
        Command::Width(link) => show_scalar("width", json!(kh_reduced_with(&link.diagram()?, cfg)?.width()?), &s)?,
        Command::Det(link) => {
            show_scalar("determinant", json!(kh_reduced_with(&link.diagram()?, cfg)?.determinant()?), &s)?
        }
        Command::Jones { link, check } => {
            let d = link.diagram()?;
            let table = kh_reduced_with(&d, cfg)?;
            let mut v = jones_json(&table);
            if *check {
                let oracle = kauffman_bracket_oracle(&d)?;
                let agrees = oracle == table.jones();
                v["oracle"] = json!(oracle.to_string());
                v["agrees"] = json!(agrees);
                if !agrees {
                    if s.json {
                        emit_json(&v)?;
                    } else {
                        emit(&format!("{}\noracle {} disagrees", table.jones(), oracle))?;
                    }
                    return Ok(Outcome::VerificationFailed);
                }
            }
            if s.json {
                emit_json(&v)?
            } else {
                emit(&table.jones().to_string())?
            }
        }
        Command::Twistknot(a) => twistknot(a, &s)?,
        Command::Cone { link, crossing } => {
            let d = link.diagram()?;
            let page = cone_page(&d, *crossing, cfg)?;
            let exact = kh_reduced_with(&d, cfg)?;
            show_page(&page, Some(&exact), &s)?
        }
        Command::E1 { braid, crossings, region } => {
            let b: BraidWord = braid.parse().map_err(|e: khwidth::Error| usage(e.to_string()))?;
            let page = match region {
                Some(r) => {
                    let (start, len) = r
                        .split_once(',')
                        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                        .ok_or_else(|| usage(format!("bad --region {r:?}, expected start,len")))?;
                    if len == 0 || start + len > b.len() {
                        return Err(usage("twist region outside the word"));
                    }
                    let gen = b.letters()[start].index;
                    if b.letters()[start..start + len].iter().any(|l| l.index != gen) {
                        return Err(usage("twist region letters must share one generator"));
                    }
                    let b1 = BraidWord::new(b.strands(), b.letters()[..start].to_vec())?;
                    let b2 = BraidWord::new(b.strands(), b.letters()[start + len..].to_vec())?;
                    twist_region_e1(&b1, gen, len, &b2, cfg)?
                }
                None if crossings.is_empty() => return Err(usage("give --crossings or --region")),
                None => e1_page(&b, crossings, cfg)?,
            };
            let exact = kh_reduced_with(&closure(&b), cfg)?;
            show_page(&page, Some(&exact), &s)?
        }
        Command::Turner(link) => {
            let d = link.diagram()?;
            let (total, ranks) = bn_homology_rank_capped(&d, cfg.max_crossings.min(khwidth::khovanov::CUBE_CAP))?;
            let table = kh_reduced_with(&d, cfg)?;
            let bound = lee_lower_bound_check(&table, &ranks);
            if s.json {
                let mut v = ranks.to_json_value();
                v["lower_bound"] = serde_json::to_value(&bound)?;
                emit_json(&v)?;
            } else {
                let mut out = format!("total {total}\n");
                for (n, r) in &ranks.0 {
                    out.push_str(&format!("δ+q={n} rank {r}\n"));
                }
                out.push_str(&format!("lower bound holds: {} (defect {})\n", bound.passed(), bound.defect));
                emit(&out)?;
            }
            if !bound.passed() {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Verify { figure, all, extended } => {
            let passed = if *all {
                verify::run_all(*extended, &s)?
            } else {
                let id: FigureId = figure.as_deref().unwrap_or_default().parse()?;
                let r = verify_figure(id, cfg)?;
                if s.json {
                    emit_json(&r.to_json_value())?;
                } else {
                    emit(&r.diff_text())?;
                }
                r.passed()
            };
            if !passed {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}
