//! `knotconc`: s-invariants, Khovanov tables and `t_ν` searches from the
//! command line.

mod cache;
mod engine;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use knotconc::concordance::{
    check_linear_guess, t_tau, tau_s_gap, tau_value, BoundsLedger, Interval, KnotExpression,
    KnotRegistry, Searcher, TbHints, TnuResult,
};
use knotconc::{Error, FieldSpec, PlanarDiagram, Result, ScanOptions};

use cache::Cache;
use engine::{exit_code, Engine};
use report::Report;

#[derive(Parser)]
#[command(
    name = "knotconc",
    version,
    about = "Concordance invariants from Khovanov-type homology"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand. Each flag can also be set through
/// the `KNOTCONC_*` environment variable shown in `--help`.
#[derive(Args, Debug)]
struct RunConfig {
    /// Invariant ν used by `tnu` and `verify`.
    #[arg(
        long,
        global = true,
        env = "KNOTCONC_INV",
        value_enum,
        default_value = "s"
    )]
    inv: Inv,
    /// Coefficients: `Q` or `Fp:<prime>`.
    #[arg(long, global = true, env = "KNOTCONC_FIELD", default_value = "Q")]
    field: FieldSpec,
    /// Abort a homology computation above this many matrix entries.
    #[arg(long, global = true, env = "KNOTCONC_BUDGET_ENTRIES", value_parser = clap::value_parser!(u64).range(1..))]
    budget_entries: Option<u64>,
    /// Abort a single homology computation after this many seconds.
    #[arg(long, global = true, env = "KNOTCONC_BUDGET_SECS", value_parser = clap::value_parser!(u64).range(1..))]
    budget_secs: Option<u64>,
    /// Directory of cached results; no caching when absent.
    #[arg(long, global = true, env = "KNOTCONC_CACHE")]
    cache: Option<PathBuf>,
    /// Number of doubles evaluated at once during searches.
    #[arg(long, global = true, env = "KNOTCONC_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Log progress of every scan step.
    #[arg(long, global = true, env = "KNOTCONC_VERBOSE")]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Inv {
    S,
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Rasmussen's s and ν_s = -s/2.
    S { input: String },
    /// Khovanov homology dimensions as `i j dim` lines.
    Kh { input: String },
    /// t_ν: the largest t with ν(D_+(K,t)) = 1.
    Tnu {
        input: String,
        /// Expected lower bound, used only as a sanity check.
        #[arg(long, allow_negative_numbers = true)]
        tb_lower: Option<i64>,
        /// Expected upper bound, used only as a sanity check.
        #[arg(long, allow_negative_numbers = true)]
        tb_upper: Option<i64>,
    },
    /// ν of twisted doubles D_+(K,t), or D_-(K,t) with --negative, over a range of t.
    Profile {
        input: String,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
        #[arg(long)]
        negative: bool,
    },
    /// Checks a relation and writes a report; exits 1 if a check fails.
    Verify {
        #[arg(value_enum)]
        item: Item,
        inputs: Vec<String>,
        /// Number of T(2,5) summands for `tau-s-gap`.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// With `tau-s-gap`, check every count from 1 to n.
        #[arg(long)]
        all: bool,
        /// Window width for `step-shape`.
        #[arg(long, default_value_t = 5)]
        window: usize,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Inspect or empty the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Item {
    /// t(K1) + t(K2) <= t(K1#K2) <= min(t(K1) - t(-K2), t(K2) - t(-K1)).
    #[value(alias = "thm12")]
    SumSandwich,
    /// |t_tau - t_s| > n on n copies of T(2,5).
    #[value(alias = "cor13")]
    TauSGap,
    /// Residual t_s - (3 ν_s - 1); reported, never asserted.
    #[value(alias = "remark14")]
    LinearGuess,
    /// ν(D_+(K,t)) is 1 up to t_ν and 0 after; mirror relation for D_-.
    #[value(alias = "step21")]
    StepShape,
}

#[derive(Subcommand)]
enum CacheAction {
    /// One line per entry: digest, invariant, field, values, PD code.
    List,
    /// Remove every entry.
    Clear,
}

struct Ctx {
    config: RunConfig,
    registry: KnotRegistry,
    engine: Engine,
}

impl Ctx {
    fn new(config: RunConfig) -> Result<Self> {
        let cache = match &config.cache {
            Some(dir) => Some(Cache::open(dir).map_err(|e| {
                Error::InvalidArgument(format!("cache directory {}: {e}", dir.display()))
            })?),
            None => None,
        };
        let mut opts = ScanOptions {
            trace: config.verbose,
            ..ScanOptions::default()
        };
        if let Some(n) = config.budget_entries {
            opts.max_entries = n as usize;
        }
        opts.time_limit = config.budget_secs.map(Duration::from_secs);
        let engine = Engine {
            field: config.field,
            opts,
            cache,
        };
        Ok(Ctx {
            config,
            registry: KnotRegistry::default(),
            engine,
        })
    }

    fn expr(&self, input: &str) -> Result<KnotExpression> {
        input.parse()
    }

    fn diagram(&self, e: &KnotExpression) -> Result<PlanarDiagram> {
        e.diagram(&self.registry)
    }

    fn searcher(&self) -> Result<Searcher<'_>> {
        Searcher::new(&self.registry, &self.engine, self.config.jobs as usize)
    }

    fn require_s(&self, what: &str) -> Result<()> {
        match self.config.inv {
            Inv::S => Ok(()),
            Inv::Tau => Err(Error::UnknownTau(format!(
                "{what}: tau is not computable from a diagram"
            ))),
        }
    }
}

fn cmd_s(ctx: &Ctx, input: &str) -> Result<Report> {
    let e = ctx.expr(input)?;
    let d = ctx.diagram(&e)?;
    let r = ctx.engine.s(&d)?;
    let mut rep = Report::new("s");
    rep.line(format!("knot = {}", e.canonical(&ctx.registry)?));
    rep.line(format!("crossings = {}", d.crossing_count()));
    rep.line(format!("field = {}", r.field));
    rep.line(format!("s = {}", r.s));
    rep.line(format!("nu_s = {}", r.nu()));
    rep.line(format!("generator filtrations = {} {}", r.s_min, r.s_max));
    rep.value("s", r.s);
    rep.value("nu", r.nu());
    Ok(rep)
}

fn cmd_kh(ctx: &Ctx, input: &str) -> Result<Report> {
    let e = ctx.expr(input)?;
    let t = ctx.engine.kh(&ctx.diagram(&e)?)?;
    let mut rep = Report::new("kh");
    rep.line(format!("knot = {}", e.canonical(&ctx.registry)?));
    rep.line(format!("field = {}", ctx.engine.field));
    rep.line("i j dim");
    for ((i, j), dim) in t.iter() {
        rep.line(format!("{i} {j} {dim}"));
    }
    rep.line(format!(
        "euler characteristic = {}",
        t.euler_characteristic()
    ));
    rep.value("total", t.total_dim());
    Ok(rep)
}

fn tnu_lines(rep: &mut Report, r: &TnuResult) {
    rep.line(r.to_string());
    for ev in &r.log {
        rep.line(format!("  nu(D+(K,{})) = {}", ev.t, ev.nu));
    }
}

fn cmd_tnu(ctx: &Ctx, input: &str, hints: TbHints) -> Result<Report> {
    let e = ctx.expr(input)?;
    let mut rep = Report::new("tnu");
    match ctx.config.inv {
        Inv::Tau => {
            let tau = tau_value(&e, &ctx.registry)?;
            let t = t_tau(&e, &ctx.registry)?;
            rep.line(format!("tau({}) = {tau}", e.canonical(&ctx.registry)?));
            rep.line(format!("t_tau = 2*tau - 1 = {t}"));
            rep.value("inv", "tau");
            rep.value("t", t);
        }
        Inv::S => {
            let r = ctx.searcher()?.t_nu(&e, &hints)?;
            tnu_lines(&mut rep, &r);
            rep.value("inv", "s");
            rep.value("t", r.value);
        }
    }
    Ok(rep)
}

fn cmd_profile(ctx: &Ctx, input: &str, from: i64, to: i64, negative: bool) -> Result<Report> {
    ctx.require_s("profile")?;
    let e = ctx.expr(input)?;
    let s = ctx.searcher()?;
    let prof = if negative {
        s.negative_double_profile(&e, from, to)?
    } else {
        s.step_profile(&e, from, to)?
    };
    let mut rep = Report::new("profile");
    rep.line(format!("knot = {}", e.canonical(&ctx.registry)?));
    rep.line(format!("t nu(D{}(K,t))", if negative { "-" } else { "+" }));
    for (t, v) in &prof {
        rep.line(format!("{t} {v}"));
    }
    rep.value(
        "values",
        prof.iter()
            .map(|p| p.1.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    Ok(rep)
}

fn inputs<const N: usize>(inputs: &[String], item: &str) -> Result<[String; N]> {
    <[String; N]>::try_from(inputs.to_vec()).map_err(|_| {
        Error::InvalidArgument(format!(
            "{item} takes {N} knot argument(s), got {}",
            inputs.len()
        ))
    })
}

fn verify_sandwich(ctx: &Ctx, args: &[String]) -> Result<Report> {
    let [a, b] = inputs::<2>(args, "sum-sandwich")?;
    let (k1, k2) = (ctx.expr(&a)?, ctx.expr(&b)?);
    let mut rep = Report::new("sum-sandwich");
    let (t1, t2, m1, m2, t12) = match ctx.config.inv {
        Inv::S => {
            let r = ctx.searcher()?.verify_sum_sandwich(&k1, &k2)?;
            for t in [&r.k1, &r.k2, &r.mirror_k1, &r.mirror_k2, &r.sum] {
                tnu_lines(&mut rep, t);
            }
            (
                r.k1.value,
                r.k2.value,
                r.mirror_k1.value,
                r.mirror_k2.value,
                r.sum.value,
            )
        }
        Inv::Tau => {
            let t = |e: KnotExpression| t_tau(&e, &ctx.registry);
            let v = (
                t(k1.clone())?,
                t(k2.clone())?,
                t(k1.clone().mirror())?,
                t(k2.clone().mirror())?,
                t(k1.clone().sum(k2.clone()))?,
            );
            rep.line(format!("t_tau values by the closed form: {v:?}"));
            v
        }
    };
    let lower = t1 + t2;
    let upper = (t1 - m2).min(t2 - m1);
    rep.check(
        lower <= t12,
        format!("t(K1) + t(K2) = {lower} <= t(K1#K2) = {t12}"),
    );
    rep.check(t12 <= upper, format!("t(K1#K2) = {t12} <= {upper}"));
    rep.value("lower", lower);
    rep.value("t_sum", t12);
    rep.value("upper", upper);
    Ok(rep)
}

fn verify_gap(ctx: &Ctx, n: usize, all: bool) -> Result<Report> {
    if n == 0 {
        return Err(Error::InvalidArgument("--n must be at least 1".into()));
    }
    let t25 = KnotExpression::torus(2, 5);
    let r = ctx.searcher()?.t_nu(&t25, &TbHints::default())?;
    let mut ledger = BoundsLedger::new();
    let provenance = format!(
        "search certificate nu(D+(K,{})) = 1, nu(D+(K,{})) = 0",
        r.value,
        r.value + 1
    );
    ledger.insert(
        "s",
        &t25.canonical(&ctx.registry)?,
        Interval::exact(r.value),
        &provenance,
    )?;
    let mut rep = Report::new("tau-s-gap");
    rep.line(format!("ledger: t_s(T(2,5)) = {} ({provenance})", r.value));
    let counts: Vec<usize> = if all { (1..=n).collect() } else { vec![n] };
    let mut min_margin = i64::MAX;
    for &k in &counts {
        let g = tau_s_gap(k, &ledger)?;
        rep.line(format!(
            "n = {k}: t_tau = {}, t_s >= {}, gap >= {}",
            g.t_tau, g.t_s_lower, g.gap_lower
        ));
        if !g.holds() {
            rep.check(false, format!("gap {} > {k}", g.gap_lower));
        }
        min_margin = min_margin.min(g.gap_lower - k as i64);
    }
    let last = tau_s_gap(n, &ledger)?;
    rep.check(
        min_margin >= 1,
        format!("|t_tau - t_s| > n for n in {:?}..={n}", counts[0]),
    );
    rep.value("n", n);
    rep.value("gap", last.gap_lower);
    Ok(rep)
}

fn verify_linear_guess(ctx: &Ctx, args: &[String]) -> Result<Report> {
    let [a] = inputs::<1>(args, "linear-guess")?;
    let e = ctx.expr(&a)?;
    let nu = ctx.engine.s(&ctx.diagram(&e)?)?.nu() as i64;
    let r = ctx.searcher()?.t_nu(&e, &TbHints::default())?;
    let g = check_linear_guess(nu, r.value);
    let mut rep = Report::new("linear-guess");
    tnu_lines(&mut rep, &r);
    rep.line(format!("nu_s = {nu}"));
    rep.line(format!("3 nu_s - 1 = {}", 3 * nu - 1));
    rep.line(format!("residual t_s - (3 nu_s - 1) = {}", g.residual));
    rep.value("nu", nu);
    rep.value("t", r.value);
    rep.value("residual", g.residual);
    Ok(rep)
}

fn verify_step(ctx: &Ctx, args: &[String], window: usize) -> Result<Report> {
    ctx.require_s("step-shape")?;
    if window < 2 {
        return Err(Error::InvalidArgument("--window must be at least 2".into()));
    }
    let [a] = inputs::<1>(args, "step-shape")?;
    let e = ctx.expr(&a)?;
    let s = ctx.searcher()?;
    let r = s.t_nu(&e, &TbHints::default())?;
    let lo = r.value - (window as i64 - 1) / 2;
    let hi = lo + window as i64 - 1;
    let prof = s.step_profile(&e, lo, hi)?;
    let mut rep = Report::new("step-shape");
    tnu_lines(&mut rep, &r);
    rep.line(format!(
        "nu(D+(K,t)) for t = {lo}..{hi}: {:?}",
        prof.iter().map(|p| p.1).collect::<Vec<_>>()
    ));
    let expected: Vec<(i64, i64)> = (lo..=hi).map(|t| (t, i64::from(t <= r.value))).collect();
    rep.check(prof == expected, "profile is 1 up to t_nu and 0 after");
    // m(D_+(K,t)) = D_-(mK,-t), and ν is odd under mirroring.
    let neg = s.negative_double_profile(&e.clone().mirror(), -hi, -lo)?;
    rep.line(format!(
        "nu(D-(mK,t)) for t = {}..{}: {:?}",
        -hi,
        -lo,
        neg.iter().map(|p| p.1).collect::<Vec<_>>()
    ));
    let mirrored: Vec<(i64, i64)> = prof.iter().rev().map(|&(t, v)| (-t, -v)).collect();
    rep.check(neg == mirrored, "nu(D-(mK,-t)) = -nu(D+(K,t))");
    rep.value("t", r.value);
    rep.value(
        "values",
        prof.iter()
            .map(|p| p.1.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    Ok(rep)
}

fn cmd_cache(ctx: &Ctx, action: &CacheAction) -> Result<Report> {
    let cache = ctx.engine.cache.as_ref().ok_or_else(|| {
        Error::InvalidArgument("no cache directory given (--cache or KNOTCONC_CACHE)".into())
    })?;
    let io =
        |e: std::io::Error| Error::InvalidArgument(format!("cache {}: {e}", cache.dir().display()));
    let mut rep = Report::new("cache");
    match action {
        CacheAction::List => {
            let entries = cache.entries().map_err(io)?;
            for e in &entries {
                let values: Vec<String> =
                    e.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
                rep.line(format!(
                    "{} {} {} {} {}",
                    e.key.digest(),
                    e.key.invariant,
                    e.key.field,
                    values.join(" "),
                    e.key.pd
                ));
            }
            rep.value("entries", entries.len());
        }
        CacheAction::Clear => {
            let n = cache.clear().map_err(io)?;
            rep.value("removed", n);
        }
    }
    Ok(rep)
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>)> {
    let ctx = Ctx::new(cli.config)?;
    let mut out = None;
    let rep = match &cli.command {
        Command::S { input } => cmd_s(&ctx, input)?,
        Command::Kh { input } => cmd_kh(&ctx, input)?,
        Command::Tnu {
            input,
            tb_lower,
            tb_upper,
        } => cmd_tnu(&ctx, input, TbHints::new(*tb_lower, *tb_upper)?)?,
        Command::Profile {
            input,
            from,
            to,
            negative,
        } => cmd_profile(&ctx, input, *from, *to, *negative)?,
        Command::Verify {
            item,
            inputs,
            n,
            all,
            window,
            report,
        } => {
            out = report.clone();
            match item {
                Item::SumSandwich => verify_sandwich(&ctx, inputs)?,
                Item::TauSGap => verify_gap(&ctx, *n, *all)?,
                Item::LinearGuess => verify_linear_guess(&ctx, inputs)?,
                Item::StepShape => verify_step(&ctx, inputs, *window)?,
            }
        }
        Command::Cache { action } => cmd_cache(&ctx, action)?,
    };
    Ok((rep, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.config.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let start = Instant::now();
    let code = match run(cli) {
        Ok((rep, path)) => {
            print!("{rep}");
            if let Some(p) = path {
                if let Err(e) = std::fs::write(&p, rep.to_string()) {
                    eprintln!("error: cannot write report {}: {e}", p.display());
                    return ExitCode::from(1);
                }
            }
            if rep.ok() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
