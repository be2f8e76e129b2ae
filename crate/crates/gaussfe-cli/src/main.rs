mod output;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussfe::autocorr::{self, Autocorr};
use gaussfe::extensions::{self, DivisorTable};
use gaussfe::numbers::{parse_exact, DEFAULT_PREC};
use gaussfe::series::{EvalResult, SeriesParams};
use gaussfe::verify::{self, SuiteConfig};
use gaussfe::{afe, cf, chowla, wilton, BigFloat, Error, ExactReal};

use output::{emit, from_csv, Format, Table};

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "gaussfe", version, about = "Gauss-map series, their functional equations and checks")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Working precision in bits (default 128, or GAUSSFE_PRECISION).
    #[arg(long, short = 'p', global = true, env = "GAUSSFE_PRECISION")]
    precision: Option<u32>,
    /// Absolute tolerance for series and quadrature.
    #[arg(long, global = true, default_value_t = 1e-20)]
    tol: f64,
    /// Tolerance for the autocorrelation quadrature behind F, G and ε₁.
    #[arg(long, global = true, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Maximal number of Gauss-map levels.
    #[arg(long, global = true, default_value_t = 2000)]
    k_max: usize,
    /// Output format; defaults to plain for single values, csv for traces.
    #[arg(long, short = 'f', global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps and suites.
    #[arg(long, short = 'j', global = true, default_value_t = 1)]
    jobs: usize,
}

impl RunConfig {
    fn prec(&self) -> u32 {
        self.precision.unwrap_or(DEFAULT_PREC).max(24)
    }

    fn digits(&self) -> usize {
        (self.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    /// Digits worth printing for a value known to within `err`.
    fn digits_for(&self, err: f64) -> usize {
        if err <= 0.0 || !err.is_finite() {
            return self.digits();
        }
        ((-err.log10()).ceil() as usize + 2).clamp(3, self.digits())
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// Series tolerance for sums whose terms carry quadrature error.
    fn g_tol(&self) -> f64 {
        self.tol.max(self.quad_tol)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued-fraction expansion: k, a_k, p_k, q_k, alpha_k, beta_k.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, short = 'k', default_value_t = 20)]
        k: usize,
    },
    /// Wilton function W(x).
    Wilton(PointArgs),
    /// Brjuno function B(x).
    Brjuno(PointArgs),
    /// Series with g(x) = ½log²x + (γ − log 2π)log x.
    Phi2(PointArgs),
    /// Autocorrelation integral A(λ).
    Autocorr {
        #[arg(long, num_args = 1.., required = true)]
        lambda: Vec<String>,
    },
    /// F(x) = (x+1)/2·A(1) − A(x) − (x/2)log x.
    #[command(name = "F")]
    F(PointArgs),
    /// Bounded correction G = S_F.
    #[command(name = "G")]
    G(PointArgs),
    /// One-sided limits and jump of G at a rational.
    Jumps {
        #[arg(long, num_args = 1.., required = true)]
        r: Vec<String>,
    },
    /// Partial sum Σ_{m≤v} B₁(mx)/m.
    Chowla(CutoffArgs),
    /// Gap between the partial sum and −W/2 + G over a v schedule.
    ChowlaIdentity {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, num_args = 1.., required = true, value_delimiter = ',')]
        v_list: Vec<String>,
    },
    /// Both sides of the reciprocity identity for the partial sums.
    Sylvester(CutoffArgs),
    /// The remainder ε₁(x, v) and ε₁·xv.
    Eps1(CutoffArgs),
    /// k steps of the approximate-functional-equation iteration.
    Afe {
        #[arg(long, value_enum, default_value_t = Instance::Chowla)]
        instance: Instance,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        v: String,
        #[arg(long, short = 'k')]
        k: Option<usize>,
    },
    /// Σ_{n≤v} τ(n)/n sin 2πnx, sampled along the way.
    Psi1(DivisorArgs),
    /// Σ_{n≤v} τ(n)/n cos 2πnx, sampled along the way.
    Psi2(DivisorArgs),
    /// Σ_{n≤v} sin(2πn²x)cot(πnx)/n², sampled along the way.
    Rr(DivisorArgs),
    /// Run named verification suites.
    Verify {
        #[arg(long, num_args = 1.., conflicts_with = "all")]
        suite: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, num_args = 1.., required = true)]
    x: Vec<String>,
}

#[derive(Args)]
struct CutoffArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long)]
    v: String,
}

#[derive(Args)]
struct DivisorArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long)]
    v: u64,
    /// Number of geometrically spaced cutoffs in the trace.
    #[arg(long, default_value_t = 1)]
    points: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Instance {
    Wilton,
    Brjuno,
    Chowla,
    Psi1,
}

enum Failure {
    Lib(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.run.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            })
        }
    }
}

fn parse(s: &str, rc: &RunConfig) -> Result<ExactReal, Error> {
    parse_exact(s, rc.prec())
}

fn parse_all(xs: &[String], rc: &RunConfig) -> Result<Vec<ExactReal>, Error> {
    xs.iter().map(|s| parse(s, rc)).collect()
}

fn dec(t: &BigFloat, digits: usize) -> String {
    t.to_decimal(Some(digits))
}

fn with_radius(t: &BigFloat, err: f64, rc: &RunConfig) -> String {
    let d = dec(t, rc.digits_for(err));
    if err > 0.0 {
        format!("{d} ± {err:.0e}")
    } else {
        d
    }
}

fn series_table(xs: &[String], vals: Vec<EvalResult<BigFloat>>, rc: &RunConfig) -> Table {
    let mut t = Table::new(&["x", "value", "abs_error_estimate", "status", "terms", "rigorous"]).primary(1);
    for (x, r) in xs.iter().zip(vals) {
        let d = rc.digits_for(r.abs_error_estimate);
        t.push(vec![
            x.clone(),
            r.format(d),
            format!("{:.3e}", r.abs_error_estimate),
            r.status.to_string(),
            r.terms_used.to_string(),
            r.rigorous.to_string(),
        ]);
    }
    t
}

fn ctx(rc: &RunConfig) -> Arc<Autocorr<BigFloat>> {
    Autocorr::new(rc.prec(), rc.quad_tol())
}

fn dispatch(cli: &Cli) -> Out {
    let rc = &cli.run;
    let prec = rc.prec();
    let plain = rc.format(Format::Plain);
    let csv = rc.format(Format::Csv);
    match &cli.cmd {
        Cmd::Cf { x, k } => {
            let st = cf::expand(&parse(x, rc)?, *k)?;
            Ok(from_csv(&cf::expansion_csv(&st, prec)?, csv))
        }
        Cmd::Wilton(p) => {
            let vals =
                parse_all(&p.x, rc)?.iter().map(|x| wilton::wilton(x, rc.k_max, rc.tol, prec)).collect::<Result<_, _>>()?;
            Ok(series_table(&p.x, vals, rc).render(plain))
        }
        Cmd::Brjuno(p) => {
            let vals =
                parse_all(&p.x, rc)?.iter().map(|x| wilton::brjuno(x, rc.k_max, rc.tol, prec)).collect::<Result<_, _>>()?;
            Ok(series_table(&p.x, vals, rc).render(plain))
        }
        Cmd::Phi2(p) => {
            let vals: Vec<_> = parse_all(&p.x, rc)?
                .iter()
                .map(|x| wilton::phi2::<BigFloat>(x, rc.k_max, rc.tol, prec))
                .collect::<Result<_, _>>()?;
            for (x, v) in p.x.iter().zip(&vals) {
                if v.rational_input {
                    eprintln!("note: {x} is rational, the sum is finite");
                }
            }
            Ok(series_table(&p.x, vals.into_iter().map(|v| v.result).collect(), rc).render(plain))
        }
        Cmd::Autocorr { lambda } => {
            let mut t = Table::new(&["lambda", "value", "tail_estimate", "t_used", "pieces"]).primary(1);
            for (s, l) in lambda.iter().zip(parse_all(lambda, rc)?) {
                let r = autocorr::autocorr_a::<BigFloat>(&l, rc.quad_tol(), prec)?;
                t.push(vec![
                    s.clone(),
                    with_radius(&r.value, r.tail_estimate, rc),
                    format!("{:.3e}", r.tail_estimate),
                    format!("{}", r.t_used),
                    r.pieces.to_string(),
                ]);
            }
            Ok(t.render(plain))
        }
        Cmd::F(p) => {
            let c = ctx(rc);
            let mut t = Table::new(&["x", "value", "abs_error_estimate"]).primary(1);
            for (s, x) in p.x.iter().zip(parse_all(&p.x, rc)?) {
                let (v, e) = c.f(&x)?;
                t.push(vec![s.clone(), with_radius(&v, e, rc), format!("{e:.3e}")]);
            }
            Ok(t.render(plain))
        }
        Cmd::G(p) => {
            let c = ctx(rc);
            let tol = rc.g_tol();
            let vals = parse_all(&p.x, rc)?.iter().map(|x| c.g(x, rc.k_max, tol)).collect::<Result<_, _>>()?;
            Ok(series_table(&p.x, vals, rc).render(plain))
        }
        Cmd::Jumps { r } => {
            let c = ctx(rc);
            let (a1, _) = c.a1()?;
            let mut t = Table::new(&["r", "depth", "left", "right", "value", "jump", "a1_over_q", "c_side"]);
            for s in r {
                let q = match parse(s, rc)? {
                    ExactReal::Rational(q) => q,
                    _ => return Err(Error::Domain(format!("{s} is not rational")).into()),
                };
                let j = c.jumps(&q)?;
                let d = rc.digits_for(rc.quad_tol());
                let aq = a1.clone() / BigFloat::from_integer(&j.q, prec);
                t.push(vec![
                    s.clone(),
                    j.depth.to_string(),
                    dec(&j.left.re, d),
                    dec(&j.right.re, d),
                    dec(&j.value.re, d),
                    dec(&j.jump.re, d),
                    dec(&aq, d),
                    format!("{:?}", j.c_side).to_lowercase(),
                ]);
            }
            Ok(t.render(csv))
        }
        Cmd::Chowla(a) => {
            let s = chowla::phi1_partial::<BigFloat>(&parse(&a.x, rc)?, &parse(&a.v, rc)?, prec)?;
            let mut t = Table::new(&["x", "v", "value", "carry_bound", "terms", "flagged", "rounding_bound"]).primary(2);
            t.push(vec![
                a.x.clone(),
                a.v.clone(),
                with_radius(&s.sum, s.rounding_bound, rc),
                dec(&s.carry, 6),
                s.terms.to_string(),
                s.flagged.to_string(),
                format!("{:.3e}", s.rounding_bound),
            ]);
            Ok(t.render(plain))
        }
        Cmd::ChowlaIdentity { x, v_list } => {
            let c = ctx(rc);
            let tol = rc.g_tol();
            let vs = parse_all(v_list, rc)?;
            let body = chowla::identity_csv(&c, &parse(x, rc)?, &vs, rc.k_max, rc.digits_for(tol))?;
            Ok(from_csv(&body, csv))
        }
        Cmd::Sylvester(a) => {
            let s = chowla::sylvester_sides::<BigFloat>(&parse(&a.x, rc)?, &parse(&a.v, rc)?, prec)?;
            let d = rc.digits();
            let mut t = Table::new(&["x", "v", "lhs", "rhs", "residual"]).primary(4);
            t.push(vec![a.x.clone(), a.v.clone(), dec(&s.lhs, d), dec(&s.rhs, d), dec(&s.residual, 6)]);
            Ok(t.render(plain))
        }
        Cmd::Eps1(a) => {
            let e = chowla::eps1::<BigFloat>(&parse(&a.x, rc)?, &parse(&a.v, rc)?, rc.quad_tol(), prec)?;
            let mut t = Table::new(&["x", "v", "eps1", "eps1_times_xv", "abs_error_estimate"]).primary(2);
            t.push(vec![
                a.x.clone(),
                a.v.clone(),
                with_radius(&e.value, e.abs_error_estimate, rc),
                format!("{:.6}", e.scaled),
                format!("{:.3e}", e.abs_error_estimate),
            ]);
            Ok(t.render(plain))
        }
        Cmd::Afe { instance, x, v, k } => {
            let x = parse(x, rc)?;
            let v = parse(v, rc)?;
            let inst = match instance {
                Instance::Wilton => afe::exact_instance(wilton::wilton_params::<BigFloat>(prec), rc.k_max, rc.tol),
                Instance::Brjuno => afe::exact_instance(wilton::brjuno_params::<BigFloat>(prec), rc.k_max, rc.tol),
                Instance::Chowla => afe::chowla_instance(&ctx(rc), rc.k_max),
                Instance::Psi1 => {
                    let need = psi1_capacity(&v)?;
                    extensions::psi1_instance(&ctx(rc), Arc::new(DivisorTable::new(need)), rc.k_max)
                }
            };
            let p: &SeriesParams<BigFloat> = &inst.params;
            let k = match k {
                Some(k) => *k,
                None => afe::cutoff_k(&x, &v, p.a)?,
            };
            let tr = afe::iterate(&inst, &x, &v, k)?;
            eprintln!("reassembly residual {}", gaussfe::series::fmt_complex(&tr.residual, 6));
            Ok(from_csv(&afe::trace_csv(&tr, rc.digits_for(rc.quad_tol()))?, csv))
        }
        Cmd::Psi1(a) | Cmd::Psi2(a) | Cmd::Rr(a) => {
            let x = parse(&a.x, rc)?;
            let kind = match &cli.cmd {
                Cmd::Psi1(_) => 1,
                Cmd::Psi2(_) => 2,
                _ => 3,
            };
            let table = if kind < 3 { Some(DivisorTable::new((a.v as usize).max(1))) } else { None };
            let mut t = Table::new(&["v", "value"]);
            let vs = sample_cutoffs(a.v, a.points);
            let d = rc.digits() - 4;
            for v in vs {
                let ve = ExactReal::int(v as i64);
                let val: BigFloat = match (&table, kind) {
                    (Some(tb), 1) => extensions::psi1_partial(tb, &x, &ve, prec)?,
                    (Some(tb), _) => extensions::psi2_partial(tb, &x, &ve, prec)?,
                    _ => extensions::rr_psi_partial(&x, &ve, prec)?,
                };
                t.push(vec![v.to_string(), dec(&val, d)]);
            }
            Ok(t.render(csv))
        }
        Cmd::Verify { suite, all, n, seed } => {
            let cfg = SuiteConfig { seed: *seed, n: *n };
            let reports = if *all || suite.is_empty() {
                verify::run_all(&cfg)
            } else {
                let mut r = Vec::new();
                for s in suite {
                    match verify::run(s, &cfg) {
                        Some(rep) => r.push(rep),
                        None => {
                            return Err(
                                Error::Parse(format!("unknown suite {s}; known: {}", verify::suite_names().join(", "))).into()
                            )
                        }
                    }
                }
                r
            };
            let text = match plain {
                Format::Plain => reports.iter().map(|r| r.render() + "\n").collect(),
                f => {
                    let mut t = Table::new(&["id", "suite", "passed", "summary"]);
                    for r in &reports {
                        t.push(vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), r.summary.clone()]);
                    }
                    t.render(f)
                }
            };
            if reports.iter().all(|r| r.passed) {
                Ok(text)
            } else {
                emit(&text);
                Err(Failure::Verify)
            }
        }
    }
}

/// Divisor counts needed by the ψ₁ instance: the largest scaled cutoff is v itself.
fn psi1_capacity(v: &ExactReal) -> Result<usize, Error> {
    let (fl, _) = v.floor_frac();
    fl.to_usize().map(|n| n.max(1)).ok_or_else(|| Error::Domain(format!("v = {v} is too large for the divisor sieve")))
}

/// `points` cutoffs spaced geometrically, ending at v.
fn sample_cutoffs(v: u64, points: usize) -> Vec<u64> {
    let p = points.max(1);
    let mut out: Vec<u64> = (1..=p).map(|i| ((v as f64).powf(i as f64 / p as f64)).round().max(1.0) as u64).collect();
    *out.last_mut().expect("nonempty") = v;
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoffs_end_at_v() {
        assert_eq!(sample_cutoffs(1000, 3), vec![10, 100, 1000]);
        assert_eq!(sample_cutoffs(5, 1), vec![5]);
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
