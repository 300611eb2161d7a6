//! `dioph`: batch front end for the dioph-core experiments.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when a hard assertion fails.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use dioph_core::convexbody::{self, BodySpec, Lambda};
use dioph_core::error::Error;
use dioph_core::exactnum::interval::Interval;
use dioph_core::exactnum::poly::parse_int_poly;
use dioph_core::exactnum::rational::{self, parse, parse_list};
use dioph_core::exactnum::real::RealNumber;
use dioph_core::exactnum::{RatPoly, Rational};
use dioph_core::report::{Inequality, Verdict};
use dioph_core::{construct, gelfond, hankel, heights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Tsv,
}

/// The full run configuration; serializes losslessly since every number stays a string.
#[derive(Debug, Parser, PartialEq, Eq, Serialize, Deserialize)]
#[command(name = "dioph", version, about = "Exact experiments on heights, convex bodies and conjugate approximation")]
struct ExperimentConfig {
    /// Output format (default: json, or tsv for approximate and liouville).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Binary precision cap for refinement loops (overrides DIOPH_PRECISION_CAP).
    #[arg(long, global = true)]
    precision_cap: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampling-based checks; constructions never depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print this configuration as JSON and exit.
    #[arg(long, global = true)]
    #[serde(skip)]
    print_config: bool,
    /// Run the configuration stored in this JSON file.
    #[arg(long)]
    #[serde(skip)]
    config: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Heights of a vector, a matrix (rows separated by ';') or a polynomial.
    Heights(HeightsArgs),
    /// Successive minima of the body |P^(j)(xi)| <= X_j.
    Minima(BodyArgs),
    /// Products of minima of a body and its dual.
    Duality(BodyArgs),
    /// Hankel state, kernels and the divisor construction.
    HankelRun(HankelArgs),
    /// Resultant gap bound, and optionally the product-space height check.
    GelfondCheck(GelfondArgs),
    /// Whether the maximal minors generate all forms, for every k <= kmax, l <= lmax.
    ModuleGenCheck(ModuleArgs),
    /// Eisenstein construction of algebraic integers with conjugates near xi.
    Approximate(ApproxArgs),
    /// Discriminant lower bound for one polynomial, or an exhaustive sweep.
    Prop101(Prop101Args),
    /// Lower bound for simultaneous approximation of series targets.
    Liouville(LiouvilleArgs),
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct HeightsArgs {
    #[arg(long, allow_hyphen_values = true)]
    vector: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Coefficients a0,a1,...
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct BodyArgs {
    #[arg(long)]
    n: usize,
    /// num/den, alg:<coeffs>:<lo>:<hi> or liouville:<j>:<t>:<n>.
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    /// X_0,...,X_n.
    #[arg(long = "X", allow_hyphen_values = true)]
    x: String,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct HankelArgs {
    /// Coefficients of Q.
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    #[arg(long = "X", allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct GelfondArgs {
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Also check H(P E_k) against H(P)^(k+1) for this k.
    #[arg(long)]
    k: Option<usize>,
    /// Random coprime pairs to check when --p/--q are absent.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    deg: usize,
    #[arg(long, default_value_t = 50)]
    height: i64,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct ModuleArgs {
    #[arg(long)]
    kmax: usize,
    #[arg(long)]
    lmax: usize,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct ApproxArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    /// Comma separated values of X.
    #[arg(long, allow_hyphen_values = true)]
    schedule: String,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct Prop101Args {
    /// Coefficients of an irreducible P; without it, sweep all polynomials.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 3)]
    dmax: usize,
    #[arg(long, default_value_t = 10)]
    hmax: i64,
    /// Comma separated rationals for the sweep.
    #[arg(long, allow_hyphen_values = true)]
    xis: Option<String>,
}

#[derive(Debug, Args, PartialEq, Eq, Serialize, Deserialize)]
struct LiouvilleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, allow_hyphen_values = true)]
    kappa: String,
    #[arg(long)]
    hmax: i64,
}

/// A finished artifact: JSON, its TSV rendering, and whether an asserted inequality failed.
struct Artifact {
    json: Value,
    tsv: String,
    violated: bool,
}

enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::HardAssertion(_) => Failure::Assertion(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn flag<T>(name: &str, r: dioph_core::Result<T>) -> Run<T> {
    r.map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn s(x: &Rational) -> String {
    rational::to_string(x)
}

fn coeffs(p: &RatPoly) -> String {
    p.coeffs().iter().map(s).collect::<Vec<_>>().join(",")
}

fn iv(i: &Interval) -> String {
    format!("{}\t{}", s(&i.lo), s(&i.hi))
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Violated => "violated",
        Verdict::Undecided => "undecided",
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn lambda(l: &Lambda) -> String {
    match l.exact() {
        Some(r) => s(r),
        None => {
            let i = l.to_interval();
            format!("[{},{}]", s(&i.lo), s(&i.hi))
        }
    }
}

fn body(xi: &str, x: &str, n: Option<usize>) -> Run<BodySpec> {
    let xi = flag("xi", RealNumber::parse(xi))?;
    let x = flag("X", parse_list(x))?;
    if let Some(n) = n {
        if x.len() != n + 1 {
            return Err(Failure::Usage(format!("--X: expected {} values for n = {n}, got {}", n + 1, x.len())));
        }
    }
    flag("X", BodySpec::new(xi, x))
}

fn cmd_heights(a: &HeightsArgs) -> Run<Artifact> {
    let rep = match (&a.vector, &a.matrix, &a.poly) {
        (Some(v), None, None) => heights::height_vector(&flag("vector", parse_list(v))?)?,
        (None, Some(m), None) => {
            let rows: Vec<Vec<Rational>> = m.split(';').map(parse_list).collect::<dioph_core::Result<_>>().map_err(|e| Failure::Usage(format!("--matrix: {e}")))?;
            heights::height_matrix(&rows)?
        }
        (None, None, Some(p)) => {
            let p = flag("poly", parse_int_poly(p))?;
            let v = p.coeffs().to_vec();
            heights::height_vector(&v)?
        }
        _ => return Err(Failure::Usage("give exactly one of --vector, --matrix, --poly".into())),
    };
    let json = to_json(&rep);
    let mut tsv = String::from("place\tnorm\n");
    if let Some(m) = json.get("per_place_norms").and_then(Value::as_object) {
        for (k, v) in m {
            tsv += &format!("{k}\t{}\n", v.as_str().unwrap_or_default());
        }
    }
    tsv += &format!("height\t{}\n", s(&rep.value));
    Ok(Artifact { json, tsv, violated: false })
}

fn cmd_minima(a: &BodyArgs) -> Run<Artifact> {
    let b = body(&a.xi, &a.x, Some(a.n))?;
    let m = convexbody::successive_minima(&b)?;
    let checks = convexbody::minkowski_product_check(&m, &b)?;
    let violated = checks.iter().any(|c| c.verdict == Verdict::Violated);
    let mut tsv = String::from("i\tlambda\twitness\n");
    for (i, (l, w)) in m.lambdas.iter().zip(&m.witnesses).enumerate() {
        tsv += &format!("{}\t{}\t{}\n", i + 1, lambda(l), coeffs(w));
    }
    Ok(Artifact { json: to_json(&m), tsv, violated })
}

fn cmd_duality(a: &BodyArgs) -> Run<Artifact> {
    let b = body(&a.xi, &a.x, Some(a.n))?;
    let rep = convexbody::duality_products(&b)?;
    let violated = rep.checks.iter().any(|c| c.verdict == Verdict::Violated);
    let mut tsv = String::from("i\tlambda_x\tlambda_y\tproduct_lo\tproduct_hi\n");
    let k = rep.products.len();
    for (i, p) in rep.products.iter().enumerate() {
        tsv += &format!("{}\t{}\t{}\t{}\n", i + 1, lambda(&rep.minima_x.lambdas[i]), lambda(&rep.minima_y.lambdas[k - 1 - i]), iv(p));
    }
    Ok(Artifact { json: to_json(&rep), tsv, violated })
}

fn cmd_hankel(a: &HankelArgs) -> Run<Artifact> {
    let b = body(&a.xi, &a.x, None)?;
    let q = flag("q", parse_int_poly(&a.q))?;
    let run = hankel::hankel_run(&b, &q, a.k, a.t)?;
    let violated = run.divisor.as_ref().is_some_and(|d| d.violations() > 0);
    let mut tsv = String::from("l\trank\tkernel_dim\n");
    for (l, d) in run.kernel_dims.iter().enumerate() {
        tsv += &format!("{l}\t{}\t{d}\n", run.state.rank(l));
    }
    Ok(Artifact { json: to_json(&run), tsv, violated })
}

fn ineq_row(i: &Inequality) -> String {
    format!("{}\t{}\t{}\t{}\n", i.label, iv(&i.lhs), iv(&i.rhs), verdict(i.verdict))
}

fn rand_poly(r: &mut ChaCha8Rng, deg: usize, h: i64) -> RatPoly {
    loop {
        let d = r.gen_range(0..=deg);
        let c: Vec<i64> = (0..=d).map(|_| r.gen_range(-h..=h)).collect();
        let p = RatPoly::from_ints(&c);
        if !p.is_zero() {
            return p;
        }
    }
}

fn cmd_gelfond(a: &GelfondArgs, seed: u64) -> Run<Artifact> {
    let xi = flag("xi", RealNumber::parse(&a.xi))?;
    let mut tsv = String::from("label\tlhs_lo\tlhs_hi\trhs_lo\trhs_hi\tverdict\n");
    let mut violated = false;
    let json = match (&a.p, &a.q) {
        (Some(p), Some(q)) => {
            let p = flag("p", parse_int_poly(p))?;
            let q = flag("q", parse_int_poly(q))?;
            let gap = gelfond::resultant_gap_check(&p, &q, &xi)?;
            violated |= gap.verdict == Verdict::Violated;
            tsv += &ineq_row(&gap);
            let product = match a.k {
                Some(k) => {
                    let rep = gelfond::product_space_height_check(&p, k)?;
                    for c in [&rep.lower, &rep.upper] {
                        violated |= c.verdict == Verdict::Violated;
                        tsv += &ineq_row(c);
                    }
                    Some(rep)
                }
                None => None,
            };
            json!({ "resultant_gap": gap, "product_space": product })
        }
        (None, None) => {
            if a.height < 1 {
                return Err(Failure::Usage("--height must be positive".into()));
            }
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let (mut done, mut redrawn, mut bad) = (0usize, 0usize, 0usize);
            while done < a.samples {
                let p = rand_poly(&mut r, a.deg, a.height);
                let q = rand_poly(&mut r, a.deg, a.height);
                match gelfond::resultant_gap_check(&p, &q, &xi) {
                    Ok(c) => {
                        done += 1;
                        if c.verdict == Verdict::Violated {
                            bad += 1;
                        }
                    }
                    Err(Error::NotCoprime) => redrawn += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            violated = bad > 0;
            tsv = format!("samples\tredrawn\tviolations\n{done}\t{redrawn}\t{bad}\n");
            json!({ "samples": done, "redrawn": redrawn, "violations": bad, "seed": seed })
        }
        _ => return Err(Failure::Usage("--p and --q go together".into())),
    };
    Ok(Artifact { json, tsv, violated })
}

fn cmd_module(a: &ModuleArgs) -> Run<Artifact> {
    let mut reps = Vec::new();
    let mut tsv = String::from("k\tl\tgenerates\tforward_row_sum\n");
    for k in 1..=a.kmax {
        for l in 0..=a.lmax {
            let r = gelfond::minor_module_generation(k, l)?;
            tsv += &format!("{k}\t{l}\t{}\t{}\n", r.generates, r.forward_row_sum);
            reps.push(r);
        }
    }
    let all = reps.iter().all(|r| r.generates);
    Ok(Artifact { json: json!({ "all_generate": all, "reports": reps }), tsv, violated: !all })
}

fn cmd_approximate(a: &ApproxArgs) -> Run<Artifact> {
    let xi = flag("xi", RealNumber::parse(&a.xi))?;
    let schedule = flag("schedule", parse_list(&a.schedule))?;
    let params = construct::experiment_params(&xi, a.n, a.t)?;
    let recs = construct::theorem_A_experiment(&xi, a.n, a.t, &schedule)?;
    let violated = recs.iter().any(|r| !r.lift.height_check.holds() || !r.premise.holds());
    let mut tsv = String::from(
        "X\tY\tdelta\tkappa\tq\tepsilon\thalvings\tmin_poly\tH\tC\tdist_lo\tdist_hi\texponent_lo\texponent_hi\n",
    );
    for r in &recs {
        tsv += &format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            s(&r.x),
            s(&r.y),
            s(&r.delta),
            s(&r.kappa),
            r.q,
            s(&r.lift.epsilon),
            r.lift.halvings,
            coeffs(&r.lift.alg.min_poly),
            s(&r.h_alpha),
            s(&r.lift.constant),
            iv(&r.max_conj_distance),
            iv(&r.exponent)
        );
    }
    let summary = json!({
        "params": params,
        "points": recs.len(),
        "last_exponent_lower": recs.last().map(|r| s(&r.exponent.lo)),
    });
    tsv += &format!("# {summary}\n");
    Ok(Artifact { json: json!({ "summary": summary, "records": recs }), tsv, violated })
}

fn cmd_prop101(a: &Prop101Args) -> Run<Artifact> {
    match &a.p {
        Some(p) => {
            let p = flag("p", parse_int_poly(p))?;
            let xi = flag("xi", RealNumber::parse(a.xi.as_deref().unwrap_or("0")))?;
            let rec = construct::prop_10_1_check(&p, &xi, a.t)?;
            let tsv = format!("n\tt\tH\tconstant\tdist_lo\tdist_hi\tverdict\n{}\t{}\t{}\t{}\t{}\t{}\n", rec.n, rec.t, s(&rec.height), s(&rec.constant), iv(&rec.distance), verdict(rec.check.verdict));
            Ok(Artifact { violated: rec.check.verdict == Verdict::Violated, json: to_json(&rec), tsv })
        }
        None => {
            if !(2..=3).contains(&a.dmax) || a.hmax < 1 || a.hmax > 50 {
                return Err(Failure::Usage("sweep needs --dmax in 2..=3 and --hmax in 1..=50".into()));
            }
            let xis = flag("xis", parse_list(a.xis.as_deref().unwrap_or("0,1/3,1/2")))?;
            if xis.iter().any(|x| x.numer().bits() > 20 || x.denom().bits() > 10) {
                return Err(Failure::Usage("--xis: numerators below 2^20 and denominators below 2^10".into()));
            }
            let sw = construct::prop_10_1_sweep(a.dmax, a.hmax, &xis, 997)?;
            let tsv = format!(
                "polys\tchecks\tpellet\troots\tcross_checked\tviolations\n{}\t{}\t{}\t{}\t{}\t{}\n",
                sw.polys, sw.checks, sw.pellet, sw.roots, sw.cross_checked, sw.violations
            );
            Ok(Artifact { violated: sw.violations > 0, json: to_json(&sw), tsv })
        }
    }
}

fn cmd_liouville(a: &LiouvilleArgs) -> Run<Artifact> {
    let kappa = flag("kappa", parse(&a.kappa))?;
    let rep = construct::prop_10_2_adversarial(a.n, a.t, &kappa, a.hmax)?;
    let mut tsv = String::from("H\tbound_lo\tbound_hi\tverdict\tslack\n");
    for st in &rep.statuses {
        tsv += &format!("{}\t{}\t{}\t{}\n", st.h, iv(&st.bound), verdict(st.verdict), s(&st.slack));
    }
    let summary = json!({
        "n": rep.n,
        "t": rep.t,
        "kappa": s(&rep.kappa),
        "polys": rep.polys,
        "candidates": rep.candidates,
        "h0": rep.h0,
        "min_slack": s(&rep.min_slack),
    });
    tsv += &format!("# {summary}\n");
    Ok(Artifact { json: to_json(&rep), tsv, violated: false })
}

fn execute(cfg: &ExperimentConfig, cmd: &Command) -> Run<(Artifact, Format)> {
    let default = match cmd {
        Command::Approximate(_) | Command::Liouville(_) => Format::Tsv,
        _ => Format::Json,
    };
    let art = match cmd {
        Command::Heights(a) => cmd_heights(a)?,
        Command::Minima(a) => cmd_minima(a)?,
        Command::Duality(a) => cmd_duality(a)?,
        Command::HankelRun(a) => cmd_hankel(a)?,
        Command::GelfondCheck(a) => cmd_gelfond(a, cfg.seed)?,
        Command::ModuleGenCheck(a) => cmd_module(a)?,
        Command::Approximate(a) => cmd_approximate(a)?,
        Command::Prop101(a) => cmd_prop101(a)?,
        Command::Liouville(a) => cmd_liouville(a)?,
    };
    Ok((art, cfg.format.unwrap_or(default)))
}

fn run(cfg: ExperimentConfig) -> Run<()> {
    let cfg = match &cfg.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--config: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--config: {e}")))?
        }
        None => cfg,
    };
    if cfg.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("serializable"));
        return Ok(());
    }
    if let Some(bits) = cfg.precision_cap {
        if bits < 16 {
            return Err(Failure::Usage("--precision-cap must be at least 16".into()));
        }
        std::env::set_var("DIOPH_PRECISION_CAP", bits.to_string());
    }
    if let Some(j) = cfg.jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    }
    let Some(cmd) = &cfg.command else {
        return Err(Failure::Usage("missing subcommand (see --help)".into()));
    };
    let (art, fmt) = execute(&cfg, cmd)?;
    let text = match fmt {
        Format::Json => serde_json::to_string_pretty(&art.json).expect("serializable") + "\n",
        Format::Tsv => art.tsv,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("--output: {e}")))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    if art.violated {
        return Err(Failure::Assertion("an asserted inequality is violated".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = match ExperimentConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(m)) => {
            eprintln!("assertion failure: {m}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let cfg = ExperimentConfig::try_parse_from(["dioph", "--seed", "7", "minima", "--n", "1", "--xi", "0/1", "--X", "1,1"]).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn hard_assertions_map_to_two() {
        assert!(matches!(Failure::from(Error::HardAssertion("x".into())), Failure::Assertion(_)));
        assert!(matches!(Failure::from(Error::Reducible), Failure::Usage(_)));
    }
}
