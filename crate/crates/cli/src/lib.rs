//! Command-line front end for `stabdiv`.
//!
//! [`run`] takes the argument vector and returns the exit code together with
//! everything that would be written to stdout and stderr, so the whole tool
//! can be driven from tests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use stabdiv::groebner::{default_equalization_degree, equalize_degrees, equalized_basis, quasi_homogeneous_basis, staircase};
use stabdiv::norms::{c_ratio, equivalence_bounds_check, poly_norm_sq};
use stabdiv::operators::{angle_bound_check, essential_normality_scan, fang_xia_probe, random_angle_instance};
use stabdiv::poly::{format_polynomial, parse, parse_polynomial, Parsed};
use stabdiv::stability::{certify_vector, counterexample_generators, verdict};
use stabdiv::{
    beurling_form, buchberger, certify, divide, divide_vector, Error, Polynomial, Rational, SpaceParams, VectorPolynomial,
    Verdict, WeightedOrder,
};

/// Default directory for reports when `--out` is not given.
pub const OUT_DIR_ENV: &str = "STABDIV_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_GROWING: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stabdiv", version, about = "Stable division experiments in weighted Hilbert spaces on the ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Comma-separated positive weights, one per variable (default all 1).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// Space parameter as an exact rational, e.g. -2 or 1/2 (default -d).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; defaults to stdout, or to `$STABDIV_OUT_DIR/<command>.<ext>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Gens {
    /// Generators; repeat the flag or separate with ';'.
    #[arg(long = "gens", allow_hyphen_values = true)]
    pub gens: Vec<String>,
    /// File with one generator per line ('#' starts a comment).
    #[arg(long)]
    pub gens_file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// `{f_1, f_2}`
    Standard,
    /// `{f_1 − f_2, f_2}`
    Rotated,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Squared norm of a polynomial, with the norm-equivalence check.
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Also tabulate c_{n,t} for n = 0..=N.
        #[arg(long)]
        c_ratio_max: Option<u64>,
    },
    /// Division with remainder.
    Divide {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        trace: bool,
    },
    /// Groebner basis, staircase and degree equalisation.
    Groebner {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        reduce: bool,
        /// Lift the basis to this weighted degree.
        #[arg(long)]
        equalize: Option<u64>,
        /// Lift to the default degree (max degree plus the Frobenius bound).
        #[arg(long, conflicts_with = "equalize")]
        equalize_default: bool,
    },
    /// gcd factorisation I = p·J.
    Beurling {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: Gens,
    },
    /// Sweep degree slices and report division ratios.
    Certify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        q_max: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Exit with code 3 on a `growing` verdict.
        #[arg(long)]
        expect_stable: bool,
        /// Complete to a quasi-homogeneous Groebner basis of one degree first.
        #[arg(long)]
        equalize: bool,
    },
    /// Ratios for h_n = (x y^n, -x y^n, 0) against f_1 = (x,0,y), f_2 = (0,x,y).
    Counterexample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Basis::Standard)]
        basis: Basis,
    },
    /// Schatten norms of P_N^⊥ S_j^* P_N across truncations.
    ScanCommutators {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "10,15,20,25,30")]
        degrees: Vec<u32>,
    },
    /// Empirical constant in ‖Q S_j^* g f‖_t ≤ K ‖g f‖_{t+1}.
    FangXiaProbe {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 15)]
        max_degree: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Random trials of the bound for T on M + span{v}.
    AngleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        ambient: usize,
        #[arg(long, default_value_t = 20)]
        m_dim: usize,
        #[arg(long, default_value_t = 0.5)]
        cosine: f64,
        #[arg(long, default_value_t = 1.0)]
        norm_bound: f64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Divide { .. } => "divide",
            Command::Groebner { .. } => "groebner",
            Command::Beurling { .. } => "beurling",
            Command::Certify { .. } => "certify",
            Command::Counterexample { .. } => "counterexample",
            Command::ScanCommutators { .. } => "scan-commutators",
            Command::FangXiaProbe { .. } => "fang-xia-probe",
            Command::AngleCheck { .. } => "angle-check",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Norm { common, .. }
            | Command::Divide { common, .. }
            | Command::Groebner { common, .. }
            | Command::Beurling { common, .. }
            | Command::Certify { common, .. }
            | Command::Counterexample { common, .. }
            | Command::ScanCommutators { common, .. }
            | Command::FangXiaProbe { common, .. }
            | Command::AngleCheck { common, .. } => common,
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(m) => Failure::Numerical(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Report {
    json: Value,
    csv: Option<String>,
    text: String,
    code: i32,
}

/// Resolved space, order and parse dimension.
struct Config {
    sp: SpaceParams,
    ord: WeightedOrder,
}

impl Config {
    fn new(c: &Common) -> Result<Self, Failure> {
        let t = match &c.t {
            Some(s) => s.trim().parse::<Rational>().map_err(|_| Failure::Input(format!("cannot read t = '{s}' as a rational")))?,
            None => Rational::from_integer((-(c.d as i64)).into()),
        };
        let sp = SpaceParams::new(c.d, t)?;
        let weights = c.weights.clone().unwrap_or_else(|| vec![1; c.d]);
        if weights.len() != c.d {
            return Err(Failure::Input(format!("{} weights given for d = {}", weights.len(), c.d)));
        }
        let ord = WeightedOrder::new(weights)?;
        Ok(Self { sp, ord })
    }

    fn t_text(&self) -> String {
        self.sp.t().to_string()
    }

    fn fmt(&self, p: &Polynomial) -> String {
        format_polynomial(p, &self.ord)
    }

    fn fmt_vec(&self, v: &VectorPolynomial) -> String {
        let parts: Vec<String> = v.components().iter().map(|c| self.fmt(c)).collect();
        format!("({})", parts.join(", "))
    }
}

fn split_inline(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn gen_texts(g: &Gens) -> Result<Vec<String>, Failure> {
    let mut texts: Vec<String> = g.gens.iter().flat_map(|s| split_inline(s)).collect();
    if let Some(path) = &g.gens_file {
        let body = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        for line in body.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                texts.push(line.to_string());
            }
        }
    }
    if texts.is_empty() {
        return Err(Failure::Input("no generators given (use --gens or --gens-file)".into()));
    }
    Ok(texts)
}

fn parse_poly(text: &str, dim: usize) -> Result<Polynomial, Failure> {
    parse_polynomial(text, dim).map_err(|e| Failure::Input(format!("in '{text}': {e}")))
}

fn scalar_gens(g: &Gens, dim: usize) -> Result<Vec<Polynomial>, Failure> {
    gen_texts(g)?.iter().map(|t| parse_poly(t, dim)).collect()
}

fn rat(r: &Rational) -> String {
    r.to_string()
}

fn warn_division_range(cfg: &Config, warnings: &mut String) {
    if *cfg.sp.t() < Rational::from_integer((-2).into()) {
        let _ = writeln!(warnings, "warning: t = {} is below -2; the division stability results assume t >= -2", cfg.t_text());
    }
}

fn warn_operator_range(cfg: &Config, warnings: &mut String) {
    if *cfg.sp.t() <= Rational::from_integer((-3).into()) {
        let _ = writeln!(warnings, "warning: t = {} is not above -3; the essential normality results assume t > -3", cfg.t_text());
    }
}

fn execute(cmd: &Command, warnings: &mut String) -> Result<Report, Failure> {
    let cfg = Config::new(cmd.common())?;
    let d = cfg.sp.d();
    match cmd {
        Command::Norm { poly, c_ratio_max, .. } => {
            let p = parse_poly(poly, d)?;
            let norm_sq = poly_norm_sq(&p, &cfg.sp)?;
            let mut json = json!({"poly": cfg.fmt(&p), "d": d, "t": cfg.t_text(), "norm_sq": rat(&norm_sq)});
            let mut text = format!("{}\n", rat(&norm_sq));
            if !p.is_zero() {
                let e = equivalence_bounds_check(&p, &cfg.sp)?;
                json["equivalence"] = json!({
                    "min_degree": e.min_degree,
                    "max_degree": e.max_degree,
                    "drury_arveson_norm_sq": rat(&e.drury_arveson_norm_sq),
                    "lower_bound": rat(&e.lower_bound),
                    "upper_bound": rat(&e.upper_bound),
                    "holds": e.lower_ok && e.upper_ok,
                });
                let _ = writeln!(text, "bounds {} <= {} <= {}", rat(&e.lower_bound), rat(&norm_sq), rat(&e.upper_bound));
            }
            let mut csv = None;
            if let Some(n) = c_ratio_max {
                let table: Vec<(u64, Rational)> = (0..=*n).map(|k| (k, c_ratio(k, &cfg.sp))).collect();
                json["c_ratios"] = table.iter().map(|(k, c)| json!({"n": k, "c": rat(c)})).collect();
                let mut s = String::from("n,c\n");
                for (k, c) in &table {
                    let _ = writeln!(s, "{k},{c}");
                }
                csv = Some(s);
            }
            Ok(Report { json, csv, text, code: EXIT_OK })
        }

        Command::Divide { gens, h, trace, .. } => {
            warn_division_range(&cfg, warnings);
            let texts = gen_texts(gens)?;
            let parsed_h = parse(h, d).map_err(|e| Failure::Input(format!("in '{h}': {e}")))?;
            let mut json;
            let text;
            match parsed_h {
                Parsed::Scalar(h) => {
                    let g = texts.iter().map(|t| parse_poly(t, d)).collect::<Result<Vec<_>, _>>()?;
                    let res = divide(&h, &g, &cfg.ord)?;
                    json = json!({
                        "quotients": res.quotients.iter().map(|q| cfg.fmt(q)).collect::<Vec<_>>(),
                        "remainder": cfg.fmt(&res.remainder),
                    });
                    if !h.is_zero() {
                        let r = stabdiv::division::stability_ratio(&h, &g, &cfg.ord, &cfg.sp)?;
                        json["ratio_sq"] = json!(rat(&r.ratio_sq));
                        json["remainder_adjusted_ratio_sq"] = json!(rat(&r.remainder_adjusted));
                    }
                    if *trace {
                        json["trace"] = res.trace_json();
                    }
                    let mut t = String::new();
                    for (i, q) in res.quotients.iter().enumerate() {
                        let _ = writeln!(t, "a{} = {}", i + 1, cfg.fmt(q));
                    }
                    let _ = writeln!(t, "r = {}", cfg.fmt(&res.remainder));
                    if *trace {
                        t.push_str(&res.trace_log());
                    }
                    text = t;
                }
                Parsed::Vector(h) => {
                    let g = texts
                        .iter()
                        .map(|t| match parse(t, d) {
                            Ok(Parsed::Vector(v)) => Ok(v),
                            Ok(Parsed::Scalar(_)) => Err(Failure::Input(format!("'{t}' is not a vector polynomial"))),
                            Err(e) => Err(Failure::Input(format!("in '{t}': {e}"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let res = divide_vector(&h, &g, &cfg.ord)?;
                    json = json!({
                        "quotients": res.quotients.iter().map(|q| cfg.fmt(q)).collect::<Vec<_>>(),
                        "remainder": cfg.fmt_vec(&res.remainder),
                    });
                    if !h.is_zero() {
                        let (r, _) = stabdiv::division::stability_ratio_vector(&h, &g, &cfg.ord, &cfg.sp)?;
                        json["ratio_sq"] = json!(rat(&r.ratio_sq));
                        json["remainder_adjusted_ratio_sq"] = json!(rat(&r.remainder_adjusted));
                    }
                    if *trace {
                        json["trace"] = res.trace_json();
                    }
                    let mut t = String::new();
                    for (i, q) in res.quotients.iter().enumerate() {
                        let _ = writeln!(t, "a{} = {}", i + 1, cfg.fmt(q));
                    }
                    let _ = writeln!(t, "r = {}", cfg.fmt_vec(&res.remainder));
                    if *trace {
                        t.push_str(&res.trace_log());
                    }
                    text = t;
                }
            }
            Ok(Report { json, csv: None, text, code: EXIT_OK })
        }

        Command::Groebner { gens, reduce, equalize, equalize_default, .. } => {
            let g = scalar_gens(gens, d)?;
            let mut gb = buchberger(&g, &cfg.ord)?;
            if *reduce {
                gb = gb.reduce();
            }
            let basis: Vec<String> = gb.generators().iter().map(|p| cfg.fmt(p)).collect();
            let stair = staircase(&gb);
            let mut json = json!({
                "weights": cfg.ord.weights(),
                "basis": basis,
                "reduced": gb.is_reduced(),
                "verified": gb.verify()?,
                "staircase": {
                    "codimension": gb.staircase_codimension(),
                    "monomials": stair.as_ref().map(|s| s.iter().map(|m| m.to_string()).collect::<Vec<_>>()),
                },
            });
            let mut text = basis.join("\n") + "\n";
            let _ = writeln!(text, "codimension {}", gb.staircase_codimension());
            let target = match (equalize, equalize_default) {
                (Some(m), _) => Some(*m),
                (None, true) => Some(default_equalization_degree(&quasi_homogeneous_basis(&g, &cfg.ord)?)?),
                (None, false) => None,
            };
            if let Some(m) = target {
                let qgb = quasi_homogeneous_basis(&g, &cfg.ord)?;
                let lifted: Vec<String> = equalize_degrees(&qgb, m)?.iter().map(|p| cfg.fmt(p)).collect();
                let _ = writeln!(text, "degree {m}: {}", lifted.join(", "));
                json["equalized"] = json!({"degree": m, "generators": lifted});
            }
            Ok(Report { json, csv: None, text, code: EXIT_OK })
        }

        Command::Beurling { gens, .. } => {
            let g = scalar_gens(gens, d)?;
            let b = beurling_form(&g, &cfg.ord)?;
            let cof: Vec<String> = b.cofactor_ideal.iter().map(|p| cfg.fmt(p)).collect();
            let json = json!({"gcd": cfg.fmt(&b.gcd_part), "cofactors": cof, "codimension": b.codimension});
            let text = format!("p = {}\nJ = <{}>\ncodimension {}\n", cfg.fmt(&b.gcd_part), cof.join(", "), b.codimension);
            Ok(Report { json, csv: None, text, code: EXIT_OK })
        }

        Command::Certify { gens, q_max, samples, expect_stable, equalize, common } => {
            warn_division_range(&cfg, warnings);
            let mut g = scalar_gens(gens, d)?;
            if *equalize {
                let gb = quasi_homogeneous_basis(&g, &cfg.ord)?;
                let m = default_equalization_degree(&gb)?;
                g = equalized_basis(&gb, m)?;
            }
            let report = certify(&g, &cfg.ord, &cfg.sp, *q_max, *samples, common.seed)?;
            let mut text = String::new();
            for r in &report.records {
                let _ = writeln!(text, "q={} dim={} max={} mean={}", r.degree, r.slice_dim, r.max_ratio_sq, r.mean_ratio_sq);
            }
            let _ = writeln!(text, "sup {} A {:.6} verdict {}", report.sup_ratio_sq, report.linear_constant, report.verdict);
            let code = verdict_exit_code(report.verdict, *expect_stable);
            Ok(Report { json: report.to_json(), csv: Some(report.to_csv()), text, code })
        }

        Command::Counterexample { n_max, basis, .. } => {
            warn_division_range(&cfg, warnings);
            if d != 2 {
                return Err(Failure::Input("the vector example needs d = 2".into()));
            }
            let (f1, f2) = counterexample_generators();
            let gens = match basis {
                Basis::Standard => vec![f1, f2],
                Basis::Rotated => vec![f1.checked_sub(&f2)?, f2],
            };
            let rows = certify_vector(&gens, &cfg.ord, &cfg.sp, *n_max)?;
            let series: Vec<(u64, f64)> = rows.iter().map(|r| (u64::from(r.n), to_f64(&r.ratio_sq))).collect();
            let v = verdict(&series);
            let json = json!({
                "t": cfg.t_text(),
                "basis": gens.iter().map(|g| cfg.fmt_vec(g)).collect::<Vec<_>>(),
                "rows": serde_json::to_value(&rows).expect("rows serialize"),
                "verdict": v.to_string(),
            });
            let mut csv = String::from("n,ratio_sq,remainder_norm_sq\n");
            let mut text = String::new();
            for r in &rows {
                let _ = writeln!(csv, "{},{},{}", r.n, r.ratio_sq, r.remainder_norm_sq);
                let _ = writeln!(text, "n={} ratio_sq={}", r.n, r.ratio_sq);
            }
            let _ = writeln!(text, "verdict {v}");
            Ok(Report { json, csv: Some(csv), text, code: EXIT_OK })
        }

        Command::ScanCommutators { gens, p, degrees, .. } => {
            warn_operator_range(&cfg, warnings);
            if *p <= d as f64 {
                let _ = writeln!(warnings, "warning: p = {p} does not exceed d = {d}");
            }
            let g = scalar_gens(gens, d)?;
            let rows = essential_normality_scan(&g, &cfg.sp, *p, degrees)?;
            let json = json!({
                "gens": g.iter().map(|x| cfg.fmt(x)).collect::<Vec<_>>(),
                "t": cfg.t_text(),
                "p": p,
                "schatten_exponent": 2.0 * p,
                "rows": serde_json::to_value(&rows).expect("rows serialize"),
            });
            let mut csv = String::from("D,j,value,increment,boundary\n");
            let mut text = String::new();
            for r in &rows {
                let inc = r.increment.map(|x| x.to_string()).unwrap_or_default();
                let _ = writeln!(csv, "{},{},{},{},{}", r.max_degree, r.j, r.value, inc, r.boundary);
                let _ = writeln!(text, "D={} j={} value={:.6e} increment={}", r.max_degree, r.j, r.value, inc);
            }
            Ok(Report { json, csv: Some(csv), text, code: EXIT_OK })
        }

        Command::FangXiaProbe { poly, max_degree, samples, common } => {
            warn_operator_range(&cfg, warnings);
            let f = parse_poly(poly, d)?;
            let probe = fang_xia_probe(&f, &cfg.sp, *max_degree, *samples, common.seed)?;
            let json = json!({
                "f": cfg.fmt(&f),
                "t": cfg.t_text(),
                "max_degree": max_degree,
                "samples": samples,
                "max_ratio": probe.max_ratio,
                "rows": serde_json::to_value(&probe.rows).expect("rows serialize"),
            });
            let mut csv = String::from("sample,j,lhs,rhs,ratio\n");
            for r in &probe.rows {
                let _ = writeln!(csv, "{},{},{},{},{}", r.sample, r.j, r.lhs, r.rhs, r.ratio);
            }
            let text = format!("max ratio {:.6}\n", probe.max_ratio);
            Ok(Report { json, csv: Some(csv), text, code: EXIT_OK })
        }

        Command::AngleCheck { ambient, m_dim, cosine, norm_bound, trials, samples, common } => {
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let mut out = Vec::new();
            let (mut viol, mut inter) = (0, 0);
            for _ in 0..*trials {
                let inst = random_angle_instance(*ambient, *m_dim, *cosine, *norm_bound, &mut rng)?;
                let rep = angle_bound_check(&inst.m_basis, &inst.v, &inst.t, *samples, rng.random())?;
                viol += rep.violations;
                inter += rep.intermediate_violations;
                out.push(rep);
            }
            let json = json!({
                "ambient": ambient,
                "m_dim": m_dim,
                "cosine": cosine,
                "norm_bound": norm_bound,
                "trials": serde_json::to_value(&out).expect("reports serialize"),
                "violations": viol,
                "intermediate_violations": inter,
            });
            let text = format!("trials {trials} violations {viol} intermediate violations {inter}\n");
            Ok(Report { json, csv: None, text, code: EXIT_OK })
        }
    }
}

/// Exit status for a finished certification.
pub fn verdict_exit_code(v: Verdict, expect_stable: bool) -> i32 {
    if expect_stable && v == Verdict::Growing {
        EXIT_GROWING
    } else {
        EXIT_OK
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

fn render(report: &Report, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("json values serialize") + "\n",
        Format::Csv => report.csv.clone().ok_or_else(|| Failure::Input("this command has no CSV form".into()))?,
        Format::Text => report.text.clone(),
    })
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "txt",
    }
}

fn destination(cmd: &Command) -> Option<PathBuf> {
    let common = cmd.common();
    common.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| Path::new(&dir).join(format!("{}.{}", cmd.name(), extension(common.format))))
    })
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut stderr = String::new();
    let result = execute(&cli.command, &mut stderr).and_then(|r| Ok((render(&r, cli.command.common().format)?, r.code)));
    match result {
        Ok((body, code)) => match destination(&cli.command) {
            Some(path) => match fs::write(&path, &body) {
                Ok(()) => {
                    let _ = writeln!(stderr, "wrote {}", path.display());
                    Output { code, stdout: String::new(), stderr }
                }
                Err(e) => {
                    let _ = writeln!(stderr, "error: {}: {e}", path.display());
                    Output { code: EXIT_INPUT, stdout: String::new(), stderr }
                }
            },
            None => Output { code, stdout: body, stderr },
        },
        Err(Failure::Input(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            Output { code: EXIT_INPUT, stdout: String::new(), stderr }
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(stderr, "numerical failure: {m}");
            Output { code: EXIT_NUMERICAL, stdout: String::new(), stderr }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growing_only_fails_when_stability_expected() {
        assert_eq!(verdict_exit_code(Verdict::Growing, true), EXIT_GROWING);
        assert_eq!(verdict_exit_code(Verdict::Growing, false), EXIT_OK);
        assert_eq!(verdict_exit_code(Verdict::Inconclusive, true), EXIT_OK);
        assert_eq!(verdict_exit_code(Verdict::BoundedPlateau, true), EXIT_OK);
    }

    #[test]
    fn numerical_errors_map_to_their_own_code() {
        assert!(matches!(Failure::from(Error::Numerical("x".into())), Failure::Numerical(_)));
        assert!(matches!(Failure::from(Error::EmptyGenerators), Failure::Input(_)));
    }

    #[test]
    fn inline_generators_split_outside_parentheses() {
        assert_eq!(split_inline("x; y^2 ;"), vec!["x", "y^2"]);
        assert_eq!(split_inline("(x;0, y); (0, x, y)"), vec!["(x;0, y)", "(0, x, y)"]);
    }
}
