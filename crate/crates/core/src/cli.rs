//! Command-line front end.
//!
//! Every subcommand writes JSON lines of [`ResultRecord`]s to standard
//! output, except `trace`, which writes CSV unless `--format record` is
//! given. Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::augment::{augmentation_system, compare, verify_trefoil_combination, PolyIdeal};
use crate::diskpot::{check_gradient, disk_potential, to_csv, trace_branch, TraceConfig};
use crate::gencurve::{potential_truncated, resolution_weight_series, CurveCatalog};
use crate::holonomic::{act, checkable_modes, frame_wavefunction, solve_recursion_seeded};
use crate::parse::{
    parse_algebra_file, parse_operator_file, parse_polynomial, parse_ratfunc, parse_wavefunction,
};
use crate::ring::{PowerSeries, RatFunc, VarSet};

pub const TOOL_VERSION: &str = concat!("kch ", env!("CARGO_PKG_VERSION"));

/// One output line. Field order is alphabetical so the JSON keys are sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub inputs_digest: String,
    pub payload: Value,
    pub status: Status,
    pub tool_version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

impl ResultRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

#[derive(Debug, Parser)]
#[command(name = "kch", version, about = "Knot contact homology computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check d² = 0 on every generator.
    CheckD2 { algebra: PathBuf },
    /// Check that d lowers degree by one.
    CheckGrading { algebra: PathBuf },
    /// Augmentation equations of the degree-1 generators.
    AugSystem {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
    },
    /// Eliminate chord unknowns to get the augmentation polynomial.
    AugPoly {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
        /// Polynomial file to compare the result with.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Expand the displayed trefoil combination of dc21, dc22, db12.
    VerifyTrefoil { algebra: PathBuf },
    /// Classical limit s = 1 of an operator.
    Classical { operator: PathBuf },
    /// Framing change of an operator.
    FrameOp {
        operator: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
    },
    /// Apply an operator to a wavefunction.
    Act {
        operator: PathBuf,
        wavefunction: PathBuf,
        #[arg(long)]
        modes: Option<usize>,
    },
    /// Solve the recursion A Ψ = 0 from H_0 = 1 (and optional further seeds).
    Recursion {
        operator: PathBuf,
        #[arg(long, default_value_t = 10)]
        modes: usize,
        /// H_1, H_2, … as rational functions in s and Q.
        #[arg(long, allow_hyphen_values = true)]
        seed: Vec<String>,
    },
    /// Framing change of a wavefunction.
    FrameWf {
        wavefunction: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
    },
    /// Trace a branch of Aug = 0 and integrate the disk potential.
    Trace {
        polynomial: PathBuf,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        seed_mu: Complex64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        /// Bound on max |dW/dx - p|.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        x_start: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -0.5)]
        x_end: f64,
        #[arg(long, value_enum, default_value_t = TraceFormat::Csv)]
        format: TraceFormat,
    },
    /// Generalized-curve generating function of a catalog.
    Gf {
        catalog: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
    },
    /// Gluing-weight series against e^{g/2} - e^{-g/2}.
    MagicSeries {
        #[arg(long, default_value_t = 15)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormat {
    Csv,
    Record,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::CheckD2 { .. } => "check-d2",
            Cmd::CheckGrading { .. } => "check-grading",
            Cmd::AugSystem { .. } => "aug-system",
            Cmd::AugPoly { .. } => "aug-poly",
            Cmd::VerifyTrefoil { .. } => "verify-trefoil",
            Cmd::Classical { .. } => "classical",
            Cmd::FrameOp { .. } => "frame-op",
            Cmd::Act { .. } => "act",
            Cmd::Recursion { .. } => "recursion",
            Cmd::FrameWf { .. } => "frame-wf",
            Cmd::Trace { .. } => "trace",
            Cmd::Gf { .. } => "gf",
            Cmd::MagicSeries { .. } => "magic-series",
        }
    }

    fn inputs(&self) -> Vec<&Path> {
        match self {
            Cmd::CheckD2 { algebra }
            | Cmd::CheckGrading { algebra }
            | Cmd::AugSystem { algebra, .. }
            | Cmd::VerifyTrefoil { algebra } => vec![algebra],
            Cmd::AugPoly { algebra, compare, .. } => {
                let mut v: Vec<&Path> = vec![algebra];
                v.extend(compare.as_deref());
                v
            }
            Cmd::Classical { operator } | Cmd::FrameOp { operator, .. } | Cmd::Recursion { operator, .. } => {
                vec![operator]
            }
            Cmd::Act {
                operator, wavefunction, ..
            } => vec![operator, wavefunction],
            Cmd::FrameWf { wavefunction, .. } => vec![wavefunction],
            Cmd::Trace { polynomial, .. } => vec![polynomial],
            Cmd::Gf { catalog, .. } => vec![catalog],
            Cmd::MagicSeries { .. } => vec![],
        }
    }
}

/// A failed command: `Fail` for mathematical outcomes, `Error` for input.
struct Failure(Status, Value);

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure(Status::Error, json!({ "error": e.to_string() }))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

/// SHA-256 over the arguments and the bytes of every input file.
fn digest(args: &[String], inputs: &[&Path]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for p in inputs {
        h.update(b"\x1ffile\x1f");
        if let Ok(bytes) = std::fs::read(p) {
            h.update(&bytes);
        }
    }
    hex::encode(h.finalize())
}

/// Runs one invocation; `argv` excludes the program name. Returns the exit
/// code and everything that goes to standard output.
pub fn run_command(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(std::iter::once("kch".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let rec = ResultRecord {
                command: argv.first().cloned().unwrap_or_default(),
                inputs_digest: digest(argv, &[]),
                payload: json!({ "error": e.render().to_string().trim_end() }),
                status: Status::Error,
                tool_version: TOOL_VERSION.into(),
            };
            return (2, rec.to_line() + "\n");
        }
    };
    let digest = digest(argv, &cli.cmd.inputs());
    let record = |status: Status, payload: Value| ResultRecord {
        command: cli.cmd.name().into(),
        inputs_digest: digest.clone(),
        payload,
        status,
        tool_version: TOOL_VERSION.into(),
    };
    let outcome = match &cli.cmd {
        Cmd::Trace {
            polynomial,
            q,
            seed_mu,
            steps,
            tolerance,
            x_start,
            x_end,
            format,
        } => match trace(polynomial, *q, *seed_mu, *steps, *tolerance, *x_start, *x_end) {
            Ok((status, _, csv)) if *format == TraceFormat::Csv => return (status.exit_code(), csv),
            Ok((status, mut payload, csv)) => {
                payload["csv"] = Value::String(csv);
                Ok((status, payload))
            }
            Err(f) => Err(f),
        },
        cmd => dispatch(cmd),
    };
    let rec = match outcome {
        Ok((status, payload)) => record(status, payload),
        Err(Failure(status, payload)) => record(status, payload),
    };
    (rec.status.exit_code(), rec.to_line() + "\n")
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Fail
    }
}

fn dispatch(cmd: &Cmd) -> Result<(Status, Value), Failure> {
    match cmd {
        Cmd::CheckD2 { algebra } => {
            let a = parse_algebra_file(&read(algebra)?).map_err(input_err)?;
            let rep = a.check_d_squared();
            let failures: Vec<Value> = rep
                .failures
                .iter()
                .map(|(g, r)| json!({ "generator": g, "residual": r.to_string() }))
                .collect();
            let report = if rep.passed() {
                "all generators pass".to_string()
            } else {
                format!("d^2 != 0 on {} generator(s)", failures.len())
            };
            Ok((
                verdict(rep.passed()),
                json!({ "algebra": a.name(), "failures": failures, "generators": a.generators().len(), "report": report }),
            ))
        }
        Cmd::CheckGrading { algebra } => {
            let a = parse_algebra_file(&read(algebra)?).map_err(input_err)?;
            let rep = a.check_grading();
            let violations: Vec<Value> = rep
                .violations
                .iter()
                .map(|v| {
                    json!({ "expected": v.expected, "generator": v.generator, "word": v.word, "word_degree": v.word_degree })
                })
                .collect();
            let report = if rep.passed() {
                "all generators pass".to_string()
            } else {
                format!("{} grading violation(s)", violations.len())
            };
            Ok((
                verdict(rep.passed()),
                json!({ "algebra": a.name(), "report": report, "violations": violations }),
            ))
        }
        Cmd::AugSystem { algebra, subset } => {
            let a = parse_algebra_file(&read(algebra)?).map_err(input_err)?;
            let sys = augmentation_system(&a, subset.as_deref()).map_err(input_err)?;
            let eqs: Vec<Value> = sys
                .equations
                .iter()
                .map(|(l, p)| json!({ "label": l, "polynomial": p.to_string() }))
                .collect();
            Ok((
                Status::Ok,
                json!({ "equations": eqs, "unknowns": sys.unknowns(), "variables": sys.vars.names() }),
            ))
        }
        Cmd::AugPoly {
            algebra,
            subset,
            compare: cmp,
        } => {
            let a = parse_algebra_file(&read(algebra)?).map_err(input_err)?;
            let displayed = match cmp {
                Some(p) => Some(parse_polynomial(&read(p)?, &VarSet::augmentation()).map_err(input_err)?),
                None => None,
            };
            let sys = augmentation_system(&a, subset.as_deref()).map_err(input_err)?;
            let ideal = PolyIdeal::from_system(&sys).map_err(input_err)?;
            let elim = ideal.eliminate().map_err(input_err)?;
            let polys: Vec<String> = elim.polys.iter().map(|p| p.to_string()).collect();
            let mut payload = json!({
                "basis_size": elim.basis.len(),
                "chords": sys.chords,
                "normalization": "integer-primitive, minimal exponents 0, positive leading coefficient",
                "polynomials": polys,
            });
            let mut status = Status::Ok;
            if let Some(d) = displayed {
                let computed = match elim.polys.as_slice() {
                    [one] => one.poly.clone(),
                    _ => {
                        return Ok((
                            Status::Fail,
                            json!({ "error": format!("elimination produced {} polynomials; expected one to compare", polys.len()), "polynomials": polys }),
                        ))
                    }
                };
                let c = compare(&computed, &d).map_err(input_err)?;
                status = verdict(c.equal());
                payload["comparison"] = json!({
                    "computed": c.computed.to_string(),
                    "difference": c.difference.to_string(),
                    "displayed": c.displayed.to_string(),
                    "equal": c.equal(),
                    "matches_under": c.matches_under,
                });
            }
            Ok((status, payload))
        }
        Cmd::VerifyTrefoil { algebra } => {
            let a = parse_algebra_file(&read(algebra)?).map_err(input_err)?;
            let rep = verify_trefoil_combination(&a).map_err(input_err)?;
            Ok((
                verdict(rep.passed()),
                json!({
                    "combination": rep.combination.to_string(),
                    "difference": rep.difference.to_string(),
                    "expansion": rep.expansion.to_string(),
                    "passed": rep.passed(),
                }),
            ))
        }
        Cmd::Classical { operator } => {
            let op = parse_operator_file(&read(operator)?).map_err(input_err)?;
            let c = op.classical().map_err(input_err)?;
            Ok((Status::Ok, json!({ "classical": c.to_string(), "operator": op.to_string() })))
        }
        Cmd::FrameOp { operator, r } => {
            let op = parse_operator_file(&read(operator)?).map_err(input_err)?;
            Ok((Status::Ok, json!({ "operator": op.frame(*r).to_string(), "r": r })))
        }
        Cmd::Act {
            operator,
            wavefunction,
            modes,
        } => {
            let op = parse_operator_file(&read(operator)?).map_err(input_err)?;
            let psi = parse_wavefunction(&read(wavefunction)?).map_err(input_err)?;
            let k_max = modes.or(psi.max_mode()).unwrap_or(0);
            let out = act(&op, &psi, k_max);
            let range = checkable_modes(&op, &psi);
            let zero = range
                .clone()
                .is_none_or(|r| r.filter(|&k| k <= k_max).all(|k| out[k].is_zero()));
            let strings: Vec<String> = out.iter().map(|c| c.to_string()).collect();
            Ok((
                verdict(zero),
                json!({
                    "checkable_modes": range.map(|r| vec![*r.start(), *r.end()]),
                    "modes": strings,
                    "zero_on_checkable_modes": zero,
                }),
            ))
        }
        Cmd::Recursion { operator, modes, seed } => {
            let op = parse_operator_file(&read(operator)?).map_err(input_err)?;
            let vars = VarSet::quantum();
            let mut seeds = vec![RatFunc::one(&vars)];
            for s in seed {
                seeds.push(parse_ratfunc(s, &vars).map_err(input_err)?);
            }
            match solve_recursion_seeded(&op, &seeds, *modes) {
                Ok(psi) => {
                    let h: Vec<String> = psi.coeffs().iter().map(|c| c.to_string()).collect();
                    Ok((Status::Ok, json!({ "H": h, "modes": modes })))
                }
                Err(e) => Err(Failure(Status::Fail, json!({ "error": e.to_string() }))),
            }
        }
        Cmd::FrameWf { wavefunction, r } => {
            let psi = parse_wavefunction(&read(wavefunction)?).map_err(input_err)?;
            let h: Vec<String> = frame_wavefunction(&psi, *r).coeffs().iter().map(|c| c.to_string()).collect();
            Ok((Status::Ok, json!({ "H": h, "r": r })))
        }
        Cmd::Gf { catalog, max_vertices } => {
            let cat = CurveCatalog::parse(&read(catalog)?).map_err(input_err)?;
            let terms = potential_truncated(&cat, *max_vertices).map_err(input_err)?;
            let terms: Vec<Value> = terms
                .iter()
                .map(|t| json!({ "chi": t.chi, "coefficient": t.coefficient.to_string(), "k": t.k, "m": t.m }))
                .collect();
            Ok((
                Status::Ok,
                json!({
                    "graphs": "connected simple graphs",
                    "max_vertices": max_vertices,
                    "symmetry_factor": "1/|Aut|",
                    "terms": terms,
                }),
            ))
        }
        Cmd::MagicSeries { order } => {
            let series = resolution_weight_series(*order).map_err(input_err)?;
            let expected = magic_factor(*order);
            let matches = series == expected;
            let show = |p: &PowerSeries| p.coeffs().iter().map(crate::ring::fmt_rational).collect::<Vec<_>>();
            Ok((
                verdict(matches),
                json!({ "expected": show(&expected), "matches": matches, "order": order, "rendered": series.to_string(), "series": show(&series) }),
            ))
        }
        Cmd::Trace { .. } => unreachable!("handled by run_command"),
    }
}

/// `e^{g/2} - e^{-g/2}` truncated at `order`.
pub fn magic_factor(order: usize) -> PowerSeries {
    let half = crate::ring::ratio(1, 2);
    let plus = PowerSeries::linear(order, half.clone()).exp().expect("no constant term");
    let minus = PowerSeries::linear(order, -half).exp().expect("no constant term");
    plus.sub(&minus).expect("same order")
}

fn trace(
    polynomial: &Path,
    q: Complex64,
    seed_mu: Complex64,
    steps: usize,
    tolerance: f64,
    x_start: f64,
    x_end: f64,
) -> Result<(Status, Value, String), Failure> {
    use crate::diskpot::DiskError;
    let aug = parse_polynomial(&read(polynomial)?, &VarSet::augmentation()).map_err(input_err)?;
    let fail = |e: DiskError| match e {
        DiskError::BranchPoint { .. } => Failure(Status::Fail, json!({ "error": e.to_string() })),
        _ => input_err(e),
    };
    let path = trace_branch(&aug, q, x_start, seed_mu, x_end, steps, &TraceConfig::default()).map_err(fail)?;
    let table = disk_potential(&path).map_err(fail)?;
    let grad = check_gradient(&path, &table).map_err(fail)?;
    let ok = grad.max_deviation < tolerance;
    let payload = json!({
        "error_estimate": table.error_estimate,
        "gradient_max_deviation": grad.max_deviation,
        "gradient_max_at_x": grad.x,
        "rule": table.rule,
        "samples": path.samples.len(),
        "tolerance": tolerance,
    });
    Ok((verdict(ok), payload, to_csv(&path, &table)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        run_command(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    }

    #[test]
    fn magic_series_passes() {
        let (code, out) = run(&["magic-series", "--order", "7"]);
        assert_eq!(code, 0);
        let rec = ResultRecord::from_line(out.trim()).unwrap();
        assert_eq!(rec.status, Status::Ok);
        assert_eq!(rec.payload["series"][3], "1/24");
        assert_eq!(rec.to_line(), out.trim());
    }

    #[test]
    fn bad_arguments_exit_two() {
        let (code, out) = run(&["no-such-command"]);
        assert_eq!(code, 2);
        assert_eq!(ResultRecord::from_line(out.trim()).unwrap().status, Status::Error);
        let (code, _) = run(&["check-d2", "/nonexistent/file.alg"]);
        assert_eq!(code, 2);
        let (code, _) = run(&["magic-series", "--order", "0"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("recursion"));
    }

    #[test]
    fn keys_are_sorted() {
        let (_, out) = run(&["magic-series", "--order", "3"]);
        let keys: Vec<&str> = ["\"command\"", "\"inputs_digest\"", "\"payload\"", "\"status\"", "\"tool_version\""]
            .into_iter()
            .collect();
        let pos: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let p = out.find("\"expected\"").unwrap();
        assert!(p < out.find("\"matches\"").unwrap());
    }
}
