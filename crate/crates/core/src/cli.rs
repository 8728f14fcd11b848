//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 verification failure or unexpected solution,
//! 2 usage or domain error, 3 factorization budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::arith::{Effort, Integer, DEFAULT_SEED};
use crate::equation::consecutive_square_sum;
use crate::filters;
use crate::lehmer::{self, LehmerError, QuadIntM105};
use crate::par;
use crate::pell;
use crate::pipeline::{self, VerifyConfig};
use crate::search::{self, SearchBox};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "sqsum", version, about = "Solve (x+1)^2 + ... + (x+d)^2 = y^n for 2 <= d <= 10")]
pub struct Cli {
    /// Emit JSON on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized factorization.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Rho iterations allowed per factorization.
    #[arg(long, global = true, default_value_t = Effort::default().rho_steps)]
    pub budget: u64,
    /// Worker threads for search and scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print (x+1)^2 + ... + (x+d)^2.
    Sum {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: Integer,
    },
    /// Exhaustive search for solutions inside a box.
    Search {
        #[arg(long, default_value_t = 2)]
        d_min: u32,
        #[arg(long, default_value_t = 10)]
        d_max: u32,
        #[arg(long)]
        x_bound: u64,
        #[arg(long)]
        n_max: u32,
    },
    /// Run the elimination filters on one (d, n).
    Filter {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=10))]
        d: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
    /// Members of the d = 2, n = 2 family.
    Pell(PellArgs),
    /// Lehmer sequence tools for d = 6.
    #[command(subcommand)]
    Lehmer(LehmerCommand),
    /// Full verification over a box.
    Verify {
        #[arg(long)]
        x_bound: u64,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = pipeline::DEFAULT_SCAN_U_BOUND)]
        scan_u_bound: u64,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PellArgs {
    /// First K members, alternating branches.
    #[arg(long)]
    count: Option<usize>,
    /// All members with |x| <= N.
    #[arg(long)]
    x_bound: Option<Integer>,
}

#[derive(Debug, Subcommand)]
pub enum LehmerCommand {
    /// Terms and primitive divisors for the pair built from u + √-105.
    Seq {
        #[arg(long, allow_hyphen_values = true)]
        u: Integer,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        p: u32,
    },
    /// Scan admissible u for ũ_p = ±1.
    Scan {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        u_bound: u64,
    },
    /// Integer roots of T_p(u) = ±6^((p-1)/2) for p = 3, 5.
    Poly {
        #[arg(long)]
        p: u32,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let threads = cli.threads;
    match par::with_threads(threads, || execute(&cli)) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.stdout.as_bytes());
            let _ = err.write_all(outcome.stderr.as_bytes());
            outcome.code
        }
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Outcome {
    stdout: String,
    stderr: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

type CmdResult = Result<Outcome, (u8, String)>;

fn usage(e: impl std::fmt::Display) -> (u8, String) {
    (EXIT_USAGE, e.to_string())
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn execute(cli: &Cli) -> CmdResult {
    let effort = Effort { rho_steps: cli.budget, seed: cli.seed };
    match &cli.command {
        Command::Sum { d, x } => {
            let s = consecutive_square_sum(*d, x);
            Ok(Outcome::ok(if cli.json {
                to_json(&json!({ "d": d, "x": x.to_string(), "sum": s.to_string() }))
            } else {
                format!("{s}\n")
            }))
        }
        Command::Search { d_min, d_max, x_bound, n_max } => {
            let b = SearchBox::new(*d_min, *d_max, *x_bound, *n_max).map_err(usage)?;
            let found = search::brute_force(&b);
            let expected = pipeline::expected_solutions(&b);
            let diff = search::cross_check(&found, &expected);
            let mut stdout = Vec::new();
            if cli.json {
                search::write_json_lines(&found, &mut stdout).map_err(usage)?;
            } else {
                for s in &found {
                    writeln!(stdout, "{s}").expect("in-memory write");
                }
            }
            let unexpected: Vec<String> = diff.unexpected().map(|s| format!("unexpected solution {s}\n")).collect();
            Ok(Outcome {
                stdout: String::from_utf8(stdout).expect("utf-8"),
                code: if unexpected.is_empty() { EXIT_OK } else { EXIT_FAIL },
                stderr: unexpected.concat(),
            })
        }
        Command::Filter { d, n } => {
            let cert = filters::eliminate(*d, *n);
            Ok(Outcome::ok(match (&cert, cli.json) {
                (Some(c), true) => to_json(c),
                (None, true) => to_json(&json!({ "d": d, "n": n, "certificate": null })),
                (Some(c), false) => format!(
                    "d={d} n={n}: eliminated by {} {}\nscope: {}\nre-verified: {}\n",
                    c.witness.name(),
                    serde_json::to_string(&c.witness).expect("serializable"),
                    c.exponent_scope,
                    filters::verify(c)
                ),
                (None, false) => format!("d={d} n={n}: no filter applies\n"),
            }))
        }
        Command::Pell(args) => {
            let members = match (args.count, &args.x_bound) {
                (Some(k), _) => pell::first_members(k),
                (None, Some(b)) => pell::enumerate_in_range(b),
                (None, None) => unreachable!("clap enforces the group"),
            };
            Ok(Outcome::ok(if cli.json {
                to_json(&members)
            } else {
                members
                    .iter()
                    .map(|m| {
                        let sign = if m.sign > 0 { '+' } else { '-' };
                        format!("r={} sign={} x={} y={}\n", m.r, sign, m.x, m.y)
                    })
                    .collect()
            }))
        }
        Command::Lehmer(cmd) => lehmer_command(cmd, cli.json, effort),
        Command::Verify { x_bound, n_max, scan_u_bound, out } => {
            let cfg = VerifyConfig { x_bound: *x_bound, n_max: *n_max, scan_u_bound: *scan_u_bound };
            let report = pipeline::verify(&cfg).map_err(usage)?;
            let json = report.to_json() + "\n";
            if let Some(path) = out {
                fs::write(path, &json).map_err(|e| (EXIT_FAIL, format!("{}: {e}", path.display())))?;
            }
            Ok(Outcome {
                stdout: if cli.json { json } else { format!("{report}\n") },
                stderr: String::new(),
                code: if report.passed() { EXIT_OK } else { EXIT_FAIL },
            })
        }
    }
}

fn join(values: &[Integer]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn lehmer_command(cmd: &LehmerCommand, as_json: bool, effort: Effort) -> CmdResult {
    match cmd {
        LehmerCommand::Seq { u, p } => {
            let pair = lehmer::gamma_to_pair(&QuadIntM105::new(u.clone(), 1)).map_err(usage)?;
            let valid = lehmer::is_valid_lehmer_pair(&pair);
            let terms = lehmer::lehmer_terms(&pair, *p);
            let divisors = if valid {
                match lehmer::primitive_divisors(&pair, *p, effort) {
                    Ok(ds) => Some(ds),
                    Err(e @ LehmerError::Indeterminate { .. }) => return Err((EXIT_BUDGET, e.to_string())),
                    Err(e) => return Err(usage(e)),
                }
            } else {
                None
            };
            let stdout = if as_json {
                to_json(&json!({
                    "pair": pair,
                    "valid": valid,
                    "terms": terms.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "primitive_divisors": divisors.as_ref().map(|ds| ds.iter().map(ToString::to_string).collect::<Vec<_>>()),
                }))
            } else {
                let mut s = format!("R={} Q={} valid={valid}\n", pair.r, pair.q);
                for (m, t) in terms.iter().enumerate().skip(1) {
                    s += &format!("u_{m} = {t}\n");
                }
                match &divisors {
                    Some(ds) if ds.is_empty() => s += &format!("u_{p} has no primitive divisor ({p}-defective)\n"),
                    Some(ds) => s += &format!("primitive divisors of u_{p}: {}\n", join(ds)),
                    None => s += "not a Lehmer pair; primitive divisors undefined\n",
                }
                s
            };
            Ok(Outcome::ok(stdout))
        }
        LehmerCommand::Scan { p, u_bound } => {
            let report = lehmer::defect_scan(*p, *u_bound).map_err(usage)?;
            let code = if report.violations.is_empty() { EXIT_OK } else { EXIT_FAIL };
            let stdout = if as_json {
                to_json(&report)
            } else {
                format!(
                    "p={} |u|<={}: {} admissible u scanned, violations: [{}]\n",
                    report.p,
                    report.u_bound,
                    report.scanned,
                    join(&report.violations)
                )
            };
            Ok(Outcome { stdout, stderr: String::new(), code })
        }
        LehmerCommand::Poly { p } => {
            let report = lehmer::small_prime_poly_check(*p).map_err(usage)?;
            let code = if report.has_no_roots() { EXIT_OK } else { EXIT_FAIL };
            let stdout = if as_json {
                to_json(&report)
            } else {
                let six_pow = &report.targets[0];
                let mut s = format!("T_{p}(u) = {}; targets ±{six_pow}\n", format_poly(&report.polynomial));
                let mut ws: Vec<Integer> =
                    report.analyses.iter().flat_map(|a| a.w_solutions.iter().cloned()).collect();
                ws.sort();
                let discs: Vec<Integer> =
                    report.analyses.iter().filter_map(|a| a.discriminant.clone()).collect();
                let roots = if report.integer_roots.is_empty() {
                    "no integer roots".to_string()
                } else {
                    format!("integer roots {}", join(&report.integer_roots))
                };
                if discs.is_empty() {
                    s += &format!("u² ∈ {{{}}}: {roots}\n", join(&ws));
                } else {
                    let mut sorted = discs.clone();
                    sorted.sort();
                    if ws.is_empty() {
                        s += &format!(
                            "discriminants {{{}}} of the quadratic in u² are not squares: {roots}\n",
                            join(&sorted)
                        );
                    } else {
                        s += &format!(
                            "discriminants {{{}}}, u² ∈ {{{}}}: {roots}\n",
                            join(&sorted),
                            join(&ws)
                        );
                    }
                }
                s += &format!(
                    "scan |u| <= {}: {} hits\n",
                    report.scan_bound,
                    report.scan_hits.len()
                );
                s
            };
            Ok(Outcome { stdout, stderr: String::new(), code })
        }
    }
}

fn format_poly(coeffs: &[Integer]) -> String {
    use num_traits::{Signed, Zero};
    let mut s = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s += &format!(" {sign} ");
        }
        let mag = c.abs();
        match k {
            0 => s += &mag.to_string(),
            1 => s += &format!("{mag}u"),
            _ => s += &format!("{mag}u^{k}"),
        }
    }
    s
}
