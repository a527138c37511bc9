//! Command-line front end. Exit codes: 0 when the property holds, 1 when it
//! does not, 2 on usage, parse, or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog;
use crate::construction::{delta_bound, truncate, verify_identities, Params};
use crate::dimension::{
    check_witness, dimension_at, dimension_pairs, dimension_profile, profile_stats, FiniteOracle,
};
use crate::error::ConstructionError;
use crate::fold::wavelet_verdict;
use crate::io::{self, Meta, REPORT_DIGITS};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Parser, Debug)]
#[command(
    name = "wavedim",
    version,
    about = "Exact MSF wavelet sets and their dimension functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a depth-J truncation of W(n, ε) and write it to a file.
    Construct {
        #[arg(long)]
        n: u32,
        /// ε/π as a rational p/q.
        #[arg(long = "eps-ratio", value_parser = parse_ratio)]
        eps_ratio: Rational,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether a stored set is a wavelet set.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the dimension function at one point (in units of π).
    Dim {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Write the dimension function on [−π, π) as CSV.
    Profile {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the witness interval where D exceeds n.
    Witness {
        #[arg(long)]
        n: u32,
        #[arg(long = "eps-ratio", value_parser = parse_ratio)]
        eps_ratio: Rational,
    },
    /// Check the finite identities behind the construction.
    Identities {
        #[arg(long)]
        n: u32,
        #[arg(long = "eps-ratio", value_parser = parse_ratio)]
        eps_ratio: Rational,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Write a reference set.
    Catalog {
        name: CatalogName,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogName {
    Shannon,
    Journe,
}

fn parse_ratio(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Usage-level failure: message for the error stream, exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn params(n: u32, eps_ratio: Rational) -> Result<Params, Usage> {
    Params::new(n, eps_ratio).map_err(|e| match e {
        ConstructionError::EpsOutOfRange { eps, delta } => {
            Usage(format!("eps exceeds delta = {delta}·π (eps = {eps}·π)"))
        }
        other => Usage(other.to_string()),
    })
}

fn load(file: &std::path::Path) -> Result<io::Loaded, Usage> {
    io::load(file).map_err(|e| Usage(format!("{}: {e}", file.display())))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Usage> {
    match cmd {
        Command::Construct {
            n,
            eps_ratio,
            depth,
            out: path,
        } => {
            let p = params(n, eps_ratio)?;
            let t = truncate(&p, depth);
            io::save_truncated(&path, &t)?;
            let b = p.binding();
            writeln!(
                out,
                "n = {n}, eps = {}·π, delta = {}·π, depth = {depth}",
                format_rational(p.eps_ratio()),
                delta_bound(n).pi_coef()
            )?;
            writeln!(out, "intervals: {}", t.set.len())?;
            writeln!(out, "measure: {}", t.set.measure())?;
            writeln!(
                out,
                "excess_measure: {} = {}",
                t.excess_measure,
                t.excess_measure.to_decimal(b, REPORT_DIGITS)
            )?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(0)
        }
        Command::Verify { file, json } => {
            let loaded = load(&file)?;
            let v = wavelet_verdict(&loaded.set);
            if json {
                out.write_all(io::verdict_document(&v).as_bytes())?;
            } else {
                let b = loaded.set.binding();
                if loaded.non_canonical {
                    writeln!(
                        out,
                        "warning: input was not canonical and has been re-normalized"
                    )?;
                }
                writeln!(out, "measure: {}", loaded.set.measure())?;
                for (name, r) in v.reports() {
                    let status = match r.failure_reason {
                        Some(f) => format!("failed ({f:?})"),
                        None if r.is_exact() => "exact".to_string(),
                        None => "defective".to_string(),
                    };
                    writeln!(
                        out,
                        "{name}: {status}; gap {} = {}; overlap {} = {}",
                        r.gap_measure,
                        r.gap_measure.to_decimal(b, REPORT_DIGITS),
                        r.overlap_measure,
                        r.overlap_measure.to_decimal(b, REPORT_DIGITS)
                    )?;
                }
                writeln!(out, "wavelet set: {}", yes(v.is_wavelet_set))?;
            }
            Ok(if v.is_wavelet_set { 0 } else { 1 })
        }
        Command::Dim { file, xi } => {
            let loaded = load(&file)?;
            let xi: Scalar = xi.parse()?;
            if !loaded.set.binding().admits(&xi) {
                return Err(Usage("xi mentions eps but the set has no eps ratio".into()));
            }
            let o = FiniteOracle::new(&loaded.set);
            let pairs = dimension_pairs(&o, &xi);
            let list: Vec<String> = pairs.iter().map(|(j, k)| format!("({j},{k})")).collect();
            writeln!(out, "D({xi}) = {}", dimension_at(&o, &xi))?;
            writeln!(out, "pairs: {}", list.join(","))?;
            Ok(0)
        }
        Command::Profile {
            file,
            out: csv,
            svg,
        } => {
            let loaded = load(&file)?;
            let prof = dimension_profile(&loaded.set)?;
            fs::write(&csv, prof.to_csv(REPORT_DIGITS))?;
            if let Some(svg) = &svg {
                fs::write(svg, prof.to_svg())?;
            }
            let st = profile_stats(&prof);
            writeln!(out, "pieces: {}", prof.values.len())?;
            writeln!(out, "max: {}", st.max)?;
            writeln!(
                out,
                "integral: {} = {}",
                st.integral,
                st.integral.to_decimal(&prof.binding, REPORT_DIGITS)
            )?;
            Ok(0)
        }
        Command::Witness { n, eps_ratio } => {
            let p = params(n, eps_ratio)?;
            let w = check_witness(&p);
            let list: Vec<String> = w
                .pairs
                .iter()
                .map(|((j, k), hit)| format!("({j},{k}){}", if *hit { "" } else { "!" }))
                .collect();
            writeln!(
                out,
                "xi: {} = {}",
                w.xi_sample,
                w.xi_sample.to_decimal(p.binding(), REPORT_DIGITS)
            )?;
            writeln!(out, "pairs: {}", list.join(","))?;
            writeln!(out, "dim: {}", w.dim)?;
            writeln!(out, "exceeds n = {n}: {}", yes(w.ok))?;
            Ok(if w.ok { 0 } else { 1 })
        }
        Command::Identities {
            n,
            eps_ratio,
            depth,
        } => {
            let p = params(n, eps_ratio)?;
            let r = verify_identities(&p, depth);
            for c in &r.checks {
                let tag = match (c.holds, c.informational) {
                    (true, _) => "ok  ",
                    (false, true) => "info",
                    (false, false) => "FAIL",
                };
                writeln!(out, "{tag} {}", c.name)?;
                if let (false, Some(d)) = (c.holds, &c.detail) {
                    writeln!(
                        out,
                        "     missing {}; extra {}; overlap mass {}",
                        d.missing, d.extra, d.overlap_mass
                    )?;
                }
            }
            writeln!(out, "all pass: {}", yes(r.all_pass()))?;
            Ok(if r.all_pass() { 0 } else { 1 })
        }
        Command::Catalog { name, out: path } => {
            let set = match name {
                CatalogName::Shannon => catalog::shannon(),
                CatalogName::Journe => catalog::journe(),
            };
            io::save(&path, &set, &Meta::default())?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(0)
        }
    }
}
