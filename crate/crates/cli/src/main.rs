//! `normrec`: norm form equations, multi-recurrences and their intersections.

mod problem;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use normrec::intersect::{detect_exception, detect_reduced_exception, DetectConfig};
use normrec::normform::{build_component_recurrences, solve_bruteforce_with, SolveMode};
use normrec::numberfield::{SplittingContainer, DEFAULT_MAX_SPLITTING_DEGREE};
use normrec::uniteq::{count_within_ess_bound, degenerate_cascade, ess_bound, solve_unit_equation, GroupSpec};

use problem::{element, ProblemFile};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or invalid input: exit code 2.
    Input(String),
    /// Valid input beyond what the implementation handles: exit code 3.
    Capability(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Capability(m) => f.write_str(m),
        }
    }
}

impl From<normrec::Error> for CliError {
    fn from(e: normrec::Error) -> Self {
        if e.is_capability() {
            CliError::Capability(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "normrec", version, about = "Norm form equations and multi-recurrences")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fast,
    Exhaustive,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solutions of the norm form equation in a box.
    Solve {
        file: PathBuf,
        #[arg(long = "box")]
        bound: i64,
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
    },
    /// Component recurrences for one coordinate (one based).
    Recurrences {
        file: PathBuf,
        #[arg(long)]
        component: usize,
        /// Coefficient box for norm-m representatives.
        #[arg(long, default_value_t = 10)]
        rep_bound: i64,
    },
    /// Coincidences with the recurrence, as a certificate or a report.
    Intersect { file: PathBuf },
    /// The exponent `E = (6n)^{3n}(r+1)`.
    Essbound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Zero structure of a one-variable recurrence.
    Smlzeros {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        bound: i64,
    },
    /// Solutions of the unit equation in the `[uniteq]` table.
    Uniteq {
        file: PathBuf,
        #[arg(long)]
        expo_bound: Option<i64>,
    },
    /// The file in canonical form.
    Canonical { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("documents serialize");
            // a closed pipe is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Input(_) => 2,
                CliError::Capability(_) => 3,
            })
        }
    }
}

fn load(path: &Path) -> Result<(ProblemFile, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file = ProblemFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let canonical = file.canonical()?.to_toml();
    let hash = Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    Ok((file, hash))
}

fn run(cmd: Cmd) -> Result<Value, CliError> {
    match cmd {
        Cmd::Solve { file, bound, mode } => {
            let (f, hash) = load(&file)?;
            let k = f.number_field()?;
            let p = f.problem(&k)?;
            if bound < 0 {
                return Err(CliError::Input("--box must be nonnegative".into()));
            }
            let mode = match mode {
                Mode::Fast => SolveMode::Fast,
                Mode::Exhaustive => SolveMode::Exhaustive,
            };
            let sols = solve_bruteforce_with(&p, bound, mode);
            Ok(json!({
                "command": "solve",
                "problem_hash": hash,
                "box": bound,
                "count": sols.len(),
                "solutions": sols.iter().map(|x| x.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }))
        }
        Cmd::Recurrences { file, component, rep_bound } => {
            let (f, hash) = load(&file)?;
            let k = f.number_field()?;
            let p = f.problem(&k)?;
            if component == 0 || component > p.n() {
                return Err(CliError::Input(format!("component {component} out of range 1..={}", p.n())));
            }
            let cap = f.search().max_splitting_degree.unwrap_or(DEFAULT_MAX_SPLITTING_DEGREE);
            let sc = SplittingContainer::with_cap(&k, cap)?;
            let recs = build_component_recurrences(&p, component - 1, &sc, rep_bound)?;
            Ok(json!({
                "command": "recurrences",
                "problem_hash": hash,
                "component": component,
                "ambient_field": report::field(&sc.ambient),
                "recurrences": recs.iter().map(report::component).collect::<Vec<_>>(),
            }))
        }
        Cmd::Intersect { file } => {
            let (f, hash) = load(&file)?;
            let k = f.number_field()?;
            let p = f.problem(&k)?;
            let g = f.recurrence(&k)?;
            let s = f.search();
            let d = DetectConfig::default();
            let cfg = DetectConfig {
                k_box: s.k_box.unwrap_or(d.k_box),
                h_box: s.h_box.unwrap_or(d.h_box),
                rep_bound: s.coeff_bound.unwrap_or(d.rep_bound),
                structure_threshold: s.structure_threshold.unwrap_or(d.structure_threshold),
                max_splitting_degree: s.max_splitting_degree.unwrap_or(d.max_splitting_degree),
                sml_bound: s.sml_bound.unwrap_or(d.sml_bound),
                ..d
            };
            let component = s.component.unwrap_or(1);
            if component == 0 || component > p.n() {
                return Err(CliError::Input(format!("search.component {component} out of range 1..={}", p.n())));
            }
            let l = component - 1;
            let result = if g.vars() == 1 { detect_reduced_exception(&p, l, &g, &cfg) } else { detect_exception(&p, l, &g, &cfg) };
            let mut doc = match result {
                Ok(det) => report::detection(&det),
                Err(normrec::Error::NonIntegerBase(b)) => json!({
                    "classification": "hypothesis-violation: non-integer base",
                    "notes": [format!("base {b} is not an algebraic integer")],
                }),
                Err(e) => return Err(e.into()),
            };
            doc["command"] = json!("intersect");
            doc["problem_hash"] = json!(hash);
            doc["component"] = json!(component);
            doc["G"] = report::recurrence(&g);
            Ok(doc)
        }
        Cmd::Essbound { n, r } => {
            if n == 0 {
                return Err(CliError::Input("n must be at least 1".into()));
            }
            let e = ess_bound(n, r);
            Ok(json!({ "command": "essbound", "n": n, "r": r, "E": e.to_string(), "bound": format!("exp({e})") }))
        }
        Cmd::Smlzeros { file, bound } => {
            let (f, hash) = load(&file)?;
            let k = f.number_field()?;
            let g = f.recurrence(&k)?;
            let z = g.sml_zero_structure(bound)?;
            let mut doc = report::zero_structure(&z);
            doc["command"] = json!("smlzeros");
            doc["problem_hash"] = json!(hash);
            doc["G"] = report::recurrence(&g);
            Ok(doc)
        }
        Cmd::Uniteq { file, expo_bound } => {
            let (f, hash) = load(&file)?;
            let k = f.number_field()?;
            let spec = f.uniteq.as_ref().ok_or_else(|| CliError::Input("uniteq: missing".into()))?;
            let a = spec.a.iter().enumerate().map(|(i, c)| element(&k, c, &format!("uniteq.a[{i}]"))).collect::<Result<Vec<_>, _>>()?;
            let mut gens = Vec::new();
            for (i, g) in spec.generators.iter().enumerate() {
                let v = g.iter().enumerate().map(|(j, c)| element(&k, c, &format!("uniteq.generators[{i}][{j}]"))).collect::<Result<Vec<_>, _>>()?;
                gens.push(v);
            }
            let grp = GroupSpec::new(a.len(), gens, spec.rank)?;
            let bound = expo_bound.or(f.search().expo_bound).unwrap_or(4);
            let sols = solve_unit_equation(&a, &grp, bound)?;
            let ys: Vec<_> = sols.iter().map(|s| s.y.clone()).collect();
            let cascade = degenerate_cascade(&a, &ys)?;
            let e = ess_bound(a.len() as u32, grp.rank() as u32);
            let nondeg = sols.iter().filter(|s| !s.degenerate).count();
            Ok(json!({
                "command": "uniteq",
                "problem_hash": hash,
                "expo_bound": bound,
                "count": sols.len(),
                "non_degenerate": nondeg,
                "ess_exponent": e.to_string(),
                "within_ess_bound": count_within_ess_bound(nondeg as u64, &e),
                "solutions": report::unit_solutions(&sols, &cascade),
            }))
        }
        Cmd::Canonical { file } => {
            let (f, hash) = load(&file)?;
            Ok(json!({ "command": "canonical", "problem_hash": hash, "toml": f.canonical()?.to_toml() }))
        }
    }
}
