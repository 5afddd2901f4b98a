use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use certicone::bounds::BoundReport;
use certicone::certificates::{check_dual_infeasible, check_primal_infeasible, reverify, Verdict};
use certicone::equicut;
use certicone::io::text::format_hex;
use certicone::io::{self, SolutionFile};
use certicone::probgen::{self, Ray};
use certicone::{lower_bound, upper_bound, BoundKind, ConeSpec, ConicProblem, Error};

/// Rigorous bounds and infeasibility certificates for conic programs.
///
/// Output is one `key value` pair per line. Exit status: 0 when the result is
/// proved, 2 for a sound refusal (including infinite bounds), 1 for usage or
/// input errors. CERTICONE_THREADS caps the number of worker threads.
#[derive(Parser)]
#[command(name = "certicone", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rigorous lower bound from an approximate dual solution.
    Lower {
        /// Problem file (`.dat-s` files are read as SDPA).
        #[arg(long)]
        problem: PathBuf,
        /// Solution file with a `y` line.
        #[arg(long)]
        dual_approx: PathBuf,
        /// Solution file with `xbar` caps (default: caps in --dual-approx, else none).
        #[arg(long)]
        xbar: Option<PathBuf>,
    },
    /// Rigorous upper bound from an approximate primal solution.
    Upper {
        #[arg(long)]
        problem: PathBuf,
        /// Solution file with `x` lines.
        #[arg(long)]
        primal_approx: PathBuf,
        /// Solution file with a `ybar` line (default: caps in --primal-approx, else none).
        #[arg(long)]
        ybar: Option<PathBuf>,
    },
    /// Certify primal infeasibility from a dual ray (`y` line).
    CertifyPrimal {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        ray: PathBuf,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify dual infeasibility from a primal ray (`x` lines).
    CertifyDual {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        ray: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds on the minimum balanced bipartition of a graph.
    Equicut {
        #[arg(long)]
        graph: PathBuf,
        /// Solution file with a `y` line of length n + 1 for the relaxation.
        #[arg(long)]
        dual_approx: Option<PathBuf>,
        /// Also write the relaxation as a problem file.
        #[arg(long)]
        relaxation_out: Option<PathBuf>,
    },
    /// Generate an instance with known status.
    Gen {
        /// Cone structure, e.g. "sdp 3 | soc 4 | lin 5".
        #[arg(long)]
        spec: String,
        #[arg(long)]
        seed: u64,
        /// optimal, primal-infeasible or dual-infeasible.
        #[arg(long, default_value = "optimal")]
        kind: String,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a stored certificate.
    Check {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
}

const PROVED: u8 = 0;
const USAGE: u8 = 1;
const REFUSED: u8 = 2;

fn read(path: &Path) -> certicone::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_problem(path: &Path) -> certicone::Result<ConicProblem> {
    let src = read(path)?;
    let name = path.display().to_string();
    if name.ends_with(".dat-s") {
        io::parse_sdpa(&src, &name)
    } else {
        io::parse_problem(&src, &name)
    }
}

fn load_solution(path: &Path, p: &ConicProblem) -> certicone::Result<SolutionFile> {
    io::parse_solution(&read(path)?, &path.display().to_string(), p.spec(), p.m())
}

fn missing(path: &Path, what: &str) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line: 1,
        col: 1,
        msg: format!("no {what} in file"),
    }
}

/// Plain decimal where it is short, exponent form otherwise.
fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key} {value}");
}

fn report(out: &mut String, r: &BoundReport) {
    let (key, feas, proved) = match r.kind {
        BoundKind::Lower => ("lower_bound", "dual_feasible", r.dual_feasible_proved),
        BoundKind::Upper => ("upper_bound", "primal_feasible", r.primal_feasible_proved),
    };
    kv(out, key, num(r.value));
    kv(out, &format!("{key}_hex"), format_hex(r.value));
    kv(out, feas, if proved { "proved" } else { "unproved" });
    let d = &r.diagnostics;
    kv(out, "approx_value", num(d.approx_value));
    kv(out, "correction", num(d.correction));
    match r.kind {
        BoundKind::Lower => {
            kv(out, "d_minus_min", num(d.d_minus_min));
            kv(out, "neg_eig_count", d.neg_eig_count);
            kv(out, "min_eig_lower", num(d.min_eig_lower));
        }
        BoundKind::Upper => {
            kv(out, "residual_max", num(d.residual_max));
            kv(out, "shift", num(d.shift));
        }
    }
    kv(out, "input_max_width", num(d.input_max_width));
    if let Some(n) = &d.note {
        kv(out, "note", n);
    }
}

fn verdict(out: &mut String, v: &Verdict, dest: Option<&Path>) -> certicone::Result<u8> {
    match v {
        Verdict::Certified(c) => {
            kv(out, "verdict", "certified");
            kv(out, "kind", c.kind.as_str());
            for ch in &c.checks {
                kv(out, &ch.name, num(ch.value));
            }
            if let Some(path) = dest {
                fs::write(path, io::write_certificate(c))?;
                kv(out, "certificate", path.display());
            }
            Ok(PROVED)
        }
        Verdict::Refused(reason) => {
            kv(out, "verdict", "refused");
            kv(out, "reason", reason);
            Ok(REFUSED)
        }
    }
}

fn run(cmd: Cmd, out: &mut String) -> certicone::Result<u8> {
    match cmd {
        Cmd::Lower { problem, dual_approx, xbar } => {
            let p = load_problem(&problem)?;
            let s = load_solution(&dual_approx, &p)?;
            let y = s.y.ok_or_else(|| missing(&dual_approx, "`y` line"))?;
            let caps = match &xbar {
                Some(path) => Some(load_solution(path, &p)?.x_bar.ok_or_else(|| missing(path, "`xbar` line"))?),
                None => s.x_bar,
            };
            let r = lower_bound(&p, &y, caps.as_ref())?;
            report(out, &r);
            Ok(if r.value.is_finite() { PROVED } else { REFUSED })
        }
        Cmd::Upper { problem, primal_approx, ybar } => {
            let p = load_problem(&problem)?;
            let s = load_solution(&primal_approx, &p)?;
            let x = s.x.ok_or_else(|| missing(&primal_approx, "`x` line"))?;
            let caps = match &ybar {
                Some(path) => Some(load_solution(path, &p)?.y_bar.ok_or_else(|| missing(path, "`ybar` line"))?),
                None => s.y_bar,
            };
            let r = upper_bound(&p, &x, caps.as_ref())?;
            report(out, &r);
            Ok(if r.value.is_finite() { PROVED } else { REFUSED })
        }
        Cmd::CertifyPrimal { problem, ray, out: dest } => {
            let p = load_problem(&problem)?;
            let y = load_solution(&ray, &p)?.y.ok_or_else(|| missing(&ray, "`y` line"))?;
            verdict(out, &check_primal_infeasible(&p, &y)?, dest.as_deref())
        }
        Cmd::CertifyDual { problem, ray, out: dest } => {
            let p = load_problem(&problem)?;
            let x = load_solution(&ray, &p)?.x.ok_or_else(|| missing(&ray, "`x` line"))?;
            verdict(out, &check_dual_infeasible(&p, &x)?, dest.as_deref())
        }
        Cmd::Equicut { graph, dual_approx, relaxation_out } => {
            let g = io::parse_graph(&read(&graph)?, &graph.display().to_string())?;
            let n = g.n();
            let relax = equicut::relaxation(&g);
            if let Some(path) = &relaxation_out {
                fs::write(path, io::write_problem(&relax))?;
            }
            let y = match &dual_approx {
                Some(path) => load_solution(path, &relax)?.y.ok_or_else(|| missing(path, "`y` line"))?,
                None => vec![0.0; n + 1],
            };
            let lower = equicut::rigorous_lower(&g, &y)?;
            let (upper, part, exact) = if n <= equicut::BRUTE_FORCE_LIMIT {
                let (v, p) = equicut::brute_force(&g)?;
                (v, p, true)
            } else {
                let p = equicut::local_search(&g);
                (equicut::cut_value(&g, &p)?, p, false)
            };
            kv(out, "lower_bound", num(lower));
            kv(out, "lower_bound_hex", format_hex(lower));
            kv(out, "upper_bound", num(upper));
            kv(out, "upper_bound_hex", format_hex(upper));
            kv(out, "mu", num(equicut::accuracy_mu(upper, lower)));
            kv(out, "upper_is_optimum", exact);
            let signs: Vec<&str> = part.signs().iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
            kv(out, "partition", signs.concat());
            Ok(PROVED)
        }
        Cmd::Gen { spec, seed, kind, out: dir } => {
            let spec: ConeSpec = spec.parse()?;
            let inst = probgen::generate(&spec, seed, &kind)
                .ok_or_else(|| Error::InvalidSpec(format!("unknown instance kind {kind:?}")))?;
            fs::create_dir_all(&dir)?;
            fs::write(dir.join("problem.conic"), io::write_problem(&inst.problem))?;
            kv(out, "problem", dir.join("problem.conic").display());
            let sol = SolutionFile {
                y: inst.y_star.clone(),
                x: inst.x_star.clone(),
                ..Default::default()
            };
            fs::write(dir.join("solution.sol"), io::write_solution(&sol))?;
            kv(out, "solution", dir.join("solution.sol").display());
            if inst.x_cap.is_some() || inst.y_cap.is_some() {
                let caps = SolutionFile {
                    x_bar: inst.x_cap.clone(),
                    y_bar: inst.y_cap.clone(),
                    ..Default::default()
                };
                fs::write(dir.join("bounds.sol"), io::write_solution(&caps))?;
                kv(out, "bounds", dir.join("bounds.sol").display());
            }
            if let Some(w) = &inst.witness {
                let ray = match w {
                    Ray::Dual(y) => SolutionFile {
                        y: Some(y.clone()),
                        ..Default::default()
                    },
                    Ray::Primal(x) => SolutionFile {
                        x: Some(x.clone()),
                        ..Default::default()
                    },
                };
                fs::write(dir.join("ray.sol"), io::write_solution(&ray))?;
                kv(out, "ray", dir.join("ray.sol").display());
            }
            if let Some(f) = inst.f_star {
                kv(out, "f_star", num(f));
            }
            Ok(PROVED)
        }
        Cmd::Check { problem, certificate } => {
            let p = load_problem(&problem)?;
            let name = certificate.display().to_string();
            let cert = io::parse_certificate(&read(&certificate)?, &name, p.spec(), p.m())?;
            let ok = reverify(&p, &cert)?;
            kv(out, "kind", cert.kind.as_str());
            kv(out, "reverified", ok);
            Ok(if ok { PROVED } else { REFUSED })
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CERTICONE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("CERTICONE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("CERTICONE_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PROVED };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(USAGE);
    }
    let mut out = String::new();
    match run(cli.cmd, &mut out) {
        Ok(code) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
