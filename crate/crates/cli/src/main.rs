use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use latsphere::farey::{farey_sequence, major_arcs};
use latsphere::gauss::gauss_sum;
use latsphere::lab::{run_experiment_with, run_suite, ExperimentConfig, RunReport, ShellCache, SuiteOptions, SUITES};
use latsphere::lattice::{rep_counts, sphere_shell_with, DEFAULT_POINT_BUDGET};
use latsphere::multiplier::circle::{reduced_residues, Approximant, ArcQuadrature};
use latsphere::multiplier::heat::theta;
use latsphere::multiplier::{arc_multiplier, exact_multiplier};
use latsphere::ncmax::{ncmax_norm, parse_exponent, read_family, MaxNormProblem};
use latsphere::Exec;

#[derive(Parser, Debug)]
#[command(name = "latsphere", version, about = "Lattice spheres, circle-method multipliers and matrix maximal norms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Seed for every random draw (ChaCha8).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on enumerated lattice points.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Directory for report files and cached shells.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
}

impl Global {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_POINT_BUDGET)
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Number of representations of k as a sum of d squares.
    Rd {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: u64,
        /// Print the whole table `k, r_d(k)` for 0..=k.
        #[arg(long)]
        table: bool,
    },
    /// Lattice points on the sphere |m|^2 = k, in the shell-cache format.
    Shell {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: u64,
    },
    /// Farey arcs of order Lambda as CSV.
    Farey {
        #[arg(long)]
        order: u64,
    },
    /// Normalized Gauss sum G(a/q, ell).
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ell: Vec<i64>,
    },
    /// The spherical multiplier, or one arc piece of it with --a/--q/--order.
    Mult(MultArgs),
    /// The approximant n^{a/q}, or the sum over q <= q-max.
    Approx(ApproxArgs),
    /// Maximal norm of a hermitian family read from a file.
    Ncmax {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the exponent in the file; accepts `inf`.
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Maximal-ratio table and truncation identity for an automorphism family.
    Transfer {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        d: usize,
        #[arg(long = "J", default_value_t = 4)]
        j: usize,
        #[arg(long, default_value_t = 2)]
        cap: usize,
        #[arg(long, default_value = "2")]
        p: String,
        /// Phase angles, one per generator; omitted means the trivial family.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Option<Vec<f64>>,
        #[arg(long = "K", value_delimiter = ',', default_value = "1,4,9,16")]
        k_list: Vec<u64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run an acceptance suite (or `all`).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Config-driven experiments.
    Experiment {
        #[command(subcommand)]
        action: ExperimentCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Run the experiment described by a `key = value` file.
    Run { file: PathBuf },
}

#[derive(Args, Debug)]
struct Points {
    #[arg(long)]
    d: usize,
    /// A frequency; repeatable.
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append, allow_hyphen_values = true)]
    xi: Vec<f64>,
    /// Every point of the grid (j / side)^d instead.
    #[arg(long)]
    side: Option<usize>,
}

impl Points {
    fn collect(&self) -> Result<Vec<Vec<f64>>> {
        if let Some(side) = self.side {
            let total = (side as u128).checked_pow(self.d as u32).unwrap_or(u128::MAX);
            if total > 1 << 24 {
                bail!("grid of {total} points is too large");
            }
            let grid = latsphere::multiplier::FrequencyGrid::new(self.d, side)?;
            let mut idx = vec![0usize; self.d];
            return Ok((0..grid.len())
                .map(|f| {
                    grid.index_of(f, &mut idx);
                    idx.iter().map(|&j| j as f64 / side as f64).collect()
                })
                .collect());
        }
        if self.xi.is_empty() || self.xi.len() % self.d != 0 {
            bail!("--xi needs a multiple of d = {} coordinates", self.d);
        }
        Ok(self.xi.chunks(self.d).map(<[f64]>::to_vec).collect())
    }
}

#[derive(Args, Debug)]
struct MultArgs {
    #[command(flatten)]
    points: Points,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Farey order of the arc; the heat parameter is order^{-2}.
    #[arg(long)]
    order: Option<u64>,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[command(flatten)]
    points: Points,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long = "q-max")]
    q_max: Option<u64>,
}

fn csv_out() -> csv::Writer<io::Stdout> {
    csv::Writer::from_writer(io::stdout())
}

fn value_rows(d: usize, rows: &[(Vec<f64>, f64, f64, f64)]) -> Result<()> {
    let mut w = csv_out();
    let mut header: Vec<String> = (1..=d).map(|i| format!("xi_{i}")).collect();
    header.extend(["re", "im", "|value|", "bound_envelope"].map(String::from));
    w.write_record(&header)?;
    for (xi, re, im, bound) in rows {
        let mut rec: Vec<String> = xi.iter().map(|x| x.to_string()).collect();
        rec.push(format!("{re:e}"));
        rec.push(format!("{im:e}"));
        rec.push(format!("{:e}", re.hypot(*im)));
        rec.push(format!("{bound:e}"));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn print_report(report: &RunReport, out: Option<&Path>) -> Result<bool> {
    let stdout = io::stdout();
    let mut h = stdout.lock();
    for line in report.check_lines() {
        writeln!(h, "{line}")?;
    }
    for (k, v) in &report.summary {
        writeln!(h, "stat {k} = {v:e}")?;
    }
    for n in &report.notes {
        writeln!(h, "note {n}")?;
    }
    writeln!(h, "wall time {:.2}s", report.wall_time.as_secs_f64())?;
    if let Some(dir) = out {
        for p in report.write(dir)? {
            writeln!(h, "wrote {}", p.display())?;
        }
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let g = cli.global;
    match cli.cmd {
        Cmd::Rd { d, k, table } => {
            let t = rep_counts(d, k)?;
            if table {
                let mut w = csv_out();
                w.write_record(["k", "r"])?;
                for (i, r) in t.counts.iter().enumerate() {
                    w.write_record([i.to_string(), r.to_string()])?;
                }
                w.flush()?;
            } else {
                println!("{}", t.counts[k as usize]);
            }
        }
        Cmd::Shell { d, k } => {
            if let Some(dir) = &g.out {
                let cache = ShellCache::new(dir).with_budget(g.budget()).with_exec(g.exec());
                let s = cache.get(d, k)?;
                println!("{} points -> {}", s.len(), cache.path_for(d, k).display());
            } else {
                let s = sphere_shell_with(d, k, g.budget(), g.exec())?;
                print!("{}", latsphere::lab::cache::format_shell(&s));
            }
        }
        Cmd::Farey { order } => {
            let arcs = major_arcs(&farey_sequence(order)?);
            let mut w = csv_out();
            w.write_record(["a", "q", "left_num", "left_den", "right_num", "right_den"])?;
            for arc in arcs {
                w.write_record([
                    arc.center.a.to_string(),
                    arc.center.q.to_string(),
                    arc.left.numer().to_string(),
                    arc.left.denom().to_string(),
                    arc.right.numer().to_string(),
                    arc.right.denom().to_string(),
                ])?;
            }
            w.flush()?;
        }
        Cmd::Gauss { a, q, ell } => {
            if ell.is_empty() {
                bail!("--ell needs at least one coordinate");
            }
            let v = gauss_sum(a, q, &ell)?;
            let norm = v.norm();
            println!("re = {:e}", v.re);
            println!("im = {:e}", v.im);
            println!("magnitude = {norm:e}");
            println!("normalized = {:e}", norm * (q as f64).powf(ell.len() as f64 / 2.0));
        }
        Cmd::Mult(m) => {
            let d = m.points.d;
            let pts = m.points.collect()?;
            let shell = sphere_shell_with(d, m.k, g.budget(), g.exec())?;
            let mut rows = Vec::with_capacity(pts.len());
            match (m.a, m.q, m.order) {
                (None, None, None) => {
                    for xi in pts {
                        let v = exact_multiplier(&shell, &xi)?;
                        rows.push((xi, v.re, v.im, 1.0));
                    }
                }
                (Some(a), Some(q), Some(order)) => {
                    let arcs = major_arcs(&farey_sequence(order)?);
                    let arc = arcs
                        .iter()
                        .find(|x| x.center.a == a && x.center.q == q)
                        .with_context(|| format!("{a}/{q} is not in the Farey sequence of order {order}"))?;
                    let eps = 1.0 / (order * order) as f64;
                    let w = arc.width();
                    let width = *w.numer() as f64 / *w.denom() as f64;
                    let bound = (std::f64::consts::TAU * eps * m.k as f64).exp() / shell.len() as f64 * width * theta(eps).powi(d as i32);
                    let quad = ArcQuadrature::default();
                    for xi in pts {
                        let v = arc_multiplier(m.k, arc, &xi, eps, &quad)?;
                        rows.push((xi, v.re, v.im, bound));
                    }
                }
                _ => bail!("--a, --q and --order go together"),
            }
            value_rows(d, &rows)?;
        }
        Cmd::Approx(m) => {
            let d = m.points.d;
            let pts = m.points.collect()?;
            let q_max = match (m.a, m.q) {
                (Some(_), Some(q)) => q,
                (None, None) => m.q_max.unwrap_or_else(|| ((m.k as f64).sqrt().ceil() as u64).max(1)),
                _ => bail!("--a and --q go together"),
            };
            let approx = Approximant::new(d, m.k, q_max)?;
            let per_q = |q: u64| 2f64.powf(d as f64 / 2.0) * (q as f64).powf(-(d as f64) / 2.0) * approx.j.prefactor;
            let mut rows = Vec::with_capacity(pts.len());
            if let (Some(a), Some(q)) = (m.a, m.q) {
                for xi in pts {
                    let v = approx.single(a, q, &xi)?;
                    rows.push((xi, v.re, v.im, per_q(q)));
                }
            } else {
                let bound: f64 = (1..=q_max).map(|q| reduced_residues(q).count() as f64 * per_q(q)).sum();
                for xi in pts {
                    let v = approx.total(&xi);
                    rows.push((xi, v.re, v.im, bound));
                }
            }
            value_rows(d, &rows)?;
        }
        Cmd::Ncmax { input, p, tol } => {
            let mut prob = read_family(&input)?;
            if let Some(p) = p {
                prob = MaxNormProblem::new(parse_exponent(&p)?, prob.family)?;
            }
            let cert = ncmax_norm(&prob, tol)?;
            let (lo, hi) = prob.sandwich();
            println!("objective = {:e}", cert.objective);
            println!("residual = {:e}", cert.residual);
            println!("gap = {:e}", cert.gap);
            println!("sandwich = [{lo:e}, {hi:e}]");
            let slack = tol * hi.max(1.0);
            return Ok(cert.objective >= lo - slack && cert.objective <= hi + slack);
        }
        Cmd::Transfer { n, d, j, cap, p, theta, k_list, tol } => {
            let mut map = BTreeMap::new();
            map.insert("kind".to_string(), "transfer".to_string());
            map.insert("n".into(), n.to_string());
            map.insert("d".into(), d.to_string());
            map.insert("J".into(), j.to_string());
            map.insert("cap".into(), cap.to_string());
            map.insert("p".into(), p);
            map.insert("tol".into(), tol.to_string());
            map.insert("seed".into(), g.seed.unwrap_or(0).to_string());
            map.insert("K".into(), k_list.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            if let Some(t) = theta {
                map.insert("theta".into(), t.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
            }
            if let Some(out) = &g.out {
                map.insert("output".into(), out.display().to_string());
            }
            let cfg = ExperimentConfig::from_map(map, PathBuf::new())?;
            let report = run_experiment_with(&cfg, g.exec())?;
            io::stdout().write_all(&report.csv_bytes()?)?;
            for line in report.check_lines() {
                eprintln!("{line}");
            }
            return Ok(report.passed());
        }
        Cmd::Verify { suite } => {
            let mut opts = SuiteOptions {
                exec: g.exec(),
                ..SuiteOptions::default()
            };
            if let Some(s) = g.seed {
                opts.seed = s;
            }
            if suite != "all" && !SUITES.contains(&suite.as_str()) {
                bail!("unknown suite `{suite}`; choose one of {} or all", SUITES.join(", "));
            }
            let report = run_suite(&suite, opts)?;
            return print_report(&report, g.out.as_deref());
        }
        Cmd::Experiment {
            action: ExperimentCmd::Run { file },
        } => {
            let mut cfg = ExperimentConfig::read(&file)?;
            if let Some(s) = g.seed {
                cfg.set("seed", s.to_string());
            }
            if let Some(b) = g.budget {
                cfg.set("budget", b.to_string());
            }
            if let Some(out) = &g.out {
                cfg.set("output", out.display().to_string());
            }
            let report = run_experiment_with(&cfg, g.exec())?;
            if !report.rows.is_empty() && cfg.get("output").is_none() {
                io::stdout().write_all(&report.csv_bytes()?)?;
            }
            return print_report(&report, None);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
