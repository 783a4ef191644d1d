mod range;

use anyhow::{bail, Context, Result};
use bpairs_core::asymptotics::{self, Target};
use bpairs_core::contour_oracle::{cauchy_coefficient, write_contour_csv, ContourComparison, ContourSpec};
use bpairs_core::distribution::{self, MomentInputs, MomentRow};
use bpairs_core::numeric::{ln_factorial, log_biguint};
use bpairs_core::report::{self, ReportConfig, Section};
use bpairs_core::saddle_solver::{lemma1_scaled_residuals, lemma3_residuals, solve_saddle, triple_roots, Tolerance};
use bpairs_core::{brute_oracle, build_triangle, rootedness, Kind, RowSweep};
use clap::{Args, Parser, Subcommand, ValueEnum};
use range::NRange;
use serde::Serialize;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bpairs", version, about = "Type-B set partitions counted by block pairs")]
struct Cli {
    /// Directory for output files; stdout when unset.
    #[arg(long, global = true, env = "BPAIRS_OUT_DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact counting triangle, rows 0..=n.
    Triangle {
        #[arg(long, default_value = "M")]
        kind: Kind,
        #[arg(long)]
        n: usize,
    },
    /// Exact mean and variance with normal-approximation diagnostics.
    Moments {
        #[arg(long, default_value = "M")]
        kind: Kind,
        #[command(flatten)]
        ns: Ns,
    },
    /// Probability mass function of row n.
    Pmf {
        #[arg(long, default_value = "M")]
        kind: Kind,
        #[arg(long)]
        n: usize,
    },
    /// Saddle roots of r(e^{2r} + c) = n and their scaled residuals.
    Saddle {
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[command(flatten)]
        ns: Ns,
    },
    /// Exact against asymptotic log-counts.
    Asymptotics {
        #[arg(long, value_enum, default_value_t = TargetArg::M)]
        target: TargetArg,
        #[command(flatten)]
        ns: Ns,
    },
    /// Cauchy-integral quadrature against exact log(M_n / n!).
    Contour {
        #[command(flatten)]
        ns: Ns,
    },
    /// Exact Sturm certificates of real-rootedness.
    Certify {
        #[arg(long, default_value = "M")]
        kind: Kind,
        #[command(flatten)]
        ns: Ns,
    },
    /// Lists every B_n-partition (n <= 5) as JSON.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only partitions without a zero-block.
        #[arg(long)]
        no_zero_block: bool,
    },
    /// Runs the check battery; exits nonzero if any check fails.
    Report {
        #[arg(long, default_value_t = 3000)]
        n_max: usize,
        /// Restrict to these sections (repeatable).
        #[arg(long = "oracle", value_name = "SECTION")]
        sections: Vec<Section>,
        #[arg(long)]
        seed_invariants_only: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Ns {
    #[arg(long)]
    n: Option<usize>,
    /// start:stop:step, or start:stop:factorx for geometric steps.
    #[arg(long)]
    n_range: Option<NRange>,
}

impl Ns {
    fn values(&self) -> Vec<usize> {
        match (&self.n, &self.n_range) {
            (Some(n), _) => NRange::single(*n).values(),
            (None, Some(r)) => r.values(),
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    M,
    N,
    NSimplified,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::M => Target::M,
            TargetArg::N => Target::N,
            TargetArg::NSimplified => Target::NSimplified,
        }
    }
}

struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, name: &str, data: &[u8]) -> Result<()> {
        match &self.dir {
            Some(dir) => {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(name);
                std::fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
            }
            None => io::stdout().write_all(data)?,
        }
        Ok(())
    }
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut writer = csv_writer();
    for row in rows {
        writer.serialize(row)?;
    }
    Ok(writer.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn json_rows<T: Serialize>(rows: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(rows)?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let sink = Sink { dir: cli.out };
    let format = cli.format;
    match cli.command {
        Command::Triangle { kind, n } => {
            let triangle = build_triangle(kind, n);
            let data = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    triangle.write_csv(&mut buf)?;
                    buf
                }
                Format::Json => (triangle.to_json()? + "\n").into_bytes(),
            };
            sink.emit(&format!("triangle_{kind}_{n}.{}", format.ext()), &data)?;
        }
        Command::Moments { kind, ns } => {
            let ns = ns.values();
            let top = *ns.last().expect("nonempty range");
            let sweep = RowSweep::run(kind, top + 2, &ns);
            let rows = ns
                .iter()
                .map(|&n| Ok(MomentRow::from_summary(&distribution::summarize(&MomentInputs::from_sweep(&sweep, n)?)?)))
                .collect::<Result<Vec<_>>>()?;
            let data = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    distribution::write_moments_csv(&rows, &mut buf)?;
                    buf
                }
                Format::Json => json_rows(&rows)?,
            };
            sink.emit(&format!("moments_{kind}.{}", format.ext()), &data)?;
        }
        Command::Pmf { kind, n } => {
            let sweep = RowSweep::run(kind, n + 2, &[n]);
            let summary = distribution::summarize(&MomentInputs::from_sweep(&sweep, n)?)?;
            let data = match format {
                Format::Json => (distribution::pmf_json(&summary)? + "\n").into_bytes(),
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        k: usize,
                        count: String,
                        probability: f64,
                    }
                    let rows: Vec<Row> = summary
                        .counts
                        .iter()
                        .zip(summary.pmf_f64())
                        .enumerate()
                        .map(|(k, (c, p))| Row { k, count: c.to_string(), probability: p })
                        .collect();
                    csv_rows(&rows)?
                }
            };
            sink.emit(&format!("pmf_{kind}_{n}.{}", format.ext()), &data)?;
        }
        Command::Saddle { c, ns } => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                c: u32,
                r: f64,
                residual: f64,
                iterations: usize,
                rho_r: Option<f64>,
                rho_exp: Option<f64>,
                gap01: f64,
                gap12: f64,
                second_difference: f64,
                reciprocal_second_difference: f64,
            }
            let tol = Tolerance::default();
            let rows = ns
                .values()
                .into_iter()
                .map(|n| {
                    let nf = n as f64;
                    let root = solve_saddle(nf, c, tol)?;
                    let l1 = if n >= 3 { Some(lemma1_scaled_residuals(nf, c)?) } else { None };
                    let l3 = lemma3_residuals(&triple_roots(nf, c, tol)?);
                    Ok(Row {
                        n,
                        c,
                        r: root.r,
                        residual: root.residual,
                        iterations: root.iterations,
                        rho_r: l1.map(|l| l.rho_r),
                        rho_exp: l1.map(|l| l.rho_exp),
                        gap01: l3.gap01,
                        gap12: l3.gap12,
                        second_difference: l3.second_difference,
                        reciprocal_second_difference: l3.reciprocal_second_difference,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let data = match format {
                Format::Csv => csv_rows(&rows)?,
                Format::Json => json_rows(&rows)?,
            };
            sink.emit(&format!("saddle_c{c}.{}", format.ext()), &data)?;
        }
        Command::Asymptotics { target, ns } => {
            let ns = ns.values();
            let kind = if target == TargetArg::M { Kind::M } else { Kind::N };
            let sweep = RowSweep::run(kind, *ns.last().expect("nonempty range"), &[]);
            let rows = asymptotics::comparison_sweep(target.into(), &sweep, &ns)?;
            let data = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    asymptotics::write_comparison_csv(&rows, &mut buf)?;
                    buf
                }
                Format::Json => json_rows(&rows)?,
            };
            let name = match target {
                TargetArg::M => "M",
                TargetArg::N => "N",
                TargetArg::NSimplified => "N_simplified",
            };
            sink.emit(&format!("asymptotics_{name}.{}", format.ext()), &data)?;
        }
        Command::Contour { ns } => {
            let ns = ns.values();
            let sums = RowSweep::run(Kind::M, *ns.last().expect("nonempty range"), &[]).sums;
            let rows = ns
                .iter()
                .map(|&n| {
                    let est = cauchy_coefficient(&ContourSpec::at_saddle(n)?)?;
                    let log_exact = log_biguint(&sums[n]) - ln_factorial(n as u64);
                    Ok(ContourComparison {
                        n,
                        log_exact,
                        log_quadrature: est.log_value,
                        delta: est.log_value - log_exact,
                        nodes_used: est.nodes_used,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let data = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_contour_csv(&rows, &mut buf)?;
                    buf
                }
                Format::Json => json_rows(&rows)?,
            };
            sink.emit(&format!("contour.{}", format.ext()), &data)?;
        }
        Command::Certify { kind, ns } => {
            if kind == Kind::Stirling {
                bail!("certify supports kinds M and N");
            }
            let ns = ns.values();
            let certs = rootedness::certify_rows(&ns, kind);
            let mut failed = false;
            let mut json = Vec::new();
            #[derive(Serialize)]
            struct Row {
                n: usize,
                kind: String,
                distinct_real_root_count: usize,
                squarefree: bool,
                roots_nonpositive: bool,
            }
            let mut rows = Vec::new();
            for (n, cert) in ns.iter().zip(certs) {
                match cert {
                    Ok(c) => {
                        json.push(c.to_json()?);
                        rows.push(Row {
                            n: c.n,
                            kind: c.kind.to_string(),
                            distinct_real_root_count: c.distinct_real_root_count,
                            squarefree: c.squarefree,
                            roots_nonpositive: c.roots_nonpositive,
                        });
                    }
                    Err(e) => {
                        eprintln!("row {n}: {e}");
                        failed = true;
                    }
                }
            }
            let data = match format {
                Format::Csv => csv_rows(&rows)?,
                Format::Json => format!("[{}]\n", json.join(",")).into_bytes(),
            };
            sink.emit(&format!("certify_{kind}.{}", format.ext()), &data)?;
            if failed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Enumerate { n, no_zero_block } => {
            if format == Format::Csv {
                eprintln!("note: enumerate writes JSON only");
            }
            let parts = brute_oracle::enumerate_bn(n, !no_zero_block)?;
            let data = (brute_oracle::partitions_to_json(&parts)? + "\n").into_bytes();
            sink.emit(&format!("partitions_{n}.json"), &data)?;
        }
        Command::Report { n_max, sections, seed_invariants_only } => {
            let config = ReportConfig { n_max, sections, seed_invariants_only };
            let report = report::run(&config);
            let text = report.render();
            if sink.dir.is_some() {
                sink.emit("report.txt", text.as_bytes())?;
                sink.emit("report.json", &json_rows(&report)?)?;
            }
            match format {
                Format::Json => io::stdout().write_all(&json_rows(&report)?)?,
                Format::Csv => io::stdout().write_all(text.as_bytes())?,
            }
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
