use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvedwave::operators::{OperatorDomain, OperatorKind, OperatorSpec, DEFAULT_STEP, HAMILTONIAN_STEP};
use curvedwave::verify::{
    eigen_residual, render_table, run_suite, schrodinger_residual, write_csv, write_json, write_outputs, GridSpec,
    ResidualReport, SuiteConfig, Summary,
};
use curvedwave::waves::{make_plane_wave, quantize_s3, SpectrumFamily, SpectrumRow};
use curvedwave::{Branch, ChartId, Error, Family, Orientation, Space};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "curvedwave",
    version,
    about = "Plane waves on H3 and S3 and their numerical verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the chart atlas with coordinate ranges and singular loci.
    Charts {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check one plane-wave family: Schrodinger residual and P3 eigenvalue.
    Verify(VerifyArgs),
    /// Print the quantized S3 spectrum.
    Spectrum(SpectrumArgs),
    /// Evaluate a plane wave on a chart grid and write CSV.
    WaveEval(WaveEvalArgs),
    /// Run the full verification suite.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct WaveSelection {
    /// Plane-wave family, or `plane` for the plane family of `--chart`.
    #[arg(long)]
    family: String,
    /// Chart the wave lives on; needed when the family is `plane`.
    #[arg(long)]
    chart: Option<String>,
    /// Dimensionless energy.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: f64,
    /// Dispersion root, `+` or `-`; both when omitted.
    #[arg(long, allow_hyphen_values = true)]
    branch: Option<String>,
    /// Orientation of the wave, `+` or `-`; both when omitted.
    #[arg(long, allow_hyphen_values = true)]
    orientation: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    wave: WaveSelection,
    /// Grid points per axis.
    #[arg(long, default_value_t = 20)]
    grid: usize,
    /// Relative tolerance of the Schrodinger residual.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Space; only `s3` has a discrete spectrum.
    #[arg(long)]
    space: String,
    /// `cyl-plane`, `complex-plane` or `sov`.
    #[arg(long)]
    family: String,
    #[arg(long = "n-max")]
    n_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct WaveEvalArgs {
    #[command(flatten)]
    wave: WaveSelection,
    /// Grid points per axis on the chart's default interior box.
    #[arg(long, default_value_t = 10)]
    grid: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// TOML or JSON config; defaults apply when omitted.
    #[arg(long, env = "CURVEDWAVE_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Checks,
    /// The reader closed standard output.
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::ClosedPipe
        } else {
            Failure::Usage(format!("i/o error: {e}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Charts { format } => charts(format),
        Command::Verify(args) => verify(&args),
        Command::Spectrum(args) => spectrum(&args),
        Command::WaveEval(args) => wave_eval(&args),
        Command::Suite(args) => suite(&args),
    };
    match result {
        Ok(()) | Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(Failure::from)
}

fn both_or_one<T: std::str::FromStr<Err = Error> + Copy>(
    choice: &Option<String>,
    both: [T; 2],
) -> Result<Vec<T>, Failure> {
    match choice {
        Some(s) => Ok(vec![parse(s)?]),
        None => Ok(both.to_vec()),
    }
}

fn resolve_family(sel: &WaveSelection) -> Result<Family, Failure> {
    let chart = sel.chart.as_deref().map(parse::<ChartId>).transpose()?;
    let family = match (sel.family.as_str(), chart) {
        ("plane", Some(c)) => Family::plane_on(c),
        ("plane", None) => return Err(Failure::Usage("--family plane needs --chart".into())),
        (name, _) => parse::<Family>(name)?,
    };
    if !family.is_plane() {
        return Err(Failure::Usage(format!(
            "{family} is a separated family; its checks run under `suite`"
        )));
    }
    if let Some(c) = chart {
        if c != family.chart() {
            return Err(Failure::Usage(format!("{family} lives on {}, not {c}", family.chart())));
        }
    }
    Ok(family)
}

fn csv_failure(e: csv::Error) -> Failure {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Failure::from(io),
        other => Failure::Usage(format!("csv error: {other:?}")),
    }
}

fn to_stdout(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

fn emit_reports(reports: &[ResidualReport], format: Format) -> Result<(), Failure> {
    let mut buf = Vec::new();
    match format {
        Format::Json => write_json(&mut buf, reports)?,
        Format::Csv => write_csv(&mut buf, reports)?,
        Format::Table => buf.extend_from_slice(render_table(reports).as_bytes()),
    }
    to_stdout(&buf)?;
    let summary = Summary::of(reports);
    if summary.failed == 0 {
        return Ok(());
    }
    if !matches!(format, Format::Table) {
        for r in reports.iter().filter(|r| !r.pass) {
            eprintln!(
                "FAIL {}: relative residual {:.3e} > {:.1e}",
                r.name, r.relative_residual, r.tolerance
            );
        }
    }
    Err(Failure::Checks)
}

fn charts(format: Format) -> Result<(), Failure> {
    let mut out = Vec::new();
    match format {
        Format::Json => {
            let list: Vec<_> = ChartId::ALL
                .iter()
                .map(|c| {
                    let coords: Vec<_> = c
                        .coordinate_names()
                        .iter()
                        .zip(c.range_descriptions())
                        .zip(c.periodic_axes())
                        .map(|((n, r), p)| json!({"name": n, "range": r, "periodic": p}))
                        .collect();
                    json!({"name": c.name(), "space": c.space().name(), "coordinates": coords, "singular_loci": c.singular_loci()})
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &list).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["chart", "space", "coordinate", "range", "periodic", "singular_loci"])
                .map_err(csv_failure)?;
            for c in ChartId::ALL {
                for ((n, r), p) in c
                    .coordinate_names()
                    .iter()
                    .zip(c.range_descriptions())
                    .zip(c.periodic_axes())
                {
                    w.write_record([c.name(), c.space().name(), n, r, &p.to_string(), c.singular_loci()])
                        .map_err(csv_failure)?;
                }
            }
            w.flush()?;
        }
        Format::Table => {
            for c in ChartId::ALL {
                writeln!(out, "{} ({})", c.name(), c.space())?;
                for (n, r) in c.coordinate_names().iter().zip(c.range_descriptions()) {
                    writeln!(out, "  {n:<4} {r}")?;
                }
                writeln!(out, "  singular: {}", c.singular_loci())?;
            }
        }
    }
    to_stdout(&out)
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let family = resolve_family(&args.wave)?;
    let chart = family.chart();
    let orientations = both_or_one(&args.wave.orientation, Orientation::BOTH)?;
    let branches = both_or_one(&args.wave.branch, Branch::BOTH)?;
    let grid = GridSpec::default_for(chart, args.grid);
    let eps = args.wave.epsilon;
    let mut reports = Vec::new();
    for &orientation in &orientations {
        for &branch in &branches {
            let w = make_plane_wave(family, orientation, eps, branch)?;
            let suffix = format!("{family}/n{orientation}/branch{branch}/eps={eps}");
            let mut r = schrodinger_residual(chart, &w, eps, &grid, HAMILTONIAN_STEP, args.tol)?;
            r.name = format!("schrodinger/{suffix}");
            reports.push(r);
            if let (Some(lambda), true) = (w.p3_eigenvalue(), chart != ChartId::S3Cylindrical) {
                let op = OperatorSpec::new(OperatorKind::P3, OperatorDomain::Chart(chart), DEFAULT_STEP)?;
                let mut r = eigen_residual(&op, &w, lambda, &grid, 1e-8)?;
                r.name = format!("p3/{suffix}");
                reports.push(r);
            }
        }
    }
    emit_reports(&reports, args.format)
}

fn spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    if parse::<Space>(&args.space)? != Space::Spherical {
        return Err(Failure::Usage("only s3 has a discrete spectrum".into()));
    }
    let family = parse::<SpectrumFamily>(&args.family)?;
    let rows = quantize_s3(family, args.n_max)?;
    let sov = matches!(family, SpectrumFamily::Sov { .. });
    let mut out = Vec::new();
    let eps = |r: &SpectrumRow| r.epsilon.to_string();
    match args.format {
        Format::Json => {
            let list: Vec<_> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "n": r.n, "N": r.big_n, "epsilon": eps(r), "epsilon_value": r.epsilon_f64(),
                        "alpha_plus": r.alpha_plus, "alpha_minus": r.alpha_minus,
                    });
                    if sov {
                        v["m"] = json!(r.m);
                        v["alpha_z"] = json!(r.alpha_z);
                    }
                    v
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &list).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            let map_err = csv_failure;
            if sov {
                w.write_record(["m", "alpha_z", "n", "N", "epsilon"]).map_err(map_err)?;
            } else {
                w.write_record(["n", "N", "epsilon", "alpha_plus", "alpha_minus"])
                    .map_err(map_err)?;
            }
            for r in &rows {
                let rec = if sov {
                    vec![
                        r.m.unwrap_or(0).to_string(),
                        r.alpha_z.unwrap_or(0).to_string(),
                        r.n.to_string(),
                        r.big_n.to_string(),
                        eps(r),
                    ]
                } else {
                    vec![
                        r.n.to_string(),
                        r.big_n.to_string(),
                        eps(r),
                        r.alpha_plus.to_string(),
                        r.alpha_minus.to_string(),
                    ]
                };
                w.write_record(&rec).map_err(map_err)?;
            }
            w.flush()?;
        }
        Format::Table => {
            if sov {
                writeln!(
                    out,
                    "{:>3} {:>7} {:>3} {:>4} {:>8}",
                    "m", "alpha_z", "n", "N", "epsilon"
                )?;
                for r in &rows {
                    writeln!(
                        out,
                        "{:>3} {:>7} {:>3} {:>4} {:>8}",
                        r.m.unwrap_or(0),
                        r.alpha_z.unwrap_or(0),
                        r.n,
                        r.big_n,
                        eps(r)
                    )?;
                }
            } else {
                writeln!(
                    out,
                    "{:>3} {:>4} {:>8} {:>7} {:>7}",
                    "n", "N", "epsilon", "alpha+", "alpha-"
                )?;
                for r in &rows {
                    writeln!(
                        out,
                        "{:>3} {:>4} {:>8} {:>7} {:>7}",
                        r.n,
                        r.big_n,
                        eps(r),
                        r.alpha_plus,
                        r.alpha_minus
                    )?;
                }
            }
        }
    }
    to_stdout(&out)
}

fn wave_eval(args: &WaveEvalArgs) -> Result<(), Failure> {
    let family = resolve_family(&args.wave)?;
    let orientation: Orientation = args
        .wave
        .orientation
        .as_deref()
        .map(parse)
        .transpose()?
        .unwrap_or(Orientation::Plus);
    let branch: Branch = args
        .wave
        .branch
        .as_deref()
        .map(parse)
        .transpose()?
        .unwrap_or(Branch::Plus);
    if args.grid < 2 {
        return Err(Failure::Usage("--grid needs at least 2 points per axis".into()));
    }
    let w = make_plane_wave(family, orientation, args.wave.epsilon, branch)?;
    let chart = family.chart();
    let points = GridSpec::default_for(chart, args.grid).points()?;
    let sink: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut csv_out = csv::Writer::from_writer(sink);
    let map_err = csv_failure;
    let [c0, c1, c2] = chart.coordinate_names();
    csv_out
        .write_record([c0, c1, c2, "re_psi", "im_psi", "abs_psi"])
        .map_err(map_err)?;
    for p in &points {
        let x = p.coords();
        let v = w.eval(x);
        csv_out
            .serialize((x[0], x[1], x[2], v.re, v.im, v.norm()))
            .map_err(map_err)?;
    }
    csv_out.flush()?;
    Ok(())
}

fn suite(args: &SuiteArgs) -> Result<(), Failure> {
    let config = match &args.config {
        Some(path) => SuiteConfig::from_path(path)?,
        None => SuiteConfig::default(),
    };
    let reports = run_suite(&config)?;
    write_outputs(&config.output, &reports)?;
    emit_reports(&reports, args.format)
}
