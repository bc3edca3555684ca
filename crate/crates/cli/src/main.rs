//! `bbdecomp`: spectra, seeded sampling, decomposition demos and the
//! verification suite for the thermal-mode energy decomposition.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blackbody_decomp::distributions::{binary_occupation, moments, ModeParams, PhysicalConstants, VariableFamily};
use blackbody_decomp::sampling::{
    default_m_max, default_s_max, sample, sample_coupled, write_batch_csv, RandomStream, SampledLaw,
};
use blackbody_decomp::spectra::{spectrum_table, write_spectrum_csv, SpectralLaw, SpectrumRow};
use blackbody_decomp::{run_verification, VerifyConfig};

const ERG_PER_CM3_TO_J_PER_M3: f64 = 0.1;

#[derive(Parser)]
#[command(name = "bbdecomp", version, about = "Thermal-mode energy decomposition toolkit")]
struct Cli {
    /// Physical constant set.
    #[arg(long, global = true, value_enum, default_value_t = Constants::Modern)]
    constants: Constants,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constants {
    Paper,
    Modern,
}

impl Constants {
    fn resolve(self) -> PhysicalConstants {
        match self {
            Self::Paper => PhysicalConstants::HISTORICAL,
            Self::Modern => PhysicalConstants::MODERN,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate spectral energy densities u_ν (erg cm⁻³ Hz⁻¹).
    Spectrum(SpectrumArgs),
    /// Draw a seeded batch from one law.
    Sample(SampleArgs),
    /// Split coupled draws η = ξ + ζ and show the dyadic bits of ξ.
    Decompose(DecomposeArgs),
    /// Run every identity check and emit a report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Cgs,
    Si,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Temperature in kelvin.
    #[arg(long)]
    t: f64,
    #[arg(long)]
    nu_min: f64,
    #[arg(long)]
    nu_max: f64,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Comma-separated subset of planck, rj, wien, schweikert.
    #[arg(long, value_delimiter = ',', default_values_t = SpectralLaw::ALL.to_vec())]
    laws: Vec<SpectralLaw>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Densities in J m⁻³ Hz⁻¹ instead of erg cm⁻³ Hz⁻¹.
    #[arg(long, value_enum, default_value_t = Units::Cgs)]
    units: Units,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Gauss,
    Dark,
    Planck,
    Binary,
    Multiplet,
    BinarySum,
    MultipletSum,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, conflicts_with_all = ["nu", "t"])]
    beta: Option<f64>,
    /// Frequency in Hz, together with --t.
    #[arg(long, requires = "t")]
    nu: Option<f64>,
    /// Temperature in kelvin, together with --nu.
    #[arg(long, requires = "nu")]
    t: Option<f64>,
}

impl ModeArgs {
    fn resolve(&self, consts: &PhysicalConstants) -> Result<ModeParams, String> {
        let p = match (self.beta, self.nu, self.t) {
            (Some(beta), _, _) => ModeParams::from_beta(beta),
            (None, Some(nu), Some(t)) => ModeParams::from_physical(nu, t, consts),
            _ => return Err("give either --beta or both --nu and --t".into()),
        };
        p.map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Dyadic index of the binary family.
    #[arg(long, default_value_t = 0)]
    s: u32,
    /// Order of the multiplet family.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Highest component of binary-sum or multiplet-sum.
    #[arg(long)]
    max_component: Option<u32>,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, default_value_t = 1_000_000)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    substream: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    n_samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    substream: u64,
    /// Highest bit shown in the footer.
    #[arg(long)]
    s_max: Option<u32>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated or repeated β values.
    #[arg(long = "beta", value_delimiter = ',', default_values_t = vec![0.1, 1.0, 5.0])]
    betas: Vec<f64>,
    /// `VALUE` overrides every tolerance; `KEY=VALUE` overrides one.
    #[arg(long = "tol")]
    tolerances: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Draws per Monte Carlo law.
    #[arg(long, default_value_t = 1_000_000)]
    mc_count: usize,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let consts = cli.constants.resolve();
    let result = match cli.command {
        Command::Spectrum(args) => spectrum(args, &consts),
        Command::Sample(args) => sample_cmd(args, &consts),
        Command::Decompose(args) => decompose(args),
        Command::Verify(args) => verify(args, &consts),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, String> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn io_err(e: io::Error) -> String {
    format!("write failed: {e}")
}

fn spectrum(args: SpectrumArgs, consts: &PhysicalConstants) -> Result<ExitCode, String> {
    let mut rows = spectrum_table(&args.laws, args.t, args.nu_min, args.nu_max, args.points, consts)
        .map_err(|e| e.to_string())?;
    if let Units::Si = args.units {
        for row in &mut rows {
            for u in [&mut row.u_planck, &mut row.u_rj, &mut row.u_wien, &mut row.u_schweikert] {
                *u = u.map(|v| v * ERG_PER_CM3_TO_J_PER_M3);
            }
        }
    }
    let write = |w: &mut dyn Write| -> io::Result<()> {
        match args.format {
            Format::Csv => write_spectrum_csv(&rows, &args.laws, &mut *w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &rows)?;
                writeln!(w)
            }
        }
    };
    match &args.output {
        Some(path) => {
            let mut w = create(path)?;
            write(&mut w).and_then(|_| w.flush()).map_err(io_err)?;
            let peak = peak_row(&rows);
            println!(
                "wrote {} rows to {}; Planck maximum on grid at {:.4e} Hz",
                rows.len(),
                path.display(),
                peak.map_or(f64::NAN, |r| r.nu_hz)
            );
        }
        None => write(&mut io::stdout().lock()).map_err(io_err)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn peak_row(rows: &[SpectrumRow]) -> Option<&SpectrumRow> {
    rows.iter()
        .filter(|r| r.u_planck.is_some())
        .max_by(|a, b| a.u_planck.partial_cmp(&b.u_planck).expect("finite densities"))
}

fn sample_cmd(args: SampleArgs, consts: &PhysicalConstants) -> Result<ExitCode, String> {
    if args.count == 0 {
        return Err("--count must be at least 1".into());
    }
    let p = args.mode.resolve(consts)?;
    let law = match args.family {
        FamilyArg::Gauss => Ok(SampledLaw::Family(VariableFamily::Gauss)),
        FamilyArg::Dark => Ok(SampledLaw::Family(VariableFamily::Dark)),
        FamilyArg::Planck => Ok(SampledLaw::Family(VariableFamily::Planck)),
        FamilyArg::Binary => Ok(SampledLaw::Family(VariableFamily::Binary(args.s))),
        FamilyArg::Multiplet => VariableFamily::multiplet(args.m).map(SampledLaw::Family),
        FamilyArg::BinarySum => Ok(SampledLaw::BinarySum {
            s_max: args.max_component.unwrap_or_else(|| default_s_max(&p)),
        }),
        FamilyArg::MultipletSum => Ok(SampledLaw::MultipletSum {
            m_max: args.max_component.unwrap_or_else(|| default_m_max(&p)),
        }),
    }
    .map_err(|e| e.to_string())?;
    let mut rs = RandomStream::new(args.seed, args.substream);
    let batch = sample(law, &p, args.count, &mut rs).map_err(|e| e.to_string())?;
    if let Some(path) = &args.output {
        let mut w = create(path)?;
        write_batch_csv(&batch, &mut w).and_then(|_| w.flush()).map_err(io_err)?;
    }

    let exact = match law {
        SampledLaw::Family(f) => moments(f, &p),
        _ => moments(VariableFamily::Planck, &p),
    };
    let band = 5.0 * (exact.variance / args.count as f64).sqrt();
    let mean = batch.mean();
    println!(
        "law={law} beta={} seed={} substream={} count={}",
        p.beta(),
        args.seed,
        args.substream,
        args.count
    );
    println!(
        "mean     {mean:.7}  exact {:.7}  band ±{band:.2e} (5σ)  {}",
        exact.mean,
        if (mean - exact.mean).abs() <= band { "inside" } else { "OUTSIDE" }
    );
    println!("variance {:.7}  exact {:.7}", batch.variance(), exact.variance);
    for w in &batch.warnings {
        println!("warning: {w}");
    }
    Ok(ExitCode::SUCCESS)
}

fn bit_set(bits: &[u32]) -> String {
    let inner: Vec<String> = bits.iter().map(u32::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn decompose(args: DecomposeArgs) -> Result<ExitCode, String> {
    if args.n_samples == 0 {
        return Err("--n-samples must be at least 1".into());
    }
    let p = ModeParams::from_beta(args.beta).map_err(|e| e.to_string())?;
    let s_max = args.s_max.unwrap_or_else(|| default_s_max(&p).min(16));
    let mut rs = RandomStream::new(args.seed, args.substream);
    let batch = sample_coupled(&p, args.n_samples, &mut rs).map_err(|e| e.to_string())?;
    let parts = batch.coupled.as_ref().expect("coupled batch");

    println!("beta={} seed={} substream={} n={}", p.beta(), args.seed, args.substream, args.n_samples);
    println!("{:>24} {:>8} {:>24}  bits", "eta", "xi", "zeta");
    for (i, eta) in batch.values.iter().enumerate() {
        println!(
            "{eta:>24.16e} {:>8} {:>24.16e}  {}",
            parts.integer_parts[i],
            parts.fractions[i],
            bit_set(parts.bits(i).bits())
        );
    }
    println!("{:>4} {:>12} {:>12} {:>8}", "s", "empirical", "exact", "z");
    let n = args.n_samples as f64;
    for s in 0..=s_max {
        let exact = binary_occupation(s, &p).1;
        let freq = parts.bit_frequency(s);
        let sigma = (exact * (1.0 - exact) / n).sqrt();
        let z = if sigma > 0.0 { (freq - exact) / sigma } else { 0.0 };
        println!("{s:>4} {freq:>12.6} {exact:>12.6} {z:>8.2}");
    }

    if let Some(path) = &args.output {
        let mut w = create(path)?;
        let write = |w: &mut BufWriter<File>| -> io::Result<()> {
            writeln!(w, "# beta={:.16e} seed={} substream={} count={}", p.beta(), args.seed, args.substream, args.n_samples)?;
            writeln!(w, "eta,xi,zeta,bits")?;
            for (i, eta) in batch.values.iter().enumerate() {
                let bits: Vec<String> = parts.bits(i).bits().iter().map(u32::to_string).collect();
                writeln!(w, "{eta:.16e},{},{:.16e},{}", parts.integer_parts[i], parts.fractions[i], bits.join(" "))?;
            }
            w.flush()
        };
        write(&mut w).map_err(io_err)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs, consts: &PhysicalConstants) -> Result<ExitCode, String> {
    let mut config = VerifyConfig {
        betas: args.betas,
        seed: args.seed,
        constants: *consts,
        mc_count: args.mc_count,
        ..VerifyConfig::default()
    };
    for entry in &args.tolerances {
        let parse = |v: &str| v.parse::<f64>().map_err(|_| format!("bad tolerance value `{v}`"));
        match entry.split_once('=') {
            Some((key, value)) => config.tolerances.set(key, parse(value)?),
            None => config.tolerances.override_all(parse(entry)?),
        }
        .map_err(|e| e.to_string())?;
    }
    let report = run_verification(&config).map_err(|e| e.to_string())?;

    for r in &report.records {
        let status = match (r.informational, r.pass) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        let beta = r.beta.map_or(String::from("-"), |b| b.to_string());
        let tol = r.tolerance.map_or(String::from("-"), |t| format!("{t:.1e}"));
        print!("{status} {:<48} beta={beta:<5} residual={:.3e} tol={tol}", r.identity, r.residual);
        match &r.note {
            Some(note) => println!("  {note}"),
            None => println!(),
        }
    }
    let failed = report.failures().count();
    println!(
        "{} of {} checks passed",
        report.records.len() - failed,
        report.records.len()
    );

    if let Some(path) = &args.report {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &report)
            .map_err(|e| format!("cannot serialize report: {e}"))?;
        writeln!(w).and_then(|_| w.flush()).map_err(io_err)?;
    }
    Ok(if report.overall_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
