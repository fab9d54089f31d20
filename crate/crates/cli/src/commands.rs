use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use dof_lab_core::biascheme::{build_u, build_v, special_realizations, verify, BiaScheme, VerificationReport};
use dof_lab_core::dofregion::{region as build_region, DofRegion};
use dof_lab_core::properties::{sweep as sweep_property, Property, PropertySummary};
use dof_lab_core::simulate::{rate_sweep, sample_channels, write_rates_csv, RatePoint};
use dof_lab_core::{AntennaConfig, Error};
use serde::{Deserialize, Serialize};

use crate::{Format, PropertyArg, RegionArgs, SchemeArgs, SimulateArgs, SweepArgs, Switch};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(io::Error),
    Json(serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Domain(_)) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Json(e) => write!(f, "json: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

type CliResult = Result<ExitCode, CliError>;

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn region(args: &RegionArgs) -> CliResult {
    let cfg = args.cfg.config()?;
    let region = build_region(&cfg, args.channel.into(), args.csit == Switch::Yes);
    let mut out = open_output(args.out.as_deref())?;
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&region)?)?,
        Format::Csv => write_vertices_csv(&region, &mut out)?,
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn write_vertices_csv(region: &DofRegion, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "d1,d2")?;
    for (d1, d2) in region.vertices() {
        writeln!(out, "{d1},{d2}")?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
pub struct SchemeOutput {
    pub config: AntennaConfig,
    pub channels: String,
    pub seed: u64,
    pub nulling_coeff: f64,
    #[serde(flatten)]
    pub report: VerificationReport,
}

pub fn scheme(args: &SchemeArgs) -> CliResult {
    let cfg = args.cfg.config()?;
    let scheme = BiaScheme::new(cfg)?;
    let tol = args.tol.tolerances();
    let (m1, n1) = (cfg.m1 as usize, cfg.n1 as usize);

    let mut draw = sample_channels(&cfg, args.seed, 0);
    let channels = if args.random {
        "random"
    } else {
        draw.h11_slots = special_realizations(m1, n1)?;
        "special"
    };
    let report = verify(&cfg, &scheme.q, &scheme.p, &draw.h11_slots, &draw.h12, &tol)?;

    if let Some(dir) = &args.export {
        fs::create_dir_all(dir)?;
        let u = build_u(&scheme.q, &draw.h11_slots)?;
        let v = build_v(&scheme.q, &scheme.p, &draw.h12)?;
        for (name, m) in [("q", &scheme.q), ("p", &scheme.p), ("u", &u), ("v", &v), ("h12", &draw.h12)] {
            m.write_csv(BufWriter::new(File::create(dir.join(format!("{name}.csv")))?))?;
        }
    }

    let pass = report.pass;
    let output = SchemeOutput {
        config: cfg,
        channels: channels.to_string(),
        seed: args.seed,
        nulling_coeff: tol.nulling_coeff,
        report,
    };
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "{}", serde_json::to_string(&output)?)?;
    out.flush()?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize, Deserialize)]
pub struct EstimateOutput {
    pub d1_hat: f64,
    pub d2_hat: f64,
    pub points: Vec<RatePoint>,
    pub seed: u64,
}

pub fn simulate(args: &SimulateArgs) -> CliResult {
    if args.powers_db.len() < 2 {
        return Err(CliError::Usage("--powers-db needs at least two values to fit a slope".into()));
    }
    let cfg = args.cfg.config()?;
    let sweep = rate_sweep(&cfg, &args.powers_db, args.trials, args.seed, &args.tol.tolerances())?;
    let estimate = EstimateOutput {
        d1_hat: sweep.estimate.d1_hat,
        d2_hat: sweep.estimate.d2_hat,
        points: sweep.points,
        seed: sweep.seed,
    };
    let json = serde_json::to_string(&estimate)?;
    match &args.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_rates_csv(&sweep.rows, &mut f)?;
            f.flush()?;
            println!("{json}");
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            write_rates_csv(&sweep.rows, &mut out)?;
            writeln!(out, "{json}")?;
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(args: &SweepArgs) -> CliResult {
    let properties: Vec<Property> = match args.property {
        PropertyArg::All => Property::ALL.to_vec(),
        PropertyArg::Lemma3 => vec![Property::Lemma3],
        PropertyArg::CsitDominance => vec![Property::CsitDominance],
        PropertyArg::ZicDominance => vec![Property::ZicDominance],
        PropertyArg::Zf => vec![Property::ZeroForcing],
        PropertyArg::Corner => vec![Property::CornerTightness],
    };
    let summaries: Vec<PropertySummary> = properties
        .iter()
        .map(|&p| sweep_property(p, args.max_antennas, args.seed))
        .collect::<Result<_, _>>()?;

    let mut out = BufWriter::new(io::stdout().lock());
    match args.format {
        Some(Format::Json) => writeln!(out, "{}", serde_json::to_string(&summaries)?)?,
        Some(Format::Csv) => {
            writeln!(out, "property,checked,passed")?;
            for s in &summaries {
                writeln!(out, "{},{},{}", s.property, s.checked, s.passed)?;
            }
        }
        None => {
            writeln!(out, "{:<16} {:>8} {:>8}", "property", "checked", "passed")?;
            for s in &summaries {
                writeln!(out, "{:<16} {:>8} {:>8}", s.property.name(), s.checked, s.passed)?;
            }
        }
    }
    out.flush()?;

    let failed: Vec<&PropertySummary> = summaries.iter().filter(|s| !s.all_pass()).collect();
    for s in &failed {
        let cfgs: Vec<String> = s.counterexamples.iter().map(ToString::to_string).collect();
        eprintln!("{} violated at {}", s.property, cfgs.join(" "));
    }
    Ok(if failed.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
