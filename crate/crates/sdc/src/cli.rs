//! The `sdc` command line.
//!
//! Exit codes: 0 success, 1 validation failure (bad input data, failed
//! checks, violated audits), 2 usage error (bad arguments or
//! configuration).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdc_core::code::{code_distance, Distance, StabilizerCode};
use sdc_core::decoder::build_lookup;
use sdc_core::synth::{
    audit_ft_contract, synth_encoder_bundle, synth_ft_plus_encoder, synth_naive_encoder,
    synth_zero_encoder, NaiveVariant, SynthOptions, TargetState,
};
use sdc_core::Basis;

use crate::config::{parse_p_list, Config};
use crate::experiments::{
    estimate_qubit_overhead, overhead_csv, run_decoder_benchmark, run_logical_cnot_benchmark,
    sweep_csv, DecoderBench, EncoderPair, EncoderVariant, Gadget, Runner, Sweep, SweepSummary,
    DEFAULT_ROUNDS, MAX_SHOTS,
};
use crate::formats::{
    parse_circuit, write_circuit, write_lut, write_shot_dump, CodeBundle, BUILTIN_BUNDLE,
};

/// Default logical-CNOT grid: five log-spaced rates from 3e-3 to 1e-2.
pub const CNOT_DEFAULT_P: &str = "0.003,0.00405,0.00548,0.0074,0.01";

/// Environment variable naming the default output directory of `exp`.
pub const OUT_DIR_ENV: &str = "SDC_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<sdc_core::Error> for CliError {
    fn from(e: sdc_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<crate::formats::FormatError> for CliError {
    fn from(e: crate::formats::FormatError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "sdc",
    version,
    about = "Encoders, decoders and benchmarks for the [[30,6,5]] symplectic double code"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect stabilizer codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Synthesize an encoder circuit.
    Synth(SynthArgs),
    /// Build lookup-table decoders.
    #[command(subcommand)]
    Decoder(DecoderCommand),
    /// Exhaustive single-fault audit of a state-preparation circuit.
    Audit(AuditArgs),
    /// Run a Monte-Carlo experiment.
    Exp(ExpArgs),
}

#[derive(Debug, Args)]
pub struct CodeSource {
    /// Code bundle file (default: the built-in [[30,6,5]] code).
    #[arg(long, value_name = "FILE")]
    pub code: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Check orthogonality, ranks, logicals and distance.
    Validate(CodeSource),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Plus,
    Zero,
    Arbitrary,
    FtPlus,
    Naive9,
    Naive6,
    Naive4,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(value_enum)]
    pub kind: SynthKind,
    /// Overlap-optimize the plus encoder.
    #[arg(long)]
    pub optimize: bool,
    /// Build the fault-tolerant zero-state preparation.
    #[arg(long)]
    pub ft: bool,
    /// Circuit output file (default: standard output).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub source: CodeSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    X,
    Z,
}

#[derive(Debug, Subcommand)]
pub enum DecoderCommand {
    /// Build a lookup table and write it in binary form.
    Build {
        #[arg(long, value_enum)]
        basis: BasisArg,
        #[arg(long, default_value_t = 4)]
        wmax: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        source: CodeSource,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Plus,
    Zero,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Circuit text file.
    pub circuit: PathBuf,
    /// Logical state the circuit prepares on its output block.
    #[arg(long, value_enum, default_value_t = StateArg::Plus)]
    pub state: StateArg,
    #[command(flatten)]
    pub source: CodeSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpKind {
    Decoder,
    Cnot,
    Overhead,
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    #[arg(value_enum)]
    pub kind: ExpKind,
    /// `key = value` configuration file; flags override its entries.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed (required, here or in the configuration).
    #[arg(long)]
    pub seed: Option<String>,
    /// Shots per sweep point.
    #[arg(long)]
    pub shots: Option<String>,
    /// Comma-separated error rates.
    #[arg(long)]
    pub p: Option<String>,
    /// proposed, 9copy, 6copy or 4copy.
    #[arg(long)]
    pub encoder: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<String>,
    /// Output directory (default: $SDC_OUT_DIR, else the current directory).
    #[arg(long)]
    pub out: Option<String>,
    /// Logical-CNOT rounds per shot.
    #[arg(long)]
    pub rounds: Option<String>,
    /// Suppress heartbeat lines.
    #[arg(long)]
    pub quiet: bool,
    /// Also write per-shot outcome dumps (decoder experiment).
    #[arg(long)]
    pub dump: bool,
}

fn load_code(source: &CodeSource) -> CliResult<(String, CodeBundle)> {
    match &source.code {
        None => Ok(("built-in".into(), CodeBundle::parse(BUILTIN_BUNDLE)?)),
        Some(path) => {
            let text = read_text(path)?;
            let bundle = CodeBundle::parse(&text)
                .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), bundle))
        }
    }
}

fn code_from(source: &CodeSource) -> CliResult<StabilizerCode> {
    Ok(load_code(source)?.1.into_code()?)
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", path.display())))
}

fn one_based(v: &sdc_core::gf2::BitVec) -> String {
    v.iter_ones()
        .map(|q| (q + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Code(CodeCommand::Validate(source)) => cmd_code_validate(&source),
        Command::Synth(args) => cmd_synth(&args),
        Command::Decoder(DecoderCommand::Build {
            basis,
            wmax,
            out,
            source,
        }) => cmd_decoder_build(basis, wmax, &out, &source),
        Command::Audit(args) => cmd_audit(&args),
        Command::Exp(args) => cmd_experiment(&args),
    }
}

fn cmd_code_validate(source: &CodeSource) -> CliResult {
    let (name, bundle) = load_code(source)?;
    let n = bundle.sx.num_cols();
    println!("code: {name}");
    println!(
        "n = {n}, rank(sx) = {}, rank(sz) = {}",
        bundle.sx.rank(),
        bundle.sz.rank()
    );
    let given = bundle.lx.is_some();
    let code = bundle.into_code()?;
    println!("sx·szᵀ = 0: ok");
    println!("k = {}", code.k());
    println!(
        "logicals ({}): lx·lzᵀ = I, commute with all stabilizers: ok",
        if given { "given" } else { "derived" }
    );
    let report = code_distance(&code, 5)?;
    let d = match report.distance {
        Distance::Exact(d) => d.to_string(),
        Distance::AtLeast(d) => format!(">={d}"),
    };
    if let Some((basis, support)) = &report.witness {
        println!(
            "distance {d}: {basis}-type logical on qubits {}",
            one_based(support)
        );
    } else {
        println!("distance {d}: no logical of weight <= 5");
    }
    println!("[[{},{},{d}]] OK", code.n(), code.k());
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> CliResult {
    if args.optimize && args.kind != SynthKind::Plus {
        return Err(CliError::Usage(
            "--optimize applies to `synth plus` only".into(),
        ));
    }
    if args.ft && args.kind != SynthKind::Zero {
        return Err(CliError::Usage("--ft applies to `synth zero` only".into()));
    }
    let code = code_from(&args.source)?;
    let opts = SynthOptions::default();
    let naive = |v| -> CliResult<_> {
        let bundle = synth_encoder_bundle(&code, &opts)?;
        Ok(synth_naive_encoder(&code, &bundle.plus_optimized, v)?)
    };
    let (circuit, state) = match args.kind {
        SynthKind::Plus => {
            let b = synth_encoder_bundle(&code, &opts)?;
            (
                if args.optimize {
                    b.plus_optimized
                } else {
                    b.plus_raw
                },
                Some(TargetState::Plus),
            )
        }
        SynthKind::Zero if args.ft => (
            synth_zero_encoder(&synth_ft_plus_encoder(&code, &opts)?.circuit)?,
            Some(TargetState::Zero),
        ),
        SynthKind::Zero => (
            synth_encoder_bundle(&code, &opts)?.zero,
            Some(TargetState::Zero),
        ),
        SynthKind::Arbitrary => (synth_encoder_bundle(&code, &opts)?.arbitrary, None),
        SynthKind::FtPlus => (
            synth_ft_plus_encoder(&code, &opts)?.circuit,
            Some(TargetState::Plus),
        ),
        SynthKind::Naive9 => (naive(NaiveVariant::Copies9)?, Some(TargetState::Plus)),
        SynthKind::Naive6 => (naive(NaiveVariant::Copies6)?, Some(TargetState::Plus)),
        SynthKind::Naive4 => (naive(NaiveVariant::Copies4)?, Some(TargetState::Plus)),
    };
    let text = write_circuit(&circuit);
    let mut summary = vec![
        format!("CNOTs: {}", circuit.cnot_count()),
        format!(
            "qubits: {} (output {}, ancilla {})",
            circuit.num_qubits(),
            code.n(),
            circuit.num_qubits() - code.n()
        ),
    ];
    summary.push(match state {
        None => "FT: not audited (output depends on the input state)".into(),
        Some(state) => {
            let r = audit_ft_contract(&circuit, &code, state)?;
            if r.holds() {
                "FT: single-fault clean".into()
            } else {
                format!(
                    "FT: {} single-fault violations of {} locations",
                    r.violations.len(),
                    r.total_locations
                )
            }
        }
    });
    match &args.out {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            summary.iter().for_each(|l| println!("{l}"));
        }
        None => {
            print!("{text}");
            summary.iter().for_each(|l| eprintln!("{l}"));
        }
    }
    Ok(())
}

fn cmd_decoder_build(basis: BasisArg, wmax: usize, out: &Path, source: &CodeSource) -> CliResult {
    let code = code_from(source)?;
    let basis = match basis {
        BasisArg::X => Basis::X,
        BasisArg::Z => Basis::Z,
    };
    let table = build_lookup(&code, basis, wmax)?;
    let bytes = write_lut(&table)?;
    write_file(out, &bytes)?;
    println!(
        "{basis} table: {} entries, w_max {}, largest entry weight {}",
        table.len(),
        table.w_max(),
        table.max_weight_used()
    );
    Ok(())
}

fn cmd_audit(args: &AuditArgs) -> CliResult {
    let code = code_from(&args.source)?;
    let circuit = parse_circuit(&read_text(&args.circuit)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", args.circuit.display())))?;
    let state = match args.state {
        StateArg::Plus => TargetState::Plus,
        StateArg::Zero => TargetState::Zero,
    };
    let r = audit_ft_contract(&circuit, &code, state)?;
    println!("locations: {}", r.total_locations);
    println!("rejected: {}", r.rejected);
    println!("violations: {}", r.violations.len());
    if let Some(v) = r.violations.first() {
        println!("first violation: {v:?}");
    }
    if r.holds() {
        println!("FT: single-fault clean");
        Ok(())
    } else {
        Err(CliError::Invalid(
            "FT: single-fault contract violated".into(),
        ))
    }
}

/// Validated `exp` settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSettings {
    pub seed: u64,
    pub shots: u64,
    pub ps: Vec<f64>,
    pub encoders: Vec<EncoderVariant>,
    pub workers: usize,
    pub out: PathBuf,
    pub rounds: u32,
    pub quiet: bool,
    pub dump: bool,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("invalid value {v:?} for {key}")))
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Usage(format!("invalid value {v:?} for {key}"))),
    }
}

/// Merges the configuration file and flags and validates the result.
pub fn exp_settings(args: &ExpArgs) -> CliResult<ExpSettings> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Config::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    cfg.overlay("seed", args.seed.clone());
    cfg.overlay("shots", args.shots.clone());
    cfg.overlay("p", args.p.clone());
    cfg.overlay("encoder", args.encoder.clone());
    cfg.overlay("workers", args.workers.clone());
    cfg.overlay("out", args.out.clone());
    cfg.overlay("rounds", args.rounds.clone());
    cfg.overlay("quiet", args.quiet.then(|| "true".into()));
    cfg.overlay("dump", args.dump.then(|| "true".into()));

    let seed = cfg
        .get("seed")
        .ok_or_else(|| {
            CliError::Usage("a seed is required (--seed or `seed =` in the configuration)".into())
        })
        .and_then(|v| parse_value::<u64>("seed", v))?;
    let (default_shots, default_p) = match args.kind {
        ExpKind::Decoder => (1_000_000, "0.01,0.02,0.03,0.05"),
        ExpKind::Cnot => (100_000, CNOT_DEFAULT_P),
        ExpKind::Overhead => (100_000, "0.001"),
    };
    let shots = cfg
        .get("shots")
        .map_or(Ok(default_shots), |v| parse_value::<u64>("shots", v))?;
    if shots == 0 || shots > MAX_SHOTS {
        return Err(CliError::Usage(format!("shots must be in 1..={MAX_SHOTS}")));
    }
    let ps = parse_p_list(cfg.get("p").unwrap_or(default_p)).map_err(CliError::Usage)?;
    let encoders = match (cfg.get("encoder"), args.kind) {
        (Some(v), ExpKind::Decoder) => {
            return Err(CliError::Usage(format!(
                "the decoder experiment takes no encoder ({v})"
            )))
        }
        (Some(v), _) => vec![v.parse::<EncoderVariant>().map_err(CliError::Usage)?],
        (None, ExpKind::Cnot) => vec![EncoderVariant::Proposed],
        (None, ExpKind::Overhead) => EncoderVariant::ALL.to_vec(),
        (None, ExpKind::Decoder) => Vec::new(),
    };
    let workers = cfg
        .get("workers")
        .map_or(Ok(0), |v| parse_value::<usize>("workers", v))?;
    let rounds = cfg
        .get("rounds")
        .map_or(Ok(DEFAULT_ROUNDS), |v| parse_value::<u32>("rounds", v))?;
    if rounds == 0 {
        return Err(CliError::Usage("rounds must be positive".into()));
    }
    let out = cfg
        .get("out")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let quiet = cfg
        .get("quiet")
        .map_or(Ok(false), |v| parse_bool("quiet", v))?;
    let dump = cfg
        .get("dump")
        .map_or(Ok(false), |v| parse_bool("dump", v))?;
    if dump && args.kind != ExpKind::Decoder {
        return Err(CliError::Usage(
            "dumps are only written by the decoder experiment".into(),
        ));
    }
    Ok(ExpSettings {
        seed,
        shots,
        ps,
        encoders,
        workers,
        out,
        rounds,
        quiet,
        dump,
    })
}

fn prepare_out_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("output directory {}: {e}", dir.display())))?;
    let probe = dir.join(".sdc-write-probe");
    fs::write(&probe, b"").map_err(|e| {
        CliError::Usage(format!(
            "output directory {} is not writable: {e}",
            dir.display()
        ))
    })?;
    let _ = fs::remove_file(probe);
    Ok(())
}

fn report_fit(sweep: &Sweep) {
    match &sweep.fit {
        Ok(f) => println!(
            "fit: rate = {:.4e} p^{:.3} (± {:.3})",
            f.prefactor, f.exponent, f.exponent_stderr
        ),
        Err(e) => println!("fit: {e}"),
    }
}

fn cmd_experiment(args: &ExpArgs) -> CliResult {
    let s = exp_settings(args)?;
    prepare_out_dir(&s.out)?;
    let runner = Runner::new(s.seed, s.workers, !s.quiet)?;
    let code = sdc_core::code::builtin_code();
    match args.kind {
        ExpKind::Decoder => {
            let bench = DecoderBench::new(&code)?;
            let sweep = run_decoder_benchmark(&bench, &s.ps, s.shots, &runner);
            write_file(
                &s.out.join("decoder.csv"),
                sweep_csv(&sweep.points).as_bytes(),
            )?;
            let summary = SweepSummary::new("decoder", s.seed, s.shots, &sweep);
            write_file(&s.out.join("decoder.json"), summary.to_json().as_bytes())?;
            if s.dump {
                for (i, &p) in s.ps.iter().enumerate() {
                    let dump = bench.dump(s.seed, i, p, s.shots);
                    let mut bytes = Vec::new();
                    write_shot_dump(&mut bytes, &dump).map_err(anyhow::Error::from)?;
                    write_file(&s.out.join(format!("decoder_p{i}.shots")), &bytes)?;
                }
            }
            print!("{}", sweep_csv(&sweep.points));
            report_fit(&sweep);
        }
        ExpKind::Cnot => {
            let variant = s.encoders[0];
            let gadget = Gadget::new(
                &code,
                EncoderPair::build(&code, variant, &SynthOptions::default())?,
            )?;
            let sweep = run_logical_cnot_benchmark(&gadget, &s.ps, s.shots, s.rounds, &runner);
            let stem = format!("cnot_{variant}");
            write_file(
                &s.out.join(format!("{stem}.csv")),
                sweep_csv(&sweep.points).as_bytes(),
            )?;
            let mut summary = SweepSummary::new("cnot", s.seed, s.shots, &sweep);
            summary.encoder = Some(variant.name());
            summary.rounds = Some(s.rounds);
            write_file(
                &s.out.join(format!("{stem}.json")),
                summary.to_json().as_bytes(),
            )?;
            print!("{}", sweep_csv(&sweep.points));
            report_fit(&sweep);
        }
        ExpKind::Overhead => {
            let mut points = Vec::new();
            for &variant in &s.encoders {
                let pair = EncoderPair::build(&code, variant, &SynthOptions::default())?;
                let sampler = sdc_core::sim::FaultSampler::new(&pair.zero);
                for (i, &p) in s.ps.iter().enumerate() {
                    points.push(estimate_qubit_overhead(
                        variant.name(),
                        &sampler,
                        p,
                        s.shots,
                        i,
                        &runner,
                    ));
                }
            }
            let csv = overhead_csv(&points);
            write_file(&s.out.join("overhead.csv"), csv.as_bytes())?;
            let json = serde_json::json!({ "experiment": "overhead", "seed": s.seed, "shots": s.shots, "points": points });
            let mut text = serde_json::to_string_pretty(&json).map_err(anyhow::Error::from)?;
            text.push('\n');
            write_file(&s.out.join("overhead.json"), text.as_bytes())?;
            print!("{csv}");
        }
    }
    Ok(())
}
