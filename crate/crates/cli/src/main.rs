//! `vitalpovm`: construct frames and rank-one POVMs, certify
//! phase-retrieval properties with exact witnesses, fingerprint
//! GL-equivalence classes, and simulate pure-state tomography.
//!
//! Exit codes: 0 when the requested property holds (or the command
//! succeeded), 1 when the property is refuted (a witness is in the
//! report) or compared fingerprints differ, 2 on input errors and
//! undecidable queries.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vitalpovm::certify::{
    complement_property_exhaustive, complement_property_fast, equivalence_fingerprint,
    full_spark, is_informationally_complete, is_psi_complete_complex, is_psi_complete_real,
    is_vital_complex, is_vital_real, CertifyError, CpOutcome, FullSparkOutcome, PsiOutcome,
    Tolerances, DEFAULT_MAX_PARTITIONS, DEFAULT_MAX_SUBSETS,
};
use vitalpovm::designs::{
    design_agl17, design_complements, design_complete, design_pairs, frame_from_design,
    verify_design, BlockDesign,
};
use vitalpovm::frames::{
    construct_cauchy_full_spark, construct_complex_max, construct_gonzalez_2n,
    construct_real_max, op_dim, AnyFrame, FieldTag,
};
use vitalpovm::json::{
    collision_to_json, design_from_json, design_to_json, fingerprint_to_json, frame_from_json,
    frame_to_json, partition_witness_to_json, povm_to_json, to_pretty_string,
    vital_outcome_to_json,
};
use vitalpovm::povm::{whiten_with_tol, AnyPovm, DEFAULT_PARSEVAL_TOL};
use vitalpovm::tomo::{noise_sweep, run_trial};

#[derive(Parser)]
#[command(name = "vitalpovm", version, about = "Vital rank-one POVMs: construction, exact certification, tomography")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a frame from one of the built-in families as Frame JSON.
    Construct(ConstructArgs),
    /// Emit a block design as Design JSON.
    Design(DesignArgs),
    /// Certify a property of a frame and report witnesses.
    Certify(CertifyArgs),
    /// Compute the GL-equivalence fingerprint of a real frame.
    Fingerprint(FingerprintArgs),
    /// Simulate pure-state tomography with the whitened POVM of a frame.
    Tomo(TomoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    RealMax,
    ComplexMax,
    Cauchy,
    Gonzalez,
    DesignPairs,
    DesignComplements,
    DesignComplete,
    DesignAgl17,
    DesignFile,
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction family.
    #[arg(long, value_enum)]
    family: Family,
    /// Ambient dimension (ignored by design-agl17 and design-file).
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the random coefficients of seeded families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Design JSON file (required by --family design-file).
    #[arg(long)]
    design: Option<PathBuf>,
    /// Write the frame here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additionally write the whitened POVM JSON here.
    #[arg(long)]
    povm_out: Option<PathBuf>,
    /// Parseval residual tolerance for --povm-out whitening.
    #[arg(long, default_value_t = DEFAULT_PARSEVAL_TOL)]
    parseval_tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignFamily {
    Pairs,
    Complements,
    Complete,
    Agl17,
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long, value_enum)]
    family: DesignFamily,
    /// Number of points (agl17 is fixed at n = 7).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Cp,
    Psi,
    Ic,
    Vital,
    Fullspark,
}

#[derive(Args)]
struct CertifyArgs {
    /// Frame JSON file to certify.
    #[arg(long)]
    frame: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Use the exhaustive partition oracle for --mode cp instead of the
    /// candidate-normal checker.
    #[arg(long)]
    exhaustive: bool,
    /// Cap on partitions enumerated by the exhaustive oracle.
    #[arg(long, default_value_t = DEFAULT_MAX_PARTITIONS)]
    max_partitions: u64,
    /// Cap on n-subsets enumerated by subset searches.
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    max_subsets: u64,
    /// Eigenvalue-sign tolerance for kernel certificates.
    #[arg(long, default_value_t = 1e-9)]
    eigen_tol: f64,
    /// Parseval residual tolerance for whitening.
    #[arg(long, default_value_t = DEFAULT_PARSEVAL_TOL)]
    parseval_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FingerprintArgs {
    #[arg(long)]
    frame: PathBuf,
    /// Compare against this frame; exits 1 if the fingerprints differ.
    #[arg(long)]
    compare: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    max_subsets: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TomoArgs {
    #[arg(long)]
    frame: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Standard deviation of the additive Gaussian noise on the Born
    /// vector.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PARSEVAL_TOL)]
    parseval_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additionally write the whitened POVM JSON here.
    #[arg(long)]
    povm_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Maximum worker threads; all computation is currently sequential, so
/// any cap >= 1 is honored as-is. Invalid values are rejected so the
/// interface stays meaningful.
fn thread_cap() -> Result<usize> {
    match std::env::var("VITALPOVM_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => {
            let v: usize = s
                .parse()
                .map_err(|_| anyhow!("VITALPOVM_THREADS must be a positive integer, got {s:?}"))?;
            if v == 0 {
                bail!("VITALPOVM_THREADS must be a positive integer, got 0");
            }
            Ok(v)
        }
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = to_pretty_string(value);
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_frame(path: &Path) -> Result<AnyFrame> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing JSON in {}", path.display()))?;
    Ok(frame_from_json(&value)?)
}

fn whiten_any(frame: &AnyFrame, tol: f64) -> Result<AnyPovm> {
    Ok(match frame {
        AnyFrame::Real(f) => AnyPovm::Real(whiten_with_tol(f, tol)?),
        AnyFrame::Complex(f) => AnyPovm::Complex(whiten_with_tol(f, tol)?),
    })
}

fn run(cli: Cli) -> Result<u8> {
    let threads = thread_cap()?;
    match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Design(args) => cmd_design(args),
        Command::Certify(args) => cmd_certify(args, threads),
        Command::Fingerprint(args) => cmd_fingerprint(args, threads),
        Command::Tomo(args) => cmd_tomo(args, threads),
    }
}

fn require_n(args_n: Option<usize>, family: &str) -> Result<usize> {
    args_n.ok_or_else(|| anyhow!("--n is required for family {family}"))
}

fn cmd_construct(args: ConstructArgs) -> Result<u8> {
    let frame = match args.family {
        Family::RealMax => AnyFrame::Real(construct_real_max(require_n(args.n, "real-max")?)?),
        Family::ComplexMax => {
            AnyFrame::Complex(construct_complex_max(require_n(args.n, "complex-max")?)?)
        }
        Family::Cauchy => {
            AnyFrame::Real(construct_cauchy_full_spark(require_n(args.n, "cauchy")?)?)
        }
        Family::Gonzalez => {
            AnyFrame::Real(construct_gonzalez_2n(require_n(args.n, "gonzalez")?, args.seed)?)
        }
        Family::DesignPairs => AnyFrame::Real(frame_from_design(
            &design_pairs(require_n(args.n, "design-pairs")?)?,
            args.seed,
        )?),
        Family::DesignComplements => AnyFrame::Real(frame_from_design(
            &design_complements(require_n(args.n, "design-complements")?)?,
            args.seed,
        )?),
        Family::DesignComplete => AnyFrame::Real(frame_from_design(
            &design_complete(require_n(args.n, "design-complete")?)?,
            args.seed,
        )?),
        Family::DesignAgl17 => AnyFrame::Real(frame_from_design(&design_agl17(), args.seed)?),
        Family::DesignFile => {
            let path = args
                .design
                .as_ref()
                .ok_or_else(|| anyhow!("--design <file> is required for family design-file"))?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let value: Value = serde_json::from_str(&text)?;
            let design = design_from_json(&value)?;
            verify_design(&design)?;
            AnyFrame::Real(frame_from_design(&design, args.seed)?)
        }
    };
    emit(&frame_to_json(&frame), args.out.as_deref())?;
    if let Some(povm_path) = &args.povm_out {
        let povm = whiten_any(&frame, args.parseval_tol)?;
        emit(&povm_to_json(&povm), Some(povm_path))?;
    }
    Ok(0)
}

fn cmd_design(args: DesignArgs) -> Result<u8> {
    let design: BlockDesign = match args.family {
        DesignFamily::Pairs => design_pairs(require_n(args.n, "pairs")?)?,
        DesignFamily::Complements => design_complements(require_n(args.n, "complements")?)?,
        DesignFamily::Complete => design_complete(require_n(args.n, "complete")?)?,
        DesignFamily::Agl17 => {
            if let Some(n) = args.n {
                if n != 7 {
                    bail!("agl17 is a design on 7 points; --n {n} is inconsistent");
                }
            }
            design_agl17()
        }
    };
    verify_design(&design)?;
    emit(&design_to_json(&design), args.out.as_deref())?;
    Ok(0)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Cp => "cp",
        Mode::Psi => "psi",
        Mode::Ic => "ic",
        Mode::Vital => "vital",
        Mode::Fullspark => "fullspark",
    }
}

fn cmd_certify(args: CertifyArgs, threads: usize) -> Result<u8> {
    let frame = load_frame(&args.frame)?;
    let tol = Tolerances { eigen: args.eigen_tol, parseval: args.parseval_tol };
    let config = json!({
        "command": "certify",
        "frame": args.frame.display().to_string(),
        "mode": mode_name(args.mode),
        "exhaustive": args.exhaustive,
        "maxPartitions": args.max_partitions,
        "maxSubsets": args.max_subsets,
        "eigenTol": args.eigen_tol,
        "parsevalTol": args.parseval_tol,
        "threads": threads,
    });
    let mut report = json!({
        "config": config,
        "frame": frame_to_json(&frame),
        "mode": mode_name(args.mode),
    });
    let obj = report.as_object_mut().unwrap();

    let exit = match args.mode {
        Mode::Cp => {
            let real = match &frame {
                AnyFrame::Real(f) => f,
                AnyFrame::Complex(_) => bail!("--mode cp is defined for real frames only"),
            };
            let outcome = if args.exhaustive {
                complement_property_exhaustive(real, args.max_partitions)?
            } else {
                complement_property_fast(real)
            };
            match outcome {
                CpOutcome::Holds => {
                    obj.insert("holds".into(), json!(true));
                    obj.insert("psiComplete".into(), json!(true));
                    0
                }
                CpOutcome::Fails(w) => {
                    obj.insert("holds".into(), json!(false));
                    obj.insert("psiComplete".into(), json!(false));
                    obj.insert("witness".into(), partition_witness_to_json(&w));
                    1
                }
            }
        }
        Mode::Psi => match &frame {
            AnyFrame::Real(f) => match is_psi_complete_real(f)? {
                PsiOutcome::Complete => {
                    obj.insert("holds".into(), json!(true));
                    obj.insert("psiComplete".into(), json!(true));
                    0
                }
                PsiOutcome::Refuted(pair) => {
                    obj.insert("holds".into(), json!(false));
                    obj.insert("psiComplete".into(), json!(false));
                    obj.insert("collision".into(), collision_to_json(&pair));
                    1
                }
                PsiOutcome::Undecided(_) => unreachable!("real PSI is always decided"),
            },
            AnyFrame::Complex(f) => match is_psi_complete_complex(f) {
                PsiOutcome::Complete => {
                    obj.insert("holds".into(), json!(true));
                    obj.insert("psiComplete".into(), json!(true));
                    0
                }
                PsiOutcome::Undecided(msg) => {
                    obj.insert("holds".into(), Value::Null);
                    obj.insert("undecided".into(), json!(msg));
                    2
                }
                PsiOutcome::Refuted(_) => unreachable!("complex refutation is never produced"),
            },
        },
        Mode::Ic => {
            let (ic, rank, dim) = match &frame {
                AnyFrame::Real(f) => (
                    is_informationally_complete(f),
                    f.measurement_matrix().rank(),
                    op_dim(false, f.n()),
                ),
                AnyFrame::Complex(f) => (
                    is_informationally_complete(f),
                    f.measurement_matrix().rank(),
                    op_dim(true, f.n()),
                ),
            };
            obj.insert("holds".into(), json!(ic));
            obj.insert("ic".into(), json!(ic));
            obj.insert("measurementRank".into(), json!(rank));
            obj.insert("operatorSpaceDim".into(), json!(dim));
            if ic {
                0
            } else {
                1
            }
        }
        Mode::Vital => {
            let (field, outcome) = match &frame {
                AnyFrame::Real(f) => {
                    obj.insert("ic".into(), json!(is_informationally_complete(f)));
                    (FieldTag::Real, is_vital_real(f, &tol))
                }
                AnyFrame::Complex(f) => {
                    obj.insert("ic".into(), json!(is_informationally_complete(f)));
                    (FieldTag::Complex, is_vital_complex(f, &tol))
                }
            };
            match outcome {
                Ok(v) => {
                    let vital = v.is_vital();
                    obj.insert("holds".into(), json!(vital));
                    obj.insert("psiComplete".into(), json!(!matches!(v, vitalpovm::certify::VitalOutcome::NotPsiComplete { .. })));
                    let detail = vital_outcome_to_json(field, &v);
                    for (k, val) in detail.as_object().unwrap() {
                        obj.insert(k.clone(), val.clone());
                    }
                    if vital {
                        0
                    } else {
                        1
                    }
                }
                Err(CertifyError::Undecided(msg)) => {
                    obj.insert("holds".into(), Value::Null);
                    obj.insert("undecided".into(), json!(msg));
                    2
                }
                Err(e) => return Err(e.into()),
            }
        }
        Mode::Fullspark => {
            let outcome = match &frame {
                AnyFrame::Real(f) => full_spark(f, args.max_subsets)?,
                AnyFrame::Complex(f) => full_spark(f, args.max_subsets)?,
            };
            match outcome {
                FullSparkOutcome::FullSpark => {
                    obj.insert("holds".into(), json!(true));
                    obj.insert("fullSpark".into(), json!(true));
                    0
                }
                FullSparkOutcome::Dependent { subset } => {
                    obj.insert("holds".into(), json!(false));
                    obj.insert("fullSpark".into(), json!(false));
                    obj.insert("witness".into(), json!({ "dependentSubset": subset }));
                    1
                }
            }
        }
    };
    emit(&report, args.out.as_deref())?;
    Ok(exit)
}

fn cmd_fingerprint(args: FingerprintArgs, threads: usize) -> Result<u8> {
    let frame = load_frame(&args.frame)?;
    let real = match &frame {
        AnyFrame::Real(f) => f,
        AnyFrame::Complex(_) => bail!("fingerprints are defined for real frames only"),
    };
    let fp = equivalence_fingerprint(real, args.max_subsets)?;
    let config = json!({
        "command": "fingerprint",
        "frame": args.frame.display().to_string(),
        "compare": args.compare.as_ref().map(|p| p.display().to_string()),
        "maxSubsets": args.max_subsets,
        "threads": threads,
    });
    let mut report = json!({
        "config": config,
        "fingerprint": fingerprint_to_json(&fp),
    });
    let mut exit = 0u8;
    if let Some(other_path) = &args.compare {
        let other = load_frame(other_path)?;
        let other_real = match &other {
            AnyFrame::Real(f) => f,
            AnyFrame::Complex(_) => bail!("fingerprints are defined for real frames only"),
        };
        let other_fp = equivalence_fingerprint(other_real, args.max_subsets)?;
        let equal = fp.max_nonspanning_count == other_fp.max_nonspanning_count
            && fp.pairwise_intersection_sizes == other_fp.pairwise_intersection_sizes;
        let obj = report.as_object_mut().unwrap();
        obj.insert("otherFingerprint".into(), fingerprint_to_json(&other_fp));
        obj.insert("equal".into(), json!(equal));
        if !equal {
            exit = 1;
        }
    }
    emit(&report, args.out.as_deref())?;
    Ok(exit)
}

fn cmd_tomo(args: TomoArgs, threads: usize) -> Result<u8> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let frame = load_frame(&args.frame)?;
    let povm = whiten_any(&frame, args.parseval_tol)?;
    let config = json!({
        "command": "tomo",
        "frame": args.frame.display().to_string(),
        "trials": args.trials,
        "noise": args.noise,
        "seed": args.seed,
        "parsevalTol": args.parseval_tol,
        "threads": threads,
    });
    let (summary, per_trial, residual) = match &povm {
        AnyPovm::Real(p) => {
            let s = noise_sweep(p, args.trials, args.noise, args.seed)?;
            let trials: Vec<Value> = (0..args.trials)
                .map(|t| {
                    let r = run_trial(p, args.noise, args.seed, t as u64).expect("sweep ran");
                    json!({"trial": t, "projectorError": r.projector_error})
                })
                .collect();
            (s, trials, p.parseval_residual())
        }
        AnyPovm::Complex(p) => {
            let s = noise_sweep(p, args.trials, args.noise, args.seed)?;
            let trials: Vec<Value> = (0..args.trials)
                .map(|t| {
                    let r = run_trial(p, args.noise, args.seed, t as u64).expect("sweep ran");
                    json!({"trial": t, "projectorError": r.projector_error})
                })
                .collect();
            (s, trials, p.parseval_residual())
        }
    };
    let report = json!({
        "config": config,
        "frameMeta": {
            "construction": match &frame {
                AnyFrame::Real(f) => f.meta().construction.clone(),
                AnyFrame::Complex(f) => f.meta().construction.clone(),
            },
            "seed": match &frame {
                AnyFrame::Real(f) => f.meta().seed,
                AnyFrame::Complex(f) => f.meta().seed,
            },
            "n": frame.n(),
            "size": frame.len(),
            "field": frame.field().as_str(),
        },
        "parsevalResidual": residual,
        "summary": {
            "trials": summary.trials,
            "noiseSigma": summary.noise_sigma,
            "seed": summary.seed,
            "meanError": summary.mean_error,
            "medianError": summary.median_error,
            "maxError": summary.max_error,
        },
        "perTrial": per_trial,
    });
    emit(&report, args.out.as_deref())?;
    if let Some(povm_path) = &args.povm_out {
        emit(&povm_to_json(&povm), Some(povm_path))?;
    }
    Ok(0)
}
