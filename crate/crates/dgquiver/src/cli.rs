//! Command-line surface: validation, resolutions, translation, duality
//! detection, component walking, certification and component counting.
//!
//! Outputs are byte-stable: identical inputs and flags produce identical
//! bytes.  Failures print a machine-readable JSON object on stderr and exit
//! nonzero.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::derived::{ar_translate_power, check_gorenstein};
use crate::dga::DGAlgebra;
use crate::error::{Error, Result};
use crate::format::{
    emit_canonical, fragment_to_dot, parse_json, resolution_report, Certifications, DgaSpecFile,
    FragmentJson, ModuleSpecFile,
};
use crate::module::{DGModule, Side};
use crate::quiver::{
    analyze_shape, build_component, label_symmetry_check, mesh_beta_check, no_loops_check,
    ShapeVerdict,
};
use crate::resolution::{beta, minimal_resolution_windowed};
use crate::scalar::FieldKind;

#[derive(Parser)]
#[command(
    name = "dgquiver",
    about = "AR-quiver computations for perfect DG modules over finite-dimensional cochain DG algebras",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file (and optionally a module file against it).
    Validate {
        /// Path to the algebra spec file.
        algebra: PathBuf,
        /// Optional module spec file to validate over the algebra.
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// Compute a minimal semi-free resolution within a degree window.
    Resolve {
        algebra: PathBuf,
        /// Module: "R", "k", or a module spec file path.
        module: String,
        /// Highest generator degree to search.
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
    /// Number of semi-free generators of the minimal resolution.
    Beta { algebra: PathBuf, module: String },
    /// The translation τ^p of a module, emitted as a module spec file.
    Tau {
        algebra: PathBuf,
        module: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
    },
    /// Search both sides for the duality shift DR ≅ Σ^n R.
    Gorenstein { algebra: PathBuf },
    /// Walk a component window and certify it.
    Quiver {
        /// Built-in sphere model of the given dimension.
        #[arg(long, conflicts_with = "algebra")]
        sphere: Option<i64>,
        /// Algebra spec file (requires --seed).
        #[arg(long, requires = "seed")]
        algebra: Option<PathBuf>,
        /// Seed module for the walk: "R", "k" or a module file.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-run the certification suites on a stored fragment.
    Certify { fragment: PathBuf },
    /// Count AR-quiver components met by shifted free modules.
    Components {
        #[arg(long)]
        sphere: i64,
        #[arg(long, default_value_t = 6)]
        shift_window: i64,
    },
}

fn load_algebra(path: &Path) -> Result<Arc<DGAlgebra>> {
    let text = std::fs::read_to_string(path)?;
    let file: DgaSpecFile = parse_json(&text)?;
    file.validate()
}

fn load_module(algebra: &Arc<DGAlgebra>, spec: &str) -> Result<Arc<DGModule>> {
    match spec {
        "R" => Ok(Arc::new(DGModule::regular(algebra, Side::Left))),
        "k" => Ok(Arc::new(DGModule::residue(algebra, Side::Left))),
        path => {
            let text = std::fs::read_to_string(path)?;
            let file: ModuleSpecFile = parse_json(&text)?;
            Ok(Arc::new(file.to_module(algebra)?))
        }
    }
}

fn sphere_algebra(d: i64) -> Result<Arc<DGAlgebra>> {
    DGAlgebra::sphere(d, FieldKind::Rational)
}

/// Content-addressed cache under the directory named by `DGQUIVER_CACHE`.
/// Purely an accelerator: outputs are deterministic, so a hit and a miss
/// produce identical bytes, and the directory is safe to delete.
fn cache_lookup(key: &str) -> Option<String> {
    let dir = std::env::var_os("DGQUIVER_CACHE")?;
    let path = Path::new(&dir).join(format!("{key}.json"));
    std::fs::read_to_string(path).ok()
}

fn cache_store(key: &str, value: &str) {
    if let Some(dir) = std::env::var_os("DGQUIVER_CACHE") {
        let dir = Path::new(&dir);
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = std::fs::write(dir.join(format!("{key}.json")), value);
        }
    }
}

fn content_key(parts: &[&str]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for p in parts {
        for b in p.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Validate { algebra, module } => {
            let alg = load_algebra(&algebra)?;
            let mut report = format!("algebra: valid ({} basis elements)\n", alg.dim());
            if let Some(mpath) = module {
                let m = load_module(&alg, &mpath.display().to_string())?;
                m.validate()?;
                report.push_str(&format!("module: valid (dimension {})\n", m.dim()));
            }
            Ok(report)
        }
        Command::Resolve {
            algebra,
            module,
            window,
        } => {
            let alg = load_algebra(&algebra)?;
            let m = load_module(&alg, &module)?;
            let outcome = minimal_resolution_windowed(&m, window)?;
            emit_canonical(&resolution_report(&outcome, window, &m))
        }
        Command::Beta { algebra, module } => {
            let alg = load_algebra(&algebra)?;
            let m = load_module(&alg, &module)?;
            Ok(format!("{}\n", beta(&m)?))
        }
        Command::Tau {
            algebra,
            module,
            power,
        } => {
            let alg = load_algebra(&algebra)?;
            let m = load_module(&alg, &module)?;
            let report = check_gorenstein(&alg)?;
            if power < 0 && !report.holds() {
                return Err(Error::GorensteinRequired(report.to_string()));
            }
            let t = ar_translate_power(&m, power, &report)?;
            emit_canonical(&ModuleSpecFile::from_module(
                &t,
                &algebra.display().to_string(),
            ))
        }
        Command::Gorenstein { algebra } => {
            let alg = load_algebra(&algebra)?;
            emit_canonical(&check_gorenstein(&alg)?)
        }
        Command::Quiver {
            sphere,
            algebra,
            seed,
            radius,
            format: fmt,
            output,
        } => {
            let (alg, seed_module, key_parts) = match (sphere, algebra) {
                (Some(d), None) => {
                    let alg = sphere_algebra(d)?;
                    let seed_spec = seed.unwrap_or_else(|| "R".to_string());
                    let m = load_module(&alg, &seed_spec)?;
                    (alg, m, format!("sphere{d}:{seed_spec}"))
                }
                (None, Some(path)) => {
                    let alg = load_algebra(&path)?;
                    let seed_spec =
                        seed.ok_or_else(|| Error::InvalidArgument("--seed is required".into()))?;
                    let m = load_module(&alg, &seed_spec)?;
                    let text = std::fs::read_to_string(&path)?;
                    (alg, m, format!("{text}:{seed_spec}"))
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "choose exactly one of --sphere or --algebra".into(),
                    ))
                }
            };
            let fmt_tag = match fmt {
                OutputFormat::Dot => "dot",
                OutputFormat::Json => "json",
            };
            let key = content_key(&[&key_parts, &radius.to_string(), fmt_tag]);
            let text = if let Some(hit) = cache_lookup(&key) {
                hit
            } else {
                let built = build_component(&alg, &seed_module, radius)?;
                let f = &built.fragment;
                let certs = Certifications {
                    no_loops: no_loops_check(f).is_ok(),
                    label_symmetry: label_symmetry_check(f).is_ok(),
                    mesh_beta: mesh_beta_check(f).is_ok(),
                    za_infinity_consistent: analyze_shape(f).is_consistent(),
                };
                let text = match fmt {
                    OutputFormat::Dot => fragment_to_dot(f),
                    OutputFormat::Json => emit_canonical(&FragmentJson::from_fragment(f, certs))?,
                };
                cache_store(&key, &text);
                text
            };
            if let Some(out) = output {
                std::fs::write(&out, &text)?;
                Ok(format!("wrote {}\n", out.display()))
            } else {
                Ok(text)
            }
        }
        Command::Certify { fragment } => {
            let text = std::fs::read_to_string(&fragment)?;
            let file: FragmentJson = parse_json(&text)?;
            let f = file.to_fragment()?;
            let mut lines = Vec::new();
            let mut all_ok = true;
            let mut record = |name: &str, res: std::result::Result<(), String>| match res {
                Ok(()) => lines.push(format!("{name}: pass")),
                Err(w) => {
                    all_ok = false;
                    lines.push(format!("{name}: FAIL ({w})"));
                }
            };
            record("noLoops", no_loops_check(&f));
            record("labelSymmetry", label_symmetry_check(&f));
            record("meshBeta", mesh_beta_check(&f));
            match analyze_shape(&f) {
                ShapeVerdict::Consistent { .. } => lines.push("zaInfinityConsistent: pass".into()),
                ShapeVerdict::Vacuous(why) => {
                    lines.push(format!("zaInfinityConsistent: skipped ({why})"))
                }
                ShapeVerdict::Inconsistent(w) => {
                    all_ok = false;
                    lines.push(format!("zaInfinityConsistent: FAIL ({w})"));
                }
            }
            let body = lines.join("\n") + "\n";
            if all_ok {
                Ok(body)
            } else {
                Err(Error::Inconsistent(format!(
                    "certification failed:\n{body}"
                )))
            }
        }
        Command::Components {
            sphere,
            shift_window,
        } => {
            let alg = sphere_algebra(sphere)?;
            let n = crate::quiver::count_components(&alg, shift_window)?;
            Ok(format!("{n}\n"))
        }
    }
}

/// Entry point used by the binary: parse, run, report errors as JSON on
/// stderr with a nonzero exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(e) => {
            let err = serde_json::json!({
                "error": {
                    "kind": error_kind(&e),
                    "message": e.to_string(),
                }
            });
            eprintln!("{}", serde_json::to_string_pretty(&err).unwrap());
            1
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch(_) => "dimension-mismatch",
        Error::AlgebraAxiom(_) => "algebra-axiom",
        Error::ModuleAxiom(_) => "module-axiom",
        Error::BadMorphism(_) => "bad-morphism",
        Error::AlgebraMismatch => "algebra-mismatch",
        Error::SideMismatch { .. } => "side-mismatch",
        Error::NotCompact { .. } => "not-compact",
        Error::CharZeroRequired(_) => "char-zero-required",
        Error::GorensteinRequired(_) => "gorenstein-required",
        Error::UniverseUnstable(_) => "universe-unstable",
        Error::NotCertified(_) => "not-certified",
        Error::Inconsistent(_) => "inconsistent",
        Error::BadTranslationQuiver(_) => "bad-translation-quiver",
        Error::Parse(_) => "parse",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Io(_) => "io",
    }
}
