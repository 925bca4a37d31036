use anyhow::{Context, Result, bail};
use clap::{Parser, Subcommand, ValueEnum};
use opcat::builders::{
    adjoin_terminal, bouquets, card_one, chain_poset, discrete_zero, finite_ordinals, finite_sets,
    two_trees,
};
use opcat::coll::verify_skew_axioms;
use opcat::diag::diagnostics;
use opcat::hopf::{CapExceeded, DEFAULT_CAP, OmegaMode, hopf_sufficient_check};
use opcat::normal::{
    check_ft_lemmas, ft_subcategory, left_normal_check, validate_presheaf,
    wedge_bijectivity_check,
};
use opcat::ocjson::{parse_category, parse_operad, parse_presheaf, serialize_category};
use opcat::operad::validate_operad;
use opcat::operadic::{OperadicCategory, validate_operadic};
use opcat::rebuild::roundtrip;
use opcat::report::ValidationReport;
use opcat::sample::Sampler;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Operadic categories as explicit data: validation, collection calculus
/// checks, and reconstruction.
#[derive(Parser)]
#[command(name = "opcat", version)]
struct Cli {
    /// Emit machine readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Omega {
    /// Every family of morphisms out of the fibres.
    All,
    /// Only fibrewise trivial families.
    Ft,
}

#[derive(Subcommand)]
enum Command {
    /// Check every law of a category file.
    Validate { cat: PathBuf },
    /// Summarize a category: sizes, trivial objects, genuineness, and
    /// invertibility of the structure maps.
    Info { cat: PathBuf },
    /// Write a built-in example category to a file.
    Example {
        /// One of: s, p, bouquets, discrete_zero, card_one,
        /// adjoin_terminal, omega2.
        name: String,
        /// Size parameter for s, p, and bouquets.
        #[arg(long, conflicts_with_all = ["set", "max2"])]
        max: Option<usize>,
        /// Chain length for the poset-based examples.
        #[arg(long, conflicts_with = "max2")]
        set: Option<usize>,
        /// Level sizes for omega2.
        #[arg(long, num_args = 2, value_names = ["N2", "N1"])]
        max2: Option<Vec<usize>>,
        /// Output file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Verify the five skew monoidal axioms on sampled collections.
    SkewCheck {
        cat: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest sampled set per object.
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
    /// Check the monoid laws of an operad file over a category.
    OperadCheck { cat: PathBuf, operad: PathBuf },
    /// Check the action laws of a presheaf file over a category.
    PresheafCheck { cat: PathBuf, presheaf: PathBuf },
    /// Check bijectivity of the normalized structure maps on sampled
    /// presheaves, together with the closure laws they rest on.
    WedgeCheck {
        cat: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for the factorizations that make normalization invertible.
    HopfCheck {
        cat: PathBuf,
        /// Which families of morphisms out of the fibres to test.
        #[arg(long, value_enum, default_value_t = Omega::All)]
        omega: Omega,
        /// Enumeration budget.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Decide whether every object reaches a trivial object.
    LeftNormal { cat: PathBuf },
    /// Rebuild the category from its collection calculus and compare.
    Reconstruct { cat: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<CapExceeded>() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Validate { cat } => {
            let oc = load_category(cat)?;
            Ok(emit("validate", &validate_operadic(&oc), cli.json))
        }
        Command::Info { cat } => {
            let oc = load_category(cat)?;
            let validation = validate_operadic(&oc);
            if !validation.pass() {
                return Ok(emit("info", &validation, cli.json));
            }
            Ok(info(&oc, cli.json))
        }
        Command::Example {
            name,
            max,
            set,
            max2,
            out,
        } => {
            let oc = build_example(name, *max, *set, max2.as_deref())?;
            let text = serialize_category(&oc);
            fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
            let mut report = ValidationReport::new();
            report.set_stat("objects", oc.cat().n_objects() as u64);
            report.set_stat("morphisms", oc.cat().n_morphisms() as u64);
            if cli.json {
                Ok(emit("example", &report, true))
            } else {
                println!("wrote {}", out.display());
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::SkewCheck {
            cat,
            samples,
            seed,
            max_size,
        } => {
            let oc = load_category(cat)?;
            let mut sampler = Sampler::new(*seed, *max_size);
            let mut report = ValidationReport::new();
            for _ in 0..*samples {
                let w = sampler.collection(&oc, "w");
                let x = sampler.collection(&oc, "x");
                let y = sampler.collection(&oc, "y");
                let z = sampler.collection(&oc, "z");
                report.merge(verify_skew_axioms(&oc, &w, &x, &y, &z, &mut sampler));
            }
            report.set_stat("samples", *samples as u64);
            Ok(emit("skew-check", &report, cli.json))
        }
        Command::OperadCheck { cat, operad } => {
            let oc = load_category(cat)?;
            let text = fs::read_to_string(operad)
                .with_context(|| format!("reading {}", operad.display()))?;
            let t = parse_operad(&oc, &text)
                .with_context(|| format!("parsing {}", operad.display()))?;
            Ok(emit("operad-check", &validate_operad(&oc, &t), cli.json))
        }
        Command::PresheafCheck { cat, presheaf } => {
            let oc = load_category(cat)?;
            let text = fs::read_to_string(presheaf)
                .with_context(|| format!("reading {}", presheaf.display()))?;
            let p = parse_presheaf(&oc, &text)
                .with_context(|| format!("parsing {}", presheaf.display()))?;
            Ok(emit("presheaf-check", &validate_presheaf(&oc, &p), cli.json))
        }
        Command::WedgeCheck { cat, samples, seed } => {
            let oc = load_category(cat)?;
            let mut report = check_ft_lemmas(&oc);
            let mut sampler = Sampler::new(*seed, 2);
            report.merge(wedge_bijectivity_check(&oc, *samples, &mut sampler));
            Ok(emit("wedge-check", &report, cli.json))
        }
        Command::HopfCheck { cat, omega, cap } => {
            let oc = load_category(cat)?;
            let mode = match omega {
                Omega::All => OmegaMode::All,
                Omega::Ft => OmegaMode::FibrewiseTrivial,
            };
            let report = hopf_sufficient_check(&oc, mode, *cap)?;
            Ok(emit("hopf-check", &report, cli.json))
        }
        Command::LeftNormal { cat } => {
            let oc = load_category(cat)?;
            let verdict = left_normal_check(&oc);
            let mut report = ValidationReport::new();
            report.set_stat("left-normal", verdict.left_normal as u64);
            if !verdict.left_normal {
                report.fail("left-normal", &verdict.reason, verdict.witness.clone());
            }
            Ok(emit("left-normal", &report, cli.json))
        }
        Command::Reconstruct { cat } => {
            let oc = load_category(cat)?;
            match roundtrip(&oc) {
                Ok(rt) => {
                    let mut report = rt.report;
                    report.set_stat("objects", rt.rebuilt.cat().n_objects() as u64);
                    report.set_stat("morphisms", rt.rebuilt.cat().n_morphisms() as u64);
                    Ok(emit("reconstruct", &report, cli.json))
                }
                Err(err) => {
                    let mut report = ValidationReport::new();
                    report.fail("reconstruct", err.to_string(), vec![]);
                    Ok(emit("reconstruct", &report, cli.json))
                }
            }
        }
    }
}

fn load_category(path: &Path) -> Result<OperadicCategory> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let oc = parse_category(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(oc)
}

fn build_example(
    name: &str,
    max: Option<usize>,
    set: Option<usize>,
    max2: Option<&[usize]>,
) -> Result<OperadicCategory> {
    Ok(match name {
        "s" => finite_sets(max.unwrap_or(2)),
        "p" => finite_ordinals(max.unwrap_or(2)),
        "bouquets" => bouquets(&["r", "g"], max.unwrap_or(2)),
        "discrete_zero" => discrete_zero(&chain_poset(set.unwrap_or(3)))?,
        "card_one" => card_one(&chain_poset(set.unwrap_or(3)), None)?,
        "adjoin_terminal" => adjoin_terminal(&chain_poset(set.unwrap_or(3)))?,
        "omega2" => {
            let sizes = max2.unwrap_or(&[2, 1]);
            two_trees(sizes[0], sizes[1])
        }
        other => bail!(
            "unknown example {other:?}; valid names: s, p, bouquets, discrete_zero, card_one, adjoin_terminal, omega2"
        ),
    })
}

fn info(oc: &OperadicCategory, json: bool) -> ExitCode {
    let cat = oc.cat();
    let trivial = oc.trivial_objects();
    let ft = ft_subcategory(oc).expect("validated categories have an ft subcategory");
    let verdict = oc.is_genuine();
    let diag = diagnostics(oc);
    let mut report = ValidationReport::new();
    report.set_stat("objects", cat.n_objects() as u64);
    report.set_stat("morphisms", cat.n_morphisms() as u64);
    report.set_stat("trivial-objects", trivial.len() as u64);
    report.set_stat("ft-morphisms", ft.morphisms.len() as u64);
    report.set_stat("genuine", verdict.genuine as u64);
    report.set_stat("lambda-invertible", diag.lambda_invertible as u64);
    report.set_stat("rho-invertible", diag.rho_invertible as u64);
    report.set_stat("alpha-invertible", diag.alpha_invertible as u64);
    report.set_stat("alpha-families-checked", diag.families_checked as u64);
    report.set_stat("alpha-families-skipped", diag.families_skipped as u64);
    if json {
        return emit("info", &report, true);
    }
    let labels: Vec<&str> = trivial.iter().map(|&c| cat.object_label(c)).collect();
    print!("info: {}", report.render());
    println!(
        "  trivial object labels: {}",
        if labels.is_empty() {
            "(none)".to_string()
        } else {
            labels.join(", ")
        }
    );
    ExitCode::SUCCESS
}

fn emit(check: &str, report: &ValidationReport, json: bool) -> ExitCode {
    if json {
        let value = json!({
            "check": check,
            "pass": report.pass(),
            "witnesses": report.failures(),
            "stats": report.stats(),
        });
        println!("{value}");
    } else {
        print!("{check}: {}", report.render());
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
