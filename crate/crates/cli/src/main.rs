//! `conngame`: analyse vertex connectivity games from JSON files.

mod input;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use conngame::number::format_ratio;
use conngame::reductions::{setcover_to_cg, vertexcover_to_ecm};
use conngame::stability::{self, ExcessConfig};
use conngame::{
    indices, tree, ApproxParams, ConnectivityDomain, DomainClassification, Error, Limits,
};
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::json;

use report::{
    AnalysisReport, CoreReport, DomainSummary, EcmReport, Format, GenerateReport, IndexReport,
    LeastCoreReport, Scalar,
};

const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "conngame",
    version,
    about = "Power indices and stability for vertex connectivity games"
)]
struct Cli {
    /// Worker threads for enumeration (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest agent count for exhaustive enumeration.
    #[arg(long, global = true, env = "CONNGAME_EXACT_CAP", default_value_t = 24)]
    exact_cap: usize,
    /// Largest agent count for the least-core linear program.
    #[arg(long, global = true, env = "CONNGAME_LP_CAP", default_value_t = 16)]
    lp_cap: usize,
    /// Print the elapsed time to stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Banzhaf and Shapley values of every agent.
    Indices {
        domain: PathBuf,
        #[arg(long, value_enum, default_value_t = IndexChoice::Both)]
        index: IndexChoice,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        /// Additive accuracy of Monte Carlo estimates.
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Failure probability of Monte Carlo estimates.
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Veto agents and core emptiness, or core membership of an imputation.
    Core {
        domain: PathBuf,
        #[arg(long)]
        imputation: Option<PathBuf>,
    },
    /// Epsilon-core membership of an imputation.
    Ecm {
        domain: PathBuf,
        imputation: PathBuf,
        /// Overrides the "epsilon" field of the imputation file.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
    /// Least-core value and an imputation attaining it.
    Leastcore { domain: PathBuf },
    /// Build a connectivity game from a covering instance.
    Generate {
        #[arg(value_enum)]
        kind: Reduction,
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a domain file and print its summary.
    Validate { domain: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexChoice {
    Banzhaf,
    Shapley,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Auto,
    Exact,
    Tree,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduction {
    Setcover,
    Vertexcover,
}

/// A failed run: message for stderr and exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => EXIT_CAP,
            Error::Degenerate(_) => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Loaded {
    domain: ConnectivityDomain,
    class: DomainClassification,
}

impl Loaded {
    fn open(path: &Path) -> Result<Self, Failure> {
        let domain = input::domain(path)?;
        let class = conngame::classify(&domain);
        Ok(Loaded { domain, class })
    }

    fn summary(&self) -> DomainSummary {
        DomainSummary::new(&self.domain, &self.class)
    }

    /// Trees with a winning grand coalition and a losing empty one.
    fn tree_path(&self) -> bool {
        self.class.is_tree && !self.class.is_degenerate()
    }

    fn refuse_degenerate(&self) -> Result<(), Failure> {
        match self.class.degeneracy() {
            Some(d) => Err(Error::Degenerate(d).into()),
            None => Ok(()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    if cli.timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<AnalysisReport, Failure> {
    let limits = Limits {
        exact_agents: cli.exact_cap,
        lp_agents: cli.lp_cap,
    };
    match &cli.command {
        Command::Indices {
            domain,
            index,
            method,
            epsilon,
            delta,
            seed,
        } => {
            let loaded = Loaded::open(domain)?;
            let params = if *method == MethodChoice::Mc || *method == MethodChoice::Auto {
                Some((*epsilon, *delta, *seed))
            } else {
                None
            };
            cmd_indices(&loaded, *index, *method, params, &limits)
        }
        Command::Core { domain, imputation } => {
            cmd_core(&Loaded::open(domain)?, imputation.as_deref())
        }
        Command::Ecm {
            domain,
            imputation,
            epsilon,
        } => cmd_ecm(
            &Loaded::open(domain)?,
            imputation,
            epsilon.as_deref(),
            &limits,
        ),
        Command::Leastcore { domain } => cmd_leastcore(&Loaded::open(domain)?, &limits),
        Command::Generate {
            kind,
            instance,
            out,
        } => cmd_generate(*kind, instance, out),
        Command::Validate { domain } => {
            let loaded = Loaded::open(domain)?;
            let mut report = AnalysisReport::new("validate");
            report.domain = Some(loaded.summary());
            Ok(report)
        }
    }
}

fn cmd_indices(
    loaded: &Loaded,
    index: IndexChoice,
    method: MethodChoice,
    mc: Option<(f64, f64, u64)>,
    limits: &Limits,
) -> Result<AnalysisReport, Failure> {
    let domain = &loaded.domain;
    let resolved = match method {
        MethodChoice::Auto if loaded.tree_path() => MethodChoice::Tree,
        MethodChoice::Auto if limits.check_exact(domain.agent_count()).is_ok() => {
            MethodChoice::Exact
        }
        MethodChoice::Auto => MethodChoice::Mc,
        MethodChoice::Tree if !loaded.class.is_tree => return Err(Error::NotATree.into()),
        m => m,
    };
    let params = match (resolved, mc) {
        (MethodChoice::Mc, Some((e, d, s))) => Some(ApproxParams::new(e, d, s)?),
        _ => None,
    };
    let kinds: &[IndexChoice] = match index {
        IndexChoice::Both => &[IndexChoice::Banzhaf, IndexChoice::Shapley],
        IndexChoice::Banzhaf => &[IndexChoice::Banzhaf],
        IndexChoice::Shapley => &[IndexChoice::Shapley],
    };
    let mut report = AnalysisReport::new("indices");
    report.domain = Some(loaded.summary());
    for kind in kinds {
        let shapley = *kind == IndexChoice::Shapley;
        let vector = match (resolved, shapley) {
            (MethodChoice::Tree, false) => tree::tree_banzhaf(domain)?,
            (MethodChoice::Tree, true) => tree::tree_shapley(domain)?,
            (MethodChoice::Exact, false) => indices::banzhaf_exact_with(domain, limits)?,
            (MethodChoice::Exact, true) => indices::shapley_exact_with(domain, limits)?,
            (_, false) => {
                indices::banzhaf_mc_all(domain, params.as_ref().expect("sampling parameters"))?
            }
            (_, true) => {
                indices::shapley_mc_all(domain, params.as_ref().expect("sampling parameters"))?
            }
        };
        let accuracy = params.as_ref().map(|p| (p.epsilon(), p.delta()));
        report
            .indices
            .push(IndexReport::new(domain, &vector, accuracy));
    }
    Ok(report)
}

fn cmd_core(loaded: &Loaded, imputation: Option<&Path>) -> Result<AnalysisReport, Failure> {
    loaded.refuse_degenerate()?;
    let domain = &loaded.domain;
    let (method, description) = if loaded.tree_path() {
        ("tree_closed_form", tree::tree_core(domain)?.core)
    } else {
        ("exact_enumeration", stability::veto_players(domain))
    };
    let imputation_in_core = match imputation {
        Some(path) => {
            let (p, _) = input::imputation(path)?;
            Some(stability::is_in_core(domain, &p)?)
        }
        None => None,
    };
    let mut report = AnalysisReport::new("core");
    report.domain = Some(loaded.summary());
    report.core = Some(CoreReport {
        method,
        veto_agents: description.veto_agents,
        is_empty: description.is_empty,
        imputation_in_core,
    });
    Ok(report)
}

fn cmd_ecm(
    loaded: &Loaded,
    p_file: &Path,
    epsilon: Option<&str>,
    limits: &Limits,
) -> Result<AnalysisReport, Failure> {
    let (p, file_epsilon) = input::imputation(p_file)?;
    let epsilon: BigRational = match epsilon {
        Some(text) => input::real(text)?,
        None => file_epsilon.ok_or_else(|| {
            Failure::input("no epsilon given (use --epsilon or an \"epsilon\" field)")
        })?,
    };
    if epsilon.is_negative() {
        return Err(Failure::input(format!(
            "epsilon must be nonnegative, got {}",
            format_ratio(&epsilon)
        )));
    }
    loaded.refuse_degenerate()?;
    let domain = &loaded.domain;
    let ecm = if loaded.tree_path() {
        let r = tree::tree_ecm_report(domain, &p, &epsilon)?;
        EcmReport {
            method: "tree_closed_form",
            epsilon: Scalar::exact(&epsilon),
            in_epsilon_core: r.in_epsilon_core,
            max_excess: None,
            witness: None,
            essential_payment: Some(Scalar::exact(&r.essential_payment)),
            threshold: Some(Scalar::exact(&r.threshold)),
        }
    } else {
        let config = ExcessConfig {
            limits: *limits,
            ..ExcessConfig::default()
        };
        let r = stability::ecm_with(domain, &p, &epsilon, &config)?;
        EcmReport {
            method: "exact_enumeration",
            epsilon: Scalar::exact(&epsilon),
            in_epsilon_core: r.epsilon_verdict == Some(true),
            max_excess: Some(Scalar::exact(&r.max_excess)),
            witness: Some(r.witness.to_vec()),
            essential_payment: None,
            threshold: None,
        }
    };
    let mut report = AnalysisReport::new("ecm");
    report.domain = Some(loaded.summary());
    report.ecm = Some(ecm);
    Ok(report)
}

fn cmd_leastcore(loaded: &Loaded, limits: &Limits) -> Result<AnalysisReport, Failure> {
    loaded.refuse_degenerate()?;
    let domain = &loaded.domain;
    let least_core = if loaded.tree_path() {
        let canonical = tree::tree_core(domain)?.canonical;
        LeastCoreReport {
            method: "tree_closed_form",
            value: Scalar::exact(&BigRational::from_integer(0.into())),
            imputation: canonical.payoffs().iter().map(Scalar::exact).collect(),
        }
    } else {
        let lc = stability::least_core_value_with(domain, limits)?;
        LeastCoreReport {
            method: lc.method.name(),
            value: Scalar::number(&lc.value),
            imputation: lc.imputation.payoffs().iter().map(Scalar::exact).collect(),
        }
    };
    let mut report = AnalysisReport::new("leastcore");
    report.domain = Some(loaded.summary());
    report.least_core = Some(least_core);
    Ok(report)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "domain".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.imputation.json"))
}

fn cmd_generate(kind: Reduction, instance: &Path, out: &Path) -> Result<AnalysisReport, Failure> {
    let generated = match kind {
        Reduction::Setcover => {
            let inst = input::setcover(instance)?;
            let warnings = inst
                .uncovered_items()
                .iter()
                .map(|i| format!("item {i} belongs to no set; no cover exists"))
                .collect();
            let (domain, target) = setcover_to_cg(&inst);
            write(out, &domain.to_json())?;
            GenerateReport {
                reduction: "setcover",
                domain_file: out.display().to_string(),
                target_agent: Some(target),
                imputation_file: None,
                epsilon: None,
                warnings,
            }
        }
        Reduction::Vertexcover => {
            let inst = input::vertexcover(instance)?;
            let warnings = inst.warnings();
            let (domain, p, epsilon) = vertexcover_to_ecm(&inst)?;
            write(out, &domain.to_json())?;
            let sidecar = sidecar_path(out);
            let body = json!({ "payoffs": p.to_strings(), "epsilon": format_ratio(&epsilon) });
            let mut text = serde_json::to_string_pretty(&body).expect("sidecar serializes");
            text.push('\n');
            write(&sidecar, &text)?;
            GenerateReport {
                reduction: "vertexcover",
                domain_file: out.display().to_string(),
                target_agent: None,
                imputation_file: Some(sidecar.display().to_string()),
                epsilon: Some(Scalar::exact(&epsilon)),
                warnings,
            }
        }
    };
    for w in &generated.warnings {
        eprintln!("warning: {w}");
    }
    let mut report = AnalysisReport::new("generate");
    report.generated = Some(generated);
    Ok(report)
}
