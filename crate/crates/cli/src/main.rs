mod plot;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cxtv_core::cohomology::{
    euler_power_nonvanishing, presentation_ideal, projectivization_power, splitting_pullback, chern_ring,
};
use cxtv_core::fh_index::{index_product_of_spheres, index_representation_sphere, key_term_survives, Group};
use cxtv_core::gadgets::{make_tight_depth_instance, make_too_many_measures_instance, Construction};
use cxtv_core::generate::{generate_measures, generate_tverberg, Genericity};
use cxtv_core::io::{
    parse_certificate, parse_instance, to_json, CertificateFile, CertificatePayload, InstanceFile, InstancePayload,
    MeasuresPayload, Provenance, ReportFile, RunMetadata, SCHEMA_VERSION,
};
use cxtv_core::poly::Poly;
use cxtv_core::scalar::parse_q;
use cxtv_core::transversal::{
    search_flag_transversal, search_odd_transversal, search_transversal, BestEffort, SearchConfig, SearchOutcome,
};
use cxtv_core::tverberg::{search_tv, TvInstance, TvOutcome, TvVariant};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Exact certificates for complex transversals, Tverberg partitions and the algebra behind them.
#[derive(Parser)]
#[command(name = "cxtv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complex k-flat of depth at least 1/(2d-2k+1) for k+1 measures.
    Transversal(SearchArgs),
    /// Nested flags of complex flats for d measures.
    Flag {
        #[command(flatten)]
        search: SearchArgs,
        /// Dimension of the smallest flat.
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Complex-plus-line flat of depth at least 1/(2d-2k+2).
    OddTransversal(SearchArgs),
    /// Partitions whose hulls all meet one complex flat.
    Tverberg(SearchArgs),
    /// Like `tverberg`, with rainbow parts.
    TverbergColorful(SearchArgs),
    /// Like `tverberg`, meeting a complex-plus-line flat.
    TverbergOdd(SearchArgs),
    /// Grassmannian cohomology computations.
    Cohomology {
        #[command(subcommand)]
        op: CohomologyOp,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Key-monomial check for the index ideals of a product of spheres.
    FhIndex {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Comma-separated exponents (z2 only); defaults to all zeros.
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u32>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instances showing that the depth bounds cannot be improved.
    Gadget(GadgetArgs),
    /// Seeded random instances.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from scratch.
    Verify {
        certificate: PathBuf,
        /// Verify against this instance instead of the embedded one.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// SVG of a certificate's two-dimensional projection.
    Plot {
        certificate: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Instance JSON file.
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of candidates to evaluate.
    #[arg(long, env = "CXTV_BUDGET")]
    budget: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Reparse the written certificate and verify it again.
    #[arg(long)]
    recheck: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CohomologyOp {
    /// Relations of the Chern-class presentation.
    Ideal {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// Whether c_n^m vanishes mod p.
    EulerPower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u64,
    },
    /// Pull a polynomial in c1..ck back to the split torus.
    Splitting {
        #[arg(long)]
        k: usize,
        /// For example "c1^2 - 2*c2".
        #[arg(long)]
        class: String,
    },
    /// Whether (w_2n x)^m vanishes on the real projectivization.
    Projectivization {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(long, value_enum)]
    construction: ConstructionArg,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    /// Rational, for example 1/16.
    #[arg(long)]
    epsilon: String,
    #[arg(long, default_value_t = 1)]
    battery: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Uniform clouds in R^(2d).
    Measures {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t = GenericityArg::Generic)]
        genericity: GenericityArg,
    },
    /// Point sets sized for the requested part counts.
    Tverberg {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
        #[arg(long)]
        colorful: bool,
        #[arg(long)]
        odd: bool,
        #[arg(long, value_enum, default_value_t = GenericityArg::Generic)]
        genericity: GenericityArg,
    },
    /// Same as the `gadget` command.
    Gadget {
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 1)]
        battery: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Circle,
    Z2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    TightDepth,
    TooManyMeasures,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenericityArg {
    Generic,
    Clustered,
}

impl From<GenericityArg> for Genericity {
    fn from(g: GenericityArg) -> Self {
        match g {
            GenericityArg::Generic => Genericity::Generic,
            GenericityArg::Clustered => Genericity::Clustered,
        }
    }
}

/// Exit status: certified, input error, or nothing found within budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Certified,
    Exhausted,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Certified) => ExitCode::SUCCESS,
        Ok(Status::Exhausted) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Transversal(a) => measures_search(&a, Kind::Even),
        Command::Flag { search, k } => measures_search(&search, Kind::Flag(k)),
        Command::OddTransversal(a) => measures_search(&a, Kind::Odd),
        Command::Tverberg(a) => tverberg(&a, TvFlavor::Plain),
        Command::TverbergColorful(a) => tverberg(&a, TvFlavor::Colorful),
        Command::TverbergOdd(a) => tverberg(&a, TvFlavor::Odd),
        Command::Cohomology { op, out } => cohomology(op, out.as_deref()),
        Command::FhIndex { group, n, d, exponents, out } => fh_index(group, n, d, exponents, out.as_deref()),
        Command::Gadget(a) => {
            let f = gadget_file(a.construction, a.d, a.k, &a.epsilon, a.battery)?;
            emit(a.out.as_deref(), &to_json(&f)?)?;
            Ok(Status::Certified)
        }
        Command::Generate { kind, seed, out } => {
            let f = generate(kind, seed)?;
            emit(out.as_deref(), &to_json(&f)?)?;
            Ok(Status::Certified)
        }
        Command::Verify { certificate, instance } => verify(&certificate, instance.as_deref()),
        Command::Plot { certificate, out } => {
            let cert = parse_certificate(&read(&certificate)?)?;
            emit(out.as_deref(), &plot::render(&cert)?)?;
            Ok(Status::Certified)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(a: &SearchArgs, base: SearchConfig) -> SearchConfig {
    SearchConfig { seed: a.seed, workers: a.workers, budget: a.budget.unwrap_or(base.budget), ..base }
}

fn metadata(start: Instant) -> RunMetadata {
    RunMetadata { tool_version: env!("CARGO_PKG_VERSION").into(), elapsed_ms: start.elapsed().as_millis() as u64 }
}

fn write_certificate(a: &SearchArgs, payload: CertificatePayload, instance: InstanceFile, start: Instant) -> Result<Status> {
    let file = CertificateFile::new(payload, instance, start.elapsed().as_millis() as u64);
    if !file.verifier.accepted {
        bail!("internal error: produced certificate was rejected: {:?}", file.verifier.diagnostic);
    }
    let text = to_json(&file)?;
    if a.recheck {
        parse_certificate(&text)?.recheck().map_err(|e| anyhow!("recheck failed: {e}"))?;
    }
    emit(a.out.as_deref(), &text)?;
    Ok(Status::Certified)
}

fn write_report(a: &SearchArgs, kind: &str, report: serde_json::Value, start: Instant) -> Result<Status> {
    let file = ReportFile { schema_version: SCHEMA_VERSION, kind: kind.into(), report, metadata: metadata(start) };
    emit(a.out.as_deref(), &to_json(&file)?)?;
    eprintln!("budget exhausted without a certificate; best-effort report written");
    Ok(Status::Exhausted)
}

#[derive(Clone, Copy)]
enum Kind {
    Even,
    Odd,
    Flag(usize),
}

fn measures_search(a: &SearchArgs, kind: Kind) -> Result<Status> {
    let instance = parse_instance(&read(&a.instance)?)?;
    let ms = instance.payload.measures().ok_or_else(|| anyhow!("expected a measures or gadget instance"))?.to_vec();
    let cfg = config(a, SearchConfig::default());
    let start = Instant::now();
    let k = ms.len().checked_sub(1).ok_or_else(|| anyhow!("instance has no measures"))?;
    let (outcome, name) = match kind {
        Kind::Even => (search_transversal(&ms, k, &cfg)?.map(CertificatePayload::Transversal), "transversal"),
        Kind::Odd => (search_odd_transversal(&ms, k, &cfg)?.map(CertificatePayload::OddTransversal), "odd-transversal"),
        Kind::Flag(k) => (search_flag_transversal(&ms, k, &cfg)?.map(CertificatePayload::Flag), "flag"),
    };
    match outcome {
        SearchOutcome::Certified(p) => write_certificate(a, p, instance, start),
        SearchOutcome::Exhausted(best) => write_report(a, name, best_effort_json(&best)?, start),
    }
}

fn best_effort_json(b: &BestEffort) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(b)?)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TvFlavor {
    Plain,
    Colorful,
    Odd,
}

fn tverberg(a: &SearchArgs, flavor: TvFlavor) -> Result<Status> {
    let instance = parse_instance(&read(&a.instance)?)?;
    let InstancePayload::Tverberg(inst) = &instance.payload else { bail!("expected a Tverberg instance") };
    check_flavor(inst, flavor)?;
    if !inst.within_theorem() {
        eprintln!("note: part counts are not powers of one prime; existence is not guaranteed (exploratory)");
    }
    let cfg = config(a, SearchConfig::tverberg());
    let start = Instant::now();
    match search_tv(inst, &cfg)? {
        TvOutcome::Certified(c) => {
            let inst = instance.clone();
            write_certificate(a, CertificatePayload::Tverberg(*c), inst, start)
        }
        TvOutcome::Exhausted(b) => {
            let mut report = serde_json::to_value(&b)?;
            report["exploratory"] = json!(!inst.within_theorem());
            write_report(a, "tverberg", report, start)
        }
    }
}

fn check_flavor(inst: &TvInstance, flavor: TvFlavor) -> Result<()> {
    let colored = inst.sets.iter().any(|s| s.colors.is_some());
    match flavor {
        TvFlavor::Plain if colored => bail!("instance has colors; use tverberg-colorful"),
        TvFlavor::Colorful if !inst.sets.iter().all(|s| s.colors.is_some()) => {
            bail!("every set of a colorful instance needs colors")
        }
        TvFlavor::Colorful if inst.sets.windows(2).any(|w| w[0].parts != w[1].parts) => {
            bail!("colorful instances need a common part count")
        }
        TvFlavor::Odd if inst.variant != TvVariant::ComplexPlusLine => bail!("instance variant must be complex-plus-line"),
        TvFlavor::Plain | TvFlavor::Colorful if inst.variant != TvVariant::Complex => {
            bail!("instance variant is complex-plus-line; use tverberg-odd")
        }
        _ => Ok(()),
    }
}

fn cohomology(op: CohomologyOp, out: Option<&Path>) -> Result<Status> {
    let report = match op {
        CohomologyOp::Ideal { k, d } => {
            let gens = presentation_ideal(k, d)?;
            json!({ "k": k, "d": d, "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>() })
        }
        CohomologyOp::EulerPower { n, d, m, p } => {
            let r = euler_power_nonvanishing(n, d, m, p)?;
            json!({ "n": n, "d": d, "m": m, "p": p, "nonzero": r.nonzero, "class": r.class })
        }
        CohomologyOp::Splitting { k, class } => {
            let p = Poly::parse(&chern_ring(k), &class)?;
            let image = splitting_pullback(&p)?;
            json!({ "k": k, "class": p.to_string(), "pullback": image.to_string() })
        }
        CohomologyOp::Projectivization { n, d, m } => {
            let v = projectivization_power(n, d, m)?;
            json!({ "n": n, "d": d, "m": m, "nonzero": v.iter().any(|c| !c.is_zero()), "components": v })
        }
    };
    emit(out, &to_json(&report)?)?;
    Ok(Status::Certified)
}

fn fh_index(group: GroupArg, n: usize, d: usize, exponents: Option<Vec<u32>>, out: Option<&Path>) -> Result<Status> {
    let group = match group {
        GroupArg::Circle => Group::Circle,
        GroupArg::Z2 => Group::Z2,
    };
    let exps = match (group, exponents) {
        (Group::Z2, None) => Some(vec![0; n]),
        (_, e) => e,
    };
    let report = key_term_survives(n, d, group, exps.as_deref())?;
    if !report.within_hypothesis {
        eprintln!("warning: parameters lie outside the theorem's hypothesis");
    }
    let value = json!({
        "product_ideal": index_product_of_spheres(n, d, group)?,
        "sphere_ideal": index_representation_sphere(n, d, group, exps.as_deref())?,
        "report": report,
    });
    emit(out, &to_json(&value)?)?;
    Ok(if report.contradiction_established { Status::Certified } else { Status::Exhausted })
}

fn gadget_file(c: ConstructionArg, d: usize, k: usize, eps: &str, battery: usize) -> Result<InstanceFile> {
    let e = parse_q(eps)?;
    let g = match c {
        ConstructionArg::TightDepth => make_tight_depth_instance(d, k, &e, battery)?,
        ConstructionArg::TooManyMeasures => make_too_many_measures_instance(d, k, &e, battery)?,
    };
    let name = match g.construction {
        Construction::TightDepth => "tight-depth",
        Construction::TooManyMeasures => "too-many-measures",
    };
    let provenance = Provenance {
        generator: format!("gadget/{name}"),
        seed: 0,
        parameters: json!({ "d": d, "k": k, "epsilon": eps, "battery": battery }),
    };
    Ok(InstanceFile::new(InstancePayload::Gadget(g), Some(provenance)))
}

fn generate(kind: GenerateKind, seed: u64) -> Result<InstanceFile> {
    Ok(match kind {
        GenerateKind::Measures { d, sizes, genericity } => {
            let measures = generate_measures(d, &sizes, seed, genericity.into())?;
            let provenance = Provenance {
                generator: "measures".into(),
                seed,
                parameters: json!({ "d": d, "sizes": sizes, "genericity": genericity_name(genericity) }),
            };
            InstanceFile::new(InstancePayload::Measures(MeasuresPayload { d, measures }), Some(provenance))
        }
        GenerateKind::Tverberg { d, k, parts, colorful, odd, genericity } => {
            let variant = if odd { TvVariant::ComplexPlusLine } else { TvVariant::Complex };
            let inst = generate_tverberg(d, k, &parts, variant, colorful, seed, genericity.into())?;
            let provenance = Provenance {
                generator: "tverberg".into(),
                seed,
                parameters: json!({
                    "d": d, "k": k, "parts": parts, "colorful": colorful, "odd": odd,
                    "genericity": genericity_name(genericity),
                }),
            };
            InstanceFile::new(InstancePayload::Tverberg(inst), Some(provenance))
        }
        GenerateKind::Gadget { construction, d, k, epsilon, battery } => {
            gadget_file(construction, d, k, &epsilon, battery)?
        }
    })
}

fn genericity_name(g: GenericityArg) -> &'static str {
    match g {
        GenericityArg::Generic => "generic",
        GenericityArg::Clustered => "clustered",
    }
}

fn verify(certificate: &Path, instance: Option<&Path>) -> Result<Status> {
    let cert = parse_certificate(&read(certificate)?)?;
    let verdict = match instance {
        Some(p) => {
            let inst = parse_instance(&read(p)?)?;
            cxtv_core::io::verify_payload(&cert.payload, &inst.payload)
        }
        None => cert.recheck(),
    };
    match verdict {
        Ok(()) => {
            println!("accepted");
            Ok(Status::Certified)
        }
        Err(e) => bail!("certificate rejected: {e}"),
    }
}
