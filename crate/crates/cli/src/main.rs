//! Command-line front end for the complete-ideal calculus.
//!
//! Predicate commands exit with 0 for a mathematical "yes", 1 for a
//! mathematical "no", and 2 on errors, so they compose in shell pipelines.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use zariski::classifier;
use zariski::document::{Document, DocumentError};
use zariski::geometry::Resolution;
use zariski::ideal::{IdealClass, PointBasis};
use zariski::monomial::{parse_monomials, Staircase};
use zariski::verify;

#[derive(Parser)]
#[command(
    name = "zariski",
    version,
    about = "Exact calculus of complete ideals in a two-dimensional regular local ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Args)]
struct DocArgs {
    /// Input document (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct IdealArgs {
    #[command(flatten)]
    doc: DocArgs,
    /// Name of an ideal declared in the document
    #[arg(long)]
    ideal: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check every constellation invariant and the completeness of each ideal
    Validate(DocArgs),
    /// Factor an ideal into simple ideals
    Factor(IdealArgs),
    /// Compute the (iterated) adjoint of an ideal
    Adjoint {
        #[command(flatten)]
        args: IdealArgs,
        /// How many times to apply the adjoint
        #[arg(long, default_value_t = 1)]
        iterate: u64,
    },
    /// Decide whether ideal^power is the adjoint of some ideal
    IsAdjoint {
        #[command(flatten)]
        args: IdealArgs,
        /// The power to test
        #[arg(long, default_value_t = 1)]
        power: u64,
    },
    /// Smallest power of the ideal that is an adjoint, if any
    MinAdjointExponent(IdealArgs),
    /// Decide whether the blowup along the ideal is Gorenstein
    Gorenstein(IdealArgs),
    /// Multiply the ideal with its adjoint; the blowup becomes Gorenstein
    Gorensteinfy(IdealArgs),
    /// Order, colength, multiplicity, generators, minimal multiplicity
    Invariants(IdealArgs),
    /// Intersection matrix of the exceptional curves
    Intersection {
        #[command(flatten)]
        doc: DocArgs,
        /// Restrict to the base points of this ideal
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Decide whether first^power * second^q is an adjoint, all routes
    TwoFactor {
        #[command(flatten)]
        doc: DocArgs,
        /// The order-one companion factor
        #[arg(long)]
        first: String,
        /// The main factor
        #[arg(long)]
        second: String,
        /// Exponent of the companion
        #[arg(long, default_value_t = 1)]
        power: u64,
    },
    /// Operations on two-variable monomial ideals
    Monomial {
        #[command(subcommand)]
        op: MonomialCommand,
    },
    /// Run the full cross-route verification suites
    VerifyCorpus {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Render the cluster as a DOT graph
    ExportDot {
        #[command(flatten)]
        doc: DocArgs,
        /// Label nodes with the multiplicities and excesses of this ideal
        #[arg(long)]
        ideal: Option<String>,
    },
}

#[derive(Args)]
struct GensArgs {
    /// Monomial generators, e.g. "x^2, y^3"
    #[arg(long)]
    gens: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand)]
enum MonomialCommand {
    /// Integral closure of the monomial ideal
    Closure(GensArgs),
    /// Adjoint ideal through the Newton polygon
    Adjoint(GensArgs),
    /// Cluster of base points, emitted as a document
    PointBasis(GensArgs),
    /// Number of monomials outside the ideal
    Colength(GensArgs),
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate(args) => validate(args),
        Command::Factor(args) => factor(args),
        Command::Adjoint { args, iterate } => adjoint(args, iterate),
        Command::IsAdjoint { args, power } => is_adjoint(args, power),
        Command::MinAdjointExponent(args) => min_adjoint_exponent(args),
        Command::Gorenstein(args) => gorenstein(args),
        Command::Gorensteinfy(args) => gorensteinfy(args),
        Command::Invariants(args) => invariants(args),
        Command::Intersection { doc, ideal } => intersection(doc, ideal),
        Command::TwoFactor {
            doc,
            first,
            second,
            power,
        } => two_factor(doc, first, second, power),
        Command::Monomial { op } => monomial(op),
        Command::VerifyCorpus { format } => verify_corpus(format),
        Command::ExportDot { doc, ideal } => export_dot(doc, ideal),
    }
}

fn load(args: &DocArgs) -> Result<Document> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    Ok(Document::parse(&text)?)
}

fn complete_ideal(doc: &Document, name: &str) -> Result<IdealClass> {
    let basis = doc.ideal(name)?;
    IdealClass::from_basis(basis.clone()).map_err(|e| {
        anyhow!(
            "ideal {name:?} is not complete: {}",
            rename(doc, &e.to_string())
        )
    })
}

/// Replaces internal point ids by document names in a message.
fn rename(doc: &Document, message: &str) -> String {
    let mut out = message.to_string();
    for p in doc.constellation().points().rev() {
        out = out.replace(&p.to_string(), doc.point_name(p));
    }
    out
}

fn named_basis(doc: &Document, values: &[u64]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for p in doc.constellation().points() {
        if values[p.index()] > 0 {
            map.insert(doc.point_name(p).to_string(), json!(values[p.index()]));
        }
    }
    serde_json::Value::Object(map)
}

fn basis_tuple(values: &[u64]) -> String {
    let entries: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", entries.join(", "))
}

fn factorization_text(doc: &Document, ideal: &IdealClass) -> String {
    let factors = ideal.factorize();
    if factors.is_empty() {
        return "unit ideal".to_string();
    }
    factors
        .factors()
        .iter()
        .map(|&(p, e)| {
            let base = if p == doc.constellation().root() {
                "m".to_string()
            } else {
                format!("p({})", doc.point_name(p))
            };
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn factorization_json(doc: &Document, ideal: &IdealClass) -> serde_json::Value {
    json!(ideal
        .factorize()
        .factors()
        .iter()
        .map(|&(p, e)| json!({"point": doc.point_name(p), "exponent": e}))
        .collect::<Vec<_>>())
}

fn validate(args: DocArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let doc = match Document::parse(&text) {
        Ok(doc) => doc,
        Err(DocumentError::InvalidConstellation(report)) => {
            match args.format {
                Format::Text => println!("invalid constellation: {report}"),
                Format::Structured => {
                    println!("{}", json!({"valid": false, "constellation": report}))
                }
            }
            return Ok(1);
        }
        Err(other) => return Err(other.into()),
    };

    let mut incomplete = Vec::new();
    for (name, basis) in doc.ideals() {
        let excess = basis.excess();
        for p in doc.constellation().points() {
            if excess.value(p) < 0 {
                incomplete.push((name.to_string(), doc.point_name(p).to_string()));
            }
        }
    }
    match args.format {
        Format::Text => {
            println!(
                "constellation: valid ({} points)",
                doc.constellation().len()
            );
            for (name, _) in doc.ideals() {
                let bad: Vec<&str> = incomplete
                    .iter()
                    .filter(|(n, _)| n == name)
                    .map(|(_, p)| p.as_str())
                    .collect();
                if bad.is_empty() {
                    println!("ideal {name}: complete");
                } else {
                    println!(
                        "ideal {name}: proximity inequality fails at {}",
                        bad.join(", ")
                    );
                }
            }
        }
        Format::Structured => {
            let ideals: Vec<serde_json::Value> = doc
                .ideals()
                .map(|(name, _)| {
                    let bad: Vec<&str> = incomplete
                        .iter()
                        .filter(|(n, _)| n == name)
                        .map(|(_, p)| p.as_str())
                        .collect();
                    json!({"name": name, "complete": bad.is_empty(), "violations": bad})
                })
                .collect();
            println!("{}", json!({"valid": true, "ideals": ideals}));
        }
    }
    Ok(if incomplete.is_empty() { 0 } else { 1 })
}

fn factor(args: IdealArgs) -> Result<u8> {
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    match args.doc.format {
        Format::Text => println!("{}", factorization_text(&doc, &ideal)),
        Format::Structured => println!(
            "{}",
            json!({"ideal": args.ideal, "factorization": factorization_json(&doc, &ideal)})
        ),
    }
    Ok(0)
}

fn adjoint(args: IdealArgs, iterate: u64) -> Result<u8> {
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    let result = ideal.iterated_adjoint(iterate);
    match args.doc.format {
        Format::Text => {
            println!("basis: {}", basis_tuple(result.values()));
            println!("factorization: {}", factorization_text(&doc, &result));
        }
        Format::Structured => println!(
            "{}",
            json!({
                "ideal": args.ideal,
                "iterate": iterate,
                "basis": named_basis(&doc, result.values()),
                "factorization": factorization_json(&doc, &result),
            })
        ),
    }
    Ok(0)
}

fn is_adjoint(args: IdealArgs, power: u64) -> Result<u8> {
    if power == 0 {
        bail!("the power must be positive");
    }
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    let checks = ideal
        .adjoint_power_checks(power)
        .map_err(|e| anyhow!("{e}"))?;
    let holds = checks.iter().all(|c| c.holds());
    match args.doc.format {
        Format::Text => {
            if holds {
                let source = ideal.adjoint_source(power).expect("the checks hold");
                println!(
                    "yes: power {power} is the adjoint of {}",
                    basis_tuple(source.values())
                );
            } else {
                println!("no: power {power} is not an adjoint");
                for c in checks.iter().filter(|c| !c.holds()) {
                    println!(
                        "  at {}: {}*excess + 1 = {} < {} = degree sum over proximate base points",
                        doc.point_name(c.point),
                        power,
                        c.bound,
                        c.proximate_degree_sum
                    );
                }
            }
        }
        Format::Structured => {
            let source = holds.then(|| {
                let source = ideal.adjoint_source(power).expect("the checks hold");
                named_basis(&doc, source.values())
            });
            let culprits: Vec<serde_json::Value> = checks
                .iter()
                .filter(|c| !c.holds())
                .map(|c| {
                    json!({
                        "point": doc.point_name(c.point),
                        "bound": c.bound,
                        "proximate_degree_sum": c.proximate_degree_sum,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "ideal": args.ideal,
                    "power": power,
                    "is_adjoint": holds,
                    "source": source,
                    "culprits": culprits,
                })
            );
        }
    }
    Ok(if holds { 0 } else { 1 })
}

fn min_adjoint_exponent(args: IdealArgs) -> Result<u8> {
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    if ideal.is_unit() {
        bail!("the unit ideal has no m-primary powers");
    }
    let exponent = ideal.min_adjoint_exponent();
    match args.doc.format {
        Format::Text => match exponent {
            Some(n) => println!("{n}"),
            None => println!("none: no power is an adjoint (the blowup is not Gorenstein)"),
        },
        Format::Structured => println!(
            "{}",
            json!({"ideal": args.ideal, "min_adjoint_exponent": exponent})
        ),
    }
    Ok(if exponent.is_some() { 0 } else { 1 })
}

fn gorenstein_culprits(doc: &Document, ideal: &IdealClass) -> Vec<String> {
    let c = doc.constellation();
    let excess = ideal.excess();
    let mut culprits = Vec::new();
    for b in ideal.support() {
        if excess.value(b) != 0 {
            continue;
        }
        let proximate = classifier::proximate_support_points(ideal, b);
        if proximate.len() != 1 {
            culprits.push(format!(
                "{}: {} proximate base points (need exactly one of degree 1)",
                doc.point_name(b),
                proximate.len()
            ));
        } else if c.degree_between(b, proximate[0]) != Some(1) {
            culprits.push(format!(
                "{}: the proximate base point {} has degree {}",
                doc.point_name(b),
                doc.point_name(proximate[0]),
                c.degree_between(b, proximate[0]).expect("descendant")
            ));
        }
    }
    culprits
}

fn gorenstein(args: IdealArgs) -> Result<u8> {
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    if ideal.is_unit() {
        bail!("the unit ideal blows up nothing");
    }
    let holds = ideal.is_blowup_gorenstein();
    let culprits = gorenstein_culprits(&doc, &ideal);
    match args.doc.format {
        Format::Text => {
            if holds {
                println!("yes: the blowup is Gorenstein");
            } else {
                println!("no: the blowup is not Gorenstein");
                for line in &culprits {
                    println!("  {line}");
                }
            }
        }
        Format::Structured => println!(
            "{}",
            json!({"ideal": args.ideal, "gorenstein": holds, "culprits": culprits})
        ),
    }
    Ok(if holds { 0 } else { 1 })
}

fn gorensteinfy(args: IdealArgs) -> Result<u8> {
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    if ideal.is_unit() {
        bail!("the unit ideal blows up nothing");
    }
    let result = ideal.gorensteinfication();
    match args.doc.format {
        Format::Text => {
            println!("basis: {}", basis_tuple(result.values()));
            println!("factorization: {}", factorization_text(&doc, &result));
        }
        Format::Structured => println!(
            "{}",
            json!({
                "ideal": args.ideal,
                "basis": named_basis(&doc, result.values()),
                "factorization": factorization_json(&doc, &result),
            })
        ),
    }
    Ok(0)
}

fn invariants(args: IdealArgs) -> Result<u8> {
    let doc = load(&args.doc)?;
    let ideal = complete_ideal(&doc, &args.ideal)?;
    if ideal.is_unit() {
        bail!("ideal {:?} is the unit ideal", args.ideal);
    }
    let order = ideal.order();
    let colength = ideal.colength();
    let multiplicity = ideal.multiplicity().expect("nonzero ideal");
    let generators = ideal.min_generators().expect("nonzero ideal");
    let minimal = ideal.has_minimal_multiplicity().expect("nonzero ideal");
    let simple = ideal.is_simple();
    match args.doc.format {
        Format::Text => {
            println!("order: {order}");
            println!("colength: {colength}");
            println!("multiplicity: {multiplicity}");
            println!("generators: {generators}");
            println!("minimal multiplicity: {minimal}");
            println!("simple: {simple}");
        }
        Format::Structured => println!(
            "{}",
            json!({
                "ideal": args.ideal,
                "order": order,
                "colength": colength,
                "multiplicity": multiplicity,
                "generators": generators,
                "minimal_multiplicity": minimal,
                "simple": simple,
            })
        ),
    }
    Ok(0)
}

fn intersection(doc_args: DocArgs, ideal: Option<String>) -> Result<u8> {
    let doc = load(&doc_args)?;
    let resolution = match &ideal {
        Some(name) => {
            let ideal = complete_ideal(&doc, name)?;
            if ideal.is_unit() {
                bail!("ideal {name:?} is the unit ideal");
            }
            Resolution::for_ideal(&ideal)
        }
        None => Resolution::full(doc.constellation()),
    };
    let matrix = resolution.strict_intersection_matrix();
    let names: Vec<&str> = resolution
        .points()
        .iter()
        .map(|&p| doc.point_name(p))
        .collect();
    match doc_args.format {
        Format::Text => {
            let width = names
                .iter()
                .map(|n| n.len())
                .chain(matrix.iter().flatten().map(|v| v.to_string().len()))
                .max()
                .unwrap_or(2)
                + 1;
            print!("{:width$}", "");
            for name in &names {
                print!("{name:>width$}");
            }
            println!();
            for (i, row) in matrix.iter().enumerate() {
                print!("{:>width$}", names[i]);
                for v in row {
                    print!("{v:>width$}");
                }
                println!();
            }
        }
        Format::Structured => println!("{}", json!({"points": names, "matrix": matrix})),
    }
    Ok(0)
}

fn two_factor(doc_args: DocArgs, first: String, second: String, power: u64) -> Result<u8> {
    if power == 0 {
        bail!("the power must be positive");
    }
    let doc = load(&doc_args)?;
    let companion = complete_ideal(&doc, &first)?;
    let main = complete_ideal(&doc, &second)?;
    let report = classifier::two_factor_adjoint_test(&companion, &main, power)
        .map_err(|e| anyhow!("{e}"))?;
    match doc_args.format {
        Format::Text => {
            println!("holds: {}", report.holds());
            println!("  basis shape route: {}", report.shape_route);
            println!("  adjoint power route: {}", report.adjoint_route);
            println!("  length identity route: {}", report.length_route);
            println!("  direct evaluation: {}", report.direct_route);
        }
        Format::Structured => println!(
            "{}",
            json!({
                "first": first,
                "second": second,
                "power": power,
                "holds": report.holds(),
                "order": report.order,
                "shape_route": report.shape_route,
                "adjoint_route": report.adjoint_route,
                "length_route": report.length_route,
                "direct_route": report.direct_route,
            })
        ),
    }
    Ok(if report.holds() { 0 } else { 1 })
}

fn staircase_json(s: &Staircase) -> serde_json::Value {
    json!(s
        .generators()
        .iter()
        .map(|&(a, b)| json!([a, b]))
        .collect::<Vec<_>>())
}

fn monomial(op: MonomialCommand) -> Result<u8> {
    match op {
        MonomialCommand::Closure(args) => {
            let s = parse_monomials(&args.gens)?;
            let closure = s.closure()?;
            match args.format {
                Format::Text => println!("{closure}"),
                Format::Structured => println!(
                    "{}",
                    json!({"closure": closure.to_string(), "generators": staircase_json(&closure)})
                ),
            }
            Ok(0)
        }
        MonomialCommand::Adjoint(args) => {
            let s = parse_monomials(&args.gens)?;
            let adjoint = s.adjoint()?;
            match args.format {
                Format::Text => println!("{adjoint}"),
                Format::Structured => println!(
                    "{}",
                    json!({"adjoint": adjoint.to_string(), "generators": staircase_json(&adjoint)})
                ),
            }
            Ok(0)
        }
        MonomialCommand::PointBasis(args) => {
            let s = parse_monomials(&args.gens)?;
            let closed = s.closure()?;
            if closed != s {
                bail!("the ideal is not integrally closed; its closure is {closed}");
            }
            let (constellation, ideal) = s.base_points()?;
            let names: Vec<String> = constellation
                .points()
                .map(|p| format!("A{}", p.index()))
                .collect();
            let basis = PointBasis::new(&constellation, ideal.values().to_vec())
                .expect("basis length matches");
            let doc = Document::new(
                Arc::clone(&constellation),
                names,
                vec![("I".to_string(), basis)],
                vec![("I".to_string(), s)],
            );
            match args.format {
                Format::Text | Format::Structured => print!("{}", doc.to_text()),
            }
            Ok(0)
        }
        MonomialCommand::Colength(args) => {
            let s = parse_monomials(&args.gens)?;
            let colength = s.colength()?;
            match args.format {
                Format::Text => println!("{colength}"),
                Format::Structured => println!("{}", json!({"colength": colength})),
            }
            Ok(0)
        }
    }
}

fn verify_corpus(format: Format) -> Result<u8> {
    let outcomes = verify::run_all();
    let all_passed = outcomes.iter().all(|o| o.passed());
    match format {
        Format::Text => {
            for outcome in &outcomes {
                println!("{}", outcome.summary());
            }
        }
        Format::Structured => {
            let rows: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "suite": o.name,
                        "passed": o.passed(),
                        "instances": o.instances,
                        "failures": o.failures,
                    })
                })
                .collect();
            println!("{}", json!(rows));
        }
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn export_dot(doc_args: DocArgs, ideal: Option<String>) -> Result<u8> {
    let doc = load(&doc_args)?;
    print!("{}", doc.export_dot(ideal.as_deref())?);
    Ok(0)
}
