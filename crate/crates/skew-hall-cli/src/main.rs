//! Command-line frontend: enumeration, Hall products, brackets, duals,
//! tableaux, and the bialgebra verification suite.
//!
//! Exit codes: 0 success, 1 domain error (or a failed verification),
//! 2 usage error, 3 resource-cap abort.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use skew_hall::budget::Budget;
use skew_hall::hall::{
    self, class_wire, dual_tensor_wire, element_wire, tensor_wire, HallAlgebra, HallError,
};
use skew_hall::modules::{
    self, CategorySpec, ModuleClass, ModuleError, ModuleLiteral, PointedModule,
};
use skew_hall::shapes::{self, ShapeError};
use skew_hall::tableaux::{self, TableauError};

const WIRE_VERSION: u32 = 1;
const CAP_ENV: &str = "SKEW_HALL_CAP";

#[derive(Parser)]
#[command(
    name = "skew-hall",
    version,
    about = "Hall algebra of n-dimensional skew shapes"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Item ceiling for enumerations (overrides SKEW_HALL_CAP).
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct CatArgs {
    /// Ambient dimension (generator count).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Category flags, comma separated: any of `a` (type α), `gr`
    /// (gradable), `origin` (supported at the origin). Default: none,
    /// the full Hall algebra without support condition.
    #[arg(long, value_parser = parse_cat_flags, default_value = "")]
    cat: CatFlags,
}

#[derive(Clone, Copy, Debug, Default)]
struct CatFlags {
    alpha: bool,
    gradable: bool,
    origin: bool,
}

fn parse_cat_flags(s: &str) -> Result<CatFlags, String> {
    let mut flags = CatFlags::default();
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token {
            "a" | "alpha" => flags.alpha = true,
            "gr" | "graded" => flags.gradable = true,
            "origin" => flags.origin = true,
            other => {
                return Err(format!(
                    "unknown category flag `{other}` (use a, gr, origin)"
                ))
            }
        }
    }
    Ok(flags)
}

impl CatArgs {
    fn spec(&self) -> CategorySpec {
        CategorySpec {
            n: self.n,
            type_alpha: self.cat.alpha,
            gradable: self.cat.gradable,
            origin_support: self.cat.origin,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List canonical connected skew shapes with k boxes.
    EnumerateShapes {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Include disconnected (but convex) shapes.
        #[arg(long)]
        all: bool,
    },
    /// List isomorphism classes of modules of dimension d in a category.
    EnumerateModules {
        #[command(flatten)]
        cat: CatArgs,
        #[arg(long)]
        d: usize,
        /// Keep only indecomposable classes.
        #[arg(long)]
        indecomposable: bool,
    },
    /// Hall product of two classes (shape literals or module JSON).
    Product {
        #[command(flatten)]
        cat: CatArgs,
        left: String,
        right: String,
    },
    /// Lie bracket of two connected shapes in the skew category.
    Bracket {
        #[arg(long, default_value_t = 2)]
        n: usize,
        left: String,
        right: String,
    },
    /// Coproduct of a class: all two-part splits of its components.
    Coproduct {
        #[arg(long, default_value_t = 2)]
        n: usize,
        class: String,
    },
    /// Dual coproduct of an indecomposable class.
    DualCoproduct {
        #[command(flatten)]
        cat: CatArgs,
        class: String,
    },
    /// Standard tableaux of a skew shape (n = 2).
    Tableaux {
        shape: String,
        /// Print only the two counts (backtracking and chain oracle).
        #[arg(long)]
        count_only: bool,
    },
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// ASCII diagram of a shape (n = 2).
    Render { shape: String },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check the graded bialgebra axioms up to a degree bound.
    Bialgebra {
        #[command(flatten)]
        cat: CatArgs,
        #[arg(long)]
        bound: usize,
    },
}

enum CliError {
    Domain(String),
    Cap(String),
    VerificationFailed,
}

impl From<ShapeError> for CliError {
    fn from(e: ShapeError) -> Self {
        match e {
            ShapeError::Budget(b) => CliError::Cap(b.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Budget(b) => CliError::Cap(b.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<HallError> for CliError {
    fn from(e: HallError) -> Self {
        match e {
            HallError::Budget(b)
            | HallError::Module(ModuleError::Budget(b))
            | HallError::Shape(ShapeError::Budget(b)) => CliError::Cap(b.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<TableauError> for CliError {
    fn from(e: TableauError) -> Self {
        match e {
            TableauError::Budget(b) => CliError::Cap(b.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn budget_from(cap: Option<u64>) -> Budget {
    let limit = cap
        .or_else(|| {
            std::env::var(CAP_ENV)
                .ok()
                .and_then(|v| v.parse::<u64>().ok())
        })
        .unwrap_or(Budget::DEFAULT_LIMIT);
    Budget::new(limit)
}

/// A class argument: module JSON when it starts with `{`, a structured
/// shape (JSON array of boxes) when it starts with `[`, and the text
/// literal otherwise. A disconnected convex shape decomposes into its
/// components.
fn parse_class(n: usize, text: &str) -> Result<ModuleClass, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let lit: ModuleLiteral = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Domain(format!("cannot parse module literal: {e}")))?;
        let module = PointedModule::try_from(lit)?;
        modules::validate(&module).map_err(|v| CliError::Domain(v.to_string()))?;
        if module.n() != n {
            return Err(CliError::Domain(format!(
                "module has n = {}, expected n = {n}",
                module.n()
            )));
        }
        Ok(modules::canonical_class(&module))
    } else {
        let shape = parse_shape(n, trimmed)?;
        Ok(ModuleClass::of_shape(&shape))
    }
}

/// A shape argument: structured (array of integer arrays) or text literal.
fn parse_shape(n: usize, text: &str) -> Result<skew_hall::SkewShape, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let points: Vec<Vec<i64>> = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Domain(format!("cannot parse structured shape: {e}")))?;
        Ok(shapes::canonicalize(n, points)?)
    } else {
        Ok(shapes::parse_shape_literal(n, trimmed)?)
    }
}

fn class_text(class: &ModuleClass) -> String {
    class.to_string()
}

/// Diagram block for a class with 2-dimensional shape components.
fn class_diagram(class: &ModuleClass) -> Option<String> {
    if class.n() != 2 || class.is_zero() || !class.is_skew() {
        return None;
    }
    let parts: Vec<String> = class
        .components()
        .iter()
        .filter_map(|c| match c {
            modules::ComponentClass::Shape(s) => shapes::render_ascii(s).ok(),
            modules::ComponentClass::Table(_) => None,
        })
        .collect();
    Some(parts.join("\n⊕\n"))
}

fn print_element(f: &hall::HallElement, format: Format, command: &str) {
    match format {
        Format::Structured => {
            let doc = json!({
                "version": WIRE_VERSION,
                "command": command,
                "terms": element_wire(f),
            });
            println!("{}", serde_json::to_string(&doc).unwrap());
        }
        Format::Text => {
            if f.is_zero() {
                println!("0");
                return;
            }
            for (class, coeff) in f.terms() {
                println!("{}  {}", hall::format_rational(coeff), class_text(class));
                if let Some(diagram) = class_diagram(class) {
                    for line in diagram.lines() {
                        println!("    {line}");
                    }
                }
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let budget = budget_from(cli.cap);
    match &cli.command {
        Command::EnumerateShapes { n, k, all } => {
            let list = if *all {
                shapes::enumerate_shapes(*n, *k, &budget)?
            } else {
                shapes::enumerate_connected_shapes(*n, *k, &budget)?
            };
            match cli.format {
                Format::Structured => {
                    let rows: Vec<Vec<Vec<i64>>> = list
                        .iter()
                        .map(|s| s.boxes().iter().map(|b| b.to_vec()).collect())
                        .collect();
                    let doc = json!({
                        "version": WIRE_VERSION,
                        "command": "enumerate-shapes",
                        "n": n,
                        "k": k,
                        "count": list.len(),
                        "shapes": rows,
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    println!("{} shapes", list.len());
                    for s in &list {
                        println!("{s}");
                    }
                }
            }
            Ok(())
        }
        Command::EnumerateModules {
            cat,
            d,
            indecomposable,
        } => {
            let spec = cat.spec();
            let classes = modules::enumerate_modules(*d, &spec, *indecomposable, &budget)?;
            match cli.format {
                Format::Structured => {
                    let rows: Vec<_> = classes.iter().map(class_wire).collect();
                    let doc = json!({
                        "version": WIRE_VERSION,
                        "command": "enumerate-modules",
                        "n": spec.n,
                        "d": d,
                        "count": classes.len(),
                        "classes": rows,
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    println!("{} classes", classes.len());
                    for c in &classes {
                        println!("{c}");
                    }
                }
            }
            Ok(())
        }
        Command::Product { cat, left, right } => {
            let spec = cat.spec();
            let a = parse_class(spec.n, left)?;
            let b = parse_class(spec.n, right)?;
            let alg = HallAlgebra::with_budget(spec, budget);
            let f = alg.product(&hall::HallElement::delta(a), &hall::HallElement::delta(b))?;
            print_element(&f, cli.format, "product");
            Ok(())
        }
        Command::Bracket { n, left, right } => {
            let a = parse_class(*n, left)?;
            let b = parse_class(*n, right)?;
            let alg = HallAlgebra::with_budget(CategorySpec::skew(*n), budget);
            let f = alg.bracket(&a, &b)?;
            print_element(&f, cli.format, "bracket");
            Ok(())
        }
        Command::Coproduct { n, class } => {
            let c = parse_class(*n, class)?;
            let alg = HallAlgebra::with_budget(CategorySpec::full(*n), budget);
            let t = alg.coproduct(&hall::HallElement::delta(c));
            match cli.format {
                Format::Structured => {
                    let doc = json!({
                        "version": WIRE_VERSION,
                        "command": "coproduct",
                        "terms": tensor_wire(&t),
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    for ((a, b), coeff) in t.terms() {
                        println!(
                            "{}  {} ⊗ {}",
                            hall::format_rational(coeff),
                            class_text(a),
                            class_text(b)
                        );
                    }
                }
            }
            Ok(())
        }
        Command::DualCoproduct { cat, class } => {
            let spec = cat.spec();
            let c = parse_class(spec.n, class)?;
            let alg = HallAlgebra::with_budget(spec, budget);
            let t = alg.dual_coproduct(&c)?;
            match cli.format {
                Format::Structured => {
                    let doc = json!({
                        "version": WIRE_VERSION,
                        "command": "dual-coproduct",
                        "terms": dual_tensor_wire(&t),
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    for ((a, b), coeff) in t.terms() {
                        println!(
                            "{}  x[{}] ⊗ x[{}]",
                            hall::format_rational(coeff),
                            class_text(a),
                            class_text(b)
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Tableaux { shape, count_only } => {
            let s = parse_shape(2, shape)?;
            let chains = tableaux::count_standard_via_chains(&s, &budget)?;
            let list = tableaux::enumerate_standard(&s, &budget)?;
            match cli.format {
                Format::Structured => {
                    let fillings: Vec<Vec<u32>> =
                        list.iter().map(|t| t.entries().to_vec()).collect();
                    let mut doc = json!({
                        "version": WIRE_VERSION,
                        "command": "tableaux",
                        "shape": s.boxes(),
                        "count": list.len(),
                        "chain_count": chains,
                    });
                    if !count_only {
                        doc["tableaux"] = json!(fillings);
                    }
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    println!(
                        "{} standard tableaux ({} maximal chains)",
                        list.len(),
                        chains
                    );
                    if !count_only {
                        for t in &list {
                            println!("{t}");
                            println!();
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Verify(VerifyCommand::Bialgebra { cat, bound }) => {
            let spec = cat.spec();
            let alg = HallAlgebra::with_budget(spec, budget);
            let report = alg.verify_axioms(*bound)?;
            match cli.format {
                Format::Structured => {
                    let checks: Vec<_> = report
                        .checks
                        .iter()
                        .map(|c| {
                            json!({
                                "name": c.name,
                                "passed": c.passed,
                                "witness": c.witness,
                            })
                        })
                        .collect();
                    let doc = json!({
                        "version": WIRE_VERSION,
                        "command": "verify bialgebra",
                        "category": {
                            "n": spec.n,
                            "type_alpha": spec.type_alpha,
                            "gradable": spec.gradable,
                            "origin_support": spec.origin_support,
                        },
                        "bound": bound,
                        "all_passed": report.all_passed(),
                        "checks": checks,
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    print!("{report}");
                    println!(
                        "{}",
                        if report.all_passed() {
                            "all checks passed"
                        } else {
                            "FAILED"
                        }
                    );
                }
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::VerificationFailed)
            }
        }
        Command::Render { shape } => {
            let s = parse_shape(2, shape)?;
            match cli.format {
                Format::Structured => {
                    let doc = json!({
                        "version": WIRE_VERSION,
                        "command": "render",
                        "shape": s.boxes(),
                        "diagram": shapes::render_ascii(&s)?,
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    println!("{}", shapes::render_ascii(&s)?);
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::VerificationFailed) => ExitCode::from(1),
        Err(CliError::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
