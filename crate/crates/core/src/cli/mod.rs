//! Command-line surface. Every subcommand is a thin adapter over one core
//! operation or pipeline: parse inputs, call the operation, emit the result.
//!
//! Exit codes: 0 success, 1 domain error (invalid input or precondition),
//! 2 not found within budget, 64 usage.

use std::fs;
use std::io::Write as _;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagram::{
    destabilize, diagram_from_json, diagram_to_json, dual_cell_counts, enumerate_anchors,
    good_to_great, handle_slide, stabilize, HeegaardDiagram,
    SlideSpec, SystemClass,
};
use crate::search::{
    pachner_path, sigma_explore, unstabilize_search, Budget, PachnerOutcome, UnstabilizeOutcome,
};
use crate::tricomplex::{
    barycentric_subdivision, flip, flip_sites, parse_tri, write_tri, FlipKind, Triangulation,
};
use crate::waldhausen::{wald_pipeline, ConfigBuilder, Configuration};

const EXIT_OK: i32 = 0;
const EXIT_DOMAIN: i32 = 1;
const EXIT_NOT_FOUND: i32 = 2;
const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "heegaard",
    version,
    about = "Combinatorial engine for Heegaard splittings: triangulations, curve diagrams, reduction runs, and searches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Triangulation operations
    Tri {
        #[command(subcommand)]
        cmd: TriCmd,
    },
    /// Diagram operations
    Diag {
        #[command(subcommand)]
        cmd: DiagCmd,
    },
    /// Reduction engine
    Wald {
        #[command(subcommand)]
        cmd: WaldCmd,
    },
    /// Stabilization graph exploration
    Sigma {
        #[command(subcommand)]
        cmd: SigmaCmd,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum visited nodes
    #[arg(long, default_value_t = 1_000_000)]
    budget_nodes: usize,
    /// Maximum path length / search depth
    #[arg(long, default_value_t = 64)]
    budget_depth: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.budget_nodes,
            max_depth: self.budget_depth,
        }
    }
}

#[derive(Subcommand)]
enum TriCmd {
    /// Write a built-in triangulation
    New {
        /// The five-tetrahedron boundary of the 4-simplex
        #[arg(long)]
        boundary_four_simplex: bool,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check all validity conditions and print the report
    Validate {
        file: String,
        /// Also run the simplicial (open cells embed) check
        #[arg(long)]
        embedding: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Genus of the splitting associated to the triangulation
    Genus { file: String },
    /// Apply a bistellar flip
    Flip {
        file: String,
        /// 1-4, 2-3, 3-2 or 4-1
        #[arg(long)]
        kind: String,
        /// Site index in the canonical enumeration
        #[arg(long)]
        index: Option<usize>,
        /// List the applicable sites instead of flipping
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Barycentric subdivision
    Subdivide {
        file: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Flip sequence connecting two triangulations
    Path {
        file1: String,
        file2: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Worker threads for frontier expansion
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum DiagCmd {
    /// Write a built-in diagram
    New {
        /// Standard genus-g diagram
        #[arg(long, value_name = "G")]
        standard_s3: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check diagram validity and print the reconstruction summary
    Validate {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Intersection matrix
    Matrix {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// great / good / neither classification
    Classify {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Handle slide of one w-curve over another
    Slide {
        file: String,
        #[arg(long)]
        moving: usize,
        #[arg(long)]
        over: usize,
        /// Anchor index in the canonical enumeration
        #[arg(long)]
        anchor: Option<usize>,
        /// List the available anchors instead of sliding
        #[arg(long)]
        list_anchors: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Add a trivial handle pair
    Stabilize {
        file: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Remove a trivial handle pair
    Destabilize {
        file: String,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Slide a good diagram until its matrix is the identity
    Normalize {
        file: String,
        #[arg(long)]
        out: Option<String>,
        /// Write the slide trace as JSON lines
        #[arg(long)]
        trace: Option<String>,
    },
    /// Cell counts of the dual pseudo-triangulation
    Dualcounts {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Search for a reduction to genus zero
    Unstabilize {
        file: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum WaldCmd {
    /// Normalize and reduce a configuration, emitting the trace
    Run {
        /// Configuration JSON; omit to build one from the flags below
        file: Option<String>,
        /// Base genus when building
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Second system size when building
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random v-x arc records when building
        #[arg(long, default_value_t = 0)]
        arcs: usize,
        /// Random v-x circle records when building
        #[arg(long, default_value_t = 0)]
        circles: usize,
    },
}

#[derive(Subcommand)]
enum SigmaCmd {
    /// Close a diagram under stabilize/destabilize up to a genus cap
    Explore {
        file: String,
        #[arg(long, default_value_t = 3)]
        max_genus: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

enum CliError {
    Domain(String),
    NotFound(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError::Domain(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

pub fn main() -> ! {
    let code = run(std::env::args_os());
    std::process::exit(code)
}

/// Parses and dispatches; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let kind = e.kind();
            if kind == ErrorKind::DisplayHelp || kind == ErrorKind::DisplayVersion {
                print!("{e}");
                return EXIT_OK;
            }
            let _ = write!(std::io::stderr(), "{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DOMAIN
        }
        Err(CliError::NotFound(msg)) => {
            eprintln!("not found: {msg}");
            EXIT_NOT_FOUND
        }
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {path}: {e}")))
}

fn load_tri(path: &str) -> Result<Triangulation, CliError> {
    Ok(parse_tri(&read_file(path)?)?)
}

fn load_diag(path: &str) -> Result<HeegaardDiagram, CliError> {
    Ok(diagram_from_json(&read_file(path)?)?)
}

fn emit(text: String, out: Option<&str>) -> CliResult {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Domain(format!("cannot write {path}: {e}")))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn unsupported_format() -> CliError {
    CliError::Domain("unsupported output format for this command".to_string())
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Tri { cmd } => tri(cmd),
        Command::Diag { cmd } => diag(cmd),
        Command::Wald { cmd } => wald(cmd),
        Command::Sigma { cmd } => sigma(cmd),
    }
}

fn tri(cmd: TriCmd) -> CliResult {
    match cmd {
        TriCmd::New {
            boundary_four_simplex,
            name,
            out,
        } => {
            if !boundary_four_simplex {
                return Err(CliError::Domain(
                    "choose a generator: --boundary-four-simplex".to_string(),
                ));
            }
            let mut t = Triangulation::boundary_four_simplex();
            if let Some(name) = name {
                t.set_name(name);
            }
            emit(write_tri(&t), out.as_deref())
        }
        TriCmd::Validate {
            file,
            embedding,
            format,
        } => {
            let t = load_tri(&file)?;
            let rep = t.validate_opts(embedding);
            match format {
                Format::Text => print!("{}", rep.render_text()),
                Format::Json => println!("{}", serde_json::to_string(&rep).unwrap()),
                Format::Dot => return Err(unsupported_format()),
            }
            if rep.valid() {
                Ok(())
            } else {
                Err(CliError::Domain("triangulation is not valid".to_string()))
            }
        }
        TriCmd::Genus { file } => {
            let t = load_tri(&file)?;
            println!("{}", t.associated_genus()?);
            Ok(())
        }
        TriCmd::Flip {
            file,
            kind,
            index,
            list,
            out,
            format,
        } => {
            let t = load_tri(&file)?;
            let kind = FlipKind::parse(&kind)
                .ok_or_else(|| CliError::Domain(format!("unknown flip kind '{kind}'")))?;
            let sites = flip_sites(&t, kind);
            if list {
                match format {
                    Format::Text => {
                        for (i, s) in sites.iter().enumerate() {
                            println!("{i}: {s}");
                        }
                    }
                    Format::Json => println!("{}", serde_json::to_string(&sites).unwrap()),
                    Format::Dot => return Err(unsupported_format()),
                }
                return Ok(());
            }
            let index = index.ok_or_else(|| {
                CliError::Domain("give --index into the site enumeration, or --list".to_string())
            })?;
            let site = *sites.get(index).ok_or_else(|| {
                CliError::Domain(format!(
                    "site index {index} out of range: {} applicable sites",
                    sites.len()
                ))
            })?;
            let r = flip(&t, site)?;
            emit(write_tri(&r), out.as_deref())
        }
        TriCmd::Subdivide { file, times, out } => {
            let t = load_tri(&file)?;
            let r = barycentric_subdivision(&t, times)?;
            emit(write_tri(&r), out.as_deref())
        }
        TriCmd::Path {
            file1,
            file2,
            budget,
            jobs,
            format,
        } => {
            let t1 = load_tri(&file1)?;
            let t2 = load_tri(&file2)?;
            let run = || pachner_path(&t1, &t2, budget.budget(), jobs);
            let outcome = if jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| CliError::Domain(e.to_string()))?;
                pool.install(run)?
            } else {
                run()?
            };
            match outcome {
                PachnerOutcome::Found(path) => {
                    match format {
                        Format::Text => {
                            println!("path of length {}", path.len());
                            for (i, mv) in path.moves.iter().enumerate() {
                                println!("{i}: {}", mv.site);
                            }
                        }
                        Format::Json => println!("{}", serde_json::to_string(&path).unwrap()),
                        Format::Dot => {
                            println!("digraph flip_path {{");
                            for (i, mv) in path.moves.iter().enumerate() {
                                println!("  s{i} -> s{} [label=\"{}\"];", i + 1, mv.site);
                            }
                            println!("}}");
                        }
                    }
                    Ok(())
                }
                PachnerOutcome::NotFound(stats) => Err(CliError::NotFound(format!(
                    "no path within budget: visited {}, frontier {}, depth {}",
                    stats.visited, stats.frontier, stats.depth_reached
                ))),
            }
        }
    }
}

fn diag(cmd: DiagCmd) -> CliResult {
    match cmd {
        DiagCmd::New {
            standard_s3,
            format,
            out,
        } => {
            let d = HeegaardDiagram::standard_s3(standard_s3);
            let text = match format {
                Format::Json => format!("{}\n", diagram_to_json(&d)),
                Format::Text => format!(
                    "genus {} crossings {}\n",
                    d.genus(),
                    d.crossing_count()
                ),
                Format::Dot => return Err(unsupported_format()),
            };
            emit(text, out.as_deref())
        }
        DiagCmd::Validate { file, format } => {
            let d = load_diag(&file)?;
            let rep = d.validate();
            match format {
                Format::Text => {
                    print!("{}", rep.report.render_text());
                    println!(
                        "genus {} faces {} filling {} cut_planar {}",
                        rep.reconstructed_genus.map_or("-".into(), |g| g.to_string()),
                        rep.face_count.map_or("-".into(), |f| f.to_string()),
                        rep.filling.map_or("-".into(), |b| b.to_string()),
                        rep.cut_planar.map_or("-".into(), |b| b.to_string()),
                    );
                }
                Format::Json => println!("{}", serde_json::to_string(&rep).unwrap()),
                Format::Dot => return Err(unsupported_format()),
            }
            if rep.report.valid() {
                Ok(())
            } else {
                Err(CliError::Domain("diagram is not valid".to_string()))
            }
        }
        DiagCmd::Matrix { file, format } => {
            let d = load_diag(&file)?;
            let a = d.intersection_matrix();
            match format {
                Format::Text => print!("{}", a.render_text()),
                Format::Json => println!("{}", serde_json::to_string(&a).unwrap()),
                Format::Dot => return Err(unsupported_format()),
            }
            Ok(())
        }
        DiagCmd::Classify { file, format } => {
            let d = load_diag(&file)?;
            let class = d.classify_system()?;
            match format {
                Format::Text => match &class {
                    SystemClass::Great => println!("great"),
                    SystemClass::Good { witness } => println!("good witness={witness:?}"),
                    SystemClass::Neither => println!("neither"),
                },
                Format::Json => println!("{}", serde_json::to_string(&class).unwrap()),
                Format::Dot => return Err(unsupported_format()),
            }
            Ok(())
        }
        DiagCmd::Slide {
            file,
            moving,
            over,
            anchor,
            list_anchors,
            out,
        } => {
            let d = load_diag(&file)?;
            let anchors = enumerate_anchors(&d, moving, over);
            if list_anchors {
                for (i, a) in anchors.iter().enumerate() {
                    println!("{i}: {}", serde_json::to_string(a).unwrap());
                }
                return Ok(());
            }
            let index = anchor.ok_or_else(|| {
                CliError::Domain("give --anchor into the enumeration, or --list-anchors".to_string())
            })?;
            let a = anchors
                .get(index)
                .cloned()
                .ok_or_else(|| {
                    CliError::Domain(format!(
                        "anchor index {index} out of range: {} anchors",
                        anchors.len()
                    ))
                })?;
            let r = handle_slide(
                &d,
                &SlideSpec {
                    moving,
                    over,
                    anchor: a,
                },
            )?;
            emit(format!("{}\n", diagram_to_json(&r)), out.as_deref())
        }
        DiagCmd::Stabilize { file, out } => {
            let d = load_diag(&file)?;
            emit(
                format!("{}\n", diagram_to_json(&stabilize(&d))),
                out.as_deref(),
            )
        }
        DiagCmd::Destabilize { file, index, out } => {
            let d = load_diag(&file)?;
            let r = destabilize(&d, index)?;
            emit(format!("{}\n", diagram_to_json(&r)), out.as_deref())
        }
        DiagCmd::Normalize { file, out, trace } => {
            let d = load_diag(&file)?;
            let witness = match d.classify_system()? {
                SystemClass::Great => {
                    emit(format!("{}\n", diagram_to_json(&d)), out.as_deref())?;
                    if let Some(path) = trace {
                        fs::write(&path, "").map_err(|e| CliError::Domain(e.to_string()))?;
                    }
                    return Ok(());
                }
                SystemClass::Good { witness } => witness,
                SystemClass::Neither => {
                    return Err(CliError::Domain(
                        "diagram is not good: no witness ordering exists".to_string(),
                    ))
                }
            };
            let (great, t) = good_to_great(&d, &witness)?;
            if let Some(path) = trace {
                fs::write(&path, t.to_json_lines())
                    .map_err(|e| CliError::Domain(e.to_string()))?;
            }
            emit(format!("{}\n", diagram_to_json(&great)), out.as_deref())
        }
        DiagCmd::Dualcounts { file, format } => {
            let d = load_diag(&file)?;
            let c = dual_cell_counts(&d)?;
            match format {
                Format::Text => println!(
                    "vertices {} edges {} faces {} tetrahedra {}",
                    c.vertices, c.edges, c.faces, c.tetrahedra
                ),
                Format::Json => println!("{}", serde_json::to_string(&c).unwrap()),
                Format::Dot => return Err(unsupported_format()),
            }
            Ok(())
        }
        DiagCmd::Unstabilize { file, budget } => {
            let d = load_diag(&file)?;
            match unstabilize_search(&d, budget.budget())? {
                UnstabilizeOutcome::Found(trace) => {
                    print!("{}", trace.to_json_lines());
                    Ok(())
                }
                UnstabilizeOutcome::NotFound(stats) => Err(CliError::NotFound(format!(
                    "no reduction within budget: visited {}, depth {}",
                    stats.visited, stats.depth_reached
                ))),
            }
        }
    }
}

fn wald(cmd: WaldCmd) -> CliResult {
    match cmd {
        WaldCmd::Run {
            file,
            n,
            m,
            seed,
            arcs,
            circles,
        } => {
            let config = match file {
                Some(path) => Configuration::from_json(&read_file(&path)?)?,
                None => {
                    eprintln!("seed: {seed}");
                    ConfigBuilder::new(n, m)
                        .seed(seed)
                        .random_arcs(arcs)
                        .random_circles(circles)
                        .build()?
                }
            };
            let (_, trace, verdict) = wald_pipeline(&config)?;
            print!("{}", trace.to_json_lines());
            eprintln!("verdict: {}", verdict.label());
            Ok(())
        }
    }
}

fn sigma(cmd: SigmaCmd) -> CliResult {
    match cmd {
        SigmaCmd::Explore {
            file,
            max_genus,
            budget,
            format,
        } => {
            let d = load_diag(&file)?;
            let g = sigma_explore(&d, max_genus, budget.budget());
            match format {
                Format::Dot => print!("{}", g.to_dot()),
                Format::Json => println!("{}", serde_json::to_string(&g).unwrap()),
                Format::Text => {
                    println!(
                        "nodes {} edges {} tree {} complete {}",
                        g.nodes.len(),
                        g.edges.len(),
                        g.is_tree,
                        g.complete
                    );
                    for (i, n) in g.nodes.iter().enumerate() {
                        println!("node {i}: genus {}{}", n.genus, if n.root { " (root)" } else { "" });
                    }
                    for &(a, b) in &g.edges {
                        println!("edge {a} -- {b}");
                    }
                }
            }
            Ok(())
        }
    }
}
