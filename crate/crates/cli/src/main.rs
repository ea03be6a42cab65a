use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pcstab::corpus::{all_graphs_up_to, random_graphs};
use pcstab::io::{
    generator_word_to_json, parse_generator_word, parse_matrix, parse_mixed, FactorJson, InventoryJson,
    LatticeJson, MatrixJson, OrderJson, PatternJson,
};
use pcstab::verify::{verify_graph, Report, VerifyConfig};
use pcstab::{compose_mixed, decompose, factor_semidirect, Context, Error, GeneratorInventory, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "pcstab",
    version,
    about = "Closure lattices and parabolic-centraliser stabilisers of partially commutative groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Graph file: {"vertices": [...], "edges": [[x, y], ...]}
    #[arg(long, global = true)]
    graph: Option<PathBuf>,

    /// Comma-separated vertex list resolving the free choices in the order
    #[arg(long, global = true, value_delimiter = ',')]
    tie_break: Option<Vec<String>>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Entry bound for sampled matrices and exponents
    #[arg(long, global = true, default_value_t = 5)]
    bound: u32,

    #[arg(long, global = true, default_value_t = 5)]
    max_vertices: usize,

    /// Check every graph up to --max-vertices instead of a random sample
    #[arg(long, global = true)]
    exhaustive: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed sets, classes, heights and the Hasse diagram of L
    Lattice,
    /// The total order on vertices used to index matrices
    Order,
    /// Sign flips, class moves and transvections generating the stabiliser
    Generators,
    /// Block structure and allowed entries of S_Y
    Pattern {
        /// Comma-separated closed set (default: all vertices)
        #[arg(long, value_delimiter = ',')]
        closed_set: Option<Vec<String>>,
    },
    /// Factor a matrix of S_X into generators
    Decompose {
        /// Matrix JSON file, or `-` for stdin; omit to sample one from --seed
        #[arg(long)]
        input: Option<String>,
    },
    /// Normal form, length, support, cyclic decomposition and blocks
    Word { literal: String },
    /// Apply a generator word (JSON) to a group element
    Apply {
        #[arg(long)]
        input: String,
        literal: String,
    },
    /// Split a composite automorphism into conjugating and stabilising parts
    Factor {
        #[arg(long)]
        input: String,
    },
    /// Run the self-check suite
    Verify {
        /// Random graphs to check when not exhaustive and no --graph is given
        #[arg(long, default_value_t = 50)]
        graphs: usize,
        /// Random cases per graph for each sampled check
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Check(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_source(path: &str) -> Res<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn load_graph(cli: &Cli) -> Res<Graph> {
    let path = cli
        .graph
        .as_ref()
        .ok_or_else(|| Failure::Input("--graph is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Graph::from_json_str(&text)?)
}

fn load_context(cli: &Cli) -> Res<Context> {
    let g = load_graph(cli)?;
    Ok(match &cli.tie_break {
        Some(names) => Context::with_tie_break_names(g, names)?,
        None => Context::new(g)?,
    })
}

fn emit(cli: &Cli, text: &str) -> Res<()> {
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Res<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn unsupported(cli: &Cli) -> Failure {
    Failure::Input(format!("--format {:?} is not available for this command", cli.format).to_lowercase())
}

fn run(cli: &Cli) -> Res<()> {
    match &cli.command {
        Command::Lattice => lattice(cli),
        Command::Order => order(cli),
        Command::Generators => generators(cli),
        Command::Pattern { closed_set } => pattern(cli, closed_set.as_deref()),
        Command::Decompose { input } => decompose_cmd(cli, input.as_deref()),
        Command::Word { literal } => word(cli, literal),
        Command::Apply { input, literal } => apply(cli, input, literal),
        Command::Factor { input } => factor(cli, input),
        Command::Verify { graphs, samples } => verify(cli, *graphs, *samples),
    }
}

fn lattice(cli: &Cli) -> Res<()> {
    let ctx = load_context(cli)?;
    let g = ctx.graph();
    let lat = ctx.lattice();
    let text = match cli.format {
        Format::Json => json(&LatticeJson::new(&ctx))?,
        Format::Dot => lat.hasse_dot(g),
        Format::Text => {
            let mut s = format!("{} closed sets\n", lat.len());
            for &y in lat.closed_sets() {
                s += &format!("  {}\n", g.format_set(y));
            }
            s += "classes:\n";
            for &c in lat.classes() {
                s += &format!("  {}\n", g.format_set(c));
            }
            s += "heights:\n";
            for v in 0..g.len() {
                s += &format!("  {}: {}\n", g.name(v), lat.height(v));
            }
            s
        }
    };
    emit(cli, &text)
}

fn order(cli: &Cli) -> Res<()> {
    let ctx = load_context(cli)?;
    let j = OrderJson::new(&ctx);
    let text = match cli.format {
        Format::Json => json(&j)?,
        Format::Text => format!(
            "order: {}\nheights: {}\nx_min: {}\n",
            j.order.join(" < "),
            j.heights
                .iter()
                .map(|h| h.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            j.x_min.join(" ")
        ),
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)
}

fn generators(cli: &Cli) -> Res<()> {
    let ctx = load_context(cli)?;
    let inv = GeneratorInventory::new(&ctx);
    let j = InventoryJson::new(&ctx, &inv);
    let text = match cli.format {
        Format::Json => json(&j)?,
        Format::Text => {
            let classes: Vec<String> = j.classes.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
            let trs: Vec<String> = j
                .transvections
                .iter()
                .map(|[x, y]| format!("({x},{y})"))
                .collect();
            format!(
                "sign flips: {}\nclasses: {}\ntransvections: {}\n",
                j.flips.join(" "),
                classes.join(" "),
                trs.join(" ")
            )
        }
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)
}

fn pattern(cli: &Cli, closed_set: Option<&[String]>) -> Res<()> {
    let ctx = load_context(cli)?;
    let y = match closed_set {
        Some(names) => {
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            ctx.set(&names)?
        }
        None => ctx.vertices(),
    };
    let p = ctx.pattern(y)?;
    let text = match cli.format {
        Format::Json => json(&PatternJson::new(&ctx, p))?,
        Format::Text => p.describe(ctx.graph().names()),
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)
}

fn decompose_cmd(cli: &Cli, input: Option<&str>) -> Res<()> {
    let ctx = load_context(cli)?;
    let a = match input {
        Some(path) => parse_matrix(&ctx, &read_source(path)?)?,
        None => ctx.x_pattern().sample_seeded(cli.bound, cli.seed),
    };
    let w = decompose(&ctx, &a)?;
    if w.to_matrix(&ctx)? != a {
        return Err(Failure::Check(
            "generator product does not reproduce the matrix".into(),
        ));
    }
    let text = match cli.format {
        Format::Json => json(&generator_word_to_json(&ctx, &w))?,
        Format::Text => {
            let names = ctx.graph().names();
            let mut s = format!(
                "matrix (order {}):\n{}",
                MatrixJson::from_matrix(&ctx, &a).closed_set.join(" "),
                a
            );
            s += &format!("{} atoms:\n", w.len());
            for atom in w.atoms() {
                s += &format!("  {}\n", atom.describe(names));
            }
            s
        }
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)
}

#[derive(Serialize)]
struct WordReport {
    normal_form: String,
    length: usize,
    alpha: Vec<String>,
    conjugator: String,
    core: String,
    blocks: Vec<String>,
}

fn word(cli: &Cli, literal: &str) -> Res<()> {
    let ctx = load_context(cli)?;
    let w = ctx.word(literal)?;
    let cd = w.cyclic_reduce();
    let r = WordReport {
        normal_form: w.to_literal(),
        length: w.len(),
        alpha: ctx.graph().set_names(w.alpha()),
        conjugator: cd.conjugator.to_literal(),
        core: cd.core.to_literal(),
        blocks: cd
            .core
            .block_decomposition()?
            .iter()
            .map(|b| b.to_literal())
            .collect(),
    };
    let text = match cli.format {
        Format::Json => json(&r)?,
        Format::Text => format!(
            "normal form: {}\nlength: {}\nalpha: {{{}}}\nconjugator: {}\ncore: {}\nblocks: {}\n",
            r.normal_form,
            r.length,
            r.alpha.join(","),
            r.conjugator,
            r.core,
            r.blocks.join(" | ")
        ),
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)
}

fn apply(cli: &Cli, input: &str, literal: &str) -> Res<()> {
    let ctx = load_context(cli)?;
    let gw = parse_generator_word(&ctx, &read_source(input)?)?;
    let w = ctx.word(literal)?;
    let image = gw.to_automap(&ctx)?.apply(&w)?;
    let text = match cli.format {
        Format::Json => json(&serde_json::json!({ "image": image.to_literal() }))?,
        Format::Text => format!("{}\n", image.to_literal()),
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)
}

fn factor(cli: &Cli, input: &str) -> Res<()> {
    let ctx = load_context(cli)?;
    let atoms = parse_mixed(&ctx, &read_source(input)?)?;
    let theta = compose_mixed(&ctx, &atoms)?;
    let f = factor_semidirect(&ctx, &theta.forward)?;
    let passed = f.tau.then(&f.phi)? == theta.forward && f.tau.is_conjugating() && f.phi.stabilizes_l(&ctx);
    let j = FactorJson::new(&ctx, &f, passed);
    let text = match cli.format {
        Format::Json => json(&j)?,
        Format::Text => {
            let names = ctx.graph().names();
            let mut s = format!("tau: {}\nphi: {}\n", f.tau, f.phi);
            s += "phi as generators:";
            for atom in f.phi_word.atoms() {
                s += &format!(" {}", atom.describe(names));
            }
            s += &format!("\ncheck: {}\n", j.check);
            s
        }
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Check("τ·φ does not reproduce the input".into()))
    }
}

fn verify(cli: &Cli, graphs: usize, samples: usize) -> Res<()> {
    let cfg = VerifyConfig {
        bound: cli.bound,
        samples,
        ..VerifyConfig::default()
    };
    let corpus: Vec<Graph> = if cli.graph.is_some() {
        vec![load_graph(cli)?]
    } else if cli.exhaustive {
        all_graphs_up_to(cli.max_vertices).collect()
    } else {
        random_graphs(graphs, 1, cli.max_vertices, cli.seed)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut report = Report::default();
    let start = Instant::now();
    for g in &corpus {
        verify_graph(g, &cfg, &mut rng, &mut report)?;
    }
    let text = match cli.format {
        Format::Json => {
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|(name, c)| {
                    serde_json::json!({
                        "check": name,
                        "cases": c.cases,
                        "failures": c.failures,
                        "first_failure": c.first_failure,
                    })
                })
                .collect();
            json(&serde_json::json!({
                "seed": cli.seed,
                "graphs": report.graphs,
                "passed": report.passed(),
                "checks": checks,
            }))?
        }
        Format::Text => format!("seed {}\n{}", cli.seed, report.table()),
        Format::Dot => return Err(unsupported(cli)),
    };
    emit(cli, &text)?;
    eprintln!("elapsed: {:.1?}", start.elapsed());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check("some verification checks failed".into()))
    }
}
