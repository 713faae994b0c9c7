mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hallkit::edge_color::{edge_color_3half_eps_with_stats, edge_color_3half_with_stats};
use hallkit::fixtures::{
    gen_fig1, gen_lowerbound, gen_random_hypergraph_with, gen_simple, HyperGenConfig, SimpleKind, Topology,
};
use hallkit::io::{parse_document, to_json, to_text, Document};
use hallkit::{
    bipartite_view, locality_certify, max_matching, saturating_matching, solve_hso, solve_hso_local,
    solve_randomized, verify_coloring, verify_hso, verify_matching, verify_weak_split, weak_splitting, HallParams,
    LocalAlgorithm, MultiHypergraph, Side,
};
use report::{Instance, Report};

#[derive(Parser)]
#[command(name = "hallkit", version, about = "Hall graphs, sinkless orientations, splittings and edge colorings")]
struct Cli {
    /// Worker threads for the parallel phases (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Emit the run report as JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input file; standard input when absent.
    #[arg(short, long)]
    input: Option<PathBuf>,

    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Format of the emitted document.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimpleKindArg {
    Cubic,
    Petersen,
    Path,
    Cycle,
    RandomDelta,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorMode {
    #[value(name = "3half")]
    ThreeHalf,
    Eps,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    #[command(group(ArgGroup::new("family").args(["hyper", "simple", "violator", "lowerbound"])))]
    Gen {
        /// Random multihypergraph with minimum degree -d and rank -r.
        #[arg(long)]
        hyper: bool,
        /// Simple graph of the given family.
        #[arg(long, value_enum)]
        simple: Option<SimpleKindArg>,
        /// The four-vertex, three-edge Hall violator.
        #[arg(long)]
        violator: bool,
        /// Lower-bound family with both sides -d regular.
        #[arg(long)]
        lowerbound: bool,
        #[arg(short, long, default_value_t = 100)]
        n: usize,
        #[arg(short, long, default_value_t = 4)]
        d: usize,
        #[arg(short, long, default_value_t = 2)]
        r: usize,
        #[arg(long, env = "HALLKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Draw edge members uniformly instead of from a ring window.
        #[arg(long)]
        uniform: bool,
        /// Permit minimum degree equal to the rank.
        #[arg(long)]
        allow_equal: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Hypergraph sinkless orientation.
    #[command(group(ArgGroup::new("algo").args(["local", "sequential", "randomized"])))]
    Hso {
        /// Every vertex decides from its own neighbourhood (default).
        #[arg(long)]
        local: bool,
        /// Sequential sweep over the Hall graphs.
        #[arg(long)]
        sequential: bool,
        /// Random shattering followed by the deterministic solver.
        #[arg(long)]
        randomized: bool,
        #[arg(long, env = "HALLKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Io,
    },
    /// Matching saturating every vertex of a hypergraph (vertex to edge).
    Match {
        /// Use the Hopcroft-Karp maximum matching instead.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Red/blue edge coloring giving every vertex both colors.
    Split {
        #[command(flatten)]
        io: Io,
    },
    /// Edge coloring of a simple graph.
    Color {
        #[arg(long, value_enum, default_value_t = ColorMode::ThreeHalf)]
        mode: ColorMode,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Check every solution carried by the input.
    Verify {
        /// Palette bound for colorings; default ⌊3Δ/2⌋.
        #[arg(long)]
        palette: Option<u32>,
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
    /// Replay sampled vertices on their balls and compare with the orientation.
    CertifyLocality {
        /// Ball radius; default twice the Hall radius bound plus two.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "HALLKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
    /// Time the orientation solvers on a generated instance.
    Bench {
        #[arg(short, long, default_value_t = 1000)]
        n: usize,
        #[arg(short, long, default_value_t = 4)]
        d: usize,
        #[arg(short, long, default_value_t = 2)]
        r: usize,
        #[arg(long, env = "HALLKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
    },
}

fn read_input(path: &Option<PathBuf>) -> Result<Document> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
            s
        }
    };
    Ok(parse_document(&text)?)
}

fn write_output(io: &Io, doc: &Document) -> Result<()> {
    let body = match io.format {
        Format::Text => to_text(doc),
        Format::Json => to_json(doc) + "\n",
    };
    match &io.output {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn radius_bound_of(g: &MultiHypergraph) -> Option<usize> {
    HallParams::of(g).ok().map(|p| p.radius_bound())
}

/// Runs a command; returns the report and whether it goes to standard error
/// (commands whose standard output carries a document).
fn run(command: Command) -> Result<(Report, bool)> {
    match command {
        Command::Gen { hyper: _, simple, violator, lowerbound, n, d, r, seed, uniform, allow_equal, io } => {
            let mut rep = Report::new("gen");
            let doc = if violator {
                Document::from_hypergraph(gen_fig1())
            } else if lowerbound {
                Document::from_hypergraph(gen_lowerbound(d, n)?.hypergraph())
            } else if let Some(kind) = simple {
                let kind = match kind {
                    SimpleKindArg::Cubic => SimpleKind::CubicRandom { n },
                    SimpleKindArg::Petersen => SimpleKind::Petersen,
                    SimpleKindArg::Path => SimpleKind::Path { n },
                    SimpleKindArg::Cycle => SimpleKind::Cycle { n },
                    SimpleKindArg::RandomDelta => SimpleKind::RandomDelta { n, delta: d },
                };
                Document::from_graph(rep.time("generate", || gen_simple(kind, seed))?)
            } else {
                let mut cfg = HyperGenConfig::new(n, d, r);
                cfg.allow_equal = allow_equal;
                if uniform {
                    cfg = cfg.topology(Topology::Uniform);
                }
                Document::from_hypergraph(rep.time("generate", || gen_random_hypergraph_with(&cfg, seed))?)
            };
            rep.instance = match (&doc.hypergraph, &doc.graph) {
                (Some(g), _) => Some(Instance::hyper(g)),
                (_, Some(g)) => Some(Instance::simple(g)),
                _ => None,
            };
            rep.detail("seed", seed);
            write_output(&io, &doc)?;
            Ok((rep, true))
        }
        Command::Hso { local: _, sequential, randomized, seed, io } => {
            let mut doc = read_input(&io.input)?;
            let g = doc.hypergraph()?.clone();
            let mut rep = Report::new("hso");
            rep.instance = Some(Instance::hyper(&g));
            let o = if randomized {
                let (o, r) = rep.time("solve", || solve_randomized(&g, seed))?;
                rep.detail("algorithm", "randomized");
                rep.detail("randomized", r);
                o
            } else if sequential {
                rep.detail("algorithm", "sequential");
                rep.time("solve", || solve_hso(&g))?
            } else {
                rep.detail("algorithm", "local");
                let o = rep.time("solve", || solve_hso_local(&g))?;
                rep.radius_bound = radius_bound_of(&g);
                rep.radius_used = rep.radius_bound.map(|b| 2 * (b + 1));
                o
            };
            let cert = rep.time("verify", || verify_hso(&g, &o));
            rep.certify("orientation", cert);
            doc.orientation = Some(o);
            write_output(&io, &doc)?;
            Ok((rep, true))
        }
        Command::Match { oracle, io } => {
            let mut doc = read_input(&io.input)?;
            let g = doc.hypergraph()?;
            let mut rep = Report::new("match");
            rep.instance = Some(Instance::hyper(g));
            let b = bipartite_view(g);
            let m = if oracle { rep.time("solve", || max_matching(&b)) } else { rep.time("solve", || saturating_matching(&b))? };
            rep.detail("size", m.len());
            rep.certify("matching", verify_matching(&b, &m, Side::Left));
            doc.matching = Some(m);
            write_output(&io, &doc)?;
            Ok((rep, true))
        }
        Command::Split { io } => {
            let mut doc = read_input(&io.input)?;
            let g = doc.hypergraph()?;
            let mut rep = Report::new("split");
            rep.instance = Some(Instance::hyper(g));
            let b = bipartite_view(g);
            let s = rep.time("solve", || weak_splitting(&b))?;
            rep.certify("splitting", verify_weak_split(&b, &s));
            doc.splitting = Some(s);
            write_output(&io, &doc)?;
            Ok((rep, true))
        }
        Command::Color { mode, eps, io } => {
            let mut doc = read_input(&io.input)?;
            let g = doc.graph()?;
            let mut rep = Report::new("color");
            rep.instance = Some(Instance::simple(g));
            let delta = g.max_degree();
            let (c, bound) = match mode {
                ColorMode::ThreeHalf => {
                    let (c, stats) = rep.time("solve", || edge_color_3half_with_stats(g))?;
                    rep.detail("stats", stats);
                    (c, (3 * delta / 2) as u32)
                }
                ColorMode::Eps => {
                    let (c, stats) = rep.time("solve", || edge_color_3half_eps_with_stats(g, eps))?;
                    rep.detail("stats", stats);
                    (c, ((1.5 + eps) * delta as f64).floor() as u32)
                }
            };
            rep.palette = Some(c.num_colors());
            rep.palette_bound = Some(bound);
            rep.certify("coloring", verify_coloring(g, &c, Some(bound)));
            doc.coloring = Some(c);
            write_output(&io, &doc)?;
            Ok((rep, true))
        }
        Command::Verify { palette, input } => {
            let doc = read_input(&input)?;
            let mut rep = Report::new("verify");
            if let Some(g) = &doc.hypergraph {
                rep.instance = Some(Instance::hyper(g));
                let b = bipartite_view(g);
                if let Some(o) = &doc.orientation {
                    rep.certify("orientation", verify_hso(g, o));
                }
                if let Some(m) = &doc.matching {
                    rep.certify("matching", verify_matching(&b, m, Side::Left));
                }
                if let Some(s) = &doc.splitting {
                    rep.certify("splitting", verify_weak_split(&b, s));
                }
            }
            if let (Some(g), Some(c)) = (&doc.graph, &doc.coloring) {
                rep.instance.get_or_insert_with(|| Instance::simple(g));
                let bound = palette.unwrap_or((3 * g.max_degree() / 2) as u32);
                rep.palette = Some(c.num_colors());
                rep.palette_bound = Some(bound);
                rep.certify("coloring", verify_coloring(g, c, Some(bound)));
            }
            if rep.certificates.is_empty() {
                bail!("input carries no solution together with its instance");
            }
            Ok((rep, false))
        }
        Command::CertifyLocality { radius, samples, seed, input } => {
            let doc = read_input(&input)?;
            let g = doc.hypergraph()?;
            let mut rep = Report::new("certify-locality");
            rep.instance = Some(Instance::hyper(g));
            let o = match &doc.orientation {
                Some(o) => o.clone(),
                None => rep.time("solve", || solve_hso_local(g))?,
            };
            rep.radius_bound = radius_bound_of(g);
            let x = radius.or(rep.radius_bound.map(|b| 2 * (b + 1))).context("no radius bound for this instance")?;
            rep.radius_used = Some(x);
            let cert = rep.time("replay", || locality_certify(g, LocalAlgorithm::HsoLocal, &o, x, samples, seed));
            rep.certify("locality", cert);
            Ok((rep, false))
        }
        Command::Bench { n, d, r, seed, repeat } => {
            let g = gen_random_hypergraph_with(&HyperGenConfig::new(n, d, r), seed)?;
            let mut rep = Report::new("bench");
            rep.instance = Some(Instance::hyper(&g));
            rep.radius_bound = radius_bound_of(&g);
            let mut last = None;
            for i in 0..repeat.max(1) {
                let seq = rep.time(&format!("sequential_{i}"), || solve_hso(&g))?;
                let loc = rep.time(&format!("local_{i}"), || solve_hso_local(&g))?;
                if seq != loc {
                    bail!("local and sequential orientations differ");
                }
                last = Some(seq);
            }
            if let Some(o) = last {
                rep.certify("orientation", verify_hso(&g, &o));
            }
            Ok((rep, false))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok((rep, to_stderr)) => {
            let text = if cli.json { rep.to_json() } else { rep.summary() };
            if to_stderr {
                eprintln!("{text}");
            } else {
                println!("{text}");
            }
            if rep.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
