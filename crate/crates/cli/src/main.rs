use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use proxnet::attack::{critical_fraction, robustness_index, run_attack, AttackKind, AttackStrategy, QNormalization};
use proxnet::community::{grid_like_ratio, louvain, modularity, sparsity_index};
use proxnet::error::{Error, Result};
use proxnet::experiment::{cmd_experiment, ExperimentConfig};
use proxnet::graph::{average_degree, degree_distribution, Graph};
use proxnet::io;
use proxnet::null_models::{relocate_to_lattice, rewire_degree_preserving, RelocationSpec, RewireSpec};
use proxnet::proximity::{build_graph, Construction, ProximityRule};
use proxnet::spatial::{
    lattice_points, place_inverse, place_population, place_uniform, synthesize_mesh, BoundingBox, Placement,
    SyntheticMesh,
};

#[derive(Parser)]
#[command(name = "proxnet", version, about = "Planar proximity networks under attack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where an existing graph lives.
#[derive(clap::Args)]
struct GraphInput {
    /// Edge list CSV (`u,v`).
    #[arg(long)]
    edges: PathBuf,
    /// Coordinates CSV (`id,x,y`); also fixes the node count.
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Node count, for graphs with isolated trailing nodes and no coordinates.
    #[arg(long)]
    nodes: Option<usize>,
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        io::load_graph(&self.edges, self.coords.as_deref(), self.nodes)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Rewire,
    Relocate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    ByN,
    ByNMinusOne,
}

impl From<Norm> for QNormalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::ByN => QNormalization::ByN,
            Norm::ByNMinusOne => QNormalization::ByNMinusOne,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Place nodes; writes points.csv (and mesh.csv when synthesized).
    Generate {
        #[arg(long, value_parser = parse::<Placement>)]
        placement: Placement,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Population mesh CSV; a synthetic mesh is generated when absent.
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build an RNG or GG; writes edges.csv and coords.csv.
    Build {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_parser = parse::<ProximityRule>)]
        kind: ProximityRule,
        /// Use the Delaunay prefilter. Output is identical, only faster.
        #[arg(long)]
        delaunay: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Remove every node; writes curve.csv and prints R and q_c.
    Attack {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, value_parser = parse::<AttackKind>)]
        attack: AttackKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "by-n")]
        q_norm: Norm,
        #[arg(long)]
        out: PathBuf,
    },
    /// Communities and sparsity; writes partition.csv and metrics.json.
    Analyze {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rewire or relocate a graph; writes edges.csv, coords.csv and a report.
    Nullmodel {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lattice spacing for relocation, meters.
        #[arg(long, default_value_t = 500.0)]
        spacing: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a JSON-configured experiment grid.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Serialize)]
struct Metrics {
    #[serde(rename = "Q")]
    q: Option<f64>,
    #[serde(rename = "SI")]
    si: Option<f64>,
    grid_ratio: f64,
    avg_degree: f64,
    community_count: usize,
    /// `(degree, count)` pairs.
    degree_distribution: Vec<(usize, usize)>,
}

fn generate(placement: Placement, n: usize, seed: u64, mesh: Option<&Path>, out: &Path) -> Result<()> {
    let mesh = match mesh {
        Some(path) => io::load_mesh(path)?,
        None => {
            let mesh = synthesize_mesh(&SyntheticMesh::default(), seed)?;
            io::save_mesh(&out.join("mesh.csv"), &mesh)?;
            mesh
        }
    };
    let points = match placement {
        Placement::Pop => place_population(&mesh, n)?,
        Placement::Inv => place_inverse(&mesh, n)?,
        Placement::Uni => place_uniform(&BoundingBox::of_mesh(&mesh), n, seed)?,
        Placement::Lattice => {
            let side = proxnet::spatial::exact_sqrt(n)
                .ok_or_else(|| Error::InvalidArgument(format!("lattice needs a square node count, got {n}")))?;
            lattice_points(side, mesh.cell_size())?
        }
        Placement::External => return Err(Error::InvalidArgument("external points cannot be generated".into())),
    };
    io::save_points(&out.join("points.csv"), points.points())
}

fn save_graph(out: &Path, g: &Graph) -> Result<()> {
    io::save_edges(&out.join("edges.csv"), g)?;
    if let Some(coords) = g.coords() {
        io::save_points(&out.join("coords.csv"), coords)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            placement,
            n,
            seed,
            mesh,
            out,
        } => generate(placement, n, seed, mesh.as_deref(), &out),
        Command::Build {
            points,
            kind,
            delaunay,
            out,
        } => {
            let points = io::load_points(&points)?;
            let construction = if delaunay { Construction::Delaunay } else { Construction::Literal };
            save_graph(&out, &build_graph(&points, kind, construction))
        }
        Command::Attack {
            graph,
            attack,
            seed,
            q_norm,
            out,
        } => {
            let g = graph.load()?;
            let strategy = AttackStrategy { kind: attack, seed };
            let curve = run_attack(&g, strategy);
            io::save_curve(&out.join("curve.csv"), &curve, q_norm.into())?;
            let qc = critical_fraction(&curve, q_norm.into());
            let qc = if qc.degenerate { "none".to_string() } else { qc.q_c.to_string() };
            println!("R={} qc={qc}", robustness_index(&curve));
            Ok(())
        }
        Command::Analyze { graph, seed, out } => {
            let g = graph.load()?;
            let partition = louvain(&g, seed)?;
            let metrics = Metrics {
                q: Some(modularity(&g, &partition)?),
                si: g.coords().map(|_| sparsity_index(&g)).transpose()?,
                grid_ratio: grid_like_ratio(&g),
                avg_degree: average_degree(&g)?,
                community_count: partition.community_count(),
                degree_distribution: degree_distribution(&g).counts.into_iter().collect(),
            };
            io::save_partition(&out.join("partition.csv"), &partition)?;
            io::write_json(&out.join("metrics.json"), &metrics)
        }
        Command::Nullmodel {
            graph,
            model,
            seed,
            spacing,
            out,
        } => {
            let g = graph.load()?;
            match model {
                Model::Rewire => {
                    let (h, report) = rewire_degree_preserving(&g, RewireSpec::new(seed))?;
                    save_graph(&out, &h)?;
                    io::write_json(&out.join("rewire.json"), &report)
                }
                Model::Relocate => {
                    let spec = RelocationSpec::for_nodes(g.alive_count(), spacing, seed)?;
                    let (h, report) = relocate_to_lattice(&g, spec)?;
                    save_graph(&out, &h)?;
                    io::write_json(&out.join("relocation.json"), &report)
                }
            }
        }
        Command::Experiment { config, out } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                config.output_dir = out;
            }
            let output = cmd_experiment(&config)?;
            println!(
                "{} records, {} failed cells, written to {}",
                output.summary.records,
                output.summary.failed_cells.len(),
                config.output_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("proxnet: {e}");
            ExitCode::FAILURE
        }
    }
}
