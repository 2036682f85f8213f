// SPDX-License-Identifier: MIT OR Apache-2.0
//! `annulus-lerw`: exact lattice Green's functions, LERW intensities,
//! annular matrices and grove counts from the command line.

mod cmd;
mod exactjson;
mod graphfile;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use annulus_lerw::latticegreen::{Lattice, Pt};

#[derive(Parser)]
#[command(name = "annulus-lerw", version, about = "Exact grove and loop-erased random walk computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Potential kernel a(p) of a lattice
    Potential {
        #[arg(long, value_parser = parse_lattice)]
        lattice: Lattice,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Pt,
        #[arg(long)]
        json: bool,
    },
    /// Probability that LERW from the origin uses an edge or visits a vertex
    Intensity(IntensityArgs),
    /// The annular matrix A_n
    Annular {
        #[arg(long)]
        n: usize,
        /// print the inverse instead
        #[arg(long)]
        inverse: bool,
        /// run the determinant and column checks
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Grove partition function of a graph read from a JSON file
    Grove {
        #[arg(long)]
        graph: std::path::PathBuf,
        /// partition of the nodes, e.g. "2,3|1,4"
        #[arg(long = "type")]
        sigma: String,
    },
    /// Monte Carlo LERW intensities on a wired box
    Sample {
        #[arg(long, value_parser = parse_lattice)]
        lattice: Lattice,
        #[arg(long, default_value_t = 200)]
        side: i64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
pub struct IntensityArgs {
    #[arg(long, value_parser = parse_lattice)]
    lattice: Lattice,
    /// directed edge "x,y->x,y"
    #[arg(long, value_parser = parse_edge, allow_hyphen_values = true, conflicts_with = "vertex", required_unless_present = "vertex")]
    edge: Option<(Pt, Pt)>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    vertex: Option<Pt>,
    /// cut edges "x,y-x,y;x,y-x,y" (or "x,y:x,y"), replacing the built-in choice
    #[arg(long, value_parser = parse_cuts, allow_hyphen_values = true, requires = "edge")]
    cuts: Option<Cuts>,
    /// inner node order "x,y;x,y;...", checked against the one the cuts produce
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true, requires = "cuts")]
    nodes: Option<Nodes>,
    #[arg(long)]
    json: bool,
}

// list-valued flags are single arguments so that clap does not read them as repeated values
#[derive(Clone)]
struct Cuts(Vec<(Pt, Pt)>);

#[derive(Clone)]
struct Nodes(Vec<Pt>);

fn parse_lattice(s: &str) -> Result<Lattice, String> {
    Lattice::from_name(s).ok_or_else(|| format!("unknown lattice '{}' (square, triangular, hexagonal)", s))
}

fn parse_point(s: &str) -> Result<Pt, String> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let mut it = t.split(',').map(|x| x.trim().parse::<i64>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(x)), Some(Ok(y)), None) => Ok((x, y)),
        _ => Err(format!("expected a point 'x,y', got '{}'", s)),
    }
}

fn parse_edge(s: &str) -> Result<(Pt, Pt), String> {
    let (a, b) = s.split_once("->").ok_or_else(|| format!("expected 'x,y->x,y', got '{}'", s))?;
    Ok((parse_point(a)?, parse_point(b)?))
}

fn parse_cut(s: &str) -> Result<(Pt, Pt), String> {
    if let Some((a, b)) = s.split_once(':') {
        return Ok((parse_point(a)?, parse_point(b)?));
    }
    // "x,y-x,y": the separator is the first '-' after the second coordinate starts
    let bad = || format!("expected a cut 'x,y-x,y', got '{}'", s);
    let comma = s.find(',').ok_or_else(bad)?;
    let rest = &s[comma + 1..];
    let dash = rest.char_indices().skip(1).find(|&(_, c)| c == '-').map(|(i, _)| i).ok_or_else(bad)?;
    let (a, b) = s.split_at(comma + 1 + dash);
    Ok((parse_point(a)?, parse_point(&b[1..])?))
}

fn parse_cuts(s: &str) -> Result<Cuts, String> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).map(parse_cut).collect::<Result<_, _>>().map(Cuts)
}

fn parse_points(s: &str) -> Result<Nodes, String> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).map(parse_point).collect::<Result<_, _>>().map(Nodes)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Command::Potential { lattice, point, json } => cmd::potential(lattice, point, json),
        Command::Intensity(a) => cmd::intensity(a.lattice, a.edge, a.vertex, a.cuts.map(|c| c.0), a.nodes.map(|n| n.0), a.json),
        Command::Annular { n, inverse, check, json } => cmd::annular(n, inverse, check, json),
        Command::Grove { graph, sigma } => cmd::grove(&graph, &sigma),
        Command::Sample { lattice, side, samples, seed, json } => cmd::sample(lattice, side, samples, seed, json),
    };
    match out {
        Ok(text) => {
            println!("{}", text);
            ExitCode::SUCCESS
        }
        Err(cmd::Failure::Usage(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(cmd::Failure::Compute(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(3)
        }
    }
}
