use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use bspkit::format::{fingerprint_csv_row, FINGERPRINT_CSV_HEADER};
use bspkit::laurent::default_names;
use bspkit::lattice::{find_affine_maps, is_fano};
use bspkit::markov::{markov_children, Pipeline};
use bspkit::mutation::mutate_polytope;
use bspkit::render::parse_projection;
use bspkit::{
    bsp_transform, enumerate_tree, fingerprint, render, LatticePolytope, MarkovTriple, Poly, RenderConfig, WidthVector,
};

#[derive(Parser, Debug)]
#[command(name = "bspkit", version, about = "Exact potentials, Newton polytopes and their mutations")]
struct Cli {
    /// Print polynomials with variable names instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Accepted for interface stability; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Substitute z ↦ z·W_Λ on one axis of a potential.
    Bsp {
        #[arg(long)]
        potential: String,
        /// 0-based axis index.
        #[arg(long)]
        axis: usize,
        /// W_Λ, in the remaining variables.
        #[arg(long)]
        factor: String,
    },
    /// Combinatorial mutation of a polytope.
    Mutate {
        #[arg(long)]
        polytope: String,
        /// Comma-separated primitive width vector.
        #[arg(long, allow_hyphen_values = true)]
        width: String,
        /// Factor polytope.
        #[arg(long)]
        factor: String,
        /// Print the full mutation data instead of only the polytope.
        #[arg(long)]
        spec: bool,
    },
    /// Newton polytope of a potential.
    Newton {
        #[arg(long)]
        potential: String,
    },
    /// Lifted Vianna polytope of a Markov triple.
    Lift {
        #[command(flatten)]
        node: NodeArgs,
        /// Also produce the potential.
        #[arg(long)]
        potential_track: bool,
    },
    /// Exotic lift of a Markov triple.
    Exotic {
        #[command(flatten)]
        node: NodeArgs,
    },
    /// Markov triples up to a depth.
    Markov {
        #[arg(long)]
        depth: usize,
    },
    /// Equivalence invariants of a polytope.
    Invariants {
        #[arg(long)]
        polytope: String,
        /// Emit one CSV row instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Decide affine unimodular equivalence of two polytopes.
    Equiv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// SVG picture of a rank-2 polytope or a projection of a rank-3 one.
    Render {
        #[arg(long)]
        polytope: String,
        /// Mark the exponents of this potential.
        #[arg(long)]
        potential: Option<String>,
        /// Two comma-separated rows separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        projection: Option<String>,
        #[arg(long, default_value_t = 24)]
        scale: u32,
        #[arg(long)]
        no_grid: bool,
    },
    /// Distinctness report of lifts and exotic lifts, as CSV.
    Report {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        dim: usize,
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct NodeArgs {
    /// Markov triple `a,b,c`.
    #[arg(long)]
    triple: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=6))]
    dim: u64,
}

/// Errors of the front end, split by exit code.
#[derive(Debug)]
enum Failure {
    /// Malformed input: exit code 2.
    Input(String),
    /// A well-formed request the mathematics rejects: exit code 1.
    Domain(String),
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_source(arg: &str) -> Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))
}

fn read_poly(arg: &str) -> Result<Poly, Failure> {
    serde_json::from_str(&read_source(arg)?).map_err(|e| Failure::Input(format!("bad potential {arg}: {e}")))
}

fn read_polytope(arg: &str) -> Result<LatticePolytope, Failure> {
    serde_json::from_str(&read_source(arg)?).map_err(|e| Failure::Input(format!("bad polytope {arg}: {e}")))
}

fn read_triple(arg: &str) -> Result<MarkovTriple, Failure> {
    arg.parse().map_err(|e: bspkit::MarkovError| Failure::Input(e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn poly_output(p: &Poly, pretty: bool) -> String {
    if pretty {
        format!("{}\n", p.display_with(&default_names(p.rank())))
    } else {
        to_json(p)
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Bsp { potential, axis, factor } => {
            let w = read_poly(potential)?;
            let g = read_poly(factor)?;
            if *axis >= w.rank() {
                return Err(Failure::Input(format!("axis {axis} out of range for rank {}", w.rank())));
            }
            if g.rank() + 1 != w.rank() {
                return Err(Failure::Input(format!("factor must have rank {}, found {}", w.rank() - 1, g.rank())));
            }
            let (r, _) = bsp_transform(&w, *axis, &g).map_err(domain)?;
            Ok(poly_output(&r, pretty))
        }
        Command::Mutate { polytope, width, factor, spec } => {
            let p = read_polytope(polytope)?;
            let f = read_polytope(factor)?;
            let w: Vec<i64> = width
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Input(format!("bad width vector {width:?}")))?;
            if w.len() != p.rank() || f.rank() != p.rank() {
                return Err(Failure::Input("width, factor and polytope ranks differ".into()));
            }
            let w = WidthVector::new(w).map_err(|e| Failure::Input(e.to_string()))?;
            let out = mutate_polytope(&p, &w, &f).map_err(domain)?;
            if *spec {
                Ok(to_json(&json!({ "polytope": out.polytope, "spec": out.spec })))
            } else {
                Ok(to_json(&out.polytope))
            }
        }
        Command::Newton { potential } => {
            let w = read_poly(potential)?;
            Ok(to_json(&w.newton().map_err(domain)?))
        }
        Command::Lift { node, potential_track } => {
            let t = read_triple(&node.triple)?;
            let n = lift_node(&t, node.dim as usize)?;
            let mut v = serde_json::to_value(&*n).expect("serializable");
            if !potential_track {
                v.as_object_mut().expect("object").remove("potential");
            } else if n.potential.is_none() {
                let why = n.provenance.potential_note.clone().unwrap_or_default();
                eprintln!("warning: {}", bspkit::MarkovError::PotentialUnavailable { triple: t, n: n.n, reason: why });
            }
            if pretty {
                if let Some(p) = n.potential.as_ref().filter(|_| *potential_track) {
                    return Ok(poly_output(p, true));
                }
            }
            Ok(to_json(&v))
        }
        Command::Exotic { node } => {
            let t = read_triple(&node.triple)?;
            let e = Pipeline::default().exotic(&t, node.dim as usize).map_err(domain)?;
            if pretty {
                if let Some(p) = &e.potential {
                    return Ok(poly_output(p, true));
                }
            }
            Ok(to_json(&*e))
        }
        Command::Markov { depth } => {
            if *depth > 20 {
                return Err(Failure::Input(format!("depth {depth} is above the supported maximum 20")));
            }
            let nodes: Vec<Value> = enumerate_tree(*depth)
                .into_iter()
                .map(|n| json!({ "triple": n.triple, "parent": n.parent, "depth": n.depth, "children": markov_children(&n.triple) }))
                .collect();
            Ok(to_json(&nodes))
        }
        Command::Invariants { polytope, csv } => {
            let p = read_polytope(polytope)?;
            let f = fingerprint(&p).map_err(domain)?;
            if *csv {
                return Ok(format!("{FINGERPRINT_CSV_HEADER}\n{}\n", fingerprint_csv_row(&f)));
            }
            let fano = is_fano(&p).ok();
            Ok(to_json(&json!({
                "polytope": p,
                "dim": p.dim(),
                "fingerprint": f,
                "fano": fano.as_ref().map(|r| r.is_fano()),
                "fano_report": fano,
            })))
        }
        Command::Equiv { a, b } => {
            let p = read_polytope(a)?;
            let q = read_polytope(b)?;
            let eq = bspkit::are_equivalent(&p, &q);
            let map = if eq && p.is_full_dimensional() { find_affine_maps(&p, &q).into_iter().next() } else { None };
            Ok(to_json(&json!({ "equivalent": eq, "map": map })))
        }
        Command::Render { polytope, potential, projection, scale, no_grid } => {
            if cli.out.is_none() {
                return Err(Failure::Input("render needs --out".into()));
            }
            let p = read_polytope(polytope)?;
            let w = potential.as_deref().map(read_poly).transpose()?;
            let projection = match projection {
                None => None,
                Some(s) => Some(parse_projection(s).ok_or_else(|| Failure::Input(format!("bad projection {s:?}")))?),
            };
            let cfg = RenderConfig { grid: !no_grid, scale: *scale, projection };
            render(&p, w.as_ref(), &cfg).map_err(|e| match e {
                bspkit::RenderError::UnsupportedRank(_) => domain(e),
                other => Failure::Input(other.to_string()),
            })
        }
        Command::Report { depth, dim, json } => {
            if !(2..=6).contains(dim) || *depth > 6 {
                return Err(Failure::Input("report supports --dim 2..6 and --depth up to 6".into()));
            }
            let r = Pipeline::default().family_report(*depth, *dim);
            for row in r.rows.iter().filter(|x| x.error.is_some()) {
                eprintln!("warning: {} {}: {}", row.triple, row.variant.as_str(), row.error.as_deref().unwrap_or(""));
            }
            Ok(if *json { to_json(&r) } else { r.to_csv() })
        }
    }
}

fn lift_node(t: &MarkovTriple, n: usize) -> Result<std::sync::Arc<bspkit::markov::LiftNode>, Failure> {
    Pipeline::default().lift(t, n).map_err(domain)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    std::panic::set_hook(Box::new(|_| {}));
    let result = std::panic::catch_unwind(|| run(&cli)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(Failure::Domain(format!("internal error: {}", msg.unwrap_or_default())))
    });
    match result {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
