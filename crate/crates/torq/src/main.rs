use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use torq::cohomology::{
    gkm_check_h, gkm_check_k, gkm_graph_unchecked, hilbert_function, poincare_from_hilbert,
    PiecewiseElement, PpMode, Theory, Violation,
};
use torq::io::{element_from_json, polytope_from_json, retraction_to_json};
use torq::linalg::{parse_matrix_text, snf, IntMatrix};
use torq::polytope::{FaceLattice, Polytope};
use torq::retraction::{
    betti_numbers, enumerate_retractions, find_retraction, RetractionOutcome, RetractionSequence,
};
use torq::singularity::{is_divisive, orbifold_data, DivisiveOutcome};

#[derive(Parser)]
#[command(name = "torq", about = "Exact toric invariants of lattice polytopes", disable_version_flag = true)]
struct Cli {
    /// Emit a JSON report instead of plain text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide simplicity, almost-simplicity, and divisiveness
    Classify {
        poly: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Find or replay a retraction sequence
    Retract {
        poly: PathBuf,
        /// Comma-separated vertex deletion order to replay
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Enumerate up to N distinct sequences
        #[arg(long)]
        all: Option<usize>,
    },
    /// Per-step orbifold groups along a retraction sequence
    Orbifold {
        poly: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Print the GKM graph (weighted 1-skeleton)
    Gkm { poly: PathBuf },
    /// Betti numbers from a retraction sequence
    Betti { poly: PathBuf },
    /// Check membership of an element file against a polytope
    Check {
        poly: PathBuf,
        element: PathBuf,
        #[arg(long, value_enum, default_value = "gkm")]
        mode: CheckMode,
    },
    /// Graded dimensions of the piecewise polynomial algebra
    Hilbert {
        poly: PathBuf,
        #[arg(long)]
        max_deg: usize,
    },
    /// Smith normal form of an integer matrix file
    Snf { matrix: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Expectation {
    Simple,
    Almost,
    Divisive,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Gkm,
    Walls,
    All,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Failure {
        Failure { code: 2, message: msg.into() }
    }
    fn not_almost_simple() -> Failure {
        Failure { code: 3, message: "polytope is not almost simple".into() }
    }
    fn property(msg: impl Into<String>) -> Failure {
        Failure { code: 1, message: msg.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_polytope(path: &PathBuf) -> Result<(Polytope, FaceLattice), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let p = polytope_from_json(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let l = p.face_lattice();
    Ok((p, l))
}

fn coords(p: &Polytope, v: usize) -> String {
    let parts: Vec<String> = p.vertices[v]
        .iter()
        .map(|x| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        })
        .collect();
    format!("({})", parts.join(","))
}

fn require_sequence(
    p: &Polytope,
    l: &FaceLattice,
    order: Option<&[usize]>,
) -> Result<RetractionSequence, Failure> {
    match find_retraction(p, l, order) {
        Ok(RetractionOutcome::Sequence(seq)) => Ok(seq),
        Ok(RetractionOutcome::NotAlmostSimple(_)) => Err(Failure::not_almost_simple()),
        Err(e) => Err(Failure::input(e.to_string())),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify { poly, expect } => classify(cli, poly, *expect),
        Command::Retract { poly, order, all } => retract(cli, poly, order.as_deref(), *all),
        Command::Orbifold { poly, order } => orbifold(cli, poly, order.as_deref()),
        Command::Gkm { poly } => gkm(cli, poly),
        Command::Betti { poly } => betti(cli, poly),
        Command::Check { poly, element, mode } => check(cli, poly, element, *mode),
        Command::Hilbert { poly, max_deg } => hilbert(cli, poly, *max_deg),
        Command::Snf { matrix } => snf_cmd(cli, matrix),
    }
}

fn classify(cli: &Cli, poly: &PathBuf, expect: Option<Expectation>) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    let simple = p.is_simple();
    let (almost, divisive, witness) = match find_retraction(&p, &l, None) {
        Ok(RetractionOutcome::Sequence(_)) => match is_divisive(&p, &l) {
            Ok(DivisiveOutcome::Divisive(seq)) => (true, true, Some(seq.vertex_order())),
            Ok(DivisiveOutcome::NotDivisive) => (true, false, None),
            Err(e) => return Err(Failure::input(e.to_string())),
        },
        Ok(RetractionOutcome::NotAlmostSimple(_)) => (false, false, None),
        Err(e) => return Err(Failure::input(e.to_string())),
    };
    if cli.json {
        let report = json!({
            "command": "classify",
            "name": p.name,
            "simple": simple,
            "almost_simple": almost,
            "divisive": if almost { Some(divisive) } else { None },
            "witness_order": witness,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else if !almost {
        println!("almost_simple=no");
    } else {
        println!(
            "simple={} almost_simple=yes divisive={}",
            if simple { "yes" } else { "no" },
            if divisive { "yes" } else { "no" }
        );
    }
    if let Some(exp) = expect {
        let ok = match exp {
            Expectation::Simple => simple,
            Expectation::Almost => almost,
            Expectation::Divisive => divisive,
        };
        if !ok {
            return Err(Failure::property("expectation not met"));
        }
    }
    Ok(())
}

fn retract(
    cli: &Cli,
    poly: &PathBuf,
    order: Option<&[usize]>,
    all: Option<usize>,
) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    if let Some(limit) = all {
        let seqs = enumerate_retractions(&l, limit.max(1));
        if seqs.is_empty() {
            return Err(Failure::not_almost_simple());
        }
        if cli.json {
            let report = json!({
                "command": "retract",
                "name": p.name,
                "sequences": seqs
                    .iter()
                    .map(|s| json!({
                        "order": s.vertex_order(),
                        "k_sequence": s.k_sequence(),
                    }))
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        } else {
            for (i, s) in seqs.iter().enumerate() {
                let order: Vec<String> = s.vertex_order().iter().map(|v| v.to_string()).collect();
                let ks: Vec<String> = s.k_sequence().iter().map(|k| k.to_string()).collect();
                println!("sequence {i}: order=[{}] k=({})", order.join(","), ks.join(","));
            }
        }
        return Ok(());
    }
    let seq = require_sequence(&p, &l, order)?;
    if cli.json {
        let report = json!({
            "command": "retract",
            "name": p.name,
            "steps": retraction_to_json(&p, &l, &seq),
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for (j, s) in seq.steps.iter().enumerate() {
            let partners: Vec<String> = s.edges.iter().map(|&(_, w)| w.to_string()).collect();
            println!(
                "j={} v={} k={} edges_to=[{}]",
                j,
                coords(&p, s.vertex),
                s.k,
                partners.join(",")
            );
        }
    }
    Ok(())
}

fn orbifold(cli: &Cli, poly: &PathBuf, order: Option<&[usize]>) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    let seq = require_sequence(&p, &l, order)?;
    let report = orbifold_data(&p, &l, &seq).map_err(|e| Failure::input(e.to_string()))?;
    if cli.json {
        let out = json!({
            "command": "orbifold",
            "name": p.name,
            "steps": report.data.iter().map(|d| json!({
                "stage": d.stage,
                "vertex": d.vertex,
                "k": d.k,
                "invariant_factors": d.group.invariant_factors().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "divisive_for_sequence": report.is_divisive(),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for d in &report.data {
            let factors: Vec<String> = d
                .group
                .invariant_factors()
                .iter()
                .map(|x| x.to_string())
                .collect();
            println!(
                "j={} v={} k={} K=[{}]",
                d.stage,
                coords(&p, d.vertex),
                d.k,
                factors.join(",")
            );
        }
        println!(
            "divisive(sequence)={}",
            if report.is_divisive() { "yes" } else { "no" }
        );
    }
    Ok(())
}

fn gkm(cli: &Cli, poly: &PathBuf) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    require_sequence(&p, &l, None)?;
    let g = gkm_graph_unchecked(&p, &l);
    if cli.json {
        let out = json!({
            "command": "gkm",
            "name": p.name,
            "edges": g.edges.iter().map(|e| json!({
                "v": e.v,
                "w": e.w,
                "weight": e.weight.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for e in &g.edges {
            let w: Vec<String> = e.weight.iter().map(|x| x.to_string()).collect();
            println!("edge ({},{}) weight=({})", e.v, e.w, w.join(","));
        }
    }
    Ok(())
}

fn betti(cli: &Cli, poly: &PathBuf) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    let seq = require_sequence(&p, &l, None)?;
    let b = betti_numbers(&seq, p.dim);
    if cli.json {
        let out = json!({ "command": "betti", "name": p.name, "betti": b.0 });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        let parts: Vec<String> = b.0.iter().map(|x| x.to_string()).collect();
        println!("betti=({})", parts.join(","));
    }
    Ok(())
}

fn render_violations(x: &PiecewiseElement, viols: &[Violation]) -> Vec<String> {
    viols.iter().map(|v| v.render(&x.variables)).collect()
}

fn check(cli: &Cli, poly: &PathBuf, element: &PathBuf, mode: CheckMode) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    require_sequence(&p, &l, None)?;
    let text = std::fs::read_to_string(element)
        .map_err(|e| Failure::input(format!("{}: {e}", element.display())))?;
    let x = element_from_json(&text, &p)
        .map_err(|e| Failure::input(format!("{}: {e}", element.display())))?;
    let g = gkm_graph_unchecked(&p, &l);
    let viols = match (x.theory, mode) {
        (Theory::K, CheckMode::Gkm) => gkm_check_k(&g, &x),
        (Theory::K, _) => {
            return Err(Failure::input(
                "K-theory elements support only --mode gkm",
            ))
        }
        (Theory::H, CheckMode::Gkm) => gkm_check_h(&g, &x, x.ring),
        (Theory::H, CheckMode::Walls) => torq::cohomology::pp_check(&p, &l, &x, PpMode::Walls),
        (Theory::H, CheckMode::All) => torq::cohomology::pp_check(&p, &l, &x, PpMode::AllFaces),
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    if cli.json {
        let out = json!({
            "command": "check",
            "name": p.name,
            "pass": viols.is_empty(),
            "violations": render_violations(&x, &viols),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else if viols.is_empty() {
        println!("PASS");
    } else {
        for line in render_violations(&x, &viols) {
            println!("{line}");
        }
    }
    if viols.is_empty() {
        Ok(())
    } else {
        Err(Failure::property("membership check failed"))
    }
}

fn hilbert(cli: &Cli, poly: &PathBuf, max_deg: usize) -> Result<(), Failure> {
    let (p, l) = load_polytope(poly)?;
    require_sequence(&p, &l, None)?;
    let dims = hilbert_function(&p, &l, max_deg);
    let betti = if max_deg > p.dim {
        poincare_from_hilbert(p.ambient_dim(), &dims).ok().map(|b| b.0)
    } else {
        None
    };
    if cli.json {
        let out = json!({
            "command": "hilbert",
            "name": p.name,
            "dims": dims,
            "poincare": betti,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for (d, h) in dims.iter().enumerate() {
            println!("d={d} dim={h}");
        }
        if let Some(b) = betti {
            let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            println!("poincare=({})", parts.join(","));
        }
    }
    Ok(())
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn print_matrix(label: &str, m: &IntMatrix) {
    println!("{label}:");
    for row in matrix_rows(m) {
        println!("  {}", row.join(" "));
    }
}

fn snf_cmd(cli: &Cli, matrix: &PathBuf) -> Result<(), Failure> {
    let text = std::fs::read_to_string(matrix)
        .map_err(|e| Failure::input(format!("{}: {e}", matrix.display())))?;
    let m = parse_matrix_text(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", matrix.display())))?;
    let dec = snf(&m);
    if cli.json {
        let mut out = BTreeMap::new();
        out.insert("command", json!("snf"));
        out.insert("u", json!(matrix_rows(&dec.u)));
        out.insert("d", json!(matrix_rows(&dec.d)));
        out.insert("v", json!(matrix_rows(&dec.v)));
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        print_matrix("D", &dec.d);
        print_matrix("U", &dec.u);
        print_matrix("V", &dec.v);
    }
    Ok(())
}
