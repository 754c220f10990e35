//! Scratch harness for exploring crossing-probability decay on a family:
//!
//! ```text
//! cargo run --release -p percolab --example tune -- hexagonal_lattice 0.62 12,24,48 20000
//! ```

use percolab::graphs::families::GraphSpec;
use percolab::percolation::{classify, PercConfig};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 4 {
        eprintln!("usage: tune <family[:d]> <p[,p2,...]> <r1,r2,...> <trials> [seed]");
        std::process::exit(2);
    }
    let (family, d) = match args[0].split_once(':') {
        Some((f, d)) => (f.to_string(), Some(d.parse().unwrap())),
        None => (args[0].clone(), None),
    };
    let graph = GraphSpec::new(family, d).build().unwrap();
    let ps: Vec<f64> = args[1].split(',').map(|s| s.parse().unwrap()).collect();
    let radii: Vec<u32> = args[2].split(',').map(|s| s.parse().unwrap()).collect();
    let trials: u64 = args[3].parse().unwrap();
    let seed: u64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(1);

    for &p in &ps {
        let start = std::time::Instant::now();
        let out = classify(&graph, p, &radii, trials, seed);
        print!("p={p:<7} {:?}", out.class);
        for est in &out.estimates {
            print!(
                "  r{}: {:.4} [{:.4},{:.4}]{}",
                est.radius,
                est.point,
                est.ci_low,
                est.ci_high,
                if est.budget_flagged > 0 { "*" } else { "" }
            );
        }
        println!("  ({:?})", start.elapsed());
        let _ = PercConfig::new(p, radii[0], trials, seed);
    }
}
