//! `qpart qubo`: build the QUBO for a graph and write the COO text file
//! plus a JSON sidecar carrying the layout and weights.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use anyhow::{Context, Result};
use serde_json::json;

use qpart::load_edge_list;
use qpart::qubo::{build_qubo, PenaltyWeights};

use crate::config::Resolved;
use crate::QuboArgs;

pub fn run(args: QuboArgs) -> Result<()> {
    let cfg = Resolved::from_layers(&args.solver)?;
    let file = File::open(&args.input)
        .with_context(|| format!("cannot open input {}", args.input.display()))?;
    let graph = load_edge_list(BufReader::new(file))
        .with_context(|| format!("parsing edge list {}", args.input.display()))?;

    let weights = cfg
        .weights_for(&graph)
        .unwrap_or_else(|| PenaltyWeights::defaults_for(&graph));
    let qubo = build_qubo(&graph, args.k, &weights)?;

    let mut out = BufWriter::new(
        File::create(&args.output)
            .with_context(|| format!("cannot create output {}", args.output.display()))?,
    );
    qubo.write_coo(&mut out)?;
    out.flush()?;

    let sidecar_path = {
        let mut s = args.output.clone().into_os_string();
        s.push(".json");
        std::path::PathBuf::from(s)
    };
    let (n, k) = qubo.layout();
    let sidecar = json!({
        "input": args.input.display().to_string(),
        "layout": { "n": n, "k": k },
        "dim": qubo.dim(),
        "nnz": qubo.quadratic().len(),
        "offset": qubo.offset(),
        "weights": weights,
        "config_digest": cfg.digest(),
    });
    let mut sc = File::create(&sidecar_path)
        .with_context(|| format!("cannot create sidecar {}", sidecar_path.display()))?;
    serde_json::to_writer_pretty(&mut sc, &sidecar)?;
    sc.write_all(b"\n")?;

    println!(
        "{} n={n} k={k} dim={} -> {}",
        args.input.display(),
        qubo.dim(),
        args.output.display()
    );
    Ok(())
}
