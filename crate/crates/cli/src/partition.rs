//! `qpart partition`: run one method on one graph, write the JSON result,
//! print a one-line summary.

use std::fs::File;
use std::io::{BufReader, Write};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use qpart::load_edge_list;

use crate::config::Resolved;
use crate::methods::{density_pct, run_method};
use crate::PartitionArgs;

pub fn run(args: PartitionArgs) -> Result<()> {
    let cfg = Resolved::from_layers(&args.solver)?;
    let file = File::open(&args.input)
        .with_context(|| format!("cannot open input {}", args.input.display()))?;
    let graph = load_edge_list(BufReader::new(file))
        .with_context(|| format!("parsing edge list {}", args.input.display()))?;

    let instance = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.input.display().to_string());

    let outcome = run_method(&graph, args.k, args.method, &cfg)
        .with_context(|| format!("method {} on {instance}", args.method.tag()))?;

    // Assignment keyed by the original node labels.
    let mut assignment = Map::new();
    for v in 0..graph.node_count() as u32 {
        assignment.insert(
            graph.label(v),
            Value::from(outcome.partition.group_of(v)),
        );
    }

    let doc = json!({
        "instance": instance,
        "n": graph.node_count(),
        "m": graph.edge_count(),
        "density_pct": density_pct(&graph),
        "k": args.k,
        "method": args.method.tag(),
        "seed": cfg.seed,
        "config_digest": cfg.digest(),
        "modularity": outcome.modularity,
        "energy": outcome.energy,
        "assignment": Value::Object(assignment),
        "report": outcome.report,
        "timings": { "wall_time_ms": outcome.wall_ms },
    });

    if let Some(path) = &args.output {
        let mut out = File::create(path)
            .with_context(|| format!("cannot create output {}", path.display()))?;
        serde_json::to_writer_pretty(&mut out, &doc)?;
        out.write_all(b"\n")?;
    }

    println!(
        "{instance} {n} {m} {k} {method} {q:.6} {t:.3}s",
        n = graph.node_count(),
        m = graph.edge_count(),
        k = args.k,
        method = args.method.tag(),
        q = outcome.modularity,
        t = outcome.wall_ms / 1e3,
    );
    Ok(())
}
