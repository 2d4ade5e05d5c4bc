//! `qpart bench`: run methods over a manifest of instances and emit a CSV
//! of run records plus an optional Markdown summary table.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;

use qpart::load_edge_list;

use crate::config::Resolved;
use crate::methods::{density_pct, run_method, Method, RunRecord};
use crate::BenchArgs;

struct ManifestEntry {
    path: PathBuf,
    k: u32,
}

fn parse_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split_whitespace().collect();
        if fields.len() != 2 {
            anyhow::bail!(
                "manifest line {}: expected `path k`, got `{s}`",
                lineno + 1
            );
        }
        let k: u32 = fields[1]
            .parse()
            .with_context(|| format!("manifest line {}: bad k `{}`", lineno + 1, fields[1]))?;
        let p = PathBuf::from(fields[0]);
        let path = if p.is_absolute() { p } else { base.join(p) };
        entries.push(ManifestEntry { path, k });
    }
    Ok(entries)
}

/// One instance, all requested methods. Failures become `error:` status
/// rows instead of aborting the run.
fn run_instance(
    index: usize,
    entry: &ManifestEntry,
    methods: &[Method],
    cfg: &Resolved,
) -> Vec<RunRecord> {
    let instance = entry
        .path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| entry.path.display().to_string());
    // Per-instance seed derived from the master seed and manifest position.
    let cfg = cfg.with_seed(cfg.seed.wrapping_add(index as u64));
    let digest = cfg.digest();

    let graph = match File::open(&entry.path)
        .map_err(anyhow::Error::from)
        .and_then(|f| load_edge_list(BufReader::new(f)).map_err(anyhow::Error::from))
    {
        Ok(g) => g,
        Err(err) => {
            return methods
                .iter()
                .map(|m| RunRecord {
                    instance: instance.clone(),
                    n: 0,
                    m: 0,
                    density_pct: 0.0,
                    k: entry.k,
                    method: m.tag(),
                    seed: cfg.seed,
                    config_digest: digest.clone(),
                    status: format!("error: {err:#}"),
                    modularity: None,
                    energy: None,
                    wall_time_ms: 0.0,
                })
                .collect();
        }
    };

    methods
        .iter()
        .map(|&m| match run_method(&graph, entry.k, m, &cfg) {
            Ok(out) => RunRecord {
                instance: instance.clone(),
                n: graph.node_count(),
                m: graph.edge_count(),
                density_pct: density_pct(&graph),
                k: entry.k,
                method: m.tag(),
                seed: cfg.seed,
                config_digest: digest.clone(),
                status: "ok".into(),
                modularity: Some(out.modularity),
                energy: out.energy,
                wall_time_ms: out.wall_ms,
            },
            Err(err) => RunRecord {
                instance: instance.clone(),
                n: graph.node_count(),
                m: graph.edge_count(),
                density_pct: density_pct(&graph),
                k: entry.k,
                method: m.tag(),
                seed: cfg.seed,
                config_digest: digest.clone(),
                status: format!("error: {err:#}"),
                modularity: None,
                energy: None,
                wall_time_ms: 0.0,
            },
        })
        .collect()
}

pub fn run(args: BenchArgs) -> Result<()> {
    let cfg = Resolved::from_layers(&args.solver)?;
    let entries = parse_manifest(&args.manifest)?;
    let methods = if args.methods.is_empty() {
        vec![Method::Qhd]
    } else {
        args.methods.clone()
    };

    let records: Vec<RunRecord> = if args.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.parallel)
            .build()
            .context("building the worker pool")?;
        // Indexed collect keeps records in manifest order.
        pool.install(|| {
            entries
                .par_iter()
                .enumerate()
                .map(|(i, e)| run_instance(i, e, &methods, &cfg))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    } else {
        entries
            .iter()
            .enumerate()
            .flat_map(|(i, e)| run_instance(i, e, &methods, &cfg))
            .collect()
    };

    write_csv(&args.out_csv, &records)?;
    if let Some(md) = &args.out_md {
        write_markdown(md, &records, &methods)?;
    }
    for r in &records {
        println!(
            "{} {} {} {} {} {} {:.3}s",
            r.instance,
            r.n,
            r.m,
            r.k,
            r.method,
            r.modularity
                .map(|q| format!("{q:.6}"))
                .unwrap_or_else(|| r.status.clone()),
            r.wall_time_ms / 1e3,
        );
    }
    Ok(())
}

fn write_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create CSV {}", path.display()))?;
    w.write_record([
        "instance",
        "n",
        "m",
        "density_pct",
        "k",
        "method",
        "seed",
        "config_digest",
        "status",
        "modularity",
        "energy",
        "wall_time_ms",
    ])?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            r.m.to_string(),
            format!("{:.4}", r.density_pct),
            r.k.to_string(),
            r.method.to_string(),
            r.seed.to_string(),
            r.config_digest.clone(),
            r.status.clone(),
            r.modularity.map(|q| format!("{q:.6}")).unwrap_or_default(),
            r.energy.map(|e| format!("{e:.9}")).unwrap_or_default(),
            format!("{:.3}", r.wall_time_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Markdown table: one row per instance, one modularity column per method.
fn write_markdown(path: &Path, records: &[RunRecord], methods: &[Method]) -> Result<()> {
    let mut per_instance: BTreeMap<String, (usize, usize, f64, u32, BTreeMap<&str, String>)> =
        BTreeMap::new();
    for r in records {
        let slot = per_instance
            .entry(r.instance.clone())
            .or_insert_with(|| (r.n, r.m, r.density_pct, r.k, BTreeMap::new()));
        slot.4.insert(
            r.method,
            r.modularity
                .map(|q| format!("{q:.4}"))
                .unwrap_or_else(|| "-".into()),
        );
    }
    let mut out = File::create(path)
        .with_context(|| format!("cannot create Markdown {}", path.display()))?;
    write!(out, "| Instance | Nodes | Edges | Density % |")?;
    for m in methods {
        write!(out, " {} |", m.tag())?;
    }
    writeln!(out)?;
    write!(out, "|---|---|---|---|")?;
    for _ in methods {
        write!(out, "---|")?;
    }
    writeln!(out)?;
    for (instance, (n, m, density, _k, scores)) in &per_instance {
        write!(out, "| {instance} | {n} | {m} | {density:.2} |")?;
        for method in methods {
            let score = scores
                .get(method.tag())
                .cloned()
                .unwrap_or_else(|| "-".into());
            write!(out, " {score} |")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
