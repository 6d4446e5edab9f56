use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use maxcard_core::protocol::{run_two_player, ProtocolKind};
use maxcard_core::solve::brute_force_opt;
use maxcard_core::{generate, Instance, SeedSplitter, VALUE_TOLERANCE};

use crate::config::ExperimentConfig;

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Protocols to run: p1, p1g, p3, half, sieve (repeat or comma-separate).
    #[arg(long = "protocol")]
    pub protocols: Vec<String>,
    /// Instance files or directories of them.
    #[arg(long = "instance")]
    pub instances: Vec<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Grouping parameter for p1g and sieve.
    #[arg(long)]
    pub eps: Option<f64>,
    /// CSV report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Optional JSON report with the same rows and any failures.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Replace every protocol's advertised ratio by this floor.
    #[arg(long)]
    pub floor: Option<f64>,
}

/// One report row. Field order is the CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub instance_id: String,
    pub protocol: String,
    pub value: f64,
    pub opt: f64,
    pub ratio: f64,
    pub msg_elements: usize,
    pub msg_bytes: usize,
    pub max_query_card: usize,
    pub queries: u64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [Row],
    failures: &'a [String],
}

fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn evaluate(id: &str, inst: &Instance, kinds: &[ProtocolKind], k: usize, floor: Option<f64>) -> Result<(Vec<Row>, Vec<String>)> {
    let part = inst.partition()?;
    let oracle = inst.oracle(Some(k))?;
    let all: Vec<usize> = (0..inst.ground_size).collect();
    let (_, opt) = brute_force_opt(&oracle, &all, k).with_context(|| format!("optimum of {id}"))?;
    let mut rows = Vec::with_capacity(kinds.len());
    let mut failures = Vec::new();
    for kind in kinds {
        let proto = kind.build()?;
        let t = run_two_player(proto.as_ref(), &part, &oracle, k).with_context(|| format!("{kind} on {id}"))?;
        let target = floor.unwrap_or_else(|| proto.guarantee());
        if t.value < target * opt - VALUE_TOLERANCE {
            failures.push(format!("{id}: {kind} reached {} < {target} x {opt}", t.value));
        }
        if t.message_elements() > proto.message_bound(k) {
            failures.push(format!(
                "{id}: {kind} sent {} elements, above its bound {}",
                t.message_elements(),
                proto.message_bound(k)
            ));
        }
        rows.push(Row {
            instance_id: id.to_string(),
            protocol: kind.to_string(),
            value: t.value,
            opt,
            ratio: if opt > 0.0 { t.value / opt } else { 1.0 },
            msg_elements: t.message_elements(),
            msg_bytes: t.message_bytes(),
            max_query_card: t.max_query_cardinality(),
            queries: t.queries(),
        });
    }
    Ok((rows, failures))
}

pub fn write_csv(rows: &[Row], path: Option<&PathBuf>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["instance_id", "protocol", "value", "opt", "ratio", "msg_elements", "msg_bytes", "max_query_card", "queries"])?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("flushing CSV: {e}"))?;
    crate::write_output(path, &String::from_utf8(bytes)?)
}

pub fn run(args: RunArgs) -> Result<bool> {
    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let names = if args.protocols.is_empty() { cfg.protocols.clone() } else { args.protocols.clone() };
    let eps = args.eps.or(cfg.eps);
    let kinds = super::parse_protocols(&names, eps)?;
    if kinds.is_empty() {
        bail!("no protocols given; pass --protocol or list them in the config");
    }
    let k = args.k.or(cfg.k).context("no cardinality bound; pass --k or set it in the config")?;
    let report = args.report.clone().or(cfg.report.clone());
    let json = args.json.clone().or(cfg.json.clone());

    let mut instances: Vec<(String, Instance)> = Vec::new();
    let paths = if args.instances.is_empty() { cfg.instances.clone() } else { args.instances.clone() };
    for path in expand(&paths)? {
        let inst = Instance::load(&path)?;
        let id = inst.id.clone().unwrap_or_else(|| stem(&path));
        instances.push((id, inst));
    }
    if args.instances.is_empty() {
        if let Some(g) = &cfg.generator {
            let seeds = SeedSplitter::new(g.seed);
            for i in 0..g.count {
                let id = format!("{}-{i:04}", g.spec.kind());
                instances.push((id.clone(), generate(&g.spec, seeds.derive(i as u64), Some(id))?));
            }
        }
    }
    if instances.is_empty() {
        bail!("no instances; pass --instance or configure a generator");
    }
    instances.sort_by(|a, b| a.0.cmp(&b.0));

    let results = instances
        .par_iter()
        .map(|(id, inst)| evaluate(id, inst, &kinds, k, args.floor))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in results {
        rows.extend(r);
        failures.extend(f);
    }
    write_csv(&rows, report.as_ref())?;
    if let Some(p) = &json {
        let text = serde_json::to_string_pretty(&JsonReport { rows: &rows, failures: &failures })?;
        std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    for f in &failures {
        eprintln!("FAIL {f}");
    }
    eprintln!(
        "{} rows over {} instances, {} failures",
        rows.len(),
        instances.len(),
        failures.len()
    );
    Ok(failures.is_empty())
}
