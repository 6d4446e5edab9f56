use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;

use maxcard_core::protocol::ProtocolKind;
use maxcard_core::robust::{adversary, build_summary, query_summary, Adversary};
use maxcard_core::solve::brute_force_opt;
use maxcard_core::{generate, GeneratorSpec, SeedSplitter, VALUE_TOLERANCE};

use crate::config::ExperimentConfig;

#[derive(Debug, Args)]
pub struct RobustArgs {
    /// Wrapped protocol. Default p3.
    #[arg(long)]
    pub protocol: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Deletion budget. Default 2.
    #[arg(long)]
    pub d: Option<usize>,
    /// Default 3.
    #[arg(long)]
    pub k: Option<usize>,
    /// Ground set size of the generated coverage instances. Default 12.
    #[arg(long)]
    pub n: Option<usize>,
    /// random or greedy
    #[arg(long, default_value = "random")]
    pub adversary: String,
    /// Default 50.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the first trial's summary here as JSON.
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

struct Trial {
    ratio: f64,
    ell: usize,
    stored: usize,
    problem: Option<String>,
}

pub fn run(args: RobustArgs) -> Result<bool> {
    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let name = args.protocol.clone().or_else(|| cfg.protocols.first().cloned()).unwrap_or_else(|| "p3".into());
    let (d, k, n) = (args.d.or(cfg.d).unwrap_or(2), args.k.or(cfg.k).unwrap_or(3), args.n.or(cfg.n).unwrap_or(12));
    let trials = args.trials.or(cfg.trials).unwrap_or(50);
    let kind = ProtocolKind::from_name(&name, args.eps.or(cfg.eps))?;
    let adv = Adversary::from_name(&args.adversary)?;
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let guarantee = kind.build()?.guarantee();
    let bound = kind.build()?.message_bound(k);
    let seeds = SeedSplitter::new(args.seed);
    let spec = GeneratorSpec::Coverage {
        n,
        universe: 10,
        density: 0.3,
    };
    let trials = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<Trial> {
            let s = seeds.derive(i);
            let inst = generate(&spec, s, None)?;
            let oracle = inst.oracle(None)?;
            let ground: Vec<usize> = (0..inst.ground_size).collect();
            let summary = build_summary(&oracle, &ground, k, d, kind)?;
            if i == 0 {
                if let Some(p) = &args.summary_out {
                    let text = serde_json::to_string_pretty(&summary)?;
                    std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
                }
            }
            let deleted = adversary(adv, &summary, &oracle, d, s)?;
            let answer = query_summary(&summary, &oracle, &deleted)?;
            let rest: Vec<usize> = ground.iter().copied().filter(|e| !deleted.contains(e)).collect();
            let (_, opt) = brute_force_opt(&oracle, &rest, k)?;
            let mut problem = None;
            if !summary.pairwise_disjoint() {
                problem = Some(format!("trial {i}: summary messages overlap"));
            } else if answer.solution.len() > k || answer.solution.iter().any(|e| deleted.contains(e)) {
                problem = Some(format!("trial {i}: infeasible answer {:?}", answer.solution));
            } else if answer.value < guarantee * opt - VALUE_TOLERANCE {
                problem = Some(format!("trial {i}: value {} below {guarantee} x {opt}", answer.value));
            } else if summary.stored_elements() > (d + 1) * bound {
                problem = Some(format!("trial {i}: summary holds {} elements", summary.stored_elements()));
            }
            Ok(Trial {
                ratio: if opt > 0.0 { answer.value / opt } else { 1.0 },
                ell: answer.ell,
                stored: summary.stored_elements(),
                problem,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let worst = trials.iter().map(|t| t.ratio).fold(f64::INFINITY, f64::min);
    let mean = trials.iter().map(|t| t.ratio).sum::<f64>() / trials.len() as f64;
    let max_ell = trials.iter().map(|t| t.ell).max().unwrap_or(1);
    let max_stored = trials.iter().map(|t| t.stored).max().unwrap_or(0);
    println!("protocol     {kind}  d={}  k={}  adversary={}", d, k, args.adversary);
    println!("ratio        worst {worst:.4}  mean {mean:.4}  (guarantee {guarantee})");
    println!("summary      at most {max_stored} elements, answered from copy ≤ {max_ell}");
    let problems: Vec<&String> = trials.iter().filter_map(|t| t.problem.as_ref()).collect();
    for p in &problems {
        eprintln!("FAIL {p}");
    }
    Ok(problems.is_empty())
}
