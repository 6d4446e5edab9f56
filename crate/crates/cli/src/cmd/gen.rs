use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use maxcard_core::{generate, GeneratorSpec, SeedSplitter};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Coverage,
    Adversarial,
    Hardness,
    Index,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Elements (coverage), block size (hardness) or string length (index).
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub universe: usize,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long, default_value_t = 4)]
    pub per_side: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

impl GenArgs {
    pub fn spec(&self) -> GeneratorSpec {
        match self.kind {
            Kind::Coverage => GeneratorSpec::Coverage {
                n: self.n,
                universe: self.universe,
                density: self.density,
            },
            Kind::Adversarial => GeneratorSpec::Adversarial {
                per_side: self.per_side,
                k: self.k,
            },
            Kind::Hardness => GeneratorSpec::Hardness { p: self.p, n: self.n },
            Kind::Index => GeneratorSpec::Index { n: self.n, k: self.k },
        }
    }
}

pub fn run(args: GenArgs) -> Result<bool> {
    if args.count == 0 {
        bail!("--count must be positive");
    }
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let spec = args.spec();
    let seeds = SeedSplitter::new(args.seed);
    for i in 0..args.count {
        let id = format!("{}-{i:04}", spec.kind());
        let inst = generate(&spec, seeds.derive(i as u64), Some(id.clone()))?;
        let path = args.out.join(format!("{id}.json"));
        inst.save(&path)?;
        println!("{}", path.display());
    }
    Ok(true)
}
