use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;

use maxcard_core::hardness::{
    derivative_bounds_check, hidden_choices, indistinguishability_check, make_weights, value_gap_check, HardnessInstance,
    INDISTINGUISHABILITY_GUARD,
};
use maxcard_core::nlp::{f1, f2, grid_search, kkt_residual, solve_nlp, NLP_Y_MAX};

fn line(ok: bool, what: String) -> bool {
    println!("{}  {what}", if ok { "PASS" } else { "FAIL" });
    ok
}

#[derive(Debug, Args)]
pub struct NlpArgs {
    #[arg(long, default_value_t = 0.001)]
    pub grid: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub refine_tol: f64,
    /// Lowest objective value the grid may reach.
    #[arg(long, default_value_t = 0.514)]
    pub z_floor: f64,
}

pub fn nlp(args: NlpArgs) -> Result<bool> {
    let sol = solve_nlp(args.grid, args.refine_tol)?;
    let c = sol.closed_form;
    println!("x*  {:.10}", c.x);
    println!("y*  {:.10}", c.y);
    println!("z*  {:.10}", c.z);
    println!("numeric      x={:.10} y={:.10} z={:.10}", sol.numeric.x, sol.numeric.y, sol.numeric.z);
    println!("second root  {:.10} (rejected)", sol.spurious_root);
    let grid = grid_search(args.grid, NLP_Y_MAX);
    let mut ok = true;
    ok &= line((c.x - 0.7175647).abs() <= 1e-5, format!("x* = {:.7} within 1e-5 of 0.7175647", c.x));
    ok &= line((c.y - 0.6797341).abs() <= 1e-5, format!("y* = {:.7} within 1e-5 of 0.6797341", c.y));
    ok &= line((0.514..0.515).contains(&c.z), format!("z* = {:.6} in [0.514, 0.515)", c.z));
    ok &= line(kkt_residual(c.x).abs() <= 1e-10, format!("stationarity residual {:.1e}", kkt_residual(c.x)));
    ok &= line((f1(c.x, c.y) - f2(c.x, c.y)).abs() <= 1e-9, "both constraints tight at the optimum".into());
    ok &= line(
        grid.min.z >= args.z_floor,
        format!(
            "grid {} over [0,1]x[0,{NLP_Y_MAX}]: {} points, min {:.6} at ({:.3}, {:.3}), floor {}",
            args.grid, grid.points, grid.min.z, grid.min.x, grid.min.y, args.z_floor
        ),
    );
    Ok(ok)
}

#[derive(Debug, Args)]
pub struct HardnessArgs {
    /// Weight identities are checked for every p up to this.
    #[arg(long, default_value_t = 1000)]
    pub p_max: usize,
    /// Value gap: every p up to this (at most 5).
    #[arg(long, default_value_t = 4)]
    pub gap_p: usize,
    /// Value gap: every block size up to this (at most 4).
    #[arg(long, default_value_t = 3)]
    pub gap_n: usize,
    /// Indistinguishability: every (p, n) with p·n up to this.
    #[arg(long, default_value_t = INDISTINGUISHABILITY_GUARD)]
    pub indist: usize,
    /// Derivative bounds: every p up to this.
    #[arg(long, default_value_t = 10_000)]
    pub deriv_p: usize,
    /// Write the weights table for `--table-p` players as CSV.
    #[arg(long)]
    pub weights_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub table_p: usize,
}

fn weights_table(p: usize) -> Result<String> {
    let w = make_weights(p)?;
    let res = w.product_residuals();
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["j", "delta", "a", "a_suffix", "product_residual"])?;
    for j in 0..p {
        out.write_record([
            (j + 1).to_string(),
            format!("{:.17e}", w.delta()[j]),
            format!("{:.17e}", w.a()[j]),
            format!("{:.17e}", w.suffix()[j]),
            format!("{:.3e}", res[j]),
        ])?;
    }
    Ok(String::from_utf8(out.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?)
}

pub fn hardness(args: HardnessArgs) -> Result<bool> {
    if let Some(path) = &args.weights_csv {
        crate::write_output(Some(path), &weights_table(args.table_p)?)?;
    }
    let mut ok = true;

    let failures: Vec<String> = (1..=args.p_max)
        .into_par_iter()
        .filter_map(|p| match make_weights(p) {
            Ok(w) if w.report().holds() => None,
            Ok(w) => Some(format!("p={p}: {:?}", w.report())),
            Err(e) => Some(format!("p={p}: {e}")),
        })
        .collect();
    ok &= line(failures.is_empty(), format!("weight identities for p = 1..{}", args.p_max));
    failures.iter().take(5).for_each(|f| eprintln!("  {f}"));

    let mut gap_fail = Vec::new();
    let mut gap_count = 0;
    for p in 1..=args.gap_p {
        let w = make_weights(p)?;
        for n in 1..=args.gap_n {
            for hidden in hidden_choices(p, n) {
                let r = value_gap_check(&HardnessInstance::new(w.clone(), n, hidden)?, p)?;
                gap_count += 1;
                if !r.holds() {
                    gap_fail.push(format!("{r:?}"));
                }
            }
        }
    }
    ok &= line(gap_fail.is_empty(), format!("value gap on {gap_count} instances (p ≤ {}, n ≤ {})", args.gap_p, args.gap_n));
    gap_fail.iter().take(5).for_each(|f| eprintln!("  {f}"));

    let cases: Vec<(usize, usize, usize)> = (1..=args.indist)
        .flat_map(|p| (1..=args.indist / p).flat_map(move |n| (1..=p).map(move |ell| (p, n, ell))))
        .collect();
    let worst = cases
        .par_iter()
        .map(|&(p, n, ell)| indistinguishability_check(p, n, ell).map(|r| r.max_difference))
        .collect::<maxcard_core::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    ok &= line(
        worst <= 1e-12,
        format!("indistinguishability over {} (p, n, ell) cases, max difference {worst:.1e}", cases.len()),
    );

    let deriv_fail: Vec<String> = (1..=args.deriv_p)
        .into_par_iter()
        .filter_map(|p| match derivative_bounds_check(p) {
            Ok(b) => b.iter().find(|b| !b.holds()).map(|b| format!("p={p}: {b:?}")),
            Err(e) => Some(format!("p={p}: {e}")),
        })
        .collect();
    ok &= line(deriv_fail.is_empty(), format!("derivative bounds for p = 1..{}", args.deriv_p));
    deriv_fail.iter().take(5).for_each(|f| eprintln!("  {f}"));
    Ok(ok)
}
