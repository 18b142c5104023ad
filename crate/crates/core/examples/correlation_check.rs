//! Random pairs of upsets never correlate negatively.

use upcube::harness::{hk_random, HkRandomConfig};
use upcube::rational::fmt_ratio;
use upcube::Bias;

fn main() -> upcube::Result<()> {
    for (n, p) in [(6, "1/2"), (8, "3/8"), (10, "2/7")] {
        let report = hk_random(&HkRandomConfig {
            n,
            trials: 500,
            seed: 11,
            p: p.parse::<Bias>()?,
            force_equal: false,
        })?;
        println!(
            "n={n} p={p}: min defect {} over {} pairs, negative {}",
            fmt_ratio(&report.min_defect),
            report.trials,
            report.negative
        );
    }
    Ok(())
}
