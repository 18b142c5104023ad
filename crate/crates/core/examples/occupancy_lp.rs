//! The occupancy LP at a few densities and the maximum of its value.

use upcube::bounds::{bound_maximizer, independent_value, lp_max_s1};
use upcube::rational::{fmt_ratio, ratio, to_decimal};

fn main() -> upcube::Result<()> {
    for rho in [ratio(1, 4), ratio(1, 3), ratio(3, 8), ratio(1, 2)] {
        let sol = lp_max_s1(&rho)?;
        let profile: Vec<_> = sol.profile.iter().map(fmt_ratio).collect();
        println!(
            "rho {:>4}: max s1 {:>6}  independent {:>6}  profile {:?}  tight {:?}",
            fmt_ratio(&rho),
            fmt_ratio(&sol.objective),
            fmt_ratio(&independent_value(&rho)),
            profile,
            sol.tight
        );
    }
    let max = bound_maximizer(&ratio(1, 1_000_000_000))?;
    println!(
        "argmax ~ {}, max ~ {}, certified {}",
        to_decimal(&max.rho, 12),
        to_decimal(&max.value, 12),
        max.certified()
    );
    Ok(())
}
