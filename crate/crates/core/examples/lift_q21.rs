//! Lifts the seven-point threshold triple to 21 points under the uniform
//! measure and tops `Z` up to equal size.

use std::time::Instant;

use upcube::lift::build_q21;
use upcube::rational::{fmt_ratio, to_decimal};

fn main() -> upcube::Result<()> {
    let start = Instant::now();
    let (t, report) = build_q21()?;
    println!("built in {:?}", start.elapsed());
    println!("sizes {:?}", t.counts());
    println!("pool {}, deficit {}", report.pool_size, report.deficit);
    println!(
        "s1 = {}/2^21 = {} ({})",
        report.s1_count(),
        fmt_ratio(report.s1_density()),
        to_decimal(report.s1_density(), 10)
    );
    println!("above 4/9: {}", report.exceeds_four_ninths());
    Ok(())
}
