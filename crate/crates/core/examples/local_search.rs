//! Hill climbing over equal-size upset triples on five points; finds a
//! triple matching the hand-built one.

use upcube::rational::{fmt_ratio, ratio};
use upcube::search::{local_search, LocalSearchConfig, ObjectiveKind, SearchObjective};
use upcube::setcube::write_upset;

fn main() -> upcube::Result<()> {
    let objective = SearchObjective::uniform(ObjectiveKind::S1Density);
    let cfg = LocalSearchConfig::new(5, ratio(1, 2), objective, 7, 50_000).with_restarts(8);
    let best = local_search(&cfg)?;
    println!(
        "best s1 {} after {} iterations (restart seed {})",
        fmt_ratio(&best.value),
        best.iterations,
        best.seed
    );
    for f in best.triple.families() {
        print!("{}", write_upset(f)?);
    }
    Ok(())
}
