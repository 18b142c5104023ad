//! Exactly-one measure of the level-threshold triple on seven points as the
//! bias varies, cross-checked against a direct occupancy count.

use upcube::constructions::{
    kahn_triple, q_formula, qcurve, qcurve_csv, uniform_grid, ConstructionParams,
};
use upcube::rational::fmt_ratio;
use upcube::setcube::occupancy;
use upcube::Bias;

fn main() -> upcube::Result<()> {
    let curve = qcurve(7, 3, &uniform_grid(16)?)?;
    print!("{}", qcurve_csv(&curve));

    let p = Bias::from_ratio(1, 3)?;
    let q = q_formula(&ConstructionParams::new(7, 3, p.clone())?)?;
    let t = kahn_triple(7, 3)?;
    let direct = occupancy(&t.x, &t.y, &t.z, &p)?;
    println!(
        "q(1/3) = {}, direct = {}",
        fmt_ratio(&q),
        fmt_ratio(direct.s1())
    );
    Ok(())
}
