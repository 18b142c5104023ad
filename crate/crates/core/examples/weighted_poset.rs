//! The five-element poset whose upsets meet the LP optimum, and a
//! correlation scan over all pairs of its upsets.

use upcube::posets::{
    five_point_extremal_triple, five_point_poset, five_point_size_three_upsets, poset_defect,
    poset_hk_scan, poset_occupancy, WeightedPoset,
};
use upcube::rational::fmt_ratio;
use upcube::Bias;

fn main() -> upcube::Result<()> {
    let p = Bias::from_ratio(1, 3)?;
    let poset = five_point_poset(&p)?;
    let weights: Vec<_> = poset.weights().iter().map(fmt_ratio).collect();
    println!("labels {:?} weights {:?}", poset.labels(), weights);

    let [u, v, w] = five_point_extremal_triple(&poset)?;
    let occ = poset_occupancy(&poset, u, v, w)?;
    let dens: Vec<_> = occ.densities.iter().map(fmt_ratio).collect();
    println!("occupancy of {{p_i, A}}: {dens:?}");

    let [a, b, _] = five_point_size_three_upsets(&poset)?;
    println!(
        "defect of two size-three upsets: {}",
        fmt_ratio(&poset_defect(&poset, a, b))
    );

    let scan = poset_hk_scan(&poset)?;
    println!(
        "{} upsets, min defect {}",
        scan.upsets,
        fmt_ratio(&scan.min_defect)
    );

    let chain = WeightedPoset::from_json(
        r#"{"elements": ["x", "y", "z"], "covers": [["x", "y"], ["y", "z"]],
            "weights": ["1/2", "1/4", "1/4"]}"#,
    )?;
    println!("chain of three: {} upsets", poset_hk_scan(&chain)?.upsets);
    Ok(())
}
