//! Three equal-size upsets on five points whose exactly-one class beats
//! the independent value `3/8`.

use upcube::constructions::q5_triple;
use upcube::rational::fmt_ratio;
use upcube::setcube::{occupancy, write_upset};
use upcube::Bias;

fn main() -> upcube::Result<()> {
    let t = q5_triple();
    for (name, f) in ["X", "Y", "Z"].iter().zip(t.families()) {
        println!("{name}: {} members, generators:", f.count());
        print!("{}", write_upset(f)?);
    }
    let prof = occupancy(&t.x, &t.y, &t.z, &Bias::uniform())?;
    println!("occupancy counts {:?}", prof.counts);
    println!("s1 = {} (independent value 3/8)", fmt_ratio(prof.s1()));
    Ok(())
}
