//! Reading, closing and writing `.upset` files.

use upcube::setcube::{parse_upset, read_upset_file, write_upset, write_upset_file};
use upcube::{Bias, Family};

fn main() -> upcube::Result<()> {
    let f = parse_upset("n=6\n1,2\n3\n\n2,4,6\n")?;
    println!("{} members, closed {}", f.count(), f.is_upward_closed());
    print!("{}", write_upset(&f)?);

    let path = std::env::temp_dir().join("upcube-example.upset");
    write_upset_file(&f, &path)?;
    let back = read_upset_file(&path)?;
    assert_eq!(back, f);

    let third = "1/3".parse::<Bias>()?;
    println!(
        "measure at 1/3: {}",
        upcube::setcube::measure(&back, &third)
    );
    let down: Family = back.complement();
    println!("complement is a downset: {}", down.is_downward_closed());
    std::fs::remove_file(path).ok();
    Ok(())
}
