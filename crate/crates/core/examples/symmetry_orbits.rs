//! Orbit classes of pair supports on a ring under translations and
//! reflections.

use eqlearn::lattice::{build_group, orbits, SiteSet};

fn main() -> eqlearn::Result<()> {
    let n = 10;
    let pairs: Vec<SiteSet> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| SiteSet::from([i, j])))
        .collect();
    for reflections in [false, true] {
        let group = build_group(n, reflections)?;
        let classes = orbits(&pairs, &group)?;
        println!("n = {n}, |G| = {}, {} pair classes", group.order(), classes.len());
        for c in &classes {
            println!(
                "  {}  members {:2}  stabilizer {}",
                c.representative,
                c.members.len(),
                c.stabilizer_size
            );
        }
    }
    Ok(())
}
