//! Visible count as an alternating sum over occlusion subsets, against the direct count.

use quasigap::geometry::make_octagon_ab;
use quasigap::quasicrystal::{count_inclusion_exclusion, count_visible, gamma0, FamilySpec, OcclusionSet};

fn main() -> quasigap::error::Result<()> {
    let t: f64 = std::env::args().nth(1).map_or(100.0, |s| s.parse().expect("radius"));
    for (spec, c) in [
        (FamilySpec::a(make_octagon_ab())?, OcclusionSet::for_a()),
        (FamilySpec::p_gamma(&gamma0())?, OcclusionSet::for_p()),
    ] {
        let ie = count_inclusion_exclusion(&spec, t, &c)?;
        let direct = count_visible(&spec, &[t])?.visible[0];
        println!("{}: alternating sum {} over {} subsets, direct {}", spec.label, ie.count, ie.nonempty_terms, direct);
        for (f, n) in ie.terms.iter().take(6) {
            println!("  {{{}}}: {n}", f.join(", "));
        }
    }
    Ok(())
}
