//! Histogram of normalized gaps with the Z² limiting density alongside.
//!
//! Usage: `gap_histogram [T] [svg path]`.

use quasigap::gaps::{gap_series, histogram, histogram_svg, z2_limit_density};
use quasigap::geometry::make_octagon_ab;
use quasigap::quasicrystal::{generate, FamilySpec};

fn main() -> quasigap::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let t: f64 = args.next().map_or(300.0, |s| s.parse().expect("radius"));
    let svg = args.next();

    let spec = FamilySpec::a(make_octagon_ab())?;
    let mut s = generate(&spec, t)?;
    s.compute_visibility()?;
    let g = gap_series(&s)?;
    let h = histogram(&g, 0.05)?;
    println!("# N_hat={} delta_T={:.6}", g.n_hat, g.delta_t);
    println!("bin_left,mass,z2_density");
    for (i, m) in h.mass.iter().enumerate() {
        let x = h.bin_left(i);
        println!("{x:.3},{m:.6},{:.6}", z2_limit_density(x + h.bin_width / 2.0));
    }
    if let Some(path) = svg {
        let f: &dyn Fn(f64) -> f64 = &z2_limit_density;
        std::fs::write(path, histogram_svg(&h, &format!("octagon gaps, T={t}"), Some(f)))?;
    }
    Ok(())
}
