//! Visible-point counts for the Ammann–Beenker set and its translated-window variant.

use std::time::Instant;

use quasigap::geometry::make_octagon_ab;
use quasigap::quasicrystal::{count_visible, make_octagon_w_prime, FamilySpec, OcclusionSet};

fn main() -> quasigap::error::Result<()> {
    let radii: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("radius"))
        .collect();
    let radii = if radii.is_empty() { vec![250.0, 500.0, 1000.0] } else { radii };

    let t0 = Instant::now();
    let a = count_visible(&FamilySpec::a(make_octagon_ab())?, &radii)?;
    eprintln!("A_W done in {:.1}s", t0.elapsed().as_secs_f64());
    let t0 = Instant::now();
    let w = FamilySpec::a(make_octagon_w_prime())?.with_occlusion(OcclusionSet::w_prime());
    let b = count_visible(&w, &radii)?;
    eprintln!("A_W' done in {:.1}s", t0.elapsed().as_secs_f64());

    println!("T,N_hat,density,N_hat_prime,density_prime");
    for (i, t) in radii.iter().enumerate() {
        let area = std::f64::consts::PI * t * t;
        println!(
            "{t},{},{:.6},{},{:.6}",
            a.visible[i],
            a.visible[i] as f64 / area,
            b.visible[i],
            b.visible[i] as f64 / area
        );
    }
    Ok(())
}
