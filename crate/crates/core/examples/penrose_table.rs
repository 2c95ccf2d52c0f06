//! Visible-point counts for the rhombic Penrose vertex set with γ = (2, 1, −2, −2, 1)/101.

use std::time::Instant;

use quasigap::quasicrystal::{count_visible, gamma0, FamilySpec};

fn main() -> quasigap::error::Result<()> {
    let radii: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("radius"))
        .collect();
    let radii = if radii.is_empty() { vec![500.0, 1000.0, 1500.0, 2000.0] } else { radii };

    let spec = FamilySpec::p_gamma(&gamma0())?;
    let t0 = Instant::now();
    let c = count_visible(&spec, &radii)?;
    eprintln!("counted in {:.1}s", t0.elapsed().as_secs_f64());

    println!("T,N,N_hat,density");
    for (i, t) in radii.iter().enumerate() {
        let area = std::f64::consts::PI * t * t;
        println!("{t},{},{},{:.6}", c.total[i], c.visible[i], c.visible[i] as f64 / area);
    }
    Ok(())
}
