//! Visible lattice points of Z² and Z³ against 1/ζ(d), and the Z² gap law.

use quasigap::density::{zd_counts, zd_visible};
use quasigap::gaps::{z2_limit_density, z2_limit_mass};

fn main() -> quasigap::error::Result<()> {
    for (d, t) in [(2, 500.0), (2, 2000.0), (3, 100.0)] {
        let (tot, vis) = zd_counts(d, t)?;
        let (f, lim) = zd_visible(d, t)?;
        println!("d={d} T={t}: {vis}/{tot} visible, fraction {f:.6}, limit {lim:.6}");
    }
    let pi2 = std::f64::consts::PI.powi(2);
    for s in [0.2, 3.0 / pi2, 0.5, 12.0 / pi2, 2.0, 5.0] {
        println!("density at s={s:.4}: {:.6}", z2_limit_density(s));
    }
    println!("mass on [0, 200]: {:.8}", z2_limit_mass(200.0));
    Ok(())
}
