//! Limiting minimal normalized gaps for the octagonal and Penrose sets.

use quasigap::cyclo::TowerReal;
use quasigap::gaps::{min_gap_a, min_gap_p};
use quasigap::geometry::make_octagon_ab;
use quasigap::qfield::RingId;
use quasigap::quasicrystal::{epsilon_from_gamma, gamma0};

fn main() -> quasigap::error::Result<()> {
    let a = min_gap_a(&make_octagon_ab(), None)?;
    println!("octagon:   m = {:.10} (24/π⁴ = {:.10}), exponent {}", a.m_hat, 24.0 / std::f64::consts::PI.powi(4), a.exponent_m);

    let eps = epsilon_from_gamma(&gamma0())?;
    let p = min_gap_p(&eps)?;
    println!(
        "P_eps0:    m = {:.6}, max T = {:.6}, bound = {:.6}, exponent {}",
        p.m_hat, p.t_functional, p.bound, p.exponent_m
    );
    let z = TowerReal::zero(RingId::Ztau);
    let p0 = min_gap_p(&(z.clone(), z))?;
    println!(
        "P_0:       m = {:.6}, max T = {:.6}, bound = {:.6}, exponent {}",
        p0.m_hat, p0.t_functional, p0.bound, p0.exponent_m
    );
    Ok(())
}
