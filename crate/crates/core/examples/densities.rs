//! Closed-form visible densities next to empirical counts.

use quasigap::density::{density_visible, density_visible_a_extended, empirical_from_counts};
use quasigap::geometry::{make_decagon_t, make_octagon_ab};
use quasigap::qfield::{QuadInt, RingId};
use quasigap::quasicrystal::{count_visible, gamma0, make_octagon_w_prime, w_prime_m, FamilySpec, OcclusionSet};

fn main() -> quasigap::error::Result<()> {
    let t: f64 = std::env::args().nth(1).map_or(200.0, |s| s.parse().expect("radius"));
    let specs = [
        FamilySpec::a(make_octagon_ab())?,
        FamilySpec::t(make_decagon_t())?,
        FamilySpec::p_gamma(&gamma0())?,
    ];
    println!("set,theta,theta_hat,fraction,empirical_theta_hat@{t}");
    for spec in &specs {
        let rep = density_visible(spec)?;
        let c = count_visible(spec, &[t])?;
        let e = empirical_from_counts(c.total[0], c.visible[0], t);
        println!(
            "{},{:.6},{:.6},{:.6},{:.6}",
            spec.label, rep.theta_total, rep.theta_visible, rep.relative_visible_fraction, e.theta_visible
        );
    }

    let wp = FamilySpec::a(make_octagon_w_prime())?.with_occlusion(OcclusionSet::w_prime());
    let rep = density_visible_a_extended(wp.window(), &w_prime_m(), &[QuadInt::new(RingId::Zsqrt2, 0, 1)])?;
    let c = count_visible(&wp, &[t])?;
    let e = empirical_from_counts(c.total[0], c.visible[0], t);
    println!(
        "{},{:.6},{:.6},{:.6},{:.6}",
        wp.label, rep.theta_total, rep.theta_visible, rep.relative_visible_fraction, e.theta_visible
    );
    println!("# subset sum over 2^{} subsets: {:.6}", w_prime_m().len(), rep.subset_sum.unwrap_or(f64::NAN));
    Ok(())
}
