//! Smallest normalized gap δ_T over a range of radii, against the limit m.

use quasigap::gaps::{delta_series, min_gap_a, series_csv};
use quasigap::geometry::make_octagon_ab;
use quasigap::quasicrystal::FamilySpec;

fn main() -> quasigap::error::Result<()> {
    let tmax: u32 = std::env::args().nth(1).map_or(400, |s| s.parse().expect("radius"));
    let spec = FamilySpec::a(make_octagon_ab())?;
    let ts: Vec<f64> = (50..=tmax).step_by(25).map(f64::from).collect();
    let ser = delta_series(&spec, &ts)?;
    let m = min_gap_a(spec.window(), None)?.m_hat;
    println!("# m = {m:.6}");
    print!("{}", series_csv(&ser));
    Ok(())
}
