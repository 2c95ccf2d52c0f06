//! The standard windows: exact areas, the star condition and triangle functionals.

use quasigap::cyclo::TowerReal;
use quasigap::geometry::{
    make_decagon_t, make_octagon_ab, make_octagon_w_prime, make_pentagon_w1, star_check, sup_triangle_area,
};
use quasigap::qfield::RingId;

fn main() {
    let sqrt2 = TowerReal::omega(RingId::Zsqrt2);
    let two_tau = TowerReal::from_ints(RingId::Ztau, 0, 2, 0, 0, 1);
    for (w, c) in [
        (make_octagon_ab(), &sqrt2),
        (make_octagon_w_prime(), &sqrt2),
        (make_decagon_t(), &two_tau),
        (make_pentagon_w1(), &two_tau),
    ] {
        println!(
            "{:<16} vertices={:>2} area={:.10} T_W={:.10} star_check={}",
            w.label,
            w.vertices().len(),
            w.area().to_f64(),
            sup_triangle_area(&w, &w).to_f64(),
            star_check(&w, c).passes()
        );
    }
    println!("{}", serde_json::to_string_pretty(&make_octagon_ab().to_json()).expect("json"));
}
