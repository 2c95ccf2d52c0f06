//! Arithmetic in Z[√2] and Z[τ]: norms, gcds, canonical associates and small primes.

use quasigap::qfield::{canonical_associate, coprime, enum_primes, gcd, reduce_fraction, QuadInt, RingId};

fn main() -> quasigap::error::Result<()> {
    let r = RingId::Zsqrt2;
    let x = QuadInt::new(r, 7, 5);
    let y = QuadInt::new(r, 1, 1);
    println!("x = {x}, N(x) = {}, σ(x) = {}", x.norm(), x.conj());
    println!("gcd({x}, {y}) = {}", gcd(x, y)?);
    println!("coprime: {}", coprime(x, QuadInt::new(r, 3, 0)));
    println!("canonical associate of {x}: {}", canonical_associate(x)?);
    println!("{}", reduce_fraction(QuadInt::new(r, 4, 2), QuadInt::new(r, 0, 2))?);

    for ring in [RingId::Zsqrt2, RingId::Ztau] {
        let ps: Vec<String> = enum_primes(ring, 50).iter().map(|p| format!("{p} (N={})", p.norm())).collect();
        println!("{} primes with norm ≤ 50: {}", ring.name(), ps.join(", "));
    }
    Ok(())
}
