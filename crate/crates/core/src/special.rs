//! Hurwitz zeta function for the power-law tails of Matsubara sums.

use crate::error::{invalid, Result};

// B_{2j} / (2j)! for j = 1..=8
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `ζ(s, q) = Σ_{k≥0} (q + k)^{-s}` for `s > 1`, `q > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    if s <= 1.0 || !s.is_finite() {
        return Err(invalid("s", format!("Hurwitz zeta needs s > 1, got {s}")));
    }
    if q <= 0.0 || !q.is_finite() {
        return Err(invalid("q", format!("Hurwitz zeta needs q > 0, got {q}")));
    }
    const HEAD: usize = 12;
    let mut head = 0.0;
    for k in (0..HEAD).rev() {
        head += (q + k as f64).powf(-s);
    }
    let x = q + HEAD as f64;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // Rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}.
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * rising * power;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        power /= x * x;
    }
    Ok(head + tail)
}
