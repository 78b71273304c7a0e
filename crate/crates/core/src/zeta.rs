//! Hurwitz zeta function ζ(s, q) = Σ_{k≥0} (q + k)^(−s) for s > 1, q > 0,
//! by direct summation up to a shift point and Euler–Maclaurin beyond it.

/// B_{2j} / (2j)! for j = 1..=6.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

pub(crate) fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let shift_to = 12.0f64.max(s);
    let mut sum = 0.0;
    let mut a = q;
    while a < shift_to {
        sum += a.powf(-s);
        a += 1.0;
    }
    let a_pow = a.powf(-s);
    let mut tail = a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // rising factorial s(s+1)...(s+2j-2) times a^(-s-2j+1)
    let inv_a = 1.0 / a;
    let mut rising = s;
    let mut power = a_pow * inv_a;
    for (j, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coef * rising * power;
        tail += term;
        let k = 2.0 * j as f64 + 1.0;
        rising *= (s + k) * (s + k + 1.0);
        power *= inv_a * inv_a;
    }
    sum + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_values() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - z2).abs() < 1e-13);
        let z4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((hurwitz_zeta(4.0, 1.0) - z4).abs() < 1e-13);
        // ζ(3) (Apéry's constant)
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594_3).abs() < 1e-13);
    }

    #[test]
    fn shift_identity_and_brute_force() {
        for &(s, q) in &[(1.5, 3.0), (2.5, 5.0), (3.7, 40.0), (25.0, 17.0)] {
            let lhs = hurwitz_zeta(s, q);
            let rhs = hurwitz_zeta(s, q + 1.0) + q.powf(-s);
            assert!(((lhs - rhs) / lhs).abs() < 1e-12, "s={s} q={q}");
        }
        // brute force partial sum plus integral tail for a quickly decaying case
        let (s, q) = (6.0, 2.0);
        let mut brute: f64 = (0..200_000).map(|k| (q + k as f64).powf(-s)).sum();
        brute += (q + 200_000.0 - 0.5).powf(1.0 - s) / (s - 1.0);
        assert!(((hurwitz_zeta(s, q) - brute) / brute).abs() < 1e-12);
    }
}
