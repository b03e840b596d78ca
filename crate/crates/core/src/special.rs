//! Exponential integrals for complex argument.

use crate::C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// E₁(z) = ∫₁^∞ e^{−zt}/t dt for z ≠ 0, principal branch.
pub fn exp_integral_e1(z: C64) -> C64 {
    if z.norm() <= 2.0 {
        // −γ − ln z − Σ (−z)^k / (k·k!)
        let mut sum = C64::new(0.0, 0.0);
        let mut term = C64::new(1.0, 0.0);
        for k in 1..200 {
            term = term * (-z) / k as f64;
            let contrib = term / k as f64;
            sum += contrib;
            if contrib.norm() < 1e-17 * sum.norm().max(1e-300) {
                break;
            }
        }
        -C64::new(EULER_GAMMA, 0.0) - z.ln() - sum
    } else {
        // continued fraction, modified Lentz
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = C64::new(1.0 / tiny, 0.0);
        let mut d = C64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = C64::new(1.0, 0.0) / (d * an + b);
            c = b + C64::new(an, 0.0) / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    }
}

/// E₂(z) = ∫₁^∞ e^{−zt}/t² dt = e^{−z} − z·E₁(z).
pub fn exp_integral_e2(z: C64) -> C64 {
    if z.norm() == 0.0 {
        return C64::new(1.0, 0.0);
    }
    (-z).exp() - z * exp_integral_e1(z)
}

/// ∫ₓ^∞ e^{iωτ} τ⁻² dτ for x > 0.
pub fn oscillatory_inverse_square_tail(omega: f64, x: f64) -> C64 {
    exp_integral_e2(C64::new(0.0, -omega * x)) / x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn e1_real_reference_values() {
        // A&S table 5.1
        let e1_1 = exp_integral_e1(C64::new(1.0, 0.0));
        assert!((e1_1.re - 0.219_383_934_395_520_3).abs() < 1e-14);
        let e1_5 = exp_integral_e1(C64::new(5.0, 0.0));
        assert!((e1_5.re - 0.001_148_295_591_275_325_8).abs() < 1e-15);
    }

    #[test]
    fn e1_imaginary_matches_ci_si() {
        // E₁(ix) = −Ci(x) + i(Si(x) − π/2); Ci(3) = 0.119629786..., Si(3) = 1.848652527...
        let v = exp_integral_e1(C64::new(0.0, 3.0));
        assert!((v.re + 0.119_629_786_008_000_3).abs() < 1e-13);
        assert!((v.im - (1.848_652_527_999_468_3 - core::f64::consts::FRAC_PI_2)).abs() < 1e-13);
        let w = exp_integral_e1(C64::new(0.0, 1.5));
        // Ci(1.5) = 0.470356317..., Si(1.5) = 1.324683531...
        assert!((w.re + 0.470_356_317_195_4).abs() < 1e-13);
        assert!((w.im - (1.324_683_531_172_12 - core::f64::consts::FRAC_PI_2)).abs() < 1e-13);
    }

    #[test]
    fn tail_integral_matches_quadrature() {
        for (omega, x) in [(0.0, 5.0), (0.3, 4.0), (-0.7, 3.0)] {
            let got = oscillatory_inverse_square_tail(omega, x);
            let upper = 4000.0;
            let rule = GaussLegendre::new(4000, x, upper);
            let re = rule.integrate(|t| libm::cos(omega * t) / (t * t));
            let im = rule.integrate(|t| libm::sin(omega * t) / (t * t));
            // remainder beyond `upper`: 1/upper without oscillation, ~1/(ω·upper²) with it
            let tol = if omega == 0.0 {
                1.0 / upper + 1e-12
            } else {
                4.0 / (omega.abs() * upper * upper)
            };
            assert!((got.re - re).abs() < tol, "{omega} {x}: {} vs {re}", got.re);
            assert!((got.im - im).abs() < tol);
        }
        assert!((oscillatory_inverse_square_tail(0.0, 4.0).re - 0.25).abs() < 1e-15);
    }
}
