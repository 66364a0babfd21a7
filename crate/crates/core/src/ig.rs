//! Inverse Gaussian first-hitting-time law of a drifted Brownian particle.
//!
//! The travel time from transmitter to receiver in a 1-D diffusion channel
//! with positive drift follows `IG(mu, lambda)` with `mu = d / v` and
//! `lambda = d^2 / (2 D)`, where the diffusion coefficient comes from the
//! Stokes-Einstein relation `D = k_B T / (6 pi eta r)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Boltzmann constant (CODATA 2018, exact), J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Physical constants of the diffusion channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    /// Absolute temperature, K.
    pub temperature_kelvin: f64,
    /// Dynamic viscosity of the medium, Pa·s.
    pub viscosity: f64,
    /// Hydrodynamic radius of the information molecule, m.
    pub molecule_radius: f64,
    /// Transmitter to receiver distance, m.
    pub distance: f64,
    /// Drift velocity towards the receiver, m/s.
    pub drift_velocity: f64,
}

impl Default for PhysicalConfig {
    /// Water at 298 K, 10 nm molecules, 10 µm link, 10 µm/s drift.
    fn default() -> Self {
        Self {
            temperature_kelvin: 298.0,
            viscosity: 0.894e-3,
            molecule_radius: 10e-9,
            distance: 10e-6,
            drift_velocity: 10e-6,
        }
    }
}

impl PhysicalConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("temperature_kelvin", self.temperature_kelvin),
            ("viscosity", self.viscosity),
            ("molecule_radius", self.molecule_radius),
            ("distance", self.distance),
            ("drift_velocity", self.drift_velocity),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::validation(name, format!("must be positive and finite, got {value}")));
            }
        }
        Ok(())
    }

    /// Stokes-Einstein diffusion coefficient, m²/s.
    pub fn diffusion_coefficient(&self) -> f64 {
        BOLTZMANN * self.temperature_kelvin / (6.0 * PI * self.viscosity * self.molecule_radius)
    }
}

/// Derives the travel-time law and the diffusion coefficient from physical constants.
pub fn derive_params(cfg: &PhysicalConfig) -> Result<(IgParams, f64)> {
    cfg.validate()?;
    let diffusion = cfg.diffusion_coefficient();
    let mu = cfg.distance / cfg.drift_velocity;
    let lambda = cfg.distance * cfg.distance / (2.0 * diffusion);
    Ok((IgParams::new(mu, lambda)?, diffusion))
}

/// Parameters of an inverse Gaussian distribution: mean `mu` and shape `lambda` (both in seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgParams {
    mu: f64,
    lambda: f64,
}

impl IgParams {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::validation("mu", format!("must be positive, got {mu}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::validation("lambda", format!("must be positive, got {lambda}")));
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn variance(&self) -> f64 {
        self.mu.powi(3) / self.lambda
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.ln_pdf(t).exp()
    }

    /// Natural log of the density; `-inf` outside the support.
    pub fn ln_pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (mu, lambda) = (self.mu, self.lambda);
        0.5 * (lambda / (2.0 * PI)).ln() - 1.5 * t.ln() - lambda * (t - mu).powi(2) / (2.0 * mu * mu * t)
    }

    /// Arguments `(a, b)` of the two normal cdf terms at time `t > 0`.
    fn cdf_arguments(&self, t: f64) -> (f64, f64) {
        let s = (self.lambda / t).sqrt();
        (s * (t / self.mu - 1.0), s * (t / self.mu + 1.0))
    }

    /// `ln( exp(2 lambda / mu) * Phi(-b) )`, kept in log space so that large
    /// `lambda / mu` cannot overflow.
    fn ln_reflected_term(&self, b: f64) -> f64 {
        2.0 * self.lambda / self.mu + ln_std_normal_cdf(-b)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (a, b) = self.cdf_arguments(t);
        (std_normal_cdf(a) + self.ln_reflected_term(b).exp()).clamp(0.0, 1.0)
    }

    /// Natural log of the cdf, accurate deep in the left tail.
    pub fn ln_cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (a, b) = self.cdf_arguments(t);
        log_add_exp(ln_std_normal_cdf(a), self.ln_reflected_term(b)).min(0.0)
    }

    /// Survival function `1 - F(t)`, computed without cancellation in the right tail.
    pub fn sf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        self.ln_sf(t).exp()
    }

    pub fn ln_sf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (a, b) = self.cdf_arguments(t);
        let upper = std_normal_cdf(a);
        let reflected = self.ln_reflected_term(b).exp();
        let cdf = upper + reflected;
        if cdf < 0.5 {
            return (-cdf).ln_1p();
        }
        // 1 - F = Phi(-a) - exp(2 lambda / mu) Phi(-b); both terms are small here.
        let ln_first = ln_std_normal_cdf(-a);
        let ln_second = self.ln_reflected_term(b);
        if ln_second >= ln_first {
            return f64::NEG_INFINITY;
        }
        ln_first + (-(ln_second - ln_first).exp()).ln_1p()
    }

    /// Smallest `t` (to relative precision ~1e-13) with `sf(t) <= tail`.
    pub fn upper_quantile(&self, tail: f64) -> Result<f64> {
        if !(tail > 0.0 && tail < 1.0) {
            return Err(Error::validation("tail", format!("must lie in (0, 1), got {tail}")));
        }
        let ln_tail = tail.ln();
        let mut lo = 0.0;
        let mut hi = self.mu;
        let mut expansions = 0;
        while self.ln_sf(hi) > ln_tail {
            lo = hi;
            hi *= 2.0;
            expansions += 1;
            if expansions > 200 {
                return Err(Error::Numerical(format!("quantile bracket for tail {tail:e} did not close")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.ln_sf(mid) > ln_tail {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * hi {
                break;
            }
        }
        Ok(hi)
    }

    /// Draws one travel time with the Michael-Schucany-Haas transformation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (mu, lambda) = (self.mu, self.lambda);
        let nu: f64 = StandardNormal.sample(rng);
        let y = nu * nu;
        let my = mu * y;
        // Larger root of the quadratic; the smaller root mu^2 / big avoids cancellation.
        let big = mu + mu * my / (2.0 * lambda) + mu / (2.0 * lambda) * (4.0 * lambda * my + my * my).sqrt();
        let small = mu * mu / big;
        let u: f64 = rng.random();
        let x = if u * (mu + small) <= mu { small } else { big };
        x.max(f64::MIN_POSITIVE)
    }
}

impl Distribution<f64> for IgParams {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        IgParams::sample(self, rng)
    }
}

/// Standard normal cdf `(1 + erf(z / sqrt 2)) / 2`.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Natural log of the standard normal cdf over the whole real line.
pub fn ln_std_normal_cdf(z: f64) -> f64 {
    if z > 0.0 {
        return (-0.5 * libm::erfc(z * FRAC_1_SQRT_2)).ln_1p();
    }
    if z > -30.0 {
        return (0.5 * libm::erfc(-z / SQRT_2)).ln();
    }
    // Asymptotic tail: Phi(z) ~ phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...).
    let z2 = z * z;
    let mut term = 1.0;
    let mut series = 1.0;
    for k in 1..12 {
        term *= -((2 * k - 1) as f64) / z2;
        series += term;
    }
    -0.5 * z2 - 0.5 * (2.0 * PI).ln() - (-z).ln() + series.ln()
}

pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table() -> IgParams {
        derive_params(&PhysicalConfig::default()).unwrap().0
    }

    #[test]
    fn table_parameters() {
        let (ig, d) = derive_params(&PhysicalConfig::default()).unwrap();
        assert!((d / 2.44e-11 - 1.0).abs() < 5e-3, "D = {d:e}");
        assert!((ig.mu() - 1.0).abs() < 1e-12);
        assert!((ig.lambda() - 2.049).abs() / 2.049 < 1e-3, "lambda = {}", ig.lambda());
    }

    #[test]
    fn doubling_distance_scales_parameters() {
        let cfg = PhysicalConfig::default();
        let (base, _) = derive_params(&cfg).unwrap();
        let (doubled, _) = derive_params(&PhysicalConfig { distance: 2.0 * cfg.distance, ..cfg }).unwrap();
        assert!((doubled.mu() / base.mu() - 2.0).abs() < 1e-12);
        assert!((doubled.lambda() / base.lambda() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_fields() {
        let cfg = PhysicalConfig { viscosity: 0.0, ..Default::default() };
        assert!(matches!(derive_params(&cfg), Err(Error::Validation { name: "viscosity", .. })));
        let cfg = PhysicalConfig { drift_velocity: -1e-6, ..Default::default() };
        assert!(derive_params(&cfg).is_err());
        assert!(IgParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn support_is_positive_half_line() {
        let ig = table();
        assert_eq!(ig.pdf(-1.0), 0.0);
        assert_eq!(ig.pdf(0.0), 0.0);
        assert_eq!(ig.cdf(0.0), 0.0);
        assert_eq!(ig.cdf(-3.0), 0.0);
        assert!((ig.cdf(1e6) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.959963985) - 0.975).abs() < 1e-9);
        for z in [-7.5, -2.0, -0.3, 0.1, 1.7, 6.0] {
            assert!((std_normal_cdf(z) + std_normal_cdf(-z) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn log_normal_cdf_is_continuous_across_branches() {
        let left = ln_std_normal_cdf(-30.0 - 1e-9);
        let right = ln_std_normal_cdf(-30.0 + 1e-9);
        assert!((left - right).abs() < 1e-8 * left.abs(), "{left} vs {right}");
        assert!(ln_std_normal_cdf(-1e3).is_finite());
        assert!((ln_std_normal_cdf(-1.0) - std_normal_cdf(-1.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn huge_shape_ratio_does_not_overflow() {
        // 2 lambda / mu far beyond the f64 exponent range.
        let ig = IgParams::new(1.0, 5_000.0).unwrap();
        for t in [0.9, 1.0, 1.1, 2.0] {
            let f = ig.cdf(t);
            assert!(f.is_finite() && (0.0..=1.0).contains(&f), "F({t}) = {f}");
        }
        assert!((ig.cdf(1.0) - 0.5).abs() < 0.01);
    }

    #[test]
    fn survival_matches_complement() {
        let ig = table();
        for t in [0.2, 0.7, 1.0, 1.5, 3.0] {
            assert!((ig.sf(t) + ig.cdf(t) - 1.0).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn upper_quantile_brackets_tail() {
        let ig = table();
        let q = ig.upper_quantile(1e-13).unwrap();
        assert!(ig.sf(q) <= 1e-13 * (1.0 + 1e-9));
        assert!(ig.sf(q * (1.0 - 1e-9)) > 1e-13 * (1.0 - 1e-6));
    }

    #[test]
    fn fixed_seed_reproduces_draws() {
        let ig = table();
        let a: Vec<f64> = (0..50).map({
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            move |_| ig.sample(&mut rng)
        }).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b: Vec<f64> = (0..50).map(|_| ig.sample(&mut rng)).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|&t| t > 0.0));
    }
}
