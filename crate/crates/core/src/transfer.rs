//! Rational transfer functions and the elementary NGD building blocks.
//!
//! A [`TransferFunction`] stores numerator and denominator coefficients in
//! ascending powers of `p = i w`. With time constants in seconds and `w` in
//! rad/s every coefficient is dimensionless once multiplied by the matching
//! power of `p`.
//!
//! Long chains (cascades of NGD stages, stacked Bessel filters) are held as
//! a [`Cascade`] of stages and never expanded into a single polynomial:
//! products of many stages overflow the degree cap and lose all precision
//! in their coefficients.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::poly;
use crate::{Error, Result};

/// Highest polynomial degree a single [`TransferFunction`] may carry.
pub const DEGREE_CAP: usize = 12;

/// Highest supported Bessel filter order.
pub const BESSEL_MAX_ORDER: usize = 12;

/// Magnitudes below this count as exact zeros of a polynomial.
const ZERO_GUARD: f64 = 1e-300;

/// Anything with a frequency response: single transfer functions and chains.
pub trait Response {
    /// Complex response at angular frequency `omega` (rad/s).
    fn response(&self, omega: f64) -> Result<Complex64>;

    /// Group delay `-d(arg H)/d omega` in seconds, computed analytically.
    fn group_delay(&self, omega: f64) -> Result<f64>;

    fn stability(&self) -> Result<StabilityReport>;

    fn amplitude(&self, omega: f64) -> Result<f64> {
        self.response(omega).map(|h| h.norm())
    }

    fn phase(&self, omega: f64) -> Result<f64> {
        self.response(omega).map(|h| h.arg())
    }
}

/// Pole locations in the `p` plane and the resulting stability verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// All poles strictly in the left half `p` plane.
    pub stable: bool,
    pub poles: Vec<Complex64>,
}

impl StabilityReport {
    fn from_poles(poles: Vec<Complex64>) -> Self {
        let stable = poles.iter().all(|z| z.re < 0.0);
        StabilityReport { stable, poles }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Vec<f64>,
    den: Vec<f64>,
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, "must be finite"))
    }
}

fn check_positive(name: &'static str, v: f64, reason: &'static str) -> Result<()> {
    check_finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, reason))
    }
}

impl TransferFunction {
    /// Build from raw coefficients (ascending powers of `p`).
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if num.iter().chain(den.iter()).any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients", "must be finite"));
        }
        let (mut num, mut den) = (num, den);
        poly::trim(&mut num);
        poly::trim(&mut den);
        if den.iter().all(|&c| c == 0.0) {
            return Err(Error::invalid(
                "denominator",
                "must not be identically zero",
            ));
        }
        if poly::degree(&num) > DEGREE_CAP || poly::degree(&den) > DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree: poly::degree(&num).max(poly::degree(&den)),
                cap: DEGREE_CAP,
            });
        }
        Ok(TransferFunction { num, den })
    }

    pub fn identity() -> Self {
        TransferFunction {
            num: vec![1.0],
            den: vec![1.0],
        }
    }

    /// Single-pole lowpass `1/(1 + i w T)`; positive delay `T` at DC.
    pub fn lowpass(t: f64) -> Result<Self> {
        check_positive("T", t, "lowpass requires T > 0 for stability")?;
        Self::new(vec![1.0], vec![1.0, t])
    }

    /// Single-zero NGD element `1 + i w T`; group delay `-T` at DC.
    ///
    /// `T` may take either sign. The function is improper: its gain grows
    /// without bound outside `|w| < 1/T`.
    pub fn ngd_ideal(t: f64) -> Result<Self> {
        check_finite("T", t)?;
        Self::new(vec![1.0, t], vec![1.0])
    }

    /// All-pass `(1 - i w T)/(1 + i w T)`; unit amplitude, delay `2T` at DC.
    pub fn allpass(t: f64) -> Result<Self> {
        check_positive("T", t, "all-pass requires T > 0 for stability")?;
        Self::new(vec![1.0, -t], vec![1.0, t])
    }

    /// Practical NGD circuit `1 + i w T / ((1 + i w a T)(1 + i w b T))`.
    ///
    /// `a = C'/C` and `b = R'/R` bound the gain at `1 + 1/(a + b)`, reached
    /// at `w = 1/(T sqrt(ab))`. With `a = b = 0` this is [`Self::ngd_ideal`]
    /// and [`Self::is_proper`] reports false.
    pub fn ngd_practical(t: f64, a: f64, b: f64) -> Result<Self> {
        check_positive("T", t, "practical NGD circuit requires T > 0")?;
        check_finite("a", a)?;
        check_finite("b", b)?;
        if a < 0.0 {
            return Err(Error::invalid("a", "must be >= 0"));
        }
        if b < 0.0 {
            return Err(Error::invalid("b", "must be >= 0"));
        }
        // den = (1 + a T p)(1 + b T p); num = den + T p
        let den = vec![1.0, (a + b) * t, a * b * t * t];
        let mut num = den.clone();
        num[1] += t;
        Self::new(num, den)
    }

    /// Bessel lowpass `1/y_m(i w alpha_m T_L)` with half-power point at `w = 1/T_L`.
    pub fn bessel(m: usize, t_l: f64) -> Result<Self> {
        if m == 0 || m > BESSEL_MAX_ORDER {
            return Err(Error::invalid("m", "Bessel order must be in 1..=12"));
        }
        check_positive("T_L", t_l, "cutoff time constant must be > 0")?;
        let alpha = bessel_alpha(m)?;
        let scale = alpha * t_l;
        let den = bessel_polynomial(m)
            .iter()
            .enumerate()
            .map(|(k, &c)| c * libm::pow(scale, k as f64))
            .collect();
        Self::new(vec![1.0], den)
    }

    /// `m` identical first-order lowpass sections, `1/(1 + i w alpha_m T_L)^m`,
    /// with `alpha_m = sqrt(2^(1/m) - 1)` pinning the half-power point at `1/T_L`.
    pub fn cascaded_lowpass(m: usize, t_l: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m", "order must be >= 1"));
        }
        if m > DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree: m,
                cap: DEGREE_CAP,
            });
        }
        check_positive("T_L", t_l, "cutoff time constant must be > 0")?;
        let alpha = cascaded_lowpass_alpha(m);
        Self::new(vec![1.0], poly::binomial_power(1.0, alpha * t_l, m))
    }

    pub fn numerator(&self) -> &[f64] {
        &self.num
    }

    pub fn denominator(&self) -> &[f64] {
        &self.den
    }

    /// Numerator degree does not exceed denominator degree.
    pub fn is_proper(&self) -> bool {
        poly::degree(&self.num) <= poly::degree(&self.den)
    }

    pub fn dc_gain(&self) -> Result<f64> {
        if self.den[0] == 0.0 {
            return Err(Error::PoleEvaluation { omega: 0.0 });
        }
        Ok(self.num[0] / self.den[0])
    }

    /// Product of two transfer functions, as a single rational function.
    pub fn compose(&self, other: &TransferFunction) -> Result<Self> {
        let num = poly::mul(&self.num, &other.num);
        let den = poly::mul(&self.den, &other.den);
        if num.iter().chain(den.iter()).any(|c| !c.is_finite()) {
            return Err(Error::CoefficientOverflow);
        }
        Self::new(num, den)
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if !omega.is_finite() {
            return Err(Error::invalid("omega", "must be finite"));
        }
        let p = Complex64::new(0.0, omega);
        let d = poly::eval(&self.den, p);
        if d.norm() < ZERO_GUARD {
            return Err(Error::PoleEvaluation { omega });
        }
        Ok(poly::eval(&self.num, p) / d)
    }
}

impl Response for TransferFunction {
    fn response(&self, omega: f64) -> Result<Complex64> {
        self.eval(omega)
    }

    fn group_delay(&self, omega: f64) -> Result<f64> {
        // d/dw arg P(iw) = Re(P'(iw)/P(iw)), so t_d = Re(D'/D) - Re(N'/N).
        let p = Complex64::new(0.0, omega);
        let n = poly::eval(&self.num, p);
        let d = poly::eval(&self.den, p);
        if d.norm() < ZERO_GUARD {
            return Err(Error::PoleEvaluation { omega });
        }
        if n.norm() < ZERO_GUARD {
            return Err(Error::UndefinedPhase { omega });
        }
        let dn = poly::eval(&poly::derivative(&self.num), p);
        let dd = poly::eval(&poly::derivative(&self.den), p);
        Ok((dd / d).re - (dn / n).re)
    }

    fn stability(&self) -> Result<StabilityReport> {
        poly::roots(&self.den).map(StabilityReport::from_poles)
    }
}

/// A series connection of transfer functions, evaluated stage by stage.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cascade {
    stages: Vec<TransferFunction>,
}

impl Cascade {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_stages(stages: Vec<TransferFunction>) -> Self {
        Cascade { stages }
    }

    /// `n` copies of the same stage.
    pub fn repeat(stage: &TransferFunction, n: usize) -> Self {
        Cascade {
            stages: vec![stage.clone(); n],
        }
    }

    pub fn then(mut self, stage: TransferFunction) -> Self {
        self.stages.push(stage);
        self
    }

    pub fn extend(mut self, other: &Cascade) -> Self {
        self.stages.extend(other.stages.iter().cloned());
        self
    }

    pub fn stages(&self) -> &[TransferFunction] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }
}

impl From<TransferFunction> for Cascade {
    fn from(tf: TransferFunction) -> Self {
        Cascade { stages: vec![tf] }
    }
}

impl Response for Cascade {
    fn response(&self, omega: f64) -> Result<Complex64> {
        self.stages
            .iter()
            .try_fold(Complex64::new(1.0, 0.0), |acc, s| Ok(acc * s.eval(omega)?))
    }

    fn group_delay(&self, omega: f64) -> Result<f64> {
        self.stages
            .iter()
            .try_fold(0.0, |acc, s| Ok(acc + s.group_delay(omega)?))
    }

    fn stability(&self) -> Result<StabilityReport> {
        let mut poles = Vec::new();
        for s in &self.stages {
            poles.extend(s.stability()?.poles);
        }
        Ok(StabilityReport::from_poles(poles))
    }
}

/// Normalized reverse Bessel polynomial of order `m`, ascending powers,
/// constant term 1. For `m = 2` this is `1 + x + x^2/3`.
pub fn bessel_polynomial(m: usize) -> Vec<f64> {
    // theta_m(x) = sum_j (2m-j)! / (j! (m-j)! 2^(m-j)) x^j. Build the ratio
    // c_{j+1}/c_j = 2 (m - j) / ((2m - j)(j + 1)) starting from c_0 = 1.
    let mut out = Vec::with_capacity(m + 1);
    let mut c = 1.0;
    out.push(c);
    for j in 0..m {
        c *= 2.0 * (m - j) as f64 / (((2 * m - j) * (j + 1)) as f64);
        out.push(c);
    }
    out
}

/// Frequency scale `alpha_m` giving `|1/y_m(i alpha_m)| = 1/sqrt(2)`.
///
/// Bisection on `(0, 10]`; `|y_m(iu)|^2` is monotone in `u`.
pub fn bessel_alpha(m: usize) -> Result<f64> {
    if m == 0 || m > BESSEL_MAX_ORDER {
        return Err(Error::invalid("m", "Bessel order must be in 1..=12"));
    }
    let y = bessel_polynomial(m);
    let excess = |u: f64| poly::eval(&y, Complex64::new(0.0, u)).norm_sqr() - 2.0;
    let (mut lo, mut hi) = (0.0_f64, 10.0_f64);
    if excess(hi) <= 0.0 {
        return Err(Error::NoConvergence {
            what: "Bessel alpha bracket",
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::NoConvergence {
        what: "Bessel alpha bisection",
    })
}

pub fn cascaded_lowpass_alpha(m: usize) -> f64 {
    libm::sqrt(libm::pow(2.0, 1.0 / m as f64) - 1.0)
}

/// Location and value of the largest amplitude on `[0, omega_max]`.
///
/// A uniform scan over `grid_points` is refined by golden-section search
/// on the bracketing interval.
pub fn peak_amplitude<R: Response + ?Sized>(
    resp: &R,
    omega_max: f64,
    grid_points: usize,
) -> Result<(f64, f64)> {
    if !(omega_max > 0.0) || !omega_max.is_finite() {
        return Err(Error::invalid("omega_max", "must be finite and > 0"));
    }
    if grid_points < 3 {
        return Err(Error::invalid("grid_points", "need at least 3 points"));
    }
    let step = omega_max / (grid_points - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..grid_points {
        let a = resp.amplitude(i as f64 * step)?;
        if a > best.1 {
            best = (i, a);
        }
    }
    let mut lo = best.0.saturating_sub(1) as f64 * step;
    let mut hi = ((best.0 + 1).min(grid_points - 1)) as f64 * step;
    let ratio = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = resp.amplitude(x1)?;
    let mut f2 = resp.amplitude(x2)?;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi.max(1e-300) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = resp.amplitude(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = resp.amplitude(x1)?;
        }
    }
    let (w, a) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    if a >= best.1 {
        Ok((w, a))
    } else {
        Ok((best.0 as f64 * step, best.1))
    }
}
