//! Advancement, excess power gain, distortion and composite group velocity.

use alloc::vec::Vec;
use core::fmt;

use crate::interp;
use crate::signal::Signal;
use crate::{Error, Result};

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Samples within this relative distance of the maximum count as the peak plateau.
const PLATEAU_TOL: f64 = 1e-12;

/// Location and value of the global maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub value: f64,
}

/// Global maximum refined by a parabola through the three samples around it.
pub fn peak(sig: &Signal) -> Result<Peak> {
    let s = sig.samples();
    let (imax, vmax) =
        s.iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
    let tol = PLATEAU_TOL * vmax.abs().max(f64::MIN_POSITIVE);
    let on_plateau = |i: usize| (s[i] - vmax).abs() <= tol;
    let first = (0..=imax)
        .rev()
        .take_while(|&i| on_plateau(i))
        .last()
        .unwrap_or(imax);
    let last = (imax..s.len())
        .take_while(|&i| on_plateau(i))
        .last()
        .unwrap_or(imax);
    let width = last - first + 1;
    if width > 3 {
        return Err(Error::AmbiguousPeak { width });
    }
    if first == 0 || last == s.len() - 1 {
        return Err(Error::PeakAtEdge);
    }
    let i = (first + last) / 2;
    let (y0, y1, y2) = (s[i - 1], s[i], s[i + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let (offset, value) = if curvature < 0.0 {
        let d = 0.5 * (y0 - y2) / curvature;
        (d, y1 - 0.25 * (y0 - y2) * d)
    } else {
        (if width == 2 && last != i { 0.5 } else { 0.0 }, vmax)
    };
    Ok(Peak {
        time: sig.time(i) + offset * sig.dt(),
        value,
    })
}

pub fn peak_time(sig: &Signal) -> Result<f64> {
    peak(sig).map(|p| p.time)
}

/// `peak_time(input) - peak_time(output)`; positive when the output leads.
pub fn advancement(input: &Signal, output: &Signal) -> Result<f64> {
    Ok(peak_time(input)? - peak_time(output)?)
}

/// First upward crossing of half the peak value, linearly interpolated.
pub fn half_max_time(sig: &Signal) -> Result<f64> {
    let p = peak(sig)?;
    let level = 0.5 * p.value;
    let s = sig.samples();
    let stop = libm::ceil((p.time - sig.t0()) / sig.dt()) as usize;
    for k in 1..=stop.min(s.len() - 1) {
        if s[k - 1] < level && s[k] >= level {
            let frac = (level - s[k - 1]) / (s[k] - s[k - 1]);
            return Ok(sig.time(k - 1) + frac * sig.dt());
        }
    }
    Err(Error::PeakAtEdge)
}

/// Advancement measured at the rising half-maximum instead of the peak.
pub fn half_max_advancement(input: &Signal, output: &Signal) -> Result<f64> {
    Ok(half_max_time(input)? - half_max_time(output)?)
}

/// `E_out / E_in - 1` with `E = sum v^2 dt`.
pub fn excess_power_gain(input: &Signal, output: &Signal) -> Result<f64> {
    let e_in = input.energy();
    if e_in == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok(output.energy() / e_in - 1.0)
}

/// Pointwise mismatch between the peak-normalized output and the
/// peak-normalized input advanced by the measured advancement, on the
/// output grid.
pub fn residual(input: &Signal, output: &Signal) -> Result<Signal> {
    let pin = peak(input)?;
    let pout = peak(output)?;
    let adv = pin.time - pout.time;
    let samples: Vec<f64> = output
        .times()
        .zip(output.samples())
        .map(|(t, v)| v / pout.value - interp::value_at(input, t + adv) / pin.value)
        .collect();
    output.with_samples(samples)
}

/// RMS of [`residual`] over the RMS of the peak-normalized input.
///
/// Zero for pure delays and gains, and unchanged by a common rescaling or
/// time shift of both signals.
pub fn distortion(input: &Signal, output: &Signal) -> Result<f64> {
    let res = residual(input, output)?;
    let pin = peak(input)?.value;
    let num: f64 = res.samples().iter().map(|r| r * r).sum::<f64>() / res.len() as f64;
    let den: f64 = input
        .samples()
        .iter()
        .map(|v| (v / pin) * (v / pin))
        .sum::<f64>()
        / input.len() as f64;
    if den == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok(libm::sqrt(num / den))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    /// Seconds, positive when the output peak comes first.
    pub advancement: f64,
    /// `advancement / T_w`, when a width was supplied.
    pub relative_advancement: Option<f64>,
    pub eta: f64,
    pub distortion: f64,
    pub peak_in: f64,
    pub peak_out: f64,
    /// Ratio of output to input area.
    pub gain_dc: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "advancement,r,eta,distortion,peak_in,peak_out,gain_dc";

    pub fn measure(input: &Signal, output: &Signal, width: Option<f64>) -> Result<Self> {
        let pin = peak_time(input)?;
        let pout = peak_time(output)?;
        let advancement = pin - pout;
        let area_in: f64 = input.samples().iter().sum();
        let area_out: f64 = output.samples().iter().sum();
        Ok(MetricsReport {
            advancement,
            relative_advancement: width.map(|w| advancement / w),
            eta: excess_power_gain(input, output)?,
            distortion: distortion(input, output)?,
            peak_in: pin,
            peak_out: pout,
            gain_dc: if area_in == 0.0 {
                f64::NAN
            } else {
                area_out / area_in
            },
        })
    }

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self) -> CsvRow<'_> {
        CsvRow(self)
    }
}

pub struct CsvRow<'a>(&'a MetricsReport);

impl fmt::Display for CsvRow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        let r = m.relative_advancement.unwrap_or(f64::NAN);
        write!(
            f,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            m.advancement, r, m.eta, m.distortion, m.peak_in, m.peak_out, m.gain_dc
        )
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "advancement   {:.6} s", self.advancement)?;
        if let Some(r) = self.relative_advancement {
            writeln!(f, "r             {r:.6}")?;
        }
        writeln!(f, "eta           {:.6}", self.eta)?;
        writeln!(f, "distortion    {:.6}", self.distortion)?;
        writeln!(f, "peak_in       {:.6} s", self.peak_in)?;
        writeln!(f, "peak_out      {:.6} s", self.peak_out)?;
        write!(f, "gain_dc       {:.6}", self.gain_dc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityClass {
    Subluminal,
    /// `t_d = 0`, `v_g = c`.
    Luminal,
    Superluminal,
    Negative,
}

impl VelocityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            VelocityClass::Subluminal => "subluminal",
            VelocityClass::Luminal => "luminal",
            VelocityClass::Superluminal => "superluminal",
            VelocityClass::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityReport {
    pub length: f64,
    pub delay: f64,
    pub t_total: f64,
    pub v_g: f64,
    pub class: VelocityClass,
}

/// Group velocity of a vacuum path of length `length` followed by a lumped
/// element with group delay `delay`: `1/v_g = 1/c + t_d/L`.
pub fn composite_velocity(length: f64, delay: f64) -> Result<VelocityReport> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::invalid("L", "path length must be finite and > 0"));
    }
    if !delay.is_finite() {
        return Err(Error::invalid("t_d", "must be finite"));
    }
    let transit = length / SPEED_OF_LIGHT;
    let t_total = transit + delay;
    if t_total.abs() <= 4.0 * f64::EPSILON * transit {
        return Err(Error::SingularVelocity);
    }
    let class = if delay > 0.0 {
        VelocityClass::Subluminal
    } else if delay == 0.0 {
        VelocityClass::Luminal
    } else if t_total > 0.0 {
        VelocityClass::Superluminal
    } else {
        VelocityClass::Negative
    };
    Ok(VelocityReport {
        length,
        delay,
        t_total,
        v_g: length / t_total,
        class,
    })
}

/// `log10(A_max^n)` with `A_max = 1 + 1/(a + b)`, the peak gain of one
/// practical NGD stage.
pub fn max_gain_budget(a: f64, b: f64, stages: usize) -> Result<f64> {
    if !(a + b > 0.0) || a < 0.0 || b < 0.0 || !(a + b).is_finite() {
        return Err(Error::invalid("a+b", "requires a, b >= 0 and a + b > 0"));
    }
    if stages == 0 {
        return Err(Error::invalid("n", "requires at least one stage"));
    }
    Ok(stages as f64 * libm::log10(1.0 + 1.0 / (a + b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gauss_at(center: f64, dt: f64) -> Signal {
        let len = libm::round(10.0 / dt) as usize + 1;
        Signal::from_fn(len, dt, -5.0, |t| {
            libm::exp(-0.5 * (t - center) * (t - center))
        })
        .unwrap()
    }

    #[test]
    fn peak_of_offset_gaussian() {
        let dt = 0.01;
        let g = gauss_at(2.0, dt);
        assert!((peak_time(&g).unwrap() - 2.0).abs() < dt / 10.0);
        let g = gauss_at(2.0037, dt);
        assert!((peak_time(&g).unwrap() - 2.0037).abs() < dt / 10.0);
    }

    #[test]
    fn constant_signal_has_no_peak() {
        let s = Signal::new(vec![1.0; 50], 0.1, 0.0).unwrap();
        assert!(matches!(peak(&s), Err(Error::AmbiguousPeak { .. })));
        let s = Signal::new(vec![3.0, 2.0, 1.0], 0.1, 0.0).unwrap();
        assert_eq!(peak(&s), Err(Error::PeakAtEdge));
    }

    #[test]
    fn identical_signals_have_zero_advancement() {
        let g = gauss_at(0.3, 0.01);
        assert_eq!(advancement(&g, &g).unwrap(), 0.0);
        assert_eq!(excess_power_gain(&g, &g).unwrap(), 0.0);
        assert!(distortion(&g, &g).unwrap() < 1e-14);
    }

    #[test]
    fn delayed_copy_is_undistorted() {
        let dt = 0.01;
        let a = gauss_at(0.0, dt);
        let b = gauss_at(0.37, dt).scaled(2.5);
        assert!((advancement(&a, &b).unwrap() + 0.37).abs() < 1e-3);
        let d = distortion(&a, &b).unwrap();
        assert!(d < 1e-6, "d={d}");
    }

    #[test]
    fn zero_energy_input() {
        let z = Signal::new(vec![0.0; 10], 0.1, 0.0).unwrap();
        let g = gauss_at(0.0, 0.01);
        assert_eq!(excess_power_gain(&z, &g), Err(Error::ZeroEnergy));
    }

    #[test]
    fn half_max_of_gaussian() {
        let g = gauss_at(0.0, 0.001);
        let expect = -libm::sqrt(2.0 * libm::log(2.0));
        assert!((half_max_time(&g).unwrap() - expect).abs() < 1e-6);
    }

    #[test]
    fn velocity_cases() {
        let v = composite_velocity(0.06, -60e-9).unwrap();
        assert_eq!(v.class, VelocityClass::Negative);
        assert!((v.v_g / SPEED_OF_LIGHT + 1.0 / 300.0).abs() < 0.02 / 300.0);

        let v = composite_velocity(0.06, 0.0).unwrap();
        assert_eq!(v.v_g, SPEED_OF_LIGHT);

        let v = composite_velocity(0.06, -0.1e-9).unwrap();
        assert_eq!(v.class, VelocityClass::Superluminal);
        assert!(v.v_g > SPEED_OF_LIGHT);

        let v = composite_velocity(0.06, 60e-9).unwrap();
        assert_eq!(v.class, VelocityClass::Subluminal);
        assert!(v.v_g < SPEED_OF_LIGHT);

        let edge = -0.06 / SPEED_OF_LIGHT;
        assert_eq!(composite_velocity(0.06, edge), Err(Error::SingularVelocity));
        assert!(composite_velocity(0.0, 1.0).is_err());
    }

    #[test]
    fn gain_budget() {
        let v = max_gain_budget(0.2, 0.0, 50).unwrap();
        assert!((v - 50.0 * libm::log10(6.0)).abs() < 1e-12);
        assert!((v - 38.9).abs() < 0.1);
        assert!((max_gain_budget(0.5, 0.5, 1).unwrap() - libm::log10(2.0)).abs() < 1e-15);
        assert!((max_gain_budget(0.1, 0.01, 2).unwrap() - 2.01).abs() < 5e-3);
        assert!(max_gain_budget(0.0, 0.0, 2).is_err());
        assert!(max_gain_budget(0.1, 0.0, 0).is_err());
    }
}
