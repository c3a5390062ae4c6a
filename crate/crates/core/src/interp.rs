//! Band-limited interpolation with a Blackman-windowed sinc kernel.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::signal::Signal;

/// Kernel half-width in samples.
pub const HALF_WIDTH: usize = 8;

/// Offsets closer than this (in samples) to an integer are treated as exact.
const INTEGER_TOL: f64 = 1e-9;

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        libm::sin(PI * x) / (PI * x)
    }
}

fn kernel(x: f64) -> f64 {
    let h = HALF_WIDTH as f64;
    if x.abs() >= h {
        0.0
    } else {
        let c = PI * x / h;
        sinc(x) * (0.42 + 0.5 * libm::cos(c) + 0.08 * libm::cos(2.0 * c))
    }
}

/// Value at fractional sample position `pos` (in units of samples from
/// index 0). Samples outside the buffer count as zero. Weights are
/// normalized to sum to one so constants are reproduced exactly.
pub fn value_at_index(samples: &[f64], pos: f64) -> f64 {
    let base = libm::floor(pos);
    let frac = pos - base;
    if frac < INTEGER_TOL || 1.0 - frac < INTEGER_TOL {
        let k = libm::round(pos);
        return if k >= 0.0 && (k as usize) < samples.len() {
            samples[k as usize]
        } else {
            0.0
        };
    }
    let base = base as isize;
    let h = HALF_WIDTH as isize;
    let mut acc = 0.0;
    let mut norm = 0.0;
    for j in (base - h + 1)..=(base + h) {
        let w = kernel(pos - j as f64);
        norm += w;
        if j >= 0 && (j as usize) < samples.len() {
            acc += w * samples[j as usize];
        }
    }
    acc / norm
}

/// Value of `sig` at time `t`.
pub fn value_at(sig: &Signal, t: f64) -> f64 {
    value_at_index(sig.samples(), (t - sig.t0()) / sig.dt())
}

/// `sig(t - delay)` sampled on the grid of `sig`.
pub fn delayed(sig: &Signal, delay: f64) -> Vec<f64> {
    let shift = delay / sig.dt();
    (0..sig.len())
        .map(|k| value_at_index(sig.samples(), k as f64 - shift))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn integer_positions_are_exact() {
        let s = [1.0, 2.0, 3.0];
        assert_eq!(value_at_index(&s, 1.0), 2.0);
        assert_eq!(value_at_index(&s, 1.0 + 1e-12), 2.0);
        assert_eq!(value_at_index(&s, 5.0), 0.0);
        assert_eq!(value_at_index(&s, -1.0), 0.0);
    }

    #[test]
    fn constants_are_reproduced() {
        let s = vec![0.7; 64];
        for pos in [20.25, 31.5, 40.9] {
            assert!((value_at_index(&s, pos) - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn smooth_signal_interpolates_accurately() {
        let dt = 0.01;
        let sig = Signal::from_fn(2001, dt, -10.0, |t| libm::exp(-0.5 * t * t)).unwrap();
        for t in [-1.2345, 0.0017, 0.5555, 2.10101] {
            let exact = libm::exp(-0.5 * t * t);
            assert!((value_at(&sig, t) - exact).abs() < 1e-6, "t={t}");
        }
    }
}
