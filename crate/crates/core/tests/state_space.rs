//! Frequency-domain filtering against direct time integration of the
//! equivalent ODE in controllable canonical form.

use ngd_core::filtering;
use ngd_core::pulses::{self, PulseSpec};
use ngd_core::{Cascade, Signal, TransferFunction};

/// `x' = A x + B u`, `y = C x + D u` with `A` in companion form.
struct StateSpace {
    /// Monic denominator coefficients `d_0 .. d_{n-1}`.
    den: Vec<f64>,
    c: Vec<f64>,
    d: f64,
}

impl StateSpace {
    fn from_tf(tf: &TransferFunction) -> Self {
        let den = tf.denominator();
        let n = den.len() - 1;
        let lead = den[n];
        let mut num: Vec<f64> = tf.numerator().iter().map(|c| c / lead).collect();
        let den: Vec<f64> = den.iter().map(|c| c / lead).collect();
        num.resize(n + 1, 0.0);
        // Split off the direct feedthrough so the remainder is strictly proper.
        let d = num[n];
        let c: Vec<f64> = (0..n).map(|k| num[k] - d * den[k]).collect();
        StateSpace {
            den: den[..n].to_vec(),
            c,
            d,
        }
    }

    fn deriv(&self, x: &[f64], u: f64, out: &mut [f64]) {
        let n = x.len();
        out[..n - 1].copy_from_slice(&x[1..]);
        out[n - 1] = u - self.den.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }

    fn output(&self, x: &[f64], u: f64) -> f64 {
        self.c.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.d * u
    }

    /// Classical RK4 with `substeps` steps per sample interval.
    fn simulate(&self, input: &Signal, substeps: usize) -> Vec<f64> {
        let n = self.den.len();
        let h = input.dt() / substeps as f64;
        let mut x = vec![0.0; n];
        let (mut k1, mut k2, mut k3, mut k4) =
            (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        let mut y = Vec::with_capacity(input.len());
        y.push(self.output(&x, input.samples()[0]));
        for k in 1..input.len() {
            for j in 0..substeps {
                let pos = (k - 1) as f64 + j as f64 / substeps as f64;
                let step = 1.0 / substeps as f64;
                let u0 = catmull_rom(input.samples(), pos);
                let um = catmull_rom(input.samples(), pos + 0.5 * step);
                let u1 = catmull_rom(input.samples(), pos + step);
                self.deriv(&x, u0, &mut k1);
                for i in 0..n {
                    tmp[i] = x[i] + 0.5 * h * k1[i];
                }
                self.deriv(&tmp, um, &mut k2);
                for i in 0..n {
                    tmp[i] = x[i] + 0.5 * h * k2[i];
                }
                self.deriv(&tmp, um, &mut k3);
                for i in 0..n {
                    tmp[i] = x[i] + h * k3[i];
                }
                self.deriv(&tmp, u1, &mut k4);
                for i in 0..n {
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
            y.push(self.output(&x, input.samples()[k]));
        }
        y
    }
}

/// Cubic Catmull-Rom interpolation at fractional index `pos`.
fn catmull_rom(s: &[f64], pos: f64) -> f64 {
    let i = pos.floor() as isize;
    let f = pos - i as f64;
    let at = |k: isize| s[k.clamp(0, s.len() as isize - 1) as usize];
    let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
    0.5 * (2.0 * p1
        + (-p0 + p2) * f
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * f * f
        + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * f * f * f)
}

fn relative_rms(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// The bench pulse: 1.5 s rectangle through two 2nd-order Bessel filters
/// with cutoff 0.35/T, T = 0.22 s.
fn bench_pulse() -> Signal {
    let t_l = 0.22 / 0.35;
    let tw = 1.5;
    let raw = pulses::sample(&PulseSpec::rectangular(tw, 0.0), tw / 200.0, -3.0, 20.0).unwrap();
    let b2 = TransferFunction::bessel(2, t_l).unwrap();
    filtering::apply(&Cascade::repeat(&b2, 2), &raw).unwrap()
}

fn check(tf: &TransferFunction, input: &Signal) -> f64 {
    let fd = filtering::apply(tf, input).unwrap();
    let td = StateSpace::from_tf(tf).simulate(input, 10);
    let err = relative_rms(fd.samples(), &td);
    err
}

#[test]
fn bessel2_matches_integration() {
    let tf = TransferFunction::bessel(2, 0.22 / 0.35).unwrap();
    let err = check(&tf, &bench_pulse());
    assert!(err < 1e-4, "relative rms {err:e}");
}

#[test]
fn bessel10_matches_integration() {
    let tf = TransferFunction::bessel(10, 0.22 / 0.35).unwrap();
    let err = check(&tf, &bench_pulse());
    assert!(err < 1e-4, "relative rms {err:e}");
}

#[test]
fn lowpass_matches_integration() {
    let tf = TransferFunction::lowpass(0.22).unwrap();
    let err = check(&tf, &bench_pulse());
    assert!(err < 1e-4, "relative rms {err:e}");
}

#[test]
fn practical_ngd_matches_integration() {
    let tf = TransferFunction::ngd_practical(0.22, 0.1, 0.01).unwrap();
    let err = check(&tf, &bench_pulse());
    assert!(err < 1e-4, "relative rms {err:e}");
}

#[test]
fn oracle_sanity_first_order_ramp() {
    // y' = (t^2 - y)/T from rest: y = t^2 - 2Tt + 2T^2 (1 - exp(-t/T)).
    // The first interval sees a clamped neighbour, hence the loose bound.
    let t_c = 0.5;
    let tf = TransferFunction::lowpass(t_c).unwrap();
    let u = Signal::from_fn(301, 0.01, 0.0, |t| t * t).unwrap();
    let y = StateSpace::from_tf(&tf).simulate(&u, 10);
    for k in [20, 50, 200] {
        let t = k as f64 * 0.01;
        let exact = t * t - 2.0 * t_c * t + 2.0 * t_c * t_c * (1.0 - (-t / t_c).exp());
        assert!((y[k] - exact).abs() < 1e-6, "k={k}");
    }
}

#[test]
fn ideal_ngd_matches_central_difference() {
    // The improper element has no state-space form; compare with u + T u'.
    let u = bench_pulse();
    let t = 0.22;
    let y = filtering::apply(&TransferFunction::ngd_ideal(t).unwrap(), &u).unwrap();
    let s = u.samples();
    let dt = u.dt();
    let expect: Vec<f64> = (1..s.len() - 1)
        .map(|k| s[k] + t * (s[k + 1] - s[k - 1]) / (2.0 * dt))
        .collect();
    let err = relative_rms(&y.samples()[1..s.len() - 1], &expect);
    assert!(err < 1e-4, "relative rms {err:e}");
}
