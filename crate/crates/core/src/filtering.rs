//! Frequency-domain filtering of sampled signals and NGD cascades.
//!
//! Filters are applied as `v_out = IDFT(H(w) DFT(v_in))` on a zero-padded
//! buffer. This handles improper responses such as `1 + i w T` exactly,
//! which have no state-space realization.
//!
//! Cascades multiply the stage responses onto one input spectrum and
//! invert once per stage. Going back to the time domain between stages
//! would let rounding noise ride on the exploding out-of-band gain of the
//! later stages.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft;
use crate::signal::Signal;
use crate::transfer::{Cascade, Response, TransferFunction};
use crate::{Error, Result};

/// Initial zero-padding factor.
pub const INITIAL_PAD: usize = 4;
/// Padding factor ceiling; doubling stops here.
pub const MAX_PAD: usize = 64;
/// Allowed energy fraction in the final quarter of the padded buffer.
pub const WRAPAROUND_LIMIT: f64 = 1e-8;
/// Stage output peak relative to input peak that aborts a cascade.
pub const AMPLITUDE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ApplyOptions {
    /// Simulate filters with right-half-plane poles instead of rejecting them.
    pub allow_unstable: bool,
}

/// Apply a stable filter to a signal. The output shares the input grid.
pub fn apply<R: Response>(tf: &R, sig: &Signal) -> Result<Signal> {
    apply_with(tf, sig, ApplyOptions::default())
}

pub fn apply_with<R: Response>(tf: &R, sig: &Signal, opts: ApplyOptions) -> Result<Signal> {
    let mut out = progressive(sig, Some(tf as &dyn ResponseObj), &[], opts)?;
    Ok(out.swap_remove(0))
}

/// How the per-stage time constant depends on the stage count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Every stage uses the base `T`.
    Fixed,
    /// Every stage uses `T / sqrt(n)`, holding the out-of-band gain
    /// `(1 + (sqrt(n) w T')^2 / 2)` roughly constant.
    InverseSqrtN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageKind {
    /// `1 + i w T`
    Ideal,
    /// `1 + i w T / ((1 + i w a T)(1 + i w b T))`
    Practical { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadePlan {
    pub stages: usize,
    /// Base time constant `T`, seconds.
    pub base_t: f64,
    pub scaling: Scaling,
    pub kind: StageKind,
}

impl CascadePlan {
    pub fn new(stages: usize, base_t: f64, scaling: Scaling, kind: StageKind) -> Result<Self> {
        let plan = CascadePlan {
            stages,
            base_t,
            scaling,
            kind,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages == 0 {
            return Err(Error::invalid("n", "cascade needs at least one stage"));
        }
        if !(self.base_t > 0.0) || !self.base_t.is_finite() {
            return Err(Error::invalid(
                "T",
                "base time constant must be finite and > 0",
            ));
        }
        Ok(())
    }

    /// Effective per-stage time constant.
    pub fn stage_time_constant(&self) -> f64 {
        match self.scaling {
            Scaling::Fixed => self.base_t,
            Scaling::InverseSqrtN => self.base_t / libm::sqrt(self.stages as f64),
        }
    }

    pub fn stage(&self) -> Result<TransferFunction> {
        let t = self.stage_time_constant();
        match self.kind {
            StageKind::Ideal => TransferFunction::ngd_ideal(t),
            StageKind::Practical { a, b } => TransferFunction::ngd_practical(t, a, b),
        }
    }

    pub fn cascade(&self) -> Result<Cascade> {
        self.validate()?;
        Ok(Cascade::repeat(&self.stage()?, self.stages))
    }
}

/// Run a cascade on an already prepared input.
///
/// Returns `stages + 1` signals: the input followed by each stage output.
pub fn run_cascade(plan: &CascadePlan, sig: &Signal) -> Result<Vec<Signal>> {
    run_cascade_shaped(plan, &Cascade::new(), sig)
}

/// Shape `raw` with `shaping`, then run the cascade, all on one spectrum.
///
/// Element 0 of the result is the shaped input.
pub fn run_cascade_shaped(
    plan: &CascadePlan,
    shaping: &Cascade,
    raw: &Signal,
) -> Result<Vec<Signal>> {
    plan.validate()?;
    let stage = plan.stage()?;
    let stages: Vec<&dyn ResponseObj> = (0..plan.stages)
        .map(|_| &stage as &dyn ResponseObj)
        .collect();
    let head = (!shaping.is_empty()).then_some(shaping as &dyn ResponseObj);
    progressive(raw, head, &stages, ApplyOptions::default())
}

/// Object-safe view of [`Response`] used to mix filter types in one chain.
trait ResponseObj {
    fn at(&self, omega: f64) -> Result<Complex64>;
    fn is_stable(&self) -> Result<bool>;
}

impl<R: Response + ?Sized> ResponseObj for R {
    fn at(&self, omega: f64) -> Result<Complex64> {
        self.response(omega)
    }
    fn is_stable(&self) -> Result<bool> {
        self.stability().map(|r| r.stable)
    }
}

/// Shared engine: output 0 is `head` applied to `sig` (or `sig` itself);
/// output `k` adds `tail[k-1]` on top of output `k - 1`.
fn progressive(
    sig: &Signal,
    head: Option<&dyn ResponseObj>,
    tail: &[&dyn ResponseObj],
    opts: ApplyOptions,
) -> Result<Vec<Signal>> {
    if !opts.allow_unstable {
        for r in head.iter().chain(tail.iter()) {
            if !r.is_stable()? {
                return Err(Error::UnstableFilter);
            }
        }
    }
    let mut pad = INITIAL_PAD;
    loop {
        match progressive_once(sig, head, tail, pad) {
            Err(Error::Wraparound { fraction, .. }) => {
                if pad >= MAX_PAD {
                    return Err(Error::Wraparound {
                        fraction,
                        pad_factor: pad,
                    });
                }
                pad *= 2;
            }
            other => return other,
        }
    }
}

fn progressive_once(
    sig: &Signal,
    head: Option<&dyn ResponseObj>,
    tail: &[&dyn ResponseObj],
    pad: usize,
) -> Result<Vec<Signal>> {
    let n = fft::padded_len(sig.len(), pad)
        .ok_or(Error::invalid("signal", "padded length overflows"))?
        .max(4);
    let domega = 2.0 * PI / (n as f64 * sig.dt());
    let omegas: Vec<f64> = (0..n)
        .map(|k| {
            let j = if k <= n / 2 {
                k as f64
            } else {
                k as f64 - n as f64
            };
            j * domega
        })
        .collect();

    let mut spec = fft::forward_real(sig.samples(), n);
    let mut outputs = Vec::with_capacity(tail.len() + 1);
    match head {
        None => outputs.push(sig.clone()),
        Some(r) => {
            multiply(&mut spec, &omegas, r)?;
            let buf = invert(&spec);
            check_wraparound(&buf, pad)?;
            outputs.push(sig.with_samples(buf[..sig.len()].to_vec())?);
        }
    }
    let reference = outputs[0].max_abs();
    for (i, r) in tail.iter().enumerate() {
        multiply(&mut spec, &omegas, *r)?;
        let buf = invert(&spec);
        if reference > 0.0 {
            let ratio = buf.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / reference;
            if !(ratio <= AMPLITUDE_LIMIT) {
                return Err(Error::AmplitudeOverflow {
                    stage: i + 1,
                    ratio,
                });
            }
        }
        check_wraparound(&buf, pad)?;
        outputs.push(sig.with_samples(buf[..sig.len()].to_vec())?);
    }
    Ok(outputs)
}

fn multiply(spec: &mut [Complex64], omegas: &[f64], r: &dyn ResponseObj) -> Result<()> {
    for (x, &w) in spec.iter_mut().zip(omegas) {
        *x *= r.at(w)?;
    }
    Ok(())
}

/// Real part of the inverse transform over the whole padded buffer.
fn invert(spec: &[Complex64]) -> Vec<f64> {
    let mut buf = spec.to_vec();
    fft::inverse(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// The final quarter of the buffer is zero padding; energy there has
/// wrapped around or leaked backwards in time.
fn check_wraparound(buf: &[f64], pad: usize) -> Result<()> {
    let n = buf.len();
    let total: f64 = buf.iter().map(|v| v * v).sum();
    if total > 0.0 {
        let tail: f64 = buf[3 * n / 4..].iter().map(|v| v * v).sum();
        let fraction = tail / total;
        if !(fraction < WRAPAROUND_LIMIT) {
            return Err(Error::Wraparound {
                fraction,
                pad_factor: pad,
            });
        }
    }
    Ok(())
}
