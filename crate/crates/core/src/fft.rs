//! In-place radix-2 FFT. Lengths are always powers of two here because
//! every transform runs on a zero-padded buffer.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Forward transform, `X_k = sum_n x_n exp(-2 pi i k n / N)`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    transform(buf, -1.0);
}

/// Inverse transform including the `1/N` factor.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    transform(buf, 1.0);
    let scale = 1.0 / buf.len() as f64;
    for x in buf.iter_mut() {
        *x *= scale;
    }
}

/// Largest FFT length accepted by the padding helpers.
pub(crate) const MAX_LEN: usize = 1 << 27;

/// Power of two at least `len * factor`, or `None` past [`MAX_LEN`].
pub(crate) fn padded_len(len: usize, factor: usize) -> Option<usize> {
    let n = len.checked_mul(factor)?.checked_next_power_of_two()?;
    (n <= MAX_LEN).then_some(n)
}

/// Forward transform of `samples` zero-padded to `n`.
pub(crate) fn forward_real(samples: &[f64], n: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(n, Complex64::new(0.0, 0.0));
    forward(&mut buf);
    buf
}

fn transform(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    // Twiddles computed directly per stage to keep rounding error flat in N.
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| {
                let angle = sign * 2.0 * PI * k as f64 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        len *= 2;
    }
}
