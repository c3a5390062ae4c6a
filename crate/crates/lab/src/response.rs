//! Frequency-response tables for a transfer function given on the command line.
//!
//! Constructors are written `name:key=value,...`, e.g. `lowpass:T=1`,
//! `ngd_practical:T=1,a=0.2,b=0.05` or `bessel:m=4,T_L=1`.

use std::collections::BTreeMap;

use ngd_core::{Response, TransferFunction};

use crate::error::{Context, LabError, Result};
use crate::format;

pub const CONSTRUCTORS: &[(&str, &str)] = &[
    ("identity", "H = 1"),
    ("lowpass", "T: 1/(1 + i w T)"),
    ("ngd_ideal", "T: 1 + i w T"),
    ("allpass", "T: (1 - i w T)/(1 + i w T)"),
    (
        "ngd_practical",
        "T, a, b: 1 + i w T/((1 + i w aT)(1 + i w bT))",
    ),
    ("bessel", "m, T_L: Bessel lowpass, half power at w = 1/T_L"),
    (
        "cascaded_lowpass",
        "m, T_L: m first-order sections, half power at w = 1/T_L",
    ),
];

pub fn parse_constructor(text: &str) -> Result<TransferFunction> {
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let mut kv = BTreeMap::new();
    for part in args.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| LabError::config(format!("expected key=value in `{part}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| LabError::config(format!("`{}`: not a number: `{v}`", k.trim())))?;
        kv.insert(k.trim().to_string(), v);
    }
    let allowed: &[&str] = match name {
        "identity" => &[],
        "lowpass" | "ngd_ideal" | "allpass" => &["T"],
        "ngd_practical" => &["T", "a", "b"],
        "bessel" | "cascaded_lowpass" => &["m", "T_L"],
        _ => {
            let names: Vec<&str> = CONSTRUCTORS.iter().map(|c| c.0).collect();
            return Err(LabError::config(format!(
                "unknown constructor `{name}` (known: {})",
                names.join(", ")
            )));
        }
    };
    if let Some(k) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(LabError::config(format!("`{name}` does not take `{k}`")));
    }
    let get = |k: &str| -> Result<f64> {
        kv.get(k)
            .copied()
            .ok_or_else(|| LabError::config(format!("`{name}` needs `{k}`")))
    };
    let order = || -> Result<usize> {
        let m = get("m")?;
        if m.fract() != 0.0 || m < 1.0 {
            return Err(LabError::config(format!(
                "`m` must be a positive integer, got {m}"
            )));
        }
        Ok(m as usize)
    };
    let tf = match name {
        "identity" => Ok(TransferFunction::identity()),
        "lowpass" => TransferFunction::lowpass(get("T")?),
        "ngd_ideal" => TransferFunction::ngd_ideal(get("T")?),
        "allpass" => TransferFunction::allpass(get("T")?),
        "ngd_practical" => TransferFunction::ngd_practical(get("T")?, get("a")?, get("b")?),
        "bessel" => TransferFunction::bessel(order()?, get("T_L")?),
        "cascaded_lowpass" => TransferFunction::cascaded_lowpass(order()?, get("T_L")?),
        _ => unreachable!(),
    };
    tf.stage(name)
}

/// Parse `wmin,wmax,npts`.
pub fn parse_grid(text: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || LabError::config(format!("grid must be `wmin,wmax,npts`, got `{text}`"));
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || n == 0 || (n > 1 && lo >= hi) {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

pub fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    })
}

pub const CSV_HEADER: &str = "omega,amplitude,phase,group_delay";

/// `omega,amplitude,phase,group_delay` rows over a linear grid.
pub fn table<R: Response>(tf: &R, lo: f64, hi: f64, n: usize) -> Result<String> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for w in grid(lo, hi, n) {
        let h = tf.response(w).stage(format!("response at omega={w}"))?;
        let gd = tf
            .group_delay(w)
            .stage(format!("group delay at omega={w}"))?;
        out.push_str(&format!(
            "{},{},{},{}\n",
            format::num(w),
            format::num(h.norm()),
            format::num(h.arg()),
            format::num(gd)
        ));
    }
    Ok(out)
}
