//! Deterministic text output: numbers with 12 significant digits, LF endings.

use std::fmt::Write;

use ngd_core::Signal;

/// `%.12g`-style rendering.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

/// `t,v` rows for one signal.
pub fn signal_csv(sig: &Signal) -> String {
    let mut out = String::from("t,v\n");
    for (t, v) in sig.times().zip(sig.samples()) {
        let _ = writeln!(out, "{},{}", num(t), num(*v));
    }
    out
}

/// Several signals on a shared grid, one column each.
///
/// The grid of the first signal is used; all must match it.
pub fn columns_csv(names: &[String], signals: &[&Signal]) -> String {
    assert_eq!(names.len(), signals.len());
    let mut out = String::from("t");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    let Some(first) = signals.first() else {
        return out;
    };
    for (k, t) in first.times().enumerate() {
        out.push_str(&num(t));
        for s in signals {
            out.push(',');
            out.push_str(&num(s.samples()[k]));
        }
        out.push('\n');
    }
    out
}

/// Generic table with a header row.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
