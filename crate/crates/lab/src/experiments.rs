//! Catalog of reproducible experiments.
//!
//! Every experiment is a pure function of its [`Settings`]: it returns the
//! CSV tables and measured quantities in an [`Outcome`], and nothing touches
//! the filesystem until [`Outcome::write`].

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ngd_core::filtering::{self, CascadePlan, Scaling, StageKind};
use ngd_core::interp;
use ngd_core::metrics::{self, MetricsReport};
use ngd_core::mzi::{self, MziConfig};
use ngd_core::pulses::{self, PulseSpec};
use ngd_core::transfer::{self, TransferFunction};
use ngd_core::{Cascade, Response, Signal};

use crate::config::{Overrides, ParamDef, Settings, Value};
use crate::error::{Context, LabError, Result};
use crate::format;

pub struct Experiment {
    pub id: &'static str,
    pub title: &'static str,
    pub params: &'static [ParamDef],
    run: fn(&Settings) -> Result<Outcome>,
}

impl Experiment {
    pub fn run(&self, overrides: &Overrides) -> Result<Outcome> {
        let settings = Settings::resolve(self.params, overrides)?;
        let mut out = (self.run)(&settings)?;
        out.id = self.id;
        out.title = self.title;
        out.settings = Some(settings);
        Ok(out)
    }
}

/// Everything an experiment produced.
#[derive(Default)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
    pub reports: Vec<(String, MetricsReport)>,
    /// Named scalar results, in the order they were measured.
    pub values: Vec<(String, f64)>,
    pub notes: Vec<(String, String)>,
    settings: Option<Settings>,
}

impl Outcome {
    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn report(&self, label: &str) -> Option<&MetricsReport> {
        self.reports
            .iter()
            .find(|(k, _)| k == label)
            .map(|(_, r)| r)
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    fn put(&mut self, key: impl Into<String>, v: f64) {
        self.values.push((key.into(), v));
    }

    pub fn metrics_csv(&self) -> String {
        let mut out = format!("label,{}\n", MetricsReport::CSV_HEADER);
        for (label, r) in &self.reports {
            let _ = writeln!(out, "{label},{}", r.csv_row());
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment {}: {}", self.id, self.title);
        if let Some(settings) = &self.settings {
            let ov = settings.overrides();
            if ov.is_empty() {
                let _ = writeln!(s, "overrides: none");
            } else {
                let list: Vec<String> = ov.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(s, "overrides: {}", list.join(" "));
            }
            let _ = writeln!(s, "\n[parameters]");
            for (k, v) in settings.entries() {
                let _ = writeln!(s, "{k:<14}{v}");
            }
        }
        if !self.values.is_empty() || !self.notes.is_empty() {
            let _ = writeln!(s, "\n[results]");
            for (k, v) in &self.notes {
                let _ = writeln!(s, "{k:<28}{v}");
            }
            for (k, v) in &self.values {
                let _ = writeln!(s, "{k:<28}{}", format::num(*v));
            }
        }
        for (label, r) in &self.reports {
            let _ = writeln!(s, "\n[{label}]\n{r}");
        }
        s
    }

    /// Write the CSV tables, `metrics.csv` and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| LabError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut files: Vec<(String, String)> = self.files.clone();
        if !self.reports.is_empty() {
            files.push(("metrics.csv".into(), self.metrics_csv()));
        }
        files.push(("summary.txt".into(), self.summary()));
        let mut written = Vec::new();
        for (name, contents) in files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(io(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn catalog() -> &'static [Experiment] {
    CATALOG
}

pub fn find(id: &str) -> Result<&'static Experiment> {
    CATALOG.iter().find(|e| e.id == id).ok_or_else(|| {
        let ids: Vec<&str> = CATALOG.iter().map(|e| e.id).collect();
        LabError::config(format!(
            "unknown experiment `{id}` (known: {})",
            ids.join(", ")
        ))
    })
}

/// Convenience wrapper: look up `id` and run it.
pub fn run(id: &str, overrides: &Overrides) -> Result<Outcome> {
    find(id)?.run(overrides)
}

const fn float(key: &'static str, v: f64, doc: &'static str) -> ParamDef {
    ParamDef {
        key,
        default: Value::Float(v),
        doc,
    }
}

const fn count(key: &'static str, v: usize, doc: &'static str) -> ParamDef {
    ParamDef {
        key,
        default: Value::Count(v),
        doc,
    }
}

const fn auto(key: &'static str, doc: &'static str) -> ParamDef {
    ParamDef {
        key,
        default: Value::OptFloat(None),
        doc,
    }
}

const DT: ParamDef = auto("dt", "sample interval, s (auto: T_w/200)");
const WINDOW: ParamDef = ParamDef {
    key: "window",
    default: Value::Window(None),
    doc: "simulation window `start,end`, s (auto: -2 T_w to 8 T_w plus twice the shaping delay)",
};

static CATALOG: &[Experiment] = &[
    Experiment {
        id: "fig3",
        title: "rectangular pulse smoothed by Bessel filters of increasing order",
        params: &[
            float("T_w", 1.0, "rectangular pulse width, s"),
            float("T_L", 1.0, "filter cutoff time constant, s (equal to T_w)"),
            count("m", 6, "highest filter order; orders 1..=m are produced"),
            DT,
            WINDOW,
        ],
        run: fig3,
    },
    Experiment {
        id: "fig4",
        title: "spectra of the Bessel-filtered rectangular pulses",
        params: &[
            float("T_w", 1.0, "rectangular pulse width, s"),
            float("T_L", 1.0, "filter cutoff time constant, s (equal to T_w)"),
            count("m", 6, "highest filter order"),
            DT,
            WINDOW,
        ],
        run: fig4,
    },
    Experiment {
        id: "fig5",
        title: "amplitude and phase of the practical NGD circuit",
        params: &[
            float("T", 1.0, "circuit time constant CR, s"),
            float("a", 0.2, "C'/C"),
            float("b", 0.05, "R'/R"),
            float("T_w", 5.0, "width of the gaussian probe pulse, s"),
            DT,
            WINDOW,
        ],
        run: fig5,
    },
    Experiment {
        id: "fig8",
        title: "bench chain: rectangular pulse, two 2nd-order Bessel filters, two NGD circuits",
        params: &[
            float("T", 0.22, "NGD circuit time constant CR, s"),
            float("a", 0.1, "C'/C"),
            float("b", 0.01, "R'/R"),
            float("T_w", 1.5, "rectangular pulse duration, s"),
            auto("T_L", "Bessel cutoff time constant, s (auto: T/0.35)"),
            count("m", 2, "order of each of the two Bessel filters"),
            count("n", 2, "number of NGD circuits"),
            DT,
            WINDOW,
        ],
        run: fig8,
    },
    Experiment {
        id: "fig9a",
        title: "cascaded ideal NGD stages with a fixed time constant",
        params: &[
            float("T", 1.0, "per-stage time constant, s"),
            count("n", 5, "number of stages"),
            count("m", 50, "total Bessel shaping order, built from sections of order <= 10"),
            float("T_w", 1.0, "rectangular pulse width, s"),
            float("T_L", 1.0, "cutoff time constant of each shaping section, s"),
            DT,
            WINDOW,
        ],
        run: fig9a,
    },
    Experiment {
        id: "fig9b",
        title: "cascaded ideal NGD stages with the time constant reduced as 1/sqrt(n)",
        params: &[
            float("T", 0.2, "base time constant; each of n stages uses T/sqrt(n), s"),
            count("n", 49, "number of stages"),
            count("m", 50, "total Bessel shaping order, built from sections of order <= 10"),
            float("T_w", 1.0, "rectangular pulse width, s"),
            float("T_L", 1.0, "cutoff time constant of each shaping section, s"),
            ParamDef {
                key: "scaling",
                default: Value::Scaling(Scaling::InverseSqrtN),
                doc: "`inverse_sqrt_n` or `fixed`",
            },
            DT,
            WINDOW,
        ],
        run: fig9b,
    },
    Experiment {
        id: "fig10",
        title: "breakdown of cascading when the stage count exceeds the shaping order",
        params: &[
            float("T", 0.3, "base time constant, s"),
            count("n", 6, "largest stage count; 1..=n are run"),
            count("m", 4, "Bessel shaping order"),
            float("T_w", 1.0, "rectangular pulse width, s"),
            float("T_L", 1.0, "shaping cutoff time constant, s"),
            ParamDef {
                key: "scaling",
                default: Value::Scaling(Scaling::InverseSqrtN),
                doc: "`inverse_sqrt_n` or `fixed`",
            },
            DT,
            ParamDef {
                key: "window",
                default: Value::Window(None),
                doc: "simulation window `start,end`, s (auto: -10 T_w to 8 T_w plus twice the shaping delay)",
            },
        ],
        run: fig10,
    },
    Experiment {
        id: "fig12",
        title: "Mach-Zehnder dark port acting on a gaussian envelope",
        params: &[
            float("T_w", 1.0, "gaussian width, s"),
            float("tau", 0.17, "path-difference delay, s"),
            float("epsilon", 0.06, "reflectivity offset, R = 1/2 - epsilon"),
            DT,
            ParamDef {
                key: "window",
                default: Value::Window(None),
                doc: "simulation window `start,end`, s (auto: -8 T_w to 8 T_w)",
            },
        ],
        run: fig12,
    },
    Experiment {
        id: "velocity",
        title: "group velocity of a vacuum path followed by a lumped delay",
        params: &[
            float("L", 0.06, "path length, m"),
            float("t_d", -60e-9, "lumped group delay, s"),
        ],
        run: velocity,
    },
];

impl Experiment {
    pub fn docs(&self) -> String {
        let mut s = format!("{:<10}{}\n", self.id, self.title);
        for p in self.params {
            let _ = writeln!(
                s,
                "           {:<9}{:<10}{}",
                p.key,
                p.default.to_string(),
                p.doc
            );
        }
        s
    }
}

// ---------------------------------------------------------------------------
// shared helpers

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(LabError::config(format!("`{name}` must be > 0, got {v}")))
    }
}

/// Bessel shaping of total order `m` with sections of order at most 10.
/// Orders up to the single-filter limit use one filter.
pub fn shaping(m: usize, t_l: f64) -> Result<Cascade> {
    if m == 0 {
        return Ok(Cascade::new());
    }
    if m <= transfer::BESSEL_MAX_ORDER {
        return Ok(Cascade::from(
            TransferFunction::bessel(m, t_l).stage("shaping filter")?,
        ));
    }
    let sections = m.div_ceil(10);
    let mut cascade = Cascade::new();
    let mut left = m;
    for k in 0..sections {
        let order = left.div_ceil(sections - k);
        cascade = cascade.then(TransferFunction::bessel(order, t_l).stage("shaping filter")?);
        left -= order;
    }
    Ok(cascade)
}

/// Sample interval and window for a pulse of width `tw` that passes
/// through filters with total DC delay `delay`; the window opens `lead`
/// pulse widths before the rising edge.
fn grid(s: &Settings, tw: f64, delay: f64, lead: f64) -> Result<(f64, f64, f64)> {
    let dt = positive("dt", s.opt_f("dt").unwrap_or(tw / 200.0))?;
    let (a, b) = s
        .window()
        .unwrap_or((-lead * tw, 8.0 * tw + 2.0 * delay.max(0.0)));
    Ok((dt, a, b))
}

fn rectangle(tw: f64, dt: f64, a: f64, b: f64) -> Result<Signal> {
    pulses::sample(&PulseSpec::rectangular(tw, 0.0), dt, a, b).stage("rectangular pulse")
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|k| format!("{prefix}{k}")).collect()
}

/// Time at which `|residual|` is largest.
fn residual_peak_time(input: &Signal, output: &Signal) -> ngd_core::Result<f64> {
    let res = metrics::residual(input, output)?;
    let mut best = (res.t0(), -1.0);
    for (t, v) in res.times().zip(res.samples()) {
        if v.abs() > best.1 {
            best = (t, v.abs());
        }
    }
    Ok(best.0)
}

/// Log-log slope of the leading edge between `a` and `2a` after `edge`.
///
/// `a` is the smallest of `0.02, 0.05, 0.1, 0.2` times `scale` that sits at
/// least ten samples past the edge and where the signal clears `1e-9` of
/// its peak; closer in, the band limit of the sampled edge smears the
/// power law.
pub fn leading_edge_exponent(sig: &Signal, edge: f64, scale: f64) -> Option<f64> {
    let floor = 1e-9 * sig.max_abs();
    [0.02, 0.05, 0.1, 0.2].iter().find_map(|f| {
        let a = f * scale;
        if a < 10.0 * sig.dt() {
            return None;
        }
        let v1 = interp::value_at(sig, edge + a);
        let v2 = interp::value_at(sig, edge + 2.0 * a);
        (v1 > floor && v2 > v1).then(|| (v2 / v1).ln() / 2f64.ln())
    })
}

// ---------------------------------------------------------------------------
// experiments

fn bessel_family(s: &Settings) -> Result<(Signal, Vec<Signal>)> {
    let tw = positive("T_w", s.f("T_w"))?;
    let t_l = positive("T_L", s.f("T_L"))?;
    let m = s.count("m");
    if m == 0 || m > transfer::BESSEL_MAX_ORDER {
        return Err(LabError::config(format!(
            "`m` must be in 1..={}, got {m}",
            transfer::BESSEL_MAX_ORDER
        )));
    }
    let top = TransferFunction::bessel(m, t_l).stage("bessel")?;
    let delay = top.group_delay(0.0).stage("bessel")?;
    let (dt, a, b) = grid(s, tw, delay, 2.0)?;
    let raw = rectangle(tw, dt, a, b)?;
    let mut shaped = Vec::with_capacity(m);
    for k in 1..=m {
        let tf = TransferFunction::bessel(k, t_l).stage(format!("bessel({k})"))?;
        shaped.push(filtering::apply(&tf, &raw).stage(format!("filtering with bessel({k})"))?);
    }
    Ok((raw, shaped))
}

fn fig3(s: &Settings) -> Result<Outcome> {
    let (raw, shaped) = bessel_family(s)?;
    let t_l = s.f("T_L");
    let mut out = Outcome::default();
    let mut cols: Vec<&Signal> = vec![&raw];
    cols.extend(shaped.iter());
    out.files.push((
        "fig3.csv".into(),
        format::columns_csv(&names("m", cols.len()), &cols),
    ));
    for (k, sig) in shaped.iter().enumerate() {
        let m = k + 1;
        let p = metrics::peak(sig).stage(format!("peak of m={m}"))?;
        out.put(format!("peak_time_m{m}"), p.time);
        out.put(format!("peak_value_m{m}"), p.value);
        if let Some(e) = leading_edge_exponent(sig, 0.0, t_l) {
            out.put(format!("edge_exponent_m{m}"), e);
        }
    }
    for (k, sig) in shaped.iter().enumerate().skip(1) {
        let r = MetricsReport::measure(&shaped[0], sig, Some(s.f("T_w")))
            .stage(format!("metrics m={}", k + 1))?;
        out.reports.push((format!("m={} vs m=1", k + 1), r));
    }
    Ok(out)
}

fn fig4(s: &Settings) -> Result<Outcome> {
    let (raw, shaped) = bessel_family(s)?;
    let t_l = s.f("T_L");
    let mut spectra = Vec::new();
    for sig in std::iter::once(&raw).chain(shaped.iter()) {
        spectra.push(pulses::spectrum(sig, 4).stage("spectrum")?);
    }
    let c = spectra[0].center();
    let w_max = 100.0 / t_l;
    let mut header: Vec<String> = vec!["omega".into()];
    header.extend(names("m", spectra.len()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    for i in (c + 1)..spectra[0].len() {
        let w = spectra[0].omega(i);
        if w > w_max {
            break;
        }
        let mut row = vec![w];
        row.extend(spectra.iter().map(|sp| sp.values()[i].norm()));
        rows.push(row);
    }
    let mut out = Outcome::default();
    out.files
        .push(("fig4.csv".into(), format::table_csv(&header, &rows)));
    // Suppression one decade above the cutoff.
    let probe = 10.0 / t_l;
    let idx = c + (probe / spectra[0].domega()).round() as usize;
    if idx < spectra[0].len() {
        for (m, sp) in spectra.iter().enumerate() {
            out.put(
                format!("amplitude_at_10_over_T_L_m{m}"),
                sp.values()[idx].norm(),
            );
        }
    }
    for (k, sig) in shaped.iter().enumerate().skip(1) {
        let r = MetricsReport::measure(&shaped[0], sig, Some(s.f("T_w")))
            .stage(format!("metrics m={}", k + 1))?;
        out.reports.push((format!("m={} vs m=1", k + 1), r));
    }
    Ok(out)
}

fn fig5(s: &Settings) -> Result<Outcome> {
    let t = positive("T", s.f("T"))?;
    let (a, b) = (s.f("a"), s.f("b"));
    let tw = positive("T_w", s.f("T_w"))?;
    let practical = TransferFunction::ngd_practical(t, a, b).stage("ngd_practical")?;
    let ideal = TransferFunction::ngd_ideal(t).stage("ngd_ideal")?;
    let npts = 3001;
    let w_max = 30.0 / t;
    let mut rows = Vec::with_capacity(npts);
    for k in 0..npts {
        let w = w_max * k as f64 / (npts - 1) as f64;
        let hp = practical.response(w).stage("practical response")?;
        let hi = ideal.response(w).stage("ideal response")?;
        rows.push(vec![
            w,
            hp.norm(),
            hp.arg(),
            practical.group_delay(w).stage("practical group delay")?,
            hi.norm(),
            hi.arg(),
            ideal.group_delay(w).stage("ideal group delay")?,
        ]);
    }
    let header = [
        "omega",
        "amplitude",
        "phase",
        "group_delay",
        "amplitude_ideal",
        "phase_ideal",
        "group_delay_ideal",
    ];
    let mut out = Outcome::default();
    out.files
        .push(("fig5.csv".into(), format::table_csv(&header, &rows)));

    let (w_peak, a_peak) =
        transfer::peak_amplitude(&practical, w_max * 10.0, 20_000).stage("peak search")?;
    out.put("peak_gain", a_peak);
    out.put("peak_omega", w_peak);
    if a + b > 0.0 {
        out.put("one_over_a_plus_b", 1.0 / (a + b));
    }
    out.put(
        "group_delay_dc",
        practical.group_delay(0.0).stage("group delay")?,
    );

    let dt = positive("dt", s.opt_f("dt").unwrap_or(tw / 200.0))?;
    let (w0, w1) = s.window().unwrap_or((-8.0 * tw, 8.0 * tw));
    let g = pulses::sample(&PulseSpec::gaussian(tw, 0.0), dt, w0, w1).stage("gaussian pulse")?;
    let y = filtering::apply(&practical, &g).stage("filtering")?;
    let r = MetricsReport::measure(&g, &y, Some(tw)).stage("metrics")?;
    out.reports.push(("gaussian probe".into(), r));
    Ok(out)
}

fn cascade_outcome(out: &mut Outcome, file: &str, runs: &[Signal], tw: f64) -> Result<()> {
    let cols: Vec<&Signal> = runs.iter().collect();
    out.files.push((
        file.into(),
        format::columns_csv(&names("stage", runs.len()), &cols),
    ));
    for (k, sig) in runs.iter().enumerate().skip(1) {
        let r =
            MetricsReport::measure(&runs[0], sig, Some(tw)).stage(format!("metrics stage {k}"))?;
        out.reports.push((format!("stage {k}"), r));
    }
    Ok(())
}

fn fig8(s: &Settings) -> Result<Outcome> {
    let t = positive("T", s.f("T"))?;
    let tw = positive("T_w", s.f("T_w"))?;
    let t_l = positive("T_L", s.opt_f("T_L").unwrap_or(t / 0.35))?;
    let m = s.count("m");
    let n = s.count("n");
    let filter = TransferFunction::bessel(m, t_l).stage("bessel")?;
    let shape = Cascade::repeat(&filter, 2);
    let delay = shape.group_delay(0.0).stage("shaping")?;
    let (dt, a, b) = grid(s, tw, delay, 2.0)?;
    let raw = rectangle(tw, dt, a, b)?;
    let plan = CascadePlan::new(
        n,
        t,
        Scaling::Fixed,
        StageKind::Practical {
            a: s.f("a"),
            b: s.f("b"),
        },
    )
    .stage("cascade plan")?;
    let runs = filtering::run_cascade_shaped(&plan, &shape, &raw).stage("cascade")?;
    let mut out = Outcome::default();
    out.files
        .push(("fig8_source.csv".into(), format::signal_csv(&raw)));
    cascade_outcome(&mut out, "fig8.csv", &runs, tw)?;
    let chain = plan.cascade().stage("cascade")?;
    out.put("T_L", t_l);
    out.put(
        "expected_advancement",
        -chain.group_delay(0.0).stage("group delay")?,
    );
    out.put(
        "advancement",
        out.reports.last().map_or(f64::NAN, |r| r.1.advancement),
    );
    Ok(out)
}

fn shaped_rectangle(s: &Settings, lead: f64) -> Result<(Cascade, Signal)> {
    let tw = positive("T_w", s.f("T_w"))?;
    let t_l = positive("T_L", s.f("T_L"))?;
    let shape = shaping(s.count("m"), t_l)?;
    let delay = shape.group_delay(0.0).stage("shaping")?;
    let (dt, a, b) = grid(s, tw, delay, lead)?;
    Ok((shape, rectangle(tw, dt, a, b)?))
}

fn fig9a(s: &Settings) -> Result<Outcome> {
    let tw = s.f("T_w");
    let (shape, raw) = shaped_rectangle(s, 2.0)?;
    let plan = CascadePlan::new(s.count("n"), s.f("T"), Scaling::Fixed, StageKind::Ideal)
        .stage("cascade plan")?;
    let runs = filtering::run_cascade_shaped(&plan, &shape, &raw).stage("cascade")?;
    let mut out = Outcome::default();
    cascade_outcome(&mut out, "fig9a.csv", &runs, tw)?;
    Ok(out)
}

fn fig9b(s: &Settings) -> Result<Outcome> {
    let tw = s.f("T_w");
    let n = s.count("n");
    let (shape, raw) = shaped_rectangle(s, 2.0)?;
    let plan =
        CascadePlan::new(n, s.f("T"), s.scaling(), StageKind::Ideal).stage("cascade plan")?;
    let runs = filtering::run_cascade_shaped(&plan, &shape, &raw).stage("cascade")?;
    let mut out = Outcome::default();
    cascade_outcome(&mut out, "fig9b.csv", &runs, tw)?;

    // Each point of the sweep is a separate cascade with its own stage
    // time constant.
    let mut counts: Vec<usize> = (1..).map(|k| k * k).take_while(|&k| k <= n).collect();
    if counts.last() != Some(&n) {
        counts.push(n);
    }
    let mut rows = Vec::new();
    let mut first = f64::NAN;
    for &k in &counts {
        let report = if k == n {
            out.reports.last().map(|r| r.1).expect("n >= 1")
        } else {
            let plan = CascadePlan::new(k, s.f("T"), s.scaling(), StageKind::Ideal)
                .stage("cascade plan")?;
            let r =
                filtering::run_cascade_shaped(&plan, &shape, &raw).stage(format!("sweep n={k}"))?;
            MetricsReport::measure(&r[0], &r[k], Some(tw)).stage(format!("sweep n={k} metrics"))?
        };
        if k == 1 {
            first = report.advancement;
        }
        let ratio = report.advancement / first;
        out.put(format!("advancement_n{k}"), report.advancement);
        out.put(format!("ratio_n{k}"), ratio);
        out.put(format!("distortion_n{k}"), report.distortion);
        let stage_t = CascadePlan::new(k, s.f("T"), s.scaling(), StageKind::Ideal)
            .stage("cascade plan")?
            .stage_time_constant();
        rows.push(vec![
            k as f64,
            stage_t,
            report.advancement,
            ratio,
            (k as f64).sqrt(),
            report.distortion,
            report.eta,
        ]);
    }
    let header = [
        "n",
        "stage_T",
        "advancement",
        "ratio",
        "sqrt_n",
        "distortion",
        "eta",
    ];
    out.files
        .push(("sweep.csv".into(), format::table_csv(&header, &rows)));
    Ok(out)
}

fn fig10(s: &Settings) -> Result<Outcome> {
    let tw = s.f("T_w");
    let n = s.count("n");
    if n == 0 {
        return Err(LabError::config("`n` must be >= 1"));
    }
    // Once n exceeds m + 1 the output spectrum grows without bound and
    // the stage outputs carry slowly decaying precursors; a longer lead
    // keeps them clear of the padded region.
    let (shape, raw) = shaped_rectangle(s, 10.0)?;
    let mut finals: Vec<Signal> = Vec::new();
    let mut input: Option<Signal> = None;
    let mut rows = Vec::new();
    let mut out = Outcome::default();
    for k in 1..=n {
        let plan =
            CascadePlan::new(k, s.f("T"), s.scaling(), StageKind::Ideal).stage("cascade plan")?;
        let mut r =
            filtering::run_cascade_shaped(&plan, &shape, &raw).stage(format!("cascade n={k}"))?;
        let last = r.pop().expect("stage output");
        let shaped = r.swap_remove(0);
        let report =
            MetricsReport::measure(&shaped, &last, Some(tw)).stage(format!("metrics n={k}"))?;
        let t_res = residual_peak_time(&shaped, &last).stage(format!("residual n={k}"))?;
        out.put(format!("distortion_n{k}"), report.distortion);
        out.put(format!("residual_peak_time_n{k}"), t_res);
        rows.push(vec![
            k as f64,
            report.advancement,
            report.distortion,
            report.eta,
            t_res,
        ]);
        out.reports.push((format!("n={k}"), report));
        finals.push(last);
        input.get_or_insert(shaped);
    }
    let input = input.expect("n >= 1");
    let mut cols: Vec<&Signal> = vec![&input];
    cols.extend(finals.iter());
    let mut col_names = vec!["input".to_string()];
    col_names.extend((1..=n).map(|k| format!("n{k}")));
    out.files
        .push(("fig10.csv".into(), format::columns_csv(&col_names, &cols)));
    let header = [
        "n",
        "advancement",
        "distortion",
        "eta",
        "residual_peak_time",
    ];
    out.files
        .push(("sweep.csv".into(), format::table_csv(&header, &rows)));
    Ok(out)
}

fn fig12(s: &Settings) -> Result<Outcome> {
    let tw = positive("T_w", s.f("T_w"))?;
    let cfg = MziConfig::new(s.f("tau"), s.f("epsilon")).stage("interferometer")?;
    let dt = positive("dt", s.opt_f("dt").unwrap_or(tw / 200.0))?;
    let (a, b) = s.window().unwrap_or((-8.0 * tw, 8.0 * tw));
    let env = pulses::sample(&PulseSpec::gaussian(tw, 0.0), dt, a, b).stage("gaussian pulse")?;
    let dark = mzi::dark_port(&env, &cfg).stage("dark port")?;
    let skip = ((dark.t0() - env.t0()) / dt).round() as usize;
    let input = Signal::new(
        env.samples()[skip..skip + dark.len()].to_vec(),
        dt,
        dark.t0(),
    )
    .stage("input window")?;

    let mut out = Outcome::default();
    let csv = format::columns_csv(&["input".into(), "dark_port".into()], &[&input, &dark]);
    out.files.push(("fig12.csv".into(), csv));
    let report = MetricsReport::measure(&env, &dark, Some(tw)).stage("metrics")?;
    let predicted = mzi::first_order_advancement(&cfg);
    out.put("first_order_advancement", predicted);
    out.put("advancement", report.advancement);
    out.put(
        "relative_error",
        (report.advancement - predicted).abs() / predicted,
    );
    out.put("validity_ratio", cfg.validity_ratio(tw));
    out.put("dc_transmission", cfg.dc_transmission());
    out.put("peak_value", metrics::peak(&dark).stage("peak")?.value);
    out.reports.push(("dark port".into(), report));
    Ok(out)
}

fn velocity(s: &Settings) -> Result<Outcome> {
    let v = metrics::composite_velocity(s.f("L"), s.f("t_d")).stage("velocity")?;
    let c = metrics::SPEED_OF_LIGHT;
    let mut out = Outcome::default();
    out.put("transit_time", v.length / c);
    out.put("t_total", v.t_total);
    out.put("v_g", v.v_g);
    out.put("v_g_over_c", v.v_g / c);
    out.put("c_over_v_g", c / v.v_g);
    out.notes.push(("class".into(), v.class.as_str().into()));
    let csv = format!(
        "length,delay,t_total,v_g,v_g_over_c,class\n{},{},{},{},{},{}\n",
        format::num(v.length),
        format::num(v.delay),
        format::num(v.t_total),
        format::num(v.v_g),
        format::num(v.v_g / c),
        v.class.as_str()
    );
    out.files.push(("velocity.csv".into(), csv));
    Ok(out)
}
