use ngd_lab::experiments;
use ngd_lab::Overrides;

fn run(id: &str, sets: &[(&str, &str)]) -> ngd_lab::Outcome {
    let mut ov = Overrides::default();
    for (k, v) in sets {
        ov.set(k, v);
    }
    experiments::run(id, &ov).unwrap()
}

#[test]
fn fixed_time_constant_distortion_grows_about_linearly() {
    // Without rescaling each stage adds roughly the same deformation, so
    // distortion grows close to linearly in n rather than explosively.
    let o = run("fig9a", &[]);
    let d: Vec<f64> = (1..=5)
        .map(|k| o.report(&format!("stage {k}")).unwrap().distortion)
        .collect();
    assert!(d.windows(2).all(|w| w[1] > w[0]));
    let ratio = d[2] / d[0];
    assert!((2.5..4.0).contains(&ratio), "d3/d1 = {ratio}");
    let adv: Vec<f64> = (1..=5)
        .map(|k| o.report(&format!("stage {k}")).unwrap().advancement)
        .collect();
    assert!(adv.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn rescaled_cascade_advances_as_square_root() {
    let o = run("fig9b", &[("n", "16")]);
    let a1 = o.value("advancement_n1").unwrap();
    for n in [4, 9, 16] {
        let r = o.value(&format!("advancement_n{n}")).unwrap() / a1;
        assert!((r / (n as f64).sqrt() - 1.0).abs() < 0.05, "n={n}: {r}");
    }
}

#[test]
fn edge_exponent_tracks_filter_order() {
    let o = run("fig3", &[("m", "4"), ("dt", "0.001")]);
    for m in 1..=4 {
        let e = o.value(&format!("edge_exponent_m{m}")).unwrap();
        assert!((e - m as f64).abs() < 0.15, "m={m}: {e}");
        let later = o.value(&format!("peak_time_m{}", m.max(2))).unwrap();
        assert!(o.value(&format!("peak_time_m{}", m.max(2) - 1)).unwrap() < later);
    }
}

#[test]
fn spectral_tail_falls_faster_with_order() {
    let o = run("fig4", &[]);
    let amp = |m: usize| o.value(&format!("amplitude_at_10_over_T_L_m{m}")).unwrap();
    for m in 1..=6 {
        assert!(amp(m) < amp(m - 1) / 3.0, "m={m}");
    }
}

#[test]
fn practical_stage_peak_gain() {
    let o = run("fig5", &[("a", "0.1"), ("b", "0.01")]);
    let peak = o.value("peak_gain").unwrap();
    assert!((peak - (1.0 + 1.0 / 0.11)).abs() < 1e-6);
    assert_eq!(o.value("group_delay_dc").unwrap(), -1.0);
}

#[test]
fn interferometer_error_tends_to_splitter_offset() {
    // For tau -> 0 the exact advancement is tau / (4 eps) - tau / 2, so the
    // first-order estimate is off by a relative 2 eps, whatever tau is.
    for eps in [0.06, 0.3] {
        let err = |tau: &str| {
            run("fig12", &[("tau", tau), ("epsilon", &eps.to_string())])
                .value("relative_error")
                .unwrap()
        };
        let (coarse, fine) = (err("0.05"), err("0.005"));
        assert!((fine - 2.0 * eps).abs() < (coarse - 2.0 * eps).abs());
        assert!((fine - 2.0 * eps).abs() < 0.01 * eps, "eps={eps}: {fine}");
    }
}

#[test]
fn velocity_classes() {
    let o = run("velocity", &[("t_d", "1e-9")]);
    assert_eq!(o.note("class"), Some("subluminal"));
    let o = run("velocity", &[("t_d", "-1e-10")]);
    assert_eq!(o.note("class"), Some("superluminal"));
}
