use reupload_lab::data::{gen_linsep, Task};
use reupload_lab::lab::{
    aggregate, plot_svg, records_from_table, run_experiment, series, ExperimentConfig, ExperimentId, PlotOptions,
    Profile, Table,
};
use reupload_lab::model::{evaluate, train, CircuitSpec, Entangler, LossKind, TrainConfig};

#[test]
fn classification_error_is_one_minus_mean_probability() {
    let (data, _) = gen_linsep(6, 60, 0.3, 11).unwrap();
    let spec = CircuitSpec::unpadded(1, 2, 2, Entangler::RingCnot).unwrap();
    let cfg = TrainConfig {
        epochs: 5,
        batch_size: 20,
        learning_rate: 0.05,
        ..TrainConfig::default()
    };
    let h = train(&data, &spec, &cfg).unwrap().hypothesis;
    let m = evaluate(&h, &data, LossKind::CrossEntropy, cfg.prob_clip).unwrap();
    let mean_h = data
        .samples()
        .iter()
        .map(|s| h.value(&s.features, s.label).unwrap())
        .sum::<f64>()
        / data.len() as f64;
    assert!((m.error - (1.0 - mean_h)).abs() <= 1e-9);
    assert_eq!(h.task(), Task::Classification);
}

#[test]
fn divergence_plot_keeps_data_under_bound() {
    let cfg = ExperimentConfig::preset(ExperimentId::Divergence, Profile::Ci);
    let out = run_experiment(&cfg, Some(2)).unwrap();
    assert!(out.all_checks_pass(), "{:?}", out.summary.checks);

    // Round trip through CSV, as the plot command would read it.
    let table = Table::read_csv(out.table.to_csv_string().as_bytes()).unwrap();
    assert_eq!(records_from_table(&table).unwrap(), out.records);
    assert_eq!(aggregate(&out.records).len(), 12);

    let mut opts = PlotOptions::new("L", "div_pre");
    opts.group_by = vec!["N".into(), "P".into()];
    opts.overlay = Some("bound".into());
    let groups = series(&table, &opts).unwrap();
    assert!(!groups.is_empty());
    for g in &groups {
        assert_eq!(g.points.len(), g.overlay.len());
        for (pt, &(ox, bound)) in g.points.iter().zip(&g.overlay) {
            assert_eq!(pt.x, ox);
            // Monte-Carlo states carry a small positive bias.
            assert!(pt.max <= bound + 0.02, "{}: L={} max {} bound {}", g.name, pt.x, pt.max, bound);
        }
        let first = g.points.first().unwrap().mean;
        let last = g.points.last().unwrap().mean;
        assert!(last < first, "{} does not decay: {first} -> {last}", g.name);
    }
    opts.log_y = true;
    let svg = plot_svg(&table, &opts).unwrap();
    assert_eq!(svg.matches("class=\"overlay\"").count(), groups.len());
}
