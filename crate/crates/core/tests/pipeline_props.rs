mod common;

use ndarray::{Array2, ArrayView2};
use qst_core::dataset::{generate_dataset, SamplingSpec};
use qst_core::nn::{init_params, LayerSpec, TrainConfig};
use qst_core::pipeline::*;
use qst_core::quantum::Topology;

struct Scaled<'a>(&'a dyn CoeffPredictor, f64);

impl CoeffPredictor for Scaled<'_> {
    fn predict_rows(&self, inputs: ArrayView2<f64>) -> Result<Array2<f64>, PipelineError> {
        Ok(self.0.predict_rows(inputs)? * self.1)
    }
}

#[test]
fn oracle_closure_on_every_topology() {
    for t in [Topology::full(4), Topology::chain(5), Topology::ti_ring(4)] {
        let t_name = format!("{:?}", t);
        let spec = SamplingSpec::with_defaults(t.unwrap());
        let data = generate_dataset(&spec, 50, 21, 1).unwrap();
        let truth = coefficient_matrix(&data.records).unwrap();
        let report =
            evaluate_predictions(&data.records, truth.view(), &EvalOptions::default()).unwrap();
        assert_eq!(report.failures, 0);
        for r in &report.records {
            assert!((r.f1.unwrap() - 1.0).abs() < 1e-10, "{:?} {:?}", t_name, r);
            assert!((r.f2.unwrap() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn evaluation_ignores_prediction_scale() {
    let spec = SamplingSpec::with_defaults(Topology::full(3).unwrap());
    let data = generate_dataset(&spec, 30, 2, 1).unwrap();
    let params = init_params(
        &LayerSpec::with_hidden(spec.topology.coeff_dim(), &[20]).unwrap(),
        4,
    );
    let opts = EvalOptions::default();
    let base = evaluate_model(&params, &data.records, &opts).unwrap();
    for c in [0.1, 10.0] {
        let scaled = evaluate_model(&Scaled(&params, c), &data.records, &opts).unwrap();
        assert!((scaled.mean_f1() - base.mean_f1()).abs() < 1e-9);
        assert!((scaled.mean_f2() - base.mean_f2()).abs() < 1e-9);
    }
}

#[test]
fn worker_count_does_not_change_report() {
    let spec = SamplingSpec::with_defaults(Topology::full(3).unwrap());
    let data = generate_dataset(&spec, 25, 6, 1).unwrap();
    let params = init_params(
        &LayerSpec::with_hidden(spec.topology.coeff_dim(), &[16]).unwrap(),
        1,
    );
    let one = evaluate_model(
        &params,
        &data.records,
        &EvalOptions {
            workers: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let three = evaluate_model(
        &params,
        &data.records,
        &EvalOptions {
            workers: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(one, three);
}

#[test]
fn trained_model_beats_untrained() {
    let spec = SamplingSpec::with_defaults(Topology::full(3).unwrap());
    let train_set = generate_dataset(&spec, 2000, 1, 1).unwrap();
    let test_set = generate_dataset(&spec, 200, 2, 1).unwrap();
    let layers = LayerSpec::with_hidden(spec.topology.coeff_dim(), &[64, 64]).unwrap();
    let mut cfg = TrainConfig::new(layers.clone(), 30, 3);
    cfg.batch_size = 64;
    let trained = train_on_records(&train_set.records, &cfg).unwrap();
    let opts = EvalOptions::default();
    let before = evaluate_model(&init_params(&layers, 3), &test_set.records, &opts).unwrap();
    let after = evaluate_model(&trained.params, &test_set.records, &opts).unwrap();
    assert!(
        after.mean_f1() > before.mean_f1() + 0.2,
        "{} -> {}",
        before.mean_f1(),
        after.mean_f1()
    );
    assert!(
        after.mean_cos_angle > before.mean_cos_angle + 0.4,
        "cos {}",
        after.mean_cos_angle
    );
}

#[test]
fn prediction_round_trip_through_checkpoint() {
    let t = Topology::full(2).unwrap();
    let spec = SamplingSpec::with_defaults(t.clone());
    let data = generate_dataset(&spec, 3, 1, 1).unwrap();
    let params = init_params(&LayerSpec::with_hidden(15, &[8]).unwrap(), 2);
    let bytes = qst_core::nn::Checkpoint::new(params.clone(), 2, serde_json::Value::Null)
        .to_bytes()
        .unwrap();
    let back = qst_core::nn::Checkpoint::from_bytes(&bytes).unwrap();
    let a = predict(&params, &data.records[0].m).unwrap();
    let b = predict(&back.params, &data.records[0].m).unwrap();
    assert_eq!(a, b);
    let wrong = init_params(&LayerSpec::with_hidden(15, &[8]).unwrap(), 2);
    assert!(predict(
        &wrong,
        &generate_dataset(
            &SamplingSpec::with_defaults(Topology::full(3).unwrap()),
            1,
            1,
            1
        )
        .unwrap()
        .records[0]
            .m
    )
    .is_err());
}
