//! Gaussian-estimator values on simulated VAR(1) data approach the
//! closed-form population values.

use tsinfo_core::measures::{compute, DiMode, MeasureId, MeasureRequest};
use tsinfo_core::oracle::{analytic_gaussian_measure, gen_var1, Var1System, DEFAULT_BURN_IN};
use tsinfo_core::EstimatorKind;

fn requests() -> Vec<MeasureRequest> {
    let mut out = Vec::new();
    for m in MeasureId::ALL {
        let req = if m.is_single_process() {
            MeasureRequest::single(m, "Y")
        } else {
            MeasureRequest::pair(m, "X", "Y")
        };
        out.push(req.with_estimator(EstimatorKind::Gaussian).with_window(2, DiMode::Exact));
    }
    out.push(
        MeasureRequest::pair(MeasureId::DirectedInformation, "X", "Y")
            .with_estimator(EstimatorKind::Gaussian)
            .with_window(2, DiMode::PooledApprox),
    );
    out.push(MeasureRequest::pair(MeasureId::TransferEntropy, "Y", "X").with_estimator(EstimatorKind::Gaussian));
    out
}

fn check(len: usize, seed: u64) {
    let sys = Var1System::var_a();
    let data = gen_var1(&sys, len, seed, DEFAULT_BURN_IN).unwrap();
    let envelope = 3.0 / (len as f64).sqrt() * 10.0;
    for req in requests() {
        let want = analytic_gaussian_measure(&sys, &req).unwrap();
        let got = compute(&data, &req).unwrap().value;
        assert!(
            (got - want).abs() < envelope,
            "{} ({:?}) at T={len}: {got} vs {want}",
            req.measure,
            req.di_mode
        );
    }
}

#[test]
fn converges_at_ten_thousand() {
    check(10_000, 21);
}

#[test]
fn converges_at_one_hundred_thousand() {
    check(100_000, 22);
}

#[test]
fn coupled_three_variable_system() {
    use nalgebra::DMatrix;
    let a = DMatrix::from_row_slice(3, 3, &[0.4, 0.0, 0.0, 0.3, 0.5, 0.0, 0.0, -0.4, 0.2]);
    let sigma = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 1.0, 0.1, 0.0, 0.1, 0.5]);
    let sys = Var1System::new(a, sigma).unwrap();
    let data = gen_var1(&sys, 50_000, 5, DEFAULT_BURN_IN).unwrap();
    for (src, tgt) in [("x1", "x2"), ("x2", "x3"), ("x3", "x1")] {
        for m in [MeasureId::TransferEntropy, MeasureId::TimeLaggedMi, MeasureId::StochasticInteraction] {
            let req = MeasureRequest::pair(m, src, tgt).with_estimator(EstimatorKind::Gaussian);
            let want = analytic_gaussian_measure(&sys, &req).unwrap();
            let got = compute(&data, &req).unwrap().value;
            assert!((got - want).abs() < 0.02, "{m} {src}->{tgt}: {got} vs {want}");
        }
    }
}
