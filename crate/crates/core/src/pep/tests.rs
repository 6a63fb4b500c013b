use super::*;
use crate::admm::admm_run;
use crate::gallery::{make_instance, GalleryKind};
use crate::rates::pl_linear_rate;

fn dual_gap_params(n: usize, t: f64) -> PepParams {
    PepParams::new(n, t, 1.0, 0.0, 1.0, PepObjective::DualGap)
}

#[test]
fn builder_counts() {
    let sdp = build_pep(&dual_gap_params(4, 1.0)).unwrap();
    assert_eq!(sdp.gram_dim, 14);
    assert_eq!(sdp.num_free, 11);
    assert_eq!(sdp.constraints.len(), expected_constraint_count(4));
    assert_eq!(sdp.constraints.len(), 51);
    assert_eq!(sdp.column_labels.len(), 14);
    assert_eq!(sdp.free_labels.len(), 11);
    assert_eq!(sdp.free_labels[0], "f1");
    assert_eq!(sdp.free_labels[10], "g_star");

    let mut strict = dual_gap_params(4, 1.0);
    strict.strict = true;
    let sdp_strict = build_pep(&strict).unwrap();
    assert_eq!(sdp_strict.num_free, 12);
    assert_eq!(sdp_strict.constraints.len(), expected_constraint_count(4) + 5);
}

#[test]
fn interpolation_block_counts() {
    let dim = 3;
    let p0 = InterpPoint { point: vec![1.0, 0.0, 0.0], witness: vec![0.0, 1.0, 0.0], value: 0 };
    let p1 = InterpPoint { point: vec![0.0, 0.0, 1.0], witness: vec![0.0, -1.0, 0.0], value: 1 };
    let block = interpolation_block(&[p0, p1], 0.0, dim, 2).unwrap();
    assert_eq!(block.len(), 2);
    for c in &block {
        assert_eq!(c.rel, Relation::Le);
        assert_eq!(c.rhs, 0.0);
    }
}

#[test]
fn gallery_trace_is_feasible_for_the_relaxation() {
    for (kind, objective) in [
        (GalleryKind::DualGapTight, PepObjective::DualGap),
        (GalleryKind::PrimalResidualTight, PepObjective::PrimalResidualSq),
        (GalleryKind::DualResidualTight, PepObjective::DualResidualSq),
    ] {
        let n = 5;
        let t = 1.0;
        let (p, cfg, opt) = make_instance(kind, n, t, 1.0, 1).unwrap();
        let trace = admm_run(&p, &cfg).unwrap();
        let (y, values) = gram_image_of_trace(&p, &trace, &opt).unwrap();
        let mut params = dual_gap_params(n, t);
        params.objective = objective;
        let sdp = build_pep(&params).unwrap();
        assert_eq!(y.dim(), sdp.gram_dim);
        assert_eq!(values.len(), sdp.num_free);
        for (i, c) in sdp.constraints.iter().enumerate() {
            let v = constraint_violation(c, &y, &values);
            match c.rel {
                Relation::Le => assert!(
                    v <= 1e-8,
                    "{kind:?} constraint {i} violated by {v}"
                ),
                Relation::Eq => assert!(v.abs() <= 1e-8, "{kind:?} equality {i} off by {v}"),
            }
        }
        let attained = objective_value(&sdp, &y, &values);
        let sol = sdp_solve(&sdp, 1e-7).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!(
            attained <= sol.value + 1e-6,
            "{kind:?}: attained {attained} exceeds SDP optimum {}",
            sol.value
        );
    }
}

#[test]
fn dual_gap_pep_is_tight() {
    for (n, t) in [(4usize, 1.0), (5, 1.0)] {
        let sdp = build_pep(&dual_gap_params(n, t)).unwrap();
        let sol = sdp_solve(&sdp, 1e-7).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let expect = 1.0 / (4.0 * n as f64 * t);
        assert!(
            (sol.value - expect).abs() <= 1e-5,
            "N={n}: got {}, want {expect}",
            sol.value
        );
        assert!(sol.duality_gap <= 1e-7 * (1.0 + sol.value.abs() * 2.0 + 1.0));
        let rep = crate::numkit::psd_check(&sol.y, crate::numkit::default_psd_tol(&sol.y)).unwrap();
        assert!(rep.is_psd);
    }
}

#[test]
fn zero_budget_collapses_to_zero() {
    let mut params = dual_gap_params(4, 1.0);
    params.delta = 0.0;
    let sol = sdp_solve(&build_pep(&params).unwrap(), 1e-7).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert!(sol.value.abs() <= 1e-6, "got {}", sol.value);
}

#[test]
fn budget_homogeneity() {
    let base = sdp_solve(&build_pep(&dual_gap_params(4, 1.0)).unwrap(), 1e-8).unwrap();
    let mut params = dual_gap_params(4, 1.0);
    params.delta = 2.0;
    let doubled = sdp_solve(&build_pep(&params).unwrap(), 1e-8).unwrap();
    let rel = (doubled.value - 2.0 * base.value).abs() / (1.0 + doubled.value.abs());
    assert!(rel <= 1e-6, "homogeneity off: {} vs 2×{}", doubled.value, base.value);
}

#[test]
fn trivial_sdp() {
    let mut c = SdpConstraint {
        gram: SymMatrix::zeros(1).unwrap(),
        free: vec![],
        rel: Relation::Eq,
        rhs: 1.0,
    };
    c.gram.set(0, 0, 1.0);
    let sdp = SdpProblem {
        gram_dim: 1,
        num_free: 0,
        objective_gram: SymMatrix::zeros(1).unwrap(),
        objective_free: vec![],
        constraints: vec![c],
        column_labels: vec!["y".to_string()],
        free_labels: vec![],
    };
    let sol = sdp_solve(&sdp, 1e-7).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert!(sol.value.abs() <= 1e-7);
    assert!((sol.y.get(0, 0) - 1.0).abs() <= 1e-5);
}

#[test]
fn contradictory_equalities_are_not_optimal() {
    let mut c1 = SdpConstraint {
        gram: SymMatrix::zeros(2).unwrap(),
        free: vec![],
        rel: Relation::Eq,
        rhs: 1.0,
    };
    c1.gram.set(0, 0, 1.0);
    let mut c2 = c1.clone();
    c2.rhs = -1.0;
    let sdp = SdpProblem {
        gram_dim: 2,
        num_free: 0,
        objective_gram: SymMatrix::zeros(2).unwrap(),
        objective_free: vec![],
        constraints: vec![c1, c2],
        column_labels: vec!["a".into(), "b".into()],
        free_labels: vec![],
    };
    let sol = sdp_solve(&sdp, 1e-7).unwrap();
    assert_ne!(sol.status, SolveStatus::Optimal);
}

#[test]
fn rate_pep_respects_closed_form_bounds() {
    // c1 = c2 = 1, t = 1, Lp = ½: bound 2/3
    let pep = build_rate_pep(&RatePepParams { t: 1.0, c1: 1.0, c2: 1.0, lp: 0.5 }, 0.67).unwrap();
    assert_eq!(pep.sdp.gram_dim, 9);
    assert_eq!(pep.sdp.num_free, 7);
    assert_eq!(pep.sdp.constraints.len(), 12 + 6 + 2 + 1);
    let sol = sdp_solve(&pep.sdp, 1e-7).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    let bound = pl_linear_rate(1.0, 1.0, 1.0, 0.5).unwrap();
    assert!(sol.value <= bound + 1e-5, "optimum {} above bound {bound}", sol.value);
    assert!(sol.value > 0.0);
    assert!(!pep.ratio_exceeds_alpha(&sol) || sol.value <= 0.67 + 1e-5);

    // c1 = ¼ < c2 = 1, t = ½, Lp = 1: bound 11/17
    let pep2 = build_rate_pep(&RatePepParams { t: 0.5, c1: 0.25, c2: 1.0, lp: 1.0 }, 0.5).unwrap();
    let sol2 = sdp_solve(&pep2.sdp, 1e-7).unwrap();
    assert_eq!(sol2.status, SolveStatus::Optimal);
    assert!(sol2.value <= 11.0 / 17.0 + 1e-5, "optimum {} above 11/17", sol2.value);
}

#[test]
fn rate_pep_relaxes_as_pl_weakens() {
    let tight = build_rate_pep(&RatePepParams { t: 1.0, c1: 1.0, c2: 1.0, lp: 0.5 }, 0.5).unwrap();
    let loose = build_rate_pep(&RatePepParams { t: 1.0, c1: 1.0, c2: 1.0, lp: 1e-4 }, 0.999).unwrap();
    let v_tight = sdp_solve(&tight.sdp, 1e-7).unwrap();
    let v_loose = sdp_solve(&loose.sdp, 1e-7).unwrap();
    assert_eq!(v_loose.status, SolveStatus::Optimal);
    // smaller Lp only weakens the PŁ constraints
    assert!(v_loose.value >= v_tight.value - 1e-6);
    assert!(v_loose.value <= pl_linear_rate(1.0, 1.0, 1.0, 1e-4).unwrap() + 1e-5);

    assert!(build_rate_pep(&RatePepParams { t: 1.0, c1: 1.0, c2: 1.0, lp: 0.5 }, 1.5).is_err());
}

#[test]
fn strict_mode_never_loosens() {
    let base = sdp_solve(&build_pep(&dual_gap_params(4, 1.0)).unwrap(), 1e-7).unwrap();
    let mut params = dual_gap_params(4, 1.0);
    params.strict = true;
    let strict = sdp_solve(&build_pep(&params).unwrap(), 1e-7).unwrap();
    assert!(strict.value <= base.value + 1e-6);
}

#[test]
fn sdpa_roundtrip_and_determinism() {
    let sdp = build_pep(&dual_gap_params(4, 1.0)).unwrap();
    let mut buf1 = Vec::new();
    export_sdpa(&sdp, &mut buf1).unwrap();
    let mut buf2 = Vec::new();
    export_sdpa(&sdp, &mut buf2).unwrap();
    assert_eq!(buf1, buf2, "export is not byte-deterministic");

    let back = read_sdpa(&mut std::io::BufReader::new(buf1.as_slice())).unwrap();
    assert_eq!(back.gram_dim, sdp.gram_dim);
    assert_eq!(back.num_free, sdp.num_free);
    assert_eq!(back.constraints.len(), sdp.constraints.len());
    assert_eq!(back.objective_gram, sdp.objective_gram);
    assert_eq!(back.objective_free, sdp.objective_free);
    for (a, b) in back.constraints.iter().zip(&sdp.constraints) {
        assert_eq!(a.gram, b.gram);
        assert_eq!(a.free, b.free);
        assert_eq!(a.rel, b.rel);
        assert_eq!(a.rhs, b.rhs);
    }
}

#[test]
fn sdpa_trivial_file_is_five_lines() {
    let mut c = SdpConstraint {
        gram: SymMatrix::zeros(1).unwrap(),
        free: vec![],
        rel: Relation::Eq,
        rhs: 1.0,
    };
    c.gram.set(0, 0, 1.0);
    let sdp = SdpProblem {
        gram_dim: 1,
        num_free: 0,
        objective_gram: SymMatrix::zeros(1).unwrap(),
        objective_free: vec![],
        constraints: vec![c],
        column_labels: vec!["y".into()],
        free_labels: vec![],
    };
    let mut buf = Vec::new();
    export_sdpa(&sdp, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text, "1\n1\n1\n1\n1 1 1 1 1\n");
}

#[test]
fn conjecture_report_upper_bound_direction() {
    let rep = check_conjecture(4, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(rep.dual_gap_status, SolveStatus::Optimal);
    assert!((rep.dual_gap_conjectured - 1.0 / 17.0).abs() < 1e-15);
    assert!((rep.primal_residual_conjectured - 1.0 / 4.5).abs() < 1e-15);
    assert!(rep.dual_gap_excess <= 1e-4, "dual-gap excess {}", rep.dual_gap_excess);
    assert!(
        rep.primal_residual_excess <= 1e-4,
        "primal-residual excess {}",
        rep.primal_residual_excess
    );
}
