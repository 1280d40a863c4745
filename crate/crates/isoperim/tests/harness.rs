//! Corpus evaluation, determinism, constants and refinement.

mod common;

use common::*;
use isoperim::functionals::Params;
use isoperim::geometry::{Fourier, ShapeRep};
use isoperim::harness::{
    corpus_violations, estimate_constants, observed_orders, read_corpus_csv, refinement_study,
    run_corpus, write_corpus_csv, CorpusSpec, ShapeGen,
};

fn small_spec(shapes: Vec<ShapeGen>) -> CorpusSpec {
    CorpusSpec {
        n: 2,
        resolution: 4096,
        seed: 0,
        shapes,
    }
}

#[test]
fn ngon_corpus_has_decreasing_deficit() {
    let spec = small_spec((3..=12).map(|sides| ShapeGen::RegularNgon { sides }).collect());
    let rows = run_corpus(&spec, &Params::with_quadrature_n(1024)).unwrap();
    assert_eq!(rows.len(), 10);
    let ds: Vec<f64> = rows
        .iter()
        .map(|r| r.report.as_ref().unwrap().deficit)
        .collect();
    for w in ds.windows(2) {
        assert!(w[1] < w[0], "deficit not strictly decreasing: {ds:?}");
    }
    // closed form for each N-gon
    for (row, sides) in rows.iter().zip(3..=12usize) {
        let d = row.report.as_ref().unwrap().deficit;
        assert!((d - (ngon_perimeter(sides) - 2.0 * PI)).abs() < 1e-10);
    }
    assert!(corpus_violations(&rows).is_empty());
}

#[test]
fn square_row_matches_functional_panel() {
    let spec = small_spec(vec![ShapeGen::Square]);
    let rows = run_corpus(&spec, &Params::default()).unwrap();
    let rep = rows[0].report.as_ref().unwrap();
    assert!((rep.perimeter - SQUARE_PERIMETER).abs() < 1e-4);
    assert!((rep.beta * rep.beta - SQUARE_BETA_SQ).abs() < 1e-4);
    assert!((rep.gamma - SQUARE_GAMMA).abs() < 1e-4);
    assert!((rep.alpha - SQUARE_ALPHA).abs() < 1e-4);
}

#[test]
fn perturbed_ball_amplitude_zero_is_a_ball() {
    let spec = small_spec(vec![ShapeGen::PerturbedBall {
        mode: 2,
        amplitude: 0.0,
    }]);
    let rows = run_corpus(&spec, &Params::default()).unwrap();
    let rep = rows[0].report.as_ref().unwrap();
    assert!(rep.deficit.abs() < 1e-7);
    assert!(rep.alpha < 1e-7);
    assert!(rep.beta < 1e-7);
    assert!(rep.asymmetry < 1e-6);
}

#[test]
fn corpus_continues_past_individual_failures() {
    let spec = small_spec(vec![
        ShapeGen::RegularNgon { sides: 2 }, // invalid
        ShapeGen::Square,
    ]);
    let rows = run_corpus(&spec, &Params::with_quadrature_n(1024)).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].error.is_some());
    assert!(rows[1].report.is_some());
}

#[test]
fn corpus_csv_round_trip_and_determinism_across_thread_counts() {
    let spec = small_spec(vec![
        ShapeGen::Square,
        ShapeGen::RegularNgon { sides: 6 },
        ShapeGen::PerturbedBall {
            mode: 3,
            amplitude: 0.1,
        },
        ShapeGen::RegularNgon { sides: 2 },
    ]);
    let params = Params::with_quadrature_n(1024);
    let bytes = |threads: usize| -> Vec<u8> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let rows = pool.install(|| run_corpus(&spec, &params)).unwrap();
        let mut out = Vec::new();
        write_corpus_csv(&rows, &mut out).unwrap();
        out
    };
    let one = bytes(1);
    let four = bytes(4);
    assert_eq!(one, four, "corpus CSV differs across thread counts");

    let rows = read_corpus_csv(one.as_slice()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].id, "square");
    assert!(rows[3].error.is_some());
    let rep = rows[0].report.as_ref().unwrap();
    assert!((rep.volume - PI).abs() < 1e-9);
    // header is the frozen schema
    let header = String::from_utf8(one.clone()).unwrap();
    assert!(header.starts_with(
        "shape,P,V,D,gamma,y_star,beta,beta_direct,alpha,y_alpha,A,y_A,res_identity,ratio_A2_D,ratio_b2_D,ratio_prop,sp_lhs,sp_rhs,error\n"
    ));
}

#[test]
fn constants_from_square_and_hexagon() {
    let spec = small_spec(vec![ShapeGen::Square, ShapeGen::RegularNgon { sides: 6 }]);
    let rows = run_corpus(&spec, &Params::default()).unwrap();
    let report = estimate_constants(&rows, None, None).unwrap();
    // square dominates A²/D
    assert_eq!(report.c_main_shape, "square");
    let square_a2d = rows[0].report.as_ref().unwrap().ratio_a2_d.unwrap();
    assert!((report.c_main - square_a2d).abs() < 1e-12);
    // hexagon panel reproduces (A + √D)/β ≈ 2.818
    let hex_prop = rows[1].report.as_ref().unwrap().ratio_prop.unwrap();
    assert!(rel_err(hex_prop, 2.8183) < 0.01, "{hex_prop}");
    assert_eq!(report.rows_used, 2);
}

#[test]
fn constants_reproduce_mode2_lower_bound() {
    // the mode-2 family drives α²/D toward 32/(3π)
    let spec = small_spec(vec![
        ShapeGen::PerturbedBall {
            mode: 2,
            amplitude: 0.04,
        },
        ShapeGen::PerturbedBall {
            mode: 2,
            amplitude: 0.02,
        },
        ShapeGen::PerturbedBall {
            mode: 2,
            amplitude: 0.01,
        },
    ]);
    let rows = run_corpus(&spec, &Params::default()).unwrap();
    let report = estimate_constants(&rows, None, None).unwrap();
    assert!(
        rel_err(report.alpha_sq_over_d_max, MODE2_ALPHA_SQ_OVER_D) < 0.05,
        "{} vs {}",
        report.alpha_sq_over_d_max,
        MODE2_ALPHA_SQ_OVER_D
    );
    // the nearly-spherical subcorpus feeds the C0 estimate
    assert!(report.c0.is_some());
    assert!(report.c_main >= report.alpha_sq_over_d_max - 1e-12);
}

#[test]
fn constants_stability_between_resolutions() {
    let spec = small_spec(vec![ShapeGen::Square, ShapeGen::RegularNgon { sides: 5 }]);
    let coarse = run_corpus(&spec, &Params::with_quadrature_n(2048)).unwrap();
    let fine = run_corpus(&spec, &Params::with_quadrature_n(4096)).unwrap();
    let report = estimate_constants(&fine, None, Some(&coarse)).unwrap();
    let [dm, dp] = report.stability.unwrap();
    assert!(dm < 0.02, "c_main drift {dm}");
    assert!(dp < 0.02, "c_prop drift {dp}");
}

#[test]
fn refinement_study_hexagon_and_circle() {
    let hex = hexagon_pi();
    let rows = refinement_study(&hex, &[512, 1024, 2048, 4096], &Params::default()).unwrap();
    // per-edge Gauss converges at least at second order; on the hexagon it
    // is already at the closed form to machine precision at N = 512
    let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
    let errs: Vec<f64> = gammas.iter().map(|g| (g - HEX_GAMMA).abs()).collect();
    let orders = observed_orders(&gammas, HEX_GAMMA, 1e-12);
    for (e, o) in errs.iter().zip(&orders) {
        assert!(*e <= 1e-10 || o.is_some_and(|o| o >= 2.0), "err {e}, order {o:?}");
    }
    // residual bound at N = 4096
    let last = rows.last().unwrap();
    assert!(last.res_identity <= 1e-6 * last.perimeter);

    // circle radial graph: P exact at every N
    let circ = ShapeRep::RadialGraph2D(Fourier::zero());
    for row in refinement_study(&circ, &[512, 1024, 2048], &Params::default()).unwrap() {
        assert!((row.perimeter - 2.0 * PI).abs() <= 1e-12);
    }

    // square: residual at N = 4096 within 1e-6·P
    let rows = refinement_study(&square_pi(), &[1024, 4096], &Params::default()).unwrap();
    assert!(rows[1].res_identity <= 1e-6 * rows[1].perimeter);
}

#[test]
fn refinement_rejects_unsorted_resolutions() {
    let r = refinement_study(&square_pi(), &[1024, 512], &Params::default());
    assert!(r.is_err());
}

#[test]
fn translated_and_rotated_generators_preserve_the_panel() {
    // the functionals are isometry invariant, so wrapped generators give
    // the same row values as their bases
    let base = small_spec(vec![ShapeGen::Square]);
    let wrapped = small_spec(vec![ShapeGen::Rotated {
        angle: 0.6,
        of: Box::new(ShapeGen::Translated {
            v: [0.4, -0.2],
            of: Box::new(ShapeGen::Square),
        }),
    }]);
    let params = Params::with_quadrature_n(2048);
    let a = run_corpus(&base, &params).unwrap();
    let b = run_corpus(&wrapped, &params).unwrap();
    assert_eq!(b[0].id, "rotated-translated-square");
    let (ra, rb) = (a[0].report.as_ref().unwrap(), b[0].report.as_ref().unwrap());
    assert!((ra.deficit - rb.deficit).abs() < 1e-9);
    assert!((ra.alpha - rb.alpha).abs() < 1e-8);
    assert!((ra.beta - rb.beta).abs() < 1e-8);
    assert!((ra.asymmetry - rb.asymmetry).abs() < 1e-8);
}

#[test]
fn constants_reject_ball_only_corpus() {
    // a pure ball has D below the 1e-10 validity threshold
    let spec = small_spec(vec![ShapeGen::PerturbedBall {
        mode: 2,
        amplitude: 0.0,
    }]);
    let rows = run_corpus(&spec, &Params::with_quadrature_n(1024)).unwrap();
    assert!(rows[0].report.is_some());
    assert!(matches!(
        estimate_constants(&rows, None, None),
        Err(isoperim::Error::NoValidRows(_))
    ));
}

#[test]
fn default_corpus_is_large_enough() {
    let spec = isoperim::harness::default_corpus();
    let shapes = isoperim::harness::generate(&spec).unwrap();
    assert!(shapes.len() >= 30, "corpus has {} shapes", shapes.len());
    assert_eq!(spec.resolution, 4096);
}
