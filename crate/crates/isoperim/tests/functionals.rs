//! Functional panel against closed forms and independent oracles.

mod common;

use common::*;
use isoperim::functionals::{
    self, annulus_gap, asymmetry, beta, center_stability_check, concavity_constant, deficit,
    fraenkel, gamma, inequality_panel, oscillation, riesz_boundary, strong_poincare_check, Params,
};
use isoperim::geometry::{BallSpec, Fourier, ShapeRep, SphereGrid};
use isoperim::nearly_spherical::{normalize, SphericalFunction};
use isoperim::point;

fn unit_disk() -> ShapeRep {
    ShapeRep::RadialGraph2D(Fourier::zero())
}

#[test]
fn deficit_closed_forms() {
    assert!(deficit(&unit_disk()).abs() < 1e-12);
    assert!((deficit(&square_pi()) - SQUARE_DEFICIT).abs() < 1e-12);
    assert!((deficit(&hexagon_pi()) - HEX_DEFICIT).abs() < 1e-12);
    // scale and translation invariance
    let hex = hexagon_pi();
    let moved = hex.translate([0.4, -1.0, 0.0]).unwrap().scaled(2.5);
    assert!((deficit(&moved) - HEX_DEFICIT).abs() < 1e-12);
}

#[test]
fn riesz_boundary_unit_ball() {
    let q = unit_disk().boundary_quadrature(4096).unwrap();
    // ∫_{B1} 1/|x| dx = 2π in the plane, and n−1 = 1
    let v = riesz_boundary(&q, point::ORIGIN).unwrap();
    assert!((v - 2.0 * PI).abs() < 1e-10);
}

#[test]
fn riesz_boundary_square_and_hexagon_closed_forms() {
    let sq = square_pi();
    let q = sq.boundary_quadrature(4096).unwrap();
    let v = riesz_boundary(&q, point::ORIGIN).unwrap();
    // 8a·ln(1+√2) with a = √π/2
    let a = PI.sqrt() / 2.0;
    let closed = 8.0 * a * (1.0 + 2f64.sqrt()).ln();
    assert!((closed - SQUARE_GAMMA).abs() < 1e-12);
    assert!((v - closed).abs() < 1e-9, "{v} vs {closed}");

    let q = hexagon_pi().boundary_quadrature(4096).unwrap();
    let v = riesz_boundary(&q, point::ORIGIN).unwrap();
    assert!((v - HEX_GAMMA).abs() < 1e-9);
    assert!((ngon_gamma(6) - HEX_GAMMA).abs() < 1e-12);
}

#[test]
fn riesz_boundary_rejects_node_collision() {
    let sq = square_pi();
    let q = sq.boundary_quadrature(64).unwrap();
    let node = q.points[3];
    assert!(matches!(
        riesz_boundary(&q, node),
        Err(isoperim::Error::NodeCollision)
    ));
}

#[test]
fn riesz_boundary_equals_volume_route_everywhere() {
    // inside, outside, and near the boundary of the square
    let sq = square_pi();
    let ShapeRep::Polygon2D(poly) = &sq else { unreachable!() };
    let q = sq.boundary_quadrature(4096).unwrap();
    let a = PI.sqrt() / 2.0;
    for y in [[0.3, 0.2], [1.5, 0.9], [a - 0.01, 0.0], [a + 0.01, 0.0]] {
        let boundary = riesz_boundary(&q, [y[0], y[1], 0.0]).unwrap();
        let volume = polygon_riesz_volume(poly, y);
        assert!(
            (boundary - volume).abs() < 1e-6,
            "y={y:?}: {boundary} vs {volume}"
        );
    }
    // the closed form itself agrees with dense polar quadrature inside
    let closed = polygon_riesz_volume(poly, [0.3, 0.2]);
    let polar = polygon_riesz_polar(poly, [0.3, 0.2], 400_000);
    assert!((closed - polar).abs() < 1e-8);
}

#[test]
fn gamma_examples() {
    let p = Params::default();
    // unit ball: γ = n·ω_n/(n−1) = 2π, center at the origin
    let c = gamma(&unit_disk(), &p).unwrap();
    assert!(point::norm(c.y_star) < 1e-6);
    assert!((c.gamma - 2.0 * PI).abs() < 1e-6);

    // 3D unit ball: γ = 3·(4π/3)/2 = 2π as well
    let ball3 = ShapeRep::RadialGraph3D(SphereGrid::unit(32, 64));
    let c3 = gamma(&ball3, &p).unwrap();
    assert!(point::norm(c3.y_star) < 1e-5);
    assert!((c3.gamma - 2.0 * PI).abs() < 1e-5);

    // square: symmetric center, golden value
    let c = gamma(&square_pi(), &p).unwrap();
    assert!(point::norm(c.y_star) < 1e-6);
    assert!((c.gamma - SQUARE_GAMMA).abs() < 1e-4);
    assert!(c.converged);

    // γ is at least the barycenter candidate by construction
    let q = square_pi().boundary_quadrature(4096).unwrap();
    let at_bary = riesz_boundary(&q, point::ORIGIN).unwrap();
    assert!(c.gamma >= at_bary - 1e-12);
}

#[test]
fn gamma_translation_equivariance() {
    let p = Params::default();
    let moved = unit_disk().translate([0.7, 0.0, 0.0]).unwrap();
    let c = gamma(&moved, &p).unwrap();
    assert!((c.y_star[0] - 0.7).abs() < 1e-6);
    assert!(c.y_star[1].abs() < 1e-6);
    assert!((c.gamma - 2.0 * PI).abs() < 1e-5);
}

#[test]
fn beta_examples() {
    let p = Params::default();
    let b = beta(&unit_disk(), &p).unwrap();
    assert!(b.beta < 1e-7);
    assert!(!b.clamped);

    let b = beta(&square_pi(), &p).unwrap();
    assert!((b.beta_sq - SQUARE_BETA_SQ).abs() < 1e-4, "{}", b.beta_sq);
    assert!(b.residual <= 1e-6 * SQUARE_PERIMETER);

    let b = beta(&hexagon_pi(), &p).unwrap();
    assert!((b.beta_sq - HEX_BETA_SQ).abs() < 1e-4);
    assert!(b.residual <= 1e-6 * HEX_PERIMETER);
}

#[test]
fn oscillation_identity_at_node_level() {
    // ½∫|ν − w|² = ∫(1 − ν·w) is an algebraic identity for unit vectors
    let q = square_pi().boundary_quadrature(512).unwrap();
    let y = [0.3, 0.2, 0.0];
    let direct = oscillation(&q, y).unwrap();
    let mut half_sq = 0.0;
    for ((p, nu), w) in q.points.iter().zip(&q.normals).zip(&q.weights) {
        let d = point::sub(*p, y);
        let wv = point::scale(d, 1.0 / point::norm(d));
        let diff = point::sub(*nu, wv);
        half_sq += 0.5 * w * point::dot(diff, diff);
    }
    assert!((half_sq - direct).abs() < 1e-12 * direct.max(1.0));
}

#[test]
fn fraenkel_examples_with_grid_search_oracle() {
    let p = Params::default();
    let f = fraenkel(&unit_disk(), &p).unwrap();
    assert!(f.alpha < 1e-7);
    assert!(point::norm(f.y_alpha) < 1e-4);

    let hex = hexagon_pi();
    let f = fraenkel(&hex, &p).unwrap();
    assert!((f.alpha - HEX_ALPHA).abs() < 1e-4, "{}", f.alpha);
    assert!(point::norm(f.y_alpha) < 1e-4);
    // grid-search oracle over y ∈ [−0.2, 0.2]²: the origin wins
    let ball = |y: [f64; 2]| BallSpec::new([y[0], y[1], 0.0], 1.0).unwrap();
    let at_origin = hex.sym_diff_with_ball(&ball([0.0, 0.0]));
    for i in 0..9 {
        for j in 0..9 {
            let y = [-0.2 + 0.05 * i as f64, -0.2 + 0.05 * j as f64];
            let v = hex.sym_diff_with_ball(&ball(y));
            assert!(v >= at_origin - 1e-12);
        }
    }

    let f = fraenkel(&square_pi(), &p).unwrap();
    assert!((f.alpha - SQUARE_ALPHA).abs() < 1e-4);
    assert!(point::norm(f.y_alpha) < 1e-4);
}

#[test]
fn asymmetry_examples() {
    let p = Params::default();
    let a = asymmetry(&unit_disk(), &p).unwrap();
    assert!(a.asymmetry < 1e-6);

    let a = asymmetry(&hexagon_pi(), &p).unwrap();
    assert!((a.asymmetry - HEX_ASYMMETRY_AT_ORIGIN).abs() < 2e-3, "{}", a.asymmetry);
    assert!(point::norm(a.y_asymmetry) < 1e-3);
    assert!(a.asymmetry <= a.upper_bound + 1e-12);

    // square: the joint minimum may not exceed the decoupled upper bound
    let a = asymmetry(&square_pi(), &p).unwrap();
    let upper = SQUARE_ALPHA + (2.0 * SQUARE_BETA_SQ).sqrt();
    assert!(a.asymmetry <= upper + 1e-6, "{} vs {}", a.asymmetry, upper);
    assert!(a.upper_bound <= upper + 1e-6);
}

#[test]
fn ordering_beta_center_minimizes_oscillation() {
    let p = Params::default();
    for shape in [square_pi(), hexagon_pi()] {
        let (unit, _) = shape.rescale_to_unit_volume();
        let q = unit.boundary_quadrature(4096).unwrap();
        let b = beta(&unit, &p).unwrap();
        let a = asymmetry(&unit, &p).unwrap();
        let at_star = oscillation(&q, b.y_star).unwrap();
        let at_ya = oscillation(&q, a.y_asymmetry).unwrap();
        assert!(at_star <= at_ya + 1e-10);
        // A ≥ √2·β in the unit-volume gauge
        assert!(a.asymmetry >= 2f64.sqrt() * b.beta - 1e-8);
    }
}

#[test]
fn inequality_panel_square_and_hexagon() {
    let p = Params::default();
    let (rep, flags) = inequality_panel(&square_pi(), &p).unwrap();
    assert!(flags.center_converged);
    let a2d = rep.ratio_a2_d.unwrap();
    assert!((rep.asymmetry * rep.asymmetry / rep.deficit - a2d).abs() < 1e-12);
    // N-doubling stability within 2%
    let p2 = Params::with_quadrature_n(8192);
    let (rep2, _) = inequality_panel(&square_pi(), &p2).unwrap();
    assert!(rel_err(rep2.ratio_a2_d.unwrap(), a2d) < 0.02);
    assert!(rel_err(rep2.ratio_prop.unwrap(), rep.ratio_prop.unwrap()) < 0.02);

    let (hex, _) = inequality_panel(&hexagon_pi(), &p).unwrap();
    let b2d = hex.ratio_b2_d.unwrap();
    assert!((b2d - HEX_BETA_SQ / HEX_DEFICIT).abs() < 1e-3);
    assert!(b2d >= 1.0);
    assert!(functionals::assertion_failures(&hex).is_empty());
}

#[test]
fn inequality_panel_flags_ball_ratios_not_applicable() {
    let p = Params::default();
    let (rep, _) = inequality_panel(&unit_disk(), &p).unwrap();
    assert!(rep.ratio_a2_d.is_none());
    assert!(rep.ratio_b2_d.is_none());
    assert!(rep.ratio_prop.is_none());
}

#[test]
fn concavity_constant_value() {
    assert!((concavity_constant(2) - 0.022_097_086_912_079_61).abs() < 1e-15);
    assert!(concavity_constant(3) > 0.0);
}

#[test]
fn strong_poincare_spot_values() {
    let p = Params::default();
    let c = strong_poincare_check(&hexagon_pi(), &p).unwrap();
    assert!((c.lhs - HEX_BETA_SQ).abs() < 1e-4);
    assert!(rel_err(c.slack, HEX_SP_SLACK) < 0.10, "slack {}", c.slack);
    assert!(c.slack >= -1e-6);

    let c = strong_poincare_check(&square_pi(), &p).unwrap();
    assert!(rel_err(c.slack, SQUARE_SP_SLACK) < 0.10);
    // a = ½|EΔB₁| at the centered ball
    assert!((c.half_sym_diff - SQUARE_ALPHA / 2.0).abs() < 1e-6);
}

#[test]
fn annulus_gap_is_nonnegative_increasing_and_dominates_quadratic() {
    for n in [2usize, 3] {
        let w = point::unit_ball_volume(n);
        let cn = concavity_constant(n);
        let mut prev = 0.0;
        for k in 1..100 {
            let a = w * k as f64 / 100.0;
            let g = annulus_gap(n, a);
            assert!(g >= 0.0);
            assert!(g >= prev, "not increasing at a={a}");
            assert!(g >= 8.0 * n as f64 * cn / w * a * a - 1e-12);
            prev = g;
        }
    }
}

#[test]
fn center_stability_examples() {
    let p = Params::default();
    assert!(center_stability_check(&unit_disk(), 0.5, &p).unwrap() < 1e-6);

    let u = SphericalFunction::Fourier(Fourier::mode(3, 0.05).unwrap());
    let shape = normalize(&u).unwrap().shape();
    let y = center_stability_check(&shape, 0.5, &p).unwrap();
    assert!(y <= 0.01, "|y*| = {y}");

    // |y*| nonincreasing along t ↓ within 1e-4 noise
    let mut prev = f64::MAX;
    for t in [0.1, 0.05, 0.025] {
        let u = SphericalFunction::Fourier(Fourier::mode(2, t).unwrap());
        let shape = normalize(&u).unwrap().shape();
        let y = center_stability_check(&shape, 1.0, &p).unwrap();
        assert!(y <= prev + 1e-4);
        assert!(y <= 0.01);
        prev = y;
    }

    // grid-search oracle: the origin dominates the Riesz potential on a
    // coarse grid around it for the widest family member
    let u = SphericalFunction::Fourier(Fourier::mode(2, 0.1).unwrap());
    let shape = normalize(&u).unwrap().shape();
    let q = shape.boundary_quadrature(4096).unwrap();
    let at_origin = riesz_boundary(&q, point::ORIGIN).unwrap();
    for i in -2..=2 {
        for j in -2..=2 {
            let y = [0.05 * i as f64, 0.05 * j as f64, 0.0];
            assert!(riesz_boundary(&q, y).unwrap() <= at_origin + 1e-9);
        }
    }
}

#[test]
fn center_stability_rejects_far_sets() {
    let p = Params::default();
    // the square is not δ-close to the unit ball for δ = 0.1
    assert!(center_stability_check(&square_pi(), 0.1, &p).is_err());
}

#[test]
fn panel_invariance_under_translation_and_scaling() {
    let p = Params::default();
    let hex = hexagon_pi();
    let (base, _) = inequality_panel(&hex, &p).unwrap();
    let moved = hex.translate([0.7, -0.3, 0.0]).unwrap().scaled(2.5);
    let (m, _) = inequality_panel(&moved, &p).unwrap();
    assert!((base.deficit - m.deficit).abs() < 1e-8);
    assert!((base.alpha - m.alpha).abs() < 1e-8);
    assert!((base.beta - m.beta).abs() < 1e-8);
    assert!((base.asymmetry - m.asymmetry).abs() < 1e-8);
}

mod proptests {
    use super::*;
    use isoperim::geometry::Polygon;
    use proptest::prelude::*;

    fn star_polygon(radii: &[f64]) -> ShapeRep {
        let n = radii.len();
        let verts = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                [radii[i] * t.cos(), radii[i] * t.sin()]
            })
            .collect();
        ShapeRep::Polygon2D(Polygon::new(verts).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        // the panel's parameter-free facts hold on arbitrary star polygons
        #[test]
        fn panel_assertions_on_random_polygons(
            radii in prop::collection::vec(0.6f64..1.6, 8..20),
        ) {
            let shape = star_polygon(&radii);
            let params = Params::with_quadrature_n(2048);
            let (rep, _) = inequality_panel(&shape, &params).unwrap();
            prop_assert!(functionals::assertion_failures(&rep).is_empty(),
                "violations: {:?}", functionals::assertion_failures(&rep));
            prop_assert!(rep.deficit >= -1e-9);
            prop_assert!(rep.beta <= rep.asymmetry + 1e-10);
        }
    }
}

#[test]
fn three_dimensional_smoke_panel() {
    // slightly perturbed sphere: all indices finite and small
    let mut values = vec![0.0; 24 * 48];
    let g0 = SphereGrid::unit(24, 48);
    for i in 0..24 {
        for j in 0..48 {
            let z = g0.direction(i, j);
            values[i * 48 + j] = 0.03 * (z[2] * z[2] - 1.0 / 3.0);
        }
    }
    let shape = ShapeRep::RadialGraph3D(SphereGrid::new(24, 48, values).unwrap());
    let p = Params::default();
    let (rep, _) = inequality_panel(&shape, &p).unwrap();
    assert!(rep.deficit >= -1e-9);
    assert!(rep.deficit < 0.05);
    assert!(rep.alpha < 0.2);
    assert!(rep.asymmetry >= 2f64.sqrt() * rep.beta - 1e-6);
    assert!(rep.sp_lhs - rep.sp_rhs >= -1e-4);
}
