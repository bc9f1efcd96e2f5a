use holoattr::basin::{sphere_map, sphere_map_iterate_check};
use holoattr::cli::parse::parse_complex_str;
use holoattr::linalg::{c, re};
use holoattr::nonauto::{nonauto_orbit, sector_sets_membership, Component, MapSequence, SectorSetParams, SeqMap};
use holoattr::output::fmt_f64;
use holoattr::parabolic::directions::characteristic_residual;
use holoattr::parabolic::{characteristic_directions, make_nondegenerate, normalize, HomogeneousQuadratic};
use holoattr::stable::{graph_distance, local_stable_graph, GraphOptions};
use holoattr::{find_fixed_point, AutoChain, Classification, ElementaryMap, Mat2, MapSpec, NewtonOptions, Point2, PolyMap, C64};
use holoattr::poly::Poly1;
use proptest::prelude::*;

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn point(r: f64) -> impl Strategy<Value = Point2> {
    (cplx(r), cplx(r)).prop_map(|(x, y)| Point2::new(x, y))
}

fn step() -> impl Strategy<Value = ElementaryMap> {
    prop_oneof![
        prop::collection::vec(cplx(0.6), 1..4).prop_map(|v| ElementaryMap::ShearX(Poly1::new(v))),
        prop::collection::vec(cplx(0.6), 1..4).prop_map(|v| ElementaryMap::ShearY(Poly1::new(v))),
        (0.5f64..2.0, cplx(1.0), cplx(1.0)).prop_map(|(a, b, cc)| {
            let a = re(a);
            ElementaryMap::Linear(Mat2::new(a, b, cc, (b * cc + 1.0) / a))
        }),
        point(0.5).prop_map(ElementaryMap::Translation),
    ]
}

fn chain() -> impl Strategy<Value = AutoChain> {
    prop::collection::vec(step(), 1..4).prop_map(|s| AutoChain::new(s, true).unwrap())
}

fn divergence_free() -> impl Strategy<Value = HomogeneousQuadratic> {
    (cplx(1.0), cplx(1.0), cplx(1.0), cplx(1.0))
        .prop_map(|(p0, p2, q0, q2)| HomogeneousQuadratic::new([p0, -q2 * 2.0, p2], [q0, -p0 * 2.0, q2]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chain_round_trip(f in chain(), z in point(2.0)) {
        let w = f.evaluate(z);
        prop_assume!(w.is_ok());
        let w = w.unwrap();
        let back = f.inverse_evaluate(w).unwrap();
        let scale = w.max_abs().max(z.max_abs()).max(1.0);
        prop_assert!(back.dist(z) < 1e-10 * scale * scale, "{} vs {:?}", back.dist(z), scale);
    }

    #[test]
    fn volume_preserving_jacobian(f in chain(), z in point(1.0)) {
        let df = f.differential(z);
        let n = df.norm().max(1.0);
        prop_assert!((df.det() - re(1.0)).norm() < 1e-10 * n * n);
    }

    #[test]
    fn differential_matches_finite_differences(f in chain(), z in point(1.0)) {
        let h = 1e-5;
        let df = f.differential(z);
        let scale = df.max_abs().max(1.0);
        for (j, e) in [Point2::real(1.0, 0.0), Point2::real(0.0, 1.0)].into_iter().enumerate() {
            let plus = f.evaluate(Point2::new(z.x + e.x * h, z.y + e.y * h)).unwrap();
            let minus = f.evaluate(Point2::new(z.x - e.x * h, z.y - e.y * h)).unwrap();
            let fd = Point2::new((plus.x - minus.x) / (2.0 * h), (plus.y - minus.y) / (2.0 * h));
            prop_assert!(fd.dist(df.column(j)) < 1e-5 * scale);
        }
    }

    #[test]
    fn henon_saddle_eigenvalue_product(cc in -2.0f64..0.9) {
        let x = 1.0 + (1.0 - cc).sqrt();
        let f = AutoChain::henon(cc);
        let fp = find_fixed_point(&f, Point2::real(x + 0.05, x - 0.05), NewtonOptions::default()).unwrap();
        prop_assert_eq!(fp.classification, Classification::Saddle);
        prop_assert!((fp.eigenvalues[0] * fp.eigenvalues[1] - re(1.0)).norm() < 1e-8);
    }

    #[test]
    fn sphere_map_closed_form(z in (0.0f64..3.0, -3.0f64..3.0), m in 0u64..200) {
        let z = c(z.0, z.1);
        prop_assert!(sphere_map_iterate_check(z, m).unwrap() < 1e-12 * (1.0 + z.norm()));
        let w = sphere_map(m, z).unwrap();
        prop_assert!((sphere_map(1, w).unwrap() - sphere_map(m + 1, z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn sector_sets_never_ambiguous(
        eps in 0.01f64..0.5,
        frac in 0.01f64..0.99,
        extra in 0.1f64..3.0,
        rho in 0.001f64..0.1,
        z in point(3.0),
    ) {
        let p = SectorSetParams::new(eps + extra, eps, frac * eps * eps.sin(), rho).unwrap();
        prop_assert!(sector_sets_membership(&p, z).is_ok());
        let small = Point2::new(z.x * 0.001 * eps, z.y * 0.001 * eps);
        if small.norm() <= p.delta {
            prop_assert_eq!(sector_sets_membership(&p, small).unwrap(), Component::Ball);
        }
        let t = eps + (z.x.re.abs() / 3.0) * extra;
        prop_assert_eq!(sector_sets_membership(&p, Point2::real(t, 0.0)).unwrap(), Component::LxZero);
        prop_assert_eq!(sector_sets_membership(&p, Point2::real(0.0, t)).unwrap(), Component::ZeroxL);
        let theta = eps + (std::f64::consts::PI - eps) * (z.y.re.abs() / 3.0);
        let w = C64::from_polar((z.y.im.abs() / 3.0) * p.r, theta);
        let k = Point2::new(re(0.0), w - eps);
        prop_assert_eq!(sector_sets_membership(&p, k).unwrap(), Component::ZeroxK);
    }

    #[test]
    fn constant_sequence_is_autonomous(cc in -1.0f64..1.0, z in point(0.5), n in 1usize..30) {
        let f = AutoChain::henon(cc);
        let seq = MapSequence::constant(SeqMap::Spec(MapSpec::Automorphism(f.clone())));
        let orbit = nonauto_orbit(&seq, z, n).unwrap();
        let mut w = z;
        for (k, s) in orbit.states.iter().enumerate() {
            prop_assert_eq!(*s, w, "step {}", k);
            match f.evaluate(w) {
                Ok(v) => w = v,
                Err(_) => break,
            }
        }
    }

    #[test]
    fn fmt_f64_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn complex_literals_parse(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let s = format!("{a}{b:+}i");
        prop_assert_eq!(parse_complex_str(&s).unwrap(), c(a, b));
        prop_assert_eq!(parse_complex_str(&format!("{a:e}")).unwrap(), re(a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generic_quadratics_have_three_directions(p in prop::array::uniform3(cplx(1.0)), q in prop::array::uniform3(cplx(1.0))) {
        let p2 = HomogeneousQuadratic::new(p, q);
        let dirs = characteristic_directions(&p2);
        let count: usize = dirs.directions().iter().map(|d| d.multiplicity).sum();
        prop_assert_eq!(count, 3);
        for d in dirs.directions() {
            prop_assert!(characteristic_residual(&p2, d.direction, d.lambda) < 1e-10 * p2.norm().max(1.0));
        }
    }

    #[test]
    fn divergence_free_closure(p2 in divergence_free(), eps in 0.01f64..1.0) {
        prop_assert!(p2.divergence_defect() < 1e-12);
        let mut with_axis = p2.clone();
        with_axis.q[0] = re(0.0);
        let nd = make_nondegenerate(&with_axis, Point2::real(1.0, 0.0), eps).unwrap();
        prop_assert!(nd.divergence_defect() < 1e-12);
        let dirs = characteristic_directions(&p2);
        for d in dirs.directions().iter().filter(|d| !d.degenerate) {
            if let Ok(nf) = normalize(&p2, d) {
                let s = nf.quadratic.norm().max(1.0);
                prop_assert!(nf.quadratic.divergence_defect() < 1e-9 * s);
                prop_assert!((nf.quadratic.p[0] - re(1.0)).norm() < 1e-9 * s);
                prop_assert!(nf.quadratic.q[0].norm() < 1e-9 * s);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn graph_distance_symmetric(dc in -0.01f64..0.01) {
        let opts = GraphOptions { n_r: 4, n_theta: 8, ..GraphOptions::default() };
        let graph = |cc: f64| {
            let f = AutoChain::henon(cc);
            let fp = find_fixed_point(&f, Point2::real(1.5, 1.5), NewtonOptions::default()).unwrap();
            local_stable_graph(&f, &fp, opts).unwrap()
        };
        let g1 = graph(0.75);
        let g2 = graph(0.75 + dc);
        prop_assert_eq!(graph_distance(&g1, &g1).unwrap(), 0.0);
        let d12 = graph_distance(&g1, &g2).unwrap();
        prop_assert!((d12 - graph_distance(&g2, &g1).unwrap()).abs() <= 1e-15 * d12.max(1.0));
    }
}

#[test]
fn polymap_of_chain_agrees() {
    let f = AutoChain::henon(0.75);
    let p: PolyMap = f.to_polymap();
    let z = Point2::new(c(0.2, -0.1), c(0.4, 0.3));
    let a = f.evaluate(z).unwrap();
    let b = p.eval(z);
    assert!(a.dist(b) < 1e-14);
}
