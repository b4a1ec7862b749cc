use std::sync::OnceLock;

use coxsys::congruence::{compose_images, congruence_image, in_h};
use coxsys::coxeter::{reduce, sign_support, CoxeterMatrix, Gen, Word, DEFAULT_ORBIT_CAP};
use coxsys::hypgeom::{build_hexagon, geodesic_distance, HexagonModel, Isometry};
use coxsys::numberfield::FieldContext;
use coxsys::tits::TitsRep;
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

fn rep4() -> &'static TitsRep {
    static R: OnceLock<TitsRep> = OnceLock::new();
    R.get_or_init(|| TitsRep::new(4).unwrap())
}

fn hexagon() -> &'static HexagonModel {
    static H: OnceLock<HexagonModel> = OnceLock::new();
    H.get_or_init(|| build_hexagon().unwrap())
}

fn word(max: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(0usize..6, 0..max)
}

fn point() -> impl Strategy<Value = Complex64> {
    (-5.0f64..5.0, 0.05f64..5.0).prop_map(|(x, y)| Complex64::new(x, y))
}

fn inverse(w: &[Gen]) -> Vec<Gen> {
    w.iter().rev().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_is_a_homomorphism(a in word(8), b in word(8)) {
        let r = rep4();
        let ab = Word::new([a.clone(), b.clone()].concat());
        prop_assert_eq!(r.rho(&ab), r.mul(&r.rho(&Word::new(a)), &r.rho(&Word::new(b))));
    }

    #[test]
    fn rho_preserves_the_form(a in word(10)) {
        let r = rep4();
        prop_assert!(r.preserves_form(&r.rho(&Word::new(a))));
    }

    #[test]
    fn reduction_keeps_the_element(a in word(10)) {
        let r = rep4();
        let m = CoxeterMatrix::w_k(4);
        let w = Word::new(a);
        let red = reduce(&w, &m, DEFAULT_ORBIT_CAP).unwrap();
        prop_assert!(red.word.len() <= w.len());
        prop_assert_eq!(red.word.len() % 2, w.len() % 2);
        prop_assert_eq!(r.rho(&red.word), r.rho(&w));
        // canonical forms are fixed points
        let again = reduce(&red.word, &m, DEFAULT_ORBIT_CAP).unwrap();
        prop_assert_eq!(again.word, red.word);
    }

    #[test]
    fn sign_matches_determinant(a in word(10)) {
        let r = rep4();
        let w = Word::new(a);
        let s = sign_support(&w, &CoxeterMatrix::w_k(4)).unwrap();
        let det = r.det(&r.rho(&w));
        let expected = r.ctx().from_int(s.sign);
        prop_assert_eq!(det, expected);
    }

    #[test]
    fn congruence_images_compose(a in word(6), b in word(6), m in 1u32..5) {
        let r = rep4();
        let ia = congruence_image(r, &Word::new(a.clone()), m).unwrap();
        let ib = congruence_image(r, &Word::new(b.clone()), m).unwrap();
        let iab = congruence_image(r, &Word::new([a, b].concat()), m).unwrap();
        prop_assert_eq!(compose_images(r, &ia, &ib), iab);
    }

    #[test]
    fn congruence_subgroup_is_normal(v in word(6)) {
        // (s1 s4)^3 reduces to the identity mod 3
        let r = rep4();
        let h = [0, 3].repeat(3);
        prop_assert!(in_h(r, &Word::new(h.clone()), 1).unwrap());
        let conj = [v.clone(), h, inverse(&v)].concat();
        prop_assert!(in_h(r, &Word::new(conj), 1).unwrap());
    }

    #[test]
    fn field_arithmetic_is_a_ring(a in prop::collection::vec(-20i64..20, 3), b in prop::collection::vec(-20i64..20, 3), c in prop::collection::vec(-20i64..20, 3)) {
        let ctx = FieldContext::new(7).unwrap();
        let el = |v: &Vec<i64>| ctx.element(v.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
        let (x, y, z) = (el(&a), el(&b), el(&c));
        prop_assert_eq!(ctx.mul(&x, &y), ctx.mul(&y, &x));
        prop_assert_eq!(ctx.mul(&x, &ctx.add(&y, &z)), ctx.add(&ctx.mul(&x, &y), &ctx.mul(&x, &z)));
        prop_assert_eq!(ctx.mul(&ctx.mul(&x, &y), &z), ctx.mul(&x, &ctx.mul(&y, &z)));
        // embeddings are ring maps
        let (ex, ey) = (ctx.embed_f64(&x, 0), ctx.embed_f64(&y, 0));
        let exy = ctx.embed_f64(&ctx.mul(&x, &y), 0);
        prop_assert!((exy - ex * ey).abs() <= 1e-9 * (1.0 + (ex * ey).abs()));
    }

    #[test]
    fn distance_is_a_metric(p in point(), q in point(), r in point()) {
        let d = |a, b| geodesic_distance(a, b).unwrap();
        prop_assert!((d(p, q) - d(q, p)).abs() < 1e-9);
        prop_assert!(d(p, p).abs() < 1e-7);
        prop_assert!(d(p, r) <= d(p, q) + d(q, r) + 1e-9);
    }

    #[test]
    fn isometries_preserve_distance(p in point(), q in point(), t in -2.0f64..2.0, alpha in 0.0f64..6.3, side in 0usize..6) {
        let g = Isometry::rotation(alpha).compose(&Isometry::dilation(t)).compose(&hexagon().reflections[side]);
        let d0 = geodesic_distance(p, q).unwrap();
        let d1 = geodesic_distance(g.apply(p), g.apply(q)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-7 * (1.0 + d0));
    }
}
