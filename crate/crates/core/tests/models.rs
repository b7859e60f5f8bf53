use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use proptest::prelude::*;

use slodowy::connection::{gauge_transform, LambdaConnection};
use slodowy::exact::{rat, ratio};
use slodowy::json::{ConnectionJson, ModelCoefficientsJson};
use slodowy::liealg::MatrixLieAlgebra;
use slodowy::models::{
    characteristic_coefficients, hitchin_map, hitchin_section, model_triple, ModelDescriptor, ModelFamily,
};
use slodowy::sl2triples::{module_multiplicities, principal_triple};
use slodowy::slodowy::{parabolic_data, slodowy_data};
use slodowy::suites::{hitchin_suite, random_model_coefficients, random_unipotent_gauge, rng_from_seed};
use slodowy::{Error, Poly, PolyMatrix, QMatrix, Rational};

fn computed(fam: ModelFamily, n: usize, k: Option<usize>) -> BTreeMap<u32, usize> {
    let t = model_triple(&ModelDescriptor::new(fam, n, k).unwrap()).unwrap();
    module_multiplicities(&t)
        .unwrap()
        .entries
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .collect()
}

fn pairs(n0: usize, n2: usize) -> BTreeMap<u32, usize> {
    [(0, n0), (2, n2)].into_iter().filter(|&(_, c)| c > 0).collect()
}

#[test]
fn tube_rows_match_the_reference_values() {
    // (n, n_0, n_2) as tabulated
    for (n, n0, n2) in [(1, 0, 1), (2, 3, 4), (3, 8, 9)] {
        assert_eq!(computed(ModelFamily::TubeSl, n, None), pairs(n0, n2), "tube_sl {n}");
    }
    for (n, n0, n2) in [(1, 0, 1), (2, 1, 3), (3, 3, 6)] {
        assert_eq!(computed(ModelFamily::TubeSp, n, None), pairs(n0, n2), "tube_sp {n}");
    }
    for (n, n0, n2) in [(1, 3, 1), (2, 10, 6)] {
        assert_eq!(computed(ModelFamily::TubeSo, n, None), pairs(n0, n2), "tube_so4n {n}");
    }
}

/// The isotropic-line rows, as computed. The tabulated `n_0 = (n-2)(n-3)/2`
/// is incompatible with `dim so_n = n_0 + 3 n_2` once `n >= 4`; the values
/// here satisfy that count.
#[test]
fn isotropic_line_rows() {
    for (n, n0, n2) in [(3, 0, 1), (4, 0, 2), (5, 1, 3), (6, 3, 4), (7, 6, 5), (8, 10, 6), (9, 15, 7)] {
        assert_eq!(computed(ModelFamily::SoLine, n, None), pairs(n0, n2), "so_{n}");
        assert_eq!(n0 + 3 * n2, n * (n - 1) / 2);
    }
}

#[test]
fn partial_flag_rows() {
    let want: [((usize, usize), &[(u32, usize)]); 4] = [
        ((5, 1), &[(0, 1), (2, 3)]),
        ((7, 1), &[(0, 6), (2, 5)]),
        ((7, 2), &[(0, 1), (2, 1), (4, 2), (6, 1)]),
        ((9, 2), &[(0, 6), (2, 1), (4, 4), (6, 1)]),
    ];
    for ((n, k), w) in want {
        let w: BTreeMap<u32, usize> = w.iter().copied().collect();
        // each W_{j} has dimension j + 1
        assert_eq!(w.iter().map(|(&j, &c)| (j as usize + 1) * c).sum::<usize>(), n * (n - 1) / 2);
        assert_eq!(computed(ModelFamily::SoFlag, n, Some(k)), w, "so_{n} k={k}");
    }
}

#[test]
fn model_triples_are_valid_and_even() {
    for fam in ModelFamily::ALL {
        let (n, k) = match fam {
            ModelFamily::SoFlag => (7, Some(1)),
            ModelFamily::SoLine => (5, None),
            _ => (2, None),
        };
        let d = ModelDescriptor::new(fam, n, k).unwrap();
        let t = model_triple(&d).unwrap();
        assert!(t.is_valid());
        assert_eq!(t.f.rows(), d.matrix_size());
        assert!(slodowy_data(&t).is_ok());
        assert_eq!(ModelFamily::parse(fam.as_str()).unwrap(), fam);
    }
    assert!(ModelDescriptor::new(ModelFamily::SoFlag, 5, None).is_err());
    assert!(ModelDescriptor::new(ModelFamily::SoFlag, 5, Some(3)).is_err());
    assert!(ModelFamily::parse("tube_e7").is_err());
}

#[test]
fn sl2_hitchin_is_minus_q() {
    let g = Arc::new(MatrixLieAlgebra::sl(2).unwrap());
    let sd = slodowy_data(&principal_triple(&g).unwrap()).unwrap();
    let q = Poly::new(vec![rat(1), rat(-2), ratio(1, 3)]);
    let conn = hitchin_section(&sd, std::slice::from_ref(&q)).unwrap();
    assert_eq!(hitchin_map(&conn).unwrap(), vec![-q]);
}

#[test]
fn hitchin_needs_a_higgs_field() {
    let g = Arc::new(MatrixLieAlgebra::sl(2).unwrap());
    let f = principal_triple(&g).unwrap().f;
    let conn = LambdaConnection::new(rat(1), PolyMatrix::constant(&f), g).unwrap();
    assert_eq!(hitchin_map(&conn).unwrap_err(), Error::LambdaNonzero);
}

#[test]
fn hitchin_section_needs_a_principal_triple() {
    let t = model_triple(&ModelDescriptor::new(ModelFamily::TubeSl, 2, None).unwrap()).unwrap();
    let sd = slodowy_data(&t).unwrap();
    assert_eq!(hitchin_section(&sd, &[]).unwrap_err(), Error::NotPrincipal);
}

#[test]
fn hitchin_suites_small_ranks() {
    for n in 2..=4 {
        let g = Arc::new(MatrixLieAlgebra::sl(n).unwrap());
        let sd = slodowy_data(&principal_triple(&g).unwrap()).unwrap();
        let out = hitchin_suite(&sd, 5, 31, 3);
        assert!(out.all_passed(), "sl_{n}: {:?}", out.failures);
    }
}

#[test]
fn model_coefficients_json_round_trip() {
    let mut rng = rng_from_seed(2);
    for fam in ModelFamily::ALL {
        let (n, k) = match fam {
            ModelFamily::SoFlag => (9, Some(2)),
            ModelFamily::SoLine => (5, None),
            _ => (2, None),
        };
        let d = ModelDescriptor::new(fam, n, k).unwrap();
        let c = random_model_coefficients(&d, &mut rng, 2);
        let text = serde_json::to_string(&ModelCoefficientsJson::from_model(&c)).unwrap();
        let back: ModelCoefficientsJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_model().unwrap(), c);
        let conn = slodowy::models::build_model_oper(&d, ratio(1, 2), &c).unwrap();
        let cj: ConnectionJson = serde_json::from_str(&serde_json::to_string(&ConnectionJson::from_connection(&conn)).unwrap()).unwrap();
        assert_eq!(cj.to_connection(None).unwrap(), conn);
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `det(tI - A) = t^n + sum c_i t^i` checked at sample points `t`.
    #[test]
    fn characteristic_polynomial_matches_determinants(entries in prop::collection::vec(small_rational(), 16)) {
        let a = QMatrix::new(4, 4, entries);
        let c = characteristic_coefficients(&PolyMatrix::constant(&a));
        for t in -2i64..=2 {
            let t = rat(t);
            let tm = &QMatrix::identity(4).scale(&t) - &a;
            let mut val = num_traits::pow(t.clone(), 4);
            for (i, ci) in c.iter().enumerate() {
                val += ci.coeff(0) * num_traits::pow(t.clone(), i);
            }
            prop_assert_eq!(tm.determinant(), val);
        }
    }

    /// Constant-in-`z` conjugation at `λ = 0` leaves the invariants alone,
    /// and so does a `z`-dependent unipotent gauge.
    #[test]
    fn hitchin_map_is_conjugation_invariant(seed in any::<u64>(), n in 2usize..=4) {
        let g = Arc::new(MatrixLieAlgebra::sl(n).unwrap());
        let t = principal_triple(&g).unwrap();
        let sd = slodowy_data(&t).unwrap();
        let pd = parabolic_data(&t).unwrap();
        let mut rng = rng_from_seed(seed);
        let qs: Vec<Poly> = (0..n - 1).map(|_| slodowy::suites::random_poly(&mut rng, 2)).collect();
        let conn = hitchin_section(&sd, &qs).unwrap();
        let p = hitchin_map(&conn).unwrap();
        let moved = gauge_transform(&conn, &random_unipotent_gauge(&pd, &mut rng, 2)).unwrap();
        prop_assert_eq!(hitchin_map(&moved).unwrap(), p.clone());
        let d: Vec<Rational> = (1..=n as i64).map(rat).collect();
        let dm = PolyMatrix::constant(&QMatrix::diagonal(&d));
        let dinv = PolyMatrix::constant(&QMatrix::diagonal(&d.iter().map(|x| Rational::one() / x).collect::<Vec<_>>()));
        let conj = slodowy::connection::gauge_by_matrix(&conn, &dm, &dinv).unwrap();
        prop_assert_eq!(hitchin_map(&conj).unwrap(), p);
    }
}
