use num_traits::{One, Zero};
use proptest::prelude::*;

use slodowy::exact::{
    bareiss_determinant, nilpotent_exp, nilpotent_log, parse_rational, poly_matrix_minor_gcd, rat, ratio,
    format_rational,
};
use slodowy::{Error, Poly, PolyMatrix, QMatrix, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

fn poly_strategy(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 0..=max_len).prop_map(Poly::new)
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(small_rational(), n * n).prop_map(move |d| QMatrix::new(n, n, d))
}

fn strictly_upper(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(small_rational(), n * n)
        .prop_map(move |d| QMatrix::from_fn(n, n, |i, j| if j > i { d[i * n + j].clone() } else { Rational::zero() }))
}

fn poly_matrix_strategy(n: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly_strategy(3), n * n).prop_map(move |d| PolyMatrix::new(n, n, d))
}

/// Leibniz expansion, independent of any elimination.
fn leibniz<T: Clone + Zero + One + std::ops::Neg<Output = T>>(m: &[Vec<T>]) -> T
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let n = m.len();
    let mut total = T::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut sign = true;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    sign = !sign;
                }
            }
        }
        let mut prod = T::one();
        for (i, &j) in p.iter().enumerate() {
            prod = &prod * &m[i][j];
        }
        total = total.clone() + if sign { prod } else { -prod };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn poly(c: &[i64]) -> Poly {
    Poly::new(c.iter().map(|&x| rat(x)).collect())
}

#[test]
fn rational_text_round_trip() {
    assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
    assert_eq!(format_rational(&rat(5)), "5");
    assert_eq!(parse_rational(" 10/-4 ").unwrap(), ratio(-5, 2));
    assert!(matches!(parse_rational("1/0"), Err(Error::Malformed(_))));
    assert!(matches!(parse_rational("x"), Err(Error::Malformed(_))));
}

#[test]
fn polynomial_gcd_and_division() {
    // (z-1)(z+2) and (z-1)(z-3)
    let a = &poly(&[-1, 1]) * &poly(&[2, 1]);
    let b = &poly(&[-1, 1]) * &poly(&[-3, 1]);
    assert_eq!(a.gcd(&b), poly(&[-1, 1]));
    let (q, r) = a.div_rem(&poly(&[-1, 1]));
    assert_eq!(q, poly(&[2, 1]));
    assert!(r.is_zero());
    assert_eq!(a.exact_div(&poly(&[5, 1])), None);
}

#[test]
fn frozen_inverse() {
    let m = QMatrix::from_rows(vec![vec![rat(2), rat(1)], vec![rat(7), rat(4)]]);
    let inv = QMatrix::from_rows(vec![vec![rat(4), rat(-1)], vec![rat(-7), rat(2)]]);
    assert_eq!(m.inverse().unwrap(), inv);
    let sing = QMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]);
    assert_eq!(sing.inverse(), Err(Error::Singular));
}

#[test]
fn frozen_minor_gcd() {
    // [[z, 0], [0, z^2]] has 2x2 minor z^3 and 1x1 minors z, z^2
    let m = PolyMatrix::from_rows(vec![vec![poly(&[0, 1]), Poly::zero()], vec![Poly::zero(), poly(&[0, 0, 1])]]);
    assert_eq!(poly_matrix_minor_gcd(&m, 1).gcd, poly(&[0, 1]));
    assert_eq!(poly_matrix_minor_gcd(&m, 2).gcd, poly(&[0, 0, 0, 1]));
    let unimodular = PolyMatrix::from_rows(vec![vec![Poly::one(), poly(&[0, 1])], vec![Poly::zero(), Poly::one()]]);
    let g = poly_matrix_minor_gcd(&unimodular, 1);
    assert!(g.gcd.is_unit_constant());
    assert_eq!(g.minors_checked, 1);
}

#[test]
fn exp_log_frozen() {
    // exp of the 3x3 shift is [[1,1,1/2],[0,1,1],[0,0,1]]
    let n = QMatrix::from_fn(3, 3, |i, j| if j == i + 1 { rat(1) } else { rat(0) });
    let e = QMatrix::from_rows(vec![
        vec![rat(1), rat(1), ratio(1, 2)],
        vec![rat(0), rat(1), rat(1)],
        vec![rat(0), rat(0), rat(1)],
    ]);
    assert_eq!(nilpotent_exp(&n).unwrap(), e);
    assert_eq!(nilpotent_log(&e).unwrap(), n);
    assert_eq!(nilpotent_exp(&QMatrix::identity(2)), Err(Error::NotNilpotent));
    assert_eq!(nilpotent_log(&QMatrix::identity(2).scale(&rat(2))), Err(Error::NotUnipotent));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(4), b in poly_strategy(4), c in poly_strategy(4)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
    }

    #[test]
    fn division_identity(a in poly_strategy(6), b in poly_strategy(3)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn gcd_divides_both(a in poly_strategy(4), b in poly_strategy(4), c in poly_strategy(2)) {
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y);
        prop_assume!(!g.is_zero());
        prop_assert!(x.exact_div(&g).is_some());
        prop_assert!(y.exact_div(&g).is_some());
        if !c.is_zero() {
            prop_assert!(g.exact_div(&c.monic()).is_some());
        }
    }

    #[test]
    fn determinant_matches_leibniz(m in matrix_strategy(4)) {
        prop_assert_eq!(m.determinant(), leibniz(&m.to_rows()));
    }

    #[test]
    fn bareiss_matches_leibniz(m in poly_matrix_strategy(3)) {
        prop_assert_eq!(bareiss_determinant(&m), leibniz(&m.to_rows()));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix_strategy(3), b in matrix_strategy(3)) {
        prop_assert_eq!((&a * &b).determinant(), a.determinant() * b.determinant());
    }

    #[test]
    fn inverse_or_singular(m in matrix_strategy(3)) {
        match m.inverse() {
            Ok(inv) => prop_assert_eq!(&m * &inv, QMatrix::identity(3)),
            Err(e) => {
                prop_assert_eq!(e, Error::Singular);
                prop_assert!(m.determinant().is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_annihilated(m in prop::collection::vec(small_rational(), 12)) {
        let m = QMatrix::new(3, 4, m);
        let ker = m.kernel_basis();
        prop_assert_eq!(ker.len() + m.rank(), 4);
        for v in &ker {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_reproduces_rhs(m in matrix_strategy(3), x in prop::collection::vec(small_rational(), 3)) {
        let b = m.apply(&x);
        let sol = m.solve_linear(&b).unwrap();
        prop_assert_eq!(m.apply(&sol.particular), b);
    }

    #[test]
    fn exp_log_inverse(x in strictly_upper(4)) {
        let ex = nilpotent_exp(&x).unwrap();
        prop_assert_eq!(nilpotent_log(&ex).unwrap(), x.clone());
        // exp(x) exp(-x) = 1
        prop_assert_eq!(&ex * &nilpotent_exp(&(-&x)).unwrap(), QMatrix::identity(4));
        // commuting case: exp(x + 2x) = exp(x) exp(2x)
        let two = x.scale(&rat(2));
        prop_assert_eq!(nilpotent_exp(&(&x + &two)).unwrap(), &ex * &nilpotent_exp(&two).unwrap());
    }
}
