//! Single-chart lambda-connections `λ d + A(z) dz` with polynomial
//! coefficients: gauge action, the oper condition, the Slodowy functor and
//! normalization to Slodowy normal form.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{bareiss_determinant, nilpotent_exp, nilpotent_log, poly_matrix_minor_gcd};
use crate::liealg::{MatrixLieAlgebra, SubspaceBasis};
use crate::sl2triples::GradedDecomposition;
use crate::slodowy::{ParabolicData, SlodowyData};
use crate::{Poly, PolyMatrix, QMatrix, Rational};

/// `λ d + A(z) dz` with `A` a `g`-valued polynomial.
#[derive(Clone, Debug)]
pub struct LambdaConnection {
    lambda: Rational,
    a: PolyMatrix,
    algebra: Arc<MatrixLieAlgebra>,
}

impl PartialEq for LambdaConnection {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda && self.a == other.a && *self.algebra == *other.algebra
    }
}

impl LambdaConnection {
    /// Checks that every coefficient of `A` lies in the algebra.
    pub fn new(lambda: Rational, a: PolyMatrix, algebra: Arc<MatrixLieAlgebra>) -> Result<Self> {
        let n = algebra.n();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "connection matrix is {}x{}, algebra acts on dimension {n}",
                a.rows(),
                a.cols()
            )));
        }
        for m in a.coefficients() {
            if !algebra.contains(&m) {
                return Err(Error::NotInAlgebra);
            }
        }
        Ok(LambdaConnection { lambda, a, algebra })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.a
    }

    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.algebra
    }

    /// Algebra coordinates of each `z`-coefficient of `A`.
    pub fn coefficient_coords(&self) -> Vec<Vec<Rational>> {
        self.a
            .coefficients()
            .iter()
            .map(|m| self.algebra.coordinates(m).expect("validated on construction"))
            .collect()
    }

    /// `A^T J + J A = 0` for every coefficient (trivially true without a form).
    pub fn preserves_form(&self) -> bool {
        self.a
            .coefficients()
            .iter()
            .all(|m| self.algebra.satisfies_defining_relation(m))
    }
}

/// Polynomial gauge `g(z) = l(z) exp(x(z))` with `l` invertible over `Q[z]`
/// and `x` nilpotent.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePoly {
    pub l: PolyMatrix,
    pub l_inv: PolyMatrix,
    pub x: PolyMatrix,
}

impl GaugePoly {
    pub fn identity(n: usize) -> Self {
        GaugePoly {
            l: PolyMatrix::identity(n),
            l_inv: PolyMatrix::identity(n),
            x: PolyMatrix::zeros(n, n),
        }
    }

    /// `exp(x)` for nilpotent `x`.
    pub fn unipotent(x: PolyMatrix) -> Result<Self> {
        nilpotent_exp(&x)?;
        let n = x.rows();
        Ok(GaugePoly {
            l: PolyMatrix::identity(n),
            l_inv: PolyMatrix::identity(n),
            x,
        })
    }

    /// `l` with its polynomial inverse.
    pub fn levi(l: PolyMatrix, l_inv: PolyMatrix) -> Result<Self> {
        let n = l.rows();
        if &l * &l_inv != PolyMatrix::identity(n) {
            return Err(Error::Singular);
        }
        Ok(GaugePoly {
            l,
            l_inv,
            x: PolyMatrix::zeros(n, n),
        })
    }

    /// `g = l exp(x)`.
    pub fn matrix(&self) -> PolyMatrix {
        &self.l * &nilpotent_exp(&self.x).expect("x is nilpotent")
    }

    /// `g^{-1} = exp(-x) l^{-1}`.
    pub fn inverse_matrix(&self) -> PolyMatrix {
        &nilpotent_exp(&(-&self.x)).expect("x is nilpotent") * &self.l_inv
    }
}

/// `A' = g^{-1} A g + λ g^{-1} g'` for an explicit pair `(g, g^{-1})`.
pub fn gauge_by_matrix(conn: &LambdaConnection, g: &PolyMatrix, g_inv: &PolyMatrix) -> Result<LambdaConnection> {
    let n = conn.algebra.n();
    if g.rows() != n || g_inv.rows() != n {
        return Err(Error::DimensionMismatch("gauge has the wrong size".into()));
    }
    let mut a = &(g_inv * &conn.a) * g;
    if !conn.lambda.is_zero() {
        let dg = g.derivative();
        if dg.degree().is_some() {
            let lam = Poly::constant(conn.lambda.clone());
            a = &a + &(g_inv * &dg).scale(&lam);
        }
    }
    LambdaConnection::new(conn.lambda.clone(), a, conn.algebra.clone())
}

/// Gauge action of a [`GaugePoly`].
pub fn gauge_transform(conn: &LambdaConnection, g: &GaugePoly) -> Result<LambdaConnection> {
    gauge_by_matrix(conn, &g.matrix(), &g.inverse_matrix())
}

/// `ξ · (λ, A) = (ξλ, ξA)`.
pub fn cstar_act(xi: &Rational, conn: &LambdaConnection) -> Result<LambdaConnection> {
    if xi.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let c = Poly::constant(xi.clone());
    LambdaConnection::new(conn.lambda.clone() * xi.clone(), conn.a.scale(&c), conn.algebra.clone())
}

/// Graded coordinates (per `g_j` basis) of the weight components of `A`.
fn graded_poly_coords(conn: &LambdaConnection, pd_grading: &GradedDecomposition, j: i32) -> Vec<Poly> {
    let k = pd_grading.dim(j);
    let per_degree: Vec<Vec<Rational>> = conn
        .coefficient_coords()
        .iter()
        .map(|c| pd_grading.graded_coords(c, j))
        .collect();
    (0..k)
        .map(|i| Poly::new(per_degree.iter().map(|v| v[i].clone()).collect()))
        .collect()
}

/// Weight-`j` component of `A` as a polynomial matrix.
pub fn weight_component(conn: &LambdaConnection, grading: &GradedDecomposition, j: i32) -> PolyMatrix {
    let g = &conn.algebra;
    let n = g.n();
    let mats: Vec<QMatrix> = conn
        .coefficient_coords()
        .iter()
        .map(|c| g.element(&grading.component(c, j)))
        .collect();
    PolyMatrix::from_coefficients(n, n, &mats)
}

/// Image of `A` in `g / p`, by negative weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    /// Coordinates of the weight-`j` component in the `g_j` basis.
    pub components: BTreeMap<i32, Vec<Poly>>,
}

impl SecondFundamentalForm {
    /// Negative weights with a nonzero component.
    pub fn support(&self) -> Vec<i32> {
        self.components
            .iter()
            .filter(|(_, v)| v.iter().any(|p| !p.is_zero()))
            .map(|(&j, _)| j)
            .collect()
    }
}

pub fn second_fundamental_form(conn: &LambdaConnection, pd: &ParabolicData) -> SecondFundamentalForm {
    let gr = pd.grading();
    let components = gr
        .weights()
        .into_iter()
        .filter(|&j| j < 0)
        .map(|j| (j, graded_poly_coords(conn, gr, j)))
        .collect();
    SecondFundamentalForm { components }
}

/// Outcome of the oper test with diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct OperCheck {
    pub is_oper: bool,
    /// Weights below -2 where `A` has a nonzero component.
    pub offending_weights: Vec<i32>,
    /// Monic gcd of the maximal minors of `y -> [y, A_{-2}(z)]`.
    pub minor_gcd: Option<Poly>,
    pub minors_checked: usize,
    /// A witness minor (rows, columns, value) when the gcd is not a unit: the
    /// first nonzero one, or a vanishing one if all minors vanish.
    pub failing_minor: Option<(Vec<usize>, Vec<usize>, Poly)>,
}

/// Oper test: no components below weight -2, and `A_{-2}(z)` lies in the
/// open Levi orbit at every point, detected by a constant maximal-minor gcd.
pub fn check_oper(conn: &LambdaConnection, pd: &ParabolicData) -> OperCheck {
    let sff = second_fundamental_form(conn, pd);
    let offending: Vec<i32> = sff.support().into_iter().filter(|&j| j < -2).collect();
    if !offending.is_empty() {
        return OperCheck {
            is_oper: false,
            offending_weights: offending,
            minor_gcd: None,
            minors_checked: 0,
            failing_minor: None,
        };
    }
    let gr = pd.grading();
    let g = pd.algebra();
    let a2 = weight_component(conn, gr, -2);
    let (Some(target), Some(g0)) = (gr.space(-2), gr.space(0)) else {
        return OperCheck {
            is_oper: false,
            offending_weights: Vec::new(),
            minor_gcd: None,
            minors_checked: 0,
            failing_minor: None,
        };
    };
    // column k: coordinates of [y_k, A_{-2}(z)] in the g_{-2} basis
    let degree = a2.degree().map_or(0, |d| d + 1);
    let mut tangent = PolyMatrix::zeros(target.dim(), g0.dim());
    for (k, y) in g0.vectors().iter().enumerate() {
        let yp = PolyMatrix::constant(y);
        let br = &(&yp * &a2) - &(&a2 * &yp);
        let per_degree: Vec<Vec<Rational>> = (0..degree)
            .map(|d| {
                let m = br.coefficient(d);
                target
                    .coordinates(g, &m)
                    .expect("bracket of weights 0 and -2 has weight -2")
            })
            .collect();
        for i in 0..target.dim() {
            tangent.set(i, k, Poly::new(per_degree.iter().map(|v| v[i].clone()).collect()));
        }
    }
    let mg = poly_matrix_minor_gcd(&tangent, target.dim());
    let ok = mg.gcd.is_unit_constant();
    OperCheck {
        is_oper: ok,
        offending_weights: Vec::new(),
        failing_minor: if ok { None } else { mg.witness },
        minor_gcd: Some(mg.gcd),
        minors_checked: mg.minors_checked,
    }
}

pub fn is_oper(conn: &LambdaConnection, pd: &ParabolicData) -> bool {
    check_oper(conn, pd).is_oper
}

/// Coefficients of a connection in Slodowy normal form
/// `λ d + (f + ψ_0 + q e + ψ̂_1 + sum_{m>1} ψ_m) dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlodowyCoefficients {
    pub lambda: Rational,
    /// Coordinates in the basis of `c`.
    pub psi0: Vec<Poly>,
    /// Coefficient of `e`.
    pub q: Poly,
    /// Exponent `m` to coordinates in `V̂_2` (for `m = 1`) or `V_{2m}`.
    pub psi: BTreeMap<u32, Vec<Poly>>,
}

impl SlodowyCoefficients {
    /// All-zero coefficients shaped for `sd`.
    pub fn zero(sd: &SlodowyData, lambda: Rational) -> Self {
        let psi = sd
            .highest_weight_spaces()
            .iter()
            .map(|(&m, s)| {
                let k = if m == 1 { sd.vhat2().dim() } else { s.dim() };
                (m, vec![Poly::zero(); k])
            })
            .collect();
        SlodowyCoefficients {
            lambda,
            psi0: vec![Poly::zero(); sd.centralizer().dim()],
            q: Poly::zero(),
            psi,
        }
    }

    /// Errors unless the shape matches `sd`.
    pub fn check_shape(&self, sd: &SlodowyData) -> Result<()> {
        let z = Self::zero(sd, self.lambda.clone());
        let same = self.psi0.len() == z.psi0.len()
            && self.psi.len() == z.psi.len()
            && self
                .psi
                .iter()
                .zip(&z.psi)
                .all(|((m1, a), (m2, b))| m1 == m2 && a.len() == b.len());
        if same {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("coefficients do not match the slice".into()))
        }
    }

    /// Every polynomial scaled by `c`, `λ` included.
    pub fn scale(&self, c: &Rational) -> Self {
        let s = |p: &Poly| p.scale(c);
        SlodowyCoefficients {
            lambda: self.lambda.clone() * c.clone(),
            psi0: self.psi0.iter().map(s).collect(),
            q: s(&self.q),
            psi: self.psi.iter().map(|(&m, v)| (m, v.iter().map(s).collect())).collect(),
        }
    }

    /// Flat list: `ψ_0`, `q`, then `ψ_m` by increasing `m`.
    pub fn flatten(&self) -> Vec<Poly> {
        let mut out = self.psi0.clone();
        out.push(self.q.clone());
        for v in self.psi.values() {
            out.extend(v.iter().cloned());
        }
        out
    }
}

/// Separates the `e`-coefficient from the `V̂_2` part.
pub fn split_quadratic(coeffs: &SlodowyCoefficients) -> (Poly, SlodowyCoefficients) {
    let mut rest = coeffs.clone();
    rest.q = Poly::zero();
    (coeffs.q.clone(), rest)
}

/// Inverse of [`split_quadratic`].
pub fn join_quadratic(q: &Poly, rest: &SlodowyCoefficients) -> SlodowyCoefficients {
    let mut out = rest.clone();
    out.q = &out.q + q;
    out
}

/// `λ d + (β f + slice element) dz`.
pub fn slodowy_functor_with_base(sd: &SlodowyData, coeffs: &SlodowyCoefficients, base: &Rational) -> Result<LambdaConnection> {
    coeffs.check_shape(sd)?;
    let g = sd.algebra();
    let t = sd.triple();
    let mut a = PolyMatrix::constant(&t.f.scale(base));
    let mut add = |p: &Poly, m: &QMatrix| {
        if !p.is_zero() {
            a = &a + &PolyMatrix::constant(m).map(|x| x * p);
        }
    };
    for (p, v) in coeffs.psi0.iter().zip(sd.centralizer().vectors()) {
        add(p, v);
    }
    add(&coeffs.q, &t.e);
    for (&m, ps) in &coeffs.psi {
        let basis = if m == 1 {
            sd.vhat2()
        } else {
            sd.highest_weight_space(m).expect("shape checked")
        };
        for (p, v) in ps.iter().zip(basis.vectors()) {
            add(p, v);
        }
    }
    LambdaConnection::new(coeffs.lambda.clone(), a, g.clone())
}

/// `λ d + (f + ψ_0 + q e + ψ̂ + ...) dz`.
pub fn slodowy_functor(sd: &SlodowyData, coeffs: &SlodowyCoefficients) -> Result<LambdaConnection> {
    slodowy_functor_with_base(sd, coeffs, &Rational::one())
}

/// Reads the coefficients of a connection already of the form `β f + V[z]`.
pub fn read_slice_coefficients(conn: &LambdaConnection, sd: &SlodowyData, base: &Rational) -> Result<SlodowyCoefficients> {
    let g = sd.algebra();
    let gr = sd.grading();
    let rest = &conn.a - &PolyMatrix::constant(&sd.triple().f.scale(base));
    let mut psi0_deg = Vec::new();
    let mut q_deg = Vec::new();
    let mut high_deg: BTreeMap<u32, Vec<Vec<Rational>>> = BTreeMap::new();
    for m in rest.coefficients() {
        let c = g.coordinates(&m).map_err(|_| Error::NotInSlicePreimage)?;
        let comps = gr.components(&c);
        if comps.keys().any(|&j| sd.slice_space(j).is_none()) {
            return Err(Error::NotInSlicePreimage);
        }
        let comp = |j: i32| comps.get(&j).cloned().unwrap_or_else(|| vec![Rational::zero(); g.dim()]);
        let in_space = |s: &SubspaceBasis, v: &[Rational]| {
            s.coords_of(v).map_err(|_| Error::NotInSlicePreimage)
        };
        psi0_deg.push(in_space(sd.centralizer(), &comp(0))?);
        for (&mm, s) in sd.highest_weight_spaces() {
            let cj = comp(2 * mm as i32);
            in_space(s, &cj)?;
            let v = if mm == 1 {
                let (q, vh) = sd.split_v2(&cj)?;
                q_deg.push(q);
                vh
            } else {
                s.coords_of(&cj)?
            };
            high_deg.entry(mm).or_default().push(v);
        }
    }
    let collect = |per_degree: &[Vec<Rational>], k: usize| -> Vec<Poly> {
        (0..k)
            .map(|i| Poly::new(per_degree.iter().map(|v| v[i].clone()).collect()))
            .collect()
    };
    let psi = sd
        .highest_weight_spaces()
        .iter()
        .map(|(&mm, s)| {
            let k = if mm == 1 { sd.vhat2().dim() } else { s.dim() };
            (mm, collect(high_deg.get(&mm).map_or(&[][..], |v| v), k))
        })
        .collect();
    Ok(SlodowyCoefficients {
        lambda: conn.lambda.clone(),
        psi0: collect(&psi0_deg, sd.centralizer().dim()),
        q: Poly::new(q_deg),
        psi,
    })
}

/// Which position normalization to attempt first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PositionHint {
    /// Try every supported class in turn.
    #[default]
    Auto,
    /// `A_{-2}` already equals `β f`.
    Normal,
    /// Constant diagonal gauge.
    Diagonal,
    /// Block gauge `diag(I, C(z))` for a two-step grading.
    TubeBlock,
}

/// Inverse of a polynomial matrix whose determinant is a nonzero constant.
pub fn poly_matrix_inverse(m: &PolyMatrix) -> Option<PolyMatrix> {
    let n = m.rows();
    let det = bareiss_determinant(m);
    if !det.is_unit_constant() {
        return None;
    }
    let inv_det = Rational::one() / det.coeff(0);
    let mut out = PolyMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = if n == 1 { Poly::one() } else { bareiss_determinant(&m.select(&rows, &cols)) };
            let sign = if (i + j) % 2 == 0 { inv_det.clone() } else { -inv_det.clone() };
            out.set(i, j, minor.scale(&sign));
        }
    }
    Some(out)
}

fn diagonal_scaling(h: &QMatrix, ratio: &Rational) -> Option<(QMatrix, QMatrix)> {
    let n = h.rows();
    if (0..n).any(|i| (0..n).any(|j| i != j && !h.get(i, j).is_zero())) {
        return None;
    }
    let ws: Vec<Rational> = (0..n).map(|i| h.get(i, i).clone()).collect();
    let min = ws.iter().min().cloned()?;
    let mut d = Vec::with_capacity(n);
    let mut dinv = Vec::with_capacity(n);
    for w in &ws {
        let k = (w.clone() - min.clone()) / Rational::from_integer(2.into());
        if !k.is_integer() {
            return None;
        }
        let k: i32 = k.to_integer().try_into().ok()?;
        // ratio^{-k}
        let p = num_traits::pow(ratio.clone(), k as usize);
        dinv.push(p.clone());
        d.push(Rational::one() / p);
    }
    Some((QMatrix::diagonal(&d), QMatrix::diagonal(&dinv)))
}

fn propagate_diagonal(a2: &QMatrix, f: &QMatrix, base: &Rational) -> Option<(QMatrix, QMatrix)> {
    let n = f.rows();
    for i in 0..n {
        for j in 0..n {
            if a2.get(i, j).is_zero() != f.get(i, j).is_zero() {
                return None;
            }
        }
    }
    // entry (a, b) forces d_b / d_a = β f_ab / A_ab
    let mut d: Vec<Option<Rational>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Rational::one());
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            let da = d[a].clone().expect("assigned");
            for b in 0..n {
                for (x, y, forward) in [(a, b, true), (b, a, false)] {
                    if f.get(x, y).is_zero() {
                        continue;
                    }
                    let r = base.clone() * f.get(x, y).clone() / a2.get(x, y).clone();
                    let want = if forward { da.clone() * r } else { da.clone() / r };
                    match &d[b] {
                        None => {
                            d[b] = Some(want);
                            stack.push(b);
                        }
                        Some(v) if *v != want => return None,
                        _ => {}
                    }
                }
            }
        }
    }
    let d: Vec<Rational> = d.into_iter().map(|x| x.expect("assigned")).collect();
    let dinv: Vec<Rational> = d.iter().map(|x| Rational::one() / x.clone()).collect();
    Some((QMatrix::diagonal(&d), QMatrix::diagonal(&dinv)))
}

fn tube_block(a2: &PolyMatrix, f: &QMatrix, h: &QMatrix, base: &Rational) -> Option<(PolyMatrix, PolyMatrix)> {
    let n = h.rows();
    if n % 2 == 1 {
        return None;
    }
    let p = n / 2;
    let expect = QMatrix::diagonal(
        &(0..n)
            .map(|i| if i < p { Rational::one() } else { -Rational::one() })
            .collect::<Vec<_>>(),
    );
    if *h != expect {
        return None;
    }
    let fb = f.submatrix(p, 0, p, p);
    let fb_inv = fb.inverse().ok()?;
    let c = a2.submatrix(p, 0, p, p);
    // M^{-1} C = β F  =>  M = C F^{-1} / β
    let scale = Poly::constant(Rational::one() / base.clone());
    let m = (&c * &PolyMatrix::constant(&fb_inv)).scale(&scale);
    let m_inv = poly_matrix_inverse(&m)?;
    let id = PolyMatrix::identity(p);
    let z = PolyMatrix::zeros(p, p);
    Some((
        PolyMatrix::from_blocks(&id, &z, &z, &m),
        PolyMatrix::from_blocks(&id, &z, &z, &m_inv),
    ))
}

/// Levi gauge bringing `A_{-2}` to `β f`.
fn position_gauge(
    conn: &LambdaConnection,
    sd: &SlodowyData,
    base: &Rational,
    hint: PositionHint,
) -> Result<(PolyMatrix, PolyMatrix, LambdaConnection)> {
    let gr = sd.grading();
    let t = sd.triple();
    let n = t.f.rows();
    let target = PolyMatrix::constant(&t.f.scale(base));
    let a2 = weight_component(conn, gr, -2);
    let accept = |l: PolyMatrix, l_inv: PolyMatrix| -> Option<(PolyMatrix, PolyMatrix, LambdaConnection)> {
        let c = gauge_by_matrix(conn, &l, &l_inv).ok()?;
        (weight_component(&c, gr, -2) == target).then_some((l, l_inv, c))
    };
    let id = || PolyMatrix::identity(n);
    let classes: &[PositionHint] = match hint {
        PositionHint::Auto => &[PositionHint::Normal, PositionHint::Diagonal, PositionHint::TubeBlock],
        PositionHint::Normal => &[PositionHint::Normal],
        PositionHint::Diagonal => &[PositionHint::Diagonal],
        PositionHint::TubeBlock => &[PositionHint::TubeBlock],
    };
    for class in classes {
        let found = match class {
            PositionHint::Normal => (a2 == target).then(|| (id(), id(), conn.clone())),
            PositionHint::Diagonal if a2.is_constant() => {
                let a2c = a2.coefficient(0);
                let scalar = scalar_multiple(&a2c, &t.f);
                let by_h = scalar.and_then(|c| {
                    let (d, dinv) = diagonal_scaling(&t.h, &(c / base.clone()))?;
                    accept(PolyMatrix::constant(&d), PolyMatrix::constant(&dinv))
                });
                by_h.or_else(|| {
                    let (d, dinv) = propagate_diagonal(&a2c, &t.f, base)?;
                    accept(PolyMatrix::constant(&d), PolyMatrix::constant(&dinv))
                })
            }
            PositionHint::TubeBlock => {
                tube_block(&a2, &t.f, &t.h, base).and_then(|(l, li)| accept(l, li))
            }
            _ => None,
        };
        if found.is_some() {
            return found.ok_or(Error::UnsupportedPosition);
        }
    }
    Err(Error::UnsupportedPosition)
}

fn scalar_multiple(a: &QMatrix, f: &QMatrix) -> Option<Rational> {
    let (i, j) = (0..f.rows())
        .flat_map(|i| (0..f.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !f.get(i, j).is_zero())?;
    let c = a.get(i, j).clone() / f.get(i, j).clone();
    (!c.is_zero() && f.scale(&c) == *a).then_some(c)
}

/// Normal form relative to `β f`: returns the gauge and the coefficients of
/// `g^{-1} A g + λ g^{-1} g' = β f + ψ_0 + q e + ...`.
pub fn normalize_relative(
    conn: &LambdaConnection,
    sd: &SlodowyData,
    pd: &ParabolicData,
    base: &Rational,
    hint: PositionHint,
) -> Result<(GaugePoly, SlodowyCoefficients)> {
    if base.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let check = check_oper(conn, pd);
    if !check.is_oper {
        let why = if !check.offending_weights.is_empty() {
            format!("nonzero components in weights {:?}", check.offending_weights)
        } else {
            "second fundamental form is not in the open orbit everywhere".to_string()
        };
        return Err(Error::NotAnOper(why));
    }
    let (l, l_inv, mut cur) = position_gauge(conn, sd, base, hint)?;
    let g = sd.algebra();
    let n = g.n();
    let gr = sd.grading();
    let mut u = PolyMatrix::identity(n);
    let inv_base = Rational::one() / base.clone();
    for d in (0..=gr.max_weight()).step_by(2) {
        let splitter = sd.splitter(d).expect("splitter for each even weight");
        let mut y_mats = Vec::new();
        let mut any = false;
        for c in cur.coefficient_coords() {
            let (_, y) = splitter.split(&gr.component(&c, d))?;
            any |= y.iter().any(|v| !v.is_zero());
            y_mats.push(g.element(&y).scale(&(-inv_base.clone())));
        }
        if !any {
            continue;
        }
        let x = PolyMatrix::from_coefficients(n, n, &y_mats);
        let ex = nilpotent_exp(&x)?;
        let emx = nilpotent_exp(&(-&x))?;
        cur = gauge_by_matrix(&cur, &ex, &emx)?;
        u = &u * &ex;
    }
    let coeffs = read_slice_coefficients(&cur, sd, base)?;
    let x = nilpotent_log(&u)?;
    Ok((GaugePoly { l, l_inv, x }, coeffs))
}

/// Slodowy normal form: the gauge and coefficients with
/// `g · conn = slodowy_functor(coefficients)`.
pub fn normalize(conn: &LambdaConnection, sd: &SlodowyData, pd: &ParabolicData) -> Result<(GaugePoly, SlodowyCoefficients)> {
    normalize_relative(conn, sd, pd, &Rational::one(), PositionHint::Auto)
}
