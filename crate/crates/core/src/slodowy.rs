//! Slodowy slice data, the Jacobson-Morozov parabolic, and the Lynch
//! decomposition `U × (f + V) -> f + p`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{nilpotent_exp, nilpotent_log, SpanSolver};
use crate::liealg::{kernel_subspace, restricted_kernel, MatrixLieAlgebra, SubspaceBasis};
use crate::sl2triples::{ad_h_grading, GradedDecomposition, Sl2Triple};
use crate::{QMatrix, Rational};

/// Splitting `g_d = V_d ⊕ ad_f(g_{d+2})` for one even weight `d >= 0`.
#[derive(Clone, Debug)]
pub struct WeightSplitter {
    v_dim: usize,
    upper: Option<SubspaceBasis>,
    solver: SpanSolver<Rational>,
}

impl WeightSplitter {
    /// Writes `a_d` (algebra coordinates, weight `d`) as `v + ad_f(y)`.
    ///
    /// Returns the coordinates of `v` in the `V_d` basis and `y` in algebra
    /// coordinates.
    pub fn split(&self, a_d: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let c = self.solver.solve(a_d).ok_or(Error::NotInSpan)?;
        let (v, rest) = c.split_at(self.v_dim);
        let y = match &self.upper {
            Some(u) => u.combine_coords(rest),
            None => vec![Rational::zero(); a_d.len()],
        };
        Ok((v.to_vec(), y))
    }
}

/// Centralizer `c`, highest-weight spaces `V_{2m}`, the split of `V_2`, and
/// the splitters used by the normalization sweep.
#[derive(Clone, Debug)]
pub struct SlodowyData {
    triple: Sl2Triple,
    grading: GradedDecomposition,
    centralizer: SubspaceBasis,
    highest: BTreeMap<u32, SubspaceBasis>,
    vhat2: SubspaceBasis,
    killing_f: Vec<Rational>,
    killing_fe: Rational,
    splitters: BTreeMap<i32, WeightSplitter>,
}

impl SlodowyData {
    pub fn triple(&self) -> &Sl2Triple {
        &self.triple
    }

    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        self.triple.algebra()
    }

    pub fn grading(&self) -> &GradedDecomposition {
        &self.grading
    }

    /// `c = ker ad_e ∩ g_0`.
    pub fn centralizer(&self) -> &SubspaceBasis {
        &self.centralizer
    }

    /// `V_{2m} = ker ad_e ∩ g_{2m}` for `m >= 1`, nonzero ones only.
    pub fn highest_weight_spaces(&self) -> &BTreeMap<u32, SubspaceBasis> {
        &self.highest
    }

    pub fn highest_weight_space(&self, m: u32) -> Option<&SubspaceBasis> {
        self.highest.get(&m)
    }

    /// Exponents `m_1 < ... < m_N` (with `m_1 = 1`).
    pub fn exponents(&self) -> Vec<u32> {
        self.highest.keys().copied().collect()
    }

    /// Kernel of `B(f, ·)` on `V_2`.
    pub fn vhat2(&self) -> &SubspaceBasis {
        &self.vhat2
    }

    /// Principal means `c = 0` and `V_2 = <e>`.
    pub fn is_principal(&self) -> bool {
        self.centralizer.is_empty() && self.vhat2.is_empty()
    }

    pub fn splitter(&self, d: i32) -> Option<&WeightSplitter> {
        self.splitters.get(&d)
    }

    /// Weight-`d` part of the slice: `c` for `d = 0`, else `V_d`.
    pub fn slice_space(&self, d: i32) -> Option<&SubspaceBasis> {
        if d == 0 {
            Some(&self.centralizer)
        } else if d > 0 && d % 2 == 0 {
            self.highest.get(&(d as u32 / 2))
        } else {
            None
        }
    }

    /// Splits `v ∈ V_2` (algebra coordinates) as `q e + v̂` using `B(f, ·)`.
    pub fn split_v2(&self, v: &[Rational]) -> Result<(Rational, Vec<Rational>)> {
        let g = self.algebra();
        let q = self
            .killing_f
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            / self.killing_fe.clone();
        let ec = g.coordinates(&self.triple.e)?;
        let rest: Vec<Rational> = v
            .iter()
            .zip(&ec)
            .map(|(a, b)| a.clone() - q.clone() * b.clone())
            .collect();
        Ok((q, self.vhat2.coords_of(&rest)?))
    }

    /// Whether `x` (a matrix) lies in `V = c ⊕ ⊕_m V_{2m}`.
    pub fn in_slice(&self, x: &QMatrix) -> bool {
        let g = self.algebra();
        let Ok(c) = g.coordinates(x) else {
            return false;
        };
        self.grading.components(&c).into_iter().all(|(j, comp)| {
            self.slice_space(j)
                .is_some_and(|s| s.coords_of(&comp).is_ok())
        })
    }
}

/// `ker ad_e` as a subspace.
pub fn centralizer_of_e(t: &Sl2Triple) -> Result<SubspaceBasis> {
    let g = t.algebra();
    kernel_subspace(g, &g.adjoint_operator(&t.e)?)
}

/// Slice data of an even triple.
pub fn slodowy_data(t: &Sl2Triple) -> Result<SlodowyData> {
    let g = t.algebra().clone();
    let grading = ad_h_grading(t)?;
    if grading.weights().iter().any(|j| j % 2 != 0) {
        return Err(Error::NotEven);
    }
    let ad_e = g.adjoint_operator(&t.e)?;
    let ad_f = g.adjoint_operator(&t.f)?;
    let mut highest = BTreeMap::new();
    let mut centralizer = SubspaceBasis::empty(&g);
    for j in grading.weights().into_iter().filter(|&j| j >= 0) {
        let k = restricted_kernel(&g, &ad_e, grading.space(j).expect("weight present"))?;
        if j == 0 {
            centralizer = k;
        } else if !k.is_empty() {
            highest.insert(j as u32 / 2, k);
        }
    }
    let v2 = highest.get(&1).ok_or(Error::NotEven)?;
    let killing_f: Vec<Rational> = g
        .basis()
        .iter()
        .map(|b| g.killing_form(&t.f, b))
        .collect::<Result<_>>()?;
    let killing_fe = g.killing_form(&t.f, &t.e)?;
    if killing_fe.is_zero() {
        return Err(Error::InvalidTriple("B(f, e) vanishes".into()));
    }
    let functional = QMatrix::from_rows(vec![killing_f.clone()]);
    let vhat2 = restricted_kernel(&g, &functional, v2)?;

    let mut splitters = BTreeMap::new();
    let top = grading.max_weight();
    for d in (0..=top).step_by(2) {
        let v = if d == 0 {
            centralizer.clone()
        } else {
            highest.get(&(d as u32 / 2)).cloned().unwrap_or_else(|| SubspaceBasis::empty(&g))
        };
        let upper = grading.space(d + 2).cloned();
        let mut cols: Vec<Vec<Rational>> = v.algebra_coords().to_vec();
        if let Some(u) = &upper {
            cols.extend(u.algebra_coords().iter().map(|y| ad_f.apply(y)));
        }
        let solver = SpanSolver::new(g.dim(), cols).ok_or_else(|| {
            Error::InvalidTriple(format!("V_{d} and ad_f(g_{}) are not complementary", d + 2))
        })?;
        if solver.dim() != grading.dim(d) {
            return Err(Error::InvalidTriple(format!("splitting of g_{d} is incomplete")));
        }
        splitters.insert(
            d,
            WeightSplitter {
                v_dim: v.dim(),
                upper,
                solver,
            },
        );
    }
    Ok(SlodowyData {
        triple: t.clone(),
        grading,
        centralizer,
        highest,
        vhat2,
        killing_f,
        killing_fe,
        splitters,
    })
}

/// Jacobson-Morozov parabolic `p = ⊕_{j>=0} g_j` and its filtrations.
#[derive(Clone, Debug)]
pub struct ParabolicData {
    algebra: Arc<MatrixLieAlgebra>,
    grading: GradedDecomposition,
    parabolic: SubspaceBasis,
    levi: SubspaceBasis,
    nilradical: SubspaceBasis,
    filtration: Vec<SubspaceBasis>,
    canonical: BTreeMap<i32, SubspaceBasis>,
}

impl ParabolicData {
    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.algebra
    }

    pub fn grading(&self) -> &GradedDecomposition {
        &self.grading
    }

    pub fn parabolic(&self) -> &SubspaceBasis {
        &self.parabolic
    }

    /// `l = g_0`.
    pub fn levi(&self) -> &SubspaceBasis {
        &self.levi
    }

    /// `u = ⊕_{j>0} g_j`.
    pub fn nilradical(&self) -> &SubspaceBasis {
        &self.nilradical
    }

    /// `u^i = ⊕_{j >= 2i} g_j` for `i = 1, 2, ...` (index 0 holds `u^1`).
    pub fn filtration(&self) -> &[SubspaceBasis] {
        &self.filtration
    }

    /// `g^j = ⊕_{k >= j} g_k` for every weight `j`.
    pub fn canonical_filtration(&self) -> &BTreeMap<i32, SubspaceBasis> {
        &self.canonical
    }

    pub fn contains(&self, x: &QMatrix) -> bool {
        self.parabolic.contains(&self.algebra, x)
    }
}

fn sum_of_spaces(g: &MatrixLieAlgebra, gr: &GradedDecomposition, keep: impl Fn(i32) -> bool) -> Result<SubspaceBasis> {
    let vectors = gr
        .weights()
        .into_iter()
        .filter(|&j| keep(j))
        .flat_map(|j| gr.space(j).expect("weight present").vectors().to_vec())
        .collect();
    SubspaceBasis::new(g, vectors)
}

pub fn parabolic_data(t: &Sl2Triple) -> Result<ParabolicData> {
    let g = t.algebra().clone();
    let gr = ad_h_grading(t)?;
    let parabolic = sum_of_spaces(&g, &gr, |j| j >= 0)?;
    let levi = sum_of_spaces(&g, &gr, |j| j == 0)?;
    let nilradical = sum_of_spaces(&g, &gr, |j| j > 0)?;
    let top = gr.max_weight();
    let mut filtration = Vec::new();
    let mut i = 1;
    while 2 * i <= top {
        filtration.push(sum_of_spaces(&g, &gr, |j| j >= 2 * i)?);
        i += 1;
    }
    let mut canonical = BTreeMap::new();
    for w in gr.weights() {
        canonical.insert(w, sum_of_spaces(&g, &gr, |j| j >= w)?);
    }
    Ok(ParabolicData {
        algebra: g,
        grading: gr,
        parabolic,
        levi,
        nilradical,
        filtration,
        canonical,
    })
}

/// Whether the Levi orbit of `x ∈ g_weight` is open, i.e. `y -> [y, x]`
/// maps `g_0` onto `g_weight`.
pub fn open_orbit_member(x: &QMatrix, pd: &ParabolicData, weight: i32) -> Result<bool> {
    let g = pd.algebra();
    let gr = pd.grading();
    let xc = g.coordinates(x)?;
    let target = gr.space(weight).ok_or(Error::WrongWeight(weight))?;
    if target.coords_of(&xc).is_err() {
        return Err(Error::WrongWeight(weight));
    }
    let Some(g0) = gr.space(0) else {
        return Ok(target.is_empty());
    };
    let cols: Vec<Vec<Rational>> = g0
        .vectors()
        .iter()
        .map(|y| target.coordinates(g, &y.bracket(x)))
        .collect::<Result<_>>()?;
    let m = QMatrix::from_fn(target.dim(), g0.dim(), |i, j| cols[j][i].clone());
    Ok(m.rank() == target.dim())
}

/// Lynch decomposition `a = Ad(u)(f + v)` with `u = exp(x)`, `x ∈ u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LynchParts {
    /// Weight components of `x = log(u)`, keyed by positive weight.
    pub x: BTreeMap<u32, QMatrix>,
    /// Slice element `v ∈ V`.
    pub v: QMatrix,
}

impl LynchParts {
    /// `x = sum of the graded parts`.
    pub fn log_u(&self, n: usize) -> QMatrix {
        self.x.values().fold(QMatrix::zeros(n, n), |acc, p| &acc + p)
    }
}

/// Inverse of [`lynch_compose`]: the unique `(u, v)` with
/// `Ad(u)(f + v) = a` for `a ∈ f + p`.
pub fn lynch_decompose(a: &QMatrix, sd: &SlodowyData) -> Result<LynchParts> {
    let g = sd.algebra();
    let n = g.n();
    let t = sd.triple();
    let gr = sd.grading();
    let shifted = g.coordinates(&(a - &t.f)).map_err(|_| Error::NotInSlicePreimage)?;
    if gr.components(&shifted).keys().any(|&j| j < 0) {
        return Err(Error::NotInSlicePreimage);
    }
    let mut cur = a.clone();
    let mut u = QMatrix::identity(n);
    for (&d, splitter) in sd.splitters.iter() {
        let coords = g.coordinates(&cur)?;
        let (_, y) = splitter.split(&gr.component(&coords, d))?;
        if y.iter().all(Zero::is_zero) {
            continue;
        }
        let x = -&g.element(&y);
        let ex = nilpotent_exp(&x)?;
        let emx = nilpotent_exp(&(-&x))?;
        cur = &(&emx * &cur) * &ex;
        u = &u * &ex;
    }
    let v = &cur - &t.f;
    debug_assert!(sd.in_slice(&v));
    let log = nilpotent_log(&u)?;
    let lc = g.coordinates(&log)?;
    let x = gr
        .components(&lc)
        .into_iter()
        .map(|(j, c)| (j as u32, g.element(&c)))
        .collect();
    Ok(LynchParts { x, v })
}

/// `Ad(exp(sum x))(f + v)`.
pub fn lynch_compose(parts: &LynchParts, sd: &SlodowyData) -> Result<QMatrix> {
    let g = sd.algebra();
    let gr = sd.grading();
    for (&w, x) in &parts.x {
        let space = gr.space(w as i32).ok_or(Error::WrongWeight(w as i32))?;
        if w == 0 || !space.contains(g, x) {
            return Err(Error::WrongWeight(w as i32));
        }
    }
    if !sd.in_slice(&parts.v) {
        return Err(Error::NotInSpan);
    }
    let x = parts.log_u(g.n());
    let u = nilpotent_exp(&x)?;
    let uinv = nilpotent_exp(&(-&x))?;
    Ok(&(&u * &(&sd.triple().f + &parts.v)) * &uinv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::sl2triples::{jm_complete, partition_nilpotent, principal_triple};

    fn sl(n: usize) -> Arc<MatrixLieAlgebra> {
        Arc::new(MatrixLieAlgebra::sl(n).unwrap())
    }

    #[test]
    fn principal_sl3_slice() {
        let t = principal_triple(&sl(3)).unwrap();
        let sd = slodowy_data(&t).unwrap();
        assert!(sd.is_principal());
        assert_eq!(sd.exponents(), vec![1, 2]);
        assert_eq!(sd.highest_weight_space(2).unwrap().vectors(), &[QMatrix::unit(3, 0, 2)]);
    }

    #[test]
    fn odd_triple_has_no_slice_data() {
        let t = jm_complete(&partition_nilpotent(&[2, 1], 3).unwrap(), &sl(3)).unwrap();
        assert_eq!(slodowy_data(&t).unwrap_err(), Error::NotEven);
    }

    #[test]
    fn e_is_in_the_open_orbit() {
        let t = principal_triple(&sl(4)).unwrap();
        let pd = parabolic_data(&t).unwrap();
        assert!(open_orbit_member(&t.e, &pd, 2).unwrap());
        // a single simple root vector is not
        assert!(!open_orbit_member(&QMatrix::unit(4, 0, 1), &pd, 2).unwrap());
        assert_eq!(open_orbit_member(&t.f, &pd, 2), Err(Error::WrongWeight(2)));
        assert_eq!(pd.filtration().len(), 3);
        assert_eq!(pd.levi().dim(), 3);
    }

    #[test]
    fn lynch_sl2() {
        // [[a, b], [1, -a]] = Ad(exp(a e))(f + (b + a^2) e)
        let t = principal_triple(&sl(2)).unwrap();
        let sd = slodowy_data(&t).unwrap();
        let a = QMatrix::from_rows(vec![vec![rat(3), rat(5)], vec![rat(1), rat(-3)]]);
        let parts = lynch_decompose(&a, &sd).unwrap();
        assert_eq!(parts.v, QMatrix::unit(2, 0, 1).scale(&rat(14)));
        assert_eq!(parts.x[&2], QMatrix::unit(2, 0, 1).scale(&rat(3)));
        assert_eq!(lynch_compose(&parts, &sd).unwrap(), a);
        assert_eq!(lynch_decompose(&QMatrix::unit(2, 0, 1), &sd), Err(Error::NotInSlicePreimage));
    }
}
