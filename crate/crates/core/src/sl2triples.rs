//! sl2-triples: Jacobson-Morozov completion, the ad_h grading, evenness and
//! sl2-module multiplicities of the adjoint representation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rat;
use crate::liealg::{kernel_subspace, restricted_kernel, MatrixLieAlgebra, SubspaceBasis};
use crate::{QMatrix, Rational};

/// `(f, h, e)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
#[derive(Clone, Debug)]
pub struct Sl2Triple {
    algebra: Arc<MatrixLieAlgebra>,
    pub f: QMatrix,
    pub h: QMatrix,
    pub e: QMatrix,
}

impl Sl2Triple {
    /// Checks membership and the bracket relations.
    pub fn new(algebra: Arc<MatrixLieAlgebra>, f: QMatrix, h: QMatrix, e: QMatrix) -> Result<Self> {
        for (name, x) in [("f", &f), ("h", &h), ("e", &e)] {
            if !algebra.contains(x) {
                return Err(Error::InvalidTriple(format!("{name} is not in the algebra")));
            }
        }
        let t = Sl2Triple { algebra, f, h, e };
        if !t.is_valid() {
            return Err(Error::InvalidTriple("bracket relations fail".into()));
        }
        Ok(t)
    }

    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.algebra
    }

    /// The three bracket relations hold and `e != 0`.
    pub fn is_valid(&self) -> bool {
        validate_triple(&self.f, &self.h, &self.e)
    }
}

/// Bracket relations of an sl2-triple with nonzero `e`.
pub fn validate_triple(f: &QMatrix, h: &QMatrix, e: &QMatrix) -> bool {
    !e.is_zero()
        && h.bracket(e) == e.scale(&rat(2))
        && h.bracket(f) == f.scale(&rat(-2))
        && e.bracket(f) == *h
}

fn check_nilpotent(x: &QMatrix) -> Result<()> {
    if x.pow(x.rows() as u32).is_zero() {
        Ok(())
    } else {
        Err(Error::NotNilpotent)
    }
}

/// Completes a nilpotent `e` to an sl2-triple.
///
/// Finds `z` with `ad_e^2 z = -2e` and sets `h = [e, z]`; then `f` is the
/// unique solution of `[e, f] = h`, `[h, f] = -2f`.
pub fn jm_complete(e: &QMatrix, g: &Arc<MatrixLieAlgebra>) -> Result<Sl2Triple> {
    let ec = g.coordinates(e)?;
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    check_nilpotent(e)?;
    let ad_e = g.adjoint_operator(e)?;
    let rhs: Vec<Rational> = ec.iter().map(|c| -c.clone() * rat(2)).collect();
    let z = (&ad_e * &ad_e).solve_linear(&rhs)?.particular;
    let h = g.element(&ad_e.apply(&z));
    let f = solve_partner(g, &ad_e, &h, -2, &h)?;
    Sl2Triple::new(g.clone(), f, h, e.clone())
}

/// Unique `y` with `ad_x y = target` and `[h, y] = weight * y`.
fn solve_partner(
    g: &MatrixLieAlgebra,
    ad_x: &QMatrix,
    h: &QMatrix,
    weight: i64,
    target: &QMatrix,
) -> Result<QMatrix> {
    let d = g.dim();
    let ad_h = g.adjoint_operator(h)?;
    let shifted = &ad_h - &QMatrix::identity(d).scale(&rat(weight));
    let stacked = QMatrix::from_fn(2 * d, d, |i, j| {
        if i < d {
            ad_x.get(i, j).clone()
        } else {
            shifted.get(i - d, j).clone()
        }
    });
    let mut rhs = g.coordinates(target)?;
    rhs.extend(std::iter::repeat_n(Rational::zero(), d));
    let sol = stacked.solve_linear(&rhs)?;
    Ok(g.element(&sol.particular))
}

/// Eigenspace decomposition `g = ⊕_j g_j` of `ad_h`.
#[derive(Clone, Debug)]
pub struct GradedDecomposition {
    spaces: BTreeMap<i32, SubspaceBasis>,
    offsets: BTreeMap<i32, usize>,
    to_graded: QMatrix,
}

impl GradedDecomposition {
    /// Weights with nonzero eigenspaces, ascending.
    pub fn weights(&self) -> Vec<i32> {
        self.spaces.keys().copied().collect()
    }

    pub fn space(&self, j: i32) -> Option<&SubspaceBasis> {
        self.spaces.get(&j)
    }

    pub fn dim(&self, j: i32) -> usize {
        self.spaces.get(&j).map_or(0, SubspaceBasis::dim)
    }

    pub fn max_weight(&self) -> i32 {
        self.spaces.keys().next_back().copied().unwrap_or(0)
    }

    /// Coordinates of `x` (in algebra coordinates) within `g_j`.
    pub fn graded_coords(&self, x: &[Rational], j: i32) -> Vec<Rational> {
        let Some(&off) = self.offsets.get(&j) else {
            return Vec::new();
        };
        let k = self.dim(j);
        (off..off + k)
            .map(|r| {
                self.to_graded
                    .row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Weight-`j` component of `x`, in algebra coordinates.
    pub fn component(&self, x: &[Rational], j: i32) -> Vec<Rational> {
        match self.spaces.get(&j) {
            None => vec![Rational::zero(); x.len()],
            Some(s) => s.combine_coords(&self.graded_coords(x, j)),
        }
    }

    /// Nonzero weight components of `x`, in algebra coordinates.
    pub fn components(&self, x: &[Rational]) -> BTreeMap<i32, Vec<Rational>> {
        self.spaces
            .keys()
            .filter_map(|&j| {
                let c = self.component(x, j);
                (!c.iter().all(Zero::is_zero)).then_some((j, c))
            })
            .collect()
    }
}

/// Grading by `ad_h` eigenvalues.
///
/// Scans integer eigenvalues `|j| <= 2(n-1)`; if they do not exhaust the
/// algebra, `ad_h` has non-integral weights.
pub fn ad_h_grading(t: &Sl2Triple) -> Result<GradedDecomposition> {
    let g = t.algebra();
    let d = g.dim();
    let ad_h = g.adjoint_operator(&t.h)?;
    let bound = 2 * (g.n() as i32 - 1);
    let mut spaces = BTreeMap::new();
    let mut total = 0;
    for j in -bound..=bound {
        if total == d {
            break;
        }
        let op = &ad_h - &QMatrix::identity(d).scale(&rat(j as i64));
        let s = kernel_subspace(g, &op)?;
        if !s.is_empty() {
            total += s.dim();
            spaces.insert(j, s);
        }
    }
    if total != d {
        return Err(Error::NonIntegralWeights);
    }
    let mut offsets = BTreeMap::new();
    let mut cols = Vec::with_capacity(d);
    for (&j, s) in &spaces {
        offsets.insert(j, cols.len());
        cols.extend(s.algebra_coords().iter().cloned());
    }
    let change = QMatrix::from_fn(d, d, |i, k| cols[k][i].clone());
    let to_graded = change.inverse().map_err(|_| Error::NonIntegralWeights)?;
    Ok(GradedDecomposition {
        spaces,
        offsets,
        to_graded,
    })
}

/// True if every `ad_h` weight is even.
pub fn is_even(t: &Sl2Triple) -> bool {
    ad_h_grading(t).is_ok_and(|gr| gr.weights().iter().all(|j| j % 2 == 0))
}

/// Multiplicities `n_j` of the irreducible sl2-modules of highest weight `j`
/// in the adjoint representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMultiplicities {
    /// Highest weight to multiplicity; weight 0 is always present.
    pub entries: BTreeMap<u32, usize>,
}

impl ModuleMultiplicities {
    pub fn get(&self, j: u32) -> usize {
        self.entries.get(&j).copied().unwrap_or(0)
    }

    /// `sum_j n_j (j + 1)`.
    pub fn total_dimension(&self) -> usize {
        self.entries.iter().map(|(&j, &n)| n * (j as usize + 1)).sum()
    }
}

/// `n_j = dim(ker ad_e ∩ g_j)` for `j >= 0`.
pub fn module_multiplicities(t: &Sl2Triple) -> Result<ModuleMultiplicities> {
    let g = t.algebra();
    let gr = ad_h_grading(t)?;
    let ad_e = g.adjoint_operator(&t.e)?;
    let mut entries = BTreeMap::new();
    entries.insert(0, 0);
    for j in gr.weights().into_iter().filter(|&j| j >= 0) {
        let k = restricted_kernel(g, &ad_e, gr.space(j).expect("weight present"))?;
        if k.dim() > 0 || j == 0 {
            entries.insert(j as u32, k.dim());
        }
    }
    Ok(ModuleMultiplicities { entries })
}

/// Principal triple of a classical algebra.
///
/// For `sl_n` this is `f` = ones on the subdiagonal, `h = diag(n-1, ..., 1-n)`,
/// `e` with entries `i(n-i)` on the superdiagonal. Otherwise `f` is the sum of
/// the `g_{-2}` basis vectors of a diagonal principal `h` (which must lie in the
/// algebra, as it does for the default forms) and `e` is solved for.
pub fn principal_triple(g: &Arc<MatrixLieAlgebra>) -> Result<Sl2Triple> {
    let n = g.n();
    let ni = n as i64;
    let weights: Vec<i64> = match g.family() {
        crate::liealg::Family::So if n.is_multiple_of(2) => {
            let m = ni / 2;
            (0..ni)
                .map(|i| if i < m { 2 * (m - 1 - i) } else { -2 * (i - m) })
                .collect()
        }
        _ => (0..ni).map(|i| ni - 1 - 2 * i).collect(),
    };
    let h = QMatrix::diagonal(&weights.iter().map(|&w| rat(w)).collect::<Vec<_>>());
    if g.family() == crate::liealg::Family::Sl {
        let f = QMatrix::from_fn(n, n, |i, j| rat((i == j + 1) as i64));
        let e = QMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                rat(j as i64 * (ni - j as i64))
            } else {
                rat(0)
            }
        });
        return Sl2Triple::new(g.clone(), f, h, e);
    }
    if !g.contains(&h) {
        return Err(Error::UnsupportedFamily(
            "principal triple needs a form for which the diagonal principal h lies in the algebra"
                .into(),
        ));
    }
    let d = g.dim();
    let ad_h = g.adjoint_operator(&h)?;
    let minus2 = kernel_subspace(g, &(&ad_h + &QMatrix::identity(d).scale(&rat(2))))?;
    let f = minus2.combine(n, &vec![rat(1); minus2.dim()]);
    let ad_f = g.adjoint_operator(&f)?;
    let e = solve_partner(g, &ad_f, &h, 2, &(-&h))?;
    Sl2Triple::new(g.clone(), f, h, e)
}

/// Nilpotent in Jordan form: one block per part, ones on the superdiagonal.
pub fn partition_nilpotent(partition: &[usize], n: usize) -> Result<QMatrix> {
    if partition.contains(&0) || partition.iter().sum::<usize>() != n {
        return Err(Error::BadPartition(format!("{partition:?} is not a partition of {n}")));
    }
    let mut m = QMatrix::zeros(n, n);
    let mut start = 0;
    for &p in partition {
        for i in start..start + p - 1 {
            m.set(i, i + 1, rat(1));
        }
        start += p;
    }
    Ok(m)
}

/// Partitions of `n` in reverse lexicographic order, parts non-increasing.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
