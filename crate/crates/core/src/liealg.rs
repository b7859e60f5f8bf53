//! Matrix Lie algebras over Q: the classical families with an arbitrary
//! invariant form, and user-supplied bases.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, SpanSolver};
use crate::{QMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Sl,
    So,
    Sp,
    Custom,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Family::Sl),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            "custom" => Ok(Family::Custom),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A Lie subalgebra of `gl_n(Q)` with a fixed ordered basis.
#[derive(Clone, Debug)]
pub struct MatrixLieAlgebra {
    family: Family,
    n: usize,
    form: Option<QMatrix>,
    basis: Vec<QMatrix>,
    solver: SpanSolver<Rational>,
}

impl PartialEq for MatrixLieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.n == other.n
            && self.form == other.form
            && self.basis == other.basis
    }
}

/// Antidiagonal matrix of ones.
pub fn antidiagonal(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { rat(1) } else { rat(0) })
}

/// Default symplectic form `[[0, K], [-K, 0]]` with `K` antidiagonal.
pub fn standard_symplectic(n: usize) -> QMatrix {
    let m = n / 2;
    let k = antidiagonal(m);
    QMatrix::from_blocks(&QMatrix::zeros(m, m), &k, &(-&k), &QMatrix::zeros(m, m))
}

impl MatrixLieAlgebra {
    /// `sl`, `so` or `sp` of size `n` with the default form.
    pub fn classical(family: Family, n: usize) -> Result<Self> {
        match family {
            Family::Sl => Self::sl(n),
            Family::So => Self::so(n),
            Family::Sp => Self::sp(n),
            Family::Custom => Err(Error::UnsupportedFamily(
                "custom algebras need an explicit basis".into(),
            )),
        }
    }

    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedFamily(format!("sl_{n}")));
        }
        let mut basis = Vec::with_capacity(n * n - 1);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(QMatrix::unit(n, i, j));
                }
            }
        }
        for i in 0..n - 1 {
            let mut h = QMatrix::unit(n, i, i);
            h.set(i + 1, i + 1, rat(-1));
            basis.push(h);
        }
        Self::assemble(Family::Sl, n, None, basis)
    }

    /// `so_n` for the antidiagonal form.
    pub fn so(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedFamily(format!("so_{n}")));
        }
        Self::so_with_form(antidiagonal(n))
    }

    /// `sp_n` for `[[0, K], [-K, 0]]`.
    pub fn sp(n: usize) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::UnsupportedFamily(format!("sp_{n}")));
        }
        Self::sp_with_form(standard_symplectic(n))
    }

    /// `{x : x^T J + J x = 0}` for a symmetric invertible `J`.
    pub fn so_with_form(j: QMatrix) -> Result<Self> {
        Self::with_form(Family::So, j)
    }

    /// `{x : x^T J + J x = 0}` for an antisymmetric invertible `J`.
    pub fn sp_with_form(j: QMatrix) -> Result<Self> {
        Self::with_form(Family::Sp, j)
    }

    fn with_form(family: Family, j: QMatrix) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::Malformed("form must be square".into()));
        }
        let n = j.rows();
        let jt = j.transpose();
        let symmetric = match family {
            Family::So => true,
            Family::Sp => false,
            _ => unreachable!(),
        };
        let ok = if symmetric { jt == j } else { jt == -&j };
        if !ok {
            return Err(Error::Malformed(format!(
                "form for {family} must be {}",
                if symmetric { "symmetric" } else { "antisymmetric" }
            )));
        }
        let jinv = j.inverse().map_err(|_| Error::Malformed("form is singular".into()))?;
        // x = J^{-1} M with M antisymmetric (so) or symmetric (sp)
        let mut basis = Vec::new();
        for a in 0..n {
            for b in a..n {
                let m = if symmetric {
                    if a == b {
                        continue;
                    }
                    &QMatrix::unit(n, a, b) - &QMatrix::unit(n, b, a)
                } else {
                    &QMatrix::unit(n, a, b) + &QMatrix::unit(n, b, a)
                };
                basis.push(&jinv * &m);
            }
        }
        Self::assemble(family, n, Some(j), basis)
    }

    /// Algebra spanned by an explicit basis; checks independence and closure.
    pub fn custom(basis: Vec<QMatrix>) -> Result<Self> {
        let n = basis.first().map(QMatrix::rows).ok_or_else(|| {
            Error::Malformed("custom algebra needs a nonempty basis".into())
        })?;
        if basis.iter().any(|b| b.rows() != n || b.cols() != n) {
            return Err(Error::Malformed("basis matrices must be square of equal size".into()));
        }
        let g = Self::assemble(Family::Custom, n, None, basis)?;
        for a in &g.basis {
            for b in &g.basis {
                if !g.contains(&a.bracket(b)) {
                    return Err(Error::Malformed("basis is not closed under the bracket".into()));
                }
            }
        }
        Ok(g)
    }

    fn assemble(family: Family, n: usize, form: Option<QMatrix>, basis: Vec<QMatrix>) -> Result<Self> {
        let flat = basis.iter().map(|b| b.data().to_vec()).collect();
        let solver = SpanSolver::new(n * n, flat)
            .ok_or_else(|| Error::Malformed("basis is linearly dependent".into()))?;
        Ok(MatrixLieAlgebra {
            family,
            n,
            form,
            basis,
            solver,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Size of the defining matrices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    /// Invariant bilinear form `J` for `so`/`sp`.
    pub fn form(&self) -> Option<&QMatrix> {
        self.form.as_ref()
    }

    /// True if the form is the default one for the family.
    pub fn has_default_form(&self) -> bool {
        match (self.family, &self.form) {
            (Family::So, Some(j)) => *j == antidiagonal(self.n),
            (Family::Sp, Some(j)) => *j == standard_symplectic(self.n),
            (Family::Sl, None) => true,
            _ => false,
        }
    }

    pub fn contains(&self, x: &QMatrix) -> bool {
        x.rows() == self.n && x.cols() == self.n && self.solver.solve(x.data()).is_some()
    }

    pub fn coordinates(&self, x: &QMatrix) -> Result<Vec<Rational>> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} matrix, got {1}x{2}",
                self.n,
                x.rows(),
                x.cols()
            )));
        }
        self.solver.solve(x.data()).ok_or(Error::NotInAlgebra)
    }

    /// `sum_i c_i b_i`.
    pub fn element(&self, coords: &[Rational]) -> QMatrix {
        assert_eq!(coords.len(), self.dim());
        QMatrix::new(self.n, self.n, self.solver.combine(coords))
    }

    /// Matrix of `ad_x` in the algebra basis (column `j` is `[x, b_j]`).
    pub fn adjoint_operator(&self, x: &QMatrix) -> Result<QMatrix> {
        self.coordinates(x)?;
        let cols: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|b| self.coordinates(&x.bracket(b)).expect("algebra is closed"))
            .collect();
        Ok(QMatrix::from_fn(self.dim(), self.dim(), |i, j| cols[j][i].clone()))
    }

    /// Killing form `tr(ad_x ad_y)`.
    pub fn killing_form(&self, x: &QMatrix, y: &QMatrix) -> Result<Rational> {
        let ax = self.adjoint_operator(x)?;
        let ay = self.adjoint_operator(y)?;
        Ok((&ax * &ay).trace())
    }

    /// Trace form `tr(xy)` of the defining representation.
    pub fn trace_form(&self, x: &QMatrix, y: &QMatrix) -> Rational {
        (x * y).trace()
    }

    /// Checks `x^T J + J x = 0` (or tracelessness for `sl`).
    pub fn satisfies_defining_relation(&self, x: &QMatrix) -> bool {
        match (&self.form, self.family) {
            (Some(j), _) => (&(&x.transpose() * j) + &(j * x)).is_zero(),
            (None, Family::Sl) => x.trace().is_zero(),
            (None, _) => self.contains(x),
        }
    }
}

/// Commutator of two matrices.
pub fn bracket(x: &QMatrix, y: &QMatrix) -> QMatrix {
    x.bracket(y)
}

/// Scales `x` so its first nonzero entry (row-major) is one.
pub fn normalize_leading_entry(x: &QMatrix) -> QMatrix {
    match x.data().iter().find(|a| !a.is_zero()) {
        None => x.clone(),
        Some(a) if a.is_one() => x.clone(),
        Some(a) => x.scale(&(Rational::one() / a.clone())),
    }
}

/// Linearly independent family of elements of a Lie algebra.
///
/// Stores the matrices together with their algebra coordinates; coordinate
/// queries take algebra coordinates or matrices.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    vectors: Vec<QMatrix>,
    solver: SpanSolver<Rational>,
}

impl SubspaceBasis {
    pub fn new(g: &MatrixLieAlgebra, vectors: Vec<QMatrix>) -> Result<Self> {
        let coords = vectors
            .iter()
            .map(|v| g.coordinates(v))
            .collect::<Result<Vec<_>>>()?;
        let solver = SpanSolver::new(g.dim(), coords)
            .ok_or_else(|| Error::Malformed("subspace vectors are dependent".into()))?;
        Ok(SubspaceBasis { vectors, solver })
    }

    /// Subspace spanned by vectors given in algebra coordinates, each scaled
    /// so its leading matrix entry is one.
    pub fn from_coords(g: &MatrixLieAlgebra, coords: &[Vec<Rational>]) -> Result<Self> {
        let vectors = coords
            .iter()
            .map(|c| normalize_leading_entry(&g.element(c)))
            .collect();
        Self::new(g, vectors)
    }

    pub fn empty(g: &MatrixLieAlgebra) -> Self {
        SubspaceBasis {
            vectors: Vec::new(),
            solver: SpanSolver::new(g.dim(), Vec::new()).expect("empty family"),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[QMatrix] {
        &self.vectors
    }

    /// Algebra coordinates of each basis vector.
    pub fn algebra_coords(&self) -> &[Vec<Rational>] {
        self.solver.vectors()
    }

    /// Coordinates of an element given by its algebra coordinates.
    pub fn coords_of(&self, algebra_coords: &[Rational]) -> Result<Vec<Rational>> {
        self.solver.solve(algebra_coords).ok_or(Error::NotInSpan)
    }

    /// Coordinates of a matrix in this subspace.
    pub fn coordinates(&self, g: &MatrixLieAlgebra, x: &QMatrix) -> Result<Vec<Rational>> {
        let c = g.coordinates(x).map_err(|e| match e {
            Error::NotInAlgebra => Error::NotInSpan,
            other => other,
        })?;
        self.coords_of(&c)
    }

    pub fn contains(&self, g: &MatrixLieAlgebra, x: &QMatrix) -> bool {
        self.coordinates(g, x).is_ok()
    }

    /// `sum_i c_i v_i` as a matrix; `n` is the matrix size.
    pub fn combine(&self, n: usize, c: &[Rational]) -> QMatrix {
        assert_eq!(c.len(), self.dim());
        let mut out = QMatrix::zeros(n, n);
        for (ci, v) in c.iter().zip(&self.vectors) {
            if !ci.is_zero() {
                out = &out + &v.scale(ci);
            }
        }
        out
    }

    /// `sum_i c_i v_i` in algebra coordinates.
    pub fn combine_coords(&self, c: &[Rational]) -> Vec<Rational> {
        self.solver.combine(c)
    }
}

/// Kernel of a linear operator on the algebra, as a subspace.
pub fn kernel_subspace(g: &MatrixLieAlgebra, op: &QMatrix) -> Result<SubspaceBasis> {
    SubspaceBasis::from_coords(g, &op.kernel_basis())
}

/// Kernel of `op` restricted to the span of `s`.
pub fn restricted_kernel(g: &MatrixLieAlgebra, op: &QMatrix, s: &SubspaceBasis) -> Result<SubspaceBasis> {
    if s.is_empty() {
        return Ok(SubspaceBasis::empty(g));
    }
    let cols: Vec<Vec<Rational>> = s.algebra_coords().iter().map(|v| op.apply(v)).collect();
    let m = QMatrix::from_fn(op.rows(), s.dim(), |i, j| cols[j][i].clone());
    let coords: Vec<Vec<Rational>> = m
        .kernel_basis()
        .iter()
        .map(|k| s.combine_coords(k))
        .collect();
    SubspaceBasis::from_coords(g, &coords)
}
