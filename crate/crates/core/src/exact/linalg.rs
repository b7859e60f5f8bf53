use num_traits::{One, Zero};

use super::{DivInt, Field, Matrix, Polynomial, Scalar};
use crate::error::{Error, Result};

/// Solution set of `A x = b`: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution<T> {
    pub particular: Vec<T>,
    pub kernel: Vec<Vec<T>>,
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form and pivot columns.
    ///
    /// Pivots are taken from the lowest row index holding a nonzero entry,
    /// which makes the output deterministic.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.to_rows();
        let (rows, cols) = (self.rows(), self.cols());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = T::one() / m[r][c].clone();
            for x in m[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for i in 0..rows {
                if i == r || m[i][c].is_zero() {
                    continue;
                }
                let factor = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        m[i][j] = m[i][j].clone() - factor.clone() * m[r][j].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix::from_rows_shape(rows, cols, m), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let cols = self.cols();
        let mut is_pivot = vec![None; cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut out = Vec::new();
        for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![T::zero(); cols];
            v[free] = T::one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(row, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// All solutions of `self x = b`.
    pub fn solve_linear(&self, b: &[T]) -> Result<LinearSolution<T>> {
        if b.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows()
            )));
        }
        let aug = Matrix::from_fn(self.rows(), self.cols() + 1, |i, j| {
            if j < self.cols() {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols()) {
            return Err(Error::NoSolution);
        }
        let mut particular = vec![T::zero(); self.cols()];
        for (row, &c) in pivots.iter().enumerate() {
            particular[c] = r.get(row, self.cols()).clone();
        }
        Ok(LinearSolution {
            particular,
            kernel: self.kernel_basis(),
        })
    }

    pub fn inverse(&self) -> Result<Matrix<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows();
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.submatrix(0, n, n, n))
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let n = self.rows();
        let mut m = self.to_rows();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return T::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det = det * m[c][c].clone();
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone() / m[c][c].clone();
                for j in c..n {
                    m[i][j] = m[i][j].clone() - f.clone() * m[c][j].clone();
                }
            }
        }
        det
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols());
        (0..self.rows())
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl<T: Scalar> Matrix<T> {
    fn from_rows_shape(rows: usize, cols: usize, m: Vec<Vec<T>>) -> Self {
        Matrix::new(rows, cols, m.into_iter().flatten().collect())
    }
}

/// `exp(n)` of a nilpotent matrix as a finite series.
pub fn nilpotent_exp<T: DivInt>(n: &Matrix<T>) -> Result<Matrix<T>> {
    if !n.is_square() {
        return Err(Error::DimensionMismatch("exp of a non-square matrix".into()));
    }
    let size = n.rows();
    let mut out = Matrix::identity(size);
    let mut term = Matrix::identity(size);
    for k in 1..=size {
        term = (&term * n).map(|a| a.div_int(k as u64));
        if term.is_zero() {
            return Ok(out);
        }
        out = &out + &term;
    }
    Err(Error::NotNilpotent)
}

/// `log(u)` of a unipotent matrix as a finite series.
pub fn nilpotent_log<T: DivInt>(u: &Matrix<T>) -> Result<Matrix<T>> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch("log of a non-square matrix".into()));
    }
    let size = u.rows();
    let n = u - &Matrix::identity(size);
    let mut out = Matrix::zeros(size, size);
    let mut power = Matrix::identity(size);
    for k in 1..=size {
        power = &power * &n;
        if power.is_zero() {
            return Ok(out);
        }
        let term = power.map(|a| a.div_int(k as u64));
        out = if k % 2 == 1 { &out + &term } else { &out - &term };
    }
    Err(Error::NotUnipotent)
}

/// Fraction-free determinant over `F[z]`; every division is exact.
pub fn bareiss_determinant<F: Field>(m: &Matrix<Polynomial<F>>) -> Polynomial<F> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Polynomial::one();
    }
    let mut a = m.to_rows();
    let mut sign = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Polynomial::zero();
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Result of the maximal-minor gcd computation.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorGcd<F> {
    /// Monic gcd of all `r x r` minors (zero if they all vanish).
    pub gcd: Polynomial<F>,
    /// Number of minors evaluated before the gcd became constant.
    pub minors_checked: usize,
    /// First nonzero minor seen, with its row and column indices; the first
    /// (zero) minor when all of them vanish.
    pub witness: Option<(Vec<usize>, Vec<usize>, Polynomial<F>)>,
}

/// Gcd of all `r x r` minors of a polynomial matrix.
///
/// Stops early once the running gcd is a nonzero constant, since it can
/// no longer change.
pub fn poly_matrix_minor_gcd<F: Field>(m: &Matrix<Polynomial<F>>, r: usize) -> MinorGcd<F> {
    let mut gcd = Polynomial::zero();
    let mut checked = 0;
    let mut witness = None;
    if r == 0 {
        return MinorGcd {
            gcd: Polynomial::one(),
            minors_checked: 0,
            witness,
        };
    }
    let row_sets = combinations(m.rows(), r);
    let col_sets = combinations(m.cols(), r);
    'outer: for rows in &row_sets {
        for cols in &col_sets {
            let minor = bareiss_determinant(&m.select(rows, cols));
            checked += 1;
            if minor.is_zero() {
                if witness.is_none() && checked == 1 {
                    witness = Some((rows.clone(), cols.clone(), minor));
                }
                continue;
            }
            if witness.as_ref().is_none_or(|w| w.2.is_zero()) {
                witness = Some((rows.clone(), cols.clone(), minor.clone()));
            }
            gcd = gcd.gcd(&minor);
            if gcd.is_unit_constant() {
                break 'outer;
            }
        }
    }
    MinorGcd {
        gcd,
        minors_checked: checked,
        witness,
    }
}

/// All increasing `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::{Poly, PolyMatrix, QMatrix, Rational};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&a| rat(a)).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = m(&[&[1, 2], &[2, 4]]).kernel_basis();
        assert_eq!(k, vec![v(&[-2, 1])]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let s = a.solve_linear(&v(&[1, 1])).unwrap();
        assert_eq!(s.particular, v(&[1, 0]));
        assert_eq!(s.kernel, vec![v(&[-1, 1])]);
        assert_eq!(a.solve_linear(&v(&[1, 0])), Err(Error::NoSolution));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.inverse().unwrap(), m(&[&[4, -1], &[-7, 2]]));
        assert_eq!(a.determinant(), rat(1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), rat(-1));
    }

    #[test]
    fn exp_log_of_jordan_block() {
        let n = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let u = nilpotent_exp(&n).unwrap();
        let expected = QMatrix::from_rows(vec![
            vec![rat(1), rat(1), ratio(1, 2)],
            vec![rat(0), rat(1), rat(1)],
            vec![rat(0), rat(0), rat(1)],
        ]);
        assert_eq!(u, expected);
        assert_eq!(nilpotent_log(&u).unwrap(), n);
        assert_eq!(nilpotent_exp(&m(&[&[1, 0], &[0, 0]])), Err(Error::NotNilpotent));
        assert_eq!(nilpotent_log(&m(&[&[2, 0], &[0, 1]])), Err(Error::NotUnipotent));
    }

    fn pm(rows: &[&[&[i64]]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::new(v(c))).collect())
                .collect(),
        )
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        // det [[z, 1], [1, z]] = z^2 - 1
        let a = pm(&[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        assert_eq!(bareiss_determinant(&a), Poly::new(v(&[-1, 0, 1])));
        // needs a row swap
        let b = pm(&[&[&[], &[1], &[]], &[&[1], &[], &[0, 1]], &[&[], &[2], &[1]]]);
        // cofactor: 0*... - 1*(1*1 - z*0) + 0 = -1
        assert_eq!(bareiss_determinant(&b), Poly::new(v(&[-1])));
    }

    #[test]
    fn minor_gcd() {
        let a = pm(&[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        assert_eq!(poly_matrix_minor_gcd(&a, 2).gcd, Poly::new(v(&[-1, 0, 1])));
        // 2x3 with a unit minor
        let b = pm(&[&[&[0, 1], &[1], &[]], &[&[], &[0, 1], &[1]]]);
        let g = poly_matrix_minor_gcd(&b, 2);
        assert_eq!(g.gcd, Poly::new(v(&[1])));
        let c = pm(&[&[&[0, 1], &[]], &[&[], &[0, 1]]]);
        assert_eq!(poly_matrix_minor_gcd(&c, 1).gcd, Poly::new(v(&[0, 1])));
    }

    #[test]
    fn combinations_enumerate_all() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
