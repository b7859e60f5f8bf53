use super::{Field, Matrix};

/// Coordinates with respect to a fixed family of independent vectors.
///
/// Precomputes a set of pivot rows on which the family is invertible, so each
/// query costs one small matrix-vector product plus a membership check.
#[derive(Clone, Debug)]
pub struct SpanSolver<T> {
    vectors: Vec<Vec<T>>,
    pivot_rows: Vec<usize>,
    inverse: Matrix<T>,
    ambient: usize,
}

impl<T: Field> SpanSolver<T> {
    /// `None` if the vectors are linearly dependent or of unequal length.
    pub fn new(ambient: usize, vectors: Vec<Vec<T>>) -> Option<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return None;
        }
        let k = vectors.len();
        if k == 0 {
            return Some(SpanSolver {
                vectors,
                pivot_rows: Vec::new(),
                inverse: Matrix::zeros(0, 0),
                ambient,
            });
        }
        // rows of `vt` are the vectors; its pivot columns are independent rows of the column matrix
        let vt = Matrix::from_rows(vectors.clone());
        let (_, pivots) = vt.rref();
        if pivots.len() < k {
            return None;
        }
        let square = Matrix::from_fn(k, k, |i, j| vectors[j][pivots[i]].clone());
        let inverse = square.inverse().ok()?;
        Some(SpanSolver {
            vectors,
            pivot_rows: pivots,
            inverse,
            ambient,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    /// Coordinates of `b`, or `None` if `b` is outside the span.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let c = self.solve_unchecked(b);
        (self.combine(&c) == b).then_some(c)
    }

    /// Coordinates assuming `b` lies in the span.
    pub fn solve_unchecked(&self, b: &[T]) -> Vec<T> {
        let rhs: Vec<T> = self.pivot_rows.iter().map(|&r| b[r].clone()).collect();
        if rhs.iter().all(|x| x.is_zero()) {
            return vec![T::zero(); self.dim()];
        }
        self.inverse.apply(&rhs)
    }

    /// `sum_i c_i v_i`.
    pub fn combine(&self, c: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.ambient];
        for (ci, v) in c.iter().zip(&self.vectors) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                if !x.is_zero() {
                    *o = o.clone() + ci.clone() * x.clone();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn coordinates_and_membership() {
        let s = SpanSolver::new(3, vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]])
            .unwrap();
        assert_eq!(s.solve(&[rat(2), rat(5), rat(3)]), Some(vec![rat(2), rat(3)]));
        assert_eq!(s.solve(&[rat(1), rat(0), rat(0)]), None);
        assert!(SpanSolver::new(2, vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]).is_none());
    }
}
