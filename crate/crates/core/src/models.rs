//! Explicit oper families: the `SL_n` Borel model, tube-type models for
//! `sl_{2n}`, `sp_{2n}`, `so_{4n}`, and `so_n` partial flags; expected
//! multiplicity tables; the Hitchin map and section.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::connection::{read_slice_coefficients, LambdaConnection, SlodowyCoefficients};
use crate::error::{Error, Result};
use crate::exact::rat;
use crate::liealg::{antidiagonal, standard_symplectic, MatrixLieAlgebra};
use crate::sl2triples::{principal_triple, Sl2Triple};
use crate::slodowy::SlodowyData;
use crate::{Poly, PolyMatrix, QMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    /// `sl_n`, principal triple, Borel parabolic.
    SlBorel,
    /// `sl_{2n}`, maximal parabolic of type `(n, n)`.
    TubeSl,
    /// `sp_{2n}`, Siegel parabolic.
    TubeSp,
    /// `so_{4n}`, parabolic stabilizing a Lagrangian.
    TubeSo,
    /// `so_n`, parabolic stabilizing an isotropic line.
    SoLine,
    /// `so_n`, partial flag with a `W_{2k+1}` principal block.
    SoFlag,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 6] = [
        ModelFamily::SlBorel,
        ModelFamily::TubeSl,
        ModelFamily::TubeSp,
        ModelFamily::TubeSo,
        ModelFamily::SoLine,
        ModelFamily::SoFlag,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnsupportedFamily(s.to_string()))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelFamily::SlBorel => "sln_borel",
            ModelFamily::TubeSl => "tube_sl",
            ModelFamily::TubeSp => "tube_sp",
            ModelFamily::TubeSo => "tube_so4n",
            ModelFamily::SoLine => "tube_so_line",
            ModelFamily::SoFlag => "so_partial_flag",
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A model: family, size parameter `n`, and `k` for partial flags.
///
/// `n` is the matrix size for `sln_borel`, `tube_so_line`, `so_partial_flag`;
/// the block size for `tube_sl` and `tube_sp` (matrices of size `2n`); and half
/// the block size for `tube_so4n` (matrices of size `4n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelDescriptor {
    pub family: ModelFamily,
    pub n: usize,
    pub k: usize,
}

impl ModelDescriptor {
    pub fn new(family: ModelFamily, n: usize, k: Option<usize>) -> Result<Self> {
        let k = match family {
            ModelFamily::SoFlag => k.ok_or_else(|| Error::Malformed("so_partial_flag needs k".into()))?,
            ModelFamily::SoLine => 1,
            _ => 0,
        };
        let ok = match family {
            ModelFamily::SlBorel => n >= 2,
            ModelFamily::TubeSl | ModelFamily::TubeSp | ModelFamily::TubeSo => n >= 1,
            ModelFamily::SoLine => n >= 3,
            ModelFamily::SoFlag => k >= 1 && 2 * k < n,
        };
        if !ok {
            return Err(Error::Malformed(format!("invalid parameters for {family}: n={n}, k={k}")));
        }
        Ok(ModelDescriptor { family, n, k })
    }

    /// Size of the defining matrices.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            ModelFamily::TubeSl | ModelFamily::TubeSp => 2 * self.n,
            ModelFamily::TubeSo => 4 * self.n,
            _ => self.n,
        }
    }

    /// Half-size of the tube blocks.
    fn block(&self) -> usize {
        self.matrix_size() / 2
    }

    /// Rank of the `W` summand for partial flags: `n - 2k - 1`.
    pub fn w_rank(&self) -> usize {
        self.n - 2 * self.k - 1
    }

    pub fn algebra(&self) -> Result<Arc<MatrixLieAlgebra>> {
        let g = match self.family {
            ModelFamily::SlBorel => MatrixLieAlgebra::sl(self.n)?,
            ModelFamily::TubeSl => MatrixLieAlgebra::sl(2 * self.n)?,
            ModelFamily::TubeSp => MatrixLieAlgebra::sp_with_form(standard_symplectic(2 * self.n))?,
            ModelFamily::TubeSo => {
                let b = standard_symplectic(2 * self.n);
                let z = QMatrix::zeros(2 * self.n, 2 * self.n);
                MatrixLieAlgebra::so_with_form(QMatrix::from_blocks(&z, &b, &(-&b), &z))?
            }
            ModelFamily::SoLine | ModelFamily::SoFlag => {
                MatrixLieAlgebra::so_with_form(flag_form(self.w_rank(), self.k))?
            }
        };
        Ok(Arc::new(g))
    }
}

/// Alternating antidiagonal form of odd size: entry `(a, 2k - a)` is `(-1)^a`.
pub fn alternating_antidiagonal(size: usize) -> QMatrix {
    QMatrix::from_fn(size, size, |i, j| {
        if i + j + 1 == size {
            rat(if i % 2 == 0 { 1 } else { -1 })
        } else {
            rat(0)
        }
    })
}

/// `diag(Q_W, Q_{2k+1})` with `Q_W` antidiagonal of size `r`.
pub fn flag_form(r: usize, k: usize) -> QMatrix {
    QMatrix::block_diag(&[&antidiagonal(r), &alternating_antidiagonal(2 * k + 1)])
}

fn borel_triple_matrices(n: usize) -> (QMatrix, QMatrix, QMatrix) {
    let ni = n as i64;
    let f = QMatrix::from_fn(n, n, |i, j| rat((i == j + 1) as i64));
    let h = QMatrix::diagonal(&(0..ni).map(|i| rat(ni - 1 - 2 * i)).collect::<Vec<_>>());
    let e = QMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            rat(j as i64 * (ni - j as i64))
        } else {
            rat(0)
        }
    });
    (f, h, e)
}

fn tube_triple_matrices(p: usize) -> (QMatrix, QMatrix, QMatrix) {
    let i = QMatrix::identity(p);
    let z = QMatrix::zeros(p, p);
    let f = QMatrix::from_blocks(&z, &z, &i, &z);
    let h = QMatrix::from_blocks(&i, &z, &z, &(-&i));
    let e = QMatrix::from_blocks(&z, &i, &z, &z);
    (f, h, e)
}

/// The triple whose Jacobson-Morozov parabolic is the model's parabolic.
pub fn model_triple(desc: &ModelDescriptor) -> Result<Sl2Triple> {
    let g = desc.algebra()?;
    let (f, h, e) = match desc.family {
        ModelFamily::SlBorel => return principal_triple(&g),
        ModelFamily::TubeSl | ModelFamily::TubeSp | ModelFamily::TubeSo => {
            tube_triple_matrices(desc.block())
        }
        ModelFamily::SoLine | ModelFamily::SoFlag => {
            let r = desc.w_rank();
            let (f, h, e) = borel_triple_matrices(2 * desc.k + 1);
            let z = QMatrix::zeros(r, r);
            (
                QMatrix::block_diag(&[&z, &f]),
                QMatrix::block_diag(&[&z, &h]),
                QMatrix::block_diag(&[&z, &e]),
            )
        }
    };
    Sl2Triple::new(g, f, h, e)
}

/// Expected `sl2`-module multiplicities (`n_j` keyed by highest weight `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedTable {
    pub entries: BTreeMap<u32, usize>,
    /// Centralizer type as printed in the reference table.
    pub centralizer: String,
}

/// Reference values for the model, entered as closed formulas in `n`, `k`.
pub fn expected_multiplicities(desc: &ModelDescriptor) -> ExpectedTable {
    let n = desc.n;
    let mut entries = BTreeMap::new();
    let centralizer;
    match desc.family {
        ModelFamily::SlBorel => {
            entries.insert(0, 0);
            for m in 1..n as u32 {
                entries.insert(2 * m, 1);
            }
            centralizer = "0".to_string();
        }
        ModelFamily::TubeSl => {
            entries.insert(0, n * n - 1);
            entries.insert(2, n * n);
            centralizer = format!("sl_{n}");
        }
        ModelFamily::TubeSp => {
            entries.insert(0, n * (n - 1) / 2);
            entries.insert(2, n * (n + 1) / 2);
            centralizer = format!("so_{n}");
        }
        ModelFamily::TubeSo => {
            entries.insert(0, n * (2 * n + 1));
            entries.insert(2, n * (2 * n - 1));
            centralizer = format!("sp_{}", 2 * n);
        }
        ModelFamily::SoLine => {
            entries.insert(0, (n - 2) * (n - 3) / 2);
            entries.insert(2, n - 2);
            centralizer = format!("so_{}", n - 3);
        }
        ModelFamily::SoFlag => {
            let k = desc.k;
            let r = n - 2 * k - 1;
            entries.insert(0, r * r.saturating_sub(1) / 2);
            for j in 1..=k {
                let w = 4 * j - 2;
                if w != 2 * k {
                    entries.insert(w as u32, 1);
                }
            }
            let top = if k % 2 == 1 { n - 2 * k } else { n - 2 * k - 1 };
            if top > 0 {
                entries.insert(2 * k as u32, top);
            }
            centralizer = format!("so_{}", n - 2 * k - 1);
        }
    }
    ExpectedTable {
        entries,
        centralizer,
    }
}

/// Family-specific coefficient bundle of a model oper.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelCoefficients {
    /// `f + (q + ψ_1) e + sum_{k>=2} ψ_k e_k`; `psi[k-1]` is `ψ_k`.
    Borel { q: Poly, psi: Vec<Poly> },
    /// `[[ψ_0, q I + ψ_1], [I, ψ_0]]`.
    Tube {
        psi0: PolyMatrix,
        q: Poly,
        psi1: PolyMatrix,
    },
    /// `ψ_0` on `W`, the odd Borel coefficients `ψ_1, ψ_3, ..., ψ_{2k-1}` on
    /// `W_{2k+1}` (with `q` added to `ψ_1`), and the coupling vector `ψ̂`.
    Flag {
        psi0: PolyMatrix,
        q: Poly,
        borel: Vec<Poly>,
        psihat: Vec<Poly>,
    },
}

/// `e^k` scaled so its `(0, k)` entry is one.
fn normalized_power(e: &QMatrix, k: u32) -> QMatrix {
    let p = e.pow(k);
    let c = p.get(0, k as usize).clone();
    p.scale(&(Rational::one() / c))
}

fn poly_times(m: &QMatrix, p: &Poly) -> PolyMatrix {
    PolyMatrix::constant(m).map(|x| x * p)
}

fn borel_block(n: usize, q: &Poly, psi: &[(u32, Poly)]) -> PolyMatrix {
    let (f, _, e) = borel_triple_matrices(n);
    let mut a = &PolyMatrix::constant(&f) + &poly_times(&e, q);
    for (k, p) in psi {
        let m = if *k == 1 { e.clone() } else { normalized_power(&e, *k) };
        a = &a + &poly_times(&m, p);
    }
    a
}

fn check_len<T>(v: &[T], want: usize, what: &str) -> Result<()> {
    if v.len() == want {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{what}: expected {want}, got {}", v.len())))
    }
}

fn check_square(m: &PolyMatrix, want: usize, what: &str) -> Result<()> {
    if m.rows() == want && m.cols() == want {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{what}: expected {want}x{want}")))
    }
}

/// The model oper `λ d + A(z) dz` for the given coefficients.
pub fn build_model_oper(desc: &ModelDescriptor, lambda: Rational, coeffs: &ModelCoefficients) -> Result<LambdaConnection> {
    let g = desc.algebra()?;
    let a = match (desc.family, coeffs) {
        (ModelFamily::SlBorel, ModelCoefficients::Borel { q, psi }) => {
            check_len(psi, desc.n - 1, "Borel coefficients")?;
            let indexed: Vec<(u32, Poly)> =
                psi.iter().enumerate().map(|(i, p)| (i as u32 + 1, p.clone())).collect();
            borel_block(desc.n, q, &indexed)
        }
        (
            ModelFamily::TubeSl | ModelFamily::TubeSp | ModelFamily::TubeSo,
            ModelCoefficients::Tube { psi0, q, psi1 },
        ) => {
            let p = desc.block();
            check_square(psi0, p, "psi0")?;
            check_square(psi1, p, "psi1")?;
            let qi = PolyMatrix::identity(p).map(|x| x * q);
            PolyMatrix::from_blocks(psi0, &(&qi + psi1), &PolyMatrix::identity(p), psi0)
        }
        (ModelFamily::SoLine | ModelFamily::SoFlag, ModelCoefficients::Flag { psi0, q, borel, psihat }) => {
            let r = desc.w_rank();
            let k = desc.k;
            check_square(psi0, r, "psi0")?;
            check_len(borel, k, "odd Borel coefficients")?;
            check_len(psihat, r, "coupling vector")?;
            let indexed: Vec<(u32, Poly)> =
                borel.iter().enumerate().map(|(i, p)| (2 * i as u32 + 1, p.clone())).collect();
            let block = borel_block(2 * k + 1, q, &indexed);
            let mut a = PolyMatrix::block_diag(&[psi0, &block]);
            // top-right: last column ψ̂; bottom-left: first row -ψ̂^T Q_W
            let qw = antidiagonal(r);
            for i in 0..r {
                a.set(i, r + 2 * k, psihat[i].clone());
                let mut entry = Poly::zero();
                for (j, p) in psihat.iter().enumerate() {
                    if !qw.get(j, i).is_zero() {
                        entry = &entry - &p.scale(qw.get(j, i));
                    }
                }
                a.set(r, i, entry);
            }
            a
        }
        _ => {
            return Err(Error::Malformed(format!(
                "coefficient bundle does not match family {}",
                desc.family
            )))
        }
    };
    LambdaConnection::new(lambda, a, g).map_err(|e| match e {
        Error::NotInAlgebra => Error::SymmetryViolation(format!(
            "coefficients for {} do not lie in the algebra",
            desc.family
        )),
        other => other,
    })
}

/// Coefficients of a model oper with respect to the slice basis of `sd`,
/// read off from `A - f`.
pub fn model_slodowy_coefficients(conn: &LambdaConnection, sd: &SlodowyData) -> Result<SlodowyCoefficients> {
    read_slice_coefficients(conn, sd, &Rational::one())
}

/// Characteristic polynomial coefficients `c_0, ..., c_{n-1}` of `A(z)`
/// (monic, `det(tI - A) = t^n + c_{n-1} t^{n-1} + ... + c_0`).
pub fn characteristic_coefficients(a: &PolyMatrix) -> Vec<Poly> {
    // Faddeev-LeVerrier
    let n = a.rows();
    let mut c = vec![Poly::zero(); n + 1];
    c[n] = Poly::one();
    let mut m = PolyMatrix::zeros(n, n);
    for k in 1..=n {
        let ci = PolyMatrix::identity(n).map(|x| x * &c[n - k + 1]);
        m = &(a * &m) + &ci;
        let tr = (a * &m).trace();
        c[n - k] = tr.scale(&(-Rational::one() / rat(k as i64)));
    }
    c.truncate(n);
    c
}

/// `p_j = (-1)^{j+1} c_{n-1-j}` for `j = 1, ..., n-1`: the elementary symmetric
/// function of degree `j + 1` in the eigenvalues.
pub fn hitchin_map(conn: &LambdaConnection) -> Result<Vec<Poly>> {
    if !conn.lambda().is_zero() {
        return Err(Error::LambdaNonzero);
    }
    let c = characteristic_coefficients(conn.matrix());
    let n = c.len();
    Ok((1..n)
        .map(|j| {
            let p = c[n - 1 - j].clone();
            if j % 2 == 1 {
                p
            } else {
                -p
            }
        })
        .collect())
}

/// `f + sum_j q_j e_{2m_j}` at `λ = 0`; `qs` follows the slice order
/// (the coefficient of `e`, then each `V_{2m}` basis vector).
pub fn hitchin_section(sd: &SlodowyData, qs: &[Poly]) -> Result<LambdaConnection> {
    if !sd.is_principal() {
        return Err(Error::NotPrincipal);
    }
    let mut coeffs = SlodowyCoefficients::zero(sd, Rational::zero());
    let want = 1 + coeffs.psi.values().map(Vec::len).sum::<usize>();
    check_len(qs, want, "section coordinates")?;
    coeffs.q = qs[0].clone();
    let mut it = qs[1..].iter();
    for v in coeffs.psi.values_mut() {
        for p in v.iter_mut() {
            *p = it.next().expect("length checked").clone();
        }
    }
    crate::connection::slodowy_functor(sd, &coeffs)
}

/// Slice coordinates of a connection in `f + V[z]`, in the order used by
/// [`hitchin_section`] (preceded by the `c` coordinates).
pub fn slice_coords(conn: &LambdaConnection, sd: &SlodowyData) -> Result<Vec<Poly>> {
    Ok(read_slice_coefficients(conn, sd, &Rational::one())?.flatten())
}
