//! JSON encodings.
//!
//! Rationals are strings `"p/q"` (or `"p"`), polynomials are arrays of
//! rationals indexed by degree, matrices are row-major nested arrays.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::connection::{GaugePoly, LambdaConnection, OperCheck, SlodowyCoefficients};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational};
use crate::liealg::{Family, MatrixLieAlgebra, SubspaceBasis};
use crate::models::ModelCoefficients;
use crate::sl2triples::{ModuleMultiplicities, Sl2Triple};
use crate::slodowy::{LynchParts, SlodowyData};
use crate::{Poly, PolyMatrix, QMatrix, Rational};

pub type RationalJson = String;
pub type PolyJson = Vec<RationalJson>;
pub type MatrixJson = Vec<Vec<RationalJson>>;
pub type PolyMatrixJson = Vec<Vec<PolyJson>>;

pub fn rational_to_json(r: &Rational) -> RationalJson {
    format_rational(r)
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    p.coeffs().iter().map(format_rational).collect()
}

pub fn matrix_to_json(m: &QMatrix) -> MatrixJson {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

pub fn poly_matrix_to_json(m: &PolyMatrix) -> PolyMatrixJson {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(poly_to_json).collect())
        .collect()
}

pub fn rational_from_json(s: &str) -> Result<Rational> {
    parse_rational(s)
}

pub fn poly_from_json(p: &[RationalJson]) -> Result<Poly> {
    Ok(Poly::new(p.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?))
}

fn check_rect<T>(rows: &[Vec<T>], what: &str) -> Result<()> {
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != c) {
        return Err(Error::Malformed(format!("{what}: ragged rows")));
    }
    Ok(())
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<QMatrix> {
    check_rect(m, "matrix")?;
    Ok(QMatrix::from_rows(
        m.iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
    ))
}

pub fn poly_matrix_from_json(m: &PolyMatrixJson) -> Result<PolyMatrix> {
    check_rect(m, "polynomial matrix")?;
    Ok(PolyMatrix::from_rows(
        m.iter()
            .map(|r| r.iter().map(|p| poly_from_json(p)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
    ))
}

/// `{ "family", "n", "J"?, "basis"? }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub family: String,
    pub n: usize,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MatrixJson>>,
}

impl AlgebraJson {
    pub fn from_algebra(g: &MatrixLieAlgebra) -> Self {
        let custom = g.family() == Family::Custom;
        AlgebraJson {
            family: g.family().to_string(),
            n: g.n(),
            j: if g.has_default_form() { None } else { g.form().map(matrix_to_json) },
            basis: custom.then(|| g.basis().iter().map(matrix_to_json).collect()),
        }
    }

    pub fn to_algebra(&self) -> Result<MatrixLieAlgebra> {
        let family = Family::parse(&self.family)?;
        let g = match (family, &self.j, &self.basis) {
            (Family::Custom, _, Some(b)) => {
                MatrixLieAlgebra::custom(b.iter().map(matrix_from_json).collect::<Result<_>>()?)?
            }
            (Family::Custom, _, None) => {
                return Err(Error::Malformed("custom algebra needs \"basis\"".into()))
            }
            (Family::So, Some(j), _) => MatrixLieAlgebra::so_with_form(matrix_from_json(j)?)?,
            (Family::Sp, Some(j), _) => MatrixLieAlgebra::sp_with_form(matrix_from_json(j)?)?,
            (Family::Sl, Some(_), _) => {
                return Err(Error::Malformed("sl takes no form".into()))
            }
            (f, None, _) => MatrixLieAlgebra::classical(f, self.n)?,
        };
        if g.n() != self.n {
            return Err(Error::Malformed(format!(
                "descriptor says n = {} but the form has size {}",
                self.n,
                g.n()
            )));
        }
        Ok(g)
    }
}

/// `{ "lambda", "A", "algebra" }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub lambda: RationalJson,
    #[serde(rename = "A")]
    pub a: PolyMatrixJson,
    pub algebra: AlgebraJson,
}

impl ConnectionJson {
    pub fn from_connection(c: &LambdaConnection) -> Self {
        ConnectionJson {
            lambda: rational_to_json(c.lambda()),
            a: poly_matrix_to_json(c.matrix()),
            algebra: AlgebraJson::from_algebra(c.algebra()),
        }
    }

    /// Uses `algebra` if given (so the connection shares it), else builds one.
    pub fn to_connection(&self, algebra: Option<Arc<MatrixLieAlgebra>>) -> Result<LambdaConnection> {
        let g = match algebra {
            Some(g) => g,
            None => Arc::new(self.algebra.to_algebra()?),
        };
        LambdaConnection::new(parse_rational(&self.lambda)?, poly_matrix_from_json(&self.a)?, g)
    }
}

/// `{ "algebra", "f", "h", "e" }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleJson {
    pub algebra: AlgebraJson,
    pub f: MatrixJson,
    pub h: MatrixJson,
    pub e: MatrixJson,
}

impl TripleJson {
    pub fn from_triple(t: &Sl2Triple) -> Self {
        TripleJson {
            algebra: AlgebraJson::from_algebra(t.algebra()),
            f: matrix_to_json(&t.f),
            h: matrix_to_json(&t.h),
            e: matrix_to_json(&t.e),
        }
    }

    pub fn to_triple(&self) -> Result<Sl2Triple> {
        let g = Arc::new(self.algebra.to_algebra()?);
        Sl2Triple::new(
            g,
            matrix_from_json(&self.f)?,
            matrix_from_json(&self.h)?,
            matrix_from_json(&self.e)?,
        )
    }
}

/// Slodowy coefficients; `psi` is keyed by the exponent as a string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsJson {
    pub lambda: RationalJson,
    pub psi0: Vec<PolyJson>,
    pub q: PolyJson,
    pub psi: BTreeMap<String, Vec<PolyJson>>,
}

impl CoefficientsJson {
    pub fn from_coefficients(c: &SlodowyCoefficients) -> Self {
        CoefficientsJson {
            lambda: rational_to_json(&c.lambda),
            psi0: c.psi0.iter().map(poly_to_json).collect(),
            q: poly_to_json(&c.q),
            psi: c
                .psi
                .iter()
                .map(|(m, v)| (m.to_string(), v.iter().map(poly_to_json).collect()))
                .collect(),
        }
    }

    pub fn to_coefficients(&self) -> Result<SlodowyCoefficients> {
        let polys = |v: &[PolyJson]| v.iter().map(|p| poly_from_json(p)).collect::<Result<Vec<_>>>();
        let mut psi = BTreeMap::new();
        for (k, v) in &self.psi {
            let m: u32 = k
                .parse()
                .map_err(|_| Error::Malformed(format!("psi key {k:?} is not an exponent")))?;
            psi.insert(m, polys(v)?);
        }
        Ok(SlodowyCoefficients {
            lambda: parse_rational(&self.lambda)?,
            psi0: polys(&self.psi0)?,
            q: poly_from_json(&self.q)?,
            psi,
        })
    }
}

/// Family-specific coefficient bundle, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelCoefficientsJson {
    Borel {
        q: PolyJson,
        psi: Vec<PolyJson>,
    },
    Tube {
        psi0: PolyMatrixJson,
        q: PolyJson,
        psi1: PolyMatrixJson,
    },
    Flag {
        psi0: PolyMatrixJson,
        q: PolyJson,
        borel: Vec<PolyJson>,
        psihat: Vec<PolyJson>,
    },
}

impl ModelCoefficientsJson {
    pub fn from_model(c: &ModelCoefficients) -> Self {
        let polys = |v: &[Poly]| v.iter().map(poly_to_json).collect();
        match c {
            ModelCoefficients::Borel { q, psi } => ModelCoefficientsJson::Borel {
                q: poly_to_json(q),
                psi: polys(psi),
            },
            ModelCoefficients::Tube { psi0, q, psi1 } => ModelCoefficientsJson::Tube {
                psi0: poly_matrix_to_json(psi0),
                q: poly_to_json(q),
                psi1: poly_matrix_to_json(psi1),
            },
            ModelCoefficients::Flag {
                psi0,
                q,
                borel,
                psihat,
            } => ModelCoefficientsJson::Flag {
                psi0: poly_matrix_to_json(psi0),
                q: poly_to_json(q),
                borel: polys(borel),
                psihat: polys(psihat),
            },
        }
    }

    pub fn to_model(&self) -> Result<ModelCoefficients> {
        let polys = |v: &[PolyJson]| v.iter().map(|p| poly_from_json(p)).collect::<Result<Vec<_>>>();
        Ok(match self {
            ModelCoefficientsJson::Borel { q, psi } => ModelCoefficients::Borel {
                q: poly_from_json(q)?,
                psi: polys(psi)?,
            },
            ModelCoefficientsJson::Tube { psi0, q, psi1 } => ModelCoefficients::Tube {
                psi0: poly_matrix_from_json(psi0)?,
                q: poly_from_json(q)?,
                psi1: poly_matrix_from_json(psi1)?,
            },
            ModelCoefficientsJson::Flag {
                psi0,
                q,
                borel,
                psihat,
            } => ModelCoefficients::Flag {
                psi0: poly_matrix_from_json(psi0)?,
                q: poly_from_json(q)?,
                borel: polys(borel)?,
                psihat: polys(psihat)?,
            },
        })
    }
}

pub fn multiplicities_to_json(m: &ModuleMultiplicities) -> Value {
    json!(m
        .entries
        .iter()
        .map(|(j, n)| (j.to_string(), *n))
        .collect::<BTreeMap<_, _>>())
}

pub fn subspace_to_json(s: &SubspaceBasis) -> Value {
    json!(s.vectors().iter().map(matrix_to_json).collect::<Vec<_>>())
}

pub fn slodowy_data_to_json(sd: &SlodowyData) -> Value {
    let hw: BTreeMap<String, Value> = sd
        .highest_weight_spaces()
        .iter()
        .map(|(m, s)| (m.to_string(), subspace_to_json(s)))
        .collect();
    json!({
        "triple": TripleJson::from_triple(sd.triple()),
        "exponents": sd.exponents(),
        "centralizer": subspace_to_json(sd.centralizer()),
        "highest_weight_spaces": hw,
        "vhat2": subspace_to_json(sd.vhat2()),
    })
}

pub fn gauge_to_json(g: &GaugePoly) -> Value {
    json!({
        "l": poly_matrix_to_json(&g.l),
        "l_inv": poly_matrix_to_json(&g.l_inv),
        "x": poly_matrix_to_json(&g.x),
    })
}

pub fn lynch_to_json(p: &LynchParts) -> Value {
    let x: BTreeMap<String, MatrixJson> =
        p.x.iter().map(|(w, m)| (w.to_string(), matrix_to_json(m))).collect();
    json!({ "x": x, "v": matrix_to_json(&p.v) })
}

pub fn lynch_from_json(v: &Value) -> Result<LynchParts> {
    #[derive(Deserialize)]
    struct Raw {
        x: BTreeMap<String, MatrixJson>,
        v: MatrixJson,
    }
    let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut x = BTreeMap::new();
    for (k, m) in &raw.x {
        let w: u32 = k
            .parse()
            .map_err(|_| Error::Malformed(format!("weight key {k:?} is not an integer")))?;
        x.insert(w, matrix_from_json(m)?);
    }
    Ok(LynchParts {
        x,
        v: matrix_from_json(&raw.v)?,
    })
}

pub fn oper_check_to_json(c: &OperCheck) -> Value {
    json!({
        "is_oper": c.is_oper,
        "offending_weights": c.offending_weights,
        "minor_gcd": c.minor_gcd.as_ref().map(poly_to_json),
        "minors_checked": c.minors_checked,
        "failing_minor": c.failing_minor.as_ref().map(|(r, cols, p)| json!({
            "rows": r,
            "cols": cols,
            "value": poly_to_json(p),
        })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn encodings() {
        let p = Poly::new(vec![rat(1), ratio(-1, 2), rat(0), rat(3)]);
        assert_eq!(poly_to_json(&p), vec!["1", "-1/2", "0", "3"]);
        assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
        let m = QMatrix::from_rows(vec![vec![rat(1), ratio(2, 3)], vec![rat(0), rat(-4)]]);
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
        assert!(matrix_from_json(&vec![vec!["1".into()], vec![]]).is_err());
    }

    #[test]
    fn algebra_descriptor_round_trip() {
        for g in [
            MatrixLieAlgebra::sl(3).unwrap(),
            MatrixLieAlgebra::so(5).unwrap(),
            MatrixLieAlgebra::sp(4).unwrap(),
            MatrixLieAlgebra::so_with_form(QMatrix::identity(3)).unwrap(),
        ] {
            let d = AlgebraJson::from_algebra(&g);
            let text = serde_json::to_string(&d).unwrap();
            let back: AlgebraJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_algebra().unwrap(), g);
        }
        assert_eq!(
            serde_json::to_string(&AlgebraJson::from_algebra(&MatrixLieAlgebra::sl(2).unwrap())).unwrap(),
            r#"{"family":"sl","n":2}"#
        );
    }

    #[test]
    fn custom_algebra_serializes_its_basis() {
        let e = QMatrix::unit(2, 0, 1);
        let f = QMatrix::unit(2, 1, 0);
        let h = e.bracket(&f);
        let g = MatrixLieAlgebra::custom(vec![e, f, h]).unwrap();
        let d = AlgebraJson::from_algebra(&g);
        assert_eq!(d.basis.as_ref().map(Vec::len), Some(3));
        assert_eq!(d.to_algebra().unwrap(), g);
    }
}
