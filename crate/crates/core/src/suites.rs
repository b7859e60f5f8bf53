//! Seeded random data and the experiment runners behind the CLI and the
//! acceptance tests: oper round trips, Lynch round trips, C* equivariance,
//! multiplicity tables and Hitchin triangularity.
//!
//! Random rationals have numerators in `[-9, 9]` and denominators in
//! `{1, 2, 3}`; random polynomials have degree at most the cap.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::connection::{
    cstar_act, gauge_transform, normalize, normalize_relative, read_slice_coefficients,
    slodowy_functor, GaugePoly, PositionHint, SlodowyCoefficients,
};
use crate::error::Result;
use crate::exact::{ratio, rat};
use crate::liealg::{antidiagonal, standard_symplectic};
use crate::models::{
    build_model_oper, expected_multiplicities, hitchin_map, hitchin_section, model_triple,
    slice_coords, ModelCoefficients, ModelDescriptor, ModelFamily,
};
use crate::sl2triples::module_multiplicities;
use crate::slodowy::{lynch_compose, lynch_decompose, parabolic_data, slodowy_data, LynchParts, ParabolicData, SlodowyData};
use crate::{Poly, PolyMatrix, QMatrix, Rational};

/// Deterministic generator for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=3);
    ratio(p, q)
}

pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Degree uniform in `0..=cap`.
pub fn random_poly<R: Rng>(rng: &mut R, cap: usize) -> Poly {
    let d = rng.gen_range(0..=cap);
    Poly::new((0..=d).map(|_| random_rational(rng)).collect())
}

fn random_poly_matrix<R: Rng>(rng: &mut R, n: usize, cap: usize) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, random_poly(rng, cap));
        }
    }
    m
}

fn random_symmetric<R: Rng>(rng: &mut R, n: usize, cap: usize, anti: bool) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if i == j && anti {
                continue;
            }
            let p = random_poly(rng, cap);
            m.set(j, i, if anti { -&p } else { p.clone() });
            m.set(i, j, p);
        }
    }
    m
}

/// Random coefficient bundle satisfying the family's symmetry constraints.
pub fn random_model_coefficients<R: Rng>(desc: &ModelDescriptor, rng: &mut R, cap: usize) -> ModelCoefficients {
    match desc.family {
        ModelFamily::SlBorel => ModelCoefficients::Borel {
            q: random_poly(rng, cap),
            psi: (1..desc.n).map(|_| random_poly(rng, cap)).collect(),
        },
        ModelFamily::TubeSl => {
            let p = desc.n;
            let mut psi0 = random_poly_matrix(rng, p, cap);
            let mut tr = Poly::zero();
            for i in 0..p - 1 {
                tr = &tr + psi0.get(i, i);
            }
            psi0.set(p - 1, p - 1, -&tr);
            ModelCoefficients::Tube {
                psi0,
                q: random_poly(rng, cap),
                psi1: random_poly_matrix(rng, p, cap),
            }
        }
        ModelFamily::TubeSp => {
            // K^{-1} = K; ψ_0 = K M with M antisymmetric, ψ_1 = K S with S symmetric
            let k = PolyMatrix::constant(&antidiagonal(desc.n));
            let m = random_symmetric(rng, desc.n, cap, true);
            let q = random_poly(rng, cap);
            let s = random_symmetric(rng, desc.n, cap, false);
            ModelCoefficients::Tube {
                psi0: &k * &m,
                q,
                psi1: &k * &s,
            }
        }
        ModelFamily::TubeSo => {
            // B^{-1} = -B; ψ_0 = B^{-1} S with S symmetric, ψ_1 = B^{-1} A with A antisymmetric
            let p = 2 * desc.n;
            let binv = PolyMatrix::constant(&(-&standard_symplectic(p)));
            let s = random_symmetric(rng, p, cap, false);
            let q = random_poly(rng, cap);
            let a = random_symmetric(rng, p, cap, true);
            ModelCoefficients::Tube {
                psi0: &binv * &s,
                q,
                psi1: &binv * &a,
            }
        }
        ModelFamily::SoLine | ModelFamily::SoFlag => {
            let r = desc.w_rank();
            let k = PolyMatrix::constant(&antidiagonal(r));
            let m = random_symmetric(rng, r, cap, true);
            ModelCoefficients::Flag {
                psi0: &k * &m,
                q: random_poly(rng, cap),
                borel: (0..desc.k).map(|_| random_poly(rng, cap)).collect(),
                psihat: (0..r).map(|_| random_poly(rng, cap)).collect(),
            }
        }
    }
}

/// `exp(x)` with `x` a random polynomial combination of the nilradical basis.
pub fn random_unipotent_gauge<R: Rng>(pd: &ParabolicData, rng: &mut R, cap: usize) -> GaugePoly {
    let n = pd.algebra().n();
    let mut x = PolyMatrix::zeros(n, n);
    for v in pd.nilradical().vectors() {
        let p = random_poly(rng, cap);
        x = &x + &PolyMatrix::constant(v).map(|a| a * &p);
    }
    GaugePoly::unipotent(x).expect("nilradical elements are nilpotent")
}

/// Random constant `(x, v)` for the Lynch map.
pub fn random_lynch_parts<R: Rng>(sd: &SlodowyData, rng: &mut R) -> LynchParts {
    let g = sd.algebra();
    let n = g.n();
    let gr = sd.grading();
    let mut x = BTreeMap::new();
    for w in gr.weights().into_iter().filter(|&w| w > 0) {
        let s = gr.space(w).expect("weight present");
        let c: Vec<Rational> = (0..s.dim()).map(|_| random_rational(rng)).collect();
        let m = s.combine(n, &c);
        if !m.is_zero() {
            x.insert(w as u32, m);
        }
    }
    let mut v = QMatrix::zeros(n, n);
    let mut add = |s: &crate::liealg::SubspaceBasis, rng: &mut R| {
        let c: Vec<Rational> = (0..s.dim()).map(|_| random_rational(rng)).collect();
        v = &v + &s.combine(n, &c);
    };
    add(sd.centralizer(), rng);
    for s in sd.highest_weight_spaces().values() {
        add(s, rng);
    }
    LynchParts { x, v }
}

/// Model data bundle: descriptor, slice data and parabolic data.
#[derive(Clone, Debug)]
pub struct ModelContext {
    pub desc: ModelDescriptor,
    pub sd: SlodowyData,
    pub pd: ParabolicData,
}

impl ModelContext {
    pub fn new(desc: ModelDescriptor) -> Result<Self> {
        let t = model_triple(&desc)?;
        Ok(ModelContext {
            desc,
            sd: slodowy_data(&t)?,
            pd: parabolic_data(&t)?,
        })
    }
}

/// One oper round trip: build, gauge by a random unipotent, normalize, and
/// compare with the coefficients read off the untouched model.
pub fn roundtrip_trial<R: Rng>(ctx: &ModelContext, lambda: &Rational, rng: &mut R, cap: usize) -> std::result::Result<(), String> {
    let coeffs = random_model_coefficients(&ctx.desc, rng, cap);
    let built = build_model_oper(&ctx.desc, lambda.clone(), &coeffs).map_err(|e| format!("build: {e}"))?;
    let expected = read_slice_coefficients(&built, &ctx.sd, &Rational::one()).map_err(|e| format!("repackage: {e}"))?;
    if slodowy_functor(&ctx.sd, &expected).map_err(|e| e.to_string())? != built {
        return Err("model oper differs from the functor image of its coefficients".into());
    }
    let gauge = random_unipotent_gauge(&ctx.pd, rng, cap);
    let moved = gauge_transform(&built, &gauge).map_err(|e| format!("gauge: {e}"))?;
    if !built.preserves_form() || !moved.preserves_form() {
        return Err("form not preserved".into());
    }
    let (g, got) = normalize(&moved, &ctx.sd, &ctx.pd).map_err(|e| format!("normalize: {e}"))?;
    if got != expected {
        return Err("recovered coefficients differ".into());
    }
    let normal = gauge_transform(&moved, &g).map_err(|e| format!("returned gauge: {e}"))?;
    if normal != slodowy_functor(&ctx.sd, &got).map_err(|e| e.to_string())? {
        return Err("returned gauge does not produce the normal form".into());
    }
    Ok(())
}

/// Aggregated outcome of a batch of trials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub trials: usize,
    pub passed: usize,
    /// First few failure messages, prefixed with the trial index.
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    fn record(&mut self, i: usize, r: std::result::Result<(), String>) {
        self.trials += 1;
        match r {
            Ok(()) => self.passed += 1,
            Err(e) if self.failures.len() < 5 => self.failures.push(format!("trial {i}: {e}")),
            Err(_) => {}
        }
    }
}

/// Round trips for one model and one `λ`.
pub fn roundtrip_suite(ctx: &ModelContext, lambda: &Rational, trials: usize, seed: u64, cap: usize) -> SuiteOutcome {
    let mut rng = rng_from_seed(seed);
    let mut out = SuiteOutcome::default();
    for i in 0..trials {
        out.record(i, roundtrip_trial(ctx, lambda, &mut rng, cap));
    }
    out
}

/// `lynch_decompose ∘ lynch_compose = id` on random constant data.
pub fn lynch_suite(sd: &SlodowyData, trials: usize, seed: u64) -> SuiteOutcome {
    let mut rng = rng_from_seed(seed);
    let mut out = SuiteOutcome::default();
    for i in 0..trials {
        let parts = random_lynch_parts(sd, &mut rng);
        let r = lynch_compose(&parts, sd)
            .and_then(|a| lynch_decompose(&a, sd))
            .map_err(|e| e.to_string())
            .and_then(|back| if back == parts { Ok(()) } else { Err("decomposition differs".into()) });
        out.record(i, r);
    }
    out
}

/// Coefficients of `normalize(ξ · conn)` predicted from `normalize(conn)`:
/// `ψ_0 -> ξ ψ_0`, `q -> ξ^2 q`, `ψ_m -> ξ^{m+1} ψ_m`, `λ -> ξ λ`.
pub fn weighted_scaling(c: &SlodowyCoefficients, xi: &Rational) -> SlodowyCoefficients {
    let pow = |k: u32| num_traits::pow(xi.clone(), k as usize);
    SlodowyCoefficients {
        lambda: c.lambda.clone() * xi.clone(),
        psi0: c.psi0.iter().map(|p| p.scale(xi)).collect(),
        q: c.q.scale(&pow(2)),
        psi: c
            .psi
            .iter()
            .map(|(&m, v)| (m, v.iter().map(|p| p.scale(&pow(m + 1))).collect()))
            .collect(),
    }
}

/// C* equivariance on a random gauged model oper.
pub fn cstar_trial<R: Rng>(ctx: &ModelContext, rng: &mut R, cap: usize) -> std::result::Result<(), String> {
    let lambda = rat(rng.gen_range(0..=2));
    let coeffs = random_model_coefficients(&ctx.desc, rng, cap);
    let built = build_model_oper(&ctx.desc, lambda, &coeffs).map_err(|e| e.to_string())?;
    let conn = gauge_transform(&built, &random_unipotent_gauge(&ctx.pd, rng, cap)).map_err(|e| e.to_string())?;
    let xi = random_nonzero_rational(rng);
    let scaled = cstar_act(&xi, &conn).map_err(|e| e.to_string())?;
    let (_, base) = normalize(&conn, &ctx.sd, &ctx.pd).map_err(|e| e.to_string())?;
    let (_, rel) = normalize_relative(&scaled, &ctx.sd, &ctx.pd, &xi, PositionHint::Auto).map_err(|e| e.to_string())?;
    if rel != base.scale(&xi) {
        return Err(format!("relative normal form is not scaled by xi = {xi}"));
    }
    let (_, abs) = normalize(&scaled, &ctx.sd, &ctx.pd).map_err(|e| e.to_string())?;
    if abs != weighted_scaling(&base, &xi) {
        return Err(format!("normal form does not scale with weights for xi = {xi}"));
    }
    Ok(())
}

pub fn cstar_suite(ctx: &ModelContext, trials: usize, seed: u64, cap: usize) -> SuiteOutcome {
    let mut rng = rng_from_seed(seed);
    let mut out = SuiteOutcome::default();
    for i in 0..trials {
        out.record(i, cstar_trial(ctx, &mut rng, cap));
    }
    out
}

/// Computed versus expected multiplicities for one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub expected: BTreeMap<u32, usize>,
    pub computed: BTreeMap<u32, usize>,
    pub matches: bool,
}

pub fn table_row(desc: &ModelDescriptor) -> Result<TableRow> {
    let expected = expected_multiplicities(desc).entries;
    let computed = module_multiplicities(&model_triple(desc)?)?.entries;
    Ok(TableRow {
        family: desc.family.to_string(),
        n: desc.n,
        k: desc.k,
        matches: expected == computed,
        expected,
        computed,
    })
}

/// The reference multiplicity table: `tube_sl`, `tube_sp` for `n <= 3`,
/// `tube_so4n` for `n <= 2`, `tube_so_line` for `3 <= n <= 9`.
pub fn reference_table() -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    let mut push = |fam: ModelFamily, ns: std::ops::RangeInclusive<usize>| -> Result<()> {
        for n in ns {
            rows.push(table_row(&ModelDescriptor::new(fam, n, None)?)?);
        }
        Ok(())
    };
    push(ModelFamily::TubeSl, 1..=3)?;
    push(ModelFamily::TubeSp, 1..=3)?;
    push(ModelFamily::TubeSo, 1..=2)?;
    push(ModelFamily::SoLine, 3..=9)?;
    Ok(rows)
}

/// For principal `sl_n`: `hitchin_map ∘ hitchin_section` is triangular with
/// constant nonzero diagonal, and inverting it recovers the input.
pub fn hitchin_trial<R: Rng>(sd: &SlodowyData, rng: &mut R, cap: usize) -> std::result::Result<(), String> {
    let k = sd.exponents().len();
    let qs: Vec<Poly> = (0..k).map(|_| random_poly(rng, cap)).collect();
    let eval = |q: &[Poly]| -> std::result::Result<Vec<Poly>, String> {
        let s = hitchin_section(sd, q).map_err(|e| e.to_string())?;
        hitchin_map(&s).map_err(|e| e.to_string())
    };
    let truncated = |q: &[Poly], upto: usize| -> Vec<Poly> {
        q.iter()
            .enumerate()
            .map(|(i, p)| if i < upto { p.clone() } else { Poly::zero() })
            .collect()
    };
    let section = hitchin_section(sd, &qs).map_err(|e| e.to_string())?;
    if slice_coords(&section, sd).map_err(|e| e.to_string())? != qs {
        return Err("slice coordinates do not invert the section".into());
    }
    let p = eval(&qs)?;
    if p.len() != k {
        return Err(format!("expected {k} invariants, got {}", p.len()));
    }
    let mut diag = Vec::with_capacity(k);
    for j in 0..k {
        let mut unit = vec![Poly::zero(); k];
        unit[j] = Poly::one();
        let c = eval(&unit)?[j].clone();
        if !c.is_unit_constant() {
            return Err(format!("diagonal entry {j} is not a nonzero constant"));
        }
        diag.push(c.coeff(0));
        // p_j depends only on q_1..q_j, and linearly on q_j
        let upto = eval(&truncated(&qs, j + 1))?;
        let below = eval(&truncated(&qs, j))?;
        if upto[j] != p[j] {
            return Err(format!("p_{} depends on later coordinates", j + 1));
        }
        if &p[j] - &below[j] != qs[j].scale(&diag[j]) {
            return Err(format!("p_{} is not affine in q_{}", j + 1, j + 1));
        }
    }
    let mut rec: Vec<Poly> = vec![Poly::zero(); k];
    for j in 0..k {
        let lower = eval(&rec)?[j].clone();
        rec[j] = (&p[j] - &lower).scale(&(Rational::one() / diag[j].clone()));
    }
    if rec != qs {
        return Err("triangular inversion did not recover the input".into());
    }
    Ok(())
}

pub fn hitchin_suite(sd: &SlodowyData, trials: usize, seed: u64, cap: usize) -> SuiteOutcome {
    let mut rng = rng_from_seed(seed);
    let mut out = SuiteOutcome::default();
    for i in 0..trials {
        out.record(i, hitchin_trial(sd, &mut rng, cap));
    }
    out
}
