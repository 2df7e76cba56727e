//! Torsion classes of multi-links and the closed-form and compositional rules
//! that produce them.
//!
//! A class is either `Zero` (vanishing torsion) or the dot-equality class of
//! `t ↦ max(1,t)^{E(n)}` for a canonical [`ExponentExpr`] `E`. Monomial factors
//! `t^m` are quotiented out of the representation entirely, which makes
//! dot-equality literal equality of exponent expressions.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{block_sum_form, unit_form, ExponentExpr};

/// Dot-equality class of an L²-Alexander torsion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorsionClass {
    /// Vanishing or undefined torsion; absorbs multiplication.
    Zero,
    /// The class of `t ↦ max(1,t)^{E(n)}`.
    NonZero(ExponentExpr),
}

impl TorsionClass {
    pub fn nonzero(expr: ExponentExpr) -> Self {
        TorsionClass::NonZero(expr)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TorsionClass::Zero)
    }

    pub fn exponent(&self) -> Option<&ExponentExpr> {
        match self {
            TorsionClass::Zero => None,
            TorsionClass::NonZero(e) => Some(e),
        }
    }

    pub fn num_vars(&self) -> Option<usize> {
        self.exponent().map(ExponentExpr::num_vars)
    }

    /// Class multiplication: exponents add, `Zero` absorbs.
    pub fn mul(&self, other: &TorsionClass) -> TorsionClass {
        match (self, other) {
            (TorsionClass::NonZero(a), TorsionClass::NonZero(b)) => TorsionClass::NonZero(a.add(b)),
            _ => TorsionClass::Zero,
        }
    }

    /// Division by a nonvanishing class: exponents subtract.
    pub fn div(&self, other: &ExponentExpr) -> TorsionClass {
        match self {
            TorsionClass::Zero => TorsionClass::Zero,
            TorsionClass::NonZero(a) => TorsionClass::NonZero(a.sub(other)),
        }
    }

    /// Value of the representative `max(1,t)^{E(n)}` at a concrete `(n, t)`.
    pub fn representative(&self, n: &[i64], t: f64) -> Result<f64> {
        match self {
            TorsionClass::Zero => Ok(0.0),
            TorsionClass::NonZero(e) => Ok(t.max(1.0).powi(e.evaluate(n)? as i32)),
        }
    }
}

impl std::fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TorsionClass::Zero => write!(f, "0"),
            TorsionClass::NonZero(e) if e.is_zero() => write!(f, "1"),
            TorsionClass::NonZero(e) => write!(f, "max(1,t)^({e})"),
        }
    }
}

/// Integer coefficients `(n_1, …, n_c)` of a multi-link; `symbolic` leaves the
/// exponent as a function of the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    entries: Option<Vec<i64>>,
}

impl CoefficientVector {
    pub fn symbolic() -> Self {
        CoefficientVector { entries: None }
    }

    pub fn concrete(entries: Vec<i64>) -> Self {
        CoefficientVector {
            entries: Some(entries),
        }
    }

    pub fn as_concrete(&self) -> Option<&[i64]> {
        self.entries.as_deref()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameters(msg()))
    }
}

fn check_torus_params(e: i64, p: i64, q: i64, split_excluded: bool) -> Result<()> {
    ensure(e >= 1, || format!("e = {e} must be positive"))?;
    ensure(p.gcd(&q) == 1, || {
        format!("p = {p}, q = {q} must be coprime")
    })?;
    if split_excluded && e >= 2 && (p == 0 || q == 0) {
        return Err(Error::SplitLink(format!(
            "T({}, {}) is split and carries no torsion formula",
            e * p,
            e * q
        )));
    }
    Ok(())
}

/// Exponent of the torus link `T(ep, eq)`: `(e|pq| - |p| - |q|)·|n_1 + … + n_e|`.
pub fn torsion_torus_link(e: i64, p: i64, q: i64) -> Result<ExponentExpr> {
    check_torus_params(e, p, q, true)?;
    let vars = e as usize;
    let coeff = e * (p * q).abs() - p.abs() - q.abs();
    Ok(ExponentExpr::single(coeff, block_sum_form(vars, 0, vars)))
}

/// Exponent of `T(ep, eq) ∪ H_v`: `(e|p| - 1)·|q(n_1 + … + n_e) + n_{e+1}|`.
pub fn torsion_torus_in_solid(e: i64, p: i64, q: i64) -> Result<ExponentExpr> {
    check_torus_params(e, p, q, false)?;
    ensure(p != 0, || {
        "torus link in a solid torus requires p != 0".to_string()
    })?;
    let vars = e as usize + 1;
    let mut form = vec![q; vars];
    form[vars - 1] = 1;
    Ok(ExponentExpr::single(e * p.abs() - 1, form))
}

/// Exponent of `T(ep, eq) ∪ H_v ∪ H_h`:
/// `e·|pq(n_1 + … + n_e) + p·n_{e+1} + q·n_{e+2}|`.
pub fn torsion_torus_in_thickened(e: i64, p: i64, q: i64) -> Result<ExponentExpr> {
    check_torus_params(e, p, q, false)?;
    let vars = e as usize + 2;
    let mut form = vec![p * q; vars];
    form[vars - 2] = p;
    form[vars - 1] = q;
    Ok(ExponentExpr::single(e, form))
}

/// Exponent of the `(e+1)`-component keychain link: `(e - 1)·|n_{e+1}|`.
pub fn torsion_keychain(e: i64) -> Result<ExponentExpr> {
    ensure(e >= 1, || format!("e = {e} must be positive"))?;
    let vars = e as usize + 1;
    Ok(ExponentExpr::single(e - 1, unit_form(vars, vars - 1)))
}

/// Exponent of `T(e, ek) ∪ H_v`: `(e - 1)·|k(n_1 + … + n_e) + n_{e+1}|`.
pub fn torsion_parallel_in_solid(e: i64, k: i64) -> Result<ExponentExpr> {
    ensure(e >= 1, || format!("e = {e} must be positive"))?;
    let vars = e as usize + 1;
    let mut form = vec![k; vars];
    form[vars - 1] = 1;
    Ok(ExponentExpr::single(e - 1, form))
}

/// Component deletion. The base torsion is taken over `c` variables, the
/// deleted component is `comp` (1-based) and `linking_row` lists the linking
/// numbers of the surviving components with the deleted one, in order.
///
/// The result substitutes `n_comp := 0` and divides by
/// `max(1,t)^{|⟨linking_row, n⟩|}`.
pub fn torres_delete(
    base: &TorsionClass,
    linking_row: &[i64],
    comp: usize,
) -> Result<TorsionClass> {
    let expr = base.exponent().ok_or_else(|| {
        Error::UnsupportedConstruction(
            "component deletion requires a nonvanishing base torsion".to_string(),
        )
    })?;
    let c = expr.num_vars();
    ensure(comp >= 1 && comp <= c, || {
        format!("component {comp} out of range 1..={c}")
    })?;
    if linking_row.len() != c - 1 {
        return Err(Error::DimensionMismatch {
            expected: c - 1,
            found: linking_row.len(),
        });
    }
    let projected = expr.project_out(comp - 1)?;
    let correction = ExponentExpr::single(1, linking_row.to_vec());
    Ok(TorsionClass::NonZero(projected.sub(&correction)))
}

/// Connected sum along the last components of the two summands.
///
/// `left` is taken over `c+1` variables, `right` over `d+1`; the result lives
/// over `c+d+1` variables with the merged component last.
pub fn connected_sum_torsion(left: &TorsionClass, right: &TorsionClass) -> Result<TorsionClass> {
    let (le, re) = match (left.exponent(), right.exponent()) {
        (Some(le), Some(re)) => (le, re),
        _ => return Ok(TorsionClass::Zero),
    };
    ensure(le.num_vars() >= 1 && re.num_vars() >= 1, || {
        "summands must have at least one component".to_string()
    })?;
    let c = le.num_vars() - 1;
    let d = re.num_vars() - 1;
    let total = c + d + 1;
    let left_map: Vec<Vec<i64>> = (0..=c)
        .map(|i| unit_form(total, if i == c { total - 1 } else { i }))
        .collect();
    let right_map: Vec<Vec<i64>> = (0..=d)
        .map(|i| unit_form(total, if i == d { total - 1 } else { c + i }))
        .collect();
    let ls = le.substitute(&left_map, total)?;
    let rs = re.substitute(&right_map, total)?;
    let merged = ExponentExpr::single(1, unit_form(total, total - 1));
    Ok(TorsionClass::NonZero(ls.add(&rs).add(&merged)))
}

/// Cabling of the last component by `T(ep, eq)`.
///
/// `base` is taken over `c+1` variables; `linking_row` lists
/// `lk(L_i, L_{c+1})` for `i = 1, …, c`. The result lives over `c+e` variables
/// with the cable block last: the base exponent is evaluated at
/// `n_{c+1} := p·N` and multiplied by `max(1,t)^{(e|p|-1)·|ℓ + qN|}`, where
/// `N = n_{c+1} + … + n_{c+e}` and `ℓ = ⟨linking_row, n⟩`.
pub fn cabling_torsion(
    base: &TorsionClass,
    e: i64,
    p: i64,
    q: i64,
    linking_row: &[i64],
) -> Result<TorsionClass> {
    ensure(e >= 1, || format!("e = {e} must be positive"))?;
    ensure(p != 0, || "cabling requires p != 0".to_string())?;
    ensure(p.gcd(&q) == 1, || {
        format!("p = {p}, q = {q} must be coprime")
    })?;
    let expr = match base.exponent() {
        Some(expr) => expr,
        None => return Ok(TorsionClass::Zero),
    };
    ensure(expr.num_vars() >= 1, || {
        "cabling requires a cabled component".to_string()
    })?;
    let c = expr.num_vars() - 1;
    if linking_row.len() != c {
        return Err(Error::DimensionMismatch {
            expected: c,
            found: linking_row.len(),
        });
    }
    let eb = e as usize;
    let total = c + eb;
    let mut map: Vec<Vec<i64>> = (0..c).map(|i| unit_form(total, i)).collect();
    let mut cable_sum = vec![0i64; total];
    for slot in &mut cable_sum[c..] {
        *slot = p;
    }
    map.push(cable_sum);
    let substituted = expr.substitute(&map, total)?;
    let mut ell_plus_qn = vec![0i64; total];
    ell_plus_qn[..c].copy_from_slice(linking_row);
    for slot in &mut ell_plus_qn[c..] {
        *slot = q;
    }
    let correction = ExponentExpr::single(e * p.abs() - 1, ell_plus_qn);
    Ok(TorsionClass::NonZero(substituted.add(&correction)))
}

/// Product of torsion classes glued along tori (torus interfaces contribute 1).
///
/// Pieces must already be expressed over the composite's `num_vars` variables;
/// any vanishing piece makes the product vanish, with a warning.
pub fn glue_toroidal(
    num_vars: usize,
    pieces: &[TorsionClass],
) -> Result<(TorsionClass, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut acc = ExponentExpr::zero(num_vars);
    for (i, piece) in pieces.iter().enumerate() {
        match piece.exponent() {
            None => {
                warnings.push(format!(
                    "piece {} has vanishing torsion; the gluing vanishes",
                    i + 1
                ));
                return Ok((TorsionClass::Zero, warnings));
            }
            Some(e) => {
                if e.num_vars() != num_vars {
                    return Err(Error::DimensionMismatch {
                        expected: num_vars,
                        found: e.num_vars(),
                    });
                }
                acc = acc.add(e);
            }
        }
    }
    Ok((TorsionClass::NonZero(acc), warnings))
}

/// Recomputes the thickened-torus exponent by gluing along the cabling torus:
/// the exterior of `T(ep, eq) ∪ H_v ∪ H_h` splits into the `e = 1` thickened
/// piece (with the strand coefficients summed) and `e` parallel `pq`-twisted
/// strands in a solid torus (with the axis coefficient `p·n_{e+1} + q·n_{e+2}`).
pub fn glue_route_thickened(e: i64, p: i64, q: i64) -> Result<ExponentExpr> {
    check_torus_params(e, p, q, false)?;
    let vars = e as usize + 2;
    let knot_piece = torsion_torus_in_thickened(1, p, q)?;
    let mut axis_image = vec![0i64; vars];
    axis_image[vars - 2] = p;
    axis_image[vars - 1] = q;
    let knot_map = vec![
        block_sum_form(vars, 0, vars - 2),
        unit_form(vars, vars - 2),
        unit_form(vars, vars - 1),
    ];
    let strands_piece = torsion_parallel_in_solid(e, p * q)?;
    let mut strands_map: Vec<Vec<i64>> = (0..e as usize).map(|i| unit_form(vars, i)).collect();
    strands_map.push(axis_image);
    let pieces = [
        TorsionClass::NonZero(knot_piece.substitute(&knot_map, vars)?),
        TorsionClass::NonZero(strands_piece.substitute(&strands_map, vars)?),
    ];
    let (glued, _) = glue_toroidal(vars, &pieces)?;
    Ok(glued.exponent().expect("nonvanishing pieces").clone())
}

/// Recomputes the `e = 1` thickened-torus exponent from the plain gluing
/// formula: two thickened-torus pieces (torsion 1) glued along the annulus
/// complement of the knot in the separating torus, whose torsion is
/// `max(1,t)^{-|pq·n_1 + p·n_2 + q·n_3|}`.
pub fn glue_route_annulus(p: i64, q: i64) -> Result<ExponentExpr> {
    check_torus_params(1, p, q, false)?;
    let a = ExponentExpr::zero(3);
    let b = ExponentExpr::zero(3);
    let annulus = ExponentExpr::single(-1, vec![p * q, p, q]);
    Ok(a.add(&b).sub(&annulus))
}

/// Recomputes a cabling by gluing the base exterior (cabled coefficient
/// `p·N`) with the exterior of `T(ep, eq) ∪ H_v` (axis coefficient `ℓ`).
/// The cabled component must be last, as in [`cabling_torsion`].
pub fn glue_route_cabling(
    base: &TorsionClass,
    e: i64,
    p: i64,
    q: i64,
    linking_row: &[i64],
) -> Result<TorsionClass> {
    let expr = match base.exponent() {
        Some(expr) => expr,
        None => return Ok(TorsionClass::Zero),
    };
    ensure(expr.num_vars() >= 1, || {
        "cabling requires a cabled component".to_string()
    })?;
    let c = expr.num_vars() - 1;
    if linking_row.len() != c {
        return Err(Error::DimensionMismatch {
            expected: c,
            found: linking_row.len(),
        });
    }
    let eb = e as usize;
    let total = c + eb;
    let mut base_map: Vec<Vec<i64>> = (0..c).map(|i| unit_form(total, i)).collect();
    let mut cable_sum = vec![0i64; total];
    for slot in &mut cable_sum[c..] {
        *slot = p;
    }
    base_map.push(cable_sum);
    let pattern = torsion_torus_in_solid(e, p, q)?;
    let mut ell = vec![0i64; total];
    ell[..c].copy_from_slice(linking_row);
    let mut pattern_map: Vec<Vec<i64>> = (0..eb).map(|i| unit_form(total, c + i)).collect();
    pattern_map.push(ell);
    let pieces = [
        TorsionClass::NonZero(expr.substitute(&base_map, total)?),
        TorsionClass::NonZero(pattern.substitute(&pattern_map, total)?),
    ];
    let (glued, _) = glue_toroidal(total, &pieces)?;
    Ok(glued)
}

/// Recomputes a connected sum by gluing the two summand exteriors with a
/// three-component keychain exterior whose axis carries the merged
/// coefficient. Merged components must be last, as in
/// [`connected_sum_torsion`].
pub fn glue_route_connected_sum(left: &TorsionClass, right: &TorsionClass) -> Result<TorsionClass> {
    let (le, re) = match (left.exponent(), right.exponent()) {
        (Some(le), Some(re)) => (le, re),
        _ => return Ok(TorsionClass::Zero),
    };
    let c = le.num_vars() - 1;
    let d = re.num_vars() - 1;
    let total = c + d + 1;
    let left_map: Vec<Vec<i64>> = (0..=c)
        .map(|i| unit_form(total, if i == c { total - 1 } else { i }))
        .collect();
    let right_map: Vec<Vec<i64>> = (0..=d)
        .map(|i| unit_form(total, if i == d { total - 1 } else { c + i }))
        .collect();
    let keychain = torsion_keychain(2)?;
    let keychain_map = vec![vec![0; total], vec![0; total], unit_form(total, total - 1)];
    let pieces = [
        TorsionClass::NonZero(le.substitute(&left_map, total)?),
        TorsionClass::NonZero(re.substitute(&right_map, total)?),
        TorsionClass::NonZero(keychain.substitute(&keychain_map, total)?),
    ];
    let (glued, _) = glue_toroidal(total, &pieces)?;
    Ok(glued)
}

/// Denominator exponent `|r·φ(μ) + s·φ(λ)|` of a `p/q`-surgery, where the
/// framing matrix `((p, q), (r, s))` must have determinant one.
pub fn surgery_correction(
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    phi_mu: i64,
    phi_lambda: i64,
) -> Result<i64> {
    let det = p * s - q * r;
    if det != 1 {
        return Err(Error::BadFraming { det });
    }
    Ok((r * phi_mu + s * phi_lambda).abs())
}

/// Exponent of the knot invariant obtained from a one-component torsion:
/// the torsion of `(K, 1)` is the invariant divided by `max(1,t)`, so the
/// invariant's exponent is `E(1) + 1`.
pub fn knot_invariant_exponent(torsion: &TorsionClass) -> Result<i64> {
    let expr = torsion.exponent().ok_or_else(|| {
        Error::UnsupportedConstruction("vanishing torsion has no knot invariant".to_string())
    })?;
    if expr.num_vars() != 1 {
        return Err(Error::InvalidParameters(format!(
            "knot invariant requires a single-component link, got {} components",
            expr.num_vars()
        )));
    }
    Ok(expr.evaluate(&[1])? + 1)
}
