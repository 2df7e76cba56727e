//! Canonical exponent expressions `E(n) = Σ aⱼ·|⟨ℓⱼ, n⟩|`.
//!
//! Every torsion class in this crate is a power of `t ↦ max(1,t)`, and the
//! exponent is always a finite integer combination of absolute values of
//! integer linear forms in the multi-link coefficients `n_1, …, n_c`.
//! `ExponentExpr` stores that combination in a canonical shape so that two
//! expressions are equal as functions iff they are equal as values.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One term `coeff · |⟨form, n⟩|` of an exponent expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub form: Vec<i64>,
}

/// A canonical integer combination of absolute values of linear forms.
///
/// Canonical shape: every form is primitive (content 1) with positive leading
/// entry, proportional forms are merged, zero terms are dropped, and terms are
/// sorted lexicographically by form. Construction through [`ExponentExpr::new`]
/// enforces this, so `==` decides equality of the underlying functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentExpr {
    num_vars: usize,
    terms: Vec<Term>,
}

impl ExponentExpr {
    /// Canonicalizes an arbitrary term list over `num_vars` variables.
    pub fn new(num_vars: usize, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut canon: Vec<Term> = terms
            .into_iter()
            .filter_map(|t| canonical_term(num_vars, t))
            .collect();
        canon.sort_by(|a, b| a.form.cmp(&b.form));
        canon.dedup_by(|next, prev| {
            if prev.form == next.form {
                prev.coeff += next.coeff;
                true
            } else {
                false
            }
        });
        canon.retain(|t| t.coeff != 0);
        ExponentExpr {
            num_vars,
            terms: canon,
        }
    }

    /// The zero expression (exponent of the constant function 1).
    pub fn zero(num_vars: usize) -> Self {
        ExponentExpr {
            num_vars,
            terms: Vec::new(),
        }
    }

    /// `coeff · |⟨form, n⟩|`.
    pub fn single(coeff: i64, form: Vec<i64>) -> Self {
        let num_vars = form.len();
        ExponentExpr::new(num_vars, [Term { coeff, form }])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every canonical coefficient is nonnegative.
    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.iter().all(|t| t.coeff >= 0)
    }

    pub fn add(&self, other: &ExponentExpr) -> ExponentExpr {
        assert_eq!(
            self.num_vars, other.num_vars,
            "exponent arithmetic across different coefficient spaces"
        );
        ExponentExpr::new(
            self.num_vars,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        )
    }

    pub fn neg(&self) -> ExponentExpr {
        self.scale(-1)
    }

    pub fn sub(&self, other: &ExponentExpr) -> ExponentExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> ExponentExpr {
        ExponentExpr::new(
            self.num_vars,
            self.terms.iter().map(|t| Term {
                coeff: k * t.coeff,
                form: t.form.clone(),
            }),
        )
    }

    /// `E(n)` for a concrete integer vector `n`.
    pub fn evaluate(&self, n: &[i64]) -> Result<i64> {
        if n.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: n.len(),
            });
        }
        let value: i128 = self
            .terms
            .iter()
            .map(|t| t.coeff as i128 * dot(&t.form, n).abs())
            .sum();
        value.try_into().map_err(|_| {
            Error::InvalidParameters("exponent evaluation exceeds 64-bit range".to_string())
        })
    }

    /// Substitutes each variable by a linear form over a new variable space.
    ///
    /// `map[i]` is the image of variable `i`, of length `new_vars`. The result
    /// satisfies `subst(E, M)(n) = E(M·n)`.
    pub fn substitute(&self, map: &[Vec<i64>], new_vars: usize) -> Result<ExponentExpr> {
        if map.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: map.len(),
            });
        }
        for row in map {
            if row.len() != new_vars {
                return Err(Error::DimensionMismatch {
                    expected: new_vars,
                    found: row.len(),
                });
            }
        }
        let terms = self.terms.iter().map(|t| {
            let mut form = vec![0i64; new_vars];
            for (i, &fi) in t.form.iter().enumerate() {
                for (j, slot) in form.iter_mut().enumerate() {
                    *slot += fi * map[i][j];
                }
            }
            Term {
                coeff: t.coeff,
                form,
            }
        });
        Ok(ExponentExpr::new(new_vars, terms.collect::<Vec<_>>()))
    }

    /// Reorders variables: old variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<ExponentExpr> {
        if perm.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: perm.len(),
            });
        }
        let map: Vec<Vec<i64>> = perm.iter().map(|&j| unit_form(self.num_vars, j)).collect();
        self.substitute(&map, self.num_vars)
    }

    /// Sets variable `var` (0-based) to zero and removes it from the space.
    pub fn project_out(&self, var: usize) -> Result<ExponentExpr> {
        if var >= self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: var + 1,
            });
        }
        let new_vars = self.num_vars - 1;
        let map: Vec<Vec<i64>> = (0..self.num_vars)
            .map(|i| {
                if i == var {
                    vec![0; new_vars]
                } else {
                    unit_form(new_vars, if i < var { i } else { i - 1 })
                }
            })
            .collect();
        self.substitute(&map, new_vars)
    }
}

fn canonical_term(num_vars: usize, t: Term) -> Option<Term> {
    assert_eq!(t.form.len(), num_vars, "term form of wrong length");
    if t.coeff == 0 {
        return None;
    }
    let content = t.form.iter().fold(0i64, |g, &x| g.gcd(&x));
    if content == 0 {
        return None; // zero form, |0| contributes nothing
    }
    let lead = *t.form.iter().find(|&&x| x != 0).expect("nonzero content");
    let divisor = if lead < 0 { -content } else { content };
    let form = t.form.iter().map(|&x| x / divisor).collect();
    Some(Term {
        coeff: t.coeff * content,
        form,
    })
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// The `i`-th standard basis form over `num_vars` variables.
pub fn unit_form(num_vars: usize, i: usize) -> Vec<i64> {
    let mut f = vec![0; num_vars];
    f[i] = 1;
    f
}

/// The form `n_{lo} + … + n_{hi-1}` over `num_vars` variables (0-based, half-open).
pub fn block_sum_form(num_vars: usize, lo: usize, hi: usize) -> Vec<i64> {
    let mut f = vec![0; num_vars];
    for slot in &mut f[lo..hi] {
        *slot = 1;
    }
    f
}

impl fmt::Display for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let mag = t.coeff.abs();
            if i == 0 {
                if t.coeff < 0 {
                    write!(f, "-")?;
                }
            } else if t.coeff < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "|{}|", display_form(&t.form))?;
        }
        Ok(())
    }
}

fn display_form(form: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in form.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else if c < 0 {
            out.push('-');
        } else {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&format!("n{}", i + 1));
    }
    out
}

// Deserialization re-canonicalizes, so cache files cannot smuggle in a
// non-canonical representation.
impl<'de> Deserialize<'de> for ExponentExpr {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            num_vars: usize,
            terms: Vec<Term>,
        }
        let raw = Raw::deserialize(deserializer)?;
        for t in &raw.terms {
            if t.form.len() != raw.num_vars {
                return Err(serde::de::Error::custom("term form of wrong length"));
            }
        }
        Ok(ExponentExpr::new(raw.num_vars, raw.terms))
    }
}
