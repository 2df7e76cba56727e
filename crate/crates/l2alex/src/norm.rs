//! Seminorm analysis of exponent expressions: evaluation, nonnegativity of the
//! canonical coefficients, and the lattice subspace where the expression
//! vanishes.

use num_integer::Integer;

use crate::error::Result;
use crate::exponent::ExponentExpr;

/// `E(n)` for a concrete coefficient vector.
pub fn evaluate(e: &ExponentExpr, n: &[i64]) -> Result<i64> {
    e.evaluate(n)
}

/// Whether an exponent expression defines a seminorm, and where it degenerates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeminormReport {
    /// All canonical coefficients are nonnegative, so `E(n) ≥ 0` everywhere.
    pub is_seminorm: bool,
    /// Primitive basis of the common kernel of the positive-coefficient forms;
    /// when `is_seminorm` holds this is exactly the subspace where `E` vanishes.
    pub degenerate_directions: Vec<Vec<i64>>,
}

pub fn seminorm_report(e: &ExponentExpr) -> SeminormReport {
    let is_seminorm = e.has_nonnegative_coeffs();
    let rows: Vec<Vec<i64>> = e
        .terms()
        .iter()
        .filter(|t| t.coeff > 0)
        .map(|t| t.form.clone())
        .collect();
    let degenerate_directions = integer_kernel(&rows, e.num_vars());
    SeminormReport {
        is_seminorm,
        degenerate_directions,
    }
}

/// Primitive integer basis of `{x : A·x = 0}` for the rows of `a`.
///
/// Row-reduces the transposed matrix augmented with the identity using
/// gcd-style integer eliminations; identity rows facing a vanished left part
/// form the kernel basis.
pub(crate) fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let m = a.len();
    let mut b: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = a.iter().map(|r| r[i] as i128).collect();
            row.extend((0..n).map(|j| i128::from(j == i)));
            row
        })
        .collect();

    let mut top = 0usize;
    for col in 0..m {
        loop {
            let pivot = (top..n)
                .filter(|&r| b[r][col] != 0)
                .min_by_key(|&r| b[r][col].unsigned_abs());
            let Some(pivot) = pivot else { break };
            b.swap(top, pivot);
            let pivot_row = b[top].clone();
            let mut done = true;
            for row in b.iter_mut().skip(top + 1) {
                let factor = row[col] / pivot_row[col];
                if factor != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= factor * y;
                    }
                }
                if row[col] != 0 {
                    done = false;
                }
            }
            if done {
                top += 1;
                break;
            }
        }
    }

    b[top..].iter().map(|row| primitive(&row[m..])).collect()
}

fn primitive(v: &[i128]) -> Vec<i64> {
    let content = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let lead = v.iter().find(|&&x| x != 0).copied().unwrap_or(1);
    let divisor = if content == 0 {
        1
    } else if lead < 0 {
        -content
    } else {
        content
    };
    v.iter().map(|&x| (x / divisor) as i64).collect()
}
