//! Dual-ball zonotopes of seminorm exponents, with exact integer arithmetic.
//!
//! For a seminorm `E(n) = Σ aⱼ|⟨ℓⱼ, n⟩|` the dual unit ball is the zonotope
//! with generators `gⱼ = aⱼ·ℓⱼ`: for every `n`,
//! `E(n) = max { ⟨v, n⟩ : v vertex of the zonotope }`.
//!
//! Vertices are `Σ σⱼ gⱼ` over the sign vectors `σ` realized by a generic
//! direction `w` (`σⱼ = sign⟨gⱼ, w⟩`), i.e. over the chambers of the central
//! hyperplane arrangement `{gⱼ^⊥}`. Chambers are enumerated exactly: in the
//! plane by sorting the arrangement rays, in dimension three by walking the
//! candidate extreme rays `±gᵢ×gⱼ` and recursing into the transverse plane.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exponent::ExponentExpr;
use crate::norm::{integer_kernel, seminorm_report};

/// Dual unit ball of a seminorm exponent: generators `aⱼ·ℓⱼ` and the exact
/// integer vertex list of their zonotope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zonotope {
    pub generators: Vec<Vec<i64>>,
    pub vertices: Vec<Vec<i64>>,
}

impl Zonotope {
    /// Support function `max ⟨v, n⟩` over the vertices.
    pub fn support(&self, n: &[i64]) -> Option<i64> {
        self.vertices
            .iter()
            .map(|v| v.iter().zip(n).map(|(a, b)| a * b).sum())
            .max()
    }
}

/// Computes the dual-ball zonotope of a seminorm exponent (dimension ≤ 3).
pub fn dual_ball(e: &ExponentExpr) -> Result<Zonotope> {
    if !seminorm_report(e).is_seminorm {
        return Err(Error::NotASeminorm);
    }
    let dim = e.num_vars();
    if dim > 3 {
        return Err(Error::DimensionTooLarge { dim });
    }
    let generators: Vec<Vec<i64>> = e
        .terms()
        .iter()
        .map(|t| t.form.iter().map(|&x| t.coeff * x).collect())
        .collect();
    let mut vertices: Vec<Vec<i64>> = chamber_signs(dim, &generators)
        .into_iter()
        .map(|signs| {
            let mut v = vec![0i64; dim];
            for (s, g) in signs.iter().zip(&generators) {
                for (slot, &gi) in v.iter_mut().zip(g) {
                    *slot += i64::from(*s) * gi;
                }
            }
            v
        })
        .collect();
    vertices.sort_by(|a, b| b.cmp(a));
    vertices.dedup();
    Ok(Zonotope {
        generators,
        vertices,
    })
}

/// Sign vectors `(sign⟨gⱼ, w⟩)ⱼ` over all chambers of the arrangement.
fn chamber_signs(dim: usize, gens: &[Vec<i64>]) -> Vec<Vec<i8>> {
    if gens.is_empty() {
        return vec![Vec::new()];
    }
    if gens.len() == 1 {
        return vec![vec![1], vec![-1]];
    }
    match rank(gens, dim) {
        0 => unreachable!("canonical generators are nonzero"),
        1 => unreachable!("proportional generators are merged by canonicalization"),
        2 => {
            // signs depend only on the projection of w to the generator span
            let (u1, u2) = spanning_pair(gens);
            let h: Vec<(i128, i128)> = gens.iter().map(|g| (dot(g, u1), dot(g, u2))).collect();
            planar_chamber_signs(&h)
        }
        _ => spatial_chamber_signs(gens),
    }
}

/// Chambers of a central line arrangement in the plane: sort the 2J rays of
/// the lines and take one representative strictly inside each sector.
fn planar_chamber_signs(h: &[(i128, i128)]) -> Vec<Vec<i8>> {
    let mut rays: Vec<(i128, i128)> = Vec::with_capacity(2 * h.len());
    for &(x, y) in h {
        rays.push((-y, x));
        rays.push((y, -x));
    }
    rays.sort_by(compare_by_angle);
    rays.dedup();
    let mut out = Vec::with_capacity(rays.len());
    for k in 0..rays.len() {
        let a = rays[k];
        let b = rays[(k + 1) % rays.len()];
        let w = (a.0 + b.0, a.1 + b.1);
        let signs: Vec<i8> = h
            .iter()
            .map(|&(x, y)| {
                let d = x * w.0 + y * w.1;
                debug_assert_ne!(d, 0, "sector representative lies on an arrangement line");
                if d > 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        out.push(signs);
    }
    out
}

fn compare_by_angle(a: &(i128, i128), b: &(i128, i128)) -> std::cmp::Ordering {
    fn half(v: &(i128, i128)) -> u8 {
        u8::from(!(v.1 > 0 || (v.1 == 0 && v.0 > 0)))
    }
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 * b.1 - a.1 * b.0;
        cross.cmp(&0).reverse()
    })
}

/// Chambers of a central plane arrangement in 3-space with spanning normals:
/// every chamber is a pointed cone, hence owns an extreme ray along some
/// `±gᵢ×gⱼ`; the chambers around such a ray are the planar chambers of the
/// arrangement restricted to a transverse plane.
fn spatial_chamber_signs(gens: &[Vec<i64>]) -> Vec<Vec<i8>> {
    let mut out: BTreeSet<Vec<i8>> = BTreeSet::new();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let c = cross3(&gens[i], &gens[j]);
            debug_assert!(c != [0, 0, 0]);
            for ray in [c, [-c[0], -c[1], -c[2]]] {
                let zero_set: Vec<usize> = (0..gens.len())
                    .filter(|&k| dot3(&gens[k], &ray) == 0)
                    .collect();
                let fixed: Vec<(usize, i8)> = (0..gens.len())
                    .filter(|k| !zero_set.contains(k))
                    .map(|k| (k, if dot3(&gens[k], &ray) > 0 { 1 } else { -1 }))
                    .collect();
                let ray64 = [ray[0] as i64, ray[1] as i64, ray[2] as i64];
                let basis = integer_kernel(&[ray64.to_vec()], 3);
                debug_assert_eq!(basis.len(), 2);
                let h: Vec<(i128, i128)> = zero_set
                    .iter()
                    .map(|&k| (dot(&gens[k], &basis[0]), dot(&gens[k], &basis[1])))
                    .collect();
                for sub in planar_chamber_signs(&h) {
                    let mut signs = vec![0i8; gens.len()];
                    for (&k, s) in zero_set.iter().zip(sub) {
                        signs[k] = s;
                    }
                    for &(k, s) in &fixed {
                        signs[k] = s;
                    }
                    out.insert(signs);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn dot3(a: &[i64], b: &[i128; 3]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y).sum()
}

fn cross3(a: &[i64], b: &[i64]) -> [i128; 3] {
    let (a, b) = (
        [a[0] as i128, a[1] as i128, a[2] as i128],
        [b[0] as i128, b[1] as i128, b[2] as i128],
    );
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Rank of the generator set over the rationals.
fn rank(gens: &[Vec<i64>], dim: usize) -> usize {
    dim - integer_kernel(gens, dim).len()
}

/// Two generators spanning the (rank-2) generator plane.
fn spanning_pair(gens: &[Vec<i64>]) -> (&Vec<i64>, &Vec<i64>) {
    let u1 = &gens[0];
    let u2 = gens[1..]
        .iter()
        .find(|g| !proportional(u1, g))
        .expect("rank 2 needs an independent pair");
    (u1, u2)
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if a[i] as i128 * b[j] as i128 != a[j] as i128 * b[i] as i128 {
                return false;
            }
        }
    }
    true
}
