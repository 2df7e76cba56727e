//! Multi-links as constructor trees: validation, component counts and
//! linking matrices for every constructor.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::identify::{self, Splitness};

/// 1-based index of a link component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentRef(pub usize);

impl From<usize> for ComponentRef {
    fn from(i: usize) -> Self {
        ComponentRef(i)
    }
}

/// Constructor tree for a multi-link with ordered components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinkSpec {
    /// The torus link `T(ep, eq)` with `e` components, `gcd(p,q) = 1`.
    TorusLink { e: i64, p: i64, q: i64 },
    /// `T(ep, eq) ∪ H_v`: a torus link inside a solid torus, the axis last.
    TorusInSolidTorus { e: i64, p: i64, q: i64 },
    /// `T(ep, eq) ∪ H_v ∪ H_h`: a torus link inside a thickened torus, the two axes last.
    TorusInThickenedTorus { e: i64, p: i64, q: i64 },
    /// `T(e, 0) ∪ H_v`: `e` parallel unknots threaded by one circling unknot.
    Keychain { e: i64 },
    /// `T(e, ek) ∪ H_v`: `e` parallel `k`-twisted copies inside a solid torus.
    ParallelInSolidTorus { e: i64, k: i64 },
    /// Connected sum joining `left_comp` of `left` with `right_comp` of `right`;
    /// the merged component is reordered last.
    ConnectedSum {
        left: Box<LinkSpec>,
        left_comp: ComponentRef,
        right: Box<LinkSpec>,
        right_comp: ComponentRef,
    },
    /// Replaces component `comp` by the cable pattern `T(ep, eq)` drawn on the
    /// boundary of its tubular neighbourhood (preferred-longitude framing);
    /// the `e` new components occupy the position block of `comp`.
    Cable {
        base: Box<LinkSpec>,
        comp: ComponentRef,
        e: i64,
        p: i64,
        q: i64,
    },
    /// Deletes component `comp`; remaining components keep their relative order.
    Delete {
        base: Box<LinkSpec>,
        comp: ComponentRef,
    },
}

impl LinkSpec {
    pub fn unknot() -> Self {
        LinkSpec::TorusLink { e: 1, p: 1, q: 0 }
    }

    pub fn hopf() -> Self {
        LinkSpec::TorusLink { e: 2, p: 1, q: 1 }
    }

    pub fn sum(
        left: LinkSpec,
        left_comp: impl Into<ComponentRef>,
        right: LinkSpec,
        right_comp: impl Into<ComponentRef>,
    ) -> Self {
        LinkSpec::ConnectedSum {
            left: Box::new(left),
            left_comp: left_comp.into(),
            right: Box::new(right),
            right_comp: right_comp.into(),
        }
    }

    pub fn cable(base: LinkSpec, comp: impl Into<ComponentRef>, e: i64, p: i64, q: i64) -> Self {
        LinkSpec::Cable {
            base: Box::new(base),
            comp: comp.into(),
            e,
            p,
            q,
        }
    }

    pub fn delete(base: LinkSpec, comp: impl Into<ComponentRef>) -> Self {
        LinkSpec::Delete {
            base: Box::new(base),
            comp: comp.into(),
        }
    }

    /// Component count of a validated spec.
    pub fn component_count(&self) -> usize {
        match self {
            LinkSpec::TorusLink { e, .. } => *e as usize,
            LinkSpec::TorusInSolidTorus { e, .. }
            | LinkSpec::Keychain { e }
            | LinkSpec::ParallelInSolidTorus { e, .. } => *e as usize + 1,
            LinkSpec::TorusInThickenedTorus { e, .. } => *e as usize + 2,
            LinkSpec::ConnectedSum { left, right, .. } => {
                left.component_count() + right.component_count() - 1
            }
            LinkSpec::Cable { base, e, .. } => base.component_count() - 1 + *e as usize,
            LinkSpec::Delete { base, .. } => base.component_count() - 1,
        }
    }
}

/// Symmetric integer matrix of pairwise linking numbers (zero diagonal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl LinkingMatrix {
    pub fn zeros(n: usize) -> Self {
        LinkingMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Linking number between components `i` and `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    /// Row `comp` (0-based) with the diagonal entry removed: the vector
    /// `(lk(L_i, L_comp))_{i ≠ comp}` in component order.
    pub fn row_excluding(&self, comp: usize) -> Vec<i64> {
        (0..self.n)
            .filter(|&i| i != comp)
            .map(|i| self.get(i, comp))
            .collect()
    }

    /// Principal submatrix obtained by removing component `remove` (0-based).
    pub fn principal_submatrix(&self, remove: usize) -> LinkingMatrix {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != remove).collect();
        let mut m = LinkingMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.entries[a * m.n + b] = self.get(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// A validated link with its component count, linking matrix and build notes.
#[derive(Debug, Clone)]
pub struct LinkObject {
    spec: LinkSpec,
    num_components: usize,
    linking: LinkingMatrix,
    warnings: Vec<String>,
}

impl LinkObject {
    pub fn spec(&self) -> &LinkSpec {
        &self.spec
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    pub fn linking(&self) -> &LinkingMatrix {
        &self.linking
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Validates a constructor tree and computes its linking data.
pub fn build_link(spec: LinkSpec) -> Result<LinkObject> {
    let linking = build_matrix(&spec)?;
    let num_components = linking.size();
    let mut warnings = Vec::new();
    match identify::splitness(&spec) {
        Splitness::Split => warnings.push(
            "construction is a split link; the torsion class vanishes".to_string(),
        ),
        Splitness::Unknown => warnings.push(
            "splitness undecided by the constructor algebra; torsion formulas assume a non-split link"
                .to_string(),
        ),
        Splitness::NonSplit => {}
    }
    Ok(LinkObject {
        spec,
        num_components,
        linking,
        warnings,
    })
}

/// The linking matrix of a built link.
pub fn linking_matrix(obj: &LinkObject) -> &LinkingMatrix {
    obj.linking()
}

/// Linking matrix of a validated spec, without building the full object.
pub(crate) fn spec_linking_matrix(spec: &LinkSpec) -> Result<LinkingMatrix> {
    build_matrix(spec)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameters(msg()))
    }
}

fn check_coprime(p: i64, q: i64) -> Result<()> {
    require(p.gcd(&q) == 1, || {
        format!("p = {p} and q = {q} must be coprime")
    })
}

/// Desk-scale bound on strand counts; a dense linking matrix must stay small.
pub const MAX_STRANDS: i64 = 4096;

fn check_positive_e(e: i64) -> Result<()> {
    require(e >= 1, || format!("e = {e} must be a positive integer"))?;
    require(e <= MAX_STRANDS, || {
        format!("e = {e} exceeds the supported strand count {MAX_STRANDS}")
    })
}

fn check_comp(comp: ComponentRef, n: usize) -> Result<usize> {
    require(comp.0 >= 1 && comp.0 <= n, || {
        format!("component index {} out of range 1..={n}", comp.0)
    })?;
    Ok(comp.0 - 1)
}

fn build_matrix(spec: &LinkSpec) -> Result<LinkingMatrix> {
    match spec {
        LinkSpec::TorusLink { e, p, q } => {
            check_positive_e(*e)?;
            check_coprime(*p, *q)?;
            if *e >= 2 && (*p == 0 || *q == 0) {
                return Err(Error::SplitLink(format!(
                    "T({}, {}) is a split union of {e} unknots",
                    e * p,
                    e * q
                )));
            }
            let n = *e as usize;
            let mut m = LinkingMatrix::zeros(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    m.set_sym(i, j, p * q);
                }
            }
            Ok(m)
        }
        LinkSpec::TorusInSolidTorus { e, p, q } => {
            check_positive_e(*e)?;
            check_coprime(*p, *q)?;
            require(*p != 0, || {
                "torus link in a solid torus requires p != 0".to_string()
            })?;
            let n = *e as usize + 1;
            let mut m = LinkingMatrix::zeros(n);
            for i in 0..n - 1 {
                for j in (i + 1)..n - 1 {
                    m.set_sym(i, j, p * q);
                }
                m.set_sym(i, n - 1, *p);
            }
            Ok(m)
        }
        LinkSpec::TorusInThickenedTorus { e, p, q } => {
            check_positive_e(*e)?;
            check_coprime(*p, *q)?;
            let n = *e as usize + 2;
            let mut m = LinkingMatrix::zeros(n);
            for i in 0..n - 2 {
                for j in (i + 1)..n - 2 {
                    m.set_sym(i, j, p * q);
                }
                m.set_sym(i, n - 2, *p);
                m.set_sym(i, n - 1, *q);
            }
            m.set_sym(n - 2, n - 1, 1);
            Ok(m)
        }
        LinkSpec::Keychain { e } => {
            check_positive_e(*e)?;
            let n = *e as usize + 1;
            let mut m = LinkingMatrix::zeros(n);
            for i in 0..n - 1 {
                m.set_sym(i, n - 1, 1);
            }
            Ok(m)
        }
        LinkSpec::ParallelInSolidTorus { e, k } => {
            check_positive_e(*e)?;
            let n = *e as usize + 1;
            let mut m = LinkingMatrix::zeros(n);
            for i in 0..n - 1 {
                for j in (i + 1)..n - 1 {
                    m.set_sym(i, j, *k);
                }
                m.set_sym(i, n - 1, 1);
            }
            Ok(m)
        }
        LinkSpec::ConnectedSum {
            left,
            left_comp,
            right,
            right_comp,
        } => {
            let lm = build_matrix(left)?;
            let rm = build_matrix(right)?;
            let lc = check_comp(*left_comp, lm.size())?;
            let rc = check_comp(*right_comp, rm.size())?;
            let c = lm.size() - 1;
            let d = rm.size() - 1;
            let n = c + d + 1;
            let left_keep: Vec<usize> = (0..lm.size()).filter(|&i| i != lc).collect();
            let right_keep: Vec<usize> = (0..rm.size()).filter(|&i| i != rc).collect();
            let mut m = LinkingMatrix::zeros(n);
            for (a, &i) in left_keep.iter().enumerate() {
                for (b, &j) in left_keep.iter().enumerate().skip(a + 1) {
                    m.set_sym(a, b, lm.get(i, j));
                }
                m.set_sym(a, n - 1, lm.get(i, lc));
            }
            for (a, &i) in right_keep.iter().enumerate() {
                for (b, &j) in right_keep.iter().enumerate().skip(a + 1) {
                    m.set_sym(c + a, c + b, rm.get(i, j));
                }
                m.set_sym(c + a, n - 1, rm.get(i, rc));
            }
            Ok(m)
        }
        LinkSpec::Cable {
            base,
            comp,
            e,
            p,
            q,
        } => {
            let bm = build_matrix(base)?;
            let comp0 = check_comp(*comp, bm.size())?;
            check_positive_e(*e)?;
            check_coprime(*p, *q)?;
            require(*p != 0, || "cabling requires p != 0".to_string())?;
            let eb = *e as usize;
            let n = bm.size() - 1 + eb;
            // base component m (0-based, m != comp0) lands at this index
            let place = |m: usize| if m < comp0 { m } else { m + eb - 1 };
            let mut out = LinkingMatrix::zeros(n);
            for i in 0..eb {
                for j in (i + 1)..eb {
                    out.set_sym(comp0 + i, comp0 + j, p * q);
                }
            }
            for mth in (0..bm.size()).filter(|&m| m != comp0) {
                for i in 0..eb {
                    out.set_sym(place(mth), comp0 + i, p * bm.get(mth, comp0));
                }
                for other in (mth + 1..bm.size()).filter(|&m| m != comp0) {
                    out.set_sym(place(mth), place(other), bm.get(mth, other));
                }
            }
            Ok(out)
        }
        LinkSpec::Delete { base, comp } => {
            let bm = build_matrix(base)?;
            let comp0 = check_comp(*comp, bm.size())?;
            require(bm.size() >= 2, || {
                "cannot delete the only component of a link".to_string()
            })?;
            Ok(bm.principal_submatrix(comp0))
        }
    }
}
