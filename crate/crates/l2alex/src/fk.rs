//! Formal Fuglede-Kadison determinant rules for the operator shapes the
//! torsion computations actually use, plus the product-with-a-circle torsion
//! from CW cell counts.
//!
//! All determinants here are constant exponents of `max(1,t)`: the operator
//! `Id - t^k·R_g` for `g` of infinite order has determinant `max(1, t^k)`,
//! whose dot-equality class is `max(1,t)^{|k|}`.

use crate::error::{Error, Result};

/// The operator `Id - t^k·R_g` for a group element `g` declared of infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialOperator {
    pub k: i64,
}

/// A block-diagonal operator built from determinant-computable blocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockDiagonalSpec {
    blocks: Vec<(Block, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Monomial(MonomialOperator),
    Nested(BlockDiagonalSpec),
}

impl BlockDiagonalSpec {
    pub fn new() -> Self {
        BlockDiagonalSpec { blocks: Vec::new() }
    }

    /// Adds a block with the given multiplicity (must be at least 1).
    pub fn push(mut self, block: Block, multiplicity: u32) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::InvalidParameters(
                "block multiplicity must be at least 1".to_string(),
            ));
        }
        self.blocks.push((block, multiplicity));
        Ok(self)
    }

    pub fn monomial(self, k: i64, multiplicity: u32) -> Result<Self> {
        self.push(Block::Monomial(MonomialOperator { k }), multiplicity)
    }

    /// Total matrix size of the block-diagonal operator.
    pub fn size(&self) -> u64 {
        self.blocks
            .iter()
            .map(|(b, m)| {
                *m as u64
                    * match b {
                        Block::Monomial(_) => 1,
                        Block::Nested(inner) => inner.size(),
                    }
            })
            .sum()
    }
}

/// `det(Id - t^k·R_g) = max(1, t^k) ≐ max(1,t)^{|k|}`.
pub fn det_monomial(op: MonomialOperator) -> i64 {
    op.k.abs()
}

/// Multiplicativity on block diagonals: exponents add, weighted by multiplicity.
pub fn det_block_diagonal(spec: &BlockDiagonalSpec) -> i64 {
    spec.blocks
        .iter()
        .map(|(b, m)| {
            *m as i64
                * match b {
                    Block::Monomial(op) => det_monomial(*op),
                    Block::Nested(inner) => det_block_diagonal(inner),
                }
        })
        .sum()
}

/// Cell counts `c_0, …, c_n` of a finite CW-complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwCellCounts {
    counts: Vec<u64>,
}

impl CwCellCounts {
    /// A nonempty connected complex needs at least one 0-cell.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.first().copied().unwrap_or(0) == 0 {
            return Err(Error::InvalidParameters(
                "a nonempty connected complex needs c_0 >= 1".to_string(),
            ));
        }
        Ok(CwCellCounts { counts })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// A two-step chain complex `0 → ℓ²(G)^k → ℓ²(G)^{k+l} → ℓ²(G)^l → 0` with a
/// column subset `J` of size `l` and declared determinant data for the two
/// square minors it selects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComplexSpec {
    pub k: usize,
    pub l: usize,
    pub j: Vec<usize>,
    pub d2_minor: Option<BlockDiagonalSpec>,
    pub d1_minor: Option<BlockDiagonalSpec>,
}

impl TwoComplexSpec {
    fn validate(&self) -> Result<()> {
        if self.j.len() != self.l {
            return Err(Error::InvalidParameters(format!(
                "J must have size l = {}, got {}",
                self.l,
                self.j.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &idx in &self.j {
            if idx < 1 || idx > self.k + self.l || !seen.insert(idx) {
                return Err(Error::InvalidParameters(format!(
                    "J must be a subset of 1..={} without repeats",
                    self.k + self.l
                )));
            }
        }
        Ok(())
    }
}

/// Torsion exponent of the two-step complex: `det ∂_2(J) / det ∂_1(J)` as
/// exponents, i.e. the difference of the two declared determinant exponents.
pub fn torsion_two_complex(spec: &TwoComplexSpec) -> Result<i64> {
    spec.validate()?;
    let d2 = spec.d2_minor.as_ref().ok_or(Error::MissingDeclaration(
        "determinant data for the rows of the second boundary map outside J",
    ))?;
    let d1 = spec.d1_minor.as_ref().ok_or(Error::MissingDeclaration(
        "determinant data for the columns of the first boundary map in J",
    ))?;
    if d2.size() != spec.k as u64 {
        return Err(Error::DimensionMismatch {
            expected: spec.k,
            found: d2.size() as usize,
        });
    }
    if d1.size() != spec.l as u64 {
        return Err(Error::DimensionMismatch {
            expected: spec.l,
            found: d1.size() as usize,
        });
    }
    Ok(det_block_diagonal(d2) - det_block_diagonal(d1))
}

/// Torsion exponent of `W × S¹`: `-χ(W)·|φ(T)|` for the circle generator `T`,
/// declared of infinite image.
pub fn product_with_circle(cells: &CwCellCounts, phi_t: i64) -> i64 {
    -cells.euler_characteristic() * phi_t.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_determinants() {
        assert_eq!(det_monomial(MonomialOperator { k: 5 }), 5);
        assert_eq!(det_monomial(MonomialOperator { k: 0 }), 0);
        assert_eq!(det_monomial(MonomialOperator { k: -3 }), 3);
    }

    #[test]
    fn block_diagonal_sums_with_multiplicity() {
        let spec = BlockDiagonalSpec::new().monomial(2, 3).unwrap();
        assert_eq!(det_block_diagonal(&spec), 6);
        assert_eq!(det_block_diagonal(&BlockDiagonalSpec::new()), 0);
        let mixed = BlockDiagonalSpec::new()
            .monomial(1, 2)
            .unwrap()
            .monomial(-1, 1)
            .unwrap();
        assert_eq!(det_block_diagonal(&mixed), 3);
    }

    #[test]
    fn block_diagonal_matches_direct_product_evaluation() {
        // oracle: f(t) = prod max(1, t^{k_i}) = t^m * max(1,t)^E with
        // m = sum of negative k's and E = sum of |k|, read off at t = 2, 1/2
        let ks = [1i64, 1, -1, 4, -2];
        let mut spec = BlockDiagonalSpec::new();
        for &k in &ks {
            spec = spec.monomial(k, 1).unwrap();
        }
        let log2_f_at_2: i64 = ks.iter().filter(|&&k| k > 0).sum();
        let log2_f_at_half: i64 = ks.iter().filter(|&&k| k < 0).map(|&k| -k).sum();
        let m = -log2_f_at_half;
        let read_off = log2_f_at_2 - m;
        assert_eq!(det_block_diagonal(&spec), read_off);
    }

    #[test]
    fn nesting_and_permutation_invariance() {
        let flat = BlockDiagonalSpec::new()
            .monomial(2, 1)
            .unwrap()
            .monomial(-3, 2)
            .unwrap();
        let nested = BlockDiagonalSpec::new()
            .push(
                Block::Nested(BlockDiagonalSpec::new().monomial(-3, 2).unwrap()),
                1,
            )
            .unwrap()
            .monomial(2, 1)
            .unwrap();
        assert_eq!(det_block_diagonal(&flat), det_block_diagonal(&nested));
        assert_eq!(flat.size(), nested.size());
    }

    #[test]
    fn euler_characteristics() {
        let disc = CwCellCounts::new(vec![1, 0]).unwrap();
        assert_eq!(disc.euler_characteristic(), 1);
        let annulus = CwCellCounts::new(vec![1, 1]).unwrap();
        assert_eq!(annulus.euler_characteristic(), 0);
        let punctured = CwCellCounts::new(vec![1, 3]).unwrap();
        assert_eq!(punctured.euler_characteristic(), -2);
        assert!(CwCellCounts::new(vec![0, 2]).is_err());
    }

    #[test]
    fn product_with_circle_examples() {
        let disc = CwCellCounts::new(vec![1, 0]).unwrap();
        assert_eq!(product_with_circle(&disc, 7), -7);
        let annulus = CwCellCounts::new(vec![1, 1]).unwrap();
        assert_eq!(product_with_circle(&annulus, 9), 0);
        let twice_punctured = CwCellCounts::new(vec![1, 2]).unwrap();
        assert_eq!(product_with_circle(&twice_punctured, -4), 4);
    }

    #[test]
    fn product_with_circle_depends_only_on_euler_characteristic() {
        let a = CwCellCounts::new(vec![1, 3]).unwrap();
        let b = CwCellCounts::new(vec![2, 5, 1]).unwrap();
        assert_eq!(a.euler_characteristic(), b.euler_characteristic());
        for phi in -5..=5 {
            assert_eq!(product_with_circle(&a, phi), product_with_circle(&b, phi));
        }
    }

    /// Keychain pattern: the exterior is (e-punctured disc) × S¹; the selected
    /// minors are e monomial blocks over one monomial block.
    fn keychain_two_complex(e: usize, phi: i64) -> TwoComplexSpec {
        TwoComplexSpec {
            k: e,
            l: 1,
            j: vec![1],
            d2_minor: Some(BlockDiagonalSpec::new().monomial(phi, e as u32).unwrap()),
            d1_minor: Some(BlockDiagonalSpec::new().monomial(phi, 1).unwrap()),
        }
    }

    #[test]
    fn two_complex_torsion() {
        // solid-torus pattern: trivial top minor over one monomial block
        let solid = TwoComplexSpec {
            k: 0,
            l: 1,
            j: vec![1],
            d2_minor: Some(BlockDiagonalSpec::new()),
            d1_minor: Some(BlockDiagonalSpec::new().monomial(4, 1).unwrap()),
        };
        assert_eq!(torsion_two_complex(&solid).unwrap(), -4);

        let balanced = TwoComplexSpec {
            k: 1,
            l: 1,
            j: vec![2],
            d2_minor: Some(BlockDiagonalSpec::new().monomial(5, 1).unwrap()),
            d1_minor: Some(BlockDiagonalSpec::new().monomial(-5, 1).unwrap()),
        };
        assert_eq!(torsion_two_complex(&balanced).unwrap(), 0);

        for e in 1..=6usize {
            for phi in [-3i64, 1, 2] {
                let spec = keychain_two_complex(e, phi);
                let cells = CwCellCounts::new(vec![1, e as u64]).unwrap();
                assert_eq!(
                    torsion_two_complex(&spec).unwrap(),
                    product_with_circle(&cells, phi)
                );
            }
        }
    }

    #[test]
    fn two_complex_validation() {
        let mut spec = keychain_two_complex(2, 3);
        spec.d1_minor = None;
        assert!(matches!(
            torsion_two_complex(&spec),
            Err(Error::MissingDeclaration(_))
        ));

        let mut spec = keychain_two_complex(2, 3);
        spec.j = vec![9];
        assert!(torsion_two_complex(&spec).is_err());

        let mut spec = keychain_two_complex(2, 3);
        spec.d2_minor = Some(BlockDiagonalSpec::new().monomial(3, 5).unwrap());
        assert!(matches!(
            torsion_two_complex(&spec),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
