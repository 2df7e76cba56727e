//! Structural identification of constructor trees with Seifert-fibered links,
//! and the sound-but-incomplete split detector built on top of it.

use crate::link::{LinkObject, LinkSpec};

/// A link recognized inside the Seifert-fibered family (or as a trivial split union).
///
/// Component order convention: torus strands first, then the solid-torus axis,
/// then the thickened-torus axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SeifertForm {
    /// `T(ep, eq)`.
    Torus { e: i64, p: i64, q: i64 },
    /// `T(ep, eq) ∪ H_v` with `p ≠ 0`.
    InSolid { e: i64, p: i64, q: i64 },
    /// `T(ep, eq) ∪ H_v ∪ H_h`.
    InThick { e: i64, p: i64, q: i64 },
    /// `T(m, 0)`: `m ≥ 2` unlinked unknots.
    Unlinked { m: i64 },
}

impl SeifertForm {
    pub(crate) fn unknot() -> Self {
        SeifertForm::Torus { e: 1, p: 1, q: 0 }
    }

    pub(crate) fn is_trivial_knot(&self) -> bool {
        matches!(self, SeifertForm::Torus { e: 1, p, q } if (p.abs() - 1) * (q.abs() - 1) == 0)
    }
}

/// Outcome of the structural split check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitness {
    Split,
    NonSplit,
    Unknown,
}

/// Split detection result with a short explanation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub splitness: Splitness,
    pub detail: String,
}

/// Structural split check for a built link.
pub fn detect_split(obj: &LinkObject) -> SplitReport {
    let splitness = splitness(obj.spec());
    let detail = match (&splitness, identify(obj.spec())) {
        (Splitness::Split, Some(SeifertForm::Unlinked { m })) => {
            format!("reduces to {m} unlinked unknots")
        }
        (Splitness::Split, _) => "a constructor step produces a split union".to_string(),
        (Splitness::NonSplit, Some(_)) => {
            "identified with a non-split Seifert-fibered link".to_string()
        }
        (Splitness::NonSplit, None) => "constructor algebra certifies non-splitness".to_string(),
        (Splitness::Unknown, _) => "structural analysis is inconclusive".to_string(),
    };
    SplitReport { splitness, detail }
}

/// Tries to rewrite a validated tree as a single Seifert-fibered link.
///
/// Deletions inside the family and cables over identified torus knots are
/// folded; connected sums and general cables are left unidentified.
pub(crate) fn identify(spec: &LinkSpec) -> Option<SeifertForm> {
    match spec {
        LinkSpec::TorusLink { e, p, q } => Some(SeifertForm::Torus {
            e: *e,
            p: *p,
            q: *q,
        }),
        LinkSpec::TorusInSolidTorus { e, p, q } => Some(SeifertForm::InSolid {
            e: *e,
            p: *p,
            q: *q,
        }),
        LinkSpec::TorusInThickenedTorus { e, p, q } => Some(SeifertForm::InThick {
            e: *e,
            p: *p,
            q: *q,
        }),
        LinkSpec::Keychain { e } => Some(SeifertForm::InSolid { e: *e, p: 1, q: 0 }),
        LinkSpec::ParallelInSolidTorus { e, k } => {
            Some(SeifertForm::InSolid { e: *e, p: 1, q: *k })
        }
        LinkSpec::Delete { base, comp } => identify_delete(identify(base)?, comp.0 as i64),
        LinkSpec::Cable {
            base,
            comp: _,
            e,
            p,
            q,
        } => identify_cable(identify(base)?, *e, *p, *q),
        LinkSpec::ConnectedSum { .. } => None,
    }
}

fn identify_delete(base: SeifertForm, comp: i64) -> Option<SeifertForm> {
    match base {
        // deleting one strand of T(ep, eq) leaves T((e-1)p, (e-1)q)
        SeifertForm::Torus { e, p, q } if e >= 2 => Some(SeifertForm::Torus { e: e - 1, p, q }),
        SeifertForm::Torus { .. } => None,
        SeifertForm::InSolid { e, p, q } => {
            if comp == e + 1 {
                if e >= 2 && q == 0 {
                    Some(SeifertForm::Unlinked { m: e })
                } else {
                    Some(SeifertForm::Torus { e, p, q })
                }
            } else if e == 1 {
                // only the axis remains
                Some(SeifertForm::unknot())
            } else {
                Some(SeifertForm::InSolid { e: e - 1, p, q })
            }
        }
        SeifertForm::InThick { e, p, q } => {
            if comp == e + 2 {
                // drop the horizontal axis; requires p != 0 to stay in the family
                (p != 0).then_some(SeifertForm::InSolid { e, p, q })
            } else if comp == e + 1 {
                // drop the vertical axis; the roles of p and q swap
                (q != 0).then_some(SeifertForm::InSolid { e, p: q, q: p })
            } else if e == 1 {
                // the two axes form a Hopf link
                Some(SeifertForm::Torus { e: 2, p: 1, q: 1 })
            } else {
                Some(SeifertForm::InThick { e: e - 1, p, q })
            }
        }
        SeifertForm::Unlinked { m } => {
            if m > 2 {
                Some(SeifertForm::Unlinked { m: m - 1 })
            } else {
                Some(SeifertForm::unknot())
            }
        }
    }
}

fn identify_cable(base: SeifertForm, e: i64, p: i64, q: i64) -> Option<SeifertForm> {
    match base {
        SeifertForm::Torus { e: 1, p: bp, q: bq } => {
            if base.is_trivial_knot() {
                // cabling the unknot draws T(ep, eq) on a standard torus
                if e >= 2 && q == 0 {
                    Some(SeifertForm::Unlinked { m: e })
                } else {
                    Some(SeifertForm::Torus { e, p, q })
                }
            } else if p == 1 && q == bp * bq {
                // the Seifert-slope cable of T(bp, bq) is the torus link T(e·bp, e·bq)
                Some(SeifertForm::Torus { e, p: bp, q: bq })
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Sound-but-incomplete structural splitness.
pub(crate) fn splitness(spec: &LinkSpec) -> Splitness {
    if let Some(form) = identify(spec) {
        return match form {
            SeifertForm::Unlinked { .. } => Splitness::Split,
            _ => Splitness::NonSplit,
        };
    }
    match spec {
        LinkSpec::ConnectedSum { left, right, .. } => match (splitness(left), splitness(right)) {
            (Splitness::Split, _) | (_, Splitness::Split) => Splitness::Split,
            (Splitness::NonSplit, Splitness::NonSplit) => Splitness::NonSplit,
            _ => Splitness::Unknown,
        },
        LinkSpec::Cable { base, e, q, .. } => match splitness(base) {
            Splitness::Split => Splitness::Split,
            Splitness::Unknown => Splitness::Unknown,
            Splitness::NonSplit => {
                if *e >= 2 && *q == 0 && base.component_count() == 1 {
                    // a 0-framed multi-cable splits exactly over the unknot; an
                    // unidentified knot base might still be one
                    match identify(base) {
                        Some(form) if !form.is_trivial_knot() => Splitness::NonSplit,
                        _ => Splitness::Unknown,
                    }
                } else {
                    Splitness::NonSplit
                }
            }
        },
        // deleting a component can split a non-split link, so nothing is known
        LinkSpec::Delete { .. } => Splitness::Unknown,
        _ => unreachable!("leaf constructors are always identified"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::build_link;

    fn report(spec: LinkSpec) -> Splitness {
        detect_split(&build_link(spec).unwrap()).splitness
    }

    #[test]
    fn keychain_minus_axis_is_split() {
        assert_eq!(
            report(LinkSpec::delete(LinkSpec::Keychain { e: 2 }, 3)),
            Splitness::Split
        );
    }

    #[test]
    fn torus_links_are_non_split() {
        assert_eq!(
            report(LinkSpec::TorusLink { e: 2, p: 2, q: 3 }),
            Splitness::NonSplit
        );
    }

    #[test]
    fn deleting_a_torus_strand_stays_identified() {
        let spec = LinkSpec::delete(LinkSpec::TorusLink { e: 3, p: 2, q: 1 }, 3);
        assert_eq!(
            identify(&spec),
            Some(SeifertForm::Torus { e: 2, p: 2, q: 1 })
        );
        assert_eq!(report(spec), Splitness::NonSplit);
    }

    #[test]
    fn zero_framed_cable_of_unknot_splits() {
        assert_eq!(
            report(LinkSpec::cable(LinkSpec::unknot(), 1, 2, 1, 0)),
            Splitness::Split
        );
    }

    #[test]
    fn cable_of_trefoil_is_non_split_even_with_zero_framing() {
        let trefoil = LinkSpec::TorusLink { e: 1, p: 2, q: 3 };
        assert_eq!(
            report(LinkSpec::cable(trefoil, 1, 2, 1, 0)),
            Splitness::NonSplit
        );
    }

    #[test]
    fn deleting_from_a_sum_is_unknown() {
        let sum = LinkSpec::sum(LinkSpec::hopf(), 2, LinkSpec::hopf(), 2);
        assert_eq!(report(LinkSpec::delete(sum, 3)), Splitness::Unknown);
    }

    #[test]
    fn chained_deletions_recover_the_unknot() {
        // two unlinked unknots, then forget one of them
        let unlinked = LinkSpec::cable(LinkSpec::unknot(), 1, 2, 1, 0);
        let spec = LinkSpec::delete(unlinked, 1);
        assert_eq!(identify(&spec), Some(SeifertForm::unknot()));
        assert_eq!(report(spec), Splitness::NonSplit);
    }

    #[test]
    fn axis_deletion_swaps_roles_in_thickened_torus() {
        let spec = LinkSpec::delete(LinkSpec::TorusInThickenedTorus { e: 2, p: 2, q: 1 }, 3);
        assert_eq!(
            identify(&spec),
            Some(SeifertForm::InSolid { e: 2, p: 1, q: 2 })
        );
    }

    #[test]
    fn seifert_slope_cable_of_torus_knot_is_a_torus_link() {
        let trefoil = LinkSpec::TorusLink { e: 1, p: 2, q: 3 };
        let spec = LinkSpec::cable(trefoil, 1, 2, 1, 6);
        assert_eq!(
            identify(&spec),
            Some(SeifertForm::Torus { e: 2, p: 2, q: 3 })
        );
    }
}
