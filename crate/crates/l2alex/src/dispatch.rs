//! Structural recursion over constructor trees: picks the matching closed form
//! or compositional rule for every node and records a replayable derivation
//! trace.

use crate::error::{Error, Result};
use crate::exponent::ExponentExpr;
use crate::identify::{self, SeifertForm, Splitness};
use crate::link::{spec_linking_matrix, LinkObject, LinkSpec};
use crate::torsion::{
    cabling_torsion, connected_sum_torsion, torres_delete, torsion_keychain,
    torsion_parallel_in_solid, torsion_torus_in_solid, torsion_torus_in_thickened,
    torsion_torus_link, CoefficientVector, TorsionClass,
};

/// Replayable payload of a derivation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOp {
    TorusLink {
        e: i64,
        p: i64,
        q: i64,
    },
    TorusInSolid {
        e: i64,
        p: i64,
        q: i64,
    },
    TorusInThickened {
        e: i64,
        p: i64,
        q: i64,
    },
    Keychain {
        e: i64,
    },
    ParallelInSolid {
        e: i64,
        k: i64,
    },
    SplitVanishing,
    ZeroFactor,
    TorresDelete {
        comp: usize,
        linking_row: Vec<i64>,
    },
    ConnectedSum {
        left_comp: usize,
        right_comp: usize,
    },
    Cable {
        comp: usize,
        e: i64,
        p: i64,
        q: i64,
        linking_row: Vec<i64>,
    },
}

impl TraceOp {
    /// Name of the formula this step applies.
    pub fn rule(&self) -> &'static str {
        match self {
            TraceOp::TorusLink { .. } => "torus-link",
            TraceOp::TorusInSolid { .. } => "torus-link-in-solid-torus",
            TraceOp::TorusInThickened { .. } => "torus-link-in-thickened-torus",
            TraceOp::Keychain { .. } => "keychain",
            TraceOp::ParallelInSolid { .. } => "parallel-strands-in-solid-torus",
            TraceOp::SplitVanishing => "split-vanishing",
            TraceOp::ZeroFactor => "zero-factor",
            TraceOp::TorresDelete { .. } => "torres-deletion",
            TraceOp::ConnectedSum { .. } => "connected-sum",
            TraceOp::Cable { .. } => "cabling",
        }
    }
}

/// One derivation step: the rule applied, the side conditions it assumes and
/// the exponent it produced.
#[derive(Debug, Clone)]
pub struct TraceNode {
    pub op: TraceOp,
    pub detail: String,
    pub side_conditions: Vec<String>,
    pub warnings: Vec<String>,
    pub result: TorsionClass,
    pub children: Vec<TraceNode>,
}

/// Proof-shaped record of which formula produced each factor.
#[derive(Debug, Clone)]
pub struct DerivationTrace {
    pub root: TraceNode,
}

impl DerivationTrace {
    /// Recomputes the torsion from the recorded steps alone.
    pub fn replay(&self) -> Result<TorsionClass> {
        replay_node(&self.root)
    }

    /// All warnings attached anywhere in the trace, in derivation order.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        collect_warnings(&self.root, &mut out);
        out
    }

    /// Indented textual rendering, one line per step.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_node(&self.root, 0, &mut out);
        out
    }
}

fn collect_warnings(node: &TraceNode, out: &mut Vec<String>) {
    for child in &node.children {
        collect_warnings(child, out);
    }
    out.extend(node.warnings.iter().cloned());
}

fn render_node(node: &TraceNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    out.push_str(&format!(
        "{pad}{}: {} => {}\n",
        node.op.rule(),
        node.detail,
        node.result
    ));
    for cond in &node.side_conditions {
        out.push_str(&format!("{pad}  [assumes] {cond}\n"));
    }
    for warn in &node.warnings {
        out.push_str(&format!("{pad}  [warning] {warn}\n"));
    }
    for child in &node.children {
        render_node(child, depth + 1, out);
    }
}

fn replay_node(node: &TraceNode) -> Result<TorsionClass> {
    match &node.op {
        TraceOp::TorusLink { e, p, q } => {
            Ok(TorsionClass::NonZero(torsion_torus_link(*e, *p, *q)?))
        }
        TraceOp::TorusInSolid { e, p, q } => {
            Ok(TorsionClass::NonZero(torsion_torus_in_solid(*e, *p, *q)?))
        }
        TraceOp::TorusInThickened { e, p, q } => Ok(TorsionClass::NonZero(
            torsion_torus_in_thickened(*e, *p, *q)?,
        )),
        TraceOp::Keychain { e } => Ok(TorsionClass::NonZero(torsion_keychain(*e)?)),
        TraceOp::ParallelInSolid { e, k } => {
            Ok(TorsionClass::NonZero(torsion_parallel_in_solid(*e, *k)?))
        }
        TraceOp::SplitVanishing | TraceOp::ZeroFactor => Ok(TorsionClass::Zero),
        TraceOp::TorresDelete { comp, linking_row } => {
            let base = replay_node(&node.children[0])?;
            torres_delete(&base, linking_row, *comp)
        }
        TraceOp::ConnectedSum {
            left_comp,
            right_comp,
        } => {
            let left = replay_node(&node.children[0])?;
            let right = replay_node(&node.children[1])?;
            let left = move_component_last(&left, *left_comp)?;
            let right = move_component_last(&right, *right_comp)?;
            connected_sum_torsion(&left, &right)
        }
        TraceOp::Cable {
            comp,
            e,
            p,
            q,
            linking_row,
        } => {
            let base = replay_node(&node.children[0])?;
            let base = move_component_last(&base, *comp)?;
            let cabled = cabling_torsion(&base, *e, *p, *q, linking_row)?;
            interleave_cable_block(&cabled, *comp, *e as usize)
        }
    }
}

/// Computes the torsion class of a built link together with its derivation.
///
/// The exponent is always symbolic in the multi-link coefficients; a concrete
/// coefficient vector is validated against the component count and only
/// influences warnings (the closed forms assume a nonzero class).
pub fn torsion(
    obj: &LinkObject,
    coeffs: &CoefficientVector,
) -> Result<(TorsionClass, DerivationTrace)> {
    if let Some(v) = coeffs.as_concrete() {
        if v.len() != obj.num_components() {
            return Err(Error::DimensionMismatch {
                expected: obj.num_components(),
                found: v.len(),
            });
        }
    }
    let mut root = torsion_node(obj.spec())?;
    if let Some(v) = coeffs.as_concrete() {
        if v.iter().all(|&x| x == 0) {
            root.warnings.push(
                "zero coefficient vector: the nonvanishing hypotheses of the closed forms are not met"
                    .to_string(),
            );
        }
    }
    Ok((root.result.clone(), DerivationTrace { root }))
}

fn torsion_node(spec: &LinkSpec) -> Result<TraceNode> {
    let splitness = identify::splitness(spec);
    if splitness == Splitness::Split {
        return Ok(TraceNode {
            op: TraceOp::SplitVanishing,
            detail: "split link".to_string(),
            side_conditions: Vec::new(),
            warnings: vec!["split link: the torsion class vanishes".to_string()],
            result: TorsionClass::Zero,
            children: Vec::new(),
        });
    }
    let mut node = torsion_node_inner(spec)?;
    if splitness == Splitness::Unknown {
        node.warnings.push(
            "splitness undecided; the formula is applied under its non-split hypothesis"
                .to_string(),
        );
    }
    Ok(node)
}

fn torsion_node_inner(spec: &LinkSpec) -> Result<TraceNode> {
    match spec {
        LinkSpec::TorusLink { e, p, q } => Ok(closed_form_node(
            TraceOp::TorusLink { e: *e, p: *p, q: *q },
            format!("T({}, {})", e * p, e * q),
            vec!["two of the fiber and axis classes have infinite image (automatic for the identity coefficient system on a non-split link)".to_string()],
            torsion_torus_link(*e, *p, *q)?,
        )),
        LinkSpec::TorusInSolidTorus { e, p, q } => Ok(closed_form_node(
            TraceOp::TorusInSolid { e: *e, p: *p, q: *q },
            format!("T({}, {}) in a solid torus", e * p, e * q),
            vec!["the fiber-parallel curve and the deleted axis longitude have infinite image".to_string()],
            torsion_torus_in_solid(*e, *p, *q)?,
        )),
        LinkSpec::TorusInThickenedTorus { e, p, q } => Ok(closed_form_node(
            TraceOp::TorusInThickened { e: *e, p: *p, q: *q },
            format!("T({}, {}) in a thickened torus", e * p, e * q),
            vec!["the fiber-parallel curve has infinite image".to_string()],
            torsion_torus_in_thickened(*e, *p, *q)?,
        )),
        LinkSpec::Keychain { e } => Ok(closed_form_node(
            TraceOp::Keychain { e: *e },
            format!("{}-component keychain", e + 1),
            vec!["the axis meridian has infinite image".to_string()],
            torsion_keychain(*e)?,
        )),
        LinkSpec::ParallelInSolidTorus { e, k } => Ok(closed_form_node(
            TraceOp::ParallelInSolid { e: *e, k: *k },
            format!("{e} parallel {k}-twisted strands in a solid torus"),
            vec!["the twisted axis class has infinite image".to_string()],
            torsion_parallel_in_solid(*e, *k)?,
        )),
        LinkSpec::Delete { base, comp } => {
            let child = torsion_node(base)?;
            let comp0 = comp.0 - 1;
            if child.result.is_zero() {
                // the deletion formula needs a nonvanishing base; fall back to
                // a structural identification of the resulting link
                return identified_node(spec, child);
            }
            let linking_row = spec_linking_matrix(base)?.row_excluding(comp0);
            let result = torres_delete(&child.result, &linking_row, comp.0)?;
            Ok(TraceNode {
                op: TraceOp::TorresDelete { comp: comp.0, linking_row },
                detail: format!(
                    "delete component {} (permuted last before applying the last-component rule; survivors keep their order)",
                    comp.0
                ),
                side_conditions: vec![
                    "the deleted component's longitude has infinite image".to_string(),
                ],
                warnings: Vec::new(),
                result,
                children: vec![child],
            })
        }
        LinkSpec::ConnectedSum { left, left_comp, right, right_comp } => {
            let lchild = torsion_node(left)?;
            let rchild = torsion_node(right)?;
            if lchild.result.is_zero() || rchild.result.is_zero() {
                return Ok(TraceNode {
                    op: TraceOp::ZeroFactor,
                    detail: "connected sum with a vanishing factor".to_string(),
                    side_conditions: Vec::new(),
                    warnings: vec!["a summand has vanishing torsion; the sum vanishes".to_string()],
                    result: TorsionClass::Zero,
                    children: vec![lchild, rchild],
                });
            }
            let lt = move_component_last(&lchild.result, left_comp.0)?;
            let rt = move_component_last(&rchild.result, right_comp.0)?;
            let result = connected_sum_torsion(&lt, &rt)?;
            Ok(TraceNode {
                op: TraceOp::ConnectedSum { left_comp: left_comp.0, right_comp: right_comp.0 },
                detail: format!(
                    "join component {} of the left summand with component {} of the right; merged component reordered last",
                    left_comp.0, right_comp.0
                ),
                side_conditions: vec![
                    "the merged component's meridian has infinite image".to_string(),
                ],
                warnings: Vec::new(),
                result,
                children: vec![lchild, rchild],
            })
        }
        LinkSpec::Cable { base, comp, e, p, q } => {
            let child = torsion_node(base)?;
            if child.result.is_zero() {
                return Ok(TraceNode {
                    op: TraceOp::ZeroFactor,
                    detail: "cable over a vanishing base".to_string(),
                    side_conditions: Vec::new(),
                    warnings: vec!["the base torsion vanishes; the cabled torsion vanishes".to_string()],
                    result: TorsionClass::Zero,
                    children: vec![child],
                });
            }
            let comp0 = comp.0 - 1;
            let linking_row = spec_linking_matrix(base)?.row_excluding(comp0);
            let based = move_component_last(&child.result, comp.0)?;
            let cabled = cabling_torsion(&based, *e, *p, *q, &linking_row)?;
            let result = interleave_cable_block(&cabled, comp.0, *e as usize)?;
            Ok(TraceNode {
                op: TraceOp::Cable { comp: comp.0, e: *e, p: *p, q: *q, linking_row },
                detail: format!("cable component {} by T({}, {})", comp.0, e * p, e * q),
                side_conditions: vec![
                    "the cabling torus has infinite image".to_string(),
                ],
                warnings: Vec::new(),
                result,
                children: vec![child],
            })
        }
    }
}

fn closed_form_node(
    op: TraceOp,
    detail: String,
    side_conditions: Vec<String>,
    expr: ExponentExpr,
) -> TraceNode {
    TraceNode {
        op,
        detail,
        side_conditions,
        warnings: Vec::new(),
        result: TorsionClass::NonZero(expr),
        children: Vec::new(),
    }
}

/// Closed form for a tree whose compositional route degenerated but which the
/// constructor algebra identifies with a Seifert-fibered link.
fn identified_node(spec: &LinkSpec, child: TraceNode) -> Result<TraceNode> {
    let form = identify::identify(spec).ok_or_else(|| {
        Error::UnsupportedConstruction(
            "no formula applies: the base torsion vanishes and the result is not identified"
                .to_string(),
        )
    })?;
    let (op, expr) = match form {
        SeifertForm::Torus { e, p, q } => {
            (TraceOp::TorusLink { e, p, q }, torsion_torus_link(e, p, q)?)
        }
        SeifertForm::InSolid { e, p, q } => (
            TraceOp::TorusInSolid { e, p, q },
            torsion_torus_in_solid(e, p, q)?,
        ),
        SeifertForm::InThick { e, p, q } => (
            TraceOp::TorusInThickened { e, p, q },
            torsion_torus_in_thickened(e, p, q)?,
        ),
        SeifertForm::Unlinked { .. } => {
            unreachable!("split results are handled before identification")
        }
    };
    let mut node = closed_form_node(
        op,
        "result identified with a Seifert-fibered link after a degenerate deletion".to_string(),
        vec!["distinguished curve classes have infinite image".to_string()],
        expr,
    );
    node.children.push(child);
    Ok(node)
}

/// Reorders a torsion's variables so that component `comp` (1-based) is last.
fn move_component_last(t: &TorsionClass, comp: usize) -> Result<TorsionClass> {
    let expr = match t.exponent() {
        Some(e) => e,
        None => return Ok(TorsionClass::Zero),
    };
    let n = expr.num_vars();
    if comp < 1 || comp > n {
        return Err(Error::InvalidParameters(format!(
            "component {comp} out of range 1..={n}"
        )));
    }
    let comp0 = comp - 1;
    let perm: Vec<usize> = (0..n)
        .map(|i| {
            if i == comp0 {
                n - 1
            } else if i < comp0 {
                i
            } else {
                i - 1
            }
        })
        .collect();
    Ok(TorsionClass::NonZero(expr.permute_vars(&perm)?))
}

/// Moves a trailing cable block of size `e` back into the position block of
/// the cabled component `comp` (1-based), undoing [`move_component_last`].
fn interleave_cable_block(t: &TorsionClass, comp: usize, e: usize) -> Result<TorsionClass> {
    let expr = match t.exponent() {
        Some(ex) => ex,
        None => return Ok(TorsionClass::Zero),
    };
    let total = expr.num_vars();
    let c = total - e;
    let comp0 = comp - 1;
    let perm: Vec<usize> = (0..total)
        .map(|i| {
            if i < c {
                if i < comp0 {
                    i
                } else {
                    i + e
                }
            } else {
                comp0 + (i - c)
            }
        })
        .collect();
    Ok(TorsionClass::NonZero(expr.permute_vars(&perm)?))
}
