//! Cross-derivation consistency suites over a parameter grid.
//!
//! Every closed form in the engine is reachable by at least two independent
//! routes (deletion from a bigger link, cabling the unknot, toroidal gluing of
//! proof pieces). The suites recompute both routes over a grid and demand
//! exact equality of canonical exponents.

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cache::{cache_key, trace_digest, Cache, CacheEntry};
use crate::dispatch::torsion;
use crate::error::Result;
use crate::exponent::ExponentExpr;
use crate::link::{build_link, LinkSpec};
use crate::norm::{evaluate, seminorm_report};
use crate::torsion::{
    cabling_torsion, connected_sum_torsion, glue_route_annulus, glue_route_cabling,
    glue_route_connected_sum, glue_route_thickened, torsion_torus_in_solid,
    torsion_torus_in_thickened, torsion_torus_link, CoefficientVector, TorsionClass,
};
use crate::zonotope::dual_ball;

const RNG_SEED: u64 = 0x5eed_1e2a;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub grid: i64,
    pub suites: Vec<SuiteResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for suite in &self.suites {
            if suite.passed() {
                out.push_str(&format!("ok   {} ({} cases)\n", suite.name, suite.cases));
            } else {
                out.push_str(&format!(
                    "FAIL {} ({} cases, {} failures)\n",
                    suite.name,
                    suite.cases,
                    suite.failures.len()
                ));
                for f in suite.failures.iter().take(5) {
                    out.push_str(&format!("     {f}\n"));
                }
                if suite.failures.len() > 5 {
                    out.push_str(&format!("     … {} more\n", suite.failures.len() - 5));
                }
            }
        }
        let total: usize = self.suites.iter().map(|s| s.cases).sum();
        out.push_str(&format!(
            "{}: {} suites, {} cases, grid radius {}\n",
            if self.passed() {
                "all consistent"
            } else {
                "INCONSISTENT"
            },
            self.suites.len(),
            total,
            self.grid
        ));
        out
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, label: impl Fn() -> String, outcome: Result<bool>) {
        self.cases += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(format!("{}: mismatch", label())),
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
        }
    }
}

fn coprime_pairs(grid: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -grid..=grid {
        for q in -grid..=grid {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn torsion_of(spec: &LinkSpec) -> Result<TorsionClass> {
    let obj = build_link(spec.clone())?;
    Ok(torsion(&obj, &CoefficientVector::symbolic())?.0)
}

fn exprs_equal(a: &TorsionClass, b: &ExponentExpr) -> bool {
    a.exponent() == Some(b)
}

/// Runs every consistency suite over the given grid radius.
pub fn run_checks(grid: i64) -> CheckReport {
    let pairs = coprime_pairs(grid);
    let suites = vec![
        torres_solid_grid(&pairs),
        torres_thickened_grid(&pairs),
        strand_deletion_grid(&pairs),
        cabling_unknot_grid(&pairs),
        glue_route_grid(&pairs),
        sum_properties(&pairs),
        identified_closed_forms(grid, &pairs),
        t1_normalization(grid, &pairs),
        norm_duality(grid, &pairs),
        cache_coherence(grid, &pairs),
    ];
    CheckReport { grid, suites }
}

/// Deleting the solid-torus axis from `T(ep, eq) ∪ H_v` must reproduce the
/// direct torus-link exponent.
fn torres_solid_grid(pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("torres-deletion-from-solid-torus");
    for e in 1..=4i64 {
        for &(p, q) in pairs {
            if p == 0 || (e >= 2 && q == 0) {
                continue;
            }
            let spec = LinkSpec::delete(LinkSpec::TorusInSolidTorus { e, p, q }, e as usize + 1);
            let outcome =
                torsion_of(&spec).and_then(|t| Ok(exprs_equal(&t, &torsion_torus_link(e, p, q)?)));
            suite.case(|| format!("e={e} p={p} q={q}"), outcome);
        }
    }
    suite.finish()
}

/// Deleting an axis of `T(ep, eq) ∪ H_v ∪ H_h` must reproduce the direct
/// solid-torus exponent: dropping the horizontal axis keeps `(p, q)`, dropping
/// the vertical axis swaps the roles of `p` and `q`.
fn torres_thickened_grid(pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("torres-deletion-from-thickened-torus");
    for e in 1..=4i64 {
        for &(p, q) in pairs {
            if p != 0 {
                let spec =
                    LinkSpec::delete(LinkSpec::TorusInThickenedTorus { e, p, q }, e as usize + 2);
                let outcome = torsion_of(&spec)
                    .and_then(|t| Ok(exprs_equal(&t, &torsion_torus_in_solid(e, p, q)?)));
                suite.case(|| format!("drop horizontal e={e} p={p} q={q}"), outcome);
            }
            if q != 0 {
                let spec =
                    LinkSpec::delete(LinkSpec::TorusInThickenedTorus { e, p, q }, e as usize + 1);
                let outcome = torsion_of(&spec)
                    .and_then(|t| Ok(exprs_equal(&t, &torsion_torus_in_solid(e, q, p)?)));
                suite.case(|| format!("drop vertical e={e} p={p} q={q}"), outcome);
            }
        }
    }
    suite.finish()
}

/// Wherever the constructor algebra identifies a tree with a Seifert-fibered
/// link, the dispatcher must agree with that link's closed form.
fn identified_closed_forms(grid: i64, pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("identified-closed-forms");
    for spec in corpus(grid, pairs) {
        let Some(form) = crate::identify::identify(&spec) else {
            continue;
        };
        let expected = match form {
            crate::identify::SeifertForm::Torus { e, p, q } => torsion_torus_link(e, p, q),
            crate::identify::SeifertForm::InSolid { e, p, q } => torsion_torus_in_solid(e, p, q),
            crate::identify::SeifertForm::InThick { e, p, q } => {
                torsion_torus_in_thickened(e, p, q)
            }
            crate::identify::SeifertForm::Unlinked { .. } => {
                let outcome = torsion_of(&spec).map(|t| t.is_zero());
                suite.case(|| crate::dsl::to_source(&spec), outcome);
                continue;
            }
        };
        let outcome = torsion_of(&spec).and_then(|t| Ok(exprs_equal(&t, &expected?)));
        suite.case(|| crate::dsl::to_source(&spec), outcome);
    }
    suite.finish()
}

/// Deleting one strand of `T(ep, eq)` must give `T((e-1)p, (e-1)q)`.
fn strand_deletion_grid(pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("torus-strand-deletion");
    for e in 3..=5i64 {
        for &(p, q) in pairs {
            if p == 0 || q == 0 {
                continue;
            }
            for comp in 1..=e as usize {
                let spec = LinkSpec::delete(LinkSpec::TorusLink { e, p, q }, comp);
                let outcome = torsion_of(&spec)
                    .and_then(|t| Ok(exprs_equal(&t, &torsion_torus_link(e - 1, p, q)?)));
                suite.case(|| format!("e={e} p={p} q={q} comp={comp}"), outcome);
            }
        }
    }
    suite.finish()
}

/// Cabling the unknot must agree with the direct torus-link formula.
fn cabling_unknot_grid(pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("cabling-the-unknot");
    let unknot = TorsionClass::NonZero(torsion_torus_link(1, 1, 0).expect("unknot"));
    for e in 1..=4i64 {
        for &(p, q) in pairs {
            if p == 0 || (e >= 2 && q == 0) {
                continue;
            }
            let via_op = cabling_torsion(&unknot, e, p, q, &[])
                .and_then(|t| Ok(exprs_equal(&t, &torsion_torus_link(e, p, q)?)));
            suite.case(|| format!("op e={e} p={p} q={q}"), via_op);
            let spec = LinkSpec::cable(LinkSpec::unknot(), 1, e, p, q);
            let via_tree =
                torsion_of(&spec).and_then(|t| Ok(exprs_equal(&t, &torsion_torus_link(e, p, q)?)));
            suite.case(|| format!("tree e={e} p={p} q={q}"), via_tree);
        }
    }
    suite.finish()
}

/// Toroidal-gluing replays of the proof decompositions versus the closed forms.
fn glue_route_grid(pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("gluing-versus-closed-forms");
    for e in 1..=4i64 {
        for &(p, q) in pairs {
            let outcome = glue_route_thickened(e, p, q)
                .and_then(|g| Ok(g == torsion_torus_in_thickened(e, p, q)?));
            suite.case(|| format!("thickened e={e} p={p} q={q}"), outcome);
        }
    }
    for &(p, q) in pairs {
        let outcome =
            glue_route_annulus(p, q).and_then(|g| Ok(g == torsion_torus_in_thickened(1, p, q)?));
        suite.case(|| format!("annulus p={p} q={q}"), outcome);
    }
    let bases: Vec<(&str, TorsionClass, Vec<i64>)> = vec![
        (
            "trefoil",
            TorsionClass::NonZero(torsion_torus_link(1, 2, 3).unwrap()),
            vec![],
        ),
        (
            "hopf",
            TorsionClass::NonZero(torsion_torus_link(2, 1, 1).unwrap()),
            vec![1],
        ),
        (
            "t(4,2)-in-solid",
            TorsionClass::NonZero(torsion_torus_in_solid(2, 2, 1).unwrap()),
            vec![2, 2],
        ),
    ];
    for (name, base, row) in &bases {
        for &(p, q) in pairs {
            if p == 0 {
                continue;
            }
            for e in 1..=3i64 {
                let outcome = glue_route_cabling(base, e, p, q, row)
                    .and_then(|g| Ok(g == cabling_torsion(base, e, p, q, row)?));
                suite.case(|| format!("cable {name} e={e} p={p} q={q}"), outcome);
            }
        }
    }
    for (lname, left, _) in &bases {
        for (rname, right, _) in &bases {
            let outcome = glue_route_connected_sum(left, right)
                .and_then(|g| Ok(g == connected_sum_torsion(left, right)?));
            suite.case(|| format!("sum {lname} # {rname}"), outcome);
        }
    }
    suite.finish()
}

/// Neutrality of the unknot and associativity of iterated sums of knots.
fn sum_properties(pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("connected-sum-properties");
    let mut knot_params: Vec<(i64, i64)> = vec![(2, 3), (2, 5), (3, 4)];
    knot_params.extend(pairs.iter().filter(|(p, q)| *p >= 2 && *q > *p));
    knot_params.sort_unstable();
    knot_params.dedup();
    let knots: Vec<TorsionClass> = knot_params
        .iter()
        .map(|&(p, q)| TorsionClass::NonZero(torsion_torus_link(1, p, q).unwrap()))
        .collect();
    let unknot = TorsionClass::NonZero(torsion_torus_link(1, 1, 0).unwrap());
    for k in &knots {
        let outcome = connected_sum_torsion(k, &unknot).map(|s| &s == k);
        suite.case(|| "unknot neutrality".to_string(), outcome);
    }
    for a in knots.iter().take(4) {
        for b in knots.iter().take(4) {
            for c in knots.iter().take(4) {
                let left = connected_sum_torsion(&connected_sum_torsion(a, b).unwrap(), c);
                let right = connected_sum_torsion(a, &connected_sum_torsion(b, c).unwrap());
                let outcome = left.and_then(|l| Ok(l == right?));
                suite.case(|| "associativity".to_string(), outcome);
            }
        }
    }
    suite.finish()
}

/// A corpus of valid constructor trees derived from the grid.
fn corpus(grid: i64, pairs: &[(i64, i64)]) -> Vec<LinkSpec> {
    let mut specs = Vec::new();
    for e in 1..=3i64 {
        for &(p, q) in pairs {
            if p != 0 && !(e >= 2 && q == 0) {
                specs.push(LinkSpec::TorusLink { e, p, q });
                specs.push(LinkSpec::TorusInSolidTorus { e, p, q });
            }
            specs.push(LinkSpec::TorusInThickenedTorus { e, p, q });
        }
    }
    for e in 1..=4 {
        specs.push(LinkSpec::Keychain { e });
        for k in -grid..=grid {
            specs.push(LinkSpec::ParallelInSolidTorus { e, k });
        }
    }
    let trefoil = LinkSpec::TorusLink { e: 1, p: 2, q: 3 };
    specs.push(LinkSpec::sum(trefoil.clone(), 1, trefoil.clone(), 1));
    specs.push(LinkSpec::sum(
        LinkSpec::TorusLink { e: 1, p: 2, q: 5 },
        1,
        LinkSpec::TorusLink { e: 1, p: 3, q: 4 },
        1,
    ));
    specs.push(LinkSpec::sum(LinkSpec::hopf(), 2, trefoil.clone(), 1));
    specs.push(LinkSpec::cable(trefoil.clone(), 1, 2, 1, 3));
    specs.push(LinkSpec::cable(trefoil.clone(), 1, 1, 2, 3));
    specs.push(LinkSpec::cable(LinkSpec::hopf(), 2, 2, 1, 0));
    specs.push(LinkSpec::cable(LinkSpec::unknot(), 1, 2, 1, 0));
    specs.push(LinkSpec::delete(
        LinkSpec::TorusLink { e: 3, p: 2, q: 1 },
        2,
    ));
    specs.push(LinkSpec::delete(
        LinkSpec::delete(LinkSpec::TorusLink { e: 3, p: 2, q: 1 }, 1),
        1,
    ));
    specs.push(LinkSpec::delete(
        LinkSpec::TorusInThickenedTorus { e: 2, p: 2, q: 1 },
        4,
    ));
    specs.push(LinkSpec::delete(
        LinkSpec::TorusInThickenedTorus { e: 2, p: 2, q: 1 },
        3,
    ));
    specs.push(LinkSpec::delete(
        LinkSpec::TorusInSolidTorus { e: 2, p: 2, q: 1 },
        1,
    ));
    specs.push(LinkSpec::delete(LinkSpec::Keychain { e: 2 }, 3));
    specs.push(LinkSpec::delete(
        LinkSpec::cable(trefoil.clone(), 1, 2, 1, 3),
        1,
    ));
    specs.push(LinkSpec::cable(trefoil, 1, 2, 1, 6));
    // the unknot in a nonstandard spelling
    specs.push(LinkSpec::cable(
        LinkSpec::TorusLink { e: 1, p: 2, q: 1 },
        1,
        2,
        2,
        1,
    ));
    specs.push(LinkSpec::delete(
        LinkSpec::TorusInSolidTorus { e: 1, p: 2, q: 3 },
        1,
    ));
    specs.push(LinkSpec::delete(
        LinkSpec::cable(LinkSpec::unknot(), 1, 3, 1, 0),
        2,
    ));
    specs
}

/// Every nonvanishing torsion evaluates to 1 at `t = 1`.
fn t1_normalization(grid: i64, pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("t1-normalization");
    let mut rng = StdRng::seed_from_u64(RNG_SEED);
    for spec in corpus(grid, pairs) {
        let outcome = torsion_of(&spec).and_then(|t| {
            if let Some(expr) = t.exponent() {
                for _ in 0..5 {
                    let n: Vec<i64> = (0..expr.num_vars())
                        .map(|_| rng.gen_range(-9..=9))
                        .collect();
                    if t.representative(&n, 1.0)? != 1.0 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        });
        suite.case(|| crate::dsl::to_source(&spec), outcome);
    }
    suite.finish()
}

/// Support function of the dual ball equals direct evaluation, and the vertex
/// set is centrally symmetric.
fn norm_duality(grid: i64, pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("dual-ball-duality");
    let mut rng = StdRng::seed_from_u64(RNG_SEED ^ 0xda7a);
    for spec in corpus(grid, pairs) {
        let Ok(t) = torsion_of(&spec) else { continue };
        let Some(expr) = t.exponent() else { continue };
        if expr.num_vars() > 3 || !seminorm_report(expr).is_seminorm {
            continue;
        }
        let outcome = dual_ball(expr).and_then(|ball| {
            for v in &ball.vertices {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                if !ball.vertices.contains(&neg) {
                    return Ok(false);
                }
            }
            for _ in 0..200 {
                let n: Vec<i64> = (0..expr.num_vars())
                    .map(|_| rng.gen_range(-9..=9))
                    .collect();
                if ball.support(&n) != Some(evaluate(expr, &n)?) {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        suite.case(|| crate::dsl::to_source(&spec), outcome);
    }
    suite.finish()
}

/// Exponents cached and re-read are identical to fresh recomputation.
fn cache_coherence(grid: i64, pairs: &[(i64, i64)]) -> SuiteResult {
    let mut suite = Suite::new("cache-coherence");
    let path = std::env::temp_dir().join(format!(
        "l2alex-check-{}-{}.jsonl",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    ));
    let cache = Cache::at(&path);
    for spec in corpus(grid, pairs) {
        let outcome = (|| {
            let obj = build_link(spec.clone())?;
            let (t, trace) = torsion(&obj, &CoefficientVector::symbolic())?;
            let entry = CacheEntry {
                key: cache_key(&spec),
                torsion: t.clone(),
                trace_digest: trace_digest(&trace),
            };
            cache.store(&entry).ok();
            let (hit, warnings) = cache.lookup(&entry.key);
            let fresh = torsion_of(&spec)?;
            Ok(warnings.is_empty() && hit.map(|h| h.torsion) == Some(fresh))
        })();
        suite.case(|| crate::dsl::to_source(&spec), outcome);
    }
    std::fs::remove_file(&path).ok();
    suite.finish()
}
