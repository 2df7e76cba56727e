//! Shared generators for the integration suites.

#![allow(dead_code)]

use proptest::prelude::*;

use l2alex::LinkSpec;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Coprime (p, q) pairs with both coordinates in [-radius, radius].
pub fn coprime_pairs(radius: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -radius..=radius {
        for q in -radius..=radius {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn arb_leaf() -> impl Strategy<Value = LinkSpec> {
    prop_oneof![
        (1..=3i64, -4..=4i64, -4..=4i64).prop_filter_map("valid torus link", |(e, p, q)| {
            (gcd(p, q) == 1 && !(e >= 2 && (p == 0 || q == 0))).then_some(LinkSpec::TorusLink {
                e,
                p,
                q,
            })
        }),
        (1..=3i64, -4..=4i64, -4..=4i64).prop_filter_map("valid solid torus", |(e, p, q)| {
            (gcd(p, q) == 1 && p != 0).then_some(LinkSpec::TorusInSolidTorus { e, p, q })
        }),
        (1..=3i64, -4..=4i64, -4..=4i64).prop_filter_map("valid thickened", |(e, p, q)| {
            (gcd(p, q) == 1).then_some(LinkSpec::TorusInThickenedTorus { e, p, q })
        }),
        (1..=4i64).prop_map(|e| LinkSpec::Keychain { e }),
        (1..=3i64, -4..=4i64).prop_map(|(e, k)| LinkSpec::ParallelInSolidTorus { e, k }),
        Just(LinkSpec::unknot()),
        Just(LinkSpec::hopf()),
    ]
}

/// Valid constructor trees of bounded depth.
pub fn arb_link() -> impl Strategy<Value = LinkSpec> {
    arb_leaf().prop_recursive(3, 20, 2, |inner| {
        prop_oneof![
            (
                inner.clone(),
                any::<prop::sample::Index>(),
                inner.clone(),
                any::<prop::sample::Index>()
            )
                .prop_map(|(l, il, r, ir)| {
                    let lc = 1 + il.index(l.component_count());
                    let rc = 1 + ir.index(r.component_count());
                    LinkSpec::sum(l, lc, r, rc)
                }),
            (
                inner.clone(),
                any::<prop::sample::Index>(),
                1..=3i64,
                -3..=3i64,
                -3..=3i64
            )
                .prop_filter_map("coprime cable", |(b, ic, e, p, q)| {
                    (p != 0 && gcd(p, q) == 1).then(|| {
                        let comp = 1 + ic.index(b.component_count());
                        LinkSpec::cable(b, comp, e, p, q)
                    })
                }),
            (inner, any::<prop::sample::Index>()).prop_filter_map("deletable", |(b, ic)| {
                let n = b.component_count();
                (n >= 2).then(|| {
                    let comp = 1 + ic.index(n);
                    LinkSpec::delete(b, comp)
                })
            }),
        ]
    })
}
