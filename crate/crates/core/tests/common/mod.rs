//! Random model documents for round-trip testing. Every generated document
//! is valid, so parse(print(doc)) must give it back.

use gaugekin::cli::{ModelDocument, GroupDecl, OPTION_NAMES};
use gaugekin::gauge::{Chirality, FieldDecl, Rep, Sector};
use gaugekin::liealg::GroupKind;
use proptest::prelude::*;

fn finite_nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite nonzero", |v| v.is_finite() && *v != 0.0),
        (-1000i32..1000).prop_filter("nonzero", |v| *v != 0).prop_map(|v| v as f64 / 8.0),
    ]
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), (-64i32..64).prop_map(|v| v as f64 / 4.0)]
}

fn group(sector: Sector) -> impl Strategy<Value = GroupDecl> {
    (prop_oneof![(2usize..7).prop_map(GroupKind::Su), Just(GroupKind::U1)], proptest::option::of(finite()), finite_nonzero())
        .prop_map(move |(kind, charge, coupling)| GroupDecl {
            sector,
            kind,
            charge: if kind == GroupKind::U1 { charge } else { None },
            coupling,
        })
}

fn rep() -> impl Strategy<Value = Rep> {
    prop_oneof![Just(Rep::Bifundamental), Just(Rep::FundamentalU), Just(Rep::FundamentalV), Just(Rep::Singlet)]
}

fn field(name: String) -> impl Strategy<Value = FieldDecl> {
    (
        any::<bool>(),
        rep(),
        prop_oneof![Just(Chirality::None), Just(Chirality::Left), Just(Chirality::Right)],
        proptest::option::of(finite()),
        proptest::option::of(finite()),
    )
        .prop_map(move |(fermion, rep, chir, charge, vev)| {
            let mut d = if fermion {
                FieldDecl::fermion(&name, rep).with_chirality(chir)
            } else {
                FieldDecl::scalar(&name, rep)
            };
            d.charge = charge;
            if !fermion {
                d.vev = vev;
            }
            d
        })
}

fn option_value(name: &'static str) -> BoxedStrategy<(String, f64)> {
    let s = match name {
        "seed" => (0u64..1 << 40).prop_map(|v| v as f64).boxed(),
        "points" => (1u64..100_000).prop_map(|v| v as f64).boxed(),
        "modes" => (0u64..=64).prop_map(|v| v as f64).boxed(),
        "amplitude" => (0.0f64..10.0).boxed(),
        "tol" => (1e-15f64..1.0).boxed(),
        _ => prop_oneof![Just(1.0), Just(-1.0)].boxed(),
    };
    s.prop_map(move |v| (name.to_string(), v)).boxed()
}

pub fn document() -> impl Strategy<Value = ModelDocument> {
    let names = proptest::collection::btree_set("[a-z_][a-z0-9_]{0,8}", 0..6);
    let options = proptest::sample::subsequence(OPTION_NAMES.to_vec(), 0..=OPTION_NAMES.len())
        .prop_shuffle()
        .prop_flat_map(|names| names.into_iter().map(option_value).collect::<Vec<_>>());
    (
        "[ -~]{0,16}",
        group(Sector::U),
        group(Sector::V),
        names.prop_flat_map(|ns| ns.into_iter().map(field).collect::<Vec<_>>()).prop_shuffle(),
        options,
    )
        .prop_map(|(name, gu, gv, mut fields, options)| {
            // give every field a charge wherever a charge-less U(1) acts on it
            for f in &mut fields {
                for g in [&gu, &gv] {
                    if g.kind == GroupKind::U1 && g.charge.is_none() && f.rep.acts_on(g.sector) && f.charge.is_none() {
                        f.charge = Some(1.0);
                    }
                }
            }
            ModelDocument { name, groups: vec![gu, gv], fields, options }
        })
}
