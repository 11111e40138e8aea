mod support;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repcoh_core::{
    build_complex, cohomology_all, enumerate_chains, enumerate_intervals, is_interval, nerve_complex, Poset, Variant,
    DEFAULT_INTERVAL_CAP,
};
use support::{audit_all, random_poset, Stats};

fn poset_strategy(max_elements: usize) -> impl Strategy<Value = Poset> {
    (any::<u64>(), 0.05f64..0.45).prop_map(move |(seed, density)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_poset(&mut rng, max_elements, density)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structural_audits(p in poset_strategy(7), seed in any::<u64>(), v in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stats = Stats::default();
        let bad = audit_all(&mut rng, Arc::new(p), Variant::ALL[v], 3, 10, &mut stats);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn intervals_match_subset_checker(p in poset_strategy(10)) {
        let ivs = enumerate_intervals(&p, DEFAULT_INTERVAL_CAP).unwrap();
        let m = p.len();
        let mut count = 0;
        for mask in 1u32..(1 << m) {
            let mut bits = fixedbitset::FixedBitSet::with_capacity(m);
            for i in 0..m {
                if mask & (1 << i) != 0 {
                    bits.insert(i);
                }
            }
            if is_interval(&p, &bits) {
                count += 1;
                prop_assert!(ivs.binary_search_by(|q| q.cmp(&repcoh_core::Interval::from_bits(bits.clone()))).is_ok());
            }
        }
        prop_assert_eq!(count, ivs.len());
    }

    #[test]
    fn strict_chains_stop_at_composition_length(p in poset_strategy(12)) {
        let n = p.composition_length();
        prop_assert!(!enumerate_chains(&p, n, false).is_empty());
        prop_assert!(enumerate_chains(&p, n + 1, false).is_empty());
    }

    #[test]
    fn text_round_trip(p in poset_strategy(12)) {
        let q = Poset::parse(&p.to_text()).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(q.covers(), p.covers());
    }

    #[test]
    fn rank_bounds_hold(p in poset_strategy(6)) {
        let p = Arc::new(p);
        for v in [Variant::CheckE, Variant::CheckG] {
            let c = build_complex(p.clone(), v, p.composition_length(), 20_000).unwrap();
            cohomology_all(&c).unwrap();
            for n in 0..=c.top() {
                let incoming = n.checked_sub(1).map_or(0, |m| c.smith(m).unwrap().rank());
                prop_assert!(c.smith(n).unwrap().rank() + incoming <= c.dims()[n]);
            }
        }
        // Nerve: H^0 counts components.
        let nerve = nerve_complex(p.clone(), 1);
        let mut all = fixedbitset::FixedBitSet::with_capacity(p.len());
        all.insert_range(..);
        let comps = p.components_of(&all).len();
        prop_assert_eq!(cohomology_all(&nerve).unwrap()[0].free_rank, comps);
    }
}

#[test]
fn audits_cover_twelve_element_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = Stats::default();
    for k in 0..12 {
        let p = Arc::new(random_poset(&mut rng, 12, 0.1 + 0.03 * k as f64));
        for v in Variant::ALL {
            let mut stats = Stats::default();
            let bad = audit_all(&mut rng, p.clone(), v, 4, 20, &mut stats);
            assert!(bad.is_empty(), "{v:?} on {}: {bad:?}", p.to_text());
            total.merge(&stats);
        }
    }
    eprintln!("{total:?}");
    assert!(total.pullbacks > 0 && total.leibniz > 0 && total.associativity > 0 && total.kernel_vectors > 0);
}
