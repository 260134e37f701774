use std::collections::BTreeMap;

use aw_core::apcore::{find_rainbow_kap, has_rainbow_kap, parse_colorings, Coloring, Kind, Structure};
use aw_core::arith::{factorize, gcd, is_prime, mult_order, pow_mod};
use aw_core::behrend::{behrend_set, has_3ap, BehrendParams};
use aw_core::closedform::{aw_zn3, f_counts};
use aw_core::oracle::brute_force_aw;
use aw_core::solver::{find_rainbow_free, SearchOptions, SearchOutcome};
use aw_core::store::{AwRecord, Method};
use proptest::prelude::*;

// Every (a, d) written out, no shortcuts.
fn naive_rainbow(c: &Coloring, k: usize) -> bool {
    let s = c.structure();
    let n = s.n;
    let color = |x: usize| c.colors()[x];
    for a in 0..n {
        for d in 1..n {
            let idx: Vec<usize> = match s.kind {
                Kind::Interval if a + (k - 1) * d < n => (0..k).map(|i| a + i * d).collect(),
                Kind::Interval => continue,
                Kind::Cyclic => (0..k).map(|i| (a + i * d) % n).collect(),
            };
            let mut pos = idx.clone();
            pos.sort_unstable();
            pos.dedup();
            if pos.len() < k {
                continue;
            }
            let mut cols: Vec<u16> = idx.iter().map(|&x| color(x)).collect();
            cols.sort_unstable();
            cols.dedup();
            if cols.len() == k {
                return true;
            }
        }
    }
    false
}

fn coloring() -> impl Strategy<Value = Coloring> {
    (prop_oneof![Just(Kind::Interval), Just(Kind::Cyclic)], 1usize..=16, 1u16..=5).prop_flat_map(|(kind, n, r)| {
        prop::collection::vec(1..=r, n).prop_map(move |raw| {
            // relabel to an exact coloring
            let mut seen: Vec<u16> = Vec::new();
            let assign = raw
                .iter()
                .map(|c| match seen.iter().position(|x| x == c) {
                    Some(i) => i as u16 + 1,
                    None => {
                        seen.push(*c);
                        seen.len() as u16
                    }
                })
                .collect();
            Coloring::new(Structure::new(kind, n), assign).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn rainbow_detection_matches_naive_scan(c in coloring(), k in 2usize..=5) {
        prop_assert_eq!(has_rainbow_kap(&c, k), naive_rainbow(&c, k));
        if let Some(p) = find_rainbow_kap(&c, k) {
            let mut cols: Vec<u16> = p.elems.iter().map(|&x| c.color_at(x)).collect();
            cols.sort_unstable();
            cols.dedup();
            prop_assert_eq!(cols.len(), k);
        }
    }

    #[test]
    fn merging_colors_never_creates_rainbows(c in coloring(), k in 3usize..=5) {
        if let Some(m) = c.merge_top_colors() {
            prop_assert_eq!(m.r(), c.r() - 1);
            prop_assert!(!has_rainbow_kap(&m, k) || has_rainbow_kap(&c, k));
        }
    }

    #[test]
    fn text_format_round_trips(c in coloring()) {
        let back = parse_colorings(&c.to_text()).unwrap();
        prop_assert_eq!(back, vec![c]);
    }

    #[test]
    fn records_round_trip(c in coloring(), nodes in any::<u32>()) {
        let k = 3;
        if !has_rainbow_kap(&c, k) {
            let rec = AwRecord::new(c.structure(), k, c.r() + 1, Some(c.clone()), Method::Search, Some(nodes as u64), None);
            prop_assert!(rec.verify().is_ok());
            let back: AwRecord = serde_json::from_str(&rec.to_line()).unwrap();
            prop_assert_eq!(back, rec);
        }
    }

    #[test]
    fn search_agrees_with_threshold(kind in prop_oneof![Just(Kind::Interval), Just(Kind::Cyclic)], n in 3usize..=9, k in 3usize..=5, r in 1usize..=9) {
        let s = Structure::new(kind, n);
        let aw = brute_force_aw(s, k).unwrap();
        let cache: BTreeMap<_, _> = (1..n).map(|m| ((Kind::Interval, m, k), brute_force_aw(Structure::interval(m), k).unwrap())).collect();
        let res = find_rainbow_free(s, k, r, &cache, &SearchOptions::default()).unwrap();
        match res.outcome {
            SearchOutcome::Witness(w) => {
                prop_assert!(r < aw);
                prop_assert_eq!(w.r(), r);
                prop_assert!(!has_rainbow_kap(&w, k));
            }
            SearchOutcome::Exhausted => prop_assert!(r >= aw),
            SearchOutcome::Inconclusive => prop_assert!(false, "no budget was set"),
        }
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..=u64::MAX) {
        let f = factorize(n);
        prop_assert_eq!(f.product(), n);
        prop_assert!(f.primes().all(is_prime));
    }

    #[test]
    fn order_of_two_divides_totient(start in 3u64..100_000) {
        let p = (start..).find(|&q| is_prime(q)).unwrap();
        let ord = mult_order(2u64, p).unwrap();
        prop_assert_eq!(pow_mod(2u64, ord, p), 1);
        prop_assert_eq!((p - 1) % ord, 0);
        for q in factorize(ord).primes() {
            prop_assert_ne!(pow_mod(2u64, ord / q, p), 1);
        }
    }

    #[test]
    fn closed_form_splits_over_coprime_odd_factors(a in 1u64..5000, b in 1u64..5000) {
        let (a, b) = (2 * a + 1, 2 * b + 1);
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(aw_zn3(a * b), aw_zn3(a) + aw_zn3(b) - 2);
        prop_assert_eq!(aw_zn3(2 * a), aw_zn3(a) + 1);
        prop_assert_eq!(aw_zn3(a), f_counts(a).aw());
    }

    #[test]
    fn behrend_sets_have_no_3ap(m in 1u32..=4, d in 2u64..=6, frac in 0.0f64..=1.0) {
        let ell = (frac * (m as u64 * (d - 1) * (d - 1)) as f64) as u64;
        let s = behrend_set(BehrendParams::new(m, d, ell).unwrap()).unwrap();
        prop_assert!(!has_3ap(&s.values()));
    }
}

#[test]
fn closed_form_matches_the_oracle() {
    for n in 3..=12u64 {
        assert_eq!(aw_zn3(n) as usize, brute_force_aw(Structure::cyclic(n as usize), 3).unwrap(), "n={n}");
    }
}
