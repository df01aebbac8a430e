use std::collections::BTreeSet;

use es_core::corrupt::{apply_corruption, corruption_budget};
use es_core::estim::plugin_es;
use es_core::{CorruptionModel, RiskLevel, Sample};
use proptest::prelude::*;

fn hamming(a: &[f64], b: &[f64]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn models(n: usize) -> impl Strategy<Value = CorruptionModel> {
    prop_oneof![
        Just(CorruptionModel::None),
        (0..=n, -10.0f64..10.0, 0.1f64..300.0)
            .prop_map(|(k, mu, sigma)| CorruptionModel::MaxShiftGaussian { k, mu, sigma }),
        (0..=n, -1e4f64..1e4).prop_map(|(k, value)| CorruptionModel::ReplaceLargest { k, value }),
        (
            prop::collection::btree_set(1..=n, 0..=n.min(20)),
            -1e4f64..1e4
        )
            .prop_map(|(indices, value)| CorruptionModel::ReplaceIndices { indices, value }),
    ]
}

fn case() -> impl Strategy<Value = (Vec<f64>, CorruptionModel)> {
    prop::collection::vec(-100.0f64..100.0, 1..300).prop_flat_map(|v| {
        let n = v.len();
        (Just(v), models(n))
    })
}

proptest! {
    #[test]
    fn changes_at_most_k_entries((v, model) in case(), seed in any::<u64>()) {
        let s = Sample::new(v.clone()).unwrap();
        let out = apply_corruption(&s, &model, seed).unwrap();
        prop_assert!(hamming(&v, out.as_slice()) <= model.k());
        prop_assert_eq!(out.clone(), apply_corruption(&s, &model, seed).unwrap());
    }

    #[test]
    fn max_shift_only_raises(v in prop::collection::vec(-5.0f64..5.0, 1..200), seed in any::<u64>()) {
        let model = CorruptionModel::MaxShiftGaussian { k: v.len(), mu: 0.0, sigma: 1.0 };
        let out = apply_corruption(&Sample::new(v.clone()).unwrap(), &model, seed).unwrap();
        prop_assert!(v.iter().zip(out.as_slice()).all(|(a, b)| b >= a));
        let a = RiskLevel::new(0.1).unwrap();
        prop_assert!(plugin_es(&out, a) >= plugin_es(&Sample::new(v).unwrap(), a));
    }

    #[test]
    fn replace_largest_hits_top_ranks(v in prop::collection::vec(-3i32..3, 1..100), k in 0usize..100, value in -50.0f64..50.0) {
        let v: Vec<f64> = v.into_iter().map(f64::from).collect();
        let k = k.min(v.len());
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
        let chosen: BTreeSet<usize> = order[..k].iter().copied().collect();
        let model = CorruptionModel::ReplaceLargest { k, value };
        let out = apply_corruption(&Sample::new(v.clone()).unwrap(), &model, 0).unwrap();
        for (i, (&before, &after)) in v.iter().zip(out.as_slice()).enumerate() {
            prop_assert_eq!(after, if chosen.contains(&i) { value } else { before });
        }
    }

    #[test]
    fn budget_is_monotone(n in 0usize..1_000_000, eps in 0.01f64..=1.0) {
        let b = corruption_budget(n, eps).unwrap();
        prop_assert!(b <= corruption_budget(n + 140, eps).unwrap());
        prop_assert!(b as f64 <= n as f64 * eps * eps / 140.0 + 1e-9);
    }
}

#[test]
fn indices_beyond_sample_rejected() {
    let model = CorruptionModel::ReplaceIndices {
        indices: BTreeSet::from([3, 11]),
        value: 1.0,
    };
    let s = Sample::new(vec![0.0; 10]).unwrap();
    assert!(apply_corruption(&s, &model, 0).is_err());
    let model = CorruptionModel::ReplaceLargest { k: 11, value: 1.0 };
    assert!(apply_corruption(&s, &model, 0).is_err());
}
