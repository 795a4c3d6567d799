mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{brute_min_count, dot};
use projtverberg::geometry::{LinSubspace, PointConfig, ProjPoint};
use projtverberg::partition::PartitionWitness;
use projtverberg::pieces::{min_piece_counts, verify_center_subspace, VerifyOptions};
use projtverberg::scalar::{format_scalar, parse_scalar};
use projtverberg::topology::kummer_nonzero_mod_p;
use projtverberg::Scalar;

fn vector(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, len).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn scalars(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_integer(BigInt::from(x))).collect()
}

fn points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(vector(3), n)
}

fn config(rows: &[Vec<i64>]) -> PointConfig {
    PointConfig::new(2, rows.iter().map(|r| ProjPoint::from_ints(r).unwrap()).collect(), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn annihilator_is_an_involution(rows in prop::collection::vec(vector(4), 0..4)) {
        let s = LinSubspace::span(4, &rows.iter().map(|r| scalars(r)).collect::<Vec<_>>()).unwrap();
        let ann = s.annihilator();
        prop_assert_eq!(ann.rank() + s.rank(), 4);
        prop_assert_eq!(ann.annihilator(), s);
    }

    #[test]
    fn scalar_text_round_trips(num in -10_000i64..10_000, den in 1i64..500) {
        let x = Scalar::new(BigInt::from(num), BigInt::from(den));
        prop_assert_eq!(parse_scalar(&format_scalar(&x)).unwrap(), x);
    }

    #[test]
    fn engine_matches_pencil_sweep(pts in points(1..=8), v in vector(3), w in prop::collection::vec(vector(3), 2)) {
        let x = config(&pts);
        let v = LinSubspace::span(3, &[scalars(&v)]).unwrap();
        let w = LinSubspace::span(3, &w.iter().map(|r| scalars(r)).collect::<Vec<_>>()).unwrap();
        prop_assume!(w.rank() == 2);
        let (min, cert) = min_piece_counts(&v, &w, &x).unwrap();
        prop_assert_eq!(min, brute_min_count(&v, &w, &x.vectors()));
        prop_assert!(dot(&cert.form_f, &v.basis()[0]) == Scalar::from_integer(0.into()));
    }

    #[test]
    fn order_of_points_is_irrelevant(pts in points(1..=8), v in vector(3), w in vector(3), seed in any::<u64>()) {
        let mut shuffled = pts.clone();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        let v = LinSubspace::hyperplane(&scalars(&v)).unwrap();
        let w = LinSubspace::span(3, &[scalars(&w)]).unwrap();
        let a = verify_center_subspace(&v, &w, &config(&pts), 1, VerifyOptions::default()).unwrap();
        let b = verify_center_subspace(&v, &w, &config(&shuffled), 1, VerifyOptions::default()).unwrap();
        prop_assert_eq!(a.min_count, b.min_count);
    }

    #[test]
    fn kummer_matches_binomial(n in 0u64..60, k in 0u64..60, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(k <= n);
        let c = (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1));
        let nonzero = c % BigInt::from(p) != BigInt::from(0);
        prop_assert_eq!(kummer_nonzero_mod_p(n, k, p).unwrap(), nonzero);
    }

    #[test]
    fn labels_round_trip(labels in prop::collection::vec(0usize..4, 1..12)) {
        let p = PartitionWitness::from_labels(&labels).unwrap();
        let back = p.labels();
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                prop_assert_eq!(labels[i] == labels[j], back[i] == back[j]);
            }
        }
        prop_assert_eq!(PartitionWitness::from_labels(&back).unwrap(), p);
    }
}
