use asymde_core::edit::{edit_adversary, EditStyle};
use asymde_core::editdist::edit_distance_at_most;
use asymde_core::hamming::{ProtocolId, SegmentTag, Sketch};
use asymde_core::seed;
use asymde_core::spec::{chi_band, entropy_h1, hamming_distance};
use asymde_core::syndrome::{rs_correct, rs_syndrome, BitCodeLayout, SymbolBlock};
use asymde_core::BitString;
use proptest::prelude::*;

fn bits(max: usize) -> impl Strategy<Value = BitString> {
    proptest::collection::vec(any::<bool>(), 0..=max).prop_map(|v| BitString::from_bools(&v))
}

/// Plain Wagner-Fischer over the whole table.
fn levenshtein(x: &BitString, y: &BitString) -> usize {
    let (n, m) = (x.len(), y.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + usize::from(x.get(i - 1) != y.get(j - 1));
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[n][m]
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bytes_round_trip(b in bits(300)) {
        prop_assert_eq!(BitString::from_bytes(&b.to_bytes(), b.len()).unwrap(), b.clone());
        prop_assert_eq!(BitString::from_01(&b.to_01()).unwrap(), b);
    }

    #[test]
    fn xor_is_hamming(a in bits(200), seed_ in any::<u64>()) {
        let b = BitString::random(a.len(), &mut seed::stream(seed_));
        let d = a.xor(&b).unwrap();
        prop_assert_eq!(d.count_ones(), hamming_distance(&a, &b).unwrap());
        prop_assert_eq!(d.xor(&b).unwrap(), a);
    }

    #[test]
    fn slice_concat(a in bits(150), b in bits(150)) {
        let c = a.concat(&b);
        prop_assert_eq!(c.slice(0, a.len()), a.clone());
        prop_assert_eq!(c.slice(a.len(), b.len()), b);
    }

    #[test]
    fn banded_distance_matches_full_table(x in bits(24), y in bits(24), bound in 0usize..30) {
        let full = levenshtein(&x, &y);
        let got = edit_distance_at_most(&x, &y, bound);
        prop_assert_eq!(got, (full <= bound).then_some(full));
    }

    #[test]
    fn adversary_stays_within_k(seed_ in any::<u64>(), len in 1usize..60, k in 0usize..6, clustered in any::<bool>()) {
        let k = k.min(len);
        let mut rng = seed::stream(seed_);
        let x = BitString::random(len, &mut rng);
        let style = if clustered { EditStyle::Clustered } else { EditStyle::Random };
        let (y, ops) = edit_adversary(&x, k, style, &mut rng).unwrap();
        prop_assert_eq!(ops.len(), k);
        prop_assert!(levenshtein(&x, &y) <= k);
    }

    #[test]
    fn entropy_matches_exact_sum(s in 1u128..100, k in 0u128..100) {
        let k = k.min(s);
        let sum: u128 = (0..=k).map(|j| binom(s, j)).sum();
        let want = (sum as f64).log2();
        let got = entropy_h1(s as usize, k as usize).unwrap();
        prop_assert!((got - want).abs() < 1e-9 * want.max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn chi_band_bracketing(k in 1usize..50, ratio in 2usize..5000) {
        let s = k * ratio;
        let j = chi_band(s, k, 2).unwrap();
        prop_assert!(j >= 1);
        // band j holds 2^(2^(j-1)) <= s/k < 2^(2^j)
        let lo = 2f64.powf(2f64.powi(j as i32 - 1));
        let hi = 2f64.powf(2f64.powi(j as i32));
        let r = s as f64 / k as f64;
        prop_assert!(lo <= r && r < hi, "s={} k={} band {}", s, k, j);
    }

    #[test]
    fn rs_corrects_up_to_e(seed_ in any::<u64>(), len in 1usize..60, e in 1usize..6) {
        let mut rng = seed::stream(seed_);
        let data: Vec<u16> = (0..len).map(|_| rng.gen_range(0..256)).collect();
        let block = SymbolBlock::new(8, data.clone()).unwrap();
        let red = rs_syndrome(&block, e).unwrap();
        let mut bad = data.clone();
        let errs = rng.gen_range(0..=e.min(len));
        for p in rand::seq::index::sample(&mut rng, len, errs).iter() {
            bad[p] ^= rng.gen_range(1..256);
        }
        let fixed = rs_correct(&SymbolBlock::new(8, bad).unwrap(), &red, e).unwrap();
        prop_assert_eq!(fixed.symbols(), &data[..]);
    }

    #[test]
    fn bit_code_recovers(seed_ in any::<u64>(), len in 1usize..2000, e in 1usize..8) {
        let mut rng = seed::stream(seed_);
        let layout = BitCodeLayout::new(len, e).unwrap();
        let x = BitString::random(len, &mut rng);
        let red = layout.protect(&x).unwrap();
        prop_assert_eq!(red.len(), layout.redundancy_bits());
        let mut y = x.clone();
        for p in rand::seq::index::sample(&mut rng, len, e.min(len)).iter() {
            y.flip(p);
        }
        prop_assert_eq!(layout.recover(&y, &red).unwrap(), x);
    }

    #[test]
    fn sketch_wire_round_trip(seed_ in any::<u64>(), segs in proptest::collection::vec(0usize..500, 0..5)) {
        let mut rng = seed::stream(seed_);
        let mut sk = Sketch::new(ProtocolId::General, 4096, segs.len());
        for (i, &len) in segs.iter().enumerate() {
            sk.push(SegmentTag::Parity, i, BitString::random(len, &mut rng));
        }
        let bytes = sk.to_bytes();
        prop_assert_eq!(Sketch::from_bytes(&bytes).unwrap(), sk.clone());
        prop_assert_eq!(sk.payload_bits(), segs.iter().sum::<usize>());
        if !bytes.is_empty() {
            prop_assert!(Sketch::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        }
    }

    #[test]
    fn derive_separates_parts(master in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        prop_assume!(a != b);
        prop_assert_ne!(seed::derive(master, &[a]), seed::derive(master, &[b]));
        prop_assert_ne!(seed::derive(master, &[a, b]), seed::derive(master, &[b, a]));
    }
}

use rand::Rng;
