//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p asymde --test acceptance`.

use std::collections::BTreeMap;
use std::time::Instant;

use asymde::config::{ExperimentConfig, ProtocolKind};
use asymde::record::TrialRecord;
use asymde::run_experiment;
use asymde_core::bits::BitString;
use asymde_core::edit::{
    alice_edit_sketch, bob_edit_recover_traced, dp_match, edit_adversary, EditConfig, EditStyle, MatchBlock,
};
use asymde_core::expander::{random_bipartite, verify_expansion_exact, verify_expansion_restricted, BipartiteGraph};
use asymde_core::expcode::{bp_decode_budgeted, bp_decode_restricted, encode_parities, Adjacency, ParityState};
use asymde_core::hamming::protocol::{alice_general, alice_grouped, alice_special};
use asymde_core::hamming::{group_by_chi, Config};
use asymde_core::seed;
use asymde_core::spec::{apply_errors, chi, entropy_h, entropy_h1, hamming_distance};
use asymde_core::syndrome::{rs_correct_in, rs_syndrome_in, Gf, SymbolBlock};
use asymde_core::ErrorPattern;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

#[derive(Debug, Default, Clone)]
struct CellStat {
    trials: usize,
    successes: usize,
    min_bits: usize,
    max_bits: usize,
    baseline: f64,
}

impl CellStat {
    fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

fn by_cell(records: &[TrialRecord]) -> BTreeMap<usize, CellStat> {
    let mut out: BTreeMap<usize, CellStat> = BTreeMap::new();
    for r in records {
        let c = out.entry(r.cell).or_insert(CellStat {
            min_bits: usize::MAX,
            ..Default::default()
        });
        c.trials += 1;
        c.successes += r.success as usize;
        c.min_bits = c.min_bits.min(r.sketch_bits);
        c.max_bits = c.max_bits.max(r.sketch_bits);
        c.baseline = r.baseline_bits;
    }
    out
}

/// `(min sketch bits, entropy baseline)` for every Hamming cell measured,
/// collected for the lower-bound check.
type LowerBoundLog = Vec<(String, usize, f64)>;

fn criterion_1(lb: &mut LowerBoundLog) -> Outcome {
    let mut sizes = Vec::new();
    let mut bounds = Vec::new();
    for s in [256usize, 512, 1024] {
        for k in [4usize, 16, 64] {
            if s >= 2 * k {
                sizes.push(vec![s]);
                bounds.push(vec![k]);
            }
        }
    }
    let cfg = ExperimentConfig {
        protocol: ProtocolKind::OneSet,
        n: 4096,
        sizes: sizes.clone(),
        bounds: bounds.clone(),
        trials: 100,
        master_seed: 101,
        threads: Some(1),
        ..Default::default()
    };
    let t0 = Instant::now();
    let recs = run_experiment(&cfg).expect("one-set grid runs");
    let secs = t0.elapsed().as_secs_f64();
    let mut pass = secs <= 60.0;
    let mut worst_rate: f64 = 1.0;
    let mut worst_ratio: f64 = 0.0;
    for (c, st) in by_cell(&recs) {
        let (s, k) = (sizes[c][0], bounds[c][0]);
        let cap = 10.0 * k as f64 * (2.0 * s as f64 / k as f64).log2();
        worst_rate = worst_rate.min(st.rate());
        worst_ratio = worst_ratio.max(st.max_bits as f64 / cap);
        pass &= st.rate() >= 0.95 && st.max_bits as f64 <= cap;
        lb.push((format!("one-set s={s} k={k}"), st.min_bits, st.baseline));
    }
    outcome(
        pass,
        format!(
            "{} cells; min success {:.2} (>= 0.95); max bits / 10k log2(2s/k) = {:.3} (<= 1); grid {:.1} s on 1 thread (<= 60)",
            sizes.len(),
            worst_rate,
            worst_ratio,
            secs
        ),
    )
}

fn general_grid() -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    (
        vec![vec![64, 512, 4096], vec![128, 128, 128]],
        vec![vec![16, 8, 2], vec![8, 8, 8]],
    )
}

fn criterion_2(lb: &mut LowerBoundLog) -> Outcome {
    let (sizes, bounds) = general_grid();
    let cfg = ExperimentConfig {
        protocol: ProtocolKind::General,
        n: 8192,
        sizes: sizes.clone(),
        bounds: bounds.clone(),
        trials: 100,
        master_seed: 202,
        ..Default::default()
    };
    let recs = run_experiment(&cfg).expect("general grid runs");
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, st) in by_cell(&recs) {
        let t = sizes[c].len() as f64;
        let h = entropy_h(&sizes[c], &bounds[c]).unwrap();
        let cap = 10.0 * t * t * h;
        pass &= st.rate() >= 0.90 && st.max_bits as f64 <= cap;
        parts.push(format!(
            "s={:?} k={:?}: success {:.2}, bits {} vs cap {:.0}, overhead {:.2}x H",
            sizes[c],
            bounds[c],
            st.rate(),
            st.max_bits,
            cap,
            st.max_bits as f64 / h
        ));
        lb.push((format!("general s={:?}", sizes[c]), st.min_bits, st.baseline));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_3(lb: &mut LowerBoundLog) -> Outcome {
    let n = 8192;
    let cfg = Config::default();
    // Ratios 16..192: all in band [16, 256) for base 2.
    let one_band = (
        vec![128usize, 160, 192, 256, 128, 256, 512, 768],
        vec![8usize, 8, 8, 8, 4, 4, 4, 4],
    );
    // Ratios 2, 3, 4, 8, 16, 64, 256, 1024: four bands.
    let spread = (
        vec![16usize, 24, 16, 32, 32, 128, 256, 1024],
        vec![8usize, 8, 4, 4, 2, 2, 1, 1],
    );
    let x = BitString::random(n, &mut seed::stream(303));
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, (sizes, bounds), want_chi) in [("one band", one_band, 1usize), ("four bands", spread, 4)] {
        let grouped = alice_grouped(&x, &sizes, &bounds, 2, 7, &cfg).unwrap().payload_bits();
        let ungrouped = alice_general(&x, &sizes, &bounds, 7, &cfg).unwrap().payload_bits();
        let groups = group_by_chi(&sizes, &bounds, 2).unwrap().len();
        let c = chi(&sizes, &bounds, 2).unwrap();
        pass &= groups == c && c == want_chi;
        if want_chi == 1 {
            pass &= grouped <= ungrouped;
        }
        parts.push(format!(
            "{name}: grouped {grouped} bits vs ungrouped {ungrouped}, groups {groups} = chi {c}"
        ));
        let h = entropy_h(&sizes, &bounds).unwrap();
        lb.push((format!("grouped {name}"), grouped, h));
        lb.push((format!("ungrouped {name}"), ungrouped, h));
    }
    outcome(pass, parts.join("; "))
}

fn special_family(k: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let n = 512 * k;
    let l3 = (n as f64 / k as f64).log2().powi(3);
    let floor = (k as f64 / l3).ceil() as usize;
    let mut sizes = Vec::new();
    let mut bounds = Vec::new();
    let mut total = 0;
    let mut i = 1;
    while total + (k << i) <= n {
        sizes.push(k << i);
        bounds.push(k.div_ceil(1 << i).max(floor));
        total += k << i;
        i += 1;
    }
    (n, sizes, bounds)
}

fn criterion_4(lb: &mut LowerBoundLog) -> Outcome {
    let mut pass = true;
    let mut bits = Vec::new();
    let mut parts = Vec::new();
    for (idx, k) in [64usize, 128, 256].into_iter().enumerate() {
        let (n, sizes, bounds) = special_family(k);
        let cfg = ExperimentConfig {
            protocol: ProtocolKind::Special,
            n,
            sizes: vec![sizes.clone()],
            bounds: vec![bounds.clone()],
            trials: 100,
            master_seed: 404 + idx as u64,
            ..Default::default()
        };
        let recs = run_experiment(&cfg).expect("special family runs");
        let st = by_cell(&recs)[&0].clone();
        pass &= st.rate() >= 0.90;
        bits.push(st.max_bits);
        parts.push(format!("k={k} (t={}): success {:.2}, {} bits", sizes.len(), st.rate(), st.max_bits));
        lb.push((format!("special k={k}"), st.min_bits, st.baseline));
    }
    for w in bits.windows(2) {
        let r = w[1] as f64 / w[0] as f64;
        pass &= (1.5..=2.5).contains(&r);
        parts.push(format!("ratio {r:.3}"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let (sizes, bounds) = general_grid();
    let mut pass = true;
    let mut parts = Vec::new();
    for (layout, seed_) in [("random", 505u64), ("tail", 506)] {
        let cfg = ExperimentConfig {
            protocol: ProtocolKind::Ecc,
            n: 8192,
            sizes: sizes.clone(),
            bounds: bounds.clone(),
            layouts: vec![layout.into()],
            trials: 100,
            master_seed: seed_,
            ..Default::default()
        };
        let recs = run_experiment(&cfg).expect("ecc grid runs");
        for (c, st) in by_cell(&recs) {
            let need = if layout == "tail" { 1.0 } else { 0.90 };
            let ratio = st.max_bits as f64 / st.baseline;
            pass &= st.rate() >= need && ratio <= 12.0;
            parts.push(format!(
                "{layout} s={:?}: success {:.2} (>= {need}), r = {} = {:.2}x chi^2 H",
                sizes[c],
                st.rate(),
                st.max_bits,
                ratio
            ));
        }
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let base = ExperimentConfig {
        protocol: ProtocolKind::Edit,
        n: 65536,
        k: vec![32, 64],
        styles: vec!["random".into(), "clustered".into()],
        trials: 100,
        master_seed: 606,
        timing: false,
        ..Default::default()
    };
    let recs = run_experiment(&base).expect("edit grid runs");
    let mut success_ok = true;
    let mut size_ok = true;
    let mut parts = Vec::new();
    let cells = base.cells().unwrap();
    for (c, st) in by_cell(&recs) {
        let k = cells[c].k;
        let cap = 20.0 * k as f64 * (base.n as f64 / k as f64).log2();
        success_ok &= st.rate() >= 0.90;
        size_ok &= st.max_bits as f64 <= cap;
        parts.push(format!(
            "k={k} {}: success {:.2}, bits {} vs cap {:.0}",
            cells[c].style.unwrap().as_str(),
            st.rate(),
            st.max_bits,
            cap
        ));
    }
    // Replay the first ten trials of every cell on a different thread count.
    let replay_cfg = ExperimentConfig {
        trials: 10,
        threads: Some(1),
        ..base.clone()
    };
    let replay = run_experiment(&replay_cfg).expect("replay runs");
    let original: Vec<&TrialRecord> = recs.iter().filter(|r| r.trial < 10).collect();
    let replay_ok = replay.iter().collect::<Vec<_>>() == original;
    parts.push(format!(
        "success {}, size {}, replay {}",
        if success_ok { "ok" } else { "below 0.90" },
        if size_ok { "ok" } else { "over cap" },
        if replay_ok { "identical" } else { "differs" }
    ));
    outcome(success_ok && size_ok && replay_ok, parts.join("; "))
}

// ---- criterion 7 oracles ----

fn brute_match_len(blocks: &[MatchBlock], x: &BitString, y: &BitString, k: usize) -> usize {
    fn go(blocks: &[MatchBlock], x: &BitString, y: &BitString, k: usize, from: usize, last: Option<(usize, i64)>, cost: usize) -> usize {
        let mut best = 0;
        for slot in from..blocks.len() {
            let b = blocks[slot];
            if b.len > y.len() {
                continue;
            }
            for u in 0..=y.len() - b.len {
                if last.is_some_and(|(lu, _)| u <= lu) {
                    continue;
                }
                let delta = u as i64 - b.pos as i64;
                let c = cost + (delta - last.map_or(0, |l| l.1)).unsigned_abs() as usize;
                if c > k || (0..b.len).any(|i| x.get(b.pos + i) != y.get(u + i)) {
                    continue;
                }
                best = best.max(1 + go(blocks, x, y, k, slot + 1, Some((u, delta)), c));
            }
        }
        best
    }
    go(blocks, x, y, k, 0, None, 0)
}

fn oracle_matching() -> Result<(), String> {
    let mut rng = seed::stream(707);
    for trial in 0..200 {
        let b = rng.gen_range(2..=4usize);
        let nblocks = rng.gen_range(1..=6usize).min(24 / b);
        let n = b * nblocks;
        let x = BitString::random(n, &mut rng);
        let y_len = rng.gen_range(n.saturating_sub(2).max(1)..=(n + 2).min(24));
        let mut y = BitString::random(y_len, &mut rng);
        let shift = rng.gen_range(0..=2usize).min(n);
        y.copy_from(0, &x, shift, (n - shift).min(y_len));
        if rng.gen_bool(0.5) {
            y.flip(rng.gen_range(0..y_len));
        }
        let blocks: Vec<MatchBlock> = (0..nblocks)
            .filter(|_| rng.gen_bool(0.85))
            .map(|j| MatchBlock {
                index: j,
                pos: j * b,
                len: b,
            })
            .collect();
        let k = rng.gen_range(0..=2usize);
        let got = dp_match(&blocks, y_len, k, |slot, u| {
            let bl = blocks[slot];
            (0..bl.len).all(|i| x.get(bl.pos + i) == y.get(u + i))
        });
        let want = brute_match_len(&blocks, &x, &y, k);
        if got.len() != want {
            return Err(format!("matching instance {trial}: dp {} vs brute {want}", got.len()));
        }
    }
    Ok(())
}

fn brute_expands(g: &BipartiteGraph, set: &[usize], caps: Option<(&[usize], &[usize])>, r_hi: usize, alpha: f64) -> bool {
    let m = set.len();
    for mask in 1u32..(1 << m) {
        let r = mask.count_ones() as usize;
        if r > r_hi {
            continue;
        }
        let members: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| set[i]).collect();
        if let Some((owner, cap)) = caps {
            let mut used = vec![0usize; cap.len()];
            for i in (0..m).filter(|&i| mask >> i & 1 == 1) {
                used[owner[i]] += 1;
            }
            if used.iter().zip(cap).any(|(u, c)| u > c) {
                continue;
            }
        }
        let mut hit: Vec<usize> = members.iter().flat_map(|&v| g.neighbors(v).iter().map(|&c| c as usize)).collect();
        hit.sort_unstable();
        hit.dedup();
        if hit.len() as f64 <= alpha * r as f64 {
            return false;
        }
    }
    true
}

fn oracle_expansion() -> Result<(), String> {
    let (n, d) = (24usize, 4usize);
    for s in 0..50u64 {
        let mut rng = seed::stream(7000 + s);
        let m = rng.gen_range(6..=16usize);
        let g = random_bipartite(n, m, d, &mut rng).map_err(|e| e.to_string())?;
        let set: Vec<usize> = {
            let size = rng.gen_range(4..=12usize);
            let mut v = sample(&mut rng, n, size).into_vec();
            v.sort_unstable();
            v
        };
        let alpha = [0.5, 0.75, 0.9][s as usize % 3] * d as f64;
        for r_hi in 1..=4 {
            let got = verify_expansion_exact(&g, &set, 1, r_hi, alpha).map_err(|e| e.to_string())?;
            if got != brute_expands(&g, &set, None, r_hi, alpha) {
                return Err(format!("exact check, seed {s}, r <= {r_hi}"));
            }
        }
        // Two subsets with caps.
        let half = set.len() / 2;
        let subsets = vec![set[..half].to_vec(), set[half..].to_vec()];
        let caps = [rng.gen_range(0..=2usize), rng.gen_range(1..=3usize)];
        let owner: Vec<usize> = (0..set.len()).map(|i| (i >= half) as usize).collect();
        let got = verify_expansion_restricted(&g, &subsets, &caps, 1, 4, alpha).map_err(|e| e.to_string())?;
        if got != brute_expands(&g, &set, Some((&owner, &caps)), 4, alpha) {
            return Err(format!("restricted check, seed {s}"));
        }
    }
    Ok(())
}

fn oracle_rs() -> Result<(), String> {
    let gf = Gf::new(4).map_err(|e| e.to_string())?;
    let mut rng = seed::stream(7777);
    for trial in 0..300 {
        let len = rng.gen_range(1..=8usize);
        let e = rng.gen_range(1..=2usize);
        let data: Vec<u16> = (0..len).map(|_| rng.gen_range(0..16)).collect();
        let red = rs_syndrome_in(&gf, &SymbolBlock::new(4, data.clone()).unwrap(), e).unwrap();
        let mut word: Vec<u16> = data.iter().chain(red.symbols()).copied().collect();
        let errs = rng.gen_range(0..=e + 1);
        for p in sample(&mut rng, word.len(), errs.min(word.len())).iter() {
            word[p] ^= rng.gen_range(1..16);
        }
        // Nearest codeword within radius e by enumerating error patterns.
        let total = word.len();
        let is_codeword = |w: &[u16]| {
            let d = SymbolBlock::new(4, w[..len].to_vec()).unwrap();
            rs_syndrome_in(&gf, &d, e).unwrap().symbols() == &w[len..]
        };
        let mut near: Option<Vec<u16>> = None;
        'search: for weight in 0..=e {
            let mut pos: Vec<usize> = (0..weight).collect();
            loop {
                let mut vals = vec![1u16; weight];
                loop {
                    let mut cand = word.clone();
                    for (p, v) in pos.iter().zip(&vals) {
                        cand[*p] ^= v;
                    }
                    if is_codeword(&cand) {
                        near = Some(cand);
                        break 'search;
                    }
                    // next value tuple
                    let mut i = 0;
                    while i < weight && vals[i] == 15 {
                        vals[i] = 1;
                        i += 1;
                    }
                    if i == weight {
                        break;
                    }
                    vals[i] += 1;
                }
                // next position tuple
                let mut i = weight;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if pos[i] < total - (weight - i) {
                        pos[i] += 1;
                        for j in i + 1..weight {
                            pos[j] = pos[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if weight == 0 || i == usize::MAX {
                    break;
                }
            }
        }
        let got = rs_correct_in(
            &gf,
            &SymbolBlock::new(4, word[..len].to_vec()).unwrap(),
            &SymbolBlock::new(4, word[len..].to_vec()).unwrap(),
            e,
        );
        match (near, got) {
            (Some(c), Ok(d)) if d.symbols() == &c[..len] => {}
            (None, Err(_)) => {}
            (near, got) => return Err(format!("rs instance {trial}: oracle {near:?}, decoder {got:?}")),
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, f) in [
        ("matching", oracle_matching as fn() -> Result<(), String>),
        ("expansion", oracle_expansion),
        ("reed-solomon", oracle_rs),
    ] {
        let t0 = Instant::now();
        let r = f();
        let secs = t0.elapsed().as_secs_f64();
        pass &= r.is_ok() && secs < 10.0;
        parts.push(match r {
            Ok(()) => format!("{name} agrees ({secs:.2} s)"),
            Err(e) => format!("{name} DISAGREES: {e}"),
        });
    }
    outcome(pass, parts.join("; "))
}

// ---- criterion 8 invariant suites ----

const CASES: usize = 10_000;

fn suite(name: &str, f: impl Fn(u64) -> bool + Sync) -> (String, usize) {
    let violations = (0..CASES as u64).into_par_iter().filter(|&i| !f(i)).count();
    (name.to_string(), violations)
}

fn small_graph(rng: &mut impl Rng) -> (BipartiteGraph, usize) {
    let n = rng.gen_range(8..=64usize);
    let m = rng.gen_range(8..=96usize);
    let d = rng.gen_range(1..=6usize);
    (random_bipartite(n, m, d, rng).unwrap(), n)
}

fn criterion_8() -> Outcome {
    let mut results = Vec::new();
    results.push(suite("encode linearity", |i| {
        let mut rng = seed::stream(80_000 + i);
        let (g, n) = small_graph(&mut rng);
        let a = BitString::random(n, &mut rng);
        let b = BitString::random(n, &mut rng);
        let lhs = encode_parities(&a.xor(&b).unwrap(), &g).unwrap();
        let rhs = encode_parities(&a, &g).unwrap().xor(&encode_parities(&b, &g).unwrap()).unwrap();
        lhs == rhs
    }));
    results.push(suite("bp strict decrease + confinement", |i| {
        let mut rng = seed::stream(81_000 + i);
        let (g, n) = small_graph(&mut rng);
        let x = BitString::random(n, &mut rng);
        let z = encode_parities(&x, &g).unwrap();
        let mut y = x.clone();
        let flips = rng.gen_range(0..=n / 4);
        for v in sample(&mut rng, n, flips).iter() {
            y.flip(v);
        }
        let allowed: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        let adj = Adjacency::new(&g);
        let mut st = ParityState::new(&adj, &y, &z).unwrap();
        let mut mask = vec![false; n];
        for &v in &allowed {
            mask[v] = true;
        }
        st.set_eligible(&mask);
        let mut ok = true;
        while let Some(v) = st.first_candidate() {
            let before = st.unsatisfied();
            ok &= mask[v];
            st.flip_candidate(v);
            ok &= st.unsatisfied() < before;
        }
        let out = bp_decode_restricted(&y, &z, &g, &allowed, usize::MAX).unwrap().output;
        ok && out.xor(&y).unwrap().iter_ones().all(|v| mask[v])
    }));
    results.push(suite("budgeted bp 20k cap", |i| {
        let mut rng = seed::stream(82_000 + i);
        let (g, n) = small_graph(&mut rng);
        let x = BitString::random(n, &mut rng);
        let z = encode_parities(&x, &g).unwrap();
        let y = BitString::random(n, &mut rng);
        let perm = sample(&mut rng, n, n).into_vec();
        let cut = rng.gen_range(1..n);
        let subsets = vec![perm[..cut].to_vec(), perm[cut..].to_vec()];
        let bounds = [rng.gen_range(0..=2usize), rng.gen_range(0..=1usize)];
        let out = bp_decode_budgeted(&y, &z, &g, &subsets, &bounds).unwrap();
        let net_ok = out.net_flips.iter().zip(&bounds).all(|(&f, &k)| f <= 20 * k.max(1));
        let changed = out.output.xor(&y).unwrap();
        net_ok && subsets.iter().zip(&bounds).all(|(s, &k)| s.iter().filter(|&&v| changed.get(v)).count() <= 20 * k.max(1))
    }));
    let hc = Config::default();
    let configs: [(usize, Vec<usize>, Vec<usize>); 4] = [
        (1024, vec![128], vec![4]),
        (2048, vec![64, 512], vec![8, 2]),
        (2048, vec![32, 64, 128, 256], vec![4, 4, 2, 2]),
        (4096, vec![128, 256, 512, 1024], vec![32, 16, 8, 4]),
    ];
    let reference: Vec<Vec<Vec<usize>>> = configs
        .iter()
        .map(|(n, s, k)| {
            let x = BitString::zeros(*n);
            [
                alice_general(&x, s, k, 1, &hc).unwrap(),
                alice_grouped(&x, s, k, 2, 1, &hc).unwrap(),
                alice_special(&x, s, k, None, 1, &hc).unwrap(),
            ]
            .iter()
            .map(|sk| sk.segments.iter().map(|g| g.payload.len()).collect())
            .collect()
        })
        .collect();
    results.push(suite("sketch length obliviousness", |i| {
        let c = (i as usize) % configs.len();
        let (n, s, k) = &configs[c];
        let mut rng = seed::stream(83_000 + i);
        let x = BitString::random(*n, &mut rng);
        let shared = rng.gen();
        let lens: Vec<Vec<usize>> = [
            alice_general(&x, s, k, shared, &hc).unwrap(),
            alice_grouped(&x, s, k, 2, shared, &hc).unwrap(),
            alice_special(&x, s, k, None, shared, &hc).unwrap(),
        ]
        .iter()
        .map(|sk| sk.segments.iter().map(|g| g.payload.len()).collect())
        .collect();
        lens == reference[c]
    }));
    let ec = EditConfig::default();
    results.push(suite("edit partition", |i| {
        let mut rng = seed::stream(84_000 + i);
        let n = 1024;
        let k = rng.gen_range(1..=2usize);
        let x = BitString::random(n, &mut rng);
        let (y, _) = edit_adversary(&x, k, EditStyle::Random, &mut rng).unwrap();
        let shared = rng.gen();
        let sk = alice_edit_sketch(&x, k, shared, &ec).unwrap();
        let (res, trace) = bob_edit_recover_traced(&y, k, &sk, shared, &ec, None);
        let no_partition_error = !matches!(&res, Err(e) if e.to_string().contains("live ancestor"));
        no_partition_error
            && trace
                .levels
                .iter()
                .skip(1)
                .all(|l| l.subset_sizes.iter().sum::<usize>() == l.blocks)
    }));
    results.push(suite("apply_errors involution", |i| {
        let mut rng = seed::stream(85_000 + i);
        let n = rng.gen_range(1..=300usize);
        let x = BitString::random(n, &mut rng);
        let w = rng.gen_range(0..=n);
        let p = ErrorPattern::new(sample(&mut rng, n, w).into_vec()).unwrap();
        let y = apply_errors(&x, &p).unwrap();
        apply_errors(&y, &p).unwrap() == x && hamming_distance(&x, &y).unwrap() == p.len()
    }));
    results.push(suite("entropy monotonicity", |i| {
        let mut rng = seed::stream(86_000 + i);
        let s = rng.gen_range(2..=5000usize);
        let k = rng.gen_range(0..s);
        let h = entropy_h1(s, k).unwrap();
        entropy_h1(s, k + 1).unwrap() >= h - 1e-9 && entropy_h1(s + 1, k).unwrap() >= h - 1e-9
    }));
    let total: usize = results.iter().map(|r| r.1).sum();
    let detail = results
        .iter()
        .map(|(n, v)| format!("{n}: {v}/{CASES}"))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(total == 0, format!("violations: {detail}"))
}

fn criterion_9(lb: &LowerBoundLog) -> Outcome {
    let mut pass = true;
    let mut worst = f64::INFINITY;
    let mut worst_name = String::new();
    for (name, bits, h) in lb {
        let slack = *bits as f64 - (h - 8.0);
        pass &= slack >= 0.0;
        if slack < worst {
            worst = slack;
            worst_name = name.clone();
        }
    }
    outcome(
        pass,
        format!("{} cells; smallest margin bits - (H - 8) = {worst:.1} at {worst_name}", lb.len()),
    )
}

fn main() {
    let mut lb = LowerBoundLog::new();
    let mut all = true;
    let mut report = |i: usize, o: Outcome| {
        all &= o.pass;
        println!("criterion {i}: {} | {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report(1, criterion_1(&mut lb));
    report(2, criterion_2(&mut lb));
    report(3, criterion_3(&mut lb));
    report(4, criterion_4(&mut lb));
    report(5, criterion_5());
    report(6, criterion_6());
    report(7, criterion_7());
    report(8, criterion_8());
    report(9, criterion_9(&lb));
    if !all {
        std::process::exit(1);
    }
}
