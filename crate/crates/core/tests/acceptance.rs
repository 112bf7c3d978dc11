//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cpnorm::canon::{apply_f, canonical_rep};
use cpnorm::cli::{bench, generate, BenchSpec, Family, MethodArg};
use cpnorm::dihedral::{build_dihedral, normalizer_dihedral};
use cpnorm::encode::{build_instance, code_to_group};
use cpnorm::gfp::{FpMatrix, FpVector, PrimeField};
use cpnorm::oracle::{brute_canon_rep, brute_nb, brute_normalizer, expected_normalizer_order, DEFAULT_BUDGET};
use cpnorm::perm::{PermGroup, Permutation};
use cpnorm::search::{norm_bh, normalizer, Config, Method, PruneRule, PruneToggles};

type Outcome = Result<String, String>;

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn random_full_rank(rng: &mut ChaCha8Rng, p: u32, s: usize, k: usize) -> FpMatrix {
    loop {
        let rows: Vec<FpVector> = (0..s).map(|_| (0..k).map(|_| rng.gen_range(0..p)).collect()).collect();
        let m = FpMatrix::from_vectors(field(p), k, &rows);
        if m.rank() == s {
            return m;
        }
    }
}

fn has_zero_column(m: &FpMatrix) -> bool {
    (0..m.cols()).any(|j| m.column(j).iter().all(|&x| x == 0))
}

fn normalises(h: &PermGroup, x: &Permutation) -> bool {
    let chain = h.stab_chain();
    h.generators().iter().all(|g| chain.contains(&g.conj(x)))
}

fn full() -> Config {
    Config::default().with_method(Method::Full)
}

/// Random codes with `p ∈ {2,3}`, `k ≤ 5`: order against `p^k·|MAut|`, and
/// the dual image of every generator against `H^⊥`.
fn c1_c4() -> (Outcome, Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut ok, mut gens_checked) = (0, 0);
    let mut fail1 = Vec::new();
    let mut fail4 = Vec::new();
    let mut count = 0;
    while count < 200 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let k = rng.gen_range(1..=5);
        let s = rng.gen_range(1..=k);
        let m = random_full_rank(&mut rng, p, s, k);
        if has_zero_column(&m) {
            continue;
        }
        count += 1;
        let h = code_to_group(&m).unwrap();
        let n = match normalizer(&h, p, &full()) {
            Ok(n) => n,
            Err(e) => {
                fail1.push(format!("{m:?}: {e}"));
                continue;
            }
        };
        let want = expected_normalizer_order(&m, DEFAULT_BUDGET).unwrap();
        if n.order == want {
            ok += 1;
        } else {
            fail1.push(format!("{m:?}: {} != {want}", n.order));
        }
        let inst = build_instance(&h, p).unwrap();
        if inst.s() == inst.k() {
            // H^⊥ is trivial
            gens_checked += n.generators.len();
            continue;
        }
        let dual = inst.dual_instance().unwrap();
        for x in &n.generators {
            let (b, kappa) = inst.decompose_bk(x).unwrap();
            gens_checked += 1;
            if !dual.normalises(&b.inverse().mul(&kappa)) {
                fail4.push(format!("{m:?}: {x}"));
            }
        }
    }
    let r1 = if fail1.is_empty() {
        Ok(format!("{ok}/{count} orders equal p^k*|MAut|"))
    } else {
        Err(format!("{} mismatches, first: {}", fail1.len(), fail1[0]))
    };
    let r4 = if fail4.is_empty() {
        Ok(format!("{gens_checked} generators, b^-1 kappa normalises the dual group"))
    } else {
        Err(format!("{} failures, first: {}", fail4.len(), fail4[0]))
    };
    (r1, r4)
}

/// Every binary code of length at most 4 without zero columns.
fn c2() -> Outcome {
    let mut seen = HashSet::new();
    let mut checked = 0;
    for k in 1..=4usize {
        for s in 1..=k {
            for bits in 0u32..(1 << (s * k)) {
                let rows: Vec<FpVector> = (0..s).map(|i| (0..k).map(|j| (bits >> (i * k + j)) & 1).collect()).collect();
                let m = FpMatrix::from_vectors(field(2), k, &rows);
                if m.rank() != s || has_zero_column(&m) || !seen.insert(m.row_space_basis()) {
                    continue;
                }
                let h = code_to_group(&m).unwrap();
                let ours = normalizer(&h, 2, &full()).map_err(|e| format!("{m:?}: {e}"))?;
                let brute = brute_normalizer(&h, DEFAULT_BUDGET).unwrap();
                let ours_g = ours.group();
                let brute_chain = brute.group.stab_chain();
                let ours_chain = ours_g.stab_chain();
                if ours.order != brute.order()
                    || BigUint::from(brute.count) != ours.order
                    || !ours.generators.iter().all(|g| brute_chain.contains(g))
                    || !brute.group.generators().iter().all(|g| ours_chain.contains(g))
                {
                    return Err(format!("{m:?}: {} vs {}", ours.order, brute.order()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} codes (n <= 8), equal groups"))
}

fn c3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut trials = 0;
    for _ in 0..50 {
        let p = [2u32, 3, 5, 7][rng.gen_range(0..4)];
        let k = rng.gen_range(2..=8);
        let s = rng.gen_range(1..k);
        let mut a = random_full_rank(&mut rng, p, s, k);
        for i in 0..s {
            for j in 0..s {
                a.set(i, j, u32::from(i == j));
            }
        }
        let base = canonical_rep(&a).map_err(|e| e.to_string())?.rep;
        for _ in 0..20 {
            let r = random_full_rank(&mut rng, p, s, s);
            let d: Vec<u32> = (0..k).map(|_| rng.gen_range(1..p)).collect();
            let moved = apply_f(&base, &r, &d).unwrap();
            let c = canonical_rep(&moved).map_err(|e| e.to_string())?;
            if c.rep != base {
                return Err(format!("invariance fails for {base:?}"));
            }
            trials += 1;
        }
    }
    if trials < 1000 {
        return Err(format!("only {trials} invariance trials"));
    }
    let mut minimal = 0;
    for p in [2u32, 3] {
        for k in 1..=4usize {
            for s in 1..=k.min(2) {
                let free = s * (k - s);
                for idx in 0..(p as u64).pow(free as u32) {
                    let mut x = idx;
                    let mut a = FpMatrix::zeros(field(p), s, k);
                    for i in 0..s {
                        a.set(i, i, 1);
                        for j in s..k {
                            a.set(i, j, (x % p as u64) as u32);
                            x /= p as u64;
                        }
                    }
                    let ours = canonical_rep(&a).unwrap().rep;
                    if ours != brute_canon_rep(&a, DEFAULT_BUDGET).unwrap() {
                        return Err(format!("not least for {a:?}"));
                    }
                    minimal += 1;
                }
            }
        }
    }
    Ok(format!("{trials} invariance trials; {minimal} matrices least in orbit"))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    while count < 50 {
        let k = rng.gen_range(1..=3);
        let s = rng.gen_range(1..=k);
        let m = random_full_rank(&mut rng, 3, s, k);
        if has_zero_column(&m) {
            continue;
        }
        count += 1;
        let inst = build_instance(&code_to_group(&m).unwrap(), 3).unwrap();
        let brute = brute_nb(&inst, DEFAULT_BUDGET).unwrap();
        if norm_bh(&inst).order() != BigUint::from(brute.count) {
            return Err(format!("{m:?}: {} vs {}", norm_bh(&inst).order(), brute.count));
        }
    }
    Ok(format!("{count} instances with p=3, k<=3"))
}

/// `(p, k, dim)` cells whose search with every rule off stays small.
const PRUNE_CELLS: &[(u32, usize, usize)] = &[
    (2, 6, 3),
    (2, 8, 2),
    (2, 8, 4),
    (2, 8, 6),
    (2, 10, 3),
    (2, 10, 5),
    (2, 12, 2),
    (2, 12, 4),
    (3, 6, 2),
    (3, 8, 3),
    (3, 8, 5),
    (3, 10, 2),
    (3, 10, 4),
    (3, 12, 1),
    (3, 12, 3),
    (5, 6, 3),
    (5, 8, 2),
    (5, 8, 4),
    (5, 10, 2),
    (5, 12, 2),
    (5, 12, 1),
    (2, 4, 2),
    (3, 4, 2),
    (5, 4, 1),
    (5, 7, 5),
];

fn c6() -> Outcome {
    let mut done = 0;
    for (i, &(p, k, dim)) in PRUNE_CELLS.iter().enumerate() {
        for seed in 0..2u64 {
            let g = generate(Family::Cp, p, k, dim, 100 * i as u64 + seed).unwrap();
            let on = normalizer(&g.group, p, &full()).map_err(|e| e.to_string())?;
            let off_cfg = full().with_prune(PruneToggles::none());
            let off = normalizer(&g.group, p, &off_cfg).map_err(|e| e.to_string())?;
            if on.order != off.order {
                return Err(format!("{:?}: all off gives {} not {}", g.descriptor, off.order, on.order));
            }
            if on.stats.nodes > off.stats.nodes {
                return Err(format!("{:?}: {} nodes with pruning, {} without", g.descriptor, on.stats.nodes, off.stats.nodes));
            }
            for r in PruneRule::ALL {
                let one = normalizer(&g.group, p, &full().with_prune(PruneToggles::default().without(r)))
                    .map_err(|e| e.to_string())?;
                if one.order != on.order {
                    return Err(format!("{:?}: without {r} order {} not {}", g.descriptor, one.order, on.order));
                }
            }
            done += 1;
        }
    }
    Ok(format!("{done} instances (p in 2,3,5; k <= 12), orders stable, nodes on <= off"))
}

/// Closure of `gens` inside `S_6`, as a sorted element list.
fn subgroup(gens: &[Permutation]) -> Vec<Permutation> {
    PermGroup::new(6, gens.iter().cloned()).unwrap().elements()
}

fn c7() -> Outcome {
    let mut count = 0;
    let s3 = PermGroup::new(3, ["(1 2 3)", "(1 2)"].map(|c| Permutation::parse(c, 3).unwrap())).unwrap();
    let n = normalizer_dihedral(&build_dihedral(&s3, 3).map_err(|e| e.to_string())?, &Config::default())
        .map_err(|e| e.to_string())?;
    if n.order != brute_normalizer(&s3, DEFAULT_BUDGET).unwrap().order() {
        return Err("k = 1".into());
    }
    count += 1;

    let a = PermGroup::new(6, ["(1 2 3)", "(1 2)", "(4 5 6)", "(4 5)"].map(|c| Permutation::parse(c, 6).unwrap())).unwrap();
    let elems = a.elements();
    let mut groups: BTreeSet<Vec<Permutation>> = BTreeSet::new();
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate().skip(i) {
            groups.insert(subgroup(&[x.clone(), y.clone()]));
            for z in elems.iter().skip(j) {
                groups.insert(subgroup(&[x.clone(), y.clone(), z.clone()]));
            }
        }
    }
    for g in groups {
        let h = PermGroup::new(6, g.iter().cloned()).unwrap();
        let orbits = h.orbits();
        let dihedral_restrictions = orbits.len() == 2
            && orbits.iter().all(|o| {
                let r: HashSet<Vec<usize>> = g.iter().map(|x| o.iter().map(|&p| x.image(p)).collect()).collect();
                r.len() == 6
            });
        if !dihedral_restrictions {
            continue;
        }
        let inst = build_dihedral(&h, 3).map_err(|e| format!("{g:?}: {e}"))?;
        let ours = normalizer_dihedral(&inst, &Config::default()).map_err(|e| e.to_string())?;
        let brute = brute_normalizer(&h, DEFAULT_BUDGET).unwrap();
        let brute_chain = brute.group.stab_chain();
        let ours_chain = ours.group().stab_chain();
        if ours.order != brute.order()
            || !ours.generators.iter().all(|x| brute_chain.contains(x))
            || !brute.group.generators().iter().all(|x| ours_chain.contains(x))
        {
            return Err(format!("{h:?}: {} vs {}", ours.order, brute.order()));
        }
        count += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..100u64 {
        let p = [3u32, 5, 7, 11][rng.gen_range(0..4)];
        let k = rng.gen_range(2..=8);
        let dim = rng.gen_range(1..=k);
        let g = generate(Family::Dihedral, p, k, dim, t).unwrap();
        let inst = build_dihedral(&g.group, p).map_err(|e| format!("{:?}: {e}", g.descriptor))?;
        let hp = inst.sylow_p().group();
        let h2 = inst.sylow_2();
        let hp_chain = hp.stab_chain();
        let h_chain = g.group.stab_chain();
        let alphas = inst.alphas();
        let ok = g.group.order() == hp.order() * h2.order()
            && hp.generators().iter().chain(h2.generators()).all(|x| h_chain.contains(x))
            && g.group.generators().iter().all(|x| hp.generators().iter().all(|y| hp_chain.contains(&y.conj(x))))
            && h2.generators().iter().all(|r| alphas.iter().all(|&a| r.image(a) == a) && !hp_chain.contains(r));
        if !ok {
            return Err(format!("{:?}: Sylow split invariants fail", g.descriptor));
        }
        let n = normalizer_dihedral(&inst, &Config::default()).map_err(|e| e.to_string())?;
        if !n.generators.iter().all(|x| normalises(&g.group, x)) {
            return Err(format!("{:?}: generator does not normalise", g.descriptor));
        }
    }
    Ok(format!("{count} groups with n <= 8 equal to brute force; 100 random Sylow splits hold"))
}

fn c8() -> Outcome {
    let cells = [(5u32, 4usize), (5, 6), (5, 8), (2, 6), (3, 6)];
    let mut total = 0;
    for (p, s) in cells {
        let spec = BenchSpec { family: Family::Cp, p, ks: vec![20], dim: Some(s) };
        let rows = bench(&spec, &[MethodArg::Full, MethodArg::LimitDepth], 25, Duration::from_secs(600), 0, &Config::default(), |_| {})
            .map_err(|e| e.to_string())?;
        if rows[0].completed != 25 || rows[1].completed != 25 || rows[0].orders != rows[1].orders {
            return Err(format!("p={p} s={s}: orders differ or runs incomplete"));
        }
        total += 25;
    }
    Ok(format!("{total} instances, k=20, full and limitdepth orders equal"))
}

fn c9() -> Outcome {
    let timeout = Duration::from_secs(600);
    let spec = BenchSpec { family: Family::Cp, p: 3, ks: vec![10], dim: Some(5) };
    let rows = bench(&spec, &[MethodArg::Full], 10, timeout, 0, &Config::default(), |_| {}).map_err(|e| e.to_string())?;
    let median = rows[0].median.ok_or("p=3 k=10 runs timed out")?;
    if median >= 60.0 {
        return Err(format!("p=3 k=10 dim=5 median {median:.3} s"));
    }
    let spec = BenchSpec { family: Family::Cp, p: 11, ks: vec![20], dim: Some(6) };
    let rows = bench(&spec, &[MethodArg::Full, MethodArg::LimitDepth], 10, timeout, 0, &Config::default(), |_| {})
        .map_err(|e| e.to_string())?;
    let (f, l) = (&rows[0], &rows[1]);
    if f.completed != 10 {
        return Err(format!("full search finished {} of 10 runs at p=11", f.completed));
    }
    let fm = f.median.unwrap();
    let slower = match l.median {
        Some(lm) => lm >= fm,
        None => true,
    };
    if !slower {
        return Err(format!("limitdepth median {:?} below full {fm:.3}", l.median));
    }
    let lim = l.median.map_or(format!(">{}", l.timeout_secs), |x| format!("{x:.3}"));
    Ok(format!("p=3 k=10 dim=5 median {median:.3} s; p=11 k=20 dim=6 full {fm:.3} s, limitdepth {lim} s"))
}

fn main() {
    let mut failed = 0;
    let mut report = |name: &str, t: Instant, r: Outcome| {
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {name}: {msg} [{secs:.1} s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} [{secs:.1} s]");
            }
        }
    };
    let t = Instant::now();
    let (r1, r4) = c1_c4();
    report("1 oracle equivalence", t, r1);
    let t = Instant::now();
    report("2 direct S_n equivalence", t, c2());
    let t = Instant::now();
    report("3 canonical form", t, c3());
    report("4 dual symmetry", Instant::now(), r4);
    let t = Instant::now();
    report("5 N_B(H)", t, c5());
    let t = Instant::now();
    report("6 pruning safety", t, c6());
    let t = Instant::now();
    report("7 dihedral equivalence", t, c7());
    let t = Instant::now();
    report("8 cross-method agreement", t, c8());
    let t = Instant::now();
    report("9 performance", t, c9());
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
