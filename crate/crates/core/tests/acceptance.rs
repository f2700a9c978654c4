//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wreathscope::confining::{
    check_confining, recover_subgroup, validate_equivalence, CheckParams, Direction, Outcome,
    QOracle, QSpec, RecoverParams, Verdict,
};
use wreathscope::metrics::{busemann, delta_four_point, wordlen_qp, BfsTable, DEFAULT_STATE_LIMIT};
use wreathscope::structures::{build_b_poset, enumerate_subgroups, StructureKind};
use wreathscope::{
    subgroup_closure, Coeff, Element, GenSet, GroupDesc, LampConfig, Side, SubgroupDesc, WordMetric,
};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..n)
            .take_while(|p| p * p <= n)
            .all(|p| !n.is_multiple_of(p))
}

/// `d` with `H = <d>` in `Z_n`, so `H_d ⊆ H_e` iff `e | d`.
fn divisor_of(h: &SubgroupDesc, n: u32) -> u32 {
    h.elements()
        .iter()
        .map(|c| c.residues()[0])
        .filter(|&r| r != 0)
        .min()
        .unwrap_or(n)
}

fn poset_counts() -> Check {
    let expected = [(2, 2), (3, 2), (4, 4), (6, 6), (12, 10)];
    for (n, qp) in expected {
        let g = GroupDesc::cyclic(n).unwrap();
        let p = build_b_poset(&g);
        ensure(p.count(StructureKind::QuasiParabolic) == qp, || {
            format!("Z{n}: qp count")
        })?;
        ensure(p.count(StructureKind::Lineal) == 1, || {
            format!("Z{n}: lineal count")
        })?;
        ensure(p.count(StructureKind::Elliptic) == 1, || {
            format!("Z{n}: elliptic count")
        })?;
        ensure(p.nodes().len() == qp + 2, || format!("Z{n}: node count"))?;

        // expected cover relation from divisors alone
        let key = |id: usize| -> (u8, u32) {
            match &p.nodes()[id].descriptor {
                GenSet::Trivial => (0, 0),
                GenSet::Lineal => (1, 0),
                GenSet::QPlus(h) => (2, divisor_of(h, n)),
                GenSet::QMinus(h) => (3, divisor_of(h, n)),
                GenSet::Standard => (9, 0),
            }
        };
        let proper: Vec<u32> = divisors(n).into_iter().filter(|&d| d > 1).collect();
        let mut want = BTreeSet::from([((0, 0), (1, 0))]);
        for side in [2u8, 3] {
            for &d in &proper {
                if is_prime(d) {
                    want.insert(((1, 0), (side, d)));
                }
                for &e in &proper {
                    if e % d == 0 && is_prime(e / d) {
                        want.insert(((side, d), (side, e)));
                    }
                }
            }
        }
        let got: BTreeSet<_> = p.hasse().iter().map(|&(a, b)| (key(a), key(b))).collect();
        ensure(got == want, || {
            format!("Z{n}: Hasse diagram {got:?} != {want:?}")
        })?;
    }
    Ok("counts (2,2,4,6,10) for Z2,Z3,Z4,Z6,Z12; Hasse = two reversed divisor lattices over lineal".into())
}

fn configs(g: &GroupDesc, lo: i64, hi: i64) -> Vec<LampConfig> {
    let elems = g.elements();
    let mut out = vec![LampConfig::new()];
    for p in lo..=hi {
        let prev = std::mem::take(&mut out);
        for f in prev {
            for c in &elems {
                let mut f = f.clone();
                f.set(p, c.clone());
                out.push(f);
            }
        }
    }
    out
}

fn metric_oracle() -> Check {
    let (w, w_next) = (4, 5);
    let mut compared = 0usize;
    for n in [2, 3] {
        let g = GroupDesc::cyclic(n).unwrap();
        let mut variants = vec![GenSet::Standard, GenSet::Lineal, GenSet::Trivial];
        for h in enumerate_subgroups(&g, false) {
            variants.push(GenSet::QPlus(h.clone()));
            variants.push(GenSet::QMinus(h));
        }
        let lamps = configs(&g, -3, 3);
        for gens in &variants {
            let metric = WordMetric::new(&g, gens).unwrap();
            let small = BfsTable::build(&g, gens, w, w, DEFAULT_STATE_LIMIT).unwrap();
            let large = BfsTable::build(&g, gens, w_next, w_next, DEFAULT_STATE_LIMIT).unwrap();
            for f in &lamps {
                for m in -2..=2 {
                    let x = Element::from_lamps(f, m);
                    let a = small.distance(&x).unwrap();
                    let b = large.distance(&x).unwrap();
                    ensure(a == b, || {
                        format!("Z{n} {gens} {x}: BFS not stable ({a:?} vs {b:?})")
                    })?;
                    let closed = metric.len(&x);
                    ensure(Some(closed) == a, || {
                        format!("Z{n} {gens} {x}: closed form {closed}, BFS {a:?}")
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!(
        "{compared} elements, BFS stable between windows {w} and {w_next}, exact"
    ))
}

fn witness_growth() -> Check {
    let mut cases = 0;
    for n in [2u32, 3, 4, 6, 12] {
        let g = GroupDesc::cyclic(n).unwrap();
        let all = enumerate_subgroups(&g, false);
        for h in enumerate_subgroups(&g, true) {
            let c = g.elements().into_iter().find(|c| !h.contains(c)).unwrap();
            let bfs = (n <= 4).then(|| {
                BfsTable::build(&g, &GenSet::QPlus(h.clone()), 4, 4, DEFAULT_STATE_LIMIT).unwrap()
            });
            for i in 1..=50i64 {
                let f = Element::base(LampConfig::single(-i, c.clone()));
                let (len, _) = wordlen_qp(&f, &h, Side::Plus, &g).unwrap();
                ensure(len == 2 * i as u64 + 1, || {
                    format!("Z{n} H={h} i={i}: |f_i| = {len}")
                })?;
                if i <= 3 {
                    if let Some(t) = &bfs {
                        let b = t.distance(&f).unwrap();
                        ensure(b == Some(len), || format!("Z{n} H={h} i={i}: BFS {b:?}"))?;
                    }
                }
                for k in &all {
                    let (m, _) = wordlen_qp(&f, k, Side::Minus, &g).unwrap();
                    ensure(m == 1, || format!("Z{n} K={k} i={i}: |f_i|_S'_K = {m}"))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} (group, H, i) cases: |f_i|_S_H = 2i+1, |f_i|_S'_K = 1, BFS agrees for i <= 3"
    ))
}

fn confining_verdicts() -> Check {
    let params = CheckParams::with_window(4);
    let mut checked = 0;
    for n in [2u32, 3, 4, 6, 8, 12] {
        let g = GroupDesc::cyclic(n).unwrap();
        for h in enumerate_subgroups(&g, true) {
            for (side, dir) in [(Side::Plus, Direction::T), (Side::Minus, Direction::TInv)] {
                let q = QSpec::qh(h.clone(), side, g.clone());
                let r = check_confining(&q, dir, &params).map_err(|e| e.to_string())?;
                ensure(
                    r.verdict == Verdict::StrictlyConfining && r.cond_c.n0 == Some(0),
                    || format!("Z{n} H={h} {side:?}: {:?} n0={:?}", r.verdict, r.cond_c.n0),
                )?;
                checked += 1;
            }
        }
    }
    let full = QSpec::builtin("fullbase:Z4", 4).unwrap();
    let r = check_confining(&full, Direction::T, &params).unwrap();
    ensure(r.verdict == Verdict::ConfiningNotStrict && r.lineal, || {
        format!("fullbase: {:?}", r.verdict)
    })?;
    let ce = QSpec::counterexample();
    for w in 4..=6 {
        let r = check_confining(&ce, Direction::T, &CheckParams::with_window(w)).unwrap();
        let witness = LampConfig::single(0, Coeff(vec![1, 0]));
        ensure(
            r.verdict == Verdict::StrictlyConfining
                && r.cond_c.n0 == Some(0)
                && r.cond_a.strictness_witness == Some(witness),
            || {
                format!(
                    "counterexample W={w}: {:?} {:?}",
                    r.verdict, r.cond_a.strictness_witness
                )
            },
        )?;
    }
    Ok(format!("{checked} Q_H/Q'_H strictly confining with n0 = 0; fullbase lineal; counterexample witness (1,0) at W = 4..6"))
}

fn recovery() -> Check {
    let g = GroupDesc::cyclic(12).unwrap();
    let mut slowest = Duration::ZERO;
    for d in [2u32, 3, 4, 6, 12] {
        let start = Instant::now();
        let q = QSpec::builtin(&format!("qh:Z12:{{{}}}", d % 12), 8).unwrap();
        let r = recover_subgroup(&q, &RecoverParams::new(8)).map_err(|e| e.to_string())?;
        let want = subgroup_closure(&[g.coeff(&[(d % 12) as i64]).unwrap()], &g).unwrap();
        ensure(r.subgroup == want && r.certified, || {
            format!("d={d}: {} certified={}", r.subgroup, r.certified)
        })?;
        slowest = slowest.max(start.elapsed());
    }
    let start = Instant::now();
    let q = QSpec::z8_example(8);
    let r = recover_subgroup(&q, &RecoverParams::new(8)).map_err(|e| e.to_string())?;
    ensure(r.subgroup.to_string() == "{0,2,4,6}" && r.certified, || {
        format!("z8: {} certified={}", r.subgroup, r.certified)
    })?;
    slowest = slowest.max(start.elapsed());
    ensure(slowest < Duration::from_secs(10), || {
        format!("slowest case {slowest:?}")
    })?;
    Ok(format!("H_d certified for d in {{2,3,4,6,12}} over Z12, Z8 family gives {{0,2,4,6}}, W=8, slowest {slowest:.2?}"))
}

fn refutation() -> Check {
    let q = QSpec::counterexample();
    let g = q.group.clone();
    let oracle = QOracle::new(&q, 22);
    let c = |a: i64, b: i64| g.coeff(&[a, b]).unwrap();
    for h in enumerate_subgroups(&g, true) {
        let r = validate_equivalence(&q, &h, 20).map_err(|e| e.to_string())?;
        ensure(
            r.outcome
                == Outcome::Refuted {
                    family: "p_i".into(),
                },
            || format!("H={h}: {:?}", r.outcome),
        )?;
        let bfs =
            BfsTable::build(&g, &GenSet::QPlus(h.clone()), 4, 4, DEFAULT_STATE_LIMIT).unwrap();
        for i in 1..=20i64 {
            let p = LampConfig::from_entries([(-i, c(0, 1)), (-i + 1, c(1, 0))]);
            ensure(oracle.contains(&p) == Ok(true), || {
                format!("p_{i} not in Q")
            })?;
            let (len, _) = wordlen_qp(&Element::base(p.clone()), &h, Side::Plus, &g).unwrap();
            ensure(len >= 2 * i as u64 - 1, || {
                format!("H={h}: |p_{i}| = {len}")
            })?;
            if i <= 3 {
                let b = bfs.distance(&Element::base(p)).unwrap();
                ensure(b == Some(len), || {
                    format!("H={h} i={i}: BFS {b:?} vs {len}")
                })?;
            }
        }
    }
    Ok("all four proper H of Z2xZ2 refuted by p_i: |p_i|_X = 1, |p_i|_S_H >= 2i-1, N=20".into())
}

fn busemann_additivity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for text in ["Z2", "Z3", "Z12", "Z2xZ2"] {
        let g = GroupDesc::parse(text).unwrap();
        let elems = g.elements();
        let random = |rng: &mut ChaCha8Rng| {
            let f = LampConfig::from_entries(
                (-5..=5).map(|p| (p, elems[rng.gen_range(0..elems.len())].clone())),
            );
            Element::new(f, rng.gen_range(-20..=20))
        };
        for _ in 0..10_000 {
            let (a, b) = (random(&mut rng), random(&mut rng));
            let ab = g.elem_mul(&a, &b).unwrap();
            ensure(busemann(&ab) == busemann(&a) + busemann(&b), || {
                format!("{text}: {a} * {b}")
            })?;
        }
    }
    Ok("10^4 seeded pairs for each of Z2, Z3, Z12, Z2xZ2, exact".into())
}

fn delta_evidence() -> Check {
    let g = GroupDesc::cyclic(2).unwrap();
    let radii = [6, 10, 14];
    let est = |gens: &GenSet| -> Vec<u64> {
        radii
            .iter()
            .map(|&r| delta_four_point(&g, gens, r, 2000, 42).unwrap().twice_delta)
            .collect()
    };
    let sh = est(&GenSet::QPlus(g.trivial_subgroup()));
    let std = est(&GenSet::Standard);
    let spread = sh.iter().max().unwrap() - sh.iter().min().unwrap();
    ensure(spread <= 2, || {
        format!("S_H 2delta {sh:?} varies by {spread}")
    })?;
    ensure(std.windows(2).all(|w| w[0] < w[1]), || {
        format!("standard 2delta {std:?} not increasing")
    })?;
    Ok(format!("2delta over radii {radii:?}: S_H {sh:?} (spread <= 2), standard {std:?} (strictly increasing); N=2000, seed 42"))
}

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 poset counts", poset_counts, 1),
        ("2 metric-oracle equivalence", metric_oracle, 60),
        ("3 witness growth", witness_growth, 60),
        ("4 confining verdicts", confining_verdicts, 30),
        ("5 recovery", recovery, 60),
        ("6 counterexample refutation", refutation, 60),
        ("7 busemann additivity", busemann_additivity, 60),
        ("8 delta evidence", delta_evidence, 120),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took > Duration::from_secs(budget) {
                Err(format!("{msg}; took {took:.2?}, budget {budget} s"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} [{took:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
