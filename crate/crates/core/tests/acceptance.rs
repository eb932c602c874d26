//! Acceptance suite: one line per criterion, exact arithmetic throughout.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use paraosp::gz::{level_dimensions, TopRow};
use paraosp::osp::{
    even_dimension, even_subalgebra_rank, root_vectors, structure_constants, umn_rank,
    verify_triple_relations,
};
use paraosp::redmat::{capped_tops, gk_squared, id2_sweep, ParsingVariant};
use paraosp::symfunc::{char_verma, char_vp, verify_char_formula, CharMethod};
use paraosp::verma::{diagonal_check, gram_blocks, radical_cut_check, FactorOrder, VermaModule};
use paraosp::{Dims, Exec, Q};

const EXEC: Exec = Exec::Parallel;

fn all_dims() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for m in 0..=2 {
        for n in 0..=2 {
            if m + n > 0 {
                v.push((m, n));
            }
        }
    }
    v
}

fn binom(n: i64, k: i64) -> i64 {
    // C(−1, −1) = 1 is needed for the purely fermionic case.
    if k == n {
        return 1;
    }
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let rep = verify_triple_relations(Dims::new(m, n).unwrap());
        checked += rep.checked;
        failures += rep.failures.len();
    }
    outcome(
        failures == 0,
        format!("{checked} relations checked, {failures} failures"),
    )
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let dims = Dims::new(m, n).unwrap();
        let r = dims.r();
        let basis = structure_constants(dims).unwrap();
        let roots = root_vectors(dims);
        let (even, odd) = basis.graded_dimension();
        let even_roots = roots.iter().filter(|(_, mat)| !mat.is_odd()).count();
        let checks = [
            umn_rank(dims) == r * r,
            basis.umn_closed(),
            even_subalgebra_rank(dims) == even_dimension(dims),
            even == even_roots + r,
            odd == roots.len() - even_roots,
            basis.len() == roots.len() + r,
            basis.is_antisupersymmetric(),
        ];
        ok &= checks.iter().all(|&c| c);
        notes.push(format!("({m}|{n}) dim {}={}+{}", basis.len(), even, odd));
    }
    outcome(ok, notes.join(", "))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for (m, n) in all_dims() {
        let a = char_verma(m, n, 1, 6, CharMethod::Product, EXEC);
        let b = char_verma(m, n, 1, 6, CharMethod::SchurSum, EXEC);
        if a != b {
            bad.push(format!("({m}|{n})"));
        }
    }
    outcome(bad.is_empty(), format!("degree 6, mismatches: {bad:?}"))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut runs = 0;
    for (m, n) in all_dims() {
        for p in 1..=3 {
            runs += 1;
            let rep = verify_char_formula(m, n, p, 6, EXEC);
            if !rep.ok() {
                bad.push(format!("({m}|{n}) p={p}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{runs} runs to degree 6 (series + LR identity), failures: {bad:?}"),
    )
}

/// Shared by criteria 5, 8 and 10.
fn oracle_configs() -> [(usize, usize, usize, usize); 3] {
    [(1, 1, 1, 4), (1, 1, 2, 4), (2, 1, 1, 3)]
}

fn criterion_5_and_10() -> (Outcome, Outcome) {
    let mut rank_ok = true;
    let mut psd_ok = true;
    let mut blocks_seen = 0;
    for (m, n, p, levels) in oracle_configs() {
        let module = VermaModule::new(
            Dims::new(m, n).unwrap(),
            Q::from_integer(p.into()),
            FactorOrder::default(),
        )
        .unwrap();
        let blocks = gram_blocks(&module, levels, EXEC);
        let ch = char_vp(m, n, p, levels, EXEC);
        blocks_seen += blocks.len();
        for b in &blocks {
            rank_ok &= b.rank as i64 == ch.multiplicity(&b.content);
            psd_ok &= b.psd;
        }
        // Every weight carried by the character must show up as a block.
        rank_ok &= ch
            .series
            .coeffs()
            .keys()
            .all(|c| blocks.iter().any(|b| &b.content == c));
    }
    (
        outcome(
            rank_ok,
            format!("{blocks_seen} weight blocks compared with the character"),
        ),
        outcome(
            psd_ok,
            format!("{blocks_seen} blocks positive semidefinite"),
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (m, n) in all_dims() {
        let ch = char_vp(m, n, 1, 5, EXEC);
        let totals = ch.level_totals();
        let gz = level_dimensions(m, n, 1, 5, true, EXEC);
        for d in 0..=5i64 {
            let want: i64 = (0..=m as i64)
                .map(|f| binom(m as i64, f) * binom(d - f + n as i64 - 1, n as i64 - 1))
                .sum();
            ok &= totals[d as usize] == want && gz[d as usize] as i64 == want;
        }
        ok &= ch.series.coeffs().values().all(|&c| c <= 1);
        notes.push(format!("({m}|{n}) {totals:?}"));
    }
    // The Gram oracle agrees on the smallest mixed case.
    let module = VermaModule::new(
        Dims::new(1, 1).unwrap(),
        Q::from_integer(1.into()),
        FactorOrder::default(),
    )
    .unwrap();
    let mut by_level = [0usize; 6];
    for b in gram_blocks(&module, 5, EXEC) {
        ok &= b.rank <= 1;
        by_level[b.level()] += b.rank;
    }
    ok &= by_level == [1, 2, 2, 2, 2, 2];
    outcome(ok, notes.join(" "))
}

fn criterion_7() -> Outcome {
    let mut survivors = Vec::new();
    let mut stats = Vec::new();
    for v in ParsingVariant::all() {
        let mut failures = 0;
        let mut checked = 0;
        for m in 0..=2 {
            for n in 1..=2 {
                let rep = id2_sweep(m, n, &[1, 2, 3], 4, v, EXEC);
                failures += rep.failures.len();
                checked += rep.checked;
            }
        }
        if failures == 0 {
            survivors.push(v);
        }
        stats.push(format!("{v}:{failures}/{checked}"));
    }
    let vacuum_ok = all_dims().iter().all(|&(m, n)| {
        (1..=3).all(|p| {
            gk_squared(&TopRow::zero(m, n), 1, p, ParsingVariant::CANONICAL).ok()
                == Some(Q::from_integer((p as i64).into()))
        })
    });
    let unique = survivors == vec![ParsingVariant::CANONICAL];
    outcome(
        unique && vacuum_ok,
        format!(
            "survivors {:?}; failures per variant [{}]; G1²(0)=p: {vacuum_ok}",
            survivors.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            stats.join(" ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (m, n, p, levels) in oracle_configs() {
        for top in capped_tops(m, n, p, levels + 2) {
            let g = gk_squared(&top, 1, p, ParsingVariant::CANONICAL).unwrap();
            ok &= g.is_zero() == (top.get(1) == p as i64);
        }
        let rep = radical_cut_check(m, n, p, levels, EXEC).unwrap();
        ok &= rep.verdict() == "match" && rep.witness.is_some();
        notes.push(format!("({m}|{n}) p={p}: {}", rep.verdict()));
    }
    outcome(ok, notes.join(", "))
}

fn criterion_9() -> Outcome {
    let rep = diagonal_check(1, 1, 2, 3, EXEC).unwrap();
    let values: usize = rep.entries.iter().map(|e| e.observed.len()).sum();
    outcome(
        rep.ok(),
        format!("{} weights, {values} orthogonal vectors", rep.entries.len()),
    )
}

fn main() -> ExitCode {
    let budgets = [10, 5, 60, 120, 300, 60, 60, 60, 60];
    let mut results: Vec<(usize, Outcome, Duration, u64)> = Vec::new();

    let mut timed = |id: usize, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        results.push((id, o, t.elapsed(), budgets[id - 1]));
    };
    timed(1, &criterion_1);
    timed(2, &criterion_2);
    timed(3, &criterion_3);
    timed(4, &criterion_4);
    let t = Instant::now();
    let (c5, c10) = criterion_5_and_10();
    let el = t.elapsed();
    results.push((5, c5, el, 300));
    let mut timed = |id: usize, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        results.push((id, o, t.elapsed(), budgets[id - 1]));
    };
    timed(6, &criterion_6);
    timed(7, &criterion_7);
    timed(8, &criterion_8);
    timed(9, &criterion_9);
    results.push((10, c10, el, 300));

    let mut all_ok = true;
    for (id, o, el, budget) in &results {
        let in_time = el.as_secs_f64() <= *budget as f64;
        let pass = o.ok && in_time;
        all_ok &= pass;
        println!(
            "criterion {id:>2}: {} ({:.2}s, budget {budget}s) {}",
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            o.detail
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
