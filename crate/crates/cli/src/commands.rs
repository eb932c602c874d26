use std::path::PathBuf;

use clap::Args;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use paraosp::gz::{level_dimensions, pattern_weight, patterns_by_content, GzPattern};
use paraosp::osp::{
    matrix_records, structure_constants, verify_para_relations, verify_triple_relations,
};
use paraosp::redmat::{
    gk_table as gk_records, id2_sweep, select_parsing_variant, ParsingVariant, RedmatError,
    VariantStats,
};
use paraosp::symfunc::{char_verma, char_vp, verify_char_formula, CharMethod};
use paraosp::verma::{
    contravariance_defect, diagonal_check, gram_blocks, radical_cut_check, transition_check,
    FactorOrder, ModuleVector, VermaModule,
};
use paraosp::{Dims, Exec, Q};

use crate::output::Sink;
use crate::{CliError, Common, Verdict, DEGREE_CAP, LEVEL_CAP};

type Outcome = Result<Verdict, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn engine(e: impl std::fmt::Display) -> CliError {
    CliError::Engine(e.to_string())
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Mismatch
    }
}

fn match_str(ok: bool) -> &'static str {
    if ok {
        "match"
    } else {
        "mismatch"
    }
}

impl Common {
    fn dims(&self) -> Result<Dims, CliError> {
        Dims::new(self.m, self.n).ok_or_else(|| usage("m + n must be at least 1"))
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn sink(&self) -> Result<Sink, CliError> {
        Ok(Sink::open(self.format, self.out.as_deref())?)
    }

    fn need_bosons(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(usage("the recurrence needs n >= 1"));
        }
        Ok(())
    }
}

fn check_p(p: usize) -> Result<(), CliError> {
    if p == 0 {
        return Err(usage("p must be at least 1"));
    }
    Ok(())
}

fn check_ps(ps: &[usize]) -> Result<(), CliError> {
    if ps.is_empty() {
        return Err(usage("empty --p list"));
    }
    ps.iter().try_for_each(|&p| check_p(p))
}

fn check_levels(levels: usize) -> Result<(), CliError> {
    if levels > LEVEL_CAP {
        return Err(usage(format!(
            "--levels {levels} exceeds the cap {LEVEL_CAP}"
        )));
    }
    Ok(())
}

/// An exact integer as a JSON number when it fits, else as a string.
fn int_json<T: ToPrimitive + std::fmt::Display>(x: &T) -> Value {
    x.to_i64()
        .map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn describe_vector(module: &VermaModule, v: &ModuleVector) -> String {
    v.iter()
        .map(|(mono, c)| format!("({c})*{}", module.describe(mono)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn parse_variant(s: &str) -> Result<ParsingVariant, CliError> {
    s.parse().map_err(|e: RedmatError| usage(e.to_string()))
}

// ---------------------------------------------------------------- algebra

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    #[command(flatten)]
    common: Common,
}

pub fn verify_algebra(a: AlgebraArgs) -> Outcome {
    let dims = a.common.dims()?;
    let triple = verify_triple_relations(dims);
    let para = verify_para_relations(dims);
    let ok = triple.ok() && para.ok();
    let mut sink = a.common.sink()?;
    sink.emit(json!({
        "m": a.common.m,
        "n": a.common.n,
        "triple": triple,
        "para": para,
        "ok": ok,
    }))?;
    sink.finish()?;
    Ok(verdict(ok))
}

// ---------------------------------------------------------------- char

#[derive(Args, Debug)]
pub struct CharArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Truncation degree.
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Emit the Verma module character instead of the irreducible one.
    #[arg(long)]
    verma: bool,
}

pub fn char(a: CharArgs) -> Outcome {
    a.common.dims()?;
    check_p(a.p)?;
    if a.degree > DEGREE_CAP {
        return Err(usage(format!(
            "--degree {} exceeds the cap {DEGREE_CAP}",
            a.degree
        )));
    }
    let (m, n, exec) = (a.common.m, a.common.n, a.common.exec());
    let verma = char_verma(m, n, a.p, a.degree, CharMethod::Product, exec);
    let methods_agree = verma == char_verma(m, n, a.p, a.degree, CharMethod::SchurSum, exec);
    let irr = char_vp(m, n, a.p, a.degree, exec);
    let formula = verify_char_formula(m, n, a.p, a.degree, exec);

    let shown = if a.verma { &verma } else { &irr };
    let mut rows: Vec<(u32, &Vec<u32>, i64)> = shown
        .series
        .coeffs()
        .iter()
        .map(|(e, &c)| (e.iter().sum(), e, c))
        .collect();
    rows.sort();
    let mut sink = a.common.sink()?;
    for (level, e, mult) in rows {
        sink.emit(json!({
            "level": level,
            "weight_vector": shown.doubled_weight(e),
            "multiplicity": mult,
        }))?;
    }
    sink.finish()?;
    let ok = methods_agree && formula.ok() && irr.is_nonnegative();
    eprintln!(
        "{}",
        json!({
            "level_totals": irr.level_totals(),
            "verma_level_totals": verma.level_totals(),
            "verma_methods_agree": methods_agree,
            "formula": formula,
        })
    );
    Ok(verdict(ok))
}

// ---------------------------------------------------------------- id2

#[derive(Args, Debug)]
pub struct Id2Args {
    #[command(flatten)]
    common: Common,
    /// Comma-separated p samples.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    p: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// `auto`, or a fixed `reading:line4:policy` such as `mult:boson:cancel`.
    #[arg(long, default_value = "auto")]
    variant: String,
}

fn stats_json(s: &VariantStats) -> Value {
    json!({
        "variant": s.variant,
        "checked": s.checked,
        "failures": s.failures,
        "zero_denominators": s.zero_denominators,
    })
}

pub fn verify_id2(a: Id2Args) -> Outcome {
    a.common.dims()?;
    a.common.need_bosons()?;
    check_ps(&a.p)?;
    check_levels(a.levels)?;
    let (m, n, exec) = (a.common.m, a.common.n, a.common.exec());
    let mut sink = a.common.sink()?;
    let ok = if a.variant == "auto" {
        if a.p.len() < 2 {
            return Err(usage("--variant auto needs at least two p samples"));
        }
        let (stats, verdict, chosen) = match select_parsing_variant(m, n, &a.p, a.levels, exec) {
            Ok(sel) => (sel.stats, "unique", Some(sel.chosen)),
            Err(RedmatError::MultipleSurvivors(stats)) => (stats, "ambiguous", None),
            Err(RedmatError::NoSurvivor(stats)) => (stats, "none", None),
            Err(e) => return Err(engine(e)),
        };
        for s in &stats {
            sink.emit(stats_json(s))?;
        }
        sink.emit(json!({ "verdict": verdict, "chosen": chosen }))?;
        chosen.is_some()
    } else {
        let v = parse_variant(&a.variant)?;
        let rep = id2_sweep(m, n, &a.p, a.levels, v, exec);
        sink.emit(stats_json(&VariantStats {
            variant: v.to_string(),
            checked: rep.checked,
            failures: rep.failures.len(),
            zero_denominators: rep.zero_denominators,
        }))?;
        for f in &rep.failures {
            sink.emit(json!({ "p": f.p, "top_row": f.top, "row": f.row, "residual": f.detail }))?;
        }
        sink.emit(json!({ "verdict": if rep.ok() { "pass" } else { "fail" }, "chosen": rep.ok().then(|| v.to_string()) }))?;
        rep.ok()
    };
    sink.finish()?;
    Ok(verdict(ok))
}

// ---------------------------------------------------------------- gk table

#[derive(Args, Debug)]
pub struct GkArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    p: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// `auto` selects by the recurrence over the given p samples.
    #[arg(long, default_value = "mult:boson:cancel")]
    variant: String,
}

pub fn gk_table(a: GkArgs) -> Outcome {
    a.common.dims()?;
    check_ps(&a.p)?;
    check_levels(a.levels)?;
    let (m, n, exec) = (a.common.m, a.common.n, a.common.exec());
    let variant = if a.variant == "auto" {
        a.common.need_bosons()?;
        if a.p.len() < 2 {
            return Err(usage("--variant auto needs at least two p samples"));
        }
        match select_parsing_variant(m, n, &a.p, a.levels, exec) {
            Ok(sel) => sel.variant,
            Err(e) => {
                eprintln!("paraosp: {e}");
                return Ok(Verdict::Mismatch);
            }
        }
    } else {
        parse_variant(&a.variant)?
    };
    let mut sink = a.common.sink()?;
    for &p in &a.p {
        for rec in gk_records(m, n, p, a.levels, variant, exec).map_err(engine)? {
            let q = rec.value.radicand();
            sink.emit(json!({
                "top_row": rec.top.values(),
                "k": rec.k,
                "p": rec.p,
                "sign": rec.value.sign(),
                "radicand_num": int_json(q.numer()),
                "radicand_den": int_json(q.denom()),
            }))?;
        }
    }
    sink.finish()?;
    Ok(Verdict::Pass)
}

// ---------------------------------------------------------------- gram

#[derive(Args, Debug)]
pub struct GramArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Seed for the contravariance spot checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of contravariance spot checks.
    #[arg(long, default_value_t = 32)]
    samples: usize,
}

/// `⟨x u, v⟩ = ⟨u, ω(x) v⟩` on random basis elements and vectors.
fn spot_checks(module: &VermaModule, levels: usize, seed: u64, samples: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut actor = module.actor();
    let mut failures = 0;
    for _ in 0..samples {
        let x = rng.gen_range(0..module.algebra().len());
        let random_vector = |rng: &mut ChaCha8Rng| -> ModuleVector {
            let basis = module.pbw_basis(rng.gen_range(0..=levels));
            let mut v = ModuleVector::new();
            for _ in 0..rng.gen_range(1..=3) {
                let mono = basis[rng.gen_range(0..basis.len())].clone();
                let c: i64 = rng.gen_range(-3..=3);
                *v.entry(mono).or_insert_with(Q::zero) += Q::from_integer(c.into());
            }
            v.retain(|_, c| !c.is_zero());
            v
        };
        let u = random_vector(&mut rng);
        let v = random_vector(&mut rng);
        if !contravariance_defect(&mut actor, x, &u, &v).is_zero() {
            failures += 1;
        }
    }
    failures
}

pub fn gram(a: GramArgs) -> Outcome {
    let dims = a.common.dims()?;
    check_p(a.p)?;
    check_levels(a.levels)?;
    let (m, n, exec) = (a.common.m, a.common.n, a.common.exec());
    let module = VermaModule::new(
        dims,
        Q::from_integer((a.p as i64).into()),
        FactorOrder::default(),
    )
    .map_err(engine)?;
    let mut blocks = gram_blocks(&module, a.levels, exec);
    blocks.sort_by(|x, y| (x.level(), &x.content).cmp(&(y.level(), &y.content)));
    let ch = char_vp(m, n, a.p, a.levels, exec);

    let mut sink = a.common.sink()?;
    let mut ranks_ok = true;
    let mut psd_ok = true;
    for b in &blocks {
        let mult = ch.multiplicity(&b.content);
        ranks_ok &= b.rank as i64 == mult;
        psd_ok &= b.psd;
        sink.emit(json!({
            "level": b.level(),
            "content": b.content,
            "weight": b.weight,
            "block_size": b.size(),
            "rank": b.rank,
            "psd": b.psd,
            "character": mult,
            "radical": b.radical.iter().map(|v| describe_vector(&module, v)).collect::<Vec<_>>(),
        }))?;
    }
    let diagonal = if n >= 1 {
        match_str(
            diagonal_check(m, n, a.p, a.levels, exec)
                .map_err(engine)?
                .ok(),
        )
    } else {
        "skipped"
    };
    let cut = radical_cut_check(m, n, a.p, a.levels, exec).map_err(engine)?;
    eprintln!("paraosp: contravariance seed={}", a.seed);
    let contra_failures = spot_checks(&module, a.levels, a.seed, a.samples);
    sink.emit(json!({
        "verdict": {
            "rank_vs_character": match_str(ranks_ok),
            "psd": psd_ok,
            "diagonal": diagonal,
            "radical_cut": cut.verdict(),
            "cut_witness": cut.witness,
            "contravariance": { "seed": a.seed, "samples": a.samples, "failures": contra_failures },
        }
    }))?;
    sink.finish()?;
    Ok(verdict(
        ranks_ok
            && psd_ok
            && diagonal != "mismatch"
            && cut.verdict() == "match"
            && contra_failures == 0,
    ))
}

// ---------------------------------------------------------------- matelems

#[derive(Args, Debug)]
pub struct MatelemsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long, default_value = "mult:boson:cancel")]
    variant: String,
}

pub fn matelems(a: MatelemsArgs) -> Outcome {
    a.common.dims()?;
    a.common.need_bosons()?;
    check_p(a.p)?;
    check_levels(a.levels)?;
    let variant = parse_variant(&a.variant)?;
    let (m, n, exec) = (a.common.m, a.common.n, a.common.exec());
    let diag = diagonal_check(m, n, a.p, a.levels, exec).map_err(engine)?;
    let trans = transition_check(m, n, a.p, a.levels, variant, exec).map_err(engine)?;
    let mut sink = a.common.sink()?;
    for e in &diag.entries {
        sink.emit(json!({
            "kind": "norm",
            "content": e.content,
            "observed": e.observed,
            "expected": e.expected,
            "matches": e.matches,
        }))?;
    }
    for e in &trans.entries {
        sink.emit(json!({
            "kind": "transition",
            "content": e.content,
            "dim": e.dim,
            "raise_gram": e.raise_gram,
            "raise_closed": e.raise_closed,
            "lower_gram": e.lower_gram,
            "lower_closed": e.lower_closed,
            "matches": e.matches,
        }))?;
    }
    sink.finish()?;
    Ok(verdict(diag.ok() && trans.ok()))
}

// ---------------------------------------------------------------- dims

#[derive(Args, Debug)]
pub struct DimsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Drop the `λ_1 ≤ p` cap.
    #[arg(long)]
    uncapped: bool,
    /// Emit one count per level instead of the patterns.
    #[arg(long)]
    counts: bool,
    /// Validate patterns (one JSON array of rows per line) instead of enumerating.
    #[arg(long)]
    check: Option<PathBuf>,
}

pub fn dims(a: DimsArgs) -> Outcome {
    a.common.dims()?;
    check_p(a.p)?;
    let (m, n, exec) = (a.common.m, a.common.n, a.common.exec());
    let mut sink = a.common.sink()?;
    if let Some(path) = &a.check {
        let text = std::fs::read_to_string(path)?;
        let mut all_valid = true;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let record = match GzPattern::from_json(m, n, line) {
                Ok(pat) => {
                    let violations: Vec<String> =
                        pat.violations().iter().map(|c| c.to_string()).collect();
                    all_valid &= violations.is_empty();
                    json!({ "pattern": pat, "valid": violations.is_empty(), "violations": violations })
                }
                Err(e) => {
                    all_valid = false;
                    json!({ "pattern": line.trim(), "valid": false, "violations": [e.to_string()] })
                }
            };
            sink.emit(record)?;
        }
        sink.finish()?;
        return Ok(verdict(all_valid));
    }
    check_levels(a.levels)?;
    let cap = !a.uncapped;
    if a.counts {
        for (level, count) in level_dimensions(m, n, a.p, a.levels, cap, exec)
            .into_iter()
            .enumerate()
        {
            sink.emit(json!({ "level": level, "count": count }))?;
        }
    } else {
        for level in 0..=a.levels {
            for (content, pats) in patterns_by_content(m, n, a.p, level, cap, exec) {
                for pat in pats {
                    let weight = pattern_weight(&pat, a.p).map_err(engine)?;
                    sink.emit(json!({ "level": level, "content": content, "weight": weight, "pattern": pat }))?;
                }
            }
        }
    }
    sink.finish()?;
    Ok(Verdict::Pass)
}

// ---------------------------------------------------------------- dump

#[derive(Args, Debug)]
pub struct DumpArgs {
    #[command(flatten)]
    common: Common,
}

pub fn dump_matrices(a: DumpArgs) -> Outcome {
    let basis = structure_constants(a.common.dims()?).map_err(engine)?;
    let mut sink = a.common.sink()?;
    for (i, label) in basis.labels().iter().enumerate() {
        for rec in matrix_records(&label.to_string(), basis.matrix(i)).map_err(engine)? {
            sink.emit(serde_json::to_value(rec).expect("plain record"))?;
        }
    }
    sink.finish()?;
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_fall_back_to_strings() {
        let small = Q::from_integer(7.into());
        assert_eq!(int_json(small.numer()), json!(7));
        let big = Q::from_integer(num_traits::pow(Q::from_integer(10.into()), 30).to_integer());
        assert_eq!(
            int_json(big.numer()),
            json!("1000000000000000000000000000000")
        );
    }

    #[test]
    fn variant_parsing() {
        assert!(parse_variant("mult:boson:cancel").is_ok());
        assert!(matches!(parse_variant("bogus"), Err(CliError::Usage(_))));
    }
}
