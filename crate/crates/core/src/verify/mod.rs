//! End-to-end verification suites, one per acceptance criterion, plus the
//! seeded corpora they run on. Each suite reports pass/fail with a short
//! detail line and its wall-clock time against a limit.

mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::batch;
use crate::error::Result;
use crate::fields::{lift_degree_bound, Elem, FieldDescriptor};
use crate::glcase::ns_example_check;
use crate::poly::{parse_in_ring, Exponents, Poly, PolyRing};
use crate::strength::{
    astr, astr_generic, astr_quadratic_fast, extension_inequality_check, extension_lift_search, gap_bound,
    str_bounds, str_exact_finite_field, Form, SearchLimits,
};
use crate::torsor::{SymShiftModel, TorsorAlgebra};

pub use oracle::Gf2Space;

/// Seed of the GF(2) cubic corpus.
pub const CORPUS_SEED: u64 = 0x5eed_c0be;
pub const CORPUS_SIZE: usize = 200;
/// Enumeration budget for exact strength on the corpus.
pub const EXACT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionReport {
    pub fn within_time(&self) -> bool {
        self.elapsed <= self.limit
    }

    /// Correct and within the time limit.
    pub fn ok(&self) -> bool {
        self.passed && self.within_time()
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} ({:.2?} / limit {:?}) {}",
            self.id,
            self.title,
            if self.ok() { "PASS" } else { "FAIL" },
            self.elapsed,
            self.limit,
            self.detail
        )
    }
}

fn timed(id: u8, title: &'static str, limit_secs: u64, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id, title, passed, detail, elapsed: start.elapsed(), limit: Duration::from_secs(limit_secs) }
}

fn field(spec: &str) -> FieldDescriptor {
    FieldDescriptor::parse(spec).expect("built-in field spec")
}

const X2: [&str; 2] = ["x1", "x2"];

/// The fixed corpus of nonzero ternary cubics over GF(2), as bitmasks over
/// the monomials of [`Gf2Space::new(3, 3)`](Gf2Space).
pub fn gf2_cubic_corpus() -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE).map(|_| rng.gen_range(1..1u32 << 10)).collect()
}

pub fn gf2_form(space: &Gf2Space, mask: u32) -> Form {
    let vars: Vec<String> = (1..=space.n).map(|i| format!("x{i}")).collect();
    Form::parse(&field("GF(2)"), &vars, &space.render(mask)).expect("rendered form parses")
}

pub fn criterion_1() -> CriterionReport {
    timed(1, "x1^2+x2^2 over QQ", 5, || {
        let f = Form::parse(&field("QQ"), &X2, "x1^2+x2^2")?;
        let a = astr(&f)?.value;
        let b = str_bounds(&f, &SearchLimits::default())?;
        let lift = extension_lift_search(&f, 1, 2, &SearchLimits::default())?;
        let Some(l) = lift.lift() else { return Ok((false, "no lift within degree 2".into())) };
        let ring = l.form.ring();
        let mut got = vec![l.witness.terms[0].0.to_string(), l.witness.terms[0].1.to_string()];
        let mut want = vec![parse_in_ring("x1+i*x2", ring)?.to_string(), parse_in_ring("x1-i*x2", ring)?.to_string()];
        got.sort();
        want.sort();
        let ok = a == 1
            && b.value() == Some(2)
            && l.field == field("QQ[i]/(i^2+1)")
            && l.witness.len() == 1
            && got == want
            && l.witness.verify(&l.form);
        Ok((ok, format!("astr={a} str={:?} lift={} witness=({})({})", b.value(), l.field, got[0], got[1])))
    })
}

pub fn criterion_2() -> CriterionReport {
    timed(2, "t1*x1^2+t2*x2^2 over GF(2)(t1,t2)", 30, || {
        let f = Form::parse(&field("GF(2)(t1,t2)"), &X2, "t1*x1^2+t2*x2^2")?;
        let a = astr(&f)?.value;
        let b = str_bounds(&f, &SearchLimits::default())?;
        let lift = extension_lift_search(&f, 1, 2, &SearchLimits::default())?;
        let Some(l) = lift.lift() else { return Ok((false, "no lift within degree 2".into())) };
        let ok = a == 1 && b.value() == Some(2) && l.degree == 2 && l.witness.len() == 1 && l.witness.verify(&l.form);
        Ok((ok, format!("astr={a} str={:?} lift degree {} over {}", b.value(), l.degree, l.field)))
    })
}

/// Exact strength and astr of every corpus form.
struct CorpusRow {
    mask: u32,
    exact: Option<u32>,
    astr: u32,
}

fn corpus_rows(space: &Gf2Space, corpus: &[u32]) -> Result<Vec<CorpusRow>> {
    batch::map(corpus, |&mask| {
        let f = gf2_form(space, mask);
        let exact = str_exact_finite_field(&f, EXACT_BUDGET)?.value();
        Ok(CorpusRow { mask, exact, astr: astr(&f)?.value })
    })
    .into_iter()
    .collect()
}

pub fn criterion_3() -> CriterionReport {
    timed(3, "GF(2) cubic corpus: exact vs oracle, astr <= str, extension inequality", 600, || {
        let space = Gf2Space::new(3, 3);
        let table = space.strength_table();
        let corpus = gf2_cubic_corpus();
        let rows = corpus_rows(&space, &corpus)?;
        let mismatches = rows.iter().filter(|r| r.exact != Some(table[r.mask as usize])).count();
        let astr_bad = rows.iter().filter(|r| r.exact.is_none_or(|s| r.astr > s)).count();
        let exts = [field("GF(2)[a]/(a^2+a+1)"), field("GF(2)[a]/(a^3+a+1)")];
        let ineq: Vec<Result<bool>> = batch::map(&corpus, |&mask| {
            let f = gf2_form(&space, mask);
            for l in &exts {
                let rep = extension_inequality_check(&f, l, EXACT_BUDGET, &SearchLimits::default())?;
                if !(rep.holds && rep.over_k.is_exact() && rep.over_l.is_exact()) {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        let ineq_bad = ineq.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|&&b| !b).count();
        let mut hist = BTreeMap::new();
        for r in &rows {
            *hist.entry(r.exact.unwrap_or(0)).or_insert(0) += 1;
        }
        Ok((
            mismatches == 0 && astr_bad == 0 && ineq_bad == 0,
            format!("{} forms, oracle mismatches {mismatches}, astr>str {astr_bad}, inequality failures {ineq_bad}, str histogram {hist:?}", rows.len()),
        ))
    })
}

/// A small random polynomial: up to `max_terms` terms of total degree ≤ `deg`
/// with coefficients in −3..=3.
fn random_poly(rng: &mut ChaCha8Rng, ring: &std::sync::Arc<PolyRing>, deg: u32, max_terms: usize) -> Poly {
    let k = ring.field().clone();
    let nv = ring.nvars();
    let terms: Vec<(Exponents, Elem)> = (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let mut e = vec![0u32; nv];
            let mut left = rng.gen_range(0..=deg);
            while left > 0 {
                e[rng.gen_range(0..nv)] += 1;
                left -= 1;
            }
            (e, k.from_i64(rng.gen_range(-3..=3)))
        })
        .collect();
    Poly::from_terms(ring, terms)
}

/// Like [`random_poly`], with every fiber exponent multiplied by `q`.
fn random_twisted(rng: &mut ChaCha8Rng, t: &TorsorAlgebra, q: u32, deg: u32) -> Poly {
    let f = random_poly(rng, t.ring(), deg, 4);
    let fiber = t.fiber().to_vec();
    let terms: Vec<(Exponents, Elem)> = f
        .terms()
        .iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            for &i in &fiber {
                e[i] *= q;
            }
            (e, c.clone())
        })
        .collect();
    Poly::from_terms(t.ring(), terms)
}

/// f(x + y + y') computed directly, against both iterated coactions.
fn coassociative(t: &TorsorAlgebra, f: &Poly) -> Result<bool> {
    let sr = t.shadow_ring();
    let nf = t.fiber().len();
    let fiber_names: Vec<String> = t.fiber().iter().map(|&i| t.ring().vars()[i].clone()).collect();
    let left = TorsorAlgebra::from_ring(sr, &fiber_names)?;
    let right = TorsorAlgebra::from_ring(sr, t.shadow_names())?;
    let df = t.delta(f).assemble();
    let mut names: Vec<String> = sr.vars().to_vec();
    names.extend((1..=nf).map(|i| format!("w{i}")));
    let target = PolyRing::new(t.field(), &names)?;
    let v = |i: usize| Poly::var(&target, i);
    let nv = t.ring().nvars();
    let mut images: Vec<Poly> = (0..nv).map(v).collect();
    for (j, &i) in t.fiber().iter().enumerate() {
        images[i] = v(i).add(&v(nv + j)).add(&v(nv + nf + j));
    }
    let oracle = f.substitute(&target, &images);
    let into: Vec<Poly> = (0..names.len()).map(v).collect();
    let ll = left.delta(&df).assemble().substitute(&target, &into);
    let rr = right.delta(&df).assemble().substitute(&target, &into);
    Ok(ll == oracle && rr == oracle)
}

fn torsor_sample_check(t: &TorsorAlgebra, f: &Poly) -> Result<Option<String>> {
    let d = t.delta(f);
    if t.counit(&d.assemble()) != *f {
        return Ok(Some(format!("counit fails on {f}")));
    }
    if !coassociative(t, f)? {
        return Ok(Some(format!("coassociativity fails on {f}")));
    }
    if t.in_base(f) {
        return Ok(None);
    }
    let p = t.field().characteristic();
    if p == 0 {
        if d.component(1).is_zero() {
            return Ok(Some(format!("Δ1 vanishes on {f}")));
        }
        return Ok(None);
    }
    let desc = t.frobenius_descend(f)?;
    let q = desc.q;
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    let ok = r == 1
        && !d.component(q as u32).is_zero()
        && (1..q as u32).all(|i| d.component(i).is_zero())
        && t.reconstruct(&desc) == *f
        && t.twisted_delta_check(f, q)?;
    Ok((!ok).then(|| format!("descent fails on {f} (q = {q})")))
}

pub fn criterion_4() -> CriterionReport {
    timed(4, "torsor calculus suite", 120, || {
        let mut failures = Vec::new();
        let mut descended = BTreeMap::new();
        for (ci, spec) in ["QQ", "GF(2)", "GF(3)"].into_iter().enumerate() {
            let t = TorsorAlgebra::new(&field(spec), &["a", "b"], &["x1", "x2", "x3"])?;
            let p = t.field().characteristic() as u32;
            let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + ci as u64);
            let samples: Vec<Poly> = (0..100)
                .map(|i| {
                    if p > 0 && i % 2 == 1 {
                        random_twisted(&mut rng, &t, p, 4 / p)
                    } else {
                        random_poly(&mut rng, t.ring(), 4, 5)
                    }
                })
                .collect();
            let results = batch::map(&samples, |f| torsor_sample_check(&t, f));
            for r in results {
                if let Some(msg) = r? {
                    failures.push(format!("{spec}: {msg}"));
                }
            }
            if p > 0 {
                let qs: Vec<u64> = samples.iter().filter(|f| !t.in_base(f)).filter_map(|f| t.frobenius_descend(f).ok()).map(|d| d.q).collect();
                descended.insert(spec, qs.iter().filter(|&&q| q > 1).count());
            }
        }
        Ok((failures.is_empty(), format!("300 samples, failures {:?}, samples with q > 1 {descended:?}", failures.first())))
    })
}

pub fn criterion_5() -> CriterionReport {
    timed(5, "init multiplicativity", 60, || {
        let mut bad = 0;
        let mut pairs = 0;
        for (ci, spec) in ["QQ", "GF(2)", "GF(3)", "GF(5)"].into_iter().enumerate() {
            let t = TorsorAlgebra::new(&field(spec), &["a", "b"], &["x1", "x2", "x3"])?;
            let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 10 + ci as u64);
            while pairs < 25 * (ci + 1) {
                let f = random_poly(&mut rng, t.ring(), 3, 4);
                let g = random_poly(&mut rng, t.ring(), 3, 4);
                if f.is_zero() || g.is_zero() {
                    continue;
                }
                pairs += 1;
                let lhs = t.init(&f.mul(&g));
                let rhs = t.init(&f).zip(t.init(&g)).map(|(x, y)| x.mul(&y));
                if lhs.is_none() || lhs != rhs {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0 && pairs == 100, format!("{pairs} pairs over QQ, GF(2), GF(3), GF(5); failures {bad}")))
    })
}

pub fn criterion_6() -> CriterionReport {
    timed(6, "embedding witnesses in the shifted Sym^2 model", 120, || {
        let qq = field("QQ");
        let setups: [((usize, usize), &[&str]); 5] = [
            ((1, 1), &["zu1u1 - a", "zu1u1^2 - a*zu1u1"]),
            ((1, 2), &["zu1u1 - a"]),
            ((1, 3), &["zu1u1^2 - a*zu1u1"]),
            ((2, 2), &["zu1u1*zu2u2 - zu1u2^2"]),
            ((2, 3), &["zu1u1*zu2u2 - zu1u2^2"]),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 20);
        let mut triples = 0;
        let mut failures = Vec::new();
        for ((m, n), seeds) in setups {
            let model = SymShiftModel::new(&qq, &["a"], m, n, 2)?;
            let pure_u = model.pure_u();
            for seed_text in seeds {
                let seed = parse_in_ring(seed_text, model.ring())?;
                let j = model.orbit_ideal(std::slice::from_ref(&seed));
                for _ in 0..4 {
                    // f = h·seed with h in the parameters and pure-U coordinates
                    let mut h = Poly::constant(model.ring(), qq.from_i64(rng.gen_range(1..=3)));
                    h = h.add(&parse_in_ring("a", model.ring())?.scale(&qq.from_i64(rng.gen_range(-2..=2))));
                    for a in &pure_u {
                        h = h.add(&model.coordinate(a).scale(&qq.from_i64(rng.gen_range(-2..=2))));
                    }
                    let f = h.mul(&seed);
                    let r0: BTreeMap<Exponents, Elem> = pure_u.iter().map(|a| (a.clone(), qq.from_i64(rng.gen_range(-3..=3)))).collect();
                    let mut targets: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        targets.swap(i, rng.gen_range(0..=i));
                    }
                    let phi = &targets[..m];
                    let w = model.embed_witness(&f, &r0, phi, &j)?;
                    triples += 1;
                    if !w.report.passed() {
                        failures.push(format!("{f} φ={phi:?}: {:?}", w.report));
                    }
                }
            }
        }
        Ok((triples >= 20 && failures.is_empty(), format!("{triples} triples, failures {:?}", failures.first())))
    })
}

pub fn criterion_7() -> CriterionReport {
    timed(7, "F-elementary example at p = 2", 120, || {
        let reports: Vec<_> = (1..=3).map(ns_example_check).collect();
        let ok = reports.iter().all(|r| r.passed());
        let detail: Vec<String> = reports
            .iter()
            .map(|r| format!("n={}: injective={} F-surjective={}", r.n, r.injective, r.f_surjective))
            .collect();
        Ok((ok, detail.join("; ")))
    })
}

/// (d, q, c, e) with e = d·c^k for q = p^k, worked out by hand.
pub const LIFT_TABLE: [(u64, u64, u64, u64); 10] = [
    (1, 1, 2, 1),
    (2, 1, 4, 2),
    (1, 2, 2, 2),
    (3, 2, 2, 6),
    (2, 4, 2, 8),
    (1, 8, 2, 8),
    (5, 3, 3, 15),
    (2, 9, 3, 18),
    (1, 4, 4, 16),
    (3, 27, 2, 24),
];

pub fn criterion_8() -> CriterionReport {
    timed(8, "semi-perfect arithmetic", 1, || {
        let k = field("GF(2)(t1,t2)");
        let pd = k.p_degree();
        let basis = k.p_basis();
        let mut bad = Vec::new();
        for (d, q, c, e) in LIFT_TABLE {
            if lift_degree_bound(d, q, c)? != e {
                bad.push((d, q, c));
            }
        }
        let ok = (pd.characteristic, pd.c) == (2, 4) && basis.len() == 4 && bad.is_empty();
        let names: Vec<String> = basis.iter().map(|b| k.format_elem(b)).collect();
        Ok((ok, format!("p-degree ({}, {}) basis {names:?}; table mismatches {bad:?}", pd.characteristic, pd.c)))
    })
}

pub fn criterion_9() -> CriterionReport {
    timed(9, "quadratic fast path vs Nullstellensatz", 300, || {
        let mut cases: Vec<(u64, Vec<u64>)> = Vec::new();
        for p in [3u64, 5] {
            for n in 1..=4u32 {
                for code in 1..p.pow(n) {
                    let mut x = code;
                    let cs: Vec<u64> = (0..n).map(|_| {
                        let c = x % p;
                        x /= p;
                        c
                    }).collect();
                    cases.push((p, cs));
                }
            }
        }
        let results = batch::map(&cases, |(p, cs)| -> Result<bool> {
            let k = field(&format!("GF({p})"));
            let vars: Vec<String> = (1..=cs.len()).map(|i| format!("x{i}")).collect();
            let text: Vec<String> = cs.iter().enumerate().map(|(i, c)| format!("{c}*x{}^2", i + 1)).collect();
            let f = Form::parse(&k, &vars, &text.join("+"))?;
            let rank = cs.iter().filter(|&&c| c != 0).count() as u32;
            let want = rank.div_ceil(2);
            Ok(astr_quadratic_fast(&f) == Some(want) && astr_generic(&f)?.value == want)
        });
        let bad = results.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|&&b| !b).count();
        Ok((bad == 0, format!("{} diagonal quadratics over GF(3), GF(5); disagreements {bad}", cases.len())))
    })
}

pub fn criterion_10() -> CriterionReport {
    timed(10, "gap bound contrapositive on the GF(2) corpus", 600, || {
        let space = Gf2Space::new(3, 3);
        let corpus = gf2_cubic_corpus();
        let rows = corpus_rows(&space, &corpus)?;
        let lifts: Vec<Result<Vec<u64>>> = batch::map(&rows, |r| {
            let f = gf2_form(&space, r.mask);
            let mut degrees = Vec::new();
            for s in [1u32, 2] {
                if r.astr <= s {
                    if let Some(l) = extension_lift_search(&f, s, 3, &SearchLimits::default())?.lift() {
                        degrees.push(l.degree);
                    }
                }
            }
            Ok(degrees)
        });
        let lifts = lifts.into_iter().collect::<Result<Vec<_>>>()?;
        let e = lifts.iter().flatten().copied().max().unwrap_or(1);
        let mut violations = 0;
        let mut unknown = 0;
        for r in &rows {
            let Some(st) = r.exact else {
                unknown += 1;
                continue;
            };
            for s in [1u64, 2] {
                if u64::from(st) > gap_bound(e, s) && u64::from(r.astr) <= s {
                    violations += 1;
                }
            }
        }
        Ok((violations == 0 && unknown == 0, format!("e = {e}, violations {violations}, undetermined strengths {unknown}")))
    })
}

/// Runs every suite in order.
pub fn run_all() -> Vec<CriterionReport> {
    run_all_matching(|_| true)
}

/// Runs the criteria whose id satisfies `keep`, in order.
pub fn run_all_matching(keep: impl Fn(u8) -> bool) -> Vec<CriterionReport> {
    let suites: [fn() -> CriterionReport; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    suites
        .iter()
        .zip(1u8..)
        .filter(|(_, id)| keep(*id))
        .map(|(s, _)| s())
        .collect()
}
