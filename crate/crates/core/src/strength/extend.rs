//! Strength over finite extensions: lifting searches and the extension
//! inequality str_K(f) ≤ [L:K] · str_L(f).

use super::astr::{astr, pivot_choices};
use super::bounds::{heuristic_upper, rational_search, str_bounds, Search, SearchLimits};
use super::exact::str_exact_finite_field;
use super::systems::{subspace_system, theta_system_normalized};
use super::{combinations, DegreePattern, Decomposition, Form, StrengthCertificate};
use crate::error::{Error, Result};
use crate::fields::{Elem, FieldDescriptor};
use crate::groebner::buchberger_limited;
use crate::poly::MonomialOrder;

/// An extension M/K with a decomposition of f over M.
#[derive(Clone, Debug)]
pub struct Lift {
    pub field: FieldDescriptor,
    pub degree: u64,
    pub witness: Decomposition,
    /// f over M, the ring the witness lives in.
    pub form: Form,
}

/// Outcome of a lifting search.
#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Found(Lift),
    /// No candidate within the degree budget worked; this is inconclusive.
    Exhausted { tried: Vec<String> },
}

impl LiftOutcome {
    pub fn lift(&self) -> Option<&Lift> {
        match self {
            LiftOutcome::Found(l) => Some(l),
            LiftOutcome::Exhausted { .. } => None,
        }
    }
}

/// `extension_lift_search`: the first candidate M (K itself, then
/// eliminant-derived layers, then generic candidates) over which f has a
/// decomposition of length ≤ s, with [M:K] ≤ `degree_budget`.
pub fn extension_lift_search(f: &Form, s: u32, degree_budget: u64, limits: &SearchLimits) -> Result<LiftOutcome> {
    let a = astr(f)?;
    if a.value > s {
        return Err(Error::Precondition(format!("astr(f) = {} exceeds s = {s}", a.value)));
    }
    let k = f.field().clone();
    let mut tried = Vec::new();
    let mut seen: Vec<Vec<Elem>> = Vec::new();
    if let Some(w) = witness_within(f, s, limits) {
        return Ok(LiftOutcome::Found(Lift { field: k, degree: 1, witness: w, form: f.clone() }));
    }
    tried.push(k.to_string());
    let mut candidates: Vec<FieldDescriptor> = Vec::new();
    let mut push_modulus = |m: Vec<Elem>, candidates: &mut Vec<FieldDescriptor>| {
        let deg = m.len() as u64 - 1;
        if deg < 2 || deg > degree_budget || seen.contains(&m) {
            return;
        }
        seen.push(m.clone());
        if k.is_irreducible(&m) != Some(true) {
            return;
        }
        let name = fresh_name(f, &k, &m);
        if let Ok(field) = k.adjoin_algebraic(&name, &m) {
            candidates.push(field);
        }
    };
    for m in eliminants(f, s as usize, limits) {
        push_modulus(m, &mut candidates);
    }
    if k.is_finite() {
        for deg in 2..=degree_budget.min(8) {
            if let Some(m) = first_irreducible(&k, deg as usize) {
                push_modulus(m, &mut candidates);
            }
        }
    } else if k.characteristic() == 0 {
        for a in rational_candidates(f) {
            // x^2 − a
            push_modulus(vec![k.neg(&a), k.zero(), k.one()], &mut candidates);
        }
        for m in cyclotomics(&k) {
            push_modulus(m, &mut candidates);
        }
    }
    let p = k.characteristic();
    if p > 0 && !k.is_finite() {
        if let Ok(root) = k.adjoin_root_layer(p) {
            if root.degree_over(&k).is_some_and(|e| e <= degree_budget) {
                candidates.push(root);
            }
        }
    }
    for m in candidates {
        let degree = m.degree_over(&k).expect("finite extension");
        let fm = f.extend_to(&m)?;
        if let Some(w) = witness_within(&fm, s, limits) {
            return Ok(LiftOutcome::Found(Lift { field: m, degree, witness: w, form: fm }));
        }
        tried.push(m.to_string());
    }
    Ok(LiftOutcome::Exhausted { tried })
}

/// A decomposition of length ≤ s over the field of f, if one is found.
fn witness_within(f: &Form, s: u32, limits: &SearchLimits) -> Option<Decomposition> {
    let h = heuristic_upper(f);
    if h.len() as u32 <= s {
        return Some(h);
    }
    for t in 1..=s as usize {
        if let Search::Found(w) = rational_search(f, t, limits) {
            return Some(w);
        }
    }
    None
}

/// Univariate members of lex bases of the pattern systems at s.
fn eliminants(f: &Form, s: usize, limits: &SearchLimits) -> Vec<Vec<Elem>> {
    let mut systems = Vec::new();
    for pattern in DegreePattern::all(f.degree(), s, f.n()) {
        if pattern.is_linear() {
            for piv in combinations(f.n(), s) {
                if let Ok(sys) = subspace_system(f, &piv) {
                    systems.push((sys.ring, sys.equations));
                }
            }
        } else {
            for piv in pivot_choices(f.n(), &pattern) {
                if let Ok(sys) = theta_system_normalized(f, &pattern, &piv) {
                    systems.push((sys.ring, sys.equations));
                }
            }
        }
    }
    let k = f.field();
    let mut out = Vec::new();
    for (ring, eqs) in systems {
        let Some(gb) = buchberger_limited(&ring, &eqs, MonomialOrder::Lex, limits.solve.max_pairs) else { continue };
        if gb.is_unit() {
            continue;
        }
        for g in gb.generators() {
            let vars = g.support_vars();
            if vars.len() != 1 {
                continue;
            }
            let v = vars[0];
            let mut c = vec![k.zero(); g.degree_in(v) as usize + 1];
            for (e, x) in g.terms() {
                c[e[v] as usize] = x.clone();
            }
            out.push(c);
        }
    }
    out
}

fn fresh_name(f: &Form, k: &FieldDescriptor, m: &[Elem]) -> String {
    let is_i = m.len() == 3 && k.is_one(&m[0]) && k.is_zero(&m[1]) && k.is_one(&m[2]) && k.characteristic() != 2;
    let base = if is_i { "i" } else { "r" };
    let taken = |s: &str| k.generator_names().contains(&s) || f.ring().vars().iter().any(|v| v == s);
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|j| format!("{base}{j}")).find(|s| !taken(s)).unwrap()
}

/// First monic irreducible of the given degree, in enumeration order.
fn first_irreducible(k: &FieldDescriptor, deg: usize) -> Option<Vec<Elem>> {
    let elems = k.elements()?;
    let q = elems.len();
    let total = q.checked_pow(deg as u32)?;
    for idx in 0..total.min(1 << 16) {
        let mut m = Vec::with_capacity(deg + 1);
        let mut x = idx;
        for _ in 0..deg {
            m.push(elems[x % q].clone());
            x /= q;
        }
        m.push(k.one());
        if k.is_irreducible(&m) == Some(true) {
            return Some(m);
        }
    }
    None
}

/// Values a for x² − a over QQ: small integers and ±(products of
/// coefficients), which cover the discriminants of diagonal quadratics.
fn rational_candidates(f: &Form) -> Vec<Elem> {
    let k = f.field();
    let mut out: Vec<Elem> = Vec::new();
    let mut push = |x: Elem| {
        if !k.is_zero(&x) && !out.contains(&x) {
            out.push(x);
        }
    };
    let coeffs: Vec<Elem> = f.poly().terms().iter().map(|(_, c)| c.clone()).collect();
    for (i, a) in coeffs.iter().enumerate() {
        for b in &coeffs[i..] {
            let ab = k.mul(a, b);
            push(k.neg(&ab));
            push(ab);
        }
    }
    for n in [-1i64, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7] {
        push(k.from_i64(n));
    }
    out
}

/// Cyclotomic polynomials Φ_3, Φ_4, Φ_5, Φ_8, Φ_12 (low to high).
fn cyclotomics(k: &FieldDescriptor) -> Vec<Vec<Elem>> {
    let c = |v: &[i64]| v.iter().map(|&x| k.from_i64(x)).collect::<Vec<_>>();
    vec![c(&[1, 1, 1]), c(&[1, 0, 1]), c(&[1, 1, 1, 1, 1]), c(&[1, 0, 0, 0, 1]), c(&[1, 0, -1, 0, 1])]
}

/// Both sides of str_K(f) ≤ e · str_L(f).
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub e: u64,
    pub over_k: StrengthCertificate,
    pub over_l: StrengthCertificate,
    /// lower_K ≤ e · upper_L.
    pub holds: bool,
}

/// `extension_inequality_check`; finite fields use exact enumeration
/// within `budget`, other fields certified bounds.
pub fn extension_inequality_check(f: &Form, l: &FieldDescriptor, budget: u64, limits: &SearchLimits) -> Result<InequalityReport> {
    let e = l
        .degree_over(f.field())
        .ok_or_else(|| Error::Precondition(format!("{l} is not a finite extension of {}", f.field())))?;
    let strength = |g: &Form| {
        if g.field().is_finite() {
            str_exact_finite_field(g, budget)
        } else {
            str_bounds(g, limits)
        }
    };
    let over_k = strength(f)?;
    let over_l = strength(&f.extend_to(l)?)?;
    let holds = u64::from(over_k.lower) <= e * u64::from(over_l.upper);
    Ok(InequalityReport { e, over_k, over_l, holds })
}

/// `gap_bound`: s' = e · s.
pub fn gap_bound(e: u64, s: u64) -> u64 {
    e * s
}
