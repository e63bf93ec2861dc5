//! Exact strength over finite fields by enumeration.
//!
//! Only the span of the equal-degree g's matters, so each block is
//! enumerated as a subspace in reduced echelon form and the h's are found by
//! linear algebra.

use num_traits::ToPrimitive;

use super::bounds::heuristic_upper;
use super::systems::cofactors;
use super::{combinations, dim_sym, DegreePattern, Decomposition, Form, LowerReason, Status, StrengthCertificate};
use crate::error::{Error, Result};
use crate::fields::Elem;
use crate::poly::{monomials_of_degree, Poly};

/// Number of k-dimensional subspaces of F_q^dim (Gaussian binomial).
pub fn subspace_count(q: u64, dim: usize, k: usize) -> f64 {
    if k > dim {
        return 0.0;
    }
    let q = q as f64;
    let mut r = 1.0;
    for i in 0..k {
        r *= (q.powi((dim - i) as i32) - 1.0) / (q.powi((i + 1) as i32) - 1.0);
    }
    r.round()
}

fn blocks(pattern: &DegreePattern) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &e in pattern.small_degrees() {
        match out.last_mut() {
            Some((b, k)) if *b == e => *k += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

fn pattern_cost(q: u64, n: usize, pattern: &DegreePattern) -> f64 {
    blocks(pattern).iter().map(|&(e, k)| subspace_count(q, dim_sym(n, e) as usize, k)).product()
}

/// `str_exact_finite_field`: `budget` caps the number of g-tuples tried.
pub fn str_exact_finite_field(f: &Form, budget: u64) -> Result<StrengthCertificate> {
    str_exact_finite_field_capped(f, budget, None)
}

/// As [`str_exact_finite_field`], enumerating no s beyond `max_s`.
pub fn str_exact_finite_field_capped(f: &Form, budget: u64, max_s: Option<u32>) -> Result<StrengthCertificate> {
    let k = f.field().clone();
    let size = k.size().ok_or_else(|| Error::Precondition(format!("{k} is not a finite field")))?;
    let q = size.to_u64().filter(|&q| q < 1 << 20).ok_or_else(|| Error::Budget("field too large to enumerate".into()))?;
    let elems = k.elements().expect("finite field");
    let mut cert = StrengthCertificate {
        status: Status::Exact,
        lower: 0,
        lower_reason: LowerReason::Exhaustion,
        upper: 0,
        witness: Decomposition::empty(),
        field: k.clone(),
        extension: None,
    };
    if f.is_zero() {
        return Ok(cert);
    }
    let heur = heuristic_upper(f);
    cert.upper = heur.len() as u32;
    cert.witness = heur;
    cert.lower = 1;
    let n = f.n();
    let mut spent = 0f64;
    let stop = max_s.map_or(cert.upper, |m| cert.upper.min(m + 1));
    for s in 1..stop as usize {
        let patterns = DegreePattern::all(f.degree(), s, n);
        let cost: f64 = patterns.iter().map(|p| pattern_cost(q, n, p)).sum();
        if spent + cost > budget as f64 {
            return Ok(cert.finish());
        }
        spent += cost;
        for p in &patterns {
            if let Some(w) = search_pattern(f, p, &elems) {
                cert.upper = w.len() as u32;
                cert.witness = w;
                cert.lower = cert.upper;
                return Ok(cert.finish());
            }
        }
        cert.lower = s as u32 + 1;
    }
    Ok(cert.finish())
}

/// First decomposition with this pattern, in enumeration order.
pub(crate) fn search_pattern(f: &Form, pattern: &DegreePattern, elems: &[Elem]) -> Option<Decomposition> {
    let bl = blocks(pattern);
    let mut chosen: Vec<Poly> = Vec::new();
    rec(f, &bl, 0, elems, &mut chosen)
}

fn rec(f: &Form, bl: &[(u32, usize)], b: usize, elems: &[Elem], chosen: &mut Vec<Poly>) -> Option<Decomposition> {
    if b == bl.len() {
        return cofactors(f, chosen);
    }
    let (e, k) = bl[b];
    let monos = monomials_of_degree(f.n(), e);
    let dim = monos.len();
    let kf = f.field();
    for piv in combinations(dim, k) {
        let free: Vec<Vec<usize>> =
            piv.iter().map(|&p| (p + 1..dim).filter(|c| !piv.contains(c)).collect()).collect();
        let nfree: usize = free.iter().map(|v| v.len()).sum();
        let mut digits = vec![0usize; nfree];
        loop {
            let mut it = digits.iter();
            let before = chosen.len();
            for (j, &p) in piv.iter().enumerate() {
                let mut terms = vec![(monos[p].clone(), kf.one())];
                for &c in &free[j] {
                    terms.push((monos[c].clone(), elems[*it.next().unwrap()].clone()));
                }
                chosen.push(Poly::from_terms(f.ring(), terms));
            }
            if let Some(w) = rec(f, bl, b + 1, elems, chosen) {
                return Some(w);
            }
            chosen.truncate(before);
            // odometer
            let mut i = 0;
            while i < nfree {
                digits[i] += 1;
                if digits[i] < elems.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == nfree {
                break;
            }
        }
    }
    None
}
