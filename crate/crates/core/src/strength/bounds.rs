//! Certified bounds on strength over arbitrary fields.

use super::astr::{astr, pivot_choices, AstrRoute};
use super::systems::{cofactors, subspace_system, theta_system_normalized};
use super::{combinations, DegreePattern, Decomposition, Form, LowerReason, Status, StrengthCertificate};
use crate::error::{Error, Result};
use crate::groebner::{solve_rational, RationalSolve, SolveLimits};
use crate::poly::{Exponents, Poly};

#[derive(Clone, Debug, Default)]
pub struct SearchLimits {
    pub solve: SolveLimits,
    /// Largest s tried by the K-rational search; `None` means no cap.
    pub max_s: Option<u32>,
}

/// Outcome of a K-rational search at a fixed s.
#[derive(Clone, Debug)]
pub enum Search {
    Found(Decomposition),
    /// Every pattern system has no K-point.
    Infeasible,
    Undecided,
}

/// Decompositions of length s over the field of f, through K-rational points
/// of the pattern systems.
pub fn rational_search(f: &Form, s: usize, limits: &SearchLimits) -> Search {
    if s == 0 {
        return if f.is_zero() { Search::Found(Decomposition::empty()) } else { Search::Infeasible };
    }
    let mut undecided = false;
    for pattern in DegreePattern::all(f.degree(), s, f.n()) {
        if pattern.is_linear() {
            for piv in combinations(f.n(), s) {
                let Ok(sys) = subspace_system(f, &piv) else {
                    undecided = true;
                    continue;
                };
                match solve_rational(&sys.ring, &sys.equations, &limits.solve) {
                    RationalSolve::Solution(pt) => {
                        let gs = sys.linear_forms(f.ring(), &pt);
                        let w = cofactors(f, &gs).expect("f vanishes on the subspace");
                        return Search::Found(w);
                    }
                    RationalSolve::NoSolution => {}
                    RationalSolve::Undecided => undecided = true,
                }
            }
        } else {
            for piv in pivot_choices(f.n(), &pattern) {
                let Ok(sys) = theta_system_normalized(f, &pattern, &piv) else {
                    undecided = true;
                    continue;
                };
                match solve_rational(&sys.ring, &sys.equations, &limits.solve) {
                    RationalSolve::Solution(pt) => return Search::Found(sys.decomposition(f, &pt)),
                    RationalSolve::NoSolution => {}
                    RationalSolve::Undecided => undecided = true,
                }
            }
        }
    }
    if undecided {
        Search::Undecided
    } else {
        Search::Infeasible
    }
}

/// `str_bounds`: lower bound from astr, the quadratic rank and refuted
/// pattern systems; upper bound from heuristics and K-rational solutions.
pub fn str_bounds(f: &Form, limits: &SearchLimits) -> Result<StrengthCertificate> {
    let mut cert = StrengthCertificate {
        status: Status::Exact,
        lower: 0,
        lower_reason: LowerReason::AstrBound,
        upper: 0,
        witness: Decomposition::empty(),
        field: f.field().clone(),
        extension: None,
    };
    if f.is_zero() {
        return Ok(cert);
    }
    cert.witness = heuristic_upper(f);
    cert.upper = cert.witness.len() as u32;
    match astr(f) {
        Ok(a) => {
            cert.lower = a.value;
            if a.route == AstrRoute::QuadraticFastPath {
                cert.lower_reason = LowerReason::RankBound;
            }
        }
        Err(Error::Budget(_)) => cert.lower = 1,
        Err(e) => return Err(e),
    }
    let stop = limits.max_s.map_or(cert.upper, |m| cert.upper.min(m + 1));
    for s in cert.lower..stop {
        match rational_search(f, s as usize, limits) {
            Search::Found(w) => {
                cert.upper = w.len() as u32;
                cert.witness = w;
                break;
            }
            Search::Infeasible => {
                cert.lower = s + 1;
                cert.lower_reason = if s == 1 { LowerReason::IrreducibilityBound } else { LowerReason::Exhaustion };
            }
            Search::Undecided => break,
        }
    }
    Ok(cert.finish())
}

/// The better of monomial splitting and Frobenius collapse.
pub(crate) fn heuristic_upper(f: &Form) -> Decomposition {
    let split = monomial_split(f);
    match frobenius_collapse(f) {
        Some(w) if w.len() < split.len() => w,
        _ => split,
    }
}

/// Greedily factors out the variable dividing the most remaining terms.
fn monomial_split(f: &Form) -> Decomposition {
    let ring = f.ring();
    let mut rest: Vec<(Exponents, crate::fields::Elem)> = f.poly().terms().to_vec();
    let mut terms = Vec::new();
    while !rest.is_empty() {
        let n = f.n();
        let best = (0..n).max_by_key(|&i| (rest.iter().filter(|(e, _)| e[i] > 0).count(), std::cmp::Reverse(i))).unwrap();
        let (take, keep): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(e, _)| e[best] > 0);
        rest = keep;
        let h = Poly::from_terms(
            ring,
            take.into_iter().map(|(mut e, c)| {
                e[best] -= 1;
                (e, c)
            }),
        );
        terms.push((Poly::var(ring, best), h));
    }
    Decomposition { terms }
}

/// f = g^p when every exponent is divisible by p and every coefficient is a
/// p-th power; then f = g · g^(p−1).
fn frobenius_collapse(f: &Form) -> Option<Decomposition> {
    let k = f.field();
    let p = k.characteristic();
    if p == 0 || !(f.degree() as u64).is_multiple_of(p) {
        return None;
    }
    let p32 = p as u32;
    let mut terms = Vec::new();
    for (e, c) in f.poly().terms() {
        if e.iter().any(|&x| x % p32 != 0) {
            return None;
        }
        let r = k.is_qth_power(c, p).ok()??;
        terms.push((e.iter().map(|&x| x / p32).collect::<Exponents>(), r));
    }
    let g = Poly::from_terms(f.ring(), terms);
    let h = g.pow(p32 - 1);
    Some(Decomposition { terms: vec![(g, h)] })
}
