//! Absolute strength through the Nullstellensatz.

use super::systems::{subspace_system, theta_system_normalized};
use super::{combinations, dim_sym, DegreePattern, Form};
use crate::error::{Error, Result};
use crate::groebner::solvable_over_closure_limited;
use crate::poly::monomials_of_degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AstrRoute {
    /// f = 0.
    Zero,
    /// ⌈rank/2⌉ for quadratic forms in characteristic ≠ 2.
    QuadraticFastPath,
    Nullstellensatz,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Astr {
    pub value: u32,
    /// A pattern realizing the value over the closure.
    pub pattern: Option<DegreePattern>,
    pub route: AstrRoute,
}

/// S-pair budget per Gröbner computation in the closure test.
const MAX_PAIRS: usize = 20_000;

/// `astr`, with the quadratic fast path when it applies.
pub fn astr(f: &Form) -> Result<Astr> {
    if f.is_zero() {
        return Ok(Astr { value: 0, pattern: None, route: AstrRoute::Zero });
    }
    if let Some(v) = astr_quadratic_fast(f) {
        let pattern = Some(DegreePattern::linear(2, v as usize));
        return Ok(Astr { value: v, pattern, route: AstrRoute::QuadraticFastPath });
    }
    astr_generic(f)
}

/// Rank of a quadratic form in characteristic ≠ 2 (rank of its polar
/// bilinear form).
pub fn quadratic_rank(f: &Form) -> Option<usize> {
    let k = f.field();
    if f.degree() != 2 || k.characteristic() == 2 {
        return None;
    }
    let n = f.n();
    let mut m = vec![vec![k.zero(); n]; n];
    for (e, c) in f.poly().terms() {
        let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match idx.as_slice() {
            [i] => m[*i][*i] = k.add(c, c),
            [i, j] => {
                m[*i][*j] = c.clone();
                m[*j][*i] = c.clone();
            }
            _ => unreachable!("quadratic monomial"),
        }
    }
    Some(k.rank(&m))
}

pub fn astr_quadratic_fast(f: &Form) -> Option<u32> {
    quadratic_rank(f).map(|r| r.div_ceil(2) as u32)
}

/// Minimal s such that some θ_s system is solvable over the algebraic
/// closure, ignoring the quadratic fast path.
pub fn astr_generic(f: &Form) -> Result<Astr> {
    if f.is_zero() {
        return Ok(Astr { value: 0, pattern: None, route: AstrRoute::Zero });
    }
    let n = f.n();
    for s in 1..=n {
        for pattern in DegreePattern::all(f.degree(), s, n) {
            if closure_solvable(f, &pattern)? {
                return Ok(Astr { value: s as u32, pattern: Some(pattern), route: AstrRoute::Nullstellensatz });
            }
        }
    }
    unreachable!("every form lies in the ideal of all variables")
}

/// Whether f has a decomposition with this pattern over the closure.
pub(crate) fn closure_solvable(f: &Form, pattern: &DegreePattern) -> Result<bool> {
    let budget = |r: Option<bool>| r.ok_or_else(|| Error::Budget(format!("closure test for pattern {pattern}")));
    if pattern.is_linear() {
        for piv in combinations(f.n(), pattern.len()) {
            let sys = subspace_system(f, &piv)?;
            if budget(solvable_over_closure_limited(&sys.ring, &sys.equations, MAX_PAIRS))? {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    for piv in pivot_choices(f.n(), pattern) {
        let sys = theta_system_normalized(f, pattern, &piv)?;
        if budget(solvable_over_closure_limited(&sys.ring, &sys.equations, MAX_PAIRS))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Echelon pivot sets for each block of equal small degrees.
pub(crate) fn pivot_choices(n: usize, pattern: &DegreePattern) -> Vec<Vec<Vec<usize>>> {
    let mut blocks: Vec<(u32, usize)> = Vec::new();
    for &e in pattern.small_degrees() {
        match blocks.last_mut() {
            Some((b, k)) if *b == e => *k += 1,
            _ => blocks.push((e, 1)),
        }
    }
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for (e, k) in blocks {
        let dim = dim_sym(n, e) as usize;
        debug_assert_eq!(dim, monomials_of_degree(n, e).len());
        let choices = combinations(dim, k);
        out = out.into_iter().flat_map(|prefix| choices.iter().map(move |c| [prefix.clone(), vec![c.clone()]].concat())).collect();
    }
    out
}
