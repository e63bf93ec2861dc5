//! Strength and absolute strength of homogeneous forms.
//!
//! A decomposition f = Σ g_i h_i with deg g_i + deg h_i = deg f is searched
//! pattern by pattern. Patterns whose small factors are all linear are
//! handled as "f vanishes on a linear subspace", parametrized in reduced
//! row echelon form; other patterns use the full coefficient system.

mod astr;
mod bounds;
mod exact;
mod extend;
mod systems;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::FieldDescriptor;
use crate::poly::{parse_poly, Poly, PolyRing};

pub use astr::{astr, astr_generic, astr_quadratic_fast, quadratic_rank, Astr, AstrRoute};
pub use bounds::{rational_search, str_bounds, Search, SearchLimits};
pub use exact::{str_exact_finite_field, str_exact_finite_field_capped, subspace_count};
pub use extend::{
    extension_inequality_check, extension_lift_search, gap_bound, InequalityReport, Lift, LiftOutcome,
};
pub use systems::{subspace_system, theta_system, SubspaceSystem, ThetaSystem};

/// A homogeneous form of degree d ≥ 2 (or zero, with a declared degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    poly: Poly,
    d: u32,
}

impl Form {
    pub fn new(poly: Poly) -> Result<Form> {
        let d = poly.total_degree().ok_or_else(|| Error::Invalid("the zero form has no degree; use Form::zero".into()))?;
        Form::with_degree(poly, d)
    }

    pub fn zero(ring: &Arc<PolyRing>, d: u32) -> Result<Form> {
        Form::with_degree(Poly::zero(ring), d)
    }

    pub fn with_degree(poly: Poly, d: u32) -> Result<Form> {
        if d < 2 {
            return Err(Error::Invalid(format!("forms must have degree at least 2, got {d}")));
        }
        if !poly.terms().iter().all(|(e, _)| e.iter().sum::<u32>() == d) {
            return Err(Error::Invalid(format!("not a homogeneous form of degree {d}")));
        }
        Ok(Form { poly, d })
    }

    pub fn parse(field: &FieldDescriptor, vars: &[impl AsRef<str>], text: &str) -> Result<Form> {
        Form::new(parse_poly(text, vars, field)?)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.poly.ring()
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.poly.field()
    }

    pub fn n(&self) -> usize {
        self.ring().nvars()
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The same form over an extension field.
    pub fn extend_to(&self, field: &FieldDescriptor) -> Result<Form> {
        let ring = PolyRing::new(field, self.ring().vars())?;
        Ok(Form { poly: self.poly.extend_field(&ring)?, d: self.d })
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Multiset of degree pairs {e, d−e}, stored canonically as sorted small
/// degrees e ≤ d − e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreePattern {
    d: u32,
    small: Vec<u32>,
}

impl DegreePattern {
    /// `es` may list either member of each pair.
    pub fn new(d: u32, es: &[u32]) -> Result<DegreePattern> {
        let mut small = Vec::with_capacity(es.len());
        for &e in es {
            if e == 0 || e >= d {
                return Err(Error::Invalid(format!("pair degree {e} must lie in 1..{d}")));
            }
            small.push(e.min(d - e));
        }
        small.sort_unstable();
        Ok(DegreePattern { d, small })
    }

    /// All linear factors: {1, d−1}^s.
    pub fn linear(d: u32, s: usize) -> DegreePattern {
        DegreePattern { d, small: vec![1; s] }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.small.len()
    }

    pub fn is_empty(&self) -> bool {
        self.small.is_empty()
    }

    /// Small degrees e_i ≤ d − e_i, sorted.
    pub fn small_degrees(&self) -> &[u32] {
        &self.small
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.small.iter().map(|&e| (e, self.d - e)).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.small.iter().all(|&e| e == 1)
    }

    /// Number of coefficient unknowns of the θ_s system in n variables.
    pub fn unknowns(&self, n: usize) -> u64 {
        self.small.iter().map(|&e| dim_sym(n, e) + dim_sym(n, self.d - e)).sum()
    }

    /// All patterns with s pairs, cheapest first (unknown count, then lexicographic).
    pub fn all(d: u32, s: usize, n: usize) -> Vec<DegreePattern> {
        fn rec(lo: u32, hi: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for e in lo..=hi {
                cur.push(e);
                rec(e, hi, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut raw = Vec::new();
        rec(1, d / 2, s, &mut Vec::new(), &mut raw);
        let mut pats: Vec<DegreePattern> = raw.into_iter().map(|small| DegreePattern { d, small }).collect();
        pats.sort_by(|a, b| a.unknowns(n).cmp(&b.unknowns(n)).then_with(|| a.cmp(b)));
        pats
    }
}

impl fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// dim Sym^e(K^n).
pub fn dim_sym(n: usize, e: u32) -> u64 {
    if n == 0 {
        return u64::from(e == 0);
    }
    let (a, b) = (n as u64 - 1 + e as u64, e as u64);
    let mut r: u64 = 1;
    for i in 0..b.min(a - b) {
        r = r * (a - i) / (i + 1);
    }
    r
}

/// Increasing k-subsets of 0..n, lexicographically.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// f = Σ g_i h_i with every g_i, h_i homogeneous of positive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Vec<(Poly, Poly)>,
}

impl Decomposition {
    pub fn empty() -> Decomposition {
        Decomposition { terms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn expand(&self, ring: &Arc<PolyRing>) -> Poly {
        self.terms.iter().fold(Poly::zero(ring), |acc, (g, h)| acc.add(&g.mul(h)))
    }

    /// Multiplies out to f exactly, with homogeneous factors of positive degree.
    pub fn verify(&self, f: &Form) -> bool {
        let ok_factor = |p: &Poly| {
            p.is_homogeneous() && matches!(p.total_degree(), Some(e) if e >= 1 && e < f.degree()) && p.ring() == f.ring()
        };
        self.terms.iter().all(|(g, h)| ok_factor(g) && ok_factor(h)) && self.expand(f.ring()) == *f.poly()
    }

    pub fn pattern(&self, d: u32) -> Option<DegreePattern> {
        let es: Option<Vec<u32>> = self.terms.iter().map(|(g, _)| g.total_degree()).collect();
        DegreePattern::new(d, &es?).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Exact,
    BoundsOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerReason {
    AstrBound,
    RankBound,
    IrreducibilityBound,
    Exhaustion,
}

#[derive(Clone, Debug)]
pub struct StrengthCertificate {
    pub status: Status,
    pub lower: u32,
    pub lower_reason: LowerReason,
    pub upper: u32,
    pub witness: Decomposition,
    pub field: FieldDescriptor,
    /// An extension together with a decomposition of length astr(f) over it.
    pub extension: Option<(FieldDescriptor, Decomposition)>,
}

impl StrengthCertificate {
    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }

    /// The strength, when known exactly.
    pub fn value(&self) -> Option<u32> {
        self.is_exact().then_some(self.upper)
    }

    pub(crate) fn finish(mut self) -> StrengthCertificate {
        debug_assert!(self.lower <= self.upper);
        self.status = if self.lower == self.upper { Status::Exact } else { Status::BoundsOnly };
        self
    }
}

#[cfg(test)]
mod tests;
