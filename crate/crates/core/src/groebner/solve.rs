//! K-rational points of polynomial systems by lex triangularization.
//!
//! The search is exact when every branch is decided: eliminants are solved
//! with exact root finding, and free coordinates over small finite fields are
//! enumerated. Free coordinates over infinite fields are only sampled, so a
//! failure to find a point there is reported as undecided.

use std::sync::Arc;

use super::buchberger_limited;
use crate::fields::Elem;
use crate::poly::{MonomialOrder, Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalSolve {
    /// A K-point, one value per ring variable.
    Solution(Vec<Elem>),
    NoSolution,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct SolveLimits {
    /// S-pair budget for each Gröbner basis computation.
    pub max_pairs: usize,
    /// Total number of search nodes.
    pub max_nodes: usize,
    /// Free coordinates over finite fields up to this size are enumerated.
    pub enumerate_up_to: u64,
    /// Number of sample values tried for a free coordinate otherwise.
    pub samples: usize,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_pairs: 2000, max_nodes: 400, enumerate_up_to: 16, samples: 4 }
    }
}

struct Search<'a> {
    ring: &'a Arc<PolyRing>,
    limits: &'a SolveLimits,
    nodes: usize,
}

/// Finds a K-rational common zero of `gens`, proves there is none, or gives up.
pub fn solve_rational(ring: &Arc<PolyRing>, gens: &[Poly], limits: &SolveLimits) -> RationalSolve {
    let mut s = Search { ring, limits, nodes: 0 };
    let assign = vec![None; ring.nvars()];
    s.node(gens.to_vec(), assign)
}

impl Search<'_> {
    fn node(&mut self, gens: Vec<Poly>, assign: Vec<Option<Elem>>) -> RationalSolve {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return RationalSolve::Undecided;
        }
        let k = self.ring.field().clone();
        let mut gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();

        // eliminate variables occurring linearly with a constant coefficient
        let mut pending: Vec<(usize, Poly)> = Vec::new();
        loop {
            if gens.iter().any(|g| g.is_constant()) {
                return RationalSolve::NoSolution;
            }
            let Some((gi, v, c)) = find_linear(&gens) else { break };
            let g = gens.swap_remove(gi);
            let mut e = vec![0; self.ring.nvars()];
            e[v] = 1;
            let rest = g.sub(&Poly::monomial(self.ring, e, c.clone()));
            let expr = rest.scale(&k.neg(&k.inv(&c).unwrap()));
            gens = gens.iter().map(|h| subst(self.ring, h, v, &expr)).filter(|h| !h.is_zero()).collect();
            for (_, p) in pending.iter_mut() {
                *p = subst(self.ring, p, v, &expr);
            }
            pending.push((v, expr));
        }

        let mut point = if gens.is_empty() {
            assign.iter().map(|a| a.clone().unwrap_or_else(|| k.zero())).collect()
        } else {
            match self.branch(gens, &assign) {
                RationalSolve::Solution(pt) => pt,
                other => return other,
            }
        };
        // eliminated variables depend only on the remaining ones
        for (v, expr) in &pending {
            point[*v] = expr.eval(&point);
        }
        RationalSolve::Solution(point)
    }

    /// Lex basis, then branch on an eliminant or a free coordinate.
    fn branch(&mut self, gens: Vec<Poly>, assign: &[Option<Elem>]) -> RationalSolve {
        let k = self.ring.field().clone();
        let Some(gb) = buchberger_limited(self.ring, &gens, MonomialOrder::Lex, self.limits.max_pairs) else {
            return RationalSolve::Undecided;
        };
        if gb.is_unit() {
            return RationalSolve::NoSolution;
        }
        let basis = gb.generators().to_vec();
        let mut used = vec![false; self.ring.nvars()];
        for g in &basis {
            for v in g.support_vars() {
                used[v] = true;
            }
        }
        let univariate = basis.iter().find_map(|g| {
            let s = g.support_vars();
            (s.len() == 1).then(|| (s[0], g.clone()))
        });
        let (var, values, complete) = match univariate {
            Some((v, g)) => {
                let coeffs = univariate_coeffs(&g, v);
                match k.roots(&coeffs) {
                    Some(r) => (v, r, true),
                    None => return RationalSolve::Undecided,
                }
            }
            None => {
                let v = (0..self.ring.nvars()).rev().find(|&i| used[i]).expect("nonconstant basis");
                match k.size() {
                    Some(sz) if sz <= self.limits.enumerate_up_to.into() => (v, k.elements().unwrap(), true),
                    _ => (v, self.samples(), false),
                }
            }
        };
        let mut undecided = !complete;
        for x in values {
            let next: Vec<Poly> = basis.iter().map(|g| subst(self.ring, g, var, &Poly::constant(self.ring, x.clone()))).collect();
            let mut a = assign.to_vec();
            a[var] = Some(x.clone());
            match self.node(next, a) {
                RationalSolve::Solution(pt) => return RationalSolve::Solution(pt),
                RationalSolve::NoSolution => {}
                RationalSolve::Undecided => undecided = true,
            }
        }
        if undecided {
            RationalSolve::Undecided
        } else {
            RationalSolve::NoSolution
        }
    }

    fn samples(&self) -> Vec<Elem> {
        let k = self.ring.field();
        let mut out: Vec<Elem> = Vec::new();
        let mut push = |x: Elem| {
            if !out.contains(&x) {
                out.push(x);
            }
        };
        for n in [0i64, 1, -1, 2, -2, 3] {
            push(k.from_i64(n));
        }
        for g in k.generator_names() {
            push(k.generator(g).unwrap());
        }
        out.truncate(self.limits.samples.max(1));
        out
    }
}

/// A generator with a variable of degree one whose coefficient is a constant.
fn find_linear(gens: &[Poly]) -> Option<(usize, usize, Elem)> {
    let mut best: Option<(usize, usize, Elem, usize)> = None;
    for (gi, g) in gens.iter().enumerate() {
        let n = g.ring().nvars();
        for v in 0..n {
            let mut coeff = None;
            let mut ok = true;
            let mut seen = false;
            for (e, c) in g.terms() {
                if e[v] == 0 {
                    continue;
                }
                seen = true;
                if e[v] == 1 && e.iter().enumerate().all(|(i, &x)| i == v || x == 0) {
                    coeff = Some(c.clone());
                } else {
                    ok = false;
                    break;
                }
            }
            if ok && seen {
                if let Some(c) = coeff {
                    // prefer short generators: the substitution stays small
                    let size = g.num_terms();
                    if best.as_ref().is_none_or(|b| size < b.3) {
                        best = Some((gi, v, c, size));
                    }
                }
            }
        }
    }
    best.map(|(gi, v, c, _)| (gi, v, c))
}

fn subst(ring: &Arc<PolyRing>, p: &Poly, v: usize, image: &Poly) -> Poly {
    if p.degree_in(v) == 0 {
        return p.clone();
    }
    let images: Vec<Poly> = (0..ring.nvars()).map(|i| if i == v { image.clone() } else { Poly::var(ring, i) }).collect();
    p.substitute(ring, &images)
}

fn univariate_coeffs(g: &Poly, v: usize) -> Vec<Elem> {
    let k = g.field();
    let deg = g.degree_in(v) as usize;
    let mut out = vec![k.zero(); deg + 1];
    for (e, c) in g.terms() {
        out[e[v] as usize] = c.clone();
    }
    out
}
