//! Polynomial systems whose solutions are decompositions of a form.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{dim_sym, DegreePattern, Decomposition, Form};
use crate::error::{Error, Result};
use crate::fields::{Elem, FieldDescriptor};
use crate::poly::{monomials_of_degree, Exponents, Poly, PolyRing};

/// Coefficient-matching equations for f = Σ g_i h_i.
#[derive(Clone, Debug)]
pub struct ThetaSystem {
    pub ring: Arc<PolyRing>,
    pub equations: Vec<Poly>,
    pub pattern: DegreePattern,
    /// Coefficients of each g_i (over monomials of its degree) as polynomials
    /// in the unknowns: a variable, or a constant under normalization.
    g: Vec<Vec<Poly>>,
    /// Unknown index of each coefficient of h_i.
    h: Vec<Vec<usize>>,
    degrees: Vec<(u32, u32)>,
    n: usize,
}

impl ThetaSystem {
    /// Reads (g_i, h_i) off a solution point, in the ring of `f`.
    pub fn decomposition(&self, f: &Form, point: &[Elem]) -> Decomposition {
        let ring = f.ring();
        let mut terms = Vec::new();
        for (i, &(e, e2)) in self.degrees.iter().enumerate() {
            let gm = monomials_of_degree(self.n, e);
            let hm = monomials_of_degree(self.n, e2);
            let g = Poly::from_terms(ring, gm.into_iter().zip(&self.g[i]).map(|(m, c)| (m, c.eval(point))));
            let h = Poly::from_terms(ring, hm.into_iter().zip(&self.h[i]).map(|(m, &v)| (m, point[v].clone())));
            terms.push((g, h));
        }
        Decomposition { terms }
    }
}

fn unknown_ring(field: &FieldDescriptor, names: impl Fn(&str, &str) -> Vec<String>) -> Result<(Arc<PolyRing>, String, String)> {
    for (a, b) in [("a", "b"), ("c", "e"), ("g", "h"), ("u", "w")] {
        if let Ok(r) = PolyRing::new(field, &names(a, b)) {
            return Ok((r, a.into(), b.into()));
        }
    }
    Err(Error::NameCollision("no free prefix for the unknown coefficients".into()))
}

/// `theta_system`: unknowns `a{j}`, `b{j}` (s = 1) or `a{i}_{j}`, `b{i}_{j}`
/// for the coefficients of g_i and h_i, one equation per degree-d monomial.
pub fn theta_system(f: &Form, s: usize, pattern: &DegreePattern) -> Result<ThetaSystem> {
    if pattern.len() != s {
        return Err(Error::Invalid(format!("pattern {pattern} has {} pairs, expected {s}", pattern.len())));
    }
    if pattern.degree() != f.degree() {
        return Err(Error::Invalid(format!("pattern {pattern} is for degree {}", pattern.degree())));
    }
    build(f, pattern, None)
}

/// θ system with each block of equal-degree g's in reduced echelon form:
/// `pivots[b]` lists the pivot monomial indices of block b (blocks ordered by
/// increasing degree e).
pub fn theta_system_normalized(f: &Form, pattern: &DegreePattern, pivots: &[Vec<usize>]) -> Result<ThetaSystem> {
    build(f, pattern, Some(pivots))
}

fn build(f: &Form, pattern: &DegreePattern, pivots: Option<&[Vec<usize>]>) -> Result<ThetaSystem> {
    let n = f.n();
    let s = pattern.len();
    let degrees = pattern.pairs();
    let label = |i: usize, j: usize| if s == 1 { format!("{}", j + 1) } else { format!("{}_{}", i + 1, j + 1) };
    // g coefficient status: None = unknown, Some(c) = constant 0/1
    let mut gstatus: Vec<Vec<Option<bool>>> = degrees.iter().map(|&(e, _)| vec![None; dim_sym(n, e) as usize]).collect();
    if let Some(piv) = pivots {
        let mut i = 0;
        let mut b = 0;
        while i < s {
            let e = degrees[i].0;
            let k = degrees[i..].iter().take_while(|p| p.0 == e).count();
            let p = piv.get(b).ok_or_else(|| Error::Invalid("missing pivot block".into()))?;
            if p.len() != k || p.windows(2).any(|w| w[0] >= w[1]) || p.iter().any(|&x| x >= gstatus[i].len()) {
                return Err(Error::Invalid("pivots must be increasing monomial indices, one per g".into()));
            }
            for j in 0..k {
                for (q, st) in gstatus[i + j].iter_mut().enumerate() {
                    if q == p[j] {
                        *st = Some(true);
                    } else if q < p[j] || p.contains(&q) {
                        *st = Some(false);
                    }
                }
            }
            i += k;
            b += 1;
        }
    }
    let names = |a: &str, bb: &str| {
        let mut v = Vec::new();
        for (i, &(_, e2)) in degrees.iter().enumerate() {
            for (j, st) in gstatus[i].iter().enumerate() {
                if st.is_none() {
                    v.push(format!("{a}{}", label(i, j)));
                }
            }
            for j in 0..dim_sym(n, e2) as usize {
                v.push(format!("{bb}{}", label(i, j)));
            }
        }
        v
    };
    let (ring, _, _) = unknown_ring(f.field(), names)?;
    let k = f.field();
    let mut next = 0;
    let mut g = Vec::new();
    let mut h = Vec::new();
    for (i, &(_, e2)) in degrees.iter().enumerate() {
        let gi: Vec<Poly> = gstatus[i]
            .iter()
            .map(|st| match st {
                None => {
                    next += 1;
                    Poly::var(&ring, next - 1)
                }
                Some(true) => Poly::one(&ring),
                Some(false) => Poly::zero(&ring),
            })
            .collect();
        g.push(gi);
        let hi: Vec<usize> = (0..dim_sym(n, e2) as usize).map(|j| next + j).collect();
        next += hi.len();
        h.push(hi);
    }
    let target = monomials_of_degree(n, f.degree());
    let index: HashMap<&Exponents, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut eqs: Vec<Poly> = target.iter().map(|m| Poly::constant(&ring, k.neg(&f.poly().coefficient(m)))).collect();
    for (i, &(e, e2)) in degrees.iter().enumerate() {
        let gm = monomials_of_degree(n, e);
        let hm = monomials_of_degree(n, e2);
        for (a, ga) in gm.iter().zip(&g[i]) {
            if ga.is_zero() {
                continue;
            }
            for (b, &hv) in hm.iter().zip(&h[i]) {
                let m: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let t = ga.mul(&Poly::var(&ring, hv));
                let slot = &mut eqs[index[&m]];
                *slot = slot.add(&t);
            }
        }
    }
    Ok(ThetaSystem { ring, equations: eqs, pattern: pattern.clone(), g, h, degrees, n })
}

/// "f vanishes on a codimension-s subspace" for a fixed pivot set: the
/// subspace is cut out by l_i = x_{p_i} + Σ a_{i,k} x_k (k > p_i, k not a
/// pivot), and the equations say f restricted to it is zero.
#[derive(Clone, Debug)]
pub struct SubspaceSystem {
    pub ring: Arc<PolyRing>,
    pub equations: Vec<Poly>,
    pub pivots: Vec<usize>,
    /// (column, unknown index) for each row.
    entries: Vec<Vec<(usize, usize)>>,
    n: usize,
}

impl SubspaceSystem {
    /// The linear forms l_i at a solution point, in the ring of f.
    pub fn linear_forms(&self, ring: &Arc<PolyRing>, point: &[Elem]) -> Vec<Poly> {
        let k = ring.field();
        self.pivots
            .iter()
            .zip(&self.entries)
            .map(|(&p, row)| {
                let mut terms = vec![(unit(self.n, p), k.one())];
                for &(c, v) in row {
                    terms.push((unit(self.n, c), point[v].clone()));
                }
                Poly::from_terms(ring, terms)
            })
            .collect()
    }
}

fn unit(n: usize, i: usize) -> Exponents {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

pub fn subspace_system(f: &Form, pivots: &[usize]) -> Result<SubspaceSystem> {
    let n = f.n();
    if pivots.windows(2).any(|w| w[0] >= w[1]) || pivots.iter().any(|&p| p >= n) {
        return Err(Error::Invalid("pivots must be increasing variable indices".into()));
    }
    let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let mut layout: Vec<Vec<usize>> = Vec::new();
    for &p in pivots {
        layout.push(free.iter().copied().filter(|&c| c > p).collect());
    }
    let names = |a: &str, _: &str| {
        let mut v = Vec::new();
        for (i, cols) in layout.iter().enumerate() {
            for &c in cols {
                v.push(format!("{a}{}_{}", i + 1, c + 1));
            }
        }
        v
    };
    let (ring, _, _) = unknown_ring(f.field(), names)?;
    let nu = ring.nvars();
    let mut entries = Vec::new();
    let mut next = 0;
    for cols in &layout {
        entries.push(cols.iter().map(|&c| (c, (next, next += 1).0)).collect::<Vec<_>>());
    }
    // substitute x_p = −Σ a x_c in K[a, x_free]
    let mut names: Vec<String> = ring.vars().to_vec();
    for &c in &free {
        let mut s = format!("x{}", c + 1);
        while names.contains(&s) {
            s.push('x');
        }
        names.push(s);
    }
    let big = PolyRing::new(f.field(), &names)?;
    let col_var = |c: usize| nu + free.iter().position(|&x| x == c).unwrap();
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        if let Some(r) = pivots.iter().position(|&p| p == i) {
            let mut img = Poly::zero(&big);
            for &(c, v) in &entries[r] {
                img = img.sub(&Poly::var(&big, v).mul(&Poly::var(&big, col_var(c))));
            }
            images.push(img);
        } else {
            images.push(Poly::var(&big, col_var(i)));
        }
    }
    let restricted = f.poly().substitute(&big, &images);
    let mut groups: BTreeMap<Exponents, Vec<(Exponents, Elem)>> = BTreeMap::new();
    for (e, c) in restricted.terms() {
        groups.entry(e[nu..].to_vec()).or_default().push((e[..nu].to_vec(), c.clone()));
    }
    let equations = groups.into_values().rev().map(|t| Poly::from_terms(&ring, t)).collect();
    Ok(SubspaceSystem { ring, equations, pivots: pivots.to_vec(), entries, n })
}

/// Cofactors h_i with f = Σ g_i h_i for fixed homogeneous g_i, by linear algebra.
pub(crate) fn cofactors(f: &Form, gs: &[Poly]) -> Option<Decomposition> {
    let n = f.n();
    let d = f.degree();
    let k = f.field();
    let target = monomials_of_degree(n, d);
    let index: HashMap<&Exponents, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    let mut layout = Vec::new();
    for g in gs {
        let e = g.total_degree()?;
        if e == 0 || e >= d {
            return None;
        }
        let hm = monomials_of_degree(n, d - e);
        for m in &hm {
            let mut col = vec![k.zero(); target.len()];
            for (a, c) in g.terms() {
                let mm: Exponents = a.iter().zip(m).map(|(x, y)| x + y).collect();
                col[index[&mm]] = c.clone();
            }
            cols.push(col);
        }
        layout.push(hm);
    }
    let rows: Vec<Vec<Elem>> = (0..target.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let b: Vec<Elem> = target.iter().map(|m| f.poly().coefficient(m)).collect();
    let x = k.solve_linear(&rows, &b, cols.len())?;
    let mut it = x.into_iter();
    let mut terms = Vec::new();
    for (g, hm) in gs.iter().zip(layout) {
        let h = Poly::from_terms(f.ring(), hm.into_iter().map(|m| (m, it.next().unwrap())));
        if !h.is_zero() {
            terms.push((g.clone(), h));
        }
    }
    Some(Decomposition { terms })
}
