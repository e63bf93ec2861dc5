//! Buchberger's algorithm with sugar pair selection and the Gebauer–Möller
//! criteria, plus the ideal-theoretic queries built on it.

mod solve;

use std::cmp::Ordering;
use std::sync::Arc;

use crate::fields::{Elem, FieldDescriptor};
use crate::poly::{Exponents, MonomialOrder, Poly, PolyRing};

pub use solve::{solve_rational, RationalSolve, SolveLimits};

/// A reduced Gröbner basis together with the generators it came from.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    order: MonomialOrder,
    basis: Vec<Poly>,
    original: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Reduced basis, monic, sorted by increasing leading monomial.
    pub fn generators(&self) -> &[Poly] {
        &self.basis
    }

    pub fn original(&self) -> &[Poly] {
        &self.original
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        let k = self.ring.field();
        let basis: Vec<GPoly> = self.basis.iter().map(|g| GPoly::from_poly(g, self.order)).collect();
        let refs: Vec<&GPoly> = basis.iter().collect();
        let r = reduce_full(k, self.order, GPoly::from_poly(f, self.order), &refs);
        r.to_poly(&self.ring)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }
}

/// Sparse polynomial sorted in descending order under a fixed monomial order.
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Exponents, Elem)>,
    sugar: u32,
}

impl GPoly {
    fn from_poly(p: &Poly, order: MonomialOrder) -> GPoly {
        let mut terms = p.terms().to_vec();
        if order != MonomialOrder::GrevLex {
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        let sugar = p.total_degree().unwrap_or(0);
        GPoly { terms, sugar }
    }

    fn to_poly(&self, ring: &Arc<PolyRing>) -> Poly {
        Poly::from_terms(ring, self.terms.iter().cloned())
    }

    fn lm(&self) -> &Exponents {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self, k: &FieldDescriptor) {
        if let Some((_, c)) = self.terms.first() {
            if !k.is_one(c) {
                let inv = k.inv(c).unwrap();
                for t in &mut self.terms {
                    t.1 = k.mul(&t.1, &inv);
                }
            }
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// `p - c·x^m·g`, all sorted under `order`.
fn sub_mul(k: &FieldDescriptor, order: MonomialOrder, p: &[(Exponents, Elem)], c: &Elem, m: &[u32], g: &[(Exponents, Elem)]) -> Vec<(Exponents, Elem)> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 0;
    let mut gi = g.iter().map(|(e, x)| (e.iter().zip(m).map(|(a, b)| a + b).collect::<Exponents>(), x)).peekable();
    while i < p.len() || gi.peek().is_some() {
        let ord = match (p.get(i), gi.peek()) {
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
            (Some(a), Some(b)) => order.cmp(&a.0, &b.0),
        };
        match ord {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (e, x) = gi.next().unwrap();
                out.push((e, k.neg(&k.mul(c, x))));
            }
            Ordering::Equal => {
                let (e, x) = gi.next().unwrap();
                let v = k.sub(&p[i].1, &k.mul(c, x));
                if !k.is_zero(&v) {
                    out.push((e, v));
                }
                i += 1;
            }
        }
    }
    out
}

/// Full reduction of `p` by monic `basis`; the result is not normalized.
fn reduce_full(k: &FieldDescriptor, order: MonomialOrder, p: GPoly, basis: &[&GPoly]) -> GPoly {
    let mut rest = p.terms;
    let mut sugar = p.sugar;
    let mut out = Vec::new();
    while !rest.is_empty() {
        let lm = &rest[0].0;
        match basis.iter().find(|g| divides(g.lm(), lm)) {
            Some(g) => {
                let m: Exponents = lm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                sugar = sugar.max(degree(&m) + g.sugar);
                let c = rest[0].1.clone();
                rest = sub_mul(k, order, &rest, &c, &m, &g.terms);
            }
            None => {
                out.push(rest.remove(0));
            }
        }
    }
    GPoly { terms: out, sugar }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exponents,
    sugar: u32,
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
/// All generators must live in `ring`.
pub fn buchberger(ring: &Arc<PolyRing>, gens: &[Poly], order: MonomialOrder) -> GroebnerBasis {
    buchberger_limited(ring, gens, order, usize::MAX).expect("unlimited run always finishes")
}

/// As [`buchberger`], but gives up (returning `None`) after `max_pairs`
/// S-polynomial reductions.
pub fn buchberger_limited(ring: &Arc<PolyRing>, gens: &[Poly], order: MonomialOrder, max_pairs: usize) -> Option<GroebnerBasis> {
    let k = ring.field().clone();
    let mut polys: Vec<GPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut input: Vec<GPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| GPoly::from_poly(g, order)).collect();
    input.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for mut g in input {
        let basis: Vec<&GPoly> = polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        g = reduce_full(&k, order, g, &basis);
        if g.is_zero() {
            continue;
        }
        g.make_monic(&k);
        if degree(g.lm()) == 0 {
            return Some(unit_basis(ring, order, gens));
        }
        update(&mut polys, &mut active, &mut pairs, g);
    }

    let mut done = 0usize;
    while !pairs.is_empty() {
        if done >= max_pairs {
            return None;
        }
        done += 1;
        // sugar strategy, ties broken by the smaller lcm
        let idx = (0..pairs.len())
            .min_by(|&a, &b| pairs[a].sugar.cmp(&pairs[b].sugar).then_with(|| order.cmp(&pairs[a].lcm, &pairs[b].lcm)))
            .unwrap();
        let pair = pairs.swap_remove(idx);
        let s = spoly(&k, order, &polys[pair.i], &polys[pair.j], &pair.lcm);
        let basis: Vec<&GPoly> = polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        let mut h = reduce_full(&k, order, s, &basis);
        if h.is_zero() {
            continue;
        }
        h.make_monic(&k);
        if degree(h.lm()) == 0 {
            return Some(unit_basis(ring, order, gens));
        }
        update(&mut polys, &mut active, &mut pairs, h);
    }

    let kept: Vec<GPoly> = polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    Some(GroebnerBasis { ring: ring.clone(), order, basis: interreduce(&k, order, kept, ring), original: gens.to_vec() })
}

fn unit_basis(ring: &Arc<PolyRing>, order: MonomialOrder, gens: &[Poly]) -> GroebnerBasis {
    GroebnerBasis { ring: ring.clone(), order, basis: vec![Poly::one(ring)], original: gens.to_vec() }
}

fn spoly(k: &FieldDescriptor, order: MonomialOrder, f: &GPoly, g: &GPoly, l: &[u32]) -> GPoly {
    let mf: Exponents = l.iter().zip(f.lm()).map(|(a, b)| a - b).collect();
    let mg: Exponents = l.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
    let one = k.one();
    let fm = sub_mul(k, order, &[], &k.neg(&one), &mf, &f.terms);
    let terms = sub_mul(k, order, &fm, &one, &mg, &g.terms);
    GPoly { terms, sugar: (degree(&mf) + f.sugar).max(degree(&mg) + g.sugar) }
}

/// Gebauer–Möller installation of a new basis element `h`.
fn update(polys: &mut Vec<GPoly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: GPoly) {
    let hi = polys.len();
    let hm = h.lm().clone();
    let sugar_of = |p: &GPoly, l: &[u32]| p.sugar + degree(l) - degree(p.lm());

    let cand: Vec<(usize, Exponents)> =
        (0..hi).filter(|&g| active[g]).map(|g| (g, lcm(&hm, polys[g].lm()))).collect();
    // first criterion: drop (h,g) when some other (h,g') has an lcm dividing it
    let mut keep = Vec::new();
    for (a, (g, l)) in cand.iter().enumerate() {
        if coprime(&hm, polys[*g].lm()) {
            keep.push((*g, l.clone(), true));
            continue;
        }
        let dominated = cand.iter().enumerate().any(|(b, (_, l2))| {
            b != a && divides(l2, l) && (l2 != l || b < a)
        });
        if !dominated {
            keep.push((*g, l.clone(), false));
        }
    }
    // chain criterion on old pairs
    pairs.retain(|p| {
        !(divides(&hm, &p.lcm) && lcm(polys[p.i].lm(), &hm) != p.lcm && lcm(polys[p.j].lm(), &hm) != p.lcm)
    });
    // coprime leading monomials: the pair reduces to zero
    for (g, l, cop) in keep {
        if !cop {
            let sugar = sugar_of(&h, &l).max(sugar_of(&polys[g], &l));
            pairs.push(Pair { i: g, j: hi, lcm: l, sugar });
        }
    }
    for g in 0..hi {
        if active[g] && divides(&hm, polys[g].lm()) {
            active[g] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

fn interreduce(k: &FieldDescriptor, order: MonomialOrder, mut g: Vec<GPoly>, ring: &Arc<PolyRing>) -> Vec<Poly> {
    g.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    // minimal basis: leading monomials not divisible by earlier ones
    let mut minimal: Vec<GPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| divides(q.lm(), p.lm())) {
            minimal.push(p);
        }
    }
    let mut out: Vec<GPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&GPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        let head = GPoly { terms: vec![minimal[i].terms[0].clone()], sugar: 0 };
        let tail = GPoly { terms: minimal[i].terms[1..].to_vec(), sugar: minimal[i].sugar };
        let r = reduce_full(k, order, tail, &others);
        let mut terms = head.terms;
        terms.extend(r.terms);
        out.push(GPoly { terms, sugar: minimal[i].sugar });
    }
    out.iter().map(|p| p.to_poly(ring)).collect()
}

/// `ideal_member`: whether `f` reduces to zero modulo `g`.
pub fn ideal_member(f: &Poly, g: &GroebnerBasis) -> bool {
    g.contains(f)
}

/// `solvable_over_closure`: the generators have a common zero over the
/// algebraic closure iff their Gröbner basis is not {1}.
pub fn solvable_over_closure(ring: &Arc<PolyRing>, gens: &[Poly]) -> bool {
    !buchberger(ring, gens, MonomialOrder::GrevLex).is_unit()
}

/// Limited variant of [`solvable_over_closure`]; `None` when the budget ran out.
pub fn solvable_over_closure_limited(ring: &Arc<PolyRing>, gens: &[Poly], max_pairs: usize) -> Option<bool> {
    buchberger_limited(ring, gens, MonomialOrder::GrevLex, max_pairs).map(|g| !g.is_unit())
}

/// Elimination ideal `I ∩ K[keep]`, as a basis in the ring of kept variables.
pub fn eliminate(g: &GroebnerBasis, keep: &[&str]) -> GroebnerBasis {
    let vars = g.ring.vars();
    let drop: Vec<&String> = vars.iter().filter(|v| !keep.contains(&v.as_str())).collect();
    let kept: Vec<&String> = vars.iter().filter(|v| keep.contains(&v.as_str())).collect();
    let order_vars: Vec<&String> = drop.iter().chain(&kept).cloned().collect();
    let field = g.ring.field();
    let block = PolyRing::new(field, &order_vars).expect("permutation of valid variables");
    let target = PolyRing::new(field, &kept).expect("subset of valid variables");
    let moved: Vec<Poly> = g.basis.iter().map(|p| p.to_ring(&block).unwrap()).collect();
    let gb = buchberger(&block, &moved, MonomialOrder::Elimination(drop.len()));
    let basis: Vec<Poly> = gb
        .basis
        .iter()
        .filter(|p| p.terms().iter().all(|(e, _)| e[..drop.len()].iter().all(|&x| x == 0)))
        .map(|p| {
            let terms = p.terms().iter().map(|(e, c)| (e[drop.len()..].to_vec(), c.clone()));
            Poly::from_terms(&target, terms)
        })
        .collect();
    let final_gb = buchberger(&target, &basis, MonomialOrder::GrevLex);
    GroebnerBasis { original: basis, ..final_gb }
}

/// `radical_member`: some power of `f` lies in the ideal of `gens`
/// (Rabinowitsch: 1 ∈ (gens, 1 − u·f)).
pub fn radical_member(ring: &Arc<PolyRing>, f: &Poly, gens: &[Poly]) -> bool {
    let mut name = String::from("u");
    while ring.var_index(&name).is_some() || ring.field().generator_names().contains(&name.as_str()) {
        name.push('u');
    }
    let mut vars: Vec<String> = ring.vars().to_vec();
    vars.push(name.clone());
    let big = PolyRing::new(ring.field(), &vars).expect("fresh variable");
    let mut all: Vec<Poly> = gens.iter().map(|g| g.to_ring(&big).unwrap()).collect();
    let u = Poly::var_named(&big, &name).unwrap();
    all.push(Poly::one(&big).sub(&u.mul(&f.to_ring(&big).unwrap())));
    buchberger(&big, &all, MonomialOrder::GrevLex).is_unit()
}
