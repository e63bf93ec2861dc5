//! Finite-level GL constructions: bases of symmetric powers and their
//! Frobenius twists, shift decompositions, and the characteristic-2
//! F-elementary example built from V^(2) and Sym^4(V).

use std::fmt;
use std::sync::Arc;

use crate::fields::{Elem, FieldDescriptor};
use crate::groebner::{buchberger, eliminate, ideal_member, GroebnerBasis};
use crate::poly::{monomials_of_degree, MonomialOrder, Poly, PolyRing};
use crate::strength::dim_sym;

/// A polynomial representation evaluated at a finite level n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelSpace {
    Sym(u32),
    /// Frobenius twist P^(q).
    Twist(Box<LevelSpace>, u64),
    Sum(Vec<LevelSpace>),
}

impl LevelSpace {
    pub fn twist(inner: LevelSpace, q: u64) -> LevelSpace {
        LevelSpace::Twist(Box::new(inner), q)
    }

    pub fn dimension(&self, n: usize) -> u64 {
        match self {
            LevelSpace::Sym(a) => dim_sym(n, *a),
            LevelSpace::Twist(inner, _) => inner.dimension(n),
            LevelSpace::Sum(parts) => parts.iter().map(|p| p.dimension(n)).sum(),
        }
    }

    /// Polynomial degree; a sum has the largest degree of its parts.
    pub fn degree(&self) -> u64 {
        match self {
            LevelSpace::Sym(a) => u64::from(*a),
            LevelSpace::Twist(inner, q) => q * inner.degree(),
            LevelSpace::Sum(parts) => parts.iter().map(LevelSpace::degree).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for LevelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelSpace::Sym(a) => write!(f, "Sym^{a}"),
            LevelSpace::Twist(inner, q) => write!(f, "({inner})^({q})"),
            LevelSpace::Sum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", if s.is_empty() { "0".into() } else { s.join(" + ") })
            }
        }
    }
}

fn monomial_label(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("e{}", i + 1) } else { format!("e{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Basis labels at level n: monomials e1^2, e1*e2, … for Sym, `x^(q)` for
/// twists and `[i]x` for the i-th summand of a sum.
pub fn level_basis(space: &LevelSpace, n: usize) -> Vec<String> {
    match space {
        LevelSpace::Sym(a) => monomials_of_degree(n, *a).iter().map(|e| monomial_label(e)).collect(),
        LevelSpace::Twist(inner, q) => level_basis(inner, n)
            .into_iter()
            .map(|l| {
                if l.contains(['*', '^', '[', ')']) {
                    format!("({l})^({q})")
                } else {
                    format!("{l}^({q})")
                }
            })
            .collect(),
        LevelSpace::Sum(parts) => parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| level_basis(p, n).into_iter().map(move |l| format!("[{}]{l}", i + 1)))
            .collect(),
    }
}

/// Pieces (i, dim Sym^i(K^m) · dim Sym^(a−i)(K^n)) of Sym^a(K^m ⊕ K^n).
pub fn shift_decompose(a: u32, m: usize, n: usize) -> Vec<(u32, u64)> {
    (0..=a).map(|i| (i, dim_sym(m, i) * dim_sym(n, a - i))).collect()
}

/// The ideal generated by [v^2]^2 − [v^4] inside
/// Sym(V^(2) ⊕ Sym^4 V) at level n, over GF(2).
#[derive(Clone, Debug)]
pub struct NsExample {
    n: usize,
    ring: Arc<PolyRing>,
    /// Degree-4 exponent vectors, in the order of the w variables.
    quartics: Vec<Vec<u32>>,
    generators: Vec<Poly>,
}

fn w_name(e: &[u32], n: usize) -> String {
    let idx: Vec<String> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n((i + 1).to_string(), k as usize)).collect();
    format!("w{}", idx.join(if n > 9 { "_" } else { "" }))
}

impl NsExample {
    pub fn new(n: usize) -> NsExample {
        let k = FieldDescriptor::parse("GF(2)").expect("GF(2)");
        let quartics = monomials_of_degree(n, 4);
        let names: Vec<String> =
            (1..=n).map(|i| format!("z{i}")).chain(quartics.iter().map(|e| w_name(e, n))).collect();
        let ring = PolyRing::new(&k, &names).expect("valid names");
        let mut ex = NsExample { n, ring, quartics, generators: Vec::new() };
        ex.generators = ex.expand_generators();
        ex
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn z(&self, i: usize) -> Poly {
        Poly::var(&self.ring, i)
    }

    /// The w variable of a degree-4 exponent vector.
    pub fn w(&self, e: &[u32]) -> Poly {
        let j = self.quartics.iter().position(|q| q == e).expect("degree-4 exponent");
        Poly::var(&self.ring, self.n + j)
    }

    pub fn z_names(&self) -> Vec<&str> {
        self.ring.vars()[..self.n].iter().map(String::as_str).collect()
    }

    pub fn w_names(&self) -> Vec<&str> {
        self.ring.vars()[self.n..].iter().map(String::as_str).collect()
    }

    /// Writes an element of Sym^2 or Sym^4 (a polynomial in the e's, with
    /// coefficients in `coef_ring`) as a linear form in the z's or w's.
    /// Degree-2 elements must lie in V^(2), i.e. be sums of squares e_i^2.
    fn bracket(&self, p: &Poly, coef_ring: &Arc<PolyRing>, big: &Arc<PolyRing>) -> Poly {
        // p lives in coef_ring ⊗ K[e1..en]: the last n variables are the e's
        let nc = coef_ring.nvars();
        let mut out = Poly::zero(big);
        for (ex, c) in p.terms() {
            let (cexp, eexp) = ex.split_at(nc);
            let slot = if eexp.iter().sum::<u32>() == 2 {
                eexp.iter().position(|&k| k == 2).expect("[v^2] lies in V^(2)")
            } else {
                self.n + self.quartics.iter().position(|q| q == eexp).expect("degree 4")
            };
            let mut e = cexp.to_vec();
            e.extend(std::iter::repeat_n(0, self.ring.nvars()));
            e[nc + slot] = 1;
            out = out.add(&Poly::monomial(big, e, c.clone()));
        }
        out
    }

    /// Expands [v^2]^2 − [v^4] for v = Σ c_i e_i and collects the
    /// coefficients of the c-monomials.
    fn expand_generators(&self) -> Vec<Poly> {
        let n = self.n;
        if n == 0 {
            return Vec::new();
        }
        let k = self.ring.field();
        let cs: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
        let es: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let coef_ring = PolyRing::new(k, &cs).unwrap();
        let ce = PolyRing::new(k, &cs.iter().chain(&es).collect::<Vec<_>>()).unwrap();
        let v = (0..n).fold(Poly::zero(&ce), |acc, i| acc.add(&Poly::var(&ce, i).mul(&Poly::var(&ce, n + i))));
        let big_names: Vec<&String> = cs.iter().chain(self.ring.vars()).collect();
        let big = PolyRing::new(k, &big_names).unwrap();
        let v2 = self.bracket(&v.pow(2), &coef_ring, &big);
        let v4 = self.bracket(&v.pow(4), &coef_ring, &big);
        let g = v2.pow(2).sub(&v4);
        let mut groups: Vec<(Vec<u32>, Vec<(Vec<u32>, Elem)>)> = Vec::new();
        for (e, c) in g.terms() {
            let (ce_, rest) = e.split_at(n);
            match groups.iter_mut().find(|(k, _)| k == ce_) {
                Some((_, ts)) => ts.push((rest.to_vec(), c.clone())),
                None => groups.push((ce_.to_vec(), vec![(rest.to_vec(), c.clone())])),
            }
        }
        let mut gens: Vec<Poly> = Vec::new();
        for (_, ts) in groups {
            let p = Poly::from_terms(&self.ring, ts).monic(MonomialOrder::GrevLex);
            if !p.is_zero() && !gens.contains(&p) {
                gens.push(p);
            }
        }
        gens.sort_by_key(|p| p.to_string());
        gens
    }

    /// The action of an n×n matrix g (columns are the images g·e_j) on the
    /// coordinate ring: z_i = [e_i^2] ↦ [(g e_i)^2], w_α ↦ [(g e)^α].
    pub fn act(&self, g: &[Vec<Elem>], f: &Poly) -> Poly {
        let n = self.n;
        let k = self.ring.field();
        let es: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let er = PolyRing::new(k, &es).unwrap();
        let empty = PolyRing::new(k, &[] as &[&str]).unwrap();
        let ge: Vec<Poly> = (0..n)
            .map(|j| (0..n).fold(Poly::zero(&er), |acc, i| acc.add(&Poly::var(&er, i).scale(&g[i][j]))))
            .collect();
        let mut images = Vec::with_capacity(self.ring.nvars());
        for i in 0..n {
            images.push(self.bracket(&ge[i].pow(2), &empty, &self.ring));
        }
        for q in &self.quartics {
            let m = q.iter().enumerate().fold(Poly::one(&er), |acc, (i, &e)| acc.mul(&ge[i].pow(e)));
            images.push(self.bracket(&m, &empty, &self.ring));
        }
        f.substitute(&self.ring, &images)
    }

    /// Injectivity of K[w] → K[z, w]/I and F-surjectivity (every generator
    /// squared reduces into K[w]).
    pub fn check(&self) -> NsReport {
        let gb = buchberger(&self.ring, &self.generators, MonomialOrder::Elimination(self.n));
        let kernel = eliminate(&gb, &self.w_names());
        let injective = kernel.generators().iter().all(Poly::is_zero);
        let mut squares = Vec::new();
        for i in 0..self.n {
            let z2 = self.z(i).pow(2);
            let image = gb.normal_form(&z2);
            let in_image = image.support_vars().iter().all(|&v| v >= self.n);
            let mut e = vec![0; self.n];
            e[i] = 4;
            let expected = ideal_member(&z2.sub(&self.w(&e)), &gb);
            squares.push(SquareImage { generator: self.z(i), image, in_image: in_image && expected });
        }
        let f_surjective = squares.iter().all(|s| s.in_image);
        NsReport { n: self.n, generators: self.generators.clone(), injective, f_surjective, squares, basis: gb }
    }
}

/// z_i^2 modulo I, and whether it is a polynomial in the w's.
#[derive(Clone, Debug)]
pub struct SquareImage {
    pub generator: Poly,
    pub image: Poly,
    pub in_image: bool,
}

#[derive(Clone, Debug)]
pub struct NsReport {
    pub n: usize,
    pub generators: Vec<Poly>,
    pub injective: bool,
    pub f_surjective: bool,
    pub squares: Vec<SquareImage>,
    pub basis: GroebnerBasis,
}

impl NsReport {
    pub fn passed(&self) -> bool {
        self.injective && self.f_surjective
    }
}

/// `ns_example_ideal`: the ring variables and generators at level n.
pub fn ns_example_ideal(n: usize) -> NsExample {
    NsExample::new(n)
}

/// `ns_example_check` at level n.
pub fn ns_example_check(n: usize) -> NsReport {
    NsExample::new(n).check()
}

#[cfg(test)]
mod tests;
