//! Calculus on a split torsor B = A ⊗ Sym(V): the comultiplication
//! Δ(f) = f(x + y) split by shadow degree, derivatives, the fiber-degree
//! filtration, and Frobenius descent.

mod shift;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{Elem, FieldDescriptor};
use crate::poly::{Exponents, Poly, PolyRing};

pub use shift::{span_basis, EmbedReport, EmbedWitness, PhiExpansion, SymShiftModel};

/// Base variables generate A, fiber variables are a basis of V.
#[derive(Clone, Debug)]
pub struct TorsorAlgebra {
    ring: Arc<PolyRing>,
    fiber: Vec<usize>,
    /// Ring variables followed by one shadow partner per fiber variable.
    shadow_ring: Arc<PolyRing>,
}

/// Shadow-degree components of Δ(f).
#[derive(Clone, Debug)]
pub struct DeltaExpansion {
    pub ring: Arc<PolyRing>,
    pub components: BTreeMap<u32, Poly>,
}

impl DeltaExpansion {
    pub fn component(&self, i: u32) -> Poly {
        self.components.get(&i).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    /// Δ(f) as a single polynomial.
    pub fn assemble(&self) -> Poly {
        self.components.values().fold(Poly::zero(&self.ring), |acc, c| acc.add(c))
    }
}

/// f written as Σ a_i · (x^{u_i})^q with a_i ∈ A.
#[derive(Clone, Debug)]
pub struct Descent {
    pub q: u64,
    /// (A-coefficient, fiber exponent vector u over the fiber variables).
    pub terms: Vec<(Poly, Exponents)>,
}

impl TorsorAlgebra {
    pub fn new(field: &FieldDescriptor, base: &[impl AsRef<str>], fiber: &[impl AsRef<str>]) -> Result<TorsorAlgebra> {
        let vars: Vec<String> = base.iter().map(|s| s.as_ref().to_string()).chain(fiber.iter().map(|s| s.as_ref().to_string())).collect();
        let ring = PolyRing::new(field, &vars)?;
        let fiber: Vec<String> = fiber.iter().map(|s| s.as_ref().to_string()).collect();
        TorsorAlgebra::from_ring(&ring, &fiber)
    }

    /// Uses the given ring; the named variables form the fiber, the rest the base.
    pub fn from_ring(ring: &Arc<PolyRing>, fiber: &[impl AsRef<str>]) -> Result<TorsorAlgebra> {
        let mut idx = Vec::new();
        for v in fiber {
            let i = ring.var_index(v.as_ref()).ok_or_else(|| Error::UnknownIdentifier(v.as_ref().to_string()))?;
            if idx.contains(&i) {
                return Err(Error::NameCollision(format!("fiber variable {} listed twice", v.as_ref())));
            }
            idx.push(i);
        }
        let mut names: Vec<String> = ring.vars().to_vec();
        let gens = ring.field().generator_names();
        for &i in &idx {
            let v = &ring.vars()[i];
            let mut s = match v.as_bytes()[0] {
                b'x' | b'z' => format!("y{}", &v[1..]),
                _ => format!("y{v}"),
            };
            while names.contains(&s) || gens.contains(&s.as_str()) {
                s.push('s');
            }
            names.push(s);
        }
        let shadow_ring = PolyRing::new(ring.field(), &names)?;
        Ok(TorsorAlgebra { ring: ring.clone(), fiber: idx, shadow_ring })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.ring.field()
    }

    /// Indices of the fiber variables in the ring.
    pub fn fiber(&self) -> &[usize] {
        &self.fiber
    }

    pub fn base(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|i| !self.fiber.contains(i)).collect()
    }

    /// Names of the shadow partners, aligned with [`fiber`](Self::fiber).
    pub fn shadow_names(&self) -> &[String] {
        &self.shadow_ring.vars()[self.ring.nvars()..]
    }

    pub fn shadow_ring(&self) -> &Arc<PolyRing> {
        &self.shadow_ring
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        crate::poly::parse_in_ring(text, &self.ring)
    }

    fn fiber_degree(&self, e: &[u32]) -> u32 {
        self.fiber.iter().map(|&i| e[i]).sum()
    }

    fn shadow_degree(&self, e: &[u32]) -> u32 {
        e[self.ring.nvars()..].iter().sum()
    }

    /// `delta`: components of f(x + y) by degree in the shadow variables.
    pub fn delta(&self, f: &Poly) -> DeltaExpansion {
        let names: Vec<String> = self.fiber.iter().map(|&i| self.ring.vars()[i].clone()).collect();
        let pairs: Vec<(&str, &str)> =
            names.iter().map(|s| s.as_str()).zip(self.shadow_names().iter().map(|s| s.as_str())).collect();
        let full = f.double_substitute(&pairs).expect("shadow names are fresh");
        let full = full.to_ring(&self.shadow_ring).expect("same variables");
        let mut comps: BTreeMap<u32, Vec<(Exponents, Elem)>> = BTreeMap::new();
        for (e, c) in full.terms() {
            comps.entry(self.shadow_degree(e)).or_default().push((e.clone(), c.clone()));
        }
        let components = comps.into_iter().map(|(i, t)| (i, Poly::from_terms(&self.shadow_ring, t))).collect();
        DeltaExpansion { ring: self.shadow_ring.clone(), components }
    }

    /// Sets every shadow variable to zero.
    pub fn counit(&self, p: &Poly) -> Poly {
        let terms = p.terms().iter().filter(|(e, _)| self.shadow_degree(e) == 0).map(|(e, c)| (e[..self.ring.nvars()].to_vec(), c.clone()));
        Poly::from_terms(&self.ring, terms)
    }

    /// `directional_derivative`: Δ_1(f) paired with the covector `r`
    /// (one value per fiber variable).
    pub fn directional_derivative(&self, f: &Poly, r: &[Elem]) -> Poly {
        assert_eq!(r.len(), self.fiber.len(), "covector length must match the fiber");
        let k = self.field();
        let d1 = self.delta(f).component(1);
        let nv = self.ring.nvars();
        let terms = d1.terms().iter().map(|(e, c)| {
            let j = (0..self.fiber.len()).find(|&j| e[nv + j] == 1).expect("degree one in the shadow");
            (e[..nv].to_vec(), k.mul(c, &r[j]))
        });
        Poly::from_terms(&self.ring, terms)
    }

    /// `filtration_level`: least n with f ∈ B_{≤n}; `None` for f = 0.
    pub fn filtration_level(&self, f: &Poly) -> Option<u32> {
        if f.is_zero() {
            return None;
        }
        self.delta(f).components.keys().max().copied()
    }

    /// `init`: the fiber-degree-n part of f where n is the filtration level.
    pub fn init(&self, f: &Poly) -> Option<Poly> {
        let n = self.filtration_level(f)?;
        let terms = f.terms().iter().filter(|(e, _)| self.fiber_degree(e) == n).cloned();
        Some(Poly::from_terms(&self.ring, terms))
    }

    /// Whether f lies in A (no fiber dependence).
    pub fn in_base(&self, f: &Poly) -> bool {
        f.terms().iter().all(|(e, _)| self.fiber_degree(e) == 0)
    }

    /// `frobenius_descend`: the least q > 0 with Δ_q(f) ≠ 0, and f rewritten
    /// over q-th powers of fiber monomials.
    pub fn frobenius_descend(&self, f: &Poly) -> Result<Descent> {
        if self.in_base(f) {
            return Err(Error::Precondition("f lies in A; there is nothing to descend".into()));
        }
        let q = if self.field().characteristic() == 0 {
            1
        } else {
            let d = self.delta(f);
            *d.components.keys().find(|&&i| i > 0).expect("f is not in A") as u64
        };
        let mut groups: BTreeMap<Exponents, Vec<(Exponents, Elem)>> = BTreeMap::new();
        for (e, c) in f.terms() {
            let mut u = Vec::with_capacity(self.fiber.len());
            for &i in &self.fiber {
                if !(e[i] as u64).is_multiple_of(q) {
                    return Err(Error::Invalid(format!("fiber exponent {} not divisible by {q}", e[i])));
                }
                u.push(e[i] / q as u32);
            }
            let mut a = e.clone();
            for &i in &self.fiber {
                a[i] = 0;
            }
            groups.entry(u).or_default().push((a, c.clone()));
        }
        let terms = groups.into_iter().rev().map(|(u, t)| (Poly::from_terms(&self.ring, t), u)).collect();
        Ok(Descent { q, terms })
    }

    /// Σ a_i · (x^{u_i})^q.
    pub fn reconstruct(&self, d: &Descent) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (a, u) in &d.terms {
            let mut e = vec![0; self.ring.nvars()];
            for (j, &i) in self.fiber.iter().enumerate() {
                e[i] = u[j] * d.q as u32;
            }
            out = out.add(&a.mul_term(&e, &self.field().one()));
        }
        out
    }

    /// `twisted_delta_check`: with X = x^q as new fiber coordinates, the
    /// twisted components satisfy Δ^{(q)}_i(f) = Δ_{qi}(f), and Δ_j(f) = 0
    /// when q does not divide j.
    pub fn twisted_delta_check(&self, f: &Poly, q: u64) -> Result<bool> {
        self.field().check_char_power(q)?;
        if q > 1 && self.field().characteristic() == 0 {
            return Err(Error::Precondition("q > 1 needs positive characteristic".into()));
        }
        let qq = q as u32;
        if f.terms().iter().any(|(e, _)| self.fiber.iter().any(|&i| e[i] % qq != 0)) {
            return Err(Error::Precondition(format!("some fiber exponent is not divisible by {q}")));
        }
        let nv = self.ring.nvars();
        let untwist = Poly::from_terms(
            &self.ring,
            f.terms().iter().map(|(e, c)| {
                let mut e = e.clone();
                for &i in &self.fiber {
                    e[i] /= qq;
                }
                (e, c.clone())
            }),
        );
        let twisted = self.delta(&untwist);
        let plain = self.delta(f);
        let retwist = |p: &Poly| {
            Poly::from_terms(
                &self.shadow_ring,
                p.terms().iter().map(|(e, c)| {
                    let mut e = e.clone();
                    for &i in &self.fiber {
                        e[i] *= qq;
                    }
                    for x in &mut e[nv..] {
                        *x *= qq;
                    }
                    (e, c.clone())
                }),
            )
        };
        for (&j, c) in &plain.components {
            if j % qq != 0 && !c.is_zero() {
                return Ok(false);
            }
        }
        let top = plain.components.keys().max().copied().unwrap_or(0) / qq;
        let top = top.max(twisted.components.keys().max().copied().unwrap_or(0));
        Ok((0..=top).all(|i| retwist(&twisted.component(i)) == plain.component(qq * i)))
    }
}

#[cfg(test)]
mod tests;
