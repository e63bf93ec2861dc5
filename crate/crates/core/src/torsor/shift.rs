//! Finite-level model of a shifted Sym^d torsor.
//!
//! W = U ⊕ V with bases u1..um and v1..vn. The linear coordinates on
//! A(Sym^d W) are the degree-d monomials in the basis of W, written
//! `z<labels>` (e.g. `zu1v2`). A matrix acts on coordinates by substitution,
//! the translation group A(Sym^d V) moves the pure-V coordinates, and
//! functions pulled back from the unshifted space only see pure-U
//! coordinates and GL-invariant parameters.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::TorsorAlgebra;
use crate::error::{Error, Result};
use crate::fields::{Elem, FieldDescriptor};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::poly::{monomials_of_degree, Exponents, MonomialOrder, Poly, PolyRing};

#[derive(Clone, Debug)]
pub struct SymShiftModel {
    params: Vec<String>,
    m: usize,
    n: usize,
    d: u32,
    /// Degree-d monomials over the m + n basis vectors, in ring order.
    coords: Vec<Exponents>,
    ring: Arc<PolyRing>,
}

/// Coefficients of φ_t · f = f_0 + t f_1 + ⋯ + t^e f_e.
#[derive(Clone, Debug)]
pub struct PhiExpansion {
    pub coefficients: Vec<Poly>,
}

impl PhiExpansion {
    pub fn e(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, i: usize) -> Option<&Poly> {
        self.coefficients.get(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedReport {
    /// Δ_i(w) = 0 for i ≥ 2 over the pure-V fiber.
    pub affine_linear: bool,
    pub in_ideal: bool,
    /// ∂_r w = ∂_{φ*(r)} f for every basis covector r of Sym^d V.
    pub derivative_identity: bool,
}

impl EmbedReport {
    pub fn passed(&self) -> bool {
        self.affine_linear && self.in_ideal && self.derivative_identity
    }
}

#[derive(Clone, Debug)]
pub struct EmbedWitness {
    pub h: Poly,
    pub w: Poly,
    pub report: EmbedReport,
}

impl SymShiftModel {
    pub fn new(field: &FieldDescriptor, params: &[impl AsRef<str>], m: usize, n: usize, d: u32) -> Result<SymShiftModel> {
        if d == 0 {
            return Err(Error::Invalid("the representation degree must be positive".into()));
        }
        let params: Vec<String> = params.iter().map(|p| p.as_ref().to_string()).collect();
        let coords = monomials_of_degree(m + n, d);
        let mut names = params.clone();
        let label = |i: usize| if i < m { format!("u{}", i + 1) } else { format!("v{}", i - m + 1) };
        for a in &coords {
            let mut s = String::from("z");
            for (i, &x) in a.iter().enumerate() {
                for _ in 0..x {
                    s.push_str(&label(i));
                }
            }
            names.push(s);
        }
        let ring = PolyRing::new(field, &names)?;
        Ok(SymShiftModel { params, m, n, d, coords, ring })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.ring.field()
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    fn coord_var(&self, j: usize) -> usize {
        self.params.len() + j
    }

    fn coord_index(&self, a: &[u32]) -> usize {
        self.coords.iter().position(|c| c.as_slice() == a).expect("degree-d monomial")
    }

    /// Name of the coordinate for the monomial `a` over (u, v).
    pub fn coord_name(&self, a: &[u32]) -> &str {
        &self.ring.vars()[self.coord_var(self.coord_index(a))]
    }

    pub fn coordinate(&self, a: &[u32]) -> Poly {
        Poly::var(&self.ring, self.coord_var(self.coord_index(a)))
    }

    fn is_pure_u(&self, a: &[u32]) -> bool {
        a[self.m..].iter().all(|&x| x == 0)
    }

    fn is_pure_v(&self, a: &[u32]) -> bool {
        a[..self.m].iter().all(|&x| x == 0)
    }

    /// Pure-U coordinate monomials (the fiber of the unshifted torsor).
    pub fn pure_u(&self) -> Vec<Exponents> {
        self.coords.iter().filter(|a| self.is_pure_u(a)).cloned().collect()
    }

    /// Pure-V coordinate monomials (the fiber after shifting).
    pub fn pure_v(&self) -> Vec<Exponents> {
        self.coords.iter().filter(|a| self.is_pure_v(a)).cloned().collect()
    }

    /// The shifted torsor: fiber = pure-V coordinates, everything else is base.
    pub fn torsor(&self) -> TorsorAlgebra {
        let names: Vec<String> = self.pure_v().iter().map(|a| self.coord_name(a).to_string()).collect();
        TorsorAlgebra::from_ring(&self.ring, &names).expect("coordinates are ring variables")
    }

    /// The unshifted torsor Y{U}: fiber = pure-U coordinates.
    pub fn unshifted_torsor(&self) -> TorsorAlgebra {
        let names: Vec<String> = self.pure_u().iter().map(|a| self.coord_name(a).to_string()).collect();
        TorsorAlgebra::from_ring(&self.ring, &names).expect("coordinates are ring variables")
    }

    /// Image of the coordinate `a` under the matrix `g` (column i is the image
    /// of basis vector i), as a polynomial in `target` whose first variables
    /// are this model's variables. `entry(row, col)` supplies matrix entries.
    fn act_coordinate(&self, target: &Arc<PolyRing>, a: &[u32], entry: &dyn Fn(usize, usize) -> Poly) -> Poly {
        let dim = self.m + self.n;
        // (g w_i) as a linear form over the basis, coefficients in `target`
        let mut factors: Vec<Vec<Poly>> = Vec::new();
        for (i, &x) in a.iter().enumerate() {
            for _ in 0..x {
                factors.push((0..dim).map(|row| entry(row, i)).collect());
            }
        }
        // expand the product in Sym^d W
        let mut acc: BTreeMap<Exponents, Poly> = BTreeMap::new();
        acc.insert(vec![0; dim], Poly::one(target));
        for lin in &factors {
            let mut next: BTreeMap<Exponents, Poly> = BTreeMap::new();
            for (mono, c) in &acc {
                for (row, l) in lin.iter().enumerate() {
                    if l.is_zero() {
                        continue;
                    }
                    let mut m2 = mono.clone();
                    m2[row] += 1;
                    let v = c.mul(l);
                    let slot = next.entry(m2).or_insert_with(|| Poly::zero(target));
                    *slot = slot.add(&v);
                }
            }
            acc = next;
        }
        let mut out = Poly::zero(target);
        for (mono, c) in acc {
            let var = self.coord_var(self.coord_index(&mono));
            out = out.add(&c.mul(&Poly::var(target, var)));
        }
        out
    }

    /// g · f for a matrix `g` over the field (column i = image of basis vector i).
    pub fn act(&self, g: &[Vec<Elem>], f: &Poly) -> Poly {
        let entry = |row: usize, col: usize| Poly::constant(&self.ring, g[row][col].clone());
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|v| {
                if v < self.params.len() {
                    Poly::var(&self.ring, v)
                } else {
                    self.act_coordinate(&self.ring, &self.coords[v - self.params.len()], &entry)
                }
            })
            .collect();
        f.substitute(&self.ring, &images)
    }

    fn check_phi(&self, phi: &[usize]) -> Result<()> {
        if phi.len() != self.m {
            return Err(Error::Invalid(format!("phi must map each of the {} shift vectors", self.m)));
        }
        for (i, &a) in phi.iter().enumerate() {
            if a >= self.n {
                return Err(Error::Invalid(format!("phi maps u{} outside v1..v{}", i + 1, self.n)));
            }
            if phi[..i].contains(&a) {
                return Err(Error::Invalid("phi is not injective".into()));
            }
        }
        Ok(())
    }

    /// Matrix of φ_t = 1 + tφ with t a field element.
    pub fn phi_t_matrix(&self, phi: &[usize], t: &Elem) -> Result<Vec<Vec<Elem>>> {
        self.check_phi(phi)?;
        let k = self.field();
        let dim = self.m + self.n;
        let mut g = vec![vec![k.zero(); dim]; dim];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = k.one();
        }
        for (i, &a) in phi.iter().enumerate() {
            g[self.m + a][i] = t.clone();
        }
        Ok(g)
    }

    /// `phi_expand`: coefficients of the t-expansion of φ_t · f, where φ
    /// sends u_i to v_{phi[i]} (0-based).
    pub fn phi_expand(&self, f: &Poly, phi: &[usize]) -> Result<PhiExpansion> {
        self.check_phi(phi)?;
        let mut names: Vec<String> = self.ring.vars().to_vec();
        let mut t = String::from("t");
        while names.contains(&t) || self.field().generator_names().contains(&t.as_str()) {
            t.push('t');
        }
        names.push(t);
        let tr = PolyRing::new(self.field(), &names)?;
        let tv = self.ring.nvars();
        let m = self.m;
        let entry = |row: usize, col: usize| {
            if row == col {
                Poly::one(&tr)
            } else if col < m && row == m + phi[col] {
                Poly::var(&tr, tv)
            } else {
                Poly::zero(&tr)
            }
        };
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|v| {
                if v < self.params.len() {
                    Poly::var(&tr, v)
                } else {
                    self.act_coordinate(&tr, &self.coords[v - self.params.len()], &entry)
                }
            })
            .collect();
        let full = f.substitute(&tr, &images);
        let e = full.terms().iter().map(|(x, _)| x[tv]).max().unwrap_or(0) as usize;
        let mut coefficients = vec![Vec::new(); e + 1];
        for (x, c) in full.terms() {
            coefficients[x[tv] as usize].push((x[..tv].to_vec(), c.clone()));
        }
        let coefficients = coefficients.into_iter().map(|t| Poly::from_terms(&self.ring, t)).collect();
        Ok(PhiExpansion { coefficients })
    }

    /// Linear span of the GL(W)-orbit of f: coefficients of f(G·z) for a
    /// generic matrix G, taken separately for each z-degree component
    /// (scalar matrices separate them), reduced to a basis.
    pub fn orbit_span(&self, f: &Poly) -> Vec<Poly> {
        let dim = self.m + self.n;
        let mut names: Vec<String> = self.ring.vars().to_vec();
        let mut gnames = Vec::new();
        for r in 0..dim {
            for c in 0..dim {
                let mut s = format!("g{}x{}", r + 1, c + 1);
                while names.contains(&s) || self.field().generator_names().contains(&s.as_str()) {
                    s.push('g');
                }
                names.push(s.clone());
                gnames.push(s);
            }
        }
        let gr = PolyRing::new(self.field(), &names).expect("fresh names");
        let nv = self.ring.nvars();
        let entry = |row: usize, col: usize| Poly::var(&gr, nv + row * dim + col);
        let images: Vec<Poly> = (0..nv)
            .map(|v| {
                if v < self.params.len() {
                    Poly::var(&gr, v)
                } else {
                    self.act_coordinate(&gr, &self.coords[v - self.params.len()], &entry)
                }
            })
            .collect();
        let full = f.substitute(&gr, &images);
        let mut groups: BTreeMap<Exponents, Vec<(Exponents, Elem)>> = BTreeMap::new();
        for (x, c) in full.terms() {
            groups.entry(x[nv..].to_vec()).or_default().push((x[..nv].to_vec(), c.clone()));
        }
        let polys: Vec<Poly> = groups.into_values().map(|t| Poly::from_terms(&self.ring, t)).collect();
        span_basis(&polys)
    }

    /// Reduced Gröbner basis of the ideal generated by the GL-orbit of `gens`.
    pub fn orbit_ideal(&self, gens: &[Poly]) -> GroebnerBasis {
        let mut all = Vec::new();
        for g in gens {
            all.extend(self.orbit_span(g));
        }
        buchberger(&self.ring, &span_basis(&all), MonomialOrder::GrevLex)
    }

    /// Directional derivative of f along a covector on the pure-U coordinates.
    fn derive_u(&self, f: &Poly, r: &BTreeMap<Exponents, Elem>) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (a, c) in r {
            let v = self.coord_var(self.coord_index(a));
            out = out.add(&f.derivative(v).scale(c));
        }
        out
    }

    /// φ*(r) for a covector r on pure-V coordinates: (φ*r)(u^a) = r(φ(u)^a).
    pub fn pullback_covector(&self, r: &BTreeMap<Exponents, Elem>, phi: &[usize]) -> BTreeMap<Exponents, Elem> {
        let mut out = BTreeMap::new();
        for a in self.pure_u() {
            let mut b = vec![0; self.m + self.n];
            for i in 0..self.m {
                b[self.m + phi[i]] += a[i];
            }
            if let Some(c) = r.get(&b) {
                out.insert(a, c.clone());
            }
        }
        out
    }

    /// `embed_witness`: h = ∂_{r0} f and w = f_d^φ, with the three checks.
    /// `r0` is a covector on the pure-U coordinates; `j` must contain f.
    pub fn embed_witness(&self, f: &Poly, r0: &BTreeMap<Exponents, Elem>, phi: &[usize], j: &GroebnerBasis) -> Result<EmbedWitness> {
        self.check_phi(phi)?;
        let unshifted = self.unshifted_torsor();
        let allowed: Vec<usize> = unshifted.fiber().iter().copied().chain(0..self.params.len()).collect();
        if f.terms().iter().any(|(e, _)| e.iter().enumerate().any(|(i, &x)| x > 0 && !allowed.contains(&i))) {
            return Err(Error::Precondition("f must depend only on parameters and pure-U coordinates".into()));
        }
        if !j.contains(f) {
            return Err(Error::Precondition("f does not lie in the ideal J".into()));
        }
        let h = self.derive_u(f, r0);
        let exp = self.phi_expand(f, phi)?;
        let w = exp.coefficient(self.d as usize).cloned().unwrap_or_else(|| Poly::zero(&self.ring));
        let torsor = self.torsor();
        let affine_linear = torsor.delta(&w).components.keys().all(|&i| i <= 1);
        let in_ideal = j.contains(&w);
        let k = self.field();
        let pv = self.pure_v();
        let derivative_identity = pv.iter().all(|b| {
            let r: Vec<Elem> = pv.iter().map(|c| if c == b { k.one() } else { k.zero() }).collect();
            let lhs = torsor.directional_derivative(&w, &r);
            let mut rmap = BTreeMap::new();
            rmap.insert(b.clone(), k.one());
            let rhs = self.derive_u(f, &self.pullback_covector(&rmap, phi));
            lhs == rhs
        });
        Ok(EmbedWitness { h, w, report: EmbedReport { affine_linear, in_ideal, derivative_identity } })
    }
}

/// Basis of the linear span of `polys` (echelon form under grevlex).
pub fn span_basis(polys: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for p in polys {
        let mut r = p.clone();
        loop {
            if r.is_zero() {
                break;
            }
            let (lm, lc) = r.terms()[0].clone();
            match basis.iter().find(|b| b.terms()[0].0 == lm) {
                Some(b) => r = r.sub(&b.scale(&lc)),
                None => {
                    let monic = r.monic(MonomialOrder::GrevLex);
                    basis.push(monic);
                    break;
                }
            }
        }
    }
    basis
}
