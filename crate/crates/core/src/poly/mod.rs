//! Sparse multivariate polynomials over a field tower.

mod order;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

pub use order::MonomialOrder;
pub use parse::{identifiers, parse_in_ring, parse_poly};

use crate::error::{Error, Result};
use crate::fields::{needs_parens, valid_name, Elem, FieldDescriptor};

/// Exponent vector; its length equals the number of ring variables.
pub type Exponents = Vec<u32>;

/// Coefficient field plus ordered variable names.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldDescriptor,
    vars: Vec<String>,
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))
    }
}

impl PolyRing {
    pub fn new(field: &FieldDescriptor, vars: &[impl AsRef<str>]) -> Result<Arc<PolyRing>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let gens = field.generator_names();
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::Invalid(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::NameCollision(format!("variable {v} listed twice")));
            }
            if gens.contains(&v.as_str()) {
                return Err(Error::NameCollision(format!("variable {v} is also a field generator")));
            }
        }
        Ok(Arc::new(PolyRing { field: field.clone(), vars }))
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// A polynomial. Terms are kept sorted in descending graded reverse
/// lexicographic order with no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Exponents, Elem)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Elem) -> Poly {
        Poly::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Poly {
        Poly::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Poly {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Poly::monomial(ring, e, ring.field.one())
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Option<Poly> {
        ring.var_index(name).map(|i| Poly::var(ring, i))
    }

    pub fn monomial(ring: &Arc<PolyRing>, exps: Exponents, c: Elem) -> Poly {
        assert_eq!(exps.len(), ring.nvars());
        if ring.field.is_zero(&c) {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![(exps, c)] }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Exponents, Elem)>) -> Poly {
        let k = &ring.field;
        let mut acc: HashMap<Exponents, Elem> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars());
            match acc.get_mut(&e) {
                Some(v) => *v = k.add(v, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.ring.field
    }

    pub fn terms(&self) -> &[(Exponents, Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exponents, Elem)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    /// Constant coefficient, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Elem> {
        if self.is_zero() {
            return Some(self.field().zero());
        }
        self.is_constant().then(|| self.terms[0].1.clone())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> Elem {
        self.terms
            .iter()
            .find(|(e, _)| e.as_slice() == exps)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.terms.iter().any(|(e, _)| e[i] > 0)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<&(Exponents, Elem)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "polynomials from different rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        self.check_ring(other);
        let k = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                MonomialOrder::GrevLex.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { k.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { k.sub(&a[i].1, &b[j].1) } else { k.add(&a[i].1, &b[j].1) };
                    if !k.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Poly {
        let k = self.field();
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), k.neg(c))).collect() }
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        let k = self.field();
        if k.is_zero(c) {
            return Poly::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), k.mul(x, c))).collect() }
    }

    /// Multiplies by `c · x^m`.
    pub fn mul_term(&self, m: &[u32], c: &Elem) -> Poly {
        let k = self.field();
        if k.is_zero(c) {
            return Poly::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), k.mul(x, c)))
            .collect();
        // multiplying by a monomial preserves any monomial order
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            return large.mul_term(&small.terms[0].0, &small.terms[0].1);
        }
        let k = self.field();
        let mut acc: HashMap<Exponents, Elem> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = k.mul(ca, cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = k.add(v, &c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0));
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by a nonzero constant.
    pub fn div_const(&self, c: &Elem) -> Option<Poly> {
        Some(self.scale(&self.field().inv(c)?))
    }

    /// Scales so that the leading coefficient under `order` is 1.
    pub fn monic(&self, order: MonomialOrder) -> Poly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.div_const(c).unwrap(),
        }
    }

    /// `homogeneous_components`: degree ↦ component; empty for the zero polynomial.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Vec<(Exponents, Elem)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.iter().sum()).or_default().push((e.clone(), c.clone()));
        }
        // sub-sequences of a sorted list stay sorted
        out.into_iter().map(|(d, t)| (d, Poly { ring: self.ring.clone(), terms: t })).collect()
    }

    /// Evaluation homomorphism: variable `i` ↦ `images[i]`, all in `target`.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        assert!(target.field == self.ring.field, "substitution must keep the coefficient field");
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                while cache[i].len() <= x as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][x as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Re-expresses the polynomial in another ring containing all of its
    /// variables (matched by name) over the same field.
    pub fn to_ring(&self, target: &Arc<PolyRing>) -> Result<Poly> {
        if target.field != self.ring.field {
            return Err(Error::Invalid("target ring has a different field".into()));
        }
        let map: Vec<Option<usize>> = self.ring.vars.iter().map(|v| target.var_index(v)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.nvars()];
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    match map[i] {
                        Some(j) => ne[j] = x,
                        None => {
                            return Err(Error::Invalid(format!("variable {} missing in target ring", self.ring.vars[i])))
                        }
                    }
                }
            }
            terms.push((ne, c.clone()));
        }
        Ok(Poly::from_terms(target, terms))
    }

    /// Moves coefficients into an extension field of the current one.
    pub fn extend_field(&self, target: &Arc<PolyRing>) -> Result<Poly> {
        if !target.field.extends(&self.ring.field) || target.vars != self.ring.vars {
            return Err(Error::Invalid("target ring is not a scalar extension".into()));
        }
        let k = &target.field;
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), k.embed_from(&self.ring.field, c))).collect();
        Ok(Poly { ring: target.clone(), terms })
    }

    pub fn eval(&self, point: &[Elem]) -> Elem {
        let k = self.field();
        let mut acc = k.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &p) in point.iter().zip(e) {
                if p > 0 {
                    t = k.mul(&t, &k.pow(x, p as u64));
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let k = self.field();
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut ne = e.clone();
            ne[var] -= 1;
            (ne, k.mul(c, &k.from_i64(e[var] as i64)))
        });
        Poly::from_terms(&self.ring, terms)
    }

    /// `double_substitute`: `x_i ↦ x_i + y_i` for each pair `(x_i, y_i)`.
    /// The result lives in a ring extended by the partner variables.
    pub fn double_substitute(&self, pairs: &[(&str, &str)]) -> Result<Poly> {
        let mut vars: Vec<String> = self.ring.vars.clone();
        for (x, y) in pairs {
            if self.ring.var_index(x).is_none() {
                return Err(Error::UnknownIdentifier(x.to_string()));
            }
            if vars.iter().any(|v| v == y) || self.field().generator_names().contains(y) {
                return Err(Error::NameCollision(format!("partner {y} already in use")));
            }
            vars.push(y.to_string());
        }
        let target = PolyRing::new(self.field(), &vars)?;
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| {
                let xi = Poly::var(&target, i);
                match pairs.iter().position(|(x, _)| *x == self.ring.vars[i]) {
                    Some(j) => xi.add(&Poly::var(&target, self.ring.nvars() + j)),
                    None => xi,
                }
            })
            .collect();
        Ok(self.substitute(&target, &images))
    }

    /// `poly_frobenius_twist`: exponents times `q`, coefficients to the `q`-th power.
    pub fn frobenius_twist(&self, q: u64) -> Result<Poly> {
        let k = self.field();
        if q > 1 && k.characteristic() == 0 {
            return Err(Error::Precondition("Frobenius twist with q > 1 needs positive characteristic".into()));
        }
        k.check_char_power(q)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|x| x * q as u32).collect(), k.pow(c, q)))
            .collect();
        // scaling all exponents by q preserves grevlex order
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    fn fmt_monomial(&self, e: &[u32]) -> String {
        e.iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| if x == 1 { self.ring.vars[i].clone() } else { format!("{}^{x}", self.ring.vars[i]) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let k = self.field();
        let mut out = String::new();
        for (e, c) in &self.terms {
            let cs = k.format_elem(c);
            let mono = self.fmt_monomial(e);
            let term = if mono.is_empty() {
                if needs_parens(&cs) { format!("({cs})") } else { cs }
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if needs_parens(&cs) {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push('-');
                out.push_str(rest);
            } else {
                out.push('+');
                out.push_str(&term);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                Poly::$m(self, rhs)
            }
        }
        impl std::ops::$tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                Poly::$m(&self, &rhs)
            }
        }
    };
}
poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Exponent vectors of all monomials of total degree `d` in `n` variables,
/// in descending lexicographic order (`x1^d` first).
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponents> {
    fn rec(n: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}
