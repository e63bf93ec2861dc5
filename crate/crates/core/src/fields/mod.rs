//! Exact fields built as towers over a prime field.
//!
//! A tower starts at `QQ` or `GF(p)` and adjoins, in order, transcendental
//! generators, algebraic generators with a verified-irreducible minimal
//! polynomial, and p-th roots. Elements are kept in a canonical form so that
//! equality is structural.

mod arith;
mod linalg;
mod parse;
mod pbasis;
mod roots;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

pub use parse::parse_field_spec;

use crate::error::{Error, Result};
use roots::is_power_of;

/// Raw element of some tower level. Only meaningful together with the
/// [`FieldDescriptor`] that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// Rational number (characteristic 0 prime field).
    Rat(BigRational),
    /// Residue modulo p.
    Mod(u64),
    /// Reduced fraction of univariate polynomials over the level below; the
    /// denominator is monic.
    Frac(Vec<Elem>, Vec<Elem>),
    /// Polynomial in the layer generator of degree below the minimal polynomial.
    Alg(Vec<Elem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerKind {
    Transcendental,
    Algebraic,
    /// Root `r` with `r^q = target`; `full_layer` marks layers produced by the
    /// `^(1/q)` syntax.
    PthRoot { target: Elem, q: u64, full_layer: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub name: String,
    pub kind: LayerKind,
    /// Monic minimal polynomial over the tower below (empty for transcendental layers).
    pub modulus: Vec<Elem>,
}

#[derive(Debug)]
pub(crate) struct Tower {
    pub(crate) characteristic: u64,
    pub(crate) layers: Vec<Layer>,
    pbases: Vec<OnceLock<pbasis::PBasis>>,
}

impl Tower {
    fn new(characteristic: u64, layers: Vec<Layer>) -> Self {
        let pbases = (0..=layers.len()).map(|_| OnceLock::new()).collect();
        Tower { characteristic, layers, pbases }
    }
}

/// Characteristic and p-degree `[K:K^p]` of a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PDegree {
    pub characteristic: u64,
    pub c: u64,
}

/// A validated field tower. Cheap to clone; immutable.
#[derive(Clone)]
pub struct FieldDescriptor {
    pub(crate) tower: Arc<Tower>,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower)
            || (self.tower.characteristic == other.tower.characteristic && self.tower.layers == other.tower.layers)
    }
}
impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldDescriptor({self})")
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor { tower: Arc::new(Tower::new(0, Vec::new())) }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::Field(format!("GF({p}) requires a prime below 2^31")));
        }
        Ok(FieldDescriptor { tower: Arc::new(Tower::new(p, Vec::new())) })
    }

    pub fn parse(spec: &str) -> Result<Self> {
        parse_field_spec(spec)
    }

    pub fn characteristic(&self) -> u64 {
        self.tower.characteristic
    }

    pub fn layers(&self) -> &[Layer] {
        &self.tower.layers
    }

    pub(crate) fn level(&self) -> usize {
        self.tower.layers.len()
    }

    /// The tower with only the first `n` layers.
    pub fn truncate(&self, n: usize) -> FieldDescriptor {
        FieldDescriptor { tower: Arc::new(Tower::new(self.characteristic(), self.tower.layers[..n].to_vec())) }
    }

    fn push_layer(&self, layer: Layer) -> Result<FieldDescriptor> {
        if !valid_name(&layer.name) {
            return Err(Error::Field(format!("invalid generator name {:?}", layer.name)));
        }
        if self.generator_names().contains(&layer.name.as_str()) {
            return Err(Error::Field(format!("generator {} already in the tower", layer.name)));
        }
        let mut layers = self.tower.layers.clone();
        layers.push(layer);
        Ok(FieldDescriptor { tower: Arc::new(Tower::new(self.characteristic(), layers)) })
    }

    pub fn adjoin_transcendental(&self, name: &str) -> Result<FieldDescriptor> {
        self.push_layer(Layer { name: name.to_string(), kind: LayerKind::Transcendental, modulus: Vec::new() })
    }

    /// Adjoins a root of `modulus` (coefficients low to high over this field).
    /// The polynomial is made monic and must be irreducible.
    pub fn adjoin_algebraic(&self, name: &str, modulus: &[Elem]) -> Result<FieldDescriptor> {
        let t = &self.tower;
        let k = self.level();
        let m = t.up_trim(modulus.to_vec());
        if m.len() < 2 {
            return Err(Error::Field("minimal polynomial must have degree at least 1".into()));
        }
        let m = t.up_monic(k, &m);
        match t.is_irreducible(k, &m) {
            Some(true) => {}
            Some(false) => {
                return Err(Error::Field(format!(
                    "minimal polynomial of {name} is reducible over {self}"
                )))
            }
            None => {
                return Err(Error::Field(format!(
                    "cannot verify irreducibility of the degree {} minimal polynomial of {name} over {self}",
                    m.len() - 1
                )))
            }
        }
        self.push_layer(Layer { name: name.to_string(), kind: LayerKind::Algebraic, modulus: m })
    }

    /// Adjoins `r` with `r^q = target`; `target` must not be a p-th power.
    pub fn adjoin_pth_root(&self, name: &str, target: &Elem, q: u64) -> Result<FieldDescriptor> {
        self.adjoin_root_inner(name, target, q, false)
    }

    fn adjoin_root_inner(&self, name: &str, target: &Elem, q: u64, full_layer: bool) -> Result<FieldDescriptor> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::Field("p-th root layers need positive characteristic".into()));
        }
        if q < p || !is_power_of(q, p) {
            return Err(Error::Field(format!("{q} is not a positive power of the characteristic {p}")));
        }
        let t = &self.tower;
        let k = self.level();
        if t.qth_root(k, target, p).is_some() {
            return Err(Error::Field(format!(
                "root layer {name} is degenerate: {} is already a p-th power",
                self.format_elem(target)
            )));
        }
        let mut modulus = vec![t.zero(k); q as usize + 1];
        modulus[0] = t.neg(k, target);
        modulus[q as usize] = t.one(k);
        self.push_layer(Layer {
            name: name.to_string(),
            kind: LayerKind::PthRoot { target: target.clone(), q, full_layer },
            modulus,
        })
    }

    /// `K^(1/q)`: adjoins q-th roots of every generator that is not already a p-th power.
    pub fn adjoin_root_layer(&self, q: u64) -> Result<FieldDescriptor> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::Field("p-th root layers need positive characteristic".into()));
        }
        if q < p || !is_power_of(q, p) {
            return Err(Error::Field(format!("{q} is not a positive power of the characteristic {p}")));
        }
        let names: Vec<String> = self.generator_names().iter().map(|s| s.to_string()).collect();
        let mut field = self.clone();
        for name in names {
            let g = field.generator(&name).unwrap();
            if field.tower.qth_root(field.level(), &g, p).is_some() {
                continue;
            }
            field = field.adjoin_root_inner(&format!("{name}r{q}"), &g, q, true)?;
        }
        Ok(field)
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.tower.layers.iter().map(|l| l.name.as_str()).collect()
    }

    /// A tower generator as an element of this field.
    pub fn generator(&self, name: &str) -> Option<Elem> {
        let idx = self.tower.layers.iter().position(|l| l.name == name)?;
        Some(self.tower.lift(idx + 1, self.level(), self.tower.generator(idx)))
    }

    /// `p_degree`: characteristic and `c = [K:K^p]`, with `c = 1` in characteristic 0.
    pub fn p_degree(&self) -> PDegree {
        PDegree { characteristic: self.characteristic(), c: self.tower.p_degree_at(self.level()) as u64 }
    }

    /// The p-basis of K over K^p (starts with 1). Empty in characteristic 0.
    pub fn p_basis(&self) -> Vec<Elem> {
        if self.characteristic() == 0 {
            return Vec::new();
        }
        self.tower.pbasis(self.level()).basis.clone()
    }

    /// Coordinates `r_i` with `x = Σ r_i^p b_i` over the p-basis.
    pub fn p_coordinates(&self, x: &Elem) -> Vec<Elem> {
        assert!(self.characteristic() > 0);
        self.tower.p_decompose(self.level(), x)
    }

    /// `is_qth_power`: returns `y` with `y^q = x` when one exists.
    pub fn is_qth_power(&self, x: &Elem, q: u64) -> Result<Option<Elem>> {
        self.check_char_power(q)?;
        Ok(self.tower.qth_root(self.level(), x, q))
    }

    pub(crate) fn check_char_power(&self, q: u64) -> Result<()> {
        let p = self.characteristic();
        if q == 1 || (p > 0 && is_power_of(q, p)) {
            Ok(())
        } else {
            Err(Error::NotCharacteristicPower { q, characteristic: p })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tower.level_size(self.level()).is_some()
    }

    pub fn size(&self) -> Option<num_bigint::BigUint> {
        self.tower.level_size(self.level())
    }

    /// All elements of a finite field, in a fixed order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.tower.level_elements(self.level())
    }

    /// Whether this tower extends `sub` (i.e. `sub`'s layers are a prefix).
    pub fn extends(&self, sub: &FieldDescriptor) -> bool {
        self.characteristic() == sub.characteristic()
            && self.tower.layers.len() >= sub.tower.layers.len()
            && self.tower.layers[..sub.tower.layers.len()] == sub.tower.layers[..]
    }

    /// Degree `[self : sub]`, `None` if infinite or not an extension.
    pub fn degree_over(&self, sub: &FieldDescriptor) -> Option<u64> {
        if !self.extends(sub) {
            return None;
        }
        let mut e = 1u64;
        for l in &self.tower.layers[sub.level()..] {
            match l.kind {
                LayerKind::Transcendental => return None,
                _ => e *= (l.modulus.len() - 1) as u64,
            }
        }
        Some(e)
    }

    pub fn embed_from(&self, sub: &FieldDescriptor, x: &Elem) -> Elem {
        debug_assert!(self.extends(sub));
        self.tower.lift(sub.level(), self.level(), x.clone())
    }

    /// Inverse of [`embed_from`](Self::embed_from) when `x` lies in `sub`.
    pub fn restrict_to(&self, sub: &FieldDescriptor, x: &Elem) -> Option<Elem> {
        self.tower.descend(self.level(), sub.level(), x)
    }

    // ---- arithmetic at the top level ----

    pub fn zero(&self) -> Elem {
        self.tower.zero(self.level())
    }
    pub fn one(&self) -> Elem {
        self.tower.one(self.level())
    }
    pub fn is_zero(&self, a: &Elem) -> bool {
        self.tower.is_zero(a)
    }
    pub fn is_one(&self, a: &Elem) -> bool {
        self.tower.is_one(self.level(), a)
    }
    pub fn from_i64(&self, n: i64) -> Elem {
        self.tower.from_i64(self.level(), n)
    }
    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        self.tower.from_bigint(self.level(), n)
    }
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.add(self.level(), a, b)
    }
    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.sub(self.level(), a, b)
    }
    pub fn neg(&self, a: &Elem) -> Elem {
        self.tower.neg(self.level(), a)
    }
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.mul(self.level(), a, b)
    }
    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        self.tower.inv(self.level(), a)
    }
    pub fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        self.tower.div(self.level(), a, b)
    }
    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        self.tower.pow(self.level(), a, e)
    }

    /// Roots in this field of a univariate polynomial (coefficients low to high).
    /// `None` when the question cannot be decided with the available methods.
    pub fn roots(&self, p: &[Elem]) -> Option<Vec<Elem>> {
        self.tower.roots(self.level(), p)
    }

    /// Irreducibility of a univariate polynomial over this field, when decidable.
    pub fn is_irreducible(&self, p: &[Elem]) -> Option<bool> {
        let m = self.tower.up_trim(p.to_vec());
        if m.len() < 2 {
            return Some(false);
        }
        let m = self.tower.up_monic(self.level(), &m);
        self.tower.is_irreducible(self.level(), &m)
    }

    pub(crate) fn solve_linear(&self, a: &[Vec<Elem>], b: &[Elem], ncols: usize) -> Option<Vec<Elem>> {
        self.tower.solve_linear(self.level(), a, b, ncols)
    }

    pub(crate) fn rank(&self, m: &[Vec<Elem>]) -> usize {
        self.tower.rank(self.level(), m)
    }

    pub fn element(&self, value: Elem) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }

    /// Renders an element in the polynomial grammar over the generator names.
    pub fn format_elem(&self, x: &Elem) -> String {
        format_at(&self.tower, self.level(), x)
    }
}

fn format_at(t: &Tower, lvl: usize, x: &Elem) -> String {
    match x {
        Elem::Rat(r) => r.to_string(),
        Elem::Mod(v) => v.to_string(),
        Elem::Frac(n, d) => {
            let name = &t.layers[lvl - 1].name;
            let ns = format_upoly(t, lvl - 1, n, name);
            if d.len() == 1 {
                ns
            } else {
                let ds = format_upoly(t, lvl - 1, d, name);
                let sum = |s: &str| s.char_indices().any(|(i, c)| c == '+' || (c == '-' && i > 0));
                let ns = if sum(&ns) { format!("({ns})") } else { ns };
                let ds = if sum(&ds) || ds.contains(['*', '/']) { format!("({ds})") } else { ds };
                format!("{ns}/{ds}")
            }
        }
        Elem::Alg(c) => format_upoly(t, lvl - 1, c, &t.layers[lvl - 1].name),
    }
}

/// Whether a rendered coefficient needs parentheses when it multiplies something.
pub(crate) fn needs_parens(s: &str) -> bool {
    s.char_indices().any(|(i, c)| c == '+' || c == '/' || (c == '-' && i > 0))
}

pub(crate) fn format_upoly(t: &Tower, k: usize, p: &[Elem], var: &str) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if t.is_zero(c) {
            continue;
        }
        let cs = format_at(t, k, c);
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
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
    out
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tower;
        if t.characteristic == 0 {
            write!(f, "QQ")?;
        } else {
            write!(f, "GF({})", t.characteristic)?;
        }
        let mut i = 0;
        while i < t.layers.len() {
            let layer = &t.layers[i];
            match &layer.kind {
                LayerKind::Transcendental => {
                    let mut names = vec![layer.name.as_str()];
                    while i + 1 < t.layers.len() && t.layers[i + 1].kind == LayerKind::Transcendental {
                        i += 1;
                        names.push(&t.layers[i].name);
                    }
                    write!(f, "({})", names.join(","))?;
                }
                LayerKind::PthRoot { q, full_layer: true, .. } => {
                    while i + 1 < t.layers.len()
                        && matches!(t.layers[i + 1].kind, LayerKind::PthRoot { q: q2, full_layer: true, .. } if q2 == *q)
                    {
                        i += 1;
                    }
                    write!(f, "^(1/{q})")?;
                }
                _ => {
                    let m = format_upoly(t, i, &layer.modulus, &layer.name);
                    write!(f, "[{}]/({m})", layer.name)?;
                }
            }
            i += 1;
        }
        Ok(())
    }
}

/// An element together with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: FieldDescriptor,
    pub value: Elem,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
    pub fn inv(&self) -> Option<FieldElement> {
        Some(self.field.element(self.field.inv(&self.value)?))
    }
    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(&self.value, e))
    }
    pub fn is_qth_power(&self, q: u64) -> Result<Option<FieldElement>> {
        Ok(self.field.is_qth_power(&self.value, q)?.map(|v| self.field.element(v)))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(&self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field)
    }
}

macro_rules! elem_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl std::ops::$tr for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                assert!(self.field == rhs.field, "field mismatch");
                self.field.element(self.field.$op(&self.value, &rhs.value))
            }
        }
    };
}
elem_binop!(Add, add, add);
elem_binop!(Sub, sub, sub);
elem_binop!(Mul, mul, mul);

impl std::ops::Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        assert!(self.field == rhs.field, "field mismatch");
        self.field.element(self.field.div(&self.value, &rhs.value).expect("division by zero"))
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(&self.value))
    }
}

/// `lift_degree_bound`: `e = d · c^k` where `q = p^k` is a characteristic power.
///
/// The prime `p` is read off `q` itself; `q = 1` gives `k = 0`.
pub fn lift_degree_bound(d: u64, q: u64, c: u64) -> Result<u64> {
    let k = if q == 1 {
        0
    } else {
        let p = (2..=q).find(|p| q.is_multiple_of(*p)).unwrap_or(q);
        if q == 0 || !is_power_of(q, p) {
            return Err(Error::NotCharacteristicPower { q, characteristic: p });
        }
        let mut k = 0u32;
        let mut r = q;
        while r > 1 {
            r /= p;
            k += 1;
        }
        k
    };
    if c == 0 {
        return Err(Error::Field("p-degree must be at least 1".into()));
    }
    c.checked_pow(k)
        .and_then(|ck| ck.checked_mul(d))
        .ok_or_else(|| Error::Field("lifting degree bound overflows".into()))
}
