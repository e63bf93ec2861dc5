//! Rational root finding for univariate polynomials over a tower level.
//!
//! Only the cases that can be decided exactly are handled; everything else
//! returns `None` ("undecided") so callers can report bounds honestly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::{small_divisors, UPoly};
use super::{Elem, LayerKind, Tower};

/// Finite fields up to this size are searched exhaustively.
const ENUMERATION_LIMIT: u64 = 1 << 16;
/// Trial division bound for the rational root test over QQ.
const DIVISOR_LIMIT: u64 = 1 << 20;

impl Tower {
    /// Distinct roots of `p` in level `lvl`, sorted; `None` when undecidable.
    pub(crate) fn roots(&self, lvl: usize, p: &[Elem]) -> Option<Vec<Elem>> {
        let p = self.up_trim(p.to_vec());
        assert!(!p.is_empty(), "roots of the zero polynomial");
        let mut out = self.roots_inner(lvl, p)?;
        out.sort();
        out.dedup();
        Some(out)
    }

    fn roots_inner(&self, lvl: usize, mut p: UPoly) -> Option<Vec<Elem>> {
        let mut out = Vec::new();
        if p.len() <= 1 {
            return Some(out);
        }
        if self.is_zero(&p[0]) {
            out.push(self.zero(lvl));
            let first = p.iter().position(|c| !self.is_zero(c)).unwrap();
            p.drain(..first);
        }
        if p.len() <= 1 {
            return Some(out);
        }
        let p = self.up_monic(lvl, &p);
        if p.len() == 2 {
            out.push(self.neg(lvl, &p[0]));
            return Some(out);
        }
        if let Some(size) = self.level_size(lvl) {
            if size <= ENUMERATION_LIMIT.into() {
                let elems = self.level_elements(lvl)?;
                out.extend(elems.into_iter().filter(|x| self.is_zero(&self.up_eval(lvl, &p, x))));
                return Some(out);
            }
        }
        let ch = self.characteristic as usize;
        if ch > 0 && p.iter().enumerate().all(|(i, c)| i % ch == 0 || self.is_zero(c)) {
            // p(X) = P(X^p); Frobenius is injective so each root of P has at most one p-th root
            let reduced: UPoly = p.iter().step_by(ch).cloned().collect();
            for r in self.roots_inner(lvl, reduced)? {
                if let Some(y) = self.qth_root(lvl, &r, ch as u64) {
                    out.push(y);
                }
            }
            return Some(out);
        }
        let dp = self.up_derivative(lvl, &p);
        if !dp.is_empty() {
            let g = self.up_gcd(lvl, &p, &dp);
            if g.len() > 1 {
                let sqfree = self.up_div_exact(lvl, &p, &g);
                out.extend(self.roots_inner(lvl, sqfree)?);
                return Some(out);
            }
        }
        if lvl == 0 && ch == 0 {
            out.extend(self.rational_roots(&p)?);
            return Some(out);
        }
        if p.len() == 3 && ch != 2 {
            // X^2 + bX + c
            let b = &p[1];
            let c = &p[0];
            let four = self.from_i64(lvl, 4);
            let disc = self.sub(lvl, &self.mul(lvl, b, b), &self.mul(lvl, &four, c));
            let half = self.inv(lvl, &self.from_i64(lvl, 2)).unwrap();
            return match self.sqrt(lvl, &disc)? {
                None => Some(out),
                Some(s) => {
                    let nb = self.neg(lvl, b);
                    out.push(self.mul(lvl, &self.add(lvl, &nb, &s), &half));
                    out.push(self.mul(lvl, &self.sub(lvl, &nb, &s), &half));
                    Some(out)
                }
            };
        }
        if matches!(self.layers[lvl - 1].kind, LayerKind::Transcendental) {
            out.extend(self.transcendental_roots(lvl, &p)?);
            return Some(out);
        }
        None
    }

    /// Roots of a monic squarefree polynomial over K(t), level `lvl`.
    ///
    /// Coefficients in K: K is algebraically closed in K(t), so roots lie in K.
    /// Otherwise clear denominators so that roots become polynomials in t of
    /// bounded degree, and enumerate them when K is small enough.
    fn transcendental_roots(&self, lvl: usize, p: &[Elem]) -> Option<Vec<Elem>> {
        let k = lvl - 1;
        let below: Option<UPoly> = p.iter().map(|c| self.descend(lvl, k, c)).collect();
        if let Some(below) = below {
            let r = self.roots_inner(k, below)?;
            return Some(r.into_iter().map(|x| self.lift(k, lvl, x)).collect());
        }
        let n = p.len() - 1;
        let mut d = vec![self.one(k)];
        for c in p {
            if let Elem::Frac(_, den) = c {
                let g = self.up_gcd(k, &d, den);
                d = self.up_div_exact(k, &self.up_mul(k, &d, den), &g);
            }
        }
        let dd = Elem::Frac(d.clone(), vec![self.one(k)]);
        let mut bound = 0usize;
        for (i, c) in p.iter().enumerate().take(n) {
            if self.is_zero(c) {
                continue;
            }
            let ci = self.mul(lvl, c, &self.pow(lvl, &dd, (n - i) as u64));
            let Elem::Frac(num, _) = ci else { unreachable!() };
            bound = bound.max((num.len() - 1) / (n - i));
        }
        let size = self.level_size(k)?;
        let count = num_traits::pow(size, bound + 1);
        if count > ENUMERATION_LIMIT.into() {
            return None;
        }
        let elems = self.level_elements(k)?;
        let mut cands: Vec<UPoly> = vec![Vec::new()];
        for _ in 0..=bound {
            let mut next = Vec::with_capacity(cands.len() * elems.len());
            for prefix in &cands {
                for c in &elems {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    next.push(v);
                }
            }
            cands = next;
        }
        let mut out = Vec::new();
        for y in cands {
            let y = self.up_trim(y);
            let x = self.div(lvl, &Elem::Frac(y, vec![self.one(k)]), &dd).unwrap();
            if self.is_zero(&self.up_eval(lvl, p, &x)) {
                out.push(x);
            }
        }
        Some(out)
    }

    fn rational_roots(&self, p: &[Elem]) -> Option<Vec<Elem>> {
        // clear denominators
        let rats: Vec<BigRational> = p.iter().map(|c| self.rational_of(c).unwrap()).collect();
        let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints.first().unwrap();
        let an = ints.last().unwrap();
        if a0.is_zero() {
            return None;
        }
        let num = small_divisors(a0, DIVISOR_LIMIT)?;
        let den = small_divisors(an, DIVISOR_LIMIT)?;
        let mut out = Vec::new();
        for n in &num {
            for d in &den {
                for sign in [1, -1] {
                    let cand = BigRational::new(n * sign, d.clone());
                    let mut acc = BigRational::zero();
                    for c in rats.iter().rev() {
                        acc = acc * &cand + c;
                    }
                    if acc.is_zero() {
                        out.push(Elem::Rat(cand));
                    }
                }
            }
        }
        Some(out)
    }

    /// Square root. `None` = undecidable, `Some(None)` = not a square.
    pub(crate) fn sqrt(&self, lvl: usize, x: &Elem) -> Option<Option<Elem>> {
        if self.is_zero(x) {
            return Some(Some(self.zero(lvl)));
        }
        if self.characteristic == 2 {
            return Some(self.qth_root(lvl, x, 2));
        }
        if let Some(size) = self.level_size(lvl) {
            if size <= ENUMERATION_LIMIT.into() {
                let elems = self.level_elements(lvl)?;
                return Some(elems.into_iter().find(|y| self.mul(lvl, y, y) == *x));
            }
            return None;
        }
        if lvl == 0 {
            let r = self.rational_of(x).unwrap();
            if r.is_negative() {
                return Some(None);
            }
            let (n, d) = (r.numer(), r.denom());
            let (sn, sd) = (n.sqrt(), d.sqrt());
            return Some((&sn * &sn == *n && &sd * &sd == *d).then(|| Elem::Rat(BigRational::new(sn, sd))));
        }
        let k = lvl - 1;
        match (&self.layers[k].kind, x) {
            (LayerKind::Transcendental, Elem::Frac(n, d)) => {
                let Some(sd) = self.poly_sqrt_monic(k, d)? else { return Some(None) };
                let lc = n.last().unwrap();
                let Some(slc) = self.sqrt(k, lc)? else { return Some(None) };
                let nm = self.up_monic(k, n);
                let Some(sn) = self.poly_sqrt_monic(k, &nm)? else { return Some(None) };
                let sn = self.up_scale(k, &sn, &slc);
                let num = Elem::Frac(sn, vec![self.one(k)]);
                let den = Elem::Frac(sd, vec![self.one(k)]);
                Some(Some(self.div(lvl, &num, &den).unwrap()))
            }
            (LayerKind::Algebraic, Elem::Alg(c)) if self.layers[k].modulus.len() == 3 => self.quadratic_sqrt(lvl, c),
            _ => None,
        }
    }

    /// Square root in a quadratic layer K(a), a² + b·a + c = 0, characteristic ≠ 2.
    /// With δ = 2a + b and D = δ², write x = P + Q·δ; a root u + v·δ has
    /// u² = (P ± √N)/2 where N = P² − D·Q² is the norm.
    fn quadratic_sqrt(&self, lvl: usize, x: &[Elem]) -> Option<Option<Elem>> {
        let k = lvl - 1;
        let m = &self.layers[k].modulus;
        let (b, c) = (&m[1], &m[0]);
        let coeff = |i: usize| x.get(i).cloned().unwrap_or_else(|| self.zero(k));
        let (alpha, beta) = (coeff(0), coeff(1));
        let two = self.from_i64(k, 2);
        let half = self.inv(k, &two).unwrap();
        let d = self.sub(k, &self.mul(k, b, b), &self.mul(k, &self.from_i64(k, 4), c));
        let p = self.sub(k, &alpha, &self.mul(k, &self.mul(k, &beta, b), &half));
        let q = self.mul(k, &beta, &half);
        // u + v·δ back in the basis 1, a
        let assemble = |u: Elem, v: Elem| {
            let c0 = self.add(k, &u, &self.mul(k, &v, b));
            let c1 = self.mul(k, &v, &two);
            Elem::Alg(self.up_trim(vec![c0, c1]))
        };
        if self.is_zero(&q) {
            if let Some(u) = self.sqrt(k, &p)? {
                return Some(Some(assemble(u, self.zero(k))));
            }
            let w = self.div(k, &p, &d).unwrap();
            return Some(self.sqrt(k, &w)?.map(|v| assemble(self.zero(k), v)));
        }
        let norm = self.sub(k, &self.mul(k, &p, &p), &self.mul(k, &d, &self.mul(k, &q, &q)));
        let Some(n) = self.sqrt(k, &norm)? else { return Some(None) };
        for sign in [false, true] {
            let t = if sign { self.sub(k, &p, &n) } else { self.add(k, &p, &n) };
            let u2 = self.mul(k, &t, &half);
            if self.is_zero(&u2) {
                continue;
            }
            if let Some(u) = self.sqrt(k, &u2)? {
                let v = self.div(k, &q, &self.mul(k, &two, &u)).unwrap();
                return Some(Some(assemble(u, v)));
            }
        }
        Some(None)
    }

    /// Square root of a monic polynomial over level `k` (characteristic ≠ 2).
    fn poly_sqrt_monic(&self, k: usize, a: &[Elem]) -> Option<Option<UPoly>> {
        let deg = a.len() - 1;
        if deg % 2 == 1 {
            return Some(None);
        }
        let m = deg / 2;
        let mut s = vec![self.zero(k); m + 1];
        s[m] = self.one(k);
        let two_inv = self.inv(k, &self.from_i64(k, 2)).unwrap();
        for step in 1..=m {
            // coefficient of X^{2m-step} in s^2 determines s[m-step]
            let idx = 2 * m - step;
            let mut acc = a[idx].clone();
            for i in (m - step + 1)..=m {
                let j = idx as isize - i as isize;
                if j > (m - step) as isize && (j as usize) <= m {
                    acc = self.sub(k, &acc, &self.mul(k, &s[i], &s[j as usize]));
                }
            }
            s[m - step] = self.mul(k, &acc, &two_inv);
        }
        let sq = self.up_mul(k, &s, &s);
        Some((sq == self.up_trim(a.to_vec())).then_some(s))
    }

    /// Irreducibility of a monic polynomial of degree ≥ 1 over level `k`.
    /// `None` when it cannot be decided.
    pub(crate) fn is_irreducible(&self, k: usize, m: &[Elem]) -> Option<bool> {
        let deg = m.len() - 1;
        if deg == 1 {
            return Some(true);
        }
        if let Some(size) = self.level_size(k) {
            // distinct-degree test: no factor of degree i <= deg/2
            let x = vec![self.zero(k), self.one(k)];
            let mut h = x.clone();
            for _ in 1..=deg / 2 {
                h = self.up_powmod(k, &h, &size, m);
                let diff = self.up_sub(k, &h, &x);
                if diff.is_empty() || self.up_gcd(k, m, &diff).len() > 1 {
                    return Some(false);
                }
            }
            return Some(true);
        }
        let ch = self.characteristic;
        if ch > 0 {
            // X^q - c with q a power of p is irreducible iff c is not a p-th power
            let interior_zero = m[1..deg].iter().all(|c| self.is_zero(c));
            if interior_zero && is_power_of(deg as u64, ch) {
                let c = self.neg(k, &m[0]);
                return Some(self.qth_root(k, &c, ch).is_none());
            }
        }
        if deg <= 3 {
            return self.roots(k, m).map(|r| r.is_empty());
        }
        None
    }
}

pub(crate) fn is_power_of(mut q: u64, p: u64) -> bool {
    if p < 2 || q == 0 {
        return false;
    }
    while q.is_multiple_of(p) {
        q /= p;
    }
    q == 1
}
