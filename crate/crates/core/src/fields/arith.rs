//! Level-indexed arithmetic on tower elements.
//!
//! An element at level `l` lives in the field obtained from the prime field by
//! adjoining the first `l` layers. Level 0 is the prime field itself.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Elem, LayerKind, Tower};

/// Univariate polynomial over a tower level, coefficients low to high, no trailing zeros.
pub(crate) type UPoly = Vec<Elem>;

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible modulo {p}");
    t.rem_euclid(p as i128) as u64
}

impl Tower {
    pub(crate) fn zero(&self, lvl: usize) -> Elem {
        if lvl == 0 {
            return if self.characteristic == 0 {
                Elem::Rat(BigRational::zero())
            } else {
                Elem::Mod(0)
            };
        }
        match self.layers[lvl - 1].kind {
            LayerKind::Transcendental => Elem::Frac(Vec::new(), vec![self.one(lvl - 1)]),
            _ => Elem::Alg(Vec::new()),
        }
    }

    pub(crate) fn one(&self, lvl: usize) -> Elem {
        let c = self.from_i64(0, 1);
        self.lift(0, lvl, c)
    }

    pub(crate) fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(v) => *v == 0,
            Elem::Frac(n, _) => n.is_empty(),
            Elem::Alg(c) => c.is_empty(),
        }
    }

    pub(crate) fn is_one(&self, lvl: usize, a: &Elem) -> bool {
        *a == self.one(lvl)
    }

    pub(crate) fn from_i64(&self, lvl: usize, n: i64) -> Elem {
        self.from_bigint(lvl, &BigInt::from(n))
    }

    pub(crate) fn from_bigint(&self, lvl: usize, n: &BigInt) -> Elem {
        let base = if self.characteristic == 0 {
            Elem::Rat(BigRational::from_integer(n.clone()))
        } else {
            let p = BigInt::from(self.characteristic);
            Elem::Mod(n.mod_floor(&p).to_u64().expect("residue fits"))
        };
        self.lift(0, lvl, base)
    }

    /// Embeds an element of level `from` into level `to >= from`.
    pub(crate) fn lift(&self, from: usize, to: usize, a: Elem) -> Elem {
        let mut x = a;
        for lvl in from + 1..=to {
            let zero = self.is_zero(&x);
            x = match self.layers[lvl - 1].kind {
                LayerKind::Transcendental => {
                    let one = self.one(lvl - 1);
                    if zero {
                        Elem::Frac(Vec::new(), vec![one])
                    } else {
                        Elem::Frac(vec![x], vec![one])
                    }
                }
                _ => {
                    if zero {
                        Elem::Alg(Vec::new())
                    } else {
                        Elem::Alg(vec![x])
                    }
                }
            };
        }
        x
    }

    /// If `a` at level `from` actually lies in level `to <= from`, returns it there.
    pub(crate) fn descend(&self, from: usize, to: usize, a: &Elem) -> Option<Elem> {
        let mut x = a.clone();
        for lvl in (to + 1..=from).rev() {
            if self.is_zero(&x) {
                return Some(self.zero(to));
            }
            x = match x {
                Elem::Frac(n, d) => {
                    if n.len() == 1 && d.len() == 1 {
                        let di = self.inv(lvl - 1, &d[0])?;
                        self.mul(lvl - 1, &n[0], &di)
                    } else {
                        return None;
                    }
                }
                Elem::Alg(c)
                    if c.len() == 1 => {
                        c.into_iter().next().unwrap()
                    }
                _ => return None,
            };
        }
        Some(x)
    }

    /// Generator of layer `idx`, as an element at level `idx + 1`.
    pub(crate) fn generator(&self, idx: usize) -> Elem {
        let one = self.one(idx);
        let zero = self.zero(idx);
        match self.layers[idx].kind {
            LayerKind::Transcendental => Elem::Frac(vec![zero, one.clone()], vec![one]),
            _ => {
                let g = vec![zero, one];
                self.alg_reduce(idx + 1, g)
            }
        }
    }

    pub(crate) fn add(&self, lvl: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Elem::Mod(x), Elem::Mod(y)) => Elem::Mod((x + y) % self.characteristic),
            (Elem::Alg(x), Elem::Alg(y)) => Elem::Alg(self.up_add(lvl - 1, x, y)),
            (Elem::Frac(n1, d1), Elem::Frac(n2, d2)) => {
                let k = lvl - 1;
                if n1.is_empty() {
                    return b.clone();
                }
                if n2.is_empty() {
                    return a.clone();
                }
                if d1 == d2 {
                    let n = self.up_add(k, n1, n2);
                    return self.frac_normalize(k, n, d1.clone());
                }
                let n = self.up_add(k, &self.up_mul(k, n1, d2), &self.up_mul(k, n2, d1));
                let d = self.up_mul(k, d1, d2);
                self.frac_normalize(k, n, d)
            }
            _ => panic!("mismatched tower levels in addition"),
        }
    }

    pub(crate) fn neg(&self, lvl: usize, a: &Elem) -> Elem {
        match a {
            Elem::Rat(x) => Elem::Rat(-x),
            Elem::Mod(x) => Elem::Mod((self.characteristic - x) % self.characteristic),
            Elem::Alg(x) => Elem::Alg(self.up_neg(lvl - 1, x)),
            Elem::Frac(n, d) => Elem::Frac(self.up_neg(lvl - 1, n), d.clone()),
        }
    }

    pub(crate) fn sub(&self, lvl: usize, a: &Elem, b: &Elem) -> Elem {
        self.add(lvl, a, &self.neg(lvl, b))
    }

    pub(crate) fn mul(&self, lvl: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(x * y % self.characteristic),
            (Elem::Alg(x), Elem::Alg(y)) => {
                let prod = self.up_mul(lvl - 1, x, y);
                self.alg_reduce(lvl, prod)
            }
            (Elem::Frac(n1, d1), Elem::Frac(n2, d2)) => {
                let k = lvl - 1;
                if n1.is_empty() || n2.is_empty() {
                    return self.zero(lvl);
                }
                // cross-cancel before multiplying to keep degrees small
                let g1 = self.up_gcd(k, n1, d2);
                let g2 = self.up_gcd(k, n2, d1);
                let (a1, b2) = (self.up_div_exact(k, n1, &g1), self.up_div_exact(k, d2, &g1));
                let (a2, b1) = (self.up_div_exact(k, n2, &g2), self.up_div_exact(k, d1, &g2));
                let n = self.up_mul(k, &a1, &a2);
                let d = self.up_mul(k, &b1, &b2);
                self.frac_make_monic(k, n, d)
            }
            _ => panic!("mismatched tower levels in multiplication"),
        }
    }

    pub(crate) fn inv(&self, lvl: usize, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match a {
            Elem::Rat(x) => Elem::Rat(x.recip()),
            Elem::Mod(x) => Elem::Mod(mod_inv(*x, self.characteristic)),
            Elem::Frac(n, d) => self.frac_make_monic(lvl - 1, d.clone(), n.clone()),
            Elem::Alg(x) => {
                let k = lvl - 1;
                let m = &self.layers[lvl - 1].modulus;
                let (g, s, _) = self.up_xgcd(k, x, m);
                // g is a nonzero constant because the modulus is irreducible
                assert_eq!(g.len(), 1, "non-invertible algebraic element");
                let gi = self.inv(k, &g[0])?;
                Elem::Alg(self.up_scale(k, &s, &gi))
            }
        })
    }

    pub(crate) fn div(&self, lvl: usize, a: &Elem, b: &Elem) -> Option<Elem> {
        Some(self.mul(lvl, a, &self.inv(lvl, b)?))
    }

    pub(crate) fn pow(&self, lvl: usize, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one(lvl);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(lvl, &acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(lvl, &base, &base);
            }
        }
        acc
    }

    fn alg_reduce(&self, lvl: usize, p: UPoly) -> Elem {
        let m = &self.layers[lvl - 1].modulus;
        if p.len() < m.len() {
            return Elem::Alg(p);
        }
        let (_, r) = self.up_divrem(lvl - 1, &p, m);
        Elem::Alg(r)
    }

    fn frac_normalize(&self, k: usize, n: UPoly, d: UPoly) -> Elem {
        if n.is_empty() {
            return Elem::Frac(Vec::new(), vec![self.one(k)]);
        }
        if d.len() == 1 {
            return self.frac_make_monic(k, n, d);
        }
        let g = self.up_gcd(k, &n, &d);
        if g.len() > 1 {
            let n = self.up_div_exact(k, &n, &g);
            let d = self.up_div_exact(k, &d, &g);
            self.frac_make_monic(k, n, d)
        } else {
            self.frac_make_monic(k, n, d)
        }
    }

    fn frac_make_monic(&self, k: usize, n: UPoly, d: UPoly) -> Elem {
        if n.is_empty() {
            return Elem::Frac(Vec::new(), vec![self.one(k)]);
        }
        let lc = d.last().expect("nonzero denominator");
        if self.is_one(k, lc) {
            return Elem::Frac(n, d);
        }
        let li = self.inv(k, lc).expect("nonzero leading coefficient");
        Elem::Frac(self.up_scale(k, &n, &li), self.up_scale(k, &d, &li))
    }

    // ---- univariate polynomials over a level ----

    pub(crate) fn up_trim(&self, mut p: UPoly) -> UPoly {
        while p.last().is_some_and(|c| self.is_zero(c)) {
            p.pop();
        }
        p
    }

    pub(crate) fn up_add(&self, k: usize, a: &[Elem], b: &[Elem]) -> UPoly {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out: UPoly = long.to_vec();
        for (i, c) in short.iter().enumerate() {
            out[i] = self.add(k, &out[i], c);
        }
        self.up_trim(out)
    }

    pub(crate) fn up_neg(&self, k: usize, a: &[Elem]) -> UPoly {
        a.iter().map(|c| self.neg(k, c)).collect()
    }

    pub(crate) fn up_sub(&self, k: usize, a: &[Elem], b: &[Elem]) -> UPoly {
        self.up_add(k, a, &self.up_neg(k, b))
    }

    pub(crate) fn up_scale(&self, k: usize, a: &[Elem], c: &Elem) -> UPoly {
        if self.is_zero(c) {
            return Vec::new();
        }
        a.iter().map(|x| self.mul(k, x, c)).collect()
    }

    pub(crate) fn up_mul(&self, k: usize, a: &[Elem], b: &[Elem]) -> UPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(k); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                let t = self.mul(k, x, y);
                out[i + j] = self.add(k, &out[i + j], &t);
            }
        }
        self.up_trim(out)
    }

    pub(crate) fn up_divrem(&self, k: usize, a: &[Elem], b: &[Elem]) -> (UPoly, UPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r: UPoly = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lb_inv = self.inv(k, b.last().unwrap()).expect("nonzero leading coefficient");
        let mut q = vec![self.zero(k); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(k, r.last().unwrap(), &lb_inv);
            for (i, y) in b.iter().enumerate() {
                let t = self.mul(k, &c, y);
                r[shift + i] = self.sub(k, &r[shift + i], &t);
            }
            q[shift] = c;
            // leading term cancels exactly
            r.pop();
            r = self.up_trim(r);
        }
        (self.up_trim(q), r)
    }

    pub(crate) fn up_div_exact(&self, k: usize, a: &[Elem], b: &[Elem]) -> UPoly {
        if b.len() == 1 {
            let bi = self.inv(k, &b[0]).expect("nonzero divisor");
            return self.up_scale(k, a, &bi);
        }
        let (q, r) = self.up_divrem(k, a, b);
        debug_assert!(r.is_empty());
        q
    }

    pub(crate) fn up_monic(&self, k: usize, a: &[Elem]) -> UPoly {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let li = self.inv(k, lc).unwrap();
                self.up_scale(k, a, &li)
            }
        }
    }

    /// Monic gcd.
    pub(crate) fn up_gcd(&self, k: usize, a: &[Elem], b: &[Elem]) -> UPoly {
        let mut x: UPoly = a.to_vec();
        let mut y: UPoly = b.to_vec();
        while !y.is_empty() {
            if y.len() == 1 {
                return vec![self.one(k)];
            }
            let (_, r) = self.up_divrem(k, &x, &y);
            x = y;
            y = r;
        }
        self.up_monic(k, &x)
    }

    /// Returns (g, s, t) with s·a + t·b = g (g not normalized).
    pub(crate) fn up_xgcd(&self, k: usize, a: &[Elem], b: &[Elem]) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![self.one(k)], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![self.one(k)]);
        while !r1.is_empty() {
            let (q, r) = self.up_divrem(k, &r0, &r1);
            let s = self.up_sub(k, &s0, &self.up_mul(k, &q, &s1));
            let t = self.up_sub(k, &t0, &self.up_mul(k, &q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub(crate) fn up_eval(&self, k: usize, p: &[Elem], x: &Elem) -> Elem {
        let mut acc = self.zero(k);
        for c in p.iter().rev() {
            acc = self.mul(k, &acc, x);
            acc = self.add(k, &acc, c);
        }
        acc
    }

    pub(crate) fn up_derivative(&self, k: usize, p: &[Elem]) -> UPoly {
        let out = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(k, c, &self.from_i64(k, i as i64)))
            .collect();
        self.up_trim(out)
    }

    /// x^e mod m for univariate polynomials over level k, e arbitrary precision.
    pub(crate) fn up_powmod(&self, k: usize, base: &[Elem], e: &num_bigint::BigUint, m: &[Elem]) -> UPoly {
        let mut acc = vec![self.one(k)];
        let (_, b) = self.up_divrem(k, base, m);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.up_divrem(k, &self.up_mul(k, &acc, &acc), m).1;
            if e.bit(i) {
                acc = self.up_divrem(k, &self.up_mul(k, &acc, &b), m).1;
            }
        }
        acc
    }

    /// Size of the field at level `lvl`, if finite.
    pub(crate) fn level_size(&self, lvl: usize) -> Option<num_bigint::BigUint> {
        if self.characteristic == 0 {
            return None;
        }
        let mut size = num_bigint::BigUint::from(self.characteristic);
        for layer in &self.layers[..lvl] {
            match layer.kind {
                LayerKind::Transcendental => return None,
                _ => size = num_traits::pow(size, layer.modulus.len() - 1),
            }
        }
        Some(size)
    }

    /// All elements of a finite level in canonical enumeration order.
    pub(crate) fn level_elements(&self, lvl: usize) -> Option<Vec<Elem>> {
        self.level_size(lvl)?;
        if lvl == 0 {
            return Some((0..self.characteristic).map(Elem::Mod).collect());
        }
        let below = self.level_elements(lvl - 1)?;
        let deg = self.layers[lvl - 1].modulus.len() - 1;
        let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
        for _ in 0..deg {
            let mut next = Vec::with_capacity(out.len() * below.len());
            for prefix in &out {
                for c in &below {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        Some(out.into_iter().map(|v| Elem::Alg(self.up_trim(v))).collect())
    }

    /// Absolute value bound used when printing rationals; exposed for root search.
    pub(crate) fn rational_of(&self, a: &Elem) -> Option<BigRational> {
        match a {
            Elem::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }
}

pub(crate) fn small_divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    let nf = n.to_u128()?;
    while (d as u128) * (d as u128) <= nf {
        if d > limit {
            return None;
        }
        if nf % d as u128 == 0 {
            out.push(BigInt::from(d));
            let other = nf / d as u128;
            if other != d as u128 {
                out.push(BigInt::from(other));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}
