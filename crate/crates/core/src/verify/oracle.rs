//! Brute-force strength over GF(2) on bitmask-encoded forms, independent of
//! the strength module: every product g·h is tabulated and the strength is
//! the breadth-first distance from 0 to f in the XOR graph they generate.

use std::collections::VecDeque;

/// Exponent vectors of total degree d in n variables, lex-descending.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A GF(2) form of degree d in n variables as a bitmask over the degree-d
/// monomials, in lex-descending order (x1^d is bit 0).
#[derive(Clone, Debug)]
pub struct Gf2Space {
    pub n: usize,
    pub d: u32,
    monos: Vec<Vec<u32>>,
}

impl Gf2Space {
    pub fn new(n: usize, d: u32) -> Gf2Space {
        let monos = monomials(n, d);
        assert!(monos.len() <= 24, "too many monomials for bitmask search");
        Gf2Space { n, d, monos }
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monos
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    /// Text of the form in the polynomial grammar over x1..xn.
    pub fn render(&self, mask: u32) -> String {
        let terms: Vec<String> = (0..self.dim())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| {
                let m = &self.monos[i];
                let fs: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{e}", j + 1) })
                    .collect();
                fs.join("*")
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Masks of all products g·h with deg g + deg h = d, both nonzero.
    fn products(&self) -> Vec<u32> {
        let idx = |m: &[u32]| self.monos.iter().position(|x| x == m).unwrap();
        let mut seen = vec![false; 1 << self.dim()];
        let mut out = Vec::new();
        for e in 1..=self.d / 2 {
            let (ge, he) = (monomials(self.n, e), monomials(self.n, self.d - e));
            for g in 1u32..1 << ge.len() {
                for h in 1u32..1 << he.len() {
                    let mut v = 0u32;
                    for (_, a) in ge.iter().enumerate().filter(|(i, _)| g >> i & 1 == 1) {
                        for (_, b) in he.iter().enumerate().filter(|(j, _)| h >> j & 1 == 1) {
                            let m: Vec<u32> = a.iter().zip(b).map(|(s, t)| s + t).collect();
                            v ^= 1 << idx(&m);
                        }
                    }
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// Strength of every form, indexed by mask.
    pub fn strength_table(&self) -> Vec<u32> {
        let size = 1usize << self.dim();
        let mut dist = vec![u32::MAX; size];
        let gens = self.products();
        dist[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = (x ^ g) as usize;
                if dist[y] == u32::MAX {
                    dist[y] = dist[x as usize] + 1;
                    queue.push_back(y as u32);
                }
            }
        }
        dist
    }
}
