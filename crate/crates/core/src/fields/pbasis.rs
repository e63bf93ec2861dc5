//! p-bases of tower levels over their subfield of p-th powers.
//!
//! For a level `K` of characteristic `p`, a p-basis is a list `b_0 = 1, b_1, ...`
//! such that every `x` has a unique expression `x = Σ r_i^p · b_i`. The
//! decomposition map returns the coordinates `r_i` (the p-th roots, not their
//! p-th powers), which makes it additive and Frobenius-semilinear.

use super::{Elem, LayerKind, Tower};

#[derive(Debug)]
pub(crate) struct PBasis {
    pub(crate) basis: Vec<Elem>,
    /// For algebraic layers: inverse of the matrix whose columns are the
    /// coordinate vectors of `α^{ip} · β_k`.
    inverse: Option<Vec<Vec<Elem>>>,
}

impl Tower {
    pub(crate) fn pbasis(&self, lvl: usize) -> &PBasis {
        self.pbases[lvl].get_or_init(|| self.build_pbasis(lvl))
    }

    pub(crate) fn p_degree_at(&self, lvl: usize) -> usize {
        if self.characteristic == 0 {
            1
        } else {
            self.pbasis(lvl).basis.len()
        }
    }

    fn build_pbasis(&self, lvl: usize) -> PBasis {
        assert!(self.characteristic > 0, "p-basis requested in characteristic 0");
        if lvl == 0 {
            return PBasis { basis: vec![self.one(0)], inverse: None };
        }
        let k = lvl - 1;
        let p = self.characteristic as usize;
        let lower: Vec<Elem> = self.pbasis(k).basis.clone();
        match self.layers[k].kind {
            LayerKind::Transcendental => {
                let t = self.generator(k);
                let mut basis = Vec::with_capacity(p * lower.len());
                let mut tj = self.one(lvl);
                for _ in 0..p {
                    for b in &lower {
                        let b = self.lift(k, lvl, b.clone());
                        basis.push(self.mul(lvl, &b, &tj));
                    }
                    tj = self.mul(lvl, &tj, &t);
                }
                PBasis { basis, inverse: None }
            }
            _ => {
                let d = self.layers[k].modulus.len() - 1;
                let alpha = self.generator(k);
                let w: Vec<Elem> = (0..d).map(|i| self.pow(lvl, &alpha, (i * p) as u64)).collect();
                let full = d * lower.len();
                let mut echelon: Vec<(usize, Vec<Elem>)> = Vec::new();
                let mut columns: Vec<Vec<Elem>> = Vec::new();
                let mut basis = Vec::new();
                let mut alpha_j = self.one(lvl);
                'outer: for _j in 0..d {
                    for b in &lower {
                        let e = self.mul(lvl, &self.lift(k, lvl, b.clone()), &alpha_j);
                        let vecs: Vec<Vec<Elem>> =
                            w.iter().map(|wi| self.alg_coords(lvl, &self.mul(lvl, wi, &e))).collect();
                        let mut trial = echelon.clone();
                        let independent = vecs.iter().all(|v| self.echelon_insert(k, &mut trial, v.clone()));
                        if independent {
                            echelon = trial;
                            columns.extend(vecs);
                            basis.push(e);
                            if echelon.len() == full {
                                break 'outer;
                            }
                        }
                    }
                    alpha_j = self.mul(lvl, &alpha_j, &alpha);
                }
                assert_eq!(echelon.len(), full, "p-basis construction did not span the level");
                // matrix with the collected vectors as columns
                let m: Vec<Vec<Elem>> =
                    (0..full).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
                let inverse = self.mat_inverse(k, &m).expect("p-basis matrix is invertible");
                PBasis { basis, inverse: Some(inverse) }
            }
        }
    }

    /// Coordinates of an algebraic-layer element in the p-basis of the level below,
    /// concatenated over the powers of the generator.
    fn alg_coords(&self, lvl: usize, x: &Elem) -> Vec<Elem> {
        let k = lvl - 1;
        let d = self.layers[k].modulus.len() - 1;
        let c = self.p_degree_at(k);
        let Elem::Alg(coeffs) = x else { panic!("expected algebraic element") };
        let mut out = Vec::with_capacity(d * c);
        for j in 0..d {
            match coeffs.get(j) {
                Some(cj) => out.extend(self.p_decompose(k, cj)),
                None => out.extend((0..c).map(|_| self.zero(k))),
            }
        }
        out
    }

    /// Coordinates `r_i` with `x = Σ r_i^p b_i` in the p-basis of level `lvl`.
    pub(crate) fn p_decompose(&self, lvl: usize, x: &Elem) -> Vec<Elem> {
        if lvl == 0 {
            return vec![x.clone()];
        }
        let k = lvl - 1;
        let p = self.characteristic as usize;
        let c = self.p_degree_at(k);
        match (&self.layers[k].kind, x) {
            (LayerKind::Transcendental, Elem::Frac(num, den)) => {
                if num.is_empty() {
                    return (0..p * c).map(|_| self.zero(lvl)).collect();
                }
                // x = num·den^{p-1} / den^p
                let mut n = num.clone();
                for _ in 1..p {
                    n = self.up_mul(k, &n, den);
                }
                let decs: Vec<Vec<Elem>> = n.iter().map(|a| self.p_decompose(k, a)).collect();
                let mut out = Vec::with_capacity(p * c);
                for j in 0..p {
                    for beta in 0..c {
                        let poly: Vec<Elem> = decs
                            .iter()
                            .skip(j)
                            .step_by(p)
                            .map(|r| r[beta].clone())
                            .collect();
                        let poly = self.up_trim(poly);
                        let num_elem = Elem::Frac(poly, vec![self.one(k)]);
                        let num_elem = if self.is_zero(&num_elem) { self.zero(lvl) } else { num_elem };
                        let den_elem = Elem::Frac(den.clone(), vec![self.one(k)]);
                        out.push(self.div(lvl, &num_elem, &den_elem).expect("nonzero denominator"));
                    }
                }
                out
            }
            (_, Elem::Alg(_)) => {
                let d = self.layers[k].modulus.len() - 1;
                let pb = self.pbasis(lvl);
                let inv = pb.inverse.as_ref().expect("algebraic p-basis has a matrix");
                let y = self.alg_coords(lvl, x);
                let z = self.mat_vec(k, inv, &y);
                (0..pb.basis.len())
                    .map(|kk| Elem::Alg(self.up_trim(z[kk * d..(kk + 1) * d].to_vec())))
                    .collect()
            }
            _ => panic!("element does not match its tower level"),
        }
    }

    /// Returns `y` with `y^q = x` if one exists. `q` must be a power of the characteristic.
    pub(crate) fn qth_root(&self, lvl: usize, x: &Elem, q: u64) -> Option<Elem> {
        if q == 1 {
            return Some(x.clone());
        }
        let p = self.characteristic;
        let mut cur = x.clone();
        let mut rest = q;
        while rest > 1 {
            let coords = self.p_decompose(lvl, &cur);
            if coords[1..].iter().any(|c| !self.is_zero(c)) {
                return None;
            }
            cur = coords.into_iter().next().unwrap();
            rest /= p;
        }
        Some(cur)
    }
}
