//! Exact multivariate polynomials over Q and over F_p.
//!
//! Everything here is tiny (degree <= 4 in at most 4 variables plus an
//! occasional pencil parameter), so a plain exponent-vector map is used.

use crate::rat::{addmod, mulmod, submod, ArithError, LocalContext, Rat, Val};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial in `nvars` variables with exact rational coefficients.
/// No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: Rat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exps.to_vec(), c);
        p
    }

    /// The i-th variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        Self::monomial(nvars, &e, Rat::from_integer(1.into()))
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(nvars, &vec![0; nvars], c)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rat::from_integer((-1).into())))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Rat::from_integer(1.into()));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// d/dx_i.
    pub fn diff(&self, i: usize) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.clone() * Rat::from_integer(e[i].into()));
        }
        out
    }

    /// nu(f) = min coefficient valuation; infinity for the zero polynomial.
    pub fn valuation(&self, ctx: &LocalContext) -> Val {
        let mut v = Val::Infinity;
        for c in self.terms.values() {
            v = v.min(ctx.valuation(c));
        }
        v
    }

    /// Coefficient-wise reduction mod p. Errors if any coefficient has
    /// negative valuation.
    pub fn reduce_mod_p(&self, ctx: &LocalContext) -> Result<FpPoly, ArithError> {
        let mut out = FpPoly::zero(self.nvars, ctx.prime());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), ctx.residue(c)?);
        }
        Ok(out)
    }

    /// Substitute x_i -> sum_j M[i][j] x_j (M acts on the variable column
    /// vector; the composition law is substitute(substitute(f,A),B) =
    /// substitute(f, A*B)).
    pub fn substitute_linear(&self, m: &[Vec<Rat>]) -> Result<Self, ArithError> {
        if m.len() != self.nvars || m.iter().any(|row| row.len() != self.nvars) {
            return Err(ArithError::DimensionMismatch {
                expected: self.nvars,
                got: m.len(),
            });
        }
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                let mut img = MultiPoly::zero(self.nvars);
                for (j, c) in m[i].iter().enumerate() {
                    let mut e = vec![0u32; self.nvars];
                    e[j] = 1;
                    img.add_term(e, c.clone());
                }
                img
            })
            .collect();
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(self.nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= point[i].clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute each variable by a polynomial (in a possibly different
    /// variable set).
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let out_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = MultiPoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["x1", "x2", "x3", "x4", "x5", "x6"];
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", crate::rat::rat_string(c))?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*{}", names[i])?;
                } else if k > 1 {
                    write!(f, "*{}^{}", names[i], k)?;
                }
            }
        }
        Ok(())
    }
}

/// Polynomial over F_p, coefficients in [0, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    nvars: usize,
    p: u64,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl FpPoly {
    pub fn zero(nvars: usize, p: u64) -> Self {
        FpPoly {
            nvars,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn monomial(nvars: usize, p: u64, exps: &[u32], c: u64) -> Self {
        let mut out = Self::zero(nvars, p);
        out.add_term(exps.to_vec(), c);
        out
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let cur = self.terms.get(&exps).copied().unwrap_or(0);
        let sum = addmod(cur, c, self.p);
        if sum == 0 {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), submod(0, *c, self.p));
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let mut out = Self::zero(self.nvars, self.p);
        if c == 0 {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), mulmod(*a, c, self.p));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.p);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, mulmod(*c1, *c2, self.p));
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                t = mulmod(t, crate::rat::powmod(point[i] % self.p, k as u64, self.p), self.p);
            }
            acc = addmod(acc, t, self.p);
        }
        acc
    }

    /// Substitute x_i -> sum_j m[i][j] x_j over F_p.
    pub fn substitute_linear(&self, m: &[Vec<u64>]) -> Self {
        let images: Vec<FpPoly> = (0..self.nvars)
            .map(|i| {
                let mut img = FpPoly::zero(self.nvars, self.p);
                for (j, &c) in m[i].iter().enumerate() {
                    let mut e = vec![0u32; self.nvars];
                    e[j] = 1;
                    img.add_term(e, c);
                }
                img
            })
            .collect();
        let mut out = FpPoly::zero(self.nvars, self.p);
        for (e, c) in &self.terms {
            let mut term = FpPoly::monomial(self.nvars, self.p, &vec![0; self.nvars], *c);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Is `other` a scalar multiple of `self` (both nonzero)?
    pub fn proportional(&self, other: &Self) -> Option<u64> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (e0, c0) = self.terms.iter().next().unwrap();
        let d0 = other.terms.get(e0)?;
        let lambda = mulmod(*d0, crate::rat::mod_inverse(*c0, self.p)?, self.p);
        if &self.scale(lambda) == other {
            Some(lambda)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i64};

    fn p2(pairs: &[(&[u32], i64)]) -> MultiPoly {
        let mut f = MultiPoly::zero(2);
        for (e, c) in pairs {
            f.add_term(e.to_vec(), rat_i64(*c));
        }
        f
    }

    #[test]
    fn poly_valuation_examples() {
        let ctx3 = LocalContext::new(3).unwrap();
        // 3x^2 + 9y
        let f = p2(&[(&[2, 0], 3), (&[0, 1], 9)]);
        assert_eq!(f.valuation(&ctx3), Val::Finite(1));

        let ctx5 = LocalContext::new(5).unwrap();
        let g = p2(&[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(g.valuation(&ctx5), Val::Finite(0));

        let ctx7 = LocalContext::new(7).unwrap();
        let h = p2(&[(&[2, 0], 49), (&[1, 1], 49)]);
        assert_eq!(h.valuation(&ctx7), Val::Finite(2));

        assert_eq!(MultiPoly::zero(2).valuation(&ctx7), Val::Infinity);
    }

    #[test]
    fn reduce_mod_p_examples() {
        let ctx5 = LocalContext::new(5).unwrap();
        // x^2 + 5xy + 10y^2 -> x^2
        let f = p2(&[(&[2, 0], 1), (&[1, 1], 5), (&[0, 2], 10)]);
        let fr = f.reduce_mod_p(&ctx5).unwrap();
        assert_eq!(fr, FpPoly::monomial(2, 5, &[2, 0], 1));

        let ctx7 = LocalContext::new(7).unwrap();
        let g = p2(&[(&[3, 0], 7)]);
        assert!(g.reduce_mod_p(&ctx7).unwrap().is_zero());

        // x^2 + (3/2)xz at p=5: 3/2 = 4 mod 5.
        let mut h = MultiPoly::zero(2);
        h.add_term(vec![2, 0], rat_i64(1));
        h.add_term(vec![1, 1], rat(3, 2));
        let hr = h.reduce_mod_p(&ctx5).unwrap();
        assert_eq!(hr.coeff(&[2, 0]), 1);
        assert_eq!(hr.coeff(&[1, 1]), 4);
    }

    #[test]
    fn reduce_mod_p_rejects_nonintegral() {
        let ctx5 = LocalContext::new(5).unwrap();
        let mut h = MultiPoly::zero(2);
        h.add_term(vec![1, 0], rat(1, 5));
        assert!(h.reduce_mod_p(&ctx5).is_err());
    }

    #[test]
    fn substitute_identity_and_swap() {
        let f = p2(&[(&[2, 0], 1)]);
        let id = vec![vec![rat_i64(1), rat_i64(0)], vec![rat_i64(0), rat_i64(1)]];
        assert_eq!(f.substitute_linear(&id).unwrap(), f);

        let xz = p2(&[(&[1, 1], 1)]);
        let swap = vec![vec![rat_i64(0), rat_i64(1)], vec![rat_i64(1), rat_i64(0)]];
        assert_eq!(xz.substitute_linear(&swap).unwrap(), xz);
    }

    #[test]
    fn substitute_shear() {
        // x^2 + z^2 with x -> x, z -> x + z gives 2x^2 + 2xz + z^2.
        let f = p2(&[(&[2, 0], 1), (&[0, 2], 1)]);
        let m = vec![vec![rat_i64(1), rat_i64(0)], vec![rat_i64(1), rat_i64(1)]];
        let g = f.substitute_linear(&m).unwrap();
        let expect = p2(&[(&[2, 0], 2), (&[1, 1], 2), (&[0, 2], 1)]);
        assert_eq!(g, expect);
    }

    #[test]
    fn substitute_composition_law() {
        let f = p2(&[(&[2, 1], 3), (&[0, 2], -1), (&[1, 0], 2)]);
        let a = vec![vec![rat_i64(1), rat_i64(2)], vec![rat_i64(3), rat_i64(-1)]];
        let b = vec![vec![rat_i64(0), rat_i64(1)], vec![rat_i64(1), rat_i64(1)]];
        // A*B
        let mut ab = vec![vec![rat_i64(0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let t = a[i][k].clone() * b[k][j].clone();
                    ab[i][j] = ab[i][j].clone() + t;
                }
            }
        }
        let lhs = f.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
        let rhs = f.substitute_linear(&ab).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_multiplicative() {
        let ctx5 = LocalContext::new(5).unwrap();
        let f = p2(&[(&[2, 0], 3), (&[0, 1], 7)]);
        let g = p2(&[(&[1, 0], 2), (&[0, 2], -4)]);
        let lhs = f.mul(&g).reduce_mod_p(&ctx5).unwrap();
        let rhs = f
            .reduce_mod_p(&ctx5)
            .unwrap()
            .mul(&g.reduce_mod_p(&ctx5).unwrap());
        assert_eq!(lhs, rhs);
    }
}
