//! The four genus one equation shapes and their transformation groups.
//!
//! Orientation convention, fixed once for the whole crate: `apply(g, phi)`
//! returns the equation satisfied by the primed coordinates, where the
//! primed coordinates are given by the printed substitution formulas.
//! Concretely:
//!
//! * degree 1: x' = u^2 x + r, y' = u^3 y + s u^2 x + t; the result is the
//!   Weierstrass equation satisfied by (x', y').
//! * degree 2: x' = m11 x + m21 z, z' = m12 x + m22 z,
//!   y' = mu^-1 y + r0 x^2 + r1 xz + r2 z^2.
//! * degree 3: the result is mu * F(M v), i.e. x_i is replaced by the i-th
//!   entry of M (x, y, z)^T and the whole cubic is multiplied by mu.
//! * degree 4: the quadric pair is first mixed by M (rows), then each
//!   quadric has x_i replaced by the i-th entry of N (x1..x4)^T.
//!
//! Under this convention the discriminant transforms by det(g)^(-12) for
//! degrees 1 and 2 and by det(g)^(+12) for degrees 3 and 4; the sign is
//! pinned per degree by the equivariance tests.

use crate::mat::{self, Mat};
use crate::poly::MultiPoly;
use crate::rat::{LocalContext, Rat};
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("degree mismatch: transformation degree {0}, equation degree {1}")]
    DegreeMismatch(u8, u8),
    #[error("wrong coefficient count for degree {degree}: expected {expected}, got {got}")]
    CoefficientCount { degree: u8, expected: usize, got: usize },
    #[error("unsupported degree {0}")]
    UnsupportedDegree(u8),
}

/// A genus one equation of degree 1 to 4, coefficients in printed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenusOneEquation {
    /// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6; coefficients
    /// [a1, a2, a3, a4, a6].
    Deg1(Vec<Rat>),
    /// y^2 + (alpha0 x^2 + alpha1 xz + alpha2 z^2) y
    ///   = a x^4 + b x^3 z + c x^2 z^2 + d x z^3 + e z^4;
    /// coefficients [alpha0, alpha1, alpha2, a, b, c, d, e].
    Deg2(Vec<Rat>),
    /// a x^3 + b y^3 + c z^3 + a2 x^2 y + a3 x^2 z + b1 y^2 x + b3 y^2 z
    ///   + c1 z^2 x + c2 z^2 y + m xyz = 0;
    /// coefficients [a, b, c, a2, a3, b1, b3, c1, c2, m].
    Deg3(Vec<Rat>),
    /// Pair of quaternary quadrics, each with coefficients on
    /// x1^2, x1x2, x1x3, x1x4, x2^2, x2x3, x2x4, x3^2, x3x4, x4^2.
    Deg4(Vec<Rat>, Vec<Rat>),
}

pub const DEG4_MONOMIALS: [[u32; 4]; 10] = [
    [2, 0, 0, 0],
    [1, 1, 0, 0],
    [1, 0, 1, 0],
    [1, 0, 0, 1],
    [0, 2, 0, 0],
    [0, 1, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 2, 0],
    [0, 0, 1, 1],
    [0, 0, 0, 2],
];

/// Exponents (x, y, z) of the printed degree-3 coefficient order.
pub const DEG3_MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [0, 3, 0],
    [0, 0, 3],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [0, 2, 1],
    [1, 0, 2],
    [0, 1, 2],
    [1, 1, 1],
];

pub fn coefficient_names(degree: u8) -> &'static [&'static str] {
    match degree {
        1 => &["a1", "a2", "a3", "a4", "a6"],
        2 => &["alpha0", "alpha1", "alpha2", "a", "b", "c", "d", "e"],
        3 => &["a", "b", "c", "a2", "a3", "b1", "b3", "c1", "c2", "m"],
        4 => &[
            "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "b1", "b2", "b3", "b4",
            "b5", "b6", "b7", "b8", "b9", "b10",
        ],
        _ => &[],
    }
}

impl GenusOneEquation {
    pub fn degree(&self) -> u8 {
        match self {
            GenusOneEquation::Deg1(_) => 1,
            GenusOneEquation::Deg2(_) => 2,
            GenusOneEquation::Deg3(_) => 3,
            GenusOneEquation::Deg4(_, _) => 4,
        }
    }

    pub fn from_coeffs(degree: u8, coeffs: Vec<Rat>) -> Result<Self, ModelError> {
        let expected = match degree {
            1 => 5,
            2 => 8,
            3 => 10,
            4 => 20,
            d => return Err(ModelError::UnsupportedDegree(d)),
        };
        if coeffs.len() != expected {
            return Err(ModelError::CoefficientCount {
                degree,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(match degree {
            1 => GenusOneEquation::Deg1(coeffs),
            2 => GenusOneEquation::Deg2(coeffs),
            3 => GenusOneEquation::Deg3(coeffs),
            _ => {
                let (f, g) = coeffs.split_at(10);
                GenusOneEquation::Deg4(f.to_vec(), g.to_vec())
            }
        })
    }

    /// All coefficients, in the printed order (degree 4: F then G).
    pub fn coeffs(&self) -> Vec<Rat> {
        match self {
            GenusOneEquation::Deg1(c) | GenusOneEquation::Deg2(c) | GenusOneEquation::Deg3(c) => {
                c.clone()
            }
            GenusOneEquation::Deg4(f, g) => {
                let mut out = f.clone();
                out.extend(g.iter().cloned());
                out
            }
        }
    }

    /// Degree 1 as the plane curve polynomial
    /// y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6 in variables (x, y).
    pub fn deg1_poly(&self) -> MultiPoly {
        let GenusOneEquation::Deg1(a) = self else {
            panic!("not a degree 1 equation")
        };
        let mut f = MultiPoly::zero(2);
        f.add_term(vec![0, 2], Rat::one());
        f.add_term(vec![1, 1], a[0].clone());
        f.add_term(vec![0, 1], a[2].clone());
        f.add_term(vec![3, 0], -Rat::one());
        f.add_term(vec![2, 0], -a[1].clone());
        f.add_term(vec![1, 0], -a[3].clone());
        f.add_term(vec![0, 0], -a[4].clone());
        f
    }

    /// Degree 2 as (g, f): the quadric multiplying y and the quartic, both
    /// binary forms in (x, z).
    pub fn deg2_parts(&self) -> (MultiPoly, MultiPoly) {
        let GenusOneEquation::Deg2(c) = self else {
            panic!("not a degree 2 equation")
        };
        let mut g = MultiPoly::zero(2);
        g.add_term(vec![2, 0], c[0].clone());
        g.add_term(vec![1, 1], c[1].clone());
        g.add_term(vec![0, 2], c[2].clone());
        let mut f = MultiPoly::zero(2);
        for (i, e) in [[4, 0], [3, 1], [2, 2], [1, 3], [0, 4]].iter().enumerate() {
            f.add_term(vec![e[0], e[1]], c[3 + i].clone());
        }
        (g, f)
    }

    pub fn deg2_from_parts(g: &MultiPoly, f: &MultiPoly) -> Self {
        let mut c = Vec::with_capacity(8);
        c.push(g.coeff(&[2, 0]));
        c.push(g.coeff(&[1, 1]));
        c.push(g.coeff(&[0, 2]));
        for e in [[4, 0], [3, 1], [2, 2], [1, 3], [0, 4]] {
            c.push(f.coeff(&e));
        }
        GenusOneEquation::Deg2(c)
    }

    pub fn deg3_cubic(&self) -> MultiPoly {
        let GenusOneEquation::Deg3(c) = self else {
            panic!("not a degree 3 equation")
        };
        let mut f = MultiPoly::zero(3);
        for (i, e) in DEG3_MONOMIALS.iter().enumerate() {
            f.add_term(e.to_vec(), c[i].clone());
        }
        f
    }

    pub fn deg3_from_cubic(f: &MultiPoly) -> Self {
        let c = DEG3_MONOMIALS.iter().map(|e| f.coeff(e)).collect();
        GenusOneEquation::Deg3(c)
    }

    pub fn deg4_quadrics(&self) -> (MultiPoly, MultiPoly) {
        let GenusOneEquation::Deg4(fa, fb) = self else {
            panic!("not a degree 4 equation")
        };
        let build = |c: &[Rat]| {
            let mut q = MultiPoly::zero(4);
            for (i, e) in DEG4_MONOMIALS.iter().enumerate() {
                q.add_term(e.to_vec(), c[i].clone());
            }
            q
        };
        (build(fa), build(fb))
    }

    pub fn deg4_from_quadrics(f: &MultiPoly, g: &MultiPoly) -> Self {
        let extract = |q: &MultiPoly| DEG4_MONOMIALS.iter().map(|e| q.coeff(e)).collect();
        GenusOneEquation::Deg4(extract(f), extract(g))
    }

    /// Integrality check; with a local context, coefficients must have
    /// nonnegative p-adic valuation, otherwise they must be integers.
    pub fn integrality(&self, ctx: Option<&LocalContext>) -> IntegralityReport {
        let names = coefficient_names(self.degree());
        let mut offending = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            let ok = match ctx {
                Some(ctx) => ctx.valuation(c).is_nonneg(),
                None => c.denom().is_one(),
            };
            if !ok {
                offending.push(names[i].to_string());
            }
        }
        IntegralityReport {
            is_integral: offending.is_empty(),
            offending,
        }
    }

    pub fn is_integral_at(&self, ctx: &LocalContext) -> bool {
        self.integrality(Some(ctx)).is_integral
    }

    pub fn is_integral_global(&self) -> bool {
        self.integrality(None).is_integral
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityReport {
    pub is_integral: bool,
    pub offending: Vec<String>,
}

/// Equivalence transformation, tagged by the degree it acts on.
#[derive(Debug, Clone, PartialEq)]
pub enum Transformation {
    /// [u; r, s, t] with u != 0; det = u^-1.
    T1 { u: Rat, r: Rat, s: Rat, t: Rat },
    /// [mu, (r0, r1, r2), M] with mu != 0, M in GL2; det = mu det M.
    T2 { mu: Rat, r: [Rat; 3], m: Mat },
    /// [mu, M] with mu != 0, M in GL3; det = mu det M.
    T3 { mu: Rat, m: Mat },
    /// [M, N] with M in GL2, N in GL4; det = det M det N.
    T4 { m: Mat, n: Mat },
}

impl Transformation {
    pub fn degree(&self) -> u8 {
        match self {
            Transformation::T1 { .. } => 1,
            Transformation::T2 { .. } => 2,
            Transformation::T3 { .. } => 3,
            Transformation::T4 { .. } => 4,
        }
    }

    pub fn identity(degree: u8) -> Self {
        match degree {
            1 => Transformation::T1 {
                u: Rat::one(),
                r: Rat::zero(),
                s: Rat::zero(),
                t: Rat::zero(),
            },
            2 => Transformation::T2 {
                mu: Rat::one(),
                r: [Rat::zero(), Rat::zero(), Rat::zero()],
                m: mat::identity(2),
            },
            3 => Transformation::T3 {
                mu: Rat::one(),
                m: mat::identity(3),
            },
            4 => Transformation::T4 {
                m: mat::identity(2),
                n: mat::identity(4),
            },
            d => panic!("unsupported degree {d}"),
        }
    }

    /// The determinant character of the equivalence group.
    pub fn det(&self) -> Rat {
        match self {
            Transformation::T1 { u, .. } => Rat::one() / u.clone(),
            Transformation::T2 { mu, m, .. } => mu.clone() * mat::det(m),
            Transformation::T3 { mu, m } => mu.clone() * mat::det(m),
            Transformation::T4 { m, n } => mat::det(m) * mat::det(n),
        }
    }

    pub fn apply(&self, phi: &GenusOneEquation) -> Result<GenusOneEquation, ModelError> {
        if self.degree() != phi.degree() {
            return Err(ModelError::DegreeMismatch(self.degree(), phi.degree()));
        }
        Ok(match (self, phi) {
            (Transformation::T1 { u, r, s, t }, GenusOneEquation::Deg1(_)) => {
                apply_t1(u, r, s, t, phi)
            }
            (Transformation::T2 { mu, r, m }, GenusOneEquation::Deg2(_)) => {
                apply_t2(mu, r, m, phi)
            }
            (Transformation::T3 { mu, m }, GenusOneEquation::Deg3(_)) => {
                let cubic = phi.deg3_cubic();
                let out = cubic.substitute_linear(m).unwrap().scale(mu);
                GenusOneEquation::deg3_from_cubic(&out)
            }
            (Transformation::T4 { m, n }, GenusOneEquation::Deg4(_, _)) => {
                let (f, g) = phi.deg4_quadrics();
                let mixed1 = f.scale(&m[0][0]).add(&g.scale(&m[0][1]));
                let mixed2 = f.scale(&m[1][0]).add(&g.scale(&m[1][1]));
                let f2 = mixed1.substitute_linear(n).unwrap();
                let g2 = mixed2.substitute_linear(n).unwrap();
                GenusOneEquation::deg4_from_quadrics(&f2, &g2)
            }
            _ => unreachable!(),
        })
    }

    /// Group law: apply(compose(g, h), phi) = apply(g, apply(h, phi)).
    pub fn compose(&self, other: &Transformation) -> Result<Transformation, ModelError> {
        if self.degree() != other.degree() {
            return Err(ModelError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(match (self, other) {
            (
                Transformation::T1 { u: u1, r: r1, s: s1, t: t1 },
                Transformation::T1 { u: u2, r: r2, s: s2, t: t2 },
            ) => Transformation::T1 {
                u: u1.clone() * u2.clone(),
                r: u1.clone() * u1.clone() * r2.clone() + r1.clone(),
                s: u1.clone() * s2.clone() + s1.clone(),
                t: u1.clone() * u1.clone() * u1.clone() * t2.clone()
                    + s1.clone() * u1.clone() * u1.clone() * r2.clone()
                    + t1.clone(),
            },
            (
                Transformation::T2 { mu: mu1, r: r1, m: m1 },
                Transformation::T2 { mu: mu2, r: r2, m: m2 },
            ) => {
                // R = mu1^-1 R2 + R1 o M2^T.
                let r1p = quadric_from_triple(r1);
                let r2p = quadric_from_triple(r2);
                let m2t = mat::transpose(m2);
                let mixed = r2p
                    .scale(&(Rat::one() / mu1.clone()))
                    .add(&r1p.substitute_linear(&m2t).unwrap());
                Transformation::T2 {
                    mu: mu1.clone() * mu2.clone(),
                    r: triple_from_quadric(&mixed),
                    m: mat::mat_mul(m2, m1),
                }
            }
            (
                Transformation::T3 { mu: mu1, m: m1 },
                Transformation::T3 { mu: mu2, m: m2 },
            ) => Transformation::T3 {
                mu: mu1.clone() * mu2.clone(),
                m: mat::mat_mul(m2, m1),
            },
            (
                Transformation::T4 { m: m1, n: n1 },
                Transformation::T4 { m: m2, n: n2 },
            ) => Transformation::T4 {
                m: mat::mat_mul(m1, m2),
                n: mat::mat_mul(n2, n1),
            },
            _ => unreachable!(),
        })
    }

    pub fn inverse(&self) -> Transformation {
        match self {
            Transformation::T1 { u, r, s, t } => {
                let u3 = u.clone() * u.clone() * u.clone();
                Transformation::T1 {
                    u: Rat::one() / u.clone(),
                    r: -r.clone() / (u.clone() * u.clone()),
                    s: -s.clone() / u.clone(),
                    t: (s.clone() * r.clone() - t.clone()) / u3,
                }
            }
            Transformation::T2 { mu, r, m } => {
                let minv = mat::inverse(m).expect("T2 matrix invertible");
                let tau = mat::inverse(&mat::transpose(m)).expect("T2 matrix invertible");
                let rp = quadric_from_triple(r)
                    .substitute_linear(&tau)
                    .unwrap()
                    .scale(&(-mu.clone()));
                Transformation::T2 {
                    mu: Rat::one() / mu.clone(),
                    r: triple_from_quadric(&rp),
                    m: minv,
                }
            }
            Transformation::T3 { mu, m } => Transformation::T3 {
                mu: Rat::one() / mu.clone(),
                m: mat::inverse(m).expect("T3 matrix invertible"),
            },
            Transformation::T4 { m, n } => Transformation::T4 {
                m: mat::inverse(m).expect("T4 mixing matrix invertible"),
                n: mat::inverse(n).expect("T4 coordinate matrix invertible"),
            },
        }
    }

    /// Integral entries (p-locally or globally, as for equations).
    pub fn is_integral(&self, ctx: Option<&LocalContext>) -> bool {
        let ok = |x: &Rat| match ctx {
            Some(ctx) => ctx.valuation(x).is_nonneg(),
            None => x.denom().is_one(),
        };
        match self {
            Transformation::T1 { u, r, s, t } => [u, r, s, t].iter().all(|x| ok(x)),
            Transformation::T2 { mu, r, m } => {
                ok(mu) && r.iter().all(&ok) && m.iter().flatten().all(&ok)
            }
            Transformation::T3 { mu, m } => ok(mu) && m.iter().flatten().all(&ok),
            Transformation::T4 { m, n } => {
                m.iter().flatten().all(&ok) && n.iter().flatten().all(&ok)
            }
        }
    }
}

fn quadric_from_triple(r: &[Rat; 3]) -> MultiPoly {
    let mut q = MultiPoly::zero(2);
    q.add_term(vec![2, 0], r[0].clone());
    q.add_term(vec![1, 1], r[1].clone());
    q.add_term(vec![0, 2], r[2].clone());
    q
}

fn triple_from_quadric(q: &MultiPoly) -> [Rat; 3] {
    [q.coeff(&[2, 0]), q.coeff(&[1, 1]), q.coeff(&[0, 2])]
}

fn apply_t1(u: &Rat, r: &Rat, s: &Rat, t: &Rat, phi: &GenusOneEquation) -> GenusOneEquation {
    // Substitute x = (x' - r)/u^2, y = (y' - s(x' - r) - t)/u^3 into the
    // plane curve polynomial and rescale by u^6.
    let f = phi.deg1_poly();
    let u2 = u.clone() * u.clone();
    let u3 = u2.clone() * u.clone();
    let u6 = u3.clone() * u3.clone();
    let mut ximg = MultiPoly::zero(2);
    ximg.add_term(vec![1, 0], Rat::one() / u2.clone());
    ximg.add_term(vec![0, 0], -r.clone() / u2.clone());
    let mut yimg = MultiPoly::zero(2);
    yimg.add_term(vec![0, 1], Rat::one() / u3.clone());
    yimg.add_term(vec![1, 0], -s.clone() / u3.clone());
    yimg.add_term(vec![0, 0], (s.clone() * r.clone() - t.clone()) / u3);
    let out = f.compose(&[ximg, yimg]).scale(&u6);
    // out = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6.
    debug_assert_eq!(out.coeff(&[0, 2]), Rat::one());
    debug_assert_eq!(out.coeff(&[3, 0]), -Rat::one());
    GenusOneEquation::Deg1(vec![
        out.coeff(&[1, 1]),
        -out.coeff(&[2, 0]),
        out.coeff(&[0, 1]),
        -out.coeff(&[1, 0]),
        -out.coeff(&[0, 0]),
    ])
}

fn apply_t2(mu: &Rat, r: &[Rat; 3], m: &Mat, phi: &GenusOneEquation) -> GenusOneEquation {
    // g' = mu^-1 g o tau - 2 R o tau,
    // f' = mu^-2 f o tau + mu^-1 (g o tau)(R o tau) - (R o tau)^2,
    // where tau = (M^T)^-1 expresses the old (x, z) in the new coordinates.
    let (g, f) = phi.deg2_parts();
    let tau = mat::inverse(&mat::transpose(m)).expect("T2 matrix invertible");
    let gt = g.substitute_linear(&tau).unwrap();
    let ft = f.substitute_linear(&tau).unwrap();
    let rt = quadric_from_triple(r).substitute_linear(&tau).unwrap();
    let mu_inv = Rat::one() / mu.clone();
    let two = Rat::from_integer(2.into());
    let gp = gt.scale(&mu_inv).sub(&rt.scale(&two));
    let fp = ft
        .scale(&(mu_inv.clone() * mu_inv.clone()))
        .add(&gt.mul(&rt).scale(&mu_inv))
        .sub(&rt.mul(&rt));
    GenusOneEquation::deg2_from_parts(&gp, &fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i64};

    fn sample_deg3() -> GenusOneEquation {
        GenusOneEquation::from_coeffs(
            3,
            [1, -2, 3, 0, 5, -1, 2, 4, -3, 7].iter().map(|&n| rat_i64(n)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_fixes_equations() {
        let phi = sample_deg3();
        let id = Transformation::identity(3);
        assert_eq!(id.apply(&phi).unwrap(), phi);

        let phi2 = GenusOneEquation::from_coeffs(
            2,
            [1, 0, -2, 3, 1, 0, -1, 2].iter().map(|&n| rat_i64(n)).collect(),
        )
        .unwrap();
        let id2 = Transformation::identity(2);
        assert_eq!(id2.apply(&phi2).unwrap(), phi2);
    }

    #[test]
    fn det_examples() {
        // T1 with u = 1/p: det = p.
        let g = Transformation::T1 {
            u: rat(1, 5),
            r: Rat::zero(),
            s: Rat::zero(),
            t: Rat::zero(),
        };
        assert_eq!(g.det(), rat_i64(5));

        assert_eq!(Transformation::identity(4).det(), rat_i64(1));

        // T2 with mu = p^-2, M = diag(p^2, p): det = p.
        let g = Transformation::T2 {
            mu: rat(1, 49),
            r: [Rat::zero(), Rat::zero(), Rat::zero()],
            m: vec![vec![rat_i64(49), rat_i64(0)], vec![rat_i64(0), rat_i64(7)]],
        };
        assert_eq!(g.det(), rat_i64(7));
    }

    #[test]
    fn t3_scaling_matches_printed_move() {
        // [mu = 1/t^2, M = diag(1, t, 1)] sends F to (1/t^2) F(x, ty, z).
        let phi = sample_deg3();
        let t = rat_i64(5);
        let g = Transformation::T3 {
            mu: rat(1, 25),
            m: vec![
                vec![rat_i64(1), Rat::zero(), Rat::zero()],
                vec![Rat::zero(), t.clone(), Rat::zero()],
                vec![Rat::zero(), Rat::zero(), rat_i64(1)],
            ],
        };
        let out = g.apply(&phi).unwrap();
        let cubic = phi.deg3_cubic();
        let scaled = cubic
            .substitute_linear(&vec![
                vec![rat_i64(1), Rat::zero(), Rat::zero()],
                vec![Rat::zero(), rat_i64(5), Rat::zero()],
                vec![Rat::zero(), Rat::zero(), rat_i64(1)],
            ])
            .unwrap()
            .scale(&rat(1, 25));
        assert_eq!(out, GenusOneEquation::deg3_from_cubic(&scaled));
    }

    #[test]
    fn t2_mu_scaling_matches_printed_move() {
        // [mu = p, M = I, r = 0] sends (g, f) to (g/p, f/p^2).
        let phi = GenusOneEquation::from_coeffs(
            2,
            [5, 10, 0, 25, 50, 0, 75, 100].iter().map(|&n| rat_i64(n)).collect(),
        )
        .unwrap();
        let g = Transformation::T2 {
            mu: rat_i64(5),
            r: [Rat::zero(), Rat::zero(), Rat::zero()],
            m: mat::identity(2),
        };
        let out = g.apply(&phi).unwrap();
        let expect = GenusOneEquation::from_coeffs(
            2,
            vec![
                rat_i64(1),
                rat_i64(2),
                rat_i64(0),
                rat_i64(1),
                rat_i64(2),
                rat_i64(0),
                rat_i64(3),
                rat_i64(4),
            ],
        )
        .unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn degree_mismatch_rejected() {
        let phi = sample_deg3();
        let g = Transformation::identity(2);
        assert!(g.apply(&phi).is_err());
    }

    #[test]
    fn integrality_examples() {
        let ctx5 = LocalContext::new(5).unwrap();
        let mut coeffs: Vec<Rat> = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10].iter().map(|&n| rat_i64(n)).collect();
        let phi = GenusOneEquation::from_coeffs(3, coeffs.clone()).unwrap();
        assert!(phi.is_integral_at(&ctx5));

        coeffs[5] = rat(1, 5); // b1 = 1/p
        let phi = GenusOneEquation::from_coeffs(3, coeffs).unwrap();
        let rep = phi.integrality(Some(&ctx5));
        assert!(!rep.is_integral);
        assert_eq!(rep.offending, vec!["b1".to_string()]);

        // Deg4 with a10 = 3/2 is integral at p = 5.
        let mut c: Vec<Rat> = (0..20).map(|_| rat_i64(1)).collect();
        c[9] = rat(3, 2);
        let phi = GenusOneEquation::from_coeffs(4, c).unwrap();
        assert!(phi.is_integral_at(&ctx5));
        assert!(!phi.is_integral_global());
    }
}
