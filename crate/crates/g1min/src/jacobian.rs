//! The Jacobian elliptic curve, its minimal discriminant (locally and over
//! Q) and the level of a genus one equation.
//!
//! Minimal discriminant valuations are computed by the Laska-Kraus-Connell
//! scan: strip u = p^k from (c4, c6) subject to Kraus's existence
//! conditions at p = 2, 3; for p >= 5 the valuation bound alone decides.

use crate::invariants::{invariants, InvariantError, Invariants};
use crate::models::GenusOneEquation;
use crate::rat::{rat_i64, LocalContext, Rat, Val};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, thiserror::Error)]
pub enum JacobianError {
    #[error("singular input: c4^3 = c6^2")]
    SingularInput,
    #[error("equation is not integral at p={0}")]
    NotIntegral(u64),
    #[error("level at p={p} is not a nonnegative integer: nu(delta)={nu_delta}, nu(delta_min)={nu_min}")]
    NonIntegralLevel { p: u64, nu_delta: i64, nu_min: i64 },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// The Jacobian model together with the u-scaling relating its invariants
/// to the requested pair: invariants(curve) = (u^4 c4, u^6 c6).
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian {
    pub curve: GenusOneEquation,
    pub u: Rat,
}

/// A Weierstrass model for the given invariants. The exact-invariant model
/// is y^2 = x^3 - (c4/48)x - (c6/864); when that is not integral the
/// smallest integral u-multiple is returned, with u recorded.
pub fn jacobian(c4: &Rat, c6: &Rat) -> Result<Jacobian, JacobianError> {
    if (c4.clone() * c4.clone() * c4.clone() - c6.clone() * c6.clone()).is_zero() {
        return Err(JacobianError::SingularInput);
    }
    // u = 6 * lcm of denominators always works, so the scan terminates.
    let cap = BigInt::from(6) * c4.denom().lcm(c6.denom());
    let mut u = BigInt::one();
    loop {
        let ur = Rat::from_integer(u.clone());
        let u4 = ur.clone() * ur.clone() * ur.clone() * ur.clone();
        let u6 = u4.clone() * ur.clone() * ur.clone();
        let a = -u4 * c4.clone() / rat_i64(48);
        let b = -u6 * c6.clone() / rat_i64(864);
        if a.denom().is_one() && b.denom().is_one() {
            return Ok(Jacobian {
                curve: GenusOneEquation::Deg1(vec![
                    Rat::zero(),
                    Rat::zero(),
                    Rat::zero(),
                    a,
                    b,
                ]),
                u: ur,
            });
        }
        assert!(u < cap, "scan is bounded by 6*lcm of denominators");
        u += 1;
    }
}

/// Residue of a rational with denominator coprime to m, in [0, m).
fn residue_mod(x: &Rat, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let n = x.numer().mod_floor(&m_big);
    let d = x.denom().mod_floor(&m_big);
    let e = d.extended_gcd(&m_big);
    assert!(e.gcd.is_one(), "denominator must be a unit mod m");
    let inv = e.x.mod_floor(&m_big);
    (n * inv).mod_floor(&m_big).to_u64().unwrap()
}

/// Kraus's existence conditions for an integral Weierstrass model with the
/// given p-integral invariants; always true for p >= 5.
fn kraus_admissible(c4: &Rat, c6: &Rat, ctx: &LocalContext) -> bool {
    match ctx.prime() {
        2 => {
            residue_mod(c6, 4) == 3
                || (residue_mod(c4, 16) == 0 && matches!(residue_mod(c6, 32), 0 | 8))
        }
        3 => ctx.valuation(c6) != Val::Finite(2),
        _ => true,
    }
}

/// nu_p of the minimal discriminant, from invariants alone.
pub(crate) fn lkc_local(inv: &Invariants, ctx: &LocalContext) -> Result<i64, JacobianError> {
    if inv.delta.is_zero() {
        return Err(JacobianError::SingularInput);
    }
    let vd = ctx
        .valuation(&inv.delta)
        .finite()
        .expect("nonzero discriminant");
    let mut kmax = vd / 12;
    if let Val::Finite(v) = ctx.valuation(&inv.c4) {
        kmax = kmax.min(v / 4);
    }
    if let Val::Finite(v) = ctx.valuation(&inv.c6) {
        kmax = kmax.min(v / 6);
    }
    let p4 = Rat::from_integer(BigInt::from(ctx.prime()).pow(4));
    let p6 = Rat::from_integer(BigInt::from(ctx.prime()).pow(6));
    let mut k = kmax.max(0);
    while k > 0 {
        let mut c4s = inv.c4.clone();
        let mut c6s = inv.c6.clone();
        for _ in 0..k {
            c4s = c4s / p4.clone();
            c6s = c6s / p6.clone();
        }
        if kraus_admissible(&c4s, &c6s, ctx) {
            break;
        }
        k -= 1;
    }
    Ok(vd - 12 * k)
}

pub fn minimal_discriminant_local(
    e: &GenusOneEquation,
    ctx: &LocalContext,
) -> Result<i64, JacobianError> {
    if !e.is_integral_at(ctx) {
        return Err(JacobianError::NotIntegral(ctx.prime()));
    }
    let inv = invariants(e)?;
    lkc_local(&inv, ctx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalDiscriminantReport {
    pub delta_min: Rat,
    /// (p, nu_p(delta_min), k) where u = p^k is the scaling used at p.
    pub per_prime: Vec<(u64, i64, i64)>,
}

/// Primes p with p^12 dividing n can only be <= |n|^(1/12); scan those.
pub(crate) fn twelfth_power_primes(n: &BigInt) -> Vec<u64> {
    let bound = n.abs().nth_root(12).to_u64().unwrap_or(u64::MAX).max(3);
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= bound {
        if LocalContext::new(p).is_ok() {
            out.push(p);
        }
        p += 1;
    }
    out
}

pub fn minimal_discriminant_global(
    e: &GenusOneEquation,
) -> Result<MinimalDiscriminantReport, JacobianError> {
    if !e.is_integral_global() {
        return Err(JacobianError::NotIntegral(0));
    }
    let inv = invariants(e)?;
    if inv.delta.is_zero() {
        return Err(JacobianError::SingularInput);
    }
    let mut delta_min = inv.delta.clone();
    let mut per_prime = Vec::new();
    for p in twelfth_power_primes(inv.delta.numer()) {
        let ctx = LocalContext::new(p).unwrap();
        let vd = ctx.valuation(&inv.delta).finite().unwrap();
        if vd < 12 {
            continue;
        }
        let vmin = lkc_local(&inv, &ctx)?;
        let k = (vd - vmin) / 12;
        if k > 0 {
            let p12 = Rat::from_integer(BigInt::from(p).pow(12));
            for _ in 0..k {
                delta_min = delta_min / p12.clone();
            }
        }
        per_prime.push((p, vmin, k));
    }
    Ok(MinimalDiscriminantReport {
        delta_min,
        per_prime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub value: u64,
    pub prime: u64,
}

/// The level of a genus one equation at p:
/// (nu_p(delta_phi) - nu_p(delta_min of the Jacobian)) / 12.
pub fn level(phi: &GenusOneEquation, ctx: &LocalContext) -> Result<Level, JacobianError> {
    if !phi.is_integral_at(ctx) {
        return Err(JacobianError::NotIntegral(ctx.prime()));
    }
    let inv = invariants(phi)?;
    if inv.delta.is_zero() {
        return Err(JacobianError::SingularInput);
    }
    let nu_delta = ctx.valuation(&inv.delta).finite().unwrap();
    let nu_min = lkc_local(&inv, ctx)?;
    let diff = nu_delta - nu_min;
    if diff < 0 || diff % 12 != 0 {
        return Err(JacobianError::NonIntegralLevel {
            p: ctx.prime(),
            nu_delta,
            nu_min,
        });
    }
    Ok(Level {
        value: (diff / 12) as u64,
        prime: ctx.prime(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::standard_embedding;
    use crate::models::Transformation;
    use crate::rat::rat;

    fn curve(a: i64, b: i64) -> GenusOneEquation {
        standard_embedding(1, &rat_i64(a), &rat_i64(b))
    }

    #[test]
    fn jacobian_examples() {
        // (0, -864): same invariants as y^2 = x^3 + 1.
        let j = jacobian(&rat_i64(0), &rat_i64(-864)).unwrap();
        let inv = invariants(&j.curve).unwrap();
        let u4 = j.u.clone().pow(4);
        let u6 = j.u.clone().pow(6);
        assert_eq!(inv.c4, u4 * rat_i64(0));
        assert_eq!(inv.c6, u6 * rat_i64(-864));

        // (-48, -864): invariants of y^2 = x^3 + x + 1.
        let j = jacobian(&rat_i64(-48), &rat_i64(-864)).unwrap();
        let inv = invariants(&j.curve).unwrap();
        let w = invariants(&curve(1, 1)).unwrap();
        assert_eq!(inv.c4, j.u.clone().pow(4) * w.c4);
        assert_eq!(inv.c6, j.u.clone().pow(6) * w.c6);

        assert!(jacobian(&rat_i64(0), &rat_i64(0)).is_err());
    }

    #[test]
    fn jacobian_delta_matches_syzygy() {
        // Delta of the exact-invariant Jacobian equals delta of phi.
        let phi = standard_embedding(3, &rat_i64(2), &rat_i64(-3));
        let inv = invariants(&phi).unwrap();
        let j = jacobian(&inv.c4, &inv.c6).unwrap();
        let jd = invariants(&j.curve).unwrap().delta;
        assert_eq!(jd, j.u.pow(12) * inv.delta);
    }

    #[test]
    fn minimal_discriminant_small_curve() {
        // y^2 = x^3 + 1: delta = -432 = -2^4 3^3, minimal at every prime.
        let e = curve(0, 1);
        for p in [2u64, 3, 5, 7] {
            let ctx = LocalContext::new(p).unwrap();
            let want = ctx.valuation(&rat_i64(-432)).finite().unwrap();
            assert_eq!(minimal_discriminant_local(&e, &ctx).unwrap(), want);
        }
        let rep = minimal_discriminant_global(&e).unwrap();
        assert_eq!(rep.delta_min, rat_i64(-432));
    }

    #[test]
    fn scaled_curve_drops_at_2_and_3() {
        // y^2 = x^3 + 2^6 3^6: the u = 6 scaling of y^2 = x^3 + 1.
        let e = curve(0, 46656);
        let rep = minimal_discriminant_global(&e).unwrap();
        assert_eq!(rep.delta_min, rat_i64(-432));
        assert!(rep.per_prime.contains(&(2, 4, 1)));
        assert!(rep.per_prime.contains(&(3, 3, 1)));
    }

    #[test]
    fn p_power_sixth_drops() {
        // y^2 = x^3 + p^6 at p >= 5: nu_p(delta) = 12, minimal is 0.
        for p in [5u64, 7, 13] {
            let b = (p as i64).pow(6);
            let ctx = LocalContext::new(p).unwrap();
            assert_eq!(minimal_discriminant_local(&curve(0, b), &ctx).unwrap(), 0);
        }
    }

    #[test]
    fn small_valuation_already_minimal() {
        // y^2 = x^3 + px at p >= 5: delta = -64p^3, already minimal.
        for p in [5i64, 11] {
            let e = curve(p, 0);
            let inv = invariants(&e).unwrap();
            assert_eq!(inv.delta, rat_i64(-64 * p * p * p));
            let ctx = LocalContext::new(p as u64).unwrap();
            assert_eq!(minimal_discriminant_local(&e, &ctx).unwrap(), 3);
        }
    }

    #[test]
    fn kraus_scan_recovers_scaled_11a3() {
        // 11a3 (y^2 + y = x^3 - x^2, delta = -11) scaled by u = 2.
        let e = GenusOneEquation::Deg1(vec![
            rat_i64(0),
            rat_i64(-1),
            rat_i64(1),
            rat_i64(0),
            rat_i64(0),
        ]);
        let g = Transformation::T1 {
            u: rat_i64(2),
            r: rat_i64(0),
            s: rat_i64(0),
            t: rat_i64(0),
        };
        let scaled = g.apply(&e).unwrap();
        let inv = invariants(&scaled).unwrap();
        assert_eq!(inv.delta, rat_i64(-11) * rat_i64(4096));
        let rep = minimal_discriminant_global(&scaled).unwrap();
        assert_eq!(rep.delta_min, rat_i64(-11));
    }

    #[test]
    fn level_examples() {
        let ctx5 = LocalContext::new(5).unwrap();
        assert_eq!(level(&curve(0, 1), &ctx5).unwrap().value, 0);
        // y^2 = x^3 + 5^6: level 1 at 5.
        assert_eq!(level(&curve(0, 15625), &ctx5).unwrap().value, 1);
        // T3[mu=1, M=diag(p,p,p)] raises the level of a cubic by 3.
        let phi = standard_embedding(3, &rat_i64(1), &rat_i64(2));
        let g = Transformation::T3 {
            mu: Rat::one(),
            m: crate::mat::scale(&crate::mat::identity(3), &rat_i64(5)),
        };
        let raised = g.apply(&phi).unwrap();
        let l0 = level(&phi, &ctx5).unwrap().value;
        let l1 = level(&raised, &ctx5).unwrap().value;
        assert_eq!(l1, l0 + 3);
    }

    #[test]
    fn non_integral_rejected() {
        let ctx5 = LocalContext::new(5).unwrap();
        let e = GenusOneEquation::Deg1(vec![
            rat_i64(0),
            rat_i64(0),
            rat_i64(0),
            rat(1, 5),
            rat_i64(1),
        ]);
        assert!(matches!(
            minimal_discriminant_local(&e, &ctx5),
            Err(JacobianError::NotIntegral(5))
        ));
    }

    #[test]
    fn minimal_valuation_unimodular_invariance() {
        let ctx2 = LocalContext::new(2).unwrap();
        let ctx3 = LocalContext::new(3).unwrap();
        let e = curve(-7, 10);
        let g = Transformation::T1 {
            u: rat_i64(1),
            r: rat_i64(4),
            s: rat_i64(-3),
            t: rat_i64(7),
        };
        let moved = g.apply(&e).unwrap();
        for ctx in [&ctx2, &ctx3] {
            assert_eq!(
                minimal_discriminant_local(&e, ctx).unwrap(),
                minimal_discriminant_local(&moved, ctx).unwrap()
            );
        }
    }
}
