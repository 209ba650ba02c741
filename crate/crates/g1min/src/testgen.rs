//! Seeded generation of integral genus one equations with planted levels.
//!
//! Instances start from the standard degree-n embedding of y^2 = x^3+Ax+B,
//! get k determinant-valuation-1 level-raisers per planted prime, and are
//! then disguised by seeded integral unimodular transformations. The
//! ground-truth record carries the minimal discriminant valuation and the
//! expected level at every planted prime, so round-trips through the
//! minimiser can be checked exactly.

use crate::invariants::{invariants, standard_embedding, InvariantError};
use crate::jacobian::{self, JacobianError};
use crate::mat::{self, Mat};
use crate::models::{GenusOneEquation, Transformation};
use crate::rat::{rat, rat_i64, LocalContext, Rat};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error)]
pub enum TestgenError {
    #[error("4A^3 + 27B^2 = 0: the base curve is singular")]
    SingularInput,
    #[error("{0} is not a usable prime")]
    BadPrime(u64),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// What the generator knows about the instance it built.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub degree: u8,
    pub a: Rat,
    pub b: Rat,
    pub seed: u64,
    /// (p, planted k, expected level of the instance at p).
    pub planted: Vec<(u64, u32, u64)>,
    /// (p, nu_p of the Jacobian's minimal discriminant) per planted prime.
    pub minimal_valuations: Vec<(u64, i64)>,
    /// Discriminant of the emitted equation.
    pub delta: Rat,
}

/// One determinant-valuation-1 level raiser at p for the given degree.
/// Each is the inverse of a move the minimiser knows how to make, and each
/// keeps any integral equation of the standard shape integral.
fn raiser(degree: u8, p: u64, rng: &mut ChaCha8Rng) -> Transformation {
    let pr = rat_i64(p as i64);
    match degree {
        1 => Transformation::T1 {
            u: pr,
            r: Rat::zero(),
            s: Rat::zero(),
            t: Rat::zero(),
        },
        2 => Transformation::T2 {
            mu: Rat::one() / pr,
            r: [Rat::zero(), Rat::zero(), Rat::zero()],
            m: mat::identity(2),
        },
        3 => {
            // mu = p^2, M = diag(1, 1/p, 1): multiplies the y-free part by
            // p^2 and keeps the y^2 z coefficient; integral as long as the
            // cubic has no y^3 or y-linear terms, which the standard
            // embedding (and its image under these raisers) never has.
            let mut m = mat::identity(3);
            m[1][1] = rat(1, p as i64);
            Transformation::T3 {
                mu: pr.clone() * pr,
                m,
            }
        }
        4 => {
            // Content raiser: F' = pF, G' = lambda F + G. The mix keeps the
            // content from being a bare common factor after disguising.
            let lambda = rng.gen_range(0..p) as i64;
            let m = vec![
                vec![pr, Rat::zero()],
                vec![rat_i64(lambda), Rat::one()],
            ];
            Transformation::T4 {
                m,
                n: mat::identity(4),
            }
        }
        d => panic!("unsupported degree {d}"),
    }
}

/// Product of a few elementary transvections E_ij(c) with small integral c;
/// determinant exactly 1.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng, steps: usize) -> Mat {
    let mut m = mat::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2i64..=2);
        let mut e = mat::identity(n);
        e[i][j] = rat_i64(c);
        m = mat::mat_mul(&m, &e);
    }
    m
}

/// A level-preserving integral disguise for the given degree.
fn disguise(degree: u8, rng: &mut ChaCha8Rng) -> Transformation {
    match degree {
        1 => Transformation::T1 {
            u: Rat::one(),
            r: rat_i64(rng.gen_range(-3i64..=3)),
            s: rat_i64(rng.gen_range(-3i64..=3)),
            t: rat_i64(rng.gen_range(-3i64..=3)),
        },
        2 => Transformation::T2 {
            mu: Rat::one(),
            r: [
                rat_i64(rng.gen_range(-2i64..=2)),
                rat_i64(rng.gen_range(-2i64..=2)),
                rat_i64(rng.gen_range(-2i64..=2)),
            ],
            m: random_unimodular(2, rng, 4),
        },
        3 => Transformation::T3 {
            mu: Rat::one(),
            m: random_unimodular(3, rng, 6),
        },
        4 => Transformation::T4 {
            m: random_unimodular(2, rng, 3),
            n: random_unimodular(4, rng, 8),
        },
        d => panic!("unsupported degree {d}"),
    }
}

pub fn generate_instance(
    a: i64,
    b: i64,
    degree: u8,
    planted: &[(u64, u32)],
    seed: u64,
) -> Result<(GenusOneEquation, GroundTruth), TestgenError> {
    let a = rat_i64(a);
    let b = rat_i64(b);
    let disc = rat_i64(4) * a.clone() * a.clone() * a.clone()
        + rat_i64(27) * b.clone() * b.clone();
    if disc.is_zero() {
        return Err(TestgenError::SingularInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = standard_embedding(degree, &a, &b);
    let base_inv = invariants(&base)?;
    debug_assert!(!base_inv.delta.is_zero());

    let mut phi = base.clone();
    let mut truth_planted = Vec::new();
    let mut minimal_valuations = Vec::new();
    for &(p, k) in planted {
        let ctx = LocalContext::new(p).map_err(|_| TestgenError::BadPrime(p))?;
        for _ in 0..k {
            let t = raiser(degree, p, &mut rng);
            phi = t.apply(&phi).expect("raiser degree matches");
            debug_assert!(phi.is_integral_at(&ctx));
        }
        let nu_min = jacobian::minimal_discriminant_local(&base, &ctx)?;
        let nu_base = ctx.valuation(&base_inv.delta).finite().unwrap();
        let base_level = (nu_base - nu_min) / 12;
        truth_planted.push((p, k, base_level as u64 + u64::from(k)));
        minimal_valuations.push((p, nu_min));
    }

    let t = disguise(degree, &mut rng);
    phi = t.apply(&phi).expect("disguise degree matches");
    debug_assert!(phi.is_integral_global());
    let inv = invariants(&phi)?;

    let truth = GroundTruth {
        degree,
        a,
        b,
        seed,
        planted: truth_planted,
        minimal_valuations,
        delta: inv.delta,
    };
    Ok((phi, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimise::{minimise_local, MinimisationStatus, MinimiseOpts};

    #[test]
    fn unplanted_deg2_matches_curve_invariants() {
        let (phi, truth) = generate_instance(0, 1, 2, &[], 42).unwrap();
        let inv = invariants(&phi).unwrap();
        assert_eq!(inv.c4, Rat::zero());
        assert_eq!(inv.c6, rat_i64(-864));
        assert_eq!(inv.delta, rat_i64(-432));
        assert_eq!(truth.delta, rat_i64(-432));
        assert!(truth.planted.is_empty());
    }

    #[test]
    fn deterministic_in_the_seed() {
        let (x, _) = generate_instance(2, 3, 4, &[(5, 2)], 7).unwrap();
        let (y, _) = generate_instance(2, 3, 4, &[(5, 2)], 7).unwrap();
        let (z, _) = generate_instance(2, 3, 4, &[(5, 2)], 8).unwrap();
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn planted_valuation_shift() {
        let (phi, truth) = generate_instance(1, 1, 3, &[(5, 1)], 11).unwrap();
        let ctx = LocalContext::new(5).unwrap();
        let nu = ctx.valuation(&truth.delta).finite().unwrap();
        let (_, nu_min) = truth.minimal_valuations[0];
        assert_eq!(nu, nu_min + 12);
        assert!(phi.is_integral_global());
    }

    #[test]
    fn roundtrip_every_degree() {
        for degree in 1..=4u8 {
            for (k, seed) in [(1u32, 3u64), (2, 4)] {
                let (phi, truth) =
                    generate_instance(-2, 5, degree, &[(7, k)], seed).unwrap();
                let ctx = LocalContext::new(7).unwrap();
                let cert = minimise_local(&phi, &ctx, &MinimiseOpts::default()).unwrap();
                assert_eq!(
                    cert.status,
                    MinimisationStatus::MinimalCertified,
                    "degree {degree} k {k} seed {seed}"
                );
                let out = invariants(&cert.result).unwrap();
                let (_, nu_min) = truth.minimal_valuations[0];
                assert_eq!(
                    ctx.valuation(&out.delta).finite().unwrap(),
                    nu_min,
                    "degree {degree} k {k} seed {seed}"
                );
            }
        }
    }
}
