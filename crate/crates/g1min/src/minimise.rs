//! Local and global minimisation with certificates.
//!
//! The engine is a loop of verified moves: each candidate transformation is
//! applied, the result is checked for integrality, and the drop in
//! nu_p(delta) must be a positive multiple of 12 before the move is
//! accepted. Deterministic moves come from the fiber classification
//! (content/common-factor drops and the per-class scaling moves); a bounded
//! search over p-power scalings and pencil mixes is the backstop. Degree 1
//! is driven by the Laska-Kraus-Connell valuation from the jacobian module.

use crate::fiber::{self, FiberClass};
use crate::invariants::invariants;
use crate::jacobian::{self, JacobianError};
use crate::mat::{self, Mat};
use crate::models::{GenusOneEquation, Transformation};
use crate::poly::MultiPoly;
use crate::rat::{rat_i64, LocalContext, Rat, Val};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct MinimiseOpts {
    /// Rounds of guided search allowed after the deterministic moves stall.
    pub depth: usize,
}

impl Default for MinimiseOpts {
    fn default() -> Self {
        MinimiseOpts { depth: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveTag {
    Thm36N2,
    Thm36N3,
    Thm36N4Conic,
    Thm36N4DoubleConic,
    Thm36N4Line,
    CommonFactor,
    Search,
}

impl MoveTag {
    pub fn name(&self) -> &'static str {
        match self {
            MoveTag::Thm36N2 => "thm36-n2",
            MoveTag::Thm36N3 => "thm36-n3",
            MoveTag::Thm36N4Conic => "thm36-n4-conic",
            MoveTag::Thm36N4DoubleConic => "thm36-n4-dconic",
            MoveTag::Thm36N4Line => "thm36-n4-line",
            MoveTag::CommonFactor => "common-factor",
            MoveTag::Search => "search",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Move {
    pub transformation: Transformation,
    pub tag: MoveTag,
    /// Drop in nu_p(delta), a positive multiple of 12.
    pub drop: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimisationStatus {
    MinimalCertified,
    MinimalNoCertificate,
    NotMinimalDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Minimality {
    Minimal,
    NotMinimal,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometricStatus {
    GeometricallyMinimal,
    NotGeometricallyMinimal,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimisationCertificate {
    pub input: GenusOneEquation,
    /// Some(p) for a local run; None for the global driver.
    pub prime: Option<u64>,
    pub moves: Vec<Move>,
    /// nu(delta) before the first move and after each move. Local runs
    /// record nu_p; the global driver records the sum over its working
    /// primes, which still decreases by exactly the drop of each move.
    pub delta_valuations: Vec<i64>,
    pub result: GenusOneEquation,
    /// Residual level of `result` (summed over primes for a global run).
    pub level: u64,
    pub status: MinimisationStatus,
    /// Verdict about the *input* equation.
    pub minimality: Minimality,
}

#[derive(Debug, thiserror::Error)]
pub enum MinimiseError {
    #[error("singular input: delta = 0")]
    SingularInput,
    #[error("equation is not integral at p={0}")]
    NotIntegral(u64),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
}

// ------------------------------------------------------------------ helpers

fn ppow(p: u64, e: u32) -> Rat {
    Rat::from_integer(BigInt::from(p).pow(e))
}

fn nu_delta(phi: &GenusOneEquation, ctx: &LocalContext) -> Option<i64> {
    let inv = invariants(phi).ok()?;
    ctx.valuation(&inv.delta).finite()
}

/// Inverse of a p-adic unit mod m = p^e, as an integer in [0, m).
fn unit_inverse_mod(x: &Rat, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let n = x.numer().mod_floor(&mb);
    let d = x.denom().mod_floor(&mb);
    let en = n.extended_gcd(&mb);
    if !en.gcd.is_one() {
        return None;
    }
    let ninv = en.x.mod_floor(&mb);
    (d * ninv).mod_floor(&mb).to_u64()
}

/// Apply and gate: integral result with nu_p(delta) dropping by a positive
/// multiple of 12. Every move in this module passes through here.
fn checked(
    phi: &GenusOneEquation,
    t: &Transformation,
    tag: MoveTag,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let next = t.apply(phi).ok()?;
    let ok = if global {
        next.is_integral_global()
    } else {
        next.is_integral_at(ctx)
    };
    if !ok {
        return None;
    }
    let d0 = nu_delta(phi, ctx)?;
    let d1 = nu_delta(&next, ctx)?;
    let drop = d0 - d1;
    if drop <= 0 || drop % 12 != 0 {
        return None;
    }
    Some((
        Move {
            transformation: t.clone(),
            tag,
            drop: drop as u64,
        },
        next,
    ))
}

fn diag2(a: Rat, b: Rat) -> Mat {
    vec![vec![a, Rat::zero()], vec![Rat::zero(), b]]
}

fn diag4(d: [Rat; 4]) -> Mat {
    let mut m = mat::identity(4);
    for (i, x) in d.into_iter().enumerate() {
        m[i][i] = x;
    }
    m
}

// ------------------------------------------------------------ degree 1: LKC

/// Reduced integral Weierstrass model with the given integer invariants,
/// by the standard b-invariant back-substitution over the reduced ranges
/// a1, a3 in {0, 1}, a2 in {-1, 0, 1}.
fn kraus_connell(c4: &Rat, c6: &Rat) -> Option<GenusOneEquation> {
    if !c4.denom().is_one() || !c6.denom().is_one() {
        return None;
    }
    let int = |x: &Rat| x.denom().is_one();
    for a1 in 0..=1i64 {
        for a2 in -1..=1i64 {
            for a3 in 0..=1i64 {
                let b2 = rat_i64(a1 * a1 + 4 * a2);
                let b4 = (b2.clone() * b2.clone() - c4.clone()) / rat_i64(24);
                if !int(&b4) {
                    continue;
                }
                let b6 = (-(b2.clone() * b2.clone() * b2.clone())
                    + rat_i64(36) * b2.clone() * b4.clone()
                    - c6.clone())
                    / rat_i64(216);
                if !int(&b6) {
                    continue;
                }
                let a4 = (b4 - rat_i64(a1 * a3)) / rat_i64(2);
                let a6 = (b6 - rat_i64(a3 * a3)) / rat_i64(4);
                if !int(&a4) || !int(&a6) {
                    continue;
                }
                let cand = GenusOneEquation::Deg1(vec![
                    rat_i64(a1),
                    rat_i64(a2),
                    rat_i64(a3),
                    a4,
                    a6,
                ]);
                if let Ok(inv) = invariants(&cand) {
                    if &inv.c4 == c4 && &inv.c6 == c6 {
                        return Some(cand);
                    }
                }
            }
        }
    }
    None
}

/// T1 from phi onto the exact target model with the given u, if the shift
/// parameters close; verified by applying.
fn solve_t1(
    phi: &GenusOneEquation,
    target: &GenusOneEquation,
    u: &Rat,
) -> Option<Transformation> {
    let (GenusOneEquation::Deg1(a), GenusOneEquation::Deg1(b)) = (phi, target) else {
        return None;
    };
    // a1' = u a1 - 2s; a2' = u^2 a2 + u a1 s - s^2 - 3r;
    // a3' = 2(sr - t) - u a1 r + u^3 a3.
    let s = (u.clone() * a[0].clone() - b[0].clone()) / rat_i64(2);
    let r = (u.clone() * u.clone() * a[1].clone() + u.clone() * a[0].clone() * s.clone()
        - s.clone() * s.clone()
        - b[1].clone())
        / rat_i64(3);
    let t = (rat_i64(2) * s.clone() * r.clone() - u.clone() * a[0].clone() * r.clone()
        + u.clone() * u.clone() * u.clone() * a[2].clone()
        - b[2].clone())
        / rat_i64(2);
    let g = Transformation::T1 {
        u: u.clone(),
        r,
        s,
        t,
    };
    (g.apply(phi).ok()? == *target).then_some(g)
}

fn deg1_step(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let p = ctx.prime();
    let inv = invariants(phi).ok()?;
    if inv.delta.is_zero() {
        return None;
    }
    let vd = ctx.valuation(&inv.delta).finite()?;
    let vmin = jacobian::lkc_local(&inv, ctx).ok()?;
    let k = (vd - vmin) / 12;
    if k <= 0 {
        return None;
    }
    let k = k as u32;
    let c4p = inv.c4.clone() / ppow(p, 4 * k);
    let c6p = inv.c6.clone() / ppow(p, 6 * k);
    let mut targets: Vec<(GenusOneEquation, Rat)> = Vec::new();
    if let Some(t) = kraus_connell(&c4p, &c6p) {
        targets.push((t, Rat::one()));
    }
    if !global {
        if let Ok(j) = jacobian::jacobian(&c4p, &c6p) {
            if ctx.valuation(&j.u) == Val::Finite(0) {
                targets.push((j.curve, j.u));
            }
        }
    }
    let pk = ppow(p, k);
    for (target, w) in targets {
        for sign in [1i64, -1] {
            let u = rat_i64(sign) * w.clone() / pk.clone();
            if let Some(g) = solve_t1(phi, &target, &u) {
                if let Some(hit) = checked(phi, &g, MoveTag::Search, ctx, global) {
                    return Some(hit);
                }
            }
        }
    }
    None
}

// ----------------------------------------------------------- degrees 2 to 4

fn deg2_step(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let p = ctx.prime();
    let s = fiber::deg2_square_root(phi, ctx)?;
    let r = [
        rat_i64(s[0] as i64),
        rat_i64(s[1] as i64),
        rat_i64(s[2] as i64),
    ];
    let shift = Transformation::T2 {
        mu: Rat::one(),
        r,
        m: mat::identity(2),
    };
    let scale = Transformation::T2 {
        mu: rat_i64(p as i64),
        r: [Rat::zero(), Rat::zero(), Rat::zero()],
        m: mat::identity(2),
    };
    let t = scale.compose(&shift).ok()?;
    checked(phi, &t, MoveTag::Thm36N2, ctx, global)
}

fn deg3_step(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let p = rat_i64(ctx.prime() as i64);
    let (class, pos) = fiber::classify_fiber(phi, ctx).ok()?;
    match class {
        FiberClass::CommonFactor => {
            let t = Transformation::T3 {
                mu: Rat::one() / p,
                m: mat::identity(3),
            };
            checked(phi, &t, MoveTag::CommonFactor, ctx, global)
        }
        FiberClass::MultipleComponentDeg3 { .. } => {
            let sp = pos?;
            let scale = Transformation::T3 {
                mu: Rat::one() / (p.clone() * p.clone()),
                m: {
                    let mut m = mat::identity(3);
                    m[1][1] = p;
                    m
                },
            };
            let t = scale.compose(&sp.transform).ok()?;
            checked(phi, &t, MoveTag::Thm36N3, ctx, global)
        }
        _ => None,
    }
}

fn deg4_step(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let p = ctx.prime();
    let pr = rat_i64(p as i64);
    // Lemma 3.4 content drops first: a pencil member vanishing mod p, or a
    // shared linear factor of the reduced pair.
    if let Ok((fr, gr)) = fiber::reduce_pair(phi, ctx) {
        let mut cands: Vec<Transformation> = Vec::new();
        if fr.is_zero() {
            cands.push(Transformation::T4 {
                m: diag2(Rat::one() / pr.clone(), Rat::one()),
                n: mat::identity(4),
            });
        } else if gr.is_zero() {
            cands.push(Transformation::T4 {
                m: diag2(Rat::one(), Rat::one() / pr.clone()),
                n: mat::identity(4),
            });
        } else if let Some(lam) = fr.proportional(&gr) {
            // gr = lam * fr, so (G - lam F)/p is the drop.
            cands.push(Transformation::T4 {
                m: vec![
                    vec![Rat::one(), Rat::zero()],
                    vec![-rat_i64(lam as i64) / pr.clone(), Rat::one() / pr.clone()],
                ],
                n: mat::identity(4),
            });
        } else {
            for l in fiber::normalized_forms(4, p) {
                if fiber::divides_linear(&fr, &l, p) && fiber::divides_linear(&gr, &l, p) {
                    let frame = fiber::hyperplane_frame(&l, 0, p);
                    let t_pos = Transformation::T4 {
                        m: mat::identity(2),
                        n: crate::fp::sl_lift(&frame, p),
                    };
                    let t_scale = Transformation::T4 {
                        m: diag2(Rat::one() / pr.clone(), Rat::one() / pr.clone()),
                        n: diag4([pr.clone(), Rat::one(), Rat::one(), Rat::one()]),
                    };
                    if let Ok(t) = t_scale.compose(&t_pos) {
                        cands.push(t);
                    }
                    break;
                }
            }
        }
        for t in cands {
            if let Some(hit) = checked(phi, &t, MoveTag::CommonFactor, ctx, global) {
                return Some(hit);
            }
        }
    }
    let (class, pos) = fiber::classify_fiber(phi, ctx).ok()?;
    match class {
        FiberClass::ConicPlusDoubleLine => {
            let sp = pos?;
            deg4_conic_move(phi, &sp.transform, &sp.equation, ctx, global)
        }
        FiberClass::DoubleConic => {
            let sp = pos?;
            deg4_dconic_move(phi, &sp.transform, &sp.equation, ctx, global)
        }
        FiberClass::DoubleLinePlusTwoLines { .. }
        | FiberClass::TripleLinePlusLine
        | FiberClass::TwoDoubleLines { .. }
        | FiberClass::QuadrupleLine => {
            for (t_pos, _eq) in fiber::line_positions(phi, ctx).ok()? {
                let t_scale = Transformation::T4 {
                    m: diag2(
                        Rat::one() / (pr.clone() * pr.clone()),
                        Rat::one() / pr.clone(),
                    ),
                    n: diag4([pr.clone(), pr.clone(), Rat::one(), Rat::one()]),
                };
                let t = t_scale.compose(&t_pos).ok()?;
                if let Some(hit) = checked(phi, &t, MoveTag::Thm36N4Line, ctx, global) {
                    return Some(hit);
                }
            }
            None
        }
        _ => None,
    }
}

/// Conic + double line: in the standard position F~ = u x1x3 with all other
/// F-coefficients divisible by p, so the printed x1-shear against the x3^2
/// and x3x4 coefficients (with an integer approximation of 1/u) prepares
/// the (1/p^2)(F, G)(p^2 x1, p x2, x3, x4) scaling.
fn deg4_conic_move(
    phi: &GenusOneEquation,
    t_pos: &Transformation,
    positioned: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let p = ctx.prime();
    let pr = rat_i64(p as i64);
    let (f, _) = positioned.deg4_quadrics();
    let u = f.coeff(&[1, 0, 1, 0]);
    let w = unit_inverse_mod(&u, p.pow(3))?;
    let a8 = f.coeff(&[0, 0, 2, 0]);
    let a9 = f.coeff(&[0, 0, 1, 1]);
    let mut n = mat::identity(4);
    n[0][2] = -rat_i64(w as i64) * a8;
    n[0][3] = -rat_i64(w as i64) * a9;
    let t_shear = Transformation::T4 {
        m: mat::identity(2),
        n,
    };
    let p2 = pr.clone() * pr.clone();
    let t_scale = Transformation::T4 {
        m: diag2(Rat::one() / p2.clone(), Rat::one() / p2.clone()),
        n: diag4([p2, pr, Rat::one(), Rat::one()]),
    };
    let t = t_scale
        .compose(&t_shear)
        .ok()?
        .compose(t_pos)
        .ok()?;
    checked(phi, &t, MoveTag::Thm36N4Conic, ctx, global)
}

/// Double conic: search mu mod p^2 with nu(F(0,..) - mu G(0,..)) >= 2 in
/// the standard position, then mix and scale x1 by p.
fn deg4_dconic_move(
    phi: &GenusOneEquation,
    t_pos: &Transformation,
    positioned: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    let p = ctx.prime();
    let pr = rat_i64(p as i64);
    let (f, g) = positioned.deg4_quadrics();
    let drop_x1 = |q: &MultiPoly| -> MultiPoly {
        let mut out = MultiPoly::zero(3);
        for (e, c) in q.terms() {
            if e[0] == 0 {
                out.add_term(vec![e[1], e[2], e[3]], c.clone());
            }
        }
        out
    };
    let f0 = drop_x1(&f);
    let g0 = drop_x1(&g);
    let p2 = pr.clone() * pr.clone();
    for mu in 0..p * p {
        let h = f0.sub(&g0.scale(&rat_i64(mu as i64)));
        let small = match h.valuation(ctx) {
            Val::Infinity => true,
            Val::Finite(v) => v >= 2,
        };
        if !small {
            continue;
        }
        let t_mix = Transformation::T4 {
            m: vec![
                vec![Rat::one() / p2.clone(), -rat_i64(mu as i64) / p2.clone()],
                vec![Rat::zero(), Rat::one()],
            ],
            n: diag4([pr.clone(), Rat::one(), Rat::one(), Rat::one()]),
        };
        let t = t_mix.compose(t_pos).ok()?;
        if let Some(hit) = checked(phi, &t, MoveTag::Thm36N4DoubleConic, ctx, global) {
            return Some(hit);
        }
    }
    None
}

fn deterministic_step(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    match phi.degree() {
        1 => deg1_step(phi, ctx, global),
        2 => deg2_step(phi, ctx, global),
        3 => deg3_step(phi, ctx, global),
        4 => deg4_step(phi, ctx, global),
        _ => None,
    }
}

/// The Theorem 3.6 / Lemma 3.4 move for the current configuration, if one
/// fires. None means every normality test passed or the classification is
/// unsupported at this prime.
pub fn nonminimal_step(phi: &GenusOneEquation, ctx: &LocalContext) -> Option<Move> {
    if !phi.is_integral_at(ctx) {
        return None;
    }
    deterministic_step(phi, ctx, false).map(|(m, _)| m)
}

// ------------------------------------------------------------ guided search

fn search_candidates(phi: &GenusOneEquation, ctx: &LocalContext) -> Vec<Transformation> {
    let p = ctx.prime();
    let mut out = Vec::new();
    match phi.degree() {
        2 => {
            let mut shifts = vec![Transformation::identity(2)];
            if let Some(s) = fiber::deg2_square_root(phi, ctx) {
                shifts.push(Transformation::T2 {
                    mu: Rat::one(),
                    r: [
                        rat_i64(s[0] as i64),
                        rat_i64(s[1] as i64),
                        rat_i64(s[2] as i64),
                    ],
                    m: mat::identity(2),
                });
            }
            for shift in &shifts {
                for a in 1..=3u32 {
                    for (b, c) in [(0u32, 0u32), (1, 0), (0, 1), (1, 1)] {
                        let scale = Transformation::T2 {
                            mu: ppow(p, a),
                            r: [Rat::zero(), Rat::zero(), Rat::zero()],
                            m: diag2(ppow(p, b), ppow(p, c)),
                        };
                        if let Ok(t) = scale.compose(shift) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        3 => {
            let mut positions = vec![Transformation::identity(3)];
            if let Ok((_, Some(sp))) = fiber::classify_fiber(phi, ctx) {
                positions.push(sp.transform);
            }
            for pos in &positions {
                for a in 1..=3u32 {
                    for e in 0..8u32 {
                        let d: Vec<Rat> =
                            (0..3).map(|i| ppow(p, (e >> i) & 1)).collect();
                        let scale = Transformation::T3 {
                            mu: Rat::one() / ppow(p, a),
                            m: {
                                let mut m = mat::identity(3);
                                for i in 0..3 {
                                    m[i][i] = d[i].clone();
                                }
                                m
                            },
                        };
                        if let Ok(t) = scale.compose(pos) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        4 => {
            let mut positions = vec![Transformation::identity(4)];
            if let Ok((_, Some(sp))) = fiber::classify_fiber(phi, ctx) {
                positions.push(sp.transform);
            }
            if let Ok(lines) = fiber::line_positions(phi, ctx) {
                for (t, _) in lines {
                    positions.push(t);
                }
            }
            let mut mixes: Vec<Mat> = vec![
                mat::identity(2),
                vec![
                    vec![Rat::zero(), Rat::one()],
                    vec![Rat::one(), Rat::zero()],
                ],
            ];
            for lam in 1..p {
                mixes.push(vec![
                    vec![Rat::one(), Rat::zero()],
                    vec![-rat_i64(lam as i64), Rat::one()],
                ]);
            }
            for pos in &positions {
                for mix in &mixes {
                    for (m1, m2) in [(1u32, 0u32), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)] {
                        let mscale = diag2(Rat::one() / ppow(p, m1), Rat::one() / ppow(p, m2));
                        let m = mat::mat_mul(&mscale, mix);
                        for e in 0..16u32 {
                            let n = diag4(std::array::from_fn(|i| {
                                ppow(p, (e >> i) & 1)
                            }));
                            let scale = Transformation::T4 { m: m.clone(), n };
                            // Only determinant valuations < 0 can drop.
                            if ctx
                                .valuation(&scale.det())
                                .finite()
                                .map(|v| v >= 0)
                                .unwrap_or(true)
                            {
                                continue;
                            }
                            if let Ok(t) = scale.compose(pos) {
                                out.push(t);
                            }
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

fn search_step(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    global: bool,
) -> Option<(Move, GenusOneEquation)> {
    for t in search_candidates(phi, ctx) {
        if let Some(hit) = checked(phi, &t, MoveTag::Search, ctx, global) {
            return Some(hit);
        }
    }
    None
}

// ------------------------------------------------------------------ drivers

fn run_local(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    opts: &MinimiseOpts,
    global: bool,
) -> Result<(Vec<Move>, GenusOneEquation, u64), MinimiseError> {
    let mut cur = phi.clone();
    let mut moves = Vec::new();
    let mut search_rounds = 0usize;
    loop {
        if let Some((mv, next)) = deterministic_step(&cur, ctx, global) {
            moves.push(mv);
            cur = next;
            continue;
        }
        let lvl = jacobian::level(&cur, ctx)?.value;
        if lvl == 0 || search_rounds >= opts.depth {
            break;
        }
        search_rounds += 1;
        if let Some((mv, next)) = search_step(&cur, ctx, global) {
            moves.push(mv);
            cur = next;
            continue;
        }
        break;
    }
    let lvl = jacobian::level(&cur, ctx)?.value;
    Ok((moves, cur, lvl))
}

fn statuses(moves: &[Move], level: u64) -> (MinimisationStatus, Minimality) {
    let status = if level == 0 {
        MinimisationStatus::MinimalCertified
    } else if moves.is_empty() {
        MinimisationStatus::MinimalNoCertificate
    } else {
        MinimisationStatus::NotMinimalDetected
    };
    let minimality = if !moves.is_empty() {
        Minimality::NotMinimal
    } else if level == 0 {
        Minimality::Minimal
    } else {
        Minimality::Unknown
    };
    (status, minimality)
}

pub fn minimise_local(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
    opts: &MinimiseOpts,
) -> Result<MinimisationCertificate, MinimiseError> {
    if !phi.is_integral_at(ctx) {
        return Err(MinimiseError::NotIntegral(ctx.prime()));
    }
    let v0 = nu_delta(phi, ctx).ok_or(MinimiseError::SingularInput)?;
    let (moves, result, level) = run_local(phi, ctx, opts, false)?;
    let mut vals = vec![v0];
    for m in &moves {
        vals.push(vals.last().unwrap() - m.drop as i64);
    }
    debug_assert_eq!(vals.last().copied(), nu_delta(&result, ctx));
    let (status, minimality) = statuses(&moves, level);
    Ok(MinimisationCertificate {
        input: phi.clone(),
        prime: Some(ctx.prime()),
        moves,
        delta_valuations: vals,
        result,
        level,
        status,
        minimality,
    })
}

/// Three-valued minimality of the input, with the certificate as evidence.
/// The boolean is true only for MinimalCertified with no moves.
pub fn is_minimal(
    phi: &GenusOneEquation,
    ctx: &LocalContext,
) -> Result<(bool, MinimisationCertificate), MinimiseError> {
    let cert = minimise_local(phi, ctx, &MinimiseOpts::default())?;
    Ok((cert.minimality == Minimality::Minimal, cert))
}

pub fn geometric_status(
    cert: &MinimisationCertificate,
    verdict: &fiber::NormalityVerdict,
) -> GeometricStatus {
    match (cert.minimality, verdict.status) {
        (Minimality::Minimal, fiber::NormalityStatus::Normal) => {
            GeometricStatus::GeometricallyMinimal
        }
        (Minimality::NotMinimal, _) => GeometricStatus::NotGeometricallyMinimal,
        _ => GeometricStatus::Unknown,
    }
}

pub fn minimise_global(
    phi: &GenusOneEquation,
    opts: &MinimiseOpts,
) -> Result<MinimisationCertificate, MinimiseError> {
    if !phi.is_integral_global() {
        return Err(MinimiseError::NotIntegral(0));
    }
    let inv = invariants(phi).map_err(|_| MinimiseError::SingularInput)?;
    if inv.delta.is_zero() {
        return Err(MinimiseError::SingularInput);
    }
    let primes: Vec<u64> = jacobian::twelfth_power_primes(inv.delta.numer())
        .into_iter()
        .filter(|&p| {
            let ctx = LocalContext::new(p).unwrap();
            matches!(ctx.valuation(&inv.delta), Val::Finite(v) if v >= 12)
        })
        .collect();
    let total = |e: &GenusOneEquation| -> Option<i64> {
        primes
            .iter()
            .map(|&p| nu_delta(e, &LocalContext::new(p).unwrap()))
            .sum()
    };
    let mut cur = phi.clone();
    let mut moves: Vec<Move> = Vec::new();
    let mut vals = vec![total(&cur).ok_or(MinimiseError::SingularInput)?];
    let mut residual: u64 = 0;
    for &p in &primes {
        let ctx = LocalContext::new(p).unwrap();
        let (mvs, next, lvl) = run_local(&cur, &ctx, opts, true)?;
        for m in mvs {
            vals.push(vals.last().unwrap() - m.drop as i64);
            moves.push(m);
        }
        cur = next;
        residual += lvl;
    }
    debug_assert_eq!(vals.last().copied(), total(&cur));
    let (status, minimality) = statuses(&moves, residual);
    Ok(MinimisationCertificate {
        input: phi.clone(),
        prime: None,
        moves,
        delta_valuations: vals,
        result: cur,
        level: residual,
        status,
        minimality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::standard_embedding;
    use crate::rat::rat;

    fn ctx(p: u64) -> LocalContext {
        LocalContext::new(p).unwrap()
    }

    fn opts() -> MinimiseOpts {
        MinimiseOpts::default()
    }

    fn deg4(f: &[(usize, i64)], g: &[(usize, i64)]) -> GenusOneEquation {
        let build = |c: &[(usize, i64)]| {
            let mut v = vec![Rat::zero(); 10];
            for &(i, x) in c {
                v[i] = rat_i64(x);
            }
            v
        };
        GenusOneEquation::Deg4(build(f), build(g))
    }

    #[test]
    fn already_minimal_every_degree() {
        let c5 = ctx(5);
        for n in 1..=4u8 {
            let phi = standard_embedding(n, &rat_i64(1), &rat_i64(1));
            let cert = minimise_local(&phi, &c5, &opts()).unwrap();
            assert!(cert.moves.is_empty(), "degree {n}");
            assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
            assert_eq!(cert.minimality, Minimality::Minimal);
            assert_eq!(cert.result, phi);
        }
    }

    #[test]
    fn deg1_laska_kraus_roundtrip() {
        for p in [2u64, 3, 5] {
            let c = ctx(p);
            let e = standard_embedding(1, &rat_i64(0), &rat_i64(1));
            let g = Transformation::T1 {
                u: rat_i64(p as i64),
                r: Rat::zero(),
                s: Rat::zero(),
                t: Rat::zero(),
            };
            let scaled = g.apply(&e).unwrap();
            let v0 = nu_delta(&e, &c).unwrap();
            assert_eq!(nu_delta(&scaled, &c).unwrap(), v0 + 12);
            let cert = minimise_local(&scaled, &c, &opts()).unwrap();
            assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
            assert_eq!(cert.minimality, Minimality::NotMinimal);
            assert_eq!(nu_delta(&cert.result, &c).unwrap(), v0);
        }
    }

    #[test]
    fn deg2_planted_level_recovered() {
        let c5 = ctx(5);
        let phi = standard_embedding(2, &rat_i64(1), &rat_i64(1));
        let raise = Transformation::T2 {
            mu: rat(1, 5),
            r: [Rat::zero(), Rat::zero(), Rat::zero()],
            m: mat::identity(2),
        };
        let up = raise.apply(&phi).unwrap();
        assert!(up.is_integral_global());
        let v0 = nu_delta(&phi, &c5).unwrap();
        assert_eq!(nu_delta(&up, &c5).unwrap(), v0 + 12);
        let cert = minimise_local(&up, &c5, &opts()).unwrap();
        assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
        assert_eq!(cert.moves.len(), 1);
        assert_eq!(cert.moves[0].tag, MoveTag::Thm36N2);
        assert_eq!(nu_delta(&cert.result, &c5).unwrap(), v0);
    }

    #[test]
    fn deg3_planted_level_recovered() {
        let c5 = ctx(5);
        let phi = standard_embedding(3, &rat_i64(1), &rat_i64(2));
        let raise = Transformation::T3 {
            mu: rat_i64(25),
            m: {
                let mut m = mat::identity(3);
                m[1][1] = rat(1, 5);
                m
            },
        };
        let up = raise.apply(&phi).unwrap();
        assert!(up.is_integral_global());
        let v0 = nu_delta(&phi, &c5).unwrap();
        assert_eq!(nu_delta(&up, &c5).unwrap(), v0 + 12);
        let cert = minimise_local(&up, &c5, &opts()).unwrap();
        assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
        assert!(cert
            .moves
            .iter()
            .any(|m| m.tag == MoveTag::Thm36N3));
        assert_eq!(nu_delta(&cert.result, &c5).unwrap(), v0);
    }

    #[test]
    fn deg4_common_factor_branches() {
        let c5 = ctx(5);
        let phi = standard_embedding(4, &rat_i64(1), &rat_i64(1));
        let v0 = nu_delta(&phi, &c5).unwrap();
        // F' = 5F, G' = 2F + G: zero-reduction branch.
        let raise = Transformation::T4 {
            m: vec![
                vec![rat_i64(5), Rat::zero()],
                vec![rat_i64(2), Rat::one()],
            ],
            n: mat::identity(4),
        };
        let up = raise.apply(&phi).unwrap();
        let cert = minimise_local(&up, &c5, &opts()).unwrap();
        assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
        assert_eq!(cert.moves[0].tag, MoveTag::CommonFactor);
        assert_eq!(nu_delta(&cert.result, &c5).unwrap(), v0);
        // F' = F, G' = 2F + 5G: proportional-pair branch.
        let raise = Transformation::T4 {
            m: vec![
                vec![Rat::one(), Rat::zero()],
                vec![rat_i64(2), rat_i64(5)],
            ],
            n: mat::identity(4),
        };
        let up = raise.apply(&phi).unwrap();
        let cert = minimise_local(&up, &c5, &opts()).unwrap();
        assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
        assert_eq!(cert.moves[0].tag, MoveTag::CommonFactor);
        assert_eq!(nu_delta(&cert.result, &c5).unwrap(), v0);
    }

    #[test]
    fn deg4_conic_trigger_drops() {
        let c5 = ctx(5);
        // Conic + double line position with nu of the f-polynomial >= 2.
        let phi = deg4(&[(2, 1), (9, 25), (0, 5)], &[(4, 1), (3, 1), (5, 5)]);
        let inv = invariants(&phi).unwrap();
        assert!(!inv.delta.is_zero());
        let mv = nonminimal_step(&phi, &c5);
        let mv = mv.expect("conic move fires");
        assert_eq!(mv.tag, MoveTag::Thm36N4Conic);
        assert!(mv.drop >= 12);
    }

    #[test]
    fn deg4_dconic_trigger_drops() {
        let c5 = ctx(5);
        let phi = deg4(&[(0, 1), (7, 25), (3, 5)], &[(4, 1), (8, 1), (0, 5)]);
        let inv = invariants(&phi).unwrap();
        assert!(!inv.delta.is_zero());
        let mv = nonminimal_step(&phi, &c5).expect("dconic move fires");
        assert_eq!(mv.tag, MoveTag::Thm36N4DoubleConic);
        assert!(mv.drop >= 12);
    }

    #[test]
    fn deg4_line_trigger_drops() {
        let c5 = ctx(5);
        // F~ = x1^2 + x2^2, G~ = x1x3 + x2x4; F(0,0,x3,x4) = 0 mod 25.
        let phi = deg4(
            &[(0, 1), (4, 1), (5, 5), (7, 25), (8, 25), (9, 25)],
            &[(2, 1), (6, 1), (1, 5), (7, 5)],
        );
        let inv = invariants(&phi).unwrap();
        assert!(!inv.delta.is_zero());
        let mv = nonminimal_step(&phi, &c5).expect("line move fires");
        assert_eq!(mv.tag, MoveTag::Thm36N4Line);
        assert!(mv.drop >= 12);
    }

    #[test]
    fn global_deg1_two_primes() {
        // y^2 = x^3 + 2^6 3^6: the u = 6 scaling of y^2 = x^3 + 1.
        let e = standard_embedding(1, &rat_i64(0), &rat_i64(46656));
        let cert = minimise_global(&e, &opts()).unwrap();
        assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
        let inv = invariants(&cert.result).unwrap();
        assert_eq!(inv.delta, rat_i64(-432));
    }

    #[test]
    fn global_deg2_two_primes() {
        let phi = standard_embedding(2, &rat_i64(1), &rat_i64(1));
        let d0 = invariants(&phi).unwrap().delta;
        let raise = Transformation::T2 {
            mu: rat(1, 35),
            r: [Rat::zero(), Rat::zero(), Rat::zero()],
            m: mat::identity(2),
        };
        let up = raise.apply(&phi).unwrap();
        assert!(up.is_integral_global());
        let cert = minimise_global(&up, &opts()).unwrap();
        assert_eq!(cert.status, MinimisationStatus::MinimalCertified);
        assert_eq!(cert.moves.len(), 2);
        assert_eq!(invariants(&cert.result).unwrap().delta, d0);
    }

    #[test]
    fn is_minimal_and_geometric_status() {
        let c5 = ctx(5);
        let phi = standard_embedding(3, &rat_i64(1), &rat_i64(1));
        let (min, cert) = is_minimal(&phi, &c5).unwrap();
        assert!(min);
        let verdict = fiber::normality(&phi, &c5).unwrap();
        assert_eq!(
            geometric_status(&cert, &verdict),
            GeometricStatus::GeometricallyMinimal
        );
    }
}
