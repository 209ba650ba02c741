//! JSON views of the library's result types, shared by the CLI and the C
//! bindings. Rationals are printed as "num" or "num/den" strings so every
//! payload round-trips exactly.

use serde_json::{json, Value};

use crate::fiber::{NormalityStatus, NormalityVerdict, StandardPosition};
use crate::mat::Mat;
use crate::minimise::{GeometricStatus, Minimality, MinimisationCertificate, MinimisationStatus};
use crate::models::{GenusOneEquation, Transformation};
use crate::rat::{rat_string, Rat};

pub fn rats_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_string(x))).collect())
}

pub fn model_value(phi: &GenusOneEquation) -> Value {
    json!({ "degree": phi.degree(), "coeffs": rats_value(&phi.coeffs()) })
}

pub fn mat_value(m: &Mat) -> Value {
    Value::Array(m.iter().map(|row| rats_value(row)).collect())
}

pub fn transform_value(t: &Transformation) -> Value {
    match t {
        Transformation::T1 { u, r, s, t } => json!({
            "kind": "t1",
            "u": rat_string(u), "r": rat_string(r),
            "s": rat_string(s), "t": rat_string(t),
        }),
        Transformation::T2 { mu, r, m } => json!({
            "kind": "t2",
            "mu": rat_string(mu),
            "r": rats_value(r),
            "m": mat_value(m),
        }),
        Transformation::T3 { mu, m } => json!({
            "kind": "t3",
            "mu": rat_string(mu),
            "m": mat_value(m),
        }),
        Transformation::T4 { m, n } => json!({
            "kind": "t4",
            "m": mat_value(m),
            "n": mat_value(n),
        }),
    }
}

pub fn position_value(sp: &StandardPosition) -> Value {
    json!({
        "transform": transform_value(&sp.transform),
        "equation": model_value(&sp.equation),
    })
}

pub fn status_str(s: MinimisationStatus) -> &'static str {
    match s {
        MinimisationStatus::MinimalCertified => "minimal-certified",
        MinimisationStatus::MinimalNoCertificate => "minimal-no-certificate",
        MinimisationStatus::NotMinimalDetected => "not-minimal-detected",
    }
}

pub fn minimality_str(m: Minimality) -> &'static str {
    match m {
        Minimality::Minimal => "minimal",
        Minimality::NotMinimal => "not-minimal",
        Minimality::Unknown => "unknown",
    }
}

pub fn normality_str(s: NormalityStatus) -> &'static str {
    match s {
        NormalityStatus::Normal => "normal",
        NormalityStatus::NotNormal => "not-normal",
        NormalityStatus::NotProvedNormal => "not-proved-normal",
    }
}

pub fn geometric_str(g: GeometricStatus) -> &'static str {
    match g {
        GeometricStatus::GeometricallyMinimal => "geometrically-minimal",
        GeometricStatus::NotGeometricallyMinimal => "not-geometrically-minimal",
        GeometricStatus::Unknown => "unknown",
    }
}

pub fn verdict_value(v: &NormalityVerdict) -> Value {
    json!({
        "status": normality_str(v.status),
        "criterion": v.criterion,
        "witness": v.witness,
    })
}

pub fn cert_value(cert: &MinimisationCertificate) -> Value {
    json!({
        "input": model_value(&cert.input),
        "prime": cert.prime,
        "moves": cert.moves.iter().map(|m| json!({
            "tag": m.tag.name(),
            "drop": m.drop,
            "transformation": transform_value(&m.transformation),
        })).collect::<Vec<_>>(),
        "delta_valuations": cert.delta_valuations,
        "result": model_value(&cert.result),
        "level": cert.level,
        "status": status_str(cert.status),
        "minimality": minimality_str(cert.minimality),
    })
}
