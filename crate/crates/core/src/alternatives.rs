//! Certificate-producing deciders for four theorems of the alternative and
//! an independent certificate checker.
//!
//! | decider               | first alternative (`xi`-type)   | second alternative            |
//! |-----------------------|---------------------------------|-------------------------------|
//! | [`farkas`]            | `xi A >= 0`, `xi b < 0`         | `q >= 0`, `A q = b`           |
//! | [`fredholm`]          | `xi A = 0`, `xi b != 0`         | `A x = b`                     |
//! | [`stiemke`]           | `xi A` semipositive             | `p > 0`, `sum p = 1`, `A p = 0` |
//! | [`alternatives_lemma`]| `p` in simplex, `p A >= 0`      | `q` in simplex, `A q < 0`     |
//!
//! The last three are reductions to [`farkas`]. [`verify_certificate`] only
//! does matrix-vector arithmetic and never calls a decider.

use serde::{Deserialize, Serialize};

use crate::cone::{self, check_column_limit};
use crate::error::{Error, Result};
use crate::exec;
use crate::rat::{Rat, RatMat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FarkasCertificate {
    Separation { xi: RatVec },
    Combination { q: RatVec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FredholmCertificate {
    Orthogonal { xi: RatVec },
    Solution { x: RatVec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum StiemkeCertificate {
    SemipositiveRow { xi: RatVec },
    InteriorMeasure { p: RatVec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum AltCertificate {
    NonnegRow { p: RatVec },
    NegCol { q: RatVec },
}

macro_rules! first_alternative {
    ($ty:ident, $first:ident) => {
        impl $ty {
            /// True for the `xi`-type (first) alternative.
            pub fn is_first_alternative(&self) -> bool {
                matches!(self, $ty::$first { .. })
            }
        }
    };
}

first_alternative!(FarkasCertificate, Separation);
first_alternative!(FredholmCertificate, Orthogonal);
first_alternative!(StiemkeCertificate, SemipositiveRow);
first_alternative!(AltCertificate, NonnegRow);

/// The instance a certificate claims to settle.
#[derive(Debug, Clone, Copy)]
pub enum Problem<'a> {
    Farkas(&'a RatMat, &'a RatVec),
    Fredholm(&'a RatMat, &'a RatVec),
    Stiemke(&'a RatMat),
    Alternatives(&'a RatMat),
}

/// Any certificate kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Farkas(FarkasCertificate),
    Fredholm(FredholmCertificate),
    Stiemke(StiemkeCertificate),
    Alternatives(AltCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

fn check_rows(a: &RatMat, b: &RatVec) -> Result<()> {
    if b.dim() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.dim(),
            a.rows()
        )));
    }
    Ok(())
}

/// Decides `FAR(A, b)`.
///
/// Order of tests: all columns zero (then `-b` separates unless `b = 0`),
/// otherwise the exact cone distance decides membership and the nearest
/// point supplies either the conic weights or the separating functional.
pub fn farkas(a: &RatMat, b: &RatVec) -> Result<FarkasCertificate> {
    check_rows(a, b)?;
    check_column_limit(a)?;
    farkas_unchecked(a, b)
}

pub(crate) fn farkas_unchecked(a: &RatMat, b: &RatVec) -> Result<FarkasCertificate> {
    let cert = if a.is_zero() {
        if b.is_zero() {
            FarkasCertificate::Combination {
                q: RatVec::zeros(a.cols()),
            }
        } else {
            FarkasCertificate::Separation { xi: -b }
        }
    } else {
        let proj = cone::nearest_in_cone(a, b);
        if proj.dist_sq.is_zero() {
            FarkasCertificate::Combination {
                q: proj.padded_coefficients(a.cols()),
            }
        } else {
            FarkasCertificate::Separation {
                xi: cone::separation_from_projection(a, b, &proj)?,
            }
        }
    };
    ensure_accepted(Problem::Farkas(a, b), Certificate::Farkas(cert.clone()))?;
    Ok(cert)
}

/// Decides `FRED(A, b)` through `FAR((A -A), b)`.
pub fn fredholm(a: &RatMat, b: &RatVec) -> Result<FredholmCertificate> {
    check_rows(a, b)?;
    check_column_limit(a)?;
    fredholm_unchecked(a, b)
}

pub(crate) fn fredholm_unchecked(a: &RatMat, b: &RatVec) -> Result<FredholmCertificate> {
    let n = a.cols();
    let doubled = a.hcat(&a.scale(&-Rat::one()))?;
    let cert = match farkas_unchecked(&doubled, b)? {
        FarkasCertificate::Combination { q } => FredholmCertificate::Solution {
            x: (0..n).map(|i| &q[i] - &q[n + i]).collect(),
        },
        FarkasCertificate::Separation { xi } => FredholmCertificate::Orthogonal { xi },
    };
    ensure_accepted(Problem::Fredholm(a, b), Certificate::Fredholm(cert.clone()))?;
    Ok(cert)
}

/// Decides `STI(A)`.
///
/// With one column the sign of `|a|^2` decides. Otherwise `FAR(A^i, -a^i)` is
/// run for every column `i` (`A^i` drops column `i`); the separation of
/// smallest index wins, and if every instance is a combination the lifted
/// kernel vectors are normalised and averaged into a strictly positive measure.
pub fn stiemke(a: &RatMat) -> Result<StiemkeCertificate> {
    check_column_limit(a)?;
    let n = a.cols();
    let cert = if n == 1 {
        let col = a.column(0);
        if col.norm_sq().is_positive() {
            StiemkeCertificate::SemipositiveRow { xi: col }
        } else {
            StiemkeCertificate::InteriorMeasure {
                p: RatVec::from_ints(&[1]),
            }
        }
    } else {
        let indices: Vec<usize> = (0..n).collect();
        let per_column = exec::map(&indices, |&i| {
            farkas_unchecked(&a.drop_column(i), &-&a.column(i))
        });
        let mut lifted = Vec::with_capacity(n);
        let mut separation = None;
        for (i, res) in per_column.into_iter().enumerate() {
            match res? {
                FarkasCertificate::Separation { xi } => {
                    separation = Some(xi);
                    break;
                }
                FarkasCertificate::Combination { q } => {
                    // p^i has a one in slot i and A p^i = 0
                    let mut p = q.into_entries();
                    p.insert(i, Rat::one());
                    let p = RatVec::new(p);
                    let total = p.sum();
                    lifted.push(p.scale(&total.recip()));
                }
            }
        }
        match separation {
            Some(xi) => StiemkeCertificate::SemipositiveRow { xi },
            None => {
                let inv_n = Rat::new(1, n as i64);
                let sum = lifted.iter().fold(RatVec::zeros(n), |acc, p| &acc + p);
                StiemkeCertificate::InteriorMeasure {
                    p: sum.scale(&inv_n),
                }
            }
        }
    };
    ensure_accepted(Problem::Stiemke(a), Certificate::Stiemke(cert.clone()))?;
    Ok(cert)
}

/// Decides `ALT(A)` through `FAR((A E_m), -1)`.
pub fn alternatives_lemma(a: &RatMat) -> Result<AltCertificate> {
    check_column_limit(a)?;
    let (m, n) = (a.rows(), a.cols());
    let extended = a.hcat(&RatMat::identity(m))?;
    let minus_ones = RatVec::new(vec![-Rat::one(); m]);
    let cert = match farkas_unchecked(&extended, &minus_ones)? {
        FarkasCertificate::Separation { xi } => {
            let total = xi.sum();
            AltCertificate::NonnegRow {
                p: xi.scale(&total.recip()),
            }
        }
        FarkasCertificate::Combination { q } => {
            let head: RatVec = q.iter().take(n).cloned().collect();
            let total = head.sum();
            AltCertificate::NegCol {
                q: head.scale(&total.recip()),
            }
        }
    };
    ensure_accepted(
        Problem::Alternatives(a),
        Certificate::Alternatives(cert.clone()),
    )?;
    Ok(cert)
}

fn ensure_accepted(problem: Problem<'_>, cert: Certificate) -> Result<()> {
    match verify_certificate(problem, &cert) {
        Verdict::Accept => Ok(()),
        Verdict::Reject(why) => Err(Error::Internal(format!(
            "produced certificate rejected: {why}"
        ))),
    }
}

fn reject(why: impl Into<String>) -> Verdict {
    Verdict::Reject(why.into())
}

fn shape(what: &str, got: usize, want: usize) -> Option<Verdict> {
    (got != want).then(|| reject(format!("{what} has length {got}, expected {want}")))
}

/// Re-checks a certificate against its defining relations, exactly.
pub fn verify_certificate(problem: Problem<'_>, cert: &Certificate) -> Verdict {
    match (problem, cert) {
        (Problem::Farkas(a, b), Certificate::Farkas(c)) => verify_farkas(a, b, c),
        (Problem::Fredholm(a, b), Certificate::Fredholm(c)) => verify_fredholm(a, b, c),
        (Problem::Stiemke(a), Certificate::Stiemke(c)) => verify_stiemke(a, c),
        (Problem::Alternatives(a), Certificate::Alternatives(c)) => verify_alt(a, c),
        _ => reject("certificate kind does not match the problem"),
    }
}

fn verify_farkas(a: &RatMat, b: &RatVec, cert: &FarkasCertificate) -> Verdict {
    if let Some(v) = shape("b", b.dim(), a.rows()) {
        return v;
    }
    match cert {
        FarkasCertificate::Separation { xi } => {
            if let Some(v) = shape("xi", xi.dim(), a.rows()) {
                return v;
            }
            if let Some(j) = a.vec_mul(xi).iter().position(Rat::is_negative) {
                return reject(format!("(xi·A)_{} < 0", j + 1));
            }
            if !xi.dot(b).is_negative() {
                return reject("ξ·b ≥ 0");
            }
        }
        FarkasCertificate::Combination { q } => {
            if let Some(v) = shape("q", q.dim(), a.cols()) {
                return v;
            }
            if !q.is_nonneg() {
                return reject("q has a negative entry");
            }
            if &a.mul_vec(q) != b {
                return reject("A·q ≠ b");
            }
        }
    }
    Verdict::Accept
}

fn verify_fredholm(a: &RatMat, b: &RatVec, cert: &FredholmCertificate) -> Verdict {
    if let Some(v) = shape("b", b.dim(), a.rows()) {
        return v;
    }
    match cert {
        FredholmCertificate::Orthogonal { xi } => {
            if let Some(v) = shape("xi", xi.dim(), a.rows()) {
                return v;
            }
            if !a.vec_mul(xi).is_zero() {
                return reject("ξ·A ≠ 0");
            }
            if xi.dot(b).is_zero() {
                return reject("ξ·b = 0");
            }
        }
        FredholmCertificate::Solution { x } => {
            if let Some(v) = shape("x", x.dim(), a.cols()) {
                return v;
            }
            if &a.mul_vec(x) != b {
                return reject("A·x ≠ b");
            }
        }
    }
    Verdict::Accept
}

fn verify_stiemke(a: &RatMat, cert: &StiemkeCertificate) -> Verdict {
    match cert {
        StiemkeCertificate::SemipositiveRow { xi } => {
            if let Some(v) = shape("xi", xi.dim(), a.rows()) {
                return v;
            }
            if !a.vec_mul(xi).is_semipositive() {
                return reject("ξ·A is not semipositive");
            }
        }
        StiemkeCertificate::InteriorMeasure { p } => {
            if let Some(v) = shape("p", p.dim(), a.cols()) {
                return v;
            }
            if !p.is_positive() {
                return reject("p is not strictly positive");
            }
            if p.sum() != Rat::one() {
                return reject("Σp ≠ 1");
            }
            if !a.mul_vec(p).is_zero() {
                return reject("A·p ≠ 0");
            }
        }
    }
    Verdict::Accept
}

fn verify_alt(a: &RatMat, cert: &AltCertificate) -> Verdict {
    match cert {
        AltCertificate::NonnegRow { p } => {
            if let Some(v) = shape("p", p.dim(), a.rows()) {
                return v;
            }
            if !p.is_in_simplex() {
                return reject("p is not in the simplex");
            }
            if !a.vec_mul(p).is_nonneg() {
                return reject("p·A has a negative entry");
            }
        }
        AltCertificate::NegCol { q } => {
            if let Some(v) = shape("q", q.dim(), a.cols()) {
                return v;
            }
            if !q.is_in_simplex() {
                return reject("q is not in the simplex");
            }
            if !a.mul_vec(q).iter().all(Rat::is_negative) {
                return reject("A·q is not strictly negative");
            }
        }
    }
    Verdict::Accept
}
