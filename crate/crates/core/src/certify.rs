//! Wildness certification pipelines.
//!
//! * [`certify_normalized`]: for `phi` normalized so that it abelianizes to
//!   the identity, tameness forces `nu(J2(phi))` into `E_2(Q[u, v])`. A
//!   NOT-IN certificate therefore proves `phi` wild; IN proves nothing.
//! * [`certify_xy_linear`]: for `phi = (f, g, z)` linear in `x, y`,
//!   `phi` is tame exactly when `J2(phi)` lies in `GL_2(Q) E_2(Q[u, v])`;
//!   the IN branch is turned into an explicit tame word.
//! * [`demo_anick`]: the Anick map end to end.

use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::algebra::Endomorphism;
use crate::autgroup::{anick, anick_normalizer, ElementaryAuto, TameWord};
use crate::commpoly::{ring_a, CommPoly};
use crate::e2decide::{
    decide_e2, decide_ge2f, det2, verify_certificate, CertificateRecord, E2Certificate, Mat2C,
    Position,
};
use crate::error::{Error, Result};
use crate::fox::{endo_on_matrix, j2};
use crate::matrix::{Matrix, StringMatrix};
use crate::morphisms::{nu_matrix, nu_u, pi_b};
use crate::ncpoly::{NCPoly, Word};
use crate::parse::parse_tensor_terms;
use crate::uenv::TensorPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WildnessStatus {
    CertifiedWild,
    TameWithDecomposition,
    Inconclusive,
}

impl fmt::Display for WildnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WildnessStatus::CertifiedWild => "CertifiedWild",
            WildnessStatus::TameWithDecomposition => "TameWithDecomposition",
            WildnessStatus::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone)]
pub struct WildnessVerdict {
    pub status: WildnessStatus,
    pub input: Endomorphism<NCPoly>,
    /// The map whose Jacobian was decided (after normalization).
    pub normalized: Endomorphism<NCPoly>,
    pub matrix: Mat2C,
    pub certificate: E2Certificate,
    pub decomposition: Option<TameWord<NCPoly>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    pub status: WildnessStatus,
    pub input: Vec<String>,
    pub normalized: Vec<String>,
    pub matrix: StringMatrix,
    pub certificate: CertificateRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<String>,
}

impl WildnessVerdict {
    pub fn to_record(&self) -> VerdictRecord {
        let strings = |e: &Endomorphism<NCPoly>| e.images.iter().map(|f| f.to_string()).collect();
        VerdictRecord {
            status: self.status,
            input: strings(&self.input),
            normalized: strings(&self.normalized),
            matrix: self.matrix.to_strings(),
            certificate: self.certificate.to_record(),
            decomposition: self.decomposition.as_ref().map(|w| w.to_string()),
        }
    }
}

fn check_three(phi: &Endomorphism<NCPoly>) -> Result<()> {
    if phi.nvars() != 3 || phi.images.iter().any(|f| f.nvars() != 3) {
        return Err(Error::ArityMismatch(3, phi.nvars()));
    }
    Ok(())
}

/// Fails with the first coordinate whose abelianization is not `x_i`.
pub fn check_abelianizes_to_identity(phi: &Endomorphism<NCPoly>) -> Result<()> {
    let a = ring_a();
    for (i, f) in phi.images.iter().enumerate() {
        let got = pi_b(f)?;
        if got != CommPoly::var(&a, i) {
            return Err(Error::Precondition(format!(
                "normalized map does not abelianize to the identity: coordinate {} maps to {}",
                i + 1,
                got
            )));
        }
    }
    Ok(())
}

/// Decides `nu(J2(phi sigma))` for the user-supplied normalizer `sigma`.
pub fn certify_normalized(
    phi: &Endomorphism<NCPoly>,
    normalizer: Option<&TameWord<NCPoly>>,
) -> Result<WildnessVerdict> {
    check_three(phi)?;
    let normalized = match normalizer {
        Some(w) => phi.compose(&w.evaluate()),
        None => phi.clone(),
    };
    check_abelianizes_to_identity(&normalized)?;
    let matrix = nu_matrix(&j2(&normalized))?;
    let certificate = decide_e2(&matrix)?;
    verify_certificate(&certificate)?;
    let status = if certificate.is_in() {
        WildnessStatus::Inconclusive
    } else {
        WildnessStatus::CertifiedWild
    };
    Ok(WildnessVerdict {
        status,
        input: phi.clone(),
        normalized,
        matrix,
        certificate,
        decomposition: None,
    })
}

fn only_z(w: &Word) -> bool {
    w.letters().iter().all(|&l| l == 2)
}

/// `J2` entries as polynomials in `u = z' (x) 1`, `v = 1 (x) z`; fails if
/// an entry leaves that subring.
fn j2_over_uv(m: &Matrix<TensorPoly>) -> Result<Mat2C> {
    m.try_map(|t| {
        if t.terms().any(|((w, v), _)| !only_z(w) || !only_z(v)) {
            return Err(Error::Precondition(format!(
                "J2 entry {t} is not a polynomial in z'(x)1 and 1(x)z"
            )));
        }
        nu_u(t)
    })
}

/// `sum c u^a v^b -> sum c z^a letter z^b`.
pub fn uv_to_sandwich(p: &CommPoly, letter: usize) -> NCPoly {
    NCPoly::from_terms(
        3,
        p.terms()
            .map(|(e, c)| {
                let mut w = vec![2u8; e[0] as usize];
                w.push(letter as u8);
                w.extend(std::iter::repeat_n(2u8, e[1] as usize));
                (Word(w), c.clone())
            })
            .collect::<Vec<_>>(),
    )
}

/// The shape `(f, g, z)` with `f, g` of degree at most one in `x, y`.
pub fn check_xy_linear_shape(phi: &Endomorphism<NCPoly>) -> Result<()> {
    check_three(phi)?;
    if phi.images[2] != NCPoly::generator(3, 2) {
        return Err(Error::Precondition(format!(
            "third coordinate must be z, got {}",
            phi.images[2]
        )));
    }
    for (k, f) in phi.images[..2].iter().enumerate() {
        if f.degree_in(&[0, 1]).unwrap_or(0) > 1 {
            return Err(Error::Precondition(format!(
                "coordinate {} has degree {} in x, y; at most 1 is allowed",
                k + 1,
                f.degree_in(&[0, 1]).unwrap_or(0)
            )));
        }
    }
    Ok(())
}

pub fn certify_xy_linear(phi: &Endomorphism<NCPoly>) -> Result<WildnessVerdict> {
    check_xy_linear_shape(phi)?;
    let matrix = j2_over_uv(&j2(phi))?;
    let certificate = decide_ge2f(&matrix)?;
    verify_certificate(&certificate)?;
    if !certificate.is_in() {
        return Ok(WildnessVerdict {
            status: WildnessStatus::CertifiedWild,
            input: phi.clone(),
            normalized: phi.clone(),
            matrix,
            certificate,
            decomposition: None,
        });
    }
    let word = decomposition_from_certificate(phi, &certificate)?;
    if word.evaluate() != *phi {
        return Err(Error::CheckFailed(
            "tame decomposition does not re-evaluate to the input".into(),
        ));
    }
    Ok(WildnessVerdict {
        status: WildnessStatus::TameWithDecomposition,
        input: phi.clone(),
        normalized: phi.clone(),
        matrix,
        certificate,
        decomposition: Some(word),
    })
}

/// `E21(t) -> sigma(1, 1, t(z) y)`, `E12(t) -> sigma(2, 1, t(z) x)`,
/// `diag(d, 1) -> sigma(1, d, 0)`, followed by the residual translation
/// `(x + a(z), y + b(z), z)`.
fn decomposition_from_certificate(
    phi: &Endomorphism<NCPoly>,
    cert: &E2Certificate,
) -> Result<TameWord<NCPoly>> {
    let mut word = TameWord::identity(3);
    if let Some(d) = &cert.scalar {
        word.push(ElementaryAuto::new(0, d.clone(), NCPoly::zero(3))?);
    }
    for f in &cert.factors {
        if f.param.is_zero() {
            continue;
        }
        let e = match f.position {
            Position::P21 => ElementaryAuto::new(0, One::one(), uv_to_sandwich(&f.param, 1))?,
            Position::P12 => ElementaryAuto::new(1, One::one(), uv_to_sandwich(&f.param, 0))?,
        };
        word.push(e);
    }
    let chi = word.inverse().evaluate().compose(phi);
    for (k, letter) in [(0usize, "x"), (1, "y")] {
        let tail = &chi.images[k] - &NCPoly::generator(3, k);
        if tail.involves(0) || tail.involves(1) {
            return Err(Error::CheckFailed(format!(
                "residual coordinate {letter} + {tail} is not a translation by a polynomial in z"
            )));
        }
        if !tail.is_zero() {
            word.push(ElementaryAuto::new(k, One::one(), tail)?);
        }
    }
    Ok(word)
}

/// `J2` of the Anick map as printed: `[[1 + z'(x)z, 1(x)z^2], [-(z'(x)1)^2, 1 - z'(x)z]]`.
pub fn anick_j2_display() -> Matrix<TensorPoly> {
    let t = |s: &str| {
        let mut out = TensorPoly::zero(3);
        for (c, f, g) in parse_tensor_terms(s, 3).expect("constant") {
            out = &out + &TensorPoly::pure(&f, &g).expect("arity").scale(&c);
        }
        out
    };
    Matrix::from_rows(vec![
        vec![t("1 + (z)'⊗(z)"), t("(1)'⊗(z^2)")],
        vec![t("-(z^2)'⊗(1)"), t("1 - (z)'⊗(z)")],
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoStep {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub steps: Vec<DemoStep>,
    pub j2: StringMatrix,
    pub normalizer: String,
    pub nu_j2_normalized: StringMatrix,
    /// Certificate for the image of the normalizer's `J2`.
    pub tame_factor: Option<CertificateRecord>,
    pub certificate: Option<CertificateRecord>,
    pub witness: Option<StringMatrix>,
    pub verdict: Option<WildnessStatus>,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&DemoStep> {
        self.steps.iter().find(|s| !s.passed)
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            let mark = if s.passed { "ok  " } else { "FAIL" };
            writeln!(f, "[{mark}] {}. {}", k + 1, s.name)?;
            for line in s.detail.lines() {
                writeln!(f, "         {line}")?;
            }
        }
        match self.verdict {
            Some(v) => writeln!(f, "verdict: {v}"),
            None => writeln!(f, "verdict: none"),
        }
    }
}

/// The normalizer with the sign of its middle factor flipped; used as a
/// negative control.
pub fn corrupted_normalizer() -> TameWord<NCPoly> {
    TameWord::parse("s(1,1,-y); s(2,1,x*z^2); s(1,1,y)", 3).expect("constant word")
}

fn step(name: &str, passed: bool, detail: String) -> DemoStep {
    DemoStep {
        name: name.into(),
        passed,
        detail,
    }
}

/// Runs the five Anick checks. With `corrupt` the normalizer is replaced by
/// [`corrupted_normalizer`], so the abelianization check must fail.
pub fn demo_anick(corrupt: bool) -> Result<DemoReport> {
    let delta = anick();
    let sigma_word = if corrupt {
        corrupted_normalizer()
    } else {
        anick_normalizer()
    };
    let sigma = sigma_word.evaluate();
    let mut steps = Vec::new();

    let j = j2(&delta);
    let expected = anick_j2_display();
    steps.push(step(
        "J2(delta) matches the printed matrix",
        j == expected,
        j.to_string(),
    ));

    let nu_delta = nu_matrix(&j)?;
    let det = det2(&nu_delta);
    steps.push(step(
        "det nu(J2(delta)) = 1",
        det.is_one(),
        format!("det = {det}"),
    ));

    let normalized = delta.compose(&sigma);
    let pi_check = check_abelianizes_to_identity(&normalized);
    steps.push(step(
        "pi(delta sigma) = id",
        pi_check.is_ok(),
        match &pi_check {
            Ok(()) => format!("sigma = {sigma_word}"),
            Err(e) => e.to_string(),
        },
    ));

    // nu(J2(delta sigma)) = nu(J2(delta)) nu(delta(J2(sigma))), since delta
    // fixes z; the second factor comes from a tame map and lies in E2.
    let nu_norm = nu_matrix(&j2(&normalized))?;
    let tame_part = nu_matrix(&endo_on_matrix(&delta, &j2(&sigma))?)?;
    let tame_cert = decide_e2(&tame_part)?;
    let cert = decide_e2(&nu_norm)?;
    let factor_ok = nu_delta.mul(&tame_part) == nu_norm
        && tame_cert.is_in()
        && verify_certificate(&tame_cert).is_ok();
    let not_in = !cert.is_in() && verify_certificate(&cert).is_ok();
    let mut detail = format!("nu(J2(delta sigma)) =\n{nu_norm}");
    if let Some(w) = &cert.witness {
        detail.push_str(&format!("stuck witness =\n{w}"));
    }
    detail.push_str(&format!(
        "tame factor nu(delta(J2(sigma))) certified {}",
        tame_cert.verdict
    ));
    steps.push(step(
        "nu(J2(delta sigma)) is NOT-IN E2 with a stuck witness",
        not_in && factor_ok,
        detail,
    ));

    let verdict = certify_normalized(&delta, Some(&sigma_word));
    let status = verdict.as_ref().ok().map(|v| v.status);
    steps.push(step(
        "final verdict is CertifiedWild",
        status == Some(WildnessStatus::CertifiedWild),
        match &verdict {
            Ok(v) => v.status.to_string(),
            Err(e) => e.to_string(),
        },
    ));

    Ok(DemoReport {
        steps,
        j2: j.to_strings(),
        normalizer: sigma_word.to_string(),
        nu_j2_normalized: nu_norm.to_strings(),
        tame_factor: Some(tame_cert.to_record()),
        witness: cert.witness.as_ref().map(Matrix::to_strings),
        certificate: Some(cert.to_record()),
        verdict: status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_nc;

    fn p(s: &str) -> NCPoly {
        parse_nc(s).unwrap()
    }

    #[test]
    fn identity_is_inconclusive() {
        let v = certify_normalized(&Endomorphism::identity(3), None).unwrap();
        assert_eq!(v.status, WildnessStatus::Inconclusive);
    }

    #[test]
    fn anick_is_wild_once_normalized() {
        let v = certify_normalized(&anick(), Some(&anick_normalizer())).unwrap();
        assert_eq!(v.status, WildnessStatus::CertifiedWild);
    }

    #[test]
    fn missing_normalizer_names_the_coordinate() {
        let err = certify_normalized(&anick(), None).unwrap_err();
        assert!(err.to_string().contains("coordinate 1"), "{err}");
    }

    #[test]
    fn xy_linear_examples() {
        let v = certify_xy_linear(&anick()).unwrap();
        assert_eq!(v.status, WildnessStatus::CertifiedWild);

        let swap = Endomorphism::new(vec![p("y"), p("x"), p("z")]);
        let v = certify_xy_linear(&swap).unwrap();
        assert_eq!(v.status, WildnessStatus::TameWithDecomposition);
        assert_eq!(v.decomposition.unwrap().evaluate(), swap);

        let tail = Endomorphism::new(vec![
            p("x + zxz - z^2 y + z^3"),
            p("y + x z^2 - zyz"),
            p("z"),
        ]);
        assert_eq!(
            certify_xy_linear(&tail).unwrap().status,
            WildnessStatus::CertifiedWild
        );
    }

    #[test]
    fn xy_linear_rejects_other_shapes() {
        let bad = Endomorphism::new(vec![p("x + y^2"), p("y"), p("z")]);
        assert!(matches!(
            certify_xy_linear(&bad),
            Err(Error::Precondition(_))
        ));
        let bad = Endomorphism::new(vec![p("x"), p("y"), p("z + x")]);
        assert!(matches!(
            certify_xy_linear(&bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn demo_passes_and_negative_control_fails() {
        let r = demo_anick(false).unwrap();
        assert!(r.passed(), "{r}");
        let bad = demo_anick(true).unwrap();
        assert!(!bad.passed());
        assert_eq!(bad.first_failure().unwrap().name, "pi(delta sigma) = id");
    }
}
