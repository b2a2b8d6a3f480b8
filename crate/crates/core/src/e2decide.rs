//! Membership in `E_2(R)` and `GL_2(F) E_2(R)` for commutative polynomial
//! rings `R`, decided by greedy degree reduction with certificates.
//!
//! The loop applies elementary row and column operations that strictly
//! lower the measure `sum over nonzero entries of (deg + 1)`. Once an entry
//! is a nonzero constant the matrix is finished off explicitly; if no move
//! helps the current matrix is returned as a stuck witness. Positive
//! answers are always re-multiplied before they are returned.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::autgroup::{random_comm_poly, SamplerConfig};
use crate::commpoly::{CommPoly, Ring};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, StringMatrix};
use crate::parse::parse_comm;
use crate::scalar::Scalar;

pub type Mat2C = Matrix<CommPoly>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Position {
    #[serde(rename = "12")]
    P12,
    #[serde(rename = "21")]
    P21,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::P12 => "E12",
            Position::P21 => "E21",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "NOT-IN")]
    NotIn,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::In => "IN",
            Verdict::NotIn => "NOT-IN",
        })
    }
}

/// `E_12(d)` or `E_21(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryFactor {
    pub position: Position,
    pub param: CommPoly,
}

impl ElementaryFactor {
    pub fn new(position: Position, param: CommPoly) -> Self {
        ElementaryFactor { position, param }
    }

    pub fn matrix(&self) -> Mat2C {
        let (i, j) = match self.position {
            Position::P12 => (0, 1),
            Position::P21 => (1, 0),
        };
        Matrix::elementary(2, i, j, &self.param)
    }

    pub fn inverse(&self) -> Self {
        ElementaryFactor::new(self.position, -&self.param)
    }
}

impl fmt::Display for ElementaryFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.position, self.param)
    }
}

/// A recorded reduction step: multiply by `E(param)` on `side`.
#[derive(Debug, Clone, PartialEq)]
pub struct Move {
    pub side: Side,
    pub factor: ElementaryFactor,
}

impl Move {
    pub fn apply(&self, m: &Mat2C) -> Mat2C {
        match self.side {
            Side::Left => self.factor.matrix().mul(m),
            Side::Right => m.mul(&self.factor.matrix()),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "{side} {}", self.factor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct E2Certificate {
    pub verdict: Verdict,
    pub input: Mat2C,
    /// `d` when the certificate is for `diag(d, 1) * E_2`.
    pub scalar: Option<Scalar>,
    /// IN: `input = diag(scalar, 1) * factors[0] * factors[1] * ...`.
    pub factors: Vec<ElementaryFactor>,
    /// Reduction moves, replayable from the (scaled) input.
    pub moves: Vec<Move>,
    /// NOT-IN: the matrix at which reduction stopped.
    pub witness: Option<Mat2C>,
    pub reason: Option<String>,
    pub log: Vec<String>,
}

impl E2Certificate {
    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::In
    }

    /// Product of the factor list, including the scalar prefix.
    pub fn product(&self) -> Mat2C {
        let sample = self.input.get(0, 0);
        let mut acc = Matrix::identity_like(2, sample);
        if let Some(d) = &self.scalar {
            acc.set(0, 0, CommPoly::constant(sample.ring(), d.clone()));
        }
        for f in &self.factors {
            acc = acc.mul(&f.matrix());
        }
        acc
    }

    pub fn to_record(&self) -> CertificateRecord {
        let ring = self.input.get(0, 0).ring().names().to_vec();
        CertificateRecord {
            verdict: self.verdict,
            ring,
            input: self.input.to_strings(),
            scalar: self.scalar.as_ref().map(|d| d.to_string()),
            factors: self
                .factors
                .iter()
                .map(|f| FactorRecord {
                    position: f.position,
                    parameter: f.param.to_string(),
                })
                .collect(),
            moves: self
                .moves
                .iter()
                .map(|m| MoveRecord {
                    side: m.side,
                    position: m.factor.position,
                    parameter: m.factor.param.to_string(),
                })
                .collect(),
            witness: self.witness.as_ref().map(Matrix::to_strings),
            reason: self.reason.clone(),
            log: self.log.clone(),
        }
    }

    pub fn from_record(r: &CertificateRecord) -> Result<Self> {
        let ring = Ring::new(&r.ring);
        let poly = |s: &str| parse_comm(s, &ring);
        let matrix = |m: &StringMatrix| -> Result<Mat2C> {
            let rows =
                m.0.iter()
                    .map(|row| row.iter().map(|s| poly(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
            if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                return Err(Error::Precondition(
                    "certificate matrices must be 2x2".into(),
                ));
            }
            Ok(Matrix::from_rows(rows))
        };
        let scalar = match &r.scalar {
            None => None,
            Some(s) => Some(
                poly(s)?
                    .as_constant()
                    .ok_or_else(|| Error::Precondition("scalar must be a constant".into()))?,
            ),
        };
        Ok(E2Certificate {
            verdict: r.verdict,
            input: matrix(&r.input)?,
            scalar,
            factors: r
                .factors
                .iter()
                .map(|f| Ok(ElementaryFactor::new(f.position, poly(&f.parameter)?)))
                .collect::<Result<_>>()?,
            moves: r
                .moves
                .iter()
                .map(|m| {
                    Ok(Move {
                        side: m.side,
                        factor: ElementaryFactor::new(m.position, poly(&m.parameter)?),
                    })
                })
                .collect::<Result<_>>()?,
            witness: r.witness.as_ref().map(matrix).transpose()?,
            reason: r.reason.clone(),
            log: r.log.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub position: Position,
    pub parameter: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub side: Side,
    pub position: Position,
    pub parameter: String,
}

/// Serialized certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub verdict: Verdict,
    pub ring: Vec<String>,
    pub input: StringMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scalar: Option<String>,
    pub factors: Vec<FactorRecord>,
    pub moves: Vec<MoveRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<StringMatrix>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub log: Vec<String>,
}

pub fn det2(m: &Mat2C) -> CommPoly {
    m.det2()
}

/// Sum over nonzero entries of `total degree + 1`.
pub fn measure(m: &Mat2C) -> u64 {
    m.entries()
        .iter()
        .filter_map(|p| p.total_degree().map(|d| u64::from(d) + 1))
        .sum()
}

fn check_square_two(m: &Mat2C) -> Result<Arc<Ring>> {
    if (m.rows(), m.cols()) != (2, 2) {
        return Err(Error::Precondition(format!(
            "expected a 2x2 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let first = m.get(0, 0);
    for p in m.entries() {
        first.check_ring(p)?;
    }
    Ok(first.ring().clone())
}

/// Elementary factors multiplying to `diag(alpha, alpha^{-1})`:
/// `E12(a) E21(-1/a) E12(a) E12(-1) E21(1) E12(-1)`.
pub fn whitehead_factor(ring: &Arc<Ring>, alpha: &Scalar) -> Result<Vec<ElementaryFactor>> {
    if alpha.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let c = |s: Scalar| CommPoly::constant(ring, s);
    let one = Scalar::one();
    let factors = vec![
        ElementaryFactor::new(Position::P12, c(alpha.clone())),
        ElementaryFactor::new(Position::P21, c(-alpha.recip())),
        ElementaryFactor::new(Position::P12, c(alpha.clone())),
        ElementaryFactor::new(Position::P12, c(-one.clone())),
        ElementaryFactor::new(Position::P21, c(one.clone())),
        ElementaryFactor::new(Position::P12, c(-one)),
    ];
    let mut prod = Matrix::identity_like(2, &CommPoly::zero(ring));
    for f in &factors {
        prod = prod.mul(&f.matrix());
    }
    let mut diag = Matrix::identity_like(2, &CommPoly::zero(ring));
    diag.set(0, 0, c(alpha.clone()));
    diag.set(1, 1, c(alpha.recip()));
    if prod != diag {
        return Err(Error::CheckFailed("diagonal factorization".into()));
    }
    Ok(factors)
}

/// Quotients `q` of `target` by `pivot` obtained by repeatedly cancelling
/// the top-degree piece, one candidate per step.
fn descending_quotients(target: &CommPoly, pivot: &CommPoly) -> Vec<CommPoly> {
    let mut out = Vec::new();
    if pivot.is_zero() {
        return out;
    }
    let lead_pivot = pivot.leading_form();
    let mut q = CommPoly::zero(target.ring());
    let mut rem = target.clone();
    while !rem.is_zero() {
        let Some(t) = rem.leading_form().exact_div(&lead_pivot) else {
            break;
        };
        rem = &rem - &(&t * pivot);
        q = &q + &t;
        out.push(q.clone());
    }
    out
}

type Cell = (usize, usize);

/// `(side, position, target cell, pivot cell)` for every move family.
const FAMILIES: [(Side, Position, Cell, Cell); 8] = [
    // row0 += q row1
    (Side::Left, Position::P12, (0, 0), (1, 0)),
    (Side::Left, Position::P12, (0, 1), (1, 1)),
    // row1 += q row0
    (Side::Left, Position::P21, (1, 0), (0, 0)),
    (Side::Left, Position::P21, (1, 1), (0, 1)),
    // col1 += col0 q
    (Side::Right, Position::P12, (0, 1), (0, 0)),
    (Side::Right, Position::P12, (1, 1), (1, 0)),
    // col0 += col1 q
    (Side::Right, Position::P21, (0, 0), (0, 1)),
    (Side::Right, Position::P21, (1, 0), (1, 1)),
];

/// The best strictly measure-decreasing move, if any.
pub fn best_move(m: &Mat2C) -> Option<(Move, Mat2C, u64)> {
    let current = measure(m);
    let mut best: Option<(Move, Mat2C, u64)> = None;
    for (side, position, target, pivot) in FAMILIES {
        let t = m.get(target.0, target.1);
        let p = m.get(pivot.0, pivot.1);
        for q in descending_quotients(t, p) {
            let mv = Move {
                side,
                factor: ElementaryFactor::new(position, -&q),
            };
            let next = mv.apply(m);
            let score = measure(&next);
            if score < current && best.as_ref().is_none_or(|b| score < b.2) {
                best = Some((mv, next, score));
            }
        }
    }
    best
}

fn constant_entry(m: &Mat2C) -> Option<((usize, usize), Scalar)> {
    for i in 0..2 {
        for j in 0..2 {
            if let Some(c) = m.get(i, j).as_constant() {
                if !c.is_zero() {
                    return Some(((i, j), c));
                }
            }
        }
    }
    None
}

/// Moves that bring a unimodular matrix with a nonzero constant entry to
/// diagonal form.
fn finishing_moves(m: &Mat2C, cell: (usize, usize), c: &Scalar) -> Vec<Move> {
    let ring = m.get(0, 0).ring();
    let mv = |side, position, q: CommPoly| Move {
        side,
        factor: ElementaryFactor::new(position, q),
    };
    let inv = c.recip();
    let mut out = Vec::new();
    let mut cur = m.clone();
    let push = |cur: &mut Mat2C, out: &mut Vec<Move>, x: Move| {
        *cur = x.apply(cur);
        out.push(x);
    };
    let anchor = match cell {
        (0, 1) => {
            let q = (&CommPoly::one(ring) - cur.get(0, 0)).scale(&inv);
            push(&mut cur, &mut out, mv(Side::Right, Position::P21, q));
            (0, 0)
        }
        (1, 0) => {
            let q = (&CommPoly::one(ring) - cur.get(0, 0)).scale(&inv);
            push(&mut cur, &mut out, mv(Side::Left, Position::P12, q));
            (0, 0)
        }
        other => other,
    };
    let alpha = cur
        .get(anchor.0, anchor.1)
        .as_constant()
        .expect("constant pivot");
    let ainv = alpha.recip();
    if anchor == (0, 0) {
        let q = cur.get(1, 0).scale(&-ainv.clone());
        push(&mut cur, &mut out, mv(Side::Left, Position::P21, q));
        let q = cur.get(0, 1).scale(&-ainv);
        push(&mut cur, &mut out, mv(Side::Right, Position::P12, q));
    } else {
        let q = cur.get(0, 1).scale(&-ainv.clone());
        push(&mut cur, &mut out, mv(Side::Left, Position::P12, q));
        let q = cur.get(1, 0).scale(&-ainv);
        push(&mut cur, &mut out, mv(Side::Right, Position::P21, q));
    }
    out.retain(|m| !m.factor.param.is_zero());
    out
}

/// Decides membership in `E_2(R)`.
pub fn decide_e2(m: &Mat2C) -> Result<E2Certificate> {
    let ring = check_square_two(m)?;
    let mut cert = E2Certificate {
        verdict: Verdict::NotIn,
        input: m.clone(),
        scalar: None,
        factors: Vec::new(),
        moves: Vec::new(),
        witness: None,
        reason: None,
        log: Vec::new(),
    };
    let det = det2(m);
    if !det.is_one() {
        cert.reason = Some(format!("det = {det} is not 1"));
        cert.witness = Some(m.clone());
        cert.log.push(format!("determinant {det}; not in SL2"));
        return Ok(cert);
    }
    let mut cur = m.clone();
    let mut moves: Vec<Move> = Vec::new();
    loop {
        if cur.is_identity() {
            cert.log.push("reached the identity".into());
            break;
        }
        if let Some((cell, c)) = constant_entry(&cur) {
            cert.log.push(format!(
                "constant entry {c} at ({}, {}); finishing",
                cell.0 + 1,
                cell.1 + 1
            ));
            for mv in finishing_moves(&cur, cell, &c) {
                cur = mv.apply(&cur);
                cert.log.push(format!("{mv}"));
                moves.push(mv);
            }
            break;
        }
        match best_move(&cur) {
            Some((mv, next, score)) => {
                cert.log
                    .push(format!("{mv}: measure {} -> {score}", measure(&cur)));
                moves.push(mv);
                cur = next;
            }
            None => {
                cert.log.push(format!("stuck at measure {}", measure(&cur)));
                cert.witness = Some(cur);
                cert.reason = Some("no elementary move lowers the degree measure".into());
                cert.moves = moves;
                return Ok(cert);
            }
        }
    }
    let diag = cur;
    let alpha = diag
        .get(0, 0)
        .as_constant()
        .ok_or_else(|| Error::CheckFailed("reduction did not end diagonal".into()))?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for mv in &moves {
        match mv.side {
            Side::Left => left.push(mv.factor.inverse()),
            Side::Right => right.push(mv.factor.inverse()),
        }
    }
    let mut factors = left;
    if !alpha.is_one() {
        factors.extend(whitehead_factor(&ring, &alpha)?);
    }
    factors.extend(right.into_iter().rev());
    cert.verdict = Verdict::In;
    cert.factors = factors;
    cert.moves = moves;
    if cert.product() != *m {
        return Err(Error::CheckFailed(
            "E2 factorization does not re-multiply to the input".into(),
        ));
    }
    Ok(cert)
}

/// Decides membership in `GL_2(F) E_2(R)`: the determinant must be a
/// nonzero constant `d`, and `diag(1/d, 1) m` must lie in `E_2(R)`.
pub fn decide_ge2f(m: &Mat2C) -> Result<E2Certificate> {
    let ring = check_square_two(m)?;
    let det = det2(m);
    let d = match det.as_constant() {
        Some(d) if !d.is_zero() => d,
        _ => {
            return Ok(E2Certificate {
                verdict: Verdict::NotIn,
                input: m.clone(),
                scalar: None,
                factors: Vec::new(),
                moves: Vec::new(),
                witness: Some(m.clone()),
                reason: Some(format!("det = {det} is not a nonzero constant")),
                log: vec![format!("determinant {det}")],
            })
        }
    };
    let mut scale = Matrix::identity_like(2, &CommPoly::zero(&ring));
    scale.set(0, 0, CommPoly::constant(&ring, d.recip()));
    let mut cert = decide_e2(&scale.mul(m))?;
    cert.input = m.clone();
    if !d.is_one() {
        cert.scalar = Some(d.clone());
        cert.log.insert(0, format!("scaled the first row by 1/{d}"));
    }
    if cert.is_in() && cert.product() != *m {
        return Err(Error::CheckFailed(
            "GL2(F) E2 factorization does not re-multiply to the input".into(),
        ));
    }
    Ok(cert)
}

/// Whether `m` admits neither a finishing step nor a measure-decreasing
/// move.
pub fn is_stuck(m: &Mat2C) -> bool {
    !m.is_identity() && constant_entry(m).is_none() && best_move(m).is_none()
}

/// Standalone check of a certificate, independent of how it was produced.
pub fn verify_certificate(cert: &E2Certificate) -> Result<()> {
    check_square_two(&cert.input)?;
    let ring = cert.input.get(0, 0).ring().clone();
    let mut start = cert.input.clone();
    if let Some(d) = &cert.scalar {
        if d.is_zero() {
            return Err(Error::CheckFailed("zero scalar prefix".into()));
        }
        let mut scale = Matrix::identity_like(2, &CommPoly::zero(&ring));
        scale.set(0, 0, CommPoly::constant(&ring, d.recip()));
        start = scale.mul(&start);
    }
    let mut cur = start.clone();
    for mv in &cert.moves {
        cur = mv.apply(&cur);
    }
    match cert.verdict {
        Verdict::In => {
            if cert.product() != cert.input {
                return Err(Error::CheckFailed(
                    "factors do not multiply to the input".into(),
                ));
            }
            let diagonal = cur.get(0, 1).is_zero()
                && cur.get(1, 0).is_zero()
                && cur.get(0, 0).as_constant().is_some();
            if !diagonal {
                return Err(Error::CheckFailed(
                    "moves do not reach a constant diagonal".into(),
                ));
            }
        }
        Verdict::NotIn => {
            let witness = cert
                .witness
                .as_ref()
                .ok_or_else(|| Error::CheckFailed("NOT-IN certificate without witness".into()))?;
            let det_fails = !det2(&start).is_one();
            if det_fails {
                return Ok(());
            }
            if cur != *witness {
                return Err(Error::CheckFailed("moves do not reach the witness".into()));
            }
            if !is_stuck(witness) {
                return Err(Error::CheckFailed("witness admits a reducing move".into()));
            }
        }
    }
    Ok(())
}

/// A random product of `count` elementary matrices with parameters of total
/// degree at most `max_degree`, alternating positions so that neighbours
/// never merge.
pub fn random_e2_product<R: rand::Rng + ?Sized>(
    rng: &mut R,
    ring: &Arc<Ring>,
    count: usize,
    max_degree: u32,
    max_terms: usize,
) -> (Vec<ElementaryFactor>, Mat2C) {
    let cfg = SamplerConfig {
        coeff_bound: 3,
        max_degree: max_degree as usize,
        max_terms,
    };
    let mut factors = Vec::with_capacity(count);
    let mut position = if rng.gen_bool(0.5) {
        Position::P12
    } else {
        Position::P21
    };
    let mut prod = Matrix::identity_like(2, &CommPoly::zero(ring));
    for _ in 0..count {
        let mut param = CommPoly::zero(ring);
        while param.is_zero() {
            param = random_comm_poly(rng, ring, &cfg);
        }
        let f = ElementaryFactor::new(position, param);
        prod = prod.mul(&f.matrix());
        factors.push(f);
        position = match position {
            Position::P12 => Position::P21,
            Position::P21 => Position::P12,
        };
    }
    (factors, prod)
}
