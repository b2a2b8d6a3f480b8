//! The ring homomorphisms between `B`, `C`, their enveloping algebras and
//! the commutative rings:
//!
//! | name    | map                                                     |
//! |---------|---------------------------------------------------------|
//! | `pi`    | `B -> A`, `y_i -> x_i`; also `U(B) -> U(A)`             |
//! | `nu`    | `B -> Q[y3]`, kills `y1, y2`; also `U(B) -> Q[u, v]`    |
//! | `eps`   | `B -> C`, see [`crate::metabelian::straighten`]         |
//! | `tau`   | `C -> A`, keeps the abelian part                        |
//! | `eta`   | `A -> Q[x3]`, kills `x1, x2`; also `U(A) -> Q[l3, r3]`  |
//! | `rho`   | `Q[y3] -> Q[x3]`; also `Q[u, v] -> Q[l3, r3]`           |
//!
//! Matrix versions are entrywise via [`crate::matrix::Matrix::map`].

use std::fmt;
use std::sync::Arc;

use crate::commpoly::{ring_a, ring_fx3, ring_fy3, ring_ua, ring_ufx3, ring_uv, CommPoly, Ring};
use crate::error::{Error, Result};
use crate::matrix::{MatU, MatUA, Matrix};
use crate::metabelian::MetabelianElem;
use crate::ncpoly::{NCPoly, Word};
use crate::uenv::TensorPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingMorphismTag {
    Pi,
    Nu,
    Epsilon,
    Tau,
    Eta,
    Rho,
}

impl RingMorphismTag {
    pub const ALL: [RingMorphismTag; 6] = [
        RingMorphismTag::Pi,
        RingMorphismTag::Nu,
        RingMorphismTag::Epsilon,
        RingMorphismTag::Tau,
        RingMorphismTag::Eta,
        RingMorphismTag::Rho,
    ];

    /// (source, target) on elements.
    pub fn rings(self) -> (&'static str, &'static str) {
        match self {
            RingMorphismTag::Pi => ("B = Q<y1,y2,y3>", "A = Q[x1,x2,x3]"),
            RingMorphismTag::Nu => ("B = Q<y1,y2,y3>", "Q[y3]"),
            RingMorphismTag::Epsilon => ("B = Q<y1,y2,y3>", "C = B/R^2"),
            RingMorphismTag::Tau => ("C = B/R^2", "A = Q[x1,x2,x3]"),
            RingMorphismTag::Eta => ("A = Q[x1,x2,x3]", "Q[x3]"),
            RingMorphismTag::Rho => ("Q[y3]", "Q[x3]"),
        }
    }

    /// (source, target) on enveloping algebras.
    pub fn enveloping_rings(self) -> (&'static str, &'static str) {
        match self {
            RingMorphismTag::Pi => ("U(B)", "U(A) = Q[l1,l2,l3,r1,r2,r3]"),
            RingMorphismTag::Nu => ("U(B)", "U(Q[y3]) = Q[u,v]"),
            RingMorphismTag::Epsilon => ("U(B)", "U(A) (action on I)"),
            RingMorphismTag::Tau => ("U(C)", "U(A)"),
            RingMorphismTag::Eta => ("U(A)", "U(Q[x3]) = Q[l3,r3]"),
            RingMorphismTag::Rho => ("Q[u,v]", "Q[l3,r3]"),
        }
    }
}

impl fmt::Display for RingMorphismTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RingMorphismTag::Pi => "pi",
            RingMorphismTag::Nu => "nu",
            RingMorphismTag::Epsilon => "epsilon",
            RingMorphismTag::Tau => "tau",
            RingMorphismTag::Eta => "eta",
            RingMorphismTag::Rho => "rho",
        };
        f.write_str(name)
    }
}

fn check_three(n: usize) -> Result<()> {
    if n != 3 {
        return Err(Error::ArityMismatch(3, n));
    }
    Ok(())
}

/// Abelianisation `pi: B -> A`.
pub fn pi_b(f: &NCPoly) -> Result<CommPoly> {
    check_three(f.nvars())?;
    Ok(CommPoly::from_terms(
        &ring_a(),
        f.terms().map(|(w, c)| (w.content(3), c.clone())),
    ))
}

fn ua_exponents(left: &Word, right: &Word) -> Vec<u32> {
    let mut e = left.content(3);
    e.extend(right.content(3));
    e
}

/// `pi: U(B) -> U(A)`, `f' (x) g -> pi(f)' (x) pi(g)`.
pub fn pi_u(a: &TensorPoly) -> Result<CommPoly> {
    check_three(a.nvars())?;
    Ok(CommPoly::from_terms(
        &ring_ua(),
        a.terms().map(|((w, v), c)| (ua_exponents(w, v), c.clone())),
    ))
}

pub fn pi_matrix(m: &MatU) -> Result<MatUA> {
    m.try_map(pi_u)
}

fn only_z(w: &Word) -> bool {
    w.letters().iter().all(|&l| l == 2)
}

/// `nu: B -> Q[y3]`.
pub fn nu_b(f: &NCPoly) -> Result<CommPoly> {
    check_three(f.nvars())?;
    Ok(CommPoly::from_terms(
        &ring_fy3(),
        f.terms()
            .filter(|(w, _)| only_z(w))
            .map(|(w, c)| (vec![w.len() as u32], c.clone())),
    ))
}

/// `nu: U(B) -> Q[u, v]`; `z^a' (x) z^b -> u^a v^b`, everything else dies.
pub fn nu_u(a: &TensorPoly) -> Result<CommPoly> {
    check_three(a.nvars())?;
    Ok(CommPoly::from_terms(
        &ring_uv(),
        a.terms()
            .filter(|((w, v), _)| only_z(w) && only_z(v))
            .map(|((w, v), c)| (vec![w.len() as u32, v.len() as u32], c.clone())),
    ))
}

pub fn nu_matrix(m: &MatU) -> Result<Matrix<CommPoly>> {
    m.try_map(nu_u)
}

fn expect_ring(p: &CommPoly, ring: &Arc<Ring>) -> Result<()> {
    p.check_ring(&CommPoly::zero(ring))
}

/// `eta: A -> Q[x3]`.
pub fn eta_a(p: &CommPoly) -> Result<CommPoly> {
    expect_ring(p, &ring_a())?;
    Ok(p.map_vars(&ring_fx3(), &[None, None, Some(0)]))
}

/// `eta: U(A) -> Q[l3, r3]`, keeps `l3, r3` and kills the rest.
pub fn eta_u(p: &CommPoly) -> Result<CommPoly> {
    expect_ring(p, &ring_ua())?;
    Ok(p.map_vars(&ring_ufx3(), &[None, None, Some(0), None, None, Some(1)]))
}

pub fn eta_matrix(m: &MatUA) -> Result<Matrix<CommPoly>> {
    m.try_map(eta_u)
}

/// `rho: Q[y3] -> Q[x3]`.
pub fn rho_rename(p: &CommPoly) -> Result<CommPoly> {
    expect_ring(p, &ring_fy3())?;
    Ok(p.map_vars(&ring_fx3(), &[Some(0)]))
}

/// `rho` on enveloping algebras: `Q[u, v] -> Q[l3, r3]`.
pub fn rho_u(p: &CommPoly) -> Result<CommPoly> {
    expect_ring(p, &ring_uv())?;
    Ok(p.map_vars(&ring_ufx3(), &[Some(0), Some(1)]))
}

/// `tau: C -> A`.
pub fn tau_c(m: &MetabelianElem) -> CommPoly {
    m.abelian().clone()
}

/// Moves an element of `A` into the left (`l_i`) or right (`r_i`) bank of
/// `U(A)`.
pub fn a_to_ua(p: &CommPoly, right: bool) -> CommPoly {
    let map: Vec<Option<usize>> = (0..3)
        .map(|i| Some(if right { i + 3 } else { i }))
        .collect();
    p.map_vars(&ring_ua(), &map)
}

/// Action of an endomorphism of `A` (given by images of `x1, x2, x3`) on
/// `U(A)`: both variable banks are substituted.
pub fn induced_on_ua(images: &[CommPoly], p: &CommPoly) -> Result<CommPoly> {
    if images.len() != 3 {
        return Err(Error::ArityMismatch(3, images.len()));
    }
    let mut subst: Vec<CommPoly> = images.iter().map(|q| a_to_ua(q, false)).collect();
    subst.extend(images.iter().map(|q| a_to_ua(q, true)));
    p.substitute(&ring_ua(), &subst)
}

pub fn induced_on_ua_matrix(images: &[CommPoly], m: &MatUA) -> Result<MatUA> {
    m.try_map(|p| induced_on_ua(images, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fox::{j2, Endomorphism};
    use crate::parse::{parse_comm, parse_nc};

    fn p(s: &str) -> NCPoly {
        parse_nc(s).unwrap()
    }

    fn a(s: &str) -> CommPoly {
        parse_comm(s, &ring_a()).unwrap()
    }

    #[test]
    fn abelianisation() {
        assert_eq!(pi_b(&p("xz - zy")).unwrap(), a("x1 x3 - x2 x3"));
        assert!(pi_b(&p("[x^2 + z, y z x]")).unwrap().is_zero());
    }

    #[test]
    fn nu_examples() {
        let t = TensorPoly::parse("(z)'⊗(z)", 3).unwrap();
        assert_eq!(nu_u(&t).unwrap(), parse_comm("u v", &ring_uv()).unwrap());
        assert_eq!(
            nu_b(&p("x z^3 + z^2")).unwrap(),
            parse_comm("y3^2", &ring_fy3()).unwrap()
        );
        let anick = Endomorphism::new(vec![p("x + z(xz - zy)"), p("y + (xz - zy)z"), p("z")]);
        let nu = nu_matrix(&j2(&anick)).unwrap();
        let uv = |s: &str| parse_comm(s, &ring_uv()).unwrap();
        assert_eq!(
            nu,
            Matrix::from_rows(vec![
                vec![uv("1 + uv"), uv("v^2")],
                vec![uv("-u^2"), uv("1 - uv")],
            ])
        );
    }

    #[test]
    fn eta_keeps_third_banks() {
        let ua = ring_ua();
        let q = parse_comm("l1 r2 + 3 l3", &ua).unwrap();
        assert_eq!(
            eta_u(&q).unwrap(),
            parse_comm("3 l3", &ring_ufx3()).unwrap()
        );
        assert!(eta_u(&a("x1")).is_err());
    }

    #[test]
    fn induced_action_substitutes_both_banks() {
        let images = [a("x1 + x3^2"), a("x2"), a("x3")];
        let q = parse_comm("l1 r1", &ring_ua()).unwrap();
        let got = induced_on_ua(&images, &q).unwrap();
        assert_eq!(
            got,
            parse_comm("(l1 + l3^2)(r1 + r3^2)", &ring_ua()).unwrap()
        );
    }

    #[test]
    fn tags_describe_their_rings() {
        for tag in RingMorphismTag::ALL {
            let (s, t) = tag.rings();
            assert!(!s.is_empty() && !t.is_empty());
        }
        assert_eq!(RingMorphismTag::Eta.to_string(), "eta");
    }
}
