//! The free metabelian associative algebra `C = B / R^2` on `z1, z2, z3`.
//!
//! Every element is `f0 + f1` with `f0` a combination of ordered monomials
//! `z1^a z2^b z3^c` (stored as a polynomial of `A`) and `f1` in the
//! commutator ideal `I`, written as
//!
//! ```text
//! f1 = [z1,z2]·f12 + [z1,z3]·f13 + [z2,z3]·f23,   f_ij in U(A)
//! ```
//!
//! with the right action `m·(p' (x) q) = p m q`. The three commutators are
//! not a free basis of `I`: the Jacobi identity gives
//! `[z1,z2]·(r3 - l3) + [z2,z3]·(r1 - l1) - [z1,z3]·(r2 - l2) = 0`.
//! The canonical form uses it to remove `r1` from `f23`, which matches the
//! basis `z^a [z_i, z_k] z^b` (`i > k`, `b` only in letters `>= z_k`) of `I`.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::autgroup::{ElementaryAuto, TameWord};
use crate::commpoly::{ring_a, ring_ua, CommPoly};
use crate::error::{Error, Result};
use crate::fox::fox_word;
use crate::matrix::{MatUA, Matrix};
use crate::morphisms::{a_to_ua, induced_on_ua};
use crate::ncpoly::{NCPoly, Word};
use crate::scalar::Scalar;

/// Index pairs of the commutator coordinates, in storage order.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn pair_slot(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("no commutator slot for ({i}, {j})"),
    }
}

// U(A) variable positions: l1 l2 l3 r1 r2 r3.
const L: [usize; 3] = [0, 1, 2];
const R: [usize; 3] = [3, 4, 5];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetabelianElem {
    abelian: CommPoly,
    comm: [CommPoly; 3],
}

impl MetabelianElem {
    pub fn zero() -> Self {
        let ua = ring_ua();
        MetabelianElem {
            abelian: CommPoly::zero(&ring_a()),
            comm: [
                CommPoly::zero(&ua),
                CommPoly::zero(&ua),
                CommPoly::zero(&ua),
            ],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut m = Self::zero();
        m.abelian = CommPoly::constant(&ring_a(), c);
        m
    }

    pub fn generator(i: usize) -> Self {
        let mut m = Self::zero();
        m.abelian = CommPoly::var(&ring_a(), i);
        m
    }

    /// Builds the element `f0 + [z1,z2]·f12 + [z1,z3]·f13 + [z2,z3]·f23`,
    /// reducing it to canonical form.
    pub fn from_parts(abelian: CommPoly, triple: [CommPoly; 3]) -> Result<Self> {
        abelian.check_ring(&CommPoly::zero(&ring_a()))?;
        for t in &triple {
            t.check_ring(&CommPoly::zero(&ring_ua()))?;
        }
        Ok(MetabelianElem {
            abelian,
            comm: canonical_triple(triple),
        })
    }

    /// `[z_i, z_j]` times the `U(A)` coefficient `coeff`.
    pub fn commutator_term(i: usize, j: usize, coeff: CommPoly) -> Self {
        let mut m = Self::zero();
        let sign = if i < j { Scalar::one() } else { -Scalar::one() };
        m.comm[pair_slot(i, j)] = coeff.scale(&sign);
        m.comm = canonical_triple(m.comm);
        m
    }

    pub fn abelian(&self) -> &CommPoly {
        &self.abelian
    }

    /// `(f12, f13, f23)` in canonical form (`f23` free of `r1`).
    pub fn triple(&self) -> &[CommPoly; 3] {
        &self.comm
    }

    pub fn is_zero(&self) -> bool {
        self.abelian.is_zero() && self.comm.iter().all(CommPoly::is_zero)
    }

    /// Membership in the commutator ideal `I`.
    pub fn in_commutator_ideal(&self) -> bool {
        self.abelian.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        MetabelianElem {
            abelian: &self.abelian + &other.abelian,
            comm: [
                &self.comm[0] + &other.comm[0],
                &self.comm[1] + &other.comm[1],
                &self.comm[2] + &other.comm[2],
            ],
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        MetabelianElem {
            abelian: self.abelian.scale(c),
            comm: [
                self.comm[0].scale(c),
                self.comm[1].scale(c),
                self.comm[2].scale(c),
            ],
        }
    }

    /// Right `U(A)`-action on the commutator part; the abelian part must be
    /// zero.
    pub fn act(&self, p: &CommPoly) -> Self {
        debug_assert!(self.in_commutator_ideal());
        MetabelianElem {
            abelian: CommPoly::zero(&ring_a()),
            comm: canonical_triple([&self.comm[0] * p, &self.comm[1] * p, &self.comm[2] * p]),
        }
    }

    /// Product in `C`. Using `I^2 = 0`:
    /// `(a0 + a1)(b0 + b1) = eps(a0 b0) + a1·(1 (x) b0) + b1·(a0' (x) 1)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Accumulator::new();
        for (ea, ca) in self.abelian.terms() {
            for (eb, cb) in other.abelian.terms() {
                let mut letters = ordered_word(ea);
                letters.extend(ordered_word(eb));
                acc.straighten_word(letters, &(ca * cb));
            }
        }
        let right = a_to_ua(&other.abelian, true);
        let left = a_to_ua(&self.abelian, false);
        let mut comm = acc.comm;
        for (k, slot) in comm.iter_mut().enumerate() {
            *slot = &(&*slot + &(&self.comm[k] * &right)) + &(&other.comm[k] * &left);
        }
        MetabelianElem {
            abelian: acc.abelian,
            comm: canonical_triple(comm),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).sub(&b.mul(a))
    }

    /// The preimage in `B` built from ordered monomials and basis
    /// commutators `p [z_i, z_j] q`.
    pub fn lift(&self) -> NCPoly {
        let mut terms: Vec<(Word, Scalar)> = Vec::new();
        for (e, c) in self.abelian.terms() {
            terms.push((Word(ordered_word(e)), c.clone()));
        }
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            for (e, c) in self.comm[slot].terms() {
                let (pre, post) = (ordered_word(&e[..3]), ordered_word(&e[3..]));
                for (a, b, sign) in [(i, j, c.clone()), (j, i, -c)] {
                    let mut w = pre.clone();
                    w.push(a as u8);
                    w.push(b as u8);
                    w.extend_from_slice(&post);
                    terms.push((Word(w), sign));
                }
            }
        }
        NCPoly::from_terms(3, terms)
    }

    /// Whether `z_i` occurs in the canonical lift.
    pub fn involves_generator(&self, i: usize) -> bool {
        if self.abelian.degree_in(i).unwrap_or(0) > 0 {
            return true;
        }
        PAIRS.iter().enumerate().any(|(slot, &(a, b))| {
            let c = &self.comm[slot];
            !c.is_zero()
                && (a == i
                    || b == i
                    || c.degree_in(L[i]).unwrap_or(0) > 0
                    || c.degree_in(R[i]).unwrap_or(0) > 0)
        })
    }

    /// Image under the endomorphism of `C` with the given generator images.
    pub fn substitute(&self, images: &[MetabelianElem]) -> MetabelianElem {
        assert_eq!(images.len(), 3, "endomorphisms of C have three images");
        let mut powers: Vec<Vec<MetabelianElem>> =
            vec![vec![MetabelianElem::constant(Scalar::one())]; 3];
        let mut out = MetabelianElem::zero();
        for (e, c) in self.abelian.terms() {
            let mut term = MetabelianElem::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        if self.comm.iter().any(|c| !c.is_zero()) {
            let bar: Vec<CommPoly> = images.iter().map(|m| m.abelian.clone()).collect();
            for (slot, &(i, j)) in PAIRS.iter().enumerate() {
                if self.comm[slot].is_zero() {
                    continue;
                }
                let bracket = MetabelianElem::commutator(&images[i], &images[j]);
                let coeff = induced_on_ua(&bar, &self.comm[slot]).expect("U(A) substitution");
                out = out.add(&bracket.act(&coeff));
            }
        }
        out
    }
}

fn ordered_word(e: &[u32]) -> Vec<u8> {
    let mut w = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        w.extend(std::iter::repeat_n(i as u8, k as usize));
    }
    w
}

fn ua_monomial(pre: &[u8], post: &[u8]) -> Vec<u32> {
    let mut e = vec![0u32; 6];
    for &l in pre {
        e[L[l as usize]] += 1;
    }
    for &l in post {
        e[R[l as usize]] += 1;
    }
    e
}

/// Collects straightened words before canonicalisation.
struct Accumulator {
    abelian: CommPoly,
    comm: [CommPoly; 3],
}

impl Accumulator {
    fn new() -> Self {
        let z = MetabelianElem::zero();
        Accumulator {
            abelian: z.abelian,
            comm: z.comm,
        }
    }

    /// Bubble-sorts the word, recording `p [a, b] q` for every swap of an
    /// out-of-order pair `a > b` as `-[z_b, z_a]·(p' (x) q)`.
    fn straighten_word(&mut self, mut w: Vec<u8>, c: &Scalar) {
        while let Some(k) = (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) {
            let (a, b) = (w[k] as usize, w[k + 1] as usize);
            let e = ua_monomial(&w[..k], &w[k + 2..]);
            self.comm[pair_slot(a, b)].add_term(e, -c);
            w.swap(k, k + 1);
        }
        let mut e = vec![0u32; 3];
        for &l in &w {
            e[l as usize] += 1;
        }
        self.abelian.add_term(e, c.clone());
    }
}

/// Removes `r1` from `f23` with the Jacobi relation:
/// writing `f23 = (r1 - l1) Q + f23|_{r1 = l1}`,
/// `[z2,z3]·(r1 - l1) Q = [z1,z3]·(r2 - l2) Q - [z1,z2]·(r3 - l3) Q`.
fn canonical_triple(t: [CommPoly; 3]) -> [CommPoly; 3] {
    let [f12, f13, f23] = t;
    if f23.degree_in(R[0]).unwrap_or(0) == 0 {
        return [f12, f13, f23];
    }
    let ua = ring_ua();
    let mut rem = CommPoly::zero(&ua);
    let mut quot = CommPoly::zero(&ua);
    for (e, c) in f23.terms() {
        let k = e[R[0]];
        let mut base = e.clone();
        base[R[0]] = 0;
        if k == 0 {
            rem.add_term(base, c.clone());
            continue;
        }
        let mut reduced = base.clone();
        reduced[L[0]] += k;
        rem.add_term(reduced, c.clone());
        for s in 0..k {
            let mut q = base.clone();
            q[R[0]] += s;
            q[L[0]] += k - 1 - s;
            quot.add_term(q, c.clone());
        }
    }
    let var = |i| CommPoly::var(&ua, i);
    let f13 = &f13 + &(&(&var(R[1]) - &var(L[1])) * &quot);
    let f12 = &f12 - &(&(&var(R[2]) - &var(L[2])) * &quot);
    [f12, f13, rem]
}

/// The canonical projection `eps: B -> C`.
pub fn straighten(f: &NCPoly) -> Result<MetabelianElem> {
    if f.nvars() != 3 {
        return Err(Error::ArityMismatch(3, f.nvars()));
    }
    let mut acc = Accumulator::new();
    for (w, c) in f.terms() {
        acc.straighten_word(w.letters().to_vec(), c);
    }
    Ok(MetabelianElem {
        abelian: acc.abelian,
        comm: canonical_triple(acc.comm),
    })
}

/// Fox derivative `df/dz_i = pi(dg/dy_i)` computed on the canonical lift
/// `g` of `f`.
pub fn fox_c(f: &MetabelianElem, i: usize) -> CommPoly {
    let mut out = CommPoly::zero(&ring_ua());
    for (w, c) in f.lift().terms() {
        for (pre, post) in fox_word(w, i) {
            out.add_term(ua_monomial(pre.letters(), post.letters()), c.clone());
        }
    }
    out
}

pub fn gradient_c(f: &MetabelianElem) -> Vec<CommPoly> {
    (0..3).map(|i| fox_c(f, i)).collect()
}

pub type EndoC = crate::algebra::Endomorphism<MetabelianElem>;

/// Jacobian over `U(A)`: `J[i][j] = d phi(z_j) / d z_i`.
pub fn jacobian_c(e: &EndoC) -> MatUA {
    Matrix::from_columns(e.images.iter().map(gradient_c).collect())
}

pub fn j2_c(e: &EndoC) -> MatUA {
    jacobian_c(e).block(0..2, 0..2)
}

/// Images of `x1, x2, x3` under the induced automorphism of `A`.
pub fn induced_on_a(e: &EndoC) -> Vec<CommPoly> {
    e.images.iter().map(|m| m.abelian.clone()).collect()
}

/// `psi · gen · psi^{-1}` for a generator `sigma(i, 1, f)` with `f` in `I`
/// not involving `z_i`.
pub fn kernel_conjugate(
    psi: &TameWord<MetabelianElem>,
    gen: &ElementaryAuto<MetabelianElem>,
) -> Result<EndoC> {
    if !gen.alpha().is_one() {
        return Err(Error::Precondition(
            "kernel generator must have alpha = 1".into(),
        ));
    }
    if !gen.param().in_commutator_ideal() {
        return Err(Error::Precondition(
            "kernel generator parameter must lie in the commutator ideal".into(),
        ));
    }
    let word = psi.conjugate(gen);
    Ok(word.evaluate())
}

impl fmt::Display for MetabelianElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + [z1,z2]·({}) + [z1,z3]·({}) + [z2,z3]·({})",
            self.abelian, self.comm[0], self.comm[1], self.comm[2]
        )
    }
}

/// Serialized form: abelian part in `A`, coefficients in `U(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetabelianRecord {
    pub abelian: String,
    pub f12: String,
    pub f13: String,
    pub f23: String,
}

impl From<&MetabelianElem> for MetabelianRecord {
    fn from(m: &MetabelianElem) -> Self {
        MetabelianRecord {
            abelian: m.abelian.to_string(),
            f12: m.comm[0].to_string(),
            f13: m.comm[1].to_string(),
            f23: m.comm[2].to_string(),
        }
    }
}

impl AlgebraElement for MetabelianElem {
    fn generator(nvars: usize, i: usize) -> Self {
        assert_eq!(nvars, 3, "C has three generators");
        MetabelianElem::generator(i)
    }
    fn constant(nvars: usize, c: Scalar) -> Self {
        assert_eq!(nvars, 3, "C has three generators");
        MetabelianElem::constant(c)
    }
    fn nvars(&self) -> usize {
        3
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn involves(&self, i: usize) -> bool {
        self.involves_generator(i)
    }
    fn substitute(&self, images: &[Self]) -> Self {
        MetabelianElem::substitute(self, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fox::fox_derive;
    use crate::morphisms::pi_u;
    use crate::parse::{parse_comm, parse_nc};

    fn eps(s: &str) -> MetabelianElem {
        straighten(&parse_nc(s).unwrap()).unwrap()
    }

    fn ua(s: &str) -> CommPoly {
        parse_comm(s, &ring_ua()).unwrap()
    }

    fn a(s: &str) -> CommPoly {
        parse_comm(s, &ring_a()).unwrap()
    }

    #[test]
    fn straightening_examples() {
        let m = eps("z2 z1");
        assert_eq!(*m.abelian(), a("x1 x2"));
        assert_eq!(m.triple(), &[ua("-1"), ua("0"), ua("0")]);

        let m = eps("z1 z2");
        assert_eq!(*m.abelian(), a("x1 x2"));
        assert!(!m.in_commutator_ideal() && m.triple().iter().all(CommPoly::is_zero));

        let m = eps("z3 z1 z2");
        assert_eq!(*m.abelian(), a("x1 x2 x3"));
        assert_eq!(m.triple(), &[ua("0"), ua("-r2"), ua("-l1")]);
    }

    #[test]
    fn jacobi_relation_is_zero() {
        let j = eps("[[z1, z2], z3] + [[z2, z3], z1] + [[z3, z1], z2]");
        assert!(j.is_zero());
        // The same relation assembled from module coordinates.
        let m = MetabelianElem::from_parts(
            CommPoly::zero(&ring_a()),
            [ua("r3 - l3"), ua("-(r2 - l2)"), ua("r1 - l1")],
        )
        .unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn products() {
        let (z1, z2) = (MetabelianElem::generator(0), MetabelianElem::generator(1));
        assert_eq!(z2.mul(&z1), eps("z2 z1"));
        let m = eps("3 z3 z1 z2 - z2^2 + [z1, z3] z2");
        let one = MetabelianElem::constant(Scalar::one());
        assert_eq!(m.mul(&one), m);
        assert_eq!(one.mul(&m), m);
        let c12 = eps("[z1, z2]");
        let c13 = eps("[z1, z3]");
        assert!(c12.mul(&c13).is_zero());
    }

    #[test]
    fn lift_round_trips() {
        let m = eps("z3 z2 z1 z3 - 2 z2 z2 z1 + [z2, z3] z1 z1");
        assert_eq!(straighten(&m.lift()).unwrap(), m);
    }

    #[test]
    fn fox_examples() {
        assert!(fox_c(&MetabelianElem::generator(0), 0).is_one());
        let m = MetabelianElem::commutator_term(0, 2, ua("1"));
        assert_eq!(fox_c(&m, 2), ua("l1 - r1"));
        // Lifting through an explicit element of R^2 does not change it.
        let g = parse_nc("z3 z1 z2 + [z1, z2][z2, z3] z1").unwrap();
        let via_b = pi_u(&fox_derive(&g, 0)).unwrap();
        assert_eq!(fox_c(&straighten(&g).unwrap(), 0), via_b);
    }

    #[test]
    fn generator_support() {
        let m = eps("[z2, z3] z2");
        assert!(!m.involves_generator(0));
        assert!(m.involves_generator(1));
        assert!(eps("z1 z3").involves_generator(0));
    }

    #[test]
    fn kernel_generator_jacobian() {
        let f = eps("[z2, z3]");
        let images = vec![
            MetabelianElem::generator(0).add(&f),
            MetabelianElem::generator(1),
            MetabelianElem::generator(2),
        ];
        let j = jacobian_c(&EndoC::new(images));
        let expect = Matrix::from_rows(vec![
            vec![ua("1"), ua("0"), ua("0")],
            vec![ua("r3 - l3"), ua("1"), ua("0")],
            vec![ua("l2 - r2"), ua("0"), ua("1")],
        ]);
        assert_eq!(j, expect);
    }
}
