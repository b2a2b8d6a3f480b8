//! Sparse commutative polynomials over named variables.
//!
//! Every ring that shows up on the commutative side lives here: `A =
//! Q[x1, x2, x3]`, `U(A) = Q[l1, l2, l3, r1, r2, r3]`, `U(F[y3]) = Q[u, v]`,
//! `U(F[x3]) = Q[l3, r3]` and the one-variable rings. A ring is identified by
//! its ordered list of variable names; mixing rings is an error.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Ring> {
        Arc::new(Ring {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn describe(&self) -> String {
        self.names.join(", ")
    }
}

macro_rules! named_ring {
    ($(#[$m:meta])* $fn_name:ident, [$($v:expr),*]) => {
        $(#[$m])*
        pub fn $fn_name() -> Arc<Ring> {
            static CELL: OnceLock<Arc<Ring>> = OnceLock::new();
            CELL.get_or_init(|| Ring::new(&[$($v),*])).clone()
        }
    };
}

named_ring!(
    /// `A = Q[x1, x2, x3]`.
    ring_a, ["x1", "x2", "x3"]);
named_ring!(
    /// `U(A)`: `l_i` stands for `x_i' (x) 1`, `r_i` for `1 (x) x_i`.
    ring_ua, ["l1", "l2", "l3", "r1", "r2", "r3"]);
named_ring!(
    /// `U(Q[y3]) = Q[u, v]` with `u = y3' (x) 1`, `v = 1 (x) y3`.
    ring_uv, ["u", "v"]);
named_ring!(
    /// `U(Q[x3]) = Q[l3, r3]`.
    ring_ufx3, ["l3", "r3"]);
named_ring!(ring_fy3, ["y3"]);
named_ring!(ring_fx3, ["x3"]);

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Exponents, Scalar>,
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn graded_key(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl CommPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        CommPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Scalar::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        Self::monomial(ring, vec![0; ring.arity()], c)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        let mut e = vec![0; ring.arity()];
        e[i] = 1;
        Self::monomial(ring, e, Scalar::one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<Ring>, e: Exponents, c: Scalar) -> Self {
        assert_eq!(e.len(), ring.arity(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        CommPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(ring: &Arc<Ring>, it: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Scalar)>,
    {
        let mut p = CommPoly::zero(ring);
        for (e, c) in it {
            assert_eq!(e.len(), ring.arity(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn check_ring(&self, other: &CommPoly) -> Result<()> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch(
                self.ring.describe(),
                other.ring.describe(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CommPoly) -> Result<CommPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &CommPoly) -> Result<CommPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &CommPoly) -> Result<CommPoly> {
        self.check_ring(other)?;
        let mut out = CommPoly::zero(&self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(&self.ring);
        }
        CommPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        let mut acc = CommPoly::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total degree; `None` is minus infinity.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Homogeneous component of top total degree.
    pub fn leading_form(&self) -> CommPoly {
        let Some(d) = self.total_degree() else {
            return self.clone();
        };
        CommPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder (or the divisor is zero).
    pub fn exact_div(&self, divisor: &CommPoly) -> Option<CommPoly> {
        if divisor.is_zero() || self.check_ring(divisor).is_err() {
            return None;
        }
        let (lead_e, lead_c) = divisor.terms.iter().next_back().unwrap();
        let mut rem = self.clone();
        let mut quot = CommPoly::zero(&self.ring);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let t = CommPoly::monomial(&self.ring, qe, c / lead_c);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Ring morphism given by the images of the variables, all in `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[CommPoly]) -> Result<CommPoly> {
        if images.len() != self.ring.arity() {
            return Err(Error::ArityMismatch(self.ring.arity(), images.len()));
        }
        for im in images {
            if !same_ring(&im.ring, target) {
                return Err(Error::RingMismatch(im.ring.describe(), target.describe()));
            }
        }
        let mut powers: Vec<Vec<CommPoly>> = vec![vec![CommPoly::one(target)]; images.len()];
        let mut out = CommPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = CommPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            for (e2, c2) in term.terms {
                out.add_term(e2, c2);
            }
        }
        Ok(out)
    }

    /// Morphism sending variable `i` to variable `map[i]` of `target`, or to
    /// zero when `map[i]` is `None`.
    pub fn map_vars(&self, target: &Arc<Ring>, map: &[Option<usize>]) -> CommPoly {
        assert_eq!(map.len(), self.ring.arity());
        let mut out = CommPoly::zero(target);
        'terms: for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.arity()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] += k,
                    None => continue 'terms,
                }
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Terms in printing order: ascending total degree, then descending
    /// lexicographic within a degree.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_key(a.0, b.0));
        v
    }
}

pub fn render_monomial(ring: &Ring, e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(ring.names[i].clone()),
            _ => parts.push(format!("{}^{}", ring.names[i], k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            scalar::write_term(&mut out, k == 0, c, &render_monomial(&self.ring, e));
        }
        f.write_str(&out)
    }
}

impl<'a> Add for &'a CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &'a CommPoly) -> CommPoly {
        self.checked_add(rhs).expect("CommPoly addition")
    }
}

impl<'a> Sub for &'a CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &'a CommPoly) -> CommPoly {
        self.checked_add(&-rhs).expect("CommPoly subtraction")
    }
}

impl<'a> Mul for &'a CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &'a CommPoly) -> CommPoly {
        self.checked_mul(rhs).expect("CommPoly multiplication")
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        CommPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: CommPoly) -> CommPoly {
        &self + &rhs
    }
}

impl Sub for CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: CommPoly) -> CommPoly {
        &self - &rhs
    }
}

impl Mul for CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: CommPoly) -> CommPoly {
        &self * &rhs
    }
}

impl Neg for CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        -&self
    }
}
