//! Noncommutative polynomials over the rationals.
//!
//! Elements of the free associative algebra `B_n = Q<y1, ..., yn>` are stored
//! as finitely supported maps from words to nonzero rational coefficients.
//! Generators are addressed by 0-based indices internally (`0` is `y1`); the
//! textual forms use `x, y, z` when `n = 3` and `y1 .. yn` otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// 1-based generator label as it appears in user input (`y1`, `s(2, ..)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId(usize);

impl GeneratorId {
    pub fn new(one_based: usize, n: usize) -> Result<Self> {
        if one_based == 0 || one_based > n {
            return Err(Error::GeneratorOutOfRange {
                index: one_based,
                n,
            });
        }
        Ok(GeneratorId(one_based - 1))
    }

    /// 0-based position, as used by every arithmetic routine.
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}", self.0 + 1)
    }
}

/// A monomial of `B_n`: a finite sequence of generator indices. The empty
/// word is the unit.
///
/// Words are ordered by length first and lexicographically within a length
/// (`y1 < y2 < y3`), which is the canonical order for printing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Exponent vector of the commutative image of the word.
    pub fn content(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0u32; n];
        for &l in &self.0 {
            e[l as usize] += 1;
        }
        e
    }

    /// Renders the word with run-length powers, e.g. `z^2*y`. The empty word
    /// renders as the empty string.
    pub fn render(&self, n: usize) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&generator_name(l as usize, n));
            if j - i > 1 {
                out.push('^');
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

pub fn generator_name(i: usize, n: usize) -> String {
    if n == 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("y{}", i + 1)
    }
}

/// Element of `B_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NCPoly {
    nvars: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(nvars: usize) -> Self {
        NCPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(nvars, Word::empty(), c)
    }

    pub fn generator(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "generator {i} out of range for n = {nvars}");
        Self::monomial(nvars, Word::letter(i), Scalar::one())
    }

    pub fn monomial(nvars: usize, w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { nvars, terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut p = NCPoly::zero(nvars);
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &NCPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_arity(other)?;
        let mut out = NCPoly::zero(self.nvars);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero(self.nvars);
        }
        NCPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> NCPoly {
        let mut acc = NCPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `ab - ba`.
    pub fn commutator(a: &NCPoly, b: &NCPoly) -> NCPoly {
        &(a * b) - &(b * a)
    }

    /// Maximum number of letters from `vars` over the support; `None` stands
    /// for minus infinity (the zero polynomial).
    pub fn degree_in(&self, vars: &[usize]) -> Option<usize> {
        self.terms
            .keys()
            .map(|w| {
                w.0.iter()
                    .filter(|&&l| vars.contains(&(l as usize)))
                    .count()
            })
            .max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Whether some support word contains generator `i`.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|w| w.0.contains(&(i as u8)))
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Word::empty())
    }

    /// Applies the algebra endomorphism `y_i -> images[i]`.
    ///
    /// The polynomial is split by first letter, `f = c + sum_i y_i f_i`, and
    /// evaluated as `c + sum_i images[i] * phi(f_i)` so that shared prefixes
    /// are substituted once.
    pub fn substitute(&self, images: &[NCPoly]) -> Result<NCPoly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch(self.nvars, images.len()));
        }
        let target = images.first().map_or(self.nvars, NCPoly::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::ArityMismatch(target, bad.nvars));
        }
        let words: Vec<(&[u8], &Scalar)> = self
            .terms
            .iter()
            .map(|(w, c)| (w.0.as_slice(), c))
            .collect();
        Ok(substitute_words(&words, images, target))
    }

    pub fn to_string_with(&self, name: impl Fn(&Word) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            scalar::write_term(&mut out, k == 0, c, &name(w));
        }
        out
    }
}

fn substitute_words(words: &[(&[u8], &Scalar)], images: &[NCPoly], nvars: usize) -> NCPoly {
    let mut out = NCPoly::zero(nvars);
    let mut tails: Vec<Vec<(&[u8], &Scalar)>> = vec![Vec::new(); images.len()];
    for &(w, c) in words {
        match w.split_first() {
            None => out.add_term(Word::empty(), c.clone()),
            Some((&l, rest)) => tails[l as usize].push((rest, c)),
        }
    }
    for (i, tail) in tails.iter().enumerate() {
        if tail.is_empty() {
            continue;
        }
        let inner = substitute_words(tail, images, nvars);
        let prod = &images[i] * &inner;
        for (w, c) in prod.terms {
            out.add_term(w, c);
        }
    }
    out
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars;
        f.write_str(&self.to_string_with(|w| w.render(n)))
    }
}

impl<'a> Add for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &'a NCPoly) -> NCPoly {
        self.checked_add(rhs).expect("NCPoly addition")
    }
}

impl<'a> Sub for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &'a NCPoly) -> NCPoly {
        self.checked_add(&-rhs).expect("NCPoly subtraction")
    }
}

impl<'a> Mul for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &'a NCPoly) -> NCPoly {
        self.checked_mul(rhs).expect("NCPoly multiplication")
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: NCPoly) -> NCPoly {
        &self + &rhs
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        &self * &rhs
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}
