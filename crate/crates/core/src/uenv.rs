//! The universal multiplicative enveloping algebra `U(B) = B' (x) B`.
//!
//! A basis element `w' (x) v` is stored as the pair `(w, v)` with `w` kept as
//! an ordinary word of `B`; the anti-isomorphism is applied inside the
//! product, `(w1' (x) v1)(w2' (x) v2) = (w2 w1)' (x) (v1 v2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::{NCPoly, Word};
use crate::parse;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorPoly {
    nvars: usize,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorPoly {
    pub fn zero(nvars: usize) -> Self {
        TensorPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::basis(nvars, Word::empty(), Word::empty(), Scalar::one())
    }

    pub fn basis(nvars: usize, left: Word, right: Word, c: Scalar) -> Self {
        let mut t = Self::zero(nvars);
        t.add_term(left, right, c);
        t
    }

    /// `f' (x) g`, extended bilinearly.
    pub fn pure(f: &NCPoly, g: &NCPoly) -> Result<Self> {
        if f.nvars() != g.nvars() {
            return Err(Error::ArityMismatch(f.nvars(), g.nvars()));
        }
        let mut t = Self::zero(f.nvars());
        for (w, a) in f.terms() {
            for (v, b) in g.terms() {
                t.add_term(w.clone(), v.clone(), a * b);
            }
        }
        Ok(t)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &Word, right: &Word) -> Scalar {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, left: Word, right: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
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

    pub fn checked_add(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for ((w, v), c) in &other.terms {
            out.add_term(w.clone(), v.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product in `U(B)`: left legs multiply in reversed order, right legs in
    /// the given order, and the two legs commute with each other.
    pub fn checked_mul(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch(self.nvars, other.nvars));
        }
        let mut out = TensorPoly::zero(self.nvars);
        for ((w1, v1), a) in &self.terms {
            for ((w2, v2), b) in &other.terms {
                out.add_term(w2.concat(w1), v1.concat(v2), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.nvars);
        for ((w, v), a) in &self.terms {
            out.add_term(w.clone(), v.clone(), a * c);
        }
        out
    }

    /// The multiplication map `lambda(f' (x) g) = f g`.
    pub fn lambda(&self) -> NCPoly {
        NCPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|((w, v), c)| (w.concat(v), c.clone())),
        )
    }

    /// Applies an endomorphism of `B` in both legs:
    /// `f' (x) g -> phi(f)' (x) phi(g)`.
    pub fn apply_endomorphism(&self, images: &[NCPoly]) -> Result<TensorPoly> {
        let mut cache: BTreeMap<&Word, NCPoly> = BTreeMap::new();
        for (w, v) in self.terms.keys() {
            for leg in [w, v] {
                if !cache.contains_key(leg) {
                    let img = NCPoly::monomial(self.nvars, leg.clone(), Scalar::one())
                        .substitute(images)?;
                    cache.insert(leg, img);
                }
            }
        }
        let mut out = TensorPoly::zero(images.first().map_or(self.nvars, NCPoly::nvars));
        for ((w, v), c) in &self.terms {
            for (lw, a) in cache[w].terms() {
                for (rv, b) in cache[v].terms() {
                    out.add_term(lw.clone(), rv.clone(), c * a * b);
                }
            }
        }
        Ok(out)
    }

    /// Parses the printed form, e.g. `(1)'⊗(1) + (z)'⊗(z)`.
    pub fn parse(src: &str, nvars: usize) -> Result<TensorPoly> {
        let mut out = TensorPoly::zero(nvars);
        for (c, f, g) in parse::parse_tensor_terms(src, nvars)? {
            out = &out + &TensorPoly::pure(&f, &g)?.scale(&c);
        }
        Ok(out)
    }
}

/// The universal derivation `Delta(f) = f' (x) 1 - 1 (x) f`.
pub fn universal_derivation(f: &NCPoly) -> TensorPoly {
    let n = f.nvars();
    let mut out = TensorPoly::zero(n);
    for (w, c) in f.terms() {
        out.add_term(w.clone(), Word::empty(), c.clone());
        out.add_term(Word::empty(), w.clone(), -c);
    }
    out
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let n = self.nvars;
        let leg = |w: &Word| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.render(n)
            }
        };
        let mut out = String::new();
        for (k, ((w, v), c)) in self.terms.iter().enumerate() {
            let mono = format!("({})'⊗({})", leg(w), leg(v));
            // Keep the unit visible so the term parses back as a tensor.
            let mut piece = String::new();
            scalar::write_term(&mut piece, k == 0, c, &mono);
            out.push_str(&piece);
        }
        f.write_str(&out)
    }
}

impl<'a> Add for &'a TensorPoly {
    type Output = TensorPoly;
    fn add(self, rhs: &'a TensorPoly) -> TensorPoly {
        self.checked_add(rhs).expect("TensorPoly addition")
    }
}

impl<'a> Sub for &'a TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: &'a TensorPoly) -> TensorPoly {
        self.checked_add(&-rhs).expect("TensorPoly subtraction")
    }
}

impl<'a> Mul for &'a TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: &'a TensorPoly) -> TensorPoly {
        self.checked_mul(rhs).expect("TensorPoly multiplication")
    }
}

impl Neg for &TensorPoly {
    type Output = TensorPoly;
    fn neg(self) -> TensorPoly {
        self.scale(&-Scalar::one())
    }
}

impl Add for TensorPoly {
    type Output = TensorPoly;
    fn add(self, rhs: TensorPoly) -> TensorPoly {
        &self + &rhs
    }
}

impl Sub for TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: TensorPoly) -> TensorPoly {
        &self - &rhs
    }
}

impl Mul for TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: TensorPoly) -> TensorPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_nc;

    fn t(src: &str) -> TensorPoly {
        TensorPoly::parse(src, 3).unwrap()
    }

    fn p(src: &str) -> NCPoly {
        parse_nc(src).unwrap()
    }

    #[test]
    fn left_legs_multiply_in_reverse() {
        assert_eq!(&t("(z)'⊗(1)") * &t("(z)'⊗(1)"), t("(z^2)'⊗(1)"));
        assert_eq!(&t("(x)'⊗(1)") * &t("(y)'⊗(1)"), t("(y x)'⊗(1)"));
        assert_eq!(&t("(1)'⊗(z)") * &t("(z)'⊗(1)"), t("(z)'⊗(z)"));
        assert_eq!(&t("(1)'⊗(x)") * &t("(1)'⊗(y)"), t("(1)'⊗(x y)"));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(t("(y1)'⊗(y2)").lambda(), p("y1 y2"));
        assert_eq!(t("(z^2)'⊗(z)").lambda(), p("z^3"));
        let f = p("x z y - 3 y^2 + 7");
        assert!(universal_derivation(&f).lambda().is_zero());
    }

    #[test]
    fn universal_derivation_examples() {
        assert_eq!(universal_derivation(&p("y1")), t("(x)'⊗(1) - (1)'⊗(x)"));
        assert!(universal_derivation(&p("1")).is_zero());
        // Delta(y1 y2) = Delta(y1)(1 (x) y2) + Delta(y2)(y1' (x) 1)
        let lhs = universal_derivation(&p("y1 y2"));
        assert_eq!(lhs, t("(x y)'⊗(1) - (1)'⊗(x y)"));
        let rhs = &(&universal_derivation(&p("y1")) * &t("(1)'⊗(y)"))
            + &(&universal_derivation(&p("y2")) * &t("(x)'⊗(1)"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_trips() {
        let a = t("1 + (z)'⊗(z) - 1/2*(x y)'⊗(z^2)");
        assert_eq!(a.to_string(), "(1)'⊗(1) + (z)'⊗(z) - 1/2*(x*y)'⊗(z^2)");
        assert_eq!(t(&a.to_string()), a);
    }

    #[test]
    fn endomorphism_acts_on_both_legs() {
        let swap = vec![p("y"), p("x"), p("z")];
        assert_eq!(
            t("(y1)'⊗(y2)").apply_endomorphism(&swap).unwrap(),
            t("(y2)'⊗(y1)")
        );
        let anick = vec![p("x + z(xz - zy)"), p("y + (xz - zy)z"), p("z")];
        assert_eq!(
            t("(z)'⊗(1)").apply_endomorphism(&anick).unwrap(),
            t("(z)'⊗(1)")
        );
    }
}
