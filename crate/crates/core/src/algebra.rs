//! Common interface of the free associative algebra `B` and the free
//! metabelian algebra `C`, so that endomorphisms and tame words are written
//! once for both.

use std::fmt;

use crate::scalar::Scalar;

pub trait AlgebraElement: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn generator(nvars: usize, i: usize) -> Self;
    fn constant(nvars: usize, c: Scalar) -> Self;
    fn nvars(&self) -> usize;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Scalar) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// Whether the element lies outside the subalgebra generated by the
    /// generators other than `i`.
    fn involves(&self, i: usize) -> bool;
    /// Image under the endomorphism `gen_j -> images[j]`.
    fn substitute(&self, images: &[Self]) -> Self;
}

/// An endomorphism given by the images of the generators,
/// `phi = (f_1, ..., f_n)`.
///
/// Composition follows `(phi psi)(w) = phi(psi(w))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism<E> {
    pub images: Vec<E>,
}

impl<E: AlgebraElement> Endomorphism<E> {
    pub fn new(images: Vec<E>) -> Self {
        Endomorphism { images }
    }

    pub fn identity(nvars: usize) -> Self {
        Endomorphism {
            images: (0..nvars).map(|i| E::generator(nvars, i)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, f: &E) -> E {
        f.substitute(&self.images)
    }

    /// `self * other`, i.e. `w -> self(other(w))`.
    pub fn compose(&self, other: &Endomorphism<E>) -> Endomorphism<E> {
        Endomorphism {
            images: other.images.iter().map(|g| self.apply(g)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.nvars();
        self.images
            .iter()
            .enumerate()
            .all(|(i, f)| *f == E::generator(n, i))
    }
}

impl<E: AlgebraElement> fmt::Display for Endomorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, im) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{im}")?;
        }
        f.write_str(")")
    }
}

impl AlgebraElement for crate::ncpoly::NCPoly {
    fn generator(nvars: usize, i: usize) -> Self {
        crate::ncpoly::NCPoly::generator(nvars, i)
    }
    fn constant(nvars: usize, c: Scalar) -> Self {
        crate::ncpoly::NCPoly::constant(nvars, c)
    }
    fn nvars(&self) -> usize {
        crate::ncpoly::NCPoly::nvars(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn involves(&self, i: usize) -> bool {
        crate::ncpoly::NCPoly::involves(self, i)
    }
    fn substitute(&self, images: &[Self]) -> Self {
        crate::ncpoly::NCPoly::substitute(self, images).expect("endomorphism arity")
    }
}
