//! Fox derivatives of `B`, gradients and Jacobian matrices over `U(B)`.
//!
//! For a word `w = a_1 ... a_m` the derivative with respect to `y_i` is
//! `sum_{k : a_k = y_i} (a_1 ... a_{k-1})' (x) (a_{k+1} ... a_m)`, which is
//! the closed form of the recursion
//! `d(y_j w)/dy_i = delta_ij (1 (x) w) + (dw/dy_i)(y_j' (x) 1)`.
//!
//! Jacobian columns are indexed by image and rows by the derivation
//! variable: `J(phi)[i][j] = d phi(y_j) / d y_i`.

use crate::error::Result;
use crate::matrix::{MatU, Matrix};
use crate::ncpoly::{NCPoly, Word};
use crate::uenv::TensorPoly;

pub use crate::algebra::Endomorphism;

/// Fox derivative of a single word: pairs `(prefix, suffix)` around every
/// occurrence of generator `i`.
pub fn fox_word(w: &Word, i: usize) -> impl Iterator<Item = (Word, Word)> + '_ {
    let letters = w.letters();
    letters
        .iter()
        .enumerate()
        .filter(move |(_, &l)| l as usize == i)
        .map(move |(k, _)| (Word(letters[..k].to_vec()), Word(letters[k + 1..].to_vec())))
}

/// `d f / d y_i` (0-based `i`).
pub fn fox_derive(f: &NCPoly, i: usize) -> TensorPoly {
    let mut out = TensorPoly::zero(f.nvars());
    for (w, c) in f.terms() {
        for (pre, post) in fox_word(w, i) {
            out.add_term(pre, post, c.clone());
        }
    }
    out
}

/// Column `(df/dy_1, ..., df/dy_n)^t`.
pub fn gradient(f: &NCPoly) -> Vec<TensorPoly> {
    (0..f.nvars()).map(|i| fox_derive(f, i)).collect()
}

pub fn jacobian(e: &Endomorphism<NCPoly>) -> MatU {
    Matrix::from_columns(e.images.iter().map(gradient).collect())
}

/// Upper-left 2x2 block of the Jacobian:
/// `[[d phi(y1)/dy1, d phi(y2)/dy1], [d phi(y1)/dy2, d phi(y2)/dy2]]`.
pub fn j2(e: &Endomorphism<NCPoly>) -> MatU {
    assert!(e.nvars() >= 2, "J2 needs at least two generators");
    let cols = e.images[..2]
        .iter()
        .map(|f| vec![fox_derive(f, 0), fox_derive(f, 1)])
        .collect();
    Matrix::from_columns(cols)
}

/// `f' (x) g -> phi(f)' (x) phi(g)`.
pub fn endo_on_tensor(e: &Endomorphism<NCPoly>, a: &TensorPoly) -> Result<TensorPoly> {
    a.apply_endomorphism(&e.images)
}

pub fn endo_on_matrix(e: &Endomorphism<NCPoly>, m: &MatU) -> Result<MatU> {
    m.try_map(|a| endo_on_tensor(e, a))
}
