//! Elementary and tame automorphisms, their defining relations, and seeded
//! samplers.
//!
//! `sigma(i, alpha, f)` sends `y_i` to `alpha y_i + f` and fixes the other
//! generators; `f` must not involve `y_i`. A tame word is a product of such
//! factors, read left to right with `(phi psi)(w) = phi(psi(w))`.

use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{AlgebraElement, Endomorphism};
use crate::error::{Error, Result};
use crate::metabelian::{straighten, MetabelianElem};
use crate::ncpoly::{GeneratorId, NCPoly, Word};
use crate::parse::parse_tame_factors;
use crate::scalar::{int, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryAuto<E> {
    index: usize,
    alpha: Scalar,
    param: E,
}

impl<E: AlgebraElement> ElementaryAuto<E> {
    /// `sigma(index + 1, alpha, param)`; `index` is 0-based.
    pub fn new(index: usize, alpha: Scalar, param: E) -> Result<Self> {
        let n = param.nvars();
        if index >= n {
            return Err(Error::GeneratorOutOfRange {
                index: index + 1,
                n,
            });
        }
        if alpha.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if param.involves(index) {
            return Err(Error::ParameterInvolvesGenerator { index: index + 1 });
        }
        Ok(ElementaryAuto {
            index,
            alpha,
            param,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn param(&self) -> &E {
        &self.param
    }

    pub fn nvars(&self) -> usize {
        self.param.nvars()
    }

    pub fn to_endomorphism(&self) -> Endomorphism<E> {
        let mut e: Endomorphism<E> = Endomorphism::identity(self.nvars());
        e.images[self.index] = e.images[self.index].scaled(&self.alpha).plus(&self.param);
        e
    }

    /// `sigma(i, alpha, f)^{-1} = sigma(i, alpha^{-1}, -alpha^{-1} f)`.
    pub fn inverse(&self) -> Self {
        let inv = self.alpha.recip();
        ElementaryAuto {
            index: self.index,
            param: self.param.scaled(&-inv.clone()),
            alpha: inv,
        }
    }
}

impl<E: fmt::Display> fmt::Display for ElementaryAuto<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s({}, {}, {})", self.index + 1, self.alpha, self.param)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TameWord<E> {
    nvars: usize,
    factors: Vec<ElementaryAuto<E>>,
}

impl<E: AlgebraElement> TameWord<E> {
    pub fn identity(nvars: usize) -> Self {
        TameWord {
            nvars,
            factors: Vec::new(),
        }
    }

    pub fn new(nvars: usize, factors: Vec<ElementaryAuto<E>>) -> Result<Self> {
        if let Some(bad) = factors.iter().find(|f| f.nvars() != nvars) {
            return Err(Error::ArityMismatch(nvars, bad.nvars()));
        }
        Ok(TameWord { nvars, factors })
    }

    pub fn single(e: ElementaryAuto<E>) -> Self {
        TameWord {
            nvars: e.nvars(),
            factors: vec![e],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn factors(&self) -> &[ElementaryAuto<E>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn push(&mut self, e: ElementaryAuto<E>) {
        assert_eq!(e.nvars(), self.nvars, "factor arity");
        self.factors.push(e);
    }

    pub fn concat(&self, other: &TameWord<E>) -> TameWord<E> {
        assert_eq!(self.nvars, other.nvars, "word arity");
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        TameWord {
            nvars: self.nvars,
            factors,
        }
    }

    /// Reversed list of factor-wise inverses.
    pub fn inverse(&self) -> TameWord<E> {
        TameWord {
            nvars: self.nvars,
            factors: self
                .factors
                .iter()
                .rev()
                .map(ElementaryAuto::inverse)
                .collect(),
        }
    }

    /// `self * gen * self^{-1}`.
    pub fn conjugate(&self, gen: &ElementaryAuto<E>) -> TameWord<E> {
        let mut w = self.clone();
        w.push(gen.clone());
        w.concat(&self.inverse())
    }

    /// The automorphism `s_1 s_2 ... s_k`. Each step only rewrites one
    /// image: `(E s)(y_i) = alpha E(y_i) + E(f)`.
    pub fn evaluate(&self) -> Endomorphism<E> {
        let mut acc: Endomorphism<E> = Endomorphism::identity(self.nvars);
        for s in &self.factors {
            let moved = acc.images[s.index]
                .scaled(&s.alpha)
                .plus(&acc.apply(&s.param));
            acc.images[s.index] = moved;
        }
        acc
    }
}

impl TameWord<NCPoly> {
    /// Parses `s(i, alpha, expr); ...` over `n` generators. `id` (or an
    /// empty string) is the empty word.
    pub fn parse(src: &str, n: usize) -> Result<Self> {
        if matches!(src.trim(), "" | "id") {
            return Ok(TameWord::identity(n));
        }
        let factors = parse_tame_factors(src, n)?
            .into_iter()
            .map(|(i, a, f)| ElementaryAuto::new(GeneratorId::new(i, n)?.index(), a, f))
            .collect::<Result<Vec<_>>>()?;
        TameWord::new(n, factors)
    }

    /// Image of the word in `TA(C)` under the projection `B -> C`.
    pub fn to_metabelian(&self) -> Result<TameWord<MetabelianElem>> {
        let factors = self
            .factors
            .iter()
            .map(|s| ElementaryAuto::new(s.index, s.alpha.clone(), straighten(&s.param)?))
            .collect::<Result<Vec<_>>>()?;
        TameWord::new(3, factors)
    }
}

impl<E: fmt::Display> fmt::Display for TameWord<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("id");
        }
        for (k, s) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// The transposition `(k s)` as the three-factor word
/// `sigma(s, -1, y_k) sigma(k, 1, -y_s) sigma(s, 1, y_k)`.
pub fn transposition<E: AlgebraElement>(n: usize, k: usize, s: usize) -> Result<TameWord<E>> {
    if k == s {
        return Err(Error::DegenerateTransposition(k + 1));
    }
    for i in [k, s] {
        if i >= n {
            return Err(Error::GeneratorOutOfRange { index: i + 1, n });
        }
    }
    let yk = E::generator(n, k);
    let ys = E::generator(n, s);
    let m1 = -Scalar::one();
    TameWord::new(
        n,
        vec![
            ElementaryAuto::new(s, m1.clone(), yk.clone())?,
            ElementaryAuto::new(k, Scalar::one(), ys.scaled(&m1))?,
            ElementaryAuto::new(s, Scalar::one(), yk)?,
        ],
    )
}

/// The three families of defining relations between elementary
/// automorphisms.
#[derive(Debug, Clone, PartialEq)]
pub enum Relation<E> {
    /// `sigma(i,a,f) sigma(i,b,g) = sigma(i, ab, b f + g)`.
    SameIndex {
        index: usize,
        alpha: Scalar,
        f: E,
        beta: Scalar,
        g: E,
    },
    /// `s^{-1} sigma(j,b,g) s = sigma(j, b, s^{-1}(g))` for
    /// `s = sigma(i,a,f)`, `i != j`, `f` free of `y_i` and `y_j`.
    Conjugation {
        i: usize,
        alpha: Scalar,
        f: E,
        j: usize,
        beta: Scalar,
        g: E,
    },
    /// `(k s)^{-1} sigma(i,a,f) (k s) = sigma(j, a, (k s)(f))`, where `j` is
    /// the image of `i` under the transposition.
    Transposition {
        k: usize,
        s: usize,
        index: usize,
        alpha: Scalar,
        f: E,
    },
}

impl<E> Relation<E> {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::SameIndex { .. } => "same-index",
            Relation::Conjugation { .. } => "conjugation",
            Relation::Transposition { .. } => "transposition",
        }
    }
}

fn side<T>(r: Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| Error::SideCondition(format!("{what}: {e}")))
}

/// Evaluates both sides of a relation instance. Violated side conditions
/// are reported as [`Error::SideCondition`], distinct from `Ok(false)`.
pub fn relation_check<E: AlgebraElement>(rel: &Relation<E>) -> Result<bool> {
    let (lhs, rhs) = relation_sides(rel)?;
    Ok(lhs.evaluate() == rhs.evaluate())
}

/// Left and right hand sides of a relation as tame words.
pub fn relation_sides<E: AlgebraElement>(rel: &Relation<E>) -> Result<(TameWord<E>, TameWord<E>)> {
    match rel {
        Relation::SameIndex {
            index,
            alpha,
            f,
            beta,
            g,
        } => {
            let n = f.nvars();
            let a = side(
                ElementaryAuto::new(*index, alpha.clone(), f.clone()),
                "first factor",
            )?;
            let b = side(
                ElementaryAuto::new(*index, beta.clone(), g.clone()),
                "second factor",
            )?;
            let merged = ElementaryAuto::new(*index, alpha * beta, f.scaled(beta).plus(g))?;
            Ok((TameWord::new(n, vec![a, b])?, TameWord::single(merged)))
        }
        Relation::Conjugation {
            i,
            alpha,
            f,
            j,
            beta,
            g,
        } => {
            let n = f.nvars();
            if i == j {
                return Err(Error::SideCondition("indices must differ".into()));
            }
            if f.involves(*j) {
                return Err(Error::SideCondition(format!(
                    "f must not involve generator {}",
                    j + 1
                )));
            }
            let s = side(
                ElementaryAuto::new(*i, alpha.clone(), f.clone()),
                "conjugating factor",
            )?;
            let t = side(
                ElementaryAuto::new(*j, beta.clone(), g.clone()),
                "inner factor",
            )?;
            let sinv = s.inverse();
            let moved = sinv.to_endomorphism().apply(g);
            let rhs = ElementaryAuto::new(*j, beta.clone(), moved)?;
            Ok((TameWord::new(n, vec![sinv, t, s])?, TameWord::single(rhs)))
        }
        Relation::Transposition {
            k,
            s,
            index,
            alpha,
            f,
        } => {
            let n = f.nvars();
            let ks: TameWord<E> = side(transposition(n, *k, *s), "transposition")?;
            let inner = side(
                ElementaryAuto::new(*index, alpha.clone(), f.clone()),
                "inner factor",
            )?;
            let j = if index == k {
                *s
            } else if index == s {
                *k
            } else {
                *index
            };
            let swapped = ks.evaluate().apply(f);
            let rhs = ElementaryAuto::new(j, alpha.clone(), swapped)?;
            let lhs = ks.inverse().concat(&TameWord::single(inner)).concat(&ks);
            Ok((lhs, TameWord::single(rhs)))
        }
    }
}

/// The Anick automorphism `(x + z(xz - zy), y + (xz - zy)z, z)`.
pub fn anick() -> Endomorphism<NCPoly> {
    let p = |s: &str| crate::parse::parse_nc(s).expect("constant expression");
    Endomorphism::new(vec![p("x + z(xz - zy)"), p("y + (xz - zy)z"), p("z")])
}

/// `sigma(1,1,-y) sigma(2,1,-x z^2) sigma(1,1,y)`; composed after the
/// Anick map it abelianizes to the identity.
pub fn anick_normalizer() -> TameWord<NCPoly> {
    TameWord::parse("s(1,1,-y); s(2,1,-x*z^2); s(1,1,y)", 3).expect("constant word")
}

/// Size knobs for the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    /// Largest absolute value in the coefficient pool `{-c..c} \ {0}`.
    pub coeff_bound: i64,
    pub max_degree: usize,
    pub max_terms: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            coeff_bound: 3,
            max_degree: 2,
            max_terms: 2,
        }
    }
}

pub fn random_coefficient<R: Rng + ?Sized>(rng: &mut R, cfg: &SamplerConfig) -> Scalar {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-cfg.coeff_bound..=cfg.coeff_bound);
    }
    int(c)
}

fn random_word<R: Rng + ?Sized>(rng: &mut R, letters: &[usize], len: usize) -> Word {
    Word(
        (0..len)
            .map(|_| *letters.choose(rng).unwrap() as u8)
            .collect(),
    )
}

/// A polynomial in the given letters with degree at most `max_degree`
/// (constants allowed) and at most `max_terms` terms.
pub fn random_poly_in<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    letters: &[usize],
    min_degree: usize,
    cfg: &SamplerConfig,
) -> NCPoly {
    let count = rng.gen_range(1..=cfg.max_terms);
    let top = cfg.max_degree.max(min_degree);
    let terms = (0..count).map(|_| {
        let len = if letters.is_empty() {
            0
        } else {
            rng.gen_range(min_degree..=top)
        };
        (random_word(rng, letters, len), random_coefficient(rng, cfg))
    });
    NCPoly::from_terms(n, terms.collect::<Vec<_>>())
}

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, cfg: &SamplerConfig) -> NCPoly {
    let letters: Vec<usize> = (0..n).collect();
    random_poly_in(rng, n, &letters, 0, cfg)
}

pub fn random_elementary<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    cfg: &SamplerConfig,
) -> ElementaryAuto<NCPoly> {
    let index = rng.gen_range(0..n);
    let letters: Vec<usize> = (0..n).filter(|&j| j != index).collect();
    let alpha = random_coefficient(rng, cfg);
    let f = random_poly_in(rng, n, &letters, 0, cfg);
    ElementaryAuto::new(index, alpha, f).expect("parameter avoids its index")
}

pub fn random_tame_word<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    len: usize,
    cfg: &SamplerConfig,
) -> TameWord<NCPoly> {
    let factors = (0..len).map(|_| random_elementary(rng, n, cfg)).collect();
    TameWord::new(n, factors).expect("uniform arity")
}

/// An element of the commutator ideal of `B` built from the letters other
/// than `avoid`: a sum of terms `c u [y_j, y_k] v`.
pub fn random_commutator_element<R: Rng + ?Sized>(
    rng: &mut R,
    avoid: usize,
    cfg: &SamplerConfig,
) -> NCPoly {
    let letters: Vec<usize> = (0..3).filter(|&j| j != avoid).collect();
    let bracket = NCPoly::commutator(
        &NCPoly::generator(3, letters[0]),
        &NCPoly::generator(3, letters[1]),
    );
    let count = rng.gen_range(1..=cfg.max_terms);
    let mut out = NCPoly::zero(3);
    let pad = cfg.max_degree.saturating_sub(2);
    for _ in 0..count {
        let (a, b) = if pad == 0 {
            (0, 0)
        } else {
            let a = rng.gen_range(0..=pad);
            (a, rng.gen_range(0..=pad - a))
        };
        let u = NCPoly::monomial(
            3,
            random_word(rng, &letters, a),
            random_coefficient(rng, cfg),
        );
        let v = NCPoly::monomial(3, random_word(rng, &letters, b), Scalar::one());
        out = &out + &(&(&u * &bracket) * &v);
    }
    if out.is_zero() {
        bracket
    } else {
        out
    }
}

/// A commutative polynomial over `ring` with random monomials of total
/// degree at most `max_degree`.
pub fn random_comm_poly<R: Rng + ?Sized>(
    rng: &mut R,
    ring: &std::sync::Arc<crate::commpoly::Ring>,
    cfg: &SamplerConfig,
) -> crate::commpoly::CommPoly {
    let nvars = ring.arity();
    let count = rng.gen_range(1..=cfg.max_terms);
    let terms = (0..count)
        .map(|_| {
            let mut e = vec![0u32; nvars];
            for _ in 0..rng.gen_range(0..=cfg.max_degree) {
                e[rng.gen_range(0..nvars)] += 1;
            }
            (e, random_coefficient(rng, cfg))
        })
        .collect::<Vec<_>>();
    crate::commpoly::CommPoly::from_terms(ring, terms)
}

/// Sizes for kernel samples: the conjugating words and the kernel
/// generators get separate configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSamplerConfig {
    pub conjugator_len: usize,
    pub conjugator: SamplerConfig,
    pub generator: SamplerConfig,
}

impl KernelSamplerConfig {
    /// Sizes for evaluation in `B`: affine conjugators and bare commutators.
    /// Composition in the free algebra multiplies degrees, so anything larger
    /// makes products of four conjugates impractically big.
    pub fn free_algebra() -> Self {
        KernelSamplerConfig {
            conjugator_len: 2,
            conjugator: SamplerConfig {
                coeff_bound: 3,
                max_degree: 1,
                max_terms: 2,
            },
            generator: SamplerConfig {
                coeff_bound: 3,
                max_degree: 2,
                max_terms: 1,
            },
        }
    }

    /// Larger sizes for evaluation in `C`, where images stay small.
    pub fn metabelian() -> Self {
        KernelSamplerConfig {
            conjugator_len: 2,
            conjugator: SamplerConfig {
                coeff_bound: 3,
                max_degree: 2,
                max_terms: 1,
            },
            generator: SamplerConfig {
                coeff_bound: 3,
                max_degree: 3,
                max_terms: 2,
            },
        }
    }
}

impl Default for KernelSamplerConfig {
    fn default() -> Self {
        Self::free_algebra()
    }
}

/// A product of `length` conjugates `psi sigma(j, 1, f) psi^{-1}` with `f`
/// in the commutator ideal; its abelianization is the identity.
pub fn sample_ker_tame<R: Rng + ?Sized>(
    rng: &mut R,
    length: usize,
    cfg: &KernelSamplerConfig,
) -> TameWord<NCPoly> {
    let mut word = TameWord::identity(3);
    for _ in 0..length {
        let psi_len = rng.gen_range(0..=cfg.conjugator_len);
        let psi = random_tame_word(rng, 3, psi_len, &cfg.conjugator);
        let j = rng.gen_range(0..3);
        let f = random_commutator_element(rng, j, &cfg.generator);
        let gen = ElementaryAuto::new(j, Scalar::one(), f).expect("kernel parameter avoids index");
        word = word.concat(&psi.conjugate(&gen));
    }
    word
}

/// The same sampler with factors pushed to `TA(C)`.
pub fn sample_ker_tame_c<R: Rng + ?Sized>(
    rng: &mut R,
    length: usize,
    cfg: &KernelSamplerConfig,
) -> TameWord<MetabelianElem> {
    sample_ker_tame(rng, length, cfg)
        .to_metabelian()
        .expect("three generators")
}
