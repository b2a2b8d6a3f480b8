//! Randomized property suites with deterministic, seed-derived instances.
//!
//! Every instance gets its own generator derived from `(seed, suite, k)`, so
//! results do not depend on thread scheduling and reports are byte-stable.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Endomorphism;
use crate::autgroup::{
    random_comm_poly, random_commutator_element, random_poly, random_poly_in, random_tame_word,
    relation_check, sample_ker_tame, sample_ker_tame_c, ElementaryAuto, KernelSamplerConfig,
    Relation, SamplerConfig, TameWord,
};
use crate::certify::uv_to_sandwich;
use crate::commpoly::{ring_a, ring_ua, ring_ufx3, ring_uv, CommPoly};
use crate::e2decide::{decide_e2, random_e2_product, verify_certificate, Mat2C};
use crate::error::{Error, Result};
use crate::fox::{endo_on_matrix, fox_derive, j2, jacobian};
use crate::matrix::Matrix;
use crate::metabelian::{
    fox_c, induced_on_a, j2_c, jacobian_c, kernel_conjugate, straighten, MetabelianElem,
};
use crate::morphisms::{eta_matrix, induced_on_ua_matrix, nu_matrix, pi_b};
use crate::ncpoly::NCPoly;
use crate::scalar::Scalar;
use crate::uenv::{universal_derivation, TensorPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Small,
    Full,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Profile::Small),
            "full" => Ok(Profile::Full),
            other => Err(Error::Precondition(format!(
                "unknown profile `{other}` (expected small or full)"
            ))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Small => "small",
            Profile::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    FoxIdentity,
    ChainRuleB,
    ChainRuleC,
    RelationSameIndex,
    RelationConjugation,
    RelationTransposition,
    EpsMultiplicative,
    FoxCFormula,
    RankOneMinors,
    EtaTriangular,
    KernelB,
    KernelC,
    E2RoundTrip,
    XyLinearTame,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::FoxIdentity,
        Suite::ChainRuleB,
        Suite::ChainRuleC,
        Suite::RelationSameIndex,
        Suite::RelationConjugation,
        Suite::RelationTransposition,
        Suite::EpsMultiplicative,
        Suite::FoxCFormula,
        Suite::RankOneMinors,
        Suite::EtaTriangular,
        Suite::KernelB,
        Suite::KernelC,
        Suite::E2RoundTrip,
        Suite::XyLinearTame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FoxIdentity => "fox-identity",
            Suite::ChainRuleB => "chain-rule-B",
            Suite::ChainRuleC => "chain-rule-C",
            Suite::RelationSameIndex => "relation-same-index",
            Suite::RelationConjugation => "relation-conjugation",
            Suite::RelationTransposition => "relation-transposition",
            Suite::EpsMultiplicative => "eps-multiplicative",
            Suite::FoxCFormula => "fox-c-formula",
            Suite::RankOneMinors => "rank-one-minors+eta",
            Suite::EtaTriangular => "eta-triangular",
            Suite::KernelB => "kernel-B-nu-E2",
            Suite::KernelC => "kernel-C-eta-E2",
            Suite::E2RoundTrip => "e2-round-trip",
            Suite::XyLinearTame => "xy-linear-tame",
        }
    }

    pub fn count(self, profile: Profile) -> usize {
        let full = match self {
            Suite::FoxIdentity => 200,
            Suite::ChainRuleB | Suite::ChainRuleC => 100,
            Suite::RelationSameIndex
            | Suite::RelationConjugation
            | Suite::RelationTransposition => 200,
            Suite::EpsMultiplicative => 200,
            Suite::FoxCFormula => 100,
            Suite::RankOneMinors | Suite::EtaTriangular => 50,
            Suite::KernelB | Suite::KernelC => 100,
            Suite::E2RoundTrip => 500,
            Suite::XyLinearTame => 50,
        };
        match profile {
            Profile::Full => full,
            Profile::Small => full.div_ceil(10),
        }
    }

    fn tag(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64 + 1
    }

    /// Runs one instance; `Ok(false)` or `Err` is a failure.
    pub fn run_instance(self, rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
        match self {
            Suite::FoxIdentity => fox_identity(rng),
            Suite::ChainRuleB => chain_rule_b(rng, k),
            Suite::ChainRuleC => chain_rule_c(rng, k),
            Suite::RelationSameIndex => relation_same_index(rng),
            Suite::RelationConjugation => relation_conjugation(rng),
            Suite::RelationTransposition => relation_transposition(rng),
            Suite::EpsMultiplicative => eps_multiplicative(rng),
            Suite::FoxCFormula => fox_c_formula(rng),
            Suite::RankOneMinors => rank_one_minors(rng),
            Suite::EtaTriangular => eta_triangular(rng, k),
            Suite::KernelB => kernel_b(rng, k),
            Suite::KernelC => kernel_c(rng, k),
            Suite::E2RoundTrip => e2_round_trip(rng, k),
            Suite::XyLinearTame => xy_linear_tame(rng, k),
        }
    }
}

/// Generator for instance `k` of `suite` under `seed` (SplitMix64 mixing).
pub fn instance_rng(seed: u64, suite: Suite, k: usize) -> ChaCha8Rng {
    let mut z = seed
        ^ suite.tag().wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (k as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_suite(suite: Suite, seed: u64, count: usize) -> SuiteResult {
    let outcomes: Vec<Option<String>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = instance_rng(seed, suite, k);
            match suite.run_instance(&mut rng, k) {
                Ok(true) => None,
                Ok(false) => Some(format!("instance {k}: property does not hold")),
                Err(e) => Some(format!("instance {k}: {e}")),
            }
        })
        .collect();
    let failed = outcomes.iter().filter(|o| o.is_some()).count();
    SuiteResult {
        suite: suite.name().into(),
        passed: count - failed,
        failed,
        first_failure: outcomes.into_iter().flatten().next(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub profile: Profile,
    pub suites: Vec<SuiteResult>,
}

impl SelfTestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={} profile={}", self.seed, self.profile)?;
        for s in &self.suites {
            writeln!(
                f,
                "{:<24} {:>4}/{:<4} passed",
                s.suite,
                s.passed,
                s.passed + s.failed
            )?;
            if let Some(msg) = &s.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
        }
        if self.all_passed() {
            writeln!(f, "all suites passed")
        } else {
            writeln!(f, "some suites FAILED")
        }
    }
}

pub fn run_selftest(seed: u64, profile: Profile) -> SelfTestReport {
    SelfTestReport {
        seed,
        profile,
        suites: Suite::ALL
            .iter()
            .map(|&s| run_suite(s, seed, s.count(profile)))
            .collect(),
    }
}

// Sampler sizes. Larger free-algebra parameters make composed images grow
// past what an exact test can afford.

pub const FOX_POLY: SamplerConfig = SamplerConfig {
    coeff_bound: 3,
    max_degree: 5,
    max_terms: 4,
};

pub const TAME_B: SamplerConfig = SamplerConfig {
    coeff_bound: 3,
    max_degree: 2,
    max_terms: 1,
};

pub const TAME_C: SamplerConfig = SamplerConfig {
    coeff_bound: 3,
    max_degree: 2,
    max_terms: 2,
};

pub const RELATION_PARAM: SamplerConfig = SamplerConfig {
    coeff_bound: 3,
    max_degree: 3,
    max_terms: 2,
};

pub const EPS_POLY: SamplerConfig = SamplerConfig {
    coeff_bound: 3,
    max_degree: 4,
    max_terms: 3,
};

pub const UA_COEFF: SamplerConfig = SamplerConfig {
    coeff_bound: 3,
    max_degree: 2,
    max_terms: 3,
};

pub const E2_FACTORS: usize = 12;
pub const E2_DEGREE: u32 = 3;

fn fox_identity(rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = random_poly(rng, 3, &FOX_POLY);
    let mut rhs = TensorPoly::zero(3);
    for i in 0..3 {
        let di = universal_derivation(&NCPoly::generator(3, i));
        rhs = &rhs + &(&di * &fox_derive(&f, i));
    }
    Ok(universal_derivation(&f) == rhs)
}

/// Word lengths cycle through `1..=4`.
fn tame_pair(
    rng: &mut ChaCha8Rng,
    k: usize,
    cfg: &SamplerConfig,
) -> (TameWord<NCPoly>, TameWord<NCPoly>) {
    let a = random_tame_word(rng, 3, 1 + k % 4, cfg);
    let b = random_tame_word(rng, 3, 1 + (k / 4) % 4, cfg);
    (a, b)
}

fn chain_rule_b(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    let (a, b) = tame_pair(rng, k, &TAME_B);
    let (phi, psi) = (a.evaluate(), b.evaluate());
    let lhs = jacobian(&phi.compose(&psi));
    let rhs = jacobian(&phi).mul(&endo_on_matrix(&phi, &jacobian(&psi))?);
    Ok(lhs == rhs)
}

fn chain_rule_c(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    let (a, b) = tame_pair(rng, k, &TAME_C);
    let (phi, psi) = (a.to_metabelian()?.evaluate(), b.to_metabelian()?.evaluate());
    let lhs = jacobian_c(&phi.compose(&psi));
    let twisted = induced_on_ua_matrix(&induced_on_a(&phi), &jacobian_c(&psi))?;
    Ok(lhs == jacobian_c(&phi).mul(&twisted))
}

fn coefficient(rng: &mut ChaCha8Rng) -> Scalar {
    crate::autgroup::random_coefficient(rng, &RELATION_PARAM)
}

fn others(avoid: &[usize]) -> Vec<usize> {
    (0..3).filter(|i| !avoid.contains(i)).collect()
}

fn relation_same_index(rng: &mut ChaCha8Rng) -> Result<bool> {
    let index = rng.gen_range(0..3);
    let letters = others(&[index]);
    let rel = Relation::SameIndex {
        index,
        alpha: coefficient(rng),
        f: random_poly_in(rng, 3, &letters, 0, &RELATION_PARAM),
        beta: coefficient(rng),
        g: random_poly_in(rng, 3, &letters, 0, &RELATION_PARAM),
    };
    relation_check(&rel)
}

fn relation_conjugation(rng: &mut ChaCha8Rng) -> Result<bool> {
    let i = rng.gen_range(0..3);
    let j = (i + rng.gen_range(1..3)) % 3;
    let rel = Relation::Conjugation {
        i,
        alpha: coefficient(rng),
        f: random_poly_in(rng, 3, &others(&[i, j]), 0, &RELATION_PARAM),
        j,
        beta: coefficient(rng),
        g: random_poly_in(rng, 3, &others(&[j]), 0, &RELATION_PARAM),
    };
    relation_check(&rel)
}

fn relation_transposition(rng: &mut ChaCha8Rng) -> Result<bool> {
    let k = rng.gen_range(0..3);
    let s = (k + rng.gen_range(1..3)) % 3;
    let index = rng.gen_range(0..3);
    let rel = Relation::Transposition {
        k,
        s,
        index,
        alpha: coefficient(rng),
        f: random_poly_in(rng, 3, &others(&[index]), 0, &RELATION_PARAM),
    };
    relation_check(&rel)
}

fn eps_multiplicative(rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = random_poly(rng, 3, &EPS_POLY);
    let g = random_poly(rng, 3, &EPS_POLY);
    Ok(straighten(&(&f * &g))? == straighten(&f)?.mul(&straighten(&g)?))
}

/// `df/dz3 = (l1 - r1) f13 + (l2 - r2) f23`, evaluated on the coordinates
/// the element was built from (before canonicalization).
fn fox_c_formula(rng: &mut ChaCha8Rng) -> Result<bool> {
    let ua = ring_ua();
    let triple = [
        random_comm_poly(rng, &ua, &UA_COEFF),
        random_comm_poly(rng, &ua, &UA_COEFF),
        random_comm_poly(rng, &ua, &UA_COEFF),
    ];
    let m = MetabelianElem::from_parts(CommPoly::zero(&ring_a()), triple.clone())?;
    let delta = |i: usize| &CommPoly::var(&ua, i) - &CommPoly::var(&ua, i + 3);
    let expected = &(&delta(0) * &triple[1]) + &(&delta(1) * &triple[2]);
    Ok(fox_c(&m, 2) == expected)
}

fn kernel_generator(
    rng: &mut ChaCha8Rng,
    cfg: &SamplerConfig,
) -> Result<ElementaryAuto<MetabelianElem>> {
    let j = rng.gen_range(0..3);
    let f = straighten(&random_commutator_element(rng, j, cfg))?;
    ElementaryAuto::new(j, Scalar::one(), f)
}

/// All 2x2 minors of `J - E` vanish for a single conjugate, and `eta(J)`
/// has bottom row `(0, 0, 1)`.
fn rank_one_minors(rng: &mut ChaCha8Rng) -> Result<bool> {
    let cfg = KernelSamplerConfig::metabelian();
    let len = rng.gen_range(0..=cfg.conjugator_len);
    let psi = random_tame_word(rng, 3, len, &cfg.conjugator).to_metabelian()?;
    let gen = kernel_generator(rng, &cfg.generator)?;
    let theta = kernel_conjugate(&psi, &gen)?;
    let j = jacobian_c(&theta);
    let e = Matrix::identity_like(3, j.get(0, 0));
    Ok(j.sub(&e).minors2().iter().all(CommPoly::is_zero) && eta_bottom_row(&j)?)
}

/// Lengths cycle through `1..=4`.
fn kernel_length(k: usize) -> usize {
    1 + k % 4
}

/// `eta(J)` has bottom row `(0, 0, 1)`.
fn eta_triangular(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    let phi =
        sample_ker_tame_c(rng, kernel_length(k), &KernelSamplerConfig::metabelian()).evaluate();
    let a = ring_a();
    if induced_on_a(&phi)
        .iter()
        .enumerate()
        .any(|(i, p)| *p != CommPoly::var(&a, i))
    {
        return Ok(false);
    }
    eta_bottom_row(&jacobian_c(&phi))
}

fn eta_bottom_row(j: &Matrix<CommPoly>) -> Result<bool> {
    let m = eta_matrix(j)?;
    Ok(m.get(2, 0).is_zero() && m.get(2, 1).is_zero() && m.get(2, 2).is_one())
}

fn certified_in(m: &Mat2C) -> Result<bool> {
    let cert = decide_e2(m)?;
    if !cert.is_in() {
        return Ok(false);
    }
    verify_certificate(&cert)?;
    Ok(cert.product() == *m)
}

fn kernel_b(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    let phi =
        sample_ker_tame(rng, kernel_length(k), &KernelSamplerConfig::free_algebra()).evaluate();
    let a = ring_a();
    for (i, f) in phi.images.iter().enumerate() {
        if pi_b(f)? != CommPoly::var(&a, i) {
            return Ok(false);
        }
    }
    certified_in(&nu_matrix(&j2(&phi))?)
}

fn kernel_c(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    let phi =
        sample_ker_tame_c(rng, kernel_length(k), &KernelSamplerConfig::metabelian()).evaluate();
    let m = eta_matrix(&j2_c(&phi))?;
    debug_assert!(std::sync::Arc::ptr_eq(m.get(0, 0).ring(), &ring_ufx3()));
    certified_in(&m)
}

fn e2_round_trip(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    let count = 1 + k % E2_FACTORS;
    let (_, m) = random_e2_product(rng, &ring_uv(), count, E2_DEGREE, 2);
    certified_in(&m)
}

/// A tame map of the restricted shape built from elementary factors that
/// correspond to elementary matrices, plus a scaling and a translation.
pub fn random_xy_linear_word(rng: &mut ChaCha8Rng, k: usize) -> Result<TameWord<NCPoly>> {
    let uv = ring_uv();
    let cfg = SamplerConfig {
        coeff_bound: 3,
        max_degree: 2,
        max_terms: 2,
    };
    let mut word = TameWord::identity(3);
    word.push(ElementaryAuto::new(
        rng.gen_range(0..2),
        crate::autgroup::random_coefficient(rng, &cfg),
        NCPoly::zero(3),
    )?);
    for step in 0..(1 + k % 4) {
        let t = random_comm_poly(rng, &uv, &cfg);
        let index = (step + k) % 2;
        word.push(ElementaryAuto::new(
            index,
            Scalar::one(),
            uv_to_sandwich(&t, 1 - index),
        )?);
    }
    let zpoly = random_poly_in(rng, 3, &[2], 0, &cfg);
    word.push(ElementaryAuto::new(
        rng.gen_range(0..2),
        Scalar::one(),
        zpoly,
    )?);
    Ok(word)
}

fn xy_linear_tame(rng: &mut ChaCha8Rng, k: usize) -> Result<bool> {
    use crate::certify::{certify_xy_linear, WildnessStatus};
    let phi: Endomorphism<NCPoly> = random_xy_linear_word(rng, k)?.evaluate();
    let v = certify_xy_linear(&phi)?;
    Ok(v.status == WildnessStatus::TameWithDecomposition
        && v.decomposition.is_some_and(|w| w.evaluate() == phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_parses() {
        assert_eq!("small".parse::<Profile>().unwrap(), Profile::Small);
        assert!("huge".parse::<Profile>().is_err());
    }

    #[test]
    fn instance_generators_differ_by_index_and_seed() {
        let a: u64 = instance_rng(1, Suite::FoxIdentity, 0).gen();
        let b: u64 = instance_rng(1, Suite::FoxIdentity, 1).gen();
        let c: u64 = instance_rng(2, Suite::FoxIdentity, 0).gen();
        assert!(a != b && a != c);
    }

    #[test]
    fn every_suite_passes_a_few_instances() {
        for s in Suite::ALL {
            let r = run_suite(s, 42, 3);
            assert!(r.ok(), "{}: {:?}", r.suite, r.first_failure);
        }
    }
}
