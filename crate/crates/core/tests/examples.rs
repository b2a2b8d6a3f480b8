//! Worked examples for each layer, checked against hand-computed values.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tamewild::autgroup::{
    anick, anick_normalizer, random_tame_word, relation_check, sample_ker_tame, transposition,
    ElementaryAuto, KernelSamplerConfig, Relation, SamplerConfig, TameWord,
};
use tamewild::certify::{certify_normalized, certify_xy_linear, WildnessStatus};
use tamewild::commpoly::{ring_a, ring_ua, ring_ufx3, ring_uv};
use tamewild::e2decide::{
    decide_e2, decide_ge2f, det2, verify_certificate, whitehead_factor, ElementaryFactor, Mat2C,
    Position, Verdict,
};
use tamewild::error::Error;
use tamewild::fox::{endo_on_tensor, fox_derive, gradient, j2, jacobian};
use tamewild::matrix::Matrix;
use tamewild::metabelian::{fox_c, induced_on_a, jacobian_c, kernel_conjugate, straighten, EndoC};
use tamewild::morphisms::{
    eta_u, induced_on_ua_matrix, nu_b, nu_matrix, nu_u, pi_b, pi_u, rho_u, tau_c,
};
use tamewild::parse::{parse_comm, parse_nc};
use tamewild::scalar::{frac, int};
use tamewild::uenv::universal_derivation;
use tamewild::{CommPoly, Endomorphism, MetabelianElem, NCPoly, TensorPoly};

fn p(s: &str) -> NCPoly {
    parse_nc(s).unwrap()
}

fn t(s: &str) -> TensorPoly {
    TensorPoly::parse(s, 3).unwrap()
}

fn a(s: &str) -> CommPoly {
    parse_comm(s, &ring_a()).unwrap()
}

fn ua(s: &str) -> CommPoly {
    parse_comm(s, &ring_ua()).unwrap()
}

fn uv(s: &str) -> CommPoly {
    parse_comm(s, &ring_uv()).unwrap()
}

fn c(s: &str) -> MetabelianElem {
    straighten(&p(s)).unwrap()
}

fn mat(rows: [[&str; 2]; 2]) -> Mat2C {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| uv(s)).collect())
            .collect(),
    )
}

fn endo(images: [&str; 3]) -> Endomorphism<NCPoly> {
    Endomorphism::new(images.iter().map(|s| p(s)).collect())
}

fn word(s: &str) -> TameWord<NCPoly> {
    TameWord::parse(s, 3).unwrap()
}

#[test]
fn noncommutative_arithmetic() {
    assert_eq!(&p("y1 + y2") + &p("-y2"), p("y1"));
    assert_eq!(&p("x z - z y") + &p("z y"), p("x z"));
    assert_ne!(&p("y1") * &p("y2"), &p("y2") * &p("y1"));
    assert_eq!(&p("x z - z y") * &p("z"), p("x z^2 - z y z"));
    assert_eq!(&NCPoly::one(3) * &p("x y + 2"), p("x y + 2"));
}

#[test]
fn substitution_and_degrees() {
    let delta = anick();
    assert_eq!(delta.apply(&p("x")), p("x + z x z - z^2 y"));
    assert_eq!(delta.apply(&p("z")), p("z"));
    assert_eq!(endo(["y", "x", "z"]).apply(&p("x y")), p("y x"));
    assert_eq!(p("x + z x z - z^2 y").degree_in(&[0, 1]), Some(1));
    assert_eq!(NCPoly::zero(3).degree_in(&[0, 1]), None);
    assert_eq!(p("z^5").degree_in(&[0, 1]), Some(0));
}

#[test]
fn substitution_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SamplerConfig::default();
    for len in 0..4 {
        let e = random_tame_word(&mut rng, 3, len, &cfg).evaluate();
        let f = tamewild::autgroup::random_poly(&mut rng, 3, &cfg);
        let g = tamewild::autgroup::random_poly(&mut rng, 3, &cfg);
        assert_eq!(e.apply(&(&f * &g)), &e.apply(&f) * &e.apply(&g));
        assert_eq!(e.apply(&(&f + &g)), &e.apply(&f) + &e.apply(&g));
    }
}

#[test]
fn enveloping_algebra_products() {
    assert_eq!(&t("(z)'⊗(1)") * &t("(z)'⊗(1)"), t("(z^2)'⊗(1)"));
    assert_eq!(&t("(x)'⊗(1)") * &t("(y)'⊗(1)"), t("(y x)'⊗(1)"));
    assert_eq!(&t("(1)'⊗(z)") * &t("(z)'⊗(1)"), t("(z)'⊗(z)"));
    assert_eq!(t("(y1)'⊗(y2)").lambda(), p("y1 y2"));
    assert_eq!(t("(z^2)'⊗(z)").lambda(), p("z^3"));
}

#[test]
fn universal_derivation_examples() {
    assert_eq!(universal_derivation(&p("y1")), t("(y1)'⊗(1) - (1)'⊗(y1)"));
    assert!(universal_derivation(&NCPoly::one(3)).is_zero());
    let lhs = universal_derivation(&p("y1 y2"));
    assert_eq!(lhs, t("(y1 y2)'⊗(1) - (1)'⊗(y1 y2)"));
    let rhs = &(&universal_derivation(&p("y1")) * &t("(1)'⊗(y2)"))
        + &(&universal_derivation(&p("y2")) * &t("(y1)'⊗(1)"));
    assert_eq!(lhs, rhs);
}

#[test]
fn commutative_examples() {
    assert!(uv("(1 + u v)(1 - u v) + u^2 v^2").is_one());
    assert_eq!(CommPoly::zero(&ring_uv()).total_degree(), None);
    assert_eq!(ua("(l1 - r1) r2"), ua("l1 r2 - r1 r2"));
}

#[test]
fn fox_derivative_examples() {
    assert_eq!(fox_derive(&p("y1"), 0), TensorPoly::one(3));
    assert_eq!(fox_derive(&p("y1 y2"), 1), t("(y1)'⊗(1)"));
    assert_eq!(fox_derive(&p("z x z"), 0), t("(z)'⊗(z)"));
    assert_eq!(
        gradient(&p("z")),
        vec![TensorPoly::zero(3), TensorPoly::zero(3), TensorPoly::one(3)]
    );
    assert_eq!(
        gradient(&p("y2 y3 - y3 y2")),
        vec![
            TensorPoly::zero(3),
            t("(1)'⊗(y3) - (y3)'⊗(1)"),
            t("(y2)'⊗(1) - (1)'⊗(y2)"),
        ]
    );
    assert!(gradient(&NCPoly::one(3)).iter().all(TensorPoly::is_zero));
}

#[test]
fn jacobian_examples() {
    assert!(j2(&Endomorphism::identity(3)).is_identity());
    let expected = Matrix::from_rows(vec![
        vec![t("1 + (z)'⊗(z)"), t("(1)'⊗(z^2)")],
        vec![t("-(z^2)'⊗(1)"), t("1 - (z)'⊗(z)")],
    ]);
    assert_eq!(j2(&anick()), expected);

    // Only column 1 moves: it becomes e1 + grad([y2, y3]).
    let sigma = word("s(1, 1, y2 y3 - y3 y2)").evaluate();
    let j = jacobian(&sigma);
    let grad = gradient(&p("y2 y3 - y3 y2"));
    for (i, g) in grad.iter().enumerate() {
        let unit = if i == 0 {
            TensorPoly::one(3)
        } else {
            TensorPoly::zero(3)
        };
        assert_eq!(j.get(i, 0), &(&unit + g));
        for col in 1..3 {
            let e = if i == col {
                TensorPoly::one(3)
            } else {
                TensorPoly::zero(3)
            };
            assert_eq!(j.get(i, col), &e);
        }
    }
}

#[test]
fn endomorphism_action_on_tensors() {
    let x = t("(y1)'⊗(y2)");
    assert_eq!(endo_on_tensor(&Endomorphism::identity(3), &x).unwrap(), x);
    let z = t("(y3)'⊗(1)");
    assert_eq!(endo_on_tensor(&anick(), &z).unwrap(), z);
    assert_eq!(
        endo_on_tensor(&endo(["y", "x", "z"]), &x).unwrap(),
        t("(y2)'⊗(y1)")
    );
}

#[test]
fn abelianization_and_projections() {
    assert_eq!(pi_b(&p("x z - z y")).unwrap(), a("x1 x3 - x2 x3"));
    assert!(pi_b(&NCPoly::commutator(&p("x + y^2"), &p("z x")))
        .unwrap()
        .is_zero());

    let psi = anick().compose(&anick_normalizer().evaluate());
    let images: Vec<_> = (0..3)
        .map(|i| pi_b(&psi.apply(&NCPoly::generator(3, i))).unwrap())
        .collect();
    assert_eq!(images, vec![a("x1"), a("x2"), a("x3")]);

    assert_eq!(nu_u(&t("(z)'⊗(z)")).unwrap(), uv("u v"));
    assert_eq!(
        nu_matrix(&j2(&anick())).unwrap(),
        mat([["1 + u v", "v^2"], ["-u^2", "1 - u v"]])
    );
    assert_eq!(
        nu_b(&p("x z^3 + z^2")).unwrap(),
        parse_comm("y3^2", &tamewild::commpoly::ring_fy3()).unwrap()
    );
    assert_eq!(
        eta_u(&ua("l1 r2 + 3 l3")).unwrap(),
        parse_comm("3 l3", &ring_ufx3()).unwrap()
    );
    assert_eq!(tau_c(&c("y x")), a("x1 x2"));
}

#[test]
fn projections_commute_on_the_enveloping_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = SamplerConfig::default();
    for _ in 0..20 {
        let f = tamewild::autgroup::random_poly(&mut rng, 3, &cfg);
        let g = tamewild::autgroup::random_poly(&mut rng, 3, &cfg);
        let x = TensorPoly::pure(&f, &g).unwrap();
        assert_eq!(
            rho_u(&nu_u(&x).unwrap()).unwrap(),
            eta_u(&pi_u(&x).unwrap()).unwrap()
        );
    }
}

#[test]
fn metabelian_straightening() {
    let m = c("y x");
    assert_eq!(m.abelian(), &a("x1 x2"));
    assert_eq!(m.triple(), &[ua("-1"), ua("0"), ua("0")]);

    let m = c("x y");
    assert!(m.triple().iter().all(CommPoly::is_zero));

    let m = c("z x y");
    assert_eq!(m.abelian(), &a("x1 x2 x3"));
    assert_eq!(m.triple(), &[ua("0"), ua("-r2"), ua("-l1")]);

    assert_eq!(c("y").mul(&c("x")), c("y x"));
    assert_eq!(
        c("x y z").mul(&MetabelianElem::constant(int(1))),
        c("x y z")
    );
    assert!(c("x y - y x").mul(&c("x z - z x")).is_zero());
}

#[test]
fn metabelian_fox_derivatives() {
    assert!(fox_c(&c("x"), 0).is_one());
    assert_eq!(fox_c(&c("x z - z x"), 2), ua("l1 - r1"));

    // Adding an element of R^2 to the lift does not change the result.
    let f = p("x y z + z^2 x");
    let junk = &NCPoly::commutator(&p("x"), &p("y")) * &NCPoly::commutator(&p("z"), &p("x y"));
    for i in 0..3 {
        assert_eq!(
            fox_c(&straighten(&f).unwrap(), i),
            fox_c(&straighten(&(&f + &junk)).unwrap(), i)
        );
    }
}

#[test]
fn metabelian_jacobians() {
    assert!(jacobian_c(&EndoC::identity(3)).is_identity());

    let gen = ElementaryAuto::new(0, int(1), c("y z - z y")).unwrap();
    let j = jacobian_c(&gen.to_endomorphism());
    let col = [ua("1"), ua("r3 - l3"), ua("l2 - r2")];
    for (i, expected) in col.iter().enumerate() {
        assert_eq!(j.get(i, 0), expected);
    }
    assert!(j.get(1, 1).is_one() && j.get(2, 2).is_one());
    assert!(j.get(0, 1).is_zero() && j.get(2, 1).is_zero());
}

#[test]
fn chain_rule_over_the_metabelian_algebra() {
    let phi = word("s(1, 2, y z)").to_metabelian().unwrap().evaluate();
    let psi = word("s(3, 1, x^2 - y)").to_metabelian().unwrap().evaluate();
    let lhs = jacobian_c(&phi.compose(&psi));
    let moved = induced_on_ua_matrix(&induced_on_a(&phi), &jacobian_c(&psi)).unwrap();
    assert_eq!(lhs, jacobian_c(&phi).mul(&moved));
}

#[test]
fn kernel_conjugates() {
    let gen = ElementaryAuto::new(0, int(1), c("y z - z y")).unwrap();
    let id = TameWord::<MetabelianElem>::identity(3);
    assert_eq!(kernel_conjugate(&id, &gen).unwrap(), gen.to_endomorphism());

    let psi = word("s(2, 1, z^2)").to_metabelian().unwrap();
    let theta = kernel_conjugate(&psi, &gen).unwrap();
    assert_eq!(induced_on_a(&theta), vec![a("x1"), a("x2"), a("x3")]);
    let j = jacobian_c(&theta);
    let e = Matrix::identity_like(3, j.get(0, 0));
    assert!(j.sub(&e).minors2().iter().all(CommPoly::is_zero));

    let bad = ElementaryAuto::new(0, int(1), c("y")).unwrap();
    assert!(matches!(
        kernel_conjugate(&psi, &bad),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn tame_word_evaluation() {
    assert!(TameWord::<NCPoly>::identity(3).evaluate().is_identity());
    let w = word("s(1, 2, y); s(1, 3, z)").evaluate();
    assert_eq!(w.apply(&p("x")), p("6 x + 3 y + z"));
    assert_eq!(w, word("s(1, 6, 3 y + z)").evaluate());

    let psi = anick().compose(&anick_normalizer().evaluate());
    assert!(psi
        .images
        .iter()
        .enumerate()
        .all(|(i, f)| { pi_b(f).unwrap() == CommPoly::var(&ring_a(), i) }));
}

#[test]
fn inverses() {
    let s = ElementaryAuto::new(0, int(1), p("y^2")).unwrap();
    assert_eq!(
        s.inverse(),
        ElementaryAuto::new(0, int(1), p("-y^2")).unwrap()
    );

    let s = ElementaryAuto::new(1, int(3), p("x")).unwrap();
    let inv = s.inverse();
    assert_eq!(inv.alpha(), &frac(1, 3));
    assert_eq!(inv.param(), &p("x").scale(&frac(-1, 3)));
    assert!(s
        .to_endomorphism()
        .compose(&inv.to_endomorphism())
        .is_identity());
    assert!(inv
        .to_endomorphism()
        .compose(&s.to_endomorphism())
        .is_identity());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for len in 0..=5 {
        let w = random_tame_word(&mut rng, 3, len, &SamplerConfig::default());
        assert!(w.inverse().concat(&w).evaluate().is_identity());
    }
}

#[test]
fn transpositions() {
    let t12 = transposition::<NCPoly>(3, 0, 1).unwrap().evaluate();
    assert_eq!(t12.apply(&p("x")), p("y"));
    assert_eq!(t12.apply(&p("y")), p("x"));
    assert_eq!(t12.apply(&p("z")), p("z"));
    let t13 = transposition::<NCPoly>(3, 0, 2).unwrap().evaluate();
    assert!(t13.compose(&t13).is_identity());
    assert!(transposition::<NCPoly>(3, 1, 1).is_err());
}

#[test]
fn relation_instances() {
    let same = Relation::SameIndex {
        index: 0,
        alpha: int(2),
        f: p("y"),
        beta: int(3),
        g: p("z"),
    };
    assert!(relation_check(&same).unwrap());

    let conj = Relation::Conjugation {
        i: 0,
        alpha: int(1),
        f: p("z^2"),
        j: 1,
        beta: int(1),
        g: p("z"),
    };
    assert!(relation_check(&conj).unwrap());

    let swap = Relation::Transposition {
        k: 0,
        s: 2,
        index: 0,
        alpha: int(-2),
        f: p("y z + y^2"),
    };
    assert!(relation_check(&swap).unwrap());

    let violated = Relation::Conjugation {
        i: 0,
        alpha: int(1),
        f: p("y"),
        j: 1,
        beta: int(1),
        g: p("z"),
    };
    assert!(matches!(
        relation_check(&violated),
        Err(Error::SideCondition(_))
    ));
}

#[test]
fn kernel_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = KernelSamplerConfig::free_algebra();
    assert!(sample_ker_tame(&mut rng, 0, &cfg).is_empty());
    for _ in 0..5 {
        let phi = sample_ker_tame(&mut rng, 2, &cfg).evaluate();
        for i in 0..3 {
            assert_eq!(
                pi_b(&phi.apply(&NCPoly::generator(3, i))).unwrap(),
                CommPoly::var(&ring_a(), i)
            );
        }
        let cert = decide_e2(&nu_matrix(&j2(&phi)).unwrap()).unwrap();
        assert!(cert.is_in());
        verify_certificate(&cert).unwrap();
    }
}

#[test]
fn anick_map() {
    let delta = anick();
    assert_eq!(delta.apply(&p("z")), p("z"));
    let images: Vec<_> = (0..3)
        .map(|i| pi_b(&delta.apply(&NCPoly::generator(3, i))).unwrap())
        .collect();
    assert_eq!(
        images,
        vec![
            a("x1 + x1 x3^2 - x2 x3^2"),
            a("x2 + x1 x3^2 - x2 x3^2"),
            a("x3")
        ]
    );
}

#[test]
fn determinants() {
    assert!(det2(&mat([["1", "0"], ["0", "1"]])).is_one());
    assert!(det2(&mat([["1 + u v", "v^2"], ["-u^2", "1 - u v"]])).is_one());
    assert_eq!(det2(&mat([["u", "0"], ["0", "1"]])), uv("u"));
}

#[test]
fn e2_decisions() {
    let id = decide_e2(&mat([["1", "0"], ["0", "1"]])).unwrap();
    assert!(id.is_in() && id.factors.is_empty());

    let built = [
        ElementaryFactor::new(Position::P12, uv("u^2 v")),
        ElementaryFactor::new(Position::P21, uv("3")),
        ElementaryFactor::new(Position::P12, uv("-v")),
    ]
    .iter()
    .fold(mat([["1", "0"], ["0", "1"]]), |m, f| m.mul(&f.matrix()));
    let cert = decide_e2(&built).unwrap();
    assert!(cert.is_in());
    assert_eq!(cert.product(), built);
    verify_certificate(&cert).unwrap();

    let cohn = decide_e2(&mat([["1 + u v", "v^2"], ["-u^2", "1 - u v"]])).unwrap();
    assert_eq!(cohn.verdict, Verdict::NotIn);
    assert!(cohn.witness.is_some());

    let singular = decide_e2(&mat([["u", "0"], ["0", "1"]])).unwrap();
    assert_eq!(singular.verdict, Verdict::NotIn);
    assert!(singular.reason.is_some());
}

#[test]
fn ge2f_decisions() {
    let swap = decide_ge2f(&mat([["0", "1"], ["1", "0"]])).unwrap();
    assert!(swap.is_in());
    assert_eq!(swap.scalar, Some(int(-1)));
    verify_certificate(&swap).unwrap();

    let cohn = decide_ge2f(&nu_matrix(&j2(&anick())).unwrap()).unwrap();
    assert_eq!(cohn.verdict, Verdict::NotIn);

    let m = mat([["5", "5 u v"], ["0", "1"]]);
    let cert = decide_ge2f(&m).unwrap();
    assert!(cert.is_in());
    assert_eq!(cert.product(), m);
}

#[test]
fn whitehead_factorizations() {
    let ring = ring_uv();
    let product = |alpha| {
        whitehead_factor(&ring, &alpha)
            .unwrap()
            .iter()
            .fold(mat([["1", "0"], ["0", "1"]]), |m, f| m.mul(&f.matrix()))
    };
    assert!(product(int(1)).is_identity());
    assert_eq!(product(int(2)), mat([["2", "0"], ["0", "1/2"]]));
    assert_eq!(product(int(-1)), mat([["-1", "0"], ["0", "-1"]]));
    assert!(whitehead_factor(&ring, &int(0)).is_err());
}

#[test]
fn normalized_certification() {
    let id = certify_normalized(&Endomorphism::identity(3), None).unwrap();
    assert_eq!(id.status, WildnessStatus::Inconclusive);

    let v = certify_normalized(&anick(), Some(&anick_normalizer())).unwrap();
    assert_eq!(v.status, WildnessStatus::CertifiedWild);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let phi = sample_ker_tame(&mut rng, 4, &KernelSamplerConfig::free_algebra()).evaluate();
    let v = certify_normalized(&phi, None).unwrap();
    assert_eq!(v.status, WildnessStatus::Inconclusive);
    verify_certificate(&v.certificate).unwrap();
}

#[test]
fn xy_linear_certification() {
    assert_eq!(
        certify_xy_linear(&anick()).unwrap().status,
        WildnessStatus::CertifiedWild
    );

    let swap = endo(["y", "x", "z"]);
    let v = certify_xy_linear(&swap).unwrap();
    assert_eq!(v.status, WildnessStatus::TameWithDecomposition);
    assert_eq!(v.decomposition.unwrap().evaluate(), swap);

    let tail = endo(["x + z x z - z^2 y + z^3", "y + x z^2 - z y z", "z"]);
    assert_eq!(
        certify_xy_linear(&tail).unwrap().status,
        WildnessStatus::CertifiedWild
    );
}
