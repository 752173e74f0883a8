use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbit_betti::poly::{interval_evaluate, parse_formula, parse_polynomial, BlockSpec, Interval, Monomial, Polynomial};
use orbit_betti::scalar::{rational_from_int as q, Rational};
use orbit_betti::symmetry::{check_symmetric, power_sum_rewrite, power_sum_vector};

fn random_poly(rng: &mut ChaCha8Rng, k: usize, max_deg: u32, terms: usize) -> Polynomial {
    let terms = (0..terms).map(|_| {
        let mut e = vec![0u32; k];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.gen_range(0..k)] += 1;
        }
        let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
        (Monomial(e), c)
    });
    Polynomial::from_terms(k, terms)
}

fn random_atom_text(rng: &mut ChaCha8Rng, k: usize) -> String {
    let p = random_poly(rng, k, 3, 3);
    let p = if p.is_zero() { Polynomial::var(k, 0) } else { p };
    let rel = ["<=", ">=", "="][rng.gen_range(0..3)];
    format!("{p} {rel} 0")
}

fn random_formula_text(rng: &mut ChaCha8Rng, k: usize, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom_text(rng, k);
    }
    let op = if rng.gen_bool(0.5) { "and" } else { "or" };
    format!("({} {op} {})", random_formula_text(rng, k, depth - 1), random_formula_text(rng, k, depth - 1))
}

#[test]
fn formula_display_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..80 {
        let k = rng.gen_range(1..=4);
        let text = random_formula_text(&mut rng, k, 3);
        let f = parse_formula(&text, k).unwrap_or_else(|e| panic!("#{i} {text}: {e}"));
        let printed = f.to_string();
        let again = parse_formula(&printed, k).unwrap_or_else(|e| panic!("#{i} reparse {printed}: {e}"));
        assert_eq!(f, again, "#{i}: {text} -> {printed}");
        assert!(again.check_invariants());
    }
}

#[test]
fn polynomial_display_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let k = rng.gen_range(1..=5);
        let p = random_poly(&mut rng, k, 4, 5);
        let back = parse_polynomial(&p.to_string(), k).unwrap();
        assert_eq!(p, back, "{p}");
    }
}

fn naive_eval(p: &Polynomial, x: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, &e) in x.iter().zip(m.exponents()) {
            for _ in 0..e {
                t *= v;
            }
        }
        acc += t;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_evaluation_matches_naive(seed in any::<u64>(), k in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, k, 5, 6);
        let x: Vec<Rational> = (0..k).map(|_| Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=7).into())).collect();
        prop_assert_eq!(p.evaluate(&x).unwrap(), naive_eval(&p, &x));
    }

    #[test]
    fn arithmetic_is_a_ring_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 3;
        let a = random_poly(&mut rng, k, 3, 4);
        let b = random_poly(&mut rng, k, 3, 4);
        let x: Vec<Rational> = (0..k).map(|_| q(rng.gen_range(-5..=5))).collect();
        let (va, vb) = (a.evaluate(&x).unwrap(), b.evaluate(&x).unwrap());
        prop_assert_eq!((&a * &b).evaluate(&x).unwrap(), &va * &vb);
        prop_assert_eq!((a.clone() + b.clone()).evaluate(&x).unwrap(), &va + &vb);
        prop_assert_eq!((a - b).evaluate(&x).unwrap(), va - vb);
    }
}

#[test]
fn interval_extension_encloses_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..1000 {
        let k = rng.gen_range(1..=4);
        let p = random_poly(&mut rng, k, 5, 5);
        let bx: Vec<Interval<f64>> = (0..k)
            .map(|_| {
                let a: f64 = rng.gen_range(-2.0..2.0);
                Interval::new(a, a + rng.gen_range(0.0..1.5))
            })
            .collect();
        let enc = interval_evaluate(&p, &bx).unwrap();
        let pf = p.to_f64();
        for _ in 0..20 {
            let x: Vec<f64> = bx.iter().map(|i| rng.gen_range(i.lo()..=i.hi())).collect();
            let v = pf.evaluate(&x).unwrap();
            let slack = 1e-9 * (1.0 + v.abs());
            assert!(enc.lo() - slack <= v && v <= enc.hi() + slack, "case {case}: {v} outside {enc:?} for {p}");
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut v = p.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}

fn symmetrize(p: &Polynomial, perms: &[Vec<usize>]) -> Polynomial {
    perms.iter().fold(Polynomial::zero(p.var_count()), |acc, s| acc + p.permute_vars(s))
}

#[test]
fn symmetry_check_matches_full_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 1..=6 {
        let perms = permutations(k);
        let blocks = BlockSpec::single(k, 4).unwrap();
        for trial in 0..12 {
            let base = random_poly(&mut rng, k, 3, 2);
            let p = if trial % 2 == 0 { symmetrize(&base, &perms) } else { base };
            let orbit_fixed = perms.iter().all(|s| p.permute_vars(s) == p);
            assert_eq!(check_symmetric(&p, &blocks).unwrap(), orbit_fixed, "k={k}: {p}");
        }
    }
}

#[test]
fn block_symmetry_only_permutes_within_blocks() {
    let blocks = BlockSpec::new(vec![2, 1], vec![2, 2]).unwrap();
    let p = parse_polynomial("x1 + x2 + 2*x3", 3).unwrap();
    assert!(check_symmetric(&p, &blocks).unwrap());
    let p = parse_polynomial("x1 + x3", 3).unwrap();
    assert!(!check_symmetric(&p, &blocks).unwrap());
}

#[test]
fn rewrite_agrees_with_power_sum_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for k in 2..=4 {
        let perms = permutations(k);
        let blocks = BlockSpec::single(k, 3).unwrap();
        for _ in 0..10 {
            let p = symmetrize(&random_poly(&mut rng, k, 3, 2), &perms);
            let form = power_sum_rewrite(&p, &blocks).unwrap();
            assert_eq!(form.expand(&blocks).unwrap(), p);
            for _ in 0..10 {
                let x: Vec<Rational> = (0..k).map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=3).into())).collect();
                let ys = power_sum_vector(&blocks, &x).unwrap();
                assert_eq!(form.poly.evaluate(&ys).unwrap(), p.evaluate(&x).unwrap());
            }
        }
    }
}

#[test]
fn constants_and_units() {
    let one = Polynomial::<Rational>::one(2);
    assert!(one.is_constant());
    assert_eq!(one.constant_term(), Rational::one());
}
