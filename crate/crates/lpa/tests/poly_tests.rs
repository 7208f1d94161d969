//! Polynomial arithmetic pins and properties. Factorization over the tiny
//! prime fields is cross-checked against an exhaustive trial-division
//! oracle that knows nothing about the production algorithm.

use lpa::poly::{
    factor_irreducible, is_irreducible, laurent_canonical, parse_poly, poly_gcd, poly_lcm,
    sample_irreducibles, squarefree_part,
};
use lpa::{Field, Poly};
use proptest::prelude::*;

fn q(text: &str) -> Poly {
    parse_poly(Field::Q, text).expect("test polynomial parses")
}

fn fp(p: u64, text: &str) -> Poly {
    parse_poly(Field::Fp(p), text).expect("test polynomial parses")
}

#[test]
fn parse_and_print_pins() {
    assert_eq!(q("x^2 - 2x + 1").to_string(), "x^2 - 2*x + 1");
    assert_eq!(q("(x-1)(x+1)").to_string(), "x^2 - 1");
    assert_eq!(q("1/2 x + 1/3").to_string(), "1/2*x + 1/3");
    assert_eq!(q("-x").to_string(), "-x");
    assert_eq!(q("0").to_string(), "0");
    assert_eq!(fp(2, "(x+1)^2").to_string(), "x^2 + 1");
    assert_eq!(fp(5, "3x + 7").to_string(), "3*x + 2");
}

#[test]
fn display_reparses() {
    let samples = [
        q("x^3 - 2x^2 + x - 5"),
        q("-3/4 x^2 + 2"),
        q("x"),
        q("7"),
        fp(7, "x^4 + 3x^2 + 6"),
        fp(2, "x^5 + x + 1"),
    ];
    for p in samples {
        let text = p.to_string();
        let back = parse_poly(p.field(), &text).expect("display output parses");
        assert_eq!(back, p, "display `{text}` changed under round-trip");
    }
}

#[test]
fn division_pins() {
    let (quot, rem) = q("x^3 - 1").divmod(&q("x - 1")).unwrap();
    assert_eq!(quot, q("x^2 + x + 1"));
    assert!(rem.is_zero());
    let (_, rem) = q("x^3 + 1").divmod(&q("x - 1")).unwrap();
    assert_eq!(rem, q("2"));
    assert!(q("x - 1").divides(&q("x^4 - 1")));
    assert!(!q("x - 2").divides(&q("x^4 - 1")));
}

#[test]
fn gcd_lcm_pins() {
    let g = poly_gcd(&q("x^2 - 1"), &q("x^2 - 2x + 1")).unwrap();
    assert_eq!(g, q("x - 1"));
    let l = poly_lcm(&q("x^2 - 1"), &q("x^2 - 2x + 1")).unwrap();
    assert_eq!(l, q("(x-1)^2 (x+1)"));
    let coprime = poly_gcd(&q("x - 2"), &q("x + 2")).unwrap();
    assert!(coprime.is_one());
    let g2 = poly_gcd(&fp(2, "x^2 + 1"), &fp(2, "x + 1")).unwrap();
    assert_eq!(g2, fp(2, "x + 1"));
}

#[test]
fn squarefree_pins() {
    assert_eq!(
        squarefree_part(&q("(x-1)^3 (x+2)")).unwrap(),
        q("(x-1)(x+2)")
    );
    assert_eq!(squarefree_part(&q("x^2 - 1")).unwrap(), q("x^2 - 1"));
    assert_eq!(squarefree_part(&fp(2, "(x+1)^2")).unwrap(), fp(2, "x + 1"));
    assert_eq!(
        squarefree_part(&fp(3, "(x^2+1)^3")).unwrap(),
        fp(3, "x^2 + 1")
    );
}

#[test]
fn irreducibility_pins() {
    assert!(is_irreducible(&q("x^2 + 1")).unwrap());
    assert!(is_irreducible(&q("x - 5")).unwrap());
    assert!(!is_irreducible(&q("x^2 - 1")).unwrap());
    assert!(!is_irreducible(&q("x^2 - 2x + 1")).unwrap());
    assert!(is_irreducible(&q("x^3 - 2")).unwrap());
    assert!(is_irreducible(&fp(2, "x^2 + x + 1")).unwrap());
    assert!(!is_irreducible(&fp(2, "x^2 + 1")).unwrap());
    assert!(is_irreducible(&fp(5, "x^2 + 2")).unwrap());
}

#[test]
fn factorization_pins() {
    let f = factor_irreducible(&q("(x-1)^2 (x^2+1)")).unwrap();
    assert_eq!(f, vec![(q("x - 1"), 2), (q("x^2 + 1"), 1)]);
    let f2 = factor_irreducible(&fp(2, "x^4 + x^2")).unwrap();
    assert_eq!(f2, vec![(fp(2, "x"), 2), (fp(2, "x + 1"), 2)]);
}

#[test]
fn laurent_canonical_pins() {
    assert_eq!(laurent_canonical(&q("x^3 - x^2")).unwrap(), q("x - 1"));
    assert_eq!(laurent_canonical(&q("2x^2 - 2")).unwrap(), q("x^2 - 1"));
    assert_eq!(laurent_canonical(&q("5x^4")).unwrap(), q("1"));
    assert!(laurent_canonical(&q("0")).is_err());
}

#[test]
fn irreducible_samples_are_irreducible() {
    for field in [Field::Q, Field::Fp(2), Field::Fp(7)] {
        let samples = sample_irreducibles(field, 3).unwrap();
        assert!(!samples.is_empty());
        for p in samples {
            assert!(p.is_monic());
            assert!(!p.constant_term().is_zero());
            assert!(is_irreducible(&p).unwrap(), "{p} over {field}");
        }
    }
}

/// Exhaustive trial division over F_p for small degrees; independent of the
/// production factorizer.
fn brute_force_irreducible(f: &Poly) -> bool {
    let p = match f.field() {
        Field::Fp(p) => p,
        Field::Q => unreachable!("brute force is for prime fields"),
    };
    let d = f.degree().unwrap_or(0);
    if d == 0 {
        return false;
    }
    for dd in 1..=(d / 2) {
        let count = (p as u128).pow(dd as u32);
        for lead in 1..p {
            for combo in 0..count {
                let mut coeffs = vec![0i64; dd + 1];
                let mut idx = combo;
                for c in coeffs.iter_mut().take(dd) {
                    *c = (idx % p as u128) as i64;
                    idx /= p as u128;
                }
                coeffs[dd] = lead as i64;
                let g = Poly::from_i64s(f.field(), &coeffs);
                if g.divides(f) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn factorization_matches_brute_force_on_tiny_fields() {
    for p in [2u64, 3, 5] {
        let field = Field::Fp(p);
        let max_degree = if p == 5 { 3 } else { 4 };
        for degree in 1..=max_degree {
            let mut coeffs = vec![0i64; degree + 1];
            coeffs[degree] = 1;
            loop {
                let f = Poly::from_i64s(field, &coeffs);
                if f.degree() == Some(degree) {
                    let brute = brute_force_irreducible(&f);
                    assert_eq!(
                        is_irreducible(&f).unwrap(),
                        brute,
                        "irreducibility of {f} over f{p}"
                    );
                    let factors = factor_irreducible(&f).unwrap();
                    let mut rebuilt = Poly::one(field);
                    for (g, m) in &factors {
                        assert!(g.is_monic());
                        assert!(brute_force_irreducible(g), "{g} over f{p}");
                        rebuilt = rebuilt.mul(&g.pow(*m));
                    }
                    assert_eq!(rebuilt, f.monic());
                }
                let mut k = 0;
                loop {
                    coeffs[k] += 1;
                    if (coeffs[k] as u64) < p {
                        break;
                    }
                    coeffs[k] = 0;
                    k += 1;
                    if k >= degree {
                        break;
                    }
                }
                if coeffs[..degree].iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
}

fn arb_poly(field: Field, max_degree: usize) -> impl Strategy<Value = Poly> {
    let coeff = match field {
        Field::Q => (-4i64..=4).boxed(),
        Field::Fp(p) => (0i64..p as i64).boxed(),
    };
    proptest::collection::vec(coeff, 1..=max_degree + 1)
        .prop_map(move |cs| Poly::from_i64s(field, &cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gcd_times_lcm_is_the_monic_product(
        a in arb_poly(Field::Q, 4),
        b in arb_poly(Field::Q, 4),
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = poly_gcd(&a, &b).unwrap();
        let l = poly_lcm(&a, &b).unwrap();
        prop_assert_eq!(g.mul(&l), a.mul(&b).monic());
    }

    #[test]
    fn divmod_round_trips(
        a in arb_poly(Field::Fp(7), 5),
        b in arb_poly(Field::Fp(7), 3),
    ) {
        prop_assume!(!b.is_zero());
        let (quot, rem) = a.divmod(&b).unwrap();
        prop_assert_eq!(quot.mul(&b).add(&rem), a);
        if let (Some(rd), Some(bd)) = (rem.degree(), b.degree()) {
            prop_assert!(rd < bd);
        }
    }

    #[test]
    fn squarefree_part_divides_and_is_squarefree(
        a in arb_poly(Field::Q, 3),
        b in arb_poly(Field::Q, 2),
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let f = a.mul(&b.pow(2));
        let s = squarefree_part(&f).unwrap();
        prop_assert!(s.divides(&f));
        let g = poly_gcd(&s, &s.derivative()).unwrap();
        prop_assert!(g.is_one());
    }

    #[test]
    fn factors_rebuild_the_monic_input(f in arb_poly(Field::Fp(3), 5)) {
        prop_assume!(!f.is_zero() && f.degree().unwrap_or(0) >= 1);
        let factors = factor_irreducible(&f).unwrap();
        let mut rebuilt = Poly::one(f.field());
        for (g, m) in &factors {
            rebuilt = rebuilt.mul(&g.pow(*m));
        }
        prop_assert_eq!(rebuilt, f.monic());
    }
}
