use proptest::prelude::*;
use qpoch::cli_app::{Approximation, OutputRecord};
use qpoch::exact_coeffs::{a_exact, a_numeric, power_sums, wave_exact, CoeffRequest};
use qpoch::exact_field::{gcd, CyclotomicElement};
use qpoch::hp_analysis::{BigComplex, ComplexSeries};
use qpoch::number_tables::bernoulli_poly;
use rug::{Integer, Rational};

fn unit(k: u32, pick: usize) -> i64 {
    let units = CyclotomicElement::galois_units(k);
    units[pick % units.len()]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn galois_symmetry(k in 1u32..=8, pick in 0usize..8, n in 1u32..=16, dm in 0i64..6) {
        let h = unit(k, pick);
        let s = (n / k) as i64;
        let m = dm - s;
        let base = a_exact(&CoeffRequest::new(m, k, 1 % k as i64, n)).unwrap();
        let at_h = a_exact(&CoeffRequest::new(m, k, h, n)).unwrap();
        prop_assert_eq!(at_h.clone(), base.galois(h));
        // the conjugate root gives the conjugate coefficient
        let at_minus = a_exact(&CoeffRequest::new(m, k, (-h).rem_euclid(k as i64), n)).unwrap();
        prop_assert_eq!(at_minus, at_h.conj());
    }

    #[test]
    fn power_sums_add_up(k in 1u32..=7, n in 1u32..=30, deg in 1usize..=6) {
        let ps = power_sums(k, None, n, deg);
        let mut total = Integer::new();
        for r in 0..k as usize {
            total += ps.get(deg, r);
        }
        // sum_{j <= n} j^deg from Bernoulli polynomials
        let d = deg as u32 + 1;
        let want = (bernoulli_poly(d, &Rational::from(n + 1)) - bernoulli_poly(d, &Rational::new())) / Rational::from(d);
        prop_assert_eq!(Rational::from(total), want);
    }

    #[test]
    fn wave_finite_differences(big_n in 1u32..=10, kk in 1u32..=10, start in 0i64..10, offset in -20i64..20) {
        let k = 1 + (kk - 1) % big_n;
        let deg = (big_n / k) as i64;
        let base = offset * k as i64 + start % k as i64;
        let mut diff: Vec<Rational> = (0..=deg).map(|j| wave_exact(k, big_n, base + j * k as i64).unwrap()).collect();
        for _ in 0..deg {
            diff = diff.windows(2).map(|w| Rational::from(&w[1] - &w[0])).collect();
        }
        prop_assert_eq!(diff[0].clone(), Rational::new());
    }

    #[test]
    fn numeric_path_matches_exact(k in 1u32..=5, pick in 0usize..4, n in 1u32..=40, dm in 0i64..4) {
        let h = unit(k, pick);
        let req = CoeffRequest::new(dm - (n / k) as i64, k, h, n);
        let exact = a_exact(&req).unwrap().embed(1, 200);
        let approx = a_numeric(&req, 40).unwrap();
        let scale = exact.abs();
        let tol = if scale.is_zero() { rug::Float::with_val(200, 1e-35) } else { scale * 1e-30 };
        prop_assert!(approx.dist(&exact) <= tol);
    }

    #[test]
    fn series_round_trips(re in -0.9f64..0.9, im in -0.9f64..0.9, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, a in 1i64..5) {
        let prec = 200;
        let center = BigComplex::zero(prec);
        let s = ComplexSeries::new(center, vec![
            BigComplex::from_parts_f64(1.0 + re, im, prec),
            BigComplex::from_parts_f64(c1, -c2, prec),
            BigComplex::from_parts_f64(c2, c1, prec),
            BigComplex::from_parts_f64(0.5, 0.25, prec),
        ]);
        let back = s.log().unwrap().exp();
        prop_assert!(back.max_dist(&s) < 1e-50);
        let tau = Rational::from((1, a));
        let inv = Rational::from(a);
        let round = s.pow_rational(&tau).unwrap().pow_rational(&inv).unwrap();
        prop_assert!(round.max_dist(&s) < 1e-50);
    }

    #[test]
    fn output_record_json_round_trip(num in -1000i64..1000, den in 1i64..1000, r in 1usize..8) {
        let q = Rational::from((num, den));
        let mut rec = OutputRecord { command: "exact".into(), ..Default::default() };
        rec.request.insert("k".into(), "1".into());
        rec.exact = Some(q.to_string());
        rec.exact_coords = Some(vec![q.to_string()]);
        rec.approximations.push(Approximation { r, value: "1.5e3".into(), stable_digits: 50, abs_error: None, rel_error: Some("1e-5".into()) });
        let json = serde_json::to_string(&rec).unwrap();
        let back: OutputRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &rec);
        let parsed: Rational = back.exact.unwrap().parse().unwrap();
        prop_assert_eq!(parsed, q);
    }
}

#[test]
fn gcd_of_units_is_one() {
    for k in 1..=12u32 {
        for h in CyclotomicElement::galois_units(k) {
            assert_eq!(gcd(h.rem_euclid(k as i64) as u64, k as u64), 1);
        }
    }
}
