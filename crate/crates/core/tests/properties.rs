use std::cmp::Ordering;

use cantorparam_core::coding::{self, compare_lex, eval_coding, ternary_expand};
use cantorparam_core::gaps::level_intervals;
use cantorparam_core::param::{is_member, lambda_of, phi_x, window};
use cantorparam_core::{Coding, Digit, Expansion, Rational, Word};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational(max: i64) -> impl Strategy<Value = Rational> {
    (-max..=max, 1..=max).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn positive(max: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=max).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn digits(min: usize, max: usize) -> impl Strategy<Value = Vec<Digit>> {
    prop::collection::vec(prop_oneof![Just(Digit::Zero), Just(Digit::Two)], min..=max)
}

/// Raw `(preperiod, period)` pairs; the sequence they describe is never `0^∞`.
fn raw_coding() -> impl Strategy<Value = (Vec<Digit>, Vec<Digit>)> {
    (digits(0, 8), digits(1, 6)).prop_filter("nonzero sequence", |(u, v)| {
        u.contains(&Digit::Two) || v.contains(&Digit::Two)
    })
}

fn build(raw: &(Vec<Digit>, Vec<Digit>)) -> Coding {
    Coding::new(
        Word::from_digits(raw.0.clone()),
        Word::from_digits(raw.1.clone()),
    )
    .unwrap()
}

fn raw_digit(raw: &(Vec<Digit>, Vec<Digit>), i: usize) -> Digit {
    let (u, v) = raw;
    if i < u.len() {
        u[i]
    } else {
        v[(i - u.len()) % v.len()]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms(a in rational(60), b in rational(60), c in rational(60)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
        } else {
            prop_assert!(a.checked_div(&b).is_err());
        }
        let diff = &a - &b;
        let sign = match a.cmp(&b) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        prop_assert_eq!(sign, diff.signum());
        // canonical form
        let g = num_integer::Integer::gcd(diff.numer(), diff.denom());
        prop_assert_eq!(g, BigInt::from(1));
        prop_assert!(diff.denom() > &BigInt::from(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coding_round_trip(raw in raw_coding()) {
        let c = build(&raw);
        for i in 0..64 {
            prop_assert_eq!(c.digit(i), raw_digit(&raw, i));
        }
        let back = ternary_expand(&eval_coding(&c)).unwrap();
        prop_assert_eq!(back, Expansion::Accepted(c.clone()));
        prop_assert_eq!(coding::canonicalize(c.clone()), c);
    }

    #[test]
    fn lexicographic_order_is_value_order(a in raw_coding(), b in raw_coding()) {
        let (a, b) = (build(&a), build(&b));
        prop_assert_eq!(compare_lex(&a, &b), eval_coding(&a).cmp(&eval_coding(&b)));
        prop_assert_eq!(compare_lex(&a, &b) == Ordering::Equal, a == b);
    }

    #[test]
    fn bijection_round_trip(x in positive(40), raw in raw_coding()) {
        let c = build(&raw);
        let lambda = lambda_of(&x, &c).unwrap();
        prop_assert_eq!(phi_x(&x, &lambda).unwrap(), Expansion::Accepted(c));
    }

    #[test]
    fn coding_map_is_strictly_decreasing(x in positive(40), a in raw_coding(), b in raw_coding()) {
        let (a, b) = (build(&a), build(&b));
        prop_assume!(a != b);
        let (la, lb) = (lambda_of(&x, &a).unwrap(), lambda_of(&x, &b).unwrap());
        let (small, large) = if la < lb { (la, lb) } else { (lb, la) };
        prop_assert!(small < large);
        let cs = phi_x(&x, &small).unwrap().coding().cloned().unwrap();
        let cl = phi_x(&x, &large).unwrap().coding().cloned().unwrap();
        prop_assert_eq!(compare_lex(&cs, &cl), Ordering::Greater);
    }

    #[test]
    fn windows_shrink_and_bracket(x in positive(30), raw in raw_coding()) {
        let c = build(&raw);
        let target = lambda_of(&x, &c).unwrap();
        let mut last_width: Option<Rational> = None;
        for n in 1..=30 {
            let prefix = c.prefix(n);
            if prefix.is_all_zero() {
                continue;
            }
            let w = window(&x, &prefix).unwrap();
            prop_assert!(w.beta.is_positive() && w.beta < w.gamma);
            prop_assert!(w.contains(&target));
            let width = w.width();
            if let Some(prev) = &last_width {
                prop_assert!(width < *prev);
            }
            last_width = Some(width);
        }
    }
}

/// Every word over `{0, 2}` of length `depth` whose closed cylinder
/// `[S/3^L, (S+1)/3^L]` contains `y`.
fn brute_force_survivors(y: &Rational, depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack = vec![(Word::new(), BigInt::from(0), BigInt::from(1))];
    while let Some((w, s, scale)) = stack.pop() {
        let lo = Rational::ratio(s.clone(), scale.clone());
        let hi = Rational::ratio(&s + 1, scale.clone());
        if *y < lo || *y > hi {
            continue;
        }
        if w.len() == depth {
            out.push(w);
            continue;
        }
        for d in [Digit::Zero, Digit::Two] {
            let child = &s * 3 + d.value();
            stack.push((w.with(d), child, &scale * 3));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rejection_is_sound(num in 0i64..=997, den in 1i64..=997) {
        prop_assume!(num <= den);
        let y = Rational::ratio(num, den);
        let survivors = brute_force_survivors(&y, 40);
        match ternary_expand(&y).unwrap() {
            Expansion::Rejected(wit) => {
                prop_assert!(wit.residue > Rational::ratio(1, 3) && wit.residue < Rational::ratio(2, 3));
                if wit.index <= 40 {
                    prop_assert!(brute_force_survivors(&y, wit.index).is_empty());
                    prop_assert!(!brute_force_survivors(&y, wit.index - 1).is_empty());
                } else {
                    prop_assert!(!survivors.is_empty());
                }
            }
            Expansion::Accepted(c) => {
                prop_assert!(survivors.contains(&c.prefix(40)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gap_tree_invariants(x in positive(12), extra in positive(6)) {
        let min = &x * &Rational::from(2);
        let q = &min + &extra;
        let mut previous = None;
        for n in 0..=6 {
            let rep = level_intervals(&x, &q, n).unwrap();
            prop_assert_eq!(&rep.kept[0].lo, &min);
            for pair in rep.kept.windows(2) {
                prop_assert!(pair[0].hi < pair[1].lo);
            }
            for k in &rep.kept {
                prop_assert!(k.lo <= k.hi);
                prop_assert!(is_member(&x, &k.lo).unwrap());
                if !k.clipped {
                    prop_assert!(is_member(&x, &k.hi).unwrap());
                }
            }
            for g in &rep.removed {
                prop_assert!(g.lo < g.hi);
                prop_assert!(rep.kept.iter().all(|k| k.hi <= g.lo || k.lo >= g.hi));
            }
            if let Some(prev) = &previous {
                let prev: &cantorparam_core::GapReport = prev;
                for k in &rep.kept {
                    prop_assert!(prev.kept.iter().any(|p| p.lo <= k.lo && k.hi <= p.hi));
                }
            }
            previous = Some(rep);
        }
    }
}

#[test]
fn null_measure_rate() {
    let x = Rational::ratio(1, 2);
    let q = Rational::from(2);
    let bound_ratio = Rational::ratio(2, 3);
    let mut bound = Rational::ratio(9, 4);
    let mut last: Option<cantorparam_core::LengthSum> = None;
    for n in 0..=16 {
        let rep = level_intervals(&x, &q, n).unwrap();
        let len = cantorparam_core::length_sum(&rep);
        assert_ne!(len.cmp_rational(&bound), Ordering::Greater, "level {n}");
        if let Some(prev) = &last {
            assert_eq!(len.cmp_sum(prev), Ordering::Less, "level {n}");
        }
        assert_eq!(rep.kept[0].lo, Rational::one());
        last = Some(len);
        bound = &bound * &bound_ratio;
    }
}
