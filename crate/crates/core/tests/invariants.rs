use proptest::prelude::*;

use pfq::identities::{th1_addition_rhs, th3_kummer_rhs, AdditionInput};
use pfq::numerics::{gamma, pochhammer, CompensatedAccumulator};
use pfq::{eval_series, ComplexEP, DoubleDouble, HyperSpec, TruncationPolicy};

fn rel(a: ComplexEP, b: ComplexEP) -> f64 {
    (a - b).abs_f64() / a.abs_f64().max(b.abs_f64()).max(1e-300)
}

// Sum of |terms| over |sum|: how much the series cancels.
fn cancellation_factor(spec: &HyperSpec, terms: usize) -> f64 {
    let mut t = ComplexEP::ONE;
    let mut total = 1.0;
    for i in 0..terms {
        let k = i as f64;
        for &a in spec.numerator() {
            t *= a.add_f64(k);
        }
        for &b in spec.denominator() {
            t = t / b.add_f64(k);
        }
        t *= spec.argument().scale_f64(1.0 / (k + 1.0));
        total += t.abs_f64();
    }
    total
}

fn param() -> impl Strategy<Value = ComplexEP> {
    (-2.0f64..3.0, -1.0f64..1.0).prop_map(|(re, im)| ComplexEP::from_f64(re, im))
}

fn denominator() -> impl Strategy<Value = ComplexEP> {
    param().prop_filter("near a pole", |b| b.distance_to_nonpositive_integer() >= 0.1)
}

fn point(radius: f64) -> impl Strategy<Value = ComplexEP> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(move |(u, t)| ComplexEP::from_f64(radius * u.sqrt() * t.cos(), radius * u.sqrt() * t.sin()))
}

fn entire_spec() -> impl Strategy<Value = HyperSpec> {
    (1usize..4)
        .prop_flat_map(|q| (prop::collection::vec(param(), 0..=q), prop::collection::vec(denominator(), q), point(1.5)))
        .prop_map(|(num, den, x)| HyperSpec::new(num, den, x).unwrap())
}

fn gauss_spec() -> impl Strategy<Value = HyperSpec> {
    (1usize..3)
        .prop_flat_map(|q| (prop::collection::vec(param(), q + 1), prop::collection::vec(denominator(), q), point(0.9)))
        .prop_map(|(num, den, x)| HyperSpec::new(num, den, x).unwrap())
}

fn any_spec() -> impl Strategy<Value = HyperSpec> {
    prop_oneof![entire_spec(), gauss_spec()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pochhammer_recurrence(a in param(), n in 0usize..170) {
        let next = pochhammer(a, n + 1).unwrap();
        let cur = pochhammer(a, n).unwrap();
        prop_assert!(rel(next, cur * a.add_f64(n as f64)) <= 1e-28);
    }

    #[test]
    fn pochhammer_split(a in param(), m in 0usize..85, n in 0usize..85) {
        let whole = pochhammer(a, m + n).unwrap();
        let split = pochhammer(a, m).unwrap() * pochhammer(a.add_f64(m as f64), n).unwrap();
        prop_assert!(rel(whole, split) <= 1e-27);
    }

    #[test]
    fn pochhammer_conjugation(a in param(), n in 0usize..150) {
        prop_assert_eq!(pochhammer(a, n).unwrap().conj(), pochhammer(a.conj(), n).unwrap());
    }

    #[test]
    fn gamma_recurrence(z in point(39.0).prop_filter("near a pole", |z| z.distance_to_nonpositive_integer() >= 0.1)) {
        let r = rel(gamma(z.add_f64(1.0)).unwrap(), z * gamma(z).unwrap());
        prop_assert!(r <= 1e-24, "z = {z}, rel {r:.3e}");
    }

    // dyadic terms sum exactly in double-double, so the bound is checked
    // against the exact integer total
    #[test]
    fn accumulator_error_bound(ks in prop::collection::vec(-(1i64 << 40)..(1i64 << 40), 1..2000)) {
        let scale = 2f64.powi(-30);
        let mut acc = CompensatedAccumulator::new();
        for &k in &ks {
            acc.add(ComplexEP::from_f64(k as f64 * scale, 0.0));
        }
        let exact: i128 = ks.iter().map(|&k| k as i128).sum();
        let exact = DoubleDouble::from_f64((exact >> 30) as f64) + DoubleDouble::from_f64((exact & ((1 << 30) - 1)) as f64 * scale);
        let m = ks.iter().map(|k| k.unsigned_abs()).max().unwrap() as f64 * scale;
        let bound = 4.0 * DoubleDouble::EPSILON * m * ks.len() as f64;
        prop_assert!((acc.value().re - exact).abs().hi <= bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn permutation_symmetry(spec in any_spec(), shift in 0usize..4) {
        let base = eval_series(&spec, &TruncationPolicy::default()).unwrap();
        let mut num = spec.numerator().to_vec();
        let mut den = spec.denominator().to_vec();
        let len = num.len().max(1);
        num.rotate_left(shift % len);
        den.reverse();
        let permuted = eval_series(&HyperSpec::new(num, den, spec.argument()).unwrap(), &TruncationPolicy::default()).unwrap();
        let r = rel(base.value, permuted.value);
        // reordering the ratio products changes the roundoff, which heavy
        // cancellation amplifies
        let kappa = cancellation_factor(&spec, base.terms_used) / base.value.abs_f64();
        let bound = if kappa <= 1e4 { 1e-26 } else { 1e-30 * kappa };
        prop_assert!(r <= bound, "rel {r:.3e}, cancellation {kappa:.3e}");
    }

    #[test]
    fn conjugation_symmetry(spec in any_spec()) {
        let policy = TruncationPolicy::default();
        let base = eval_series(&spec, &policy).unwrap().value;
        let conj = eval_series(&spec.conj(), &policy).unwrap().value;
        prop_assert!(rel(base.conj(), conj) <= 1e-28);
    }

    #[test]
    fn cancellation(spec in any_spec(), c in denominator()) {
        let policy = TruncationPolicy::default();
        let base = eval_series(&spec, &policy).unwrap().value;
        let mut num = spec.numerator().to_vec();
        let mut den = spec.denominator().to_vec();
        num.push(c);
        den.push(c);
        let padded = eval_series(&HyperSpec::new(num, den, spec.argument()).unwrap(), &policy).unwrap().value;
        prop_assert!(rel(base, padded) <= 1e-24);
    }

    #[test]
    fn derivative_of_confluent(a in param(), b in denominator(), x in point(3.0)) {
        let policy = TruncationPolicy::default();
        let f = |z: ComplexEP| eval_series(&HyperSpec::new(vec![a], vec![b], z).unwrap(), &policy).unwrap().value;
        let h = 1e-8;
        let fd = (f(x.add_f64(h)) - f(x.add_f64(-h))).scale_f64(0.5 / h);
        let shifted = HyperSpec::new(vec![a.add_f64(1.0)], vec![b.add_f64(1.0)], x).unwrap();
        let exact = a / b * eval_series(&shifted, &policy).unwrap().value;
        prop_assert!(rel(fd, exact) <= 1e-6, "fd {fd} exact {exact}");
    }

    #[test]
    fn tighter_tolerance_never_loosens_the_estimate(spec in any_spec(), k in 12i32..28) {
        let loose = TruncationPolicy::default().with_tol(10f64.powi(-k));
        let tight = loose.with_tol(loose.tol / 10.0);
        let a = eval_series(&spec, &loose).unwrap();
        let b = eval_series(&spec, &tight).unwrap();
        prop_assert!(b.abs_error_estimate <= a.abs_error_estimate, "{} > {}", b.abs_error_estimate, a.abs_error_estimate);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // the multi-sums are not manifestly symmetric in the paired slots; they
    // agree because both orderings converge to the same function value
    #[test]
    fn paired_slot_permutation(
        a in prop::collection::vec(param(), 3),
        b in prop::collection::vec(denominator(), 3),
        x in point(1.5),
        y in point(1.5),
    ) {
        let policy = TruncationPolicy::default();
        let swap = |v: &[ComplexEP]| vec![v[1], v[0], v[2]];
        let t1 = |num: Vec<ComplexEP>, den: Vec<ComplexEP>| {
            th1_addition_rhs(&AdditionInput::new(num[..2].to_vec(), den[..2].to_vec(), x, y).unwrap(), &policy).unwrap().value
        };
        prop_assert!(rel(t1(a.clone(), b.clone()), t1(swap(&a), swap(&b))) <= 1e-10);
        let t3 = |num: Vec<ComplexEP>, den: Vec<ComplexEP>| {
            th3_kummer_rhs(&HyperSpec::new(num, den, x).unwrap(), &policy).unwrap().value
        };
        prop_assert!(rel(t3(a.clone(), b.clone()), t3(swap(&a), swap(&b))) <= 1e-10);
    }
}
