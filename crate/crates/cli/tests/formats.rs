use gasket_cli::format::*;
use gasket_core::apriori::{AprioriConfig, Claim, VerificationReport};
use gasket_core::certify::DimensionCertificate;
use gasket_core::operator::AprioriConstants;
use proptest::prelude::*;
use rug::Float;

fn float_at(prec: u32, mant: f64, exp: i32) -> Float {
    // Fill all `prec` bits: mant + mant²/3 + … is not dyadic-short.
    let mut x = Float::with_val(prec, mant);
    x += Float::with_val(prec, mant * mant) / 3u32;
    x <<= exp;
    x
}

fn constants_strategy() -> impl Strategy<Value = AprioriConstants> {
    (0.1f64..5.0, 0.1f64..5.0, 1.0f64..100.0, 0.5f64..10.0, 0.0f64..1.0, 0.0f64..2.0, 0.0f64..10.0).prop_map(
        |(r_big, r_small, nu, w, c_a, d_plus, d_minus)| AprioriConstants { r_big, r_small, nu, w, c_a, d_plus, d_minus },
    )
}

prop_compose! {
    fn certificate()(
        prec in prop::sample::select(vec![53u32, 64, 80, 120, 161, 400]),
        mants in prop::collection::vec(-1.0f64..1.0, 12),
        exps in prop::collection::vec(-200i32..4, 12),
        ints in prop::collection::vec(0usize..10_000, 8),
        y_even in any::<bool>(),
        constants in constants_strategy(),
        text in prop::collection::vec(".*", 4),
    ) -> DimensionCertificate {
        let f = |i: usize| float_at(prec, mants[i], exps[i]);
        let s_lo = float_at(prec, 1.3, 0);
        let mut s_hi = s_lo.clone();
        s_hi += f(0).abs();
        DimensionCertificate {
            s_lo,
            s_hi,
            eps_bits: ints[0] as u32,
            precision: prec,
            k: ints[1],
            n: ints[2] as u64,
            l: ints[3],
            m: ints[4],
            mp: ints[5],
            y_even,
            constants,
            s0: f(1),
            lambda_s0: f(2),
            secant_iterations: ints[6],
            phi_bounds: (f(3), f(4)),
            discrepancy: (f(5), f(6)),
            pointwise_err: f(7),
            approx_error: f(8),
            vnorm: f(9),
            certified_digits: ints[7],
            digits: text[0].clone(),
            convention: text[1].clone(),
            timestamp: text[2].clone(),
            toolchain: text[3].clone(),
        }
    }
}

fn report_set() -> impl Strategy<Value = ReportSet> {
    (
        constants_strategy(),
        1usize..100,
        32u32..256,
        prop::collection::vec((any::<bool>(), prop::num::f64::ANY, 0usize..1 << 40, ".*", ".*"), 0..=4),
    )
        .prop_map(|(constants, subdivision, prec, rows)| {
            let config = AprioriConfig { subdivision, prec, ..AprioriConfig::default() };
            let reports = rows
                .into_iter()
                .zip(Claim::ALL)
                .map(|((passed, slack, boxes, n_range, message), claim)| VerificationReport {
                    claim,
                    n_range,
                    boxes,
                    slack,
                    passed,
                    constants,
                    subdivision,
                    prec,
                    message,
                })
                .collect();
            ReportSet { config, constants, reports }
        })
}

/// Equality that treats NaN slacks as equal.
fn same_reports(a: &ReportSet, b: &ReportSet) -> bool {
    a.config == b.config
        && a.constants == b.constants
        && a.reports.len() == b.reports.len()
        && a.reports.iter().zip(&b.reports).all(|(x, y)| {
            let slack_eq = x.slack == y.slack || (x.slack.is_nan() && y.slack.is_nan());
            slack_eq && VerificationReport { slack: 0.0, ..x.clone() } == VerificationReport { slack: 0.0, ..y.clone() }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificate_round_trips(c in certificate()) {
        let text = certificate_to_string(&c);
        let back = certificate_from_str(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(certificate_to_string(&back), text);
    }

    #[test]
    fn report_sets_round_trip(set in report_set()) {
        let text = reports_to_string(&set);
        let back = reports_from_str(&text).unwrap();
        prop_assert!(same_reports(&back, &set));
        prop_assert_eq!(reports_to_string(&back), text);
    }

    #[test]
    fn constants_round_trip(c in constants_strategy()) {
        let back = constants_from_doc(&KvDoc::parse(&constants_to_doc(&c).render()).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}

#[test]
fn certificate_tampering_is_detected() {
    let p = 80;
    let c = DimensionCertificate {
        s_lo: Float::with_val(p, 1.3),
        s_hi: Float::with_val(p, 1.31),
        eps_bits: 40,
        precision: p,
        k: 20,
        n: 15,
        l: 15,
        m: 30,
        mp: 70,
        y_even: true,
        constants: AprioriConstants::default(),
        s0: Float::with_val(p, 1.305),
        lambda_s0: Float::with_val(p, 1),
        secant_iterations: 4,
        phi_bounds: (Float::with_val(p, 0.5), Float::with_val(p, 1)),
        discrepancy: (Float::with_val(p, -1e-9), Float::with_val(p, 1e-9)),
        pointwise_err: Float::with_val(p, 1e-20),
        approx_error: Float::with_val(p, 1e-10),
        vnorm: Float::with_val(p, 2),
        certified_digits: 1,
        digits: "1.3".into(),
        convention: String::new(),
        timestamp: String::new(),
        toolchain: String::new(),
    };
    let text = certificate_to_string(&c);
    // Narrowing the enclosure without updating the width is caught.
    let narrowed = text.replace("s_hi = 1.3100", "s_hi = 1.3050");
    assert_ne!(narrowed, text);
    assert!(matches!(certificate_from_str(&narrowed), Err(FormatError::Inconsistent(_))));
    let status = text.replace("status = certified", "status = draft");
    assert!(certificate_from_str(&status).is_err());
    let other = text.replace("format = gasket-certificate/1", "format = gasket-apriori/1");
    assert!(matches!(certificate_from_str(&other), Err(FormatError::WrongFormat { .. })));
    let missing: String = text.lines().filter(|l| !l.starts_with("vnorm")).map(|l| format!("{l}\n")).collect();
    assert!(matches!(certificate_from_str(&missing), Err(FormatError::Missing(k)) if k == "vnorm"));
}

#[test]
fn report_flag_must_match_reports() {
    let c = AprioriConstants::default();
    let cfg = AprioriConfig::default();
    let reports = Claim::ALL
        .iter()
        .map(|&claim| VerificationReport {
            claim,
            n_range: "n <= 30".into(),
            boxes: 10,
            slack: 0.25,
            passed: true,
            constants: c,
            subdivision: cfg.subdivision,
            prec: cfg.prec,
            message: String::new(),
        })
        .collect();
    let set = ReportSet { config: cfg, constants: c, reports };
    assert!(set.all_passed());
    let text = reports_to_string(&set);
    let flipped = text.replace("operator_norm_W.passed = true", "operator_norm_W.passed = false");
    assert!(matches!(reports_from_str(&flipped), Err(FormatError::Inconsistent(_))));
}
