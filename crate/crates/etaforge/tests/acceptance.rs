//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single PASS/FAIL line so a --nocapture run doubles as a checklist.

use num_traits::Zero;

use etaforge::basisfind::{
    enumerate_candidates, independence_indices, select_basis, solve_combination,
    sturm_precision, verify_identity,
};
use etaforge::dims::dim_s2;
use etaforge::etaq::{cusp_order, expand_eta_quotient, is_cusp_form, parse_bracket, EtaQuotient};
use etaforge::exact::{rational, Int, Rational};
use etaforge::gaussian::{
    hasse_reconstruct, theorem2_rhs, two_f1, verify_eq5, verify_eq6, CharContext,
};
use etaforge::legendre::{ap_good, ap_model, conductor, newform_coefficients, IntegralModel};
use etaforge::{primes_in_range, Error};

fn report(criterion: u32, name: &str, pass: bool) {
    println!(
        "acceptance criterion {criterion} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed");
}

/// The four identities: lambda, conductor, and (coefficient, bracket) rows.
fn theorem1_rows() -> Vec<(Rational, u64, Vec<(i64, &'static str)>)> {
    vec![
        (
            rational(27, 16),
            33,
            vec![(1, "[1^2 11^2]"), (3, "[3^2 33^2]"), (3, "[1^1 3^1 11^1 33^1]")],
        ),
        (
            rational(5, 1),
            40,
            vec![
                (1, "[1^-1 2^2 4^2 5^1 8^-1 40^1]"),
                (1, "[1^1 5^-1 8^1 10^2 20^2 40^-1]"),
            ],
        ),
        (
            rational(81, 49),
            42,
            vec![
                (2, "[1^-1 2^2 3^1 7^2 14^-1 42^1]"),
                (-3, "[3^1 6^1 21^1 42^1]"),
                (1, "[2^1 3^2 6^-1 7^1 21^-1 42^2]"),
                (1, "[1^1 3^-1 6^2 14^1 21^2 42^-1]"),
            ],
        ),
        (
            rational(-7, 25),
            70,
            vec![
                (1, "[1^-1 2^2 5^2 7^-1 10^-1 14^2 35^2 70^-1]"),
                (-1, "[1^2 2^-1 5^-1 7^2 10^2 14^-1 35^-1 70^2]"),
            ],
        ),
    ]
}

#[test]
fn criterion_1_theorem1_reproduction() {
    for (lam, expected_level, row) in theorem1_rows() {
        let (level, _) = conductor(&lam).unwrap();
        assert_eq!(level, expected_level, "conductor of lambda = {lam}");

        // basis selection with the identity's quotients placed first: the
        // representation in a basis is unique, so the solved coordinates on
        // them are forced and everything else must vanish
        let table: Vec<EtaQuotient> = row
            .iter()
            .map(|&(_, b)| parse_bracket(b).unwrap())
            .collect();
        let mut ordered = table.clone();
        for q in enumerate_candidates(level, 3).quotients {
            if !ordered.contains(&q) {
                ordered.push(q);
            }
        }
        let t = sturm_precision(level).max(200);
        let kept = select_basis(&ordered, level, t).unwrap();
        let basis: Vec<EtaQuotient> = kept.iter().map(|&i| ordered[i].clone()).collect();
        for (pos, q) in table.iter().enumerate() {
            assert_eq!(&basis[pos], q, "table quotient displaced for lambda = {lam}");
        }
        let series: Vec<_> = basis
            .iter()
            .map(|q| expand_eta_quotient(q, t).unwrap())
            .collect();
        let d = dim_s2(level).dimension as usize;
        let witness = independence_indices(&series, d, t).unwrap();
        let target = newform_coefficients(&lam, t).unwrap();
        let solution = solve_combination(&target, &basis, &witness).unwrap();

        for (i, &(c, b)) in row.iter().enumerate() {
            assert_eq!(solution.coefficients[i], rational(c, 1), "{b} for lambda = {lam}");
        }
        for c in &solution.coefficients[row.len()..] {
            assert!(c.is_zero(), "unexpected extra term for lambda = {lam}");
        }
        assert!(solution.verified_to >= 200, "lambda = {lam}");
    }
    report(1, "Theorem 1 reproduction", true);
}

#[test]
fn criterion_2_dimension_formula() {
    let pass = dim_s2(33).dimension == 3
        && dim_s2(40).dimension == 3
        && dim_s2(42).dimension == 5
        && dim_s2(70).dimension == 9;
    // integrality and nonnegativity are asserted inside dim_s2
    for n in 1..=500 {
        let _ = dim_s2(n);
    }
    report(2, "dimension formula", pass);
}

#[test]
fn criterion_3_congruence_table() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_etaforge"))
        .args(["verify-theorem2", "27/16", "--primes", "5..29"])
        .output()
        .unwrap();
    assert!(out.status.success(), "nonzero exit");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "ok");
    let rows: Vec<&serde_json::Value> = doc["results"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r.get("note").is_none())
        .collect();
    let expected = [
        (5, -2, 3),
        (7, 4, 4),
        (13, -2, 11),
        (17, -2, 15),
        (19, 0, 0),
        (23, 8, 8),
        (29, -6, 23),
    ];
    assert_eq!(rows.len(), expected.len());
    for (row, (p, ap, b)) in rows.iter().zip(expected) {
        assert_eq!(row["p"], p);
        assert_eq!(row["ap"], ap);
        assert_eq!(row["B"], b);
        assert_eq!(row["match"], true);
    }
    report(3, "congruence table", true);
}

#[test]
fn criterion_4_eq5_identity() {
    for (lam, _, _) in theorem1_rows() {
        for p in primes_in_range(3, 50) {
            match verify_eq5(&lam, p) {
                Ok(ok) => assert!(ok, "Eq. (5) fails at p = {p}, lambda = {lam}"),
                Err(Error::BadReduction(_)) => {}
                Err(e) => panic!("unexpected error at p = {p}: {e}"),
            }
        }
    }
    report(4, "Eq. (5) identity", true);
}

#[test]
fn criterion_5_eq6_property_suite() {
    for (m, l) in [(1u32, 1u32), (2, 1), (1, 2)] {
        for r in [rational(1, 1), rational(2, 1), rational(-3, 1)] {
            for p in primes_in_range(3, 31) {
                match verify_eq6(p, m, l, &r) {
                    Ok(ok) => assert!(ok, "Eq. (6) fails: p={p}, m={m}, l={l}, r={r}"),
                    // r = -3 at p = 3 is the only non-unit case in the grid
                    Err(Error::Precondition(_)) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }
    report(5, "Eq. (6) property suite", true);
}

#[test]
fn criterion_6_hasse_reconstruction() {
    for (lam, _, _) in theorem1_rows() {
        for p in primes_in_range(17, 101) {
            match ap_good(&lam, p) {
                Ok(ap) => {
                    let b = theorem2_rhs(p, &lam).unwrap();
                    assert_eq!(
                        hasse_reconstruct(p, b as i64).unwrap(),
                        ap,
                        "p = {p}, lambda = {lam}"
                    );
                }
                Err(Error::BadReduction(_)) => {}
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }
    report(6, "Hasse reconstruction", true);
}

#[test]
fn criterion_7_section1_fixtures() {
    let cases = [
        ("[4^2 8^2]", IntegralModel::new(0, 0, 0, -1, 0)),
        ("[6^4]", IntegralModel::new(0, 0, 0, 0, 1)),
    ];
    for (bracket, model) in cases {
        let series = expand_eta_quotient(&parse_bracket(bracket).unwrap(), 50).unwrap();
        for p in primes_in_range(3, 50) {
            match ap_model(&model, p) {
                Ok(ap) => assert_eq!(
                    series.coeff_at(p as i64).unwrap(),
                    Int::from(ap),
                    "{bracket} at p = {p}"
                ),
                Err(Error::BadReduction(_)) => {}
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }
    report(7, "section 1 fixtures", true);
}

#[test]
fn criterion_8_property_suites() {
    // generator independence of the completed hypergeometric sums
    for p in primes_in_range(3, 31) {
        let ctx = CharContext::new(p).unwrap();
        let alt = (2..p)
            .rev()
            .find(|&g| CharContext::with_generator(p, g).is_ok())
            .unwrap();
        let ctx2 = CharContext::with_generator(p, alt).unwrap();
        for x in 0..p {
            assert_eq!(two_f1(&ctx, x).unwrap(), two_f1(&ctx2, x).unwrap());
        }
    }

    // q-series ring laws on eta-quotient expansions
    let a = expand_eta_quotient(&parse_bracket("[1^2 11^2]").unwrap(), 40).unwrap();
    let b = expand_eta_quotient(&parse_bracket("[3^2 33^2]").unwrap(), 40).unwrap();
    let c = expand_eta_quotient(&parse_bracket("[1^1 3^1 11^1 33^1]").unwrap(), 40).unwrap();
    assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    assert_eq!(
        a.mul(&b.add(&c).unwrap()),
        a.mul(&b).add(&a.mul(&c)).unwrap()
    );

    // cusp order at the infinite cusp equals the leading exponent for every
    // quotient appearing in the identities, the extra basis elements, and
    // the two motivating forms
    let everything: Vec<(u64, &str)> = vec![
        (33, "[1^2 11^2]"),
        (33, "[3^2 33^2]"),
        (33, "[1^1 3^1 11^1 33^1]"),
        (40, "[1^-1 2^2 4^2 5^1 8^-1 40^1]"),
        (40, "[1^1 5^-1 8^1 10^2 20^2 40^-1]"),
        (40, "[2^2 10^2]"),
        (42, "[1^-1 2^2 3^1 7^2 14^-1 42^1]"),
        (42, "[3^1 6^1 21^1 42^1]"),
        (42, "[2^1 3^2 6^-1 7^1 21^-1 42^2]"),
        (42, "[1^1 3^-1 6^2 14^1 21^2 42^-1]"),
        (42, "[1^-1 2^2 3^2 6^-1 7^-1 14^2 21^2 42^-1]"),
        (70, "[1^-1 2^2 5^2 7^-1 10^-1 14^2 35^2 70^-1]"),
        (70, "[1^2 2^-1 5^-1 7^2 10^2 14^-1 35^-1 70^2]"),
        (36, "[6^4]"),
        (32, "[4^2 8^2]"),
    ];
    for (level, text) in everything {
        let f = parse_bracket(text).unwrap();
        assert!(is_cusp_form(&f, level).unwrap().0, "{text} at {level}");
        let ord = cusp_order(&f, level, level).unwrap();
        let lead = expand_eta_quotient(&f, 4)
            .unwrap()
            .leading_exponent()
            .unwrap();
        assert_eq!(ord, lead, "{text}");
    }

    // dimension integrality (asserted inside dim_s2)
    for n in 1..=500 {
        let _ = dim_s2(n);
    }
    report(8, "property suites", true);
}

#[test]
fn stated_rows_also_verify_directly() {
    // redundant guard: the stated combinations pass verify_identity as given
    for (lam, _, row) in theorem1_rows() {
        let combo: Vec<(Rational, EtaQuotient)> = row
            .iter()
            .map(|&(c, b)| (rational(c, 1), parse_bracket(b).unwrap()))
            .collect();
        assert!(verify_identity(&lam, &combo, 200).unwrap(), "lambda = {lam}");
    }
}
