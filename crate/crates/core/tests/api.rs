use normality_lab::generators::{bernoulli_source, generate, SourceSpec};
use normality_lab::markov::TransitionMatrix;
use normality_lab::normality::{freq_word, Schedule};
use normality_lab::ratio::{rational, Rational};
use normality_lab::strategies::{apply_strategy, dfa_strategy};
use normality_lab::verify::{set_measures, VerifyConfig};
use normality_lab::{BernoulliParam, Dfa, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn json_roundtrip_then_select() {
    let text = r#"{"states":2,"start":0,"accepting":[0],"delta":[[1,1],[0,0]]}"#;
    let dfa = Dfa::from_json_str(text).unwrap();
    let again = Dfa::from_json_str(&dfa.to_json_string()).unwrap();
    assert_eq!(dfa, again);
    let r = again.select(0, &w("010101")).unwrap();
    assert_eq!(r.selected, w("000"));
    assert_eq!(r.selected_positions, vec![1, 3, 5]);
}

#[test]
fn composition_is_two_step_selection() {
    let a = Dfa::random_strongly_connected(3, 4);
    let b = Dfa::rotator(3);
    let ab = Dfa::compose(&a, &b);
    let input = generate(&bernoulli_source(rational(1, 3), 11).unwrap(), 500).unwrap();
    let first = a.select(0, &input).unwrap().selected;
    let two_step = b.select(0, &first).unwrap().selected;
    assert_eq!(ab.select(0, &input).unwrap().selected, two_step);
}

#[test]
fn toggle_chain_and_strategy_agree() {
    let p = BernoulliParam::from_ratio(1, 3).unwrap();
    let chain = TransitionMatrix::induced(&Dfa::toggle(), &p);
    assert_eq!(chain.period().unwrap(), 2);
    let pi = chain.stationary().unwrap();
    assert_eq!(pi.values(), &[rational(1, 2), rational(1, 2)]);

    let s = dfa_strategy(Dfa::toggle());
    assert_eq!(apply_strategy(&s, &w("110100101")).selected, w("10011"));
}

// Toggle reads n/2 fair bits from either start state. For b <= 1/2 and
// eps = 1/8 only k = n/4 ones lands strictly inside the ball, so
// mu(D_n) = (C(n/2, n/4) / 2^(n/2))^2.
#[test]
fn toggle_d_matches_binomial_closed_form() {
    let cfg = VerifyConfig::default();
    let p = BernoulliParam::half();
    for n in [8u32, 12, 16] {
        let m = set_measures(&Dfa::toggle(), &p, n, &rational(1, 4), &rational(1, 8), &cfg).unwrap();
        let half = u64::from(n / 2);
        let one = Rational::new(binomial(half, half / 2).into(), (1u64 << half).into());
        assert_eq!(m.d.value(), &(one.clone() * one), "n = {n}");
    }
}

#[test]
fn seeded_sources_are_reproducible() {
    let spec: SourceSpec = "random:1/3:42".parse().unwrap();
    assert_eq!(generate(&spec, 256).unwrap(), generate(&spec, 256).unwrap());
    assert_eq!(generate(&"champernowne".parse().unwrap(), 10).unwrap(), w("0110111001"));
}

#[test]
fn word_frequency_report() {
    let spec: SourceSpec = "periodic:011".parse().unwrap();
    let report = freq_word(&spec, &w("1"), &BernoulliParam::half(), &"3000".parse::<Schedule>().unwrap()).unwrap();
    assert!((report.final_observed() - 2.0 / 3.0).abs() < 1e-9);
    assert!(!report.passed());
    assert!(report.to_csv().unwrap().starts_with("N,observed,reference,deviation\n"));
}
