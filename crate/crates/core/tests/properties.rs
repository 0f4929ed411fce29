//! Randomized invariants: structural laws that must hold for every input,
//! checked over generated words, measures, potentials, and configs.

use proptest::prelude::*;
use shiftpress::{
    edit_distance, good_word_error, parse_shift_config, serialize_shift_config, spectrum_legendre,
    transfer_pressure, weak_star_distance, Alphabet, CylinderTable, GapSet, MarkovMeasure64,
    MeasureRep, MistakeFunction, Potential64, Subshift64, Word,
};

fn word_strategy(alphabet: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..alphabet, 0..=max_len).prop_map(Word::new)
}

fn shift_pool(index: usize) -> Subshift64 {
    let w = |s: &str| s.parse::<Word>().unwrap();
    match index {
        0 => Subshift64::full(2).unwrap(),
        1 => Subshift64::full(3).unwrap(),
        2 => Subshift64::sft(2, vec![w("11")]).unwrap(),
        3 => Subshift64::sft(2, vec![w("010")]).unwrap(),
        4 => Subshift64::sgap(GapSet::finite([0usize, 1]).unwrap()).unwrap(),
        5 => Subshift64::sgap(GapSet::finite([0usize, 2, 4]).unwrap()).unwrap(),
        6 => Subshift64::sgap(GapSet::Arithmetic { start: 1, step: 2 }).unwrap(),
        7 => Subshift64::beta(1.5).unwrap(),
        8 => Subshift64::beta((1.0 + 5.0_f64.sqrt()) / 2.0).unwrap(),
        _ => Subshift64::beta(2.5).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // d(u, w) = 0 iff u = w; d is symmetric; the triangle inequality holds;
    // and the distance sits between the length gap and the longer length.
    #[test]
    fn edit_distance_is_a_metric(
        u in word_strategy(2, 8),
        v in word_strategy(2, 8),
        w in word_strategy(2, 8),
    ) {
        let duv = edit_distance(&u, &v);
        prop_assert_eq!(duv == 0, u == v);
        prop_assert_eq!(duv, edit_distance(&v, &u));
        let duw = edit_distance(&u, &w);
        let dvw = edit_distance(&v, &w);
        prop_assert!(duw <= duv + dvw);
        prop_assert!(duv >= u.len().abs_diff(v.len()));
        if !u.is_empty() || !v.is_empty() {
            prop_assert!(duv <= u.len().max(v.len()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Every word of the language has all its subwords in the language, and
    // extends on the right by at least one symbol.
    #[test]
    fn languages_are_factorial_and_extendable(index in 0usize..10, n in 1usize..=6) {
        let x = shift_pool(index);
        let p = x.alphabet().size() as u8;
        for w in x.language(n).unwrap() {
            let s = w.symbols();
            for start in 0..s.len() {
                for end in start + 1..=s.len() {
                    let sub = Word::new(s[start..end].to_vec());
                    prop_assert!(
                        x.contains(&sub).unwrap(),
                        "shift {} contains {} but not its subword {}",
                        index, w, sub
                    );
                }
            }
            let extended = (0..p).any(|c| {
                let mut v = s.to_vec();
                v.push(c);
                x.contains(&Word::new(v)).unwrap()
            });
            prop_assert!(extended, "shift {} word {} has no right extension", index, w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Adding a constant to the potential shifts the pressure by exactly
    // that constant.
    #[test]
    fn pressure_shifts_additively(
        v0 in -2.0f64..2.0,
        v1 in -2.0f64..2.0,
        c in -2.0f64..2.0,
        golden in proptest::bool::ANY,
    ) {
        let a2 = Alphabet::new(2).unwrap();
        let x = if golden {
            Subshift64::sft(2, vec!["11".parse::<Word>().unwrap()]).unwrap()
        } else {
            Subshift64::full(2).unwrap()
        };
        let phi = Potential64::from_entries(
            a2,
            1,
            [("0".parse::<Word>().unwrap(), v0), ("1".parse::<Word>().unwrap(), v1)],
        )
        .unwrap();
        let shifted =
            Potential64::linear_combination(&phi, 1.0, &Potential64::constant(a2, c), 1.0)
                .unwrap();
        let p0 = transfer_pressure(&x, &phi).unwrap().value;
        let p1 = transfer_pressure(&x, &shifted).unwrap().value;
        prop_assert!((p1 - p0 - c).abs() < 1e-9, "shift by {} moved pressure by {}", c, p1 - p0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // The level-set spectrum is concave on the interior of its domain.
    #[test]
    fn spectrum_is_concave(
        a in 0.02f64..0.98,
        b in 0.02f64..0.98,
        t in 0.05f64..0.95,
    ) {
        let a2 = Alphabet::new(2).unwrap();
        let x = Subshift64::full(2).unwrap();
        let zero = Potential64::zero(a2);
        let psi = Potential64::indicator(a2, &"1".parse::<Word>().unwrap()).unwrap();
        let mid = t * a + (1.0 - t) * b;
        let fa = spectrum_legendre(&x, &zero, &psi, a).unwrap().value;
        let fb = spectrum_legendre(&x, &zero, &psi, b).unwrap().value;
        let fm = spectrum_legendre(&x, &zero, &psi, mid).unwrap().value;
        prop_assert!(
            fm >= t * fa + (1.0 - t) * fb - 1e-6,
            "F({}) = {} below the chord through F({}), F({})",
            mid, fm, a, b
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // Periodic-extension frequency tables are consistent across depths,
    // at distance zero from themselves, and symmetric in the metric.
    #[test]
    fn empirical_tables_are_consistent(
        symbols in prop::collection::vec(0u8..2, 3..=24),
        other in prop::collection::vec(0u8..2, 3..=24),
        d in 2usize..=3,
    ) {
        let a2 = Alphabet::new(2).unwrap();
        let w = Word::new(symbols);
        let v = Word::new(other);
        let deep = CylinderTable::<f64>::from_word_periodic(a2, &w, d).unwrap();
        let shallow = CylinderTable::<f64>::from_word_periodic(a2, &w, d - 1).unwrap();
        let marg = deep.marginal(d - 1).unwrap();
        for (i, (m, s)) in marg.iter().zip(shallow.marginal(d - 1).unwrap()).enumerate() {
            prop_assert!((m - s).abs() < 1e-12, "marginal {} differs: {} vs {}", i, m, s);
        }
        let mu = MeasureRep::from(deep);
        let nu = MeasureRep::from(CylinderTable::<f64>::from_word_periodic(a2, &v, d).unwrap());
        let (self_dist, _) = weak_star_distance(&mu, &mu, d).unwrap();
        prop_assert!(self_dist.abs() < 1e-12);
        let (ab, _) = weak_star_distance(&mu, &nu, d).unwrap();
        let (ba, _) = weak_star_distance(&nu, &mu, d).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab >= 0.0);
    }

    // Stationarity and normalization of the two-state chain family with a
    // forbidden 1 -> 1 transition.
    #[test]
    fn markov_measures_are_stationary(a in 0.05f64..0.95) {
        let a2 = Alphabet::new(2).unwrap();
        let states = vec!["0".parse::<Word>().unwrap(), "1".parse::<Word>().unwrap()];
        let mu = MarkovMeasure64::new(a2, states, vec![vec![a, 1.0 - a], vec![1.0, 0.0]]).unwrap();
        let pi = mu.stationary();
        let rows = mu.rows();
        for j in 0..2 {
            let mut back = 0.0;
            for i in 0..2 {
                back += pi[i] * rows[i][j];
            }
            prop_assert!((back - pi[j]).abs() < 1e-10);
        }
        prop_assert!((pi[0] + pi[1] - 1.0).abs() < 1e-12);
        prop_assert!(mu.entropy() >= 0.0);
        let mut total = 0.0;
        for s in ["00", "01", "10", "11"] {
            total += mu.probability(&s.parse::<Word>().unwrap()).unwrap();
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    // The block-surrogate error shrinks with block length and the mistake
    // function is monotone with a plateau past its table.
    #[test]
    fn error_and_mistake_bounds_are_monotone(
        n in 1usize..200,
        d in 1usize..=4,
        raw in prop::collection::vec(0usize..10, 1..12),
    ) {
        let a2 = Alphabet::new(2).unwrap();
        if n >= d {
            let e1: f64 = good_word_error(a2, n, d);
            let e2: f64 = good_word_error(a2, n + 1, d);
            prop_assert!(e2 <= e1 + 1e-15);
            prop_assert!(e1 > 0.0);
        }
        let g = MistakeFunction::from_raw(raw);
        for k in 1..g.n_max() {
            prop_assert!(g.value(k) <= g.value(k + 1));
        }
        prop_assert_eq!(g.value(g.n_max() + 7), g.value(g.n_max()));
    }
}

fn shift_config_strategy() -> impl Strategy<Value = String> {
    let full = (2usize..=6).prop_map(|alphabet| {
        format!("{{\"kind\": \"full\", \"alphabet\": {alphabet}}}")
    });
    let sft = prop::collection::vec(prop::collection::vec(0u8..2, 2..=3), 1..=2).prop_map(
        |words| {
            let list: Vec<String> = words
                .iter()
                .map(|w| {
                    let s: String = w.iter().map(|c| (b'0' + c) as char).collect();
                    format!("\"{s}\"")
                })
                .collect();
            format!(
                "{{\"kind\": \"sft\", \"alphabet\": 2, \"forbidden\": [{}]}}",
                list.join(", ")
            )
        },
    );
    let beta = (11u32..=35).prop_map(|tenths| {
        format!("{{\"kind\": \"beta\", \"beta\": {}}}", tenths as f64 / 10.0)
    });
    let sgap = prop::collection::btree_set(0usize..6, 1..=3).prop_map(|vals| {
        let list: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        format!(
            "{{\"kind\": \"sgap\", \"gaps\": {{\"form\": \"finite\", \"values\": [{}]}}}}",
            list.join(", ")
        )
    });
    prop_oneof![full, sft, beta, sgap]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // Canonical serialization is a fixed point of parse -> serialize.
    #[test]
    fn shift_configs_round_trip(text in shift_config_strategy()) {
        let cfg = parse_shift_config(&text).unwrap();
        let canonical = serialize_shift_config(&cfg);
        let again = parse_shift_config(&canonical).unwrap();
        prop_assert_eq!(serialize_shift_config(&again), canonical);
        prop_assert!(shiftpress::build_shift::<f64>(&cfg).is_ok());
    }
}
