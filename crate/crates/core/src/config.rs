//! File formats: a JSON shift definition with a canonical serialized form,
//! a plain-text potential table, a JSON Markov measure with an optional
//! stationary vector that is recomputed and checked, and a JSON itinerary.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::edit::{GoodRule, GoodSet};
use crate::measure::{scaled_tol, MarkovMeasure, Potential};
use crate::moran::Itinerary;
use crate::shift::{GapSet, Subshift};
use crate::word::Word;
use crate::{real, Error, Real, Result};

/// Parsed shift definition file. The optional good-set rule rides along in
/// the same file so edit-metric commands need no second artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftConfig {
    #[serde(flatten)]
    pub kind: ShiftKindConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub good_set: Option<GoodSetConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShiftKindConfig {
    Full { alphabet: usize },
    Sft { alphabet: usize, forbidden: Vec<String> },
    Beta { beta: f64 },
    Sgap { gaps: GapConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum GapConfig {
    Finite { values: Vec<usize> },
    Arithmetic { start: usize, step: usize },
    Cofinite { excluded: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum GoodSetConfig {
    WholeLanguage,
    EndsWith { word: String },
    BeginsAndEndsWith { word: String },
    Explicit { words: Vec<String> },
}

fn parse_err(context: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{context}: {e}"))
}

fn shortlex(words: &mut Vec<String>) {
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words.dedup();
}

/// Parses a shift definition and normalizes it to canonical form: word
/// lists sorted shortlex, integer lists sorted ascending, duplicates
/// removed. Serializing the result reproduces the canonical bytes.
pub fn parse_shift_config(text: &str) -> Result<ShiftConfig> {
    let mut cfg: ShiftConfig =
        serde_json::from_str(text).map_err(|e| parse_err("shift config", e))?;
    match &mut cfg.kind {
        ShiftKindConfig::Full { .. } | ShiftKindConfig::Beta { .. } => {}
        ShiftKindConfig::Sft { forbidden, .. } => shortlex(forbidden),
        ShiftKindConfig::Sgap { gaps } => match gaps {
            GapConfig::Finite { values } => {
                values.sort_unstable();
                values.dedup();
            }
            GapConfig::Cofinite { excluded } => {
                excluded.sort_unstable();
                excluded.dedup();
            }
            GapConfig::Arithmetic { .. } => {}
        },
    }
    if let Some(GoodSetConfig::Explicit { words }) = &mut cfg.good_set {
        shortlex(words);
    }
    Ok(cfg)
}

/// Canonical serialized form, newline terminated.
pub fn serialize_shift_config(cfg: &ShiftConfig) -> String {
    let mut out = serde_json::to_string_pretty(cfg).expect("config serializes");
    out.push('\n');
    out
}

fn parse_words(strings: &[String]) -> Result<Vec<Word>> {
    strings.iter().map(|s| s.parse()).collect()
}

/// Instantiates the subshift a config describes.
pub fn build_shift<T: Real>(cfg: &ShiftConfig) -> Result<Subshift<T>> {
    match &cfg.kind {
        ShiftKindConfig::Full { alphabet } => Subshift::full(*alphabet),
        ShiftKindConfig::Sft { alphabet, forbidden } => {
            Subshift::sft(*alphabet, parse_words(forbidden)?)
        }
        ShiftKindConfig::Beta { beta } => Subshift::beta(real::<T>(*beta)),
        ShiftKindConfig::Sgap { gaps } => Subshift::sgap(match gaps {
            GapConfig::Finite { values } => GapSet::finite(values.iter().copied())?,
            GapConfig::Arithmetic { start, step } => {
                GapSet::Arithmetic { start: *start, step: *step }
            }
            GapConfig::Cofinite { excluded } => {
                GapSet::Cofinite { excluded: excluded.iter().copied().collect::<BTreeSet<_>>() }
            }
        }),
    }
}

/// The good set a config describes; a missing rule means the whole
/// language.
pub fn build_good_set<T: Real>(cfg: &ShiftConfig) -> Result<GoodSet<T>> {
    let rule = match &cfg.good_set {
        None | Some(GoodSetConfig::WholeLanguage) => GoodRule::WholeLanguage,
        Some(GoodSetConfig::EndsWith { word }) => GoodRule::EndsWith(word.parse()?),
        Some(GoodSetConfig::BeginsAndEndsWith { word }) => {
            GoodRule::BeginsAndEndsWith(word.parse()?)
        }
        Some(GoodSetConfig::Explicit { words }) => GoodRule::Explicit(parse_words(words)?),
    };
    GoodSet::new(build_shift(cfg)?, rule)
}

/// Parses a potential table: `alphabet p` and `depth r` headers, then one
/// `word value` line per provided cylinder. `#` starts a comment.
pub fn parse_potential<T: Real>(text: &str) -> Result<Potential<T>> {
    let mut alphabet: Option<usize> = None;
    let mut depth: Option<usize> = None;
    let mut entries: Vec<(Word, T)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap_or("");
        let rest = parts.next().unwrap_or("");
        if parts.next().is_some() {
            return Err(Error::Parse(format!(
                "potential line {}: expected two fields, got more: {line}",
                lineno + 1
            )));
        }
        match head {
            "alphabet" => {
                alphabet = Some(rest.parse().map_err(|e| {
                    parse_err(&format!("potential line {}: alphabet", lineno + 1), e)
                })?);
            }
            "depth" => {
                depth = Some(rest.parse().map_err(|e| {
                    parse_err(&format!("potential line {}: depth", lineno + 1), e)
                })?);
            }
            word_text => {
                if alphabet.is_none() || depth.is_none() {
                    return Err(Error::Parse(format!(
                        "potential line {}: entries before the alphabet/depth header",
                        lineno + 1
                    )));
                }
                let w: Word = word_text.parse()?;
                let v: f64 = rest.parse().map_err(|e| {
                    parse_err(&format!("potential line {}: value", lineno + 1), e)
                })?;
                entries.push((w, real::<T>(v)));
            }
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::Parse("potential file: no alphabet header".into()))?;
    let depth = depth.ok_or_else(|| Error::Parse("potential file: no depth header".into()))?;
    Potential::from_entries(crate::word::Alphabet::new(alphabet)?, depth, entries)
}

/// Writes a potential back out in the text format, provided entries only.
pub fn serialize_potential<T: Real>(phi: &Potential<T>) -> String {
    let mut out = format!("alphabet {}\ndepth {}\n", phi.alphabet().size(), phi.depth());
    for (w, v, provided) in phi.rows() {
        if provided {
            out.push_str(&format!("{w} {}\n", v.to_f64().unwrap_or(f64::NAN)));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TransitionEntry {
    from: String,
    to: String,
    p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MarkovFile {
    alphabet: usize,
    states: Vec<String>,
    transitions: Vec<TransitionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stationary: Option<Vec<f64>>,
}

/// Parses a Markov measure: state list, transition triplets, optional
/// stationary vector. A supplied stationary vector is recomputed and
/// rejected when it does not match.
pub fn parse_markov_measure<T: Real>(text: &str) -> Result<MarkovMeasure<T>> {
    let file: MarkovFile =
        serde_json::from_str(text).map_err(|e| parse_err("measure file", e))?;
    let alphabet = crate::word::Alphabet::new(file.alphabet)?;
    let states: Vec<Word> = parse_words(&file.states)?;
    let index = |name: &str| -> Result<usize> {
        file.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Parse(format!("measure file: unknown state {name}")))
    };
    let mut rows = vec![vec![T::zero(); states.len()]; states.len()];
    for t in &file.transitions {
        let i = index(&t.from)?;
        let j = index(&t.to)?;
        rows[i][j] = rows[i][j] + real::<T>(t.p);
    }
    let measure = MarkovMeasure::new(alphabet, states, rows)?;
    if let Some(claimed) = &file.stationary {
        if claimed.len() != measure.stationary().len() {
            return Err(Error::Parse(format!(
                "measure file: stationary vector has {} entries for {} states",
                claimed.len(),
                measure.stationary().len()
            )));
        }
        let tol = scaled_tol::<T>(1e-8);
        for (k, (&c, &s)) in claimed.iter().zip(measure.stationary()).enumerate() {
            if (real::<T>(c) - s).abs() > tol {
                return Err(Error::Parse(format!(
                    "measure file: stationary entry {k} is {c}, recomputed {s}"
                )));
            }
        }
    }
    Ok(measure)
}

/// Serializes a Markov measure with its recomputed stationary vector;
/// zero-probability transitions are omitted.
pub fn serialize_markov_measure<T: Real>(mu: &MarkovMeasure<T>) -> String {
    let states: Vec<String> = mu.states().iter().map(|w| w.to_string()).collect();
    let mut transitions = Vec::new();
    for (i, row) in mu.rows().iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if p > T::zero() {
                transitions.push(TransitionEntry {
                    from: states[i].clone(),
                    to: states[j].clone(),
                    p: p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    let file = MarkovFile {
        alphabet: mu.alphabet().size(),
        states,
        transitions,
        stationary: Some(
            mu.stationary().iter().map(|&s| s.to_f64().unwrap_or(f64::NAN)).collect(),
        ),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("measure serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ItineraryFile {
    depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_chain: Option<f64>,
    measures: Vec<MarkovFile>,
}

/// Parses an itinerary: tracking depth, optional chain tolerance (absent
/// means unconstrained), and a list of Markov measures in the measure-file
/// schema.
pub fn parse_itinerary<T: Real>(text: &str) -> Result<Itinerary<T>> {
    let file: ItineraryFile =
        serde_json::from_str(text).map_err(|e| parse_err("itinerary file", e))?;
    let mut measures = Vec::with_capacity(file.measures.len());
    for m in &file.measures {
        let rendered = serde_json::to_string(m).expect("measure serializes");
        measures.push(parse_markov_measure::<T>(&rendered)?.into());
    }
    let eps = match file.eps_chain {
        Some(e) => real::<T>(e),
        None => T::infinity(),
    };
    Itinerary::new(measures, file.depth, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureRep;

    #[test]
    fn shift_config_round_trip_is_canonical() {
        let text = r#"{
            "kind": "sft",
            "alphabet": 2,
            "forbidden": ["101", "11", "11"],
            "good_set": {"rule": "ends-with", "word": "0"}
        }"#;
        let cfg = parse_shift_config(text).unwrap();
        match &cfg.kind {
            ShiftKindConfig::Sft { forbidden, .. } => {
                assert_eq!(forbidden, &["11".to_string(), "101".to_string()]);
            }
            other => panic!("wrong kind: {other:?}"),
        }
        let canonical = serialize_shift_config(&cfg);
        let reparsed = parse_shift_config(&canonical).unwrap();
        assert_eq!(cfg, reparsed);
        assert_eq!(canonical, serialize_shift_config(&reparsed), "byte-stable");
    }

    #[test]
    fn build_all_shift_kinds() {
        let cases = [
            (r#"{"kind": "full", "alphabet": 3}"#, 27u128),
            (r#"{"kind": "sft", "alphabet": 2, "forbidden": ["11"]}"#, 5),
            (r#"{"kind": "beta", "beta": 2.0}"#, 8),
            // {0,1}: all-zero plus 010, 011, 110, 101, 111; 100 and 001
            // fail the boundary-run rule
            (r#"{"kind": "sgap", "gaps": {"form": "finite", "values": [0, 1]}}"#, 6),
            // odd gaps: boundary runs always extendable, interior gap must be odd
            (r#"{"kind": "sgap", "gaps": {"form": "arithmetic", "start": 1, "step": 2}}"#, 5),
            // excluding gap 0 forbids adjacent ones, the golden language
            (r#"{"kind": "sgap", "gaps": {"form": "cofinite", "excluded": [0]}}"#, 5),
        ];
        for (text, count3) in cases {
            let cfg = parse_shift_config(text).unwrap();
            let shift: Subshift<f64> = build_shift(&cfg).unwrap();
            assert_eq!(shift.language_count(3).unwrap(), count3, "config {text}");
        }
    }

    #[test]
    fn good_set_defaults_to_whole_language() {
        let cfg = parse_shift_config(r#"{"kind": "full", "alphabet": 2}"#).unwrap();
        let good: GoodSet<f64> = build_good_set(&cfg).unwrap();
        assert_eq!(good.members(2).unwrap().len(), 4);

        let cfg = parse_shift_config(
            r#"{"kind": "sft", "alphabet": 2, "forbidden": ["11"],
                "good_set": {"rule": "ends-with", "word": "0"}}"#,
        )
        .unwrap();
        let good: GoodSet<f64> = build_good_set(&cfg).unwrap();
        for w in good.members(4).unwrap() {
            assert_eq!(w.symbols().last(), Some(&0));
        }
    }

    #[test]
    fn potential_file_round_trip() {
        let text = "# indicator of [1] at depth 1\nalphabet 2\ndepth 2\n10 0.25\n11 -1.5\n";
        let phi: Potential<f64> = parse_potential(text).unwrap();
        assert_eq!(phi.depth(), 2);
        assert_eq!(phi.entry(&"10".parse().unwrap()).unwrap(), 0.25);
        assert_eq!(phi.entry(&"11".parse().unwrap()).unwrap(), -1.5);
        assert_eq!(phi.entry(&"00".parse().unwrap()).unwrap(), 0.0);
        assert!(!phi.is_provided(&"00".parse().unwrap()).unwrap());

        let rendered = serialize_potential(&phi);
        let back: Potential<f64> = parse_potential(&rendered).unwrap();
        assert_eq!(phi, back);
    }

    #[test]
    fn potential_file_errors() {
        assert!(matches!(
            parse_potential::<f64>("depth 1\n0 1.0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_potential::<f64>("alphabet 2\ndepth 1\n0 not-a-number\n"),
            Err(Error::Parse(_))
        ));
        assert!(parse_potential::<f64>("alphabet 2\ndepth 1\n01 1.0\n").is_err());
    }

    #[test]
    fn markov_measure_file_checks_stationary() {
        let good = r#"{
            "alphabet": 2,
            "states": ["0", "1"],
            "transitions": [
                {"from": "0", "to": "0", "p": 0.5},
                {"from": "0", "to": "1", "p": 0.5},
                {"from": "1", "to": "0", "p": 1.0}
            ],
            "stationary": [0.6666666666666666, 0.3333333333333333]
        }"#;
        let mu: MarkovMeasure<f64> = parse_markov_measure(good).unwrap();
        assert!((mu.stationary()[0] - 2.0 / 3.0).abs() < 1e-12);

        let bad = good.replace("0.6666666666666666", "0.9");
        assert!(matches!(parse_markov_measure::<f64>(&bad), Err(Error::Parse(_))));

        let absent = good.replace(
            ",\n            \"stationary\": [0.6666666666666666, 0.3333333333333333]",
            "",
        );
        parse_markov_measure::<f64>(&absent).unwrap();

        let rendered = serialize_markov_measure(&mu);
        let back: MarkovMeasure<f64> = parse_markov_measure(&rendered).unwrap();
        assert_eq!(back.rows(), mu.rows());
    }

    #[test]
    fn itinerary_file_parses() {
        let text = r#"{
            "depth": 2,
            "eps_chain": 1.0,
            "measures": [
                {
                    "alphabet": 2,
                    "states": ["0", "1"],
                    "transitions": [
                        {"from": "0", "to": "0", "p": 0.7},
                        {"from": "0", "to": "1", "p": 0.3},
                        {"from": "1", "to": "0", "p": 0.7},
                        {"from": "1", "to": "1", "p": 0.3}
                    ]
                },
                {
                    "alphabet": 2,
                    "states": ["0", "1"],
                    "transitions": [
                        {"from": "0", "to": "0", "p": 0.3},
                        {"from": "0", "to": "1", "p": 0.7},
                        {"from": "1", "to": "0", "p": 0.3},
                        {"from": "1", "to": "1", "p": 0.7}
                    ]
                }
            ]
        }"#;
        let itinerary: Itinerary<f64> = parse_itinerary(text).unwrap();
        assert_eq!(itinerary.len(), 2);
        assert_eq!(itinerary.depth(), 2);
        match &itinerary.measures()[0] {
            MeasureRep::Markov(m) => assert!((m.rows()[0][1] - 0.3).abs() < 1e-12),
            other => panic!("wrong measure kind: {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(parse_shift_config("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_markov_measure::<f64>(r#"{"alphabet": 2}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_itinerary::<f64>("[]"), Err(Error::Parse(_))));
    }
}
