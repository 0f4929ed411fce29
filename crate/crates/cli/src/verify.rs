//! Built-in oracle and invariant suite behind `shiftpress verify`. Every
//! check prints one PASS/FAIL line; the command exits nonzero when any
//! check fails. Output depends only on the seed, never on timing.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiftpress::{
    ball_bound_report, bowen_dimension, build_shift, dimension_spectrum,
    edit_distance, entropy, entropy_with, equilibrium_measure, generate_point, good_words,
    irregular_pressure, katok_count_check, make_schedule, parse_itinerary, parse_markov_measure,
    parse_potential, parse_shift_config, serialize_shift_config, sgap_series_entropy,
    spectrum_direct, spectrum_domain, spectrum_legendre, track_convergence, transfer_pressure,
    Alphabet, GapSet, GoodRule, GoodSet, IrregularOutcome, Itinerary, MarkovMeasure64,
    MeasureRep, MistakeFunction, Potential64, Subshift64, Word,
};

type Check = std::result::Result<(), String>;

fn fail(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

fn word(s: &str) -> Word {
    s.parse().expect("literal word")
}

fn a2() -> Alphabet {
    Alphabet::new(2).expect("binary alphabet")
}

fn full2() -> Subshift64 {
    Subshift64::full(2).expect("full shift")
}

fn golden() -> Subshift64 {
    Subshift64::sft(2, vec![word("11")]).expect("golden shift")
}

fn depth1(v0: f64, v1: f64) -> Potential64 {
    Potential64::from_entries(a2(), 1, [(word("0"), v0), (word("1"), v1)])
        .expect("depth-1 potential")
}

fn indicator_one() -> Potential64 {
    Potential64::indicator(a2(), &word("1")).expect("cylinder indicator")
}

fn binary_entropy(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
}

fn bernoulli_half() -> MarkovMeasure64 {
    MarkovMeasure64::bernoulli(a2(), &[0.5, 0.5]).expect("fair coin")
}

/// Runs the whole battery; returns the pass/fail table and the number of
/// failed checks.
pub fn run(config_dir: Option<&Path>, seed: u64) -> (String, usize) {
    let mut checks: Vec<(&'static str, Check)> = vec![
        ("full-shift-entropy", full_shift_entropy()),
        ("golden-entropy-and-counts", golden_entropy_and_counts()),
        ("beta2-equals-full2", beta2_equals_full2()),
        ("sgap-series-oracle", sgap_series_oracle()),
        ("beta-entropy-brackets", beta_entropy_brackets()),
        ("pressure-additive-shift", pressure_additive_shift(seed)),
        ("variational-inequality", variational_inequality(seed)),
        ("legendre-binary-entropy", legendre_binary_entropy()),
        ("direct-vs-legendre", direct_vs_legendre()),
        ("spectrum-envelope", spectrum_envelope()),
        ("bowen-dimension", bowen_checks()),
        ("irregular-pressure", irregular_checks()),
        ("edit-metric-axioms", edit_metric_axioms(seed)),
        ("ball-bound-constant", ball_bound_constant()),
        ("katok-counting", katok_counting()),
        ("moran-tracking", moran_tracking(seed)),
        ("moran-determinism", moran_determinism(seed)),
    ];
    if let Some(dir) = config_dir {
        checks.push(("config-round-trips", config_round_trips(dir)));
    }

    let mut table = String::new();
    let mut failed = 0usize;
    for (name, outcome) in &checks {
        match outcome {
            Ok(()) => {
                let _ = writeln!(table, "PASS {name}");
            }
            Err(msg) => {
                failed += 1;
                let _ = writeln!(table, "FAIL {name}: {msg}");
            }
        }
    }
    let _ = writeln!(table, "{} of {} checks passed", checks.len() - failed, checks.len());
    (table, failed)
}

fn full_shift_entropy() -> Check {
    for p in [2usize, 3, 5] {
        let x = Subshift64::full(p).map_err(|e| e.to_string())?;
        let e = entropy(&x).map_err(|e| e.to_string())?;
        if !e.exact {
            return fail(format!("full({p}) entropy not exact"));
        }
        let target = (p as f64).ln();
        if (e.value() - target).abs() > 1e-10 {
            return fail(format!("full({p}) entropy {} vs {target}", e.value()));
        }
    }
    Ok(())
}

fn golden_entropy_and_counts() -> Check {
    let x = golden();
    let h = entropy(&x).map_err(|e| e.to_string())?;
    let target = ((1.0 + 5.0_f64.sqrt()) / 2.0).ln();
    if !h.exact || (h.value() - target).abs() > 1e-9 {
        return fail(format!("golden entropy {} vs {target}", h.value()));
    }
    let (mut a, mut b) = (1u128, 1u128); // F_1, F_2
    for _ in 0..2 {
        let c = a + b;
        a = b;
        b = c;
    }
    // now a = F_3, b = F_4
    let mut expected = a;
    for n in 1..=20usize {
        let count = x.language_count(n).map_err(|e| e.to_string())?;
        if count != expected {
            return fail(format!("|L_{n}| = {count}, Fibonacci says {expected}"));
        }
        let c = a + b;
        a = b;
        b = c;
        expected = a;
    }
    Ok(())
}

fn beta2_equals_full2() -> Check {
    let b = Subshift64::beta(2.0).map_err(|e| e.to_string())?;
    let f = full2();
    for n in 1..=10usize {
        let lb = b.language(n).map_err(|e| e.to_string())?;
        let lf = f.language(n).map_err(|e| e.to_string())?;
        if lb != lf {
            return fail(format!("languages differ at length {n}"));
        }
    }
    Ok(())
}

fn sgap_series_oracle() -> Check {
    let cases: [&[usize]; 3] = [&[0, 1], &[1, 2], &[0, 2, 4]];
    for vals in cases {
        let gaps = GapSet::finite(vals.iter().copied()).map_err(|e| e.to_string())?;
        let root = sgap_series_entropy::<f64>(&gaps).map_err(|e| e.to_string())?;
        let x = Subshift64::sgap(gaps).map_err(|e| e.to_string())?;
        let e = entropy_with(&x, 18, 12).map_err(|e| e.to_string())?;
        if e.width() > 0.05 {
            return fail(format!("S={vals:?} bracket width {}", e.width()));
        }
        if root < e.lower - 1e-9 || root > e.upper + 1e-9 {
            return fail(format!(
                "S={vals:?} series root {root} outside [{}, {}]",
                e.lower, e.upper
            ));
        }
    }
    Ok(())
}

fn beta_entropy_brackets() -> Check {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    for beta in [1.5, phi, 2.5] {
        let x = Subshift64::beta(beta).map_err(|e| e.to_string())?;
        let e = entropy_with(&x, 18, 10).map_err(|e| e.to_string())?;
        let target = beta.ln();
        if e.width() > 0.06 {
            return fail(format!("beta={beta} bracket width {}", e.width()));
        }
        if target < e.lower - 1e-9 || target > e.upper + 1e-9 {
            return fail(format!(
                "beta={beta} log beta {target} outside [{}, {}]",
                e.lower, e.upper
            ));
        }
    }
    Ok(())
}

fn pressure_additive_shift(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let x = full2();
    for _ in 0..5 {
        let phi = depth1(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let c: f64 = rng.gen_range(-1.0..1.0);
        let shifted = Potential64::linear_combination(
            &phi,
            1.0,
            &Potential64::constant(a2(), c),
            1.0,
        )
        .map_err(|e| e.to_string())?;
        let p0 = transfer_pressure(&x, &phi).map_err(|e| e.to_string())?.value;
        let p1 = transfer_pressure(&x, &shifted).map_err(|e| e.to_string())?.value;
        if (p1 - p0 - c).abs() > 1e-10 {
            return fail(format!("P(phi+{c}) - P(phi) = {}", p1 - p0));
        }
    }
    Ok(())
}

fn variational_inequality(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    let x = golden();
    let states = vec![word("0"), word("1")];
    for _ in 0..20 {
        let phi = depth1(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let p = transfer_pressure(&x, &phi).map_err(|e| e.to_string())?.value;
        let a: f64 = rng.gen_range(0.05..0.95);
        let mu = MarkovMeasure64::new(a2(), states.clone(), vec![vec![a, 1.0 - a], vec![1.0, 0.0]])
            .map_err(|e| e.to_string())?;
        let free = mu.entropy()
            + MeasureRep::from(mu).integrate(&phi).map_err(|e| e.to_string())?;
        if free > p + 1e-8 {
            return fail(format!("h + int phi = {free} exceeds pressure {p}"));
        }
        let eq = equilibrium_measure(&x, &phi).map_err(|e| e.to_string())?;
        let attained = eq.entropy()
            + MeasureRep::from(eq).integrate(&phi).map_err(|e| e.to_string())?;
        if (attained - p).abs() > 1e-6 {
            return fail(format!("equilibrium attains {attained} vs pressure {p}"));
        }
    }
    Ok(())
}

fn legendre_binary_entropy() -> Check {
    let x = full2();
    let zero = Potential64::zero(a2());
    let psi = indicator_one();
    for k in 1..=9usize {
        let alpha = k as f64 / 10.0;
        let point =
            spectrum_legendre(&x, &zero, &psi, alpha).map_err(|e| e.to_string())?;
        let target = binary_entropy(alpha);
        if (point.value - target).abs() > 1e-6 {
            return fail(format!("F({alpha}) = {} vs H = {target}", point.value));
        }
    }
    Ok(())
}

fn direct_vs_legendre() -> Check {
    let x = full2();
    let zero = Potential64::zero(a2());
    let psi = indicator_one();
    for alpha in [0.3, 0.5] {
        let l = spectrum_legendre(&x, &zero, &psi, alpha).map_err(|e| e.to_string())?;
        let d = spectrum_direct(&x, &zero, &psi, alpha, 60).map_err(|e| e.to_string())?;
        if (l.value - d).abs() > 1e-3 {
            return fail(format!("alpha={alpha}: legendre {} vs direct {d}", l.value));
        }
    }
    Ok(())
}

fn spectrum_envelope() -> Check {
    let x = full2();
    let phi = depth1(0.2, -0.1);
    let psi = indicator_one();
    let p = transfer_pressure(&x, &phi).map_err(|e| e.to_string())?.value;
    let eq = equilibrium_measure(&x, &phi).map_err(|e| e.to_string())?;
    let alpha_star =
        MeasureRep::from(eq).integrate(&psi).map_err(|e| e.to_string())?;
    let domain = spectrum_domain(&x, &psi).map_err(|e| e.to_string())?;
    let margin = (domain.alpha_max - domain.alpha_min) * 1e-3;
    let mut alphas: Vec<f64> = (0..41)
        .map(|i| {
            domain.alpha_min
                + margin
                + (domain.alpha_max - domain.alpha_min - 2.0 * margin) * i as f64 / 40.0
        })
        .collect();
    alphas.push(alpha_star);
    let mut best = f64::NEG_INFINITY;
    for alpha in alphas {
        let point = spectrum_legendre(&x, &phi, &psi, alpha).map_err(|e| e.to_string())?;
        if point.value > p + 1e-8 {
            return fail(format!("F({alpha}) = {} exceeds pressure {p}", point.value));
        }
        best = best.max(point.value);
    }
    if (best - p).abs() > 1e-6 {
        return fail(format!("grid max {best} vs pressure {p}"));
    }
    Ok(())
}

fn bowen_checks() -> Check {
    let log2 = Potential64::constant(a2(), 2.0_f64.ln());
    let s = bowen_dimension(&full2(), &log2, 1e-12).map_err(|e| e.to_string())?;
    if (s - 1.0).abs() > 1e-10 {
        return fail(format!("full(2) metric log 2 gives dimension {s}"));
    }
    let g = golden();
    let h = entropy(&g).map_err(|e| e.to_string())?.value();
    let s = bowen_dimension(&g, &log2, 1e-12).map_err(|e| e.to_string())?;
    if (s - h / 2.0_f64.ln()).abs() > 1e-8 {
        return fail(format!("golden dimension {s} vs {}", h / 2.0_f64.ln()));
    }
    let psi = indicator_one();
    for alpha in [0.25, 0.5, 0.75] {
        let s = dimension_spectrum(&full2(), &log2, &psi, alpha, 1e-8)
            .map_err(|e| e.to_string())?;
        let target = binary_entropy(alpha) / 2.0_f64.ln();
        if (s - target).abs() > 1e-6 {
            return fail(format!("dimension({alpha}) = {s} vs {target}"));
        }
    }
    Ok(())
}

fn irregular_checks() -> Check {
    let zero = Potential64::zero(a2());
    let psi = indicator_one();
    match irregular_pressure(&full2(), &zero, &psi).map_err(|e| e.to_string())? {
        IrregularOutcome::Value { value, diagnostic } => {
            if (value - 2.0_f64.ln()).abs() > 1e-9 {
                return fail(format!("full(2) irregular value {value}"));
            }
            let last = diagnostic.last().copied().unwrap_or(f64::NEG_INFINITY);
            if last <= value - 1e-3 {
                return fail(format!("diagnostic stalls at {last} vs value {value}"));
            }
        }
        IrregularOutcome::Empty => return fail("full(2) irregular set reported empty"),
    }
    match irregular_pressure(&golden(), &zero, &psi).map_err(|e| e.to_string())? {
        IrregularOutcome::Value { value, .. } => {
            let target = ((1.0 + 5.0_f64.sqrt()) / 2.0).ln();
            if (value - target).abs() > 1e-9 {
                return fail(format!("golden irregular value {value} vs {target}"));
            }
        }
        IrregularOutcome::Empty => return fail("golden irregular set reported empty"),
    }
    let constant = Potential64::constant(a2(), 0.25);
    match irregular_pressure(&full2(), &zero, &constant).map_err(|e| e.to_string())? {
        IrregularOutcome::Empty => Ok(()),
        IrregularOutcome::Value { .. } => fail("constant observable should give empty"),
    }
}

/// Breadth-first search over single edits, an oracle independent of the
/// distance table.
fn bfs_edit_distance(u: &Word, w: &Word, alphabet: usize) -> usize {
    if u == w {
        return 0;
    }
    let cap = u.len().max(w.len()) + 1;
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((u.symbols().to_vec(), 0usize));
    seen.insert(u.symbols().to_vec());
    while let Some((v, d)) = queue.pop_front() {
        let push = |cand: Vec<u8>, seen: &mut std::collections::BTreeSet<Vec<u8>>,
                    queue: &mut VecDeque<(Vec<u8>, usize)>|
         -> bool {
            if cand == w.symbols() {
                return true;
            }
            if cand.len() <= cap && seen.insert(cand.clone()) {
                queue.push_back((cand, d + 1));
            }
            false
        };
        for i in 0..v.len() {
            for c in 0..alphabet as u8 {
                if v[i] != c {
                    let mut cand = v.clone();
                    cand[i] = c;
                    if push(cand, &mut seen, &mut queue) {
                        return d + 1;
                    }
                }
            }
            let mut cand = v.clone();
            cand.remove(i);
            if push(cand, &mut seen, &mut queue) {
                return d + 1;
            }
        }
        for i in 0..=v.len() {
            for c in 0..alphabet as u8 {
                let mut cand = v.clone();
                cand.insert(i, c);
                if push(cand, &mut seen, &mut queue) {
                    return d + 1;
                }
            }
        }
    }
    unreachable!("edit graph is connected");
}

fn edit_metric_axioms(seed: u64) -> Check {
    let mut words = Vec::new();
    for len in 1..=4usize {
        for i in 0..(1u32 << len) {
            let symbols: Vec<u8> = (0..len).map(|k| ((i >> k) & 1) as u8).collect();
            words.push(Word::new(symbols));
        }
    }
    for u in &words {
        for v in &words {
            let duv = edit_distance(u, v);
            if (duv == 0) != (u == v) {
                return fail(format!("identity fails on {u}, {v}"));
            }
            if duv != edit_distance(v, u) {
                return fail(format!("symmetry fails on {u}, {v}"));
            }
            for t in &words {
                if edit_distance(u, t) > duv + edit_distance(v, t) {
                    return fail(format!("triangle fails on {u}, {v}, {t}"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
    for _ in 0..100 {
        let lu = rng.gen_range(1..=5usize);
        let lw = rng.gen_range(1..=5usize);
        let u = Word::new((0..lu).map(|_| rng.gen_range(0..2u8)).collect());
        let w = Word::new((0..lw).map(|_| rng.gen_range(0..2u8)).collect());
        let dp = edit_distance(&u, &w);
        let oracle = bfs_edit_distance(&u, &w, 2);
        if dp != oracle {
            return fail(format!("distance({u}, {w}) table {dp} vs search {oracle}"));
        }
    }
    Ok(())
}

fn ball_bound_constant() -> Check {
    let mut worst: f64 = 1.0;
    for x in [full2(), golden()] {
        for n in [4usize, 6, 8] {
            for delta in [0.1, 0.2] {
                let r = ball_bound_report(&x, n, delta).map_err(|e| e.to_string())?;
                worst = worst.max(r.c_fit);
            }
        }
    }
    if worst > 6.0 {
        return fail(format!("fitted constant {worst} exceeds 6"));
    }
    Ok(())
}

fn katok_counting() -> Check {
    let mu = bernoulli_half();
    for n in 12..=14usize {
        let check = katok_count_check(&full2(), &mu, 0.5, 0.1, n)
            .map_err(|e| e.to_string())?;
        if !check.pass {
            return fail(format!(
                "n={n}: {} good words below threshold {}",
                check.count, check.threshold
            ));
        }
    }
    Ok(())
}

fn moran_tracking(seed: u64) -> Check {
    let itinerary = Itinerary::singleton(bernoulli_half().into(), 3)
        .map_err(|e| e.to_string())?;
    let x = full2();
    let schedule =
        make_schedule(&x, &itinerary, MistakeFunction::from_raw(vec![0]), 0.15, 20_000)
            .map_err(|e| e.to_string())?;
    for stage in &schedule.stages {
        let pool = good_words(
            &x,
            &itinerary.measures()[0],
            stage.eps,
            stage.n,
            itinerary.depth(),
        )
        .map_err(|e| e.to_string())?;
        let rate = (pool.len() as f64).ln() / stage.n as f64;
        if rate < 2.0_f64.ln() - 0.15 {
            return fail(format!("block-choice rate {rate} below entropy defect"));
        }
    }
    let good = GoodSet::new(full2(), GoodRule::WholeLanguage).map_err(|e| e.to_string())?;
    let point =
        generate_point(&x, &itinerary, &schedule, &good, seed).map_err(|e| e.to_string())?;
    for seg in &point.segments {
        if seg.glued_len != seg.n {
            return fail(format!(
                "segment {} glued to {} instead of {}",
                seg.block, seg.glued_len, seg.n
            ));
        }
    }
    let report =
        track_convergence(&point, &itinerary, &schedule, 3).map_err(|e| e.to_string())?;
    let last = report
        .rows
        .last()
        .map(|r| r.distance)
        .ok_or_else(|| "no tracking rows".to_string())?;
    if last > 0.05 {
        return fail(format!("final tracking distance {last}"));
    }
    if report.limit_summary[0] > 0.05 {
        return fail(format!("limit summary {}", report.limit_summary[0]));
    }
    Ok(())
}

fn moran_determinism(seed: u64) -> Check {
    let itinerary = Itinerary::singleton(bernoulli_half().into(), 2)
        .map_err(|e| e.to_string())?;
    let x = full2();
    let schedule =
        make_schedule(&x, &itinerary, MistakeFunction::from_raw(vec![0]), 0.2, 2_000)
            .map_err(|e| e.to_string())?;
    let good = GoodSet::new(full2(), GoodRule::WholeLanguage).map_err(|e| e.to_string())?;
    let a = generate_point(&x, &itinerary, &schedule, &good, seed).map_err(|e| e.to_string())?;
    let b = generate_point(&x, &itinerary, &schedule, &good, seed).map_err(|e| e.to_string())?;
    if a.prefix != b.prefix {
        return fail("same seed produced different prefixes");
    }
    let c = generate_point(&x, &itinerary, &schedule, &good, seed.wrapping_add(1))
        .map_err(|e| e.to_string())?;
    if a.prefix == c.prefix {
        return fail("different seeds produced identical prefixes");
    }
    Ok(())
}

fn config_round_trips(dir: &Path) -> Check {
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();
    let mut seen = 0usize;
    for path in entries {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("?").to_string();
        match ext {
            "json" => {
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| format!("{name}: not JSON: {e}"))?;
                if value.get("kind").is_some() {
                    let cfg = parse_shift_config(&text).map_err(|e| format!("{name}: {e}"))?;
                    build_shift::<f64>(&cfg).map_err(|e| format!("{name}: {e}"))?;
                    let canonical = serialize_shift_config(&cfg);
                    let again = parse_shift_config(&canonical)
                        .map_err(|e| format!("{name}: reparse: {e}"))?;
                    if serialize_shift_config(&again) != canonical {
                        return fail(format!("{name}: canonical form unstable"));
                    }
                } else if value.get("measures").is_some() {
                    parse_itinerary::<f64>(&text).map_err(|e| format!("{name}: {e}"))?;
                } else if value.get("transitions").is_some() {
                    parse_markov_measure::<f64>(&text).map_err(|e| format!("{name}: {e}"))?;
                } else {
                    return fail(format!("{name}: unrecognized JSON config"));
                }
                seen += 1;
            }
            "txt" => {
                parse_potential::<f64>(&text).map_err(|e| format!("{name}: {e}"))?;
                seen += 1;
            }
            _ => {}
        }
    }
    if seen == 0 {
        return fail(format!("no config files found in {}", dir.display()));
    }
    Ok(())
}
