//! Edit (Levenshtein) metric on finite words, balls and their growth
//! bounds, gluing-oriented good sets with specification checks, and the
//! nearest-good-word projection with its empirical mistake function.

use crate::measure::Potential;
use crate::shift::Subshift;
use crate::word::{Symbol, Word};
use crate::{real, Error, Real, Result};

/// Minimum number of single-symbol substitutions, insertions and deletions
/// transforming `v` into `w`.
pub fn edit_distance(v: &Word, w: &Word) -> usize {
    let (a, b) = (v.symbols(), w.symbols());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// All admissible words `v` with `|v| <= |w| + radius` and edit distance at
/// most `radius` from `w`, in length-then-lexicographic order.
pub fn edit_ball<T: Real>(w: &Word, radius: usize, shift: &Subshift<T>) -> Result<Vec<Word>> {
    w.check_alphabet(shift.alphabet())?;
    let mut out = Vec::new();
    for len in 0..=w.len() + radius {
        if w.len().abs_diff(len) > radius {
            continue;
        }
        for v in shift.language(len)? {
            if edit_distance(&v, w) <= radius {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Growth audit of edit balls in `L_n`: the worst ball size against the
/// bound `C n^C (e^{C delta} e^{-delta log delta})^n`, with the least
/// `C >= 1` making the bound hold.
#[derive(Debug, Clone)]
pub struct BallBoundReport<T: Real = f64> {
    pub n: usize,
    pub delta: T,
    pub radius: usize,
    /// Largest ball cardinality over the examined centers.
    pub count: usize,
    /// Number of centers examined (all of `L_n` unless that is huge).
    pub centers: usize,
    /// Bound evaluated at `c_fit`.
    pub bound: T,
    pub c_fit: T,
}

fn ball_bound_value<T: Real>(c: T, n: usize, delta: T) -> T {
    let nt = real::<T>(n as f64);
    // C n^C exp(n (C delta - delta log delta))
    c * nt.powf(c) * ((c * delta - delta * delta.ln()) * nt).exp()
}

pub fn ball_bound_report<T: Real>(
    shift: &Subshift<T>,
    n: usize,
    delta: T,
) -> Result<BallBoundReport<T>> {
    if n == 0 {
        return Err(Error::domain("ball growth audit needs n >= 1"));
    }
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::domain("delta must lie strictly between 0 and 1"));
    }
    let radius = (delta * real::<T>(n as f64))
        .floor()
        .to_usize()
        .ok_or_else(|| Error::numeric("radius computation failed"))?;
    let words = shift.language(n)?;
    // exhaustive when feasible, otherwise a deterministic stride sample
    let max_centers = 1024usize;
    let stride = words.len().div_ceil(max_centers).max(1);
    let mut count = 0usize;
    let mut centers = 0usize;
    for w in words.iter().step_by(stride) {
        centers += 1;
        let ball = edit_ball(w, radius, shift)?;
        count = count.max(ball.len());
    }
    let one = T::one();
    let mut c_fit = one;
    if real::<T>(count as f64) > ball_bound_value(one, n, delta) {
        let mut hi = real::<T>(2.0);
        while real::<T>(count as f64) > ball_bound_value(hi, n, delta) {
            hi = hi * real::<T>(2.0);
            if hi > real::<T>(1e6) {
                return Err(Error::numeric("ball bound constant diverged"));
            }
        }
        let mut lo = one;
        for _ in 0..200 {
            let mid = (lo + hi) * real::<T>(0.5);
            if real::<T>(count as f64) <= ball_bound_value(mid, n, delta) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        c_fit = hi;
    }
    Ok(BallBoundReport {
        n,
        delta,
        radius,
        count,
        centers,
        bound: ball_bound_value(c_fit, n, delta),
        c_fit,
    })
}

/// Membership rule carving a good set out of a shift's language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoodRule {
    /// The whole language.
    WholeLanguage,
    /// Words with the given suffix.
    EndsWith(Word),
    /// Words with the given word as both prefix and suffix (overlap
    /// allowed, so the word itself qualifies).
    BeginsAndEndsWith(Word),
    /// An explicit finite list.
    Explicit(Vec<Word>),
}

/// A subset of a shift's language used as glue targets.
#[derive(Debug, Clone)]
pub struct GoodSet<T: Real = f64> {
    shift: Subshift<T>,
    rule: GoodRule,
}

impl<T: Real> GoodSet<T> {
    pub fn new(shift: Subshift<T>, rule: GoodRule) -> Result<Self> {
        match &rule {
            GoodRule::EndsWith(w) | GoodRule::BeginsAndEndsWith(w) => {
                if w.is_empty() {
                    return Err(Error::domain("good-set marker word must be nonempty"));
                }
                w.check_alphabet(shift.alphabet())?;
            }
            GoodRule::Explicit(list) => {
                for w in list {
                    if !shift.contains(w)? {
                        return Err(Error::domain(format!(
                            "explicit good word {w} is not admissible"
                        )));
                    }
                }
            }
            GoodRule::WholeLanguage => {}
        }
        let rule = match rule {
            GoodRule::Explicit(mut list) => {
                list.sort_by(|a, b| (a.len(), a.symbols()).cmp(&(b.len(), b.symbols())));
                list.dedup();
                GoodRule::Explicit(list)
            }
            other => other,
        };
        Ok(GoodSet { shift, rule })
    }

    pub fn shift(&self) -> &Subshift<T> {
        &self.shift
    }

    pub fn rule(&self) -> &GoodRule {
        &self.rule
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        match &self.rule {
            GoodRule::Explicit(list) => Ok(list.contains(w)),
            rule => {
                if !self.shift.contains(w)? {
                    return Ok(false);
                }
                Ok(match rule {
                    GoodRule::WholeLanguage => true,
                    GoodRule::EndsWith(s) => w.ends_with(s),
                    GoodRule::BeginsAndEndsWith(s) => w.starts_with(s) && w.ends_with(s),
                    GoodRule::Explicit(_) => unreachable!(),
                })
            }
        }
    }

    /// Members of length exactly `n`, lexicographically sorted.
    pub fn members(&self, n: usize) -> Result<Vec<Word>> {
        match &self.rule {
            GoodRule::Explicit(list) => {
                Ok(list.iter().filter(|w| w.len() == n).cloned().collect())
            }
            rule => {
                let mut out = Vec::new();
                for w in self.shift.language(n)? {
                    let keep = match rule {
                        GoodRule::WholeLanguage => true,
                        GoodRule::EndsWith(s) => w.ends_with(s),
                        GoodRule::BeginsAndEndsWith(s) => w.starts_with(s) && w.ends_with(s),
                        GoodRule::Explicit(_) => unreachable!(),
                    };
                    if keep {
                        out.push(w);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Members of length at most `n`, in length-then-lexicographic order.
    pub fn members_up_to(&self, n: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for len in 0..=n {
            out.extend(self.members(len)?);
        }
        Ok(out)
    }
}

/// Outcome of the gap-insertion (specification) check on a good set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WSpecificationReport {
    pub holds: bool,
    /// Largest gap length any successful pair needed.
    pub max_gap: usize,
    pub first_failure: Option<(Word, Word)>,
    pub pairs_checked: usize,
}

/// For every pair `v, w` of members up to `n_max`, search for a connector
/// `u` with `|u| <= tau` such that `v u w` is again a member.
pub fn check_w_specification<T: Real>(
    good: &GoodSet<T>,
    tau: usize,
    n_max: usize,
) -> Result<WSpecificationReport> {
    let members = good.members_up_to(n_max)?;
    let alphabet = good.shift().alphabet();
    let mut connectors: Vec<Word> = vec![Word::empty()];
    for len in 1..=tau {
        for i in 0..alphabet.word_count(len) as usize {
            connectors.push(Word::new(crate::word::unpack(alphabet.size(), len, i)));
        }
    }
    let mut report = WSpecificationReport {
        holds: true,
        max_gap: 0,
        first_failure: None,
        pairs_checked: 0,
    };
    for v in &members {
        for w in &members {
            report.pairs_checked += 1;
            let mut found = None;
            for u in &connectors {
                if good.contains(&v.concat(u).concat(w))? {
                    found = Some(u.len());
                    break;
                }
            }
            match found {
                Some(gap) => report.max_gap = report.max_gap.max(gap),
                None => {
                    report.holds = false;
                    if report.first_failure.is_none() {
                        report.first_failure = Some((v.clone(), w.clone()));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of the free-concatenation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeConcatenationReport {
    pub holds: bool,
    pub counterexample: Option<(Word, Word)>,
    pub pairs_checked: usize,
}

/// Does `u w` stay in the set for every pair of members up to `n_max`?
pub fn check_free_concatenation<T: Real>(
    good: &GoodSet<T>,
    n_max: usize,
) -> Result<FreeConcatenationReport> {
    let members = good.members_up_to(n_max)?;
    let mut pairs_checked = 0usize;
    for u in &members {
        for w in &members {
            pairs_checked += 1;
            if !good.contains(&u.concat(w))? {
                return Ok(FreeConcatenationReport {
                    holds: false,
                    counterexample: Some((u.clone(), w.clone())),
                    pairs_checked,
                });
            }
        }
    }
    Ok(FreeConcatenationReport { holds: true, counterexample: None, pairs_checked })
}

/// Member of the good set closest to `w` in edit distance; ties broken by
/// shorter length, then lexicographic order. Candidates are searched at
/// lengths within `horizon` of `|w|`.
pub fn nearest_in_with_horizon<T: Real>(
    w: &Word,
    good: &GoodSet<T>,
    horizon: usize,
) -> Result<(Word, usize)> {
    // distance zero is attained by w alone, so no search can beat it
    if good.contains(w)? {
        return Ok((w.clone(), 0));
    }
    let mut best: Option<(usize, Word)> = None;
    let mut gap = 0usize;
    while gap <= horizon {
        if let Some((d, _)) = &best {
            // any candidate this far in length differs by at least `gap`
            if *d < gap {
                break;
            }
        }
        let mut lens = Vec::new();
        if gap <= w.len() {
            lens.push(w.len() - gap);
        }
        if gap > 0 {
            lens.push(w.len() + gap);
        }
        for len in lens {
            for v in good.members(len)? {
                let d = edit_distance(&v, w);
                let better = match &best {
                    None => true,
                    Some((bd, bv)) => {
                        (d, v.len(), v.symbols()) < (*bd, bv.len(), bv.symbols())
                    }
                };
                if better {
                    best = Some((d, v));
                }
            }
        }
        gap += 1;
    }
    match best {
        Some((d, v)) => Ok((v, d)),
        None => Err(Error::NotFound(format!(
            "no good word within length window {horizon} of a length-{} word",
            w.len()
        ))),
    }
}

/// [`nearest_in_with_horizon`] with the default horizon `ceil(|w|/2) + 2`.
pub fn nearest_in<T: Real>(w: &Word, good: &GoodSet<T>) -> Result<(Word, usize)> {
    nearest_in_with_horizon(w, good, w.len().div_ceil(2) + 2)
}

/// Worst nearest-good-word distance per word length, forced non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MistakeFunction {
    values: Vec<usize>,
}

impl MistakeFunction {
    pub fn from_raw(mut values: Vec<usize>) -> Self {
        let mut running = 0usize;
        for v in &mut values {
            running = running.max(*v);
            *v = running;
        }
        MistakeFunction { values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `g(n)` for `1 <= n <= n_max`; beyond the table the last value holds.
    pub fn value(&self, n: usize) -> usize {
        if self.values.is_empty() || n == 0 {
            return 0;
        }
        self.values[n.min(self.values.len()) - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `(n, g(n), g(n)/n)` rows.
    pub fn rows(&self) -> Vec<(usize, usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &g)| (i + 1, g, g as f64 / (i + 1) as f64))
            .collect()
    }
}

/// Tabulate `max over w in L_n` of the nearest-good-word distance for
/// `n <= n_max`, then apply the monotone envelope.
pub fn empirical_mistake_function<T: Real>(
    shift: &Subshift<T>,
    good: &GoodSet<T>,
    n_max: usize,
) -> Result<MistakeFunction> {
    let mut raw = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut worst = 0usize;
        for w in shift.language(n)? {
            let (_, d) = nearest_in(&w, good)?;
            worst = worst.max(d);
        }
        raw.push(worst);
    }
    Ok(MistakeFunction::from_raw(raw))
}

/// Project every word onto the good set and concatenate the projections.
/// Returns the glued word and the projected segment lengths.
pub fn glue<T: Real>(words: &[Word], good: &GoodSet<T>) -> Result<(Word, Vec<usize>)> {
    let mut glued = Word::empty();
    let mut lengths = Vec::with_capacity(words.len());
    for w in words {
        let (v, _) = nearest_in(w, good)?;
        lengths.push(v.len());
        glued = glued.concat(&v);
    }
    Ok((glued, lengths))
}

/// Bound on the change of a periodic-extension Birkhoff average under `k`
/// edits: each substitution disturbs `r` windows and each length change
/// additionally shifts the normalization, giving `2 k (r + 1) M / l` with
/// `M` the sup norm and `l` the shorter length.
pub fn birkhoff_continuity_bound<T: Real>(k: usize, depth: usize, sup_norm: T, min_len: usize) -> T {
    if min_len == 0 {
        return T::infinity();
    }
    real::<T>((2 * k * (depth + 1)) as f64) * sup_norm / real::<T>(min_len as f64)
}

/// Periodic-extension Birkhoff average of `phi` over one full period of `w`.
pub fn periodic_birkhoff_average<T: Real>(phi: &Potential<T>, w: &Word) -> Result<T> {
    if w.is_empty() {
        return Err(Error::domain("Birkhoff average needs a nonempty word"));
    }
    w.check_alphabet(phi.alphabet())?;
    let n = w.len();
    let syms = w.symbols();
    let mut window: Vec<Symbol> = Vec::with_capacity(phi.depth());
    let mut sum = T::zero();
    for i in 0..n {
        window.clear();
        for j in 0..phi.depth() {
            window.push(syms[(i + j) % n]);
        }
        sum = sum + phi.value(&window);
    }
    Ok(sum / real::<T>(n as f64))
}

/// Analogous bound for the weak-star distance of periodic-extension
/// empirical measures: depth-`d` cylinder masses move by at most
/// `2 k (d + 2) / l` in total variation, and the indicator family weights
/// each depth block geometrically.
pub fn weak_star_continuity_bound<T: Real>(k: usize, min_len: usize, p: usize) -> T {
    if min_len == 0 {
        return T::infinity();
    }
    let two = real::<T>(2.0);
    let mut bound = T::zero();
    let mut first_index_weight = real::<T>(0.5); // weight of the first depth-d cylinder
    for d in 1usize..64 {
        let tv = (real::<T>((2 * k * (d + 2)) as f64) / real::<T>(min_len as f64)).min(two);
        let term = first_index_weight * tv;
        bound = bound + term;
        if term < real::<T>(1e-18) {
            break;
        }
        // skip the p^d indices of this depth block
        let block = real::<T>(0.5).powi(p.pow(d.min(30) as u32).min(1_000_000) as i32);
        first_index_weight = first_index_weight * block;
        if first_index_weight == T::zero() {
            break;
        }
    }
    bound
}
