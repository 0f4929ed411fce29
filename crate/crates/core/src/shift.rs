//! One-sided subshifts: full shifts, shifts of finite type, beta-shifts and
//! gap shifts, all presented through their languages of finite words.
//!
//! Admissibility of a word is decided incrementally by a per-kind stepper
//! (a deterministic automaton state plus a transition function). The same
//! stepper drives `contains`, depth-first language enumeration, and the
//! dynamic programs used for exact word counts, so the different views of a
//! shift cannot drift apart.

use crate::word::{Alphabet, Symbol, Word};
use crate::{real, Error, Real, Result};
use std::collections::BTreeSet;

/// Default cap on explicitly enumerated words.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Gap-length set for gap shifts.
///
/// A binary word with at least one `1` is admissible when every maximal run
/// of `0`s strictly between two `1`s has length in the set, and each
/// boundary run is at most some element of the set. All-zero words are
/// always admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapSet {
    /// Explicit finite set.
    Finite(BTreeSet<usize>),
    /// `{start, start+step, start+2*step, ...}`.
    Arithmetic { start: usize, step: usize },
    /// All naturals except the listed ones.
    Cofinite { excluded: BTreeSet<usize> },
}

impl GapSet {
    pub fn finite(values: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = values.into_iter().collect();
        if set.is_empty() {
            return Err(Error::domain("finite gap set may not be empty"));
        }
        Ok(GapSet::Finite(set))
    }

    pub fn all_naturals() -> Self {
        GapSet::Cofinite { excluded: BTreeSet::new() }
    }

    pub fn contains(&self, n: usize) -> bool {
        match self {
            GapSet::Finite(s) => s.contains(&n),
            GapSet::Arithmetic { start, step } => n >= *start && (n - start) % step == 0,
            GapSet::Cofinite { excluded } => !excluded.contains(&n),
        }
    }

    /// Is some element of the set `>= a`? Decides boundary-run admissibility.
    pub fn admits_run(&self, a: usize) -> bool {
        match self {
            GapSet::Finite(s) => s.iter().next_back().is_some_and(|&mx| mx >= a),
            _ => true,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        !matches!(self, GapSet::Finite(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GapSet::Finite(s) if s.is_empty() => Err(Error::domain("finite gap set may not be empty")),
            GapSet::Arithmetic { step, .. } if *step == 0 => {
                Err(Error::domain("arithmetic gap set needs step >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// Forbidden-word presentation of a shift of finite type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftSpec {
    forbidden: Vec<Word>,
}

impl SftSpec {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self> {
        let mut list = Vec::with_capacity(forbidden.len());
        for w in forbidden {
            if w.is_empty() {
                return Err(Error::domain("forbidding the empty word would empty the language"));
            }
            w.check_alphabet(alphabet)?;
            list.push(w);
        }
        list.sort();
        list.dedup();
        Ok(SftSpec { forbidden: list })
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn max_forbidden_len(&self) -> usize {
        self.forbidden.iter().map(Word::len).max().unwrap_or(0)
    }
}

/// Quasi-greedy digit stream of a beta-expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct QuasiGreedy {
    digits: Vec<Symbol>,
    /// When set, `digits` is one full period and the stream repeats forever.
    periodic: bool,
}

impl QuasiGreedy {
    pub(crate) fn digit(&self, i: usize) -> Option<Symbol> {
        if self.periodic {
            Some(self.digits[i % self.digits.len()])
        } else {
            self.digits.get(i).copied()
        }
    }

    pub(crate) fn period(&self) -> Option<usize> {
        self.periodic.then_some(self.digits.len())
    }

    pub(crate) fn available(&self) -> Option<usize> {
        if self.periodic {
            None
        } else {
            Some(self.digits.len())
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BetaSpec<T: Real> {
    pub beta: T,
    pub qg: QuasiGreedy,
    pub guard_flags: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) enum ShiftKind<T: Real> {
    Full,
    Sft(SftSpec),
    Beta(BetaSpec<T>),
    SGap(GapSet),
}

/// A one-sided subshift over `{0, .., p-1}`.
#[derive(Debug, Clone)]
pub struct Subshift<T: Real = f64> {
    alphabet: Alphabet,
    kind: ShiftKind<T>,
    budget: usize,
}

/// Result of running the greedy digit recursion for a base `beta > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaExpansion {
    /// First `k` digits of the (clamped) greedy expansion of 1.
    pub greedy: Word,
    /// Full period of the quasi-greedy expansion, when the greedy recursion
    /// terminates; otherwise the two expansions agree.
    pub quasi_greedy_period: Option<Word>,
    /// Digit positions where the remainder came within the guard of an
    /// integer and was snapped.
    pub guard_flags: Vec<usize>,
}

/// Greedy expansion of 1 in base `beta`: `w_j = floor(beta * r_{j-1})`
/// clamped to the top digit, `r_j = beta * r_{j-1} - w_j`, starting from
/// `r_0 = 1`. Remainders within `guard` of an integer are snapped and the
/// position recorded.
pub fn beta_expansion_guarded<T: Real>(beta: T, k: usize, guard: T) -> Result<BetaExpansion> {
    if !(beta > T::one()) {
        return Err(Error::domain(format!("beta must exceed 1, got {beta}")));
    }
    if !beta.is_finite() {
        return Err(Error::domain("beta must be finite"));
    }
    let top: T = beta.ceil() - T::one();
    let top_digit = top.to_u8().ok_or_else(|| Error::domain("alphabet of beta too large"))?;
    if top_digit >= 10 {
        return Err(Error::domain("beta-shift alphabet capped at 10 symbols"));
    }
    let mut digits: Vec<Symbol> = Vec::with_capacity(k);
    let mut flags = Vec::new();
    let mut r = T::one();
    let mut terminated = false;
    for j in 0..k {
        let y = beta * r;
        let near = y.round();
        let snapped = (y - near).abs() <= guard;
        let mut d = if snapped { near } else { y.floor() };
        if d > top {
            d = top;
        }
        if d < T::zero() {
            d = T::zero();
        }
        let mut rem = y - d;
        if rem.abs() <= guard && (snapped || rem < T::zero()) {
            rem = T::zero();
        }
        if snapped {
            flags.push(j);
        }
        digits.push(d.to_u8().expect("digit fits in u8"));
        r = rem;
        if r == T::zero() {
            terminated = true;
            digits.resize(k, 0);
            break;
        }
    }
    let quasi = if terminated {
        // drop trailing zeros to the last nonzero digit, then decrement it
        let last = digits.iter().rposition(|&d| d > 0).expect("expansion starts with a nonzero digit");
        let mut period = digits[..=last].to_vec();
        period[last] -= 1;
        Some(Word::new(period))
    } else {
        None
    };
    Ok(BetaExpansion { greedy: Word::new(digits), quasi_greedy_period: quasi, guard_flags: flags })
}

/// [`beta_expansion_guarded`] with the default guard `1e-9`.
pub fn beta_expansion<T: Real>(beta: T, k: usize) -> Result<BetaExpansion> {
    beta_expansion_guarded(beta, k, real::<T>(1e-9))
}

impl<T: Real> Subshift<T> {
    pub fn full(p: usize) -> Result<Self> {
        Ok(Subshift { alphabet: Alphabet::new(p)?, kind: ShiftKind::Full, budget: DEFAULT_BUDGET })
    }

    pub fn sft(p: usize, forbidden: Vec<Word>) -> Result<Self> {
        let alphabet = Alphabet::new(p)?;
        let spec = SftSpec::new(alphabet, forbidden)?;
        Ok(Subshift { alphabet, kind: ShiftKind::Sft(spec), budget: DEFAULT_BUDGET })
    }

    pub fn sft_from_spec(alphabet: Alphabet, spec: SftSpec) -> Self {
        Subshift { alphabet, kind: ShiftKind::Sft(spec), budget: DEFAULT_BUDGET }
    }

    /// Beta-shift with quasi-greedy digits precomputed to depth 4096 and
    /// guard `1e-9`. Words longer than the precomputed depth can only be
    /// tested when the expansion turned out periodic; use [`Subshift::beta_with`]
    /// to raise the depth otherwise.
    pub fn beta(beta: T) -> Result<Self> {
        Self::beta_with(beta, 4096, real::<T>(1e-9))
    }

    pub fn beta_with(beta: T, depth: usize, guard: T) -> Result<Self> {
        let exp = beta_expansion_guarded(beta, depth.max(2), guard)?;
        let qg = match &exp.quasi_greedy_period {
            Some(p) => QuasiGreedy { digits: p.symbols().to_vec(), periodic: true },
            None => QuasiGreedy { digits: exp.greedy.symbols().to_vec(), periodic: false },
        };
        let p = beta.ceil().to_usize().ok_or_else(|| Error::domain("beta too large"))?;
        Ok(Subshift {
            alphabet: Alphabet::new(p)?,
            kind: ShiftKind::Beta(BetaSpec { beta, qg, guard_flags: exp.guard_flags }),
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn sgap(gaps: GapSet) -> Result<Self> {
        gaps.validate()?;
        Ok(Subshift { alphabet: Alphabet::new(2)?, kind: ShiftKind::SGap(gaps), budget: DEFAULT_BUDGET })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_full(&self) -> bool {
        matches!(self.kind, ShiftKind::Full)
    }

    pub fn sft_spec(&self) -> Option<&SftSpec> {
        match &self.kind {
            ShiftKind::Sft(s) => Some(s),
            _ => None,
        }
    }

    pub fn beta_value(&self) -> Option<T> {
        match &self.kind {
            ShiftKind::Beta(b) => Some(b.beta),
            _ => None,
        }
    }

    pub fn beta_guard_flags(&self) -> Option<&[usize]> {
        match &self.kind {
            ShiftKind::Beta(b) => Some(&b.guard_flags),
            _ => None,
        }
    }

    pub fn gap_set(&self) -> Option<&GapSet> {
        match &self.kind {
            ShiftKind::SGap(g) => Some(g),
            _ => None,
        }
    }

    /// Period length of the quasi-greedy expansion when this is a
    /// beta-shift with an eventually periodic expansion.
    pub fn beta_quasi_greedy_period(&self) -> Option<usize> {
        match &self.kind {
            ShiftKind::Beta(b) => b.qg.period(),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ShiftKind::Full => format!("full shift on {} symbols", self.alphabet.size()),
            ShiftKind::Sft(s) => format!(
                "SFT on {} symbols forbidding {{{}}}",
                self.alphabet.size(),
                s.forbidden.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
            ),
            ShiftKind::Beta(b) => format!("beta-shift with beta = {}", b.beta),
            ShiftKind::SGap(g) => format!("gap shift with gaps {g:?}"),
        }
    }

    /// Is the word a factor of some point of the shift?
    pub fn contains(&self, w: &Word) -> Result<bool> {
        w.check_alphabet(self.alphabet)?;
        let stepper = self.stepper(w.len())?;
        let mut state = stepper.start();
        for &c in w.symbols() {
            match stepper.step(&state, c) {
                Some(next) => state = next,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// All admissible words of length exactly `n`, lexicographically sorted.
    pub fn language(&self, n: usize) -> Result<Vec<Word>> {
        let stepper = self.stepper(n)?;
        let mut out = Vec::new();
        let mut visited: usize = 0;
        // iterative DFS carrying (state, word-so-far)
        let mut stack: Vec<(StepState, Word)> = vec![(stepper.start(), Word::empty())];
        while let Some((state, word)) = stack.pop() {
            visited += 1;
            if visited > self.budget {
                return Err(Error::resource(
                    format!("enumerating words of length {n}"),
                    self.budget as u64,
                ));
            }
            if word.len() == n {
                out.push(word);
                continue;
            }
            // push symbols in reverse so the stack pops them in order
            for c in (0..self.alphabet.size() as Symbol).rev() {
                if let Some(next) = stepper.step(&state, c) {
                    let mut w = word.clone();
                    w.push(c);
                    stack.push((next, w));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Exact `|L_n|` via dynamic programming over stepper states; does not
    /// enumerate words and is unaffected by the enumeration budget.
    pub fn language_count(&self, n: usize) -> Result<u128> {
        let stepper = self.stepper(n)?;
        let mut layer: std::collections::BTreeMap<StepState, u128> = std::collections::BTreeMap::new();
        layer.insert(stepper.start(), 1);
        for _ in 0..n {
            let mut next: std::collections::BTreeMap<StepState, u128> = std::collections::BTreeMap::new();
            for (state, count) in &layer {
                for c in 0..self.alphabet.size() as Symbol {
                    if let Some(ns) = stepper.step(state, c) {
                        let slot = next.entry(ns).or_insert(0);
                        *slot = slot.checked_add(*count).ok_or_else(|| {
                            Error::numeric("word count overflowed u128")
                        })?;
                    }
                }
            }
            layer = next;
        }
        let mut total: u128 = 0;
        for v in layer.values() {
            total = total.checked_add(*v).ok_or_else(|| Error::numeric("word count overflowed u128"))?;
        }
        Ok(total)
    }

    /// A shift of finite type whose language is contained in this shift's,
    /// growing towards it as `m` increases.
    ///
    /// For a beta-shift with periodic quasi-greedy expansion of period at
    /// most `m` the approximation is exact. Otherwise the first `m`
    /// quasi-greedy digits are truncated at the last nonzero position, that
    /// digit is decremented, and the resulting periodic word generates the
    /// approximating shift. For a gap shift the gap set is truncated to
    /// `[0, m]` and runs longer than the truncated maximum are forbidden on
    /// both sides of a `1`.
    pub fn inner_sft_approximation(&self, m: usize) -> Result<Subshift<T>> {
        if m == 0 {
            return Err(Error::domain("approximation depth must be at least 1"));
        }
        match &self.kind {
            ShiftKind::Full => Subshift::sft(self.alphabet.size(), Vec::new()),
            ShiftKind::Sft(s) => Ok(Subshift::sft_from_spec(self.alphabet, s.clone()).with_budget(self.budget)),
            ShiftKind::Beta(b) => {
                let period: Vec<Symbol> = match b.qg.period() {
                    Some(len) if len <= m => (0..len).map(|i| b.qg.digit(i).unwrap()).collect(),
                    _ => {
                        let mut prefix = Vec::with_capacity(m);
                        for i in 0..m {
                            prefix.push(b.qg.digit(i).ok_or_else(|| {
                                Error::domain(format!(
                                    "quasi-greedy expansion only computed to depth {}; rebuild the shift with a larger depth",
                                    b.qg.available().unwrap_or(0)
                                ))
                            })?);
                        }
                        decremented_period(&prefix)?
                    }
                };
                let forbidden = forbidden_from_dominating_period(&period, self.alphabet);
                Ok(Subshift::sft(self.alphabet.size(), forbidden)?.with_budget(self.budget))
            }
            ShiftKind::SGap(g) => {
                let truncated: BTreeSet<usize> = (0..=m).filter(|&a| g.contains(a)).collect();
                let forbidden = match truncated.iter().next_back() {
                    None => vec![Word::new(vec![1])],
                    Some(&mx) => {
                        let mut list = Vec::new();
                        for a in 0..=mx {
                            if !truncated.contains(&a) {
                                // 1 0^a 1
                                let mut v = vec![1];
                                v.extend(std::iter::repeat(0).take(a));
                                v.push(1);
                                list.push(Word::new(v));
                            }
                        }
                        let mut long = vec![1];
                        long.extend(std::iter::repeat(0).take(mx + 1));
                        list.push(Word::new(long));
                        let mut lead = vec![0; mx + 1];
                        lead.push(1);
                        list.push(Word::new(lead));
                        list
                    }
                };
                Ok(Subshift::sft(2, forbidden)?.with_budget(self.budget))
            }
        }
    }

    /// Memory-`M` graph presentation: states are the admissible words of
    /// length `M`, edges append one symbol and shift the window.
    ///
    /// Only available for full shifts and shifts of finite type; approximate
    /// other kinds through [`Subshift::inner_sft_approximation`] first.
    pub fn sft_graph(&self, min_memory: usize) -> Result<SftGraph> {
        let forbidden: &[Word] = match &self.kind {
            ShiftKind::Full => &[],
            ShiftKind::Sft(s) => s.forbidden(),
            _ => {
                return Err(Error::domain(
                    "graph presentation needs a finite-type shift; use inner_sft_approximation first",
                ))
            }
        };
        let max_len = forbidden.iter().map(Word::len).max().unwrap_or(0);
        let memory = min_memory.max(1).max(max_len.saturating_sub(1));
        let states = self.language(memory)?;
        let index: std::collections::BTreeMap<&Word, usize> =
            states.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges: Vec<Vec<(usize, Symbol)>> = vec![Vec::new(); states.len()];
        for (i, u) in states.iter().enumerate() {
            'next_symbol: for c in 0..self.alphabet.size() as Symbol {
                let mut w = u.clone();
                w.push(c);
                for f in forbidden {
                    if f.len() <= w.len() && w.ends_with(f) {
                        continue 'next_symbol;
                    }
                }
                let v = w.factor(1, memory);
                if let Some(&j) = index.get(&v) {
                    edges[i].push((j, c));
                }
            }
        }
        Ok(SftGraph { memory, states, edges })
    }

    pub(crate) fn stepper(&self, max_len: usize) -> Result<Stepper<'_, T>> {
        let beta_tables = match &self.kind {
            ShiftKind::Beta(b) => {
                let need = max_len + 1;
                let mut q = Vec::with_capacity(need);
                for i in 0..need {
                    q.push(b.qg.digit(i).ok_or_else(|| {
                        Error::domain(format!(
                            "word length {max_len} exceeds precomputed quasi-greedy depth {}; rebuild the shift with a larger depth",
                            b.qg.available().unwrap_or(0)
                        ))
                    })?);
                }
                // prefix-function over q, fail[i] = longest proper border of q[..i]
                let mut fail = vec![0usize; need + 1];
                let mut k = 0usize;
                for i in 1..need {
                    while k > 0 && q[i] != q[k] {
                        k = fail[k];
                    }
                    if q[i] == q[k] {
                        k += 1;
                    }
                    fail[i + 1] = k;
                }
                Some((q, fail))
            }
            _ => None,
        };
        Ok(Stepper { shift: self, beta_tables })
    }
}

/// Largest self-dominating decrement of a truncated quasi-greedy prefix.
fn decremented_period(prefix: &[Symbol]) -> Result<Vec<Symbol>> {
    let mut j = match prefix.iter().rposition(|&d| d > 0) {
        Some(j) => j,
        None => return Err(Error::Construction("quasi-greedy prefix has no nonzero digit".into())),
    };
    loop {
        let mut w = prefix[..=j].to_vec();
        w[j] -= 1;
        if self_dominating(&w) {
            return Ok(w);
        }
        match prefix[..j].iter().rposition(|&d| d > 0) {
            Some(next) => j = next,
            None => return Err(Error::Construction("no self-dominating truncation exists".into())),
        }
    }
}

/// Does every shift of the periodic stream `u^inf` stay lexicographically
/// at or below the stream itself?
fn self_dominating(u: &[Symbol]) -> bool {
    let n = u.len();
    for i in 1..n {
        for j in 0..2 * n {
            let a = u[(i + j) % n];
            let b = u[j % n];
            if a > b {
                return false;
            }
            if a < b {
                break;
            }
        }
    }
    true
}

/// Minimal forbidden words of `{x : every shift of x <= u^inf}` for a
/// self-dominating period `u`: prefixes of `u` with the next digit bumped.
fn forbidden_from_dominating_period(u: &[Symbol], alphabet: Alphabet) -> Vec<Word> {
    let mut out = Vec::new();
    for k in 0..u.len() {
        for c in (u[k] + 1)..alphabet.size() as Symbol {
            let mut w = u[..k].to_vec();
            w.push(c);
            out.push(Word::new(w));
        }
    }
    out
}

/// Graph presentation of a shift of finite type.
#[derive(Debug, Clone)]
pub struct SftGraph {
    pub memory: usize,
    pub states: Vec<Word>,
    /// `edges[i]` lists `(target state, emitted symbol)` sorted by symbol.
    pub edges: Vec<Vec<(usize, Symbol)>>,
}

impl SftGraph {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

/// Automaton state of an admissibility walk.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum StepState {
    Unit,
    /// Last `min(len, memory)` symbols read.
    Suffix(Vec<Symbol>),
    /// Gap-shift phase: has a `1` been read, and how long is the current run
    /// of `0`s?
    Gap { seen_one: bool, run: u32 },
    /// Length of the longest suffix matching a quasi-greedy prefix.
    Kmp(usize),
}

pub(crate) struct Stepper<'a, T: Real> {
    shift: &'a Subshift<T>,
    /// `(digits, prefix-function)` for beta-shifts.
    beta_tables: Option<(Vec<Symbol>, Vec<usize>)>,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub(crate) fn start(&self) -> StepState {
        match &self.shift.kind {
            ShiftKind::Full => StepState::Unit,
            ShiftKind::Sft(_) => StepState::Suffix(Vec::new()),
            ShiftKind::Beta(_) => StepState::Kmp(0),
            ShiftKind::SGap(_) => StepState::Gap { seen_one: false, run: 0 },
        }
    }

    /// `None` when appending `c` makes the word inadmissible.
    pub(crate) fn step(&self, state: &StepState, c: Symbol) -> Option<StepState> {
        match (&self.shift.kind, state) {
            (ShiftKind::Full, StepState::Unit) => Some(StepState::Unit),
            (ShiftKind::Sft(spec), StepState::Suffix(v)) => {
                let memory = spec.max_forbidden_len().saturating_sub(1);
                let mut w = v.clone();
                w.push(c);
                for f in spec.forbidden() {
                    if f.len() <= w.len() && w.ends_with(f.symbols()) {
                        return None;
                    }
                }
                if w.len() > memory {
                    w.remove(0);
                }
                Some(StepState::Suffix(w))
            }
            (ShiftKind::Beta(_), StepState::Kmp(s)) => {
                let (q, fail) = self.beta_tables.as_ref().expect("beta tables prepared");
                let s = *s;
                if c > q[s] {
                    return None;
                }
                if c == q[s] {
                    return Some(StepState::Kmp(s + 1));
                }
                // c < q[s]: walk the prefix function for the new longest match
                let mut k = fail[s];
                loop {
                    if c == q[k] {
                        return Some(StepState::Kmp(k + 1));
                    }
                    if k == 0 {
                        // c < q[s] <= q[0] because the stream dominates its shifts
                        return Some(StepState::Kmp(0));
                    }
                    k = fail[k];
                }
            }
            (ShiftKind::SGap(g), StepState::Gap { seen_one, run }) => {
                if c == 0 {
                    let next = run + 1;
                    if *seen_one && !g.admits_run(next as usize) {
                        return None;
                    }
                    Some(StepState::Gap { seen_one: *seen_one, run: next })
                } else {
                    let ok = if *seen_one {
                        g.contains(*run as usize)
                    } else {
                        g.admits_run(*run as usize)
                    };
                    ok.then_some(StepState::Gap { seen_one: true, run: 0 })
                }
            }
            _ => unreachable!("stepper state does not match shift kind"),
        }
    }
}
