//! Measures and observables on subshifts: locally constant potentials,
//! Markov measures with verified stationary vectors, cylinder frequency
//! tables (empirical measures, mixtures), and a weak-star distance built
//! from cylinder indicator functions.

use crate::word::{pack, unpack, Alphabet, Symbol, Word};
use crate::{real, Error, Real, Result};
use std::collections::BTreeMap;

/// Numeric tolerance scaled so `f32` instantiations stay usable.
pub(crate) fn scaled_tol<T: Real>(base: f64) -> T {
    real::<T>(base).max(T::epsilon() * real::<T>(64.0))
}

fn table_len(alphabet: Alphabet, depth: usize) -> Result<usize> {
    let n = alphabet.word_count(depth);
    if n > 100_000_000 {
        return Err(Error::resource(
            format!("dense table over {}-symbol words of length {depth}", alphabet.size()),
            100_000_000,
        ));
    }
    Ok(n as usize)
}

/// A locally constant function of finite depth `r`: its value at a point
/// depends only on the first `r` symbols, stored as a dense table over all
/// length-`r` words. Entries never supplied by the caller default to zero
/// and are tracked so coverage of a shift's language can be audited.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T: Real = f64> {
    alphabet: Alphabet,
    depth: usize,
    values: Vec<T>,
    provided: Vec<bool>,
}

impl<T: Real> Potential<T> {
    pub fn constant(alphabet: Alphabet, value: T) -> Self {
        let p = alphabet.size();
        Potential { alphabet, depth: 1, values: vec![value; p], provided: vec![true; p] }
    }

    pub fn zero(alphabet: Alphabet) -> Self {
        Self::constant(alphabet, T::zero())
    }

    /// Indicator of the cylinder `[w]`, a depth-`|w|` potential.
    pub fn indicator(alphabet: Alphabet, w: &Word) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::domain("cylinder indicator needs a nonempty word"));
        }
        w.check_alphabet(alphabet)?;
        let size = table_len(alphabet, w.len())?;
        let mut values = vec![T::zero(); size];
        values[pack(alphabet.size(), w.symbols())] = T::one();
        Ok(Potential { alphabet, depth: w.len(), values, provided: vec![true; size] })
    }

    pub fn from_entries(
        alphabet: Alphabet,
        depth: usize,
        entries: impl IntoIterator<Item = (Word, T)>,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::domain("potential depth must be at least 1"));
        }
        let size = table_len(alphabet, depth)?;
        let mut values = vec![T::zero(); size];
        let mut provided = vec![false; size];
        for (w, v) in entries {
            if w.len() != depth {
                return Err(Error::domain(format!(
                    "potential entry {w} has length {}, expected {depth}",
                    w.len()
                )));
            }
            w.check_alphabet(alphabet)?;
            if !v.is_finite() {
                return Err(Error::domain(format!("potential entry {w} is not finite")));
            }
            let idx = pack(alphabet.size(), w.symbols());
            if provided[idx] {
                return Err(Error::domain(format!("duplicate potential entry for {w}")));
            }
            values[idx] = v;
            provided[idx] = true;
        }
        Ok(Potential { alphabet, depth, values, provided })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Value on the cylinder determined by the first `depth` symbols of
    /// `window`. Panics when the window is shorter than the depth.
    pub fn value(&self, window: &[Symbol]) -> T {
        assert!(window.len() >= self.depth, "window shorter than potential depth");
        self.values[pack(self.alphabet.size(), &window[..self.depth])]
    }

    pub fn entry(&self, w: &Word) -> Result<T> {
        if w.len() != self.depth {
            return Err(Error::domain(format!(
                "word {w} has length {}, potential depth is {}",
                w.len(),
                self.depth
            )));
        }
        w.check_alphabet(self.alphabet)?;
        Ok(self.values[pack(self.alphabet.size(), w.symbols())])
    }

    pub fn is_provided(&self, w: &Word) -> Result<bool> {
        if w.len() != self.depth {
            return Err(Error::domain("coverage query needs a word of the potential's depth"));
        }
        w.check_alphabet(self.alphabet)?;
        Ok(self.provided[pack(self.alphabet.size(), w.symbols())])
    }

    /// All `(word, value, provided)` rows in lexicographic order.
    pub fn rows(&self) -> Vec<(Word, T, bool)> {
        let p = self.alphabet.size();
        (0..self.values.len())
            .map(|i| (Word::new(unpack(p, self.depth, i)), self.values[i], self.provided[i]))
            .collect()
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Smallest explicitly provided value.
    pub fn min_provided(&self) -> Option<T> {
        let mut out: Option<T> = None;
        for (v, p) in self.values.iter().zip(&self.provided) {
            if *p {
                out = Some(match out {
                    None => *v,
                    Some(m) => m.min(*v),
                });
            }
        }
        out
    }

    /// Exact Birkhoff sum over the first `n` windows of `x`; needs
    /// `|x| >= n + depth - 1`.
    pub fn birkhoff_sum(&self, x: &SequencePrefix, n: usize) -> Result<T> {
        if x.alphabet() != self.alphabet {
            return Err(Error::domain("potential and sequence use different alphabets"));
        }
        let need = n + self.depth - 1;
        if x.len() < need {
            return Err(Error::domain(format!(
                "sequence of length {} too short for {n} windows of depth {}; need {need}",
                x.len(),
                self.depth
            )));
        }
        let mut sum = T::zero();
        for i in 0..n {
            sum = sum + self.value(&x.symbols()[i..i + self.depth]);
        }
        Ok(sum)
    }

    pub fn birkhoff_average(&self, x: &SequencePrefix, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::domain("Birkhoff average needs n >= 1"));
        }
        Ok(self.birkhoff_sum(x, n)? / real::<T>(n as f64))
    }

    /// Same function expressed at a larger depth.
    pub fn lifted(&self, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::domain("cannot lower the depth of a potential"));
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        let size = table_len(self.alphabet, depth)?;
        let stride = size / self.values.len();
        let mut values = vec![T::zero(); size];
        let mut provided = vec![false; size];
        for i in 0..size {
            values[i] = self.values[i / stride];
            provided[i] = self.provided[i / stride];
        }
        Ok(Potential { alphabet: self.alphabet, depth, values, provided })
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = *v * c;
        }
        out
    }

    /// `ca * a + cb * b`, lifted to the larger depth. An entry counts as
    /// provided only when both inputs provided it.
    pub fn linear_combination(a: &Self, ca: T, b: &Self, cb: T) -> Result<Self> {
        if a.alphabet != b.alphabet {
            return Err(Error::domain("potentials use different alphabets"));
        }
        let depth = a.depth.max(b.depth);
        let la = a.lifted(depth)?;
        let lb = b.lifted(depth)?;
        let values: Vec<T> =
            la.values.iter().zip(&lb.values).map(|(x, y)| ca * *x + cb * *y).collect();
        let provided: Vec<bool> =
            la.provided.iter().zip(&lb.provided).map(|(x, y)| *x && *y).collect();
        Ok(Potential { alphabet: a.alphabet, depth, values, provided })
    }
}

/// A finite prefix of a point of the shift, the raw material for empirical
/// measures and Birkhoff sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePrefix {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl SequencePrefix {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        for &c in &symbols {
            if !alphabet.contains(c) {
                return Err(Error::domain(format!(
                    "symbol {c} outside alphabet of size {}",
                    alphabet.size()
                )));
            }
        }
        Ok(SequencePrefix { alphabet, symbols })
    }

    pub fn from_word(alphabet: Alphabet, w: &Word) -> Result<Self> {
        Self::new(alphabet, w.symbols().to_vec())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn push(&mut self, c: Symbol) -> Result<()> {
        if !self.alphabet.contains(c) {
            return Err(Error::domain(format!(
                "symbol {c} outside alphabet of size {}",
                self.alphabet.size()
            )));
        }
        self.symbols.push(c);
        Ok(())
    }

    pub fn extend_from_word(&mut self, w: &Word) -> Result<()> {
        w.check_alphabet(self.alphabet)?;
        self.symbols.extend_from_slice(w.symbols());
        Ok(())
    }

    pub fn prefix_word(&self, n: usize) -> Word {
        Word::new(self.symbols[..n.min(self.symbols.len())].to_vec())
    }
}

/// Stationary Markov measure with states the admissible words of a fixed
/// memory length. Rows are checked stochastic and the stationary vector is
/// recomputed and verified on construction.
#[derive(Debug, Clone)]
pub struct MarkovMeasure<T: Real = f64> {
    alphabet: Alphabet,
    memory: usize,
    states: Vec<Word>,
    index: BTreeMap<Word, usize>,
    rows: Vec<Vec<T>>,
    stationary: Vec<T>,
}

impl<T: Real> MarkovMeasure<T> {
    pub fn new(alphabet: Alphabet, states: Vec<Word>, rows: Vec<Vec<T>>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::domain("Markov measure needs at least one state"));
        }
        let memory = states[0].len();
        if memory == 0 {
            return Err(Error::domain("Markov states must be nonempty words"));
        }
        for s in &states {
            if s.len() != memory {
                return Err(Error::domain("all Markov states must share one length"));
            }
            s.check_alphabet(alphabet)?;
        }
        if rows.len() != states.len() || rows.iter().any(|r| r.len() != states.len()) {
            return Err(Error::domain("transition matrix shape does not match the state list"));
        }
        // canonical order: sort states, permute the matrix to match
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]));
        let sorted_states: Vec<Word> = order.iter().map(|&i| states[i].clone()).collect();
        if sorted_states.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate Markov state"));
        }
        let sorted_rows: Vec<Vec<T>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| rows[i][j]).collect())
            .collect();
        let row_tol = scaled_tol::<T>(1e-12);
        for (i, row) in sorted_rows.iter().enumerate() {
            let mut sum = T::zero();
            for (j, &pij) in row.iter().enumerate() {
                if !pij.is_finite() || pij < -row_tol {
                    return Err(Error::domain(format!(
                        "transition probability out of range at ({}, {})",
                        sorted_states[i], sorted_states[j]
                    )));
                }
                if pij > row_tol && memory > 1 {
                    let u = &sorted_states[i];
                    let v = &sorted_states[j];
                    if u.factor(1, memory - 1) != v.factor(0, memory - 1) {
                        return Err(Error::domain(format!(
                            "transition {u} -> {v} ignores the overlap structure"
                        )));
                    }
                }
                sum = sum + pij;
            }
            if (sum - T::one()).abs() > row_tol {
                return Err(Error::domain(format!(
                    "row for state {} sums to {sum}, not 1",
                    sorted_states[i]
                )));
            }
        }
        let stationary = stationary_vector(&sorted_rows)?;
        let index = sorted_states.iter().cloned().zip(0..).collect();
        Ok(MarkovMeasure {
            alphabet,
            memory,
            states: sorted_states,
            index,
            rows: sorted_rows,
            stationary,
        })
    }

    /// Memory-1 product measure with the given symbol probabilities.
    pub fn bernoulli(alphabet: Alphabet, probs: &[T]) -> Result<Self> {
        if probs.len() != alphabet.size() {
            return Err(Error::domain("one probability per symbol required"));
        }
        let states: Vec<Word> =
            (0..alphabet.size()).map(|c| Word::new(vec![c as Symbol])).collect();
        let rows: Vec<Vec<T>> = (0..probs.len()).map(|_| probs.to_vec()).collect();
        Self::new(alphabet, states, rows)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn stationary(&self) -> &[T] {
        &self.stationary
    }

    /// Cylinder mass `mu[w]`; for words longer than the memory this is the
    /// stationary mass of the leading state times the product of the
    /// transition probabilities along the word.
    pub fn probability(&self, w: &Word) -> Result<T> {
        w.check_alphabet(self.alphabet)?;
        if w.is_empty() {
            return Ok(T::one());
        }
        let s = self.memory;
        if w.len() <= s {
            let mut sum = T::zero();
            for (state, &i) in &self.index {
                if state.starts_with(w) {
                    sum = sum + self.stationary[i];
                }
            }
            return Ok(sum);
        }
        let first = w.factor(0, s);
        let (mut prev, mut prob) = match self.index.get(&first) {
            Some(&i) => (i, self.stationary[i]),
            None => return Ok(T::zero()),
        };
        for t in 1..=w.len() - s {
            let next_word = w.factor(t, s);
            let next = match self.index.get(&next_word) {
                Some(&j) => j,
                None => return Ok(T::zero()),
            };
            prob = prob * self.rows[prev][next];
            prev = next;
        }
        Ok(prob)
    }

    /// Entropy rate in nats: `-sum_i pi_i sum_j P_ij log P_ij`.
    pub fn entropy(&self) -> T {
        let mut h = T::zero();
        for (i, row) in self.rows.iter().enumerate() {
            for &pij in row {
                if pij > T::zero() {
                    h = h - self.stationary[i] * pij * pij.ln();
                }
            }
        }
        h
    }

    /// Draw a length-`len` orbit prefix; the initial state is sampled from
    /// the stationary vector.
    pub fn sample_prefix<R: rand::Rng>(&self, rng: &mut R, len: usize) -> SequencePrefix {
        let mut symbols: Vec<Symbol> = Vec::with_capacity(len + self.memory);
        let start = sample_index(rng, &self.stationary);
        symbols.extend_from_slice(self.states[start].symbols());
        let mut state = start;
        while symbols.len() < len {
            let next = sample_index(rng, &self.rows[state]);
            symbols.push(*self.states[next].symbols().last().expect("nonempty state"));
            state = next;
        }
        symbols.truncate(len);
        SequencePrefix { alphabet: self.alphabet, symbols }
    }
}

fn sample_index<T: Real, R: rand::Rng>(rng: &mut R, weights: &[T]) -> usize {
    let u: f64 = rng.gen::<f64>();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w.to_f64().unwrap_or(0.0);
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Stationary row vector of a row-stochastic matrix: direct linear solve of
/// `pi P = pi, sum pi = 1` when the system is nonsingular, with a lazy
/// power-iteration fallback otherwise.
fn stationary_vector<T: Real>(rows: &[Vec<T>]) -> Result<Vec<T>> {
    let tol = scaled_tol::<T>(1e-10);
    if let Some(v) = solve_stationary_direct(rows) {
        if check_stationary(rows, &v, tol) {
            return Ok(v);
        }
    }
    let v = stationary_power_iteration(rows);
    if check_stationary(rows, &v, tol) {
        Ok(v)
    } else {
        Err(Error::numeric(
            "stationary vector computation did not reach the required tolerance",
        ))
    }
}

fn check_stationary<T: Real>(rows: &[Vec<T>], v: &[T], tol: T) -> bool {
    let n = rows.len();
    for j in 0..n {
        let mut vj = T::zero();
        for i in 0..n {
            vj = vj + v[i] * rows[i][j];
        }
        if (vj - v[j]).abs() > tol {
            return false;
        }
    }
    v.iter().all(|x| x.is_finite() && *x >= T::zero())
}

/// Gaussian elimination on `(P^T - I)` with the last equation replaced by
/// the normalization `sum pi = 1`; `None` when a pivot degenerates.
fn solve_stationary_direct<T: Real>(rows: &[Vec<T>]) -> Option<Vec<T>> {
    let n = rows.len();
    let mut a = vec![vec![T::zero(); n + 1]; n];
    for j in 0..n.saturating_sub(1) {
        for i in 0..n {
            a[j][i] = rows[i][j] - if i == j { T::one() } else { T::zero() };
        }
    }
    for i in 0..n {
        a[n - 1][i] = T::one();
    }
    a[n - 1][n] = T::one();
    let pivot_floor = T::epsilon() * real::<T>((16 * n) as f64);
    for col in 0..n {
        let (best, mag) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= pivot_floor {
            return None;
        }
        a.swap(col, best);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != T::zero() {
                    for c in col..=n {
                        let upd = a[col][c] * f;
                        a[r][c] = a[r][c] - upd;
                    }
                }
            }
        }
    }
    let mut v: Vec<T> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    // snap round-off negatives to zero and renormalize
    for x in &mut v {
        if !x.is_finite() {
            return None;
        }
        if *x < T::zero() {
            if *x < -scaled_tol::<T>(1e-9) {
                return None;
            }
            *x = T::zero();
        }
    }
    let total: T = v.iter().copied().sum();
    if total <= T::zero() {
        return None;
    }
    for x in &mut v {
        *x = *x / total;
    }
    Some(v)
}

/// Power iteration on the aperiodic lazy chain `(P + I) / 2`.
fn stationary_power_iteration<T: Real>(rows: &[Vec<T>]) -> Vec<T> {
    let n = rows.len();
    let uniform = T::one() / real::<T>(n as f64);
    let mut v = vec![uniform; n];
    let half = real::<T>(0.5);
    let mut buf = vec![T::zero(); n];
    for _ in 0..100_000 {
        for slot in buf.iter_mut() {
            *slot = T::zero();
        }
        for i in 0..n {
            let vi = v[i] * half;
            buf[i] = buf[i] + vi; // lazy half-step on the identity
            for j in 0..n {
                buf[j] = buf[j] + vi * rows[i][j];
            }
        }
        let norm: T = buf.iter().copied().sum();
        let mut change = T::zero();
        for j in 0..n {
            buf[j] = buf[j] / norm;
            change = change.max((buf[j] - v[j]).abs());
        }
        std::mem::swap(&mut v, &mut buf);
        if change <= T::epsilon() {
            break;
        }
    }
    v
}

/// Probabilities of every word of a fixed depth: the representation of
/// empirical measures and of mixtures.
#[derive(Debug, Clone)]
pub struct CylinderTable<T: Real = f64> {
    alphabet: Alphabet,
    depth: usize,
    freqs: Vec<T>,
    sample_len: Option<usize>,
}

impl<T: Real> CylinderTable<T> {
    pub fn from_frequencies(
        alphabet: Alphabet,
        depth: usize,
        freqs: Vec<T>,
        sample_len: Option<usize>,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::domain("cylinder table depth must be at least 1"));
        }
        if freqs.len() != table_len(alphabet, depth)? {
            return Err(Error::domain("frequency table length does not match depth"));
        }
        let tol = scaled_tol::<T>(1e-12);
        let mut sum = T::zero();
        for f in &freqs {
            if !f.is_finite() || *f < -tol {
                return Err(Error::domain("frequencies must be non-negative"));
            }
            sum = sum + *f;
        }
        if (sum - T::one()).abs() > tol {
            return Err(Error::domain(format!("frequencies sum to {sum}, not 1")));
        }
        Ok(CylinderTable { alphabet, depth, freqs, sample_len })
    }

    /// Frequencies of the `|w|` depth-`d` windows of the periodic extension
    /// of `w`; exactly the empirical measure of the periodic point over one
    /// full period.
    pub fn from_word_periodic(alphabet: Alphabet, w: &Word, depth: usize) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::domain("periodic extension needs a nonempty word"));
        }
        w.check_alphabet(alphabet)?;
        if depth == 0 {
            return Err(Error::domain("cylinder table depth must be at least 1"));
        }
        let size = table_len(alphabet, depth)?;
        let n = w.len();
        let syms = w.symbols();
        let mut counts = vec![0usize; size];
        let mut window = Vec::with_capacity(depth);
        for i in 0..n {
            window.clear();
            for j in 0..depth {
                window.push(syms[(i + j) % n]);
            }
            counts[pack(alphabet.size(), &window)] += 1;
        }
        let denom = real::<T>(n as f64);
        let freqs = counts.iter().map(|&c| real::<T>(c as f64) / denom).collect();
        Ok(CylinderTable { alphabet, depth, freqs, sample_len: Some(n) })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn sample_len(&self) -> Option<usize> {
        self.sample_len
    }

    /// Mass of the cylinder `[w]` for `|w| <= depth`.
    pub fn probability(&self, w: &Word) -> Result<T> {
        w.check_alphabet(self.alphabet)?;
        if w.is_empty() {
            return Ok(T::one());
        }
        if w.len() > self.depth {
            return Err(Error::domain(format!(
                "table resolves cylinders only to depth {}; asked for {}",
                self.depth,
                w.len()
            )));
        }
        let p = self.alphabet.size();
        let stride = p.pow((self.depth - w.len()) as u32);
        let start = pack(p, w.symbols()) * stride;
        let mut sum = T::zero();
        for f in &self.freqs[start..start + stride] {
            sum = sum + *f;
        }
        Ok(sum)
    }

    /// Marginal frequency table at a shallower depth.
    pub fn marginal(&self, depth: usize) -> Result<Vec<T>> {
        if depth == 0 || depth > self.depth {
            return Err(Error::domain("marginal depth out of range"));
        }
        let p = self.alphabet.size();
        let stride = p.pow((self.depth - depth) as u32);
        let mut out = Vec::with_capacity(self.freqs.len() / stride);
        for chunk in self.freqs.chunks(stride) {
            let mut s = T::zero();
            for f in chunk {
                s = s + *f;
            }
            out.push(s);
        }
        Ok(out)
    }

    /// `H_k = -sum mu[w] log mu[w]` over length-`k` words.
    pub fn block_entropy(&self, k: usize) -> Result<T> {
        let marg = self.marginal(k)?;
        let mut h = T::zero();
        for q in marg {
            if q > T::zero() {
                h = h - q * q.ln();
            }
        }
        Ok(h)
    }

    /// `H_d - H_{d-1}`, the per-symbol entropy of the deepest block given
    /// the one above it; a standard entropy-rate estimate.
    pub fn conditional_block_entropy(&self) -> Result<T> {
        let hd = self.block_entropy(self.depth)?;
        if self.depth == 1 {
            return Ok(hd);
        }
        Ok(hd - self.block_entropy(self.depth - 1)?)
    }

    /// Nonzero entries in lexicographic order.
    pub fn support(&self) -> Vec<(Word, T)> {
        let p = self.alphabet.size();
        self.freqs
            .iter()
            .enumerate()
            .filter(|(_, f)| **f > T::zero())
            .map(|(i, f)| (Word::new(unpack(p, self.depth, i)), *f))
            .collect()
    }
}

/// Frequencies of the depth-`d` windows at positions `0..n` of `x`;
/// needs `|x| >= n + d - 1` so every window is fully visible.
pub fn empirical_measure<T: Real>(
    x: &SequencePrefix,
    n: usize,
    d: usize,
) -> Result<CylinderTable<T>> {
    if n == 0 || d == 0 {
        return Err(Error::domain("empirical measure needs n >= 1 and depth >= 1"));
    }
    let need = n + d - 1;
    if x.len() < need {
        return Err(Error::domain(format!(
            "prefix of length {} too short for {n} windows of depth {d}; need {need}",
            x.len()
        )));
    }
    let alphabet = x.alphabet();
    let size = table_len(alphabet, d)?;
    let mut counts = vec![0usize; size];
    for i in 0..n {
        counts[pack(alphabet.size(), &x.symbols()[i..i + d])] += 1;
    }
    let denom = real::<T>(n as f64);
    let freqs = counts.iter().map(|&c| real::<T>(c as f64) / denom).collect();
    Ok(CylinderTable { alphabet, depth: d, freqs, sample_len: Some(n) })
}

/// Either exact (Markov) or truncated to a finite cylinder depth (table).
#[derive(Debug, Clone)]
pub enum MeasureRep<T: Real = f64> {
    Markov(MarkovMeasure<T>),
    Table(CylinderTable<T>),
}

impl<T: Real> From<MarkovMeasure<T>> for MeasureRep<T> {
    fn from(m: MarkovMeasure<T>) -> Self {
        MeasureRep::Markov(m)
    }
}

impl<T: Real> From<CylinderTable<T>> for MeasureRep<T> {
    fn from(t: CylinderTable<T>) -> Self {
        MeasureRep::Table(t)
    }
}

impl<T: Real> MeasureRep<T> {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            MeasureRep::Markov(m) => m.alphabet(),
            MeasureRep::Table(t) => t.alphabet(),
        }
    }

    /// Largest cylinder depth with exact masses, `None` when unlimited.
    pub fn resolvable_depth(&self) -> Option<usize> {
        match self {
            MeasureRep::Markov(_) => None,
            MeasureRep::Table(t) => Some(t.depth()),
        }
    }

    pub fn probability(&self, w: &Word) -> Result<T> {
        match self {
            MeasureRep::Markov(m) => m.probability(w),
            MeasureRep::Table(t) => t.probability(w),
        }
    }

    /// `sum_w phi(w) mu[w]` over words of the potential's depth.
    pub fn integrate(&self, phi: &Potential<T>) -> Result<T> {
        if phi.alphabet() != self.alphabet() {
            return Err(Error::domain("potential and measure use different alphabets"));
        }
        if let Some(d) = self.resolvable_depth() {
            if d < phi.depth() {
                return Err(Error::domain(format!(
                    "measure resolves depth {d}, potential needs depth {}",
                    phi.depth()
                )));
            }
        }
        let p = self.alphabet().size();
        let mut sum = T::zero();
        for i in 0..table_len(self.alphabet(), phi.depth())? {
            let w = Word::new(unpack(p, phi.depth(), i));
            let mass = self.probability(&w)?;
            if mass > T::zero() {
                sum = sum + mass * phi.value(w.symbols());
            }
        }
        Ok(sum)
    }

    pub fn describe(&self) -> String {
        match self {
            MeasureRep::Markov(m) => format!(
                "Markov measure, memory {}, {} states",
                m.memory(),
                m.states().len()
            ),
            MeasureRep::Table(t) => format!("cylinder table of depth {}", t.depth()),
        }
    }
}

/// Weak-star distance truncated at index `K` of the cylinder-indicator
/// family enumerated in length-then-lexicographic order:
/// `sum_{k<=K} |mu[w_k] - nu[w_k]| / 2^k`.
///
/// When one side only resolves cylinders to a finite depth the sum is
/// silently truncated there; the returned tail bound `2^{-K_used}` reflects
/// the truncation.
pub fn weak_star_distance<T: Real>(
    mu: &MeasureRep<T>,
    nu: &MeasureRep<T>,
    k: usize,
) -> Result<(T, T)> {
    if mu.alphabet() != nu.alphabet() {
        return Err(Error::domain("measures use different alphabets"));
    }
    let alphabet = mu.alphabet();
    let p = alphabet.size();
    let depth_cap = match (mu.resolvable_depth(), nu.resolvable_depth()) {
        (None, None) => usize::MAX,
        (Some(a), None) | (None, Some(a)) => a,
        (Some(a), Some(b)) => a.min(b),
    };
    let half = real::<T>(0.5);
    let mut weight = T::one();
    let mut index = 0usize;
    let mut value = T::zero();
    let mut len = 1usize;
    'outer: while index < k && len <= depth_cap {
        for i in 0..alphabet.word_count(len) as usize {
            if index == k {
                break 'outer;
            }
            index += 1;
            weight = weight * half;
            let w = Word::new(unpack(p, len, i));
            let diff = (mu.probability(&w)? - nu.probability(&w)?).abs();
            value = value + diff * weight;
        }
        len += 1;
    }
    let tail = half.powi(index as i32);
    Ok((value, tail))
}

/// Convex combination evaluated as a cylinder table at the given depth.
/// A mixture of Markov measures is generally not Markov, so the dense table
/// is the honest representation.
pub fn mixture<T: Real>(
    measures: &[MeasureRep<T>],
    weights: &[T],
    depth: usize,
) -> Result<CylinderTable<T>> {
    if measures.is_empty() || measures.len() != weights.len() {
        return Err(Error::domain("need one weight per measure, at least one of each"));
    }
    let alphabet = measures[0].alphabet();
    let tol = scaled_tol::<T>(1e-12);
    let mut total = T::zero();
    for w in weights {
        if !w.is_finite() || *w < -tol {
            return Err(Error::domain("mixture weights must be non-negative"));
        }
        total = total + *w;
    }
    if (total - T::one()).abs() > tol {
        return Err(Error::domain(format!("mixture weights sum to {total}, not 1")));
    }
    for m in measures {
        if m.alphabet() != alphabet {
            return Err(Error::domain("mixture components use different alphabets"));
        }
        if let Some(d) = m.resolvable_depth() {
            if d < depth {
                return Err(Error::domain(format!(
                    "component resolves depth {d}, mixture requested at depth {depth}"
                )));
            }
        }
    }
    let p = alphabet.size();
    let size = table_len(alphabet, depth)?;
    let mut freqs = vec![T::zero(); size];
    for (m, &wt) in measures.iter().zip(weights) {
        for (i, slot) in freqs.iter_mut().enumerate() {
            let w = Word::new(unpack(p, depth, i));
            *slot = *slot + wt * m.probability(&w)?;
        }
    }
    // rounding can leave the total a few ulps off 1; renormalize exactly
    let sum: T = freqs.iter().copied().sum();
    for f in &mut freqs {
        *f = *f / sum;
    }
    CylinderTable::from_frequencies(alphabet, depth, freqs, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn a2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> SequencePrefix {
        SequencePrefix::from_word(a2(), &w(s)).unwrap()
    }

    fn bernoulli(p1: f64) -> MarkovMeasure<f64> {
        MarkovMeasure::bernoulli(a2(), &[1.0 - p1, p1]).unwrap()
    }

    fn golden_parry() -> MarkovMeasure<f64> {
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        MarkovMeasure::new(
            a2(),
            vec![w("0"), w("1")],
            vec![vec![1.0 / phi, 1.0 / (phi * phi)], vec![1.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn potential_tables() {
        let ind = Potential::<f64>::indicator(a2(), &w("1")).unwrap();
        assert_eq!(ind.value(&[1, 0]), 1.0);
        assert_eq!(ind.value(&[0, 1]), 0.0);
        let c = Potential::<f64>::constant(a2(), 0.25);
        assert_eq!(c.depth(), 1);
        let lifted = c.lifted(3).unwrap();
        assert_eq!(lifted.value(&[1, 0, 1]), 0.25);
        let combo = Potential::linear_combination(&ind, 2.0, &c, -1.0).unwrap();
        assert_eq!(combo.value(&[1, 1]), 1.75);
        assert_eq!(combo.value(&[0, 0]), -0.25);
        let dup = Potential::<f64>::from_entries(
            a2(),
            1,
            vec![(w("0"), 1.0), (w("0"), 2.0)],
        );
        assert!(dup.is_err());
    }

    #[test]
    fn birkhoff_sums() {
        let ind = Potential::<f64>::indicator(a2(), &w("1")).unwrap();
        assert_eq!(ind.birkhoff_sum(&seq("0110"), 4).unwrap(), 2.0);
        let c = Potential::<f64>::constant(a2(), 0.3);
        let total: f64 = c.birkhoff_sum(&seq("0110110"), 7).unwrap();
        assert!((total - 2.1).abs() < 1e-12);
        let table = Potential::<f64>::from_entries(
            a2(),
            2,
            vec![
                (w("00"), 0.1),
                (w("01"), -0.4),
                (w("10"), 0.7),
                (w("11"), 1.3),
            ],
        )
        .unwrap();
        // windows of 01101: 01, 11, 10, 01
        let expect: f64 = -0.4 + 1.3 + 0.7 + -0.4;
        let got: f64 = table.birkhoff_sum(&seq("01101"), 4).unwrap();
        assert!((got - expect).abs() < 1e-12);
        assert!(table.birkhoff_sum(&seq("01"), 4).is_err());
    }

    #[test]
    fn empirical_examples() {
        let e = empirical_measure::<f64>(&seq("0000"), 4, 1).unwrap();
        assert_eq!(e.probability(&w("0")).unwrap(), 1.0);
        assert_eq!(e.probability(&w("1")).unwrap(), 0.0);

        let e = empirical_measure::<f64>(&seq("01010"), 4, 2).unwrap();
        assert_eq!(e.probability(&w("01")).unwrap(), 0.5);
        assert_eq!(e.probability(&w("10")).unwrap(), 0.5);

        let e = empirical_measure::<f64>(&seq("0110110"), 5, 2).unwrap();
        assert!((e.probability(&w("01")).unwrap() - 0.4).abs() < 1e-12);
        assert!((e.probability(&w("11")).unwrap() - 0.4).abs() < 1e-12);
        assert!((e.probability(&w("10")).unwrap() - 0.2).abs() < 1e-12);

        assert!(empirical_measure::<f64>(&seq("011"), 4, 2).is_err());
    }

    #[test]
    fn periodic_window_table() {
        let table = CylinderTable::<f64>::from_word_periodic(a2(), &w("01"), 2).unwrap();
        let e = empirical_measure::<f64>(&seq("01010"), 4, 2).unwrap();
        for word in ["00", "01", "10", "11"] {
            assert_eq!(
                table.probability(&w(word)).unwrap(),
                e.probability(&w(word)).unwrap(),
                "cylinder {word}"
            );
        }
    }

    #[test]
    fn markov_entropy_values() {
        assert!((bernoulli(0.5).entropy() - 2.0_f64.ln()).abs() < 1e-12);
        assert!(bernoulli(1.0).entropy().abs() < 1e-12);
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((golden_parry().entropy() - phi.ln()).abs() < 1e-12);
        // frozen: log of the golden ratio
        assert!((golden_parry().entropy() - 0.4812118250596035).abs() < 1e-12);
    }

    #[test]
    fn markov_stationary_and_consistency() {
        let m = golden_parry();
        let pi = m.stationary();
        assert!((pi[0] - 0.7236067977499789).abs() < 1e-10);
        // additivity and shift invariance of cylinder masses
        for len in 0..=5 {
            for i in 0..(1usize << len) {
                let word = Word::new(crate::word::unpack(2, len, i));
                let base = m.probability(&word).unwrap();
                let mut right = 0.0;
                let mut left = 0.0;
                for c in 0..2u8 {
                    let mut wc = word.clone();
                    wc.push(c);
                    right += m.probability(&wc).unwrap();
                    let mut cw = Word::new(vec![c]);
                    cw = cw.concat(&word);
                    left += m.probability(&cw).unwrap();
                }
                assert!((right - base).abs() < 1e-12, "additivity at {word}");
                assert!((left - base).abs() < 1e-12, "invariance at {word}");
            }
        }
    }

    #[test]
    fn markov_validation_errors() {
        // rows must sum to 1
        assert!(MarkovMeasure::new(a2(), vec![w("0"), w("1")], vec![vec![0.5, 0.4], vec![1.0, 0.0]])
            .is_err());
        // overlap structure for memory-2 states
        let states = vec![w("01"), w("10"), w("11")];
        let bad = vec![
            vec![0.5, 0.0, 0.5], // 01 -> 01 has positive mass but no overlap
            vec![0.0, 0.5, 0.5],
            vec![0.0, 1.0, 0.0],
        ];
        let err = MarkovMeasure::new(a2(), states, bad);
        assert!(err.is_err());
    }

    #[test]
    fn weak_star_frozen_values() {
        let b0: MeasureRep<f64> = bernoulli(0.0).into();
        let b1: MeasureRep<f64> = bernoulli(1.0).into();
        let (d_self, tail) = weak_star_distance(&b0, &b0, 20).unwrap();
        assert_eq!(d_self, 0.0);
        assert!((tail - 2.0_f64.powi(-20)).abs() < 1e-18);
        // only cylinders 0^k and 1^k separate the two point masses
        let (d, _) = weak_star_distance(&b1, &b0, 14).unwrap();
        assert!((d - 0.89849853515625).abs() < 1e-15);
        let (d_rev, _) = weak_star_distance(&b0, &b1, 14).unwrap();
        assert_eq!(d, d_rev);
    }

    #[test]
    fn weak_star_triangle_and_truncation() {
        let mu: MeasureRep<f64> = bernoulli(0.15).into();
        let nu: MeasureRep<f64> = bernoulli(0.5).into();
        let la: MeasureRep<f64> = bernoulli(0.85).into();
        let (dml, tail) = weak_star_distance(&mu, &la, 16).unwrap();
        let (dmn, _) = weak_star_distance(&mu, &nu, 16).unwrap();
        let (dnl, _) = weak_star_distance(&nu, &la, 16).unwrap();
        assert!(dml <= dmn + dnl + 2.0 * tail);
        // a depth-2 table truncates the sum after the 6 shallow cylinders
        let shallow: MeasureRep<f64> =
            empirical_measure::<f64>(&seq("0110110"), 5, 2).unwrap().into();
        let (_, tail) = weak_star_distance(&shallow, &nu, 30).unwrap();
        assert_eq!(tail, 2.0_f64.powi(-6));
    }

    #[test]
    fn integrate_examples() {
        let c = Potential::<f64>::constant(a2(), 0.7);
        let m: MeasureRep<f64> = bernoulli(0.3).into();
        assert!((m.integrate(&c).unwrap() - 0.7).abs() < 1e-12);
        let ind = Potential::<f64>::indicator(a2(), &w("1")).unwrap();
        assert!((m.integrate(&ind).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn integrate_matches_sampled_birkhoff_average() {
        let table = Potential::<f64>::from_entries(
            a2(),
            2,
            vec![
                (w("00"), 0.31),
                (w("01"), -0.87),
                (w("10"), 0.44),
                (w("11"), 1.02),
            ],
        )
        .unwrap();
        let m = golden_parry();
        let exact = MeasureRep::from(m.clone()).integrate(&table).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let x = m.sample_prefix(&mut rng, n + 1);
        let avg = table.birkhoff_average(&x, n).unwrap();
        // iid-style standard error of the window values
        let mut var = 0.0;
        for i in 0..n {
            let v = table.value(&x.symbols()[i..i + 2]) - exact;
            var += v * v;
        }
        let sigma = (var / (n as f64)).sqrt() / (n as f64).sqrt();
        assert!(
            (avg - exact).abs() < 3.0 * sigma.max(1e-4),
            "avg {avg} vs exact {exact} (sigma {sigma})"
        );
    }

    #[test]
    fn mixture_examples() {
        let b0: MeasureRep<f64> = bernoulli(0.0).into();
        let b1: MeasureRep<f64> = bernoulli(1.0).into();
        let mix = mixture(&[b0.clone(), b1.clone()], &[0.5, 0.5], 2).unwrap();
        assert_eq!(mix.probability(&w("0")).unwrap(), 0.5);
        assert_eq!(mix.probability(&w("1")).unwrap(), 0.5);
        assert_eq!(mix.probability(&w("00")).unwrap(), 0.5);
        assert_eq!(mix.probability(&w("11")).unwrap(), 0.5);
        assert_eq!(mix.probability(&w("01")).unwrap(), 0.0);

        let single = mixture(&[b0.clone()], &[1.0], 3).unwrap();
        for i in 0..8usize {
            let word = Word::new(crate::word::unpack(2, 3, i));
            assert_eq!(
                single.probability(&word).unwrap(),
                b0.probability(&word).unwrap()
            );
        }

        assert!(mixture(&[b0, b1], &[0.7, 0.5], 2).is_err());
    }

    #[test]
    fn mixture_distance_bound() {
        // D(sum a_i mu_i, sum b_i m_i) <= sum a_i D(mu_i, m_i) + sum |a_i - b_i|
        let mu1: MeasureRep<f64> = bernoulli(0.2).into();
        let mu2: MeasureRep<f64> = bernoulli(0.7).into();
        let m1: MeasureRep<f64> = bernoulli(0.25).into();
        let m2: MeasureRep<f64> = bernoulli(0.65).into();
        let (a1, a2v) = (0.4, 0.6);
        let (b1, b2) = (0.55, 0.45);
        let k = 16;
        let depth = 4;
        let lhs_mu: MeasureRep<f64> =
            mixture(&[mu1.clone(), mu2.clone()], &[a1, a2v], depth).unwrap().into();
        let lhs_m: MeasureRep<f64> =
            mixture(&[m1.clone(), m2.clone()], &[b1, b2], depth).unwrap().into();
        let (lhs, tail) = weak_star_distance(&lhs_mu, &lhs_m, k).unwrap();
        let (d1, _) = weak_star_distance(&mu1, &m1, k).unwrap();
        let (d2, _) = weak_star_distance(&mu2, &m2, k).unwrap();
        let rhs = a1 * d1 + a2v * d2 + (a1 - b1).abs() + (a2v - b2).abs();
        assert!(lhs <= rhs + 2.0 * tail, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn mixture_entropy_trend() {
        let c1 = bernoulli(0.2);
        let c2 = bernoulli(0.6);
        let h1 = c1.entropy();
        let h2 = c2.entropy();
        let mix = mixture(&[c1.into(), c2.into()], &[0.5, 0.5], 8).unwrap();
        let h = mix.conditional_block_entropy().unwrap();
        // frozen from an independent dynamic-programming oracle
        assert!((h - 0.618434).abs() < 1e-5, "got {h}");
        assert!(h >= h1.min(h2) - 0.05 && h <= h1.max(h2) + 0.05);
        // components report their own entropy through the same estimator
        assert!((h1 - 0.500402).abs() < 1e-5);
        assert!((h2 - 0.673012).abs() < 1e-5);
    }

    #[test]
    fn generic_scalar_smoke() {
        let m = MarkovMeasure::<f32>::bernoulli(a2(), &[0.5, 0.5]).unwrap();
        assert!((m.entropy() - std::f32::consts::LN_2).abs() < 1e-6);
    }
}
