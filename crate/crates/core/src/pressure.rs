//! Topological pressure and entropy: exact values through transfer
//! matrices on finite-type presentations, bracketing estimates through
//! language counting, covering sums for explicit cylinder covers, and the
//! root of the pressure equation (Bowen dimension).

use crate::measure::{scaled_tol, MarkovMeasure, Potential};
use crate::shift::{SftGraph, StepState, Subshift};
use crate::word::{Symbol, Word};
use crate::{real, Error, Real, Result};
use std::collections::BTreeMap;

/// Two-sided pressure estimate from language counting at a finite depth.
#[derive(Debug, Clone)]
pub struct PressureEstimate<T: Real = f64> {
    pub lower: T,
    pub upper: T,
    pub n: usize,
    pub method: String,
}

/// Log spectral radius of the weighted transition matrix, with structural
/// context for reducible graphs.
#[derive(Debug, Clone)]
pub struct TransferAnalysis<T: Real = f64> {
    pub value: T,
    pub spectral_radius: T,
    pub memory: usize,
    pub states: usize,
    pub dominant_component: usize,
    /// Set when the transition graph is not a single strongly connected
    /// component; the value then refers to the dominant component.
    pub reducible: bool,
}

/// Entropy of a shift: exact where a finite-type presentation exists,
/// otherwise a bracket.
#[derive(Debug, Clone)]
pub struct EntropyOutcome<T: Real = f64> {
    pub lower: T,
    pub upper: T,
    pub exact: bool,
    pub method: String,
    /// Counting depth for bracketed results.
    pub n: Option<usize>,
    /// Root of the gap-series equation, reported for gap shifts as an
    /// independent cross-check.
    pub series_check: Option<T>,
}

impl<T: Real> EntropyOutcome<T> {
    pub fn value(&self) -> T {
        if self.exact {
            self.lower
        } else {
            (self.lower + self.upper) * real::<T>(0.5)
        }
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

struct WeightedGraph<T: Real> {
    graph: SftGraph,
    /// Parallel to `graph.edges`: `(target, weight e^{phi})`.
    weights: Vec<Vec<(usize, T)>>,
}

fn build_weighted<T: Real>(shift: &Subshift<T>, phi: &Potential<T>) -> Result<WeightedGraph<T>> {
    if phi.alphabet() != shift.alphabet() {
        return Err(Error::domain("potential and shift use different alphabets"));
    }
    let graph = shift.sft_graph(phi.depth().saturating_sub(1).max(1))?;
    if graph.states.is_empty() {
        return Err(Error::domain("the shift has an empty language"));
    }
    let mut weights = Vec::with_capacity(graph.states.len());
    for (u, edges) in graph.edges.iter().enumerate() {
        let mut row = Vec::with_capacity(edges.len());
        for &(v, c) in edges {
            let mut word: Vec<Symbol> = graph.states[u].symbols().to_vec();
            word.push(c);
            row.push((v, phi.value(&word).exp()));
        }
        weights.push(row);
    }
    Ok(WeightedGraph { graph, weights })
}

/// Strongly connected components in a deterministic order (Tarjan,
/// iterative), each sorted by state index.
pub(crate) fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack nonempty");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// Dominant eigenvalue and eigenvector of the weighted adjacency restricted
/// to `comp`, by shifted power iteration.
fn component_spectral<T: Real>(
    comp: &[usize],
    weights: &[Vec<(usize, T)>],
    transpose: bool,
) -> Result<(T, Vec<T>)> {
    let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let m = comp.len();
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); m];
    let mut max_w = T::zero();
    for (i, &g) in comp.iter().enumerate() {
        for &(t, w) in &weights[g] {
            if let Some(&j) = local.get(&t) {
                if transpose {
                    rows[j].push((i, w));
                } else {
                    rows[i].push((j, w));
                }
                max_w = max_w.max(w);
            }
        }
    }
    if max_w <= T::zero() {
        return Ok((T::zero(), vec![T::zero(); m]));
    }
    let shift = max_w;
    let mut v = vec![T::one(); m];
    let tol = scaled_tol::<T>(1e-13);
    for _ in 0..100_000 {
        let mut next = vec![T::zero(); m];
        for i in 0..m {
            let mut acc = shift * v[i];
            for &(j, w) in &rows[i] {
                acc = acc + w * v[j];
            }
            next[i] = acc;
        }
        let lambda = next.iter().fold(T::zero(), |a, x| a.max(*x));
        if lambda <= T::zero() {
            return Ok((T::zero(), v));
        }
        let mut change = T::zero();
        for x in next.iter_mut() {
            *x = *x / lambda;
        }
        for i in 0..m {
            change = change.max((next[i] - v[i]).abs());
        }
        v = next;
        if change <= tol {
            return Ok((lambda - shift, v));
        }
    }
    Err(Error::numeric(
        "power iteration for the spectral radius did not converge in 100000 steps",
    ))
}

struct TransferOutcome<T: Real> {
    analysis: TransferAnalysis<T>,
    dominant: Vec<usize>,
    right: Vec<T>,
    graph: SftGraph,
    weights: Vec<Vec<(usize, T)>>,
}

fn transfer_core<T: Real>(shift: &Subshift<T>, phi: &Potential<T>) -> Result<TransferOutcome<T>> {
    let wg = build_weighted(shift, phi)?;
    let adj: Vec<Vec<usize>> =
        wg.weights.iter().map(|row| row.iter().map(|&(t, _)| t).collect()).collect();
    let comps = strongly_connected_components(&adj);
    let mut best: Option<(T, Vec<usize>, Vec<T>)> = None;
    for comp in &comps {
        let has_edge = comp.iter().any(|&g| {
            wg.weights[g].iter().any(|&(t, _)| comp.binary_search(&t).is_ok())
        });
        if !has_edge {
            continue;
        }
        let (rho, vec) = component_spectral(comp, &wg.weights, false)?;
        let better = match &best {
            None => true,
            Some((brho, _, _)) => rho > *brho,
        };
        if better {
            best = Some((rho, comp.clone(), vec));
        }
    }
    let (rho, dominant, right) = best.ok_or_else(|| {
        Error::domain("the transition graph has no cycles; the shift carries no orbits")
    })?;
    if rho <= T::zero() {
        return Err(Error::numeric("spectral radius degenerated to zero"));
    }
    let analysis = TransferAnalysis {
        value: rho.ln(),
        spectral_radius: rho,
        memory: wg.graph.memory,
        states: wg.graph.states.len(),
        dominant_component: dominant.len(),
        reducible: comps.len() > 1,
    };
    Ok(TransferOutcome { analysis, dominant, right, graph: wg.graph, weights: wg.weights })
}

/// `P(phi)` as the log spectral radius of the transition matrix weighted by
/// `e^{phi}`. Requires a finite-type presentation (full shifts and SFTs).
pub fn transfer_pressure<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
) -> Result<TransferAnalysis<T>> {
    Ok(transfer_core(shift, phi)?.analysis)
}

/// The Markov measure attaining `sup h + integral(phi)`: transition rows
/// built from the dominant right eigenvector on the dominant component.
pub fn equilibrium_measure<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
) -> Result<MarkovMeasure<T>> {
    let out = transfer_core(shift, phi)?;
    let comp = &out.dominant;
    let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let rho = out.analysis.spectral_radius;
    let m = comp.len();
    let mut rows = vec![vec![T::zero(); m]; m];
    for (i, &g) in comp.iter().enumerate() {
        for &(t, w) in &out.weights[g] {
            if let Some(&j) = local.get(&t) {
                rows[i][j] = w * out.right[j] / (rho * out.right[i]);
            }
        }
        // remove the eigen-residual so each row is exactly stochastic
        let sum: T = rows[i].iter().copied().sum();
        if sum <= T::zero() {
            return Err(Error::numeric("equilibrium row degenerated"));
        }
        for x in rows[i].iter_mut() {
            *x = *x / sum;
        }
    }
    let states: Vec<Word> = comp.iter().map(|&g| out.graph.states[g].clone()).collect();
    MarkovMeasure::new(shift.alphabet(), states, rows)
}

/// One partition-sum level: `log sum_{w in L_n} exp(sup_{[w]} S_n phi)`,
/// computed by dynamic programming over admissibility-automaton states.
fn log_partition_sum<T: Real>(shift: &Subshift<T>, phi: &Potential<T>, n: usize) -> Result<T> {
    let r = phi.depth();
    if n < r {
        return Err(Error::domain(format!(
            "counting depth {n} is smaller than the potential depth {r}"
        )));
    }
    let stepper = shift.stepper(n + r)?;
    type Key = (StepState, Vec<Symbol>);
    let mut layer: BTreeMap<Key, T> = BTreeMap::new();
    layer.insert((stepper.start(), Vec::new()), T::one());
    let mut log_acc = T::zero();
    let p = shift.alphabet().size() as Symbol;
    for t in 0..n {
        let mut next: BTreeMap<Key, T> = BTreeMap::new();
        for ((state, window), weight) in &layer {
            for c in 0..p {
                if let Some(ns) = stepper.step(state, c) {
                    let mut w = window.clone();
                    w.push(c);
                    let gain = if t + 1 >= r { phi.value(&w[w.len() - r..]).exp() } else { T::one() };
                    if w.len() > r.saturating_sub(1) {
                        w.remove(0);
                    }
                    let slot = next.entry((ns, w)).or_insert_with(T::zero);
                    *slot = *slot + *weight * gain;
                }
            }
        }
        if next.len() > shift.budget() {
            return Err(Error::resource(
                format!("partition-sum state space at depth {t}"),
                shift.budget() as u64,
            ));
        }
        let max = next.values().fold(T::zero(), |a, v| a.max(*v));
        if max <= T::zero() {
            return Err(Error::domain(format!("the language is empty at length {}", t + 1)));
        }
        for v in next.values_mut() {
            *v = *v / max;
        }
        log_acc = log_acc + max.ln();
        layer = next;
    }
    // close each surviving state with the best admissible completion of the
    // final r-1 straddling windows
    let mut total = T::zero();
    for ((state, window), weight) in &layer {
        if let Some(tail) = best_tail(&stepper, state, window, phi) {
            total = total + *weight * tail.exp();
        }
    }
    if total <= T::zero() {
        return Err(Error::domain("no admissible completions at the boundary"));
    }
    Ok(log_acc + total.ln())
}

fn best_tail<T: Real>(
    stepper: &crate::shift::Stepper<'_, T>,
    state: &StepState,
    window: &[Symbol],
    phi: &Potential<T>,
) -> Option<T> {
    let r = phi.depth();
    fn rec<T: Real>(
        stepper: &crate::shift::Stepper<'_, T>,
        state: &StepState,
        window: &[Symbol],
        phi: &Potential<T>,
        left: usize,
        p: Symbol,
    ) -> Option<T> {
        if left == 0 {
            return Some(T::zero());
        }
        let mut best: Option<T> = None;
        for c in 0..p {
            if let Some(ns) = stepper.step(state, c) {
                let mut w = window.to_vec();
                w.push(c);
                let gain = phi.value(&w[w.len() - phi.depth()..]);
                w.remove(0);
                if let Some(rest) = rec(stepper, &ns, &w, phi, left - 1, p) {
                    let cand = gain + rest;
                    best = Some(match best {
                        None => cand,
                        Some(b) => b.max(cand),
                    });
                }
            }
        }
        best
    }
    if r == 1 {
        return Some(T::zero());
    }
    rec(stepper, state, window, phi, r - 1, phi.alphabet().size() as Symbol)
}

/// Bracketing estimate of `P(phi)` from the partition sums at depths `n`
/// and `2n`: the upper bound is `u_n / n` (subadditivity), the lower value
/// extrapolates the defect linearly in `1/n`.
pub fn counting_pressure<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
    n: usize,
) -> Result<PressureEstimate<T>> {
    if n == 0 {
        return Err(Error::domain("counting depth must be at least 1"));
    }
    let u_n = log_partition_sum(shift, phi, n)?;
    let u_2n = log_partition_sum(shift, phi, 2 * n)?;
    let nt = real::<T>(n as f64);
    let upper = u_n / nt;
    let lower = (u_2n / nt - upper).min(upper);
    Ok(PressureEstimate {
        lower,
        upper,
        n,
        method: "cylinder counting with doubling extrapolation".into(),
    })
}

/// `sum_w exp(-t |w| + sup_{[w]} S_{|w|} phi)` over an explicit list of
/// cylinder words; the supremum completes the straddling windows over all
/// symbol continuations, so the sum upper-bounds the covering sum of any
/// shift containing the words.
pub fn cover_pressure_sum<T: Real>(cover: &[Word], t: T, phi: &Potential<T>) -> Result<T> {
    let r = phi.depth();
    let p = phi.alphabet().size() as Symbol;
    let mut total = T::zero();
    for w in cover {
        if w.is_empty() {
            return Err(Error::domain("cover words must be nonempty"));
        }
        w.check_alphabet(phi.alphabet())?;
        let syms = w.symbols();
        let m = syms.len();
        let mut interior = T::zero();
        for i in 0..m.saturating_sub(r - 1) {
            interior = interior + phi.value(&syms[i..i + r]);
        }
        // maximize the windows that extend past the end of the word
        let start = m.saturating_sub(r - 1);
        let mut best = T::zero();
        if r > 1 && start < m {
            let window: Vec<Symbol> = syms[start..].to_vec();
            best = max_full_tail(&window, phi, m - start, p);
        }
        total = total + (interior + best - t * real::<T>(m as f64)).exp();
    }
    Ok(total)
}

fn max_full_tail<T: Real>(window: &[Symbol], phi: &Potential<T>, left: usize, p: Symbol) -> T {
    if left == 0 {
        return T::zero();
    }
    let mut best = T::neg_infinity();
    for c in 0..p {
        let mut w = window.to_vec();
        w.push(c);
        let gain = if w.len() >= phi.depth() {
            phi.value(&w[w.len() - phi.depth()..])
        } else {
            T::zero()
        };
        let keep = if w.len() >= phi.depth() { &w[1..] } else { &w[..] };
        best = best.max(gain + max_full_tail(keep, phi, left - 1, p));
    }
    best
}

/// Root of the pressure equation `P(-s phi) = 0` by bisection; `phi` must
/// be strictly positive on the admissible windows.
pub fn bowen_dimension<T: Real>(shift: &Subshift<T>, phi: &Potential<T>, tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut phi_min = T::infinity();
    for w in shift.language(phi.depth())? {
        phi_min = phi_min.min(phi.value(w.symbols()));
    }
    if !(phi_min > T::zero()) {
        return Err(Error::domain(format!(
            "the potential must be strictly positive on admissible windows; minimum is {phi_min}"
        )));
    }
    let pressure_at = |s: T| -> Result<T> {
        Ok(transfer_pressure(shift, &phi.scaled(-s))?.value)
    };
    let h = pressure_at(T::zero())?;
    let target = tol * phi_min;
    if h.abs() <= target {
        return Ok(T::zero());
    }
    if h < T::zero() {
        return Err(Error::numeric("entropy evaluated negative; cannot bracket the root"));
    }
    let mut lo = T::zero();
    let mut hi = h / phi_min;
    // the slope of s -> P(-s phi) is at most -phi_min, so P at hi is <= 0
    let mut mid = hi;
    for _ in 0..300 {
        mid = (lo + hi) * real::<T>(0.5);
        let p = pressure_at(mid)?;
        if p.abs() <= target {
            return Ok(mid);
        }
        if p > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * real::<T>(4.0) * hi.max(T::one()) {
            break;
        }
    }
    let residual = pressure_at(mid)?;
    if residual.abs() <= target.max(scaled_tol::<T>(1e-9)) {
        Ok(mid)
    } else {
        Err(Error::numeric(format!(
            "bisection stalled with pressure residual {residual}"
        )))
    }
}

/// Growth rate solving the gap-series equation
/// `sum_{a in S} x^{-(a+1)} = 1`; the entropy of the gap shift is `log x`.
/// Infinite families use exact geometric closed forms.
pub fn sgap_series_entropy<T: Real>(gaps: &crate::shift::GapSet) -> Result<T> {
    gaps.validate()?;
    let series = |x: T| -> T {
        match gaps {
            crate::shift::GapSet::Finite(set) => {
                let mut s = T::zero();
                for &a in set {
                    s = s + x.powi(-((a + 1) as i32));
                }
                s
            }
            crate::shift::GapSet::Arithmetic { start, step } => {
                x.powi(-((start + 1) as i32)) / (T::one() - x.powi(-(*step as i32)))
            }
            crate::shift::GapSet::Cofinite { excluded } => {
                let mut s = T::one() / (x - T::one());
                for &e in excluded {
                    s = s - x.powi(-((e + 1) as i32));
                }
                s
            }
        }
    };
    let mut lo = T::one() + real::<T>(1e-12);
    let mut hi = real::<T>(2.0);
    if series(lo) - T::one() <= T::zero() {
        // the sum never reaches 1: only isolated orbits, zero growth
        return Ok(T::zero());
    }
    for _ in 0..300 {
        let mid = (lo + hi) * real::<T>(0.5);
        if series(mid) - T::one() > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(((lo + hi) * real::<T>(0.5)).ln())
}

/// Entropy with the default counting depth 18 and inner approximation
/// depth 12.
pub fn entropy<T: Real>(shift: &Subshift<T>) -> Result<EntropyOutcome<T>> {
    entropy_with(shift, 18, 12)
}

/// Entropy of any supported shift: exact via the transfer matrix whenever a
/// faithful finite-type presentation exists (full shifts, SFTs, beta-shifts
/// with short periodic expansions, gap shifts with finitely many gaps),
/// otherwise a `[inner-SFT, counting]` bracket.
pub fn entropy_with<T: Real>(
    shift: &Subshift<T>,
    n: usize,
    m: usize,
) -> Result<EntropyOutcome<T>> {
    let zero = Potential::zero(shift.alphabet());
    let exact_via = |x: &Subshift<T>, method: &str| -> Result<EntropyOutcome<T>> {
        let v = transfer_pressure(x, &zero)?.value;
        Ok(EntropyOutcome {
            lower: v,
            upper: v,
            exact: true,
            method: method.into(),
            n: None,
            series_check: None,
        })
    };
    if shift.is_full() || shift.sft_spec().is_some() {
        return exact_via(shift, "transfer matrix");
    }
    if let Some(gaps) = shift.gap_set() {
        let series = Some(sgap_series_entropy(gaps)?);
        if let crate::shift::GapSet::Finite(set) = gaps {
            let mx = *set.iter().next_back().expect("validated nonempty");
            let sft = shift.inner_sft_approximation(mx)?;
            let mut out = exact_via(&sft, "finite gap set as SFT, transfer matrix")?;
            out.series_check = series;
            return Ok(out);
        }
        let lower = transfer_pressure(&shift.inner_sft_approximation(m)?, &zero)?.value;
        let upper = counting_pressure(shift, &zero, n)?.upper;
        return Ok(EntropyOutcome {
            lower: lower.min(upper),
            upper,
            exact: false,
            method: format!("inner SFT at depth {m} / counting at depth {n}"),
            n: Some(n),
            series_check: series,
        });
    }
    // beta-shift: exact when the quasi-greedy expansion is periodic with
    // period at most m
    if let Some(period) = shift.beta_quasi_greedy_period() {
        if period <= m {
            return exact_via(
                &shift.inner_sft_approximation(period)?,
                "periodic quasi-greedy expansion as SFT, transfer matrix",
            );
        }
    }
    let lower = transfer_pressure(&shift.inner_sft_approximation(m)?, &zero)?.value;
    let upper = counting_pressure(shift, &zero, n)?.upper;
    Ok(EntropyOutcome {
        lower: lower.min(upper),
        upper,
        exact: false,
        method: format!("inner SFT at depth {m} / counting at depth {n}"),
        n: Some(n),
        series_check: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureRep;
    use crate::shift::GapSet;
    use crate::word::Alphabet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn full2() -> Subshift<f64> {
        Subshift::full(2).unwrap()
    }

    fn golden() -> Subshift<f64> {
        Subshift::sft(2, vec![w("11")]).unwrap()
    }

    fn log_phi() -> f64 {
        ((1.0 + 5.0_f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn transfer_examples() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let a = transfer_pressure(&full2(), &zero).unwrap();
        assert!((a.value - 2.0_f64.ln()).abs() < 1e-12);
        assert!(!a.reducible);

        let phi = Potential::from_entries(
            Alphabet::new(2).unwrap(),
            1,
            vec![(w("0"), 0.3), (w("1"), -0.2)],
        )
        .unwrap();
        let a = transfer_pressure(&full2(), &phi).unwrap();
        assert!((a.value - (0.3_f64.exp() + (-0.2_f64).exp()).ln()).abs() < 1e-10);

        let a = transfer_pressure(&golden(), &zero).unwrap();
        assert!((a.value - log_phi()).abs() < 1e-12);
        assert!((a.value - 0.4812118250596035).abs() < 1e-12);
    }

    #[test]
    fn transfer_additive_shift() {
        let phi = Potential::from_entries(
            Alphabet::new(2).unwrap(),
            2,
            vec![
                (w("00"), 0.21),
                (w("01"), -0.53),
                (w("10"), 0.08),
                (w("11"), 0.9),
            ],
        )
        .unwrap();
        let c = 0.37;
        let shifted = Potential::linear_combination(
            &phi,
            1.0,
            &Potential::constant(Alphabet::new(2).unwrap(), c),
            1.0,
        )
        .unwrap();
        let base = transfer_pressure(&golden(), &phi).unwrap().value;
        let moved = transfer_pressure(&golden(), &shifted).unwrap().value;
        assert!((moved - base - c).abs() < 1e-10);
    }

    #[test]
    fn transfer_monotone_and_lipschitz() {
        let a2 = Alphabet::new(2).unwrap();
        let phi = Potential::from_entries(
            a2,
            1,
            vec![(w("0"), 0.1), (w("1"), -0.4)],
        )
        .unwrap();
        let psi = Potential::from_entries(
            a2,
            1,
            vec![(w("0"), 0.25), (w("1"), -0.1)],
        )
        .unwrap();
        let p_phi = transfer_pressure(&golden(), &phi).unwrap().value;
        let p_psi = transfer_pressure(&golden(), &psi).unwrap().value;
        assert!(p_phi <= p_psi + 1e-12, "monotone in the potential");
        assert!((p_phi - p_psi).abs() <= 0.3 + 1e-12, "Lipschitz with sup-norm gap");
    }

    #[test]
    fn variational_inequality_and_equilibrium() {
        let a2 = Alphabet::new(2).unwrap();
        let phi = Potential::from_entries(
            a2,
            2,
            vec![
                (w("00"), 0.4),
                (w("01"), -0.3),
                (w("10"), 0.2),
                (w("11"), 0.05),
            ],
        )
        .unwrap();
        let p = transfer_pressure(&golden(), &phi).unwrap().value;
        // a hand-picked valid Markov measure stays below the pressure
        let mu = MarkovMeasure::new(
            a2,
            vec![w("0"), w("1")],
            vec![vec![0.7, 0.3], vec![1.0, 0.0]],
        )
        .unwrap();
        let free_energy =
            mu.entropy() + MeasureRep::from(mu.clone()).integrate(&phi).unwrap();
        assert!(free_energy <= p + 1e-8);
        // the equilibrium measure attains it
        let eq = equilibrium_measure(&golden(), &phi).unwrap();
        let attained =
            eq.entropy() + MeasureRep::from(eq.clone()).integrate(&phi).unwrap();
        assert!((attained - p).abs() < 1e-6, "attained {attained} vs pressure {p}");
    }

    #[test]
    fn equilibrium_of_golden_is_parry() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let eq = equilibrium_measure(&golden(), &zero).unwrap();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let rows = eq.rows();
        assert!((rows[0][0] - 1.0 / phi).abs() < 1e-8);
        assert!((rows[0][1] - 1.0 / (phi * phi)).abs() < 1e-8);
        assert!((rows[1][0] - 1.0).abs() < 1e-8);
        assert!((eq.entropy() - log_phi()).abs() < 1e-8);
    }

    #[test]
    fn counting_examples() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let e = counting_pressure(&full2(), &zero, 10).unwrap();
        assert!((e.upper - 2.0_f64.ln()).abs() < 1e-12);
        assert!((e.lower - 2.0_f64.ln()).abs() < 1e-12);

        let e = counting_pressure(&golden(), &zero, 16).unwrap();
        assert!(e.upper - log_phi() < 0.02 && e.upper >= log_phi());
        // the extrapolated lower value is an estimate, not a certified bound
        assert!(e.lower <= log_phi() + 1e-8);
        assert!(log_phi() - e.lower < 0.01);

        // upper bounds shrink along doubling
        let e8 = counting_pressure(&golden(), &zero, 8).unwrap();
        assert!(e.upper <= e8.upper + 1e-12);

        // beta at the golden ratio shares the golden SFT language
        let beta = Subshift::beta((1.0 + 5.0_f64.sqrt()) / 2.0).unwrap();
        let eb = counting_pressure(&beta, &zero, 12).unwrap();
        let eg = counting_pressure(&golden(), &zero, 12).unwrap();
        assert!((eb.upper - eg.upper).abs() < 1e-12);
        assert!((eb.lower - eg.lower).abs() < 1e-12);
    }

    #[test]
    fn counting_with_potential_matches_transfer() {
        let a2 = Alphabet::new(2).unwrap();
        let phi = Potential::from_entries(
            a2,
            2,
            vec![
                (w("00"), 0.15),
                (w("01"), -0.25),
                (w("10"), 0.35),
                (w("11"), -0.05),
            ],
        )
        .unwrap();
        let exact = transfer_pressure(&golden(), &phi).unwrap().value;
        let est = counting_pressure(&golden(), &phi, 14).unwrap();
        assert!(est.upper >= exact - 1e-10, "upper {} vs exact {exact}", est.upper);
        assert!(est.upper - exact < 0.05);
        assert!(est.lower <= exact + 0.02, "lower {} vs exact {exact}", est.lower);
    }

    #[test]
    fn cover_sums() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let n = 6;
        let cover = full2().language(n).unwrap();
        let s = cover_pressure_sum(&cover, 2.0_f64.ln(), &zero).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        let s_big = cover_pressure_sum(&cover, 0.75, &zero).unwrap();
        assert!(s_big < 1.0);
        let single = cover_pressure_sum(&[w("0110")], 0.3, &zero).unwrap();
        assert!((single - (-0.3 * 4.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn bowen_examples() {
        let a2 = Alphabet::new(2).unwrap();
        let log2 = Potential::constant(a2, 2.0_f64.ln());
        let s = bowen_dimension(&full2(), &log2, 1e-8).unwrap();
        assert!((s - 1.0).abs() < 1e-6);

        let s = bowen_dimension(&golden(), &log2, 1e-8).unwrap();
        assert!((s - 0.6942419136306174).abs() < 1e-6);

        let c = Potential::constant(a2, 0.4);
        let s = bowen_dimension(&full2(), &c, 1e-8).unwrap();
        assert!((s - 2.0_f64.ln() / 0.4).abs() < 1e-6);

        let negative = Potential::constant(a2, -1.0);
        assert!(bowen_dimension(&full2(), &negative, 1e-8).is_err());
    }

    #[test]
    fn series_roots() {
        let h: f64 = sgap_series_entropy(&GapSet::finite([0, 1]).unwrap()).unwrap();
        assert!((h - log_phi()).abs() < 1e-9);

        let h: f64 = sgap_series_entropy(&GapSet::all_naturals()).unwrap();
        assert!((h - 2.0_f64.ln()).abs() < 1e-9);

        // odd gaps: 2 x^{-2} = 1, root sqrt 2
        let h: f64 =
            sgap_series_entropy(&GapSet::Arithmetic { start: 1, step: 2 }).unwrap();
        assert!((h - 0.5_f64 * 2.0_f64.ln()).abs() < 1e-9);

        let h: f64 = sgap_series_entropy(&GapSet::finite([1, 2]).unwrap()).unwrap();
        assert!((h - 0.2812).abs() < 1e-4);
    }

    #[test]
    fn entropy_outcomes() {
        let e = entropy(&Subshift::<f64>::full(3).unwrap()).unwrap();
        assert!(e.exact);
        assert!((e.value() - 3.0_f64.ln()).abs() < 1e-12);

        let e = entropy(&Subshift::<f64>::sgap(GapSet::finite([0, 1]).unwrap()).unwrap()).unwrap();
        assert!(e.exact);
        assert!((e.value() - log_phi()).abs() < 1e-6);
        assert!((e.series_check.unwrap() - log_phi()).abs() < 1e-6);

        let e = entropy(&Subshift::<f64>::sgap(GapSet::all_naturals()).unwrap()).unwrap();
        assert!(!e.exact);
        assert!(e.lower <= 2.0_f64.ln() && 2.0_f64.ln() <= e.upper);
        assert!(e.width() < 0.05, "width {}", e.width());

        let e = entropy(&Subshift::<f64>::beta(1.5).unwrap()).unwrap();
        assert!(!e.exact);
        assert!(e.lower <= 1.5_f64.ln() && 1.5_f64.ln() <= e.upper);
        assert!(e.width() <= 0.06, "width {}", e.width());
        // frozen inner-SFT lower bound at approximation depth 12
        assert!((e.lower - 0.403708).abs() < 1e-5);

        let e = entropy(&Subshift::<f64>::beta((1.0 + 5.0_f64.sqrt()) / 2.0).unwrap()).unwrap();
        assert!(e.exact);
        assert!((e.value() - log_phi()).abs() < 1e-9);
    }

    #[test]
    fn reducible_graph_flagged() {
        // forbidding "01" splits the graph into two absorbing loops
        let x = Subshift::<f64>::sft(2, vec![w("01")]).unwrap();
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let a = transfer_pressure(&x, &zero).unwrap();
        assert!(a.reducible);
        assert!((a.value - 0.0).abs() < 1e-12, "two fixed points, zero entropy");
    }
}
