//! Conditional variational principles: the pressure spectrum of Birkhoff
//! level sets in Legendre form, a brute-force constrained search over
//! Markov measures as an independent oracle, level-set dimension spectra,
//! and the pressure carried by the set of points with divergent averages.

use crate::measure::{MarkovMeasure, MeasureRep, Potential};
use crate::pressure::{equilibrium_measure, transfer_pressure};
use crate::shift::Subshift;
use crate::word::Symbol;
use crate::{real, Error, Real, Result};

/// Attainable interval of Birkhoff levels `integral(psi) d mu` over
/// invariant measures.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumDomain<T: Real = f64> {
    pub alpha_min: T,
    pub alpha_max: T,
}

impl<T: Real> SpectrumDomain<T> {
    pub fn span(&self) -> T {
        self.alpha_max - self.alpha_min
    }

    /// All invariant measures share the same level.
    pub fn is_degenerate(&self) -> bool {
        self.span() <= real::<T>(1e-9) * (T::one() + self.alpha_min.abs() + self.alpha_max.abs())
    }

    fn check_member(&self, alpha: T) -> Result<()> {
        let slack = real::<T>(1e-9) * (T::one() + self.span());
        if alpha < self.alpha_min - slack || alpha > self.alpha_max + slack {
            return Err(Error::domain(format!(
                "level {alpha} lies outside the attainable interval [{}, {}]",
                self.alpha_min, self.alpha_max
            )));
        }
        Ok(())
    }
}

/// One point of the conditional pressure spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumPoint<T: Real = f64> {
    pub alpha: T,
    pub value: T,
    /// Optimal dual parameter of the Legendre minimization.
    pub q: T,
    pub witness: MarkovMeasure<T>,
    /// Set when `alpha` sits on the boundary of the domain; the value is
    /// then a one-sided limit.
    pub boundary: bool,
}

/// Outcome for the set of points whose Birkhoff averages diverge.
#[derive(Debug, Clone)]
pub enum IrregularOutcome<T: Real = f64> {
    /// Every invariant measure shares the same average; no divergence.
    Empty,
    Value {
        value: T,
        /// Lower bounds from mixing a near-equilibrium witness into the
        /// equilibrium with vanishing weights 2^-n, n = 1..5; converges to
        /// the full pressure.
        diagnostic: Vec<T>,
    },
}

/// Minimum cycle mean of `weights` (parallel to `adj`) restricted to the
/// strongly connected node set `comp`, by Karp's recurrence with every node
/// as a source.
fn min_cycle_mean<T: Real>(comp: &[usize], adj: &[Vec<(usize, T)>]) -> Option<T> {
    let local: std::collections::BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let m = comp.len();
    // incoming edges in local indices
    let mut incoming: Vec<Vec<(usize, T)>> = vec![Vec::new(); m];
    let mut has_edge = false;
    for (i, &g) in comp.iter().enumerate() {
        for &(t, w) in &adj[g] {
            if let Some(&j) = local.get(&t) {
                incoming[j].push((i, w));
                has_edge = true;
            }
        }
    }
    if !has_edge {
        return None;
    }
    let mut dist: Vec<Vec<Option<T>>> = vec![vec![None; m]; m + 1];
    for v in 0..m {
        dist[0][v] = Some(T::zero());
    }
    for k in 1..=m {
        for v in 0..m {
            let mut best: Option<T> = None;
            for &(u, w) in &incoming[v] {
                if let Some(du) = dist[k - 1][u] {
                    let cand = du + w;
                    best = Some(match best {
                        None => cand,
                        Some(b) => b.min(cand),
                    });
                }
            }
            dist[k][v] = best;
        }
    }
    let mut mu: Option<T> = None;
    for v in 0..m {
        let dm = match dist[m][v] {
            Some(d) => d,
            None => continue,
        };
        let mut worst: Option<T> = None;
        for k in 0..m {
            if let Some(dk) = dist[k][v] {
                let ratio = (dm - dk) / real::<T>((m - k) as f64);
                worst = Some(match worst {
                    None => ratio,
                    Some(w) => w.max(ratio),
                });
            }
        }
        if let Some(w) = worst {
            mu = Some(match mu {
                None => w,
                Some(cur) => cur.min(w),
            });
        }
    }
    mu
}

fn weighted_adjacency<T: Real>(
    shift: &Subshift<T>,
    psi: &Potential<T>,
) -> Result<(Vec<crate::word::Word>, Vec<Vec<(usize, T)>>)> {
    if psi.alphabet() != shift.alphabet() {
        return Err(Error::domain("potential and shift use different alphabets"));
    }
    let graph = shift.sft_graph(psi.depth().saturating_sub(1).max(1))?;
    let mut adj: Vec<Vec<(usize, T)>> = Vec::with_capacity(graph.states.len());
    for (u, edges) in graph.edges.iter().enumerate() {
        let mut row = Vec::with_capacity(edges.len());
        for &(v, c) in edges {
            let mut word: Vec<Symbol> = graph.states[u].symbols().to_vec();
            word.push(c);
            row.push((v, psi.value(&word)));
        }
        adj.push(row);
    }
    Ok((graph.states, adj))
}

/// Range of `integral(psi) d mu` over invariant measures: the min and max
/// mean-weight cycle of the transition graph. Reducible graphs report the
/// union over components.
pub fn spectrum_domain<T: Real>(shift: &Subshift<T>, psi: &Potential<T>) -> Result<SpectrumDomain<T>> {
    let (_, adj) = weighted_adjacency(shift, psi)?;
    let plain: Vec<Vec<usize>> =
        adj.iter().map(|row| row.iter().map(|&(t, _)| t).collect()).collect();
    let comps = crate::pressure::strongly_connected_components(&plain);
    let neg: Vec<Vec<(usize, T)>> =
        adj.iter().map(|row| row.iter().map(|&(t, w)| (t, -w)).collect()).collect();
    let mut lo: Option<T> = None;
    let mut hi: Option<T> = None;
    for comp in &comps {
        if let Some(mn) = min_cycle_mean(comp, &adj) {
            lo = Some(match lo {
                None => mn,
                Some(x) => x.min(mn),
            });
        }
        if let Some(mx) = min_cycle_mean(comp, &neg) {
            let mx = -mx;
            hi = Some(match hi {
                None => mx,
                Some(x) => x.max(mx),
            });
        }
    }
    match (lo, hi) {
        (Some(alpha_min), Some(alpha_max)) => Ok(SpectrumDomain { alpha_min, alpha_max }),
        _ => Err(Error::domain("the transition graph carries no cycles")),
    }
}

fn level_of<T: Real>(mu: &MarkovMeasure<T>, psi: &Potential<T>) -> Result<T> {
    MeasureRep::from(mu.clone()).integrate(psi)
}

fn free_energy<T: Real>(mu: &MarkovMeasure<T>, phi: &Potential<T>) -> Result<T> {
    Ok(mu.entropy() + MeasureRep::from(mu.clone()).integrate(phi)?)
}

/// Conditional pressure of the level set at `alpha` via Legendre duality:
/// `inf_q P(phi + q psi) - q alpha`, minimized by matching the equilibrium
/// level to `alpha`.
pub fn spectrum_legendre<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
    psi: &Potential<T>,
    alpha: T,
) -> Result<SpectrumPoint<T>> {
    let domain = spectrum_domain(shift, psi)?;
    domain.check_member(alpha)?;
    if domain.is_degenerate() {
        // every invariant measure sits at this level; the constraint is void
        let witness = equilibrium_measure(shift, phi)?;
        let value = free_energy(&witness, phi)?;
        return Ok(SpectrumPoint { alpha, value, q: T::zero(), witness, boundary: true });
    }
    let span = domain.span();
    let edge = real::<T>(1e-9) * (T::one() + span);
    let nudge = span * real::<T>(1e-5);
    let (target, boundary) = if alpha - domain.alpha_min <= edge {
        (domain.alpha_min + nudge, true)
    } else if domain.alpha_max - alpha <= edge {
        (domain.alpha_max - nudge, true)
    } else {
        (alpha, false)
    };

    let combine = |q: T| -> Result<Potential<T>> {
        Potential::linear_combination(phi, T::one(), psi, q)
    };
    // level attained by the equilibrium at q; increasing in q
    let level_at = |q: T| -> Result<(T, MarkovMeasure<T>)> {
        let eq = equilibrium_measure(shift, &combine(q)?)?;
        Ok((level_of(&eq, psi)?, eq))
    };

    let gap = (target - domain.alpha_min).min(domain.alpha_max - target);
    let p_phi = transfer_pressure(shift, phi)?.value;
    let log_p = real::<T>(shift.alphabet().size() as f64).ln();
    let q_cap = (p_phi.abs() + phi.sup_norm() + log_p) / gap + T::one();
    // grow the endpoint until its equilibrium level passes the target;
    // stepping gently avoids underflowing e^{q psi} into dead rows, and an
    // evaluation failure marks the endpoint as already far enough
    let expand = |sign: T| -> T {
        let mut q = sign;
        let mut last_good = q;
        for _ in 0..80 {
            match level_at(q) {
                Ok((level, _)) => {
                    let reached =
                        if sign > T::zero() { level >= target } else { level <= target };
                    if reached || q.abs() >= q_cap {
                        return q;
                    }
                    last_good = q;
                    q = q * real::<T>(2.0);
                }
                Err(_) => return last_good,
            }
        }
        q
    };
    let mut lo = expand(-T::one());
    let mut hi = expand(T::one());
    let q_max = hi.abs().max(lo.abs());
    let tol_level = real::<T>(1e-9) * (T::one() + span);
    let mut q = T::zero();
    let mut witness = level_at(q)?.1;
    for _ in 0..300 {
        q = (lo + hi) * real::<T>(0.5);
        let (level, eq) = level_at(q)?;
        witness = eq;
        if (level - target).abs() <= tol_level {
            break;
        }
        if level < target {
            lo = q;
        } else {
            hi = q;
        }
        if hi - lo <= real::<T>(1e-14) * (T::one() + q_max) {
            break;
        }
    }
    let value = transfer_pressure(shift, &combine(q)?)?.value - q * target;
    Ok(SpectrumPoint { alpha, value, q, witness, boundary })
}

/// Brute-force oracle for the conditional pressure: scan a grid of
/// row-stochastic transition matrices on the graph presentation, keep the
/// ones whose level matches `alpha` up to the grid tolerance, then refine
/// the best by shrinking coordinate steps while tightening the constraint.
pub fn spectrum_direct<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
    psi: &Potential<T>,
    alpha: T,
    grid: usize,
) -> Result<T> {
    if grid < 10 {
        return Err(Error::domain("grid must be at least 10"));
    }
    let memory = phi.depth().max(psi.depth()).saturating_sub(1).max(1);
    let graph = shift.sft_graph(memory)?;
    let n = graph.states.len();
    if n > 4 {
        return Err(Error::domain(format!(
            "direct search supports at most 4 states; presentation has {n}"
        )));
    }
    let targets: Vec<Vec<usize>> = graph
        .edges
        .iter()
        .map(|row| row.iter().map(|&(t, _)| t).collect())
        .collect();
    let mut combos: u128 = 1;
    for row in &targets {
        let k = row.len() as u128;
        if k == 0 {
            return Err(Error::domain("a state has no outgoing transitions"));
        }
        // compositions of `grid` into k parts
        let mut c: u128 = 1;
        for i in 0..k - 1 {
            c = c * (grid as u128 + i + 1) / (i + 1);
        }
        combos = combos.saturating_mul(c);
    }
    if combos > 2_000_000 {
        return Err(Error::resource(
            format!("direct-search grid of {combos} transition matrices"),
            2_000_000,
        ));
    }

    let evaluate = |probs: &[Vec<T>]| -> Option<(T, T)> {
        let mut rows = vec![vec![T::zero(); n]; n];
        for (u, row) in probs.iter().enumerate() {
            let sum: T = row.iter().copied().sum();
            if !(sum > T::zero()) {
                return None;
            }
            for (slot, &t) in targets[u].iter().enumerate() {
                rows[u][t] = row[slot] / sum;
            }
        }
        let mu = MarkovMeasure::new(shift.alphabet(), graph.states.clone(), rows).ok()?;
        let level = level_of(&mu, psi).ok()?;
        let obj = free_energy(&mu, phi).ok()?;
        Some((level, obj))
    };

    let domain = spectrum_domain(shift, psi)?;
    let band = (domain.span() * real::<T>(2.0) / real::<T>(grid as f64)).max(real::<T>(1e-4));

    // phase 1: full grid scan
    let mut best: Option<(T, Vec<Vec<T>>)> = None;
    let mut stack: Vec<Vec<T>> = Vec::new();
    scan_rows(&targets, grid, 0, &mut stack, &mut |probs| {
        if let Some((level, obj)) = evaluate(probs) {
            if (level - alpha).abs() <= band {
                let better = match &best {
                    None => true,
                    Some((b, _)) => obj > *b,
                };
                if better {
                    best = Some((obj, probs.to_vec()));
                }
            }
        }
    });
    let (_, mut x) = best.ok_or_else(|| {
        Error::domain(format!(
            "no grid point reaches level {alpha}; the level is too close to the boundary for grid {grid}"
        ))
    })?;

    // phase 2: recursive local grids around the incumbent, shrinking the
    // step and the feasibility band together so the search slides along
    // the constraint instead of stalling on its ridge
    let free: Vec<(usize, usize)> = targets
        .iter()
        .enumerate()
        .filter(|(_, row)| row.len() >= 2)
        .flat_map(|(u, row)| (0..row.len()).map(move |slot| (u, slot)))
        .collect();
    let offsets: Vec<i32> = if free.len() <= 4 { vec![-2, -1, 0, 1, 2] } else { vec![-1, 0, 1] };
    let mut step = T::one() / real::<T>(grid as f64);
    let mut band_t = band;
    let band_floor = real::<T>(5e-7);
    for _ in 0..40 {
        let mut best_feasible: Option<(T, Vec<Vec<T>>)> = None;
        let mut least_miss: Option<(T, Vec<Vec<T>>)> = None;
        let mut index = vec![0usize; free.len()];
        loop {
            let mut cand = x.clone();
            for (pos, &(u, slot)) in free.iter().enumerate() {
                let off = real::<T>(offsets[index[pos]] as f64);
                cand[u][slot] = (cand[u][slot] + off * step).max(T::zero()).min(T::one());
            }
            if let Some((level, obj)) = evaluate(&cand) {
                let miss = (level - alpha).abs();
                if miss <= band_t {
                    let better = match &best_feasible {
                        None => true,
                        Some((b, _)) => obj > *b,
                    };
                    if better {
                        best_feasible = Some((obj, cand.clone()));
                    }
                }
                let closer = match &least_miss {
                    None => true,
                    Some((m, _)) => miss < *m,
                };
                if closer {
                    least_miss = Some((miss, cand));
                }
            }
            // advance the mixed-radix counter over offset vectors
            let mut pos = 0;
            loop {
                if pos == index.len() {
                    break;
                }
                index[pos] += 1;
                if index[pos] < offsets.len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
            if pos == index.len() {
                break;
            }
        }
        if let Some((_, cx)) = best_feasible {
            x = cx;
            step = step / real::<T>(3.0);
            band_t = (band_t / real::<T>(3.0)).max(band_floor);
        } else if let Some((_, cx)) = least_miss {
            // keep the step size: shrinking it here would stall the walk
            // short of the feasibility band
            x = cx;
        }
    }
    let (_, obj) = evaluate(&x)
        .ok_or_else(|| Error::numeric("refined transition matrix failed to evaluate"))?;
    Ok(obj)
}

fn scan_rows<T: Real>(
    targets: &[Vec<usize>],
    grid: usize,
    u: usize,
    stack: &mut Vec<Vec<T>>,
    visit: &mut impl FnMut(&[Vec<T>]),
) {
    if u == targets.len() {
        visit(stack);
        return;
    }
    let k = targets[u].len();
    let mut counts = vec![0usize; k];
    compositions(grid, k, 0, &mut counts, &mut |c| {
        let row: Vec<T> = c.iter().map(|&x| real::<T>(x as f64 / grid as f64)).collect();
        stack.push(row);
        scan_rows(targets, grid, u + 1, stack, visit);
        stack.pop();
    });
}

fn compositions(total: usize, k: usize, i: usize, counts: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    if i == k - 1 {
        counts[i] = total;
        visit(counts);
        return;
    }
    for c in 0..=total {
        counts[i] = c;
        compositions(total - c, k, i + 1, counts, visit);
    }
}

/// Dimension of the level set at `alpha` with respect to the metric scaled
/// by `phi`: the root `s` of `spectrum_legendre(-s phi, psi, alpha) = 0`.
pub fn dimension_spectrum<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
    psi: &Potential<T>,
    alpha: T,
    tol: T,
) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut phi_min = T::infinity();
    for w in shift.language(phi.depth())? {
        phi_min = phi_min.min(phi.value(w.symbols()));
    }
    if !(phi_min > T::zero()) {
        return Err(Error::domain(
            "the potential must be strictly positive on admissible windows",
        ));
    }
    let value_at = |s: T| -> Result<T> {
        Ok(spectrum_legendre(shift, &phi.scaled(-s), psi, alpha)?.value)
    };
    let f0 = value_at(T::zero())?;
    let target = tol * phi_min;
    if f0.abs() <= target {
        return Ok(T::zero());
    }
    if f0 < T::zero() {
        return Err(Error::numeric("level-set entropy evaluated negative"));
    }
    let mut lo = T::zero();
    let mut hi = f0 / phi_min;
    let mut mid = hi;
    for _ in 0..200 {
        mid = (lo + hi) * real::<T>(0.5);
        let v = value_at(mid)?;
        if v.abs() <= target {
            return Ok(mid);
        }
        if v > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * real::<T>(4.0) * hi.max(T::one()) {
            break;
        }
    }
    let residual = value_at(mid)?;
    if residual.abs() <= target.max(real::<T>(1e-8)) {
        Ok(mid)
    } else {
        Err(Error::numeric(format!(
            "bisection stalled with level-set pressure residual {residual}"
        )))
    }
}

/// Pressure carried by the set of points whose Birkhoff averages of `psi`
/// diverge: empty when all invariant measures share one level, otherwise
/// the full pressure of `phi`, with a sequence of lower bounds built from
/// vanishing-weight mixtures.
pub fn irregular_pressure<T: Real>(
    shift: &Subshift<T>,
    phi: &Potential<T>,
    psi: &Potential<T>,
) -> Result<IrregularOutcome<T>> {
    let domain = spectrum_domain(shift, psi)?;
    if domain.is_degenerate() {
        return Ok(IrregularOutcome::Empty);
    }
    let value = transfer_pressure(shift, phi)?.value;
    let mu = equilibrium_measure(shift, phi)?;
    let alpha_star = level_of(&mu, psi)?;
    let f_mu = free_energy(&mu, phi)?;
    // a witness at a nearby distinct level, taken toward the wider side
    let left = alpha_star - domain.alpha_min;
    let right = domain.alpha_max - alpha_star;
    let delta = domain.span() * real::<T>(0.05);
    let alpha_nu = if right >= left {
        alpha_star + delta.min(right * real::<T>(0.5))
    } else {
        alpha_star - delta.min(left * real::<T>(0.5))
    };
    let nu = spectrum_legendre(shift, phi, psi, alpha_nu)?.witness;
    let f_nu = free_energy(&nu, phi)?;
    // entropy and the integral are affine in mixtures, so the constrained
    // infimum over weights t <= 2^-n sits at the endpoint
    let mut diagnostic = Vec::with_capacity(5);
    for n in 1..=5u32 {
        let t = real::<T>(0.5).powi(n as i32);
        let endpoint = t * f_nu + (T::one() - t) * f_mu;
        diagnostic.push(endpoint.min(f_mu));
    }
    Ok(IrregularOutcome::Value { value, diagnostic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, Word};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn full2() -> Subshift<f64> {
        Subshift::full(2).unwrap()
    }

    fn golden() -> Subshift<f64> {
        Subshift::sft(2, vec![w("11")]).unwrap()
    }

    fn ones_indicator() -> Potential<f64> {
        Potential::indicator(Alphabet::new(2).unwrap(), &w("1")).unwrap()
    }

    fn binary_entropy(a: f64) -> f64 {
        if a <= 0.0 || a >= 1.0 {
            0.0
        } else {
            -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
        }
    }

    #[test]
    fn domain_examples() {
        let d = spectrum_domain(&full2(), &ones_indicator()).unwrap();
        assert!((d.alpha_min - 0.0).abs() < 1e-12);
        assert!((d.alpha_max - 1.0).abs() < 1e-12);

        let d = spectrum_domain(&golden(), &ones_indicator()).unwrap();
        assert!((d.alpha_min - 0.0).abs() < 1e-12);
        assert!((d.alpha_max - 0.5).abs() < 1e-12);

        let c = Potential::constant(Alphabet::new(2).unwrap(), 0.7);
        let d = spectrum_domain(&full2(), &c).unwrap();
        assert!((d.alpha_min - 0.7).abs() < 1e-12);
        assert!((d.alpha_max - 0.7).abs() < 1e-12);
        assert!(d.is_degenerate());
    }

    #[test]
    fn domain_union_over_components() {
        // forbidding "01" leaves the two fixed points in separate components
        let x = Subshift::<f64>::sft(2, vec![w("01")]).unwrap();
        let d = spectrum_domain(&x, &ones_indicator()).unwrap();
        assert!((d.alpha_min - 0.0).abs() < 1e-12);
        assert!((d.alpha_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_matches_binary_entropy() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let psi = ones_indicator();
        let p = spectrum_legendre(&full2(), &zero, &psi, 0.5).unwrap();
        assert!((p.value - 2.0_f64.ln()).abs() < 1e-9);
        assert!(!p.boundary);
        let rows = p.witness.rows();
        assert!((rows[0][1] - 0.5).abs() < 1e-7, "Bernoulli(1/2) witness");

        let p = spectrum_legendre(&full2(), &zero, &psi, 0.25).unwrap();
        assert!((p.value - 0.5623351446188083).abs() < 1e-6);
        let level = level_of(&p.witness, &psi).unwrap();
        assert!((level - 0.25).abs() < 1e-6);
        let fe = free_energy(&p.witness, &zero).unwrap();
        assert!((fe - p.value).abs() < 1e-6);

        for a in [0.1, 0.3, 0.7, 0.9] {
            let p = spectrum_legendre(&full2(), &zero, &psi, a).unwrap();
            assert!(
                (p.value - binary_entropy(a)).abs() < 1e-6,
                "alpha {a}: {} vs {}",
                p.value,
                binary_entropy(a)
            );
        }

        // phi = psi shifts the value by alpha
        let p = spectrum_legendre(&full2(), &psi, &psi, 0.25).unwrap();
        assert!((p.value - (0.5623351446188083 + 0.25)).abs() < 1e-6);
    }

    #[test]
    fn legendre_boundary_and_outside() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let psi = ones_indicator();
        let p = spectrum_legendre(&full2(), &zero, &psi, 0.0).unwrap();
        assert!(p.boundary);
        assert!(p.value.abs() < 0.01, "one-sided limit of H at 0, got {}", p.value);

        let err = spectrum_legendre(&full2(), &zero, &psi, 1.2).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('0') && msg.contains('1'), "message names the interval: {msg}");
    }

    #[test]
    fn legendre_concavity() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let psi = ones_indicator();
        let alphas: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let values: Vec<f64> = alphas
            .iter()
            .map(|&a| spectrum_legendre(&full2(), &zero, &psi, a).unwrap().value)
            .collect();
        for i in 1..values.len() - 1 {
            let second = values[i + 1] - 2.0 * values[i] + values[i - 1];
            assert!(second <= 1e-8, "second difference {second} at {}", alphas[i]);
        }
    }

    #[test]
    fn envelope_attains_pressure() {
        let a2 = Alphabet::new(2).unwrap();
        let phi = Potential::from_entries(a2, 1, vec![(w("0"), 0.2), (w("1"), -0.1)]).unwrap();
        let psi = ones_indicator();
        let p_phi = transfer_pressure(&full2(), &phi).unwrap().value;
        let eq = equilibrium_measure(&full2(), &phi).unwrap();
        let alpha_star = level_of(&eq, &psi).unwrap();
        let d = spectrum_domain(&full2(), &psi).unwrap();
        let margin = d.span() * 1e-3;
        let mut alphas: Vec<f64> = (0..41)
            .map(|i| d.alpha_min + margin + (d.span() - 2.0 * margin) * i as f64 / 40.0)
            .collect();
        let nearest = alphas
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - alpha_star).abs().partial_cmp(&(b.1 - alpha_star).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        alphas[nearest] = alpha_star;
        let max = alphas
            .iter()
            .map(|&a| spectrum_legendre(&full2(), &phi, &psi, a).unwrap().value)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((max - p_phi).abs() < 1e-6, "envelope max {max} vs pressure {p_phi}");
    }

    #[test]
    fn direct_oracle_agrees() {
        let zero = Potential::zero(Alphabet::new(2).unwrap());
        let psi = ones_indicator();
        let v = spectrum_direct(&full2(), &zero, &psi, 0.5, 200).unwrap();
        assert!((v - 2.0_f64.ln()).abs() < 1e-4);

        for a in [0.2, 0.8] {
            let direct = spectrum_direct(&full2(), &zero, &psi, a, 200).unwrap();
            let legendre = spectrum_legendre(&full2(), &zero, &psi, a).unwrap().value;
            assert!((direct - legendre).abs() < 1e-3, "alpha {a}: {direct} vs {legendre}");
        }

        let direct = spectrum_direct(&golden(), &zero, &psi, 0.25, 200).unwrap();
        let legendre = spectrum_legendre(&golden(), &zero, &psi, 0.25).unwrap().value;
        assert!((direct - legendre).abs() < 1e-3, "golden: {direct} vs {legendre}");
    }

    #[test]
    fn dimension_examples() {
        let a2 = Alphabet::new(2).unwrap();
        let log2 = Potential::constant(a2, 2.0_f64.ln());
        let psi = ones_indicator();
        let s = dimension_spectrum(&full2(), &log2, &psi, 0.5, 1e-8).unwrap();
        assert!((s - 1.0).abs() < 1e-6);

        let s = dimension_spectrum(&full2(), &log2, &psi, 0.25, 1e-8).unwrap();
        assert!((s - 0.8112781244591328).abs() < 1e-6);

        let c = Potential::constant(a2, 0.5);
        let s = dimension_spectrum(&full2(), &c, &psi, 0.25, 1e-8).unwrap();
        assert!((s - 0.5623351446188083 / 0.5).abs() < 1e-5);
    }

    #[test]
    fn irregular_outcomes() {
        let a2 = Alphabet::new(2).unwrap();
        let zero = Potential::zero(a2);
        let psi = ones_indicator();
        let constant = Potential::constant(a2, 0.3);
        match irregular_pressure(&full2(), &zero, &constant).unwrap() {
            IrregularOutcome::Empty => {}
            IrregularOutcome::Value { .. } => panic!("constant level must be empty"),
        }

        match irregular_pressure(&full2(), &zero, &psi).unwrap() {
            IrregularOutcome::Empty => panic!("expected a value"),
            IrregularOutcome::Value { value, diagnostic } => {
                assert!((value - 2.0_f64.ln()).abs() < 1e-10);
                assert_eq!(diagnostic.len(), 5);
                for i in 1..diagnostic.len() {
                    assert!(diagnostic[i] >= diagnostic[i - 1] - 1e-12);
                }
                assert!(diagnostic[4] > value - 1e-3);
                assert!(diagnostic[4] <= value + 1e-12);
            }
        }

        let log_phi = ((1.0 + 5.0_f64.sqrt()) / 2.0_f64).ln();
        match irregular_pressure(&golden(), &zero, &psi).unwrap() {
            IrregularOutcome::Empty => panic!("expected a value"),
            IrregularOutcome::Value { value, diagnostic } => {
                assert!((value - log_phi).abs() < 1e-10);
                assert!(diagnostic[4] > value - 1e-3);
            }
        }
    }

    #[test]
    fn f32_domain_smoke() {
        let x = Subshift::<f32>::full(2).unwrap();
        let psi = Potential::<f32>::indicator(Alphabet::new(2).unwrap(), &w("1")).unwrap();
        let d = spectrum_domain(&x, &psi).unwrap();
        assert!((d.alpha_min - 0.0).abs() < 1e-6);
        assert!((d.alpha_max - 1.0).abs() < 1e-6);
    }
}
