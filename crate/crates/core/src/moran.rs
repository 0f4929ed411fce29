//! Orbit-prefix generation: enumerate the words whose empirical measure
//! sits near a target, schedule block lengths and repetition counts whose
//! growth ratios stay under a declared bound, then draw, project and glue
//! blocks into an admissible prefix that tracks a chain of target measures.

use crate::edit::{nearest_in, GoodSet, MistakeFunction};
use crate::measure::{weak_star_distance, CylinderTable, MarkovMeasure, MeasureRep, SequencePrefix};
use crate::shift::Subshift;
use crate::word::{pack, Word};
use crate::{real, Error, Real, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tolerance grid for block tolerances, scanned from strict to loose.
const EPS_GRID: [f64; 10] = [0.01, 0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.4];

/// Largest block length the schedule probe will enumerate.
const PROBE_MAX_LEN: usize = 24;

/// Word-count ceiling for a single probed language level.
const PROBE_MAX_WORDS: u128 = 50_000;

/// Tolerance at which the probe stops looking for longer blocks.
const QUALITY_EPS: f64 = 0.15;

/// Certified gap between the empirical measure of a point of `[w]` and the
/// periodic-extension surrogate of `w`: the straddling windows plus the
/// truncation tail of the distance series.
pub fn good_word_error<T: Real>(alphabet: crate::word::Alphabet, n: usize, d: usize) -> T {
    let p = alphabet.size() as u32;
    let mut exponent: u32 = 0;
    for j in 1..=d as u32 {
        exponent = exponent.saturating_add(p.saturating_pow(j)).min(10_000);
    }
    let tail = real::<T>(0.5).powi(exponent as i32);
    real::<T>((d - 1) as f64 / n as f64) + tail
}

/// Words `w` of length `n` whose periodic-extension empirical measure at
/// depth `d` lies within `eps` of `mu`, with the surrogate error budgeted
/// in: every point of `[w]` then has empirical distance below `eps`.
pub fn good_words<T: Real>(
    shift: &Subshift<T>,
    mu: &MeasureRep<T>,
    eps: T,
    n: usize,
    d: usize,
) -> Result<Vec<Word>> {
    if d == 0 || n < d {
        return Err(Error::domain("good words need n >= d >= 1"));
    }
    if mu.alphabet() != shift.alphabet() {
        return Err(Error::domain("measure and shift use different alphabets"));
    }
    let err = good_word_error::<T>(shift.alphabet(), n, d);
    let mut out = Vec::new();
    for w in shift.language(n)? {
        let table = CylinderTable::from_word_periodic(shift.alphabet(), &w, d)?;
        let (dist, _) = weak_star_distance(&MeasureRep::from(table), mu, d)?;
        if dist + err < eps {
            out.push(w);
        }
    }
    Ok(out)
}

/// Outcome of the counting comparison against `e^{n (h - delta)}`.
#[derive(Debug, Clone)]
pub struct KatokCheck<T: Real = f64> {
    pub count: u128,
    pub threshold: T,
    pub pass: bool,
}

/// Counts the good words of length `n` for `mu` and compares against the
/// entropy threshold `e^{n (h_mu - delta)}`. The surrogate depth is the
/// Markov memory plus one, the smallest depth that sees the transitions.
pub fn katok_count_check<T: Real>(
    shift: &Subshift<T>,
    mu: &MarkovMeasure<T>,
    eps: T,
    delta: T,
    n: usize,
) -> Result<KatokCheck<T>> {
    let d = mu.memory() + 1;
    let words = good_words(shift, &MeasureRep::from(mu.clone()), eps, n, d)?;
    let count = words.len() as u128;
    let threshold = ((mu.entropy() - delta) * real::<T>(n as f64)).exp();
    let pass = real::<T>(count as f64) >= threshold;
    Ok(KatokCheck { count, threshold, pass })
}

/// Smallest length up to `n_max` at which the counting comparison passes.
pub fn katok_onset<T: Real>(
    shift: &Subshift<T>,
    mu: &MarkovMeasure<T>,
    eps: T,
    delta: T,
    n_max: usize,
) -> Result<Option<usize>> {
    let d = mu.memory() + 1;
    for n in d..=n_max {
        if katok_count_check(shift, mu, eps, delta, n)?.pass {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Chain of target measures, evaluated at a common depth; the generated
/// point visits each in turn.
#[derive(Debug, Clone)]
pub struct Itinerary<T: Real = f64> {
    measures: Vec<MeasureRep<T>>,
    depth: usize,
    eps_chain: T,
    consecutive: Vec<T>,
}

impl<T: Real> Itinerary<T> {
    /// Validates that consecutive targets stay within `eps_chain` of each
    /// other in the cylinder distance at `depth`.
    pub fn new(measures: Vec<MeasureRep<T>>, depth: usize, eps_chain: T) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::domain("itinerary needs at least one measure"));
        }
        if depth == 0 {
            return Err(Error::domain("itinerary depth must be at least 1"));
        }
        let alphabet = measures[0].alphabet();
        for m in &measures[1..] {
            if m.alphabet() != alphabet {
                return Err(Error::domain("itinerary measures use different alphabets"));
            }
        }
        let mut consecutive = Vec::with_capacity(measures.len().saturating_sub(1));
        for pair in measures.windows(2) {
            let (dist, _) = weak_star_distance(&pair[0], &pair[1], depth)?;
            if dist > eps_chain {
                return Err(Error::domain(format!(
                    "consecutive itinerary measures are {dist} apart, above the declared {eps_chain}"
                )));
            }
            consecutive.push(dist);
        }
        Ok(Itinerary { measures, depth, eps_chain, consecutive })
    }

    pub fn singleton(measure: MeasureRep<T>, depth: usize) -> Result<Self> {
        Self::new(vec![measure], depth, T::infinity())
    }

    pub fn measures(&self) -> &[MeasureRep<T>] {
        &self.measures
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn eps_chain(&self) -> T {
        self.eps_chain
    }

    pub fn consecutive_distances(&self) -> &[T] {
        &self.consecutive
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }
}

/// One stage of a schedule: `reps` blocks of length `n` drawn from the
/// good words at tolerance `eps`.
#[derive(Debug, Clone)]
pub struct ScheduleStage<T: Real = f64> {
    pub n: usize,
    pub reps: usize,
    pub eps: T,
}

/// Block plan for a generated point, one stage per itinerary entry.
#[derive(Debug, Clone)]
pub struct Schedule<T: Real = f64> {
    pub stages: Vec<ScheduleStage<T>>,
    pub theta: T,
    pub mistake: MistakeFunction,
}

impl<T: Real> Schedule<T> {
    pub fn total_nominal_length(&self) -> usize {
        self.stages.iter().map(|s| s.n * s.reps).sum()
    }

    /// Checks the two growth-ratio bounds: each new block length is small
    /// against the mass already placed, and each accumulated prefix is
    /// small against the mass through the next stage.
    pub fn verify_ratios(&self) -> Result<()> {
        let g = |n: usize| self.mistake.value(n);
        let k = self.stages.len();
        let slack = real::<T>(1e-12);
        for i in 0..k.saturating_sub(1) {
            let placed: usize = self.stages[..=i]
                .iter()
                .map(|s| s.n.saturating_sub(g(s.n)) * s.reps)
                .sum();
            if placed == 0 {
                return Err(Error::domain("a schedule stage places no mass"));
            }
            let next = self.stages[i + 1].n + g(self.stages[i + 1].n);
            let r1 = real::<T>(next as f64) / real::<T>(placed as f64);
            if r1 > self.theta + slack {
                return Err(Error::resource(
                    format!(
                        "new-block ratio {r1} exceeds theta {} after stage {}",
                        self.theta,
                        i + 1
                    ),
                    placed as u64,
                ));
            }
            let upper: usize =
                self.stages[..=i].iter().map(|s| (s.n + g(s.n)) * s.reps).sum();
            let through_next: usize = self.stages[..=i + 1]
                .iter()
                .map(|s| s.n.saturating_sub(g(s.n)) * s.reps)
                .sum();
            let r2 = real::<T>(upper as f64) / real::<T>(through_next as f64);
            if r2 > self.theta + slack {
                return Err(Error::resource(
                    format!(
                        "accumulated-mass ratio {r2} exceeds theta {} at stage {}",
                        self.theta,
                        i + 1
                    ),
                    through_next as u64,
                ));
            }
        }
        Ok(())
    }
}

fn target_entropy<T: Real>(mu: &MeasureRep<T>) -> Result<T> {
    match mu {
        MeasureRep::Markov(m) => Ok(m.entropy()),
        MeasureRep::Table(t) => t.conditional_block_entropy(),
    }
}

/// Builds a schedule: probes the smallest block length and tolerance at
/// which each target has enough good words, then allocates repetition
/// counts backward so the stage masses grow geometrically and the ratio
/// bounds hold with total length at least `target_len`.
pub fn make_schedule<T: Real>(
    shift: &Subshift<T>,
    itinerary: &Itinerary<T>,
    mistake: MistakeFunction,
    theta: T,
    target_len: usize,
) -> Result<Schedule<T>> {
    if !(theta > T::zero() && theta < real::<T>(0.25)) {
        return Err(Error::domain("theta must lie in (0, 1/4)"));
    }
    if target_len == 0 {
        return Err(Error::domain("target length must be at least 1"));
    }
    let d = itinerary.depth();
    let mut stages: Vec<ScheduleStage<T>> = Vec::with_capacity(itinerary.len());
    // probe each target: at every block length take the tightest tolerance
    // whose good-word count still grows at entropy rate minus a fixed
    // defect, keep the tightest candidate seen, and stop early once a
    // tolerance at or under the quality threshold is reached; tighter
    // blocks make the glued prefix track its target more closely
    for (j, mu) in itinerary.measures().iter().enumerate() {
        let rate_floor = target_entropy(mu)? - real::<T>(0.1);
        let mut picked: Option<(usize, T)> = None;
        'lengths: for n in d.max(2)..=PROBE_MAX_LEN {
            if shift.language_count(n)? > PROBE_MAX_WORDS {
                break;
            }
            let err = good_word_error::<T>(shift.alphabet(), n, d);
            let mut dists: Vec<T> = Vec::new();
            for w in shift.language(n)? {
                let table = CylinderTable::from_word_periodic(shift.alphabet(), &w, d)?;
                let (dist, _) = weak_star_distance(&MeasureRep::from(table), mu, d)?;
                dists.push(dist);
            }
            for &eps_f in &EPS_GRID {
                let eps = real::<T>(eps_f);
                let count = dists.iter().filter(|&&dv| dv + err < eps).count();
                if count == 0 {
                    continue;
                }
                let rate = real::<T>(count as f64).ln() / real::<T>(n as f64);
                if rate >= rate_floor {
                    let tighter = match &picked {
                        None => true,
                        Some((_, best_eps)) => eps < *best_eps,
                    };
                    if tighter {
                        picked = Some((n, eps));
                    }
                    if eps <= real::<T>(QUALITY_EPS) {
                        break 'lengths;
                    }
                    break;
                }
            }
        }
        let (n, eps) = picked.ok_or_else(|| {
            Error::resource(
                format!(
                    "no block length up to {PROBE_MAX_LEN} gives itinerary entry {} enough good words",
                    j + 1
                ),
                PROBE_MAX_WORDS as u64,
            )
        })?;
        stages.push(ScheduleStage { n, reps: 0, eps });
    }

    // backward geometric allocation with margin under theta, then round
    let k = stages.len();
    let base = theta * real::<T>(0.9);
    let mut weights = vec![T::zero(); k];
    let mut total_w = T::zero();
    for (i, w) in weights.iter_mut().enumerate() {
        *w = base.powi((k - 1 - i) as i32);
        total_w = total_w + *w;
    }
    for (i, stage) in stages.iter_mut().enumerate() {
        let mass = real::<T>(target_len as f64) * weights[i] / total_w;
        let reps = (mass / real::<T>(stage.n as f64)).round().to_f64().unwrap_or(1.0) as usize;
        stage.reps = reps.max(1);
    }
    // make sure rounding did not lose the target length
    let placed: usize = stages[..k - 1].iter().map(|s| s.n * s.reps).sum();
    if placed < target_len {
        let last = &mut stages[k - 1];
        let need = target_len - placed;
        last.reps = last.reps.max(need.div_ceil(last.n));
    }

    let mut schedule = Schedule { stages, theta, mistake };
    // repair rounding violations by doubling the undersized side
    for _ in 0..200 {
        match schedule.verify_ratios() {
            Ok(()) => break,
            Err(_) => {
                if !repair_ratios(&mut schedule) {
                    break;
                }
                if schedule.total_nominal_length() > target_len.saturating_mul(100) {
                    return Err(Error::resource(
                        format!(
                            "ratio bound theta={} needs more than 100x the target length {target_len}",
                            schedule.theta
                        ),
                        target_len as u64,
                    ));
                }
            }
        }
    }
    schedule.verify_ratios()?;
    Ok(schedule)
}

/// One doubling step toward satisfying the ratio bounds; returns false if
/// nothing was adjusted.
fn repair_ratios<T: Real>(schedule: &mut Schedule<T>) -> bool {
    let g = |n: usize| schedule.mistake.value(n);
    let theta = schedule.theta;
    let k = schedule.stages.len();
    for i in 0..k.saturating_sub(1) {
        let placed: usize = schedule.stages[..=i]
            .iter()
            .map(|s| s.n.saturating_sub(g(s.n)) * s.reps)
            .sum();
        let next = schedule.stages[i + 1].n + g(schedule.stages[i + 1].n);
        if placed == 0 || real::<T>(next as f64) / real::<T>(placed as f64) > theta {
            for s in schedule.stages[..=i].iter_mut() {
                s.reps *= 2;
            }
            return true;
        }
        let upper: usize =
            schedule.stages[..=i].iter().map(|s| (s.n + g(s.n)) * s.reps).sum();
        let through_next: usize = schedule.stages[..=i + 1]
            .iter()
            .map(|s| s.n.saturating_sub(g(s.n)) * s.reps)
            .sum();
        if real::<T>(upper as f64) / real::<T>(through_next as f64) > theta {
            schedule.stages[i + 1].reps *= 2;
            return true;
        }
    }
    false
}

/// Log entry for one glued block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentRecord {
    /// Stage index, 0-based.
    pub stage: usize,
    /// Block index within the stage, 0-based.
    pub block: usize,
    /// Nominal block length before projection.
    pub n: usize,
    /// Length after projection into the good set.
    pub glued_len: usize,
    /// Cumulative prefix length through this block.
    pub end: usize,
}

/// A generated orbit prefix together with its segment log.
#[derive(Debug, Clone)]
pub struct GeneratedPoint {
    pub prefix: SequencePrefix,
    pub segments: Vec<SegmentRecord>,
}

/// Draws blocks seeded-uniformly from each stage's good words, projects
/// them into `good`, glues, and verifies admissibility and the per-segment
/// length-defect bound.
pub fn generate_point<T: Real>(
    shift: &Subshift<T>,
    itinerary: &Itinerary<T>,
    schedule: &Schedule<T>,
    good: &GoodSet<T>,
    seed: u64,
) -> Result<GeneratedPoint> {
    if schedule.stages.len() != itinerary.len() {
        return Err(Error::domain(format!(
            "schedule has {} stages for {} itinerary entries",
            schedule.stages.len(),
            itinerary.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prefix = SequencePrefix::new(shift.alphabet(), Vec::new())?;
    let mut segments = Vec::new();
    let mut end = 0usize;
    for (stage_idx, (stage, mu)) in
        schedule.stages.iter().zip(itinerary.measures()).enumerate()
    {
        let pool = good_words(shift, mu, stage.eps, stage.n, itinerary.depth())?;
        if pool.is_empty() {
            return Err(Error::Construction(format!(
                "no good words for stage {} (n={}, eps={})",
                stage_idx + 1,
                stage.n,
                stage.eps
            )));
        }
        let bound = schedule.mistake.value(stage.n);
        for block in 0..stage.reps {
            let w = &pool[rng.gen_range(0..pool.len())];
            let (projected, _) = nearest_in(w, good)?;
            let l = projected.len();
            if l.abs_diff(stage.n) > bound {
                return Err(Error::Construction(format!(
                    "block {} of stage {} glued to length {l}, defect above the bound {bound}",
                    block + 1,
                    stage_idx + 1
                )));
            }
            prefix.extend_from_word(&projected)?;
            end += l;
            segments.push(SegmentRecord { stage: stage_idx, block, n: stage.n, glued_len: l, end });
        }
    }
    let full = prefix.prefix_word(prefix.len());
    if !shift.contains(&full)? {
        return Err(Error::Construction(
            "glued prefix is not admissible; the good set does not concatenate freely".into(),
        ));
    }
    Ok(GeneratedPoint { prefix, segments })
}

/// One diagnostic row: the empirical measure of the prefix through `t`
/// against the target of the segment's stage.
#[derive(Debug, Clone)]
pub struct TrackRow<T: Real = f64> {
    pub segment: usize,
    pub stage: usize,
    pub t: usize,
    pub distance: T,
}

/// Convergence diagnostics for a generated point.
#[derive(Debug, Clone)]
pub struct TrackReport<T: Real = f64> {
    pub rows: Vec<TrackRow<T>>,
    /// Per itinerary entry: the closest empirical approach over the late
    /// checkpoints of that entry's own stage.
    pub limit_summary: Vec<T>,
}

/// Evaluates the tracking distances at segment ends (subsampled when the
/// log is long) by a single incremental pass over the prefix.
pub fn track_convergence<T: Real>(
    point: &GeneratedPoint,
    itinerary: &Itinerary<T>,
    schedule: &Schedule<T>,
    d: usize,
) -> Result<TrackReport<T>> {
    if d == 0 {
        return Err(Error::domain("tracking depth must be at least 1"));
    }
    let total_blocks: usize = schedule.stages.iter().map(|s| s.reps).sum();
    if point.segments.len() != total_blocks {
        return Err(Error::domain(format!(
            "segment log has {} entries, schedule prescribes {total_blocks}",
            point.segments.len()
        )));
    }
    match point.segments.last() {
        Some(last) if last.end == point.prefix.len() => {}
        _ => return Err(Error::domain("segment log does not match the prefix length")),
    }
    let alphabet = point.prefix.alphabet();
    // checkpoints: every segment when short, else a stride plus stage ends
    let max_rows = 400usize;
    let stride = point.segments.len().div_ceil(max_rows).max(1);
    let mut selected = vec![false; point.segments.len()];
    for (i, seg) in point.segments.iter().enumerate() {
        let stage_end = i + 1 == point.segments.len()
            || point.segments[i + 1].stage != seg.stage;
        if i % stride == 0 || stage_end {
            selected[i] = true;
        }
    }

    let p = alphabet.size();
    let table_size = p.checked_pow(d as u32).ok_or_else(|| {
        Error::domain(format!("depth {d} cylinder table does not fit in memory"))
    })?;
    let mut counts = vec![0u64; table_size];
    let symbols = point.prefix.symbols();
    let mut rows = Vec::new();
    let mut next_seg = 0usize;
    let mut per_stage_rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); itinerary.len()];
    for (pos, _) in symbols.iter().enumerate() {
        if pos + 1 >= d {
            counts[pack(p, &symbols[pos + 1 - d..=pos])] += 1;
        }
        while next_seg < point.segments.len() && point.segments[next_seg].end == pos + 1 {
            let seg = &point.segments[next_seg];
            if selected[next_seg] && seg.end >= d {
                let windows = seg.end - d + 1;
                let freqs: Vec<T> = counts
                    .iter()
                    .map(|&c| real::<T>(c as f64 / windows as f64))
                    .collect();
                let table =
                    CylinderTable::from_frequencies(alphabet, d, freqs, Some(seg.end))?;
                let rep = MeasureRep::from(table);
                let (dist, _) =
                    weak_star_distance(&rep, &itinerary.measures()[seg.stage], d)?;
                rows.push(TrackRow {
                    segment: next_seg,
                    stage: seg.stage,
                    t: seg.end,
                    distance: dist,
                });
                per_stage_rows[seg.stage].push((seg.end, dist));
            }
            next_seg += 1;
        }
    }
    let mut limit_summary = Vec::with_capacity(itinerary.len());
    for stage_rows in &per_stage_rows {
        if stage_rows.is_empty() {
            limit_summary.push(T::infinity());
            continue;
        }
        let late_from = stage_rows.len() / 2;
        let min = stage_rows[late_from..]
            .iter()
            .map(|&(_, dist)| dist)
            .fold(T::infinity(), T::min);
        limit_summary.push(min);
    }
    Ok(TrackReport { rows, limit_summary })
}
