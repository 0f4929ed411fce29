//! Symbolic dynamics toolkit for one-sided subshifts over small alphabets.
//!
//! The crate covers four layers that build on each other:
//!
//! * subshift models (full shifts, shifts of finite type, beta-shifts, gap
//!   shifts) with language enumeration and exact word counting,
//! * an edit metric on finite words together with ball growth reports,
//!   specification checks and a nearest-good-word projection,
//! * measures (Markov chains, cylinder frequency tables), a weak-star
//!   distance built from cylinder indicators, and topological pressure via
//!   transfer operators and language counting,
//! * Birkhoff spectra in Legendre form with brute-force cross checks, Bowen
//!   dimension via the root of a pressure equation, and a generator that
//!   glues good words into orbit prefixes tracking a prescribed chain of
//!   target measures.
//!
//! Numeric code is generic over the scalar via [`Real`]; `f64` is the
//! default type parameter everywhere and the alias types at the crate root
//! fix that choice for callers that do not care.

pub mod config;
pub mod edit;
pub mod measure;
pub mod moran;
pub mod pressure;
pub mod shift;
pub mod variational;
pub mod word;

mod error;

pub use error::{Error, Result};
pub use word::{lex_compare, Alphabet, LexOrder, Symbol, Word};

pub use config::{
    build_good_set, build_shift, parse_itinerary, parse_markov_measure, parse_potential,
    parse_shift_config, serialize_markov_measure, serialize_potential, serialize_shift_config,
    GapConfig, GoodSetConfig, ShiftConfig, ShiftKindConfig,
};
pub use edit::{
    ball_bound_report, birkhoff_continuity_bound, check_free_concatenation,
    check_w_specification, edit_ball, edit_distance, empirical_mistake_function, glue,
    nearest_in, nearest_in_with_horizon, periodic_birkhoff_average, weak_star_continuity_bound,
    BallBoundReport, FreeConcatenationReport, GoodRule, GoodSet, MistakeFunction,
    WSpecificationReport,
};
pub use measure::{
    empirical_measure, mixture, weak_star_distance, CylinderTable, MarkovMeasure, MeasureRep,
    Potential, SequencePrefix,
};
pub use moran::{
    generate_point, good_word_error, good_words, katok_count_check, katok_onset, make_schedule,
    track_convergence, GeneratedPoint, Itinerary, KatokCheck, Schedule, ScheduleStage,
    SegmentRecord, TrackReport, TrackRow,
};
pub use pressure::{
    bowen_dimension, counting_pressure, cover_pressure_sum, entropy, entropy_with,
    equilibrium_measure, sgap_series_entropy, transfer_pressure, EntropyOutcome,
    PressureEstimate, TransferAnalysis,
};
pub use shift::{beta_expansion, BetaExpansion, GapSet, Subshift};
pub use variational::{
    dimension_spectrum, irregular_pressure, spectrum_direct, spectrum_domain, spectrum_legendre,
    IrregularOutcome, SpectrumDomain, SpectrumPoint,
};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar bound for every numeric routine in the crate.
///
/// `f32` and `f64` both satisfy it; the blanket impl picks up any float-like
/// type that provides the `num-traits` surface used here.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + std::iter::Sum + std::fmt::Debug + std::fmt::Display + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + std::iter::Sum
        + std::fmt::Debug
        + std::fmt::Display
        + 'static
{
}

/// Shorthand used internally to lift literal constants into the scalar type.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

/// Concrete `f64` instantiations for callers that do not use the generics.
pub type Subshift64 = Subshift<f64>;
pub type Potential64 = Potential<f64>;
pub type MarkovMeasure64 = MarkovMeasure<f64>;
pub type MeasureRep64 = MeasureRep<f64>;
