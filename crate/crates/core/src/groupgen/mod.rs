//! Exhaustive enumeration of norm-one units of an order inside a matrix-norm
//! ball, trace census against the trace windows, and certified generation of
//! large balls by small-norm elements.

mod census;
mod enumerate;
mod generate;
mod lattice;

pub use census::{
    invariant_trace_check, trace_census, CensusReport, CheckKind, CheckSummary, ClassCounts, InvariantTraceReport,
    TraceCount, TraceSummary, Violation,
};
pub use enumerate::{enumerate_unit_ball, Enumeration, EnumerationJob, UndecidedNorm, DEFAULT_BUDGET};
pub use generate::{
    verify_generation, GenerationCertificate, GenerationOptions, SearchMethod, TargetCertificate, TargetStatus,
};
pub use lattice::ZCoords;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bounds::BoundsError;
use crate::exact::{format_sig, ExactError, FieldElement, Interval};
use crate::hyp::{ElementOrder, HypError, IsometryClass, Mat2};
use crate::quat::{QuatElement, QuatError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupGenError {
    #[error("norm cap must be at least 1, got {0}")]
    CapTooSmall(String),
    #[error("the algebra must be split at the distinguished place and ramified at every other real place")]
    NotFuchsian,
    #[error("coefficient box has {candidates} candidates, above the budget of {budget}")]
    BoxOverflow { candidates: String, budget: u64 },
    #[error("coefficient box not certified at {0} bits")]
    BoxUncertified(u32),
    #[error("integer coordinates overflowed 64 bits")]
    CoordinateOverflow,
    #[error("lattice setup failed: {0}")]
    Lattice(String),
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("element {0} is not in the order")]
    NotInOrder(String),
    #[error("word for target {0} does not multiply back to it")]
    VerificationFailed(usize),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A unit `x ∈ O¹` with its image `ρ(x)` and invariants.
#[derive(Clone, Debug)]
pub struct ElementRecord {
    pub z: ZCoords,
    pub coords: QuatElement,
    pub matrix: Mat2,
    /// Enclosure of `max |ρ(x)ᵢⱼ|`.
    pub norm: Interval,
    /// Norm exactly equal to the cap.
    pub boundary: bool,
    pub trace: FieldElement,
    pub class: IsometryClass,
    pub translation_length: Option<Interval>,
}

impl ElementRecord {
    pub fn order(&self) -> Option<ElementOrder> {
        self.class.order
    }

    pub fn trace_decimal(&self) -> String {
        match self.trace.as_rational() {
            Some(r) => format_sig(r, 10),
            None => self.trace.embed_prec(64).decimal(10),
        }
    }

    fn coord_strings(&self) -> Vec<String> {
        self.coords.coords().iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for ElementRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ElementRecord", 10)?;
        st.serialize_field("z", &self.z)?;
        st.serialize_field("coords", &self.coord_strings())?;
        st.serialize_field("norm", &self.norm.decimal(10))?;
        st.serialize_field("boundary", &self.boundary)?;
        st.serialize_field("trace", &self.trace.to_string())?;
        st.serialize_field("trace_decimal", &self.trace_decimal())?;
        st.serialize_field("class", &self.class.kind)?;
        st.serialize_field("order", &self.class.order)?;
        st.serialize_field("translation_length", &self.translation_length.as_ref().map(|t| t.decimal(10)))?;
        st.serialize_field("matrix", &self.matrix)?;
        st.end()
    }
}

/// CSV with one row per record.
pub fn records_csv(records: &[ElementRecord]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "index",
        "z",
        "coords",
        "norm",
        "boundary",
        "trace",
        "trace_decimal",
        "class",
        "order",
        "translation_length",
    ])
    .expect("in-memory csv");
    for (i, r) in records.iter().enumerate() {
        let z: Vec<String> = r.z.iter().map(i64::to_string).collect();
        let order = match r.class.order {
            Some(ElementOrder::Finite(n)) => n.to_string(),
            Some(ElementOrder::Infinite) => "infinity".into(),
            Some(ElementOrder::NotFound) => "not_found".into(),
            None => String::new(),
        };
        w.write_record([
            i.to_string(),
            z.join(" "),
            r.coord_strings().join(";"),
            r.norm.decimal(10),
            r.boundary.to_string(),
            r.trace.to_string(),
            r.trace_decimal(),
            r.class.kind.to_string(),
            order,
            r.translation_length.as_ref().map(|t| t.decimal(10)).unwrap_or_default(),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}
