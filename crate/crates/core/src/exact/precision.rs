use serde::{Deserialize, Serialize};

/// Working precision (bits of mantissa) for interval evaluation: evaluation
/// starts at `start` and may double up to `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start: 64,
            cap: 4096,
        }
    }
}

impl Precision {
    pub fn with_cap(cap: u32) -> Self {
        Precision {
            start: 64.min(cap),
            cap,
        }
    }

    /// Precisions tried in order: `start, 2·start, …` up to `cap`.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap.max(self.start);
        std::iter::successors(Some(self.start.max(8)), move |&p| {
            if p >= cap {
                None
            } else {
                Some((p * 2).min(cap))
            }
        })
    }

    /// Evaluates `pred` along the precision ladder until it returns a definite
    /// answer. `None` from `pred` means "undecided at this precision".
    pub fn decide(&self, mut pred: impl FnMut(u32) -> Option<bool>) -> Decision {
        for p in self.ladder() {
            if let Some(v) = pred(p) {
                return Decision::from(v);
            }
        }
        Decision::Undecided
    }

    /// Like [`decide`](Self::decide) but for arbitrary outputs.
    pub fn refine<T>(&self, f: impl FnMut(u32) -> Option<T>) -> Option<T> {
        self.ladder().find_map(f)
    }
}

/// Three-valued outcome of a certified predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl From<bool> for Decision {
    fn from(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }
}

impl Decision {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Decision::True => Some(true),
            Decision::False => Some(false),
            Decision::Undecided => None,
        }
    }
}
