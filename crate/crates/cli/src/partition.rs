//! Partition expressions such as `"0|1,2"`.
//!
//! Indices left out of both sides are traced out before the measure is
//! evaluated, so `"0|1"` on a three-party state acts on the `(0, 1)` marginal.

use crate::error::CliError;
use crate::spec::State;
use qmono_core::tensor::{Bipartition, MixedState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Partition {
    pub fn parse(expr: &str) -> Result<Self, CliError> {
        let err = |reason: String| CliError::Partition { expr: expr.to_string(), reason };
        let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        let mut sides = compact.split('|');
        let (a, b) = match (sides.next(), sides.next(), sides.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(err("expected exactly one '|'".into())),
        };
        let side = |s: &str| -> Result<Vec<usize>, CliError> {
            if s.is_empty() {
                return Err(err("both sides need at least one index".into()));
            }
            s.split(',').map(|t| t.parse::<usize>().map_err(|_| err(format!("bad index {t:?}")))).collect()
        };
        let (side_a, side_b) = (side(a)?, side(b)?);
        let mut all: Vec<usize> = side_a.iter().chain(&side_b).copied().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(err(format!("index {} appears twice", w[0])));
        }
        Ok(Self { side_a, side_b })
    }

    /// `0 | 1,...,n-1`
    pub fn first_vs_rest(parties: usize) -> Self {
        Self { side_a: vec![0], side_b: (1..parties).collect() }
    }

    pub fn parties(&self) -> Vec<usize> {
        let mut keep: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        keep.sort_unstable();
        keep
    }

    pub fn covers(&self, parties: usize) -> bool {
        self.parties() == (0..parties).collect::<Vec<_>>()
    }

    /// Bipartition of the marginal on [`Partition::parties`], renumbered.
    pub fn local(&self, parties: usize) -> Result<Bipartition, CliError> {
        let keep = self.parties();
        if let Some(&i) = keep.iter().find(|&&i| i >= parties) {
            return Err(CliError::Partition { expr: self.to_string(), reason: format!("index {i} out of range for {parties} parties") });
        }
        let pos = |i: &usize| keep.binary_search(i).expect("kept index");
        Ok(Bipartition::new(self.side_a.iter().map(pos).collect(), self.side_b.iter().map(pos).collect())?)
    }

    /// The state restricted to the named parties plus the matching bipartition.
    /// Pure input covering every party stays pure.
    pub fn restrict(&self, state: &State) -> Result<(State, Bipartition), CliError> {
        let n = state.dims().len();
        let part = self.local(n)?;
        if self.covers(n) {
            return Ok((state.clone(), part));
        }
        let keep = self.parties();
        let reduced: MixedState = match state {
            State::Pure(p) => p.reduced(&keep)?,
            State::Mixed(m) => qmono_core::tensor::partial_trace(m, &keep)?,
        };
        Ok((State::Mixed(reduced), part))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}
