//! State specifications read from JSON.
//!
//! A spec is either a named family with its parameters,
//!
//! ```json
//! {"family": "ghz", "n": 3, "a": 0.6, "b": 0.8}
//! ```
//!
//! or an explicit ket: `{"dims": [2, 2], "amplitudes": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]}`
//! with `[re, im]` pairs in row-major order. Complex family parameters accept a
//! plain number or an `[re, im]` pair.

use crate::error::CliError;
use qmono_core::states::{
    antisymmetric_333, generalized_w_class, ghz, random_mixed, random_pure, theorem1_saturating, theorem2_saturating,
    theorem3_saturating, w_state, w_vacuum_superposition, WClassCoefficients,
};
use qmono_core::tensor::{MixedState, PureState};
use qmono_core::C64;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Complex {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Complex> for C64 {
    fn from(c: Complex) -> Self {
        match c {
            Complex::Real(re) => C64::new(re, 0.0),
            Complex::Pair([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Ghz {
        n: usize,
        a: Complex,
        /// Defaults to `sqrt(1 - |a|^2)`.
        b: Option<Complex>,
    },
    W {
        n: usize,
    },
    #[serde(rename = "antisymmetric333")]
    Antisymmetric333,
    /// Either explicit `coefficients` rows or `n` and `d` for uniform ones.
    Wclass {
        coefficients: Option<Vec<Vec<Complex>>>,
        n: Option<usize>,
        d: Option<usize>,
    },
    Wvacuum {
        p: f64,
        coefficients: Option<Vec<Vec<Complex>>>,
        n: Option<usize>,
        d: Option<usize>,
    },
    Theorem1 {
        a: Complex,
        b: Complex,
    },
    Theorem2 {
        a: Complex,
        b: Complex,
        c: Complex,
    },
    Theorem3 {
        a: Complex,
        b: Complex,
        c: Complex,
    },
    RandomPure {
        dims: Vec<usize>,
        #[serde(default)]
        seed: u64,
    },
    RandomMixed {
        dims: Vec<usize>,
        rank: usize,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Explicit {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
    /// Rescale any nonzero vector instead of requiring unit norm.
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Family(Family),
    Explicit(Explicit),
}

/// A loaded state; pure input stays pure so exact formulas apply.
#[derive(Clone, Debug)]
pub enum State {
    Pure(PureState),
    Mixed(MixedState),
}

impl State {
    pub fn dims(&self) -> &[usize] {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn to_mixed(&self) -> MixedState {
        match self {
            State::Pure(p) => MixedState::from_pure(p),
            State::Mixed(m) => m.clone(),
        }
    }
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))?;
        let has_family = value.as_object().map(|o| o.contains_key("family"));
        let spec = match has_family {
            None => return Err(CliError::Spec("expected a JSON object".into())),
            Some(true) => serde_json::from_value(value).map(StateSpec::Family),
            Some(false) => serde_json::from_value(value).map(StateSpec::Explicit),
        };
        spec.map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn build(&self) -> Result<State, CliError> {
        let state = match self {
            StateSpec::Explicit(e) => {
                let amps: Vec<C64> = e.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
                let psi = if e.normalize {
                    PureState::from_unnormalized(e.dims.clone(), amps)
                } else {
                    PureState::renormalized(e.dims.clone(), amps)
                };
                State::Pure(psi?)
            }
            StateSpec::Family(f) => build_family(f)?,
        };
        Ok(state)
    }
}

fn coefficients(rows: &Option<Vec<Vec<Complex>>>, n: Option<usize>, d: Option<usize>) -> Result<WClassCoefficients, CliError> {
    match (rows, n, d) {
        (Some(rows), None, None) => {
            let rows = rows.iter().map(|r| r.iter().map(|&c| c.into()).collect()).collect();
            Ok(WClassCoefficients::renormalized(rows)?)
        }
        (None, Some(n), Some(d)) => Ok(WClassCoefficients::uniform(n, d)?),
        _ => Err(CliError::Spec("give either `coefficients` or both `n` and `d`".into())),
    }
}

fn build_family(f: &Family) -> Result<State, CliError> {
    let pure = match f {
        Family::Ghz { n, a, b } => {
            let a: C64 = (*a).into();
            let b = match b {
                Some(b) => (*b).into(),
                None => C64::new((1.0 - a.norm_sqr()).max(0.0).sqrt(), 0.0),
            };
            ghz(*n, a, b)?
        }
        Family::W { n } => w_state(*n)?,
        Family::Antisymmetric333 => antisymmetric_333(),
        Family::Wclass { coefficients: rows, n, d } => generalized_w_class(&coefficients(rows, *n, *d)?)?,
        Family::Wvacuum { p, coefficients: rows, n, d } => w_vacuum_superposition(*p, &coefficients(rows, *n, *d)?)?,
        Family::Theorem1 { a, b } => theorem1_saturating((*a).into(), (*b).into())?,
        Family::Theorem2 { a, b, c } => theorem2_saturating((*a).into(), (*b).into(), (*c).into())?,
        Family::Theorem3 { a, b, c } => theorem3_saturating((*a).into(), (*b).into(), (*c).into())?,
        Family::RandomPure { dims, seed } => random_pure(dims, *seed)?,
        Family::RandomMixed { dims, rank, seed } => return Ok(State::Mixed(random_mixed(dims, *rank, *seed)?)),
    };
    Ok(State::Pure(pure))
}
