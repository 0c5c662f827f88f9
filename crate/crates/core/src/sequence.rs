//! Coefficient sequences: two-sided maps from the integers to the rationals.
//!
//! Three base representations are provided, ordered by how much an algorithm
//! can know about them:
//!
//! - [`PeriodicSequence`]: exactly periodic, the decidable class;
//! - [`PerturbedSequence`]: periodic outside a finite set of exceptions;
//! - [`OracleSequence`]: a black-box evaluator (closure or subprocess) with a
//!   mandatory memo cache.
//!
//! On top of those, [`Sequence`] adds the structural kinds the gadget
//! constructions need: a two-phase step (one value below zero, another from
//! zero on), two prefix-scanning gates driven by an oracle sequence, and the
//! round-robin interleaving of several sequences. Everything except the
//! purely periodic representations is reported as non-periodic to the exact
//! engine, which is what keeps the undecidable class out of it.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::EvalError;
use crate::rat::{format_rat, Rat};

/// An exactly periodic sequence; `value(n) = period[n mod L]` with the
/// mathematical (always nonnegative) modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSequence {
    period: Vec<Rat>,
}

impl PeriodicSequence {
    /// Panics on an empty period.
    pub fn new(period: Vec<Rat>) -> Self {
        assert!(!period.is_empty(), "empty period");
        PeriodicSequence { period }
    }

    pub fn constant(value: Rat) -> Self {
        PeriodicSequence {
            period: vec![value],
        }
    }

    pub fn period(&self) -> &[Rat] {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn value(&self, n: i64) -> Rat {
        let l = self.period.len() as i64;
        self.period[n.rem_euclid(l) as usize].clone()
    }

    /// The sequence n -> value(n + s), as a rotated period.
    pub fn rotated(&self, s: i64) -> PeriodicSequence {
        let l = self.period.len() as i64;
        PeriodicSequence {
            period: (0..l).map(|i| self.value(i + s)).collect(),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.period.iter().all(Zero::is_zero)
    }
}

/// A periodic sequence overridden at finitely many indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedSequence {
    base: PeriodicSequence,
    exceptions: BTreeMap<i64, Rat>,
}

impl PerturbedSequence {
    pub fn new(base: PeriodicSequence, exceptions: BTreeMap<i64, Rat>) -> Self {
        PerturbedSequence { base, exceptions }
    }

    pub fn base(&self) -> &PeriodicSequence {
        &self.base
    }

    pub fn exceptions(&self) -> &BTreeMap<i64, Rat> {
        &self.exceptions
    }

    pub fn value(&self, n: i64) -> Rat {
        match self.exceptions.get(&n) {
            Some(v) => v.clone(),
            None => self.base.value(n),
        }
    }

    /// True when every exception coincides with the base value, so the
    /// sequence is in fact purely periodic.
    pub fn is_vacuous(&self) -> bool {
        self.exceptions
            .iter()
            .all(|(&n, v)| *v == self.base.value(n))
    }
}

/// Least common multiple of the period lengths.
pub fn lcm_period(seqs: &[PeriodicSequence]) -> usize {
    assert!(!seqs.is_empty(), "lcm_period of an empty list");
    seqs.iter().fold(1usize, |acc, s| acc.lcm(&s.period_len()))
}

type Evaluator = Box<dyn FnMut(i64) -> Result<Rat, EvalError> + Send>;

struct OracleState {
    eval: Evaluator,
    cache: BTreeMap<i64, Rat>,
}

/// A black-box computable sequence with a memo cache.
///
/// The handle is shared: clones evaluate through the same cache, so any two
/// evaluations of the same index return identical values even when the
/// underlying evaluator is nondeterministic (first answer wins). Access is
/// serialized per handle, one outstanding request at a time.
#[derive(Clone)]
pub struct OracleSequence {
    command: Option<String>,
    state: Arc<Mutex<OracleState>>,
}

impl OracleSequence {
    pub fn from_fn<F>(eval: F) -> Self
    where
        F: FnMut(i64) -> Result<Rat, EvalError> + Send + 'static,
    {
        OracleSequence {
            command: None,
            state: Arc::new(Mutex::new(OracleState {
                eval: Box::new(eval),
                cache: BTreeMap::new(),
            })),
        }
    }

    /// Like [`from_fn`](Self::from_fn), remembering the external command the
    /// evaluator talks to. The command is what equation files store.
    pub fn with_command<F>(command: impl Into<String>, eval: F) -> Self
    where
        F: FnMut(i64) -> Result<Rat, EvalError> + Send + 'static,
    {
        let mut s = Self::from_fn(eval);
        s.command = Some(command.into());
        s
    }

    /// A total function of the index, wrapped as an infallible oracle.
    pub fn from_values<F>(mut f: F) -> Self
    where
        F: FnMut(i64) -> Rat + Send + 'static,
    {
        Self::from_fn(move |n| Ok(f(n)))
    }

    pub fn command(&self) -> Option<&str> {
        self.command.as_deref()
    }

    pub fn eval(&self, n: i64) -> Result<Rat, EvalError> {
        let mut st = self.state.lock().expect("oracle mutex poisoned");
        if let Some(v) = st.cache.get(&n) {
            return Ok(v.clone());
        }
        let v = (st.eval)(n)?;
        st.cache.insert(n, v.clone());
        Ok(v)
    }

    /// Largest nonnegative index evaluated so far.
    pub fn explored_max(&self) -> Option<i64> {
        let st = self.state.lock().expect("oracle mutex poisoned");
        st.cache.keys().rfind(|&&n| n >= 0).copied()
    }

    /// Smallest nonnegative index with a cached nonzero value.
    pub fn first_nonzero_seen(&self) -> Option<i64> {
        let st = self.state.lock().expect("oracle mutex poisoned");
        st.cache
            .iter()
            .find(|(&n, v)| n >= 0 && !v.is_zero())
            .map(|(&n, _)| n)
    }

    /// Smallest nonnegative index with a cached zero value.
    pub fn first_zero_seen(&self) -> Option<i64> {
        let st = self.state.lock().expect("oracle mutex poisoned");
        st.cache
            .iter()
            .find(|(&n, v)| n >= 0 && v.is_zero())
            .map(|(&n, _)| n)
    }

    fn same_handle(&self, other: &OracleSequence) -> bool {
        Arc::ptr_eq(&self.state, &other.state)
    }
}

impl std::fmt::Debug for OracleSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleSequence")
            .field("command", &self.command)
            .finish_non_exhaustive()
    }
}

/// Any coefficient sequence.
#[derive(Debug, Clone)]
pub enum Sequence {
    Periodic(PeriodicSequence),
    Perturbed(PerturbedSequence),
    Oracle(OracleSequence),
    /// Two-phase step: `below` for n < 0, `from` for n >= 0. Covers the
    /// half-line gadgets that no finite exception map can express.
    Step {
        below: Rat,
        from: Rat,
    },
    /// Trailing coefficient of the signal equation built on `v`: the value at
    /// n is -1 while v(0), ..., v(-n) are all zero (vacuously for n > 0) and
    /// 0 once a nonzero element has appeared in that prefix.
    SignalCoeff {
        v: OracleSequence,
    },
    /// 1 for n < 0; for n >= 0, 1 while v(0), ..., v(n) are all nonzero and
    /// 0 from the first zero on.
    NonzeroPrefixFlag {
        v: OracleSequence,
    },
    /// Round-robin interleaving: value(n) = parts[n mod k].value(n div k).
    Interleaved(Vec<Sequence>),
}

impl Sequence {
    pub fn constant(value: Rat) -> Self {
        Sequence::Periodic(PeriodicSequence::constant(value))
    }

    pub fn zero() -> Self {
        Sequence::constant(Rat::zero())
    }

    pub fn periodic(period: Vec<Rat>) -> Self {
        Sequence::Periodic(PeriodicSequence::new(period))
    }

    pub fn perturbed(base: Vec<Rat>, exceptions: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        Sequence::Perturbed(PerturbedSequence::new(
            PeriodicSequence::new(base),
            exceptions.into_iter().collect(),
        ))
    }

    pub fn eval(&self, n: i64) -> Result<Rat, EvalError> {
        match self {
            Sequence::Periodic(s) => Ok(s.value(n)),
            Sequence::Perturbed(s) => Ok(s.value(n)),
            Sequence::Oracle(s) => s.eval(n),
            Sequence::Step { below, from } => Ok(if n < 0 { below.clone() } else { from.clone() }),
            Sequence::SignalCoeff { v } => {
                // -w(-n) where w(m) = 1 for m < 0 and, for m >= 0, 1 exactly
                // when v(0..=m) is all zero.
                let m = -n;
                if m < 0 {
                    return Ok(-Rat::one());
                }
                for k in 0..=m {
                    if !v.eval(k)?.is_zero() {
                        return Ok(Rat::zero());
                    }
                }
                Ok(-Rat::one())
            }
            Sequence::NonzeroPrefixFlag { v } => {
                if n < 0 {
                    return Ok(Rat::one());
                }
                for k in 0..=n {
                    if v.eval(k)?.is_zero() {
                        return Ok(Rat::zero());
                    }
                }
                Ok(Rat::one())
            }
            Sequence::Interleaved(parts) => {
                let k = parts.len() as i64;
                let j = n.rem_euclid(k) as usize;
                parts[j].eval(n.div_euclid(k))
            }
        }
    }

    /// The purely periodic view of this sequence, when one exists: the
    /// sequence itself for [`Periodic`](Sequence::Periodic), the base for a
    /// perturbed sequence whose exceptions are all vacuous, and the
    /// materialized interleaving when every part is purely periodic.
    pub fn as_periodic(&self) -> Option<PeriodicSequence> {
        match self {
            Sequence::Periodic(s) => Some(s.clone()),
            Sequence::Perturbed(s) if s.is_vacuous() => Some(s.base().clone()),
            Sequence::Interleaved(parts) => {
                let periodic: Vec<PeriodicSequence> = parts
                    .iter()
                    .map(Sequence::as_periodic)
                    .collect::<Option<_>>()?;
                let k = periodic.len();
                let l = lcm_period(&periodic).max(1);
                let period = (0..(k * l) as i64)
                    .map(|n| periodic[(n as usize) % k].value(n.div_euclid(k as i64)))
                    .collect();
                Some(PeriodicSequence::new(period))
            }
            _ => None,
        }
    }

    /// Gate for the exact engine.
    pub fn is_purely_periodic(&self) -> bool {
        self.as_periodic().is_some()
    }

    /// Base period plus finite exception map, when this sequence has one.
    /// Used to keep interleavings of perturbed sequences structural.
    fn as_perturbed(&self) -> Option<(PeriodicSequence, BTreeMap<i64, Rat>)> {
        match self {
            Sequence::Periodic(s) => Some((s.clone(), BTreeMap::new())),
            Sequence::Perturbed(s) => Some((s.base().clone(), s.exceptions().clone())),
            _ => None,
        }
    }

    /// True when the sequence is zero everywhere that is cheaply decidable
    /// (periodic-with-exceptions kinds only; structural kinds return false).
    pub fn is_identically_zero(&self) -> bool {
        match self.as_perturbed() {
            Some((base, exceptions)) => {
                base.is_identically_zero() && exceptions.values().all(Zero::is_zero)
            }
            None => false,
        }
    }

    /// Round-robin interleaving of `parts`, kept as structured as the parts
    /// allow: periodic parts interleave to a periodic sequence of period
    /// k*lcm, periodic-with-exceptions parts to a perturbed sequence, and
    /// anything else to the lazy [`Interleaved`](Sequence::Interleaved) kind.
    pub fn interleave(parts: Vec<Sequence>) -> Sequence {
        assert!(!parts.is_empty(), "interleave of an empty list");
        if parts.len() == 1 {
            return parts.into_iter().next().unwrap();
        }
        let k = parts.len();
        if let Some(decomposed) = parts
            .iter()
            .map(Sequence::as_perturbed)
            .collect::<Option<Vec<_>>>()
        {
            let bases: Vec<PeriodicSequence> = decomposed.iter().map(|(b, _)| b.clone()).collect();
            let l = lcm_period(&bases).max(1);
            let period: Vec<Rat> = (0..(k * l) as i64)
                .map(|n| bases[(n as usize) % k].value(n.div_euclid(k as i64)))
                .collect();
            let mut exceptions = BTreeMap::new();
            for (j, (_, exc)) in decomposed.into_iter().enumerate() {
                for (m, v) in exc {
                    exceptions.insert(m * k as i64 + j as i64, v);
                }
            }
            let seq = PerturbedSequence::new(PeriodicSequence::new(period), exceptions);
            if seq.exceptions().is_empty() {
                return Sequence::Periodic(seq.base().clone());
            }
            return Sequence::Perturbed(seq);
        }
        Sequence::Interleaved(parts)
    }

    /// Oracle handles reachable from this sequence (used for narratives and
    /// serialization).
    pub fn oracles(&self) -> Vec<&OracleSequence> {
        match self {
            Sequence::Oracle(v)
            | Sequence::SignalCoeff { v }
            | Sequence::NonzeroPrefixFlag { v } => {
                vec![v]
            }
            Sequence::Interleaved(parts) => parts.iter().flat_map(Sequence::oracles).collect(),
            _ => Vec::new(),
        }
    }

    /// Render a value for error messages and pretty-printers.
    pub fn describe(&self) -> String {
        match self {
            Sequence::Periodic(s) => format!(
                "periodic({})",
                s.period()
                    .iter()
                    .map(format_rat)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            Sequence::Perturbed(s) => format!(
                "perturbed({} exceptions over periodic({}))",
                s.exceptions().len(),
                s.base()
                    .period()
                    .iter()
                    .map(format_rat)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            Sequence::Oracle(o) => match o.command() {
                Some(c) => format!("oracle({c})"),
                None => "oracle(<closure>)".to_string(),
            },
            Sequence::Step { below, from } => {
                format!(
                    "step({} below 0, {} from 0)",
                    format_rat(below),
                    format_rat(from)
                )
            }
            Sequence::SignalCoeff { .. } => "signal-gate".to_string(),
            Sequence::NonzeroPrefixFlag { .. } => "nonzero-prefix-flag".to_string(),
            Sequence::Interleaved(parts) => format!("interleave(k={})", parts.len()),
        }
    }
}

/// Structural equality where it is decidable; oracle-backed kinds compare by
/// handle identity or, failing that, by command.
impl PartialEq for Sequence {
    fn eq(&self, other: &Self) -> bool {
        use Sequence::*;
        match (self, other) {
            (Periodic(a), Periodic(b)) => a == b,
            (Perturbed(a), Perturbed(b)) => a == b,
            (
                Step {
                    below: a1,
                    from: a2,
                },
                Step {
                    below: b1,
                    from: b2,
                },
            ) => a1 == b1 && a2 == b2,
            (Oracle(a), Oracle(b)) => {
                a.same_handle(b) || (a.command().is_some() && a.command() == b.command())
            }
            (SignalCoeff { v: a }, SignalCoeff { v: b })
            | (NonzeroPrefixFlag { v: a }, NonzeroPrefixFlag { v: b }) => {
                a.same_handle(b) || (a.command().is_some() && a.command() == b.command())
            }
            (Interleaved(a), Interleaved(b)) => a == b,
            _ => false,
        }
    }
}
