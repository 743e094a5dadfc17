//! The search loop: address the lowest-priority present flaw until none is
//! left or the step cap is hit.

use std::io::Write;

use serde::Serialize;

use super::charges::ChargeReport;
use crate::error::Result;
use crate::rng::{stream, StreamRng};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub flaw: usize,
    pub kind: String,
    pub footprint_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunTrace {
    pub steps: usize,
    pub addressed: Vec<usize>,
    pub records: Vec<TraceRecord>,
    pub terminated_flawless: bool,
}

impl RunTrace {
    /// One JSON object per addressed flaw.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.records.iter().filter(|r| r.kind == kind).count()
    }
}

/// A flaw system over an opaque state. `first_flaw` must return the present
/// flaw that comes first in a fixed priority order.
pub trait LocalSearch {
    type State;
    type Flaw;

    fn first_flaw(&mut self, state: &Self::State) -> Option<Self::Flaw>;

    fn address(&mut self, flaw: &Self::Flaw, state: &mut Self::State, step: usize) -> Result<()>;

    /// `(flaw id, kind, footprint size)` for the trace.
    fn describe(&self, flaw: &Self::Flaw) -> (usize, &'static str, usize);
}

pub fn run_local_search<L: LocalSearch>(search: &mut L, state: &mut L::State, step_cap: usize) -> Result<RunTrace> {
    let mut trace = RunTrace::default();
    loop {
        let Some(flaw) = search.first_flaw(state) else {
            trace.terminated_flawless = true;
            return Ok(trace);
        };
        if trace.steps >= step_cap {
            return Ok(trace);
        }
        let (id, kind, size) = search.describe(&flaw);
        trace.addressed.push(id);
        trace.records.push(TraceRecord {
            step: trace.steps,
            flaw: id,
            kind: kind.to_string(),
            footprint_size: size,
        });
        search.address(&flaw, state, trace.steps)?;
        trace.steps += 1;
    }
}

/// `(T0 + 64)/ε` when charges are known, otherwise one million.
pub fn default_step_cap(report: Option<&ChargeReport>) -> usize {
    match report {
        Some(r) if r.epsilon > 0.0 && r.t0.is_finite() => {
            let cap = ((r.t0 + 64.0) / r.epsilon).ceil();
            if cap >= usize::MAX as f64 {
                usize::MAX
            } else {
                cap.max(1.0) as usize
            }
        }
        _ => 1_000_000,
    }
}

pub type Detect<'a, S> = Box<dyn Fn(&S) -> bool + 'a>;
pub type Action<'a, S> = Box<dyn Fn(&S, &mut StreamRng) -> S + 'a>;

/// An explicitly listed flaw. Its priority is its position in the list.
pub struct FlawSpec<'a, S> {
    pub id: usize,
    pub kind: &'static str,
    pub detect: Detect<'a, S>,
    pub address: Action<'a, S>,
    /// Identifiers the flaw depends on; flaws with disjoint footprints are
    /// assumed not to affect each other's detection.
    pub footprint: Vec<usize>,
}

const RESCAN_EVERY: usize = 1024;

/// Runs an explicit flaw list. After each step only flaws whose footprint
/// meets the addressed flaw's footprint are re-tested; a full rescan runs
/// every 1024 steps and before declaring success. Step `k` draws from the
/// stream `(seed, k)`.
pub fn run_flaw_list<S>(initial: S, flaws: &[FlawSpec<'_, S>], step_cap: usize, seed: u64) -> (S, RunTrace) {
    let overlaps: Vec<Vec<usize>> = flaws
        .iter()
        .map(|f| {
            (0..flaws.len())
                .filter(|&j| flaws[j].footprint.iter().any(|x| f.footprint.contains(x)))
                .collect()
        })
        .collect();
    let mut state = initial;
    let mut present: Vec<bool> = flaws.iter().map(|f| (f.detect)(&state)).collect();
    let mut trace = RunTrace::default();
    loop {
        if trace.steps > 0 && trace.steps % RESCAN_EVERY == 0 {
            for (p, f) in present.iter_mut().zip(flaws) {
                *p = (f.detect)(&state);
            }
        }
        let mut chosen = None;
        for pass in 0..2 {
            for i in 0..flaws.len() {
                if present[i] {
                    if (flaws[i].detect)(&state) {
                        chosen = Some(i);
                        break;
                    }
                    present[i] = false;
                }
            }
            if chosen.is_some() || pass == 1 {
                break;
            }
            for (p, f) in present.iter_mut().zip(flaws) {
                *p = (f.detect)(&state);
            }
        }
        let Some(i) = chosen else {
            trace.terminated_flawless = true;
            return (state, trace);
        };
        if trace.steps >= step_cap {
            return (state, trace);
        }
        let f = &flaws[i];
        trace.addressed.push(f.id);
        trace.records.push(TraceRecord {
            step: trace.steps,
            flaw: f.id,
            kind: f.kind.to_string(),
            footprint_size: f.footprint.len(),
        });
        let mut rng = stream(seed, &[trace.steps as u64]);
        state = (f.address)(&state, &mut rng);
        trace.steps += 1;
        for &j in &overlaps[i] {
            present[j] = (flaws[j].detect)(&state);
        }
    }
}
