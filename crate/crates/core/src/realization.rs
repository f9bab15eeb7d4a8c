//! Realizations: over/under choices at every virtual crossing.
//!
//! Assignments are enumerated lexicographically over the virtual crossings in
//! id order, with [`Over::First`] before [`Over::Second`]. Triviality is
//! three-valued: the greedy simplifier may certify an unlink, the Jones
//! invariant may certify non-triviality, and otherwise the status is unknown.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{Diagram, Edge, Over};
use crate::error::{Error, Result};
use crate::invariants::{jones, unlink_value};
use crate::moves::{simplify_traced, virtual_r2_pair, MoveSite};
use crate::poly::LaurentPoly;

/// Largest number of virtual crossings enumerated.
pub const MAX_VIRTUAL_CROSSINGS: usize = 20;

/// Over-strand choice per virtual crossing id.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<usize, Over>);

impl Assignment {
    pub fn new(choices: impl IntoIterator<Item = (usize, Over)>) -> Self {
        Assignment(choices.into_iter().collect())
    }

    /// The `index`-th assignment of `ids` in lexicographic order.
    pub fn nth(ids: &[usize], index: u64) -> Self {
        let m = ids.len();
        Assignment(
            ids.iter()
                .enumerate()
                .map(|(j, &c)| {
                    let bit = index >> (m - 1 - j) & 1;
                    (c, if bit == 1 { Over::Second } else { Over::First })
                })
                .collect(),
        )
    }

    pub fn get(&self, c: usize) -> Option<Over> {
        self.0.get(&c).copied()
    }

    /// One digit per virtual crossing in id order: `1` for [`Over::First`],
    /// `2` for [`Over::Second`].
    pub fn code(&self) -> String {
        self.0
            .values()
            .map(|o| match o {
                Over::First => '1',
                Over::Second => '2',
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    TrivialCertified,
    NontrivialCertified,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::TrivialCertified => "trivial-certified",
            Status::NontrivialCertified => "nontrivial-certified",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Moves that take the realization to a crossing-free unlink.
    Reduction {
        moves: Vec<MoveSite>,
    },
    /// A Jones value different from the unlink value.
    Jones {
        value: LaurentPoly,
    },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub assignment: Assignment,
    #[serde(skip)]
    pub diagram: Diagram,
    pub status: Status,
    pub jones: LaurentPoly,
    pub certificate: Certificate,
}

pub fn realize(d: &Diagram, a: &Assignment) -> Result<Diagram> {
    let ids = d.virtual_ids();
    if let Some(c) = a.0.keys().find(|c| !ids.contains(c)) {
        return Err(Error::Assignment(format!("crossing {c} is not virtual")));
    }
    if let Some(c) = ids.iter().find(|c| !a.0.contains_key(c)) {
        return Err(Error::Assignment(format!(
            "virtual crossing {c} has no choice"
        )));
    }
    let crossings = (0..d.crossing_count())
        .map(|c| match a.get(c) {
            Some(o) => d.realized(c, o),
            None => d.crossings()[c],
        })
        .collect();
    Diagram::new(crossings, d.free_loops())
}

fn check_bound(d: &Diagram) -> Result<Vec<usize>> {
    let ids = d.virtual_ids();
    if ids.len() > MAX_VIRTUAL_CROSSINGS {
        return Err(Error::BoundExceeded {
            what: "virtual crossings",
            limit: MAX_VIRTUAL_CROSSINGS,
            actual: ids.len(),
        });
    }
    Ok(ids)
}

/// All `2^m` realizations in lexicographic assignment order.
pub fn enumerate_realizations(
    d: &Diagram,
) -> Result<impl Iterator<Item = (Assignment, Diagram)> + '_> {
    let ids = check_bound(d)?;
    let total = 1u64 << ids.len();
    Ok((0..total).map(move |i| {
        let a = Assignment::nth(&ids, i);
        let r = realize(d, &a).expect("enumerated assignments are complete");
        (a, r)
    }))
}

/// Certifies a classical diagram as trivial, non-trivial, or neither.
pub fn classify(assignment: Assignment, diagram: Diagram) -> Result<RealizationReport> {
    let (reduced, moves) = simplify_traced(&diagram);
    // Jones is a move invariant, so the reduced diagram is cheaper and equal
    let value = jones(&reduced)?;
    let (status, certificate) = if reduced.crossing_count() == 0 {
        (Status::TrivialCertified, Certificate::Reduction { moves })
    } else if value != unlink_value(diagram.component_count()) {
        (
            Status::NontrivialCertified,
            Certificate::Jones {
                value: value.clone(),
            },
        )
    } else {
        (Status::Unknown, Certificate::None)
    };
    Ok(RealizationReport {
        assignment,
        diagram,
        status,
        jones: value,
        certificate,
    })
}

pub fn classify_realizations(d: &Diagram) -> Result<Vec<RealizationReport>> {
    let ids = check_bound(d)?;
    let total = 1u64 << ids.len();
    (0..total)
        .into_par_iter()
        .map(|i| {
            let a = Assignment::nth(&ids, i);
            let r = realize(d, &a)?;
            classify(a, r)
        })
        .collect()
}

/// First assignment, lexicographically, whose realization is certified
/// non-trivial.
pub fn find_nontrivial_realization(d: &Diagram) -> Result<Option<Assignment>> {
    for (a, r) in enumerate_realizations(d)? {
        if classify(a.clone(), r)?.status == Status::NontrivialCertified {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

// advances `idx` to the next k-subset of 0..n in lexicographic order
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn certifies_unlink(d: &Diagram) -> bool {
    simplify_traced(d).0.crossing_count() == 0
}

/// Smallest subset of `candidates`, by size then lexicographically, whose
/// switching lets the simplifier reach a crossing-free unlink.
fn smallest_unknotting_set(
    d: &Diagram,
    candidates: &[usize],
    budget: usize,
) -> Result<Option<Vec<usize>>> {
    let n = candidates.len();
    for size in 0..=budget.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let set: Vec<usize> = idx.iter().map(|&i| candidates[i]).collect();
            let mut s = d.clone();
            for &c in &set {
                s = s.switch_crossing(c)?;
            }
            if certifies_unlink(&s) {
                return Ok(Some(set));
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Certified upper bound on the fixed unknotting number: the smallest `k`
/// and a witness set of crossings. `None` when nothing within `budget`
/// certifies.
pub fn unknotting_bound(d: &Diagram, budget: usize) -> Result<Option<(usize, Vec<usize>)>> {
    if !d.is_classical() {
        return Err(Error::Validation(
            "unknotting bound needs a classical diagram".into(),
        ));
    }
    Ok(smallest_unknotting_set(d, &d.classical_ids(), budget)?.map(|s| (s.len(), s)))
}

/// Minimizes the certified unknotting bound over all realizations, switching
/// only crossings that are classical in `d`. Ties go to the first assignment.
pub fn min_unknotting_over_realizations(
    d: &Diagram,
    budget: usize,
) -> Result<Option<(Assignment, usize)>> {
    let candidates = d.classical_ids();
    let mut best: Option<(Assignment, usize)> = None;
    for (a, r) in enumerate_realizations(d)? {
        if best.as_ref().is_some_and(|b| b.1 == 0) {
            break;
        }
        let cap = best.as_ref().map_or(budget, |b| b.1 - 1);
        if let Some(set) = smallest_unknotting_set(&r, &candidates, cap)? {
            best = Some((a, set.len()));
        }
    }
    Ok(best)
}

/// A crossing to be undone by a virtual-R2 insertion, with the two edges the
/// pair is threaded through. `None` uses the crossing's outgoing edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UntieSite {
    pub crossing: usize,
    pub edges: Option<(Edge, Edge)>,
}

/// Outgoing edges of crossing `c`, ordered left to right when seen from
/// behind the crossing.
pub fn outgoing_edges(d: &Diagram, c: usize) -> Result<(Edge, Edge)> {
    d.crossing(c)?;
    let outs: Vec<usize> = (0..4).filter(|&s| !d.slot_incoming(c, s)).collect();
    let (s, t) = (outs[0], outs[1]);
    let (left, right) = if (s + 1) % 4 == t { (s, t) } else { (t, s) };
    let slots = d.crossings()[c].slots;
    Ok((slots[left], slots[right]))
}

/// Inserts one virtual-R2 pair next to each listed crossing.
pub fn untie_by_virtualization(d: &Diagram, sites: &[UntieSite]) -> Result<Diagram> {
    let mut cur = d.clone();
    for s in sites {
        if !d.crossing(s.crossing)?.kind.is_classical() {
            return Err(Error::VirtualCrossing(s.crossing));
        }
        let (a, b) = match s.edges {
            Some(p) => p,
            None => outgoing_edges(d, s.crossing)?,
        };
        cur = virtual_r2_pair(&cur, a, b)?;
    }
    Ok(cur.canonical())
}
