//! Reidemeister and virtual Reidemeister moves on the combinatorial map.
//!
//! Move sites are found from faces. A dart is a `(crossing, slot)` pair; the
//! face to the side of a dart continues at the partner slot of the same edge
//! rotated by one. Monogons, bigons and triangles of the map are then checked
//! against the local patterns of each move.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::diagram::{Crossing, CrossingKind, Diagram, Edge};
use crate::error::{Error, Result};
use crate::tangle::Tangle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MoveKind {
    R1,
    R2,
    R3,
    VR1,
    VR2,
    VR3,
    VR4,
}

impl MoveKind {
    /// Whether the move removes crossings.
    pub fn is_decreasing(self) -> bool {
        matches!(
            self,
            MoveKind::R1 | MoveKind::R2 | MoveKind::VR1 | MoveKind::VR2
        )
    }

    /// Whether the bracket itself (not only the normalized invariant) is
    /// unchanged.
    pub fn is_framed(self) -> bool {
        self != MoveKind::R1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveDirection {
    /// Removes crossings.
    Reduce,
    /// Keeps the crossing count.
    Slide,
    /// Adds crossings.
    Insert,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MoveSite {
    pub kind: MoveKind,
    /// Participating crossings, ascending.
    pub crossings: Vec<usize>,
    /// Edges bounding the face of the move.
    pub edges: Vec<Edge>,
    pub direction: MoveDirection,
    #[serde(skip)]
    darts: Vec<(usize, usize)>,
}

/// Full-twist insertion on `edges`, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub edges: Vec<Edge>,
    pub sign: i32,
    pub full_turns: usize,
}

type Dart = (usize, usize);

struct Darts {
    occ: HashMap<Edge, [Dart; 2]>,
}

impl Darts {
    fn new(d: &Diagram) -> Self {
        let mut tmp: HashMap<Edge, Vec<Dart>> = HashMap::new();
        for (c, x) in d.crossings().iter().enumerate() {
            for (s, &e) in x.slots.iter().enumerate() {
                tmp.entry(e).or_default().push((c, s));
            }
        }
        let occ = tmp.into_iter().map(|(e, v)| (e, [v[0], v[1]])).collect();
        Darts { occ }
    }

    fn partner(&self, d: &Diagram, (c, s): Dart) -> Dart {
        let o = self.occ[&d.crossings()[c].slots[s]];
        if o[0] == (c, s) {
            o[1]
        } else {
            o[0]
        }
    }

    fn next(&self, d: &Diagram, dart: Dart) -> Dart {
        let (c, s) = self.partner(d, dart);
        (c, (s + 1) % 4)
    }
}

fn label(d: &Diagram, (c, s): Dart) -> Edge {
    d.crossings()[c].slots[s]
}

fn is_over(slot: usize) -> bool {
    slot % 2 == 1
}

/// Faces of length at most three, each as its dart cycle.
fn short_faces(d: &Diagram) -> Vec<Vec<Dart>> {
    let darts = Darts::new(d);
    let n = d.crossing_count();
    let mut seen = vec![[false; 4]; n];
    let mut faces = Vec::new();
    for c in 0..n {
        for s in 0..4 {
            if seen[c][s] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = (c, s);
            loop {
                seen[cur.0][cur.1] = true;
                orbit.push(cur);
                cur = darts.next(d, cur);
                if cur == (c, s) {
                    break;
                }
            }
            if orbit.len() <= 3 {
                faces.push(orbit);
            }
        }
    }
    faces
}

fn classify_face(d: &Diagram, face: &[Dart]) -> Option<MoveKind> {
    let xs = d.crossings();
    let classical = |c: usize| xs[c].kind.is_classical();
    match *face {
        [(c, _)] => Some(if classical(c) {
            MoveKind::R1
        } else {
            MoveKind::VR1
        }),
        [(c1, s1), (c2, s2)] if c1 != c2 => match (classical(c1), classical(c2)) {
            (true, true) => {
                let same_level = is_over(s1) == is_over((s2 + 3) % 4);
                let opposite = xs[c1].kind.sign() != xs[c2].kind.sign();
                (same_level && opposite).then_some(MoveKind::R2)
            }
            (false, false) => Some(MoveKind::VR2),
            _ => None,
        },
        [(c1, _), (c2, _), (c3, _)] if c1 != c2 && c2 != c3 && c1 != c3 => {
            match face.iter().filter(|(c, _)| classical(*c)).count() {
                3 => {
                    let top = (0..3).any(|i| {
                        let (_, s) = face[i];
                        let (_, t) = face[(i + 1) % 3];
                        is_over(s) && is_over((t + 3) % 4)
                    });
                    top.then_some(MoveKind::R3)
                }
                1 => Some(MoveKind::VR4),
                0 => Some(MoveKind::VR3),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Every applicable move site of `d`, one per kind and crossing set, in a
/// fixed order.
pub fn find_reductions(d: &Diagram) -> Vec<MoveSite> {
    let mut seen = BTreeSet::new();
    let mut sites = Vec::new();
    for face in short_faces(d) {
        let Some(kind) = classify_face(d, &face) else {
            continue;
        };
        let mut crossings: Vec<usize> = face.iter().map(|&(c, _)| c).collect();
        crossings.sort_unstable();
        if !seen.insert((kind, crossings.clone())) {
            continue;
        }
        let direction = if kind.is_decreasing() {
            MoveDirection::Reduce
        } else {
            MoveDirection::Slide
        };
        sites.push(MoveSite {
            kind,
            crossings,
            edges: face.iter().map(|&dt| label(d, dt)).collect(),
            direction,
            darts: face,
        });
    }
    sites.sort_by(|a, b| (&a.crossings, a.kind).cmp(&(&b.crossings, b.kind)));
    sites
}

pub fn apply_move(d: &Diagram, site: &MoveSite) -> Result<Diagram> {
    if !find_reductions(d).contains(site) {
        return Err(Error::StaleSite(format!(
            "{:?} at crossings {:?}",
            site.kind, site.crossings
        )));
    }
    match site.kind {
        MoveKind::R1 | MoveKind::R2 | MoveKind::VR1 | MoveKind::VR2 => {
            d.remove_passthrough(&site.crossings)
        }
        MoveKind::R3 | MoveKind::VR3 | MoveKind::VR4 => Ok(triangle_move(d, &site.darts)),
    }
}

/// Pushes each side of a triangle across the opposite vertex. Every crossing
/// keeps its kind and slot roles; only the edge labels move.
fn triangle_move(d: &Diagram, face: &[Dart]) -> Diagram {
    let mut crossings = d.crossings().to_vec();
    let mut next = d.max_label();
    for i in 0..3 {
        let (c1, s1) = face[i];
        let (c2, s2) = face[(i + 1) % 3];
        let (p1, p2) = ((s1 + 2) % 4, (s2 + 1) % 4);
        let (q2, e1, e2) = ((s2 + 3) % 4, label(d, (c1, p1)), label(d, (c2, p2)));
        next += 1;
        crossings[c1].slots[s1] = e2;
        crossings[c2].slots[q2] = e1;
        crossings[c1].slots[p1] = next;
        crossings[c2].slots[p2] = next;
    }
    Diagram::rebuild(crossings, &[], d.free_loops()).expect("triangle move preserves validity")
}

/// Greedy decreasing simplification; also returns the moves applied.
pub fn simplify_traced(d: &Diagram) -> (Diagram, Vec<MoveSite>) {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    loop {
        let site = find_reductions(&cur)
            .into_iter()
            .filter(|s| s.kind.is_decreasing())
            .min_by(|a, b| {
                (a.crossings[0], a.kind, &a.crossings).cmp(&(b.crossings[0], b.kind, &b.crossings))
            });
        let Some(site) = site else {
            return (cur, trace);
        };
        cur = apply_move(&cur, &site).expect("site was just found");
        trace.push(site);
    }
}

/// Applies decreasing moves, smallest crossing id first, until none apply.
pub fn simplify(d: &Diagram) -> Diagram {
    simplify_traced(d).0
}

/// Replays a recorded sequence of moves.
pub fn replay(d: &Diagram, moves: &[MoveSite]) -> Result<Diagram> {
    moves
        .iter()
        .try_fold(d.clone(), |cur, m| apply_move(&cur, m))
}

/// Inserts a pair of virtual crossings between edges `e1` and `e2`, forming a
/// virtual bigon. The caller asserts that the two edges border a common face.
pub fn virtual_r2_insert(d: &Diagram, e1: Edge, e2: Edge) -> Result<Diagram> {
    Ok(virtual_r2_pair(d, e1, e2)?.canonical())
}

/// As [`virtual_r2_insert`] but keeps every existing label; `e1` and `e2`
/// name the pieces entering the new pair.
pub(crate) fn virtual_r2_pair(d: &Diagram, e1: Edge, e2: Edge) -> Result<Diagram> {
    if e1 == e2 {
        return Err(Error::SameEdge(e1));
    }
    let ((h1, hs1), _) = d.edge_ends(e1)?;
    let ((h2, hs2), _) = d.edge_ends(e2)?;
    let mut crossings = d.crossings().to_vec();
    let base = d.max_label();
    let (e1b, e1c, m2, e2c) = (base + 1, base + 2, base + 3, base + 4);
    crossings[h1].slots[hs1] = e1c;
    crossings[h2].slots[hs2] = e2c;
    // e1 -> V1 -> e1b -> V2 -> e1c, and e2 -> V1 -> m2 -> V2 -> e2c
    crossings.push(Crossing {
        kind: CrossingKind::Virtual,
        slots: [e1, m2, e1b, e2],
    });
    crossings.push(Crossing {
        kind: CrossingKind::Virtual,
        slots: [e1b, m2, e1c, e2c],
    });
    Diagram::new(crossings, d.free_loops())
}

/// Inserts `(σ_1 … σ_{k-1})^(k·turns)` on the listed edges: a full twist
/// repeated `turns` times, `k(k-1)·turns` crossings all of sign `spec.sign`.
pub fn full_twist_insert(d: &Diagram, spec: &TwistSpec) -> Result<Diagram> {
    let k = spec.edges.len();
    if k == 0 {
        return Err(Error::InvalidTwist("at least one edge is required".into()));
    }
    if spec.sign != 1 && spec.sign != -1 {
        return Err(Error::InvalidTwist(format!(
            "sign must be +1 or -1, got {}",
            spec.sign
        )));
    }
    if spec.full_turns == 0 {
        return Err(Error::InvalidTwist("full_turns must be positive".into()));
    }
    for &e in &spec.edges {
        d.edge_ends(e)?;
    }
    let t = Tangle::cyclic_power(k, k, k * spec.full_turns, spec.sign);
    t.splice(d, &spec.edges, &vec![1; k])
}
