//! Virtual link diagrams as decorated 4-valent combinatorial maps.
//!
//! A [`Diagram`] is an extended PD code: every crossing lists four edge
//! labels in a fixed cyclic order, and every edge label occurs in exactly two
//! slots (once entering a crossing, once leaving one). Slot `a` is always an
//! incoming edge: the under-strand for classical crossings, the first strand
//! for virtual crossings. The first strand runs `a -> c`; the second strand
//! runs between `b` and `d`.
//!
//! Sign rule: a classical crossing is positive when its over-strand runs
//! `b -> d` and negative when it runs `d -> b`.
//!
//! There is no planarity check. Everything computed here depends only on the
//! combinatorial map, so non-planar PD input is accepted as-is.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

pub type Edge = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossingKind {
    Positive,
    Negative,
    Virtual,
}

impl CrossingKind {
    pub fn is_classical(self) -> bool {
        self != CrossingKind::Virtual
    }

    pub fn sign(self) -> Option<i32> {
        match self {
            CrossingKind::Positive => Some(1),
            CrossingKind::Negative => Some(-1),
            CrossingKind::Virtual => None,
        }
    }

    pub fn from_sign(sign: i32) -> Self {
        if sign > 0 {
            CrossingKind::Positive
        } else {
            CrossingKind::Negative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub slots: [Edge; 4],
}

impl Crossing {
    /// Classical crossing from its two strands, each given as `(in, out)`.
    pub fn classical(under: (Edge, Edge), over: (Edge, Edge), sign: i32) -> Self {
        let slots = if sign > 0 {
            [under.0, over.0, under.1, over.1]
        } else {
            [under.0, over.1, under.1, over.0]
        };
        Crossing {
            kind: CrossingKind::from_sign(sign),
            slots,
        }
    }

    /// Virtual crossing with the second strand running `b -> d`.
    pub fn virtual_crossing(first: (Edge, Edge), second: (Edge, Edge)) -> Self {
        Crossing {
            kind: CrossingKind::Virtual,
            slots: [first.0, second.0, first.1, second.1],
        }
    }

    /// Builds a crossing from its four corners in slot cyclic order, each
    /// tagged `true` when the edge enters the crossing. Corners `0,2` form one
    /// strand and `1,3` the other. `over` names the strand (`0` or `1`) that
    /// passes over, or `None` for a virtual crossing.
    pub(crate) fn from_corners(corners: [(Edge, bool); 4], over: Option<usize>) -> Self {
        let start = match over {
            // under-strand is the other pair; start at its incoming corner
            Some(o) => {
                let u = 1 - o;
                if corners[u].1 {
                    u
                } else {
                    u + 2
                }
            }
            None => (0..4).find(|&i| corners[i].1).unwrap_or(0),
        };
        let slots = std::array::from_fn(|i| corners[(start + i) % 4].0);
        let kind = match over {
            None => CrossingKind::Virtual,
            Some(_) if corners[(start + 1) % 4].1 => CrossingKind::Positive,
            Some(_) => CrossingKind::Negative,
        };
        Crossing { kind, slots }
    }

    fn label_key(&self) -> [Edge; 4] {
        let mut k = self.slots;
        k.sort_unstable();
        k
    }
}

/// Which strand of a virtual crossing is placed over when it is realized.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum Over {
    /// The strand through slots `a, c`.
    First,
    /// The strand through slots `b, d`.
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    // derived: second strand of crossing i runs b -> d
    forward: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMap {
    edge_component: BTreeMap<Edge, usize>,
    /// Oriented edge cycle of each crossing-bearing component.
    pub cycles: Vec<Vec<Edge>>,
    pub free_loops: usize,
}

impl ComponentMap {
    pub fn count(&self) -> usize {
        self.cycles.len() + self.free_loops
    }

    pub fn component_of(&self, e: Edge) -> Option<usize> {
        self.edge_component.get(&e).copied()
    }
}

impl Diagram {
    /// Validates and builds a diagram, keeping edge labels as given.
    pub fn new(mut crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let mut occurrences: HashMap<Edge, Vec<(usize, usize)>> = HashMap::new();
        for (ci, c) in crossings.iter().enumerate() {
            for (s, &e) in c.slots.iter().enumerate() {
                occurrences.entry(e).or_default().push((ci, s));
            }
        }
        let mut bad: Vec<_> = occurrences
            .iter()
            .filter(|(_, occ)| occ.len() != 2)
            .map(|(e, occ)| (*e, occ.len()))
            .collect();
        if !bad.is_empty() {
            bad.sort_unstable();
            let (e, n) = bad[0];
            return Err(Error::Validation(format!(
                "edge {e} appears {n} times, expected exactly 2"
            )));
        }

        // incoming[ci][slot]
        let mut incoming: Vec<[Option<bool>; 4]> = crossings
            .iter()
            .map(|c| {
                let fwd = match c.kind {
                    CrossingKind::Positive => Some(true),
                    CrossingKind::Negative => Some(false),
                    CrossingKind::Virtual => None,
                };
                [Some(true), fwd, Some(false), fwd.map(|f| !f)]
            })
            .collect();

        let partner = |ci: usize, s: usize| -> (usize, usize) {
            let occ = &occurrences[&crossings[ci].slots[s]];
            if occ[0] == (ci, s) {
                occ[1]
            } else {
                occ[0]
            }
        };

        // Virtual crossings leave the direction of their second strand open;
        // settle it by propagating from edges whose direction is already
        // forced, and pick b -> d for anything left undetermined.
        loop {
            let mut changed = false;
            for ci in 0..crossings.len() {
                if incoming[ci][1].is_some() {
                    continue;
                }
                for s in [1, 3] {
                    let (pc, ps) = partner(ci, s);
                    if let Some(p_in) = incoming[pc][ps] {
                        let this_in = !p_in;
                        let fwd = if s == 1 { this_in } else { !this_in };
                        incoming[ci][1] = Some(fwd);
                        incoming[ci][3] = Some(!fwd);
                        changed = true;
                        break;
                    }
                }
            }
            if changed {
                continue;
            }
            match incoming.iter().position(|d| d[1].is_none()) {
                Some(ci) => {
                    incoming[ci][1] = Some(true);
                    incoming[ci][3] = Some(false);
                }
                None => break,
            }
        }

        let mut labels: Vec<_> = occurrences.keys().copied().collect();
        labels.sort_unstable();
        for e in labels {
            let occ = &occurrences[&e];
            let a = incoming[occ[0].0][occ[0].1].unwrap();
            let b = incoming[occ[1].0][occ[1].1].unwrap();
            if a == b {
                let what = if a { "entered" } else { "left" };
                return Err(Error::Validation(format!(
                    "inconsistent orientation: edge {e} is {what} at both ends"
                )));
            }
        }

        let mut order: Vec<usize> = (0..crossings.len()).collect();
        order.sort_by_key(|&i| crossings[i].label_key());
        let forward = order.iter().map(|&i| incoming[i][1].unwrap()).collect();
        crossings = order.iter().map(|&i| crossings[i]).collect();
        Ok(Diagram {
            crossings,
            free_loops,
            forward,
        })
    }

    /// `n` disjoint unknotted circles.
    pub fn unlink(n: usize) -> Self {
        Diagram {
            crossings: Vec::new(),
            free_loops: n,
            forward: Vec::new(),
        }
    }

    /// Rebuilds a diagram after a local rewrite: `unions` glue pairs of edge
    /// labels into one edge, labels that end up in no slot close into free
    /// loops, and the result is renumbered canonically.
    pub(crate) fn rebuild(
        crossings: Vec<Crossing>,
        unions: &[(Edge, Edge)],
        free_loops: usize,
    ) -> Result<Self> {
        let mut parent: HashMap<Edge, Edge> = HashMap::new();
        fn find(parent: &mut HashMap<Edge, Edge>, x: Edge) -> Edge {
            let p = *parent.entry(x).or_insert(x);
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        for &(x, y) in unions {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                parent.insert(hi, lo);
            }
        }
        let crossings: Vec<Crossing> = crossings
            .into_iter()
            .map(|mut c| {
                for e in c.slots.iter_mut() {
                    *e = find(&mut parent, *e);
                }
                c
            })
            .collect();
        let used: BTreeSet<Edge> = crossings.iter().flat_map(|c| c.slots).collect();
        let keys: Vec<Edge> = parent.keys().copied().collect();
        let closed: BTreeSet<Edge> = keys
            .into_iter()
            .map(|e| find(&mut parent, e))
            .filter(|r| !used.contains(r))
            .collect();
        let d = Diagram::new(crossings, free_loops + closed.len())?;
        Ok(d.canonical())
    }

    /// Renumbers edges consecutively along components. Components are taken
    /// in order of their smallest label and each is walked from that label.
    pub fn canonical(&self) -> Self {
        let comps = self.components();
        let mut rename: HashMap<Edge, Edge> = HashMap::new();
        let mut next = 1;
        for cycle in &comps.cycles {
            for &e in cycle {
                rename.insert(e, next);
                next += 1;
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                kind: c.kind,
                slots: c.slots.map(|e| rename[&e]),
            })
            .collect();
        Diagram::new(crossings, self.free_loops).expect("renaming preserves validity")
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, c: usize) -> Result<&Crossing> {
        self.crossings.get(c).ok_or(Error::NoSuchCrossing(c))
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn classical_count(&self) -> usize {
        self.crossings
            .iter()
            .filter(|c| c.kind.is_classical())
            .count()
    }

    pub fn virtual_count(&self) -> usize {
        self.crossings.len() - self.classical_count()
    }

    pub fn classical_ids(&self) -> Vec<usize> {
        (0..self.crossings.len())
            .filter(|&i| self.crossings[i].kind.is_classical())
            .collect()
    }

    pub fn virtual_ids(&self) -> Vec<usize> {
        (0..self.crossings.len())
            .filter(|&i| !self.crossings[i].kind.is_classical())
            .collect()
    }

    pub fn is_classical(&self) -> bool {
        self.crossings.iter().all(|c| c.kind.is_classical())
    }

    /// Sorted edge labels.
    pub fn edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self
            .crossings
            .iter()
            .flat_map(|c| c.slots)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        v.dedup();
        v
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub(crate) fn max_label(&self) -> Edge {
        self.crossings
            .iter()
            .flat_map(|c| c.slots)
            .max()
            .unwrap_or(0)
    }

    /// `true` when the second strand of crossing `c` runs `b -> d`.
    pub fn second_forward(&self, c: usize) -> bool {
        self.forward[c]
    }

    /// `(incoming, outgoing)` edge of strand `which` (`0` = slots a/c, `1` =
    /// slots b/d) at crossing `c`.
    pub fn strand(&self, c: usize, which: usize) -> (Edge, Edge) {
        let s = self.crossings[c].slots;
        match which {
            0 => (s[0], s[2]),
            _ if self.forward[c] => (s[1], s[3]),
            _ => (s[3], s[1]),
        }
    }

    /// Slot indices `(incoming, outgoing)` of strand `which` at crossing `c`.
    pub fn strand_slots(&self, c: usize, which: usize) -> (usize, usize) {
        match which {
            0 => (0, 2),
            _ if self.forward[c] => (1, 3),
            _ => (3, 1),
        }
    }

    /// Whether the edge in `slot` of crossing `c` enters the crossing.
    pub fn slot_incoming(&self, c: usize, slot: usize) -> bool {
        match slot {
            0 => true,
            2 => false,
            1 => self.forward[c],
            _ => !self.forward[c],
        }
    }

    /// Successor of each edge along its component.
    pub fn successor_map(&self) -> HashMap<Edge, Edge> {
        let mut next = HashMap::with_capacity(self.edge_count());
        for c in 0..self.crossings.len() {
            for w in 0..2 {
                let (i, o) = self.strand(c, w);
                next.insert(i, o);
            }
        }
        next
    }

    /// Locates the crossing and slot where edge `e` ends (enters) and where
    /// it starts (leaves): `((head_crossing, head_slot), (tail_crossing, tail_slot))`.
    pub fn edge_ends(&self, e: Edge) -> Result<((usize, usize), (usize, usize))> {
        let mut head = None;
        let mut tail = None;
        for (ci, c) in self.crossings.iter().enumerate() {
            for (s, &x) in c.slots.iter().enumerate() {
                if x == e {
                    if self.slot_incoming(ci, s) {
                        head = Some((ci, s));
                    } else {
                        tail = Some((ci, s));
                    }
                }
            }
        }
        match (head, tail) {
            (Some(h), Some(t)) => Ok((h, t)),
            _ => Err(Error::NoSuchEdge(e)),
        }
    }

    pub fn components(&self) -> ComponentMap {
        let next = self.successor_map();
        let mut labels: Vec<Edge> = next.keys().copied().collect();
        labels.sort_unstable();
        let mut edge_component = BTreeMap::new();
        let mut cycles = Vec::new();
        for &start in &labels {
            if edge_component.contains_key(&start) {
                continue;
            }
            let idx = cycles.len();
            let mut cycle = Vec::new();
            let mut e = start;
            loop {
                edge_component.insert(e, idx);
                cycle.push(e);
                e = next[&e];
                if e == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        ComponentMap {
            edge_component,
            cycles,
            free_loops: self.free_loops,
        }
    }

    pub fn component_count(&self) -> usize {
        self.components().count()
    }

    pub fn crossing_sign(&self, c: usize) -> Result<i32> {
        self.crossing(c)?
            .kind
            .sign()
            .ok_or(Error::VirtualCrossing(c))
    }

    fn require_classical(&self, c: usize) -> Result<Crossing> {
        let x = *self.crossing(c)?;
        if x.kind.is_classical() {
            Ok(x)
        } else {
            Err(Error::VirtualCrossing(c))
        }
    }

    fn with_crossing(&self, c: usize, x: Crossing) -> Self {
        let mut crossings = self.crossings.clone();
        crossings[c] = x;
        Diagram::new(crossings, self.free_loops).expect("local edit preserves validity")
    }

    /// Exchanges over and under at classical crossing `c`; its sign flips.
    pub fn switch_crossing(&self, c: usize) -> Result<Self> {
        self.require_classical(c)?;
        Ok(self.with_crossing(c, self.switched(c)))
    }

    fn switched(&self, c: usize) -> Crossing {
        let x = self.crossings[c];
        Crossing::classical(
            self.strand(c, 1),
            self.strand(c, 0),
            -x.kind.sign().unwrap(),
        )
    }

    pub fn virtualize_crossing(&self, c: usize) -> Result<Self> {
        let x = self.require_classical(c)?;
        Ok(self.with_crossing(
            c,
            Crossing {
                kind: CrossingKind::Virtual,
                slots: x.slots,
            },
        ))
    }

    /// Turns virtual crossing `c` classical with strand `over` on top.
    pub fn realize_crossing(&self, c: usize, over: Over) -> Result<Self> {
        let x = *self.crossing(c)?;
        if x.kind.is_classical() {
            return Err(Error::ClassicalCrossing(c));
        }
        Ok(self.with_crossing(c, self.realized(c, over)))
    }

    pub(crate) fn realized(&self, c: usize, over: Over) -> Crossing {
        let start = match over {
            Over::Second => 0,
            Over::First => self.strand_slots(c, 1).0,
        };
        // the sign is forced by the slot cyclic order
        let s = self.crossings[c].slots;
        let rotated: [Edge; 4] = std::array::from_fn(|i| s[(start + i) % 4]);
        let kind = if self.slot_incoming(c, (start + 1) % 4) {
            CrossingKind::Positive
        } else {
            CrossingKind::Negative
        };
        Crossing {
            kind,
            slots: rotated,
        }
    }

    /// Replaces classical crossing `c` by its orientation-respecting smoothing.
    pub fn smooth_oriented(&self, c: usize) -> Result<Self> {
        self.require_classical(c)?;
        let (i0, o0) = self.strand(c, 0);
        let (i1, o1) = self.strand(c, 1);
        let mut crossings = self.crossings.clone();
        crossings.remove(c);
        Diagram::rebuild(crossings, &[(i0, o1), (i1, o0)], self.free_loops)
    }

    /// Exchanges over and under at every classical crossing.
    pub fn mirror(&self) -> Self {
        let crossings = (0..self.crossings.len())
            .map(|c| {
                if self.crossings[c].kind.is_classical() {
                    self.switched(c)
                } else {
                    self.crossings[c]
                }
            })
            .collect();
        Diagram::new(crossings, self.free_loops).expect("mirror preserves validity")
    }

    /// Deletes the listed crossings, letting both strands pass straight
    /// through each of them.
    pub(crate) fn remove_passthrough(&self, ids: &[usize]) -> Result<Self> {
        let mut unions = Vec::new();
        for &c in ids {
            for w in 0..2 {
                unions.push(self.strand(c, w));
            }
        }
        let crossings = (0..self.crossings.len())
            .filter(|i| !ids.contains(i))
            .map(|i| self.crossings[i])
            .collect();
        Diagram::rebuild(crossings, &unions, self.free_loops)
    }

    /// Component index of strand `which` at crossing `c`.
    pub fn strand_component(&self, comps: &ComponentMap, c: usize, which: usize) -> usize {
        comps.component_of(self.strand(c, which).0).unwrap()
    }
}

pub fn components(d: &Diagram) -> ComponentMap {
    d.components()
}

pub fn crossing_sign(d: &Diagram, c: usize) -> Result<i32> {
    d.crossing_sign(c)
}

pub fn switch_crossing(d: &Diagram, c: usize) -> Result<Diagram> {
    d.switch_crossing(c)
}

pub fn virtualize_crossing(d: &Diagram, c: usize) -> Result<Diagram> {
    d.virtualize_crossing(c)
}

pub fn smooth_oriented(d: &Diagram, c: usize) -> Result<Diagram> {
    d.smooth_oriented(c)
}

pub fn mirror(d: &Diagram) -> Diagram {
    d.mirror()
}
