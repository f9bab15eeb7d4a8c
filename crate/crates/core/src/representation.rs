//! Surface representations built from a virtual diagram.
//!
//! Every group of virtual crossings gets one handle. At each member crossing
//! one arc (the chosen, over arc) runs through the handle; the other stays on
//! the base surface. Strand passes through consecutive members of a handle
//! merge into one track. A track is a through-strand when it is chosen
//! somewhere or visits more than one member; the remaining tracks are base
//! arcs crossing the handle's longitude.
//!
//! Dehn twists act on the handle's torus class `(p, n)`, starting at
//! `(1, 0)`:
//!
//! * meridian `M(d)`: `(p, n) -> (p, n + d·p)`
//! * longitude `L(d)`: `(p, n) -> (p + d·n, n)`
//!
//! [`Representation::forget`] realizes the base diagram and splices the
//! `k`-cabled torus tangle of each handle's class onto its through-strands.
//! Crossings between through-strands and base arcs are not rendered.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::diagram::{Diagram, Edge, Over};
use crate::error::{Error, Result};
use crate::realization::{outgoing_edges, realize, Assignment};
use crate::tangle::{splice_all, torus_tangle, Tangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Curve {
    M,
    L,
}

/// One Dehn twist: a curve and a direction `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Twist {
    pub curve: Curve,
    pub dir: i32,
}

impl Twist {
    pub fn new(curve: Curve, dir: i32) -> Result<Self> {
        if dir != 1 && dir != -1 {
            return Err(Error::InvalidTwist(format!(
                "direction must be +1 or -1, got {dir}"
            )));
        }
        Ok(Twist { curve, dir })
    }

    /// Image of a torus class, normalized to `p >= 0`.
    pub fn apply(self, (p, n): (i64, i64)) -> (i64, i64) {
        let d = self.dir as i64;
        let (p, n) = match self.curve {
            Curve::M => (p, n + d * p),
            Curve::L => (p + d * n, n),
        };
        normalize((p, n))
    }
}

fn normalize((p, n): (i64, i64)) -> (i64, i64) {
    if p < 0 || (p == 0 && n < 0) {
        (-p, -n)
    } else {
        (p, n)
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.curve {
            Curve::M => 'M',
            Curve::L => 'L',
        };
        write!(f, "{c}{}", if self.dir > 0 { '+' } else { '-' })
    }
}

impl FromStr for Twist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let curve = match s.get(..1) {
            Some("M") => Curve::M,
            Some("L") => Curve::L,
            _ => return Err(Error::InvalidTwist(format!("unknown twist '{s}'"))),
        };
        let dir = match s.get(1..) {
            Some("+") => 1,
            Some("-") => -1,
            _ => return Err(Error::InvalidTwist(format!("unknown twist '{s}'"))),
        };
        Twist::new(curve, dir)
    }
}

impl Serialize for Twist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses a comma-separated twist word such as `M+,L+,M+`.
pub fn parse_word(s: &str) -> Result<Vec<Twist>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

/// A strand's maximal run through a handle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Track {
    /// `(member index, crossing, strand)` in traversal order.
    pub passes: Vec<(usize, usize, usize)>,
    pub component: usize,
    /// `+1` when the track runs with the handle's reference direction.
    pub orientation: i32,
    pub through: bool,
    /// Edge leaving the last pass; tangles are spliced here.
    pub splice_edge: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Handle {
    pub id: usize,
    pub members: Vec<usize>,
    pub tracks: Vec<Track>,
    pub torus_class: (i64, i64),
    pub twist_word: Vec<Twist>,
}

impl Handle {
    /// Number of through-strands.
    pub fn through_strands(&self) -> usize {
        self.tracks.iter().filter(|t| t.through).count()
    }

    /// The class obtained by replaying the twist word from `(1, 0)`.
    pub fn replayed_class(&self) -> (i64, i64) {
        self.twist_word.iter().fold((1, 0), |c, t| t.apply(c))
    }

    fn tangle(&self) -> Result<Option<Tangle>> {
        let (p, n) = self.torus_class;
        if p == 0 || n == 0 {
            return Ok(None);
        }
        torus_tangle(p, n, self.through_strands()).map(Some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    #[serde(skip)]
    pub base: Diagram,
    pub handles: Vec<Handle>,
    pub arc_choice: Assignment,
}

/// Oriented `(p, n)` intersection counts, indexed `[handle][component]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntersectionTable(pub Vec<Vec<(i64, i64)>>);

impl IntersectionTable {
    pub fn pair(&self, handle: usize, component: usize) -> (i64, i64) {
        self.0[handle][component]
    }
}

/// Parses handle groups written as `0,1;2` (crossing ids, groups split by
/// `;`).
pub fn parse_groups(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|g| {
            g.split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| Error::Grouping(format!("bad crossing id '{}'", x.trim())))
                })
                .collect()
        })
        .collect()
}

/// Parses an arc choice code: one digit per virtual crossing in id order,
/// `1` for the first strand and `2` for the second.
pub fn parse_arcs(d: &Diagram, code: &str) -> Result<Assignment> {
    let ids = d.virtual_ids();
    if code.chars().count() != ids.len() {
        return Err(Error::Assignment(format!(
            "expected {} choices, got {}",
            ids.len(),
            code.chars().count()
        )));
    }
    ids.iter()
        .zip(code.chars())
        .map(|(&c, ch)| match ch {
            '1' => Ok((c, Over::First)),
            '2' => Ok((c, Over::Second)),
            _ => Err(Error::Assignment(format!("choice '{ch}' is not 1 or 2"))),
        })
        .collect::<Result<Vec<_>>>()
        .map(Assignment::new)
}

fn shares_edge(d: &Diagram, x: usize, y: usize) -> bool {
    let sx = d.crossings()[x].slots;
    d.crossings()[y].slots.iter().any(|e| sx.contains(e))
}

fn chosen_strand(o: Over) -> usize {
    match o {
        Over::First => 0,
        Over::Second => 1,
    }
}

fn build_handle(
    d: &Diagram,
    arc_choice: &Assignment,
    id: usize,
    members: &[usize],
) -> Result<Handle> {
    let comps = d.components();
    let realized = realize(d, arc_choice)?;
    // every pass is (member index, strand)
    let passes: Vec<(usize, usize)> = (0..members.len()).flat_map(|i| [(i, 0), (i, 1)]).collect();
    let pass_at_in = |e: Edge| {
        passes
            .iter()
            .copied()
            .find(|&(i, w)| d.strand(members[i], w).0 == e)
    };
    let next_pass = |(i, w): (usize, usize)| pass_at_in(d.strand(members[i], w).1);
    let prev_pass = |(i, w): (usize, usize)| {
        passes
            .iter()
            .copied()
            .find(|&(j, x)| d.strand(members[j], x).1 == d.strand(members[i], w).0)
    };

    let mut used = vec![false; passes.len()];
    let idx = |(i, w): (usize, usize)| 2 * i + w;
    let mut tracks = Vec::new();
    for &start in &passes {
        if used[idx(start)] {
            continue;
        }
        // walk back to the first pass of the run; a closed run starts here
        let mut first = start;
        while let Some(p) = prev_pass(first) {
            if p == start {
                break;
            }
            first = p;
        }
        let mut run = vec![first];
        used[idx(first)] = true;
        let mut cur = first;
        while let Some(p) = next_pass(cur) {
            if used[idx(p)] {
                break;
            }
            used[idx(p)] = true;
            run.push(p);
            cur = p;
        }
        let (fi, _) = run[0];
        let (li, lw) = *run.last().unwrap();
        let chosen = run
            .iter()
            .any(|&(i, w)| chosen_strand(arc_choice.get(members[i]).unwrap()) == w);
        let through = chosen || run.len() > 1;
        let orientation = if li != fi {
            if li > fi {
                1
            } else {
                -1
            }
        } else {
            realized.crossing_sign(members[fi])?
        };
        tracks.push(Track {
            passes: run.iter().map(|&(i, w)| (i, members[i], w)).collect(),
            component: d.strand_component(&comps, members[fi], run[0].1),
            orientation,
            through,
            splice_edge: d.strand(members[li], lw).1,
        });
    }
    // splice order: member of the last pass, then left to right
    let key = |t: &Track| {
        let &(i, c, _) = t.passes.last().unwrap();
        let (left, _) = outgoing_edges(d, c).expect("member exists");
        (i, t.splice_edge != left)
    };
    tracks.sort_by_key(key);
    Ok(Handle {
        id,
        members: members.to_vec(),
        tracks,
        torus_class: (1, 0),
        twist_word: Vec::new(),
    })
}

impl Representation {
    /// One handle per group. Groups must partition the virtual crossings and
    /// consecutive members of a group must share an edge.
    pub fn from_diagram(
        d: &Diagram,
        arc_choice: &Assignment,
        groups: &[Vec<usize>],
    ) -> Result<Self> {
        realize(d, arc_choice)?;
        let mut seen = Vec::new();
        for g in groups {
            if g.is_empty() {
                return Err(Error::Grouping("empty group".into()));
            }
            for &c in g {
                if d.crossing(c)?.kind.is_classical() {
                    return Err(Error::ClassicalCrossing(c));
                }
                if seen.contains(&c) {
                    return Err(Error::Grouping(format!("crossing {c} is grouped twice")));
                }
                seen.push(c);
            }
            for w in g.windows(2) {
                if !shares_edge(d, w[0], w[1]) {
                    return Err(Error::Grouping(format!(
                        "crossings {} and {} are not adjacent",
                        w[0], w[1]
                    )));
                }
            }
        }
        if let Some(c) = d.virtual_ids().into_iter().find(|c| !seen.contains(c)) {
            return Err(Error::Grouping(format!(
                "virtual crossing {c} is in no group"
            )));
        }
        let handles = groups
            .iter()
            .enumerate()
            .map(|(i, g)| build_handle(d, arc_choice, i, g))
            .collect::<Result<_>>()?;
        Ok(Representation {
            base: d.clone(),
            handles,
            arc_choice: arc_choice.clone(),
        })
    }

    /// One singleton handle per virtual crossing.
    pub fn singletons(d: &Diagram, arc_choice: &Assignment) -> Result<Self> {
        let groups: Vec<Vec<usize>> = d.virtual_ids().into_iter().map(|c| vec![c]).collect();
        Representation::from_diagram(d, arc_choice, &groups)
    }

    pub fn genus(&self) -> usize {
        self.handles.len()
    }

    pub fn handle(&self, h: usize) -> Result<&Handle> {
        self.handles.get(h).ok_or(Error::NoSuchHandle(h))
    }

    /// The classical diagram the representation stands for.
    pub fn forget(&self) -> Result<Diagram> {
        let realized = realize(&self.base, &self.arc_choice)?;
        let mut parts = Vec::new();
        for h in &self.handles {
            if let Some(t) = h.tangle()? {
                let (edges, orient): (Vec<Edge>, Vec<i32>) = h
                    .tracks
                    .iter()
                    .filter(|t| t.through)
                    .map(|t| (t.splice_edge, t.orientation))
                    .unzip();
                parts.push((t, edges, orient));
            }
        }
        if parts.is_empty() {
            return Ok(realized);
        }
        let refs: Vec<(&Tangle, &[Edge], &[i32])> = parts
            .iter()
            .map(|(t, e, o)| (t, e.as_slice(), o.as_slice()))
            .collect();
        splice_all(&realized, &refs)
    }

    pub fn intersection_pairs(&self) -> IntersectionTable {
        let comps = self.base.component_count();
        IntersectionTable(
            self.handles
                .iter()
                .map(|h| {
                    let (p, n) = h.torus_class;
                    let mut row = vec![(0, 0); comps];
                    for t in &h.tracks {
                        let o = t.orientation as i64;
                        let e = &mut row[t.component];
                        if t.through {
                            e.0 += o * p;
                            e.1 += o * n;
                        } else {
                            e.1 += o;
                        }
                    }
                    row
                })
                .collect(),
        )
    }

    pub fn twist(&self, h: usize, t: Twist) -> Result<Self> {
        self.handle(h)?;
        let mut rep = self.clone();
        let handle = &mut rep.handles[h];
        handle.torus_class = t.apply(handle.torus_class);
        handle.twist_word.push(t);
        Ok(rep)
    }

    pub fn apply_word(&self, h: usize, word: &[Twist]) -> Result<Self> {
        word.iter()
            .try_fold(self.clone(), |rep, &t| rep.twist(h, t))
    }

    /// `true` when every torus class equals its replayed twist word.
    pub fn replay_consistent(&self) -> bool {
        self.handles
            .iter()
            .all(|h| h.torus_class == h.replayed_class())
    }
}

pub fn dehn_twist_meridian(rep: &Representation, h: usize, dir: i32) -> Result<Representation> {
    rep.twist(h, Twist::new(Curve::M, dir)?)
}

pub fn dehn_twist_longitude(rep: &Representation, h: usize, dir: i32) -> Result<Representation> {
    rep.twist(h, Twist::new(Curve::L, dir)?)
}

/// Meridian, longitude, meridian, all in the direction that makes `|n|` and
/// then `p` grow. Requires a non-zero intersection pair at the handle.
pub fn knotting_sequence(rep: &Representation, h: usize) -> Result<Representation> {
    rep.handle(h)?;
    let table = rep.intersection_pairs();
    if table.0[h].iter().all(|&e| e == (0, 0)) {
        return Err(Error::ZeroIntersection(h));
    }
    let n = rep.handles[h].torus_class.1;
    let dir = if n < 0 { -1 } else { 1 };
    let word = [
        Twist::new(Curve::M, dir)?,
        Twist::new(Curve::L, dir)?,
        Twist::new(Curve::M, dir)?,
    ];
    rep.apply_word(h, &word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_diagram;
    use crate::invariants::{jones, linking_number};
    use crate::realization::{classify, Status};

    fn pd(s: &str) -> Diagram {
        parse_diagram(s).unwrap()
    }

    const VIRTUAL_TREFOIL: &str = "V(1,4,2,5) X+(3,6,4,1) X+(5,2,6,3)";

    #[test]
    fn twist_words_round_trip() {
        let w = parse_word("M+,L-, M+").unwrap();
        let s: Vec<String> = w.iter().map(|t| t.to_string()).collect();
        assert_eq!(s, ["M+", "L-", "M+"]);
        assert!(parse_word("M+,X+").is_err());
        assert!(parse_word("M2").is_err());
    }

    #[test]
    fn class_updates() {
        let m = Twist::new(Curve::M, 1).unwrap();
        let l = Twist::new(Curve::L, 1).unwrap();
        assert_eq!(m.apply((1, 1)), (1, 2));
        assert_eq!(l.apply((1, 2)), (3, 2));
        assert_eq!(m.apply((3, 2)), (3, 5));
        let lm = Twist::new(Curve::L, -1).unwrap();
        assert_eq!(lm.apply((1, 2)), (1, -2));
    }

    #[test]
    fn virtual_trefoil_singleton() {
        let d = pd(VIRTUAL_TREFOIL);
        let v = d.virtual_ids()[0];
        for o in [Over::First, Over::Second] {
            let a = Assignment::new([(v, o)]);
            let rep = Representation::singletons(&d, &a).unwrap();
            assert_eq!(rep.genus(), 1);
            assert_eq!(rep.handles[0].through_strands(), 1);
            assert_eq!(rep.forget().unwrap(), realize(&d, &a).unwrap());
            let (p, n) = rep.intersection_pairs().pair(0, 0);
            assert_eq!((p.abs(), n.abs()), (1, 1));
        }
    }

    #[test]
    fn meridian_twists_cancel() {
        let d = pd(VIRTUAL_TREFOIL);
        let a = Assignment::new([(d.virtual_ids()[0], Over::First)]);
        let rep = Representation::singletons(&d, &a).unwrap();
        let there = dehn_twist_meridian(&rep, 0, 1).unwrap();
        let back = dehn_twist_meridian(&there, 0, -1).unwrap();
        assert_eq!(back.handles[0].torus_class, (1, 0));
        assert!(back.replay_consistent());
        assert_eq!(back.forget().unwrap(), rep.forget().unwrap());
        assert!(matches!(
            dehn_twist_meridian(&rep, 3, 1),
            Err(Error::NoSuchHandle(3))
        ));
    }

    #[test]
    fn knotting_from_class_one_one() {
        let d = pd(VIRTUAL_TREFOIL);
        let a = Assignment::new([(d.virtual_ids()[0], Over::First)]);
        let rep = dehn_twist_meridian(&Representation::singletons(&d, &a).unwrap(), 0, 1).unwrap();
        assert_eq!(rep.handles[0].torus_class, (1, 1));
        let k = knotting_sequence(&rep, 0).unwrap();
        assert_eq!(k.handles[0].torus_class, (3, 5));
        let words: Vec<String> = k.handles[0]
            .twist_word
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(words, ["M+", "M+", "L+", "M+"]);
        let f = k.forget().unwrap();
        let r = classify(Assignment::default(), f).unwrap();
        assert_eq!(r.status, Status::NontrivialCertified);
    }

    // component 0 over at every virtual crossing
    fn first_component_over(d: &Diagram) -> Assignment {
        let comps = d.components();
        Assignment::new(d.virtual_ids().into_iter().map(|c| {
            let o = if d.strand_component(&comps, c, 0) == 0 {
                Over::First
            } else {
                Over::Second
            };
            (c, o)
        }))
    }

    #[test]
    fn two_component_pair_links_twice() {
        // Hopf shadow made virtual: the two crossings form a virtual-R2 pair
        let d = pd("V(1,3,2,4) V(4,2,3,1)");
        let rep = Representation::from_diagram(&d, &first_component_over(&d), &[d.virtual_ids()])
            .unwrap();
        assert_eq!(rep.handles[0].through_strands(), 2);
        let before = rep.forget().unwrap();
        assert_eq!(linking_number(&before, 0, 1).unwrap(), 0);
        let table = rep.intersection_pairs();
        assert_eq!(table.pair(0, 0).0.abs(), 1);
        assert_eq!(table.pair(0, 1).0.abs(), 1);
        for dir in [1, -1] {
            let t = dehn_twist_meridian(&rep, 0, dir).unwrap().forget().unwrap();
            assert_eq!(t.component_count(), 2);
            assert_eq!(linking_number(&t, 0, 1).unwrap(), 2 * dir as i64);
            assert_eq!(
                jones(&t).unwrap().to_string(),
                if dir > 0 {
                    "-A^-10 - A^-2"
                } else {
                    "-A^2 - A^10"
                }
            );
        }
    }

    #[test]
    fn grouping_errors() {
        let d = pd(VIRTUAL_TREFOIL);
        let a = Assignment::new([(d.virtual_ids()[0], Over::First)]);
        assert!(matches!(
            Representation::from_diagram(&d, &a, &[]),
            Err(Error::Grouping(_))
        ));
        assert!(matches!(
            Representation::from_diagram(&d, &a, &[vec![1]]),
            Err(Error::ClassicalCrossing(1))
        ));
    }
}
