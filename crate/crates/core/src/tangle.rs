//! Braid tangles: construction, closure, and splicing into existing edges.
//!
//! A braid on `m` positions is drawn bottom to top. Generator `(i, g)` crosses
//! positions `i` and `i + 1` (0-based); `g = +1` puts the strand running from
//! bottom-left to top-right on top. Each position carries an orientation:
//! `+1` runs upward, `-1` downward. With both strands upward a `g = +1`
//! generator is a positive crossing, so in general its sign is `g * o_a * o_b`.

use crate::diagram::{Crossing, Diagram, Edge};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangle {
    /// Open strands, occupying positions `0..strands`.
    pub strands: usize,
    /// Total positions; positions `strands..` are closed by arcs on the right.
    pub positions: usize,
    pub word: Vec<(usize, i32)>,
}

impl Tangle {
    pub fn identity(strands: usize) -> Self {
        Tangle {
            strands,
            positions: strands,
            word: Vec::new(),
        }
    }

    /// `(σ_1 σ_2 … σ_{m-1})^power` with generator sign `sign`.
    pub fn cyclic_power(strands: usize, positions: usize, power: usize, sign: i32) -> Self {
        let mut word = Vec::new();
        for _ in 0..power {
            for i in 0..positions.saturating_sub(1) {
                word.push((i, sign));
            }
        }
        Tangle {
            strands,
            positions,
            word,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.word.len()
    }

    /// Closes every position, open strands included, into a link diagram.
    /// All positions are oriented upward.
    pub fn closure(&self) -> Result<Diagram> {
        let closed = Tangle {
            strands: 0,
            positions: self.positions,
            word: self.word.clone(),
        };
        closed.splice(&Diagram::unlink(0), &[], &[])
    }

    /// Cuts each edge in `edges` and threads it through the open positions,
    /// in order. `orient[i] = +1` enters position `i` from the bottom along
    /// the edge's own direction; `-1` enters from the top.
    pub(crate) fn splice(&self, d: &Diagram, edges: &[Edge], orient: &[i32]) -> Result<Diagram> {
        splice_all(d, &[(self, edges, orient)])
    }

    fn emit(
        &self,
        crossings: &mut Vec<Crossing>,
        unions: &mut Vec<(Edge, Edge)>,
        cut: &[(Edge, Edge)],
        orient: &[i32],
        fresh: &mut impl FnMut() -> Edge,
    ) {
        let m = self.positions;
        let mut bottom = vec![0; m];
        let mut top = vec![0; m];
        for (i, &(e, h)) in cut.iter().enumerate() {
            if orient[i] > 0 {
                (bottom[i], top[i]) = (e, h);
            } else {
                (bottom[i], top[i]) = (h, e);
            }
        }
        for j in self.strands..m {
            let c = fresh();
            bottom[j] = c;
            top[j] = c;
        }
        let mut ori: Vec<i32> = (0..m)
            .map(|j| {
                if self.strands == 0 {
                    1
                } else {
                    orient[j % self.strands]
                }
            })
            .collect();

        let mut cur = bottom;
        for &(i, g) in &self.word {
            let (tl, tr) = (fresh(), fresh());
            let (bl, br) = (cur[i], cur[i + 1]);
            let (oa, ob) = (ori[i], ori[i + 1]);
            let corners = [(bl, oa > 0), (tl, ob < 0), (tr, oa < 0), (br, ob > 0)];
            let over = if g > 0 { 0 } else { 1 };
            crossings.push(Crossing::from_corners(corners, Some(over)));
            cur[i] = tl;
            cur[i + 1] = tr;
            ori.swap(i, i + 1);
        }
        unions.extend(cur.into_iter().zip(top));
    }
}

/// Splices several tangles at once, each onto its own edges. No edge may be
/// used twice.
pub(crate) fn splice_all(d: &Diagram, parts: &[(&Tangle, &[Edge], &[i32])]) -> Result<Diagram> {
    let mut seen = Vec::new();
    for &(t, edges, orient) in parts {
        assert_eq!(edges.len(), t.strands);
        assert_eq!(orient.len(), t.strands);
        for &e in edges {
            if seen.contains(&e) {
                return Err(Error::SameEdge(e));
            }
            seen.push(e);
        }
    }
    let mut crossings = d.crossings().to_vec();
    let mut next = d.max_label() + 1;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    // cut every edge before emitting anything so heads are found in `d`
    let mut cuts = Vec::new();
    for &(_, edges, _) in parts {
        let mut cut = Vec::new();
        for &e in edges {
            let ((hc, hs), _) = d.edge_ends(e)?;
            let h = fresh();
            crossings[hc].slots[hs] = h;
            cut.push((e, h));
        }
        cuts.push(cut);
    }
    let mut unions = Vec::new();
    for (&(t, _, orient), cut) in parts.iter().zip(&cuts) {
        t.emit(&mut crossings, &mut unions, cut, orient, &mut fresh);
    }
    Diagram::rebuild(crossings, &unions, d.free_loops())
}

/// Torus pattern of class `(p, n)` cabled `k` times: the braid
/// `(σ_1 … σ_{kp-1})^(k|n|)` on `kp` positions with generator sign `sign(n)`,
/// positions `k..kp` closed off.
pub fn torus_tangle(p: i64, n: i64, k: usize) -> Result<Tangle> {
    if p < 1 || k < 1 {
        return Err(Error::TorusClass { p, n });
    }
    let positions = k * p as usize;
    let power = k * n.unsigned_abs() as usize;
    Ok(Tangle::cyclic_power(k, positions, power, n.signum() as i32))
}
