//! Writhe, linking numbers, the bracket state sum and the normalized Jones
//! invariant.
//!
//! The bracket is `Σ_s A^(#A - #B) d^(|s|-1)` over all smoothing states `s`,
//! with `d = -A^2 - A^-2`. At a crossing with slots `(a,b,c,d)` the
//! A-smoothing joins `a-d` and `b-c`, the B-smoothing joins `a-b` and `c-d`.
//! Virtual crossings always join `a-c` and `b-d`. The Jones invariant is
//! normalized as `f(L) = (-A^3)^(-w) <L>`, which is invariant under all
//! classical and virtual moves.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::diagram::{Diagram, Edge};
use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::poly::LaurentPoly;

/// Largest number of classical crossings the state sum will enumerate.
pub const MAX_STATE_CROSSINGS: usize = 24;

// below this many crossings the state sum runs on the calling thread
const PARALLEL_THRESHOLD: usize = 12;
const BLOCK_BITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    A,
    B,
}

/// One smoothing choice per classical crossing, with its loop count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub choices: Vec<Smoothing>,
    pub a_count: usize,
    pub b_count: usize,
    pub loops: usize,
}

pub fn writhe(d: &Diagram) -> i64 {
    d.crossings()
        .iter()
        .filter_map(|c| c.kind.sign())
        .map(i64::from)
        .sum()
}

/// Sum of signs over classical crossings between components `i` and `j`.
/// No factor of one half is applied.
pub fn linking_number(d: &Diagram, i: usize, j: usize) -> Result<i64> {
    let comps = d.components();
    let n = comps.count();
    for k in [i, j] {
        if k >= n {
            return Err(Error::NoSuchComponent(k));
        }
    }
    if i == j {
        return Err(Error::SelfLinking(i));
    }
    let mut lk = 0;
    for c in d.classical_ids() {
        let x = d.strand_component(&comps, c, 0);
        let y = d.strand_component(&comps, c, 1);
        if (x, y) == (i, j) || (x, y) == (j, i) {
            lk += i64::from(d.crossing_sign(c)?);
        }
    }
    Ok(lk)
}

/// Symmetric matrix of pairwise linking numbers, zero on the diagonal.
pub fn linking_matrix(d: &Diagram) -> Vec<Vec<i64>> {
    let comps = d.components();
    let n = comps.count();
    let mut m = vec![vec![0; n]; n];
    for c in d.classical_ids() {
        let x = d.strand_component(&comps, c, 0);
        let y = d.strand_component(&comps, c, 1);
        if x != y {
            let s = i64::from(d.crossings()[c].kind.sign().unwrap());
            m[x][y] += s;
            m[y][x] += s;
        }
    }
    m
}

/// Compiled form of a diagram for fast state evaluation.
struct StateSpace {
    edges: usize,
    free_loops: usize,
    base: UnionFind,
    base_merges: usize,
    // per classical crossing: [a, b, c, d] as edge indices
    classical: Vec<[u16; 4]>,
}

impl StateSpace {
    fn new(d: &Diagram) -> Self {
        let labels = d.edges();
        let index: HashMap<Edge, u16> = labels
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u16))
            .collect();
        let mut base = UnionFind::new(labels.len());
        let mut base_merges = 0;
        let mut classical = Vec::new();
        for c in d.crossings() {
            let s = c.slots.map(|e| index[&e]);
            if c.kind.is_classical() {
                classical.push(s);
            } else {
                base_merges += usize::from(base.union(s[0], s[2]));
                base_merges += usize::from(base.union(s[1], s[3]));
            }
        }
        StateSpace {
            edges: labels.len(),
            free_loops: d.free_loops(),
            base,
            base_merges,
            classical,
        }
    }

    /// Loop count of state `mask`; bit `i` set means crossing `i` is A-smoothed.
    fn loops(&self, mask: u64, scratch: &mut UnionFind) -> usize {
        scratch.copy_from(&self.base);
        let mut merges = self.base_merges;
        for (i, s) in self.classical.iter().enumerate() {
            let (p, q) = if mask >> i & 1 == 1 {
                ((s[0], s[3]), (s[1], s[2]))
            } else {
                ((s[0], s[1]), (s[2], s[3]))
            };
            merges += usize::from(scratch.union(p.0, p.1));
            merges += usize::from(scratch.union(q.0, q.1));
        }
        self.edges - merges + self.free_loops
    }

    /// Tally of states by `(A-count, loops)`, flattened.
    fn tally(&self, range: std::ops::Range<u64>) -> Vec<u64> {
        let n = self.classical.len();
        let width = self.edges + self.free_loops + 1;
        let mut table = vec![0u64; (n + 1) * width];
        let mut scratch = self.base.clone();
        for mask in range {
            let a = mask.count_ones() as usize;
            let l = self.loops(mask, &mut scratch);
            table[a * width + l] += 1;
        }
        table
    }
}

pub fn state(d: &Diagram, mask: u64) -> State {
    let space = StateSpace::new(d);
    let mut scratch = space.base.clone();
    let loops = space.loops(mask, &mut scratch);
    let choices: Vec<Smoothing> = (0..space.classical.len())
        .map(|i| {
            if mask >> i & 1 == 1 {
                Smoothing::A
            } else {
                Smoothing::B
            }
        })
        .collect();
    let a_count = choices.iter().filter(|s| **s == Smoothing::A).count();
    State {
        b_count: choices.len() - a_count,
        a_count,
        choices,
        loops,
    }
}

pub fn bracket(d: &Diagram) -> Result<LaurentPoly> {
    let n = d.classical_count();
    if n > MAX_STATE_CROSSINGS {
        return Err(Error::BoundExceeded {
            what: "classical crossings",
            limit: MAX_STATE_CROSSINGS,
            actual: n,
        });
    }
    if d.component_count() == 0 {
        return Err(Error::EmptyDiagram);
    }
    let space = StateSpace::new(d);
    let total = 1u64 << n;
    let table = if n < PARALLEL_THRESHOLD {
        space.tally(0..total)
    } else {
        let block = 1u64 << BLOCK_BITS;
        (0..total / block)
            .into_par_iter()
            .map(|b| space.tally(b * block..(b + 1) * block))
            .reduce_with(|mut x, y| {
                x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
                x
            })
            .unwrap()
    };

    let width = space.edges + space.free_loops + 1;
    let loop_value = LaurentPoly::loop_value();
    let mut d_pow = vec![LaurentPoly::one()];
    for _ in 1..width {
        let next = d_pow.last().unwrap() * &loop_value;
        d_pow.push(next);
    }
    let mut out = LaurentPoly::zero();
    for a in 0..=n {
        let exp = a as i64 - (n - a) as i64;
        for l in 1..width {
            let count = table[a * width + l];
            if count > 0 {
                out += &d_pow[l - 1].shift(exp).scale(&count.into());
            }
        }
    }
    Ok(out)
}

/// `(-A^3)^(-w)` times the bracket.
pub fn jones(d: &Diagram) -> Result<LaurentPoly> {
    let w = writhe(d);
    let b = bracket(d)?;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    Ok(b.shift(-3 * w).scale(&sign.into()))
}

/// Jones value of the `n`-component unlink, `d^(n-1)`.
pub fn unlink_value(n: usize) -> LaurentPoly {
    LaurentPoly::loop_value().pow(n.saturating_sub(1) as u32)
}

/// `A^4 f(L) - A^-4 f(L switched at c) - (A^-2 - A^2) f(L smoothed at c)`.
/// Zero whenever the invariant satisfies the oriented skein relation.
pub fn skein_residual(d: &Diagram, c: usize) -> Result<LaurentPoly> {
    if d.crossing_sign(c)? != 1 {
        return Err(Error::NegativeCrossing(c));
    }
    let plus = jones(d)?;
    let minus = jones(&d.switch_crossing(c)?)?;
    let zero = jones(&d.smooth_oriented(c)?)?;
    let factor = LaurentPoly::from_terms([(-2, 1), (2, -1)]);
    Ok(&(&plus.shift(4) - &minus.shift(-4)) - &(&factor * &zero))
}

/// Jones-level unlink test: necessary but not sufficient for triviality.
pub fn is_jones_unlink(d: &Diagram) -> Result<bool> {
    let n = d.component_count();
    Ok(jones(d)? == unlink_value(n))
}
