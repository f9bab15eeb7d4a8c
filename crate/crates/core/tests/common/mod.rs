//! Shared test support: a recursive skein-expansion bracket, a seeded
//! generator of small diagrams, and corpus access.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vknot::{Crossing, CrossingKind, Diagram, LaurentPoly};

type Poly = BTreeMap<i64, i64>;

fn add(a: &mut Poly, b: &Poly, shift: i64) {
    for (&e, &c) in b {
        *a.entry(e + shift).or_insert(0) += c;
    }
    a.retain(|_, c| *c != 0);
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&e, &c) in a {
        for (&f, &k) in b {
            *out.entry(e + f).or_insert(0) += c * k;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn loop_power(n: usize) -> Poly {
    let d: Poly = [(-2, -1), (2, -1)].into_iter().collect();
    (0..n).fold([(0, 1)].into_iter().collect(), |acc, _| mul(&acc, &d))
}

// loops formed by a set of label pairings (every label in exactly two pairs)
fn count_loops(pairs: &[(u32, u32)]) -> usize {
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(x, y) in pairs {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    let mut seen = std::collections::HashSet::new();
    let mut loops = 0;
    let mut keys: Vec<u32> = adj.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        if seen.insert(k) {
            loops += 1;
            let mut stack = vec![k];
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    loops
}

fn expand(rest: &[Crossing], pairs: &mut Vec<(u32, u32)>, free: usize) -> Poly {
    match rest.split_first() {
        None => {
            let loops = count_loops(pairs) + free;
            loop_power(loops - 1)
        }
        Some((x, tail)) => {
            let [a, b, c, d] = x.slots;
            match x.kind {
                CrossingKind::Virtual => {
                    pairs.extend([(a, c), (b, d)]);
                    let r = expand(tail, pairs, free);
                    pairs.truncate(pairs.len() - 2);
                    r
                }
                _ => {
                    let mut out = Poly::new();
                    pairs.extend([(a, d), (b, c)]);
                    add(&mut out, &expand(tail, pairs, free), 1);
                    pairs.truncate(pairs.len() - 2);
                    pairs.extend([(a, b), (c, d)]);
                    add(&mut out, &expand(tail, pairs, free), -1);
                    pairs.truncate(pairs.len() - 2);
                    out
                }
            }
        }
    }
}

fn to_lp(p: &Poly) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().map(|(&e, &c)| (e, c)))
}

/// Bracket by recursive expansion over the crossings in input order.
pub fn oracle_bracket(d: &Diagram) -> LaurentPoly {
    to_lp(&expand(d.crossings(), &mut Vec::new(), d.free_loops()))
}

pub fn oracle_jones(d: &Diagram) -> LaurentPoly {
    let w: i64 = d
        .crossings()
        .iter()
        .filter_map(|c| c.kind.sign())
        .map(i64::from)
        .sum();
    let b = expand(d.crossings(), &mut Vec::new(), d.free_loops());
    let sign = if w % 2 == 0 { 1 } else { -1 };
    to_lp(&b.iter().map(|(&e, &c)| (e - 3 * w, sign * c)).collect())
}

/// Closure of a braid word on `strands` strands. Letters are
/// `(position, kind)` with kind `1`, `-1` or `0` for a virtual generator.
pub fn braid_closure(strands: usize, word: &[(usize, i32)]) -> Diagram {
    let mut next = 1u32;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let bottom: Vec<u32> = (0..strands).map(|_| fresh()).collect();
    let mut cur = bottom.clone();
    let mut crossings = Vec::new();
    for &(i, g) in word {
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (fresh(), fresh());
        crossings.push(match g {
            1 => Crossing::classical((br, tl), (bl, tr), 1),
            -1 => Crossing::classical((bl, tr), (br, tl), -1),
            _ => Crossing {
                kind: CrossingKind::Virtual,
                slots: [bl, tl, tr, br],
            },
        });
        cur[i] = tl;
        cur[i + 1] = tr;
    }
    let rename: HashMap<u32, u32> = cur.iter().copied().zip(bottom.iter().copied()).collect();
    let mut free = 0;
    for (j, &b) in bottom.iter().enumerate() {
        if cur[j] == b {
            free += 1;
        }
    }
    let crossings = crossings
        .into_iter()
        .map(|mut c| {
            for e in c.slots.iter_mut() {
                if let Some(&r) = rename.get(e) {
                    *e = r;
                }
            }
            c
        })
        .collect();
    Diagram::new(crossings, free).expect("braid closures are valid")
}

/// `count` pseudorandom braid closures with at most `max_crossings`
/// crossings, roughly one generator in five virtual.
pub fn random_diagrams(seed: u64, count: usize, max_crossings: usize) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let strands = rng.gen_range(2..=4);
            let len = rng.gen_range(1..=max_crossings);
            let word: Vec<(usize, i32)> = (0..len)
                .map(|_| {
                    let i = rng.gen_range(0..strands - 1);
                    let g = match rng.gen_range(0..5) {
                        0 => 0,
                        1 | 2 => 1,
                        _ => -1,
                    };
                    (i, g)
                })
                .collect();
            braid_closure(strands, &word)
        })
        .collect()
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn load(name: &str) -> Diagram {
    let text = std::fs::read_to_string(corpus_file(name)).unwrap();
    vknot::parse_diagram(&text).unwrap()
}

/// Every parseable corpus diagram, by file name.
pub fn corpus() -> Vec<(String, Diagram)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".vkd"))
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|n| {
            let text = std::fs::read_to_string(corpus_file(&n)).ok()?;
            vknot::parse_diagram(&text).ok().map(|d| (n, d))
        })
        .collect()
}

pub const TREFOIL_JONES: &str = "-A^-16 + A^-12 + A^-4";
pub const MIRROR_TREFOIL_JONES: &str = "A^4 + A^12 - A^16";
pub const HOPF_JONES: &str = "-A^-10 - A^-2";
