use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::{Lattice, ZCoords};
use super::{ElementRecord, GroupGenError};
use crate::quat::{QuatElement, QuatOrder};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationOptions {
    /// Word-length budget `L`.
    pub max_word_length: usize,
    /// Node cap for the shared forward ball and for each backward search.
    pub node_cap: usize,
    /// Words may multiply to `±target`.
    pub projective: bool,
    /// Try greedy reduction before breadth-first search.
    pub greedy: bool,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        GenerationOptions {
            max_word_length: 20,
            node_cap: 250_000,
            projective: true,
            greedy: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetStatus {
    Certified,
    /// Budget exhausted; not a proof that the target lies outside `⟨S⟩`.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Trivial,
    Greedy,
    Bfs,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetCertificate {
    pub target: usize,
    pub status: TargetStatus,
    /// Signed 1-based indices into the generator list: `k` is `S[k−1]`,
    /// `−k` its inverse.
    pub word: Option<Vec<i64>>,
    pub length: Option<usize>,
    pub method: Option<SearchMethod>,
    /// The word has minimal length over `S ∪ S⁻¹`.
    pub minimal: bool,
    /// The word multiplies to `sign · target`.
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationCertificate {
    pub options: GenerationOptions,
    pub generators: Vec<ElementRecord>,
    pub targets: Vec<ElementRecord>,
    pub entries: Vec<TargetCertificate>,
    pub certified: usize,
    pub inconclusive: usize,
    pub max_length: Option<usize>,
    /// Complete levels of the shared forward ball (0 when not built).
    pub forward_depth: usize,
    pub forward_nodes: usize,
}

impl GenerationCertificate {
    pub fn all_certified(&self) -> bool {
        self.inconclusive == 0
    }
}

struct Gen {
    z: ZCoords,
    inv: ZCoords,
    signed: i64,
}

struct Search<'a> {
    lat: &'a Lattice,
    gens: Vec<Gen>,
    one: ZCoords,
    projective: bool,
}

impl Search<'_> {
    fn norm(&self, z: ZCoords) -> ZCoords {
        if self.projective {
            Lattice::canonical(z)
        } else {
            z
        }
    }

    fn mul(&self, x: &[i64], y: &[i64]) -> Option<ZCoords> {
        self.lat.mul(x, y).ok().map(|z| self.norm(z))
    }

    /// Repeatedly strips the generator that brings `ρ(remainder)·i` closest to `i`.
    fn greedy(&self, t: &ZCoords, max_len: usize) -> Option<Vec<usize>> {
        let mut cur = t.clone();
        let mut c = self.lat.cosh_dist(&cur);
        let mut word = vec![];
        loop {
            if cur == self.one {
                return Some(word);
            }
            if word.len() >= max_len {
                return None;
            }
            let mut best: Option<(f64, usize, ZCoords)> = None;
            for (gi, g) in self.gens.iter().enumerate() {
                let r = self.mul(&g.inv, &cur)?;
                let cr = self.lat.cosh_dist(&r);
                if best.as_ref().is_none_or(|(bc, _, _)| cr < *bc) {
                    best = Some((cr, gi, r));
                }
            }
            let (cr, gi, r) = best?;
            if cr >= c * (1.0 - 1e-12) {
                return None;
            }
            word.push(gi);
            cur = r;
            c = cr;
        }
    }
}

struct Ball {
    index: HashMap<ZCoords, u32>,
    nodes: Vec<(ZCoords, u32, u16)>,
    depth: usize,
}

const CHUNK: usize = 4096;

impl Ball {
    fn build(s: &Search, max_depth: usize, cap: usize) -> Ball {
        let mut ball = Ball {
            index: HashMap::from([(s.one.clone(), 0)]),
            nodes: vec![(s.one.clone(), u32::MAX, 0)],
            depth: 0,
        };
        let mut level_start = 0;
        'levels: while ball.depth < max_depth {
            let level_end = ball.nodes.len();
            for chunk_start in (level_start..level_end).step_by(CHUNK) {
                let chunk_end = (chunk_start + CHUNK).min(level_end);
                let products: Vec<Option<Vec<ZCoords>>> = (chunk_start..chunk_end)
                    .into_par_iter()
                    .map(|i| s.gens.iter().map(|g| s.mul(&ball.nodes[i].0, &g.z)).collect())
                    .collect();
                for (off, prods) in products.into_iter().enumerate() {
                    let Some(prods) = prods else {
                        ball.rollback(level_end);
                        break 'levels;
                    };
                    for (gi, p) in prods.into_iter().enumerate() {
                        if !ball.index.contains_key(&p) {
                            ball.index.insert(p.clone(), ball.nodes.len() as u32);
                            ball.nodes.push((p, (chunk_start + off) as u32, gi as u16));
                        }
                    }
                    if ball.nodes.len() > cap {
                        ball.rollback(level_end);
                        break 'levels;
                    }
                }
            }
            if ball.nodes.len() == level_end {
                // the whole group is finite and already listed
                ball.depth = max_depth;
                break;
            }
            level_start = level_end;
            ball.depth += 1;
        }
        ball
    }

    fn rollback(&mut self, len: usize) {
        for (z, _, _) in self.nodes.drain(len..) {
            self.index.remove(&z);
        }
    }

    fn word(&self, mut i: u32) -> Vec<usize> {
        let mut w = vec![];
        while self.nodes[i as usize].1 != u32::MAX {
            w.push(self.nodes[i as usize].2 as usize);
            i = self.nodes[i as usize].1;
        }
        w.reverse();
        w
    }
}

/// Breadth-first search backwards from `t` until it meets the forward ball.
fn backward(s: &Search, ball: &Ball, t: &ZCoords, max_j: usize, cap: usize) -> Option<Vec<usize>> {
    let mut nodes: Vec<(ZCoords, u32, u16)> = vec![(t.clone(), u32::MAX, 0)];
    let mut seen: HashSet<ZCoords> = HashSet::from([t.clone()]);
    let mut level_start = 0;
    for _ in 1..=max_j {
        let level_end = nodes.len();
        let mut meets: Vec<(u32, u32)> = vec![];
        for i in level_start..level_end {
            for (gi, g) in s.gens.iter().enumerate() {
                let y = s.mul(&nodes[i].0, &g.inv)?;
                if seen.insert(y.clone()) {
                    if let Some(&f) = ball.index.get(&y) {
                        meets.push((f, nodes.len() as u32));
                    }
                    nodes.push((y, i as u32, gi as u16));
                    if nodes.len() > cap {
                        return None;
                    }
                }
            }
        }
        if !meets.is_empty() {
            return meets
                .into_iter()
                .map(|(f, mut b)| {
                    let mut w = ball.word(f);
                    while nodes[b as usize].1 != u32::MAX {
                        w.push(nodes[b as usize].2 as usize);
                        b = nodes[b as usize].1;
                    }
                    w
                })
                .min();
        }
        if nodes.len() == level_end {
            return None;
        }
        level_start = level_end;
    }
    None
}

fn element_of(gens: &[ElementRecord], signed: i64) -> Result<QuatElement, GroupGenError> {
    let g = &gens[(signed.unsigned_abs() - 1) as usize].coords;
    Ok(if signed > 0 { g.clone() } else { g.inverse()? })
}

/// Exact product of the word against the target; returns the sign.
fn verify(gens: &[ElementRecord], target: &QuatElement, word: &[i64], projective: bool) -> Result<Option<i8>, GroupGenError> {
    let mut acc = QuatElement::one(target.algebra());
    for &w in word {
        acc = acc.mul(&element_of(gens, w)?)?;
    }
    Ok(if &acc == target {
        Some(1)
    } else if projective && acc == target.neg() {
        Some(-1)
    } else {
        None
    })
}

/// Certifies targets as words in `S ∪ S⁻¹`: greedy reduction toward the base
/// point first, then a bidirectional breadth-first search. Every word is
/// re-multiplied exactly before it is reported.
pub fn verify_generation(
    order: &QuatOrder,
    gens: &[ElementRecord],
    targets: &[ElementRecord],
    opts: &GenerationOptions,
) -> Result<GenerationCertificate, GroupGenError> {
    if gens.is_empty() {
        return Err(GroupGenError::EmptyGenerators);
    }
    let lat = Lattice::new(order)?;
    let zc = |r: &ElementRecord| {
        lat.coordinates(&r.coords)?
            .ok_or_else(|| GroupGenError::NotInOrder(r.coords.to_string()))
    };
    let mut search = Search {
        lat: &lat,
        gens: vec![],
        one: lat.one.clone(),
        projective: opts.projective,
    };
    let mut seen = HashSet::new();
    for (k, r) in gens.iter().enumerate() {
        let z = zc(r)?;
        for (g, sign) in [(z.clone(), 1i64), (lat.conj(&z), -1)] {
            let key = search.norm(g);
            if key == search.one || !seen.insert(key.clone()) {
                continue;
            }
            search.gens.push(Gen {
                inv: search.norm(lat.conj(&key)),
                z: key,
                signed: sign * (k as i64 + 1),
            });
        }
    }
    let tz: Vec<ZCoords> = targets.iter().map(|r| zc(r).map(|z| search.norm(z))).collect::<Result<_, _>>()?;

    let max_len = opts.max_word_length;
    let first: Vec<Option<(Vec<usize>, SearchMethod)>> = tz
        .par_iter()
        .map(|t| {
            if *t == search.one {
                Some((vec![], SearchMethod::Trivial))
            } else if opts.greedy {
                search.greedy(t, max_len).map(|w| (w, SearchMethod::Greedy))
            } else {
                None
            }
        })
        .collect();

    let need_bfs = first.iter().any(Option::is_none);
    let ball = need_bfs.then(|| Ball::build(&search, max_len.div_ceil(2), opts.node_cap));
    let found: Vec<Option<(Vec<usize>, SearchMethod)>> = first
        .into_par_iter()
        .zip(tz.par_iter())
        .map(|(f, t)| {
            f.or_else(|| {
                let ball = ball.as_ref().expect("built when needed");
                if let Some(&i) = ball.index.get(t) {
                    return Some((ball.word(i), SearchMethod::Bfs));
                }
                backward(&search, ball, t, max_len - ball.depth, opts.node_cap).map(|w| (w, SearchMethod::Bfs))
            })
        })
        .collect();

    let mut entries = Vec::with_capacity(targets.len());
    for (i, f) in found.into_iter().enumerate() {
        entries.push(match f {
            Some((w, method)) => {
                let word: Vec<i64> = w.iter().map(|&gi| search.gens[gi].signed).collect();
                let sign = verify(gens, &targets[i].coords, &word, opts.projective)?
                    .ok_or(GroupGenError::VerificationFailed(i))?;
                TargetCertificate {
                    target: i,
                    status: TargetStatus::Certified,
                    length: Some(word.len()),
                    word: Some(word),
                    minimal: method != SearchMethod::Greedy,
                    method: Some(method),
                    sign,
                }
            }
            None => TargetCertificate {
                target: i,
                status: TargetStatus::Inconclusive,
                word: None,
                length: None,
                method: None,
                minimal: false,
                sign: 0,
            },
        });
    }
    let certified = entries.iter().filter(|e| e.status == TargetStatus::Certified).count();
    Ok(GenerationCertificate {
        options: opts.clone(),
        generators: gens.to_vec(),
        targets: targets.to_vec(),
        max_length: entries.iter().filter_map(|e| e.length).max(),
        inconclusive: entries.len() - certified,
        certified,
        entries,
        forward_depth: ball.as_ref().map_or(0, |b| b.depth),
        forward_nodes: ball.as_ref().map_or(0, |b| b.nodes.len()),
    })
}
