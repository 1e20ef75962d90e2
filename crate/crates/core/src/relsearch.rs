//! Enumeration of super-cyclotomic polynomials and the search for ternary
//! relations `F - G = k H` among them.
//!
//! Every candidate is expanded once into a small `i64` coefficient vector and
//! indexed by that vector. For each ordered pair `(F, G)` with coprime factor
//! sets, the difference `F - G` must be `k` times a monic member of the table,
//! so `k` is read off the leading coefficient and `H` is a hash lookup.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycpoly::{cyclotomic, verify_ternary, SuperCyc};
use crate::error::{Error, Result};
use crate::numth::totient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_degree: u64,
    pub k_max: u64,
    /// Cap on the number of cyclotomic factors (with multiplicity) in F, G and H.
    pub max_factors: u32,
    pub worker_count: usize,
    /// Stop after this many relations and flag the result as partial.
    pub relation_budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_degree: 8,
            k_max: 10,
            max_factors: u32::MAX,
            worker_count: 1,
            relation_budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub f: SuperCyc,
    pub g: SuperCyc,
    pub h: SuperCyc,
    pub k: u64,
    /// Lowest-degree relation this one is obtained from by `X -> X^j`.
    pub family_tag: String,
    /// Whether `F`, `G` and `H` are all fixed, up to sign, by `X -> 1/X`
    /// after clearing degrees.
    pub reciprocal: bool,
}

impl Relation {
    pub fn degree(&self) -> u64 {
        self.f.degree().max(self.g.degree())
    }

    pub fn describe(f: &SuperCyc, g: &SuperCyc, h: &SuperCyc, k: u64) -> String {
        format!("({f}) - ({g}) = {k} * ({h})")
    }

    pub fn substitute(&self, j: u64) -> (SuperCyc, SuperCyc, SuperCyc, u64) {
        (
            self.f.substitute_power(j),
            self.g.substitute_power(j),
            self.h.substitute_power(j),
            self.k,
        )
    }
}

/// Cyclotomic indices with `phi(m) <= max_degree`, in increasing order.
pub fn cyclotomic_indices(max_degree: u64) -> Vec<u64> {
    // phi(m) >= sqrt(m / 2), so m <= 2 d^2 covers everything
    let bound = 2 * max_degree * max_degree + 2;
    (1..=bound).filter(|&m| totient(m) <= max_degree).collect()
}

/// All super-cyclotomic polynomials of degree at most `max_degree`, each
/// once, sorted by degree and then canonically.
pub fn enumerate_supercyc(max_degree: u64) -> Vec<SuperCyc> {
    let idx = cyclotomic_indices(max_degree);
    let degs: Vec<u64> = idx.iter().map(|&m| totient(m)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(u64, u32)> = Vec::new();
    fn rec(
        pos: usize,
        budget: u64,
        idx: &[u64],
        degs: &[u64],
        stack: &mut Vec<(u64, u32)>,
        out: &mut Vec<SuperCyc>,
    ) {
        if pos == idx.len() {
            for x in 0..=budget {
                out.push(SuperCyc::new(x as u32, stack.iter().copied()));
            }
            return;
        }
        rec(pos + 1, budget, idx, degs, stack, out);
        let d = degs[pos];
        let mut e = 1u32;
        while d * e as u64 <= budget {
            stack.push((idx[pos], e));
            rec(pos + 1, budget - d * e as u64, idx, degs, stack, out);
            stack.pop();
            e += 1;
        }
    }
    rec(0, max_degree, &idx, &degs, &mut stack, &mut out);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

struct Table {
    polys: Vec<SuperCyc>,
    coeffs: Vec<Vec<i64>>,
    masks: Vec<u128>,
    degrees: Vec<usize>,
    lookup: HashMap<Vec<i64>, usize>,
}

fn expand_i64(s: &SuperCyc, cache: &HashMap<u64, Vec<i64>>) -> Vec<i64> {
    let mut acc = vec![0i64; s.x_power as usize + 1];
    acc[s.x_power as usize] = 1;
    for &(m, e) in &s.factors {
        let phi = &cache[&m];
        for _ in 0..e {
            let mut next = vec![0i64; acc.len() + phi.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                if *a == 0 {
                    continue;
                }
                for (j, b) in phi.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
    }
    acc
}

fn build_table(cfg: &SearchConfig) -> Table {
    let indices = cyclotomic_indices(cfg.max_degree);
    let bit: HashMap<u64, u32> = indices
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i as u32 + 1))
        .collect();
    assert!(indices.len() < 127, "too many cyclotomic indices for a 128-bit mask");
    let cache: HashMap<u64, Vec<i64>> = indices
        .iter()
        .map(|&m| {
            let c = cyclotomic(m)
                .coeffs()
                .iter()
                .map(|c| i64::try_from(c).expect("small cyclotomic coefficients"))
                .collect();
            (m, c)
        })
        .collect();
    let polys: Vec<SuperCyc> = enumerate_supercyc(cfg.max_degree)
        .into_iter()
        .filter(|s| s.factors.iter().map(|&(_, e)| e).sum::<u32>() <= cfg.max_factors)
        .collect();
    let coeffs: Vec<Vec<i64>> = polys.iter().map(|s| expand_i64(s, &cache)).collect();
    let masks = polys
        .iter()
        .map(|s| {
            let mut m = if s.x_power > 0 { 1u128 } else { 0 };
            for &(idx, _) in &s.factors {
                m |= 1u128 << bit[&idx];
            }
            m
        })
        .collect();
    let degrees = coeffs.iter().map(|c| c.len() - 1).collect();
    let lookup = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    Table {
        polys,
        coeffs,
        masks,
        degrees,
        lookup,
    }
}

/// Relations `(f, g, h, k)` with the given `f` index.
fn relations_for(t: &Table, fi: usize, k_max: u64) -> Vec<(usize, usize, usize, u64)> {
    let mut out = Vec::new();
    let fc = &t.coeffs[fi];
    let df = t.degrees[fi];
    let mut diff = vec![0i64; df + 1];
    for gi in 0..t.polys.len() {
        if t.degrees[gi] > df {
            break;
        }
        if gi == fi || t.masks[fi] & t.masks[gi] != 0 {
            continue;
        }
        let gc = &t.coeffs[gi];
        for (i, d) in diff.iter_mut().enumerate() {
            *d = fc[i] - gc.get(i).copied().unwrap_or(0);
        }
        let Some(top) = diff.iter().rposition(|&c| c != 0) else {
            continue;
        };
        let k = diff[top];
        if k <= 0 || k as u64 > k_max {
            continue;
        }
        if diff[..top].iter().any(|c| c % k != 0) {
            continue;
        }
        let h: Vec<i64> = diff[..=top].iter().map(|c| c / k).collect();
        if let Some(&hi) = t.lookup.get(&h) {
            out.push((fi, gi, hi, k as u64));
        }
    }
    out
}

/// Search outcome: relations with family tags plus bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub enumerated: usize,
    pub relations: Vec<Relation>,
    /// Family tag to member count, tags sorted.
    pub families: BTreeMap<String, usize>,
    pub partial: bool,
    pub all_verified: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum CheckpointLine {
    Config { max_degree: u64, k_max: u64, max_factors: u32 },
    ChunkDone { start: usize, end: usize },
    Relation { f: String, g: String, h: String, k: u64 },
}

const CHUNK: usize = 512;

fn is_reciprocal(s: &SuperCyc) -> bool {
    let p = s.expand();
    let mut rev: Vec<_> = p.coeffs().to_vec();
    rev.reverse();
    let r = crate::cycpoly::IntPoly::new(rev.clone());
    let neg = crate::cycpoly::IntPoly::new(rev.into_iter().map(|c| -c).collect());
    r == p || neg == p
}

/// Run the search, optionally resuming from and appending to a JSON-lines checkpoint.
pub fn search_with_checkpoint(cfg: &SearchConfig, checkpoint: Option<&Path>) -> Result<SearchOutcome> {
    if cfg.max_degree == 0 || cfg.k_max == 0 || cfg.worker_count == 0 {
        return Err(Error::Precondition(
            "max_degree, k_max and worker_count must be positive".into(),
        ));
    }
    let table = build_table(cfg);
    let n = table.polys.len();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let mut found: Vec<(SuperCyc, SuperCyc, SuperCyc, u64)> = Vec::new();
    if let Some(path) = checkpoint.filter(|p| p.exists()) {
        let reader = BufReader::new(File::open(path).map_err(io_err)?);
        for line in reader.lines() {
            let line = line.map_err(io_err)?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CheckpointLine>(&line)
                .map_err(|e| Error::Parse(e.to_string()))?
            {
                CheckpointLine::Config {
                    max_degree,
                    k_max,
                    max_factors,
                } => {
                    if (max_degree, k_max, max_factors)
                        != (cfg.max_degree, cfg.k_max, cfg.max_factors)
                    {
                        return Err(Error::Precondition(
                            "checkpoint was written for different search bounds".into(),
                        ));
                    }
                }
                CheckpointLine::ChunkDone { start, end } => {
                    done.insert((start, end));
                }
                CheckpointLine::Relation { f, g, h, k } => {
                    found.push((f.parse()?, g.parse()?, h.parse()?, k));
                }
            }
        }
    }
    let fresh = checkpoint.is_some_and(|p| !p.exists());
    let mut sink = match checkpoint {
        Some(p) => Some(
            std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(io_err)?,
        ),
        None => None,
    };
    if let (true, Some(w)) = (fresh, sink.as_mut()) {
        let line = CheckpointLine::Config {
            max_degree: cfg.max_degree,
            k_max: cfg.k_max,
            max_factors: cfg.max_factors,
        };
        writeln!(w, "{}", serde_json::to_string(&line).expect("serialisable")).map_err(io_err)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let mut partial = false;
    let chunks: Vec<(usize, usize)> = (0..n)
        .step_by(CHUNK)
        .map(|s| (s, (s + CHUNK).min(n)))
        .filter(|c| !done.contains(c))
        .collect();
    for (start, end) in chunks {
        if found.len() > cfg.relation_budget {
            partial = true;
            break;
        }
        let batch: Vec<(usize, usize, usize, u64)> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .flat_map_iter(|fi| relations_for(&table, fi, cfg.k_max))
                .collect()
        });
        for &(fi, gi, hi, k) in &batch {
            let rel = (
                table.polys[fi].clone(),
                table.polys[gi].clone(),
                table.polys[hi].clone(),
                k,
            );
            if let Some(w) = sink.as_mut() {
                let line = CheckpointLine::Relation {
                    f: rel.0.to_string(),
                    g: rel.1.to_string(),
                    h: rel.2.to_string(),
                    k,
                };
                writeln!(w, "{}", serde_json::to_string(&line).expect("serialisable"))
                    .map_err(io_err)?;
            }
            found.push(rel);
        }
        if let Some(w) = sink.as_mut() {
            let line = CheckpointLine::ChunkDone { start, end };
            writeln!(w, "{}", serde_json::to_string(&line).expect("serialisable"))
                .map_err(io_err)?;
        }
    }
    if found.len() > cfg.relation_budget {
        found.truncate(cfg.relation_budget);
        partial = true;
    }
    let relations = tag_families(found);
    let all_verified = relations
        .par_iter()
        .all(|r| verify_ternary(&r.f, &r.g, &r.h, r.k as i64).holds());
    let mut families = BTreeMap::new();
    for r in &relations {
        *families.entry(r.family_tag.clone()).or_insert(0) += 1;
    }
    Ok(SearchOutcome {
        config: cfg.clone(),
        enumerated: n,
        relations,
        families,
        partial,
        all_verified,
    })
}

pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    search_with_checkpoint(cfg, None)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Precondition(format!("checkpoint i/o: {e}"))
}

/// Sort relations and group them into families under `X -> X^j`.
fn tag_families(found: Vec<(SuperCyc, SuperCyc, SuperCyc, u64)>) -> Vec<Relation> {
    let mut found = found;
    found.sort_by(|a, b| {
        let da = a.0.degree().max(a.1.degree());
        let db = b.0.degree().max(b.1.degree());
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    found.dedup();
    let max_deg = found
        .iter()
        .map(|r| r.0.degree().max(r.1.degree()))
        .max()
        .unwrap_or(0);
    let position: HashMap<(SuperCyc, SuperCyc, SuperCyc, u64), usize> = found
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let mut tags: Vec<Option<String>> = vec![None; found.len()];
    for i in 0..found.len() {
        let tag = tags[i]
            .clone()
            .unwrap_or_else(|| {
                let (f, g, h, k) = &found[i];
                Relation::describe(f, g, h, *k)
            });
        tags[i] = Some(tag.clone());
        let (f, g, h, k) = &found[i];
        let deg = f.degree().max(g.degree());
        let mut j = 2;
        while deg * j <= max_deg {
            let image = (
                f.substitute_power(j),
                g.substitute_power(j),
                h.substitute_power(j),
                *k,
            );
            if let Some(&p) = position.get(&image) {
                if tags[p].is_none() {
                    tags[p] = Some(tag.clone());
                }
            }
            j += 1;
        }
    }
    found
        .into_iter()
        .zip(tags)
        .map(|((f, g, h, k), tag)| {
            let reciprocal = is_reciprocal(&f) && is_reciprocal(&g) && is_reciprocal(&h);
            Relation {
                f,
                g,
                h,
                k,
                family_tag: tag.expect("assigned in order"),
                reciprocal,
            }
        })
        .collect()
}

/// Whether `outcome` contains the relation `F - G = k H` exactly.
pub fn contains(outcome: &SearchOutcome, f: &SuperCyc, g: &SuperCyc, h: &SuperCyc, k: u64) -> bool {
    outcome
        .relations
        .iter()
        .any(|r| &r.f == f && &r.g == g && &r.h == h && r.k == k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycpoly::known_identities;

    #[test]
    fn degree_one() {
        let all = enumerate_supercyc(1);
        let names: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, vec!["1", "Phi1", "Phi2", "X^1"]);
    }

    #[test]
    fn degree_two() {
        let all = enumerate_supercyc(2);
        assert_eq!(all.len(), 4 + 9);
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for s in ["X^2", "X^1 * Phi1", "Phi1 * Phi2", "Phi3", "Phi4", "Phi6", "Phi2^2"] {
            assert!(set.contains(&s.parse::<SuperCyc>().unwrap()), "{s}");
        }
    }

    #[test]
    fn small_search() {
        let cfg = SearchConfig {
            max_degree: 4,
            k_max: 8,
            ..SearchConfig::default()
        };
        let out = search(&cfg).unwrap();
        assert!(out.all_verified && !out.partial);
        let (f, g, h, k) = &known_identities()[3];
        assert!(contains(&out, f, g, h, *k as u64));
        let two = search(&SearchConfig {
            worker_count: 3,
            ..cfg
        })
        .unwrap();
        assert_eq!(out.relations, two.relations);
    }
}
