use std::collections::HashSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AnnotatedDocument, DocumentSet};
use crate::error::{Error, Result};

/// Stratified pool composition: `x1`% from the top of the ranking, `x2`% sampled
/// from ranks `0.1 * x1 + 1 ..= 25`, the rest sampled from ranks `26 ..= 50`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataConfig {
    pub x1: u32,
    pub x2: u32,
    pub x3: u32,
    #[serde(default = "default_pool")]
    pub pool_size: usize,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_pool() -> usize {
    10
}

impl StrataConfig {
    pub fn new(x1: u32, x2: u32, x3: u32, pool_size: usize, rng_seed: u64) -> Result<Self> {
        let cfg = StrataConfig {
            x1,
            x2,
            x3,
            pool_size,
            rng_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x1 + self.x2 + self.x3 != 100 {
            return Err(Error::Config(format!(
                "strata {}-{}-{} do not sum to 100",
                self.x1, self.x2, self.x3
            )));
        }
        if !(self.x1 >= self.x2 && self.x2 >= self.x3) {
            return Err(Error::Config("strata must satisfy x1 >= x2 >= x3".into()));
        }
        if self.pool_size == 0 {
            return Err(Error::Config("pool_size must be at least 1".into()));
        }
        Ok(())
    }

    /// Parses `"60-30-10"`.
    pub fn parse(text: &str, pool_size: usize, rng_seed: u64) -> Result<Self> {
        let parts: Vec<u32> = text
            .split('-')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Config(format!("bad strata {text:?}: {e}")))?;
        match parts[..] {
            [x1, x2, x3] => Self::new(x1, x2, x3, pool_size, rng_seed),
            _ => Err(Error::Config(format!("bad strata {text:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataSample {
    pub documents: DocumentSet,
    /// One line per stratum that could not supply its quota.
    pub warnings: Vec<String>,
}

fn rank_of(doc: &AnnotatedDocument, position: usize) -> u32 {
    doc.rank.unwrap_or(position as u32 + 1)
}

/// Draws a seeded stratified pool from a rank-ordered document set. A
/// stratum that runs out of documents passes its shortfall to the next one.
pub fn sample_strata(ranked: &DocumentSet, cfg: &StrataConfig) -> Result<StrataSample> {
    cfg.validate()?;
    let pool = cfg.pool_size;
    let quota1 = cfg.x1 as usize * pool / 100;
    let quota2 = cfg.x2 as usize * pool / 100;
    let quota3 = pool - quota1 - quota2;
    let lower2 = cfg.x1 / 10 + 1;

    let ranks: Vec<u32> = ranked
        .documents
        .iter()
        .enumerate()
        .map(|(i, d)| rank_of(d, i))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut chosen: Vec<usize> = Vec::with_capacity(pool);
    let mut taken: HashSet<usize> = HashSet::new();
    let mut warnings = Vec::new();

    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by_key(|&i| (ranks[i], i));

    // stratum 1 is deterministic: the head of the ranking
    let head: Vec<usize> = order.iter().copied().take(quota1).collect();
    let mut carry = quota1 - head.len();
    if carry > 0 {
        warnings.push(format!("stratum 1 short by {carry} documents"));
    }
    for i in head {
        taken.insert(i);
        chosen.push(i);
    }

    let strata: [(usize, Box<dyn Fn(u32) -> bool>, &str); 3] = [
        (quota2, Box::new(move |r| (lower2..=25).contains(&r)), "stratum 2"),
        (quota3, Box::new(|r| (26..=50).contains(&r)), "stratum 3"),
        (0, Box::new(|_| true), "remaining ranks"),
    ];
    for (quota, in_range, name) in strata.iter() {
        let want = quota + carry;
        if want == 0 {
            continue;
        }
        let eligible: Vec<usize> = order
            .iter()
            .copied()
            .filter(|i| !taken.contains(i) && in_range(ranks[*i]))
            .collect();
        let n = want.min(eligible.len());
        let mut picked: Vec<usize> = index::sample(&mut rng, eligible.len(), n)
            .into_iter()
            .map(|j| eligible[j])
            .collect();
        picked.sort_unstable();
        carry = want - n;
        if carry > 0 && *quota > 0 {
            warnings.push(format!("{name} short by {carry} documents"));
        }
        for i in picked {
            taken.insert(i);
            chosen.push(i);
        }
    }
    if carry > 0 {
        warnings.push(format!("pool has {} of {pool} documents", chosen.len()));
    }
    for w in &warnings {
        log::warn!("{}: {w}", ranked.question_id);
    }

    chosen.sort_by_key(|&i| (ranks[i], i));
    let documents = chosen.into_iter().map(|i| ranked.documents[i].clone()).collect();
    Ok(StrataSample {
        documents: DocumentSet::new(ranked.question_id.clone(), documents)?,
        warnings,
    })
}
