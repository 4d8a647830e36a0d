//! Homology computations behind the optional result cache.

use std::collections::BTreeMap;
use std::time::Instant;

use knotconc::concordance::NuEvaluator;
use knotconc::homology::{kh_homology_with, s_invariant_with};
use knotconc::{
    Error, FieldSpec, FrobeniusParams, KhTable, PlanarDiagram, Result, SInvariantResult,
    ScanOptions,
};

use crate::cache::{Cache, CacheEntry, CacheKey};

pub struct Engine {
    pub field: FieldSpec,
    pub opts: ScanOptions,
    pub cache: Option<Cache>,
}

fn parse_i32(v: Option<&String>) -> Option<i32> {
    v?.parse().ok()
}

impl Engine {
    fn key(&self, d: &PlanarDiagram, invariant: &str) -> CacheKey {
        CacheKey::new(
            d.canonical().to_string(),
            invariant,
            &self.field.to_string(),
        )
    }

    fn store(&self, key: CacheKey, values: BTreeMap<String, String>, start: Instant) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.put(&CacheEntry::new(key, values, start.elapsed())) {
                log::warn!("cannot write cache entry: {e}");
            }
        }
    }

    pub fn s(&self, d: &PlanarDiagram) -> Result<SInvariantResult> {
        let key = self.key(d, "s");
        if let Some(e) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            let v = &e.values;
            if let (Some(s), Some(s_min), Some(s_max)) = (
                parse_i32(v.get("s")),
                parse_i32(v.get("s_min")),
                parse_i32(v.get("s_max")),
            ) {
                log::debug!("cache hit for s of {}", key.pd);
                return Ok(SInvariantResult {
                    s,
                    s_min,
                    s_max,
                    field: self.field,
                });
            }
            log::warn!("cache entry for s of {} lacks values; recomputing", key.pd);
        }
        let start = Instant::now();
        let r = s_invariant_with(d, &FrobeniusParams::for_s_invariant(self.field), &self.opts)?;
        let values = BTreeMap::from([
            ("s".to_string(), r.s.to_string()),
            ("s_min".to_string(), r.s_min.to_string()),
            ("s_max".to_string(), r.s_max.to_string()),
        ]);
        self.store(key, values, start);
        Ok(r)
    }

    pub fn kh(&self, d: &PlanarDiagram) -> Result<KhTable> {
        let key = self.key(d, "kh");
        if let Some(e) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            match e.values.get("table").map(|t| decode_table(t)) {
                Some(Some(t)) => return Ok(t),
                _ => log::warn!(
                    "cache entry for kh of {} is unreadable; recomputing",
                    key.pd
                ),
            }
        }
        let start = Instant::now();
        let t = kh_homology_with(d, self.field, &self.opts)?;
        self.store(
            key,
            BTreeMap::from([("table".to_string(), encode_table(&t))]),
            start,
        );
        Ok(t)
    }
}

impl NuEvaluator for Engine {
    fn name(&self) -> &str {
        "s"
    }

    fn nu(&self, d: &PlanarDiagram) -> Result<i64> {
        Ok(self.s(d)?.nu() as i64)
    }
}

/// `i:j:dim` triples separated by commas.
pub fn encode_table(t: &KhTable) -> String {
    t.iter()
        .map(|((i, j), d)| format!("{i}:{j}:{d}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn decode_table(s: &str) -> Option<KhTable> {
    let mut gradings = Vec::new();
    for cell in s.split(',').filter(|c| !c.is_empty()) {
        let mut it = cell.split(':').map(str::parse::<i64>);
        let (i, j, d) = (it.next()?.ok()?, it.next()?.ok()?, it.next()?.ok()?);
        if it.next().is_some() || d <= 0 {
            return None;
        }
        gradings.extend(std::iter::repeat_n((i as i32, j as i32), d as usize));
    }
    Some(KhTable::from_gradings(gradings))
}

/// Exit status for an error: 2 for bad input, 3 for budgets, 4 for missing
/// data, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::MalformedSyntax(_)
        | Error::ArcMultiplicity { .. }
        | Error::MultiComponent { .. }
        | Error::InconsistentOrientation(_)
        | Error::NonCoprime { .. }
        | Error::UnknownKnot(_)
        | Error::InvalidArgument(_) => 2,
        Error::ResourceBudgetExceeded(_) => 3,
        Error::UnknownTau(_) | Error::MissingLeaf(_) => 4,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let d: PlanarDiagram = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".parse().unwrap();
        let t = knotconc::kh_homology(&d, FieldSpec::Rational).unwrap();
        assert_eq!(decode_table(&encode_table(&t)), Some(t));
        assert_eq!(decode_table(""), Some(KhTable::default()));
        assert_eq!(decode_table("1:2"), None);
        assert_eq!(decode_table("1:2:0"), None);
    }

    #[test]
    fn cached_and_uncached_agree() {
        let dir = tempfile::tempdir().unwrap();
        let d = knotconc::torus_knot(2, 5).unwrap();
        let plain = Engine {
            field: FieldSpec::Rational,
            opts: ScanOptions::default(),
            cache: None,
        };
        let cached = Engine {
            field: FieldSpec::Rational,
            opts: ScanOptions::default(),
            cache: Some(Cache::open(dir.path()).unwrap()),
        };
        for _ in 0..2 {
            assert_eq!(cached.s(&d).unwrap(), plain.s(&d).unwrap());
            assert_eq!(cached.kh(&d).unwrap(), plain.kh(&d).unwrap());
        }
        assert_eq!(cached.cache.as_ref().unwrap().entries().unwrap().len(), 2);
    }
}
