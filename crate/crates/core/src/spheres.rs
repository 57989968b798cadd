//! Homotopy groups of spheres from a bundled table, and their assembly into
//! `π_k(M)` away from the torsion primes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decomposition::{classify, RationalType};
use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, FiniteAbelianGroup};
use crate::manifold::ManifoldModel;
use crate::series::sphere_summand_counts;

/// Environment variable naming a table file to use instead of the bundled one.
pub const TABLE_ENV: &str = "LOOPSPACE_SPHERE_TABLE";

pub const BUNDLED_TABLE: &str = include_str!("../data/sphere_groups.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereEntry {
    pub group: AbelianGroup,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SphereTable {
    entries: BTreeMap<(u32, u32), SphereEntry>,
}

impl SphereTable {
    /// `π_k(S^m)`, or `None` outside the stored range. Groups below the
    /// diagonal are zero whether stored or not.
    pub fn get(&self, k: u32, m: u32) -> Option<AbelianGroup> {
        if k < m {
            return Some(AbelianGroup::zero());
        }
        self.entries.get(&(k, m)).map(|e| e.group.clone())
    }

    pub fn entry(&self, k: u32, m: u32) -> Option<&SphereEntry> {
        self.entries.get(&(k, m))
    }

    /// Stored `(k, m)` pairs in increasing order.
    pub fn keys(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `k` stored for `S^m`.
    pub fn max_k(&self, m: u32) -> Option<u32> {
        self.entries.keys().filter(|(_, mm)| *mm == m).map(|(k, _)| *k).max()
    }
}

/// Parses the TSV format `k m free_rank torsion`. `#@ source: text` sets the
/// provenance of the rows that follow; other `#` lines are comments.
pub fn load_table(text: &str) -> Result<SphereTable> {
    let mut table = SphereTable::default();
    let mut source = String::from("unspecified");
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        let err = |message: String| Error::TableParse { line: line_no, message };
        if let Some(directive) = line.strip_prefix("#@") {
            if let Some(s) = directive.trim().strip_prefix("source:") {
                source = s.trim().to_string();
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        }
        let number = |s: &str, name: &str| s.parse::<u32>().map_err(|_| err(format!("bad {name} {s:?}")));
        let k = number(fields[0], "k")?;
        let m = number(fields[1], "m")?;
        let free_rank = number(fields[2], "free_rank")? as u64;
        let torsion = FiniteAbelianGroup::parse(fields[3]).map_err(|e| err(e.to_string()))?;
        let group = AbelianGroup::new(free_rank, torsion);
        if m == 0 {
            return Err(err("sphere dimension must be >= 1".into()));
        }
        if k < m && !group.is_zero() {
            return Err(err(format!("pi_{k}(S^{m}) must vanish below the diagonal")));
        }
        if k == m && group != AbelianGroup::free(1) {
            return Err(err(format!("pi_{m}(S^{m}) must be Z")));
        }
        let entry = SphereEntry { group, source: source.clone() };
        if table.entries.insert((k, m), entry).is_some() {
            return Err(err(format!("duplicate entry for pi_{k}(S^{m})")));
        }
    }
    Ok(table)
}

pub fn bundled_table() -> SphereTable {
    load_table(BUNDLED_TABLE).expect("bundled sphere table is valid")
}

pub fn load_table_file(path: &Path) -> Result<SphereTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::TableParse { line: 0, message: format!("{}: {e}", path.display()) })?;
    load_table(&text)
}

/// The table at `path`, else the one named by [`TABLE_ENV`], else the bundled one.
pub fn resolve_table(path: Option<&Path>) -> Result<SphereTable> {
    if let Some(p) = path {
        return load_table_file(p);
    }
    match std::env::var_os(TABLE_ENV) {
        Some(p) if !p.is_empty() => load_table_file(Path::new(&p)),
        _ => Ok(bundled_table()),
    }
}

/// Kills the `p`-torsion for every `p` in `invert`.
pub fn localize(group: &AbelianGroup, invert: &BTreeSet<u64>) -> AbelianGroup {
    group.localize(invert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub m: u32,
    pub mult: u64,
    #[serde(with = "group_string")]
    pub group: AbelianGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyAnswer {
    pub k: u32,
    pub inverted_primes: Vec<u64>,
    pub summands: Vec<Summand>,
    #[serde(with = "group_string")]
    pub total: AbelianGroup,
}

impl HomotopyAnswer {
    /// `"pi_3 = Z + Z"`: every summand copy in order of `m`, or `0`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .summands
            .iter()
            .filter(|s| !s.group.is_zero())
            .flat_map(|s| std::iter::repeat_n(s.group.to_string(), s.mult as usize))
            .collect();
        let rhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        format!("pi_{} = {rhs}", self.k)
    }
}

mod group_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::groups::AbelianGroup;

    pub fn serialize<S: Serializer>(g: &AbelianGroup, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(g)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AbelianGroup, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `π_k(M) ⊗ D_M = ⊕_m l[m-1] · (π_k(S^m) ⊗ D_M)`; for `r = 0` the single
/// summand `π_k(S^{2n+1}) ⊗ D_M`.
pub fn homotopy_of_manifold(model: &ManifoldModel, k: u32, table: &SphereTable) -> Result<HomotopyAnswer> {
    let invert = model.sigma_primes();
    let spheres: Vec<(u32, u64)> = if model.r() == 0 {
        vec![(model.dim(), 1)]
    } else if k < 2 {
        Vec::new()
    } else {
        let counts = sphere_summand_counts(model.n(), model.r(), k - 1)?;
        counts.nonzero().map(|(w, mult)| (w + 1, mult)).collect()
    };
    let mut missing = Vec::new();
    let mut summands = Vec::new();
    for (m, mult) in spheres {
        match table.get(k, m) {
            Some(g) => summands.push(Summand { m, mult, group: localize(&g, &invert) }),
            None => missing.push((k, m)),
        }
    }
    if !missing.is_empty() {
        return Err(Error::TableGap { missing });
    }
    let total = summands.iter().fold(AbelianGroup::zero(), |acc, s| acc.direct_sum(&s.group.power(s.mult)));
    Ok(HomotopyAnswer { k, inverted_primes: invert.into_iter().collect(), summands, total })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub rational_type: RationalType,
    pub verdict: String,
    pub note: String,
}

impl fmt::Display for ExponentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}); {}", self.verdict, self.rational_type, self.note)
    }
}

pub fn exponent_report(model: &ManifoldModel) -> ExponentReport {
    let c = classify(model);
    let verdict = match model.r() {
        0 => format!("sphere S^{}: exponents deferred to the sphere literature", model.dim()),
        1 => "rationally elliptic; no non-exponent claim".to_string(),
        _ => "no homotopy exponent at any prime".to_string(),
    };
    let note = match &c.retract_witness {
        Some(w) => format!("retract witness {w}; away from the torsion primes the groups depend only on (n, r)"),
        None => "away from the torsion primes the groups depend only on (n, r)".to_string(),
    };
    ExponentReport { rational_type: c.rational_type, verdict, note }
}
