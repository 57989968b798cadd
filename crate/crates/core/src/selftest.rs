//! Cross-oracle suites: every count is computed at least two independent ways.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{NCPoly, Word};
use crate::decomposition::{loop_decomposition, rational_series};
use crate::koszul::koszul_dual;
use crate::lyndon::{independence_certificate, lie_dims, LieDimTable};
use crate::manifold::ManifoldModel;
use crate::rewrite::{enumerated_dims, QuadraticPresentation, Strategy, ENUMERATION_THRESHOLD};
use crate::series::{loop_generating_series, pbw_series_check, sphere_summand_counts, PowerSeries, SummandCounts};

/// `(n, r)` pairs exercised by the counting suites.
pub const GRID: [(u32, u32); 6] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 2)];

/// Deliberate defects used to check that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Adds one to the summand count `l[w]` at the largest degree checked.
    SummandOffByOne,
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    pub cap: u32,
    pub master_cap: u32,
    pub fuzz_cases: usize,
    pub fuzz_degree: u32,
    pub independence_cap: u32,
    pub fault: Option<Fault>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 7,
            cap: 12,
            master_cap: 15,
            fuzz_cases: 10_000,
            fuzz_degree: 8,
            independence_cap: 6,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub n: u32,
    pub r: u32,
    pub degree: Option<u32>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub failure: Option<Failure>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {:<24} {} checks", self.name, self.checks),
            Some(e) => {
                let degree = e.degree.map_or("-".to_string(), |d| d.to_string());
                write!(f, "FAIL {:<24} n={} r={} degree={}: {}", self.name, e.n, e.r, degree, e.detail)
            }
        }
    }
}

type Outcome = std::result::Result<usize, Failure>;

fn fail(n: u32, r: u32, degree: Option<u32>, detail: impl Into<String>) -> Failure {
    Failure { n, r, degree, detail: detail.into() }
}

fn first_difference<A: PartialEq, B>(a: &[A], b: &[B], eq: impl Fn(&A, &B) -> bool) -> Option<u32> {
    a.iter().zip(b).position(|(x, y)| !eq(x, y)).map(|d| d as u32)
}

fn target_dims(n: u32, r: u32, cap: u32) -> std::result::Result<PowerSeries, Failure> {
    loop_generating_series(n, r, cap)
        .and_then(|q| q.inverse())
        .map_err(|e| fail(n, r, None, e.to_string()))
}

fn presentation(n: u32, r: u32) -> std::result::Result<QuadraticPresentation, Failure> {
    QuadraticPresentation::loop_homology(n, r).map_err(|e| fail(n, r, None, e.to_string()))
}

fn word_dp_vs_enumeration(cfg: &SelftestConfig) -> Outcome {
    let mut checks = 0;
    for (n, r) in GRID {
        let p = presentation(n, r)?;
        let dp = p.hilbert_dims(cfg.cap).map_err(|e| fail(n, r, None, e.to_string()))?;
        let target = target_dims(n, r, cfg.cap)?;
        let as_rational: Vec<BigRational> = dp.as_rationals();
        if let Some(d) = first_difference(&as_rational, target.coeffs(), |a, b| a == b) {
            return Err(fail(n, r, Some(d), format!("DP gives {}, series gives {}", dp.dims[d as usize], target.coeff(d))));
        }
        let enumerated = enumerated_dims(&p, ENUMERATION_THRESHOLD.min(cfg.cap));
        if let Some(d) = first_difference(&enumerated.dims, &dp.dims, |a, b| a == b) {
            return Err(fail(n, r, Some(d), format!("enumeration gives {}, DP gives {}", enumerated.dims[d as usize], dp.dims[d as usize])));
        }
        checks += as_rational.len() + enumerated.dims.len();
    }
    Ok(checks)
}

fn summand_counts(n: u32, r: u32, cap: u32, fault: Option<Fault>) -> std::result::Result<SummandCounts, Failure> {
    let counts = sphere_summand_counts(n, r, cap).map_err(|e| fail(n, r, None, e.to_string()))?;
    Ok(match fault {
        Some(Fault::SummandOffByOne) => {
            let mut v = counts.to_vec();
            v[cap as usize] += 1;
            SummandCounts::from_vec(&v)
        }
        None => counts,
    })
}

fn mobius_vs_lyndon(cfg: &SelftestConfig) -> Outcome {
    let mut checks = 0;
    for (n, r) in GRID {
        let counts = summand_counts(n, r, cfg.cap, cfg.fault)?.to_vec();
        let lie = lie_dims(&presentation(n, r)?, cfg.cap).map_err(|e| fail(n, r, None, e.to_string()))?;
        if let Some(d) = first_difference(&counts, &lie.dims, |a, b| a == b) {
            return Err(fail(n, r, Some(d), format!("Möbius l[{d}] = {}, standard Lyndon words = {}", counts[d as usize], lie.dims[d as usize])));
        }
        checks += counts.len();
    }
    Ok(checks)
}

fn pbw(cfg: &SelftestConfig) -> Outcome {
    let mut checks = 0;
    for (n, r) in GRID {
        let p = presentation(n, r)?;
        let hilbert = p.hilbert_dims(cfg.cap).map_err(|e| fail(n, r, None, e.to_string()))?;
        let lie = LieDimTable { dims: summand_counts(n, r, cfg.cap, cfg.fault)?.to_vec() };
        if !pbw_series_check(&lie, &hilbert, cfg.cap) {
            return Err(fail(n, r, None, "PBW product differs from the Hilbert series"));
        }
        checks += 1;
    }
    Ok(checks)
}

fn master_series(cfg: &SelftestConfig) -> Outcome {
    let mut checks = 0;
    for n in [2, 3, 4] {
        for r in [1, 2, 3] {
            let target = target_dims(n, r, cfg.master_cap)?;
            for torsion in ["-", "2", "6"] {
                let m = ManifoldModel::parse(n, r, torsion).map_err(|e| fail(n, r, None, e.to_string()))?;
                let series = rational_series(&loop_decomposition(&m), cfg.master_cap)
                    .map_err(|e| fail(n, r, None, e.to_string()))?;
                if let Some(d) = first_difference(series.coeffs(), target.coeffs(), |a, b| a == b) {
                    return Err(fail(n, r, Some(d), format!("G={torsion}: decomposition series {} vs {}", series.coeff(d), target.coeff(d))));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn koszul_duality(_: &SelftestConfig) -> Outcome {
    let cap = 9;
    let mut checks = 0;
    for r in [1, 2, 3] {
        let n = 2;
        let p = presentation(n, r)?.with_unit_weights();
        let h_a = p.hilbert_dims(cap).map_err(|e| fail(n, r, None, e.to_string()))?;
        let rel = p.relation_vector().expect("manifold relation");
        let dual = koszul_dual(p.alphabet().len(), &[rel]).map_err(|e| fail(n, r, None, e.to_string()))?;
        let h_dual = dual.weight_dims(cap).map_err(|e| fail(n, r, None, e.to_string()))?;
        let a = PowerSeries::from_coeffs(cap, h_a.as_rationals());
        let signed: Vec<BigRational> = h_dual
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let v = BigRational::from_integer((d as i64).into());
                if k % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let product = a.mul(&PowerSeries::from_coeffs(cap, signed));
        if let Some(d) = first_difference(product.coeffs(), PowerSeries::one(cap).coeffs(), |a, b| a == b) {
            return Err(fail(n, r, Some(d), "h_A(z) h_A!(-z) != 1"));
        }
        checks += 1;
    }
    Ok(checks)
}

fn random_poly(rng: &mut ChaCha8Rng, p: &QuadraticPresentation, max_degree: u32) -> NCPoly {
    let alphabet = p.alphabet().clone();
    let terms = rng.gen_range(1..=4);
    let mut out = NCPoly::zero(alphabet.clone());
    for _ in 0..terms {
        let target = rng.gen_range(1..=max_degree);
        let mut letters = Vec::new();
        let mut degree = 0;
        loop {
            let fitting: Vec<u8> =
                (0..alphabet.len() as u8).filter(|&l| degree + alphabet.degree_of_letter(l) <= target).collect();
            if fitting.is_empty() {
                break;
            }
            let l = fitting[rng.gen_range(0..fitting.len())];
            degree += alphabet.degree_of_letter(l);
            letters.push(l);
        }
        let c = BigRational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into());
        out.add_term(Word(letters), c);
    }
    out
}

fn confluence_fuzz(cfg: &SelftestConfig) -> Outcome {
    let presentations: Vec<(u32, u32, Arc<QuadraticPresentation>)> = [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
        .into_iter()
        .map(|(n, r)| presentation(n, r).map(|p| (n, r, Arc::new(p))))
        .collect::<std::result::Result<_, _>>()?;
    (0..cfg.fuzz_cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(case as u64);
            let (n, r, p) = &presentations[case % presentations.len()];
            let poly = random_poly(&mut rng, p, cfg.fuzz_degree);
            let degree = poly.terms().keys().map(|w| p.alphabet().degree(w)).max();
            let err = |detail: String| fail(*n, *r, degree, format!("case {case}: {detail}"));
            let left = p.normal_form_with(&poly, Strategy::Leftmost).map_err(|e| err(e.to_string()))?;
            let right = p.normal_form_with(&poly, Strategy::Rightmost).map_err(|e| err(e.to_string()))?;
            if left != right {
                return Err(err(format!("strategies disagree on {poly}")));
            }
            if left.terms().keys().any(|w| !p.is_irreducible(w)) {
                return Err(err(format!("normal form of {poly} is reducible")));
            }
            let again = p.normal_form(&left).map_err(|e| err(e.to_string()))?;
            if again != left {
                return Err(err(format!("normal form of {poly} is not idempotent")));
            }
            Ok(1)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn independence(cfg: &SelftestConfig) -> Outcome {
    let mut checks = 0;
    for (n, r) in [(2, 2), (3, 2)] {
        let p = presentation(n, r)?;
        let report = independence_certificate(&p, cfg.independence_cap).map_err(|e| match e {
            crate::error::Error::RankDeficient { degree, .. } => fail(n, r, Some(degree), e.to_string()),
            other => fail(n, r, None, other.to_string()),
        })?;
        checks += report.len();
    }
    Ok(checks)
}

/// Suite names in execution and report order.
pub const SUITES: [&str; 7] = [
    "word-dp-vs-enumeration",
    "mobius-vs-lyndon",
    "pbw",
    "master-series",
    "koszul-duality",
    "confluence-fuzz",
    "independence",
];

pub fn run_suite(name: &str, cfg: &SelftestConfig) -> Option<SuiteResult> {
    let outcome = match name {
        "word-dp-vs-enumeration" => word_dp_vs_enumeration(cfg),
        "mobius-vs-lyndon" => mobius_vs_lyndon(cfg),
        "pbw" => pbw(cfg),
        "master-series" => master_series(cfg),
        "koszul-duality" => koszul_duality(cfg),
        "confluence-fuzz" => confluence_fuzz(cfg),
        "independence" => independence(cfg),
        _ => return None,
    };
    Some(match outcome {
        Ok(checks) => SuiteResult { name: name.to_string(), checks, failure: None },
        Err(f) => SuiteResult { name: name.to_string(), checks: 0, failure: Some(f) },
    })
}

/// Runs every suite concurrently; results come back in [`SUITES`] order.
pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    SUITES.par_iter().map(|name| run_suite(name, cfg).expect("known suite")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SelftestConfig {
        SelftestConfig { cap: 8, master_cap: 8, fuzz_cases: 200, independence_cap: 4, ..Default::default() }
    }

    #[test]
    fn fuzz_inputs_exercise_the_rewriting() {
        let p = presentation(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rewritten = (0..500)
            .filter(|_| {
                let q = random_poly(&mut rng, &p, 8);
                p.normal_form(&q).unwrap() != q
            })
            .count();
        assert!(rewritten > 100, "{rewritten} of 500 inputs were already normal");
    }

    #[test]
    fn quick_run_passes() {
        for result in run_selftest(&quick()) {
            assert!(result.passed(), "{result}");
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let cfg = SelftestConfig { fault: Some(Fault::SummandOffByOne), ..quick() };
        let result = run_suite("mobius-vs-lyndon", &cfg).unwrap();
        let failure = result.failure.expect("fault must be detected");
        assert_eq!(failure.degree, Some(8));
        assert!(!run_suite("pbw", &cfg).unwrap().passed());
        assert!(run_suite("master-series", &cfg).unwrap().passed());
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", &quick()).is_none());
    }
}
