use std::fmt::Write as _;

use loopspace::decomposition::{decomposition_report, Classification, SpaceExpr};
use loopspace::groups::GradedAbelianGroup;
use loopspace::series::sphere_summand_counts;
use loopspace::spheres::exponent_report;
use loopspace::{ManifoldModel, QuadraticPresentation, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGroup {
    pub degree: u32,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopHomology {
    pub generators: Vec<String>,
    pub relation: String,
    pub hilbert_dims: Vec<u128>,
    /// `l[w]` for `w = 1..=cap`.
    pub summand_counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub n: u32,
    pub r: u32,
    pub torsion: Vec<u64>,
    pub dim: u32,
    pub cap: u32,
    pub homology: Vec<DegreeGroup>,
    pub sigma_primes: Vec<u64>,
    pub coefficient_ring: String,
    pub loop_homology: Option<LoopHomology>,
    pub decomposition: String,
    pub decomposition_tree: SpaceExpr,
    pub note: Option<String>,
    pub weak_product: Option<String>,
    pub fiber_homology: Option<Vec<DegreeGroup>>,
    pub classification: Classification,
    pub exponents: String,
}

fn degree_groups(g: &GradedAbelianGroup) -> Vec<DegreeGroup> {
    g.iter().map(|(degree, group)| DegreeGroup { degree, group: group.to_string() }).collect()
}

pub fn build(model: &ManifoldModel, cap: u32) -> Result<ReportDoc> {
    let loop_homology = if model.r() == 0 {
        None
    } else {
        let p = QuadraticPresentation::loop_homology(model.n(), model.r())?;
        let generators = p
            .alphabet()
            .letters()
            .iter()
            .map(|l| format!("{}:{}", l.label, l.degree))
            .collect();
        let counts = sphere_summand_counts(model.n(), model.r(), cap)?;
        Some(LoopHomology {
            generators,
            relation: p.relation().map(ToString::to_string).unwrap_or_default(),
            hilbert_dims: p.hilbert_dims(cap)?.dims,
            summand_counts: counts.to_vec()[1..].to_vec(),
        })
    };
    let decomposition = decomposition_report(model, cap)?;
    Ok(ReportDoc {
        n: model.n(),
        r: model.r(),
        torsion: model.torsion().invariant_factors().to_vec(),
        dim: model.dim(),
        cap,
        homology: degree_groups(&model.homology()),
        sigma_primes: model.sigma_primes().into_iter().collect(),
        coefficient_ring: model.coefficient_ring().to_string(),
        loop_homology,
        decomposition: decomposition.main.simplify().to_string(),
        decomposition_tree: decomposition.main,
        note: decomposition.note,
        weak_product: decomposition.weak_product.map(|w| w.to_string()),
        fiber_homology: decomposition.fiber_homology.as_ref().map(degree_groups),
        classification: decomposition.classification,
        exponents: exponent_report(model).to_string(),
    })
}

fn primes(ps: &[u64]) -> String {
    let items: Vec<String> = ps.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

pub fn render_text(doc: &ReportDoc) -> String {
    let mut out = String::new();
    let torsion = if doc.torsion.is_empty() {
        "0".to_string()
    } else {
        doc.torsion.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    };
    let _ = writeln!(out, "manifold: n={} r={} G={} (dimension {})", doc.n, doc.r, torsion, doc.dim);
    let _ = writeln!(out, "homology:");
    for h in &doc.homology {
        let _ = writeln!(out, "  H_{} = {}", h.degree, h.group);
    }
    let _ = writeln!(out, "torsion primes: {}", primes(&doc.sigma_primes));
    let _ = writeln!(out, "coefficient ring: {}", doc.coefficient_ring);
    if let Some(note) = &doc.note {
        let _ = writeln!(out, "{note}");
    }
    if let Some(lh) = &doc.loop_homology {
        let _ = writeln!(out, "loop homology generators: {}", lh.generators.join(" "));
        let _ = writeln!(out, "relation: {}", lh.relation);
        let dims: Vec<String> = lh.hilbert_dims.iter().map(u128::to_string).collect();
        let _ = writeln!(out, "loop homology dims (degree 0..{}): {}", doc.cap, dims.join(" "));
        let counts: Vec<String> = lh.summand_counts.iter().enumerate().map(|(i, c)| format!("l[{}]={c}", i + 1)).collect();
        let _ = writeln!(out, "sphere summands: {}", counts.join(" "));
    }
    let _ = writeln!(out, "decomposition: {}", doc.decomposition);
    if let Some(wp) = &doc.weak_product {
        let _ = writeln!(out, "weak product: {wp}");
    }
    if let Some(fh) = &doc.fiber_homology {
        let parts: Vec<String> = fh.iter().map(|h| format!("H~_{} = {}", h.degree, h.group)).collect();
        let body = if parts.is_empty() { "0".to_string() } else { parts.join("; ") };
        let _ = writeln!(out, "fiber homology: {body}");
    }
    let _ = writeln!(out, "rational type: {}", doc.classification.rational_type);
    let _ = writeln!(out, "exponents: {}", doc.exponents);
    out
}
