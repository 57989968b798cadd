//! Symbolic homotopy types, the loop-space splitting of the manifold, the
//! homology of the splitting fibre, and rational Poincaré series of
//! expressions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, FiniteAbelianGroup, GradedAbelianGroup};
use crate::manifold::ManifoldModel;
use crate::series::{sphere_summand_counts, PowerSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakFactor {
    pub expr: SpaceExpr,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceExpr {
    Point,
    Sphere { m: u32 },
    Moore { group: FiniteAbelianGroup, n: u32 },
    Wedge { children: Vec<SpaceExpr> },
    Product { children: Vec<SpaceExpr> },
    Loop { child: Box<SpaceExpr> },
    Smash { children: Vec<SpaceExpr> },
    /// `X ⋉ Y = X₊ ∧ Y`.
    HalfSmash { left: Box<SpaceExpr>, right: Box<SpaceExpr> },
    LocalizedAt { inverted: Vec<u64>, child: Box<SpaceExpr> },
    WeakProduct { factors: Vec<WeakFactor> },
}

const INFINITE: i64 = i64::MAX / 4;

impl SpaceExpr {
    pub fn sphere(m: u32) -> Self {
        SpaceExpr::Sphere { m }
    }

    pub fn moore(group: FiniteAbelianGroup, n: u32) -> Self {
        SpaceExpr::Moore { group, n }
    }

    pub fn wedge(children: Vec<SpaceExpr>) -> Self {
        SpaceExpr::Wedge { children }
    }

    pub fn product(children: Vec<SpaceExpr>) -> Self {
        SpaceExpr::Product { children }
    }

    pub fn smash(children: Vec<SpaceExpr>) -> Self {
        SpaceExpr::Smash { children }
    }

    pub fn loop_of(child: SpaceExpr) -> Self {
        SpaceExpr::Loop { child: Box::new(child) }
    }

    pub fn half_smash(left: SpaceExpr, right: SpaceExpr) -> Self {
        SpaceExpr::HalfSmash { left: Box::new(left), right: Box::new(right) }
    }

    /// Wraps `child` in a localization node unless `inverted` is empty.
    pub fn localized(inverted: &BTreeSet<u64>, child: SpaceExpr) -> Self {
        if inverted.is_empty() {
            child
        } else {
            SpaceExpr::LocalizedAt { inverted: inverted.iter().copied().collect(), child: Box::new(child) }
        }
    }

    /// Checks node invariants: spheres of dimension >= 1, Moore spaces in
    /// the simply connected range, nonempty multiplicities.
    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceExpr::Point => Ok(()),
            SpaceExpr::Sphere { m } if *m == 0 => Err(Error::Space("sphere dimension must be >= 1".into())),
            SpaceExpr::Sphere { .. } => Ok(()),
            SpaceExpr::Moore { n, .. } if *n < 2 => Err(Error::Space(format!("Moore space M(G, {n}) needs n >= 2"))),
            SpaceExpr::Moore { .. } => Ok(()),
            SpaceExpr::Wedge { children } | SpaceExpr::Product { children } | SpaceExpr::Smash { children } => {
                children.iter().try_for_each(SpaceExpr::validate)
            }
            SpaceExpr::Loop { child } | SpaceExpr::LocalizedAt { child, .. } => child.validate(),
            SpaceExpr::HalfSmash { left, right } => {
                left.validate()?;
                right.validate()
            }
            SpaceExpr::WeakProduct { factors } => factors.iter().try_for_each(|f| f.expr.validate()),
        }
    }

    /// Largest `c` with the space `c`-connected; `-1` when not connected.
    pub fn connectivity(&self) -> i64 {
        match self {
            SpaceExpr::Point => INFINITE,
            SpaceExpr::Sphere { m } => *m as i64 - 1,
            SpaceExpr::Moore { group, n } => {
                if group.is_trivial() {
                    INFINITE
                } else {
                    *n as i64 - 1
                }
            }
            SpaceExpr::Wedge { children } | SpaceExpr::Product { children } => {
                children.iter().map(SpaceExpr::connectivity).min().unwrap_or(INFINITE)
            }
            SpaceExpr::Smash { children } => {
                if children.is_empty() {
                    // the unit S^0
                    return -1;
                }
                let sum: i64 = children.iter().map(|c| (c.connectivity() + 1).min(INFINITE)).sum();
                (sum - 1).min(INFINITE)
            }
            SpaceExpr::HalfSmash { right, .. } => right.connectivity(),
            SpaceExpr::Loop { child } => {
                let c = child.connectivity();
                if c >= INFINITE {
                    INFINITE
                } else {
                    (c - 1).max(-1)
                }
            }
            SpaceExpr::LocalizedAt { child, .. } => child.connectivity(),
            SpaceExpr::WeakProduct { factors } => factors.iter().map(|f| f.expr.connectivity()).min().unwrap_or(INFINITE),
        }
    }

    pub fn is_simply_connected(&self) -> bool {
        self.connectivity() >= 1
    }

    /// Sufficient structural test for being a suspension.
    pub fn is_suspension(&self) -> bool {
        match self {
            SpaceExpr::Point | SpaceExpr::Sphere { .. } => true,
            SpaceExpr::Moore { n, .. } => *n >= 2,
            SpaceExpr::Wedge { children } => children.iter().all(SpaceExpr::is_suspension),
            SpaceExpr::Smash { children } => children.iter().any(SpaceExpr::is_suspension),
            SpaceExpr::HalfSmash { right, .. } => right.is_suspension(),
            SpaceExpr::LocalizedAt { child, .. } => child.is_suspension(),
            SpaceExpr::Product { .. } | SpaceExpr::Loop { .. } | SpaceExpr::WeakProduct { .. } => false,
        }
    }

    /// `X ⋉ Y -> Y ∨ (X ∧ Y)`, applied wherever `Y` is a suspension.
    pub fn expand_half_smash(&self) -> SpaceExpr {
        let map = |xs: &[SpaceExpr]| xs.iter().map(SpaceExpr::expand_half_smash).collect();
        match self {
            SpaceExpr::HalfSmash { left, right } => {
                let (x, y) = (left.expand_half_smash(), right.expand_half_smash());
                if y.is_suspension() {
                    SpaceExpr::wedge(vec![y.clone(), SpaceExpr::smash(vec![y, x])])
                } else {
                    SpaceExpr::half_smash(x, y)
                }
            }
            SpaceExpr::Wedge { children } => SpaceExpr::Wedge { children: map(children) },
            SpaceExpr::Product { children } => SpaceExpr::Product { children: map(children) },
            SpaceExpr::Smash { children } => SpaceExpr::Smash { children: map(children) },
            SpaceExpr::Loop { child } => SpaceExpr::loop_of(child.expand_half_smash()),
            SpaceExpr::LocalizedAt { inverted, child } => {
                SpaceExpr::LocalizedAt { inverted: inverted.clone(), child: Box::new(child.expand_half_smash()) }
            }
            SpaceExpr::WeakProduct { factors } => SpaceExpr::WeakProduct {
                factors: factors.iter().map(|f| WeakFactor { expr: f.expr.expand_half_smash(), mult: f.mult }).collect(),
            },
            leaf => leaf.clone(),
        }
    }

    /// Flattens nested wedges and products, drops contractible factors and
    /// collapses smashes with a contractible factor.
    pub fn simplify(&self) -> SpaceExpr {
        match self {
            SpaceExpr::Moore { group, .. } if group.is_trivial() => SpaceExpr::Point,
            SpaceExpr::Wedge { children } | SpaceExpr::Product { children } => {
                let is_wedge = matches!(self, SpaceExpr::Wedge { .. });
                let mut flat = Vec::new();
                for c in children.iter().map(SpaceExpr::simplify) {
                    match c {
                        SpaceExpr::Point => {}
                        SpaceExpr::Wedge { children } if is_wedge => flat.extend(children),
                        SpaceExpr::Product { children } if !is_wedge => flat.extend(children),
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => SpaceExpr::Point,
                    1 => flat.pop().unwrap(),
                    _ if is_wedge => SpaceExpr::Wedge { children: flat },
                    _ => SpaceExpr::Product { children: flat },
                }
            }
            SpaceExpr::Smash { children } => {
                let children: Vec<SpaceExpr> = children.iter().map(SpaceExpr::simplify).collect();
                if children.contains(&SpaceExpr::Point) {
                    SpaceExpr::Point
                } else if children.len() == 1 {
                    children.into_iter().next().unwrap()
                } else {
                    SpaceExpr::Smash { children }
                }
            }
            SpaceExpr::Loop { child } => match child.simplify() {
                SpaceExpr::Point => SpaceExpr::Point,
                c => SpaceExpr::loop_of(c),
            },
            SpaceExpr::HalfSmash { left, right } => match right.simplify() {
                SpaceExpr::Point => SpaceExpr::Point,
                y => SpaceExpr::half_smash(left.simplify(), y),
            },
            SpaceExpr::LocalizedAt { inverted, child } => match child.simplify() {
                SpaceExpr::Point => SpaceExpr::Point,
                c => SpaceExpr::LocalizedAt { inverted: inverted.clone(), child: Box::new(c) },
            },
            SpaceExpr::WeakProduct { factors } => SpaceExpr::WeakProduct {
                factors: factors
                    .iter()
                    .map(|f| WeakFactor { expr: f.expr.simplify(), mult: f.mult })
                    .filter(|f| f.mult > 0 && f.expr != SpaceExpr::Point)
                    .collect(),
            },
            leaf => leaf.clone(),
        }
    }

    fn render_into(&self, out: &mut String, in_product: bool) {
        let list = |out: &mut String, children: &[SpaceExpr]| {
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                c.render_into(out, false);
            }
        };
        match self {
            SpaceExpr::Point => out.push('*'),
            SpaceExpr::Sphere { m } => out.push_str(&format!("S{m}")),
            SpaceExpr::Moore { group, n } => out.push_str(&format!("M({group}, {n})")),
            SpaceExpr::Wedge { children } => {
                out.push_str("W(");
                list(out, children);
                out.push(')');
            }
            SpaceExpr::Smash { children } => {
                out.push_str("Sm(");
                list(out, children);
                out.push(')');
            }
            SpaceExpr::Product { children } => {
                if in_product {
                    out.push('(');
                }
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" x ");
                    }
                    c.render_into(out, true);
                }
                if children.is_empty() {
                    out.push('*');
                }
                if in_product {
                    out.push(')');
                }
            }
            SpaceExpr::Loop { child } => {
                out.push_str("L(");
                child.render_into(out, false);
                out.push(')');
            }
            SpaceExpr::HalfSmash { left, right } => {
                out.push_str("HSm(");
                left.render_into(out, false);
                out.push_str(", ");
                right.render_into(out, false);
                out.push(')');
            }
            SpaceExpr::LocalizedAt { inverted, child } => {
                let primes: Vec<String> = inverted.iter().map(|p| format!("1/{p}")).collect();
                out.push_str(&format!("Loc[{}](", primes.join(",")));
                child.render_into(out, false);
                out.push(')');
            }
            SpaceExpr::WeakProduct { factors } => {
                out.push_str("WP(");
                for (i, f) in factors.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    f.expr.render_into(out, true);
                    out.push_str(&format!("^{}", f.mult));
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render_into(&mut s, false);
        f.write_str(&s)
    }
}

/// `Z = ∨_{r-1} S^n ∨ ∨_{r-1} S^{n+1} ∨ M(G, n)`; a point when `r = 1` and
/// `G = 0`.
pub fn wedge_z(m: &ManifoldModel) -> SpaceExpr {
    let (n, r) = (m.n(), m.r());
    let mut pieces = Vec::new();
    for _ in 1..r {
        pieces.push(SpaceExpr::sphere(n));
    }
    for _ in 1..r {
        pieces.push(SpaceExpr::sphere(n + 1));
    }
    if !m.torsion().is_trivial() {
        pieces.push(SpaceExpr::moore(m.torsion().clone(), n));
    }
    match pieces.len() {
        0 => SpaceExpr::Point,
        1 => pieces.pop().unwrap(),
        _ => SpaceExpr::wedge(pieces),
    }
}

/// Rational surrogate of the cofibre `Q`, with the cohomology of `S^n × S^{n+1}`.
pub fn cofibre_q(m: &ManifoldModel) -> SpaceExpr {
    SpaceExpr::product(vec![SpaceExpr::sphere(m.n()), SpaceExpr::sphere(m.n() + 1)])
}

/// The fibre `F ≃ ΩQ ⋉ Z`.
pub fn fibre(m: &ManifoldModel) -> SpaceExpr {
    SpaceExpr::half_smash(SpaceExpr::loop_of(cofibre_q(m)), wedge_z(m))
}

/// `ΩM ≃ ΩS^n × ΩS^{n+1} × Ω(Z ∨ (Z ∧ Ω(S^n × S^{n+1})))`. For `r = 0`
/// this is `M` itself after localization: a `(2n+1)`-sphere.
pub fn loop_decomposition(m: &ManifoldModel) -> SpaceExpr {
    let n = m.n();
    if m.r() == 0 {
        return SpaceExpr::localized(&m.sigma_primes(), SpaceExpr::sphere(m.dim()));
    }
    SpaceExpr::product(vec![
        SpaceExpr::loop_of(SpaceExpr::sphere(n)),
        SpaceExpr::loop_of(SpaceExpr::sphere(n + 1)),
        SpaceExpr::loop_of(fibre(m).expand_half_smash()),
    ])
}

/// Explanation attached to the `r = 0` answer of [`loop_decomposition`].
pub fn fallback_note(m: &ManifoldModel) -> Option<String> {
    if m.r() != 0 {
        return None;
    }
    let primes: Vec<String> = m.sigma_primes().iter().map(u64::to_string).collect();
    Some(format!("M ≃ S^{} after inverting {{{}}}", m.dim(), primes.join(",")))
}

/// `ΩM_τ ≃ Π̂ ΩS^{w+1}_τ` with `l[w]` factors of each, for `w <= cap`.
pub fn weak_product_decomposition(m: &ManifoldModel, cap: u32) -> Result<SpaceExpr> {
    if m.r() == 0 {
        return Err(Error::SphereFallback { dim: m.dim() });
    }
    let counts = sphere_summand_counts(m.n(), m.r(), cap)?;
    let primes = m.sigma_primes();
    let factors = counts
        .nonzero()
        .map(|(w, mult)| WeakFactor {
            expr: SpaceExpr::localized(&primes, SpaceExpr::loop_of(SpaceExpr::sphere(w + 1))),
            mult,
        })
        .collect();
    Ok(SpaceExpr::WeakProduct { factors })
}

/// `dim Z[u, v]_d` with `|u| = n - 1`, `|v| = n`.
pub fn polynomial_ring_dims(n: u32, cap: u32) -> Vec<u64> {
    let mut dims = vec![0u64; cap as usize + 1];
    let (du, dv) = ((n - 1) as usize, n as usize);
    for a in (0..=cap as usize).step_by(du) {
        for b in (0..=cap as usize - a).step_by(dv) {
            dims[a + b] += 1;
        }
    }
    dims
}

/// `H̃_*(F) ≅ Z[u, v] ⊗ H̃_*(Z)` in degrees `<= cap`.
pub fn fiber_homology(m: &ManifoldModel, cap: u32) -> Result<GradedAbelianGroup> {
    if m.r() == 0 {
        return Err(Error::SphereFallback { dim: m.dim() });
    }
    let (n, r) = (m.n(), m.r() as u64);
    let mut z = GradedAbelianGroup::new();
    z.add(n, &AbelianGroup::new(r - 1, m.torsion().clone()));
    z.add(n + 1, &AbelianGroup::free(r - 1));
    let poly = polynomial_ring_dims(n, cap);
    let mut out = GradedAbelianGroup::new();
    for (d, group) in z.iter() {
        for (shift, &mult) in poly.iter().enumerate() {
            let degree = d + shift as u32;
            if degree > cap {
                break;
            }
            if mult > 0 {
                out.add(degree, &group.power(mult));
            }
        }
    }
    Ok(out)
}

/// Rational Poincaré series of `X` truncated at `cap`.
pub fn rational_series(x: &SpaceExpr, cap: u32) -> Result<PowerSeries> {
    x.validate()?;
    series_of(x, cap)
}

fn reduced(s: &PowerSeries) -> PowerSeries {
    s.sub(&PowerSeries::one(s.cap()))
}

fn series_of(x: &SpaceExpr, cap: u32) -> Result<PowerSeries> {
    let one = PowerSeries::one(cap);
    Ok(match x {
        SpaceExpr::Point | SpaceExpr::Moore { .. } => one,
        SpaceExpr::Sphere { m } => PowerSeries::polynomial(cap, &[(0, 1), (*m, 1)]),
        SpaceExpr::Wedge { children } => {
            let mut acc = one;
            for c in children {
                acc = acc.add(&reduced(&series_of(c, cap)?));
            }
            acc
        }
        SpaceExpr::Product { children } => {
            let mut acc = one;
            for c in children {
                acc = acc.mul(&series_of(c, cap)?);
            }
            acc
        }
        SpaceExpr::Smash { children } => {
            let mut acc = one.clone();
            for c in children {
                acc = acc.mul(&reduced(&series_of(c, cap)?));
            }
            one.add(&acc)
        }
        SpaceExpr::HalfSmash { left, right } => {
            let y = reduced(&series_of(right, cap)?);
            one.add(&series_of(left, cap)?.mul(&y))
        }
        SpaceExpr::LocalizedAt { child, .. } => series_of(child, cap)?,
        SpaceExpr::WeakProduct { factors } => {
            let mut acc = one;
            for f in factors {
                acc = acc.mul(&series_of(&f.expr, cap)?.pow(f.mult as i64)?);
            }
            acc
        }
        SpaceExpr::Loop { child } => loop_series(child, cap)?,
    })
}

fn loop_series(x: &SpaceExpr, cap: u32) -> Result<PowerSeries> {
    if !x.is_simply_connected() {
        return Err(Error::Space(format!("loop of {x}, which is not simply connected")));
    }
    match x {
        SpaceExpr::Point | SpaceExpr::Moore { .. } => Ok(PowerSeries::one(cap)),
        SpaceExpr::Sphere { m } if m % 2 == 1 => PowerSeries::polynomial(cap, &[(0, 1), (m - 1, -1)]).inverse(),
        SpaceExpr::Sphere { m } => {
            let numerator = PowerSeries::polynomial(cap, &[(0, 1), (m - 1, 1)]);
            Ok(numerator.mul(&PowerSeries::polynomial(cap, &[(0, 1), (2 * m - 2, -1)]).inverse()?))
        }
        SpaceExpr::Product { children } => {
            let mut acc = PowerSeries::one(cap);
            for c in children {
                acc = acc.mul(&loop_series(c, cap)?);
            }
            Ok(acc)
        }
        SpaceExpr::LocalizedAt { child, .. } => loop_series(child, cap),
        _ if x.is_suspension() => {
            // ΩΣY has homology T(H̃(Y)); work one degree higher so that the
            // downward shift keeps `cap` coefficients
            let z = reduced(&series_of(x, cap + 1)?);
            PowerSeries::one(cap).sub(&z.shift_down()?).inverse()
        }
        _ => Err(Error::Space(format!("no rational loop-space rule for {x}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalType {
    Elliptic,
    Hyperbolic,
}

impl fmt::Display for RationalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RationalType::Elliptic => "elliptic",
            RationalType::Hyperbolic => "hyperbolic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub rational_type: RationalType,
    pub no_exponent_at_any_prime: bool,
    pub exponent_note: String,
    /// `Ω(S^n ∨ S^{n+1})`, a retract of `ΩM` when `r >= 2`.
    pub retract_witness: Option<SpaceExpr>,
}

pub fn classify(m: &ManifoldModel) -> Classification {
    let n = m.n();
    match m.r() {
        0 => Classification {
            rational_type: RationalType::Elliptic,
            no_exponent_at_any_prime: false,
            exponent_note: format!(
                "rationally S^{}; exponents are those of the sphere (not computed here)",
                m.dim()
            ),
            retract_witness: None,
        },
        1 => Classification {
            rational_type: RationalType::Elliptic,
            no_exponent_at_any_prime: false,
            exponent_note: "rationally elliptic; no non-exponent claim".into(),
            retract_witness: None,
        },
        _ => {
            let witness = SpaceExpr::loop_of(SpaceExpr::wedge(vec![SpaceExpr::sphere(n), SpaceExpr::sphere(n + 1)]));
            let primes = m.sigma_primes();
            let away = if primes.is_empty() {
                "every prime is away from the torsion of H_n".to_string()
            } else {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                format!("primes outside {{{}}} also follow from the Moore-space criterion", ps.join(","))
            };
            Classification {
                rational_type: RationalType::Hyperbolic,
                no_exponent_at_any_prime: true,
                exponent_note: format!("no homotopy exponent at any prime: {witness} is a retract of L(M); {away}"),
                retract_witness: Some(witness),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub main: SpaceExpr,
    pub note: Option<String>,
    pub weak_product: Option<SpaceExpr>,
    pub fiber_homology: Option<GradedAbelianGroup>,
    pub classification: Classification,
}

pub fn decomposition_report(m: &ManifoldModel, cap: u32) -> Result<DecompositionReport> {
    let (weak_product, fiber) = if m.r() == 0 {
        (None, None)
    } else {
        (Some(weak_product_decomposition(m, cap)?), Some(fiber_homology(m, cap)?))
    };
    Ok(DecompositionReport {
        main: loop_decomposition(m),
        note: fallback_note(m),
        weak_product,
        fiber_homology: fiber,
        classification: classify(m),
    })
}
