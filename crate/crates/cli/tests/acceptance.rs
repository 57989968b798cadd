//! One line per acceptance criterion, written past the test harness capture.

use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use loopspace::decomposition::{classify, fiber_homology, loop_decomposition, rational_series, RationalType};
use loopspace::groups::{AbelianGroup, FiniteAbelianGroup};
use loopspace::koszul::koszul_dual;
use loopspace::lyndon::{independence_certificate, lie_dims};
use loopspace::manifold::FormAlgebra;
use loopspace::rewrite::enumerated_dims;
use loopspace::selftest::{run_suite, SelftestConfig, GRID};
use loopspace::series::sphere_summand_counts;
use loopspace::spheres::{bundled_table, exponent_report, homotopy_of_manifold};
use loopspace::{Error, ManifoldModel, QuadraticPresentation};
use loopspace_cli::report::ReportDoc;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

type Outcome = Result<(), String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn model(n: u32, r: u32, g: &str) -> ManifoldModel {
    ManifoldModel::parse(n, r, g).unwrap()
}

/// Coefficients of `1/(1 - r t^{n-1} - r t^n + t^{2n-1})`.
fn recurrence(n: u32, r: u32, cap: u32) -> Vec<i128> {
    let (n, r) = (n as usize, r as i128);
    let mut a = vec![0i128; cap as usize + 1];
    a[0] = 1;
    for k in 1..a.len() {
        let at = |j: usize| if k >= j { a[k - j] } else { 0 };
        a[k] = r * at(n - 1) + r * at(n) - at(2 * n - 1);
    }
    a
}

/// `Π (1 - t^w)^{-l[w]}` with binomial coefficients in exact integers.
fn pbw_oracle(l: &[u64], cap: usize) -> Vec<i128> {
    let mut series = vec![0i128; cap + 1];
    series[0] = 1;
    for (w, &mult) in l.iter().enumerate().skip(1).take(cap) {
        // (1 - t^w)^{-m} = Σ_k C(m + k - 1, k) t^{wk}
        let mut factor = vec![0i128; cap / w + 1];
        factor[0] = 1;
        for k in 1..factor.len() {
            factor[k] = factor[k - 1] * (mult as i128 + k as i128 - 1) / k as i128;
        }
        let mut next = vec![0i128; cap + 1];
        for (i, &s) in series.iter().enumerate() {
            for (k, &f) in factor.iter().enumerate() {
                if i + w * k <= cap {
                    next[i + w * k] += s * f;
                }
            }
        }
        series = next;
    }
    series
}

fn hilbert_series() -> Outcome {
    let start = Instant::now();
    for (n, r) in GRID {
        let p = QuadraticPresentation::loop_homology(n, r).map_err(|e| e.to_string())?;
        let dims: Vec<i128> = p.hilbert_dims(12).map_err(|e| e.to_string())?.dims.iter().map(|&d| d as i128).collect();
        ensure(dims == recurrence(n, r, 12), || format!("({n},{r}): {dims:?}"))?;
        let listed: Vec<i128> = enumerated_dims(&p, 8).dims.iter().map(|&d| d as i128).collect();
        ensure(listed[..] == dims[..=8], || format!("({n},{r}) enumeration: {listed:?}"))?;
    }
    within(start, Duration::from_secs(5))
}

fn mobius_formula() -> Outcome {
    let start = Instant::now();
    for (n, r) in GRID {
        let counts = sphere_summand_counts(n, r, 12).map_err(|e| e.to_string())?.to_vec();
        let p = QuadraticPresentation::loop_homology(n, r).map_err(|e| e.to_string())?;
        let lie = lie_dims(&p, 12).map_err(|e| e.to_string())?.dims;
        ensure(counts == lie, || format!("({n},{r}): {counts:?} vs {lie:?}"))?;
    }
    let l21 = sphere_summand_counts(2, 1, 12).unwrap().to_vec();
    ensure(l21[1..] == [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], || format!("(2,1): {l21:?}"))?;
    let l22 = sphere_summand_counts(2, 2, 12).unwrap().to_vec();
    ensure(l22[1..4] == [2, 3, 5], || format!("(2,2): {l22:?}"))?;
    within(start, Duration::from_secs(10))
}

fn pbw_identity() -> Outcome {
    for (n, r) in GRID {
        let p = QuadraticPresentation::loop_homology(n, r).map_err(|e| e.to_string())?;
        let lie = lie_dims(&p, 12).map_err(|e| e.to_string())?.dims;
        let product = pbw_oracle(&lie, 12);
        ensure(product == recurrence(n, r, 12), || format!("({n},{r}): {product:?}"))?;
    }
    Ok(())
}

fn lie_basis_independence() -> Outcome {
    let start = Instant::now();
    for (n, r) in [(2, 2), (3, 2)] {
        let p = QuadraticPresentation::loop_homology(n, r).map_err(|e| e.to_string())?;
        let cert = independence_certificate(&p, 6).map_err(|e| e.to_string())?;
        ensure(cert.len() == 6, || format!("({n},{r}): {} degrees certified", cert.len()))?;
        for d in &cert {
            ensure(d.rank == d.standard_words, || format!("({n},{r}) degree {}: rank {} of {}", d.degree, d.rank, d.standard_words))?;
        }
    }
    within(start, Duration::from_secs(30))
}

fn quadraticity() -> Outcome {
    for n in [2, 3, 4] {
        for s in 1..=3 {
            let f = FormAlgebra::hyperbolic(0, n, s).map_err(|e| e.to_string())?;
            let w3 = f.weight3_dim().map_err(|e| e.to_string())?;
            ensure(f.is_quadratic() && w3 == 0, || format!("n={n} s={s}: weight 3 has dim {w3}"))?;
        }
    }
    for (n, r, g) in [(2, 2, "3"), (3, 1, "6")] {
        for p in [0, 2, 3, 5] {
            let w3 = model(n, r, g).form_algebra(p).and_then(|f| f.weight3_dim()).map_err(|e| e.to_string())?;
            ensure(w3 == 0, || format!("({n},{r},{g}) at {p}: weight 3 has dim {w3}"))?;
        }
    }
    let square = FormAlgebra::new(0, vec![2], vec![vec![BigRational::one()]]).map_err(|e| e.to_string())?;
    let w3 = square.weight3_dim().map_err(|e| e.to_string())?;
    ensure(w3 >= 1, || format!("counterexample: weight 3 has dim {w3}"))
}

fn koszul_duality() -> Outcome {
    for n in [2, 3] {
        for r in 1..=3 {
            let p = QuadraticPresentation::loop_homology(n, r).map_err(|e| e.to_string())?.with_unit_weights();
            let h = p.hilbert_dims(9).map_err(|e| e.to_string())?.dims;
            let rel = p.relation_vector().ok_or("no relation")?;
            let dual = koszul_dual(p.alphabet().len(), &[rel]).map_err(|e| e.to_string())?;
            let h_dual = dual.weight_dims(9).map_err(|e| e.to_string())?;
            for k in 0..=9usize {
                let c: i128 = (0..=k).map(|i| h[i] as i128 * h_dual[k - i] as i128 * if (k - i) % 2 == 1 { -1 } else { 1 }).sum();
                ensure(c == i128::from(k == 0), || format!("({n},{r}) z^{k}: {c}"))?;
            }
        }
    }
    Ok(())
}

fn decomposition_consistency() -> Outcome {
    for n in [2, 3, 4] {
        for r in 1..=3 {
            let expected: Vec<BigInt> = recurrence(n, r, 15).into_iter().map(BigInt::from).collect();
            for g in ["-", "2", "6"] {
                let x = loop_decomposition(&model(n, r, g));
                let s = rational_series(&x, 15).map_err(|e| e.to_string())?;
                let got = s.integer_coeffs().ok_or_else(|| format!("({n},{r},{g}): non-integral series"))?;
                ensure(got == expected, || format!("({n},{r},{g}): {x}"))?;
            }
        }
    }
    Ok(())
}

fn fiber_homology_check() -> Outcome {
    for (n, r, g) in [(2, 2, "-"), (2, 1, "3"), (3, 2, "6"), (4, 3, "2,2")] {
        let m = model(n, r, g);
        let h = fiber_homology(&m, 14).map_err(|e| e.to_string())?;
        for d in 0..=14u32 {
            // monomials of degree e in a polynomial ring on classes of degree n-1 and n
            let monomials = |e: i64| -> u64 {
                if e < 0 {
                    return 0;
                }
                (0..=e / (n as i64 - 1)).filter(|a| (e - a * (n as i64 - 1)) % n as i64 == 0).count() as u64
            };
            let low = monomials(i64::from(d) - i64::from(n));
            let high = monomials(i64::from(d) - i64::from(n) - 1);
            let expected = AbelianGroup::new(u64::from(r - 1) * (low + high), m.torsion().power(low));
            ensure(h.get(d) == expected, || format!("({n},{r},{g}) degree {d}: {}", h.get(d)))?;
        }
    }
    let h = fiber_homology(&model(2, 2, "-"), 6).unwrap();
    ensure((2..=4).map(|d| h.get(d).free_rank).eq([1, 2, 3]), || "(2,2,0) low degrees".into())?;
    let h = fiber_homology(&model(2, 1, "3"), 7).unwrap();
    let z3 = FiniteAbelianGroup::cyclic(3).unwrap();
    let mults = [1, 1, 2, 2, 3, 3];
    for (d, k) in (2..=7).zip(mults) {
        ensure(h.get(d) == AbelianGroup::torsion(z3.power(k)), || format!("(2,1,Z/3) degree {d}: {}", h.get(d)))?;
    }
    ensure(h.get(1).is_zero(), || "(2,1,Z/3) degree 1".into())
}

fn homotopy_assembly() -> Outcome {
    let table = bundled_table();
    let total = |m: &ManifoldModel, k: u32| homotopy_of_manifold(m, k, &table).map(|a| a.total).map_err(|e| e.to_string());
    let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
    let m = model(2, 1, "-");
    ensure(total(&m, 2)? == AbelianGroup::free(1), || "(2,1,0) pi_2".into())?;
    ensure(total(&m, 3)? == AbelianGroup::free(2), || "(2,1,0) pi_3".into())?;
    ensure(total(&m, 4)? == AbelianGroup::torsion(z2.power(2)), || "(2,1,0) pi_4".into())?;
    ensure(total(&model(2, 1, "2"), 4)?.is_zero(), || "(2,1,Z/2) pi_4".into())?;
    ensure(total(&model(2, 2, "-"), 2)? == AbelianGroup::free(2), || "(2,2,0) pi_2".into())?;
    for (n, r, k) in [(2, 1, 16), (2, 2, 12), (3, 2, 20)] {
        match homotopy_of_manifold(&model(n, r, "-"), k, &table) {
            Err(Error::TableGap { .. }) => {}
            other => return Err(format!("({n},{r}) k={k}: expected a table gap, got {other:?}")),
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_loopspace"))
        .args(["homotopy", "--n", "2", "--r", "1", "--k", "16"])
        .env_remove("LOOPSPACE_SPHERE_TABLE")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(3) && out.stdout.is_empty(), || format!("gap exit {:?}", out.status.code()))
}

fn classification_flags() -> Outcome {
    for n in [2, 3, 4] {
        for r in 0..=4 {
            let m = model(n, r, "-");
            let c = classify(&m);
            let elliptic = c.rational_type == RationalType::Elliptic;
            ensure(elliptic == (r <= 1), || format!("({n},{r}) classified {}", c.rational_type))?;
            if r >= 2 {
                let witness = c.retract_witness.as_ref().ok_or_else(|| format!("({n},{r}) no witness"))?;
                let report = exponent_report(&m);
                ensure(
                    c.no_exponent_at_any_prime
                        && report.verdict == "no homotopy exponent at any prime"
                        && report.note.contains(&witness.to_string()),
                    || format!("({n},{r}) {report}"),
                )?;
            }
        }
    }
    let small = sphere_summand_counts(2, 2, 10).map_err(|e| e.to_string())?.total();
    let large = sphere_summand_counts(2, 2, 20).map_err(|e| e.to_string())?.total();
    ensure(large > 2 * small, || format!("totals {small} at 10, {large} at 20"))
}

fn confluence_fuzz() -> Outcome {
    let start = Instant::now();
    let cfg = SelftestConfig::default();
    ensure(cfg.fuzz_cases == 10_000 && cfg.fuzz_degree == 8, || "fuzz configuration".into())?;
    let result = run_suite("confluence-fuzz", &cfg).ok_or("suite missing")?;
    ensure(result.passed() && result.checks >= 10_000, || result.to_string())?;
    within(start, Duration::from_secs(60))
}

fn cli_golden_files() -> Outcome {
    let configs: [(&str, &[&str]); 3] = [
        ("abelian_n2_r1", &["report", "--n", "2", "--r", "1", "--torsion", "-", "--cap", "8"]),
        ("hyperbolic_n2_r2", &["report", "--n", "2", "--r", "2", "--torsion", "-", "--cap", "10"]),
        ("torsion_n3_r2_g6", &["report", "--n", "3", "--r", "2", "--torsion", "6", "--cap", "10"]),
    ];
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_loopspace")).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{args:?} exited {:?}", out.status.code()))?;
        Ok(out.stdout)
    };
    for (name, args) in configs {
        let mut json_args = args.to_vec();
        json_args.push("--json");
        for (ext, a) in [("txt", args.to_vec()), ("json", json_args)] {
            let first = run(&a)?;
            ensure(first == run(&a)?, || format!("{name}.{ext} differs between runs"))?;
            let stored = std::fs::read(golden.join(format!("{name}.{ext}"))).map_err(|e| e.to_string())?;
            ensure(first == stored, || format!("{name}.{ext} differs from the golden file"))?;
            if ext == "json" {
                let doc: ReportDoc = serde_json::from_slice(&first).map_err(|e| format!("{name}: {e}"))?;
                let again = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n";
                ensure(again.as_bytes() == first, || format!("{name}.json does not round-trip"))?;
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Check); 12] = [
        ("loop homology dims match 1/q to degree 12", hilbert_series),
        ("sphere summand counts equal standard Lyndon counts", mobius_formula),
        ("PBW product reproduces the Hilbert series", pbw_identity),
        ("Lie basis normal forms have full rank to degree 6", lie_basis_independence),
        ("form algebras are quadratic; square form is not", quadraticity),
        ("Koszul numerical duality mod z^10", koszul_duality),
        ("decomposition series equals 1/q to degree 15", decomposition_consistency),
        ("fiber homology matches convolution", fiber_homology_check),
        ("homotopy assembly and table gaps", homotopy_assembly),
        ("elliptic iff r <= 1; hyperbolic growth", classification_flags),
        ("confluence fuzz over 10000 polynomials", confluence_fuzz),
        ("CLI golden files and JSON round-trip", cli_golden_files),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for (i, (desc, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(()) => writeln!(stdout, "criterion {:>2}: PASS {desc} ({t:.2}s)", i + 1).unwrap(),
            Err(e) => {
                writeln!(stdout, "criterion {:>2}: FAIL {desc}: {e}", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
