//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p shortpoly --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shortpoly::matroid::{format_label_set, DEFAULT_MATROID_LIMIT};
use shortpoly::pforms::build_pforms;
use shortpoly::shortness::{Bounds, DEFAULT_BUDGET};
use shortpoly::{
    coefficient_matrix, exists_s_short, monomial_basis, parse_polynomial, shortness, theorem_bound, ColumnMatroid,
    CoefficientMatrix, DeterminantalIdeal, Exponent, Field, GeneratorSystem, PForm, Polynomial, Rational, Shape,
    ShortnessOptions, ShortnessStatus, YVar,
};

type Q = Rational;
type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check, Duration);

fn q(x: i64) -> Q {
    Q::from_i64(x)
}

fn e(v: &[u32]) -> Exponent {
    Exponent::new(v.to_vec()).unwrap()
}

fn ideal(shape: Shape, gens: &[&str]) -> GeneratorSystem<Q> {
    GeneratorSystem::new(shape, gens.iter().map(|g| parse_polynomial(g, shape).unwrap()).collect()).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn form(alpha: &[u32], terms: &[(usize, &[u32], i64)]) -> PForm<Q> {
    let mut f = PForm::zero(e(alpha));
    for &(gen, gamma, c) in terms {
        f.add_term(YVar { gen, gamma: e(gamma) }, q(c));
    }
    f
}

/// Smallest support size carrying a nonzero element, by trying every support
/// of non-loop columns with `solve_in_row_space`.
fn brute_force_shortness(cm: &CoefficientMatrix<Q>, max: usize) -> Option<usize> {
    let non_loops: Vec<usize> = (0..cm.columns.len()).filter(|&c| !cm.matrix.is_zero_column(c)).collect();
    (1..=max.min(non_loops.len()))
        .find(|&s| non_loops.iter().copied().combinations(s).any(|t| cm.matrix.solve_in_row_space(&t).is_some()))
}

fn ac1() -> Check {
    let mono = ideal(Shape::Flat(2), &["x1", "x2"]);
    let expected = vec![
        form(&[2, 0], &[(0, &[1, 0], 1)]),
        form(&[1, 1], &[(0, &[0, 1], 1), (1, &[1, 0], 1)]),
        form(&[0, 2], &[(1, &[0, 1], 1)]),
    ];
    let got = build_pforms(&mono, 2);
    ensure(got == expected, "monomial ideal forms differ")?;
    let rendered: Vec<String> = got.iter().map(|f| f.display(Shape::Flat(2))).collect();
    ensure(rendered == ["y[1](1,0)", "y[1](0,1) + y[2](1,0)", "y[2](0,1)"], format!("rendering {rendered:?}"))?;

    let principal = ideal(Shape::Flat(2), &["x1^2 + x1*x2 + x2^2"]);
    let expected = vec![
        form(&[4, 0], &[(0, &[2, 0], 1)]),
        form(&[3, 1], &[(0, &[2, 0], 1), (0, &[1, 1], 1)]),
        form(&[2, 2], &[(0, &[2, 0], 1), (0, &[1, 1], 1), (0, &[0, 2], 1)]),
        form(&[1, 3], &[(0, &[1, 1], 1), (0, &[0, 2], 1)]),
        form(&[0, 4], &[(0, &[0, 2], 1)]),
    ];
    let got = build_pforms(&principal, 4);
    ensure(got == expected, "principal ideal forms differ")?;
    let rendered: Vec<String> = got.iter().map(|f| f.display(Shape::Flat(2))).collect();
    let want = [
        "y[1](2,0)",
        "y[1](2,0) + y[1](1,1)",
        "y[1](2,0) + y[1](1,1) + y[1](0,2)",
        "y[1](1,1) + y[1](0,2)",
        "y[1](0,2)",
    ];
    ensure(rendered == want, format!("rendering {rendered:?}"))?;
    Ok("3 + 5 forms equal".into())
}

fn ac2() -> Check {
    let shape = Shape::Flat(2);
    let mono = ideal(shape, &["x1", "x2"]);
    let forms = build_pforms(&mono, 2);
    for a in [-4i64, 0, 2, 9] {
        let b = 5 - a;
        let g1 = Polynomial::from_terms(shape, [(e(&[1, 0]), q(3)), (e(&[0, 1]), q(a))]);
        let g2 = Polynomial::from_terms(shape, [(e(&[1, 0]), q(b)), (e(&[0, 1]), q(7))]);
        let values: Vec<Q> = forms.iter().map(|f| f.evaluate(&mono, &[g1.clone(), g2.clone()]).unwrap()).collect();
        ensure(values == [q(3), q(5), q(7)], format!("a={a}: {values:?}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let n = rng.gen_range(1..=3);
        let shape = Shape::Flat(n);
        let r = rng.gen_range(1..=3);
        let gens: Vec<Polynomial<Q>> = (0..r)
            .map(|_| loop {
                let degree = rng.gen_range(1..=2);
                let p = random_poly(&mut rng, shape, degree);
                if !p.is_zero() {
                    break p;
                }
            })
            .collect();
        let system = GeneratorSystem::new(shape, gens).unwrap();
        let degree = system.degrees().iter().copied().max().unwrap() + rng.gen_range(0..=2);
        let cofactors: Vec<Polynomial<Q>> =
            system.degrees().iter().map(|&d| random_poly(&mut rng, shape, degree - d)).collect();
        // Oracle: expand Σ g_i f_i by polynomial multiplication.
        let expansion = system.combine(&cofactors);
        for f in build_pforms(&system, degree) {
            let value = f.evaluate(&system, &cofactors).unwrap();
            ensure(value == expansion.coeff(&f.alpha), format!("trial {trial}: mismatch at {:?}", f.alpha))?;
        }
    }
    Ok("(3,5,7) for 4 splittings a+b=5; 100 random trials agree".into())
}

fn random_poly(rng: &mut ChaCha8Rng, shape: Shape, degree: u32) -> Polynomial<Q> {
    let mut p = Polynomial::zero(shape);
    for m in monomial_basis(shape, degree) {
        if rng.gen_bool(0.6) {
            p.add_term(m, Q::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=3).into()));
        }
    }
    p
}

fn ac3() -> Check {
    let shape = Shape::Flat(2);
    let g = ideal(shape, &["x1^2 + x1*x2 + x2^2"]);
    ensure(exists_s_short(&g, 4, 1, DEFAULT_BUDGET).unwrap().is_none(), "a monomial was found")?;
    let options = ShortnessOptions { random_trials: 0, ..Default::default() };
    let report = shortness(&g, 4, &options);
    ensure(report.status == ShortnessStatus::Exact(2), format!("status {:?}", report.status))?;
    let w = report.witness.as_ref().ok_or("no witness")?;
    ensure(w.polynomial.num_terms() == 2 && w.verify(&g), "witness fails the cofactor identity")?;
    let product = &parse_polynomial::<Q>("x1^2 - x1*x2", shape).unwrap() * &g.generators()[0];
    ensure(product == parse_polynomial("x1^4 - x1*x2^3", shape).unwrap(), "cofactor identity")?;
    Ok(format!("exact(2), s=1 refuted, witness {} = Σ g_i f_i", w.polynomial))
}

fn ac4() -> Check {
    let g = ideal(Shape::Flat(2), &["x1^2 + x1*x2 + x2^2"]);
    let cm = coefficient_matrix(&g, 4);
    let m = ColumnMatroid::new(&cm);
    let a = m.analyze(DEFAULT_MATROID_LIMIT).unwrap();
    let compact = |sets: &[Vec<usize>]| -> BTreeSet<String> {
        sets.iter().map(|s| format_label_set(&s.iter().map(|x| x + 1).collect::<Vec<_>>())).collect()
    };
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    ensure(compact(&a.circuits) == set(&["134", "1245", "235"]), "circuits")?;
    ensure(compact(&a.hyperplanes) == set(&["12", "134", "15", "24", "235", "45"]), "hyperplanes")?;
    let listed = set(&["123", "234", "124", "145", "245", "125", "135"]);
    let bases = compact(&a.bases);
    ensure(listed.is_subset(&bases), "a listed basis is missing")?;
    let extra: Vec<&String> = bases.difference(&listed).collect();
    // The listed bases omit {3,4,5}; its columns (1,1,1), (0,1,1), (0,0,1)
    // have determinant 1.
    let c = |k: usize| cm.matrix.column(k);
    let (u, v, w) = (c(2), c(3), c(4));
    let det = u[0].clone() * (v[1].clone() * w[2].clone() - v[2].clone() * w[1].clone())
        - v[0].clone() * (u[1].clone() * w[2].clone() - u[2].clone() * w[1].clone())
        + w[0].clone() * (u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone());
    ensure(extra == ["345"] && det == q(1), format!("unexpected extra bases {extra:?}"))?;
    Ok("circuits and hyperplanes equal; bases = listed 7 plus 345 (det 1, omitted from the listed set)".into())
}

fn ac5() -> Check {
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            for t in 1..=m.min(n) {
                let det = DeterminantalIdeal::new(m, n, t).unwrap();
                let system = det.minors::<Q>();
                for d in 0..=1u32 {
                    for generic in build_pforms(&system, t as u32 + d) {
                        let special = det.pform::<Q>(d, &generic.alpha).unwrap();
                        ensure(special == generic, format!("({m},{n},{t},{d}) at {:?}", generic.alpha))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} exponents agree"))
}

fn ac6() -> Check {
    let det = DeterminantalIdeal::new(2, 3, 2).unwrap();
    let grid = |rows: [[u32; 3]; 2]| Exponent::new(rows.concat()).unwrap();
    let beta = grid([[1, 0, 1], [0, 1, 0]]);
    let rel = det.bfs_relation(1, &beta, &BTreeSet::new()).map_err(|err| err.to_string())?;
    let mut sum: PForm<Q> = PForm::zero(beta.clone());
    for a in &rel.members {
        for (y, c) in det.pform::<Q>(1, a).unwrap().terms {
            sum.add_term(y, c);
        }
    }
    ensure(sum.is_zero(), "relation does not sum to zero")?;
    let triple: BTreeSet<Exponent> =
        [grid([[1, 0, 1], [0, 1, 0]]), grid([[1, 1, 0], [0, 0, 1]]), grid([[0, 1, 1], [1, 0, 0]])].into();
    ensure(rel.members.iter().cloned().collect::<BTreeSet<_>>() == triple, "V is not the expected triple")?;
    let graph = det.relation_graph(1);
    let idx: Vec<usize> = triple.iter().map(|a| graph.vertex_index(a).unwrap()).collect();
    let triangle = idx.iter().tuple_combinations().all(|(&a, &b)| graph.has_edge(a, b));
    ensure(triangle, "triangle missing from the relation graph")?;
    Ok("V = {101|010, 110|001, 011|100}, zero sum, triangle present".into())
}

fn ac7() -> Check {
    let mut lines = Vec::new();
    for (m, n, t, d, expected) in [(2, 2, 2, 0, 2), (2, 2, 2, 1, 2), (2, 2, 2, 2, 2), (2, 3, 2, 0, 2), (2, 3, 2, 1, 2), (3, 3, 3, 0, 6)] {
        let system = DeterminantalIdeal::new(m, n, t).unwrap().minors::<Q>();
        let options = ShortnessOptions { random_trials: 0, ..Default::default() };
        let r = shortness(&system, (t + d) as u32, &options);
        ensure(r.status == ShortnessStatus::Exact(expected), format!("({m},{n},{t},{d}): {:?}", r.status))?;
        ensure(expected as u128 >= theorem_bound(t), "bound violated")?;
        ensure(r.witness.as_ref().is_some_and(|w| w.verify(&system)), "witness")?;
        lines.push(format!("({m},{n},{t},{d})={expected}"));
    }
    let system = DeterminantalIdeal::new(3, 3, 3).unwrap().minors::<Q>();
    let options = ShortnessOptions { max_terms: Some(3), random_trials: 0, ..Default::default() };
    let r = shortness(&system, 4, &options);
    let stretch = match r.status {
        ShortnessStatus::LowerBound { no_element_with_at_most: 3, budget_exhausted: false } => {
            format!("(3,3,3,1): no <=3-term element ({} rank tests)", r.rank_tests)
        }
        ShortnessStatus::LowerBound { no_element_with_at_most, budget_exhausted: true } => {
            format!("(3,3,3,1): budget exhausted, no <={no_element_with_at_most}-term element")
        }
        other => return Err(format!("(3,3,3,1): {other:?}")),
    };
    lines.push(stretch);
    Ok(lines.join(", "))
}

fn intro_ideal(n: u32) -> GeneratorSystem<Q> {
    let linear = format!("{n}*x1 - x2 - {}*x3", n - 1);
    ideal(Shape::Flat(3), &["x1^2 - 2*x1*x3 + x3^2", &linear])
}

fn ac8() -> Check {
    for n in 2..=4u32 {
        let g = intro_ideal(n);
        let options = ShortnessOptions { max_terms: Some(2), random_trials: 0, ..Default::default() };
        for degree in 1..n {
            let r = shortness(&g, degree, &options);
            let ok = matches!(r.status, ShortnessStatus::LowerBound { no_element_with_at_most: 2, budget_exhausted: false });
            ensure(ok, format!("n={n}, degree {degree}: {:?}", r.status))?;
        }
        let r = shortness(&g, n, &options);
        ensure(r.status == ShortnessStatus::Exact(2), format!("n={n}: {:?}", r.status))?;
        ensure(r.witness.as_ref().is_some_and(|w| w.verify(&g)), "witness")?;
        // x1^n - x2*x3^(n-1) lies in the component.
        let binomial = parse_polynomial::<Q>(&format!("x1^{n} - x2*x3^{}", n - 1), Shape::Flat(3)).unwrap();
        let cm = coefficient_matrix(&g, n);
        let values: Vec<Q> = cm.columns.iter().map(|a| binomial.coeff(a)).collect();
        ensure(cm.matrix.solve_left(&values).is_some(), format!("x1^{n} - x2*x3^{} not in I^({n})", n - 1))?;
    }
    Ok("n=2,3,4: binomial in degree n, none below".into())
}

fn check_bounds(label: &str, s: usize, bounds: &Bounds) -> Result<(), String> {
    ensure(s <= bounds.dim_bound, format!("{label}: {s} > dim bound {}", bounds.dim_bound))?;
    ensure(s <= bounds.occurrence_bound, format!("{label}: {s} > occurrence bound {}", bounds.occurrence_bound))
}

fn ac9() -> Check {
    let full = ShortnessOptions::default();
    let mut instances: Vec<(String, GeneratorSystem<Q>, u32, ShortnessOptions)> =
        vec![("principal D=4".into(), ideal(Shape::Flat(2), &["x1^2 + x1*x2 + x2^2"]), 4, full.clone())];
    for (m, n, t, d) in [(2, 2, 2, 0), (2, 2, 2, 1), (2, 2, 2, 2), (2, 3, 2, 0), (2, 3, 2, 1), (3, 3, 3, 0), (3, 3, 3, 1)] {
        let system = DeterminantalIdeal::new(m, n, t).unwrap().minors::<Q>();
        // The stretch case is searched up to 3 terms, as in AC7.
        let options = if d == 1 && t == 3 { ShortnessOptions { max_terms: Some(3), ..full.clone() } } else { full.clone() };
        instances.push((format!("minors({m},{n},{t}) D={}", t + d), system, (t + d) as u32, options));
    }
    for n in 2..=4u32 {
        for degree in 1..=n {
            instances.push((format!("I_{n} D={degree}"), intro_ideal(n), degree, full.clone()));
        }
    }
    let mut exact = 0;
    for (label, system, degree, options) in &instances {
        let r = shortness(system, *degree, options);
        let bounds = r.bounds.clone().ok_or(format!("{label}: no bounds"))?;
        match r.status {
            ShortnessStatus::Exact(s) => {
                let cm = coefficient_matrix(system, *degree);
                if let Some(brute) = brute_force_shortness(&cm, s) {
                    ensure(brute == s, format!("{label}: brute force {brute} vs {s}"))?;
                }
                check_bounds(label, s, &bounds)?;
                exact += 1;
            }
            ShortnessStatus::LowerBound { no_element_with_at_most, .. } => {
                // Only the lower bound is known; it must stay below both.
                check_bounds(label, no_element_with_at_most + 1, &bounds)?;
            }
            ShortnessStatus::ZeroComponent => return Err(format!("{label}: zero component")),
        }
    }
    Ok(format!("{} instances ({exact} exact) satisfy s <= dim_bound and s <= occurrence_bound", instances.len()))
}

fn ac10() -> Check {
    let mut instances: Vec<(GeneratorSystem<Q>, u32)> = vec![
        (ideal(Shape::Flat(2), &["x1^2 + x1*x2 + x2^2"]), 4),
        (ideal(Shape::Flat(2), &["x1", "x2"]), 2),
        (DeterminantalIdeal::new(2, 2, 2).unwrap().minors(), 2),
        (DeterminantalIdeal::new(2, 2, 2).unwrap().minors(), 3),
        (DeterminantalIdeal::new(2, 3, 2).unwrap().minors(), 2),
        (DeterminantalIdeal::new(3, 3, 3).unwrap().minors(), 3),
        (intro_ideal(2), 2),
        (intro_ideal(3), 2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut random = 0;
    while random < 20 {
        let n = rng.gen_range(1..=3);
        let shape = Shape::Flat(n);
        let r = rng.gen_range(1..=2);
        let mut gens = Vec::new();
        for _ in 0..r {
            let degree = rng.gen_range(1..=2);
            let p = random_poly(&mut rng, shape, degree);
            if !p.is_zero() {
                gens.push(p);
            }
        }
        if gens.is_empty() {
            continue;
        }
        let system = GeneratorSystem::new(shape, gens).unwrap();
        let degree = system.degrees().iter().copied().max().unwrap() + rng.gen_range(0..=1);
        let cm = coefficient_matrix(&system, degree);
        if cm.columns.len() - cm.loops().len() > 12 {
            continue;
        }
        instances.push((system, degree));
        random += 1;
    }
    for (k, (system, degree)) in instances.iter().enumerate() {
        let cm = coefficient_matrix(system, *degree);
        let non_loops = cm.columns.len() - cm.loops().len();
        ensure(non_loops <= 12, format!("instance {k}: {non_loops} non-loops"))?;
        let r = shortness(system, *degree, &ShortnessOptions::default());
        let via = ColumnMatroid::new(&cm).shortness_via_hyperplanes(DEFAULT_MATROID_LIMIT);
        match (r.status, via) {
            (ShortnessStatus::Exact(s), Ok(h)) => ensure(s == h, format!("instance {k}: search {s}, hyperplanes {h}"))?,
            (ShortnessStatus::ZeroComponent, Err(_)) => {}
            (status, via) => return Err(format!("instance {k}: {status:?} vs {via:?}")),
        }
    }
    Ok(format!("{} instances ({random} random) agree", instances.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", "p-form golden tests", ac1, Duration::from_secs(1)),
        ("AC2", "evaluation of forms", ac2, Duration::from_secs(5)),
        ("AC3", "principal ideal shortness", ac3, Duration::from_secs(1)),
        ("AC4", "matroid example", ac4, Duration::from_secs(1)),
        ("AC5", "determinantal specialization", ac5, Duration::from_secs(30)),
        ("AC6", "relation reproduction", ac6, Duration::from_secs(1)),
        ("AC7", "minor lower bound at desk scale", ac7, Duration::from_secs(300)),
        ("AC8", "introduction family", ac8, Duration::from_secs(30)),
        ("AC9", "bound direction audit", ac9, Duration::from_secs(60)),
        ("AC10", "duality property suite", ac10, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("[PASS] {id} {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failures += 1;
                println!("[FAIL] {id} {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
