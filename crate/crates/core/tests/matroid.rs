use shortpoly::matroid::{MatroidError, DEFAULT_MATROID_LIMIT};
use shortpoly::{coefficient_matrix, ColumnMatroid, DeterminantalIdeal, Rational};

type Q = Rational;

#[test]
fn two_by_two_determinant() {
    let g = DeterminantalIdeal::new(2, 2, 2).unwrap().minors::<Q>();
    let cm = coefficient_matrix(&g, 2);
    let m = ColumnMatroid::new(&cm);
    let report = m.report(DEFAULT_MATROID_LIMIT).unwrap();
    assert_eq!(report.rank, 1);
    // Only x11*x22 and x12*x21 occur; the other 8 monomials are loops.
    assert_eq!(report.ground.len(), 10);
    assert_eq!(report.loops.len(), 8);
    let non_loops: Vec<usize> = (1..=10).filter(|l| !report.loops.contains(l)).collect();
    assert!(report.circuits.contains(&non_loops));
    assert_eq!(report.bases, vec![vec![non_loops[0]], vec![non_loops[1]]]);
    assert_eq!(report.shortness, Some(2));
}

#[test]
fn two_by_three_minors_in_degree_two() {
    let g = DeterminantalIdeal::new(2, 3, 2).unwrap().minors::<Q>();
    let m = ColumnMatroid::new(&coefficient_matrix(&g, 2));
    assert_eq!(m.ground_size(), 21);
    assert_eq!(m.loops().len(), 15);
    let a = m.analyze(DEFAULT_MATROID_LIMIT).unwrap();
    assert_eq!(a.rank, 3);
    assert!(a.hyperplanes.iter().all(|h| h.len() >= 18));
    assert_eq!(m.shortness_via_hyperplanes(DEFAULT_MATROID_LIMIT).unwrap(), 2);
}

#[test]
fn large_matroids_hit_the_limit() {
    let g = DeterminantalIdeal::new(2, 3, 2).unwrap().minors::<Q>();
    let m = ColumnMatroid::new(&coefficient_matrix(&g, 3));
    assert_eq!(m.analyze(DEFAULT_MATROID_LIMIT), Err(MatroidError::SizeLimit { found: 30, limit: 16 }));
}
