use alpha_paltanea_browser::{basis, curves, ladder};

#[test]
fn curves_have_six_columns() {
    let v = curves("example1", 10, 5.0, 0.2, 11).unwrap();
    assert_eq!(v.len(), 66);
    // Row x = 0.5: the first-order error from the reference table.
    let row = &v[30..36];
    assert_eq!(row[0], 0.5);
    assert!(((row[1] - row[3]).abs() - 0.053236321).abs() < 5e-9);
    assert!(curves("nope", 10, 5.0, 0.2, 11).is_err());
    assert!(curves("example1", 10, 5.0, 0.2, 1).is_err());
}

#[test]
fn ladder_reports_slope() {
    let v = ladder("exp", "m2", 4.0, 0.3, 0.3, &[16, 32, 64, 128]).unwrap();
    assert_eq!(v.len(), 6);
    assert!((v[4] + 2.0).abs() < 0.25);
    assert!(ladder("exp", "m9", 4.0, 0.3, 0.3, &[16, 32, 64]).is_err());
}

#[test]
fn basis_rows_sum_to_one() {
    for kind in ["alpha", "m2", "m3"] {
        let n = 9;
        let points = 7;
        let v = basis(kind, n, 0.3, 4.0, points).unwrap();
        assert_eq!(v.len(), (n + 1) * points);
        for j in 0..points {
            let s: f64 = (0..=n).map(|k| v[k * points + j]).sum();
            assert!((s - 1.0).abs() < 1e-11, "{kind}");
        }
    }
}
