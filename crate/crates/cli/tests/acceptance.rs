//! End-to-end acceptance checks, one test per criterion. Each prints a single
//! `PASS`/`FAIL` line (visible with `--nocapture`) and asserts on it.

use alpha_paltanea::analysis::{
    bound_ratio_check, estimate_order, voronovskaya_gap, OperatorFamily, SchemeFamily,
};
use alpha_paltanea::moments::{verify_lemmas_exact_batch, ExactSetting, Verdict};
use alpha_paltanea::{
    apply_grid, lookup, reduction_check, Function1D, OperatorKind, OperatorParams, QuadratureConfig,
};
use std::process::Command;

fn report(criterion: u32, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn unit_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

fn abp(args: &[&str]) -> String {
    let o = Command::new(env!("CARGO_BIN_EXE_abp"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        o.status.success(),
        "abp {args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

const TABLE_TOL: f64 = 5e-9;

type Rows = [[f64; 4]; 9];

// Reference errors at x = 0.1..0.9, columns Q, M1, M2, M3.
const EXAMPLE1_N10: Rows = [
    [0.0465927917, 0.2029191714, 0.0090258508, 0.0410711480],
    [0.292607380, 0.189033401, 0.105857578, 0.020163736],
    [0.394424647, 0.373376025, 0.175570300, 0.018015963],
    [0.294804927, 0.301231910, 0.137423887, 0.025812675],
    [0.053236320, 0.053236321, 0.014926178, 0.000239280],
    [0.196044423, 0.208534327, 0.109839626, 0.025493047],
    [0.3182317026, 0.3213021846, 0.1544639662, 0.0180914623],
    [0.2521506342, 0.2023484272, 0.0944769302, 0.0196894259],
    [0.052294816, 0.102854286, 0.008980412, 0.040540562],
];

const EXAMPLE2_N10: Rows = [
    [0.05755638690, 0.07198182417, 0.00593343135, 0.02211119337],
    [0.1058403144, 0.1347020007, 0.05618431396, 0.00086323684],
    [0.05131069544, 0.07328503894, 0.05274231364, 0.01900023794],
    [0.0916546188, 0.0844657778, 0.0166755487, 0.0079394543],
    [0.2366464156, 0.2366464156, 0.1013426174, 0.0193312761],
    [0.2827508318, 0.2698804172, 0.1314792584, 0.0277669661],
    [0.1851049397, 0.1344774017, 0.0765221240, 0.0019799015],
    [0.0010362418, 0.1078472481, 0.0202148003, 0.0324610925],
    [0.1316309131, 0.2930201701, 0.0579303733, 0.0309826354],
];

const EXAMPLE2_N15: Rows = [
    [0.03861056189, 0.04342340681, 0.00028346673, 0.00994590237],
    [0.08120272655, 0.1019322964, 0.02979966536, 0.00261425244],
    [0.04762100304, 0.06648839344, 0.03350486624, 0.00718895284],
    [0.0584777139, 0.0510375462, 0.0037061452, 0.0043217338],
    [0.1707169136, 0.1707169135, 0.0534421617, 0.0067597319],
    [0.2073066153, 0.1986262669, 0.0714731511, 0.0102423637],
    [0.1318061469, 0.0940588932, 0.0384911205, 0.0005598941],
    [0.0097174609, 0.0887152715, 0.0165306134, 0.0128506443],
    [0.1019438820, 0.2122610177, 0.0321883935, 0.0089215656],
];

const EXAMPLE2_N20: Rows = [
    [0.02861514285, 0.02978527157, 0.00135692531, 0.00493671473],
    [0.06515132595, 0.08083293178, 0.01810232856, 0.00184414784],
    [0.04171602804, 0.05754420964, 0.02246595754, 0.00339046874],
    [0.0423780236, 0.0356126371, 0.0005113770, 0.0023993240],
    [0.1336280335, 0.1336280335, 0.0330134666, 0.003147654],
    [0.1637928626, 0.1572063097, 0.0448962830, 0.0048952830],
    [0.1024392756, 0.0721778840, 0.0230362411, 0.0006129461],
    [0.0113308695, 0.0741312889, 0.0121952799, 0.0062328086],
    [0.0822517165, 0.1657103520, 0.0201291953, 0.0033482141],
];

#[test]
fn criterion_1_reference_error_tables() {
    let cases: [(&str, &str, &str, &str, &Rows); 4] = [
        ("example1", "10", "5", "0.2", &EXAMPLE1_N10),
        ("example2", "10", "4", "0.3", &EXAMPLE2_N10),
        ("example2", "15", "4", "0.3", &EXAMPLE2_N15),
        ("example2", "20", "4", "0.3", &EXAMPLE2_N20),
    ];
    let mut misses = Vec::new();
    let mut worst: f64 = 0.0;
    for (function, n, rho, alpha, expected) in cases {
        let csv = abp(&[
            "table",
            "--function",
            function,
            "--n",
            n,
            "--rho",
            rho,
            "--alpha",
            alpha,
        ]);
        let rows: Vec<Vec<f64>> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 9);
        for (row, want) in rows.iter().zip(expected) {
            for (col, (&got, &w)) in row[1..].iter().zip(want).enumerate() {
                let gap = (got - w).abs();
                worst = worst.max(gap);
                if gap > TABLE_TOL {
                    let op = ["Q", "M1", "M2", "M3"][col];
                    misses.push(format!("{function} n={n} x={} {op}: {got} vs {w}", row[0]));
                }
            }
        }
    }
    let detail = format!("144 entries, max gap {worst:.2e}, misses {misses:?}");
    report(1, misses.is_empty(), &detail);
}

#[test]
fn criterion_2_exact_moment_identities() {
    let settings = ExactSetting::random_batch(2024, 20, 8);
    let reports = verify_lemmas_exact_batch(&settings, &QuadratureConfig::default(), |_, _| {});
    let exact = reports.iter().filter(|r| r.verdict == Verdict::Exact).count();
    let typos: Vec<_> = reports.iter().filter(|r| r.verdict == Verdict::Typo).collect();
    let mut typo_names: Vec<&str> = typos.iter().map(|r| r.formula).collect();
    typo_names.sort_unstable();
    typo_names.dedup();
    let open: Vec<_> = reports
        .iter()
        .filter(|r| !r.adjudicated())
        .map(|r| r.formula)
        .collect();
    let detail = format!(
        "{} reports, {exact} exact, {} typos confirmed by quadrature {typo_names:?}, unresolved {open:?}",
        reports.len(),
        typos.len()
    );
    report(2, !reports.is_empty() && open.is_empty(), &detail);
}

#[test]
fn criterion_3_exactness() {
    let cfg = QuadratureConfig::default();
    let xs = unit_grid(201);
    let params = OperatorParams::new(10, 0.2, 5.0).unwrap();
    let worst = |kind: &OperatorKind, i: usize| {
        let v = apply_grid(kind, &params, &Function1D::monomial(i), &xs, &cfg).unwrap();
        xs.iter()
            .zip(v)
            .map(|(x, v)| (v - x.powi(i as i32)).abs())
            .fold(0.0, f64::max)
    };
    let m2 = (0..=1)
        .map(|i| worst(&OperatorKind::M2Bar, i))
        .fold(0.0, f64::max);
    let m3 = (0..=3)
        .map(|i| worst(&OperatorKind::M3Tilde, i))
        .fold(0.0, f64::max);
    let detail =
        format!("second-order e0,e1 gap {m2:.2e} (<= 1e-11), third-order e0..e3 gap {m3:.2e} (<= 1e-8)");
    report(3, m2 <= 1e-11 && m3 <= 1e-8, &detail);
}

#[test]
fn criterion_4_reduction_identities() {
    let cfg = QuadratureConfig::new(1e-12, 1e-15, 1000).unwrap();
    let xs = unit_grid(201);
    let params = OperatorParams::new(10, 0.2, 5.0).unwrap();
    let mut worst: f64 = 0.0;
    for f in [
        Function1D::from_entry(lookup("example1").unwrap()),
        Function1D::monomial(2),
    ] {
        let r = reduction_check(&params, &f, &xs, &cfg).unwrap();
        worst = worst.max(r.m1_gap).max(r.m2_gap.unwrap());
    }
    report(4, worst <= 1e-10, &format!("max gap {worst:.2e} (<= 1e-10)"));
}

#[test]
fn criterion_5_empirical_orders() {
    let cfg = QuadratureConfig::new(1e-13, 1e-15, 4000).unwrap();
    let template = OperatorParams::new(16, 0.3, 4.0).unwrap();
    let f = Function1D::from_entry(lookup("exp").unwrap());
    let ns = [16, 32, 64, 128, 256];
    let mut ok = true;
    let mut parts = Vec::new();
    for (family, lo, hi) in [
        (OperatorFamily::Q, -1.15, -0.85),
        (OperatorFamily::M2Bar, -2.25, -1.75),
        (OperatorFamily::M3Tilde, -3.35, -2.65),
    ] {
        let r = estimate_order(&family, &template, &f, 0.3, &ns, &cfg).unwrap();
        let used = r.used.iter().filter(|&&u| u).count();
        ok &= (lo..=hi).contains(&r.fitted_slope);
        parts.push(format!(
            "{:?} {:.4} in [{lo}, {hi}] ({used}/5 points)",
            family, r.fitted_slope
        ));
    }
    report(5, ok, &parts.join("; "));
}

#[test]
fn criterion_6_voronovskaya_decay() {
    let cfg = QuadratureConfig::new(1e-13, 1e-15, 4000).unwrap();
    let entry = lookup("exp").unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for scheme in [SchemeFamily::PaperExample, SchemeFamily::Case2] {
        let gap = |n| {
            voronovskaya_gap(
                entry,
                &OperatorParams::new(n, 0.3, 4.0).unwrap(),
                &scheme,
                0.3,
                &cfg,
            )
            .unwrap()
        };
        let (g64, g256) = (gap(64), gap(256));
        let ratio = g256 / g64;
        ok &= ratio < 0.6;
        parts.push(format!(
            "{scheme:?} gap {g64:.3e} -> {g256:.3e}, ratio {ratio:.3}"
        ));
    }
    report(6, ok, &parts.join("; "));
}

#[test]
fn criterion_7_bounded_error_ratio() {
    let cfg = QuadratureConfig::default();
    let params: Vec<_> = [16, 64, 256, 1024]
        .iter()
        .map(|&n| OperatorParams::new(n, 0.2, 5.0).unwrap())
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["example1", "abs-half"] {
        let f = Function1D::from_entry(lookup(name).unwrap());
        let rs = bound_ratio_check(&f, &SchemeFamily::PaperExample, &params, &cfg).unwrap();
        let ratios: Vec<f64> = rs.iter().map(|r| r.ratio).collect();
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let early = ratios[..3].iter().cloned().fold(0.0, f64::max);
        // Bounded: finite and unflagged. Not diverging: the last ratio does
        // not climb past the largest earlier one.
        ok &= rs.iter().all(|r| r.ratio.is_finite() && !r.flagged) && ratios[3] <= early;
        parts.push(format!("{name} ratios {ratios:.4?} max {max:.4}"));
    }
    report(7, ok, &parts.join("; "));
}

#[test]
fn criterion_8_deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let invocations: [&[&str]; 3] = [
        &[
            "eval",
            "--function",
            "example2",
            "--n",
            "15",
            "--rho",
            "4",
            "--alpha",
            "0.3",
        ],
        &["table", "--function", "abs-half", "--n", "30"],
        &["convergence", "--op", "all"],
    ];
    let mut ok = true;
    for (i, args) in invocations.iter().enumerate() {
        let files: Vec<Vec<u8>> = (0..2)
            .map(|run| {
                let path = dir.path().join(format!("{i}-{run}.csv"));
                let mut full = args.to_vec();
                full.extend(["--out", path.to_str().unwrap()]);
                abp(&full);
                std::fs::read(&path).unwrap()
            })
            .collect();
        ok &= !files[0].is_empty() && files[0] == files[1];
    }
    report(
        8,
        ok,
        "three invocations, each run twice and compared byte for byte",
    );
}
