//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! Expected values come from in-test oracles (closed forms, brute-force
//! eigensolves, independent counting) or are frozen regression anchors from
//! the first computation.

use std::process::Command;
use std::time::Instant;

use delone_ids::geometry::{
    generate, inner_boundary_sites, sets_equal, DeloneSet, GeneratorSpec, Point,
    VanHoveSequence, Window,
};
use delone_ids::mld::{build_gfin, decorate, underive};
use delone_ids::operators::{
    assemble, check_rule_axioms, decorated_rule, nn_adjacency_rule, OperatorRule,
};
use delone_ids::patterns::PatternClass;
use delone_ids::spectra::{
    default_cluster_tol, detect_jumps, ids_curve, sup_distance, symmetric_eigenvalues,
};
use delone_ids::MATCH_TOL;

fn z2(half: f64) -> DeloneSet {
    generate(
        &GeneratorSpec::SquareLattice { spacing: 1.0 },
        &Window::centered_box(2, half),
        0,
    )
    .unwrap()
}

fn flagship(half: f64) -> DeloneSet {
    decorate(
        &z2(half),
        &PatternClass::singleton(2, 0.4),
        &build_gfin(0.42).unwrap(),
    )
    .unwrap()
}

#[test]
fn acceptance_1_mld_round_trip() {
    let g042 = build_gfin(0.42).unwrap();
    let g03 = build_gfin(0.3).unwrap();
    for (name, spec, graph, s) in [
        ("square", GeneratorSpec::SquareLattice { spacing: 1.0 }, &g042, 0.4),
        (
            "triangular",
            GeneratorSpec::TriangularLattice { spacing: 1.0 },
            &g042,
            0.4,
        ),
        ("octagonal", GeneratorSpec::CutProjectOctagonal, &g03, 0.3),
    ] {
        for half in [4.0, 6.0, 8.0] {
            let t0 = Instant::now();
            let omega = generate(&spec, &Window::centered_box(2, half), 1).unwrap();
            let class = PatternClass::singleton(2, s);
            let decorated = decorate(&omega, &class, graph).unwrap();
            let recovered = underive(&decorated, graph.scale()).unwrap();
            let trusted = recovered.trusted_window(0.0).unwrap();
            let got = recovered.points_in(&trusted);
            let want = omega.points_in(&trusted);
            assert_eq!(
                got.len(),
                want.len(),
                "{name} L={half}: point count after round trip"
            );
            assert!(
                sets_equal(&got, &want, MATCH_TOL),
                "{name} L={half}: mismatched points"
            );
            let elapsed = t0.elapsed();
            assert!(
                elapsed.as_secs_f64() < 1.0,
                "{name} L={half}: round trip took {elapsed:?}"
            );
        }
    }
    println!("ACCEPTANCE 1 (MLD round trip, 3 generators x 3 sizes): PASS");
}

#[test]
fn acceptance_2_compact_eigenfunction_exact_zero_modes() {
    let t0 = Instant::now();
    let omega = flagship(12.0);
    let g = build_gfin(0.42).unwrap();
    let rule = decorated_rule(&g, 1.0).unwrap();
    let offset = g.satellite_offset();
    for l in [4.0_f64, 6.0, 8.0] {
        let q = Window::centered_box(2, l);
        let a = assemble(&rule, &omega, &q).unwrap();
        // clusters with both inner satellites inside the window carry the
        // u = (1, -1) mode; find them by their host coordinates
        let mut modes = 0usize;
        for host in omega.points_in(&q) {
            let on_lattice = host
                .coords()
                .iter()
                .all(|c| (c - c.round()).abs() < 1e-9);
            if !on_lattice {
                continue;
            }
            let up = Point::xy(host.coords()[0], host.coords()[1] + offset);
            let down = Point::xy(host.coords()[0], host.coords()[1] - offset);
            let (Some(ia), Some(ib)) = (a.site_index(&up), a.site_index(&down)) else {
                continue;
            };
            let mut u = vec![0i64; a.dim()];
            u[ia] = 1;
            u[ib] = -1;
            let residual = a.integer_residual(&u, 0);
            assert!(
                residual.iter().all(|&v| v == 0),
                "L={l}: cluster at {host} has nonzero integer residual"
            );
            modes += 1;
        }
        let complete_clusters = {
            let m = (l - 1.0).floor() as i64;
            ((2 * m + 1) * (2 * m + 1)) as usize
        };
        assert!(
            modes >= complete_clusters,
            "L={l}: {modes} exact modes < {complete_clusters} complete clusters"
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 2 took {elapsed:?}");
    println!("ACCEPTANCE 2 (exact integer zero modes per cluster, L=4,6,8): PASS");
}

#[test]
fn acceptance_3_ids_jump_weight() {
    let t0 = Instant::now();
    let omega = flagship(12.0);
    let g = build_gfin(0.42).unwrap();
    let rule = decorated_rule(&g, 1.0).unwrap();

    // oracle: brute-force eigensolve of one isolated cluster plus host cell
    let cell = assemble(&rule, &omega, &Window::ball(Point::xy(0.0, 0.0), 0.05)).unwrap();
    assert_eq!(cell.dim(), 5);
    let cell_values = symmetric_eigenvalues(cell.matrix()).unwrap();
    let m = cell_values.iter().filter(|v| v.abs() < 1e-12).count();
    assert_eq!(m, 3, "K_{{3,2}} zero multiplicity");

    let nu = 1.0; // singleton class occurs once per unit cell
    for l in [6.0_f64, 8.0] {
        let q = Window::centered_box(2, l);
        let ids = ids_curve(&rule, &omega, &q).unwrap();
        let report = detect_jumps(&ids, 0.5, default_cluster_tol(ids.spectral_radius()));
        let jump = report.at(0.0, 1e-6).expect("flagship jump at E=0");
        let center = m as f64 * nu;
        let lo = center * (1.0 - 8.0 / l);
        let hi = center * (1.0 + 8.0 / l);
        assert!(
            jump.weight >= lo && jump.weight <= hi,
            "L={l}: weight {} outside [{lo}, {hi}]",
            jump.weight
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 3 took {elapsed:?}");
    println!("ACCEPTANCE 3 (jump weight within (1 +- 8/L) of m*nu at L=6,8): PASS");
}

#[test]
fn acceptance_4_jump_lower_bound_and_chain() {
    let omega = flagship(12.0);
    let g = build_gfin(0.42).unwrap();
    let rule = decorated_rule(&g, 1.0).unwrap();
    let cluster = PatternClass::at_site(&omega, &Point::xy(0.0, 0.0), 0.4).unwrap();
    let seq = VanHoveSequence::new(2, vec![4.0, 6.0, 8.0]).unwrap();
    let report = delone_ids::bounds::jump_bound_report(&rule, &omega, &cluster, &seq, 0.0).unwrap();

    // C from the closed form with the measured packing radius of the
    // decorated sample
    let c_expected =
        ((3.0 * 0.4 + omega.r_pack()) / omega.r_pack()).powi(2);
    assert!((report.c - c_expected).abs() < 1e-6 * c_expected);
    assert!(
        report.observed_jump >= report.nu / report.c - 1e-9,
        "observed {} below nu/C = {}",
        report.observed_jump,
        report.lower_bound
    );
    assert!(report.satisfied);
    // the full finite-volume inequality chain holds per window
    for check in &report.chain {
        assert!(
            check.holds,
            "chain violated at L={}: {} > {}",
            check.window_half, check.lhs, check.rhs
        );
        assert!(check.eps > 0.0);
    }
    println!("ACCEPTANCE 4 (observed jump >= nu/C; inequality chain per window): PASS");
}

#[test]
fn acceptance_5_converse_extraction_at_crossover() {
    // the dimension comparison first succeeds at L=14 for this system; run
    // the verify pipeline end to end through the CLI and check the claim
    let out = std::env::temp_dir().join("delone-ids-acceptance-5");
    let output = Command::new(env!("CARGO_BIN_EXE_delone-ids"))
        .args([
            "verify",
            "--lattice",
            "square",
            "--L",
            "4,6,8,10,12,14",
            "--decorate",
            "r=0.42",
            "--seed",
            "0",
            "--out",
        ])
        .arg(&out)
        .output()
        .expect("run verify");
    let report = String::from_utf8_lossy(&output.stdout);
    assert!(
        output.status.success(),
        "verify exited {:?}:\n{report}",
        output.status.code()
    );
    let claim_line = report
        .lines()
        .find(|l| l.starts_with("claim compact eigenfunction"))
        .expect("extraction claim present");
    assert!(
        claim_line.contains("-> PASS"),
        "extraction claim failed: {claim_line}"
    );
    assert!(
        claim_line.contains("crossover L=14"),
        "crossover expected at L=14: {claim_line}"
    );
    // residual and extended residual are enforced at 1e-10 inside the
    // pipeline; double-check they are reported
    assert!(claim_line.contains("residual="));
    println!("ACCEPTANCE 5 (converse extraction at the L=14 crossover, residual <= 1e-10): PASS");
}

#[test]
fn acceptance_6_lattice_controls() {
    // d = 2: maximal cluster weight strictly decreases, no jump at 0.25
    let omega = z2(18.0);
    let rule = nn_adjacency_rule(1.0).unwrap();
    let mut weights = Vec::new();
    for l in [4.0_f64, 8.0, 16.0] {
        let ids = ids_curve(&rule, &omega, &Window::centered_box(2, l)).unwrap();
        let tol = default_cluster_tol(ids.spectral_radius());
        let all = detect_jumps(&ids, 1e-9, tol);
        let max_weight = all.jumps.iter().map(|j| j.weight).fold(0.0_f64, f64::max);
        weights.push(max_weight);
        let floored = detect_jumps(&ids, 0.25, tol);
        assert!(
            floored.jumps.is_empty(),
            "L={l}: unexpected jump above 0.25"
        );
    }
    assert!(
        weights[0] > weights[1] && weights[1] > weights[2],
        "cluster weights not strictly decreasing: {weights:?}"
    );

    // d = 1: Dirichlet path closed form to 1e-10
    let line = generate(
        &GeneratorSpec::SquareLattice { spacing: 1.0 },
        &Window::centered_box(1, 20.0),
        0,
    )
    .unwrap();
    for l in [6.0_f64, 10.0] {
        let ids = ids_curve(&rule, &line, &Window::centered_box(1, l)).unwrap();
        let n = ids.eigenvalues().len();
        assert_eq!(n, 2 * l as usize + 1);
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, w) in ids.eigenvalues().iter().zip(want) {
            assert!((v - w).abs() <= 1e-10, "path eigenvalue {v} vs {w}");
        }
    }
    println!("ACCEPTANCE 6 (lattice controls: shrinking clusters in d=2, exact path spectrum in d=1): PASS");
}

#[test]
fn acceptance_7_uniform_convergence_diagnostic() {
    let g = build_gfin(0.42).unwrap();
    let base = z2(21.0);
    let decorated = decorate(&base, &PatternClass::singleton(2, 0.4), &g).unwrap();
    let nn = nn_adjacency_rule(1.0).unwrap();
    let dec = decorated_rule(&g, 1.0).unwrap();

    // regression anchors from the first computation
    let anchors = [
        ("undecorated", 0.15625, 0.0771484375),
        ("decorated", 0.63671875, 0.5166015625),
    ];
    for ((name, a48, a816), (set, rule)) in
        anchors.iter().zip([(&base, &nn), (&decorated, &dec)])
    {
        let n4 = ids_curve(rule, set, &Window::centered_box(2, 4.0)).unwrap();
        let n8 = ids_curve(rule, set, &Window::centered_box(2, 8.0)).unwrap();
        let n16 = ids_curve(rule, set, &Window::centered_box(2, 16.0)).unwrap();
        let d48 = sup_distance(&n4, &n8);
        let d816 = sup_distance(&n8, &n16);
        assert!(
            d816 < d48,
            "{name}: sup distance not decreasing ({d48} -> {d816})"
        );
        assert!((d48 - a48).abs() < 1e-9, "{name}: anchor drift {d48} vs {a48}");
        assert!(
            (d816 - a816).abs() < 1e-9,
            "{name}: anchor drift {d816} vs {a816}"
        );

        // sampled-translate maximum vs a single translate (4 generic shifts)
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut values = Vec::new();
        for _ in 0..4 {
            let t = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            let shifted = set.translate(&t);
            let m4 = ids_curve(rule, &shifted, &Window::centered_box(2, 4.0)).unwrap();
            let m8 = ids_curve(rule, &shifted, &Window::centered_box(2, 8.0)).unwrap();
            values.push(sup_distance(&m4, &m8));
        }
        let single = values[0];
        let sampled_max = values.iter().fold(0.0_f64, |m, v| m.max(*v));
        assert!(
            sampled_max < 2.0 * single && sampled_max >= single,
            "{name}: translate sample max {sampled_max} vs single {single}"
        );
    }
    println!("ACCEPTANCE 7 (sup-distance decreasing L=4->8->16; translate sampling stable): PASS");
}

#[test]
fn acceptance_8_operator_axioms() {
    let base = z2(12.0);
    let nn = nn_adjacency_rule(1.0).unwrap();
    let report = check_rule_axioms(&nn, &base, 1000, 11).unwrap();
    assert_eq!(report.total_violations(), 0, "{:?}", report.violations);

    let g = build_gfin(0.42).unwrap();
    let decorated = decorate(&base, &PatternClass::singleton(2, 0.4), &g).unwrap();
    let dec = decorated_rule(&g, 1.0).unwrap();
    let report = check_rule_axioms(&dec, &decorated, 1000, 11).unwrap();
    assert_eq!(report.total_violations(), 0, "{:?}", report.violations);

    // negative control: kernel depending on global site-count parity and on
    // lexicographic order is neither equivariant nor symmetric
    let broken = OperatorRule::custom("parity", 1.0 + MATCH_TOL, |om, x, y| {
        let d = x.dist(y);
        if d > MATCH_TOL && d <= 1.0 && om.len() % 2 == 1 {
            if x.lex_cmp(y) == std::cmp::Ordering::Less {
                1.0
            } else {
                0.0
            }
        } else {
            0.0
        }
    });
    let report = check_rule_axioms(&broken, &base, 1000, 11).unwrap();
    assert!(report.total_violations() > 0, "negative control not flagged");
    println!("ACCEPTANCE 8 (operator axioms: clean for nn and decorated, flagged for the control): PASS");
}

#[test]
fn acceptance_9_verify_determinism() {
    let args = |out: &std::path::Path| {
        vec![
            "verify".to_string(),
            "--lattice".into(),
            "square".into(),
            "--L".into(),
            "4,6".into(),
            "--decorate".into(),
            "r=0.42".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let out1 = std::env::temp_dir().join("delone-ids-acceptance-9a");
    let out2 = std::env::temp_dir().join("delone-ids-acceptance-9b");
    let run1 = Command::new(env!("CARGO_BIN_EXE_delone-ids"))
        .args(args(&out1))
        .output()
        .expect("first verify");
    let run2 = Command::new(env!("CARGO_BIN_EXE_delone-ids"))
        .args(args(&out2))
        .output()
        .expect("second verify");
    assert!(run1.status.success() && run2.status.success());
    assert_eq!(run1.stdout, run2.stdout, "stdout reports differ");
    let report1 = std::fs::read(out1.join("verify.txt")).unwrap();
    let report2 = std::fs::read(out2.join("verify.txt")).unwrap();
    assert!(!report1.is_empty());
    assert_eq!(report1, report2, "verify.txt files differ");
    println!("ACCEPTANCE 9 (byte-identical verify reports for a fixed seed): PASS");
}
