//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use sqhom::circuits::{
    attach_group_structure, circuit_from_morphism, homology_action, multiplication_morphism, validate_circuit,
};
use sqhom::encoding::{census, complex_register_encoding, nerve_register_encoding};
use sqhom::fixtures;
use sqhom::hilbert::{defect, perfectness_class, DefectKind, PerfectnessClass};
use sqhom::homology::{
    betti_numbers, chain_equivalence_check, degeneracy_laplacian_diagonal, hodge_laplacian, hodge_resolution_check,
    laplacian_decomposition_check, Basis, BettiMethod, LaplacianKind,
};
use sqhom::linalg::exact;
use sqhom::qsim::{grover_project, qpe_betti, quantum_count, QpeConfig};
use sqhom::sset::{
    disjoint_union, FiniteGroupTable, OrderedComplexTable, SimplexRef, SimplicialMorphismTable, TruncatedSimplicialSet,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn census_exactness() -> Outcome {
    let groups = [
        ("Z2", FiniteGroupTable::cyclic(2).unwrap()),
        ("Z3", FiniteGroupTable::cyclic(3).unwrap()),
        ("S3", FiniteGroupTable::symmetric(3).unwrap()),
    ];
    let mut checked = 0;
    for (name, g) in &groups {
        let x = sqhom::sset::build_nerve_group(g, 4).unwrap();
        let q = g.order() as u64;
        for n in 0..=4 {
            let total = x.count(n) as u64;
            let nondeg = x.nondegenerate(n).len() as u64;
            ensure!(total == q.pow(n as u32), "{name} degree {n}: {total} simplices");
            ensure!(nondeg == (q - 1).pow(n as u32), "{name} degree {n}: {nondeg} non-degenerate");
            checked += 1;
        }
    }
    for d in 0..=4u64 {
        let x = fixtures::full_simplex(d as usize, 4);
        for n in 0..=4u64 {
            let total = x.count(n as usize) as u64;
            ensure!(total == binom(d + n + 1, n + 1), "full complex d={d} degree {n}: {total}");
            checked += 1;
        }
    }
    Ok(format!("{checked} degree counts match the closed forms"))
}

fn ez_recombination() -> Outcome {
    let mut simplices = 0;
    for (name, x) in fixtures::catalogue() {
        let c = census(&x).map_err(|e| format!("{name}: {e}"))?;
        for n in 0..=x.cutoff() {
            let predicted: u64 = (0..=n).map(|m| binom(n as u64, m as u64) * c.nondegenerate[m]).sum();
            ensure!(predicted == c.totals[n], "{name} degree {n}: {predicted} vs {}", c.totals[n]);
            for k in 0..x.count(n) {
                let s = SimplexRef::new(n, k);
                let ez = x.ez_normal_form(s);
                ensure!(ez.indices.windows(2).all(|w| w[0] < w[1]), "{name} {s:?}: string not increasing");
                ensure!(!x.is_degenerate(ez.base), "{name} {s:?}: degenerate base");
                ensure!(ez.indices.is_empty() != x.is_degenerate(s), "{name} {s:?}: degeneracy mismatch");
                ensure!(x.realize(&ez).ok() == Some(s), "{name} {s:?}: normal form does not round-trip");
                simplices += 1;
            }
        }
    }
    Ok(format!("{simplices} simplices round-trip; totals recombine on every fixture"))
}

fn betti_table(x: &TruncatedSimplicialSet, method: BettiMethod) -> Result<Vec<usize>, String> {
    let all = betti_numbers(x, method).map_err(|e| e.to_string())?;
    Ok(all.into_iter().filter(|r| !r.truncation_sensitive).map(|r| r.value).collect())
}

fn betti_agreement() -> Outcome {
    let union = disjoint_union(&fixtures::torus(3), &fixtures::simplex_boundary(3, 3)).unwrap();
    let cases: Vec<(&str, TruncatedSimplicialSet, Vec<usize>)> = vec![
        ("point", fixtures::point(1), vec![1]),
        ("delta3", fixtures::full_simplex(3, 3), vec![1, 0, 0]),
        ("boundary_delta3", fixtures::simplex_boundary(3, 3), vec![1, 0, 1]),
        ("torus", fixtures::torus(3), vec![1, 2, 1]),
        ("z2_nerve", fixtures::cyclic_nerve(2, 3), vec![1, 0, 0]),
        ("point_and_circle", fixtures::point_and_circle(2), vec![2, 1]),
        ("torus_and_sphere", union, vec![2, 2, 2]),
    ];
    for (name, x, oracle) in &cases {
        for method in BettiMethod::ALL {
            let got = betti_table(x, method)?;
            ensure!(&got == oracle, "{name} {method:?}: {got:?}, expected {oracle:?}");
        }
    }
    Ok(format!("{} fixtures agree across exact rank, Hodge and normalized Hodge", cases.len()))
}

fn theorem_suite() -> Outcome {
    let mut defects = 0;
    for (name, x) in fixtures::catalogue() {
        if x.cutoff() < 2 {
            continue;
        }
        let depth = x.cutoff() - 2;
        for kind in DefectKind::ALL {
            for n in (0..=depth).filter(|&n| kind.degree_in_range(n, x.cutoff())) {
                for j in 0..=n {
                    for i in (0..=j).filter(|&i| kind.index_allowed(i, j)) {
                        // agreement of the counting formula with the operator arithmetic is checked inside
                        let d = defect(&x, kind, n, i, j).map_err(|e| format!("{name}: {e}"))?;
                        ensure!(kind != DefectKind::SS || d.is_zero, "{name}: SS defect ({n},{i},{j}) nonzero");
                        defects += 1;
                    }
                }
            }
        }
        for n in 0..=x.cutoff() {
            let rep = laplacian_decomposition_check(&x, n).map_err(|e| format!("{name}: {e}"))?;
            ensure!(rep.all_hold(), "{name} degree {n}: Laplacian decomposition fails");
        }
    }
    for (name, x) in [
        ("z2", fixtures::cyclic_nerve(2, 3)),
        ("z3", fixtures::cyclic_nerve(3, 3)),
        ("s3", fixtures::s3_nerve(3)),
    ] {
        let r = perfectness_class(&x, 1).map_err(|e| e.to_string())?;
        ensure!(r.class == PerfectnessClass::Perfect, "{name} nerve is {:?}", r.class);
    }
    let poset = perfectness_class(&fixtures::poset_nerve(3), 1).map_err(|e| e.to_string())?;
    ensure!(poset.class == PerfectnessClass::QuasiPerfect, "poset nerve is {:?}", poset.class);
    ensure!(
        poset.witnesses.iter().any(|w| w.kind == DefectKind::DD && w.i == w.j && w.nonzeros > 0),
        "no diagonal DD witness on the poset nerve"
    );
    // every complex is at least semi-perfect; proper subcomplexes lack fillers
    // and show a nonzero off-diagonal DD defect
    for (name, x, witness) in [
        ("delta2", fixtures::full_simplex(2, 4), false),
        ("delta3", fixtures::full_simplex(3, 4), false),
        ("boundary_delta3", fixtures::simplex_boundary(3, 4), true),
        ("two_triangles", fixtures::two_triangles(4), true),
    ] {
        let r = perfectness_class(&x, 2).map_err(|e| e.to_string())?;
        ensure!(r.class >= PerfectnessClass::SemiPerfect, "{name} is {:?}", r.class);
        ensure!(r.ds_zero && r.sd_zero, "{name}: mixed defects nonzero");
        if !witness {
            // a full simplex is the nerve of a linear order
            ensure!(r.class == PerfectnessClass::QuasiPerfect, "{name} is {:?}", r.class);
        } else {
            ensure!(r.class == PerfectnessClass::SemiPerfect, "{name} is {:?}", r.class);
            ensure!(
                r.witnesses.iter().any(|w| w.kind == DefectKind::DD && w.i < w.j && w.nonzeros > 0),
                "{name}: no off-diagonal DD witness"
            );
        }
    }
    Ok(format!("{defects} defects match the exchange identities; classes as predicted"))
}

fn degeneracy_laplacian() -> Outcome {
    let mut blocks = 0;
    for (name, x) in fixtures::catalogue() {
        for n in 0..x.cutoff() {
            let h = hodge_laplacian(&x, LaplacianKind::SS, n).map_err(|e| e.to_string())?.matrix;
            let diag = h.diag();
            ensure!(diag == degeneracy_laplacian_diagonal(&x, n), "{name} degree {n}: diagonal formula fails");
            ensure!(diag.iter().all(|&v| v >= 1), "{name} degree {n}: diagonal entry below 1");
            ensure!(exact::rank(&h) == x.count(n), "{name} degree {n}: nonzero kernel");
            blocks += 1;
        }
    }
    Ok(format!("{blocks} degeneracy Laplacians have the predicted diagonal and no kernel"))
}

fn hodge_machinery() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut reports = 0;
    for (name, x) in fixtures::catalogue() {
        for basis in [Basis::Full, Basis::Normalized] {
            for n in 0..=x.cutoff() {
                let r = hodge_resolution_check(&x, basis, n).map_err(|e| format!("{name}: {e}"))?;
                ensure!(r.passed(), "{name} {basis:?} degree {n}: {r:?}");
                worst = worst.max(r.identity_residual);
                reports += 1;
            }
        }
        let chain = chain_equivalence_check(&x, x.cutoff() - 1).map_err(|e| format!("{name}: {e}"))?;
        ensure!(chain.all_hold(), "{name}: chain equivalence fails");
    }
    Ok(format!("{reports} resolutions, worst identity residual {worst:.1e}; chain equivalences exact"))
}

fn grover() -> Outcome {
    let mut runs = 0;
    for (name, x) in fixtures::catalogue() {
        for n in 0..=x.cutoff() {
            let nondeg = x.nondegenerate(n).len();
            if nondeg == 0 || x.count(n) > 64 * nondeg {
                continue;
            }
            let r = grover_project(&x, n, None).map_err(|e| format!("{name} degree {n}: {e}"))?;
            let rho = x.count(n) as f64 / nondeg as f64;
            let theta = 2.0 * (1.0 / rho.sqrt()).asin();
            let p = (std::f64::consts::FRAC_PI_4 * rho.sqrt()).floor();
            let analytic = ((2.0 * p + 1.0) * theta / 2.0).sin().powi(2);
            ensure!(
                (r.success_probability - analytic).abs() < 1e-10,
                "{name} degree {n}: {} vs {analytic}",
                r.success_probability
            );
            runs += 1;
        }
    }
    let quarter = grover_project(&fixtures::cyclic_nerve(2, 3), 2, None).map_err(|e| e.to_string())?;
    ensure!(quarter.ratio == 4.0 && quarter.iterations == 1, "ρ = 4 case: {quarter:?}");
    ensure!((quarter.success_probability - 1.0).abs() < 1e-10, "ρ = 4 case reaches {}", quarter.success_probability);
    Ok(format!("{runs} runs match sin²((2p+1)θ/2); ρ = 4 succeeds with certainty after one step"))
}

fn counting() -> Outcome {
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    for (name, x) in fixtures::catalogue() {
        for n in 0..=x.cutoff() {
            let nondeg = x.nondegenerate(n).len();
            if nondeg == 0 {
                continue;
            }
            let r = quantum_count(&x, n, 6).map_err(|e| format!("{name} degree {n}: {e}"))?;
            let rho = x.count(n) as f64 / nondeg as f64;
            let exact_phase = (1.0 / rho.sqrt()).asin() / std::f64::consts::PI;
            let bins = (r.phase_estimate - exact_phase).abs() * 64.0;
            ensure!(bins <= 1.0, "{name} degree {n}: off by {bins:.3} bins");
            worst = worst.max(bins);
            runs += 1;
        }
    }
    Ok(format!("{runs} runs within one bin at 6 bits (worst {worst:.3})"))
}

fn qpe() -> Outcome {
    let cfg = QpeConfig::new(8, 10_000, 42);
    let mut lines = Vec::new();
    for (name, x, oracle) in [("torus", fixtures::torus(2), 2), ("z2_nerve", fixtures::cyclic_nerve(2, 2), 0)] {
        let out = qpe_betti(&x, 1, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let r = &out.report;
        let fraction = oracle as f64 / r.nondegenerate as f64;
        ensure!(
            (r.p_zero - fraction).abs() <= r.leakage_bound + 1e-12,
            "{name}: P(0) = {} vs {fraction} with bound {}",
            r.p_zero,
            r.leakage_bound
        );
        ensure!(r.betti_estimate == oracle, "{name}: estimate {} vs {oracle}", r.betti_estimate);
        if let Some(res) = r.kernel_residual {
            ensure!(res < 1e-8, "{name}: post-measurement residual {res:e}");
        }
        ensure!(oracle == 0 || r.kernel_residual.is_some(), "{name}: no post-measurement state");
        lines.push(format!("{name} P(0)={:.6} β̂={}", r.p_zero, r.betti_estimate));
    }
    Ok(lines.join(", "))
}

fn circuits() -> Outcome {
    let mut built = Vec::new();
    for order in [2, 3] {
        let x = fixtures::cyclic_nerve(order, 2);
        let grp = attach_group_structure(&x).map_err(|e| e.to_string())?;
        let (pairs, mu) = multiplication_morphism(&x, &grp).map_err(|e| e.to_string())?;
        built.push((format!("Z{order} multiplication"), circuit_from_morphism(&mu, &pairs, &x, &grp)));
    }
    let (z4, z2) = (FiniteGroupTable::cyclic(4).unwrap(), FiniteGroupTable::cyclic(2).unwrap());
    let (x, y) = (fixtures::cyclic_nerve(4, 2), fixtures::cyclic_nerve(2, 2));
    let phi = SimplicialMorphismTable::from_group_homomorphism(&x, &y, &z4, &z2, &[0, 1, 0, 1]).unwrap();
    let grp = attach_group_structure(&y).map_err(|e| e.to_string())?;
    built.push(("Z4 → Z2 quotient".into(), circuit_from_morphism(&phi, &x, &y, &grp)));
    let mut worst: f64 = 0.0;
    for (name, result) in built {
        let (space, c) = result.map_err(|e| format!("{name}: {e}"))?;
        let report = validate_circuit(&space, &c).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "{name}: {:?}", report.violations.first());
        for n in 0..space.cutoff() {
            // fails unless U commutes exactly with the boundary, H_DD and Π
            let action = homology_action(&space, &c, n).map_err(|e| format!("{name} degree {n}: {e}"))?;
            let residual = action.unitarity_residual();
            ensure!(residual < 1e-10, "{name} degree {n}: unitarity residual {residual:e}");
            worst = worst.max(residual);
        }
    }
    Ok(format!("3 circuits validate; exact commutation; worst unitarity residual {worst:.1e}"))
}

fn encodings() -> Outcome {
    let nerve = nerve_register_encoding(&FiniteGroupTable::cyclic(2).unwrap(), 3, 1, 2).map_err(|e| e.to_string())?;
    let complex = complex_register_encoding(&OrderedComplexTable::full(3).unwrap(), 3, 3).map_err(|e| e.to_string())?;
    let mut maps = 0;
    for (name, table) in [("Z2 nerve", &nerve), ("d=2 complex", &complex)] {
        let check = table.verify().map_err(|e| format!("{name}: {e}"))?;
        ensure!(check.passed(), "{name}: {check:?}");
        ensure!(
            check.faces_checked == check.faces_agreeing && check.degeneracies_checked == check.degeneracies_agreeing,
            "{name}: bit-level maps disagree"
        );
        maps += check.faces_checked + check.degeneracies_checked;
    }
    // κ = min{l : Σ_n |X_n| ≤ 2^l}: 15 simplices need 4 bits, 34 need 6
    let k_nerve = census(&fixtures::cyclic_nerve(2, 3)).map_err(|e| e.to_string())?.kappa;
    let k_complex = census(&fixtures::full_simplex(2, 3)).map_err(|e| e.to_string())?.kappa;
    ensure!(k_nerve == 4, "κ for the Z2 nerve is {k_nerve}");
    ensure!(k_complex == 6, "κ for the d=2 complex is {k_complex}");
    Ok(format!("{maps} bit-level maps agree with the tables; κ = (4, 6)"))
}

fn determinism() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let spec = dir.join("acceptance_cylinder.json");
    std::fs::write(
        &spec,
        r#"{"kind":"product","truncation":2,"factors":[
            {"kind":"ordered_complex","vertex_count":3,"preset":"boundary"},
            {"kind":"discrete","set_size":1}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let run = |extra_env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sqhom"));
        cmd.args(["qsim", "qpe"]).arg(&spec).args(["--shots", "2000"]);
        cmd.env_remove("SQHOM_SEED");
        match extra_env {
            Some(v) => cmd.env("SQHOM_SEED", v),
            None => cmd.args(["--seed", "42"]),
        };
        cmd.output().map_err(|e| e.to_string())
    };
    let a = run(None)?;
    let b = run(None)?;
    let c = run(Some("42"))?;
    ensure!(a.status.success(), "exit status {:?}: {}", a.status, String::from_utf8_lossy(&a.stdout));
    ensure!(a.stdout == b.stdout, "two runs with --seed 42 differ");
    ensure!(a.stdout == c.stdout, "SQHOM_SEED=42 differs from --seed 42");
    Ok(format!("3 runs, {} identical bytes each", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("census exactness", census_exactness),
        ("Eilenberg–Zilber recombination", ez_recombination),
        ("Betti cross-method agreement", betti_agreement),
        ("defect theorem suite", theorem_suite),
        ("degeneracy Laplacian triviality", degeneracy_laplacian),
        ("Hodge machinery", hodge_machinery),
        ("Grover success probability", grover),
        ("quantum counting", counting),
        ("phase-estimation Betti numbers", qpe),
        ("simplicial circuits", circuits),
        ("register encodings", encodings),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {reason}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
