//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS] criterion N` line on success (run with `--nocapture` to see them
//! alongside the harness output). Every gate is exact: a criterion passes
//! only with zero violations at the stated scope.
//!
//! Run with `cargo test --test acceptance`.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kanalg::analysis::{
    check_irreducible, check_isomorphic, classify, special_elements, Irreducibility,
};
use kanalg::bimodule::{
    build_v_alpha, check_action_table, check_commutator_relations, check_jordan_bimodule,
    check_power_relations, check_sandwich_relations, regular_bimodule, BimoduleAction, VAlphaSpec,
};
use kanalg::grassmann::Grassmann;
use kanalg::kantor::{build_kan, grassmann_poisson};
use kanalg::scalar::{FieldContext, Scalar};
use kanalg::superalg::StructureTable;
use kanalg::tensor::{
    embed_v_alpha, grading_derivation, jordan_bracket_tensor, TruncatedPolyAlgebra,
};

const LIMIT: usize = 10;

fn fields() -> Vec<(&'static str, FieldContext)> {
    vec![
        ("Q", FieldContext::rational()),
        ("F5", FieldContext::prime(5).unwrap()),
        ("F7", FieldContext::prime(7).unwrap()),
    ]
}

fn sampled_alphas(ctx: &FieldContext) -> Vec<(String, Scalar)> {
    vec![
        ("0".into(), ctx.zero()),
        ("1".into(), ctx.one()),
        ("-1".into(), ctx.from_i64(-1)),
        ("2".into(), ctx.from_i64(2)),
        ("1/2".into(), ctx.from_ratio(1, 2).unwrap()),
    ]
}

fn valpha(kan: &Arc<StructureTable>, n: usize, alpha: &Scalar, parity: u8) -> BimoduleAction {
    build_v_alpha(
        kan,
        &VAlphaSpec {
            n,
            alpha: alpha.clone(),
            v_parity: parity,
        },
    )
    .expect("family module builds")
}

#[test]
fn criterion_1_kan_validity() {
    for (name, ctx) in fields() {
        for n in 2..=4 {
            let start = Instant::now();
            let kan = build_kan(n, ctx).unwrap();
            assert_eq!(kan.dim(), 1 << (n + 1));
            let sc = kan.check_supercommutative(LIMIT);
            assert!(
                sc.passed(),
                "Kan({n})/{name} supercommutativity: {:?}",
                sc.violations
            );
            let jordan = kan.check_jordan_superidentity(LIMIT);
            assert!(
                jordan.passed(),
                "Kan({n})/{name} superidentity: {:?}",
                jordan.violations
            );
            println!(
                "  Kan({n})/{name}: dim {} verified in {} ms",
                kan.dim(),
                start.elapsed().as_millis()
            );
        }
    }
    println!("[PASS] criterion 1: Kan(n) validity for n=2..4 over Q, F5, F7");
}

#[test]
fn criterion_2_kantor_equivalence() {
    // the Grassmann bracket satisfies the doubling conditions, including the
    // quadratic condition over F_3 where it is independent
    for ctx in [FieldContext::rational(), FieldContext::prime(3).unwrap()] {
        for n in 2..=4 {
            let gr = Grassmann::new(n, ctx).unwrap();
            let alg = grassmann_poisson(&gr).unwrap();
            let report = alg.check_kantor_conditions(LIMIT);
            assert!(
                report.passed(),
                "conditions fail for G_{n} char {}: {:?}",
                ctx.characteristic(),
                report.violations
            );
        }
    }

    // 20 seeded single-entry mutations, each detected by the condition
    // checker or by the double's supercommutativity/superidentity checkers
    let ctx = FieldContext::rational();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut detected = 0;
    for case in 0..20 {
        let n = if case % 2 == 0 { 2 } else { 3 };
        let gr = Grassmann::new(n, ctx).unwrap();
        let mut alg = grassmann_poisson(&gr).unwrap();
        let dim = gr.dim();
        // draw until the mutation actually changes the entry
        let (i, j, entry) = loop {
            let i = rng.gen_range(0..dim);
            let j = rng.gen_range(0..dim);
            let old = alg.bracket(i, j).clone();
            let parity = (alg.dot().parity(i) + alg.dot().parity(j)) % 2;
            let candidate = match rng.gen_range(0..3u8) {
                0 if !old.is_empty() => {
                    // flip the sign of the first component
                    let mut new = old.clone();
                    new[0].1 = -new[0].1.clone();
                    new
                }
                1 if !old.is_empty() => {
                    // rescale by 2
                    old.iter().map(|(k, c)| (*k, c.scale_i64(2))).collect()
                }
                _ => {
                    // add a parity-compatible basis element
                    let targets: Vec<usize> = (0..dim)
                        .filter(|&k| alg.dot().parity(k) == parity)
                        .collect();
                    let k = targets[rng.gen_range(0..targets.len())];
                    let mut new = old.clone();
                    if let Some(pos) = new.iter().position(|(t, _)| *t == k) {
                        new[pos].1 = &new[pos].1 + &ctx.one();
                        new.retain(|(_, c)| !c.is_zero());
                    } else {
                        new.push((k, ctx.one()));
                        new.sort_by_key(|(t, _)| *t);
                    }
                    new
                }
            };
            if candidate != old {
                break (i, j, candidate);
            }
        };
        alg.set_bracket_entry(i, j, entry);
        let cond_caught = !alg.check_kantor_conditions(1).passed();
        let double_caught = {
            let double = alg.kantor_double().unwrap();
            !double.check_supercommutative(1).passed()
                || !double.check_jordan_superidentity(1).passed()
        };
        assert!(
            cond_caught || double_caught,
            "mutation {case} at ({i},{j}) on G_{n} went undetected"
        );
        detected += 1;
    }
    assert_eq!(detected, 20);
    println!("[PASS] criterion 2: doubling conditions for G_2..G_4 (incl. F_3) and 20/20 mutations detected");
}

#[test]
fn criterion_3_v_alpha_is_jordan() {
    let ctx = FieldContext::rational();
    for n in 2..=3 {
        let kan = Arc::new(build_kan(n, ctx).unwrap());
        for (label, alpha) in sampled_alphas(&ctx) {
            for parity in [0u8, 1] {
                let v = valpha(&kan, n, &alpha, parity);
                let report = check_jordan_bimodule(&v, LIMIT).unwrap();
                assert!(
                    report.passed(),
                    "V({label}) n={n} parity={parity}: {:?}",
                    report.violations
                );
            }
        }
        // symbolic parameter: all residual coefficient polynomials vanish
        let sctx = FieldContext::rational().with_symbolic();
        let skan = Arc::new(build_kan(n, sctx).unwrap());
        let al = sctx.alpha().unwrap();
        for parity in [0u8, 1] {
            let start = Instant::now();
            let v = valpha(&skan, n, &al, parity);
            let report = check_jordan_bimodule(&v, LIMIT).unwrap();
            assert!(
                report.passed(),
                "symbolic V(al) n={n} parity={parity}: {:?}",
                report.violations
            );
            println!(
                "  symbolic n={n} parity={parity} verified in {} ms",
                start.elapsed().as_millis()
            );
        }
    }
    println!("[PASS] criterion 3: V(alpha) is Jordan for n=2,3, both parities, 5 concrete alphas and symbolic alpha");
}

#[test]
fn criterion_4_dual_construction_oracle() {
    let ctx = FieldContext::rational();
    for n in 2..=3 {
        for a in [0i64, 1, -1, 2] {
            let alpha = ctx.from_i64(a);
            // embed_v_alpha verifies the full equivariance table internally
            // and errors on any mismatch
            let oracle = embed_v_alpha(n, &alpha, ctx);
            assert!(oracle.is_ok(), "n={n} alpha={a}: {}", oracle.err().unwrap());
            let oracle = oracle.unwrap();
            assert_eq!(oracle.v_alpha.dim_v(), 1 << (n + 1));
            assert_eq!(oracle.module.dim_v(), 1 << (n + 1));
        }
    }
    println!("[PASS] criterion 4: tensor-embedding equivariance equals the table construction for n=2,3 and alpha in {{0,1,-1,2}}");
}

#[test]
fn criterion_5_relation_suites() {
    let ctx = FieldContext::rational();
    for n in 2..=3 {
        let kan = Arc::new(build_kan(n, ctx).unwrap());
        for (label, alpha) in sampled_alphas(&ctx) {
            for parity in [0u8, 1] {
                let v = valpha(&kan, n, &alpha, parity);
                let r = check_commutator_relations(&v).unwrap();
                assert!(
                    r.passed(),
                    "commutators V({label}) n={n}: {:?}",
                    r.violations
                );
                let r = check_power_relations(&v, Some(&alpha)).unwrap();
                assert!(r.passed(), "powers V({label}) n={n}: {:?}", r.violations);
                let r = check_sandwich_relations(&v).unwrap();
                assert!(r.passed(), "sandwich V({label}) n={n}: {:?}", r.violations);
                // vanishing and action values, generated from the special
                // vector by definition words
                let kernel = special_elements(&v).unwrap();
                assert_eq!(
                    kernel.len(),
                    1,
                    "annihilator of V({label}) n={n} parity={parity} is not a line"
                );
                let r = check_action_table(&v, &kernel[0], &alpha).unwrap();
                assert!(
                    r.passed(),
                    "action table V({label}) n={n}: {:?}",
                    r.violations
                );
            }
        }
    }
    println!("[PASS] criterion 5: commutator/power/sandwich relations, vanishing and action tables, and 1-dimensional annihilators on V(alpha) for n=2,3");
}

fn criterion_6_body(ctx: FieldContext, tag: &str) {
    let alphas = if ctx.characteristic() == 0 {
        sampled_alphas(&ctx)
    } else {
        // distinct residues only, so the separation test is meaningful
        let mut seen = Vec::new();
        for (label, a) in sampled_alphas(&ctx) {
            if !seen.iter().any(|(_, b)| *b == a) {
                seen.push((label, a));
            }
        }
        seen
    };
    for n in 2..=3 {
        let kan = Arc::new(build_kan(n, ctx).unwrap());
        for (label, alpha) in &alphas {
            for parity in [0u8, 1] {
                let v = valpha(&kan, n, alpha, parity);
                let c = classify(&v).unwrap();
                assert_eq!(c.v_parity, parity, "parity round-trip V({label}) n={n}");
                assert_eq!(c.alpha, *alpha, "alpha round-trip V({label}) n={n}");
            }
        }
        // separation in the parameter
        for (la, a) in &alphas {
            for (lb, b) in &alphas {
                if a == b {
                    continue;
                }
                let va = valpha(&kan, n, a, 0);
                let vb = valpha(&kan, n, b, 0);
                let iso = check_isomorphic(&va, &vb).unwrap();
                assert!(!iso.isomorphic, "V({la}) and V({lb}) must differ (n={n})");
            }
        }
        // separation from the opposite
        let v = valpha(&kan, n, &alphas[1].1, 0);
        assert!(!check_isomorphic(&v, &v.opposite()).unwrap().isomorphic);
        // the regular bimodule is the alpha = 0 member, with an explicit
        // verified equivariant map
        let reg = regular_bimodule(&kan);
        let c = classify(&reg).unwrap();
        assert!(c.alpha.is_zero());
        let v0 = valpha(&kan, n, &ctx.zero(), c.v_parity);
        let iso = check_isomorphic(&v0, &reg).unwrap();
        assert!(iso.isomorphic, "V(0) vs regular (n={n})");
        assert!(iso.map_rows.is_some());
    }
    println!("[PASS] criterion 6{tag}: classification round-trips, parameter/parity separation, and V(0) = regular with a verified map");
}

#[test]
fn criterion_6_classification_round_trip() {
    criterion_6_body(FieldContext::rational(), "");
}

#[test]
fn criterion_7_irreducibility_certificates() {
    let ctx = FieldContext::rational();
    for n in 2..=3 {
        let kan = Arc::new(build_kan(n, ctx).unwrap());
        for (label, alpha) in sampled_alphas(&ctx) {
            let v = valpha(&kan, n, &alpha, 0);
            match check_irreducible(&v).unwrap() {
                Irreducibility::Irreducible(cert) => {
                    assert_eq!(cert.alpha, alpha);
                    // one word per family vector, each with a nonzero scalar
                    assert_eq!(cert.words.len(), 1 << (n + 1));
                    assert!(cert.words.iter().all(|w| !w.scalar.is_zero()));
                }
                Irreducibility::Reducible { .. } => {
                    panic!("V({label}) n={n} reported reducible")
                }
            }
        }
        // a direct sum is reducible, with a proper invariant subspace
        let v = valpha(&kan, n, &ctx.one(), 0);
        let sum = v.direct_sum(&v).unwrap();
        match check_irreducible(&sum).unwrap() {
            Irreducibility::Reducible { subspace_basis } => {
                assert!(!subspace_basis.is_empty());
                assert!(subspace_basis.len() < sum.dim_v());
            }
            Irreducibility::Irreducible(_) => panic!("direct sum reported irreducible (n={n})"),
        }
    }
    println!("[PASS] criterion 7: irreducibility certificates for V(alpha) n=2,3 (incl. alpha=0) and a reducibility certificate for the direct sum");
}

#[test]
fn criterion_8_tensor_bracket_at_desk_scale() {
    let ctx = FieldContext::rational();
    let gr = Grassmann::new(2, ctx).unwrap();
    let poisson = grassmann_poisson(&gr).unwrap();
    let e = grading_derivation(&gr);
    for a in [0i64, 1, -1, 2] {
        let start = Instant::now();
        let alpha = ctx.from_i64(a);
        let trunc = TruncatedPolyAlgebra::new(4, alpha).unwrap();
        let bracket = jordan_bracket_tensor(&poisson, &e, &trunc).unwrap();
        let cond = bracket.check_kantor_conditions(LIMIT);
        assert!(cond.passed(), "alpha={a} conditions: {:?}", cond.violations);
        let double = bracket.kantor_double().unwrap();
        assert_eq!(double.dim(), 32);
        let sc = double.check_supercommutative(LIMIT);
        assert!(
            sc.passed(),
            "alpha={a} supercommutativity: {:?}",
            sc.violations
        );
        let jordan = double.check_jordan_superidentity(LIMIT);
        assert!(
            jordan.passed(),
            "alpha={a} superidentity: {:?}",
            jordan.violations
        );
        println!(
            "  tensor double alpha={a}: dim 32 verified in {} ms",
            start.elapsed().as_millis()
        );
    }
    println!("[PASS] criterion 8: tensor bracket on G_2 (x) F[t]/(t^4) passes the doubling conditions and its dim-32 double is Jordan for alpha in {{0,1,-1,2}}");
}

#[test]
fn criterion_9_characteristic_three_coverage() {
    let ctx = FieldContext::prime(3).unwrap();

    // criterion 1 over F_3
    for n in 2..=4 {
        let kan = build_kan(n, ctx).unwrap();
        assert!(kan.check_supercommutative(LIMIT).passed());
        let report = kan.check_jordan_superidentity(LIMIT);
        assert!(report.passed(), "Kan({n})/F3: {:?}", report.violations);
    }

    // the quadratic doubling condition is exercised at char 3
    for n in 2..=4 {
        let gr = Grassmann::new(n, ctx).unwrap();
        let alg = grassmann_poisson(&gr).unwrap();
        assert!(alg.check_kantor_conditions(LIMIT).passed());
    }

    // criterion 3 over F_3 (1/2 = 2 there; distinct values only), plus the
    // symbolic parameter over F_3
    for n in 2..=3 {
        let kan = Arc::new(build_kan(n, ctx).unwrap());
        for a in [0i64, 1, 2] {
            let alpha = ctx.from_i64(a);
            for parity in [0u8, 1] {
                let v = valpha(&kan, n, &alpha, parity);
                let report = check_jordan_bimodule(&v, LIMIT).unwrap();
                assert!(report.passed(), "F3 V({a}) n={n}: {:?}", report.violations);
            }
        }
        let sctx = ctx.with_symbolic();
        let skan = Arc::new(build_kan(n, sctx).unwrap());
        let v = valpha(&skan, n, &sctx.alpha().unwrap(), 0);
        let report = check_jordan_bimodule(&v, LIMIT).unwrap();
        assert!(
            report.passed(),
            "F3 symbolic n={n}: {:?}",
            report.violations
        );
    }

    // criterion 6 over F_3
    criterion_6_body(ctx, " (F_3)");

    println!("[PASS] criterion 9: criteria 1, 3, 6 hold over F_3 with the char-3 quadratic condition enabled");
}
