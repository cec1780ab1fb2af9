//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use uqsu3::branching::{
    branch, c1_on_kernel, degenerate_demo, dual_q_krawtchouk_2phi1, dual_q_krawtchouk_3phi2,
    dual_q_krawtchouk_r, fundamental_eigenspaces, highest_weight_vector, kappa_exponent,
    kernel_gamma, krawtchouk_c, tridiagonal_c1, verify_kernel, verify_tridiagonal,
};
use uqsu3::coideal::{
    abstract_irrep, coideal_matrices, compare_fundamental_c1, unitarizable_norms,
    unitarizable_norms_product, CoidealParams,
};
use uqsu3::exactq::QScalar;
use uqsu3::linalg::{rank_exact, QMatrix, QVector};
use uqsu3::report::Report;
use uqsu3::uqsl3rep::{
    oracle_gram, verify_defining_relations, verify_lemma_relations, verify_norm_positivity,
    RepSpace, Weight,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(e: i64) -> QScalar {
    QScalar::q_pow(e)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn from_report(what: &str, r: &Report) -> Outcome {
    match r.first_failure() {
        None => Ok(format!("{} ({} checks)", what, r.len())),
        Some(c) => Err(format!("{}: {}: {}", what, c.name, c.detail)),
    }
}

fn merge_all(reports: Vec<(String, Report)>) -> Report {
    let mut all = Report::new();
    for (name, r) in reports {
        all.merge_prefixed(&name, r);
    }
    all
}

fn defining_relations() -> Outcome {
    let reports = Weight::all_up_to_sum(6)
        .par_iter()
        .map(|w| (w.to_string(), verify_defining_relations(&RepSpace::new(*w))))
        .collect();
    from_report("all lambda1 + lambda2 <= 6", &merge_all(reports))
}

fn norm_formula() -> Outcome {
    let points = [rat(1, 2), rat(1, 3)];
    let reports = Weight::all_in_box(3)
        .par_iter()
        .map(|w| {
            let rep = RepSpace::new(*w);
            let (g, mut r) = oracle_gram(&rep);
            r.matrices_equal("adjoint Gram = diag(H)", &g, &rep.norm_matrix());
            r.merge(verify_norm_positivity(&rep, &points));
            (w.to_string(), r)
        })
        .collect();
    from_report("lambda1, lambda2 <= 3", &merge_all(reports))
}

fn lemma_suite() -> Outcome {
    let reports = Weight::all_in_box(3)
        .par_iter()
        .map(|w| {
            (
                w.to_string(),
                verify_lemma_relations(&RepSpace::new(*w), -3..=3),
            )
        })
        .collect();
    from_report("lambda1, lambda2 <= 3, a in [-3, 3]", &merge_all(reports))
}

fn fundamental_example() -> Outcome {
    let rep = RepSpace::new(Weight::new(1, 0));
    let mut r = Report::new();
    for p in [
        CoidealParams::default(),
        CoidealParams::new(QScalar::one(), QScalar::one()).unwrap(),
        CoidealParams::new(q(3), QScalar::from_int(-2)).unwrap(),
    ] {
        r.merge_prefixed(
            &format!("c = ({}, {})", p.c1(), p.c2()),
            compare_fundamental_c1(&coideal_matrices(&rep, &p)),
        );
    }
    let p = CoidealParams::default();
    let generic = fundamental_eigenspaces(&p);
    r.merge(generic.report.clone());
    r.push(
        "defaults: eigenspace dimensions sum to 3",
        generic.total() == 3,
        format!("{:?}", generic.nullities),
    );
    let rho1 = QVector::from_dense(vec![p.c1().clone(), QScalar::zero(), QScalar::one()]);
    let psi00 = highest_weight_vector(&rep, &p, 0, 0).map_err(|e| e.to_string())?;
    r.push(
        "psi^0_0 proportional to rho1",
        psi00.coords_ambient.ratio_to(&rho1).is_some(),
        "",
    );
    let psi10 = highest_weight_vector(&rep, &p, 1, 0).map_err(|e| e.to_string())?;
    r.push(
        "psi^1_0 proportional to rho2",
        psi10
            .coords_ambient
            .ratio_to(&QVector::unit(3, 1))
            .is_some(),
        "",
    );
    for c1 in [QScalar::one(), q(2)] {
        let dr = degenerate_demo(&c1).map_err(|e| e.to_string())?;
        r.merge_prefixed(&format!("degenerate c1 = {}, c2 = -q c1", c1), dr);
    }
    from_report("lambda = (1, 0)", &r)
}

fn branching_2_5() -> Outcome {
    let rep = RepSpace::new(Weight::new(2, 5));
    let res = branch(&rep, &CoidealParams::default()).map_err(|e| e.to_string())?;
    let mut r = res.report.clone();
    let mut labels: Vec<(i64, u32)> = res
        .components
        .iter()
        .map(|c| (c.kappa_exponent, c.n))
        .collect();
    labels.sort();
    let mut want: Vec<(i64, u32)> = (0..=2)
        .flat_map(|i| (0..=5).map(move |x| (-3 - 3 * i as i64, i + x)))
        .collect();
    want.sort();
    r.push(
        "18 components labelled (q^(-3-3i), i+x)",
        labels == want,
        format!("{:?}", labels),
    );
    let dims: usize = res.components.iter().map(|c| c.dim()).sum();
    r.push("dimensions sum to 81", dims == 81, dims.to_string());
    let all: Vec<QVector> = res
        .components
        .iter()
        .flat_map(|c| c.module.iter().cloned())
        .collect();
    let exact = rank_exact(&QMatrix::from_columns(81, &all));
    r.push(
        "exact rank of the 81 module vectors is 81",
        exact == 81,
        exact.to_string(),
    );
    from_report("lambda = (2, 5), c = (q^2, q)", &r)
}

fn kernel_dimensions() -> Outcome {
    let p = CoidealParams::default();
    let reports = Weight::all_up_to_sum(6)
        .par_iter()
        .map(|w| {
            let rep = RepSpace::new(*w);
            let ops = coideal_matrices(&rep, &p);
            let mut r = Report::new();
            for i in 0..=w.lambda1 {
                match kernel_gamma(&rep, &p, i) {
                    Ok(kb) => r.merge_prefixed(&format!("i = {}", i), verify_kernel(&ops, &kb)),
                    Err(e) => r.push(format!("i = {}", i), false, e.to_string()),
                }
            }
            (w.to_string(), r)
        })
        .collect();
    from_report("all lambda1 + lambda2 <= 6", &merge_all(reports))
}

fn tridiagonal_oracle() -> Outcome {
    let p = CoidealParams::default();
    let reports = [Weight::new(2, 2), Weight::new(2, 5), Weight::new(3, 1)]
        .par_iter()
        .map(|w| {
            let rep = RepSpace::new(*w);
            let ops = coideal_matrices(&rep, &p);
            let mut r = Report::new();
            for i in 0..=w.lambda1 {
                let kb = kernel_gamma(&rep, &p, i).expect("kernel");
                let td = tridiagonal_c1(*w, &p, i);
                r.merge_prefixed(
                    &format!("i = {}", i),
                    verify_tridiagonal(&ops, &kb, &td, &c1_on_kernel(&ops, &kb)),
                );
            }
            (w.to_string(), r)
        })
        .collect();
    from_report("(2, 2), (2, 5), (3, 1)", &merge_all(reports))
}

fn krawtchouk_consistency() -> Outcome {
    let p = CoidealParams::default();
    let mut cs: Vec<QScalar> = Vec::new();
    for l1 in 0..=6u32 {
        for i in 0..=l1 {
            let c = krawtchouk_c(Weight::new(l1, 0), &p, i);
            if !cs.contains(&c) {
                cs.push(c);
            }
        }
    }
    let mut compared = 0usize;
    let mut skipped = 0usize;
    for c in &cs {
        for n in 0..=6u32 {
            for x in 0..=n {
                for l in 0..=n {
                    let r = dual_q_krawtchouk_r(l, x, c, n);
                    if r != dual_q_krawtchouk_3phi2(l, x, c, n) {
                        return Err(format!(
                            "3phi2 route differs at c = {}, N = {}, l = {}, x = {}",
                            c, n, l, x
                        ));
                    }
                    match dual_q_krawtchouk_2phi1(l, x, c, n) {
                        Some(h) if h != r => {
                            return Err(format!(
                                "2phi1 route differs at c = {}, N = {}, l = {}, x = {}",
                                c, n, l, x
                            ))
                        }
                        Some(_) => compared += 1,
                        None => skipped += 1,
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} c values, {} 2phi1 comparisons, {} undefined 2phi1 points covered by 3phi2",
        cs.len(),
        compared,
        skipped
    ))
}

fn unitarizability() -> Outcome {
    let p = CoidealParams::default();
    let half = rat(1, 2);
    let mut labels: Vec<(i64, u32)> = Vec::new();
    for w in Weight::all_up_to_sum(5) {
        for i in 0..=w.lambda1 {
            for x in 0..=w.lambda2 {
                if i + x <= 5 {
                    labels.push((kappa_exponent(w, i), i + x));
                }
            }
        }
    }
    for e in -20..=6 {
        for n in 0..=5 {
            labels.push((e, n));
        }
    }
    labels.sort();
    labels.dedup();
    let mut count = 0;
    for (e, n) in &labels {
        let norms = unitarizable_norms(&q(*e), *n, &p).map_err(|err| err.to_string())?;
        let irrep = abstract_irrep(&q(*e), *n, &p).map_err(|err| err.to_string())?;
        if norms != unitarizable_norms_product(&irrep) {
            return Err(format!(
                "closed form and product route differ at kappa = q^{}, n = {}",
                e, n
            ));
        }
        for (k, h) in norms.iter().enumerate() {
            let v = h.evaluate_at(&half).map_err(|err| err.to_string())?;
            if v <= BigRational::zero() {
                return Err(format!(
                    "<w_{0}, w_{0}> = {1} at kappa = q^{2}, n = {3}",
                    k, v, e, n
                ));
            }
            count += 1;
        }
    }
    Ok(format!(
        "{} norms positive at q0 = 1/2 over {} modules",
        count,
        labels.len()
    ))
}

fn genericity_gate() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_uqsu3");
    let mut runs = 0;
    for w in [
        Weight::new(0, 0),
        Weight::new(1, 0),
        Weight::new(0, 1),
        Weight::new(1, 1),
    ] {
        let bound = 2 * (w.lambda1 + w.lambda2) as i64 + 1;
        for s in -4..=bound + 3 {
            for (sign, c2) in [(-1, format!("-q^({})", s)), (1, format!("q^({})", s))] {
                let out = Command::new(bin)
                    .args([
                        "branch",
                        "--lambda",
                        &w.lambda1.to_string(),
                        &w.lambda2.to_string(),
                    ])
                    .args(["--c1", "1", &format!("--c2={}", c2), "--format", "csv"])
                    .output()
                    .map_err(|e| e.to_string())?;
                runs += 1;
                let code = out.status.code().unwrap_or(-1);
                let refuse = sign < 0 && s <= bound;
                let stderr = String::from_utf8_lossy(&out.stderr);
                if refuse {
                    if code != 3 || !stderr.contains(&format!("s = {} ", s)) {
                        return Err(format!(
                            "{} c2 = {}: exit {} stderr {:?}",
                            w, c2, code, stderr
                        ));
                    }
                } else if code != 0 {
                    return Err(format!(
                        "{} c2 = {}: expected success, exit {} stderr {:?}",
                        w, c2, code, stderr
                    ));
                }
            }
        }
    }
    Ok(format!("{} CLI runs", runs))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 defining relations", defining_relations),
        ("2 norm formula vs adjoint oracle", norm_formula),
        ("3 lemma suite", lemma_suite),
        ("4 fundamental worked example", fundamental_example),
        ("5 branching of (2, 5)", branching_2_5),
        ("6 kernel dimensions", kernel_dimensions),
        ("7 tridiagonal oracle", tridiagonal_oracle),
        ("8 dual q-Krawtchouk consistency", krawtchouk_consistency),
        ("9 unitarizability", unitarizability),
        ("10 genericity gate", genericity_gate),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS [{:.1}s] {}", name, secs, detail),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL [{:.1}s] {}", name, secs, detail);
            }
        }
    }
    if failed > 0 {
        println!("{} of 10 criteria failed", failed);
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
