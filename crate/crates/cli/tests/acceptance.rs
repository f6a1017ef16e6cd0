//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Runs with `cargo test -p hallforge-cli --test acceptance`.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use hallforge_core::checks::{self, CheckResult};
use hallforge_core::element::integer;
use hallforge_core::*;

struct Criterion {
    id: u32,
    title: &'static str,
    results: Vec<CheckResult>,
    secs: f64,
}

impl Criterion {
    fn passed(&self) -> bool {
        !self.results.is_empty() && self.results.iter().all(|r| r.passed)
    }
}

fn run(id: u32, title: &'static str, body: impl FnOnce() -> Vec<CheckResult>) -> Criterion {
    let start = Instant::now();
    let results = body();
    let secs = start.elapsed().as_secs_f64();
    for r in &results {
        eprintln!("    [{id}] {r}");
    }
    Criterion { id, title, results, secs }
}

fn ok(name: impl Into<String>, passed: bool, cases: u64, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed,
        cases,
        detail: detail.into(),
    }
}

fn catalog(n: usize, q: u32, bound: &[u32]) -> Arc<Catalog> {
    let field = PrimeField::new(q).unwrap();
    Arc::new(
        Catalog::build(&field, Arc::new(Quiver::linear(n)), &DimVector(bound.to_vec()), &Budget::default())
            .unwrap(),
    )
}

fn dims(v: &[u32]) -> DimVector {
    DimVector(v.to_vec())
}

/// Number of `k`-dimensional subspaces of `F_q^n`, by enumerating spanning tuples.
fn subspaces_by_enumeration(q: u64, n: u32, k: u32) -> u64 {
    // ordered bases of k-subspaces divided by |GL_k|
    let vectors = q.pow(n);
    let mut ordered = 1u64;
    let mut gl = 1u64;
    for i in 0..k {
        ordered *= vectors - q.pow(i);
        gl *= q.pow(k) - q.pow(i);
    }
    ordered / gl
}

/// The five worked constants, compared with independent counts.
fn worked_constants() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let a1 = catalog(1, 2, &[2]);
    let h1 = HallAlgebra::new(a1.clone());
    let k = a1.parse_label("(1)").unwrap();
    let k2 = a1.parse_label("2(1)").unwrap();
    let lines = subspaces_by_enumeration(2, 2, 1);
    let want = HallElement::from_terms(2, h1.digest(), [(k2, integer(lines))]);
    let got = h1.product_basis(&k, &k).unwrap();
    out.push(ok("A1: [k]*[k] = 3[k^2]", got == want && lines == 3, 1, got.display(|l| a1.render(l))));

    let a2 = catalog(2, 2, &[1, 1]);
    let h2 = HallAlgebra::new(a2.clone());
    let l = |s: &str| a2.parse_label(s).unwrap();
    let got = h2.product_basis(&l("(1,0)"), &l("(0,1)")).unwrap();
    let want = h2.basis(&l("(1,1)")).add(&h2.basis(&l("(0,1)+(1,0)"))).unwrap();
    out.push(ok("A2: [S1]*[S2] = [P] + [S1+S2]", got == want, 1, got.display(|x| a2.render(x))));
    let got = h2.product_basis(&l("(0,1)"), &l("(1,0)")).unwrap();
    let want = h2.basis(&l("(0,1)+(1,0)"));
    out.push(ok("A2: [S2]*[S1] = [S1+S2]", got == want, 1, got.display(|x| a2.render(x))));
    out
}

fn main() {
    let suite_start = Instant::now();
    let mut criteria = Vec::new();

    criteria.push(run(1, "Hall numbers: subcount = extcount", || {
        let mut out = Vec::new();
        for q in [2, 3] {
            out.push(checks::hall_number_agreement(&HallAlgebra::new(catalog(1, q, &[3]))));
            out.push(checks::hall_number_agreement(&HallAlgebra::new(catalog(2, q, &[2, 2]))));
        }
        out
    }));

    let a2_q2 = HallAlgebra::new(catalog(2, 2, &[2, 2]));
    let a1_q2_4 = HallAlgebra::new(catalog(1, 2, &[4]));
    criteria.push(run(2, "classical unit and associativity", || {
        vec![
            checks::classical_associativity(&a2_q2, &dims(&[2, 2])),
            checks::classical_associativity(&a1_q2_4, &dims(&[4])),
        ]
    }));
    criteria.push(run(3, "classical K0 grading", || {
        vec![
            checks::classical_grading(&a2_q2, &dims(&[2, 2])),
            checks::classical_grading(&a1_q2_4, &dims(&[4])),
        ]
    }));

    criteria.push(run(4, "filtration formula", || {
        let a2_33 = HallAlgebra::new(catalog(2, 2, &[3, 3]));
        let mut out = vec![checks::filtration_formula(&a2_33, 3)];
        let cat = catalog(1, 2, &[3]);
        let h = HallAlgebra::new(cat.clone());
        let k = cat.parse_label("(1)").unwrap();
        let k3 = cat.parse_label("3(1)").unwrap();
        // complete flags in F_q^3: (q^2+q+1)(q+1)
        let flags = (4 + 2 + 1) * (2 + 1);
        let want = HallElement::from_terms(2, h.digest(), [(k3, integer(flags))]);
        let got = h.multi_product_filtration(&[k.clone(), k.clone(), k]).unwrap();
        out.push(ok("A1: ([k],[k],[k]) -> 21[k^3]", got == want, 1, got.display(|l| cat.render(l))));
        out
    }));

    criteria.push(run(5, "worked structure constants", worked_constants));

    // Derived algebras shared by criteria 6 to 10.
    let mut limit_algebras = Vec::new();
    criteria.push(run(6, "classical limit and slot order", || {
        let mut out = Vec::new();
        let mut sub_first_failures = 0;
        for q in [2, 3] {
            for (n, bound) in [(2usize, vec![2u32, 2]), (1, vec![2])] {
                let cat = catalog(n, q, &bound);
                let h = HallAlgebra::new(cat.clone());
                let d = DerivedHallAlgebra::new(cat.clone()).unwrap();
                out.push(checks::classical_limit(&d, &h, &dims(&bound)));
                let other = DerivedHallAlgebra::with_slot_order(cat, SlotOrder::SubFirst).unwrap();
                let alt = checks::classical_limit(&other, &h, &dims(&bound));
                eprintln!("    [6] (alternative slot order, expected to fail on A2) {alt}");
                if !alt.passed {
                    sub_first_failures += 1;
                }
                limit_algebras.push(d);
            }
        }
        out.push(ok(
            "exactly one slot assignment reproduces the classical product",
            sub_first_failures > 0,
            4,
            format!("sub-first failed on {sub_first_failures} of 4 configurations"),
        ));
        out
    }));

    let assoc_a2 = DerivedHallAlgebra::new(catalog(2, 2, &[1, 1])).unwrap();
    let assoc_a1 = DerivedHallAlgebra::new(catalog(1, 2, &[2])).unwrap();
    criteria.push(run(7, "derived unit and associativity", || {
        vec![
            checks::derived_associativity(&assoc_a2, (-1, 1), &dims(&[1, 1])),
            checks::derived_associativity(&assoc_a1, (-1, 1), &dims(&[2])),
        ]
    }));

    criteria.push(run(8, "local finiteness of pi tables", || {
        let mut out: Vec<CheckResult> = limit_algebras
            .iter()
            .map(|d| {
                let bound = d.catalog().bound().clone();
                checks::local_finiteness(d, (0, 0), &bound)
            })
            .collect();
        out.push(checks::local_finiteness(&assoc_a2, (-1, 1), &dims(&[1, 1])));
        out.push(checks::local_finiteness(&assoc_a1, (-1, 1), &dims(&[2])));
        out
    }));

    criteria.push(run(9, "Serre-type relation on A2", || {
        let mut out = Vec::new();
        for q in [2, 3] {
            let cat = catalog(2, q, &[2, 2]);
            out.push(checks::ringel_relation(&HallAlgebra::new(cat.clone())));
            out.push(checks::ringel_relation_derived(&DerivedHallAlgebra::new(cat).unwrap()));
        }
        out
    }));

    criteria.push(run(10, "K0 grading and cone additivity", || {
        limit_algebras
            .iter()
            .chain([&assoc_a2, &assoc_a1])
            .map(checks::k0_grading)
            .collect()
    }));

    criteria.push(run(11, "determinism and cache soundness", cache_determinism));

    println!();
    for c in &criteria {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let cases: u64 = c.results.iter().map(|r| r.cases).sum();
        println!("{status} criterion {:>2}: {} ({cases} cases, {:.1}s)", c.id, c.title, c.secs);
        for r in c.results.iter().filter(|r| !r.passed) {
            println!("       {r}");
        }
    }
    let failed = criteria.iter().filter(|c| !c.passed()).count();
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        suite_start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

/// `table` cold, warm, and after wiping the cache directory, through the binary.
fn cache_determinism() -> Vec<CheckResult> {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let table = |mode: &str, degree: &str, bound: &str, amp: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hallforge"))
            .args(["--quiver", "A2", "--q", "2", "--bound", bound, "--amp", amp, "--cache"])
            .arg(&cache)
            .args(["table", degree, "--mode", mode])
            .output()
            .unwrap();
        (out.status.success(), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
    };
    let mut out = Vec::new();
    for (mode, degree, bound, amp) in [("classical", "2,1", "2,2", "0,0"), ("derived", "0,0", "1,1", "-1,0")] {
        let cold = table(mode, degree, bound, amp);
        let warm = table(mode, degree, bound, amp);
        let entries = std::fs::read_dir(&cache).map(|d| d.count()).unwrap_or(0);
        std::fs::remove_dir_all(&cache).unwrap();
        let wiped = table(mode, degree, bound, amp);
        let all_ok = cold.0 && warm.0 && wiped.0;
        out.push(ok(
            format!("{mode} table {degree}: cold = warm = after wipe"),
            all_ok && !cold.1.is_empty() && cold.1 == warm.1 && cold.1 == wiped.1 && entries > 0,
            3,
            if all_ok {
                format!("{} bytes, {entries} cache entries", cold.1.len())
            } else {
                format!("command failed: {}{}{}", cold.2, warm.2, wiped.2)
            },
        ));
    }
    out
}
