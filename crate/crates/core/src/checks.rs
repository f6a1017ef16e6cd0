//! Invariant suites shared by `verify` and the acceptance target.
//!
//! Each check runs exhaustively over a stated range and reports the number of
//! cases examined plus the first failure, if any. Errors raised while computing
//! count as failures rather than aborting the suite.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::catalog::ClassLabel;
use crate::derived::{DerivedHallAlgebra, PerfectObject};
use crate::element::integer;
use crate::error::Result;
use crate::hall::HallAlgebra;
use crate::quiver::{DimVector, K0Class};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases)", self.name, self.cases)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Counts cases and keeps the first failure message.
struct Tally {
    name: String,
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(msg());
            }
        }
    }

    fn check(&mut self, outcome: Result<bool>, msg: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.record(ok, msg),
            Err(e) => self.record(false, || format!("{}: {e}", msg())),
        }
    }

    fn finish(self) -> CheckResult {
        let passed = self.failures == 0 && self.cases > 0;
        let detail = match (&self.first, self.cases) {
            (_, 0) => "no cases examined".into(),
            (Some(m), _) => format!("{} failures; first: {m}", self.failures),
            (None, _) => String::new(),
        };
        CheckResult {
            name: self.name,
            passed,
            cases: self.cases,
            detail,
        }
    }
}

fn fits(d: &DimVector, bound: &DimVector) -> bool {
    d.le(bound)
}

fn labels_within(h: &HallAlgebra, bound: &DimVector) -> Vec<ClassLabel> {
    h.basis_labels()
        .into_iter()
        .filter(|l| fits(&l.dims, bound))
        .collect()
}

fn k0_of_label(l: &ClassLabel) -> K0Class {
    l.dims.to_k0()
}

/// `subcount == extcount` on every triple of classes in the catalog.
pub fn hall_number_agreement(h: &HallAlgebra) -> CheckResult {
    let mut t = Tally::new(format!("hall numbers: subcount = extcount (q={})", h.q()));
    let labels = h.basis_labels();
    for r in &labels {
        for m in &labels {
            for n in &labels {
                let outcome = h
                    .hall_number_subcount(r, m, n)
                    .and_then(|a| Ok((a, h.hall_number_extcount(r, m, n)?)));
                let cat = h.catalog();
                t.check(outcome.map(|(a, b)| a == b), || {
                    format!(
                        "g^{}_{{{},{}}}",
                        cat.render(r),
                        cat.render(m),
                        cat.render(n)
                    )
                });
            }
        }
    }
    t.finish()
}

/// Unit laws on every class and associativity on triples whose dims sum within `sum_bound`.
pub fn classical_associativity(h: &HallAlgebra, sum_bound: &DimVector) -> CheckResult {
    let mut t = Tally::new(format!("classical unit and associativity (q={})", h.q()));
    let labels = labels_within(h, sum_bound);
    let cat = h.catalog();
    let unit = h.unit();
    for x in &labels {
        let bx = h.basis(x);
        t.check(
            h.product(&unit, &bx)
                .and_then(|l| Ok(l == bx && h.product(&bx, &unit)? == bx)),
            || format!("unit on {}", cat.render(x)),
        );
    }
    for x in &labels {
        for y in &labels {
            let xy = x.dims.add(&y.dims);
            if !fits(&xy, sum_bound) {
                continue;
            }
            for z in &labels {
                if !fits(&xy.add(&z.dims), sum_bound) {
                    continue;
                }
                let (bx, by, bz) = (h.basis(x), h.basis(y), h.basis(z));
                let outcome = (|| {
                    let left = h.product(&h.product(&bx, &by)?, &bz)?;
                    let right = h.product(&bx, &h.product(&by, &bz)?)?;
                    Ok(left == right)
                })();
                t.check(outcome, || {
                    format!("({} {} {})", cat.render(x), cat.render(y), cat.render(z))
                });
            }
        }
    }
    t.finish()
}

/// Products of homogeneous elements are homogeneous of the summed degree.
pub fn classical_grading(h: &HallAlgebra, sum_bound: &DimVector) -> CheckResult {
    let mut t = Tally::new(format!("classical K0 grading (q={})", h.q()));
    let labels = labels_within(h, sum_bound);
    let cat = h.catalog();
    for x in &labels {
        for y in &labels {
            let d = x.dims.add(&y.dims);
            if !fits(&d, sum_bound) {
                continue;
            }
            let outcome = h.product_basis(x, y).map(|p| {
                p.terms().keys().all(|r| r.dims == d)
                    && (p.is_empty() || p.homogeneous_degree(k0_of_label) == Some(d.to_k0()))
            });
            t.check(outcome, || format!("{} * {}", cat.render(x), cat.render(y)));
        }
    }
    // sums of homogeneous elements of one degree
    for d in sum_bound.below() {
        let Ok(same) = cat.classes_of_dim(&d) else { continue };
        if same.len() < 2 {
            continue;
        }
        let sum = same
            .iter()
            .fold(h.zero(), |acc, l| acc.add(&h.basis(l)).expect("same algebra"));
        for y in &labels {
            let e = d.add(&y.dims);
            if !fits(&e, sum_bound) {
                continue;
            }
            let outcome = h
                .product(&sum, &h.basis(y))
                .map(|p| p.is_empty() || p.homogeneous_degree(k0_of_label) == Some(e.to_k0()));
            t.check(outcome, || format!("sum of degree {:?} times {}", d.0, cat.render(y)));
        }
    }
    t.finish()
}

/// Flag counting equals the iterated product on every sequence of simples of length `len`
/// whose total dimension the catalog covers.
pub fn filtration_formula(h: &HallAlgebra, len: usize) -> CheckResult {
    let mut t = Tally::new(format!("filtration count = iterated product (q={}, length {len})", h.q()));
    let cat = h.catalog();
    let n = cat.quiver().vertex_count();
    let simples: Vec<ClassLabel> = match (0..n).map(|v| cat.simple_label(v)).collect() {
        Ok(s) => s,
        Err(e) => {
            t.record(false, || e.to_string());
            return t.finish();
        }
    };
    let total = n.pow(len as u32);
    for idx in 0..total {
        let seq: Vec<ClassLabel> = (0..len)
            .map(|k| simples[(idx / n.pow(k as u32)) % n].clone())
            .collect();
        let total_dims = seq
            .iter()
            .fold(DimVector::zero(n), |acc, l| acc.add(&l.dims));
        if !cat.covers(&total_dims) {
            continue;
        }
        let outcome = h
            .multi_product_filtration(&seq)
            .and_then(|a| Ok(a == h.iterated_product(&seq)?));
        t.check(outcome, || {
            seq.iter().map(|l| cat.render(l)).collect::<Vec<_>>().join(" ")
        });
    }
    t.finish()
}

/// `[S_i]^2 [S_j] - (q+1) [S_i][S_j][S_i] + q [S_j][S_i]^2 = 0` for every arrow `i -> j`.
pub fn ringel_relation(h: &HallAlgebra) -> CheckResult {
    let mut t = Tally::new(format!("Serre-type relation along arrows (q={})", h.q()));
    let cat = h.catalog();
    let q = h.q();
    for arrow in cat.quiver().arrows() {
        let outcome = (|| {
            let si = h.basis(&cat.simple_label(arrow.source)?);
            let sj = h.basis(&cat.simple_label(arrow.target)?);
            let ii_j = h.product(&h.product(&si, &si)?, &sj)?;
            let i_j_i = h.product(&h.product(&si, &sj)?, &si)?;
            let j_ii = h.product(&sj, &h.product(&si, &si)?)?;
            let rel = ii_j
                .sub(&i_j_i.scale(&integer(q + 1)))?
                .add(&j_ii.scale(&integer(q)))?;
            Ok(rel.is_empty())
        })();
        t.check(outcome, || format!("arrow {}", arrow.name));
    }
    t.finish()
}

/// The same relation evaluated through the derived product on degree-0 simples.
pub fn ringel_relation_derived(d: &DerivedHallAlgebra) -> CheckResult {
    let mut t = Tally::new(format!("Serre-type relation via derived product (q={})", d.q()));
    let cat = d.catalog().clone();
    let q = d.q();
    for arrow in cat.quiver().arrows() {
        let outcome = (|| {
            let n = cat.quiver().vertex_count();
            let ei = (K0Class(unit_k0(n, arrow.source)), 0);
            let ej = (K0Class(unit_k0(n, arrow.target)), 0);
            let ii_j = d.lusztig_monomial(&[ei.clone(), ei.clone(), ej.clone()])?;
            let i_j_i = d.lusztig_monomial(&[ei.clone(), ej.clone(), ei.clone()])?;
            let j_ii = d.lusztig_monomial(&[ej, ei.clone(), ei])?;
            let rel = ii_j
                .sub(&i_j_i.scale(&integer(q + 1)))?
                .add(&j_ii.scale(&integer(q)))?;
            Ok(rel.is_empty())
        })();
        t.check(outcome, || format!("arrow {}", arrow.name));
    }
    t.finish()
}

fn unit_k0(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|v| i64::from(v == i)).collect()
}

/// Derived product on degree-0 classes against the classical product, for all pairs
/// whose dims sum within `sum_bound`.
pub fn classical_limit(d: &DerivedHallAlgebra, h: &HallAlgebra, sum_bound: &DimVector) -> CheckResult {
    let mut t = Tally::new(format!(
        "classical limit of the derived product (q={}, {:?})",
        d.q(),
        d.slot_order()
    ));
    let labels = labels_within(h, sum_bound);
    let cat = h.catalog();
    for x in &labels {
        for y in &labels {
            if !fits(&x.dims.add(&y.dims), sum_bound) {
                continue;
            }
            let outcome = (|| {
                let classical = d.from_classical(&h.product_basis(x, y)?);
                let derived = d.product_basis(
                    &PerfectObject::module(x.clone(), 0),
                    &PerfectObject::module(y.clone(), 0),
                )?;
                Ok(classical == derived)
            })();
            t.check(outcome, || format!("{} * {}", cat.render(x), cat.render(y)));
        }
    }
    t.finish()
}

/// Triples of objects in `range` whose cohomology dims, summed over the triple,
/// stay within `bound` in every degree.
pub fn bounded_triples(
    objects: &[PerfectObject],
    bound: &DimVector,
) -> Vec<(PerfectObject, PerfectObject, PerfectObject)> {
    let fits_sum = |parts: &[&PerfectObject]| {
        let degrees: BTreeSet<i32> = parts.iter().flat_map(|o| o.support().keys().copied()).collect();
        degrees.iter().all(|i| {
            let total = parts
                .iter()
                .filter_map(|o| o.cohomology(*i))
                .fold(DimVector::zero(bound.len()), |acc, l| acc.add(&l.dims));
            fits(&total, bound)
        })
    };
    let mut out = Vec::new();
    for x in objects {
        for y in objects {
            if !fits_sum(&[x, y]) {
                continue;
            }
            for z in objects {
                if fits_sum(&[x, y, z]) {
                    out.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    out
}

/// Pairs of objects whose summed cohomology dims stay within `bound` in every degree.
pub fn bounded_pairs(objects: &[PerfectObject], bound: &DimVector) -> Vec<(PerfectObject, PerfectObject)> {
    let mut out = Vec::new();
    for x in objects {
        for y in objects {
            let s = x.direct_sum(y);
            if s.support().values().all(|l| fits(&l.dims, bound)) {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

/// Unit laws and associativity of the derived product over bounded triples.
pub fn derived_associativity(
    d: &DerivedHallAlgebra,
    amplitude: (i32, i32),
    bound: &DimVector,
) -> CheckResult {
    let mut t = Tally::new(format!(
        "derived unit and associativity (q={}, amplitude [{}, {}], per-degree sum <= {:?})",
        d.q(),
        amplitude.0,
        amplitude.1,
        bound.0
    ));
    let objects = match d.objects_in_range(amplitude, bound) {
        Ok(o) => o,
        Err(e) => {
            t.record(false, || e.to_string());
            return t.finish();
        }
    };
    let unit = d.unit();
    for x in &objects {
        let bx = d.basis(x);
        t.check(
            d.derived_product(&unit, &bx)
                .and_then(|l| Ok(l == bx && d.derived_product(&bx, &unit)? == bx)),
            || format!("unit on {}", d.render(x)),
        );
    }
    for (x, y, z) in bounded_triples(&objects, bound) {
        let outcome = (|| {
            let (bx, by, bz) = (d.basis(&x), d.basis(&y), d.basis(&z));
            let left = d.derived_product(&d.derived_product(&bx, &by)?, &bz)?;
            let right = d.derived_product(&bx, &d.derived_product(&by, &bz)?)?;
            Ok(left == right)
        })();
        t.check(outcome, || {
            format!("({}) ({}) ({})", d.render(&x), d.render(&y), d.render(&z))
        });
    }
    t.finish()
}

/// Every π-table recorded so far is locally finite, and the closed-form object tables
/// agree with unit counting for every object in range.
pub fn local_finiteness(d: &DerivedHallAlgebra, amplitude: (i32, i32), bound: &DimVector) -> CheckResult {
    let mut t = Tally::new(format!("local finiteness of pi tables (q={})", d.q()));
    let audit = d.audit();
    for a in &audit.arrow_classes {
        t.record(a.pi.is_locally_finite() && a.stabilizer >= 1, || {
            format!("arrow {} -> {}", d.render(&a.source), d.render(&a.target))
        });
    }
    for (o, table) in &audit.object_tables {
        t.record(table.is_locally_finite(), || format!("object {}", d.render(o)));
    }
    match d.objects_in_range(amplitude, bound) {
        Ok(objects) => {
            for o in objects {
                let outcome = d
                    .pi_orders_object(&o)
                    .and_then(|c| Ok(c.is_locally_finite() && c == d.pi_orders_object_brute(&o)?));
                t.check(outcome, || format!("closed form vs brute force on {}", d.render(&o)));
            }
        }
        Err(e) => t.record(false, || e.to_string()),
    }
    t.finish()
}

/// K₀ grading of every computed product and cone additivity on every enumerated arrow.
pub fn k0_grading(d: &DerivedHallAlgebra) -> CheckResult {
    let mut t = Tally::new(format!("K0 grading and cone additivity (q={})", d.q()));
    let n = d.catalog().quiver().vertex_count();
    let audit = d.audit();
    for v in &audit.cone_k0_violations {
        t.record(false, || v.clone());
    }
    t.cases += audit.arrows_enumerated.saturating_sub(audit.cone_k0_violations.len() as u64);
    for (a, b, p) in d.computed_products() {
        let want = a.k0_class(n).add(&b.k0_class(n));
        let ok = p.terms().keys().all(|y| y.k0_class(n) == want);
        t.record(ok, || format!("product {} * {}", d.render(&a), d.render(&b)));
    }
    t.finish()
}
