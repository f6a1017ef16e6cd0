//! Indecomposable catalogs and canonical isomorphism-class labels.
//!
//! A catalog holds one representative per isomorphism class of indecomposable
//! representations with dimension vector below a bound, found by exhaustive
//! enumeration. Every representation below the bound then decomposes (Krull-Schmidt)
//! into a unique multiset of catalog members, which is its canonical label.
//! Labels are recovered from hom-dimension fingerprints `dim Hom(X_i, M)`, with a
//! brute-force isomorphism search as the fallback when fingerprints collide.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ff::PrimeField;
use crate::quiver::{DimVector, Quiver, QuiverJson};
use crate::rep::{
    brute_force_isomorphic, hom_dim, is_indecomposable, Representation, RepresentationJson,
};

/// Canonical label of an isomorphism class: dimension vector plus the
/// multiplicity of each catalog member. Ordered by dimension vector first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassLabel {
    pub dims: DimVector,
    pub multiplicities: Vec<u32>,
}

impl ClassLabel {
    pub fn is_zero(&self) -> bool {
        self.dims.is_zero()
    }
}

/// An isomorphism class with a stored representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClass {
    pub label: ClassLabel,
    pub representative: Representation,
}

#[derive(Debug, Clone)]
struct ClassEntry {
    label: ClassLabel,
    fingerprint: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    field: PrimeField,
    quiver: Arc<Quiver>,
    bound: DimVector,
    members: Vec<Representation>,
    /// `hom[i][j] = dim Hom(X_i, X_j)`
    hom: Vec<Vec<usize>>,
    classes: BTreeMap<DimVector, Vec<ClassEntry>>,
    budget: Budget,
}

impl Catalog {
    /// Enumerates every representation with dimension vector `<= bound` and keeps
    /// one representative of each indecomposable isomorphism class.
    pub fn build(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        bound: &DimVector,
        budget: &Budget,
    ) -> Result<Catalog> {
        quiver.check_len(bound.len())?;
        let mut dims: Vec<DimVector> = bound.below().into_iter().filter(|d| !d.is_zero()).collect();
        dims.sort_by_key(|d| (d.total(), d.clone()));
        let mut members: Vec<Representation> = Vec::new();
        for d in &dims {
            let mut found: Vec<Representation> = Vec::new();
            for r in Representation::enumerate_all(field, quiver.clone(), d, budget)? {
                let mut known = false;
                for m in &found {
                    if brute_force_isomorphic(m, &r, budget)? {
                        known = true;
                        break;
                    }
                }
                if !known && is_indecomposable(&r, budget)? {
                    found.push(r);
                }
            }
            members.extend(found);
        }
        Self::from_members(field, quiver, bound.clone(), members, budget)
    }

    /// Assembles a catalog from already-known indecomposables (sorted stably by
    /// dimension vector) and precomputes the class tables.
    pub fn from_members(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        bound: DimVector,
        mut members: Vec<Representation>,
        budget: &Budget,
    ) -> Result<Catalog> {
        for m in &members {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.order(), m.field().order()));
            }
            if **m.quiver() != *quiver {
                return Err(Error::QuiverMismatch);
            }
        }
        members.sort_by(|a, b| a.dims().cmp(b.dims()));
        let hom = members
            .iter()
            .map(|x| members.iter().map(|y| hom_dim(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut catalog = Catalog {
            field: field.clone(),
            quiver,
            bound,
            members,
            hom,
            classes: BTreeMap::new(),
            budget: *budget,
        };
        catalog.classes = catalog.tabulate_classes();
        Ok(catalog)
    }

    fn tabulate_classes(&self) -> BTreeMap<DimVector, Vec<ClassEntry>> {
        let n = self.members.len();
        let mut out: BTreeMap<DimVector, Vec<ClassEntry>> = self
            .bound
            .below()
            .into_iter()
            .map(|d| (d, Vec::new()))
            .collect();
        let mut mult = vec![0u32; n];
        fn rec(
            cat: &Catalog,
            idx: usize,
            remaining: &DimVector,
            mult: &mut Vec<u32>,
            out: &mut BTreeMap<DimVector, Vec<ClassEntry>>,
        ) {
            if idx == cat.members.len() {
                let dims = cat.bound.checked_sub(remaining).expect("within bound");
                let fingerprint = (0..cat.members.len())
                    .map(|i| {
                        mult.iter()
                            .enumerate()
                            .map(|(j, &m)| m as usize * cat.hom[i][j])
                            .sum()
                    })
                    .collect();
                out.get_mut(&dims).expect("tabulated").push(ClassEntry {
                    label: ClassLabel {
                        dims,
                        multiplicities: mult.clone(),
                    },
                    fingerprint,
                });
                return;
            }
            let d = cat.members[idx].dims().clone();
            let mut rem = remaining.clone();
            let mut k = 0;
            loop {
                mult[idx] = k;
                rec(cat, idx + 1, &rem, mult, out);
                match rem.checked_sub(&d) {
                    Some(r) if !d.is_zero() => {
                        rem = r;
                        k += 1;
                    }
                    _ => break,
                }
            }
            mult[idx] = 0;
        }
        rec(self, 0, &self.bound, &mut mult, &mut out);
        for entries in out.values_mut() {
            entries.sort_by(|a, b| a.label.cmp(&b.label));
        }
        out
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn members(&self) -> &[Representation] {
        &self.members
    }

    pub fn covers(&self, d: &DimVector) -> bool {
        d.le(&self.bound)
    }

    fn check_covers(&self, d: &DimVector) -> Result<()> {
        if self.covers(d) {
            Ok(())
        } else {
            Err(Error::OutsideCatalogBound {
                dims: d.clone(),
                bound: self.bound.clone(),
            })
        }
    }

    /// Labels of every isomorphism class with dimension vector `d`, sorted.
    pub fn classes_of_dim(&self, d: &DimVector) -> Result<Vec<ClassLabel>> {
        self.check_covers(d)?;
        Ok(self.classes[d].iter().map(|e| e.label.clone()).collect())
    }

    /// Every class with dimension vector `<= bound`, sorted.
    pub fn all_classes(&self) -> Vec<ClassLabel> {
        self.classes
            .values()
            .flat_map(|v| v.iter().map(|e| e.label.clone()))
            .collect()
    }

    pub fn zero_label(&self) -> ClassLabel {
        ClassLabel {
            dims: DimVector::zero(self.quiver.vertex_count()),
            multiplicities: vec![0; self.members.len()],
        }
    }

    /// Label of the indecomposable catalog member `i`.
    pub fn member_label(&self, i: usize) -> ClassLabel {
        let mut multiplicities = vec![0; self.members.len()];
        multiplicities[i] = 1;
        ClassLabel {
            dims: self.members[i].dims().clone(),
            multiplicities,
        }
    }

    /// Label of the simple representation at vertex `v`.
    pub fn simple_label(&self, v: usize) -> Result<ClassLabel> {
        let s = Representation::simple(&self.field, self.quiver.clone(), v);
        self.classify(&s)
    }

    /// The direct sum of catalog members named by `label`.
    pub fn representative(&self, label: &ClassLabel) -> Result<Representation> {
        if label.multiplicities.len() != self.members.len() {
            return Err(Error::UnknownLabel(format!("{label:?}")));
        }
        let mut rep = Representation::zero(&self.field, self.quiver.clone());
        for (m, &k) in self.members.iter().zip(&label.multiplicities) {
            for _ in 0..k {
                rep = rep.direct_sum(m)?;
            }
        }
        if rep.dims() != &label.dims {
            return Err(Error::UnknownLabel(format!("{label:?}")));
        }
        Ok(rep)
    }

    pub fn iso_class(&self, label: &ClassLabel) -> Result<IsoClass> {
        Ok(IsoClass {
            label: label.clone(),
            representative: self.representative(label)?,
        })
    }

    pub fn fingerprint(&self, m: &Representation) -> Result<Vec<usize>> {
        self.members.iter().map(|x| hom_dim(x, m)).collect()
    }

    /// Canonical label of an arbitrary representation below the bound.
    pub fn classify(&self, m: &Representation) -> Result<ClassLabel> {
        self.check_covers(m.dims())?;
        if m.field() != &self.field {
            return Err(Error::FieldMismatch(self.field.order(), m.field().order()));
        }
        let fp = self.fingerprint(m)?;
        let matches: Vec<&ClassEntry> = self.classes[m.dims()]
            .iter()
            .filter(|e| e.fingerprint == fp)
            .collect();
        match matches.as_slice() {
            [] => Err(Error::CatalogIncomplete(m.dims().clone())),
            [one] => Ok(one.label.clone()),
            several => {
                for e in several {
                    let rep = self.representative(&e.label)?;
                    match brute_force_isomorphic(&rep, m, &self.budget) {
                        Ok(true) => return Ok(e.label.clone()),
                        Ok(false) => {}
                        Err(Error::Budget(_)) => return Err(Error::Undecidable),
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::CatalogIncomplete(m.dims().clone()))
            }
        }
    }

    pub fn iso_class_of(&self, m: &Representation) -> Result<IsoClass> {
        let label = self.classify(m)?;
        Ok(IsoClass {
            representative: self.representative(&label)?,
            label,
        })
    }

    /// Isomorphism test: labels when the catalog covers the dimension, brute force otherwise.
    pub fn is_isomorphic(&self, m: &Representation, n: &Representation) -> Result<bool> {
        m.check_compatible(n)?;
        if m.dims() != n.dims() {
            return Ok(false);
        }
        if self.covers(m.dims()) {
            return Ok(self.classify(m)? == self.classify(n)?);
        }
        match brute_force_isomorphic(m, n, &self.budget) {
            Err(Error::Budget(_)) => Err(Error::Undecidable),
            other => other,
        }
    }

    fn member_token(&self, i: usize) -> String {
        let d = self.members[i].dims();
        let same: Vec<usize> = (0..self.members.len())
            .filter(|&j| self.members[j].dims() == d)
            .collect();
        if same.len() == 1 {
            d.to_string()
        } else {
            let k = same.iter().position(|&j| j == i).expect("self");
            format!("{d}#{k}")
        }
    }

    /// Text form: `0`, `(1,1)`, `2(1,0)+(0,1)`; members sharing a dimension
    /// vector are disambiguated as `(1,1)#0`, `(1,1)#1`.
    pub fn render(&self, label: &ClassLabel) -> String {
        let terms: Vec<String> = label
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    self.member_token(i)
                } else {
                    format!("{k}{}", self.member_token(i))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Inverse of [`Catalog::render`]; summands may appear in any order.
    pub fn parse_label(&self, text: &str) -> Result<ClassLabel> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" {
            return Ok(self.zero_label());
        }
        let tokens: Vec<String> = (0..self.members.len()).map(|i| self.member_token(i)).collect();
        let mut mult = vec![0u32; self.members.len()];
        for term in t.split('+') {
            let split = term.find('(').ok_or_else(|| Error::UnknownLabel(text.to_string()))?;
            let (count, token) = term.split_at(split);
            let count: u32 = if count.is_empty() {
                1
            } else {
                count
                    .parse()
                    .map_err(|_| Error::UnknownLabel(text.to_string()))?
            };
            let idx = tokens
                .iter()
                .position(|x| x == token)
                .ok_or_else(|| Error::UnknownLabel(text.to_string()))?;
            mult[idx] += count;
        }
        let dims = mult
            .iter()
            .zip(&self.members)
            .fold(DimVector::zero(self.quiver.vertex_count()), |acc, (&k, m)| {
                let mut d = acc;
                for _ in 0..k {
                    d = d.add(m.dims());
                }
                d
            });
        Ok(ClassLabel {
            dims,
            multiplicities: mult,
        })
    }

    pub fn to_json(&self) -> CatalogJson {
        CatalogJson {
            quiver: self.quiver.digest(),
            q: self.field.order(),
            bound: self.bound.0.clone(),
            quiver_definition: self.quiver.to_json(),
            members: self.members.iter().map(Representation::to_json).collect(),
        }
    }

    /// Loads a catalog file, re-checking that every member is indecomposable and
    /// that members are pairwise non-isomorphic.
    pub fn from_json(json: &CatalogJson, budget: &Budget) -> Result<Catalog> {
        let field = PrimeField::new(json.q)?;
        let quiver = Arc::new(Quiver::new(
            json.quiver_definition.vertices.clone(),
            json.quiver_definition
                .arrows
                .iter()
                .map(|a| (a.name.clone(), a.src.clone(), a.tgt.clone())),
        )?);
        if quiver.digest() != json.quiver {
            return Err(Error::Invalid("catalog quiver digest mismatch".into()));
        }
        let members = json
            .members
            .iter()
            .map(|m| Representation::from_json(&field, quiver.clone(), m))
            .collect::<Result<Vec<_>>>()?;
        let bound = DimVector(json.bound.clone());
        quiver.check_len(bound.len())?;
        for (i, m) in members.iter().enumerate() {
            if !m.dims().le(&bound) {
                return Err(Error::Invalid(format!("member {i} exceeds the bound")));
            }
            if !is_indecomposable(m, budget)? {
                return Err(Error::Invalid(format!("member {i} is decomposable")));
            }
            for other in &members[..i] {
                if brute_force_isomorphic(m, other, budget)? {
                    return Err(Error::Invalid(format!("member {i} is a duplicate")));
                }
            }
        }
        Catalog::from_members(&field, quiver, bound, members, budget)
    }
}

/// Catalog file: metadata plus the member representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogJson {
    pub quiver: String,
    pub q: u32,
    pub bound: Vec<u32>,
    pub quiver_definition: QuiverJson,
    pub members: Vec<RepresentationJson>,
}

/// Display adapter pairing a label with its catalog.
pub struct Labeled<'a>(pub &'a Catalog, pub &'a ClassLabel);

impl fmt::Display for Labeled<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}
