//! Classical Ringel-Hall numbers and the Hall algebra product.
//!
//! Convention: `[M] * [N] = Σ_R g^R_{M,N} [R]` where `g^R_{M,N}` counts the
//! subrepresentations `N' ⊆ R` with `N' ≅ N` and `R/N' ≅ M`. So the right factor
//! is the subobject and the left factor the quotient.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::budget::Budget;
use crate::catalog::{Catalog, ClassLabel};
use crate::element::{integer, LinearCombination};
use crate::error::{Error, Result};
use crate::ff::Matrix;
use crate::quiver::DimVector;
use crate::rep::{
    aut_order, combine, enumerate_span, hom_space, subrepresentations, RepMorphism,
    Representation,
};

pub type HallElement = LinearCombination<ClassLabel>;

/// (quotient label, sub label) → number of subrepresentations of that shape.
type SubquotientTable = BTreeMap<(ClassLabel, ClassLabel), u128>;

/// One row of a structure-constant table: `g^r_{m,n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructureConstant {
    pub m: ClassLabel,
    pub n: ClassLabel,
    pub r: ClassLabel,
    pub g: u128,
}

/// Hall algebra over a fixed catalog, with write-once memo tables.
#[derive(Debug)]
pub struct HallAlgebra {
    catalog: Arc<Catalog>,
    aut: RwLock<HashMap<ClassLabel, u128>>,
    subquotients: RwLock<HashMap<(ClassLabel, DimVector), Arc<SubquotientTable>>>,
    products: RwLock<HashMap<(ClassLabel, ClassLabel), HallElement>>,
}

fn memo_get<K: std::hash::Hash + Eq, V: Clone>(map: &RwLock<HashMap<K, V>>, k: &K) -> Option<V> {
    map.read().expect("memo lock").get(k).cloned()
}

/// First writer wins; later writers receive the published value.
fn memo_put<K: std::hash::Hash + Eq, V: Clone>(map: &RwLock<HashMap<K, V>>, k: K, v: V) -> V {
    map.write().expect("memo lock").entry(k).or_insert(v).clone()
}

impl HallAlgebra {
    pub fn new(catalog: Arc<Catalog>) -> Self {
        HallAlgebra {
            catalog,
            aut: RwLock::default(),
            subquotients: RwLock::default(),
            products: RwLock::default(),
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    fn budget(&self) -> &Budget {
        self.catalog.budget()
    }

    pub fn q(&self) -> u32 {
        self.catalog.field().order()
    }

    pub fn digest(&self) -> String {
        self.catalog.quiver().digest()
    }

    pub fn zero(&self) -> HallElement {
        HallElement::zero(self.q(), self.digest())
    }

    pub fn basis(&self, label: &ClassLabel) -> HallElement {
        HallElement::basis(self.q(), self.digest(), label.clone())
    }

    /// The unit `[0]`.
    pub fn unit(&self) -> HallElement {
        self.basis(&self.catalog.zero_label())
    }

    pub fn aut_order(&self, label: &ClassLabel) -> Result<u128> {
        if let Some(a) = memo_get(&self.aut, label) {
            return Ok(a);
        }
        let rep = self.catalog.representative(label)?;
        let a = aut_order(&rep, self.budget())?;
        Ok(memo_put(&self.aut, label.clone(), a))
    }

    fn subquotient_table(&self, r: &ClassLabel, d: &DimVector) -> Result<Arc<SubquotientTable>> {
        let key = (r.clone(), d.clone());
        if let Some(t) = memo_get(&self.subquotients, &key) {
            return Ok(t);
        }
        let rep = self.catalog.representative(r)?;
        let mut table = SubquotientTable::new();
        for s in subrepresentations(&rep, d, self.budget())? {
            let quotient = self.catalog.classify(&s.quotient)?;
            let sub = self.catalog.classify(&s.sub)?;
            *table.entry((quotient, sub)).or_insert(0) += 1;
        }
        Ok(memo_put(&self.subquotients, key, Arc::new(table)))
    }

    /// `g^R_{M,N}` by enumerating subrepresentations of `R` of dimension `dim N`.
    pub fn hall_number_subcount(
        &self,
        r: &ClassLabel,
        m: &ClassLabel,
        n: &ClassLabel,
    ) -> Result<u128> {
        if r.dims != m.dims.add(&n.dims) {
            return Ok(0);
        }
        let table = self.subquotient_table(r, &n.dims)?;
        Ok(table.get(&(m.clone(), n.clone())).copied().unwrap_or(0))
    }

    /// `e^R_{M,N} / (a_M a_N)`, where `e` counts pairs (injection `N → R`,
    /// surjection `R → M`) with exact composite. Fails if the quotient is not an integer.
    pub fn hall_number_extcount(
        &self,
        r: &ClassLabel,
        m: &ClassLabel,
        n: &ClassLabel,
    ) -> Result<u128> {
        if r.dims != m.dims.add(&n.dims) {
            return Ok(0);
        }
        let (rr, mm, nn) = (
            self.catalog.representative(r)?,
            self.catalog.representative(m)?,
            self.catalog.representative(n)?,
        );
        let e = exact_sequence_count(&nn, &rr, &mm, self.budget())?;
        let denom = self.aut_order(m)? * self.aut_order(n)?;
        if e % denom != 0 {
            return Err(Error::Integrality(format!(
                "e = {e} is not divisible by a_M a_N = {denom}"
            )));
        }
        Ok(e / denom)
    }

    /// `[M] * [N]` on basis classes.
    pub fn product_basis(&self, m: &ClassLabel, n: &ClassLabel) -> Result<HallElement> {
        let key = (m.clone(), n.clone());
        if let Some(p) = memo_get(&self.products, &key) {
            return Ok(p);
        }
        let d = m.dims.add(&n.dims);
        let mut out = self.zero();
        for r in self.catalog.classes_of_dim(&d)? {
            let g = self.hall_number_subcount(&r, m, n)?;
            out.add_term(r, integer(g));
        }
        Ok(memo_put(&self.products, key, out))
    }

    pub fn product(&self, x: &HallElement, y: &HallElement) -> Result<HallElement> {
        self.check_element(x)?;
        x.bilinear(y, |a, b| self.product_basis(a, b))
    }

    pub fn check_element(&self, x: &HallElement) -> Result<()> {
        if x.q() != self.q() {
            return Err(Error::FieldMismatch(self.q(), x.q()));
        }
        if x.quiver_digest() != self.digest() {
            return Err(Error::QuiverMismatch);
        }
        Ok(())
    }

    /// Right-nested iterated product `x_1 * (x_2 * (⋯ * x_r))`.
    pub fn iterated_product(&self, classes: &[ClassLabel]) -> Result<HallElement> {
        let (last, rest) = classes
            .split_last()
            .ok_or_else(|| Error::Invalid("empty product".into()))?;
        let mut acc = self.basis(last);
        for c in rest.iter().rev() {
            acc = self.product(&self.basis(c), &acc)?;
        }
        Ok(acc)
    }

    /// `Σ_M |F(M; N_1, …, N_r)| [M]`, counting flags `M = M_1 ⊇ ⋯ ⊇ M_{r+1} = 0`
    /// with `M_i / M_{i+1} ≅ N_i` by nested subrepresentation enumeration.
    pub fn multi_product_filtration(&self, classes: &[ClassLabel]) -> Result<HallElement> {
        if classes.is_empty() {
            return Err(Error::Invalid("empty product".into()));
        }
        let total = classes
            .iter()
            .fold(self.catalog.zero_label().dims, |acc, c| acc.add(&c.dims));
        let mut memo = HashMap::new();
        let mut out = self.zero();
        for m in self.catalog.classes_of_dim(&total)? {
            let rep = self.catalog.representative(&m)?;
            let flags = self.count_flags(&rep, classes, &mut memo)?;
            out.add_term(m, integer(flags));
        }
        Ok(out)
    }

    fn count_flags(
        &self,
        rep: &Representation,
        seq: &[ClassLabel],
        memo: &mut HashMap<(ClassLabel, usize), u128>,
    ) -> Result<u128> {
        let label = self.catalog.classify(rep)?;
        if seq.len() == 1 {
            return Ok((label == seq[0]) as u128);
        }
        let key = (label, seq.len());
        if let Some(&c) = memo.get(&key) {
            return Ok(c);
        }
        let tail = &seq[1..];
        let sub_dims = tail
            .iter()
            .fold(self.catalog.zero_label().dims, |acc, c| acc.add(&c.dims));
        let mut count = 0;
        for s in subrepresentations(rep, &sub_dims, self.budget())? {
            if self.catalog.classify(&s.quotient)? == seq[0] {
                count += self.count_flags(&s.sub, tail, memo)?;
            }
        }
        memo.insert(key, count);
        Ok(count)
    }

    /// Every `(m, n, r, g^r_{m,n})` with `m, n` nonzero and `dim m + dim n = degree`,
    /// zero cells included, sorted lexicographically.
    pub fn structure_table(&self, degree: &DimVector) -> Result<Vec<StructureConstant>> {
        let mut rows = Vec::new();
        let rs = self.catalog.classes_of_dim(degree)?;
        for dm in degree.below() {
            let dn = degree.checked_sub(&dm).expect("below");
            if dm.is_zero() || dn.is_zero() {
                continue;
            }
            for m in self.catalog.classes_of_dim(&dm)? {
                for n in self.catalog.classes_of_dim(&dn)? {
                    for r in &rs {
                        let g = self.hall_number_subcount(r, &m, &n)?;
                        rows.push(StructureConstant {
                            m: m.clone(),
                            n: n.clone(),
                            r: r.clone(),
                            g,
                        });
                    }
                }
            }
        }
        rows.sort();
        Ok(rows)
    }

    /// Every basis class in the catalog range.
    pub fn basis_labels(&self) -> Vec<ClassLabel> {
        self.catalog.all_classes()
    }
}

fn flatten(f: &RepMorphism) -> Vec<u32> {
    f.0.iter().flat_map(|m| m.entries().iter().copied()).collect()
}

/// Number of pairs `(f: n ↪ r, g: r ↠ m)` with `g ∘ f = 0`; with injectivity and
/// surjectivity and `dim r = dim n + dim m`, these are exactly the short exact sequences.
pub fn exact_sequence_count(
    n: &Representation,
    r: &Representation,
    m: &Representation,
    budget: &Budget,
) -> Result<u128> {
    let field = r.field();
    let hom_nr = hom_space(n, r)?;
    let hom_rm = hom_space(r, m)?;
    budget.check_power("exact_sequence_count", field.order(), hom_nr.len())?;
    let zero_nr = RepMorphism::zero(field, n.dims(), r.dims());
    let zero_rm = RepMorphism::zero(field, r.dims(), m.dims());
    let mut total = 0u128;
    for f in enumerate_span(field, &hom_nr, &zero_nr).filter(RepMorphism::is_injective) {
        // {g ∈ Hom(r, m) : g ∘ f = 0} as a subspace of Hom(r, m)
        let columns: Vec<Vec<u32>> = hom_rm.iter().map(|g| flatten(&g.compose(&f))).collect();
        let height = flatten(&RepMorphism::zero(field, n.dims(), m.dims())).len();
        let constraint = Matrix::from_columns(field, height, &columns);
        let annihilators: Vec<RepMorphism> = constraint
            .kernel_basis()
            .iter()
            .map(|c| combine(&hom_rm, c, &zero_rm))
            .collect();
        budget.check_power("exact_sequence_count", field.order(), annihilators.len())?;
        total += enumerate_span(field, &annihilators, &zero_rm)
            .filter(RepMorphism::is_surjective)
            .count() as u128;
    }
    Ok(total)
}
