//! Perfect complexes over a hereditary path algebra and the derived Hall product.
//!
//! Sign table (cohomological indexing throughout):
//!
//! | quantity | convention |
//! |---|---|
//! | shift | `H^i(X[1]) = H^{i+1}(X)` |
//! | `Hom_D(M[s], N[t])` | `Ext^{t-s}(M, N)` |
//! | `ext_dim(x, y, n)` | `Σ_{a,b} ext^{n+a-b}(H^a x, H^b y)` |
//! | `|π_1(X⁰, x)|` | `|Aut_D(x)|` |
//! | `|π_i(X⁰, x)|`, `i ≥ 2` | `q^{ext_dim(x, x, 1-i)}` |
//! | amplitude | `[min, max]` of the cohomological support |
//!
//! Every object is split, `X ≅ ⊕ H^a[-a]`, and is realised on projective
//! presentations; derived Hom is `H^0` of the Hom complex between those.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::budget::saturating_pow;
use crate::catalog::{Catalog, ClassLabel};
use crate::complex::{Cohomology, Complex, GradedMap, HomComplex, Subquotient};
use crate::element::{integer, LinearCombination};
use crate::enumerate::Coefficients;
use crate::error::{Error, Result};
use crate::ff::Matrix;
use crate::hall::HallElement;
use crate::quiver::{DimVector, K0Class};
use crate::rep::{aut_order, ext1_dim, hom_dim, Representation};

/// Split normal form `⊕_i H^i[-i]`: nonzero cohomology classes by degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PerfectObject {
    support: BTreeMap<i32, ClassLabel>,
}

impl PerfectObject {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_support(support: impl IntoIterator<Item = (i32, ClassLabel)>) -> Self {
        PerfectObject {
            support: support.into_iter().filter(|(_, l)| !l.is_zero()).collect(),
        }
    }

    /// A module placed in degree `deg`, i.e. `M[-deg]`.
    pub fn module(label: ClassLabel, deg: i32) -> Self {
        Self::from_support([(deg, label)])
    }

    pub fn support(&self) -> &BTreeMap<i32, ClassLabel> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn cohomology(&self, i: i32) -> Option<&ClassLabel> {
        self.support.get(&i)
    }

    /// `X[n]`, with `H^i(X[n]) = H^{i+n}(X)`.
    pub fn shift(&self, n: i32) -> Self {
        PerfectObject {
            support: self.support.iter().map(|(&i, l)| (i - n, l.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut support = self.support.clone();
        for (&i, l) in &other.support {
            let merged = match support.get(&i) {
                Some(m) => ClassLabel {
                    dims: m.dims.add(&l.dims),
                    multiplicities: m
                        .multiplicities
                        .iter()
                        .zip(&l.multiplicities)
                        .map(|(a, b)| a + b)
                        .collect(),
                },
                None => l.clone(),
            };
            support.insert(i, merged);
        }
        PerfectObject { support }
    }

    /// `Σ_i (-1)^i dim H^i`.
    pub fn k0_class(&self, vertices: usize) -> K0Class {
        self.support
            .iter()
            .fold(K0Class::zero(vertices), |acc, (&i, l)| {
                acc.add(&l.dims.to_k0().scale(if i % 2 == 0 { 1 } else { -1 }))
            })
    }

    /// `[min, max]` of the cohomological support; `None` for the zero object.
    pub fn amplitude(&self) -> Option<(i32, i32)> {
        Some((*self.support.keys().next()?, *self.support.keys().next_back()?))
    }

    /// Per-degree dimension vectors.
    pub fn dims(&self) -> BTreeMap<i32, DimVector> {
        self.support.iter().map(|(&i, l)| (i, l.dims.clone())).collect()
    }

    pub fn render(&self, catalog: &Catalog) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.support
            .iter()
            .map(|(i, l)| format!("H{i}={}", catalog.render(l)))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses `H0=(1,0);H-1=(0,1)`; a bare class label means degree 0.
    pub fn parse(catalog: &Catalog, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        if !t.starts_with('H') {
            return Ok(Self::module(catalog.parse_label(t)?, 0));
        }
        let mut support = BTreeMap::new();
        for part in t.split(';') {
            let (deg, label) = part
                .trim()
                .strip_prefix('H')
                .and_then(|p| p.split_once('='))
                .ok_or_else(|| Error::UnknownLabel(text.to_string()))?;
            let deg: i32 = deg
                .trim()
                .parse()
                .map_err(|_| Error::UnknownLabel(text.to_string()))?;
            if support.insert(deg, catalog.parse_label(label)?).is_some() {
                return Err(Error::UnknownLabel(text.to_string()));
            }
        }
        Ok(Self::from_support(support))
    }

    pub fn to_json(&self, catalog: &Catalog) -> PerfectObjectJson {
        PerfectObjectJson {
            support: self
                .support
                .iter()
                .map(|(i, l)| (i.to_string(), catalog.render(l)))
                .collect(),
        }
    }

    pub fn from_json(catalog: &Catalog, json: &PerfectObjectJson) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (deg, label) in &json.support {
            let d: i32 = deg
                .parse()
                .map_err(|_| Error::Invalid(format!("bad degree `{deg}`")))?;
            support.insert(d, catalog.parse_label(label)?);
        }
        Ok(Self::from_support(support))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectObjectJson {
    pub support: BTreeMap<String, String>,
}

pub type DerivedHallElement = LinearCombination<PerfectObject>;

/// `|π_i|` for `i ≥ 1`; unlisted entries are 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PiOrderTable {
    entries: BTreeMap<u32, u128>,
}

impl PiOrderTable {
    pub fn set(&mut self, i: u32, order: u128) {
        if order == 1 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, order);
        }
    }

    pub fn get(&self, i: u32) -> u128 {
        self.entries.get(&i).copied().unwrap_or(1)
    }

    pub fn entries(&self) -> &BTreeMap<u32, u128> {
        &self.entries
    }

    /// Finite support and every entry a positive integer.
    pub fn is_locally_finite(&self) -> bool {
        self.entries.values().all(|&v| v >= 1)
    }

    /// Largest index with a nontrivial entry (0 if none).
    pub fn top(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }
}

/// Which tensor slot of `(s × t)^*` receives the subobject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlotOrder {
    /// `μ(a, b)` sums over arrows `b -> y` with cone `a`; agrees with `[M] * [N]`
    /// (right factor = subobject).
    #[default]
    QuotientFirst,
    /// `μ(a, b)` sums over arrows `a -> y` with cone `b`.
    SubFirst,
}

/// An orbit of `Aut(x) × Aut(y)` on `Hom_D(x, y)`.
#[derive(Debug, Clone)]
pub struct ArrowClass {
    pub source: PerfectObject,
    pub target: PerfectObject,
    pub cone: PerfectObject,
    pub representative: GradedMap,
    /// Coordinates of the representative in the chosen basis of `Hom_D(x, y)`.
    pub coords: Vec<u32>,
    pub orbit_size: u128,
    /// Number of pairs `(φ, ψ)` with `ψ u = u φ` in the homotopy category.
    pub stabilizer: u128,
    pub pi: PiOrderTable,
}

/// Everything observed while enumerating arrows, for after-the-fact checks.
#[derive(Debug, Clone, Default)]
pub struct Audit {
    pub arrows_enumerated: u64,
    pub cone_k0_violations: Vec<String>,
    pub arrow_classes: Vec<ArrowRecord>,
    pub object_tables: Vec<(PerfectObject, PiOrderTable)>,
}

#[derive(Debug, Clone)]
pub struct ArrowRecord {
    pub source: PerfectObject,
    pub target: PerfectObject,
    pub cone: PerfectObject,
    pub pi: PiOrderTable,
    pub orbit_size: u128,
    pub stabilizer: u128,
}

struct ObjectData {
    complex: Complex,
    cohomology: BTreeMap<i32, Cohomology>,
}

/// `Hom^•` between the presentations of two objects, with `H^0` representatives.
pub struct HomData {
    pub complex: HomComplex,
    pub h0: Subquotient,
    pub basis: Vec<GradedMap>,
}

impl HomData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Class in `H^0` of a degree-0 cocycle.
    pub fn class_of(&self, f: &GradedMap) -> Vec<u32> {
        self.h0.class_of(&self.complex.to_coords(f))
    }

    pub fn element(&self, c: &[u32]) -> GradedMap {
        self.complex.from_coords(0, &self.h0.representative(c))
    }
}

type Memo<K, V> = RwLock<HashMap<K, V>>;

fn memo_get<K: std::hash::Hash + Eq, V: Clone>(map: &Memo<K, V>, k: &K) -> Option<V> {
    map.read().expect("memo lock").get(k).cloned()
}

fn memo_put<K: std::hash::Hash + Eq, V: Clone>(map: &Memo<K, V>, k: K, v: V) -> V {
    map.write().expect("memo lock").entry(k).or_insert(v).clone()
}

fn encode(c: &[u32], q: u32) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
}

fn decode(mut n: u64, q: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let x = (n % q as u64) as u32;
            n /= q as u64;
            x
        })
        .collect()
}

/// Nonzero cohomology dimension vectors of a complex, by degree (ranks only).
fn support_dims(c: &Complex) -> BTreeMap<i32, DimVector> {
    if c.is_empty() {
        return BTreeMap::new();
    }
    (c.lo()..=c.hi())
        .map(|n| (n, c.cohomology_dims(n)))
        .filter(|(_, d)| !d.is_zero())
        .collect()
}

fn pow_u128(q: u32, e: usize) -> u128 {
    saturating_pow(q, e)
}

/// Derived Hall algebra over a catalog; all tables are memoized write-once.
pub struct DerivedHallAlgebra {
    catalog: Arc<Catalog>,
    slot: SlotOrder,
    objects: Memo<PerfectObject, Arc<ObjectData>>,
    homs: Memo<(PerfectObject, PerfectObject), Arc<HomData>>,
    auts: Memo<PerfectObject, Arc<Vec<GradedMap>>>,
    arrows: Memo<(PerfectObject, PerfectObject), Arc<Vec<ArrowClass>>>,
    products: Memo<(PerfectObject, PerfectObject), DerivedHallElement>,
    audit: Mutex<Audit>,
}

impl DerivedHallAlgebra {
    pub fn new(catalog: Arc<Catalog>) -> Result<Self> {
        Self::with_slot_order(catalog, SlotOrder::default())
    }

    pub fn with_slot_order(catalog: Arc<Catalog>, slot: SlotOrder) -> Result<Self> {
        if !catalog.quiver().is_acyclic() {
            return Err(Error::CyclicQuiver);
        }
        Ok(DerivedHallAlgebra {
            catalog,
            slot,
            objects: RwLock::default(),
            homs: RwLock::default(),
            auts: RwLock::default(),
            arrows: RwLock::default(),
            products: RwLock::default(),
            audit: Mutex::default(),
        })
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn slot_order(&self) -> SlotOrder {
        self.slot
    }

    pub fn q(&self) -> u32 {
        self.catalog.field().order()
    }

    fn vertices(&self) -> usize {
        self.catalog.quiver().vertex_count()
    }

    pub fn digest(&self) -> String {
        self.catalog.quiver().digest()
    }

    pub fn audit(&self) -> Audit {
        self.audit.lock().expect("audit lock").clone()
    }

    pub fn zero(&self) -> DerivedHallElement {
        DerivedHallElement::zero(self.q(), self.digest())
    }

    pub fn basis(&self, x: &PerfectObject) -> DerivedHallElement {
        DerivedHallElement::basis(self.q(), self.digest(), x.clone())
    }

    pub fn unit(&self) -> DerivedHallElement {
        self.basis(&PerfectObject::zero())
    }

    pub fn render(&self, x: &PerfectObject) -> String {
        x.render(&self.catalog)
    }

    pub fn parse(&self, text: &str) -> Result<PerfectObject> {
        PerfectObject::parse(&self.catalog, text)
    }

    /// Embeds a classical element as degree-0 objects.
    pub fn from_classical(&self, x: &HallElement) -> DerivedHallElement {
        DerivedHallElement::from_terms(
            x.q(),
            x.quiver_digest(),
            x.terms()
                .iter()
                .map(|(l, c)| (PerfectObject::module(l.clone(), 0), c.clone())),
        )
    }

    fn representative(&self, label: &ClassLabel) -> Result<Representation> {
        self.catalog.representative(label)
    }

    fn object(&self, x: &PerfectObject) -> Result<Arc<ObjectData>> {
        if let Some(o) = memo_get(&self.objects, x) {
            return Ok(o);
        }
        let reps: BTreeMap<i32, Representation> = x
            .support
            .iter()
            .map(|(&i, l)| Ok((i, self.representative(l)?)))
            .collect::<Result<_>>()?;
        let complex = Complex::from_cohomology(self.catalog.field(), self.catalog.quiver().clone(), &reps)?;
        let cohomology = x
            .support
            .keys()
            .map(|&i| Ok((i, complex.cohomology(i)?)))
            .collect::<Result<_>>()?;
        let data = Arc::new(ObjectData { complex, cohomology });
        Ok(memo_put(&self.objects, x.clone(), data))
    }

    /// The chain-level presentation of `x`.
    pub fn presentation(&self, x: &PerfectObject) -> Result<Complex> {
        Ok(self.object(x)?.complex.clone())
    }

    pub fn hom(&self, x: &PerfectObject, y: &PerfectObject) -> Result<Arc<HomData>> {
        let key = (x.clone(), y.clone());
        if let Some(h) = memo_get(&self.homs, &key) {
            return Ok(h);
        }
        let complex = HomComplex::new(&self.object(x)?.complex, &self.object(y)?.complex)?;
        let h0 = complex.cohomology(0);
        let basis = h0
            .representatives()
            .iter()
            .map(|c| complex.from_coords(0, c))
            .collect();
        let data = Arc::new(HomData { complex, h0, basis });
        Ok(memo_put(&self.homs, key, data))
    }

    /// `dim Hom_D(x, y[n])` from module-level Hom and Ext¹ (hereditary splitting).
    pub fn ext_dim(&self, x: &PerfectObject, y: &PerfectObject, n: i32) -> Result<usize> {
        let mut total = 0;
        for (&a, ha) in &x.support {
            for (&b, hb) in &y.support {
                let e = n + a - b;
                if e == 0 || e == 1 {
                    let (m, nn) = (self.representative(ha)?, self.representative(hb)?);
                    total += if e == 0 { hom_dim(&m, &nn)? } else { ext1_dim(&m, &nn)? };
                }
            }
        }
        Ok(total)
    }

    /// `dim H^n Hom^•(P_x, P_y)`; an independent route to [`Self::ext_dim`].
    pub fn ext_dim_chain_level(&self, x: &PerfectObject, y: &PerfectObject, n: i32) -> Result<usize> {
        Ok(self.hom(x, y)?.complex.cohomology_dim(n))
    }

    fn check_hom_budget(&self, dim: usize) -> Result<()> {
        self.catalog.budget().check_power("derived Hom enumeration", self.q(), dim)?;
        Ok(())
    }

    /// One chain map per element of `Hom_D(x, y)`.
    pub fn enumerate_morphisms(&self, x: &PerfectObject, y: &PerfectObject) -> Result<Vec<GradedMap>> {
        let h = self.hom(x, y)?;
        self.check_hom_budget(h.dim())?;
        Ok(Coefficients::new(self.q(), h.dim()).map(|c| h.element(&c)).collect())
    }

    /// Classifies the cohomology of a complex into split normal form.
    pub fn classify_complex(&self, c: &Complex) -> Result<PerfectObject> {
        let mut support = BTreeMap::new();
        if c.is_empty() {
            return Ok(PerfectObject::zero());
        }
        for n in c.lo()..=c.hi() {
            if c.cohomology_dims(n).is_zero() {
                continue;
            }
            let h = c.cohomology(n)?;
            support.insert(n, self.catalog.classify(&h.rep)?);
        }
        Ok(PerfectObject::from_support(support))
    }

    fn cone_complex(&self, x: &PerfectObject, y: &PerfectObject, u: &GradedMap) -> Result<Complex> {
        let (xo, yo) = (self.object(x)?, self.object(y)?);
        yo.complex.cone(&xo.complex, u)
    }

    /// Cofiber of `u: x -> y`, in split normal form.
    pub fn cone(&self, x: &PerfectObject, y: &PerfectObject, u: &GradedMap) -> Result<PerfectObject> {
        self.classify_complex(&self.cone_complex(x, y, u)?)
    }

    /// Whether a degree-0 endomorphism of `x` induces isomorphisms on all cohomology.
    pub fn is_automorphism(&self, x: &PerfectObject, f: &GradedMap) -> Result<bool> {
        let o = self.object(x)?;
        let zero = |n: i32| crate::rep::RepMorphism::zero(
            self.catalog.field(),
            o.complex.term(n).dims(),
            o.complex.term(n).dims(),
        );
        Ok(o.cohomology.iter().all(|(&n, h)| {
            let comp = f.comps.get(&n).cloned().unwrap_or_else(|| zero(n));
            h.induced(h, &comp).is_invertible()
        }))
    }

    /// All automorphisms of `x` in the derived category (brute force over `H^0 End`).
    pub fn automorphisms(&self, x: &PerfectObject) -> Result<Arc<Vec<GradedMap>>> {
        if let Some(a) = memo_get(&self.auts, x) {
            return Ok(a);
        }
        let h = self.hom(x, x)?;
        self.check_hom_budget(h.dim())?;
        let mut out = Vec::new();
        for c in Coefficients::new(self.q(), h.dim()) {
            let f = h.element(&c);
            if self.is_automorphism(x, &f)? {
                out.push(f);
            }
        }
        Ok(memo_put(&self.auts, x.clone(), Arc::new(out)))
    }

    /// `|Aut_D(x)| = Π_a |Aut H^a| · q^{Σ_a ext¹(H^a, H^{a-1})}`.
    pub fn aut_order_closed(&self, x: &PerfectObject) -> Result<u128> {
        let mut order = 1u128;
        let mut exp = 0;
        for (&a, l) in &x.support {
            let m = self.representative(l)?;
            order = order.saturating_mul(aut_order(&m, self.catalog.budget())?);
            if let Some(prev) = x.support.get(&(a - 1)) {
                exp += ext1_dim(&m, &self.representative(prev)?)?;
            }
        }
        Ok(order.saturating_mul(pow_u128(self.q(), exp)))
    }

    /// Homotopy group orders of the object moduli at `x`, from closed forms.
    pub fn pi_orders_object(&self, x: &PerfectObject) -> Result<PiOrderTable> {
        let mut t = PiOrderTable::default();
        t.set(1, self.aut_order_closed(x)?);
        for i in 2..=self.higher_range(x) {
            t.set(i, pow_u128(self.q(), self.ext_dim(x, x, 1 - i as i32)?));
        }
        Ok(t)
    }

    /// The same table from unit counting in `H^0 End` and Hom-complex cohomology.
    pub fn pi_orders_object_brute(&self, x: &PerfectObject) -> Result<PiOrderTable> {
        let mut t = PiOrderTable::default();
        t.set(1, self.automorphisms(x)?.len() as u128);
        for i in 2..=self.higher_range(x) {
            t.set(i, pow_u128(self.q(), self.ext_dim_chain_level(x, x, 1 - i as i32)?));
        }
        Ok(t)
    }

    /// Beyond `width + 2`, `Ext^{1-i}(x, x)` vanishes for degree reasons.
    fn higher_range(&self, x: &PerfectObject) -> u32 {
        x.amplitude().map_or(1, |(a, b)| (b - a) as u32 + 2)
    }

    /// Candidate middle terms `y` of triangles `x -> y -> z`: supported where `x` or
    /// `z` is, with `dim H^a y ≤ dim H^a x + dim H^a z` and `[y] = [x] + [z]` in K₀.
    pub fn candidate_targets(&self, x: &PerfectObject, z: &PerfectObject) -> Result<Vec<PerfectObject>> {
        let nv = self.vertices();
        let degrees: BTreeSet<i32> = x.support.keys().chain(z.support.keys()).copied().collect();
        let k0 = x.k0_class(nv).add(&z.k0_class(nv));
        let mut per_degree: Vec<(i32, Vec<DimVector>)> = Vec::new();
        for &a in &degrees {
            let zero = DimVector::zero(nv);
            let bound = x
                .support
                .get(&a)
                .map_or(zero.clone(), |l| l.dims.clone())
                .add(&z.support.get(&a).map_or(zero, |l| l.dims.clone()));
            if !self.catalog.covers(&bound) {
                return Err(Error::OutsideCatalogBound {
                    dims: bound,
                    bound: self.catalog.bound().clone(),
                });
            }
            per_degree.push((a, bound.below()));
        }
        let mut out = Vec::new();
        let mut chosen: Vec<(i32, DimVector)> = Vec::new();
        self.targets_rec(&per_degree, &k0, &mut chosen, &mut out)?;
        out.sort();
        Ok(out)
    }

    fn targets_rec(
        &self,
        per_degree: &[(i32, Vec<DimVector>)],
        k0: &K0Class,
        chosen: &mut Vec<(i32, DimVector)>,
        out: &mut Vec<PerfectObject>,
    ) -> Result<()> {
        let Some(((a, options), rest)) = per_degree.split_first() else {
            let nv = self.vertices();
            let class = chosen.iter().fold(K0Class::zero(nv), |acc, (i, d)| {
                acc.add(&d.to_k0().scale(if i % 2 == 0 { 1 } else { -1 }))
            });
            if class != *k0 {
                return Ok(());
            }
            let mut objects = vec![PerfectObject::zero()];
            for (i, d) in chosen.iter() {
                if d.is_zero() {
                    continue;
                }
                let classes = self.catalog.classes_of_dim(d)?;
                objects = objects
                    .iter()
                    .flat_map(|o| {
                        classes.iter().map(move |l| {
                            let mut s = o.support.clone();
                            s.insert(*i, l.clone());
                            PerfectObject { support: s }
                        })
                    })
                    .collect();
            }
            out.extend(objects);
            return Ok(());
        };
        for d in options {
            chosen.push((*a, d.clone()));
            self.targets_rec(rest, k0, chosen, out)?;
            chosen.pop();
        }
        Ok(())
    }

    /// Matrices of `u ↦ ψ u` (for each `ψ ∈ Aut y`) and `u ↦ u φ` (for each `φ ∈ Aut x`)
    /// on `H^0`-coordinates of `Hom_D(x, y)`.
    fn action_matrices(&self, x: &PerfectObject, y: &PerfectObject) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
        let h = self.hom(x, y)?;
        let field = self.catalog.field();
        let r = h.dim();
        let left = self
            .automorphisms(y)?
            .iter()
            .map(|psi| {
                let cols: Vec<Vec<u32>> = h.basis.iter().map(|b| h.class_of(&psi.compose(b))).collect();
                Matrix::from_columns(field, r, &cols)
            })
            .collect();
        let right = self
            .automorphisms(x)?
            .iter()
            .map(|phi| {
                let cols: Vec<Vec<u32>> = h.basis.iter().map(|b| h.class_of(&b.compose(phi))).collect();
                Matrix::from_columns(field, r, &cols)
            })
            .collect();
        Ok((left, right))
    }

    /// Arrow classes `u: x -> y` with `cone(u) ≅ z`, over every candidate target `y`.
    pub fn arrow_classes(&self, x: &PerfectObject, z: &PerfectObject) -> Result<Arc<Vec<ArrowClass>>> {
        let key = (x.clone(), z.clone());
        if let Some(a) = memo_get(&self.arrows, &key) {
            return Ok(a);
        }
        let nv = self.vertices();
        let q = self.q();
        let z_dims = z.dims();
        let mut classes = Vec::new();
        for y in self.candidate_targets(x, z)? {
            let h = self.hom(x, &y)?;
            self.check_hom_budget(h.dim())?;
            let expected_k0 = y.k0_class(nv).sub(&x.k0_class(nv));
            let mut matching: Vec<u64> = Vec::new();
            let mut enumerated = 0u64;
            let mut violations = Vec::new();
            for c in Coefficients::new(q, h.dim()) {
                let u = h.element(&c);
                let cone = self.cone_complex(x, &y, &u)?;
                enumerated += 1;
                let dims = support_dims(&cone);
                let k0 = dims.iter().fold(K0Class::zero(nv), |acc, (i, d)| {
                    acc.add(&d.to_k0().scale(if i % 2 == 0 { 1 } else { -1 }))
                });
                if k0 != expected_k0 {
                    violations.push(format!(
                        "cone of {} -> {} has class {:?}, expected {:?}",
                        self.render(x),
                        self.render(&y),
                        k0.0,
                        expected_k0.0
                    ));
                }
                if dims == z_dims && self.classify_complex(&cone)? == *z {
                    matching.push(encode(&c, q));
                }
            }
            {
                let mut audit = self.audit.lock().expect("audit lock");
                audit.arrows_enumerated += enumerated;
                audit.cone_k0_violations.extend(violations);
            }
            if matching.is_empty() {
                continue;
            }
            let (left, right) = self.action_matrices(x, &y)?;
            let group = (left.len() as u128) * (right.len() as u128);
            // The two actions commute, so an orbit is the union of the Aut(y)-orbits
            // of `u φ` over φ ∈ Aut(x). Steps are charged as they are taken.
            let mut steps = 0u128;
            let mut unvisited: BTreeSet<u64> = matching.iter().copied().collect();
            while let Some(&start) = unvisited.iter().next() {
                let c = decode(start, q, h.dim());
                let mut orbit: HashSet<u64> = HashSet::new();
                steps += right.len() as u128;
                self.catalog.budget().check("arrow orbit enumeration", steps)?;
                for r in &right {
                    let v = r.mul_vec(&c).expect("shape");
                    if orbit.contains(&encode(&v, q)) {
                        continue;
                    }
                    steps += left.len() as u128;
                    self.catalog.budget().check("arrow orbit enumeration", steps)?;
                    for l in &left {
                        orbit.insert(encode(&l.mul_vec(&v).expect("shape"), q));
                    }
                }
                for o in &orbit {
                    if !unvisited.remove(o) {
                        return Err(Error::Invalid("orbit leaves the cone class".into()));
                    }
                }
                let orbit_size = orbit.len() as u128;
                if !group.is_multiple_of(orbit_size) {
                    return Err(Error::Integrality(format!(
                        "orbit of size {orbit_size} in a group of order {group}"
                    )));
                }
                let stabilizer = group / orbit_size;
                let u = h.element(&c);
                let pi = self.pi_orders_arrow_raw(x, &y, &u, stabilizer)?;
                classes.push(ArrowClass {
                    source: x.clone(),
                    target: y.clone(),
                    cone: z.clone(),
                    representative: u,
                    coords: c,
                    orbit_size,
                    stabilizer,
                    pi,
                });
            }
        }
        {
            let mut audit = self.audit.lock().expect("audit lock");
            for a in &classes {
                audit.arrow_classes.push(ArrowRecord {
                    source: a.source.clone(),
                    target: a.target.clone(),
                    cone: a.cone.clone(),
                    pi: a.pi.clone(),
                    orbit_size: a.orbit_size,
                    stabilizer: a.stabilizer,
                });
            }
        }
        Ok(memo_put(&self.arrows, key, Arc::new(classes)))
    }

    /// Direct count of pairs `(φ, ψ) ∈ Aut x × Aut y` with `ψ u = u φ` in `Hom_D`.
    pub fn commuting_pairs(&self, x: &PerfectObject, y: &PerfectObject, u: &GradedMap) -> Result<u128> {
        let h = self.hom(x, y)?;
        let auts_x = self.automorphisms(x)?;
        let auts_y = self.automorphisms(y)?;
        let right: Vec<Vec<u32>> = auts_x.iter().map(|phi| h.class_of(&u.compose(phi))).collect();
        let mut count = 0u128;
        for psi in auts_y.iter() {
            let l = h.class_of(&psi.compose(u));
            count += right.iter().filter(|r| **r == l).count() as u128;
        }
        Ok(count)
    }

    /// Homotopy group orders of the arrow moduli at `u: x -> y`.
    ///
    /// With `E(u)` the fiber of `End^•x ⊕ End^•y -> Hom^•(x, y)`, `(α, β) ↦ uα - βu`:
    /// `|π_1| = #{(φ, ψ): ψu = uφ} · q^{dim H^0 E - dim ker(H^0 map)}` (the second factor
    /// is the cokernel of the degree -1 map, i.e. homotopies between the two composites),
    /// and `|π_i| = q^{dim H^{1-i} E}` for `i ≥ 2`.
    pub fn pi_orders_arrow(&self, x: &PerfectObject, y: &PerfectObject, u: &GradedMap) -> Result<PiOrderTable> {
        let stab = self.commuting_pairs(x, y, u)?;
        self.pi_orders_arrow_raw(x, y, u, stab)
    }

    fn pi_orders_arrow_raw(
        &self,
        x: &PerfectObject,
        y: &PerfectObject,
        u: &GradedMap,
        stabilizer: u128,
    ) -> Result<PiOrderTable> {
        let field = self.catalog.field();
        let q = self.q();
        let (ex, ey, hxy) = (self.hom(x, x)?, self.hom(y, y)?, self.hom(x, y)?);
        let (cx, cy, ch) = (&ex.complex, &ey.complex, &hxy.complex);
        let lows = [
            cx.range().map(|r| r.0),
            cy.range().map(|r| r.0),
            ch.range().map(|r| r.0 + 1),
        ];
        let kmin = lows.iter().flatten().min().copied().unwrap_or(0).min(0);
        let dim_e = |k: i32| cx.dim(k) + cy.dim(k) + ch.dim(k - 1);
        // d_E^k : E^k -> E^{k+1}
        let d_e = |k: i32| -> Matrix {
            let rows = dim_e(k + 1);
            let cols = dim_e(k);
            let mut m = Matrix::zeros(field, rows, cols);
            let (ax, ay, ah) = (cx.dim(k), cy.dim(k), ch.dim(k - 1));
            let (bx, by) = (cx.dim(k + 1), cy.dim(k + 1));
            m.set_block(0, 0, &cx.differential(k));
            m.set_block(bx, ax, &cy.differential(k));
            m.set_block(bx + by, ax + ay, &ch.differential(k - 1).neg());
            for j in 0..ax {
                let mut e = vec![0; ax];
                e[j] = 1;
                let alpha = cx.from_coords(k, &e);
                let col = ch.to_coords(&u.compose(&alpha));
                for (i, v) in col.iter().enumerate() {
                    m.set(bx + by + i, j, *v);
                }
            }
            for j in 0..ay {
                let mut e = vec![0; ay];
                e[j] = 1;
                let beta = cy.from_coords(k, &e);
                let col = ch.to_coords(&beta.compose(u));
                for (i, v) in col.iter().enumerate() {
                    m.set(bx + by + i, ax + j, field.neg(*v));
                }
            }
            debug_assert_eq!(ah, ch.dim(k - 1));
            m
        };
        let ranks: BTreeMap<i32, usize> = ((kmin - 1)..=0).map(|k| (k, d_e(k).rank())).collect();
        let h_e = |k: i32| dim_e(k) - ranks[&k] - ranks[&(k - 1)];

        // commuting pairs as a subspace of H^0 End x ⊕ H^0 End y
        let cols: Vec<Vec<u32>> = ex
            .basis
            .iter()
            .map(|alpha| hxy.class_of(&u.compose(alpha)))
            .chain(ey.basis.iter().map(|beta| {
                hxy.class_of(&beta.compose(u))
                    .into_iter()
                    .map(|v| field.neg(v))
                    .collect()
            }))
            .collect();
        let commuting = ex.dim() + ey.dim() - Matrix::from_columns(field, hxy.dim(), &cols).rank();
        let h0 = h_e(0);
        if h0 < commuting {
            return Err(Error::Invalid("fiber complex smaller than commuting pairs".into()));
        }
        let mut t = PiOrderTable::default();
        t.set(1, stabilizer.saturating_mul(pow_u128(q, h0 - commuting)));
        for k in kmin..=-1 {
            t.set((1 - k) as u32, pow_u128(q, h_e(k)));
        }
        Ok(t)
    }

    /// `f_!` weight of an arrow class pushed forward along the target map:
    /// `Π_{i>0} |π_i(X¹, u)|^{(-1)^i} |π_i(X⁰, y)|^{(-1)^{i+1}}`.
    pub fn weight(&self, arrow: &ArrowClass) -> Result<BigRational> {
        let obj = self.pi_orders_object(&arrow.target)?;
        self.audit
            .lock()
            .expect("audit lock")
            .object_tables
            .push((arrow.target.clone(), obj.clone()));
        let top = arrow.pi.top().max(obj.top()).max(1);
        let mut w = BigRational::one();
        for i in 1..=top {
            let ratio = BigRational::new(
                BigInt::from(arrow.pi.get(i)),
                BigInt::from(obj.get(i)),
            );
            w *= if i % 2 == 0 { ratio } else { ratio.recip() };
        }
        Ok(w)
    }

    /// Every basis product computed so far, sorted.
    pub fn computed_products(&self) -> Vec<(PerfectObject, PerfectObject, DerivedHallElement)> {
        let mut out: Vec<_> = self
            .products
            .read()
            .expect("memo lock")
            .iter()
            .map(|((a, b), p)| (a.clone(), b.clone(), p.clone()))
            .collect();
        out.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        out
    }

    /// All objects supported in `[lo, hi]` whose cohomology has dims `≤ bound` in each degree.
    pub fn objects_in_range(&self, (lo, hi): (i32, i32), bound: &DimVector) -> Result<Vec<PerfectObject>> {
        let classes: Vec<ClassLabel> = bound
            .below()
            .iter()
            .map(|d| self.catalog.classes_of_dim(d))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut out = vec![PerfectObject::zero()];
        for deg in lo..=hi {
            out = out
                .iter()
                .flat_map(|o| {
                    classes.iter().map(move |l| {
                        let mut s = o.support.clone();
                        if !l.is_zero() {
                            s.insert(deg, l.clone());
                        }
                        PerfectObject { support: s }
                    })
                })
                .collect();
        }
        out.sort();
        Ok(out)
    }

    /// `(sub, cone)` for the basis product `μ(a, b)` under the configured slot order.
    pub fn slots<'a>(&self, a: &'a PerfectObject, b: &'a PerfectObject) -> (&'a PerfectObject, &'a PerfectObject) {
        match self.slot {
            SlotOrder::QuotientFirst => (b, a),
            SlotOrder::SubFirst => (a, b),
        }
    }

    pub fn product_basis(&self, a: &PerfectObject, b: &PerfectObject) -> Result<DerivedHallElement> {
        let key = (a.clone(), b.clone());
        if let Some(p) = memo_get(&self.products, &key) {
            return Ok(p);
        }
        let (sub, cone) = self.slots(a, b);
        let mut out = self.zero();
        for arrow in self.arrow_classes(sub, cone)?.iter() {
            out.add_term(arrow.target.clone(), self.weight(arrow)?);
        }
        Ok(memo_put(&self.products, key, out))
    }

    /// `μ = c_! ∘ (s × t)^*`, extended bilinearly.
    pub fn derived_product(&self, x: &DerivedHallElement, y: &DerivedHallElement) -> Result<DerivedHallElement> {
        if x.q() != self.q() {
            return Err(Error::FieldMismatch(self.q(), x.q()));
        }
        if x.quiver_digest() != self.digest() {
            return Err(Error::QuiverMismatch);
        }
        x.bilinear(y, |a, b| self.product_basis(a, b))
    }

    /// Closed-form coefficient of `[y]` in `μ(a, b)`: a sum over all morphisms
    /// `u: x -> y` with `cone(u) ≅ z` of `|Aut x|^{-1} Π_{j≥1} (|Ext^{-j}(x,y)| / |Ext^{-j}(x,x)|)^{(-1)^j}`.
    /// Independent of the orbit and π-table machinery; used only as an oracle.
    pub fn closed_form_coefficient(
        &self,
        a: &PerfectObject,
        b: &PerfectObject,
        y: &PerfectObject,
    ) -> Result<BigRational> {
        let (x, z) = self.slots(a, b);
        let q = self.q();
        let mut count = 0u128;
        for u in self.enumerate_morphisms(x, y)? {
            let cone = self.cone_complex(x, y, &u)?;
            if support_dims(&cone) == z.dims() && self.classify_complex(&cone)? == *z {
                count += 1;
            }
        }
        if count == 0 {
            return Ok(BigRational::from_integer(BigInt::from(0)));
        }
        let mut w = BigRational::new(BigInt::from(count), BigInt::from(self.aut_order_closed(x)?));
        // Ext^{-j}(x, -) vanishes once j exceeds the width of the combined support
        let hull = x
            .support
            .keys()
            .chain(y.support.keys())
            .fold(None, |acc: Option<(i32, i32)>, &i| {
                Some(acc.map_or((i, i), |(lo, hi)| (lo.min(i), hi.max(i))))
            });
        let span = hull.map_or(0, |(lo, hi)| hi - lo + 2);
        for j in 1..=span {
            let num = integer(pow_u128(q, self.ext_dim(x, y, -j)?));
            let den = integer(pow_u128(q, self.ext_dim(x, x, -j)?));
            let r = num / den;
            w *= if j % 2 == 0 { r } else { r.recip() };
        }
        Ok(w)
    }

    /// `1_{α_1, s_1} ⋆ ⋯ ⋆ 1_{α_m, s_m}` with `1_{ε_i, s}` the class of `S_i[-s]`.
    pub fn lusztig_monomial(&self, seq: &[(K0Class, i32)]) -> Result<DerivedHallElement> {
        let mut acc = self.unit();
        for (alpha, s) in seq {
            let i = alpha
                .simple_index()
                .filter(|_| alpha.len() == self.vertices())
                .ok_or_else(|| Error::Invalid(format!("{:?} is not a simple class", alpha.0)))?;
            let obj = PerfectObject::module(self.catalog.simple_label(i)?, *s);
            acc = self.derived_product(&acc, &self.basis(&obj))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::element::rational;
    use crate::ff::PrimeField;
    use crate::quiver::Quiver;

    fn algebra(n: usize, p: u32, bound: &[u32]) -> DerivedHallAlgebra {
        let f = PrimeField::new(p).unwrap();
        let c = Catalog::build(
            &f,
            Arc::new(Quiver::linear(n)),
            &DimVector(bound.to_vec()),
            &Budget::default(),
        )
        .unwrap();
        DerivedHallAlgebra::new(Arc::new(c)).unwrap()
    }

    fn obj(d: &DerivedHallAlgebra, s: &str) -> PerfectObject {
        d.parse(s).unwrap()
    }

    #[test]
    fn labels_roundtrip() {
        let d = algebra(2, 2, &[1, 1]);
        let x = obj(&d, "H0=(1,0);H-1=(0,1)");
        assert_eq!(d.render(&x), "H-1=(0,1);H0=(1,0)");
        assert_eq!(d.parse(&d.render(&x)).unwrap(), x);
        assert_eq!(d.render(&PerfectObject::zero()), "0");
        let j = x.to_json(d.catalog());
        assert_eq!(PerfectObject::from_json(d.catalog(), &j).unwrap(), x);
    }

    #[test]
    fn k0_and_amplitude() {
        let d = algebra(2, 2, &[1, 1]);
        let p = obj(&d, "(1,1)");
        assert_eq!(p.k0_class(2).0, vec![1, 1]);
        assert_eq!(p.shift(1).k0_class(2).0, vec![-1, -1]);
        let x = obj(&d, "H0=(1,0);H-1=(0,1)");
        assert_eq!(x.k0_class(2).0, vec![1, -1]);
        assert_eq!(x.amplitude(), Some((-1, 0)));
        assert_eq!(x.shift(-1).amplitude(), Some((0, 1)));
        assert_eq!(PerfectObject::zero().amplitude(), None);
    }

    #[test]
    fn ext_dims() {
        let d = algebra(2, 2, &[1, 1]);
        let s1 = obj(&d, "(1,0)");
        let s2 = obj(&d, "(0,1)");
        assert_eq!(d.ext_dim(&s1, &s1, 0).unwrap(), 1);
        assert_eq!(d.ext_dim(&s1.shift(1), &s2, 2).unwrap(), 1);
        for n in -3..=3 {
            for (x, y) in [(&s1, &s2), (&s2, &s1), (&s1, &s1.shift(1))] {
                assert_eq!(
                    d.ext_dim(x, y, n).unwrap(),
                    d.ext_dim_chain_level(x, y, n).unwrap(),
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn morphism_counts() {
        let d = algebra(2, 2, &[1, 1]);
        let s1 = obj(&d, "(1,0)");
        let s2 = obj(&d, "(0,1)");
        assert_eq!(d.enumerate_morphisms(&s1, &s2).unwrap().len(), 1);
        assert_eq!(d.enumerate_morphisms(&s1, &s2.shift(1)).unwrap().len(), 2);
        assert_eq!(d.enumerate_morphisms(&s1, &s1).unwrap().len(), 2);
    }

    #[test]
    fn cones() {
        let d = algebra(2, 2, &[1, 1]);
        let s1 = obj(&d, "(1,0)");
        let s2 = obj(&d, "(0,1)");
        let p = obj(&d, "(1,1)");
        let maps = d.enumerate_morphisms(&s1, &s2.shift(1)).unwrap();
        let cones: BTreeSet<PerfectObject> = maps
            .iter()
            .map(|u| d.cone(&s1, &s2.shift(1), u).unwrap())
            .collect();
        let split = s2.shift(1).direct_sum(&s1.shift(1));
        assert_eq!(cones, [p.shift(1), split].into());
        let id = d.automorphisms(&p).unwrap()[0].clone();
        assert!(d.cone(&p, &p, &id).unwrap().is_zero());
    }

    #[test]
    fn pi_tables_for_objects() {
        let d = algebra(2, 2, &[1, 1]);
        let s1 = obj(&d, "(1,0)");
        assert_eq!(d.pi_orders_object(&s1).unwrap(), PiOrderTable::default());
        let x = s1.direct_sum(&s1.shift(1));
        let t = d.pi_orders_object(&x).unwrap();
        assert_eq!(t.get(2), 2);
        assert_eq!(t, d.pi_orders_object_brute(&x).unwrap());
        let a1 = algebra(1, 2, &[2]);
        let k2 = obj(&a1, "2(1)");
        assert_eq!(a1.pi_orders_object(&k2).unwrap().get(1), 6);
        assert_eq!(a1.pi_orders_object_brute(&k2).unwrap().get(1), 6);
    }

    #[test]
    fn arrow_classes_a2() {
        let d = algebra(2, 2, &[1, 1]);
        let s1 = obj(&d, "(1,0)");
        let s2 = obj(&d, "(0,1)");
        let arrows = d.arrow_classes(&s2, &s1).unwrap();
        let targets: BTreeSet<PerfectObject> = arrows.iter().map(|a| a.target.clone()).collect();
        let p = obj(&d, "(1,1)");
        assert_eq!(targets, [p.clone(), s1.direct_sum(&s2)].into());
        let nonsplit = arrows.iter().find(|a| a.target == p).unwrap();
        assert_eq!(nonsplit.pi.get(1), 1);
        assert_eq!(
            d.pi_orders_arrow(&s2, &nonsplit.target, &nonsplit.representative).unwrap(),
            nonsplit.pi
        );
    }

    #[test]
    fn arrow_from_zero_and_identity() {
        let d = algebra(2, 3, &[1, 1]);
        let p = obj(&d, "(1,1)");
        let from_zero = d.arrow_classes(&PerfectObject::zero(), &p).unwrap();
        assert_eq!(from_zero.len(), 1);
        assert_eq!(from_zero[0].pi, d.pi_orders_object(&p).unwrap());
        let a1 = algebra(1, 3, &[2]);
        let k2 = obj(&a1, "2(1)");
        let id = a1.automorphisms(&k2).unwrap()[0].clone();
        let t = a1.pi_orders_arrow(&k2, &k2, &id).unwrap();
        assert_eq!(t.get(1), 48);
        assert_eq!(t.top(), 1);
    }

    #[test]
    fn a1_injection_orbit() {
        let d = algebra(1, 2, &[2]);
        let k = obj(&d, "(1)");
        let arrows = d.arrow_classes(&k, &k).unwrap();
        assert_eq!(arrows.len(), 1);
        assert_eq!(d.render(&arrows[0].target), "H0=2(1)");
        assert_eq!(arrows[0].orbit_size, 3);
    }

    #[test]
    fn classical_products() {
        let d = algebra(2, 2, &[1, 1]);
        let s1 = obj(&d, "(1,0)");
        let s2 = obj(&d, "(0,1)");
        let a = d.product_basis(&s1, &s2).unwrap();
        let want = d.basis(&obj(&d, "(1,1)")).add(&d.basis(&obj(&d, "(1,0)+(0,1)"))).unwrap();
        assert_eq!(a, want);
        let b = d.product_basis(&s2, &s1).unwrap();
        assert_eq!(b, d.basis(&obj(&d, "(1,0)+(0,1)")));
        let unit = d.unit();
        assert_eq!(d.derived_product(&unit, &d.basis(&s1)).unwrap(), d.basis(&s1));
        assert_eq!(d.derived_product(&d.basis(&s1), &unit).unwrap(), d.basis(&s1));
    }

    #[test]
    fn shifted_products_on_a1() {
        let f = PrimeField::new(2).unwrap();
        let c = Arc::new(
            Catalog::build(&f, Arc::new(Quiver::linear(1)), &DimVector(vec![2]), &Budget::default())
                .unwrap(),
        );
        let sub_first = DerivedHallAlgebra::with_slot_order(c.clone(), SlotOrder::SubFirst).unwrap();
        let k = obj(&sub_first, "(1)");
        let k1 = k.shift(1);
        let p = sub_first.product_basis(&k, &k1).unwrap();
        let split = k.direct_sum(&k1);
        let want = DerivedHallElement::from_terms(
            2,
            sub_first.digest(),
            [(PerfectObject::zero(), integer(1)), (split.clone(), rational(1, 2))],
        );
        assert_eq!(p, want);
        let default = DerivedHallAlgebra::new(c).unwrap();
        assert_eq!(default.product_basis(&k, &k1).unwrap(), default.basis(&split));
        for (a, b) in [(&k, &k1), (&k1, &k)] {
            for y in [PerfectObject::zero(), split.clone()] {
                let coeff = sub_first.product_basis(a, b).unwrap().coefficient(&y);
                assert_eq!(coeff, sub_first.closed_form_coefficient(a, b, &y).unwrap());
            }
        }
    }

    #[test]
    fn lusztig() {
        let d = algebra(2, 2, &[1, 1]);
        let e1 = K0Class(vec![1, 0]);
        let e2 = K0Class(vec![0, 1]);
        let single = d.lusztig_monomial(&[(e1.clone(), 0)]).unwrap();
        assert_eq!(single, d.basis(&obj(&d, "(1,0)")));
        let two = d.lusztig_monomial(&[(e1.clone(), 0), (e2.clone(), 0)]).unwrap();
        let cat = d
            .derived_product(&single, &d.lusztig_monomial(&[(e2, 0)]).unwrap())
            .unwrap();
        assert_eq!(two, cat);
        assert_eq!(two.len(), 2);
        assert!(d.lusztig_monomial(&[(K0Class(vec![1, 1]), 0)]).is_err());
    }
}
