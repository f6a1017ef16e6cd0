//! Bounded complexes of representations, projective presentations, Hom complexes
//! and mapping cones.
//!
//! Complexes are cohomological: `d^n: C^n -> C^{n+1}`. For a module `M` the
//! standard presentation `0 -> ⊕_{a: i->j} P_j ⊗ M_i -> ⊕_i P_i ⊗ M_i -> M -> 0`
//! sits in degrees `-1, 0`, with `d(p ⊗ m) = (a p) ⊗ m - p ⊗ M_a m`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{Matrix, PrimeField};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{hom_space, RepMorphism, Representation};

/// Coordinates with respect to a basis given as the columns of a full-column-rank matrix.
#[derive(Debug, Clone)]
pub struct Coordinates {
    basis: Matrix,
    rows: Vec<usize>,
    inverse: Matrix,
}

impl Coordinates {
    pub fn new(basis: Matrix) -> Self {
        let rows = basis.transpose().rref().pivots;
        debug_assert_eq!(rows.len(), basis.cols(), "basis columns must be independent");
        let mut square = Matrix::zeros(basis.field(), rows.len(), basis.cols());
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..basis.cols() {
                square.set(i, c, basis.get(r, c));
            }
        }
        let inverse = square.inverse().expect("independent columns");
        Coordinates {
            basis,
            rows,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.cols() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `v`, which must lie in the span.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        let picked: Vec<u32> = self.rows.iter().map(|&r| v[r]).collect();
        let c = self.inverse.mul_vec(&picked).expect("shape");
        debug_assert_eq!(self.basis.mul_vec(&c).expect("shape"), v, "vector outside span");
        c
    }

    pub fn combine(&self, c: &[u32]) -> Vec<u32> {
        self.basis.mul_vec(c).expect("shape")
    }
}

/// A quotient `Z / B` of coordinate spaces, with a chosen complement of `B` in `Z`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    coords: Coordinates,
    boundary_rank: usize,
}

impl Subquotient {
    /// `boundaries` spans `B` (possibly redundantly); `cycles` is a basis of `Z ⊇ B`.
    pub fn new(field: &PrimeField, ambient: usize, boundaries: &[Vec<u32>], cycles: &[Vec<u32>]) -> Self {
        let all: Vec<Vec<u32>> = boundaries.iter().chain(cycles).cloned().collect();
        let m = Matrix::from_columns(field, ambient, &all);
        let pivots = m.rref().pivots;
        let boundary_rank = pivots.iter().filter(|&&p| p < boundaries.len()).count();
        let chosen: Vec<Vec<u32>> = pivots.iter().map(|&p| all[p].clone()).collect();
        Subquotient {
            coords: Coordinates::new(Matrix::from_columns(field, ambient, &chosen)),
            boundary_rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - self.boundary_rank
    }

    /// Class of a cycle, in the complement basis.
    pub fn class_of(&self, cycle: &[u32]) -> Vec<u32> {
        self.coords.coords(cycle)[self.boundary_rank..].to_vec()
    }

    /// Chosen cycle representing the class with coordinates `c`.
    pub fn representative(&self, c: &[u32]) -> Vec<u32> {
        let mut full = vec![0; self.boundary_rank];
        full.extend_from_slice(c);
        self.coords.combine(&full)
    }

    pub fn representatives(&self) -> Vec<Vec<u32>> {
        (self.boundary_rank..self.coords.len())
            .map(|i| self.coords.basis().column(i))
            .collect()
    }
}

/// Indecomposable projective `P_i`: basis of `P_i(v)` is the set of paths `i ⇝ v`.
#[derive(Debug, Clone)]
pub struct Projective {
    pub vertex: usize,
    pub paths: Vec<Vec<Vec<usize>>>,
    pub rep: Representation,
}

fn paths_from(quiver: &Quiver, i: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_end = vec![Vec::new(); quiver.vertex_count()];
    let mut frontier = vec![(i, Vec::new())];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (v, path) in frontier {
            for (ai, a) in quiver.arrows().iter().enumerate() {
                if a.source == v {
                    let mut p: Vec<usize> = path.clone();
                    p.push(ai);
                    next.push((a.target, p));
                }
            }
            by_end[v].push(path);
        }
        frontier = next;
    }
    for paths in &mut by_end {
        paths.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    }
    by_end
}

impl Projective {
    pub fn new(field: &PrimeField, quiver: Arc<Quiver>, i: usize) -> Result<Self> {
        if !quiver.is_acyclic() {
            return Err(Error::CyclicQuiver);
        }
        let paths = paths_from(&quiver, i);
        let dims = DimVector(paths.iter().map(|p| p.len() as u32).collect());
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Matrix::zeros(field, paths[a.target].len(), paths[a.source].len());
                for (c, p) in paths[a.source].iter().enumerate() {
                    let mut ext = p.clone();
                    ext.push(ai);
                    let r = paths[a.target].iter().position(|x| *x == ext).expect("path");
                    m.set(r, c, 1);
                }
                m
            })
            .collect();
        let rep = Representation::new(field, quiver, dims, maps)?;
        Ok(Projective {
            vertex: i,
            paths,
            rep,
        })
    }

    fn index(&self, v: usize, path: &[usize]) -> usize {
        self.paths[v].iter().position(|p| p == path).expect("path")
    }
}

/// `A ⊗ I_m`, block index `(row·m + k, col·m + k)`.
fn kron_identity(a: &Matrix, m: usize) -> Matrix {
    let mut out = Matrix::zeros(a.field(), a.rows() * m, a.cols() * m);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let x = a.get(r, c);
            if x != 0 {
                for k in 0..m {
                    out.set(r * m + k, c * m + k, x);
                }
            }
        }
    }
    out
}

fn tensor(p: &Projective, m: usize) -> Result<Representation> {
    let rep = &p.rep;
    Representation::new(
        rep.field(),
        rep.quiver().clone(),
        DimVector(rep.dims().0.iter().map(|&d| d * m as u32).collect()),
        rep.maps().iter().map(|a| kron_identity(a, m)).collect(),
    )
}

fn direct_sum_all(field: &PrimeField, quiver: &Arc<Quiver>, reps: &[Representation]) -> Result<Representation> {
    let mut acc = Representation::zero(field, quiver.clone());
    for r in reps {
        acc = acc.direct_sum(r)?;
    }
    Ok(acc)
}

/// The two-term projective presentation `p1 -> p0` of a module.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub p1: Representation,
    pub p0: Representation,
    pub d: RepMorphism,
}

impl Presentation {
    pub fn new(m: &Representation) -> Result<Self> {
        let field = m.field();
        let quiver = m.quiver();
        let nv = quiver.vertex_count();
        let projectives = (0..nv)
            .map(|i| Projective::new(field, quiver.clone(), i))
            .collect::<Result<Vec<_>>>()?;
        let p0_parts = (0..nv)
            .map(|i| tensor(&projectives[i], m.dim_at(i)))
            .collect::<Result<Vec<_>>>()?;
        let p1_parts = quiver
            .arrows()
            .iter()
            .map(|a| tensor(&projectives[a.target], m.dim_at(a.source)))
            .collect::<Result<Vec<_>>>()?;
        let p0 = direct_sum_all(field, quiver, &p0_parts)?;
        let p1 = direct_sum_all(field, quiver, &p1_parts)?;
        let offsets = |parts: &[Representation], v: usize| -> Vec<usize> {
            let mut acc = 0;
            parts
                .iter()
                .map(|p| {
                    let o = acc;
                    acc += p.dim_at(v);
                    o
                })
                .collect()
        };
        let mut d = Vec::with_capacity(nv);
        for v in 0..nv {
            let (off0, off1) = (offsets(&p0_parts, v), offsets(&p1_parts, v));
            let mut mat = Matrix::zeros(field, p0.dim_at(v), p1.dim_at(v));
            for (ai, a) in quiver.arrows().iter().enumerate() {
                let (i, j) = (a.source, a.target);
                let (mi, mj) = (m.dim_at(i), m.dim_at(j));
                for (pi, p) in projectives[j].paths[v].iter().enumerate() {
                    let mut ap = vec![ai];
                    ap.extend_from_slice(p);
                    let idx = projectives[i].index(v, &ap);
                    for k in 0..mi {
                        let col = off1[ai] + pi * mi + k;
                        mat.set(off0[i] + idx * mi + k, col, 1);
                        for l in 0..mj {
                            let x = m.maps()[ai].get(l, k);
                            let row = off0[j] + pi * mj + l;
                            mat.set(row, col, field.sub(mat.get(row, col), x));
                        }
                    }
                }
            }
            d.push(mat);
        }
        Ok(Presentation {
            p1,
            p0,
            d: RepMorphism(d),
        })
    }
}

/// Checks `g_t ∘ src_a = tgt_a ∘ g_s` for every arrow.
pub fn is_morphism(f: &RepMorphism, src: &Representation, tgt: &Representation) -> bool {
    src.quiver().arrows().iter().enumerate().all(|(ai, a)| {
        f.0[a.target].mul(&src.maps()[ai]).ok() == tgt.maps()[ai].mul(&f.0[a.source]).ok()
    })
}

/// Block morphism `⊕_c src_c -> ⊕_r tgt_r`; missing blocks are zero.
fn block_morphism(
    field: &PrimeField,
    src: &[&Representation],
    tgt: &[&Representation],
    blocks: &[(usize, usize, RepMorphism)],
) -> RepMorphism {
    let nv = src.first().or(tgt.first()).map_or(0, |r| r.quiver().vertex_count());
    let mut out = Vec::with_capacity(nv);
    for v in 0..nv {
        let rows: Vec<usize> = tgt.iter().map(|r| r.dim_at(v)).collect();
        let cols: Vec<usize> = src.iter().map(|r| r.dim_at(v)).collect();
        let mut m = Matrix::zeros(field, rows.iter().sum(), cols.iter().sum());
        for (r, c, f) in blocks {
            m.set_block(rows[..*r].iter().sum(), cols[..*c].iter().sum(), &f.0[v]);
        }
        out.push(m);
    }
    RepMorphism(out)
}

/// A bounded cochain complex of representations, `terms[k]` in degree `lo + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    field: PrimeField,
    quiver: Arc<Quiver>,
    lo: i32,
    terms: Vec<Representation>,
    diffs: Vec<RepMorphism>,
}

impl Complex {
    pub fn new(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        lo: i32,
        terms: Vec<Representation>,
        diffs: Vec<RepMorphism>,
    ) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::Shape("one differential between consecutive terms".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if !is_morphism(d, &terms[k], &terms[k + 1]) {
                return Err(Error::Shape(format!("differential {} is not a morphism", lo + k as i32)));
            }
            if k > 0 && !d.compose(&diffs[k - 1]).is_zero() {
                return Err(Error::Shape(format!("d∘d ≠ 0 at degree {}", lo + k as i32)));
            }
        }
        Ok(Complex {
            field: field.clone(),
            quiver,
            lo,
            terms,
            diffs,
        })
    }

    pub fn zero(field: &PrimeField, quiver: Arc<Quiver>) -> Self {
        Complex {
            field: field.clone(),
            quiver,
            lo: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `⊕_a H^a[-a]` realised by projective presentations: degree `n` holds
    /// `P0(H^n) ⊕ P1(H^{n+1})` and the only nonzero differentials are the presentation maps.
    pub fn from_cohomology(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        cohomology: &BTreeMap<i32, Representation>,
    ) -> Result<Self> {
        let (Some(&lo), Some(&hi)) = (cohomology.keys().next(), cohomology.keys().next_back()) else {
            return Ok(Self::zero(field, quiver));
        };
        let zero = Representation::zero(field, quiver.clone());
        let pres: BTreeMap<i32, Presentation> = cohomology
            .iter()
            .map(|(&a, h)| Ok((a, Presentation::new(h)?)))
            .collect::<Result<_>>()?;
        let p0 = |n: i32| pres.get(&n).map_or(&zero, |p| &p.p0);
        let p1 = |n: i32| pres.get(&n).map_or(&zero, |p| &p.p1);
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in (lo - 1)..=hi {
            terms.push(p0(n).direct_sum(p1(n + 1))?);
            if n < hi {
                let blocks = match pres.get(&(n + 1)) {
                    Some(p) => vec![(0, 1, p.d.clone())],
                    None => vec![],
                };
                diffs.push(block_morphism(
                    field,
                    &[p0(n), p1(n + 1)],
                    &[p0(n + 1), p1(n + 2)],
                    &blocks,
                ));
            }
        }
        Complex::new(field, quiver, lo - 1, terms, diffs)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn term(&self, n: i32) -> Representation {
        self.term_ref(n)
            .cloned()
            .unwrap_or_else(|| Representation::zero(&self.field, self.quiver.clone()))
    }

    fn term_ref(&self, n: i32) -> Option<&Representation> {
        if n < self.lo {
            return None;
        }
        self.terms.get((n - self.lo) as usize)
    }

    fn term_dims(&self, n: i32) -> DimVector {
        self.term_ref(n)
            .map_or_else(|| DimVector::zero(self.quiver.vertex_count()), |t| t.dims().clone())
    }

    /// `d^n: C^n -> C^{n+1}`.
    pub fn diff(&self, n: i32) -> RepMorphism {
        if n >= self.lo && ((n - self.lo) as usize) < self.diffs.len() {
            return self.diffs[(n - self.lo) as usize].clone();
        }
        RepMorphism::zero(&self.field, &self.term_dims(n), &self.term_dims(n + 1))
    }

    fn subquotient_at(&self, n: i32, v: usize) -> Subquotient {
        let d_out = &self.diff(n).0[v];
        let d_in = &self.diff(n - 1).0[v];
        let boundaries: Vec<Vec<u32>> = (0..d_in.cols()).map(|c| d_in.column(c)).collect();
        Subquotient::new(&self.field, d_out.cols(), &boundaries, &d_out.kernel_basis())
    }

    /// `H^n` as a representation, with the per-vertex subquotient data used for induced maps.
    pub fn cohomology(&self, n: i32) -> Result<Cohomology> {
        let nv = self.quiver.vertex_count();
        let per_vertex: Vec<Subquotient> = (0..nv).map(|v| self.subquotient_at(n, v)).collect();
        let dims = DimVector(per_vertex.iter().map(|s| s.dim() as u32).collect());
        let term = self.term(n);
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let src = &per_vertex[a.source];
                let cols: Vec<Vec<u32>> = src
                    .representatives()
                    .iter()
                    .map(|h| per_vertex[a.target].class_of(&term.maps()[ai].mul_vec(h).expect("shape")))
                    .collect();
                Matrix::from_columns(&self.field, per_vertex[a.target].dim(), &cols)
            })
            .collect();
        Ok(Cohomology {
            rep: Representation::new(&self.field, self.quiver.clone(), dims, maps)?,
            per_vertex,
        })
    }

    /// Dimension vector of `H^n` from ranks alone.
    pub fn cohomology_dims(&self, n: i32) -> DimVector {
        let (d_out, d_in) = (self.diff(n), self.diff(n - 1));
        DimVector(
            (0..self.quiver.vertex_count())
                .map(|v| (d_out.0[v].cols() - d_out.0[v].rank() - d_in.0[v].rank()) as u32)
                .collect(),
        )
    }

    pub fn is_acyclic(&self) -> bool {
        (self.lo..=self.hi()).all(|n| self.cohomology_dims(n).is_zero())
    }

    /// Mapping cone of a degree-0 chain map `u: x -> self`:
    /// `C^n = Y^n ⊕ X^{n+1}`, `d(y, x) = (d y + u x, -d x)`.
    pub fn cone(&self, x: &Complex, u: &GradedMap) -> Result<Complex> {
        let y = self;
        if u.degree != 0 {
            return Err(Error::Invalid("cone of a map of nonzero degree".into()));
        }
        if x.is_empty() {
            return Ok(y.clone());
        }
        if y.is_empty() && x.is_empty() {
            return Ok(Complex::zero(&self.field, self.quiver.clone()));
        }
        let lo = if y.is_empty() { x.lo - 1 } else { y.lo.min(x.lo - 1) };
        let hi = if y.is_empty() { x.hi() - 1 } else { y.hi().max(x.hi() - 1) };
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let (yn, xn1) = (y.term(n), x.term(n + 1));
            terms.push(yn.direct_sum(&xn1)?);
            if n < hi {
                let (yn1, xn2) = (y.term(n + 1), x.term(n + 2));
                let mut blocks = vec![(0, 0, y.diff(n)), (1, 1, x.diff(n + 1).neg())];
                if let Some(un) = u.comps.get(&(n + 1)) {
                    blocks.push((0, 1, un.clone()));
                }
                diffs.push(block_morphism(&self.field, &[&yn, &xn1], &[&yn1, &xn2], &blocks));
            }
        }
        Complex::new(&self.field, self.quiver.clone(), lo, terms, diffs)
    }
}

/// `H^n` of a complex together with the data to push cycles into it.
#[derive(Debug, Clone)]
pub struct Cohomology {
    pub rep: Representation,
    per_vertex: Vec<Subquotient>,
}

impl Cohomology {
    /// The map `H^n(x) -> H^n(y)` induced by a chain map with component `f: x^n -> y^n`.
    pub fn induced(&self, target: &Cohomology, f: &RepMorphism) -> RepMorphism {
        RepMorphism(
            self.per_vertex
                .iter()
                .zip(&target.per_vertex)
                .zip(&f.0)
                .map(|((s, t), fv)| {
                    let cols: Vec<Vec<u32>> = s
                        .representatives()
                        .iter()
                        .map(|h| t.class_of(&fv.mul_vec(h).expect("shape")))
                        .collect();
                    Matrix::from_columns(fv.field(), t.dim(), &cols)
                })
                .collect(),
        )
    }
}

impl RepMorphism {
    pub fn neg(&self) -> RepMorphism {
        RepMorphism(self.0.iter().map(Matrix::neg).collect())
    }

    pub fn scale(&self, c: u32) -> RepMorphism {
        RepMorphism(self.0.iter().map(|m| m.scale(c)).collect())
    }

    fn flatten(&self) -> Vec<u32> {
        self.0.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }
}

/// A homogeneous element of `Hom^•(X, Y)`: components `X^m -> Y^{m + degree}`;
/// absent components are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub degree: i32,
    pub comps: BTreeMap<i32, RepMorphism>,
}

impl GradedMap {
    pub fn zero(degree: i32) -> Self {
        GradedMap {
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        let mut comps = BTreeMap::new();
        for (&m, f) in &other.comps {
            if let Some(g) = self.comps.get(&(m + other.degree)) {
                let h = g.compose(f);
                if !h.is_zero() {
                    comps.insert(m, h);
                }
            }
        }
        GradedMap {
            degree: self.degree + other.degree,
            comps,
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.degree, other.degree);
        let mut comps = self.comps.clone();
        for (&m, f) in &other.comps {
            let sum = match comps.get(&m) {
                Some(g) => g.add(f),
                None => f.clone(),
            };
            if sum.is_zero() {
                comps.remove(&m);
            } else {
                comps.insert(m, sum);
            }
        }
        GradedMap {
            degree: self.degree,
            comps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(RepMorphism::is_zero)
    }
}

#[derive(Debug, Clone)]
struct Block {
    m: i32,
    offset: usize,
    basis: Vec<RepMorphism>,
    coords: Coordinates,
}

#[derive(Debug, Clone, Default)]
struct GradedHom {
    blocks: Vec<Block>,
    dim: usize,
}

/// `Hom^n(X, Y) = ⊕_m Hom(X^m, Y^{m+n})` with `D f = d_Y f - (-1)^n f d_X`,
/// all spaces carried in coordinates.
#[derive(Debug, Clone)]
pub struct HomComplex {
    field: PrimeField,
    spaces: BTreeMap<i32, GradedHom>,
    diffs: BTreeMap<i32, Matrix>,
}

impl HomComplex {
    pub fn new(x: &Complex, y: &Complex) -> Result<Self> {
        let field = x.field().clone();
        let mut hc = HomComplex {
            field: field.clone(),
            spaces: BTreeMap::new(),
            diffs: BTreeMap::new(),
        };
        if x.is_empty() || y.is_empty() {
            return Ok(hc);
        }
        let (nlo, nhi) = (y.lo() - x.hi(), y.hi() - x.lo());
        for n in nlo..=nhi {
            let mut space = GradedHom::default();
            for m in x.lo()..=x.hi() {
                let (xm, yn) = (x.term(m), y.term(m + n));
                if xm.is_zero() || yn.is_zero() {
                    continue;
                }
                let basis = hom_space(&xm, &yn)?;
                if basis.is_empty() {
                    continue;
                }
                let len = basis[0].flatten().len();
                let cols: Vec<Vec<u32>> = basis.iter().map(RepMorphism::flatten).collect();
                let coords = Coordinates::new(Matrix::from_columns(&field, len, &cols));
                let offset = space.dim;
                space.dim += basis.len();
                space.blocks.push(Block {
                    m,
                    offset,
                    basis,
                    coords,
                });
            }
            hc.spaces.insert(n, space);
        }
        for n in (nlo - 1)..=nhi {
            let cols: Vec<Vec<u32>> = (0..hc.dim(n))
                .map(|k| {
                    let f = hc.basis_element(n, k);
                    let (m, fk) = f.comps.iter().next().expect("basis element");
                    let mut df = GradedMap::zero(n + 1);
                    df.comps.insert(*m, y.diff(m + n).compose(fk));
                    let sign = if n % 2 == 0 { field.neg(1) } else { 1 };
                    let tail = GradedMap {
                        degree: n + 1,
                        comps: [(m - 1, fk.compose(&x.diff(m - 1)).scale(sign))].into(),
                    };
                    hc.to_coords(&df.add(&tail))
                })
                .collect();
            hc.diffs
                .insert(n, Matrix::from_columns(&field, hc.dim(n + 1), &cols));
        }
        Ok(hc)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self, n: i32) -> usize {
        self.spaces.get(&n).map_or(0, |s| s.dim)
    }

    /// Degrees where `Hom^n` may be nonzero, as `(lo, hi)`; `None` when all vanish.
    pub fn range(&self) -> Option<(i32, i32)> {
        let lo = self.spaces.iter().find(|(_, s)| s.dim > 0)?.0;
        let hi = self.spaces.iter().rev().find(|(_, s)| s.dim > 0)?.0;
        Some((*lo, *hi))
    }

    /// `D^n` as a `dim(n+1) × dim(n)` matrix.
    pub fn differential(&self, n: i32) -> Matrix {
        self.diffs
            .get(&n)
            .filter(|m| m.rows() == self.dim(n + 1) && m.cols() == self.dim(n))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.field, self.dim(n + 1), self.dim(n)))
    }

    fn basis_element(&self, n: i32, k: usize) -> GradedMap {
        let space = &self.spaces[&n];
        let b = space
            .blocks
            .iter()
            .find(|b| k >= b.offset && k < b.offset + b.basis.len())
            .expect("index in range");
        GradedMap {
            degree: n,
            comps: [(b.m, b.basis[k - b.offset].clone())].into(),
        }
    }

    /// Coordinates of a graded map in the basis of `Hom^{degree}`.
    pub fn to_coords(&self, f: &GradedMap) -> Vec<u32> {
        let Some(space) = self.spaces.get(&f.degree) else {
            debug_assert!(f.is_zero());
            return Vec::new();
        };
        let mut out = vec![0; space.dim];
        for b in &space.blocks {
            if let Some(c) = f.comps.get(&b.m) {
                let v = b.coords.coords(&c.flatten());
                out[b.offset..b.offset + v.len()].copy_from_slice(&v);
            }
        }
        debug_assert!(f
            .comps
            .iter()
            .all(|(m, c)| c.is_zero() || space.blocks.iter().any(|b| b.m == *m)));
        out
    }

    pub fn from_coords(&self, n: i32, c: &[u32]) -> GradedMap {
        let mut out = GradedMap::zero(n);
        let Some(space) = self.spaces.get(&n) else {
            return out;
        };
        for b in &space.blocks {
            let coeffs = &c[b.offset..b.offset + b.basis.len()];
            if coeffs.iter().all(|&x| x == 0) {
                continue;
            }
            let mut acc: Option<RepMorphism> = None;
            for (f, &x) in b.basis.iter().zip(coeffs) {
                if x != 0 {
                    let t = f.scale(x);
                    acc = Some(match acc {
                        Some(a) => a.add(&t),
                        None => t,
                    });
                }
            }
            out.comps.insert(b.m, acc.expect("nonzero"));
        }
        out
    }

    /// `H^n` as a subquotient of coordinate space.
    pub fn cohomology(&self, n: i32) -> Subquotient {
        let d_in = self.differential(n - 1);
        let boundaries: Vec<Vec<u32>> = (0..d_in.cols()).map(|c| d_in.column(c)).collect();
        Subquotient::new(&self.field, self.dim(n), &boundaries, &self.differential(n).kernel_basis())
    }

    pub fn cohomology_dim(&self, n: i32) -> usize {
        self.dim(n) - self.differential(n).rank() - self.differential(n - 1).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver;

    fn a2(p: u32) -> (PrimeField, Arc<Quiver>) {
        (PrimeField::new(p).unwrap(), Arc::new(Quiver::linear(2)))
    }

    fn rep(f: &PrimeField, q: &Arc<Quiver>, dims: &[u32], maps: &[&[&[i64]]]) -> Representation {
        Representation::new(
            f,
            q.clone(),
            DimVector(dims.to_vec()),
            maps.iter()
                .zip(q.arrows())
                .map(|(rows, a)| {
                    if rows.is_empty() {
                        Matrix::zeros(f, dims[a.target] as usize, dims[a.source] as usize)
                    } else {
                        Matrix::from_rows(f, rows).unwrap()
                    }
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn projectives_of_a3() {
        let f = PrimeField::new(2).unwrap();
        let q = Arc::new(Quiver::linear(3));
        let dims: Vec<Vec<u32>> = (0..3)
            .map(|i| Projective::new(&f, q.clone(), i).unwrap().rep.dims().0.clone())
            .collect();
        assert_eq!(dims, vec![vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]);
    }

    #[test]
    fn kronecker_projective() {
        let f = PrimeField::new(3).unwrap();
        let q = Arc::new(parse_quiver("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2").unwrap());
        let p = Projective::new(&f, q, 0).unwrap();
        assert_eq!(p.rep.dims().0, vec![1, 2]);
    }

    #[test]
    fn presentation_resolves_module() {
        let (f, q) = a2(3);
        for m in [
            rep(&f, &q, &[1, 1], &[&[&[1]]]),
            rep(&f, &q, &[1, 0], &[&[]]),
            rep(&f, &q, &[2, 1], &[&[&[1, 2]]]),
        ] {
            let p = Presentation::new(&m).unwrap();
            assert!(is_morphism(&p.d, &p.p1, &p.p0));
            assert!(p.d.is_injective());
            let c = Complex::from_cohomology(&f, q.clone(), &[(0, m.clone())].into()).unwrap();
            assert_eq!(c.cohomology_dims(-1), DimVector::zero(2));
            let h = c.cohomology(0).unwrap();
            assert!(crate::rep::brute_force_isomorphic(&h.rep, &m, &Default::default()).unwrap());
        }
    }

    #[test]
    fn hom_complex_computes_ext() {
        let (f, q) = a2(2);
        let s1 = rep(&f, &q, &[1, 0], &[&[]]);
        let s2 = rep(&f, &q, &[0, 1], &[&[]]);
        let x = Complex::from_cohomology(&f, q.clone(), &[(0, s1)].into()).unwrap();
        let y = Complex::from_cohomology(&f, q.clone(), &[(0, s2)].into()).unwrap();
        let h = HomComplex::new(&x, &y).unwrap();
        // Hom(S1,S2) = 0, Ext^1(S1,S2) = k
        assert_eq!(h.cohomology_dim(0), 0);
        assert_eq!(h.cohomology_dim(1), 1);
        let back = HomComplex::new(&y, &x).unwrap();
        assert_eq!(back.cohomology_dim(0), 0);
        assert_eq!(back.cohomology_dim(1), 0);
    }

    #[test]
    fn differential_squares_to_zero() {
        let (f, q) = a2(3);
        let m = rep(&f, &q, &[2, 1], &[&[&[1, 0]]]);
        let n = rep(&f, &q, &[1, 2], &[&[&[1], &[2]]]);
        let x = Complex::from_cohomology(&f, q.clone(), &[(0, m), (1, n.clone())].into()).unwrap();
        let y = Complex::from_cohomology(&f, q.clone(), &[(-1, n)].into()).unwrap();
        let h = HomComplex::new(&x, &y).unwrap();
        let (lo, hi) = h.range().unwrap();
        for k in lo - 1..=hi {
            assert!(h.differential(k + 1).mul(&h.differential(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let (f, q) = a2(2);
        let p = rep(&f, &q, &[1, 1], &[&[&[1]]]);
        let x = Complex::from_cohomology(&f, q.clone(), &[(0, p)].into()).unwrap();
        let id = GradedMap {
            degree: 0,
            comps: (x.lo()..=x.hi())
                .map(|n| (n, RepMorphism::identity(&f, x.term(n).dims())))
                .collect(),
        };
        assert!(x.cone(&x, &id).unwrap().is_acyclic());
        let zero = x.cone(&x, &GradedMap::zero(0)).unwrap();
        assert_eq!(zero.cohomology_dims(0).0, vec![1, 1]);
        assert_eq!(zero.cohomology_dims(-1).0, vec![1, 1]);
    }

    #[test]
    fn subquotient_classes() {
        let f = PrimeField::new(5).unwrap();
        let sq = Subquotient::new(&f, 3, &[vec![1, 1, 0]], &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(sq.dim(), 1);
        let a = sq.class_of(&[1, 0, 0]);
        let b = sq.class_of(&[0, 1, 0]);
        assert_eq!(f.add(a[0], b[0]), 0);
        assert_eq!(sq.class_of(&sq.representative(&[3])), vec![3]);
    }
}
