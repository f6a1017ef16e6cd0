//! Representations of a quiver over F_q.
//!
//! Matrices act on column vectors: the map of an arrow `a: i -> j` has shape
//! `d_j x d_i`, and a morphism `φ: M -> N` satisfies `φ_j M_a = N_a φ_i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::enumerate::{gaussian_binomial, subspaces, Coefficients};
use crate::error::{Error, Result};
use crate::ff::{Matrix, PrimeField};
use crate::quiver::{DimVector, Quiver};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    field: PrimeField,
    quiver: Arc<Quiver>,
    dims: DimVector,
    maps: Vec<Matrix>,
}

/// A family of linear maps, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepMorphism(pub Vec<Matrix>);

impl RepMorphism {
    pub fn zero(field: &PrimeField, from: &DimVector, to: &DimVector) -> Self {
        RepMorphism(
            from.0
                .iter()
                .zip(&to.0)
                .map(|(&m, &n)| Matrix::zeros(field, n as usize, m as usize))
                .collect(),
        )
    }

    pub fn identity(field: &PrimeField, dims: &DimVector) -> Self {
        RepMorphism(
            dims.0
                .iter()
                .map(|&d| Matrix::identity(field, d as usize))
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.mul(b).expect("composable vertex maps"))
                .collect(),
        )
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.add(b).expect("same shapes"))
                .collect(),
        )
    }

    pub fn is_injective(&self) -> bool {
        self.0.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.0.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_invertible(&self) -> bool {
        self.0.iter().all(Matrix::is_invertible)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Matrix::is_zero)
    }

    /// Nilpotent at every vertex.
    pub fn is_nilpotent(&self) -> bool {
        self.0.iter().all(|m| {
            let mut p = m.clone();
            for _ in 0..m.rows() {
                p = p.mul(m).expect("square");
            }
            p.is_zero()
        })
    }
}

/// `Σ λ_i basis_i`.
pub fn combine(basis: &[RepMorphism], coeffs: &[u32], zero: &RepMorphism) -> RepMorphism {
    let mut out = zero.clone();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (o, m) in out.0.iter_mut().zip(&b.0) {
            *o = o.add(&m.scale(c)).expect("same shapes");
        }
    }
    out
}

/// A subrepresentation together with the induced sub and quotient representations.
#[derive(Debug, Clone)]
pub struct Subrepresentation {
    /// Column basis of the subspace at each vertex.
    pub basis: Vec<Matrix>,
    pub sub: Representation,
    pub quotient: Representation,
}

impl Representation {
    pub fn new(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        dims: DimVector,
        maps: Vec<Matrix>,
    ) -> Result<Self> {
        quiver.check_len(dims.len())?;
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Shape(format!(
                "{} maps for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.order(), m.field().order()));
            }
            let want = (dims.0[a.target] as usize, dims.0[a.source] as usize);
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "arrow `{}` map has shape {:?}, expected {:?}",
                    a.name,
                    m.shape(),
                    want
                )));
            }
        }
        Ok(Self {
            field: field.clone(),
            quiver,
            dims,
            maps,
        })
    }

    pub fn zero(field: &PrimeField, quiver: Arc<Quiver>) -> Self {
        let n = quiver.vertex_count();
        Self::with_zero_maps(field, quiver, DimVector::zero(n))
    }

    /// All arrow maps zero; semisimple with the given dimensions.
    pub fn with_zero_maps(field: &PrimeField, quiver: Arc<Quiver>, dims: DimVector) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                Matrix::zeros(
                    field,
                    dims.0[a.target] as usize,
                    dims.0[a.source] as usize,
                )
            })
            .collect();
        Self {
            field: field.clone(),
            quiver,
            dims,
            maps,
        }
    }

    /// The simple representation at vertex `i`.
    pub fn simple(field: &PrimeField, quiver: Arc<Quiver>, i: usize) -> Self {
        let n = quiver.vertex_count();
        Self::with_zero_maps(field, quiver, DimVector::unit(n, i))
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims.0[v] as usize
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_zero()
    }

    pub(crate) fn check_compatible(&self, other: &Representation) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.order(), other.field.order()));
        }
        if !Arc::ptr_eq(&self.quiver, &other.quiver) && *self.quiver != *other.quiver {
            return Err(Error::QuiverMismatch);
        }
        Ok(())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.check_compatible(other)?;
        let dims = self.dims.add(&other.dims);
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(self.maps.iter().zip(&other.maps))
            .map(|(a, (x, y))| {
                let mut m = Matrix::zeros(
                    &self.field,
                    dims.0[a.target] as usize,
                    dims.0[a.source] as usize,
                );
                m.set_block(0, 0, x);
                m.set_block(x.rows(), x.cols(), y);
                m
            })
            .collect();
        Ok(Representation {
            field: self.field.clone(),
            quiver: self.quiver.clone(),
            dims,
            maps,
        })
    }

    /// The isomorphic representation `g_t M_a g_s^{-1}` for invertible `g_v`.
    pub fn change_basis(&self, g: &[Matrix]) -> Result<Representation> {
        let inverses: Vec<Matrix> = g
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::Invalid("change of basis is not invertible".into()))
            })
            .collect::<Result<_>>()?;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| Ok(g[a.target].mul(m)?.mul(&inverses[a.source])?))
            .collect::<Result<_>>()?;
        Representation::new(&self.field, self.quiver.clone(), self.dims.clone(), maps)
    }

    /// Composite map along a path given as arrow indices (first arrow first).
    pub fn path_map(&self, path: &[usize]) -> Matrix {
        let arrows = self.quiver.arrows();
        let start = path.first().map(|&a| arrows[a].source);
        let mut m = match start {
            Some(s) => Matrix::identity(&self.field, self.dim_at(s)),
            None => return Matrix::zeros(&self.field, 0, 0),
        };
        for &a in path {
            m = self.maps[a].mul(&m).expect("path is composable");
        }
        m
    }

    pub fn to_json(&self) -> RepresentationJson {
        RepresentationJson {
            dims: self.dims.0.clone(),
            maps: self
                .quiver
                .arrows()
                .iter()
                .zip(&self.maps)
                .map(|(a, m)| (a.name.clone(), m.to_rows()))
                .collect(),
        }
    }

    pub fn from_json(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        json: &RepresentationJson,
    ) -> Result<Representation> {
        let dims = DimVector(json.dims.clone());
        quiver.check_len(dims.len())?;
        for name in json.maps.keys() {
            if quiver.arrow_index(name).is_none() {
                return Err(Error::Shape(format!("unknown arrow `{name}`")));
            }
        }
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                let rows = dims.0[a.target] as usize;
                let cols = dims.0[a.source] as usize;
                match json.maps.get(&a.name) {
                    None => Ok(Matrix::zeros(field, rows, cols)),
                    Some(r) if rows == 0 || cols == 0 => {
                        // an empty matrix may be written as [] or as rows of []
                        if r.iter().all(|row| row.is_empty()) {
                            Ok(Matrix::zeros(field, rows, cols))
                        } else {
                            Err(Error::Shape(format!("arrow `{}` must be empty", a.name)))
                        }
                    }
                    Some(r) => {
                        let ints: Vec<Vec<i64>> = r
                            .iter()
                            .map(|row| row.iter().map(|&x| x as i64).collect())
                            .collect();
                        Ok(Matrix::from_rows(field, &ints)?)
                    }
                }
            })
            .collect::<Result<_>>()?;
        Representation::new(field, quiver, dims, maps)
    }

    /// Every representation with dimension vector `d`, enumerated by arrow entries.
    pub fn enumerate_all(
        field: &PrimeField,
        quiver: Arc<Quiver>,
        d: &DimVector,
        budget: &Budget,
    ) -> Result<Vec<Representation>> {
        let shapes: Vec<(usize, usize)> = quiver
            .arrows()
            .iter()
            .map(|a| (d.0[a.target] as usize, d.0[a.source] as usize))
            .collect();
        let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
        budget.check_power("enumerate representations", field.order(), total)?;
        let mut out = Vec::new();
        for entries in Coefficients::new(field.order(), total) {
            let mut off = 0;
            let maps = shapes
                .iter()
                .map(|&(r, c)| {
                    let m = Matrix::from_vec(field, r, c, entries[off..off + r * c].to_vec())
                        .expect("sized");
                    off += r * c;
                    m
                })
                .collect();
            out.push(Representation {
                field: field.clone(),
                quiver: quiver.clone(),
                dims: d.clone(),
                maps,
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub dims: Vec<u32>,
    pub maps: BTreeMap<String, Vec<Vec<u32>>>,
}

/// Basis of Hom(m, n): the kernel of the intertwiner system.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<Vec<RepMorphism>> {
    m.check_compatible(n)?;
    let field = &m.field;
    let q = &m.quiver;
    let nv = q.vertex_count();
    // unknown layout: vertex v occupies an n_v x m_v block, row-major
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut acc = 0usize;
    for v in 0..nv {
        offsets.push(acc);
        acc += n.dim_at(v) * m.dim_at(v);
    }
    let unknowns = acc;
    let rows: usize = q
        .arrows()
        .iter()
        .map(|a| n.dim_at(a.target) * m.dim_at(a.source))
        .sum();
    let mut sys = Matrix::zeros(field, rows, unknowns);
    let mut row = 0;
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ms, mt, ns, nt) = (m.dim_at(s), m.dim_at(t), n.dim_at(s), n.dim_at(t));
        let ma = &m.maps[ai];
        let na = &n.maps[ai];
        for i in 0..nt {
            for j in 0..ms {
                // (φ_t M_a)[i][j] = Σ_k φ_t[i][k] M_a[k][j]
                for k in 0..mt {
                    let c = ma.get(k, j);
                    if c != 0 {
                        let col = offsets[t] + i * mt + k;
                        sys.set(row, col, field.add(sys.get(row, col), c));
                    }
                }
                // − (N_a φ_s)[i][j] = − Σ_k N_a[i][k] φ_s[k][j]
                for k in 0..ns {
                    let c = na.get(i, k);
                    if c != 0 {
                        let col = offsets[s] + k * ms + j;
                        sys.set(row, col, field.sub(sys.get(row, col), c));
                    }
                }
                row += 1;
            }
        }
    }
    let kernel = sys.kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|v| {
            RepMorphism(
                (0..nv)
                    .map(|x| {
                        let (r, c) = (n.dim_at(x), m.dim_at(x));
                        Matrix::from_vec(field, r, c, v[offsets[x]..offsets[x] + r * c].to_vec())
                            .expect("sized")
                    })
                    .collect(),
            )
        })
        .collect())
}

pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    Ok(hom_space(m, n)?.len())
}

/// dim Ext¹(m, n) = dim Hom(m, n) − ⟨dim m, dim n⟩ (the quiver is hereditary).
pub fn ext1_dim(m: &Representation, n: &Representation) -> Result<usize> {
    let hom = hom_dim(m, n)? as i64;
    let euler = m.quiver.euler_form(&m.dims.to_k0(), &n.dims.to_k0())?;
    let ext = hom - euler;
    debug_assert!(ext >= 0);
    Ok(ext as usize)
}

/// Enumerates every element of the span of `basis`.
pub fn enumerate_span<'a>(
    field: &'a PrimeField,
    basis: &'a [RepMorphism],
    zero: &'a RepMorphism,
) -> impl Iterator<Item = RepMorphism> + 'a {
    Coefficients::new(field.order(), basis.len()).map(move |c| combine(basis, &c, zero))
}

/// |Aut(m)| by enumerating End(m) and testing invertibility at every vertex.
pub fn aut_order(m: &Representation, budget: &Budget) -> Result<u128> {
    let end = hom_space(m, m)?;
    budget.check_power("aut_order", m.field.order(), end.len())?;
    let zero = RepMorphism::zero(&m.field, &m.dims, &m.dims);
    let count = enumerate_span(&m.field, &end, &zero)
        .filter(RepMorphism::is_invertible)
        .count();
    Ok(count as u128)
}

/// Indecomposable iff nonzero and every endomorphism is nilpotent or invertible.
pub fn is_indecomposable(m: &Representation, budget: &Budget) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let end = hom_space(m, m)?;
    if end.len() == 1 {
        return Ok(true);
    }
    budget.check_power("is_indecomposable", m.field.order(), end.len())?;
    let zero = RepMorphism::zero(&m.field, &m.dims, &m.dims);
    // try basis elements first: idempotent matrix units expose most splittings at once
    let witness = |f: &RepMorphism| !f.is_invertible() && !f.is_nilpotent();
    if end.iter().any(witness) {
        return Ok(false);
    }
    let split = enumerate_span(&m.field, &end, &zero).any(|f| witness(&f));
    Ok(!split)
}

/// Searches Hom(m, n) for an invertible element.
pub fn brute_force_isomorphic(
    m: &Representation,
    n: &Representation,
    budget: &Budget,
) -> Result<bool> {
    m.check_compatible(n)?;
    if m.dims != n.dims {
        return Ok(false);
    }
    let hom = hom_space(m, n)?;
    if hom.len() != hom_dim(m, m)? || hom.len() != hom_dim(n, n)? {
        return Ok(false);
    }
    budget.check_power("brute_force_isomorphic", m.field.order(), hom.len())?;
    let zero = RepMorphism::zero(&m.field, &m.dims, &n.dims);
    let found = enumerate_span(&m.field, &hom, &zero).any(|f| f.is_invertible());
    Ok(found)
}

/// Pivot rows of a full-column-rank basis matrix, i.e. coordinates complementary to a
/// standard-basis complement.
fn complement_coordinates(basis: &Matrix) -> Vec<usize> {
    let pivots = basis.transpose().rref().pivots;
    (0..basis.rows()).filter(|r| !pivots.contains(r)).collect()
}

/// Splits `r` along subspaces `basis[v]` (assumed stable) into sub and quotient.
pub fn split_along(r: &Representation, basis: &[Matrix]) -> Result<Subrepresentation> {
    let field = &r.field;
    let nv = r.quiver.vertex_count();
    let mut change = Vec::with_capacity(nv);
    let mut inverse = Vec::with_capacity(nv);
    for v in 0..nv {
        let u = &basis[v];
        let comp = complement_coordinates(u);
        let mut b = Matrix::zeros(field, r.dim_at(v), r.dim_at(v));
        b.set_block(0, 0, u);
        for (j, &c) in comp.iter().enumerate() {
            b.set(c, u.cols() + j, 1);
        }
        let inv = b
            .inverse()
            .ok_or_else(|| Error::Invalid("subspace basis is not independent".into()))?;
        change.push(b);
        inverse.push(inv);
    }
    let sub_dims = DimVector(basis.iter().map(|u| u.cols() as u32).collect());
    let quot_dims = r.dims.checked_sub(&sub_dims).expect("subspace fits");
    let mut sub_maps = Vec::new();
    let mut quot_maps = Vec::new();
    for (a, m) in r.quiver.arrows().iter().zip(&r.maps) {
        let (s, t) = (a.source, a.target);
        let conj = inverse[t].mul(m)?.mul(&change[s])?;
        let (ks, kt) = (sub_dims.0[s] as usize, sub_dims.0[t] as usize);
        if !conj.block(kt, 0, conj.rows() - kt, ks).is_zero() {
            return Err(Error::Invalid(format!(
                "subspace is not stable under arrow `{}`",
                a.name
            )));
        }
        sub_maps.push(conj.block(0, 0, kt, ks));
        quot_maps.push(conj.block(kt, ks, conj.rows() - kt, conj.cols() - ks));
    }
    Ok(Subrepresentation {
        basis: basis.to_vec(),
        sub: Representation::new(field, r.quiver.clone(), sub_dims, sub_maps)?,
        quotient: Representation::new(field, r.quiver.clone(), quot_dims, quot_maps)?,
    })
}

/// All subrepresentations of `r` with dimension vector `d`.
pub fn subrepresentations(
    r: &Representation,
    d: &DimVector,
    budget: &Budget,
) -> Result<Vec<Subrepresentation>> {
    r.quiver.check_len(d.len())?;
    if !d.le(&r.dims) {
        return Err(Error::Invalid(format!(
            "subrepresentation dimension {d} exceeds {}",
            r.dims
        )));
    }
    let q = r.field.order();
    let candidates: u128 = (0..d.len())
        .map(|v| gaussian_binomial(r.dims.0[v], d.0[v], q))
        .fold(1u128, |a, b| a.saturating_mul(b));
    budget.check("subrepresentations", candidates)?;
    let per_vertex: Vec<Vec<Matrix>> = (0..d.len())
        .map(|v| subspaces(&r.field, r.dim_at(v), d.0[v] as usize))
        .collect();
    let mut chosen: Vec<Matrix> = Vec::with_capacity(d.len());
    let mut out = Vec::new();
    search(r, &per_vertex, &mut chosen, &mut out)?;
    Ok(out)
}

fn stable(r: &Representation, arrow: usize, src: &Matrix, tgt: &Matrix) -> bool {
    if src.cols() == 0 {
        return true;
    }
    let image = r.maps[arrow].mul(src).expect("shapes");
    tgt.hstack(&image).expect("heights").rank() == tgt.cols()
}

fn search(
    r: &Representation,
    per_vertex: &[Vec<Matrix>],
    chosen: &mut Vec<Matrix>,
    out: &mut Vec<Subrepresentation>,
) -> Result<()> {
    let v = chosen.len();
    if v == per_vertex.len() {
        out.push(split_along(r, chosen)?);
        return Ok(());
    }
    for u in &per_vertex[v] {
        let ok = r.quiver.arrows().iter().enumerate().all(|(ai, a)| {
            if a.source == v && a.target < v {
                stable(r, ai, u, &chosen[a.target])
            } else if a.target == v && a.source < v {
                stable(r, ai, &chosen[a.source], u)
            } else {
                true
            }
        });
        if ok {
            chosen.push(u.clone());
            search(r, per_vertex, chosen, out)?;
            chosen.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u32) -> (PrimeField, Arc<Quiver>) {
        (PrimeField::new(p).unwrap(), Arc::new(Quiver::linear(2)))
    }

    fn proj1(f: &PrimeField, q: &Arc<Quiver>) -> Representation {
        Representation::new(
            f,
            q.clone(),
            DimVector(vec![1, 1]),
            vec![Matrix::identity(f, 1)],
        )
        .unwrap()
    }

    #[test]
    fn hom_examples_a2() {
        let (f, q) = setup(2);
        let s1 = Representation::simple(&f, q.clone(), 0);
        let s2 = Representation::simple(&f, q.clone(), 1);
        let p = proj1(&f, &q);
        assert_eq!(hom_dim(&s1, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&s1, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&p, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&s2, &p).unwrap(), 1);
        assert_eq!(hom_dim(&p, &s1).unwrap(), 1);
        for m in hom_space(&p, &s1).unwrap() {
            assert!(!m.is_zero());
        }
    }

    #[test]
    fn ext_examples_a2() {
        let (f, q) = setup(2);
        let s1 = Representation::simple(&f, q.clone(), 0);
        let s2 = Representation::simple(&f, q.clone(), 1);
        assert_eq!(ext1_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(ext1_dim(&s2, &s1).unwrap(), 0);
        let a1 = Arc::new(Quiver::linear(1));
        let k2 = Representation::with_zero_maps(&f, a1, DimVector(vec![2]));
        assert_eq!(ext1_dim(&k2, &k2).unwrap(), 0);
    }

    #[test]
    fn aut_examples() {
        for p in [2u32, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            let a1 = Arc::new(Quiver::linear(1));
            let s = Representation::simple(&f, a1.clone(), 0);
            assert_eq!(aut_order(&s, &Budget::default()).unwrap(), (p - 1) as u128);
            let z = Representation::zero(&f, a1.clone());
            assert_eq!(aut_order(&z, &Budget::default()).unwrap(), 1);
        }
        let f = PrimeField::new(2).unwrap();
        let a1 = Arc::new(Quiver::linear(1));
        let k2 = Representation::with_zero_maps(&f, a1, DimVector(vec![2]));
        assert_eq!(aut_order(&k2, &Budget::default()).unwrap(), 6);
    }

    #[test]
    fn aut_order_budget() {
        let f = PrimeField::new(2).unwrap();
        let a1 = Arc::new(Quiver::linear(1));
        let k3 = Representation::with_zero_maps(&f, a1, DimVector(vec![3]));
        assert!(matches!(
            aut_order(&k3, &Budget::new(100)),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn subrep_examples() {
        let (f, q) = setup(2);
        let p = proj1(&f, &q);
        let b = Budget::default();
        assert_eq!(subrepresentations(&p, &DimVector(vec![0, 1]), &b).unwrap().len(), 1);
        assert_eq!(subrepresentations(&p, &DimVector(vec![1, 0]), &b).unwrap().len(), 0);
        let all = subrepresentations(&p, &DimVector(vec![1, 1]), &b).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].quotient.is_zero());
        assert!(subrepresentations(&p, &DimVector(vec![2, 0]), &b).is_err());
    }

    #[test]
    fn subrep_quotients() {
        let (f, q) = setup(3);
        let p = proj1(&f, &q);
        let subs = subrepresentations(&p, &DimVector(vec![0, 1]), &Budget::default()).unwrap();
        let s = &subs[0];
        assert_eq!(s.sub.dims(), &DimVector(vec![0, 1]));
        assert_eq!(s.quotient.dims(), &DimVector(vec![1, 0]));
    }

    #[test]
    fn direct_sum_dims() {
        let (f, q) = setup(2);
        let s1 = Representation::simple(&f, q.clone(), 0);
        let s2 = Representation::simple(&f, q.clone(), 1);
        let sum = s1.direct_sum(&s2).unwrap();
        assert_eq!(sum.dims(), &DimVector(vec![1, 1]));
        assert!(sum.maps()[0].is_zero());
        let z = Representation::zero(&f, q.clone());
        assert_eq!(s1.direct_sum(&z).unwrap(), s1);
    }

    #[test]
    fn isomorphism_brute_force() {
        let (f, q) = setup(2);
        let b = Budget::default();
        let s1 = Representation::simple(&f, q.clone(), 0);
        let s2 = Representation::simple(&f, q.clone(), 1);
        let p = proj1(&f, &q);
        let ss = s1.direct_sum(&s2).unwrap();
        assert!(!brute_force_isomorphic(&p, &ss, &b).unwrap());
        assert!(brute_force_isomorphic(&p, &p, &b).unwrap());
        let a1 = Arc::new(Quiver::linear(1));
        let k2 = Representation::with_zero_maps(&f, a1, DimVector(vec![2]));
        let g = Matrix::from_rows(&f, &[[1, 1], [0, 1]]).unwrap();
        let k2b = k2.change_basis(&[g]).unwrap();
        assert!(brute_force_isomorphic(&k2, &k2b, &b).unwrap());
    }

    #[test]
    fn indecomposability() {
        let (f, q) = setup(2);
        let b = Budget::default();
        let s1 = Representation::simple(&f, q.clone(), 0);
        let s2 = Representation::simple(&f, q.clone(), 1);
        assert!(is_indecomposable(&proj1(&f, &q), &b).unwrap());
        assert!(!is_indecomposable(&s1.direct_sum(&s2).unwrap(), &b).unwrap());
        assert!(!is_indecomposable(&Representation::zero(&f, q), &b).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let (f, q) = setup(3);
        let p = proj1(&f, &q).direct_sum(&Representation::simple(&f, q.clone(), 0)).unwrap();
        let j = p.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: RepresentationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Representation::from_json(&f, q.clone(), &back).unwrap(), p);
        let bad = RepresentationJson {
            dims: vec![1, 1],
            maps: [("a1".to_string(), vec![vec![1, 0]])].into(),
        };
        assert!(Representation::from_json(&f, q, &bad).is_err());
    }
}
