//! Brute-force helpers for oracle tests. Everything here enumerates raw matrices
//! and avoids the library's Hom/Ext/Aut routines.
#![allow(dead_code)]

use std::sync::Arc;

use hallforge_core::*;

pub fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn catalog(quiver: Quiver, p: u32, bound: &[u32]) -> Arc<Catalog> {
    Arc::new(
        Catalog::build(&field(p), Arc::new(quiver), &DimVector(bound.to_vec()), &Budget::default())
            .unwrap(),
    )
}

/// Every `rows × cols` matrix over `F_p`.
pub fn all_matrices(f: &PrimeField, rows: usize, cols: usize) -> Vec<Matrix> {
    let p = f.order() as usize;
    let n = rows * cols;
    (0..p.pow(n as u32))
        .map(|mut k| {
            let mut m = Matrix::zeros(f, rows, cols);
            for i in 0..n {
                m.set(i / cols.max(1), i % cols.max(1), (k % p) as u32);
                k /= p;
            }
            m
        })
        .collect()
}

/// Every tuple `(f_v)_v` of vertexwise linear maps `M_v -> N_v`.
pub fn all_vertex_maps(m: &Representation, n: &Representation) -> Vec<Vec<Matrix>> {
    let f = m.field();
    let mut out: Vec<Vec<Matrix>> = vec![vec![]];
    for v in 0..m.quiver().vertex_count() {
        let choices = all_matrices(f, n.dim_at(v), m.dim_at(v));
        out = out
            .iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn intertwines(m: &Representation, n: &Representation, fs: &[Matrix]) -> bool {
    m.quiver().arrows().iter().enumerate().all(|(k, a)| {
        fs[a.target].mul(&m.maps()[k]).unwrap() == n.maps()[k].mul(&fs[a.source]).unwrap()
    })
}

pub fn brute_hom_count(m: &Representation, n: &Representation) -> usize {
    all_vertex_maps(m, n).iter().filter(|fs| intertwines(m, n, fs)).count()
}

pub fn brute_aut_count(m: &Representation) -> usize {
    all_vertex_maps(m, m)
        .iter()
        .filter(|fs| intertwines(m, m, fs) && fs.iter().all(|g| g.rows() == 0 || g.is_invertible()))
        .count()
}

pub fn log_q(n: usize, q: u32) -> usize {
    let mut e = 0;
    let mut x = 1usize;
    while x < n {
        x *= q as usize;
        e += 1;
    }
    assert_eq!(x, n, "{n} is not a power of {q}");
    e
}

/// Extensions `0 -> N -> E_c -> M -> 0` with `E_c` block upper triangular,
/// counted up to conjugation by `[[1, h], [0, 1]]`.
pub fn brute_ext_classes(m: &Representation, n: &Representation) -> usize {
    let f = m.field();
    let q = m.quiver();
    let arrows = q.arrows();
    let mut tuples: Vec<Vec<Matrix>> = vec![vec![]];
    for a in arrows {
        let choices = all_matrices(f, n.dim_at(a.target), m.dim_at(a.source));
        tuples = tuples
            .iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut p = p.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    let block = |v: usize, h: &Matrix, sign: u32| {
        let (nv, mv) = (n.dim_at(v), m.dim_at(v));
        let mut g = Matrix::identity(f, nv + mv);
        g.set_block(0, nv, &h.scale(sign));
        g
    };
    let full = |c: &[Matrix]| -> Vec<Matrix> {
        arrows
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let (ns, ms) = (n.dim_at(a.source), m.dim_at(a.source));
                let (nt, mt) = (n.dim_at(a.target), m.dim_at(a.target));
                let mut e = Matrix::zeros(f, nt + mt, ns + ms);
                e.set_block(0, 0, &n.maps()[k]);
                e.set_block(nt, ns, &m.maps()[k]);
                e.set_block(0, ns, &c[k]);
                e
            })
            .collect()
    };
    let index = |c: &[Matrix]| tuples.iter().position(|t| t.as_slice() == c).unwrap();
    let mut parent: Vec<usize> = (0..tuples.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let homs = all_vertex_maps(m, n);
    let neg1 = f.neg(1);
    for (i, c) in tuples.iter().enumerate() {
        let e = full(c);
        for h in &homs {
            let conj: Vec<Matrix> = arrows
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let g_t = block(a.target, &h[a.target], 1);
                    let g_s_inv = block(a.source, &h[a.source], neg1);
                    let r = g_t.mul(&e[k]).unwrap().mul(&g_s_inv).unwrap();
                    r.block(0, n.dim_at(a.source), n.dim_at(a.target), m.dim_at(a.source))
                })
                .collect();
            let j = index(&conj);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    (0..tuples.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Number of subrepresentations with dimension vector `d`, by scanning spans of vector tuples.
pub fn brute_subrep_count(r: &Representation, d: &DimVector) -> usize {
    let f = r.field();
    let mut per_vertex: Vec<Vec<Vec<Vec<u32>>>> = Vec::new(); // vertex -> subspaces (as sorted vector sets)
    for v in 0..r.quiver().vertex_count() {
        per_vertex.push(subspaces_brute(f, r.dim_at(v), d.0[v] as usize));
    }
    let mut count = 0;
    let mut choice = vec![0usize; per_vertex.len()];
    loop {
        let stable = r.quiver().arrows().iter().enumerate().all(|(k, a)| {
            per_vertex[a.source][choice[a.source]].iter().all(|x| {
                let y = r.maps()[k].mul_vec(x).unwrap();
                per_vertex[a.target][choice[a.target]].contains(&y)
            })
        });
        count += stable as usize;
        let mut i = 0;
        loop {
            if i == choice.len() {
                return count;
            }
            choice[i] += 1;
            if choice[i] < per_vertex[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Subspaces of `F_p^n` of dimension `k`, each as its sorted set of vectors.
pub fn subspaces_brute(f: &PrimeField, n: usize, k: usize) -> Vec<Vec<Vec<u32>>> {
    let p = f.order() as usize;
    let vectors: Vec<Vec<u32>> = (0..p.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = (x % p) as u32;
                    x /= p;
                    d
                })
                .collect()
        })
        .collect();
    let target = p.pow(k as u32);
    let mut found: std::collections::BTreeSet<Vec<Vec<u32>>> = Default::default();
    let span = |gens: &[&Vec<u32>]| {
        let mut set: std::collections::BTreeSet<Vec<u32>> = [vec![0; n]].into();
        for g in gens {
            let current: Vec<Vec<u32>> = set.iter().cloned().collect();
            for v in current {
                for c in 0..p as u32 {
                    set.insert((0..n).map(|i| f.add(v[i], f.mul(c, g[i]))).collect());
                }
            }
        }
        set.into_iter().collect::<Vec<_>>()
    };
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(idx) = stack.pop() {
        let gens: Vec<&Vec<u32>> = idx.iter().map(|&i| &vectors[i]).collect();
        let s = span(&gens);
        if s.len() == target {
            found.insert(s);
            continue;
        }
        if idx.len() == k {
            continue;
        }
        let start = idx.last().map_or(0, |l| l + 1);
        for j in start..vectors.len() {
            let mut next = idx.clone();
            next.push(j);
            stack.push(next);
        }
    }
    found.into_iter().collect()
}
