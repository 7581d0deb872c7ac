//! Path algebras of finite quivers modulo uniform relations.
//!
//! Paths compose left to right: `p * q` is "first p, then q", defined when
//! `dst(p) = src(q)`. Relations must be linear combinations of paths of one
//! common length with one common source and target; the quotient is then
//! graded by path length and saturation is detected exactly: once every
//! path of some length lies in the ideal, so does every longer one.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Echelon;
use std::collections::HashMap;
use std::sync::Arc;

/// Total number of basis paths tolerated before declaring the quotient
/// infinite-dimensional.
const PATH_CAP: usize = 2048;
/// Longest path length explored.
const LENGTH_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct Quiver {
    pub vertices: usize,
    /// `(source, target)` per arrow.
    pub arrows: Vec<(usize, usize)>,
}

/// A linear combination of paths, each path a composable arrow sequence.
pub type PathExpr = Vec<(u64, Vec<usize>)>;

struct Layer {
    /// Arrow sequences of this length, in lexicographic order.
    paths: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// Ideal component in this degree.
    ideal: Echelon,
    /// Positions (into `paths`) that survive to the quotient basis.
    survivors: Vec<usize>,
}

/// Build the path algebra `kQ / (relations)` on the basis of surviving path
/// classes; vertex paths give orthogonal idempotents summing to 1.
pub fn path_algebra(
    spec: Arc<FieldSpec>,
    quiver: &Quiver,
    relations: &[PathExpr],
) -> Result<Arc<Algebra>> {
    let v = quiver.vertices;
    if v == 0 {
        return Err(Error::Invalid("quiver needs at least one vertex".into()));
    }
    for &(s, t) in &quiver.arrows {
        if s >= v || t >= v {
            return Err(Error::Invalid("arrow endpoint out of range".into()));
        }
    }
    // validate relations: uniform length and endpoints
    let mut rel_by_len: HashMap<usize, Vec<&PathExpr>> = HashMap::new();
    for rel in relations {
        if rel.is_empty() {
            continue;
        }
        let ends = path_ends(quiver, &rel[0].1)?;
        let len = rel[0].1.len();
        if len == 0 {
            return Err(Error::InhomogeneousRelation);
        }
        for (_, p) in rel {
            if p.len() != len || path_ends(quiver, p)? != ends {
                return Err(Error::InhomogeneousRelation);
            }
        }
        rel_by_len.entry(len).or_default().push(rel);
    }

    // layer 0: vertex paths (never touched by relations)
    let mut layers: Vec<Layer> = Vec::new();
    {
        let paths: Vec<Vec<usize>> = (0..v).map(|_| Vec::new()).collect();
        // vertex paths are distinguished by an artificial marker: layer 0
        // stores one empty sequence per vertex, identified positionally
        let mut index = HashMap::new();
        index.insert(Vec::new(), 0);
        layers.push(Layer {
            survivors: (0..v).collect(),
            paths,
            index,
            ideal: Echelon::new(spec.clone(), v),
        });
    }

    let mut total = v;
    let mut saturated_at = None;
    for len in 1..=LENGTH_CAP {
        // extend paths of length len-1 by arrows
        let prev: Vec<Vec<usize>> = if len == 1 {
            vec![Vec::new()]
        } else {
            layers[len - 1].paths.clone()
        };
        let mut paths = Vec::new();
        for p in &prev {
            let pend = if p.is_empty() { None } else { Some(path_ends(quiver, p)?.1) };
            for (a, &(s, _)) in quiver.arrows.iter().enumerate() {
                if pend.is_none_or(|e| e == s) {
                    let mut np = p.clone();
                    np.push(a);
                    paths.push(np);
                }
            }
        }
        paths.sort();
        let index: HashMap<Vec<usize>, usize> =
            paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        // ideal in this degree: r padded by paths on both sides
        let mut ideal = Echelon::new(spec.clone(), paths.len());
        for (&rl, rels) in &rel_by_len {
            if rl > len {
                continue;
            }
            for rel in rels {
                let (rs, rt) = path_ends(quiver, &rel[0].1)?;
                for left_len in 0..=(len - rl) {
                    let right_len = len - rl - left_len;
                    for lp in paths_of_length(quiver, &layers, left_len, len)? {
                        if !lp.is_empty() && path_ends(quiver, &lp)?.1 != rs {
                            continue;
                        }
                        if lp.is_empty() && left_len > 0 {
                            continue;
                        }
                        for rp in paths_of_length(quiver, &layers, right_len, len)? {
                            if !rp.is_empty() && path_ends(quiver, &rp)?.0 != rt {
                                continue;
                            }
                            let mut vvec = vec![0u64; paths.len()];
                            let mut any = false;
                            for (c, mid) in rel.iter() {
                                let mut whole = lp.clone();
                                whole.extend_from_slice(mid);
                                whole.extend_from_slice(&rp);
                                if let Some(&pi) = index.get(&whole) {
                                    vvec[pi] = spec.add(vvec[pi], *c);
                                    any = true;
                                }
                            }
                            if any {
                                ideal.insert(vvec);
                            }
                        }
                    }
                }
            }
        }
        // quotient coordinates are exactly the non-pivot path positions, so
        // reduction against the ideal lands inside the survivor span
        let survivors: Vec<usize> =
            (0..paths.len()).filter(|i| !ideal.pivots().contains(i)).collect();
        let quotient_dim = survivors.len();
        total += quotient_dim;
        if total > PATH_CAP {
            return Err(Error::InfiniteDimensional(PATH_CAP));
        }
        layers.push(Layer { paths, index, ideal, survivors });
        if quotient_dim == 0 {
            saturated_at = Some(len);
            break;
        }
    }
    let Some(sat) = saturated_at else {
        return Err(Error::InfiniteDimensional(PATH_CAP));
    };

    // global basis: (degree, position) per surviving path
    let mut basis: Vec<(usize, usize)> = Vec::new();
    for (d, layer) in layers.iter().enumerate().take(sat) {
        for &s in &layer.survivors {
            basis.push((d, s));
        }
    }
    let n = basis.len();
    let lookup: HashMap<(usize, usize), usize> =
        basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    // reduce an arbitrary path-class vector of degree d to quotient coords
    let reduce_to_basis = |d: usize, vec: Vec<u64>, out: &mut Vec<u64>| {
        let layer = &layers[d];
        let red = layer.ideal.reduce(&vec);
        for (pos, &c) in red.iter().enumerate() {
            if c != 0 {
                let bi = lookup[&(d, pos)];
                out[bi] = spec.add(out[bi], c);
            }
        }
    };

    let mut prod: Vec<Vec<u64>> = vec![vec![0u64; n]; n * n];
    for (bi, &(di, pi)) in basis.iter().enumerate() {
        for (bj, &(dj, pj)) in basis.iter().enumerate() {
            let cell = &mut prod[bi * n + bj];
            if di == 0 && dj == 0 {
                if pi == pj {
                    cell[bi] = 1;
                }
                continue;
            }
            if di == 0 {
                // vertex * path: survives iff the path starts there
                let p = &layers[dj].paths[pj];
                if path_ends(quiver, p)?.0 == pi {
                    cell[bj] = 1;
                }
                continue;
            }
            if dj == 0 {
                let p = &layers[di].paths[pi];
                if path_ends(quiver, p)?.1 == pj {
                    cell[bi] = 1;
                }
                continue;
            }
            let p = &layers[di].paths[pi];
            let qq = &layers[dj].paths[pj];
            if path_ends(quiver, p)?.1 != path_ends(quiver, qq)?.0 {
                continue;
            }
            let d = di + dj;
            if d >= sat {
                continue; // all long paths are in the ideal
            }
            let mut whole = p.clone();
            whole.extend_from_slice(qq);
            let layer = &layers[d];
            let mut vec = vec![0u64; layer.paths.len()];
            vec[layer.index[&whole]] = 1;
            reduce_to_basis(d, vec, cell);
        }
    }
    let mut unit = vec![0u64; n];
    for vtx in 0..v {
        unit[lookup[&(0, vtx)]] = 1;
    }
    Algebra::new_checked(spec, n, prod, unit, crate::algebra::DIM_CAP)
}

fn path_ends(quiver: &Quiver, p: &[usize]) -> Result<(usize, usize)> {
    if p.is_empty() {
        return Err(Error::Invalid("vertex paths have positional endpoints".into()));
    }
    let mut cur = quiver.arrows[p[0]].0;
    let start = cur;
    for &a in p {
        let (s, t) = quiver.arrows[a];
        if s != cur {
            return Err(Error::Invalid("path is not composable".into()));
        }
        cur = t;
    }
    Ok((start, cur))
}

fn paths_of_length(
    quiver: &Quiver,
    layers: &[Layer],
    len: usize,
    building: usize,
) -> Result<Vec<Vec<usize>>> {
    if len == 0 {
        return Ok(vec![Vec::new()]);
    }
    if len < layers.len() && len != building {
        return Ok(layers[len].paths.clone());
    }
    // lengths at or beyond the frontier: enumerate directly
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &out {
            let pend = if p.is_empty() { None } else { Some(path_ends(quiver, p)?.1) };
            for (a, &(s, _)) in quiver.arrows.iter().enumerate() {
                if pend.is_none_or(|e| e == s) {
                    let mut np = p.clone();
                    np.push(a);
                    next.push(np);
                }
            }
        }
        out = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FieldSpec> {
        FieldSpec::get(3, 2).unwrap()
    }

    #[test]
    fn one_vertex_no_arrows_is_the_field() {
        let q = Quiver { vertices: 1, arrows: vec![] };
        let a = path_algebra(f9(), &q, &[]).unwrap();
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn loop_modulo_square_is_dual_numbers() {
        let q = Quiver { vertices: 1, arrows: vec![(0, 0)] };
        let rel: PathExpr = vec![(1, vec![0, 0])];
        let a = path_algebra(f9(), &q, &[rel]).unwrap();
        assert_eq!(a.dim(), 2);
        // x * x = 0
        assert_eq!(a.prod(1, 1), &[0, 0]);
    }

    #[test]
    fn free_loop_is_infinite_dimensional() {
        let q = Quiver { vertices: 1, arrows: vec![(0, 0)] };
        assert!(matches!(
            path_algebra(f9(), &q, &[]),
            Err(Error::InfiniteDimensional(_))
        ));
    }

    #[test]
    fn two_cycle_with_zero_relations() {
        // vertices 1, 2; a: 0 -> 1, b: 1 -> 0; relations ab, ba
        let q = Quiver { vertices: 2, arrows: vec![(0, 1), (1, 0)] };
        let rels: Vec<PathExpr> = vec![vec![(1, vec![0, 1])], vec![(1, vec![1, 0])]];
        let a = path_algebra(f9(), &q, &rels).unwrap();
        assert_eq!(a.dim(), 4); // e0, e1, a, b
        // each projective has length two with factors split across vertices
        assert_eq!(a.cartan_matrix().unwrap().rows_vec(), vec![vec![1, 1], vec![1, 1]]);
        // vertex idempotents are orthogonal and sum to 1
        let mut e0 = vec![0u64; 4];
        e0[0] = 1;
        let mut e1 = vec![0u64; 4];
        e1[1] = 1;
        assert_eq!(a.mul_vec(&e0, &e0), e0);
        assert_eq!(a.mul_vec(&e0, &e1), vec![0, 0, 0, 0]);
        let sum: Vec<u64> = (0..4).map(|k| a.spec().add(e0[k], e1[k])).collect();
        assert_eq!(&sum, a.unit());
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let q = Quiver { vertices: 1, arrows: vec![(0, 0)] };
        let rel: PathExpr = vec![(1, vec![0, 0]), (1, vec![0])];
        assert!(matches!(
            path_algebra(f9(), &q, &[rel]),
            Err(Error::InhomogeneousRelation)
        ));
    }
}
