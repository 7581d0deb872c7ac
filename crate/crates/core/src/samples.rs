//! A small zoo of fields, groups and algebras used across the test suites,
//! the bundled manifests, and the browser demo.

use crate::algebra::Algebra;
use crate::error::Result;
use crate::field::FieldSpec;
use crate::groupalg::{self, Cocycle2, FiniteGroup};
use std::sync::Arc;

pub fn gf(p: u64, m: u32) -> Arc<FieldSpec> {
    FieldSpec::get(p, m).expect("small field")
}

/// The field itself as a 1-dimensional algebra.
pub fn field_algebra(spec: Arc<FieldSpec>) -> Arc<Algebra> {
    Algebra::from_entries(spec, 1, &[(0, 0, 0, 1)], vec![1]).expect("field algebra")
}

/// `k[x]/(x^2)`, basis `{1, x}`.
pub fn dual_numbers(spec: Arc<FieldSpec>) -> Arc<Algebra> {
    Algebra::from_entries(
        spec,
        2,
        &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
        vec![1, 0],
    )
    .expect("dual numbers")
}

/// `k x ... x k` with componentwise product.
pub fn product_fields(spec: Arc<FieldSpec>, s: usize) -> Arc<Algebra> {
    let entries: Vec<(usize, usize, usize, u64)> = (0..s).map(|i| (i, i, i, 1)).collect();
    Algebra::from_entries(spec, s, &entries, vec![1; s]).expect("product of fields")
}

/// Full matrix algebra `M_n(k)` on the basis `e_{ab}` (index `a * n + b`).
pub fn matrix_algebra(spec: Arc<FieldSpec>, n: usize) -> Arc<Algebra> {
    let mut entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if b == c {
                        entries.push((a * n + b, c * n + d, a * n + d, 1u64));
                    }
                }
            }
        }
    }
    let unit: Vec<u64> = (0..n * n).map(|i| u64::from(i / n == i % n)).collect();
    Algebra::from_entries(spec, n * n, &entries, unit).expect("matrix algebra")
}

/// The quantum complete intersection `k<x,y>/(x^2, y^2, xy + q yx)` on the
/// basis `{1, x, y, xy}`; requires `q != 0`.
pub fn quantum_plane(spec: Arc<FieldSpec>, q: u64) -> Result<Arc<Algebra>> {
    let qinv = spec.inv(q)?;
    let minus_qinv = spec.neg(qinv);
    let mut entries = vec![
        (1, 2, 3, 1),          // x y = xy
        (2, 1, 3, minus_qinv), // y x = -q^{-1} xy
    ];
    for j in 0..4 {
        entries.push((0, j, j, 1));
        if j != 0 {
            entries.push((j, 0, j, 1));
        }
    }
    Algebra::from_entries(spec, 4, &entries, vec![1, 0, 0, 0])
}

pub fn cyclic_group(n: usize) -> Arc<FiniteGroup> {
    FiniteGroup::cyclic(n).expect("cyclic group")
}

pub fn klein_four() -> Arc<FiniteGroup> {
    FiniteGroup::direct_product(&cyclic_group(2), &cyclic_group(2)).expect("V4")
}

/// S_3 as permutations of three points.
pub fn sym3() -> Arc<FiniteGroup> {
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![0, 2, 1],
        vec![2, 1, 0],
        vec![1, 0, 2],
    ];
    FiniteGroup::from_permutations(&perms).expect("S3")
}

/// A_4 as the even permutations of four points.
pub fn alt4() -> Arc<FiniteGroup> {
    let mut perms = Vec::new();
    let mut items = [0usize, 1, 2, 3];
    permute(&mut items, 0, &mut perms);
    let even: Vec<Vec<usize>> = perms.into_iter().filter(|p| parity(p) == 0).collect();
    FiniteGroup::from_permutations(&even).expect("A4")
}

fn permute(items: &mut [usize; 4], k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 4 {
        out.push(items.to_vec());
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// The nontrivial cohomology class on the Klein four group over a field of
/// odd characteristic: `alpha((x1,y1),(x2,y2)) = (-1)^(y1 x2)`, with
/// elements of V4 indexed `2 x + y` as in [`klein_four`].
pub fn klein_cocycle(spec: Arc<FieldSpec>) -> Result<Cocycle2> {
    let v4 = klein_four();
    let minus_one = spec.neg(1);
    let n = v4.order();
    let mut values = vec![1u64; n * n];
    for g in 0..n {
        for h in 0..n {
            let yg = g % 2;
            let xh = h / 2;
            if yg * xh == 1 {
                values[g * n + h] = minus_one;
            }
        }
    }
    Cocycle2::new(v4, spec, values)
}

/// `k_alpha(V4)` for the Klein cocycle; isomorphic to `M_2(k)` at odd p.
pub fn twisted_klein(spec: Arc<FieldSpec>) -> Result<Arc<Algebra>> {
    let alpha = klein_cocycle(spec)?;
    groupalg::twisted_group_algebra(alpha.group(), &alpha)
}
