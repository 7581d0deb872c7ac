//! Finite groups by multiplication table (orders up to 64) and the group
//! algebra layer: twisted group algebras, the central-extension form that
//! untwists a cocycle, block decompositions, defects from Cartan elementary
//! divisors, and the outer-automorphism bound.

use crate::algebra::{Algebra, AlgebraMorphism};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Mat;
use std::sync::Arc;

pub const GROUP_CAP: usize = 64;

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `table[g * order + h]` = index of `g h`.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    pub fn new(order: usize, table: Vec<usize>) -> Result<Arc<FiniteGroup>> {
        if order == 0 || table.len() != order * order {
            return Err(Error::NotAGroup("table size does not match the order".into()));
        }
        if order > GROUP_CAP {
            return Err(Error::GroupTooLarge { order, cap: GROUP_CAP });
        }
        if table.iter().any(|&x| x >= order) {
            return Err(Error::NotAGroup("table entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] == g && table[g * order + e] == g))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;
        let inverse: Vec<usize> = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| table[g * order + h] == identity && table[h * order + g] == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("element {g} has no inverse")))
            })
            .collect::<Result<_>>()?;
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    if table[ab * order + c] != table[a * order + table[b * order + c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(FiniteGroup { order, table, identity, inverse }))
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn same(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
        Arc::ptr_eq(a, b) || (a.order == b.order && a.table == b.table)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut cur = g;
        let mut n = 1;
        while cur != self.identity {
            cur = self.mul(cur, g);
            n += 1;
        }
        n
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn cyclic(n: usize) -> Result<Arc<FiniteGroup>> {
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        FiniteGroup::new(n, table)
    }

    /// Direct product; elements indexed `g1 * |B| + g2`.
    pub fn direct_product(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<Arc<FiniteGroup>> {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0usize; n * n];
        for g1 in 0..na {
            for g2 in 0..nb {
                for h1 in 0..na {
                    for h2 in 0..nb {
                        let g = g1 * nb + g2;
                        let h = h1 * nb + h2;
                        table[g * n + h] = a.mul(g1, h1) * nb + b.mul(g2, h2);
                    }
                }
            }
        }
        FiniteGroup::new(n, table)
    }

    /// Group of permutations closed under composition, elements indexed in
    /// the given order; `perms[i]` maps points `x -> perms[i][x]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Arc<FiniteGroup>> {
        let n = perms.len();
        let mut table = vec![usize::MAX; n * n];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                // composite: first p, then q
                let comp: Vec<usize> = (0..p.len()).map(|x| q[p[x]]).collect();
                let k = perms
                    .iter()
                    .position(|r| *r == comp)
                    .ok_or_else(|| Error::NotAGroup("permutations not closed".into()))?;
                table[i * n + j] = k;
            }
        }
        FiniteGroup::new(n, table)
    }

    /// All bijections `self -> other` preserving multiplication, by brute
    /// force over generator images (order-matched candidates only).
    pub fn isomorphisms_to(&self, other: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.order != other.order {
            return out;
        }
        let gens = self.greedy_generators();
        if gens.is_empty() {
            return vec![vec![other.identity]];
        }
        let words = self.generator_words(&gens);
        let self_orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let mut choice = vec![0usize; gens.len()];
        'outer: loop {
            let ok = choice
                .iter()
                .zip(&self_orders)
                .all(|(&img, &ord)| other.element_order(img) == ord);
            if ok {
                if let Some(map) = apply_words(other, &words, &choice) {
                    let mut seen = vec![false; self.order];
                    let bijective = map.iter().all(|&m| {
                        let fresh = !seen[m];
                        seen[m] = true;
                        fresh
                    });
                    let hom = bijective
                        && (0..self.order).all(|a| {
                            (0..self.order)
                                .all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b]))
                        });
                    if hom {
                        out.push(map);
                    }
                }
            }
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break 'outer;
                }
                choice[pos] += 1;
                if choice[pos] < self.order {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
        out
    }

    pub fn automorphism_count(&self) -> usize {
        self.isomorphisms_to(self).len()
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut closure = vec![false; self.order];
        closure[self.identity] = true;
        let mut size = 1;
        while size < self.order {
            let next = (0..self.order).find(|&g| !closure[g]).unwrap();
            gens.push(next);
            closure[next] = true;
            let mut changed = true;
            while changed {
                changed = false;
                for a in 0..self.order {
                    if !closure[a] {
                        continue;
                    }
                    for &g in &gens {
                        let x = self.mul(a, g);
                        if !closure[x] {
                            closure[x] = true;
                            changed = true;
                        }
                    }
                }
            }
            size = closure.iter().filter(|&&b| b).count();
        }
        gens
    }

    /// BFS tree from the identity: per element, `(parent, generator index)`.
    fn generator_words(&self, gens: &[usize]) -> Vec<Option<(usize, usize)>> {
        let mut words: Vec<Option<(usize, usize)>> = vec![None; self.order];
        let mut visited = vec![false; self.order];
        visited[self.identity] = true;
        let mut queue = std::collections::VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !visited[y] {
                    visited[y] = true;
                    words[y] = Some((x, gi));
                    queue.push_back(y);
                }
            }
        }
        words
    }
}

fn apply_words(
    target: &FiniteGroup,
    words: &[Option<(usize, usize)>],
    images: &[usize],
) -> Option<Vec<usize>> {
    let n = words.len();
    let mut map = vec![usize::MAX; n];
    let id_src = words.iter().position(|w| w.is_none())?;
    map[id_src] = target.identity();
    let mut remaining = n - 1;
    while remaining > 0 {
        let mut progress = false;
        for (x, w) in words.iter().enumerate() {
            if map[x] != usize::MAX {
                continue;
            }
            if let Some((parent, gi)) = w {
                if map[*parent] != usize::MAX {
                    map[x] = target.mul(map[*parent], images[*gi]);
                    remaining -= 1;
                    progress = true;
                }
            }
        }
        if !progress {
            return None;
        }
    }
    Some(map)
}

/// A normalized 2-cocycle with values in the units of a field.
#[derive(Clone)]
pub struct Cocycle2 {
    group: Arc<FiniteGroup>,
    spec: Arc<FieldSpec>,
    /// `values[g * order + h]` = code of `alpha(g, h)`, all nonzero.
    values: Vec<u64>,
}

impl Cocycle2 {
    pub fn new(group: Arc<FiniteGroup>, spec: Arc<FieldSpec>, values: Vec<u64>) -> Result<Cocycle2> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::Invalid("cocycle table size mismatch".into()));
        }
        if values.iter().any(|&v| v == 0 || v >= spec.q()) {
            return Err(Error::Invalid("cocycle values must be nonzero field elements".into()));
        }
        let e = group.identity();
        for g in 0..n {
            if values[e * n + g] != 1 || values[g * n + e] != 1 {
                return Err(Error::Invalid("cocycle is not normalized".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for l in 0..n {
                    // alpha(g,h) alpha(gh,l) = alpha(h,l) alpha(g,hl)
                    let lhs = spec.mul(values[g * n + h], values[group.mul(g, h) * n + l]);
                    let rhs = spec.mul(values[h * n + l], values[g * n + group.mul(h, l)]);
                    if lhs != rhs {
                        return Err(Error::NotACocycle(g, h, l));
                    }
                }
            }
        }
        Ok(Cocycle2 { group, spec, values })
    }

    pub fn trivial(group: Arc<FiniteGroup>, spec: Arc<FieldSpec>) -> Cocycle2 {
        let n = group.order();
        Cocycle2 { group, spec, values: vec![1; n * n] }
    }

    /// Multiply by the coboundary of a normalized 1-cochain `c: G -> k^x`:
    /// `alpha'(g,h) = alpha(g,h) c(g) c(h) / c(gh)`.
    pub fn times_coboundary(&self, cochain: &[u64]) -> Result<Cocycle2> {
        let n = self.group.order();
        if cochain.len() != n || cochain.contains(&0) {
            return Err(Error::Invalid("1-cochain must be nonzero everywhere".into()));
        }
        if cochain[self.group.identity()] != 1 {
            return Err(Error::Invalid("1-cochain must be normalized at the identity".into()));
        }
        let mut values = self.values.clone();
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                let num = self.spec.mul(cochain[g], cochain[h]);
                values[g * n + h] =
                    self.spec.mul(self.values[g * n + h], self.spec.div(num, cochain[gh])?);
            }
        }
        Cocycle2::new(self.group.clone(), self.spec.clone(), values)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn value(&self, g: usize, h: usize) -> u64 {
        self.values[g * self.group.order() + h]
    }
}

/// The group algebra `kG` with permutation structure constants.
pub fn group_algebra(g: &Arc<FiniteGroup>, spec: &Arc<FieldSpec>) -> Result<Arc<Algebra>> {
    let n = g.order();
    let entries: Vec<(usize, usize, usize, u64)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, g.mul(a, b), 1u64))
        .collect();
    let mut unit = vec![0u64; n];
    unit[g.identity()] = 1;
    Algebra::from_entries(spec.clone(), n, &entries, unit)
}

/// Twisted group algebra `k_alpha G`: `u_g u_h = alpha(g,h) u_{gh}`.
pub fn twisted_group_algebra(g: &Arc<FiniteGroup>, alpha: &Cocycle2) -> Result<Arc<Algebra>> {
    if !FiniteGroup::same(g, alpha.group()) {
        return Err(Error::Invalid("cocycle is over a different group".into()));
    }
    let n = g.order();
    let entries: Vec<(usize, usize, usize, u64)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, g.mul(a, b), alpha.value(a, b)))
        .collect();
    let mut unit = vec![0u64; n];
    unit[g.identity()] = 1;
    Algebra::from_entries(alpha.spec().clone(), n, &entries, unit)
}

/// `P x| E` for an action of `E` on `P` by automorphisms; `action[e]` is
/// the permutation of `P` implemented by `e`. Elements are indexed
/// `p * |E| + e`.
pub fn semidirect_product(
    p: &Arc<FiniteGroup>,
    e: &Arc<FiniteGroup>,
    action: &[Vec<usize>],
) -> Result<Arc<FiniteGroup>> {
    let np = p.order();
    let ne = e.order();
    if action.len() != ne {
        return Err(Error::NotAnAction("one permutation per element of E required".into()));
    }
    for (idx, phi) in action.iter().enumerate() {
        if phi.len() != np {
            return Err(Error::NotAnAction(format!("permutation {idx} has wrong length")));
        }
        let mut seen = vec![false; np];
        for &x in phi {
            if x >= np || seen[x] {
                return Err(Error::NotAnAction(format!("entry {idx} is not a bijection")));
            }
            seen[x] = true;
        }
        for a in 0..np {
            for b in 0..np {
                if phi[p.mul(a, b)] != p.mul(phi[a], phi[b]) {
                    return Err(Error::NotAnAction(format!(
                        "entry {idx} is not multiplicative at ({a},{b})"
                    )));
                }
            }
        }
    }
    // homomorphism: action[e1 e2] = action[e1] after action[e2]
    for e1 in 0..ne {
        for e2 in 0..ne {
            let prod = e.mul(e1, e2);
            for x in 0..np {
                if action[prod][x] != action[e1][action[e2][x]] {
                    return Err(Error::NotAnAction(format!(
                        "action is not a homomorphism at ({e1},{e2})"
                    )));
                }
            }
        }
    }
    let n = np * ne;
    let mut table = vec![0usize; n * n];
    for p1 in 0..np {
        for e1 in 0..ne {
            for p2 in 0..np {
                for e2 in 0..ne {
                    let g = p1 * ne + e1;
                    let h = p2 * ne + e2;
                    // (p1, e1)(p2, e2) = (p1 * phi_{e1}(p2), e1 e2)
                    table[g * n + h] = p.mul(p1, action[e1][p2]) * ne + e.mul(e1, e2);
                }
            }
        }
    }
    FiniteGroup::new(n, table)
}

/// The untwisted form of a twisted group algebra: a central extension `F`
/// of `G` by a cyclic `Z` of order n, and the idempotent cutting the block
/// of `kF` isomorphic to `k_alpha G`.
pub struct CentralExtensionForm {
    pub group: Arc<FiniteGroup>,
    /// Coordinates of the central idempotent in `kF`.
    pub idempotent: Vec<u64>,
    /// The cut algebra `kF c`.
    pub cut: Arc<Algebra>,
    /// Verified isomorphism `k_alpha(G) -> kF c`, `u_g -> g-hat c`.
    pub iso: AlgebraMorphism,
}

pub fn central_extension_form(
    g: &Arc<FiniteGroup>,
    alpha: &Cocycle2,
) -> Result<CentralExtensionForm> {
    if !FiniteGroup::same(g, alpha.group()) {
        return Err(Error::Invalid("cocycle is over a different group".into()));
    }
    let spec = alpha.spec().clone();
    let p = spec.p();
    let ng = g.order();
    // n = lcm of the multiplicative orders of the cocycle values
    let mut n: u64 = 1;
    for gg in 0..ng {
        for h in 0..ng {
            let o = spec.mult_order(alpha.value(gg, h))?;
            n = n / gcd(n, o) * o;
        }
    }
    if n % p == 0 {
        return Err(Error::OrderNotCoprime { n, p });
    }
    let zeta = spec.root_of_unity(n)?;
    let dlog = |v: u64| -> Result<u64> {
        let mut cur = 1u64;
        for k in 0..n {
            if cur == v {
                return Ok(k);
            }
            cur = spec.mul(cur, zeta);
        }
        Err(Error::Invalid("cocycle value outside the cyclic subgroup".into()))
    };
    let mut nu = Vec::with_capacity(ng * ng);
    for a in 0..ng {
        for b in 0..ng {
            nu.push(dlog(alpha.value(a, b))?);
        }
    }
    // F: pairs (z, g), (z1,g1)(z2,g2) = (z1 + z2 + nu(g1,g2), g1 g2)
    let nz = n as usize;
    let nf = nz * ng;
    let mut table = vec![0usize; nf * nf];
    for z1 in 0..nz {
        for g1 in 0..ng {
            for z2 in 0..nz {
                for g2 in 0..ng {
                    let a = z1 * ng + g1;
                    let b = z2 * ng + g2;
                    let z = (z1 + z2 + nu[g1 * ng + g2] as usize) % nz;
                    table[a * nf + b] = z * ng + g.mul(g1, g2);
                }
            }
        }
    }
    let f_group = FiniteGroup::new(nf, table)?;
    let kf = group_algebra(&f_group, &spec)?;
    // c = (1/n) sum_z chi(z)^{-1} z, chi(z_j) = zeta^j
    let mut n_in_field = 0u64;
    for _ in 0..n {
        n_in_field = spec.add(n_in_field, 1);
    }
    let n_inv = spec.inv(n_in_field)?;
    let mut c = vec![0u64; nf];
    for j in 0..nz {
        let chi_inv = spec.pow(zeta, (n - (j as u64 % n)) % n);
        c[j * ng + g.identity()] = spec.mul(n_inv, chi_inv);
    }
    if kf.mul_vec(&c, &c) != c {
        return Err(Error::Invalid("central idempotent failed to be idempotent".into()));
    }
    let (cut, cut_basis) = kf.corner_algebra(&c)?;
    if cut.dim() != ng {
        return Err(Error::Invalid("cut block has unexpected dimension".into()));
    }
    // the map u_g -> g-hat * c, expressed in the cut basis
    let twisted = twisted_group_algebra(g, alpha)?;
    let mut sys = Mat::zero(spec.clone(), nf, cut.dim());
    for col in 0..cut.dim() {
        for r in 0..nf {
            sys.set(r, col, cut_basis.get(col, r));
        }
    }
    let mut iso_mat = Mat::zero(spec.clone(), cut.dim(), ng);
    for gg in 0..ng {
        let mut ghat = vec![0u64; nf];
        ghat[gg] = 1; // (z = 0, g)
        let img = kf.mul_vec(&ghat, &c);
        let coords = sys
            .solve(&img)
            .ok_or_else(|| Error::Invalid("image of u_g escaped the cut block".into()))?;
        for (r, &x) in coords.iter().enumerate() {
            iso_mat.set(r, gg, x);
        }
    }
    let iso = AlgebraMorphism::new(twisted, cut.clone(), iso_mat)?;
    if !iso.is_isomorphism() {
        return Err(Error::Invalid("untwisting map is not invertible".into()));
    }
    Ok(CentralExtensionForm { group: f_group, idempotent: c, cut, iso })
}

/// A block decomposition: primitive central idempotents and the blocks
/// they cut, ordered by (dimension, idempotent coordinates).
pub struct BlockDecomposition {
    pub algebra: Arc<Algebra>,
    pub idempotents: Vec<Vec<u64>>,
    pub blocks: Vec<Arc<Algebra>>,
}

pub fn block_decomposition(a: &Arc<Algebra>) -> Result<BlockDecomposition> {
    a.require_split()?;
    let (center, inclusion) = a.center_algebra()?;
    let zidems = center.primitive_idempotents()?;
    let mut idems: Vec<Vec<u64>> = zidems
        .iter()
        .map(|zi| {
            let mut v = vec![0u64; a.dim()];
            for (k, &c) in zi.iter().enumerate() {
                if c != 0 {
                    let row = inclusion.row(k);
                    for (t, vv) in v.iter_mut().enumerate() {
                        *vv = a.spec().add(*vv, a.spec().mul(c, row[t]));
                    }
                }
            }
            v
        })
        .collect();
    let mut sum = vec![0u64; a.dim()];
    for (i, ei) in idems.iter().enumerate() {
        for (t, s) in sum.iter_mut().enumerate() {
            *s = a.spec().add(*s, ei[t]);
        }
        for (j, ej) in idems.iter().enumerate() {
            let prod = a.mul_vec(ei, ej);
            let expect = if i == j { ei.clone() } else { vec![0u64; a.dim()] };
            if prod != expect {
                return Err(Error::Invalid("block idempotents are not orthogonal".into()));
            }
        }
    }
    if sum != a.unit() {
        return Err(Error::Invalid("block idempotents do not sum to 1".into()));
    }
    idems.sort_by_key(|e| {
        let dim = a
            .corner_algebra(e)
            .map(|(b, _)| b.dim())
            .unwrap_or(usize::MAX);
        (dim, e.clone())
    });
    let blocks: Vec<Arc<Algebra>> = idems
        .iter()
        .map(|e| a.corner_algebra(e).map(|(b, _)| b))
        .collect::<Result<_>>()?;
    let total: usize = blocks.iter().map(|b| b.dim()).sum();
    if total != a.dim() {
        return Err(Error::Invalid("blocks do not exhaust the algebra".into()));
    }
    Ok(BlockDecomposition { algebra: a.clone(), idempotents: idems, blocks })
}

/// Defect: d with p^d the largest elementary divisor of the Cartan matrix
/// (Smith normal form over the integers).
pub fn defect(block: &Arc<Algebra>) -> Result<u32> {
    let cartan = block.cartan_matrix()?;
    let divisors = cartan.smith_diagonal();
    let largest = divisors.iter().copied().max().unwrap_or(1);
    if largest <= 0 {
        return Err(Error::Invalid("Cartan matrix is singular".into()));
    }
    let p = block.spec().p() as i64;
    let mut d = 0u32;
    let mut v = largest;
    while v % p == 0 {
        v /= p;
        d += 1;
    }
    if v != 1 {
        return Err(Error::Invalid(format!(
            "largest Cartan elementary divisor {largest} is not a power of {p}"
        )));
    }
    Ok(d)
}

/// `(|Out(P)|_{p'})^2` with Aut enumerated by brute force.
pub fn out_bound(p_group: &Arc<FiniteGroup>, p: u64) -> Result<u64> {
    let order = p_group.order();
    if order > GROUP_CAP {
        return Err(Error::GroupTooLarge { order, cap: GROUP_CAP });
    }
    let mut o = order as u64;
    while o % p == 0 {
        o /= p;
    }
    if o != 1 {
        return Err(Error::Invalid(format!("group of order {order} is not a {p}-group")));
    }
    let aut = p_group.automorphism_count() as u64;
    let inn = (order / p_group.center().len()) as u64;
    let mut out = aut / inn;
    while out % p == 0 {
        out /= p;
    }
    Ok(out * out)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        for n in 1..=8 {
            let g = FiniteGroup::cyclic(n).unwrap();
            assert_eq!(g.order(), n);
            if n > 1 {
                assert_eq!(g.element_order(1), n);
            }
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(matches!(FiniteGroup::new(2, vec![0, 0, 0, 0]), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn trivial_group_algebra_is_the_field() {
        let g = FiniteGroup::cyclic(1).unwrap();
        let spec = FieldSpec::get(5, 1).unwrap();
        let a = group_algebra(&g, &spec).unwrap();
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn automorphism_counts_of_small_groups() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(c3.automorphism_count(), 2);
        let v4 = FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(2).unwrap(),
        )
        .unwrap();
        assert_eq!(v4.automorphism_count(), 6); // GL_2(F_2)
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(c4.automorphism_count(), 2);
    }

    #[test]
    fn out_bounds_from_small_p_groups() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(out_bound(&c3, 3).unwrap(), 4);
        let v4 = FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(2).unwrap(),
        )
        .unwrap();
        assert_eq!(out_bound(&v4, 2).unwrap(), 9);
        let trivial = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(out_bound(&trivial, 2).unwrap(), 1);
    }

    #[test]
    fn semidirect_inversion_gives_s3() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let action = vec![vec![0, 1, 2], vec![0, 2, 1]]; // inversion
        let s3 = semidirect_product(&c3, &c2, &action).unwrap();
        assert_eq!(s3.order(), 6);
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![0, 2, 1],
            vec![2, 1, 0],
            vec![1, 0, 2],
        ];
        let s3p = FiniteGroup::from_permutations(&perms).unwrap();
        assert!(!s3.isomorphisms_to(&s3p).is_empty());
        // trivial action gives C6, which is not S3
        let c6 = semidirect_product(&c3, &c2, &[vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert!(c6.isomorphisms_to(&s3).is_empty());
        // identity complement gives P back
        let p_again =
            semidirect_product(&c3, &FiniteGroup::cyclic(1).unwrap(), &[vec![0, 1, 2]]).unwrap();
        assert!(!p_again.isomorphisms_to(&c3).is_empty());
    }

    #[test]
    fn non_action_is_rejected() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let action = vec![vec![0, 1, 2], vec![1, 0, 2]]; // moves the identity
        assert!(matches!(semidirect_product(&c3, &c2, &action), Err(Error::NotAnAction(_))));
    }
}
