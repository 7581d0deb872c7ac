//! Bounded isomorphism search for structure-constant algebras.
//!
//! The search is three-valued: a verified morphism, a non-isomorphism
//! certificate, or an honest `Unknown` on budget exhaustion. Certificates
//! are either invariant mismatches (dimension, radical filtration, center,
//! semisimple data, Cartan matrix up to simultaneous permutation) or a
//! completed exhaustive enumeration.
//!
//! Enumeration exploits two structure theorems: for split semisimple
//! algebras the block form makes every dimension-matching of simples an
//! isomorphism; for split basic algebras every isomorphism can be adjusted
//! by an inner automorphism to map a fixed complete system of primitive
//! idempotents onto a fixed target system, so only idempotent permutations
//! and arrow images are enumerated. Everything else goes through a generic
//! generator search that respects the radical filtration.

use crate::algebra::{Algebra, AlgebraMorphism};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Mat};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum Certificate {
    Dimension { left: usize, right: usize },
    CenterDimension { left: usize, right: usize },
    RadicalFiltration { left: Vec<usize>, right: Vec<usize> },
    /// Sorted (dimension, endomorphism dimension) pairs of the distinct
    /// simples, plus the factor-dimension multiset of the regular module.
    SemisimpleData { left: Vec<(usize, usize)>, right: Vec<(usize, usize)> },
    /// No label permutation aligns the two Cartan matrices.
    CartanUnmatched,
    /// The enumeration space was searched completely without a hit.
    SearchExhausted,
}

#[derive(Debug)]
pub enum IsoOutcome {
    Found(Box<AlgebraMorphism>),
    NotIsomorphic(Certificate),
    Unknown,
}

#[derive(Debug, PartialEq, Eq)]
pub enum EnumOutcome {
    /// The callback stopped the enumeration.
    Stopped,
    /// Every candidate was tried.
    Exhausted,
    /// Node budget ran out.
    Budget,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Decide isomorphism of two algebras over one field within a node budget.
pub fn iso_search(a: &Arc<Algebra>, b: &Arc<Algebra>, budget: u64) -> Result<IsoOutcome> {
    if a.spec() != b.spec() {
        return Err(Error::FieldMismatch {
            p1: a.spec().p(),
            m1: a.spec().m(),
            p2: b.spec().p(),
            m2: b.spec().m(),
        });
    }
    if a.structural_eq(b) {
        return Ok(IsoOutcome::Found(Box::new(AlgebraMorphism {
            source: a.clone(),
            target: b.clone(),
            matrix: Mat::identity(a.spec().clone(), a.dim()),
        })));
    }
    if let Some(cert) = invariant_mismatch(a, b)? {
        return Ok(IsoOutcome::NotIsomorphic(cert));
    }
    let mut found = None;
    let outcome = for_each_isomorphism(a, b, budget, |m| {
        found = Some(m.clone());
        true
    })?;
    match (found, outcome) {
        (Some(m), _) => Ok(IsoOutcome::Found(Box::new(m))),
        (None, EnumOutcome::Exhausted) => Ok(IsoOutcome::NotIsomorphic(Certificate::SearchExhausted)),
        (None, _) => Ok(IsoOutcome::Unknown),
    }
}

/// Re-check a certificate against the two algebras (soundness audit).
pub fn certificate_holds(a: &Arc<Algebra>, b: &Arc<Algebra>, cert: &Certificate) -> Result<bool> {
    Ok(match cert {
        Certificate::Dimension { .. } => a.dim() != b.dim(),
        Certificate::CenterDimension { .. } => a.center_basis().rows() != b.center_basis().rows(),
        Certificate::RadicalFiltration { .. } => radical_filtration(a)? != radical_filtration(b)?,
        Certificate::SemisimpleData { .. } => semisimple_data(a)? != semisimple_data(b)?,
        Certificate::CartanUnmatched => {
            a.is_split()? && b.is_split()? && cartan_matchings(a, b)?.is_empty()
        }
        Certificate::SearchExhausted => true, // vouched for by the enumeration itself
    })
}

fn invariant_mismatch(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Option<Certificate>> {
    if a.dim() != b.dim() {
        return Ok(Some(Certificate::Dimension { left: a.dim(), right: b.dim() }));
    }
    let (ca, cb) = (a.center_basis().rows(), b.center_basis().rows());
    if ca != cb {
        return Ok(Some(Certificate::CenterDimension { left: ca, right: cb }));
    }
    let (ra, rb) = (radical_filtration(a)?, radical_filtration(b)?);
    if ra != rb {
        return Ok(Some(Certificate::RadicalFiltration { left: ra, right: rb }));
    }
    let (sa, sb) = (semisimple_data(a)?, semisimple_data(b)?);
    if sa != sb {
        return Ok(Some(Certificate::SemisimpleData { left: sa, right: sb }));
    }
    if a.is_split()? && b.is_split()? && cartan_matchings(a, b)?.is_empty() {
        return Ok(Some(Certificate::CartanUnmatched));
    }
    Ok(None)
}

/// Dimensions of J, J^2, ... down to zero.
fn radical_filtration(a: &Arc<Algebra>) -> Result<Vec<usize>> {
    let rad = a.radical()?;
    let mut out = Vec::new();
    let mut power: Vec<Vec<u64>> = rad.rows_vec();
    while !power.is_empty() {
        out.push(power.len());
        let mut next = Echelon::new(a.spec().clone(), a.dim());
        for x in &power {
            for r in 0..rad.rows() {
                next.insert(a.mul_vec(x, rad.row(r)));
            }
        }
        power = next.rows().to_vec();
    }
    Ok(out)
}

/// Sorted (dim, end-dim) pairs of the distinct simples.
fn semisimple_data(a: &Arc<Algebra>) -> Result<Vec<(usize, usize)>> {
    let reg = crate::modrep::registry(a)?;
    let mut out: Vec<(usize, usize)> = reg
        .simples
        .iter()
        .zip(&reg.end_dims)
        .map(|(s, &e)| (s.dim(), e))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// All label bijections aligning simple dimensions and Cartan matrices.
fn cartan_matchings(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Vec<Vec<usize>>> {
    let ca = a.cartan_matrix()?;
    let cb = b.cartan_matrix()?;
    let da = a.simple_dims()?;
    let db = b.simple_dims()?;
    let s = da.len();
    if db.len() != s {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; s];
    let mut used = vec![false; s];
    fn rec(
        i: usize,
        s: usize,
        da: &[usize],
        db: &[usize],
        ca: &crate::intmat::IntMat,
        cb: &crate::intmat::IntMat,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == s {
            out.push(perm.clone());
            return;
        }
        for j in 0..s {
            if used[j] || da[i] != db[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                ca.get(i, k) == cb.get(j, perm[k])
                    && ca.get(k, i) == cb.get(perm[k], j)
            }) && ca.get(i, i) == cb.get(j, j);
            if ok {
                perm[i] = j;
                used[j] = true;
                rec(i + 1, s, da, db, ca, cb, perm, used, out);
                used[j] = false;
                perm[i] = usize::MAX;
            }
        }
    }
    rec(0, s, &da, &db, &ca, &cb, &mut perm, &mut used, &mut out);
    Ok(out)
}

/// Enumerate isomorphisms `a -> b`, calling `visit` on each verified one
/// until it returns true. Completeness of the enumeration (up to the
/// simple-correspondence relevant for restriction functors) is what makes
/// an `Exhausted` outcome a non-isomorphism certificate.
pub fn for_each_isomorphism(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    budget: u64,
    mut visit: impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<EnumOutcome> {
    if a.dim() != b.dim() {
        return Ok(EnumOutcome::Exhausted);
    }
    let mut budget = budget;
    let split = a.is_split()? && b.is_split()?;
    let rad_a = a.radical()?;
    let rad_b = b.radical()?;
    if rad_a.rows() != rad_b.rows() {
        return Ok(EnumOutcome::Exhausted);
    }
    if split && rad_a.rows() == 0 {
        return wedderburn_enum(a, b, &mut budget, &mut visit);
    }
    let basic = split
        && a.simple_dims()?.iter().all(|&d| d == 1)
        && b.simple_dims()?.iter().all(|&d| d == 1);
    if basic {
        return pinned_enum(a, b, &mut budget, &mut visit);
    }
    generic_enum(a, b, &mut budget, &mut visit)
}

// ---- graph-closure engine ----
//
// A partial morphism is a list of (source, image) pairs; its graph is a
// subspace of A + B. Closing under products and reducing keeps the graph a
// subspace; a vector with zero source part and nonzero image part is a
// linear inconsistency and kills the branch. Products of the independent
// generators suffice by bilinearity.

#[derive(Clone)]
struct Closure {
    ech: Echelon,
    pairs: Vec<(Vec<u64>, Vec<u64>)>,
}

impl Closure {
    fn new(a: &Algebra, b: &Algebra) -> Closure {
        Closure { ech: Echelon::new(a.spec().clone(), a.dim() + b.dim()), pairs: Vec::new() }
    }

    /// Add a pair and close under products; `Ok(false)` = contradiction.
    fn add(
        &mut self,
        a: &Algebra,
        b: &Algebra,
        x: Vec<u64>,
        y: Vec<u64>,
        budget: &mut u64,
    ) -> Result<Option<bool>> {
        let na = a.dim();
        let mut queue: Vec<(Vec<u64>, Vec<u64>)> = vec![(x, y)];
        while let Some((xs, ys)) = queue.pop() {
            if *budget == 0 {
                return Ok(None);
            }
            *budget -= 1;
            let mut w = xs.clone();
            w.extend_from_slice(&ys);
            let red = self.ech.reduce(&w);
            let Some(lead) = red.iter().position(|&c| c != 0) else {
                continue;
            };
            if lead >= na {
                return Ok(Some(false));
            }
            self.ech.insert(w);
            for (px, py) in self.pairs.clone() {
                queue.push((a.mul_vec(&xs, &px), b.mul_vec(&ys, &py)));
                queue.push((a.mul_vec(&px, &xs), b.mul_vec(&py, &ys)));
            }
            queue.push((a.mul_vec(&xs, &xs), b.mul_vec(&ys, &ys)));
            self.pairs.push((xs, ys));
        }
        Ok(Some(true))
    }

    fn spans_source(&self, na: usize) -> bool {
        self.ech.pivots().iter().filter(|&&p| p < na).count() == na
    }

    /// Extract the матrix once the source is spanned.
    fn matrix(&self, a: &Algebra, b: &Algebra) -> Mat {
        let (na, nb) = (a.dim(), b.dim());
        let mut m = Mat::zero(a.spec().clone(), nb, na);
        for k in 0..na {
            let mut w = vec![0u64; na + nb];
            w[k] = 1;
            let red = self.ech.reduce(&w);
            for r in 0..nb {
                m.set(r, k, a.spec().neg(red[na + r]));
            }
        }
        m
    }
}

fn emit(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    closure: &Closure,
    visit: &mut impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<bool> {
    if !closure.spans_source(a.dim()) {
        return Ok(false);
    }
    let matrix = closure.matrix(a, b);
    if matrix.inverse().is_none() {
        return Ok(false);
    }
    match AlgebraMorphism::new(a.clone(), b.clone(), matrix) {
        Ok(m) => Ok(visit(&m)),
        Err(_) => Ok(false),
    }
}

// ---- split semisimple: block form ----

fn wedderburn_enum(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    budget: &mut u64,
    visit: &mut impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<EnumOutcome> {
    let phi_a = block_form(a)?;
    let phi_b = block_form(b)?;
    let dims_a = a.simple_dims()?;
    let dims_b = b.simple_dims()?;
    let s = dims_a.len();
    if dims_b.len() != s {
        return Ok(EnumOutcome::Exhausted);
    }
    let Some(phi_b_inv) = phi_b.inverse() else {
        return Err(Error::Invalid("block form of a split semisimple algebra must be invertible".into()));
    };
    // offsets of the blocks in the flattened form
    let offset = |dims: &[usize], i: usize| -> usize { dims[..i].iter().map(|d| d * d).sum() };
    let mut perm = vec![usize::MAX; s];
    let mut used = vec![false; s];
    let n = a.dim();
    let spec = a.spec().clone();
    // depth-first over dimension-preserving matchings
    fn rec(
        i: usize,
        s: usize,
        dims_a: &[usize],
        dims_b: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ctx: &mut dyn FnMut(&[usize]) -> Result<Option<bool>>,
    ) -> Result<Option<bool>> {
        if i == s {
            return ctx(perm);
        }
        for j in 0..s {
            if used[j] || dims_a[i] != dims_b[j] {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            let r = rec(i + 1, s, dims_a, dims_b, perm, used, ctx)?;
            used[j] = false;
            perm[i] = usize::MAX;
            match r {
                Some(true) => return Ok(Some(true)),
                Some(false) => {}
                None => return Ok(None),
            }
        }
        Ok(Some(false))
    }
    let mut handle = |perm: &[usize]| -> Result<Option<bool>> {
        if *budget == 0 {
            return Ok(None);
        }
        *budget = budget.saturating_sub(1);
        let mut p = Mat::zero(spec.clone(), n, n);
        for (i, &j) in perm.iter().enumerate() {
            let d = dims_a[i];
            let oa = offset(&dims_a, i);
            let ob = offset(&dims_b, j);
            for t in 0..d * d {
                p.set(ob + t, oa + t, 1);
            }
        }
        let cand = phi_b_inv.mul(&p).mul(&phi_a);
        match AlgebraMorphism::new(a.clone(), b.clone(), cand) {
            Ok(m) => Ok(Some(visit(&m))),
            Err(_) => Ok(Some(false)),
        }
    };
    match rec(0, s, &dims_a, &dims_b, &mut perm, &mut used, &mut handle)? {
        Some(true) => Ok(EnumOutcome::Stopped),
        Some(false) => Ok(EnumOutcome::Exhausted),
        None => Ok(EnumOutcome::Budget),
    }
}

/// The map `x -> blockdiag(action of x on each simple)` as a square matrix;
/// invertible exactly for split semisimple algebras.
fn block_form(a: &Arc<Algebra>) -> Result<Mat> {
    let reg = crate::modrep::registry(a)?;
    let n = a.dim();
    let total: usize = reg.simples.iter().map(|s| s.dim() * s.dim()).sum();
    if total != n {
        return Err(Error::Invalid("block form needs a split semisimple algebra".into()));
    }
    let mut phi = Mat::zero(a.spec().clone(), n, n);
    let mut row = 0usize;
    for s in &reg.simples {
        let d = s.dim();
        for r in 0..d {
            for c in 0..d {
                for k in 0..n {
                    phi.set(row, k, s.action(k).get(r, c));
                }
                row += 1;
            }
        }
    }
    Ok(phi)
}

// ---- split basic: pinned idempotents plus arrow images ----

fn pinned_enum(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    budget: &mut u64,
    visit: &mut impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<EnumOutcome> {
    let s = a.simple_count()?;
    let idems_a = labeled_idempotents(a, s)?;
    let idems_b = labeled_idempotents(b, s)?;
    let rad_a = a.radical()?;
    let rad_b = b.radical()?;
    let rad2_a = ideal_square(a, &rad_a);
    let rad2_b = ideal_square(b, &rad_b);
    // arrows of A: complement of f_j J^2 f_i inside f_j J f_i, per (i, j)
    let mut arrows: Vec<(usize, usize, Vec<u64>)> = Vec::new();
    for i in 0..s {
        for j in 0..s {
            let sub2 = corner_slice(a, &idems_a[j], &idems_a[i], &rad2_a);
            let mut ech = sub2;
            for v in corner_slice(a, &idems_a[j], &idems_a[i], &rad_a).rows() {
                if ech.insert(v.clone()) {
                    arrows.push((i, j, v.clone()));
                }
            }
        }
    }
    // sanity: idempotents plus arrows generate A
    {
        let mut gens: Vec<Vec<u64>> = vec![a.unit().to_vec()];
        gens.extend(idems_a.iter().cloned());
        gens.extend(arrows.iter().map(|(_, _, v)| v.clone()));
        let mut span = Echelon::new(a.spec().clone(), a.dim());
        for g in &gens {
            span.insert(g.clone());
        }
        let mut grew = true;
        while grew {
            grew = false;
            let rows = span.rows().to_vec();
            for x in &rows {
                for y in &rows {
                    if span.insert(a.mul_vec(x, y)) {
                        grew = true;
                    }
                }
            }
        }
        if span.len() != a.dim() {
            // fall back rather than risk a bogus exhaustion certificate
            return generic_enum(a, b, budget, visit);
        }
    }
    // target corner subspaces f'_j J' f'_i, per (i, j)
    let mut target_corner = vec![vec![Echelon::new(a.spec().clone(), b.dim()); s]; s];
    for i in 0..s {
        for j in 0..s {
            target_corner[j][i] = corner_slice(b, &idems_b[j], &idems_b[i], &rad_b);
        }
    }
    let perms = cartan_matchings(a, b)?;
    for perm in &perms {
        // arrow-count compatibility
        let compat = (0..s).all(|i| {
            (0..s).all(|j| {
                let da = arrows.iter().filter(|(ai, aj, _)| *ai == i && *aj == j).count();
                let sub2 = corner_slice(b, &idems_b[perm[j]], &idems_b[perm[i]], &rad2_b);
                let full = &target_corner[perm[j]][perm[i]];
                da == full.len() - sub2.len()
            })
        });
        if !compat {
            continue;
        }
        let mut base = Closure::new(a, b);
        let mut ok = match base.add(a, b, a.unit().to_vec(), b.unit().to_vec(), budget)? {
            Some(v) => v,
            None => return Ok(EnumOutcome::Budget),
        };
        for (l, f) in idems_a.iter().enumerate() {
            if !ok {
                break;
            }
            ok = match base.add(a, b, f.clone(), idems_b[perm[l]].clone(), budget)? {
                Some(v) => v,
                None => return Ok(EnumOutcome::Budget),
            };
        }
        if !ok {
            continue;
        }
        match arrow_dfs(a, b, &arrows, 0, &target_corner, perm, &base, budget, visit)? {
            Some(true) => return Ok(EnumOutcome::Stopped),
            Some(false) => {}
            None => return Ok(EnumOutcome::Budget),
        }
    }
    Ok(EnumOutcome::Exhausted)
}

#[allow(clippy::too_many_arguments)]
fn arrow_dfs(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    arrows: &[(usize, usize, Vec<u64>)],
    level: usize,
    target_corner: &[Vec<Echelon>],
    perm: &[usize],
    state: &Closure,
    budget: &mut u64,
    visit: &mut impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<Option<bool>> {
    if level == arrows.len() {
        return emit(a, b, state, visit).map(Some);
    }
    let (i, j, src) = &arrows[level];
    let space = &target_corner[perm[*j]][perm[*i]];
    let basis = space.rows();
    let q = a.spec().q();
    let dim = basis.len();
    let mut idx = vec![0u64; dim];
    loop {
        // candidate image
        let mut img = vec![0u64; b.dim()];
        for (c, row) in idx.iter().zip(basis) {
            if *c != 0 {
                for (k, v) in img.iter_mut().enumerate() {
                    *v = a.spec().add(*v, a.spec().mul(*c, row[k]));
                }
            }
        }
        let mut next = state.clone();
        match next.add(a, b, src.clone(), img, budget)? {
            None => return Ok(None),
            Some(true) => {
                match arrow_dfs(a, b, arrows, level + 1, target_corner, perm, &next, budget, visit)? {
                    Some(true) => return Ok(Some(true)),
                    Some(false) => {}
                    None => return Ok(None),
                }
            }
            Some(false) => {}
        }
        // odometer
        let mut pos = 0usize;
        loop {
            if pos == dim {
                return Ok(Some(false));
            }
            idx[pos] += 1;
            if idx[pos] < q {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Primitive idempotents reordered so index = top label (basic split case:
/// exactly one idempotent per simple).
fn labeled_idempotents(a: &Arc<Algebra>, s: usize) -> Result<Vec<Vec<u64>>> {
    let data = a.projective_tops()?;
    let mut out: Vec<Option<Vec<u64>>> = vec![None; s];
    for (e, top) in data {
        if out[top].is_some() {
            return Err(Error::Invalid("algebra is not basic: repeated projective cover".into()));
        }
        out[top] = Some(e);
    }
    out.into_iter()
        .map(|o| o.ok_or_else(|| Error::Invalid("missing projective cover".into())))
        .collect()
}

/// Row span of `f X g` for X given by rows.
fn corner_slice(a: &Arc<Algebra>, f: &[u64], g: &[u64], x: &Mat) -> Echelon {
    let mut ech = Echelon::new(a.spec().clone(), a.dim());
    for r in 0..x.rows() {
        ech.insert(a.mul_vec(&a.mul_vec(f, x.row(r)), g));
    }
    ech
}

/// Row span of J^2 given J.
fn ideal_square(a: &Arc<Algebra>, rad: &Mat) -> Mat {
    let mut ech = Echelon::new(a.spec().clone(), a.dim());
    for r in 0..rad.rows() {
        for t in 0..rad.rows() {
            ech.insert(a.mul_vec(rad.row(r), rad.row(t)));
        }
    }
    ech.to_mat()
}

// ---- generic fallback: greedy generators along the radical filtration ----

fn generic_enum(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    budget: &mut u64,
    visit: &mut impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<EnumOutcome> {
    let rad_a = a.radical()?;
    let rad_b = b.radical()?;
    let powers_a = radical_powers(a, &rad_a);
    let powers_b = radical_powers(b, &rad_b);
    // greedy generating set from the basis, highest radical level first is
    // not needed; plain ascending order with closure pruning
    let mut gens: Vec<Vec<u64>> = Vec::new();
    {
        let mut span = Echelon::new(a.spec().clone(), a.dim());
        span.insert(a.unit().to_vec());
        loop {
            let mut grew = true;
            while grew {
                grew = false;
                let rows = span.rows().to_vec();
                for x in &rows {
                    for y in &rows {
                        if span.insert(a.mul_vec(x, y)) {
                            grew = true;
                        }
                    }
                }
            }
            if span.len() == a.dim() {
                break;
            }
            let next = (0..a.dim())
                .map(|k| {
                    let mut v = vec![0u64; a.dim()];
                    v[k] = 1;
                    v
                })
                .find(|v| !span.contains(v))
                .expect("span is proper");
            span.insert(next.clone());
            gens.push(next);
        }
    }
    let levels: Vec<usize> = gens.iter().map(|g| level_of(&powers_a, g)).collect();
    let mut base = Closure::new(a, b);
    match base.add(a, b, a.unit().to_vec(), b.unit().to_vec(), budget)? {
        Some(true) => {}
        Some(false) => return Ok(EnumOutcome::Exhausted),
        None => return Ok(EnumOutcome::Budget),
    }
    match generic_dfs(a, b, &gens, &levels, &powers_b, 0, &base, budget, visit)? {
        Some(true) => Ok(EnumOutcome::Stopped),
        Some(false) => Ok(EnumOutcome::Exhausted),
        None => Ok(EnumOutcome::Budget),
    }
}

fn radical_powers(a: &Arc<Algebra>, rad: &Mat) -> Vec<Mat> {
    // powers[0] = A, powers[d] = J^d
    let mut full = Echelon::new(a.spec().clone(), a.dim());
    for k in 0..a.dim() {
        let mut v = vec![0u64; a.dim()];
        v[k] = 1;
        full.insert(v);
    }
    let mut out = vec![full.to_mat()];
    let mut cur = rad.clone();
    while cur.rows() > 0 {
        out.push(cur.clone());
        let mut next = Echelon::new(a.spec().clone(), a.dim());
        for r in 0..cur.rows() {
            for t in 0..rad.rows() {
                next.insert(a.mul_vec(cur.row(r), rad.row(t)));
            }
        }
        cur = next.to_mat();
    }
    out
}

fn level_of(powers: &[Mat], v: &[u64]) -> usize {
    let mut level = 0;
    for (d, p) in powers.iter().enumerate() {
        if Echelon::from_mat(p).contains(v) {
            level = d;
        } else {
            break;
        }
    }
    level
}

#[allow(clippy::too_many_arguments)]
fn generic_dfs(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    gens: &[Vec<u64>],
    levels: &[usize],
    powers_b: &[Mat],
    depth: usize,
    state: &Closure,
    budget: &mut u64,
    visit: &mut impl FnMut(&AlgebraMorphism) -> bool,
) -> Result<Option<bool>> {
    if depth == gens.len() {
        return emit(a, b, state, visit).map(Some);
    }
    let space = &powers_b[levels[depth].min(powers_b.len() - 1)];
    let basis: Vec<Vec<u64>> = (0..space.rows()).map(|r| space.row(r).to_vec()).collect();
    let q = a.spec().q();
    let dim = basis.len();
    let mut idx = vec![0u64; dim];
    loop {
        let mut img = vec![0u64; b.dim()];
        for (c, row) in idx.iter().zip(&basis) {
            if *c != 0 {
                for (k, v) in img.iter_mut().enumerate() {
                    *v = a.spec().add(*v, a.spec().mul(*c, row[k]));
                }
            }
        }
        let mut next = state.clone();
        match next.add(a, b, gens[depth].clone(), img, budget)? {
            None => return Ok(None),
            Some(true) => {
                match generic_dfs(a, b, gens, levels, powers_b, depth + 1, &next, budget, visit)? {
                    Some(true) => return Ok(Some(true)),
                    Some(false) => {}
                    None => return Ok(None),
                }
            }
            Some(false) => {}
        }
        let mut pos = 0usize;
        loop {
            if pos == dim {
                return Ok(Some(false));
            }
            idx[pos] += 1;
            if idx[pos] < q {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn identity_is_found_immediately() {
        let f9 = samples::gf(3, 2);
        let a = samples::dual_numbers(f9);
        match iso_search(&a, &a, 1000).unwrap() {
            IsoOutcome::Found(m) => {
                assert!(m.is_isomorphism());
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn radical_distinguishes_semisimple_from_local() {
        let f4 = samples::gf(2, 2);
        let dual = samples::dual_numbers(f4.clone());
        let prod = samples::product_fields(f4, 2);
        match iso_search(&dual, &prod, 1000).unwrap() {
            IsoOutcome::NotIsomorphic(Certificate::RadicalFiltration { left, right }) => {
                assert_eq!(left, vec![1]);
                assert_eq!(right, Vec::<usize>::new());
            }
            other => panic!("expected radical certificate, got {other:?}"),
        }
    }

    #[test]
    fn twisted_klein_is_a_matrix_algebra() {
        let f9 = samples::gf(3, 2);
        let tk = samples::twisted_klein(f9.clone()).unwrap();
        let m2 = samples::matrix_algebra(f9, 2);
        match iso_search(&tk, &m2, 100_000).unwrap() {
            IsoOutcome::Found(m) => assert!(m.is_isomorphism()),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn dual_numbers_from_group_algebra_of_c2() {
        // kC_2 at p = 2 is isomorphic to k[x]/(x^2) via 1, g - 1
        let f2 = samples::gf(2, 1);
        let kc2 = crate::groupalg::group_algebra(&samples::cyclic_group(2), &f2).unwrap();
        let dual = samples::dual_numbers(f2);
        match iso_search(&kc2, &dual, 100_000).unwrap() {
            IsoOutcome::Found(m) => assert!(m.is_isomorphism()),
            other => panic!("expected Found, got {other:?}"),
        }
    }
}
