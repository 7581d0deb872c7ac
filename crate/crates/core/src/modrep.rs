//! Modules as families of action matrices, and everything built on
//! splitting them: the MeatAxe, composition factors against a canonical
//! registry of simples, Hom spaces, isomorphism testing, Frobenius twists
//! of modules, and bimodule tensor functors.
//!
//! Vectors are columns; a module of dimension d over an algebra of
//! dimension n is a family of n matrices (d x d) satisfying the structure
//! constant relations, with the unit acting as the identity.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{intertwiner_basis, Echelon, Mat, Rng};
use std::sync::Arc;

/// Words tried by the splitter before giving up (an error, never silence).
const WORD_CAP: usize = 512;
/// Kernel rays examined per word before moving on.
const RAY_CAP: u64 = 512;

#[derive(Clone)]
pub struct ModuleRep {
    algebra: Arc<Algebra>,
    mats: Vec<Mat>,
}

impl std::fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModuleRep(dim {} over {:?})", self.dim(), self.algebra)
    }
}

impl ModuleRep {
    /// Validating constructor: every structure-constant relation must hold
    /// and the unit must act as the identity.
    pub fn new(algebra: Arc<Algebra>, mats: Vec<Mat>) -> Result<ModuleRep> {
        let n = algebra.dim();
        if mats.len() != n {
            return Err(Error::Invalid("one action matrix per basis element required".into()));
        }
        let d = mats.first().map_or(0, |m| m.rows());
        for m in &mats {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Invalid("action matrices must be square of equal size".into()));
            }
        }
        let rep = ModuleRep { algebra, mats };
        rep.verify()?;
        Ok(rep)
    }

    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, mats: Vec<Mat>) -> ModuleRep {
        ModuleRep { algebra, mats }
    }

    fn verify(&self) -> Result<()> {
        let n = self.algebra.dim();
        let d = self.dim();
        let spec = self.algebra.spec();
        // action(e_i) action(e_j) = sum_k c[i][j][k] action(e_k)
        for i in 0..n {
            for j in 0..n {
                let lhs = self.mats[i].mul(&self.mats[j]);
                let mut rhs = Mat::zero(spec.clone(), d, d);
                for &(k, c) in self.algebra.sparse(i, j) {
                    rhs = rhs.add(&self.mats[k].scale(c));
                }
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(i * n + j));
                }
            }
        }
        let unit_action = self.act_by(self.algebra.unit());
        if unit_action != Mat::identity(spec.clone(), d) {
            return Err(Error::NoUnit(0));
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> ModuleRep {
        let spec = algebra.spec().clone();
        let mats = (0..algebra.dim()).map(|_| Mat::zero(spec.clone(), 0, 0)).collect();
        ModuleRep { algebra, mats }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn dim(&self) -> usize {
        self.mats.first().map_or(0, |m| m.rows())
    }
    pub fn action(&self, i: usize) -> &Mat {
        &self.mats[i]
    }
    pub fn actions(&self) -> &[Mat] {
        &self.mats
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_by(&self, x: &[u64]) -> Mat {
        let d = self.dim();
        let spec = self.algebra.spec().clone();
        let mut out = Mat::zero(spec, d, d);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                out = out.add(&self.mats[i].scale(c));
            }
        }
        out
    }

    /// Restrict the action to an action-closed row basis. Coordinates are
    /// taken with respect to the rows as given (solved, not via an
    /// echelonized copy, so any basis of the submodule works).
    pub fn submodule(&self, basis: &Mat) -> Result<ModuleRep> {
        let t = basis.rows();
        let spec = self.algebra.spec().clone();
        let mut mats = Vec::with_capacity(self.mats.len());
        for act in &self.mats {
            let mut sub = Mat::zero(spec.clone(), t, t);
            for i in 0..t {
                let img = act.apply(basis.row(i));
                let coords = basis.coords_in_rows(&img).ok_or(Error::Invalid(
                    "basis is not closed under the action".into(),
                ))?;
                for (k, &c) in coords.iter().enumerate() {
                    sub.set(k, i, c);
                }
            }
            mats.push(sub);
        }
        Ok(ModuleRep { algebra: self.algebra.clone(), mats })
    }

    /// Quotient by a submodule given in this module's coordinates; returns
    /// the quotient and the projection matrix.
    pub fn quotient(&self, sub: &Mat) -> Result<(ModuleRep, Mat)> {
        let d = self.dim();
        let spec = self.algebra.spec().clone();
        let sub_ech = Echelon::from_mat(sub);
        let mut full = Echelon::from_mat(sub);
        let added = full.complete();
        let qd = added.len();
        let project = |v: &[u64]| -> Vec<u64> {
            let r = sub_ech.reduce(v);
            added.iter().map(|&c| r[c]).collect()
        };
        let mut proj = Mat::zero(spec.clone(), qd, d);
        for j in 0..d {
            let mut ej = vec![0u64; d];
            ej[j] = 1;
            let col = project(&ej);
            for k in 0..qd {
                proj.set(k, j, col[k]);
            }
        }
        let mut mats = Vec::with_capacity(self.mats.len());
        for act in &self.mats {
            let mut q = Mat::zero(spec.clone(), qd, qd);
            for (i, &c) in added.iter().enumerate() {
                let mut ec = vec![0u64; d];
                ec[c] = 1;
                let img = project(&act.apply(&ec));
                for (k, &x) in img.iter().enumerate() {
                    q.set(k, i, x);
                }
            }
            mats.push(q);
        }
        Ok((ModuleRep { algebra: self.algebra.clone(), mats }, proj))
    }

    /// Conjugate all action matrices by an invertible change of basis.
    pub fn change_basis(&self, t: &Mat) -> Result<ModuleRep> {
        let ti = t.inverse().ok_or(Error::Invalid("change of basis must be invertible".into()))?;
        let mats = self.mats.iter().map(|m| t.mul(m).mul(&ti)).collect();
        Ok(ModuleRep { algebra: self.algebra.clone(), mats })
    }
}

// ---- spinning and the MeatAxe ----

/// Basis (rows) of the smallest submodule containing `v`.
pub fn spin(m: &ModuleRep, v: &[u64]) -> Result<Mat> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    Ok(spin_raw(m.algebra.spec(), &m.mats, std::slice::from_ref(&v.to_vec())).to_mat())
}

fn spin_raw(spec: &Arc<FieldSpec>, mats: &[Mat], seeds: &[Vec<u64>]) -> Echelon {
    let d = mats.first().map_or(0, |m| m.rows());
    let mut ech = Echelon::new(spec.clone(), d);
    let mut queue: Vec<Vec<u64>> = Vec::new();
    for s in seeds {
        if ech.insert(s.clone()) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for m in mats {
            let img = m.apply(&v);
            if ech.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    ech
}

pub enum MeatAxe {
    Simple,
    /// Row basis of a proper nonzero submodule.
    Split(Mat),
}

/// One Norton-test pass: either a certificate of simplicity or a proper
/// submodule. Words are drawn from a deterministic seeded stream; running
/// out of words is an error, never a silent answer.
pub fn meataxe_split(m: &ModuleRep, seed: u64) -> Result<MeatAxe> {
    let d = m.dim();
    if d == 0 {
        return Err(Error::Invalid("cannot split the zero module".into()));
    }
    if d == 1 {
        return Ok(MeatAxe::Simple);
    }
    let spec = m.algebra.spec().clone();
    let n = m.algebra.dim();
    let q = spec.q();
    let mut rng = Rng::new(seed.wrapping_mul(0x9e3779b9).wrapping_add(d as u64));
    let mut word = m.mats[0].clone();
    for t in 0..WORD_CAP {
        if t > 0 {
            // evolve the word: multiply in, add in, or restart
            let g = &m.mats[rng.below(n as u64) as usize];
            match rng.below(3) {
                0 => word = word.mul(g),
                1 => {
                    let c = 1 + rng.below(q - 1);
                    word = word.add(&g.scale(c));
                }
                _ => word = g.clone(),
            }
            if word.is_zero() {
                word = m.mats[rng.below(n as u64) as usize].clone();
            }
        }
        // a word whose minimal polynomial is irreducible of degree d makes
        // the module a 1-dimensional space over the field it generates, so
        // the module is simple even when its endomorphism ring exceeds k
        let mp = min_poly(&spec, &word);
        if mp.len() == d + 1 && poly_irreducible_codes(&spec, &mp) {
            return Ok(MeatAxe::Simple);
        }
        let lambdas: Vec<u64> = if q <= 64 {
            (0..q).collect()
        } else {
            let mut ls = vec![0u64, 1];
            for _ in 0..62 {
                ls.push(rng.below(q));
            }
            ls
        };
        for lam in lambdas {
            let shifted = if lam == 0 {
                word.clone()
            } else {
                word.sub(&Mat::identity(spec.clone(), d).scale(lam))
            };
            let kernel = shifted.kernel_basis();
            let nu = kernel.rows();
            if nu == 0 || nu == d {
                continue;
            }
            let ray_count = ray_count(q, nu as u32);
            if ray_count > RAY_CAP {
                continue;
            }
            // all kernel rays must spin to the full module
            let mut all_full = true;
            let mut witness_sub = None;
            for ray in kernel_rays(&spec, &kernel) {
                let span = spin_raw(&spec, &m.mats, std::slice::from_ref(&ray));
                if span.len() < d {
                    witness_sub = Some(span.to_mat());
                    all_full = false;
                    break;
                }
            }
            if let Some(sub) = witness_sub {
                return Ok(MeatAxe::Split(sub));
            }
            if !all_full {
                continue;
            }
            // dual side: one kernel ray of the transpose must spin the dual
            let tmats: Vec<Mat> = m.mats.iter().map(|x| x.transpose()).collect();
            let tkernel = shifted.transpose().kernel_basis();
            if tkernel.rows() == 0 {
                continue;
            }
            let ray = tkernel.row(0).to_vec();
            let span = spin_raw(&spec, &tmats, std::slice::from_ref(&ray));
            if span.len() == d {
                return Ok(MeatAxe::Simple);
            }
            // the annihilator of a proper dual submodule is a proper submodule
            let ann = span.to_mat().kernel_basis();
            if ann.rows() == 0 || ann.rows() == d {
                return Err(Error::Invalid("dual spin produced a degenerate annihilator".into()));
            }
            return Ok(MeatAxe::Split(ann));
        }
    }
    Err(Error::SplitSearchExhausted(WORD_CAP))
}

/// Monic minimal polynomial of a square matrix, little-endian coefficients.
fn min_poly(spec: &Arc<FieldSpec>, w: &Mat) -> Vec<u64> {
    let d = w.rows();
    let mut ech = Echelon::new(spec.clone(), d * d);
    let mut powers: Vec<Mat> = vec![Mat::identity(spec.clone(), d)];
    let flatten = |m: &Mat| -> Vec<u64> {
        (0..d).flat_map(|r| m.row(r).to_vec()).collect::<Vec<u64>>()
    };
    ech.insert(flatten(&powers[0]));
    loop {
        let next = powers.last().unwrap().mul(w);
        let flat = flatten(&next);
        if let Some(coords) = ech.coords(&flat) {
            // express w^k in earlier powers; need coordinates against the
            // raw power list, so solve the small linear system directly
            let k = powers.len();
            let mut sys = Mat::zero(spec.clone(), d * d, k);
            for (c, p) in powers.iter().enumerate() {
                let f = flatten(p);
                for (r, &x) in f.iter().enumerate() {
                    sys.set(r, c, x);
                }
            }
            let sol = sys.solve(&flat).expect("dependence certified by echelon");
            let _ = coords;
            let mut out: Vec<u64> = sol.iter().map(|&c| spec.neg(c)).collect();
            out.push(1);
            return out;
        }
        ech.insert(flat);
        powers.push(next);
    }
}

/// Irreducibility over the (possibly non-prime) coefficient field, by the
/// `x^(q^k)` criterion with polynomial arithmetic on element codes.
fn poly_irreducible_codes(spec: &Arc<FieldSpec>, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let qpow = |a: &[u64], mut e: u64| -> Vec<u64> {
        let mut base = qpoly_rem(spec, a, f);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = qpoly_rem(spec, &qpoly_mul(spec, &acc, &base), f);
            }
            base = qpoly_rem(spec, &qpoly_mul(spec, &base, &base), f);
            e >>= 1;
        }
        acc
    };
    // x^(q^k) by iterating the q-power map
    let frob_iter = |k: usize| -> Vec<u64> {
        let mut cur = x.clone();
        for _ in 0..k {
            cur = qpow(&cur, spec.q());
        }
        cur
    };
    let sub = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), 0);
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = spec.sub(out[i], c);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    };
    if !sub(&frob_iter(deg), &x).is_empty() {
        return false;
    }
    let mut m = deg;
    let mut prime_divs = Vec::new();
    let mut dd = 2;
    while dd * dd <= m {
        if m % dd == 0 {
            prime_divs.push(dd);
            while m % dd == 0 {
                m /= dd;
            }
        }
        dd += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    for r in prime_divs {
        let g = qpoly_gcd(spec, &sub(&frob_iter(deg / r), &x), f);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn qpoly_mul(spec: &Arc<FieldSpec>, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = spec.add(out[i + j], spec.mul(x, y));
            }
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn qpoly_rem(spec: &Arc<FieldSpec>, a: &[u64], f: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    while r.last() == Some(&0) {
        r.pop();
    }
    let df = f.len() - 1;
    let lead_inv = spec.inv(f[df]).expect("monic-ish");
    while r.len() > df {
        let lead = spec.mul(*r.last().unwrap(), lead_inv);
        let shift = r.len() - 1 - df;
        for i in 0..=df {
            let idx = shift + i;
            r[idx] = spec.sub(r[idx], spec.mul(lead, f[i]));
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn qpoly_gcd(spec: &Arc<FieldSpec>, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while x.last() == Some(&0) {
        x.pop();
    }
    while y.last() == Some(&0) {
        y.pop();
    }
    while !y.is_empty() {
        let r = qpoly_rem(spec, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn ray_count(q: u64, nu: u32) -> u64 {
    // (q^nu - 1) / (q - 1), saturating
    let mut total: u64 = 0;
    let mut pw: u64 = 1;
    for _ in 0..nu {
        total = total.saturating_add(pw);
        pw = pw.saturating_mul(q);
    }
    total
}

/// Canonical representatives of the 1-dimensional subspaces of the row
/// space of `kernel`: first nonzero coefficient normalized to 1.
fn kernel_rays(spec: &Arc<FieldSpec>, kernel: &Mat) -> Vec<Vec<u64>> {
    let nu = kernel.rows();
    let d = kernel.cols();
    let q = spec.q();
    let mut out = Vec::new();
    for lead in 0..nu {
        // coefficients: 0 for < lead, 1 at lead, free above
        let free = nu - lead - 1;
        let mut idx = vec![0u64; free];
        loop {
            let mut v = kernel.row(lead).to_vec();
            for (f, &c) in idx.iter().enumerate() {
                if c != 0 {
                    let row = kernel.row(lead + 1 + f);
                    for k in 0..d {
                        v[k] = spec.add(v[k], spec.mul(c, row[k]));
                    }
                }
            }
            out.push(v);
            // odometer
            let mut pos = 0usize;
            loop {
                if pos == free {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < q {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == free {
                break;
            }
        }
    }
    out
}

/// Full list of composition factors (with multiplicity), by recursive
/// splitting.
pub fn split_completely(m: &ModuleRep, seed: u64) -> Result<Vec<ModuleRep>> {
    let mut out = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(cur) = stack.pop() {
        if cur.dim() == 0 {
            continue;
        }
        match meataxe_split(&cur, seed)? {
            MeatAxe::Simple => out.push(cur),
            MeatAxe::Split(sub) => {
                let s = cur.submodule(&sub)?;
                let (q, _) = cur.quotient(&sub)?;
                stack.push(s);
                stack.push(q);
            }
        }
    }
    Ok(out)
}

/// A direct summand of a module, carried by its basis in the ambient
/// coordinates.
pub struct Summand {
    pub module: ModuleRep,
    pub carrier: Mat,
}

/// Decompose a semisimple module into simple direct summands. (Also
/// terminates on non-semisimple input with an error when a complement
/// fails to exist.)
pub fn direct_summands(m: &ModuleRep) -> Result<Vec<Summand>> {
    let d = m.dim();
    let spec = m.algebra.spec().clone();
    let mut work = vec![Summand { module: m.clone(), carrier: Mat::identity(spec.clone(), d) }];
    let mut out = Vec::new();
    while let Some(s) = work.pop() {
        if s.module.dim() == 0 {
            continue;
        }
        match meataxe_split(&s.module, 0)? {
            MeatAxe::Simple => out.push(s),
            MeatAxe::Split(sub) => {
                let proj = projector_onto(&s.module, &sub)?;
                let compl = proj.kernel_basis();
                let sub_carrier = rows_through(&sub, &s.carrier);
                let com_carrier = rows_through(&compl, &s.carrier);
                let sub_mod = s.module.submodule(&sub)?;
                let com_mod = s.module.submodule(&compl)?;
                work.push(Summand { module: sub_mod, carrier: sub_carrier });
                work.push(Summand { module: com_mod, carrier: com_carrier });
            }
        }
    }
    out.reverse();
    Ok(out)
}

/// rows(result) = rows(coords) expressed through `basis` (each row of
/// `coords` holds coordinates w.r.t. the rows of `basis`).
fn rows_through(coords: &Mat, basis: &Mat) -> Mat {
    coords.mul(basis)
}

/// A module endomorphism with image inside `sub` restricting to the
/// identity on `sub` (exists iff `sub` is a direct summand). Constraint
/// rows are streamed through an augmented echelon, so memory stays
/// quadratic in the number of unknowns.
fn projector_onto(m: &ModuleRep, sub: &Mat) -> Result<Mat> {
    let d = m.dim();
    let spec = m.algebra.spec().clone();
    let sub_ech = Echelon::from_mat(sub);
    let n = m.mats.len();
    let t = sub.rows();
    // unknowns: phi (d x d), flattened row-major; last column is the rhs
    let unknowns = d * d;
    let mut aug = Echelon::new(spec.clone(), unknowns + 1);
    // intertwining: phi A_i - A_i phi = 0
    for i in 0..n {
        let a = &m.mats[i];
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![0u64; unknowns + 1];
                for k in 0..d {
                    row[r * d + k] = spec.add(row[r * d + k], a.get(k, c));
                    row[k * d + c] = spec.sub(row[k * d + c], a.get(r, k));
                }
                aug.insert(row);
            }
        }
    }
    // phi(u) = u on the submodule basis
    for b in 0..t {
        let u = sub.row(b);
        for r in 0..d {
            let mut row = vec![0u64; unknowns + 1];
            for k in 0..d {
                row[r * d + k] = u[k];
            }
            row[unknowns] = u[r];
            aug.insert(row);
        }
    }
    // image inside sub: the complement coordinates of phi e_j vanish;
    // reduction is linear, so precompute it on unit vectors
    let mut full = Echelon::from_mat(sub);
    let added = full.complete();
    let reduced_units: Vec<Vec<u64>> = (0..d)
        .map(|k| {
            let mut unit = vec![0u64; d];
            unit[k] = 1;
            sub_ech.reduce(&unit)
        })
        .collect();
    for j in 0..d {
        for &cc in &added {
            let mut row = vec![0u64; unknowns + 1];
            for k in 0..d {
                row[k * d + j] = reduced_units[k][cc];
            }
            aug.insert(row);
        }
    }
    // particular solution with free unknowns at zero; a pivot in the rhs
    // column means the system is inconsistent
    let mut sol = vec![0u64; unknowns];
    for (row, &p) in aug.rows().iter().zip(aug.pivots()) {
        if p == unknowns {
            return Err(Error::Invalid("submodule is not a direct summand".into()));
        }
        sol[p] = row[unknowns];
    }
    let mut phi = Mat::zero(spec, d, d);
    for r in 0..d {
        for c in 0..d {
            phi.set(r, c, sol[r * d + c]);
        }
    }
    Ok(phi)
}

// ---- the simple registry ----

/// One simple module stored without a backreference to its algebra.
#[derive(Clone)]
pub(crate) struct RawRep {
    pub mats: Vec<Mat>,
    /// Unsorted trace vector (trace of each basis action); an isomorphism
    /// invariant used as a cheap matching filter.
    pub traces: Vec<u64>,
    /// Sorted copy of the traces; part of the canonical ordering key.
    pub key: (usize, Vec<u64>),
}

impl RawRep {
    fn from_module(m: &ModuleRep) -> RawRep {
        let spec = m.algebra.spec();
        let traces: Vec<u64> = m
            .mats
            .iter()
            .map(|a| {
                let mut t = 0u64;
                for i in 0..a.rows() {
                    t = spec.add(t, a.get(i, i));
                }
                t
            })
            .collect();
        let mut sorted = traces.clone();
        sorted.sort_unstable();
        RawRep { mats: m.mats.clone(), traces, key: (m.dim(), sorted) }
    }

    pub fn dim(&self) -> usize {
        self.mats.first().map_or(0, |m| m.rows())
    }

    pub fn action(&self, i: usize) -> &Mat {
        &self.mats[i]
    }

    pub fn to_module(&self, a: &Arc<Algebra>) -> ModuleRep {
        ModuleRep { algebra: a.clone(), mats: self.mats.clone() }
    }
}

/// The canonical list of simples of an algebra, in the fixed order
/// (dimension, sorted trace fingerprint, first-discovery under seed 0).
pub(crate) struct Registry {
    pub simples: Vec<RawRep>,
    pub end_dims: Vec<usize>,
}

pub(crate) fn registry(a: &Arc<Algebra>) -> Result<&Registry> {
    a.registry
        .get_or_init(|| build_registry(a))
        .as_ref()
        .map_err(|e| e.clone())
}

fn build_registry(a: &Arc<Algebra>) -> Result<Registry> {
    let reg_mod = a.regular_module();
    let factors = split_completely(&reg_mod, 0)?;
    let mut raws: Vec<RawRep> = Vec::new();
    for f in &factors {
        let raw = RawRep::from_module(f);
        // isomorphic simples share the raw trace vector, so it is a sound
        // and cheap pre-filter
        let dup = raws
            .iter()
            .any(|r| r.traces == raw.traces && raw_iso_mats(a.spec(), &r.mats, &raw.mats).is_some());
        if !dup {
            raws.push(raw);
        }
    }
    // stable sort by (dim, fingerprint); discovery order breaks ties
    raws.sort_by(|x, y| x.key.cmp(&y.key));
    let end_dims = raws
        .iter()
        .map(|r| intertwiner_basis(a.spec(), &r.mats, &r.mats).map(|b| b.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Registry { simples: raws, end_dims })
}

pub(crate) fn regular_factors(a: &Arc<Algebra>) -> Result<Vec<RawRep>> {
    Ok(registry(a)?.simples.clone())
}

/// Label of a simple module in its algebra's registry.
pub fn identify_simple(m: &ModuleRep) -> Result<usize> {
    let reg = registry(&m.algebra)?;
    let raw = RawRep::from_module(m);
    for (i, r) in reg.simples.iter().enumerate() {
        if r.traces == raw.traces && raw_iso_mats(m.algebra.spec(), &r.mats, &raw.mats).is_some() {
            return Ok(i);
        }
    }
    Err(Error::LabelMismatch)
}

/// Composition factor counts indexed by canonical label. Requires a split
/// algebra (labels are only canonical then).
pub fn composition_factor_counts(m: &ModuleRep, seed: u64) -> Result<Vec<u64>> {
    m.algebra.require_split()?;
    let s = m.algebra.simple_count()?;
    let mut counts = vec![0u64; s];
    for f in split_completely(m, seed)? {
        counts[identify_simple(&f)?] += 1;
    }
    Ok(counts)
}

// ---- Hom spaces and isomorphism ----

/// Basis of `Hom_A(M, N)` as matrices.
pub fn hom_space(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<Mat>> {
    if !Algebra::same(&m.algebra, &n.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    intertwiner_basis(m.algebra.spec(), &m.mats, &n.mats)
}

/// Nonzero hom between simples is invertible; cheap matcher used by the
/// registry machinery.
pub(crate) fn raw_iso_simple(m: &ModuleRep, n: &ModuleRep) -> Option<Mat> {
    raw_iso_mats(m.algebra.spec(), &m.mats, &n.mats)
}

fn raw_iso_mats(spec: &Arc<FieldSpec>, a: &[Mat], b: &[Mat]) -> Option<Mat> {
    let da = a.first().map_or(0, |m| m.rows());
    let db = b.first().map_or(0, |m| m.rows());
    if da != db {
        return None;
    }
    let homs = intertwiner_basis(spec, a, b).ok()?;
    for h in &homs {
        if h.inverse().is_some() {
            return Some(h.clone());
        }
    }
    None
}

/// Isomorphism test: `Ok(Some(hom))` with a verified invertible hom,
/// `Ok(None)` only on a sound certificate (dimension mismatch, zero Hom
/// space, or exhausted search of the full Hom space), and
/// `Err(IsoUndecided)` when the sampling budget runs out.
pub fn is_isomorphic(m: &ModuleRep, n: &ModuleRep) -> Result<Option<Mat>> {
    if !Algebra::same(&m.algebra, &n.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.dim() == 0 {
        return Ok(Some(Mat::zero(m.algebra.spec().clone(), 0, 0)));
    }
    let homs = hom_space(m, n)?;
    if homs.is_empty() {
        return Ok(None);
    }
    // sweep the basis first
    for h in &homs {
        if h.inverse().is_some() {
            return Ok(Some(h.clone()));
        }
    }
    let spec = m.algebra.spec().clone();
    let q = spec.q();
    let h = homs.len();
    // exhaustive over the hom space when small enough
    let total = q.checked_pow(h as u32);
    if let Some(total) = total.filter(|&t| t <= 1 << 16) {
        for idx in 1..total {
            let mut coeffs = Vec::with_capacity(h);
            let mut rest = idx;
            for _ in 0..h {
                coeffs.push(rest % q);
                rest /= q;
            }
            let mut cand = Mat::zero(spec.clone(), m.dim(), m.dim());
            for (c, hm) in coeffs.iter().zip(&homs) {
                if *c != 0 {
                    cand = cand.add(&hm.scale(*c));
                }
            }
            if cand.inverse().is_some() {
                return Ok(Some(cand));
            }
        }
        return Ok(None);
    }
    // seeded random samples; failure to certify is an error, never a "No"
    let mut rng = Rng::new(0x15015015 ^ (m.dim() as u64) << 8 ^ h as u64);
    for _ in 0..64 {
        let mut cand = Mat::zero(spec.clone(), m.dim(), m.dim());
        for hm in &homs {
            let c = rng.below(q);
            if c != 0 {
                cand = cand.add(&hm.scale(c));
            }
        }
        if cand.inverse().is_some() {
            return Ok(Some(cand));
        }
    }
    Err(Error::IsoUndecided)
}

// ---- twists ----

/// The module over `A^{sigma^t}` with every action entry pushed through
/// the t-fold Frobenius; revalidated against the twisted algebra.
pub fn twist_module(m: &ModuleRep, t: u32) -> Result<ModuleRep> {
    let twisted_algebra = m.algebra.frobenius_twist(t);
    twist_module_into(m, &twisted_algebra, t)
}

/// Same as [`twist_module`] but lands in a caller-supplied instance of the
/// twisted algebra (so labels can be matched against one shared registry).
pub fn twist_module_into(m: &ModuleRep, twisted: &Arc<Algebra>, t: u32) -> Result<ModuleRep> {
    if !twisted.structural_eq(&m.algebra.frobenius_twist(t)) {
        return Err(Error::AlgebraMismatch);
    }
    let mats = m.mats.iter().map(|a| a.frobenius(t)).collect();
    ModuleRep::new(twisted.clone(), mats)
}

/// `perm[i]` = label in `twisted` of the twist of simple `i` of `a`.
pub fn twist_permutation(a: &Arc<Algebra>, twisted: &Arc<Algebra>, t: u32) -> Result<Vec<usize>> {
    let reg = registry(a)?;
    let mut perm = Vec::with_capacity(reg.simples.len());
    for r in 0..reg.simples.len() {
        let s = reg.simples[r].to_module(a);
        let tw = twist_module_into(&s, twisted, t)?;
        perm.push(identify_simple(&tw)?);
    }
    Ok(perm)
}

// ---- bimodules ----

/// A (B, A)-bimodule: commuting left B-action and right A-action on one
/// carrier space. Right actions are stored as matrices `R_a` with
/// `m . a = R_a m`, so `R` reverses products.
#[derive(Clone)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    left_mats: Vec<Mat>,
    right_mats: Vec<Mat>,
}

impl std::fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bimodule(dim {}, {:?} on the left, {:?} on the right)", self.dim(), self.left, self.right)
    }
}

impl Bimodule {
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        left_mats: Vec<Mat>,
        right_mats: Vec<Mat>,
    ) -> Result<Bimodule> {
        // left action is a left module over `left`
        let lmod = ModuleRep::new(left.clone(), left_mats.clone())?;
        let _ = lmod;
        // right action: R_{e_i e_j} = R_j R_i, unit acts as identity
        let d = right_mats.first().map_or(0, |m| m.rows());
        let spec = left.spec().clone();
        if right.spec() != &spec {
            return Err(Error::FieldMismatch {
                p1: left.spec().p(),
                m1: left.spec().m(),
                p2: right.spec().p(),
                m2: right.spec().m(),
            });
        }
        let n = right.dim();
        if right_mats.len() != n {
            return Err(Error::Invalid("one right action matrix per basis element".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = right_mats[j].mul(&right_mats[i]);
                let mut rhs = Mat::zero(spec.clone(), d, d);
                for &(k, c) in right.sparse(i, j) {
                    rhs = rhs.add(&right_mats[k].scale(c));
                }
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(i * n + j));
                }
            }
        }
        let mut unit_action = Mat::zero(spec.clone(), d, d);
        for (i, &c) in right.unit().iter().enumerate() {
            if c != 0 {
                unit_action = unit_action.add(&right_mats[i].scale(c));
            }
        }
        if unit_action != Mat::identity(spec.clone(), d) {
            return Err(Error::NoUnit(0));
        }
        // the two actions commute
        for l in &left_mats {
            for r in &right_mats {
                if l.mul(r) != r.mul(l) {
                    return Err(Error::Invalid("left and right actions do not commute".into()));
                }
            }
        }
        Ok(Bimodule { left, right, left_mats, right_mats })
    }

    /// The algebra `A` as the regular (A, A)-bimodule.
    pub fn regular(a: &Arc<Algebra>) -> Bimodule {
        let n = a.dim();
        let mut left_mats = Vec::with_capacity(n);
        let mut right_mats = Vec::with_capacity(n);
        for i in 0..n {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            left_mats.push(a.left_mult(&ei));
            right_mats.push(a.right_mult(&ei));
        }
        Bimodule { left: a.clone(), right: a.clone(), left_mats, right_mats }
    }

    /// `A` as an (A, A)-bimodule with the right action twisted through an
    /// algebra endomorphism `phi`: `m . a = m * phi(a)`.
    pub fn regular_right_twisted(a: &Arc<Algebra>, phi: &Mat) -> Result<Bimodule> {
        let n = a.dim();
        let mut left_mats = Vec::with_capacity(n);
        let mut right_mats = Vec::with_capacity(n);
        for i in 0..n {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            left_mats.push(a.left_mult(&ei));
            right_mats.push(a.right_mult(&phi.apply(&ei)));
        }
        Bimodule::new(a.clone(), a.clone(), left_mats, right_mats)
    }

    /// `e A` as an (`eAe`, A)-bimodule; `corner_basis` rows span `eAe` in
    /// the coordinates of `a` and define the corner algebra's basis.
    pub fn corner(a: &Arc<Algebra>, corner: &Arc<Algebra>, corner_basis: &Mat, e: &[u64]) -> Result<Bimodule> {
        // carrier: row space of { e * e_j : j }
        let n = a.dim();
        let mut ech = Echelon::new(a.spec().clone(), n);
        for j in 0..n {
            let mut ej = vec![0u64; n];
            ej[j] = 1;
            ech.insert(a.mul_vec(e, &ej));
        }
        let carrier = ech.to_mat();
        let d = carrier.rows();
        let cech = Echelon::from_mat(&carrier);
        let spec = a.spec().clone();
        // right action of A
        let mut right_mats = Vec::with_capacity(n);
        for j in 0..n {
            let mut ej = vec![0u64; n];
            ej[j] = 1;
            let mut m = Mat::zero(spec.clone(), d, d);
            for b in 0..d {
                let img = a.mul_vec(carrier.row(b), &ej);
                let coords = cech.coords(&img).ok_or(Error::Invalid("eA not right-stable".into()))?;
                for (k, &c) in coords.iter().enumerate() {
                    m.set(k, b, c);
                }
            }
            right_mats.push(m);
        }
        // left action of the corner algebra through its basis rows
        let mut left_mats = Vec::with_capacity(corner.dim());
        for i in 0..corner.dim() {
            let x = corner_basis.row(i);
            let mut m = Mat::zero(spec.clone(), d, d);
            for b in 0..d {
                let img = a.mul_vec(x, carrier.row(b));
                let coords = cech.coords(&img).ok_or(Error::Invalid("eA not left-stable".into()))?;
                for (k, &c) in coords.iter().enumerate() {
                    m.set(k, b, c);
                }
            }
            left_mats.push(m);
        }
        Bimodule::new(corner.clone(), a.clone(), left_mats, right_mats)
    }

    pub fn left(&self) -> &Arc<Algebra> {
        &self.left
    }
    pub fn right(&self) -> &Arc<Algebra> {
        &self.right
    }
    pub fn left_actions(&self) -> &[Mat] {
        &self.left_mats
    }
    pub fn right_actions(&self) -> &[Mat] {
        &self.right_mats
    }
    pub fn dim(&self) -> usize {
        self.left_mats.first().map_or(0, |m| m.rows())
    }
}

/// `P (x)_A M`: quotient of the plain tensor product by the balancing
/// relations, with the induced left action.
pub fn apply_bimodule(p: &Bimodule, m: &ModuleRep) -> Result<ModuleRep> {
    if !Algebra::same(&p.right, &m.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let spec = p.left.spec().clone();
    let dp = p.dim();
    let dm = m.dim();
    let dd = dp * dm;
    let n = p.right.dim();
    // balancing relations (p . a) (x) m - p (x) (a . m)
    let mut rel = Echelon::new(spec.clone(), dd);
    for a in 0..n {
        let ra = &p.right_mats[a];
        let am = &m.mats[a];
        for i in 0..dp {
            for j in 0..dm {
                let mut v = vec![0u64; dd];
                for k in 0..dp {
                    let c = ra.get(k, i);
                    if c != 0 {
                        v[k * dm + j] = spec.add(v[k * dm + j], c);
                    }
                }
                for k in 0..dm {
                    let c = am.get(k, j);
                    if c != 0 {
                        v[i * dm + k] = spec.sub(v[i * dm + k], c);
                    }
                }
                rel.insert(v);
            }
        }
    }
    let rel_mat = rel.to_mat();
    let mut full = Echelon::from_mat(&rel_mat);
    let added = full.complete();
    let qd = added.len();
    let rel_ech = Echelon::from_mat(&rel_mat);
    let project = |v: &[u64]| -> Vec<u64> {
        let r = rel_ech.reduce(v);
        added.iter().map(|&c| r[c]).collect()
    };
    // induced left action of the left algebra
    let nl = p.left.dim();
    let mut mats = Vec::with_capacity(nl);
    for b in 0..nl {
        let lb = &p.left_mats[b];
        let mut q = Mat::zero(spec.clone(), qd, qd);
        for (col, &cc) in added.iter().enumerate() {
            let (i, j) = (cc / dm, cc % dm);
            // b . (p_i (x) m_j) = (b p_i) (x) m_j
            let mut v = vec![0u64; dd];
            for k in 0..dp {
                let c = lb.get(k, i);
                if c != 0 {
                    v[k * dm + j] = spec.add(v[k * dm + j], c);
                }
            }
            let img = project(&v);
            for (k, &x) in img.iter().enumerate() {
                q.set(k, col, x);
            }
        }
        mats.push(q);
    }
    ModuleRep::new(p.left.clone(), mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn dual_numbers(p: u64, m: u32) -> Arc<Algebra> {
        // k[x]/(x^2), basis {1, x}
        let spec = FieldSpec::get(p, m).unwrap();
        Algebra::from_entries(
            spec,
            2,
            &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
            vec![1, 0],
        )
        .unwrap()
    }

    #[test]
    fn spin_in_dual_numbers() {
        let a = dual_numbers(2, 1);
        let reg = a.regular_module();
        let s = spin(&reg, &[0, 1]).unwrap();
        assert_eq!(s.rows(), 1); // span{x}
        let full = spin(&reg, &[1, 0]).unwrap();
        assert_eq!(full.rows(), 2);
        assert!(matches!(spin(&reg, &[0, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn meataxe_splits_dual_numbers() {
        let a = dual_numbers(3, 2);
        let reg = a.regular_module();
        match meataxe_split(&reg, 0).unwrap() {
            MeatAxe::Split(sub) => assert_eq!(sub.rows(), 1),
            MeatAxe::Simple => panic!("regular module of k[x]/(x^2) is not simple"),
        }
        let factors = split_completely(&reg, 0).unwrap();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|f| f.dim() == 1));
    }

    #[test]
    fn one_dimensional_is_simple() {
        let a = dual_numbers(2, 2);
        let reg = a.regular_module();
        let sub = spin(&reg, &[0, 1]).unwrap();
        let s = reg.submodule(&sub).unwrap();
        assert!(matches!(meataxe_split(&s, 0).unwrap(), MeatAxe::Simple));
    }

    #[test]
    fn registry_of_dual_numbers() {
        let a = dual_numbers(3, 1);
        assert_eq!(a.simple_count().unwrap(), 1);
        assert_eq!(a.simple_dims().unwrap(), vec![1]);
        let reg = a.regular_module();
        assert_eq!(composition_factor_counts(&reg, 0).unwrap(), vec![2]);
    }

    #[test]
    fn hom_spaces_match_schur() {
        let a = dual_numbers(2, 1);
        let reg = a.regular_module();
        let s = a.simple_module(0).unwrap();
        // maps regular -> simple factor through the top: dimension 1
        assert_eq!(hom_space(&reg, &s).unwrap().len(), 1);
        assert_eq!(hom_space(&s, &s).unwrap().len(), 1);
    }

    #[test]
    fn regular_bimodule_is_identity_functor() {
        let a = dual_numbers(3, 1);
        let p = Bimodule::regular(&a);
        let reg = a.regular_module();
        let out = apply_bimodule(&p, &reg).unwrap();
        assert_eq!(out.dim(), reg.dim());
        assert!(is_isomorphic(&out, &reg).unwrap().is_some());
        let s = a.simple_module(0).unwrap();
        let out_s = apply_bimodule(&p, &s).unwrap();
        assert!(is_isomorphic(&out_s, &s).unwrap().is_some());
    }

    #[test]
    fn twist_fixes_prime_field_modules() {
        let a = dual_numbers(2, 2);
        let reg = a.regular_module();
        let tw = twist_module(&reg, 1).unwrap();
        assert_eq!(tw.actions(), reg.actions());
    }

    #[test]
    fn right_twisted_regular_bimodule_composes_with_the_automorphism() {
        // over kC_3 at p = 2, twisting the right action through the group
        // inversion sends each simple V to V o phi
        let f4 = crate::field::FieldSpec::get(2, 2).unwrap();
        let kc3 =
            crate::groupalg::group_algebra(&crate::samples::cyclic_group(3), &f4).unwrap();
        let mut phi = Mat::zero(f4.clone(), 3, 3);
        phi.set(0, 0, 1);
        phi.set(2, 1, 1);
        phi.set(1, 2, 1);
        let p = Bimodule::regular_right_twisted(&kc3, &phi).unwrap();
        for i in 0..3 {
            let v = kc3.simple_module(i).unwrap();
            let image = apply_bimodule(&p, &v).unwrap();
            // V o phi: act through the image of each basis element
            let composed = ModuleRep::new(
                kc3.clone(),
                (0..3)
                    .map(|k| {
                        let mut ek = vec![0u64; 3];
                        ek[k] = 1;
                        v.act_by(&phi.apply(&ek))
                    })
                    .collect(),
            )
            .unwrap();
            assert!(is_isomorphic(&image, &composed).unwrap().is_some());
        }
        // and the inversion genuinely swaps the two nontrivial simples
        let moved = (0..3)
            .filter(|&i| {
                let v = kc3.simple_module(i).unwrap();
                let image = apply_bimodule(&p, &v).unwrap();
                is_isomorphic(&image, &v).unwrap().is_none()
            })
            .count();
        assert_eq!(moved, 2);
    }
}
