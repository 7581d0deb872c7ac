//! Finite-dimensional unital associative algebras presented by structure
//! constants over a finite field.
//!
//! Construction is validating: associativity is checked on every basis
//! triple and the designated unit must act as a two-sided identity. The
//! radical is computed through the composition factors of the regular
//! module, primitive idempotents are lifted from the semisimple quotient,
//! and the Cartan matrix / basic algebra machinery sits on top of those.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::intmat::IntMat;
use crate::linalg::{Echelon, Mat};
use crate::modrep::{self, ModuleRep, Registry};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Default cap on algebra dimension; constructors take an explicit cap when
/// more headroom is wanted.
pub const DIM_CAP: usize = 64;

pub struct Algebra {
    spec: Arc<FieldSpec>,
    n: usize,
    /// Dense product table: `prod[i * n + j]` = coordinates of `e_i e_j`.
    prod: Vec<Vec<u64>>,
    /// Sparse view of the same table: nonzero `(k, c)` entries of `e_i e_j`.
    sparse: Vec<Vec<(usize, u64)>>,
    unit: Vec<u64>,
    pub(crate) registry: OnceLock<Result<Registry>>,
    radical_cache: OnceLock<Result<Mat>>,
    idem_cache: OnceLock<Result<Vec<Vec<u64>>>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim {} over {:?})", self.n, self.spec)
    }
}

impl Algebra {
    /// Validating constructor from a dense table `c[i][j][k]` of codes.
    pub fn from_dense(
        spec: Arc<FieldSpec>,
        table: &[Vec<Vec<u64>>],
        unit: Vec<u64>,
    ) -> Result<Arc<Algebra>> {
        let n = table.len();
        let mut prod = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::Invalid("structure table is not n x n x n".into()));
            }
            for cell in row {
                if cell.len() != n {
                    return Err(Error::Invalid("structure table is not n x n x n".into()));
                }
                prod.push(cell.clone());
            }
        }
        Self::new_checked(spec, n, prod, unit, DIM_CAP)
    }

    /// Validating constructor from sparse `(i, j, k, code)` entries.
    pub fn from_entries(
        spec: Arc<FieldSpec>,
        n: usize,
        entries: &[(usize, usize, usize, u64)],
        unit: Vec<u64>,
    ) -> Result<Arc<Algebra>> {
        Self::from_entries_capped(spec, n, entries, unit, DIM_CAP)
    }

    /// Same, with an explicit dimension cap for callers that need headroom.
    pub fn from_entries_capped(
        spec: Arc<FieldSpec>,
        n: usize,
        entries: &[(usize, usize, usize, u64)],
        unit: Vec<u64>,
        cap: usize,
    ) -> Result<Arc<Algebra>> {
        let mut prod = vec![vec![0u64; n]; n * n];
        for &(i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::Invalid(format!("entry ({i},{j},{k}) out of range")));
            }
            prod[i * n + j][k] = spec.add(prod[i * n + j][k], c);
        }
        Self::new_checked(spec, n, prod, unit, cap)
    }

    pub(crate) fn new_checked(
        spec: Arc<FieldSpec>,
        n: usize,
        prod: Vec<Vec<u64>>,
        unit: Vec<u64>,
        cap: usize,
    ) -> Result<Arc<Algebra>> {
        if n == 0 {
            return Err(Error::Invalid("algebra dimension must be positive".into()));
        }
        if n > cap {
            return Err(Error::DimensionCap { dim: n, cap });
        }
        if unit.len() != n {
            return Err(Error::Invalid("unit vector has wrong length".into()));
        }
        let sparse: Vec<Vec<(usize, u64)>> = prod
            .iter()
            .map(|v| v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect())
            .collect();
        let alg = Algebra {
            spec,
            n,
            prod,
            sparse,
            unit,
            registry: OnceLock::new(),
            radical_cache: OnceLock::new(),
            idem_cache: OnceLock::new(),
        };
        alg.check_associative()?;
        alg.check_unit()?;
        Ok(Arc::new(alg))
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.n;
        let f = &self.spec;
        for i in 0..n {
            for j in 0..n {
                let ij = &self.sparse[i * n + j];
                for l in 0..n {
                    // (e_i e_j) e_l
                    let mut lhs = vec![0u64; n];
                    for &(k, c) in ij {
                        for &(t, d) in &self.sparse[k * n + l] {
                            lhs[t] = f.add(lhs[t], f.mul(c, d));
                        }
                    }
                    // e_i (e_j e_l)
                    let mut rhs = vec![0u64; n];
                    for &(k, c) in &self.sparse[j * n + l] {
                        for &(t, d) in &self.sparse[i * n + k] {
                            rhs[t] = f.add(rhs[t], f.mul(c, d));
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::NotAssociative { i, j, k: l });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        for j in 0..self.n {
            let mut ej = vec![0u64; self.n];
            ej[j] = 1;
            if self.mul_vec(&self.unit, &ej) != ej || self.mul_vec(&ej, &self.unit) != ej {
                return Err(Error::NoUnit(j));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn unit(&self) -> &[u64] {
        &self.unit
    }
    /// Coordinates of `e_i e_j`.
    pub fn prod(&self, i: usize, j: usize) -> &[u64] {
        &self.prod[i * self.n + j]
    }
    pub(crate) fn sparse(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.sparse[i * self.n + j]
    }
    /// Structure constant `c[i][j][k]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.prod[i * self.n + j][k]
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.n;
        let f = &self.spec;
        let mut out = vec![0u64; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                for &(k, d) in &self.sparse[i * n + j] {
                    out[k] = f.add(out[k], f.mul(c, d));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x` (columns are `x * e_j`).
    pub fn left_mult(&self, x: &[u64]) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(self.spec.clone(), n, n);
        for j in 0..n {
            let mut ej = vec![0u64; n];
            ej[j] = 1;
            let col = self.mul_vec(x, &ej);
            for k in 0..n {
                m.set(k, j, col[k]);
            }
        }
        m
    }

    /// Matrix of right multiplication by `x` (columns are `e_j * x`).
    pub fn right_mult(&self, x: &[u64]) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(self.spec.clone(), n, n);
        for j in 0..n {
            let mut ej = vec![0u64; n];
            ej[j] = 1;
            let col = self.mul_vec(&ej, x);
            for k in 0..n {
                m.set(k, j, col[k]);
            }
        }
        m
    }

    /// Bitwise equality of presentations (same field, same table, same unit).
    pub fn structural_eq(&self, other: &Algebra) -> bool {
        self.spec == other.spec && self.n == other.n && self.prod == other.prod && self.unit == other.unit
    }

    pub(crate) fn same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
        Arc::ptr_eq(a, b) || a.structural_eq(b)
    }

    /// The left regular module.
    pub fn regular_module(self: &Arc<Self>) -> ModuleRep {
        let mats = (0..self.n)
            .map(|i| {
                let mut x = vec![0u64; self.n];
                x[i] = 1;
                self.left_mult(&x)
            })
            .collect();
        ModuleRep::new_unchecked(self.clone(), mats)
    }

    /// `A^{sigma^t}`: the same multiplication presented through the t-fold
    /// Frobenius; concretely every structure constant and unit coordinate is
    /// replaced by its image under `x -> x^(p^t)`.
    pub fn frobenius_twist(self: &Arc<Self>, t: u32) -> Arc<Algebra> {
        let f = &self.spec;
        let prod = self.prod.iter().map(|v| v.iter().map(|&c| f.frobenius(c, t)).collect()).collect();
        let unit = self.unit.iter().map(|&c| f.frobenius(c, t)).collect();
        Self::new_checked(self.spec.clone(), self.n, prod, unit, usize::MAX)
            .expect("twist of a valid algebra is valid")
    }

    // ---- radical ----

    /// Basis of the Jacobson radical, one vector per row. Computed as the
    /// joint kernel of the actions on the composition factors of the
    /// regular module, then verified to be a nilpotent two-sided ideal with
    /// semisimple quotient.
    pub fn radical(self: &Arc<Self>) -> Result<Mat> {
        self.radical_cache
            .get_or_init(|| self.compute_radical(true))
            .clone()
    }

    fn compute_radical(self: &Arc<Self>, verify: bool) -> Result<Mat> {
        let factors = modrep::regular_factors(self)?;
        let n = self.n;
        let total_rows: usize = factors.iter().map(|m| m.dim() * m.dim()).sum();
        let mut system = Mat::zero(self.spec.clone(), total_rows, n);
        let mut row = 0usize;
        for fac in &factors {
            let d = fac.dim();
            for r in 0..d {
                for c in 0..d {
                    for i in 0..n {
                        system.set(row, i, fac.action(i).get(r, c));
                    }
                    row += 1;
                }
            }
        }
        let rad = system.kernel_basis();
        if verify {
            self.verify_radical(&rad)?;
        }
        Ok(rad)
    }

    fn verify_radical(self: &Arc<Self>, rad: &Mat) -> Result<()> {
        let ech = Echelon::from_mat(rad);
        // two-sided ideal
        for r in 0..rad.rows() {
            for i in 0..self.n {
                let mut ei = vec![0u64; self.n];
                ei[i] = 1;
                if !ech.contains(&self.mul_vec(rad.row(r), &ei))
                    || !ech.contains(&self.mul_vec(&ei, rad.row(r)))
                {
                    return Err(Error::Invalid("radical candidate is not an ideal".into()));
                }
            }
        }
        // nilpotent
        let mut power: Vec<Vec<u64>> = rad.rows_vec();
        for _ in 0..=self.n {
            if power.is_empty() {
                break;
            }
            let mut next = Echelon::new(self.spec.clone(), self.n);
            for x in &power {
                for r in 0..rad.rows() {
                    next.insert(self.mul_vec(x, rad.row(r)));
                }
            }
            power = next.rows().to_vec();
        }
        if !power.is_empty() {
            return Err(Error::Invalid("radical candidate is not nilpotent".into()));
        }
        // semisimple quotient
        let (quot, _, _) = self.quotient_by_ideal(rad)?;
        let qrad = quot.compute_radical(false)?;
        if qrad.rows() != 0 {
            return Err(Error::Invalid("quotient by radical is not semisimple".into()));
        }
        Ok(())
    }

    /// Quotient algebra by a two-sided ideal given as a row basis. Returns
    /// `(quotient, project, section)` where `project` maps coordinates of A
    /// onto quotient coordinates and `section` picks representatives.
    pub fn quotient_by_ideal(self: &Arc<Self>, ideal: &Mat) -> Result<(Arc<Algebra>, Mat, Mat)> {
        let n = self.n;
        let mut ech = Echelon::from_mat(ideal);
        let dim_i = ech.len();
        let added = ech.complete();
        debug_assert_eq!(dim_i + added.len(), n);
        let qdim = added.len();
        // project: reduce by the ideal echelon, read off complement coordinates
        let ideal_ech = Echelon::from_mat(ideal);
        let project = |x: &[u64]| -> Vec<u64> {
            let r = ideal_ech.reduce(x);
            added.iter().map(|&c| r[c]).collect()
        };
        let mut proj_mat = Mat::zero(self.spec.clone(), qdim, n);
        for j in 0..n {
            let mut ej = vec![0u64; n];
            ej[j] = 1;
            let col = project(&ej);
            for k in 0..qdim {
                proj_mat.set(k, j, col[k]);
            }
        }
        let mut sect_mat = Mat::zero(self.spec.clone(), n, qdim);
        for (k, &c) in added.iter().enumerate() {
            sect_mat.set(c, k, 1);
        }
        // structure constants on representatives
        let mut prod = Vec::with_capacity(qdim * qdim);
        for &ci in &added {
            for &cj in &added {
                let mut vi = vec![0u64; n];
                vi[ci] = 1;
                let mut vj = vec![0u64; n];
                vj[cj] = 1;
                prod.push(project(&self.mul_vec(&vi, &vj)));
            }
        }
        let unit = project(&self.unit);
        let quot = Algebra::new_checked(self.spec.clone(), qdim, prod, unit, usize::MAX)?;
        Ok((quot, proj_mat, sect_mat))
    }

    // ---- idempotents ----

    /// A complete list of orthogonal primitive idempotents summing to 1,
    /// obtained by decomposing the semisimple quotient's regular module and
    /// lifting through the radical with `e <- 3e^2 - 2e^3`.
    pub fn primitive_idempotents(self: &Arc<Self>) -> Result<Vec<Vec<u64>>> {
        self.idem_cache
            .get_or_init(|| self.compute_primitive_idempotents())
            .clone()
    }

    fn compute_primitive_idempotents(self: &Arc<Self>) -> Result<Vec<Vec<u64>>> {
        let rad = self.radical()?;
        let (quot, proj, sect) = self.quotient_by_ideal(&rad)?;
        let qidems = quot.semisimple_primitive_idempotents()?;
        let _ = proj;
        // lift sequentially; corrections keep the family orthogonal
        let mut lifted: Vec<Vec<u64>> = Vec::new();
        let mut partial_sum = vec![0u64; self.n];
        for fbar in &qidems {
            let g0 = sect.apply(fbar);
            // g <- (1 - s) g (1 - s)
            let mut one_minus_s = self.unit.clone();
            for (k, v) in one_minus_s.iter_mut().enumerate() {
                *v = self.spec.sub(*v, partial_sum[k]);
            }
            let mut g = self.mul_vec(&self.mul_vec(&one_minus_s, &g0), &one_minus_s);
            for _ in 0..(2 * self.n + 4) {
                let g2 = self.mul_vec(&g, &g);
                if g2 == g {
                    break;
                }
                // 3g^2 - 2g^3
                let g3 = self.mul_vec(&g2, &g);
                let f = &self.spec;
                let three = f.add(f.add(1, 1), 1);
                let two = f.add(1, 1);
                g = (0..self.n)
                    .map(|k| f.sub(f.mul(three, g2[k]), f.mul(two, g3[k])))
                    .collect();
            }
            if self.mul_vec(&g, &g) != g {
                return Err(Error::Invalid("idempotent lifting did not stabilize".into()));
            }
            for k in 0..self.n {
                partial_sum[k] = self.spec.add(partial_sum[k], g[k]);
            }
            lifted.push(g);
        }
        if partial_sum != self.unit {
            return Err(Error::Invalid("lifted idempotents do not sum to the unit".into()));
        }
        for (a, ea) in lifted.iter().enumerate() {
            for (b, eb) in lifted.iter().enumerate() {
                let prod = self.mul_vec(ea, eb);
                let expect = if a == b { ea.clone() } else { vec![0u64; self.n] };
                if prod != expect {
                    return Err(Error::Invalid("lifted idempotents are not orthogonal".into()));
                }
            }
        }
        Ok(lifted)
    }

    /// Primitive idempotents of a semisimple algebra: decompose the regular
    /// module into simple direct summands and read projections off as right
    /// multiplications.
    fn semisimple_primitive_idempotents(self: &Arc<Self>) -> Result<Vec<Vec<u64>>> {
        let reg = self.regular_module();
        let summands = modrep::direct_summands(&reg)?;
        // split check: every distinct summand must have a 1-dimensional
        // endomorphism ring
        let mut distinct: Vec<&ModuleRep> = Vec::new();
        for s in &summands {
            if !distinct.iter().any(|d| modrep::raw_iso_simple(d, &s.module).is_some()) {
                let end = modrep::hom_space(&s.module, &s.module)?;
                if end.len() != 1 {
                    return Err(Error::NotSplit { witness: distinct.len(), end_dim: end.len() });
                }
                distinct.push(&s.module);
            }
        }
        // projections onto each summand: solve L_u f = delta * u over all
        // summand basis vectors u
        let n = self.n;
        let mut idems = Vec::new();
        for (j, _) in summands.iter().enumerate() {
            let total: usize = summands.iter().map(|s| s.carrier.rows()).sum();
            let mut system = Mat::zero(self.spec.clone(), total * n, n);
            let mut rhs = Vec::with_capacity(total * n);
            let mut row = 0usize;
            for (l, s) in summands.iter().enumerate() {
                let basis = &s.carrier;
                for r in 0..basis.rows() {
                    let u = basis.row(r);
                    let lu = self.left_mult(u);
                    for rr in 0..n {
                        for cc in 0..n {
                            system.set(row + rr, cc, lu.get(rr, cc));
                        }
                    }
                    for rr in 0..n {
                        rhs.push(if l == j { u[rr] } else { 0 });
                    }
                    row += n;
                }
            }
            let f = system.solve(&rhs).ok_or_else(|| {
                Error::Invalid("regular module does not project onto its summand".into())
            })?;
            idems.push(f);
        }
        Ok(idems)
    }

    // ---- registry-backed queries (delegated to modrep) ----

    /// Number of simple modules (requires the algebra to be split).
    pub fn simple_count(self: &Arc<Self>) -> Result<usize> {
        Ok(modrep::registry(self)?.simples.len())
    }

    pub fn simple_dims(self: &Arc<Self>) -> Result<Vec<usize>> {
        Ok(modrep::registry(self)?.simples.iter().map(|s| s.dim()).collect())
    }

    /// The i-th canonical simple module.
    pub fn simple_module(self: &Arc<Self>, i: usize) -> Result<ModuleRep> {
        let reg = modrep::registry(self)?;
        Ok(reg.simples[i].to_module(self))
    }

    /// Err(NotSplit) unless every simple has a one-dimensional endomorphism
    /// ring over the ground field.
    pub fn require_split(self: &Arc<Self>) -> Result<()> {
        let reg = modrep::registry(self)?;
        for (i, &ed) in reg.end_dims.iter().enumerate() {
            if ed != 1 {
                return Err(Error::NotSplit { witness: i, end_dim: ed });
            }
        }
        Ok(())
    }

    pub fn is_split(self: &Arc<Self>) -> Result<bool> {
        Ok(modrep::registry(self)?.end_dims.iter().all(|&d| d == 1))
    }

    // ---- splitting field ----

    /// Re-express the algebra over the smallest field (with degree a
    /// multiple of every constant's degree) that splits it.
    pub fn split_over(self: &Arc<Self>) -> Result<Arc<Algebra>> {
        let f = &self.spec;
        let mut degs: Vec<u32> = vec![1];
        for v in &self.prod {
            for &c in v {
                degs.push(f.subfield_degree(c));
            }
        }
        for &c in &self.unit {
            degs.push(f.subfield_degree(c));
        }
        let d0 = degs.iter().fold(1u64, |l, &d| {
            let d = d as u64;
            l / gcd_u64(l, d) * d
        });
        for mult in 1..=64u64 {
            let d = d0 * mult;
            if d > u32::MAX as u64 {
                break;
            }
            let target = match FieldSpec::get(f.p(), d as u32) {
                Ok(t) => t,
                Err(Error::FieldTooLarge { .. }) => break,
                Err(e) => return Err(e),
            };
            if target.q() > crate::field::ENUMERATION_CAP {
                return Err(Error::EnumerationCap {
                    needed: target.q(),
                    cap: crate::field::ENUMERATION_CAP,
                });
            }
            let form = self.change_field(&target)?;
            if form.is_split()? {
                return Ok(form);
            }
        }
        Err(Error::EnumerationCap { needed: u64::MAX, cap: crate::field::ENUMERATION_CAP })
    }

    /// Same structure constants pushed through the canonical embedding into
    /// `target` (every constant's degree must divide `target.m`).
    pub fn change_field(self: &Arc<Self>, target: &Arc<FieldSpec>) -> Result<Arc<Algebra>> {
        let f = &self.spec;
        let prod: Result<Vec<Vec<u64>>> = self
            .prod
            .iter()
            .map(|v| v.iter().map(|&c| f.embed(c, target)).collect())
            .collect();
        let unit: Result<Vec<u64>> = self.unit.iter().map(|&c| f.embed(c, target)).collect();
        Algebra::new_checked(target.clone(), self.n, prod?, unit?, usize::MAX)
    }

    // ---- Cartan matrix and basic algebra ----

    /// Label of the top `A e / J (A e)` for an idempotent `e`.
    pub(crate) fn top_label_of(self: &Arc<Self>, e: &[u64]) -> Result<usize> {
        let reg = self.regular_module();
        let rad = self.radical()?;
        let pe = modrep::spin(&reg, e)?;
        let pmod = reg.submodule(&pe)?;
        let mut jp = Echelon::new(self.spec.clone(), self.n);
        for r in 0..rad.rows() {
            for b in 0..pe.rows() {
                jp.insert(self.mul_vec(rad.row(r), pe.row(b)));
            }
        }
        let mut jp_in_p = Mat::zero(self.spec.clone(), jp.len(), pe.rows());
        for (r, v) in jp.rows().iter().enumerate() {
            let coords = pe.coords_in_rows(v).ok_or_else(|| {
                Error::Invalid("radical times projective escaped the projective".into())
            })?;
            for (c, &x) in coords.iter().enumerate() {
                jp_in_p.set(r, c, x);
            }
        }
        let (top, _) = pmod.quotient(&jp_in_p)?;
        modrep::identify_simple(&top)
    }

    /// Each primitive idempotent with the label of its projective's top.
    pub(crate) fn projective_tops(self: &Arc<Self>) -> Result<Vec<(Vec<u64>, usize)>> {
        self.require_split()?;
        let idems = self.primitive_idempotents()?;
        idems
            .into_iter()
            .map(|e| {
                let top = self.top_label_of(&e)?;
                Ok((e, top))
            })
            .collect()
    }

    /// For each primitive idempotent: the label of the top of `A e` and the
    /// composition-factor counts of `A e`.
    fn projective_data(self: &Arc<Self>) -> Result<Vec<(usize, Vec<u64>)>> {
        self.require_split()?;
        let idems = self.primitive_idempotents()?;
        let reg = self.regular_module();
        let mut out = Vec::new();
        for e in &idems {
            let top_label = self.top_label_of(e)?;
            let pe = modrep::spin(&reg, e)?;
            let pmod = reg.submodule(&pe)?;
            let counts = modrep::composition_factor_counts(&pmod, 0)?;
            out.push((top_label, counts));
        }
        Ok(out)
    }

    /// Cartan matrix: `C[i][j]` = multiplicity of simple j in the projective
    /// cover of simple i, rows and columns in canonical label order.
    pub fn cartan_matrix(self: &Arc<Self>) -> Result<IntMat> {
        let data = self.projective_data()?;
        let s = self.simple_count()?;
        let mut c = IntMat::zero(s, s);
        let mut seen = vec![false; s];
        for (top, counts) in &data {
            if !seen[*top] {
                seen[*top] = true;
                for (j, &m) in counts.iter().enumerate() {
                    c.set(*top, j, m as i64);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Invalid("some simple has no projective cover in the regular module".into()));
        }
        Ok(c)
    }

    /// Basic algebra `e A e` together with the correspondence data.
    pub fn basic_algebra_data(self: &Arc<Self>) -> Result<BasicData> {
        let data = self.projective_data()?;
        let idems = self.primitive_idempotents()?;
        let s = self.simple_count()?;
        let mut chosen: Vec<Option<usize>> = vec![None; s];
        for (k, (top, _)) in data.iter().enumerate() {
            if chosen[*top].is_none() {
                chosen[*top] = Some(k);
            }
        }
        let chosen: Vec<usize> = chosen
            .into_iter()
            .map(|o| o.ok_or_else(|| Error::Invalid("missing projective cover".into())))
            .collect::<Result<_>>()?;
        let mut e = vec![0u64; self.n];
        for &k in &chosen {
            for (t, v) in e.iter_mut().enumerate() {
                *v = self.spec.add(*v, idems[k][t]);
            }
        }
        // basis of e A e
        let mut ech = Echelon::new(self.spec.clone(), self.n);
        let mut basis = Vec::new();
        for j in 0..self.n {
            let mut ej = vec![0u64; self.n];
            ej[j] = 1;
            let v = self.mul_vec(&self.mul_vec(&e, &ej), &e);
            if ech.insert(v.clone()) {
                basis.push(v);
            }
        }
        let bdim = basis.len();
        let mut sys = Mat::zero(self.spec.clone(), self.n, bdim);
        for (c, b) in basis.iter().enumerate() {
            for r in 0..self.n {
                sys.set(r, c, b[r]);
            }
        }
        let express = |v: &[u64]| -> Result<Vec<u64>> {
            sys.solve(v).ok_or_else(|| Error::Invalid("product escaped e A e".into()))
        };
        let mut prod = Vec::with_capacity(bdim * bdim);
        for bi in &basis {
            for bj in &basis {
                prod.push(express(&self.mul_vec(bi, bj))?);
            }
        }
        let unit = express(&e)?;
        let algebra = Algebra::new_checked(self.spec.clone(), bdim, prod, unit, usize::MAX)?;
        // correspondence: label i of self -> label of top of (eAe) * (image of e_i) ... use
        // the chosen idempotents, carried into the basic algebra's coordinates.
        let mut label_map = vec![0usize; s];
        for (i, &k) in chosen.iter().enumerate() {
            let ek = express(&idems[k])?;
            label_map[i] = algebra.top_label_of(&ek)?;
        }
        // Morita invariants preserved
        let ca = self.cartan_matrix()?;
        let cb = algebra.cartan_matrix()?;
        let sb = algebra.simple_count()?;
        if sb != s {
            return Err(Error::Invalid("basic algebra changed the number of simples".into()));
        }
        for i in 0..s {
            for j in 0..s {
                if ca.get(i, j) != cb.get(label_map[i], label_map[j]) {
                    return Err(Error::Invalid("basic algebra changed the Cartan matrix".into()));
                }
            }
        }
        Ok(BasicData { algebra, idempotent: e, label_map })
    }

    pub fn basic_algebra(self: &Arc<Self>) -> Result<Arc<Algebra>> {
        Ok(self.basic_algebra_data()?.algebra)
    }

    // ---- center ----

    /// Row basis of the center.
    pub fn center_basis(self: &Arc<Self>) -> Mat {
        let n = self.n;
        let mut system = Mat::zero(self.spec.clone(), n * n, n);
        for i in 0..n {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            let li = self.left_mult(&ei);
            let ri = self.right_mult(&ei);
            let diff = li.sub(&ri);
            for r in 0..n {
                for c in 0..n {
                    system.set(i * n + r, c, diff.get(r, c));
                }
            }
        }
        system.kernel_basis()
    }

    /// The center as an algebra, together with the inclusion (rows of the
    /// returned matrix are the chosen central basis vectors).
    pub fn center_algebra(self: &Arc<Self>) -> Result<(Arc<Algebra>, Mat)> {
        let basis = self.center_basis();
        let z = basis.rows();
        let mut prod = Vec::with_capacity(z * z);
        for i in 0..z {
            for j in 0..z {
                let p = self.mul_vec(basis.row(i), basis.row(j));
                let coords = basis
                    .coords_in_rows(&p)
                    .ok_or_else(|| Error::Invalid("center is not closed under products".into()))?;
                prod.push(coords);
            }
        }
        let unit = basis
            .coords_in_rows(&self.unit)
            .ok_or_else(|| Error::Invalid("unit is not central".into()))?;
        let za = Algebra::new_checked(self.spec.clone(), z, prod, unit, usize::MAX)?;
        Ok((za, basis))
    }

    /// Subalgebra `e A e` for an idempotent `e` given in coordinates,
    /// returned with the row basis used for its coordinates.
    pub fn corner_algebra(self: &Arc<Self>, e: &[u64]) -> Result<(Arc<Algebra>, Mat)> {
        let mut ech = Echelon::new(self.spec.clone(), self.n);
        let mut basis: Vec<Vec<u64>> = Vec::new();
        for j in 0..self.n {
            let mut ej = vec![0u64; self.n];
            ej[j] = 1;
            let v = self.mul_vec(&self.mul_vec(e, &ej), e);
            if ech.insert(v.clone()) {
                basis.push(v);
            }
        }
        let bdim = basis.len();
        let mut sys = Mat::zero(self.spec.clone(), self.n, bdim);
        for (c, b) in basis.iter().enumerate() {
            for r in 0..self.n {
                sys.set(r, c, b[r]);
            }
        }
        let express = |v: &[u64]| -> Result<Vec<u64>> {
            sys.solve(v).ok_or_else(|| Error::Invalid("product escaped corner".into()))
        };
        let mut prod = Vec::with_capacity(bdim * bdim);
        for bi in &basis {
            for bj in &basis {
                prod.push(express(&self.mul_vec(bi, bj))?);
            }
        }
        let unit = express(e)?;
        let alg = Algebra::new_checked(self.spec.clone(), bdim, prod, unit, usize::MAX)?;
        Ok((alg, Mat::from_rows(self.spec.clone(), basis)))
    }
}

/// Basic algebra plus the data tying it back to its parent.
pub struct BasicData {
    pub algebra: Arc<Algebra>,
    /// The idempotent `e` (sum of one primitive idempotent per simple).
    pub idempotent: Vec<u64>,
    /// `label_map[i]` = label in the basic algebra of the simple
    /// corresponding to parent label `i`.
    pub label_map: Vec<usize>,
}

/// A verified homomorphism of algebras given by its matrix on basis vectors
/// (columns are images of the source basis).
#[derive(Clone)]
pub struct AlgebraMorphism {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub matrix: Mat,
}

impl fmt::Debug for AlgebraMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraMorphism({:?} -> {:?})", self.source, self.target)
    }
}

impl AlgebraMorphism {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Mat) -> Result<Self> {
        if source.spec() != target.spec() {
            return Err(Error::FieldMismatch {
                p1: source.spec().p(),
                m1: source.spec().m(),
                p2: target.spec().p(),
                m2: target.spec().m(),
            });
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Invalid("morphism matrix has wrong shape".into()));
        }
        let m = AlgebraMorphism { source, target, matrix };
        m.verify()?;
        Ok(m)
    }

    pub fn identity(a: &Arc<Algebra>) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            matrix: Mat::identity(a.spec().clone(), a.dim()),
        }
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.matrix.apply(x)
    }

    fn verify(&self) -> Result<()> {
        // unit to unit
        if self.matrix.apply(self.source.unit()) != self.target.unit() {
            return Err(Error::Invalid("morphism does not preserve the unit".into()));
        }
        // multiplicative on all basis pairs
        let n = self.source.dim();
        for i in 0..n {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            let fi = self.matrix.apply(&ei);
            for j in 0..n {
                let mut ej = vec![0u64; n];
                ej[j] = 1;
                let fj = self.matrix.apply(&ej);
                let lhs = self.matrix.apply(self.source.prod(i, j));
                let rhs = self.target.mul_vec(&fi, &fj);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "morphism is not multiplicative at basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.matrix.inverse().is_some()
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}
