//! Bounded complexes of modules, homology, Grothendieck-group bookkeeping,
//! perversity data and the perversity checker.
//!
//! Cohomological conventions: differentials raise the degree and compose to
//! zero; a shift by t moves a degree-0 object to degree -t and negates the
//! differentials when t is odd. Equivalences are carried by their values on
//! the canonical simples (one bounded complex per simple), optionally backed
//! by a bimodule when they are module-level.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::linalg::Mat;
use crate::modrep::{self, Bimodule, ModuleRep};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct BoundedComplex {
    algebra: Arc<Algebra>,
    /// Degree of `objects[0]`.
    low: i64,
    objects: Vec<ModuleRep>,
    /// `diffs[i]` maps `objects[i]` to `objects[i + 1]`.
    diffs: Vec<Mat>,
}

impl fmt::Debug for BoundedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<usize> = self.objects.iter().map(|o| o.dim()).collect();
        write!(f, "BoundedComplex(low {}, dims {:?})", self.low, dims)
    }
}

fn is_module_hom(src: &ModuleRep, dst: &ModuleRep, f: &Mat) -> bool {
    let n = src.algebra().dim();
    (0..n).all(|i| f.mul(src.action(i)) == dst.action(i).mul(f))
}

impl BoundedComplex {
    pub fn new(
        algebra: Arc<Algebra>,
        low: i64,
        objects: Vec<ModuleRep>,
        diffs: Vec<Mat>,
    ) -> Result<BoundedComplex> {
        if objects.is_empty() {
            return Ok(BoundedComplex { algebra, low: 0, objects, diffs: Vec::new() });
        }
        if diffs.len() + 1 != objects.len() {
            return Err(Error::Invalid("need one differential between consecutive degrees".into()));
        }
        for o in &objects {
            if !Algebra::same(o.algebra(), &algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.rows() != objects[i + 1].dim() || d.cols() != objects[i].dim() {
                return Err(Error::Invalid(format!("differential {i} has the wrong shape")));
            }
            if !is_module_hom(&objects[i], &objects[i + 1], d) {
                return Err(Error::NotAHomomorphism(i));
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].mul(&diffs[i]).is_zero() {
                return Err(Error::NotAComplex(low + i as i64));
            }
        }
        Ok(BoundedComplex { algebra, low, objects, diffs })
    }

    /// A module placed in a single degree.
    pub fn concentrated(m: ModuleRep, degree: i64) -> BoundedComplex {
        BoundedComplex {
            algebra: m.algebra().clone(),
            low: degree,
            objects: vec![m],
            diffs: Vec::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn low(&self) -> i64 {
        self.low
    }
    pub fn high(&self) -> i64 {
        self.low + self.objects.len() as i64 - 1
    }
    pub fn support(&self) -> std::ops::RangeInclusive<i64> {
        self.low..=self.high()
    }
    pub fn objects(&self) -> &[ModuleRep] {
        &self.objects
    }
    pub fn differentials(&self) -> &[Mat] {
        &self.diffs
    }

    pub fn object(&self, degree: i64) -> ModuleRep {
        if self.objects.is_empty() || degree < self.low || degree > self.high() {
            ModuleRep::zero(self.algebra.clone())
        } else {
            self.objects[(degree - self.low) as usize].clone()
        }
    }

    fn diff_from(&self, degree: i64) -> Option<&Mat> {
        let idx = degree - self.low;
        if idx >= 0 && (idx as usize) < self.diffs.len() {
            Some(&self.diffs[idx as usize])
        } else {
            None
        }
    }

    /// Degrees are translated by `-t`; odd shifts negate the differentials.
    pub fn shift(&self, t: i64) -> BoundedComplex {
        let diffs = if t.rem_euclid(2) == 1 {
            self.diffs.iter().map(|d| d.scale(self.algebra.spec().neg(1))).collect()
        } else {
            self.diffs.clone()
        };
        BoundedComplex {
            algebra: self.algebra.clone(),
            low: self.low - t,
            objects: self.objects.clone(),
            diffs,
        }
    }

    /// `ker d^i / im d^{i-1}` with the induced action.
    pub fn homology(&self, degree: i64) -> Result<ModuleRep> {
        let obj = self.object(degree);
        if obj.dim() == 0 {
            return Ok(obj);
        }
        let kernel = match self.diff_from(degree) {
            Some(d) => d.kernel_basis(),
            None => Mat::identity(self.algebra.spec().clone(), obj.dim()),
        };
        let image_rows: Mat = match self.diff_from(degree - 1) {
            Some(d) => d.transpose(),
            None => Mat::zero(self.algebra.spec().clone(), 0, obj.dim()),
        };
        let ksub = obj.submodule(&kernel)?;
        // image expressed inside kernel coordinates (d compose d = 0)
        let mut img_in_k: Vec<Vec<u64>> = Vec::new();
        for r in 0..image_rows.rows() {
            let coords =
                kernel.coords_in_rows(image_rows.row(r)).ok_or(Error::NotAComplex(degree))?;
            img_in_k.push(coords);
        }
        let img = if img_in_k.is_empty() {
            Mat::zero(self.algebra.spec().clone(), 0, kernel.rows())
        } else {
            Mat::from_rows(self.algebra.spec().clone(), img_in_k)
        };
        let (h, _) = ksub.quotient(&img)?;
        Ok(h)
    }

    /// Degrees with nonzero homology, with dimensions.
    pub fn homology_dims(&self) -> Result<Vec<(i64, usize)>> {
        let mut out = Vec::new();
        for d in self.support() {
            let h = self.homology(d)?;
            if h.dim() > 0 {
                out.push((d, h.dim()));
            }
        }
        Ok(out)
    }

    /// Entrywise Frobenius of objects and differentials, landing over the
    /// supplied instance of the twisted algebra.
    pub fn twist_into(&self, twisted: &Arc<Algebra>, t: u32) -> Result<BoundedComplex> {
        let objects = self
            .objects
            .iter()
            .map(|o| modrep::twist_module_into(o, twisted, t))
            .collect::<Result<Vec<_>>>()?;
        let diffs = self.diffs.iter().map(|d| d.frobenius(t)).collect();
        BoundedComplex::new(twisted.clone(), self.low, objects, diffs)
    }
}

/// An integer class vector in the basis of canonical simples.
#[derive(Clone)]
pub struct K0Vector {
    algebra: Arc<Algebra>,
    coords: Vec<i64>,
}

impl PartialEq for K0Vector {
    fn eq(&self, other: &Self) -> bool {
        Algebra::same(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}
impl Eq for K0Vector {}

impl fmt::Debug for K0Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0{:?}", self.coords)
    }
}

impl K0Vector {
    pub fn new(algebra: Arc<Algebra>, coords: Vec<i64>) -> Result<K0Vector> {
        if algebra.simple_count()? != coords.len() {
            return Err(Error::LabelMismatch);
        }
        Ok(K0Vector { algebra, coords })
    }
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn neg(&self) -> K0Vector {
        K0Vector { algebra: self.algebra.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Class of a module: its composition factor counts.
pub fn k0_class_of_module(m: &ModuleRep) -> Result<K0Vector> {
    let counts = modrep::composition_factor_counts(m, 0)?;
    K0Vector::new(m.algebra().clone(), counts.iter().map(|&c| c as i64).collect())
}

/// Alternating sum of the homology classes.
pub fn k0_class(c: &BoundedComplex) -> Result<K0Vector> {
    let s = c.algebra().simple_count()?;
    let mut coords = vec![0i64; s];
    for d in c.support() {
        let h = c.homology(d)?;
        if h.dim() == 0 {
            continue;
        }
        let counts = modrep::composition_factor_counts(&h, 0)?;
        let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
        for (k, &cc) in counts.iter().enumerate() {
            coords[k] += sign * cc as i64;
        }
    }
    K0Vector::new(c.algebra().clone(), coords)
}

/// The tuple `(r, q, S, S')`: a shift function and a pair of increasing
/// chains of simple-label sets; `S_{-1} = {}` is implicit and `S_r` must be
/// the full label set on each side.
#[derive(Clone)]
pub struct PerversityDatum {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    q: Vec<i64>,
    source_chain: Vec<BTreeSet<usize>>,
    target_chain: Vec<BTreeSet<usize>>,
}

impl fmt::Debug for PerversityDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PerversityDatum(r {}, q {:?}, chains {:?} / {:?})",
            self.r(),
            self.q,
            self.source_chain,
            self.target_chain
        )
    }
}

impl PerversityDatum {
    pub fn new(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        q: Vec<i64>,
        source_chain: Vec<BTreeSet<usize>>,
        target_chain: Vec<BTreeSet<usize>>,
    ) -> Result<PerversityDatum> {
        if q.is_empty() {
            return Err(Error::BadDatum("q must be defined on [0, r]".into()));
        }
        if source_chain.len() != q.len() || target_chain.len() != q.len() {
            return Err(Error::BadDatum("chains must have length r + 1".into()));
        }
        let ssimples = source.simple_count()?;
        let tsimples = target.simple_count()?;
        let check = |chain: &[BTreeSet<usize>], total: usize| -> Result<()> {
            for w in chain.windows(2) {
                if !w[0].is_subset(&w[1]) {
                    return Err(Error::BadDatum("chain is not increasing".into()));
                }
            }
            if let Some(last) = chain.last() {
                if last.len() != total || last.iter().any(|&l| l >= total) {
                    return Err(Error::BadDatum(
                        "top of the chain must be the full label set".into(),
                    ));
                }
            }
            Ok(())
        };
        check(&source_chain, ssimples)?;
        check(&target_chain, tsimples)?;
        Ok(PerversityDatum { source, target, q, source_chain, target_chain })
    }

    /// The q = 0 datum with full chains at every step.
    pub fn zero(source: Arc<Algebra>, target: Arc<Algebra>, r: usize) -> Result<PerversityDatum> {
        let ss: BTreeSet<usize> = (0..source.simple_count()?).collect();
        let ts: BTreeSet<usize> = (0..target.simple_count()?).collect();
        PerversityDatum::new(source, target, vec![0; r + 1], vec![ss; r + 1], vec![ts; r + 1])
    }

    pub fn r(&self) -> usize {
        self.q.len() - 1
    }
    pub fn q(&self) -> &[i64] {
        &self.q
    }
    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }
    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }
    pub fn source_chain(&self) -> &[BTreeSet<usize>] {
        &self.source_chain
    }
    pub fn target_chain(&self) -> &[BTreeSet<usize>] {
        &self.target_chain
    }

    /// `(r, -q, S', S)`.
    pub fn invert(&self) -> PerversityDatum {
        PerversityDatum {
            source: self.target.clone(),
            target: self.source.clone(),
            q: self.q.iter().map(|&x| -x).collect(),
            source_chain: self.target_chain.clone(),
            target_chain: self.source_chain.clone(),
        }
    }

    /// `(r, q + q', S, S'')` when the middle chains agree step by step.
    pub fn compose(&self, other: &PerversityDatum) -> Result<PerversityDatum> {
        if self.r() != other.r() {
            return Err(Error::ChainMismatch);
        }
        if !Algebra::same(&self.target, &other.source) || self.target_chain != other.source_chain {
            return Err(Error::ChainMismatch);
        }
        Ok(PerversityDatum {
            source: self.source.clone(),
            target: other.target.clone(),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            source_chain: self.source_chain.clone(),
            target_chain: other.target_chain.clone(),
        })
    }

    /// Same r and q; labels relabelled through the twists of both algebras.
    pub fn twist(&self, t: u32) -> Result<PerversityDatum> {
        let st = self.source.frobenius_twist(t);
        let tt = self.target.frobenius_twist(t);
        let ps = modrep::twist_permutation(&self.source, &st, t)?;
        let pt = modrep::twist_permutation(&self.target, &tt, t)?;
        let map = |chain: &[BTreeSet<usize>], p: &[usize]| -> Vec<BTreeSet<usize>> {
            chain.iter().map(|s| s.iter().map(|&l| p[l]).collect()).collect()
        };
        Ok(PerversityDatum {
            source: st,
            target: tt,
            q: self.q.clone(),
            source_chain: map(&self.source_chain, &ps),
            target_chain: map(&self.target_chain, &pt),
        })
    }

    pub fn same_shape(&self, other: &PerversityDatum) -> bool {
        self.q == other.q
            && self.source_chain == other.source_chain
            && self.target_chain == other.target_chain
    }
}

/// A derived equivalence presented by the images of the simples.
pub struct EquivalenceData {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    images: Vec<BoundedComplex>,
    realization: Option<Bimodule>,
    k0: IntMat,
}

impl fmt::Debug for EquivalenceData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EquivalenceData({:?} -> {:?})", self.source, self.target)
    }
}

impl EquivalenceData {
    pub fn new(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        images: Vec<BoundedComplex>,
        realization: Option<Bimodule>,
    ) -> Result<EquivalenceData> {
        let s = source.simple_count()?;
        if images.len() != s {
            return Err(Error::LabelMismatch);
        }
        for c in &images {
            if !Algebra::same(c.algebra(), &target) {
                return Err(Error::AlgebraMismatch);
            }
        }
        if let Some(p) = &realization {
            if !Algebra::same(p.left(), &target) || !Algebra::same(p.right(), &source) {
                return Err(Error::InvalidWitness(
                    "realization bimodule does not match the algebras".into(),
                ));
            }
            for (i, c) in images.iter().enumerate() {
                let concentrated = c.homology_dims()?.iter().all(|&(d, _)| d == 0);
                if !concentrated {
                    return Err(Error::InvalidWitness(format!(
                        "realized equivalence has non-degree-0 homology at simple {i}"
                    )));
                }
                let simple = source.simple_module(i)?;
                let expected = modrep::apply_bimodule(p, &simple)?;
                let h0 = c.homology(0)?;
                if modrep::is_isomorphic(&h0, &expected)?.is_none() {
                    return Err(Error::InvalidWitness(format!(
                        "realization disagrees with the image of simple {i}"
                    )));
                }
            }
        }
        let st = target.simple_count()?;
        if st != s {
            return Err(Error::K0NotInvertible);
        }
        let mut k0 = IntMat::zero(st, s);
        for (i, c) in images.iter().enumerate() {
            let cls = k0_class(c)?;
            for (r, &v) in cls.coords().iter().enumerate() {
                k0.set(r, i, v);
            }
        }
        let det = k0.det();
        if det != 1 && det != -1 {
            return Err(Error::K0NotInvertible);
        }
        Ok(EquivalenceData { source, target, images, realization, k0 })
    }

    /// The equivalence realized by a bimodule: images are the tensors of
    /// the simples, concentrated in degree 0.
    pub fn from_bimodule(p: Bimodule) -> Result<EquivalenceData> {
        let source = p.right().clone();
        let target = p.left().clone();
        let s = source.simple_count()?;
        let mut images = Vec::with_capacity(s);
        for i in 0..s {
            let simple = source.simple_module(i)?;
            images.push(BoundedComplex::concentrated(modrep::apply_bimodule(&p, &simple)?, 0));
        }
        EquivalenceData::new(source, target, images, Some(p))
    }

    /// The identity equivalence (regular bimodule).
    pub fn identity(a: &Arc<Algebra>) -> Result<EquivalenceData> {
        EquivalenceData::from_bimodule(Bimodule::regular(a))
    }

    /// Each simple sent to itself shifted by `t`.
    pub fn shift_data(a: &Arc<Algebra>, t: i64) -> Result<EquivalenceData> {
        let s = a.simple_count()?;
        let mut images = Vec::with_capacity(s);
        for i in 0..s {
            images.push(BoundedComplex::concentrated(a.simple_module(i)?, 0).shift(t));
        }
        EquivalenceData::new(a.clone(), a.clone(), images, None)
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }
    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }
    pub fn image(&self, label: usize) -> &BoundedComplex {
        &self.images[label]
    }
    pub fn images(&self) -> &[BoundedComplex] {
        &self.images
    }
    pub fn realization(&self) -> Option<&Bimodule> {
        self.realization.as_ref()
    }
    /// Cached matrix of the induced map on Grothendieck groups.
    pub fn k0_matrix(&self) -> &IntMat {
        &self.k0
    }

    /// `sigma o F o sigma^{-1}`: everything twisted entrywise, labels
    /// matched through the twist permutations.
    pub fn conjugate(&self, t: u32) -> Result<EquivalenceData> {
        let st = self.source.frobenius_twist(t);
        let tt = self.target.frobenius_twist(t);
        let ps = modrep::twist_permutation(&self.source, &st, t)?;
        let mut images: Vec<Option<BoundedComplex>> = vec![None; self.images.len()];
        for (i, c) in self.images.iter().enumerate() {
            images[ps[i]] = Some(c.twist_into(&tt, t)?);
        }
        let images: Vec<BoundedComplex> = images
            .into_iter()
            .map(|o| o.ok_or_else(|| Error::Invalid("twist permutation is not a bijection".into())))
            .collect::<Result<_>>()?;
        let realization = match &self.realization {
            Some(p) => Some(twist_bimodule(p, &tt, &st, t)?),
            None => None,
        };
        EquivalenceData::new(st, tt, images, realization)
    }
}

fn twist_bimodule(
    p: &Bimodule,
    left_t: &Arc<Algebra>,
    right_t: &Arc<Algebra>,
    t: u32,
) -> Result<Bimodule> {
    let left_mats = p.left_actions().iter().map(|m| m.frobenius(t)).collect();
    let right_mats = p.right_actions().iter().map(|m| m.frobenius(t)).collect();
    Bimodule::new(left_t.clone(), right_t.clone(), left_mats, right_mats)
}

/// One offending composition factor found by the perversity checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Filtration step i.
    pub step: usize,
    /// Source simple label T.
    pub simple: usize,
    /// Homological position j (the checker reads `H^{-j}`).
    pub position: i64,
    /// Offending factor label in the target.
    pub factor: usize,
}

#[derive(Debug)]
pub enum PerversityCheck {
    Perverse,
    Violations(Vec<Violation>),
}

impl PerversityCheck {
    pub fn is_perverse(&self) -> bool {
        matches!(self, PerversityCheck::Perverse)
    }
}

/// The definition, checked verbatim: for every step i and every simple T
/// newly appearing in `S_i`, the factors of `H^{-j}(F(T))` must lie in
/// `S'_{i-1}` for `j != q(i)` and in `S'_i` for `j = q(i)`. All failures
/// are reported, not just the first.
pub fn check_perverse(e: &EquivalenceData, d: &PerversityDatum) -> Result<PerversityCheck> {
    if !Algebra::same(e.source(), d.source()) || !Algebra::same(e.target(), d.target()) {
        return Err(Error::LabelMismatch);
    }
    let mut violations = Vec::new();
    let empty = BTreeSet::new();
    for step in 0..=d.r() {
        let cur = &d.source_chain()[step];
        let prev = if step == 0 { &empty } else { &d.source_chain()[step - 1] };
        let tprev = if step == 0 { &empty } else { &d.target_chain()[step - 1] };
        let tcur = &d.target_chain()[step];
        for &label in cur.difference(prev) {
            let complex = e.image(label);
            for deg in complex.support() {
                let h = complex.homology(deg)?;
                if h.dim() == 0 {
                    continue;
                }
                let j = -deg;
                let allowed = if j == d.q()[step] { tcur } else { tprev };
                let counts = modrep::composition_factor_counts(&h, 0)?;
                for (factor, &c) in counts.iter().enumerate() {
                    if c > 0 && !allowed.contains(&factor) {
                        violations.push(Violation { step, simple: label, position: j, factor });
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(PerversityCheck::Perverse)
    } else {
        Ok(PerversityCheck::Violations(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn homology_of_concentrated_and_exact_complexes() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9.clone());
        let reg = dual.regular_module();
        let c = BoundedComplex::concentrated(reg.clone(), 0);
        assert_eq!(c.homology(0).unwrap().dim(), 2);
        assert_eq!(c.homology(1).unwrap().dim(), 0);
        let id = Mat::identity(f9.clone(), 2);
        let exact =
            BoundedComplex::new(dual.clone(), 0, vec![reg.clone(), reg.clone()], vec![id]).unwrap();
        assert_eq!(exact.homology(0).unwrap().dim(), 0);
        assert_eq!(exact.homology(1).unwrap().dim(), 0);
        // Euler characteristic: 2 - 2 = 0 - 0
        assert!(k0_class(&exact).unwrap().is_zero());
    }

    #[test]
    fn homology_of_the_inclusion_complex() {
        // 0 -> span{x} -> k[x]/(x^2) -> 0 in degrees -1, 0
        let f4 = samples::gf(2, 2);
        let dual = samples::dual_numbers(f4.clone());
        let reg = dual.regular_module();
        let sub_basis = Mat::from_rows(f4.clone(), vec![vec![0, 1]]);
        let sub = reg.submodule(&sub_basis).unwrap();
        let incl = Mat::from_rows(f4.clone(), vec![vec![0], vec![1]]);
        let c = BoundedComplex::new(dual, -1, vec![sub, reg], vec![incl]).unwrap();
        assert_eq!(c.homology(-1).unwrap().dim(), 0);
        assert_eq!(c.homology(0).unwrap().dim(), 1); // the simple top
    }

    #[test]
    fn non_complexes_are_rejected() {
        let f4 = samples::gf(2, 2);
        let dual = samples::dual_numbers(f4.clone());
        let reg = dual.regular_module();
        let id = Mat::identity(f4, 2);
        let bad = BoundedComplex::new(
            dual,
            0,
            vec![reg.clone(), reg.clone(), reg.clone()],
            vec![id.clone(), id],
        );
        assert!(matches!(bad, Err(Error::NotAComplex(_))));
    }

    #[test]
    fn shift_conventions() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9);
        let c = BoundedComplex::concentrated(dual.regular_module(), 0);
        let s = c.shift(1);
        assert_eq!(s.low(), -1);
        assert_eq!(s.homology(-1).unwrap().dim(), 2);
        let k = k0_class(&c).unwrap();
        let ks = k0_class(&s).unwrap();
        assert_eq!(ks, k.neg());
        assert_eq!(k.coords(), &[2]);
        assert_eq!(c.shift(0).low(), 0);
    }

    #[test]
    fn identity_and_shift_equivalences() {
        let f4 = samples::gf(2, 2);
        let kc3 = crate::groupalg::group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        let id = EquivalenceData::identity(&kc3).unwrap();
        assert_eq!(id.k0_matrix(), &IntMat::identity(3));
        let sh = EquivalenceData::shift_data(&kc3, 1).unwrap();
        let minus = IntMat::from_rows(vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
        assert_eq!(sh.k0_matrix(), &minus);
    }

    #[test]
    fn twist_permutation_swaps_the_nontrivial_simples_of_c3() {
        let f4 = samples::gf(2, 2);
        let kc3 = crate::groupalg::group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        let twisted = kc3.frobenius_twist(1);
        assert!(twisted.structural_eq(&kc3));
        let perm = modrep::twist_permutation(&kc3, &twisted, 1).unwrap();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert_eq!(perm.iter().enumerate().filter(|&(i, &p)| i != p).count(), 2);
        // conjugating the identity equivalence permutes k0 accordingly
        let id = EquivalenceData::identity(&kc3).unwrap();
        let conj = id.conjugate(1).unwrap();
        assert_eq!(conj.k0_matrix(), &IntMat::identity(3));
    }

    #[test]
    fn perversity_checker_on_the_three_examples() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9);
        let id = EquivalenceData::identity(&dual).unwrap();
        let d0 = PerversityDatum::zero(dual.clone(), dual.clone(), 1).unwrap();
        assert!(check_perverse(&id, &d0).unwrap().is_perverse());
        let sh = EquivalenceData::shift_data(&dual, 1).unwrap();
        let full: BTreeSet<usize> = [0].into();
        let d1 = PerversityDatum::new(
            dual.clone(),
            dual.clone(),
            vec![1],
            vec![full.clone()],
            vec![full.clone()],
        )
        .unwrap();
        assert!(check_perverse(&sh, &d1).unwrap().is_perverse());
        match check_perverse(&id, &d1).unwrap() {
            PerversityCheck::Violations(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].position, 0);
            }
            PerversityCheck::Perverse => panic!("expected violation"),
        }
    }

    #[test]
    fn datum_calculus() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9.clone());
        let kk = samples::product_fields(f9, 2);
        let full_d: BTreeSet<usize> = [0].into();
        let full_k: BTreeSet<usize> = [0, 1].into();
        let d = PerversityDatum::new(
            dual.clone(),
            kk.clone(),
            vec![2, -1],
            vec![full_d.clone(), full_d.clone()],
            vec![full_k.clone(), full_k.clone()],
        )
        .unwrap();
        let inv = d.invert();
        assert_eq!(inv.q(), &[-2, 1]);
        assert!(inv.source_chain() == d.target_chain());
        assert!(d.invert().invert().same_shape(&d));
        let composed = d.compose(&inv).unwrap();
        assert_eq!(composed.q(), &[0, 0]);
        let unit = PerversityDatum::zero(kk.clone(), kk.clone(), 1).unwrap();
        assert!(d.compose(&unit).unwrap().same_shape(&d));
        let other = PerversityDatum::zero(dual.clone(), dual.clone(), 1).unwrap();
        assert!(matches!(d.compose(&other), Err(Error::ChainMismatch)));
        let e = PerversityDatum::new(
            kk.clone(),
            dual.clone(),
            vec![1, 1],
            vec![full_k.clone(), full_k],
            vec![full_d.clone(), full_d],
        )
        .unwrap();
        assert_eq!(d.compose(&e).unwrap().q(), &[3, 0]);
    }

    #[test]
    fn shift_data_image_has_homology_only_at_minus_t() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9);
        let c = BoundedComplex::concentrated(dual.simple_module(0).unwrap(), 0).shift(1);
        assert_eq!(c.homology_dims().unwrap(), vec![(-1, 1)]);
    }
}
