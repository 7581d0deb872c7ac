//! Sigma-Morita equivalence checking, Morita and sigma-Morita Frobenius
//! numbers, subfield-form bounds, and the transfer certificates tying a
//! perverse equivalence to a sigma-Morita equivalence on the other side.
//!
//! A sigma^t-Morita witness is either an algebra isomorphism
//! `A^{sigma^t} -> A` (the functor is restriction along it) or a bimodule
//! implementing the equivalence; in both cases the check is that every
//! simple lands on its own twist.

use crate::algebra::{Algebra, AlgebraMorphism};
use crate::derived::{check_perverse, EquivalenceData, PerversityDatum};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::intmat::IntMat;
use crate::iso::{self, EnumOutcome, IsoOutcome};
use crate::modrep::{self, Bimodule, ModuleRep};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub enum SigmaWitness {
    /// Restriction along an isomorphism `A^{sigma^t} -> A`.
    Morphism(AlgebraMorphism),
    /// Tensoring with an `(A^{sigma^t}, A)`-bimodule.
    Bimodule(Bimodule),
}

impl fmt::Debug for SigmaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaWitness::Morphism(_) => write!(f, "SigmaWitness::Morphism"),
            SigmaWitness::Bimodule(_) => write!(f, "SigmaWitness::Bimodule"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaCheck {
    Yes,
    /// The label of a simple whose image is not its twist.
    No { simple: usize },
}

impl SigmaCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SigmaCheck::Yes)
    }
}

/// Images of all simples under the witness functor, as modules over the
/// supplied instance of the twisted algebra.
fn witness_images(
    a: &Arc<Algebra>,
    at: &Arc<Algebra>,
    w: &SigmaWitness,
) -> Result<Vec<ModuleRep>> {
    let s = a.simple_count()?;
    match w {
        SigmaWitness::Morphism(psi) => {
            if !psi.source.structural_eq(at) || !psi.target.structural_eq(a) {
                return Err(Error::InvalidWitness(
                    "morphism witness must map the twisted algebra onto the algebra".into(),
                ));
            }
            // revalidate: multiplicative, unital, invertible
            let checked = AlgebraMorphism::new(at.clone(), a.clone(), psi.matrix.clone())?;
            if !checked.is_isomorphism() {
                return Err(Error::InvalidWitness("morphism witness is not invertible".into()));
            }
            let mut out = Vec::with_capacity(s);
            for i in 0..s {
                let v = a.simple_module(i)?;
                let mats = (0..at.dim())
                    .map(|k| {
                        let mut ek = vec![0u64; at.dim()];
                        ek[k] = 1;
                        v.act_by(&checked.apply(&ek))
                    })
                    .collect();
                out.push(ModuleRep::new(at.clone(), mats)?);
            }
            Ok(out)
        }
        SigmaWitness::Bimodule(p) => {
            if !p.left().structural_eq(at) || !Algebra::same(p.right(), a) {
                return Err(Error::InvalidWitness(
                    "bimodule witness must be a (twisted, plain) bimodule".into(),
                ));
            }
            let mut out = Vec::with_capacity(s);
            for i in 0..s {
                let v = a.simple_module(i)?;
                let img = modrep::apply_bimodule(p, &v)?;
                // re-express over the shared twisted instance
                out.push(ModuleRep::new(at.clone(), img.actions().to_vec())?);
            }
            Ok(out)
        }
    }
}

/// Does the witness functor send every simple to its twist? `t` is the
/// Frobenius power.
pub fn check_sigma_morita(a: &Arc<Algebra>, t: u32, w: &SigmaWitness) -> Result<SigmaCheck> {
    a.require_split()?;
    let at = a.frobenius_twist(t);
    let images = witness_images(a, &at, w)?;
    for (i, img) in images.iter().enumerate() {
        let expected = modrep::twist_module_into(&a.simple_module(i)?, &at, t)?;
        if modrep::is_isomorphic(img, &expected)?.is_none() {
            return Ok(SigmaCheck::No { simple: i });
        }
    }
    Ok(SigmaCheck::Yes)
}

/// Matrix of the witness functor on Grothendieck groups: column j is the
/// class of the image of simple j in the twisted algebra's basis.
pub fn witness_k0_matrix(a: &Arc<Algebra>, t: u32, w: &SigmaWitness) -> Result<IntMat> {
    let at = a.frobenius_twist(t);
    let images = witness_images(a, &at, w)?;
    let s = images.len();
    let mut m = IntMat::zero(at.simple_count()?, s);
    for (j, img) in images.iter().enumerate() {
        let counts = modrep::composition_factor_counts(img, 0)?;
        for (r, &c) in counts.iter().enumerate() {
            m.set(r, j, c as i64);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MfOutcome {
    Number(u32),
    ExceedsMax,
    Unknown,
}

impl fmt::Display for MfOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MfOutcome::Number(m) => write!(f, "{m}"),
            MfOutcome::ExceedsMax => write!(f, "exceeds-max"),
            MfOutcome::Unknown => write!(f, "unknown"),
        }
    }
}

/// Least m with `basic(A)` isomorphic to `basic(A^{sigma^m})`, scanning
/// m = 1, 2, ... and trusting only certified answers.
pub fn morita_frobenius_number(a: &Arc<Algebra>, max_m: u32, budget: u64) -> Result<MfOutcome> {
    a.require_split()?;
    let ba = a.basic_algebra()?;
    for m in 1..=max_m {
        let bt = a.frobenius_twist(m).basic_algebra()?;
        match iso::iso_search(&ba, &bt, budget)? {
            IsoOutcome::Found(_) => return Ok(MfOutcome::Number(m)),
            IsoOutcome::NotIsomorphic(_) => continue,
            IsoOutcome::Unknown => return Ok(MfOutcome::Unknown),
        }
    }
    Ok(MfOutcome::ExceedsMax)
}

/// Least m for which some isomorphism `basic(A)^{sigma^m} -> basic(A)`
/// induces the twist correspondence on simples; the search enumerates
/// isomorphisms, not just one.
pub fn sigma_morita_frobenius_number(
    a: &Arc<Algebra>,
    max_m: u32,
    budget: u64,
) -> Result<MfOutcome> {
    a.require_split()?;
    let ba = a.basic_algebra()?;
    for m in 1..=max_m {
        let bt = ba.frobenius_twist(m);
        // precompute the expected twists once per m
        let s = ba.simple_count()?;
        let mut expected = Vec::with_capacity(s);
        for i in 0..s {
            expected.push(modrep::twist_module_into(&ba.simple_module(i)?, &bt, m)?);
        }
        let mut found = false;
        let mut defect: Option<Error> = None;
        let outcome = iso::for_each_isomorphism(&bt, &ba, budget, |psi| {
            let check = (|| -> Result<bool> {
                for (i, exp) in expected.iter().enumerate() {
                    let v = ba.simple_module(i)?;
                    let mats = (0..bt.dim())
                        .map(|k| {
                            let mut ek = vec![0u64; bt.dim()];
                            ek[k] = 1;
                            v.act_by(&psi.apply(&ek))
                        })
                        .collect();
                    let img = ModuleRep::new(bt.clone(), mats)?;
                    if modrep::is_isomorphic(&img, exp)?.is_none() {
                        return Ok(false);
                    }
                }
                Ok(true)
            })();
            match check {
                Ok(true) => {
                    found = true;
                    true
                }
                Ok(false) => false,
                Err(e) => {
                    defect = Some(e);
                    true
                }
            }
        })?;
        if let Some(e) = defect {
            return Err(e);
        }
        if found {
            return Ok(MfOutcome::Number(m));
        }
        match outcome {
            EnumOutcome::Budget => return Ok(MfOutcome::Unknown),
            EnumOutcome::Exhausted | EnumOutcome::Stopped => continue,
        }
    }
    Ok(MfOutcome::ExceedsMax)
}

/// The subfield-form bound: least m with (i) all structure constants of the
/// basic algebra inside `F_{p^m}` and (ii) the `F_{p^m}`-form split. The
/// returned form satisfies `form^{sigma^m} = form` bitwise, so the identity
/// is a sigma^m-Morita witness for it.
pub struct SubfieldBound {
    pub m: u32,
    pub form: Arc<Algebra>,
}

pub fn subfield_bound(a: &Arc<Algebra>) -> Result<SubfieldBound> {
    a.require_split()?;
    let ba = a.basic_algebra()?;
    let spec = ba.spec();
    let mut d0: u64 = 1;
    for i in 0..ba.dim() {
        for j in 0..ba.dim() {
            for &c in ba.prod(i, j) {
                let d = spec.subfield_degree(c) as u64;
                d0 = d0 / gcd(d0, d) * d;
            }
        }
    }
    for &c in ba.unit() {
        let d = spec.subfield_degree(c) as u64;
        d0 = d0 / gcd(d0, d) * d;
    }
    let big_m = spec.m() as u64;
    let mut mult = 1u64;
    loop {
        let m = d0 * mult;
        let target = FieldSpec::get(spec.p(), m as u32)?;
        let form = ba.change_field(&target)?;
        if form.is_split()? {
            debug_assert!(form.frobenius_twist(m as u32).structural_eq(&form));
            return Ok(SubfieldBound { m: m as u32, form });
        }
        if m >= big_m.max(d0) * 4 {
            return Err(Error::Invalid(
                "no split subfield form found below the safety margin".into(),
            ));
        }
        mult += 1;
    }
}

/// The transfer report: three machine-checked certificates tying a perverse
/// equivalence `F: A -> B` with datum `D` and a sigma^t-Morita witness for
/// `B` to the sigma^t-Morita property on the `A` side, at the level both of
/// perversity data and of Grothendieck groups.
#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub t: u32,
    /// Shift function of `D . (q0 datum of E) . (twist(D, t))^{-1}`.
    pub composed_shift: Vec<i64>,
    pub shift_is_zero: bool,
    /// Composed chains return to the source side (S to S twisted).
    pub chains_returned: bool,
    pub sigma_a: Vec<Vec<i64>>,
    pub sigma_b: Vec<Vec<i64>>,
    pub k0_f: Vec<Vec<i64>>,
    pub k0_e: Vec<Vec<i64>>,
    pub composite: Vec<Vec<i64>>,
    /// `[sigma_A] k0(F)^{-1} [sigma_B]^{-1} k0(E) k0(F) = [sigma_A]`.
    pub k0_identity: bool,
    pub per_simple: Vec<SimpleTransfer>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleTransfer {
    pub label: usize,
    pub class: Vec<i64>,
    pub expected: Vec<i64>,
    pub ok: bool,
}

impl fmt::Display for TransferReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "transfer certificates (t = {}):", self.t)?;
        writeln!(
            f,
            "  [1] composed perversity shift {:?} identically zero: {}",
            self.composed_shift,
            verdict(self.shift_is_zero && self.chains_returned)
        )?;
        writeln!(f, "  [2] K0 identity [s]F^-1[s]^-1 E F = [s]: {}", verdict(self.k0_identity))?;
        let all3 = self.per_simple.iter().all(|s| s.ok);
        writeln!(f, "  [3] per-simple twist classes: {}", verdict(all3))?;
        for s in &self.per_simple {
            writeln!(
                f,
                "      simple {}: class {:?} expected {:?} [{}]",
                s.label,
                s.class,
                s.expected,
                verdict(s.ok)
            )?;
        }
        write!(f, "  overall: {}", verdict(self.passed))
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// Verify the transfer: preconditions are that `(F, D)` is perverse and the
/// witness is a sigma^t-Morita equivalence for `B = target(F)`; the three
/// certificates are then checked independently.
pub fn verify_transfer(
    f: &EquivalenceData,
    d: &PerversityDatum,
    e_wit: &SigmaWitness,
    t: u32,
) -> Result<TransferReport> {
    if !check_perverse(f, d)?.is_perverse() {
        return Err(Error::PreconditionFailed("(F, D) is not a perverse pair".into()));
    }
    let b = f.target().clone();
    match check_sigma_morita(&b, t, e_wit)? {
        SigmaCheck::Yes => {}
        SigmaCheck::No { simple } => {
            return Err(Error::PreconditionFailed(format!(
                "witness is not a sigma^{t}-Morita equivalence (fails at simple {simple})"
            )));
        }
    }
    let a = f.source().clone();
    let at = a.frobenius_twist(t);
    let bt = b.frobenius_twist(t);
    let perm_a = modrep::twist_permutation(&a, &at, t)?;
    let perm_b = modrep::twist_permutation(&b, &bt, t)?;
    let pa = IntMat::permutation(&perm_a);
    let pb = IntMat::permutation(&perm_b);

    // certificate 1: datum composition
    let e_datum = {
        let chain_b = d.target_chain().to_vec();
        let chain_bt: Vec<std::collections::BTreeSet<usize>> = chain_b
            .iter()
            .map(|s| s.iter().map(|&l| perm_b[l]).collect())
            .collect();
        PerversityDatum::new(b.clone(), bt.clone(), vec![0; d.r() + 1], chain_b, chain_bt)?
    };
    let composed = d.compose(&e_datum)?.compose(&d.twist(t)?.invert())?;
    let shift_is_zero = composed.q().iter().all(|&x| x == 0);
    let twisted_source_chain: Vec<std::collections::BTreeSet<usize>> = d
        .source_chain()
        .iter()
        .map(|s| s.iter().map(|&l| perm_a[l]).collect())
        .collect();
    let chains_returned = composed.source_chain() == d.source_chain()
        && composed.target_chain() == twisted_source_chain.as_slice();

    // certificate 2: K0 identity
    let mf = f.k0_matrix().clone();
    let mf_inv = mf.inverse_unimodular().ok_or(Error::K0NotInvertible)?;
    let pb_inv = pb.inverse_unimodular().ok_or(Error::K0NotInvertible)?;
    let me = witness_k0_matrix(&b, t, e_wit)?;
    let composite = pa.mul(&mf_inv).mul(&pb_inv).mul(&me).mul(&mf);
    let k0_identity = composite == pa;

    // certificate 3: per-simple classes
    let s = a.simple_count()?;
    let mut per_simple = Vec::with_capacity(s);
    for i in 0..s {
        let class = composite.col(i);
        let mut expected = vec![0i64; s];
        expected[perm_a[i]] = 1;
        let ok = class == expected;
        per_simple.push(SimpleTransfer { label: i, class, expected, ok });
    }
    let passed = shift_is_zero && chains_returned && k0_identity && per_simple.iter().all(|x| x.ok);
    Ok(TransferReport {
        t,
        composed_shift: composed.q().to_vec(),
        shift_is_zero,
        chains_returned,
        sigma_a: pa.rows_vec(),
        sigma_b: pb.rows_vec(),
        k0_f: mf.rows_vec(),
        k0_e: me.rows_vec(),
        composite: composite.rows_vec(),
        k0_identity,
        per_simple,
        passed,
    })
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
    use crate::groupalg::group_algebra;
    use crate::linalg::Mat;
    use crate::samples;

    fn inversion_witness(kc3: &Arc<Algebra>) -> SigmaWitness {
        // group inversion g -> g^{-1} extended linearly; C_3 basis 1, g, g^2
        let spec = kc3.spec().clone();
        let mut p = Mat::zero(spec, 3, 3);
        p.set(0, 0, 1);
        p.set(2, 1, 1);
        p.set(1, 2, 1);
        let tw = kc3.frobenius_twist(1);
        SigmaWitness::Morphism(AlgebraMorphism::new(tw, kc3.clone(), p).unwrap())
    }

    #[test]
    fn field_algebra_is_sigma_trivial() {
        let f9 = samples::gf(3, 2);
        let a = samples::field_algebra(f9);
        for t in 1..=2 {
            let tw = a.frobenius_twist(t);
            let w = SigmaWitness::Morphism(
                AlgebraMorphism::new(tw, a.clone(), Mat::identity(a.spec().clone(), 1)).unwrap(),
            );
            assert_eq!(check_sigma_morita(&a, t, &w).unwrap(), SigmaCheck::Yes);
        }
    }

    #[test]
    fn identity_fails_but_inversion_passes_for_c3_over_f4() {
        let f4 = samples::gf(2, 2);
        let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        let tw = kc3.frobenius_twist(1);
        let id = SigmaWitness::Morphism(
            AlgebraMorphism::new(tw, kc3.clone(), Mat::identity(f4.clone(), 3)).unwrap(),
        );
        match check_sigma_morita(&kc3, 1, &id).unwrap() {
            SigmaCheck::No { .. } => {}
            SigmaCheck::Yes => panic!("identity cannot induce the twist on the omega simples"),
        }
        let inv = inversion_witness(&kc3);
        assert_eq!(check_sigma_morita(&kc3, 1, &inv).unwrap(), SigmaCheck::Yes);
        // its K0 matrix is the twist permutation
        let perm = modrep::twist_permutation(&kc3, &kc3.frobenius_twist(1), 1).unwrap();
        assert_eq!(witness_k0_matrix(&kc3, 1, &inv).unwrap(), IntMat::permutation(&perm));
    }

    #[test]
    fn prime_table_algebras_have_mf_number_one() {
        let f4 = samples::gf(2, 2);
        let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        assert_eq!(morita_frobenius_number(&kc3, 3, 100_000).unwrap(), MfOutcome::Number(1));
        // 2x2 matrices: basic algebra is the field
        let f9 = samples::gf(3, 2);
        let m2 = samples::matrix_algebra(f9, 2);
        assert_eq!(morita_frobenius_number(&m2, 3, 100_000).unwrap(), MfOutcome::Number(1));
    }

    #[test]
    fn sigma_mf_of_c3_over_f4_is_one() {
        let f4 = samples::gf(2, 2);
        let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        assert_eq!(
            sigma_morita_frobenius_number(&kc3, 2, 1_000_000).unwrap(),
            MfOutcome::Number(1)
        );
    }

    #[test]
    fn subfield_bounds_of_the_examples() {
        // constants in F_p, split over F_p
        let f9 = samples::gf(3, 2);
        let kc3_p3 = group_algebra(&samples::cyclic_group(3), &f9).unwrap();
        assert_eq!(subfield_bound(&kc3_p3).unwrap().m, 1);
        // C_3 at p = 2 over F_4: the F_2-form is not split
        let f4 = samples::gf(2, 2);
        let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        assert_eq!(subfield_bound(&kc3).unwrap().m, 2);
        // A_q with q of order 8: constants generate F_9
        let q = f9.root_of_unity(8).unwrap();
        let aq = samples::quantum_plane(f9.clone(), q).unwrap();
        assert_eq!(subfield_bound(&aq).unwrap().m, 2);
    }

    #[test]
    fn transfer_on_the_identity_pipeline() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9.clone());
        let f = EquivalenceData::identity(&dual).unwrap();
        let d = PerversityDatum::zero(dual.clone(), dual.clone(), 0).unwrap();
        let tw = dual.frobenius_twist(1);
        let wit = SigmaWitness::Morphism(
            AlgebraMorphism::new(tw, dual.clone(), Mat::identity(f9, 2)).unwrap(),
        );
        let report = verify_transfer(&f, &d, &wit, 1).unwrap();
        assert!(report.passed, "{report}");
        assert_eq!(report.composite, report.sigma_a);
    }

    #[test]
    fn transfer_with_a_nontrivial_twist_permutation() {
        // identity equivalence on kC_3 over F_4 with a two-step chain; the
        // sigma witness is the inversion, whose K0 matrix is the Frobenius
        // permutation swapping the omega simples
        let f4 = samples::gf(2, 2);
        let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        let f = EquivalenceData::identity(&kc3).unwrap();
        let chain: Vec<std::collections::BTreeSet<usize>> =
            vec![[0].into(), [0, 1, 2].into()];
        let d = PerversityDatum::new(
            kc3.clone(),
            kc3.clone(),
            vec![0, 0],
            chain.clone(),
            chain,
        )
        .unwrap();
        let wit = inversion_witness(&kc3);
        let report = verify_transfer(&f, &d, &wit, 1).unwrap();
        assert!(report.passed, "{report}");
        // the witness matrix genuinely permutes
        assert_ne!(report.k0_e, IntMat::identity(3).rows_vec());
        assert_eq!(report.k0_e, report.sigma_b);
    }

    #[test]
    fn transfer_precondition_failures_are_named() {
        let f9 = samples::gf(3, 2);
        let dual = samples::dual_numbers(f9.clone());
        let f = EquivalenceData::identity(&dual).unwrap();
        // datum q(0)=1 fails check_perverse against identity data
        let full: std::collections::BTreeSet<usize> = [0].into();
        let bad = PerversityDatum::new(
            dual.clone(),
            dual.clone(),
            vec![1],
            vec![full.clone()],
            vec![full],
        )
        .unwrap();
        let tw = dual.frobenius_twist(1);
        let wit = SigmaWitness::Morphism(
            AlgebraMorphism::new(tw, dual.clone(), Mat::identity(f9, 2)).unwrap(),
        );
        assert!(matches!(
            verify_transfer(&f, &bad, &wit, 1),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
