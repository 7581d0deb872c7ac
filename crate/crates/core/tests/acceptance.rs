//! Acceptance suite: one test per criterion, each printing a pass line and
//! holding its stated runtime ceiling. Run with
//! `cargo test -p mfnum --test acceptance -- --nocapture` to see the lines.

use mfnum::algebra::{Algebra, AlgebraMorphism};
use mfnum::derived::{check_perverse, k0_class, EquivalenceData, PerversityDatum};
use mfnum::groupalg::{
    self, block_decomposition, central_extension_form, defect, group_algebra, out_bound,
};
use mfnum::intmat::IntMat;
use mfnum::iso::{self, IsoOutcome};
use mfnum::linalg::{Mat, Rng};
use mfnum::modrep::{self, ModuleRep};
use mfnum::morita::{
    check_sigma_morita, morita_frobenius_number, sigma_morita_frobenius_number, subfield_bound,
    verify_transfer, MfOutcome, SigmaCheck, SigmaWitness,
};
use mfnum::samples;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

fn finish(criterion: &str, started: Instant, limit: Duration) {
    let took = started.elapsed();
    println!(
        "acceptance {criterion}: PASS in {:.3}s (limit {:.0}s)",
        took.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(
        took <= limit,
        "criterion {criterion} exceeded its runtime ceiling: {took:?} > {limit:?}"
    );
}

/// Split corpus algebras used by several criteria.
fn corpus() -> Vec<(&'static str, Arc<Algebra>)> {
    let f4 = samples::gf(2, 2);
    let f9 = samples::gf(3, 2);
    let q = f9.root_of_unity(8).unwrap();
    let two_cycle = {
        let quiver = mfnum::quiver::Quiver { vertices: 2, arrows: vec![(0, 1), (1, 0)] };
        let rels: Vec<mfnum::quiver::PathExpr> = vec![vec![(1, vec![0, 1])], vec![(1, vec![1, 0])]];
        mfnum::quiver::path_algebra(f9.clone(), &quiver, &rels).unwrap()
    };
    vec![
        ("field F4", samples::field_algebra(f4.clone())),
        ("field F9", samples::field_algebra(f9.clone())),
        ("dual numbers F4", samples::dual_numbers(f4.clone())),
        ("dual numbers F9", samples::dual_numbers(f9.clone())),
        ("product k^3 F4", samples::product_fields(f4.clone(), 3)),
        ("A_q", samples::quantum_plane(f9.clone(), q).unwrap()),
        ("A_{q^3}", samples::quantum_plane(f9.clone(), f9.pow(q, 3)).unwrap()),
        ("kC3 over F4", group_algebra(&samples::cyclic_group(3), &f4).unwrap()),
        ("kC3 over F9", group_algebra(&samples::cyclic_group(3), &f9).unwrap()),
        ("kS3 over F9", group_algebra(&samples::sym3(), &f9).unwrap()),
        ("kA4 over F4", group_algebra(&samples::alt4(), &f4).unwrap()),
        ("kV4 over F4", group_algebra(&samples::klein_four(), &f4).unwrap()),
        ("twisted Klein F9", samples::twisted_klein(f9.clone()).unwrap()),
        ("M2(F4)", samples::matrix_algebra(f4, 2)),
        ("two-cycle path algebra F9", two_cycle),
    ]
}

/// Corpus equivalences with verified perversity data.
fn equivalence_corpus() -> Vec<(&'static str, EquivalenceData, PerversityDatum)> {
    let f4 = samples::gf(2, 2);
    let f9 = samples::gf(3, 2);
    let mut out = Vec::new();
    // identity on kC3/F4 with a two-step chain
    {
        let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
        let e = EquivalenceData::identity(&kc3).unwrap();
        let full: BTreeSet<usize> = (0..3).collect();
        let first: BTreeSet<usize> = [0].into();
        let d = PerversityDatum::new(
            kc3.clone(),
            kc3.clone(),
            vec![0, 0],
            vec![first.clone(), full.clone()],
            vec![first, full],
        )
        .unwrap();
        out.push(("identity on kC3/F4", e, d));
    }
    // shift by 1 on A_q
    {
        let q = f9.root_of_unity(8).unwrap();
        let aq = samples::quantum_plane(f9.clone(), q).unwrap();
        let e = EquivalenceData::shift_data(&aq, 1).unwrap();
        let full: BTreeSet<usize> = [0].into();
        let d = PerversityDatum::new(
            aq.clone(),
            aq.clone(),
            vec![1],
            vec![full.clone()],
            vec![full],
        )
        .unwrap();
        out.push(("shift on A_q", e, d));
    }
    // Morita reduction of kS3/F9 through the corner bimodule
    {
        let ks3 = group_algebra(&samples::sym3(), &f9).unwrap();
        let data = ks3.basic_algebra_data().unwrap();
        let (corner, basis) = ks3.corner_algebra(&data.idempotent).unwrap();
        let p = modrep::Bimodule::corner(&ks3, &corner, &basis, &data.idempotent).unwrap();
        let e = EquivalenceData::from_bimodule(p).unwrap();
        let d = PerversityDatum::zero(ks3.clone(), corner.clone(), 0).unwrap();
        out.push(("kS3 to its basic algebra", e, d));
    }
    // Morita reduction of the twisted Klein algebra to the field
    {
        let tk = samples::twisted_klein(f9.clone()).unwrap();
        let idem = tk.primitive_idempotents().unwrap();
        let (corner, basis) = tk.corner_algebra(&idem[0]).unwrap();
        let p = modrep::Bimodule::corner(&tk, &corner, &basis, &idem[0]).unwrap();
        let e = EquivalenceData::from_bimodule(p).unwrap();
        let d = PerversityDatum::zero(tk.clone(), corner.clone(), 0).unwrap();
        out.push(("twisted Klein to the field", e, d));
    }
    // identity on dual numbers over F9
    {
        let dual = samples::dual_numbers(f9.clone());
        let e = EquivalenceData::identity(&dual).unwrap();
        let d = PerversityDatum::zero(dual.clone(), dual.clone(), 1).unwrap();
        out.push(("identity on dual numbers", e, d));
    }
    out
}

#[test]
fn criterion_1_twist_laws() {
    let started = Instant::now();
    let corpus = corpus();
    assert!(corpus.len() >= 10, "need at least 10 corpus algebras");
    for (name, a) in &corpus {
        for (s, t) in [(1u32, 1u32), (1, 2), (2, 1), (2, 3)] {
            let left = a.frobenius_twist(s).frobenius_twist(t);
            let right = a.frobenius_twist(s + t);
            assert!(left.structural_eq(&right), "twist composition fails on {name}");
        }
        // constants inside F_{p^s} fix the table under sigma^s
        let spec = a.spec();
        let mut s0: u32 = 1;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                for &c in a.prod(i, j) {
                    let d = spec.subfield_degree(c);
                    s0 = lcm_u32(s0, d);
                }
            }
        }
        assert!(
            a.frobenius_twist(s0).structural_eq(a),
            "sigma^{s0} does not fix {name} bitwise"
        );
    }
    finish("1 (twist laws)", started, Duration::from_secs(1));
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    let g = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / g * b
}

#[test]
fn criterion_2_perversity_calculus() {
    let started = Instant::now();
    let f4 = samples::gf(2, 2);
    // label universes: split product algebras of a few sizes
    let universes: Vec<Arc<Algebra>> =
        (2..=5).map(|s| samples::product_fields(f4.clone(), s)).collect();
    let mut rng = Rng::new(20260808);
    let mut tested = 0usize;
    while tested < 100 {
        let a = &universes[rng.below(universes.len() as u64) as usize];
        let b = &universes[rng.below(universes.len() as u64) as usize];
        let c = &universes[rng.below(universes.len() as u64) as usize];
        let dpth = &universes[rng.below(universes.len() as u64) as usize];
        let r = rng.below(3) as usize;
        let chain_a = random_chain(&mut rng, a.simple_count().unwrap(), r);
        let chain_b = random_chain(&mut rng, b.simple_count().unwrap(), r);
        let chain_c = random_chain(&mut rng, c.simple_count().unwrap(), r);
        let chain_d = random_chain(&mut rng, dpth.simple_count().unwrap(), r);
        let rand_q = |rng: &mut Rng| -> Vec<i64> {
            (0..=r).map(|_| rng.below(7) as i64 - 3).collect()
        };
        let d1 = PerversityDatum::new(
            a.clone(),
            b.clone(),
            rand_q(&mut rng),
            chain_a.clone(),
            chain_b.clone(),
        )
        .unwrap();
        let d2 = PerversityDatum::new(
            b.clone(),
            c.clone(),
            rand_q(&mut rng),
            chain_b.clone(),
            chain_c.clone(),
        )
        .unwrap();
        let d3 = PerversityDatum::new(
            c.clone(),
            dpth.clone(),
            rand_q(&mut rng),
            chain_c.clone(),
            chain_d.clone(),
        )
        .unwrap();
        // involution
        assert!(d1.invert().invert().same_shape(&d1));
        // associativity where defined
        let left = d1.compose(&d2).unwrap().compose(&d3).unwrap();
        let right = d1.compose(&d2.compose(&d3).unwrap()).unwrap();
        assert!(left.same_shape(&right));
        // two-sided q0 units (with matching chains)
        let unit_left = PerversityDatum::new(
            a.clone(),
            a.clone(),
            vec![0; r + 1],
            chain_a.clone(),
            chain_a.clone(),
        )
        .unwrap();
        let unit_right = PerversityDatum::new(
            b.clone(),
            b.clone(),
            vec![0; r + 1],
            chain_b.clone(),
            chain_b.clone(),
        )
        .unwrap();
        assert!(unit_left.compose(&d1).unwrap().same_shape(&d1));
        assert!(d1.compose(&unit_right).unwrap().same_shape(&d1));
        // composing with the inverse kills the shift
        let round = d1.compose(&d1.invert()).unwrap();
        assert!(round.q().iter().all(|&x| x == 0));
        tested += 1;
    }
    finish("2 (perversity calculus)", started, Duration::from_secs(1));
}

fn random_chain(rng: &mut Rng, total: usize, r: usize) -> Vec<BTreeSet<usize>> {
    let mut chain = Vec::with_capacity(r + 1);
    let mut cur: BTreeSet<usize> = BTreeSet::new();
    for step in 0..=r {
        if step == r {
            cur = (0..total).collect();
        } else {
            for l in 0..total {
                if !cur.contains(&l) && rng.below(2) == 0 {
                    cur.insert(l);
                }
            }
        }
        chain.push(cur.clone());
    }
    chain
}

#[test]
fn criterion_3_twist_conjugation_stays_perverse() {
    let started = Instant::now();
    for (name, e, d) in &equivalence_corpus() {
        assert!(
            check_perverse(e, d).unwrap().is_perverse(),
            "corpus datum not verified for {name}"
        );
        for t in [1u32, 2] {
            let et = e.conjugate(t).unwrap();
            let dt = d.twist(t).unwrap();
            assert!(
                check_perverse(&et, &dt).unwrap().is_perverse(),
                "conjugated equivalence loses perversity for {name} at t = {t}"
            );
        }
    }
    finish("3 (twist conjugation)", started, Duration::from_secs(5));
}

#[test]
fn criterion_4_transfer_pipeline_on_aq() {
    let started = Instant::now();
    let f9 = samples::gf(3, 2);
    let q = f9.root_of_unity(8).unwrap();
    let aq = samples::quantum_plane(f9.clone(), q).unwrap();
    let t = 2u32;
    // F: shift by 1, with datum q = 1 on full chains
    let f = EquivalenceData::shift_data(&aq, 1).unwrap();
    let full: BTreeSet<usize> = [0].into();
    let d = PerversityDatum::new(aq.clone(), aq.clone(), vec![1], vec![full.clone()], vec![full])
        .unwrap();
    // E witness found by search over isomorphisms twist^2(A_q) -> A_q
    let twisted = aq.frobenius_twist(t);
    assert!(twisted.structural_eq(&aq), "q^9 = q, so the square twist is bitwise trivial");
    let mut witness: Option<AlgebraMorphism> = None;
    let outcome = iso::for_each_isomorphism(&twisted, &aq, 10_000_000, |m| {
        match check_sigma_morita(&aq, t, &SigmaWitness::Morphism(m.clone())) {
            Ok(SigmaCheck::Yes) => {
                witness = Some(m.clone());
                true
            }
            _ => false,
        }
    })
    .unwrap();
    let witness = witness.unwrap_or_else(|| panic!("no sigma witness found ({outcome:?})"));
    let report = verify_transfer(&f, &d, &SigmaWitness::Morphism(witness), t).unwrap();
    assert!(report.shift_is_zero && report.chains_returned, "certificate 1 failed:\n{report}");
    assert!(report.k0_identity, "certificate 2 failed:\n{report}");
    assert!(report.per_simple.iter().all(|s| s.ok), "certificate 3 failed:\n{report}");
    assert!(report.passed);
    // with one simple everything is 1x1: k0(F) = [-1], [sigma] = [1]
    assert_eq!(report.k0_f, vec![vec![-1]]);
    assert_eq!(report.sigma_a, vec![vec![1]]);
    finish("4 (transfer pipeline)", started, Duration::from_secs(30));
}

// ---- criterion 5: the independent oracle ----
//
// A miniature F_9 = F_3[i]/(i^2 + 1) and a from-scratch brute force over
// unital algebra morphisms of the quantum plane, sharing no code with the
// library path it audits.

mod oracle {
    /// Elements of F_9 as (a, b) = a + b i with a, b mod 3.
    pub type F9 = (u8, u8);

    pub fn add(x: F9, y: F9) -> F9 {
        (((x.0 + y.0) % 3), ((x.1 + y.1) % 3))
    }
    pub fn neg(x: F9) -> F9 {
        (((3 - x.0) % 3), ((3 - x.1) % 3))
    }
    pub fn mul(x: F9, y: F9) -> F9 {
        // (a + bi)(c + di) = ac - bd + (ad + bc) i
        let ac = (x.0 * y.0) % 3;
        let bd = (x.1 * y.1) % 3;
        let ad = (x.0 * y.1) % 3;
        let bc = (x.1 * y.0) % 3;
        (((ac + 3 - bd) % 3), ((ad + bc) % 3))
    }
    pub fn inv(x: F9) -> F9 {
        for a in 0..3 {
            for b in 0..3 {
                if mul(x, (a, b)) == (1, 0) {
                    return (a, b);
                }
            }
        }
        panic!("zero has no inverse");
    }
    pub fn all() -> Vec<F9> {
        let mut out = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                out.push((a, b));
            }
        }
        out
    }

    /// Structure table of A_q on 1, x, y, xy: product of basis i and j.
    fn table(q: F9) -> [[[F9; 4]; 4]; 4] {
        let z = (0u8, 0u8);
        let o = (1u8, 0u8);
        let mut t = [[[z; 4]; 4]; 4];
        for j in 0..4 {
            t[0][j][j] = o;
            t[j][0][j] = o;
        }
        t[1][2][3] = o; // x y = xy
        t[2][1][3] = neg(inv(q)); // y x = -q^{-1} xy
        t
    }

    fn mul_vec(t: &[[[F9; 4]; 4]; 4], u: &[F9; 4], v: &[F9; 4]) -> [F9; 4] {
        let mut out = [(0u8, 0u8); 4];
        for i in 0..4 {
            if u[i] == (0, 0) {
                continue;
            }
            for j in 0..4 {
                if v[j] == (0, 0) {
                    continue;
                }
                let c = mul(u[i], v[j]);
                for k in 0..4 {
                    if t[i][j][k] != (0, 0) {
                        out[k] = add(out[k], mul(c, t[i][j][k]));
                    }
                }
            }
        }
        out
    }

    fn invertible4(cols: &[[F9; 4]; 4]) -> bool {
        // Gaussian elimination over F_9 on a copy
        let mut m: Vec<Vec<F9>> = (0..4).map(|r| (0..4).map(|c| cols[c][r]).collect()).collect();
        let mut rank = 0;
        for col in 0..4 {
            let Some(p) = (rank..4).find(|&r| m[r][col] != (0, 0)) else {
                continue;
            };
            m.swap(rank, p);
            let piv_inv = inv(m[rank][col]);
            for c in 0..4 {
                m[rank][c] = mul(m[rank][c], piv_inv);
            }
            for r in 0..4 {
                if r != rank && m[r][col] != (0, 0) {
                    let f = m[r][col];
                    for c in 0..4 {
                        let s = mul(f, m[rank][c]);
                        m[r][c] = add(m[r][c], neg(s));
                    }
                }
            }
            rank += 1;
        }
        rank == 4
    }

    /// Is A_q isomorphic to A_{q'}? Exhaustive search over unital algebra
    /// morphisms sending the generators into the radical.
    pub fn quantum_planes_isomorphic(q: F9, qp: F9) -> bool {
        let tq = table(q);
        let tqp = table(qp);
        let one: [F9; 4] = [(1, 0), (0, 0), (0, 0), (0, 0)];
        // radical candidates with square zero, as images for x and y
        let mut nilpotent = Vec::new();
        for a in all() {
            for b in all() {
                for c in all() {
                    let u = [(0, 0), a, b, c];
                    if u == [(0, 0); 4] {
                        continue;
                    }
                    if mul_vec(&tqp, &u, &u) == [(0, 0); 4] {
                        nilpotent.push(u);
                    }
                }
            }
        }
        for u in &nilpotent {
            for v in &nilpotent {
                let uv = mul_vec(&tqp, u, v);
                let cols = [one, *u, *v, uv];
                if !invertible4(&cols) {
                    continue;
                }
                // relation yx = -q^{-1} xy must map correctly; check full
                // multiplicativity on all basis pairs
                let phi = |idx: usize| cols[idx];
                let mut ok = true;
                'pairs: for i in 0..4 {
                    for j in 0..4 {
                        // phi(e_i e_j) via the source table
                        let mut lhs = [(0u8, 0u8); 4];
                        for k in 0..4 {
                            if tq[i][j][k] != (0, 0) {
                                let img = phi(k);
                                for r in 0..4 {
                                    lhs[r] = add(lhs[r], mul(tq[i][j][k], img[r]));
                                }
                            }
                        }
                        let rhs = mul_vec(&tqp, &phi(i), &phi(j));
                        if lhs != rhs {
                            ok = false;
                            break 'pairs;
                        }
                    }
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
}

#[test]
fn criterion_5_frobenius_numbers_of_aq() {
    let started = Instant::now();
    // oracle first: classify A_q against every nonzero parameter
    // q = 1 + i has multiplicative order 8 in F_9
    let q: oracle::F9 = (1, 1);
    {
        let mut pw = q;
        let mut ord = 1;
        while pw != (1, 0) {
            pw = oracle::mul(pw, q);
            ord += 1;
        }
        assert_eq!(ord, 8);
    }
    let q_inv = oracle::inv(q);
    let mut iso_params = Vec::new();
    for cand in oracle::all() {
        if cand == (0, 0) {
            continue;
        }
        if oracle::quantum_planes_isomorphic(q, cand) {
            iso_params.push(cand);
        }
    }
    let mut expected = vec![q, q_inv];
    expected.sort_unstable();
    iso_params.sort_unstable();
    assert_eq!(iso_params, expected, "oracle: A_q ~ A_q' iff q' in {{q, 1/q}}");
    // q^3 is not among them, q^9 = q is: the twist orbit needs m = 2
    let q3 = oracle::mul(oracle::mul(q, q), q);
    assert!(!iso_params.contains(&q3));

    // now the library's numbers, frozen against the oracle
    let f9 = samples::gf(3, 2);
    let qcode = f9.root_of_unity(8).unwrap();
    // the canonical order-8 root is 1 + i: coefficient vector (1, 1)
    assert_eq!(f9.decode(qcode), vec![1, 1]);
    let aq = samples::quantum_plane(f9.clone(), qcode).unwrap();
    assert_eq!(
        morita_frobenius_number(&aq, 2, 10_000_000).unwrap(),
        MfOutcome::Number(2),
        "Morita Frobenius number of A_q"
    );
    assert_eq!(
        sigma_morita_frobenius_number(&aq, 2, 10_000_000).unwrap(),
        MfOutcome::Number(2),
        "sigma-Morita Frobenius number of A_q"
    );
    finish("5 (Frobenius numbers, oracle)", started, Duration::from_secs(300));
}

#[test]
fn criterion_6_number_invariance_across_equivalences() {
    let started = Instant::now();
    // every corpus pair related by a verified perverse equivalence has equal
    // sigma-Morita Frobenius numbers
    for (name, e, d) in &equivalence_corpus() {
        assert!(check_perverse(e, d).unwrap().is_perverse());
        let a = e.source();
        let b = e.target();
        let ba = subfield_bound(a).unwrap().m;
        let bb = subfield_bound(b).unwrap().m;
        let sa = sigma_morita_frobenius_number(a, ba, 10_000_000).unwrap();
        let sb = sigma_morita_frobenius_number(b, bb, 10_000_000).unwrap();
        assert_eq!(sa, sb, "sigma-MF numbers differ across the equivalence {name}");
        assert!(matches!(sa, MfOutcome::Number(_)), "number not computable for {name}");
    }
    // mf <= sigma-mf <= subfield bound across the corpus
    for (name, a) in &corpus() {
        let sb = subfield_bound(a).unwrap();
        let mf = morita_frobenius_number(a, sb.m, 10_000_000).unwrap();
        let smf = sigma_morita_frobenius_number(a, sb.m, 10_000_000).unwrap();
        let (MfOutcome::Number(mf), MfOutcome::Number(smf)) = (&mf, &smf) else {
            panic!("{name}: numbers not certified below the subfield bound ({mf:?}, {smf:?})");
        };
        assert!(mf <= smf, "{name}: mf > sigma-mf");
        assert!(*smf <= sb.m, "{name}: sigma-mf above the subfield bound");
        // the identity is a valid witness on the subfield form
        let id = SigmaWitness::Morphism(AlgebraMorphism::identity(&sb.form));
        assert_eq!(check_sigma_morita(&sb.form, sb.m, &id).unwrap(), SigmaCheck::Yes);
    }
    finish("6 (number invariance)", started, Duration::from_secs(300));
}

#[test]
fn criterion_7_block_and_group_layer() {
    let started = Instant::now();
    let f4 = samples::gf(2, 2);
    let f9 = samples::gf(3, 2);
    // kC3 over F4 at p = 2: three blocks of dimension 1
    let kc3 = group_algebra(&samples::cyclic_group(3), &f4).unwrap();
    let blocks = block_decomposition(&kc3).unwrap();
    assert_eq!(blocks.blocks.len(), 3);
    assert!(blocks.blocks.iter().all(|b| b.dim() == 1));
    // the Frobenius permutes the block idempotents, swapping exactly two
    let twisted: Vec<Vec<u64>> = blocks
        .idempotents
        .iter()
        .map(|e| e.iter().map(|&c| f4.frobenius(c, 1)).collect())
        .collect();
    for t in &twisted {
        assert!(blocks.idempotents.contains(t), "twist of a block idempotent is a block idempotent");
    }
    let moved = blocks.idempotents.iter().zip(&twisted).filter(|(a, b)| a != b).count();
    assert_eq!(moved, 2);
    // sigma-MF number 1 via the inversion witness
    let inv_matrix = {
        let mut p = Mat::zero(f4.clone(), 3, 3);
        p.set(0, 0, 1);
        p.set(2, 1, 1);
        p.set(1, 2, 1);
        p
    };
    let wit = SigmaWitness::Morphism(
        AlgebraMorphism::new(kc3.frobenius_twist(1), kc3.clone(), inv_matrix).unwrap(),
    );
    assert_eq!(check_sigma_morita(&kc3, 1, &wit).unwrap(), SigmaCheck::Yes);
    assert_eq!(
        sigma_morita_frobenius_number(&kc3, 2, 10_000_000).unwrap(),
        MfOutcome::Number(1)
    );
    // principal block of C3 at p = 3: Cartan [3], defect 1
    let kc3_p3 = group_algebra(&samples::cyclic_group(3), &f9).unwrap();
    let blocks3 = block_decomposition(&kc3_p3).unwrap();
    assert_eq!(blocks3.blocks.len(), 1);
    let principal = &blocks3.blocks[0];
    assert_eq!(principal.cartan_matrix().unwrap().rows_vec(), vec![vec![3]]);
    assert_eq!(defect(principal).unwrap(), 1);
    // S3 at p = 3: Cartan elementary divisors {1, 3}, defect 1
    let ks3 = group_algebra(&samples::sym3(), &f9).unwrap();
    let cart = ks3.cartan_matrix().unwrap();
    assert_eq!(cart.smith_diagonal(), vec![1, 3]);
    let ks3_blocks = block_decomposition(&ks3).unwrap();
    assert_eq!(ks3_blocks.blocks.len(), 1);
    assert_eq!(defect(&ks3_blocks.blocks[0]).unwrap(), 1);
    finish("7 (blocks and groups)", started, Duration::from_secs(10));
}

#[test]
fn criterion_8_outer_bound_check() {
    let started = Instant::now();
    let f4 = samples::gf(2, 2);
    let f9 = samples::gf(3, 2);
    // bounds from the outer automorphism groups
    let bound_c3 = out_bound(&samples::cyclic_group(3), 3).unwrap();
    assert_eq!(bound_c3, 4);
    let bound_v4 = out_bound(&samples::klein_four(), 2).unwrap();
    assert_eq!(bound_v4, 9);
    // algebras of the shape k_alpha(P x| E) for P = C3 at p = 3: E of odd order inside Out(C3)
    let corpus_c3: Vec<Arc<Algebra>> = vec![
        group_algebra(&samples::cyclic_group(3), &f9).unwrap(), // E = 1
        group_algebra(&samples::sym3(), &f9).unwrap(),          // E = C2, trivial cocycle
    ];
    for a in &corpus_c3 {
        let sb = subfield_bound(a).unwrap();
        let smf = sigma_morita_frobenius_number(a, sb.m, 10_000_000).unwrap();
        let MfOutcome::Number(smf) = smf else { panic!("expected a number") };
        assert!(smf as u64 <= sb.m as u64 && sb.m as u64 <= bound_c3);
    }
    // P = V4 at p = 2: E <= Out(V4) of odd order, so E = 1 or C3 (A4)
    let corpus_v4: Vec<Arc<Algebra>> = vec![
        group_algebra(&samples::klein_four(), &f4).unwrap(),
        group_algebra(&samples::alt4(), &f4).unwrap(),
    ];
    for a in &corpus_v4 {
        let sb = subfield_bound(a).unwrap();
        let smf = sigma_morita_frobenius_number(a, sb.m, 10_000_000).unwrap();
        let MfOutcome::Number(smf) = smf else { panic!("expected a number") };
        assert!(smf as u64 <= sb.m as u64 && sb.m as u64 <= bound_v4);
    }
    // central extension round trip on the Klein cocycle at p = 3
    let alpha = samples::klein_cocycle(f9.clone()).unwrap();
    let cef = central_extension_form(&samples::klein_four(), &alpha).unwrap();
    assert_eq!(cef.group.order(), 8);
    assert_eq!(cef.cut.dim(), 4);
    assert!(cef.iso.is_isomorphism());
    // re-verify the untwisting morphism from its raw matrix
    let twisted = groupalg::twisted_group_algebra(&samples::klein_four(), &alpha).unwrap();
    let recheck =
        AlgebraMorphism::new(twisted.clone(), cef.cut.clone(), cef.iso.matrix.clone()).unwrap();
    assert!(recheck.is_isomorphism());
    // and the twisted algebra is the 2x2 matrix algebra
    match iso::iso_search(&twisted, &samples::matrix_algebra(f9, 2), 1_000_000).unwrap() {
        IsoOutcome::Found(_) => {}
        other => panic!("twisted Klein should match M2, got {other:?}"),
    }
    finish("8 (outer bound check)", started, Duration::from_secs(120));
}

#[test]
fn criterion_9_meataxe_soundness() {
    let started = Instant::now();
    let mut modules: Vec<(String, ModuleRep)> = Vec::new();
    for (name, a) in corpus() {
        modules.push((format!("regular of {name}"), a.regular_module()));
        if let Ok(idems) = a.primitive_idempotents() {
            if let Some(e) = idems.first() {
                let reg = a.regular_module();
                let pe = modrep::spin(&reg, e).unwrap();
                modules.push((format!("projective of {name}"), reg.submodule(&pe).unwrap()));
            }
        }
    }
    for (name, m) in &modules {
        let c0 = modrep::composition_factor_counts(m, 0).unwrap();
        let c1 = modrep::composition_factor_counts(m, 1).unwrap();
        assert_eq!(c0, c1, "seed dependence in the factors of {name}");
        // dimension additivity
        let dims = m.algebra().simple_dims().unwrap();
        let total: usize = c0.iter().zip(&dims).map(|(&c, &d)| c as usize * d).sum();
        assert_eq!(total, m.dim(), "factor dimensions do not add up for {name}");
        // stability under a random change of basis
        if m.dim() > 0 {
            let spec = m.algebra().spec().clone();
            let mut rng = Rng::new(0xBA5E ^ m.dim() as u64);
            let t = loop {
                let cand = Mat::from_fn(spec.clone(), m.dim(), m.dim(), |_, _| {
                    rng.below(spec.q())
                });
                if cand.inverse().is_some() {
                    break cand;
                }
            };
            let conj = m.change_basis(&t).unwrap();
            let c2 = modrep::composition_factor_counts(&conj, 0).unwrap();
            assert_eq!(c0, c2, "basis dependence in the factors of {name}");
        }
    }
    // K0 classes agree with factor counts on a couple of complexes
    let f9 = samples::gf(3, 2);
    let dual = samples::dual_numbers(f9);
    let c = mfnum::derived::BoundedComplex::concentrated(dual.regular_module(), 0);
    assert_eq!(k0_class(&c).unwrap().coords(), &[2]);
    let sigma = IntMat::identity(1);
    assert_eq!(sigma.rows_vec(), vec![vec![1]]);
    finish("9 (MeatAxe soundness)", started, Duration::from_secs(10));
}
