//! Exact arithmetic in finite fields `F_{p^m}`.
//!
//! Every field is constructed once per `(p, m)` and cached: the modulus is
//! the lexicographically least monic irreducible polynomial of degree `m`
//! over `F_p`, coefficients compared from the constant term up, so field
//! towers are reproducible across runs and machines. Elements are stored as
//! integer codes `c0 + c1*p + ... + c_{m-1}*p^{m-1}`; the code doubles as
//! the canonical enumeration order. For `p^m <= 2^16` discrete-log tables
//! make multiplication O(1); larger fields fall back to polynomial
//! arithmetic, and any operation that needs to enumerate the field errors
//! out beyond the cap.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Enumerating all elements of a field is allowed only below this size.
pub const ENUMERATION_CAP: u64 = 1 << 16;

/// Hard size limit for constructing a field at all (codes stay in u64).
const FIELD_CAP: u64 = 1 << 31;

/// A concrete finite field `F_{p^m}` with its canonical modulus.
pub struct FieldSpec {
    p: u64,
    m: u32,
    q: u64,
    /// Coefficients of the modulus from the constant term; length `m + 1`, monic.
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

struct Tables {
    /// `exp[i]` = code of `g^i` for the canonical generator g, `i` in `0..q-1`.
    exp: Vec<u32>,
    /// `log[code]` for nonzero codes; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({},{})", self.p, self.m)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}
impl Eq for FieldSpec {}

fn spec_cache() -> &'static Mutex<HashMap<(u64, u32), Arc<FieldSpec>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldSpec>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- dense polynomial arithmetic over F_p (little helpers for modulus search
// and the table-free fallback; coefficient vectors are little-endian) ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = r[r.len() - 1]; // f is monic
        let shift = r.len() - 1 - df;
        for i in 0..=df {
            let idx = shift + i;
            let sub = (lead * f[i]) % p;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), f, p)
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, f, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        // make y monic before reducing
        let inv = mod_inv(y[y.len() - 1], p);
        for c in y.iter_mut() {
            *c = (*c * inv) % p;
        }
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0.
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    a %= p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// `f` monic of degree m >= 1, irreducible over F_p?
fn poly_irreducible(f: &[u64], p: u64) -> bool {
    let m = (f.len() - 1) as u64;
    if m == 1 {
        return true;
    }
    // x^(p^m) == x mod f
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 0..m {
        xp = poly_powmod(&xp, p, f, p);
    }
    let mut diff = xp.clone();
    sub_poly(&mut diff, &x, p);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^(p^(m/r)) - x, f) = 1 for every prime r | m
    for r in prime_factors(m) {
        let mut xe = x.clone();
        for _ in 0..(m / r) {
            xe = poly_powmod(&xe, p, f, p);
        }
        let mut d = xe;
        sub_poly(&mut d, &x, p);
        let g = poly_gcd(&d, f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn sub_poly(a: &mut Vec<u64>, b: &[u64], p: u64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i] = (a[i] + p - c) % p;
    }
    poly_trim(a);
}

impl FieldSpec {
    /// The canonical `F_{p^m}`. Cached; repeated calls return the same `Arc`.
    pub fn get(p: u64, m: u32) -> Result<Arc<FieldSpec>> {
        if let Some(spec) = spec_cache().lock().unwrap().get(&(p, m)) {
            return Ok(spec.clone());
        }
        let spec = Arc::new(Self::build(p, m)?);
        spec_cache()
            .lock()
            .unwrap()
            .entry((p, m))
            .or_insert_with(|| spec.clone());
        Ok(spec)
    }

    /// Smallest common overfield `F_{p^lcm(degrees)}`; stands in for the
    /// algebraic closure when several elements must coexist.
    pub fn covering(p: u64, degrees: &[u32]) -> Result<Arc<FieldSpec>> {
        let mut l: u64 = 1;
        for &d in degrees {
            let d = d.max(1) as u64;
            l = l / gcd(l, d) * d;
        }
        if l > u32::MAX as u64 {
            return Err(Error::FieldTooLarge { p, m: u32::MAX });
        }
        Self::get(p, l as u32)
    }

    fn build(p: u64, m: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::Invalid("field degree must be positive".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..m {
            q = q.checked_mul(p).filter(|&v| v <= FIELD_CAP).ok_or(Error::FieldTooLarge { p, m })?;
        }
        let modulus = Self::canonical_modulus(p, m);
        let tables = if q <= ENUMERATION_CAP {
            Some(Self::build_tables(p, m, q, &modulus))
        } else {
            None
        };
        Ok(FieldSpec { p, m, q, modulus, tables })
    }

    /// Lexicographically least monic irreducible polynomial of degree m,
    /// coefficients ordered from the constant term.
    fn canonical_modulus(p: u64, m: u32) -> Vec<u64> {
        if m == 1 {
            return vec![0, 1]; // x itself
        }
        let mu = m as usize;
        let mut coeffs = vec![0u64; mu]; // (a_0, ..., a_{m-1})
        loop {
            let mut f = coeffs.clone();
            f.push(1);
            // cheap filters first: a zero constant term or a root in F_p
            // both force reducibility for m >= 2
            let rooted = coeffs[0] == 0
                || (p <= 1 << 10
                    && (0..p).any(|c| {
                        let mut acc = 0u64;
                        for &a in f.iter().rev() {
                            acc = (acc * c + a) % p;
                        }
                        acc == 0
                    }));
            if !rooted && poly_irreducible(&f, p) {
                return f;
            }
            // increment the tuple with a_{m-1} as the fastest digit so that
            // the first hit is lexicographically least from the constant term
            let mut i = mu;
            loop {
                debug_assert!(i > 0, "no irreducible polynomial found");
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    fn build_tables(p: u64, m: u32, q: u64, modulus: &[u64]) -> Tables {
        let qi = q as usize;
        // canonical generator: least code of multiplicative order q - 1
        let ord_facts = prime_factors(q - 1);
        let mut gen_code = 1u64;
        'cand: for c in 1..q {
            if q > 2 && c == 1 {
                continue;
            }
            for &r in &ord_facts {
                let e = (q - 1) / r;
                if pow_code_raw(c, e, p, m, modulus) == 1 {
                    continue 'cand;
                }
            }
            gen_code = c;
            break;
        }
        let mut exp = vec![0u32; qi - 1];
        let mut log = vec![0u32; qi];
        let mut cur = 1u64;
        for i in 0..(qi - 1) {
            exp[i] = cur as u32;
            log[cur as usize] = i as u32;
            cur = mul_code_raw(cur, gen_code, p, m, modulus);
        }
        debug_assert_eq!(cur, 1);
        Tables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Field size `p^m`.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Modulus coefficients from the constant term, length `m + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }
    pub fn one(&self) -> u64 {
        1
    }
    /// Code of the generator power-basis element `x` (the class of x).
    pub fn gen_code(&self) -> u64 {
        if self.m == 1 {
            1
        } else {
            self.p
        }
    }

    pub fn decode(&self, code: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.m as usize);
        let mut c = code;
        for _ in 0..self.m {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    pub fn encode(&self, coeffs: &[u64]) -> u64 {
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            code = code * self.p + (c % self.p);
        }
        code
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (mut out, mut mult, mut x, mut y) = (0u64, 1u64, a, b);
        for _ in 0..self.m {
            out += mult * ((x % self.p + y % self.p) % self.p);
            mult *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let (mut out, mut mult, mut x) = (0u64, 1u64, a);
        for _ in 0..self.m {
            out += mult * ((self.p - x % self.p) % self.p);
            mult *= self.p;
            x /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
                t.exp[(s % (self.q - 1)) as usize] as u64
            }
            None => mul_code_raw(a, b, self.p, self.m, &self.modulus),
        }
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as u64;
                Ok(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize] as u64)
            }
            None => Ok(self.pow(a, self.q - 2)),
        }
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as u64;
                let s = (l as u128 * e as u128 % (self.q - 1) as u128) as u64;
                t.exp[s as usize] as u64
            }
            None => pow_code_raw(a, e, self.p, self.m, &self.modulus),
        }
    }

    /// `a^(p^t)`: the t-fold Frobenius.
    pub fn frobenius(&self, a: u64, t: u32) -> u64 {
        if a == 0 {
            return 0;
        }
        let t = t % self.m;
        if t == 0 {
            return a;
        }
        match &self.tables {
            Some(tab) => {
                let mut e: u64 = 1;
                for _ in 0..t {
                    e = e * self.p % (self.q - 1);
                }
                let l = tab.log[a as usize] as u64;
                tab.exp[((l as u128 * e as u128) % (self.q - 1) as u128) as usize] as u64
            }
            None => {
                let mut cur = a;
                for _ in 0..t {
                    cur = pow_code_raw(cur, self.p, self.p, self.m, &self.modulus);
                }
                cur
            }
        }
    }

    /// Least `d >= 1` with `a^(p^d) = a`; divides `m`.
    pub fn subfield_degree(&self, a: u64) -> u32 {
        for d in 1..=self.m {
            if self.m % d == 0 && self.frobenius(a, d) == a {
                return d;
            }
        }
        self.m
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut ord = self.q - 1;
        for r in prime_factors(self.q - 1) {
            while ord % r == 0 && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// All element codes in canonical order; errors beyond the enumeration cap.
    pub fn enumerate(&self) -> Result<std::ops::Range<u64>> {
        if self.q > ENUMERATION_CAP {
            return Err(Error::EnumerationCap { needed: self.q, cap: ENUMERATION_CAP });
        }
        Ok(0..self.q)
    }

    /// Least-code element of multiplicative order exactly `n`; requires `n | q - 1`.
    pub fn root_of_unity(&self, n: u64) -> Result<u64> {
        if n == 0 || (self.q - 1) % n != 0 {
            return Err(Error::Invalid(format!("no root of unity of order {n} in {self:?}")));
        }
        match &self.tables {
            Some(t) => {
                let step = (self.q - 1) / n;
                let mut best = u64::MAX;
                for k in 0..n {
                    if gcd(k, n) == 1 || n == 1 {
                        let code = t.exp[(k * step) as usize] as u64;
                        best = best.min(code);
                    }
                }
                Ok(best)
            }
            None => Err(Error::EnumerationCap { needed: self.q, cap: ENUMERATION_CAP }),
        }
    }

    /// Image of code `a` (an element of `self`) under the canonical embedding
    /// into `target`; defined when `subfield_degree(a)` divides `target.m`.
    pub fn embed(self: &Arc<Self>, a: u64, target: &Arc<FieldSpec>) -> Result<u64> {
        if self.p != target.p {
            return Err(Error::FieldMismatch {
                p1: self.p,
                m1: self.m,
                p2: target.p,
                m2: target.m,
            });
        }
        let d = self.subfield_degree(a);
        if target.m % d != 0 {
            return Err(Error::NoEmbedding { degree: d, p: target.p, m: target.m });
        }
        if self.m == target.m {
            return Ok(a); // specs are canonical per (p, m)
        }
        let small = FieldSpec::get(self.p, d)?;
        let b = self.compress(a, &small)?;
        let rho = target.canonical_root(&small.modulus)?;
        // evaluate b's coordinate polynomial at rho
        let coeffs = small.decode(b);
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = target.add(target.mul(acc, rho), c % self.p);
        }
        Ok(acc)
    }

    /// Express `a` in the canonical field of its subfield degree `d = small.m`.
    fn compress(self: &Arc<Self>, a: u64, small: &Arc<FieldSpec>) -> Result<u64> {
        if small.m == self.m {
            return Ok(a);
        }
        if small.m == 1 {
            // prime-field elements have constant coordinate vectors
            return Ok(self.decode(a)[0]);
        }
        let rho = self.canonical_root(&small.modulus)?;
        // solve a = sum b_j rho^j over F_p in the coordinates of self
        let mut powers = Vec::with_capacity(small.m as usize);
        let mut cur = 1u64;
        for _ in 0..small.m {
            powers.push(self.decode(cur));
            cur = self.mul(cur, rho);
        }
        let target_coords = self.decode(a);
        // Gaussian elimination over F_p on an m x d system
        let mr = self.m as usize;
        let dc = small.m as usize;
        let mut aug: Vec<Vec<u64>> = (0..mr)
            .map(|r| {
                let mut row: Vec<u64> = (0..dc).map(|c| powers[c][r]).collect();
                row.push(target_coords[r]);
                row
            })
            .collect();
        let p = self.p;
        let mut piv_rows = Vec::new();
        let mut r0 = 0usize;
        for c in 0..dc {
            if let Some(rp) = (r0..mr).find(|&r| aug[r][c] != 0) {
                aug.swap(r0, rp);
                let inv = mod_inv(aug[r0][c], p);
                for x in aug[r0].iter_mut() {
                    *x = *x * inv % p;
                }
                for r in 0..mr {
                    if r != r0 && aug[r][c] != 0 {
                        let f = aug[r][c];
                        for k in 0..=dc {
                            let sub = f * aug[r0][k] % p;
                            aug[r][k] = (aug[r][k] + p - sub) % p;
                        }
                    }
                }
                piv_rows.push((c, r0));
                r0 += 1;
            }
        }
        let mut b = vec![0u64; dc];
        for &(c, r) in &piv_rows {
            b[c] = aug[r][dc];
        }
        // consistency: rows past the pivots must be zero
        for r in r0..mr {
            if aug[r][dc] != 0 {
                return Err(Error::NoEmbedding { degree: small.m, p: self.p, m: self.m });
            }
        }
        Ok(small.encode(&b))
    }

    /// Least-code root of a monic polynomial `f` (coefficients over F_p) in
    /// this field. Enumerates, so capped.
    fn canonical_root(&self, f: &[u64]) -> Result<u64> {
        for code in self.enumerate()? {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = self.add(self.mul(acc, code), c % self.p);
            }
            if acc == 0 {
                return Ok(code);
            }
        }
        Err(Error::NoEmbedding { degree: (f.len() - 1) as u32, p: self.p, m: self.m })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mul_code_raw(a: u64, b: u64, p: u64, m: u32, modulus: &[u64]) -> u64 {
    let dec = |mut c: u64| {
        let mut v = Vec::with_capacity(m as usize);
        for _ in 0..m {
            v.push(c % p);
            c /= p;
        }
        v
    };
    let prod = poly_mulmod(&dec(a), &dec(b), modulus, p);
    let mut code = 0u64;
    for &c in prod.iter().rev() {
        code = code * p + c;
    }
    code
}

fn pow_code_raw(a: u64, mut e: u64, p: u64, m: u32, modulus: &[u64]) -> u64 {
    let mut base = a;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_code_raw(acc, base, p, m, modulus);
        }
        base = mul_code_raw(base, base, p, m, modulus);
        e >>= 1;
    }
    acc
}

/// An element of a concrete finite field: a spec plus a code.
#[derive(Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    code: u64,
}

impl FieldElement {
    pub fn new(spec: Arc<FieldSpec>, code: u64) -> Result<Self> {
        if code >= spec.q {
            return Err(Error::Invalid(format!("code {code} out of range for {spec:?}")));
        }
        Ok(FieldElement { spec, code })
    }

    pub fn from_coeffs(spec: Arc<FieldSpec>, coeffs: &[u64]) -> Result<Self> {
        if coeffs.len() > spec.m as usize {
            return Err(Error::Invalid(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                spec.m
            )));
        }
        let code = spec.encode(coeffs);
        Ok(FieldElement { spec, code })
    }

    pub fn zero(spec: Arc<FieldSpec>) -> Self {
        FieldElement { spec, code: 0 }
    }
    pub fn one(spec: Arc<FieldSpec>) -> Self {
        FieldElement { spec, code: 1 }
    }
    /// The power-basis generator (class of x in `F_p[x]/(modulus)`).
    pub fn generator(spec: Arc<FieldSpec>) -> Self {
        let code = spec.gen_code();
        FieldElement { spec, code }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn code(&self) -> u64 {
        self.code
    }
    pub fn coeffs(&self) -> Vec<u64> {
        self.spec.decode(self.code)
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch {
                p1: self.spec.p,
                m1: self.spec.m,
                p2: other.spec.p,
                m2: other.spec.m,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { spec: self.spec.clone(), code: self.spec.add(self.code, other.code) })
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { spec: self.spec.clone(), code: self.spec.sub(self.code, other.code) })
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { spec: self.spec.clone(), code: self.spec.mul(self.code, other.code) })
    }
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { spec: self.spec.clone(), code: self.spec.div(self.code, other.code)? })
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(FieldElement { spec: self.spec.clone(), code: self.spec.inv(self.code)? })
    }
    pub fn neg(&self) -> Self {
        FieldElement { spec: self.spec.clone(), code: self.spec.neg(self.code) }
    }
    pub fn pow(&self, e: u64) -> Self {
        FieldElement { spec: self.spec.clone(), code: self.spec.pow(self.code, e) }
    }
    /// `self^(p^t)`.
    pub fn frobenius(&self, t: u32) -> Self {
        FieldElement { spec: self.spec.clone(), code: self.spec.frobenius(self.code, t) }
    }
    pub fn subfield_degree(&self) -> u32 {
        self.spec.subfield_degree(self.code)
    }
    pub fn embed(&self, target: &Arc<FieldSpec>) -> Result<Self> {
        let code = self.spec.embed(self.code, target)?;
        Ok(FieldElement { spec: target.clone(), code })
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.code == other.code
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.coeffs();
        write!(f, "[")?;
        for (i, c) in cs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] @ GF({},{})", self.spec.p, self.spec.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> Arc<FieldSpec> {
        FieldSpec::get(p, m).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]); // x^2 + x + 1
        assert_eq!(gf(3, 2).modulus(), &[1, 0, 1]); // x^2 + 1
        assert_eq!(gf(2, 4).modulus(), &[1, 0, 0, 1, 1]); // x^4 + x^3 + 1
    }

    #[test]
    fn char_two_addition() {
        let f2 = gf(2, 1);
        assert_eq!(f2.add(1, 1), 0);
        assert_eq!(f2.inv(1).unwrap(), 1);
    }

    // oracle: multiply coordinate polynomials and reduce mod x^2 + x + 1 by hand
    #[test]
    fn f4_generator_square() {
        let f4 = gf(2, 2);
        let g = f4.gen_code(); // x, code 2
        // x * x = x^2 = x + 1 (mod x^2 + x + 1): coefficients (1, 1), code 3
        let oracle = {
            let prod = poly_mulmod(&[0, 1], &[0, 1], &[1, 1, 1], 2);
            f4.encode(&prod)
        };
        assert_eq!(oracle, 3);
        assert_eq!(f4.mul(g, g), oracle);
    }

    #[test]
    fn frobenius_basics() {
        let f4 = gf(2, 2);
        let g = f4.gen_code();
        // squaring oracle
        assert_eq!(f4.frobenius(g, 1), f4.mul(g, g));
        assert_eq!(f4.frobenius(g, 2), g);
        for a in 0..2 {
            assert_eq!(gf(2, 1).frobenius(a, 1), a);
        }
        let f81 = gf(3, 4);
        for a in 0..f81.q() {
            assert_eq!(f81.frobenius(a, 4), a);
        }
    }

    #[test]
    fn frobenius_is_ring_hom_and_bijective() {
        for (p, m) in [(2u64, 4u32), (3, 2), (5, 2)] {
            let f = gf(p, m);
            let mut seen = vec![false; f.q() as usize];
            for a in 0..f.q() {
                let fa = f.frobenius(a, 1);
                assert!(!seen[fa as usize]);
                seen[fa as usize] = true;
                for b in 0..f.q() {
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(fa, f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(fa, f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn frobenius_composes() {
        let f = gf(2, 4);
        for a in 0..f.q() {
            for s in 0..5u32 {
                for t in 0..5u32 {
                    assert_eq!(f.frobenius(f.frobenius(a, s), t), f.frobenius(a, s + t));
                }
            }
        }
    }

    #[test]
    fn subfield_degrees() {
        let f4 = gf(2, 2);
        assert_eq!(f4.subfield_degree(0), 1);
        assert_eq!(f4.subfield_degree(1), 1);
        assert_eq!(f4.subfield_degree(f4.gen_code()), 2);
        let f16 = gf(2, 4);
        let counts: Vec<u32> = (0..16).map(|a| f16.subfield_degree(a)).collect();
        // 2 elements of degree 1, 2 of degree 2, 12 of degree 4
        assert_eq!(counts.iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(counts.iter().filter(|&&d| d == 2).count(), 2);
        assert_eq!(counts.iter().filter(|&&d| d == 4).count(), 12);
    }

    #[test]
    fn embedding_injective_and_frobenius_equivariant() {
        for (ps, ms, mt) in [(2u64, 2u32, 4u32), (3, 1, 2), (2, 1, 4), (3, 2, 4)] {
            let src = gf(ps, ms);
            let dst = gf(ps, mt);
            let mut seen = std::collections::HashSet::new();
            for a in 0..src.q() {
                let ia = src.embed(a, &dst).unwrap();
                assert!(seen.insert(ia));
                for t in 1..=2u32 {
                    assert_eq!(
                        dst.frobenius(ia, t),
                        src.embed(src.frobenius(a, t), &dst).unwrap(),
                    );
                }
            }
            // ring homomorphism on a full pass
            for a in 0..src.q() {
                for b in 0..src.q() {
                    let ia = src.embed(a, &dst).unwrap();
                    let ib = src.embed(b, &dst).unwrap();
                    assert_eq!(src.embed(src.add(a, b), &dst).unwrap(), dst.add(ia, ib));
                    assert_eq!(src.embed(src.mul(a, b), &dst).unwrap(), dst.mul(ia, ib));
                }
            }
            assert_eq!(src.embed(1, &dst).unwrap(), 1);
        }
    }

    #[test]
    fn no_embedding_when_degree_does_not_divide() {
        let f4 = gf(2, 2);
        let f8 = gf(2, 3);
        let g = f4.gen_code();
        assert!(matches!(f4.embed(g, &f8), Err(Error::NoEmbedding { .. })));
        // prime-field elements embed anywhere
        assert_eq!(f4.embed(1, &f8).unwrap(), 1);
    }

    #[test]
    fn division_by_zero() {
        let f9 = gf(3, 2);
        assert!(matches!(f9.inv(0), Err(Error::DivisionByZero)));
        assert!(matches!(f9.div(5, 0), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mult_orders_in_f9() {
        let f9 = gf(3, 2);
        let orders: Vec<u64> = (1..9).map(|a| f9.mult_order(a).unwrap()).collect();
        // F_9^x is cyclic of order 8: phi(8) = 4 generators
        assert_eq!(orders.iter().filter(|&&o| o == 8).count(), 4);
        assert_eq!(orders.iter().filter(|&&o| o == 1).count(), 1);
        // the canonical order-8 root has the least code among generators
        let z8 = f9.root_of_unity(8).unwrap();
        assert_eq!(f9.mult_order(z8).unwrap(), 8);
        for a in 1..z8 {
            assert_ne!(f9.mult_order(a).unwrap(), 8);
        }
    }

    #[test]
    fn element_display_roundtrip() {
        let f8 = gf(2, 3);
        let e = FieldElement::from_coeffs(f8, &[1, 0, 1]).unwrap();
        assert_eq!(e.to_string(), "[1,0,1] @ GF(2,3)");
    }

    #[test]
    fn large_field_falls_back_without_tables() {
        let f = gf(2, 17); // beyond the table cap
        let g = f.gen_code();
        let gi = f.inv(g).unwrap();
        assert_eq!(f.mul(g, gi), 1);
        assert_eq!(f.frobenius(g, 17), g);
        assert!(f.enumerate().is_err());
    }
}
