//! Arithmetic in GF(p^e).
//!
//! Elements are canonical indices in `[0, q)`: the element with polynomial
//! coordinates `(a_0, ..., a_{e-1})` over GF(p) has index `sum a_i p^i`.
//! The modulus is pinned deterministically: the monic irreducible of degree
//! `e` whose coefficient tuple `(c_0, c_1, ..., c_{e-1})`, read from the
//! constant term up, is lexicographically smallest. Multiplication and
//! inversion go through discrete log tables built from the smallest
//! generator, so fields are capped at `q <= 2^16`.

use crate::util::{is_prime, prime_factors};
use crate::{Error, Result};

pub type FieldElement = u32;

pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_tab: Vec<u32>,
}

impl Field {
    pub fn new(p: u64, e: u32) -> Result<Field> {
        Field::with_budget(p, e, MAX_FIELD_SIZE)
    }

    /// `budget` lowers the size cap; the hard table limit `2^16` still applies.
    pub fn with_budget(p: u64, e: u32, budget: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let cap = budget.min(MAX_FIELD_SIZE);
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.saturating_mul(p);
            if q > cap {
                return Err(Error::FieldTooLarge(q, cap));
            }
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = smallest_irreducible(p, e);
        let mut fld = Field {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            trace_tab: Vec::new(),
        };
        fld.build_log_tables();
        fld.build_trace_table();
        Ok(fld)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, length `e + 1`, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        0..self.q
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let mut out = 0u32;
        let (mut a, mut b) = (a, b);
        let mut shift = 1u32;
        while a != 0 || b != 0 {
            let s = a % self.p + b % self.p;
            out += (if s >= self.p { s - self.p } else { s }) * shift;
            a /= self.p;
            b /= self.p;
            shift *= self.p;
        }
        out
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut out = 0u32;
        let mut a = a;
        let mut shift = 1u32;
        while a != 0 {
            let d = a % self.p;
            out += (if d == 0 { 0 } else { self.p - d }) * shift;
            a /= self.p;
            shift *= self.p;
        }
        out
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let g = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= g { s - g } else { s }) as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        debug_assert!(a < self.q);
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let g = self.q - 1;
        let l = self.log[a as usize];
        Ok(self.exp[(if l == 0 { 0 } else { g - l }) as usize])
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        debug_assert!(a < self.q);
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let g = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (k % g)) % g) as usize]
    }

    /// Trace down to the prime subfield: `x + x^p + ... + x^(p^(e-1))`,
    /// returned as an integer in `[0, p)`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        debug_assert!(a < self.q);
        self.trace_tab[a as usize]
    }

    /// Canonical ring map from the integers: `m -> (m mod p) * 1`.
    pub fn from_int(&self, m: i64) -> FieldElement {
        let p = self.p as i64;
        (((m % p) + p) % p) as u32
    }

    /// Multiplication by direct polynomial convolution and reduction.
    /// Used to bootstrap the log tables; `mul` is the fast path.
    fn poly_mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let av = self.digits(a);
        let bv = self.digits(b);
        let mut prod = vec![0u64; av.len() + bv.len()];
        for (i, &x) in av.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in bv.iter().enumerate() {
                prod[i + j] += (x as u64) * (y as u64);
            }
        }
        let p = self.p as u64;
        let e = self.e as usize;
        // reduce modulo the monic modulus, high degree down
        for d in (e..prod.len()).rev() {
            let c = prod[d] % p;
            if c != 0 {
                for i in 0..e {
                    let m = self.modulus[i] as u64;
                    if m != 0 {
                        // subtract c * m * x^(d-e+i); add (p - cm mod p) to stay unsigned
                        prod[d - e + i] += (p - c * m % p) % p;
                    }
                }
            }
            prod[d] = 0;
        }
        let mut out = 0u32;
        let mut shift = 1u32;
        for item in prod.iter().take(e) {
            out += ((item % p) as u32) * shift;
            shift *= self.p;
        }
        out
    }

    fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut v = vec![0u32; self.e as usize];
        let mut a = a;
        for d in v.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        v
    }

    fn poly_pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut acc = 1u32;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let g = if q == 2 { 1 } else { self.find_generator() };
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) {
            exp.push(x);
            log[x as usize] = i;
            x = self.poly_mul(x, g);
        }
        debug_assert_eq!(x, 1, "generator order must be q-1");
        self.exp = exp;
        self.log = log;
    }

    fn find_generator(&self) -> FieldElement {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        for cand in 2..self.q {
            if factors
                .iter()
                .all(|&r| self.poly_pow(cand, order / r) != 1)
            {
                return cand;
            }
        }
        unreachable!("every finite field has a generator");
    }

    fn build_trace_table(&mut self) {
        let mut tab = vec![0u32; self.q as usize];
        for a in 0..self.q {
            let mut acc = a;
            let mut t = a;
            for _ in 1..self.e {
                t = self.pow(t, self.p as u64);
                acc = self.add(acc, t);
            }
            debug_assert!(acc < self.p, "trace must land in the prime subfield");
            tab[a as usize] = acc;
        }
        self.trace_tab = tab;
    }
}

/// Lexicographically smallest monic irreducible of degree `e` over GF(p),
/// comparing coefficient tuples `(c_0, ..., c_{e-1})` constant term first.
/// Returned constant-term-first with the leading 1 included.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let total = (p as u64).pow(e as u32);
    for m in 0..total {
        // decode m so that c_0 is the most significant comparison digit
        let mut coeffs = vec![0u32; e + 1];
        coeffs[e] = 1;
        let mut rest = m;
        for i in (0..e).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for m in 0..count {
            let mut g = vec![0u32; d + 1];
            g[d] = 1;
            let mut rest = m;
            for c in g.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let p = p as u64;
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    for d in (dg..r.len()).rev() {
        let c = r[d] % p;
        if c != 0 {
            for i in 0..=dg {
                let gi = g[i] as u64;
                if gi != 0 {
                    r[d - dg + i] += p * p - c * gi % p;
                }
            }
        }
        r[d] = 0;
    }
    r.iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(1, 1), Err(Error::NotPrime(1))));
        assert!(Field::new(2, 0).is_err());
        assert!(matches!(Field::new(2, 17), Err(Error::FieldTooLarge(..))));
        assert!(Field::with_budget(2, 5, 16).is_err());
        assert!(Field::with_budget(2, 4, 16).is_ok());
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 2);
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
    }

    // Oracle: enumerate all monic quadratics over GF(3) in the pinned order
    // and keep the first with no root; a rootless quadratic is irreducible.
    #[test]
    fn gf9_modulus_matches_enumeration_oracle() {
        let mut expected = None;
        'outer: for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (c0 + c1 * x + x * x) % 3 == 0);
                if !has_root {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus(), expected.unwrap().as_slice());
        assert_eq!(f.modulus(), &[1, 0, 1]); // x^2 + 1
    }

    #[test]
    fn gf4_and_gf8_moduli() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]); // x^2+x+1
        // first in (c0,c1,c2) order is x^3+x^2+1, not the more common x^3+x+1
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
            let f = Field::new(p, e).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "inv in q={q}");
                    assert_eq!(f.pow(a, (q - 1) as u64), 1, "order in q={q}");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), f.poly_mul(a, b), "log table vs direct");
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity in q={q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn zero_inverse_errors() {
        let f = Field::new(5, 1).unwrap();
        assert!(matches!(f.inv(0), Err(Error::ZeroInverse)));
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = Field::new(3, 2).unwrap();
        for a in 0..f.q() {
            assert_eq!(f.pow(a, 9), a); // x^(q) = x
        }
        for a in 0..3 {
            assert_eq!(f.pow(a, 3), a); // prime subfield is fixed by x -> x^p
        }
    }

    #[test]
    fn trace_gf4_kernel_size() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.trace(0), 0);
        let zeros = (0..4).filter(|&a| f.trace(a) == 0).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn trace_is_additive_frobenius_invariant_and_onto() {
        for (p, e) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
            let f = Field::new(p, e).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.trace(f.pow(a, p as u64)), f.trace(a));
                for b in 0..q {
                    assert_eq!(
                        f.trace(f.add(a, b)),
                        (f.trace(a) + f.trace(b)) % p as u32
                    );
                }
            }
            let image: std::collections::BTreeSet<u32> = (0..q).map(|a| f.trace(a)).collect();
            assert_eq!(image.len() as u32, p as u32, "trace onto GF(p) for p^e={q}");
            // each fiber has q/p elements
            let zeros = (0..q).filter(|&a| f.trace(a) == 0).count();
            assert_eq!(zeros as u32, q / p as u32);
        }
    }

    #[test]
    fn from_int_wraps_mod_p() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.from_int(7), 2);
        assert_eq!(f.from_int(-1), 4);
        assert_eq!(f.from_int(-5), 0);
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.from_int(-1), 2); // lands in the prime subfield
        assert_eq!(f.from_int(3), 0);
    }

    #[test]
    fn pow_edge_cases() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.pow(0, 0), 1); // empty product convention
        assert_eq!(f.pow(0, 5), 0);
        assert_eq!(f.pow(3, 1), 3);
    }

    #[test]
    fn largest_table_field_builds() {
        let f = Field::new(2, 16).unwrap();
        assert_eq!(f.q(), 65536);
        let a = 0x1234u32;
        let b = 0xBEEFu32;
        assert_eq!(f.mul(a, b), f.poly_mul(a, b));
        assert_eq!(f.mul(f.inv(a).unwrap(), a), 1);
    }
}
