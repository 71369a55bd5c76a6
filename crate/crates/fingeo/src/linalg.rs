//! Exact rank and kernel computation, modulo a prime and over the integers.
//!
//! Modular work goes through [`GfSpan`], an incremental echelon basis that
//! lets callers stream vectors in and stop as soon as the span is full.
//! Characteristic-zero ranks use fraction-free Bareiss elimination in `i128`
//! with checked arithmetic, restarting in big integers when a product would
//! overflow, and fall back to a multi-prime modular bound for matrices too
//! large for either.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::incidence::{Orientation, SparseIncidence};
use crate::util::{is_prime, powmod};
use crate::{Error, Result};

/// Largest modulus for which axpy scaling goes through a lookup table.
const SCALE_TABLE_MAX: u64 = 4096;

fn modinv(a: u64, l: u64) -> u64 {
    debug_assert!(a % l != 0);
    powmod(a % l, l - 2, l)
}

#[inline]
fn sub_mod(a: u64, b: u64, l: u64) -> u64 {
    let t = a + l - b;
    if t >= l {
        t - l
    } else {
        t
    }
}

/// Growing echelon basis over GF(l). Rows are normalized to a leading 1 and
/// kept sorted by leading position, so insertion order never changes the
/// final dimension.
pub struct GfSpan {
    modulus: u64,
    width: usize,
    basis: Vec<Vec<u64>>,
    leads: Vec<usize>,
    scratch: Vec<u64>,
    scale_tab: Vec<u64>,
}

impl GfSpan {
    pub fn new(modulus: u64, width: usize) -> Result<GfSpan> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        if modulus >= (1 << 31) {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus} too large for span arithmetic"
            )));
        }
        Ok(GfSpan {
            modulus,
            width,
            basis: Vec::new(),
            leads: Vec::new(),
            scratch: vec![0; width],
            scale_tab: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Span covers all of GF(l)^width; no further vector can grow it.
    pub fn is_complete(&self) -> bool {
        self.basis.len() == self.width
    }

    fn load(&mut self, v: &[i64]) {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let l = self.modulus as i64;
        for (dst, &x) in self.scratch.iter_mut().zip(v) {
            *dst = x.rem_euclid(l) as u64;
        }
    }

    fn load_sparse(&mut self, support: &[usize]) {
        self.scratch.fill(0);
        for &i in support {
            assert!(i < self.width, "support index out of range");
            self.scratch[i] = 1;
        }
    }

    /// Subtract `f` times basis row `idx` from scratch, zeroing its lead.
    fn eliminate(&mut self, idx: usize, f: u64) {
        let l = self.modulus;
        let lead = self.leads[idx];
        let row = &self.basis[idx];
        let tail = self.width - lead;
        if l <= SCALE_TABLE_MAX && tail as u64 > l {
            if self.scale_tab.len() != l as usize {
                self.scale_tab.resize(l as usize, 0);
            }
            let mut acc = 0u64;
            for slot in self.scale_tab.iter_mut() {
                *slot = acc;
                acc += f;
                if acc >= l {
                    acc -= l;
                }
            }
            for (dst, &b) in self.scratch[lead..].iter_mut().zip(&row[lead..]) {
                *dst = sub_mod(*dst, self.scale_tab[b as usize], l);
            }
        } else {
            for (dst, &b) in self.scratch[lead..].iter_mut().zip(&row[lead..]) {
                *dst = sub_mod(*dst, (f * b) % l, l);
            }
        }
    }

    fn reduce_scratch(&mut self) {
        for idx in 0..self.basis.len() {
            let f = self.scratch[self.leads[idx]];
            if f != 0 {
                self.eliminate(idx, f);
            }
        }
    }

    /// After reduction, absorb a nonzero remainder as a new basis row.
    /// Returns true when the dimension grew.
    fn absorb(&mut self) -> bool {
        let Some(lead) = self.scratch.iter().position(|&x| x != 0) else {
            return false;
        };
        let l = self.modulus;
        let inv = modinv(self.scratch[lead], l);
        let mut row = vec![0u64; self.width];
        for (dst, &x) in row[lead..].iter_mut().zip(&self.scratch[lead..]) {
            *dst = (x * inv) % l;
        }
        let pos = self.leads.partition_point(|&x| x < lead);
        self.leads.insert(pos, lead);
        self.basis.insert(pos, row);
        true
    }

    pub fn insert(&mut self, v: &[i64]) -> bool {
        if self.is_complete() {
            return false;
        }
        self.load(v);
        self.reduce_scratch();
        self.absorb()
    }

    /// Insert a 0/1 vector given by the positions of its ones.
    pub fn insert_sparse(&mut self, support: &[usize]) -> bool {
        if self.is_complete() {
            return false;
        }
        self.load_sparse(support);
        self.reduce_scratch();
        self.absorb()
    }

    pub fn contains(&mut self, v: &[i64]) -> bool {
        if self.is_complete() {
            return true;
        }
        self.load(v);
        self.reduce_scratch();
        self.scratch.iter().all(|&x| x == 0)
    }
}

/// Rank of the oriented incidence matrix mod `l`, by streaming its columns.
/// Stops early once the column span fills the row space.
pub fn rank_mod_incidence(inc: &SparseIncidence, orient: Orientation, l: u64) -> Result<usize> {
    let (height, cols): (usize, Box<dyn Iterator<Item = &Vec<usize>>>) = match orient {
        Orientation::N => (inc.n_rows(), Box::new(inc.cols().iter())),
        Orientation::Nt => (inc.n_cols(), Box::new(inc.rows().iter())),
    };
    let mut span = GfSpan::new(l, height)?;
    for col in cols {
        span.insert_sparse(col);
        if span.is_complete() {
            break;
        }
    }
    Ok(span.dim())
}

pub fn rank_mod_dense(rows: &[Vec<i64>], l: u64) -> Result<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut span = GfSpan::new(l, width)?;
    for row in rows {
        span.insert(row);
        if span.is_complete() {
            break;
        }
    }
    Ok(span.dim())
}

/// Reduced row echelon form in place; returns the pivot columns.
/// Deterministic: first nonzero row is the pivot, entries land in [0, l).
fn rref_mod(m: &mut [Vec<u64>], l: u64) -> Vec<usize> {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| m[i][c] % l != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = modinv(m[r][c], l);
        for x in m[r][c..].iter_mut() {
            *x = (*x % l) * inv % l;
        }
        for i in 0..n_rows {
            if i == r {
                continue;
            }
            let f = m[i][c] % l;
            if f == 0 {
                continue;
            }
            let (head, tail) = m.split_at_mut(r.max(i));
            let (pivot_row, target) = if i < r {
                (&tail[0], &mut head[i])
            } else {
                (&head[r], &mut tail[0])
            };
            for (t, &p) in target[c..].iter_mut().zip(&pivot_row[c..]) {
                *t = sub_mod(*t % l, f * p % l, l);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of { x : M x = 0 } over GF(l), one vector per free column of M,
/// in ascending free-column order. Callers treating M's rows as checks get
/// the code's basis directly.
pub fn kernel_basis_mod(rows: &[Vec<i64>], n_cols: usize, l: u64) -> Result<Vec<Vec<u64>>> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n_cols, "row width mismatch");
            row.iter()
                .map(|&x| x.rem_euclid(l as i64) as u64)
                .collect()
        })
        .collect();
    let pivots = rref_mod(&mut m, l);
    let mut is_pivot = vec![false; n_cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(n_cols - pivots.len());
    for f in 0..n_cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![0u64; n_cols];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = (l - m[i][f] % l) % l;
        }
        basis.push(v);
    }
    Ok(basis)
}

pub fn kernel_basis_mod_incidence(
    inc: &SparseIncidence,
    orient: Orientation,
    l: u64,
) -> Result<Vec<Vec<u64>>> {
    let dense = inc.to_dense(orient);
    let n_cols = match orient {
        Orientation::N => inc.n_cols(),
        Orientation::Nt => inc.n_rows(),
    };
    kernel_basis_mod(&dense, n_cols, l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    /// Modular elimination; exact for the stated characteristic.
    Elimination,
    /// Fraction-free integer elimination in machine words.
    Bareiss,
    /// Fraction-free integer elimination in big integers.
    BareissBig,
    /// Maximum of ranks modulo several primes; a lower bound on the
    /// rational rank, certified only by external agreement.
    Multiprime,
}

#[derive(Clone, Debug)]
pub struct RankReport {
    pub characteristic: u64,
    pub rank: usize,
    pub method: RankMethod,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct Char0Opts {
    /// Largest min-dimension attempted with fraction-free elimination.
    pub bareiss_cutoff: usize,
    /// Prime to leave out of the multi-prime fallback.
    pub avoid_prime: Option<u64>,
    /// Independently predicted rank; a multi-prime result is certified
    /// only when it matches this.
    pub expected_rank: Option<usize>,
}

impl Default for Char0Opts {
    fn default() -> Self {
        Char0Opts {
            bareiss_cutoff: 512,
            avoid_prime: None,
            expected_rank: None,
        }
    }
}

/// One-step fraction-free elimination; every intermediate entry is a minor
/// of the input, so checked arithmetic detects exactly the cases where the
/// minors outgrow i128. Returns None on overflow.
fn bareiss_rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let pivot = m[r][c];
        for i in r + 1..n_rows {
            for j in c + 1..n_cols {
                let a = pivot.checked_mul(m[i][j])?;
                let b = m[i][c].checked_mul(m[r][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_bigint(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let pivot = m[r][c].clone();
        for i in r + 1..n_rows {
            let head = m[i][c].clone();
            for j in c + 1..n_cols {
                let t = &pivot * &m[i][j] - &head * &m[r][j];
                m[i][j] = t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

fn multiprime_primes(avoid: Option<u64>) -> Vec<u64> {
    let mut out = Vec::new();
    let mut cand = 2u64;
    while out.len() < 3 {
        if is_prime(cand) && Some(cand) != avoid {
            out.push(cand);
        }
        cand += 1;
    }
    out
}

/// Rank over the rationals. Fraction-free elimination when the matrix is
/// small enough to finish exactly; otherwise the best modular lower bound.
pub fn rank_char0_dense(rows: &[Vec<i64>], opts: &Char0Opts) -> Result<RankReport> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, |r| r.len());
    let min_dim = n_rows.min(n_cols);
    if min_dim <= opts.bareiss_cutoff {
        let copy: Vec<Vec<i128>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        if let Some(rank) = bareiss_rank_i128(copy) {
            return Ok(RankReport {
                characteristic: 0,
                rank,
                method: RankMethod::Bareiss,
                certified: true,
            });
        }
        if min_dim <= 128 {
            return Ok(RankReport {
                characteristic: 0,
                rank: bareiss_rank_bigint(rows),
                method: RankMethod::BareissBig,
                certified: true,
            });
        }
    }
    let mut best = 0;
    let mut all_agree = true;
    let mut first = None;
    for l in multiprime_primes(opts.avoid_prime) {
        let r = rank_mod_dense(rows, l)?;
        if *first.get_or_insert(r) != r {
            all_agree = false;
        }
        best = best.max(r);
    }
    Ok(RankReport {
        characteristic: 0,
        rank: best,
        method: RankMethod::Multiprime,
        certified: all_agree && opts.expected_rank == Some(best),
    })
}

pub fn rank_char0_incidence(
    inc: &SparseIncidence,
    orient: Orientation,
    opts: &Char0Opts,
) -> Result<RankReport> {
    let dense = inc.to_dense(orient);
    rank_char0_dense(&dense, opts)
}

/// Integer basis of the rational kernel of M: each RREF basis vector is
/// cleared of denominators and divided by its content, first nonzero entry
/// positive. Exact at any size, so only use on matrices that fit in memory.
pub fn kernel_basis_char0(rows: &[Vec<i64>], n_cols: usize) -> Result<Vec<Vec<i64>>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n_cols, "row width mismatch");
            row.iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect()
        })
        .collect();
    let n_rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for x in m[r][c..].iter_mut() {
            *x /= &inv;
        }
        for i in 0..n_rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let (head, tail) = m.split_at_mut(r.max(i));
            let (pivot_row, target) = if i < r {
                (&tail[0], &mut head[i])
            } else {
                (&head[r], &mut tail[0])
            };
            for (t, p) in target[c..].iter_mut().zip(&pivot_row[c..]) {
                *t -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; n_cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in 0..n_cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![BigRational::zero(); n_cols];
        v[f] = BigRational::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -m[i][f].clone();
        }
        basis.push(rational_to_primitive(&v)?);
    }
    Ok(basis)
}

fn rational_to_primitive(v: &[BigRational]) -> Result<Vec<i64>> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.clone());
    }
    if !g.is_zero() && !g.is_one() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints.into_iter()
        .map(|x| {
            i64::try_from(&x).map_err(|_| {
                Error::InvalidArgument("kernel vector entry exceeds 64 bits".into())
            })
        })
        .collect()
}
