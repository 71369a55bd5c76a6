//! The moment-curve specialization: K = {(1 : u : ... : u^(n-1))}.
//!
//! For this K the rank of the incidence matrix away from the defining
//! characteristic has a closed form, and the co-rank counts polynomials of
//! degree below n with no root in GF(q). Both are checked here against a
//! brute-force root search, giving three independent computations of the
//! same number.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::geometry::GeomConfig;
use crate::gf::Field;
use crate::incidence::{build_incidence, Orientation, SparseIncidence};
use crate::ksets::{build_kset, KSpec};
use crate::linalg::rank_mod_incidence;
use crate::util::is_prime;
use crate::{Error, Result};

pub const DEFAULT_POLY_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct WengerReport {
    pub n: usize,
    pub q: u32,
    pub matrix_rank: usize,
    pub formula_rank: u128,
    pub rootless_count: u64,
    pub consistent: bool,
    /// Dimension of the line-indexed kernel code, |L| - rank. Reported as
    /// a labeled quantity only; no closed form is asserted for it.
    pub dim_c: usize,
}

/// Count coefficient vectors (c_1, ..., c_n) whose polynomial
/// c_1 + c_2 X + ... + c_n X^(n-1) has no root in the field. The zero
/// polynomial vanishes everywhere, so it is never counted.
pub fn rootless_poly_count(fld: &Field, n: usize, budget: u64) -> Result<u64> {
    let q = fld.q() as u64;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("q^n = {q}^{n} polynomials exceed budget {budget}"))
        })?;
    let elements: Vec<_> = fld.elements().collect();
    let mut coeffs = vec![0u32; n];
    let mut count = 0u64;
    for step in 0..total {
        if step > 0 {
            let mut j = 0;
            loop {
                coeffs[j] += 1;
                if (coeffs[j] as u64) < q {
                    break;
                }
                coeffs[j] = 0;
                j += 1;
            }
        }
        let mut rootless = true;
        for &t in &elements {
            let mut acc = 0u32;
            for &c in coeffs.iter().rev() {
                acc = fld.add(fld.mul(acc, t), c);
            }
            if acc == 0 {
                rootless = false;
                break;
            }
        }
        if rootless {
            count += 1;
        }
    }
    Ok(count)
}

fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// q^n minus (q-1) times the double sum over d < n, k <= d of
/// (-1)^k binom(q,k) q^(d-k), evaluated exactly.
pub fn wenger_rank_formula(n: usize, q: u64) -> Result<u128> {
    let big_q = BigInt::from(q);
    let mut inner_total = BigInt::zero();
    for d in 0..n as u64 {
        for k in 0..=d {
            let term = big_binomial(q, k) * big_q.pow((d - k) as u32);
            if k % 2 == 0 {
                inner_total += term;
            } else {
                inner_total -= term;
            }
        }
    }
    let rank = big_q.pow(n as u32) - BigInt::from(q - 1) * inner_total;
    u128::try_from(&rank)
        .map_err(|_| Error::InvalidArgument(format!("rank for n={n}, q={q} exceeds 128 bits")))
}

/// Build the moment-curve geometry and compare the matrix rank over GF(l)
/// with the closed form and the brute-force root count.
pub fn wenger_verify(n: usize, p: u64, e: u32, l: u64) -> Result<WengerReport> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if l == p {
        return Err(Error::InvalidArgument(format!(
            "rank comparison needs a coefficient prime different from the field characteristic {p}"
        )));
    }
    let cfg = GeomConfig::new(p, e, n)?;
    let k = build_kset(&cfg, &KSpec::Rnc)?;
    let inc = build_incidence(&cfg, &k)?;
    let matrix_rank = rank_mod_incidence(&inc, Orientation::N, l)?;
    let rootless_count = rootless_poly_count(cfg.fld(), n, DEFAULT_POLY_BUDGET)?;
    let formula_rank = wenger_rank_formula(n, cfg.q() as u64)?;
    let brute_rank = cfg.num_points() as u128 - rootless_count as u128;
    Ok(WengerReport {
        n,
        q: cfg.q(),
        matrix_rank,
        formula_rank,
        rootless_count,
        consistent: matrix_rank as u128 == formula_rank && formula_rank == brute_rank,
        dim_c: inc.n_cols() - matrix_rank,
    })
}

/// Edge list of the bipartite point-line graph: one `i j` pair per
/// incidence, points numbered 0..q^n-1 and lines q^n..q^n+|L|-1, ordered
/// by point then line.
pub fn write_edge_list<W: Write>(inc: &SparseIncidence, w: &mut W) -> Result<()> {
    let offset = inc.n_rows();
    for (point, lines) in inc.rows().iter().enumerate() {
        for &line in lines {
            writeln!(w, "{} {}", point, offset + line)?;
        }
    }
    Ok(())
}

pub fn edge_list_string(inc: &SparseIncidence) -> String {
    let mut buf = Vec::new();
    write_edge_list(inc, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("edge list is ascii")
}
