//! Additive characters of V = GF(q)^n realized inside an auxiliary prime
//! field GF(l) with l = 1 (mod p), so every sum is exact.
//!
//! The character attached to a functional theta sends v to
//! omega^Trace(theta(v)), where omega has multiplicative order exactly p
//! in GF(l). Summing a character over a subspace W detects containment:
//! the sum is |W| when W lies inside Ker theta and 0 otherwise. Counting
//! functionals that vanish somewhere on K through that criterion
//! reproduces the incidence rank away from the defining characteristic
//! without touching the matrix.

use std::collections::BTreeSet;

use crate::geometry::{Functional, GeomConfig};
use crate::gf::{Field, FieldElement};
use crate::ksets::KSet;
use crate::util::{is_prime, powmod, prime_factors, SplitMix64};
use crate::{Error, Result};

/// Full closure check is quadratic; larger subspaces get sampled.
const FULL_CLOSURE_MAX: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct CharacterContext {
    p: u64,
    aux_prime: u64,
    omega: u64,
}

impl CharacterContext {
    /// Fix omega = g^((l-1)/p) for the smallest primitive root g of GF(l).
    pub fn new(p: u64, aux_prime: u64) -> Result<CharacterContext> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !is_prime(aux_prime) {
            return Err(Error::NotPrime(aux_prime));
        }
        if aux_prime % p != 1 {
            return Err(Error::InvalidArgument(format!(
                "auxiliary prime {aux_prime} is not 1 mod {p}"
            )));
        }
        let g = smallest_primitive_root(aux_prime)?;
        let omega = powmod(g, (aux_prime - 1) / p, aux_prime);
        debug_assert!(omega != 1 && powmod(omega, p, aux_prime) == 1);
        Ok(CharacterContext {
            p,
            aux_prime,
            omega,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn aux_prime(&self) -> u64 {
        self.aux_prime
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    fn check_field(&self, fld: &Field) -> Result<()> {
        if fld.p() as u64 != self.p {
            return Err(Error::InvalidArgument(format!(
                "character context is for characteristic {}, field has {}",
                self.p,
                fld.p()
            )));
        }
        Ok(())
    }

    /// omega^Trace(x) in GF(l).
    pub fn char_value(&self, fld: &Field, x: FieldElement) -> u64 {
        powmod(self.omega, fld.trace(x) as u64, self.aux_prime)
    }
}

pub fn smallest_primitive_root(l: u64) -> Result<u64> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if l == 2 {
        return Ok(1);
    }
    let factors = prime_factors(l - 1);
    'cand: for g in 2..l {
        for &r in &factors {
            if powmod(g, (l - 1) / r, l) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    unreachable!("every prime field has a generator")
}

/// All GF(q)-subspaces of V of dimension up to `max_dim` (at most 2),
/// each as its full, sorted vector list.
pub fn subspaces_up_to_dim(cfg: &GeomConfig, max_dim: usize) -> Result<Vec<Vec<Vec<FieldElement>>>> {
    if max_dim > 2 {
        return Err(Error::InvalidArgument(
            "subspace enumeration supports dimension at most 2".into(),
        ));
    }
    let mut out: BTreeSet<Vec<Vec<FieldElement>>> = BTreeSet::new();
    out.insert(vec![vec![0; cfg.n()]]);
    if max_dim >= 1 {
        let dirs = cfg.h_points();
        for u in &dirs {
            let mut w = cfg.span_vectors(&[u.coords().to_vec()]);
            w.sort_unstable();
            out.insert(w);
        }
        if max_dim >= 2 {
            for i in 0..dirs.len() {
                for j in i + 1..dirs.len() {
                    let mut w = cfg.span_vectors(&[
                        dirs[i].coords().to_vec(),
                        dirs[j].coords().to_vec(),
                    ]);
                    w.sort_unstable();
                    out.insert(w);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn validate_subspace(cfg: &GeomConfig, w: &[Vec<FieldElement>]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("a subspace is never empty".into()));
    }
    let q = cfg.q() as usize;
    let mut size = w.len();
    while size > 1 {
        if size % q != 0 {
            return Err(Error::InvalidArgument(format!(
                "|W| = {} is not a power of q = {q}",
                w.len()
            )));
        }
        size /= q;
    }
    let set: BTreeSet<&Vec<FieldElement>> = w.iter().collect();
    if set.len() != w.len() {
        return Err(Error::InvalidArgument("subspace list has duplicates".into()));
    }
    let closed = |a: &[FieldElement], b: &[FieldElement], t: FieldElement| -> bool {
        let v = cfg.add_vec(a, &cfg.scale_vec(t, b));
        set.contains(&v)
    };
    if w.len() <= FULL_CLOSURE_MAX {
        for a in w {
            for b in w {
                for t in cfg.fld().elements() {
                    if !closed(a, b, t) {
                        return Err(Error::InvalidArgument(
                            "vector list is not closed under the space operations".into(),
                        ));
                    }
                }
            }
        }
    } else {
        let mut rng = SplitMix64::new(w.len() as u64 ^ 0x57AC);
        for _ in 0..FULL_CLOSURE_MAX {
            let a = &w[rng.below(w.len() as u64) as usize];
            let b = &w[rng.below(w.len() as u64) as usize];
            let t = rng.below(cfg.q() as u64) as FieldElement;
            if !closed(a, b, t) {
                return Err(Error::InvalidArgument(
                    "vector list fails sampled closure checks".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Sum of omega^Trace(theta(w)) over the subspace W, in GF(l). Nonzero
/// exactly when W lies inside Ker theta, and then equal to |W| mod l.
pub fn subspace_char_sum(
    ctx: &CharacterContext,
    cfg: &GeomConfig,
    w: &[Vec<FieldElement>],
    theta: &Functional,
) -> Result<u64> {
    ctx.check_field(cfg.fld())?;
    validate_subspace(cfg, w)?;
    let l = ctx.aux_prime;
    let mut acc = 0u64;
    for v in w {
        acc = (acc + ctx.char_value(cfg.fld(), cfg.eval(theta, v))) % l;
    }
    Ok(acc)
}

/// Trace values theta takes on W: {0} when W is inside Ker theta,
/// otherwise all of GF(p).
pub fn trace_image(cfg: &GeomConfig, w: &[Vec<FieldElement>], theta: &Functional) -> BTreeSet<u32> {
    w.iter()
        .map(|v| cfg.fld().trace(cfg.eval(theta, v)))
        .collect()
}

/// Rank of the incidence matrix away from characteristic p, found by
/// counting functionals that vanish somewhere on K. The decision for each
/// (theta, u) pair is the character sum over the line GF(q)u: by
/// linearity that sum depends only on c = theta(u), so the q possible
/// sums are tabulated once and each is computed as an honest sum over
/// the subspace.
pub fn rank_via_characters(ctx: &CharacterContext, cfg: &GeomConfig, k: &KSet) -> Result<usize> {
    ctx.check_field(cfg.fld())?;
    k.check_geometry(cfg)?;
    if k.is_empty() {
        return Ok(0);
    }
    let fld = cfg.fld();
    let l = ctx.aux_prime;
    let q = fld.q();
    // sum over the one-dimensional subspace {t*u} of omega^Trace(theta(t u))
    // = sum over t of omega^Trace(t c); tabulate by c
    let line_sum: Vec<u64> = (0..q)
        .map(|c| {
            let mut acc = 0u64;
            for t in fld.elements() {
                acc = (acc + ctx.char_value(fld, fld.mul(t, c))) % l;
            }
            acc
        })
        .collect();
    debug_assert_eq!(line_sum[0], q as u64 % l);
    debug_assert!(line_sum[1..].iter().all(|&s| s == 0));
    let mut count = 0usize;
    let mut coeffs = vec![0 as FieldElement; cfg.n()];
    let total = (q as u64).pow(cfg.n() as u32);
    for step in 0..total {
        if step > 0 {
            let mut j = 0;
            loop {
                coeffs[j] += 1;
                if coeffs[j] < q {
                    break;
                }
                coeffs[j] = 0;
                j += 1;
            }
        }
        let theta = Functional {
            coeffs: coeffs.clone(),
        };
        let vanishes_somewhere = k
            .directions()
            .iter()
            .any(|u| line_sum[cfg.eval(&theta, u.coords()) as usize] != 0);
        if vanishes_somewhere {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ksets::{build_kset, KSet, KSpec};

    #[test]
    fn primitive_roots_are_the_classical_ones() {
        assert_eq!(smallest_primitive_root(3).unwrap(), 2);
        assert_eq!(smallest_primitive_root(5).unwrap(), 2);
        assert_eq!(smallest_primitive_root(7).unwrap(), 3);
        assert_eq!(smallest_primitive_root(11).unwrap(), 2);
        assert_eq!(smallest_primitive_root(13).unwrap(), 2);
        assert_eq!(smallest_primitive_root(29).unwrap(), 2);
        assert_eq!(smallest_primitive_root(31).unwrap(), 3);
        assert_eq!(smallest_primitive_root(43).unwrap(), 3);
        assert!(smallest_primitive_root(8).is_err());
    }

    #[test]
    fn contexts_pin_omega() {
        let ctx = CharacterContext::new(2, 3).unwrap();
        assert_eq!(ctx.omega(), 2);
        let ctx = CharacterContext::new(3, 7).unwrap();
        assert_eq!(ctx.omega(), 2);
        let ctx = CharacterContext::new(2, 5).unwrap();
        assert_eq!(ctx.omega(), 4);
        for (p, l) in [(2u64, 3u64), (2, 5), (3, 7), (3, 13), (5, 11), (7, 29)] {
            let ctx = CharacterContext::new(p, l).unwrap();
            assert_ne!(ctx.omega(), 1);
            assert_eq!(powmod(ctx.omega(), p, l), 1);
        }
    }

    #[test]
    fn context_rejects_mismatched_primes() {
        assert!(CharacterContext::new(5, 7).is_err()); // 7 = 2 mod 5
        assert!(CharacterContext::new(3, 5).is_err());
        assert!(CharacterContext::new(4, 5).is_err());
        assert!(CharacterContext::new(2, 9).is_err());
    }

    #[test]
    fn char_sum_examples_in_the_smallest_plane() {
        let ctx = CharacterContext::new(2, 3).unwrap();
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        let w = vec![vec![0, 0], vec![1, 0]];
        let s = subspace_char_sum(&ctx, &cfg, &w, &Functional { coeffs: vec![1, 0] }).unwrap();
        assert_eq!(s, 0, "W is not inside Ker");
        let s = subspace_char_sum(&ctx, &cfg, &w, &Functional { coeffs: vec![0, 1] }).unwrap();
        assert_eq!(s, 2, "|W| mod 3");
        let zero_space = vec![vec![0, 0]];
        let s =
            subspace_char_sum(&ctx, &cfg, &zero_space, &Functional { coeffs: vec![1, 1] }).unwrap();
        assert_eq!(s, 1);
    }

    #[test]
    fn char_sum_rejects_non_subspaces() {
        let ctx = CharacterContext::new(2, 3).unwrap();
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        let theta = Functional { coeffs: vec![1, 0] };
        for bad in [
            vec![],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            vec![vec![1, 0], vec![0, 1]],
        ] {
            assert!(
                subspace_char_sum(&ctx, &cfg, &bad, &theta).is_err(),
                "{bad:?} accepted"
            );
        }
    }

    #[test]
    fn subspace_enumeration_counts() {
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        // {0}, three lines, the plane
        assert_eq!(subspaces_up_to_dim(&cfg, 2).unwrap().len(), 5);
        let cfg = GeomConfig::new(2, 1, 3).unwrap();
        // {0}, 7 lines, 7 planes
        assert_eq!(subspaces_up_to_dim(&cfg, 2).unwrap().len(), 15);
        let cfg = GeomConfig::new(3, 1, 2).unwrap();
        assert_eq!(subspaces_up_to_dim(&cfg, 1).unwrap().len(), 5);
        assert!(subspaces_up_to_dim(&cfg, 3).is_err());
    }

    #[test]
    fn dichotomies_hold_exhaustively_in_one_geometry() {
        let ctx = CharacterContext::new(2, 3).unwrap();
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        for w in subspaces_up_to_dim(&cfg, 2).unwrap() {
            for theta in functionals(&cfg) {
                let inside_kernel = w.iter().all(|v| cfg.eval(&theta, v) == 0);
                let s = subspace_char_sum(&ctx, &cfg, &w, &theta).unwrap();
                if inside_kernel {
                    assert_eq!(s, w.len() as u64 % 3);
                } else {
                    assert_eq!(s, 0);
                }
                let traces = trace_image(&cfg, &w, &theta);
                if inside_kernel {
                    assert_eq!(traces.into_iter().collect::<Vec<_>>(), vec![0]);
                } else {
                    assert_eq!(traces.len(), 2, "all of GF(2)");
                }
            }
        }
    }

    fn functionals(cfg: &GeomConfig) -> Vec<Functional> {
        let q = cfg.q();
        let mut out = Vec::new();
        let mut coeffs = vec![0 as FieldElement; cfg.n()];
        let total = (q as u64).pow(cfg.n() as u32);
        for step in 0..total {
            if step > 0 {
                let mut j = 0;
                loop {
                    coeffs[j] += 1;
                    if coeffs[j] < q {
                        break;
                    }
                    coeffs[j] = 0;
                    j += 1;
                }
            }
            out.push(Functional {
                coeffs: coeffs.clone(),
            });
        }
        out
    }

    #[test]
    fn rank_via_characters_matches_dual_zero_count() {
        let ctx = CharacterContext::new(2, 3).unwrap();
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        let k = build_kset(&cfg, &KSpec::parse("line:1,0").unwrap()).unwrap();
        assert_eq!(rank_via_characters(&ctx, &cfg, &k).unwrap(), 2);

        for spec in ["full", "rnc", "random:2:99"] {
            let cfg = GeomConfig::new(3, 1, 2).unwrap();
            let ctx = CharacterContext::new(3, 7).unwrap();
            let k = build_kset(&cfg, &KSpec::parse(spec).unwrap()).unwrap();
            assert_eq!(
                rank_via_characters(&ctx, &cfg, &k).unwrap(),
                cfg.dual_zero_count(&k),
                "spec {spec}"
            );
        }

        let cfg = GeomConfig::new(2, 2, 3).unwrap();
        let ctx = CharacterContext::new(2, 5).unwrap();
        let k = build_kset(&cfg, &KSpec::Hyperoval).unwrap();
        assert_eq!(rank_via_characters(&ctx, &cfg, &k).unwrap(), 46);

        let empty = KSet::from_points(&cfg, vec![], "file");
        assert_eq!(rank_via_characters(&ctx, &cfg, &empty).unwrap(), 0);
    }

    #[test]
    fn rank_via_characters_rejects_wrong_characteristic() {
        let ctx = CharacterContext::new(3, 7).unwrap();
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        let k = build_kset(&cfg, &KSpec::Full).unwrap();
        assert!(rank_via_characters(&ctx, &cfg, &k).is_err());
    }
}
