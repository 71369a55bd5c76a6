//! Whole-grid invariant sweep. Nine independent criteria cover rank
//! agreement, the hyperoval and Wenger special cases, spanning families,
//! word contracts, minimum-weight floors, characteristic-p behavior,
//! character-sum dichotomies, and decoding guarantees. Each criterion
//! reports its own pass/fail, check count, and runtime; `run_all` shares
//! one rank cache across criteria so no matrix is eliminated twice.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::characters::{
    rank_via_characters, subspace_char_sum, subspaces_up_to_dim, trace_image, CharacterContext,
};
use crate::codes::{
    hexagon_example, octagon_example, CodesCtx, Codeword, Domain, MinWeightMethod,
    DEFAULT_ENUM_BUDGET,
};
use crate::decoder::{CodeSel, Decoder};
use crate::geometry::{Functional, GeomConfig};
use crate::incidence::{build_incidence, Orientation};
use crate::ksets::{build_kset, KSet, KSpec, LineSpec};
use crate::linalg::{rank_char0_incidence, rank_mod_incidence, Char0Opts};
use crate::util::{binomial, combinations, is_prime, parallel_chunks, SplitMix64};
use crate::wenger::wenger_verify;
use crate::Result;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest field size admitted to the grid.
    pub max_q: u32,
    /// Largest ambient dimension admitted to the grid.
    pub max_n: usize,
    /// Seed from which every random K-set in the sweep is derived.
    pub seed: u64,
    pub random_per_geometry: usize,
    /// State budget for exhaustive codeword enumeration.
    pub budget: u64,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_q: 9,
            max_n: 4,
            seed: 2024,
            random_per_geometry: 20,
            budget: DEFAULT_ENUM_BUDGET,
            threads: std::thread::available_parallelism().map_or(1, |t| t.get().min(8)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: u64,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
}

/// Failure accumulator: counts every elementary assertion and keeps the
/// first failure message verbatim.
struct Tally {
    checks: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            checks: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self, id: u32, name: &str, note: String, started: Instant) -> CriterionOutcome {
        let seconds = started.elapsed().as_secs_f64();
        let detail = match self.first {
            Some(msg) => msg,
            None if self.checks == 0 => "no grid cases at these limits".to_string(),
            None => note,
        };
        CriterionOutcome {
            id,
            name: name.to_string(),
            passed: self.failures == 0,
            checks: self.checks,
            failures: self.failures,
            detail,
            seconds,
        }
    }
}

type RankKey = (u64, u32, usize, Vec<Vec<u32>>, u64);

fn rank_key(cfg: &GeomConfig, k: &KSet, l: u64) -> RankKey {
    let id = cfg.id();
    let dirs = k.directions().iter().map(|d| d.coords().to_vec()).collect();
    (id.p as u64, id.e, id.n, dirs, l)
}

/// Memoized modular ranks of incidence matrices, keyed by geometry,
/// direction set, and modulus. Shared across criteria by `run_all`.
#[derive(Default)]
pub struct RankCache {
    map: HashMap<RankKey, usize>,
}

impl RankCache {
    pub fn new() -> RankCache {
        RankCache::default()
    }

    pub fn rank_mod(&mut self, cfg: &GeomConfig, k: &KSet, l: u64) -> Result<usize> {
        let key = rank_key(cfg, k, l);
        if let Some(&r) = self.map.get(&key) {
            return Ok(r);
        }
        let inc = build_incidence(cfg, k)?;
        let r = rank_mod_incidence(&inc, Orientation::N, l)?;
        self.map.insert(key, r);
        Ok(r)
    }

    /// Computes every missing (K, modulus) rank, fanning out across
    /// worker threads when more than one is configured.
    pub fn ensure_many(
        &mut self,
        cfg: &GeomConfig,
        klist: &[KSet],
        primes: &[u64],
        threads: usize,
    ) -> Result<()> {
        let mut todo: Vec<(usize, u64)> = Vec::new();
        for (i, k) in klist.iter().enumerate() {
            for &l in primes {
                if !self.map.contains_key(&rank_key(cfg, k, l)) {
                    todo.push((i, l));
                }
            }
        }
        if todo.is_empty() {
            return Ok(());
        }
        let chunks = parallel_chunks(todo.len(), threads, |range| {
            range
                .map(|j| {
                    let (i, l) = todo[j];
                    let inc = build_incidence(cfg, &klist[i])?;
                    let r = rank_mod_incidence(&inc, Orientation::N, l)?;
                    Ok((rank_key(cfg, &klist[i], l), r))
                })
                .collect::<Result<Vec<_>>>()
        });
        for chunk in chunks {
            for (key, r) in chunk? {
                self.map.insert(key, r);
            }
        }
        Ok(())
    }
}

/// The two smallest primes ℓ ≠ p with ℓ ≡ 1 (mod p); such ℓ admit a
/// primitive p-th root of unity, so character ranks are defined.
pub fn aux_prime_pair(p: u64) -> [u64; 2] {
    let mut out = [0u64; 2];
    let mut found = 0;
    let mut l = 2u64;
    while found < 2 {
        if l != p && l % p == 1 && is_prime(l) {
            out[found] = l;
            found += 1;
        }
        l += 1;
    }
    out
}

fn smallest_other_prime(p: u64) -> u64 {
    if p == 2 {
        3
    } else {
        2
    }
}

/// First three primes different from p: independent moduli whose maximum
/// rank is a lower bound for the rational rank.
fn multiprime_triple(p: u64) -> [u64; 3] {
    let mut out = [0u64; 3];
    let mut found = 0;
    let mut l = 2u64;
    while found < 3 {
        if l != p && is_prime(l) {
            out[found] = l;
            found += 1;
        }
        l += 1;
    }
    out
}

/// The verification grid: q ∈ {2,3,4,5,7,8,9} × n ∈ {2,3}, plus n = 4
/// for q ∈ {2,3}, clipped by the configured limits.
pub fn grid_geometries(opts: &VerifyOptions) -> Vec<(u64, u32, usize)> {
    let fields: &[(u64, u32)] = &[(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)];
    let mut out = Vec::new();
    for &(p, e) in fields {
        let q = p.pow(e);
        if q > opts.max_q as u64 {
            continue;
        }
        for n in [2usize, 3] {
            if n <= opts.max_n {
                out.push((p, e, n));
            }
        }
        if q <= 3 && opts.max_n >= 4 {
            out.push((p, e, 4));
        }
    }
    out
}

fn geometry_mix(p: u64, e: u32, n: usize) -> u64 {
    p.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((e as u64) << 40) ^ ((n as u64) << 52)
}

/// Built-in K-sets (full, the canonical line, hyperoval where defined,
/// rational normal curve) plus the configured number of seeded random
/// nonempty direction sets.
pub fn grid_ksets(cfg: &GeomConfig, opts: &VerifyOptions) -> Result<Vec<KSet>> {
    let id = cfg.id();
    let q = cfg.q() as usize;
    let mut specs = vec![
        KSpec::Full,
        KSpec::Line(LineSpec::Prefix(q + 1)),
        KSpec::Rnc,
    ];
    if id.n == 3 && id.p == 2 {
        specs.push(KSpec::Hyperoval);
    }
    let mut rng = SplitMix64::new(opts.seed ^ geometry_mix(id.p as u64, id.e, id.n));
    for _ in 0..opts.random_per_geometry {
        let m = 1 + rng.below(cfg.num_h_points() as u64) as usize;
        let seed = rng.next_u64();
        specs.push(KSpec::Random { m, seed });
    }
    specs.iter().map(|s| build_kset(cfg, s)).collect()
}

fn grid_with_ksets(opts: &VerifyOptions) -> Result<Vec<(GeomConfig, Vec<KSet>)>> {
    grid_geometries(opts)
        .into_iter()
        .map(|(p, e, n)| {
            let cfg = GeomConfig::new(p, e, n)?;
            let klist = grid_ksets(&cfg, opts)?;
            Ok((cfg, klist))
        })
        .collect()
}

fn line_count(cfg: &GeomConfig, k: &KSet) -> usize {
    cfg.num_points() / cfg.q() as usize * k.len()
}

fn fits(l: u64, dim: usize, budget: u64) -> bool {
    u32::try_from(dim)
        .ok()
        .and_then(|d| (l as u128).checked_pow(d))
        .is_some_and(|t| t <= budget as u128)
}

/// Every functional, zero included; scalar multiples are not collapsed.
pub fn all_functionals(cfg: &GeomConfig) -> Vec<Functional> {
    let q = cfg.q();
    let n = cfg.n();
    let mut out = Vec::with_capacity((q as usize).pow(n as u32));
    let mut coeffs = vec![0u32; n];
    loop {
        out.push(Functional {
            coeffs: coeffs.clone(),
        });
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Criterion 1: modular rank, the closed form 1+(q−1)h_K, the dual zero
/// count, and the character-sum rank agree on every grid case, for both
/// admissible auxiliary primes.
pub fn criterion_1(opts: &VerifyOptions, cache: &mut RankCache) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    let grid = grid_with_ksets(opts)?;
    let mut ksets_seen = 0usize;
    for (cfg, klist) in &grid {
        let id = cfg.id();
        let q = cfg.q() as usize;
        let pair = aux_prime_pair(id.p as u64);
        cache.ensure_many(cfg, klist, &pair, opts.threads)?;
        let contexts = [
            CharacterContext::new(id.p as u64, pair[0])?,
            CharacterContext::new(id.p as u64, pair[1])?,
        ];
        for k in klist {
            ksets_seen += 1;
            let h_k = cfg.count_h_k(k);
            let expected = 1 + (q - 1) * h_k;
            let dual = cfg.dual_zero_count(k);
            tally.check(dual == expected, || {
                format!(
                    "dual zero count {dual} != 1+(q-1)h_K {expected} for {} on q={q} n={}",
                    k.tag(),
                    id.n
                )
            });
            for (ctx, &l) in contexts.iter().zip(&pair) {
                let rank = cache.rank_mod(cfg, k, l)?;
                tally.check(rank == expected, || {
                    format!(
                        "rank mod {l} is {rank}, closed form {expected}, K={} q={q} n={}",
                        k.tag(),
                        id.n
                    )
                });
                let chr = rank_via_characters(ctx, cfg, k)?;
                tally.check(chr == expected, || {
                    format!(
                        "character rank over {l} is {chr}, closed form {expected}, K={} q={q} n={}",
                        k.tag(),
                        id.n
                    )
                });
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    tally.check(elapsed < 120.0, || {
        format!("rank sweep took {elapsed:.1}s, budget is 120s")
    });
    let note = format!(
        "{} geometries, {} K-sets, {:.1}s",
        grid.len(),
        ksets_seen,
        elapsed
    );
    Ok(tally.finish(1, "rank agreement: matrix, closed form, duals, characters", note, started))
}

/// Criterion 2: hyperoval ranks over characteristic 3 equal
/// 1+(q−1)·C(q+2,2), that is 7, 46, 316, and removing any single point
/// of the hyperoval leaves the rank unchanged.
pub fn criterion_2(opts: &VerifyOptions, cache: &mut RankCache) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    let pinned: &[(u32, usize)] = &[(2, 7), (4, 46), (8, 316)];
    if opts.max_n >= 3 {
        for &(q, pinned_rank) in pinned {
            if q as u64 > opts.max_q as u64 {
                continue;
            }
            let e = q.trailing_zeros();
            let cfg = GeomConfig::new(2, e, 3)?;
            let k = build_kset(&cfg, &KSpec::Hyperoval)?;
            let formula = 1 + (q as u128 - 1) * binomial(q as u64 + 2, 2);
            tally.check(formula == pinned_rank as u128, || {
                format!("closed form 1+(q-1)C(q+2,2) gives {formula} for q={q}, pinned {pinned_rank}")
            });
            let rank = cache.rank_mod(&cfg, &k, 3)?;
            tally.check(rank == pinned_rank, || {
                format!("hyperoval rank mod 3 is {rank} for q={q}, expected {pinned_rank}")
            });
            for drop in 0..k.len() {
                let mut pts = k.directions().to_vec();
                pts.remove(drop);
                let sub = KSet::from_points(&cfg, pts, "hyperoval-minus-point");
                let sub_rank = cache.rank_mod(&cfg, &sub, 3)?;
                tally.check(sub_rank == rank, || {
                    format!(
                        "removing hyperoval point {drop} moved the rank {rank} -> {sub_rank} for q={q}"
                    )
                });
            }
        }
    }
    let note = format!("{:.1}s", started.elapsed().as_secs_f64());
    Ok(tally.finish(2, "hyperoval ranks and point-removal stability", note, started))
}

/// Criterion 3: matrix rank, the closed double-sum formula, and the
/// brute-force rootless polynomial count agree for the rational normal
/// curve geometries, with two pinned spot values.
pub fn criterion_3(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    for n in [2usize, 3, 4] {
        if n > opts.max_n {
            continue;
        }
        for q in [2u64, 3, 4, 5] {
            if q > opts.max_q as u64 {
                continue;
            }
            let (p, e) = crate::util::prime_power(q)?;
            let l = smallest_other_prime(p);
            let rep = wenger_verify(n, p, e, l)?;
            tally.check(rep.consistent, || {
                format!(
                    "rank {} vs formula {} vs q^n - rootless {} for n={n} q={q}",
                    rep.matrix_rank,
                    rep.formula_rank,
                    q.pow(n as u32) as u128 - rep.rootless_count as u128
                )
            });
        }
    }
    if opts.max_n >= 3 && opts.max_q >= 3 {
        let spot32 = wenger_verify(3, 2, 1, 3)?;
        tally.check(spot32.matrix_rank == 6, || {
            format!("pinned n=3 q=2 rank is {}, expected 6", spot32.matrix_rank)
        });
        let spot33 = wenger_verify(3, 3, 1, 2)?;
        tally.check(spot33.matrix_rank == 19, || {
            format!("pinned n=3 q=3 rank is {}, expected 19", spot33.matrix_rank)
        });
    }
    let note = format!("{:.1}s", started.elapsed().as_secs_f64());
    Ok(tally.finish(3, "wenger rank three-way consistency", note, started))
}

/// Criterion 4: over a characteristic coprime to q, the plane-word family
/// spans all of C and the capacitor family spans all of D, on every grid
/// case with at most 2000 lines.
pub fn criterion_4(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    let mut cases = 0usize;
    for (cfg, klist) in grid_with_ksets(opts)? {
        let id = cfg.id();
        let l = smallest_other_prime(id.p as u64);
        for k in &klist {
            if line_count(&cfg, k) > 2000 {
                continue;
            }
            cases += 1;
            let ctx = CodesCtx::new(&cfg, k)?;
            let plane_specs = ctx.enumerate_plane_specs();
            let planes = ctx.verify_spanning(
                Domain::LIndexed,
                l,
                plane_specs
                    .iter()
                    .map(|s| ctx.plane_word(s, l).expect("enumerated spec is valid")),
            )?;
            tally.check(planes.all_codewords && planes.spans(), || {
                format!(
                    "plane words span {} of dim C = {} (all_codewords={}) K={} q={} n={}",
                    planes.span_dim,
                    planes.code_dim,
                    planes.all_codewords,
                    k.tag(),
                    cfg.q(),
                    id.n
                )
            });
            let cap_specs = ctx.capacitor_family_specs();
            let caps = ctx.verify_spanning(
                Domain::PIndexed,
                l,
                cap_specs
                    .iter()
                    .map(|s| ctx.capacitor_word(s, l).expect("family spec is valid")),
            )?;
            tally.check(caps.all_codewords && caps.spans(), || {
                format!(
                    "capacitors span {} of dim D = {} (all_codewords={}) K={} q={} n={}",
                    caps.span_dim,
                    caps.code_dim,
                    caps.all_codewords,
                    k.tag(),
                    cfg.q(),
                    id.n
                )
            });
        }
    }
    let note = format!("{cases} cases, {:.1}s", started.elapsed().as_secs_f64());
    Ok(tally.finish(4, "plane and capacitor families span C and D", note, started))
}

/// Criterion 5: integer word contracts. Plane words weigh 2q and lie in
/// the kernel of N over ℤ; capacitor words weigh 2q^(n−1), flat capacitor
/// words 2q^d, both killed by N-transpose over ℤ; the hexagon and octagon
/// words verify at weights 6 and 8 for q ∈ {5,7}.
pub fn criterion_5(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    for (cfg, klist) in grid_with_ksets(opts)? {
        let id = cfg.id();
        let q = cfg.q() as u64;
        for k in &klist {
            let ctx = CodesCtx::new(&cfg, k)?;
            if line_count(&cfg, k) <= 2000 {
                for spec in ctx.enumerate_plane_specs() {
                    let w = ctx.plane_word(&spec, 0)?;
                    tally.check(w.weight() == 2 * q, || {
                        format!(
                            "plane word weight {} != 2q = {} (K={} q={q} n={})",
                            w.weight(),
                            2 * q,
                            k.tag(),
                            id.n
                        )
                    });
                    tally.check(ctx.is_codeword(&w)?, || {
                        format!("plane word not in ker N over Z (K={} q={q} n={})", k.tag(), id.n)
                    });
                }
            }
            let cap_weight = 2 * q.pow(id.n as u32 - 1);
            for spec in ctx.capacitor_family_specs() {
                let w = ctx.capacitor_word(&spec, 0)?;
                tally.check(w.weight() == cap_weight, || {
                    format!(
                        "capacitor weight {} != 2q^(n-1) = {cap_weight} (K={} q={q} n={})",
                        w.weight(),
                        k.tag(),
                        id.n
                    )
                });
                tally.check(ctx.is_codeword(&w)?, || {
                    format!(
                        "capacitor not in ker N^T over Z (K={} q={q} n={})",
                        k.tag(),
                        id.n
                    )
                });
            }
            match ctx.flat_capacitor_example(0) {
                Some((_, w)) => {
                    let d = ctx.k_span_dim() - 1;
                    tally.check(w.weight() == 2 * q.pow(d as u32), || {
                        format!(
                            "flat capacitor weight {} != 2q^d = {} (K={} q={q} n={})",
                            w.weight(),
                            2 * q.pow(d as u32),
                            k.tag(),
                            id.n
                        )
                    });
                    tally.check(ctx.is_codeword(&w)?, || {
                        format!(
                            "flat capacitor not in ker N^T over Z (K={} q={q} n={})",
                            k.tag(),
                            id.n
                        )
                    });
                }
                None => {
                    // no functional avoids K exactly when D = 0
                    tally.check(cfg.dual_zero_count(k) == cfg.num_points(), || {
                        format!(
                            "no flat capacitor found yet D != 0 (K={} q={q} n={})",
                            k.tag(),
                            id.n
                        )
                    });
                }
            }
        }
    }
    if opts.max_n >= 2 {
        for q in [5u64, 7] {
            if q > opts.max_q as u64 {
                continue;
            }
            let cfg = GeomConfig::new(q, 1, 2)?;
            let (hex_k, hex_w) = hexagon_example(&cfg)?;
            let hex_ctx = CodesCtx::new(&cfg, &hex_k)?;
            tally.check(hex_w.weight() == 6, || {
                format!("hexagon weight {} != 6 over q={q}", hex_w.weight())
            });
            tally.check(hex_ctx.is_codeword(&hex_w).unwrap_or(false), || {
                format!("hexagon word fails the D membership check over q={q}")
            });
            let (oct_k, oct_w) = octagon_example(&cfg)?;
            let oct_ctx = CodesCtx::new(&cfg, &oct_k)?;
            tally.check(oct_w.weight() == 8, || {
                format!("octagon weight {} != 8 over q={q}", oct_w.weight())
            });
            tally.check(oct_ctx.is_codeword(&oct_w).unwrap_or(false), || {
                format!("octagon word fails the D membership check over q={q}")
            });
        }
    }
    let note = format!("{:.1}s", started.elapsed().as_secs_f64());
    Ok(tally.finish(5, "word weight and integer membership contracts", note, started))
}

/// Criterion 6: exact and floor statements about minimum weights. The
/// rational-normal-curve case (n=3, q=2) has exact minimum weight 4 over
/// GF(3); every exhaustively enumerable grid case respects the floors
/// q+1 for C and |K|+1 for D; rational upper bounds never undercut the
/// 2|K| floor; the hexagon and octagon direction sets have exact rational
/// minimum distance 6 and 8.
pub fn criterion_6(opts: &VerifyOptions, cache: &mut RankCache) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    if opts.max_n >= 3 {
        let cfg = GeomConfig::new(2, 1, 3)?;
        let k = build_kset(&cfg, &KSpec::Rnc)?;
        let ctx = CodesCtx::new(&cfg, &k)?;
        let rep = ctx.min_weight_mod(Domain::LIndexed, 3, opts.budget, &[])?;
        tally.check(
            matches!(rep.method, MinWeightMethod::Enumerated) && rep.value == Some(4),
            || format!("curve code C over GF(3): got {:?} via {:?}, expected exactly 4", rep.value, rep.method),
        );
    }
    let mut enumerated = 0usize;
    for (cfg, klist) in grid_with_ksets(opts)? {
        let id = cfg.id();
        let p = id.p as u64;
        let q = cfg.q() as u64;
        let aux = aux_prime_pair(p)[0];
        for k in &klist {
            let n_lines = line_count(&cfg, k);
            let mut ctx_cell = None;
            for l in [p, aux] {
                // dimension pre-filter without elimination: the rank can
                // never exceed the dual zero count in any characteristic
                let dual = cfg.dual_zero_count(k);
                let dim_c_min = n_lines.saturating_sub(cfg.num_points());
                if fits(l, dim_c_min, opts.budget) {
                    let rank = cache.rank_mod(&cfg, k, l)?;
                    let dim_c = n_lines - rank;
                    if dim_c > 0 && fits(l, dim_c, opts.budget) {
                        if ctx_cell.is_none() {
                            ctx_cell = Some(CodesCtx::new(&cfg, k)?);
                        }
                        let ctx = ctx_cell.as_ref().unwrap();
                        let rep = ctx.min_weight_mod(Domain::LIndexed, l, opts.budget, &[])?;
                        if matches!(rep.method, MinWeightMethod::Enumerated) {
                            enumerated += 1;
                            tally.check(rep.value.is_some_and(|v| v >= q + 1), || {
                                format!(
                                    "enumerated d(C) = {:?} under floor q+1 = {} (K={} q={q} n={} l={l})",
                                    rep.value,
                                    q + 1,
                                    k.tag(),
                                    id.n
                                )
                            });
                        }
                    }
                }
                let dim_d_min = cfg.num_points().saturating_sub(dual);
                if fits(l, dim_d_min, opts.budget) {
                    let rank = cache.rank_mod(&cfg, k, l)?;
                    let dim_d = cfg.num_points() - rank;
                    if dim_d > 0 && fits(l, dim_d, opts.budget) {
                        if ctx_cell.is_none() {
                            ctx_cell = Some(CodesCtx::new(&cfg, k)?);
                        }
                        let ctx = ctx_cell.as_ref().unwrap();
                        let rep = ctx.min_weight_mod(Domain::PIndexed, l, opts.budget, &[])?;
                        if matches!(rep.method, MinWeightMethod::Enumerated) {
                            enumerated += 1;
                            tally.check(rep.value.is_some_and(|v| v >= k.len() as u64 + 1), || {
                                format!(
                                    "enumerated d(D) = {:?} under floor |K|+1 = {} (K={} q={q} n={} l={l})",
                                    rep.value,
                                    k.len() + 1,
                                    k.tag(),
                                    id.n
                                )
                            });
                        }
                    }
                }
            }
            // rational floors: no constructed or enumerated word may
            // undercut q+1 on C or 2|K| on D
            if cfg.num_points() <= 81 {
                if ctx_cell.is_none() {
                    ctx_cell = Some(CodesCtx::new(&cfg, k)?);
                }
                let ctx = ctx_cell.as_ref().unwrap();
                let rep_c = ctx.min_weight_char0(Domain::LIndexed, opts.budget, &[])?;
                if rep_c.dim > 0 {
                    tally.check(rep_c.upper.is_none_or(|u| u >= q + 1), || {
                        format!(
                            "rational C word of weight {:?} under floor q+1 = {} (K={} q={q} n={})",
                            rep_c.upper,
                            q + 1,
                            k.tag(),
                            id.n
                        )
                    });
                }
                let rep_d = ctx.min_weight_char0(Domain::PIndexed, opts.budget, &[])?;
                if rep_d.dim > 0 {
                    let floor = 2 * k.len() as u64;
                    tally.check(rep_d.upper.is_none_or(|u| u >= floor), || {
                        format!(
                            "rational D word of weight {:?} under floor 2|K| = {floor} (K={} q={q} n={})",
                            rep_d.upper,
                            k.tag(),
                            id.n
                        )
                    });
                }
            }
        }
    }
    if opts.max_n >= 2 {
        for q in [5u64, 7] {
            if q > opts.max_q as u64 {
                continue;
            }
            let cfg = GeomConfig::new(q, 1, 2)?;
            for (label, target, example) in [
                ("hexagon", 6u64, hexagon_example(&cfg)?),
                ("octagon", 8u64, octagon_example(&cfg)?),
            ] {
                let (k, w) = example;
                let ctx = CodesCtx::new(&cfg, &k)?;
                let rep = ctx.min_weight_char0(Domain::PIndexed, opts.budget, &[w])?;
                tally.check(rep.value == Some(target), || {
                    format!(
                        "{label} direction set over q={q}: rational d(D) = {:?} via {:?}, expected exactly {target}",
                        rep.value, rep.method
                    )
                });
            }
        }
    }
    let note = format!(
        "{enumerated} exhaustive enumerations, {:.1}s",
        started.elapsed().as_secs_f64()
    );
    Ok(tally.finish(6, "minimum weight floors and exact small cases", note, started))
}

/// Criterion 7: the rank can only drop in the defining characteristic
/// (rank mod p never exceeds a certified characteristic-zero rank), and
/// the two characteristic-p witness words check out: the two-plate word
/// of weight 2|K|−2 for K a full line over a prime field, and the
/// all-ones word of weight |K|+1 = 2^n when q = 2 and K is all of H.
pub fn criterion_7(opts: &VerifyOptions, cache: &mut RankCache) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    for (cfg, klist) in grid_with_ksets(opts)? {
        let id = cfg.id();
        let p = id.p as u64;
        let triple = multiprime_triple(p);
        let mut primes = vec![p];
        primes.extend_from_slice(&triple);
        cache.ensure_many(&cfg, &klist, &primes, opts.threads)?;
        for k in &klist {
            let rank_p = cache.rank_mod(&cfg, k, p)?;
            let mut lower0 = 0usize;
            let mut all_equal = true;
            for &l in &triple {
                let r = cache.rank_mod(&cfg, k, l)?;
                if lower0 != 0 && r != lower0 {
                    all_equal = false;
                }
                lower0 = lower0.max(r);
            }
            let dual = cfg.dual_zero_count(k);
            tally.check(all_equal && lower0 == dual, || {
                format!(
                    "multiprime ranks disagree or miss the dual count {dual} (K={} q={} n={})",
                    k.tag(),
                    cfg.q(),
                    id.n
                )
            });
            tally.check(rank_p <= lower0, || {
                format!(
                    "rank mod {p} = {rank_p} exceeds characteristic-zero rank {lower0} (K={} q={} n={})",
                    k.tag(),
                    cfg.q(),
                    id.n
                )
            });
            if cfg.num_points() <= 64 {
                // independent integer-arithmetic confirmation at desk size
                let inc = build_incidence(&cfg, k)?;
                let rep = rank_char0_incidence(&inc, Orientation::N, &Char0Opts::default())?;
                tally.check(rep.certified && rep.rank == dual && rank_p <= rep.rank, || {
                    format!(
                        "fraction-free rank {} (certified {}) vs dual {dual}, rank mod p {rank_p} (K={} q={} n={})",
                        rep.rank,
                        rep.certified,
                        k.tag(),
                        cfg.q(),
                        id.n
                    )
                });
            }
        }
    }
    // two-plate witness: K the full line over a prime field, word +1 on
    // one affine hyperplane and -1 on a parallel one, weight 2p = 2|K|-2
    for p in [2u64, 3, 5, 7] {
        if p > opts.max_q as u64 || opts.max_n < 2 {
            continue;
        }
        let cfg = GeomConfig::new(p, 1, 2)?;
        let k = build_kset(&cfg, &KSpec::Full)?;
        let ctx = CodesCtx::new(&cfg, &k)?;
        let entries: Vec<i64> = (0..cfg.num_points())
            .map(|i| match cfg.point_at(i).coords[0] {
                0 => 1,
                1 => -1,
                _ => 0,
            })
            .collect();
        let w = Codeword {
            domain: Domain::PIndexed,
            characteristic: p,
            entries,
        };
        tally.check(w.weight() == 2 * k.len() as u64 - 2, || {
            format!(
                "two-plate word weight {} != 2|K|-2 = {} over GF({p})",
                w.weight(),
                2 * k.len() - 2
            )
        });
        tally.check(ctx.is_codeword(&w).unwrap_or(false), || {
            format!("two-plate word rejected mod {p}")
        });
    }
    // all-ones witness for q = 2, K = H
    for n in [2usize, 3, 4] {
        if n > opts.max_n || opts.max_q < 2 {
            continue;
        }
        let cfg = GeomConfig::new(2, 1, n)?;
        let k = build_kset(&cfg, &KSpec::Full)?;
        let ctx = CodesCtx::new(&cfg, &k)?;
        let w = Codeword {
            domain: Domain::PIndexed,
            characteristic: 2,
            entries: vec![1; cfg.num_points()],
        };
        tally.check(w.weight() as usize == k.len() + 1, || {
            format!(
                "all-ones weight {} != |K|+1 = {} for n={n}",
                w.weight(),
                k.len() + 1
            )
        });
        tally.check(ctx.is_codeword(&w).unwrap_or(false), || {
            format!("all-ones word rejected mod 2 for n={n}")
        });
    }
    let note = format!("{:.1}s", started.elapsed().as_secs_f64());
    Ok(tally.finish(7, "characteristic-p rank inequality and witnesses", note, started))
}

/// Geometries on which the character dichotomies are checked pair by
/// pair: small enough that every (subspace, functional) combination fits.
pub const CHAR_SWEEP_GRID: &[(u64, u32, usize)] = &[(2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 1, 3)];

/// Exhaustive dichotomy sweep for one characteristic: every subspace of
/// dimension at most 2 against every functional, on each sweep geometry
/// with the given p. Returns (omega, pairs checked, violations).
pub fn charlemma_sweep(p: u64, aux: u64) -> Result<(u64, u64, u64)> {
    let ctx = CharacterContext::new(p, aux)?;
    let mut checked = 0u64;
    let mut violations = 0u64;
    for &(gp, e, n) in CHAR_SWEEP_GRID {
        if gp != p {
            continue;
        }
        let cfg = GeomConfig::new(gp, e, n)?;
        let subspaces = subspaces_up_to_dim(&cfg, 2)?;
        let functionals = all_functionals(&cfg);
        for w in &subspaces {
            for theta in &functionals {
                checked += 1;
                let inside_kernel = w.iter().all(|v| cfg.eval(theta, v) == 0);
                let s = subspace_char_sum(&ctx, &cfg, w, theta)?;
                let expected = if inside_kernel {
                    (w.len() as u64) % aux
                } else {
                    0
                };
                let img = trace_image(&cfg, w, theta);
                let trace_ok = (img.len() == 1 && img.contains(&0)) || img.len() == p as usize;
                if s != expected || !trace_ok {
                    violations += 1;
                }
            }
        }
    }
    Ok((ctx.omega(), checked, violations))
}

/// Criterion 8: on the four exhaustive geometries, every (subspace,
/// functional) pair obeys both dichotomies: the character sum over W is
/// |W| when W lies inside Ker θ and 0 otherwise, and the trace of θ on W
/// is either identically zero or onto the prime field.
pub fn criterion_8(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    for &(p, e, n) in CHAR_SWEEP_GRID {
        if p.pow(e) > opts.max_q as u64 || n > opts.max_n {
            continue;
        }
        let cfg = GeomConfig::new(p, e, n)?;
        let aux = aux_prime_pair(p)[0];
        let ctx = CharacterContext::new(p, aux)?;
        let subspaces = subspaces_up_to_dim(&cfg, 2)?;
        let functionals = all_functionals(&cfg);
        for w in &subspaces {
            for theta in &functionals {
                let inside_kernel = w.iter().all(|v| cfg.eval(theta, v) == 0);
                let s = subspace_char_sum(&ctx, &cfg, w, theta)?;
                let expected = if inside_kernel {
                    (w.len() as u64) % aux
                } else {
                    0
                };
                tally.check(s == expected, || {
                    format!(
                        "char sum {s} != {expected} for |W|={} theta={:?} on (p={p} e={e} n={n})",
                        w.len(),
                        theta.coeffs
                    )
                });
                let img = trace_image(&cfg, w, theta);
                let degenerate = img.len() == 1 && img.contains(&0);
                let onto = img.len() == p as usize;
                tally.check(degenerate || onto, || {
                    format!(
                        "trace image {img:?} neither zero nor all of GF({p}) for |W|={} theta={:?}",
                        w.len(),
                        theta.coeffs
                    )
                });
            }
        }
    }
    let note = format!("{:.1}s", started.elapsed().as_secs_f64());
    Ok(tally.finish(8, "character sum and trace dichotomies", note, started))
}

/// Criterion 9: one-pass majority decoding corrects every pattern within
/// the guaranteed radius on the two reference geometries, exhaustively
/// when the pattern count allows and by 10^4 seeded samples otherwise.
pub fn criterion_9(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut tally = Tally::new();
    let cases: &[(u64, u32)] = &[(2, 2), (5, 1)];
    for &(p, e) in cases {
        let q = p.pow(e);
        if q > opts.max_q as u64 || opts.max_n < 2 {
            continue;
        }
        let cfg = GeomConfig::new(p, e, 2)?;
        let k = build_kset(&cfg, &KSpec::Full)?;
        let inc = build_incidence(&cfg, &k)?;
        for code in [CodeSel::C, CodeSel::D] {
            let dec = Decoder::new(&inc, code)?;
            let expected_radius = match code {
                CodeSel::C => q as usize / 2,
                CodeSel::D => k.len() / 2,
            };
            tally.check(dec.guaranteed_radius() == expected_radius, || {
                format!(
                    "radius {} != {expected_radius} for {code} on q={q}",
                    dec.guaranteed_radius()
                )
            });
            for t in 1..=dec.guaranteed_radius() {
                let patterns = binomial(dec.len() as u64, t as u64);
                if patterns <= 100_000 {
                    for pattern in combinations(dec.len(), t) {
                        let trial = dec.run_trial(&pattern)?;
                        tally.check(trial.corrected, || {
                            format!("{code} left {pattern:?} uncorrected on q={q}")
                        });
                    }
                } else {
                    let mut rng = SplitMix64::new(opts.seed ^ geometry_mix(p, e, 2));
                    for _ in 0..10_000 {
                        let pattern = rng.sample_distinct(dec.len(), t);
                        let trial = dec.run_trial(&pattern)?;
                        tally.check(trial.corrected, || {
                            format!("{code} left sampled {pattern:?} uncorrected on q={q}")
                        });
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    tally.check(elapsed < 60.0, || {
        format!("decoding sweep took {elapsed:.1}s, budget is 60s")
    });
    let note = format!("{:.1}s", elapsed);
    Ok(tally.finish(9, "majority-logic decoding within guaranteed radius", note, started))
}

/// Runs all nine criteria with one shared rank cache. Criteria that feed
/// the cache (1, 7) run before the ones that reuse it (2, 6); the report
/// is ordered by criterion id regardless.
pub fn run_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut cache = RankCache::new();
    let mut criteria = vec![
        criterion_1(opts, &mut cache)?,
        criterion_7(opts, &mut cache)?,
        criterion_2(opts, &mut cache)?,
        criterion_6(opts, &mut cache)?,
        criterion_3(opts)?,
        criterion_4(opts)?,
        criterion_5(opts)?,
        criterion_8(opts)?,
        criterion_9(opts)?,
    ];
    criteria.sort_by_key(|c| c.id);
    let passed = criteria.iter().all(|c| c.passed);
    Ok(VerifyReport { passed, criteria })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> VerifyOptions {
        VerifyOptions {
            max_q: 3,
            max_n: 2,
            seed: 7,
            random_per_geometry: 2,
            budget: 200_000,
            threads: 2,
        }
    }

    #[test]
    fn aux_prime_pairs_are_the_smallest_admissible() {
        assert_eq!(aux_prime_pair(2), [3, 5]);
        assert_eq!(aux_prime_pair(3), [7, 13]);
        assert_eq!(aux_prime_pair(5), [11, 31]);
        assert_eq!(aux_prime_pair(7), [29, 43]);
    }

    #[test]
    fn multiprime_triples_avoid_p() {
        assert_eq!(multiprime_triple(2), [3, 5, 7]);
        assert_eq!(multiprime_triple(3), [2, 5, 7]);
        assert_eq!(multiprime_triple(7), [2, 3, 5]);
    }

    #[test]
    fn grid_composition() {
        let full = grid_geometries(&VerifyOptions::default());
        assert_eq!(full.len(), 7 * 2 + 2); // all fields at n=2,3 plus n=4 twice
        assert!(full.contains(&(2, 1, 4)) && full.contains(&(3, 1, 4)));
        assert!(!full.contains(&(2, 2, 4)));
        let clipped = grid_geometries(&tiny());
        assert_eq!(clipped, vec![(2, 1, 2), (3, 1, 2)]);
    }

    #[test]
    fn ksets_are_seed_deterministic_and_nonempty() {
        let opts = tiny();
        let cfg = GeomConfig::new(3, 1, 2).unwrap();
        let a = grid_ksets(&cfg, &opts).unwrap();
        let b = grid_ksets(&cfg, &opts).unwrap();
        assert_eq!(a.len(), 3 + 2);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.directions(), y.directions());
            assert!(!x.is_empty());
        }
        let other = grid_ksets(
            &cfg,
            &VerifyOptions {
                seed: 8,
                ..opts.clone()
            },
        )
        .unwrap();
        let differs = a
            .iter()
            .zip(&other)
            .any(|(x, y)| x.directions() != y.directions());
        assert!(differs, "different seeds must give different random K-sets");
    }

    #[test]
    fn rank_cache_hits_are_consistent() {
        let cfg = GeomConfig::new(2, 1, 2).unwrap();
        let k = build_kset(&cfg, &KSpec::Full).unwrap();
        let mut cache = RankCache::new();
        let r1 = cache.rank_mod(&cfg, &k, 3).unwrap();
        let r2 = cache.rank_mod(&cfg, &k, 3).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1, 4); // q^n: the full direction set blocks every functional
        cache.ensure_many(&cfg, &[k.clone()], &[3, 5], 2).unwrap();
        assert_eq!(cache.rank_mod(&cfg, &k, 5).unwrap(), 4);
    }

    #[test]
    fn reduced_grid_passes_every_criterion() {
        let opts = tiny();
        let report = run_all(&opts).unwrap();
        assert!(report.passed, "{:#?}", report.criteria);
        assert_eq!(report.criteria.len(), 9);
        for (i, c) in report.criteria.iter().enumerate() {
            assert_eq!(c.id as usize, i + 1);
            assert!(c.passed, "criterion {} failed: {}", c.id, c.detail);
        }
    }

    #[test]
    fn failure_reporting_keeps_first_message() {
        let mut t = Tally::new();
        t.check(true, || unreachable!());
        t.check(false, || "first".to_string());
        t.check(false, || "second".to_string());
        let out = t.finish(1, "x", "note".into(), Instant::now());
        assert!(!out.passed);
        assert_eq!(out.checks, 3);
        assert_eq!(out.failures, 2);
        assert_eq!(out.detail, "first");
    }
}
