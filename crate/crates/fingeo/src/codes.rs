//! The two kernel codes of the incidence matrix and their structured
//! codewords.
//!
//! `C = ker N` lives on line positions, `D = ker N^T` on point positions.
//! Both are defined over a coefficient field GF(l) or over the integers
//! (`characteristic == 0`). The generator families here produce low-weight
//! words directly from the geometry:
//!
//! * plane words: +1/-1 on the two rulings of an affine plane, weight `2q`;
//! * capacitor words: +1 on one level set of a functional that is nonzero
//!   on every direction of K, -1 on another, weight `2q^(n-1)`;
//! * flat capacitor words: the same construction inside the smallest flat
//!   whose directions contain K, weight `2q^d` with `d+1 = dim span K`;
//! * a hexagon and an octagon word on six and eight points of a plane,
//!   integer words for two specific small K, weight 6 and 8.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{AffinePoint, Functional, GeomConfig, Line, ProjPoint};
use crate::gf::FieldElement;
use crate::incidence::{build_incidence, Orientation, SparseIncidence};
use crate::ksets::KSet;
use crate::linalg::{
    kernel_basis_mod_incidence, rank_char0_incidence, rank_mod_incidence, Char0Opts, GfSpan,
    RankReport,
};
use crate::{Error, Result};

pub const DEFAULT_ENUM_BUDGET: u64 = 2_000_000;

/// Whether entries are indexed by lines of L or by points of P.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "L")]
    LIndexed,
    #[serde(rename = "P")]
    PIndexed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codeword {
    pub domain: Domain,
    /// 0 means integer coefficients; otherwise a prime modulus.
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub entries: Vec<i64>,
}

impl Codeword {
    pub fn weight(&self) -> u64 {
        let l = self.characteristic as i64;
        self.entries
            .iter()
            .filter(|&&x| if l == 0 { x != 0 } else { x.rem_euclid(l) != 0 })
            .count() as u64
    }
}

#[derive(Clone, Debug)]
pub struct PlaneWordSpec {
    /// Indices into the K-set's direction list; `dir1 < dir2`.
    pub dir1: usize,
    pub dir2: usize,
    /// Least point of the plane spanned by the two directions.
    pub base: AffinePoint,
}

#[derive(Clone, Debug)]
pub struct CapacitorSpec {
    pub theta: Functional,
    pub s1: FieldElement,
    pub s2: FieldElement,
}

#[derive(Clone, Debug)]
pub struct FlatCapacitorSpec {
    pub base: AffinePoint,
    pub theta: Functional,
    pub s1: FieldElement,
    pub s2: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeDims {
    pub rank: usize,
    pub length_c: usize,
    pub length_d: usize,
    pub dim_c: usize,
    pub dim_d: usize,
}

/// Geometry, K-set, line order, and incidence bundled for code work.
pub struct CodesCtx<'a> {
    cfg: &'a GeomConfig,
    k: &'a KSet,
    lines: Vec<Line>,
    line_col: HashMap<Line, usize>,
    inc: SparseIncidence,
}

impl<'a> CodesCtx<'a> {
    pub fn new(cfg: &'a GeomConfig, k: &'a KSet) -> Result<CodesCtx<'a>> {
        k.check_geometry(cfg)?;
        let lines = cfg.enum_lines(k);
        let line_col = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let inc = build_incidence(cfg, k)?;
        Ok(CodesCtx {
            cfg,
            k,
            lines,
            line_col,
            inc,
        })
    }

    pub fn cfg(&self) -> &GeomConfig {
        self.cfg
    }

    pub fn k(&self) -> &KSet {
        self.k
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn incidence(&self) -> &SparseIncidence {
        &self.inc
    }

    pub fn line_column(&self, line: &Line) -> Option<usize> {
        self.line_col.get(line).copied()
    }

    fn word_length(&self, domain: Domain) -> usize {
        match domain {
            Domain::LIndexed => self.lines.len(),
            Domain::PIndexed => self.cfg.num_points(),
        }
    }

    /// Does every check of the oriented incidence matrix vanish on `w`?
    pub fn is_codeword(&self, w: &Codeword) -> Result<bool> {
        if w.entries.len() != self.word_length(w.domain) {
            return Err(Error::InvalidArgument(format!(
                "word has {} entries, domain wants {}",
                w.entries.len(),
                self.word_length(w.domain)
            )));
        }
        let checks: &[Vec<usize>] = match w.domain {
            Domain::LIndexed => self.inc.rows(),
            Domain::PIndexed => self.inc.cols(),
        };
        let l = w.characteristic as i128;
        for check in checks {
            let mut acc: i128 = 0;
            for &pos in check {
                acc += w.entries[pos] as i128;
                if l != 0 {
                    acc %= l;
                }
            }
            if (l == 0 && acc != 0) || (l != 0 && acc.rem_euclid(l) != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn dims_mod(&self, l: u64) -> Result<CodeDims> {
        let rank = rank_mod_incidence(&self.inc, Orientation::N, l)?;
        Ok(self.dims_from_rank(rank))
    }

    /// Rational dimensions; the rank certificate is the closed-form dual
    /// zero count, which the characteristic-zero rank must also match.
    pub fn dims_char0(&self) -> Result<(CodeDims, RankReport)> {
        let opts = Char0Opts {
            avoid_prime: Some(self.cfg.fld().p() as u64),
            expected_rank: Some(self.cfg.dual_zero_count(self.k)),
            ..Char0Opts::default()
        };
        let rep = rank_char0_incidence(&self.inc, Orientation::N, &opts)?;
        Ok((self.dims_from_rank(rep.rank), rep))
    }

    fn dims_from_rank(&self, rank: usize) -> CodeDims {
        CodeDims {
            rank,
            length_c: self.inc.n_cols(),
            length_d: self.inc.n_rows(),
            dim_c: self.inc.n_cols() - rank,
            dim_d: self.inc.n_rows() - rank,
        }
    }

    /// All plane word specs: one per unordered pair of K directions and
    /// per translate of the plane those directions span.
    pub fn enumerate_plane_specs(&self) -> Vec<PlaneWordSpec> {
        let dirs = self.k.directions();
        let mut specs = Vec::new();
        for i in 0..dirs.len() {
            for j in i + 1..dirs.len() {
                let w: Vec<Vec<FieldElement>> = self.cfg.span_vectors(&[
                    dirs[i].coords().to_vec(),
                    dirs[j].coords().to_vec(),
                ]);
                let mut covered = vec![false; self.cfg.num_points()];
                for idx in 0..covered.len() {
                    if covered[idx] {
                        continue;
                    }
                    let base = self.cfg.point_at(idx);
                    for v in &w {
                        covered[self.cfg.point_index(&self.cfg.translate(&base, v))] = true;
                    }
                    specs.push(PlaneWordSpec {
                        dir1: i,
                        dir2: j,
                        base,
                    });
                }
            }
        }
        specs
    }

    /// +1 on the `dir1`-ruling of the plane, -1 on the `dir2`-ruling.
    pub fn plane_word(&self, spec: &PlaneWordSpec, characteristic: u64) -> Result<Codeword> {
        let dirs = self.k.directions();
        if spec.dir1 >= spec.dir2 || spec.dir2 >= dirs.len() {
            return Err(Error::InvalidArgument(
                "plane word needs two distinct direction indices in K".into(),
            ));
        }
        let (u1, u2) = (&dirs[spec.dir1], &dirs[spec.dir2]);
        let mut entries = vec![0i64; self.lines.len()];
        for t in self.cfg.fld().elements() {
            let along2 = self
                .cfg
                .translate(&spec.base, &self.cfg.scale_vec(t, u2.coords()));
            let plus = self.cfg.line_through(&along2, u1);
            entries[self.expect_col(&plus)?] += 1;
            let along1 = self
                .cfg
                .translate(&spec.base, &self.cfg.scale_vec(t, u1.coords()));
            let minus = self.cfg.line_through(&along1, u2);
            entries[self.expect_col(&minus)?] -= 1;
        }
        Ok(Codeword {
            domain: Domain::LIndexed,
            characteristic,
            entries,
        })
    }

    fn expect_col(&self, line: &Line) -> Result<usize> {
        self.line_column(line).ok_or_else(|| {
            Error::InvalidArgument("line outside the configured line set".into())
        })
    }

    /// Normalized functionals that are nonzero on every direction of K.
    pub fn valid_capacitor_functionals(&self) -> Vec<Functional> {
        self.cfg
            .normalized_functionals()
            .into_iter()
            .filter(|th| {
                self.k
                    .directions()
                    .iter()
                    .all(|u| self.cfg.eval(th, u.coords()) != 0)
            })
            .collect()
    }

    fn check_capacitor_inputs(
        &self,
        theta: &Functional,
        s1: FieldElement,
        s2: FieldElement,
    ) -> Result<()> {
        if s1 == s2 {
            return Err(Error::InvalidArgument(
                "capacitor needs two distinct level values".into(),
            ));
        }
        if self.k.is_empty() {
            return Err(Error::InvalidArgument("capacitor needs a nonempty K".into()));
        }
        for u in self.k.directions() {
            if self.cfg.eval(theta, u.coords()) == 0 {
                return Err(Error::InvalidArgument(
                    "functional vanishes on a direction of K".into(),
                ));
            }
        }
        Ok(())
    }

    /// +1 on the level set `theta = s1`, -1 on `theta = s2`.
    pub fn capacitor_word(&self, spec: &CapacitorSpec, characteristic: u64) -> Result<Codeword> {
        self.check_capacitor_inputs(&spec.theta, spec.s1, spec.s2)?;
        let mut entries = vec![0i64; self.cfg.num_points()];
        for (idx, e) in entries.iter_mut().enumerate() {
            let v = self.cfg.eval(&spec.theta, &self.cfg.point_at(idx).coords);
            if v == spec.s1 {
                *e = 1;
            } else if v == spec.s2 {
                *e = -1;
            }
        }
        Ok(Codeword {
            domain: Domain::PIndexed,
            characteristic,
            entries,
        })
    }

    /// The family that spans the point-indexed code whenever the
    /// coefficient characteristic does not divide q: every valid
    /// normalized functional, paired with level sets {0, s} for s != 0.
    pub fn capacitor_family_specs(&self) -> Vec<CapacitorSpec> {
        let mut specs = Vec::new();
        for theta in self.valid_capacitor_functionals() {
            for s in self.cfg.fld().elements().skip(1) {
                specs.push(CapacitorSpec {
                    theta: theta.clone(),
                    s1: 0,
                    s2: s,
                });
            }
        }
        specs
    }

    /// Dimension of the linear span of K's direction vectors.
    pub fn k_span_dim(&self) -> usize {
        let gens: Vec<Vec<FieldElement>> = self
            .k
            .directions()
            .iter()
            .map(|u| u.coords().to_vec())
            .collect();
        crate::geometry::row_basis(self.cfg.fld(), &gens).len()
    }

    /// Capacitor supported on the flat `base + span K` alone. Weight
    /// `2q^d` where `d+1` is the span dimension, the lightest of the
    /// capacitor constructions.
    pub fn flat_capacitor_word(
        &self,
        spec: &FlatCapacitorSpec,
        characteristic: u64,
    ) -> Result<Codeword> {
        self.check_capacitor_inputs(&spec.theta, spec.s1, spec.s2)?;
        let gens: Vec<Vec<FieldElement>> = self
            .k
            .directions()
            .iter()
            .map(|u| u.coords().to_vec())
            .collect();
        let mut entries = vec![0i64; self.cfg.num_points()];
        for w in self.cfg.span_vectors(&gens) {
            let v = self.cfg.eval(&spec.theta, &w);
            let target = if v == spec.s1 {
                1
            } else if v == spec.s2 {
                -1
            } else {
                continue;
            };
            let idx = self.cfg.point_index(&self.cfg.translate(&spec.base, &w));
            entries[idx] = target;
        }
        Ok(Codeword {
            domain: Domain::PIndexed,
            characteristic,
            entries,
        })
    }

    /// First available flat capacitor in a canonical spot, if any exists.
    pub fn flat_capacitor_example(&self, characteristic: u64) -> Option<(FlatCapacitorSpec, Codeword)> {
        let theta = self.valid_capacitor_functionals().into_iter().next()?;
        let spec = FlatCapacitorSpec {
            base: self.cfg.point_at(0),
            theta,
            s1: 0,
            s2: 1,
        };
        let word = self.flat_capacitor_word(&spec, characteristic).ok()?;
        Some((spec, word))
    }

    /// Checks membership of each word, then whether together they span
    /// the code over GF(l). Stops reading words once the span is full.
    pub fn verify_spanning<I>(&self, domain: Domain, l: u64, words: I) -> Result<SpanCheck>
    where
        I: IntoIterator<Item = Codeword>,
    {
        let dims = self.dims_mod(l)?;
        let code_dim = match domain {
            Domain::LIndexed => dims.dim_c,
            Domain::PIndexed => dims.dim_d,
        };
        let mut span = GfSpan::new(l, self.word_length(domain))?;
        let mut all_codewords = true;
        let mut n_words = 0usize;
        for w in words {
            n_words += 1;
            if w.domain != domain || (w.characteristic != l && w.characteristic != 0) {
                return Err(Error::InvalidArgument(
                    "word domain or characteristic mismatch in spanning check".into(),
                ));
            }
            if !self.is_codeword(&w)? {
                all_codewords = false;
                continue;
            }
            span.insert(&w.entries);
            if span.dim() == code_dim {
                break;
            }
        }
        Ok(SpanCheck {
            all_codewords,
            span_dim: span.dim(),
            code_dim,
            words_seen: n_words,
        })
    }

    pub fn min_weight_mod(
        &self,
        domain: Domain,
        l: u64,
        budget: u64,
        extra: &[Codeword],
    ) -> Result<MinWeightReport> {
        if self.k.is_empty() && domain == Domain::PIndexed {
            // no checks at all: unit vectors are codewords
            return Ok(MinWeightReport {
                dim: self.cfg.num_points(),
                lower: 1,
                upper: Some(1),
                value: Some(1),
                method: MinWeightMethod::BoundsMeet,
            });
        }
        let dims = self.dims_mod(l)?;
        let dim = match domain {
            Domain::LIndexed => dims.dim_c,
            Domain::PIndexed => dims.dim_d,
        };
        if dim == 0 {
            return Ok(MinWeightReport {
                dim,
                lower: 0,
                upper: None,
                value: None,
                method: MinWeightMethod::ZeroCode,
            });
        }
        let lower = self.weight_floor(domain, false);
        let upper = self.constructed_upper(domain, l, extra)?;
        if pow_within(l, dim as u32, budget) {
            let orient = match domain {
                Domain::LIndexed => Orientation::N,
                Domain::PIndexed => Orientation::Nt,
            };
            let basis = kernel_basis_mod_incidence(&self.inc, orient, l)?;
            debug_assert_eq!(basis.len(), dim);
            let best = enumerate_nonzero_min_weight(&basis, l);
            debug_assert!(best >= lower && upper.map_or(true, |u| best <= u));
            return Ok(MinWeightReport {
                dim,
                lower,
                upper: Some(best),
                value: Some(best),
                method: MinWeightMethod::Enumerated,
            });
        }
        if upper == Some(lower) {
            return Ok(MinWeightReport {
                dim,
                lower,
                upper,
                value: Some(lower),
                method: MinWeightMethod::BoundsMeet,
            });
        }
        if let Some(u) = upper {
            debug_assert!(u >= lower, "constructed word beats a proven floor");
        }
        Ok(MinWeightReport {
            dim,
            lower,
            upper,
            value: None,
            method: MinWeightMethod::Bounded,
        })
    }

    pub fn min_weight_char0(
        &self,
        domain: Domain,
        budget: u64,
        extra: &[Codeword],
    ) -> Result<MinWeightReport> {
        if self.k.is_empty() && domain == Domain::PIndexed {
            return Ok(MinWeightReport {
                dim: self.cfg.num_points(),
                lower: 1,
                upper: Some(1),
                value: Some(1),
                method: MinWeightMethod::BoundsMeet,
            });
        }
        let (dims, _) = self.dims_char0()?;
        let dim = match domain {
            Domain::LIndexed => dims.dim_c,
            Domain::PIndexed => dims.dim_d,
        };
        if dim == 0 {
            return Ok(MinWeightReport {
                dim,
                lower: 0,
                upper: None,
                value: None,
                method: MinWeightMethod::ZeroCode,
            });
        }
        let lower = self.weight_floor(domain, true);
        let mut upper = self.constructed_upper(domain, 0, extra)?;
        // small integer combinations of a rational kernel basis tighten
        // the upper bound but can never certify a minimum on their own
        if dim <= 4 && pow_within(7, dim as u32, budget) {
            let orient = match domain {
                Domain::LIndexed => Orientation::N,
                Domain::PIndexed => Orientation::Nt,
            };
            let dense = self.inc.to_dense(orient);
            let n_cols = dense.first().map_or(0, |r| r.len());
            let basis = crate::linalg::kernel_basis_char0(&dense, n_cols)?;
            if let Some(found) = boxed_integer_min_weight(&basis, 3) {
                upper = Some(upper.map_or(found, |u| u.min(found)));
            }
        }
        if upper == Some(lower) {
            return Ok(MinWeightReport {
                dim,
                lower,
                upper,
                value: Some(lower),
                method: MinWeightMethod::BoundsMeet,
            });
        }
        if let Some(u) = upper {
            debug_assert!(u >= lower, "constructed word beats a proven floor");
        }
        Ok(MinWeightReport {
            dim,
            lower,
            upper,
            value: None,
            method: MinWeightMethod::Bounded,
        })
    }

    /// Proven lower bounds: a line word forces q more lines through its
    /// points; a point word forces |K| more points through each of its
    /// points, twice over an ordered coefficient ring.
    fn weight_floor(&self, domain: Domain, ordered: bool) -> u64 {
        match domain {
            Domain::LIndexed => self.cfg.q() as u64 + 1,
            Domain::PIndexed => {
                let k = self.k.len() as u64;
                if ordered {
                    2 * k
                } else {
                    k + 1
                }
            }
        }
    }

    /// Lightest constructed codeword, plus any caller-supplied words.
    fn constructed_upper(
        &self,
        domain: Domain,
        l: u64,
        extra: &[Codeword],
    ) -> Result<Option<u64>> {
        let mut upper: Option<u64> = None;
        let mut consider = |w: u64| {
            upper = Some(upper.map_or(w, |u| u.min(w)));
        };
        match domain {
            Domain::LIndexed => {
                if self.k.len() >= 2 {
                    let spec = PlaneWordSpec {
                        dir1: 0,
                        dir2: 1,
                        base: self.cfg.point_at(0),
                    };
                    consider(self.plane_word(&spec, l)?.weight());
                }
            }
            Domain::PIndexed => {
                if let Some((_, word)) = self.flat_capacitor_example(l) {
                    consider(word.weight());
                }
            }
        }
        for w in extra {
            if w.domain != domain {
                continue;
            }
            if w.characteristic != l && w.characteristic != 0 {
                continue;
            }
            let mut reduced = w.clone();
            reduced.characteristic = l;
            if reduced.weight() > 0 && self.is_codeword(&reduced)? {
                consider(reduced.weight());
            }
        }
        Ok(upper)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpanCheck {
    pub all_codewords: bool,
    pub span_dim: usize,
    pub code_dim: usize,
    pub words_seen: usize,
}

impl SpanCheck {
    pub fn spans(&self) -> bool {
        self.all_codewords && self.span_dim == self.code_dim
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinWeightMethod {
    /// The code is zero; there is no minimum weight.
    ZeroCode,
    /// Every codeword was enumerated.
    Enumerated,
    /// A constructed word meets the proven floor.
    BoundsMeet,
    /// Only bounds are known.
    Bounded,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MinWeightReport {
    pub dim: usize,
    pub lower: u64,
    pub upper: Option<u64>,
    pub value: Option<u64>,
    pub method: MinWeightMethod,
}

fn pow_within(l: u64, dim: u32, budget: u64) -> bool {
    (l as u128)
        .checked_pow(dim)
        .is_some_and(|t| t <= budget as u128)
}

/// Walk every nonzero combination of the basis rows with an odometer,
/// maintaining the current vector and its weight incrementally.
fn enumerate_nonzero_min_weight(basis: &[Vec<u64>], l: u64) -> u64 {
    let width = basis.first().map_or(0, |b| b.len());
    let mut current = vec![0u64; width];
    let mut digits = vec![0u64; basis.len()];
    let mut weight = 0u64;
    let mut best = u64::MAX;
    'outer: loop {
        let mut j = 0;
        loop {
            digits[j] += 1;
            add_row_tracking_weight(&mut current, &basis[j], l, &mut weight);
            if digits[j] < l {
                break;
            }
            digits[j] = 0;
            j += 1;
            if j == basis.len() {
                break 'outer;
            }
        }
        best = best.min(weight);
    }
    debug_assert!(current.iter().all(|&x| x == 0));
    best
}

fn add_row_tracking_weight(current: &mut [u64], row: &[u64], l: u64, weight: &mut u64) {
    for (c, &r) in current.iter_mut().zip(row) {
        if r == 0 {
            continue;
        }
        let was_zero = *c == 0;
        let mut t = *c + r;
        if t >= l {
            t -= l;
        }
        *c = t;
        if was_zero {
            *weight += 1;
        } else if t == 0 {
            *weight -= 1;
        }
    }
}

/// Best weight among integer combinations with coefficients in
/// [-bound, bound]; None if the basis is empty.
fn boxed_integer_min_weight(basis: &[Vec<i64>], bound: i64) -> Option<u64> {
    if basis.is_empty() {
        return None;
    }
    let width = basis[0].len();
    let side = (2 * bound + 1) as u64;
    let total = side.checked_pow(basis.len() as u32)?;
    let mut best: Option<u64> = None;
    for combo in 0..total {
        let mut c = combo;
        let mut coeffs = Vec::with_capacity(basis.len());
        for _ in 0..basis.len() {
            coeffs.push((c % side) as i64 - bound);
            c /= side;
        }
        if coeffs.iter().all(|&x| x == 0) {
            continue;
        }
        let mut w = 0u64;
        for pos in 0..width {
            let v: i64 = basis.iter().zip(&coeffs).map(|(b, &co)| b[pos] * co).sum();
            if v != 0 {
                w += 1;
            }
        }
        best = Some(best.map_or(w, |b| b.min(w)));
    }
    best
}

/// Integer hexagon word on six points of a plane, for the three-direction
/// K {(1:0), (0:1), (1:1)}. Needs p >= 3 so the six points are distinct.
pub fn hexagon_example(cfg: &GeomConfig) -> Result<(KSet, Codeword)> {
    kgon_word(
        cfg,
        3,
        &[(1, 0), (0, 1), (1, 1)],
        &[(0, 0), (0, 1), (1, 2), (2, 2), (2, 1), (1, 0)],
    )
}

/// Integer octagon word on eight points, for the four-direction
/// K {(1:0), (0:1), (1:1), (1:-1)}. Needs p >= 5.
pub fn octagon_example(cfg: &GeomConfig) -> Result<(KSet, Codeword)> {
    kgon_word(
        cfg,
        5,
        &[(1, 0), (0, 1), (1, 1), (1, -1)],
        &[
            (0, 0),
            (0, 1),
            (1, 2),
            (2, 2),
            (3, 1),
            (3, 0),
            (2, -1),
            (1, -1),
        ],
    )
}

fn kgon_word(
    cfg: &GeomConfig,
    min_p: u32,
    dirs: &[(i64, i64)],
    cycle: &[(i64, i64)],
) -> Result<(KSet, Codeword)> {
    if cfg.n() != 2 {
        return Err(Error::BadDimension(cfg.n()));
    }
    let fld = cfg.fld();
    if fld.p() < min_p {
        return Err(Error::InvalidArgument(format!(
            "construction needs characteristic at least {min_p}, field has {}",
            fld.p()
        )));
    }
    let dir_points = dirs
        .iter()
        .map(|&(a, b)| ProjPoint::new(fld, vec![fld.from_int(a), fld.from_int(b)]))
        .collect::<Result<Vec<_>>>()?;
    let k = KSet::from_points(cfg, dir_points, "kgon");
    let mut entries = vec![0i64; cfg.num_points()];
    for (i, &(x, y)) in cycle.iter().enumerate() {
        let pt = AffinePoint {
            coords: vec![fld.from_int(x), fld.from_int(y)],
        };
        // signs alternate around the cycle, starting negative
        entries[cfg.point_index(&pt)] += if i % 2 == 0 { -1 } else { 1 };
    }
    Ok((
        k,
        Codeword {
            domain: Domain::PIndexed,
            characteristic: 0,
            entries,
        },
    ))
}
