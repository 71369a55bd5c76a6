//! The ambient geometry: affine space `P = GF(q)^n`, the hyperplane at
//! infinity `H = PG(n-1, q)`, and the affine lines with a prescribed
//! direction.
//!
//! Everything is enumerated in a single canonical order so that matrix
//! builds, exports, and kernel bases are reproducible byte for byte:
//! affine points ascend lexicographically by coordinate vector (first
//! coordinate most significant), projective points are normalized to have
//! first nonzero coordinate 1 and then ascend lexicographically, and lines
//! are keyed by their lexicographically least point.

use crate::gf::{Field, FieldElement};
use crate::ksets::KSet;
use crate::{Error, Result};

/// Cap on `q^n`; every operation here enumerates points or functionals.
pub const MAX_POINTS: u64 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint {
    pub coords: Vec<FieldElement>,
}

/// A point of `H`, i.e. a direction class. Kept normalized: the first
/// nonzero coordinate is 1. Ordering is lexicographic on the normalized
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn new(fld: &Field, coords: Vec<FieldElement>) -> Result<ProjPoint> {
        let lead = coords.iter().position(|&c| c != 0).ok_or_else(|| {
            Error::InvalidKSet("the zero vector is not a projective point".into())
        })?;
        if coords.iter().any(|&c| c >= fld.q()) {
            return Err(Error::InvalidKSet(format!(
                "coordinate out of range for GF({})",
                fld.q()
            )));
        }
        let scale = fld.inv(coords[lead])?;
        let coords = coords.iter().map(|&c| fld.mul(scale, c)).collect();
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }
}

/// A linear functional on `GF(q)^n`, as its coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functional {
    pub coeffs: Vec<FieldElement>,
}

/// An affine line `{base + t * direction}`. `base` is the lexicographically
/// least point of the line, which makes the representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub direction: ProjPoint,
    pub base: AffinePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeomId {
    pub p: u32,
    pub e: u32,
    pub n: usize,
}

#[derive(Debug)]
pub struct GeomConfig {
    fld: Field,
    n: usize,
    num_points: u64,
}

impl GeomConfig {
    pub fn new(p: u64, e: u32, n: usize) -> Result<GeomConfig> {
        let fld = Field::new(p, e)?;
        GeomConfig::from_field(fld, n)
    }

    pub fn from_field(fld: Field, n: usize) -> Result<GeomConfig> {
        if n < 2 {
            return Err(Error::BadDimension(n));
        }
        let mut num_points: u64 = 1;
        for _ in 0..n {
            num_points = num_points.saturating_mul(fld.q() as u64);
            if num_points > MAX_POINTS {
                return Err(Error::BudgetExceeded(format!(
                    "q^n = {}^{} exceeds the point-enumeration cap {}",
                    fld.q(),
                    n,
                    MAX_POINTS
                )));
            }
        }
        Ok(GeomConfig { fld, n, num_points })
    }

    pub fn fld(&self) -> &Field {
        &self.fld
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.fld.q()
    }

    pub fn id(&self) -> GeomId {
        GeomId {
            p: self.fld.p(),
            e: self.fld.e(),
            n: self.n,
        }
    }

    pub fn num_points(&self) -> usize {
        self.num_points as usize
    }

    pub fn num_h_points(&self) -> usize {
        ((self.num_points - 1) / (self.q() as u64 - 1).max(1)) as usize
    }

    /// Index of a point in the canonical enumeration: its coordinate
    /// vector read as a base-q numeral, first coordinate most significant.
    pub fn point_index(&self, pt: &AffinePoint) -> usize {
        debug_assert_eq!(pt.coords.len(), self.n);
        let q = self.q() as u64;
        let mut idx: u64 = 0;
        for &c in &pt.coords {
            idx = idx * q + c as u64;
        }
        idx as usize
    }

    pub fn point_at(&self, mut idx: usize) -> AffinePoint {
        debug_assert!(idx < self.num_points());
        let q = self.q() as usize;
        let mut coords = vec![0u32; self.n];
        for c in coords.iter_mut().rev() {
            *c = (idx % q) as u32;
            idx /= q;
        }
        AffinePoint { coords }
    }

    pub fn affine_points(&self) -> Vec<AffinePoint> {
        (0..self.num_points()).map(|i| self.point_at(i)).collect()
    }

    /// All points of `H` in lexicographic order of normalized coordinates.
    pub fn h_points(&self) -> Vec<ProjPoint> {
        let q = self.q() as usize;
        let n = self.n;
        let mut out = Vec::with_capacity(self.num_h_points());
        for lead in (0..n).rev() {
            let free = n - lead - 1;
            let count = q.pow(free as u32);
            for m in 0..count {
                let mut coords = vec![0u32; n];
                coords[lead] = 1;
                let mut rest = m;
                for i in (lead + 1..n).rev() {
                    coords[i] = (rest % q) as u32;
                    rest /= q;
                }
                out.push(ProjPoint { coords });
            }
        }
        out
    }

    /// All hyperplanes of `H`, one per normalized functional.
    pub fn normalized_functionals(&self) -> Vec<Functional> {
        self.h_points()
            .into_iter()
            .map(|p| Functional { coeffs: p.coords })
            .collect()
    }

    pub fn eval(&self, theta: &Functional, coords: &[FieldElement]) -> FieldElement {
        debug_assert_eq!(theta.coeffs.len(), coords.len());
        let mut acc = 0u32;
        for (&c, &v) in theta.coeffs.iter().zip(coords) {
            acc = self.fld.add(acc, self.fld.mul(c, v));
        }
        acc
    }

    pub fn add_vec(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        a.iter().zip(b).map(|(&x, &y)| self.fld.add(x, y)).collect()
    }

    pub fn scale_vec(&self, t: FieldElement, a: &[FieldElement]) -> Vec<FieldElement> {
        a.iter().map(|&x| self.fld.mul(t, x)).collect()
    }

    pub fn translate(&self, pt: &AffinePoint, v: &[FieldElement]) -> AffinePoint {
        AffinePoint {
            coords: self.add_vec(&pt.coords, v),
        }
    }

    /// Every vector in the linear span of `gens`, in a fixed order
    /// determined by the reduced generators.
    pub fn span_vectors(&self, gens: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
        let basis = row_basis(&self.fld, gens);
        let mut vecs = vec![vec![0; self.n]];
        for b in &basis {
            let mut next = Vec::with_capacity(vecs.len() * self.q() as usize);
            for v in &vecs {
                for t in self.fld.elements() {
                    next.push(self.add_vec(v, &self.scale_vec(t, b)));
                }
            }
            vecs = next;
        }
        vecs
    }

    /// The canonical representation of the line through `pt` with the given
    /// direction.
    pub fn line_through(&self, pt: &AffinePoint, direction: &ProjPoint) -> Line {
        let mut best = pt.clone();
        for t in 1..self.q() {
            let cand = AffinePoint {
                coords: self.add_vec(&pt.coords, &self.scale_vec(t, direction.coords())),
            };
            if cand < best {
                best = cand;
            }
        }
        Line {
            direction: direction.clone(),
            base: best,
        }
    }

    /// The q points of a line, ascending lexicographically.
    pub fn line_points(&self, line: &Line) -> Vec<AffinePoint> {
        let mut pts: Vec<AffinePoint> = (0..self.q())
            .map(|t| AffinePoint {
                coords: self.add_vec(&line.base.coords, &self.scale_vec(t, line.direction.coords())),
            })
            .collect();
        pts.sort_unstable();
        pts
    }

    /// All lines with direction in `K`: for each direction in K-order, the
    /// `q^(n-1)` lines of its parallel class ascending by base point.
    pub fn enum_lines(&self, k: &KSet) -> Vec<Line> {
        k.check_geometry(self).expect("K built for another geometry");
        let np = self.num_points();
        let mut out = Vec::with_capacity(np / self.q() as usize * k.len());
        let mut covered = vec![false; np];
        for dir in k.directions() {
            covered.iter_mut().for_each(|c| *c = false);
            for idx in 0..np {
                if covered[idx] {
                    continue;
                }
                let base = self.point_at(idx);
                let line = Line {
                    direction: dir.clone(),
                    base: base.clone(),
                };
                for t in 0..self.q() {
                    let p = AffinePoint {
                        coords: self.add_vec(&base.coords, &self.scale_vec(t, dir.coords())),
                    };
                    covered[self.point_index(&p)] = true;
                }
                out.push(line);
            }
        }
        out
    }

    /// Number of hyperplanes of `H` that contain at least one point of `K`.
    pub fn count_h_k(&self, k: &KSet) -> usize {
        self.normalized_functionals()
            .iter()
            .filter(|theta| {
                k.directions()
                    .iter()
                    .any(|u| self.eval(theta, u.coords()) == 0)
            })
            .count()
    }

    /// Number of functionals (all `q^n`, zero included) vanishing somewhere
    /// on `K`. For nonempty `K` this equals `1 + (q-1) * count_h_k`.
    pub fn dual_zero_count(&self, k: &KSet) -> usize {
        if k.is_empty() {
            return 0;
        }
        let q = self.q() as usize;
        let mut count = 0usize;
        let mut coeffs = vec![0u32; self.n];
        loop {
            let theta = Functional {
                coeffs: coeffs.clone(),
            };
            if k.directions()
                .iter()
                .any(|u| self.eval(&theta, u.coords()) == 0)
            {
                count += 1;
            }
            // odometer, last coordinate fastest
            let mut i = self.n;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                coeffs[i] += 1;
                if (coeffs[i] as usize) < q {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }
}

/// Row-echelon basis of the GF(q)-span of `rows`. Each basis vector is
/// normalized to leading coefficient 1; vectors are ordered by leading
/// position, so the output is canonical for a given span.
pub fn row_basis(fld: &Field, rows: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let mut basis: Vec<Vec<FieldElement>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        reduce_against(fld, &basis, &mut v);
        if let Some(lead) = v.iter().position(|&c| c != 0) {
            let s = fld.inv(v[lead]).unwrap();
            for c in v.iter_mut() {
                *c = fld.mul(s, *c);
            }
            let at = basis
                .iter()
                .position(|b| b.iter().position(|&c| c != 0).unwrap() > lead)
                .unwrap_or(basis.len());
            basis.insert(at, v);
        }
    }
    basis
}

pub fn in_span(fld: &Field, basis: &[Vec<FieldElement>], v: &[FieldElement]) -> bool {
    let mut v = v.to_vec();
    reduce_against(fld, basis, &mut v);
    v.iter().all(|&c| c == 0)
}

fn reduce_against(fld: &Field, basis: &[Vec<FieldElement>], v: &mut [FieldElement]) {
    for b in basis {
        let lead = b.iter().position(|&c| c != 0).unwrap();
        let f = v[lead];
        if f != 0 {
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi = fld.sub(*vi, fld.mul(f, bi));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ksets::{build_kset, KSpec};

    fn cfg(p: u64, e: u32, n: usize) -> GeomConfig {
        GeomConfig::new(p, e, n).unwrap()
    }

    #[test]
    fn rejects_n_below_two() {
        assert!(matches!(GeomConfig::new(2, 1, 1), Err(Error::BadDimension(1))));
        assert!(matches!(GeomConfig::new(2, 1, 0), Err(Error::BadDimension(0))));
    }

    #[test]
    fn point_enumeration_is_lex_and_indexable() {
        let g = cfg(3, 1, 2);
        let pts = g.affine_points();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0].coords, vec![0, 0]);
        assert_eq!(pts[1].coords, vec![0, 1]);
        assert_eq!(pts[3].coords, vec![1, 0]);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(g.point_index(p), i);
            assert_eq!(&g.point_at(i), p);
        }
        for w in pts.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn h_enumeration_counts_and_order() {
        for (p, e, n) in [(2, 1, 2), (2, 1, 3), (3, 1, 3), (2, 2, 3), (3, 2, 2)] {
            let g = cfg(p, e, n);
            let h = g.h_points();
            let q = g.q() as u64;
            let expect = ((q.pow(n as u32) - 1) / (q - 1)) as usize;
            assert_eq!(h.len(), expect);
            assert_eq!(h.len(), g.num_h_points());
            for w in h.windows(2) {
                assert!(w[0] < w[1], "H enumeration must strictly ascend");
            }
            for pt in &h {
                let lead = pt.coords().iter().position(|&c| c != 0).unwrap();
                assert_eq!(pt.coords()[lead], 1, "normalization");
            }
        }
    }

    #[test]
    fn projective_normalization_collapses_scalings() {
        let g = cfg(3, 2, 2);
        let f = g.fld();
        let v = vec![2u32, 7u32];
        let base = ProjPoint::new(f, v.clone()).unwrap();
        for t in 1..f.q() {
            let scaled: Vec<u32> = v.iter().map(|&c| f.mul(t, c)).collect();
            assert_eq!(ProjPoint::new(f, scaled).unwrap(), base);
        }
        assert!(ProjPoint::new(f, vec![0, 0]).is_err());
        assert!(ProjPoint::new(f, vec![1, 99]).is_err());
    }

    #[test]
    fn line_counts_match_parallel_class_size() {
        // one direction in AG(2,3): 3 parallel lines
        let g = cfg(3, 1, 2);
        let k = build_kset(&g, &KSpec::parse("line:1").unwrap()).unwrap();
        assert_eq!(k.len(), 1);
        let lines = g.enum_lines(&k);
        assert_eq!(lines.len(), 3);

        // all 7 directions in AG(3,2): 28 lines
        let g = cfg(2, 1, 3);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        assert_eq!(k.len(), 7);
        assert_eq!(g.enum_lines(&k).len(), 28);
    }

    #[test]
    fn each_point_lies_on_k_lines() {
        let g = cfg(2, 2, 2);
        let k = build_kset(&g, &KSpec::parse("random:2:11").unwrap()).unwrap();
        let lines = g.enum_lines(&k);
        assert_eq!(lines.len(), 4 * 2);
        let mut per_point = vec![0usize; g.num_points()];
        for line in &lines {
            for pt in g.line_points(line) {
                per_point[g.point_index(&pt)] += 1;
            }
        }
        assert!(per_point.iter().all(|&c| c == k.len()));
    }

    #[test]
    fn lines_are_canonical_and_lex_ordered_within_class() {
        let g = cfg(2, 1, 3);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        let lines = g.enum_lines(&k);
        for line in &lines {
            let pts = g.line_points(line);
            assert_eq!(pts[0], line.base, "base must be the least point");
            assert_eq!(pts.len() as u32, g.q());
            // canonicalizing through any member point gives the same line
            for pt in &pts {
                assert_eq!(&g.line_through(pt, &line.direction), line);
            }
        }
        // enumeration groups by direction, ascending bases inside a class
        for w in lines.windows(2) {
            if w[0].direction == w[1].direction {
                assert!(w[0].base < w[1].base);
            }
        }
    }

    #[test]
    fn two_lines_share_at_most_one_point() {
        let g = cfg(3, 1, 2);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        let lines = g.enum_lines(&k);
        let sets: Vec<Vec<usize>> = lines
            .iter()
            .map(|l| g.line_points(l).iter().map(|p| g.point_index(p)).collect())
            .collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let common = sets[i].iter().filter(|x| sets[j].contains(x)).count();
                assert!(common <= 1, "lines {i} and {j} share {common} points");
            }
        }
    }

    #[test]
    fn translation_maps_lines_to_lines() {
        let g = cfg(2, 2, 2);
        let k = build_kset(&g, &KSpec::parse("random:3:5").unwrap()).unwrap();
        let lines = g.enum_lines(&k);
        let line_set: std::collections::HashSet<Line> = lines.iter().cloned().collect();
        for v in [vec![1u32, 2], vec![3, 0], vec![2, 3]] {
            for line in &lines {
                let moved = g.translate(&line.base, &v);
                let image = g.line_through(&moved, &line.direction);
                assert!(line_set.contains(&image));
            }
        }
    }

    #[test]
    fn h_k_single_point_counts_hyperplanes_through_it() {
        // hyperplanes of PG(2,2) through one point: 3
        let g = cfg(2, 1, 3);
        let k = build_kset(&g, &KSpec::parse("line:1").unwrap()).unwrap();
        assert_eq!(g.count_h_k(&k), 3);
    }

    #[test]
    fn dual_zero_count_example_and_identity() {
        // n=2, q=2, K = {(1,0)}: functionals [0,0] and [0,1] kill it
        let g = cfg(2, 1, 2);
        let k = crate::ksets::KSet::from_raw_directions(&g, vec![vec![1, 0]], "file").unwrap();
        assert_eq!(g.dual_zero_count(&k), 2);
        assert_eq!(g.count_h_k(&k), 1);

        // identity dual_zero = 1 + (q-1) h_K on assorted nonempty K
        for (p, e, n, spec) in [
            (2u64, 1u32, 3usize, "full"),
            (3, 1, 2, "random:2:9"),
            (2, 2, 2, "random:3:1"),
            (3, 1, 3, "rnc"),
        ] {
            let g = cfg(p, e, n);
            let k = build_kset(&g, &KSpec::parse(spec).unwrap()).unwrap();
            let q = g.q() as usize;
            assert_eq!(
                g.dual_zero_count(&k),
                1 + (q - 1) * g.count_h_k(&k),
                "{spec} on q={q} n={n}"
            );
        }
    }
}
