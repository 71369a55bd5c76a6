//! Direction sets `K` at infinity: the built-in families, seeded random
//! draws, explicit files, and the hyperoval predicate.
//!
//! A `KSet` is always stored canonically (normalized, deduplicated, sorted),
//! so two descriptions of the same set of directions produce identical
//! downstream matrices.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::geometry::{row_basis, GeomConfig, GeomId, ProjPoint};
use crate::util::{binomial, SplitMix64};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KSpec {
    /// Every point of `H`.
    Full,
    /// A subset of a line of `H`.
    Line(LineSpec),
    /// Conic plus nucleus in `PG(2,q)`, `q` even: `q + 2` points, no three
    /// collinear.
    Hyperoval,
    /// Rational normal curve `{(1 : u : u^2 : ... : u^(n-1))}`: `q` points.
    Rnc,
    /// `m` distinct directions drawn with the seeded generator.
    Random { m: usize, seed: u64 },
    /// Explicit directions from a JSON file.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineSpec {
    /// First `m` points of the canonical line, in enumeration order.
    Prefix(usize),
    /// Explicit coordinate vectors, validated to lie on a common line of `H`.
    Points(Vec<Vec<u32>>),
}

impl KSpec {
    /// Mini-language: `full | line:<m> | line:<c,c;c,c;...> | hyperoval |
    /// rnc | random:<m>:<seed> | file:<path>`.
    pub fn parse(s: &str) -> Result<KSpec> {
        match s {
            "full" => return Ok(KSpec::Full),
            "hyperoval" => return Ok(KSpec::Hyperoval),
            "rnc" => return Ok(KSpec::Rnc),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("line:") {
            if rest.contains(',') || rest.contains(';') {
                let pts = rest
                    .split(';')
                    .map(|pt| {
                        pt.split(',')
                            .map(|c| {
                                c.trim().parse::<u32>().map_err(|_| {
                                    Error::Parse(format!("bad coordinate {c:?} in {s:?}"))
                                })
                            })
                            .collect::<Result<Vec<u32>>>()
                    })
                    .collect::<Result<Vec<Vec<u32>>>>()?;
                return Ok(KSpec::Line(LineSpec::Points(pts)));
            }
            let m = rest
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad line size {rest:?}")))?;
            return Ok(KSpec::Line(LineSpec::Prefix(m)));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (m, seed) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("random spec needs m:seed, got {s:?}")))?;
            let m = m
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad size {m:?}")))?;
            let seed = seed
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad seed {seed:?}")))?;
            return Ok(KSpec::Random { m, seed });
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(KSpec::File(PathBuf::from(rest)));
        }
        Err(Error::Parse(format!("unrecognized K spec {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSet {
    geom: GeomId,
    directions: Vec<ProjPoint>,
    tag: String,
}

impl KSet {
    /// Normalizes, deduplicates, and sorts. Rejects zero vectors and
    /// out-of-range coordinates.
    pub fn from_raw_directions(
        cfg: &GeomConfig,
        raw: Vec<Vec<u32>>,
        tag: &str,
    ) -> Result<KSet> {
        let mut directions = raw
            .into_iter()
            .map(|v| {
                if v.len() != cfg.n() {
                    return Err(Error::InvalidKSet(format!(
                        "direction has {} coordinates, geometry has n={}",
                        v.len(),
                        cfg.n()
                    )));
                }
                ProjPoint::new(cfg.fld(), v)
            })
            .collect::<Result<Vec<ProjPoint>>>()?;
        directions.sort_unstable();
        directions.dedup();
        Ok(KSet {
            geom: cfg.id(),
            directions,
            tag: tag.to_string(),
        })
    }

    pub fn from_points(cfg: &GeomConfig, pts: Vec<ProjPoint>, tag: &str) -> KSet {
        let mut directions = pts;
        directions.sort_unstable();
        directions.dedup();
        KSet {
            geom: cfg.id(),
            directions,
            tag: tag.to_string(),
        }
    }

    pub fn directions(&self) -> &[ProjPoint] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn check_geometry(&self, cfg: &GeomConfig) -> Result<()> {
        if self.geom != cfg.id() {
            return Err(Error::InvalidKSet(format!(
                "K built for (p={}, e={}, n={}), used with (p={}, e={}, n={})",
                self.geom.p,
                self.geom.e,
                self.geom.n,
                cfg.id().p,
                cfg.id().e,
                cfg.id().n
            )));
        }
        Ok(())
    }

    /// Serializable form matching the on-disk JSON.
    pub fn to_file_json(&self) -> String {
        let file = KSetFile {
            p: self.geom.p as u64,
            e: self.geom.e,
            n: self.geom.n,
            directions: self
                .directions
                .iter()
                .map(|d| d.coords().to_vec())
                .collect(),
        };
        serde_json::to_string(&file).expect("kset serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct KSetFile {
    p: u64,
    e: u32,
    n: usize,
    directions: Vec<Vec<u32>>,
}

/// The canonical line of `H`: points whose first `n - 2` coordinates are 0
/// (all of `H` when n = 2), in enumeration order. `q + 1` points.
pub fn canonical_line_points(cfg: &GeomConfig) -> Vec<ProjPoint> {
    cfg.h_points()
        .into_iter()
        .filter(|pt| pt.coords()[..cfg.n() - 2].iter().all(|&c| c == 0))
        .collect()
}

pub fn build_kset(cfg: &GeomConfig, spec: &KSpec) -> Result<KSet> {
    match spec {
        KSpec::Full => Ok(KSet::from_points(cfg, cfg.h_points(), "full")),
        KSpec::Line(line) => build_line_kset(cfg, line),
        KSpec::Hyperoval => build_hyperoval(cfg),
        KSpec::Rnc => {
            let f = cfg.fld();
            let pts = f
                .elements()
                .map(|u| {
                    let coords = (0..cfg.n()).map(|i| f.pow(u, i as u64)).collect();
                    ProjPoint::new(f, coords).expect("leading 1 is nonzero")
                })
                .collect();
            Ok(KSet::from_points(cfg, pts, "rnc"))
        }
        KSpec::Random { m, seed } => {
            let h = cfg.h_points();
            if *m > h.len() {
                return Err(Error::InvalidKSet(format!(
                    "requested {} directions, H has only {}",
                    m,
                    h.len()
                )));
            }
            let mut rng = SplitMix64::new(*seed);
            let picked = rng
                .sample_distinct(h.len(), *m)
                .into_iter()
                .map(|i| h[i].clone())
                .collect();
            Ok(KSet::from_points(cfg, picked, "random"))
        }
        KSpec::File(path) => load_kset(cfg, path),
    }
}

fn build_line_kset(cfg: &GeomConfig, spec: &LineSpec) -> Result<KSet> {
    match spec {
        LineSpec::Prefix(m) => {
            let line = canonical_line_points(cfg);
            if *m == 0 || *m > line.len() {
                return Err(Error::InvalidKSet(format!(
                    "line prefix size {} out of range 1..={}",
                    m,
                    line.len()
                )));
            }
            Ok(KSet::from_points(cfg, line[..*m].to_vec(), "line"))
        }
        LineSpec::Points(raw) => {
            let k = KSet::from_raw_directions(cfg, raw.clone(), "line")?;
            if k.is_empty() {
                return Err(Error::InvalidKSet("line spec needs at least one point".into()));
            }
            let vecs: Vec<Vec<u32>> = k
                .directions()
                .iter()
                .map(|d| d.coords().to_vec())
                .collect();
            if row_basis(cfg.fld(), &vecs).len() > 2 {
                return Err(Error::InvalidKSet(
                    "points do not lie on a common line of H".into(),
                ));
            }
            Ok(k)
        }
    }
}

fn build_hyperoval(cfg: &GeomConfig) -> Result<KSet> {
    if cfg.n() != 3 {
        return Err(Error::InvalidKSet(format!(
            "hyperovals live in PG(2,q), need n = 3, got n = {}",
            cfg.n()
        )));
    }
    if cfg.fld().p() != 2 {
        return Err(Error::InvalidKSet(
            "hyperovals require even q (conic plus nucleus)".into(),
        ));
    }
    let f = cfg.fld();
    let mut pts: Vec<ProjPoint> = f
        .elements()
        .map(|t| ProjPoint::new(f, vec![1, t, f.mul(t, t)]).unwrap())
        .collect();
    pts.push(ProjPoint::new(f, vec![0, 0, 1]).unwrap()); // conic's point at infinity
    pts.push(ProjPoint::new(f, vec![0, 1, 0]).unwrap()); // nucleus
    let k = KSet::from_points(cfg, pts, "hyperoval");
    debug_assert!(is_hyperoval(cfg, &k).unwrap());
    Ok(k)
}

fn load_kset(cfg: &GeomConfig, path: &Path) -> Result<KSet> {
    let text = std::fs::read_to_string(path)?;
    let file: KSetFile = serde_json::from_str(&text)?;
    let id = cfg.id();
    if file.p != id.p as u64 || file.e != id.e || file.n != id.n {
        return Err(Error::InvalidKSet(format!(
            "file is for (p={}, e={}, n={}), geometry is (p={}, e={}, n={})",
            file.p, file.e, file.n, id.p, id.e, id.n
        )));
    }
    KSet::from_raw_directions(cfg, file.directions, "file")
}

/// True iff `|K| = q + 2` and every line of `H = PG(2,q)` meets `K` in 0 or
/// 2 points. Defined only for n = 3.
pub fn is_hyperoval(cfg: &GeomConfig, k: &KSet) -> Result<bool> {
    if cfg.n() != 3 {
        return Err(Error::InvalidArgument(
            "the hyperoval predicate is defined for n = 3 only".into(),
        ));
    }
    k.check_geometry(cfg)?;
    if k.len() != cfg.q() as usize + 2 {
        return Ok(false);
    }
    // lines of H are the zero sets of normalized functionals
    for theta in cfg.normalized_functionals() {
        let hits = k
            .directions()
            .iter()
            .filter(|u| cfg.eval(&theta, u.coords()) == 0)
            .count();
        if hits != 0 && hits != 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Secant count oracle: a hyperoval has no tangent lines, so the lines
/// meeting it are exactly the `C(q+2, 2)` secants.
pub fn hyperoval_secant_count(q: u64) -> u64 {
    binomial(q + 2, 2) as u64
}
