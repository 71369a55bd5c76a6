//! The point-line incidence matrix `N` and its on-disk interchange formats.
//!
//! `N` has `q^n` rows (affine points, enumeration order) and `q^(n-1)|K|`
//! columns (lines, enumeration order); entry 1 means the point lies on the
//! line. Stored column-sparse; the row adjacency is derived on demand and
//! cached. Exports are byte-reproducible: LF endings, single spaces, no
//! trailing whitespace.

use std::io::Write;
use std::sync::OnceLock;

use crate::geometry::GeomConfig;
use crate::ksets::KSet;
use crate::{Error, Result};

pub const DEFAULT_NNZ_BUDGET: u64 = 10_000_000;

/// Which matrix a consumer wants: `N` itself (rows = points, the
/// parity-check of the line-indexed code) or its transpose (rows = lines,
/// the parity-check of the point-indexed code).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    N,
    Nt,
}

impl std::str::FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Orientation> {
        match s {
            "N" => Ok(Orientation::N),
            "NT" | "Nt" | "nt" => Ok(Orientation::Nt),
            _ => Err(Error::Parse(format!("orientation must be N or NT, got {s:?}"))),
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orientation::N => "N",
            Orientation::Nt => "NT",
        })
    }
}

#[derive(Debug)]
pub struct SparseIncidence {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<Vec<usize>>,
    rows: OnceLock<Vec<Vec<usize>>>,
}

impl SparseIncidence {
    /// `cols[j]` lists the rows where column `j` is 1, strictly ascending.
    pub fn from_columns(n_rows: usize, cols: Vec<Vec<usize>>) -> Result<SparseIncidence> {
        for (j, col) in cols.iter().enumerate() {
            for w in col.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidArgument(format!(
                        "column {j} is not strictly ascending"
                    )));
                }
            }
            if col.last().is_some_and(|&r| r >= n_rows) {
                return Err(Error::InvalidArgument(format!(
                    "column {j} has a row index out of range"
                )));
            }
        }
        Ok(SparseIncidence {
            n_rows,
            n_cols: cols.len(),
            cols,
            rows: OnceLock::new(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Row adjacency (columns incident to each row), built on first use.
    pub fn rows(&self) -> &[Vec<usize>] {
        self.rows.get_or_init(|| {
            let mut rows = vec![Vec::new(); self.n_rows];
            for (j, col) in self.cols.iter().enumerate() {
                for &r in col {
                    rows[r].push(j);
                }
            }
            rows
        })
    }

    fn oriented(&self, orient: Orientation) -> (usize, usize, &[Vec<usize>], &[Vec<usize>]) {
        match orient {
            Orientation::N => (self.n_rows, self.n_cols, &self.cols, self.rows()),
            Orientation::Nt => (self.n_cols, self.n_rows, self.rows(), &self.cols),
        }
    }

    /// Dense 0/1 copy of the oriented matrix.
    pub fn to_dense(&self, orient: Orientation) -> Vec<Vec<i64>> {
        let (nr, nc, cols, _) = self.oriented(orient);
        let mut m = vec![vec![0i64; nc]; nr];
        for (j, col) in cols.iter().enumerate() {
            for &r in col {
                m[r][j] = 1;
            }
        }
        m
    }

    /// MacKay alist: header `n_cols n_rows` of the oriented matrix
    /// (checks are the rows), then max degrees, per-column and per-row
    /// degrees, then 1-based index lists, columns first.
    pub fn write_alist<W: Write>(&self, orient: Orientation, w: &mut W) -> Result<()> {
        let (_, _, cols, rows) = self.oriented(orient);
        writeln!(w, "{} {}", cols.len(), rows.len())?;
        let max_col = cols.iter().map(|c| c.len()).max().unwrap_or(0);
        let max_row = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        writeln!(w, "{max_col} {max_row}")?;
        writeln!(w, "{}", join(cols.iter().map(|c| c.len())))?;
        writeln!(w, "{}", join(rows.iter().map(|r| r.len())))?;
        for col in cols {
            writeln!(w, "{}", join(col.iter().map(|&r| r + 1)))?;
        }
        for row in rows {
            writeln!(w, "{}", join(row.iter().map(|&c| c + 1)))?;
        }
        Ok(())
    }

    pub fn alist_string(&self, orient: Orientation) -> String {
        let mut buf = Vec::new();
        self.write_alist(orient, &mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("alist is ascii")
    }

    /// MatrixMarket coordinate-pattern form of the oriented matrix,
    /// entries 1-based and sorted by (column, row).
    pub fn write_matrix_market<W: Write>(&self, orient: Orientation, w: &mut W) -> Result<()> {
        let (nr, nc, cols, _) = self.oriented(orient);
        writeln!(w, "%%MatrixMarket matrix coordinate pattern general")?;
        let nnz: usize = cols.iter().map(|c| c.len()).sum();
        writeln!(w, "{nr} {nc} {nnz}")?;
        for (j, col) in cols.iter().enumerate() {
            for &r in col {
                writeln!(w, "{} {}", r + 1, j + 1)?;
            }
        }
        Ok(())
    }

    pub fn matrix_market_string(&self, orient: Orientation) -> String {
        let mut buf = Vec::new();
        self.write_matrix_market(orient, &mut buf)
            .expect("in-memory write");
        String::from_utf8(buf).expect("matrix market is ascii")
    }
}

fn join(items: impl Iterator<Item = usize>) -> String {
    items
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn build_incidence(cfg: &GeomConfig, k: &KSet) -> Result<SparseIncidence> {
    build_incidence_with_budget(cfg, k, DEFAULT_NNZ_BUDGET)
}

pub fn build_incidence_with_budget(
    cfg: &GeomConfig,
    k: &KSet,
    nnz_budget: u64,
) -> Result<SparseIncidence> {
    k.check_geometry(cfg)?;
    let nnz = cfg.num_points() as u64 * k.len() as u64;
    if nnz > nnz_budget {
        return Err(Error::BudgetExceeded(format!(
            "incidence matrix would have {nnz} nonzeros, budget is {nnz_budget}"
        )));
    }
    let lines = cfg.enum_lines(k);
    let cols = lines
        .iter()
        .map(|line| {
            cfg.line_points(line)
                .iter()
                .map(|p| cfg.point_index(p))
                .collect()
        })
        .collect();
    SparseIncidence::from_columns(cfg.num_points(), cols)
}

/// Inverse of `write_alist`, for round-trip checks and foreign files.
pub fn parse_alist(text: &str) -> Result<SparseIncidence> {
    let mut lines = text.lines();
    let mut next_ints = |expect: &str| -> Result<Vec<usize>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("alist truncated, expected {expect}")))?;
        line.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad integer {t:?} in {expect}")))
            })
            .collect()
    };
    let header = next_ints("header")?;
    if header.len() != 2 {
        return Err(Error::Parse("alist header must be `n_cols n_rows`".into()));
    }
    let (n_cols, n_rows) = (header[0], header[1]);
    let _max = next_ints("max degrees")?;
    let col_deg = next_ints("column degrees")?;
    let row_deg = next_ints("row degrees")?;
    if col_deg.len() != n_cols || row_deg.len() != n_rows {
        return Err(Error::Parse("alist degree list lengths disagree with header".into()));
    }
    let mut cols = Vec::with_capacity(n_cols);
    for (j, &d) in col_deg.iter().enumerate() {
        let mut col = next_ints("column entries")?;
        if col.len() != d {
            return Err(Error::Parse(format!("column {j} lists {} entries, degree says {d}", col.len())));
        }
        for r in col.iter_mut() {
            if *r == 0 || *r > n_rows {
                return Err(Error::Parse(format!("row index {r} out of range in column {j}")));
            }
            *r -= 1;
        }
        cols.push(col);
    }
    // row lists are redundant; verify them against the column lists
    let mut rows_seen = vec![Vec::new(); n_rows];
    for (j, col) in cols.iter().enumerate() {
        for &r in col {
            rows_seen[r].push(j);
        }
    }
    for (r, &d) in row_deg.iter().enumerate() {
        let mut row = next_ints("row entries")?;
        if row.len() != d {
            return Err(Error::Parse(format!("row {r} lists {} entries, degree says {d}", row.len())));
        }
        for c in row.iter_mut() {
            if *c == 0 || *c > n_cols {
                return Err(Error::Parse(format!("column index {c} out of range in row {r}")));
            }
            *c -= 1;
        }
        if row != rows_seen[r] {
            return Err(Error::Parse(format!("row {r} disagrees with column lists")));
        }
    }
    SparseIncidence::from_columns(n_rows, cols)
}

/// Inverse of `write_matrix_market` for coordinate-pattern files.
pub fn parse_matrix_market(text: &str) -> Result<SparseIncidence> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix market file".into()))?;
    if !header.starts_with("%%MatrixMarket matrix coordinate pattern") {
        return Err(Error::Parse(format!("unsupported matrix market header {header:?}")));
    }
    let mut body = lines.filter(|l| !l.starts_with('%'));
    let size = body
        .next()
        .ok_or_else(|| Error::Parse("matrix market file has no size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad size token {t:?}"))))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(Error::Parse("size line must be `rows cols nnz`".into()));
    }
    let (n_rows, n_cols, nnz) = (dims[0], dims[1], dims[2]);
    let mut cols = vec![Vec::new(); n_cols];
    let mut seen = 0usize;
    for entry in body {
        let toks: Vec<usize> = entry
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad entry token {t:?}"))))
            .collect::<Result<_>>()?;
        if toks.len() != 2 {
            return Err(Error::Parse(format!("pattern entries have two fields, got {entry:?}")));
        }
        let (r, c) = (toks[0], toks[1]);
        if r == 0 || r > n_rows || c == 0 || c > n_cols {
            return Err(Error::Parse(format!("entry {r} {c} out of range")));
        }
        cols[c - 1].push(r - 1);
        seen += 1;
    }
    if seen != nnz {
        return Err(Error::Parse(format!("size line promises {nnz} entries, file has {seen}")));
    }
    for col in cols.iter_mut() {
        col.sort_unstable();
        col.dedup();
    }
    SparseIncidence::from_columns(n_rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ksets::{build_kset, KSet, KSpec};
    use proptest::prelude::*;

    fn cfg(p: u64, e: u32, n: usize) -> GeomConfig {
        GeomConfig::new(p, e, n).unwrap()
    }

    fn small_parallel_class() -> SparseIncidence {
        // AG(2,2), K = {(0:1)}: two vertical lines
        let g = cfg(2, 1, 2);
        let k = build_kset(&g, &KSpec::parse("line:0,1").unwrap()).unwrap();
        build_incidence(&g, &k).unwrap()
    }

    #[test]
    fn dimensions_and_weights() {
        let g = cfg(2, 2, 3);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        let m = build_incidence(&g, &k).unwrap();
        assert_eq!(m.n_rows(), 64);
        assert_eq!(m.n_cols(), 16 * 21);
        assert_eq!(m.nnz(), 64 * 21);
        assert!(m.cols().iter().all(|c| c.len() == 4), "column weight q");
        assert!(m.rows().iter().all(|r| r.len() == 21), "row weight |K|");
    }

    #[test]
    fn empty_k_gives_zero_columns() {
        let g = cfg(2, 1, 2);
        let k = KSet::from_raw_directions(&g, vec![], "file").unwrap();
        let m = build_incidence(&g, &k).unwrap();
        assert_eq!(m.n_cols(), 0);
        assert_eq!(m.n_rows(), 4);
        let text = m.alist_string(Orientation::N);
        assert!(text.starts_with("0 4\n0 0\n"));
        assert!(parse_alist(&text).is_ok());
    }

    #[test]
    fn budget_is_enforced() {
        let g = cfg(3, 1, 3);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        assert!(matches!(
            build_incidence_with_budget(&g, &k, 10),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn rebuild_from_permuted_k_is_identical() {
        let g = cfg(3, 1, 2);
        let a = KSet::from_raw_directions(&g, vec![vec![1, 2], vec![0, 1], vec![1, 0]], "file")
            .unwrap();
        let b = KSet::from_raw_directions(&g, vec![vec![1, 0], vec![1, 2], vec![0, 2]], "file")
            .unwrap();
        assert_eq!(a.directions(), b.directions());
        let ma = build_incidence(&g, &a).unwrap();
        let mb = build_incidence(&g, &b).unwrap();
        assert_eq!(ma.cols(), mb.cols());
        assert_eq!(ma.alist_string(Orientation::N), mb.alist_string(Orientation::N));
    }

    #[test]
    fn alist_exact_bytes_for_parallel_class() {
        let m = small_parallel_class();
        assert_eq!(
            m.alist_string(Orientation::N),
            "2 4\n2 1\n2 2\n1 1 1 1\n1 2\n3 4\n1\n1\n2\n2\n"
        );
        assert_eq!(
            m.alist_string(Orientation::Nt),
            "4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2\n3 4\n"
        );
    }

    #[test]
    fn matrix_market_exact_bytes_for_parallel_class() {
        let m = small_parallel_class();
        assert_eq!(
            m.matrix_market_string(Orientation::N),
            "%%MatrixMarket matrix coordinate pattern general\n4 2 4\n1 1\n2 1\n3 2\n4 2\n"
        );
        assert_eq!(
            m.matrix_market_string(Orientation::Nt),
            "%%MatrixMarket matrix coordinate pattern general\n2 4 4\n1 1\n1 2\n2 3\n2 4\n"
        );
    }

    #[test]
    fn round_trips_reproduce_columns() {
        let g = cfg(2, 1, 3);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        let m = build_incidence(&g, &k).unwrap();
        for orient in [Orientation::N, Orientation::Nt] {
            let parsed = parse_alist(&m.alist_string(orient)).unwrap();
            let (r, c, cols, _) = m.oriented(orient);
            assert_eq!(parsed.n_rows(), r);
            assert_eq!(parsed.n_cols(), c);
            assert_eq!(parsed.cols(), cols);
            let parsed = parse_matrix_market(&m.matrix_market_string(orient)).unwrap();
            assert_eq!(parsed.cols(), cols);
        }
    }

    #[test]
    fn parse_rejects_malformed_files() {
        assert!(parse_alist("1 1\n").is_err()); // truncated
        assert!(parse_alist("1 1\n1 1\n2\n1\n1\n1\n").is_err()); // degree mismatch
        assert!(parse_matrix_market("nonsense\n1 1 0\n").is_err());
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n"
        )
        .is_err()); // out of range
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n"
        )
        .is_err()); // count mismatch
    }

    #[test]
    fn no_trailing_whitespace_or_crlf() {
        let g = cfg(3, 1, 2);
        let k = build_kset(&g, &KSpec::Full).unwrap();
        let m = build_incidence(&g, &k).unwrap();
        for text in [
            m.alist_string(Orientation::N),
            m.matrix_market_string(Orientation::Nt),
        ] {
            assert!(!text.contains('\r'));
            assert!(text.ends_with('\n'));
            for line in text.lines() {
                assert_eq!(line.trim_end(), line, "trailing whitespace in {line:?}");
            }
        }
    }

    proptest! {
        // Round-trip on arbitrary sparse 0/1 matrices, not just incidence
        // shapes, so the parsers earn their keep independently.
        #[test]
        fn alist_and_mm_round_trip_random(n_rows in 1usize..12, raw in proptest::collection::vec(proptest::collection::vec(0usize..12, 0..6), 0..10)) {
            let cols: Vec<Vec<usize>> = raw
                .into_iter()
                .map(|mut c| {
                    c.iter_mut().for_each(|r| *r %= n_rows);
                    c.sort_unstable();
                    c.dedup();
                    c
                })
                .collect();
            let m = SparseIncidence::from_columns(n_rows, cols).unwrap();
            let back = parse_alist(&m.alist_string(Orientation::N)).unwrap();
            prop_assert_eq!(back.cols(), m.cols());
            let back = parse_matrix_market(&m.matrix_market_string(Orientation::N)).unwrap();
            prop_assert_eq!(back.cols(), m.cols());
        }
    }
}
