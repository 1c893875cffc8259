//! The least order `C(d)` of a circulant graph of algebraic degree `d`.
//!
//! For `d > 1`, `C(d)` is the least `n` with `2d | phi(n)`; it never exceeds
//! `p_d`, the least prime `≡ 1 (mod 2d)`. `C(1) = 1` (the graph `K_1`).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::circulant::{self, ConnectionSet};
use crate::error::{invalid, Error, Result};
use crate::numtheory;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: u64,
    pub c_of_d: u64,
    pub p_d: u64,
    pub strict: bool,
    pub witness: ConnectionSet,
}

/// `(d, C(d), p_d, strict)` for `1 <= d <= 100` as published.
pub const GOLDEN_TABLE: [(u64, u64, u64, bool); 100] = [
    (1, 1, 3, true),
    (2, 5, 5, false),
    (3, 7, 7, false),
    (4, 15, 17, true),
    (5, 11, 11, false),
    (6, 13, 13, false),
    (7, 29, 29, false),
    (8, 17, 17, false),
    (9, 19, 19, false),
    (10, 25, 41, true),
    (11, 23, 23, false),
    (12, 35, 73, true),
    (13, 53, 53, false),
    (14, 29, 29, false),
    (15, 31, 31, false),
    (16, 51, 97, true),
    (17, 103, 103, false),
    (18, 37, 37, false),
    (19, 191, 191, false),
    (20, 41, 41, false),
    (21, 43, 43, false),
    (22, 69, 89, true),
    (23, 47, 47, false),
    (24, 65, 97, true),
    (25, 101, 101, false),
    (26, 53, 53, false),
    (27, 81, 109, true),
    (28, 87, 113, true),
    (29, 59, 59, false),
    (30, 61, 61, false),
    (31, 311, 311, false),
    (32, 85, 193, true),
    (33, 67, 67, false),
    (34, 137, 137, false),
    (35, 71, 71, false),
    (36, 73, 73, false),
    (37, 149, 149, false),
    (38, 229, 229, false),
    (39, 79, 79, false),
    (40, 123, 241, true),
    (41, 83, 83, false),
    (42, 129, 337, true),
    (43, 173, 173, false),
    (44, 89, 89, false),
    (45, 181, 181, false),
    (46, 141, 277, true),
    (47, 283, 283, false),
    (48, 97, 97, false),
    (49, 197, 197, false),
    (50, 101, 101, false),
    (51, 103, 103, false),
    (52, 159, 313, true),
    (53, 107, 107, false),
    (54, 109, 109, false),
    (55, 121, 331, true),
    (56, 113, 113, false),
    (57, 229, 229, false),
    (58, 177, 233, true),
    (59, 709, 709, false),
    (60, 143, 241, true),
    (61, 367, 367, false),
    (62, 373, 373, false),
    (63, 127, 127, false),
    (64, 255, 257, true),
    (65, 131, 131, false),
    (66, 161, 397, true),
    (67, 269, 269, false),
    (68, 137, 137, false),
    (69, 139, 139, false),
    (70, 213, 281, true),
    (71, 569, 569, false),
    (72, 185, 433, true),
    (73, 293, 293, false),
    (74, 149, 149, false),
    (75, 151, 151, false),
    (76, 457, 457, false),
    (77, 463, 463, false),
    (78, 157, 157, false),
    (79, 317, 317, false),
    (80, 187, 641, true),
    (81, 163, 163, false),
    (82, 249, 821, true),
    (83, 167, 167, false),
    (84, 203, 337, true),
    (85, 1021, 1021, false),
    (86, 173, 173, false),
    (87, 349, 349, false),
    (88, 267, 353, true),
    (89, 179, 179, false),
    (90, 181, 181, false),
    (91, 547, 547, false),
    (92, 235, 1289, true),
    (93, 373, 373, false),
    (94, 849, 941, true),
    (95, 191, 191, false),
    (96, 193, 193, false),
    (97, 389, 389, false),
    (98, 197, 197, false),
    (99, 199, 199, false),
    (100, 275, 401, true),
];

/// `C(d)`.
pub fn min_order(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    if d == 1 {
        return Ok(1);
    }
    let p = numtheory::smallest_prime_1_mod_2d(d)?;
    for n in 3..p {
        if numtheory::euler_phi(n)? % (2 * d) == 0 {
            return Ok(n);
        }
    }
    Ok(p)
}

fn row(d: u64) -> Result<TableRow> {
    let c = min_order(d)?;
    let p = numtheory::smallest_prime_1_mod_2d(d)?;
    let witness = if d == 1 {
        ConnectionSet::empty(1)?
    } else {
        circulant::regular_construction(c, d)?
    };
    let deg = circulant::algebraic_degree(&witness);
    if deg != d {
        return Err(Error::Construction(format!(
            "witness {witness} for d = {d} has degree {deg}"
        )));
    }
    Ok(TableRow {
        d,
        c_of_d: c,
        p_d: p,
        strict: c < p,
        witness,
    })
}

/// Rows `d = 1..=d_max`, each with a verified witness on `C(d)` vertices.
pub fn table(d_max: u64) -> Result<Vec<TableRow>> {
    if d_max == 0 {
        return Err(invalid("d_max must be at least 1"));
    }
    (1..=d_max).map(row).collect()
}

/// Degrees `d <= d_max` with `C(d) < p_d`.
pub fn strict_rows(d_max: u64) -> Result<Vec<u64>> {
    if d_max == 0 {
        return Err(invalid("d_max must be at least 1"));
    }
    let mut out = Vec::new();
    for d in 1..=d_max {
        if min_order(d)? < numtheory::smallest_prime_1_mod_2d(d)? {
            out.push(d);
        }
    }
    Ok(out)
}

/// A row that disagrees with [`GOLDEN_TABLE`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenMismatch {
    pub d: u64,
    pub expected: (u64, u64, bool),
    pub found: (u64, u64, bool),
}

/// Compares the rows with `d <= 100` against the published table.
pub fn check_against_golden(rows: &[TableRow]) -> Vec<GoldenMismatch> {
    rows.iter()
        .filter(|r| (1..=100).contains(&r.d))
        .filter_map(|r| {
            let (_, c, p, strict) = GOLDEN_TABLE[(r.d - 1) as usize];
            let found = (r.c_of_d, r.p_d, r.strict);
            (found != (c, p, strict)).then_some(GoldenMismatch {
                d: r.d,
                expected: (c, p, strict),
                found,
            })
        })
        .collect()
}

/// CSV with header `d,C(d),p_d,strict,witness`, LF line endings.
pub fn write_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["d", "C(d)", "p_d", "strict", "witness"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            r.c_of_d.to_string(),
            r.p_d.to_string(),
            r.strict.to_string(),
            r.witness.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn to_csv_string(rows: &[TableRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_json_string(rows: &[TableRow]) -> Result<String> {
    serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))
}
