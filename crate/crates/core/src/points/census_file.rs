//! Line-oriented census files.
//!
//! ```text
//! #census v1 variety=sphere2 p=5 max_k=1
//! k 0 h 1 coords -1 0 0 / 1
//! ...
//! k 1 h 5 coords -4 -3 0 / 5
//! ```
//!
//! Points are listed bucket by bucket, lexicographically by numerators.
//! Indefinite varieties append ` cap=<B>` to the header. Sphere files list
//! every point; reading folds them back into orbit representatives and
//! rejects files that are not closed under the symmetry.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{canonical_rep, orbit_size, primitive_reduce, EnumeratedPoint, HeightCensus, VarietySpec};
use crate::arith::Prime;
use crate::error::{Error, Result};

pub fn write_census<W: Write>(census: &HeightCensus, mut w: W) -> std::io::Result<()> {
    write!(
        w,
        "#census v1 variety={} p={} max_k={}",
        census.variety().tag(),
        census.p(),
        census.max_k()
    )?;
    if let Some(cap) = census.cap() {
        write!(w, " cap={cap}")?;
    }
    writeln!(w)?;
    for k in 0..=census.max_k() {
        for pt in census.bucket_points(k) {
            write!(w, "k {} h {} coords", k, pt.height())?;
            for a in pt.numerators() {
                write!(w, " {a}")?;
            }
            writeln!(w, " / {}", pt.denominator())?;
        }
    }
    w.flush()
}

pub fn write_census_file(census: &HeightCensus, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_census(census, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct Header {
    variety: VarietySpec,
    p: Prime,
    max_k: u32,
    cap: Option<u64>,
}

fn parse_header(line: &str) -> Result<Header> {
    let mut fields = line.split(' ');
    if fields.next() != Some("#census") || fields.next() != Some("v1") {
        return Err(parse_err(1, "expected '#census v1' header"));
    }
    let mut variety = None;
    let mut p = None;
    let mut max_k = None;
    let mut cap = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("malformed header field {field:?}")))?;
        let num = || value.parse::<u64>().map_err(|_| parse_err(1, format!("bad {key}")));
        match key {
            "variety" => variety = Some(value.parse::<VarietySpec>()?),
            "p" => p = Some(Prime::new(num()?)?),
            "max_k" => max_k = Some(num()? as u32),
            "cap" => cap = Some(num()?),
            _ => return Err(parse_err(1, format!("unknown header field {key:?}"))),
        }
    }
    Ok(Header {
        variety: variety.ok_or_else(|| parse_err(1, "missing variety"))?,
        p: p.ok_or_else(|| parse_err(1, "missing p"))?,
        max_k: max_k.ok_or_else(|| parse_err(1, "missing max_k"))?,
        cap,
    })
}

fn parse_point(line: &str, lineno: usize, header: &Header) -> Result<EnumeratedPoint> {
    let toks: Vec<&str> = line.split(' ').collect();
    let n = header.variety.ambient_dim();
    if toks.len() != 7 + n || toks[0] != "k" || toks[2] != "h" || toks[4] != "coords" || toks[5 + n] != "/" {
        return Err(parse_err(lineno, "expected 'k <k> h <h> coords <a1> ... <an> / <den>'"));
    }
    let int = |s: &str| {
        s.parse::<i64>()
            .map_err(|_| parse_err(lineno, format!("bad integer {s:?}")))
    };
    let k = int(toks[1])? as u32;
    let h = int(toks[3])? as u64;
    let nums = toks[5..5 + n].iter().map(|t| int(t)).collect::<Result<Vec<_>>>()?;
    let den = int(toks[6 + n])? as u64;
    if k > header.max_k {
        return Err(parse_err(lineno, format!("k = {k} exceeds max_k")));
    }
    let pt = primitive_reduce(&nums, header.p, k).ok_or_else(|| parse_err(lineno, "imprimitive point"))?;
    if pt.denominator() != den {
        return Err(parse_err(lineno, format!("denominator {den} is not p^{k}")));
    }
    if pt.height() != h {
        return Err(parse_err(lineno, format!("height {h} does not match the point")));
    }
    if !header.variety.satisfies(&nums, den) {
        return Err(parse_err(lineno, "point is not on the variety"));
    }
    Ok(pt)
}

pub fn read_census<R: BufRead>(r: R) -> Result<HeightCensus> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?
        .map_err(|e| Error::io("<census>", e))?;
    let header = parse_header(&first)?;
    let symmetric = header.variety.has_signed_permutation_symmetry();
    let mut points = Vec::new();
    let mut orbit_counts: BTreeMap<(u32, Vec<i64>), u64> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io("<census>", e))?;
        if line.is_empty() {
            continue;
        }
        let pt = parse_point(&line, i + 2, &header)?;
        if symmetric {
            *orbit_counts
                .entry((pt.denominator_exponent(), canonical_rep(pt.numerators())))
                .or_default() += 1;
        }
        points.push(pt);
    }
    for ((k, rep), count) in &orbit_counts {
        if *count != orbit_size(rep) {
            return Err(parse_err(
                0,
                format!("bucket {k}: orbit of {rep:?} has {count} of {} points", orbit_size(rep)),
            ));
        }
    }
    HeightCensus::from_points(header.variety, header.p, header.max_k, header.cap, points)
}

pub fn read_census_file(path: &Path) -> Result<HeightCensus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_census(BufReader::new(file))
}
