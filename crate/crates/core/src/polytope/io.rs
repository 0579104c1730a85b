//! cdd-style `.ine`/`.ext` text and JSON serialization.
//!
//! An H-representation row `b -a` means `b - a.x >= 0`. Row kinds and labels
//! travel in `*` comment lines so that a written file re-reads to an identical
//! object; plain cdd files without them parse as `<=` rows with generated labels.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::exact::Rational;

use super::{ConstraintKind, HRep, LinConstraint, PolytopeError, VRep};

fn kind_tag(k: ConstraintKind) -> &'static str {
    match k {
        ConstraintKind::Le => "le",
        ConstraintKind::Ge => "ge",
        ConstraintKind::Eq => "eq",
    }
}

pub fn write_hrep_cdd(h: &HRep) -> String {
    let mut s = String::new();
    for (i, (c, l)) in h.iter().enumerate() {
        writeln!(s, "* row {} {} {}", i + 1, kind_tag(c.kind), l).unwrap();
    }
    s.push_str("H-representation\n");
    let lin: Vec<String> = h
        .constraints()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == ConstraintKind::Eq)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    if !lin.is_empty() {
        writeln!(s, "linearity {} {}", lin.len(), lin.join(" ")).unwrap();
    }
    s.push_str("begin\n");
    writeln!(s, " {} {} rational", h.len(), h.dim() + 1).unwrap();
    for c in h.constraints() {
        let (b, a): (Rational, Vec<Rational>) = match c.kind {
            ConstraintKind::Ge => (-&c.rhs, c.coeffs.clone()),
            _ => (c.rhs.clone(), c.coeffs.iter().map(|x| -x).collect()),
        };
        s.push(' ');
        s.push_str(&b.to_string());
        for x in a {
            s.push(' ');
            s.push_str(&x.to_string());
        }
        s.push('\n');
    }
    s.push_str("end\n");
    s
}

struct Block {
    rows: Vec<Vec<Rational>>,
    cols: usize,
    linearity: Vec<usize>,
    comments: Vec<String>,
}

fn parse_block(text: &str, header: &str) -> Result<Block, PolytopeError> {
    let bad = |m: &str| PolytopeError::Format(m.to_string());
    let mut comments = Vec::new();
    let mut linearity = Vec::new();
    let mut lines = text.lines().map(str::trim);
    let mut seen_header = false;
    loop {
        let line = lines.next().ok_or_else(|| bad("missing 'begin'"))?;
        if let Some(c) = line.strip_prefix('*') {
            comments.push(c.trim().to_string());
        } else if line == header {
            seen_header = true;
        } else if let Some(rest) = line.strip_prefix("linearity") {
            let nums: Vec<usize> =
                rest.split_whitespace().map(|t| t.parse().map_err(|_| bad("bad linearity line"))).collect::<Result<_, _>>()?;
            let (&count, idx) = nums.split_first().ok_or_else(|| bad("empty linearity line"))?;
            if count != idx.len() {
                return Err(bad("linearity count mismatch"));
            }
            linearity = idx.iter().map(|i| i - 1).collect();
        } else if line == "begin" {
            break;
        }
    }
    if !seen_header {
        return Err(bad(&format!("missing '{header}'")));
    }
    let size = lines.next().ok_or_else(|| bad("missing size line"))?;
    let parts: Vec<&str> = size.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(bad("size line must be 'm n type'"));
    }
    let m: usize = parts[0].parse().map_err(|_| bad("bad row count"))?;
    let cols: usize = parts[1].parse().map_err(|_| bad("bad column count"))?;
    if parts[2] != "rational" && parts[2] != "integer" {
        return Err(bad("number type must be rational or integer"));
    }
    let mut rows = Vec::with_capacity(m);
    for line in lines.by_ref() {
        if line == "end" {
            break;
        }
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        let row: Vec<Rational> =
            line.split_whitespace().map(|t| t.parse::<Rational>().map_err(PolytopeError::from)).collect::<Result<_, _>>()?;
        if row.len() != cols {
            return Err(bad("row length does not match header"));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(bad("row count does not match header"));
    }
    if linearity.iter().any(|&i| i >= m) {
        return Err(bad("linearity index out of range"));
    }
    Ok(Block { rows, cols, linearity, comments })
}

pub fn parse_hrep_cdd(text: &str) -> Result<HRep, PolytopeError> {
    let block = parse_block(text, "H-representation")?;
    let dim = block.cols.checked_sub(1).ok_or_else(|| PolytopeError::Format("zero columns".into()))?;
    let mut meta: Vec<Option<(ConstraintKind, String)>> = vec![None; block.rows.len()];
    for c in &block.comments {
        let mut it = c.splitn(4, ' ');
        if it.next() != Some("row") {
            continue;
        }
        let idx: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| PolytopeError::Format("bad row comment".into()))?;
        let kind = match it.next() {
            Some("le") => ConstraintKind::Le,
            Some("ge") => ConstraintKind::Ge,
            Some("eq") => ConstraintKind::Eq,
            _ => return Err(PolytopeError::Format("bad row kind".into())),
        };
        let label = it.next().unwrap_or("").to_string();
        if idx == 0 || idx > meta.len() {
            return Err(PolytopeError::Format("row comment index out of range".into()));
        }
        meta[idx - 1] = Some((kind, label));
    }
    let mut h = HRep::new(dim);
    for (i, row) in block.rows.into_iter().enumerate() {
        let linear = block.linearity.contains(&i);
        let (kind, label) = match meta[i].take() {
            Some((k, l)) => (k, l),
            None => (if linear { ConstraintKind::Eq } else { ConstraintKind::Le }, format!("r{}", i + 1)),
        };
        if (kind == ConstraintKind::Eq) != linear {
            return Err(PolytopeError::Format(format!("row {} kind disagrees with linearity", i + 1)));
        }
        let mut it = row.into_iter();
        let b = it.next().expect("cols >= 1");
        let c = match kind {
            ConstraintKind::Ge => LinConstraint::new(it.collect(), -b, kind)?,
            _ => LinConstraint::new(it.map(|x| -x).collect(), b, kind)?,
        };
        h.try_push(c, label)?;
    }
    Ok(h)
}

pub fn write_vrep_cdd_to<W: Write>(v: &VRep, mut w: W) -> io::Result<()> {
    writeln!(w, "V-representation")?;
    writeln!(w, "begin")?;
    writeln!(w, " {} {} rational", v.len(), v.dim() + 1)?;
    for x in v.vertices() {
        write!(w, " 1")?;
        for c in x {
            write!(w, " {c}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "end")
}

pub fn write_vrep_cdd(v: &VRep) -> String {
    let mut buf = Vec::new();
    write_vrep_cdd_to(v, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn parse_vrep_cdd(text: &str) -> Result<VRep, PolytopeError> {
    let block = parse_block(text, "V-representation")?;
    let dim = block.cols.checked_sub(1).ok_or_else(|| PolytopeError::Format("zero columns".into()))?;
    let mut pts = Vec::with_capacity(block.rows.len());
    for row in block.rows {
        if row[0] != Rational::one() {
            return Err(PolytopeError::Format("only vertices with leading 1 are supported".into()));
        }
        pts.push(row[1..].to_vec());
    }
    VRep::new(dim, pts)
}

pub fn hrep_to_json(h: &HRep) -> String {
    serde_json::to_string_pretty(h).expect("serializable")
}

pub fn hrep_from_json(s: &str) -> Result<HRep, PolytopeError> {
    let h: HRep = serde_json::from_str(s).map_err(|e| PolytopeError::Format(e.to_string()))?;
    validate(&h)?;
    Ok(h)
}

pub fn vrep_to_json(v: &VRep) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn vrep_from_json(s: &str) -> Result<VRep, PolytopeError> {
    let v: VRep = serde_json::from_str(s).map_err(|e| PolytopeError::Format(e.to_string()))?;
    VRep::new(v.dim(), v.vertices().to_vec())
}

fn validate(h: &HRep) -> Result<(), PolytopeError> {
    let mut out = HRep::new(h.dim());
    for (c, l) in h.iter() {
        out.try_push(LinConstraint::new(c.coeffs.clone(), c.rhs.clone(), c.kind)?, l)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> HRep {
        let mut h = HRep::new(2);
        h.push(LinConstraint::ge(vec![Rational::one(), Rational::zero()], Rational::frac(-1, 3)).unwrap(), "lo(1)");
        h.push(LinConstraint::le(vec![Rational::frac(2, 5), Rational::one()], Rational::from(4i64)).unwrap(), "hi");
        h.push(LinConstraint::eq(vec![Rational::one(), Rational::one()], Rational::one()).unwrap(), "sum");
        h
    }

    #[test]
    fn cdd_round_trip() {
        let h = sample();
        let text = write_hrep_cdd(&h);
        assert!(text.contains("linearity 1 3"));
        assert_eq!(parse_hrep_cdd(&text).unwrap(), h);
    }

    #[test]
    fn plain_cdd_input() {
        let text = "H-representation\nbegin\n 2 2 integer\n 1 -1\n 0 1\nend\n";
        let h = parse_hrep_cdd(text).unwrap();
        assert_eq!(h.labels(), &["r1".to_string(), "r2".to_string()]);
        assert_eq!(h.constraints()[0].coeffs, vec![Rational::one()]);
    }

    #[test]
    fn json_round_trip() {
        let h = sample();
        assert_eq!(hrep_from_json(&hrep_to_json(&h)).unwrap(), h);
        let v = VRep::new(1, vec![vec![Rational::frac(1, 2)], vec![Rational::zero()]]).unwrap();
        assert_eq!(vrep_from_json(&vrep_to_json(&v)).unwrap(), v);
        assert_eq!(parse_vrep_cdd(&write_vrep_cdd(&v)).unwrap(), v);
        assert!(vrep_to_json(&v).contains("\"1/2\""));
    }
}
