//! Constructors for the H-representations of the copula polytope families.
//!
//! Grid coordinates index the cumulative matrix `c` of shape `(p+1) x (q+1)`
//! row-major, `c_ij` at `i*(q+1) + j`. Density coordinates index the `p x q`
//! matrix `x = pq * T(c)` row-major with 1-based labels, `x_ij` at
//! `(i-1)*q + (j-1)`; its row sums are `q` and its column sums `p`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;
use crate::polytope::{certify_minimal, ConstraintKind, HRep, LinConstraint, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("minimal form is not available for size {p}x{q}")]
    UnsupportedSize { p: usize, q: usize },
    #[error("invalid size {p}x{q} for this family")]
    InvalidSize { p: usize, q: usize },
    #[error("margin totals differ: {0} vs {1}")]
    MarginMismatch(Rational, Rational),
    #[error("margins must be strictly positive")]
    NonPositiveMargin,
    #[error("cumulative margins must increase strictly and end at pq")]
    NonIncreasingMargins,
    #[error("missing margin vector")]
    MissingMargins,
    #[error("cannot parse family spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Dc,
    Udc,
    Dq,
    Cdq,
    Birkhoff,
    Asm,
    Transport,
    AltTransport,
    UdcMargins,
    CdqMargins,
    Saf,
    Asa,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Dc => "dc",
            Family::Udc => "udc",
            Family::Dq => "dq",
            Family::Cdq => "cdq",
            Family::Birkhoff => "birkhoff",
            Family::Asm => "asm",
            Family::Transport => "transport",
            Family::AltTransport => "alt-transport",
            Family::UdcMargins => "udc-margins",
            Family::CdqMargins => "cdq-margins",
            Family::Saf => "saf",
            Family::Asa => "asa",
        }
    }

    fn uses_margins(self) -> bool {
        matches!(
            self,
            Family::Transport | Family::AltTransport | Family::UdcMargins | Family::CdqMargins | Family::Saf | Family::Asa
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    Grid,
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    Defining,
    Minimal,
}

/// Symbolic name of a polytope, e.g. `udc:3x4:grid:minimal` or
/// `transport:u=1,1,1:v=1,1,1:alt`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub p: usize,
    pub q: usize,
    pub u: Option<Vec<Rational>>,
    pub v: Option<Vec<Rational>>,
    pub space: Space,
    pub form: Form,
}

impl FamilySpec {
    pub fn new(family: Family, p: usize, q: usize, space: Space, form: Form) -> Self {
        FamilySpec { family, p, q, u: None, v: None, space, form }
    }

    pub fn with_margins(family: Family, u: Vec<Rational>, v: Vec<Rational>) -> Self {
        let space = if matches!(family, Family::Saf | Family::Asa) { Space::Grid } else { Space::Density };
        FamilySpec { family, p: u.len(), q: v.len(), u: Some(u), v: Some(v), space, form: Form::Defining }
    }

    pub fn ambient_dim(&self) -> usize {
        match self.space {
            Space::Grid => (self.p + 1) * (self.q + 1),
            Space::Density => self.p * self.q,
        }
    }

    pub fn build(&self) -> Result<HRep, FamilyError> {
        let margins = || -> Result<(&[Rational], &[Rational]), FamilyError> {
            match (&self.u, &self.v) {
                (Some(u), Some(v)) => Ok((u, v)),
                _ => Err(FamilyError::MissingMargins),
            }
        };
        let (p, q, s, f) = (self.p, self.q, self.space, self.form);
        match self.family {
            Family::Dc => build_dc(p, q, s, f),
            Family::Udc => build_udc(p, q, s, f),
            Family::Dq => build_dq(p, q, s, f),
            Family::Cdq => build_cdq(p, q, s, f),
            Family::Birkhoff => build_dc(p, q, Space::Density, f),
            Family::Asm => build_dq(p, q, Space::Density, f),
            Family::Transport | Family::AltTransport => {
                let (u, v) = margins()?;
                finish(build_transport(u, v, self.family == Family::AltTransport)?, f)
            }
            Family::UdcMargins => {
                let (u, v) = margins()?;
                finish(build_udc_margins(u, v)?, f)
            }
            Family::CdqMargins => {
                let (u, v) = margins()?;
                finish(build_cdq_margins(u, v)?, f)
            }
            Family::Saf => {
                let (u, v) = margins()?;
                finish(build_saf(u, v)?, f)
            }
            Family::Asa => {
                let (u, v) = margins()?;
                finish(build_asa(u, v)?, f)
            }
        }
    }
}

fn finish(h: HRep, form: Form) -> Result<HRep, FamilyError> {
    match form {
        Form::Defining => Ok(h),
        Form::Minimal => Ok(certify_minimal(&h)?.minimal),
    }
}

fn join(v: &[Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        if self.family.uses_margins() {
            if let (Some(u), Some(v)) = (&self.u, &self.v) {
                write!(f, ":u={}:v={}", join(u), join(v))?;
            }
        } else {
            write!(f, ":{}x{}", self.p, self.q)?;
        }
        let space = match self.space {
            Space::Grid => "grid",
            Space::Density => "density",
        };
        let form = match self.form {
            Form::Defining => "defining",
            Form::Minimal => "minimal",
        };
        write!(f, ":{space}:{form}")
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| FamilyError::Parse(format!("{m} in '{s}'"));
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let mut family = match head.as_str() {
            "dc" => Family::Dc,
            "udc" => Family::Udc,
            "dq" => Family::Dq,
            "cdq" => Family::Cdq,
            "birkhoff" | "b" => Family::Birkhoff,
            "asm" => Family::Asm,
            "transport" | "t" => Family::Transport,
            "alt-transport" | "alt_transport" => Family::AltTransport,
            "udc-margins" | "udc_margins" => Family::UdcMargins,
            "cdq-margins" | "cdq_margins" => Family::CdqMargins,
            "saf" => Family::Saf,
            "asa" => Family::Asa,
            _ => return Err(bad("unknown family")),
        };
        let mut size = None;
        let (mut u, mut v) = (None, None);
        let (mut space, mut form) = (None, Form::Defining);
        let parse_vec = |t: &str| -> Result<Vec<Rational>, FamilyError> {
            t.split(',').map(|x| x.trim().parse::<Rational>().map_err(|_| bad("bad margin entry"))).collect()
        };
        for tok in parts {
            let tok = tok.trim();
            match tok.to_ascii_lowercase().as_str() {
                "grid" => space = Some(Space::Grid),
                "density" => space = Some(Space::Density),
                "defining" => form = Form::Defining,
                "minimal" => form = Form::Minimal,
                "alt" => {
                    family = match family {
                        Family::Transport => Family::AltTransport,
                        _ => return Err(bad("'alt' applies to transport only")),
                    }
                }
                t if t.starts_with("u=") => u = Some(parse_vec(&tok[2..])?),
                t if t.starts_with("v=") => v = Some(parse_vec(&tok[2..])?),
                t => {
                    let (a, b) = t.split_once('x').unwrap_or((t, t));
                    let p: usize = a.parse().map_err(|_| bad("bad size"))?;
                    let q: usize = b.parse().map_err(|_| bad("bad size"))?;
                    size = Some((p, q));
                }
            }
        }
        if family.uses_margins() {
            let (u, v) = (u.ok_or(FamilyError::MissingMargins)?, v.ok_or(FamilyError::MissingMargins)?);
            let mut spec = FamilySpec::with_margins(family, u, v);
            spec.form = form;
            if let Some(sp) = space {
                if sp != spec.space {
                    return Err(bad("space not available for this family"));
                }
            }
            return Ok(spec);
        }
        let (p, q) = size.ok_or_else(|| bad("missing size"))?;
        let space = match family {
            Family::Birkhoff | Family::Asm => Space::Density,
            _ => space.unwrap_or(Space::Grid),
        };
        Ok(FamilySpec { family, p, q, u: None, v: None, space, form })
    }
}

pub fn grid_index(q: usize, i: usize, j: usize) -> usize {
    i * (q + 1) + j
}

/// 1-based density entry `x_ij`.
pub fn density_index(q: usize, i: usize, j: usize) -> usize {
    (i - 1) * q + (j - 1)
}

fn vector(dim: usize, terms: &[(usize, Rational)]) -> Vec<Rational> {
    let mut a = vec![Rational::zero(); dim];
    for (k, c) in terms {
        a[*k] += c;
    }
    a
}

fn push(h: &mut HRep, kind: ConstraintKind, terms: &[(usize, Rational)], rhs: Rational, label: String) {
    let c = LinConstraint::new(vector(h.dim(), terms), rhs, kind).expect("family rows are nonzero");
    h.push(c, label);
}

fn int(v: i64) -> Rational {
    Rational::from(v)
}

fn one() -> Rational {
    Rational::one()
}

fn size_at_least(p: usize, q: usize, m: usize) -> Result<(), FamilyError> {
    if p < m || q < m {
        Err(FamilyError::InvalidSize { p, q })
    } else {
        Ok(())
    }
}

/// Boundary equalities with prescribed values on the last row and column.
fn grid_boundary(h: &mut HRep, p: usize, q: usize, last_row: &[Rational], last_col: &[Rational], tag: &str) {
    for i in 0..=p {
        for j in 0..=q {
            if !(i == 0 || j == 0 || i == p || j == q) {
                continue;
            }
            let value = if i == 0 || j == 0 {
                Rational::zero()
            } else if i == p {
                last_row[j].clone()
            } else {
                last_col[i].clone()
            };
            push(h, ConstraintKind::Eq, &[(grid_index(q, i, j), one())], value, format!("{tag}({i},{j})"));
        }
    }
}

fn uniform_grid_boundary(h: &mut HRep, p: usize, q: usize, tag: &str) {
    let last_row: Vec<Rational> = (0..=q).map(|j| Rational::frac(j as i64, q as i64)).collect();
    let last_col: Vec<Rational> = (0..=p).map(|i| Rational::frac(i as i64, p as i64)).collect();
    grid_boundary(h, p, q, &last_row, &last_col, tag);
}

/// Terms of the mixed second difference `c_ij + c_{i-1,j-1} - c_{i,j-1} - c_{i-1,j}`.
fn second_difference_terms(q: usize, i: usize, j: usize) -> Vec<(usize, Rational)> {
    vec![
        (grid_index(q, i, j), one()),
        (grid_index(q, i - 1, j - 1), one()),
        (grid_index(q, i, j - 1), -one()),
        (grid_index(q, i - 1, j), -one()),
    ]
}

fn push_supermodularity(h: &mut HRep, p: usize, q: usize, tag: &str) {
    for i in 1..=p {
        for j in 1..=q {
            push(h, ConstraintKind::Ge, &second_difference_terms(q, i, j), Rational::zero(), format!("{tag}({i},{j})"));
        }
    }
}

/// Section convexity `2c_ij <= c_{i,j-1} + c_{i,j+1}` and `2c_ij <= c_{i-1,j} + c_{i+1,j}`.
fn push_grid_convexity(h: &mut HRep, p: usize, q: usize) {
    for i in 1..p {
        for j in 1..q {
            let t = [
                (grid_index(q, i, j - 1), one()),
                (grid_index(q, i, j + 1), one()),
                (grid_index(q, i, j), int(-2)),
            ];
            push(h, ConstraintKind::Ge, &t, Rational::zero(), format!("cvx_a({i},{j})"));
            let t = [
                (grid_index(q, i - 1, j), one()),
                (grid_index(q, i + 1, j), one()),
                (grid_index(q, i, j), int(-2)),
            ];
            push(h, ConstraintKind::Ge, &t, Rational::zero(), format!("cvx_b({i},{j})"));
        }
    }
}

fn push_margins(h: &mut HRep, u: &[Rational], v: &[Rational]) {
    let (p, q) = (u.len(), v.len());
    for (i, ui) in u.iter().enumerate() {
        let t: Vec<_> = (1..=q).map(|j| (density_index(q, i + 1, j), one())).collect();
        push(h, ConstraintKind::Eq, &t, ui.clone(), format!("row({})", i + 1));
    }
    for (j, vj) in v.iter().enumerate() {
        let t: Vec<_> = (1..=p).map(|i| (density_index(q, i, j + 1), one())).collect();
        push(h, ConstraintKind::Eq, &t, vj.clone(), format!("col({})", j + 1));
    }
}

fn push_nonnegativity(h: &mut HRep, p: usize, q: usize) {
    for i in 1..=p {
        for j in 1..=q {
            push(h, ConstraintKind::Ge, &[(density_index(q, i, j), one())], Rational::zero(), format!("nn({i},{j})"));
        }
    }
}

/// Partial sums of every column and row bounded by `[0, margin]`.
fn push_alternating(h: &mut HRep, u: &[Rational], v: &[Rational]) {
    let (p, q) = (u.len(), v.len());
    for j in 1..=q {
        for i in 1..=p {
            let t: Vec<_> = (1..=i).map(|l| (density_index(q, l, j), one())).collect();
            push(h, ConstraintKind::Ge, &t, Rational::zero(), format!("cs_lo({i},{j})"));
            push(h, ConstraintKind::Le, &t, v[j - 1].clone(), format!("cs_hi({i},{j})"));
        }
    }
    for i in 1..=p {
        for j in 1..=q {
            let t: Vec<_> = (1..=j).map(|k| (density_index(q, i, k), one())).collect();
            push(h, ConstraintKind::Ge, &t, Rational::zero(), format!("rs_lo({i},{j})"));
            push(h, ConstraintKind::Le, &t, u[i - 1].clone(), format!("rs_hi({i},{j})"));
        }
    }
}

/// Increasing partial sums: columns `(tag_a)` and rows `(tag_b)`.
fn push_monotone_partial_sums(h: &mut HRep, p: usize, q: usize, tag_a: &str, tag_b: &str) {
    for i in 1..p {
        for j in 1..q {
            let mut t: Vec<_> = (1..=i).map(|l| (density_index(q, l, j + 1), one())).collect();
            t.extend((1..=i).map(|l| (density_index(q, l, j), -one())));
            push(h, ConstraintKind::Ge, &t, Rational::zero(), format!("{tag_a}({i},{j})"));
        }
    }
    for i in 1..p {
        for j in 1..q {
            let mut t: Vec<_> = (1..=j).map(|k| (density_index(q, i + 1, k), one())).collect();
            t.extend((1..=j).map(|k| (density_index(q, i, k), -one())));
            push(h, ConstraintKind::Ge, &t, Rational::zero(), format!("{tag_b}({i},{j})"));
        }
    }
}

fn uniform_margins(p: usize, q: usize) -> (Vec<Rational>, Vec<Rational>) {
    (vec![int(q as i64); p], vec![int(p as i64); q])
}

/// Rewrites a density system over grid coordinates via `x = pq T(c)`, replacing
/// the margin equalities by the uniform boundary equalities.
pub fn density_to_grid(h: &HRep, p: usize, q: usize, boundary_tag: &str) -> HRep {
    assert_eq!(h.dim(), p * q);
    let mut g = HRep::new((p + 1) * (q + 1));
    uniform_grid_boundary(&mut g, p, q, boundary_tag);
    let pq = int((p * q) as i64);
    for (c, label) in h.iter() {
        if c.kind == ConstraintKind::Eq {
            continue;
        }
        let mut terms = Vec::new();
        for i in 1..=p {
            for j in 1..=q {
                let a = &c.coeffs[density_index(q, i, j)];
                if a.is_zero() {
                    continue;
                }
                let s = a * &pq;
                for (k, sign) in second_difference_terms(q, i, j) {
                    terms.push((k, &s * &sign));
                }
            }
        }
        push(&mut g, c.kind, &terms, c.rhs.clone(), label.to_string());
    }
    g
}

pub fn build_dc(p: usize, q: usize, space: Space, form: Form) -> Result<HRep, FamilyError> {
    size_at_least(p, q, 1)?;
    let h = match space {
        Space::Grid => {
            let mut h = HRep::new((p + 1) * (q + 1));
            uniform_grid_boundary(&mut h, p, q, "c1");
            push_supermodularity(&mut h, p, q, "c2");
            h
        }
        Space::Density => {
            let (u, v) = uniform_margins(p, q);
            build_transport(&u, &v, false)?
        }
    };
    finish(h, form)
}

pub fn build_udc(p: usize, q: usize, space: Space, form: Form) -> Result<HRep, FamilyError> {
    size_at_least(p, q, 2)?;
    if form == Form::Minimal && p >= 3 && q >= 3 {
        return Ok(match space {
            Space::Grid => udc_grid_minimal(p, q),
            Space::Density => udc_density_minimal(p, q),
        });
    }
    let h = match space {
        Space::Grid => {
            let mut h = build_dc(p, q, Space::Grid, Form::Defining)?;
            push_grid_convexity(&mut h, p, q);
            h
        }
        Space::Density => {
            let (u, v) = uniform_margins(p, q);
            build_udc_margins(&u, &v)?
        }
    };
    finish(h, form)
}

fn udc_grid_minimal(p: usize, q: usize) -> HRep {
    let mut h = HRep::new((p + 1) * (q + 1));
    uniform_grid_boundary(&mut h, p, q, "c1");
    push(&mut h, ConstraintKind::Ge, &[(grid_index(q, 1, 1), one())], Rational::zero(), "d1(1,1)".into());
    let bound = Rational::frac(((p - 1) * (q - 1)) as i64 - 1, (p * q) as i64);
    push(&mut h, ConstraintKind::Ge, &[(grid_index(q, p - 1, q - 1), one())], bound, format!("d1({},{})", p - 1, q - 1));
    for i in 1..=p - 2 {
        for j in 1..=q - 2 {
            if (i, j) == (1, 1) || (i, j) == (p - 2, q - 2) {
                continue;
            }
            push(&mut h, ConstraintKind::Ge, &second_difference_terms(q, i + 1, j + 1), Rational::zero(), format!("d2({i},{j})"));
        }
    }
    for i in 1..p {
        for j in 0..=q - 2 {
            let t = [(grid_index(q, i, j), one()), (grid_index(q, i, j + 2), one()), (grid_index(q, i, j + 1), int(-2))];
            push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("d3a({i},{j})"));
        }
    }
    for j in 1..q {
        for i in 0..=p - 2 {
            let t = [(grid_index(q, i, j), one()), (grid_index(q, i + 2, j), one()), (grid_index(q, i + 1, j), int(-2))];
            push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("d3b({i},{j})"));
        }
    }
    h
}

fn udc_density_minimal(p: usize, q: usize) -> HRep {
    let mut h = HRep::new(p * q);
    let (u, v) = uniform_margins(p, q);
    push_margins(&mut h, &u, &v);
    push(&mut h, ConstraintKind::Ge, &[(density_index(q, 1, 1), one())], Rational::zero(), "b1(1,1)".into());
    push(&mut h, ConstraintKind::Ge, &[(density_index(q, p, q), one())], Rational::zero(), format!("b1({p},{q})"));
    for i in 2..p {
        for j in 2..q {
            if (i, j) == (2, 2) || (i, j) == (p - 1, q - 1) {
                continue;
            }
            push(&mut h, ConstraintKind::Ge, &[(density_index(q, i, j), one())], Rational::zero(), format!("b2({i},{j})"));
        }
    }
    push_monotone_partial_sums(&mut h, p, q, "b3a", "b3b");
    h
}

pub fn build_cdq(p: usize, q: usize, space: Space, form: Form) -> Result<HRep, FamilyError> {
    size_at_least(p, q, 2)?;
    if form == Form::Minimal && p >= 3 && q >= 3 {
        return Ok(match space {
            Space::Grid => cdq_grid_minimal(p, q),
            Space::Density => cdq_density_minimal(p, q),
        });
    }
    let h = match space {
        Space::Grid => {
            let mut h = build_dq(p, q, Space::Grid, Form::Defining)?;
            push_grid_convexity(&mut h, p, q);
            h
        }
        Space::Density => {
            let (u, v) = uniform_margins(p, q);
            build_cdq_margins(&u, &v)?
        }
    };
    finish(h, form)
}

fn cdq_grid_minimal(p: usize, q: usize) -> HRep {
    let mut h = HRep::new((p + 1) * (q + 1));
    uniform_grid_boundary(&mut h, p, q, "q1");
    push(&mut h, ConstraintKind::Ge, &[(grid_index(q, 1, 1), one())], Rational::zero(), "v1(1,1)".into());
    let bound = Rational::frac(((p - 1) * (q - 1)) as i64 - 1, (p * q) as i64);
    push(&mut h, ConstraintKind::Ge, &[(grid_index(q, p - 1, q - 1), one())], bound, format!("v1({},{})", p - 1, q - 1));
    for i in 1..p {
        for j in 0..=q - 2 {
            let t = [(grid_index(q, i, j), one()), (grid_index(q, i, j + 2), one()), (grid_index(q, i, j + 1), int(-2))];
            push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("v3a({i},{j})"));
        }
    }
    for j in 1..q {
        for i in 0..=p - 2 {
            let t = [(grid_index(q, i, j), one()), (grid_index(q, i + 2, j), one()), (grid_index(q, i + 1, j), int(-2))];
            push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("v3b({i},{j})"));
        }
    }
    h
}

fn cdq_density_minimal(p: usize, q: usize) -> HRep {
    let mut h = HRep::new(p * q);
    let (u, v) = uniform_margins(p, q);
    push_margins(&mut h, &u, &v);
    push(&mut h, ConstraintKind::Ge, &[(density_index(q, 1, 1), one())], Rational::zero(), "a1(1,1)".into());
    push(&mut h, ConstraintKind::Ge, &[(density_index(q, p, q), one())], Rational::zero(), format!("a1({p},{q})"));
    push_monotone_partial_sums(&mut h, p, q, "a3a", "a3b");
    h
}

pub fn build_dq(p: usize, q: usize, space: Space, form: Form) -> Result<HRep, FamilyError> {
    size_at_least(p, q, 1)?;
    if form == Form::Minimal {
        if p.min(q) < 3 {
            return Err(FamilyError::UnsupportedSize { p, q });
        }
        let d = asm_density_minimal(p, q);
        return Ok(match space {
            Space::Density => d,
            Space::Grid => density_to_grid(&d, p, q, "q1"),
        });
    }
    Ok(match space {
        Space::Grid => {
            let mut h = HRep::new((p + 1) * (q + 1));
            uniform_grid_boundary(&mut h, p, q, "q1");
            let (fp, fq) = (Rational::frac(1, p as i64), Rational::frac(1, q as i64));
            for i in 0..p {
                for j in 1..=q {
                    let t = [(grid_index(q, i + 1, j), one()), (grid_index(q, i, j), -one())];
                    push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("q2a_lo({i},{j})"));
                    push(&mut h, ConstraintKind::Le, &t, fp.clone(), format!("q2a_hi({i},{j})"));
                }
            }
            for i in 1..=p {
                for j in 0..q {
                    let t = [(grid_index(q, i, j + 1), one()), (grid_index(q, i, j), -one())];
                    push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("q2b_lo({i},{j})"));
                    push(&mut h, ConstraintKind::Le, &t, fq.clone(), format!("q2b_hi({i},{j})"));
                }
            }
            h
        }
        Space::Density => {
            let (u, v) = uniform_margins(p, q);
            build_transport(&u, &v, true)?
        }
    })
}

/// Facets of the generalized alternating sign matrix polytope (`p, q >= 3`).
///
/// Labels: `a1` corners; `a2p(i,j)` / `a2s(i,j)` column `j` summed over rows
/// `1..=i` / `i..=p`; `a3p(i,j)` / `a3s(i,j)` row `i` summed over columns
/// `1..=j` / `j..=q`.
fn asm_density_minimal(p: usize, q: usize) -> HRep {
    if p > q {
        return transpose_density_system(&asm_density_minimal(q, p), q, p);
    }
    let mut h = HRep::new(p * q);
    let (u, v) = uniform_margins(p, q);
    push_margins(&mut h, &u, &v);
    for (i, j) in [(1, 1), (1, q), (p, 1), (p, q)] {
        push(&mut h, ConstraintKind::Ge, &[(density_index(q, i, j), one())], Rational::zero(), format!("a1({i},{j})"));
    }
    let col = |h: &mut HRep, rows: std::ops::RangeInclusive<usize>, j: usize, label: String| {
        let t: Vec<_> = rows.map(|l| (density_index(q, l, j), one())).collect();
        push(h, ConstraintKind::Ge, &t, Rational::zero(), label);
    };
    let row = |h: &mut HRep, i: usize, cols: std::ops::RangeInclusive<usize>, label: String| {
        let t: Vec<_> = cols.map(|k| (density_index(q, i, k), one())).collect();
        push(h, ConstraintKind::Ge, &t, Rational::zero(), label);
    };
    // Longest partial column sums kept: p-1 when p < q, p-2 when square.
    let longest = if p == q { p - 2 } else { p - 1 };
    for j in 2..q {
        for len in 1..=longest {
            col(&mut h, 1..=len, j, format!("a2p({len},{j})"));
        }
        for len in 1..=longest {
            let start = p - len + 1;
            col(&mut h, start..=p, j, format!("a2s({start},{j})"));
        }
    }
    let k = q / p;
    let longest = if p == q { p - 2 } else { q - k - 1 };
    for i in 2..p {
        for len in 1..=longest {
            row(&mut h, i, 1..=len, format!("a3p({i},{len})"));
        }
        for len in 1..=longest {
            let start = q - len + 1;
            row(&mut h, i, start..=q, format!("a3s({i},{start})"));
        }
    }
    h
}

fn swap_label(label: &str) -> String {
    let (tag, rest) = label.split_once('(').unwrap_or((label, ""));
    let tag = match tag {
        "a2p" => "a3p",
        "a2s" => "a3s",
        "a3p" => "a2p",
        "a3s" => "a2s",
        "row" => "col",
        "col" => "row",
        t => t,
    };
    let inner = rest.trim_end_matches(')');
    match inner.split_once(',') {
        Some((a, b)) => format!("{tag}({b},{a})"),
        None if inner.is_empty() => tag.to_string(),
        None => format!("{tag}({inner})"),
    }
}

/// Moves a system on `p x q` densities to `q x p` densities by transposition.
pub fn transpose_density_system(h: &HRep, p: usize, q: usize) -> HRep {
    assert_eq!(h.dim(), p * q);
    let mut out = HRep::new(p * q);
    for (c, label) in h.iter() {
        let mut coeffs = vec![Rational::zero(); p * q];
        for i in 1..=p {
            for j in 1..=q {
                coeffs[density_index(p, j, i)] = c.coeffs[density_index(q, i, j)].clone();
            }
        }
        let c = LinConstraint::new(coeffs, c.rhs.clone(), c.kind).expect("permuted row is nonzero");
        out.push(c, swap_label(label));
    }
    out
}

fn check_margins(u: &[Rational], v: &[Rational]) -> Result<(), FamilyError> {
    if u.is_empty() || v.is_empty() {
        return Err(FamilyError::MissingMargins);
    }
    if u.iter().chain(v).any(|x| !x.is_positive()) {
        return Err(FamilyError::NonPositiveMargin);
    }
    let (su, sv): (Rational, Rational) = (u.iter().cloned().sum(), v.iter().cloned().sum());
    if su != sv {
        return Err(FamilyError::MarginMismatch(su, sv));
    }
    Ok(())
}

pub fn build_transport(u: &[Rational], v: &[Rational], alternating: bool) -> Result<HRep, FamilyError> {
    check_margins(u, v)?;
    let mut h = HRep::new(u.len() * v.len());
    push_margins(&mut h, u, v);
    if alternating {
        push_alternating(&mut h, u, v);
    } else {
        push_nonnegativity(&mut h, u.len(), v.len());
    }
    Ok(h)
}

pub fn build_udc_margins(u: &[Rational], v: &[Rational]) -> Result<HRep, FamilyError> {
    let mut h = build_transport(u, v, false)?;
    push_monotone_partial_sums(&mut h, u.len(), v.len(), "b3a", "b3b");
    Ok(h)
}

pub fn build_cdq_margins(u: &[Rational], v: &[Rational]) -> Result<HRep, FamilyError> {
    let mut h = build_transport(u, v, true)?;
    push_monotone_partial_sums(&mut h, u.len(), v.len(), "a3a", "a3b");
    Ok(h)
}

fn aggregation_boundary(cu: &[Rational], cv: &[Rational]) -> Result<HRep, FamilyError> {
    let (p, q) = (cu.len(), cv.len());
    let pq = int((p * q) as i64);
    let increasing = |c: &[Rational]| {
        std::iter::once(Rational::zero()).chain(c.iter().cloned()).collect::<Vec<_>>().windows(2).all(|w| w[0] < w[1])
    };
    if !increasing(cu) || !increasing(cv) || cu[p - 1] != pq || cv[q - 1] != pq {
        return Err(FamilyError::NonIncreasingMargins);
    }
    let scale = |c: &[Rational]| -> Vec<Rational> { std::iter::once(Rational::zero()).chain(c.iter().map(|x| x / &pq)).collect() };
    let mut h = HRep::new((p + 1) * (q + 1));
    grid_boundary(&mut h, p, q, &scale(cv), &scale(cu), "af1");
    Ok(h)
}

/// Supermodular aggregation functions with cumulative margins `cu`, `cv`.
pub fn build_saf(cu: &[Rational], cv: &[Rational]) -> Result<HRep, FamilyError> {
    let mut h = aggregation_boundary(cu, cv)?;
    push_supermodularity(&mut h, cu.len(), cv.len(), "af2a");
    Ok(h)
}

/// Aggregation functions supermodular on rectangles touching the boundary.
pub fn build_asa(cu: &[Rational], cv: &[Rational]) -> Result<HRep, FamilyError> {
    let mut h = aggregation_boundary(cu, cv)?;
    let (p, q) = (cu.len(), cv.len());
    for i1 in 0..p {
        for i2 in i1 + 1..=p {
            for j1 in 0..q {
                for j2 in j1 + 1..=q {
                    if !(i1 == 0 || i2 == p || j1 == 0 || j2 == q) {
                        continue;
                    }
                    let t = [
                        (grid_index(q, i1, j1), one()),
                        (grid_index(q, i2, j2), one()),
                        (grid_index(q, i1, j2), -one()),
                        (grid_index(q, i2, j1), -one()),
                    ];
                    push(&mut h, ConstraintKind::Ge, &t, Rational::zero(), format!("af2b({i1},{i2},{j1},{j2})"));
                }
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings_round_trip() {
        for s in ["udc:3x4:grid:minimal", "dq:5x5:density:defining", "transport:u=1,1,1:v=1,1,1:alt", "saf:u=2,4:v=1,4:grid:defining"] {
            let spec: FamilySpec = s.parse().unwrap();
            let again: FamilySpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, again);
        }
        let t: FamilySpec = "transport:u=1,1,1:v=1,1,1:alt".parse().unwrap();
        assert_eq!(t.family, Family::AltTransport);
        assert_eq!((t.p, t.q, t.space), (3, 3, Space::Density));
        assert!("nope:3x3".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(build_udc(5, 7, Space::Grid, Form::Minimal).unwrap().inequality_count(), 63);
        assert_eq!(build_dq(3, 4, Space::Density, Form::Minimal).unwrap().inequality_count(), 16);
        assert_eq!(build_dq(4, 4, Space::Density, Form::Minimal).unwrap().inequality_count(), 20);
        assert_eq!(build_cdq(3, 3, Space::Grid, Form::Minimal).unwrap().inequality_count(), 10);
        assert_eq!(build_dq(2, 4, Space::Density, Form::Minimal), Err(FamilyError::UnsupportedSize { p: 2, q: 4 }));
    }

    #[test]
    fn dc_grid_counts() {
        let h = build_dc(3, 3, Space::Grid, Form::Defining).unwrap();
        assert_eq!(h.equality_count(), 12);
        assert_eq!(h.inequality_count(), 9);
    }

    #[test]
    fn transposed_labels() {
        assert_eq!(swap_label("a2p(2,3)"), "a3p(3,2)");
        assert_eq!(swap_label("row(4)"), "col(4)");
    }

    #[test]
    fn margin_errors() {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
        assert!(matches!(build_transport(&r(&[1, 2]), &r(&[1, 1]), false), Err(FamilyError::MarginMismatch(..))));
        assert_eq!(build_saf(&r(&[2, 1]), &r(&[2, 4])), Err(FamilyError::NonIncreasingMargins));
    }
}
