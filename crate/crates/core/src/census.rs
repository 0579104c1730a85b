//! Decomposable/indecomposable vertex counts of the square families and the
//! power-series identities relating them.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::exact::Rational;
use crate::families::{build_cdq, build_udc, Family, FamilyError, FamilySpec, Form, Space};
use crate::polytope::{enumerate_vertices, PolytopeError};
use crate::transforms::{decompose, DensityMatrix};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("census covers p <= {have}, degree {need} requested")]
    InsufficientData { have: usize, need: usize },
    #[error("census is defined for udc and cdq, not {0}")]
    UnsupportedFamily(&'static str),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCensus {
    pub p: usize,
    pub family: &'static str,
    pub total: usize,
    pub decomposable: usize,
    pub indecomposable: usize,
}

/// Density-space vertices of the `p x p` family, sorted.
pub fn square_vertices(family: Family, p: usize) -> Result<Vec<DensityMatrix>, CensusError> {
    if p == 1 {
        return Ok(vec![DensityMatrix::from_i64_rows(&[&[1]])]);
    }
    let h = match family {
        Family::Udc => build_udc(p, p, Space::Density, Form::Minimal)?,
        Family::Cdq => build_cdq(p, p, Space::Density, Form::Minimal)?,
        other => return Err(CensusError::UnsupportedFamily(other.name())),
    };
    let v = enumerate_vertices(&h)?;
    v.vertices().iter().map(|x| DensityMatrix::from_point(p, p, x).map_err(|e| PolytopeError::Format(e.to_string()).into())).collect()
}

pub fn census_of(family: Family, p: usize, vertices: &[DensityMatrix]) -> VertexCensus {
    let decomposable = vertices
        .iter()
        .filter(|d| decompose(d).map(|r| r.is_decomposable()).unwrap_or(false))
        .count();
    VertexCensus {
        p,
        family: family.name(),
        total: vertices.len(),
        decomposable,
        indecomposable: vertices.len() - decomposable,
    }
}

pub fn run_census(family: Family, p_max: usize) -> Result<Vec<VertexCensus>, CensusError> {
    (1..=p_max).map(|p| Ok(census_of(family, p, &square_vertices(family, p)?))).collect()
}

fn series_mul(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n).map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum()).collect()
}

/// Coefficients `[c_0, .., c_degree]` of the three series with constant terms
/// `V_0 = 1`, `D_0 = 1`, `ID_0 = 0`.
fn series(census: &[VertexCensus], degree: usize) -> Result<[Vec<Rational>; 3], CensusError> {
    let mut v = vec![Rational::one()];
    let mut d = vec![Rational::one()];
    let mut id = vec![Rational::zero()];
    for k in 1..=degree {
        let c = census
            .iter()
            .find(|c| c.p == k)
            .ok_or(CensusError::InsufficientData { have: census.iter().map(|c| c.p).max().unwrap_or(0), need: degree })?;
        v.push(Rational::from(c.total as i64));
        d.push(Rational::from(c.decomposable as i64));
        id.push(Rational::from(c.indecomposable as i64));
    }
    Ok([v, d, id])
}

/// Checks `D(x) = 1/(1 - ID(x))` and `V(x) D(x) = D(x)^2 + D(x) - 1` up to
/// `degree`.
pub fn gf_check(census: &[VertexCensus], degree: usize) -> Result<bool, CensusError> {
    let [v, d, id] = series(census, degree)?;
    let one_minus_id: Vec<Rational> = id.iter().enumerate().map(|(k, c)| if k == 0 { Rational::one() - c } else { -c }).collect();
    let first = series_mul(&d, &one_minus_id, degree).iter().enumerate().all(|(k, c)| *c == if k == 0 { Rational::one() } else { Rational::zero() });
    let vd = series_mul(&v, &d, degree);
    let dd = series_mul(&d, &d, degree);
    let second = (0..=degree).all(|k| {
        let rhs = &dd[k] + &d[k] - if k == 0 { Rational::one() } else { Rational::zero() };
        vd[k] == rhs
    });
    Ok(first && second)
}

/// Checks `V(x) (1 - ID(x)) = 1`: every vertex is a unique ordered direct sum
/// of indecomposable ones.
pub fn composition_check(census: &[VertexCensus], degree: usize) -> Result<bool, CensusError> {
    let [v, _, id] = series(census, degree)?;
    let one_minus_id: Vec<Rational> = id.iter().enumerate().map(|(k, c)| if k == 0 { Rational::one() - c } else { -c }).collect();
    Ok(series_mul(&v, &one_minus_id, degree).iter().enumerate().all(|(k, c)| *c == if k == 0 { Rational::one() } else { Rational::zero() }))
}

/// Grid sizes of the reference vertex-count table.
pub const TABLE1_SIZES: [(usize, usize); 6] = [(3, 3), (3, 4), (3, 5), (4, 4), (4, 5), (5, 5)];

/// Reference vertex counts, one row per family in the order of [`TABLE1_SIZES`].
pub const TABLE1_EXPECTED: [(Family, [usize; 6]); 4] = [
    (Family::Udc, [7, 52, 166, 115, 3321, 22890]),
    (Family::Cdq, [7, 52, 138, 69, 2163, 5447]),
    (Family::Dq, [7, 118, 416, 42, 7636, 429]),
    (Family::Dc, [6, 96, 360, 24, 3000, 120]),
];

/// Vertex count of a `p x q` family, enumerated from its density-space minimal system.
pub fn vertex_count(family: Family, p: usize, q: usize) -> Result<usize, CensusError> {
    let h = FamilySpec::new(family, p, q, Space::Density, Form::Minimal).build()?;
    Ok(enumerate_vertices(&h)?.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Cell {
    pub family: &'static str,
    pub p: usize,
    pub q: usize,
    pub computed: usize,
    pub expected: usize,
}

impl Table1Cell {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }
}

/// Recomputes the whole reference table.
pub fn table1() -> Result<Vec<Table1Cell>, CensusError> {
    let mut out = Vec::new();
    for (family, counts) in TABLE1_EXPECTED {
        for (&(p, q), &expected) in TABLE1_SIZES.iter().zip(&counts) {
            out.push(Table1Cell { family: family.name(), p, q, computed: vertex_count(family, p, q)?, expected });
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(census: &[VertexCensus], w: W) -> Result<(), CensusError> {
    let mut out = csv::Writer::from_writer(w);
    for c in census {
        out.serialize(c)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Vec<VertexCensus> {
        run_census(Family::Udc, 3).unwrap()
    }

    #[test]
    fn udc_up_to_three() {
        let c = small();
        let totals: Vec<_> = c.iter().map(|c| (c.total, c.decomposable)).collect();
        assert_eq!(totals, vec![(1, 0), (2, 1), (7, 3)]);
        assert!(composition_check(&c, 3).unwrap());
        assert!(matches!(gf_check(&c, 4), Err(CensusError::InsufficientData { .. })));
    }

    #[test]
    fn corrupted_census_is_rejected() {
        let mut c = small();
        c[2].indecomposable -= 1;
        assert!(!composition_check(&c, 3).unwrap());
        assert!(!gf_check(&c, 3).unwrap());
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        write_csv(&small()[..1], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "p,family,total,decomposable,indecomposable\n1,udc,1,0,1\n");
    }
}
