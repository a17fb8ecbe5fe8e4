//! Grid-expression parsing for the CLI: comma-separated values with
//! inclusive ranges ("0..5", "2,3,5", "1..3,7"), exact rational q
//! expressions ("1+3", "4", "3/2"), and character specs ("4:1").

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::Rational;

fn bad(field: &str, s: &str) -> Error {
    Error::InvalidInput(format!("cannot parse {} value '{}'", field, s))
}

pub fn parse_list_u64(field: &str, s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        if let Some((lo, hi)) = token.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad(field, s))?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad(field, s))?;
            if hi < lo {
                return Err(bad(field, s));
            }
            out.extend(lo..=hi);
        } else {
            out.push(token.parse().map_err(|_| bad(field, s))?);
        }
    }
    if out.is_empty() {
        return Err(bad(field, s));
    }
    Ok(out)
}

pub fn parse_list_u32(field: &str, s: &str) -> Result<Vec<u32>> {
    parse_list_u64(field, s)?
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| bad(field, s)))
        .collect()
}

pub fn parse_list_i64(field: &str, s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        if let Some((lo, hi)) = token.split_once("..") {
            let lo: i64 = lo.trim().parse().map_err(|_| bad(field, s))?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad(field, s))?;
            if hi < lo {
                return Err(bad(field, s));
            }
            out.extend(lo..=hi);
        } else {
            out.push(token.parse().map_err(|_| bad(field, s))?);
        }
    }
    if out.is_empty() {
        return Err(bad(field, s));
    }
    Ok(out)
}

/// Exact q expression: a sum of integer or a/b terms, e.g. "1+3", "4",
/// "1+1/9". No floating point anywhere.
pub fn parse_q(s: &str) -> Result<Rational> {
    let mut acc = Rational::from_integer(0.into());
    for term in s.split('+') {
        let term = term.trim();
        let r = if let Some((n, d)) = term.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad("q", s))?;
            let d: i64 = d.trim().parse().map_err(|_| bad("q", s))?;
            if d == 0 {
                return Err(bad("q", s));
            }
            Rational::new(BigInt::from(n), BigInt::from(d))
        } else {
            let n: i64 = term.parse().map_err(|_| bad("q", s))?;
            Rational::from_integer(BigInt::from(n))
        };
        acc += r;
    }
    Ok(acc)
}

/// "d:j" — modulus and canonical character index.
pub fn parse_chi(s: &str) -> Result<(u64, u64)> {
    let (d, j) = s.split_once(':').ok_or_else(|| bad("chi", s))?;
    Ok((
        d.trim().parse().map_err(|_| bad("chi", s))?,
        j.trim().parse().map_err(|_| bad("chi", s))?,
    ))
}

/// "d:e1,e2,..." — modulus and explicit exponents on the canonical
/// generators.
pub fn parse_chi_table(s: &str) -> Result<(u64, Vec<u32>)> {
    let (d, exps) = s.split_once(':').ok_or_else(|| bad("chi-table", s))?;
    let d: u64 = d.trim().parse().map_err(|_| bad("chi-table", s))?;
    let exps = parse_list_u32("chi-table", exps)?;
    Ok((d, exps))
}
