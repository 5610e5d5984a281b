//! The finite-groupoid text format.
//!
//! Line-oriented, `#` comments:
//!
//! ```text
//! elements u g
//! units u
//! arrow g d=u t=u
//! mul g g u
//! ```
//!
//! `arrow` lines give endpoints for non-unit elements (units are their own
//! endpoints); `mul x y z` records `x . y = z` and is required for every
//! composable pair of non-units (products with units follow from the unit
//! laws). The category axioms are machine-checked on load.

use selfsim_core::finitegpd::{ElemId, FgError, FiniteGroupoid};
use thiserror::Error;

use crate::spec_format::ParseError;

#[derive(Debug, Error)]
pub enum GpdError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("groupoid validation failed: {0}")]
    Invalid(#[from] FgError),
}

pub fn parse_groupoid(text: &str) -> Result<FiniteGroupoid, GpdError> {
    let mut names: Vec<String> = Vec::new();
    let mut unit_names: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    let mut muls: Vec<(String, String, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let err = |message: String| ParseError {
            line: line_num,
            col: 1,
            message,
        };
        match toks[0] {
            "elements" => names.extend(toks[1..].iter().map(|s| s.to_string())),
            "units" => unit_names.extend(toks[1..].iter().map(|s| s.to_string())),
            "arrow" => {
                if toks.len() != 4 {
                    return Err(err("expected `arrow NAME d=U t=U`".into()).into());
                }
                let d = toks[2]
                    .strip_prefix("d=")
                    .ok_or_else(|| err("expected `d=UNIT`".into()))?;
                let t = toks[3]
                    .strip_prefix("t=")
                    .ok_or_else(|| err("expected `t=UNIT`".into()))?;
                arrows.push((toks[1].to_string(), d.to_string(), t.to_string()));
            }
            "mul" => {
                if toks.len() != 4 {
                    return Err(err("expected `mul X Y Z`".into()).into());
                }
                muls.push((
                    toks[1].to_string(),
                    toks[2].to_string(),
                    toks[3].to_string(),
                ));
            }
            other => return Err(err(format!("unknown declaration `{other}`")).into()),
        }
    }

    let id_of = |name: &str| -> Result<ElemId, GpdError> {
        names
            .iter()
            .position(|n| n == name)
            .map(|i| ElemId(i as u32))
            .ok_or_else(|| GpdError::UnknownElement(name.to_string()))
    };

    let units: Vec<ElemId> = unit_names
        .iter()
        .map(|n| id_of(n))
        .collect::<Result<_, _>>()?;
    // endpoints: units point at themselves, arrows fill in the rest
    let mut dom: Vec<Option<ElemId>> = vec![None; names.len()];
    let mut tgt: Vec<Option<ElemId>> = vec![None; names.len()];
    for &u in &units {
        dom[u.index()] = Some(u);
        tgt[u.index()] = Some(u);
    }
    for (name, d, t) in &arrows {
        let x = id_of(name)?;
        dom[x.index()] = Some(id_of(d)?);
        tgt[x.index()] = Some(id_of(t)?);
    }
    let dom: Vec<ElemId> = dom
        .into_iter()
        .enumerate()
        .map(|(i, d)| d.ok_or_else(|| GpdError::UnknownElement(format!("{} (no arrow line)", names[i]))))
        .collect::<Result<_, _>>()?;
    let tgt: Vec<ElemId> = tgt
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| GpdError::UnknownElement(format!("{} (no arrow line)", names[i]))))
        .collect::<Result<_, _>>()?;

    let products: Vec<(ElemId, ElemId, ElemId)> = muls
        .iter()
        .map(|(x, y, z)| Ok((id_of(x)?, id_of(y)?, id_of(z)?)))
        .collect::<Result<_, GpdError>>()?;

    Ok(FiniteGroupoid::new(names, units, dom, tgt, products)?)
}
