//! The quadratic A∞-relations, evaluated chain by chain.

use crate::category::{AInftyCategory, Presentation};
use crate::error::{Error, Result};
use crate::multilinear::{insert_compose, Accumulator, Chain, Gen, MultilinearMap, SparseVec};
use crate::report::{RelationReport, Violation};
use crate::sign::{sign_suspended, sign_unsuspended};

/// The arity-`n` relation as a table: every composable chain of length `n`
/// maps to the value of the signed double sum on it.
pub fn relation_residual(c: &AInftyCategory, n: usize) -> MultilinearMap {
    let pres = c.presentation();
    let mut acc = Accumulator::new(|s, t| c.dim(s, t));
    let top = n.min(c.arity_bound());
    for l in 1..=top {
        let k = n + 1 - l;
        let (Some(outer), Some(inner)) = (c.product(k), c.product(l)) else {
            continue;
        };
        let degrees =
            |prefix: &[Gen]| -> Vec<i32> { prefix.iter().map(|g| c.degree(*g)).collect() };
        match pres {
            Presentation::Suspended => insert_compose(
                outer,
                inner,
                |_, prefix| sign_suspended(&degrees(prefix)),
                &mut acc,
            ),
            Presentation::Unsuspended => insert_compose(
                outer,
                inner,
                |j, prefix| sign_unsuspended(j, l, &degrees(prefix)),
                &mut acc,
            ),
        }
    }
    let degree = match pres {
        Presentation::Suspended => 2,
        Presentation::Unsuspended => 3 - n as i32,
    };
    acc.into_map(n, degree)
}

/// Turns the nonzero entries of a residual table into violations labelled
/// by the category's objects and bases.
pub fn violations_from(
    c: &AInftyCategory,
    relation: &str,
    residual: &MultilinearMap,
) -> Vec<Violation> {
    residual
        .iter()
        .map(|(chain, v)| violation(c, c, relation, chain, v))
        .collect()
}

/// A violation whose inputs live in `inputs_in` and whose residual lives in
/// `output_in` (they differ for functor relations).
pub fn violation(
    inputs_in: &AInftyCategory,
    output_in: &AInftyCategory,
    relation: &str,
    chain: &Chain,
    residual: &SparseVec,
) -> Violation {
    let (objects, inputs) = inputs_in.human_chain(chain);
    violation_with_output(
        output_in,
        relation,
        objects,
        inputs,
        residual,
        out_hom(chain),
    )
}

fn out_hom(chain: &[Gen]) -> (u32, u32) {
    (chain[0].src, chain[chain.len() - 1].tgt)
}

pub fn violation_with_output(
    output_in: &AInftyCategory,
    relation: &str,
    objects: Vec<String>,
    inputs: Vec<String>,
    residual: &SparseVec,
    hom: (u32, u32),
) -> Violation {
    let space = output_in.hom(hom.0 as usize, hom.1 as usize);
    Violation {
        relation: relation.to_string(),
        arity: inputs.len(),
        objects,
        inputs,
        residual: residual
            .iter()
            .map(|(i, x)| (space.label(*i as usize).to_string(), x.clone()))
            .collect(),
    }
}

/// Checks every relation of arity `1..=n_max`.
///
/// Arities above `2K - 1` are refused: they only involve products assumed
/// to vanish, so the check would certify the contract rather than the data.
pub fn check_relations(c: &AInftyCategory, n_max: usize) -> Result<RelationReport> {
    if n_max == 0 {
        return Err(Error::Malformed("relation arity must be positive".into()));
    }
    let allowed = 2 * c.arity_bound() - 1;
    if n_max > allowed {
        return Err(Error::ArityBound {
            requested: n_max,
            allowed,
        });
    }
    let mut report = RelationReport::new(n_max);
    for n in 1..=n_max {
        let residual = relation_residual(c, n);
        report
            .violations
            .extend(violations_from(c, "a-infinity relation", &residual));
    }
    Ok(report)
}

/// Strict-unit identities: units closed, two-sided neutral for the
/// composition, and killed by every higher product. Vacuous without units.
pub fn check_units(c: &AInftyCategory) -> RelationReport {
    let mut report = RelationReport::new(c.arity_bound());
    let Some(units) = c.units() else {
        return report;
    };
    let u = c.to_unsuspended();
    let n = u.n_objects();
    let unit_chain = |x: usize| {
        units[x]
            .iter()
            .map(move |(i, _)| Gen::new(x, x, *i as usize))
    };
    // closedness
    for x in 0..n {
        let input = crate::multilinear::HomVec {
            src: x as u32,
            tgt: x as u32,
            coeffs: units[x].to_dense(u.dim(x as u32, x as u32)),
        };
        let d = u.eval(1, &[input]).expect("unit has the right shape");
        if !d.is_zero() {
            report.push(violation_with_output(
                &u,
                "unit is closed",
                vec![u.objects()[x].clone(), u.objects()[x].clone()],
                vec![format!("1_{}", u.objects()[x])],
                &SparseVec::from_dense(&d.coeffs),
                (x as u32, x as u32),
            ));
        }
    }
    let dense_unit = |x: usize| crate::multilinear::HomVec {
        src: x as u32,
        tgt: x as u32,
        coeffs: units[x].to_dense(u.dim(x as u32, x as u32)),
    };
    for x in 0..n {
        for y in 0..n {
            for i in 0..u.dim(x as u32, y as u32) {
                let a = crate::multilinear::HomVec::basis(x, y, u.dim(x as u32, y as u32), i);
                let label = u.label(Gen::new(x, y, i)).to_string();
                let objs = vec![u.objects()[x].clone(), u.objects()[y].clone()];
                let left = u.eval(2, &[dense_unit(x), a.clone()]).expect("composable");
                let right = u.eval(2, &[a.clone(), dense_unit(y)]).expect("composable");
                for (side, got) in [("left unit", left), ("right unit", right)] {
                    let mut diff = got.coeffs.clone();
                    diff[i] -= &crate::scalar::Scalar::one();
                    if diff.iter().any(|z| !z.is_zero()) {
                        report.push(violation_with_output(
                            &u,
                            side,
                            objs.clone(),
                            vec![label.clone()],
                            &SparseVec::from_dense(&diff),
                            (x as u32, y as u32),
                        ));
                    }
                }
            }
        }
    }
    for k in 3..=u.arity_bound() {
        let m = u.product(k).expect("k within bound");
        for (chain, v) in m.iter() {
            let hits_unit = chain
                .iter()
                .any(|g| g.src == g.tgt && unit_chain(g.src as usize).any(|ug| ug == *g));
            if hits_unit && !v.is_zero() {
                report.push(violation(&u, &u, "higher product kills units", chain, v));
            }
        }
    }
    report
}
