//! The DG category of complexes against its own enlargement: shifted
//! complexes on one side, shifted objects with convention signs on the other.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::category::AInftyCategory;
use crate::dg::{
    build_dg_category, compose, differential, shift_morphism, unshift_morphism, Complex, HomBasis,
};
use crate::error::Result;
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::multilinear::Gen;
use crate::scalar::Scalar;
use crate::shifts::{enlarge, shifted_name, ShiftConvention};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgMismatch {
    pub arity: usize,
    pub objects: Vec<String>,
    /// Shifts of `objects`, in order.
    pub shifts: Vec<i32>,
    pub inputs: Vec<String>,
    pub enlarged: Vec<(String, Scalar)>,
    pub dg: Vec<(String, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgComparison {
    pub convention: ShiftConvention,
    pub shifts: Vec<i32>,
    pub chains_checked: usize,
    /// Every enlarged product of arity three or more is zero.
    pub higher_vanish: bool,
    pub mismatches: Vec<DgMismatch>,
}

impl DgComparison {
    pub fn equal(&self) -> bool {
        self.higher_vanish && self.mismatches.is_empty()
    }

    pub fn first_at(&self, arity: usize) -> Option<&DgMismatch> {
        self.mismatches.iter().find(|m| m.arity == arity)
    }

    /// The mismatch of lowest arity with the smallest source shifts,
    /// nonnegative shifts first.
    pub fn witness(&self) -> Option<&DgMismatch> {
        let key = |m: &DgMismatch| {
            let sources: Vec<(i32, bool)> = m.shifts[..m.arity]
                .iter()
                .map(|&r| (r.abs(), r < 0))
                .collect();
            (m.arity, sources)
        };
        self.mismatches.iter().min_by_key(|m| key(m))
    }

    /// `EQUAL`, or `DIFFERS at arity n, shifts (r₁,…)` naming the source
    /// shifts of the witness inputs.
    pub fn verdict(&self) -> String {
        match self.witness() {
            None if self.higher_vanish => "EQUAL".to_string(),
            None => "DIFFERS above arity 2".to_string(),
            Some(m) => {
                let shifts: Vec<String> =
                    m.shifts[..m.arity].iter().map(|r| r.to_string()).collect();
                format!(
                    "DIFFERS at arity {}, shifts ({})",
                    m.arity,
                    shifts.join(",")
                )
            }
        }
    }
}

/// Both comparisons on one set of complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgDemo {
    pub convention_two: DgComparison,
    pub convention_one: DgComparison,
}

impl DgDemo {
    pub fn summary(&self) -> String {
        format!(
            "a=2: {}; a=1: {}",
            self.convention_two.verdict(),
            self.convention_one.verdict()
        )
    }
}

pub fn demo_dg(complexes: &[(String, Complex)], shifts: &[i32]) -> Result<DgDemo> {
    Ok(DgDemo {
        convention_two: check_dg_equals_tilde2(complexes, shifts)?,
        convention_one: compare_dg_with_enlargement(complexes, ShiftConvention::One, shifts, 3)?,
    })
}

/// Two small complexes with a nonzero composition between their shifts:
/// `X = (Q → Q)` in degrees 0, 1 and `Y = (Q → Q²)` in degrees −1, 0.
pub fn demo_complexes() -> Vec<(String, Complex)> {
    let x = Complex::new(
        0,
        vec![1, 1],
        BTreeMap::from([(0, Matrix::from_ints(1, 1, &[1]))]),
    )
    .expect("d² = 0");
    let y = Complex::new(
        -1,
        vec![1, 2],
        BTreeMap::from([(-1, Matrix::from_ints(2, 1, &[1, -1]))]),
    )
    .expect("d² = 0");
    vec![("X".into(), x), ("Y".into(), y)]
}

fn nonzero(labels: &HomBasis, v: &[Scalar]) -> Vec<(String, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (labels.space.label(i).to_string(), x.clone()))
        .collect()
}

/// Compares the unsuspended `m̃₁`, `m̃₂` of the convention-`a` enlargement
/// on every `X[r]` (`r ∈ shifts`) with the differential and composition of
/// the shifted complexes, read back through the shift identification.
pub fn compare_dg_with_enlargement(
    complexes: &[(String, Complex)],
    a: ShiftConvention,
    shifts: &[i32],
    arity_bound: usize,
) -> Result<DgComparison> {
    let c = build_dg_category(complexes, arity_bound)?;
    let enlarged = enlarge(&c, a, shifts)?;
    let e: AInftyCategory = enlarged.category().to_unsuspended();
    let n = complexes.len();
    let bases: Vec<HomBasis> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| HomBasis::new(&complexes[x].1, &complexes[y].1))
        .collect::<Result<_>>()?;
    let shifted: Vec<Vec<Complex>> = complexes
        .iter()
        .map(|(_, cx)| shifts.iter().map(|&r| cx.shifted(r)).collect())
        .collect();
    let index = |x: usize, ri: usize| {
        enlarged
            .index_of(x, shifts[ri])
            .expect("object is enlarged")
    };
    let name = |x: usize, ri: usize| shifted_name(&complexes[x].0, shifts[ri]);
    let mut report = DgComparison {
        convention: a,
        shifts: shifts.to_vec(),
        chains_checked: 0,
        higher_vanish: e.products().iter().skip(2).all(|m| m.is_zero()),
        mismatches: Vec::new(),
    };
    // products on basis chains are plain table lookups
    let lookup = |arity: usize, chain: &[Gen], dim: usize| -> Vector {
        e.product(arity)
            .and_then(|m| m.get(chain))
            .map_or_else(|| zero_vector(dim), |v| v.to_dense(dim))
    };
    // arity one
    for x in 0..n {
        for y in 0..n {
            let b = &bases[x * n + y];
            for (ri, &r) in shifts.iter().enumerate() {
                for (si, &s) in shifts.iter().enumerate() {
                    let (p, q) = (index(x, ri), index(y, si));
                    for k in 0..b.space.total_dim() {
                        let phi = b.element(k);
                        let d = differential(
                            &shifted[x][ri],
                            &shifted[y][si],
                            &shift_morphism(&phi, r, s),
                        )?;
                        let dg: Vector = b.to_vector(&unshift_morphism(&d, r, s))?;
                        let got = lookup(1, &[Gen::new(p, q, k)], b.space.total_dim());
                        report.chains_checked += 1;
                        if got != dg {
                            report.mismatches.push(DgMismatch {
                                arity: 1,
                                objects: vec![name(x, ri), name(y, si)],
                                shifts: vec![r, s],
                                inputs: vec![b.space.label(k).to_string()],
                                enlarged: nonzero(b, &got),
                                dg: nonzero(b, &dg),
                            });
                        }
                    }
                }
            }
        }
    }
    // arity two
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (bxy, byz, bxz) = (&bases[x * n + y], &bases[y * n + z], &bases[x * n + z]);
                for (ri, &r) in shifts.iter().enumerate() {
                    for (si, &s) in shifts.iter().enumerate() {
                        for (ti, &t) in shifts.iter().enumerate() {
                            let (p, q, w) = (index(x, ri), index(y, si), index(z, ti));
                            for k in 0..bxy.space.total_dim() {
                                let phi = shift_morphism(&bxy.element(k), r, s);
                                for l in 0..byz.space.total_dim() {
                                    let psi = shift_morphism(&byz.element(l), s, t);
                                    let comp = compose(
                                        &shifted[x][ri],
                                        &shifted[y][si],
                                        &shifted[z][ti],
                                        &phi,
                                        &psi,
                                    )?;
                                    let dg = bxz.to_vector(&unshift_morphism(&comp, r, t))?;
                                    let got = lookup(
                                        2,
                                        &[Gen::new(p, q, k), Gen::new(q, w, l)],
                                        bxz.space.total_dim(),
                                    );
                                    report.chains_checked += 1;
                                    if got != dg {
                                        report.mismatches.push(DgMismatch {
                                            arity: 2,
                                            objects: vec![name(x, ri), name(y, si), name(z, ti)],
                                            shifts: vec![r, s, t],
                                            inputs: vec![
                                                bxy.space.label(k).to_string(),
                                                byz.space.label(l).to_string(),
                                            ],
                                            enlarged: nonzero(bxz, &got),
                                            dg: nonzero(bxz, &dg),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `DG = C̃⁽²⁾` on the given shifts.
pub fn check_dg_equals_tilde2(
    complexes: &[(String, Complex)],
    shifts: &[i32],
) -> Result<DgComparison> {
    compare_dg_with_enlargement(complexes, ShiftConvention::Two, shifts, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> Vec<(String, Complex)> {
        demo_complexes()
    }

    #[test]
    fn convention_two_matches() {
        let r = check_dg_equals_tilde2(&demo(), &[-2, -1, 0, 1, 2]).unwrap();
        assert!(r.equal(), "{:?}", r.mismatches.first());
    }

    #[test]
    fn convention_one_differs_at_arity_two_with_shifts_zero_one() {
        let r = compare_dg_with_enlargement(&demo(), ShiftConvention::One, &[0, 1], 3).unwrap();
        assert!(r.first_at(1).is_none());
        let m = r.first_at(2).expect("a sign mismatch");
        assert_eq!(
            m.enlarged
                .iter()
                .map(|(l, x)| (l.clone(), -x))
                .collect::<Vec<_>>(),
            m.dg
        );
    }

    #[test]
    fn demo_verdicts() {
        let d = demo_dg(&demo(), &[-2, -1, 0, 1, 2]).unwrap();
        assert_eq!(
            d.summary(),
            "a=2: EQUAL; a=1: DIFFERS at arity 2, shifts (0,1)"
        );
        let z = demo_dg(&demo(), &[0]).unwrap();
        assert_eq!(z.summary(), "a=2: EQUAL; a=1: EQUAL");
    }
}
