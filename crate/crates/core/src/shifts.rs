//! Shifted objects under the two sign conventions.
//!
//! An enlargement is materialized on a finite list of shifted objects
//! `X[r]`; homs are the base homs regraded by `C̃^d(X[n], Y[m]) = C^{d+m−n}(X, Y)`
//! and every suspended product picks up a sign depending only on the shifts
//! of the chain's objects. Direct sums of shifted objects are handled
//! blockwise on top of this (see the twisted module).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::category::{AInftyCategory, Presentation};
use crate::error::{Error, Result};
use crate::functor::AInftyFunctor;
use crate::hpt::{transfer, SDRData};
use crate::multilinear::{Chain, Gen, MultilinearMap, SparseVec};
use crate::scalar::Scalar;
use crate::sign::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ShiftConvention {
    /// Sign `(−1)^{r₁}`: only the first source's shift counts.
    One,
    /// Sign `(−1)^{r₁+⋯+r_k}`: every input's source shift counts.
    Two,
}

impl ShiftConvention {
    pub fn from_int(a: u8) -> Result<Self> {
        match a {
            1 => Ok(ShiftConvention::One),
            2 => Ok(ShiftConvention::Two),
            _ => Err(Error::Parse(format!(
                "shift convention must be 1 or 2, got {a}"
            ))),
        }
    }

    pub fn as_int(self) -> u8 {
        match self {
            ShiftConvention::One => 1,
            ShiftConvention::Two => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            ShiftConvention::One => ShiftConvention::Two,
            ShiftConvention::Two => ShiftConvention::One,
        }
    }

    /// Sign of a suspended product on a chain whose inputs have source
    /// shifts `r₁, …, r_k`.
    pub fn product_sign(self, source_shifts: &[i32]) -> Sign {
        match self {
            ShiftConvention::One => {
                Sign::from_parity(source_shifts.first().copied().unwrap_or(0) as i64)
            }
            ShiftConvention::Two => {
                Sign::from_parity(source_shifts.iter().map(|&r| r as i64).sum())
            }
        }
    }

    /// The same sign in the unsuspended presentation:
    /// `(−1)^{r₁k + r₂+⋯+r_k}` for convention 1 and `(−1)^{r₁k}` for 2.
    pub fn unsuspended_product_sign(self, source_shifts: &[i32]) -> Sign {
        let k = source_shifts.len() as i64;
        let r1 = source_shifts.first().copied().unwrap_or(0) as i64;
        match self {
            ShiftConvention::One => Sign::from_parity(
                r1 * k + source_shifts.iter().skip(1).map(|&r| r as i64).sum::<i64>(),
            ),
            ShiftConvention::Two => Sign::from_parity(r1 * k),
        }
    }

    /// Strict unit of `X[r]` in terms of the unit of `X`.
    pub fn unit_sign(self, r: i32) -> Sign {
        match self {
            ShiftConvention::One => Sign::from_parity(r as i64),
            ShiftConvention::Two => Sign::Plus,
        }
    }
}

impl TryFrom<u8> for ShiftConvention {
    type Error = Error;
    fn try_from(a: u8) -> Result<Self> {
        ShiftConvention::from_int(a)
    }
}

impl From<ShiftConvention> for u8 {
    fn from(a: ShiftConvention) -> u8 {
        a.as_int()
    }
}

impl fmt::Display for ShiftConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

/// A formal sum `X₁[r₁] ⊕ ⋯ ⊕ X_l[r_l]`; summand order is significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumObject {
    pub summands: Vec<(String, i32)>,
}

impl SumObject {
    pub fn new(summands: Vec<(String, i32)>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::Malformed(
                "a sum object needs at least one summand".into(),
            ));
        }
        Ok(SumObject { summands })
    }

    pub fn single(name: &str, shift: i32) -> Self {
        SumObject {
            summands: vec![(name.to_string(), shift)],
        }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Every shift moved by `by`.
    pub fn shifted(&self, by: i32) -> SumObject {
        SumObject {
            summands: self
                .summands
                .iter()
                .map(|(x, r)| (x.clone(), r + by))
                .collect(),
        }
    }

    pub fn concat(&self, other: &SumObject) -> SumObject {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        SumObject { summands }
    }
}

impl fmt::Display for SumObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(x, r)| shifted_name(x, *r))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `X` for shift zero (so zero shifts restrict to the base), `X[r]` otherwise.
pub fn shifted_name(base: &str, r: i32) -> String {
    if r == 0 {
        base.to_string()
    } else {
        format!("{base}[{r}]")
    }
}

/// An enlargement on explicitly listed shifted objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enlargement {
    convention: ShiftConvention,
    base_objects: Vec<String>,
    objects: Vec<(usize, i32)>,
    category: AInftyCategory,
}

impl Enlargement {
    pub fn convention(&self) -> ShiftConvention {
        self.convention
    }

    /// The enlarged category, suspended.
    pub fn category(&self) -> &AInftyCategory {
        &self.category
    }

    pub fn into_category(self) -> AInftyCategory {
        self.category
    }

    /// `(base object index, shift)` per enlarged object.
    pub fn objects(&self) -> &[(usize, i32)] {
        &self.objects
    }

    pub fn base_objects(&self) -> &[String] {
        &self.base_objects
    }

    pub fn index_of(&self, base: usize, shift: i32) -> Option<usize> {
        self.objects.iter().position(|&o| o == (base, shift))
    }

    pub fn shift(&self, object: usize) -> i32 {
        self.objects[object].1
    }

    pub fn base(&self, object: usize) -> usize {
        self.objects[object].0
    }
}

/// Materializes the convention-`a` enlargement of `c` on `objects`.
pub fn enlarge_on(
    c: &AInftyCategory,
    a: ShiftConvention,
    objects: &[(usize, i32)],
) -> Result<Enlargement> {
    let base = c.to_suspended();
    let nb = base.n_objects();
    if let Some(&(x, _)) = objects.iter().find(|(x, _)| *x >= nb) {
        return Err(Error::UnknownObject(format!("object index {x}")));
    }
    let n = objects.len();
    let names: Vec<String> = objects
        .iter()
        .map(|&(x, r)| shifted_name(&base.objects()[x], r))
        .collect();
    let mut homs = Vec::with_capacity(n * n);
    for &(x, r1) in objects {
        for &(y, r2) in objects {
            homs.push(base.hom(x, y).shifted(r1 - r2));
        }
    }
    // enlarged objects lying over each base object
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for (i, &(x, _)) in objects.iter().enumerate() {
        over[x].push(i);
    }
    let shift = |i: u32| objects[i as usize].1;
    let mut products = Vec::with_capacity(base.arity_bound());
    for k in 1..=base.arity_bound() {
        let table = base.product(k).expect("within bound");
        let mut out = MultilinearMap::new(k, 1);
        for (chain, v) in table.iter() {
            // every lift of the base object chain
            let mut lifts: Vec<Vec<u32>> = vec![Vec::new()];
            let base_objs: Vec<u32> = chain
                .iter()
                .map(|g| g.src)
                .chain(std::iter::once(chain[k - 1].tgt))
                .collect();
            for &o in &base_objs {
                lifts = lifts
                    .into_iter()
                    .flat_map(|l| {
                        over[o as usize].iter().map(move |&e| {
                            let mut l = l.clone();
                            l.push(e as u32);
                            l
                        })
                    })
                    .collect();
            }
            for lift in lifts {
                let key: Chain = chain
                    .iter()
                    .enumerate()
                    .map(|(t, g)| Gen {
                        src: lift[t],
                        tgt: lift[t + 1],
                        idx: g.idx,
                    })
                    .collect();
                let shifts: Vec<i32> = lift[..k].iter().map(|&e| shift(e)).collect();
                let s = a.product_sign(&shifts);
                out.set(key, v.map_coefficients(|_, x| s.apply(x)))?;
            }
        }
        products.push(out);
    }
    let units = base.units().map(|us| {
        objects
            .iter()
            .map(|&(x, r)| us[x].map_coefficients(|_, c| a.unit_sign(r).apply(c)))
            .collect()
    });
    let category = AInftyCategory::new(
        names,
        homs,
        Presentation::Suspended,
        base.arity_bound(),
        products,
        units,
    )?;
    Ok(Enlargement {
        convention: a,
        base_objects: base.objects().to_vec(),
        objects: objects.to_vec(),
        category,
    })
}

/// Every base object with every shift in `shifts` (object-major order).
pub fn all_shifted(c: &AInftyCategory, shifts: &[i32]) -> Vec<(usize, i32)> {
    (0..c.n_objects())
        .flat_map(|x| shifts.iter().map(move |&r| (x, r)))
        .collect()
}

pub fn enlarge(c: &AInftyCategory, a: ShiftConvention, shifts: &[i32]) -> Result<Enlargement> {
    enlarge_on(c, a, &all_shifted(c, shifts))
}

/// `C` with the single object `X` replaced by `X[1]`.
pub fn shift_single(c: &AInftyCategory, x: &str, a: ShiftConvention) -> Result<AInftyCategory> {
    let xi = c
        .object_index(x)
        .ok_or_else(|| Error::UnknownObject(x.to_string()))?;
    let objects: Vec<(usize, i32)> = (0..c.n_objects())
        .map(|y| (y, i32::from(y == xi)))
        .collect();
    Ok(enlarge_on(c, a, &objects)?.into_category())
}

/// How the components of an induced functor are signed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftSign {
    /// `f̃_k(ᾱ′…) = (f_k(ᾱ…))′` for both conventions.
    Unsigned,
    /// Unsigned for convention 1; `(−1)^{r₂+⋯+r_k}` for convention 2,
    /// which is the sign the perturbation recursion produces there.
    Compensated,
}

impl LiftSign {
    fn sign(self, a: ShiftConvention, source_shifts: &[i32]) -> Sign {
        match (self, a) {
            (LiftSign::Compensated, ShiftConvention::Two) => {
                Sign::from_parity(source_shifts.iter().skip(1).map(|&r| r as i64).sum())
            }
            _ => Sign::Plus,
        }
    }
}

/// The functor `D̃ → C̃` induced by `F: D → C`, both enlarged with the same
/// shifts. Returns the two enlargements and the functor.
pub fn induce_functor_with(
    f: &AInftyFunctor,
    a: ShiftConvention,
    shifts: &[i32],
    lift: LiftSign,
) -> Result<(Enlargement, Enlargement, AInftyFunctor)> {
    let dt = enlarge(f.source(), a, shifts)?;
    let ct = enlarge(f.target(), a, shifts)?;
    let object_map: Vec<usize> = dt
        .objects()
        .iter()
        .map(|&(x, r)| {
            ct.index_of(f.object_map()[x], r)
                .expect("same shifts on both sides")
        })
        .collect();
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); f.source().n_objects()];
    for (i, &(x, _)) in dt.objects().iter().enumerate() {
        over[x].push(i);
    }
    let mut components = Vec::with_capacity(f.arity_bound());
    for (i, table) in f.components().iter().enumerate() {
        let k = i + 1;
        let mut out = MultilinearMap::new(k, 0);
        for (chain, v) in table.iter() {
            let base_objs: Vec<u32> = chain
                .iter()
                .map(|g| g.src)
                .chain(std::iter::once(chain[k - 1].tgt))
                .collect();
            let mut lifts: Vec<Vec<u32>> = vec![Vec::new()];
            for &o in &base_objs {
                lifts = lifts
                    .into_iter()
                    .flat_map(|l| {
                        over[o as usize].iter().map(move |&e| {
                            let mut l = l.clone();
                            l.push(e as u32);
                            l
                        })
                    })
                    .collect();
            }
            for l in lifts {
                let key: Chain = chain
                    .iter()
                    .enumerate()
                    .map(|(t, g)| Gen {
                        src: l[t],
                        tgt: l[t + 1],
                        idx: g.idx,
                    })
                    .collect();
                let shifts: Vec<i32> = l[..k].iter().map(|&e| dt.shift(e as usize)).collect();
                let s = lift.sign(a, &shifts);
                out.set(key, v.map_coefficients(|_, x| s.apply(x)))?;
            }
        }
        components.push(out);
    }
    let functor = AInftyFunctor::new(dt.category(), ct.category(), object_map, components)?;
    Ok((dt, ct, functor))
}

/// The induced functor, signed so that it satisfies the functor relation
/// for both conventions.
pub fn induce_functor(
    f: &AInftyFunctor,
    a: ShiftConvention,
    shifts: &[i32],
) -> Result<(Enlargement, Enlargement, AInftyFunctor)> {
    induce_functor_with(f, a, shifts, LiftSign::Compensated)
}

/// The SDR on the enlargement: `ι`, `π` unchanged under the identification,
/// `h` signed by `(−1)^{r₁}` for the source shift `r₁` (as is `d`).
pub fn induce_sdr(s: &SDRData, a: ShiftConvention, shifts: &[i32]) -> Result<SDRData> {
    let big = enlarge(s.big(), a, shifts)?;
    let objects = big.objects().to_vec();
    let (mut homs, mut iota, mut pi, mut h) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &(x, r1) in &objects {
        for &(y, r2) in &objects {
            let t = r1 - r2;
            homs.push(s.small_hom(x, y).shifted(t));
            iota.push(s.iota(x, y).reindexed(t, t));
            pi.push(s.pi(x, y).reindexed(t, t));
            h.push(s.h(x, y).reindexed(t, t).scaled(&Scalar::sign(r1 as i64)));
        }
    }
    SDRData::new(big.category(), homs, iota, pi, h)
}

/// First difference between two tables, in key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// `"structure"` or `"functor"`.
    pub part: String,
    pub arity: usize,
    pub objects: Vec<String>,
    pub inputs: Vec<String>,
    pub left: Vec<(String, Scalar)>,
    pub right: Vec<(String, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareReport {
    pub path1_convention: ShiftConvention,
    pub path2_convention: ShiftConvention,
    pub arity: usize,
    pub structures_equal: bool,
    pub functors_equal: bool,
    pub first_mismatch: Option<Mismatch>,
}

impl SquareReport {
    pub fn equal(&self) -> bool {
        self.structures_equal && self.functors_equal
    }
}

fn first_difference(
    part: &str,
    inputs_in: &AInftyCategory,
    outputs_in: &AInftyCategory,
    out_hom: impl Fn(&Chain) -> (usize, usize),
    left: &MultilinearMap,
    right: &MultilinearMap,
) -> Option<Mismatch> {
    let empty = SparseVec::new();
    let mut keys: Vec<&Chain> = left
        .iter()
        .map(|(c, _)| c)
        .chain(right.iter().map(|(c, _)| c))
        .collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        let l = left.get(key).unwrap_or(&empty);
        let r = right.get(key).unwrap_or(&empty);
        if l != r {
            let (objects, inputs) = inputs_in.human_chain(key);
            let (s, t) = out_hom(key);
            let space = outputs_in.hom(s, t);
            let render = |v: &SparseVec| {
                v.iter()
                    .map(|(i, x)| (space.label(*i as usize).to_string(), x.clone()))
                    .collect()
            };
            return Some(Mismatch {
                part: part.to_string(),
                arity: key.len(),
                objects,
                inputs,
                left: render(l),
                right: render(r),
            });
        }
    }
    None
}

/// Transfers then enlarges (path 1, convention `a1`) and enlarges then
/// transfers along the induced SDR (path 2, convention `a2`), and compares
/// structures and functors coefficient by coefficient up to `k_out`.
pub fn hpt_square_check_paired(
    s: &SDRData,
    a1: ShiftConvention,
    a2: ShiftConvention,
    k_out: usize,
    shifts: &[i32],
) -> Result<SquareReport> {
    let (_, f) = transfer(s, k_out)?;
    let (d_tilde, _, f_tilde) = induce_functor(&f, a1, shifts)?;
    let (e, g) = transfer(&induce_sdr(s, a2, shifts)?, k_out)?;
    let dt = d_tilde.category();
    if dt.objects() != e.objects() || dt.homs() != e.homs() {
        return Err(Error::CategoryMismatch(
            "the two paths produced different hom spaces".into(),
        ));
    }
    let mut mismatch = None;
    let mut structures_equal = true;
    for k in 1..=k_out {
        let (l, r) = (dt.product(k).expect("bound"), e.product(k).expect("bound"));
        if l != r {
            structures_equal = false;
            if mismatch.is_none() {
                let hom = |c: &Chain| (c[0].src as usize, c[c.len() - 1].tgt as usize);
                mismatch = first_difference("structure", dt, dt, hom, l, r);
            }
        }
    }
    let mut functors_equal = true;
    for k in 1..=k_out {
        let (l, r) = (
            f_tilde.component(k).expect("bound"),
            g.component(k).expect("bound"),
        );
        if l != r {
            functors_equal = false;
            if mismatch.is_none() {
                let om = f_tilde.object_map().to_vec();
                let hom = move |c: &Chain| (om[c[0].src as usize], om[c[c.len() - 1].tgt as usize]);
                mismatch = first_difference("functor", dt, g.target(), hom, l, r);
            }
        }
    }
    Ok(SquareReport {
        path1_convention: a1,
        path2_convention: a2,
        arity: k_out,
        structures_equal,
        functors_equal,
        first_mismatch: mismatch,
    })
}

pub fn hpt_square_check(
    s: &SDRData,
    a: ShiftConvention,
    k_out: usize,
    shifts: &[i32],
) -> Result<SquareReport> {
    hpt_square_check_paired(s, a, a, k_out, shifts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_shift_examples() {
        use ShiftConvention::*;
        assert_eq!(One.product_sign(&[1]), Sign::Minus);
        assert_eq!(Two.product_sign(&[1]), Sign::Minus);
        // chain (Y, X, Z) with only X shifted
        assert_eq!(One.product_sign(&[0, 1]), Sign::Plus);
        assert_eq!(Two.product_sign(&[0, 1]), Sign::Minus);
        assert_eq!(One.product_sign(&[0, 0, 0]), Sign::Plus);
        assert_eq!(Two.product_sign(&[0, 0, 0]), Sign::Plus);
    }

    #[test]
    fn unsuspended_examples() {
        use ShiftConvention::*;
        assert_eq!(One.unsuspended_product_sign(&[1]), Sign::Minus);
        assert_eq!(Two.unsuspended_product_sign(&[1]), Sign::Minus);
        assert_eq!(One.unsuspended_product_sign(&[0, 1]), Sign::Minus);
        assert_eq!(Two.unsuspended_product_sign(&[0, 1]), Sign::Plus);
    }

    #[test]
    fn convention_serializes_as_integer() {
        assert_eq!(serde_json::to_string(&ShiftConvention::Two).unwrap(), "2");
        assert!(serde_json::from_str::<ShiftConvention>("3").is_err());
    }
}
