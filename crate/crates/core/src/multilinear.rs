//! Sparse multilinear maps keyed by chains of basis elements, and the two
//! table-level compositions everything else is built from: inserting one
//! table into a slot of another, and feeding a family of tables into the
//! inputs of an outer table.

use std::collections::{BTreeMap, HashMap};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Vector};
use crate::scalar::Scalar;
use crate::sign::Sign;

/// A basis element of the hom space `(src, tgt)`, by flat index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen {
    pub src: u32,
    pub tgt: u32,
    pub idx: u32,
}

impl Gen {
    pub fn new(src: usize, tgt: usize, idx: usize) -> Self {
        Gen {
            src: src as u32,
            tgt: tgt as u32,
            idx: idx as u32,
        }
    }
}

pub type Chain = SmallVec<[Gen; 6]>;

pub fn is_composable(chain: &[Gen]) -> bool {
    chain.windows(2).all(|w| w[0].tgt == w[1].src)
}

/// Sorted `(index, coefficient)` pairs with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(u32, Scalar)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec(
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i as u32, x.clone()))
                .collect(),
        )
    }

    /// From arbitrary pairs; duplicates are summed, zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Scalar)>) -> Self {
        let mut map: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (i, x) in pairs {
            *map.entry(i).or_default() += x;
        }
        SparseVec(map.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }

    pub fn unit(idx: usize) -> Self {
        SparseVec(vec![(idx as u32, Scalar::one())])
    }

    pub fn to_dense(&self, n: usize) -> Vector {
        let mut v = zero_vector(n);
        for (i, x) in &self.0 {
            v[*i as usize] = x.clone();
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u32, Scalar)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, idx: u32) -> Option<&Scalar> {
        self.0
            .binary_search_by_key(&idx, |(i, _)| *i)
            .ok()
            .map(|p| &self.0[p].1)
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.last().map(|(i, _)| *i)
    }

    pub fn scaled(&self, s: &Scalar) -> SparseVec {
        if s.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, x)| (*i, x * s)).collect())
    }

    pub fn map_coefficients(&self, f: impl Fn(u32, &Scalar) -> Scalar) -> SparseVec {
        SparseVec(
            self.0
                .iter()
                .map(|(i, x)| (*i, f(*i, x)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        )
    }
}

impl FromIterator<(u32, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (u32, Scalar)>>(iter: T) -> Self {
        SparseVec::from_pairs(iter)
    }
}

/// A vector in the hom space `(src, tgt)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomVec {
    pub src: u32,
    pub tgt: u32,
    pub coeffs: Vector,
}

impl HomVec {
    pub fn zero(src: usize, tgt: usize, dim: usize) -> Self {
        HomVec {
            src: src as u32,
            tgt: tgt as u32,
            coeffs: zero_vector(dim),
        }
    }

    pub fn basis(src: usize, tgt: usize, dim: usize, idx: usize) -> Self {
        let mut v = Self::zero(src, tgt, dim);
        v.coeffs[idx] = Scalar::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn scaled(&self, s: &Scalar) -> HomVec {
        HomVec {
            src: self.src,
            tgt: self.tgt,
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &HomVec) {
        debug_assert_eq!((self.src, self.tgt), (other.src, other.tgt));
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

/// A sparse multilinear map of fixed arity and degree.
///
/// Entries map a composable chain of basis elements to the (sparse) output
/// vector in the hom space from the chain's first source to its last target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearMap {
    arity: usize,
    degree: i32,
    entries: BTreeMap<Chain, SparseVec>,
}

impl MultilinearMap {
    pub fn new(arity: usize, degree: i32) -> Self {
        assert!(arity >= 1, "multilinear maps have arity at least one");
        MultilinearMap {
            arity,
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, chain: &[Gen]) -> Option<&SparseVec> {
        self.entries.get(chain)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Chain, &SparseVec)> {
        self.entries.iter()
    }

    /// Replaces the entry for `chain`; zero outputs remove it.
    pub fn set(&mut self, chain: Chain, out: SparseVec) -> Result<()> {
        if chain.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: chain.len(),
            });
        }
        if !is_composable(&chain) {
            return Err(Error::Composability(format!("{chain:?}")));
        }
        if out.is_zero() {
            self.entries.remove(&chain);
        } else {
            self.entries.insert(chain, out);
        }
        Ok(())
    }

    pub fn map_entries(&self, mut f: impl FnMut(&Chain, &SparseVec) -> SparseVec) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(c, v)| (c.clone(), f(c, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        MultilinearMap {
            arity: self.arity,
            degree: self.degree,
            entries,
        }
    }

    pub fn with_degree(mut self, degree: i32) -> Self {
        self.degree = degree;
        self
    }

    /// Renames the basis elements of every key; used for object relabelling.
    pub fn rekeyed(&self, mut f: impl FnMut(Gen) -> Gen) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(c, v)| (c.iter().map(|g| f(*g)).collect(), v.clone()))
            .collect();
        MultilinearMap {
            arity: self.arity,
            degree: self.degree,
            entries,
        }
    }

    pub fn from_entries(
        arity: usize,
        degree: i32,
        entries: impl IntoIterator<Item = (Chain, SparseVec)>,
    ) -> Result<Self> {
        let mut m = Self::new(arity, degree);
        for (c, v) in entries {
            m.set(c, v)?;
        }
        Ok(m)
    }
}

/// Evaluates `m` on a composable chain of homogeneous or inhomogeneous
/// vectors, extending the coefficient table multilinearly.
pub fn eval_multilinear(m: &MultilinearMap, inputs: &[HomVec], out_dim: usize) -> Result<HomVec> {
    if inputs.len() != m.arity() {
        return Err(Error::Arity {
            expected: m.arity(),
            got: inputs.len(),
        });
    }
    if inputs.windows(2).any(|w| w[0].tgt != w[1].src) {
        return Err(Error::Composability("input chain is not composable".into()));
    }
    let src = inputs[0].src;
    let tgt = inputs[inputs.len() - 1].tgt;
    let mut out = HomVec {
        src,
        tgt,
        coeffs: zero_vector(out_dim),
    };
    'entries: for (chain, v) in m.iter() {
        let mut coef = Scalar::one();
        for (g, x) in chain.iter().zip(inputs) {
            if (g.src, g.tgt) != (x.src, x.tgt) {
                continue 'entries;
            }
            let c = x.coeffs.get(g.idx as usize).ok_or_else(|| {
                Error::Dimension(format!("basis index {} outside input vector", g.idx))
            })?;
            if c.is_zero() {
                continue 'entries;
            }
            coef *= c;
        }
        for (i, y) in v.iter() {
            let slot = out.coeffs.get_mut(*i as usize).ok_or_else(|| {
                Error::DegreeWindow(format!("output index {i} outside target of dim {out_dim}"))
            })?;
            *slot += &coef * y;
        }
    }
    Ok(out)
}

/// Lookup of a table's entries by their first basis element.
pub struct FirstIndex<'a> {
    by_first: HashMap<Gen, Vec<(&'a [Gen], &'a SparseVec)>>,
}

impl<'a> FirstIndex<'a> {
    pub fn new(m: &'a MultilinearMap) -> Self {
        let mut by_first: HashMap<Gen, Vec<(&'a [Gen], &'a SparseVec)>> = HashMap::new();
        for (c, v) in m.iter() {
            by_first.entry(c[0]).or_default().push((&c[1..], v));
        }
        FirstIndex { by_first }
    }

    pub fn is_empty(&self) -> bool {
        self.by_first.is_empty()
    }

    /// Accumulates `scale * m(inputs)` into `out`; inputs are dense vectors in
    /// the hom spaces named by `homs`.
    pub fn eval_into(
        &self,
        homs: &[(u32, u32)],
        inputs: &[&[Scalar]],
        scale: &Scalar,
        out: &mut [Scalar],
    ) {
        let (s0, t0) = homs[0];
        for (p, x) in inputs[0].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let Some(list) = self.by_first.get(&Gen {
                src: s0,
                tgt: t0,
                idx: p as u32,
            }) else {
                continue;
            };
            'entry: for (rest, v) in list {
                let mut coef = x * scale;
                for (t, g) in rest.iter().enumerate() {
                    if (g.src, g.tgt) != homs[t + 1] {
                        continue 'entry;
                    }
                    let y = &inputs[t + 1][g.idx as usize];
                    if y.is_zero() {
                        continue 'entry;
                    }
                    coef *= y;
                }
                for (i, y) in v.iter() {
                    out[*i as usize] += &coef * y;
                }
            }
        }
    }
}

/// Chain-keyed accumulator of dense output vectors.
pub struct Accumulator<F: Fn(u32, u32) -> usize> {
    dim_of: F,
    sums: HashMap<Chain, Vector>,
}

impl<F: Fn(u32, u32) -> usize> Accumulator<F> {
    pub fn new(dim_of: F) -> Self {
        Accumulator {
            dim_of,
            sums: HashMap::new(),
        }
    }

    fn slot(&mut self, key: &[Gen]) -> &mut Vector {
        if !self.sums.contains_key(key) {
            let dim = (self.dim_of)(key[0].src, key[key.len() - 1].tgt);
            self.sums.insert(Chain::from_slice(key), zero_vector(dim));
        }
        self.sums.get_mut(key).unwrap()
    }

    pub fn add_sparse(&mut self, key: &[Gen], coef: &Scalar, v: &SparseVec) {
        let slot = self.slot(key);
        for (i, y) in v.iter() {
            slot[*i as usize] += coef * y;
        }
    }

    pub fn add_dense(&mut self, key: &[Gen], coef: &Scalar, v: &[Scalar]) {
        let slot = self.slot(key);
        for (o, y) in slot.iter_mut().zip(v) {
            if !y.is_zero() {
                *o += coef * y;
            }
        }
    }

    /// Direct access for callers that evaluate straight into the slot.
    pub fn slot_mut(&mut self, key: &[Gen]) -> &mut Vector {
        self.slot(key)
    }

    pub fn into_map(self, arity: usize, degree: i32) -> MultilinearMap {
        let entries = self
            .sums
            .into_iter()
            .map(|(c, v)| (c, SparseVec::from_dense(&v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        MultilinearMap {
            arity,
            degree,
            entries,
        }
    }
}

/// Adds `Σ_j sign(j, prefix) · outer(a_1..a_j, inner(a_{j+1}..a_{j+l}), ..)`
/// for every chain into `acc`. The sign callback receives the slot and the
/// prefix `a_1..a_j`; `coef_map` post-processes the outer output (for
/// functors whose outputs live elsewhere it is the identity on coefficients).
pub fn insert_compose<F: Fn(u32, u32) -> usize>(
    outer: &MultilinearMap,
    inner: &MultilinearMap,
    sign: impl Fn(usize, &[Gen]) -> Sign,
    acc: &mut Accumulator<F>,
) {
    if outer.is_empty() || inner.is_empty() {
        return;
    }
    let mut by_slot: HashMap<(usize, Gen), Vec<(&Chain, &SparseVec)>> = HashMap::new();
    for (c, v) in outer.iter() {
        for (j, g) in c.iter().enumerate() {
            by_slot.entry((j, *g)).or_default().push((c, v));
        }
    }
    let mut key: Vec<Gen> = Vec::with_capacity(outer.arity() + inner.arity());
    for (ic, iv) in inner.iter() {
        let (src, tgt) = (ic[0].src, ic[ic.len() - 1].tgt);
        for (idx, coef) in iv.iter() {
            let e = Gen {
                src,
                tgt,
                idx: *idx,
            };
            for j in 0..outer.arity() {
                let Some(list) = by_slot.get(&(j, e)) else {
                    continue;
                };
                for (oc, ov) in list {
                    let s = sign(j, &oc[..j]);
                    key.clear();
                    key.extend_from_slice(&oc[..j]);
                    key.extend_from_slice(ic);
                    key.extend_from_slice(&oc[j + 1..]);
                    acc.add_sparse(&key, &s.apply(coef), ov);
                }
            }
        }
    }
}

/// One entry of a family of component tables, with its output densified.
pub struct FamilyEntry<'a> {
    pub chain: &'a [Gen],
    pub out: Vector,
    pub out_hom: (u32, u32),
}

/// A family `f_1, f_2, …` of tables indexed by starting object and arity.
pub struct Family<'a> {
    by_start: HashMap<(u32, usize), Vec<FamilyEntry<'a>>>,
    max_arity: usize,
}

impl<'a> Family<'a> {
    /// `tables[k-1]` is the arity-`k` component; `out_hom` maps a key's
    /// first source and last target to the hom space of the output, and
    /// `dim_of` gives that space's dimension.
    pub fn new(
        tables: &[&'a MultilinearMap],
        out_hom: impl Fn(u32, u32) -> (u32, u32),
        dim_of: impl Fn(u32, u32) -> usize,
    ) -> Self {
        let mut by_start: HashMap<(u32, usize), Vec<FamilyEntry<'a>>> = HashMap::new();
        for (k, t) in tables.iter().enumerate() {
            for (c, v) in t.iter() {
                let hom = out_hom(c[0].src, c[c.len() - 1].tgt);
                let out = v.to_dense(dim_of(hom.0, hom.1));
                by_start
                    .entry((c[0].src, k + 1))
                    .or_default()
                    .push(FamilyEntry {
                        chain: c,
                        out,
                        out_hom: hom,
                    });
            }
        }
        Family {
            by_start,
            max_arity: tables.len(),
        }
    }

    pub fn entries(&self, start: u32, arity: usize) -> &[FamilyEntry<'a>] {
        self.by_start
            .get(&(start, arity))
            .map_or(&[], Vec::as_slice)
    }

    fn starts(&self) -> impl Iterator<Item = u32> + '_ {
        let mut s: Vec<u32> = self.by_start.keys().map(|(o, _)| *o).collect();
        s.sort_unstable();
        s.dedup();
        s.into_iter()
    }
}

/// Adds `outer(f_{k_1}(..) ⊗ … ⊗ f_{k_i}(..))` over all splittings of chains
/// of length `total` into `i = outer.arity()` consecutive blocks. No Koszul
/// signs arise: the family is assumed to consist of degree-zero maps.
pub fn substitute<F: Fn(u32, u32) -> usize>(
    outer: &MultilinearMap,
    family: &Family<'_>,
    total: usize,
    scale: &Scalar,
    acc: &mut Accumulator<F>,
) {
    let i = outer.arity();
    if outer.is_empty() || total < i {
        return;
    }
    let index = FirstIndex::new(outer);
    let mut stack: Vec<&FamilyEntry<'_>> = Vec::with_capacity(i);
    let mut key: Vec<Gen> = Vec::with_capacity(total);
    for start in family.starts() {
        extend(
            &index, family, i, total, start, &mut stack, &mut key, scale, acc,
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<'f, F: Fn(u32, u32) -> usize>(
    index: &FirstIndex<'_>,
    family: &'f Family<'_>,
    blocks: usize,
    remaining: usize,
    start: u32,
    stack: &mut Vec<&'f FamilyEntry<'f>>,
    key: &mut Vec<Gen>,
    scale: &Scalar,
    acc: &mut Accumulator<F>,
) {
    let left = blocks - stack.len();
    if left == 0 {
        if remaining == 0 {
            let homs: SmallVec<[(u32, u32); 6]> = stack.iter().map(|e| e.out_hom).collect();
            if homs.windows(2).any(|w| w[0].1 != w[1].0) {
                return;
            }
            let inputs: SmallVec<[&[Scalar]; 6]> = stack.iter().map(|e| e.out.as_slice()).collect();
            let slot = acc.slot_mut(key);
            index.eval_into(&homs, &inputs, scale, slot);
        }
        return;
    }
    // each remaining block takes at least one input
    let max_k = (remaining + 1).saturating_sub(left).min(family.max_arity);
    for k in 1..=max_k {
        for e in family.entries(start, k) {
            stack.push(e);
            key.extend_from_slice(e.chain);
            let next = e.chain[e.chain.len() - 1].tgt;
            extend(
                index,
                family,
                blocks,
                remaining - k,
                next,
                stack,
                key,
                scale,
                acc,
            );
            key.truncate(key.len() - k);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize) -> Gen {
        Gen::new(0, 0, i)
    }

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn zero_input_gives_zero() {
        let mut m = MultilinearMap::new(2, 0);
        m.set(Chain::from_slice(&[g(0), g(0)]), SparseVec::unit(0))
            .unwrap();
        let e = HomVec::basis(0, 0, 1, 0);
        let z = HomVec::zero(0, 0, 1);
        assert!(eval_multilinear(&m, &[e, z], 1).unwrap().is_zero());
    }

    #[test]
    fn identity_table() {
        let mut m = MultilinearMap::new(1, 0);
        m.set(Chain::from_slice(&[g(0)]), SparseVec::unit(0))
            .unwrap();
        let e = HomVec::basis(0, 0, 1, 0);
        assert_eq!(eval_multilinear(&m, std::slice::from_ref(&e), 1).unwrap(), e);
    }

    #[test]
    fn bilinear_scaling() {
        // basis: e=0, f=1, g=2 in a single hom space
        let mut m = MultilinearMap::new(2, 0);
        m.set(
            Chain::from_slice(&[g(0), g(1)]),
            SparseVec::from_pairs([(2, q(2))]),
        )
        .unwrap();
        let mut a = HomVec::zero(0, 0, 3);
        a.coeffs[0] = q(3);
        let mut b = HomVec::zero(0, 0, 3);
        b.coeffs[1] = q(5);
        let out = eval_multilinear(&m, &[a, b], 3).unwrap();
        assert_eq!(out.coeffs, vec![q(0), q(0), q(30)]);
    }

    #[test]
    fn arity_and_composability_errors() {
        let m = MultilinearMap::new(2, 0);
        let a = HomVec::zero(0, 1, 1);
        assert!(matches!(
            eval_multilinear(&m, std::slice::from_ref(&a), 1),
            Err(Error::Arity { .. })
        ));
        assert!(matches!(
            eval_multilinear(&m, &[a.clone(), a], 1),
            Err(Error::Composability(_))
        ));
    }

    #[test]
    fn sparse_vec_merges_duplicates() {
        let v = SparseVec::from_pairs([(3, q(1)), (1, q(2)), (3, q(-1))]);
        assert_eq!(v, SparseVec::from_pairs([(1, q(2))]));
        assert_eq!(v.get(1), Some(&q(2)));
        assert_eq!(v.get(3), None);
    }
}
