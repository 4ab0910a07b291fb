//! Bounded complexes of finite-dimensional rational vector spaces and the
//! DG category they span.
//!
//! Morphisms compose diagrammatically: `compose(φ, ψ)` is "φ, then ψ", so
//! its matrix in degree `i` is `M(ψ^{i+r}) · M(φ^i)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::category::{AInftyCategory, Presentation};
use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::linalg::{Matrix, Vector};
use crate::multilinear::{Chain, Gen, SparseVec};
use crate::scalar::Scalar;

/// A bounded cochain complex `X^i` with differentials `d^i: X^i → X^{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    d_min: i32,
    dims: Vec<usize>,
    diffs: BTreeMap<i32, Matrix>,
}

impl Complex {
    /// `dims[k]` is the dimension in degree `d_min + k`; `diffs` may omit
    /// zero differentials.
    pub fn new(d_min: i32, dims: Vec<usize>, diffs: BTreeMap<i32, Matrix>) -> Result<Self> {
        let c = Complex { d_min, dims, diffs };
        for (&i, m) in &c.diffs {
            if m.shape() != (c.dim(i + 1), c.dim(i)) {
                return Err(Error::Dimension(format!(
                    "differential in degree {i} has shape {:?}, expected {:?}",
                    m.shape(),
                    (c.dim(i + 1), c.dim(i))
                )));
            }
        }
        for &i in c.diffs.keys() {
            if !c.d(i + 1).try_mul(&c.d(i))?.is_zero() {
                return Err(Error::RelationFailure(format!(
                    "d^{} d^{i} is not zero",
                    i + 1
                )));
            }
        }
        Ok(c)
    }

    pub fn zero_differential(d_min: i32, dims: Vec<usize>) -> Self {
        Complex {
            d_min,
            dims,
            diffs: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> (i32, i32) {
        (self.d_min, self.d_min + self.dims.len() as i32 - 1)
    }

    pub fn dim(&self, i: i32) -> usize {
        let k = i - self.d_min;
        if k < 0 || k as usize >= self.dims.len() {
            0
        } else {
            self.dims[k as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d^i`, zero where none is stored.
    pub fn d(&self, i: i32) -> Matrix {
        self.diffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(i + 1), self.dim(i)))
    }

    /// Nonzero differentials only.
    pub fn differentials(&self) -> BTreeMap<i32, Matrix> {
        self.diffs
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (*i, m.clone()))
            .collect()
    }

    /// Degrees with a nonzero term.
    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        let (lo, hi) = self.window();
        (lo..=hi).filter(|&i| self.dim(i) > 0)
    }

    /// `X[r]^i = X^{i+r}` with `d_{X[r]}^i = (-1)^r d^{i+r}`.
    pub fn shifted(&self, r: i32) -> Complex {
        let sign = Scalar::sign(r as i64);
        Complex {
            d_min: self.d_min - r,
            dims: self.dims.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, m)| (i - r, m.scaled(&sign)))
                .collect(),
        }
    }
}

/// A degree-`r` morphism of graded spaces `φ^i: X^i → Y^{i+r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGHom {
    pub degree: i32,
    /// `components[i]` has shape `dim Y^{i+r} × dim X^i`; absent means zero.
    pub components: BTreeMap<i32, Matrix>,
}

impl DGHom {
    pub fn zero(degree: i32) -> Self {
        DGHom {
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(x: &Complex) -> Self {
        DGHom {
            degree: 0,
            components: x
                .support()
                .map(|i| (i, Matrix::identity(x.dim(i))))
                .collect(),
        }
    }

    pub fn component(&self, x: &Complex, y: &Complex, i: i32) -> Matrix {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(y.dim(i + self.degree), x.dim(i)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Matrix::is_zero)
    }

    /// Drops zero components so structural equality is numeric equality.
    pub fn normalized(mut self) -> Self {
        self.components
            .retain(|_, m| !m.is_zero() && m.rows() > 0 && m.cols() > 0);
        self
    }

    pub fn scaled(&self, s: &Scalar) -> DGHom {
        DGHom {
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(i, m)| (*i, m.scaled(s)))
                .collect(),
        }
        .normalized()
    }

    pub fn try_add(&self, other: &DGHom) -> Result<DGHom> {
        if self.degree != other.degree {
            return Err(Error::Dimension(
                "adding morphisms of different degree".into(),
            ));
        }
        let mut out = self.components.clone();
        for (i, m) in &other.components {
            let e = match out.remove(i) {
                Some(a) => a.try_add(m)?,
                None => m.clone(),
            };
            out.insert(*i, e);
        }
        Ok(DGHom {
            degree: self.degree,
            components: out,
        }
        .normalized())
    }
}

/// `(dφ)^i = d_X^i φ^{i+1} − (−1)^r φ^i d_Y^{i+r}`, read diagrammatically.
pub fn differential(x: &Complex, y: &Complex, phi: &DGHom) -> Result<DGHom> {
    let r = phi.degree;
    let sign = Scalar::sign(r as i64);
    let mut components = BTreeMap::new();
    let (lo, hi) = x.window();
    for i in lo..=hi {
        if x.dim(i) == 0 || y.dim(i + r + 1) == 0 {
            continue;
        }
        let first = phi.component(x, y, i + 1).try_mul(&x.d(i))?;
        let second = y.d(i + r).try_mul(&phi.component(x, y, i))?;
        components.insert(i, first.try_sub(&second.scaled(&sign))?);
    }
    Ok(DGHom {
        degree: r + 1,
        components,
    }
    .normalized())
}

/// `φ` then `ψ`.
pub fn compose(x: &Complex, y: &Complex, z: &Complex, phi: &DGHom, psi: &DGHom) -> Result<DGHom> {
    let mut components = BTreeMap::new();
    for (&i, m) in &phi.components {
        let n = psi.component(y, z, i + phi.degree);
        components.insert(i, n.try_mul(m)?);
    }
    let _ = x;
    Ok(DGHom {
        degree: phi.degree + psi.degree,
        components,
    }
    .normalized())
}

/// Basis of `Hom^r(X, Y)`: the elementary matrices of every component,
/// ordered by `r`, then `i`, then target row, then source column.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub space: GradedVectorSpace,
    /// flat index → (r, i, row, col)
    pub elements: Vec<(i32, i32, usize, usize)>,
    index: BTreeMap<(i32, i32, usize, usize), usize>,
}

impl HomBasis {
    pub fn new(x: &Complex, y: &Complex) -> Result<Self> {
        let (xl, xh) = x.window();
        let (yl, yh) = y.window();
        let (rmin, rmax) = (yl - xh, yh - xl);
        let mut pieces = Vec::new();
        let mut elements = Vec::new();
        for r in rmin..=rmax {
            let mut labels = Vec::new();
            for i in xl..=xh {
                for a in 0..y.dim(i + r) {
                    for b in 0..x.dim(i) {
                        labels.push(format!("{i}.{b}>{}.{a}", i + r));
                        elements.push((r, i, a, b));
                    }
                }
            }
            pieces.push(labels);
        }
        let space = GradedVectorSpace::new(rmin, pieces)?;
        let index = elements.iter().enumerate().map(|(k, e)| (*e, k)).collect();
        Ok(HomBasis {
            space,
            elements,
            index,
        })
    }

    pub fn element(&self, k: usize) -> DGHom {
        let (r, i, a, b) = self.elements[k];
        let (rows, cols) = self.shape_of(r, i);
        let mut m = Matrix::zeros(rows, cols);
        m[(a, b)] = Scalar::one();
        DGHom {
            degree: r,
            components: BTreeMap::from([(i, m)]),
        }
    }

    fn shape_of(&self, r: i32, i: i32) -> (usize, usize) {
        let mut rows = 0;
        let mut cols = 0;
        for &(rr, ii, a, b) in &self.elements {
            if (rr, ii) == (r, i) {
                rows = rows.max(a + 1);
                cols = cols.max(b + 1);
            }
        }
        (rows, cols)
    }

    pub fn to_vector(&self, phi: &DGHom) -> Result<Vector> {
        let mut v = vec![Scalar::zero(); self.space.total_dim()];
        for (&i, m) in &phi.components {
            for a in 0..m.rows() {
                for b in 0..m.cols() {
                    if m[(a, b)].is_zero() {
                        continue;
                    }
                    let k = self.index.get(&(phi.degree, i, a, b)).ok_or_else(|| {
                        Error::DegreeWindow(format!(
                            "component ({i}, {a}, {b}) outside the hom space"
                        ))
                    })?;
                    v[*k] = m[(a, b)].clone();
                }
            }
        }
        Ok(v)
    }

    pub fn to_sparse(&self, phi: &DGHom) -> Result<SparseVec> {
        Ok(SparseVec::from_dense(&self.to_vector(phi)?))
    }

    /// The homogeneous morphism of degree `r` with the given coordinates.
    pub fn from_vector(&self, x: &Complex, y: &Complex, r: i32, v: &[Scalar]) -> Result<DGHom> {
        let mut components: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (rr, i, a, b) = self.elements[k];
            if rr != r {
                return Err(Error::DegreeWindow(format!(
                    "coordinate of degree {rr} in a degree {r} vector"
                )));
            }
            let m = components
                .entry(i)
                .or_insert_with(|| Matrix::zeros(y.dim(i + r), x.dim(i)));
            m[(a, b)] = c.clone();
        }
        Ok(DGHom {
            degree: r,
            components,
        }
        .normalized())
    }
}

/// The DG category on the given complexes in unsuspended presentation:
/// `m₁` is the hom differential, `m₂` diagrammatic composition, strict
/// units are the identity chain maps, and every higher table is empty.
pub fn build_dg_category(
    objects: &[(String, Complex)],
    arity_bound: usize,
) -> Result<AInftyCategory> {
    if arity_bound < 2 {
        return Err(Error::Malformed(
            "a DG category needs arity bound at least 2".into(),
        ));
    }
    let n = objects.len();
    let mut bases = Vec::with_capacity(n * n);
    for (_, x) in objects {
        for (_, y) in objects {
            bases.push(HomBasis::new(x, y)?);
        }
    }
    let names = objects.iter().map(|(s, _)| s.clone()).collect();
    let homs = bases.iter().map(|b| b.space.clone()).collect();
    let mut c =
        AInftyCategory::with_zero_products(names, homs, Presentation::Unsuspended, arity_bound)?;
    let cx = |i: usize| &objects[i].1;
    for x in 0..n {
        for y in 0..n {
            let bxy = &bases[x * n + y];
            for k in 0..bxy.space.total_dim() {
                let e = bxy.element(k);
                let de = differential(cx(x), cx(y), &e)?;
                if !de.is_zero() {
                    c.add_to_product(
                        1,
                        Chain::from_slice(&[Gen::new(x, y, k)]),
                        &bxy.to_sparse(&de)?,
                    )?;
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let bxy = &bases[x * n + y];
            for z in 0..n {
                let byz = &bases[y * n + z];
                let bxz = &bases[x * n + z];
                for k in 0..bxy.space.total_dim() {
                    let (_, i, a, _) = bxy.elements[k];
                    let r1 = bxy.elements[k].0;
                    let e = bxy.element(k);
                    for l in 0..byz.space.total_dim() {
                        let (_, j, _, col) = byz.elements[l];
                        // only matching middle indices compose to something nonzero
                        if j != i + r1 || col != a {
                            continue;
                        }
                        let f = byz.element(l);
                        let ef = compose(cx(x), cx(y), cx(z), &e, &f)?;
                        let chain = Chain::from_slice(&[Gen::new(x, y, k), Gen::new(y, z, l)]);
                        c.add_to_product(2, chain, &bxz.to_sparse(&ef)?)?;
                    }
                }
            }
        }
    }
    let units = (0..n)
        .map(|x| bases[x * n + x].to_sparse(&DGHom::identity(cx(x))))
        .collect::<Result<Vec<_>>>()?;
    c.with_units(Some(units))
}

/// The two identifications of a morphism `φ: X → Y` of degree `r` with
/// morphisms out of or into a shifted complex, and the sign each induces on
/// the differential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationReport {
    /// `d(μ)` equals `+d(φ)` under `μ^i = φ^i`, with `μ: X → Y[1]`.
    pub target_shift_sign_ok: bool,
    /// `d(ν)` equals `−d(φ)` under `ν^{i−1} = φ^i`, with `ν: X[1] → Y`.
    pub source_shift_sign_ok: bool,
    /// Composition is sign free under both identifications.
    pub composition_ok: bool,
}

impl IdentificationReport {
    pub fn all_ok(&self) -> bool {
        self.target_shift_sign_ok && self.source_shift_sign_ok && self.composition_ok
    }
}

/// Re-reads a morphism `X[s] → Y[t]` as a morphism `X → Y`: the component
/// at `i` of the former is the component at `i + s` of the latter.
pub fn unshift_morphism(phi: &DGHom, s: i32, t: i32) -> DGHom {
    DGHom {
        degree: phi.degree - s + t,
        components: phi
            .components
            .iter()
            .map(|(i, m)| (i + s, m.clone()))
            .collect(),
    }
}

/// Inverse of [`unshift_morphism`].
pub fn shift_morphism(phi: &DGHom, s: i32, t: i32) -> DGHom {
    DGHom {
        degree: phi.degree + s - t,
        components: phi
            .components
            .iter()
            .map(|(i, m)| (i - s, m.clone()))
            .collect(),
    }
}

/// Builds `μ: X → Y[1]` and `ν: X[1] → Y` from `φ` and verifies their
/// differentials and compositions against those of `φ`. `psi` is a test
/// morphism `Y → Z` used for the composition check.
pub fn shift_identifications(
    x: &Complex,
    y: &Complex,
    z: &Complex,
    phi: &DGHom,
    psi: &DGHom,
) -> Result<(DGHom, DGHom, IdentificationReport)> {
    let mu = shift_morphism(phi, 0, 1);
    let nu = shift_morphism(phi, 1, 0);
    let (x1, y1) = (x.shifted(1), y.shifted(1));
    let dphi = differential(x, y, phi)?;
    let dmu = unshift_morphism(&differential(x, &y1, &mu)?, 0, 1);
    let dnu = unshift_morphism(&differential(&x1, y, &nu)?, 1, 0);
    let target_shift_sign_ok = dmu == dphi;
    let source_shift_sign_ok = dnu == dphi.scaled(&Scalar::from_int(-1));
    // composition: μ then ψ[1] and ν then ψ agree with φ then ψ
    let direct = compose(x, y, z, phi, psi)?;
    let psi1 = shift_morphism(psi, 1, 1);
    let via_mu = unshift_morphism(&compose(x, &y1, &z.shifted(1), &mu, &psi1)?, 0, 1);
    let via_nu = unshift_morphism(&compose(&x1, y, z, &nu, psi)?, 1, 0);
    let composition_ok = via_mu == direct && via_nu == direct;
    Ok((
        mu,
        nu,
        IdentificationReport {
            target_shift_sign_ok,
            source_shift_sign_ok,
            composition_ok,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{check_relations, check_units};

    fn two_term() -> Complex {
        Complex::new(
            0,
            vec![1, 1],
            BTreeMap::from([(0, Matrix::from_ints(1, 1, &[1]))]),
        )
        .unwrap()
    }

    #[test]
    fn point_has_one_dimensional_endomorphisms() {
        let c =
            build_dg_category(&[("P".into(), Complex::zero_differential(0, vec![1]))], 3).unwrap();
        assert_eq!(c.hom(0, 0).total_dim(), 1);
        assert_eq!(c.hom(0, 0).dim(0), 1);
        assert!(c.product(1).unwrap().is_zero());
        assert!(c.is_dg());
    }

    #[test]
    fn dg_category_is_an_ainfty_category() {
        let z = Complex::new(
            -1,
            vec![1, 2, 1],
            BTreeMap::from([
                (-1, Matrix::from_ints(2, 1, &[1, 1])),
                (0, Matrix::from_ints(1, 2, &[1, -1])),
            ]),
        )
        .unwrap();
        let objs = vec![("X".to_string(), two_term()), ("Z".to_string(), z)];
        let c = build_dg_category(&objs, 3).unwrap();
        let report = check_relations(&c, 5).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert!(check_units(&c).passed());
        assert!(check_relations(&c.convert_presentation(), 5)
            .unwrap()
            .passed());
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let bad = Complex::new(
            0,
            vec![1, 1, 1],
            BTreeMap::from([
                (0, Matrix::from_ints(1, 1, &[1])),
                (1, Matrix::from_ints(1, 1, &[1])),
            ]),
        );
        assert!(matches!(bad, Err(Error::RelationFailure(_))));
    }

    #[test]
    fn shifting_up_twice_and_down_twice_is_identity() {
        let x = two_term();
        assert_eq!(x.shifted(1).shifted(1).shifted(-1).shifted(-1), x);
        assert_eq!(x.shifted(1).d(-1), Matrix::from_ints(1, 1, &[-1]));
    }

    #[test]
    fn identity_chain_map_identifications() {
        let x = two_term();
        let id = DGHom::identity(&x);
        assert!(differential(&x, &x, &id).unwrap().is_zero());
        let (mu, nu, rep) = shift_identifications(&x, &x, &x, &id, &id).unwrap();
        assert!(rep.all_ok());
        assert!(differential(&x, &x.shifted(1), &mu).unwrap().is_zero());
        assert!(differential(&x.shifted(1), &x, &nu).unwrap().is_zero());
    }
}
