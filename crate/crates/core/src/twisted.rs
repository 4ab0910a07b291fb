//! One-sided twisted complexes over an enlargement, evaluated lazily.
//!
//! A block of a morphism between sum objects is stored as a coordinate
//! vector of the underlying base hom; the enlarged grading and the product
//! signs are derived from the summand shifts on demand. Products above the
//! base arity bound are taken to be zero.

use std::collections::BTreeMap;

use crate::category::{AInftyCategory, Presentation};
use crate::cohomology::{cohomology, CohomologyCategory};
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::linalg::{is_zero_vector, zero_vector, LinearSolveSuite, Matrix, Vector};
use crate::multilinear::{Chain, Gen, HomVec, MultilinearMap, SparseVec};
use crate::report::{RelationReport, Violation};
use crate::scalar::Scalar;
use crate::shifts::{shifted_name, ShiftConvention, SumObject};

/// A block matrix of enlarged morphisms `source → target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwMorphism {
    pub source: SumObject,
    pub target: SumObject,
    /// `(source summand, target summand)` → base hom coordinates.
    pub blocks: BTreeMap<(usize, usize), Vector>,
}

impl TwMorphism {
    pub fn zero(source: &SumObject, target: &SumObject) -> Self {
        TwMorphism {
            source: source.clone(),
            target: target.clone(),
            blocks: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|v| is_zero_vector(v))
    }

    /// Drops zero blocks.
    pub fn normalized(mut self) -> Self {
        self.blocks.retain(|_, v| !is_zero_vector(v));
        self
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&Vector> {
        self.blocks.get(&(i, j))
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|x| x * s).collect()))
            .collect();
        TwMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn add_block(&mut self, i: usize, j: usize, v: &[Scalar]) {
        match self.blocks.get_mut(&(i, j)) {
            Some(w) => {
                for (a, b) in w.iter_mut().zip(v) {
                    *a += b;
                }
            }
            None => {
                self.blocks.insert((i, j), v.to_vec());
            }
        }
    }

    pub fn try_add(&self, other: &TwMorphism) -> Result<TwMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Composability(
                "adding morphisms between different objects".into(),
            ));
        }
        let mut out = self.clone();
        for ((i, j), v) in &other.blocks {
            out.add_block(*i, *j, v);
        }
        Ok(out.normalized())
    }

    /// Strictly upper triangular: every nonzero block goes to a later summand.
    pub fn is_strictly_upper(&self) -> bool {
        self.blocks
            .iter()
            .all(|((i, j), v)| i < j || is_zero_vector(v))
    }
}

/// `(𝒳, Φ)` with `Φ` strictly upper triangular of suspended degree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    pub name: String,
    pub object: SumObject,
    pub phi: TwMorphism,
}

impl TwistedComplex {
    /// `(𝒳, 0)`.
    pub fn untwisted(name: &str, object: SumObject) -> Self {
        let phi = TwMorphism::zero(&object, &object);
        TwistedComplex {
            name: name.to_string(),
            object,
            phi,
        }
    }

    pub fn len(&self) -> usize {
        self.object.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object.is_empty()
    }
}

/// Flat coordinates on the hom space between two sum objects.
#[derive(Clone, Debug)]
pub struct HomLayout {
    pub space: GradedVectorSpace,
    /// flat index → (source summand, target summand, base coordinate)
    pub entries: Vec<(usize, usize, usize)>,
    source: SumObject,
    target: SumObject,
    block_dims: BTreeMap<(usize, usize), usize>,
}

impl HomLayout {
    pub fn to_vector(&self, m: &TwMorphism) -> Result<Vector> {
        if m.source != self.source || m.target != self.target {
            return Err(Error::Composability(
                "morphism does not live in this hom space".into(),
            ));
        }
        let mut out = zero_vector(self.entries.len());
        for (flat, &(i, j, k)) in self.entries.iter().enumerate() {
            if let Some(v) = m.blocks.get(&(i, j)) {
                out[flat] = v[k].clone();
            }
        }
        Ok(out)
    }

    pub fn to_morphism(&self, v: &[Scalar]) -> TwMorphism {
        let mut m = TwMorphism::zero(&self.source, &self.target);
        for (flat, &(i, j, k)) in self.entries.iter().enumerate() {
            if v[flat].is_zero() {
                continue;
            }
            let block = m
                .blocks
                .entry((i, j))
                .or_insert_with(|| zero_vector(self.block_dims[&(i, j)]));
            block[k] = v[flat].clone();
        }
        m
    }

    pub fn basis(&self, flat: usize) -> TwMorphism {
        let mut v = zero_vector(self.entries.len());
        v[flat] = Scalar::one();
        self.to_morphism(&v)
    }
}

/// Result of checking that the two composites around a cone vanish in `H⁰`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleReport {
    pub cone: TwistedComplex,
    pub cone_mc: bool,
    pub inclusion_closed: bool,
    pub projection_closed: bool,
    /// `𝒳 → 𝒴 → C(φ)`.
    pub first_zero_class: bool,
    /// `𝒴 → C(φ) → T𝒳`.
    pub second_zero_class: bool,
    pub first_literally_zero: bool,
    pub second_literally_zero: bool,
    /// Preimages under `b₁^Tw` witnessing the two zero classes.
    pub first_homotopy: Option<TwMorphism>,
    pub second_homotopy: Option<TwMorphism>,
}

impl TriangleReport {
    pub fn ok(&self) -> bool {
        self.cone_mc
            && self.inclusion_closed
            && self.projection_closed
            && self.first_zero_class
            && self.second_zero_class
    }
}

/// Twisted complexes over the convention-`a` enlargement of a base category.
#[derive(Clone, Debug)]
pub struct Tw {
    base: AInftyCategory,
    convention: ShiftConvention,
}

impl Tw {
    pub fn new(c: &AInftyCategory, a: ShiftConvention) -> Self {
        Tw {
            base: c.to_suspended(),
            convention: a,
        }
    }

    /// The base category, suspended.
    pub fn base(&self) -> &AInftyCategory {
        &self.base
    }

    pub fn convention(&self) -> ShiftConvention {
        self.convention
    }

    pub fn resolve(&self, x: &SumObject) -> Result<Vec<(usize, i32)>> {
        if x.is_empty() {
            return Err(Error::Malformed("empty sum object".into()));
        }
        x.summands
            .iter()
            .map(|(name, r)| {
                self.base
                    .object_index(name)
                    .map(|i| (i, *r))
                    .ok_or_else(|| Error::UnknownObject(name.clone()))
            })
            .collect()
    }

    /// The enlarged hom `C̃(X[r₁], Y[r₂])`: the base hom regraded by `r₁ − r₂`.
    pub fn block_space(&self, x: (usize, i32), y: (usize, i32)) -> GradedVectorSpace {
        self.base.hom(x.0, y.0).shifted(x.1 - y.1)
    }

    pub fn hom_layout(&self, x: &SumObject, y: &SumObject) -> Result<HomLayout> {
        let (xs, ys) = (self.resolve(x)?, self.resolve(y)?);
        let mut by_degree: BTreeMap<i32, Vec<(String, (usize, usize, usize))>> = BTreeMap::new();
        let mut block_dims = BTreeMap::new();
        for (i, &xi) in xs.iter().enumerate() {
            for (j, &yj) in ys.iter().enumerate() {
                let space = self.block_space(xi, yj);
                block_dims.insert((i, j), space.total_dim());
                for k in 0..space.total_dim() {
                    let label = format!("{i}>{j}:{}", space.label(k));
                    by_degree
                        .entry(space.degree_of(k))
                        .or_default()
                        .push((label, (i, j, k)));
                }
            }
        }
        let labels: BTreeMap<i32, Vec<String>> = by_degree
            .iter()
            .map(|(d, v)| (*d, v.iter().map(|(l, _)| l.clone()).collect()))
            .collect();
        let space = GradedVectorSpace::from_map(&labels)?;
        let entries = by_degree
            .into_values()
            .flat_map(|v| v.into_iter().map(|(_, e)| e))
            .collect();
        Ok(HomLayout {
            space,
            entries,
            source: x.clone(),
            target: y.clone(),
            block_dims,
        })
    }

    /// Suspended degree of a morphism: `Ok(None)` for zero, an error when
    /// the blocks are of mixed degrees.
    pub fn degree(&self, m: &TwMorphism) -> Result<Option<i32>> {
        let (xs, ys) = (self.resolve(&m.source)?, self.resolve(&m.target)?);
        let mut deg = None;
        for ((i, j), v) in &m.blocks {
            let (xi, yj) = (
                *xs.get(*i).ok_or_else(|| bad_block(*i, *j))?,
                *ys.get(*j).ok_or_else(|| bad_block(*i, *j))?,
            );
            let space = self.block_space(xi, yj);
            if v.len() != space.total_dim() {
                return Err(Error::Dimension(format!(
                    "block ({i}, {j}) has length {}",
                    v.len()
                )));
            }
            match space.homogeneous_degree(v) {
                None => {
                    return Err(Error::DegreeWindow(format!(
                        "block ({i}, {j}) is not homogeneous"
                    )))
                }
                Some(None) => {}
                Some(Some(d)) => match deg {
                    None => deg = Some(d),
                    Some(e) if e == d => {}
                    Some(e) => {
                        return Err(Error::DegreeWindow(format!(
                            "blocks of degrees {e} and {d} in one morphism"
                        )))
                    }
                },
            }
        }
        Ok(deg)
    }

    /// The enlarged product `b̃_k`, summed over block chains.
    pub fn product(&self, inputs: &[&TwMorphism]) -> Result<TwMorphism> {
        let k = inputs.len();
        if k == 0 {
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        }
        for w in inputs.windows(2) {
            if w[0].target != w[1].source {
                return Err(Error::Composability(format!(
                    "{} does not match {}",
                    w[0].target, w[1].source
                )));
            }
        }
        let objects: Vec<Vec<(usize, i32)>> = inputs
            .iter()
            .map(|m| self.resolve(&m.source))
            .chain(std::iter::once(self.resolve(&inputs[k - 1].target)))
            .collect::<Result<_>>()?;
        let mut out = TwMorphism::zero(&inputs[0].source, &inputs[k - 1].target);
        if k > self.base.arity_bound() {
            return Ok(out);
        }
        // depth-first over block chains i₀ → i₁ → ⋯ → i_k
        let mut stack: Vec<(Vec<usize>, Vec<&Vector>)> = Vec::new();
        for ((i, j), v) in &inputs[0].blocks {
            if !is_zero_vector(v) {
                stack.push((vec![*i, *j], vec![v]));
            }
        }
        while let Some((path, vecs)) = stack.pop() {
            let t = vecs.len();
            if t == k {
                let homs: Vec<HomVec> = (0..k)
                    .map(|s| HomVec {
                        src: objects[s][path[s]].0 as u32,
                        tgt: objects[s + 1][path[s + 1]].0 as u32,
                        coeffs: vecs[s].clone(),
                    })
                    .collect();
                let value = self.base.eval(k, &homs)?;
                if value.is_zero() {
                    continue;
                }
                let shifts: Vec<i32> = (0..k).map(|s| objects[s][path[s]].1).collect();
                let sign = self.convention.product_sign(&shifts);
                let signed: Vector = value.coeffs.iter().map(|x| sign.apply(x)).collect();
                out.add_block(path[0], path[k], &signed);
                continue;
            }
            let last = path[t];
            for ((i, j), v) in inputs[t].blocks.range((last, 0)..(last + 1, 0)) {
                debug_assert_eq!(*i, last);
                if is_zero_vector(v) {
                    continue;
                }
                let mut p = path.clone();
                p.push(*j);
                let mut vs = vecs.clone();
                vs.push(v);
                stack.push((p, vs));
            }
        }
        Ok(out.normalized())
    }

    fn check_twisted(&self, t: &TwistedComplex) -> Result<()> {
        if t.phi.source != t.object || t.phi.target != t.object {
            return Err(Error::NotTwisted(format!(
                "Φ of {} is not an endomorphism of its object",
                t.name
            )));
        }
        if !t.phi.is_strictly_upper() {
            return Err(Error::NotTwisted(format!(
                "Φ of {} is not strictly upper triangular",
                t.name
            )));
        }
        match self.degree(&t.phi)? {
            None | Some(0) => Ok(()),
            Some(d) => Err(Error::NotTwisted(format!(
                "Φ of {} has suspended degree {d}",
                t.name
            ))),
        }
    }

    /// `Σ_k b̃_k(Φ, …, Φ)`; finite by triangularity.
    pub fn mc_sum(&self, t: &TwistedComplex) -> Result<TwMorphism> {
        self.check_twisted(t)?;
        let mut total = TwMorphism::zero(&t.object, &t.object);
        let top = t.len().saturating_sub(1).min(self.base.arity_bound());
        for k in 1..=top {
            let inputs = vec![&t.phi; k];
            total = total.try_add(&self.product(&inputs)?)?;
        }
        Ok(total)
    }

    /// The Maurer–Cartan equation, block by block.
    pub fn check_mc(&self, t: &TwistedComplex) -> Result<RelationReport> {
        let residual = self.mc_sum(t)?;
        let mut report = RelationReport::new(t.len().saturating_sub(1));
        let xs = self.resolve(&t.object)?;
        for ((i, j), v) in &residual.blocks {
            let space = self.block_space(xs[*i], xs[*j]);
            report.push(Violation {
                relation: "maurer-cartan".into(),
                arity: 0,
                objects: vec![summand_name(&t.object, *i), summand_name(&t.object, *j)],
                inputs: vec![],
                residual: v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (space.label(k).to_string(), x.clone()))
                    .collect(),
            });
        }
        Ok(report)
    }

    /// `b^Tw_n`: every way of inserting the objects' `Φ`s around the inputs.
    pub fn tw_product(
        &self,
        objects: &[&TwistedComplex],
        inputs: &[&TwMorphism],
    ) -> Result<TwMorphism> {
        let n = inputs.len();
        if n == 0 || objects.len() != n + 1 {
            return Err(Error::Arity {
                expected: n + 1,
                got: objects.len(),
            });
        }
        for (t, m) in inputs.iter().enumerate() {
            if m.source != objects[t].object || m.target != objects[t + 1].object {
                return Err(Error::Composability(format!(
                    "input {t} does not run from {} to {}",
                    objects[t].name,
                    objects[t + 1].name
                )));
            }
        }
        for o in objects {
            self.check_twisted(o)?;
        }
        let bound = self.base.arity_bound();
        let caps: Vec<usize> = objects
            .iter()
            .map(|o| if o.phi.is_zero() { 0 } else { o.len() - 1 })
            .collect();
        let mut total = TwMorphism::zero(&objects[0].object, &objects[n].object);
        let mut counts = vec![0usize; n + 1];
        loop {
            let arity = n + counts.iter().sum::<usize>();
            if arity <= bound {
                let mut seq: Vec<&TwMorphism> = Vec::with_capacity(arity);
                for t in 0..=n {
                    seq.extend(std::iter::repeat_n(&objects[t].phi, counts[t]));
                    if t < n {
                        seq.push(inputs[t]);
                    }
                }
                total = total.try_add(&self.product(&seq)?)?;
            }
            // odometer over insertion counts
            let mut pos = 0;
            loop {
                if pos > n {
                    return Ok(total);
                }
                if counts[pos] < caps[pos] {
                    counts[pos] += 1;
                    break;
                }
                counts[pos] = 0;
                pos += 1;
            }
        }
    }

    /// `b₁^Tw` on the hom space between two twisted complexes.
    pub fn differential(
        &self,
        x: &TwistedComplex,
        y: &TwistedComplex,
    ) -> Result<(HomLayout, GradedMap)> {
        let layout = self.hom_layout(&x.object, &y.object)?;
        let n = layout.entries.len();
        let mut total = Matrix::zeros(n, n);
        for c in 0..n {
            let image = self.tw_product(&[x, y], &[&layout.basis(c)])?;
            let v = layout.to_vector(&image)?;
            for (r, e) in v.into_iter().enumerate() {
                total[(r, c)] = e;
            }
        }
        let d = GradedMap::from_total(&layout.space, &layout.space, 1, &total)?;
        Ok((layout, d))
    }

    /// A basis of the closed morphisms `x → y` of suspended degree `degree`.
    pub fn cocycles(
        &self,
        x: &TwistedComplex,
        y: &TwistedComplex,
        degree: i32,
    ) -> Result<Vec<TwMorphism>> {
        let (layout, d) = self.differential(x, y)?;
        let range = layout.space.range(degree);
        let Some(block) = d.block(degree) else {
            return Ok(Vec::new());
        };
        Ok(block
            .nullspace()
            .into_iter()
            .map(|v| {
                let mut flat = zero_vector(layout.space.total_dim());
                for (k, c) in range.clone().zip(v) {
                    flat[k] = c;
                }
                layout.to_morphism(&flat).normalized()
            })
            .collect())
    }

    pub fn shift_object(&self, x: &SumObject) -> SumObject {
        x.shifted(1)
    }

    /// `T(α′) = −α″` for convention 1 and `+α″` for convention 2.
    pub fn shift_morphism(&self, m: &TwMorphism) -> TwMorphism {
        let sign = self.t_sign();
        let blocks = m
            .blocks
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|x| sign.apply(x)).collect()))
            .collect();
        TwMorphism {
            source: m.source.shifted(1),
            target: m.target.shifted(1),
            blocks,
        }
    }

    /// `T(𝒳, Φ) = (T𝒳, −T(Φ))`.
    pub fn shift_complex(&self, t: &TwistedComplex) -> TwistedComplex {
        TwistedComplex {
            name: format!("T({})", t.name),
            object: self.shift_object(&t.object),
            phi: self.shift_morphism(&t.phi).scaled(&Scalar::from_int(-1)),
        }
    }

    fn t_sign(&self) -> crate::sign::Sign {
        match self.convention {
            ShiftConvention::One => crate::sign::Sign::Minus,
            ShiftConvention::Two => crate::sign::Sign::Plus,
        }
    }

    /// Whether `T b̃_k(α₁, …, α_k) = (−1)^k b̃_k(Tα₁, …, Tα_k)` on this chain.
    pub fn check_shift_compatibility(&self, chain: &[&TwMorphism]) -> Result<bool> {
        let lhs = self.shift_morphism(&self.product(chain)?);
        let shifted: Vec<TwMorphism> = chain.iter().map(|m| self.shift_morphism(m)).collect();
        let refs: Vec<&TwMorphism> = shifted.iter().collect();
        let rhs = self
            .product(&refs)?
            .scaled(&crate::sign::Sign::from_parity(chain.len() as i64).scalar());
        Ok(lhs.normalized() == rhs.normalized())
    }

    /// The same identity for `b^Tw_n` over twisted complexes and their shifts.
    pub fn check_tw_shift_compatibility(
        &self,
        objects: &[&TwistedComplex],
        inputs: &[&TwMorphism],
    ) -> Result<bool> {
        let lhs = self.shift_morphism(&self.tw_product(objects, inputs)?);
        let t_objects: Vec<TwistedComplex> =
            objects.iter().map(|o| self.shift_complex(o)).collect();
        let t_obj_refs: Vec<&TwistedComplex> = t_objects.iter().collect();
        let t_inputs: Vec<TwMorphism> = inputs.iter().map(|m| self.shift_morphism(m)).collect();
        let t_in_refs: Vec<&TwMorphism> = t_inputs.iter().collect();
        let rhs = self
            .tw_product(&t_obj_refs, &t_in_refs)?
            .scaled(&crate::sign::Sign::from_parity(inputs.len() as i64).scalar());
        Ok(lhs.normalized() == rhs.normalized())
    }

    /// Unit of `X_i[r_i]` in the enlargement.
    fn unit_block(&self, x: (usize, i32)) -> Result<Vector> {
        let units = self
            .base
            .units()
            .ok_or_else(|| Error::Malformed("the base category has no strict units".into()))?;
        let u = units[x.0].to_dense(self.base.dim(x.0 as u32, x.0 as u32));
        let s = self.convention.unit_sign(x.1);
        Ok(u.iter().map(|c| s.apply(c)).collect())
    }

    /// Identity blocks from the summands of `x` onto the summands of `y`
    /// starting at `offset`.
    fn embedding(
        &self,
        x: &SumObject,
        y: &SumObject,
        offset: usize,
        into: bool,
    ) -> Result<TwMorphism> {
        let xs = self.resolve(x)?;
        let (src, tgt) = if into { (x, y) } else { (y, x) };
        let mut m = TwMorphism::zero(src, tgt);
        for (i, &xi) in xs.iter().enumerate() {
            let u = self.unit_block(xi)?;
            if into {
                m.blocks.insert((i, offset + i), u);
            } else {
                m.blocks.insert((offset + i, i), u);
            }
        }
        Ok(m)
    }

    /// Identity of a twisted complex (diagonal units).
    pub fn identity(&self, t: &TwistedComplex) -> Result<TwMorphism> {
        self.embedding(&t.object, &t.object, 0, true)
    }

    /// `C(φ) = (T𝒳 ⊕ 𝒴, [[−TΦ_𝒳, φ′], [0, Φ_𝒴]])` for a closed `φ` of
    /// unsuspended degree zero (suspended degree −1). `φ′` carries the
    /// coefficients of `φ` on the shifted source with the sign of `T`.
    pub fn mapping_cone(
        &self,
        x: &TwistedComplex,
        y: &TwistedComplex,
        phi: &TwMorphism,
    ) -> Result<TwistedComplex> {
        if phi.source != x.object || phi.target != y.object {
            return Err(Error::Composability(format!(
                "φ does not run from {} to {}",
                x.name, y.name
            )));
        }
        match self.degree(phi)? {
            None | Some(-1) => {}
            Some(d) => {
                return Err(Error::DegreeWindow(format!(
                    "a cone needs a morphism of unsuspended degree 0, got {}",
                    d + 1
                )))
            }
        }
        if !self.tw_product(&[x, y], &[phi])?.is_zero() {
            return Err(Error::RelationFailure("φ is not closed".into()));
        }
        let tx = self.shift_complex(x);
        let object = tx.object.concat(&y.object);
        let nx = x.len();
        let mut cone_phi = TwMorphism::zero(&object, &object);
        for ((i, j), v) in &tx.phi.blocks {
            cone_phi.blocks.insert((*i, *j), v.clone());
        }
        let sign = self.t_sign();
        for ((i, j), v) in &phi.blocks {
            cone_phi
                .blocks
                .insert((*i, nx + j), v.iter().map(|c| sign.apply(c)).collect());
        }
        for ((i, j), v) in &y.phi.blocks {
            cone_phi.blocks.insert((nx + i, nx + j), v.clone());
        }
        Ok(TwistedComplex {
            name: format!("C({} -> {})", x.name, y.name),
            object,
            phi: cone_phi.normalized(),
        })
    }

    /// Canonical inclusion `𝒴 → C(φ)`.
    pub fn cone_inclusion(
        &self,
        x: &TwistedComplex,
        y: &TwistedComplex,
        cone: &TwistedComplex,
    ) -> Result<TwMorphism> {
        self.embedding(&y.object, &cone.object, x.len(), true)
    }

    /// Canonical projection `C(φ) → T𝒳`.
    pub fn cone_projection(&self, x: &TwistedComplex, cone: &TwistedComplex) -> Result<TwMorphism> {
        self.embedding(&self.shift_object(&x.object), &cone.object, 0, false)
    }

    /// A preimage of `target` under `b₁^Tw`, of suspended degree one lower.
    pub fn homotopy(
        &self,
        x: &TwistedComplex,
        y: &TwistedComplex,
        target: &TwMorphism,
    ) -> Result<Option<TwMorphism>> {
        let (layout, d) = self.differential(x, y)?;
        let rhs = layout.to_vector(target)?;
        let suite = LinearSolveSuite::new(&d.to_total());
        Ok(suite
            .preimage(&rhs)?
            .map(|v| layout.to_morphism(&v).normalized()))
    }

    /// Cone MC, closedness of the canonical maps, and vanishing in `H⁰` of
    /// both composites around the triangle.
    pub fn triangle_check(
        &self,
        x: &TwistedComplex,
        y: &TwistedComplex,
        phi: &TwMorphism,
    ) -> Result<TriangleReport> {
        let cone = self.mapping_cone(x, y, phi)?;
        let tx = self.shift_complex(x);
        let incl = self.cone_inclusion(x, y, &cone)?;
        let proj = self.cone_projection(x, &cone)?;
        let cone_mc = self.check_mc(&cone)?.passed();
        let inclusion_closed = self.tw_product(&[y, &cone], &[&incl])?.is_zero();
        let projection_closed = self.tw_product(&[&cone, &tx], &[&proj])?.is_zero();
        let first = self.tw_product(&[x, y, &cone], &[phi, &incl])?;
        let second = self.tw_product(&[y, &cone, &tx], &[&incl, &proj])?;
        let first_homotopy = self.homotopy(x, &cone, &first)?;
        let second_homotopy = self.homotopy(y, &tx, &second)?;
        Ok(TriangleReport {
            cone_mc,
            inclusion_closed,
            projection_closed,
            first_zero_class: first_homotopy.is_some(),
            second_zero_class: second_homotopy.is_some(),
            first_literally_zero: first.is_zero(),
            second_literally_zero: second.is_zero(),
            first_homotopy,
            second_homotopy,
            cone,
        })
    }

    /// `Tw` materialized on the given twisted complexes up to `arity`
    /// (suspended), with diagonal units when the base has them.
    pub fn materialize(&self, objects: &[TwistedComplex], arity: usize) -> Result<AInftyCategory> {
        for o in objects {
            if !self.check_mc(o)?.passed() {
                return Err(Error::NotTwisted(format!(
                    "{} does not solve the Maurer–Cartan equation",
                    o.name
                )));
            }
        }
        let n = objects.len();
        let mut layouts = Vec::with_capacity(n * n);
        for x in objects {
            for y in objects {
                layouts.push(self.hom_layout(&x.object, &y.object)?);
            }
        }
        let names = distinct_names(objects);
        let homs: Vec<GradedVectorSpace> = layouts.iter().map(|l| l.space.clone()).collect();
        let mut products = Vec::with_capacity(arity);
        for k in 1..=arity {
            let mut table = MultilinearMap::new(k, 1);
            let mut chains: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
            for _ in 0..k {
                chains = chains
                    .into_iter()
                    .flat_map(|c| (0..n).map(move |y| [c.clone(), vec![y]].concat()))
                    .collect();
            }
            for objs in chains {
                let dims: Vec<usize> = (0..k)
                    .map(|t| layouts[objs[t] * n + objs[t + 1]].entries.len())
                    .collect();
                if dims.contains(&0) {
                    continue;
                }
                let out_layout = &layouts[objs[0] * n + objs[k]];
                let tw_objs: Vec<&TwistedComplex> = objs.iter().map(|&o| &objects[o]).collect();
                let mut idx = vec![0usize; k];
                'chains: loop {
                    let inputs: Vec<TwMorphism> = (0..k)
                        .map(|t| layouts[objs[t] * n + objs[t + 1]].basis(idx[t]))
                        .collect();
                    let refs: Vec<&TwMorphism> = inputs.iter().collect();
                    let value = self.tw_product(&tw_objs, &refs)?;
                    if !value.is_zero() {
                        let key: Chain = (0..k)
                            .map(|t| Gen::new(objs[t], objs[t + 1], idx[t]))
                            .collect();
                        table.set(key, SparseVec::from_dense(&out_layout.to_vector(&value)?))?;
                    }
                    let mut pos = k;
                    loop {
                        if pos == 0 {
                            break 'chains;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < dims[pos] {
                            break;
                        }
                        idx[pos] = 0;
                    }
                }
            }
            products.push(table);
        }
        let units = match self.base.units() {
            Some(_) => Some(
                objects
                    .iter()
                    .enumerate()
                    .map(|(x, o)| {
                        let id = self.identity(o)?;
                        Ok(SparseVec::from_dense(&layouts[x * n + x].to_vector(&id)?))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        AInftyCategory::new(names, homs, Presentation::Suspended, arity, products, units)
    }

    /// `H⁰` of `Tw` on the given objects with the induced composition.
    pub fn h0_category(&self, objects: &[TwistedComplex]) -> Result<CohomologyCategory> {
        cohomology(&self.materialize(objects, 2)?, true)
    }
}

fn bad_block(i: usize, j: usize) -> Error {
    Error::Dimension(format!("block ({i}, {j}) outside the sum objects"))
}

fn summand_name(x: &SumObject, i: usize) -> String {
    let (name, r) = &x.summands[i];
    shifted_name(name, *r)
}

/// Object names with repeats disambiguated by position.
fn distinct_names(objects: &[TwistedComplex]) -> Vec<String> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for o in objects {
        *seen.entry(o.name.as_str()).or_default() += 1;
    }
    objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            if seen[o.name.as_str()] > 1 {
                format!("{}#{i}", o.name)
            } else {
                o.name.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{build_dg_category, Complex, DGHom, HomBasis};
    use crate::relations::check_relations;

    fn two_term() -> Complex {
        Complex::new(
            0,
            vec![1, 1],
            BTreeMap::from([(0, Matrix::from_ints(1, 1, &[1]))]),
        )
        .unwrap()
    }

    fn point() -> Complex {
        Complex::zero_differential(0, vec![1])
    }

    fn category() -> AInftyCategory {
        build_dg_category(&[("X".into(), two_term()), ("P".into(), point())], 5).unwrap()
    }

    /// The DG identity of `x` as a suspended degree −1 block.
    fn id_block(c: &AInftyCategory, x: usize) -> Vector {
        c.units().unwrap()[x].to_dense(c.dim(x as u32, x as u32))
    }

    #[test]
    fn zero_phi_is_mc() {
        let tw = Tw::new(&category(), ShiftConvention::One);
        let t = TwistedComplex::untwisted(
            "A",
            SumObject::new(vec![("X".into(), 0), ("P".into(), 1)]).unwrap(),
        );
        assert!(tw.check_mc(&t).unwrap().passed());
    }

    #[test]
    fn lower_triangular_phi_is_rejected() {
        let tw = Tw::new(&category(), ShiftConvention::Two);
        let obj = SumObject::new(vec![("P".into(), 0), ("P".into(), 0)]).unwrap();
        let mut t = TwistedComplex::untwisted("A", obj);
        t.phi.blocks.insert((1, 0), vec![Scalar::one()]);
        assert!(matches!(tw.check_mc(&t), Err(Error::NotTwisted(_))));
    }

    #[test]
    fn cone_of_identity_is_mc_and_contractible() {
        let c = category();
        for a in [ShiftConvention::One, ShiftConvention::Two] {
            let tw = Tw::new(&c, a);
            let x = TwistedComplex::untwisted("X", SumObject::single("X", 0));
            let id = TwMorphism {
                source: x.object.clone(),
                target: x.object.clone(),
                blocks: BTreeMap::from([((0, 0), id_block(tw.base(), 0))]),
            };
            let report = tw.triangle_check(&x, &x, &id).unwrap();
            assert!(report.ok(), "convention {a}");
            let h0 = tw.h0_category(std::slice::from_ref(&report.cone)).unwrap();
            assert_eq!(h0.space(0, 0).total_dim(), 0);
        }
    }

    #[test]
    fn non_closed_phi_breaks_mc() {
        let c = category();
        let tw = Tw::new(&c, ShiftConvention::One);
        // degree-0 suspended blocks X → X[−1] are degree-0 DG maps
        let obj = SumObject::new(vec![("X".into(), 0), ("X".into(), -1)]).unwrap();
        let layout = tw.hom_layout(&obj, &obj).unwrap();
        let mut found = false;
        for k in 0..layout.entries.len() {
            let (i, j, _) = layout.entries[k];
            if i < j && layout.space.degree_of(k) == 0 {
                let t = TwistedComplex {
                    name: "A".into(),
                    object: obj.clone(),
                    phi: layout.basis(k),
                };
                if !tw.check_mc(&t).unwrap().passed() {
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn materialized_tw_satisfies_relations() {
        let c = category();
        let tw = Tw::new(&c, ShiftConvention::Two);
        let x = TwistedComplex::untwisted("X", SumObject::single("X", 0));
        let p = TwistedComplex::untwisted("P", SumObject::single("P", 1));
        let t = tw.materialize(&[x, p], 2).unwrap();
        assert!(check_relations(&t, 3).unwrap().passed());
        let _ = (
            DGHom::zero(0),
            HomBasis::new(&two_term(), &point()).unwrap(),
        );
    }
}
