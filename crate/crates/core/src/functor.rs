//! A∞-functors in suspended presentation: components `f_k` of degree zero.

use serde::{Deserialize, Serialize};

use crate::category::AInftyCategory;
use crate::cohomology::{differential, HodgeDecomposition};
use crate::error::{Error, Result};
use crate::graded::GradedMap;
use crate::linalg::Matrix;
use crate::multilinear::{
    insert_compose, substitute, Accumulator, Chain, Family, Gen, MultilinearMap, SparseVec,
};
use crate::relations::violation;
use crate::report::RelationReport;
use crate::scalar::Scalar;
use crate::sign::sign_suspended;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInftyFunctor {
    source: AInftyCategory,
    target: AInftyCategory,
    object_map: Vec<usize>,
    components: Vec<MultilinearMap>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    General,
    QuasiIsomorphism,
    Isomorphism,
}

impl AInftyFunctor {
    /// Both categories are stored suspended; `components[k-1]` is `f_k`,
    /// keyed by source chains with outputs in the target hom between the
    /// images of the chain's end objects.
    pub fn new(
        source: &AInftyCategory,
        target: &AInftyCategory,
        object_map: Vec<usize>,
        components: Vec<MultilinearMap>,
    ) -> Result<Self> {
        let source = source.to_suspended();
        let target = target.to_suspended();
        if object_map.len() != source.n_objects() {
            return Err(Error::Malformed(
                "object map does not cover the source objects".into(),
            ));
        }
        if let Some(&bad) = object_map.iter().find(|&&o| o >= target.n_objects()) {
            return Err(Error::UnknownObject(format!("target object index {bad}")));
        }
        if components.is_empty() {
            return Err(Error::Malformed(
                "a functor needs at least its linear component".into(),
            ));
        }
        let f = AInftyFunctor {
            source,
            target,
            object_map,
            components,
        };
        for (i, m) in f.components.iter().enumerate() {
            if m.arity() != i + 1 || m.degree() != 0 {
                return Err(Error::Malformed(format!(
                    "component {} has arity {} and degree {}",
                    i + 1,
                    m.arity(),
                    m.degree()
                )));
            }
            for (chain, out) in m.iter() {
                f.validate_entry(chain, out)?;
            }
        }
        Ok(f)
    }

    fn validate_entry(&self, chain: &[Gen], out: &SparseVec) -> Result<()> {
        let n = self.source.n_objects() as u32;
        let mut deg = 0;
        for g in chain {
            if g.src >= n || g.tgt >= n || g.idx as usize >= self.source.dim(g.src, g.tgt) {
                return Err(Error::Malformed(format!(
                    "component key {g:?} outside the source"
                )));
            }
            deg += self.source.degree(*g);
        }
        let (s, t) = self.image_hom(chain[0].src, chain[chain.len() - 1].tgt);
        let space = self.target.hom(s as usize, t as usize);
        for (i, _) in out.iter() {
            let i = *i as usize;
            if i >= space.total_dim() {
                return Err(Error::DegreeWindow(format!(
                    "output index {i} outside the target hom"
                )));
            }
            if space.degree_of(i) != deg {
                return Err(Error::DegreeWindow(format!(
                    "component output of degree {} on inputs of total degree {deg}",
                    space.degree_of(i)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(c: &AInftyCategory) -> Self {
        let s = c.to_suspended();
        let mut f1 = MultilinearMap::new(1, 0);
        for x in 0..s.n_objects() {
            for y in 0..s.n_objects() {
                for i in 0..s.dim(x as u32, y as u32) {
                    f1.set(Chain::from_slice(&[Gen::new(x, y, i)]), SparseVec::unit(i))
                        .expect("arity one");
                }
            }
        }
        let mut components = vec![f1];
        for k in 2..=s.arity_bound() {
            components.push(MultilinearMap::new(k, 0));
        }
        let map = (0..s.n_objects()).collect();
        AInftyFunctor::new(&s, &s, map, components).expect("identity is well formed")
    }

    pub fn source(&self) -> &AInftyCategory {
        &self.source
    }

    pub fn target(&self) -> &AInftyCategory {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn arity_bound(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultilinearMap] {
        &self.components
    }

    pub fn component(&self, k: usize) -> Option<&MultilinearMap> {
        (k >= 1 && k <= self.components.len()).then(|| &self.components[k - 1])
    }

    fn image_hom(&self, s: u32, t: u32) -> (u32, u32) {
        (
            self.object_map[s as usize] as u32,
            self.object_map[t as usize] as u32,
        )
    }

    /// Replaces one component after validation (used by mutation tests).
    pub fn with_component(mut self, k: usize, table: MultilinearMap) -> Result<Self> {
        if k == 0 || k > self.components.len() {
            return Err(Error::ArityBound {
                requested: k,
                allowed: self.components.len(),
            });
        }
        if table.arity() != k || table.degree() != 0 {
            return Err(Error::Malformed(
                "replacement component of the wrong type".into(),
            ));
        }
        for (chain, out) in table.iter() {
            self.validate_entry(chain, out)?;
        }
        self.components[k - 1] = table;
        Ok(self)
    }

    /// Same components with new (shape-identical) endpoint categories.
    pub fn retargeted(&self, source: &AInftyCategory, target: &AInftyCategory) -> Result<Self> {
        AInftyFunctor::new(
            source,
            target,
            self.object_map.clone(),
            self.components.clone(),
        )
    }

    /// `f₁` on one hom space as a degree-zero graded map.
    pub fn linear_part(&self, x: usize, y: usize) -> GradedMap {
        let (fx, fy) = (self.object_map[x], self.object_map[y]);
        let src = self.source.hom(x, y);
        let tgt = self.target.hom(fx, fy);
        let mut total = Matrix::zeros(tgt.total_dim(), src.total_dim());
        for (chain, out) in self.components[0].iter() {
            let g = chain[0];
            if (g.src as usize, g.tgt as usize) != (x, y) {
                continue;
            }
            for (i, v) in out.iter() {
                total[(*i as usize, g.idx as usize)] = v.clone();
            }
        }
        GradedMap::from_total(src, tgt, 0, &total).expect("validated components are homogeneous")
    }

    fn family(&self) -> Family<'_> {
        let tables: Vec<&MultilinearMap> = self.components.iter().collect();
        Family::new(
            &tables,
            |s, t| self.image_hom(s, t),
            |s, t| self.target.dim(s, t),
        )
    }

    /// Largest arity at which the truncated data still determine the
    /// relation.
    pub fn soundness_bound(&self) -> usize {
        let k = self
            .components
            .len()
            .min(self.source.arity_bound())
            .min(self.target.arity_bound());
        2 * k - 1
    }

    /// The arity-`n` functor relation residual, keyed by source chains.
    pub fn relation_residual(&self, n: usize) -> MultilinearMap {
        let dim = |s: u32, t: u32| {
            let (a, b) = self.image_hom(s, t);
            self.target.dim(a, b)
        };
        let mut acc = Accumulator::new(dim);
        for l in 1..=n {
            let k = n + 1 - l;
            let (Some(outer), Some(inner)) = (self.component(k), self.source.product(l)) else {
                continue;
            };
            let src = &self.source;
            insert_compose(
                outer,
                inner,
                |_, prefix| {
                    sign_suspended(&prefix.iter().map(|g| src.degree(*g)).collect::<Vec<_>>())
                },
                &mut acc,
            );
        }
        let family = self.family();
        let minus = Scalar::from_int(-1);
        for i in 1..=n {
            if let Some(b) = self.target.product(i) {
                substitute(b, &family, n, &minus, &mut acc);
            }
        }
        acc.into_map(n, 1)
    }

    /// The composite functor `G ∘ F` (apply `self` first).
    pub fn then(&self, g: &AInftyFunctor) -> Result<AInftyFunctor> {
        if self.target != g.source {
            return Err(Error::CategoryMismatch(
                "composing functors through different categories".into(),
            ));
        }
        let k_max = self.arity_bound().min(g.arity_bound());
        let family = self.family();
        let object_map: Vec<usize> = self.object_map.iter().map(|&o| g.object_map[o]).collect();
        let mut components = Vec::with_capacity(k_max);
        for n in 1..=k_max {
            let om = &object_map;
            let mut acc =
                Accumulator::new(|s, t| g.target.dim(om[s as usize] as u32, om[t as usize] as u32));
            for i in 1..=n {
                if let Some(gi) = g.component(i) {
                    substitute(gi, &family, n, &Scalar::one(), &mut acc);
                }
            }
            components.push(acc.into_map(n, 0));
        }
        AInftyFunctor::new(&self.source, &g.target, object_map, components)
    }
}

/// Checks the functor relation on every composable source chain of length
/// at most `n_max`.
pub fn check_functor(f: &AInftyFunctor, n_max: usize) -> Result<RelationReport> {
    if n_max == 0 {
        return Err(Error::Malformed("relation arity must be positive".into()));
    }
    let allowed = f.soundness_bound();
    if n_max > allowed {
        return Err(Error::ArityBound {
            requested: n_max,
            allowed,
        });
    }
    let mut report = RelationReport::new(n_max);
    for n in 1..=n_max {
        for (chain, v) in f.relation_residual(n).iter() {
            let mut viol = violation(&f.source, &f.target, "functor relation", chain, v);
            let (s, t) = f.image_hom(chain[0].src, chain[chain.len() - 1].tgt);
            let space = f.target.hom(s as usize, t as usize);
            viol.residual = v
                .iter()
                .map(|(i, x)| (space.label(*i as usize).to_string(), x.clone()))
                .collect();
            report.push(viol);
        }
    }
    Ok(report)
}

/// `G ∘ F`.
pub fn compose(f: &AInftyFunctor, g: &AInftyFunctor) -> Result<AInftyFunctor> {
    f.then(g)
}

fn bijective(map: &[usize], n_target: usize) -> bool {
    let mut seen = vec![false; n_target];
    map.len() == n_target && map.iter().all(|&o| !std::mem::replace(&mut seen[o], true))
}

fn invertible(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

pub fn classify(f: &AInftyFunctor) -> Result<Classification> {
    let n = f.source.n_objects();
    if !bijective(&f.object_map, f.target.n_objects()) {
        return Ok(Classification::General);
    }
    let pairs = || (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
    if pairs().all(|(x, y)| invertible(&f.linear_part(x, y).to_total())) {
        return Ok(Classification::Isomorphism);
    }
    for (x, y) in pairs() {
        let (fx, fy) = (f.object_map[x], f.object_map[y]);
        let hs = HodgeDecomposition::new(&differential(&f.source, x, y))?;
        let ht = HodgeDecomposition::new(&differential(&f.target, fx, fy))?;
        let induced = ht.pi.after(&f.linear_part(x, y))?.after(&hs.iota)?;
        if !invertible(&induced.to_total()) {
            return Ok(Classification::General);
        }
    }
    Ok(Classification::QuasiIsomorphism)
}
