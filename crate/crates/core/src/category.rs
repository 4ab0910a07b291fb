//! Finite A∞-categories with explicit bases, in either presentation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::multilinear::{eval_multilinear, Chain, Gen, HomVec, MultilinearMap, SparseVec};
use crate::sign::suspension_sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Presentation {
    /// Products `b_k` of degree one on the suspended homs.
    Suspended,
    /// Products `m_k` of degree `2 - k`.
    Unsuspended,
}

impl Presentation {
    pub fn product_degree(self, k: usize) -> i32 {
        match self {
            Presentation::Suspended => 1,
            Presentation::Unsuspended => 2 - k as i32,
        }
    }

    /// Degree of a strict unit in this presentation.
    pub fn unit_degree(self) -> i32 {
        match self {
            Presentation::Suspended => -1,
            Presentation::Unsuspended => 0,
        }
    }

    pub fn toggled(self) -> Self {
        match self {
            Presentation::Suspended => Presentation::Unsuspended,
            Presentation::Unsuspended => Presentation::Suspended,
        }
    }
}

/// An A∞-category truncated at arity `K`: products of arity above `K` are
/// part of the data contract and asserted to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInftyCategory {
    objects: Vec<String>,
    homs: Vec<GradedVectorSpace>,
    presentation: Presentation,
    arity_bound: usize,
    products: Vec<MultilinearMap>,
    units: Option<Vec<SparseVec>>,
}

impl AInftyCategory {
    /// A category with the given homs and all products zero. `homs` is the
    /// row-major `objects × objects` table of hom spaces.
    pub fn with_zero_products(
        objects: Vec<String>,
        homs: Vec<GradedVectorSpace>,
        presentation: Presentation,
        arity_bound: usize,
    ) -> Result<Self> {
        let products = (1..=arity_bound)
            .map(|k| MultilinearMap::new(k, presentation.product_degree(k)))
            .collect();
        Self::new(objects, homs, presentation, arity_bound, products, None)
    }

    pub fn new(
        objects: Vec<String>,
        homs: Vec<GradedVectorSpace>,
        presentation: Presentation,
        arity_bound: usize,
        products: Vec<MultilinearMap>,
        units: Option<Vec<SparseVec>>,
    ) -> Result<Self> {
        if arity_bound == 0 {
            return Err(Error::Malformed("arity bound must be positive".into()));
        }
        let n = objects.len();
        if homs.len() != n * n {
            return Err(Error::Malformed(format!(
                "{} hom spaces for {n} objects",
                homs.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for o in &objects {
            if !seen.insert(o) {
                return Err(Error::Malformed(format!("duplicate object {o:?}")));
            }
        }
        if products.len() != arity_bound {
            return Err(Error::Malformed(format!(
                "{} product tables for arity bound {arity_bound}",
                products.len()
            )));
        }
        let c = AInftyCategory {
            objects,
            homs,
            presentation,
            arity_bound,
            products,
            units,
        };
        for (i, m) in c.products.iter().enumerate() {
            c.validate_table(i + 1, m)?;
        }
        if let Some(units) = &c.units {
            if units.len() != n {
                return Err(Error::Malformed("one unit per object required".into()));
            }
            for (x, u) in units.iter().enumerate() {
                c.validate_vector(x, x, u, Some(presentation.unit_degree()))?;
            }
        }
        Ok(c)
    }

    fn validate_vector(
        &self,
        src: usize,
        tgt: usize,
        v: &SparseVec,
        degree: Option<i32>,
    ) -> Result<()> {
        let space = self.hom(src, tgt);
        for (i, _) in v.iter() {
            let i = *i as usize;
            if i >= space.total_dim() {
                return Err(Error::DegreeWindow(format!(
                    "basis index {i} outside hom({}, {}) of dimension {}",
                    self.objects[src],
                    self.objects[tgt],
                    space.total_dim()
                )));
            }
            if let Some(d) = degree {
                if space.degree_of(i) != d {
                    return Err(Error::DegreeWindow(format!(
                        "coefficient on {:?} of degree {} where degree {d} is forced",
                        space.label(i),
                        space.degree_of(i)
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_table(&self, k: usize, m: &MultilinearMap) -> Result<()> {
        if m.arity() != k {
            return Err(Error::Malformed(format!(
                "table of arity {} in slot {k}",
                m.arity()
            )));
        }
        if m.degree() != self.presentation.product_degree(k) {
            return Err(Error::Malformed(format!(
                "arity {k} product has degree {}, expected {}",
                m.degree(),
                self.presentation.product_degree(k)
            )));
        }
        for (chain, out) in m.iter() {
            self.validate_entry(chain, out, m.degree())?;
        }
        Ok(())
    }

    fn validate_entry(&self, chain: &[Gen], out: &SparseVec, degree: i32) -> Result<()> {
        let n = self.objects.len() as u32;
        let mut sum = degree;
        for (t, g) in chain.iter().enumerate() {
            if g.src >= n || g.tgt >= n {
                return Err(Error::Malformed(format!(
                    "object index out of range in {g:?}"
                )));
            }
            if t > 0 && chain[t - 1].tgt != g.src {
                return Err(Error::Composability(format!("chain {chain:?}")));
            }
            let space = self.hom(g.src as usize, g.tgt as usize);
            if g.idx as usize >= space.total_dim() {
                return Err(Error::Malformed(format!(
                    "basis index out of range in {g:?}"
                )));
            }
            sum += space.degree_of(g.idx as usize);
        }
        let (s, t) = (chain[0].src as usize, chain[chain.len() - 1].tgt as usize);
        self.validate_vector(s, t, out, Some(sum))
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn hom(&self, src: usize, tgt: usize) -> &GradedVectorSpace {
        &self.homs[src * self.objects.len() + tgt]
    }

    pub fn homs(&self) -> &[GradedVectorSpace] {
        &self.homs
    }

    pub fn dim(&self, src: u32, tgt: u32) -> usize {
        self.hom(src as usize, tgt as usize).total_dim()
    }

    pub fn degree(&self, g: Gen) -> i32 {
        self.hom(g.src as usize, g.tgt as usize)
            .degree_of(g.idx as usize)
    }

    pub fn label(&self, g: Gen) -> &str {
        self.hom(g.src as usize, g.tgt as usize)
            .label(g.idx as usize)
    }

    /// The arity-`k` product; `None` beyond the arity bound (where it vanishes).
    pub fn product(&self, k: usize) -> Option<&MultilinearMap> {
        (k >= 1 && k <= self.arity_bound).then(|| &self.products[k - 1])
    }

    pub fn products(&self) -> &[MultilinearMap] {
        &self.products
    }

    pub fn units(&self) -> Option<&[SparseVec]> {
        self.units.as_deref()
    }

    pub fn with_units(mut self, units: Option<Vec<SparseVec>>) -> Result<Self> {
        if let Some(u) = &units {
            if u.len() != self.n_objects() {
                return Err(Error::Malformed("one unit per object required".into()));
            }
            for (x, v) in u.iter().enumerate() {
                self.validate_vector(x, x, v, Some(self.presentation.unit_degree()))?;
            }
        }
        self.units = units;
        Ok(self)
    }

    /// Adds `out` to the stored value of the arity-`k` product on `chain`.
    pub fn add_to_product(&mut self, k: usize, chain: Chain, out: &SparseVec) -> Result<()> {
        if k == 0 || k > self.arity_bound {
            return Err(Error::ArityBound {
                requested: k,
                allowed: self.arity_bound,
            });
        }
        let table = &self.products[k - 1];
        let merged = match table.get(&chain) {
            Some(old) => SparseVec::from_pairs(old.iter().chain(out.iter()).cloned()),
            None => out.clone(),
        };
        if chain.len() != k {
            return Err(Error::Arity {
                expected: k,
                got: chain.len(),
            });
        }
        self.validate_entry(&chain, &merged, table.degree())?;
        self.products[k - 1].set(chain, merged)
    }

    /// Replaces a whole product table after validating it.
    pub fn set_product(&mut self, k: usize, table: MultilinearMap) -> Result<()> {
        if k == 0 || k > self.arity_bound {
            return Err(Error::ArityBound {
                requested: k,
                allowed: self.arity_bound,
            });
        }
        self.validate_table(k, &table)?;
        self.products[k - 1] = table;
        Ok(())
    }

    /// Evaluates the arity-`k` product on a chain of vectors.
    pub fn eval(&self, k: usize, inputs: &[HomVec]) -> Result<HomVec> {
        let src = inputs.first().map_or(0, |v| v.src);
        let tgt = inputs.last().map_or(0, |v| v.tgt);
        for v in inputs {
            if v.coeffs.len() != self.dim(v.src, v.tgt) {
                return Err(Error::Dimension(
                    "input vector does not match its hom space".into(),
                ));
            }
        }
        match self.product(k) {
            Some(m) => eval_multilinear(m, inputs, self.dim(src, tgt)),
            None => {
                if inputs.len() != k {
                    return Err(Error::Arity {
                        expected: k,
                        got: inputs.len(),
                    });
                }
                Ok(HomVec::zero(src as usize, tgt as usize, self.dim(src, tgt)))
            }
        }
    }

    /// True iff every stored product of arity at least three is zero.
    pub fn is_dg(&self) -> bool {
        self.products.iter().skip(2).all(MultilinearMap::is_zero)
    }

    /// Switches presentation: hom degrees move by one and every coefficient
    /// is rescaled by the suspension sign of its input chain.
    pub fn convert_presentation(&self) -> AInftyCategory {
        let target = self.presentation.toggled();
        let shift = match target {
            Presentation::Suspended => -1,
            Presentation::Unsuspended => 1,
        };
        let homs: Vec<GradedVectorSpace> = self.homs.iter().map(|h| h.shifted(shift)).collect();
        let suspended_degree = |g: &Gen| -> i32 {
            let d = self.degree(*g);
            match self.presentation {
                Presentation::Suspended => d,
                Presentation::Unsuspended => d - 1,
            }
        };
        let products = self
            .products
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let k = i + 1;
                m.map_entries(|chain, out| {
                    let degs: Vec<i32> = chain.iter().map(suspended_degree).collect();
                    let s = suspension_sign(k, &degs);
                    out.map_coefficients(|_, x| s.apply(x))
                })
                .with_degree(target.product_degree(k))
            })
            .collect();
        AInftyCategory {
            objects: self.objects.clone(),
            homs,
            presentation: target,
            arity_bound: self.arity_bound,
            products,
            units: self.units.clone(),
        }
    }

    pub fn to_presentation(&self, p: Presentation) -> AInftyCategory {
        if self.presentation == p {
            self.clone()
        } else {
            self.convert_presentation()
        }
    }

    pub fn to_suspended(&self) -> AInftyCategory {
        self.to_presentation(Presentation::Suspended)
    }

    pub fn to_unsuspended(&self) -> AInftyCategory {
        self.to_presentation(Presentation::Unsuspended)
    }

    /// Same structure with a different (larger or smaller) arity bound;
    /// tables beyond the new bound are dropped.
    pub fn with_arity_bound(&self, k: usize) -> Result<AInftyCategory> {
        if k == 0 {
            return Err(Error::Malformed("arity bound must be positive".into()));
        }
        let mut c = self.clone();
        c.products.truncate(k);
        while c.products.len() < k {
            let a = c.products.len() + 1;
            c.products
                .push(MultilinearMap::new(a, self.presentation.product_degree(a)));
        }
        c.arity_bound = k;
        Ok(c)
    }

    /// Relabels objects (same order).
    pub fn with_object_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.objects.len() {
            return Err(Error::Malformed("object rename of the wrong length".into()));
        }
        self.objects = names;
        Ok(self)
    }

    /// Degree bookkeeping scan: every stored coefficient sits in the degree
    /// forced by its inputs.
    pub fn degrees_consistent(&self) -> bool {
        self.products.iter().all(|m| {
            m.iter()
                .all(|(c, v)| self.validate_entry(c, v, m.degree()).is_ok())
        })
    }

    pub fn human_chain(&self, chain: &[Gen]) -> (Vec<String>, Vec<String>) {
        let mut objects: Vec<String> = chain
            .iter()
            .map(|g| self.objects[g.src as usize].clone())
            .collect();
        if let Some(last) = chain.last() {
            objects.push(self.objects[last.tgt as usize].clone());
        }
        let labels = chain.iter().map(|g| self.label(*g).to_string()).collect();
        (objects, labels)
    }
}
