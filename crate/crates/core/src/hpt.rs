//! Strong deformation retracts of hom complexes and the transfer of an
//! A∞-structure along them.

use crate::category::{AInftyCategory, Presentation};
use crate::cohomology::{differential, HodgeDecomposition};
use crate::error::{Error, Result};
use crate::functor::AInftyFunctor;
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::linalg::Matrix;
use crate::multilinear::{substitute, Accumulator, Chain, Family, Gen, MultilinearMap, SparseVec};
use crate::report::RelationReport;
use crate::scalar::Scalar;

/// Per hom pair `(X, Y)`: `ι: B → A`, `π: A → B` of degree zero and
/// `h: A → A` of degree −1, all on the unsuspended hom complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDRData {
    big: AInftyCategory,
    small_homs: Vec<GradedVectorSpace>,
    iota: Vec<GradedMap>,
    pi: Vec<GradedMap>,
    h: Vec<GradedMap>,
}

impl SDRData {
    pub fn new(
        big: &AInftyCategory,
        small_homs: Vec<GradedVectorSpace>,
        iota: Vec<GradedMap>,
        pi: Vec<GradedMap>,
        h: Vec<GradedMap>,
    ) -> Result<Self> {
        let big = big.to_unsuspended();
        let n = big.n_objects();
        for (what, len) in [
            ("small homs", small_homs.len()),
            ("ι", iota.len()),
            ("π", pi.len()),
            ("h", h.len()),
        ] {
            if len != n * n {
                return Err(Error::Malformed(format!("{len} {what} for {n} objects")));
            }
        }
        for p in 0..n * n {
            let a = big.hom(p / n, p % n);
            let b = &small_homs[p];
            let shape_ok = iota[p].source() == b
                && iota[p].target() == a
                && iota[p].degree() == 0
                && pi[p].source() == a
                && pi[p].target() == b
                && pi[p].degree() == 0
                && h[p].source() == a
                && h[p].target() == a
                && h[p].degree() == -1;
            if !shape_ok {
                return Err(Error::Dimension(format!(
                    "SDR maps for ({}, {}) do not match the hom spaces",
                    big.objects()[p / n],
                    big.objects()[p % n]
                )));
            }
        }
        Ok(SDRData {
            big,
            small_homs,
            iota,
            pi,
            h,
        })
    }

    /// `B = A`, `ι = π = Id`, `h = 0`.
    pub fn trivial(c: &AInftyCategory) -> Self {
        let big = c.to_unsuspended();
        let homs: Vec<GradedVectorSpace> = big.homs().to_vec();
        let id: Vec<GradedMap> = homs.iter().map(GradedMap::identity).collect();
        let h = homs.iter().map(|a| GradedMap::zero(a, a, -1)).collect();
        SDRData::new(&big, homs, id.clone(), id, h).expect("trivial SDR is well formed")
    }

    /// The big category, unsuspended.
    pub fn big(&self) -> &AInftyCategory {
        &self.big
    }

    pub fn n_objects(&self) -> usize {
        self.big.n_objects()
    }

    fn idx(&self, x: usize, y: usize) -> usize {
        x * self.big.n_objects() + y
    }

    pub fn small_hom(&self, x: usize, y: usize) -> &GradedVectorSpace {
        &self.small_homs[self.idx(x, y)]
    }

    pub fn small_homs(&self) -> &[GradedVectorSpace] {
        &self.small_homs
    }

    pub fn iota(&self, x: usize, y: usize) -> &GradedMap {
        &self.iota[self.idx(x, y)]
    }

    pub fn pi(&self, x: usize, y: usize) -> &GradedMap {
        &self.pi[self.idx(x, y)]
    }

    pub fn h(&self, x: usize, y: usize) -> &GradedMap {
        &self.h[self.idx(x, y)]
    }

    /// Replaces `h` on one pair (mutation tests).
    pub fn with_h(mut self, x: usize, y: usize, h: GradedMap) -> Result<Self> {
        let p = self.idx(x, y);
        let a = self.big.hom(x, y);
        if h.source() != a || h.target() != a || h.degree() != -1 {
            return Err(Error::Dimension(
                "replacement homotopy of the wrong type".into(),
            ));
        }
        self.h[p] = h;
        Ok(self)
    }

    /// `d^A` on one pair.
    pub fn big_differential(&self, x: usize, y: usize) -> GradedMap {
        differential(&self.big, x, y)
    }

    /// `d^B = π d^A ι`.
    pub fn small_differential(&self, x: usize, y: usize) -> Result<GradedMap> {
        self.pi(x, y)
            .after(&self.big_differential(x, y))?
            .after(self.iota(x, y))
    }

    /// `P = ι π`.
    pub fn projector(&self, x: usize, y: usize) -> Result<GradedMap> {
        self.iota(x, y).after(self.pi(x, y))
    }

    /// Conjugates the data on one pair by the chain automorphism
    /// `A = Id + b λ π`, where `b` is a closed element of the big hom with
    /// `π b = 0` and `λ` a functional on the small hom killing `d^B`.
    /// Gives `ι' = A ι`, `π' = π A⁻¹`, `h' = A h A⁻¹`; side conditions survive.
    pub fn gauged(&self, x: usize, y: usize, b: &[Scalar], lambda: &[Scalar]) -> Result<SDRData> {
        let p = self.idx(x, y);
        let (big, small) = (self.big.hom(x, y), &self.small_homs[p]);
        if b.len() != big.total_dim() || lambda.len() != small.total_dim() {
            return Err(Error::Dimension("gauge data against the hom spaces".into()));
        }
        let deg_b = big
            .homogeneous_degree(b)
            .ok_or_else(|| Error::Malformed("b is not homogeneous".into()))?;
        let deg_l = small
            .homogeneous_degree(lambda)
            .ok_or_else(|| Error::Malformed("λ is not homogeneous".into()))?;
        if let (Some(db), Some(dl)) = (deg_b, deg_l) {
            if db != dl {
                return Err(Error::Malformed(format!(
                    "b has degree {db} but λ lives in degree {dl}"
                )));
            }
        }
        let d = self.big_differential(x, y);
        if d.apply(b)?.iter().any(|v| !v.is_zero()) {
            return Err(Error::Malformed("b is not closed".into()));
        }
        if self.pi(x, y).apply(b)?.iter().any(|v| !v.is_zero()) {
            return Err(Error::Malformed("π b is nonzero".into()));
        }
        let db = self.small_differential(x, y)?.to_total();
        let lam_d = db.transpose().apply(lambda)?;
        if lam_d.iter().any(|v| !v.is_zero()) {
            return Err(Error::Malformed(
                "λ does not kill the small differential".into(),
            ));
        }
        let n = big.total_dim();
        let lam_pi = self.pi[p].to_total().transpose().apply(lambda)?;
        let mut nil = Matrix::zeros(n, n);
        for (r, br) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (c, lc) in lam_pi.iter().enumerate() {
                nil[(r, c)] = br.clone() * lc.clone();
            }
        }
        let id = Matrix::identity(n);
        let (a, a_inv) = (id.try_add(&nil)?, id.try_sub(&nil)?);
        let (it, pt, ht) = (
            self.iota[p].to_total(),
            self.pi[p].to_total(),
            self.h[p].to_total(),
        );
        let mut out = self.clone();
        out.iota[p] = GradedMap::from_total(small, big, 0, &a.try_mul(&it)?)?;
        out.pi[p] = GradedMap::from_total(big, small, 0, &pt.try_mul(&a_inv)?)?;
        out.h[p] = GradedMap::from_total(big, big, -1, &a.try_mul(&ht)?.try_mul(&a_inv)?)?;
        Ok(out)
    }
}

/// Compares `lhs` and `rhs` column by column and records every nonzero
/// difference.
fn compare(
    report: &mut RelationReport,
    relation: &str,
    objects: &[String],
    lhs: &GradedMap,
    rhs: &GradedMap,
) -> Result<()> {
    let diff = lhs.try_sub(rhs)?.to_total();
    let (src, tgt) = (lhs.source(), lhs.target());
    for c in 0..diff.cols() {
        let col = diff.column(c);
        if col.iter().all(Scalar::is_zero) {
            continue;
        }
        report.push(crate::report::Violation {
            relation: relation.to_string(),
            arity: 1,
            objects: objects.to_vec(),
            inputs: vec![src.label(c).to_string()],
            residual: col
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (tgt.label(i).to_string(), x.clone()))
                .collect(),
        });
    }
    Ok(())
}

/// Every SDR identity, block by block: `πι = Id`, both chain-map squares,
/// the homotopy identity, and idempotence of `P` with `Pd = dP`.
pub fn check_sdr(s: &SDRData) -> Result<RelationReport> {
    let mut report = RelationReport::new(1);
    let n = s.n_objects();
    for x in 0..n {
        for y in 0..n {
            let objects = vec![s.big.objects()[x].clone(), s.big.objects()[y].clone()];
            let (iota, pi, h) = (s.iota(x, y), s.pi(x, y), s.h(x, y));
            let da = s.big_differential(x, y);
            let db = s.small_differential(x, y)?;
            let id_a = GradedMap::identity(s.big.hom(x, y));
            let id_b = GradedMap::identity(s.small_hom(x, y));
            let p = s.projector(x, y)?;
            compare(
                &mut report,
                "pi iota = id",
                &objects,
                &pi.after(iota)?,
                &id_b,
            )?;
            compare(
                &mut report,
                "iota is a chain map",
                &objects,
                &da.after(iota)?,
                &iota.after(&db)?,
            )?;
            compare(
                &mut report,
                "pi is a chain map",
                &objects,
                &pi.after(&da)?,
                &db.after(pi)?,
            )?;
            let lhs = h.after(&da)?.try_add(&da.after(h)?)?;
            compare(
                &mut report,
                "dh + hd = id - iota pi",
                &objects,
                &lhs,
                &id_a.try_sub(&p)?,
            )?;
            compare(&mut report, "P is idempotent", &objects, &p.after(&p)?, &p)?;
            compare(
                &mut report,
                "P commutes with d",
                &objects,
                &p.after(&da)?,
                &da.after(&p)?,
            )?;
        }
    }
    Ok(report)
}

/// The optional side conditions `h² = 0`, `hι = 0`, `πh = 0`; informational.
pub fn check_side_conditions(s: &SDRData) -> Result<RelationReport> {
    let mut report = RelationReport::new(1);
    let n = s.n_objects();
    for x in 0..n {
        for y in 0..n {
            let objects = vec![s.big.objects()[x].clone(), s.big.objects()[y].clone()];
            let (iota, pi, h) = (s.iota(x, y), s.pi(x, y), s.h(x, y));
            let a = s.big.hom(x, y);
            let b = s.small_hom(x, y);
            compare(
                &mut report,
                "h h = 0",
                &objects,
                &h.after(h)?,
                &GradedMap::zero(a, a, -2),
            )?;
            compare(
                &mut report,
                "h iota = 0",
                &objects,
                &h.after(iota)?,
                &GradedMap::zero(b, a, -1),
            )?;
            compare(
                &mut report,
                "pi h = 0",
                &objects,
                &pi.after(h)?,
                &GradedMap::zero(a, b, -1),
            )?;
        }
    }
    Ok(report)
}

/// Hodge decomposition of every hom complex; the small side is cohomology.
pub fn hodge_sdr(c: &AInftyCategory) -> Result<SDRData> {
    let big = c.to_unsuspended();
    let n = big.n_objects();
    let (mut homs, mut iota, mut pi, mut h) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for x in 0..n {
        for y in 0..n {
            let hd = HodgeDecomposition::new(&differential(&big, x, y))?;
            homs.push(hd.cohomology);
            iota.push(hd.iota);
            pi.push(hd.pi);
            h.push(hd.h);
        }
    }
    SDRData::new(&big, homs, iota, pi, h)
}

/// The transferred structure `D` on the small homs (suspended) and the
/// functor `F: D → C` extending `ι`.
///
/// With `S_n = Σ_{j≥2} Σ b_j(f_{k_1} ⊗ … ⊗ f_{k_j})` over `k_1+…+k_j = n`,
/// the recursion is `f_n = −h S_n` and `b^D_n = π S_n`; `f₁ = ι` and
/// `b^D_1 = π b₁ ι`. Each arity's tables are computed once and reused.
pub fn transfer(s: &SDRData, k_out: usize) -> Result<(AInftyCategory, AInftyFunctor)> {
    let big = s.big.to_suspended();
    let allowed = 2 * big.arity_bound() - 1;
    if k_out == 0 || k_out > allowed {
        return Err(Error::ArityBound {
            requested: k_out,
            allowed,
        });
    }
    let n = big.n_objects();
    let small: Vec<GradedVectorSpace> = s.small_homs.iter().map(|b| b.shifted(-1)).collect();
    let totals =
        |maps: &[GradedMap]| -> Vec<Matrix> { maps.iter().map(GradedMap::to_total).collect() };
    let (iota_t, pi_t, h_t) = (totals(&s.iota), totals(&s.pi), totals(&s.h));
    let pair = |a: u32, b: u32| a as usize * n + b as usize;

    let mut f_tables = vec![MultilinearMap::new(1, 0)];
    let mut b_tables = vec![MultilinearMap::new(1, 1)];
    for x in 0..n {
        for y in 0..n {
            let p = x * n + y;
            let db = s.small_differential(x, y)?.to_total();
            for j in 0..small[p].total_dim() {
                let key = Chain::from_slice(&[Gen::new(x, y, j)]);
                let col = SparseVec::from_dense(&iota_t[p].column(j));
                if !col.is_zero() {
                    f_tables[0].set(key.clone(), col)?;
                }
                let dcol = SparseVec::from_dense(&db.column(j));
                if !dcol.is_zero() {
                    b_tables[0].set(key, dcol)?;
                }
            }
        }
    }
    for arity in 2..=k_out {
        let mut acc = Accumulator::new(|a, b| big.dim(a, b));
        {
            let tables: Vec<&MultilinearMap> = f_tables.iter().collect();
            let family = Family::new(&tables, |a, b| (a, b), |a, b| big.dim(a, b));
            for j in 2..=arity {
                if let Some(bj) = big.product(j) {
                    substitute(bj, &family, arity, &Scalar::one(), &mut acc);
                }
            }
        }
        let sums = acc.into_map(arity, 1);
        let mut f_n = MultilinearMap::new(arity, 0);
        let mut b_n = MultilinearMap::new(arity, 1);
        let minus = Scalar::from_int(-1);
        for (chain, v) in sums.iter() {
            let p = pair(chain[0].src, chain[chain.len() - 1].tgt);
            let dense = v.to_dense(h_t[p].cols());
            let fv = SparseVec::from_dense(&h_t[p].apply(&dense)?).scaled(&minus);
            if !fv.is_zero() {
                f_n.set(chain.clone(), fv)?;
            }
            let bv = SparseVec::from_dense(&pi_t[p].apply(&dense)?);
            if !bv.is_zero() {
                b_n.set(chain.clone(), bv)?;
            }
        }
        f_tables.push(f_n);
        b_tables.push(b_n);
    }
    let d = AInftyCategory::new(
        big.objects().to_vec(),
        small,
        Presentation::Suspended,
        k_out,
        b_tables,
        None,
    )?;
    let f = AInftyFunctor::new(&d, &big, (0..n).collect(), f_tables)?;
    Ok((d, f))
}

/// Transfer along the Hodge SDR onto cohomology.
pub fn minimal_model(c: &AInftyCategory, k_out: usize) -> Result<(AInftyCategory, AInftyFunctor)> {
    transfer(&hodge_sdr(c)?, k_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{build_dg_category, Complex};
    use crate::functor::check_functor;
    use crate::relations::check_relations;
    use std::collections::BTreeMap;

    fn contractible() -> Complex {
        Complex::new(
            0,
            vec![1, 1],
            BTreeMap::from([(0, Matrix::from_ints(1, 1, &[1]))]),
        )
        .unwrap()
    }

    #[test]
    fn trivial_sdr_transfers_to_itself() {
        let c = build_dg_category(&[("X".into(), contractible())], 3).unwrap();
        let s = SDRData::trivial(&c);
        assert!(check_sdr(&s).unwrap().passed());
        let (d, f) = transfer(&s, 3).unwrap();
        assert_eq!(d.products(), c.to_suspended().products());
        assert_eq!(
            f.components()[0],
            crate::functor::AInftyFunctor::identity(&c).components()[0]
        );
        assert!(f.components()[1..].iter().all(MultilinearMap::is_zero));
    }

    #[test]
    fn contractible_object_has_zero_model() {
        let c = build_dg_category(&[("X".into(), contractible())], 3).unwrap();
        let s = hodge_sdr(&c).unwrap();
        assert!(check_sdr(&s).unwrap().passed());
        assert!(check_side_conditions(&s).unwrap().passed());
        let (d, f) = transfer(&s, 3).unwrap();
        assert_eq!(d.hom(0, 0).total_dim(), 0);
        assert!(check_functor(&f, 3).unwrap().passed());
    }

    #[test]
    fn zeroed_homotopy_breaks_the_retract() {
        let p = Complex::zero_differential(0, vec![1]);
        let c = build_dg_category(&[("X".into(), contractible()), ("P".into(), p)], 3).unwrap();
        let s = hodge_sdr(&c).unwrap();
        let a = s.big().hom(0, 0).clone();
        let bad = s.with_h(0, 0, GradedMap::zero(&a, &a, -1)).unwrap();
        let r = check_sdr(&bad).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| v.relation == "dh + hd = id - iota pi"));
    }

    #[test]
    fn transfer_respects_the_relations() {
        let p = Complex::zero_differential(0, vec![1]);
        let q = Complex::new(
            -1,
            vec![1, 2, 1],
            BTreeMap::from([
                (-1, Matrix::from_ints(2, 1, &[1, 0])),
                (0, Matrix::from_ints(1, 2, &[0, 1])),
            ]),
        )
        .unwrap();
        let c = build_dg_category(
            &[
                ("P".into(), p),
                ("Q".into(), q),
                ("X".into(), contractible()),
            ],
            5,
        )
        .unwrap();
        let (d, f) = minimal_model(&c, 5).unwrap();
        assert!(d.product(1).unwrap().is_zero());
        assert!(check_relations(&d, 5).unwrap().passed());
        assert!(check_functor(&f, 5).unwrap().passed());
    }
}
