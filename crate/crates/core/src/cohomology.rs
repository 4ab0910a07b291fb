//! Cohomology of hom complexes, Hodge decompositions, and the induced
//! composition on cohomology.

use crate::category::{AInftyCategory, Presentation};
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::linalg::{extend_to_basis, unit_vector, Matrix, Vector};
use crate::multilinear::{Chain, Gen, HomVec, MultilinearMap, SparseVec};
use crate::relations::relation_residual;
use std::collections::BTreeMap;

/// The arity-one product on one hom space as a degree-one graded map.
pub fn differential(c: &AInftyCategory, src: usize, tgt: usize) -> GradedMap {
    let space = c.hom(src, tgt);
    let mut total = Matrix::zeros(space.total_dim(), space.total_dim());
    if let Some(m1) = c.product(1) {
        for (chain, out) in m1.iter() {
            let g = chain[0];
            if (g.src as usize, g.tgt as usize) != (src, tgt) {
                continue;
            }
            for (i, x) in out.iter() {
                total[(*i as usize, g.idx as usize)] = x.clone();
            }
        }
    }
    GradedMap::from_total(space, space, 1, &total).expect("stored products are homogeneous")
}

/// `A = B ⊕ H ⊕ C` per degree for a complex `(A, d)`, with `B = d(C)`.
///
/// Cocycle representatives for `H` are the kernel basis vectors (in the
/// order the row reduction produces them) that are independent of `B`;
/// `C` is spanned by the first standard vectors completing the cocycles.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub cohomology: GradedVectorSpace,
    pub iota: GradedMap,
    pub pi: GradedMap,
    pub h: GradedMap,
}

impl HodgeDecomposition {
    pub fn new(d: &GradedMap) -> Result<Self> {
        let space = d.source().clone();
        if d.degree() != 1 || d.target() != &space {
            return Err(Error::Dimension(
                "differential must be a degree-one endomorphism".into(),
            ));
        }
        if !d.after(d)?.is_zero() {
            return Err(Error::RelationFailure(
                "differential does not square to zero".into(),
            ));
        }
        let (lo, hi) = space.window();
        // per degree: complement basis C^q and cohomology representatives
        let mut complement: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
        let mut reps: BTreeMap<i32, Vec<(usize, Vector)>> = BTreeMap::new();
        for q in lo..=hi {
            let n = space.dim(q);
            let dq = block_or_zero(d, q, space.dim(q + 1), n);
            let kernel = dq.nullspace();
            let units: Vec<Vector> = (0..n).map(|i| unit_vector(n, i)).collect();
            let comp_idx = extend_to_basis(n, &kernel, &units);
            complement.insert(q, comp_idx.iter().map(|&i| units[i].clone()).collect());
            // boundaries from the complement one degree down
            let boundaries = boundaries_into(d, &complement, q, n)?;
            let picked = extend_to_basis(n, &boundaries, &kernel);
            reps.insert(
                q,
                picked
                    .iter()
                    .map(|&i| (pivot_of(&kernel[i]), kernel[i].clone()))
                    .collect(),
            );
        }
        let mut pieces = Vec::new();
        for q in lo..=hi {
            let labels = reps[&q]
                .iter()
                .map(|(p, _)| format!("[{}]", space.label(space.offset(q) + p)))
                .collect();
            pieces.push(labels);
        }
        let cohomology = GradedVectorSpace::new(lo, pieces)?;
        let mut iota_blocks = BTreeMap::new();
        let mut pi_blocks = BTreeMap::new();
        let mut h_blocks = BTreeMap::new();
        for q in lo..=hi {
            let n = space.dim(q);
            let bnd = boundaries_into(d, &complement, q, n)?;
            let hv: Vec<Vector> = reps[&q].iter().map(|(_, v)| v.clone()).collect();
            let cv = &complement[&q];
            let (nb, nh) = (bnd.len(), hv.len());
            if nb + nh + cv.len() != n {
                return Err(Error::Inconsistent(format!(
                    "Hodge pieces do not span degree {q}"
                )));
            }
            if nh > 0 {
                iota_blocks.insert(q, Matrix::from_columns(n, &hv)?);
            }
            if n == 0 {
                continue;
            }
            let mut cols = bnd.clone();
            cols.extend(hv.iter().cloned());
            cols.extend(cv.iter().cloned());
            let inv = Matrix::from_columns(n, &cols)?
                .inverse()
                .ok_or_else(|| Error::Inconsistent("Hodge basis is singular".into()))?;
            let rows_of = |r: std::ops::Range<usize>| -> Vec<Vec<crate::Scalar>> {
                r.map(|i| inv.row(i).to_vec()).collect()
            };
            if nh > 0 {
                pi_blocks.insert(q, Matrix::from_rows(rows_of(nb..nb + nh))?);
            }
            // h sends the boundary d(c_j) to c_j one degree down
            let down = complement.get(&(q - 1)).cloned().unwrap_or_default();
            if nb > 0 {
                let coords = Matrix::from_rows(rows_of(0..nb))?;
                let lift = Matrix::from_columns(space.dim(q - 1), &down)?;
                h_blocks.insert(q, lift.try_mul(&coords)?);
            }
        }
        let iota = GradedMap::from_blocks(&cohomology, &space, 0, iota_blocks)?;
        let pi = GradedMap::from_blocks(&space, &cohomology, 0, pi_blocks)?;
        let h = GradedMap::from_blocks(&space, &space, -1, h_blocks)?;
        Ok(HodgeDecomposition {
            cohomology,
            iota,
            pi,
            h,
        })
    }
}

fn block_or_zero(d: &GradedMap, q: i32, rows: usize, cols: usize) -> Matrix {
    d.block(q)
        .cloned()
        .unwrap_or_else(|| Matrix::zeros(rows, cols))
}

/// `d` applied to the complement basis of degree `q - 1`.
fn boundaries_into(
    d: &GradedMap,
    complement: &BTreeMap<i32, Vec<Vector>>,
    q: i32,
    n: usize,
) -> Result<Vec<Vector>> {
    let Some(prev) = complement.get(&(q - 1)) else {
        return Ok(Vec::new());
    };
    let Some(block) = d.block(q - 1) else {
        return Ok(Vec::new());
    };
    let out: Vec<Vector> = prev.iter().map(|c| block.apply(c)).collect::<Result<_>>()?;
    debug_assert!(out.iter().all(|v| v.len() == n));
    Ok(out)
}

/// Kernel vectors from reduced row echelon form end at their free column.
fn pivot_of(v: &[crate::Scalar]) -> usize {
    v.iter().rposition(|x| !x.is_zero()).unwrap_or(0)
}

/// Cohomology of every hom complex with the composition induced by the
/// unsuspended arity-two product.
#[derive(Clone, Debug)]
pub struct CohomologyCategory {
    pub objects: Vec<String>,
    /// Row-major table of hom-space cohomologies (unsuspended grading).
    pub spaces: Vec<GradedVectorSpace>,
    /// Cocycle representatives, one per cohomology basis element.
    pub representatives: Vec<Vec<Vector>>,
    pub composition: MultilinearMap,
    pub units: Option<Vec<SparseVec>>,
    decompositions: Vec<HodgeDecomposition>,
}

impl CohomologyCategory {
    pub fn space(&self, src: usize, tgt: usize) -> &GradedVectorSpace {
        &self.spaces[src * self.objects.len() + tgt]
    }

    pub fn decomposition(&self, src: usize, tgt: usize) -> &HodgeDecomposition {
        &self.decompositions[src * self.objects.len() + tgt]
    }

    /// Class of a cocycle of the underlying hom complex.
    pub fn class_of(&self, src: usize, tgt: usize, cocycle: &[crate::Scalar]) -> Result<Vector> {
        self.decomposition(src, tgt).pi.apply(cocycle)
    }

    /// Composes two classes.
    pub fn compose(&self, a: &HomVec, b: &HomVec) -> Result<HomVec> {
        let dim = self.space(a.src as usize, b.tgt as usize).total_dim();
        crate::multilinear::eval_multilinear(&self.composition, &[a.clone(), b.clone()], dim)
    }
}

fn check_differential(c: &AInftyCategory) -> Result<()> {
    if !relation_residual(c, 1).is_zero() {
        return Err(Error::RelationFailure(
            "the arity-one relation fails".into(),
        ));
    }
    Ok(())
}

/// `H(C)` with chosen representatives and induced composition. With
/// `degree_zero_only` the result is `H⁰`.
pub fn cohomology(c: &AInftyCategory, degree_zero_only: bool) -> Result<CohomologyCategory> {
    check_differential(c)?;
    let u = c.to_unsuspended();
    let n = u.n_objects();
    let mut decompositions = Vec::with_capacity(n * n);
    let mut spaces = Vec::with_capacity(n * n);
    let mut representatives: Vec<Vec<Vector>> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let hd = HodgeDecomposition::new(&differential(&u, x, y))?;
            let full = &hd.cohomology;
            let keep: Vec<usize> = (0..full.total_dim())
                .filter(|&i| !degree_zero_only || full.degree_of(i) == 0)
                .collect();
            let space = if degree_zero_only {
                let labels: Vec<String> = keep.iter().map(|&i| full.label(i).to_string()).collect();
                GradedVectorSpace::new(0, vec![labels])?
            } else {
                full.clone()
            };
            let total = hd.iota.to_total();
            representatives.push(keep.iter().map(|&i| total.column(i)).collect());
            spaces.push(space);
            decompositions.push(restrict(hd, degree_zero_only)?);
        }
    }
    let mut composition = MultilinearMap::new(2, 0);
    if let Some(m2) = u.product(2) {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (rxy, ryz) = (&representatives[x * n + y], &representatives[y * n + z]);
                    for (i, a) in rxy.iter().enumerate() {
                        for (j, b) in ryz.iter().enumerate() {
                            let ha = HomVec {
                                src: x as u32,
                                tgt: y as u32,
                                coeffs: a.clone(),
                            };
                            let hb = HomVec {
                                src: y as u32,
                                tgt: z as u32,
                                coeffs: b.clone(),
                            };
                            let w = crate::multilinear::eval_multilinear(
                                m2,
                                &[ha, hb],
                                u.dim(x as u32, z as u32),
                            )?;
                            let class = decompositions[x * n + z].pi.apply(&w.coeffs)?;
                            let sv = SparseVec::from_dense(&class);
                            if !sv.is_zero() {
                                composition.set(
                                    Chain::from_slice(&[Gen::new(x, y, i), Gen::new(y, z, j)]),
                                    sv,
                                )?;
                            }
                        }
                    }
                }
            }
        }
    }
    let units = match u.units() {
        Some(us) => Some(
            us.iter()
                .enumerate()
                .map(|(x, v)| {
                    let dense = v.to_dense(u.dim(x as u32, x as u32));
                    decompositions[x * n + x]
                        .pi
                        .apply(&dense)
                        .map(|c| SparseVec::from_dense(&c))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(CohomologyCategory {
        objects: u.objects().to_vec(),
        spaces,
        representatives,
        composition,
        units,
        decompositions,
    })
}

/// For `H⁰` the projection is cut down to the degree-zero classes so that
/// class indices match the restricted space.
fn restrict(hd: HodgeDecomposition, degree_zero_only: bool) -> Result<HodgeDecomposition> {
    if !degree_zero_only {
        return Ok(hd);
    }
    let full = &hd.cohomology;
    let labels: Vec<String> = (0..full.total_dim())
        .filter(|&i| full.degree_of(i) == 0)
        .map(|i| full.label(i).to_string())
        .collect();
    let h0 = GradedVectorSpace::new(0, vec![labels])?;
    let space = hd.iota.target().clone();
    let mut pi_blocks = BTreeMap::new();
    let mut iota_blocks = BTreeMap::new();
    if let Some(b) = hd.pi.block(0) {
        pi_blocks.insert(0, b.clone());
    }
    if h0.total_dim() > 0 {
        if let Some(b) = hd.iota.block(0) {
            iota_blocks.insert(0, b.clone());
        }
    }
    Ok(HodgeDecomposition {
        cohomology: h0.clone(),
        iota: GradedMap::from_blocks(&h0, &space, 0, iota_blocks)?,
        pi: GradedMap::from_blocks(&space, &h0, 0, pi_blocks)?,
        h: hd.h,
    })
}

/// Dimensions of `H^q` of a complex by rank–nullity, for cross-checks.
pub fn betti_numbers(d: &GradedMap) -> BTreeMap<i32, usize> {
    let space = d.source();
    let (lo, hi) = space.window();
    (lo..=hi)
        .map(|q| {
            let n = space.dim(q);
            let rank_out = block_or_zero(d, q, space.dim(q + 1), n).rank();
            let rank_in = if space.dim(q - 1) == 0 {
                0
            } else {
                block_or_zero(d, q - 1, n, space.dim(q - 1)).rank()
            };
            (q, n - rank_out - rank_in)
        })
        .collect()
}

/// True when the category's presentation is the one the cohomology grading
/// refers to.
pub fn is_unsuspended(c: &AInftyCategory) -> bool {
    c.presentation() == Presentation::Unsuspended
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(d: &[i64], dims: &[usize]) -> GradedMap {
        let space = GradedVectorSpace::from_dims(0, dims, "e");
        let total = Matrix::from_ints(space.total_dim(), space.total_dim(), d);
        GradedMap::from_total(&space, &space, 1, &total).unwrap()
    }

    fn check_sdr_identities(d: &GradedMap, hd: &HodgeDecomposition) {
        let id_small = GradedMap::identity(&hd.cohomology);
        assert_eq!(hd.pi.after(&hd.iota).unwrap(), id_small);
        let lhs = d
            .after(&hd.h)
            .unwrap()
            .try_add(&hd.h.after(d).unwrap())
            .unwrap();
        let rhs = GradedMap::identity(d.source())
            .try_sub(&hd.iota.after(&hd.pi).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(hd.h.after(&hd.h).unwrap().is_zero());
        assert!(hd.h.after(&hd.iota).unwrap().is_zero());
        assert!(hd.pi.after(&hd.h).unwrap().is_zero());
    }

    #[test]
    fn contractible_two_term() {
        let d = complex(&[0, 0, 1, 0], &[1, 1]);
        let hd = HodgeDecomposition::new(&d).unwrap();
        assert!(hd.cohomology.is_zero());
        check_sdr_identities(&d, &hd);
    }

    #[test]
    fn zero_differential_keeps_everything() {
        let d = complex(&[0; 9], &[2, 1]);
        let hd = HodgeDecomposition::new(&d).unwrap();
        assert_eq!(hd.cohomology.total_dim(), 3);
        assert!(hd.h.is_zero());
        check_sdr_identities(&d, &hd);
    }

    #[test]
    fn mixed_complex_matches_betti_numbers() {
        // degrees 0,1,2 with dims 2,2,1; d0 of rank 1, d1 of rank 1
        #[rustfmt::skip]
        let d = complex(&[
            0, 0, 0, 0, 0,
            0, 0, 0, 0, 0,
            1, 2, 0, 0, 0,
            2, 4, 0, 0, 0,
            0, 0, 2, -1, 0,
        ], &[2, 2, 1]);
        let hd = HodgeDecomposition::new(&d).unwrap();
        let betti = betti_numbers(&d);
        for (q, b) in betti {
            assert_eq!(hd.cohomology.dim(q), b);
        }
        check_sdr_identities(&d, &hd);
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let d = complex(&[0, 0, 0, 1, 0, 0, 0, 1, 0], &[1, 1, 1]);
        assert!(matches!(
            HodgeDecomposition::new(&d),
            Err(Error::RelationFailure(_))
        ));
    }
}
