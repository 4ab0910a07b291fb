//! Graded vector spaces with explicit labelled bases, and degree-homogeneous
//! linear maps between them stored as per-degree blocks.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::scalar::Scalar;

/// A finite-dimensional graded vector space over a degree window.
///
/// Basis elements are indexed by a flat index: degrees ascending, labels in
/// the stored order inside each degree.
#[derive(Clone, Debug)]
pub struct GradedVectorSpace {
    d_min: i32,
    pieces: Vec<Vec<String>>,
    offsets: Vec<usize>,
    degrees: Vec<i32>,
    lookup: HashMap<String, usize>,
}

impl PartialEq for GradedVectorSpace {
    fn eq(&self, other: &Self) -> bool {
        self.d_min == other.d_min && self.pieces == other.pieces
    }
}

impl Eq for GradedVectorSpace {}

impl GradedVectorSpace {
    /// `pieces[i]` holds the labels of degree `d_min + i`.
    pub fn new(d_min: i32, pieces: Vec<Vec<String>>) -> Result<Self> {
        let pieces = if pieces.is_empty() {
            vec![Vec::new()]
        } else {
            pieces
        };
        let mut offsets = Vec::with_capacity(pieces.len() + 1);
        let mut degrees = Vec::new();
        let mut lookup = HashMap::new();
        let mut off = 0;
        for (i, piece) in pieces.iter().enumerate() {
            offsets.push(off);
            for label in piece {
                if lookup.insert(label.clone(), off).is_some() {
                    return Err(Error::Malformed(format!("duplicate basis label {label:?}")));
                }
                degrees.push(d_min + i as i32);
                off += 1;
            }
        }
        offsets.push(off);
        Ok(GradedVectorSpace {
            d_min,
            pieces,
            offsets,
            degrees,
            lookup,
        })
    }

    pub fn zero() -> Self {
        Self::new(0, vec![Vec::new()]).expect("empty space")
    }

    /// Builds from a degree-to-labels map; the window is the hull of the keys.
    pub fn from_map(map: &BTreeMap<i32, Vec<String>>) -> Result<Self> {
        let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) else {
            return Ok(Self::zero());
        };
        if (hi as i64 - lo as i64) > 4096 {
            return Err(Error::Malformed(format!(
                "degree window [{lo}, {hi}] too wide"
            )));
        }
        let pieces = (lo..=hi)
            .map(|d| map.get(&d).cloned().unwrap_or_default())
            .collect();
        Self::new(lo, pieces)
    }

    /// Labels `{prefix}{degree}_{i}` from per-degree dimensions.
    pub fn from_dims(d_min: i32, dims: &[usize], prefix: &str) -> Self {
        let pieces = dims
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                (0..n)
                    .map(|j| format!("{prefix}{}_{j}", d_min + i as i32))
                    .collect()
            })
            .collect();
        Self::new(d_min, pieces).expect("generated labels are unique")
    }

    pub fn to_map(&self) -> BTreeMap<i32, Vec<String>> {
        self.pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, p)| (self.d_min + i as i32, p.clone()))
            .collect()
    }

    pub fn window(&self) -> (i32, i32) {
        (self.d_min, self.d_min + self.pieces.len() as i32 - 1)
    }

    pub fn dim(&self, d: i32) -> usize {
        match self.piece_index(d) {
            Some(i) => self.pieces[i].len(),
            None => 0,
        }
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    fn piece_index(&self, d: i32) -> Option<usize> {
        let i = d as i64 - self.d_min as i64;
        (i >= 0 && (i as usize) < self.pieces.len()).then_some(i as usize)
    }

    /// Flat index of the first basis element of degree `d`.
    pub fn offset(&self, d: i32) -> usize {
        match self.piece_index(d) {
            Some(i) => self.offsets[i],
            None if (d as i64) < self.d_min as i64 => 0,
            None => self.total_dim(),
        }
    }

    pub fn range(&self, d: i32) -> std::ops::Range<usize> {
        let o = self.offset(d);
        o..o + self.dim(d)
    }

    pub fn degree_of(&self, flat: usize) -> i32 {
        self.degrees[flat]
    }

    pub fn label(&self, flat: usize) -> &str {
        let d = self.degrees[flat];
        let i = self.piece_index(d).unwrap();
        &self.pieces[i][flat - self.offsets[i]]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    /// Degrees carrying a nonzero piece, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(move |(i, _)| self.d_min + i as i32)
    }

    /// Same basis with every degree moved by `by`.
    pub fn shifted(&self, by: i32) -> Self {
        let mut s = self.clone();
        s.d_min += by;
        s.degrees.iter_mut().for_each(|d| *d += by);
        s
    }

    /// Whether a flat vector is concentrated in one degree; returns it.
    pub fn homogeneous_degree(&self, v: &[Scalar]) -> Option<Option<i32>> {
        let mut deg = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => return None,
                _ => {}
            }
        }
        Some(deg)
    }
}

/// A degree-homogeneous linear map, one exact block per source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    degree: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn zero(source: &GradedVectorSpace, target: &GradedVectorSpace, degree: i32) -> Self {
        let blocks = source
            .degrees()
            .map(|d| (d, Matrix::zeros(target.dim(d + degree), source.dim(d))))
            .collect();
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks,
        }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space
            .degrees()
            .map(|d| (d, Matrix::identity(space.dim(d))))
            .collect();
        GradedMap {
            source: space.clone(),
            target: space.clone(),
            degree: 0,
            blocks,
        }
    }

    pub fn from_blocks(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        degree: i32,
        mut blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for d in blocks.keys() {
            if source.dim(*d) == 0 {
                return Err(Error::Dimension(format!(
                    "block for empty source degree {d}"
                )));
            }
        }
        for d in source.degrees() {
            let shape = (target.dim(d + degree), source.dim(d));
            match blocks.get(&d) {
                Some(m) if m.shape() != shape => {
                    return Err(Error::Dimension(format!(
                        "block at degree {d} has shape {:?}, expected {shape:?}",
                        m.shape()
                    )))
                }
                Some(_) => {}
                None => {
                    blocks.insert(d, Matrix::zeros(shape.0, shape.1));
                }
            }
        }
        Ok(GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks,
        })
    }

    /// Splits a full `target.total × source.total` matrix into blocks,
    /// rejecting entries that break homogeneity.
    pub fn from_total(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        degree: i32,
        total: &Matrix,
    ) -> Result<Self> {
        if total.shape() != (target.total_dim(), source.total_dim()) {
            return Err(Error::Dimension(format!(
                "total matrix {:?} for spaces of dims {}x{}",
                total.shape(),
                target.total_dim(),
                source.total_dim()
            )));
        }
        for r in 0..total.rows() {
            for c in 0..total.cols() {
                if !total[(r, c)].is_zero() && target.degree_of(r) != source.degree_of(c) + degree {
                    return Err(Error::DegreeWindow(format!(
                        "entry ({r},{c}) is not of degree {degree}"
                    )));
                }
            }
        }
        let mut blocks = BTreeMap::new();
        for d in source.degrees() {
            let rs = target.range(d + degree);
            let cs = source.range(d);
            let mut m = Matrix::zeros(rs.len(), cs.len());
            for (i, r) in rs.clone().enumerate() {
                for (j, c) in cs.clone().enumerate() {
                    m[(i, j)] = total[(r, c)].clone();
                }
            }
            blocks.insert(d, m);
        }
        Ok(GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks,
        })
    }

    pub fn to_total(&self) -> Matrix {
        let mut total = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (&d, m) in &self.blocks {
            let ro = self.target.offset(d + self.degree);
            let co = self.source.offset(d);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    total[(ro + i, co + j)] = m[(i, j)].clone();
                }
            }
        }
        total
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    pub fn block(&self, d: i32) -> Option<&Matrix> {
        self.blocks.get(&d)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GradedMap) -> Result<GradedMap> {
        if first.target != self.source {
            return Err(Error::Dimension(
                "composing maps through different spaces".into(),
            ));
        }
        let degree = first.degree + self.degree;
        let mut blocks = BTreeMap::new();
        for (&d, m) in &first.blocks {
            let mid = d + first.degree;
            let block = match self.blocks.get(&mid) {
                Some(n) => n.try_mul(m)?,
                None => Matrix::zeros(self.target.dim(d + degree), m.cols()),
            };
            blocks.insert(d, block);
        }
        GradedMap::from_blocks(&first.source, &self.target, degree, blocks)
    }

    fn same_shape(&self, other: &GradedMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::Dimension("adding maps of different type".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (d, m) in out.blocks.iter_mut() {
            *m = m.try_add(&other.blocks[d])?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.try_add(&other.scaled(&Scalar::from_int(-1)))
    }

    pub fn scaled(&self, s: &Scalar) -> GradedMap {
        let mut out = self.clone();
        out.blocks.values_mut().for_each(|m| *m = m.scaled(s));
        out
    }

    /// Scales the block of each source degree by `f(d)`.
    pub fn scaled_by_degree(&self, f: impl Fn(i32) -> Scalar) -> GradedMap {
        let mut out = self.clone();
        for (d, m) in out.blocks.iter_mut() {
            *m = m.scaled(&f(*d));
        }
        out
    }

    /// Same matrices, with source and target degrees moved.
    pub fn reindexed(&self, source_shift: i32, target_shift: i32) -> GradedMap {
        GradedMap {
            source: self.source.shifted(source_shift),
            target: self.target.shifted(target_shift),
            degree: self.degree + target_shift - source_shift,
            blocks: self
                .blocks
                .iter()
                .map(|(d, m)| (d + source_shift, m.clone()))
                .collect(),
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.source.total_dim() {
            return Err(Error::Dimension("vector length against graded map".into()));
        }
        let mut out = zero_vector(self.target.total_dim());
        for (&d, m) in &self.blocks {
            let cs = self.source.range(d);
            if v[cs.clone()].iter().all(Scalar::is_zero) {
                continue;
            }
            let part = m.apply(&v[cs])?;
            let ro = self.target.offset(d + self.degree);
            for (i, x) in part.into_iter().enumerate() {
                out[ro + i] += x;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> GradedVectorSpace {
        GradedVectorSpace::from_dims(-1, &[1, 2, 0, 1], "e")
    }

    #[test]
    fn flat_indexing() {
        let s = space();
        assert_eq!(s.window(), (-1, 2));
        assert_eq!(s.total_dim(), 4);
        assert_eq!(s.offset(0), 1);
        assert_eq!(s.dim(1), 0);
        assert_eq!(s.dim(7), 0);
        assert_eq!(s.degree_of(3), 2);
        assert_eq!(s.label(2), "e0_1");
        assert_eq!(s.index_of("e2_0"), Some(3));
        assert_eq!(s.degrees().collect::<Vec<_>>(), vec![-1, 0, 2]);
        assert_eq!(GradedVectorSpace::from_map(&s.to_map()).unwrap(), s);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = GradedVectorSpace::new(0, vec![vec!["a".into()], vec!["a".into()]]);
        assert!(r.is_err());
    }

    #[test]
    fn total_round_trip_and_homogeneity() {
        let s = space();
        let mut total = Matrix::zeros(4, 4);
        total[(1, 0)] = Scalar::from_int(2);
        total[(2, 0)] = Scalar::from_int(-1);
        let f = GradedMap::from_total(&s, &s, 1, &total).unwrap();
        assert_eq!(f.to_total(), total);
        total[(0, 0)] = Scalar::one();
        assert!(GradedMap::from_total(&s, &s, 1, &total).is_err());
    }

    #[test]
    fn composition_adds_degrees() {
        let s = space();
        let mut t = Matrix::zeros(4, 4);
        t[(1, 0)] = Scalar::one();
        let f = GradedMap::from_total(&s, &s, 1, &t).unwrap();
        let g = GradedMap::identity(&s);
        let h = g.after(&f).unwrap();
        assert_eq!(h, f);
        let ff = f.after(&f).unwrap();
        assert_eq!(ff.degree(), 2);
        assert!(ff.is_zero());
    }
}
