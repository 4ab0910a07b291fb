//! Seeded random corpora: bounded complexes, their DG categories, Hodge
//! retracts and minimal models.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::category::AInftyCategory;
use crate::dg::{build_dg_category, Complex};
use crate::error::Result;
use crate::functor::AInftyFunctor;
use crate::hpt::{hodge_sdr, transfer, SDRData};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Complexes per instance, at least one.
    pub max_complexes: usize,
    /// Bound on the summed dimension of all complexes of one instance.
    pub max_total_dim: usize,
    /// Bound on the dimension of a single complex.
    pub max_complex_dim: usize,
    pub min_degree: i32,
    pub max_degree: i32,
    /// Arity bound of the DG categories.
    pub arity_bound: usize,
    /// Arity of the transferred minimal models.
    pub model_arity: usize,
    /// Chance per hom pair of conjugating the Hodge retract by a random
    /// chain automorphism; without it the transferred higher products vanish.
    pub gauge_percent: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_complexes: 4,
            max_total_dim: 8,
            max_complex_dim: 4,
            min_degree: -2,
            max_degree: 2,
            arity_bound: 5,
            model_arity: 5,
            gauge_percent: 50,
        }
    }
}

/// `L·U` with unit triangular factors and entries in {−1, 0, 1}: always
/// invertible over the integers.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = Scalar::from_int(rng.gen_range(-1..=1));
            u[(j, i)] = Scalar::from_int(rng.gen_range(-1..=1));
        }
    }
    l.try_mul(&u).expect("square factors")
}

/// A sum of elementary complexes (`Q` in one degree, or `Q → Q` by the
/// identity) with a random change of basis in every degree.
pub fn random_complex(rng: &mut ChaCha8Rng, dim: usize, lo: i32, hi: i32) -> Complex {
    let mut dims: BTreeMap<i32, usize> = (lo..=hi).map(|i| (i, 0)).collect();
    // pairs (i, position of the source in degree i, position of the target in degree i+1)
    let mut arrows: Vec<(i32, usize, usize)> = Vec::new();
    let mut left = dim.max(1);
    while left > 0 {
        if left >= 2 && hi > lo && rng.gen_bool(0.5) {
            let i = rng.gen_range(lo..hi);
            let s = dims[&i];
            let t = dims[&(i + 1)];
            *dims.get_mut(&i).unwrap() += 1;
            *dims.get_mut(&(i + 1)).unwrap() += 1;
            arrows.push((i, s, t));
            left -= 2;
        } else {
            let i = rng.gen_range(lo..=hi);
            *dims.get_mut(&i).unwrap() += 1;
            left -= 1;
        }
    }
    let mut diffs: BTreeMap<i32, Matrix> = BTreeMap::new();
    for &(i, s, t) in &arrows {
        let m = diffs
            .entry(i)
            .or_insert_with(|| Matrix::zeros(dims[&(i + 1)], dims[&i]));
        m[(t, s)] = Scalar::one();
    }
    let changes: BTreeMap<i32, (Matrix, Matrix)> = dims
        .iter()
        .map(|(&i, &n)| {
            let g = random_unimodular(rng, n);
            let inv = g.inverse().expect("unimodular");
            (i, (g, inv))
        })
        .collect();
    let diffs: BTreeMap<i32, Matrix> = diffs
        .into_iter()
        .map(|(i, d)| {
            let conj = changes[&(i + 1)]
                .0
                .try_mul(&d)
                .and_then(|m| m.try_mul(&changes[&i].1));
            (i, conj.expect("shapes agree"))
        })
        .collect();
    // trim the window to the support
    let support: Vec<i32> = dims
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(&i, _)| i)
        .collect();
    let (a, b) = (support[0], support[support.len() - 1]);
    let dim_list: Vec<usize> = (a..=b).map(|i| dims[&i]).collect();
    let diffs = diffs
        .into_iter()
        .filter(|(i, _)| *i >= a && *i < b)
        .collect();
    Complex::new(a, dim_list, diffs).expect("conjugated differentials square to zero")
}

/// Named complexes for one instance.
pub fn random_instance(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Vec<(String, Complex)> {
    let count = rng.gen_range(1..=cfg.max_complexes.clamp(1, NAMES.len()));
    let mut budget = cfg.max_total_dim.max(count);
    let mut out = Vec::with_capacity(count);
    for (k, name) in NAMES.iter().take(count).enumerate() {
        let remaining = count - k - 1;
        let cap = (budget - remaining).min(cfg.max_complex_dim);
        let dim = rng.gen_range(1..=cap.max(1));
        budget -= dim;
        out.push((
            name.to_string(),
            random_complex(rng, dim, cfg.min_degree, cfg.max_degree),
        ));
    }
    out
}

/// One corpus entry with everything derived from it.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub complexes: Vec<(String, Complex)>,
    pub category: AInftyCategory,
    pub sdr: SDRData,
    pub model: AInftyCategory,
    pub functor: AInftyFunctor,
}

impl CorpusEntry {
    /// Whether the minimal model has a nonzero ternary product.
    pub fn has_m3(&self) -> bool {
        self.model.product(3).is_some_and(|m| !m.is_zero())
    }
}

/// Entry over the plain Hodge retract.
pub fn build_entry(
    name: String,
    complexes: Vec<(String, Complex)>,
    cfg: &GeneratorConfig,
) -> Result<CorpusEntry> {
    let category = build_dg_category(&complexes, cfg.arity_bound)?;
    let sdr = hodge_sdr(&category)?;
    finish_entry(name, complexes, category, sdr, cfg)
}

/// Entry over a Hodge retract gauged at random pairs, see [`random_gauge`].
pub fn build_gauged_entry(
    rng: &mut ChaCha8Rng,
    name: String,
    complexes: Vec<(String, Complex)>,
    cfg: &GeneratorConfig,
) -> Result<CorpusEntry> {
    let category = build_dg_category(&complexes, cfg.arity_bound)?;
    let sdr = random_gauge(rng, hodge_sdr(&category)?, cfg.gauge_percent)?;
    finish_entry(name, complexes, category, sdr, cfg)
}

fn finish_entry(
    name: String,
    complexes: Vec<(String, Complex)>,
    category: AInftyCategory,
    sdr: SDRData,
    cfg: &GeneratorConfig,
) -> Result<CorpusEntry> {
    let (model, functor) = transfer(&sdr, cfg.model_arity)?;
    Ok(CorpusEntry {
        name,
        complexes,
        category,
        sdr,
        model,
        functor,
    })
}

/// Conjugates a retract with zero small differential by `Id + b λ π` on
/// each pair with probability `percent`/100, with `b` a random nonzero boundary and
/// `λ` a random functional in a common degree.
pub fn random_gauge(rng: &mut ChaCha8Rng, mut sdr: SDRData, percent: u32) -> Result<SDRData> {
    let n = sdr.n_objects();
    for x in 0..n {
        for y in 0..n {
            if !rng.gen_ratio(percent.min(100), 100) {
                continue;
            }
            let d = sdr.big_differential(x, y);
            let big = sdr.big().hom(x, y).clone();
            let small = sdr.small_hom(x, y).clone();
            let degrees: Vec<i32> = small
                .degrees()
                .filter(|&q| d.block(q - 1).is_some_and(|m| !m.is_zero()))
                .collect();
            if degrees.is_empty() {
                continue;
            }
            let q = degrees[rng.gen_range(0..degrees.len())];
            let mut pre = vec![Scalar::zero(); big.total_dim()];
            let mut b = pre.clone();
            while b.iter().all(Scalar::is_zero) {
                for k in big.range(q - 1) {
                    pre[k] = Scalar::from_int(rng.gen_range(-1..=1));
                }
                b = d.apply(&pre)?;
            }
            let mut lambda = vec![Scalar::zero(); small.total_dim()];
            for k in small.range(q) {
                lambda[k] = Scalar::from_int(rng.gen_range(-1..=1));
            }
            sdr = sdr.gauged(x, y, &b, &lambda)?;
        }
    }
    Ok(sdr)
}

/// Seed of the independent stream used for gauging.
fn gauge_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// `size` entries, reproducible from `seed`. The complexes agree with
/// [`generate_complexes`] for the same seed.
pub fn generate_corpus(seed: u64, size: usize, cfg: &GeneratorConfig) -> Result<Vec<CorpusEntry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauge_rng = ChaCha8Rng::seed_from_u64(gauge_seed(seed));
    (0..size)
        .map(|i| {
            let complexes = random_instance(&mut rng, cfg);
            build_gauged_entry(&mut gauge_rng, format!("instance-{i:03}"), complexes, cfg)
        })
        .collect()
}

/// Just the complexes, for callers that build the rest lazily.
pub fn generate_complexes(
    seed: u64,
    size: usize,
    cfg: &GeneratorConfig,
) -> Vec<Vec<(String, Complex)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| random_instance(&mut rng, cfg)).collect()
}
