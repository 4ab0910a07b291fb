//! Text documents for every structure type: pretty-printed JSON wrapped in
//! an envelope carrying `format_version` and a `kind` tag. Rationals are
//! `"p/q"` strings. Writing is canonical, so a parsed document written back
//! out is byte-identical to the text it was parsed from whenever that text
//! was itself produced here.

use std::collections::{BTreeMap, HashMap};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::category::{AInftyCategory, Presentation};
use crate::dg::Complex;
use crate::error::{Error, Result};
use crate::functor::AInftyFunctor;
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::hpt::SDRData;
use crate::linalg::Matrix;
use crate::multilinear::{Chain, Gen, MultilinearMap, SparseVec};
use crate::scalar::Scalar;
use crate::shifts::{ShiftConvention, SumObject};
use crate::twisted::{Tw, TwMorphism, TwistedComplex};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<T> {
    format_version: u32,
    kind: String,
    data: T,
}

#[derive(Deserialize)]
struct Header {
    format_version: u32,
    kind: String,
}

/// A structure with a text representation.
pub trait Document: Sized {
    const KIND: &'static str;
    type Body: Serialize + DeserializeOwned;

    fn to_body(&self) -> Self::Body;
    fn from_body(body: Self::Body) -> Result<Self>;
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn to_text<D: Document>(doc: &D) -> String {
    let env = Envelope {
        format_version: FORMAT_VERSION,
        kind: D::KIND.to_string(),
        data: doc.to_body(),
    };
    let mut s = serde_json::to_string_pretty(&env).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_text<D: Document>(text: &str) -> Result<D> {
    let kind = peek_kind(text)?;
    if kind != D::KIND {
        return Err(Error::Parse(format!(
            "expected a {:?} document, found {kind:?}",
            D::KIND
        )));
    }
    let env: Envelope<D::Body> = serde_json::from_str(text).map_err(parse_err)?;
    D::from_body(env.data)
}

/// The `kind` tag, after checking the format version.
pub fn peek_kind(text: &str) -> Result<String> {
    let h: Header = serde_json::from_str(text).map_err(parse_err)?;
    if h.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {}",
            h.format_version
        )));
    }
    Ok(h.kind)
}

/// `[source, target, label]` of one basis element.
pub type GenBody = (String, String, String);
pub type Coefficients = Vec<(String, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBody {
    pub min_degree: i32,
    /// Labels per degree, starting at `min_degree`.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomBody {
    pub source: String,
    pub target: String,
    pub min_degree: i32,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryBody {
    pub chain: Vec<GenBody>,
    pub output: Coefficients,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableBody {
    pub arity: usize,
    pub entries: Vec<EntryBody>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBody {
    pub presentation: Presentation,
    pub arity_bound: usize,
    pub objects: Vec<String>,
    pub homs: Vec<HomBody>,
    pub products: Vec<TableBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Vec<Coefficients>>,
}

fn space_body(s: &GradedVectorSpace) -> SpaceBody {
    let (lo, hi) = s.window();
    let basis = (lo..=hi)
        .map(|d| s.range(d).map(|i| s.label(i).to_string()).collect())
        .collect();
    SpaceBody {
        min_degree: lo,
        basis,
    }
}

fn space_from_body(b: SpaceBody) -> Result<GradedVectorSpace> {
    if b.basis.len() > 4096 {
        return Err(Error::Malformed("degree window too wide".into()));
    }
    GradedVectorSpace::new(b.min_degree, b.basis)
}

fn coefficients(space: &GradedVectorSpace, v: &SparseVec) -> Coefficients {
    v.iter()
        .map(|(i, x)| (space.label(*i as usize).to_string(), x.clone()))
        .collect()
}

fn sparse_from(space: &GradedVectorSpace, c: Coefficients) -> Result<SparseVec> {
    let mut seen = std::collections::HashSet::new();
    let mut pairs = Vec::with_capacity(c.len());
    for (l, x) in c {
        let i = space
            .index_of(&l)
            .ok_or_else(|| Error::Malformed(format!("unknown basis label {l:?}")))?;
        if !seen.insert(i) {
            return Err(Error::Malformed(format!("label {l:?} listed twice")));
        }
        pairs.push((i as u32, x));
    }
    Ok(SparseVec::from_pairs(pairs))
}

fn dense_coefficients(space: &GradedVectorSpace, v: &[Scalar]) -> Coefficients {
    coefficients(space, &SparseVec::from_dense(v))
}

fn dense_from(space: &GradedVectorSpace, c: Coefficients) -> Result<Vec<Scalar>> {
    Ok(sparse_from(space, c)?.to_dense(space.total_dim()))
}

/// Name lookup shared by the category parsers.
struct Names<'a> {
    c: &'a AInftyCategory,
    index: HashMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(c: &'a AInftyCategory) -> Self {
        Names {
            c,
            index: c
                .objects()
                .iter()
                .enumerate()
                .map(|(i, o)| (o.as_str(), i))
                .collect(),
        }
    }

    fn object(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    fn gen(&self, g: &GenBody) -> Result<Gen> {
        let (s, t) = (self.object(&g.0)?, self.object(&g.1)?);
        let i = self.c.hom(s, t).index_of(&g.2).ok_or_else(|| {
            Error::Malformed(format!(
                "no basis element {:?} in hom({}, {})",
                g.2, g.0, g.1
            ))
        })?;
        Ok(Gen::new(s, t, i))
    }

    fn chain(&self, chain: &[GenBody]) -> Result<Chain> {
        chain.iter().map(|g| self.gen(g)).collect()
    }
}

fn gen_body(c: &AInftyCategory, g: Gen) -> GenBody {
    let o = c.objects();
    (
        o[g.src as usize].clone(),
        o[g.tgt as usize].clone(),
        c.label(g).to_string(),
    )
}

/// A table keyed by chains of `source`, with outputs in `target` hom spaces
/// chosen by `out_hom`.
fn table_body(
    source: &AInftyCategory,
    target: &AInftyCategory,
    out_hom: impl Fn(u32, u32) -> (usize, usize),
    m: &MultilinearMap,
) -> TableBody {
    let entries = m
        .iter()
        .map(|(chain, out)| {
            let (s, t) = out_hom(chain[0].src, chain[chain.len() - 1].tgt);
            EntryBody {
                chain: chain.iter().map(|g| gen_body(source, *g)).collect(),
                output: coefficients(target.hom(s, t), out),
            }
        })
        .collect();
    TableBody {
        arity: m.arity(),
        entries,
    }
}

fn table_from_body(
    source: &Names,
    target: &AInftyCategory,
    out_hom: impl Fn(u32, u32) -> (usize, usize),
    degree: i32,
    body: TableBody,
) -> Result<MultilinearMap> {
    if body.arity == 0 {
        return Err(Error::Malformed("tables have arity at least one".into()));
    }
    let mut m = MultilinearMap::new(body.arity, degree);
    for e in body.entries {
        let chain = source.chain(&e.chain)?;
        if chain.len() != body.arity {
            return Err(Error::Arity {
                expected: body.arity,
                got: chain.len(),
            });
        }
        if m.get(&chain).is_some() {
            return Err(Error::Malformed(format!(
                "chain {:?} listed twice",
                e.chain
            )));
        }
        if !crate::multilinear::is_composable(&chain) {
            return Err(Error::Composability(format!("{:?}", e.chain)));
        }
        let (s, t) = out_hom(chain[0].src, chain[chain.len() - 1].tgt);
        let out = sparse_from(target.hom(s, t), e.output)?;
        m.set(chain, out)?;
    }
    Ok(m)
}

/// Homs in row-major order, each pair exactly once.
fn homs_from_bodies(objects: &[String], homs: Vec<HomBody>) -> Result<Vec<GradedVectorSpace>> {
    let n = objects.len();
    let index: HashMap<&str, usize> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    let mut out: Vec<Option<GradedVectorSpace>> = vec![None; n * n];
    for h in homs {
        let s = *index
            .get(h.source.as_str())
            .ok_or_else(|| Error::UnknownObject(h.source.clone()))?;
        let t = *index
            .get(h.target.as_str())
            .ok_or_else(|| Error::UnknownObject(h.target.clone()))?;
        if out[s * n + t].is_some() {
            return Err(Error::Malformed(format!(
                "hom({}, {}) listed twice",
                h.source, h.target
            )));
        }
        out[s * n + t] = Some(space_from_body(SpaceBody {
            min_degree: h.min_degree,
            basis: h.basis,
        })?);
    }
    out.into_iter()
        .enumerate()
        .map(|(p, h)| {
            h.ok_or_else(|| {
                Error::Malformed(format!(
                    "hom({}, {}) missing",
                    objects[p / n],
                    objects[p % n]
                ))
            })
        })
        .collect()
}

fn hom_bodies(objects: &[String], homs: &[GradedVectorSpace]) -> Vec<HomBody> {
    let n = objects.len();
    homs.iter()
        .enumerate()
        .map(|(p, h)| {
            let s = space_body(h);
            HomBody {
                source: objects[p / n].clone(),
                target: objects[p % n].clone(),
                min_degree: s.min_degree,
                basis: s.basis,
            }
        })
        .collect()
}

impl Document for AInftyCategory {
    const KIND: &'static str = "category";
    type Body = CategoryBody;

    fn to_body(&self) -> CategoryBody {
        let same = |s: u32, t: u32| (s as usize, t as usize);
        CategoryBody {
            presentation: self.presentation(),
            arity_bound: self.arity_bound(),
            objects: self.objects().to_vec(),
            homs: hom_bodies(self.objects(), self.homs()),
            products: self
                .products()
                .iter()
                .map(|m| table_body(self, self, same, m))
                .collect(),
            units: self.units().map(|us| {
                us.iter()
                    .enumerate()
                    .map(|(x, u)| coefficients(self.hom(x, x), u))
                    .collect()
            }),
        }
    }

    fn from_body(b: CategoryBody) -> Result<Self> {
        if b.arity_bound == 0 || b.arity_bound > 64 {
            return Err(Error::Malformed(format!(
                "arity bound {} outside 1..=64",
                b.arity_bound
            )));
        }
        let homs = homs_from_bodies(&b.objects, b.homs)?;
        let mut c =
            AInftyCategory::with_zero_products(b.objects, homs, b.presentation, b.arity_bound)?;
        let names_src = c.clone();
        let names = Names::new(&names_src);
        let same = |s: u32, t: u32| (s as usize, t as usize);
        let mut seen = vec![false; b.arity_bound];
        for t in b.products {
            let k = t.arity;
            if k == 0 || k > b.arity_bound {
                return Err(Error::ArityBound {
                    requested: k,
                    allowed: b.arity_bound,
                });
            }
            if std::mem::replace(&mut seen[k - 1], true) {
                return Err(Error::Malformed(format!("two tables of arity {k}")));
            }
            let m = table_from_body(
                &names,
                &names_src,
                same,
                b.presentation.product_degree(k),
                t,
            )?;
            c.set_product(k, m)?;
        }
        if let Some(units) = b.units {
            if units.len() != names_src.n_objects() {
                return Err(Error::Malformed("one unit per object required".into()));
            }
            let us = units
                .into_iter()
                .enumerate()
                .map(|(x, u)| sparse_from(names_src.hom(x, x), u))
                .collect::<Result<Vec<_>>>()?;
            c = c.with_units(Some(us))?;
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorBody {
    pub source: CategoryBody,
    pub target: CategoryBody,
    /// `[source object, target object]`, in source order.
    pub object_map: Vec<(String, String)>,
    pub components: Vec<TableBody>,
}

impl Document for AInftyFunctor {
    const KIND: &'static str = "functor";
    type Body = FunctorBody;

    fn to_body(&self) -> FunctorBody {
        let (s, t) = (self.source(), self.target());
        let map = self.object_map();
        let image = |a: u32, b: u32| (map[a as usize], map[b as usize]);
        FunctorBody {
            source: s.to_body(),
            target: t.to_body(),
            object_map: s
                .objects()
                .iter()
                .zip(map)
                .map(|(x, &y)| (x.clone(), t.objects()[y].clone()))
                .collect(),
            components: self
                .components()
                .iter()
                .map(|m| table_body(s, t, image, m))
                .collect(),
        }
    }

    fn from_body(b: FunctorBody) -> Result<Self> {
        let source = AInftyCategory::from_body(b.source)?.to_suspended();
        let target = AInftyCategory::from_body(b.target)?.to_suspended();
        let (sn, tn) = (Names::new(&source), Names::new(&target));
        let mut map = vec![None; source.n_objects()];
        for (x, y) in &b.object_map {
            let (i, j) = (sn.object(x)?, tn.object(y)?);
            if map[i].replace(j).is_some() {
                return Err(Error::Malformed(format!("object {x:?} mapped twice")));
            }
        }
        let map: Vec<usize> = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::Malformed(format!("object {:?} not mapped", source.objects()[i]))
                })
            })
            .collect::<Result<_>>()?;
        let image = |a: u32, c: u32| (map[a as usize], map[c as usize]);
        let mut components = Vec::with_capacity(b.components.len());
        for (i, t) in b.components.into_iter().enumerate() {
            if t.arity != i + 1 {
                return Err(Error::Malformed(format!(
                    "component {} listed with arity {}",
                    i + 1,
                    t.arity
                )));
            }
            components.push(table_from_body(&sn, &target, image, 0, t)?);
        }
        AInftyFunctor::new(&source, &target, map, components)
    }
}

/// `[from label, to label, coefficient]` of one matrix entry.
pub type MapEntry = (String, String, Scalar);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdrPairBody {
    pub source: String,
    pub target: String,
    pub small: SpaceBody,
    pub iota: Vec<MapEntry>,
    pub pi: Vec<MapEntry>,
    pub h: Vec<MapEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdrBody {
    /// The unsuspended category the retract is taken in.
    pub category: CategoryBody,
    pub pairs: Vec<SdrPairBody>,
}

fn map_entries(m: &GradedMap) -> Vec<MapEntry> {
    let total = m.to_total();
    let mut out = Vec::new();
    for c in 0..total.cols() {
        for r in 0..total.rows() {
            if !total[(r, c)].is_zero() {
                out.push((
                    m.source().label(c).to_string(),
                    m.target().label(r).to_string(),
                    total[(r, c)].clone(),
                ));
            }
        }
    }
    out
}

fn map_from_entries(
    source: &GradedVectorSpace,
    target: &GradedVectorSpace,
    degree: i32,
    entries: Vec<MapEntry>,
) -> Result<GradedMap> {
    let mut total = Matrix::zeros(target.total_dim(), source.total_dim());
    let mut seen = std::collections::HashSet::new();
    for (from, to, x) in entries {
        let c = source
            .index_of(&from)
            .ok_or_else(|| Error::Malformed(format!("unknown label {from:?}")))?;
        let r = target
            .index_of(&to)
            .ok_or_else(|| Error::Malformed(format!("unknown label {to:?}")))?;
        if !seen.insert((r, c)) {
            return Err(Error::Malformed(format!(
                "entry ({from}, {to}) listed twice"
            )));
        }
        total[(r, c)] = x;
    }
    GradedMap::from_total(source, target, degree, &total)
}

impl Document for SDRData {
    const KIND: &'static str = "sdr";
    type Body = SdrBody;

    fn to_body(&self) -> SdrBody {
        let big = self.big();
        let n = big.n_objects();
        let o = big.objects();
        let pairs = (0..n * n)
            .map(|p| {
                let (x, y) = (p / n, p % n);
                SdrPairBody {
                    source: o[x].clone(),
                    target: o[y].clone(),
                    small: space_body(self.small_hom(x, y)),
                    iota: map_entries(self.iota(x, y)),
                    pi: map_entries(self.pi(x, y)),
                    h: map_entries(self.h(x, y)),
                }
            })
            .collect();
        SdrBody {
            category: big.to_body(),
            pairs,
        }
    }

    fn from_body(b: SdrBody) -> Result<Self> {
        let big = AInftyCategory::from_body(b.category)?.to_unsuspended();
        let n = big.n_objects();
        let names = Names::new(&big);
        let mut slots: Vec<Option<(GradedVectorSpace, GradedMap, GradedMap, GradedMap)>> =
            vec![None; n * n];
        for p in b.pairs {
            let (x, y) = (names.object(&p.source)?, names.object(&p.target)?);
            if slots[x * n + y].is_some() {
                return Err(Error::Malformed(format!(
                    "pair ({}, {}) listed twice",
                    p.source, p.target
                )));
            }
            let a = big.hom(x, y);
            let small = space_from_body(p.small)?;
            let iota = map_from_entries(&small, a, 0, p.iota)?;
            let pi = map_from_entries(a, &small, 0, p.pi)?;
            let h = map_from_entries(a, a, -1, p.h)?;
            slots[x * n + y] = Some((small, iota, pi, h));
        }
        let mut small = Vec::with_capacity(n * n);
        let (mut iota, mut pi, mut h) = (Vec::new(), Vec::new(), Vec::new());
        for (p, s) in slots.into_iter().enumerate() {
            let (b, i, q, k) = s.ok_or_else(|| {
                Error::Malformed(format!(
                    "pair ({}, {}) missing",
                    big.objects()[p / n],
                    big.objects()[p % n]
                ))
            })?;
            small.push(b);
            iota.push(i);
            pi.push(q);
            h.push(k);
        }
        SDRData::new(&big, small, iota, pi, h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialBody {
    /// Source degree `i` of `d^i`.
    pub degree: i32,
    pub rows: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexBody {
    pub name: String,
    pub min_degree: i32,
    pub dims: Vec<usize>,
    pub differentials: Vec<DifferentialBody>,
}

/// Named bounded complexes, the input of the DG construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complexes(pub Vec<(String, Complex)>);

impl Document for Complexes {
    const KIND: &'static str = "complexes";
    type Body = Vec<ComplexBody>;

    fn to_body(&self) -> Vec<ComplexBody> {
        self.0
            .iter()
            .map(|(name, c)| ComplexBody {
                name: name.clone(),
                min_degree: c.window().0,
                dims: c.dims().to_vec(),
                differentials: c
                    .differentials()
                    .into_iter()
                    .map(|(i, m)| DifferentialBody {
                        degree: i,
                        rows: (0..m.rows()).map(|r| m.row(r).to_vec()).collect(),
                    })
                    .collect(),
            })
            .collect()
    }

    fn from_body(b: Vec<ComplexBody>) -> Result<Self> {
        let mut out = Vec::with_capacity(b.len());
        let mut seen = std::collections::HashSet::new();
        for c in b {
            if !seen.insert(c.name.clone()) {
                return Err(Error::Malformed(format!("duplicate complex {:?}", c.name)));
            }
            if c.dims.len() > 4096 || c.dims.iter().any(|&d| d > 4096) {
                return Err(Error::Malformed(format!(
                    "complex {:?} is too large",
                    c.name
                )));
            }
            let mut diffs = BTreeMap::new();
            for d in c.differentials {
                let cols = c
                    .dims
                    .get((d.degree as i64 - c.min_degree as i64) as usize)
                    .copied()
                    .unwrap_or(0);
                let m = if d.rows.is_empty() {
                    Matrix::zeros(0, cols)
                } else {
                    Matrix::from_rows(d.rows)?
                };
                if diffs.insert(d.degree, m).is_some() {
                    return Err(Error::Malformed(format!(
                        "differential in degree {} listed twice",
                        d.degree
                    )));
                }
            }
            out.push((c.name, Complex::new(c.min_degree, c.dims, diffs)?));
        }
        Ok(Complexes(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockBody {
    /// Source summand position.
    pub row: usize,
    /// Target summand position.
    pub col: usize,
    pub coefficients: Coefficients,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwComplexBody {
    pub name: String,
    pub summands: Vec<(String, i32)>,
    pub phi: Vec<BlockBody>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwMorphismBody {
    pub name: String,
    pub source: String,
    pub target: String,
    pub blocks: Vec<BlockBody>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedBody {
    pub convention: ShiftConvention,
    pub base: CategoryBody,
    pub complexes: Vec<TwComplexBody>,
    #[serde(default)]
    pub morphisms: Vec<TwMorphismBody>,
}

/// A named morphism between two complexes of a [`TwistedDocument`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMorphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub morphism: TwMorphism,
}

/// Twisted complexes over a base category, with morphisms between them.
#[derive(Clone, Debug)]
pub struct TwistedDocument {
    pub tw: Tw,
    pub complexes: Vec<TwistedComplex>,
    pub morphisms: Vec<NamedMorphism>,
}

impl TwistedDocument {
    pub fn complex(&self, name: &str) -> Option<&TwistedComplex> {
        self.complexes.iter().find(|c| c.name == name)
    }

    pub fn morphism(&self, name: &str) -> Option<&NamedMorphism> {
        self.morphisms.iter().find(|m| m.name == name)
    }
}

fn block_bodies(tw: &Tw, m: &TwMorphism) -> Vec<BlockBody> {
    let (src, tgt) = (
        tw.resolve(&m.source).expect("resolved"),
        tw.resolve(&m.target).expect("resolved"),
    );
    m.blocks
        .iter()
        .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
        .map(|(&(i, j), v)| BlockBody {
            row: i,
            col: j,
            coefficients: dense_coefficients(&tw.block_space(src[i], tgt[j]), v),
        })
        .collect()
}

fn morphism_from_blocks(
    tw: &Tw,
    source: &SumObject,
    target: &SumObject,
    blocks: Vec<BlockBody>,
) -> Result<TwMorphism> {
    let (src, tgt) = (tw.resolve(source)?, tw.resolve(target)?);
    let mut m = TwMorphism::zero(source, target);
    for b in blocks {
        if b.row >= src.len() || b.col >= tgt.len() {
            return Err(Error::Malformed(format!(
                "block ({}, {}) outside the summands",
                b.row, b.col
            )));
        }
        if m.blocks.contains_key(&(b.row, b.col)) {
            return Err(Error::Malformed(format!(
                "block ({}, {}) listed twice",
                b.row, b.col
            )));
        }
        let v = dense_from(&tw.block_space(src[b.row], tgt[b.col]), b.coefficients)?;
        m.blocks.insert((b.row, b.col), v);
    }
    Ok(m.normalized())
}

impl Document for TwistedDocument {
    const KIND: &'static str = "twisted";
    type Body = TwistedBody;

    fn to_body(&self) -> TwistedBody {
        let tw = &self.tw;
        TwistedBody {
            convention: tw.convention(),
            base: tw.base().to_body(),
            complexes: self
                .complexes
                .iter()
                .map(|t| TwComplexBody {
                    name: t.name.clone(),
                    summands: t.object.summands.clone(),
                    phi: block_bodies(tw, &t.phi),
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| TwMorphismBody {
                    name: m.name.clone(),
                    source: self.complexes[m.source].name.clone(),
                    target: self.complexes[m.target].name.clone(),
                    blocks: block_bodies(tw, &m.morphism),
                })
                .collect(),
        }
    }

    fn from_body(b: TwistedBody) -> Result<Self> {
        let base = AInftyCategory::from_body(b.base)?;
        let tw = Tw::new(&base, b.convention);
        let mut complexes: Vec<TwistedComplex> = Vec::with_capacity(b.complexes.len());
        for c in b.complexes {
            if complexes.iter().any(|t| t.name == c.name) {
                return Err(Error::Malformed(format!(
                    "duplicate twisted complex {:?}",
                    c.name
                )));
            }
            let object = SumObject::new(c.summands)?;
            let phi = morphism_from_blocks(&tw, &object, &object, c.phi)?;
            complexes.push(TwistedComplex {
                name: c.name,
                object,
                phi,
            });
        }
        let find = |name: &str| {
            complexes
                .iter()
                .position(|t| t.name == name)
                .ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        let mut morphisms: Vec<NamedMorphism> = Vec::with_capacity(b.morphisms.len());
        for m in b.morphisms {
            if morphisms.iter().any(|n| n.name == m.name) {
                return Err(Error::Malformed(format!("duplicate morphism {:?}", m.name)));
            }
            let (s, t) = (find(&m.source)?, find(&m.target)?);
            let morphism =
                morphism_from_blocks(&tw, &complexes[s].object, &complexes[t].object, m.blocks)?;
            morphisms.push(NamedMorphism {
                name: m.name,
                source: s,
                target: t,
                morphism,
            });
        }
        Ok(TwistedDocument {
            tw,
            complexes,
            morphisms,
        })
    }
}

/// One generated instance as listed in a corpus manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: String,
    pub objects: Vec<String>,
    pub total_dim: usize,
    /// File names relative to the manifest, by kind.
    pub files: BTreeMap<String, String>,
    /// The minimal model has a nonzero ternary product.
    pub m3: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub seed: u64,
    pub size: usize,
    pub arity_bound: usize,
    pub model_arity: usize,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn m3_instances(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.m3)
    }
}

impl Document for Manifest {
    const KIND: &'static str = "manifest";
    type Body = Manifest;

    fn to_body(&self) -> Manifest {
        self.clone()
    }

    fn from_body(b: Manifest) -> Result<Self> {
        Ok(b)
    }
}

/// A command report with stable keys; `details` is command specific.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub summary: Vec<String>,
    pub details: serde_json::Value,
}

impl Document for Report {
    const KIND: &'static str = "report";
    type Body = Report;

    fn to_body(&self) -> Report {
        self.clone()
    }

    fn from_body(b: Report) -> Result<Self> {
        Ok(b)
    }
}
