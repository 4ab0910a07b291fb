//! Acceptance suite: one PASS/FAIL line per criterion, exact equality
//! throughout. Runs without the test harness so the lines always print.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ainfty::category::AInftyCategory;
use ainfty::comparison::{compare_dg_with_enlargement, demo_complexes, demo_dg};
use ainfty::dg::{build_dg_category, differential, shift_morphism, Complex, HomBasis};
use ainfty::functor::check_functor;
use ainfty::generate::{generate_corpus, CorpusEntry, GeneratorConfig};
use ainfty::graded::GradedMap;
use ainfty::io::{
    from_text, to_text, Complexes, Document, Manifest, ManifestEntry, NamedMorphism, Report,
    TwistedDocument,
};
use ainfty::linalg::{zero_vector, Matrix, Vector};
use ainfty::multilinear::{Gen, HomVec, MultilinearMap};
use ainfty::relations::check_relations;
use ainfty::shifts::{
    hpt_square_check, hpt_square_check_paired, induce_functor, induce_functor_with, LiftSign,
    ShiftConvention, SumObject,
};
use ainfty::twisted::{Tw, TwMorphism, TwistedComplex};
use ainfty::{Result, Scalar};

const SEED: u64 = 1;
const SIZE: usize = 25;
const SHIFTS: [i32; 3] = [-1, 0, 1];
const CONVENTIONS: [ShiftConvention; 2] = [ShiftConvention::One, ShiftConvention::Two];

struct Suite {
    failed: usize,
}

impl Suite {
    fn line(&mut self, id: &str, title: &str, outcome: Result<(bool, String)>) {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            self.failed += 1;
        }
        println!(
            "{} [{id}] {title}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

fn main() {
    let t = Instant::now();
    let cfg = GeneratorConfig::default();
    let corpus = generate_corpus(SEED, SIZE, &cfg).expect("corpus builds");
    println!(
        "corpus: {SIZE} instances from seed {SEED}, built in {:.2?}",
        t.elapsed()
    );
    let mut suite = Suite { failed: 0 };
    let mutants = mutants(&corpus);
    suite.line(
        "1",
        "relation soundness",
        relation_soundness(&corpus, &mutants),
    );
    suite.line(
        "2",
        "presentation equivalence",
        presentation_equivalence(&corpus, &mutants),
    );
    suite.line("3", "transfer correctness", transfer_correctness(&corpus));
    suite.line("4", "transfer commutes with enlargement", square(&corpus));
    suite.line("5", "induced functors", induced_functors(&corpus));
    suite.line("6", "shift functor", shift_functor(&corpus));
    suite.line("7", "twisted complexes and cones", cones(&corpus));
    suite.line(
        "8",
        "DG category equals the convention-2 enlargement",
        dg_equals_tilde2(&corpus),
    );
    suite.line("9", "determinism and round trips", determinism(&corpus));
    match unsigned_lift(&corpus) {
        Ok(s) => println!("INFO unsigned convention-2 functor lift: {s}"),
        Err(e) => println!("INFO unsigned convention-2 functor lift: error {e}"),
    }
    println!("acceptance finished in {:.2?}", t.elapsed());
    if suite.failed > 0 {
        println!("{} criterion(s) failed", suite.failed);
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: a hand-expanded oracle for DG data in suspended form.

fn hv(g: Gen, dim: usize) -> HomVec {
    HomVec::basis(g.src as usize, g.tgt as usize, dim, g.idx as usize)
}

fn bmul(c: &AInftyCategory, k: usize, inputs: &[HomVec]) -> HomVec {
    c.eval(k, inputs).expect("composable")
}

fn minus_if(odd: bool, v: HomVec) -> HomVec {
    if odd {
        v.scaled(&Scalar::from_int(-1))
    } else {
        v
    }
}

fn sum(vs: Vec<HomVec>) -> HomVec {
    let mut it = vs.into_iter();
    let mut acc = it.next().expect("nonempty");
    for v in it {
        acc.add_assign(&v);
    }
    acc
}

/// For a suspended category with products of arity at most two:
/// `b₁b₁`, `b₁b₂ + b₂(b₁⊗1) ± b₂(1⊗b₁)` and `b₂(b₂⊗1) ± b₂(1⊗b₂)`
/// with the sign `(−1)^{|ā|}`, on every basis chain.
fn dg_oracle(c: &AInftyCategory) -> bool {
    let n = c.n_objects();
    let dim = |s: usize, t: usize| c.dim(s as u32, t as u32);
    let gens = |s: usize, t: usize| (0..dim(s, t)).map(move |i| Gen::new(s, t, i));
    for x in 0..n {
        for y in 0..n {
            for a in gens(x, y) {
                let da = bmul(c, 1, &[hv(a, dim(x, y))]);
                if !bmul(c, 1, std::slice::from_ref(&da)).is_zero() {
                    return false;
                }
                let sa = c.degree(a) % 2 != 0;
                for z in 0..n {
                    for b in gens(y, z) {
                        let (va, vb) = (hv(a, dim(x, y)), hv(b, dim(y, z)));
                        let db = bmul(c, 1, std::slice::from_ref(&vb));
                        let ab = bmul(c, 2, &[va.clone(), vb.clone()]);
                        let two = sum(vec![
                            bmul(c, 1, std::slice::from_ref(&ab)),
                            bmul(c, 2, &[da.clone(), vb.clone()]),
                            minus_if(sa, bmul(c, 2, &[va.clone(), db])),
                        ]);
                        if !two.is_zero() {
                            return false;
                        }
                        for w in 0..n {
                            for g in gens(z, w) {
                                let vg = hv(g, dim(z, w));
                                let bg = bmul(c, 2, &[vb.clone(), vg.clone()]);
                                let three = sum(vec![
                                    bmul(c, 2, &[ab.clone(), vg]),
                                    minus_if(sa, bmul(c, 2, &[va.clone(), bg])),
                                ]);
                                if !three.is_zero() {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

struct Mutants {
    /// Flips the oracle rejects.
    invalid: Vec<AInftyCategory>,
    /// Flips the oracle accepts, drawn along the way.
    harmless: Vec<AInftyCategory>,
}

/// Up to `tries` seeded single-coefficient sign flips of `m₁` or `m₂`,
/// stopping at the first one the oracle rejects.
fn flip_search(
    rng: &mut ChaCha8Rng,
    c: &AInftyCategory,
    tries: usize,
) -> (Option<AInftyCategory>, Vec<AInftyCategory>) {
    let mut harmless = Vec::new();
    for _ in 0..tries {
        let k = if c.product(1).unwrap().is_zero() || rng.gen_bool(0.5) {
            2
        } else {
            1
        };
        let table = c.product(k).unwrap();
        let entries: Vec<_> = table.iter().collect();
        let (chain, out) = entries[rng.gen_range(0..entries.len())];
        let coords: Vec<_> = out.iter().collect();
        let (idx, _) = coords[rng.gen_range(0..coords.len())];
        let flipped = out.map_coefficients(|i, x| if i == *idx { -x } else { x.clone() });
        let mut t: MultilinearMap = table.clone();
        t.set(chain.clone(), flipped).unwrap();
        let mut m = c.clone();
        m.set_product(k, t).unwrap();
        if dg_oracle(&m) {
            harmless.push(m);
        } else {
            return (Some(m), harmless);
        }
    }
    (None, harmless)
}

/// Twenty-five oracle-invalid flips, cycling through the corpus. Some
/// instances admit none: on a rank-one endomorphism space every flip is a
/// rescaling and still satisfies the relations.
fn mutants(corpus: &[CorpusEntry]) -> Mutants {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut m = Mutants {
        invalid: Vec::new(),
        harmless: Vec::new(),
    };
    for e in corpus.iter().cycle().take(4 * corpus.len()) {
        if m.invalid.len() == 25 {
            break;
        }
        let (found, harmless) = flip_search(&mut rng, &e.category.to_suspended(), 50);
        m.invalid.extend(found);
        m.harmless.extend(harmless);
    }
    m
}

fn relation_soundness(corpus: &[CorpusEntry], mutants: &Mutants) -> Result<(bool, String)> {
    let oracle_clean = corpus.iter().all(|e| dg_oracle(&e.category.to_suspended()));
    let t = Instant::now();
    let mut clean = 0;
    for e in corpus {
        let c = &e.category;
        let bounds_ok = c.objects().len() <= 4
            && e.complexes
                .iter()
                .map(|(_, x)| x.total_dim())
                .sum::<usize>()
                <= 8
            && e.complexes
                .iter()
                .all(|(_, x)| x.window().0 >= -2 && x.window().1 <= 2);
        if bounds_ok && check_relations(c, 5)?.passed() {
            clean += 1;
        }
    }
    let mut caught = 0;
    for m in &mutants.invalid {
        if !check_relations(m, 5)?.passed() {
            caught += 1;
        }
    }
    let mut accepted = 0;
    for h in &mutants.harmless {
        if check_relations(h, 5)?.passed() {
            accepted += 1;
        }
    }
    let elapsed = t.elapsed();
    let pass = oracle_clean
        && clean == corpus.len()
        && corpus.len() >= 25
        && caught == mutants.invalid.len()
        && mutants.invalid.len() >= 25
        && accepted == mutants.harmless.len()
        && elapsed <= Duration::from_secs(10);
    Ok((
        pass,
        format!(
            "{clean}/{} categories pass to arity 5, {caught}/{} sign mutations caught, \
             {accepted}/{} oracle-valid flips accepted, checker time {elapsed:.2?}",
            corpus.len(),
            mutants.invalid.len(),
            mutants.harmless.len()
        ),
    ))
}

// ---------------------------------------------------------------------------

fn presentation_equivalence(corpus: &[CorpusEntry], mutants: &Mutants) -> Result<(bool, String)> {
    let mut cats: Vec<(&AInftyCategory, bool)> = Vec::new();
    for e in corpus {
        cats.push((&e.category, true));
        cats.push((&e.model, true));
    }
    cats.extend(mutants.invalid.iter().map(|m| (m, false)));
    cats.extend(mutants.harmless.iter().map(|m| (m, true)));
    let (mut round_trips, mut agree, mut expected) = (0, 0, 0);
    for (c, valid) in &cats {
        let other = c.convert_presentation();
        if other.presentation() != c.presentation() && other.convert_presentation() == **c {
            round_trips += 1;
        }
        let n = 5.min(2 * c.arity_bound() - 1);
        let (p, q) = (
            check_relations(c, n)?.passed(),
            check_relations(&other, n)?.passed(),
        );
        if p == q {
            agree += 1;
        }
        if p == *valid {
            expected += 1;
        }
    }
    let total = cats.len();
    Ok((
        round_trips == total && agree == total && expected == total,
        format!("{total} structures: {round_trips} exact round trips, {agree} matching verdicts ({expected} as expected)"),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 3: arity-3 transfer by hand, with dense matrices.

fn apply(m: &GradedMap, v: &[Scalar]) -> Vector {
    m.to_total().apply(v).expect("shapes")
}

fn b2(
    c: &AInftyCategory,
    (x, y, u): (usize, usize, &[Scalar]),
    (z, v): (usize, &[Scalar]),
) -> Vector {
    let out = c
        .eval(
            2,
            &[
                HomVec {
                    src: x as u32,
                    tgt: y as u32,
                    coeffs: u.to_vec(),
                },
                HomVec {
                    src: y as u32,
                    tgt: z as u32,
                    coeffs: v.to_vec(),
                },
            ],
        )
        .expect("composable");
    out.coeffs
}

fn neg_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter()
        .zip(b)
        .map(|(x, y)| -(x.clone() + y.clone()))
        .collect()
}

/// `b₃(x₁,x₂,x₃) = −π b₂(h b₂(ιx₁,ιx₂), ιx₃) − π b₂(ιx₁, h b₂(ιx₂,ιx₃))`.
fn hand_b3(e: &CorpusEntry) -> (usize, usize) {
    let s = &e.sdr;
    let big = s.big().to_suspended();
    let model = &e.model;
    let b3 = model.product(3).unwrap();
    let n = model.n_objects();
    let (mut checked, mut equal) = (0, 0);
    let unit = |dim: usize, i: usize| {
        let mut v = zero_vector(dim);
        v[i] = Scalar::one();
        v
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let (dxy, dyz, dzw) = (
                        model.dim(x as u32, y as u32),
                        model.dim(y as u32, z as u32),
                        model.dim(z as u32, w as u32),
                    );
                    for i in 0..dxy {
                        let a = apply(s.iota(x, y), &unit(dxy, i));
                        for j in 0..dyz {
                            let b = apply(s.iota(y, z), &unit(dyz, j));
                            let ab = b2(&big, (x, y, &a), (z, &b));
                            let hab = apply(s.h(x, z), &ab);
                            for k in 0..dzw {
                                let c = apply(s.iota(z, w), &unit(dzw, k));
                                let bc = b2(&big, (y, z, &b), (w, &c));
                                let hbc = apply(s.h(y, w), &bc);
                                let left = b2(&big, (x, z, &hab), (w, &c));
                                let right = b2(&big, (x, y, &a), (w, &hbc));
                                let expected = apply(s.pi(x, w), &neg_add(&left, &right));
                                let key = [Gen::new(x, y, i), Gen::new(y, z, j), Gen::new(z, w, k)];
                                let got = b3.get(&key).map_or_else(
                                    || zero_vector(expected.len()),
                                    |v| v.to_dense(expected.len()),
                                );
                                checked += 1;
                                if got == expected {
                                    equal += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (checked, equal)
}

fn transfer_correctness(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let (mut structures, mut functors, mut minimal) = (0, 0, 0);
    for e in corpus {
        if check_relations(&e.model, 5)?.passed() {
            structures += 1;
        }
        if check_functor(&e.functor, 5)?.passed() {
            functors += 1;
        }
        if e.model.product(1).is_some_and(MultilinearMap::is_zero) {
            minimal += 1;
        }
    }
    let flagged: Vec<&CorpusEntry> = corpus.iter().filter(|e| e.has_m3()).collect();
    let (mut checked, mut equal) = (0, 0);
    for e in &flagged {
        let (c, q) = hand_b3(e);
        checked += c;
        equal += q;
    }
    let n = corpus.len();
    let pass =
        structures == n && functors == n && minimal == n && !flagged.is_empty() && checked == equal;
    let names: Vec<&str> = flagged.iter().map(|e| e.name.as_str()).collect();
    Ok((
        pass,
        format!(
            "{structures}/{n} structures and {functors}/{n} functors pass to arity 5, {minimal}/{n} with m1 = 0; \
             m3 nonzero on [{}]; hand formula agrees on {equal}/{checked} chains",
            names.join(", ")
        ),
    ))
}

// ---------------------------------------------------------------------------

fn square(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let t = Instant::now();
    let mut equal = [0, 0];
    for e in corpus {
        for (i, a) in CONVENTIONS.iter().enumerate() {
            if hpt_square_check(&e.sdr, *a, 4, &SHIFTS)?.equal() {
                equal[i] += 1;
            }
        }
    }
    let elapsed = t.elapsed();
    let mut crossed = 0;
    for e in corpus {
        if !hpt_square_check_paired(
            &e.sdr,
            ShiftConvention::One,
            ShiftConvention::Two,
            4,
            &SHIFTS,
        )?
        .equal()
        {
            crossed += 1;
        }
    }
    let n = corpus.len();
    Ok((
        equal == [n, n] && n >= 25 && crossed >= 1 && elapsed <= Duration::from_secs(60),
        format!(
            "arity 4, shifts {SHIFTS:?}: a=1 equal on {}/{n}, a=2 equal on {}/{n} in {elapsed:.2?}; \
             crossed pairing differs on {crossed}/{n}",
            equal[0], equal[1]
        ),
    ))
}

fn induced_functors(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let mut ok = [0, 0];
    for e in corpus {
        for (i, a) in CONVENTIONS.iter().enumerate() {
            let (_, _, f) = induce_functor(&e.functor, *a, &SHIFTS)?;
            if check_functor(&f, 5)?.passed() {
                ok[i] += 1;
            }
        }
    }
    let n = corpus.len();
    Ok((
        ok == [n, n],
        format!(
            "functor relation to arity 5: a=1 {}/{n}, a=2 {}/{n}",
            ok[0], ok[1]
        ),
    ))
}

fn unsigned_lift(corpus: &[CorpusEntry]) -> Result<String> {
    let (mut fail, mut with_f2) = (0, 0);
    for e in corpus {
        let (_, _, f) = induce_functor_with(
            &e.functor,
            ShiftConvention::Two,
            &SHIFTS,
            LiftSign::Unsigned,
        )?;
        if !check_functor(&f, 5)?.passed() {
            fail += 1;
        }
        if !e.functor.component(2).unwrap().is_zero() {
            with_f2 += 1;
        }
    }
    Ok(format!(
        "fails the functor relation on {fail}/{} instances ({with_f2} have f2 != 0); the sign (-1)^(r2+...+rk) is needed",
        corpus.len()
    ))
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7: twisted complexes over the minimal models.

fn t_by_hand(a: ShiftConvention, m: &TwMorphism) -> TwMorphism {
    let sign = if a == ShiftConvention::One { -1 } else { 1 };
    TwMorphism {
        source: m.source.shifted(1),
        target: m.target.shifted(1),
        blocks: m
            .blocks
            .iter()
            .map(|(k, v)| {
                (
                    *k,
                    v.iter()
                        .map(|x| x.clone() * Scalar::from_int(sign))
                        .collect(),
                )
            })
            .collect(),
    }
}

fn random_sum(rng: &mut ChaCha8Rng, c: &AInftyCategory) -> SumObject {
    let len = rng.gen_range(1..=2);
    let summands = (0..len)
        .map(|_| {
            (
                c.objects()[rng.gen_range(0..c.n_objects())].clone(),
                rng.gen_range(-1..=1),
            )
        })
        .collect();
    SumObject::new(summands).unwrap()
}

/// A random homogeneous morphism with coefficients in {−1, 0, 1}.
fn random_morphism(
    rng: &mut ChaCha8Rng,
    tw: &Tw,
    x: &SumObject,
    y: &SumObject,
) -> Option<TwMorphism> {
    let layout = tw.hom_layout(x, y).ok()?;
    let degrees: Vec<i32> = layout.space.degrees().collect();
    if degrees.is_empty() {
        return None;
    }
    let d = degrees[rng.gen_range(0..degrees.len())];
    let mut v = zero_vector(layout.space.total_dim());
    for k in layout.space.range(d) {
        v[k] = Scalar::from_int(rng.gen_range(-1..=1));
    }
    Some(layout.to_morphism(&v).normalized())
}

fn shift_functor(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    let (mut chains, mut nonzero, mut eq15) = (0, 0, 0);
    let (mut mc, mut mc_ok) = (0, 0);
    let (mut descents, mut descent_ok) = (0, 0);
    for e in corpus {
        for a in CONVENTIONS {
            let tw = Tw::new(&e.model, a);
            for _ in 0..8 {
                let k = rng.gen_range(1..=4);
                let objs: Vec<SumObject> =
                    (0..=k).map(|_| random_sum(&mut rng, &e.model)).collect();
                let inputs: Option<Vec<TwMorphism>> = (0..k)
                    .map(|i| random_morphism(&mut rng, &tw, &objs[i], &objs[i + 1]))
                    .collect();
                let Some(inputs) = inputs else { continue };
                let refs: Vec<&TwMorphism> = inputs.iter().collect();
                let lhs = t_by_hand(a, &tw.product(&refs)?);
                let shifted: Vec<TwMorphism> = inputs.iter().map(|m| t_by_hand(a, m)).collect();
                let srefs: Vec<&TwMorphism> = shifted.iter().collect();
                let rhs = tw.product(&srefs)?.scaled(&Scalar::sign(k as i64));
                chains += 1;
                if !lhs.is_zero() {
                    nonzero += 1;
                }
                if lhs.normalized() == rhs.normalized() {
                    eq15 += 1;
                }
            }
            let Some((x, y, phi)) = cone_input(&mut rng, &tw, &e.model) else {
                continue;
            };
            let cone = tw.mapping_cone(&x, &y, &phi)?;
            for t in [&x, &y, &cone] {
                mc += 1;
                let shifted = tw.shift_complex(t);
                let by_hand = TwistedComplex {
                    name: shifted.name.clone(),
                    object: t.object.shifted(1),
                    phi: t_by_hand(a, &t.phi).scaled(&Scalar::from_int(-1)),
                };
                if shifted == by_hand && tw.check_mc(t)?.passed() && tw.check_mc(&shifted)?.passed()
                {
                    mc_ok += 1;
                }
            }
            descents += 1;
            if descends(&tw, &x, &y, &cone)? {
                descent_ok += 1;
            }
        }
    }
    let pass = chains > 0
        && eq15 == chains
        && nonzero > 0
        && mc_ok == mc
        && mc > 0
        && descent_ok == descents
        && descents > 0;
    Ok((
        pass,
        format!(
            "shift identity on {eq15}/{chains} chains of length <= 4 ({nonzero} nonzero); \
             T keeps {mc_ok}/{mc} solutions; H0 descent with composition on {descent_ok}/{descents}"
        ),
    ))
}

/// `T` sends cocycles to cocycles and coboundaries to coboundaries in
/// degree 0, commutes with the composition of cocycles, and preserves the
/// dimensions of `H⁰`.
fn descends(tw: &Tw, x: &TwistedComplex, y: &TwistedComplex, z: &TwistedComplex) -> Result<bool> {
    let a = tw.convention();
    let pairs = [(x, y), (y, z), (x, z)];
    for (p, q) in pairs {
        let (tp, tq) = (tw.shift_complex(p), tw.shift_complex(q));
        let (layout, d) = tw.differential(p, q)?;
        let (tlayout, td) = tw.differential(&tp, &tq)?;
        let (z0, tz0) = (tw.cocycles(p, q, -1)?, tw.cocycles(&tp, &tq, -1)?);
        if z0.len() != tz0.len() {
            return Ok(false);
        }
        for c in &z0 {
            if !tw.tw_product(&[&tp, &tq], &[&t_by_hand(a, c)])?.is_zero() {
                return Ok(false);
            }
        }
        // boundaries from degree −2
        let dm = d.block(-2).cloned().unwrap_or_else(|| Matrix::zeros(0, 0));
        let tdm = td.block(-2).cloned().unwrap_or_else(|| Matrix::zeros(0, 0));
        if dm.rank() != tdm.rank() {
            return Ok(false);
        }
        for col in 0..dm.cols() {
            let mut v = zero_vector(layout.space.total_dim());
            for (k, r) in layout.space.range(-1).enumerate() {
                v[r] = dm[(k, col)].clone();
            }
            let tb = tlayout.to_vector(&t_by_hand(a, &layout.to_morphism(&v)))?;
            let target: Vector = tlayout.space.range(-1).map(|r| tb[r].clone()).collect();
            if ainfty::linalg::linear_solve_suite(&tdm)
                .preimage(&target)?
                .is_none()
            {
                return Ok(false);
            }
        }
    }
    for f in tw.cocycles(x, y, -1)? {
        for g in tw.cocycles(y, z, -1)? {
            let lhs = t_by_hand(a, &tw.tw_product(&[x, y, z], &[&f, &g])?);
            let (tx, ty, tz) = (
                tw.shift_complex(x),
                tw.shift_complex(y),
                tw.shift_complex(z),
            );
            let rhs = tw.tw_product(&[&tx, &ty, &tz], &[&t_by_hand(a, &f), &t_by_hand(a, &g)])?;
            if lhs.normalized() != rhs.normalized() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Two single objects and a random nonzero closed morphism of unsuspended
/// degree zero between them, preferring distinct objects.
fn cone_input(
    rng: &mut ChaCha8Rng,
    tw: &Tw,
    c: &AInftyCategory,
) -> Option<(TwistedComplex, TwistedComplex, TwMorphism)> {
    let n = c.n_objects();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (i == j, i, j));
    for (i, j) in pairs {
        let ri = rng.gen_range(-1..=1);
        let x = TwistedComplex::untwisted(
            &ainfty::shifts::shifted_name(&c.objects()[i], ri).to_string(),
            SumObject::single(&c.objects()[i], ri),
        );
        let y = TwistedComplex::untwisted(&c.objects()[j], SumObject::single(&c.objects()[j], ri));
        let basis = tw.cocycles(&x, &y, -1).ok()?;
        if basis.is_empty() {
            continue;
        }
        let phi = random_combination(rng, &x, &y, &basis);
        return Some((x, y, phi));
    }
    None
}

fn random_combination(
    rng: &mut ChaCha8Rng,
    x: &TwistedComplex,
    y: &TwistedComplex,
    basis: &[TwMorphism],
) -> TwMorphism {
    loop {
        let mut m = TwMorphism::zero(&x.object, &y.object);
        for b in basis {
            m = m
                .try_add(&b.scaled(&Scalar::from_int(rng.gen_range(-1..=1))))
                .unwrap();
        }
        let m = m.normalized();
        if !m.is_zero() {
            return m;
        }
    }
}

fn squares_to_zero(tw: &Tw, objects: &[&TwistedComplex]) -> Result<bool> {
    for p in objects {
        for q in objects {
            let (_, d) = tw.differential(p, q)?;
            let dd = d.to_total().try_mul(&d.to_total())?;
            if !dd.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn cones(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0e);
    let (mut built, mut ok, mut nested, mut nontrivial) = (0, 0, 0, 0);
    for e in corpus {
        for a in CONVENTIONS {
            let tw = Tw::new(&e.category, a);
            let Some((x, y, phi)) = cone_input(&mut rng, &tw, &e.category) else {
                continue;
            };
            let r = tw.triangle_check(&x, &y, &phi)?;
            let tx = tw.shift_complex(&x);
            built += 1;
            if r.ok() && squares_to_zero(&tw, &[&x, &y, &r.cone, &tx])? {
                ok += 1;
            }
            if !r.first_literally_zero || !r.second_literally_zero {
                nontrivial += 1;
            }
            // the cone of the inclusion into the first cone
            let incl = tw.cone_inclusion(&x, &y, &r.cone)?;
            let r2 = tw.triangle_check(&y, &r.cone, &incl)?;
            let ty = tw.shift_complex(&y);
            built += 1;
            nested += 1;
            if r2.ok() && squares_to_zero(&tw, &[&y, &r.cone, &r2.cone, &ty])? {
                ok += 1;
            }
            if !r2.first_literally_zero || !r2.second_literally_zero {
                nontrivial += 1;
            }
        }
    }
    Ok((
        built >= 10 && ok == built,
        format!(
            "{ok}/{built} cones ({nested} of them nested) solve Maurer-Cartan, square-zero differential, \
             both composites null-homotopic ({nontrivial} needed a nonzero homotopy)"
        ),
    ))
}

// ---------------------------------------------------------------------------

fn dg_equals_tilde2(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let shifts = [-2, -1, 0, 1, 2];
    let mut sets: Vec<Vec<(String, Complex)>> = vec![demo_complexes()];
    sets.extend(corpus.iter().take(5).map(|e| e.complexes.clone()));
    let (mut equal, mut chains) = (0, 0);
    for s in &sets {
        let r = compare_dg_with_enlargement(s, ShiftConvention::Two, &shifts, 3)?;
        chains += r.chains_checked;
        if r.equal() {
            equal += 1;
        }
    }
    let demo = demo_dg(&demo_complexes(), &shifts)?;
    let witness = demo.convention_one.witness().cloned();
    let witness_ok = witness.as_ref().is_some_and(|m| {
        m.arity == 2
            && m.shifts[..2] == [0, 1]
            && m.enlarged
                .iter()
                .map(|(l, x)| (l.clone(), -x))
                .collect::<Vec<_>>()
                == m.dg
    });
    let arity_one_agrees = demo.convention_one.first_at(1).is_none();
    let one = one_object_sign()?;
    Ok((
        equal == sets.len() && witness_ok && arity_one_agrees && one,
        format!(
            "a=2 equal with vanishing higher products on {equal}/{} complex sets, shifts -2..2 ({chains} chains); \
             a=1 agrees at arity 1 and {}",
            sets.len(),
            demo.convention_one.verdict()
        ),
    ))
}

/// On one complex, the differential of a morphism between shifts by one is
/// minus the shifted differential, and both enlargements agree with it.
fn one_object_sign() -> Result<bool> {
    let x = demo_complexes().remove(0);
    let (cx, x1) = (&x.1, x.1.shifted(1));
    let basis = HomBasis::new(cx, cx)?;
    for k in 0..basis.space.total_dim() {
        let phi = basis.element(k);
        let nu = shift_morphism(&phi, 1, 1);
        let lhs = differential(&x1, &x1, &nu)?;
        let rhs = shift_morphism(&differential(cx, cx, &phi)?, 1, 1).scaled(&Scalar::from_int(-1));
        if lhs.normalized() != rhs.normalized() {
            return Ok(false);
        }
    }
    for a in CONVENTIONS {
        if compare_dg_with_enlargement(std::slice::from_ref(&x), a, &[1], 3)?
            .first_at(1)
            .is_some()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------

fn round_trip<D: Document>(d: &D) -> Result<bool> {
    let text = to_text(d);
    let back: D = from_text(&text)?;
    Ok(to_text(&back) == text)
}

fn corpus_texts(corpus: &[CorpusEntry]) -> Vec<String> {
    corpus
        .iter()
        .flat_map(|e| {
            [
                to_text(&Complexes(e.complexes.clone())),
                to_text(&e.category),
                to_text(&e.sdr),
                to_text(&e.model),
                to_text(&e.functor),
            ]
        })
        .collect()
}

fn determinism(corpus: &[CorpusEntry]) -> Result<(bool, String)> {
    let again = generate_corpus(SEED, SIZE, &GeneratorConfig::default())?;
    let reproducible = corpus_texts(corpus) == corpus_texts(&again);
    let (mut ok, mut total) = (0, 0);
    let mut tally = |b: bool| {
        total += 1;
        if b {
            ok += 1;
        }
    };
    for e in corpus {
        tally(round_trip(&Complexes(e.complexes.clone()))?);
        tally(round_trip(&e.category)?);
        tally(round_trip(&e.category.to_suspended())?);
        tally(round_trip(&e.sdr)?);
        tally(round_trip(&e.model)?);
        tally(round_trip(&e.model.to_unsuspended())?);
        tally(round_trip(&e.functor)?);
    }
    let manifest = Manifest {
        seed: SEED,
        size: corpus.len(),
        arity_bound: 5,
        model_arity: 5,
        entries: corpus
            .iter()
            .map(|e| ManifestEntry {
                name: e.name.clone(),
                objects: e.category.objects().to_vec(),
                total_dim: e.complexes.iter().map(|(_, c)| c.total_dim()).sum(),
                files: Default::default(),
                m3: e.has_m3(),
            })
            .collect(),
    };
    tally(round_trip(&manifest)?);
    let c = build_dg_category(&demo_complexes(), 3)?;
    let tw = Tw::new(&c, ShiftConvention::Two);
    let x = TwistedComplex::untwisted("X", SumObject::single("X", 0));
    let y = TwistedComplex::untwisted("Y", SumObject::new(vec![("Y".into(), 0), ("X".into(), 1)])?);
    let phi = tw.cocycles(&x, &y, -1)?.remove(0);
    let cone = tw.mapping_cone(&x, &y, &phi)?;
    let doc = TwistedDocument {
        tw,
        complexes: vec![x, y, cone],
        morphisms: vec![NamedMorphism {
            name: "phi".into(),
            source: 0,
            target: 1,
            morphism: phi,
        }],
    };
    tally(round_trip(&doc)?);
    let report = Report {
        command: "verify".into(),
        passed: true,
        summary: vec!["relations: ok".into()],
        details: serde_json::to_value(check_relations(&c, 3)?).expect("serializes"),
    };
    tally(round_trip(&report)?);
    Ok((
        reproducible && ok == total,
        format!("seeded corpus reproducible: {reproducible}; {ok}/{total} documents round trip byte for byte"),
    ))
}
