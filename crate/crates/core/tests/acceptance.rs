//! One pass/fail line per acceptance criterion, written straight to stdout so
//! that it shows without `--nocapture`.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use ramsey_core::categories::hj::{HjCategory, HjObj, HjPartial};
use ramsey_core::categories::p::{Orientation, PCategory, PObj, PPartial};
use ramsey_core::categories::product::{ProductCategory, ProductFunctor};
use ramsey_core::categories::r::{RCategory, RPartial};
use ramsey_core::categories::tree::{OrderedTree, TreeCategory, TreePartial};
use ramsey_core::category::{CodObjOf, ObjOf};
use ramsey_core::certificates::{construct, deserialize, replay_verify, serialize, WitnessCertificate};
use ramsey_core::constructions::{
    fp_to_p_construct, hj_minimal_dimension, hj_modeling, hj_witness, minimal_product_q, p_pigeonhole_witness,
    product_ramsey_numbers, RFpOracle, Trace,
};
use ramsey_core::engine::{
    check_p_witness, fiber, ramsey_degree, Counterexample, Mode, SearchBudget, Strategy, Verdict, DEFAULT_SEED,
};
use ramsey_core::{check_category_laws, check_frank_at, check_functor_laws, Category, Error, Functor, Identity, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const CAP: u64 = 1 << 16;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn sampled_10k() -> SearchBudget {
    SearchBudget::sampled(10_000, DEFAULT_SEED)
}

/// Certifies, round-trips through bytes and replays under the stored budget.
fn certify_and_replay(mut cert: WitnessCertificate, budget: &SearchBudget) -> Result<Verdict, String> {
    let v = cert.certify(budget).map_err(e2s)?.clone();
    ensure(v.passed(), || {
        format!("{} witness {} fails: {v:?}", cert.theorem, cert.witness.text)
    })?;
    let back = deserialize(&serialize(&cert)).map_err(e2s)?;
    ensure(back == cert, || "certificate does not round-trip".into())?;
    let replayed = replay_verify(&back, None).map_err(e2s)?;
    ensure(replayed == v, || format!("replay gave {replayed:?}"))?;
    Ok(v)
}

/// Classical Ramsey: pairs of a 6-set, triangles, two colours.
fn criterion_1() -> Outcome {
    let cat = RCategory;
    let d2 = Word::power(&RPartial::new(), 2);
    let ex = SearchBudget::default();
    let six = check_p_witness(&d2, &2, &3, &6, 2, &ex).map_err(e2s)?;
    ensure(six.passed(), || format!("c = 6 fails: {six:?}"))?;
    ensure(six.strategy == Strategy::Enumeration && six.examined == 1 << 15, || {
        format!("c = 6 was not a full enumeration of 2^15 colourings: {six:?}")
    })?;
    let five = check_p_witness(&d2, &2, &3, &5, 2, &ex).map_err(e2s)?;
    let colours = match &five.counterexample {
        Some(Counterexample::Colors(c)) if !five.passed() => c.clone(),
        _ => return Err(format!("c = 5 did not fail with a colouring: {five:?}")),
    };
    // independent check: no monochromatic triangle among the pairs of [5]
    let pairs = cat.hom(&2, &5, CAP).map_err(e2s)?;
    let colour_of: BTreeMap<(u64, u64), u32> = pairs
        .iter()
        .zip(&colours)
        .map(|(p, &c)| ((p.x[0], p.x[1]), c))
        .collect();
    for x in 1..=5u64 {
        for y in x + 1..=5 {
            for z in y + 1..=5 {
                let cs = [colour_of[&(x, y)], colour_of[&(x, z)], colour_of[&(y, z)]];
                ensure(cs[0] != cs[1] || cs[1] != cs[2], || {
                    format!("triangle {x}{y}{z} is monochromatic")
                })?;
            }
        }
    }
    let pool: Vec<u64> = (0..=7).collect();
    let deg = ramsey_degree(&cat, &2, &3, 2, &pool, &ex).map_err(e2s)?;
    ensure(deg.degree == Some(1) && deg.witness == Some(6), || {
        format!("degree search gave {deg:?}")
    })?;
    let single = check_p_witness(&RPartial::new(), &2, &3, &6, 2, &ex).map_err(e2s)?;
    Ok(format!(
        "dR^2: c=6 pass over {} colourings, c=5 fails with a triangle-free colouring, degree 1 at witness 6 \
         (dR alone at c=6: {})",
        six.examined,
        if single.passed() { "pass" } else { "fail" }
    ))
}

/// The pigeonhole witness `(m, 2)` with `m = (l - 1) r + 2` in `P`.
fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let ex = SearchBudget::default();
    for k1 in [2u32, 3] {
        for l in [2u32, 3] {
            for r in [1u64, 2, 3] {
                let c = p_pigeonhole_witness(k1, l, r).map_err(e2s)?;
                ensure(c.k as u64 == (l as u64 - 1) * r + 2 && c.i == 2, || {
                    format!("witness {c:?}")
                })?;
                let (a, b) = (PObj::new(k1, 1).map_err(e2s)?, PObj::new(l, 2).map_err(e2s)?);
                let mut passing = Vec::new();
                for (o, name) in [(Orientation::Definition, "definition"), (Orientation::Mirror, "mirror")] {
                    match check_p_witness(&PPartial::new(o), &a, &b, &c, r as u32, &ex) {
                        Ok(v) if v.passed() => passing.push(name),
                        Ok(_) => {}
                        Err(Error::BudgetRefused(m)) | Err(Error::CapExceeded { hom: m, .. }) => {
                            notes.push(format!("({k1},{l},{r}) {name}: refused {m}"))
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                }
                ensure(!passing.is_empty(), || {
                    format!("(k1,l,r) = ({k1},{l},{r}): no orientation passes")
                })?;
                notes.push(format!("({k1},{l},{r})->{}:{}", c.k, passing.join("+")));
            }
        }
    }
    Ok(notes.join(" "))
}

/// (FP) to (P) for `∂_R`.
fn criterion_3() -> Outcome {
    let d = RPartial::new();
    let small = fp_to_p_construct(&d, &RFpOracle, &1, &2, 2, &mut Trace::new()).map_err(e2s)?;
    ensure(small.c == 6, || format!("(1,2) gives {}", small.c))?;
    let big = fp_to_p_construct(&d, &RFpOracle, &2, &3, 2, &mut Trace::new()).map_err(e2s)?;
    ensure(big.c == 27, || format!("(2,3) gives {}", big.c))?;
    let v1 = certify_and_replay(
        construct("fp2p", &params(&[("a", "1"), ("b", "2"), ("r", "2")])).map_err(e2s)?,
        &SearchBudget::default(),
    )?;
    ensure(!v1.probabilistic, || "(1,2) check was not exhaustive".into())?;
    let v2 = certify_and_replay(
        construct("fp2p", &params(&[("a", "2"), ("b", "3"), ("r", "2")])).map_err(e2s)?,
        &sampled_10k(),
    )?;
    ensure(v2.examined >= 10_000, || format!("only {} samples", v2.examined))?;
    Ok(format!(
        "c=6 exhaustive replay ({:?}, {}), c=27 sampled replay with {} colourings and no failure",
        v1.strategy, v1.examined, v2.examined
    ))
}

/// Product Ramsey numbers against brute-force minima.
fn criterion_4() -> Outcome {
    let q1 = minimal_product_q(&[1], &[2], 2, 6);
    ensure(q1 == Some(3), || format!("minimal q for k=1, p=2 is {q1:?}"))?;
    let built1 = product_ramsey_numbers(&[1], &[2], 2, &mut Trace::new()).map_err(e2s)?;
    ensure(built1[0] >= 3, || {
        format!("constructed {built1:?} is below the minimum")
    })?;
    let q2 = minimal_product_q(&[1, 1], &[2, 2], 2, 6);
    ensure(q2 == Some(5), || format!("minimal q for k=(1,1), p=(2,2) is {q2:?}"))?;
    let built2 = product_ramsey_numbers(&[1, 1], &[2, 2], 2, &mut Trace::new()).map_err(e2s)?;
    ensure(built2.iter().all(|&q| q >= 5), || {
        format!("constructed {built2:?} does not dominate 5")
    })?;
    Ok(format!("minima 3 and (5,5); constructed {built1:?} and {built2:?}"))
}

/// Hales–Jewett over two letters.
fn criterion_5() -> Outcome {
    let min = hj_minimal_dimension(1, 1, 2, 2);
    ensure(min == Some(2), || format!("brute-force minimum is {min:?}"))?;
    let m = hj_witness(1, 1, 2, &mut Trace::new()).map_err(e2s)?;
    ensure(m >= 2, || format!("pipeline gives m = {m}"))?;
    let v = certify_and_replay(
        construct("hj", &params(&[("k", "1"), ("l", "1"), ("r", "2")])).map_err(e2s)?,
        &sampled_10k().with_mode(Mode::Sampled),
    )?;
    Ok(format!(
        "minimum 2, constructed m = {m}, sampled replay over {} colourings",
        v.examined
    ))
}

/// Ordered trees of height two.
fn criterion_6() -> Outcome {
    let small = construct("fouche", &params(&[("s", "fan:1"), ("t", "fan:2"), ("r", "2")])).map_err(e2s)?;
    let text = small.witness.text.clone();
    let v1 = certify_and_replay(small, &SearchBudget::default())?;
    ensure(!v1.probabilistic, || "fan1/fan2 check was not exhaustive".into())?;
    let big = construct("fouche", &params(&[("s", "fan:2"), ("t", "fan:3"), ("r", "2")])).map_err(e2s)?;
    let big_text = big.witness.text.clone();
    let v2 = certify_and_replay(big, &sampled_10k())?;
    ensure(v2.examined >= 10_000, || format!("only {} samples", v2.examined))?;
    Ok(format!(
        "V = {text} exhaustive ({:?}); V with {} nodes passes {} sampled colourings",
        v1.strategy,
        big_text.matches(',').count() + 1,
        v2.examined
    ))
}

#[derive(Default)]
struct LawTally {
    laws: u64,
    frank: u64,
    chained: u64,
    skipped: u64,
}

impl LawTally {
    fn category<C: Category>(&mut self, cat: &C, objs: &[C::Obj]) -> Result<(), String> {
        let rep = check_category_laws(cat, objs, CAP).map_err(e2s)?;
        ensure(rep.passed(), || format!("{}: {:?}", cat.name(), rep.violations))?;
        self.laws += rep.identity_checks + rep.composition_checks;
        Ok(())
    }

    /// Functor laws, frankness at every `(a, b')` the lift accepts, and lifts
    /// chained through a preimage.
    fn functor<F: Functor>(&mut self, f: &F, objs: &[ObjOf<F>], targets: &[CodObjOf<F>]) -> Result<(), String> {
        let rep = check_functor_laws(f, objs, CAP).map_err(e2s)?;
        ensure(rep.passed(), || format!("{}: {:?}", f.name(), rep.violations))?;
        self.laws += rep.identity_checks + rep.composition_checks;
        for a in objs {
            for b1 in targets {
                match check_frank_at(f, a, b1, CAP) {
                    Ok(r) => {
                        ensure(r.passed, || {
                            format!(
                                "{} not frank at {} over {}",
                                f.name(),
                                f.dom().show_obj(a),
                                f.cod().show_obj(b1)
                            )
                        })?;
                        self.frank += 1;
                    }
                    Err(Error::NoPreimage(_)) | Err(Error::CapExceeded { .. }) | Err(Error::Precondition(_)) => {
                        self.skipped += 1
                    }
                    Err(e) => return Err(format!("{}: {e}", f.name())),
                }
            }
        }
        for d1 in targets {
            let Ok(c1) = f.preimage(d1) else {
                self.skipped += 1;
                continue;
            };
            ensure(&f.map_obj(&c1) == d1, || {
                format!("{}: preimage of {} is wrong", f.name(), f.cod().show_obj(d1))
            })?;
            for d2 in targets {
                match check_frank_at(f, &c1, d2, CAP) {
                    Ok(r) => {
                        ensure(r.passed, || format!("{}: chained lift fails", f.name()))?;
                        self.chained += 1;
                    }
                    Err(Error::NoPreimage(_)) | Err(Error::CapExceeded { .. }) | Err(Error::Precondition(_)) => {
                        self.skipped += 1
                    }
                    Err(e) => return Err(format!("{}: {e}", f.name())),
                }
            }
        }
        Ok(())
    }
}

fn trees(max_nodes: usize) -> Vec<Arc<OrderedTree>> {
    TreeCategory.objects(max_nodes)
}

/// Category laws, functor laws and frankness on the default fragments.
fn criterion_7() -> Outcome {
    let mut t = LawTally::default();
    // R
    let r_objs: Vec<u64> = (0..=6).collect();
    t.category(&RCategory, &r_objs)?;
    t.functor(&RPartial::new(), &r_objs, &r_objs)?;
    t.functor(&Identity::new(RCategory), &r_objs, &r_objs)?;
    t.functor(&Word::power(&RPartial::new(), 2), &r_objs, &r_objs)?;
    // P: steps out of (k, 1) with k <= 3, everything else up to 5
    for o in [Orientation::Definition, Orientation::Mirror] {
        let cat = PCategory::new(o);
        let objs: Vec<PObj> = cat.objects(5).into_iter().filter(|x| x.i != 1 || x.k <= 3).collect();
        t.category(&cat, &objs)?;
        t.functor(&PPartial::new(o), &objs, &objs)?;
    }
    // HJ
    for k0 in [0u32, 1] {
        let cat = HjCategory::new(k0);
        let objs = cat.objects(3);
        t.category(&cat, &objs)?;
        t.functor(&HjPartial::new(k0), &objs, &objs)?;
    }
    // trees
    let objs = trees(8);
    t.category(&TreeCategory, &objs)?;
    t.functor(&TreePartial::new(), &objs, &trees(7))?;
    // binary products
    let pr = ProductCategory::new(RCategory);
    let objs = pr.objects(3);
    t.category(&pr, &objs)?;
    t.functor(&ProductFunctor::new(RPartial::new()), &objs, &objs)?;
    let pp = ProductCategory::new(PCategory::new(Orientation::Definition));
    let objs = pp.objects(2);
    t.category(&pp, &objs)?;
    t.functor(
        &ProductFunctor::new(PPartial::new(Orientation::Definition)),
        &objs,
        &objs,
    )?;
    let ph = ProductCategory::new(HjCategory::new(1));
    let objs: Vec<_> = ph.objects(1);
    t.category(&ph, &objs)?;
    t.functor(&ProductFunctor::new(HjPartial::new(1)), &objs, &objs)?;
    let pt = ProductCategory::new(TreeCategory);
    let objs = pt.objects(3);
    t.category(&pt, &objs)?;
    t.functor(&ProductFunctor::new(TreePartial::new()), &objs, &objs)?;
    Ok(format!(
        "{} law checks, {} frank lifts, {} chained lifts, {} pairs without a lift",
        t.laws, t.frank, t.chained, t.skipped
    ))
}

fn upward_closure() -> Result<u64, String> {
    let ex = SearchBudget::default();
    let mut n = 0;
    let d = RPartial::new();
    for (a, b, c, r) in [(1u64, 2u64, 3u64, 2u32), (1, 2, 4, 3), (2, 3, 6, 2), (1, 3, 4, 2)] {
        let base = check_p_witness(&d, &a, &b, &c, r, &ex).map_err(e2s)?;
        if !base.passed() {
            continue;
        }
        for c2 in c + 1..=c + 2 {
            let up = check_p_witness(&d, &a, &b, &c2, r, &ex).map_err(e2s)?;
            ensure(up.passed(), || {
                format!("dR: {c} passes at ({a},{b},r={r}) but {c2} fails")
            })?;
            n += 1;
        }
    }
    for (k1, l, r) in [(2u32, 2u32, 2u64), (3, 2, 2), (2, 3, 2)] {
        let c = p_pigeonhole_witness(k1, l, r).map_err(e2s)?;
        let (a, b) = (PObj::new(k1, 1).unwrap(), PObj::new(l, 2).unwrap());
        let up = PObj::new(c.k + 1, 2).unwrap();
        let dp = PPartial::new(Orientation::Definition);
        let base = check_p_witness(&dp, &a, &b, &c, r as u32, &ex).map_err(e2s)?;
        if base.passed() {
            let v = check_p_witness(&dp, &a, &b, &up, r as u32, &ex).map_err(e2s)?;
            ensure(v.passed(), || format!("P: ({k1},{l},{r}) not upward closed"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn fibers_partition<F: Functor>(f: &F, objs: &[ObjOf<F>]) -> Result<u64, String> {
    let mut n = 0;
    for a in objs {
        for b in objs {
            let hom = f.dom().hom(a, b, CAP).map_err(e2s)?;
            let images: std::collections::BTreeSet<_> = hom.iter().map(|m| f.map_mor(m)).collect();
            let mut seen = Vec::new();
            for h in &images {
                let fib = fiber(f, a, b, h, CAP).map_err(e2s)?;
                ensure(!fib.is_empty(), || "empty fiber over an image point".into())?;
                seen.extend(fib);
            }
            seen.sort();
            let mut all = hom.clone();
            all.sort();
            ensure(seen == all, || {
                format!("{}: fibers do not partition a hom-set", f.name())
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn degree_properties() -> Result<u64, String> {
    let ex = SearchBudget::default();
    let pool: Vec<u64> = (0..=6).collect();
    let mut n = 0;
    for (a, b) in [(1u64, 2u64), (1, 3), (2, 2), (2, 3), (0, 2)] {
        let mut prev = 0;
        for r in 1..=3u32 {
            let d = ramsey_degree(&RCategory, &a, &b, r, &pool, &ex).map_err(e2s)?;
            let k = d.degree.ok_or("no degree")?;
            ensure(d.refused.is_empty(), || format!("refusals at ({a},{b},{r})"))?;
            ensure(k <= d.hom_size, || format!("degree {k} above |hom| = {}", d.hom_size))?;
            ensure(k >= prev, || {
                format!("degree drops from {prev} to {k} at ({a},{b}) r={r}")
            })?;
            prev = k;
            n += 1;
        }
    }
    Ok(n)
}

fn jobs_determinism() -> Result<u64, String> {
    let cases = [
        (
            "fp2p",
            params(&[("a", "1"), ("b", "2"), ("r", "2")]),
            SearchBudget::default(),
        ),
        (
            "fp2p",
            params(&[("a", "2"), ("b", "3"), ("r", "2")]),
            SearchBudget::sampled(2_000, 3),
        ),
        (
            "hj",
            params(&[("k", "1"), ("l", "1"), ("r", "2")]),
            SearchBudget::default(),
        ),
        (
            "fouche",
            params(&[("s", "fan:1"), ("t", "fan:2"), ("r", "2")]),
            SearchBudget::default(),
        ),
    ];
    let run = |threads: usize| -> Result<Vec<Vec<u8>>, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| {
            cases
                .iter()
                .map(|(th, p, b)| {
                    let mut c = construct(th, p).map_err(e2s)?;
                    c.certify(b).map_err(e2s)?;
                    Ok(serialize(&c))
                })
                .collect()
        })
    };
    let (one, four) = (run(1)?, run(4)?);
    ensure(one == four, || "certificates differ between 1 and 4 workers".into())?;
    Ok(one.len() as u64)
}

fn relations() -> Result<u64, String> {
    let mut n = 0;
    let pt = |ms: &[u32]| ProductCategory::<PCategory>::tuple(ms.iter().map(|&m| PObj::new(m, 2).unwrap()));
    for k0 in [1u32, 2] {
        let cat = HjCategory::new(k0);
        let vs: Vec<HjObj> = cat
            .objects(0)
            .into_iter()
            .filter(|o| matches!(o, HjObj::Sur(_)))
            .collect();
        for v in &vs {
            for ms in [&[3u32][..], &[4], &[3, 3], &[3, 4]] {
                let model = match hj_modeling(cat, v, ms.len() as u32, &pt(ms)) {
                    Ok(m) => m,
                    Err(Error::Precondition(_)) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                let chk = model.check_concatenation(k0, CAP).map_err(e2s)?;
                ensure(chk.well_defined, || {
                    format!("relation at {} {ms:?} is not well defined", cat.show_obj(v))
                })?;
                ensure(chk.zeta_ok == Some(true), || {
                    format!("concatenation fails at {} {ms:?}", cat.show_obj(v))
                })?;
                n += 1;
            }
        }
    }
    ensure(n > 0, || "no modeling instance in range".into())?;
    Ok(n)
}

/// Properties over every in-cap instance of a fixed small range.
fn criterion_8() -> Outcome {
    let up = upward_closure()?;
    let r_objs: Vec<u64> = (0..=5).collect();
    let mut fib = fibers_partition(&RPartial::new(), &r_objs)?;
    fib += fibers_partition(
        &PPartial::new(Orientation::Definition),
        &PCategory::new(Orientation::Definition).objects(4),
    )?;
    fib += fibers_partition(&HjPartial::new(1), &HjCategory::new(1).objects(3))?;
    fib += fibers_partition(&TreePartial::new(), &trees(5))?;
    let deg = degree_properties()?;
    let jobs = jobs_determinism()?;
    let rel = relations()?;
    Ok(format!(
        "upward closure {up}, fiber partitions {fib}, degree monotone and below ceiling {deg}, \
         jobs 1 = jobs 4 on {jobs} certificates, modeling relations {rel}"
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("classical Ramsey", criterion_1),
        ("pigeonhole category", criterion_2),
        ("(FP) to (P)", criterion_3),
        ("product Ramsey", criterion_4),
        ("Hales-Jewett", criterion_5),
        ("ordered trees", criterion_6),
        ("laws and frankness", criterion_7),
        ("properties", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(detail) => format!("criterion {}: PASS [{name}] {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {}: FAIL [{name}] {why} ({secs:.1}s)", i + 1)
            }
        };
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
