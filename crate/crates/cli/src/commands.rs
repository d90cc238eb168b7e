use std::collections::BTreeMap;
use std::path::Path;

use ramsey_core::certificates::{
    self, category_of, default_letter, dispatch, CheckKind, Encoded, FunctorSpec, WitnessCertificate, WordVisitor,
};
use ramsey_core::constructions::Provenance;
use ramsey_core::engine::{check_degree_bound, ramsey_degree, Counterexample, Mode, SearchBudget, Verdict};
use ramsey_core::{Category, Error, Functor, Word};

use crate::{Cli, CliError, Command, Condition, ConstructParams, Selector};
use crate::{EXIT_FAIL, EXIT_PASS};

/// Largest hom-set listed when explaining a counterexample.
const EXPLAIN_CAP: u64 = 4096;

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Verify {
            condition,
            sel,
            a,
            b,
            c,
            r,
            s,
            f_prime,
            g_prime,
            budget,
            out,
        } => {
            let spec = resolve(sel)?;
            let fp = match condition {
                Condition::P => None,
                Condition::Fp => Some(FpArgs {
                    s: s.as_deref().ok_or_else(|| usage("verify fp needs --s"))?,
                    f_prime: f_prime.as_deref().ok_or_else(|| usage("verify fp needs --f-prime"))?,
                    g_prime: g_prime.as_deref().ok_or_else(|| usage("verify fp needs --g-prime"))?,
                }),
            };
            let mut params = BTreeMap::new();
            params.insert("a".to_string(), a.clone());
            params.insert("b".to_string(), b.clone());
            params.insert("c".to_string(), c.clone());
            let mut cert = dispatch(
                &spec,
                Supplied {
                    spec: &spec,
                    params,
                    a,
                    b,
                    c,
                    r: *r,
                    fp,
                },
            )??;
            let budget = budget.resolve(Mode::Exhaustive)?;
            finish(cli, &mut cert, &budget, out.as_deref())
        }
        Command::Construct {
            theorem,
            params,
            budget,
            out,
        } => {
            let mut cert = certificates::construct(theorem, &param_map(params))?;
            let budget = budget.resolve(Mode::Auto)?;
            finish(cli, &mut cert, &budget, out.as_deref())
        }
        Command::Degree {
            sel,
            a,
            b,
            r,
            pool,
            bound,
            delta,
            word_cap,
            budget,
            out,
        } => {
            let spec = match (bound, delta) {
                (true, Some(d)) => {
                    let spec = FunctorSpec::parse(d)?;
                    if let Some(cat) = &sel.category {
                        if category_of(&spec)? != cat.trim() {
                            return Err(usage(format!("--delta {d} does not act on {cat}")));
                        }
                    }
                    spec
                }
                (true, None) => resolve(sel)?,
                (false, Some(_)) => return Err(usage("--delta needs --bound")),
                (false, None) => resolve(sel)?,
            };
            let budget = budget.resolve(Mode::Exhaustive)?;
            let job = DegreeJob {
                spec: &spec,
                a,
                b,
                r: *r,
                pool: pool.as_deref(),
                bound: *bound,
                word_cap: *word_cap,
                budget: &budget,
            };
            let (lines, cert) = dispatch(&spec, job)??;
            for l in lines {
                println!("{l}");
            }
            if let (Some(path), Some(mut cert)) = (out, cert) {
                cert.certify(&budget)?;
                write_cert(path, &cert)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Replay {
            path,
            override_budget,
            budget,
        } => {
            let bytes = std::fs::read(path)?;
            let cert = certificates::deserialize(&bytes)?;
            if budget.given() && !override_budget {
                return Err(usage("budget flags on replay need --override"));
            }
            let over = if *override_budget {
                Some(budget.resolve(Mode::Exhaustive)?)
            } else {
                None
            };
            let v = certificates::replay_verify(&cert, over.as_ref())?;
            println!("theorem: {}", cert.theorem);
            println!("witness: {}", cert.witness.text);
            report(&v).iter().for_each(|l| println!("{l}"));
            Ok(if v.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

/// The functor named by `--functor`, or the category's own `∂`; both given
/// must agree.
fn resolve(sel: &Selector) -> Result<FunctorSpec, CliError> {
    match (&sel.category, &sel.functor) {
        (None, None) => Err(usage("give --category or --functor")),
        (Some(cat), None) => Ok(FunctorSpec::new(default_letter(cat)?, 1)),
        (cat, Some(f)) => {
            let spec = FunctorSpec::parse(f)?;
            if let Some(cat) = cat {
                let acts_on = category_of(&spec)?;
                if acts_on != cat.trim() {
                    return Err(usage(format!(
                        "--functor {f} acts on {acts_on}, not on --category {cat}"
                    )));
                }
            }
            Ok(spec)
        }
    }
}

fn param_map(p: &ConstructParams) -> BTreeMap<String, String> {
    let fields = [
        ("a", &p.a),
        ("b", &p.b),
        ("r", &p.r),
        ("k", &p.k),
        ("l", &p.l),
        ("k1", &p.k1),
        ("k0", &p.k0),
        ("v", &p.v),
        ("p", &p.p),
        ("s", &p.s),
        ("t", &p.t),
        ("times", &p.times),
        ("category", &p.category),
        ("orientation", &p.orientation),
    ];
    fields
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
}

fn finish(cli: &Cli, cert: &mut WitnessCertificate, budget: &SearchBudget, out: Option<&Path>) -> Result<u8, CliError> {
    let v = cert.certify(budget)?.clone();
    let mut lines = vec![
        format!("theorem: {}", cert.theorem),
        format!("functor: {} on {}", cert.functor.show(), cert.category),
        format!("a = {}, b = {}, r = {}", cert.a.text, cert.b.text, cert.r),
        format!("witness: {}", cert.witness.text),
    ];
    if cli.verbose {
        for st in &cert.trace {
            let fields: Vec<String> = st.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
            lines.push(format!("  [{}] {} {}", st.path, st.step, fields.join(" ")));
        }
    }
    lines.extend(report(&v));
    if let Some(Counterexample::Colors(colours)) = &v.counterexample {
        lines.push(format!("counterexample: {colours:?}"));
        if cli.verbose {
            if let Ok(Ok(more)) = dispatch(&cert.functor, Explain { cert, colours }) {
                lines.extend(more.into_iter().map(|l| format!("  {l}")));
            }
        }
    }
    let to_stdout = out.is_some_and(|p| p.as_os_str() == "-");
    for l in &lines {
        if to_stdout {
            eprintln!("{l}");
        } else {
            println!("{l}");
        }
    }
    if let Some(path) = out {
        write_cert(path, cert)?;
    }
    Ok(if v.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn report(v: &Verdict) -> Vec<String> {
    let outcome = if v.passed() { "pass" } else { "fail" };
    let strategy = format!("{:?}", v.strategy).to_lowercase();
    let mut lines = vec![format!(
        "verdict: {outcome} ({strategy}, {} examined{})",
        v.examined,
        if v.probabilistic { ", probabilistic" } else { "" }
    )];
    if let Some(Counterexample::Sample { seed, sample }) = &v.counterexample {
        lines.push(format!("counterexample: sample {sample} of seed {seed}"));
    }
    lines
}

fn write_cert(path: &Path, cert: &WitnessCertificate) -> Result<(), CliError> {
    let bytes = certificates::serialize(cert);
    if path.as_os_str() == "-" {
        use std::io::Write;
        std::io::stdout().write_all(&bytes)?;
    } else {
        std::fs::write(path, bytes)?;
        eprintln!("certificate written to {}", path.display());
    }
    Ok(())
}

struct FpArgs<'a> {
    s: &'a str,
    f_prime: &'a str,
    g_prime: &'a str,
}

struct Supplied<'a> {
    spec: &'a FunctorSpec,
    params: BTreeMap<String, String>,
    a: &'a str,
    b: &'a str,
    c: &'a str,
    r: u64,
    fp: Option<FpArgs<'a>>,
}

impl WordVisitor for Supplied<'_> {
    type Out = Result<WitnessCertificate, Error>;

    fn visit<F>(self, word: Word<F>) -> Self::Out
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone + 'static,
        F::Dom: Clone,
    {
        let cat = word.dom();
        let a = cat.parse_obj(self.a)?;
        let b = cat.parse_obj(self.b)?;
        let c = cat.parse_obj(self.c)?;
        let (theorem, check) = match self.fp {
            None => ("verify-p", CheckKind::P),
            Some(fp) => {
                let s =
                    fp.s.split(';')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| cat.parse_mor(t.trim()).map(|m| Encoded::mor(cat, &m)))
                        .collect::<Result<_, _>>()?;
                let check = CheckKind::Fp {
                    s,
                    f_prime: Encoded::mor(cat, &cat.parse_mor(fp.f_prime)?),
                    g_prime: Encoded::mor(cat, &cat.parse_mor(fp.g_prime)?),
                };
                ("verify-fp", check)
            }
        };
        Ok(WitnessCertificate::new(
            theorem,
            self.params,
            self.spec.clone(),
            &word,
            &a,
            &b,
            &c,
            self.r,
            Provenance::Supplied,
            check,
            Vec::new(),
        ))
    }
}

/// `f ↦ colour` for each morphism of `hom(a, c)`.
struct Explain<'a> {
    cert: &'a WitnessCertificate,
    colours: &'a [u32],
}

impl WordVisitor for Explain<'_> {
    type Out = Result<Vec<String>, Error>;

    fn visit<F>(self, word: Word<F>) -> Self::Out
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone + 'static,
        F::Dom: Clone,
    {
        let cat = word.dom();
        let a = self.cert.a.decode_obj(cat)?;
        let c = self.cert.witness.decode_obj(cat)?;
        let hom = cat.hom(&a, &c, EXPLAIN_CAP)?;
        let mut lines = vec![format!(
            "counterexample colouring of hom({}, {}):",
            self.cert.a.text, self.cert.witness.text
        )];
        lines.extend(
            hom.iter()
                .zip(self.colours)
                .map(|(f, k)| format!("{} -> {k}", cat.show_mor(f))),
        );
        Ok(lines)
    }
}

struct DegreeJob<'a> {
    spec: &'a FunctorSpec,
    a: &'a str,
    b: &'a str,
    r: u32,
    pool: Option<&'a str>,
    bound: bool,
    word_cap: usize,
    budget: &'a SearchBudget,
}

/// `lo..hi` and `lo..=hi` are inclusive ranges of object texts; anything else
/// is a `;`-separated list.
pub fn pool_texts(pool: &str) -> Result<Vec<String>, Error> {
    let t = pool.trim();
    if let Some((lo, hi)) = t.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let bad = |part: &str, offset: usize| Error::Parse {
            offset,
            reason: format!("`{part}` is not a natural number"),
        };
        let l: u64 = lo.trim().parse().map_err(|_| bad(lo, 0))?;
        let h: u64 = hi.trim().parse().map_err(|_| bad(hi, lo.len() + 2))?;
        if l > h {
            return Err(Error::Parse {
                offset: 0,
                reason: format!("empty range {t}"),
            });
        }
        return Ok((l..=h).map(|n| n.to_string()).collect());
    }
    Ok(t.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect())
}

impl WordVisitor for DegreeJob<'_> {
    type Out = Result<(Vec<String>, Option<WitnessCertificate>), Error>;

    fn visit<F>(self, word: Word<F>) -> Self::Out
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone + 'static,
        F::Dom: Clone,
    {
        let cat = word.dom();
        let a = cat.parse_obj(self.a)?;
        let b = cat.parse_obj(self.b)?;
        let pool = match self.pool {
            Some(p) => pool_texts(p)?
                .iter()
                .map(|t| cat.parse_obj(t))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![b.clone()],
        };
        let mut lines = vec![format!(
            "a = {}, b = {}, r = {}",
            cat.show_obj(&a),
            cat.show_obj(&b),
            self.r
        )];
        let (result, bound) = if self.bound {
            let rep = check_degree_bound(
                std::slice::from_ref(&word),
                &a,
                &b,
                self.r,
                &pool,
                self.budget,
                self.word_cap,
            )?;
            lines.push(format!("trivial bound: {}", rep.trivial_bound));
            let word_text = if rep.bound_word.is_empty() {
                "identity".to_string()
            } else {
                rep.bound_word.join(" then ")
            };
            lines.push(format!("bound: {} (via {word_text})", rep.bound));
            (rep.degree, Some(rep.bound))
        } else {
            (ramsey_degree(cat, &a, &b, self.r, &pool, self.budget)?, None)
        };
        lines.push(format!("|hom(a, b)| = {}", result.hom_size));
        for (c, k) in &result.refused {
            lines.push(format!("skipped {} at k = {k}: over budget", cat.show_obj(c)));
        }
        let found = result.degree.zip(result.witness.clone());
        match (found.clone(), bound) {
            // a lone colour class cannot be beaten on a non-empty hom-set
            (_, Some(1)) if result.hom_size > 0 => {
                lines.push("degree: 1 (forced by the bound)".into());
                if let Some((k, c)) = &found {
                    lines.push(format!("pool: k = {k} with witness {}", cat.show_obj(c)));
                }
            }
            (Some((k, c)), _) => {
                let how = if result.trivial_fallback {
                    ", trivial ceiling"
                } else {
                    ""
                };
                lines.push(format!("degree: {k}{how}"));
                lines.push(format!("witness: {}", cat.show_obj(&c)));
            }
            (None, _) => lines.push("degree: undetermined".into()),
        }
        let cert = found.map(|(k, c)| {
            let mut params = BTreeMap::new();
            params.insert("a".to_string(), self.a.to_string());
            params.insert("b".to_string(), self.b.to_string());
            params.insert("k".to_string(), k.to_string());
            WitnessCertificate::new(
                "degree",
                params,
                self.spec.clone(),
                &word,
                &a,
                &b,
                &c,
                self.r as u64,
                Provenance::FoundBySearch,
                CheckKind::Degree { k },
                Vec::new(),
            )
        });
        Ok((lines, cert))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pools() {
        assert_eq!(pool_texts("0..3").unwrap(), ["0", "1", "2", "3"]);
        assert_eq!(pool_texts("2..=2").unwrap(), ["2"]);
        assert_eq!(pool_texts("1|2; 3|3").unwrap(), ["1|2", "3|3"]);
        assert!(matches!(pool_texts("0..x"), Err(Error::Parse { offset: 3, .. })));
        assert!(pool_texts("4..1").is_err());
    }
}
