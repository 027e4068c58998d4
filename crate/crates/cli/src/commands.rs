//! The subcommands, as functions from an input to a [`Report`].

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fanic::fan::{boundary_fan, FanPoset, Subfan};
use fanic::fansheaf::quasiconvexity_test;
use fanic::hvector::{fan_local_poincare, global_poincare, Mode, Provenance};
use fanic::mes::{check_lme, check_v_condition, construct_mes_seeded, default_max_degree, reduced_dims};

use crate::corpus;
use crate::criteria;
use crate::document::{FanDocument, LoadedFan};
use crate::report::{sha256_hex, Report, Timer};
use crate::suite::{self, cone_label, multiset_text, witness_text};

/// Raw input: a label for the report and the file contents.
#[derive(Clone, Debug)]
pub struct Input {
    pub label: String,
    pub text: String,
}

impl Input {
    /// Reads a file. A path that does not exist but names a corpus fan
    /// (`cube`, `corpus/cube.fan`) resolves to the embedded copy.
    pub fn read(path: &str) -> Result<Input> {
        let p = Path::new(path);
        if p.exists() {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {path}"))?;
            return Ok(Input { label: path.to_string(), text });
        }
        let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or(path);
        match corpus::text(stem) {
            Some(t) => Ok(Input { label: format!("corpus/{stem}.fan"), text: t.to_string() }),
            None => bail!("cannot read {path}: no such file or corpus fan"),
        }
    }

    pub fn corpus(name: &str) -> Result<Input> {
        let text = corpus::text(name).ok_or_else(|| anyhow!("no corpus fan named {name:?}"))?;
        Ok(Input { label: format!("corpus/{name}.fan"), text: text.to_string() })
    }

    pub fn load(&self) -> Result<LoadedFan> {
        FanDocument::parse(&self.text)?.load().with_context(|| format!("invalid fan in {}", self.label))
    }
}

/// Flags shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub max_degree: Option<u32>,
    pub seed: Option<u64>,
    pub timing: bool,
}

fn start(command: &str, input: &Input) -> Report {
    Report::new(command, &input.label, input.text.as_bytes())
}

pub fn validate(input: &Input, opts: &Options) -> Result<Report> {
    let t = Timer::start(opts.timing);
    let mut r = start("validate", input);
    let lf = input.load()?;
    let fan = &lf.fan;
    r.verdict("valid", true);
    r.verdict("name", &lf.doc.name);
    r.verdict("field", fan.field());
    r.verdict("ambient_dim", fan.dim());
    r.verdict("num_cones", fan.num_cones());
    r.verdict("f_vector", format!("{:?}", fan.f_vector()));
    r.verdict("pure", fan.is_pure());
    r.verdict("complete", fan.is_complete());
    r.verdict("simplicial", fan.is_simplicial());
    let canonical = lf.doc.to_canonical();
    r.verdict("canonical", canonical == input.text);
    let e = &lf.doc.expected;
    r.expect("num_cones", &e.num_cones, &fan.num_cones());
    r.expect("f_vector", &e.f_vector, &fan.f_vector());
    r.expect("complete", &e.complete, &fan.is_complete());
    r.expect("simplicial", &e.simplicial, &fan.is_simplicial());
    t.stop(&mut r, "total");
    Ok(r)
}

pub fn hvector(input: &Input, relative: bool, local: Option<&str>, assume_qc: bool, opts: &Options) -> Result<Report> {
    let t = Timer::start(opts.timing);
    let mut r = start("hvector", input);
    let lf = input.load()?;
    let fan = &lf.fan;
    if let Some(which) = local {
        let sigma = suite::parse_cone(fan, which)?;
        let lp = fan_local_poincare(fan, sigma)?;
        r.verdict("cone", cone_label(fan, sigma));
        r.verdict("provenance", lp.provenance);
        r.polynomials.insert("local".into(), suite::coeffs(&lp.poly));
        if suite::top_cone(fan).ok() == Some(sigma) {
            r.expect("local", &lf.doc.expected.local, &suite::coeffs(&lp.poly));
        }
        t.stop(&mut r, "total");
        return Ok(r);
    }
    if assume_qc {
        r.verdict("quasi_convex", "assumed");
    } else {
        let qc = quasiconvexity_test(fan)?;
        if !qc.quasi_convex {
            bail!("refused: fan is not quasi-convex; witness {}", witness_text(fan, &qc));
        }
        r.verdict("quasi_convex", true);
    }
    let poset = FanPoset::from_fan(fan);
    let (key, mode, expected) = if relative {
        ("relative_hvector", Mode::Relative, &lf.doc.expected.relative_hvector)
    } else {
        ("hvector", Mode::Absolute, &lf.doc.expected.hvector)
    };
    let p = global_poincare(&poset, mode)?;
    let provenance = (0..fan.num_cones())
        .map(|c| fan_local_poincare(fan, c).map(|lp| lp.provenance))
        .collect::<fanic::Result<Vec<_>>>()?
        .into_iter()
        .find(|&p| p == Provenance::AssumesV)
        .unwrap_or(Provenance::Unconditional);
    r.verdict("provenance", provenance);
    r.polynomials.insert(key.into(), suite::coeffs(&p));
    r.expect(key, expected, &suite::coeffs(&p));
    t.stop(&mut r, "total");
    Ok(r)
}

pub fn quasiconvex(input: &Input, opts: &Options) -> Result<Report> {
    let t = Timer::start(opts.timing);
    let mut r = start("quasiconvex", input);
    let lf = input.load()?;
    let fan = &lf.fan;
    let qc = quasiconvexity_test(fan)?;
    r.verdict("quasi_convex", qc.quasi_convex);
    if !qc.quasi_convex {
        r.verdict("witness", witness_text(fan, &qc));
    }
    let checked: Vec<String> = qc.checked.iter().map(|&c| cone_label(fan, c)).collect();
    r.verdict("checked", checked.join(", "));
    r.expect("quasi_convex", &lf.doc.expected.quasi_convex, &qc.quasi_convex);
    t.stop(&mut r, "total");
    Ok(r)
}

pub fn sheaf(input: &Input, opts: &Options) -> Result<Report> {
    let t = Timer::start(opts.timing);
    let mut r = start("sheaf", input);
    let lf = input.load()?;
    let fan = &lf.fan;
    let d_max = opts.max_degree.unwrap_or_else(|| default_max_degree(fan));
    r.max_degree = Some(d_max);
    r.seed = opts.seed;
    let model = construct_mes_seeded(fan, opts.seed)?.with_max_degree(d_max);
    let maximal = fan.maximal_cones();
    for c in 1..fan.num_cones() {
        if maximal.contains(&c) || !model.is_trivial_at(c) {
            r.verdict(format!("generators {}", cone_label(fan, c)), multiset_text(&model.generator_multiset(c)));
        }
        if !fan.is_simplicial_cone(c) {
            let v = check_v_condition(&model, c)?;
            r.verdict(
                format!("V {}", cone_label(fan, c)),
                format!("top degree {}, literal {}, halved {}", v.top_degree, v.literal, v.halved),
            );
        }
    }
    if let [top] = maximal.as_slice() {
        r.verdict("generators", multiset_text(&model.generator_multiset(*top)));
    }
    r.verdict("model_sha256", sha256_hex(model.to_text().as_bytes()));
    let lme = check_lme(&model)?;
    let failures: Vec<String> = lme.failures().iter().map(|&c| cone_label(fan, c)).collect();
    r.check("local minimal extension", lme.all_hold(), failures.join(", "));
    if fan.is_pure() {
        let all = Subfan::full(fan);
        let boundary = boundary_fan(fan)?;
        r.graded_dims.insert("reduced_sections".into(), reduced_dims(&model, &all, &Subfan::empty(), d_max)?.even());
        r.graded_dims.insert("reduced_relative_sections".into(), reduced_dims(&model, &all, &boundary, d_max)?.even());
    }
    if let Ok(top) = suite::top_cone(fan) {
        r.expect("generators", &lf.doc.expected.generators, &model.generator_degrees(top).to_vec());
    }
    t.stop(&mut r, "total");
    Ok(r)
}

pub fn verify(input: &Input, opts: &Options) -> Result<Report> {
    let t = Timer::start(opts.timing);
    let mut r = start("verify", input);
    r.seed = opts.seed;
    r.max_degree = opts.max_degree;
    let lf = input.load()?;
    let canonical = lf.doc.to_canonical();
    let reparsed = FanDocument::parse(&canonical)?;
    r.check("canonical round trip", reparsed == lf.doc && reparsed.to_canonical() == canonical, "");
    suite::verify_fan(&lf, opts.seed, opts.max_degree, &mut r, "")?;
    t.stop(&mut r, "total");
    Ok(r)
}

/// Verifies every corpus fan, then runs the release criteria.
pub fn verify_corpus(opts: &Options) -> Result<Report> {
    let all: String = corpus::CORPUS.iter().map(|(_, t)| *t).collect();
    let mut r = Report::new("verify", "corpus", all.as_bytes());
    r.seed = opts.seed;
    r.max_degree = opts.max_degree;
    for name in corpus::names() {
        let t = Timer::start(opts.timing);
        let lf = corpus::load(name)?;
        r.check(format!("{name}: canonical"), lf.doc.to_canonical() == corpus::text(name).unwrap_or_default(), "");
        suite::verify_fan(&lf, opts.seed, opts.max_degree, &mut r, &format!("{name}: "))?;
        t.stop(&mut r, name);
    }
    for c in criteria::run_all() {
        r.check(format!("criterion {:>2}: {}", c.id, c.title), c.passed, c.detail.clone());
        if opts.timing {
            r.timing_ms
                .get_or_insert_with(Default::default)
                .insert(format!("criterion {:>2}", c.id), c.elapsed.as_millis());
        }
    }
    Ok(r)
}
