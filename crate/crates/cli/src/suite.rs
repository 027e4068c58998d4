//! Fan-level property checks shared by `verify` and the release criteria.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use fanic::fan::{boundary_fan, skeleton, ConeId, Fan, FanPoset, Subfan};
use fanic::fansheaf::{
    all_links_are_homology_points, cochain_complex, quasiconvexity_test, FanSheafData, QuasiConvexity, RelativeTo,
};
use fanic::hvector::{
    classical_h_from_f, duality_check, fan_local_poincare, global_poincare, kalai_check, Mode, PoincarePolynomial,
    Provenance,
};
use fanic::mes::{
    acyclicity_check, check_lme, check_v_condition, construct_mes_seeded, decompose_direct_image, default_max_degree,
    duality_dims_check, freeness_probe, hard_lefschetz_check, reduced_dims, section_dims, simplicial_pd_pairing,
    MESModel,
};

use crate::corpus;
use crate::document::LoadedFan;
use crate::report::Report;

pub fn cone_label(fan: &Fan, c: ConeId) -> String {
    if c == fan.zero_cone() {
        "o".into()
    } else {
        format!("{c}{:?}", fan.cone(c).rays)
    }
}

/// The unique maximal cone.
pub fn top_cone(fan: &Fan) -> Result<ConeId> {
    match fan.maximal_cones().as_slice() {
        [c] => Ok(*c),
        m => bail!("fan has {} maximal cones, not one", m.len()),
    }
}

/// `top`, `o`, a cone id, or a comma-separated ray list in brackets.
pub fn parse_cone(fan: &Fan, which: &str) -> Result<ConeId> {
    let s = which.trim();
    if s == "top" {
        return top_cone(fan);
    }
    if s == "o" {
        return Ok(fan.zero_cone());
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let mut rays: Vec<usize> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>()?
        };
        rays.sort_unstable();
        return fan.cone_by_rays(&rays).ok_or_else(|| anyhow!("no cone with rays {rays:?}"));
    }
    let id: ConeId = s.parse().map_err(|_| anyhow!("cannot read cone {which:?}"))?;
    fan.check_id(id)?;
    Ok(id)
}

pub fn coeffs(p: &PoincarePolynomial) -> Vec<i64> {
    p.coeffs().to_vec()
}

fn padded(p: &PoincarePolynomial, len: usize) -> Vec<i64> {
    (0..len).map(|q| p.coeff(q)).collect()
}

pub fn multiset_text(m: &BTreeMap<u32, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(d, k)| format!("{d}:{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn witness_text(fan: &Fan, qc: &QuasiConvexity) -> String {
    let parts: Vec<String> = qc
        .failures
        .iter()
        .map(|f| format!("{} (degrees {:?})", cone_label(fan, f.cone), f.failing_degrees()))
        .collect();
    parts.join(", ")
}

/// Subfans used to compare two constructions: every subfan generated by a
/// set of maximal cones (when there are at most ten), plus `⟨σ⟩`, `∂σ` and
/// every skeleton.
pub fn subfan_family(fan: &Fan) -> Vec<(String, Subfan)> {
    let mut out = Vec::new();
    let maximal = fan.maximal_cones();
    if maximal.len() <= 10 {
        for mask in 1u32..(1 << maximal.len()) {
            let gens: Vec<ConeId> = (0..maximal.len()).filter(|&i| mask >> i & 1 == 1).map(|i| maximal[i]).collect();
            out.push((format!("maximal subset {mask:#b}"), Subfan::generated(fan, &gens)));
        }
    }
    for c in 0..fan.num_cones() {
        out.push((format!("<{}>", cone_label(fan, c)), Subfan::generated(fan, &[c])));
        out.push((format!("boundary of {}", cone_label(fan, c)), Subfan::generated(fan, fan.facets(c))));
    }
    for k in 0..=fan.dim() {
        out.push((format!("{k}-skeleton"), skeleton(fan, k)));
    }
    out
}

/// Verdicts of the three quasi-convexity tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeWay {
    pub topological: bool,
    pub acyclic: bool,
    pub free: bool,
}

impl ThreeWay {
    pub fn agree(&self) -> bool {
        self.topological == self.acyclic && self.acyclic == self.free
    }
}

pub fn three_way(model: &MESModel, max_degree: u32) -> Result<ThreeWay> {
    let fan = model.fan();
    Ok(ThreeWay {
        topological: quasiconvexity_test(fan)?.quasi_convex,
        acyclic: acyclicity_check(model, true, max_degree)?.holds(),
        free: freeness_probe(model, max_degree)?.consistent_with_free(),
    })
}

/// Generator multisets and section dims on [`subfan_family`] agree.
pub fn same_construction(a: &MESModel, b: &MESModel, max_degree: u32) -> Result<std::result::Result<(), String>> {
    let fan = a.fan();
    for c in 0..fan.num_cones() {
        if a.generator_multiset(c) != b.generator_multiset(c) {
            return Ok(Err(format!("generators differ at {}", cone_label(fan, c))));
        }
    }
    for (name, sub) in subfan_family(fan) {
        let da = section_dims(a, &sub, &Subfan::empty(), max_degree)?;
        let db = section_dims(b, &sub, &Subfan::empty(), max_degree)?;
        if da != db {
            return Ok(Err(format!("section dims differ on {name}")));
        }
    }
    Ok(Ok(()))
}

/// Degree bounds on the global and local polynomials.
pub fn degree_bounds(fan: &Fan, qc: bool) -> Result<std::result::Result<(), String>> {
    let n = fan.dim();
    let poset = FanPoset::from_fan(fan);
    if qc && fan.is_pure() {
        let rel = global_poincare(&poset, Mode::Relative)?;
        if rel.t_degree() != Some(2 * n) || rel.leading_coeff() != 1 {
            return Ok(Err(format!("relative polynomial {:?} is not monic of degree {}", rel.coeffs(), 2 * n)));
        }
        if !fan.is_complete() {
            let abs = global_poincare(&poset, Mode::Absolute)?;
            if abs.t_degree().is_some_and(|d| d + 2 > 2 * n) {
                return Ok(Err(format!("absolute polynomial {:?} exceeds degree {}", abs.coeffs(), 2 * n - 2)));
            }
        }
    }
    for c in 1..fan.num_cones() {
        let p = fan_local_poincare(fan, c)?.poly;
        if p.t_degree().is_some_and(|d| d + 2 > 2 * fan.cone_dim(c)) {
            return Ok(Err(format!("local polynomial of {} is {:?}", cone_label(fan, c), p.coeffs())));
        }
    }
    Ok(Ok(()))
}

/// Every face pair of every cone satisfies Kalai's inequality.
pub fn kalai_all(fan: &Fan) -> Result<std::result::Result<usize, String>> {
    let poset = FanPoset::from_fan(fan);
    let mut pairs = 0;
    for s in 0..fan.num_cones() {
        for &t in fan.faces(s) {
            let k = kalai_check(&poset, s, t)?;
            if !k.holds {
                return Ok(Err(format!(
                    "{} over {}: {:?} vs {:?}",
                    cone_label(fan, s),
                    cone_label(fan, t),
                    k.lhs.coeffs(),
                    k.rhs.coeffs()
                )));
            }
            pairs += 1;
        }
    }
    Ok(Ok(pairs))
}

/// Per-cone "single generator in degree 0" against simpliciality.
pub fn trivial_iff_simplicial(model: &MESModel) -> std::result::Result<usize, String> {
    let fan = model.fan();
    for c in 0..fan.num_cones() {
        if model.is_trivial_at(c) != fan.is_simplicial_cone(c) {
            return Err(format!("{}: generators {:?}", cone_label(fan, c), model.generator_degrees(c)));
        }
    }
    Ok(fan.num_cones())
}

/// Multiplicities of the direct image under `fine → coarse`.
pub struct DecompositionSummary {
    pub top: Vec<usize>,
    pub others_zero: bool,
}

pub fn decomposition_summary(coarse: &Fan, fine: &Fan) -> Result<DecompositionSummary> {
    let top = top_cone(coarse)?;
    let d = decompose_direct_image(coarse, fine, 2 * coarse.dim() as u32)?;
    let others_zero = d.nonzero().iter().all(|&c| c == top);
    Ok(DecompositionSummary { top: d.multiplicities[&top].even(), others_zero })
}

fn outcome<T: std::fmt::Display>(report: &mut Report, name: &str, r: std::result::Result<T, String>) {
    match r {
        Ok(x) => report.check(name, true, x.to_string()),
        Err(e) => report.check(name, false, e),
    }
}

/// Runs every property that applies to `lf`, appending to `report` with
/// `prefix` on each check name.
pub fn verify_fan(
    lf: &LoadedFan,
    seed: Option<u64>,
    max_degree: Option<u32>,
    report: &mut Report,
    prefix: &str,
) -> Result<()> {
    let fan = &lf.fan;
    let e = &lf.doc.expected;
    let n = fan.dim();
    let name = |s: &str| format!("{prefix}{s}");
    let d_max = max_degree.unwrap_or_else(|| default_max_degree(fan));

    report.expect(&name("num_cones"), &e.num_cones, &fan.num_cones());
    report.expect(&name("f_vector"), &e.f_vector, &fan.f_vector());
    report.expect(&name("complete"), &e.complete, &fan.is_complete());
    report.expect(&name("simplicial"), &e.simplicial, &fan.is_simplicial());
    let constant = FanSheafData::constant(fan);
    let squares = [RelativeTo::Nothing, RelativeTo::Boundary]
        .iter()
        .map(|&rel| cochain_complex(fan, &constant, rel, true, 0).map(|c| c.squares_to_zero()))
        .collect::<fanic::Result<Vec<bool>>>()?;
    report.check(name("coboundary squares to zero"), squares.iter().all(|&x| x), "");

    let qc = quasiconvexity_test(fan)?;
    report.expect(&name("quasi_convex"), &e.quasi_convex, &qc.quasi_convex);
    if !fan.is_complete() {
        let links = all_links_are_homology_points(fan)?;
        report.check(name("links agree with quasi-convexity"), links == qc.quasi_convex, format!("links {links}"));
    }

    let poset = FanPoset::from_fan(fan);
    if qc.quasi_convex && fan.is_pure() {
        let dual = duality_check(&poset)?;
        report.expect(&name("hvector"), &e.hvector, &coeffs(&dual.absolute));
        report.expect(&name("relative_hvector"), &e.relative_hvector, &coeffs(&dual.relative));
        report.check(
            name("duality"),
            dual.holds,
            format!("{:?} vs {:?}", dual.absolute.coeffs(), dual.relative.coeffs()),
        );
        if fan.is_complete() && fan.is_simplicial() {
            let f: Vec<u64> = fan.f_vector()[1..].iter().map(|&x| x as u64).collect();
            let classical = classical_h_from_f(&f);
            report.check(name("classical h-vector"), classical == dual.absolute, format!("{:?}", classical.coeffs()));
        }
    }
    outcome(report, &name("degree bounds"), degree_bounds(fan, qc.quasi_convex)?.map(|_| "hold"));
    outcome(report, &name("kalai"), kalai_all(fan)?.map(|k| format!("{k} pairs")));

    let model = construct_mes_seeded(fan, seed)?.with_max_degree(d_max);
    outcome(
        report,
        &name("trivial generators iff simplicial"),
        trivial_iff_simplicial(&model).map(|k| format!("{k} cones")),
    );
    let mut mismatch = None;
    for c in 0..fan.num_cones() {
        let lp = fan_local_poincare(fan, c)?;
        if lp.provenance == Provenance::Unconditional && lp.poly != model.local_polynomial(c) {
            mismatch = Some(cone_label(fan, c));
        }
    }
    report.check(
        name("sheaf local polynomials"),
        mismatch.is_none(),
        mismatch.map(|c| format!("differs at {c}")).unwrap_or_default(),
    );
    let lme = check_lme(&model)?;
    let failures: Vec<String> = lme.failures().iter().map(|&c| cone_label(fan, c)).collect();
    report.check(name("local minimal extension"), lme.all_hold(), failures.join(", "));
    if let Ok(top) = top_cone(fan) {
        report.expect(&name("local"), &e.local, &model.local_polynomial(top).coeffs().to_vec());
        report.expect(&name("generators"), &e.generators, &model.generator_degrees(top).to_vec());
    }

    if fan.is_pure() {
        let tw = three_way(&model, d_max)?;
        report.check(name("quasi-convexity three ways"), tw.agree(), format!("{tw:?}"));
    }
    if qc.quasi_convex && fan.is_pure() {
        let top = 2 * n as u32;
        let all = Subfan::full(fan);
        let boundary = boundary_fan(fan)?;
        let abs = reduced_dims(&model, &all, &Subfan::empty(), top)?.even();
        let rel = reduced_dims(&model, &all, &boundary, top)?.even();
        let p_abs = padded(&global_poincare(&poset, Mode::Absolute)?, n + 1);
        let p_rel = padded(&global_poincare(&poset, Mode::Relative)?, n + 1);
        let agree = abs.iter().zip(&p_abs).all(|(&a, &p)| a as i64 == p)
            && rel.iter().zip(&p_rel).all(|(&a, &p)| a as i64 == p);
        report.check(name("global sections match hvector"), agree, format!("{abs:?} / {rel:?}"));
        let dd = duality_dims_check(&model)?;
        report.check(name("section duality"), dd.holds, format!("{:?} / {:?}", dd.absolute.even(), dd.relative.even()));
        if fan.is_simplicial() {
            let pairing = simplicial_pd_pairing(fan)?;
            report.check(
                name("pairing nondegenerate"),
                pairing.nondegenerate(),
                format!("{} blocks", pairing.blocks.len()),
            );
        }
    }

    let other_seed = Some(seed.map_or(1, |s| s.wrapping_add(1)));
    let other = construct_mes_seeded(fan, other_seed)?;
    outcome(report, &name("construction unique"), same_construction(&model, &other, 2 * n as u32)?.map(|_| "agree"));

    if let Some(fname) = &e.lefschetz {
        let f = lf.functions.get(fname).ok_or_else(|| anyhow!("no function named {fname}"))?;
        let hl = hard_lefschetz_check(&model, f)?;
        let ranks: Vec<usize> = hl.steps.iter().map(|s| s.rank).collect();
        report.check(name("hard lefschetz"), hl.passes(), format!("ranks {ranks:?}"));
    }

    if let Some(coarse_name) = &e.refines {
        let coarse = corpus::load(coarse_name)?;
        let coarse_qc = quasiconvexity_test(&coarse.fan)?.quasi_convex;
        report.check(name("refinement keeps quasi-convexity"), coarse_qc == qc.quasi_convex, "");
        let s = decomposition_summary(&coarse.fan, fan)?;
        report.expect(&name("multiplicities"), &e.multiplicities, &s.top);
        report.check(name("multiplicities elsewhere vanish"), s.others_zero, "");
    }

    if let Some(twin_name) = &e.twin {
        let twin = corpus::load(twin_name)?;
        let tm = construct_mes_seeded(&twin.fan, seed)?;
        let (a, b) = (top_cone(fan)?, top_cone(&twin.fan)?);
        let same_gens = model.generator_degrees(a) == tm.generator_degrees(b);
        let same_local = model.local_polynomial(a) == tm.local_polynomial(b);
        let (va, vb) = (check_v_condition(&model, a)?, check_v_condition(&tm, b)?);
        let same_v = (va.literal, va.halved) == (vb.literal, vb.halved);
        report.check(
            name("matches rational twin"),
            same_gens && same_local && same_v,
            format!("generators {:?}, local {:?}", model.generator_degrees(a), model.local_polynomial(a).coeffs()),
        );
    }
    Ok(())
}
