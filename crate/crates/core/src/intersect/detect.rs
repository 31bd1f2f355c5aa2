//! Structure detection: from witnesses to a verified exception certificate.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::fit::{fit_affine_points, fit_linear_dependencies};
use super::{check_recurrence, tabulate, Check, DetectConfig, Detection, ExceptionCertificate, FinitenessReport, Hit, Tabulation};
use crate::error::{Error, Result};
use crate::multirec::{MultiProgression, MultiRecurrence, ShiftedSublattice};
use crate::normform::NormFormProblem;
use crate::numberfield::Element;
use crate::uniteq::{cascade_homogeneous, CascadeBlock};
use crate::units::unit_decompose;

const FINITE: &str = "finite-within-box";

struct Failure {
    step: &'static str,
    detail: String,
}

fn fail<T>(step: &'static str, detail: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure { step, detail: detail.into() })
}

struct Witness {
    hit: Hit,
    /// Coordinates in the domain parametrization.
    kp: Vec<i64>,
}

/// Runs the coincidence search and, when enough witnesses appear, tries to
/// certify `G` as an exception. Structural failures produce a report.
pub fn detect_exception(p: &NormFormProblem, l: usize, g: &MultiRecurrence, cfg: &DetectConfig) -> Result<Detection> {
    let tab = tabulate(p, l, g, cfg)?;
    Ok(run(p, l, g, cfg, &tab, false))
}

/// One-variable version: no integrality hypothesis on the bases, and a
/// nonzero `G_0` is refined away along a progression of its zeros.
pub fn detect_reduced_exception(p: &NormFormProblem, l: usize, g: &MultiRecurrence, cfg: &DetectConfig) -> Result<Detection> {
    if g.vars() != 1 {
        return Err(Error::InvalidInput(format!("reduced detection needs one variable, got {}", g.vars())));
    }
    check_recurrence(p, g, false)?;
    let tab = tabulate(p, l, g, cfg)?;
    Ok(run(p, l, g, cfg, &tab, true))
}

fn run(p: &NormFormProblem, l: usize, g: &MultiRecurrence, cfg: &DetectConfig, tab: &Tabulation, reduce_g0: bool) -> Detection {
    let mut transcript = Vec::new();
    let witnesses = select_witnesses(&tab.hits);
    let distinct = witnesses.len();
    transcript.push(Check::new(
        "threshold",
        distinct >= cfg.structure_threshold,
        format!("{distinct} witnesses, threshold {}", cfg.structure_threshold),
    ));
    let report = |transcript: Vec<Check>, failed: Option<&str>, notes: Vec<String>| {
        Detection::Finite(FinitenessReport {
            hits: tab.hits.clone(),
            k_box: cfg.k_box,
            h_box: cfg.h_box,
            classification: FINITE.to_string(),
            failed_step: failed.map(str::to_string),
            notes,
            transcript,
        })
    };
    if distinct < cfg.structure_threshold {
        return report(transcript, None, vec!["structure threshold not met".into()]);
    }
    match certify(p, l, g, cfg, tab, witnesses, reduce_g0, &mut transcript) {
        Ok(mut cert) => {
            cert.transcript = transcript;
            Detection::Exception(Box::new(cert))
        }
        Err(f) => {
            transcript.push(Check::new(f.step, false, f.detail.clone()));
            report(transcript, Some(f.step), vec![format!("{}: {}", f.step, f.detail)])
        }
    }
}

/// Hits of the recurrence with the most distinct `k`, one per `k`, taking the
/// lexicographically largest `h`.
fn select_witnesses(hits: &[Hit]) -> Vec<Hit> {
    let mut by_rid: BTreeMap<usize, BTreeMap<Vec<i64>, &Hit>> = BTreeMap::new();
    for hit in hits {
        let slot = by_rid.entry(hit.recurrence_id).or_default().entry(hit.k.clone()).or_insert(hit);
        if hit.h > slot.h {
            *slot = hit;
        }
    }
    let best = by_rid.values().fold(None::<&BTreeMap<Vec<i64>, &Hit>>, |acc, m| match acc {
        Some(a) if a.len() >= m.len() => Some(a),
        _ => Some(m),
    });
    best.map(|m| m.values().map(|h| (*h).clone()).collect()).unwrap_or_default()
}

#[allow(clippy::too_many_arguments)]
fn certify(
    p: &NormFormProblem,
    l: usize,
    g: &MultiRecurrence,
    cfg: &DetectConfig,
    tab: &Tabulation,
    hits: Vec<Hit>,
    reduce_g0: bool,
    transcript: &mut Vec<Check>,
) -> std::result::Result<ExceptionCertificate, Failure> {
    let sc = &tab.sc;
    let sys = p.unit_system().map_err(|e| Failure { step: "units", detail: e.to_string() })?;
    let rid = hits[0].recurrence_id;
    let hrec = tab.rows[rid][l].clone();
    let s = g.vars();

    // linear dependencies among the k's
    let ks: Vec<Vec<i64>> = hits.iter().map(|h| h.k.clone()).collect();
    let deps = fit_linear_dependencies(&ks, cfg.coeff_bound).or_else(|e| fail("linear-dependencies", e.to_string()))?;
    let free = deps.free_indices.clone();
    if free.is_empty() {
        return fail("linear-dependencies", "no free index");
    }
    let den = deps.denominator_lcm();
    transcript.push(Check::new(
        "linear-dependencies",
        true,
        format!(
            "constants {:?}, {} relations, free {:?}, denominator lcm {den}",
            deps.constant_components,
            deps.relations.len(),
            free
        ),
    ));

    // the residue class mod den carrying most witnesses makes every relation integral
    let residue = |k: &[i64]| free.iter().map(|&v| k[v].mod_floor(&den)).collect::<Vec<i64>>();
    let mut classes: Vec<(Vec<i64>, usize)> = Vec::new();
    for k in &ks {
        let r = residue(k);
        match classes.iter_mut().find(|(c, _)| *c == r) {
            Some((_, n)) => *n += 1,
            None => classes.push((r, 1)),
        }
    }
    let class = classes.iter().fold(&classes[0], |best, c| if c.1 > best.1 { c } else { best }).0.clone();
    let ld = free.len();
    let mut pm = vec![vec![0i64; s]; ld];
    let mut c = vec![0i64; s];
    for (i, &v) in free.iter().enumerate() {
        pm[i][v] = den;
        c[v] = class[i];
    }
    for &(v, val) in &deps.constant_components {
        c[v] = val;
    }
    for rel in &deps.relations {
        let num = rel.constant + rel.coeffs.iter().map(|&(v, a)| a * c[v]).sum::<i64>();
        if num % rel.denominator != 0 {
            return fail("linear-dependencies", format!("relation for k{} not integral on the residue class", rel.index + 1));
        }
        c[rel.index] = num / rel.denominator;
        for &(v, a) in &rel.coeffs {
            let i = free.iter().position(|&f| f == v).expect("relations use free indices");
            pm[i][rel.index] = a * den / rel.denominator;
        }
    }
    let domain = ShiftedSublattice::new(pm, c).or_else(|e| fail("linear-dependencies", e.to_string()))?;
    let witnesses: Vec<Witness> = hits
        .into_iter()
        .filter(|h| residue(&h.k) == class)
        .map(|hit| {
            let kp = free.iter().zip(&class).map(|(&v, r)| (hit.k[v] - r) / den).collect();
            Witness { hit, kp }
        })
        .collect();
    if let Some(w) = witnesses.iter().find(|w| domain.point(&w.kp) != w.hit.k) {
        return fail("linear-dependencies", format!("witness {:?} off the fitted domain", w.hit.k));
    }
    if den > 1 {
        transcript.push(Check::new(
            "lift",
            true,
            format!("fractional exponents cleared on the class {class:?} mod {den}; no extension adjoined"),
        ));
    }

    // reduction along the witness progression
    let g_dom = g.restrict_sublattice(&domain).or_else(|e| fail("reduce", e.to_string()))?;
    let hat = witnesses[0].kp.clone();
    let mut wsteps = vec![0i64; ld];
    for w in &witnesses {
        for i in 0..ld {
            wsteps[i] = wsteps[i].gcd(&(w.kp[i] - hat[i]));
        }
    }
    if wsteps.contains(&0) {
        return fail("reduce", "a free index is constant on the residue class");
    }
    let wprog = progression(&hat, &wsteps);
    let (g_red, g0_i) = g_dom.reduce(&wprog).or_else(|e| fail("reduce", e.to_string()))?;
    transcript.push(Check::new(
        "reduce",
        true,
        format!("witness progression {:?} + {:?}N; {} terms remain, {} moved to G0", wprog.offsets, wprog.steps, g_red.len(), g0_i.len()),
    ));

    // unit equation cascade on each witness
    let inc = &sc.inclusion;
    let g_red_a = g_red.embed(inc);
    let hterms = hrec.h.terms();
    let gterms = g_red_a.terms();
    let (nh, ng) = (hterms.len(), gterms.len());
    let coeffs: Vec<Element> = hrec
        .h
        .constant_coeffs()
        .into_iter()
        .chain(g_red_a.constant_coeffs().iter().map(|x| -x))
        .collect();
    let mut sets: Vec<(Vec<CascadeBlock>, Vec<usize>)> = Vec::new();
    for (wi, w) in witnesses.iter().enumerate() {
        let z: Vec<Element> = hterms
            .iter()
            .map(|t| power(&t.base, &w.hit.h))
            .chain(gterms.iter().map(|t| power(&t.base, &w.kp)))
            .collect();
        let out = cascade_homogeneous(&coeffs, &z).or_else(|e| fail("cascade", e.to_string()))?;
        match sets.iter_mut().find(|(b, _)| *b == out.blocks) {
            Some((_, idx)) => idx.push(wi),
            None => sets.push((out.blocks, vec![wi])),
        }
    }
    let (blocks, chosen) = sets.iter().fold(&sets[0], |best, x| if x.1.len() > best.1.len() { x } else { best }).clone();
    if chosen.len() < cfg.structure_threshold.min(witnesses.len()) {
        return fail("cascade", format!("largest relation class has {} witnesses", chosen.len()));
    }
    let witnesses: Vec<Witness> = witnesses.into_iter().enumerate().filter(|(i, _)| chosen.contains(i)).map(|(_, w)| w).collect();
    let (mut type_a, mut type_b, mut type_c) = (Vec::new(), 0usize, 0usize);
    for b in &blocks {
        for r in &b.relations {
            match (r.i < nh, r.j < nh) {
                (true, true) => type_b += 1,
                (false, false) => type_c += 1,
                _ => {}
            }
        }
        if b.indices.len() == 2 && (b.indices[0] < nh) != (b.indices[1] < nh) {
            type_a.push((b.indices[0], b.indices[1] - nh));
        }
    }
    let matched_h: Vec<usize> = type_a.iter().map(|x| x.0).collect();
    let matched_g: Vec<usize> = type_a.iter().map(|x| x.1).collect();
    let perfect = type_b == 0
        && type_c == 0
        && type_a.len() == blocks.len()
        && nh == ng
        && (0..nh).all(|i| matched_h.iter().filter(|&&x| x == i).count() == 1)
        && (0..ng).all(|j| matched_g.iter().filter(|&&x| x == j).count() == 1);
    let detail = format!("{} type A, {type_b} type B, {type_c} type C; {nh} H terms, {ng} G terms", type_a.len());
    if !perfect {
        return fail("pairing", detail);
    }
    transcript.push(Check::new("pairing", true, format!("{detail}; {} witnesses share the relations", witnesses.len())));

    // bases of the reduced G must be units
    for t in g_red.terms() {
        if let Some(b) = t.base.iter().find(|b| !b.is_unit()) {
            return fail("units", format!("base {b} is not a unit"));
        }
    }
    transcript.push(Check::new("units", true, "all bases of the reduced G are units"));

    // decompose σ_i^{-1}(β) and assemble A
    let eps = &sys.fundamental_units;
    let r = eps.len();
    let mut a_mat: Option<Vec<Vec<i64>>> = None;
    let mut torsion = vec![1i64; ld];
    for &(i, j) in &type_a {
        let Some(e) = (0..sc.roots.len()).find(|&e| (0..r).all(|v| sc.apply(e, &eps[v]) == hterms[i].base[v])) else {
            return fail("decompose", format!("H term {i} matches no embedding"));
        };
        let mut rows = Vec::with_capacity(ld);
        for (nu, t) in torsion.iter_mut().enumerate() {
            let beta = &g_red.terms()[j].base[nu];
            let Some(x) = sc.preimage(e, &inc.apply(beta)) else {
                return fail("decompose", format!("no preimage of {beta} under embedding {e}"));
            };
            let dec = unit_decompose(&x, sys).or_else(|err| fail("decompose", err.to_string()))?;
            let ord = dec.zeta.root_of_unity_order().unwrap_or(1) as i64;
            *t = t.lcm(&ord);
            rows.push(dec.exponents);
        }
        match &a_mat {
            None => a_mat = Some(rows),
            Some(a0) if *a0 == rows => {}
            Some(a0) => return fail("lattice-consistency", format!("A differs across pairs: {a0:?} vs {rows:?}")),
        }
    }
    let a_mat = a_mat.expect("at least one pair");
    let hhat = &witnesses[0].hit.h;
    let khat = &witnesses[0].kp;
    let b: Vec<i64> = (0..r).map(|v| hhat[v] - (0..ld).map(|nu| khat[nu] * a_mat[nu][v]).sum::<i64>()).collect();
    let lattice = ShiftedSublattice::new(a_mat, b).or_else(|e| fail("decompose", e.to_string()))?;
    let pts: Vec<(Vec<i64>, Vec<i64>)> = witnesses.iter().map(|w| (w.kp.clone(), w.hit.h.clone())).collect();
    let fitted = fit_affine_points(&pts);
    if fitted.as_ref() != Some(&lattice) {
        return fail("lattice-consistency", format!("witness fit {fitted:?} disagrees with {lattice:?}"));
    }
    transcript.push(Check::new(
        "lattice-consistency",
        true,
        format!("A = {:?}, b = {:?} from {} pairs, equal to the witness fit", lattice.a, lattice.b, type_a.len()),
    ));

    // G* = H|♯ along the torsion progression; G0 = G0_I
    let tprog = progression(khat, &torsion);
    let hsharp = hrec.h.restrict_sublattice(&lattice).or_else(|e| fail("identity", e.to_string()))?;
    let mut g0 = g0_i.embed(inc);
    let diff = g_dom.embed(inc).sub(&hsharp).sub(&g0);
    let zc = diff.is_zero_on_progression(&tprog).or_else(|e| fail("identity", e.to_string()))?;
    if !zc.vanishes {
        return fail("identity", format!("G − H|♯ − G0 = {} on the progression", zc.merged));
    }
    transcript.push(Check::new(
        "identity",
        true,
        format!("G − H|♯ − G0 merges to zero on {:?} + {:?}N", tprog.offsets, tprog.steps),
    ));
    let g0_on_t = g0.is_zero_on_progression(&tprog).or_else(|e| fail("zero-locus", e.to_string()))?;
    let mut reduced = false;
    let mut progression_c = tprog.clone();
    let zero_locus = if g0_on_t.vanishes {
        g0 = MultiRecurrence::zero(&sc.ambient, ld);
        reduced = true;
        Some(tprog.clone())
    } else {
        let steps: Vec<i64> = wsteps.iter().zip(&torsion).map(|(a, t)| a.lcm(t)).collect();
        let z = progression(khat, &steps);
        let zc = g0.is_zero_on_progression(&z).or_else(|e| fail("zero-locus", e.to_string()))?;
        zc.vanishes.then_some(z)
    };
    let mut witnesses: Vec<Hit> = witnesses.into_iter().map(|w| w.hit).collect();
    if !reduced && reduce_g0 {
        let (refined, detail) = refine_by_zeros(&g0, &tprog, &pts, cfg.sml_bound)?;
        transcript.push(Check::new("sml-refinement", true, detail));
        progression_c = refined.clone();
        witnesses.retain(|h| {
            let kp: Vec<i64> = free.iter().zip(&class).map(|(&v, r)| (h.k[v] - r) / den).collect();
            refined.contains(&kp)
        });
        g0 = MultiRecurrence::zero(&sc.ambient, ld);
        reduced = true;
    } else if !reduced && zero_locus.is_none() {
        return fail("zero-locus", "G0 vanishes identically on no certified progression");
    }
    transcript.push(Check::new(
        "zero-locus",
        true,
        if reduced { "G0 = 0 on the certified progression".to_string() } else { format!("G0 vanishes on {zero_locus:?}") },
    ));
    let zero_locus = if reduced { Some(progression_c.clone()) } else { zero_locus };
    let cert = ExceptionCertificate {
        component: l,
        h: hrec,
        g: g.clone(),
        domain,
        lattice,
        progression: progression_c,
        g0,
        zero_locus,
        reduced,
        witnesses,
        transcript: Vec::new(),
        sc: tab.sc.clone(),
    };
    let ok = cert.verify_samples(cfg.sample_points);
    if !ok {
        return fail("sampling", format!("identity fails at one of {} sampled points", cfg.sample_points));
    }
    transcript.push(Check::new("sampling", true, format!("{} progression points agree exactly", cfg.sample_points)));
    Ok(cert)
}

fn power(base: &[Element], e: &[i64]) -> Element {
    base.iter().zip(e).fold(base[0].field().one(), |acc, (b, &x)| &acc * &b.pow(x))
}

fn progression(hat: &[i64], steps: &[i64]) -> MultiProgression {
    let offsets = hat.iter().zip(steps).map(|(h, d)| h.mod_floor(d)).collect();
    MultiProgression { offsets, steps: steps.to_vec() }
}

/// Intersects the torsion progression with a progression of zeros of `G_0`,
/// preferring the one through most witnesses.
fn refine_by_zeros(
    g0: &MultiRecurrence,
    tprog: &MultiProgression,
    pts: &[(Vec<i64>, Vec<i64>)],
    bound: i64,
) -> std::result::Result<(MultiProgression, String), Failure> {
    let zs = g0.sml_zero_structure(bound).or_else(|e| fail("sml-refinement", e.to_string()))?;
    let (o, t) = (tprog.offsets[0], tprog.steps[0]);
    let mut best: Option<(usize, MultiProgression)> = None;
    for &(c, d) in &zs.progressions {
        let m = d.lcm(&t);
        let Some(x) = (0..m).find(|x| (x - c).mod_floor(&d) == 0 && (x - o).mod_floor(&t) == 0) else { continue };
        let prog = MultiProgression { offsets: vec![x], steps: vec![m] };
        let count = pts.iter().filter(|(kp, _)| prog.contains(kp)).count();
        if best.as_ref().is_none_or(|(n, _)| count > *n) {
            best = Some((count, prog));
        }
    }
    match best {
        Some((count, prog)) if count > 0 => {
            let detail = format!("G0 vanishes on {} + {}N ({count} witnesses); period {}", prog.offsets[0], prog.steps[0], zs.period);
            Ok((prog, detail))
        }
        _ => fail("sml-refinement", format!("no zero progression of G0 meets the witnesses (sporadic {:?})", zs.sporadic)),
    }
}
