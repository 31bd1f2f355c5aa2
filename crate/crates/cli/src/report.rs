//! JSON documents. Every number that is not a small index is an exact string.

use serde_json::{json, Value};

use normrec::intersect::{Check, Detection, ExceptionCertificate, FinitenessReport, Hit};
use normrec::multirec::{MultiProgression, MultiRecurrence, ShiftedSublattice, ZeroStructure};
use normrec::normform::ComponentRecurrence;
use normrec::numberfield::{Element, NumberField};
use normrec::uniteq::{CascadeReport, UnitEqSolution};

pub fn element(e: &Element) -> Value {
    json!(e.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

pub fn elements(es: &[Element]) -> Value {
    Value::Array(es.iter().map(element).collect())
}

pub fn field(k: &NumberField) -> Value {
    json!(k.min_poly_integers().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

pub fn recurrence(g: &MultiRecurrence) -> Value {
    let terms: Vec<Value> = g
        .terms()
        .iter()
        .map(|t| {
            let coeff = if t.coeff.is_constant() {
                json!({ "coeff": element(&t.coeff.constant_term()) })
            } else {
                let monos: Vec<Value> =
                    t.coeff.monomials().map(|(e, c)| json!({ "exp": e, "coeff": element(c) })).collect();
                json!({ "monomials": monos })
            };
            let mut obj = coeff;
            obj["base"] = elements(&t.base);
            obj
        })
        .collect();
    json!({ "field": field(g.field()), "vars": g.vars(), "terms": terms, "text": g.to_string() })
}

pub fn component(c: &ComponentRecurrence) -> Value {
    json!({
        "component": c.component + 1,
        "mu": element(&c.mu),
        "zeta": element(&c.zeta),
        "sigma_order": c.sigma_order,
        "parity": { "unit_norms": c.parity.unit_norms, "zeta_norm": c.parity.zeta_norm },
        "tau": elements(&c.h.constant_coeffs()),
        "recurrence": recurrence(&c.h),
    })
}

pub fn progression(p: &MultiProgression) -> Value {
    json!({ "offsets": p.offsets, "steps": p.steps })
}

pub fn lattice(l: &ShiftedSublattice) -> Value {
    json!({ "A": l.a, "b": l.b })
}

pub fn hit(h: &Hit) -> Value {
    json!({
        "x": h.x_value.to_string(),
        "k": h.k,
        "h": h.h,
        "recurrence_index": h.recurrence_id,
        "solution": h.solution.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

fn transcript(t: &[Check]) -> Value {
    Value::Array(t.iter().map(|c| json!({ "step": c.step, "passed": c.passed, "detail": c.detail })).collect())
}

pub fn certificate(c: &ExceptionCertificate) -> Value {
    json!({
        "H": component(&c.h),
        "ambient_field": field(&c.splitting_container().ambient),
        "domain": lattice(&c.domain),
        "lattice": lattice(&c.lattice),
        "progression": progression(&c.progression),
        "G0": recurrence(&c.g0),
        "zero_locus": c.zero_locus.as_ref().map(progression),
        "reduced": c.reduced,
        "witnesses": c.witnesses.iter().map(hit).collect::<Vec<_>>(),
        "transcript": transcript(&c.transcript),
    })
}

pub fn finiteness(r: &FinitenessReport) -> Value {
    json!({
        "hits": r.hits.iter().map(hit).collect::<Vec<_>>(),
        "boxes": { "k_box": r.k_box, "h_box": r.h_box },
        "failed_step": r.failed_step,
        "notes": r.notes,
        "transcript": transcript(&r.transcript),
    })
}

pub fn detection(d: &Detection) -> Value {
    let mut v = match d {
        Detection::Exception(c) => certificate(c),
        Detection::Finite(r) => finiteness(r),
    };
    v["classification"] = json!(d.classification());
    v
}

pub fn zero_structure(z: &ZeroStructure) -> Value {
    json!({
        "progressions": z.progressions.iter().map(|&(c, d)| json!({ "offset": c, "step": d })).collect::<Vec<_>>(),
        "sporadic": z.sporadic,
        "search_bound": z.search_bound,
        "period": z.period,
    })
}

pub fn unit_solutions(sols: &[UnitEqSolution], cascade: &CascadeReport) -> Value {
    let rows: Vec<Value> = sols
        .iter()
        .zip(&cascade.outcomes)
        .map(|(s, o)| {
            json!({
                "y": elements(&s.y),
                "exponents": s.exponents,
                "degenerate": s.degenerate,
                "vanishing_subsets": s.vanishing_subsets.iter().map(|v| one_based(v)).collect::<Vec<_>>(),
                "cascade": {
                    "depth": o.depth,
                    "blocks": o.blocks.iter().map(|b| json!({
                        "indices": one_based(&b.indices),
                        "relations": b.relations.iter().map(|r| json!({ "i": r.i + 1, "j": r.j + 1, "ratio": element(&r.ratio) })).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                },
            })
        })
        .collect();
    Value::Array(rows)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}
