use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Value};

use kmfg::adm::AdmGraph;
use kmfg::cartan::CartanMatrix;
use kmfg::coxeter::WeylGroup;
use kmfg::fpgroup::{self, AbelianInvariants, Check, CheckStatus, EnumerationResult};
use kmfg::format_index_set;
use kmfg::pi1::{Caps, FlagReport, GroupOrder, Pi1Report};

use crate::Failure;

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn one_based(set: &[usize]) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

/// One-line description of `π₁(G/P_J)`.
pub fn flag_headline(f: &FlagReport) -> String {
    if let Some(c) = f.closed_form {
        return format!("pi1(G/P_J) = {c}");
    }
    match &f.order {
        GroupOrder::Finite { order } => {
            if f.abelian.order() == Some(BigUint::from(*order)) {
                format!("pi1(G/P_J) = {}", f.abelian)
            } else {
                format!("pi1(G/P_J) is non-abelian of order {order}")
            }
        }
        GroupOrder::Infinite => format!("pi1(G/P_J) is infinite with abelianization {}", f.abelian),
        GroupOrder::Exhausted { .. } => format!("pi1(G/P_J) has abelianization {}, order undecided", f.abelian),
    }
}

pub fn flag_text(f: &FlagReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "J = {}", format_index_set(&f.set));
    let _ = writeln!(out, "{}", flag_headline(f));
    let _ = writeln!(out, "presentation: {}", f.presentation);
    let _ = writeln!(out, "abelianization: {}", f.abelian);
    let _ = writeln!(out, "order: {}", f.order);
    out
}

pub fn flag_json(f: &FlagReport) -> Value {
    let mut v = json!({
        "set": one_based(&f.set),
        "presentation": f.presentation.to_json(),
        "presentation_text": f.presentation.to_text(),
        "abelian": f.abelian,
        "order": f.order,
    });
    if let Some(c) = f.closed_form {
        v["closed_form"] = json!(c);
    }
    v
}

pub fn full_report(r: &Pi1Report) -> String {
    let mut out = String::new();
    let h = &r.hypotheses;
    let _ = writeln!(
        out,
        "hypotheses: irreducible={} symmetrizable={} two-spherical={} spherical={}",
        yes_no(h.irreducible),
        yes_no(h.symmetrizable),
        yes_no(h.two_spherical),
        yes_no(h.spherical)
    );
    let _ = writeln!(out, "components:");
    for c in &r.components {
        let set: Vec<usize> = c.vertices.iter().map(|v| v - 1).collect();
        let _ = writeln!(out, "  {} {} -> {}", c.colour, format_index_set(&set), c.contribution);
    }
    if let Some(factors) = &r.factors {
        let _ = writeln!(out, "reducible diagram: product over irreducible factors");
        for f in factors {
            let set: Vec<usize> = f.vertices.iter().map(|v| v - 1).collect();
            let _ = writeln!(out, "  factor {}: {}", format_index_set(&set), f.pi1);
        }
    }
    let _ = writeln!(out, "pi1(G) = {}", r.pi1_g);
    let _ = writeln!(out, "pi1(K) = {}", r.pi1_k.pi1);
    if r.pi1_k.caveat {
        let _ = writeln!(out, "caveat: K -> G is only known to be a weak homotopy equivalence for symmetrizable matrices");
    }
    for s in &r.spin {
        let label = if s.kappa.is_empty() { "-" } else { &s.kappa };
        let _ = writeln!(out, "pi1(Spin(kappa={label})) = {}", s.pi1);
    }
    if !r.spin_complete {
        let _ = writeln!(out, "(spin colourings truncated to the constant ones)");
    }
    for f in &r.flags {
        let _ = writeln!(out, "J = {}: {}", format_index_set(&f.set), flag_headline(f));
    }
    out
}

pub struct Suite {
    pub text: String,
    pub json: Value,
    pub status: CheckStatus,
}

fn combine(a: CheckStatus, b: CheckStatus) -> CheckStatus {
    match (a, b) {
        (CheckStatus::Fail, _) | (_, CheckStatus::Fail) => CheckStatus::Fail,
        (CheckStatus::Inconclusive, _) | (_, CheckStatus::Inconclusive) => CheckStatus::Inconclusive,
        _ => CheckStatus::Pass,
    }
}

fn check(name: String, expected: String, observed: String, status: CheckStatus) -> Check {
    Check {
        name,
        expected,
        observed,
        status,
    }
}

fn pass_if(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Component groups against the structure lemma, the product law for
/// `G/B`, the two presentations of `π₁(G/P_J)` against each other, and the
/// simply-laced closed form.
pub fn verify_suite(m: &CartanMatrix, caps: Caps) -> Result<Suite, Failure> {
    let g = AdmGraph::build(m);
    let mut checks: Vec<Check> = Vec::new();
    let mut components = Vec::new();

    let mut sum = AbelianInvariants::default();
    let mut product: Option<BigUint> = Some(BigUint::from(1u8));
    for c in g.components() {
        let v = fpgroup::verify_component(m, &c.vertices, c.colour, caps.max_cosets)?;
        for ch in &v.checks {
            checks.push(check(
                format!("component {} ({}) {}", format_index_set(&c.vertices), c.colour, ch.name),
                ch.expected.clone(),
                ch.observed.clone(),
                ch.status,
            ));
        }
        sum = sum.direct_sum(&v.abelian);
        product = match (product, v.enumeration) {
            (Some(p), EnumerationResult::Finite { index }) => Some(p * BigUint::from(index)),
            _ => None,
        };
        let mut row = serde_json::to_value(&v).expect("verification serializes");
        row["vertices"] = json!(one_based(&c.vertices));
        components.push(row);
    }

    let full = fpgroup::flag_presentation(m, &[])?;
    let full_ab = fpgroup::abelianization(&full);
    checks.push(check(
        "product law: abelianization of G/B".into(),
        sum.to_string(),
        full_ab.to_string(),
        pass_if(sum == full_ab),
    ));
    if let Some(expected) = product {
        let e = fpgroup::todd_coxeter(&full, &[], caps.max_cosets)?;
        let (observed, status) = match e {
            EnumerationResult::Finite { index } => (index.to_string(), pass_if(BigUint::from(index) == expected)),
            EnumerationResult::Exhausted { limit } => (format!("exhausted at {limit} cosets"), CheckStatus::Inconclusive),
        };
        checks.push(check("product law: order of G/B".into(), expected.to_string(), observed, status));
    }

    let w = WeylGroup::new(m);
    let sets = std::iter::once(Vec::new()).chain((0..m.rank()).map(|i| vec![i]));
    for set in sets {
        let flag = fpgroup::flag_presentation(m, &set)?;
        let cw = fpgroup::cw_presentation(m, &set, &w)?;
        let (a, b) = (fpgroup::abelianization(&flag), fpgroup::abelianization(&cw));
        checks.push(check(
            format!("cell presentation J = {}", format_index_set(&set)),
            a.to_string(),
            b.to_string(),
            pass_if(a == b),
        ));
        if m.is_simply_laced() && m.is_irreducible() && !set.is_empty() {
            let k = m.rank() - set.len();
            let expected = AbelianInvariants::new(0, &vec![2; k]);
            checks.push(check(
                format!("closed form J = {}", format_index_set(&set)),
                expected.to_string(),
                a.to_string(),
                pass_if(expected == a),
            ));
        }
    }

    let status = checks.iter().fold(CheckStatus::Pass, |s, c| combine(s, c.status));
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(text, "[{}] {}: expected {}, observed {}", c.status, c.name, c.expected, c.observed);
    }
    let _ = writeln!(text, "verdict: {status}");
    let json = json!({
        "components": components,
        "checks": checks,
        "status": status,
    });
    Ok(Suite { text, json, status })
}
