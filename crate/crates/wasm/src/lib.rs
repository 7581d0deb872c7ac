//! Browser bindings for the demo page: every function takes plain numbers
//! or strings and returns a JSON string, so the page needs no framework and
//! no generated types. Errors come back as `{"error": "..."}`.

use mfnum::groupalg::{self, block_decomposition, defect, group_algebra, out_bound};
use mfnum::iso::{self, IsoOutcome};
use mfnum::morita::{self};
use mfnum::samples;
use mfnum::field::FieldSpec;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn err(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Explore `F_{p^m}`: element table with Frobenius orbits and subfield
/// degrees. Capped at 256 elements so the table stays readable.
#[wasm_bindgen]
pub fn field_panel(p: u32, m: u32) -> String {
    let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if q > 256 {
        return err("demo cap: p^m must be at most 256");
    }
    let spec = match FieldSpec::get(p as u64, m) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let mut elements = Vec::new();
    let mut seen = vec![false; spec.q() as usize];
    let mut orbits: Vec<Vec<u64>> = Vec::new();
    for code in 0..spec.q() {
        let order = if code == 0 { Value::Null } else { json!(spec.mult_order(code).unwrap()) };
        elements.push(json!({
            "code": code,
            "coeffs": spec.decode(code),
            "degree": spec.subfield_degree(code),
            "frobenius": spec.frobenius(code, 1),
            "order": order,
        }));
        if !seen[code as usize] {
            let mut orbit = vec![code];
            seen[code as usize] = true;
            let mut cur = spec.frobenius(code, 1);
            while cur != code {
                seen[cur as usize] = true;
                orbit.push(cur);
                cur = spec.frobenius(cur, 1);
            }
            orbits.push(orbit);
        }
    }
    json!({
        "p": spec.p(),
        "m": spec.m(),
        "q": spec.q(),
        "modulus": spec.modulus(),
        "elements": elements,
        "orbits": orbits,
    })
    .to_string()
}

fn named_group(name: &str) -> Option<std::sync::Arc<groupalg::FiniteGroup>> {
    match name {
        "c2" => Some(samples::cyclic_group(2)),
        "c3" => Some(samples::cyclic_group(3)),
        "c4" => Some(samples::cyclic_group(4)),
        "c6" => Some(samples::cyclic_group(6)),
        "v4" => Some(samples::klein_four()),
        "s3" => Some(samples::sym3()),
        "a4" => Some(samples::alt4()),
        _ => None,
    }
}

/// Block data of a group algebra `kG` over `F_{p^m}`: splits the algebra
/// over its splitting field if needed, then reports blocks, Cartan data,
/// defects and the two Frobenius numbers.
#[wasm_bindgen]
pub fn group_panel(group: &str, p: u32, m: u32) -> String {
    let Some(g) = named_group(group) else {
        return err(format!("unknown group '{group}'"));
    };
    let spec = match FieldSpec::get(p as u64, m) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let a = match group_algebra(&g, &spec) {
        Ok(a) => a,
        Err(e) => return err(e),
    };
    let (a, split_note) = match a.is_split() {
        Ok(true) => (a, Value::Null),
        Ok(false) => match a.split_over() {
            Ok(b) => {
                let note = format!("re-expressed over GF({},{})", b.spec().p(), b.spec().m());
                (b, json!(note))
            }
            Err(e) => return err(e),
        },
        Err(e) => return err(e),
    };
    let cartan = match a.cartan_matrix() {
        Ok(c) => c,
        Err(e) => return err(e),
    };
    let dec = match block_decomposition(&a) {
        Ok(d) => d,
        Err(e) => return err(e),
    };
    let blocks: Vec<Value> = dec
        .blocks
        .iter()
        .map(|b| {
            json!({
                "dim": b.dim(),
                "simples": b.simple_dims().ok(),
                "defect": defect(b).ok(),
            })
        })
        .collect();
    let sb = match morita::subfield_bound(&a) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let mf = morita::morita_frobenius_number(&a, sb.m, 4_000_000)
        .map(|o| o.to_string())
        .unwrap_or_else(|e| e.to_string());
    let smf = morita::sigma_morita_frobenius_number(&a, sb.m, 4_000_000)
        .map(|o| o.to_string())
        .unwrap_or_else(|e| e.to_string());
    let bound = out_bound(&g, p as u64).ok();
    json!({
        "group": group,
        "order": g.order(),
        "field": format!("GF({},{})", a.spec().p(), a.spec().m()),
        "split_note": split_note,
        "dim": a.dim(),
        "simple_dims": a.simple_dims().ok(),
        "cartan": cartan.rows_vec(),
        "elementary_divisors": cartan.smith_diagonal(),
        "blocks": blocks,
        "subfield_bound": sb.m,
        "mf_number": mf,
        "sigma_mf_number": smf,
        "out_bound": bound,
    })
    .to_string()
}

/// The quantum-plane panel: for a nonzero `q` in `F_9` (given by its code),
/// the twist orbit, the subfield bound, and both Frobenius numbers.
#[wasm_bindgen]
pub fn aq_panel(q_code: u32) -> String {
    let f9 = samples::gf(3, 2);
    let q = q_code as u64;
    if q == 0 || q >= 9 {
        return err("q must be a nonzero element of F_9 (code 1..8)");
    }
    let a = match samples::quantum_plane(f9.clone(), q) {
        Ok(a) => a,
        Err(e) => return err(e),
    };
    let mut orbit = vec![q];
    let mut cur = f9.frobenius(q, 1);
    while cur != q {
        orbit.push(cur);
        cur = f9.frobenius(cur, 1);
    }
    let sb = match morita::subfield_bound(&a) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let mf = morita::morita_frobenius_number(&a, sb.m, 8_000_000)
        .map(|o| o.to_string())
        .unwrap_or_else(|e| e.to_string());
    let smf = morita::sigma_morita_frobenius_number(&a, sb.m, 8_000_000)
        .map(|o| o.to_string())
        .unwrap_or_else(|e| e.to_string());
    json!({
        "q": { "code": q, "coeffs": f9.decode(q), "order": f9.mult_order(q).unwrap() },
        "twist_orbit": orbit,
        "dim": a.dim(),
        "radical_dim": a.radical().map(|r| r.rows()).unwrap_or(0),
        "subfield_bound": sb.m,
        "mf_number": mf,
        "sigma_mf_number": smf,
    })
    .to_string()
}

/// Decide whether two quantum planes are isomorphic (exhaustive bounded
/// search); `q1`, `q2` are codes of nonzero elements of `F_9`.
#[wasm_bindgen]
pub fn aq_iso(q1: u32, q2: u32) -> String {
    let f9 = samples::gf(3, 2);
    let (q1, q2) = (q1 as u64, q2 as u64);
    if q1 == 0 || q1 >= 9 || q2 == 0 || q2 >= 9 {
        return err("parameters must be nonzero elements of F_9 (code 1..8)");
    }
    let a = match samples::quantum_plane(f9.clone(), q1) {
        Ok(a) => a,
        Err(e) => return err(e),
    };
    let b = match samples::quantum_plane(f9.clone(), q2) {
        Ok(b) => b,
        Err(e) => return err(e),
    };
    match iso::iso_search(&a, &b, 10_000_000) {
        Ok(IsoOutcome::Found(_)) => json!({ "isomorphic": true }).to_string(),
        Ok(IsoOutcome::NotIsomorphic(_)) => json!({ "isomorphic": false }).to_string(),
        Ok(IsoOutcome::Unknown) => json!({ "isomorphic": Value::Null }).to_string(),
        Err(e) => err(e),
    }
}

/// Run the three transfer certificates on the shift-by-one equivalence of
/// the quantum plane with twist power `t`; returns the full report.
#[wasm_bindgen]
pub fn aq_transfer(q_code: u32, t: u32) -> String {
    use mfnum::derived::{EquivalenceData, PerversityDatum};
    use mfnum::morita::{check_sigma_morita, SigmaCheck, SigmaWitness};
    let f9 = samples::gf(3, 2);
    let q = q_code as u64;
    if q == 0 || q >= 9 {
        return err("q must be a nonzero element of F_9 (code 1..8)");
    }
    let a = match samples::quantum_plane(f9.clone(), q) {
        Ok(a) => a,
        Err(e) => return err(e),
    };
    let f = match EquivalenceData::shift_data(&a, 1) {
        Ok(f) => f,
        Err(e) => return err(e),
    };
    let full: std::collections::BTreeSet<usize> = [0].into();
    let d = match PerversityDatum::new(a.clone(), a.clone(), vec![1], vec![full.clone()], vec![full]) {
        Ok(d) => d,
        Err(e) => return err(e),
    };
    let twisted = a.frobenius_twist(t);
    let mut witness = None;
    let search = iso::for_each_isomorphism(&twisted, &a, 10_000_000, |m| {
        match check_sigma_morita(&a, t, &SigmaWitness::Morphism(m.clone())) {
            Ok(SigmaCheck::Yes) => {
                witness = Some(m.clone());
                true
            }
            _ => false,
        }
    });
    if let Err(e) = search {
        return err(e);
    }
    let Some(w) = witness else {
        return json!({
            "witness_found": false,
            "note": format!("no sigma^{t}-Morita witness exists for this q (try the twist orbit)"),
        })
        .to_string();
    };
    match morita::verify_transfer(&f, &d, &SigmaWitness::Morphism(w), t) {
        Ok(report) => json!({
            "witness_found": true,
            "report": serde_json::to_value(&report).expect("report serializes"),
            "text": report.to_string(),
        })
        .to_string(),
        Err(e) => err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_return_wellformed_json() {
        let v: serde_json::Value = serde_json::from_str(&field_panel(2, 2)).unwrap();
        assert_eq!(v["q"], 4);
        let v: serde_json::Value = serde_json::from_str(&group_panel("c3", 2, 2)).unwrap();
        assert_eq!(v["blocks"].as_array().unwrap().len(), 3);
        let v: serde_json::Value = serde_json::from_str(&aq_iso(5, 5)).unwrap();
        assert_eq!(v["isomorphic"], true);
        let v: serde_json::Value = serde_json::from_str(&field_panel(2, 20)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn aq_transfer_passes_for_the_order_eight_parameter() {
        let f9 = samples::gf(3, 2);
        let q = f9.root_of_unity(8).unwrap() as u32;
        let v: serde_json::Value = serde_json::from_str(&aq_transfer(q, 2)).unwrap();
        assert_eq!(v["witness_found"], true);
        assert_eq!(v["report"]["passed"], true);
    }
}
