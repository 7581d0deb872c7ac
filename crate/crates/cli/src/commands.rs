//! Command dispatch: each command produces a human-readable section and a
//! machine-readable JSON value, deterministically for a fixed manifest and
//! flags. Exit codes: 0 success/pass, 1 verification failure, 2 input
//! error, 3 budget exhaustion.

use crate::manifest::{render_elem, CliError, CliResult, WitnessDecl, Workspace};
use mfnum::derived::PerversityCheck;
use mfnum::groupalg;
use mfnum::iso;
use mfnum::morita::{self, MfOutcome, SigmaCheck, SigmaWitness};
use serde_json::{json, Value};
use std::collections::BTreeSet;

pub struct Report {
    pub human: String,
    pub machine: Value,
    pub exit: i32,
}

pub struct Flags {
    pub seed: u64,
    pub budget: u64,
    pub max_m: Option<u32>,
}

fn chains_json(chains: &[BTreeSet<usize>]) -> Value {
    json!(chains.iter().map(|s| s.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn datum_human(d: &mfnum::derived::PerversityDatum) -> String {
    let mut out = format!("r = {}, q = {:?}\n", d.r(), d.q());
    out.push_str(&format!(
        "source chain: {:?}\ntarget chain: {:?}",
        d.source_chain(),
        d.target_chain()
    ));
    out
}

fn datum_json(d: &mfnum::derived::PerversityDatum) -> Value {
    json!({
        "r": d.r(),
        "q": d.q(),
        "source_chain": chains_json(d.source_chain()),
        "target_chain": chains_json(d.target_chain()),
    })
}

fn resolve_witness(
    decl: &(u32, WitnessDecl),
    budget: u64,
) -> CliResult<(u32, SigmaWitness, bool)> {
    match &decl.1 {
        WitnessDecl::Resolved(w) => Ok((decl.0, w.clone(), false)),
        WitnessDecl::Search { algebra, t } => {
            let twisted = algebra.frobenius_twist(*t);
            let mut found: Option<SigmaWitness> = None;
            iso::for_each_isomorphism(&twisted, algebra, budget, |m| {
                let w = SigmaWitness::Morphism(m.clone());
                match morita::check_sigma_morita(algebra, *t, &w) {
                    Ok(SigmaCheck::Yes) => {
                        found = Some(w);
                        true
                    }
                    _ => false,
                }
            })
            .map_err(CliError::Core)?;
            match found {
                Some(w) => Ok((*t, w, true)),
                None => Err(CliError::Validation {
                    object: "witness".into(),
                    cause: format!("no sigma^{t}-Morita witness found by search"),
                }),
            }
        }
    }
}

pub fn run(ws: &Workspace, command: &crate::Command, flags: &Flags) -> CliResult<Report> {
    use crate::Command;
    match command {
        Command::Simples { algebra } => {
            let a = ws.algebra(algebra)?;
            let dims = a.simple_dims().map_err(CliError::Core)?;
            let counts =
                mfnum::modrep::composition_factor_counts(&a.regular_module(), flags.seed)
                    .map_err(CliError::Core)?;
            let mut human = format!("{} simple module(s) of '{algebra}':\n", dims.len());
            for (i, d) in dims.iter().enumerate() {
                human.push_str(&format!(
                    "  simple {i}: dimension {d}, multiplicity {} in the regular module\n",
                    counts[i]
                ));
            }
            Ok(Report {
                human,
                machine: json!({"command": "simples", "algebra": algebra,
                    "dims": dims, "regular_multiplicities": counts}),
                exit: 0,
            })
        }
        Command::Cartan { algebra } => {
            let a = ws.algebra(algebra)?;
            let c = a.cartan_matrix().map_err(CliError::Core)?;
            let human = format!("Cartan matrix of '{algebra}':\n{c}\n");
            Ok(Report {
                human,
                machine: json!({"command": "cartan", "algebra": algebra, "matrix": c.rows_vec()}),
                exit: 0,
            })
        }
        Command::Twist { algebra, t } => {
            let a = ws.algebra(algebra)?;
            let tw = a.frobenius_twist(*t);
            let fixed = tw.structural_eq(a);
            let mut entries = Vec::new();
            for i in 0..tw.dim() {
                for j in 0..tw.dim() {
                    for (k, &c) in tw.prod(i, j).iter().enumerate() {
                        if c != 0 {
                            entries.push(json!([i, j, k, render_elem(tw.spec(), c)]));
                        }
                    }
                }
            }
            let human = format!(
                "twist of '{algebra}' by sigma^{t}: {} structure constants; equals the original bitwise: {fixed}\n",
                entries.len()
            );
            Ok(Report {
                human,
                machine: json!({"command": "twist", "algebra": algebra, "t": t,
                    "bitwise_equal": fixed, "constants": entries}),
                exit: 0,
            })
        }
        Command::Blocks { algebra } => {
            let a = ws.algebra(algebra)?;
            let dec = groupalg::block_decomposition(a).map_err(CliError::Core)?;
            let mut human = format!("{} block(s) of '{algebra}':\n", dec.blocks.len());
            let mut blocks = Vec::new();
            for (i, (b, e)) in dec.blocks.iter().zip(&dec.idempotents).enumerate() {
                let idem: Vec<String> =
                    e.iter().map(|&c| render_elem(a.spec(), c)).collect();
                human.push_str(&format!(
                    "  block {i}: dimension {}, idempotent [{}]\n",
                    b.dim(),
                    idem.join(", ")
                ));
                blocks.push(json!({"dim": b.dim(), "idempotent": idem}));
            }
            Ok(Report {
                human,
                machine: json!({"command": "blocks", "algebra": algebra, "blocks": blocks}),
                exit: 0,
            })
        }
        Command::Defect { algebra } => {
            let a = ws.algebra(algebra)?;
            let d = groupalg::defect(a).map_err(CliError::Core)?;
            Ok(Report {
                human: format!("defect of '{algebra}': {d}\n"),
                machine: json!({"command": "defect", "algebra": algebra, "defect": d}),
                exit: 0,
            })
        }
        Command::MfNumber { algebra } => {
            let a = ws.algebra(algebra)?;
            let max_m = match flags.max_m {
                Some(m) => m,
                None => morita::subfield_bound(a).map_err(CliError::Core)?.m,
            };
            let out = morita::morita_frobenius_number(a, max_m, flags.budget)
                .map_err(CliError::Core)?;
            let exit = if matches!(out, MfOutcome::Unknown) { 3 } else { 0 };
            Ok(Report {
                human: format!("Morita Frobenius number of '{algebra}' (max m = {max_m}): {out}\n"),
                machine: json!({"command": "mf-number", "algebra": algebra,
                    "max_m": max_m, "result": out.to_string()}),
                exit,
            })
        }
        Command::SigmaMfNumber { algebra } => {
            let a = ws.algebra(algebra)?;
            let max_m = match flags.max_m {
                Some(m) => m,
                None => morita::subfield_bound(a).map_err(CliError::Core)?.m,
            };
            let out = morita::sigma_morita_frobenius_number(a, max_m, flags.budget)
                .map_err(CliError::Core)?;
            let exit = if matches!(out, MfOutcome::Unknown) { 3 } else { 0 };
            Ok(Report {
                human: format!(
                    "sigma-Morita Frobenius number of '{algebra}' (max m = {max_m}): {out}\n"
                ),
                machine: json!({"command": "sigma-mf-number", "algebra": algebra,
                    "max_m": max_m, "result": out.to_string()}),
                exit,
            })
        }
        Command::SubfieldBound { algebra } => {
            let a = ws.algebra(algebra)?;
            let sb = morita::subfield_bound(a).map_err(CliError::Core)?;
            Ok(Report {
                human: format!(
                    "subfield bound of '{algebra}': {} (split form over GF({},{}))\n",
                    sb.m,
                    sb.form.spec().p(),
                    sb.form.spec().m()
                ),
                machine: json!({"command": "subfield-bound", "algebra": algebra, "m": sb.m}),
                exit: 0,
            })
        }
        Command::CheckPerverse { equivalence, datum } => {
            let e = ws.equivalence(equivalence)?;
            let d = ws.datum(datum)?;
            let check = mfnum::derived::check_perverse(e, d).map_err(CliError::Core)?;
            match check {
                PerversityCheck::Perverse => Ok(Report {
                    human: format!(
                        "Perverse: '{equivalence}' respects the datum '{datum}'\n{}\n",
                        datum_human(d)
                    ),
                    machine: json!({"command": "check-perverse", "equivalence": equivalence,
                        "datum": datum_json(d), "perverse": true, "violations": []}),
                    exit: 0,
                }),
                PerversityCheck::Violations(v) => {
                    let mut human = format!(
                        "Violation: '{equivalence}' breaks the datum '{datum}' {} time(s):\n",
                        v.len()
                    );
                    let mut list = Vec::new();
                    for viol in &v {
                        human.push_str(&format!(
                            "  step {}, simple {}, position j = {}, factor {}\n",
                            viol.step, viol.simple, viol.position, viol.factor
                        ));
                        list.push(json!({"step": viol.step, "simple": viol.simple,
                            "position": viol.position, "factor": viol.factor}));
                    }
                    Ok(Report {
                        human,
                        machine: json!({"command": "check-perverse", "equivalence": equivalence,
                            "datum": datum_json(d), "perverse": false, "violations": list}),
                        exit: 1,
                    })
                }
            }
        }
        Command::DatumCompose { first, second } => {
            let d1 = ws.datum(first)?;
            let d2 = ws.datum(second)?;
            let c = d1.compose(d2).map_err(CliError::Core)?;
            Ok(Report {
                human: format!("composition of '{first}' then '{second}':\n{}\n", datum_human(&c)),
                machine: json!({"command": "datum-compose", "result": datum_json(&c)}),
                exit: 0,
            })
        }
        Command::DatumInvert { datum } => {
            let d = ws.datum(datum)?.invert();
            Ok(Report {
                human: format!("inverse of '{datum}':\n{}\n", datum_human(&d)),
                machine: json!({"command": "datum-invert", "result": datum_json(&d)}),
                exit: 0,
            })
        }
        Command::DatumTwist { datum, t } => {
            let d = ws.datum(datum)?.twist(*t).map_err(CliError::Core)?;
            Ok(Report {
                human: format!("twist of '{datum}' by sigma^{t}:\n{}\n", datum_human(&d)),
                machine: json!({"command": "datum-twist", "t": t, "result": datum_json(&d)}),
                exit: 0,
            })
        }
        Command::VerifyTransfer { equivalence, datum, witness } => {
            let e = ws.equivalence(equivalence)?;
            let d = ws.datum(datum)?;
            let wdecl = ws.witness(witness)?;
            let (t, w, searched) = resolve_witness(wdecl, flags.budget)?;
            let report = morita::verify_transfer(e, d, &w, t).map_err(CliError::Core)?;
            let mut human = String::new();
            if searched {
                human.push_str(&format!("witness resolved by search (t = {t})\n"));
            }
            human.push_str(&format!("{report}\n"));
            let exit = if report.passed { 0 } else { 1 };
            Ok(Report {
                human,
                machine: json!({"command": "verify-transfer", "equivalence": equivalence,
                    "datum": datum, "witness": witness,
                    "report": serde_json::to_value(&report).expect("report serializes")}),
                exit,
            })
        }
        Command::OutBound { group, p } => {
            let g = ws.group(group)?;
            let b = groupalg::out_bound(g, *p).map_err(CliError::Core)?;
            Ok(Report {
                human: format!("outer-automorphism bound of '{group}' at p = {p}: {b}\n"),
                machine: json!({"command": "out-bound", "group": group, "p": p, "bound": b}),
                exit: 0,
            })
        }
    }
}
