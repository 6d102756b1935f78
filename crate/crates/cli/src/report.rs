//! Assembly of the full analysis report.

use std::time::Instant;

use serde_json::{json, Map, Value};

use singlab_core::error::Result;
use singlab_core::rat::Rat;
use singlab_core::{mulideal, thresholds};

use crate::input::{diagram_json, Input};

pub fn analyze(
    input: &Input,
    max_k: Option<usize>,
    multiplier_scale: Option<&Rat>,
    refined: bool,
    seed: u64,
) -> Result<Value> {
    let started = Instant::now();
    let p = input.diagram()?;
    let mut chain = thresholds::verify_chain(&p)?;
    if let Some(cap) = max_k {
        chain.lelong.retain(|(k, _)| *k <= cap);
        chain.chain_verdicts.retain(|(k, _)| *k <= cap);
    }
    if refined {
        let top = max_k.unwrap_or(chain.codim_l).min(chain.codim_l);
        for k in 1..=top {
            chain.refined_bounds.push((k, thresholds::refined_bound(&p, k)?));
        }
    }
    let skoda_geom = thresholds::skoda_lower_equality(&p)?;

    let mut out = Map::new();
    out.insert(
        "input".into(),
        json!({
            "n": input.n(),
            "expression": input.expression(),
        }),
    );
    out.insert(
        "indicator".into(),
        match input.indicator_expr() {
            Some(e) => json!(e.to_canonical_string()),
            None => Value::Null,
        },
    );
    out.insert("diagram".into(), diagram_json(&p)?);
    let report = chain.to_json();
    for (k, v) in report.as_object().expect("report object") {
        out.insert(k.clone(), v.clone());
    }
    out.insert("skoda_lower_equality".into(), json!(skoda_geom));
    if let Some(c) = multiplier_scale {
        let gens = mulideal::generators(&p, c)?;
        out.insert(
            "multiplier_ideal".into(),
            mulideal::generators_json(c, &gens),
        );
    }
    out.insert("seed".into(), json!(seed));
    out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    out.insert(
        "timing_ms".into(),
        json!(started.elapsed().as_millis() as u64),
    );
    Ok(Value::Object(out))
}
