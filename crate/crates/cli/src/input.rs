//! Input ingestion: `.sing` expression files and `.json` descriptions
//! (monomial exponents, diagram generators, or facet systems).

use std::path::Path;

use serde_json::{json, Value};

use singlab_core::error::{Error, Result};
use singlab_core::expr::{MonomialIdealPresentation, SingularityExpr};
use singlab_core::polyhedron::NewtonPolyhedron;

pub enum Input {
    Expr(SingularityExpr),
    Diagram(NewtonPolyhedron),
}

impl Input {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|x| x == "json") {
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
            let obj = v
                .as_object()
                .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
            if obj.contains_key("monomials") {
                let m = MonomialIdealPresentation::from_json(&v)?;
                return Ok(Self::Expr(SingularityExpr::from_monomials(&m)?));
            }
            Ok(Self::Diagram(NewtonPolyhedron::from_json(&v)?))
        } else {
            Ok(Self::Expr(SingularityExpr::parse(text.trim())?))
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Expr(e) => e.n(),
            Self::Diagram(p) => p.n(),
        }
    }

    /// Canonical expression text, when the input was an expression.
    pub fn expression(&self) -> Option<String> {
        match self {
            Self::Expr(e) => Some(e.to_canonical_string()),
            Self::Diagram(_) => None,
        }
    }

    /// The indicator as an expression, when the input was an expression.
    pub fn indicator_expr(&self) -> Option<SingularityExpr> {
        match self {
            Self::Expr(e) => Some(e.indicator()),
            Self::Diagram(_) => None,
        }
    }

    /// The indicator diagram of the input.
    pub fn diagram(&self) -> Result<NewtonPolyhedron> {
        match self {
            Self::Expr(e) => NewtonPolyhedron::diagram_of(&e.indicator()),
            Self::Diagram(p) => Ok(p.clone()),
        }
    }

    pub fn parse_json(&self) -> Value {
        match self {
            Self::Expr(e) => e.to_json(),
            Self::Diagram(p) => p.to_json(),
        }
    }

    pub fn indicator_json(&self) -> Result<Value> {
        let p = self.diagram()?;
        let mut out = diagram_json(&p)?;
        if let Some(ind) = self.indicator_expr() {
            out.as_object_mut()
                .expect("object")
                .insert("indicator".into(), json!(ind.to_canonical_string()));
        }
        Ok(out)
    }
}

/// Diagram JSON with the hull spelled out: generators, vertices, facets.
pub fn diagram_json(p: &NewtonPolyhedron) -> Result<Value> {
    use singlab_core::rat::format_rat;
    let hull = p.hull()?;
    Ok(json!({
        "n": p.n(),
        "generators": rows(p.generators()),
        "vertices": rows(&hull.vertices),
        "facets": hull
            .facets
            .iter()
            .map(|f| {
                json!({
                    "normal": f.normal.iter().map(format_rat).collect::<Vec<_>>(),
                    "offset": format_rat(&f.offset),
                })
            })
            .collect::<Vec<_>>(),
    }))
}

fn rows(m: &[Vec<singlab_core::rat::Rat>]) -> Vec<Vec<String>> {
    use singlab_core::rat::format_rat;
    m.iter()
        .map(|r| r.iter().map(format_rat).collect())
        .collect()
}
