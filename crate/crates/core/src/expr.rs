//! Multi-circled singularity expressions.
//!
//! An expression denotes a germ u(|z_1|,...,|z_n|); we work with its convex
//! image u^(t) = u(e^{t_1},...,e^{t_n}) on the closed negative orthant.
//! `Atom { index: j, power: p, coeff: c }` denotes t -> -c * (-t_j)^p, so
//! p = 1 gives c * log|z_j|.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, pow_rational, Rat};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Const(Rat),
    Atom { index: usize, power: Rat, coeff: Rat },
    Sum(Vec<Node>),
    Max(Vec<Node>),
    Scale(Rat, Box<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityExpr {
    n: usize,
    root: Node,
    warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdealPresentation {
    pub n: usize,
    pub exponents: Vec<Vec<Rat>>,
}

impl MonomialIdealPresentation {
    pub fn new(n: usize, exponents: Vec<Vec<Rat>>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Validation("monomial list is empty".into()));
        }
        for row in &exponents {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "monomial exponent vector has length {} but n = {n}",
                    row.len()
                )));
            }
            if row.iter().any(|x| x.is_negative()) {
                return Err(Error::Validation("negative exponent in monomial".into()));
            }
        }
        Ok(Self { n, exponents })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field 'n'".into()))? as usize;
        let rows = obj
            .get("monomials")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field 'monomials'".into()))?;
        let mut exponents = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("monomial must be an array".into()))?;
            let mut e = Vec::new();
            for x in row {
                let s = x
                    .as_str()
                    .map(str::to_owned)
                    .or_else(|| x.as_i64().map(|i| i.to_string()))
                    .ok_or_else(|| Error::Parse("exponent must be a rational string".into()))?;
                e.push(parse_rat(&s)?);
            }
            exponents.push(e);
        }
        Self::new(n, exponents)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "monomials": self
                .exponents
                .iter()
                .map(|row| row.iter().map(format_rat).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

impl SingularityExpr {
    /// Builds and validates; `n` must cover every atom index.
    pub fn new(n: usize, root: Node) -> Result<Self> {
        validate(&root, n)?;
        if n == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        let mut warnings = Vec::new();
        let origin = vec![Rat::zero(); n];
        let mut e = Self { n, root, warnings: Vec::new() };
        if let Ok(v) = e.eval_convex_image(&origin) {
            if v.is_positive() {
                warnings.push(
                    "expression is positive somewhere on the orthant; \
                     indicators and thresholds ignore the additive constant"
                        .to_string(),
                );
            }
        }
        e.warnings = warnings;
        Ok(e)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.parse_expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input at token {}",
                p.pos
            )));
        }
        let n = max_index(&root);
        if n == 0 {
            return Err(Error::Validation(
                "expression contains no variables x1..xn".into(),
            ));
        }
        Self::new(n, root)
    }

    /// u = max_i log|z^{alpha_i}| for the given monomial generators.
    pub fn from_monomials(m: &MonomialIdealPresentation) -> Result<Self> {
        let mut branches = Vec::new();
        for row in &m.exponents {
            let atoms: Vec<Node> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| Node::Atom {
                    index: j + 1,
                    power: Rat::one(),
                    coeff: c.clone(),
                })
                .collect();
            branches.push(match atoms.len() {
                0 => Node::Const(Rat::zero()),
                1 => atoms.into_iter().next().unwrap(),
                _ => Node::Sum(atoms),
            });
        }
        let root = if branches.len() == 1 {
            branches.into_iter().next().unwrap()
        } else {
            Node::Max(branches)
        };
        Self::new(m.n, root)
    }

    /// phi_a(x) = max_k a_k^{-1} log|x_k|.
    pub fn phi_weight(a: &[Rat]) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Validation("weight vector needs length >= 2".into()));
        }
        if a.iter().any(|x| !x.is_positive()) {
            return Err(Error::Validation("weights must be positive".into()));
        }
        let children = a
            .iter()
            .enumerate()
            .map(|(k, ak)| Node::Atom {
                index: k + 1,
                power: Rat::one(),
                coeff: ak.recip(),
            })
            .collect();
        Self::new(a.len(), Node::Max(children))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Evaluates the convex image at t in the closed negative orthant.
    ///
    /// Exact when every atom power equals 1; with fractional powers the
    /// result carries an absolute error below 2^-100.
    pub fn eval_convex_image(&self, t: &[Rat]) -> Result<Rat> {
        if t.len() != self.n {
            return Err(Error::Domain(format!(
                "point has dimension {}, expected {}",
                t.len(),
                self.n
            )));
        }
        if t.iter().any(|x| x.is_positive()) {
            return Err(Error::Domain(
                "convex image is only defined on the negative orthant".into(),
            ));
        }
        eval(&self.root, t)
    }

    /// Canonical form: scales folded into atoms, sums/maxes flattened,
    /// like atoms merged, children sorted.
    pub fn canonical(&self) -> Self {
        Self {
            n: self.n,
            root: canon(&self.root, false),
            warnings: self.warnings.clone(),
        }
    }

    /// Positively-homogeneous part: constants and sublinear atoms vanish.
    ///
    /// The result is piecewise-linear, canonical, and a fixed point of this
    /// operation. A Max absorbing a zero branch collapses to zero, since
    /// every homogenized node is nonpositive on the orthant.
    pub fn indicator(&self) -> Self {
        let root = canon(&homog(&self.root), true);
        Self {
            n: self.n,
            root,
            warnings: Vec::new(),
        }
    }

    /// True when the canonical form contains only power-1 atoms and no
    /// nonzero constants.
    pub fn is_piecewise_linear_homogeneous(&self) -> bool {
        fn ok(node: &Node) -> bool {
            match node {
                Node::Const(v) => v.is_zero(),
                Node::Atom { power, .. } => power.is_one(),
                Node::Sum(ch) | Node::Max(ch) => ch.iter().all(ok),
                Node::Scale(_, ch) => ok(ch),
            }
        }
        ok(&canon(&self.root, false))
    }

    pub fn to_canonical_string(&self) -> String {
        render(&canon(&self.root, false))
    }

    pub fn to_json(&self) -> Value {
        let canon_root = canon(&self.root, false);
        json!({
            "n": self.n,
            "canonical": render(&canon_root),
            "ast": node_json(&canon_root),
            "warnings": self.warnings,
        })
    }
}

impl fmt::Display for SingularityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

fn node_json(node: &Node) -> Value {
    match node {
        Node::Const(v) => json!({ "const": format_rat(v) }),
        Node::Atom { index, power, coeff } => json!({
            "atom": { "index": index, "power": format_rat(power), "coeff": format_rat(coeff) }
        }),
        Node::Sum(ch) => json!({ "sum": ch.iter().map(node_json).collect::<Vec<_>>() }),
        Node::Max(ch) => json!({ "max": ch.iter().map(node_json).collect::<Vec<_>>() }),
        Node::Scale(f, ch) => json!({ "scale": { "factor": format_rat(f), "child": node_json(ch) } }),
    }
}

fn validate(node: &Node, n: usize) -> Result<()> {
    match node {
        Node::Const(_) => Ok(()),
        Node::Atom { index, power, coeff } => {
            if *index == 0 || *index > n {
                return Err(Error::Validation(format!(
                    "atom index {index} outside 1..{n}"
                )));
            }
            if !power.is_positive() || power > &Rat::one() {
                return Err(Error::Validation(format!(
                    "atom power {} outside (0, 1]",
                    format_rat(power)
                )));
            }
            if coeff.is_negative() {
                return Err(Error::Validation("negative atom coefficient".into()));
            }
            Ok(())
        }
        Node::Sum(ch) => ch.iter().try_for_each(|c| validate(c, n)),
        Node::Max(ch) => {
            if ch.len() < 2 {
                return Err(Error::Parse("max requires at least 2 arguments".into()));
            }
            ch.iter().try_for_each(|c| validate(c, n))
        }
        Node::Scale(f, ch) => {
            if f.is_negative() {
                return Err(Error::Validation("negative scale factor".into()));
            }
            validate(ch, n)
        }
    }
}

fn max_index(node: &Node) -> usize {
    match node {
        Node::Const(_) => 0,
        Node::Atom { index, .. } => *index,
        Node::Sum(ch) | Node::Max(ch) => ch.iter().map(max_index).max().unwrap_or(0),
        Node::Scale(_, ch) => max_index(ch),
    }
}

fn eval(node: &Node, t: &[Rat]) -> Result<Rat> {
    match node {
        Node::Const(v) => Ok(v.clone()),
        Node::Atom { index, power, coeff } => {
            let x = -&t[*index - 1]; // >= 0
            Ok(-(coeff * pow_rational(&x, power)?))
        }
        Node::Sum(ch) => {
            let mut acc = Rat::zero();
            for c in ch {
                acc += eval(c, t)?;
            }
            Ok(acc)
        }
        Node::Max(ch) => {
            let mut best: Option<Rat> = None;
            for c in ch {
                let v = eval(c, t)?;
                best = Some(match best {
                    Some(b) if b >= v => b,
                    _ => v,
                });
            }
            Ok(best.expect("max has children"))
        }
        Node::Scale(f, ch) => Ok(f * eval(ch, t)?),
    }
}

fn homog(node: &Node) -> Node {
    match node {
        Node::Const(_) => Node::Const(Rat::zero()),
        Node::Atom { power, .. } if !power.is_one() => Node::Const(Rat::zero()),
        Node::Atom { .. } => node.clone(),
        Node::Sum(ch) => Node::Sum(ch.iter().map(homog).collect()),
        Node::Max(ch) => Node::Max(ch.iter().map(homog).collect()),
        Node::Scale(f, ch) => Node::Scale(f.clone(), Box::new(homog(ch))),
    }
}

/// Canonicalization; with `zero_absorbs_max` a Max containing a zero branch
/// becomes zero (valid only when every branch is nonpositive on the orthant,
/// which the homogenizer guarantees).
fn canon(node: &Node, zero_absorbs_max: bool) -> Node {
    match node {
        Node::Const(v) => Node::Const(v.clone()),
        Node::Atom { coeff, .. } if coeff.is_zero() => Node::Const(Rat::zero()),
        Node::Atom { .. } => node.clone(),
        Node::Scale(f, ch) => scale_node(f, &canon(ch, zero_absorbs_max)),
        Node::Sum(ch) => {
            let mut parts: Vec<Node> = Vec::new();
            for c in ch {
                match canon(c, zero_absorbs_max) {
                    Node::Sum(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            let mut const_acc = Rat::zero();
            let mut atoms: Vec<(usize, Rat, Rat)> = Vec::new(); // (index, power, coeff)
            let mut rest: Vec<Node> = Vec::new();
            for p in parts {
                match p {
                    Node::Const(v) => const_acc += v,
                    Node::Atom { index, power, coeff } => {
                        if let Some(a) = atoms
                            .iter_mut()
                            .find(|(i, pw, _)| *i == index && *pw == power)
                        {
                            a.2 += coeff;
                        } else {
                            atoms.push((index, power, coeff));
                        }
                    }
                    other => rest.push(other),
                }
            }
            let mut out: Vec<Node> = atoms
                .into_iter()
                .filter(|(_, _, c)| !c.is_zero())
                .map(|(index, power, coeff)| Node::Atom { index, power, coeff })
                .collect();
            out.extend(rest);
            if !const_acc.is_zero() || out.is_empty() {
                out.push(Node::Const(const_acc));
            }
            out.sort();
            if out.len() == 1 {
                out.into_iter().next().unwrap()
            } else {
                Node::Sum(out)
            }
        }
        Node::Max(ch) => {
            let mut parts: Vec<Node> = Vec::new();
            for c in ch {
                match canon(c, zero_absorbs_max) {
                    Node::Max(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            if zero_absorbs_max && parts.iter().any(|p| matches!(p, Node::Const(v) if v.is_zero()))
            {
                return Node::Const(Rat::zero());
            }
            parts.sort();
            parts.dedup();
            if parts.len() == 1 {
                parts.into_iter().next().unwrap()
            } else {
                Node::Max(parts)
            }
        }
    }
}

fn scale_node(f: &Rat, node: &Node) -> Node {
    if f.is_zero() {
        return Node::Const(Rat::zero());
    }
    match node {
        Node::Const(v) => Node::Const(f * v),
        Node::Atom { index, power, coeff } => Node::Atom {
            index: *index,
            power: power.clone(),
            coeff: f * coeff,
        },
        Node::Sum(ch) => Node::Sum(ch.iter().map(|c| scale_node(f, c)).collect()),
        // Scale factors are nonnegative, so scaling commutes with max.
        Node::Max(ch) => Node::Max(ch.iter().map(|c| scale_node(f, c)).collect()),
        Node::Scale(g, ch) => scale_node(&(f * g), ch),
    }
}

fn render(node: &Node) -> String {
    match node {
        Node::Const(v) => format_rat(v),
        Node::Atom { index, power, coeff } => {
            let mut base = format!("x{index}");
            if !power.is_one() {
                base = format!("{base}^({})", format_rat(power));
            }
            if coeff.is_one() {
                base
            } else {
                format!("{}*{}", format_rat(coeff), base)
            }
        }
        Node::Sum(ch) => ch
            .iter()
            .map(render)
            .collect::<Vec<_>>()
            .join(" + "),
        Node::Max(ch) => format!(
            "max({})",
            ch.iter().map(render).collect::<Vec<_>>().join(", ")
        ),
        Node::Scale(f, ch) => format!("{}*({})", format_rat(f), render(ch)),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Var(usize),
    MaxKw,
    Caret,
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            'm' => {
                if text[i..].starts_with("max") {
                    toks.push(Tok::MaxKw);
                    i += 3;
                } else {
                    return Err(Error::Parse(format!("unexpected input at byte {i}")));
                }
            }
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse("variable index expected after 'x'".into()));
                }
                let idx: usize = text[start..j]
                    .parse()
                    .map_err(|_| Error::Parse("variable index too large".into()))?;
                toks.push(Tok::Var(idx));
                i = j;
            }
            '-' | '0'..='9' => {
                let start = i;
                let mut j = i + if c == '-' { 1 } else { 0 };
                let digits_start = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits_start {
                    return Err(Error::Parse("digits expected after '-'".into()));
                }
                let mut end = j;
                if j < bytes.len() && bytes[j] == b'/' {
                    let mut k = j + 1;
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    if k == j + 1 {
                        return Err(Error::Parse("digits expected after '/'".into()));
                    }
                    end = k;
                }
                toks.push(Tok::Num(parse_rat(&text[start..end])?));
                i = end;
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
        }
    }
    Ok(toks)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {t:?} at token {}",
                self.pos
            )))
        }
    }

    fn parse_expr(&mut self) -> Result<Node> {
        let mut terms = vec![self.parse_term()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            terms.push(self.parse_term()?);
        }
        Ok(if terms.len() == 1 {
            terms.into_iter().next().unwrap()
        } else {
            Node::Sum(terms)
        })
    }

    fn parse_term(&mut self) -> Result<Node> {
        if let Some(Tok::Num(v)) = self.peek().cloned() {
            self.pos += 1;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                if v.is_negative() {
                    return Err(Error::Validation("negative scale factor".into()));
                }
                let factor = self.parse_factor()?;
                return Ok(Node::Scale(v, Box::new(factor)));
            }
            return Ok(Node::Const(v));
        }
        self.parse_factor()
    }

    fn parse_factor(&mut self) -> Result<Node> {
        match self.peek().cloned() {
            Some(Tok::MaxKw) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let mut args = vec![self.parse_expr()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    args.push(self.parse_expr()?);
                }
                self.expect(Tok::RParen)?;
                if args.len() < 2 {
                    return Err(Error::Parse("max requires at least 2 arguments".into()));
                }
                Ok(Node::Max(args))
            }
            Some(Tok::Var(idx)) => {
                self.pos += 1;
                let mut power = Rat::one();
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    match self.peek().cloned() {
                        Some(Tok::Num(p)) => {
                            self.pos += 1;
                            power = p;
                        }
                        _ => return Err(Error::Parse("rational power expected".into())),
                    }
                    self.expect(Tok::RParen)?;
                }
                Ok(Node::Atom {
                    index: idx,
                    power,
                    coeff: Rat::one(),
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::Parse(format!(
                "unexpected token {other:?} at position {}",
                self.pos
            ))),
        }
    }
}
