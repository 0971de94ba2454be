//! Model documents: parsing, validation, canonical printing and conversion
//! to a [`ModelSpec`].

use std::fmt::{self, Write as _};

use crate::gauge::{Chirality, FieldDecl, FieldKind, ModelSpec, Rep, Sector};
use crate::liealg::{su_basis, u1_basis, u1_basis_uncharged, GroupKind};
use crate::verify::VerifyOptions;

use super::lexer::{tokenize, Tok, Token};

pub const GRAMMAR: &str = r##"document  := "model" STRING "{" item* "}"
item      := group | fermion | scalar | option
group     := "group" ("U"|"V") gtype "coupling" NUMBER
gtype     := "SU" "(" INT ")" | "U" "(" "1" ")" ["charge" NUMBER]
fermion   := "fermion" IDENT "rep" rep ["chirality" ("left"|"right")] ["charge" NUMBER]
scalar    := "scalar" IDENT "rep" rep ["charge" NUMBER] ["vev" NUMBER]
rep       := "bifundamental" | "fundamental_U" | "fundamental_V" | "singlet"
option    := "set" IDENT NUMBER
             # seed, points, modes, amplitude, tol, v_commutator_sign
Comments run from "#" to the end of the line.
"##;

pub const OPTION_NAMES: [&str; 6] = ["seed", "points", "modes", "amplitude", "tol", "v_commutator_sign"];

#[derive(Clone, Debug, PartialEq)]
pub enum ParseError {
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<String>,
    },
    Semantic {
        line: usize,
        col: usize,
        message: String,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. } | ParseError::Semantic { line, col, .. } => (*line, *col),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, found, expected } => {
                write!(f, "{line}:{col}: syntax error: found {found}, expected ")?;
                match expected.as_slice() {
                    [one] => f.write_str(one),
                    many => write!(f, "one of {}", many.join(", ")),
                }
            }
            ParseError::Semantic { line, col, message } => write!(f, "{line}:{col}: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupDecl {
    pub sector: Sector,
    pub kind: GroupKind,
    /// Default U(1) charge for fields that declare none.
    pub charge: Option<f64>,
    pub coupling: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelDocument {
    pub name: String,
    pub groups: Vec<GroupDecl>,
    pub fields: Vec<FieldDecl>,
    pub options: Vec<(String, f64)>,
}

impl ModelDocument {
    pub fn group(&self, sector: Sector) -> Option<&GroupDecl> {
        self.groups.iter().find(|g| g.sector == sector)
    }

    pub fn option(&self, name: &str) -> Option<f64> {
        self.options.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn to_model(&self) -> crate::Result<ModelSpec> {
        let basis = |sector| -> crate::Result<_> {
            let g = self
                .group(sector)
                .ok_or_else(|| crate::error::invalid(format!("missing group for sector {sector}")))?;
            let b = match (g.kind, g.charge) {
                (GroupKind::Su(n), _) => su_basis(n)?,
                (GroupKind::U1, Some(q)) => u1_basis(q),
                (GroupKind::U1, None) => u1_basis_uncharged(),
            };
            Ok(b.with_coupling(g.coupling))
        };
        let mut m = ModelSpec::new(&self.name, basis(Sector::U)?, basis(Sector::V)?, self.fields.clone())?;
        if let Some(s) = self.option("v_commutator_sign") {
            m = m.with_v_commutator_sign(s);
        }
        Ok(m)
    }

    /// File-level option overrides applied on top of `base`.
    pub fn apply_options(&self, base: &VerifyOptions) -> VerifyOptions {
        let mut o = base.clone();
        for (k, v) in &self.options {
            match k.as_str() {
                "seed" => o.seed = *v as u64,
                "points" => o.points = *v as usize,
                "modes" => o.modes = *v as u32,
                "amplitude" => o.amplitude = *v,
                "tol" => o.tol = *v,
                _ => {}
            }
        }
        o
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn quote(s: &str) -> String {
    format!("`{s}`")
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(t: &Token, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            found: t.tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn semantic(t: &Token, message: String) -> ParseError {
        ParseError::Semantic {
            line: t.line,
            col: t.col,
            message,
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Token, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(t),
            _ => Err(Self::syntax(&t, &[&quote(kw)])),
        }
    }

    fn one_of(&mut self, kws: &[&str]) -> Result<(String, Token), ParseError> {
        let t = self.next();
        if let Tok::Ident(s) = &t.tok {
            if kws.contains(&s.as_str()) {
                return Ok((s.clone(), t));
            }
        }
        let exp: Vec<String> = kws.iter().map(|k| quote(k)).collect();
        Err(Self::syntax(&t, &exp.iter().map(|s| s.as_str()).collect::<Vec<_>>()))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn punct(&mut self, want: Tok, text: &str) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(Self::syntax(&t, &[text]))
        }
    }

    fn number(&mut self) -> Result<(f64, String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Num(v, s) => Ok((*v, s.clone(), t.clone())),
            _ => Err(Self::syntax(&t, &["NUMBER"])),
        }
    }

    fn ident(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(Self::syntax(&t, &["IDENT"])),
        }
    }

    fn group(&mut self) -> Result<(GroupDecl, Token), ParseError> {
        let kw = self.keyword("group")?;
        let (side, _) = self.one_of(&["U", "V"])?;
        let sector = if side == "U" { Sector::U } else { Sector::V };
        let (kind_kw, _) = self.one_of(&["SU", "U"])?;
        self.punct(Tok::LParen, "`(`")?;
        let (n, text, nt) = self.number()?;
        self.punct(Tok::RParen, "`)`")?;
        let (kind, charge) = if kind_kw == "SU" {
            let valid_int = text.chars().all(|c| c.is_ascii_digit());
            if !valid_int || !(2.0..=64.0).contains(&n) {
                return Err(Self::semantic(&nt, format!("SU(n) needs an integer 2 <= n <= 64, got `{text}`")));
            }
            (GroupKind::Su(n as usize), None)
        } else {
            if text != "1" {
                return Err(Self::semantic(&nt, format!("only U(1) is supported, got U({text})")));
            }
            let charge = if self.at_keyword("charge") {
                self.next();
                Some(self.number()?.0)
            } else {
                None
            };
            (GroupKind::U1, charge)
        };
        self.keyword("coupling")?;
        let (coupling, ctext, ct) = self.number()?;
        if coupling == 0.0 {
            return Err(Self::semantic(&ct, format!("coupling must be nonzero, got `{ctext}`")));
        }
        Ok((GroupDecl { sector, kind, charge, coupling }, kw))
    }

    fn rep(&mut self) -> Result<Rep, ParseError> {
        let (name, t) = self.ident()?;
        Rep::from_keyword(&name).ok_or_else(|| {
            Self::semantic(
                &t,
                format!("unknown rep `{name}` (expected bifundamental, fundamental_U, fundamental_V or singlet)"),
            )
        })
    }

    fn field(&mut self, kind: FieldKind) -> Result<(FieldDecl, Token), ParseError> {
        self.next();
        let (name, nt) = self.ident()?;
        self.keyword("rep")?;
        let rep = self.rep()?;
        let mut decl = match kind {
            FieldKind::Fermion => FieldDecl::fermion(&name, rep),
            FieldKind::Scalar => FieldDecl::scalar(&name, rep),
        };
        if kind == FieldKind::Fermion && self.at_keyword("chirality") {
            self.next();
            let (side, _) = self.one_of(&["left", "right"])?;
            decl.chirality = if side == "left" { Chirality::Left } else { Chirality::Right };
        }
        if self.at_keyword("charge") {
            self.next();
            decl.charge = Some(self.number()?.0);
        }
        if kind == FieldKind::Scalar && self.at_keyword("vev") {
            self.next();
            decl.vev = Some(self.number()?.0);
        }
        Ok((decl, nt))
    }

    fn option(&mut self) -> Result<((String, f64), Token), ParseError> {
        self.next();
        let (name, nt) = self.ident()?;
        if !OPTION_NAMES.contains(&name.as_str()) {
            return Err(Self::semantic(
                &nt,
                format!("unknown option `{name}` (expected one of {})", OPTION_NAMES.join(", ")),
            ));
        }
        let (v, text, vt) = self.number()?;
        let integral = v.fract() == 0.0 && v >= 0.0;
        let ok = match name.as_str() {
            "seed" => integral && v <= 9_007_199_254_740_992.0,
            "points" => integral && (1.0..=1e7).contains(&v),
            "modes" => integral && v <= 64.0,
            "amplitude" => v >= 0.0,
            "tol" => v > 0.0,
            _ => v == 1.0 || v == -1.0,
        };
        if !ok {
            return Err(Self::semantic(&vt, format!("invalid value `{text}` for option `{name}`")));
        }
        Ok(((name, v), nt))
    }

    fn document(&mut self) -> Result<(ModelDocument, Vec<Token>), ParseError> {
        self.keyword("model")?;
        let t = self.next();
        let name = match t.tok {
            Tok::Str(s) => s,
            _ => return Err(Self::syntax(&t, &["STRING"])),
        };
        self.punct(Tok::LBrace, "`{`")?;
        let mut doc = ModelDocument {
            name,
            groups: vec![],
            fields: vec![],
            options: vec![],
        };
        let mut field_toks = vec![];
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Ident(k) if k == "group" => {
                    let (g, gt) = self.group()?;
                    if doc.group(g.sector).is_some() {
                        return Err(Self::semantic(&gt, format!("duplicate group for sector {}", g.sector)));
                    }
                    doc.groups.push(g);
                }
                Tok::Ident(k) if k == "fermion" || k == "scalar" => {
                    let kind = if k == "fermion" { FieldKind::Fermion } else { FieldKind::Scalar };
                    let (f, nt) = self.field(kind)?;
                    if doc.fields.iter().any(|g| g.name == f.name) {
                        return Err(Self::semantic(&nt, format!("duplicate field name `{}`", f.name)));
                    }
                    doc.fields.push(f);
                    field_toks.push(nt);
                }
                Tok::Ident(k) if k == "set" => {
                    let (o, nt) = self.option()?;
                    if doc.option(&o.0).is_some() {
                        return Err(Self::semantic(&nt, format!("option `{}` set twice", o.0)));
                    }
                    doc.options.push(o);
                }
                _ => {
                    return Err(Self::syntax(&t, &["`group`", "`fermion`", "`scalar`", "`set`", "`}`"]));
                }
            }
        }
        let t = self.next();
        if t.tok != Tok::Eof {
            return Err(Self::syntax(&t, &["end of input"]));
        }
        doc.groups.sort_by_key(|g| g.sector);
        Ok((doc, field_toks))
    }
}

/// Parses and validates a model document.
pub fn parse_model_spec(text: &str) -> Result<ModelDocument, ParseError> {
    let toks = tokenize(text).map_err(|e| ParseError::Syntax {
        line: e.line,
        col: e.col,
        found: e.found,
        expected: vec![e.expected],
    })?;
    let end = toks.last().cloned().expect("eof token");
    let mut p = Parser { toks, pos: 0 };
    let (doc, field_toks) = p.document()?;
    for s in Sector::BOTH {
        if doc.group(s).is_none() {
            return Err(Parser::semantic(&end, format!("missing `group {s}` declaration")));
        }
    }
    let abelian = |s: Sector| doc.group(s).is_some_and(|g| g.kind == GroupKind::U1);
    for (f, t) in doc.fields.iter().zip(&field_toks) {
        for s in Sector::BOTH {
            if f.rep.acts_on(s) && abelian(s) && f.charge.is_none() && doc.group(s).and_then(|g| g.charge).is_none() {
                return Err(Parser::semantic(
                    t,
                    format!(
                        "field `{}` has rep {} acting on U(1) sector {s} but neither the field nor the group gives a charge",
                        f.name,
                        f.rep.keyword()
                    ),
                ));
            }
        }
    }
    Ok(doc)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Canonical text: groups (U then V), then fields, then options, one item per line.
pub fn print_document(doc: &ModelDocument) -> String {
    let mut out = String::new();
    writeln!(out, "model \"{}\" {{", escape(&doc.name)).unwrap();
    for s in Sector::BOTH {
        if let Some(g) = doc.group(s) {
            let ty = match g.kind {
                GroupKind::Su(n) => format!("SU({n})"),
                GroupKind::U1 => match g.charge {
                    Some(q) => format!("U(1) charge {q}"),
                    None => "U(1)".to_string(),
                },
            };
            writeln!(out, "  group {s} {ty} coupling {}", g.coupling).unwrap();
        }
    }
    for f in &doc.fields {
        let kw = match f.kind {
            FieldKind::Fermion => "fermion",
            FieldKind::Scalar => "scalar",
        };
        write!(out, "  {kw} {} rep {}", f.name, f.rep.keyword()).unwrap();
        match f.chirality {
            Chirality::Left => out.push_str(" chirality left"),
            Chirality::Right => out.push_str(" chirality right"),
            Chirality::None => {}
        }
        if let Some(q) = f.charge {
            write!(out, " charge {q}").unwrap();
        }
        if let Some(v) = f.vev {
            write!(out, " vev {v}").unwrap();
        }
        out.push('\n');
    }
    for (k, v) in &doc.options {
        writeln!(out, "  set {k} {v}").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests;
