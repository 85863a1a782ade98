//! Parser for the Class Diagram Language (CDL).
//!
//! CDL is line oriented. Each line is one of:
//!
//! ```text
//! class Name            declare a class
//! class Name {          open a member block, closed by a lone `}`
//!   attr [: Type]       attribute (inside a block)
//!   op(args) [: Type]   method (inside a block)
//! }
//! A --|> B              generalization, A is the child of B
//! A o-- B               aggregation, A is the whole and B the part
//! A ..> B               dependency, A depends on B
//! A -- B                association
//! # comment
//! ```
//!
//! A member may share the line of the opening `{`, and the closing `}` may
//! trail the last member (`class A { x` / `m() }`). Types are accepted and
//! ignored. Errors carry 1-based line and column numbers; after a bad line
//! parsing resumes on the next one.

use std::fmt;

use serde::Serialize;

use crate::diagram::{
    build_diagram_collect, ClassDef, ClassDiagram, DiagramError, DiagramWarning, RelKind,
    Relationship, Site,
};
use crate::is_identifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl ParseDiagnostic {
    fn error(line: usize, column: usize, code: &'static str, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Error,
            line,
            column,
            code,
            message: message.into(),
        }
    }

    fn warning(line: usize, column: usize, code: &'static str, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Warning,
            ..Self::error(line, column, code, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {sev}[{}]: {}",
            self.line, self.column, self.code, self.message
        )
    }
}

/// A successfully parsed diagram and its warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub diagram: ClassDiagram,
    pub warnings: Vec<ParseDiagnostic>,
}

/// All diagnostics (errors and warnings) of a failed parse, in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl ParseFailure {
    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.diagnostics {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseFailure {}

/// Parses CDL source. In strict mode implicitly declared classes and
/// duplicate relationships are errors rather than warnings.
pub fn parse(source: &str, strict: bool) -> Result<Parsed, ParseFailure> {
    let mut p = Parser::default();
    for (i, raw) in source.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        p.line(i + 1, raw);
    }
    p.finish(strict)
}

type Pos = (usize, usize);

struct OpenBlock {
    class: usize,
    pos: Pos,
}

#[derive(Default)]
struct Parser {
    classes: Vec<ClassDef>,
    class_pos: Vec<Pos>,
    rels: Vec<Relationship>,
    // line, source column, target column
    rel_pos: Vec<(usize, usize, usize)>,
    block: Option<OpenBlock>,
    diags: Vec<ParseDiagnostic>,
}

struct Member {
    name: String,
    is_method: bool,
    closes: bool,
}

impl Parser {
    fn line(&mut self, lineno: usize, raw: &str) {
        let text = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut cur = Cursor::new(lineno, text);
        cur.skip_ws();
        if cur.at_end() {
            return;
        }

        if let Some(block) = &self.block {
            if cur.rest_trimmed() == "}" {
                self.block = None;
                return;
            }
            let class = block.class;
            // A member named `class` wins over a declaration; anything else
            // that looks like a top-level statement ends the open block.
            match parse_member(&mut cur) {
                Ok(member) => {
                    self.add_member(class, member);
                    return;
                }
                Err(diag) => {
                    let mut probe = Cursor::new(lineno, text);
                    probe.skip_ws();
                    if probe.peek_word() == "class" || parse_relationship(&mut probe).is_ok() {
                        self.unclosed_block();
                    } else {
                        self.diags.push(diag);
                        return;
                    }
                }
            }
            cur = Cursor::new(lineno, text);
            cur.skip_ws();
        }

        if cur.peek_word() == "class" && !self.is_relationship(lineno, text) {
            if let Err(diag) = self.class_decl(&mut cur) {
                self.diags.push(diag);
            }
            return;
        }
        if cur.rest_trimmed() == "}" {
            self.diags
                .push(cur.error("E_SYNTAX", "`}` without an open class block"));
            return;
        }
        match parse_relationship(&mut cur) {
            Ok((rel, src_col, dst_col)) => {
                self.rels.push(rel);
                self.rel_pos.push((lineno, src_col, dst_col));
            }
            Err(diag) => self.diags.push(diag),
        }
    }

    fn is_relationship(&self, lineno: usize, text: &str) -> bool {
        let mut probe = Cursor::new(lineno, text);
        probe.skip_ws();
        parse_relationship(&mut probe).is_ok()
    }

    fn class_decl(&mut self, cur: &mut Cursor) -> Result<(), ParseDiagnostic> {
        let pos = (cur.line, cur.column());
        cur.word(); // `class`
        if !cur.skip_ws() {
            return Err(cur.error("E_SYNTAX", "expected a class name after `class`"));
        }
        let name = cur.ident("class name")?;
        self.classes.push(ClassDef::new(name));
        self.class_pos.push(pos);
        let class = self.classes.len() - 1;
        cur.skip_ws();
        if cur.at_end() {
            return Ok(());
        }
        if !cur.eat("{") {
            return Err(cur.error("E_SYNTAX", "expected `{` or end of line after class name"));
        }
        cur.skip_ws();
        if cur.at_end() {
            self.block = Some(OpenBlock { class, pos });
            return Ok(());
        }
        if cur.rest_trimmed() == "}" {
            return Ok(());
        }
        self.block = Some(OpenBlock { class, pos });
        let member = parse_member(cur)?;
        self.add_member(class, member);
        Ok(())
    }

    fn add_member(&mut self, class: usize, member: Member) {
        let def = &mut self.classes[class];
        if member.is_method {
            def.methods.push(member.name);
        } else {
            def.attributes.push(member.name);
        }
        if member.closes {
            self.block = None;
        }
    }

    fn unclosed_block(&mut self) {
        if let Some(block) = self.block.take() {
            let name = &self.classes[block.class].name;
            self.diags.push(ParseDiagnostic::error(
                block.pos.0,
                block.pos.1,
                "E_UNCLOSED_BLOCK",
                format!("member block of class `{name}` is never closed"),
            ));
        }
    }

    fn finish(mut self, strict: bool) -> Result<Parsed, ParseFailure> {
        self.unclosed_block();

        let outcome = build_diagram_collect(self.classes.clone(), self.rels.clone());
        for err in &outcome.errors {
            let (line, column) = self.site_pos(err.site(), None);
            let code = err.code();
            let message = match err {
                DiagramError::BadIdent { name, .. } => {
                    format!("`{name}` is not a valid identifier")
                }
                other => other.to_string(),
            };
            self.diags
                .push(ParseDiagnostic::error(line, column, code, message));
        }
        for warn in &outcome.warnings {
            let endpoint = match warn {
                DiagramWarning::ImplicitClass { name, .. } => Some(name.as_str()),
                _ => None,
            };
            let (line, column) = self.site_pos(warn.site(), endpoint);
            let message = warn.to_string();
            let diag = match (warn, strict) {
                (DiagramWarning::ImplicitClass { .. }, true) => {
                    ParseDiagnostic::error(line, column, "E_IMPLICIT_CLASS", message)
                }
                (DiagramWarning::DuplicateRelationship { .. }, true) => {
                    ParseDiagnostic::error(line, column, "E_DUP_REL", message)
                }
                _ => ParseDiagnostic::warning(line, column, warn.code(), message),
            };
            self.diags.push(diag);
        }

        self.diags.sort_by_key(|d| (d.line, d.column));
        match outcome.diagram {
            Some(diagram) if !self.diags.iter().any(ParseDiagnostic::is_error) => Ok(Parsed {
                diagram,
                warnings: self.diags,
            }),
            _ => Err(ParseFailure {
                diagnostics: self.diags,
            }),
        }
    }

    fn site_pos(&self, site: Site, endpoint: Option<&str>) -> Pos {
        match site {
            Site::Class(i) => self.class_pos[i],
            Site::Relationship(i) => {
                let (line, src, dst) = self.rel_pos[i];
                let rel = &self.rels[i];
                match endpoint {
                    Some(name) if name == rel.target && name != rel.source => (line, dst),
                    _ => (line, src),
                }
            }
        }
    }
}

fn parse_member(cur: &mut Cursor) -> Result<Member, ParseDiagnostic> {
    let name = cur.ident("member name")?;
    cur.skip_ws();
    let mut is_method = false;
    if cur.peek() == Some('(') {
        match cur.rest().rfind(')') {
            Some(close) => {
                is_method = true;
                let skip = cur.rest()[..=close].chars().count();
                cur.advance(skip);
            }
            None => return Err(cur.error("E_SYNTAX", "unclosed `(` in method declaration")),
        }
        cur.skip_ws();
    }
    if cur.eat(":") {
        cur.skip_ws();
        cur.ident("type name")?;
        cur.skip_ws();
    }
    let closes = cur.eat("}");
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("E_SYNTAX", "unexpected text after member declaration"));
    }
    Ok(Member {
        name,
        is_method,
        closes,
    })
}

fn parse_relationship(cur: &mut Cursor) -> Result<(Relationship, usize, usize), ParseDiagnostic> {
    let src_col = cur.column();
    let source = cur.ident("class name")?;
    cur.skip_ws();
    let kind = [
        RelKind::Generalization,
        RelKind::Aggregation,
        RelKind::Dependency,
        RelKind::Association,
    ]
    .into_iter()
    .find(|k| cur.eat(k.operator()))
    .ok_or_else(|| {
        cur.error(
            "E_SYNTAX",
            "expected a class declaration or a relationship (`--|>`, `o--`, `..>`, `--`)",
        )
    })?;
    cur.skip_ws();
    let dst_col = cur.column();
    let target = cur.ident("class name")?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("E_SYNTAX", "unexpected text after relationship"));
    }
    Ok((Relationship::new(kind, source, target), src_col, dst_col))
}

/// Character cursor over one line, tracking 1-based columns.
struct Cursor<'a> {
    line: usize,
    text: &'a str,
    // byte offset and column of the current position
    offset: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor {
            line,
            text,
            offset: 0,
            col: 1,
        }
    }

    fn column(&self) -> usize {
        self.col
    }

    fn rest(&self) -> &'a str {
        &self.text[self.offset..]
    }

    fn rest_trimmed(&self) -> &'a str {
        self.rest().trim()
    }

    fn at_end(&self) -> bool {
        self.offset >= self.text.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn advance(&mut self, chars: usize) {
        for c in self.rest().chars().take(chars) {
            self.offset += c.len_utf8();
            self.col += 1;
        }
    }

    /// Skips whitespace; returns whether any was skipped.
    fn skip_ws(&mut self) -> bool {
        let n = self
            .rest()
            .chars()
            .take_while(|c| c.is_whitespace())
            .count();
        self.advance(n);
        n > 0
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.advance(token.chars().count());
            true
        } else {
            false
        }
    }

    fn peek_word(&self) -> &'a str {
        let end = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !is_word_char(c))
            .map_or(self.rest().len(), |(i, _)| i);
        &self.rest()[..end]
    }

    fn word(&mut self) -> &'a str {
        let w = self.peek_word();
        self.advance(w.chars().count());
        w
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseDiagnostic> {
        let col = self.col;
        let w = self.word();
        if w.is_empty() {
            return Err(self.error("E_SYNTAX", format!("expected {what}")));
        }
        if !is_identifier(w) {
            return Err(ParseDiagnostic::error(
                self.line,
                col,
                "E_BAD_IDENT",
                format!("`{w}` is not a valid identifier"),
            ));
        }
        Ok(w.to_string())
    }

    fn error(&self, code: &'static str, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic::error(self.line, self.col, code, message)
    }
}

// Characters that may appear in a name-like token. Operators and
// punctuation end a token; anything else (including non-ASCII letters) is
// kept so that malformed names are reported as E_BAD_IDENT.
fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !"{}():;,<>|.-".contains(c)
}
