//! Line-oriented key/value tree text shared by the asset and judge formats.
//!
//! ```text
//! HEADER v1
//! key arg arg
//! block arg {
//!   key "quoted string"
//! }
//! ```
//!
//! Every statement sits on its own line: a bare key followed by
//! space-separated arguments, optionally opening a block with a trailing
//! `{`. A line holding only `}` closes the innermost block. Arguments are
//! bare words or double-quoted strings (escapes `\"`, `\\`, `\n`, `\t`,
//! `\r`). Canonical output indents two spaces per level.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("line {line}, column {col}: {msg}")]
pub struct KvError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arg {
    pub text: String,
    pub quoted: bool,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub key: String,
    pub args: Vec<Arg>,
    pub children: Option<Vec<Node>>,
    pub line: usize,
    pub col: usize,
    /// Line of the closing brace for blocks, otherwise `line`.
    pub end_line: usize,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, KvError> {
    Err(KvError {
        line,
        col,
        msg: msg.into(),
    })
}

/// Parses a document whose first line must equal `header`.
pub fn parse_document(text: &str, header: &str) -> Result<Vec<Node>, KvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end() == header => {}
        _ => return err(1, 1, format!("expected header `{header}`")),
    }
    // Stack of open blocks: (node, children collected so far).
    let mut stack: Vec<(Node, Vec<Node>)> = Vec::new();
    let mut top: Vec<Node> = Vec::new();
    for (ln, raw) in lines {
        let line = ln + 1;
        let mut toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        if toks.len() == 1 && !toks[0].quoted && toks[0].text == "}" {
            let Some((mut node, children)) = stack.pop() else {
                return err(line, toks[0].col, "unmatched `}`");
            };
            node.children = Some(children);
            node.end_line = line;
            match stack.last_mut() {
                Some((_, siblings)) => siblings.push(node),
                None => top.push(node),
            }
            continue;
        }
        let opens = toks.last().is_some_and(|t| !t.quoted && t.text == "{");
        if opens {
            toks.pop();
        }
        let key = toks.remove(0);
        if key.quoted || !is_word(&key.text) {
            return err(line, key.col, format!("expected a key, found `{}`", key.text));
        }
        if let Some(bad) = toks.iter().find(|t| !t.quoted && (t.text == "{" || t.text == "}")) {
            return err(line, bad.col, "brace must end the line");
        }
        let node = Node {
            key: key.text,
            args: toks,
            children: None,
            line,
            col: key.col,
            end_line: line,
        };
        if opens {
            stack.push((node, Vec::new()));
        } else {
            match stack.last_mut() {
                Some((_, siblings)) => siblings.push(node),
                None => top.push(node),
            }
        }
    }
    if let Some((node, _)) = stack.last() {
        return err(node.line, node.col, format!("block `{}` is never closed", node.key));
    }
    Ok(top)
}

fn is_word(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'+' | b'.'))
}

fn lex_line(raw: &str, line: usize) -> Result<Vec<Arg>, KvError> {
    let bytes = raw.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b' ' || b == b'\t' || b == b'\r' {
            i += 1;
            continue;
        }
        let col = i + 1;
        if b == b'"' {
            let mut s = String::new();
            i += 1;
            let mut closed = false;
            let mut chars = raw[i..].char_indices();
            while let Some((off, ch)) = chars.next() {
                match ch {
                    '"' => {
                        i += off + 1;
                        closed = true;
                        break;
                    }
                    '\\' => {
                        let Some((_, esc)) = chars.next() else { break };
                        s.push(match esc {
                            '"' => '"',
                            '\\' => '\\',
                            'n' => '\n',
                            't' => '\t',
                            'r' => '\r',
                            other => {
                                return err(line, i + off + 1, format!("unknown escape `\\{other}`"))
                            }
                        });
                    }
                    c => s.push(c),
                }
            }
            if !closed {
                return err(line, col, "unterminated string");
            }
            out.push(Arg {
                text: s,
                quoted: true,
                line,
                col,
            });
            continue;
        }
        let start = i;
        while i < bytes.len() && !matches!(bytes[i], b' ' | b'\t' | b'\r' | b'"') {
            i += 1;
        }
        let text = &raw[start..i];
        if text != "{" && text != "}" && !is_word(text) {
            return err(line, col, format!("invalid token `{text}`"));
        }
        out.push(Arg {
            text: text.to_string(),
            quoted: false,
            line,
            col,
        });
    }
    Ok(out)
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Builds canonical text.
pub struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    pub fn new(header: &str) -> Self {
        Self {
            out: format!("{header}\n"),
            depth: 0,
        }
    }

    pub fn line(&mut self, key: &str, args: &[&str]) {
        self.indent();
        self.out.push_str(key);
        for a in args {
            let _ = write!(self.out, " {a}");
        }
        self.out.push('\n');
    }

    pub fn open(&mut self, key: &str, args: &[&str]) {
        self.indent();
        self.out.push_str(key);
        for a in args {
            let _ = write!(self.out, " {a}");
        }
        self.out.push_str(" {\n");
        self.depth += 1;
    }

    pub fn close(&mut self) {
        self.depth -= 1;
        self.indent();
        self.out.push_str("}\n");
    }

    pub fn finish(self) -> String {
        debug_assert_eq!(self.depth, 0);
        self.out
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }
}

/// Reads sibling statements in a fixed order.
pub struct Fields<'a> {
    nodes: &'a [Node],
    next: usize,
    // Where to report a missing statement.
    end_line: usize,
}

impl<'a> Fields<'a> {
    pub fn new(nodes: &'a [Node], end_line: usize) -> Self {
        Self {
            nodes,
            next: 0,
            end_line,
        }
    }

    pub fn of_block(node: &'a Node) -> Result<Self, KvError> {
        match &node.children {
            Some(c) => Ok(Self::new(c, node.end_line)),
            None => err(node.line, node.col, format!("`{}` must open a block", node.key)),
        }
    }

    pub fn peek_key(&self) -> Option<&'a str> {
        self.nodes.get(self.next).map(|n| n.key.as_str())
    }

    pub fn take(&mut self, key: &str) -> Result<&'a Node, KvError> {
        match self.nodes.get(self.next) {
            Some(n) if n.key == key => {
                self.next += 1;
                Ok(n)
            }
            Some(n) => err(n.line, n.col, format!("expected `{key}`, found `{}`", n.key)),
            None => err(self.end_line, 1, format!("missing `{key}`")),
        }
    }

    pub fn take_opt(&mut self, key: &str) -> Option<&'a Node> {
        match self.nodes.get(self.next) {
            Some(n) if n.key == key => {
                self.next += 1;
                Some(n)
            }
            _ => None,
        }
    }

    pub fn finish(&self) -> Result<(), KvError> {
        match self.nodes.get(self.next) {
            Some(n) => err(n.line, n.col, format!("unexpected `{}`", n.key)),
            None => Ok(()),
        }
    }
}

impl Node {
    pub fn expect_leaf(&self, n_args: usize) -> Result<&[Arg], KvError> {
        if self.children.is_some() {
            return err(self.line, self.col, format!("`{}` does not take a block", self.key));
        }
        if self.args.len() != n_args {
            return err(
                self.line,
                self.col,
                format!("`{}` takes {n_args} argument(s), found {}", self.key, self.args.len()),
            );
        }
        Ok(&self.args)
    }

    pub fn string(&self) -> Result<String, KvError> {
        let a = &self.expect_leaf(1)?[0];
        if !a.quoted {
            return err(a.line, a.col, format!("`{}` expects a quoted string", self.key));
        }
        Ok(a.text.clone())
    }

    pub fn word(&self) -> Result<&str, KvError> {
        let a = &self.expect_leaf(1)?[0];
        a.word()
    }

    pub fn f64(&self) -> Result<f64, KvError> {
        self.expect_leaf(1)?[0].f64()
    }

    pub fn f64s<const N: usize>(&self) -> Result<[f64; N], KvError> {
        let args = self.expect_leaf(N)?;
        let mut out = [0.0; N];
        for (o, a) in out.iter_mut().zip(args) {
            *o = a.f64()?;
        }
        Ok(out)
    }
}

impl Arg {
    pub fn word(&self) -> Result<&str, KvError> {
        if self.quoted {
            return err(self.line, self.col, "expected a bare word");
        }
        Ok(&self.text)
    }

    pub fn f64(&self) -> Result<f64, KvError> {
        let w = self.word()?;
        let looks_numeric = w
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'-' | b'+' | b'.' | b'e' | b'E'));
        match w.parse::<f64>() {
            Ok(v) if looks_numeric => Ok(v),
            _ => err(self.line, self.col, format!("expected a number, found `{w}`")),
        }
    }

    pub fn u32(&self) -> Result<u32, KvError> {
        let w = self.word()?;
        if w.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(v) = w.parse() {
                return Ok(v);
            }
        }
        err(self.line, self.col, format!("expected a non-negative integer, found `{w}`"))
    }
}
