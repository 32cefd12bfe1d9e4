//! Line-oriented parser for the schedule language, plus nothing else; all
//! semantic checking beyond structure lives in `validate`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::core::{CsitConfig, CsitState, UserSubset};

use super::{Atom, DataSymbol, Expr, Scheme, Sign, Stream};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

const KEYWORDS: [&str; 11] = [
    "scheme", "users", "antennas", "slots", "csit", "data", "slot", "send", "zf", "obs", "part",
];

fn is_ident(text: &str) -> bool {
    let mut chars = text.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strips a `#` comment, respecting double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Parses schedule text into a scheme. Structural problems (malformed
/// lines, duplicate symbols, unknown receivers, slot headers out of range,
/// incomplete CSIT coverage) are parse errors; schedule-level problems are
/// left to `validate`.
pub fn parse_scheme(text: &str) -> Result<Scheme, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, 1, "empty input"),
    };
    let (name, users, antennas, slots) = parse_header(header_no, header)?;

    let mut csit_rows: Vec<Option<Vec<CsitState>>> = vec![None; slots as usize];
    let mut symbols: Vec<DataSymbol> = Vec::new();
    let mut schedule: Vec<Vec<Stream>> = vec![Vec::new(); slots as usize];
    let mut seen_slots: BTreeSet<u8> = BTreeSet::new();
    let mut current_slot: Option<u8> = None;

    for (no, line) in lines {
        let word = line.split_whitespace().next().unwrap_or("");
        match word {
            "csit" => parse_csit_line(no, line, users, slots, &mut csit_rows)?,
            "data" => parse_data_line(no, line, users, &mut symbols)?,
            "slot" => {
                let t = parse_slot_header(no, line, slots)?;
                if !seen_slots.insert(t) {
                    return err(no, 1, format!("duplicate block for slot {t}"));
                }
                current_slot = Some(t);
            }
            "send" => {
                let Some(t) = current_slot else {
                    return err(no, 1, "send before any slot header");
                };
                let stream = parse_send_line(no, line, users)?;
                schedule[t as usize - 1].push(stream);
            }
            _ => return err(no, 1, format!("expected csit, data, slot or send, got {word:?}")),
        }
    }

    let mut grid = Vec::with_capacity(slots as usize);
    for (i, row) in csit_rows.into_iter().enumerate() {
        match row {
            Some(r) => grid.push(r),
            None => return err(0, 0, format!("csit does not cover slot {}", i + 1)),
        }
    }
    let csit = CsitConfig::new(users, slots, grid)
        .map_err(|e| ParseError {
            line: 0,
            col: 0,
            msg: e.to_string(),
        })?;

    Ok(Scheme {
        name,
        users,
        antennas,
        slots,
        csit,
        symbols,
        schedule,
    })
}

fn parse_header(no: usize, line: &str) -> Result<(String, u8, u8, u8), ParseError> {
    let clauses: Vec<&str> = line.split(';').map(str::trim).collect();
    if clauses.len() != 4 {
        return err(
            no,
            1,
            "header must be: scheme \"<name>\" ; users <K> ; antennas <M> ; slots <T>",
        );
    }
    let name = match clauses[0].strip_prefix("scheme") {
        Some(rest) => {
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('"')
                .and_then(|r| r.strip_suffix('"'))
                .ok_or(ParseError {
                    line: no,
                    col: 1,
                    msg: "scheme name must be double-quoted".into(),
                })?;
            if inner.is_empty() {
                return err(no, 1, "scheme name is empty");
            }
            inner.to_string()
        }
        None => return err(no, 1, "header must start with the scheme clause"),
    };
    let field = |idx: usize, key: &str, lo: u8, hi: u8| -> Result<u8, ParseError> {
        let rest = clauses[idx].strip_prefix(key).ok_or(ParseError {
            line: no,
            col: 1,
            msg: format!("expected {key} clause at position {}", idx + 1),
        })?;
        let value: u8 = rest.trim().parse().map_err(|_| ParseError {
            line: no,
            col: 1,
            msg: format!("cannot parse {key} value {:?}", rest.trim()),
        })?;
        if value < lo || value > hi {
            return err(no, 1, format!("{key} must be in {lo}..={hi}, got {value}"));
        }
        Ok(value)
    };
    let users = field(1, "users", 1, crate::core::MAX_USERS)?;
    let antennas = field(2, "antennas", 1, u8::MAX)?;
    let slots = field(3, "slots", 1, u8::MAX)?;
    Ok((name, users, antennas, slots))
}

fn parse_csit_line(
    no: usize,
    line: &str,
    users: u8,
    slots: u8,
    rows: &mut [Option<Vec<CsitState>>],
) -> Result<(), ParseError> {
    let rest = line.strip_prefix("csit").unwrap().trim();
    let (range, letters) = rest.split_once(':').ok_or(ParseError {
        line: no,
        col: 1,
        msg: "csit line needs a colon: csit <a>-<b>: <states>".into(),
    })?;
    let range = range.trim();
    let (a, b) = match range.split_once('-') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (range, range),
    };
    let parse_slot = |txt: &str| -> Result<u8, ParseError> {
        let v: u8 = txt.parse().map_err(|_| ParseError {
            line: no,
            col: 1,
            msg: format!("cannot parse slot number {txt:?}"),
        })?;
        if v == 0 || v > slots {
            return err(no, 1, format!("slot index {v} out of range 1..={slots}"));
        }
        Ok(v)
    };
    let a = parse_slot(a)?;
    let b = parse_slot(b)?;
    if a > b {
        return err(no, 1, format!("csit range {a}-{b} is reversed"));
    }
    let letters = letters.trim();
    if letters.chars().count() != users as usize {
        return err(
            no,
            1,
            format!("csit states {letters:?} must list exactly {users} letters"),
        );
    }
    let mut states = Vec::with_capacity(users as usize);
    for c in letters.chars() {
        match CsitState::from_letter(c) {
            Some(s) => states.push(s),
            None => return err(no, 1, format!("unknown CSIT state {c:?} (want P, D or N)")),
        }
    }
    for t in a..=b {
        let cell = &mut rows[t as usize - 1];
        if cell.is_some() {
            return err(no, 1, format!("csit for slot {t} declared twice"));
        }
        *cell = Some(states.clone());
    }
    Ok(())
}

fn parse_data_line(
    no: usize,
    line: &str,
    users: u8,
    symbols: &mut Vec<DataSymbol>,
) -> Result<(), ParseError> {
    let rest = line.strip_prefix("data").unwrap().trim();
    let (list, dest) = rest.split_once("->").ok_or(ParseError {
        line: no,
        col: 1,
        msg: "data line needs an arrow: data <ids> -> R<i>".into(),
    })?;
    let dest = parse_receiver(no, 1, dest.trim(), users)?;
    for id in list.split(',').map(str::trim) {
        if !is_ident(id) {
            return err(no, 1, format!("bad symbol identifier {id:?}"));
        }
        if KEYWORDS.contains(&id) {
            return err(no, 1, format!("{id:?} is reserved and cannot name a symbol"));
        }
        if symbols.iter().any(|s| s.id == id) {
            return err(no, 1, format!("duplicate symbol {id:?}"));
        }
        symbols.push(DataSymbol {
            id: id.to_string(),
            dest,
        });
    }
    Ok(())
}

fn parse_slot_header(no: usize, line: &str, slots: u8) -> Result<u8, ParseError> {
    let rest = line.strip_prefix("slot").unwrap().trim();
    let body = rest.strip_suffix(':').ok_or(ParseError {
        line: no,
        col: 1,
        msg: "slot header must end with a colon".into(),
    })?;
    let t: u8 = body.trim().parse().map_err(|_| ParseError {
        line: no,
        col: 1,
        msg: format!("cannot parse slot number {:?}", body.trim()),
    })?;
    if t == 0 || t > slots {
        return err(no, 1, format!("slot index {t} out of range 1..={slots}"));
    }
    Ok(t)
}

fn parse_receiver(no: usize, col: usize, text: &str, users: u8) -> Result<u8, ParseError> {
    let body = text.strip_prefix('R').ok_or(ParseError {
        line: no,
        col,
        msg: format!("expected a receiver like R1, got {text:?}"),
    })?;
    let r: u8 = body.parse().map_err(|_| ParseError {
        line: no,
        col,
        msg: format!("expected a receiver like R1, got {text:?}"),
    })?;
    if r == 0 || r > users {
        return err(no, col, format!("unknown receiver R{r} (users 1..={users})"));
    }
    Ok(r)
}

// ---- send-line tokenizer and expression parser ----

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Plus,
    Minus,
}

struct Tokens {
    line: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Tokens {
    fn lex(no: usize, text: &str, offset: usize) -> Result<Tokens, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = offset + i + 1;
            let c = chars[i];
            match c {
                ' ' | '\t' => i += 1,
                '(' => {
                    toks.push((col, Tok::LParen));
                    i += 1;
                }
                ')' => {
                    toks.push((col, Tok::RParen));
                    i += 1;
                }
                '{' => {
                    toks.push((col, Tok::LBrace));
                    i += 1;
                }
                '}' => {
                    toks.push((col, Tok::RBrace));
                    i += 1;
                }
                ',' => {
                    toks.push((col, Tok::Comma));
                    i += 1;
                }
                '+' => {
                    toks.push((col, Tok::Plus));
                    i += 1;
                }
                '-' => {
                    toks.push((col, Tok::Minus));
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    toks.push((col, Tok::Int(text.parse().unwrap())));
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                    {
                        i += 1;
                    }
                    toks.push((col, Tok::Ident(chars[start..i].iter().collect())));
                }
                other => return err(no, col, format!("unexpected character {other:?}")),
            }
        }
        Ok(Tokens {
            line: no,
            toks,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(c, _)| *c)
            .unwrap_or(1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let col = self.col();
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => err(self.line, col, format!("expected {what}, got {other:?}")),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<u64, ParseError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            other => err(self.line, col, format!("expected {what}, got {other:?}")),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(usize, String), ParseError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok((col, s)),
            other => err(self.line, col, format!("expected {what}, got {other:?}")),
        }
    }
}

fn parse_send_line(no: usize, line: &str, users: u8) -> Result<Stream, ParseError> {
    let body_start = line.find("send").unwrap() + 4;
    let mut toks = Tokens::lex(no, &line[body_start..], body_start)?;

    let mut terms = Vec::new();
    let mut sign = match toks.peek() {
        Some(Tok::Minus) => {
            toks.next();
            Sign::Minus
        }
        _ => Sign::Plus,
    };
    loop {
        terms.push((sign, parse_atom(&mut toks, users)?));
        sign = match toks.peek() {
            Some(Tok::Plus) => {
                toks.next();
                Sign::Plus
            }
            Some(Tok::Minus) => {
                toks.next();
                Sign::Minus
            }
            _ => break,
        };
    }

    let mut zf = BTreeSet::new();
    if let Some(Tok::Ident(id)) = toks.peek() {
        if id == "zf" {
            toks.next();
            loop {
                let (col, rname) = toks.expect_ident("a receiver after zf")?;
                zf.insert(parse_receiver(no, col, &rname, users)?);
                match toks.peek() {
                    Some(Tok::Comma) => {
                        toks.next();
                    }
                    _ => break,
                }
            }
        }
    }
    if let Some(t) = toks.peek() {
        return err(no, toks.col(), format!("trailing input {t:?}"));
    }
    Ok(Stream {
        expr: Expr { terms },
        zf,
    })
}

fn parse_atom(toks: &mut Tokens, users: u8) -> Result<Atom, ParseError> {
    let line = toks.line;
    let (col, head) = toks.expect_ident("an atom (symbol, obs or part)")?;
    match head.as_str() {
        "obs" => {
            toks.expect(Tok::LParen, "( after obs")?;
            let (rcol, rname) = toks.expect_ident("a receiver")?;
            let rx = parse_receiver(line, rcol, &rname, users)?;
            toks.expect(Tok::Comma, ", between receiver and slot")?;
            let slot = toks.expect_int("a slot number")?;
            toks.expect(Tok::RParen, ") after obs arguments")?;
            Ok(Atom::Obs {
                rx,
                slot: clamp_slot(slot),
            })
        }
        "part" => {
            toks.expect(Tok::LParen, "( after part")?;
            let (rcol, rname) = toks.expect_ident("a receiver")?;
            let rx = parse_receiver(line, rcol, &rname, users)?;
            toks.expect(Tok::Comma, ", between receiver and slot")?;
            let slot = toks.expect_int("a slot number")?;
            toks.expect(Tok::Comma, ", before the owner set")?;
            toks.expect(Tok::LBrace, "{ opening the owner set")?;
            let mut owners = Vec::new();
            loop {
                let ocol = toks.col();
                let owner = toks.expect_int("an owner user")?;
                if owner == 0 || owner as u8 > users || owner > u8::MAX as u64 {
                    return err(line, ocol, format!("unknown owner user {owner}"));
                }
                owners.push(owner as u8);
                match toks.peek() {
                    Some(Tok::Comma) => {
                        toks.next();
                    }
                    _ => break,
                }
            }
            toks.expect(Tok::RBrace, "} closing the owner set")?;
            toks.expect(Tok::RParen, ") after part arguments")?;
            let owners = UserSubset::from_users(&owners).map_err(|e| ParseError {
                line,
                col,
                msg: e.to_string(),
            })?;
            Ok(Atom::Part { rx, slot: clamp_slot(slot), owners })
        }
        "zf" => err(line, col, "zf clause before any atom"),
        _ => Ok(Atom::Sym(head)),
    }
}

/// Atom slot references are range-checked by the validator, not the parser;
/// clamping only protects the u8 field.
fn clamp_slot(slot: u64) -> u8 {
    slot.min(u8::MAX as u64) as u8
}
