//! A small schedule language for linear transmission schemes.
//!
//! A scheme fixes the user count K, antenna count M and slot count T,
//! declares a CSIT state for every slot and user, declares data symbols
//! with their destination receivers, and lists per slot the streams the
//! transmitter sends. A stream is a signed sum of atoms, optionally
//! zero-forced at a set of receivers:
//!
//! - a bare symbol name transmits that fresh data symbol;
//! - `obs(Rr, t)` retransmits receiver r's observation from slot t;
//! - `part(Rr, t, {a, b})` retransmits only the columns of that
//!   observation belonging to symbols destined for users a, b.
//!
//! `validate` checks the schedule against the CSIT grid (causality,
//! availability, zero-forcing capacity); the engine executes it.

mod parser;
mod validate;

pub use parser::{parse_scheme, ParseError};
pub use validate::{validate, Issue, IssueKind, ValidationReport};

use std::collections::BTreeSet;
use std::fmt;

use crate::core::{CsitConfig, UserSubset};

/// A fresh data symbol and the receiver it is destined for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DataSymbol {
    pub id: String,
    pub dest: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    /// A declared data symbol.
    Sym(String),
    /// Receiver `rx`'s observation from slot `slot`.
    Obs { rx: u8, slot: u8 },
    /// The part of that observation owned by symbols destined for `owners`.
    Part {
        rx: u8,
        slot: u8,
        owners: UserSubset,
    },
}

/// A signed sum of atoms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expr {
    pub terms: Vec<(Sign, Atom)>,
}

/// One transmitted stream: an expression and the receivers whose channels
/// its beamformer must lie orthogonal to.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stream {
    pub expr: Expr,
    pub zf: BTreeSet<u8>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scheme {
    pub name: String,
    pub users: u8,
    pub antennas: u8,
    pub slots: u8,
    pub csit: CsitConfig,
    /// Declaration order fixes the engine's symbol column order.
    pub symbols: Vec<DataSymbol>,
    /// `schedule[t-1]` lists slot t's streams in file order.
    pub schedule: Vec<Vec<Stream>>,
}

impl Scheme {
    pub fn symbol_dest(&self, id: &str) -> Option<u8> {
        self.symbols.iter().find(|s| s.id == id).map(|s| s.dest)
    }

    /// Number of declared symbols destined for each receiver, index 0 =
    /// receiver 1.
    pub fn symbols_per_receiver(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.users as usize];
        for sym in &self.symbols {
            counts[sym.dest as usize - 1] += 1;
        }
        counts
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(id) => write!(f, "{id}"),
            Atom::Obs { rx, slot } => write!(f, "obs(R{rx}, {slot})"),
            Atom::Part { rx, slot, owners } => {
                let list: Vec<String> = owners.members().iter().map(|u| u.to_string()).collect();
                write!(f, "part(R{rx}, {slot}, {{{}}})", list.join(", "))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (sign, atom)) in self.terms.iter().enumerate() {
            match (i, sign) {
                (0, Sign::Plus) => write!(f, "{atom}")?,
                (0, Sign::Minus) => write!(f, "-{atom}")?,
                (_, Sign::Plus) => write!(f, " + {atom}")?,
                (_, Sign::Minus) => write!(f, " - {atom}")?,
            }
        }
        Ok(())
    }
}

/// Canonical text form: header, merged CSIT ranges, data declarations
/// grouped by destination runs, then every slot in order. Parsing the
/// output reproduces the scheme exactly.
pub fn emit_scheme(scheme: &Scheme) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scheme \"{}\" ; users {} ; antennas {} ; slots {}\n",
        scheme.name, scheme.users, scheme.antennas, scheme.slots
    ));

    let mut t = 1u8;
    while t <= scheme.slots {
        let letters = scheme.csit.slot_letters(t).expect("slot in range");
        let mut end = t;
        while end < scheme.slots && scheme.csit.slot_letters(end + 1).as_deref() == Some(&letters) {
            end += 1;
        }
        out.push_str(&format!("csit {t}-{end}: {letters}\n"));
        t = end + 1;
    }

    let mut i = 0;
    while i < scheme.symbols.len() {
        let dest = scheme.symbols[i].dest;
        let mut end = i;
        while end + 1 < scheme.symbols.len() && scheme.symbols[end + 1].dest == dest {
            end += 1;
        }
        let ids: Vec<&str> = scheme.symbols[i..=end]
            .iter()
            .map(|s| s.id.as_str())
            .collect();
        out.push_str(&format!("data {} -> R{dest}\n", ids.join(", ")));
        i = end + 1;
    }

    for (t0, streams) in scheme.schedule.iter().enumerate() {
        out.push_str(&format!("slot {}:\n", t0 + 1));
        for stream in streams {
            out.push_str(&format!("  send {}", stream.expr));
            if !stream.zf.is_empty() {
                let rs: Vec<String> = stream.zf.iter().map(|r| format!("R{r}")).collect();
                out.push_str(&format!(" zf {}", rs.join(", ")));
            }
            out.push('\n');
        }
    }
    out
}

// ---- built-in schemes ----

const HYBRID_A: &str = include_str!("builtins/hybrid-5over3-a.dsl");
const HYBRID_B: &str = include_str!("builtins/hybrid-5over3-b.dsl");
const ALT_NPP: &str = include_str!("builtins/alt-npp-4over9.dsl");

pub const BUILTIN_NAMES: [&str; 3] = ["hybrid-5over3-a", "hybrid-5over3-b", "alt-npp-4over9"];

/// Source text of a bundled scheme, by name.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "hybrid-5over3-a" => Some(HYBRID_A),
        "hybrid-5over3-b" => Some(HYBRID_B),
        "alt-npp-4over9" => Some(ALT_NPP),
        _ => None,
    }
}

/// Parsed form of a bundled scheme; the bundled texts always parse.
pub fn builtin_scheme(name: &str) -> Option<Scheme> {
    builtin(name).map(|text| parse_scheme(text).expect("bundled scheme parses"))
}
