//! Static checks on a parsed scheme: every observation reference must be
//! causal and backed by CSIT, zero-forcing must be backed by current
//! perfect CSIT, and no slot may ask for more zero-forced single-purpose
//! streams than the antenna count leaves room for.

use std::collections::BTreeMap;
use std::fmt;

use crate::core::CsitState;

use super::{Atom, Scheme, Stream};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IssueKind {
    Causality,
    CsitAvailability,
    ZfCapacity,
    ZfRequiresPerfect,
    UndefinedSymbol,
    UncoveredCsit,
}

impl IssueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueKind::Causality => "causality",
            IssueKind::CsitAvailability => "csit-availability",
            IssueKind::ZfCapacity => "zf-capacity",
            IssueKind::ZfRequiresPerfect => "zf-requires-perfect",
            IssueKind::UndefinedSymbol => "undefined-symbol",
            IssueKind::UncoveredCsit => "uncovered-csit",
        }
    }
}

/// One finding; `slot` is 0 for scheme-level findings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Issue {
    pub slot: u8,
    pub kind: IssueKind,
    pub detail: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slot == 0 {
            write!(f, "[{}] {}", self.kind.as_str(), self.detail)
        } else {
            write!(f, "slot {}: [{}] {}", self.slot, self.kind.as_str(), self.detail)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

/// Checks a scheme and collects every issue in slot order. An empty issue
/// list marks the scheme ready to execute; a flagged scheme can still be
/// run, it just carries no static guarantee.
pub fn validate(scheme: &Scheme) -> ValidationReport {
    let mut issues = Vec::new();

    if scheme.csit.k() != scheme.users || scheme.csit.slots() != scheme.slots {
        issues.push(Issue {
            slot: 0,
            kind: IssueKind::UncoveredCsit,
            detail: format!(
                "CSIT grid covers {} slots x {} users but the scheme has {} slots x {} users",
                scheme.csit.slots(),
                scheme.csit.k(),
                scheme.slots,
                scheme.users
            ),
        });
    }

    for (idx, streams) in scheme.schedule.iter().enumerate() {
        let t = (idx + 1).min(u8::MAX as usize) as u8;
        for (s_idx, stream) in streams.iter().enumerate() {
            check_stream(scheme, t, s_idx + 1, stream, &mut issues);
        }
        check_slot_capacity(scheme, t, streams, &mut issues);
    }

    ValidationReport {
        ok: issues.is_empty(),
        issues,
    }
}

fn check_stream(scheme: &Scheme, t: u8, s_no: usize, stream: &Stream, issues: &mut Vec<Issue>) {
    for (_, atom) in &stream.expr.terms {
        match atom {
            Atom::Sym(id) => {
                if scheme.symbol_dest(id).is_none() {
                    issues.push(Issue {
                        slot: t,
                        kind: IssueKind::UndefinedSymbol,
                        detail: format!("stream {s_no} uses undeclared symbol {id:?}"),
                    });
                }
            }
            Atom::Obs { rx, slot } | Atom::Part { rx, slot, .. } => {
                if *slot == 0 || *slot >= t {
                    issues.push(Issue {
                        slot: t,
                        kind: IssueKind::Causality,
                        detail: format!(
                            "stream {s_no} references receiver {rx}'s slot-{slot} observation, \
                             which is not strictly in the past"
                        ),
                    });
                } else if scheme.csit.state(*slot, *rx) == Some(CsitState::None) {
                    issues.push(Issue {
                        slot: t,
                        kind: IssueKind::CsitAvailability,
                        detail: format!(
                            "stream {s_no} needs receiver {rx}'s slot-{slot} channel, \
                             which the transmitter never learns"
                        ),
                    });
                }
            }
        }
    }

    for &rx in &stream.zf {
        match scheme.csit.state(t, rx) {
            Some(CsitState::Perfect) | None => {}
            Some(other) => issues.push(Issue {
                slot: t,
                kind: IssueKind::ZfRequiresPerfect,
                detail: format!(
                    "stream {s_no} zero-forces at receiver {rx} whose slot-{t} CSIT is {other}"
                ),
            }),
        }
    }

    if stream.zf.len() >= scheme.antennas as usize {
        issues.push(Issue {
            slot: t,
            kind: IssueKind::ZfCapacity,
            detail: format!(
                "stream {s_no} zero-forces {} receivers, leaving no direction with {} antennas",
                stream.zf.len(),
                scheme.antennas
            ),
        });
    }
}

/// Streams carrying only fresh symbols for one receiver must fit inside the
/// null space their zero-forcing set leaves: at most M - |zf| of them may
/// share a (zf set, destination) pair in one slot. Streams mixing
/// observation parts or destinations pick dependent directions on purpose
/// and are exempt.
fn check_slot_capacity(scheme: &Scheme, t: u8, streams: &[Stream], issues: &mut Vec<Issue>) {
    let mut groups: BTreeMap<(Vec<u8>, u8), usize> = BTreeMap::new();
    for stream in streams {
        let mut dest = None;
        let mut pure = !stream.expr.terms.is_empty();
        for (_, atom) in &stream.expr.terms {
            match atom {
                Atom::Sym(id) => match (scheme.symbol_dest(id), dest) {
                    (Some(d), None) => dest = Some(d),
                    (Some(d), Some(prev)) if d == prev => {}
                    _ => {
                        pure = false;
                        break;
                    }
                },
                _ => {
                    pure = false;
                    break;
                }
            }
        }
        if let (true, Some(d)) = (pure, dest) {
            let key = (stream.zf.iter().copied().collect(), d);
            *groups.entry(key).or_insert(0) += 1;
        }
    }
    for ((zf, dest), count) in groups {
        let nulled = zf.len();
        if nulled >= scheme.antennas as usize {
            continue;
        }
        let capacity = scheme.antennas as usize - nulled;
        if count > capacity {
            let set = if zf.is_empty() {
                "no receivers".to_string()
            } else {
                zf.iter()
                    .map(|r| format!("R{r}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            issues.push(Issue {
                slot: t,
                kind: IssueKind::ZfCapacity,
                detail: format!(
                    "{count} fresh streams for R{dest} zero-force {set}, but only {capacity} \
                     independent directions remain with {} antennas",
                    scheme.antennas
                ),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::CsitConfig;
    use crate::schemedsl::parse_scheme;

    fn kinds(report: &ValidationReport) -> Vec<(u8, IssueKind)> {
        report.issues.iter().map(|i| (i.slot, i.kind)).collect()
    }

    #[test]
    fn causality_rejects_present_future_and_slot_zero() {
        let text = r#"
scheme "x" ; users 3 ; antennas 3 ; slots 2
csit 1-2: PDD
data a -> R1
slot 1:
  send obs(R2, 1)
  send obs(R2, 0)
  send part(R3, 2, {1})
slot 2:
  send obs(R2, 1)
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert_eq!(
            kinds(&report),
            vec![
                (1, IssueKind::Causality),
                (1, IssueKind::Causality),
                (1, IssueKind::Causality),
            ]
        );
        assert!(!report.ok);
    }

    #[test]
    fn availability_needs_a_learnable_channel() {
        let text = r#"
scheme "x" ; users 3 ; antennas 3 ; slots 2
csit 1: DND
csit 2: PDD
data a -> R1
slot 2:
  send part(R2, 1, {1})
  send part(R1, 1, {2})
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert_eq!(kinds(&report), vec![(2, IssueKind::CsitAvailability)]);
        assert!(report.issues[0].detail.contains("receiver 2"));
    }

    #[test]
    fn zero_forcing_needs_current_perfect_csit() {
        let text = r#"
scheme "x" ; users 3 ; antennas 3 ; slots 1
csit 1: PDN
data a -> R1
slot 1:
  send a zf R2
  send a zf R3
  send a zf R1
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert_eq!(
            kinds(&report),
            vec![
                (1, IssueKind::ZfRequiresPerfect),
                (1, IssueKind::ZfRequiresPerfect),
            ]
        );
    }

    #[test]
    fn a_stream_cannot_null_every_antenna_direction() {
        let text = r#"
scheme "x" ; users 3 ; antennas 2 ; slots 1
csit 1: PPD
data a -> R3
slot 1:
  send a zf R1, R2
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert_eq!(kinds(&report), vec![(1, IssueKind::ZfCapacity)]);
    }

    #[test]
    fn fresh_streams_sharing_a_null_space_are_counted() {
        let text = r#"
scheme "x" ; users 3 ; antennas 3 ; slots 1
csit 1: PDD
data a, b, c -> R2
data d -> R3
slot 1:
  send a zf R1
  send b zf R1
  send c zf R1
  send d zf R1
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert_eq!(kinds(&report), vec![(1, IssueKind::ZfCapacity)]);
        assert!(report.issues[0].detail.contains("3 fresh streams for R2"));
    }

    #[test]
    fn retransmission_streams_are_exempt_from_the_group_count() {
        let text = r#"
scheme "x" ; users 3 ; antennas 3 ; slots 2
csit 1-2: PDD
data a -> R1
slot 1:
  send a
slot 2:
  send part(R2, 1, {1}) zf R1
  send part(R3, 1, {1}) zf R1
  send obs(R2, 1) zf R1
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert!(report.ok, "{:?}", report.issues);
    }

    #[test]
    fn undeclared_symbols_are_flagged() {
        let text = r#"
scheme "x" ; users 2 ; antennas 2 ; slots 1
csit 1: PD
data a -> R1
slot 1:
  send a + b
"#;
        let report = validate(&parse_scheme(text).unwrap());
        assert_eq!(kinds(&report), vec![(1, IssueKind::UndefinedSymbol)]);
        assert!(report.issues[0].detail.contains("\"b\""));
    }

    #[test]
    fn csit_grid_mismatch_is_scheme_level() {
        let text = r#"
scheme "x" ; users 2 ; antennas 2 ; slots 2
csit 1-2: PD
data a -> R1
slot 1:
  send a
"#;
        let mut scheme = parse_scheme(text).unwrap();
        scheme.csit = CsitConfig::hybrid(2, 1, 3).unwrap();
        let report = validate(&scheme);
        assert_eq!(kinds(&report), vec![(0, IssueKind::UncoveredCsit)]);
    }

    #[test]
    fn adding_streams_never_clears_existing_issues() {
        let base = r#"
scheme "x" ; users 3 ; antennas 3 ; slots 2
csit 1-2: PDD
data a -> R1
slot 1:
  send a + b
"#;
        let mut scheme = parse_scheme(base).unwrap();
        let before = validate(&scheme);
        let extra = parse_scheme(
            r#"
scheme "y" ; users 3 ; antennas 3 ; slots 2
csit 1-2: PDD
data a -> R1
slot 2:
  send obs(R2, 2) zf R2
"#,
        )
        .unwrap();
        scheme.schedule[1].push(extra.schedule[1][0].clone());
        let after = validate(&scheme);
        for pair in kinds(&before) {
            assert!(kinds(&after).contains(&pair));
        }
        assert!(after.issues.len() > before.issues.len());
    }

    #[test]
    fn kind_names_are_stable() {
        let pairs = [
            (IssueKind::Causality, "causality"),
            (IssueKind::CsitAvailability, "csit-availability"),
            (IssueKind::ZfCapacity, "zf-capacity"),
            (IssueKind::ZfRequiresPerfect, "zf-requires-perfect"),
            (IssueKind::UndefinedSymbol, "undefined-symbol"),
            (IssueKind::UncoveredCsit, "uncovered-csit"),
        ];
        for (kind, name) in pairs {
            assert_eq!(kind.as_str(), name);
        }
    }
}
