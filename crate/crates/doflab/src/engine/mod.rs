//! Executes a scheme over random channel realizations and checks
//! decodability by rank accounting.
//!
//! For one trial the engine draws every receiver's channel vector per slot,
//! builds each stream's beamformer inside the null space of its zero-forcing
//! set, and expands each receiver's observations into a slots-by-symbols
//! coefficient matrix. A receiver decodes its symbols exactly when its full
//! observation rank exceeds the rank of the interference alone by the number
//! of desired symbols.
//!
//! Three scalar modes share this code path: a 61-bit prime field and exact
//! rationals certify generic-coefficient decodability, complex doubles model
//! the Gaussian channel for rate calculations. Structurally impossible
//! schedules (references to missing observations, zero-forcing sets that
//! swallow every antenna direction) surface as errors; oversubscribed but
//! runnable schedules simply fail their rank checks.

pub mod linalg;
pub mod rng;
pub mod scalar;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use thiserror::Error;

use crate::core::{rat, DofPoint, Rat, UserSubset};
use crate::schemedsl::{Atom, Scheme, Sign};

use linalg::{dot, null_space, rank};
use rng::{derive, TAG_CHANNEL, TAG_PRECODER, TAG_TRIAL};
use scalar::{Fp61, Sample, Scalar};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("bad scheme: {0}")]
    BadScheme(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("slot {slot}, stream {stream}: {detail}")]
    BadReference {
        slot: u8,
        stream: usize,
        detail: String,
    },
    #[error("slot {slot}, stream {stream}: zero-forcing leaves no transmit direction")]
    NoNullDirection { slot: u8, stream: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Field,
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Field => "field",
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Mode, EngineError> {
        match s {
            "field" => Ok(Mode::Field),
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(EngineError::BadParam(format!(
                "unknown mode {other:?} (want field, rational or float)"
            ))),
        }
    }
}

/// Per-receiver observation coefficients for one channel realization.
#[derive(Clone, PartialEq, Debug)]
pub struct Expansion<S> {
    pub users: u8,
    pub slots: u8,
    /// Column order, copied from the scheme's declaration order.
    pub symbols: Vec<String>,
    /// Column indices of each receiver's own symbols, index 0 = receiver 1.
    pub desired: Vec<Vec<usize>>,
    /// `rows[r-1][t-1][j]`: receiver r's slot-t coefficient on symbol j.
    pub rows: Vec<Vec<Vec<S>>>,
    /// Stream count of the busiest slot.
    pub max_streams: usize,
}

/// Runs one realization of a scheme: draws channels keyed by `trial_key`,
/// beamforms every stream and accumulates what each receiver hears.
pub fn expand<S: Sample>(scheme: &Scheme, trial_key: u64) -> Result<Expansion<S>, EngineError> {
    let k = scheme.users as usize;
    let m = scheme.antennas as usize;
    let t_max = scheme.slots as usize;
    if k == 0 || m == 0 || t_max == 0 {
        return Err(EngineError::BadScheme(
            "need at least one user, antenna and slot".into(),
        ));
    }
    if scheme.schedule.len() != t_max {
        return Err(EngineError::BadScheme(format!(
            "schedule covers {} slots but the header declares {t_max}",
            scheme.schedule.len()
        )));
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut dests = Vec::with_capacity(scheme.symbols.len());
    for (j, sym) in scheme.symbols.iter().enumerate() {
        if sym.dest == 0 || sym.dest as usize > k {
            return Err(EngineError::BadScheme(format!(
                "symbol {:?} is destined for unknown receiver {}",
                sym.id, sym.dest
            )));
        }
        if index.insert(&sym.id, j).is_some() {
            return Err(EngineError::BadScheme(format!(
                "symbol {:?} declared twice",
                sym.id
            )));
        }
        dests.push(sym.dest);
    }
    let n = scheme.symbols.len();

    let channels: Vec<Vec<Vec<S>>> = (1..=t_max as u64)
        .map(|t| {
            (1..=k as u64)
                .map(|r| {
                    (0..m as u64)
                        .map(|j| S::sample(&[trial_key, TAG_CHANNEL, t, r, j]))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut rows: Vec<Vec<Vec<S>>> = vec![Vec::with_capacity(t_max); k];
    for (t_idx, streams) in scheme.schedule.iter().enumerate() {
        let t = t_idx + 1;
        let mut sent: Vec<(Vec<S>, Vec<S>)> = Vec::with_capacity(streams.len());
        for (s_idx, stream) in streams.iter().enumerate() {
            let fail = |detail: String| EngineError::BadReference {
                slot: t as u8,
                stream: s_idx + 1,
                detail,
            };
            let mut content = vec![S::zero(); n];
            for (sign, atom) in &stream.expr.terms {
                let term: Vec<S> = match atom {
                    Atom::Sym(id) => {
                        let &j = index
                            .get(id.as_str())
                            .ok_or_else(|| fail(format!("undeclared symbol {id:?}")))?;
                        let mut e = vec![S::zero(); n];
                        e[j] = S::one();
                        e
                    }
                    Atom::Obs { rx, slot } | Atom::Part { rx, slot, .. } => {
                        if *rx == 0 || *rx as usize > k {
                            return Err(fail(format!("unknown receiver R{rx}")));
                        }
                        if *slot == 0 || *slot as usize >= t {
                            return Err(fail(format!(
                                "receiver {rx}'s slot-{slot} observation does not exist yet"
                            )));
                        }
                        let base = &rows[*rx as usize - 1][*slot as usize - 1];
                        match atom {
                            Atom::Part { owners, .. } => base
                                .iter()
                                .zip(&dests)
                                .map(|(v, &d)| {
                                    if owners.contains(d) {
                                        v.clone()
                                    } else {
                                        S::zero()
                                    }
                                })
                                .collect(),
                            _ => base.clone(),
                        }
                    }
                };
                for (c, v) in content.iter_mut().zip(&term) {
                    *c = match sign {
                        Sign::Plus => c.add(v),
                        Sign::Minus => c.sub(v),
                    };
                }
            }

            let mut zf_rows = Vec::with_capacity(stream.zf.len());
            for &r in &stream.zf {
                if r == 0 || r as usize > k {
                    return Err(fail(format!("unknown zero-forcing receiver R{r}")));
                }
                zf_rows.push(channels[t_idx][r as usize - 1].clone());
            }
            let basis = null_space(&zf_rows, m);
            if basis.is_empty() {
                return Err(EngineError::NoNullDirection {
                    slot: t as u8,
                    stream: s_idx + 1,
                });
            }
            let mut g = vec![S::zero(); m];
            for (b_idx, b) in basis.iter().enumerate() {
                let w = S::sample(&[trial_key, TAG_PRECODER, t as u64, s_idx as u64, b_idx as u64]);
                for (gj, bj) in g.iter_mut().zip(b) {
                    *gj = gj.add(&w.mul(bj));
                }
            }
            sent.push((g, content));
        }

        for r in 0..k {
            let mut row = vec![S::zero(); n];
            for (g, content) in &sent {
                let coef = dot(&channels[t_idx][r], g);
                for (acc, v) in row.iter_mut().zip(content) {
                    *acc = acc.add(&coef.mul(v));
                }
            }
            rows[r].push(row);
        }
    }

    let desired = (1..=k as u8)
        .map(|r| {
            dests
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == r)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    Ok(Expansion {
        users: scheme.users,
        slots: scheme.slots,
        symbols: scheme.symbols.iter().map(|s| s.id.clone()).collect(),
        desired,
        rows,
        max_streams: scheme.schedule.iter().map(Vec::len).max().unwrap_or(0),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ReceiverDecode {
    pub rx: u8,
    pub desired: usize,
    pub rank_full: usize,
    pub rank_int: usize,
    pub ok: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecodeReport {
    pub receivers: Vec<ReceiverDecode>,
    pub ok: bool,
}

/// Rank test per receiver: observations must rise above the interference
/// subspace by exactly the number of desired symbols.
pub fn decode_check<S: Scalar>(exp: &Expansion<S>) -> DecodeReport {
    let mut receivers = Vec::with_capacity(exp.rows.len());
    for (idx, rows_r) in exp.rows.iter().enumerate() {
        let rank_full = rank(rows_r);
        let int_rows: Vec<Vec<S>> = rows_r
            .iter()
            .map(|row| {
                let mut masked = row.clone();
                for &c in &exp.desired[idx] {
                    masked[c] = S::zero();
                }
                masked
            })
            .collect();
        let rank_int = rank(&int_rows);
        let desired = exp.desired[idx].len();
        receivers.push(ReceiverDecode {
            rx: idx as u8 + 1,
            desired,
            rank_full,
            rank_int,
            ok: rank_full == rank_int + desired,
        });
    }
    let ok = receivers.iter().all(|r| r.ok);
    DecodeReport { receivers, ok }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimReport {
    pub scheme: String,
    pub mode: Mode,
    pub seed: u64,
    pub trials: u64,
    /// Trials in which each receiver decoded, index 0 = receiver 1.
    pub receiver_successes: Vec<u64>,
    /// Trials in which every receiver decoded.
    pub full_successes: u64,
    /// Symbols per receiver divided by slots, present when every trial
    /// decoded everywhere.
    pub achieved: Option<DofPoint>,
    pub first_trial: DecodeReport,
}

/// Repeats the decode check over independent channel draws.
pub fn simulate(
    scheme: &Scheme,
    trials: u64,
    seed: u64,
    mode: Mode,
) -> Result<SimReport, EngineError> {
    simulate_with(scheme, trials, seed, mode, 1)
}

/// Like [`simulate`], with the trials fanned out over worker threads.
/// Every trial keys its own channel draw, so the counts are identical for
/// any thread count.
pub fn simulate_with(
    scheme: &Scheme,
    trials: u64,
    seed: u64,
    mode: Mode,
    threads: usize,
) -> Result<SimReport, EngineError> {
    if trials == 0 {
        return Err(EngineError::BadParam("need at least one trial".into()));
    }
    if threads == 0 {
        return Err(EngineError::BadParam("need at least one thread".into()));
    }
    match mode {
        Mode::Field => run::<Fp61>(scheme, trials, seed, mode, threads),
        Mode::Rational => run::<Rat>(scheme, trials, seed, mode, threads),
        Mode::Float => run::<Complex64>(scheme, trials, seed, mode, threads),
    }
}

type SpanResult = Result<(Vec<u64>, u64, Option<DecodeReport>), EngineError>;

fn run_span<S: Sample>(scheme: &Scheme, span: std::ops::Range<u64>, seed: u64) -> SpanResult {
    let mut successes = vec![0u64; scheme.users as usize];
    let mut full = 0;
    let mut first = None;
    for i in span {
        let trial_key = derive(&[seed, TAG_TRIAL, i]);
        let exp = expand::<S>(scheme, trial_key)?;
        let report = decode_check(&exp);
        for (count, rd) in successes.iter_mut().zip(&report.receivers) {
            if rd.ok {
                *count += 1;
            }
        }
        if report.ok {
            full += 1;
        }
        if i == 0 {
            first = Some(report);
        }
    }
    Ok((successes, full, first))
}

fn run<S: Sample>(
    scheme: &Scheme,
    trials: u64,
    seed: u64,
    mode: Mode,
    threads: usize,
) -> Result<SimReport, EngineError> {
    let k = scheme.users as usize;
    let workers = threads.min(trials as usize).max(1) as u64;
    let parts: Vec<(Vec<u64>, u64, Option<DecodeReport>)> = if workers == 1 {
        vec![run_span::<S>(scheme, 0..trials, seed)?]
    } else {
        let chunk = trials.div_ceil(workers);
        let spans: Vec<_> = (0..workers)
            .map(|w| (w * chunk)..((w + 1) * chunk).min(trials))
            .collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = spans
                .into_iter()
                .map(|span| scope.spawn(move || run_span::<S>(scheme, span, seed)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation worker panicked"))
                .collect::<Result<_, _>>()
        })?
    };
    let mut receiver_successes = vec![0u64; k];
    let mut full_successes = 0;
    let mut first_trial = None;
    for (successes, full, first) in parts {
        for (count, part) in receiver_successes.iter_mut().zip(&successes) {
            *count += part;
        }
        full_successes += full;
        first_trial = first_trial.or(first);
    }
    let achieved = if full_successes == trials {
        let mut point = DofPoint::new(scheme.users);
        for (r, count) in scheme.symbols_per_receiver().into_iter().enumerate() {
            point
                .set(
                    UserSubset::singleton(r as u8 + 1),
                    rat(count as i64, scheme.slots as i64),
                )
                .map_err(|e| EngineError::BadScheme(e.to_string()))?;
        }
        Some(point)
    } else {
        None
    };
    Ok(SimReport {
        scheme: scheme.name.clone(),
        mode,
        seed,
        trials,
        receiver_successes,
        full_successes,
        achieved,
        first_trial: first_trial.expect("at least one trial ran"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::rat;
    use crate::schemedsl::{builtin_scheme, parse_scheme, BUILTIN_NAMES};

    #[test]
    fn builtin_schemes_decode_in_every_mode() {
        for name in BUILTIN_NAMES {
            let scheme = builtin_scheme(name).unwrap();
            for mode in [Mode::Field, Mode::Rational, Mode::Float] {
                let report = simulate(&scheme, 2, 7, mode).unwrap();
                assert_eq!(report.full_successes, 2, "{name} in {mode} mode");
                assert!(report.achieved.is_some());
            }
        }
    }

    #[test]
    fn six_slot_scheme_ranks_match_the_hand_count() {
        let scheme = builtin_scheme("hybrid-5over3-a").unwrap();
        let report = simulate(&scheme, 1, 11, Mode::Field).unwrap();
        let rx = &report.first_trial.receivers;
        assert_eq!((rx[0].rank_full, rx[0].rank_int, rx[0].desired), (6, 0, 6));
        assert_eq!((rx[1].rank_full, rx[1].rank_int, rx[1].desired), (6, 4, 2));
        assert_eq!((rx[2].rank_full, rx[2].rank_int, rx[2].desired), (6, 4, 2));
    }

    #[test]
    fn alternating_scheme_ranks_match_the_hand_count() {
        let scheme = builtin_scheme("alt-npp-4over9").unwrap();
        let report = simulate(&scheme, 1, 13, Mode::Field).unwrap();
        let rx = &report.first_trial.receivers;
        assert_eq!((rx[0].rank_full, rx[0].rank_int, rx[0].desired), (9, 0, 9));
        assert_eq!((rx[1].rank_full, rx[1].rank_int, rx[1].desired), (9, 5, 4));
        assert_eq!((rx[2].rank_full, rx[2].rank_int, rx[2].desired), (9, 5, 4));
    }

    #[test]
    fn achieved_points_divide_symbols_by_slots() {
        let scheme = builtin_scheme("alt-npp-4over9").unwrap();
        let report = simulate(&scheme, 3, 21, Mode::Field).unwrap();
        let point = report.achieved.unwrap();
        assert_eq!(point.get(UserSubset::singleton(1)), rat(1, 1));
        assert_eq!(point.get(UserSubset::singleton(2)), rat(4, 9));
        assert_eq!(point.get(UserSubset::singleton(3)), rat(4, 9));
    }

    #[test]
    fn zero_forced_streams_vanish_at_their_target() {
        let text = r#"
scheme "zf" ; users 2 ; antennas 2 ; slots 1
csit 1: PD
data a -> R1
data b -> R2
slot 1:
  send a
  send b zf R1
"#;
        let scheme = parse_scheme(text).unwrap();
        let exp = expand::<Fp61>(&scheme, 99).unwrap();
        assert_eq!(exp.rows[0][0][1], Fp61::new(0));
        assert_ne!(exp.rows[0][0][0], Fp61::new(0));
        assert_ne!(exp.rows[1][0][1], Fp61::new(0));

        let expf = expand::<num::complex::Complex64>(&scheme, 99).unwrap();
        assert!(expf.rows[0][0][1].norm() < 1e-9);
        assert!(expf.rows[0][0][0].norm() > 1e-3);
    }

    #[test]
    fn oversubscribed_null_space_fails_decode_not_execution() {
        let text = r#"
scheme "crowded" ; users 3 ; antennas 3 ; slots 6
csit 1-6: PDD
data u1, u2, u3, u4, u5, u6 -> R1
data v1, v2, v3 -> R2
data w1, w2 -> R3
slot 1:
  send u1
  send u2
  send u3
  send v1 zf R1
  send v2 zf R1
  send v3 zf R1
slot 2:
  send u4
  send u5
  send u6
  send w1 zf R1
  send w2 zf R1
slot 3:
  send part(R2, 1, {1})
  send obs(R2, 2) zf R1
slot 4:
  send part(R3, 2, {1})
  send obs(R3, 1) zf R1
slot 5:
  send part(R3, 3, {1})
slot 6:
  send part(R2, 4, {1})
"#;
        let scheme = parse_scheme(text).unwrap();
        let report = simulate(&scheme, 10, 5, Mode::Field).unwrap();
        assert_eq!(report.receiver_successes[1], 0);
        assert_eq!(report.full_successes, 0);
        assert!(report.achieved.is_none());
    }

    #[test]
    fn exhausting_every_antenna_direction_is_an_error() {
        let text = r#"
scheme "nulled" ; users 3 ; antennas 2 ; slots 1
csit 1: PPD
data a -> R3
slot 1:
  send a zf R1, R2
"#;
        let scheme = parse_scheme(text).unwrap();
        let err = simulate(&scheme, 1, 3, Mode::Field).unwrap_err();
        assert!(matches!(
            err,
            EngineError::NoNullDirection { slot: 1, stream: 1 }
        ));
    }

    #[test]
    fn missing_observations_are_errors() {
        let text = r#"
scheme "bad" ; users 2 ; antennas 2 ; slots 2
csit 1-2: PD
data a -> R1
slot 1:
  send obs(R2, 1)
"#;
        let scheme = parse_scheme(text).unwrap();
        let err = simulate(&scheme, 1, 3, Mode::Field).unwrap_err();
        assert!(matches!(err, EngineError::BadReference { slot: 1, .. }));
    }

    #[test]
    fn simulation_is_deterministic_in_the_seed() {
        let scheme = builtin_scheme("hybrid-5over3-b").unwrap();
        let a = simulate(&scheme, 4, 42, Mode::Field).unwrap();
        let b = simulate(&scheme, 4, 42, Mode::Field).unwrap();
        assert_eq!(a, b);
        let exp1 = expand::<Fp61>(&scheme, 1234).unwrap();
        let exp2 = expand::<Fp61>(&scheme, 1234).unwrap();
        assert_eq!(exp1, exp2);
        let exp3 = expand::<Fp61>(&scheme, 1235).unwrap();
        assert_ne!(exp1, exp3);
    }

    #[test]
    fn worker_threads_do_not_change_the_counts() {
        let scheme = builtin_scheme("hybrid-5over3-a").unwrap();
        let sequential = simulate(&scheme, 10, 9, Mode::Field).unwrap();
        for threads in [2, 3, 16] {
            let fanned = simulate_with(&scheme, 10, 9, Mode::Field, threads).unwrap();
            assert_eq!(sequential, fanned, "threads {threads}");
        }
    }

    #[test]
    fn field_and_rational_verdicts_agree_on_builtins() {
        for name in BUILTIN_NAMES {
            let scheme = builtin_scheme(name).unwrap();
            for seed in [1u64, 2, 3] {
                let f = simulate(&scheme, 1, seed, Mode::Field).unwrap();
                let q = simulate(&scheme, 1, seed, Mode::Rational).unwrap();
                assert_eq!(
                    f.first_trial.receivers, q.first_trial.receivers,
                    "{name} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn expansion_shape_follows_the_scheme() {
        let scheme = builtin_scheme("hybrid-5over3-a").unwrap();
        let exp = expand::<Fp61>(&scheme, 8).unwrap();
        assert_eq!(exp.rows.len(), 3);
        for rows_r in &exp.rows {
            assert_eq!(rows_r.len(), 6);
            assert!(rows_r.iter().all(|row| row.len() == 10));
        }
        assert_eq!(exp.desired[0].len(), 6);
        assert_eq!(exp.desired[1], vec![6, 7]);
        assert_eq!(exp.desired[2], vec![8, 9]);
        assert_eq!(exp.max_streams, 5);
        assert_eq!(exp.symbols[0], "u1");
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in [Mode::Field, Mode::Rational, Mode::Float] {
            assert_eq!(mode.as_str().parse::<Mode>().unwrap(), mode);
        }
        assert!("exact".parse::<Mode>().is_err());
    }
}
