//! Finite-SNR mutual information and DoF slopes in float mode.
//!
//! Each receiver's observation matrix from the engine, with unit-variance
//! noise and equal power split across a slot's streams, gives the Gaussian
//! rate log2 det(I + rho G G^H) - log2 det(I + rho G_int G_int^H), where
//! G_int keeps only interference columns. The slope of that rate in log2 P
//! between two SNR points recovers the decodable symbol count per slot,
//! turning the asymptotic DoF claim into a finite check.

use num::complex::Complex64;
use thiserror::Error;

use crate::engine::rng::{derive, TAG_TRIAL};
use crate::engine::{decode_check, expand, EngineError};
use crate::schemedsl::Scheme;

#[derive(Debug, Error)]
pub enum RatesError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

/// Transmit power and the per-stream share after the equal split.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SnrPoint {
    pub power: f64,
    pub per_stream: f64,
}

impl SnrPoint {
    /// Splits `power` equally across the busiest slot's stream count.
    pub fn new(power: f64, streams: usize) -> Result<SnrPoint, RatesError> {
        if !power.is_finite() || power <= 0.0 {
            return Err(RatesError::BadParam(format!(
                "power must be positive and finite, got {power}"
            )));
        }
        Ok(SnrPoint {
            power,
            per_stream: power / streams.max(1) as f64,
        })
    }

    pub fn from_db(db: f64, streams: usize) -> Result<SnrPoint, RatesError> {
        if !db.is_finite() {
            return Err(RatesError::BadParam(format!("SNR {db} dB is not finite")));
        }
        SnrPoint::new(10f64.powf(db / 10.0), streams)
    }
}

/// Natural-log determinant of a Hermitian positive-definite matrix via
/// Cholesky factorization.
fn logdet_hermitian(mut a: Vec<Vec<Complex64>>) -> Result<f64, RatesError> {
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= a[i][k] * a[j][k].conj();
            }
            if i == j {
                let d = s.re;
                if !(d > 0.0) || !d.is_finite() {
                    return Err(RatesError::Numeric(format!(
                        "Cholesky pivot {d} is not positive"
                    )));
                }
                a[i][i] = Complex64::new(d.sqrt(), 0.0);
                acc += d.ln();
            } else {
                a[i][j] = s / a[j][j];
            }
        }
    }
    Ok(acc)
}

fn gram_plus_identity(
    rows: &[Vec<Complex64>],
    keep: impl Fn(usize) -> bool,
    rho: f64,
) -> Result<Vec<Vec<Complex64>>, RatesError> {
    let t = rows.len();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); t]; t];
    for (i, ri) in rows.iter().enumerate() {
        for (j, rj) in rows.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for (c, (x, y)) in ri.iter().zip(rj).enumerate() {
                if keep(c) {
                    s += x * y.conj();
                }
            }
            if !s.re.is_finite() || !s.im.is_finite() {
                return Err(RatesError::Numeric(
                    "observation matrix has non-finite entries".into(),
                ));
            }
            a[i][j] = rho * s;
        }
        a[i][i] += Complex64::new(1.0, 0.0);
    }
    Ok(a)
}

/// Gaussian-input mutual information for one receiver, in bits over the
/// scheme's whole slot span. Interference columns stay at full power, so
/// the result grows like (desired count) x log2 P once the rank condition
/// holds.
pub fn mutual_info(
    rows: &[Vec<Complex64>],
    desired: &[usize],
    snr: &SnrPoint,
) -> Result<f64, RatesError> {
    let rho = snr.per_stream;
    let full = logdet_hermitian(gram_plus_identity(rows, |_| true, rho)?)?;
    let interference =
        logdet_hermitian(gram_plus_identity(rows, |c| !desired.contains(&c), rho)?)?;
    Ok((full - interference) / std::f64::consts::LN_2)
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ReceiverRate {
    pub rx: u8,
    /// Bits over all slots at the lower and upper SNR points.
    pub bits: (f64, f64),
    pub slope: f64,
    /// Set when the rank check failed for this receiver, in which case the
    /// slope undershoots the symbol count.
    pub rank_deficient: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct RateReport {
    pub scheme: String,
    pub seed: u64,
    pub snr_db: (f64, f64),
    pub receivers: Vec<ReceiverRate>,
}

/// Estimates each receiver's DoF as the finite difference of its rate in
/// log2 P between two SNR points, normalized per slot.
pub fn dof_slope(scheme: &Scheme, seed: u64, snr_db: (f64, f64)) -> Result<RateReport, RatesError> {
    let (lo, hi) = snr_db;
    if !lo.is_finite() || !hi.is_finite() || lo == hi {
        return Err(RatesError::BadParam(format!(
            "need two distinct finite SNR points, got {lo} and {hi} dB"
        )));
    }
    if lo < 40.0 || hi < 40.0 {
        return Err(RatesError::BadParam(
            "slope estimation needs both SNR points at 40 dB or above".into(),
        ));
    }
    let exp = expand::<Complex64>(scheme, derive(&[seed, TAG_TRIAL, 0]))?;
    let decode = decode_check(&exp);
    let p_lo = SnrPoint::from_db(lo, exp.max_streams)?;
    let p_hi = SnrPoint::from_db(hi, exp.max_streams)?;
    let denom = scheme.slots as f64 * (p_hi.power.log2() - p_lo.power.log2());
    let mut receivers = Vec::with_capacity(exp.rows.len());
    for (idx, rows) in exp.rows.iter().enumerate() {
        let desired = &exp.desired[idx];
        let bits_lo = mutual_info(rows, desired, &p_lo)?;
        let bits_hi = mutual_info(rows, desired, &p_hi)?;
        receivers.push(ReceiverRate {
            rx: idx as u8 + 1,
            bits: (bits_lo, bits_hi),
            slope: (bits_hi - bits_lo) / denom,
            rank_deficient: !decode.receivers[idx].ok,
        });
    }
    Ok(RateReport {
        scheme: scheme.name.clone(),
        seed,
        snr_db,
        receivers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemedsl::{builtin_scheme, parse_scheme};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn scalar_channel_matches_the_closed_form() {
        for p in [1.0, 10.0, 1e4] {
            let snr = SnrPoint::new(p, 1).unwrap();
            let bits = mutual_info(&[vec![c(1.0)]], &[0], &snr).unwrap();
            assert!((bits - (1.0 + p).log2()).abs() < 1e-9, "P={p}");
        }
    }

    #[test]
    fn empty_desired_set_carries_no_information() {
        let rows = vec![vec![c(1.0), c(2.0)], vec![c(0.5), c(-1.0)]];
        let snr = SnrPoint::new(100.0, 2).unwrap();
        let bits = mutual_info(&rows, &[], &snr).unwrap();
        assert!(bits.abs() < 1e-12);
    }

    #[test]
    fn mutual_info_is_monotone_in_power() {
        let scheme = builtin_scheme("hybrid-5over3-a").unwrap();
        let exp = expand::<Complex64>(&scheme, 5).unwrap();
        let mut last = -1.0;
        for db in [0.0, 20.0, 40.0, 60.0, 80.0] {
            let snr = SnrPoint::from_db(db, exp.max_streams).unwrap();
            let bits = mutual_info(&exp.rows[1], &exp.desired[1], &snr).unwrap();
            assert!(bits >= last - 1e-9, "{db} dB: {bits} < {last}");
            last = bits;
        }
    }

    #[test]
    fn conditional_terms_telescope_to_the_joint_information() {
        let scheme = builtin_scheme("hybrid-5over3-a").unwrap();
        let exp = expand::<Complex64>(&scheme, 5).unwrap();
        let snr = SnrPoint::from_db(50.0, exp.max_streams).unwrap();
        let rows = &exp.rows[1];
        let desired = exp.desired[1].clone();
        let joint = mutual_info(rows, &desired, &snr).unwrap();
        let first = mutual_info(rows, &desired[..1], &snr).unwrap();
        let mut stripped = rows.clone();
        for row in &mut stripped {
            row[desired[0]] = c(0.0);
        }
        let second = mutual_info(&stripped, &desired[1..], &snr).unwrap();
        let rel = ((first + second - joint) / joint).abs();
        assert!(rel < 1e-6, "relative telescoping error {rel}");
    }

    #[test]
    fn builtin_slopes_land_on_the_symbol_counts() {
        let cases = [
            ("hybrid-5over3-a", [1.0, 1.0 / 3.0, 1.0 / 3.0]),
            ("hybrid-5over3-b", [1.0, 1.0 / 3.0, 1.0 / 3.0]),
            ("alt-npp-4over9", [1.0, 4.0 / 9.0, 4.0 / 9.0]),
        ];
        for (name, want) in cases {
            let scheme = builtin_scheme(name).unwrap();
            let report = dof_slope(&scheme, 7, (60.0, 100.0)).unwrap();
            for (rc, w) in report.receivers.iter().zip(want) {
                assert!(!rc.rank_deficient, "{name} R{}", rc.rx);
                assert!(
                    (rc.slope - w).abs() < 0.05,
                    "{name} R{}: slope {} vs {w}",
                    rc.rx,
                    rc.slope
                );
            }
            let tight = dof_slope(&scheme, 7, (80.0, 120.0)).unwrap();
            for (rc, w) in tight.receivers.iter().zip(want) {
                assert!(
                    (rc.slope - w).abs() < 0.02,
                    "{name} R{}: tight slope {} vs {w}",
                    rc.rx,
                    rc.slope
                );
            }
        }
    }

    #[test]
    fn silent_scheme_reports_zero_slopes() {
        let text = r#"
scheme "quiet" ; users 2 ; antennas 2 ; slots 2
csit 1-2: PD
data a -> R1
"#;
        let scheme = parse_scheme(text).unwrap();
        let report = dof_slope(&scheme, 3, (60.0, 100.0)).unwrap();
        assert!(report.receivers[0].rank_deficient);
        for rc in &report.receivers {
            assert_eq!(rc.slope, 0.0);
            assert_eq!(rc.bits, (0.0, 0.0));
        }
    }

    #[test]
    fn snr_pairs_are_validated() {
        let scheme = builtin_scheme("hybrid-5over3-a").unwrap();
        assert!(matches!(
            dof_slope(&scheme, 1, (60.0, 60.0)),
            Err(RatesError::BadParam(_))
        ));
        assert!(matches!(
            dof_slope(&scheme, 1, (30.0, 100.0)),
            Err(RatesError::BadParam(_))
        ));
        assert!(matches!(
            SnrPoint::new(-5.0, 1),
            Err(RatesError::BadParam(_))
        ));
    }

    #[test]
    fn non_finite_observations_are_numeric_errors() {
        let rows = vec![vec![Complex64::new(f64::NAN, 0.0)]];
        let snr = SnrPoint::new(10.0, 1).unwrap();
        assert!(matches!(
            mutual_info(&rows, &[0], &snr),
            Err(RatesError::Numeric(_))
        ));
    }
}
