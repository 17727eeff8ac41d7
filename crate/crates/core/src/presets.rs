//! Evaluation of the derived size parameters at concrete `(n, d, s, t)`.

use serde::{Deserialize, Serialize};

use crate::cycles::{classify_regime, RegimeParams};
use crate::error::{Error, Result};
use crate::kst::KstParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetEntry {
    pub name: String,
    pub value: f64,
    /// The value exceeds `n` or is below 1.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetInput {
    pub n: usize,
    pub d: f64,
    pub s: usize,
    pub t: usize,
    pub eps1: f64,
    pub eps2: f64,
    /// Coefficient in the first adjuster-size expression.
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetTable {
    pub input: PresetInput,
    pub regime: u8,
    pub entries: Vec<PresetEntry>,
}

impl PresetTable {
    pub fn get(&self, name: &str) -> Option<&PresetEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Evaluates `η`, `m`, both adjuster sizes `D`, the regime thresholds and the
/// predicted even-cycle interval endpoints.
pub fn preset_eval(input: &PresetInput) -> Result<PresetTable> {
    let PresetInput { n, d, s, t, eps1, eps2, c } = *input;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    for (name, v) in [("eps1", eps1), ("eps2", eps2), ("c", c)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    let kp = KstParams::new(s, t, d)?;
    let eta = kp.eta();
    let m = kp.m(n, eps2)?;
    let eta2 = eta * eta;
    let d_expansion = (c * c * m.powi(19) * eta2 / 1e20).max(eps2 * eta2 / 1e20);
    let d_kst = eta2 * m.powi(20) / (1e10 * t as f64);
    let regime = classify_regime(n, d, &RegimeParams::new(s, t, eps1, eps2));
    let nf = n as f64;
    let entry = |name: &str, value: f64| PresetEntry {
        name: name.to_string(),
        value,
        vacuous: !(1.0..=nf).contains(&value),
    };
    Ok(PresetTable {
        input: input.clone(),
        regime: regime.regime,
        entries: vec![
            entry("eta", eta),
            entry("m", m),
            entry("adjuster_size", d_expansion),
            entry("adjuster_size_kst", d_kst),
            entry("dense_threshold", regime.dense_threshold),
            entry("polylog_threshold", regime.polylog_threshold),
            entry("interval_lo", regime.predicted.lo),
            entry("interval_hi", regime.predicted.hi),
        ],
    })
}
