//! Per-stroke energy bookkeeping shared by the closed-form and simulated routes.

use std::fmt;

use serde::Serialize;

/// Work, heat or measurement-induced (quantum) heat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Work,
    Heat,
    QuantumHeat,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::Work => "work",
            EntryKind::Heat => "heat",
            EntryKind::QuantumHeat => "quantum-heat",
        }
    }
}

/// Who the cooling medium exchanges the energy with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Counterpart {
    ExternalAgent,
    HotReservoir,
    ColdReservoir,
    MeasurementApparatus,
}

impl Counterpart {
    pub fn name(self) -> &'static str {
        match self {
            Counterpart::ExternalAgent => "external-agent",
            Counterpart::HotReservoir => "hot-reservoir",
            Counterpart::ColdReservoir => "cold-reservoir",
            Counterpart::MeasurementApparatus => "measurement-apparatus",
        }
    }
}

/// Energy change of the medium during one stroke (positive = into the medium).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub stroke: u8,
    pub label: String,
    pub kind: EntryKind,
    pub counterpart: Counterpart,
    pub value: f64,
}

impl LedgerEntry {
    pub fn new(
        stroke: u8,
        label: impl Into<String>,
        kind: EntryKind,
        counterpart: Counterpart,
        value: f64,
    ) -> Self {
        Self {
            stroke,
            label: label.into(),
            kind,
            counterpart,
            value,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StrokeLedger {
    pub entries: Vec<LedgerEntry>,
}

/// CSV header of the ledger export.
pub const LEDGER_HEADER: &str = "stroke,label,kind,counterpart,value";

impl StrokeLedger {
    pub fn new(entries: Vec<LedgerEntry>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.iter()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.value)
    }

    /// Net energy change over the cycle; zero for a closed cycle.
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.value).sum()
    }

    pub fn sum_where(&self, pred: impl Fn(&LedgerEntry) -> bool) -> f64 {
        self.entries
            .iter()
            .filter(|e| pred(e))
            .map(|e| e.value)
            .sum()
    }

    /// `stroke,label,kind,counterpart,value` lines with a header, LF-terminated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(LEDGER_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.stroke,
                e.label,
                e.kind.name(),
                e.counterpart.name(),
                sig17(e.value)
            ));
        }
        out
    }
}

impl fmt::Display for StrokeLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

/// Locale-independent scientific notation with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for x in [0.0, -0.075_858_180_021_243_56, 1.0 / 3.0, 1e-300, 12345.678] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{s}");
        }
        assert_eq!(sig17(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let l = StrokeLedger::new(vec![
            LedgerEntry::new(1, "W1", EntryKind::Work, Counterpart::ExternalAgent, -1.5),
            LedgerEntry::new(2, "Q_h", EntryKind::Heat, Counterpart::HotReservoir, 1.5),
        ]);
        assert_eq!(
            l.to_csv(),
            "stroke,label,kind,counterpart,value\n\
             1,W1,work,external-agent,-1.5000000000000000e0\n\
             2,Q_h,heat,hot-reservoir,1.5000000000000000e0\n"
        );
        assert_eq!(l.total(), 0.0);
        assert_eq!(l.get("Q_h"), Some(1.5));
        assert_eq!(l.get("nope"), None);
    }
}
