use std::collections::BTreeMap;

/// Outcome of one audit: inequalities are recorded as margins that should be ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    /// Textual findings, e.g. a classification.
    pub labels: BTreeMap<String, String>,
    pub samples: usize,
    pub worst_margin: f64,
    /// Tolerated negative margin.
    pub slack: f64,
    pub passed: bool,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl AuditReport {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        AuditReport {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            labels: BTreeMap::new(),
            samples: 0,
            worst_margin: f64::INFINITY,
            slack: 0.0,
            passed: true,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn label(&mut self, key: &str, value: impl Into<String>) {
        self.labels.insert(key.to_string(), value.into());
    }

    /// Counts one sample and folds its margin into the worst one.
    pub fn record(&mut self, margin: f64) {
        self.samples += 1;
        if !(margin >= self.worst_margin) {
            self.worst_margin = margin;
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Sets `passed` from the margins; an audit that saw no samples fails.
    pub fn finish(mut self) -> Self {
        self.passed = self.samples > 0 && self.worst_margin >= -self.slack;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        let mut r = AuditReport::new("t", &["a"]).with_slack(1e-9);
        assert!(!r.clone().finish().passed);
        r.record(0.5);
        r.record(-1e-10);
        let r = r.finish();
        assert_eq!(r.samples, 2);
        assert_eq!(r.worst_margin, -1e-10);
        assert!(r.passed);
        let mut s = AuditReport::new("t", &[]);
        s.record(f64::NAN);
        assert!(!s.finish().passed);
    }
}
