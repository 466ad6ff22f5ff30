//! Aggregated run reports and their two renderings: a human-readable text
//! document (with timing) and a machine format of one JSON record per
//! verification report, byte-identical across reruns with the same
//! configuration and seed.

use std::time::Duration;

use shadowlab_core::{Status, VerificationReport};

#[derive(Clone, Debug)]
pub struct RunReport {
    pub reports: Vec<VerificationReport>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(reports: Vec<VerificationReport>, elapsed: Duration) -> Self {
        RunReport { reports, elapsed }
    }

    /// Overall pass iff every sub-report passes.
    pub fn overall(&self) -> Status {
        if self.reports.iter().all(|r| r.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        self.overall() == Status::Pass
    }

    /// One JSON record per report. Timing is deliberately excluded so the
    /// output is reproducible byte for byte.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for report in &self.reports {
            out.push_str(&report.machine_line());
            out.push('\n');
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for report in &self.reports {
            out.push_str(&report.text_block());
        }
        out.push_str(&format!(
            "overall: {} ({} reports, {} ms)\n",
            self.overall(),
            self.reports.len(),
            self.elapsed.as_millis()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_requires_every_report_to_pass() {
        let pass = VerificationReport::new("a", "claim").passed();
        let fail = VerificationReport::new("b", "claim").failed();
        let run = RunReport::new(vec![pass.clone()], Duration::ZERO);
        assert!(run.is_pass());
        let run = RunReport::new(vec![pass, fail], Duration::ZERO);
        assert!(!run.is_pass());
    }

    #[test]
    fn machine_rendering_skips_timing() {
        let run = RunReport::new(
            vec![VerificationReport::new("a", "claim").passed()],
            Duration::from_millis(123),
        );
        let machine = run.render_machine();
        assert!(!machine.contains("123"));
        assert_eq!(machine.lines().count(), 1);
        assert!(run.render_text().contains("123 ms"));
    }
}
