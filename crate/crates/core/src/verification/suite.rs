use std::collections::BTreeMap;

use crate::classifier::CaseLabel;
use crate::error::Result;
use crate::par::{map_range, Execution};

use super::check::{cross_check, CheckReport};
use super::generator::{generate_instance, InstanceGenConfig};

const IMPOSSIBLE_CELLS: [&str; 2] = ["2b", "4d"];

/// Reports for a generated batch plus the per-cell census.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub reports: Vec<CheckReport>,
    /// Hits per cell id, seeded with every feasible label at zero.
    pub census: BTreeMap<String, usize>,
}

impl SuiteOutcome {
    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| !r.passed()).count()
    }

    /// Hits on cells the table rules out.
    pub fn impossible_observed(&self) -> usize {
        self.reports
            .iter()
            .filter_map(|r| r.cell.as_deref())
            .filter(|c| IMPOSSIBLE_CELLS.contains(c))
            .count()
    }

    /// Feasible labels with fewer than `min_hits` hits.
    pub fn sparse_cells(&self, min_hits: usize) -> Vec<(String, usize)> {
        CaseLabel::feasible()
            .iter()
            .map(|l| l.id())
            .map(|id| {
                let n = self.census.get(&id).copied().unwrap_or(0);
                (id, n)
            })
            .filter(|&(_, n)| n < min_hits)
            .collect()
    }

    /// One line per instance: `index cell PASS|FAIL [failed checks]`.
    pub fn summary_lines(&self) -> Vec<String> {
        self.reports
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let cell = r.cell.as_deref().unwrap_or("-");
                if r.passed() {
                    format!("{i} {cell} PASS")
                } else {
                    let mut what: Vec<String> =
                        r.failed_checks().iter().map(|s| s.to_string()).collect();
                    what.extend(r.errors.iter().cloned());
                    format!("{i} {cell} FAIL [{}]", what.join("; "))
                }
            })
            .collect()
    }
}

/// Generates `count` instances from `cfg` and cross-checks each one.
pub fn run_suite(cfg: &InstanceGenConfig, count: usize, exec: Execution) -> Result<SuiteOutcome> {
    let reports = map_range(0..count, exec, |i| {
        let (m, p) = generate_instance(cfg, i as u64);
        cross_check(&m, &p)
    })?;
    let mut census: BTreeMap<String, usize> =
        CaseLabel::feasible().iter().map(|l| (l.id(), 0)).collect();
    for cell in reports.iter().filter_map(|r| r.cell.clone()) {
        *census.entry(cell).or_insert(0) += 1;
    }
    Ok(SuiteOutcome { reports, census })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batch_passes_and_is_deterministic() {
        let cfg = InstanceGenConfig::default();
        let a = run_suite(&cfg, 60, Execution::Sequential).unwrap();
        let b = run_suite(&cfg, 60, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.failures(),
            a.impossible_observed(),
            "{:?}",
            a.summary_lines()
        );
        assert_eq!(a.census.values().sum::<usize>(), 60);
        assert_eq!(a.summary_lines().len(), 60);
    }
}
