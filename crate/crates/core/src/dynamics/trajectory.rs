use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Configuration, GameParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    AllOnes,
    AllZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Absorption {
    pub boundary: Boundary,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub p1: f64,
    /// `W_1..W_L` as requested by the sampling schedule.
    pub w: Vec<f64>,
    /// `log D^w_t`, present only for weighted voter runs.
    pub log_weight: Option<f64>,
}

/// Output of one simulation replica.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub sample_times: Vec<f64>,
    pub samples: Vec<Sample>,
    pub absorption: Option<Absorption>,
    pub final_config: Configuration,
    /// Time at which the simulation stopped.
    pub end_time: f64,
    /// `log D^w` at `end_time` for weighted runs.
    pub log_weight: Option<f64>,
    /// Number of clock rings processed.
    pub events: u64,
}

impl TrajectoryRecord {
    pub fn fixed_at_ones(&self) -> bool {
        matches!(
            self.absorption,
            Some(Absorption {
                boundary: Boundary::AllOnes,
                ..
            })
        )
    }

    pub fn absorption_time(&self) -> Option<f64> {
        self.absorption.map(|a| a.time)
    }

    /// Final likelihood ratio `D^w`, or 1 for unweighted runs.
    pub fn weight(&self) -> f64 {
        self.log_weight.map_or(1.0, f64::exp)
    }

    /// The sampled density path `(t_i, p1_i)`, read as a step function on
    /// `[t_0, end)` where `end` is the absorption time if any, else
    /// `end_time`.
    pub fn density_path(&self) -> (Vec<f64>, Vec<f64>, f64) {
        let end = self.absorption_time().unwrap_or(self.end_time);
        let mut times = Vec::with_capacity(self.sample_times.len());
        let mut values = Vec::with_capacity(self.sample_times.len());
        for (t, s) in self.sample_times.iter().zip(&self.samples) {
            if *t <= end {
                times.push(*t);
                values.push(s.p1);
            }
        }
        (times, values, end)
    }

    /// CSV with columns `time,p1,W1..WL,log_weight`, preceded by one JSON
    /// line describing the run.
    pub fn to_csv(&self, header: &TrajectoryHeader) -> String {
        let max_ell = self.samples.first().map_or(0, |s| s.w.len());
        let mut out = serde_json::to_string(header).expect("header serializes");
        out.push('\n');
        out.push_str("time,p1");
        for ell in 1..=max_ell {
            write!(out, ",W{ell}").unwrap();
        }
        out.push_str(",log_weight\n");
        for (t, s) in self.sample_times.iter().zip(&self.samples) {
            write!(out, "{t},{}", s.p1).unwrap();
            for v in &s.w {
                write!(out, ",{v}").unwrap();
            }
            match s.log_weight {
                Some(lw) => writeln!(out, ",{lw}").unwrap(),
                None => out.push_str(",0\n"),
            }
        }
        out
    }
}

/// Run description written as the first line of a trajectory CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryHeader {
    pub simulator: String,
    pub sites: usize,
    pub params: GameParams,
    pub seed: u64,
    pub replica: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::PayoffMatrix;

    #[test]
    fn csv_layout() {
        let rec = TrajectoryRecord {
            sample_times: vec![0.0, 0.5],
            samples: vec![
                Sample {
                    p1: 0.25,
                    w: vec![0.1, 0.2],
                    log_weight: Some(0.0),
                },
                Sample {
                    p1: 0.5,
                    w: vec![0.3, 0.4],
                    log_weight: Some(-0.125),
                },
            ],
            absorption: None,
            final_config: Configuration::zeros(4),
            end_time: 0.5,
            log_weight: Some(-0.125),
            events: 3,
        };
        let header = TrajectoryHeader {
            simulator: "voter-weighted".into(),
            sites: 4,
            params: GameParams::new(PayoffMatrix::donation(2.0, 1.0), 0.05, 0.0, 0.0).unwrap(),
            seed: 9,
            replica: 0,
        };
        let csv = rec.to_csv(&header);
        let lines: Vec<&str> = csv.lines().collect();
        let parsed: TrajectoryHeader = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(parsed.seed, 9);
        assert_eq!(lines[1], "time,p1,W1,W2,log_weight");
        assert_eq!(lines[3], "0.5,0.5,0.3,0.4,-0.125");
    }
}
