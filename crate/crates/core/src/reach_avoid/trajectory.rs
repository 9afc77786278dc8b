use serde::{Deserialize, Serialize};

/// State and applied control at one instant. `control` acts from `t` until
/// the next sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: Vec<f64>,
    pub control: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Strictly increasing in `t`.
    pub samples: Vec<TrajectorySample>,
    pub departure_time: f64,
    /// First sample time at which the state was inside the target.
    pub arrival_time: Option<f64>,
}

impl Trajectory {
    pub fn initial_state(&self) -> &[f64] {
        &self.samples[0].state
    }

    pub fn final_state(&self) -> &[f64] {
        &self.samples[self.samples.len() - 1].state
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    /// Leading `k` state coordinates at time `t`, linearly interpolated
    /// between samples. Before departure the vehicle sits at its first
    /// sample; after the last sample it stays at the final one.
    pub fn position_at(&self, t: f64, k: usize) -> Vec<f64> {
        let s = &self.samples;
        if t <= s[0].t {
            return s[0].state[..k].to_vec();
        }
        let last = &s[s.len() - 1];
        if t >= last.t {
            return last.state[..k].to_vec();
        }
        let i = s.partition_point(|x| x.t <= t);
        let (a, b) = (&s[i - 1], &s[i]);
        let w = (t - a.t) / (b.t - a.t);
        (0..k).map(|d| a.state[d] + w * (b.state[d] - a.state[d])).collect()
    }
}
