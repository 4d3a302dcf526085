//! Discrete event simulation of an anchor installation fleet.
//!
//! All vessels share one pool of anchors. Each vessel starts loaded at day
//! 0, installs one anchor per day and, once its hold is empty, claims a new
//! load from the pool (if any remain) and spends its reload time in port.
//! Pending events are processed by time and then by vessel declaration
//! order, so every run is deterministic.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesError {
    #[error("the fleet has no vessels")]
    NoVessel,
    #[error("fleet has {found} vessel classes but {expected} specifications")]
    Shape { expected: usize, found: usize },
    #[error("vessel class `{0}` has zero deck capacity")]
    ZeroCapacity(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselSpec {
    pub name: String,
    /// Anchors per load.
    pub capacity: u32,
    /// Days in port per reload.
    pub reload_days: f64,
    /// Euros per day.
    pub day_rate: f64,
    /// Chance the vessel would be better used on another project.
    pub reassignment_probability: f64,
    /// Tonnes of CO2 per day.
    pub emission_rate: f64,
}

impl VesselSpec {
    pub fn new(name: &str, capacity: u32, reload_days: f64, day_rate: f64, p: f64, emissions: f64) -> Self {
        Self {
            name: name.into(),
            capacity,
            reload_days,
            day_rate,
            reassignment_probability: p,
            emission_rate: emissions,
        }
    }

    pub fn small_ocv() -> Self {
        Self::new("small_ocv", 8, 1.5, 47_000.0, 0.7, 30.0)
    }

    pub fn large_ocv() -> Self {
        Self::new("large_ocv", 12, 2.0, 55_000.0, 0.8, 40.0)
    }

    pub fn barge() -> Self {
        Self::new("barge", 16, 2.5, 35_000.0, 0.5, 35.0)
    }

    /// Small OCV, large OCV and barge, in that order.
    pub fn default_fleet() -> Vec<Self> {
        alloc::vec![Self::small_ocv(), Self::large_ocv(), Self::barge()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Install,
    ReloadStart,
    ReloadEnd,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Install => "install",
            Self::ReloadStart => "reload_start",
            Self::ReloadEnd => "reload_end",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesEvent {
    /// Day at which the event completes.
    pub time: f64,
    /// Vessel instance index.
    pub vessel: usize,
    pub kind: EventKind,
    /// Anchors not yet installed after the event.
    pub anchors_remaining: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesResult {
    /// Class index of each vessel instance.
    pub classes: Vec<usize>,
    /// Busy time of each instance in days.
    pub busy: Vec<f64>,
    /// Project duration: the largest busy time.
    pub duration: f64,
    pub installed: u32,
    pub log: Vec<DesEvent>,
}

impl DesResult {
    /// Busy time per vessel class, taken as the longest-serving instance.
    pub fn class_times(&self, classes: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0f64; classes];
        for (&c, &t) in self.classes.iter().zip(&self.busy) {
            out[c] = out[c].max(t);
        }
        out
    }

    /// Label such as `barge#2` for a vessel instance.
    pub fn vessel_label(&self, specs: &[VesselSpec], vessel: usize) -> String {
        let class = self.classes[vessel];
        let nth = self.classes[..=vessel].iter().filter(|&&c| c == class).count();
        alloc::format!("{}#{}", specs[class].name, nth)
    }
}

struct Vessel {
    class: usize,
    hold: u32,
    pending: Option<(f64, EventKind)>,
    busy: f64,
}

/// Simulates `counts[i]` instances of `specs[i]` installing `anchors`.
pub fn run_des(counts: &[u32], specs: &[VesselSpec], anchors: u32) -> Result<DesResult, DesError> {
    if counts.len() != specs.len() {
        return Err(DesError::Shape { expected: specs.len(), found: counts.len() });
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(DesError::NoVessel);
    }
    if let Some(s) = specs.iter().zip(counts).find(|(s, &c)| c > 0 && s.capacity == 0) {
        return Err(DesError::ZeroCapacity(s.0.name.clone()));
    }

    let mut unassigned = anchors;
    let mut installed = 0u32;
    let mut log = Vec::new();
    let mut fleet: Vec<Vessel> = Vec::new();
    for (class, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            let hold = specs[class].capacity.min(unassigned);
            unassigned -= hold;
            let pending = (hold > 0).then_some((1.0, EventKind::Install));
            fleet.push(Vessel { class, hold, pending, busy: 0.0 });
        }
    }

    loop {
        // Earliest pending event; ties go to the first declared vessel.
        let next = fleet
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.pending.map(|(t, _)| (t, i)))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((time, i)) = next else { break };
        let v = &mut fleet[i];
        let (_, kind) = v.pending.take().expect("selected vessel has an event");
        match kind {
            EventKind::Install => {
                v.hold -= 1;
                installed += 1;
                v.busy = time;
                v.pending = if v.hold > 0 {
                    Some((time + 1.0, EventKind::Install))
                } else if unassigned > 0 {
                    Some((time, EventKind::ReloadStart))
                } else {
                    None
                };
            }
            EventKind::ReloadStart => {
                let claim = specs[v.class].capacity.min(unassigned);
                if claim == 0 {
                    continue;
                }
                unassigned -= claim;
                v.hold = claim;
                v.pending = Some((time + specs[v.class].reload_days, EventKind::ReloadEnd));
            }
            EventKind::ReloadEnd => {
                v.busy = time;
                v.pending = Some((time + 1.0, EventKind::Install));
            }
        }
        log.push(DesEvent { time, vessel: i, kind, anchors_remaining: anchors - installed });
    }

    let busy: Vec<f64> = fleet.iter().map(|v| v.busy).collect();
    let duration = busy.iter().copied().fold(0.0, f64::max);
    Ok(DesResult {
        classes: fleet.iter().map(|v| v.class).collect(),
        busy,
        duration,
        installed,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANCHORS: u32 = 108;

    fn des(counts: [u32; 3]) -> DesResult {
        run_des(&counts, &VesselSpec::default_fleet(), ANCHORS).unwrap()
    }

    fn fleets() -> impl Iterator<Item = [u32; 3]> {
        (0..=3u32)
            .flat_map(|a| (0..=2u32).flat_map(move |b| (0..=2u32).map(move |c| [a, b, c])))
            .filter(|f| f.iter().sum::<u32>() > 0)
    }

    #[test]
    fn single_barge_trace() {
        let r = des([0, 0, 1]);
        assert_eq!(r.duration, 123.0);
        let reloads = r.log.iter().filter(|e| e.kind == EventKind::ReloadStart).count();
        assert_eq!(reloads, 6);
    }

    #[test]
    fn single_small_ocv_trace() {
        let r = des([1, 0, 0]);
        assert_eq!(r.duration, 127.5);
        let reloads = r.log.iter().filter(|e| e.kind == EventKind::ReloadStart).count();
        assert_eq!(reloads, 13);
    }

    #[test]
    fn empty_fleet_fails() {
        assert_eq!(
            run_des(&[0, 0, 0], &VesselSpec::default_fleet(), ANCHORS),
            Err(DesError::NoVessel)
        );
    }

    #[test]
    fn conserves_anchors_with_ordered_log() {
        let mut n = 0;
        for f in fleets() {
            n += 1;
            let r = des(f);
            assert_eq!(r.installed, ANCHORS, "{f:?}");
            let installs = r.log.iter().filter(|e| e.kind == EventKind::Install).count();
            assert_eq!(installs as u32, ANCHORS);
            assert!(r.log.windows(2).all(|w| w[0].time <= w[1].time));
            assert_eq!(r.log.last().unwrap().anchors_remaining, 0);
            assert!(r.busy.iter().all(|t| (0.0..=r.duration).contains(t)));
        }
        assert_eq!(n, 35);
    }

    #[test]
    fn adding_a_vessel_never_slows_the_project() {
        let caps = [3u32, 2, 2];
        for f in fleets() {
            for k in 0..3 {
                if f[k] < caps[k] {
                    let mut g = f;
                    g[k] += 1;
                    assert!(des(g).duration <= des(f).duration, "{f:?} -> {g:?}");
                }
            }
        }
    }

    #[test]
    fn class_times_take_the_longest_instance() {
        let r = des([1, 0, 2]);
        let t = r.class_times(3);
        assert_eq!(t[1], 0.0);
        let barges: Vec<f64> = r.classes.iter().zip(&r.busy).filter(|(c, _)| **c == 2).map(|(_, t)| *t).collect();
        assert_eq!(t[2], barges.iter().copied().fold(0.0, f64::max));
        assert_eq!(r.vessel_label(&VesselSpec::default_fleet(), 2), "barge#2");
    }

    #[test]
    fn no_anchors_means_no_work() {
        let r = run_des(&[1, 0, 0], &VesselSpec::default_fleet(), 0).unwrap();
        assert_eq!(r.duration, 0.0);
        assert!(r.log.is_empty());
    }
}
