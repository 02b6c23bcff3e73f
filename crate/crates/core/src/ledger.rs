//! Byte-accurate accounting of robot/server transfers.
//!
//! Sizes are integers in bytes; one MB is 10⁶ bytes everywhere.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MB: u64 = 1_000_000;

/// Who a transfer involved: one robot, or every robot at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Peer {
    Agent(usize),
    Broadcast,
}

impl std::fmt::Display for Peer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Peer::Agent(i) => write!(f, "{i}"),
            Peer::Broadcast => f.write_str("broadcast"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransferKind {
    ModelUp,
    ModelDown,
    BufferUp,
    BufferDown,
    CombinedUpdate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommEvent {
    pub episode: usize,
    pub agent: Peer,
    pub kind: TransferKind,
    pub bytes: u64,
}

/// Total allowance and per-transfer payload sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommBudget {
    pub total_budget: u64,
    pub model_oneway: u64,
    pub buffer_oneway: u64,
    pub snddpg_per_update: u64,
}

impl Default for CommBudget {
    fn default() -> Self {
        Self {
            total_budget: 132 * MB,
            model_oneway: 550_000,
            buffer_oneway: 2_400_000,
            snddpg_per_update: 2_950_000,
        }
    }
}

impl CommBudget {
    pub fn model_cycle(&self) -> u64 {
        2 * self.model_oneway
    }

    pub fn buffer_cycle(&self) -> u64 {
        2 * self.buffer_oneway
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("total_budget", self.total_budget),
            ("model_oneway", self.model_oneway),
            ("buffer_oneway", self.buffer_oneway),
            ("snddpg_per_update", self.snddpg_per_update),
        ] {
            if v == 0 {
                return Err(Error::param(name, "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub total_bytes: u64,
    pub events: usize,
    pub budget_bytes: Option<u64>,
    pub headroom_bytes: Option<u64>,
}

/// Append-only transfer log with a running total.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CommLedger {
    events: Vec<CommEvent>,
    total: u64,
    budget: Option<u64>,
}

impl CommLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget: Some(budget),
            ..Self::default()
        }
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn record_event(&mut self, event: CommEvent) {
        self.total += event.bytes;
        self.events.push(event);
    }

    /// Records a group of transfers that make up one synchronization, or
    /// none of them if the group would overrun the budget.
    pub fn try_record_cycle(&mut self, events: &[CommEvent]) -> Result<()> {
        if let Some(budget) = self.budget {
            let mut total = self.total;
            for e in events {
                total += e.bytes;
                if total > budget {
                    return Err(Error::BudgetExceeded {
                        event: *e,
                        total,
                        budget,
                    });
                }
            }
        }
        for e in events {
            self.record_event(*e);
        }
        Ok(())
    }

    pub fn events(&self) -> &[CommEvent] {
        &self.events
    }

    pub fn total_volume(&self) -> u64 {
        self.total
    }

    /// Distinct episodes in which any transfer happened, in order.
    pub fn sync_episodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for e in &self.events {
            if out.last() != Some(&e.episode) {
                out.push(e.episode);
            }
        }
        out
    }

    pub fn summary(&self) -> LedgerSummary {
        LedgerSummary {
            total_bytes: self.total,
            events: self.events.len(),
            budget_bytes: self.budget,
            headroom_bytes: self.budget.map(|b| b.saturating_sub(self.total)),
        }
    }

    /// `episode,agent,kind,bytes`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["episode", "agent", "kind", "bytes"])?;
        for e in &self.events {
            w.write_record([
                e.episode.to_string(),
                e.agent.to_string(),
                format!("{:?}", e.kind),
                e.bytes.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Smallest period `p ≥ 1` with `⌊episodes / p⌋ · per_event ≤ budget`.
pub fn max_period_within_budget(budget: u64, per_event: u64, episodes: usize) -> Result<usize> {
    if budget == 0 || per_event == 0 || episodes == 0 {
        return Err(Error::param(
            "budget",
            "budget, per-event size and episode count must all be positive",
        ));
    }
    (1..=episodes)
        .find(|&p| (episodes / p) as u64 * per_event <= budget)
        .ok_or(Error::InfeasibleBudget {
            budget,
            per_event,
            episodes,
        })
}

/// Renders bytes as decimal MB with one digit after the point, rounding half up.
pub fn format_mb(bytes: u64) -> String {
    let tenths = (bytes + 50_000) / 100_000;
    format!("{}.{}", tenths / 10, tenths % 10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(episode: usize, bytes: u64) -> CommEvent {
        CommEvent {
            episode,
            agent: Peer::Broadcast,
            kind: TransferKind::CombinedUpdate,
            bytes,
        }
    }

    #[test]
    fn totals() {
        let mut l = CommLedger::new();
        assert_eq!(l.total_volume(), 0);
        l.record_event(ev(1, 1_100_000));
        assert_eq!(l.total_volume(), 1_100_000);
        assert_eq!(l.events()[0], ev(1, 1_100_000));
        for e in 2..=120 {
            l.record_event(ev(e, 1_100_000));
        }
        assert_eq!(l.total_volume(), 132 * MB);
        assert_eq!(format_mb(l.total_volume()), "132.0");
        assert_eq!(format_mb(115_200_000), "115.2");
        assert_eq!(format_mb(0), "0.0");
    }

    #[test]
    fn cycle_is_atomic_under_budget() {
        let mut l = CommLedger::with_budget(1_000);
        l.try_record_cycle(&[ev(1, 400), ev(1, 400)]).unwrap();
        let err = l.try_record_cycle(&[ev(2, 100), ev(2, 150)]).unwrap_err();
        match err {
            Error::BudgetExceeded { event, total, budget } => {
                assert_eq!(event.bytes, 150);
                assert_eq!((total, budget), (1_050, 1_000));
            }
            other => panic!("{other}"),
        }
        assert_eq!(l.total_volume(), 800);
        assert_eq!(l.events().len(), 2);
        assert_eq!(l.summary().headroom_bytes, Some(200));
    }

    #[test]
    fn period_derivation() {
        assert_eq!(max_period_within_budget(132 * MB, 4_800_000, 120).unwrap(), 5);
        assert_eq!(max_period_within_budget(132 * MB, 2_950_000, 120).unwrap(), 3);
        assert_eq!(max_period_within_budget(132 * MB, 1_100_000, 120).unwrap(), 1);
        assert!(matches!(
            max_period_within_budget(1, 2, 10),
            Err(Error::InfeasibleBudget { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let mut l = CommLedger::new();
        l.record_event(CommEvent {
            episode: 3,
            agent: Peer::Agent(1),
            kind: TransferKind::BufferUp,
            bytes: 42,
        });
        let mut out = Vec::new();
        l.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "episode,agent,kind,bytes\n3,1,BufferUp,42\n");
    }

    proptest! {
        #[test]
        fn derived_period_is_tight(budget in 1u64..10_000, per_event in 1u64..500, episodes in 1usize..200) {
            match max_period_within_budget(budget, per_event, episodes) {
                Ok(p) => {
                    prop_assert!((episodes / p) as u64 * per_event <= budget);
                    if p > 1 {
                        prop_assert!((episodes / (p - 1)) as u64 * per_event > budget);
                    }
                }
                Err(_) => prop_assert!(per_event > budget),
            }
        }

        #[test]
        fn total_is_monotone(sizes in prop::collection::vec(1u64..1_000_000, 0..50)) {
            let mut l = CommLedger::new();
            let mut last = 0;
            for (i, s) in sizes.iter().enumerate() {
                l.record_event(ev(i, *s));
                prop_assert!(l.total_volume() >= last);
                last = l.total_volume();
            }
            prop_assert_eq!(last, sizes.iter().sum::<u64>());
        }
    }
}
