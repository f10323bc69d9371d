//! Installation loop: recency-weighted selection of feed items under a cap
//! on simultaneously displayed posters, plus the pipeline, bench, simulation
//! and HTTP front ends built on it.

pub mod bench;
pub mod corpus;
pub mod pipeline;
pub mod serve;
pub mod simulate;

use std::collections::HashMap;

use chrono::{DateTime, Duration, Utc};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::Tweet;
use crate::styling::roulette_select;

pub const MAX_ACTIVE: usize = 5;
pub const QUERY_LIMIT: usize = 20;
pub const MIN_LIFESPAN_SECS: f64 = 60.0;
pub const MAX_LIFESPAN_SECS: f64 = 180.0;
pub const DEFAULT_HALF_LIFE_SECS: f64 = 3600.0;
pub const DEFAULT_TICK_HZ: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StoreError {
    #[error("feed store unavailable: {0}")]
    Unavailable(String),
}

/// Read-only access to stored feed items.
pub trait FeedStore: Send + Sync {
    /// Up to `limit` items created at or before `now`, newest first,
    /// skipping ids for which `exclude` returns true.
    fn newest(&self, now: DateTime<Utc>, limit: usize, exclude: &dyn Fn(&str) -> bool) -> Result<Vec<Tweet>, StoreError>;

    fn get(&self, id: &str) -> Result<Option<Tweet>, StoreError>;
}

#[derive(Debug, Clone, Default)]
pub struct MemoryStore {
    /// Newest first.
    items: Vec<Tweet>,
}

impl MemoryStore {
    pub fn new(mut items: Vec<Tweet>) -> Self {
        items.sort_by(|a, b| b.created_at.cmp(&a.created_at).then_with(|| a.id.cmp(&b.id)));
        Self { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Tweet] {
        &self.items
    }
}

impl FeedStore for MemoryStore {
    fn newest(&self, now: DateTime<Utc>, limit: usize, exclude: &dyn Fn(&str) -> bool) -> Result<Vec<Tweet>, StoreError> {
        Ok(self
            .items
            .iter()
            .filter(|t| t.created_at <= now && !exclude(&t.id))
            .take(limit)
            .cloned()
            .collect())
    }

    fn get(&self, id: &str) -> Result<Option<Tweet>, StoreError> {
        Ok(self.items.iter().find(|t| t.id == id).cloned())
    }
}

/// `2^(-age / half_life)` for each item; ages in seconds.
pub fn recency_weights(created: &[DateTime<Utc>], now: DateTime<Utc>, half_life_secs: f64) -> Vec<f64> {
    created
        .iter()
        .map(|t| {
            let age = (now - *t).num_milliseconds().max(0) as f64 / 1000.0;
            (-age / half_life_secs).exp2()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemState {
    Stored,
    Selected,
    Expired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub id: String,
    pub selected_at: DateTime<Utc>,
    pub lifespan_secs: f64,
}

impl Selection {
    pub fn expires_at(&self) -> DateTime<Utc> {
        self.selected_at + Duration::microseconds((self.lifespan_secs * 1e6).round() as i64)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TickOutcome {
    pub expired: Vec<String>,
    pub selected: Option<Selection>,
    /// The cap was met when the tick started.
    pub paused: bool,
}

/// Loop-owned selection state. Item states live here; the store is never
/// written.
#[derive(Debug, Clone)]
pub struct SelectionState {
    pub clock: DateTime<Utc>,
    pub tick_secs: f64,
    pub half_life_secs: f64,
    pub active: Vec<Selection>,
    states: HashMap<String, ItemState>,
    rng: ChaCha8Rng,
}

impl SelectionState {
    pub fn new(clock: DateTime<Utc>, tick_hz: f64, rng: ChaCha8Rng) -> Self {
        Self {
            clock,
            tick_secs: 1.0 / tick_hz,
            half_life_secs: DEFAULT_HALF_LIFE_SECS,
            active: Vec::new(),
            states: HashMap::new(),
            rng,
        }
    }

    pub fn with_half_life(mut self, secs: f64) -> Self {
        self.half_life_secs = secs;
        self
    }

    pub fn state_of(&self, id: &str) -> ItemState {
        self.states.get(id).copied().unwrap_or(ItemState::Stored)
    }

    /// One loop iteration at the current clock, which then advances by one
    /// tick. A cap met at the start of the tick pauses selection even if an
    /// item expires during it.
    pub fn tick(&mut self, store: &dyn FeedStore) -> Result<TickOutcome, StoreError> {
        let now = self.clock;
        let mut outcome = TickOutcome { paused: self.active.len() >= MAX_ACTIVE, ..Default::default() };

        let (gone, kept): (Vec<Selection>, Vec<Selection>) =
            std::mem::take(&mut self.active).into_iter().partition(|s| now > s.expires_at());
        self.active = kept;
        for s in gone {
            self.states.insert(s.id.clone(), ItemState::Expired);
            outcome.expired.push(s.id);
        }

        if !outcome.paused && self.active.len() < MAX_ACTIVE {
            let states = &self.states;
            let candidates = store.newest(now, QUERY_LIMIT, &|id| states.contains_key(id))?;
            if !candidates.is_empty() {
                let created: Vec<_> = candidates.iter().map(|t| t.created_at).collect();
                let weights = recency_weights(&created, now, self.half_life_secs);
                let pick = roulette_select(&weights, &mut self.rng).unwrap_or(0);
                let lifespan_secs = self.rng.random_range(MIN_LIFESPAN_SECS..=MAX_LIFESPAN_SECS);
                let selection = Selection { id: candidates[pick].id.clone(), selected_at: now, lifespan_secs };
                self.states.insert(selection.id.clone(), ItemState::Selected);
                self.active.push(selection.clone());
                outcome.selected = Some(selection);
            }
        }

        self.clock = now + Duration::microseconds((self.tick_secs * 1e6).round() as i64);
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn t0() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2021, 5, 1, 12, 0, 0).unwrap()
    }

    fn tweet(id: usize, minutes_ago: i64) -> Tweet {
        Tweet {
            id: format!("t{id}"),
            text: "hello".into(),
            created_at: t0() - Duration::minutes(minutes_ago),
            lang: None,
            meta: Default::default(),
        }
    }

    fn store(n: usize) -> MemoryStore {
        MemoryStore::new((0..n).map(|i| tweet(i, i as i64)).collect())
    }

    #[test]
    fn weights_halve_per_half_life() {
        let created = [t0(), t0() - Duration::minutes(60), t0() - Duration::minutes(120)];
        let w = recency_weights(&created, t0(), 3600.0);
        assert_eq!(w, vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn empty_store_leaves_state_unchanged() {
        let mut s = SelectionState::new(t0(), 10.0, ChaCha8Rng::seed_from_u64(0));
        let out = s.tick(&MemoryStore::default()).unwrap();
        assert_eq!(out, TickOutcome::default());
        assert!(s.active.is_empty());
    }

    #[test]
    fn full_cap_pauses_selection() {
        let st = store(30);
        let mut s = SelectionState::new(t0(), 10.0, ChaCha8Rng::seed_from_u64(1));
        for _ in 0..MAX_ACTIVE {
            assert!(s.tick(&st).unwrap().selected.is_some());
        }
        let out = s.tick(&st).unwrap();
        assert!(out.paused);
        assert!(out.selected.is_none());
        assert_eq!(s.active.len(), MAX_ACTIVE);
    }

    #[test]
    fn expiry_frees_a_slot_on_the_next_tick() {
        let st = store(30);
        let mut s = SelectionState::new(t0(), 10.0, ChaCha8Rng::seed_from_u64(2));
        while s.active.len() < MAX_ACTIVE {
            s.tick(&st).unwrap();
        }
        let first_expiry = s.active.iter().map(Selection::expires_at).min().unwrap();
        loop {
            let at = s.clock;
            let out = s.tick(&st).unwrap();
            if !out.expired.is_empty() {
                assert!(at > first_expiry);
                assert!(out.paused && out.selected.is_none());
                break;
            }
        }
        assert!(s.tick(&st).unwrap().selected.is_some());
    }

    #[test]
    fn future_items_are_invisible() {
        let st = MemoryStore::new(vec![tweet(0, -5)]);
        let mut s = SelectionState::new(t0(), 10.0, ChaCha8Rng::seed_from_u64(0));
        assert!(s.tick(&st).unwrap().selected.is_none());
    }

    #[test]
    fn states_move_forward_only() {
        let st = store(8);
        let mut s = SelectionState::new(t0(), 10.0, ChaCha8Rng::seed_from_u64(3));
        let mut seen: HashMap<String, ItemState> = HashMap::new();
        for _ in 0..5000 {
            s.tick(&st).unwrap();
            for t in st.items() {
                let now = s.state_of(&t.id);
                let before = seen.insert(t.id.clone(), now).unwrap_or(ItemState::Stored);
                let rank = |x: ItemState| x as u8;
                assert!(rank(now) >= rank(before), "{before:?} -> {now:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn cap_and_lifespans_hold(seed in any::<u64>(), n in 0usize..60, ticks in 100usize..3000) {
            let st = store(n);
            let mut s = SelectionState::new(t0(), 10.0, ChaCha8Rng::seed_from_u64(seed));
            for _ in 0..ticks {
                let start_full = s.active.len() >= MAX_ACTIVE;
                let at = s.clock;
                let out = s.tick(&st).unwrap();
                prop_assert!(s.active.len() <= MAX_ACTIVE);
                prop_assert!(!(start_full && out.selected.is_some()));
                if let Some(sel) = out.selected {
                    prop_assert!((MIN_LIFESPAN_SECS..=MAX_LIFESPAN_SECS).contains(&sel.lifespan_secs));
                }
                for a in &s.active {
                    prop_assert!(at <= a.expires_at());
                }
            }
        }

        #[test]
        fn weights_decrease_with_age(mut ages in prop::collection::vec(0i64..100_000, 2..20)) {
            ages.sort();
            ages.dedup();
            let created: Vec<_> = ages.iter().map(|a| t0() - Duration::seconds(*a)).collect();
            let w = recency_weights(&created, t0(), 3600.0);
            for pair in w.windows(2) {
                prop_assert!(pair[0] > pair[1]);
            }
        }
    }
}
