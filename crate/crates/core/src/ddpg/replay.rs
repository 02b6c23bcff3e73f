use rand::Rng;

use crate::arena::{ACTION_DIM, OBS_DIM};
use crate::error::{Error, Result};

/// One `(s_t, a_t, r_t, s_{t+1}, terminal)` record in network layout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub state: [f32; OBS_DIM],
    pub action: [f32; ACTION_DIM],
    pub reward: f32,
    pub next_state: [f32; OBS_DIM],
    pub terminal: bool,
}

/// Fixed-capacity ring memory with FIFO eviction.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    items: Vec<Transition>,
    capacity: usize,
    head: usize,
    inserted: u64,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::param("buffer_capacity", "must be at least 1"));
        }
        Ok(Self {
            items: Vec::with_capacity(capacity.min(1 << 16)),
            capacity,
            head: 0,
            inserted: 0,
        })
    }

    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.head] = t;
            self.head = (self.head + 1) % self.capacity;
        }
        self.inserted += 1;
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Total pushes over the buffer's lifetime, including evicted ones.
    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    /// Stored transitions, oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        let (newer, older) = self.items.split_at(self.head);
        older.iter().chain(newer.iter())
    }

    /// Draws `count` transitions uniformly with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<Transition>> {
        if count == 0 {
            return Err(Error::EmptyBatch);
        }
        if self.items.len() < count {
            return Err(Error::InsufficientSamples {
                have: self.items.len(),
                need: count,
            });
        }
        Ok((0..count)
            .map(|_| self.items[rng.random_range(0..self.items.len())])
            .collect())
    }
}
