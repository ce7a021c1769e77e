//! EPSDE: ensemble of discrete `{F, CR}` pools with a success memory.
//!
//! Successful pairs survive to the next generation and are copied into a
//! bounded memory. A failed individual draws a replacement at its next
//! assignment: a coin flip between a fresh random pool combination and a
//! uniformly drawn memory entry (fresh combination while the memory is
//! empty).

use std::collections::VecDeque;

use rand::Rng;

use super::AdaptationMethod;
use crate::de::ControlParams;
use crate::rng::Stream;

pub const F_POOL: [f64; 6] = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const CR_POOL: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub struct Epsde {
    current: Vec<ControlParams>,
    needs_replacement: Vec<bool>,
    memory: VecDeque<ControlParams>,
    capacity: usize,
}

impl Epsde {
    pub fn new(pop_size: usize) -> Self {
        Epsde {
            current: vec![ControlParams::new(F_POOL[0], CR_POOL[0]); pop_size],
            needs_replacement: vec![true; pop_size],
            memory: VecDeque::with_capacity(pop_size),
            capacity: pop_size,
        }
    }

    fn fresh_combination(rng: &mut Stream) -> ControlParams {
        let f = F_POOL[rng.gen_range(0..F_POOL.len())];
        let cr = CR_POOL[rng.gen_range(0..CR_POOL.len())];
        ControlParams::new(f, cr)
    }

    #[cfg(test)]
    fn memory_len(&self) -> usize {
        self.memory.len()
    }
}

impl AdaptationMethod for Epsde {
    fn assign(&mut self, i: usize, _t: u64, rng: &mut Stream) -> ControlParams {
        if self.needs_replacement[i] {
            self.current[i] = if self.memory.is_empty() {
                Self::fresh_combination(rng)
            } else if rng.gen_bool(0.5) {
                self.memory[rng.gen_range(0..self.memory.len())]
            } else {
                Self::fresh_combination(rng)
            };
            self.needs_replacement[i] = false;
        }
        self.current[i]
    }

    fn observe(&mut self, i: usize, _t: u64, params: ControlParams, success: bool, _improvement: f64) {
        if success {
            self.memory.push_back(params);
            if self.memory.len() > self.capacity {
                self.memory.pop_front();
            }
        } else {
            self.needs_replacement[i] = true;
        }
    }

    fn end_generation(&mut self, _t: u64, _rng: &mut Stream) {}

    fn name(&self) -> &'static str {
        "epsde"
    }
}
