//! Index-based view of a system shared by the search procedures.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::gadget::Gadget;
use crate::system::{Endpoint, System};

#[derive(Clone, Copy, Debug)]
pub(crate) struct CompiledRule {
    pub inst: usize,
    pub pre: u32,
    pub post: u32,
    pub exit: usize,
    pub rule: usize,
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    word: usize,
    shift: u32,
    mask: u64,
}

/// Positions are the locations of every instance (in instance then
/// rotation order) followed by `start` and `goal`.
pub(crate) struct Compiled<'s> {
    pub system: &'s System,
    pub gadgets: Vec<&'s Gadget>,
    pub offsets: Vec<usize>,
    pub start: usize,
    pub goal: usize,
    /// Per position: `(to, connection index)` in connection order.
    pub walks: Vec<Vec<(usize, usize)>>,
    /// Per position: rules entering there, in rule order.
    pub rules: Vec<Vec<CompiledRule>>,
    slots: Vec<Slot>,
    pub words: usize,
}

impl<'s> Compiled<'s> {
    /// Expects a system whose instances and endpoints all resolve.
    pub fn new(system: &'s System) -> Self {
        let gadgets: Vec<&Gadget> = system
            .instances()
            .iter()
            .map(|i| system.gadget_of(&i.id).expect("validated system"))
            .collect();
        let mut offsets = Vec::with_capacity(gadgets.len());
        let mut total = 0;
        for g in &gadgets {
            offsets.push(total);
            total += g.locations().len();
        }
        let start = total;
        let goal = total + 1;
        let npos = total + 2;

        let mut slots = Vec::with_capacity(gadgets.len());
        let (mut word, mut used) = (0usize, 0u32);
        for g in &gadgets {
            let n = g.states().len().max(1);
            let bits = usize::BITS - (n - 1).leading_zeros();
            if used + bits > 64 {
                word += 1;
                used = 0;
            }
            let mask = if bits == 0 {
                0
            } else {
                u64::MAX >> (64 - bits)
            };
            slots.push(Slot {
                word,
                shift: used,
                mask,
            });
            used += bits;
        }
        let words = if used == 0 && word == 0 { 0 } else { word + 1 };

        let mut c = Compiled {
            system,
            gadgets,
            offsets,
            start,
            goal,
            walks: vec![Vec::new(); npos],
            rules: vec![Vec::new(); npos],
            slots,
            words,
        };

        for (ci, conn) in system.connections().iter().enumerate() {
            let a = c.position(&conn.a).expect("validated endpoint");
            let b = c.position(&conn.b).expect("validated endpoint");
            c.walks[a].push((b, ci));
            if a != b {
                c.walks[b].push((a, ci));
            }
        }
        for (inst, g) in c.gadgets.iter().enumerate() {
            let mut order: Vec<usize> = (0..g.rules().len()).collect();
            order.sort_by(|&x, &y| g.rules()[x].cmp(&g.rules()[y]));
            for ri in order {
                let r = &g.rules()[ri];
                let (Some(e), Some(x), Some(pre), Some(post)) = (
                    g.location_index(&r.entry),
                    g.location_index(&r.exit),
                    g.state_index(&r.pre),
                    g.state_index(&r.post),
                ) else {
                    continue;
                };
                let base = c.offsets[inst];
                c.rules[base + e].push(CompiledRule {
                    inst,
                    pre: pre as u32,
                    post: post as u32,
                    exit: base + x,
                    rule: ri,
                });
            }
        }
        c
    }

    pub fn position(&self, e: &Endpoint) -> Option<usize> {
        match e {
            Endpoint::Start => Some(self.start),
            Endpoint::Goal => Some(self.goal),
            Endpoint::Port { instance, location } => {
                let i = self.system.instance_index(instance)?;
                let l = self.gadgets[i].location_index(location)?;
                Some(self.offsets[i] + l)
            }
        }
    }

    pub fn endpoint(&self, pos: usize) -> Endpoint {
        if pos == self.start {
            return Endpoint::Start;
        }
        if pos == self.goal {
            return Endpoint::Goal;
        }
        let inst = self.offsets.partition_point(|&o| o <= pos) - 1;
        let g = self.gadgets[inst];
        Endpoint::port(
            self.system.instances()[inst].id.as_str(),
            g.locations()[pos - self.offsets[inst]].id.as_str(),
        )
    }

    pub fn get(&self, states: &[u64], inst: usize) -> u32 {
        let s = self.slots[inst];
        if s.mask == 0 {
            return 0;
        }
        ((states[s.word] >> s.shift) & s.mask) as u32
    }

    pub fn set(&self, states: &mut [u64], inst: usize, value: u32) {
        let s = self.slots[inst];
        if s.mask == 0 {
            return;
        }
        states[s.word] = (states[s.word] & !(s.mask << s.shift)) | (u64::from(value) << s.shift);
    }

    /// Packs per-instance state indices.
    pub fn pack(&self, indices: &[u32]) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for (i, &v) in indices.iter().enumerate() {
            self.set(&mut out, i, v);
        }
        out
    }

    pub fn unpack(&self, states: &[u64]) -> Vec<u32> {
        (0..self.gadgets.len())
            .map(|i| self.get(states, i))
            .collect()
    }

    pub fn initial_states(&self) -> Vec<u64> {
        let idx: Vec<u32> = self
            .system
            .instances()
            .iter()
            .zip(&self.gadgets)
            .map(|(inst, g)| {
                g.state_index(&inst.initial)
                    .expect("validated initial state") as u32
            })
            .collect();
        self.pack(&idx)
    }
}

/// Interned fixed-width records (a tag word followed by packed states).
pub(crate) struct Store {
    width: usize,
    arena: Vec<u64>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl Store {
    pub fn new(width: usize) -> Self {
        Store {
            width,
            arena: Vec::new(),
            table: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.arena.len() / self.width
    }

    pub fn get(&self, id: usize) -> &[u64] {
        &self.arena[id * self.width..(id + 1) * self.width]
    }

    pub fn find(&self, key: &[u64]) -> Option<usize> {
        let hash = self.hasher.hash_one(key);
        let w = self.width;
        self.table
            .find(hash, |&id| {
                &self.arena[id as usize * w..(id as usize + 1) * w] == key
            })
            .map(|&id| id as usize)
    }

    /// Returns `(id, newly inserted)`.
    pub fn insert(&mut self, key: &[u64]) -> (usize, bool) {
        debug_assert_eq!(key.len(), self.width);
        if let Some(id) = self.find(key) {
            return (id, false);
        }
        let id = self.len();
        self.arena.extend_from_slice(key);
        let hash = self.hasher.hash_one(key);
        let (w, arena, hasher) = (self.width, &self.arena, &self.hasher);
        self.table.insert_unique(hash, id as u32, |&other| {
            hasher.hash_one(&arena[other as usize * w..(other as usize + 1) * w])
        });
        (id, true)
    }
}
