//! Brute-force word lengths by breadth-first search over a finite window.
//!
//! States are pairs (lamps supported in `[-W, W]`, cursor in `[-W', W']`).
//! Lamps are packed as base-`|G|` digits, position `p` at digit `p + W`.
//! For the infinite generating sets the base letters applicable at a cursor
//! form a subgroup `D_c` of the windowed base, so the neighbours of a state
//! under base letters are its whole coset `x + D_c`; each coset is expanded
//! once, which keeps the search linear in the number of states.

use std::collections::VecDeque;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::GroupDesc;

use super::GenSet;

/// Default cap on `|G|^(2W+1) * (2W'+1)`.
pub const DEFAULT_STATE_LIMIT: u64 = 40_000_000;

const UNSEEN: u16 = u16::MAX;

/// Distances from the identity to every state of the window.
#[derive(Clone, Debug)]
pub struct BfsTable {
    group: GroupDesc,
    window: i64,
    cursor_bound: i64,
    /// Empty for the trivial structure, whose distances are known.
    dist: Vec<u16>,
    trivial: bool,
}

/// Per-position constraint on the base letters available at a cursor.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Any,
    InH,
}

impl BfsTable {
    pub fn build(
        g: &GroupDesc,
        gens: &GenSet,
        window: i64,
        cursor_bound: i64,
        state_limit: u64,
    ) -> Result<Self> {
        if window < 0 || cursor_bound < 0 {
            return Err(Error::InvalidArgument(
                "window bounds must be non-negative".into(),
            ));
        }
        let n = g.order() as u128;
        let configs = n.checked_pow((2 * window + 1) as u32).unwrap_or(u128::MAX);
        let states = configs.saturating_mul((2 * cursor_bound + 1) as u128);
        if states > state_limit as u128 {
            return Err(Error::StateLimitExceeded {
                states,
                limit: state_limit,
            });
        }
        let mut table = BfsTable {
            group: g.clone(),
            window,
            cursor_bound,
            dist: Vec::new(),
            trivial: matches!(gens, GenSet::Trivial),
        };
        if !table.trivial {
            table.dist = Search::new(g, gens, window, cursor_bound, configs as usize).run();
        }
        Ok(table)
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn cursor_bound(&self) -> i64 {
        self.cursor_bound
    }

    /// Windowed distance from the identity, or `None` if `x` is not reachable
    /// without leaving the window.
    pub fn distance(&self, x: &Element) -> Result<Option<u64>> {
        self.group.validate_config(&x.config)?;
        let lamps = x.lamps();
        let w = self.window;
        if !lamps.within(-w, w) || x.shift.abs() > self.cursor_bound {
            return Err(Error::TargetOutsideWindow(format!(
                "{x} does not fit lamps in [-{w}, {w}] and cursor in [-{b}, {b}]",
                b = self.cursor_bound
            )));
        }
        if self.trivial {
            return Ok(Some(u64::from(!x.is_identity())));
        }
        let n = self.group.order();
        let mut cfg = 0usize;
        for p in (-w..=w).rev() {
            cfg = cfg * n + lamps.get(p).map_or(0, |c| self.group.index_of(c));
        }
        let cursors = (2 * self.cursor_bound + 1) as usize;
        let d = self.dist[cfg * cursors + (x.shift + self.cursor_bound) as usize];
        Ok((d != UNSEEN).then_some(d as u64))
    }
}

struct Search {
    n: usize,
    window: i64,
    cursor_bound: i64,
    configs: usize,
    cursors: usize,
    pow: Vec<usize>,
    add: Vec<Vec<u16>>,
    /// Standard letters as element indices; empty for coset-type sets.
    letters: Vec<usize>,
    /// `coset[d]` lists the digits of `d + H`, `rep[d]` is its least one.
    coset: Vec<Vec<usize>>,
    rep: Vec<usize>,
    gens: GenSet,
}

impl Search {
    fn new(g: &GroupDesc, gens: &GenSet, window: i64, cursor_bound: i64, configs: usize) -> Self {
        let n = g.order();
        let len = (2 * window + 1) as usize;
        let pow: Vec<usize> = (0..len).map(|k| n.pow(k as u32)).collect();
        let add = g.add_table();
        let mut letters = Vec::new();
        if matches!(gens, GenSet::Standard) {
            for e in g.standard_generators() {
                letters.push(g.index_of(&e));
                letters.push(g.index_of(&g.coeff_neg(&e)));
            }
            letters.sort_unstable();
            letters.dedup();
        }
        let h: Vec<usize> = gens
            .subgroup()
            .map(|h| h.elements().iter().map(|c| g.index_of(c)).collect())
            .unwrap_or_else(|| vec![0]);
        let coset: Vec<Vec<usize>> = (0..n)
            .map(|d| {
                let mut c: Vec<usize> = h.iter().map(|&x| add[d][x] as usize).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let rep = coset.iter().map(|c| c[0]).collect();
        Search {
            n,
            window,
            cursor_bound,
            configs,
            cursors: (2 * cursor_bound + 1) as usize,
            pow,
            add,
            letters,
            coset,
            rep,
            gens: gens.clone(),
        }
    }

    fn digit(&self, cfg: usize, k: usize) -> usize {
        cfg / self.pow[k] % self.n
    }

    fn slots(&self, cursor: i64) -> Vec<Slot> {
        (-self.window..=self.window)
            .map(|p| match &self.gens {
                GenSet::QPlus(_) if p < cursor => Slot::InH,
                GenSet::QMinus(_) if p > cursor => Slot::InH,
                _ => Slot::Any,
            })
            .collect()
    }

    fn run(&self) -> Vec<u16> {
        let total = self.configs * self.cursors;
        let mut dist = vec![UNSEEN; total];
        let mut expanded = vec![0u64; total.div_ceil(64)];
        let slots: Vec<Vec<Slot>> = (-self.cursor_bound..=self.cursor_bound)
            .map(|c| self.slots(c))
            .collect();
        let origin = self.cursor_bound as usize;
        dist[origin] = 0;
        let mut queue = VecDeque::from([origin]);
        let mut members = Vec::new();
        while let Some(s) = queue.pop_front() {
            let d = dist[s] + 1;
            let (cfg, ci) = (s / self.cursors, s % self.cursors);
            let mut visit = |t: usize, queue: &mut VecDeque<usize>| {
                if dist[t] == UNSEEN {
                    dist[t] = d;
                    queue.push_back(t);
                }
            };
            if ci > 0 {
                visit(s - 1, &mut queue);
            }
            if ci + 1 < self.cursors {
                visit(s + 1, &mut queue);
            }
            let cursor = ci as i64 - self.cursor_bound;
            if matches!(self.gens, GenSet::Standard) {
                if cursor.abs() <= self.window {
                    let k = (cursor + self.window) as usize;
                    let dg = self.digit(cfg, k);
                    for &l in &self.letters {
                        let nd = self.add[dg][l] as usize;
                        let t = (cfg + nd * self.pow[k] - dg * self.pow[k]) * self.cursors + ci;
                        visit(t, &mut queue);
                    }
                }
                continue;
            }
            let slots = &slots[ci];
            let key = self.coset_key(cfg, slots);
            let kidx = key * self.cursors + ci;
            if expanded[kidx / 64] >> (kidx % 64) & 1 == 1 {
                continue;
            }
            expanded[kidx / 64] |= 1 << (kidx % 64);
            self.coset_members(key, slots, &mut members);
            for &m in &members {
                visit(m * self.cursors + ci, &mut queue);
            }
        }
        dist
    }

    /// Canonical representative of `cfg + D_c`: free digits zeroed, `H`
    /// digits replaced by their coset minimum.
    fn coset_key(&self, cfg: usize, slots: &[Slot]) -> usize {
        slots
            .iter()
            .enumerate()
            .map(|(k, s)| match s {
                Slot::Any => 0,
                Slot::InH => self.rep[self.digit(cfg, k)] * self.pow[k],
            })
            .sum()
    }

    fn coset_members(&self, key: usize, slots: &[Slot], out: &mut Vec<usize>) {
        let choices: Vec<Vec<usize>> = slots
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let digits: Vec<usize> = match s {
                    Slot::Any => (0..self.n).collect(),
                    Slot::InH => self.coset[self.digit(key, k)].clone(),
                };
                digits.into_iter().map(|d| d * self.pow[k]).collect()
            })
            .collect();
        out.clear();
        out.push(0);
        for opts in choices {
            let prev = std::mem::take(out);
            for base in prev {
                out.extend(opts.iter().map(|o| base + o));
            }
        }
    }
}

/// One-shot windowed word length; builds a full [`BfsTable`].
pub fn bfs_wordlen(
    x: &Element,
    gens: &GenSet,
    g: &GroupDesc,
    window: i64,
    cursor_bound: i64,
    state_limit: u64,
) -> Result<Option<u64>> {
    BfsTable::build(g, gens, window, cursor_bound, state_limit)?.distance(x)
}
