//! Dinic's maximum flow over an exact capacity type.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_traits::Zero;

pub trait Capacity: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> Capacity for T {}

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    cap: C,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork<C> {
    arcs: Vec<Arc<C>>,
    out: Vec<Vec<usize>>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: C) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc {
            to: from,
            cap: C::zero(),
        });
    }

    fn levels(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.out.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v] {
                let arc = &self.arcs[a];
                if arc.cap > C::zero() && level[arc.to] == usize::MAX {
                    level[arc.to] = level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[sink] != usize::MAX).then_some(level)
    }

    fn augment(
        &mut self,
        v: usize,
        sink: usize,
        limit: C,
        level: &[usize],
        next: &mut [usize],
    ) -> C {
        if v == sink {
            return limit;
        }
        while next[v] < self.out[v].len() {
            let a = self.out[v][next[v]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap.clone());
            if cap > C::zero() && level[to] == level[v] + 1 {
                let push = if cap < limit { cap } else { limit.clone() };
                let got = self.augment(to, sink, push, level, next);
                if got > C::zero() {
                    let rest = self.arcs[a].cap.clone() - got.clone();
                    self.arcs[a].cap = rest;
                    let back = self.arcs[a ^ 1].cap.clone() + got.clone();
                    self.arcs[a ^ 1].cap = back;
                    return got;
                }
            }
            next[v] += 1;
        }
        C::zero()
    }

    /// Pushes a maximum flow; `infinity` must exceed any cut value.
    pub fn max_flow(&mut self, source: usize, sink: usize, infinity: C) -> C {
        let mut total = C::zero();
        while let Some(level) = self.levels(source, sink) {
            let mut next = vec![0; self.out.len()];
            loop {
                let got = self.augment(source, sink, infinity.clone(), &level, &mut next);
                if got.is_zero() {
                    break;
                }
                total = total + got;
            }
        }
        total
    }

    /// Nodes reachable from `source` in the residual network.
    pub fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(v) = stack.pop() {
            for &a in &self.out[v] {
                let arc = &self.arcs[a];
                if arc.cap > C::zero() && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}
