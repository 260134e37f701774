//! Lex-leader pruning: a coloring in restricted-growth form survives only if
//! no symmetry maps it to a smaller restricted-growth string.
//!
//! Every symmetry is an affine map `x -> u*x + t (mod n)` on positions:
//! reflection on `[n]`, and all maps with `gcd(u, n) = 1` on `Z_n`. Each one
//! compares `c(g(0)), c(g(1)), ...` (relabeled by first appearance) with `c`
//! and is parked until the next pair of positions it needs is colored.
//!
//! With `pinned`, only maps keeping position 0 in its own color class take
//! part, so the rule can be combined with one that chooses that class.

use crate::apcore::{Kind, Structure};
use crate::arith::gcd;

#[derive(Clone, Copy)]
enum Undo {
    State { g: u32, m: u32, next: u8 },
    Label { g: u32, c: u8 },
    Parked { w: u32 },
}

#[derive(Clone)]
pub(super) struct LexLeader {
    n: usize,
    maps: Vec<(u64, u64)>,
    // Per map: next index to compare, next fresh label, labels by color.
    m: Vec<u32>,
    next: Vec<u8>,
    labels: Vec<u8>,
    width: usize,
    pinned: bool,
    // wait[w]: maps that can advance once positions `..w` are colored.
    wait: Vec<Vec<u32>>,
    undo: Vec<Undo>,
}

fn maps(s: Structure) -> Vec<(u64, u64)> {
    let n = s.n as u64;
    if n < 2 {
        return Vec::new();
    }
    match s.kind {
        Kind::Interval => vec![(n - 1, n - 1)],
        Kind::Cyclic => (1..n)
            .filter(|&u| gcd(u, n) == 1)
            .flat_map(|u| (0..n).map(move |t| (u, t)))
            .filter(|&g| g != (1, 0))
            .collect(),
    }
}

impl LexLeader {
    pub(super) fn new(s: Structure, r: usize, pinned: bool) -> Self {
        let maps = maps(s);
        let n = s.n;
        let width = r + 1;
        let mut wait = vec![Vec::new(); n + 1];
        for (g, &(_, t)) in maps.iter().enumerate() {
            wait[t as usize + 1].push(g as u32);
        }
        LexLeader {
            n,
            m: vec![0; maps.len()],
            next: vec![1; maps.len()],
            labels: vec![0; maps.len() * width],
            width,
            pinned,
            maps,
            wait,
            undo: Vec::new(),
        }
    }

    pub(super) fn mark(&self) -> usize {
        self.undo.len()
    }

    /// Advances the maps waiting on depth `i` (positions `..i` colored).
    /// False when some map gives a smaller string; the caller then undoes.
    pub(super) fn check(&mut self, i: usize, assign: &[u8]) -> bool {
        let n = self.n as u64;
        for idx in 0..self.wait[i].len() {
            let g = self.wait[i][idx];
            let gi = g as usize;
            let (u, t) = self.maps[gi];
            self.undo.push(Undo::State { g, m: self.m[gi], next: self.next[gi] });
            loop {
                let x = self.m[gi] as usize;
                if x == self.n {
                    break;
                }
                let y = ((u * x as u64 + t) % n) as usize;
                if x >= i || y >= i {
                    let w = x.max(y) + 1;
                    self.wait[w].push(g);
                    self.undo.push(Undo::Parked { w: w as u32 });
                    break;
                }
                let c = assign[y];
                if x == 0 && self.pinned && c != assign[0] {
                    break;
                }
                let slot = gi * self.width + c as usize;
                let mut lab = self.labels[slot];
                if lab == 0 {
                    lab = self.next[gi];
                    self.labels[slot] = lab;
                    self.next[gi] += 1;
                    self.undo.push(Undo::Label { g, c });
                }
                if lab < assign[x] {
                    return false;
                }
                if lab > assign[x] {
                    break;
                }
                self.m[gi] += 1;
            }
        }
        true
    }

    pub(super) fn undo_to(&mut self, mark: usize) {
        while self.undo.len() > mark {
            match self.undo.pop().unwrap() {
                Undo::State { g, m, next } => {
                    self.m[g as usize] = m;
                    self.next[g as usize] = next;
                }
                Undo::Label { g, c } => self.labels[g as usize * self.width + c as usize] = 0,
                Undo::Parked { w } => {
                    self.wait[w as usize].pop();
                }
            }
        }
    }
}
