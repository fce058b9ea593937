//! Critical pair bookkeeping shared by the rational and integer engines. Only
//! leading monomials and sugar degrees are needed here.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::poly::Monomial;

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u32,
    lcm_degree: u32,
    i: usize,
    j: usize,
}

pub(super) struct Pair {
    pub i: usize,
    pub j: usize,
    pub lcm: Monomial,
    pub sugar: u32,
}

pub(super) struct PairSet {
    lms: Vec<Monomial>,
    sugar: Vec<u32>,
    /// Indices of the current (non-redundant) basis elements.
    basis: Vec<usize>,
    pairs: Vec<Option<Pair>>,
    queue: BinaryHeap<Reverse<(PairKey, usize)>>,
    degree_bound: Option<u32>,
}

impl PairSet {
    pub fn new(degree_bound: Option<u32>) -> Self {
        PairSet {
            lms: Vec::new(),
            sugar: Vec::new(),
            basis: Vec::new(),
            pairs: Vec::new(),
            queue: BinaryHeap::new(),
            degree_bound,
        }
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Lowest sugar first, then smallest lcm degree.
    pub fn pop(&mut self) -> Option<Pair> {
        while let Some(Reverse((_, slot))) = self.queue.pop() {
            if let Some(p) = self.pairs[slot].take() {
                return Some(p);
            }
        }
        None
    }

    /// Gebauer-Moeller installation of a new element with leading monomial
    /// `lm_h`; returns its index.
    pub fn install(&mut self, lm_h: Monomial, sugar: u32) -> usize {
        let t = self.lms.len();

        // Chain criterion on queued pairs: drop (i, j) when lm(h) divides the
        // lcm strictly away from both lcm(i, h) and lcm(j, h).
        for slot in self.pairs.iter_mut() {
            let Some(p) = slot else { continue };
            if lm_h.divides(&p.lcm) {
                let li = self.lms[p.i].lcm(&lm_h);
                let lj = self.lms[p.j].lcm(&lm_h);
                if li != p.lcm && lj != p.lcm {
                    *slot = None;
                }
            }
        }

        let mut cands: Vec<(usize, Monomial, bool)> = self
            .basis
            .iter()
            .map(|&k| {
                let lm_k = &self.lms[k];
                (k, lm_k.lcm(&lm_h), lm_k.is_coprime(&lm_h))
            })
            .collect();

        // Drop candidates whose lcm is a proper multiple of another lcm.
        let n = cands.len();
        let mut keep = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && keep[b] && cands[b].1 != cands[a].1 && cands[b].1.divides(&cands[a].1) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // Among equal lcms keep one, preferring a coprime one (which is then dropped).
        let mut chosen: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, c) in cands.drain(..).enumerate() {
            if !keep[idx] {
                continue;
            }
            if let Some(prev) = chosen.iter_mut().find(|p| p.1 == c.1) {
                if c.2 {
                    prev.2 = true;
                }
                continue;
            }
            chosen.push(c);
        }
        for (k, lcm, coprime) in chosen {
            if coprime {
                continue;
            }
            if let Some(b) = self.degree_bound {
                if lcm.degree() > b {
                    continue;
                }
            }
            let lm_k = &self.lms[k];
            let s = (self.sugar[k] + lcm.degree() - lm_k.degree()).max(sugar + lcm.degree() - lm_h.degree());
            let key = PairKey {
                sugar: s,
                lcm_degree: lcm.degree(),
                i: k,
                j: t,
            };
            let slot = self.pairs.len();
            self.pairs.push(Some(Pair { i: k, j: t, lcm, sugar: s }));
            self.queue.push(Reverse((key, slot)));
        }

        self.basis.retain(|&k| !lm_h.divides(&self.lms[k]));
        self.basis.push(t);
        self.lms.push(lm_h);
        self.sugar.push(sugar);
        t
    }
}
