//! Coset enumeration over `⟨s, t | s², (st)³⟩`.
//!
//! HLT strategy with a union-find coincidence queue. Columns are `s`, `t`,
//! `t⁻¹`; `s` is its own inverse. Cosets are scanned lowest-number first, so
//! the resulting table only depends on the input words.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::psl2::Letter;

const GENS: usize = 3;
const S: usize = 0;
const T: usize = 1;
const T_INV: usize = 2;

fn inv(x: usize) -> usize {
    match x {
        S => S,
        T => T_INV,
        _ => T,
    }
}

fn column(l: Letter) -> usize {
    match l {
        Letter::S => S,
        Letter::T => T,
        Letter::TInv => T_INV,
    }
}

const RELATORS: [&[usize]; 2] = [&[S, S], &[S, T, S, T, S, T]];

struct Table {
    rows: Vec<[Option<usize>; GENS]>,
    parent: Vec<usize>,
    queue: VecDeque<usize>,
    budget: usize,
}

impl Table {
    fn new(budget: usize) -> Self {
        Self {
            rows: vec![[None; GENS]],
            parent: vec![0],
            queue: VecDeque::new(),
            budget,
        }
    }

    fn find(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.rows.len() >= self.budget {
            return Err(Error::IndexBoundExceeded {
                budget: self.budget,
            });
        }
        let d = self.rows.len();
        self.rows.push([None; GENS]);
        self.parent.push(d);
        self.rows[c][x] = Some(d);
        self.rows[d][inv(x)] = Some(c);
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, word.len() - 1);
        loop {
            while i <= j {
                match self.rows[f][word[i]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i {
                match self.rows[b][inv(word[j])] {
                    Some(n) => {
                        b = n;
                        if j == 0 {
                            // consumed everything from the right
                            self.coincidence(f, b);
                            return Ok(());
                        }
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            } else if i == j {
                self.rows[f][word[i]] = Some(b);
                self.rows[b][inv(word[i])] = Some(f);
                return Ok(());
            } else {
                self.define(f, word[i])?;
            }
        }
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.find(k), self.find(l));
        if k == l {
            return;
        }
        let (keep, drop) = if k < l { (k, l) } else { (l, k) };
        self.parent[drop] = keep;
        self.queue.push_back(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(g) = self.queue.pop_front() {
            for x in 0..GENS {
                let Some(d) = self.rows[g][x] else { continue };
                if self.rows[d][inv(x)] == Some(g) {
                    self.rows[d][inv(x)] = None;
                }
                let (mu, nu) = (self.find(g), self.find(d));
                if let Some(e) = self.rows[mu][x] {
                    self.merge(nu, e);
                } else if let Some(e) = self.rows[nu][inv(x)] {
                    self.merge(mu, e);
                } else {
                    self.rows[mu][x] = Some(nu);
                    self.rows[nu][inv(x)] = Some(mu);
                }
            }
        }
    }

    fn run(&mut self, subgroup: &[Vec<usize>]) -> Result<()> {
        for w in subgroup {
            self.scan_and_fill(0, w)?;
        }
        let mut c = 0;
        while c < self.rows.len() {
            if self.alive(c) {
                for r in RELATORS {
                    self.scan_and_fill(c, r)?;
                    if !self.alive(c) {
                        break;
                    }
                }
                if self.alive(c) {
                    for x in 0..GENS {
                        if self.rows[c][x].is_none() {
                            self.define(c, x)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Live cosets renumbered in order, as `(perm_s, perm_t)`.
    fn compact(&mut self) -> (Vec<usize>, Vec<usize>) {
        let live: Vec<usize> = (0..self.rows.len()).filter(|&c| self.alive(c)).collect();
        let mut index = vec![usize::MAX; self.rows.len()];
        for (i, &c) in live.iter().enumerate() {
            index[c] = i;
        }
        let mut perm_s = Vec::with_capacity(live.len());
        let mut perm_t = Vec::with_capacity(live.len());
        for &c in &live {
            let s = self.rows[c][S].expect("complete table");
            let t = self.rows[c][T].expect("complete table");
            let (s, t) = (self.find(s), self.find(t));
            perm_s.push(index[s]);
            perm_t.push(index[t]);
        }
        (perm_s, perm_t)
    }
}

/// Enumerates the cosets of the subgroup generated by `words`.
///
/// Returns the right actions of `s` and `t` on the cosets, with the trivial
/// coset numbered 0. Fails once more than `budget` cosets have been defined.
pub(crate) fn enumerate_cosets(
    words: &[Vec<Letter>],
    budget: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let subgroup: Vec<Vec<usize>> = words
        .iter()
        .map(|w| w.iter().map(|&l| column(l)).collect())
        .collect();
    let mut table = Table::new(budget.max(1));
    table.run(&subgroup)?;
    Ok(table.compact())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_group_has_one_coset() {
        let (s, t) = enumerate_cosets(&[vec![Letter::S], vec![Letter::T]], 100).unwrap();
        assert_eq!((s, t), (vec![0], vec![0]));
    }

    #[test]
    fn normal_closure_of_t_is_everything() {
        // ⟨⟨T⟩⟩ = PSL(2,Z), but ⟨T⟩ alone has infinite index.
        let err = enumerate_cosets(&[vec![Letter::T]], 500).unwrap_err();
        assert!(matches!(err, Error::IndexBoundExceeded { budget: 500 }));
    }

    #[test]
    fn index_two_subgroup() {
        // ⟨T², S T S⁻¹ ... ⟩: the kernel of PSL(2,Z) -> Z/2 sending s -> 1, t -> 1
        // is generated by t², st, ts (index 2).
        let words = vec![
            vec![Letter::T, Letter::T],
            vec![Letter::S, Letter::T],
            vec![Letter::T, Letter::S],
        ];
        let (s, t) = enumerate_cosets(&words, 100).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s, vec![1, 0]);
        assert_eq!(t, vec![1, 0]);
    }

    #[test]
    fn trivial_subgroup_is_infinite() {
        assert!(enumerate_cosets(&[], 200).is_err());
    }
}
