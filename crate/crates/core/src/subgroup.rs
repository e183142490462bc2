//! Finite-index subgroups of PSL(2,Z) as transitive coset actions.
//!
//! A subgroup `Γ` is stored as the right action of the generators `S` and `T`
//! on the cosets `Γg`, with the trivial coset `Γ` numbered 0. Everything else
//! (cusps, genus, real structure, parabolic generators) is read off the two
//! permutations.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_cosets;
use crate::error::{Error, Result};
use crate::psl2::{complete_column, ExtendedRational, GeneratorWord, Letter, ProjectiveClass, UnimodularMatrix};

pub const DEFAULT_COSET_BUDGET: usize = 10_000;

/// Why a pair of permutations is not a transitive action of PSL(2,Z).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("empty representation")]
    Empty,
    #[error("declared size {size} but perm_s has {s} entries and perm_t has {t}")]
    LengthMismatch { size: usize, s: usize, t: usize },
    #[error("{which} is not a permutation (entry at {point})")]
    NotPermutation { which: &'static str, point: usize },
    #[error("s² ≠ 1 at coset {point}")]
    SSquared { point: usize },
    #[error("(st)³ ≠ 1 at coset {point}")]
    StCubed { point: usize },
    #[error("action is not transitive: {reached} of {size} cosets reachable from 0")]
    NotTransitive { reached: usize, size: usize },
}

/// Checks the relations `s² = (st)³ = 1` and transitivity.
pub fn validate(perm_s: &[usize], perm_t: &[usize]) -> Result<(), Violation> {
    let n = perm_s.len();
    if n == 0 {
        return Err(Violation::Empty);
    }
    if perm_t.len() != n {
        return Err(Violation::LengthMismatch {
            size: n,
            s: n,
            t: perm_t.len(),
        });
    }
    for (which, p) in [("perm_s", perm_s), ("perm_t", perm_t)] {
        let mut seen = vec![false; n];
        for (i, &x) in p.iter().enumerate() {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Violation::NotPermutation { which, point: i });
            }
        }
    }
    for i in 0..n {
        if perm_s[perm_s[i]] != i {
            return Err(Violation::SSquared { point: i });
        }
    }
    for i in 0..n {
        let mut j = i;
        for _ in 0..3 {
            j = perm_t[perm_s[j]];
        }
        if j != i {
            return Err(Violation::StCubed { point: i });
        }
    }
    let reached = bfs_order(perm_s, perm_t).len();
    if reached != n {
        return Err(Violation::NotTransitive { reached, size: n });
    }
    Ok(())
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Cosets reachable from 0, in breadth-first order over `S, T, T⁻¹`.
fn bfs_order(perm_s: &[usize], perm_t: &[usize]) -> Vec<usize> {
    let perm_t_inv = inverse_perm(perm_t);
    let mut seen = vec![false; perm_s.len()];
    let mut order = vec![0];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for n in [perm_s[c], perm_t[c], perm_t_inv[c]] {
            if !seen[n] {
                seen[n] = true;
                order.push(n);
            }
        }
    }
    order
}

/// The transitive right action of PSL(2,Z) on `Γ\PSL(2,Z)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CosetTable", into = "CosetTable")]
pub struct CosetRepresentation {
    perm_s: Vec<usize>,
    perm_t: Vec<usize>,
    perm_t_inv: Vec<usize>,
}

/// Serialized shape of a coset representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetTable {
    pub size: usize,
    pub perm_s: Vec<usize>,
    pub perm_t: Vec<usize>,
}

impl TryFrom<CosetTable> for CosetRepresentation {
    type Error = Violation;
    fn try_from(t: CosetTable) -> Result<Self, Violation> {
        if t.perm_s.len() != t.size || t.perm_t.len() != t.size {
            return Err(Violation::LengthMismatch {
                size: t.size,
                s: t.perm_s.len(),
                t: t.perm_t.len(),
            });
        }
        Self::new(t.perm_s, t.perm_t)
    }
}

impl From<CosetRepresentation> for CosetTable {
    fn from(r: CosetRepresentation) -> Self {
        Self {
            size: r.size(),
            perm_s: r.perm_s,
            perm_t: r.perm_t,
        }
    }
}

/// Subgroup description accepted on input.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupInput {
    Generators(Vec<UnimodularMatrix>),
    Cosets(CosetTable),
}

impl SubgroupInput {
    pub fn into_representation(self, budget: usize) -> Result<CosetRepresentation> {
        match self {
            Self::Generators(gens) => CosetRepresentation::from_generators(&gens, budget),
            Self::Cosets(table) => Ok(CosetRepresentation::try_from(table)?),
        }
    }
}

/// One cusp class: a cycle of `T` on the cosets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspClass {
    #[serde(serialize_with = "serialize_display")]
    pub representative: ExtendedRational,
    pub width: usize,
    pub coset_cycle: Vec<usize>,
    /// Whether the reflection `z ↦ -z̄` fixes the class. Always false when the
    /// subgroup is not stable under the involution.
    pub is_real: bool,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupInvariants {
    pub index: usize,
    pub cusps: usize,
    pub genus: usize,
    pub e2: usize,
    pub e3: usize,
    pub torsion_free: bool,
    pub s_stable: bool,
}

/// A generator of the stabilizer of one cusp, as part of an ordered system
/// whose product is the identity in PSL(2,Z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicGenerator {
    /// Index into [`CosetRepresentation::cusps`].
    pub cusp: usize,
    pub fixed_point: ExtendedRational,
    pub matrix: UnimodularMatrix,
}

impl CosetRepresentation {
    pub fn new(perm_s: Vec<usize>, perm_t: Vec<usize>) -> Result<Self, Violation> {
        validate(&perm_s, &perm_t)?;
        let perm_t_inv = inverse_perm(&perm_t);
        Ok(Self {
            perm_s,
            perm_t,
            perm_t_inv,
        })
    }

    /// PSL(2,Z) itself.
    pub fn full_group() -> Self {
        Self::new(vec![0], vec![0]).expect("trivial action is valid")
    }

    /// Coset enumeration of the subgroup generated by `gens`.
    ///
    /// The table is renumbered breadth-first from the trivial coset, so equal
    /// subgroups produce identical representations.
    pub fn from_generators(gens: &[UnimodularMatrix], budget: usize) -> Result<Self> {
        let words: Vec<Vec<Letter>> = gens
            .iter()
            .map(|g| ProjectiveClass::new(g.clone()).to_word().0)
            .collect();
        let (perm_s, perm_t) = enumerate_cosets(&words, budget)?;
        let rep = Self::new(perm_s, perm_t)?;
        let rep = rep.standardized();
        for g in gens {
            if !rep.contains(g) {
                return Err(Error::Inconsistent(format!(
                    "generator {g} does not stabilize the trivial coset"
                )));
            }
        }
        Ok(rep)
    }

    /// Renumbers cosets in breadth-first order from 0.
    pub fn standardized(&self) -> Self {
        let order = bfs_order(&self.perm_s, &self.perm_t);
        let mut index = vec![0; order.len()];
        for (i, &c) in order.iter().enumerate() {
            index[c] = i;
        }
        let perm_s = order.iter().map(|&c| index[self.perm_s[c]]).collect();
        let perm_t = order.iter().map(|&c| index[self.perm_t[c]]).collect();
        Self::new(perm_s, perm_t).expect("relabeling preserves validity")
    }

    pub fn size(&self) -> usize {
        self.perm_s.len()
    }

    pub fn perm_s(&self) -> &[usize] {
        &self.perm_s
    }

    pub fn perm_t(&self) -> &[usize] {
        &self.perm_t
    }

    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        match letter {
            Letter::S => self.perm_s[coset],
            Letter::T => self.perm_t[coset],
            Letter::TInv => self.perm_t_inv[coset],
        }
    }

    pub fn act_word(&self, coset: usize, word: &GeneratorWord) -> usize {
        word.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// The order-three element `ST` acting on cosets.
    fn rho(&self, coset: usize) -> usize {
        self.perm_t[self.perm_s[coset]]
    }

    /// Membership of `±a` in the subgroup.
    pub fn contains(&self, a: &UnimodularMatrix) -> bool {
        let word = ProjectiveClass::new(a.clone()).to_word();
        self.act_word(0, &word) == 0
    }

    /// Words `g_i` with `0·g_i = i`, along a breadth-first spanning tree.
    pub fn coset_words(&self) -> Vec<GeneratorWord> {
        let n = self.size();
        let mut words: Vec<Option<GeneratorWord>> = vec![None; n];
        words[0] = Some(GeneratorWord::default());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for letter in [Letter::S, Letter::T, Letter::TInv] {
                let next = self.act(c, letter);
                if words[next].is_none() {
                    let mut w = words[c].clone().expect("visited");
                    w.0.push(letter);
                    words[next] = Some(w);
                    queue.push_back(next);
                }
            }
        }
        words.into_iter().map(|w| w.expect("transitive")).collect()
    }

    pub fn coset_representatives(&self) -> Vec<UnimodularMatrix> {
        self.coset_words().iter().map(GeneratorWord::evaluate).collect()
    }

    /// Cycles of `T`, each starting at its smallest coset, ordered by that coset.
    fn t_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut cycles = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut c = self.perm_t[start];
            while c != start {
                seen[c] = true;
                cycle.push(c);
                c = self.perm_t[c];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cusps(&self) -> Vec<CuspClass> {
        let reps = self.coset_representatives();
        let sigma = self.s_conjugation_map();
        let cycles = self.t_cycles();
        let mut cycle_of = vec![0; self.size()];
        for (k, cycle) in cycles.iter().enumerate() {
            for &c in cycle {
                cycle_of[c] = k;
            }
        }
        cycles
            .iter()
            .enumerate()
            .map(|(k, cycle)| {
                let start = cycle[0];
                let is_real = sigma
                    .as_ref()
                    .map(|s| cycle_of[s[start]] == k)
                    .unwrap_or(false);
                CuspClass {
                    representative: ExtendedRational::Infinity.transform(&reps[start]),
                    width: cycle.len(),
                    coset_cycle: cycle.clone(),
                    is_real,
                }
            })
            .collect()
    }

    /// Index of the cusp class containing `z`.
    pub fn cusp_of(&self, z: &ExtendedRational) -> usize {
        let (p, q) = z.homogeneous();
        let u = complete_column(&p, &q).expect("reduced");
        let coset = self.act_word(0, &ProjectiveClass::new(u).to_word());
        self.t_cycles()
            .iter()
            .position(|cycle| cycle.contains(&coset))
            .expect("every coset lies on a T-cycle")
    }

    pub fn invariants(&self) -> SubgroupInvariants {
        let mu = self.size();
        let e2 = (0..mu).filter(|&c| self.perm_s[c] == c).count();
        let e3 = (0..mu).filter(|&c| self.rho(c) == c).count();
        let t = self.t_cycles().len();
        // 12g = 12 + μ - 3e₂ - 4e₃ - 6t
        let twelve_g = 12 + mu as i64 - 3 * e2 as i64 - 4 * e3 as i64 - 6 * t as i64;
        debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula: {twelve_g}");
        SubgroupInvariants {
            index: mu,
            cusps: t,
            genus: (twelve_g / 12) as usize,
            e2,
            e3,
            torsion_free: e2 == 0 && e3 == 0,
            s_stable: self.is_s_stable(),
        }
    }

    /// The bijection `Γg ↦ Γ·S(g)` when the subgroup is stable under the
    /// involution, found by propagating `φ(0) = 0`, `φ(c·s) = φ(c)·s`,
    /// `φ(c·t) = φ(c)·t⁻¹`.
    pub fn s_conjugation_map(&self) -> Option<Vec<usize>> {
        let n = self.size();
        let mut phi: Vec<Option<usize>> = vec![None; n];
        let mut used = vec![false; n];
        phi[0] = Some(0);
        used[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let image = phi[c].expect("queued cosets are mapped");
            let pairs = [
                (self.perm_s[c], self.perm_s[image]),
                (self.perm_t[c], self.perm_t_inv[image]),
                (self.perm_t_inv[c], self.perm_t[image]),
            ];
            for (src, dst) in pairs {
                match phi[src] {
                    Some(existing) if existing != dst => return None,
                    Some(_) => {}
                    None => {
                        if std::mem::replace(&mut used[dst], true) {
                            return None;
                        }
                        phi[src] = Some(dst);
                        queue.push_back(src);
                    }
                }
            }
        }
        phi.into_iter().collect()
    }

    pub fn is_s_stable(&self) -> bool {
        self.s_conjugation_map().is_some()
    }

    /// Whether both describe the same subgroup (isomorphic actions by a
    /// bijection fixing coset 0).
    pub fn is_pointed_isomorphic(&self, other: &Self) -> bool {
        self.size() == other.size() && self.standardized() == other.standardized()
    }

    /// `g·T^w·g⁻¹` for the representative `g` of the cusp's first coset.
    pub fn cusp_stabilizer(&self, cusp: &CuspClass) -> UnimodularMatrix {
        let g = self.coset_words()[cusp.coset_cycle[0]].evaluate();
        g.compose(&UnimodularMatrix::t_pow(cusp.width as i64))
            .compose(&g.inverse())
    }

    /// One parabolic generator per cusp, ordered so that `P₁···P_t = 1` in PSL(2,Z).
    ///
    /// A fundamental polygon is assembled from Farey triangles along a
    /// breadth-first spanning tree of the `ST`-orbits. For genus zero its side
    /// pairings form a non-crossing chord diagram; walking the boundary from
    /// the edge of the trivial coset, each chord bounds a region holding one
    /// cusp, and the region's corner cycle gives its stabilizer generator
    /// `x_{a₁}···x_{a_m}·x_a⁻¹` (children `aᵢ` of chord `a`). The outer region
    /// gives `x_{a₁}···x_{a_m}` over top-level chords, and listing chords in
    /// reverse opening order followed by the outer region makes the product
    /// telescope to the identity.
    pub fn parabolic_generator_system(&self) -> Result<Vec<ParabolicGenerator>> {
        let inv = self.invariants();
        if !inv.torsion_free {
            return Err(Error::Precondition(format!(
                "subgroup has torsion (e2 = {}, e3 = {})",
                inv.e2, inv.e3
            )));
        }
        if inv.genus != 0 {
            return Err(Error::Precondition(format!(
                "quotient curve has genus {}, expected 0",
                inv.genus
            )));
        }
        let polygon = self.fundamental_polygon();
        let n_sides = polygon.sides.len();
        let expected = self.size() / 3 + 2;
        if n_sides != expected {
            return Err(Error::Inconsistent(format!(
                "polygon has {n_sides} sides, expected {expected}"
            )));
        }

        // Side pairings: crossing side i outward lands in x_i·D.
        let position: std::collections::HashMap<usize, usize> = polygon
            .sides
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let s = UnimodularMatrix::s();
        let mut partner = vec![0; n_sides];
        let mut crossing = Vec::with_capacity(n_sides);
        for (i, &c) in polygon.sides.iter().enumerate() {
            let cs = self.perm_s[c];
            partner[i] = position[&cs];
            let x = polygon.dart[c]
                .compose(&s)
                .compose(&polygon.dart[cs].inverse());
            crossing.push(x);
        }

        // Chord tree: children[Some(a)] for chord opened at a, children[None] for the outer region.
        let mut stack: Vec<usize> = Vec::new();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n_sides];
        let mut top_level = Vec::new();
        let mut opens = Vec::new();
        for i in 0..n_sides {
            let j = partner[i];
            if j > i {
                match stack.last() {
                    Some(&parent) => children[parent].push(i),
                    None => top_level.push(i),
                }
                stack.push(i);
                opens.push(i);
            } else if stack.pop() != Some(j) {
                return Err(Error::Inconsistent(
                    "side pairings of the polygon cross".into(),
                ));
            }
        }

        let product = |indices: &[usize]| {
            indices
                .iter()
                .fold(UnimodularMatrix::identity(), |acc, &i| acc.compose(&crossing[i]))
        };
        let corner = |i: usize| polygon.side_end(i);

        let cusps = self.cusps();
        let mut system = Vec::with_capacity(cusps.len());
        for &a in opens.iter().rev() {
            let matrix = product(&children[a]).compose(&crossing[partner[a]]);
            system.push((corner(a), matrix));
        }
        system.push((corner(n_sides - 1), product(&top_level)));

        let mut covered = BTreeSet::new();
        let mut out = Vec::with_capacity(system.len());
        for (fixed_point, matrix) in system {
            let matrix = ProjectiveClass::new(matrix).into_matrix();
            if !matrix.is_parabolic() || !self.contains(&matrix) {
                return Err(Error::Inconsistent(format!(
                    "corner cycle {matrix} at {fixed_point} is not a parabolic element of the subgroup"
                )));
            }
            if fixed_point.transform(&matrix) != fixed_point {
                return Err(Error::Inconsistent(format!(
                    "{matrix} does not fix {fixed_point}"
                )));
            }
            let cusp = self.cusp_of(&fixed_point);
            let shift = matrix.parabolic_normal_form()?.shift;
            if shift.abs().to_usize() != Some(cusps[cusp].width) || !covered.insert(cusp) {
                return Err(Error::Inconsistent(format!(
                    "corner cycle at {fixed_point} does not generate a new cusp stabilizer"
                )));
            }
            out.push(ParabolicGenerator {
                cusp,
                fixed_point,
                matrix,
            });
        }
        let total = out
            .iter()
            .fold(UnimodularMatrix::identity(), |acc, p| acc.compose(&p.matrix));
        if !total.is_central() || covered.len() != cusps.len() {
            return Err(Error::Inconsistent(
                "parabolic generators do not multiply to the identity".into(),
            ));
        }
        Ok(out)
    }

    fn fundamental_polygon(&self) -> Polygon {
        let n = self.size();
        let s = UnimodularMatrix::s();
        let rho = UnimodularMatrix::s().compose(&UnimodularMatrix::t());
        let mut dart: Vec<Option<UnimodularMatrix>> = vec![None; n];
        let mut interior = vec![false; n];
        let mut queue = VecDeque::new();

        let add_triangle = |c: usize, m: UnimodularMatrix, dart: &mut Vec<Option<UnimodularMatrix>>, queue: &mut VecDeque<usize>| {
            let mut cur = c;
            let mut mat = m;
            for _ in 0..3 {
                dart[cur] = Some(mat.clone());
                queue.push_back(cur);
                mat = mat.compose(&rho);
                cur = self.rho(cur);
            }
        };
        add_triangle(0, UnimodularMatrix::identity(), &mut dart, &mut queue);
        while let Some(c) = queue.pop_front() {
            let r = self.perm_s[c];
            if dart[r].is_none() {
                let m = dart[c].as_ref().expect("queued").compose(&s);
                interior[c] = true;
                interior[r] = true;
                add_triangle(r, m, &mut dart, &mut queue);
            }
        }
        let dart: Vec<UnimodularMatrix> = dart.into_iter().map(|d| d.expect("transitive")).collect();

        // Walk the boundary: from a side ending at v, pivot around v through
        // interior edges to the next side starting at v.
        let start = (0..n)
            .map(|k| {
                let mut c = 0;
                for _ in 0..k {
                    c = self.rho(c);
                }
                c
            })
            .take(3)
            .find(|&c| !interior[c])
            .unwrap_or_else(|| (0..n).find(|&c| !interior[c]).expect("polygon has sides"));
        let mut sides = vec![start];
        loop {
            let last = *sides.last().expect("nonempty");
            let mut y = self.rho(last);
            while interior[y] {
                y = self.rho(self.perm_s[y]);
            }
            if y == start || sides.len() > n {
                break;
            }
            sides.push(y);
        }
        Polygon { dart, sides }
    }
}

struct Polygon {
    /// Matrix of each coset's dart inside the polygon; the dart of `g` is the
    /// oriented Farey edge from `g(∞)` to `g(0)`.
    dart: Vec<UnimodularMatrix>,
    /// Boundary darts in walking order.
    sides: Vec<usize>,
}

impl Polygon {
    fn side_end(&self, i: usize) -> ExtendedRational {
        ExtendedRational::integer(0).transform(&self.dart[self.sides[i]])
    }
}

impl fmt::Debug for CosetRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetRepresentation")
            .field("size", &self.size())
            .field("perm_s", &self.perm_s)
            .field("perm_t", &self.perm_t)
            .finish()
    }
}
