//! The congruence group Γ(2) and the family `Γ_k ⊂ Γ(2)` of index `6(k-1)`.
//!
//! `Γ_k` is the group whose fundamental domain is the strip `|Re z| ≤ k-1`
//! with the half-disks of radius 1/2 centred at `±(j - 1/2)` removed. Its
//! sides are paired by `T^{2(k-1)}` (the two vertical sides) and by
//!
//! ```text
//! g_j = (2j-1  2j(j-1); 2  2j-1),   j = 1..k-1,
//! ```
//!
//! which maps the arc over `[-j, -(j-1)]` onto the arc over `[j-1, j]` with
//! `-j ↦ j` and `-(j-1) ↦ j-1`. Each `g_j` satisfies `S(g_j) = g_j⁻¹`.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::psl2::{ExtendedRational, UnimodularMatrix};
use crate::subgroup::{CosetRepresentation, DEFAULT_COSET_BUDGET};

#[derive(Clone, Debug)]
pub struct GammaK {
    k: u32,
    generators: Vec<UnimodularMatrix>,
    representation: CosetRepresentation,
}

/// Mod-2 pattern `a ≡ d ≡ 1`, `b ≡ c ≡ 0` of Γ(2); insensitive to sign.
pub fn gamma2_congruence_test(a: &UnimodularMatrix) -> bool {
    let odd = |x: &BigInt| x.is_odd();
    odd(a.a()) && odd(a.d()) && a.b().is_even() && a.c().is_even()
}

/// The side pairing of the `j`-th pair of arcs.
pub fn arc_pairing(j: u32) -> UnimodularMatrix {
    let j = i64::from(j);
    UnimodularMatrix::from_i64([2 * j - 1, 2 * j * (j - 1), 2, 2 * j - 1])
}

/// The principal congruence subgroup of level 2 (equal to `Γ_2`).
pub fn gamma2() -> GammaK {
    build_gamma_k(2).expect("k = 2 is valid")
}

/// Builds `Γ_k` and checks every structural claim about it.
pub fn build_gamma_k(k: u32) -> Result<GammaK> {
    build_gamma_k_with_budget(k, DEFAULT_COSET_BUDGET)
}

pub fn build_gamma_k_with_budget(k: u32, budget: usize) -> Result<GammaK> {
    if k < 2 {
        return Err(Error::Precondition(format!("k must be at least 2, got {k}")));
    }
    let mut generators = vec![UnimodularMatrix::t_pow(2 * i64::from(k - 1))];
    generators.extend((1..k).map(arc_pairing));

    for (j, g) in (1..k).zip(&generators[1..]) {
        let j = i64::from(j);
        let left = (ExtendedRational::integer(-j), ExtendedRational::integer(-(j - 1)));
        let right = (ExtendedRational::integer(j), ExtendedRational::integer(j - 1));
        if left.0.transform(g) != right.0 || left.1.transform(g) != right.1 {
            return Err(Error::Inconsistent(format!("g_{j} does not pair the arcs")));
        }
        if g.s_involution() != g.inverse() {
            return Err(Error::Inconsistent(format!("S(g_{j}) ≠ g_{j}⁻¹")));
        }
    }
    if let Some(g) = generators.iter().find(|g| !gamma2_congruence_test(g)) {
        return Err(Error::Inconsistent(format!("{g} is not in Γ(2)")));
    }

    let representation = CosetRepresentation::from_generators(&generators, budget)?;
    let group = GammaK {
        k,
        generators,
        representation,
    };
    group.verify()?;
    Ok(group)
}

impl GammaK {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn generators(&self) -> &[UnimodularMatrix] {
        &self.generators
    }

    pub fn representation(&self) -> &CosetRepresentation {
        &self.representation
    }

    /// Hard checks: index, genus, cusp count, widths, torsion, symmetry.
    fn verify(&self) -> Result<()> {
        let k = self.k as usize;
        let inv = self.representation.invariants();
        let cusps = self.representation.cusps();
        let mut failures = Vec::new();
        if inv.index != 6 * (k - 1) {
            failures.push(format!("index {} ≠ {}", inv.index, 6 * (k - 1)));
        }
        if inv.genus != 0 {
            failures.push(format!("genus {} ≠ 0", inv.genus));
        }
        if inv.cusps != k + 1 {
            failures.push(format!("{} cusps ≠ {}", inv.cusps, k + 1));
        }
        if cusps.iter().any(|c| c.width % 2 != 0) {
            failures.push("odd cusp width".into());
        }
        if !inv.torsion_free {
            failures.push("torsion".into());
        }
        if !inv.s_stable {
            failures.push("not stable under the involution".into());
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!(
                "Γ_{} fails its checks: {}",
                self.k,
                failures.join(", ")
            )))
        }
    }

    /// Cusp representatives `∞, 0, 1, …, k-1`, one per class.
    pub fn expected_cusp_representatives(&self) -> Vec<ExtendedRational> {
        std::iter::once(ExtendedRational::Infinity)
            .chain((0..self.k as i64).map(ExtendedRational::integer))
            .collect()
    }
}
