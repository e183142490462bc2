//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modsurf::curve::{j_normalized, real_component_count, ComponentCount};
use modsurf::fibers::{chi_complex, chi_identity, enumerate_lifts, FiberType};
use modsurf::gamma::{build_gamma_k, gamma2};
use modsurf::psl2::{HalfPlanePoint, Letter, UnimodularMatrix};
use modsurf::surface::{
    comessatti_connectedness, extremal_model, hodge_invariants, ragsdale_viro_check, Connectedness,
    SurfaceModel, TopologyType,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn gamma2_invariants() -> Outcome {
    let start = Instant::now();
    let rep = gamma2().representation().clone();
    let inv = rep.invariants();
    let widths: Vec<usize> = rep.cusps().iter().map(|c| c.width).collect();
    within(Duration::from_secs(1), start)?;
    ensure(inv.index == 6, || format!("index {}", inv.index))?;
    ensure(inv.genus == 0, || format!("genus {}", inv.genus))?;
    ensure(widths == [2, 2, 2], || format!("widths {widths:?}"))?;
    ensure(inv.torsion_free, || "torsion".into())?;
    ensure(inv.s_stable, || "not S-stable".into())?;
    Ok(format!("index 6, genus 0, widths {widths:?}, torsion-free, S-stable"))
}

fn gamma2_lift_multisets() -> Outcome {
    let start = Instant::now();
    let rep = gamma2().representation().clone();
    let e = enumerate_lifts(&rep.parabolic_generator_system().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mut found = BTreeSet::new();
    for lift in &e.lifts {
        let model = SurfaceModel::new(&rep, lift).map_err(|e| e.to_string())?;
        let h = hodge_invariants(&model).map_err(|e| e.to_string())?;
        let nu = lift.configuration.star_count();
        ensure(nu % 2 == 1, || format!("even ν(I*) in {}", lift.configuration))?;
        found.insert((lift.configuration.multiset(), h.chi_o, h.h11));
    }
    within(Duration::from_secs(1), start)?;
    let expected: BTreeSet<_> = [
        (vec![FiberType::i(2), FiberType::i(2), FiberType::i_star(2)], 1, Some(10)),
        (vec![FiberType::i_star(2); 3], 2, Some(20)),
    ]
    .into_iter()
    .collect();
    ensure(found == expected, || format!("got {found:?}"))?;

    // cross-check against the hand-computed lifts
    let oracle: BTreeSet<Vec<(bool, u32)>> = common::gamma2_lift_oracle().into_iter().collect();
    let ours: BTreeSet<Vec<(bool, u32)>> = found
        .iter()
        .map(|(m, _, _)| m.iter().map(|f| (f.is_star(), f.m)).collect())
        .collect();
    ensure(oracle == ours, || "disagrees with the hand-computed lifts".into())?;
    Ok("{I2,I2,I*2} χ=1 h11=10 and {I*2,I*2,I*2} χ=2 h11=20; ν odd in every lift".into())
}

fn extremal_family() -> Outcome {
    let start = Instant::now();
    for k in 2..=12u32 {
        let kk = i64::from(k);
        let group = build_gamma_k(k).map_err(|e| format!("k={k}: {e}"))?;
        let rep = group.representation();
        let inv = rep.invariants();
        let cusps = rep.cusps();
        ensure(inv.index as i64 == 6 * (kk - 1), || format!("k={k}: μ = {}", inv.index))?;
        ensure(inv.genus == 0, || format!("k={k}: genus {}", inv.genus))?;
        ensure(cusps.len() as i64 == kk + 1, || format!("k={k}: {} cusps", cusps.len()))?;
        ensure(cusps.iter().all(|c| c.width % 2 == 0), || format!("k={k}: odd width"))?;
        let x = extremal_model(group).map_err(|e| format!("k={k}: {e}"))?;
        ensure(x.model.config().all_star(), || format!("k={k}: lift not all I*"))?;
        ensure(x.hodge.chi_o == kk, || format!("k={k}: χ = {}", x.hodge.chi_o))?;
        ensure(x.hodge.h11 == Some(10 * kk), || format!("k={k}: h11 = {:?}", x.hodge.h11))?;
        ensure(x.topology.h1 == 10 * kk && x.topology.h1_alg == 10 * kk, || {
            format!("k={k}: h1 = {}, h1_alg = {}", x.topology.h1, x.topology.h1_alg)
        })?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("k = 2..12: μ = 6(k-1), genus 0, k+1 even cusps, χ = k, h11 = h1 = h1_alg = 10k ({:?})", start.elapsed()))
}

fn topology_types() -> Outcome {
    let mut tags = Vec::new();
    for k in 2..=12u32 {
        let kk = i64::from(k);
        let x = extremal_model(build_gamma_k(k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let want = if k % 2 == 0 { TopologyType::S(5 * kk) } else { TopologyType::V(10 * kk) };
        ensure(x.topology.type_tag == want, || format!("k={k}: {} ≠ {want}", x.topology.type_tag))?;
        let h11 = x.hodge.h11.ok_or("irregular surface")?;
        let cert = comessatti_connectedness(x.topology.h1, h11, x.topology.h1_alg, true)
            .map_err(|e| e.to_string())?;
        ensure(cert == Connectedness::Connected, || format!("k={k}: {cert:?}"))?;
        ensure(x.topology.connected_components == 1, || format!("k={k}: not connected"))?;
        tags.push(x.topology.type_tag.to_string());
    }
    Ok(format!("connected, types {}", tags.join(" ")))
}

fn euler_identity() -> Outcome {
    let mut count = 0;
    for k in 2..=8u32 {
        let rep = build_gamma_k(k).map_err(|e| e.to_string())?.representation().clone();
        let mu = rep.size() as i64;
        let e = enumerate_lifts(&rep.parabolic_generator_system().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for lift in &e.lifts {
            let c = &lift.configuration;
            let nu = c.star_count() as i64;
            let sum: i64 = c.fibers().iter().map(|&f| chi_complex(f)).sum();
            let chi = chi_identity(c).map_err(|e| format!("k={k} {c}: {e}"))?;
            ensure(sum == mu + 6 * nu && sum == 12 * chi, || {
                format!("k={k} {c}: Σχ = {sum}, μ + 6ν = {}, 12χ = {}", mu + 6 * nu, 12 * chi)
            })?;
            count += 1;
        }
    }
    Ok(format!("Σχ(fibers) = μ + 6ν = 12χ on all {count} lifts, k ≤ 8"))
}

fn normal_form_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let letters = [Letter::S, Letter::T, Letter::TInv];
    for trial in 0..1000 {
        let m = loop {
            let m: i64 = rng.gen_range(-50..=50);
            if m != 0 {
                break m;
            }
        };
        let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let base = if sign > 0 { UnimodularMatrix::t_pow(m) } else { UnimodularMatrix::t_pow(m).negate() };
        let len = rng.gen_range(0..=20);
        let u = (0..len).fold(UnimodularMatrix::identity(), |acc, _| {
            acc.compose(&letters[rng.gen_range(0..3)].matrix())
        });
        let conj = u.compose(&base).compose(&u.inverse());
        let nf = conj.parabolic_normal_form().map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(nf.sign == sign && nf.shift == m.into(), || {
            format!("trial {trial}: ({sign}, {m}) came back as ({}, {})", nf.sign, nf.shift)
        })?;
    }
    Ok("1000 random conjugates of ±T^m recover (sign, shift)".into())
}

fn j_function() -> Outcome {
    // oracle values first
    let oracle_i = common::eisenstein_j(Complex64::new(0.0, 1.0)) / 1728.0;
    let oracle_2i = common::eisenstein_j(Complex64::new(0.0, 2.0)) / 1728.0;
    ensure((oracle_i - 1.0).norm() < 1e-8, || format!("oracle j(i)/1728 = {oracle_i}"))?;
    ensure((oracle_2i - 166.375).norm() < 1e-8, || format!("oracle j(2i)/1728 = {oracle_2i}"))?;

    let start = Instant::now();
    let at = |x: f64, y: f64| j_normalized(HalfPlanePoint::new(x, y).unwrap()).value();
    let (ji, j2i) = (at(0.0, 1.0), at(0.0, 2.0));
    ensure((ji - oracle_i).norm() < 1e-8 && (ji - 1.0).norm() < 1e-8, || format!("j(i)/1728 = {ji}"))?;
    ensure((j2i - oracle_2i).norm() < 1e-8 && (j2i - 166.375).norm() < 1e-8, || {
        format!("j(2i)/1728 = {j2i}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let letters = [Letter::S, Letter::T, Letter::TInv];
    let mut samples = 0;
    while samples < 200 {
        let tau = HalfPlanePoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0)).unwrap();
        let len = rng.gen_range(1..=8);
        let u = (0..len).fold(UnimodularMatrix::identity(), |acc, _| {
            acc.compose(&letters[rng.gen_range(0..3)].matrix())
        });
        let moved = tau.transform(&u);
        if moved.y() < 1e-3 {
            continue;
        }
        let (a, b) = (j_normalized(tau).value(), j_normalized(moved).value());
        ensure((a - b).norm() <= 1e-8 * a.norm().max(1.0), || format!("j({tau}) = {a}, j({moved}) = {b}"))?;
        samples += 1;
    }
    within(Duration::from_secs(1), start)?;
    Ok("j(i)/1728 = 1, j(2i)/1728 = 166.375 (Eisenstein oracle); invariant on 200 samples".into())
}

fn real_genus_one() -> Outcome {
    let tol = 1e-8;
    let square = real_component_count(Rational64::from_integer(0), 1.0, tol).map_err(|e| e.to_string())?;
    let rhombic = real_component_count(Rational64::new(1, 2), 0.5, tol).map_err(|e| e.to_string())?;
    ensure(square.components == ComponentCount::Two, || format!("τ = i: {:?}", square.components))?;
    ensure(rhombic.components == ComponentCount::One, || format!("τ = (1+i)/2: {:?}", rhombic.components))?;
    ensure((square.j - 1.0).abs() < tol && (rhombic.j - 1.0).abs() < tol, || {
        format!("j values {} and {}", square.j, rhombic.j)
    })?;
    Ok("τ = i → 2 components, τ = (1+i)/2 → 1 component, j/1728 = 1 for both".into())
}

fn ragsdale_viro_chain() -> Outcome {
    for k in 2..=12u32 {
        let x = extremal_model(build_gamma_k(k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let extremal = ragsdale_viro_check(&x.topology, &x.hodge).map_err(|e| format!("k={k}: {e}"))?;
        let h11 = x.hodge.h11.unwrap_or(-1);
        ensure(extremal && x.topology.h1_alg == x.topology.h1 && x.topology.h1 == h11, || {
            format!("k={k}: h1_alg = {}, h1 = {}, h11 = {h11}", x.topology.h1_alg, x.topology.h1)
        })?;
    }
    Ok("h1_alg = h1 = h11 for k = 2..12".into())
}

fn lift_count_report() -> Outcome {
    let rep = gamma2().representation().clone();
    let e = enumerate_lifts(&rep.parabolic_generator_system().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(e.raw_count == 4, || format!("raw count {}", e.raw_count))?;
    ensure(e.distinct_fiber_multisets == 2, || format!("distinct {}", e.distinct_fiber_multisets))?;
    ensure(e.classical_count == 2, || format!("t-1 = {}", e.classical_count))?;
    let note = e.note.ok_or("no discrepancy note")?;
    ensure(note.contains('4') && note.contains('2'), || format!("note {note:?}"))?;
    Ok(format!("raw 4, distinct 2, note: {note}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Γ(2) invariants", gamma2_invariants),
        ("Γ(2) fiber multisets", gamma2_lift_multisets),
        ("Γ_k extremal family", extremal_family),
        ("real topology types", topology_types),
        ("Euler identity on all lifts", euler_identity),
        ("parabolic normal form", normal_form_invariance),
        ("j-function", j_function),
        ("real genus-1 classification", real_genus_one),
        ("Ragsdale-Viro chain", ragsdale_viro_chain),
        ("Γ(2) lift count report", lift_count_report),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
