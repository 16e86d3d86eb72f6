//! Exhaustive window checks for the Lie algebra layer: antisymmetry,
//! Jacobi, the rescaled-basis isomorphism, and the automorphism laws.

use gapvira::algebra::{jacobi_residual, AlgebraId, Family, Gen, LieElement};
use gapvira::rescaled::{from_rescaled, RescaledElement, RescaledGen};

/// All basis generators of one algebra with |integer index| bounded.
fn basis(alg: AlgebraId, bound: i64) -> Vec<Gen> {
    let p = alg.p();
    let mut out = Vec::new();
    match alg.family() {
        Family::Gap => {
            for m in -bound..=bound {
                out.push(Gen::L(m));
            }
            for i in 0..=(p / 2) {
                out.push(Gen::C(i));
            }
        }
        Family::Np => {
            for m in -bound..=bound {
                out.push(Gen::T(m));
            }
            for i in 1..p {
                for m in -bound..=bound {
                    out.push(Gen::N(i, m));
                }
            }
            for i in 0..=(p / 2) {
                out.push(Gen::K(i));
            }
        }
    }
    out
}

fn rescaled_basis(alg: AlgebraId, bound: i64) -> Vec<RescaledGen> {
    let p = alg.p();
    let mut out = Vec::new();
    for m in -bound..=bound {
        out.push(RescaledGen::LHat(m));
    }
    for i in 1..p {
        for m in -bound..=bound {
            out.push(RescaledGen::IHat(i, m));
        }
    }
    for i in 0..=(p / 2) {
        out.push(RescaledGen::CBar(i));
    }
    out
}

fn algebras(p: u32) -> [AlgebraId; 2] {
    [AlgebraId::gap(p).unwrap(), AlgebraId::np(p).unwrap()]
}

#[test]
fn bracket_is_antisymmetric_on_the_window() {
    for p in 2..=5u32 {
        for alg in algebras(p) {
            let gens = basis(alg, 8);
            for &a in &gens {
                let xa = LieElement::generator(alg, a).unwrap();
                for &b in &gens {
                    let xb = LieElement::generator(alg, b).unwrap();
                    let fwd = xa.bracket(&xb).unwrap();
                    let bwd = xb.bracket(&xa).unwrap();
                    assert!(
                        fwd.add(&bwd).unwrap().is_zero(),
                        "[{a},{b}] + [{b},{a}] != 0 for p={p}"
                    );
                }
            }
        }
    }
}

#[test]
fn jacobi_residual_vanishes_on_the_window() {
    for p in 2..=5u32 {
        for alg in algebras(p) {
            let gens = basis(alg, 5);
            let elems: Vec<LieElement> = gens
                .iter()
                .map(|&g| LieElement::generator(alg, g).unwrap())
                .collect();
            for (i, x) in elems.iter().enumerate() {
                for (j, y) in elems.iter().enumerate() {
                    for (k, z) in elems.iter().enumerate() {
                        let res = jacobi_residual(x, y, z).unwrap();
                        assert!(
                            res.is_zero(),
                            "jacobi residual nonzero at p={p}, triple ({}, {}, {})",
                            gens[i],
                            gens[j],
                            gens[k]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn rescaled_bracket_matches_pulled_back_bracket() {
    for p in 2..=5u32 {
        let alg = AlgebraId::gap(p).unwrap();
        let gens = rescaled_basis(alg, 6);
        for &a in &gens {
            let ra = RescaledElement::generator(alg, a).unwrap();
            let ua = from_rescaled(&ra).unwrap();
            for &b in &gens {
                let rb = RescaledElement::generator(alg, b).unwrap();
                let ub = from_rescaled(&rb).unwrap();
                let via_rescaled = from_rescaled(&ra.bracket(&rb).unwrap()).unwrap();
                let via_gap = ua.bracket(&ub).unwrap();
                assert_eq!(
                    via_rescaled, via_gap,
                    "[{a},{b}] disagrees between the bases at p={p}"
                );
            }
        }
    }
}

#[test]
fn round_trip_through_the_rescaled_basis_is_identity() {
    for p in 2..=5u32 {
        let alg = AlgebraId::gap(p).unwrap();
        for g in basis(alg, 8) {
            let x = LieElement::generator(alg, g).unwrap();
            let back = from_rescaled(&gapvira::rescaled::to_rescaled(&x).unwrap()).unwrap();
            assert_eq!(back, x);
        }
    }
}

#[test]
fn sigma_is_an_automorphism_on_the_window() {
    for p in 2..=5u32 {
        let alg = AlgebraId::np(p).unwrap();
        let gens = basis(alg, 6);
        for &a in &gens {
            let xa = LieElement::generator(alg, a).unwrap();
            for &b in &gens {
                let xb = LieElement::generator(alg, b).unwrap();
                let lhs = xa.sigma().unwrap().bracket(&xb.sigma().unwrap()).unwrap();
                let rhs = xa.bracket(&xb).unwrap().sigma().unwrap();
                assert_eq!(lhs, rhs, "sigma breaks on [{a},{b}] at p={p}");
            }
        }
    }
}

#[test]
fn sigma_has_order_p_on_every_generator() {
    for p in 2..=5u32 {
        let alg = AlgebraId::np(p).unwrap();
        for g in basis(alg, 6) {
            let x = LieElement::generator(alg, g).unwrap();
            let mut y = x.clone();
            for _ in 0..p {
                y = y.sigma().unwrap();
            }
            assert_eq!(y, x);
        }
    }
}
