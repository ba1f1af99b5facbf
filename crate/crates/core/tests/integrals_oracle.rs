mod common;

use tdhf_core::integrals::{
    attraction_matrix, build_basis, core_hamiltonian, eri_tensor, kinetic_matrix, overlap_matrix, Atom, BasisName,
    BasisSet, Molecule, Shell,
};
use tdhf_core::RMatrix;

fn single(a: f64, centre: [f64; 3]) -> Shell {
    Shell::new(centre, &[(a, 1.0)]).unwrap()
}

fn h2(r: f64) -> Molecule {
    Molecule::new(vec![
        Atom { atomic_number: 1, position: [0.0, 0.0, 0.0] },
        Atom { atomic_number: 1, position: [0.0, 0.0, r] },
    ])
    .unwrap()
}

fn max_diff(a: &RMatrix, b: &RMatrix) -> f64 {
    (a - b).amax()
}

#[test]
fn primitive_pairs_match_quadrature() {
    let shells = vec![single(0.8, [0.1, -0.3, 0.2]), single(1.7, [0.9, 0.4, -0.5]), single(0.35, [-0.6, 0.2, 1.1])];
    let basis = BasisSet::new(shells);
    let charges = Molecule::with_charges(vec![(1.0, [0.2, 0.1, 0.0]), (2.0, [-0.4, 0.5, 0.9])]);
    let prims = common::contracted(&basis);

    let s = overlap_matrix(&basis);
    let t = kinetic_matrix(&basis);
    let v = attraction_matrix(&basis, &charges);
    for i in 0..3 {
        for j in 0..3 {
            let (p, q) = (&prims[i][0], &prims[j][0]);
            assert!((s[(i, j)] - common::prim_overlap(p, q)).abs() < 1e-10, "S {i}{j}");
            assert!((t[(i, j)] - common::prim_kinetic(p, q)).abs() < 1e-10, "T {i}{j}");
            let vq: f64 = charges.centres.iter().map(|&(z, c)| -z * common::prim_coulomb_point(p, q, c)).sum();
            assert!((v[(i, j)] - vq).abs() < 1e-10, "V {i}{j}: {} vs {vq}", v[(i, j)]);
        }
    }

    let eri = eri_tensor(&basis);
    for (i, j, k, l) in [(0, 0, 0, 0), (0, 1, 2, 1), (2, 2, 0, 1), (1, 2, 1, 2), (0, 2, 2, 2)] {
        let q = common::prim_eri(&prims[i][0], &prims[j][0], &prims[k][0], &prims[l][0]);
        assert!((eri.get(i, j, k, l) - q).abs() < 1e-10, "({i}{j}|{k}{l}): {} vs {q}", eri.get(i, j, k, l));
    }
}

#[test]
fn contracted_h2_matches_quadrature() {
    for name in [BasisName::Sto3g, BasisName::SixThirtyOneG] {
        let mol = h2(1.3871);
        let basis = build_basis(&mol, name).unwrap();
        assert!(max_diff(&overlap_matrix(&basis), &common::overlap(&basis)) < 1e-10);
        assert!(max_diff(&core_hamiltonian(&basis, &mol.charges()), &common::hcore(&basis, &mol)) < 1e-9);
    }
    let mol = h2(1.3871);
    let basis = build_basis(&mol, BasisName::Sto3g).unwrap();
    let eri = eri_tensor(&basis);
    for (i, j, k, l) in [(0, 0, 0, 0), (0, 0, 1, 1), (0, 1, 0, 1), (0, 0, 0, 1)] {
        assert!((eri.get(i, j, k, l) - common::eri(&basis, i, j, k, l)).abs() < 1e-9);
    }
}

#[test]
fn sto3g_h2_reference_values() {
    // minimal-basis H2 at 1.4 bohr: S12 = 0.6593, T11 = 0.7600, (11|11) = 0.7746
    let mol = h2(1.4);
    let basis = build_basis(&mol, BasisName::Sto3g).unwrap();
    let s = overlap_matrix(&basis);
    let t = kinetic_matrix(&basis);
    let eri = eri_tensor(&basis);
    assert!((s[(0, 1)] - 0.6593).abs() < 1e-4);
    assert!((t[(0, 0)] - 0.7600).abs() < 1e-4);
    assert!((eri.get(0, 0, 0, 0) - 0.7746).abs() < 1e-4);
    assert!((eri.get(0, 0, 1, 1) - 0.5697).abs() < 1e-4);
}
