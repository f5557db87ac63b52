use dmchain::eigensolve::dense_eigenvalues;
use dmchain::model::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

// Full 2^N operator built from Kronecker products of spin-1/2 matrices.
struct Full {
    n: usize,
    m: Vec<C64>,
}

fn spin(c: char) -> [[C64; 2]; 2] {
    let z = C64::new(0.0, 0.0);
    let h = 0.5;
    // Row/column 1 is spin up, matching bit value 1.
    match c {
        'x' => [[z, C64::new(h, 0.0)], [C64::new(h, 0.0), z]],
        'y' => [[z, C64::new(0.0, h)], [C64::new(0.0, -h), z]],
        'z' => [[C64::new(-h, 0.0), z], [z, C64::new(h, 0.0)]],
        _ => unreachable!(),
    }
}

impl Full {
    fn new(n: usize) -> Self {
        Full {
            n,
            m: vec![C64::new(0.0, 0.0); 1 << (2 * n)],
        }
    }

    // Adds coef * prod_k op_k acting on the listed sites.
    fn add(&mut self, coef: f64, ops: &[(usize, char)]) {
        let dim = 1usize << self.n;
        for col in 0..dim {
            let mut row = col;
            let mut amp = C64::new(coef, 0.0);
            for &(site, c) in ops.iter().rev() {
                let s = spin(c);
                let b = row >> site & 1;
                let (nb, v) = if s[0][b] != C64::new(0.0, 0.0) { (0, s[0][b]) } else { (1, s[1][b]) };
                amp *= v;
                row = (row & !(1 << site)) | (nb << site);
            }
            self.m[row * dim + col] += amp;
        }
    }
}

fn reference(n: usize, p: &CouplingParams, h: &[f64], bc: BoundaryCondition) -> Full {
    let mut f = Full::new(n);
    for (a, b) in bc.bonds(n) {
        for c in ['x', 'y', 'z'] {
            f.add(p.j, &[(a, c), (b, c)]);
        }
        f.add(p.d, &[(a, 'x'), (b, 'y')]);
        f.add(-p.d, &[(a, 'y'), (b, 'x')]);
    }
    for (a, b, c) in bc.triples(n) {
        f.add(2.0 * p.d_prime, &[(a, 'x'), (b, 'z'), (c, 'y')]);
        f.add(-2.0 * p.d_prime, &[(a, 'y'), (b, 'z'), (c, 'x')]);
    }
    for (k, &hk) in h.iter().enumerate() {
        f.add(hk, &[(k, 'z')]);
    }
    f
}

fn compare(n: usize, p: CouplingParams, seed: u64, bc: BoundaryCondition) {
    let basis = enumerate_sector(n, Magnetization::ZERO).unwrap();
    let field = sample_disorder(2.5, n, seed).unwrap();
    let op = build_hamiltonian(&p, &field, &basis, bc).unwrap();
    let full = reference(n, &p, field.values(), bc);
    let big = 1usize << n;
    for (i, &si) in basis.states().iter().enumerate() {
        for (j, &sj) in basis.states().iter().enumerate() {
            let want = full.m[si as usize * big + sj as usize];
            let got = op.get(i, j);
            assert!((want - got).norm() < 1e-13, "N={n} {bc} ({si:b},{sj:b}): {got} vs {want}");
        }
    }
    // Nothing leaks out of the sector.
    for &sj in basis.states() {
        for row in 0..big {
            if (row as u32).count_ones() as usize != n / 2 {
                assert!(full.m[row * big + sj as usize].norm() < 1e-14);
            }
        }
    }
}

#[test]
fn matches_kronecker_construction() {
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Open] {
        compare(6, CouplingParams::heisenberg(), 1, bc);
        compare(6, CouplingParams::dm(0.5, 0.0).unwrap(), 2, bc);
        compare(6, CouplingParams::dm(0.0, 0.5).unwrap(), 3, bc);
        compare(8, CouplingParams::new(1.3, 0.7, 0.4).unwrap(), 4, bc);
    }
}

#[test]
fn four_site_ring_ground_state() {
    let basis = enumerate_sector(4, Magnetization::ZERO).unwrap();
    let op = build_hamiltonian(&CouplingParams::heisenberg(), &DisorderField::zeros(4), &basis, BoundaryCondition::Periodic).unwrap();
    let e = dense_eigenvalues(&op).unwrap();
    assert!((e[0] + 2.0).abs() < 1e-12, "{e:?}");
}

#[test]
fn sector_dimensions() {
    for (n, d) in [(8, 70), (10, 252), (12, 924), (14, 3432), (16, 12870)] {
        assert_eq!(enumerate_sector(n, Magnetization::ZERO).unwrap().dim(), d);
    }
}

#[test]
fn open_chain_drops_wrapping_terms() {
    let n = 8;
    let basis = enumerate_sector(n, Magnetization::ZERO).unwrap();
    let field = sample_disorder(1.0, n, 9).unwrap();
    let p = CouplingParams::dm(0.5, 0.5).unwrap();
    let pbc = build_hamiltonian(&p, &field, &basis, BoundaryCondition::Periodic).unwrap();
    let obc = build_hamiltonian(&p, &field, &basis, BoundaryCondition::Open).unwrap();
    assert!(obc.nnz() < pbc.nnz());
    // These differ by flipping sites 0 and N-1, coupled only through the wrapping bond.
    let s = basis.index_of(0b1000_1110).unwrap();
    let t = basis.index_of(0b0000_1111).unwrap();
    assert!(pbc.get(s, t).norm() > 0.1);
    assert_eq!(obc.get(s, t).norm(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hermitian_and_real_without_dm(seed in any::<u64>(), d in 0.0f64..1.0, dp in 0.0f64..1.0, periodic in any::<bool>()) {
        let n = 8;
        let bc = if periodic { BoundaryCondition::Periodic } else { BoundaryCondition::Open };
        let basis = enumerate_sector(n, Magnetization::ZERO).unwrap();
        let field = sample_disorder(4.0, n, seed).unwrap();
        let op = build_hamiltonian(&CouplingParams::dm(d, dp).unwrap(), &field, &basis, bc).unwrap();
        prop_assert!(op.hermiticity_error() < 1e-14);
        let plain = build_hamiltonian(&CouplingParams::heisenberg(), &field, &basis, bc).unwrap();
        prop_assert!(plain.is_real());
        // DM terms are traceless off-diagonal hoppings.
        prop_assert!((op.trace() - plain.trace()).abs() < 1e-12);
    }

    #[test]
    fn disorder_within_box(seed in any::<u64>(), h in 0.1f64..12.0) {
        let f = sample_disorder(h, 14, seed).unwrap();
        prop_assert!(f.values().iter().all(|v| v.abs() <= h));
        let again = sample_disorder(h, 14, seed).unwrap();
        prop_assert_eq!(f.values(), again.values());
    }
}
