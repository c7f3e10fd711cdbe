use super::*;
use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(side: f64) -> Vec<Point2> {
    vec![
        Point2::new(0.0, 0.0),
        Point2::new(side, 0.0),
        Point2::new(side, side),
        Point2::new(0.0, side),
    ]
}

fn regular(n: usize, r: f64) -> Vec<Point2> {
    (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.3;
            Point2::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Nonconvex but star-shaped hexagon with a hanging-node-like straight angle.
fn awkward() -> Vec<Point2> {
    vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0, 1.0),
        Point2::new(1.0, 0.4),
        Point2::new(0.0, 1.0),
    ]
}

const ALL: [StabChoice; 4] = [
    StabChoice::L2Exact,
    StabChoice::L2Lumped,
    StabChoice::H_HALF,
    StabChoice::HHalf { l2_term: true },
];

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

#[test]
fn layout_counts() {
    let el = LocalElement::uniform(square(1.0), 1).unwrap();
    assert_eq!(build_dof_layout(&el).unwrap().len(), 4);
    let el = LocalElement::uniform(square(1.0), 3).unwrap();
    let l = build_dof_layout(&el).unwrap();
    assert_eq!(l.len(), 12);
    assert_eq!(l.len(), el.n_dofs());
    let el = LocalElement::uniform(regular(5, 1.0), 2).unwrap();
    assert_eq!(build_dof_layout(&el).unwrap().len(), 10);
}

#[test]
fn layout_positions_follow_edges() {
    let el = LocalElement::new(square(2.0), vec![1, 2, 3, 1], 2).unwrap();
    let l = build_dof_layout(&el).unwrap();
    assert_eq!(l.len(), 7);
    assert_eq!(l.edge_dofs[0], vec![0, 1]);
    assert_eq!(l.edge_dofs[1], vec![1, 4, 2]);
    assert_eq!(l.edge_dofs[2], vec![2, 5, 6, 3]);
    assert_eq!(l.edge_dofs[3], vec![3, 0]);
    assert_abs_diff_eq!(l.dofs[4].position.x, 2.0);
    assert_abs_diff_eq!(l.dofs[4].position.y, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(l.dofs[4].arc_length, 3.0, epsilon = 1e-15);
    // edge 2 runs from (2,2) to (0,2)
    assert!(l.dofs[5].position.x > l.dofs[6].position.x);
}

#[test]
fn invalid_elements_rejected() {
    assert!(LocalElement::uniform(square(1.0)[..2].to_vec(), 1).is_err());
    let mut cw = square(1.0);
    cw.reverse();
    assert!(LocalElement::uniform(cw, 1).is_err());
    assert!(LocalElement::new(square(1.0), vec![1, 0, 1, 1], 1).is_err());
    assert!(LocalElement::new(square(1.0), vec![1, 1, 1], 1).is_err());
}

#[test]
fn projector_reproduces_harmonic_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for poly in [square(1.0), regular(7, 0.3), awkward()] {
        for p in 1..=5 {
            let el = LocalElement::uniform(poly.clone(), p).unwrap();
            let layout = build_dof_layout(&el).unwrap();
            let pr = compute_projector(&el, &layout).unwrap();
            let c = nalgebra::DVector::from_fn(pr.basis.dim(), |_, _| rng.random_range(-1.0..1.0));
            let v = &pr.d * &c;
            let back = &pr.pi_poly * &v;
            assert!((back - &c).amax() < 1e-12, "p={p}");
            let ones = nalgebra::DVector::from_element(layout.len(), 1.0);
            let one = &pr.pi_poly * ones;
            assert_abs_diff_eq!(one[0], 1.0, epsilon = 1e-13);
            assert!(one.rows(1, one.len() - 1).amax() < 1e-13);
            let idem = &pr.pi_dof * &pr.pi_dof - &pr.pi_dof;
            assert!(max_abs(&idem) < 1e-11);
        }
    }
}

/// Orthogonality `a(q_k, v - Pi v) = 0`, with both terms assembled here by an independent
/// higher-order boundary quadrature of `∂_n q_k` against `v` and against `Pi v`.
#[test]
fn projector_orthogonality_against_independent_integrals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let el = LocalElement::uniform(square(1.0), 2).unwrap();
    let layout = build_dof_layout(&el).unwrap();
    let pr = compute_projector(&el, &layout).unwrap();
    let rule = gauss_legendre(12).unwrap();
    for _ in 0..10 {
        let v = nalgebra::DVector::from_fn(layout.len(), |_, _| rng.random_range(-1.0..1.0));
        let coeffs = &pr.pi_poly * &v;
        for k in 1..pr.basis.dim() {
            let mut residual = 0.0;
            for i in 0..el.n_edges() {
                let (a, b) = el.edge(i);
                let lag = EdgeLagrange::new(2).unwrap();
                let ids = &layout.edge_dofs[i];
                residual += 0.5
                    * a.dist(b)
                    * rule.integrate(|t| {
                        let x = a.lerp(b, 0.5 * (t + 1.0));
                        let dn = pr.basis.normal_derivative_trace(a, b, t).unwrap()[k];
                        let vh: f64 = lag.eval(t).iter().zip(ids).map(|(l, &id)| l * v[id]).sum();
                        dn * (vh - pr.basis.eval_poly(coeffs.as_slice(), x))
                    });
            }
            assert!(residual.abs() < 1e-12, "k={k}: {residual}");
        }
    }
}

#[test]
fn lumped_square_entries() {
    let el = LocalElement::uniform(square(1.0), 1).unwrap();
    let layout = build_dof_layout(&el).unwrap();
    let s = stab_l2_lumped(&el, &layout).unwrap();
    let h = 2f64.sqrt();
    for i in 0..4 {
        assert_abs_diff_eq!(s[(i, i)], 1.0 / h, epsilon = 1e-15);
    }
    assert_abs_diff_eq!(s.sum(), 4.0 / h, epsilon = 1e-14);
    let el = LocalElement::uniform(regular(6, 2.0), 4).unwrap();
    let layout = build_dof_layout(&el).unwrap();
    let s = stab_l2_lumped(&el, &layout).unwrap();
    assert_abs_diff_eq!(
        s.sum(),
        4.0 / el.diameter() * geometry::perimeter(&el.vertices),
        epsilon = 1e-12
    );
}

#[test]
fn exact_mass_square_entries() {
    let el = LocalElement::uniform(square(1.0), 1).unwrap();
    let layout = build_dof_layout(&el).unwrap();
    let s = stab_l2_exact(&el, &layout).unwrap();
    let h = 2f64.sqrt();
    // two hat-function edge masses meet at each vertex: 2 * 1/3, neighbors 1/6
    assert_abs_diff_eq!(s[(0, 0)], 2.0 / 3.0 / h, epsilon = 1e-15);
    assert_abs_diff_eq!(s[(0, 1)], 1.0 / 6.0 / h, epsilon = 1e-15);
    assert_abs_diff_eq!(s[(0, 2)], 0.0);
    assert_abs_diff_eq!(s.sum(), 4.0 / h, epsilon = 1e-14);
}

#[test]
fn lumped_and_exact_are_spectrally_equivalent() {
    for p in 1..=8 {
        let el = LocalElement::uniform(regular(5, 1.0), p).unwrap();
        let layout = build_dof_layout(&el).unwrap();
        let lumped = stab_l2_lumped(&el, &layout).unwrap();
        let exact = stab_l2_exact(&el, &layout).unwrap();
        // generalized eigenvalues of (exact, lumped) via the diagonal scaling of `lumped`
        let dinv = lumped.diagonal().map(|x| 1.0 / x.sqrt());
        let m = DMatrix::from_fn(layout.len(), layout.len(), |i, j| {
            dinv[i] * exact[(i, j)] * dinv[j]
        });
        let eig = m.symmetric_eigen().eigenvalues;
        assert!(eig.max() <= 1.0 + 1e-12, "p={p}: {}", eig.max());
        assert!(
            eig.min() >= MASS_LUMP_LOWER_BOUND - 1e-12,
            "p={p}: {}",
            eig.min()
        );
    }
}

#[test]
fn h_half_kernel_is_constants() {
    for (poly, p) in [(square(1.0), 1), (regular(3, 1.0), 3), (awkward(), 4)] {
        let el = LocalElement::uniform(poly, p).unwrap();
        let layout = build_dof_layout(&el).unwrap();
        let s = stab_h_half(&el, &layout, false).unwrap();
        let ones = nalgebra::DVector::from_element(layout.len(), 1.0);
        assert!((&s * &ones).amax() < 1e-12 * max_abs(&s));
        let eig = s.clone().symmetric_eigen().eigenvalues;
        let mut sorted: Vec<f64> = eig.iter().copied().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(sorted[0].abs() < 1e-12 * sorted[sorted.len() - 1]);
        assert!(sorted[1] > 1e-6 * sorted[sorted.len() - 1], "{sorted:?}");
        let with_l2 = stab_h_half(&el, &layout, true).unwrap();
        let diff = &with_l2 - &s - crate::element::stabilization_mass(&el, &layout);
        assert!(max_abs(&diff) < 1e-13);
    }
}

#[test]
fn h_half_is_scale_invariant_and_converged() {
    let poly = awkward();
    let el = LocalElement::uniform(poly.clone(), 3).unwrap();
    let layout = build_dof_layout(&el).unwrap();
    let s1 = stab_h_half(&el, &layout, false).unwrap();
    let scaled: Vec<Point2> = poly
        .iter()
        .map(|&p| p * 1e-4 + Point2::new(3.0, -1.0))
        .collect();
    let el2 = LocalElement::uniform(scaled, 3).unwrap();
    let s2 = stab_h_half(&el2, &build_dof_layout(&el2).unwrap(), false).unwrap();
    assert!(max_abs(&(&s1 - &s2)) < 1e-10 * max_abs(&s1));
}

#[test]
fn stiffness_symmetric_with_constant_kernel() {
    for stab in ALL {
        for (poly, p) in [(square(1.0), 1), (regular(7, 0.1), 4), (awkward(), 6)] {
            let el = LocalElement::uniform(poly, p).unwrap();
            let ops = local_operators(&el, stab).unwrap();
            let k = &ops.k;
            assert!(max_abs(&(k - k.transpose())) <= 1e-13 * max_abs(k));
            let ones = nalgebra::DVector::from_element(ops.layout.len(), 1.0);
            assert!((k * ones).amax() < 1e-12 * max_abs(k), "{stab}");
            let mut eig: Vec<f64> = k
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(eig[0].abs() < 1e-11 * eig[eig.len() - 1]);
            assert!(eig[1] > 1e-8 * eig[eig.len() - 1], "{stab} p={p}: {eig:?}");
        }
    }
}

#[test]
fn stiffness_is_consistent_on_harmonic_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for stab in ALL {
        for p in 1..=5 {
            let el = LocalElement::uniform(awkward(), p).unwrap();
            let ops = local_operators(&el, stab).unwrap();
            let pr = &ops.projector;
            let c = nalgebra::DVector::from_fn(pr.basis.dim(), |_, _| rng.random_range(-1.0..1.0));
            let q = &pr.d * &c;
            let n = ops.layout.len();
            let r = (DMatrix::identity(n, n) - &pr.pi_dof) * &q;
            assert!(r.amax() < 1e-11);
            // v^T K q equals the boundary integral of ∂_n q against v (rows k >= 1 of B)
            let v = nalgebra::DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let lhs = v.dot(&(&ops.k * &q));
            let rhs: f64 = (1..pr.basis.dim())
                .map(|k| c[k] * pr.b.row(k).dot(&v.transpose()))
                .sum();
            assert!(
                (lhs - rhs).abs() < 1e-11 * (1.0 + rhs.abs()),
                "{stab} p={p}: {lhs} {rhs}"
            );
        }
    }
}

#[test]
fn stiffness_is_scale_invariant() {
    let sigma: f64 = 0.5;
    for stab in ALL.into_iter().take(3) {
        let reference =
            local_stiffness(&LocalElement::uniform(awkward(), 3).unwrap(), stab).unwrap();
        for lambda in [sigma.powi(5), 1.0, 10.0] {
            let poly: Vec<Point2> = awkward()
                .iter()
                .map(|&p| p * lambda + Point2::new(-0.7, 0.2))
                .collect();
            let k = local_stiffness(&LocalElement::uniform(poly, 3).unwrap(), stab).unwrap();
            assert!(
                max_abs(&(&k - &reference)) < 1e-10 * max_abs(&reference),
                "{stab} {lambda}"
            );
        }
    }
}

/// For `p = 1` the projection's gradient is the boundary average `(1/|E|) ∮ v n ds` and its
/// constant fixes the boundary mean; the stiffness is rebuilt from these formulas alone.
#[test]
fn linear_stiffness_matches_independent_assembly() {
    for poly in [square(1.0), regular(5, 0.7), awkward()] {
        let el = LocalElement::uniform(poly.clone(), 1).unwrap();
        let n = poly.len();
        let area = geometry::signed_area(&poly);
        let perim = geometry::perimeter(&poly);
        let h = geometry::diameter(&poly);
        // vertex DoFs only; hat on vertex i has trace integral |e|/2 on both incident edges
        let mut grads = vec![Point2::default(); n];
        let mut means = vec![0.0; n];
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let len = a.dist(b);
            let nrm = outward_normal(a, b).unwrap();
            for v in [i, (i + 1) % n] {
                grads[v] += nrm * (0.5 * len / area);
                means[v] += 0.5 * len / perim;
            }
        }
        // boundary mean of a linear function x -> g.x is g.(boundary centroid)
        let mut bc = Point2::default();
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            bc += (a + b) * (0.5 * a.dist(b) / perim);
        }
        let proj = DMatrix::from_fn(n, n, |i, j| means[j] + grads[j].dot(poly[i] - bc));
        let cons = DMatrix::from_fn(n, n, |i, j| area * grads[i].dot(grads[j]));
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |i, _| {
            let prev = poly[(i + n - 1) % n].dist(poly[i]);
            let next = poly[i].dist(poly[(i + 1) % n]);
            0.5 * (prev + next) / h
        }));
        let r = DMatrix::identity(n, n) - proj;
        let oracle = cons + r.transpose() * s * &r;
        let k = local_stiffness(&el, StabChoice::L2Lumped).unwrap();
        assert!(
            max_abs(&(&k - &oracle)) < 1e-13 * max_abs(&oracle),
            "{k}\n{oracle}"
        );
    }
}

#[test]
fn degenerate_configurations() {
    // a spike whose two edges leave the tip vertex in the same direction
    let poly = vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.5, 0.0),
        Point2::new(0.0, 1.0),
    ];
    let el = LocalElement::new(poly, vec![1; 4], 1).unwrap();
    assert!(matches!(
        local_operators(&el, StabChoice::H_HALF),
        Err(Error::InvalidConfiguration(_))
    ));
}

#[test]
fn mixed_edge_degrees() {
    let el = LocalElement::new(awkward(), vec![1, 2, 3, 4, 2, 1], 2).unwrap();
    for stab in ALL {
        let ops = local_operators(&el, stab).unwrap();
        assert_eq!(ops.layout.len(), 13);
        let ones = nalgebra::DVector::from_element(13, 1.0);
        assert!((&ops.k * ones).amax() < 1e-12);
    }
}

#[test]
fn csv_dump_lists_every_entry() {
    let el = LocalElement::uniform(square(1.0), 1).unwrap();
    let ops = local_operators(&el, StabChoice::L2Lumped).unwrap();
    let csv = operators_csv(&ops, 5, true);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "element,matrix,row,col,value");
    // D 4x3, G 3x3, B 3x4, Pi_poly 3x4, Pi_dof 4x4, S 4x4, K 4x4
    assert_eq!(lines.len(), 1 + 12 + 9 + 12 + 12 + 16 + 16 + 16);
    assert!(lines[1].starts_with("5,D,0,0,"));
}

#[test]
fn stab_names_round_trip() {
    for s in ALL {
        assert_eq!(s.to_string().parse::<StabChoice>().unwrap(), s);
    }
    assert!("h1".parse::<StabChoice>().is_err());
}
