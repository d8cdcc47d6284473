use approx::assert_relative_eq;
use hexacarpet::analysis::{
    build_symmetrized_flows, compose_flow, cut_bound, estimate_rho, fit_ratio, hexacarpet_resistance,
    potential_decomposition, short_bound, spectral_dimension, verify_duality, verify_multiplicative,
    y_decomposition, ResistanceTable,
};
use hexacarpet::{SimplicialComplex, SolverOptions};

fn tight() -> SolverOptions {
    SolverOptions::with_tol(1e-13)
}

#[test]
fn level_one_closed_forms() {
    let c = SimplicialComplex::build(1).unwrap();
    let table = ResistanceTable::compute(&c, 1, &tight()).unwrap();
    assert_relative_eq!(table.r(1), 1.5, max_relative = 1e-12);
    assert_relative_eq!(table.r_t(1), 2.0 / 3.0, max_relative = 1e-12);
}

#[test]
fn duality_through_level_four() {
    let c = SimplicialComplex::build(4).unwrap();
    for n in 1..=4 {
        let rep = verify_duality(&c, n, &tight(), 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}

#[test]
fn multiplicative_bounds_through_level_four() {
    let c = SimplicialComplex::build(4).unwrap();
    let table = ResistanceTable::compute(&c, 4, &tight()).unwrap();
    for m in 1..4 {
        for n in 1..=4 - m {
            let rep = verify_multiplicative(&table, m, n, 1e-8).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }
    assert!(verify_multiplicative(&table, 2, 3, 1e-8).is_err());
    assert!(verify_multiplicative(&table, 0, 1, 1e-8).is_err());
}

#[test]
fn symmetrized_flows_are_unit_flows() {
    let c = SimplicialComplex::build(2).unwrap();
    for n in 1..=2 {
        let res = hexacarpet_resistance(&c, n, &tight()).unwrap();
        let triple = build_symmetrized_flows(&c, n, &res.flow).unwrap();
        for (e, f) in triple.energies.iter().zip(triple.fluxes) {
            assert_relative_eq!(*e, res.value().unwrap(), max_relative = 1e-10);
            assert_relative_eq!(f, 1.0, max_relative = 1e-10);
        }
    }
}

#[test]
fn composed_flows_obey_the_product_bound() {
    let c = SimplicialComplex::build(3).unwrap();
    for (m, n) in [(1, 1), (1, 2), (2, 1)] {
        let im = hexacarpet_resistance(&c, m, &tight()).unwrap();
        let inn = hexacarpet_resistance(&c, n, &tight()).unwrap();
        let triple = build_symmetrized_flows(&c, n, &inn.flow).unwrap();
        let ydec = y_decomposition(&c, m, &im.flow).unwrap();
        assert_eq!(ydec.sign_violations(1e-12), 0);
        assert_relative_eq!(ydec.energy(), im.value().unwrap(), max_relative = 1e-10);
        let j = compose_flow(&c, m, n, &triple, &ydec).unwrap();
        assert!(j.max_interior_divergence < 1e-10, "{m} {n}");
        assert_relative_eq!(j.flux, 1.0, max_relative = 1e-9);
        let bound = 4.0 / 3.0 * im.value().unwrap() * inn.value().unwrap();
        assert!(j.energy <= bound + 1e-10, "{m} {n}: {} > {bound}", j.energy);
        let r_mn = hexacarpet_resistance(&c, m + n, &tight()).unwrap().value().unwrap();
        assert!(r_mn <= j.energy + 1e-10);
    }
}

#[test]
fn potential_decomposition_levels_two_and_three() {
    let c = SimplicialComplex::build(3).unwrap();
    for n in 2..=3 {
        let d = potential_decomposition(&c, n, &tight()).unwrap();
        assert!(d.u_symmetric && d.flip_is_isometry);
        assert!(d.cross.abs() <= 1e-8 * d.energy_u);
        assert!(d.identity_gap <= 1e-8);
        assert!(d.flip_gap <= 1e-9);
        assert_relative_eq!(d.energy_v, d.energy_w, max_relative = 1e-9);
    }
}

#[test]
fn cut_bounds_through_level_four() {
    let c = SimplicialComplex::build(4).unwrap();
    let table = ResistanceTable::compute(&c, 4, &tight()).unwrap();
    for n in 1..=4 {
        let prev = (n > 1).then(|| table.r(n - 1));
        let rep = cut_bound(&c, n, table.r(n), prev, &tight()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.total_length, 6usize.pow(n as u32));
    }
}

#[test]
fn short_ratios_settle_at_five_quarters() {
    let c = SimplicialComplex::build(4).unwrap();
    let table = ResistanceTable::compute(&c, 4, &tight()).unwrap();
    let rep = short_bound(&c, &table, &tight(), 1e-3).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_relative_eq!(rep.levels[0].r_tilde, 15.0 / 16.0, max_relative = 1e-10);
    assert!(rep.constant > 0.0);
}

#[test]
fn scaling_sweep_shape() {
    let c = SimplicialComplex::build(4).unwrap();
    let rep = estimate_rho(&c, 4, &SolverOptions::default()).unwrap();
    assert_eq!(rep.rows.len(), 4);
    let csv = rep.to_csv();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("n,R_n,R_n_T,product,R_hat,R_tilde,ratio,fit_rho,d_S\n"));
    assert!(rep.rows[0].ratio.is_none() && rep.rows[1].fit_rho.is_none());
    assert!(rep.rho_fit > 1.25 && rep.rho_fit < 1.5);
    assert_relative_eq!(rep.rho_fit * rep.rho_t_fit, 1.0, max_relative = 1e-6);
    assert!(estimate_rho(&c, 2, &SolverOptions::default()).is_err());
}

#[test]
fn spectral_dimension_and_fit() {
    assert_relative_eq!(spectral_dimension(1.0), 2.0, max_relative = 1e-15);
    let pts: Vec<_> = (1..6).map(|n| (n, 0.7 * 1.25f64.powi(n as i32))).collect();
    assert_relative_eq!(fit_ratio(&pts).unwrap(), 1.25, max_relative = 1e-12);
}
