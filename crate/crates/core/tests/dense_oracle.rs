use hexsearch::dense::{self, CMatrix};
use hexsearch::search::{self, ModeSpec, SearchMode};
use hexsearch::spectral;
use hexsearch::walk::{OracleControl, SearchTarget, TulsiParams};
use hexsearch::LatticeConfig;
use nalgebra::DVector;
use num_complex::Complex64;

fn support_probability(v: &DVector<Complex64>, target: &SearchTarget, dim: usize) -> f64 {
    v.as_slice()
        .chunks(dim)
        .map(|r| {
            target
                .support()
                .iter()
                .map(|&i| r[i].norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

#[test]
fn search_probability_matches_matrix_powers() {
    let cfg = LatticeConfig::new(4).unwrap();
    let target = SearchTarget::new(cfg, 2, 1).unwrap();
    let up = dense::direct_search(cfg, &target);
    let steps = 80;
    let run = search::run_search(cfg, &target, SearchMode::Akr, steps).unwrap();
    let mut v = DVector::from_element(
        cfg.dim(),
        Complex64::new(1.0 / (cfg.dim() as f64).sqrt(), 0.0),
    );
    let t = DVector::from_vec(target.vector(cfg));
    for point in &run.series {
        let p = support_probability(&v, &target, cfg.dim());
        let o = t.dotc(&v).norm_sqr();
        assert!((p - point.p_support).abs() < 1e-10, "t = {}", point.t);
        assert!((o - point.overlap_sq).abs() < 1e-10, "t = {}", point.t);
        v = &up * v;
    }
}

#[test]
fn extended_search_matches_matrix_powers() {
    for ctrl in [OracleControl::Zero, OracleControl::One] {
        let cfg = LatticeConfig::new(3).unwrap();
        let target = SearchTarget::new(cfg, 0, 2).unwrap();
        let params = TulsiParams::new(0.61, ctrl).unwrap();
        let op = dense::direct_tulsi(cfg, &target, &params);
        let run = search::run_search(cfg, &target, SearchMode::Tulsi(params), 60).unwrap();
        let dim = cfg.dim();
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let mut v = DVector::from_fn(2 * dim, |i, _| {
            if i < dim {
                Complex64::new(0.0, 0.0)
            } else {
                amp
            }
        });
        for point in &run.series {
            let p = support_probability(&v, &target, dim);
            assert!(
                (p - point.p_support).abs() < 1e-10,
                "{ctrl:?} t = {}",
                point.t
            );
            v = &op * v;
        }
    }
}

#[test]
fn dense_spectrum_is_union_of_numeric_block_spectra() {
    let cfg = LatticeConfig::new(2).unwrap();
    let u = dense::direct_unperturbed(cfg);
    let numeric = dense::eigenvalues(&u);
    let blocks: Vec<Complex64> = cfg
        .kpoints()
        .flat_map(|k| spectral::build_kblock(k).eigenvalues())
        .collect();
    assert!(dense::multiset_distance(&blocks, &numeric).unwrap() < 1e-10);
}

#[test]
fn dense_spectra_of_search_operators_lie_on_unit_circle() {
    for m in [2, 3] {
        let cfg = LatticeConfig::new(m).unwrap();
        let target = SearchTarget::new(cfg, 0, 0).unwrap();
        let mats: [CMatrix; 2] = [
            dense::direct_search(cfg, &target),
            dense::direct_tulsi(
                cfg,
                &target,
                &TulsiParams::new(0.4, OracleControl::Zero).unwrap(),
            ),
        ];
        for mat in &mats {
            for z in dense::eigenvalues(mat) {
                assert!((z.norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn sweep_matches_individual_runs() {
    let sizes = [4, 5, 6, 7];
    let runs = search::run_sweep(&sizes, ModeSpec::tulsi(), (0, 0)).unwrap();
    for (m, run) in sizes.iter().zip(&runs) {
        let cfg = LatticeConfig::new(*m).unwrap();
        let mode = ModeSpec::tulsi().resolve(cfg).unwrap();
        let single = search::run_search(
            cfg,
            &SearchTarget::new(cfg, 0, 0).unwrap(),
            mode,
            search::default_window(cfg).unwrap(),
        )
        .unwrap();
        assert_eq!(&single, run);
    }
    let again = search::run_sweep(&sizes, ModeSpec::tulsi(), (0, 0)).unwrap();
    assert_eq!(runs, again);
    assert_eq!(
        search::fit_scaling(&runs).unwrap(),
        search::fit_scaling(&again).unwrap()
    );
}

#[test]
fn single_vertex_coin_form_distance_is_reported() {
    for m in [2, 3] {
        let cfg = LatticeConfig::new(m).unwrap();
        let target = SearchTarget::new(cfg, 0, 0).unwrap();
        let d = dense::single_vertex_probe(cfg, &target);
        println!("m = {m}: ‖S·C′ − U·R_t‖ = {d:.6}");
        assert!(d.is_finite());
        let sv = dense::single_vertex_search(cfg, &target);
        assert!(dense::unitarity_defect(&sv) < 1e-12);
    }
}
