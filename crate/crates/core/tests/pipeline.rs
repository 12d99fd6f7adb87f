//! End-to-end use of the public API: text in, rankings and sweeps out.

use ctqw_rank::experiments::sweep::{run_sweep, ExperimentManifest};
use ctqw_rank::graph::parse_edge_list;
use ctqw_rank::metrics::agreement;
use ctqw_rank::quantum::QuantumMethod;
use ctqw_rank::{pagerank, rank, Mode, Ranking, DEFAULT_ALPHA, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[test]
fn parsed_path_matches_reference_hub_scores() {
    let g = parse_edge_list("# path\n1 2\n2 3\n3 4\n", None)
        .unwrap()
        .graph;
    let c = rank(&g, &QuantumMethod::CqPrW.spec(Mode::Hub, DEFAULT_ALPHA)).unwrap();
    let expected = [0.4479, 0.3147, 0.1636, 0.0737];
    for (got, want) in c.values.iter().zip(expected) {
        assert!((got - want).abs() < 5e-4, "{got} vs {want}");
    }
    // authority scores of a path are its hub scores read backwards
    let auth = rank(
        &g,
        &QuantumMethod::CqPrW.spec(Mode::Authority, DEFAULT_ALPHA),
    )
    .unwrap();
    for i in 0..4 {
        assert!((auth.values[i] - c.values[3 - i]).abs() < 1e-12);
    }
    let pr = pagerank(&g, DEFAULT_ALPHA, Mode::Hub, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let report = agreement(&c.values, &pr.values).unwrap();
    assert_eq!((report.f1, report.f10, report.tau), (1.0, 4.0, 1.0));
}

#[test]
fn isolated_trailing_nodes_need_a_header() {
    let g = parse_edge_list("n=6\n1 2\n2 3\n", None).unwrap().graph;
    assert_eq!(g.node_count(), 6);
    assert!(!g.is_weakly_connected());
    // still ranks; isolated nodes share the lowest hub level
    let c = rank(&g, &QuantumMethod::CqHitsW.spec(Mode::Hub, DEFAULT_ALPHA)).unwrap();
    assert!((c.total() - 1.0).abs() < 1e-12);
    let groups = Ranking::new(&c.values).unwrap().tie_groups();
    assert_eq!(groups.last().unwrap(), &vec![2, 3, 4, 5]);
}

#[test]
fn manifest_file_drives_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    std::fs::write(
        &path,
        "base_seed = 11\nsizes = [16, 24]\ngraphs_per_size = [3, 2]\nmodes = [\"authority\"]\n\
         [generator]\nkind = \"scale_free\"\nalpha = 0.557\nbeta = 0.136\ngamma = 0.307\n",
    )
    .unwrap();
    let m = ExperimentManifest::from_path(&path).unwrap();
    let res = run_sweep(&m).unwrap();
    assert_eq!(res.rows.len(), 2 * 4);
    assert!(res.rows.iter().all(|r| r.mode == "authority"));
    let written = res.write_outputs(&dir.path().join("out")).unwrap();
    assert_eq!(
        std::fs::read_to_string(&written[0]).unwrap(),
        run_sweep(&m).unwrap().to_csv_string().unwrap()
    );
}
