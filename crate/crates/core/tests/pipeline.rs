use std::fs;

use hoinet::io::{
    read_dataset, read_result_json, write_dataset, write_result, Dataset, ResultDocument,
};
use hoinet::netinfer::{analyze_dynamic, analyze_static, confusion, AnalysisMode, DynamicOptions};
use hoinet::seed::stream_rng;
use hoinet::significance::{LinkClass, SurrogateConfig, SurrogateMethod};
use hoinet::simgen::{
    gen_binary10, gen_three_node_static, gen_var_stars, Binary10Params, StarStructure,
    ThreeNodeStaticParams, VarStarsParams,
};

#[test]
fn binary10_dataset_survives_disk_and_recovers_edges() {
    let g = gen_binary10(&Binary10Params {
        n: 1000,
        seed: 11,
        ..Binary10Params::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("binary10.csv");
    write_dataset(&path, &Dataset::Symbols(g.dataset.clone())).unwrap();
    let Dataset::Symbols(back) = read_dataset(&path, AnalysisMode::Static).unwrap() else {
        panic!("expected symbols");
    };
    assert_eq!(back.columns(), g.dataset.columns());

    let cfg = SurrogateConfig {
        master_seed: 5,
        ..SurrogateConfig::default()
    };
    let result = analyze_static(&back, &cfg).unwrap();
    let c = confusion(&g.truth, &result.adjacency);
    assert!(c.sensitivity() >= 0.75, "{c:?}");
    assert!(c.specificity() >= 0.9, "{c:?}");
    // S9 and S10 form an isolated pair: nothing else explains their dependence
    assert_eq!(result.link(8, 9).unwrap().link_class, LinkClass::Connected);
}

#[test]
fn common_target_motif_gives_negative_b() {
    // S1 and S2 are independent but both drive S3
    let params = ThreeNodeStaticParams {
        alpha: 0.5,
        beta: 0.9,
        gamma: 1.0,
    };
    let mut rng = stream_rng(21, 0);
    let g = gen_three_node_static(&params, 3000, &mut rng).unwrap();
    let cfg = SurrogateConfig {
        master_seed: 3,
        ..SurrogateConfig::default()
    };
    let r = analyze_static(&g.dataset, &cfg).unwrap();
    let l = r.link(0, 1).unwrap();
    assert!(!l.is_significant);
    assert!(l.cis_significant);
    assert_eq!(l.b(), -1.0);
}

#[test]
fn competing_star_hub_links_are_found() {
    let g = gen_var_stars(&VarStarsParams::sweep_point(
        StarStructure::Competing,
        0.5,
        800,
        4,
    ))
    .unwrap();
    let cfg = SurrogateConfig {
        count: 40,
        method: SurrogateMethod::Iaaft,
        master_seed: 9,
        ..SurrogateConfig::default()
    };
    let r = analyze_dynamic(&g.dataset, &cfg, &DynamicOptions::default()).unwrap();
    let c = confusion(&g.truth, &r.adjacency);
    assert_eq!(c.fn_, 0, "{c:?}");
    assert!(c.specificity() >= 0.8, "{c:?}");
    assert_eq!(r.config.valid_surrogates, 40);
    assert!(r.config.selected_order.is_some_and(|p| p >= 2));
    assert!(r.config.spectral_radius.is_some_and(|s| s < 1.0));
}

#[test]
fn written_result_reads_back() {
    let g = gen_binary10(&Binary10Params {
        n: 400,
        seed: 2,
        ..Binary10Params::default()
    })
    .unwrap();
    let cfg = SurrogateConfig {
        count: 20,
        master_seed: 1,
        ..SurrogateConfig::default()
    };
    let r = analyze_static(&g.dataset, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("result.json");
    let dot = dir.path().join("result.dot");
    write_result(&r, &json, Some(&dot)).unwrap();

    let doc: ResultDocument = read_result_json(fs::File::open(&json).unwrap()).unwrap();
    assert_eq!(doc.units, "nats");
    assert_eq!(doc.seed, 1);
    assert_eq!(doc.to_result().unwrap(), r);

    let dot = fs::read_to_string(&dot).unwrap();
    let edges = dot.lines().filter(|l| l.contains(" -- ")).count();
    let connected = r.links.iter().filter(|l| l.is_connected()).count();
    assert_eq!(edges, connected);
}

#[test]
fn unwritable_path_is_an_error() {
    let g = gen_binary10(&Binary10Params {
        n: 100,
        ..Binary10Params::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("data.csv");
    assert!(write_dataset(&path, &Dataset::Symbols(g.dataset)).is_err());
}
