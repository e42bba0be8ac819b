use std::time::Instant;

use isg::bench::{
    reproduce_figure, sha256_hex, write_datasets, FigureId, FigureOverrides, Manifest,
};
use isg::diffraction::eta_uniform;

fn quick() -> FigureOverrides {
    FigureOverrides {
        n_phi: Some(64),
        n_z: Some(60),
        od_step: Some(0.5),
        ..Default::default()
    }
}

#[test]
fn every_figure_regenerates_identically() {
    for id in FigureId::ALL {
        let a = reproduce_figure(id, &quick()).unwrap();
        let b = reproduce_figure(id, &quick()).unwrap();
        assert!(!a.rows.is_empty(), "figure {id} is empty");
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap(), "figure {id}");
        assert!(a.metadata.contains_key("n_phi"));
    }
}

#[test]
fn efficiency_figure_has_six_curves() {
    let d = reproduce_figure(FigureId::Efficiency, &quick()).unwrap();
    assert_eq!(
        d.series(),
        [
            "standard-small-angle",
            "standard-large-angle",
            "isg-small-angle",
            "isg-large-angle",
            "ideal-sinusoidal",
            "ideal-square",
        ]
    );
    for (series, a1) in [
        ("ideal-sinusoidal", 0.5),
        ("ideal-square", 2.0 / std::f64::consts::PI),
    ] {
        let x = d.column(series, "optical_depth").unwrap();
        let eta = d.column(series, "eta").unwrap();
        for (od, e) in x.iter().zip(&eta) {
            assert!((e - eta_uniform(1.0, a1, *od)).abs() < 1e-9);
        }
    }
}

#[test]
fn full_resolution_efficiency_figure_is_fast() {
    let start = Instant::now();
    let d = reproduce_figure(FigureId::Efficiency, &FigureOverrides::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(d.rows.len(), 6 * 60);
    assert!(elapsed < 60.0, "took {elapsed} s");
}

#[test]
fn manifest_matches_files() {
    let dir = tempfile::tempdir().unwrap();
    let sets: Vec<_> = [FigureId::IsgEntrance, FigureId::DepthAveraged]
        .into_iter()
        .map(|id| reproduce_figure(id, &quick()).unwrap())
        .collect();
    let manifest = write_datasets(dir.path(), &sets).unwrap();
    let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let parsed: Manifest = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, manifest);
    for entry in &parsed.datasets {
        let bytes = std::fs::read(dir.path().join(&entry.file)).unwrap();
        assert_eq!(sha256_hex(&bytes), entry.sha256);
        assert!(!bytes.contains(&b'\r'));
    }
    let averaged = &parsed.datasets[1];
    assert_eq!(averaged.id, "9-calc");
    assert!(averaged.references.iter().any(|r| r.value == 1.60));
}

#[test]
fn overrides_reach_the_dataset() {
    let o = FigureOverrides {
        isg_drive: Some(3.0),
        ..quick()
    };
    let d = reproduce_figure(FigureId::DepthAveraged, &o).unwrap();
    assert_eq!(d.metadata["drive"], serde_json::json!(3.0));
    let c = d.metadata["contrast"].as_f64().unwrap();
    assert!(c < 1.82);
}

#[test]
fn manifest_keeps_earlier_figures_in_figure_order() {
    let dir = tempfile::tempdir().unwrap();
    let three = reproduce_figure(FigureId::IsgEntrance, &quick()).unwrap();
    let two = reproduce_figure(FigureId::StandardEntrance, &quick()).unwrap();
    write_datasets(dir.path(), std::slice::from_ref(&three)).unwrap();
    let merged = write_datasets(dir.path(), std::slice::from_ref(&two)).unwrap();

    let fresh = tempfile::tempdir().unwrap();
    let at_once = write_datasets(fresh.path(), &[two, three]).unwrap();
    assert_eq!(merged, at_once);
    assert_eq!(merged.datasets[0].id, "2");
}
