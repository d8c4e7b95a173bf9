mod common;

use common::*;
use gapkit::io::{read_serialized, read_serialized_from, write_serialized, write_serialized_to};
use gapkit::kernels::connected_components;
use gapkit::{assign_weights, build_csr, generate, load_graph, GenSpec};

#[test]
fn round_trip_is_identity_on_test_graphs() {
    let mut graphs: Vec<_> = test_graphs().into_iter().map(|(_, g)| g).collect();
    graphs.push(build_csr(&generate(&GenSpec::kronecker(9)).unwrap(), true, false).unwrap());
    graphs.push(
        build_csr(
            &assign_weights(generate(&GenSpec::uniform(9)).unwrap(), 4).unwrap(),
            true,
            false,
        )
        .unwrap(),
    );
    for g in graphs {
        let mut bytes = Vec::new();
        write_serialized_to(&g, &mut bytes).unwrap();
        let back = read_serialized_from(&mut bytes.as_slice()).unwrap();
        assert_eq!(back, g);
        let mut again = Vec::new();
        write_serialized_to(&back, &mut again).unwrap();
        assert_eq!(again, bytes);
    }
}

#[test]
fn kron_reload_keeps_cc_partition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kron10.sg");
    let g = kron(10);
    write_serialized(&g, &path).unwrap();
    let back = read_serialized(&path).unwrap();
    assert_eq!(
        canonical_partition(&connected_components(&back)),
        canonical_partition(&connected_components(&g))
    );
}

#[test]
fn text_and_binary_paths_agree() {
    let dir = tempfile::tempdir().unwrap();
    let el_path = dir.path().join("g.el");
    let g = urand(9);
    let text: String = g
        .to_edge_list()
        .edges()
        .iter()
        .map(|(u, v)| format!("{u} {v}\n"))
        .collect();
    std::fs::write(&el_path, text).unwrap();
    let from_text = load_graph(&el_path, true).unwrap();
    let sg_path = dir.path().join("g.sg");
    write_serialized(&from_text, &sg_path).unwrap();
    let from_bin = load_graph(&sg_path, false).unwrap();
    assert_eq!(
        canonical_partition(&connected_components(&from_text)),
        canonical_partition(&connected_components(&from_bin))
    );
}
