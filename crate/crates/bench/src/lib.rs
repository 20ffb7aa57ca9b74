//! Shared fixtures for the criterion benches.

use dirtymac::{AvgSnrPair, DependenceModel, Geometry, OutageQuery};

pub fn bench_snrs() -> AvgSnrPair {
    AvgSnrPair::new(10.0, 5.0).unwrap()
}

pub fn bench_geometry() -> Geometry {
    Geometry::new(1.0, 1.3, 3.5).unwrap()
}

pub fn bench_query() -> OutageQuery {
    OutageQuery::new(bench_geometry(), 0.75).unwrap()
}

pub fn bench_models() -> Vec<(&'static str, DependenceModel)> {
    vec![
        ("independence", DependenceModel::Independence),
        ("lower", DependenceModel::LowerFrechet),
        ("upper", DependenceModel::UpperFrechet),
        ("frank30", DependenceModel::frank(30.0).unwrap()),
        ("fgm1", DependenceModel::fgm(1.0).unwrap()),
    ]
}
