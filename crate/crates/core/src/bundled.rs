//! Example posets shipped with the crate (the same files live in `posets/`).

use crate::poset::{PosetError, SimplicialPoset};

/// Bundled poset names, in a fixed order.
pub const NAMES: [&str; 6] = [
    "p1",
    "hollow_triangle",
    "solid_triangle",
    "tetrahedron_boundary",
    "two_disjoint_edges",
    "double_triangle",
];

/// Bundled posets that are face posets of simplicial complexes.
pub const COMPLEX_NAMES: [&str; 4] = [
    "hollow_triangle",
    "solid_triangle",
    "tetrahedron_boundary",
    "two_disjoint_edges",
];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "p1" => include_str!("../../../posets/p1.json"),
        "hollow_triangle" => include_str!("../../../posets/hollow_triangle.json"),
        "solid_triangle" => include_str!("../../../posets/solid_triangle.json"),
        "tetrahedron_boundary" => include_str!("../../../posets/tetrahedron_boundary.json"),
        "two_disjoint_edges" => include_str!("../../../posets/two_disjoint_edges.json"),
        "double_triangle" => include_str!("../../../posets/double_triangle.json"),
        "point" => r#"{"elements":["0"],"covers":[]}"#,
        _ => return None,
    })
}

pub fn poset(name: &str) -> Result<SimplicialPoset, PosetError> {
    let text = source(name).ok_or_else(|| PosetError::Malformed(format!("no bundled poset `{name}`")))?;
    SimplicialPoset::from_json_validated(text)
}
