//! Problem documents shipped with the binary.

pub const RAIL_CROSSING: &str = include_str!("../problems/rail_crossing.json");
pub const FLOATING_WIND: &str = include_str!("../problems/floating_wind.json");

/// `(id, document)` pairs.
pub const BUNDLED: [(&str, &str); 2] = [("rail_crossing", RAIL_CROSSING), ("floating_wind", FLOATING_WIND)];

/// Looks up a bundled document by id or by file name (`rail_crossing.json`).
pub fn find(name: &str) -> Option<&'static str> {
    let id = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(k, _)| *k == id).map(|(_, text)| *text)
}
