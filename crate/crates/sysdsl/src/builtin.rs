//! Systems shipped with the toolkit.

use crate::{parse_morphism, parse_system, Morphism, VectorFieldSystem};

const SOURCES: &[(&str, &str)] = &[
    ("henon-heiles", include_str!("../systems/henon-heiles.ivf")),
    ("henon-heiles-5", include_str!("../systems/henon-heiles-5.ivf")),
    ("rdg", include_str!("../systems/rdg.ivf")),
    ("rdg-5", include_str!("../systems/rdg-5.ivf")),
    ("kvm", include_str!("../systems/kvm.ivf")),
    ("oscillator", include_str!("../systems/oscillator.ivf")),
];

/// Names accepted by [`source`] and [`load`].
pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a shipped system. Panics only if a shipped file is malformed,
/// which the test suite rules out.
pub fn load(name: &str) -> Option<VectorFieldSystem> {
    source(name).map(|s| parse_system(s).unwrap_or_else(|e| panic!("builtin `{name}`: {e}")))
}

const MORPHISMS: &[(&str, &str, &str)] = &[
    ("henon-heiles", "henon-heiles-5", include_str!("../morphisms/henon-heiles.map")),
    ("rdg", "rdg-5", include_str!("../morphisms/rdg.map")),
];

/// Shipped maps `(source, target)`.
pub fn morphism_names() -> impl Iterator<Item = (&'static str, &'static str)> {
    MORPHISMS.iter().map(|(a, b, _)| (*a, *b))
}

/// The shipped morphism out of `source`, with both systems loaded.
pub fn morphism(source: &str) -> Option<(VectorFieldSystem, VectorFieldSystem, Morphism)> {
    let (a, b, text) = MORPHISMS.iter().find(|(a, _, _)| *a == source)?;
    let (src, dst) = (load(a)?, load(b)?);
    let m = parse_morphism(text, &src, &dst).unwrap_or_else(|e| panic!("builtin morphism `{a}`: {e}"));
    Some((src, dst, m))
}
