//! The reference fans shipped with the binary.

use anyhow::{anyhow, Result};

use crate::document::{FanDocument, LoadedFan};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// `(name, file contents)` in a fixed order.
        pub const CORPUS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../corpus/", $name, ".fan")))),*
        ];
    };
}

corpus!(
    "p1",
    "p1xp1",
    "half_plane",
    "opposite_quadrants",
    "fan2_3",
    "fan2_4",
    "fan2_5",
    "fan2_6",
    "fan2_7",
    "fan2_8",
    "square",
    "cube",
    "octahedron",
    "pentagon_sqrt5",
    "quadrant",
    "simplicial_cone3",
    "square_cone",
    "cube_cone",
    "octahedron_cone",
    "prism_sides",
    "square_diagonal",
    "square_star",
    "sheared_square_sqrt5",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Result<LoadedFan> {
    let t = text(name).ok_or_else(|| anyhow!("no corpus fan named {name:?}"))?;
    FanDocument::parse(t)?.load()
}

pub fn load_all() -> Result<Vec<LoadedFan>> {
    names().map(load).collect()
}
