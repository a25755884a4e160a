use super::{parse_tree, Classification, SymNode};

/// A tree shipped with the crate, with the class it is known to have.
#[derive(Debug, Clone, Copy)]
pub struct BundledTree {
    pub name: &'static str,
    pub source: &'static str,
    pub expected: Classification,
}

impl BundledTree {
    pub fn tree(&self) -> SymNode {
        parse_tree(self.source).expect("bundled trees parse")
    }
}

macro_rules! bundled {
    ($name:literal, $class:ident) => {
        BundledTree {
            name: $name,
            source: include_str!(concat!("../../trees/", $name, ".tree")),
            expected: Classification::$class,
        }
    };
}

const LIBRARY: &[BundledTree] = &[
    bundled!("finite-even", B),
    bundled!("finite-odd", C),
    bundled!("finite-structured", B),
    bundled!("plain-star", A),
    bundled!("subdivided-star", C),
    bundled!("subdivided-star-leaves", A),
    bundled!("ray", A),
    bundled!("ray-sparse", A),
    bundled!("zero-ray", B),
    bundled!("omega-component", A),
    bundled!("omega-deep", A),
    bundled!("zero-pattern", B),
    bundled!("token-free-patterns", C),
    bundled!("nested-pattern", A),
    bundled!("two-patterns", A),
];

/// The bundled library, in a fixed order.
pub fn bundled_trees() -> &'static [BundledTree] {
    LIBRARY
}
