//! `T`-joins in multigraphs and the token game that certifies them.
//!
//! * [`multigraph`]: the graph container and its structural algorithms.
//! * [`game`]: game states, moves, replay, and the join/gameplay conversions.
//! * [`joiner`]: constructive join algorithms, including the ω-aware
//!   normalization and token elimination.
//! * [`symbolic`]: finitely presented infinite bridge trees, their
//!   simplification and A/B/C classification, and finite truncations.
//! * [`text`]: the line formats used by the command line.
//!
//! ```
//! use std::collections::BTreeSet;
//! use tjoin::game::verify_join;
//! use tjoin::joiner::tjoin_finite;
//! use tjoin::text::parse_graph;
//!
//! let g = parse_graph("v a\nv b\nv c\ne ab a b\ne bc b c\n").unwrap();
//! let t: BTreeSet<_> = ["a", "c"].map(|n| g.vertex_by_name(n).unwrap()).into();
//! let outcome = tjoin_finite(&g, &t).unwrap();
//! assert_eq!(verify_join(&g, &t, outcome.join().unwrap()), Ok(()));
//! ```

pub mod game;
pub mod joiner;
pub mod multigraph;
pub mod symbolic;
pub mod text;

pub use game::{GameState, Move, TokenId};
pub use joiner::{tjoin_finite, JoinOutcome};
pub use multigraph::{EdgeId, Multigraph, VertexId};
pub use symbolic::{classify, Classification, SymNode};

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/multigraphs.md")]
    mod multigraphs {}
    #[doc = include_str!("../../../book/src/game.md")]
    mod game {}
    #[doc = include_str!("../../../book/src/joins.md")]
    mod joins {}
    #[doc = include_str!("../../../book/src/omega.md")]
    mod omega {}
    #[doc = include_str!("../../../book/src/symbolic.md")]
    mod symbolic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
