//! Analysis and solving of 2D geometric constraint graphs.

pub mod decomp;
pub mod exec;
pub mod geom;
pub mod graph;
pub mod henneberg;
pub mod rigidity;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/rigidity.md")]
    mod rigidity {}
    #[doc = include_str!("../../../book/src/henneberg.md")]
    mod henneberg {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
