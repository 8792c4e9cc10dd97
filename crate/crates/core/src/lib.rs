pub mod backend;
pub mod ball;
pub mod catalog;
pub mod certify;
pub mod elements;
pub mod error;
pub mod pipeline;
pub mod presentation;
pub mod rewrite;
pub mod ring;
pub mod sdp;
pub mod word;
