//! Placeholder; replaced by the full diagram module.
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("todo")]
    Todo,
}

#[derive(Debug, Clone)]
pub struct SurfaceDiagram;

#[derive(Debug, Clone)]
pub struct CombSeifertSurface;
