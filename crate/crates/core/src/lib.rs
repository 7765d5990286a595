//! Shared primitives for the chart extraction pipeline.
//!
//! Everything downstream works on four substrates defined here:
//!
//! * [`Raster`]: the 8-bit RGB chart image.
//! * [`Heatmap`]: a single-channel confidence grid in `[0, 1]`, tagged with
//!   the fiducial or curve category it localizes.
//! * [`Mask`]: a binary grid with 8-connected component labelling and
//!   square-element morphology.
//! * [`BBox`] / [`Point`] / [`Polyline`]: detector-style geometry.
//!
//! [`ChartTable`] is the recovered tabular output; it lives here because both
//! the generator (as ground truth) and the analysis stage (as prediction)
//! produce it.
//!
//! Coordinates are continuous with pixel `i` centred at `i`. A heatmap of
//! scale `s` relative to its raster maps raster coordinate `x` to `x / s`.

pub mod axis;
pub mod color;
pub mod error;
pub mod geometry;
pub mod heatmap;
pub mod mask;
pub mod raster;
pub mod table;

pub use axis::{AxisScale, Orientation};
pub use color::Color;
pub use error::{Error, Result};
pub use geometry::{iou, BBox, BoxCategory, Point, Polyline};
pub use heatmap::{local_maxima, refine_peak, Heatmap, HeatmapCategory, HeatmapSidecar};
pub use mask::{connected_components, morphology, Component, Mask, MorphOp};
pub use raster::Raster;
pub use table::{ChartTable, ChartType, Provenance, Series, TableRow, TABLE_SCHEMA_VERSION};
