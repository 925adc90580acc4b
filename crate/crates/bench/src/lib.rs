//! Shared fixtures for the criterion benchmarks: deterministic synthetic
//! images so benchmarks never depend on files on disk.

use rotor_core::{GridDims, ImageBuffer};

/// A smooth two-axis gradient, cheap to build at any size.
pub fn gradient(dims: GridDims) -> ImageBuffer {
    ImageBuffer::from_fn(dims, |p| {
        [
            (p.row * 255 / dims.rows().max(1)) as u8,
            (p.col * 255 / dims.cols().max(1)) as u8,
            128,
        ]
    })
}

/// A high-contrast checkerboard with `cell`-sized squares.
pub fn checkerboard(dims: GridDims, cell: usize) -> ImageBuffer {
    ImageBuffer::from_fn(dims, |p| {
        if (p.row / cell + p.col / cell).is_multiple_of(2) {
            [235, 235, 235]
        } else {
            [20, 20, 20]
        }
    })
}
