//! Dual form: a point every ray from which crosses many of the given lines.

use projtverberg::centerpoint::{dual_center_point_search, min_ray_crossings, AffineHyperplane};
use projtverberg::scalar::{format_vec, int, ints};

fn main() -> projtverberg::Result<()> {
    // lines a x + b y = c
    let lines = [(1, 0, 0), (0, 1, 0), (1, 1, 4), (1, -1, 1), (2, 1, -3), (1, 3, 5)];
    let hs = lines
        .iter()
        .map(|&(a, b, c)| AffineHyperplane::new(ints(&[a, b]), int(c)))
        .collect::<projtverberg::Result<Vec<_>>>()?;

    let (p, crossings) = dual_center_point_search(2, &hs)?;
    println!("point {:?}: every ray crosses at least {crossings} of {} lines", format_vec(&p), hs.len());
    println!("origin for comparison: {}", min_ray_crossings(&ints(&[0, 0]), &hs)?);
    Ok(())
}
