//! Draws a configuration, `V`, `W` and a tight hyperplane pair.

use projtverberg::cli::{render_svg, PlotData};
use projtverberg::geometry::{LinSubspace, PointConfig};
use projtverberg::pieces::{verify_center_subspace, VerifyOptions};
use projtverberg::scalar::ints;

fn main() -> projtverberg::Result<()> {
    let x = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![4, 1], vec![1, 4], vec![-2, 2], vec![3, -2]])?;
    let v = LinSubspace::hyperplane_at_infinity(2);
    let w = LinSubspace::span(3, &[ints(&[1, 1, 1])])?;
    let cert = verify_center_subspace(&v, &w, &x, 2, VerifyOptions::default())?;
    let wit = cert.witness.expect("verifier always returns a pair");
    let svg = render_svg(&PlotData {
        points: Some(x),
        v: Some(v),
        w: Some(w),
        pairs: vec![(wit.form_f, wit.form_g)],
        partition: None,
        title: format!("min piece {}", cert.min_count),
    })?;
    let path = std::env::temp_dir().join("projtverberg-example.svg");
    std::fs::write(&path, svg)?;
    println!("wrote {}", path.display());
    Ok(())
}
