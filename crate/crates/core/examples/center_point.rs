//! Classical center point of a planar point set, then the same question
//! asked projectively with `V` the line at infinity and `W` the point.

use projtverberg::centerpoint::{classical_center_point, tukey_depth};
use projtverberg::geometry::{LinSubspace, PointConfig, ProjPoint};
use projtverberg::pieces::{verify_center_subspace, VerifyOptions};
use projtverberg::scalar::{format_vec, int};

fn main() -> projtverberg::Result<()> {
    let x = PointConfig::from_affine_ints(
        2,
        &[vec![0, 0], vec![6, 1], vec![2, 7], vec![-3, 4], vec![5, 5], vec![-1, -4], vec![3, -2], vec![1, 2]],
    )?;
    let affine = x.affine_points().expect("all points are finite");
    let target = x.len().div_ceil(3);

    let (c, depth) = classical_center_point(&affine)?;
    println!("center point {:?} with Tukey depth {depth} (target {target})", format_vec(&c));
    assert_eq!(tukey_depth(&c, &affine)?, depth);

    let mut h = c.clone();
    h.push(int(1));
    let w = LinSubspace::point(&ProjPoint::new(h)?);
    let cert = verify_center_subspace(&LinSubspace::hyperplane_at_infinity(2), &w, &x, target, VerifyOptions::default())?;
    println!("projective check: {:?}, smallest piece holds {} points", cert.verdict, cert.min_count);
    if let Some(wit) = &cert.witness {
        println!("  tight pair f = {:?}, g = {:?}", format_vec(&wit.form_f), format_vec(&wit.form_g));
    }
    Ok(())
}
