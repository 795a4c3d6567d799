//! Tverberg partitions when `V` is a point of the plane: `W` is then a line
//! and every part must meet both closed pieces of every pair of lines
//! through `V` and along `W`.

use projtverberg::centerpoint::SearchConfig;
use projtverberg::geometry::{LinSubspace, PointConfig, ProjPoint};
use projtverberg::scalar::format_vec;
use projtverberg::tverberg::{radon_partition, search_projective_tverberg};

fn main() -> projtverberg::Result<()> {
    // Radon first: four points, V the line at infinity
    let quad = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![4, 0], vec![0, 4], vec![3, 3]])?;
    let (parts, c) = radon_partition(&quad)?;
    println!("radon parts {:?} meet at {:?}", parts.parts, format_vec(&c));

    // D = (d - v)(v + 1) = 2 for a point V in the plane, so r = 2 needs 4 points
    let v = LinSubspace::point(&ProjPoint::from_ints(&[1, 1, 1])?);
    let x = PointConfig::from_affine_ints(2, &[vec![-3, 0], vec![4, 1], vec![0, 5], vec![2, -4]])?;
    let out = search_projective_tverberg(&v, &x, 2, &SearchConfig::default())?;
    println!("strategy {:?}, verdict {:?}", out.strategy, out.certificate.verdict);
    println!("W spanned by {:?}", out.w.basis().iter().map(|r| format_vec(r)).collect::<Vec<_>>());
    println!("partition {:?}", out.partition.parts);
    for w in &out.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
