//! Neither subspace fixed: a point `V` and a line `W` serving two planar
//! configurations at once.

use projtverberg::centerpoint::SearchConfig;
use projtverberg::geometry::PointConfig;
use projtverberg::scalar::format_vec;
use projtverberg::tverberg::search_both_subspaces;

fn main() -> projtverberg::Result<()> {
    let x1 = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![5, 1], vec![1, 4], vec![3, 3]])?;
    let x2 = PointConfig::from_affine_ints(2, &[vec![-2, 1], vec![2, -3], vec![4, 4], vec![0, 2]])?;
    let out = search_both_subspaces(&[(x1, 2), (x2, 2)], 0, 1, 2, &SearchConfig::default())?;
    println!("gate: {} ({})", out.gate.holds, out.gate.explanation);
    println!("V = {:?}", format_vec(&out.v.basis()[0]));
    println!("W = {:?}", out.w.basis().iter().map(|r| format_vec(r)).collect::<Vec<_>>());
    println!("verdict {:?}, partitions {:?}", out.certificate.verdict, out.partitions.iter().map(|p| &p.parts).collect::<Vec<_>>());
    Ok(())
}
