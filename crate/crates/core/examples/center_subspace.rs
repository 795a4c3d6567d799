//! A line `V` in projective 3-space and a search for the complementary line
//! `W` such that every pair of planes through them leaves at least
//! `ceil(n / 5)` points in each closed piece.

use projtverberg::centerpoint::{search_center_subspace, SearchConfig};
use projtverberg::geometry::{LinSubspace, PointConfig};
use projtverberg::scalar::{format_vec, ints};

fn main() -> projtverberg::Result<()> {
    let x = PointConfig::from_affine_ints(
        3,
        &[
            vec![0, 0, 0],
            vec![5, 1, -2],
            vec![-3, 4, 1],
            vec![2, -5, 3],
            vec![1, 2, 6],
            vec![-4, -1, -3],
            vec![3, 3, 3],
            vec![-2, 5, -4],
            vec![4, -3, 0],
            vec![0, 1, -5],
        ],
    )?;
    let v = LinSubspace::span(4, &[ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 2])])?;
    let (d, vd) = (3, 1);
    let r = x.len().div_ceil((d - vd) * (vd + 1) + 1);
    let out = search_center_subspace(&v, &x, r, &SearchConfig::default())?;
    println!("target r = {r}: {:?} with min piece {}", out.certificate.verdict, out.certificate.min_count);
    println!("found by {:?} after {} evaluations", out.strategy, out.evaluations);
    for row in out.w.basis() {
        println!("  W row {:?}", format_vec(row));
    }
    println!("V meets W: {}", !v.meet(&out.w)?.is_zero());
    Ok(())
}
