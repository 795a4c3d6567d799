//! Colored points: partitions whose parts repeat no color, and an exact
//! count of the valid partitions for the found `W`.

use projtverberg::centerpoint::SearchConfig;
use projtverberg::geometry::{LinSubspace, PointConfig};
use projtverberg::tverberg::{count_valid_partitions, search_projective_tverberg};

fn main() -> projtverberg::Result<()> {
    let x = PointConfig::from_affine_ints(
        2,
        &[vec![0, 0], vec![6, 0], vec![0, 6], vec![2, 2], vec![5, 4], vec![1, 5], vec![3, -1]],
    )?
    .with_colors(vec![0, 1, 2, 0, 1, 2, 0])?;
    let v = LinSubspace::hyperplane_at_infinity(2);
    let cfg = SearchConfig { rainbow: true, ..SearchConfig::default() };
    let out = search_projective_tverberg(&v, &x, 3, &cfg)?;
    println!("verdict {:?}, parts {:?}", out.certificate.verdict, out.partition.parts);
    let count = count_valid_partitions(&v, &out.w, &x, 3, &cfg)?;
    println!("{} rainbow partitions work for this W (per W: {})", count.count, count.per_w);
    Ok(())
}
