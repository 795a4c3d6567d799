//! Two configurations in 3-space sharing one transversal line `W`.

use projtverberg::centerpoint::SearchConfig;
use projtverberg::geometry::{LinSubspace, PointConfig};
use projtverberg::scalar::format_vec;
use projtverberg::tverberg::{search_transversal, TransversalInstance};

fn main() -> projtverberg::Result<()> {
    let x1 = PointConfig::from_affine_ints(3, &[vec![0, 0, 0], vec![4, 1, 0], vec![1, 5, 1], vec![2, 2, 6]])?;
    let x2 = PointConfig::from_affine_ints(3, &[vec![1, -3, 2], vec![-2, 1, 1], vec![3, 3, -1], vec![0, 1, 4]])?;
    let inst = TransversalInstance::new(LinSubspace::hyperplane_at_infinity(3), 1, vec![(x1, 2), (x2, 2)], 2)?;

    let out = search_transversal(&inst, &SearchConfig::default())?;
    println!("gate {}: {} ({:?})", out.gate.name, out.gate.holds, out.gate.method);
    println!("verdict {:?} via {:?}", out.certificate.verdict, out.strategy);
    for row in out.w.basis() {
        println!("  W row {:?}", format_vec(row));
    }
    for (j, p) in out.partitions.iter().enumerate() {
        println!("  config {j}: {:?}", p.parts);
    }
    Ok(())
}
