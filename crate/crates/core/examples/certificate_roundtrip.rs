//! A certificate survives serialization: the claim is written as JSON,
//! read back and rechecked without any search. A tampered copy is caught.

use projtverberg::cli::{recheck_claim, Claim};
use projtverberg::geometry::{LinSubspace, PointConfig};
use projtverberg::pieces::{verify_center_subspace, VerifyOptions};
use projtverberg::scalar::ints;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1], vec![0, 3]])?;
    let v = LinSubspace::hyperplane_at_infinity(2);
    let w = LinSubspace::span(3, &[ints(&[0, 0, 1])])?;
    let cert = verify_center_subspace(&v, &w, &x, 2, VerifyOptions::default())?;
    let claim = Claim::new(&cert, &[(x, 2, None)], false, VerifyOptions::default());

    let text = serde_json::to_string_pretty(&claim)?;
    println!("{text}");
    let back: Claim = serde_json::from_str(&text)?;
    println!("recheck: {:?}", recheck_claim(&back)?);

    let mut forged = back.clone();
    forged.min_count += 1;
    println!("forged: {:?}", recheck_claim(&forged)?);
    Ok(())
}
