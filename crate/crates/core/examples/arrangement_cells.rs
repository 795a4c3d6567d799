//! Open cells of a central arrangement with exact interior points.

use projtverberg::arrangement::{enumerate_open_cells, sign_vector_at};
use projtverberg::scalar::{format_vec, ints};

fn main() -> projtverberg::Result<()> {
    // normals of five planes through the origin of R^3
    let normals = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1]), ints(&[1, 1, 1]), ints(&[1, -2, 1])];
    let cells = enumerate_open_cells(3, &normals)?;
    println!("{} open cells", cells.len());
    for c in &cells {
        let signs: String = c.sign_vector.signs.iter().map(|s| s.to_string()).collect();
        assert_eq!(sign_vector_at(&normals, &c.witness), c.sign_vector);
        println!("  {signs}  at {:?}", format_vec(&c.witness));
    }
    Ok(())
}
