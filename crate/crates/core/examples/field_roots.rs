//! Edges of a graph recovered from its field: `x_i + x_j` has a square root
//! exactly when `i` and `j` are adjacent.

use cstlab::logic::{FinStructure, Signature};
use cstlab::operators::{field_has_edge_root, Budget};

fn main() {
    // a 4-cycle 0-1-2-3-0
    let table = [[0, 1], [1, 2], [2, 3], [3, 0]].iter().flat_map(|&[a, b]| [vec![a, b], vec![b, a]]).collect();
    let g = FinStructure::from_tables(Signature::graph(), 4, vec![table]).unwrap();
    for i in 0..4 {
        for j in i + 1..4 {
            let root = field_has_edge_root(&g, i, j, Budget(3)).unwrap();
            println!("x{i} + x{j}: {}", if root { "square" } else { "no root within budget" });
        }
    }
}
