//! The four enumeration operators applied to small sources, with the size of
//! each image fragment as the budget grows.

use cstlab::logic::{FinStructure, Signature};
use cstlab::operators::{all_operators, apply_operator, fvs_dimension, flo_to_fvs, Budget, FactSet};
use cstlab::trees::FinTree;

fn main() {
    let order = FinStructure::chain(3);
    let path = FinStructure::from_tables(Signature::graph(), 3, vec![[[0, 1], [1, 0], [1, 2], [2, 1]]
        .iter()
        .map(|e| e.to_vec())
        .collect()])
    .unwrap();
    let cherry = FinTree::new([".", "0", "1"].iter().map(|s| s.parse().unwrap())).unwrap().to_structure().0;

    for op in all_operators() {
        let source = match op.name() {
            "flo-fvs" => &order,
            "tree-graph" => &cherry,
            _ => &path,
        };
        let input = FactSet::from_structure(source);
        let sizes: Vec<String> = (0..=3)
            .map(|b| {
                let image = apply_operator(op.as_ref(), &input, Budget(b)).unwrap();
                format!("b={b}: {} elements/{} facts", image.universe().len(), image.len())
            })
            .collect();
        println!("{:<11} {}", op.name(), sizes.join(", "));
    }

    let image = apply_operator(&flo_to_fvs(), &FactSet::from_structure(&order), Budget(3)).unwrap();
    println!("dimension read back from the 3-chain image: {}", fvs_dimension(&image, Budget(3)).unwrap());
}
