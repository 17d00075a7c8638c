//! A Scott sentence for the directed 3-cycle, checked against every
//! structure on three points.

use std::collections::HashMap;

use cstlab::backforth::{iso, scott_sentence};
use cstlab::logic::{enumerate_structures, satisfies, FinStructure, Signature};

fn main() {
    let table = [[0, 1], [1, 2], [2, 0]].iter().map(|e| e.to_vec()).collect();
    let cycle = FinStructure::from_tables(Signature::graph(), 3, vec![table]).unwrap();
    let phi = scott_sentence(&cycle);
    println!("{phi}");

    let env = HashMap::new();
    let mut models = 0;
    for b in enumerate_structures(&Signature::graph(), 3) {
        let sat = satisfies(&b, &phi, &env).unwrap();
        assert_eq!(sat, iso(&cycle, &b).unwrap().is_some());
        models += sat as usize;
    }
    println!("{models} of 512 structures on three points satisfy it, all copies of the cycle");
}
