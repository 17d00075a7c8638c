//! Back-and-forth levels on a small graph: how many rounds it takes for the
//! relations to settle, and which pairs of tuples they identify.

use cstlab::backforth::{check_nadel_finite, equiv_alpha, orbits, scott_rank, BackForth};
use cstlab::logic::{FinStructure, Signature};

fn main() {
    // a path 0 - 1 - 2 with a pendant loop at 2
    let table = [[0, 1], [1, 0], [1, 2], [2, 1], [2, 2]].iter().map(|e| e.to_vec()).collect();
    let g = FinStructure::from_tables(Signature::graph(), 3, vec![table]).unwrap();

    let mut bf = BackForth::single(&g);
    println!("relations stabilize at level {}", bf.stabilization_level());
    for alpha in 0..3 {
        println!("(0) ~{alpha} (1): {}", equiv_alpha(&g, &[0], &g, &[1], alpha).unwrap());
    }

    let report = scott_rank(&g);
    println!("Scott rank {}", report.structure_rank);
    for (t, r) in report.tuple_ranks.iter().filter(|(t, _)| t.len() <= 1) {
        println!("  rank of {t:?}: {r}");
    }

    println!("orbits on pairs: {}", orbits(&g, 2).len());
    println!("levels agree with automorphism orbits: {}", check_nadel_finite(&g));
}
