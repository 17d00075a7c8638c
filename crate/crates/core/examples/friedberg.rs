//! Duplicate-free listing of the simple graphs on at most three vertices.

use cstlab::backforth::friedberg_enumerate;
use cstlab::logic::{enumerate_structures, Signature};

fn main() {
    let sig = Signature::graph();
    let simple = (0..=3).flat_map(|n| enumerate_structures(&sig, n)).filter(|g| {
        let t = g.table(0);
        t.iter().all(|e| e[0] != e[1] && t.contains(&vec![e[1], e[0]]))
    });
    for (i, g) in friedberg_enumerate(simple, usize::MAX).iter().enumerate() {
        let edges: Vec<String> = g.table(0).iter().filter(|e| e[0] < e[1]).map(|e| format!("{}-{}", e[0], e[1])).collect();
        println!("{i}: {} vertices, edges [{}]", g.size(), edges.join(" "));
    }
}
