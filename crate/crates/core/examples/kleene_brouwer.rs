//! Tree ranks and the Kleene-Brouwer linearization of a small tree.

use cstlab::trees::{kb_order, rank_profile, FinTree};

fn main() {
    let t = FinTree::new([".", "0", "1", "0/0", "0/1", "0/1/0"].iter().map(|s| s.parse().unwrap())).unwrap();
    print!("{t}");
    println!("rank {}", t.rank().unwrap());
    for n in t.nodes() {
        println!("  {n}: {}", t.rank_of(n).unwrap());
    }
    let order = kb_order(&t).unwrap();
    let listing: Vec<String> = order.listing().iter().map(|n| n.to_string()).collect();
    println!("{}", listing.join(" < "));
    print!("{}", rank_profile(&t));
}
