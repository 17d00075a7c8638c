//! Ulm sequences of the Abelian groups of order 2^4, from partitions and from
//! the socle chain of the explicit group.

use cstlab::pgroups::{ulm_bruteforce, ulm_from_partition, ulm_theorem_check, Partition};

fn main() {
    for g in Partition::all_up_to(2, 4).unwrap().into_iter().filter(|g| g.log_order() == 4) {
        let u = ulm_from_partition(&g);
        assert_eq!(u, ulm_bruteforce(&g.explicit()).unwrap());
        println!("{g}: u = {u}");
    }
    println!("Ulm sequences separate all groups up to 3^4: {}", ulm_theorem_check(3, 4).unwrap());
}
