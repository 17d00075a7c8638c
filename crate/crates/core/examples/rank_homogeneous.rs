//! Building rank-homogeneous trees from a level profile and telling them apart
//! by profile alone.

use cstlab::trees::{build_rank_homogeneous, is_thin_profile, iso_by_profile, LevelRankProfile};

fn main() {
    let p: LevelRankProfile = "0: 2\n1: 1, 0\n2: 0\n".parse().unwrap();
    let q: LevelRankProfile = "0: 2\n1: 1\n2: 0\n".parse().unwrap();
    println!("profile p thin: {}", is_thin_profile(&p).unwrap());
    let k = 2;
    let t = build_rank_homogeneous(&p, k, 2).unwrap();
    let u = build_rank_homogeneous(&q, k, 2).unwrap();
    println!("tree from p has {} nodes, tree from q has {}", t.len(), u.len());
    println!("same profile at k={k}: {}", iso_by_profile(&t, &u, k).unwrap().matches);
    println!("tree from p against itself: {}", iso_by_profile(&t, &t, k).unwrap().matches);
}
