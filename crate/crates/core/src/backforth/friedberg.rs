use super::iso;
use crate::logic::FinStructure;

/// Keeps the first structure of each isomorphism type met in `src`, stopping
/// after `limit` representatives or at the end of the stream.
pub fn friedberg_enumerate(
    src: impl IntoIterator<Item = FinStructure>,
    limit: usize,
) -> Vec<FinStructure> {
    let mut reps: Vec<FinStructure> = Vec::new();
    for s in src {
        if reps.len() >= limit {
            break;
        }
        let fresh = reps
            .iter()
            .all(|r| r.signature() != s.signature() || iso(r, &s).unwrap().is_none());
        if fresh {
            reps.push(s);
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{enumerate_structures, Signature};

    #[test]
    fn graphs_up_to_one_vertex() {
        let sig = Signature::graph();
        let stream = (0..=1).flat_map(|n| enumerate_structures(&sig, n));
        let reps = friedberg_enumerate(stream, usize::MAX);
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0].size(), 0);
        assert!(reps[1].table(0).is_empty());
        assert!(reps[2].holds(0, &[0, 0]));
    }

    #[test]
    fn duplicates_collapse() {
        let c = FinStructure::chain(3);
        let stream = vec![c.clone(), c.relabel(&[2, 1, 0]), c.relabel(&[1, 0, 2])];
        assert_eq!(friedberg_enumerate(stream, 10), vec![c]);
    }

    #[test]
    fn limit_is_respected() {
        let sig = Signature::graph();
        assert_eq!(friedberg_enumerate(enumerate_structures(&sig, 2), 2).len(), 2);
    }

    #[test]
    fn simple_graphs_on_three_vertices() {
        let sig = Signature::graph();
        let simple = enumerate_structures(&sig, 3).filter(|g| {
            g.table(0).iter().all(|t| t[0] != t[1] && g.holds(0, &[t[1], t[0]]))
        });
        assert_eq!(friedberg_enumerate(simple, usize::MAX).len(), 4);
    }
}
