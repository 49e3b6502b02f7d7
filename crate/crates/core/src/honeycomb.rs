//! Brute-force self-avoiding walks on the honeycomb lattice.
//!
//! The lattice is drawn as a brick wall: vertex `(x, y)` is joined to
//! `(x +- 1, y)` and vertically to `(x, y + 1)` when `x + y` is even, else to
//! `(x, y - 1)`. Splitting every `pi/3` rhombus along its short diagonal gives
//! this lattice with the diagonals as the vertical edges, so rhombic mid-edges
//! are the midpoints of horizontal edges.
//!
//! Walks start at the midpoint of the horizontal edge `(0,0)-(1,0)`, visit `n`
//! distinct vertices and stop at the midpoint of a horizontal edge leaving the
//! last vertex, other than the edge they arrived by and the starting edge.

use std::collections::HashSet;

type Vertex = (i64, i64);

fn neighbours(v: Vertex) -> [Vertex; 3] {
    let (x, y) = v;
    let dy = if (x + y).rem_euclid(2) == 0 { 1 } else { -1 };
    [(x - 1, y), (x + 1, y), (x, y + dy)]
}

fn horizontal(a: Vertex, b: Vertex) -> bool {
    a.1 == b.1
}

fn same_edge(e: (Vertex, Vertex), f: (Vertex, Vertex)) -> bool {
    e == f || (e.0 == f.1 && e.1 == f.0)
}

/// Number of walks visiting exactly `n` vertices, for `n = 0..=n_max`.
pub fn walk_counts(n_max: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n_max + 1];
    counts[0] = 1;
    if n_max == 0 {
        return counts;
    }
    let start_edge = ((0, 0), (1, 0));
    for (first, from) in [((0, 0), (1, 0)), ((1, 0), (0, 0))] {
        let mut visited = HashSet::from([first]);
        extend(first, from, start_edge, 1, n_max, &mut visited, &mut counts);
    }
    counts
}

/// `v` was entered across the edge from `prev`.
fn extend(
    v: Vertex,
    prev: Vertex,
    start_edge: (Vertex, Vertex),
    depth: usize,
    n_max: usize,
    visited: &mut HashSet<Vertex>,
    counts: &mut [u64],
) {
    for u in neighbours(v) {
        if u == prev || !horizontal(v, u) || same_edge((v, u), start_edge) {
            continue;
        }
        counts[depth] += 1;
    }
    if depth == n_max {
        return;
    }
    for u in neighbours(v) {
        if u == prev || visited.contains(&u) {
            continue;
        }
        visited.insert(u);
        extend(u, v, start_edge, depth + 1, n_max, visited, counts);
        visited.remove(&u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_vertex_has_three_neighbours_symmetrically() {
        for x in -3..3 {
            for y in -3..3 {
                for u in neighbours((x, y)) {
                    assert!(neighbours(u).contains(&(x, y)));
                }
            }
        }
    }

    #[test]
    fn small_counts() {
        // one vertex: each side has one horizontal exit besides the start edge
        let c = walk_counts(2);
        assert_eq!(c[0], 1);
        assert_eq!(c[1], 2);
    }
}
