//! Small exact linear algebra: GF(2) bit rows and integer matrices over Q.

/// Rank over GF(2) of rows packed as bit masks.
pub fn gf2_rank(rows: &[u64]) -> usize {
    gf2_basis(rows).len()
}

fn gf2_basis(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Finds a subset of `rows` (as a bit mask over row indices) whose XOR equals `target`.
pub fn gf2_solve(rows: &[u64], target: u64) -> Option<u64> {
    assert!(rows.len() <= 64);
    // Each pivot row carries the combination of input rows that produced it.
    let mut pivots: Vec<(u64, u64)> = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let mut v = r;
        let mut comb = 1u64 << i;
        for &(p, c) in &pivots {
            if v ^ p < v {
                v ^= p;
                comb ^= c;
            }
        }
        if v != 0 {
            pivots.push((v, comb));
            pivots.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    let mut v = target;
    let mut comb = 0u64;
    for &(p, c) in &pivots {
        if v ^ p < v {
            v ^= p;
            comb ^= c;
        }
    }
    (v == 0).then_some(comb)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rank over Q of an integer matrix, by fraction-free elimination with row content removal.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> =
        rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i == rank || m[i][col] == 0 {
                continue;
            }
            let (a, b) = (m[rank][col], m[i][col]);
            for j in 0..ncols {
                m[i][j] = m[i][j] * a - m[rank][j] * b;
            }
            let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert_eq!(gf2_rank(&[0b011, 0b110, 0b101]), 2);
        assert_eq!(gf2_rank(&[0b001, 0b010, 0b100]), 3);
        assert_eq!(gf2_solve(&[0b011, 0b110], 0b101), Some(0b11));
        assert_eq!(gf2_solve(&[0b011, 0b110], 0b001), None);
        assert_eq!(rational_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rational_rank(&[vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 0]]), 2);
        // Independent over Q but dependent mod 2.
        assert_eq!(rational_rank(&[vec![1, 1], vec![1, -1]]), 2);
        assert_eq!(gf2_rank(&[0b11, 0b11]), 1);
    }

    proptest! {
        #[test]
        fn solve_reproduces_target(rows in proptest::collection::vec(0u64..1024, 1..12), pick in 0u64..4096) {
            let pick = pick & ((1u64 << rows.len()) - 1);
            let target = rows.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0, |a, (_, r)| a ^ r);
            let comb = gf2_solve(&rows, target).expect("target is in the span");
            let back = rows.iter().enumerate().filter(|(i, _)| comb >> i & 1 == 1).fold(0, |a, (_, r)| a ^ r);
            prop_assert_eq!(back, target);
        }

        #[test]
        fn rank_bounded_and_permutation_invariant(mut rows in proptest::collection::vec(0u64..256, 0..10)) {
            let r = gf2_rank(&rows);
            prop_assert!(r <= rows.len().min(8));
            rows.reverse();
            prop_assert_eq!(gf2_rank(&rows), r);
        }
    }
}
