//! Reference values for the acceptance run.

#![allow(dead_code)]

/// `aw([n], k)` for `3 <= n <= 25`, columns `k = 3..`.
pub const INTERVAL_TABLE: &str = "
3: 3
4: 4
5: 4 5
6: 4 6
7: 4 6 7
8: 5 6 8
9: 4 7 8 9
10: 5 8 9 10
11: 5 8 9 10 11
12: 5 8 10 11 12
13: 5 8 11 11 12 13
14: 5 8 11 12 13 14
15: 5 9 11 13 14 14 15
16: 5 9 12 13 15 15 16
17: 5 9 13 13 15 16 16 17
18: 5 10 14 14 16 17 17 18
19: 5 10 14 15 17 17 18 18 19
20: 5 10 14 16 17 18 19 19 20
21: 5 11 14 16 17 19 20 20 20 21
22: 6 12 14 17 18 20 21 21 21 22
23: 6 12 14 17 19 20 21 22 22 22 23
24: 6 12 15 18 20 20 22 23 23 23 24
25: 6 12 15 19 21 21 23 23 24 24 24 25
";

/// `aw(Z_n, k)` for `4 <= n <= 19`, columns `k = 4..=n`.
pub const CYCLIC_TABLE: &str = "
4: 4
5: 4 5
6: 5 5 6
7: 4 5 6 7
8: 6 6 7 7 8
9: 5 6 8 8 8 9
10: 6 8 8 8 9 9 10
11: 5 6 7 8 9 9 10 11
12: 8 9 10 10 11 11 11 11 12
13: 5 7 8 9 10 10 11 11 12 13
14: 6 8 10 12 12 12 12 12 13 13 14
15: 8 11 12 12 12 13 14 14 14 14 14 15
16: 8 10 10 11 14 14 14 14 15 15 15 15 16
17: 6 8 10 11 12 12 13 14 14 15 15 15 16 17
18: 8 10 13 14 14 16 16 16 17 17 17 17 17 17 18
19: 6 9 10 12 12 14 14 15 16 16 16 17 17 17 18 19
";

/// `aw(Z_n, 3)` for `n = 0..=99`; entries below 3 are unused.
pub const CYCLIC_K3: [usize; 100] = [
    0, 0, 0, 3, 3, 3, 4, 3, 3, 4, //
    4, 3, 4, 3, 4, 4, 3, 4, 5, 3, //
    4, 4, 4, 3, 4, 4, 4, 5, 4, 3, //
    5, 4, 3, 4, 5, 4, 5, 3, 4, 4, //
    4, 4, 5, 4, 4, 5, 4, 3, 4, 4, //
    5, 5, 4, 3, 6, 4, 4, 4, 4, 3, //
    5, 3, 5, 5, 3, 4, 5, 3, 5, 4, //
    5, 3, 5, 4, 4, 5, 4, 4, 5, 3, //
    4, 6, 5, 3, 5, 5, 5, 4, 4, 4, //
    6, 4, 4, 5, 4, 4, 4, 4, 5, 5,
];

/// `aw([n], 3)` for `1 <= n <= 58`.
pub fn interval_k3(n: usize) -> usize {
    match n {
        1 => 2,
        2 | 3 => 3,
        4..=7 | 9 => 4,
        8 | 10..=21 | 27 => 5,
        22..=26 | 28..=58 => 6,
        _ => panic!("n={n} out of range"),
    }
}

/// Odd primes below 100 with `aw(Z_p, 3) = 4`.
pub const Q4_BELOW_100: [u64; 7] = [17, 31, 41, 43, 73, 89, 97];

/// `(n, first k, values)` rows of a table.
pub fn rows(table: &str, first_k: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    table
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (n, vals) = l.split_once(':').unwrap();
            let vals = vals.split_whitespace().enumerate().map(|(i, v)| (first_k + i, v.parse().unwrap())).collect();
            (n.trim().parse().unwrap(), vals)
        })
        .collect()
}
