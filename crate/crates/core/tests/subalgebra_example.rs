use gradedlie::subalgebra_example::{self, fingerprint, E, E_HAT, E_TILDE};
use gradedlie::scalars::FieldSpec;

/// Index of `e_i ∧ e_j` (i < j) in the standard basis of `Λ²k⁴`.
fn wedge_index(i: usize, j: usize) -> usize {
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().position(|&p| p == (i, j)).unwrap()
}

fn wedge(v: &[i64], w: &[i64], p: i64) -> Vec<i64> {
    let mut out = vec![0; 6];
    for i in 0..4 {
        for j in i + 1..4 {
            out[wedge_index(i, j)] = (v[i] * w[j] - v[j] * w[i]).rem_euclid(p);
        }
    }
    out
}

fn rank_mod(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let inv = |a: i64| (1..p).find(|b| a * b % p == 1).unwrap();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(r, k);
        let s = inv(rows[r][c].rem_euclid(p));
        let pivot: Vec<i64> = rows[r].iter().map(|x| x * s % p).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

fn vectors(p: i64) -> Vec<Vec<i64>> {
    (0..p.pow(4)).map(|mut n| (0..4).map(|_| { let d = n % p; n /= p; d }).collect()).collect()
}

/// Zero pairs and ad-rank counts of `Λ²V / R` over `F_p`, with `R` spanned by `rels`.
fn plucker_oracle(rels: &[Vec<i64>], p: i64) -> (u64, Vec<u64>) {
    let rels: Vec<Vec<i64>> = rels.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let base = rank_mod(rels.clone(), p);
    let vs = vectors(p);
    let mut zeros = 0;
    let mut counts = vec![0u64; 5];
    for v in &vs {
        for w in &vs {
            let mut rows = rels.clone();
            rows.push(wedge(v, w, p));
            zeros += (rank_mod(rows, p) == base) as u64;
        }
        let mut rows = rels.clone();
        rows.extend((0..4).map(|j| wedge(v, &(0..4).map(|i| (i == j) as i64).collect::<Vec<_>>(), p)));
        counts[rank_mod(rows, p) - base] += 1;
    }
    (zeros, counts)
}

fn rel(terms: &[(usize, usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; 6];
    for &(i, j, c) in terms {
        v[wedge_index(i, j)] += c;
    }
    v
}

#[test]
fn fingerprints_agree_with_plucker_oracle() {
    let cases = [
        (E, vec![rel(&[(0, 1, 1)]), rel(&[(1, 2, -1), (0, 3, 1)])]),
        (E_TILDE, vec![rel(&[(0, 1, 1)]), rel(&[(0, 2, 1)])]),
        (E_HAT, vec![rel(&[(0, 1, 1)]), rel(&[(2, 3, -1)])]),
    ];
    for (text, rels) in cases {
        let fp = fingerprint(text, &[2, 3]).unwrap();
        for (k, &p) in [2i64, 3].iter().enumerate() {
            let (zeros, counts) = plucker_oracle(&rels, p);
            assert_eq!(fp.zero_pairs[k], (p as u8, zeros));
            assert_eq!(fp.ad_rank_profile[k].1, counts);
        }
    }
}

#[test]
fn frozen_fingerprints() {
    let e = fingerprint(E, subalgebra_example::FINGERPRINT_FIELDS).unwrap();
    assert_eq!(e.degree_two_dim, 4);
    assert_eq!(e.zero_pairs, vec![(2, 52), (3, 369), (4, 1456)]);
    assert_eq!(e.ad_rank_profile[2], (4, vec![1, 0, 15, 240, 0]));
    let t = fingerprint(E_TILDE, subalgebra_example::FINGERPRINT_FIELDS).unwrap();
    assert_eq!(t.zero_pairs, vec![(2, 64), (3, 513), (4, 2176)]);
    assert_eq!(t.ad_rank_profile[2], (4, vec![1, 3, 60, 192, 0]));
    let h = fingerprint(E_HAT, subalgebra_example::FINGERPRINT_FIELDS).unwrap();
    assert_eq!(h.zero_pairs, vec![(2, 58), (3, 417), (4, 1636)]);
    assert_eq!(h.ad_rank_profile[2], (4, vec![1, 0, 30, 225, 0]));
}

#[test]
fn every_claim_holds() {
    let report = subalgebra_example::run(7, FieldSpec::Rationals).unwrap();
    for c in &report.claims {
        assert!(c.passed, "{}: expected {}, computed {}", c.id, c.expected, c.computed);
    }
    assert_eq!(report.claims.len(), 25);
}

#[test]
fn every_claim_holds_mod_seven() {
    assert!(subalgebra_example::run(6, FieldSpec::prime(7).unwrap()).unwrap().passed());
}
