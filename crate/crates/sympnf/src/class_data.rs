//! Conjugacy-class input data: validation, normalization, modular
//! bookkeeping, and enumeration of admissible classes per genus.

use crate::{Error, Result};

/// A prime-order conjugacy class, given by the prime `p`, the tuple of
/// complementary rotation numbers at the `t` fixed points, and the quotient
/// genus `g0`. The total genus `g` is derived from the Riemann-Hurwitz
/// relation `2g = 2 p g0 + (p-1)(t-2)` (for `t = 0` this reads
/// `2g = 2p(g0-1) + 2`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjugacyClass {
    pub p: i64,
    /// Rotation tuple, entries in `[1, p-1]`; empty iff the action is free.
    pub n: Vec<i64>,
    pub g0: i64,
    pub g: i64,
}

impl ConjugacyClass {
    pub fn t(&self) -> usize {
        self.n.len()
    }

    /// Multiplicity vector `m[j-1] = #{ i : n_i = j }` for `j = 1..p-1`.
    pub fn multiplicities(&self) -> Vec<i64> {
        let mut m = vec![0i64; (self.p - 1) as usize];
        for &x in &self.n {
            m[(x - 1) as usize] += 1;
        }
        m
    }
}

/// Per-fixed-point rotation data: `s_r` with `s_r * n_r = 1 (mod p)` and
/// `p_r` with `p_r * s_r = p - 1 (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationData {
    pub s: Vec<i64>,
    pub p_r: Vec<i64>,
    pub m: Vec<i64>,
}

pub fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo the prime `p`.
pub fn mod_inverse(a: i64, p: i64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::Validation(format!("{p} is not prime")));
    }
    let a = a.rem_euclid(p);
    if a == 0 {
        return Err(Error::Validation(format!("{a} is not invertible mod {p}")));
    }
    // brute force; inputs are desk-scale
    for x in 1..p {
        if (a * x) % p == 1 {
            return Ok(x);
        }
    }
    unreachable!("prime modulus");
}

/// Genus from the Riemann-Hurwitz relation.
pub fn genus_of(p: i64, t: i64, g0: i64) -> Result<i64> {
    if t == 0 && g0 < 2 {
        return Err(Error::Validation(format!(
            "a free action needs quotient genus at least 2, got g0 = {g0}"
        )));
    }
    let two_g = if t > 0 {
        2 * p * g0 + (p - 1) * (t - 2)
    } else {
        2 * p * (g0 - 1) + 2
    };
    if two_g % 2 != 0 {
        return Err(Error::Validation(format!("2g = {two_g} is odd")));
    }
    let g = two_g / 2;
    if g < 2 {
        return Err(Error::Validation(format!("genus {g} < 2")));
    }
    Ok(g)
}

/// Validate `(p, n, g0)` and compute the genus.
pub fn validate_class(p: i64, n: &[i64], g0: i64) -> Result<ConjugacyClass> {
    if !is_prime(p) {
        return Err(Error::Validation(format!("p = {p} is not prime")));
    }
    if g0 < 0 {
        return Err(Error::Validation(format!("quotient genus g0 = {g0} < 0")));
    }
    let t = n.len() as i64;
    if t == 1 {
        return Err(Error::Validation(
            "t = 1 is impossible: a single nonzero residue cannot sum to 0 mod p".into(),
        ));
    }
    for &x in n {
        if !(1..p).contains(&x) {
            return Err(Error::Validation(format!(
                "rotation number {x} outside [1, {}]",
                p - 1
            )));
        }
    }
    if t > 0 {
        let s: i64 = n.iter().sum();
        if s % p != 0 {
            return Err(Error::Validation(format!(
                "rotation numbers sum to {s}, not 0 mod {p}"
            )));
        }
    }
    if p == 2 && t % 2 != 0 {
        return Err(Error::Validation(format!(
            "p = 2 requires an even t, got {t}"
        )));
    }
    let g = genus_of(p, t, g0)?;
    Ok(ConjugacyClass {
        p,
        n: n.to_vec(),
        g0,
        g,
    })
}

/// Normalize a class to its representative with `n_1 = 1` and the tuple
/// ascending: sort, scale by the inverse of the smallest entry, sort again.
/// Returns the normalized class and the power (the pre-scaling smallest
/// entry) by which a normal form for the representative must be raised.
pub fn normalize_class(class: &ConjugacyClass) -> Result<(ConjugacyClass, i64)> {
    if class.t() < 2 {
        return Err(Error::Validation("normalization needs t >= 2".into()));
    }
    let mut n = class.n.clone();
    n.sort_unstable();
    let n1 = n[0];
    let s1 = mod_inverse(n1, class.p)?;
    let mut scaled: Vec<i64> = n.iter().map(|x| (x * s1).rem_euclid(class.p)).collect();
    scaled.sort_unstable();
    let out = validate_class(class.p, &scaled, class.g0)?;
    Ok((out, n1))
}

/// Rotation data tables for a normalized class.
pub fn rotation_data(class: &ConjugacyClass) -> Result<RotationData> {
    let p = class.p;
    let mut s = Vec::with_capacity(class.t());
    let mut p_r = Vec::with_capacity(class.t());
    for &nr in &class.n {
        let sr = mod_inverse(nr, p)?;
        let pr = (1..p)
            .find(|&x| (x * sr) % p == (p - 1) % p)
            .expect("prime modulus");
        s.push(sr);
        p_r.push(pr);
    }
    Ok(RotationData {
        s,
        p_r,
        m: class.multiplicities(),
    })
}

/// All admissible classes of genus `g` for the prime `p`, keyed by
/// `(g0, sorted n-tuple)`, in ascending `g0` then lexicographic `n` order.
/// Includes the `t = 0` family.
pub fn enumerate_classes(g: i64, p: i64) -> Result<Vec<ConjugacyClass>> {
    if g < 2 {
        return Err(Error::Validation(format!("genus {g} < 2")));
    }
    if !is_prime(p) {
        return Err(Error::Validation(format!("p = {p} is not prime")));
    }
    let mut out = Vec::new();
    let mut g0 = 0i64;
    while 2 * p * g0 <= 2 * g + 2 * (p - 1) {
        let rem = 2 * g - 2 * p * g0;
        if rem >= -2 * (p - 1) && rem.rem_euclid(p - 1) == 0 {
            let t = rem / (p - 1) + 2;
            if t == 0 {
                if g0 >= 2 {
                    out.push(ConjugacyClass {
                        p,
                        n: Vec::new(),
                        g0,
                        g,
                    });
                }
            } else if t >= 2 {
                let mut acc = Vec::with_capacity(t as usize);
                collect_tuples(p, t as usize, 1, &mut acc, &mut |n| {
                    out.push(ConjugacyClass {
                        p,
                        n: n.to_vec(),
                        g0,
                        g,
                    });
                });
            }
        }
        g0 += 1;
    }
    Ok(out)
}

/// Ascending tuples of `left` residues in `[start, p-1]` with sum 0 mod p.
fn collect_tuples(
    p: i64,
    left: usize,
    start: i64,
    acc: &mut Vec<i64>,
    emit: &mut impl FnMut(&[i64]),
) {
    if left == 0 {
        if acc.iter().sum::<i64>() % p == 0 {
            emit(acc);
        }
        return;
    }
    for v in start..p {
        acc.push(v);
        collect_tuples(p, left - 1, v, acc, emit);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert_eq!(mod_inverse(2, 3).unwrap(), 2);
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert!(mod_inverse(0, 7).is_err());
        assert!(mod_inverse(2, 4).is_err());
    }

    #[test]
    fn mod_inverse_brute_force_all_small_primes() {
        for p in 2..=101 {
            if !is_prime(p) {
                continue;
            }
            for a in 1..p {
                let inv = mod_inverse(a, p).unwrap();
                assert_eq!((a * inv) % p, 1);
            }
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_of(3, 5, 0).unwrap(), 3);
        assert_eq!(genus_of(2, 6, 0).unwrap(), 2);
        assert_eq!(genus_of(3, 0, 2).unwrap(), 4);
        assert!(genus_of(3, 0, 1).is_err());
        assert!(genus_of(2, 2, 0).is_err()); // g = 0
    }

    #[test]
    fn validate_examples() {
        let c = validate_class(3, &[1, 1, 2, 1, 1], 0).unwrap();
        assert_eq!(c.g, 3);
        assert!(validate_class(3, &[1, 1], 0).is_err()); // sum = 2
        assert!(validate_class(2, &[1, 1, 1], 0).is_err()); // sum odd
        assert!(validate_class(3, &[3], 0).is_err()); // t = 1 and out of range
        assert!(validate_class(4, &[1, 3], 0).is_err()); // not prime
        assert!(validate_class(5, &[2, 3], 0).is_err()); // genus 0
    }

    #[test]
    fn normalize_examples() {
        let c = validate_class(3, &[1, 1, 2, 1, 1], 0).unwrap();
        let (n, pw) = normalize_class(&c).unwrap();
        assert_eq!(n.n, vec![1, 1, 1, 1, 2]);
        assert_eq!(pw, 1);

        let c = validate_class(3, &[2, 2, 2], 1).unwrap();
        let (n, pw) = normalize_class(&c).unwrap();
        assert_eq!(n.n, vec![1, 1, 1]);
        assert_eq!(pw, 2);

        let c = validate_class(5, &[1, 1, 3], 0).unwrap();
        let (n, pw) = normalize_class(&c).unwrap();
        assert_eq!(n.n, vec![1, 1, 3]);
        assert_eq!(pw, 1);
    }

    #[test]
    fn normalize_idempotent_and_permutation_invariant() {
        let tuples: [&[i64]; 4] = [
            &[1, 1, 2, 1, 1],
            &[2, 2, 2],
            &[1, 2, 2, 1],
            &[4, 4, 4, 4, 4, 2, 2, 1],
        ];
        let ps = [3i64, 3, 3, 5];
        for (n, &p) in tuples.iter().zip(&ps) {
            let g0 = if p == 5 { 0 } else { 1 };
            let c = validate_class(p, n, g0).unwrap();
            let (once, pw1) = normalize_class(&c).unwrap();
            let (twice, pw2) = normalize_class(&once).unwrap();
            assert_eq!(once, twice);
            assert_eq!(pw2, 1);
            // permutation invariance
            let mut perm = n.to_vec();
            perm.reverse();
            perm.rotate_left(1);
            let cp = validate_class(p, &perm, g0).unwrap();
            let (np, pwp) = normalize_class(&cp).unwrap();
            assert_eq!(np, once);
            assert_eq!(pwp, pw1);
        }
    }

    #[test]
    fn rotation_data_examples() {
        let c = validate_class(3, &[1, 1, 1, 1, 2], 0).unwrap();
        let rd = rotation_data(&c).unwrap();
        assert_eq!(rd.s, vec![1, 1, 1, 1, 2]);
        assert_eq!(rd.p_r, vec![2, 2, 2, 2, 1]);

        let c = validate_class(2, &[1, 1, 1, 1, 1, 1], 0).unwrap();
        let rd = rotation_data(&c).unwrap();
        assert!(rd.s.iter().all(|&x| x == 1));
        assert!(rd.p_r.iter().all(|&x| x == 1));

        let c = validate_class(3, &[1, 1, 2, 1, 1], 0).unwrap();
        assert_eq!(c.multiplicities(), vec![4, 1]);
    }

    #[test]
    fn enumerate_examples() {
        let cs = enumerate_classes(2, 3).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!((cs[0].g0, cs[0].n.clone()), (0, vec![1, 1, 2, 2]));

        let cs = enumerate_classes(2, 2).unwrap();
        let keys: Vec<_> = cs.iter().map(|c| (c.g0, c.n.clone())).collect();
        assert_eq!(keys, vec![(0, vec![1, 1, 1, 1, 1, 1]), (1, vec![1, 1])]);

        assert!(enumerate_classes(2, 7).unwrap().is_empty());
    }

    #[test]
    fn enumerate_output_validates() {
        for p in [2, 3, 5, 7] {
            for g in 2..=8 {
                for c in enumerate_classes(g, p).unwrap() {
                    let v = validate_class(c.p, &c.n, c.g0).unwrap();
                    assert_eq!(v.g, g);
                }
            }
        }
    }

    #[test]
    fn enumerate_includes_free_actions() {
        // g = p + 1 admits the free action with g0 = 2
        for p in [2i64, 3, 5] {
            let cs = enumerate_classes(p + 1, p).unwrap();
            assert!(cs.iter().any(|c| c.t() == 0 && c.g0 == 2));
        }
    }
}
