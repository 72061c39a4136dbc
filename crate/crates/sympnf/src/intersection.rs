//! Intersection pairings: the adapted-basis intersection matrix computed
//! from the class data, the pairing carried by the presentation's own basis,
//! and an independent combinatorial oracle that reads the pairing off a
//! one-vertex surface symbol by walking the corner identifications around
//! the vertex.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::class_data::{mod_inverse, ConjugacyClass};
use crate::matrix::{standard_j, IntMatrix};
use crate::presentation::{Generator, Word};
use crate::{Error, Result};

/// Label of an orbit representative: residue value `s` and occurrence index
/// `v` within the multiplicity of `s`. Ordered lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PairLabel {
    pub s: i64,
    pub v: i64,
}

/// All labels `(s, v)` with `1 <= v <= m_s` in lexicographic order, minus
/// the two smallest; these index the orbits kept in the adapted basis.
pub fn kept_pairs(class: &ConjugacyClass) -> Vec<PairLabel> {
    let m = class.multiplicities();
    let mut all: Vec<PairLabel> = Vec::new();
    for s in 1..class.p {
        for v in 1..=m[(s - 1) as usize] {
            all.push(PairLabel { s, v });
        }
    }
    all.into_iter().skip(2).collect()
}

fn bracket(class: &ConjugacyClass) -> Result<impl Fn(i64) -> i64> {
    let p = class.p;
    let m = class.multiplicities();
    let shat = (1..p)
        .find(|&s| m[(s - 1) as usize] > 0)
        .ok_or_else(|| Error::Validation("empty rotation tuple has no pairs".into()))?;
    let qhat = mod_inverse(shat, p)?;
    Ok(move |v: i64| (qhat * v).rem_euclid(p))
}

/// `h^0(X_a) x h^k(X_b)` for labels `a <= b`, by the two case formulas over
/// the least non-negative residues of `qhat * (.)` mod `p`.
pub fn pair_intersection(
    class: &ConjugacyClass,
    a: PairLabel,
    b: PairLabel,
    k: i64,
) -> Result<i64> {
    if a > b {
        return Err(Error::Validation("pair_intersection expects a <= b".into()));
    }
    let br = bracket(class)?;
    let (r, s) = (a.s, b.s);
    Ok(if a == b {
        if k.rem_euclid(class.p) == 0 {
            0
        } else if br(k) <= br(s) && br(s) < br(k + s) {
            1
        } else if br(k + s) < br(s) && br(s) < br(k) {
            -1
        } else {
            0
        }
    } else if br(k) < br(r) && br(r) <= br(k + s) {
        1
    } else if br(k + s) < br(r) && br(r) <= br(k) {
        -1
    } else {
        0
    })
}

/// Pairing of `h^j(X_a) x h^k(X_b)` for arbitrary labels and powers, via the
/// shift identity and antisymmetry.
pub fn pairing_shifted(
    class: &ConjugacyClass,
    a: PairLabel,
    j: i64,
    b: PairLabel,
    k: i64,
) -> Result<i64> {
    if a <= b {
        pair_intersection(class, a, b, (k - j).rem_euclid(class.p))
    } else {
        Ok(-pairing_shifted(class, b, k, a, j)?)
    }
}

/// The full `2g x 2g` intersection matrix of the adapted basis, in the block
/// layout `[[0, I_{pg0}, 0], [-I_{pg0}, 0, 0], [0, 0, B]]`; `B` is indexed by
/// the kept pairs, each contributing its images at powers `0..p-2`
/// consecutively.
pub fn adapted_intersection(class: &ConjugacyClass) -> Result<IntMatrix> {
    let pg0 = (class.p * class.g0) as usize;
    let b = adapted_intersection_block(class)?;
    let ab = standard_j(pg0, 0);
    Ok(IntMatrix::block_diag(&[&ab, &b]))
}

/// The `2q x 2q` orbit block of [`adapted_intersection`].
pub fn adapted_intersection_block(class: &ConjugacyClass) -> Result<IntMatrix> {
    let kept = kept_pairs(class);
    let pm1 = (class.p - 1) as usize;
    let n = kept.len() * pm1;
    let mut out = IntMatrix::zeros(n, n);
    for (ia, &a) in kept.iter().enumerate() {
        for j in 0..pm1 {
            for (ib, &b) in kept.iter().enumerate() {
                for k in 0..pm1 {
                    let v = pairing_shifted(class, a, j as i64, b, k as i64)?;
                    out.set(ia * pm1 + j, ib * pm1 + k, BigInt::from(v));
                }
            }
        }
    }
    Ok(out)
}

/// Change of coordinates from the presentation's orbit basis to the kept-pair
/// basis: the `r`-th surviving generator is the image of the `r`-th kept
/// pair's curve under the power given by its coset shift, with the top power
/// expanding to the negated sum of the lower ones.
fn pair_basis_change(class: &ConjugacyClass) -> IntMatrix {
    let p = class.p;
    let t = class.t();
    let pm1 = (p - 1) as usize;
    let n = (t - 2) * pm1;
    let mut w = IntMatrix::zeros(n, n);
    let mut shift = vec![0i64; t + 1];
    for j in 1..=t {
        shift[j] = (shift[j - 1] + class.n[j - 1]).rem_euclid(p);
    }
    for (rj, r) in (3..=t).enumerate() {
        let c = shift[r - 1];
        for v in 0..pm1 {
            let col = rj * pm1 + v;
            let pw = (v as i64 + c).rem_euclid(p) as usize;
            if pw < pm1 {
                w.set(rj * pm1 + pw, col, BigInt::one());
            } else {
                for k in 0..pm1 {
                    w.set(rj * pm1 + k, col, -BigInt::one());
                }
            }
        }
    }
    w
}

/// Intersection matrix in the presentation's own basis ordering
/// (A images, B images, surviving orbit generators).
///
/// The handle part is the standard two-block form. The orbit block is the
/// kept-pair pairing transported through [`pair_basis_change`] and negated:
/// the boundary orientation implied by the relator is opposite to the
/// orientation in which the adapted pairing formulas are stated. Both the
/// symbol oracle and the end-to-end transport to the standard form confirm
/// this sign on every admissible class.
pub fn presentation_intersection(class: &ConjugacyClass) -> Result<IntMatrix> {
    let pg0 = (class.p * class.g0) as usize;
    let ab = standard_j(pg0, 0);
    if class.t() <= 2 {
        return Ok(ab);
    }
    let bx = adapted_intersection_block(class)?;
    let w = pair_basis_change(class);
    let by = w.transpose().mul(&bx).mul(&w).neg();
    Ok(IntMatrix::block_diag(&[&ab, &by]))
}

/// An evenly-worded symbol in which every edge occurs exactly once with each
/// sign, together with its edge universe in order of first occurrence.
#[derive(Clone, Debug)]
pub struct SurfaceSymbol {
    pub letters: Word,
    pub edges: Vec<Generator>,
}

impl SurfaceSymbol {
    pub fn new(letters: Word) -> Result<Self> {
        let mut seen: BTreeMap<Generator, (usize, usize)> = BTreeMap::new();
        let mut edges = Vec::new();
        for l in &letters {
            let e = seen.entry(l.gen).or_insert_with(|| {
                edges.push(l.gen);
                (0, 0)
            });
            if l.sign > 0 {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        for (g, (pos, neg)) in &seen {
            if *pos != 1 || *neg != 1 {
                return Err(Error::Validation(format!(
                    "edge {g} occurs {pos} times positively and {neg} negatively; expected once each"
                )));
            }
        }
        Ok(SurfaceSymbol { letters, edges })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Algebraic intersection numbers of the edge loops of a one-vertex symbol.
///
/// Cutting along the edges leaves a polygon; gluing it back, the edge loops
/// meet only at the single vertex. Walking the polygon corners around that
/// vertex yields the cyclic order of the loop strands, and two loops
/// intersect once with a sign iff their strand pairs interleave. Returns the
/// matrix over `symbol.edges` order.
pub fn symbol_intersection(symbol: &SurfaceSymbol) -> Result<IntMatrix> {
    let m = symbol.len();
    let edges = &symbol.edges;
    let nedges = edges.len();
    if m == 0 {
        return Ok(IntMatrix::zeros(0, 0));
    }
    let mut pos: BTreeMap<(Generator, i8), usize> = BTreeMap::new();
    for (i, l) in symbol.letters.iter().enumerate() {
        pos.insert((l.gen, l.sign), i);
    }
    let partner = |side: usize| -> usize {
        let l = symbol.letters[side];
        pos[&(l.gen, -l.sign)]
    };
    // Corner walk: from the corner at polygon vertex v, cross the head end
    // of side v-1 onto the tail of its partner side. Each crossing is one
    // strand of an edge loop: the incoming strand for a positive side, the
    // outgoing strand for a negative one.
    let mut link: Vec<(Generator, bool)> = Vec::with_capacity(m); // (edge, is_in)
    let mut corners = vec![false; m];
    let mut v = 0usize;
    for _ in 0..m {
        if corners[v] {
            return Err(Error::Validation(
                "not a one-vertex surface symbol: corner walk closed early".into(),
            ));
        }
        corners[v] = true;
        let side = (v + m - 1) % m;
        let l = symbol.letters[side];
        link.push((l.gen, l.sign > 0));
        v = partner(side);
    }
    let lpos: BTreeMap<(Generator, bool), usize> =
        link.iter().enumerate().map(|(i, &pt)| (pt, i)).collect();
    let mut out = IntMatrix::zeros(nedges, nedges);
    for (ie, &e) in edges.iter().enumerate() {
        let e_in = lpos[&(e, true)];
        let e_out = lpos[&(e, false)];
        let span = (e_out + m - e_in) % m;
        for (jf, &f) in edges.iter().enumerate() {
            if ie == jf {
                continue;
            }
            let f_in = (lpos[&(f, true)] + m - e_in) % m;
            let f_out = (lpos[&(f, false)] + m - e_in) % m;
            let in_between = 0 < f_in && f_in < span;
            let out_between = 0 < f_out && f_out < span;
            let v = if in_between == out_between {
                0
            } else if in_between {
                1
            } else {
                -1
            };
            out.set(ie, jf, BigInt::from(v));
        }
    }
    Ok(out)
}

/// Convenience: reindex a symbol pairing to a caller-chosen edge order.
pub fn reindex_pairing(m: &IntMatrix, from: &[Generator], to: &[Generator]) -> Result<IntMatrix> {
    let idx: BTreeMap<&Generator, usize> = from.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut out = IntMatrix::zeros(to.len(), to.len());
    for (i, gi) in to.iter().enumerate() {
        for (j, gj) in to.iter().enumerate() {
            let a = idx
                .get(gi)
                .ok_or_else(|| Error::Validation(format!("edge {gi} missing from pairing")))?;
            let b = idx
                .get(gj)
                .ok_or_else(|| Error::Validation(format!("edge {gj} missing from pairing")))?;
            out.set(i, j, m.get(*a, *b).clone());
        }
    }
    Ok(out)
}
