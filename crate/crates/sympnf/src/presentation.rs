//! Adapted homotopy bases: the one-relator presentation of the surface group
//! on which a prime-order mapping class acts by cycling generators, built by
//! Schreier-Reidemeister rewriting of the quotient-orbifold presentation and
//! elimination of the redundant generators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::class_data::ConjugacyClass;
use crate::matrix::{nonperm_block, perm_block, IntMatrix};
use crate::{Error, Result};

/// A symbolic generator of the surface group.
///
/// `A`/`B` are handle generators lifted from the quotient surface (powers
/// `0..p-1`), `Y` are the fixed-point generators that survive elimination
/// (basis powers `0..p-2`, although words may mention power `p-1` before it
/// is rewritten away). `Alpha`/`Beta` only occur for free actions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    A { i: u32, v: u32 },
    B { i: u32, v: u32 },
    Y { r: u32, v: u32 },
    Alpha,
    Beta,
}

impl Generator {
    pub fn power(&self) -> u32 {
        match *self {
            Generator::A { v, .. } | Generator::B { v, .. } | Generator::Y { v, .. } => v,
            Generator::Alpha | Generator::Beta => 0,
        }
    }

    pub fn with_power(&self, v: u32) -> Generator {
        match *self {
            Generator::A { i, .. } => Generator::A { i, v },
            Generator::B { i, .. } => Generator::B { i, v },
            Generator::Y { r, .. } => Generator::Y { r, v },
            g => g,
        }
    }

    pub fn is_handle(&self) -> bool {
        matches!(self, Generator::A { .. } | Generator::B { .. })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::A { i, v } => write!(f, "A:{i}:{v}"),
            Generator::B { i, v } => write!(f, "B:{i}:{v}"),
            Generator::Y { r, v } => write!(f, "Y:{r}:{v}"),
            Generator::Alpha => write!(f, "alpha"),
            Generator::Beta => write!(f, "beta"),
        }
    }
}

/// One signed occurrence in a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: Generator,
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: Generator, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Letter { gen, sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen,
            sign: -self.sign,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen, if self.sign < 0 { "'" } else { "" })
    }
}

pub type Word = Vec<Letter>;

/// Inverse word: reversed order, inverted letters.
pub fn word_inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(Letter::inverse).collect()
}

/// Free reduction of a linear word.
pub fn free_reduce_word(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last().is_some_and(|p| *p == l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Parse the textual grammar: whitespace-separated letters `Y:r:v`, `A:i:v`,
/// `B:i:v`, `alpha`, `beta`, with a trailing `'` for an inverse.
pub fn parse_word(s: &str) -> Result<Word> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (body, sign) = match tok.strip_suffix('\'') {
            Some(b) => (b, -1),
            None => (tok, 1),
        };
        let gen = match body {
            "alpha" => Generator::Alpha,
            "beta" => Generator::Beta,
            _ => {
                let parts: Vec<&str> = body.split(':').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("bad generator token {tok:?}")));
                }
                let idx: u32 = parts[1]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
                let v: u32 = parts[2]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad power in {tok:?}")))?;
                match parts[0] {
                    "A" => Generator::A { i: idx, v },
                    "B" => Generator::B { i: idx, v },
                    "Y" => Generator::Y { r: idx, v },
                    _ => return Err(Error::Parse(format!("bad generator kind in {tok:?}"))),
                }
            }
        };
        out.push(Letter::new(gen, sign));
    }
    Ok(out)
}

pub fn word_to_string(w: &[Letter]) -> String {
    w.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `h^{u_1}(U) h^{u_2}(U) ... h^{u_k}(U)`, powers reduced mod `p`. Applying
/// `h^u` to a word shifts the power of every letter, preserving order and
/// signs.
pub fn power_word(base: &[Letter], exps: &[i64], p: i64) -> Word {
    let mut out = Vec::with_capacity(base.len() * exps.len());
    for &u in exps {
        for l in base {
            let v = (l.gen.power() as i64 + u).rem_euclid(p) as u32;
            out.push(Letter::new(l.gen.with_power(v), l.sign));
        }
    }
    out
}

/// The adapted presentation: a one-relator presentation whose relation is a
/// surface symbol, split as a commutator prefix (`qhat`, the handle part)
/// followed by the fixed-point part (`lrhat`).
#[derive(Clone, Debug)]
pub struct Presentation {
    pub class: ConjugacyClass,
    /// Basis ordering: all A images, all B images, then Y generators;
    /// within each family the h-power ascends fastest.
    pub generators: Vec<Generator>,
    pub relation: Word,
    pub qhat: Word,
    pub lrhat: Word,
    /// For each handle generator, the word it was conjugated by when the
    /// commutator prefix was assembled (audit data; homology classes are
    /// unchanged by conjugation).
    pub conjugators: BTreeMap<Generator, Word>,
    /// For `r = 3..=t`, the word equal to the inverse of the `(p-1)`-st
    /// image of `Y_r` in the surviving generators.
    pub max_power_expansion: BTreeMap<u32, Word>,
}

impl Presentation {
    pub fn index_of(&self, g: &Generator) -> Option<usize> {
        self.generators.iter().position(|x| x == g)
    }
}

/// Signed occurrence counts of `w` over an ordered generator list.
pub fn abelianize(w: &[Letter], basis: &[Generator]) -> Result<Vec<BigInt>> {
    let index: BTreeMap<&Generator, usize> =
        basis.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut out = vec![BigInt::zero(); basis.len()];
    for l in w {
        match index.get(&l.gen) {
            Some(&i) => out[i] += l.sign as i64,
            None => {
                return Err(Error::Validation(format!(
                    "letter {} is not in the given basis",
                    l
                )))
            }
        }
    }
    Ok(out)
}

/// Prefix sums `c_j = n_1 + ... + n_{j-1} mod p` of the rotation tuple; the
/// Schreier coset of the relator prefix ending just before the `j`-th
/// branch generator.
fn coset_shifts(class: &ConjugacyClass) -> Vec<i64> {
    let p = class.p;
    let mut c = vec![0i64; class.t() + 1];
    for j in 1..=class.t() {
        c[j] = (c[j - 1] + class.n[j - 1]).rem_euclid(p);
    }
    c
}

/// The word `W_r` with `h^{p-1}(Y_r) = W_r^{-1}`: rewriting the order
/// relation of the `r`-th branch point expresses the top image of `Y_r` in
/// the surviving powers.
fn max_power_word(class: &ConjugacyClass, shifts: &[i64], r: usize) -> Word {
    let p = class.p;
    let n_r = class.n[r - 1];
    let c_r = shifts[r - 1];
    // exponent of the k-th letter of the rewritten order relation
    let exp = |k: i64| (k * n_r - c_r).rem_euclid(p);
    let kstar = (0..p)
        .find(|&k| exp(k) == p - 1)
        .expect("n_r invertible mod p");
    let mut w = Word::new();
    for k in (kstar + 1..p).chain(0..kstar) {
        w.push(Letter::new(
            Generator::Y {
                r: r as u32,
                v: exp(k) as u32,
            },
            1,
        ));
    }
    w
}

/// Build the adapted presentation for a normalized class with `t >= 2`.
///
/// The single relation is assembled by inverting the order relation of the
/// second branch point, substituting the long-relation expressions for the
/// images of its generator, and eliminating every top power via
/// [`max_power_word`]. Handle commutators are then conjugated to the front.
/// Every invariant is certified before returning.
pub fn build_presentation(class: &ConjugacyClass) -> Result<Presentation> {
    let p = class.p;
    let t = class.t();
    if t < 2 {
        return Err(Error::Validation(
            "presentation construction needs t >= 2".into(),
        ));
    }
    if class.n[0] != 1 || !class.n.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::Validation(
            "presentation construction expects a normalized class (ascending, n_1 = 1)".into(),
        ));
    }
    let g0 = class.g0 as u32;
    let shifts = coset_shifts(class);
    let max_exp: BTreeMap<u32, Word> = (3..=t)
        .map(|r| (r as u32, word_inverse(&max_power_word(class, &shifts, r))))
        .collect();

    // G_v: the inverse of the v-th image of the eliminated branch generator,
    // as a positive word in the surviving ones.
    let sub = |v: i64| -> Word {
        let mut w = Word::new();
        for r in 3..=t {
            if v == p - 1 {
                w.extend_from_slice(&max_exp[&(r as u32)]);
            } else {
                w.push(Letter::new(
                    Generator::Y {
                        r: r as u32,
                        v: v as u32,
                    },
                    1,
                ));
            }
        }
        for i in 1..=g0 {
            let a = Generator::A { i, v: v as u32 };
            let b = Generator::B { i, v: v as u32 };
            w.push(Letter::new(a, 1));
            w.push(Letter::new(b, 1));
            w.push(Letter::new(a, -1));
            w.push(Letter::new(b, -1));
        }
        w
    };

    let n2 = class.n[1];
    let c2 = shifts[1];
    let mut relation = Word::new();
    for k in (0..p).rev() {
        relation.extend(sub((k * n2 - c2).rem_euclid(p)));
    }

    // Hoist handle commutators to the front, logging conjugators.
    let mut lrhat = Word::new();
    let mut qhat = Word::new();
    let mut conjugators = BTreeMap::new();
    let mut prefix = Word::new();
    let mut i = 0;
    while i < relation.len() {
        let l = relation[i];
        if !l.gen.is_handle() {
            lrhat.push(l);
            prefix.push(l);
            i += 1;
        } else {
            let block = &relation[i..i + 4];
            qhat.extend_from_slice(block);
            conjugators.insert(block[0].gen, prefix.clone());
            conjugators.insert(block[1].gen, prefix.clone());
            i += 4;
        }
    }
    // Conjugator audit: re-inserting the logged conjugators around each
    // hoisted commutator must reproduce the raw relation in the free group.
    let mut audited = Word::new();
    let mut i = 0;
    while i < qhat.len() {
        let block = &qhat[i..i + 4];
        let c = &conjugators[&block[0].gen];
        audited.extend(c.iter().copied());
        audited.extend_from_slice(block);
        audited.extend(word_inverse(c));
        i += 4;
    }
    audited.extend(lrhat.iter().copied());
    if free_reduce_word(&audited) != free_reduce_word(&relation) {
        return Err(Error::Invariant {
            stage: "presentation",
            detail: "conjugator log does not reproduce the relation".into(),
        });
    }
    let relation: Word = qhat.iter().chain(lrhat.iter()).copied().collect();

    let generators: Vec<Generator> = (1..=g0)
        .flat_map(|i| (0..p as u32).map(move |v| Generator::A { i, v }))
        .chain((1..=g0).flat_map(|i| (0..p as u32).map(move |v| Generator::B { i, v })))
        .chain((3..=t as u32).flat_map(|r| (0..(p - 1) as u32).map(move |v| Generator::Y { r, v })))
        .collect();

    let pres = Presentation {
        class: class.clone(),
        generators,
        relation,
        qhat,
        lrhat,
        conjugators,
        max_power_expansion: max_exp,
    };
    certify(&pres)?;
    Ok(pres)
}

/// Abort with a diagnostic if any presentation invariant fails.
fn certify(pres: &Presentation) -> Result<()> {
    let g = pres.class.g;
    let fail = |detail: String| {
        Err(Error::Invariant {
            stage: "presentation",
            detail,
        })
    };
    if pres.generators.len() as i64 != 2 * g {
        return fail(format!(
            "{} generators, expected {}",
            pres.generators.len(),
            2 * g
        ));
    }
    if pres.relation.len() as i64 != 4 * g {
        return fail(format!(
            "relation length {}, expected {}",
            pres.relation.len(),
            4 * g
        ));
    }
    let mut counts: BTreeMap<(Generator, i8), usize> = BTreeMap::new();
    for l in &pres.relation {
        *counts.entry((l.gen, l.sign)).or_default() += 1;
    }
    for gen in &pres.generators {
        for sign in [1i8, -1] {
            if counts.get(&(*gen, sign)).copied().unwrap_or(0) != 1 {
                return fail(format!(
                    "{gen} does not occur exactly once with sign {sign}"
                ));
            }
        }
    }
    let ab = abelianize(&pres.relation, &pres.generators)?;
    if ab.iter().any(|x| !x.is_zero()) {
        return fail("relation does not abelianize to zero".into());
    }
    let joined: Word = pres.qhat.iter().chain(pres.lrhat.iter()).copied().collect();
    if joined != pres.relation {
        return fail("relation is not qhat * lrhat".into());
    }
    // full linkage of the fixed-point part
    if !pres.lrhat.is_empty() {
        let m = pres.lrhat.len();
        let pos: BTreeMap<(Generator, i8), usize> = pres
            .lrhat
            .iter()
            .enumerate()
            .map(|(i, l)| ((l.gen, l.sign), i))
            .collect();
        let edges: Vec<Generator> = pres
            .generators
            .iter()
            .filter(|g| !g.is_handle())
            .copied()
            .collect();
        for x in &edges {
            let xp = pos[&(*x, 1)];
            let xm = pos[&(*x, -1)];
            let in_arc = |o: usize| -> bool {
                if xp < xm {
                    xp < o && o < xm
                } else {
                    o > xp || o < xm
                }
            };
            let linked = edges
                .iter()
                .any(|y| y != x && (in_arc(pos[&(*y, 1)]) != in_arc(pos[&(*y, -1)])));
            if !linked {
                return fail(format!("edge {x} is not linked to any other edge"));
            }
            let _ = m;
        }
    }
    Ok(())
}

/// Image of a basis generator under the automorphism, as a word in basis
/// generators: bump the power below the top, expand the top power of a `Y`
/// through its order relation, wrap handles around mod `p`.
pub fn h_image(gen: &Generator, pres: &Presentation) -> Word {
    let p = pres.class.p as u32;
    match *gen {
        Generator::A { i, v } => vec![Letter::new(Generator::A { i, v: (v + 1) % p }, 1)],
        Generator::B { i, v } => vec![Letter::new(Generator::B { i, v: (v + 1) % p }, 1)],
        Generator::Y { r, v } => {
            if v < p - 2 {
                vec![Letter::new(Generator::Y { r, v: v + 1 }, 1)]
            } else {
                pres.max_power_expansion[&r].clone()
            }
        }
        Generator::Alpha => vec![Letter::new(Generator::Alpha, 1)],
        Generator::Beta => vec![Letter::new(Generator::Beta, 1)],
    }
}

/// Matrix of the automorphism on the abelianized basis; row `i` is the image
/// of the `i`-th generator.
pub fn adapted_action_matrix(pres: &Presentation) -> Result<IntMatrix> {
    let n = pres.generators.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, gen) in pres.generators.iter().enumerate() {
        let img = abelianize(&h_image(gen, pres), &pres.generators)?;
        for (j, v) in img.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Block matrix of the action on an adapted basis: `g0` permutation blocks
/// for the A part, `g0` for the B part, and `t-2` reduced-orbit blocks.
pub fn adapted_block_matrix(class: &ConjugacyClass) -> IntMatrix {
    let p = class.p;
    let pb = perm_block(p);
    let nb = nonperm_block(p);
    let mut blocks: Vec<&IntMatrix> = Vec::new();
    for _ in 0..2 * class.g0 {
        blocks.push(&pb);
    }
    for _ in 0..class.t().saturating_sub(2) {
        blocks.push(&nb);
    }
    IntMatrix::block_diag(&blocks)
}

/// Presentation and canonical matrix for a free action (`t = 0`).
///
/// Generators are the lifted handles of all but one quotient handle plus a
/// fixed pair `alpha`, `beta`; the relation is already a commutator product,
/// so the matrix is canonical without any reduction: permutation blocks plus
/// an identity pair, in the ordering (A images, alpha | B images, beta).
pub fn t0_presentation(class: &ConjugacyClass) -> Result<(Presentation, IntMatrix)> {
    if class.t() != 0 {
        return Err(Error::Validation("t0_presentation needs t = 0".into()));
    }
    if class.g0 < 2 {
        return Err(Error::Validation("a free action needs g0 >= 2".into()));
    }
    let p = class.p as u32;
    let g0 = class.g0 as u32;
    let handle_block = |v: u32| -> Word {
        let mut w = Word::new();
        for i in 2..=g0 {
            let a = Generator::A { i, v };
            let b = Generator::B { i, v };
            w.push(Letter::new(a, 1));
            w.push(Letter::new(b, 1));
            w.push(Letter::new(a, -1));
            w.push(Letter::new(b, -1));
        }
        w
    };
    // relation: (alpha X alpha^-1) [alpha, beta] h^{p-1}(P), where
    // X = P h(P) ... h^{p-2}(P); emitted over the conjugated handle symbols.
    let mut relation = Word::new();
    let mut conjugators = BTreeMap::new();
    let prefix: Word = vec![Letter::new(Generator::Alpha, 1)];
    for v in 0..p - 1 {
        let blk = handle_block(v);
        let mut i = 0;
        while i < blk.len() {
            conjugators.insert(blk[i].gen, prefix.clone());
            conjugators.insert(blk[i + 1].gen, prefix.clone());
            relation.extend_from_slice(&blk[i..i + 4]);
            i += 4;
        }
    }
    relation.push(Letter::new(Generator::Alpha, 1));
    relation.push(Letter::new(Generator::Beta, 1));
    relation.push(Letter::new(Generator::Alpha, -1));
    relation.push(Letter::new(Generator::Beta, -1));
    let top = handle_block(p - 1);
    let mut i = 0;
    while i < top.len() {
        conjugators.insert(top[i].gen, Word::new());
        conjugators.insert(top[i + 1].gen, Word::new());
        i += 4;
    }
    relation.extend(top);

    let generators: Vec<Generator> = (2..=g0)
        .flat_map(|i| (0..p).map(move |v| Generator::A { i, v }))
        .chain(std::iter::once(Generator::Alpha))
        .chain((2..=g0).flat_map(|i| (0..p).map(move |v| Generator::B { i, v })))
        .chain(std::iter::once(Generator::Beta))
        .collect();

    let d = generators.len() / 2;
    let pb = perm_block(class.p);
    let one = IntMatrix::identity(1);
    let mut blocks: Vec<&IntMatrix> = Vec::new();
    for _ in 0..g0 - 1 {
        blocks.push(&pb);
    }
    blocks.push(&one);
    for _ in 0..g0 - 1 {
        blocks.push(&pb);
    }
    blocks.push(&one);
    let matrix = IntMatrix::block_diag(&blocks);
    debug_assert_eq!(matrix.rows(), 2 * d);

    let pres = Presentation {
        class: class.clone(),
        generators,
        qhat: relation.clone(),
        lrhat: Word::new(),
        relation,
        conjugators,
        max_power_expansion: BTreeMap::new(),
    };
    certify_t0(&pres)?;
    Ok((pres, matrix))
}

fn certify_t0(pres: &Presentation) -> Result<()> {
    let g = pres.class.g;
    let ok = pres.generators.len() as i64 == 2 * g && pres.relation.len() as i64 == 4 * g && {
        let mut counts: BTreeMap<(Generator, i8), usize> = BTreeMap::new();
        for l in &pres.relation {
            *counts.entry((l.gen, l.sign)).or_default() += 1;
        }
        pres.generators.iter().all(|gen| {
            [1i8, -1]
                .iter()
                .all(|&s| counts.get(&(*gen, s)) == Some(&1))
        })
    };
    if !ok {
        return Err(Error::Invariant {
            stage: "presentation",
            detail: "free-action presentation invariants failed".into(),
        });
    }
    Ok(())
}
