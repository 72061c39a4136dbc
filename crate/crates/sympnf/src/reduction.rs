//! Tight-linking reduction of a surface symbol: rewrite the one-relator
//! symbol as a product of commutators while accumulating the unimodular
//! change of homology basis, so the action matrix is carried to its
//! symplectic canonical block.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intersection::SurfaceSymbol;
use crate::matrix::IntMatrix;
use crate::presentation::{word_inverse, Generator, Letter, Word};
use crate::{Error, Result};

/// Remove adjacent inverse pairs, including across the cyclic seam.
pub fn free_reduce(symbol: &SurfaceSymbol) -> Result<SurfaceSymbol> {
    if symbol.is_empty() {
        return Err(Error::Validation(
            "free reduction of an empty symbol".into(),
        ));
    }
    let mut w: Word = symbol.letters.clone();
    loop {
        let mut out: Word = Vec::with_capacity(w.len());
        for &l in &w {
            if out.last().is_some_and(|p| *p == l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        // cyclic seam
        while out.len() >= 2 && out[0] == out[out.len() - 1].inverse() {
            out.pop();
            out.remove(0);
        }
        if out.len() == w.len() {
            break;
        }
        if out.is_empty() {
            return Err(Error::Validation("symbol reduced to the empty word".into()));
        }
        w = out;
    }
    SurfaceSymbol::new(w)
}

fn has_adjacent_inverse(w: &[Letter]) -> bool {
    if w.len() < 2 {
        return false;
    }
    (0..w.len()).any(|i| w[(i + 1) % w.len()] == w[i].inverse())
}

/// Decomposition of a symbol at its leftmost letter: `a W1 b W2 a^-1 W3 b^-1 W4`
/// where `b` is the first letter after `a` whose occurrences interleave with
/// `a`'s.
#[derive(Clone, Debug)]
pub struct LinkDecomposition {
    pub a: Letter,
    pub b: Letter,
    pub w1: Word,
    pub w2: Word,
    pub w3: Word,
    pub w4: Word,
}

/// Find the first edge optimally linked with the leftmost letter.
pub fn find_link(symbol: &SurfaceSymbol) -> Result<LinkDecomposition> {
    let w = &symbol.letters;
    if w.is_empty() {
        return Err(Error::Validation("find_link on an empty symbol".into()));
    }
    let a = w[0];
    let ia = (1..w.len())
        .find(|&i| w[i] == a.inverse())
        .expect("evenly worded");
    for j in 1..ia {
        let b = w[j];
        if let Some(k) = (ia + 1..w.len()).find(|&k| w[k] == b.inverse()) {
            return Ok(LinkDecomposition {
                a,
                b,
                w1: w[1..j].to_vec(),
                w2: w[j + 1..ia].to_vec(),
                w3: w[ia + 1..k].to_vec(),
                w4: w[k + 1..].to_vec(),
            });
        }
    }
    Err(Error::Validation(
        "not a one-vertex surface symbol: leftmost edge has no linked partner".into(),
    ))
}

/// One consumed commutator pair.
#[derive(Clone, Debug)]
pub struct PairRecord {
    /// Slot (in the entry basis) replaced by the first component.
    pub slot_first: usize,
    /// Slot replaced by the second component.
    pub slot_second: usize,
    /// The components as words over the original edges.
    pub first_word: Word,
    pub second_word: Word,
    /// Homology classes of the components in entry-basis coordinates.
    pub first_class: Vec<BigInt>,
    pub second_class: Vec<BigInt>,
}

/// Per-iteration audit record.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub a: Letter,
    pub b: Letter,
    pub tight_shortcut: bool,
    pub separator_lengths: [usize; 4],
    pub basis_change_det: BigInt,
    pub columns_changed: usize,
}

/// Running state of the reduction loop.
pub struct ReductionState {
    /// Remaining symbol.
    pub symbol: Word,
    /// Edge -> slot in the entry basis.
    slots: std::collections::BTreeMap<Generator, usize>,
    /// Dimension of the ambient basis (entry basis size).
    dim: usize,
    /// Accumulated change of basis: columns are the current basis in entry
    /// coordinates.
    pub transform: IntMatrix,
    /// Inverse of `transform`, accumulated incrementally.
    pub transform_inverse: IntMatrix,
    pub pairs: Vec<PairRecord>,
    pub steps: Vec<StepRecord>,
}

impl ReductionState {
    pub fn new(symbol: &SurfaceSymbol, slot_of: impl Fn(&Generator) -> usize, dim: usize) -> Self {
        let slots = symbol.edges.iter().map(|e| (*e, slot_of(e))).collect();
        ReductionState {
            symbol: symbol.letters.clone(),
            slots,
            dim,
            transform: IntMatrix::identity(dim),
            transform_inverse: IntMatrix::identity(dim),
            pairs: Vec::new(),
            steps: Vec::new(),
        }
    }

    fn class_of_word(&self, w: &[Letter]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        for l in w {
            v[self.slots[&l.gen]] += l.sign as i64;
        }
        v
    }

    /// Apply the two-column basis change replacing `slot_a` by `u` and
    /// `slot_b` by `w` (coordinates over never-consumed slots, which are
    /// still unit columns of the accumulated transform).
    fn apply_basis_change(
        &mut self,
        slot_a: usize,
        u: &[BigInt],
        slot_b: usize,
        w: &[BigInt],
    ) -> Result<BigInt> {
        let det = &u[slot_a] * &w[slot_b] - &u[slot_b] * &w[slot_a];
        if !(det == BigInt::one() || det == -BigInt::one()) {
            return Err(Error::Invariant {
                stage: "reduction",
                detail: format!("basis change determinant {det} is not a unit"),
            });
        }
        self.transform.set_column(slot_a, u);
        self.transform.set_column(slot_b, w);
        // Woodbury update of the inverse: B = I + (u - e_a) e_a^T + (w - e_b) e_b^T,
        // B^-1 = I - [u - e_a, w - e_b] D^-1 [e_a, e_b]^T with D the 2x2 minor.
        let (d00, d01, d10, d11) = (
            u[slot_a].clone(),
            w[slot_a].clone(),
            u[slot_b].clone(),
            w[slot_b].clone(),
        );
        // D^-1 = adj(D) / det, det = +-1
        let (i00, i01, i10, i11) = if det == BigInt::one() {
            (d11.clone(), -d01.clone(), -d10.clone(), d00.clone())
        } else {
            (-d11.clone(), d01.clone(), d10.clone(), -d00.clone())
        };
        // rows slot_a, slot_b of the current inverse
        let ra: Vec<BigInt> = (0..self.dim)
            .map(|j| self.transform_inverse.get(slot_a, j).clone())
            .collect();
        let rb: Vec<BigInt> = (0..self.dim)
            .map(|j| self.transform_inverse.get(slot_b, j).clone())
            .collect();
        // t = D^-1 * [ra; rb]  (2 x dim)
        let ta: Vec<BigInt> = (0..self.dim)
            .map(|j| &i00 * &ra[j] + &i01 * &rb[j])
            .collect();
        let tb: Vec<BigInt> = (0..self.dim)
            .map(|j| &i10 * &ra[j] + &i11 * &rb[j])
            .collect();
        // inverse -= (u - e_a) ta + (w - e_b) tb
        for i in 0..self.dim {
            let cu = if i == slot_a {
                &u[i] - BigInt::one()
            } else {
                u[i].clone()
            };
            let cw = if i == slot_b {
                &w[i] - BigInt::one()
            } else {
                w[i].clone()
            };
            if cu.is_zero() && cw.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let mut delta = BigInt::zero();
                if !cu.is_zero() && !ta[j].is_zero() {
                    delta += &cu * &ta[j];
                }
                if !cw.is_zero() && !tb[j].is_zero() {
                    delta += &cw * &tb[j];
                }
                if !delta.is_zero() {
                    let v = self.transform_inverse.get(i, j) - delta;
                    self.transform_inverse.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// One linking-and-truncation iteration. Consumes four occurrences from the
/// symbol, appends a commutator pair, and composes the basis change.
pub fn link_step(state: &mut ReductionState) -> Result<()> {
    if state.symbol.is_empty() {
        return Err(Error::Validation("link_step on an empty symbol".into()));
    }
    if has_adjacent_inverse(&state.symbol) {
        return Err(Error::Invariant {
            stage: "reduction",
            detail: "free reduction became applicable during the loop".into(),
        });
    }
    let w = &state.symbol;
    // tight prefix shortcut: consume x y x^-1 y^-1 as the pair (x, y)
    if w.len() >= 4 && w[2] == w[0].inverse() && w[3] == w[1].inverse() && w[0].gen != w[1].gen {
        let (a, b) = (w[0], w[1]);
        let u = state.class_of_word(&[a]);
        let v = state.class_of_word(&[b]);
        let sa = state.slots[&a.gen];
        let sb = state.slots[&b.gen];
        let det = state.apply_basis_change(sa, &u, sb, &v)?;
        state.pairs.push(PairRecord {
            slot_first: sa,
            slot_second: sb,
            first_word: vec![a],
            second_word: vec![b],
            first_class: u,
            second_class: v,
        });
        state.steps.push(StepRecord {
            a,
            b,
            tight_shortcut: true,
            separator_lengths: [0; 4],
            basis_change_det: det,
            columns_changed: (a.sign < 0) as usize + (b.sign < 0) as usize,
        });
        state.symbol = state.symbol[4..].to_vec();
        return Ok(());
    }
    let dec = find_link(&SurfaceSymbol::new(state.symbol.clone())?)?;
    let LinkDecomposition {
        a,
        b,
        w1,
        w2,
        w3,
        w4,
    } = dec;
    let mut first_word: Word = vec![a];
    first_word.extend(w1.iter().copied());
    first_word.push(b);
    first_word.extend(w2.iter().copied());
    first_word.push(a.inverse());
    let mut second_word: Word = w3.clone();
    second_word.extend(w2.iter().copied());
    second_word.push(a.inverse());
    let u = state.class_of_word(&first_word);
    let v = state.class_of_word(&second_word);
    let sa = state.slots[&a.gen];
    let sb = state.slots[&b.gen];
    let det = state.apply_basis_change(sa, &u, sb, &v)?;
    state.pairs.push(PairRecord {
        slot_first: sa,
        slot_second: sb,
        first_word,
        second_word,
        first_class: u,
        second_class: v,
    });
    state.steps.push(StepRecord {
        a,
        b,
        tight_shortcut: false,
        separator_lengths: [w1.len(), w2.len(), w3.len(), w4.len()],
        basis_change_det: det,
        columns_changed: 2,
    });
    let mut next = w3;
    next.extend(w2);
    next.extend(w1);
    next.extend(w4);
    state.symbol = next;
    Ok(())
}

/// Output of [`tighten`].
pub struct TightenOutput {
    /// The already-tight handle pairs passed in, in order.
    pub handle_pairs: Vec<(Generator, Generator)>,
    /// Canonical action matrix in the final ordering.
    pub matrix: IntMatrix,
    /// Columns: final basis in entry-basis coordinates.
    pub transform: IntMatrix,
    /// Names of the final basis elements.
    pub basis: Vec<BasisElement>,
    pub pairs: Vec<PairRecord>,
    pub steps: Vec<StepRecord>,
}

/// A final-basis element: either a surviving generator of the presentation
/// or a component of a reduced commutator pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisElement {
    Generator(Generator),
    PairFirst(usize),
    PairSecond(usize),
}

impl std::fmt::Display for BasisElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisElement::Generator(g) => write!(f, "{g}"),
            BasisElement::PairFirst(k) => write!(f, "M:{}", k + 1),
            BasisElement::PairSecond(k) => write!(f, "N:{}", k + 1),
        }
    }
}

/// Run the reduction loop on the fixed-point part of the symbol and carry
/// the action matrix to the canonical ordering (A images, B images, reduced
/// firsts, reduced seconds).
///
/// `handle_pairs` lists the already-tight commutator pairs of the prefix (in
/// order), `entry_matrix` is the action on the full entry basis, and
/// `entry_edges` maps the symbol's edges to entry-basis slots.
pub fn tighten(
    handle_pairs: &[(Generator, Generator)],
    entry_matrix: &IntMatrix,
    lrhat: &SurfaceSymbol,
    entry_edges: &[Generator],
) -> Result<TightenOutput> {
    let dim = entry_matrix.rows();
    if !lrhat.len().is_multiple_of(4) {
        return Err(Error::Validation(format!(
            "symbol length {} is not divisible by 4",
            lrhat.len()
        )));
    }
    let q = lrhat.len() / 4;
    let slot_of = |g: &Generator| -> usize {
        2 * handle_pairs.len()
            + entry_edges
                .iter()
                .position(|e| e == g)
                .expect("symbol edge missing from entry basis")
    };
    let mut state = ReductionState::new(lrhat, slot_of, dim);
    let mut iterations = 0usize;
    while !state.symbol.is_empty() {
        iterations += 1;
        if iterations > q {
            return Err(Error::Invariant {
                stage: "reduction",
                detail: format!("iteration bound {q} exceeded"),
            });
        }
        link_step(&mut state)?;
    }
    for s in &state.steps {
        if s.columns_changed > 4 {
            return Err(Error::Invariant {
                stage: "reduction",
                detail: "basis change touched more than four columns".into(),
            });
        }
    }

    // Final four-block ordering: handle firsts, handle seconds, then the
    // reduced pair firsts and seconds.
    let na = handle_pairs.len();
    let mut order: Vec<(usize, BasisElement)> = Vec::with_capacity(dim);
    for (k, (a, _)) in handle_pairs.iter().enumerate() {
        order.push((k, BasisElement::Generator(*a)));
    }
    for (k, (_, b)) in handle_pairs.iter().enumerate() {
        order.push((na + k, BasisElement::Generator(*b)));
    }
    for (k, pr) in state.pairs.iter().enumerate() {
        order.push((pr.slot_first, BasisElement::PairFirst(k)));
    }
    for (k, pr) in state.pairs.iter().enumerate() {
        order.push((pr.slot_second, BasisElement::PairSecond(k)));
    }
    debug_assert_eq!(order.len(), dim);
    let mut perm = IntMatrix::zeros(dim, dim);
    for (new_col, (old_slot, _)) in order.iter().enumerate() {
        perm.set(*old_slot, new_col, BigInt::one());
    }
    let transform = state.transform.mul(&perm);
    // (V P)^-1 = P^T V^-1
    let transform_inverse = perm.transpose().mul(&state.transform_inverse);
    if !transform.mul(&transform_inverse).is_identity() {
        return Err(Error::Invariant {
            stage: "reduction",
            detail: "accumulated transform is not invertible over the integers".into(),
        });
    }
    // rows-as-images action transport: M_new = V^T M V^-T
    let matrix = transform
        .transpose()
        .mul(entry_matrix)
        .mul(&transform_inverse.transpose());
    let basis: Vec<BasisElement> = order.into_iter().map(|(_, b)| b).collect();
    Ok(TightenOutput {
        handle_pairs: handle_pairs.to_vec(),
        matrix,
        transform,
        basis,
        pairs: state.pairs,
        steps: state.steps,
    })
}

/// The commutator relation as a string over the final basis names.
pub fn commutator_relation_string(out: &TightenOutput) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (a, b) in &out.handle_pairs {
        parts.push(format!("{a} {b} {a}' {b}'"));
    }
    for k in 0..out.pairs.len() {
        parts.push(format!("M:{0} N:{0} M:{0}' N:{0}'", k + 1));
    }
    parts.join(" ")
}

/// Words of the reduced pairs over the original edges, for audit output:
/// the product of their commutators is freely equal to the input symbol.
pub fn audit_commutator_product(out: &TightenOutput) -> Word {
    let mut w = Word::new();
    for pr in &out.pairs {
        w.extend(pr.first_word.iter().copied());
        w.extend(pr.second_word.iter().copied());
        w.extend(word_inverse(&pr.first_word));
        w.extend(word_inverse(&pr.second_word));
    }
    w
}
