//! End-to-end pipeline: validate and normalize the class, build the adapted
//! presentation and action matrix, reduce the symbol, assemble and certify
//! the canonical symplectic matrix, and screen arbitrary prime-order
//! symplectic matrices for finite-order preimages.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::class_data::{
    enumerate_classes, is_prime, normalize_class, validate_class, ConjugacyClass,
};
use crate::intersection::{presentation_intersection, SurfaceSymbol};
use crate::matrix::{is_symplectic, matrix_order, standard_j, IntMatrix};
use crate::presentation::{
    adapted_action_matrix, adapted_block_matrix, build_presentation, t0_presentation, Generator,
    Presentation,
};
use crate::reduction::{
    commutator_relation_string, tighten, BasisElement, StepRecord, TightenOutput,
};
use crate::{Error, Result};

/// The canonical symplectic matrix of a class, with its provenance.
pub struct NormalFormResult {
    /// The class as given.
    pub class: ConjugacyClass,
    /// The normalized representative actually reduced.
    pub normalized: ConjugacyClass,
    /// The power applied to the representative's matrix.
    pub power: i64,
    /// Canonical matrix, rows are images, basis `(A | B | firsts | seconds)`.
    pub matrix: IntMatrix,
    /// `d` and `q` with the reference form `standard_j(d, q)`.
    pub j_shape: (usize, usize),
    /// Final basis names.
    pub basis: Vec<BasisElement>,
    /// Commutator relation over the final basis names.
    pub relation: String,
    /// Final basis in presentation coordinates (columns), when a reduction
    /// ran; identity for the direct cases.
    pub transform: IntMatrix,
    pub order: i64,
    pub trace: BigInt,
    pub symplectic: bool,
    /// Per-iteration reduction audit, when a reduction ran.
    pub steps: Vec<StepRecord>,
    /// The presentation used, when one was built.
    pub presentation: Option<Presentation>,
}

fn handle_pairs_of(class: &ConjugacyClass) -> Vec<(Generator, Generator)> {
    let p = class.p as u32;
    (1..=class.g0 as u32)
        .flat_map(|i| (0..p).map(move |v| (Generator::A { i, v }, Generator::B { i, v })))
        .collect()
}

/// Compute the canonical symplectic matrix for `(p, n, g0)`.
pub fn normal_form(p: i64, n: &[i64], g0: i64) -> Result<NormalFormResult> {
    let class = validate_class(p, n, g0)?;
    let g = class.g as usize;

    if class.t() == 0 {
        let (pres, matrix) = t0_presentation(&class)?;
        let d = g;
        let basis: Vec<BasisElement> = pres
            .generators
            .iter()
            .map(|g| BasisElement::Generator(*g))
            .collect();
        let relation = pres
            .relation
            .chunks(4)
            .map(|blk| {
                format!(
                    "{} {} {}' {}'",
                    blk[0].gen, blk[1].gen, blk[0].gen, blk[1].gen
                )
            })
            .collect::<Vec<_>>()
            .join(" ");
        let out = NormalFormResult {
            class: class.clone(),
            normalized: class,
            power: 1,
            matrix,
            j_shape: (d, 0),
            basis,
            relation,
            transform: IntMatrix::identity(2 * d),
            order: p,
            trace: BigInt::from(2),
            symplectic: true,
            steps: Vec::new(),
            presentation: Some(pres),
        };
        return certify(out);
    }

    let (normalized, power) = normalize_class(&class)?;
    let pres = build_presentation(&normalized)?;
    let m0 = adapted_action_matrix(&pres)?;
    if m0 != adapted_block_matrix(&normalized) {
        return Err(Error::Invariant {
            stage: "presentation",
            detail: "action matrix does not match the adapted block form".into(),
        });
    }
    let handle_pairs = handle_pairs_of(&normalized);
    let y_edges: Vec<Generator> = pres
        .generators
        .iter()
        .filter(|g| !g.is_handle())
        .copied()
        .collect();
    let lrhat = SurfaceSymbol::new(pres.lrhat.clone())?;
    let out = tighten(&handle_pairs, &m0, &lrhat, &y_edges)?;

    // master form transport: the presentation pairing must land exactly on
    // the reference form
    let d = (normalized.p * normalized.g0) as usize;
    let q = ((normalized.p - 1) as usize) * (normalized.t() - 2) / 2;
    let jp = presentation_intersection(&normalized)?;
    let target = standard_j(d, q);
    if out.transform.transpose().mul(&jp).mul(&out.transform) != target {
        return Err(Error::Invariant {
            stage: "reduction",
            detail: "form transport did not reach the reference symplectic form".into(),
        });
    }

    let matrix = if power == 1 {
        out.matrix.clone()
    } else {
        out.matrix.pow(power as u64)
    };
    let relation = commutator_relation_string(&out);
    let TightenOutput {
        transform,
        basis,
        steps,
        ..
    } = out;
    let result = NormalFormResult {
        class,
        normalized,
        power,
        trace: matrix.trace(),
        order: p,
        symplectic: is_symplectic(&matrix, &target),
        matrix,
        j_shape: (d, q),
        basis,
        relation,
        transform,
        steps,
        presentation: Some(pres),
    };
    certify(result)
}

fn certify(mut r: NormalFormResult) -> Result<NormalFormResult> {
    let p = r.class.p;
    let t = r.class.t() as i64;
    let (d, q) = r.j_shape;
    let j = standard_j(d, q);
    let fail = |detail: String| -> Result<NormalFormResult> {
        Err(Error::Invariant {
            stage: "normal-form",
            detail,
        })
    };
    if r.matrix.rows() != 2 * (d + q) {
        return fail(format!("matrix size {} != 2g", r.matrix.rows()));
    }
    if !is_symplectic(&r.matrix, &j) {
        return fail("canonical matrix is not symplectic".into());
    }
    if r.matrix.is_identity() {
        return fail("canonical matrix is the identity".into());
    }
    if !r.matrix.pow(p as u64).is_identity() {
        return fail(format!("canonical matrix does not have order {p}"));
    }
    if r.trace != BigInt::from(2 - t) {
        return fail(format!("trace {} != 2 - t = {}", r.trace, 2 - t));
    }
    r.symplectic = true;
    r.order = p;
    Ok(r)
}

/// Verdict of the finite-order screening of a symplectic matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Impossible,
    NecessaryConditionsMet,
    MatchesNormalFormInvariants,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Impossible => write!(f, "impossible"),
            Verdict::NecessaryConditionsMet => write!(f, "necessary-conditions-met"),
            Verdict::MatchesNormalFormInvariants => write!(f, "matches-normal-form-invariants"),
        }
    }
}

/// Screening result for a candidate matrix.
#[derive(Clone, Debug)]
pub struct CandidateVerdict {
    pub order: i64,
    pub trace: BigInt,
    pub genus: i64,
    /// `2 - trace`, when it fits the admissible range.
    pub derived_t: BigInt,
    /// Admissible classes with the derived invariants.
    pub tuples: Vec<ConjugacyClass>,
    /// Classes whose normal form has the same characteristic polynomial.
    pub charpoly_matches: Vec<ConjugacyClass>,
    pub verdict: Verdict,
}

/// Necessary-condition screening: a prime-order symplectic matrix is the
/// image of a finite-order mapping class only if its trace `T` satisfies
/// `-2g <= T <= 2` and the derived fixed-point count `t = 2 - T` admits a
/// rotation tuple. When tuples exist, their normal forms' characteristic
/// polynomials are compared against the candidate's.
pub fn candidate_check(m: &IntMatrix, j: &IntMatrix) -> Result<CandidateVerdict> {
    if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
        return Err(Error::Validation(
            "candidate matrix must be square of even size".into(),
        ));
    }
    if !is_symplectic(m, j) {
        return Err(Error::Validation(
            "candidate matrix is not symplectic for the given form".into(),
        ));
    }
    let g = (m.rows() / 2) as i64;
    let bound = (4 * g * g) as usize;
    let order = matrix_order(m, bound).ok_or(Error::OrderNotFound(bound))? as i64;
    if order == 1 {
        return Err(Error::OrderNotPrime(1));
    }
    if !is_prime(order) {
        return Err(Error::OrderNotPrime(order as usize));
    }
    let p = order;
    let trace = m.trace();
    let derived_t = BigInt::from(2) - &trace;
    let in_range = trace <= BigInt::from(2) && trace >= BigInt::from(-2 * g);
    let mut tuples = Vec::new();
    let mut charpoly_matches = Vec::new();
    if in_range {
        let t = derived_t.to_i64().expect("trace within [-2g, 2]");
        for class in enumerate_classes(g, p)? {
            if class.t() as i64 == t {
                tuples.push(class);
            }
        }
        let cp = m.charpoly();
        for class in &tuples {
            let nf = normal_form(class.p, &class.n, class.g0)?;
            if nf.matrix.charpoly() == cp {
                charpoly_matches.push(class.clone());
            }
        }
    }
    let verdict = if !in_range || tuples.is_empty() {
        Verdict::Impossible
    } else if charpoly_matches.is_empty() {
        Verdict::NecessaryConditionsMet
    } else {
        Verdict::MatchesNormalFormInvariants
    };
    Ok(CandidateVerdict {
        order: p,
        trace,
        genus: g,
        derived_t,
        tuples,
        charpoly_matches,
        verdict,
    })
}
