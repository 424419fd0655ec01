//! The splitting and orthonormalization algorithms.
//!
//! * `gram_schmidt_pass`: one pass of the non-commutative Gram-Schmidt
//!   process. Under the hypothesis `pi_i o pi_j = 0` for `i - j < k`,
//!   `i != j`, the outputs
//!   `p_i = (1 - 1/2 pi_n) ... (1 - 1/2 pi_{i+1}) o pi_i o
//!   (1 - 1/2 pi_{i-1}) ... (1 - 1/2 pi_0)`
//!   are idempotent and satisfy the hypothesis for `k + 1`. The 1/2
//!   coefficient is fixed; the identities depend on it exactly.
//! * `orthonormalize`: iterates passes until the orthogonality table is
//!   clean, capped at family-size minus one passes, recording per-pass
//!   tables and certified isomorphism witnesses.
//! * `triangular_split` / `extract_components`: split an upper-triangular
//!   idempotent along a resolution of the identity into diagonal
//!   components, with exact mutual-inverse witnesses.
//! * `factor_idempotent`: push an idempotent through a rank factorization
//!   onto a smaller carrier.
//! * `complete_decomposition`: the residual projector `delta - sum`.

use crate::algebra::{AlgebraError, Element, IdempotentFamily, InvolutiveContext};
use crate::ledger::ChowRealization;
use crate::matrix::RatMatrix;
use crate::rational::one_half;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplitterError {
    #[error("pass offset k must be at least 1")]
    InvalidOffset,
    #[error("orthogonality hypothesis fails at pair ({i}, {j}): member {i} o member {j} != 0")]
    HypothesisViolation { i: usize, j: usize },
    #[error("block {index} is not idempotent")]
    BlockNotIdempotent { index: usize },
    #[error("blocks {i} and {j} are not orthogonal")]
    BlocksNotOrthogonal { i: usize, j: usize },
    #[error("blocks do not sum to the identity correspondence")]
    BlocksNotResolution,
    #[error("upper-triangularity fails: block {j} o p o block {i} != 0 for j > i")]
    NotTriangular { j: usize, i: usize },
    #[error("the element to split is not idempotent")]
    NotIdempotent,
    #[error("component extraction needs at least 2 blocks, got {found}")]
    TooFewBlocks { found: usize },
    #[error("f has shape {fr}x{fc} and g has shape {gr}x{gc}; need n x m and m x n with n = {n}")]
    FactorShape {
        fr: usize,
        fc: usize,
        gr: usize,
        gc: usize,
        n: usize,
    },
    #[error("f * g does not equal the idempotent being factored")]
    FactorizationMismatch,
    #[error("family is not mutually orthogonal at pair ({i}, {j})")]
    NotOrthogonal { i: usize, j: usize },
    #[error("realization does not cover member {index}")]
    MissingAction { index: usize },
    #[error("member index {index} out of range for family of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One Gram-Schmidt pass on raw matrices. Shared between the element-level
/// pass and the evaluation of the same formula inside a realization.
pub(crate) fn gs_pass_matrices(mats: &[RatMatrix]) -> Vec<RatMatrix> {
    if mats.is_empty() {
        return Vec::new();
    }
    let dim = mats[0].rows();
    let ident = RatMatrix::identity(dim);
    let half = one_half();
    let damped: Vec<RatMatrix> = mats
        .iter()
        .map(|m| ident.sub(&m.scale(&half)).expect("same shape"))
        .collect();
    let n = mats.len();
    (0..n)
        .map(|i| {
            let mut acc = mats[i].clone();
            // factors below i multiply on the right, descending from i-1 to 0
            for d in damped[..i].iter().rev() {
                acc = &acc * d;
            }
            // factors above i multiply on the left, descending from n-1 to i+1
            for d in damped[i + 1..].iter().rev() {
                acc = d * &acc;
            }
            acc
        })
        .collect()
}

fn check_hypothesis(fam: &IdempotentFamily, k: usize) -> Result<(), SplitterError> {
    let n = fam.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && (i as i64) - (j as i64) < k as i64 {
                if !(fam.member(i).mat() * fam.member(j).mat()).is_zero() {
                    return Err(SplitterError::HypothesisViolation { i, j });
                }
            }
        }
    }
    Ok(())
}

/// One pass of the non-commutative Gram-Schmidt process at offset `k`.
///
/// Checks the hypothesis `member[i] o member[j] = 0` for `i - j < k`,
/// `i != j` before doing anything; the returned family satisfies the same
/// with `k + 1` and is re-verified idempotent on construction.
pub fn gram_schmidt_pass(
    fam: &IdempotentFamily,
    k: usize,
) -> Result<IdempotentFamily, SplitterError> {
    if k == 0 {
        return Err(SplitterError::InvalidOffset);
    }
    check_hypothesis(fam, k)?;
    if fam.is_empty() {
        return Ok(fam.clone());
    }
    let mats: Vec<RatMatrix> = fam.members().iter().map(|m| m.mat().clone()).collect();
    let out = gs_pass_matrices(&mats);
    let members = out
        .into_iter()
        .map(|m| Element::new(fam.ctx(), m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdempotentFamily::new(
        fam.ctx(),
        members,
        fam.labels().to_vec(),
    )?)
}

/// Isomorphism witness pair between an input idempotent and its
/// orthonormalized output: `forward = pi o p`, `backward = p o pi`.
/// `certified` records whether `backward o forward = p` and
/// `forward o backward = pi` hold exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub forward: Element,
    pub backward: Element,
    pub certified: bool,
}

/// Witnesses for `p` arising from `pi`. Certificate failure is flagged in
/// the result, never silently dropped.
pub fn isomorphism_witness(pi: &Element, p: &Element) -> Result<WitnessPair, SplitterError> {
    if !pi.is_idempotent() || !p.is_idempotent() {
        return Err(SplitterError::NotIdempotent);
    }
    let forward = pi.compose(p)?;
    let backward = p.compose(pi)?;
    let certified = backward.compose(&forward)? == *p && forward.compose(&backward)? == *pi;
    Ok(WitnessPair {
        forward,
        backward,
        certified,
    })
}

/// Full record of an orthonormalization run.
///
/// `tables[0]` is the orthogonality table of the input; `tables[t]` the
/// table after pass `t`. Witnesses connect input member `r` to output
/// member `r` directly.
#[derive(Debug, Clone)]
pub struct GsReport {
    pub input: IdempotentFamily,
    pub output: IdempotentFamily,
    pub passes_run: usize,
    pub tables: Vec<Vec<Vec<bool>>>,
    pub witnesses: Vec<WitnessPair>,
}

impl GsReport {
    pub fn output_orthogonal(&self) -> bool {
        self.output.is_mutually_orthogonal()
    }

    pub fn all_witnesses_certified(&self) -> bool {
        self.witnesses.iter().all(|w| w.certified)
    }
}

/// Runs Gram-Schmidt passes until the orthogonality table is clean, capped
/// at `max_passes` when given and at family size minus one otherwise.
///
/// Requires the `k = 1` hypothesis (`member[i] o member[j] = 0` for all
/// `i < j`); each later pass re-checks the hypothesis it relies on.
pub fn orthonormalize(
    fam: &IdempotentFamily,
    max_passes: Option<usize>,
) -> Result<GsReport, SplitterError> {
    check_hypothesis(fam, 1)?;
    let cap = max_passes.unwrap_or_else(|| fam.len().saturating_sub(1));
    let mut tables = vec![fam.orthogonality_table()];
    let mut current = fam.clone();
    let mut passes_run = 0;
    while !current.is_mutually_orthogonal() && passes_run < cap {
        current = gram_schmidt_pass(&current, passes_run + 1)?;
        passes_run += 1;
        tables.push(current.orthogonality_table());
    }
    let witnesses = fam
        .members()
        .iter()
        .zip(current.members())
        .map(|(pi, p)| isomorphism_witness(pi, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GsReport {
        input: fam.clone(),
        output: current,
        passes_run,
        tables,
        witnesses,
    })
}

/// Whether the orthonormalized member `r` acts on the Chow carrier exactly
/// as the input member `r` did.
///
/// The realization assigns an action matrix per level to each input member;
/// the action of a computed output member is the same Gram-Schmidt formula
/// evaluated on the action matrices, pass for pass.
pub fn action_agreement(
    report: &GsReport,
    r: usize,
    action: &ChowRealization,
) -> Result<bool, SplitterError> {
    let size = report.input.len();
    if r >= size {
        return Err(SplitterError::IndexOutOfRange {
            index: r,
            len: size,
        });
    }
    if action.member_count() != size {
        return Err(SplitterError::MissingAction {
            index: action.member_count().min(size),
        });
    }
    for level in 0..action.level_count() {
        let input_mats: Vec<RatMatrix> = (0..size)
            .map(|m| action.action(m, level).clone())
            .collect();
        let mut current = input_mats.clone();
        for _ in 0..report.passes_run {
            current = gs_pass_matrices(&current);
        }
        if current[r] != input_mats[r] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degree tag attached to an extracted component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitLabel {
    /// Plain block position for generic splits.
    Position(usize),
    /// The five tags of the point / curve / middle / curve-dual / point-dual
    /// splitting, emitted when exactly five blocks are supplied.
    Degree0,
    Degree1,
    Middle,
    DegreeTopMinus1,
    DegreeTop,
}

/// Outcome of a triangular split: the diagonal components, their sum `q`,
/// and the exact mutual-inverse witnesses between `p` and `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub components: Vec<Element>,
    pub labels: Vec<SplitLabel>,
    pub sum: Element,
    /// `(phi, psi)` with `phi o psi = p` and `psi o phi = q`, exactly.
    pub witnesses: (Element, Element),
}

fn validate_blocks(p: &Element, blocks: &[Element]) -> Result<(), SplitterError> {
    for (index, b) in blocks.iter().enumerate() {
        if b.ctx() != p.ctx() {
            return Err(AlgebraError::ContextMismatch.into());
        }
        if !b.is_idempotent() {
            return Err(SplitterError::BlockNotIdempotent { index });
        }
    }
    for i in 0..blocks.len() {
        for j in 0..blocks.len() {
            if i != j && !(blocks[i].mat() * blocks[j].mat()).is_zero() {
                return Err(SplitterError::BlocksNotOrthogonal { i, j });
            }
        }
    }
    let mut sum = RatMatrix::zeros(p.ctx().dim(), p.ctx().dim());
    for b in blocks {
        sum = sum.add(b.mat()).expect("same shape");
    }
    if !sum.is_identity() {
        return Err(SplitterError::BlocksNotResolution);
    }
    Ok(())
}

/// Splits an upper-triangular idempotent along a resolution of the identity.
///
/// Components are `blocks[i] o p o blocks[i]`. The witnesses are the
/// composite of the two-block isomorphisms obtained by splitting off one
/// block at a time; for two blocks this is literally `(p o q, q o p)`.
pub fn triangular_split(p: &Element, blocks: &[Element]) -> Result<SplitResult, SplitterError> {
    let result = triangular_split_inner(p, blocks)?;
    Ok(SplitResult {
        labels: (0..result.components.len()).map(SplitLabel::Position).collect(),
        ..result
    })
}

/// `triangular_split` with the degree tags of the five-block splitting
/// (bottom, degree one, middle, top minus one, top) when five blocks are
/// supplied, positional tags otherwise. Needs at least two blocks.
pub fn extract_components(p: &Element, blocks: &[Element]) -> Result<SplitResult, SplitterError> {
    if blocks.len() < 2 {
        return Err(SplitterError::TooFewBlocks {
            found: blocks.len(),
        });
    }
    let result = triangular_split_inner(p, blocks)?;
    let labels = if blocks.len() == 5 {
        vec![
            SplitLabel::Degree0,
            SplitLabel::Degree1,
            SplitLabel::Middle,
            SplitLabel::DegreeTopMinus1,
            SplitLabel::DegreeTop,
        ]
    } else {
        (0..blocks.len()).map(SplitLabel::Position).collect()
    };
    Ok(SplitResult { labels, ..result })
}

fn triangular_split_inner(
    p: &Element,
    blocks: &[Element],
) -> Result<SplitResult, SplitterError> {
    validate_blocks(p, blocks)?;
    if !p.is_idempotent() {
        return Err(SplitterError::NotIdempotent);
    }
    for j in 0..blocks.len() {
        for i in 0..j {
            let m = blocks[j].compose(&p.compose(&blocks[i])?)?;
            if !m.is_zero() {
                return Err(SplitterError::NotTriangular { j, i });
            }
        }
    }
    let components: Vec<Element> = blocks
        .iter()
        .map(|b| b.compose(&p.compose(b)?))
        .collect::<Result<_, _>>()?;
    let mut sum = Element::zero(p.ctx());
    for c in &components {
        sum = sum.add(c)?;
    }
    // Stage idempotents s_k = a_0 + ... + a_{k-1} + E_k p E_k with
    // E_k = blocks[k] + ... ; s_0 = p, s_{B-1} = q. Each adjacent pair is a
    // two-block split, and the witnesses compose.
    let b = blocks.len();
    let mut stages: Vec<Element> = Vec::with_capacity(b.max(1));
    for k in 0..b {
        let mut e_k = Element::zero(p.ctx());
        for block in &blocks[k..] {
            e_k = e_k.add(block)?;
        }
        let mut s = e_k.compose(&p.compose(&e_k)?)?;
        for c in &components[..k] {
            s = s.add(c)?;
        }
        stages.push(s);
    }
    let (phi, psi) = if stages.is_empty() {
        (p.clone(), p.clone())
    } else {
        let mut phi = stages[0].clone();
        for s in &stages[1..] {
            phi = phi.compose(s)?;
        }
        let mut psi = stages[b - 1].clone();
        for s in stages[..b - 1].iter().rev() {
            psi = psi.compose(s)?;
        }
        (phi, psi)
    };
    debug_assert_eq!(phi.compose(&psi).unwrap(), *p);
    debug_assert_eq!(psi.compose(&phi).unwrap(), sum);
    Ok(SplitResult {
        labels: Vec::new(),
        components,
        sum,
        witnesses: (phi, psi),
    })
}

/// An idempotent pushed through a rank factorization, with the morphisms
/// exhibiting `(small carrier, q)` as isomorphic to the image of `p`.
#[derive(Debug, Clone)]
pub struct FactorResult {
    /// The induced idempotent on the small carrier (identity pairing).
    pub q: Element,
    /// `p o f o q : small -> ambient` and `q o g o p : ambient -> small`;
    /// their composites are exactly `p` and `q`.
    pub witnesses: (RatMatrix, RatMatrix),
}

/// Pushes `p = f o g` through the factorization: `q = g o p o f` on the
/// `m`-dimensional carrier. `q` is idempotent and the witness identities
/// `p o f o q o g o p = p` and `q o g o p o f o q = q` hold exactly; both
/// are re-verified before returning.
pub fn factor_idempotent(
    f: &RatMatrix,
    g: &RatMatrix,
    p: &Element,
) -> Result<FactorResult, SplitterError> {
    let n = p.ctx().dim();
    if f.rows() != n || g.cols() != n || f.cols() != g.rows() {
        return Err(SplitterError::FactorShape {
            fr: f.rows(),
            fc: f.cols(),
            gr: g.rows(),
            gc: g.cols(),
            n,
        });
    }
    if &(f * g) != p.mat() {
        return Err(SplitterError::FactorizationMismatch);
    }
    let m = f.cols();
    let q_mat = &(g * p.mat()) * f;
    let small_ctx = InvolutiveContext::with_identity_pairing(m)?;
    let q = Element::new(&small_ctx, q_mat.clone())?;
    let forward = &(p.mat() * f) * &q_mat;
    let backward = &(&q_mat * g) * p.mat();
    // The identities are theorem-level consequences of p = f o g and
    // p o p = p; verify them anyway so a corrupted input cannot slip by.
    if !q.is_idempotent()
        || &(&forward * &backward) != p.mat()
        || &backward * &forward != q_mat
    {
        return Err(SplitterError::FactorizationMismatch);
    }
    Ok(FactorResult {
        q,
        witnesses: (forward, backward),
    })
}

/// The residual projector `delta - sum(family)`. Requires the family to be
/// mutually orthogonal; the result is idempotent, orthogonal to every
/// member in both directions, and completes the family to a resolution of
/// the identity.
pub fn complete_decomposition(fam: &IdempotentFamily) -> Result<Element, SplitterError> {
    if let Some((i, j)) = fam.first_orthogonality_violation() {
        return Err(SplitterError::NotOrthogonal { i, j });
    }
    let mut residual = Element::delta(fam.ctx());
    for m in fam.members() {
        residual = residual.sub(m)?;
    }
    debug_assert!(residual.is_idempotent());
    Ok(residual)
}
