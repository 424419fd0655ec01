//! The correspondence algebra of the model: square rational matrices under
//! composition, with an anti-involution playing the role of transposition of
//! correspondences.
//!
//! The composition convention is fixed once and for all: `compose(a, b)`
//! means "apply `b`, then `a`" and is realized as `mat(a) * mat(b)`. Every
//! formula downstream uses this convention.
//!
//! The involution is `a -> J^-1 a^T J` for a symmetric invertible pairing
//! `J`. With `J = I` it is the plain transpose; a reverse-block permutation
//! pairing is what makes block-graded families self-dual.

use crate::matrix::{MatrixError, RatMatrix};
use std::sync::Arc;
use thiserror::Error;

/// Default ambient-dimension cap. Exact arithmetic stays desk-fast below it.
pub const DEFAULT_DIMENSION_CAP: usize = 128;

/// Environment variable overriding the ambient-dimension cap.
pub const DIMENSION_CAP_ENV: &str = "KUNNETH_DIM_CAP";

pub fn dimension_cap() -> usize {
    std::env::var(DIMENSION_CAP_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_DIMENSION_CAP)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("ambient dimension {n} exceeds the cap {cap} (set {DIMENSION_CAP_ENV} to raise it)")]
    DimensionCap { n: usize, cap: usize },
    #[error("pairing must be a square {n}x{n} matrix")]
    PairingShape { n: usize },
    #[error("pairing matrix is not symmetric")]
    PairingNotSymmetric,
    #[error("pairing matrix is singular")]
    PairingSingular,
    #[error("element matrix must be {n}x{n}, got {rows}x{cols}")]
    ElementShape { n: usize, rows: usize, cols: usize },
    #[error("elements live in different contexts")]
    ContextMismatch,
    #[error("family member {index} is not idempotent")]
    NotIdempotent { index: usize },
    #[error("family has {members} members but {labels} labels")]
    LabelCount { members: usize, labels: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Ambient dimension plus the duality pairing defining the anti-involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutiveContext {
    n: usize,
    pairing: RatMatrix,
    pairing_inv: RatMatrix,
}

impl InvolutiveContext {
    pub fn new(n: usize, pairing: RatMatrix) -> Result<Arc<Self>, AlgebraError> {
        let cap = dimension_cap();
        if n == 0 || n > cap {
            return Err(AlgebraError::DimensionCap { n, cap });
        }
        if pairing.rows() != n || pairing.cols() != n {
            return Err(AlgebraError::PairingShape { n });
        }
        if pairing.transpose() != pairing {
            return Err(AlgebraError::PairingNotSymmetric);
        }
        let pairing_inv = pairing.inverse().ok_or(AlgebraError::PairingSingular)?;
        Ok(Arc::new(Self {
            n,
            pairing,
            pairing_inv,
        }))
    }

    /// Context with the identity pairing: involution is plain transpose.
    pub fn with_identity_pairing(n: usize) -> Result<Arc<Self>, AlgebraError> {
        Self::new(n, RatMatrix::identity(n))
    }

    /// Context with the reverse permutation pairing `J[i, n-1-i] = 1`.
    pub fn with_reverse_pairing(n: usize) -> Result<Arc<Self>, AlgebraError> {
        let mut j = RatMatrix::zeros(n, n);
        for i in 0..n {
            j.set(i, n - 1 - i, crate::rational::rat_int(1));
        }
        Self::new(n, j)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pairing(&self) -> &RatMatrix {
        &self.pairing
    }

    /// `J^-1 m^T J`, the matrix of the involution.
    pub fn involute_mat(&self, m: &RatMatrix) -> RatMatrix {
        &(&self.pairing_inv * &m.transpose()) * &self.pairing
    }

    /// Extends the involution to a rectangular morphism out of the ambient
    /// space: for `g : ambient -> small` (a `m x n` matrix, small carrier
    /// paired by the identity), the transpose morphism is `J^-1 g^T`.
    pub fn involute_from_ambient(&self, g: &RatMatrix) -> RatMatrix {
        &self.pairing_inv * &g.transpose()
    }

    /// Involution of a morphism into the ambient space: for `f : small ->
    /// ambient` (`n x m`), the transpose morphism is `f^T J`.
    pub fn involute_into_ambient(&self, f: &RatMatrix) -> RatMatrix {
        &f.transpose() * &self.pairing
    }
}

/// A correspondence of the model: a square matrix in a fixed context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    ctx: Arc<InvolutiveContext>,
    mat: RatMatrix,
}

impl Element {
    pub fn new(ctx: &Arc<InvolutiveContext>, mat: RatMatrix) -> Result<Self, AlgebraError> {
        if mat.rows() != ctx.dim() || mat.cols() != ctx.dim() {
            return Err(AlgebraError::ElementShape {
                n: ctx.dim(),
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        Ok(Self {
            ctx: Arc::clone(ctx),
            mat,
        })
    }

    /// The diagonal correspondence (identity matrix).
    pub fn delta(ctx: &Arc<InvolutiveContext>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            mat: RatMatrix::identity(ctx.dim()),
        }
    }

    pub fn zero(ctx: &Arc<InvolutiveContext>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            mat: RatMatrix::zeros(ctx.dim(), ctx.dim()),
        }
    }

    pub fn ctx(&self) -> &Arc<InvolutiveContext> {
        &self.ctx
    }

    pub fn mat(&self) -> &RatMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> RatMatrix {
        self.mat
    }

    fn same_ctx(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    /// `compose(a, b)`: apply `b`, then `a`; the matrix is `mat(a) * mat(b)`.
    pub fn compose(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_ctx(other)?;
        Ok(Element {
            ctx: Arc::clone(&self.ctx),
            mat: &self.mat * &other.mat,
        })
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_ctx(other)?;
        Ok(Element {
            ctx: Arc::clone(&self.ctx),
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_ctx(other)?;
        Ok(Element {
            ctx: Arc::clone(&self.ctx),
            mat: self.mat.sub(&other.mat)?,
        })
    }

    pub fn scale(&self, s: &crate::rational::Rational) -> Element {
        Element {
            ctx: Arc::clone(&self.ctx),
            mat: self.mat.scale(s),
        }
    }

    /// The anti-involution `a -> J^-1 a^T J`.
    pub fn involute(&self) -> Element {
        Element {
            ctx: Arc::clone(&self.ctx),
            mat: self.ctx.involute_mat(&self.mat),
        }
    }

    /// Exact idempotency test `a * a == a`.
    pub fn is_idempotent(&self) -> bool {
        &self.mat * &self.mat == self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
}

/// An ordered family of idempotents sharing one context, with degree tags.
///
/// Idempotency of every member is an invariant and is checked on
/// construction; everything else (orthogonality, duality) is reported by
/// the operations that care.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentFamily {
    ctx: Arc<InvolutiveContext>,
    members: Vec<Element>,
    labels: Vec<i64>,
}

impl IdempotentFamily {
    pub fn new(
        ctx: &Arc<InvolutiveContext>,
        members: Vec<Element>,
        labels: Vec<i64>,
    ) -> Result<Self, AlgebraError> {
        if members.len() != labels.len() {
            return Err(AlgebraError::LabelCount {
                members: members.len(),
                labels: labels.len(),
            });
        }
        for (index, m) in members.iter().enumerate() {
            if m.ctx() != ctx {
                return Err(AlgebraError::ContextMismatch);
            }
            if !m.is_idempotent() {
                return Err(AlgebraError::NotIdempotent { index });
            }
        }
        Ok(Self {
            ctx: Arc::clone(ctx),
            members,
            labels,
        })
    }

    /// Family with the default positional labels `0..len`.
    pub fn with_positional_labels(
        ctx: &Arc<InvolutiveContext>,
        members: Vec<Element>,
    ) -> Result<Self, AlgebraError> {
        let labels = (0..members.len() as i64).collect();
        Self::new(ctx, members, labels)
    }

    pub fn ctx(&self) -> &Arc<InvolutiveContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &Element {
        &self.members[i]
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Entry `(i, j)`, `i != j`, is true iff `compose(members[i], members[j])`
    /// is zero; diagonal entries report idempotency (true by invariant).
    pub fn orthogonality_table(&self) -> Vec<Vec<bool>> {
        let n = self.members.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.members[i].is_idempotent()
                        } else {
                            (self.members[i].mat() * self.members[j].mat()).is_zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether every off-diagonal composition vanishes.
    pub fn is_mutually_orthogonal(&self) -> bool {
        self.first_orthogonality_violation().is_none()
    }

    /// First `(i, j)` with `i != j` and `members[i] o members[j] != 0`.
    pub fn first_orthogonality_violation(&self) -> Option<(usize, usize)> {
        let n = self.members.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && !(self.members[i].mat() * self.members[j].mat()).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First index `r` with `involute(members[r]) != members[n-1-r]`, if any.
    pub fn self_duality_violation(&self) -> Option<usize> {
        let n = self.members.len();
        (0..n).find(|&r| self.members[r].involute() != self.members[n - 1 - r])
    }
}
