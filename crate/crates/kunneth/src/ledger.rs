//! Graded decomposition ledgers and their checkers.
//!
//! A `KunnethLedger` is a family of idempotents `p_0 .. p_2d` whose ambient
//! space carries a grading (the homology shadow): the decomposition
//! conditions say the `p_i` are orthogonal idempotents summing to the
//! identity whose images are exactly the graded blocks. A
//! `ChowRealization` is a separate finite-dimensional carrier per level
//! `l = 0..d` on which the ledger idempotents act, together with a cycle
//! class map from each level carrier into the degree-`2l` block.
//!
//! On top of these the module decides, exactly and with canonical-basis
//! subspace comparisons: the decomposition conditions themselves,
//! self-duality, the vanishing conditions and the kernel filtration of the
//! level carriers, filtration comparison between two ledgers, and the
//! Kronecker-product ledger of two ledgers.

use crate::algebra::{AlgebraError, Element, InvolutiveContext};
use crate::matrix::{RatMatrix, Subspace};
use crate::report::{check_id, CheckItem, CheckReport};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("degree {degree} exceeds 2d = {max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("ledger of dimension parameter {d} needs {} idempotents, got {found}", 2 * d + 1)]
    IdempotentCount { d: usize, found: usize },
    #[error("homology carrier has dimension {homology} but the context is {ctx}-dimensional")]
    CarrierMismatch { homology: usize, ctx: usize },
    #[error("homology grading declares d = {homology_d}, ledger declares d = {ledger_d}")]
    DimensionMismatch { homology_d: usize, ledger_d: usize },
    #[error("level {level} out of range (levels run 0..={max})")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("realization covers {found} members, expected {expected}")]
    MemberCount { expected: usize, found: usize },
    #[error("realization level {level} carrier should be {expected}-dimensional, got {found}")]
    LevelDim {
        level: usize,
        expected: usize,
        found: usize,
    },
    #[error("cycle class at level {level} must map into the degree-{degree} block ({rows} rows expected, got {found})")]
    CycleClassShape {
        level: usize,
        degree: usize,
        rows: usize,
        found: usize,
    },
    #[error("realization has no cycle class data")]
    MissingCycleClass,
    #[error("realizations live on different carriers")]
    RealizationCarrierMismatch,
    #[error("certificate misses a factorization for degree {degree}")]
    MissingFactorization { degree: usize },
    #[error("certificate factorization at degree {degree} does not multiply to the idempotent")]
    CertificateMismatch { degree: usize },
    #[error("certificate carrier tag at degree {degree} should be {expected}")]
    CertificateTag {
        degree: usize,
        expected: &'static str,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A grading of the ambient coordinates by degrees `0 ..= 2d`.
///
/// Stored as one degree per coordinate, so blocks of a product grading may
/// interleave. Blocks may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHomology {
    d: usize,
    degrees: Vec<usize>,
}

impl GradedHomology {
    pub fn new(d: usize, degrees: Vec<usize>) -> Result<Self, LedgerError> {
        if let Some(&bad) = degrees.iter().find(|&&deg| deg > 2 * d) {
            return Err(LedgerError::DegreeOutOfRange {
                degree: bad,
                max: 2 * d,
            });
        }
        Ok(Self { d, degrees })
    }

    /// Grading with contiguous blocks of the given sizes for degrees
    /// `0 ..= 2d` in order.
    pub fn from_block_sizes(d: usize, sizes: &[usize]) -> Result<Self, LedgerError> {
        if sizes.len() != 2 * d + 1 {
            return Err(LedgerError::IdempotentCount {
                d,
                found: sizes.len(),
            });
        }
        let mut degrees = Vec::new();
        for (deg, &s) in sizes.iter().enumerate() {
            degrees.extend(std::iter::repeat(deg).take(s));
        }
        Self::new(d, degrees)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Coordinates of the degree-`i` block, ascending.
    pub fn block_coords(&self, i: usize) -> Vec<usize> {
        self.degrees
            .iter()
            .enumerate()
            .filter_map(|(c, &deg)| (deg == i).then_some(c))
            .collect()
    }

    pub fn block_size(&self, i: usize) -> usize {
        self.degrees.iter().filter(|&&deg| deg == i).count()
    }

    /// The degree-`i` coordinate subspace, canonical.
    pub fn block_subspace(&self, i: usize) -> Subspace {
        Subspace::coordinate(self.total_dim(), &self.block_coords(i))
    }
}

/// A graded decomposition ledger: `2d + 1` labeled idempotents on a graded
/// ambient context. Structural consistency is enforced here; the
/// decomposition conditions themselves are what [`verify_ck`] reports on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnethLedger {
    d: usize,
    ctx: Arc<InvolutiveContext>,
    idempotents: Vec<Element>,
    homology: GradedHomology,
}

impl KunnethLedger {
    pub fn new(
        d: usize,
        ctx: &Arc<InvolutiveContext>,
        idempotents: Vec<Element>,
        homology: GradedHomology,
    ) -> Result<Self, LedgerError> {
        if idempotents.len() != 2 * d + 1 {
            return Err(LedgerError::IdempotentCount {
                d,
                found: idempotents.len(),
            });
        }
        if homology.d() != d {
            return Err(LedgerError::DimensionMismatch {
                homology_d: homology.d(),
                ledger_d: d,
            });
        }
        if homology.total_dim() != ctx.dim() {
            return Err(LedgerError::CarrierMismatch {
                homology: homology.total_dim(),
                ctx: ctx.dim(),
            });
        }
        for e in &idempotents {
            if e.ctx() != ctx {
                return Err(AlgebraError::ContextMismatch.into());
            }
        }
        Ok(Self {
            d,
            ctx: Arc::clone(ctx),
            idempotents,
            homology,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ctx(&self) -> &Arc<InvolutiveContext> {
        &self.ctx
    }

    pub fn idempotent(&self, i: usize) -> &Element {
        &self.idempotents[i]
    }

    pub fn idempotents(&self) -> &[Element] {
        &self.idempotents
    }

    pub fn homology(&self) -> &GradedHomology {
        &self.homology
    }
}

/// Checks the decomposition conditions: idempotency, mutual orthogonality
/// (both directions), sum equal to the diagonal, and image of each `p_i`
/// equal to the degree-`i` block. Failures carry the first counterexample.
pub fn verify_ck(ledger: &KunnethLedger) -> CheckReport {
    verify_ck_named(ledger, "ledger")
}

pub fn verify_ck_named(ledger: &KunnethLedger, subject: &str) -> CheckReport {
    let mut report = CheckReport::new();
    let n = ledger.idempotents.len();

    let idem = (0..n)
        .find(|&i| !ledger.idempotents[i].is_idempotent())
        .map_or(CheckItem::pass(check_id::CK_IDEMPOTENT, subject), |i| {
            CheckItem::fail(
                check_id::CK_IDEMPOTENT,
                subject,
                vec![i as i64],
                format!("p_{i} o p_{i} != p_{i}"),
            )
        });
    report.push(idem);

    let mut orth = CheckItem::pass(check_id::CK_ORTHOGONALITY, subject);
    'outer: for i in 0..n {
        for j in 0..n {
            if i != j
                && !(ledger.idempotents[i].mat() * ledger.idempotents[j].mat()).is_zero()
            {
                orth = CheckItem::fail(
                    check_id::CK_ORTHOGONALITY,
                    subject,
                    vec![i as i64, j as i64],
                    format!("p_{i} o p_{j} != 0"),
                );
                break 'outer;
            }
        }
    }
    report.push(orth);

    let mut sum = RatMatrix::zeros(ledger.ctx.dim(), ledger.ctx.dim());
    for e in &ledger.idempotents {
        sum = sum.add(e.mat()).expect("same shape");
    }
    report.push(if sum.is_identity() {
        CheckItem::pass(check_id::CK_SUM, subject)
    } else {
        CheckItem::fail(
            check_id::CK_SUM,
            subject,
            vec![],
            "sum of ledger idempotents differs from the diagonal",
        )
    });

    let kunneth = (0..n)
        .find(|&i| {
            Subspace::from_column_list(
                ledger.ctx.dim(),
                &ledger.idempotents[i].mat().image_basis(),
            ) != ledger.homology.block_subspace(i)
        })
        .map_or(CheckItem::pass(check_id::CK_KUNNETH, subject), |i| {
            CheckItem::fail(
                check_id::CK_KUNNETH,
                subject,
                vec![i as i64],
                format!("image of p_{i} is not the degree-{i} block"),
            )
        });
    report.push(kunneth);
    report
}

/// First degree `i` with `involute(p_i) != p_{2d-i}`, if any.
pub fn self_dual_violation(ledger: &KunnethLedger) -> Option<usize> {
    let n = ledger.idempotents.len();
    (0..n).find(|&i| ledger.idempotents[i].involute() != ledger.idempotents[n - 1 - i])
}

/// Whether `involute(p_i) = p_{2d-i}` for all `i`, exactly.
pub fn check_self_dual(ledger: &KunnethLedger) -> bool {
    self_dual_violation(ledger).is_none()
}

/// Finite-dimensional level carriers on which ledger members act, with a
/// cycle class map per level.
///
/// `actions[m][l]` is the action matrix of member `m` on the level-`l`
/// carrier; the diagonal acts as the identity implicitly. The cycle class
/// at level `l` maps the level carrier into the degree-`2l` block
/// (rows indexed by the block's coordinates in ascending order).
///
/// Zero-dimensional carriers pass every check vacuously. Since matrices
/// here always have positive shape, an empty level stores a 1x1 zero
/// placeholder which no checker ever reads; the same convention applies to
/// the cycle class when the carrier or the target block is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowRealization {
    level_dims: Vec<usize>,
    actions: Vec<Vec<RatMatrix>>,
    cycle_class: Option<Vec<RatMatrix>>,
}

impl ChowRealization {
    pub fn new(
        level_dims: Vec<usize>,
        actions: Vec<Vec<RatMatrix>>,
        cycle_class: Option<Vec<RatMatrix>>,
    ) -> Result<Self, LedgerError> {
        for per_level in &actions {
            if per_level.len() != level_dims.len() {
                return Err(LedgerError::MemberCount {
                    expected: level_dims.len(),
                    found: per_level.len(),
                });
            }
            for (l, mat) in per_level.iter().enumerate() {
                let expected = level_dims[l].max(1);
                if mat.rows() != expected || mat.cols() != expected {
                    return Err(LedgerError::LevelDim {
                        level: l,
                        expected,
                        found: mat.rows(),
                    });
                }
            }
        }
        if let Some(cls) = &cycle_class {
            if cls.len() != level_dims.len() {
                return Err(LedgerError::MemberCount {
                    expected: level_dims.len(),
                    found: cls.len(),
                });
            }
            for (l, cl) in cls.iter().enumerate() {
                if cl.cols() != level_dims[l].max(1) {
                    return Err(LedgerError::LevelDim {
                        level: l,
                        expected: level_dims[l].max(1),
                        found: cl.cols(),
                    });
                }
            }
        }
        Ok(Self {
            level_dims,
            actions,
            cycle_class,
        })
    }

    pub fn level_count(&self) -> usize {
        self.level_dims.len()
    }

    pub fn level_dim(&self, l: usize) -> usize {
        self.level_dims[l]
    }

    pub fn level_dims(&self) -> &[usize] {
        &self.level_dims
    }

    pub fn member_count(&self) -> usize {
        self.actions.len()
    }

    pub fn action(&self, member: usize, level: usize) -> &RatMatrix {
        &self.actions[member][level]
    }

    pub fn cycle_class(&self, level: usize) -> Option<&RatMatrix> {
        self.cycle_class.as_ref().map(|c| &c[level])
    }

    pub fn has_cycle_class(&self) -> bool {
        self.cycle_class.is_some()
    }
}

fn ledger_realization_shapes(
    ledger: &KunnethLedger,
    real: &ChowRealization,
) -> Result<(), LedgerError> {
    if real.member_count() != ledger.idempotents.len() {
        return Err(LedgerError::MemberCount {
            expected: ledger.idempotents.len(),
            found: real.member_count(),
        });
    }
    if real.level_count() != ledger.d + 1 {
        return Err(LedgerError::LevelOutOfRange {
            level: real.level_count(),
            max: ledger.d,
        });
    }
    if let Some(cls) = &real.cycle_class {
        for (l, cl) in cls.iter().enumerate() {
            let expected = ledger.homology.block_size(2 * l).max(1);
            if cl.rows() != expected {
                return Err(LedgerError::CycleClassShape {
                    level: l,
                    degree: 2 * l,
                    rows: expected,
                    found: cl.rows(),
                });
            }
        }
    }
    Ok(())
}

/// Validates the realization against the compatibility conditions actually
/// used by the checkers: the members act as a resolution of the identity,
/// idempotently, orthogonally where the algebra is orthogonal, and the
/// cycle class intertwines the level action with the ambient action.
pub fn validate_realization(
    ledger: &KunnethLedger,
    real: &ChowRealization,
    subject: &str,
) -> Result<CheckReport, LedgerError> {
    ledger_realization_shapes(ledger, real)?;
    let mut report = CheckReport::new();
    let n = ledger.idempotents.len();

    let mut sum_item = CheckItem::pass(check_id::REALIZATION_SUM, subject);
    for l in 0..real.level_count() {
        let mut sum = RatMatrix::zeros(real.level_dim(l).max(1), real.level_dim(l).max(1));
        if real.level_dim(l) == 0 {
            continue;
        }
        for m in 0..n {
            sum = sum.add(real.action(m, l)).expect("same shape");
        }
        if !sum.is_identity() {
            sum_item = CheckItem::fail(
                check_id::REALIZATION_SUM,
                subject,
                vec![l as i64],
                format!("level-{l} actions do not sum to the identity"),
            );
            break;
        }
    }
    report.push(sum_item);

    let mut idem_item = CheckItem::pass(check_id::REALIZATION_IDEMPOTENT, subject);
    'idem: for m in 0..n {
        for l in 0..real.level_count() {
            if real.level_dim(l) == 0 {
                continue;
            }
            let a = real.action(m, l);
            if &(a * a) != a {
                idem_item = CheckItem::fail(
                    check_id::REALIZATION_IDEMPOTENT,
                    subject,
                    vec![m as i64, l as i64],
                    format!("action of p_{m} at level {l} is not idempotent"),
                );
                break 'idem;
            }
        }
    }
    report.push(idem_item);

    let mut orth_item = CheckItem::pass(check_id::REALIZATION_ORTHOGONALITY, subject);
    'orth: for i in 0..n {
        for j in 0..n {
            if i == j
                || !(ledger.idempotents[i].mat() * ledger.idempotents[j].mat()).is_zero()
            {
                continue;
            }
            for l in 0..real.level_count() {
                if real.level_dim(l) == 0 {
                    continue;
                }
                if !(real.action(i, l) * real.action(j, l)).is_zero() {
                    orth_item = CheckItem::fail(
                        check_id::REALIZATION_ORTHOGONALITY,
                        subject,
                        vec![i as i64, j as i64, l as i64],
                        format!("p_{i} o p_{j} vanishes but the level-{l} actions do not"),
                    );
                    break 'orth;
                }
            }
        }
    }
    report.push(orth_item);

    if let Some(cls) = &real.cycle_class {
        let mut inter_item = CheckItem::pass(check_id::REALIZATION_INTERTWINE, subject);
        'inter: for l in 0..real.level_count() {
            if real.level_dim(l) == 0 {
                continue;
            }
            let coords = ledger.homology.block_coords(2 * l);
            // embed the block coordinates into the ambient space
            let n_amb = ledger.ctx.dim();
            let embed = if coords.is_empty() {
                None
            } else {
                let mut e = RatMatrix::zeros(n_amb, coords.len());
                for (col, &coord) in coords.iter().enumerate() {
                    e.set(coord, col, crate::rational::rat_int(1));
                }
                Some(e)
            };
            for m in 0..n {
                let lhs = match &embed {
                    Some(e) => &(e * &cls[l]) * real.action(m, l),
                    // empty block: cycle class is the zero map, both sides vanish
                    None => continue,
                };
                let rhs = &(ledger.idempotents[m].mat()
                    * embed.as_ref().expect("nonempty block"))
                    * &cls[l];
                if lhs != rhs {
                    inter_item = CheckItem::fail(
                        check_id::REALIZATION_INTERTWINE,
                        subject,
                        vec![m as i64, l as i64],
                        format!("cycle class does not intertwine p_{m} at level {l}"),
                    );
                    break 'inter;
                }
            }
        }
        report.push(inter_item);
    }
    Ok(report)
}

/// The descending kernel filtration at level `l`:
/// `F^0` is the full carrier and `F^i` is the joint kernel of the actions of
/// `p_{2l} .. p_{2l+i-1}`, for `i = 1 ..= 2d - 2l + 1`.
pub fn murre_filtration(
    ledger: &KunnethLedger,
    real: &ChowRealization,
    level: usize,
) -> Result<Vec<Subspace>, LedgerError> {
    ledger_realization_shapes(ledger, real)?;
    if level > ledger.d {
        return Err(LedgerError::LevelOutOfRange {
            level,
            max: ledger.d,
        });
    }
    let w = real.level_dim(level);
    let steps = 2 * ledger.d - 2 * level + 1;
    let mut chain = vec![Subspace::full(w)];
    if w == 0 {
        chain.extend(std::iter::repeat(Subspace::zero(0)).take(steps));
        return Ok(chain);
    }
    for i in 1..=steps {
        // joint kernel of rho(p_{2l}) .. rho(p_{2l+i-1}): one kernel of the
        // stacked matrix, canonical by construction
        let stacked = RatMatrix::from_fn(i * w, w, |r, c| {
            let member = 2 * level + r / w;
            real.action(member, level).at(r % w, c).clone()
        });
        chain.push(Subspace::kernel_of(&stacked));
    }
    Ok(chain)
}

/// The vanishing condition: at every level `l`, the actions of
/// `p_0 .. p_{2l-1}` and `p_{d+l+1} .. p_{2d}` are exactly zero.
/// The report names the first violating `(degree, level)`.
pub fn check_murre_b(
    ledger: &KunnethLedger,
    real: &ChowRealization,
    subject: &str,
) -> Result<CheckReport, LedgerError> {
    ledger_realization_shapes(ledger, real)?;
    let mut report = CheckReport::new();
    let d = ledger.d;
    for l in 0..=d {
        if real.level_dim(l) == 0 {
            continue;
        }
        let forbidden = (0..2 * l).chain(d + l + 1..=2 * d);
        for j in forbidden {
            if !real.action(j, l).is_zero() {
                report.push(CheckItem::fail(
                    check_id::MURRE_B,
                    subject,
                    vec![j as i64, l as i64],
                    format!("p_{j} must act trivially at level {l}"),
                ));
                return Ok(report);
            }
        }
    }
    report.push(CheckItem::pass(check_id::MURRE_B, subject));
    Ok(report)
}

/// The homological-triviality condition: at every level, the first
/// filtration step equals the kernel of the cycle class, as canonical
/// subspaces. The report names the first violating level.
pub fn check_murre_d(
    ledger: &KunnethLedger,
    real: &ChowRealization,
    subject: &str,
) -> Result<CheckReport, LedgerError> {
    ledger_realization_shapes(ledger, real)?;
    if !real.has_cycle_class() {
        return Err(LedgerError::MissingCycleClass);
    }
    let mut report = CheckReport::new();
    for l in 0..=ledger.d {
        if real.level_dim(l) == 0 {
            continue;
        }
        let f1 = Subspace::kernel_of(real.action(2 * l, l));
        let cl = real.cycle_class(l).expect("checked");
        let hom_trivial = if ledger.homology.block_size(2 * l) == 0 {
            // the cycle class into an empty block is the zero map
            Subspace::full(real.level_dim(l))
        } else {
            Subspace::kernel_of(cl)
        };
        if f1 != hom_trivial {
            report.push(CheckItem::fail(
                check_id::MURRE_D,
                subject,
                vec![l as i64],
                format!("F^1 differs from ker(cycle class) at level {l}"),
            ));
            return Ok(report);
        }
    }
    report.push(CheckItem::pass(check_id::MURRE_D, subject));
    Ok(report)
}

/// Compares the filtrations of two ledgers acting on the same carriers;
/// passes iff the chains agree at every `(level, step)`.
pub fn compare_filtrations(
    l1: &KunnethLedger,
    w1: &ChowRealization,
    l2: &KunnethLedger,
    w2: &ChowRealization,
    subject: &str,
) -> Result<CheckReport, LedgerError> {
    if w1.level_dims() != w2.level_dims() || l1.d != l2.d {
        return Err(LedgerError::RealizationCarrierMismatch);
    }
    let mut report = CheckReport::new();
    for level in 0..=l1.d {
        let c1 = murre_filtration(l1, w1, level)?;
        let c2 = murre_filtration(l2, w2, level)?;
        for (i, (a, b)) in c1.iter().zip(c2.iter()).enumerate() {
            if a != b {
                report.push(CheckItem::fail(
                    check_id::FILTRATION_COMPARE,
                    subject,
                    vec![level as i64, i as i64],
                    format!("filtrations differ at level {level}, step {i}"),
                ));
                return Ok(report);
            }
        }
    }
    report.push(CheckItem::pass(check_id::FILTRATION_COMPARE, subject));
    Ok(report)
}

/// The Kronecker-product ledger: degree-`l` idempotent
/// `q_l = sum over i + j = l of p_i (x) p_j`, pairing the Kronecker product
/// of the input pairings, grading `deg(x, y) = deg(x) + deg(y)`.
pub fn product_ledger(
    lx: &KunnethLedger,
    lc: &KunnethLedger,
) -> Result<KunnethLedger, LedgerError> {
    let d = lx.d + lc.d;
    let nx = lx.ctx.dim();
    let nc = lc.ctx.dim();
    let ctx = InvolutiveContext::new(nx * nc, lx.ctx.pairing().kronecker(lc.ctx.pairing()))?;
    let mut idempotents = Vec::with_capacity(2 * d + 1);
    for l in 0..=2 * d {
        let mut sum = RatMatrix::zeros(nx * nc, nx * nc);
        for i in 0..=2 * lx.d {
            let Some(j) = l.checked_sub(i) else { continue };
            if j > 2 * lc.d {
                continue;
            }
            let kron = lx.idempotents[i].mat().kronecker(lc.idempotents[j].mat());
            sum = sum.add(&kron).expect("same shape");
        }
        idempotents.push(Element::new(&ctx, sum)?);
    }
    let mut degrees = Vec::with_capacity(nx * nc);
    for &dx in lx.homology.degrees() {
        for &dc in lc.homology.degrees() {
            degrees.push(dx + dc);
        }
    }
    let homology = GradedHomology::new(d, degrees)?;
    KunnethLedger::new(d, &ctx, idempotents, homology)
}

/// The realization of a product ledger on the graded tensor carriers.
///
/// The level-`l` carrier is the direct sum over `a + b = l` of the tensor
/// products of the level-`a` and level-`b` input carriers; the product
/// idempotents act summand-wise through the Kronecker products of the
/// input actions, and the cycle class is the summand-wise tensor product
/// followed by the coordinate embedding into the degree-`2l` block.
pub fn product_realization(
    lx: &KunnethLedger,
    wx: &ChowRealization,
    lc: &KunnethLedger,
    wc: &ChowRealization,
) -> Result<ChowRealization, LedgerError> {
    ledger_realization_shapes(lx, wx)?;
    ledger_realization_shapes(lc, wc)?;
    if !wx.has_cycle_class() || !wc.has_cycle_class() {
        return Err(LedgerError::MissingCycleClass);
    }
    let d = lx.d + lc.d;
    let product = product_ledger(lx, lc)?;

    // summands (a, b) with a + b = l, a ascending; offsets into the carrier
    let summands = |l: usize| -> Vec<(usize, usize)> {
        (0..=l)
            .filter(|&a| a <= lx.d && l - a <= lc.d)
            .map(|a| (a, l - a))
            .collect()
    };
    let mut level_dims: Vec<usize> = Vec::with_capacity(d + 1);
    for l in 0..=d {
        level_dims.push(
            summands(l)
                .iter()
                .map(|&(a, b)| wx.level_dim(a) * wc.level_dim(b))
                .sum(),
        );
    }

    let members = 2 * d + 1;
    let mut actions: Vec<Vec<RatMatrix>> = vec![Vec::with_capacity(d + 1); members];
    for l in 0..=d {
        let dim = level_dims[l].max(1);
        let parts = summands(l);
        for (m, row) in actions.iter_mut().enumerate() {
            let mut act = RatMatrix::zeros(dim, dim);
            let mut offset = 0usize;
            for &(a, b) in &parts {
                let block = wx.level_dim(a) * wc.level_dim(b);
                if block > 0 {
                    let mut sum = RatMatrix::zeros(block, block);
                    for i in 0..=2 * lx.d {
                        let Some(j) = m.checked_sub(i) else { continue };
                        if j > 2 * lc.d {
                            continue;
                        }
                        let kron = wx.action(i, a).kronecker(wc.action(j, b));
                        sum = sum.add(&kron).expect("same shape");
                    }
                    for r in 0..block {
                        for c in 0..block {
                            act.set(offset + r, offset + c, sum.at(r, c).clone());
                        }
                    }
                }
                offset += block;
            }
            row.push(act);
        }
    }

    let nc_amb = lc.ctx.dim();
    let mut cycle_class = Vec::with_capacity(d + 1);
    for l in 0..=d {
        let coords = product.homology().block_coords(2 * l);
        let rows = coords.len();
        let dim = level_dims[l];
        let mut cl = RatMatrix::zeros(rows.max(1), dim.max(1));
        if rows > 0 && dim > 0 {
            // position of an ambient product coordinate inside the block rows
            let pos_of: std::collections::HashMap<usize, usize> = coords
                .iter()
                .enumerate()
                .map(|(row, &coord)| (coord, row))
                .collect();
            let mut offset = 0usize;
            for &(a, b) in &summands(l) {
                let wa = wx.level_dim(a);
                let wb = wc.level_dim(b);
                if wa * wb > 0 {
                    let cla = wx.cycle_class(a).expect("checked");
                    let clb = wc.cycle_class(b).expect("checked");
                    let coords_a = lx.homology.block_coords(2 * a);
                    let coords_b = lc.homology.block_coords(2 * b);
                    for (ra, &ca) in coords_a.iter().enumerate() {
                        for (rb, &cb) in coords_b.iter().enumerate() {
                            let ambient = ca * nc_amb + cb;
                            let row = pos_of[&ambient];
                            for u in 0..wa {
                                for v in 0..wb {
                                    cl.set(
                                        row,
                                        offset + u * wb + v,
                                        cla.at(ra, u) * clb.at(rb, v),
                                    );
                                }
                            }
                        }
                    }
                }
                offset += wa * wb;
            }
        }
        cycle_class.push(cl);
    }

    ChowRealization::new(level_dims, actions, Some(cycle_class))
}

/// Carrier tags of a special-decomposition certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierTag {
    Surface,
    CurveH1,
}

impl CarrierTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CarrierTag::Surface => "surface",
            CarrierTag::CurveH1 => "curve-h1",
        }
    }
}

/// A factorization `p = f o g` through a tagged small carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub f: RatMatrix,
    pub g: RatMatrix,
    pub tag: CarrierTag,
}

/// Factorizations of every ledger idempotent: even degrees through
/// surface carriers, odd degrees through curve carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialLedgerCertificate {
    pub factorizations: Vec<Factorization>,
}

impl SpecialLedgerCertificate {
    /// Verifies `f o g = p_degree` exactly for every degree, and that the
    /// carrier tags follow the even/odd convention.
    pub fn validate(&self, ledger: &KunnethLedger) -> Result<(), LedgerError> {
        if self.factorizations.len() != ledger.idempotents.len() {
            return Err(LedgerError::MissingFactorization {
                degree: self.factorizations.len(),
            });
        }
        for (degree, fac) in self.factorizations.iter().enumerate() {
            let expected = if degree % 2 == 0 {
                CarrierTag::Surface
            } else {
                CarrierTag::CurveH1
            };
            if fac.tag != expected {
                return Err(LedgerError::CertificateTag {
                    degree,
                    expected: expected.as_str(),
                });
            }
            if &(&fac.f * &fac.g) != ledger.idempotents[degree].mat() {
                return Err(LedgerError::CertificateMismatch { degree });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    /// Diagonal model helper: block projections onto contiguous blocks.
    pub(crate) fn diagonal_ledger(
        d: usize,
        sizes: &[usize],
        reverse_pairing: bool,
    ) -> KunnethLedger {
        let n: usize = sizes.iter().sum();
        let ctx = if reverse_pairing {
            InvolutiveContext::with_reverse_pairing(n).unwrap()
        } else {
            InvolutiveContext::with_identity_pairing(n).unwrap()
        };
        let homology = GradedHomology::from_block_sizes(d, sizes).unwrap();
        let idempotents = (0..=2 * d)
            .map(|i| {
                let mut m = RatMatrix::zeros(n, n);
                for c in homology.block_coords(i) {
                    m.set(c, c, rat_int(1));
                }
                Element::new(&ctx, m).unwrap()
            })
            .collect();
        KunnethLedger::new(d, &ctx, idempotents, homology).unwrap()
    }

    /// The curve model: degrees (1, 2, 1), a 2-dimensional level-0 carrier
    /// split into degree line + kernel line, a 1-dimensional level-1 carrier.
    pub(crate) fn curve_model() -> (KunnethLedger, ChowRealization) {
        let ledger = diagonal_ledger(1, &[1, 2, 1], true);
        let z22 = RatMatrix::zeros(2, 2);
        let z11 = RatMatrix::zeros(1, 1);
        let rho0_p0 = RatMatrix::from_i64_rows(&[&[1, 0], &[0, 0]]);
        let rho0_p1 = RatMatrix::from_i64_rows(&[&[0, 0], &[0, 1]]);
        let actions = vec![
            vec![rho0_p0, z11.clone()],
            vec![rho0_p1, z11.clone()],
            vec![z22, RatMatrix::identity(1)],
        ];
        let cl0 = RatMatrix::from_i64_rows(&[&[1, 0]]);
        let cl1 = RatMatrix::from_i64_rows(&[&[1]]);
        let real = ChowRealization::new(vec![2, 1], actions, Some(vec![cl0, cl1])).unwrap();
        (ledger, real)
    }

    #[test]
    fn diagonal_models_verify() {
        let ledger = diagonal_ledger(1, &[1, 2, 1], false);
        assert!(verify_ck(&ledger).passed());
        let ledger = diagonal_ledger(2, &[1, 2, 3, 2, 1], false);
        assert!(verify_ck(&ledger).passed());
    }

    #[test]
    fn verify_ck_negative_control_names_the_condition() {
        let ledger = diagonal_ledger(1, &[1, 2, 1], false);
        let ctx = ledger.ctx().clone();
        let mut bad = ledger.idempotents().to_vec();
        let mut m = bad[1].mat().clone();
        m.set(1, 2, rat_int(1)); // inside block 1: breaks idempotency, keeps orthogonality
        bad[1] = Element::new(&ctx, m).unwrap();
        let broken =
            KunnethLedger::new(1, &ctx, bad, ledger.homology().clone()).unwrap();
        let report = verify_ck(&broken);
        let item = report.find(check_id::CK_IDEMPOTENT).unwrap();
        assert!(!item.passed);
        assert_eq!(item.location, vec![1]);
        assert!(report.find(check_id::CK_ORTHOGONALITY).unwrap().passed);
    }

    #[test]
    fn self_dual_examples() {
        // reverse-block pairing swaps block i with block 2d-i
        let ledger = diagonal_ledger(1, &[1, 2, 1], true);
        assert!(check_self_dual(&ledger));
        // identity pairing with asymmetric end blocks: transpose fixes the
        // diagonal projectors but the images have different dimensions
        let ledger = diagonal_ledger(1, &[1, 2, 2], false);
        assert!(!check_self_dual(&ledger));
        assert_eq!(self_dual_violation(&ledger), Some(0));
        // all blocks empty except the middle
        let ledger = diagonal_ledger(1, &[0, 3, 0], true);
        assert!(check_self_dual(&ledger));
    }

    #[test]
    fn curve_model_filtration() {
        let (ledger, real) = curve_model();
        assert!(verify_ck(&ledger).passed());
        assert!(validate_realization(&ledger, &real, "curve").unwrap().passed());
        let chain = murre_filtration(&ledger, &real, 0).unwrap();
        // F^0 = Q^2, F^1 = jacobian line, F^2 = 0, F^3 = 0
        assert_eq!(chain.len(), 4);
        assert_eq!(chain[0], Subspace::full(2));
        assert_eq!(chain[1], Subspace::coordinate(2, &[1]));
        assert!(chain[2].is_zero());
        assert!(chain[3].is_zero());
        // level 1: rho(p_2) is the identity, so F^1 = 0
        let chain = murre_filtration(&ledger, &real, 1).unwrap();
        assert_eq!(chain[0], Subspace::full(1));
        assert!(chain[1].is_zero());
        assert!(murre_filtration(&ledger, &real, 2).is_err());
    }

    #[test]
    fn filtration_trivial_actions() {
        // all actions zero at a level: F^i stays the full space
        let ledger = diagonal_ledger(1, &[1, 2, 1], false);
        let z22 = RatMatrix::zeros(2, 2);
        let id1 = RatMatrix::identity(1);
        let actions = vec![
            vec![z22.clone(), RatMatrix::zeros(1, 1)],
            vec![z22.clone(), RatMatrix::zeros(1, 1)],
            vec![z22.clone(), id1],
        ];
        // note: this realization fails realization.sum at level 0 on
        // purpose; the filtration computation itself does not care
        let real = ChowRealization::new(vec![2, 1], actions, None).unwrap();
        let chain = murre_filtration(&ledger, &real, 0).unwrap();
        assert!(chain.iter().all(|s| *s == Subspace::full(2)));
    }

    #[test]
    fn murre_b_and_d_on_the_curve_model() {
        let (ledger, real) = curve_model();
        assert!(check_murre_b(&ledger, &real, "curve").unwrap().passed());
        assert!(check_murre_d(&ledger, &real, "curve").unwrap().passed());
    }

    #[test]
    fn murre_b_negative_control() {
        let (ledger, real) = curve_model();
        // make rho_0(p_2) nonzero: forbidden since d + l + 1 = 2 at l = 0
        let mut actions: Vec<Vec<RatMatrix>> = (0..3)
            .map(|m| vec![real.action(m, 0).clone(), real.action(m, 1).clone()])
            .collect();
        actions[2][0] = RatMatrix::from_i64_rows(&[&[0, 0], &[0, 1]]);
        actions[1][0] = RatMatrix::zeros(2, 2);
        let broken = ChowRealization::new(
            vec![2, 1],
            actions,
            Some(vec![
                real.cycle_class(0).unwrap().clone(),
                real.cycle_class(1).unwrap().clone(),
            ]),
        )
        .unwrap();
        let report = check_murre_b(&ledger, &broken, "curve").unwrap();
        let item = report.find(check_id::MURRE_B).unwrap();
        assert!(!item.passed);
        assert_eq!(item.location, vec![2, 0]);
    }

    #[test]
    fn murre_d_negative_control() {
        let (ledger, real) = curve_model();
        // cycle class that also kills the degree coordinate: ker(cl)
        // becomes everything while F^1 stays the jacobian line
        let broken = ChowRealization::new(
            vec![2, 1],
            (0..3)
                .map(|m| vec![real.action(m, 0).clone(), real.action(m, 1).clone()])
                .collect(),
            Some(vec![
                RatMatrix::zeros(1, 2),
                real.cycle_class(1).unwrap().clone(),
            ]),
        )
        .unwrap();
        let report = check_murre_d(&ledger, &broken, "curve").unwrap();
        let item = report.find(check_id::MURRE_D).unwrap();
        assert!(!item.passed);
        assert_eq!(item.location, vec![0]);
    }

    #[test]
    fn compare_filtrations_examples() {
        let (ledger, real) = curve_model();
        assert!(
            compare_filtrations(&ledger, &real, &ledger, &real, "cmp")
                .unwrap()
                .passed()
        );
        // permuted degree labels index the kernels differently
        let ctx = ledger.ctx().clone();
        let permuted = KunnethLedger::new(
            1,
            &ctx,
            vec![
                ledger.idempotent(1).clone(),
                ledger.idempotent(0).clone(),
                ledger.idempotent(2).clone(),
            ],
            ledger.homology().clone(),
        )
        .unwrap();
        let w2 = ChowRealization::new(
            vec![2, 1],
            vec![
                vec![real.action(1, 0).clone(), real.action(1, 1).clone()],
                vec![real.action(0, 0).clone(), real.action(0, 1).clone()],
                vec![real.action(2, 0).clone(), real.action(2, 1).clone()],
            ],
            None,
        )
        .unwrap();
        let report = compare_filtrations(&ledger, &real, &permuted, &w2, "cmp").unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn product_with_point_ledger_is_identity() {
        let point = diagonal_ledger(0, &[1], false);
        let (curve, _) = curve_model();
        let product = product_ledger(&point, &curve).unwrap();
        assert_eq!(product.d(), 1);
        assert_eq!(product.idempotents(), curve.idempotents());
        assert_eq!(product.homology(), curve.homology());
        assert!(verify_ck(&product).passed());
    }

    #[test]
    fn curve_times_curve_block_dims_convolve() {
        let c1 = diagonal_ledger(1, &[1, 2, 1], true);
        let c2 = diagonal_ledger(1, &[1, 4, 1], true);
        let product = product_ledger(&c1, &c2).unwrap();
        assert_eq!(product.d(), 2);
        assert!(verify_ck(&product).passed());
        // Kunneth convolution of (1,2,1) and (1,4,1)
        let expected = [1, 6, 10, 6, 1];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(product.homology().block_size(i), e, "block {i}");
        }
        // self-dual x self-dual is self-dual under the kron pairing
        assert!(check_self_dual(&c1));
        assert!(check_self_dual(&c2));
        assert!(check_self_dual(&product));
    }

    #[test]
    fn product_realization_passes_checks() {
        let (curve, real) = curve_model();
        let product = product_ledger(&curve, &curve).unwrap();
        let wprod = product_realization(&curve, &real, &curve, &real).unwrap();
        assert!(verify_ck(&product).passed());
        assert!(validate_realization(&product, &wprod, "prod")
            .unwrap()
            .passed());
        assert!(check_murre_b(&product, &wprod, "prod").unwrap().passed());
        assert!(check_murre_d(&product, &wprod, "prod").unwrap().passed());
    }

    #[test]
    fn certificate_validation() {
        let ledger = diagonal_ledger(1, &[1, 2, 1], true);
        let n = 4;
        let fac = |coords: Vec<usize>, tag| {
            let mut f = RatMatrix::zeros(n, coords.len().max(1));
            let mut g = RatMatrix::zeros(coords.len().max(1), n);
            for (i, &c) in coords.iter().enumerate() {
                f.set(c, i, rat_int(1));
                g.set(i, c, rat_int(1));
            }
            Factorization { f, g, tag }
        };
        let cert = SpecialLedgerCertificate {
            factorizations: vec![
                fac(vec![0], CarrierTag::Surface),
                fac(vec![1, 2], CarrierTag::CurveH1),
                fac(vec![3], CarrierTag::Surface),
            ],
        };
        cert.validate(&ledger).unwrap();
        let wrong_tag = SpecialLedgerCertificate {
            factorizations: vec![
                fac(vec![0], CarrierTag::CurveH1),
                fac(vec![1, 2], CarrierTag::CurveH1),
                fac(vec![3], CarrierTag::Surface),
            ],
        };
        assert!(matches!(
            wrong_tag.validate(&ledger),
            Err(LedgerError::CertificateTag { degree: 0, .. })
        ));
    }
}
