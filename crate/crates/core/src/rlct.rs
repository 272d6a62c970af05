//! Closed-form RLCT values for NMF and reduced rank regression.
//!
//! The NMF value is an exact rational in two regimes (true rank zero, or
//! model and true rank both one) and an upper bound otherwise:
//!
//! ```text
//! λ ≤ ½ [ (H − H0)·min{M,N} + H0·(M + N − 1) ]
//! ```
//!
//! Reduced rank regression admits an exact five-case formula (Aoyagi) in
//! the same dimensions, which lower-bounds the NMF value at matched rank
//! and powers the comparison table of [`crate::table`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelDims, RrrTruth, TrueStructure};
use crate::rational::Rational;

/// Whether a value is the RLCT itself or only an upper bound for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RlctKind {
    Exact,
    UpperBound,
}

/// Which result produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RlctSource {
    /// The general NMF upper bound.
    MainTheorem,
    /// Exact value for true rank zero: λ = H·min{M,N}/2.
    Lemma1,
    /// Exact value for H = H0 = 1: λ = (M+N−1)/2.
    Lemma2,
    /// Exact value under the nonnegative-residual sign condition.
    Remark,
    /// Aoyagi's exact reduced-rank-regression formula, cases 1–5.
    AoyagiCase(u8),
    /// Regular-model reference value d/2 = H(M+N)/2.
    RegularDim,
}

/// An exact rational RLCT (or RLCT bound) with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RlctValue {
    pub value: Rational,
    pub kind: RlctKind,
    pub source: RlctSource,
    /// True only for the degenerate H = 0 model, where λ = 0 by convention.
    pub degenerate: bool,
}

impl RlctValue {
    /// Human-readable form, e.g. `3/2 (exact)` or `45/2 (upper bound)`.
    pub fn display(&self) -> String {
        let kind = match self.kind {
            RlctKind::Exact => "exact",
            RlctKind::UpperBound => "upper bound",
        };
        format!("{} ({})", self.value, kind)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn validate_nmf_inputs(dims: &ModelDims, truth: &TrueStructure) -> Result<()> {
    truth.validate_against(dims)
}

fn bound_rational(dims: &ModelDims, h0: u32) -> Result<Rational> {
    let (m, n, h, h0) = (dims.m as i64, dims.n as i64, dims.h as i64, h0 as i64);
    let min = m.min(n);
    let num = (h - h0)
        .checked_mul(min)
        .and_then(|a| h0.checked_mul(m + n - 1).and_then(|b| a.checked_add(b)))
        .ok_or(Error::Overflow("NMF RLCT bound"))?;
    Rational::new(num, 2)
}

/// The Main Theorem bound ½[(H−H0)min{M,N} + H0(M+N−1)], tagged `Exact`
/// exactly in the regimes where the paper proves equality: H0 = 0 (Lemma 1)
/// and H = H0 = 1 (Lemma 2).
pub fn nmf_rlct_bound(dims: &ModelDims, truth: &TrueStructure) -> Result<RlctValue> {
    validate_nmf_inputs(dims, truth)?;
    let value = bound_rational(dims, truth.h0)?;
    let (kind, source) = if truth.h0 == 0 {
        (RlctKind::Exact, RlctSource::Lemma1)
    } else if dims.h == 1 && truth.h0 == 1 {
        (RlctKind::Exact, RlctSource::Lemma2)
    } else {
        (RlctKind::UpperBound, RlctSource::MainTheorem)
    };
    Ok(RlctValue { value, kind, source, degenerate: dims.h == 0 })
}

/// The same value as [`nmf_rlct_bound`] tagged `Exact` under the
/// nonnegative-residual sign condition (every residual component
/// f_ij^k ≥ 0). The condition depends on the true factors, not on the
/// dimensions, and is asserted by the caller; this function only documents
/// the hypothesis.
pub fn nmf_rlct_exact_nonneg_residual(dims: &ModelDims, truth: &TrueStructure) -> Result<RlctValue> {
    validate_nmf_inputs(dims, truth)?;
    let value = bound_rational(dims, truth.h0)?;
    Ok(RlctValue {
        value,
        kind: RlctKind::Exact,
        source: RlctSource::Remark,
        degenerate: dims.h == 0,
    })
}

/// Aoyagi's exact RLCT for reduced rank regression with true rank `r`.
/// Exactly one of the five cases applies for every valid input.
pub fn rrr_rlct(dims: &ModelDims, truth: &RrrTruth) -> Result<RlctValue> {
    let (m, n, h, r) = (dims.m as i64, dims.n as i64, dims.h as i64, truth.r as i64);
    if r > m.min(n).min(h) {
        return Err(Error::Dims(format!(
            "true rank r = {r} exceeds min(M,N,H) = {}",
            m.min(n).min(h)
        )));
    }
    let (value, case) = if n + r <= m + h && m + r <= n + h && h + r <= m + n {
        // Cases 1 and 2, split on the parity of M+H+N+r.
        let even = (m + h + n + r) % 2 == 0;
        let num = 2 * (h + r) * (m + n) - (m - n) * (m - n) - (h + r) * (h + r);
        if even {
            (Rational::new(num, 8)?, 1)
        } else {
            (Rational::new(num + 1, 8)?, 2)
        }
    } else if m + h < n + r {
        (Rational::new(h * m - h * r + n * r, 2)?, 3)
    } else if n + h < m + r {
        (Rational::new(h * n - h * r + m * r, 2)?, 4)
    } else if m + n < h + r {
        (Rational::new(m * n, 2)?, 5)
    } else {
        // The three case-1/2 inequalities are exactly the negations of the
        // case-3/4/5 guards, so this is unreachable for any valid input.
        unreachable!("no RRR case applies for M={m}, N={n}, H={h}, r={r}")
    };
    Ok(RlctValue {
        value,
        kind: RlctKind::Exact,
        source: RlctSource::AoyagiCase(case),
        degenerate: dims.h == 0,
    })
}

/// The regular-model reference λ = d/2 with d = H(M+N) parameters.
pub fn regular_half_dim(dims: &ModelDims) -> RlctValue {
    let d = dims.h as i64 * (dims.m as i64 + dims.n as i64);
    RlctValue {
        value: Rational::new(d, 2).expect("denominator 2 is nonzero"),
        kind: RlctKind::Exact,
        source: RlctSource::RegularDim,
        degenerate: dims.h == 0,
    }
}

/// Consistency of a (rank, nonnegative rank) pair for an M×N matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankFeasibility {
    /// The pair satisfies every known constraint.
    Feasible,
    /// Violates rank ≤ rank₊ ≤ min{M,N}.
    Infeasible,
    /// M ≤ 3 or N ≤ 3 forces rank = rank₊; a differing pair is invalid.
    ForcedEqual,
}

/// Applies the known nonnegative-rank constraints:
/// rank ≤ rank₊ ≤ min{M,N}, with equality forced when M ≤ 3 or N ≤ 3.
pub fn rank_feasibility(m: u32, n: u32, rank: u32, nonneg_rank: u32) -> RankFeasibility {
    if rank > nonneg_rank || nonneg_rank > m.min(n) {
        RankFeasibility::Infeasible
    } else if (m <= 3 || n <= 3) && rank != nonneg_rank {
        RankFeasibility::ForcedEqual
    } else {
        RankFeasibility::Feasible
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: u32, n: u32, h: u32) -> ModelDims {
        ModelDims::new(m, n, h).unwrap()
    }

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn bound_examples() {
        let v = nmf_rlct_bound(&dims(2, 2, 2), &TrueStructure::rank_only(0)).unwrap();
        assert_eq!(v.value, rat(2, 1));
        assert_eq!(v.kind, RlctKind::Exact);
        assert_eq!(v.source, RlctSource::Lemma1);

        let v = nmf_rlct_bound(&dims(3, 3, 1), &TrueStructure::rank_only(1)).unwrap();
        assert_eq!(v.value, rat(5, 2));
        assert_eq!(v.kind, RlctKind::Exact);
        assert_eq!(v.source, RlctSource::Lemma2);

        let v = nmf_rlct_bound(&dims(4, 4, 4), &TrueStructure::rank_only(4)).unwrap();
        assert_eq!(v.value, rat(14, 1));
        assert_eq!(v.kind, RlctKind::UpperBound);

        let v = nmf_rlct_bound(&dims(5, 5, 5), &TrueStructure::rank_only(5)).unwrap();
        assert_eq!(v.value, rat(45, 2));
        assert_eq!(v.kind, RlctKind::UpperBound);
        assert_eq!(v.display(), "45/2 (upper bound)");
    }

    #[test]
    fn bound_validation() {
        assert!(nmf_rlct_bound(&dims(2, 2, 1), &TrueStructure::rank_only(3)).is_err());
        assert!(nmf_rlct_bound(&dims(2, 2, 3), &TrueStructure::rank_only(3)).is_err());
    }

    #[test]
    fn remark_examples() {
        let v = nmf_rlct_exact_nonneg_residual(&dims(2, 2, 2), &TrueStructure::rank_only(2)).unwrap();
        assert_eq!(v.value, rat(3, 1));
        assert_eq!(v.kind, RlctKind::Exact);
        assert_eq!(v.source, RlctSource::Remark);

        let v = nmf_rlct_exact_nonneg_residual(&dims(2, 2, 1), &TrueStructure::rank_only(0)).unwrap();
        assert_eq!(v.value, rat(1, 1));

        // ½[(2−1)·2 + 1·(3+2−1)] = ½[2 + 4] = 3.
        let v = nmf_rlct_exact_nonneg_residual(&dims(3, 2, 2), &TrueStructure::rank_only(1)).unwrap();
        assert_eq!(v.value, rat(3, 1));
    }

    #[test]
    fn rrr_examples() {
        let v = rrr_rlct(&dims(2, 2, 2), &RrrTruth::new(0)).unwrap();
        assert_eq!(v.value, rat(3, 2));
        assert_eq!(v.source, RlctSource::AoyagiCase(1));

        let v = rrr_rlct(&dims(4, 4, 4), &RrrTruth::new(3)).unwrap();
        assert_eq!(v.value, rat(8, 1));
        assert_eq!(v.source, RlctSource::AoyagiCase(2));

        // H + r = M + N here, so this sits on the case-1 boundary, not in
        // the M+N < H+r case; the value is 8 either way.
        let v = rrr_rlct(&dims(4, 4, 5), &RrrTruth::new(3)).unwrap();
        assert_eq!(v.value, rat(8, 1));
        assert_eq!(v.source, RlctSource::AoyagiCase(1));

        let v = rrr_rlct(&dims(5, 5, 5), &RrrTruth::new(5)).unwrap();
        assert_eq!(v.value, rat(25, 2));

        // A genuine case-5 input.
        let v = rrr_rlct(&dims(3, 3, 5), &RrrTruth::new(3)).unwrap();
        assert_eq!(v.value, rat(9, 2));
        assert_eq!(v.source, RlctSource::AoyagiCase(5));

        assert!(rrr_rlct(&dims(2, 2, 4), &RrrTruth::new(3)).is_err());
    }

    #[test]
    fn rrr_rectangular_cases() {
        // M + H < N + r triggers case 3.
        let v = rrr_rlct(&dims(1, 5, 1), &RrrTruth::new(1)).unwrap();
        assert_eq!(v.source, RlctSource::AoyagiCase(3));
        assert_eq!(v.value, rat(5, 2)); // (HM − Hr + Nr)/2 = (1 − 1 + 5)/2
        // N + H < M + r triggers case 4 by symmetry.
        let v = rrr_rlct(&dims(5, 1, 1), &RrrTruth::new(1)).unwrap();
        assert_eq!(v.source, RlctSource::AoyagiCase(4));
        assert_eq!(v.value, rat(5, 2));
    }

    #[test]
    fn regular_examples() {
        assert_eq!(regular_half_dim(&dims(2, 2, 1)).value, rat(2, 1));
        assert_eq!(regular_half_dim(&dims(3, 4, 2)).value, rat(7, 1));
        assert_eq!(regular_half_dim(&dims(5, 5, 5)).value, rat(25, 1));
    }

    #[test]
    fn zero_h_is_degenerate_zero() {
        let v = nmf_rlct_bound(&dims(3, 2, 0), &TrueStructure::rank_only(0)).unwrap();
        assert!(v.value.is_zero());
        assert!(v.degenerate);
        let v = rrr_rlct(&dims(3, 2, 0), &RrrTruth::new(0)).unwrap();
        assert!(v.value.is_zero());
        assert!(v.degenerate);
        assert!(regular_half_dim(&dims(3, 2, 0)).value.is_zero());
    }

    #[test]
    fn feasibility_examples() {
        assert_eq!(rank_feasibility(4, 4, 3, 4), RankFeasibility::Feasible);
        assert_eq!(rank_feasibility(3, 3, 3, 4), RankFeasibility::Infeasible);
        assert_eq!(rank_feasibility(3, 5, 2, 3), RankFeasibility::ForcedEqual);
        assert_eq!(rank_feasibility(5, 5, 3, 2), RankFeasibility::Infeasible);
        assert_eq!(rank_feasibility(2, 2, 1, 1), RankFeasibility::Feasible);
    }

    /// The five RRR guards must be mutually exclusive and exhaustive; the
    /// grid check also pins down case attribution stability.
    #[test]
    fn rrr_cases_exhaustive_on_grid() {
        for m in 1..=8u32 {
            for n in 1..=8u32 {
                for h in 0..=8u32 {
                    for r in 0..=m.min(n).min(h) {
                        let v = rrr_rlct(&dims(m, n, h), &RrrTruth::new(r)).unwrap();
                        if h > 0 {
                            assert!(
                                v.value > Rational::from_int(0),
                                "nonpositive RRR value at ({m},{n},{h},{r})"
                            );
                        }
                    }
                }
            }
        }
    }

    /// The bound strictly undercuts the regular d/2 for every H ≥ 1 and
    /// grows by exactly min(M,N)/2 per unit of H.
    #[test]
    fn bound_structure_on_grid() {
        for m in 1..=8u32 {
            for n in 1..=8u32 {
                for h in 1..=8u32 {
                    for h0 in 0..=h.min(m.min(n)) {
                        let d = dims(m, n, h);
                        let t = TrueStructure::rank_only(h0);
                        let b = nmf_rlct_bound(&d, &t).unwrap();
                        assert!(b.value < regular_half_dim(&d).value, "({m},{n},{h},{h0})");
                        if h0 == 0 {
                            // Lemma 1: λ = H·min(M,N)/2.
                            assert_eq!(b.value, rat(h as i64 * m.min(n) as i64, 2));
                        }
                        if h < 8 {
                            let up =
                                nmf_rlct_bound(&dims(m, n, h + 1), &t).unwrap();
                            assert_eq!(
                                up.value.sub(&b.value).unwrap(),
                                rat(m.min(n) as i64, 2)
                            );
                        }
                    }
                }
            }
        }
    }
}
