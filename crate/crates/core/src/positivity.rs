//! Ampleness of characters of parabolics and sign certificates for the
//! divisor of the Hasse invariant.
//!
//! Divisors are read off at the level of the Borel: the coefficient on the
//! codimension-one orbit attached to `alpha` is `<alpha^vee, -zeta_T^{-1} lambda>`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::root_datum::{NodeSet, Orientation, ParabolicType, RationalCharacter, RootDatum};
use crate::zip::ZipDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositivityError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("P and Q are not both defined over F_q")]
    NotRationalCase,
    #[error("datum is not a Weil restriction")]
    NotWeilRestriction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Amplitude {
    Ample,
    Antiample,
    Neither,
    NotInLattice,
}

impl Amplitude {
    pub fn as_str(self) -> &'static str {
        match self {
            Amplitude::Ample => "ample",
            Amplitude::Antiample => "antiample",
            Amplitude::Neither => "neither",
            Amplitude::NotInLattice => "not_in_lattice",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    CertifiedNegative,
    Mixed,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedNegative => "certified_negative",
            Verdict::Mixed => "mixed",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

/// `(ample, antiample)` sign conditions, or `None` outside `X^*(P)`.
fn sign_conditions(rd: &RootDatum, pt: &ParabolicType, lambda: &RationalCharacter) -> Option<(bool, bool)> {
    let j_eff = rd.effective_type(pt);
    if j_eff.iter().any(|&j| !rd.pair_coroot(j, lambda).is_zero()) {
        return None;
    }
    let signs: Vec<BigRational> =
        (0..rd.node_count()).filter(|i| !j_eff.contains(i)).map(|i| rd.pair_coroot(i, lambda)).collect();
    let (all_pos, all_neg) = (signs.iter().all(Signed::is_positive), signs.iter().all(Signed::is_negative));
    Some(match pt.orientation {
        Orientation::ContainsB => (all_pos, all_neg),
        Orientation::ContainsBminus => (all_neg, all_pos),
    })
}

/// Classifies `lambda` as a character of the standard parabolic `pt`.
///
/// When every simple root lies in `J` the sign conditions are vacuous; such
/// characters are reported as ample, and [`is_antiample_char`] also holds.
pub fn is_ample(rd: &RootDatum, pt: &ParabolicType, lambda: &RationalCharacter) -> Amplitude {
    match sign_conditions(rd, pt, lambda) {
        None => Amplitude::NotInLattice,
        Some((true, _)) => Amplitude::Ample,
        Some((false, true)) => Amplitude::Antiample,
        Some((false, false)) => Amplitude::Neither,
    }
}

pub fn is_ample_char(rd: &RootDatum, pt: &ParabolicType, lambda: &RationalCharacter) -> bool {
    matches!(sign_conditions(rd, pt, lambda), Some((true, _)))
}

pub fn is_antiample_char(rd: &RootDatum, pt: &ParabolicType, lambda: &RationalCharacter) -> bool {
    matches!(sign_conditions(rd, pt, lambda), Some((_, true)))
}

/// `sign * sum c_i omega_i` over `I \ J_eff`, with the sign chosen so that
/// positive coefficients give an ample character of `pt`.
pub fn ample_from_coefficients(rd: &RootDatum, pt: &ParabolicType, coeffs: &[BigRational]) -> RationalCharacter {
    let sign = match pt.orientation {
        Orientation::ContainsB => BigRational::one(),
        Orientation::ContainsBminus => -BigRational::one(),
    };
    let weights = rd.fundamental_weights(&rd.effective_type(pt));
    assert_eq!(weights.len(), coeffs.len(), "one coefficient per node outside J");
    weights
        .iter()
        .zip(coeffs)
        .fold(RationalCharacter::zero(rd.rank()), |acc, ((_, w), c)| acc.add(&w.scale(&(c * &sign))))
}

/// `-sum omega_i` (resp. `+sum` for `contains_B`).
pub fn canonical_ample(rd: &RootDatum, pt: &ParabolicType) -> RationalCharacter {
    let k = rd.node_count() - rd.effective_type(pt).len();
    ample_from_coefficients(rd, pt, &vec![BigRational::one(); k])
}

/// `zeta^{-1}` on the full `X^*` (`at_borel`) or on `X^*(L_0)`.
pub fn zeta_inverse(zd: &ZipDatum, at_borel: bool) -> RatMatrix {
    let zeta = if at_borel { zd.zeta_borel() } else { zd.zeta_matrix() };
    zeta.rational_inverse().expect("zeta is injective")
}

fn apply_zeta_inverse(zd: &ZipDatum, lambda: &RationalCharacter) -> RationalCharacter {
    RationalCharacter(zeta_inverse(zd, true).apply(&lambda.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntiampleCertificate {
    pub zeta_inverse_image: RationalCharacter,
    pub antiample: bool,
    /// `q tau(lambda)` is ample.
    pub frobenius_ample: bool,
}

impl AntiampleCertificate {
    pub fn certified(&self) -> bool {
        self.antiample && self.frobenius_ample
    }
}

/// Checks that `zeta^{-1}(lambda)` is antiample and `q tau(lambda)` is
/// ample for an ample `lambda`. Only rational data (`pi(J) = J`) are covered.
pub fn antiample_check(zd: &ZipDatum, lambda: &RationalCharacter) -> Result<AntiampleCertificate, PositivityError> {
    if !zd.is_rational() {
        return Err(PositivityError::PreconditionViolated("pi(J) != J".into()));
    }
    let pt = zd.parabolic();
    if !is_ample_char(&zd.rd, &pt, lambda) {
        return Err(PositivityError::PreconditionViolated("lambda is not ample".into()));
    }
    let mu = apply_zeta_inverse(zd, lambda);
    let q = BigRational::from_integer(zd.frob.q_big());
    let tau = zd.frob.tau().to_rational();
    let twisted = RationalCharacter(tau.apply(&lambda.0)).scale(&q);
    Ok(AntiampleCertificate {
        antiample: is_antiample_char(&zd.rd, &pt, &mu),
        frobenius_ample: is_ample_char(&zd.rd, &pt, &twisted),
        zeta_inverse_image: mu,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    pub input_character: RationalCharacter,
    pub zeta_inverse_image: RationalCharacter,
    pub antiample_certified: bool,
    pub borel_coefficients: Vec<BigRational>,
    pub negative_count: usize,
    pub verdict: Verdict,
}

/// Borel-level coefficients of the divisor attached to `lambda`.
pub fn hasse_divisor_coeffs(zd: &ZipDatum, lambda: &RationalCharacter) -> Result<PositivityReport, PositivityError> {
    if !zd.is_rational() {
        return Err(PositivityError::NotRationalCase);
    }
    let mu = apply_zeta_inverse(zd, lambda);
    let neg = mu.neg();
    let coeffs: Vec<BigRational> = (0..zd.rd.node_count()).map(|i| zd.rd.pair_coroot(i, &neg)).collect();
    let negative_count = coeffs.iter().filter(|c| c.is_negative()).count();
    let outside = zd.rd.node_count() - zd.j.len();
    let certified = if zd.j.is_empty() {
        negative_count == coeffs.len()
    } else {
        coeffs.iter().all(|c| !c.is_positive()) && negative_count == outside
    };
    let pt = zd.parabolic();
    Ok(PositivityReport {
        input_character: lambda.clone(),
        antiample_certified: is_antiample_char(&zd.rd, &pt, &mu),
        zeta_inverse_image: mu,
        borel_coefficients: coeffs,
        negative_count,
        verdict: if certified { Verdict::CertifiedNegative } else { Verdict::Mixed },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilPullback {
    /// Type `J'` (inner nodes) of the intersected parabolic.
    pub inner_type: NodeSet,
    /// One pullback character of the inner group per block.
    pub pullbacks: Vec<(RationalCharacter, Amplitude)>,
}

impl WeilPullback {
    pub fn all_ample(&self) -> bool {
        self.pullbacks.iter().all(|(_, a)| *a == Amplitude::Ample)
    }
}

/// Pulls an ample `lambda` back along each block of a Weil restriction.
///
/// With `a_i` the pairing of `lambda` against the one simple coroot of block
/// `i` it may see, the `j`-th pullback is
/// `sum_i a_i q^{(i - j) mod r} omega_{node_i}` on the inner group, which
/// must be ample for the intersection of the block parabolics.
pub fn weil_pullback_check(zd: &ZipDatum, lambda: &RationalCharacter) -> Result<WeilPullback, PositivityError> {
    let blocks = zd.rd.weil_blocks().ok_or(PositivityError::NotWeilRestriction)?;
    let (r, m) = (blocks.r, blocks.inner_nodes);
    let inner = &blocks.inner;
    if !is_ample_char(&zd.rd, &zd.parabolic(), lambda) {
        return Err(PositivityError::PreconditionViolated("lambda is not ample".into()));
    }
    let local: Vec<NodeSet> = (0..r).map(|b| zd.j.iter().filter(|&&x| x / m == b).map(|&x| x % m).collect()).collect();
    let mut inner_type: NodeSet = (0..m).collect();
    let mut terms = Vec::new();
    for (b, jb) in local.iter().enumerate() {
        inner_type = inner_type.intersection(jb).copied().collect();
        match m - jb.len() {
            0 => {}
            1 => {
                let opp = inner.opp_type(jb);
                let node = (0..m).find(|x| !opp.contains(x)).expect("one node outside opp(J_b)");
                terms.push((b, node, zd.rd.pair_coroot(b * m + node, lambda)));
            }
            _ => {
                return Err(PositivityError::PreconditionViolated(format!(
                    "block {} parabolic is neither maximal nor full",
                    b + 1
                )))
            }
        }
    }
    let weights = inner.fundamental_weights(&NodeSet::new());
    let q = zd.frob.q_big();
    let pt = ParabolicType::minus(inner_type.clone());
    let pullbacks = (0..r)
        .map(|j| {
            let chi = terms.iter().fold(RationalCharacter::zero(inner.rank()), |acc, (i, node, a)| {
                let power = BigRational::from_integer(num_traits::pow(q.clone(), (i + r - j) % r));
                acc.add(&weights[*node].1.scale(&(a * power)))
            });
            let amp = is_ample(inner, &pt, &chi);
            (chi, amp)
        })
        .collect();
    Ok(WeilPullback { inner_type, pullbacks })
}

/// `zeta_T(mu)`, used to build characters with a prescribed divisor.
pub fn zeta_image(zd: &ZipDatum, mu: &RationalCharacter) -> RationalCharacter {
    RationalCharacter(zd.zeta_borel().to_rational().apply(&mu.0))
}
