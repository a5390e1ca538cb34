//! Zip data, the `zeta` endomorphism of `X^*(L_0)`, Hasse numbers and the
//! orbit census.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::linalg::{integer_coordinates, IntMatrix};
use crate::root_datum::{FrobeniusStructure, NodeSet, ParabolicType, RootDatum, RootDatumError};
use crate::weyl::WeylGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZipError {
    #[error("cocharacter has {found} coordinates, expected {expected}")]
    CocharacterLength { expected: usize, found: usize },
    #[error("cocharacter pairs negatively with simple root {node}")]
    NonNormalizedCocharacter { node: usize },
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error("derived group of L0 is not simply connected (torsion {torsion:?}); coker(zeta) may differ from X*(S0)")]
    PicObstruction { torsion: Vec<BigInt>, report: Box<HasseReport> },
}

/// How the parabolic `P` is specified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZipInput {
    Cocharacter(Vec<i64>),
    Parabolic(NodeSet),
}

/// `(G, P, Q, phi)` reduced to types. `P` contains `B^-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZipDatum {
    pub rd: RootDatum,
    pub frob: FrobeniusStructure,
    pub j: NodeSet,
    pub k: NodeSet,
    pub j0: NodeSet,
    pub cochar: Option<Vec<i64>>,
}

pub fn build_zip_datum(rd: &RootDatum, frob: &FrobeniusStructure, input: ZipInput) -> Result<ZipDatum, ZipError> {
    let (j, cochar) = match input {
        ZipInput::Parabolic(j) => {
            rd.check_nodes(&j)?;
            (j, None)
        }
        ZipInput::Cocharacter(chi) => {
            if chi.len() != rd.rank() {
                return Err(ZipError::CocharacterLength { expected: rd.rank(), found: chi.len() });
            }
            let mut j = NodeSet::new();
            for i in 0..rd.node_count() {
                match rd.pair_root(&chi, i) {
                    0 => {
                        j.insert(i);
                    }
                    p if p < 0 => return Err(ZipError::NonNormalizedCocharacter { node: i }),
                    _ => {}
                }
            }
            (j, Some(chi))
        }
    };
    let k = rd.opp_type(&frob.permute(&j));
    let mut j0 = j.clone();
    let mut cur = j.clone();
    for _ in 1..frob.perm_order() {
        cur = frob.permute(&cur);
        j0 = j0.intersection(&cur).copied().collect();
    }
    Ok(ZipDatum { rd: rd.clone(), frob: frob.clone(), j, k, j0, cochar })
}

impl ZipDatum {
    pub fn parabolic(&self) -> ParabolicType {
        ParabolicType::minus(self.j.clone())
    }

    /// `pi(J) = J`, i.e. `P` and `Q` are defined over `F_q`.
    pub fn is_rational(&self) -> bool {
        self.frob.permute(&self.j) == self.j
    }

    pub fn dim_g(&self) -> usize {
        self.rd.group_dimension()
    }

    /// `rank + |Phi^+| + |Phi^+_J|`.
    pub fn dim_p(&self) -> usize {
        let pr = self.rd.positive_roots();
        self.rd.rank() + pr.roots.len() + pr.count_in(&self.j)
    }

    /// `dim P + dim R_u(Q)`.
    pub fn dim_e(&self) -> usize {
        let pr = self.rd.positive_roots();
        self.dim_p() + pr.roots.len() - pr.count_in(&self.k)
    }

    /// Basis (columns) of `X^*(L_0)`.
    pub fn l0_lattice(&self) -> IntMatrix {
        self.rd.char_lattice_of_parabolic(&ParabolicType::minus(self.j0.clone()))
    }

    /// `id - q tau` on the full `X^*`.
    pub fn zeta_borel(&self) -> IntMatrix {
        let n = self.rd.rank();
        IntMatrix::identity(n).sub(&self.frob.tau().scale(&self.frob.q_big()))
    }

    /// Matrix of `zeta` on the sublattice spanned by the columns of `basis`,
    /// or `None` when that sublattice is not `tau`-stable.
    pub fn zeta_on_sublattice(&self, basis: &IntMatrix) -> Option<IntMatrix> {
        let full = self.zeta_borel();
        let cols = (0..basis.cols())
            .map(|c| integer_coordinates(basis, &full.apply(&basis.column(c))))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_columns(basis.cols(), &cols))
    }

    /// `zeta` on `X^*(L_0)` in the basis [`ZipDatum::l0_lattice`].
    pub fn zeta_matrix(&self) -> IntMatrix {
        self.zeta_on_sublattice(&self.l0_lattice()).expect("X*(L0) is tau-stable")
    }

    /// Torsion of `X_*` modulo the coroots of `J_0`.
    pub fn l0_torsion(&self) -> Vec<BigInt> {
        self.rd.coroot_torsion(&self.j0)
    }

    /// Builds the report without the `Pic(L_0)` check.
    pub fn hasse_report_unchecked(&self) -> HasseReport {
        let zeta = self.zeta_matrix();
        let det = zeta.determinant().expect("zeta is square");
        let snf = zeta.smith_normal_form();
        let factors = snf.invariant_factors;
        let hasse = factors.iter().max().cloned().unwrap_or_else(BigInt::one);
        HasseReport {
            zeta,
            s0_order: det.abs(),
            det_zeta: det,
            hasse_number: hasse,
            invariant_factors: factors,
            pic_l0_trivial: self.l0_torsion().is_empty(),
            l0_type: self.j0.clone(),
        }
    }

    /// `X^*(S_0)` as the cokernel of `zeta`.
    pub fn s0_characters(&self) -> Result<HasseReport, ZipError> {
        let report = self.hasse_report_unchecked();
        if report.pic_l0_trivial {
            Ok(report)
        } else {
            Err(ZipError::PicObstruction { torsion: self.l0_torsion(), report: Box::new(report) })
        }
    }

    /// Exponent of `X^*(S_0)`.
    pub fn hasse_number(&self) -> Result<BigInt, ZipError> {
        self.s0_characters().map(|r| r.hasse_number)
    }

    /// E-orbits indexed by `^J W`.
    pub fn orbit_census(&self, w: &WeylGroup) -> OrbitCensus {
        let reps = w.min_coset_reps(&self.j);
        let dim_p = self.dim_p();
        let eta_length = w.length(w.eta(&self.j));
        let orbits: Vec<Orbit> = reps
            .reps
            .iter()
            .map(|&(e, l)| Orbit {
                element: e,
                word: w.element(e).word.clone(),
                length: l,
                dimension: l + dim_p,
                codimension: eta_length - l,
            })
            .collect();
        let codim1 = w
            .codim1_reps(&self.j)
            .into_iter()
            .map(|(s, e)| {
                let pos = orbits.iter().position(|o| o.element == e).expect("codim-1 rep lies in ^J W");
                (s, pos)
            })
            .collect();
        OrbitCensus { orbits, eta_length, codim1, dim_g: self.dim_g(), dim_p }
    }

    /// Rank of the equivariant Picard group, computed two ways.
    pub fn pic_rank(&self) -> PicRank {
        let count = self.rd.node_count() - self.j.len();
        let m_p = self.rd.char_lattice_of_parabolic(&self.parabolic()).cols() - self.rd.central_characters().cols();
        assert_eq!(count, m_p, "m_P disagrees with |I \\ J|");
        PicRank { count, m_p }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseReport {
    pub zeta: IntMatrix,
    pub det_zeta: BigInt,
    /// All invariant factors of `zeta`, ones included.
    pub invariant_factors: Vec<BigInt>,
    pub s0_order: BigInt,
    pub hasse_number: BigInt,
    pub pic_l0_trivial: bool,
    pub l0_type: NodeSet,
}

impl HasseReport {
    /// Invariant factors greater than one.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub element: usize,
    pub word: Vec<usize>,
    pub length: usize,
    pub dimension: usize,
    pub codimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCensus {
    pub orbits: Vec<Orbit>,
    pub eta_length: usize,
    /// `(s, index into orbits)` for `s` in `I \ J`.
    pub codim1: Vec<(usize, usize)>,
    pub dim_g: usize,
    pub dim_p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PicRank {
    pub count: usize,
    pub m_p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocharClass {
    Central,
    Minuscule,
    SmallNotMinuscule,
    Neither,
}

/// Pairings `<chi, alpha_i>` of the dominant `W`-conjugate of `chi`.
pub fn dominant_pairings(rd: &RootDatum, chi: &[i64]) -> Vec<i64> {
    let c = rd.cartan();
    let mut a: Vec<i64> = (0..rd.node_count()).map(|i| rd.pair_root(chi, i)).collect();
    // s_i chi = chi - <chi, alpha_i> alpha_i^vee
    while let Some(i) = a.iter().position(|&x| x < 0) {
        let ai = a[i];
        for (j, aj) in a.iter_mut().enumerate() {
            *aj -= ai * c[i][j];
        }
    }
    a
}

pub fn classify_cocharacter(rd: &RootDatum, chi: &[i64]) -> CocharClass {
    let a = dominant_pairings(rd, chi);
    if a.iter().all(|&x| x == 0) {
        return CocharClass::Central;
    }
    let highest = rd.positive_roots().highest;
    let mut small = true;
    let mut special = true;
    for (comp, coeffs) in rd.components().iter().zip(&highest) {
        let pos: Vec<usize> = (0..comp.rank()).filter(|&k| a[comp.nodes[k]] > 0).collect();
        match pos.as_slice() {
            [] => {}
            [k] if a[comp.nodes[*k]] == 1 => special &= coeffs[*k] == 1,
            _ => small = false,
        }
    }
    let class = match (small, special) {
        (true, true) => CocharClass::Minuscule,
        (true, false) => CocharClass::SmallNotMinuscule,
        _ => CocharClass::Neither,
    };
    debug_assert_eq!(class == CocharClass::Minuscule, pairings_bounded(rd, chi));
    class
}

/// `|<chi, alpha>| <= 1` for every root.
pub fn pairings_bounded(rd: &RootDatum, chi: &[i64]) -> bool {
    rd.positive_roots().roots.iter().all(|r| r.vector.iter().zip(chi).map(|(x, y)| x * y).sum::<i64>().abs() <= 1)
}
