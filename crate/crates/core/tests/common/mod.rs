#![allow(dead_code)]

use hasse_core::linalg::IntMatrix;
use hasse_core::positivity::ample_from_coefficients;
use hasse_core::root_datum::{
    build_group, GroupSpec, Isogeny, NodeSet, ParabolicType, RationalCharacter, RootDatum, Series,
};
use hasse_core::zip::{build_zip_datum, ZipDatum, ZipInput};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn simple(series: Series, rank: usize, isogeny: Isogeny) -> GroupSpec {
    GroupSpec::Simple { series, rank, isogeny }
}

pub fn weil(r: usize, inner: GroupSpec) -> GroupSpec {
    GroupSpec::WeilRestriction { r, inner: Box::new(inner) }
}

/// 1-based labels to a node set.
pub fn nodes(xs: &[usize]) -> NodeSet {
    xs.iter().map(|x| x - 1).collect()
}

pub fn subsets(n: usize) -> Vec<NodeSet> {
    (0u32..(1 << n)).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

pub fn datum(spec: &GroupSpec, q: u64, j: NodeSet) -> ZipDatum {
    let (rd, frob) = build_group(spec, q).expect("valid builder");
    build_zip_datum(&rd, &frob, ZipInput::Parabolic(j)).expect("valid type")
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A random ample character of `pt`: positive coefficients on the
/// fundamental weights plus a random central character.
pub fn random_ample<R: Rng>(rd: &RootDatum, pt: &ParabolicType, rng: &mut R) -> RationalCharacter {
    let k = rd.node_count() - rd.effective_type(pt).len();
    let coeffs: Vec<BigRational> = (0..k).map(|_| rat(rng.gen_range(1..=30), rng.gen_range(1..=6))).collect();
    let mut lambda = ample_from_coefficients(rd, pt, &coeffs);
    let central = rd.central_characters();
    for c in 0..central.cols() {
        let t = BigRational::from_integer(rng.gen_range(-5i64..=5).into());
        let col: Vec<BigRational> = central.column(c).into_iter().map(BigRational::from_integer).collect();
        lambda = lambda.add(&RationalCharacter(col).scale(&t));
    }
    lambda
}

/// Cofactor-expansion determinant, independent of the library routine.
pub fn laplace_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * laplace_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(n).into_iter().filter(|s| s.len() == k).map(|s| s.into_iter().collect()).collect()
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}` with
/// `D_k` the gcd of all `k x k` minors.
pub fn minors_oracle(m: &IntMatrix) -> Vec<BigInt> {
    let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in combinations(m.rows(), k) {
            for cs in combinations(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect()).collect();
                g = g.gcd(&laplace_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push((&g / &prev).abs());
        prev = g;
    }
    out
}
