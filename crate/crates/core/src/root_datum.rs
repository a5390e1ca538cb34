//! Based root data with an `F_q`-structure.
//!
//! Simple roots live in `X^* = Z^rank`, simple coroots in `X_* = Z^rank`,
//! and the pairing between them is the dot product. Nodes of the Dynkin
//! diagram are indexed from 0 internally; configs and reports use 1-based
//! labels.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{integer_kernel, IntMatrix};
use crate::weyl;

/// A subset of the simple reflections `I`.
pub type NodeSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDatumError {
    #[error("unsupported series: {0}")]
    UnsupportedSeries(String),
    #[error("invalid rank {rank} for {what}")]
    InvalidRank { what: String, rank: usize },
    #[error("q = {0} is not a prime power >= 2")]
    InvalidQ(u64),
    #[error("node {node} out of range (|I| = {count})")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("root datum is not of finite type: {0}")]
    NotFiniteType(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
}

/// Builder description for [`build_group`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Gl { n: usize },
    Gsp { g: usize },
    Unitary { n: usize },
    Simple { series: Series, rank: usize, isogeny: Isogeny },
    Product { factors: Vec<GroupSpec> },
    WeilRestriction { r: usize, inner: Box<GroupSpec> },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Gl { n } => write!(f, "GL_{n}"),
            GroupSpec::Gsp { g } => write!(f, "GSp_{}", 2 * g),
            GroupSpec::Unitary { n } => write!(f, "U({n})"),
            GroupSpec::Simple { series, rank, isogeny } => {
                let tag = match isogeny {
                    Isogeny::SimplyConnected => "sc",
                    Isogeny::Adjoint => "ad",
                };
                write!(f, "{series}{rank}^{tag}")
            }
            GroupSpec::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
            GroupSpec::WeilRestriction { r, inner } => write!(f, "Res_{r}({inner})"),
        }
    }
}

/// A connected component of the Dynkin diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub series: Series,
    /// Nodes of `I` in this component, ascending.
    pub nodes: Vec<usize>,
}

impl Component {
    pub fn rank(&self) -> usize {
        self.nodes.len()
    }

    /// Order of the Weyl group of this component.
    pub fn weyl_order(&self) -> u128 {
        let n = self.rank() as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.series {
            Series::A => fact(n + 1),
            Series::B | Series::C => (1u128 << n) * fact(n),
            Series::D => (1u128 << (n - 1)) * fact(n),
            Series::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Series::F => 1152,
            Series::G => 12,
        }
    }
}

/// Based root datum `(X^*, Delta, X_*, Delta^vee)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    components: Vec<Component>,
    builder: GroupSpec,
    blocks: Option<WeilBlocks>,
}

/// Layout of a Weil restriction: `r` copies of an inner datum, block `b`
/// occupying lattice coordinates `b*inner_rank..` and nodes `b*inner_nodes..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilBlocks {
    pub r: usize,
    pub inner_rank: usize,
    pub inner_nodes: usize,
    pub inner: Box<RootDatum>,
}

/// `q` together with the lattice shadow of the Frobenius.
///
/// The Frobenius twist on characters is `chi o phi = q * tau(chi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusStructure {
    q: u64,
    tau: IntMatrix,
    root_perm: Vec<usize>,
}

impl FrobeniusStructure {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    pub fn tau(&self) -> &IntMatrix {
        &self.tau
    }

    /// `pi` with `tau(alpha_i) = alpha_{pi(i)}`.
    pub fn root_perm(&self) -> &[usize] {
        &self.root_perm
    }

    pub fn is_split(&self) -> bool {
        self.tau == IntMatrix::identity(self.tau.rows())
    }

    pub fn order(&self) -> usize {
        self.tau.multiplicative_order(1 << 12).expect("tau has finite order")
    }

    /// Order of the node permutation `pi`.
    pub fn perm_order(&self) -> usize {
        let mut k = 1;
        let n = self.root_perm.len();
        let mut cur: Vec<usize> = self.root_perm.clone();
        while cur.iter().enumerate().any(|(i, &x)| i != x) {
            cur = (0..n).map(|i| self.root_perm[cur[i]]).collect();
            k += 1;
        }
        k
    }

    pub fn permute(&self, set: &NodeSet) -> NodeSet {
        set.iter().map(|&i| self.root_perm[i]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    ContainsB,
    ContainsBminus,
}

/// Standard parabolic type together with the Borel it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicType {
    pub j: NodeSet,
    pub orientation: Orientation,
}

impl ParabolicType {
    pub fn new(j: NodeSet, orientation: Orientation) -> Self {
        Self { j, orientation }
    }

    pub fn minus(j: NodeSet) -> Self {
        Self::new(j, Orientation::ContainsBminus)
    }
}

/// An integral character.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character(pub Vec<BigInt>);

/// A character with rational coordinates (an element of `X^* (x) Q`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalCharacter(pub Vec<BigRational>);

impl RationalCharacter {
    pub fn zero(rank: usize) -> Self {
        Self(vec![BigRational::zero(); rank])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self(xs.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }
}

impl From<&Character> for RationalCharacter {
    fn from(c: &Character) -> Self {
        Self(c.0.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }
}

impl fmt::Display for RationalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A positive root with its expansion in simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRoot {
    pub vector: Vec<i64>,
    pub expansion: Vec<i64>,
}

impl PositiveRoot {
    pub fn height(&self) -> i64 {
        self.expansion.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.expansion.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRoots {
    pub roots: Vec<PositiveRoot>,
    /// Per component (same order as [`RootDatum::components`]): the highest
    /// root's coefficients on that component's nodes.
    pub highest: Vec<Vec<i64>>,
}

impl PositiveRoots {
    /// Number of positive roots supported in `j`.
    pub fn count_in(&self, j: &NodeSet) -> usize {
        self.roots.iter().filter(|r| r.support().all(|i| j.contains(&i))).count()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut x = q;
            while x.is_multiple_of(p) {
                x /= p;
            }
            return x == 1;
        }
        p += 1;
    }
    true
}

/// Cartan matrix `C[i][j] = <alpha_i^vee, alpha_j>` in Bourbaki labeling.
pub fn cartan_matrix(series: Series, n: usize) -> Result<Vec<Vec<i64>>, RootDatumError> {
    let bad = || RootDatumError::InvalidRank { what: format!("series {series}"), rank: n };
    let ok = match series {
        Series::A => n >= 1,
        Series::B | Series::C => n >= 2,
        Series::D => n >= 4,
        Series::E => (6..=8).contains(&n),
        Series::F => n == 4,
        Series::G => n == 2,
    };
    if !ok {
        return Err(bad());
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut edge = |a: usize, b: usize| {
        c[a][b] = -1;
        c[b][a] = -1;
    };
    match series {
        Series::A | Series::B | Series::C | Series::F => {
            for i in 0..n - 1 {
                edge(i, i + 1);
            }
        }
        Series::D => {
            for i in 0..n - 2 {
                edge(i, i + 1);
            }
            edge(n - 3, n - 1);
        }
        Series::E => {
            edge(0, 2);
            edge(1, 3);
            for i in 2..n - 1 {
                edge(i, i + 1);
            }
        }
        Series::G => edge(0, 1),
    }
    match series {
        Series::B => c[n - 1][n - 2] = -2,
        Series::C => c[n - 2][n - 1] = -2,
        Series::F => c[2][1] = -2,
        Series::G => c[0][1] = -3,
        _ => {}
    }
    Ok(c)
}

/// Splits the diagram into connected components and identifies their series.
fn classify_components(cartan: &[Vec<i64>]) -> Result<Vec<Component>, RootDatumError> {
    let n = cartan.len();
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        if cartan[i][i] != 2 {
            return Err(RootDatumError::NotFiniteType(format!("diagonal entry at {i}")));
        }
        for j in 0..n {
            if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                return Err(RootDatumError::NotFiniteType(format!("entry ({i},{j})")));
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut nodes = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            nodes.push(v);
            for w in 0..n {
                if w != v && cartan[v][w] != 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        nodes.sort_unstable();
        let series = identify_series(cartan, &nodes)?;
        out.push(Component { series, nodes });
    }
    Ok(out)
}

fn identify_series(c: &[Vec<i64>], nodes: &[usize]) -> Result<Series, RootDatumError> {
    let n = nodes.len();
    let err = |why: &str| RootDatumError::NotFiniteType(format!("component {nodes:?}: {why}"));
    let mut edges = Vec::new();
    for (a, &u) in nodes.iter().enumerate() {
        for &v in &nodes[a + 1..] {
            let m = c[u][v] * c[v][u];
            if m != 0 {
                edges.push((u, v, m));
            }
        }
    }
    if edges.len() + 1 != n {
        return Err(err("diagram is not a tree"));
    }
    let degree = |x: usize| edges.iter().filter(|&&(u, v, _)| u == x || v == x).count();
    if n == 1 {
        return Ok(Series::A);
    }
    if let Some(&(u, v, m)) = edges.iter().find(|e| e.2 > 1) {
        if edges.iter().filter(|e| e.2 > 1).count() > 1 || nodes.iter().any(|&x| degree(x) > 2) {
            return Err(err("unexpected multiple edges"));
        }
        return match m {
            3 if n == 2 => Ok(Series::G),
            2 if n == 2 => {
                // the later node short => B2, otherwise C2
                let (first, second) = (nodes[0], nodes[1]);
                Ok(if c[second][first] == -2 { Series::B } else { Series::C })
            }
            2 if n == 4 && degree(u) == 2 && degree(v) == 2 => Ok(Series::F),
            2 => {
                let (end, other) = if degree(u) == 1 { (u, v) } else { (v, u) };
                if degree(end) != 1 {
                    return Err(err("double edge not at an end"));
                }
                Ok(if c[end][other] == -2 { Series::B } else { Series::C })
            }
            _ => Err(err("edge multiplicity")),
        };
    }
    let branch: Vec<usize> = nodes.iter().copied().filter(|&x| degree(x) > 2).collect();
    match branch.as_slice() {
        [] => Ok(Series::A),
        [b] if degree(*b) == 3 => {
            let mut arms = Vec::new();
            for &(u, v, _) in edges.iter().filter(|&&(u, v, _)| u == *b || v == *b) {
                let mut prev = *b;
                let mut cur = if u == *b { v } else { u };
                let mut len = 1;
                loop {
                    let next = edges.iter().find_map(|&(x, y, _)| {
                        if x == cur && y != prev {
                            Some(y)
                        } else if y == cur && x != prev {
                            Some(x)
                        } else {
                            None
                        }
                    });
                    match next {
                        Some(nx) => {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        None => break,
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(Series::D),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Ok(Series::E),
                _ => Err(err("not a finite-type branch")),
            }
        }
        _ => Err(err("too many branch nodes")),
    }
}

impl RootDatum {
    fn from_parts(
        rank: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        builder: GroupSpec,
    ) -> Result<Self, RootDatumError> {
        let n = roots.len();
        let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| dot(&coroots[i], &roots[j])).collect()).collect();
        let components = classify_components(&cartan)?;
        Ok(Self { rank, roots, coroots, cartan, components, builder, blocks: None })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `|I|`.
    pub fn node_count(&self) -> usize {
        self.roots.len()
    }

    pub fn all_nodes(&self) -> NodeSet {
        (0..self.node_count()).collect()
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.coroots[i]
    }

    /// Simple roots as rows.
    pub fn simple_roots(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.roots)
    }

    /// Simple coroots as rows.
    pub fn simple_coroots(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.coroots)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn builder(&self) -> &GroupSpec {
        &self.builder
    }

    pub fn weil_blocks(&self) -> Option<&WeilBlocks> {
        self.blocks.as_ref()
    }

    pub fn weyl_order(&self) -> u128 {
        self.components.iter().map(Component::weyl_order).product()
    }

    pub fn check_nodes(&self, j: &NodeSet) -> Result<(), RootDatumError> {
        match j.iter().find(|&&i| i >= self.node_count()) {
            Some(&node) => Err(RootDatumError::NodeOutOfRange { node, count: self.node_count() }),
            None => Ok(()),
        }
    }

    /// `<alpha_i^vee, lambda>` for a rational character.
    pub fn pair_coroot(&self, i: usize, lambda: &RationalCharacter) -> BigRational {
        self.coroots[i]
            .iter()
            .zip(&lambda.0)
            .filter(|(c, _)| **c != 0)
            .fold(BigRational::zero(), |acc, (c, x)| acc + x * BigRational::from_integer((*c).into()))
    }

    /// `<chi, alpha_i>` for a cocharacter.
    pub fn pair_root(&self, chi: &[i64], i: usize) -> i64 {
        dot(chi, &self.roots[i])
    }

    /// Positive roots by closure of the simple roots under simple reflections.
    pub fn positive_roots(&self) -> PositiveRoots {
        let n = self.node_count();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut order: Vec<Vec<i64>> = Vec::new();
        let mut queue: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        for e in &queue {
            seen.insert(e.clone());
        }
        order.extend(queue.iter().cloned());
        while let Some(beta) = queue.pop() {
            for i in 0..n {
                let p: i64 = (0..n).map(|j| self.cartan[i][j] * beta[j]).sum();
                if p == 0 {
                    continue;
                }
                let mut img = beta.clone();
                img[i] -= p;
                if img.iter().all(|&c| c >= 0) && seen.insert(img.clone()) {
                    order.push(img.clone());
                    queue.push(img);
                }
            }
        }
        order.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then(b.cmp(a)));
        let roots: Vec<PositiveRoot> = order
            .into_iter()
            .map(|expansion| {
                let mut vector = vec![0; self.rank];
                for (i, &c) in expansion.iter().enumerate() {
                    for (v, r) in vector.iter_mut().zip(&self.roots[i]) {
                        *v += c * r;
                    }
                }
                PositiveRoot { vector, expansion }
            })
            .collect();
        let highest = self
            .components
            .iter()
            .map(|comp| {
                let best = roots
                    .iter()
                    .filter(|r| r.support().all(|i| comp.nodes.contains(&i)))
                    .max_by_key(|r| r.height())
                    .expect("component has roots");
                comp.nodes.iter().map(|&i| best.expansion[i]).collect()
            })
            .collect();
        PositiveRoots { roots, highest }
    }

    /// `J^opp = { i : alpha_i = -w_0(alpha_j), j in J }`.
    pub fn opp_type(&self, j: &NodeSet) -> NodeSet {
        let inv = self.opposition();
        j.iter().map(|&x| inv[x]).collect()
    }

    /// The permutation `-w_0` of the simple roots.
    pub fn opposition(&self) -> Vec<usize> {
        let n = self.node_count();
        let word = weyl::longest_word(&self.cartan);
        (0..n)
            .map(|j| {
                let mut beta = unit(n, j);
                for &i in &word {
                    let p: i64 = (0..n).map(|k| self.cartan[i][k] * beta[k]).sum();
                    beta[i] -= p;
                }
                let k = beta.iter().position(|&c| c == -1).expect("w0 maps simple to negative simple");
                debug_assert!(beta.iter().enumerate().all(|(i, &c)| c == if i == k { -1 } else { 0 }));
                k
            })
            .collect()
    }

    /// Nodes whose coroots cut out `X^*(P)` inside `X^*`.
    pub fn effective_type(&self, pt: &ParabolicType) -> NodeSet {
        match pt.orientation {
            Orientation::ContainsB => pt.j.clone(),
            Orientation::ContainsBminus => self.opp_type(&pt.j),
        }
    }

    /// Basis (columns) of `{lambda in X^* : <alpha_j^vee, lambda> = 0, j in J_eff}`.
    pub fn char_lattice_of_parabolic(&self, pt: &ParabolicType) -> IntMatrix {
        self.orthogonal_lattice(&self.effective_type(pt))
    }

    /// Saturated basis (columns) of the characters killed by the coroots in `nodes`.
    pub fn orthogonal_lattice(&self, nodes: &NodeSet) -> IntMatrix {
        let rows: Vec<Vec<i64>> = nodes.iter().map(|&j| self.coroots[j].clone()).collect();
        let m = if rows.is_empty() { IntMatrix::zeros(0, self.rank) } else { IntMatrix::from_rows(&rows) };
        integer_kernel(&m)
    }

    /// `X^*(G)`, the characters orthogonal to every coroot.
    pub fn central_characters(&self) -> IntMatrix {
        self.orthogonal_lattice(&self.all_nodes())
    }

    /// Fundamental weights `omega_i`, `i` not in `j`.
    ///
    /// Normalization: `omega_i` lies in the rational span of the simple
    /// roots, i.e. it vanishes on every cocharacter orthogonal to all roots.
    pub fn fundamental_weights(&self, j: &NodeSet) -> Vec<(usize, RationalCharacter)> {
        let n = self.node_count();
        if n == 0 {
            return Vec::new();
        }
        let inv =
            IntMatrix::from_rows(&self.cartan).rational_inverse().expect("finite-type Cartan matrices are invertible");
        (0..n)
            .filter(|i| !j.contains(i))
            .map(|i| {
                let mut w = vec![BigRational::zero(); self.rank];
                for k in 0..n {
                    let c = inv.get(k, i);
                    if c.is_zero() {
                        continue;
                    }
                    for (x, &r) in w.iter_mut().zip(&self.roots[k]) {
                        *x += c * BigRational::from_integer(r.into());
                    }
                }
                (i, RationalCharacter(w))
            })
            .collect()
    }

    /// Invariant factors > 1 of the torsion of `X_* / <coroots>`.
    pub fn picard_torsion(&self) -> Vec<BigInt> {
        self.coroot_torsion(&self.all_nodes())
    }

    /// Torsion of `X_*` modulo the coroots indexed by `nodes`; empty iff the
    /// corresponding derived group is simply connected.
    pub fn coroot_torsion(&self, nodes: &NodeSet) -> Vec<BigInt> {
        if nodes.is_empty() {
            return Vec::new();
        }
        let rows: Vec<Vec<i64>> = nodes.iter().map(|&j| self.coroots[j].clone()).collect();
        IntMatrix::from_rows(&rows).smith_normal_form().torsion()
    }

    /// `dim G = rank + 2 |Phi^+|`.
    pub fn group_dimension(&self) -> usize {
        self.rank + 2 * self.positive_roots().roots.len()
    }
}

/// Builds a root datum together with its Frobenius structure.
pub fn build_group(spec: &GroupSpec, q: u64) -> Result<(RootDatum, FrobeniusStructure), RootDatumError> {
    if !is_prime_power(q) {
        return Err(RootDatumError::InvalidQ(q));
    }
    let (rd, tau, perm) = build_parts(spec)?;
    let frob = FrobeniusStructure { q, tau, root_perm: perm };
    debug_assert!(frobenius_is_compatible(&rd, &frob));
    Ok((rd, frob))
}

fn gl_like(n: usize, spec: GroupSpec) -> Result<RootDatum, RootDatumError> {
    let roots: Vec<Vec<i64>> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            v
        })
        .collect();
    RootDatum::from_parts(n, roots.clone(), roots, spec)
}

type Parts = (RootDatum, IntMatrix, Vec<usize>);

fn build_parts(spec: &GroupSpec) -> Result<Parts, RootDatumError> {
    match spec {
        GroupSpec::Gl { n } => {
            if *n == 0 {
                return Err(RootDatumError::InvalidRank { what: "gl".into(), rank: 0 });
            }
            let rd = gl_like(*n, spec.clone())?;
            let k = rd.node_count();
            Ok((rd, IntMatrix::identity(*n), (0..k).collect()))
        }
        GroupSpec::Unitary { n } => {
            if *n == 0 {
                return Err(RootDatumError::InvalidRank { what: "unitary".into(), rank: 0 });
            }
            let rd = gl_like(*n, spec.clone())?;
            // tau(e_i) = -e_{n+1-i}
            let mut tau = IntMatrix::zeros(*n, *n);
            for i in 0..*n {
                tau.set(n - 1 - i, i, BigInt::from(-1));
            }
            let k = rd.node_count();
            let perm = (0..k).map(|i| k - 1 - i).collect();
            Ok((rd, tau, perm))
        }
        GroupSpec::Gsp { g } => {
            let g = *g;
            if g == 0 {
                return Err(RootDatumError::InvalidRank { what: "gsp".into(), rank: 0 });
            }
            // coordinates e_1..e_g, then the multiplier e_0
            let rank = g + 1;
            let mut roots = Vec::new();
            let mut coroots = Vec::new();
            for i in 0..g - 1 {
                let mut v = vec![0; rank];
                v[i] = 1;
                v[i + 1] = -1;
                roots.push(v.clone());
                coroots.push(v);
            }
            let mut long = vec![0; rank];
            long[g - 1] = 2;
            long[g] = -1;
            roots.push(long);
            coroots.push(unit(rank, g - 1));
            let rd = RootDatum::from_parts(rank, roots, coroots, spec.clone())?;
            Ok((rd, IntMatrix::identity(rank), (0..g).collect()))
        }
        GroupSpec::Simple { series, rank, isogeny } => {
            let c = cartan_matrix(*series, *rank)?;
            let n = *rank;
            let ident: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
            let (roots, coroots) = match isogeny {
                // coroots form the standard basis of X_*; alpha_j has coordinates C[.][j]
                Isogeny::SimplyConnected => ((0..n).map(|j| (0..n).map(|i| c[i][j]).collect()).collect(), ident),
                Isogeny::Adjoint => (ident, c.clone()),
            };
            let rd = RootDatum::from_parts(n, roots, coroots, spec.clone())?;
            Ok((rd, IntMatrix::identity(n), (0..n).collect()))
        }
        GroupSpec::Product { factors } => {
            if factors.is_empty() {
                return Err(RootDatumError::InvalidRank { what: "product".into(), rank: 0 });
            }
            let parts = factors.iter().map(build_parts).collect::<Result<Vec<_>, _>>()?;
            let (rd, tau, perm) = block_sum(&parts, spec.clone(), None)?;
            Ok((rd, tau, perm))
        }
        GroupSpec::WeilRestriction { r, inner } => {
            if *r == 0 {
                return Err(RootDatumError::InvalidRank { what: "weil_restriction".into(), rank: 0 });
            }
            let part = build_parts(inner)?;
            if part.1 != IntMatrix::identity(part.1.rows()) {
                return Err(RootDatumError::UnsupportedSeries(format!(
                    "weil restriction of the non-split group {inner}"
                )));
            }
            let parts = vec![part; *r];
            block_sum(&parts, spec.clone(), Some(*r))
        }
    }
}

/// Direct sum of factors. With `shift = Some(r)` tau sends block `b` to
/// block `b - 1` (mod `r`) instead of acting blockwise.
fn block_sum(parts: &[Parts], spec: GroupSpec, shift: Option<usize>) -> Result<Parts, RootDatumError> {
    let rank: usize = parts.iter().map(|p| p.0.rank).sum();
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    let mut tau = IntMatrix::zeros(rank, rank);
    let mut perm = Vec::new();
    let mut offsets = Vec::new();
    let (mut off, mut node_off) = (0, 0);
    for (rd, _, _) in parts {
        offsets.push((off, node_off));
        off += rd.rank;
        node_off += rd.node_count();
    }
    let r = parts.len();
    for (b, (rd, t, p)) in parts.iter().enumerate() {
        let (o, no) = offsets[b];
        let pad = |v: &Vec<i64>| {
            let mut w = vec![0; rank];
            w[o..o + rd.rank].copy_from_slice(v);
            w
        };
        roots.extend(rd.roots.iter().map(pad));
        coroots.extend(rd.coroots.iter().map(pad));
        match shift {
            None => {
                for i in 0..rd.rank {
                    for k in 0..rd.rank {
                        tau.set(o + i, o + k, t.get(i, k).clone());
                    }
                }
                perm.extend(p.iter().map(|&x| x + no));
            }
            Some(_) => {
                let (to, tno) = offsets[(b + r - 1) % r];
                for i in 0..rd.rank {
                    tau.set(to + i, o + i, BigInt::one());
                }
                perm.extend((0..rd.node_count()).map(|x| x + tno));
            }
        }
    }
    let mut rd = RootDatum::from_parts(rank, roots, coroots, spec)?;
    if let Some(r) = shift {
        let inner = parts[0].0.clone();
        rd.blocks =
            Some(WeilBlocks { r, inner_rank: inner.rank, inner_nodes: inner.node_count(), inner: Box::new(inner) });
    }
    Ok((rd, tau, perm))
}

/// Checks that `tau` permutes the simple roots by `pi`, that its
/// contragredient permutes the simple coroots the same way, and that it has
/// finite order.
pub fn frobenius_is_compatible(rd: &RootDatum, frob: &FrobeniusStructure) -> bool {
    let tau = frob.tau();
    let Ok(inv) = tau.rational_inverse() else { return false };
    let n = rd.node_count();
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let roots_ok = (0..n).all(|i| tau.apply(&big(rd.simple_root(i))) == big(rd.simple_root(frob.root_perm[i])));
    // contragredient: alpha^vee -> alpha^vee o tau^{-1}, as a row vector
    let coroots_ok = (0..n).all(|i| {
        let row: Vec<BigRational> = (0..rd.rank)
            .map(|c| {
                (0..rd.rank).fold(BigRational::zero(), |acc, k| {
                    acc + BigRational::from_integer(rd.simple_coroot(i)[k].into()) * inv.get(k, c)
                })
            })
            .collect();
        row.iter().zip(rd.simple_coroot(frob.root_perm[i])).all(|(a, &b)| *a == BigRational::from_integer(b.into()))
    });
    let finite = tau.multiplicative_order(1 << 12).is_some();
    roots_ok && coroots_ok && finite
}
