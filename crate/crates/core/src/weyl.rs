//! Finite Weyl groups acting on `X^*`.
//!
//! Conventions: `^J W` denotes the minimal-length representatives of the
//! cosets `W_J w` (left quotient), i.e. those `w` with `l(s w) > l(w)` for
//! every `s` in `J`.

use std::collections::HashMap;

use thiserror::Error;

use crate::root_datum::{NodeSet, RootDatum};

pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("Weyl group of order {order} exceeds the enumeration cap {cap}")]
    WeylGroupTooLarge { order: u128, cap: u128 },
}

/// A reduced word for the longest element of `W_J`.
///
/// Found by walking `rho_J` to `-rho_J` with simple reflections. The
/// element is an involution, so the word may be read in either direction.
pub fn longest_word_in(cartan: &[Vec<i64>], j: &NodeSet) -> Vec<usize> {
    let nodes: Vec<usize> = j.iter().copied().collect();
    // a[k] = <alpha_{nodes[k]}^vee, v>, starting from v = rho_J
    let mut a = vec![1i64; nodes.len()];
    let mut word = Vec::new();
    while let Some(k) = a.iter().position(|&x| x > 0) {
        let ak = a[k];
        for (m, am) in a.iter_mut().enumerate() {
            *am -= ak * cartan[nodes[m]][nodes[k]];
        }
        word.push(nodes[k]);
    }
    word
}

/// A reduced word for `w_0`.
pub fn longest_word(cartan: &[Vec<i64>]) -> Vec<usize> {
    longest_word_in(cartan, &(0..cartan.len()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    /// Row-major `rank x rank` matrix acting on column vectors of `X^*`.
    pub matrix: Vec<i64>,
    pub word: Vec<usize>,
    pub length: usize,
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    generators: Vec<Vec<i64>>,
    elements: Vec<Element>,
    index: HashMap<Vec<i64>, usize>,
    w0: usize,
    cartan: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetReps {
    pub j: NodeSet,
    /// `(element index, length)`, sorted by length then word.
    pub reps: Vec<(usize, usize)>,
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

fn identity(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// Breadth-first enumeration of `W`, refusing groups larger than `cap`.
pub fn enumerate_weyl(rd: &RootDatum, cap: u128) -> Result<WeylGroup, WeylError> {
    let order = rd.weyl_order();
    if order > cap {
        return Err(WeylError::WeylGroupTooLarge { order, cap });
    }
    let n = rd.rank();
    let generators: Vec<Vec<i64>> = (0..rd.node_count())
        .map(|i| {
            // s_i = 1 - alpha_i (alpha_i^vee)^T
            let (a, c) = (rd.simple_root(i), rd.simple_coroot(i));
            let mut m = identity(n);
            for r in 0..n {
                for k in 0..n {
                    m[r * n + k] -= a[r] * c[k];
                }
            }
            m
        })
        .collect();
    let mut elements = vec![Element { matrix: identity(n), word: Vec::new(), length: 0 }];
    let mut index = HashMap::new();
    index.insert(identity(n), 0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &e in &frontier {
            for (i, g) in generators.iter().enumerate() {
                let m = mat_mul(n, &elements[e].matrix, g);
                if index.contains_key(&m) {
                    continue;
                }
                let mut word = elements[e].word.clone();
                word.push(i);
                let length = elements[e].length + 1;
                index.insert(m.clone(), elements.len());
                next.push(elements.len());
                elements.push(Element { matrix: m, word, length });
            }
        }
        frontier = next;
    }
    debug_assert_eq!(elements.len() as u128, order);
    let w0 = elements.len() - 1;
    Ok(WeylGroup { rank: n, generators, elements, index, w0, cartan: rd.cartan().to_vec() })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.elements[i].length
    }

    pub fn generator(&self, i: usize) -> &[i64] {
        &self.generators[i]
    }

    pub fn node_count(&self) -> usize {
        self.generators.len()
    }

    pub fn w0(&self) -> usize {
        self.w0
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let m = mat_mul(self.rank, &self.elements[a].matrix, &self.elements[b].matrix);
        self.index[&m]
    }

    /// Index of the simple reflection `s_i`.
    pub fn simple(&self, i: usize) -> usize {
        self.index[&self.generators[i]]
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        let m = word.iter().fold(identity(self.rank), |acc, &i| mat_mul(self.rank, &acc, &self.generators[i]));
        self.index[&m]
    }

    /// Applies `w` to a vector of `X^*`.
    pub fn apply(&self, w: usize, v: &[i64]) -> Vec<i64> {
        let n = self.rank;
        let m = &self.elements[w].matrix;
        (0..n).map(|r| (0..n).map(|k| m[r * n + k] * v[k]).sum()).collect()
    }

    /// Longest element of the parabolic subgroup `W_J`.
    pub fn longest_element(&self, j: &NodeSet) -> usize {
        self.from_word(&longest_word_in(&self.cartan, j))
    }

    /// `^J W`, sorted by length and then lexicographically by word.
    pub fn min_coset_reps(&self, j: &NodeSet) -> CosetReps {
        let simples: Vec<usize> = j.iter().map(|&s| self.simple(s)).collect();
        let mut reps: Vec<(usize, usize)> = (0..self.order())
            .filter(|&w| simples.iter().all(|&s| self.length(self.multiply(s, w)) > self.length(w)))
            .map(|w| (w, self.length(w)))
            .collect();
        reps.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| self.elements[a.0].word.cmp(&self.elements[b.0].word)));
        CosetReps { j: j.clone(), reps }
    }

    /// `eta = w_{0,J} w_0`, the longest element of `^J W`.
    pub fn eta(&self, j: &NodeSet) -> usize {
        self.multiply(self.longest_element(j), self.w0)
    }

    /// The codimension-one representatives, one per `s` in `I \ J`:
    /// `s -> w_{0,J} s w_0 = eta * s'` with `s'` the `-w_0`-image of `s`.
    pub fn codim1_reps(&self, j: &NodeSet) -> Vec<(usize, usize)> {
        let w0j = self.longest_element(j);
        (0..self.node_count())
            .filter(|s| !j.contains(s))
            .map(|s| (s, self.multiply(self.multiply(w0j, self.simple(s)), self.w0)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_group, GroupSpec, Isogeny, Series};

    fn group(series: Series, rank: usize) -> WeylGroup {
        let (rd, _) = build_group(&GroupSpec::Simple { series, rank, isogeny: Isogeny::Adjoint }, 2).unwrap();
        enumerate_weyl(&rd, DEFAULT_CAP).unwrap()
    }

    fn nodes(xs: &[usize]) -> NodeSet {
        xs.iter().map(|x| x - 1).collect()
    }

    #[test]
    fn orders() {
        assert_eq!(group(Series::A, 3).order(), 24);
        assert_eq!(group(Series::B, 3).order(), 48);
        assert_eq!(group(Series::G, 2).order(), 12);
        assert_eq!(group(Series::D, 4).order(), 192);
        assert_eq!(group(Series::F, 4).order(), 1152);
    }

    #[test]
    fn a1_longest_is_the_reflection() {
        let w = group(Series::A, 1);
        assert_eq!(w.order(), 2);
        assert_eq!(w.w0(), w.simple(0));
    }

    #[test]
    fn longest_elements() {
        let w = group(Series::A, 2);
        assert_eq!(w.longest_element(&NodeSet::new()), w.identity());
        let full = w.longest_element(&nodes(&[1, 2]));
        assert_eq!(full, w.w0());
        assert_eq!(w.length(full), 3);
        assert_eq!(w.multiply(full, full), w.identity());
        assert_eq!(w.longest_element(&nodes(&[1])), w.simple(0));
    }

    #[test]
    fn coset_rep_counts() {
        let a2 = group(Series::A, 2);
        let reps = a2.min_coset_reps(&nodes(&[1]));
        assert_eq!(reps.reps.iter().map(|r| r.1).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(reps.reps.last().unwrap().0, a2.eta(&nodes(&[1])));
        assert_eq!(a2.min_coset_reps(&NodeSet::new()).reps.len(), 6);
        assert_eq!(group(Series::A, 3).min_coset_reps(&nodes(&[1, 2])).reps.len(), 4);
    }

    #[test]
    fn too_large_is_refused() {
        let (rd, _) =
            build_group(&GroupSpec::Simple { series: Series::E, rank: 8, isogeny: Isogeny::Adjoint }, 2).unwrap();
        assert_eq!(
            enumerate_weyl(&rd, DEFAULT_CAP).unwrap_err(),
            WeylError::WeylGroupTooLarge { order: 696_729_600, cap: DEFAULT_CAP }
        );
    }

    #[test]
    fn length_counts_inverted_positive_roots() {
        let (rd, _) =
            build_group(&GroupSpec::Simple { series: Series::B, rank: 3, isogeny: Isogeny::SimplyConnected }, 2)
                .unwrap();
        let w = enumerate_weyl(&rd, DEFAULT_CAP).unwrap();
        let roots = rd.positive_roots();
        for (k, e) in w.elements().iter().enumerate() {
            let inverted = roots
                .roots
                .iter()
                .filter(|r| {
                    let img = w.apply(k, &r.vector);
                    // negative iff the expansion of the image has negative coefficients;
                    // membership in -Phi^+ is checked by lookup
                    roots.roots.iter().any(|p| p.vector.iter().zip(&img).all(|(a, b)| *a == -b))
                })
                .count();
            assert_eq!(inverted, e.length);
        }
    }

    #[test]
    fn coset_and_codim1_properties() {
        for (s, n) in [(Series::A, 3), (Series::B, 3), (Series::G, 2), (Series::C, 2)] {
            let w = group(s, n);
            for mask in 0u32..(1 << n) {
                let j: NodeSet = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let reps = w.min_coset_reps(&j);
                let wj = w.elements().iter().filter(|e| e.word.iter().all(|x| j.contains(x))).count();
                assert_eq!(reps.reps.len() * wj, w.order());
                for &(r, l) in &reps.reps {
                    for &sj in &j {
                        assert_eq!(w.length(w.multiply(w.simple(sj), r)), l + 1);
                    }
                }
                let eta = w.eta(&j);
                let le = w.length(eta);
                assert_eq!(le, w.length(w.w0()) - w.length(w.longest_element(&j)));
                assert_eq!(reps.reps.last().unwrap().1, le);
                let mut below: Vec<usize> = reps.reps.iter().filter(|r| r.1 + 1 == le).map(|r| r.0).collect();
                let mut codim1: Vec<usize> = w.codim1_reps(&j).into_iter().map(|x| x.1).collect();
                below.sort_unstable();
                codim1.sort_unstable();
                assert_eq!(below, codim1);
                assert_eq!(codim1.len(), n - j.len());
            }
            for k in 0..w.order() {
                assert_eq!(w.length(w.multiply(w.multiply(w.w0(), k), w.w0())), w.length(k));
            }
        }
    }
}
