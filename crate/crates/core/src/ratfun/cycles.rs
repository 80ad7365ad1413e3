//! Determinants as signed sums over spanning cycle families.
//!
//! A square matrix `M` of order `p` is read as a weighted digraph on
//! `{1, .., p}` with an arc `(k, l)` of weight `M[l][k]` whenever that entry
//! is nonzero; diagonal entries become self-loops. A spanning cycle family
//! picks, for every vertex, exactly one outgoing arc so that the chosen arcs
//! form vertex-disjoint cycles, i.e. it is a permutation `σ` with
//! `M[σ(k)][k] ≠ 0` for all `k`. Since `sgn σ = (-1)^(p - N_F)`,
//!
//! ```text
//! det M = (-1)^p · Σ_F (-1)^{N_F} w(F)
//! ```

use std::collections::BTreeMap;

use super::function::RationalFunction;
use super::matrix::RatMatrix;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Weighted digraph on `{1, .., p}`; self-loops allowed, weights nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    p: usize,
    arcs: BTreeMap<(usize, usize), RationalFunction>,
    out: Vec<Vec<usize>>,
}

impl WeightedDigraph {
    pub fn new(
        p: usize,
        arcs: impl IntoIterator<Item = ((usize, usize), RationalFunction)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((k, l), w) in arcs {
            if k == 0 || l == 0 || k > p || l > p {
                return Err(Error::Invariant(format!("arc ({k},{l}) outside 1..={p}")));
            }
            if w.is_zero() {
                return Err(Error::Invariant(format!("arc ({k},{l}) has zero weight")));
            }
            if map.insert((k, l), w).is_some() {
                return Err(Error::Invariant(format!("duplicate arc ({k},{l})")));
            }
        }
        let mut out = vec![Vec::new(); p + 1];
        for &(k, l) in map.keys() {
            out[k].push(l);
        }
        Ok(WeightedDigraph { p, arcs: map, out })
    }

    pub fn from_matrix(m: &RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Precondition(
                "cycle-family graph needs a square matrix".into(),
            ));
        }
        let arcs = m
            .entries()
            .filter(|(_, w)| !w.is_zero())
            .map(|((l, k), w)| ((k + 1, l + 1), w.clone()));
        WeightedDigraph::new(m.rows(), arcs)
    }

    pub fn to_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.p, self.p);
        for (&(k, l), w) in &self.arcs {
            m[(l - 1, k - 1)] = w.clone();
        }
        m
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn weight(&self, k: usize, l: usize) -> Option<&RationalFunction> {
        self.arcs.get(&(k, l))
    }

    /// Every spanning cycle family, each as a list of cycles (vertex
    /// sequences starting at their smallest vertex).
    pub fn spanning_cycle_families(&self, max_exact_n: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        self.check_size(max_exact_n)?;
        let mut out = Vec::new();
        self.walk_families(&mut vec![false; self.p + 1], &mut Vec::new(), &mut |fam| {
            out.push(fam.to_vec())
        });
        Ok(out)
    }

    /// `Σ_F (-1)^{N_F} w(F)` over all spanning cycle families.
    ///
    /// Every family uses exactly one arc leaving each vertex, so scaling the
    /// arcs out of `k` by the lcm `L_k` of their denominators turns every
    /// family weight into a polynomial. The sum is taken over polynomials
    /// and divided by `Π L_k` once at the end.
    pub fn signed_family_sum(&self, max_exact_n: usize) -> Result<RationalFunction> {
        self.check_size(max_exact_n)?;
        let mut lcms = vec![Polynomial::one(); self.p + 1];
        for (&(k, _), w) in &self.arcs {
            lcms[k] = Polynomial::lcm(&lcms[k], w.den());
        }
        let scaled: BTreeMap<(usize, usize), Polynomial> = self
            .arcs
            .iter()
            .map(|(&(k, l), w)| ((k, l), w.num() * &lcms[k].exact_div(w.den())))
            .collect();
        let mut sum = Polynomial::zero();
        self.walk_families(&mut vec![false; self.p + 1], &mut Vec::new(), &mut |fam| {
            let w = fam.iter().fold(Polynomial::one(), |acc, c| {
                let n = c.len();
                (0..n).fold(acc, |acc, k| &acc * &scaled[&(c[k], c[(k + 1) % n])])
            });
            sum = if fam.len() % 2 == 0 {
                &sum + &w
            } else {
                &sum - &w
            };
        });
        let den = lcms[1..].iter().fold(Polynomial::one(), |acc, l| &acc * l);
        RationalFunction::new(sum, den)
    }

    fn check_size(&self, max_exact_n: usize) -> Result<()> {
        if self.p > max_exact_n {
            Err(Error::SizeLimit {
                size: self.p,
                limit: max_exact_n,
            })
        } else {
            Ok(())
        }
    }

    fn walk_families(
        &self,
        covered: &mut Vec<bool>,
        family: &mut Vec<Vec<usize>>,
        emit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let Some(start) = (1..=self.p).find(|&v| !covered[v]) else {
            emit(family);
            return;
        };
        covered[start] = true;
        let mut cycle = vec![start];
        self.walk_cycle(start, covered, &mut cycle, family, emit);
        covered[start] = false;
    }

    /// Extends the open cycle at its last vertex; closes it whenever an arc
    /// back to `start` exists.
    fn walk_cycle(
        &self,
        start: usize,
        covered: &mut Vec<bool>,
        cycle: &mut Vec<usize>,
        family: &mut Vec<Vec<usize>>,
        emit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let u = *cycle.last().expect("cycle has a vertex");
        for &w in &self.out[u] {
            if w == start {
                family.push(cycle.clone());
                self.walk_families(covered, family, emit);
                family.pop();
            } else if !covered[w] {
                covered[w] = true;
                cycle.push(w);
                self.walk_cycle(start, covered, cycle, family, emit);
                cycle.pop();
                covered[w] = false;
            }
        }
    }
}

/// Determinant of the matrix encoded by `w`, from its spanning cycle
/// families with the global sign `(-1)^p` applied.
pub fn det_via_cycle_families(w: &WeightedDigraph, max_exact_n: usize) -> Result<RationalFunction> {
    let sum = w.signed_family_sum(max_exact_n)?;
    Ok(if w.order().is_multiple_of(2) {
        sum
    } else {
        -sum
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::DEFAULT_MAX_EXACT_N;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn diagonal_has_one_family() {
        let d: Vec<RationalFunction> = ["1/z", "z+1", "3", "1/(z-2)"]
            .iter()
            .map(|s| rf(s))
            .collect();
        let w = WeightedDigraph::new(
            4,
            d.iter()
                .enumerate()
                .map(|(k, f)| ((k + 1, k + 1), f.clone())),
        )
        .unwrap();
        let fams = w.spanning_cycle_families(DEFAULT_MAX_EXACT_N).unwrap();
        assert_eq!(fams, vec![vec![vec![1], vec![2], vec![3], vec![4]]]);
        let prod = d.iter().fold(RationalFunction::one(), |a, f| &a * f);
        assert_eq!(
            det_via_cycle_families(&w, DEFAULT_MAX_EXACT_N).unwrap(),
            prod
        );
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = RatMatrix::from_rows(vec![vec![rf("1/z"), rf("2")], vec![rf("z"), rf("1/(z+1)")]])
            .unwrap();
        let w = WeightedDigraph::from_matrix(&m).unwrap();
        assert_eq!(w.weight(2, 1), Some(&rf("2")));
        let expect = &(&rf("1/z") * &rf("1/(z+1)")) - &(&rf("2") * &rf("z"));
        assert_eq!(
            det_via_cycle_families(&w, DEFAULT_MAX_EXACT_N).unwrap(),
            expect
        );
        assert_eq!(w.to_matrix(), m);
    }

    #[test]
    fn no_family_means_zero() {
        let w = WeightedDigraph::new(3, [((1, 2), rf("1")), ((2, 3), rf("1"))]).unwrap();
        assert!(w.spanning_cycle_families(8).unwrap().is_empty());
        assert!(det_via_cycle_families(&w, 8).unwrap().is_zero());
    }

    #[test]
    fn three_cycle_counts_once() {
        let w = WeightedDigraph::new(3, [((1, 2), rf("1")), ((2, 3), rf("1")), ((3, 1), rf("1"))])
            .unwrap();
        assert_eq!(
            w.spanning_cycle_families(8).unwrap(),
            vec![vec![vec![1, 2, 3]]]
        );
        // even permutation
        assert_eq!(
            det_via_cycle_families(&w, 8).unwrap(),
            RationalFunction::one()
        );
    }

    #[test]
    fn size_limit_and_validation() {
        let w = WeightedDigraph::new(5, []).unwrap();
        assert_eq!(
            det_via_cycle_families(&w, 4),
            Err(Error::SizeLimit { size: 5, limit: 4 })
        );
        assert!(WeightedDigraph::new(2, [((1, 2), RationalFunction::zero())]).is_err());
        assert!(WeightedDigraph::new(2, [((1, 3), rf("1"))]).is_err());
    }
}
