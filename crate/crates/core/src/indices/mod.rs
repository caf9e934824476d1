//! Banzhaf index and Shapley value.
//!
//! Exact solvers enumerate all 2ⁿ coalitions once and count, for every agent
//! and coalition size, the coalitions in which the agent is critical:
//!
//! * Banzhaf: `β_i = #{C ∋ i : i critical in C} / 2ⁿ⁻¹`
//! * Shapley: `φ_i = Σ_{C ∋ i, i critical} (|C|−1)!(n−|C|)! / n!`
//!
//! The Shapley sum is the permutation average regrouped by the set of
//! predecessors: a coalition `C ∋ i` is "`i` plus everyone before `i`" in
//! exactly `(|C|−1)!(n−|C|)!` of the `n!` orderings. Both are computed in
//! exact rational arithmetic.

mod montecarlo;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::domain::ConnectivityDomain;
use crate::enumerate::{Limits, ValueTable};
use crate::error::Result;
use crate::number::Number;

pub use montecarlo::{banzhaf_mc, banzhaf_mc_all, shapley_mc, shapley_mc_all, ApproxParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Banzhaf,
    Shapley,
}

impl IndexKind {
    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Banzhaf => "banzhaf",
            IndexKind::Shapley => "shapley",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactEnumeration,
    TreeClosedForm,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ExactEnumeration => "exact_enumeration",
            Method::TreeClosedForm => "tree_closed_form",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Per-agent index values. Exact methods hold rationals, Monte Carlo holds
/// floats together with its sample count and seed.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexVector {
    pub kind: IndexKind,
    pub method: Method,
    pub values: Vec<Number>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl IndexVector {
    pub(crate) fn exact(kind: IndexKind, method: Method, values: Vec<BigRational>) -> Self {
        IndexVector {
            kind,
            method,
            values: values.into_iter().map(Number::Exact).collect(),
            samples: None,
            seed: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The rational values, if every value is exact.
    pub fn exact_values(&self) -> Option<Vec<BigRational>> {
        self.values.iter().map(|v| v.as_exact().cloned()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Number::to_f64).collect()
    }

    pub fn to_string_list(&self) -> Vec<String> {
        self.values.iter().map(Number::to_string).collect()
    }

    /// Agents by decreasing value; ties keep agent order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| compare(&self.values[b], &self.values[a]).then(a.cmp(&b)));
        order
    }
}

fn compare(a: &Number, b: &Number) -> Ordering {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) => x.cmp(y),
        _ => a.to_f64().total_cmp(&b.to_f64()),
    }
}

pub fn banzhaf_exact(domain: &ConnectivityDomain) -> Result<IndexVector> {
    banzhaf_exact_with(domain, &Limits::default())
}

pub fn banzhaf_exact_with(domain: &ConnectivityDomain, limits: &Limits) -> Result<IndexVector> {
    let n = domain.agent_count();
    limits.check_exact(n)?;
    if n == 0 {
        return Ok(IndexVector::exact(
            IndexKind::Banzhaf,
            Method::ExactEnumeration,
            vec![],
        ));
    }
    let counts = ValueTable::build(domain).critical_counts();
    let denom = BigInt::one() << (n - 1);
    let values = counts
        .iter()
        .map(|by_size| BigRational::new(BigInt::from(by_size.iter().sum::<u64>()), denom.clone()))
        .collect();
    Ok(IndexVector::exact(
        IndexKind::Banzhaf,
        Method::ExactEnumeration,
        values,
    ))
}

pub fn shapley_exact(domain: &ConnectivityDomain) -> Result<IndexVector> {
    shapley_exact_with(domain, &Limits::default())
}

pub fn shapley_exact_with(domain: &ConnectivityDomain, limits: &Limits) -> Result<IndexVector> {
    let n = domain.agent_count();
    limits.check_exact(n)?;
    if n == 0 {
        return Ok(IndexVector::exact(
            IndexKind::Shapley,
            Method::ExactEnumeration,
            vec![],
        ));
    }
    let counts = ValueTable::build(domain).critical_counts();
    let factorial: Vec<BigInt> = std::iter::once(BigInt::one())
        .chain((1..=n).scan(BigInt::one(), |f, k| {
            *f *= k;
            Some(f.clone())
        }))
        .collect();
    // weight of a coalition of size s containing the agent
    let weight: Vec<BigInt> = (0..=n)
        .map(|s| {
            if s == 0 {
                BigInt::zero()
            } else {
                &factorial[s - 1] * &factorial[n - s]
            }
        })
        .collect();
    let values = counts
        .iter()
        .map(|by_size| {
            let numer = by_size
                .iter()
                .zip(&weight)
                .fold(BigInt::zero(), |acc, (&c, w)| acc + w * c);
            BigRational::new(numer, factorial[n].clone())
        })
        .collect();
    Ok(IndexVector::exact(
        IndexKind::Shapley,
        Method::ExactEnumeration,
        values,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::{Coalition, Everyone};
    use crate::domain::fixtures::*;
    use crate::number::ratio;
    use crate::oracle;
    use crate::reductions;
    use proptest::prelude::*;

    fn exact(v: &IndexVector) -> Vec<BigRational> {
        v.exact_values().unwrap()
    }

    #[test]
    fn banzhaf_small_cases() {
        assert_eq!(exact(&banzhaf_exact(&path3()).unwrap()), vec![ratio(1, 1)]);
        assert_eq!(
            exact(&banzhaf_exact(&cycle4()).unwrap()),
            vec![ratio(1, 2); 2]
        );
    }

    #[test]
    fn banzhaf_fig1_target() {
        let (domain, target) =
            reductions::setcover_to_cg(&reductions::SetCoverInstance::four_set_example());
        let beta = exact(&banzhaf_exact(&domain).unwrap());
        assert_eq!(beta[target], ratio(1, 4));
    }

    #[test]
    fn shapley_small_cases() {
        assert_eq!(
            exact(&shapley_exact(&path4()).unwrap()),
            vec![ratio(1, 2); 2]
        );
        assert_eq!(
            exact(&shapley_exact(&cycle4()).unwrap()),
            vec![ratio(1, 2); 2]
        );
        let with_dummy = reductions::add_dummy(&cycle4());
        let phi = exact(&shapley_exact(&with_dummy).unwrap());
        assert_eq!(phi[2], ratio(0, 1));
    }

    #[test]
    fn cap_is_enforced() {
        let limits = Limits {
            exact_agents: 1,
            lp_agents: 1,
        };
        let err = banzhaf_exact_with(&cycle4(), &limits).unwrap_err();
        assert!(err.to_string().contains("too large for exact solver"));
        assert!(err.to_string().contains("cap of 1"));
        assert!(shapley_exact_with(&cycle4(), &limits).is_err());
    }

    #[test]
    fn ranking_is_descending() {
        let d = reductions::add_dummy(&path3());
        let b = banzhaf_exact(&d).unwrap();
        assert_eq!(b.ranking(), vec![0, 1]);
        let v = IndexVector {
            kind: IndexKind::Banzhaf,
            method: Method::MonteCarlo,
            values: vec![Number::Float(0.1), Number::Float(0.7), Number::Float(0.7)],
            samples: Some(10),
            seed: Some(1),
        };
        assert_eq!(v.ranking(), vec![1, 2, 0]);
    }

    #[test]
    fn shapley_matches_permutation_enumeration() {
        for seed in 0..60 {
            let d = oracle::random_domain(seed, 11, 8);
            assert_eq!(
                exact(&shapley_exact(&d).unwrap()),
                oracle::shapley_permutations(&d),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn banzhaf_matches_definition() {
        for seed in 0..60 {
            let d = oracle::random_domain(seed, 14, 10);
            assert_eq!(
                exact(&banzhaf_exact(&d).unwrap()),
                oracle::banzhaf(&d),
                "seed {seed}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn efficiency_and_range(seed in any::<u64>()) {
            let d = oracle::random_domain(seed, 12, 9);
            let phi = exact(&shapley_exact(&d).unwrap());
            let total: BigRational = phi.iter().sum();
            let grand = BigRational::from_integer(d.coalition_value(&Everyone).into());
            // Efficiency holds against v(I) - v(∅); v(∅) = 0 unless every coalition wins.
            let empty = BigRational::from_integer(d.coalition_value(&Coalition::empty()).into());
            prop_assert_eq!(total, grand - empty);
            let beta = exact(&banzhaf_exact(&d).unwrap());
            for x in phi.iter().chain(&beta) {
                prop_assert!(*x >= BigRational::zero() && *x <= BigRational::one());
            }
        }

        #[test]
        fn isolated_agents_get_zero(seed in any::<u64>()) {
            let d = reductions::add_dummy(&oracle::random_domain(seed, 10, 7));
            let last = d.agent_count() - 1;
            prop_assert!(exact(&banzhaf_exact(&d).unwrap())[last].is_zero());
            prop_assert!(exact(&shapley_exact(&d).unwrap())[last].is_zero());
        }
    }
}
