//! The least core: the smallest ε for which the ε-core is nonempty.
//!
//! ```text
//!   min ε  s.t.  p(C) + ε ≥ 1   for every minimal winning coalition C
//!                Σ p_i = 1,  p ≥ 0,  ε ≥ 0
//! ```
//!
//! With p ≥ 0 the constraints of non-minimal winning coalitions are implied
//! and losing coalitions impose nothing beyond ε ≥ 0. The solver works on
//! the dual, which has one row per agent plus one for ε and a feasible slack
//! basis:
//!
//! ```text
//!   max Σ y_C − w  s.t.  Σ_{C ∋ i} y_C − w ≤ 0  (each agent i),  Σ y_C ≤ 1
//! ```
//!
//! The optimal duals of the agent rows are the payoffs and the dual of the
//! last row is ε. `w ≥ 0` stands in for the free multiplier of Σ p_i = 1,
//! which relaxes that equation to Σ p_i ≤ 1; any shortfall is spread equally,
//! which only raises p(C).

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{refuse_degenerate, simplex, Imputation};
use crate::coalition::Coalition;
use crate::domain::ConnectivityDomain;
use crate::enumerate::{Limits, ValueTable};
use crate::error::{Error, Result};
use crate::number::Number;

/// Games with at most this many agents are solved in exact arithmetic.
pub const EXACT_LP_AGENTS: usize = 12;

const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpMethod {
    ExactRational,
    FloatingPoint,
}

impl LpMethod {
    pub fn name(self) -> &'static str {
        match self {
            LpMethod::ExactRational => "lp_exact_rational",
            LpMethod::FloatingPoint => "lp_floating_point",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeastCore {
    /// ε_min; exact for small games.
    pub value: Number,
    /// An imputation in the ε_min-core.
    pub imputation: Imputation,
    pub method: LpMethod,
}

pub fn least_core_value(domain: &ConnectivityDomain) -> Result<LeastCore> {
    least_core_value_with(domain, &Limits::default())
}

pub fn least_core_value_with(domain: &ConnectivityDomain, limits: &Limits) -> Result<LeastCore> {
    refuse_degenerate(domain)?;
    let n = domain.agent_count();
    limits.check_lp(n)?;
    let minimal = ValueTable::build(domain).minimal_winning();
    if n <= EXACT_LP_AGENTS {
        let zero = BigRational::zero();
        let (value, payoffs) = solve(n, &minimal, zero)?;
        Ok(LeastCore {
            value: Number::Exact(value),
            imputation: Imputation::new(payoffs),
            method: LpMethod::ExactRational,
        })
    } else {
        let (value, payoffs) = solve(n, &minimal, FLOAT_TOLERANCE)?;
        let clean = |x: f64| if x.abs() < 1e-10 { 0.0 } else { x };
        let payoffs: Vec<f64> = payoffs.into_iter().map(clean).collect();
        Ok(LeastCore {
            value: Number::Float(clean(value)),
            imputation: Imputation::from_f64(&payoffs)?,
            method: LpMethod::FloatingPoint,
        })
    }
}

fn solve<T>(agents: usize, minimal: &[Coalition], tol: T) -> Result<(T, Vec<T>)>
where
    T: num_traits::Num + num_traits::Signed + Clone + PartialOrd + num_traits::FromPrimitive,
{
    let indicator = |yes: bool| if yes { T::one() } else { T::zero() };
    // columns: y_C for each minimal winning coalition, then w
    let mut costs: Vec<T> = minimal.iter().map(|_| T::one()).collect();
    costs.push(-T::one());
    let mut rows: Vec<Vec<T>> = (0..agents)
        .map(|i| {
            let mut row: Vec<T> = minimal
                .iter()
                .map(|c| indicator(c.iter().any(|a| a == i)))
                .collect();
            row.push(-T::one());
            row
        })
        .collect();
    let mut epsilon_row: Vec<T> = minimal.iter().map(|_| T::one()).collect();
    epsilon_row.push(T::zero());
    rows.push(epsilon_row);
    let mut rhs = vec![T::zero(); agents];
    rhs.push(T::one());

    let solution = simplex::maximize(&costs, &rows, &rhs, &tol)
        .ok_or_else(|| Error::InvalidParameter("least-core program is unbounded".into()))?;
    let mut duals = solution.duals;
    let epsilon = duals.pop().expect("epsilon row");
    let total = duals.iter().fold(T::zero(), |acc, p| acc + p.clone());
    let share = (T::one() - total) / T::from_usize(agents.max(1)).expect("agent count");
    let payoffs = duals.into_iter().map(|p| p + share.clone()).collect();
    debug_assert!((solution.objective - epsilon.clone()).abs() <= tol.clone() + tol);
    Ok((epsilon, payoffs))
}

impl LeastCore {
    /// ε_min as a float, whichever arithmetic produced it.
    pub fn value_f64(&self) -> f64 {
        match &self.value {
            Number::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Float(x) => *x,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::fixtures::*;
    use crate::number::{ratio, tolerance};
    use crate::oracle;
    use crate::reductions::{self, VertexCoverInstance};
    use crate::stability::{ecm, max_excess, veto_players};

    #[test]
    fn cycle_least_core_is_half() {
        let lc = least_core_value(&cycle4()).unwrap();
        assert_eq!(lc.value, Number::Exact(ratio(1, 2)));
        assert_eq!(lc.imputation.payoffs(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(lc.method, LpMethod::ExactRational);
    }

    #[test]
    fn trees_have_zero_least_core() {
        assert_eq!(
            least_core_value(&path4()).unwrap().value,
            Number::Exact(ratio(0, 1))
        );
        for seed in 0..30 {
            let d = oracle::random_tree_domain(seed, 12, 9);
            if crate::classify(&d).is_degenerate() {
                continue;
            }
            assert_eq!(
                least_core_value(&d).unwrap().value,
                Number::Exact(ratio(0, 1))
            );
        }
    }

    #[test]
    fn triangle_cover_domain_at_most_a_third() {
        let k3 = VertexCoverInstance::new(3, vec![[0, 1], [1, 2], [0, 2]], 2).unwrap();
        let (d, _, _) = reductions::vertexcover_to_ecm(&k3).unwrap();
        let lc = least_core_value(&d).unwrap();
        // every pair of vertices wins; the equal split is optimal
        assert_eq!(lc.value, Number::Exact(ratio(1, 3)));
    }

    #[test]
    fn degenerate_and_capped() {
        let all_win = ConnectivityDomain::builder(2)
            .primary([0])
            .standard([1])
            .build()
            .unwrap();
        assert!(matches!(
            least_core_value(&all_win),
            Err(Error::Degenerate(_))
        ));
        let limits = Limits {
            exact_agents: 24,
            lp_agents: 1,
        };
        assert!(matches!(
            least_core_value_with(&cycle4(), &limits),
            Err(Error::TooLarge { agents: 2, cap: 1 })
        ));
    }

    #[test]
    fn optimality_certificates() {
        for seed in 0..60 {
            let d = oracle::random_domain(seed, 12, 9);
            if crate::classify(&d).is_degenerate() {
                continue;
            }
            let lc = least_core_value(&d).unwrap();
            let eps = lc.value.as_exact().unwrap().clone();
            lc.imputation.check(&d).unwrap();
            assert!(lc.imputation.is_nonnegative());
            // the witness attains ε_min exactly
            assert_eq!(max_excess(&d, &lc.imputation).unwrap().max_excess, eps);
            assert!(ecm(&d, &lc.imputation, &eps).unwrap());
            let below = &eps - tolerance() * BigRational::from_integer(10.into());
            if eps > BigRational::zero() {
                assert!(!ecm(&d, &lc.imputation, &below).unwrap());
            }
            assert_eq!(
                eps.is_zero(),
                !veto_players(&d).veto_agents.is_empty(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn float_path_agrees_with_exact() {
        for seed in 0..12 {
            let d = oracle::random_domain(seed, 16, 9);
            if crate::classify(&d).is_degenerate() {
                continue;
            }
            let minimal = ValueTable::build(&d).minimal_winning();
            let n = d.agent_count();
            let (exact, _) = solve(n, &minimal, BigRational::zero()).unwrap();
            let (float, payoffs) = solve(n, &minimal, FLOAT_TOLERANCE).unwrap();
            assert!((exact.to_f64().unwrap() - float).abs() < 1e-9);
            let p = Imputation::from_f64(&payoffs).unwrap();
            let excess = max_excess(&d, &p).unwrap().max_excess;
            assert!((excess.to_f64().unwrap() - float).abs() < 1e-9);
        }
    }

    #[test]
    fn larger_games_use_floats() {
        // 14 parallel relays between two primaries: ε_min = 1 − 1/14
        let relays = 14;
        let d = ConnectivityDomain::builder(relays + 2)
            .primary([0, 1])
            .standard(2..relays + 2)
            .edges((2..relays + 2).flat_map(|v| [(0, v), (v, 1)]))
            .build()
            .unwrap();
        let lc = least_core_value(&d).unwrap();
        assert_eq!(lc.method, LpMethod::FloatingPoint);
        assert!((lc.value_f64() - (1.0 - 1.0 / relays as f64)).abs() < 1e-9);
        assert!(veto_players(&d).is_empty);
    }
}
