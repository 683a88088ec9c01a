//! More than three inputs, and nonlinear utilities.
//!
//! With `j ≥ 4` inputs the user picks three to vary and fixes the weights
//! of the rest. Because the aggregate stays affine in `λ`, the problem
//! reduces to an ordinary three-input set whose decomposition is exact.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{InputSet, ScoreVector, WeightVector, WEIGHT_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionConfig {
    /// The three inputs spanning the weight triangle.
    pub chosen: [usize; 3],
    /// Weights of the remaining inputs in ascending index order.
    pub fixed_weights: Vec<f64>,
    pub p1: f64,
    pub p2: f64,
}

impl PartitionConfig {
    /// Checks the config against `j` inputs and returns the fixed weights
    /// normalized to sum to one.
    pub fn validate(&self, j: usize) -> Result<Vec<f64>> {
        let [a, b, c] = self.chosen;
        if a == b || b == c || a == c {
            return Err(Error::input("chosen inputs must be distinct"));
        }
        if let Some(bad) = self.chosen.iter().find(|&&k| k >= j) {
            return Err(Error::input(format!("chosen input {bad} out of range for {j} inputs")));
        }
        if self.fixed_weights.len() != j - 3 {
            return Err(Error::input(format!(
                "{} fixed weights for {} remaining inputs",
                self.fixed_weights.len(),
                j - 3
            )));
        }
        let bad_p = |p: f64| !p.is_finite() || p < 0.0;
        if bad_p(self.p1) || bad_p(self.p2) || (self.p1 + self.p2 - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::input("partition weights must be nonnegative and sum to 1"));
        }
        if self.fixed_weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::input("fixed weights must be nonnegative"));
        }
        let sum: f64 = self.fixed_weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::input("fixed weights must not all be zero"));
        }
        Ok(self.fixed_weights.iter().map(|w| w / sum).collect())
    }

    /// Indices of the inputs that are not chosen.
    pub fn rest(&self, j: usize) -> Vec<usize> {
        (0..j).filter(|k| !self.chosen.contains(k)).collect()
    }
}

fn check_partitioned(full: &InputSet, config: &PartitionConfig) -> Result<Vec<f64>> {
    if full.n_inputs() < 4 {
        return Err(Error::input(format!(
            "partitioning needs at least 4 inputs, got {}; aggregate directly",
            full.n_inputs()
        )));
    }
    config.validate(full.n_inputs())
}

/// The fixed part `c = Σ w_i v^i` over the inputs that are not chosen.
fn offset(full: &InputSet, config: &PartitionConfig, weights: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; full.n_items()];
    for (&k, w) in config.rest(full.n_inputs()).iter().zip(weights) {
        for (acc, v) in c.iter_mut().zip(full.inputs()[k].values()) {
            *acc += w * v;
        }
    }
    c
}

/// `p1·(λ1 v^{c1} + λ2 v^{c2} + λ3 v^{c3}) + p2·c`.
pub fn partition_aggregate(full: &InputSet, config: &PartitionConfig, lambda: &WeightVector) -> Result<ScoreVector> {
    let weights = check_partitioned(full, config)?;
    let c = offset(full, config, &weights);
    let l = lambda.lambda();
    let values = (0..full.n_items())
        .map(|i| {
            let varied: f64 = config
                .chosen
                .iter()
                .zip(l)
                .map(|(&k, w)| w * full.value(k, i))
                .sum();
            config.p1 * varied + config.p2 * c[i]
        })
        .collect();
    ScoreVector::rating(values)
}

/// Three effective inputs `p1·v^{cm} + p2·c` whose plain aggregate equals
/// [`partition_aggregate`] at every weight.
pub fn reduce_to_triangle(full: &InputSet, config: &PartitionConfig) -> Result<InputSet> {
    let weights = check_partitioned(full, config)?;
    let c = offset(full, config, &weights);
    let inputs = config
        .chosen
        .iter()
        .map(|&k| {
            let values = full.inputs()[k]
                .values()
                .iter()
                .zip(&c)
                .map(|(v, c)| config.p1 * v + config.p2 * c)
                .collect();
            ScoreVector::rating(values)
        })
        .collect::<Result<Vec<_>>>()?;
    InputSet::new(
        full.items().iter().map(|i| i.name.clone()).collect(),
        inputs,
        config.chosen.iter().map(|&k| full.input_names()[k].clone()).collect(),
    )
}

/// `1 / (1 + e^{5 − 10x})`.
pub fn sigmoid_f(x: f64) -> f64 {
    1.0 / (1.0 + (5.0 - 10.0 * x).exp())
}

type Transform = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A monotone positive transform `f` of the third weight.
#[derive(Clone)]
pub enum NonlinearUtility {
    /// `1 / (1 + e^{a − b·x})`.
    Sigmoid { a: f64, b: f64 },
    Custom { name: String, f: Transform },
}

impl fmt::Debug for NonlinearUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonlinearUtility::Sigmoid { a, b } => write!(f, "Sigmoid {{ a: {a}, b: {b} }}"),
            NonlinearUtility::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Default for NonlinearUtility {
    fn default() -> Self {
        NonlinearUtility::Sigmoid { a: 5.0, b: 10.0 }
    }
}

impl NonlinearUtility {
    pub fn sigmoid(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b < 0.0 {
            return Err(Error::input("sigmoid needs finite a and nonnegative b"));
        }
        Ok(NonlinearUtility::Sigmoid { a, b })
    }

    /// Wraps a user transform after checking positivity and monotonicity on
    /// a fine sample of `[0, 1]`.
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        const SAMPLES: u32 = 1000;
        let values: Vec<f64> = (0..=SAMPLES).map(|k| f(f64::from(k) / f64::from(SAMPLES))).collect();
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::input("utility transform must be positive on [0, 1]"));
        }
        let up = values.windows(2).all(|w| w[0] <= w[1]);
        let down = values.windows(2).all(|w| w[0] >= w[1]);
        if !up && !down {
            return Err(Error::input("utility transform must be monotone on [0, 1]"));
        }
        Ok(NonlinearUtility::Custom {
            name: name.into(),
            f: Arc::new(f),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            NonlinearUtility::Sigmoid { a, b } => 1.0 / (1.0 + (a - b * x).exp()),
            NonlinearUtility::Custom { f, .. } => f(x),
        }
    }

    /// The weight `(λ1, λ2, f(λ3)) / (λ1 + λ2 + f(λ3))`, which ranks like the
    /// nonlinear aggregate at `λ`.
    pub fn normalize(&self, lambda: &WeightVector) -> WeightVector {
        let [l1, l2, l3] = lambda.lambda();
        WeightVector::normalized([l1, l2, self.eval(l3)]).expect("f is positive")
    }
}

/// [`NonlinearUtility::normalize`] with the default sigmoid.
pub fn nonlinear_normalize(lambda: &WeightVector) -> WeightVector {
    NonlinearUtility::default().normalize(lambda)
}

/// `λ1 v^1 + λ2 v^2 + f(λ3) v^3`.
pub fn nonlinear_aggregate(input_set: &InputSet, f: &NonlinearUtility, lambda: &WeightVector) -> Result<ScoreVector> {
    let [v1, v2, v3] = input_set.triple()?;
    let [l1, l2, l3] = lambda.lambda();
    let c3 = f.eval(l3);
    let values = (0..input_set.n_items())
        .map(|i| l1 * v1.values()[i] + l2 * v2.values()[i] + c3 * v3.values()[i])
        .collect();
    ScoreVector::rating(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{aggregate, rank_of};

    fn five_inputs() -> InputSet {
        InputSet::from_rankings(&[
            vec![1, 2, 3, 4],
            vec![4, 3, 2, 1],
            vec![2, 1, 4, 3],
            vec![3, 4, 1, 2],
            vec![1, 3, 2, 4],
        ])
        .unwrap()
    }

    fn config(p1: f64) -> PartitionConfig {
        PartitionConfig {
            chosen: [0, 2, 4],
            fixed_weights: vec![1.0, 3.0],
            p1,
            p2: 1.0 - p1,
        }
    }

    #[test]
    fn sigmoid_values() {
        assert_eq!(sigmoid_f(0.5), 0.5);
        assert!((sigmoid_f(0.0) - 1.0 / (1.0 + 5f64.exp())).abs() < 1e-15);
        assert!((sigmoid_f(1.0) - 0.993_307_1).abs() < 1e-6);
        assert!((sigmoid_f(0.0) - 0.006_692_9).abs() < 1e-6);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(nonlinear_normalize(&WeightVector::corner(2)).lambda(), [0.0, 0.0, 1.0]);
        let w = nonlinear_normalize(&WeightVector::new([0.5, 0.5, 0.0]).unwrap()).lambda();
        let f0 = sigmoid_f(0.0);
        for (got, want) in w.iter().zip([0.5 / (1.0 + f0), 0.5 / (1.0 + f0), f0 / (1.0 + f0)]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((w[0] - 0.49668).abs() < 1e-5 && (w[2] - 0.00665).abs() < 1e-5);
    }

    #[test]
    fn custom_transforms_are_checked() {
        assert!(NonlinearUtility::custom("square", |x| x * x).is_err());
        assert!(NonlinearUtility::custom("bump", |x| 1.0 + (x - 0.5).abs()).is_err());
        let ok = NonlinearUtility::custom("shifted", |x| 1.0 + x * x).unwrap();
        assert_eq!(ok.eval(1.0), 2.0);
        assert!(NonlinearUtility::sigmoid(5.0, f64::NAN).is_err());
    }

    #[test]
    fn partition_config_validation() {
        let set = five_inputs();
        assert_eq!(config(0.25).validate(5).unwrap(), vec![0.25, 0.75]);
        let mut c = config(0.5);
        c.chosen = [0, 0, 1];
        assert!(c.validate(5).is_err());
        let mut c = config(0.5);
        c.p2 = 0.6;
        assert!(c.validate(5).is_err());
        let mut c = config(0.5);
        c.fixed_weights = vec![1.0];
        assert!(c.validate(5).is_err());
        let three = InputSet::from_rankings(&[vec![1, 2], vec![2, 1], vec![1, 2]]).unwrap();
        assert!(partition_aggregate(&three, &config(0.5), &WeightVector::corner(0)).is_err());
        assert!(reduce_to_triangle(&set, &config(0.5)).is_ok());
    }

    #[test]
    fn partition_extremes() {
        let set = five_inputs();
        let chosen = InputSet::from_rankings(&[vec![1, 2, 3, 4], vec![2, 1, 4, 3], vec![1, 3, 2, 4]]).unwrap();
        let w = WeightVector::new([0.2, 0.3, 0.5]).unwrap();
        assert_eq!(
            partition_aggregate(&set, &config(1.0), &w).unwrap().values(),
            aggregate(&chosen, &w).unwrap().values()
        );
        let reduced = reduce_to_triangle(&set, &config(1.0)).unwrap();
        for k in 0..3 {
            assert_eq!(reduced.inputs()[k].values(), chosen.inputs()[k].values());
        }
        let flat = reduce_to_triangle(&set, &config(0.0)).unwrap();
        assert_eq!(flat.inputs()[0], flat.inputs()[1]);
        assert_eq!(flat.inputs()[1], flat.inputs()[2]);
        // c = 0.25·(4,3,2,1) + 0.75·(3,4,1,2)
        let c = partition_aggregate(&set, &config(0.0), &w).unwrap();
        assert_eq!(c.values(), &[3.25, 3.75, 1.25, 1.75]);
    }

    #[test]
    fn reduction_matches_partitioned_aggregate() {
        let set = five_inputs();
        let cfg = config(0.25);
        let reduced = reduce_to_triangle(&set, &cfg).unwrap();
        for i in 0..=20 {
            for j in 0..=20 - i {
                let w = WeightVector::normalized([i as f64, j as f64, (20 - i - j) as f64]).unwrap();
                let a = rank_of(&partition_aggregate(&set, &cfg, &w).unwrap());
                let b = rank_of(&aggregate(&reduced, &w).unwrap());
                assert_eq!(a, b, "at {:?}", w.lambda());
            }
        }
    }

    #[test]
    fn nonlinear_matches_pulled_back_linear() {
        let set = five_inputs();
        let three = InputSet::from_rankings(&set.inputs()[..3].iter().map(|v| v.values().iter().map(|&x| x as u32).collect()).collect::<Vec<_>>()).unwrap();
        let f = NonlinearUtility::default();
        for k in 0..50 {
            let t = k as f64 / 50.0;
            let w = WeightVector::normalized([t, (1.0 - t) * 0.3, (1.0 - t) * 0.7]).unwrap();
            let n = rank_of(&nonlinear_aggregate(&three, &f, &w).unwrap());
            let l = rank_of(&aggregate(&three, &f.normalize(&w)).unwrap());
            assert_eq!(n, l);
        }
    }
}
