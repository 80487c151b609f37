//! Production-model algebra: basis functions, factor-interaction
//! combinators, and per-content-type model composition.
//!
//! A model for a content type combines a basis function per factor with an
//! interaction rule across factors:
//!
//! * question volume is a single-factor function of askers,
//! * answer volume combines question volume and answerers,
//! * comment volume is the sum of two two-factor sub-models, one driven by
//!   questions and one by answers, both sharing the commenter count as
//!   their second factor (with independent parameters).
//!
//! Power basis with the interactive-essential (product) rule is the
//! Cobb-Douglas form `z = a * x1^l1 * x2^l2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("factor arity mismatch for {family}: expected {expected} columns, got {got}")]
    ArityMismatch {
        family: String,
        expected: usize,
        got: usize,
    },
    #[error("factor columns have unequal lengths")]
    RaggedColumns,
    #[error("negative factor value {value} in column {column} at row {row}")]
    NegativeInput {
        column: usize,
        row: usize,
        value: f64,
    },
    #[error("parameter vector has length {got}, family {family} needs {expected}")]
    ParamCount {
        family: String,
        expected: usize,
        got: usize,
    },
    #[error("bounds vector has length {got}, expected {expected}")]
    BoundsCount { expected: usize, got: usize },
    #[error("question models take no interaction; answer/comment models require one")]
    InteractionArity,
    #[error("factor index {0} out of range")]
    FactorIndex(usize),
    #[error("baseline must be >= 1, got {0}")]
    BadBaseline(f64),
    #[error("summary undefined for this model family")]
    NotCobbDouglas,
    #[error("unknown {what} {value:?}")]
    UnknownName { what: &'static str, value: String },
}

/// The three produced content types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentType {
    Question,
    Answer,
    Comment,
}

impl ContentType {
    pub const ALL: [ContentType; 3] = [
        ContentType::Question,
        ContentType::Answer,
        ContentType::Comment,
    ];

    /// Number of factor columns the content type consumes:
    /// question `U_q`; answer `(N_q, U_a)`; comment `(N_q, N_a, U_c)`.
    pub fn factor_arity(self) -> usize {
        match self {
            ContentType::Question => 1,
            ContentType::Answer => 2,
            ContentType::Comment => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContentType::Question => "question",
            ContentType::Answer => "answer",
            ContentType::Comment => "comment",
        }
    }
}

impl fmt::Display for ContentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContentType {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "question" => Ok(ContentType::Question),
            "answer" => Ok(ContentType::Answer),
            "comment" => Ok(ContentType::Comment),
            _ => Err(ModelError::UnknownName {
                what: "content type",
                value: s.to_string(),
            }),
        }
    }
}

/// Per-factor consumption curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// `g(x) = a * x^lambda`
    Power,
    /// `g(x) = a * b^x`
    Exponential,
    /// `g(x) = L / (1 + exp(k * (x - x0)))`
    Sigmoid,
}

impl BasisKind {
    pub const ALL: [BasisKind; 3] = [BasisKind::Power, BasisKind::Exponential, BasisKind::Sigmoid];

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Power => "power",
            BasisKind::Exponential => "exponential",
            BasisKind::Sigmoid => "sigmoid",
        }
    }

    fn single_param_count(self) -> usize {
        match self {
            BasisKind::Power | BasisKind::Exponential => 2,
            BasisKind::Sigmoid => 3,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power" => Ok(BasisKind::Power),
            "exponential" => Ok(BasisKind::Exponential),
            "sigmoid" => Ok(BasisKind::Sigmoid),
            _ => Err(ModelError::UnknownName {
                what: "basis",
                value: s.to_string(),
            }),
        }
    }
}

/// Pairwise combinator over the two per-factor values.
///
/// Substitutable weights are fixed at `w1 = w2 = 1`; free weights would be
/// redundant with the basis amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    /// `z = min(y1, y2)` — the more limiting factor decides.
    Essential,
    /// `z = y1 * y2` — diminishing, never zero, return for a single factor.
    InteractiveEssential,
    /// `z = max(y1, y2)` — the more productive factor decides.
    Antagonistic,
    /// `z = y1 + y2` — factors stand in for each other.
    Substitutable,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 4] = [
        InteractionKind::Essential,
        InteractionKind::InteractiveEssential,
        InteractionKind::Antagonistic,
        InteractionKind::Substitutable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InteractionKind::Essential => "essential",
            InteractionKind::InteractiveEssential => "interactive_essential",
            InteractionKind::Antagonistic => "antagonistic",
            InteractionKind::Substitutable => "substitutable",
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InteractionKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "essential" => Ok(InteractionKind::Essential),
            "interactive_essential" => Ok(InteractionKind::InteractiveEssential),
            "antagonistic" => Ok(InteractionKind::Antagonistic),
            "substitutable" => Ok(InteractionKind::Substitutable),
            _ => Err(ModelError::UnknownName {
                what: "interaction",
                value: s.to_string(),
            }),
        }
    }
}

/// A (content type, basis, interaction) cell of the model grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelFamily {
    pub content_type: ContentType,
    pub basis: BasisKind,
    /// `None` for the single-factor question model.
    pub interaction: Option<InteractionKind>,
}

impl ModelFamily {
    pub fn question(basis: BasisKind) -> Self {
        Self {
            content_type: ContentType::Question,
            basis,
            interaction: None,
        }
    }

    pub fn answer(basis: BasisKind, interaction: InteractionKind) -> Self {
        Self {
            content_type: ContentType::Answer,
            basis,
            interaction: Some(interaction),
        }
    }

    pub fn comment(basis: BasisKind, interaction: InteractionKind) -> Self {
        Self {
            content_type: ContentType::Comment,
            basis,
            interaction: Some(interaction),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match (self.content_type, self.interaction) {
            (ContentType::Question, None) => Ok(()),
            (ContentType::Answer | ContentType::Comment, Some(_)) => Ok(()),
            _ => Err(ModelError::InteractionArity),
        }
    }

    fn pair_param_count(basis: BasisKind, interaction: InteractionKind) -> usize {
        match (basis, interaction) {
            (BasisKind::Power | BasisKind::Exponential, InteractionKind::InteractiveEssential) => 3,
            (BasisKind::Power | BasisKind::Exponential, _) => 4,
            (BasisKind::Sigmoid, InteractionKind::InteractiveEssential) => 5,
            (BasisKind::Sigmoid, _) => 6,
        }
    }

    pub fn param_count(&self) -> usize {
        match self.content_type {
            ContentType::Question => self.basis.single_param_count(),
            ContentType::Answer => {
                Self::pair_param_count(self.basis, self.interaction.expect("validated"))
            }
            // Two additive sub-models with independent parameters.
            ContentType::Comment => {
                2 * Self::pair_param_count(self.basis, self.interaction.expect("validated"))
            }
        }
    }

    pub fn factor_arity(&self) -> usize {
        self.content_type.factor_arity()
    }

    /// Indices into theta of power-basis exponents (empty for other bases).
    pub fn exponent_indices(&self) -> Vec<usize> {
        if self.basis != BasisKind::Power {
            return Vec::new();
        }
        match self.content_type {
            ContentType::Question => vec![1],
            ContentType::Answer => match self.interaction.expect("validated") {
                InteractionKind::InteractiveEssential => vec![1, 2],
                _ => vec![1, 3],
            },
            ContentType::Comment => match self.interaction.expect("validated") {
                InteractionKind::InteractiveEssential => vec![1, 2, 4, 5],
                _ => vec![1, 3, 5, 7],
            },
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.interaction {
            Some(i) => write!(f, "{}/{}/{}", self.content_type, self.basis, i),
            None => write!(f, "{}/{}", self.content_type, self.basis),
        }
    }
}

/// Column-major factor inputs: one column per factor, one row per period.
#[derive(Debug, Clone, PartialEq)]
pub struct Factors {
    columns: Vec<Vec<f64>>,
}

impl Factors {
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        if let Some(first) = columns.first() {
            if columns.iter().any(|c| c.len() != first.len()) {
                return Err(ModelError::RaggedColumns);
            }
        }
        for (ci, col) in columns.iter().enumerate() {
            for (ri, &v) in col.iter().enumerate() {
                if !(v >= 0.0) {
                    return Err(ModelError::NegativeInput {
                        column: ci,
                        row: ri,
                        value: v,
                    });
                }
            }
        }
        Ok(Self { columns })
    }

    pub fn arity(&self) -> usize {
        self.columns.len()
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    fn row(&self, t: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[t]).collect()
    }
}

/// A model family together with a concrete parameter vector and per
/// parameter box bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionModelSpec {
    pub content_type: ContentType,
    pub basis: BasisKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction: Option<InteractionKind>,
    pub theta: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
}

impl ProductionModelSpec {
    pub fn new(
        family: ModelFamily,
        theta: Vec<f64>,
        bounds: Vec<(f64, f64)>,
    ) -> Result<Self, ModelError> {
        let spec = Self {
            content_type: family.content_type,
            basis: family.basis,
            interaction: family.interaction,
            theta,
            bounds,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn family(&self) -> ModelFamily {
        ModelFamily {
            content_type: self.content_type,
            basis: self.basis,
            interaction: self.interaction,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let family = self.family();
        family.validate()?;
        let expected = family.param_count();
        if self.theta.len() != expected {
            return Err(ModelError::ParamCount {
                family: family.to_string(),
                expected,
                got: self.theta.len(),
            });
        }
        if self.bounds.len() != expected {
            return Err(ModelError::BoundsCount {
                expected,
                got: self.bounds.len(),
            });
        }
        Ok(())
    }

    /// True when the spec is a power-basis model whose exponents all lie in
    /// `[0, 1]`, the admissible Cobb-Douglas range.
    pub fn cobb_douglas_admissible(&self) -> bool {
        self.basis == BasisKind::Power
            && self
                .family()
                .exponent_indices()
                .iter()
                .all(|&i| (0.0..=1.0).contains(&self.theta[i]))
    }

    /// Elementwise model output over the factor columns.
    pub fn evaluate(&self, factors: &Factors) -> Result<Vec<f64>, ModelError> {
        self.validate()?;
        check_arity(&self.family(), factors)?;
        Ok(eval_family(&self.family(), &self.theta, factors))
    }

    /// Output together with the per-period Jacobian rows d(output)/d(theta).
    pub fn evaluate_with_jacobian(
        &self,
        factors: &Factors,
    ) -> Result<(Vec<f64>, Vec<Vec<f64>>), ModelError> {
        self.validate()?;
        check_arity(&self.family(), factors)?;
        Ok(eval_family_jacobian(&self.family(), &self.theta, factors))
    }

    /// Output change from raising factor `factor_index` by one unit above
    /// `baseline`, holding the other factors at `inputs`.
    pub fn marginal_return(
        &self,
        factor_index: usize,
        inputs: &[f64],
        baseline: f64,
    ) -> Result<f64, ModelError> {
        self.validate()?;
        let arity = self.family().factor_arity();
        if factor_index >= arity {
            return Err(ModelError::FactorIndex(factor_index));
        }
        if inputs.len() != arity {
            return Err(ModelError::ArityMismatch {
                family: self.family().to_string(),
                expected: arity,
                got: inputs.len(),
            });
        }
        if !(baseline >= 1.0) {
            return Err(ModelError::BadBaseline(baseline));
        }
        let mut at = |v: f64| -> Result<f64, ModelError> {
            let mut row = inputs.to_vec();
            row[factor_index] = v;
            let cols = row.into_iter().map(|x| vec![x]).collect();
            Ok(eval_family(&self.family(), &self.theta, &Factors::new(cols)?)[0])
        };
        Ok(at(baseline + 1.0)? - at(baseline)?)
    }

    /// Total factor productivity, output elasticities, and returns to scale
    /// of a Cobb-Douglas spec (power basis; interactive-essential for
    /// two-factor models). Comment models are sums of two Cobb-Douglas
    /// terms and have no single summary.
    pub fn cobb_douglas_summary(&self) -> Result<CobbDouglasSummary, ModelError> {
        self.validate()?;
        let elasticities: Vec<f64> = match (self.content_type, self.basis, self.interaction) {
            (ContentType::Question, BasisKind::Power, None) => vec![self.theta[1]],
            (
                ContentType::Answer,
                BasisKind::Power,
                Some(InteractionKind::InteractiveEssential),
            ) => vec![self.theta[1], self.theta[2]],
            _ => return Err(ModelError::NotCobbDouglas),
        };
        let returns_to_scale = elasticities.iter().sum();
        Ok(CobbDouglasSummary {
            total_factor_productivity: self.theta[0],
            elasticities,
            returns_to_scale,
        })
    }
}

/// Interpretation of a fitted Cobb-Douglas model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobbDouglasSummary {
    pub total_factor_productivity: f64,
    pub elasticities: Vec<f64>,
    pub returns_to_scale: f64,
}

/// Scale-efficiency regimes by the sum of elasticities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnsToScale {
    Decreasing,
    Constant,
    Increasing,
}

impl CobbDouglasSummary {
    pub fn classification(&self) -> ReturnsToScale {
        if self.returns_to_scale < 1.0 {
            ReturnsToScale::Decreasing
        } else if self.returns_to_scale > 1.0 {
            ReturnsToScale::Increasing
        } else {
            ReturnsToScale::Constant
        }
    }
}

fn check_arity(family: &ModelFamily, factors: &Factors) -> Result<(), ModelError> {
    if factors.arity() != family.factor_arity() {
        return Err(ModelError::ArityMismatch {
            family: family.to_string(),
            expected: family.factor_arity(),
            got: factors.arity(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Evaluation kernels
// ---------------------------------------------------------------------------

/// ln(x) where the result only ever multiplies terms that vanish with x;
/// the x = 0 limit of x^l * ln(x) is 0 for l > 0.
fn safe_ln(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        0.0
    }
}

fn sigmoid(k: f64, x0: f64, x: f64) -> f64 {
    1.0 / (1.0 + (k * (x - x0)).exp())
}

fn single_value(basis: BasisKind, th: &[f64], x: f64) -> f64 {
    match basis {
        BasisKind::Power => th[0] * x.powf(th[1]),
        BasisKind::Exponential => th[0] * th[1].powf(x),
        BasisKind::Sigmoid => th[0] * sigmoid(th[1], th[2], x),
    }
}

fn single_grad(basis: BasisKind, th: &[f64], x: f64, out: &mut [f64]) {
    match basis {
        BasisKind::Power => {
            let p = x.powf(th[1]);
            out[0] = p;
            out[1] = th[0] * p * safe_ln(x);
        }
        BasisKind::Exponential => {
            let p = th[1].powf(x);
            out[0] = p;
            out[1] = th[0] * x * th[1].powf(x - 1.0);
        }
        BasisKind::Sigmoid => {
            let s = sigmoid(th[1], th[2], x);
            let slope = s * (1.0 - s);
            out[0] = s;
            out[1] = -th[0] * slope * (x - th[2]);
            out[2] = th[0] * slope * th[1];
        }
    }
}

fn pair_value(basis: BasisKind, interaction: InteractionKind, th: &[f64], x1: f64, x2: f64) -> f64 {
    if interaction == InteractionKind::InteractiveEssential {
        // Collapsed amplitude: one scale parameter for the product.
        return match basis {
            BasisKind::Power => th[0] * x1.powf(th[1]) * x2.powf(th[2]),
            BasisKind::Exponential => th[0] * th[1].powf(x1) * th[2].powf(x2),
            BasisKind::Sigmoid => th[0] * sigmoid(th[1], th[2], x1) * sigmoid(th[3], th[4], x2),
        };
    }
    let p = basis.single_param_count();
    let y1 = single_value(basis, &th[..p], x1);
    let y2 = single_value(basis, &th[p..], x2);
    match interaction {
        InteractionKind::Essential => y1.min(y2),
        InteractionKind::Antagonistic => y1.max(y2),
        InteractionKind::Substitutable => y1 + y2,
        InteractionKind::InteractiveEssential => unreachable!(),
    }
}

fn pair_grad(
    basis: BasisKind,
    interaction: InteractionKind,
    th: &[f64],
    x1: f64,
    x2: f64,
    out: &mut [f64],
) {
    if interaction == InteractionKind::InteractiveEssential {
        match basis {
            BasisKind::Power => {
                let p1 = x1.powf(th[1]);
                let p2 = x2.powf(th[2]);
                out[0] = p1 * p2;
                out[1] = th[0] * p1 * p2 * safe_ln(x1);
                out[2] = th[0] * p1 * p2 * safe_ln(x2);
            }
            BasisKind::Exponential => {
                let p1 = th[1].powf(x1);
                let p2 = th[2].powf(x2);
                out[0] = p1 * p2;
                out[1] = th[0] * x1 * th[1].powf(x1 - 1.0) * p2;
                out[2] = th[0] * p1 * x2 * th[2].powf(x2 - 1.0);
            }
            BasisKind::Sigmoid => {
                let s1 = sigmoid(th[1], th[2], x1);
                let s2 = sigmoid(th[3], th[4], x2);
                let sl1 = s1 * (1.0 - s1);
                let sl2 = s2 * (1.0 - s2);
                out[0] = s1 * s2;
                out[1] = -th[0] * s2 * sl1 * (x1 - th[2]);
                out[2] = th[0] * s2 * sl1 * th[1];
                out[3] = -th[0] * s1 * sl2 * (x2 - th[4]);
                out[4] = th[0] * s1 * sl2 * th[3];
            }
        }
        return;
    }
    let p = basis.single_param_count();
    let y1 = single_value(basis, &th[..p], x1);
    let y2 = single_value(basis, &th[p..], x2);
    out.fill(0.0);
    match interaction {
        // Subgradient convention at ties: the first argument wins.
        InteractionKind::Essential => {
            if y1 <= y2 {
                single_grad(basis, &th[..p], x1, &mut out[..p]);
            } else {
                single_grad(basis, &th[p..], x2, &mut out[p..]);
            }
        }
        InteractionKind::Antagonistic => {
            if y1 >= y2 {
                single_grad(basis, &th[..p], x1, &mut out[..p]);
            } else {
                single_grad(basis, &th[p..], x2, &mut out[p..]);
            }
        }
        InteractionKind::Substitutable => {
            single_grad(basis, &th[..p], x1, &mut out[..p]);
            single_grad(basis, &th[p..], x2, &mut out[p..]);
        }
        InteractionKind::InteractiveEssential => unreachable!(),
    }
}

fn eval_row(family: &ModelFamily, theta: &[f64], row: &[f64]) -> f64 {
    match family.content_type {
        ContentType::Question => single_value(family.basis, theta, row[0]),
        ContentType::Answer => pair_value(
            family.basis,
            family.interaction.expect("validated"),
            theta,
            row[0],
            row[1],
        ),
        ContentType::Comment => {
            let inter = family.interaction.expect("validated");
            let half = theta.len() / 2;
            pair_value(family.basis, inter, &theta[..half], row[0], row[2])
                + pair_value(family.basis, inter, &theta[half..], row[1], row[2])
        }
    }
}

fn eval_family(family: &ModelFamily, theta: &[f64], factors: &Factors) -> Vec<f64> {
    (0..factors.rows())
        .map(|t| eval_row(family, theta, &factors.row(t)))
        .collect()
}

fn eval_family_jacobian(
    family: &ModelFamily,
    theta: &[f64],
    factors: &Factors,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let k = theta.len();
    let mut values = Vec::with_capacity(factors.rows());
    let mut jac = Vec::with_capacity(factors.rows());
    for t in 0..factors.rows() {
        let row = factors.row(t);
        let mut grad = vec![0.0; k];
        match family.content_type {
            ContentType::Question => single_grad(family.basis, theta, row[0], &mut grad),
            ContentType::Answer => pair_grad(
                family.basis,
                family.interaction.expect("validated"),
                theta,
                row[0],
                row[1],
                &mut grad,
            ),
            ContentType::Comment => {
                let inter = family.interaction.expect("validated");
                let half = k / 2;
                pair_grad(
                    family.basis,
                    inter,
                    &theta[..half],
                    row[0],
                    row[2],
                    &mut grad[..half],
                );
                pair_grad(
                    family.basis,
                    inter,
                    &theta[half..],
                    row[1],
                    row[2],
                    &mut grad[half..],
                );
            }
        }
        values.push(eval_row(family, theta, &row));
        jac.push(grad);
    }
    (values, jac)
}

/// All 27 grid cells: 3 question, 12 answer, 12 comment families.
pub fn grid_families() -> Vec<ModelFamily> {
    let mut out = Vec::with_capacity(27);
    for basis in BasisKind::ALL {
        out.push(ModelFamily::question(basis));
    }
    for content in [ContentType::Answer, ContentType::Comment] {
        for basis in BasisKind::ALL {
            for interaction in InteractionKind::ALL {
                out.push(ModelFamily {
                    content_type: content,
                    basis,
                    interaction: Some(interaction),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn spec(family: ModelFamily, theta: Vec<f64>) -> ProductionModelSpec {
        let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); theta.len()];
        ProductionModelSpec::new(family, theta, bounds).unwrap()
    }

    fn answer(basis: BasisKind, inter: InteractionKind, theta: Vec<f64>) -> ProductionModelSpec {
        spec(ModelFamily::answer(basis, inter), theta)
    }

    #[test]
    fn academia_answer_model_at_unit_inputs() {
        // N_a = 6.93 * N_q^0.18 * U_a^0.65 evaluated at (1, 1).
        let m = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![6.93, 0.18, 0.65],
        );
        let f = Factors::new(vec![vec![1.0], vec![1.0]]).unwrap();
        assert_abs_diff_eq!(m.evaluate(&f).unwrap()[0], 6.93, epsilon = 1e-12);
    }

    #[test]
    fn essential_is_min_substitutable_is_sum() {
        let f = Factors::new(vec![vec![3.0], vec![5.0]]).unwrap();
        let min = answer(
            BasisKind::Power,
            InteractionKind::Essential,
            vec![1.0, 1.0, 1.0, 1.0],
        );
        assert_abs_diff_eq!(min.evaluate(&f).unwrap()[0], 3.0);
        let max = answer(
            BasisKind::Power,
            InteractionKind::Antagonistic,
            vec![1.0, 1.0, 1.0, 1.0],
        );
        assert_abs_diff_eq!(max.evaluate(&f).unwrap()[0], 5.0);
        let sum = answer(
            BasisKind::Power,
            InteractionKind::Substitutable,
            vec![1.0, 1.0, 1.0, 1.0],
        );
        assert_abs_diff_eq!(sum.evaluate(&f).unwrap()[0], 8.0);
    }

    #[test]
    fn marginal_return_matches_direct_power_difference() {
        // Hold N_q at 1 so the answer model reduces to c * U_a^0.65, c = a.
        let m = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![1.0, 0.0, 0.65],
        );
        let at_100 = m.marginal_return(1, &[1.0, 100.0], 100.0).unwrap();
        let at_110 = m.marginal_return(1, &[1.0, 110.0], 110.0).unwrap();
        assert_relative_eq!(
            at_100,
            101f64.powf(0.65) - 100f64.powf(0.65),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            at_110,
            111f64.powf(0.65) - 110f64.powf(0.65),
            epsilon = 1e-12
        );
        // Diminishing returns: later unit adds less.
        assert!(at_110 < at_100);
    }

    #[test]
    fn marginal_return_linear_case_is_constant() {
        let m = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![2.5, 0.0, 1.0],
        );
        for baseline in [1.0, 10.0, 1000.0] {
            let inc = m.marginal_return(1, &[1.0, baseline], baseline).unwrap();
            assert_relative_eq!(inc, 2.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn cobb_douglas_summary_classifies_returns_to_scale() {
        let academia = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![6.93, 0.18, 0.65],
        );
        let s = academia.cobb_douglas_summary().unwrap();
        assert_abs_diff_eq!(s.total_factor_productivity, 6.93);
        assert_abs_diff_eq!(s.returns_to_scale, 0.83, epsilon = 1e-15);
        assert_eq!(s.classification(), ReturnsToScale::Decreasing);

        let constant = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![1.0, 0.5, 0.5],
        );
        let s = constant.cobb_douglas_summary().unwrap();
        assert_eq!(s.returns_to_scale, 1.0);
        assert_eq!(s.classification(), ReturnsToScale::Constant);

        let increasing = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![1.0, 0.7, 0.6],
        );
        let s = increasing.cobb_douglas_summary().unwrap();
        assert_abs_diff_eq!(s.returns_to_scale, 1.3, epsilon = 1e-15);
        assert_eq!(s.classification(), ReturnsToScale::Increasing);
    }

    #[test]
    fn summary_rejects_non_cobb_douglas_families() {
        let min = answer(
            BasisKind::Power,
            InteractionKind::Essential,
            vec![1.0, 1.0, 1.0, 1.0],
        );
        assert!(matches!(
            min.cobb_douglas_summary(),
            Err(ModelError::NotCobbDouglas)
        ));
        let sig = answer(
            BasisKind::Sigmoid,
            InteractionKind::InteractiveEssential,
            vec![1.0; 5],
        );
        assert!(matches!(
            sig.cobb_douglas_summary(),
            Err(ModelError::NotCobbDouglas)
        ));
        // Comment models are sums of two Cobb-Douglas terms, not one.
        let comment = spec(
            ModelFamily::comment(BasisKind::Power, InteractionKind::InteractiveEssential),
            vec![1.0; 6],
        );
        assert!(comment.cobb_douglas_summary().is_err());
    }

    #[test]
    fn comment_model_is_sum_of_sub_models() {
        let inter = InteractionKind::Substitutable;
        let theta = vec![1.5, 0.3, 0.7, 0.9, 2.0, 0.4, 1.1, 0.6];
        let comment = spec(ModelFamily::comment(BasisKind::Power, inter), theta.clone());
        let n_q = vec![10.0, 20.0];
        let n_a = vec![30.0, 15.0];
        let u_c = vec![7.0, 9.0];
        let f = Factors::new(vec![n_q.clone(), n_a.clone(), u_c.clone()]).unwrap();
        let total = comment.evaluate(&f).unwrap();

        let q_part = answer(BasisKind::Power, inter, theta[..4].to_vec());
        let a_part = answer(BasisKind::Power, inter, theta[4..].to_vec());
        let fq = Factors::new(vec![n_q, u_c.clone()]).unwrap();
        let fa = Factors::new(vec![n_a, u_c]).unwrap();
        let q_out = q_part.evaluate(&fq).unwrap();
        let a_out = a_part.evaluate(&fa).unwrap();
        for t in 0..2 {
            assert_relative_eq!(total[t], q_out[t] + a_out[t], epsilon = 1e-12);
        }
    }

    #[test]
    fn contract_violations_are_reported() {
        let m = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![1.0, 0.5, 0.5],
        );
        let wrong_arity = Factors::new(vec![vec![1.0]]).unwrap();
        assert!(matches!(
            m.evaluate(&wrong_arity),
            Err(ModelError::ArityMismatch { .. })
        ));
        assert!(matches!(
            Factors::new(vec![vec![1.0], vec![-2.0]]),
            Err(ModelError::NegativeInput { .. })
        ));
        assert!(matches!(
            m.marginal_return(2, &[1.0, 1.0], 10.0),
            Err(ModelError::FactorIndex(2))
        ));
        assert!(matches!(
            m.marginal_return(0, &[1.0, 1.0], 0.5),
            Err(ModelError::BadBaseline(_))
        ));
    }

    #[test]
    fn param_counts_match_grid_accounting() {
        use BasisKind::*;
        use InteractionKind::*;
        let count = |b, i| ModelFamily::answer(b, i).param_count();
        assert_eq!(count(Power, InteractiveEssential), 3);
        assert_eq!(count(Power, Essential), 4);
        assert_eq!(count(Power, Antagonistic), 4);
        assert_eq!(count(Power, Substitutable), 4);
        assert_eq!(count(Sigmoid, InteractiveEssential), 5);
        assert_eq!(count(Sigmoid, Essential), 6);
        assert_eq!(ModelFamily::question(Power).param_count(), 2);
        assert_eq!(ModelFamily::question(Sigmoid).param_count(), 3);
        let comment = |b, i| ModelFamily::comment(b, i).param_count();
        assert_eq!(comment(Power, InteractiveEssential), 6);
        assert_eq!(comment(Power, Essential), 8);
        assert_eq!(grid_families().len(), 27);
    }

    #[test]
    fn spec_json_roundtrip() {
        let m = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![6.93, 0.18, 0.65],
        );
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"interactive_essential\""));
        let back: ProductionModelSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        // Question spec omits interaction entirely.
        let q = spec(ModelFamily::question(BasisKind::Power), vec![2.0, 0.5]);
        let json = serde_json::to_string(&q).unwrap();
        assert!(!json.contains("interaction"));
        let back: ProductionModelSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn sigmoid_output_bounded_by_scale() {
        let q = spec(ModelFamily::question(BasisKind::Sigmoid), vec![40.0, -0.1, 50.0]);
        let f = Factors::new(vec![vec![0.0, 50.0, 1e6]]).unwrap();
        let out = q.evaluate(&f).unwrap();
        for v in &out {
            assert!((0.0..=40.0).contains(v), "sigmoid out of range: {v}");
        }
        // Midpoint gives half the scale.
        assert_relative_eq!(out[1], 20.0, epsilon = 1e-9);
    }

    #[test]
    fn elasticity_scaling_of_cobb_douglas() {
        let m = answer(
            BasisKind::Power,
            InteractionKind::InteractiveEssential,
            vec![3.0, 0.25, 0.6],
        );
        let base = Factors::new(vec![vec![50.0], vec![80.0]]).unwrap();
        let y0 = m.evaluate(&base).unwrap()[0];
        for eps in [-0.5, -0.1, 0.3, 1.0, 4.0] {
            let scaled = Factors::new(vec![vec![50.0 * (1.0 + eps)], vec![80.0]]).unwrap();
            let y1 = m.evaluate(&scaled).unwrap()[0];
            assert_relative_eq!(y1, y0 * (1.0 + eps_pow(eps, 0.25)), epsilon = 1e-12);
        }
    }

    fn eps_pow(eps: f64, lambda: f64) -> f64 {
        (1.0 + eps).powf(lambda) - 1.0
    }
}
