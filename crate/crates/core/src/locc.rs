//! Symmetric LOCC channels `𝒦(ρ) = Σ_n K_n ρ K_n†`.
//!
//! A channel is symmetric LOCC when its Kraus operators are complete, factor
//! across the bipartition and commute with `N̂`. Such operators shift the
//! subsystem charge by a definite amount, `[K_n, N̂_A] = δ_n K_n`, which
//! makes the channel commute with the subsystem charge measurement.
//! Product form is checked only against factors supplied by the caller.

use std::sync::Arc;

use rand::Rng;

use crate::entropy::number_entanglement;
use crate::error::{Error, Result};
use crate::hilbert::{
    local_basis, product_operator, project_subsystem_charge, total_charge_operator, Bipartition,
    ChargeMap, DensityOperator, OccupationBasis, Statistics,
};
use crate::linalg::{self, c, CMatrix};
use crate::sampling::ginibre;

/// Residual accepted for every channel condition.
pub const CHANNEL_TOL: f64 = 1e-10;
/// Slack allowed when comparing `ΔS_m` before and after a channel.
pub const MONOTONICITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
    factors: Vec<Option<(CMatrix, CMatrix)>>,
    grades: Vec<Option<i64>>,
}

impl KrausChannel {
    /// Channel without declared factors or grades.
    pub fn new(operators: Vec<CMatrix>) -> Self {
        let n = operators.len();
        Self {
            operators,
            factors: vec![None; n],
            grades: vec![None; n],
        }
    }

    /// Builds `K_n = K_n^(A) ⊗ K_n^(B)` on `basis` and records the factors.
    pub fn from_factors(
        basis: &OccupationBasis,
        partition: &Bipartition,
        factors: Vec<(CMatrix, CMatrix)>,
    ) -> Result<Self> {
        let operators = factors
            .iter()
            .map(|(a, b)| product_operator(basis, partition, a, b))
            .collect::<Result<Vec<_>>>()?;
        let n = operators.len();
        Ok(Self {
            operators,
            factors: factors.into_iter().map(Some).collect(),
            grades: vec![None; n],
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![linalg::identity(dim)])
    }

    /// Declares the subsystem charge `δ_n` of each operator.
    pub fn with_grades(mut self, grades: Vec<Option<i64>>) -> Result<Self> {
        if grades.len() != self.operators.len() {
            return Err(Error::DimensionMismatch {
                expected: self.operators.len(),
                found: grades.len(),
            });
        }
        self.grades = grades;
        Ok(self)
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn factors(&self) -> &[Option<(CMatrix, CMatrix)>] {
        &self.factors
    }

    pub fn grades(&self) -> &[Option<i64>] {
        &self.grades
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `max |Σ K† K − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let Some(first) = self.operators.first() else {
            return f64::INFINITY;
        };
        let d = first.ncols();
        let mut s = CMatrix::zeros(d, d);
        for k in &self.operators {
            s += k.adjoint() * k;
        }
        linalg::max_abs(&(s - linalg::identity(d)))
    }

    /// `Σ_n K_n M K_n†` without any checks.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let d = m.nrows();
        let mut out = CMatrix::zeros(d, d);
        for k in &self.operators {
            out += k * m * k.adjoint();
        }
        out
    }
}

/// Subsystem charge carried by an operator, if it has a single one:
/// `δ = N_A(col) − N_A(row)` over its non-zero elements.
pub fn infer_grade(op: &CMatrix, subsystem_charges: &[usize]) -> Option<i64> {
    let scale = linalg::max_abs(op);
    if scale == 0.0 {
        return Some(0);
    }
    let mut grade = None;
    for i in 0..op.nrows() {
        for j in 0..op.ncols() {
            if op[(i, j)].norm() > CHANNEL_TOL * scale.max(1.0) {
                let d = subsystem_charges[j] as i64 - subsystem_charges[i] as i64;
                match grade {
                    None => grade = Some(d),
                    Some(g) if g != d => return None,
                    _ => {}
                }
            }
        }
    }
    grade.or(Some(0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorCheck {
    /// `max |[K, N̂]|`.
    pub symmetry_residual: f64,
    /// `max |K − K^(A) ⊗ K^(B)|` when factors were declared.
    pub product_residual: Option<f64>,
    pub declared_grade: Option<i64>,
    /// `max |[K, N̂_A] − δ K|` for the declared grade.
    pub grading_residual: Option<f64>,
    pub inferred_grade: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelReport {
    pub completeness_residual: f64,
    pub operators: Vec<OperatorCheck>,
    /// One line per failed condition.
    pub failures: Vec<String>,
}

impl ChannelReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn inferred_grades(&self) -> Vec<Option<i64>> {
        self.operators.iter().map(|o| o.inferred_grade).collect()
    }
}

/// Checks completeness, charge symmetry, declared product form and declared
/// grading of every operator.
pub fn validate_channel(
    channel: &KrausChannel,
    basis: &OccupationBasis,
    partition: &Bipartition,
) -> Result<ChannelReport> {
    let d = basis.dimension();
    for k in channel.operators() {
        if k.nrows() != d || k.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k.nrows(),
            });
        }
    }
    let charges = ChargeMap::new(basis, partition);
    let n_op = total_charge_operator(basis);
    let na_op = crate::hilbert::subsystem_charge_operator(basis, partition);
    let mut failures = Vec::new();
    let completeness_residual = channel.completeness_residual();
    if completeness_residual > CHANNEL_TOL {
        failures.push(format!(
            "completeness: |Σ K†K − I| = {completeness_residual:.3e}"
        ));
    }
    let mut operators = Vec::with_capacity(channel.len());
    for (n, k) in channel.operators().iter().enumerate() {
        let symmetry_residual = linalg::max_abs(&linalg::commutator(k, &n_op));
        if symmetry_residual > CHANNEL_TOL {
            failures.push(format!("symmetry: |[K_{n}, N]| = {symmetry_residual:.3e}"));
        }
        let product_residual = match &channel.factors()[n] {
            Some((a, b)) => {
                let r = linalg::max_abs(&(k - product_operator(basis, partition, a, b)?));
                if r > CHANNEL_TOL {
                    failures.push(format!("product form: K_{n} differs from its factors by {r:.3e}"));
                }
                Some(r)
            }
            None => None,
        };
        let declared_grade = channel.grades()[n];
        let grading_residual = declared_grade.map(|g| {
            let r = linalg::max_abs(&(linalg::commutator(k, &na_op) - k * c(g as f64)));
            if r > CHANNEL_TOL {
                failures.push(format!("grading: |[K_{n}, N_A] − {g} K_{n}| = {r:.3e}"));
            }
            r
        });
        operators.push(OperatorCheck {
            symmetry_residual,
            product_residual,
            declared_grade,
            grading_residual,
            inferred_grade: infer_grade(k, &charges.subsystem),
        });
    }
    Ok(ChannelReport {
        completeness_residual,
        operators,
        failures,
    })
}

/// `𝒦(ρ)`; refuses incomplete channels.
pub fn apply_channel(rho: &DensityOperator, channel: &KrausChannel) -> Result<DensityOperator> {
    for k in channel.operators() {
        if k.nrows() != rho.dimension() || k.ncols() != rho.dimension() {
            return Err(Error::DimensionMismatch {
                expected: rho.dimension(),
                found: k.nrows(),
            });
        }
    }
    let r = channel.completeness_residual();
    if r > CHANNEL_TOL {
        return Err(Error::IncompleteChannel(r));
    }
    Ok(rho.with_matrix(linalg::hermitize(&channel.apply_matrix(rho.matrix()))))
}

/// `max |Σ Π 𝒦(ρ) Π − 𝒦(Σ Π ρ Π)|`.
pub fn measurement_commutes_with_channel(
    rho: &DensityOperator,
    channel: &KrausChannel,
    partition: &Bipartition,
) -> Result<f64> {
    let after = rho.with_matrix(channel.apply_matrix(rho.matrix()));
    let measured_after = project_subsystem_charge(&after, partition);
    let measured = project_subsystem_charge(rho, partition);
    let after_measured = channel.apply_matrix(measured.matrix());
    Ok(linalg::max_abs(&(measured_after.matrix() - after_measured)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub before: f64,
    pub after: f64,
    pub non_increasing: bool,
}

/// Compares `ΔS_m(ρ)` with `ΔS_m(𝒦(ρ))`.
pub fn monotonicity_check(
    rho: &DensityOperator,
    channel: &KrausChannel,
    partition: &Bipartition,
) -> Result<MonotonicityReport> {
    let before = number_entanglement(rho, partition)?.delta_s_m;
    let out = apply_channel(rho, channel)?;
    let after = number_entanglement(&out, partition)?.delta_s_m;
    Ok(MonotonicityReport {
        before,
        after,
        non_increasing: after <= before + MONOTONICITY_TOL,
    })
}

/// Random local operator that raises the local charge by exactly `shift`.
fn random_shift_operator<R: Rng + ?Sized>(local: &OccupationBasis, shift: i64, rng: &mut R) -> CMatrix {
    let d = local.dimension();
    let g = ginibre(d, d, rng);
    CMatrix::from_fn(d, d, |i, j| {
        if local.total_charge(i) as i64 - local.total_charge(j) as i64 == shift {
            g[(i, j)]
        } else {
            c(0.0)
        }
    })
}

/// Random symmetric channel with `num_products` graded product operators.
///
/// Each product moves a random number of particles from `B` to `A`
/// (grade `−shift`). The family is rescaled below completeness and closed
/// with `√(I − Σ K†K)`, which commutes with `N̂` and `N̂_A` but is not of
/// product form; its factors are left undeclared.
pub fn random_graded_channel<R: Rng + ?Sized>(
    basis: &OccupationBasis,
    partition: &Bipartition,
    num_products: usize,
    rng: &mut R,
) -> Result<KrausChannel> {
    basis.check_partition(partition)?;
    let local_a = local_basis(basis, partition.a_sites())?;
    let local_b = local_basis(basis, partition.b_sites())?;
    let max_shift = local_a
        .total_charges()
        .into_iter()
        .max()
        .unwrap_or(0)
        .min(local_b.total_charges().into_iter().max().unwrap_or(0)) as i64;
    let mut factors = Vec::with_capacity(num_products);
    let mut grades = Vec::with_capacity(num_products + 1);
    for _ in 0..num_products {
        let shift = rng.random_range(-max_shift..=max_shift);
        let a = random_shift_operator(&local_a, shift, rng);
        let b = random_shift_operator(&local_b, -shift, rng);
        factors.push((a, b));
        grades.push(Some(-shift));
    }
    let draft = KrausChannel::from_factors(basis, partition, factors.clone())?;
    let d = basis.dimension();
    let mut s = CMatrix::zeros(d, d);
    for k in draft.operators() {
        s += k.adjoint() * k;
    }
    let top = linalg::eigvalsh(&s).last().copied().unwrap_or(0.0);
    // keep a gap so the completion operator is well defined
    let scale = if top > 0.0 { (0.9 / top).sqrt() } else { 1.0 };
    let scaled: Vec<(CMatrix, CMatrix)> = factors
        .into_iter()
        .map(|(a, b)| (a * c(scale), b))
        .collect();
    let mut channel = KrausChannel::from_factors(basis, partition, scaled)?;
    let rest = linalg::identity(d) - s * c(scale * scale);
    let completion = linalg::hermitian_function(&rest, |x| x.max(0.0).sqrt());
    channel.operators.push(completion);
    channel.factors.push(None);
    grades.push(Some(0));
    channel.grades = grades;
    Ok(channel)
}

/// Two-site classical-communication channel that equalizes `|10⟩` and
/// `|01⟩`, on the one-particle sector of two hard-core sites:
/// `K₁ = |10⟩⟨10|/√2`, `K₂ = |01⟩⟨01|/√2`, `K₃ = |10⟩⟨01|/√2`,
/// `K₄ = |01⟩⟨10|/√2`. Grades are declared for subsystem `A = {a_site}`.
pub fn swap_mixing_channel(a_site: usize) -> Result<(Arc<OccupationBasis>, Bipartition, KrausChannel)> {
    if a_site > 1 {
        return Err(Error::InvalidPartition(format!("site {a_site} outside a 2-site chain")));
    }
    let basis = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, Some(1))?);
    let partition = Bipartition::new(2, &[a_site])?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let site = |out: u8, inp: u8| {
        CMatrix::from_fn(2, 2, |i, j| c(f64::from(i == out as usize && j == inp as usize)))
    };
    // (site-0 factor, site-1 factor) for |x⟩⟨y| with x, y ∈ {10, 01}
    let pairs = [([1, 0], [1, 0]), ([0, 1], [0, 1]), ([1, 0], [0, 1]), ([0, 1], [1, 0])];
    let mut factors = Vec::new();
    let mut grades = Vec::new();
    for (x, y) in pairs {
        let f0 = site(x[0], y[0]) * c(s);
        let f1 = site(x[1], y[1]);
        let (fa, fb) = if a_site == 0 { (f0, f1) } else { (f1, f0) };
        factors.push((fa, fb));
        grades.push(Some(y[a_site] as i64 - x[a_site] as i64));
    }
    let channel = KrausChannel::from_factors(&basis, &partition, factors)?.with_grades(grades)?;
    Ok((basis, partition, channel))
}

/// `a|10⟩⟨10| + (1−a)|01⟩⟨01| + b|10⟩⟨01| + b*|01⟩⟨10|` on the
/// one-particle sector of two sites.
pub fn swap_mixing_input(a: f64, b: num_complex::Complex64) -> Result<DensityOperator> {
    let basis = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, Some(1))?);
    let i10 = basis.index_of(&[1, 0]).expect("state in sector");
    let i01 = basis.index_of(&[0, 1]).expect("state in sector");
    let mut m = CMatrix::zeros(2, 2);
    m[(i10, i10)] = c(a);
    m[(i01, i01)] = c(1.0 - a);
    m[(i10, i01)] = b;
    m[(i01, i10)] = b.conj();
    DensityOperator::new(basis, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn swap_mixing_channel_is_valid_with_expected_grades() {
        let (basis, a, k) = swap_mixing_channel(1).unwrap();
        let report = validate_channel(&k, &basis, &a).unwrap();
        assert!(report.is_valid(), "{:?}", report.failures);
        assert_eq!(report.inferred_grades(), vec![Some(0), Some(0), Some(1), Some(-1)]);
        let (basis, a, k) = swap_mixing_channel(0).unwrap();
        let report = validate_channel(&k, &basis, &a).unwrap();
        assert!(report.is_valid(), "{:?}", report.failures);
        assert_eq!(report.inferred_grades(), vec![Some(0), Some(0), Some(-1), Some(1)]);
    }

    #[test]
    fn swap_mixing_output_is_maximally_mixed() {
        let (_, a, k) = swap_mixing_channel(0).unwrap();
        let rho = swap_mixing_input(0.5, Complex64::new(0.4, 0.0)).unwrap();
        let out = apply_channel(&rho, &k).unwrap();
        assert!(linalg::max_abs(&(out.matrix() - linalg::identity(2) * c(0.5))) < 1e-15);
        let m = monotonicity_check(&rho, &k, &a).unwrap();
        assert!(m.before > 0.1 && m.after.abs() < 1e-12 && m.non_increasing);
    }

    #[test]
    fn total_charge_violation_is_reported() {
        let basis = OccupationBasis::new(2, Statistics::HardcoreBoson, None).unwrap();
        let a = Bipartition::prefix(2, 1).unwrap();
        let mut bad = CMatrix::zeros(4, 4);
        bad[(1, 0)] = c(1.0); // |01⟩⟨00|
        let k = KrausChannel::new(vec![bad]);
        let report = validate_channel(&k, &basis, &a).unwrap();
        assert!(report.failures.iter().any(|f| f.starts_with("symmetry")));
        assert!(report.failures.iter().any(|f| f.starts_with("completeness")));
    }

    #[test]
    fn incomplete_channel_is_refused() {
        let rho = swap_mixing_input(0.3, c(0.1)).unwrap();
        let k = KrausChannel::new(vec![linalg::identity(2) * c(0.5)]);
        assert!(matches!(apply_channel(&rho, &k), Err(Error::IncompleteChannel(_))));
    }

    #[test]
    fn random_channels_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let basis = OccupationBasis::new(3, Statistics::HardcoreBoson, None).unwrap();
        let a = Bipartition::prefix(3, 1).unwrap();
        for _ in 0..10 {
            let k = random_graded_channel(&basis, &a, 3, &mut rng).unwrap();
            let report = validate_channel(&k, &basis, &a).unwrap();
            assert!(report.is_valid(), "{:?}", report.failures);
        }
    }
}
