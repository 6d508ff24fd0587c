//! Entropy functionals and the number-entanglement witness.
//!
//! Everything is in nats. The witness `ΔS_m = S(ρ_m) − S(ρ)` compares a
//! state with its image under an unselective measurement of the subsystem
//! charge `N̂_A`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbert::{self, Bipartition, ChargeMap, DensityOperator, OccupationBasis};
use crate::linalg::{self, CMatrix, CVector};

/// Treatment of small and slightly negative eigenvalues in `−Σ λ log λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralClamp {
    /// Eigenvalues with `|λ| ≤ floor` contribute exactly zero.
    pub eigenvalue_floor: f64,
    /// Eigenvalues below `−psd_tolerance` are a positivity violation.
    pub psd_tolerance: f64,
}

impl Default for SpectralClamp {
    fn default() -> Self {
        Self {
            eigenvalue_floor: 1e-12,
            psd_tolerance: hilbert::PSD_TOL,
        }
    }
}

impl SpectralClamp {
    pub fn entropy(&self, eigenvalues: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for &lambda in eigenvalues {
            if lambda < -self.psd_tolerance {
                return Err(Error::NotPositive(lambda));
            }
            if lambda > self.eigenvalue_floor {
                s -= lambda * lambda.ln();
            }
        }
        Ok(s)
    }
}

/// `−Σ p log p`, skipping zero entries.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// `S(ρ) = −Tr ρ log ρ`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    SpectralClamp::default().entropy(&rho.eigenvalues())
}

/// `S₂(ρ) = −log Tr ρ²`.
pub fn renyi2_entropy(rho: &DensityOperator) -> f64 {
    -purity(rho.matrix()).ln()
}

/// `Tr ρ²` for Hermitian `ρ`, as the squared Frobenius norm.
pub(crate) fn purity(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// One row of the per-sector table of a [`WitnessReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct SectorEntropy {
    pub subsystem_charge: usize,
    pub probability: f64,
    /// Entropy of the normalized block `ρ(N_A)`.
    pub block_entropy: f64,
}

/// Result of [`number_entanglement`].
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub s_rho: f64,
    pub s_rho_m: f64,
    pub delta_s_m: f64,
    pub sectors: Vec<SectorEntropy>,
    /// `max |[ρ, N̂]_{ij}|`; the witness only certifies inseparability when
    /// this vanishes.
    pub charge_commutator_norm: f64,
}

impl WitnessReport {
    /// Whether `[ρ, N̂] = 0` within `1e-10`.
    pub fn is_symmetric(&self) -> bool {
        self.charge_commutator_norm <= 1e-10
    }
}

/// Eigenvalues of each label block of `m`, keyed by label.
fn block_spectra(m: &CMatrix, labels: &[usize]) -> BTreeMap<usize, Vec<f64>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &q) in labels.iter().enumerate() {
        groups.entry(q).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(q, idx)| {
            let d = idx.len();
            let block = CMatrix::from_fn(d, d, |i, j| m[(idx[i], idx[j])]);
            (q, linalg::eigvalsh(&block))
        })
        .collect()
}

/// Entropy change under the unselective measurement whose outcomes are the
/// basis-state `labels`.
pub fn measurement_entropy_change(rho: &DensityOperator, labels: &[usize]) -> Result<f64> {
    let clamp = SpectralClamp::default();
    let s_rho = clamp.entropy(&rho.eigenvalues())?;
    let mut s_m = 0.0;
    for spectrum in block_spectra(rho.matrix(), labels).values() {
        s_m += clamp.entropy(spectrum)?;
    }
    Ok(s_m - s_rho)
}

/// The number-entanglement witness `ΔS_m` with its per-sector breakdown.
///
/// Non-symmetric inputs are evaluated anyway; check
/// [`WitnessReport::is_symmetric`] before reading the result as a witness.
pub fn number_entanglement(rho: &DensityOperator, partition: &Bipartition) -> Result<WitnessReport> {
    rho.basis().check_partition(partition)?;
    let clamp = SpectralClamp::default();
    let labels = ChargeMap::new(rho.basis(), partition).subsystem;
    let s_rho = clamp.entropy(&rho.eigenvalues())?;

    let mut s_rho_m = 0.0;
    let mut sectors = Vec::new();
    for (q, spectrum) in block_spectra(rho.matrix(), &labels) {
        s_rho_m += clamp.entropy(&spectrum)?;
        let p: f64 = spectrum.iter().sum();
        let block_entropy = if p > 1e-14 {
            let normalized: Vec<f64> = spectrum.iter().map(|x| x / p).collect();
            clamp.entropy(&normalized)?
        } else {
            0.0
        };
        sectors.push(SectorEntropy {
            subsystem_charge: q,
            probability: p,
            block_entropy,
        });
    }

    let charge_commutator_norm = rho.total_charge_commutator_norm();
    if charge_commutator_norm > 1e-10 {
        log::warn!(
            "state not symmetric ([ρ,N] = {charge_commutator_norm:.2e}), witness not meaningful"
        );
    }
    Ok(WitnessReport {
        s_rho,
        s_rho_m,
        delta_s_m: s_rho_m - s_rho,
        sectors,
        charge_commutator_norm,
    })
}

/// `ΔS₂ = S₂(ρ_m) − S₂(ρ)` from the measured state itself.
pub fn delta_renyi2(rho: &DensityOperator, partition: &Bipartition) -> f64 {
    let labels = ChargeMap::new(rho.basis(), partition).subsystem;
    let full = purity(rho.matrix());
    let kept = purity(&hilbert::dephase_by_labels(rho.matrix(), &labels));
    (full / kept).ln()
}

/// `ΔS₂` from `Tr ρ_m² = (1/M) Σ_k Tr(ρ e^{−iu_k N̂_A} ρ e^{iu_k N̂_A})` on a
/// uniform grid of `M = 2(capacity(A) + 1)` phases.
///
/// The phase average is exact because subsystem charges are integers. For a
/// thermal state this is the phase-integral form of `Tr ρ_m²` evaluated on
/// the operator level.
pub fn delta_renyi2_phase_sum(rho: &DensityOperator, partition: &Bipartition) -> f64 {
    let charges = ChargeMap::new(rho.basis(), partition).subsystem;
    let m = 2 * (rho.basis().capacity(partition) + 1);
    let dim = rho.dimension();
    let mut acc = 0.0;
    for k in 0..m {
        let u = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let phase: Vec<num_complex::Complex64> = charges
            .iter()
            .map(|&q| num_complex::Complex64::from_polar(1.0, -u * q as f64))
            .collect();
        let mut rotated = rho.matrix().clone();
        for j in 0..dim {
            for i in 0..dim {
                rotated[(i, j)] *= phase[i] * phase[j].conj();
            }
        }
        // Tr(ρ R) with R Hermitian
        let tr: num_complex::Complex64 = rho
            .matrix()
            .iter()
            .zip(rotated.transpose().iter())
            .map(|(a, b)| a * b)
            .sum();
        acc += tr.re;
    }
    let tr_m2 = acc / m as f64;
    (purity(rho.matrix()) / tr_m2).ln()
}

/// A relative entropy that may diverge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    /// `supp ρ ⊄ supp σ`.
    Infinite,
}

impl RelativeEntropy {
    pub fn value(&self) -> f64 {
        match self {
            RelativeEntropy::Finite(v) => *v,
            RelativeEntropy::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RelativeEntropy::Finite(_))
    }
}

/// `S(ρ‖σ) = Tr ρ log ρ − Tr ρ log σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<RelativeEntropy> {
    if rho.dimension() != sigma.dimension() {
        return Err(Error::DimensionMismatch {
            expected: rho.dimension(),
            found: sigma.dimension(),
        });
    }
    let clamp = SpectralClamp::default();
    let neg_s_rho = -clamp.entropy(&rho.eigenvalues())?;
    let (values, vectors) = linalg::eigh(sigma.matrix());
    let mut cross = 0.0;
    let mut outside_support = 0.0;
    for (k, &s) in values.iter().enumerate() {
        if s < -clamp.psd_tolerance {
            return Err(Error::NotPositive(s));
        }
        let v = vectors.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if s > clamp.eigenvalue_floor {
            cross += weight * s.ln();
        } else {
            outside_support += weight;
        }
    }
    if outside_support > 1e-10 {
        return Ok(RelativeEntropy::Infinite);
    }
    Ok(RelativeEntropy::Finite(neg_s_rho - cross))
}

/// Charge distribution `P(N_A)` of a pure state, keyed by `N_A`.
pub fn subsystem_charge_distribution(
    basis: &OccupationBasis,
    psi: &CVector,
    partition: &Bipartition,
) -> BTreeMap<usize, f64> {
    let mut dist = BTreeMap::new();
    for (i, amp) in psi.iter().enumerate() {
        *dist.entry(basis.subsystem_charge(i, partition)).or_insert(0.0) += amp.norm_sqr();
    }
    dist
}

/// Number entropy `−Σ P(N_A) log P(N_A)` of a pure state.
pub fn number_entropy_pure(basis: &OccupationBasis, psi: &CVector, partition: &Bipartition) -> f64 {
    let dist = subsystem_charge_distribution(basis, psi, partition);
    shannon_entropy(&dist.values().copied().collect::<Vec<_>>())
}

/// Decomposition `ΔS_m = H₁ + Σ P(N_A)[S(ρ(N_A)) − S(ρ)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SreDecomposition {
    /// Shannon entropy of the subsystem charge distribution.
    pub number_entropy: f64,
    /// `Σ P(N_A)[S(ρ(N_A)) − S(ρ)]`.
    pub weighted_term: f64,
    pub delta_s_m: f64,
}

pub fn sre_decomposition(rho: &DensityOperator, partition: &Bipartition) -> Result<SreDecomposition> {
    let report = number_entanglement(rho, partition)?;
    let probabilities: Vec<f64> = report.sectors.iter().map(|s| s.probability).collect();
    let number_entropy = shannon_entropy(&probabilities);
    let weighted_term = report
        .sectors
        .iter()
        .filter(|s| s.probability > 1e-14)
        .map(|s| s.probability * (s.block_entropy - report.s_rho))
        .sum::<f64>();
    Ok(SreDecomposition {
        number_entropy,
        weighted_term,
        delta_s_m: number_entropy + weighted_term,
    })
}

/// Pure-state split of the entanglement entropy,
/// `S(ρ_A) = H₁ + Σ P(N_A) S(ρ_A(N_A))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureStateSre {
    pub entanglement_entropy: f64,
    pub number_entropy: f64,
    /// `Σ P(N_A) S(ρ_A(N_A))`, the configurational part.
    pub configurational_entropy: f64,
}

pub fn pure_state_sre(
    basis: &OccupationBasis,
    psi: &CVector,
    partition: &Bipartition,
) -> Result<PureStateSre> {
    let (configs, rho_a) = reduced_pure(basis, psi, partition);
    let labels: Vec<usize> = configs
        .iter()
        .map(|c| c.iter().map(|&x| x as usize).sum())
        .collect();
    let clamp = SpectralClamp::default();
    let entanglement_entropy = clamp.entropy(&linalg::eigvalsh(&rho_a))?;
    let mut number_entropy = 0.0;
    let mut configurational_entropy = 0.0;
    for spectrum in block_spectra(&rho_a, &labels).values() {
        let p: f64 = spectrum.iter().sum();
        if p > 1e-14 {
            number_entropy -= p * p.ln();
            let normalized: Vec<f64> = spectrum.iter().map(|x| x / p).collect();
            configurational_entropy += p * clamp.entropy(&normalized)?;
        }
    }
    Ok(PureStateSre {
        entanglement_entropy,
        number_entropy,
        configurational_entropy,
    })
}

/// `Tr_B |ψ⟩⟨ψ|` on the configurations of `A` that occur in `basis`.
fn reduced_pure(
    basis: &OccupationBasis,
    psi: &CVector,
    partition: &Bipartition,
) -> (Vec<Vec<u8>>, CMatrix) {
    let mut a_index: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut b_index: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let split: Vec<(Vec<u8>, Vec<u8>)> = basis
        .states()
        .iter()
        .map(|s| {
            let a: Vec<u8> = partition.a_sites().iter().map(|&i| s[i]).collect();
            let b: Vec<u8> = partition.b_sites().iter().map(|&i| s[i]).collect();
            (a, b)
        })
        .collect();
    for (a, b) in &split {
        a_index.entry(a.clone()).or_insert(0);
        b_index.entry(b.clone()).or_insert(0);
    }
    for (k, v) in a_index.values_mut().enumerate() {
        *v = k;
    }
    for (k, v) in b_index.values_mut().enumerate() {
        *v = k;
    }
    // ψ as an |A| × |B| coefficient matrix
    let mut coeff = CMatrix::zeros(a_index.len(), b_index.len());
    for (i, (a, b)) in split.iter().enumerate() {
        coeff[(a_index[a], b_index[b])] = psi[i];
    }
    let rho_a = &coeff * coeff.adjoint();
    (a_index.into_keys().collect(), rho_a)
}

/// Basis-state labels combining the subsystem charge of several independently
/// conserved flavours, each described by its own bipartition of the sites.
pub fn flavor_resolved_labels(basis: &OccupationBasis, partitions: &[Bipartition]) -> Vec<usize> {
    let base = basis.num_sites() * basis.statistics().max_occupation() as usize + 1;
    (0..basis.dimension())
        .map(|i| {
            partitions
                .iter()
                .fold(0, |acc, p| acc * base + basis.subsystem_charge(i, p))
        })
        .collect()
}

/// Entropy change under a measurement of the subsystem fermion parity
/// `(−1)^{N_A}`.
pub fn parity_entanglement(rho: &DensityOperator, partition: &Bipartition) -> Result<f64> {
    let labels: Vec<usize> = ChargeMap::new(rho.basis(), partition)
        .subsystem
        .iter()
        .map(|q| q % 2)
        .collect();
    measurement_entropy_change(rho, &labels)
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::hilbert::{project_subsystem_charge, Bipartition};
    use crate::sampling::testkit::{config, random_partition, random_statistics, rng, symmetric_case};
    use crate::sampling::{random_symmetric_local_unitary, random_symmetric_separable, random_symmetric_state};
    use proptest::prelude::*;
    use rand::Rng;
    use std::sync::Arc;

    fn witness(rho: &DensityOperator, a: &Bipartition) -> f64 {
        number_entanglement(rho, a).unwrap().delta_s_m
    }

    proptest! {
        #![proptest_config(config(200))]

        #[test]
        fn witness_is_non_negative(seed in any::<u64>()) {
            let (_, a, rho) = symmetric_case(seed, 4);
            prop_assert!(witness(&rho, &a) >= -1e-10);
        }

        #[test]
        fn witness_is_relative_entropy_to_measured_state(seed in any::<u64>()) {
            let (_, a, rho) = symmetric_case(seed, 4);
            let rho_m = project_subsystem_charge(&rho, &a);
            let rel = relative_entropy(&rho, &rho_m).unwrap();
            prop_assert!(rel.is_finite());
            prop_assert!((rel.value() - witness(&rho, &a)).abs() < 1e-9);
        }

        #[test]
        fn symmetric_separable_states_vanish(seed in any::<u64>()) {
            let mut r = rng(seed);
            let l = r.random_range(2..=4);
            let basis = Arc::new(OccupationBasis::new(l, random_statistics(&mut r), None).unwrap());
            let a = random_partition(l, &mut r);
            let rho = random_symmetric_separable(&basis, &a, &mut r).unwrap();
            prop_assert!(witness(&rho, &a) <= 1e-10);
        }

        #[test]
        fn invariant_under_symmetric_local_unitaries(seed in any::<u64>()) {
            let (basis, a, rho) = symmetric_case(seed, 4);
            let u = random_symmetric_local_unitary(&basis, &a, &mut rng(!seed)).unwrap();
            let rotated = rho.conjugate_by(&u);
            prop_assert!((witness(&rotated, &a) - witness(&rho, &a)).abs() < 1e-9);
        }

        #[test]
        fn a_and_b_give_the_same_witness(seed in any::<u64>()) {
            let (_, a, rho) = symmetric_case(seed, 4);
            prop_assert!((witness(&rho, &a) - witness(&rho, &a.complement())).abs() < 1e-9);
        }

        #[test]
        fn additive_over_independent_flavours(seed in any::<u64>()) {
            let mut r = rng(seed);
            let stats = random_statistics(&mut r);
            let (l1, l2) = (r.random_range(2..=3), 2);
            let b1 = Arc::new(OccupationBasis::new(l1, stats, None).unwrap());
            let b2 = Arc::new(OccupationBasis::new(l2, stats, None).unwrap());
            let (a1, a2) = (random_partition(l1, &mut r), random_partition(l2, &mut r));
            let rho1 = random_symmetric_state(&b1, &mut r);
            let rho2 = random_symmetric_state(&b2, &mut r);
            let joint = rho1.tensor(&rho2).unwrap();
            let shifted: Vec<usize> = a2.a_sites().iter().map(|s| s + l1).collect();
            let flavours = [
                Bipartition::new(l1 + l2, a1.a_sites()).unwrap(),
                Bipartition::new(l1 + l2, &shifted).unwrap(),
            ];
            let labels = flavor_resolved_labels(joint.basis(), &flavours);
            let total = measurement_entropy_change(&joint, &labels).unwrap();
            prop_assert!((total - witness(&rho1, &a1) - witness(&rho2, &a2)).abs() < 1e-9);
        }
    }
}
