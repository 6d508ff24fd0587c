//! Partial transposes and negativities.
//!
//! The bosonic partial transpose swaps the subsystem-`A` occupations of the
//! ket and the bra. Starting from a fixed-charge basis this leaves the
//! sector, so the result always lives on the unconstrained product basis
//! with the same per-site cap.
//!
//! The fermionic partial transpose additionally multiplies each element by
//! `(−1)^φ` with
//! `φ = [(τ_A + τ̄_A) mod 2]/2 + (τ_A + τ̄_A)(τ_B + τ̄_B)`, where `τ` and
//! `τ̄` count particles in the ket and the bra. The half-integer power is
//! taken as `(−1)^{1/2} = −i`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    project_subsystem_charge, total_charge_sectors, Bipartition, DensityOperator,
    OccupationBasis, HERMITIAN_TOL,
};
use crate::linalg::{self, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransposeFlavor {
    Bosonic,
    Fermionic,
}

#[derive(Clone, Debug)]
pub struct PartialTransposeResult {
    pub operator: CMatrix,
    pub flavor: TransposeFlavor,
    /// Basis the operator acts on.
    pub basis: Arc<OccupationBasis>,
}

impl PartialTransposeResult {
    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.operator)
    }

    /// `Σ|λ|` for the bosonic flavor, the sum of singular values otherwise.
    pub fn trace_norm(&self) -> f64 {
        match self.flavor {
            TransposeFlavor::Bosonic => linalg::eigvalsh(&self.operator).iter().map(|l| l.abs()).sum(),
            TransposeFlavor::Fermionic => linalg::trace_norm(&self.operator),
        }
    }

    /// Logarithm of the trace norm relative to the trace.
    ///
    /// In the Hermitian case this is `log(1 + 2Σ|λ₋|/Tr)`, which is exactly
    /// zero when no eigenvalue is negative.
    pub fn log_negativity(&self) -> f64 {
        match self.flavor {
            TransposeFlavor::Bosonic => {
                let eig = linalg::eigvalsh(&self.operator);
                let trace: f64 = eig.iter().sum();
                let negative: f64 = eig.iter().filter(|l| **l < 0.0).map(|l| -l).sum();
                (2.0 * negative / trace).ln_1p()
            }
            TransposeFlavor::Fermionic => self.trace_norm().ln().max(0.0),
        }
    }
}

fn swap_subsystem(ket: &[u8], bra: &[u8], partition: &Bipartition) -> (Vec<u8>, Vec<u8>) {
    let mut new_ket = ket.to_vec();
    let mut new_bra = bra.to_vec();
    for &s in partition.a_sites() {
        new_ket[s] = bra[s];
        new_bra[s] = ket[s];
    }
    (new_ket, new_bra)
}

/// Transposes an arbitrary operator on `basis`, weighting each element with
/// `phase(ket, bra)`.
fn transpose_with(
    basis: &OccupationBasis,
    m: &CMatrix,
    partition: &Bipartition,
    phase: impl Fn(&[u8], &[u8]) -> Complex64,
) -> Result<(Arc<OccupationBasis>, CMatrix)> {
    basis.check_partition(partition)?;
    let full = if basis.fixed_total_charge().is_some() {
        Arc::new(basis.unconstrained()?)
    } else {
        Arc::new(basis.clone())
    };
    let d = full.dimension();
    let mut out = CMatrix::zeros(d, d);
    for (i, ket) in basis.states().iter().enumerate() {
        for (j, bra) in basis.states().iter().enumerate() {
            let v = m[(i, j)];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let (k, b) = swap_subsystem(ket, bra, partition);
            let ki = full.index_of(&k).expect("swapped state within product basis");
            let bi = full.index_of(&b).expect("swapped state within product basis");
            out[(ki, bi)] += v * phase(ket, bra);
        }
    }
    Ok((full, out))
}

/// Bosonic partial transpose `ρ^{T_A}`.
pub fn partial_transpose(
    rho: &DensityOperator,
    partition: &Bipartition,
) -> Result<PartialTransposeResult> {
    partial_transpose_matrix(rho.basis(), rho.matrix(), partition)
}

/// Bosonic partial transpose of any operator on `basis`.
pub fn partial_transpose_matrix(
    basis: &OccupationBasis,
    m: &CMatrix,
    partition: &Bipartition,
) -> Result<PartialTransposeResult> {
    let (basis, operator) = transpose_with(basis, m, partition, |_, _| Complex64::new(1.0, 0.0))?;
    Ok(PartialTransposeResult {
        operator,
        flavor: TransposeFlavor::Bosonic,
        basis,
    })
}

/// `log ‖ρ^{T_A}‖₁` for bosonic or spin degrees of freedom.
pub fn log_negativity(rho: &DensityOperator, partition: &Bipartition) -> Result<f64> {
    if rho.basis().statistics().is_fermionic() {
        return Err(Error::StatisticsMismatch {
            expected: "bosonic",
        });
    }
    Ok(partial_transpose(rho, partition)?.log_negativity())
}

fn count(state: &[u8], sites: &[usize]) -> u32 {
    sites.iter().map(|&s| state[s] as u32).sum()
}

/// `(−1)^φ` for the fermionic partial transpose.
fn fermionic_phase(ket: &[u8], bra: &[u8], partition: &Bipartition) -> Complex64 {
    let ta = count(ket, partition.a_sites()) + count(bra, partition.a_sites());
    let tb = count(ket, partition.b_sites()) + count(bra, partition.b_sites());
    let quarter = if ta % 2 == 1 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    if (ta * tb) % 2 == 1 {
        -quarter
    } else {
        quarter
    }
}

/// Fermionic partial transpose `ρ^{R_A}`; `A` must be a prefix of the
/// Jordan–Wigner ordering.
pub fn fermionic_partial_transpose(
    rho: &DensityOperator,
    partition: &Bipartition,
) -> Result<PartialTransposeResult> {
    if !rho.basis().statistics().is_fermionic() {
        return Err(Error::StatisticsMismatch {
            expected: "fermionic",
        });
    }
    if !partition.is_prefix() {
        return Err(Error::UnsupportedLayout(
            "fermionic partial transpose needs subsystem A to be a prefix of the site order".into(),
        ));
    }
    let (basis, operator) = transpose_with(rho.basis(), rho.matrix(), partition, |k, b| {
        fermionic_phase(k, b, partition)
    })?;
    Ok(PartialTransposeResult {
        operator,
        flavor: TransposeFlavor::Fermionic,
        basis,
    })
}

/// `ln Tr √(ρ^{R_A} ρ^{R_A†})`.
pub fn fermionic_negativity(rho: &DensityOperator, partition: &Bipartition) -> Result<f64> {
    Ok(fermionic_partial_transpose(rho, partition)?.log_negativity())
}

/// Negativity appropriate to the statistics of the basis.
pub fn negativity(rho: &DensityOperator, partition: &Bipartition) -> Result<f64> {
    if rho.basis().statistics().is_fermionic() {
        fermionic_negativity(rho, partition)
    } else {
        log_negativity(rho, partition)
    }
}

/// `ρ = ρ_d + ρ_o`, blocks diagonal and off-diagonal in `N_A`.
pub fn split_subsystem_blocks(rho: &DensityOperator, partition: &Bipartition) -> (CMatrix, CMatrix) {
    let d = project_subsystem_charge(rho, partition).into_matrix();
    let o = rho.matrix() - &d;
    (d, o)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorNegativity {
    pub total_charge: usize,
    pub probability: f64,
    pub log_negativity: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SectorNegativityTable {
    pub rows: Vec<SectorNegativity>,
}

impl SectorNegativityTable {
    pub fn max_negativity(&self) -> f64 {
        self.rows.iter().map(|r| r.log_negativity).fold(0.0, f64::max)
    }

    pub fn row(&self, total_charge: usize) -> Option<&SectorNegativity> {
        self.rows.iter().find(|r| r.total_charge == total_charge)
    }
}

/// Negativity of every normalized total-charge block. Fermionic bases use
/// the fermionic partial transpose.
pub fn sector_negativities(
    rho: &DensityOperator,
    partition: &Bipartition,
) -> Result<SectorNegativityTable> {
    let dev = rho.total_charge_commutator_norm();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotSymmetric(dev));
    }
    let mut rows = Vec::new();
    for (n, p, block) in total_charge_sectors(rho) {
        rows.push(SectorNegativity {
            total_charge: n,
            probability: p,
            log_negativity: negativity(&block, partition)?,
        });
    }
    Ok(SectorNegativityTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Statistics;
    use crate::linalg::c;

    fn hardcore(l: usize) -> Arc<OccupationBasis> {
        Arc::new(OccupationBasis::new(l, Statistics::HardcoreBoson, None).unwrap())
    }

    fn singlet() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = crate::linalg::CVector::from_vec(vec![c(0.0), c(s), c(-s), c(0.0)]);
        DensityOperator::from_pure(hardcore(2), &psi).unwrap()
    }

    #[test]
    fn bell_state_has_log_two() {
        let a = Bipartition::prefix(2, 1).unwrap();
        let n = log_negativity(&singlet(), &a).unwrap();
        assert!((n - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn transpose_is_involution() {
        let rho = singlet();
        let a = Bipartition::prefix(2, 1).unwrap();
        let once = partial_transpose(&rho, &a).unwrap();
        let twice = partial_transpose_matrix(&once.basis, &once.operator, &a).unwrap();
        assert!(linalg::max_abs(&(twice.operator - rho.matrix())) < 1e-15);
    }

    #[test]
    fn sector_basis_is_embedded() {
        let basis = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, Some(1)).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = crate::linalg::CVector::from_vec(vec![c(s), c(s)]);
        let rho = DensityOperator::from_pure(basis, &psi).unwrap();
        let pt = partial_transpose(&rho, &Bipartition::prefix(2, 1).unwrap()).unwrap();
        assert_eq!(pt.basis.dimension(), 4);
        assert!((pt.log_negativity() - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn fermionic_rejects_non_prefix() {
        let basis = Arc::new(OccupationBasis::new(3, Statistics::Fermion, None).unwrap());
        let rho = DensityOperator::maximally_mixed(basis);
        let a = Bipartition::new(3, &[1]).unwrap();
        assert!(matches!(
            fermionic_partial_transpose(&rho, &a),
            Err(Error::UnsupportedLayout(_))
        ));
        assert!(matches!(
            log_negativity(&rho, &Bipartition::prefix(3, 1).unwrap()),
            Err(Error::StatisticsMismatch { .. })
        ));
    }

    #[test]
    fn fermionic_phase_table() {
        let a = Bipartition::prefix(2, 1).unwrap();
        // |01⟩⟨10| has one particle on each side in ket and bra
        let p = fermionic_phase(&[0, 1], &[1, 0], &a);
        assert!((p - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((fermionic_phase(&[0, 0], &[0, 0], &a) - c(1.0)).norm() < 1e-15);
        assert!((fermionic_phase(&[1, 1], &[1, 1], &a) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn off_diagonal_part_is_traceless_after_transpose() {
        let rho = singlet();
        let a = Bipartition::prefix(2, 1).unwrap();
        let (_, o) = split_subsystem_blocks(&rho, &a);
        let pt = partial_transpose_matrix(rho.basis(), &o, &a).unwrap();
        assert!(pt.trace().norm() < 1e-15);
        assert!(linalg::eigvalsh(&pt.operator)[0] < -0.4);
    }

    #[test]
    fn non_symmetric_state_rejected_by_sector_table() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = crate::linalg::CVector::from_vec(vec![c(s), c(s), c(0.0), c(0.0)]);
        let rho = DensityOperator::from_pure(hardcore(2), &psi).unwrap();
        assert!(matches!(
            sector_negativities(&rho, &Bipartition::prefix(2, 1).unwrap()),
            Err(Error::NotSymmetric(_))
        ));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::entropy::number_entanglement;
    use crate::hilbert::Statistics;
    use crate::sampling::random_symmetric_state;
    use crate::sampling::testkit::{config, random_partition, rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn bosonic_statistics<R: Rng + ?Sized>(r: &mut R) -> Statistics {
        if r.random_bool(0.5) {
            Statistics::HardcoreBoson
        } else {
            Statistics::Boson { cap: 2 }
        }
    }

    /// Random fixed-`N` state; dephased in `N_A` when `dephase` is set.
    fn fixed_n_case(seed: u64, single_site: bool) -> (DensityOperator, Bipartition, bool) {
        let mut r = rng(seed);
        let l = r.random_range(2..=3);
        let stats = bosonic_statistics(&mut r);
        let n = r.random_range(1..=l);
        let basis = Arc::new(OccupationBasis::new(l, stats, Some(n)).unwrap());
        let a = if single_site {
            Bipartition::new(l, &[r.random_range(0..l)]).unwrap()
        } else {
            random_partition(l, &mut r)
        };
        let rho = random_symmetric_state(&basis, &mut r);
        let dephase = r.random_bool(0.5);
        let rho = if dephase { project_subsystem_charge(&rho, &a) } else { rho };
        (rho, a, dephase)
    }

    proptest! {
        #![proptest_config(config(200))]

        #[test]
        fn zero_negativity_implies_zero_witness_at_fixed_n(seed in any::<u64>()) {
            let (rho, a, _) = fixed_n_case(seed, false);
            let neg = log_negativity(&rho, &a).unwrap();
            let ds = number_entanglement(&rho, &a).unwrap().delta_s_m;
            prop_assert!(neg > 1e-10 || ds < 1e-10, "𝒩 = {neg}, ΔS_m = {ds}");
        }

        #[test]
        fn single_site_negativity_and_witness_vanish_together(seed in any::<u64>()) {
            let (rho, a, dephased) = fixed_n_case(seed, true);
            let neg = log_negativity(&rho, &a).unwrap();
            let ds = number_entanglement(&rho, &a).unwrap().delta_s_m;
            let coherent = !dephased
                && crate::hilbert::ChargeMap::new(rho.basis(), &a).subsystem_spread() > 1;
            if !coherent {
                prop_assert!(neg < 1e-10 && ds.abs() < 1e-10, "𝒩 = {neg}, ΔS_m = {ds}");
            } else {
                prop_assert!(neg > 1e-10 && ds > 1e-10, "𝒩 = {neg}, ΔS_m = {ds}");
            }
        }

        #[test]
        fn off_diagonal_part_stays_traceless(seed in any::<u64>()) {
            let mut r = rng(seed);
            let l = r.random_range(2..=4);
            let basis = Arc::new(OccupationBasis::new(l, bosonic_statistics(&mut r), None).unwrap());
            let a = random_partition(l, &mut r);
            let rho = random_symmetric_state(&basis, &mut r);
            let (_, off) = split_subsystem_blocks(&rho, &a);
            let pt = partial_transpose_matrix(&basis, &off, &a).unwrap();
            prop_assert!(linalg::trace(&pt.operator).norm() < 1e-12);
        }

        #[test]
        fn witness_implies_sector_negativity(seed in any::<u64>()) {
            let mut r = rng(seed);
            let l = r.random_range(2..=4);
            let basis = Arc::new(OccupationBasis::new(l, bosonic_statistics(&mut r), None).unwrap());
            let a = random_partition(l, &mut r);
            let rho = random_symmetric_state(&basis, &mut r);
            let ds = number_entanglement(&rho, &a).unwrap().delta_s_m;
            if ds > 1e-8 {
                prop_assert!(sector_negativities(&rho, &a).unwrap().max_negativity() > 1e-8);
            }
        }
    }
}
