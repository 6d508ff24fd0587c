//! Occupation-number bases, charge operators and charge projections.
//!
//! States are occupation tuples ordered lexicographically with site 0 as the
//! most significant digit, so for two hard-core sites the order is
//! `|00⟩, |01⟩, |10⟩, |11⟩`. Sites are indexed from 0.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};

/// Default upper bound on the number of enumerated basis states.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 20;

/// Maximum elementwise deviation from hermiticity accepted for a state.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Accepted deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted as numerical noise.
pub const PSD_TOL: f64 = 1e-10;

/// Particle statistics of the lattice degrees of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistics {
    /// Spin-1/2 or hard-core bosons; spin up is an occupied site.
    HardcoreBoson,
    /// Spinless fermions with Jordan–Wigner ordering along site index.
    Fermion,
    /// Soft-core bosons with at most `cap` particles per site.
    Boson { cap: u8 },
}

impl Statistics {
    pub fn max_occupation(&self) -> u8 {
        match self {
            Statistics::HardcoreBoson | Statistics::Fermion => 1,
            Statistics::Boson { cap } => *cap,
        }
    }

    pub fn is_fermionic(&self) -> bool {
        matches!(self, Statistics::Fermion)
    }
}

/// Ordered enumeration of occupation states, optionally restricted to a
/// fixed total charge.
#[derive(Clone, Debug)]
pub struct OccupationBasis {
    num_sites: usize,
    statistics: Statistics,
    fixed_total_charge: Option<usize>,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl PartialEq for OccupationBasis {
    fn eq(&self, other: &Self) -> bool {
        self.num_sites == other.num_sites
            && self.statistics == other.statistics
            && self.fixed_total_charge == other.fixed_total_charge
            && self.states == other.states
    }
}

impl OccupationBasis {
    /// Builds a basis with the default dimension cap.
    pub fn new(
        num_sites: usize,
        statistics: Statistics,
        fixed_total_charge: Option<usize>,
    ) -> Result<Self> {
        Self::with_cap(num_sites, statistics, fixed_total_charge, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(
        num_sites: usize,
        statistics: Statistics,
        fixed_total_charge: Option<usize>,
        cap: usize,
    ) -> Result<Self> {
        if num_sites == 0 {
            return Err(Error::InvalidBasis("num_sites must be at least 1".into()));
        }
        let max_occ = statistics.max_occupation();
        if max_occ == 0 {
            return Err(Error::InvalidBasis("per-site cap must be at least 1".into()));
        }
        let dimension = count_states(num_sites, max_occ as usize, fixed_total_charge);
        if dimension > cap as u128 {
            return Err(Error::BasisTooLarge { dimension, cap });
        }
        let mut states = Vec::with_capacity(dimension as usize);
        let mut current = vec![0u8; num_sites];
        enumerate(0, fixed_total_charge, max_occ, &mut current, &mut states);
        Ok(Self::from_states(num_sites, statistics, fixed_total_charge, states))
    }

    /// Bosonic sector with exactly `n` particles; the per-site cap is `n`.
    pub fn boson_sector(num_sites: usize, n: usize) -> Result<Self> {
        let cap = u8::try_from(n.max(1))
            .map_err(|_| Error::InvalidBasis(format!("boson number {n} exceeds 255")))?;
        Self::new(num_sites, Statistics::Boson { cap }, Some(n))
    }

    fn from_states(
        num_sites: usize,
        statistics: Statistics,
        fixed_total_charge: Option<usize>,
        states: Vec<Vec<u8>>,
    ) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            num_sites,
            statistics,
            fixed_total_charge,
            states,
            index,
        }
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn fixed_total_charge(&self) -> Option<usize> {
        self.fixed_total_charge
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn index_of(&self, occupations: &[u8]) -> Option<usize> {
        self.index.get(occupations).copied()
    }

    pub fn total_charge(&self, i: usize) -> usize {
        self.states[i].iter().map(|&n| n as usize).sum()
    }

    /// Charge on `a_sites` summed over the occupation tuple of state `i`.
    pub fn subsystem_charge(&self, i: usize, partition: &Bipartition) -> usize {
        partition
            .a_sites()
            .iter()
            .map(|&s| self.states[i][s] as usize)
            .sum()
    }

    /// The same lattice without a total-charge constraint.
    pub fn unconstrained(&self) -> Result<Self> {
        Self::new(self.num_sites, self.statistics, None)
    }

    /// Sub-basis of states with total charge `n`, with their indices in `self`.
    pub fn sector(&self, n: usize) -> (OccupationBasis, Vec<usize>) {
        let indices: Vec<usize> = (0..self.dimension())
            .filter(|&i| self.total_charge(i) == n)
            .collect();
        let states = indices.iter().map(|&i| self.states[i].clone()).collect();
        (
            Self::from_states(self.num_sites, self.statistics, Some(n), states),
            indices,
        )
    }

    /// Distinct total charges present, ascending.
    pub fn total_charges(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.dimension()).map(|i| self.total_charge(i)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Largest possible charge inside `A`.
    pub fn capacity(&self, partition: &Bipartition) -> usize {
        let per_site = partition.a_sites().len() * self.statistics.max_occupation() as usize;
        match self.fixed_total_charge {
            Some(n) => per_site.min(n),
            None => per_site,
        }
    }

    pub fn check_partition(&self, partition: &Bipartition) -> Result<()> {
        if partition.num_sites() != self.num_sites {
            return Err(Error::InvalidPartition(format!(
                "partition is for {} sites, basis has {}",
                partition.num_sites(),
                self.num_sites
            )));
        }
        Ok(())
    }
}

fn count_states(num_sites: usize, max_occ: usize, fixed: Option<usize>) -> u128 {
    match fixed {
        None => (max_occ as u128 + 1).saturating_pow(num_sites as u32),
        Some(n) => {
            // ways[k] = number of tuples on the sites seen so far summing to k
            let mut ways = vec![0u128; n + 1];
            ways[0] = 1;
            for _ in 0..num_sites {
                let mut next = vec![0u128; n + 1];
                for (k, &w) in ways.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    for occ in 0..=max_occ.min(n - k) {
                        next[k + occ] = next[k + occ].saturating_add(w);
                    }
                }
                ways = next;
            }
            ways[n]
        }
    }
}

fn enumerate(
    site: usize,
    remaining: Option<usize>,
    max_occ: u8,
    current: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    let num_sites = current.len();
    if site == num_sites {
        if remaining.is_none_or(|r| r == 0) {
            out.push(current.clone());
        }
        return;
    }
    let sites_left = num_sites - site - 1;
    for occ in 0..=max_occ {
        if let Some(r) = remaining {
            if occ as usize > r {
                break;
            }
            if r - occ as usize > sites_left * max_occ as usize {
                continue;
            }
        }
        current[site] = occ;
        enumerate(
            site + 1,
            remaining.map(|r| r - occ as usize),
            max_occ,
            current,
            out,
        );
    }
    current[site] = 0;
}

/// Split of the lattice into subsystem `A` and its complement `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    num_sites: usize,
    a_sites: Vec<usize>,
    b_sites: Vec<usize>,
}

impl Bipartition {
    pub fn new(num_sites: usize, a_sites: &[usize]) -> Result<Self> {
        let mut a: Vec<usize> = a_sites.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.is_empty() {
            return Err(Error::InvalidPartition("subsystem A is empty".into()));
        }
        if let Some(&s) = a.iter().find(|&&s| s >= num_sites) {
            return Err(Error::InvalidPartition(format!(
                "site {s} outside a lattice of {num_sites} sites"
            )));
        }
        if a.len() == num_sites {
            return Err(Error::InvalidPartition("subsystem A covers every site".into()));
        }
        let b = (0..num_sites).filter(|s| a.binary_search(s).is_err()).collect();
        Ok(Self {
            num_sites,
            a_sites: a,
            b_sites: b,
        })
    }

    /// The first `len_a` sites.
    pub fn prefix(num_sites: usize, len_a: usize) -> Result<Self> {
        Self::new(num_sites, &(0..len_a).collect::<Vec<_>>())
    }

    /// A contiguous block of `len_a` sites centred in the chain.
    pub fn centered(num_sites: usize, len_a: usize) -> Result<Self> {
        let start = num_sites.saturating_sub(len_a) / 2;
        Self::new(num_sites, &(start..start + len_a).collect::<Vec<_>>())
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn a_sites(&self) -> &[usize] {
        &self.a_sites
    }

    pub fn b_sites(&self) -> &[usize] {
        &self.b_sites
    }

    pub fn contains(&self, site: usize) -> bool {
        self.a_sites.binary_search(&site).is_ok()
    }

    /// The bipartition with the roles of `A` and `B` exchanged.
    pub fn complement(&self) -> Self {
        Self {
            num_sites: self.num_sites,
            a_sites: self.b_sites.clone(),
            b_sites: self.a_sites.clone(),
        }
    }

    pub fn is_contiguous(&self) -> bool {
        self.a_sites.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn is_prefix(&self) -> bool {
        self.is_contiguous() && self.a_sites[0] == 0
    }

    /// Number of nearest-neighbour bonds of an open chain cut by the split.
    pub fn boundary_bonds(&self) -> usize {
        (0..self.num_sites.saturating_sub(1))
            .filter(|&i| self.contains(i) != self.contains(i + 1))
            .count()
    }
}

/// Total and subsystem charge of every basis state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeMap {
    pub total: Vec<usize>,
    pub subsystem: Vec<usize>,
}

impl ChargeMap {
    pub fn new(basis: &OccupationBasis, partition: &Bipartition) -> Self {
        let total = (0..basis.dimension()).map(|i| basis.total_charge(i)).collect();
        let subsystem = (0..basis.dimension())
            .map(|i| basis.subsystem_charge(i, partition))
            .collect();
        Self { total, subsystem }
    }

    /// Distinct subsystem charges, ascending.
    pub fn subsystem_values(&self) -> Vec<usize> {
        let mut v = self.subsystem.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `1 + max N_A − min N_A` over the basis.
    pub fn subsystem_spread(&self) -> usize {
        let min = self.subsystem.iter().min().copied().unwrap_or(0);
        let max = self.subsystem.iter().max().copied().unwrap_or(0);
        max - min + 1
    }
}

/// A density matrix on an occupation basis.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    basis: Arc<OccupationBasis>,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(basis: Arc<OccupationBasis>, matrix: CMatrix) -> Result<Self> {
        let rho = Self::new_unchecked(basis, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Only checks that the matrix matches the basis dimension.
    pub fn new_unchecked(basis: Arc<OccupationBasis>, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != basis.dimension() || matrix.ncols() != basis.dimension() {
            return Err(Error::DimensionMismatch {
                expected: basis.dimension(),
                found: matrix.nrows(),
            });
        }
        Ok(Self { basis, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn from_pure(basis: Arc<OccupationBasis>, psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidTrace(norm * norm));
        }
        Self::new_unchecked(basis, linalg::outer(psi, psi))
    }

    pub fn maximally_mixed(basis: Arc<OccupationBasis>) -> Self {
        let d = basis.dimension();
        let matrix = linalg::identity(d) * c(1.0 / d as f64);
        Self { basis, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let dev = linalg::hermiticity_deviation(&self.matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&self.matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    pub fn basis(&self) -> &OccupationBasis {
        &self.basis
    }

    pub fn basis_handle(&self) -> &Arc<OccupationBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.matrix)
    }

    /// Eigenvalues of the re-symmetrized matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// Same basis, new matrix; no validation.
    pub fn with_matrix(&self, matrix: CMatrix) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            matrix,
        }
    }

    /// `max |[ρ, N̂]_{ij}|`.
    pub fn total_charge_commutator_norm(&self) -> f64 {
        let n: Vec<f64> = (0..self.dimension())
            .map(|i| self.basis.total_charge(i) as f64)
            .collect();
        label_commutator_norm(&self.matrix, &n)
    }

    /// `max |[ρ, N̂_A]_{ij}|`.
    pub fn subsystem_charge_commutator_norm(&self, partition: &Bipartition) -> f64 {
        let n: Vec<f64> = (0..self.dimension())
            .map(|i| self.basis.subsystem_charge(i, partition) as f64)
            .collect();
        label_commutator_norm(&self.matrix, &n)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        self.with_matrix(linalg::hermitize(&(u * &self.matrix * u.adjoint())))
    }

    /// Tensor product with an operator on a second, independent lattice.
    /// Sites of `other` are appended after the sites of `self`.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        if self.basis.statistics() != other.basis.statistics() {
            return Err(Error::StatisticsMismatch {
                expected: "identical",
            });
        }
        let states: Vec<Vec<u8>> = self
            .basis
            .states()
            .iter()
            .flat_map(|s| {
                other.basis.states().iter().map(move |t| {
                    let mut v = s.clone();
                    v.extend_from_slice(t);
                    v
                })
            })
            .collect();
        let fixed = match (self.basis.fixed_total_charge(), other.basis.fixed_total_charge()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let basis = OccupationBasis::from_states(
            self.basis.num_sites() + other.basis.num_sites(),
            self.basis.statistics(),
            fixed,
            states,
        );
        DensityOperator::new_unchecked(Arc::new(basis), linalg::kron(&self.matrix, &other.matrix))
    }
}

fn label_commutator_norm(m: &CMatrix, labels: &[f64]) -> f64 {
    let n = labels.len();
    let mut norm: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            norm = norm.max(m[(i, j)].norm() * (labels[i] - labels[j]).abs());
        }
    }
    norm
}

/// Keeps only the elements whose row and column carry the same label.
pub(crate) fn dephase_by_labels(m: &CMatrix, labels: &[usize]) -> CMatrix {
    let n = labels.len();
    CMatrix::from_fn(n, n, |i, j| {
        if labels[i] == labels[j] {
            m[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `N̂` as a diagonal matrix.
pub fn total_charge_operator(basis: &OccupationBasis) -> CMatrix {
    let diag: Vec<f64> = (0..basis.dimension())
        .map(|i| basis.total_charge(i) as f64)
        .collect();
    linalg::diagonal(&diag)
}

/// `N̂_A` as a diagonal matrix.
pub fn subsystem_charge_operator(basis: &OccupationBasis, partition: &Bipartition) -> CMatrix {
    let diag: Vec<f64> = (0..basis.dimension())
        .map(|i| basis.subsystem_charge(i, partition) as f64)
        .collect();
    linalg::diagonal(&diag)
}

/// Projector `Π(N_A)` onto states with subsystem charge `n_a`.
pub fn subsystem_charge_projector(
    basis: &OccupationBasis,
    partition: &Bipartition,
    n_a: usize,
) -> CMatrix {
    let diag: Vec<f64> = (0..basis.dimension())
        .map(|i| f64::from(basis.subsystem_charge(i, partition) == n_a))
        .collect();
    linalg::diagonal(&diag)
}

/// Unselective measurement of the subsystem charge,
/// `ρ_m = Σ_{N_A} Π(N_A) ρ Π(N_A)`.
pub fn project_subsystem_charge(rho: &DensityOperator, partition: &Bipartition) -> DensityOperator {
    let labels = ChargeMap::new(rho.basis(), partition).subsystem;
    rho.with_matrix(dephase_by_labels(rho.matrix(), &labels))
}

/// `(1/M) Σ_k e^{iα_k N̂_A} ρ e^{−iα_k N̂_A}` with `α_k = 2πk/M − π`.
///
/// Equal to [`project_subsystem_charge`] whenever `M` is at least the number
/// of subsystem charge values spanned by the basis.
pub fn phase_average(
    rho: &DensityOperator,
    partition: &Bipartition,
    num_phases: usize,
) -> Result<DensityOperator> {
    let charges = ChargeMap::new(rho.basis(), partition);
    let spread = charges.subsystem_spread();
    if num_phases == 0 || (num_phases < spread && spread > 1) {
        return Err(Error::Aliasing {
            phases: num_phases,
            spread,
        });
    }
    let dim = rho.dimension();
    let mut acc = CMatrix::zeros(dim, dim);
    let weight = 1.0 / num_phases as f64;
    for k in 0..num_phases {
        let alpha = 2.0 * std::f64::consts::PI * k as f64 / num_phases as f64 - std::f64::consts::PI;
        let phases: Vec<Complex64> = charges
            .subsystem
            .iter()
            .map(|&q| Complex64::from_polar(1.0, alpha * q as f64))
            .collect();
        for j in 0..dim {
            for i in 0..dim {
                acc[(i, j)] += phases[i] * rho.matrix()[(i, j)] * phases[j].conj() * weight;
            }
        }
    }
    Ok(rho.with_matrix(acc))
}

/// Projects onto the total-charge-`n` sector and renormalizes.
///
/// Returns `p_N = Tr Π(N) ρ Π(N)` and the normalized block on the sector
/// sub-basis.
pub fn project_total_charge(rho: &DensityOperator, n: usize) -> Result<(f64, DensityOperator)> {
    let (sector, indices) = rho.basis().sector(n);
    let p: f64 = indices.iter().map(|&i| rho.matrix()[(i, i)].re).sum();
    if p < 1e-14 {
        return Err(Error::EmptySector(n));
    }
    let d = indices.len();
    let block = CMatrix::from_fn(d, d, |i, j| rho.matrix()[(indices[i], indices[j])] / p);
    Ok((p, DensityOperator::new_unchecked(Arc::new(sector), block)?))
}

/// Every non-empty total-charge sector as `(N, p_N, normalized block)`.
pub fn total_charge_sectors(rho: &DensityOperator) -> Vec<(usize, f64, DensityOperator)> {
    rho.basis()
        .total_charges()
        .into_iter()
        .filter_map(|n| project_total_charge(rho, n).ok().map(|(p, b)| (n, p, b)))
        .collect()
}

/// Embeds a sector operator back into `basis`, scaled by `weight`.
pub fn embed_sector(basis: &OccupationBasis, block: &DensityOperator, weight: f64) -> CMatrix {
    let d = basis.dimension();
    let mut out = CMatrix::zeros(d, d);
    let map: Vec<usize> = block
        .basis()
        .states()
        .iter()
        .map(|s| basis.index_of(s).expect("sector state missing from parent basis"))
        .collect();
    for (i, &gi) in map.iter().enumerate() {
        for (j, &gj) in map.iter().enumerate() {
            out[(gi, gj)] = block.matrix()[(i, j)] * weight;
        }
    }
    out
}

/// Unconstrained basis on a subset of sites, with the statistics and per-site
/// cap of `basis`. Its states are the restrictions of `basis` states to
/// `sites` in ascending site order.
pub fn local_basis(basis: &OccupationBasis, sites: &[usize]) -> Result<OccupationBasis> {
    OccupationBasis::new(sites.len(), basis.statistics(), None)
}

fn restrict(state: &[u8], sites: &[usize]) -> Vec<u8> {
    sites.iter().map(|&s| state[s]).collect()
}

/// Matrix of `O_A ⊗ O_B` on `basis`, where `O_A` and `O_B` act on the
/// [`local_basis`] of each side. Elements leaving `basis` are dropped.
pub fn product_operator(
    basis: &OccupationBasis,
    partition: &Bipartition,
    op_a: &CMatrix,
    op_b: &CMatrix,
) -> Result<CMatrix> {
    basis.check_partition(partition)?;
    let local_a = local_basis(basis, partition.a_sites())?;
    let local_b = local_basis(basis, partition.b_sites())?;
    for (op, local) in [(op_a, &local_a), (op_b, &local_b)] {
        if op.nrows() != local.dimension() || op.ncols() != local.dimension() {
            return Err(Error::DimensionMismatch {
                expected: local.dimension(),
                found: op.nrows(),
            });
        }
    }
    let idx = |state: &[u8]| {
        (
            local_a.index_of(&restrict(state, partition.a_sites())).expect("local A state"),
            local_b.index_of(&restrict(state, partition.b_sites())).expect("local B state"),
        )
    };
    let coords: Vec<(usize, usize)> = basis.states().iter().map(|s| idx(s)).collect();
    let d = basis.dimension();
    Ok(CMatrix::from_fn(d, d, |i, j| {
        let (ai, bi) = coords[i];
        let (aj, bj) = coords[j];
        op_a[(ai, aj)] * op_b[(bi, bj)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hardcore(l: usize) -> Arc<OccupationBasis> {
        Arc::new(OccupationBasis::new(l, Statistics::HardcoreBoson, None).unwrap())
    }

    #[test]
    fn two_site_spin_enumeration() {
        let b = hardcore(2);
        assert_eq!(b.dimension(), 4);
        assert_eq!(b.states(), &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn four_site_fermions() {
        let b = OccupationBasis::new(4, Statistics::Fermion, None).unwrap();
        assert_eq!(b.dimension(), 16);
    }

    #[test]
    fn boson_sector_has_n_plus_one_states() {
        let b = OccupationBasis::boson_sector(2, 3).unwrap();
        assert_eq!(b.dimension(), 4);
        assert_eq!(b.states(), &[vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        for n in 1..6 {
            assert_eq!(OccupationBasis::boson_sector(2, n).unwrap().dimension(), n + 1);
        }
    }

    #[test]
    fn fixed_charge_dimension_is_binomial() {
        let b = OccupationBasis::new(8, Statistics::Fermion, Some(4)).unwrap();
        assert_eq!(b.dimension(), 70);
        assert!(b.states().iter().all(|s| s.iter().map(|&x| x as usize).sum::<usize>() == 4));
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn oversized_basis_is_refused() {
        let err = OccupationBasis::with_cap(12, Statistics::HardcoreBoson, None, 1000).unwrap_err();
        assert!(matches!(err, Error::BasisTooLarge { dimension: 4096, .. }));
        let err = OccupationBasis::new(30, Statistics::Fermion, None).unwrap_err();
        assert!(matches!(err, Error::BasisTooLarge { .. }));
    }

    #[test]
    fn invalid_bipartitions() {
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1, 2]).is_err());
        assert!(Bipartition::new(3, &[5]).is_err());
        let p = Bipartition::new(4, &[2, 1]).unwrap();
        assert_eq!(p.a_sites(), &[1, 2]);
        assert_eq!(p.b_sites(), &[0, 3]);
        assert_eq!(p.boundary_bonds(), 2);
        assert!(!p.is_prefix());
        assert!(Bipartition::prefix(4, 2).unwrap().is_prefix());
    }

    #[test]
    fn subsystem_charge_operator_examples() {
        let b = hardcore(2);
        let p = Bipartition::new(2, &[0]).unwrap();
        let n_a = subsystem_charge_operator(&b, &p);
        let diag: Vec<f64> = n_a.diagonal().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![0.0, 0.0, 1.0, 1.0]);

        let f = OccupationBasis::new(4, Statistics::Fermion, None).unwrap();
        let p = Bipartition::new(4, &[0, 1]).unwrap();
        let i = f.index_of(&[1, 1, 0, 0]).unwrap();
        assert_eq!(f.subsystem_charge(i, &p), 2);
    }

    #[test]
    fn charge_map_recomputes_exactly() {
        let b = OccupationBasis::new(3, Statistics::Boson { cap: 2 }, None).unwrap();
        let p = Bipartition::new(3, &[0, 2]).unwrap();
        let map = ChargeMap::new(&b, &p);
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(map.total[i], s.iter().map(|&x| x as usize).sum::<usize>());
            assert_eq!(map.subsystem[i], (s[0] + s[2]) as usize);
            assert!(map.subsystem[i] <= map.total[i]);
        }
    }

    #[test]
    fn product_state_counterexample_projection() {
        // |0⟩ ⊗ (|0⟩ + |1⟩)/√2 measured on the second site
        let b = hardcore(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = CVector::from_vec(vec![c(s), c(s), c(0.0), c(0.0)]);
        let rho = DensityOperator::from_pure(Arc::clone(&b), &psi).unwrap();
        let p = Bipartition::new(2, &[1]).unwrap();
        let rho_m = project_subsystem_charge(&rho, &p);
        let expected = linalg::diagonal(&[0.5, 0.5, 0.0, 0.0]);
        assert!(linalg::max_abs(&(rho_m.matrix() - &expected)) < 1e-15);
        let averaged = phase_average(&rho, &p, 2).unwrap();
        assert!(linalg::max_abs(&(averaged.matrix() - &expected)) < 1e-12);
    }

    #[test]
    fn single_phase_aliasing() {
        let b = hardcore(3);
        let rho = DensityOperator::maximally_mixed(Arc::clone(&b));
        let p = Bipartition::new(3, &[0, 1]).unwrap();
        assert!(matches!(
            phase_average(&rho, &p, 1),
            Err(Error::Aliasing { phases: 1, spread: 3 })
        ));
        assert!(matches!(phase_average(&rho, &p, 2), Err(Error::Aliasing { .. })));
        // a single-valued subsystem charge leaves nothing to alias
        let fixed = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, Some(2)).unwrap());
        let rho = DensityOperator::maximally_mixed(fixed);
        let p = Bipartition::new(2, &[0]).unwrap();
        let out = phase_average(&rho, &p, 1).unwrap();
        assert!(linalg::max_abs(&(out.matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn infinite_temperature_sector_weights() {
        let rho = DensityOperator::maximally_mixed(hardcore(2));
        let weights: Vec<f64> = (0..3).map(|n| project_total_charge(&rho, n).unwrap().0).collect();
        assert_eq!(weights, vec![0.25, 0.5, 0.25]);
        let (_, block) = project_total_charge(&rho, 1).unwrap();
        assert!((block.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_fixed_charge_state_has_single_sector() {
        let b = hardcore(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = CVector::from_vec(vec![c(0.0), c(s), c(-s), c(0.0)]);
        let rho = DensityOperator::from_pure(b, &psi).unwrap();
        assert!((project_total_charge(&rho, 1).unwrap().0 - 1.0).abs() < 1e-15);
        assert!(matches!(project_total_charge(&rho, 0), Err(Error::EmptySector(0))));
        assert!(matches!(project_total_charge(&rho, 2), Err(Error::EmptySector(2))));
    }

    #[test]
    fn density_operator_validation() {
        let b = hardcore(1);
        let bad_trace = linalg::diagonal(&[0.5, 0.6]);
        assert!(matches!(
            DensityOperator::new(Arc::clone(&b), bad_trace),
            Err(Error::InvalidTrace(_))
        ));
        let negative = linalg::diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityOperator::new(Arc::clone(&b), negative),
            Err(Error::NotPositive(_))
        ));
        let mut skew = linalg::diagonal(&[0.5, 0.5]);
        skew[(0, 1)] = c(0.1);
        assert!(matches!(DensityOperator::new(b, skew), Err(Error::NotHermitian(_))));
    }
}
