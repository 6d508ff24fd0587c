//! Hamiltonians, thermal states and the named example states.
//!
//! Spin up maps to an occupied site. Chains have open boundaries. In the XXZ
//! chain the transverse coupling `J/2` plays the role of a hopping amplitude.

use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{DensityOperator, OccupationBasis, Statistics};
use crate::linalg::{self, c, CMatrix, CVector};

/// Largest chain accepted by the many-body tight-binding builder.
pub const MAX_MANY_BODY_SITES: usize = 14;

/// A many-body Hamiltonian on an occupation basis.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    basis: Arc<OccupationBasis>,
    matrix: CMatrix,
}

impl Hamiltonian {
    pub fn new(basis: Arc<OccupationBasis>, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != basis.dimension() || matrix.ncols() != basis.dimension() {
            return Err(Error::DimensionMismatch {
                expected: basis.dimension(),
                found: matrix.nrows(),
            });
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> &Arc<OccupationBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// `max |[H, N̂]_{ij}|`.
    pub fn total_charge_commutator_norm(&self) -> f64 {
        let n = self.basis.dimension();
        let mut norm: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dq = self.basis.total_charge(i) as f64 - self.basis.total_charge(j) as f64;
                norm = norm.max(self.matrix[(i, j)].norm() * dq.abs());
            }
        }
        norm
    }
}

/// Declarative description of the supported model Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HamiltonianSpec {
    Xxz { sites: usize, j: f64, eta: f64 },
    TightBinding { sites: usize, t: f64 },
    InteractingFermion { sites: usize, t: f64, v: f64 },
    TwoModeBoson { mu: f64, t: f64, n: usize },
}

impl HamiltonianSpec {
    pub fn build(&self) -> Result<Hamiltonian> {
        match *self {
            HamiltonianSpec::Xxz { sites, j, eta } => xxz_chain(sites, j, eta),
            HamiltonianSpec::TightBinding { sites, t } => tight_binding(sites, t).map(|(h, _)| h),
            HamiltonianSpec::InteractingFermion { sites, t, v } => interacting_chain(sites, t, v),
            HamiltonianSpec::TwoModeBoson { mu, t, n } => two_mode_boson_sector(mu, t, n),
        }
    }
}

/// `e^{−βH}/Z` for a model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalStateSpec {
    pub hamiltonian: HamiltonianSpec,
    pub beta: f64,
}

impl ThermalStateSpec {
    pub fn build(&self) -> Result<DensityOperator> {
        thermal_state(&self.hamiltonian.build()?, self.beta)
    }
}

fn require_chain(sites: usize) -> Result<()> {
    if sites < 2 {
        return Err(Error::InvalidParameter(format!(
            "chain needs at least 2 sites, got {sites}"
        )));
    }
    Ok(())
}

/// `J Σ (s^x s^x + s^y s^y + η s^z s^z)` on an open chain of spins.
pub fn xxz_chain(sites: usize, j: f64, eta: f64) -> Result<Hamiltonian> {
    require_chain(sites)?;
    let basis = Arc::new(OccupationBasis::new(sites, Statistics::HardcoreBoson, None)?);
    let dim = basis.dimension();
    let mut h = CMatrix::zeros(dim, dim);
    for (idx, state) in basis.states().iter().enumerate() {
        for i in 0..sites - 1 {
            let sz_i = state[i] as f64 - 0.5;
            let sz_j = state[i + 1] as f64 - 0.5;
            h[(idx, idx)] += c(j * eta * sz_i * sz_j);
            if state[i] != state[i + 1] {
                let mut flipped = state.clone();
                flipped.swap(i, i + 1);
                let target = basis.index_of(&flipped).expect("flip stays in basis");
                h[(target, idx)] += c(0.5 * j);
            }
        }
    }
    Hamiltonian::new(basis, h)
}

/// Number of occupied sites strictly before `site`.
fn parity_before(state: &[u8], site: usize) -> usize {
    state[..site].iter().map(|&n| n as usize).sum()
}

/// `Σ_{ij} h_ij c_i† c_j` on a fermionic basis, with Jordan–Wigner signs
/// from the site ordering.
pub fn quadratic_hamiltonian(basis: &OccupationBasis, h: &CMatrix) -> Result<CMatrix> {
    if !basis.statistics().is_fermionic() {
        return Err(Error::StatisticsMismatch { expected: "fermionic" });
    }
    let l = basis.num_sites();
    if h.nrows() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            found: h.nrows(),
        });
    }
    let dim = basis.dimension();
    let mut out = CMatrix::zeros(dim, dim);
    for (idx, state) in basis.states().iter().enumerate() {
        for jj in 0..l {
            if state[jj] == 0 {
                continue;
            }
            let mut s1 = state.clone();
            s1[jj] = 0;
            let sign_j = parity_before(state, jj);
            for ii in 0..l {
                let amp = h[(ii, jj)];
                if amp == Complex64::new(0.0, 0.0) || s1[ii] == 1 {
                    continue;
                }
                let sign_i = parity_before(&s1, ii);
                let mut s2 = s1.clone();
                s2[ii] = 1;
                if let Some(target) = basis.index_of(&s2) {
                    let sign = if (sign_i + sign_j) % 2 == 0 { 1.0 } else { -1.0 };
                    out[(target, idx)] += amp * sign;
                }
            }
        }
    }
    Ok(out)
}

/// Annihilation operator `c_site` on a fermionic basis.
pub fn annihilation(basis: &OccupationBasis, site: usize) -> CMatrix {
    let dim = basis.dimension();
    let mut out = CMatrix::zeros(dim, dim);
    for (idx, state) in basis.states().iter().enumerate() {
        if state[site] == 1 {
            let mut s = state.clone();
            s[site] = 0;
            if let Some(target) = basis.index_of(&s) {
                let sign = if parity_before(state, site) % 2 == 0 { 1.0 } else { -1.0 };
                out[(target, idx)] = c(sign);
            }
        }
    }
    out
}

/// Single-particle hopping matrix `h_ij = −t` on nearest neighbours.
pub fn tight_binding_kernel(sites: usize, t: f64) -> DMatrix<f64> {
    DMatrix::from_fn(sites, sites, |i, j| if i.abs_diff(j) == 1 { -t } else { 0.0 })
}

/// `H = −t Σ (c†_{i+1} c_i + h.c.)` as a many-body matrix on all `2^L`
/// fermionic occupation states, together with its single-particle kernel.
pub fn tight_binding(sites: usize, t: f64) -> Result<(Hamiltonian, DMatrix<f64>)> {
    require_chain(sites)?;
    if sites > MAX_MANY_BODY_SITES {
        return Err(Error::InvalidParameter(format!(
            "many-body tight-binding refused for L = {sites} > {MAX_MANY_BODY_SITES}; use the Gaussian backend"
        )));
    }
    let kernel = tight_binding_kernel(sites, t);
    let basis = Arc::new(OccupationBasis::new(sites, Statistics::Fermion, None)?);
    let h = quadratic_hamiltonian(&basis, &kernel.map(c))?;
    Ok((Hamiltonian::new(basis, h)?, kernel))
}

/// Tight-binding chain plus a nearest-neighbour density interaction
/// `V Σ n_i n_{i+1}`.
pub fn interacting_chain(sites: usize, t: f64, v: f64) -> Result<Hamiltonian> {
    let (hop, _) = tight_binding(sites, t)?;
    let basis = Arc::clone(hop.basis());
    let mut h = hop.matrix().clone();
    for (idx, state) in basis.states().iter().enumerate() {
        let pairs = state.windows(2).filter(|w| w[0] == 1 && w[1] == 1).count();
        h[(idx, idx)] += c(v * pairs as f64);
    }
    Hamiltonian::new(basis, h)
}

/// Jordan–Wigner image of the XXZ chain,
/// `J Σ [½(c_i† c_{i+1} + h.c.) + (η/4)(1 − 2n_i)(1 − 2n_{i+1})]`.
pub fn xxz_fermion_chain(sites: usize, j: f64, eta: f64) -> Result<Hamiltonian> {
    require_chain(sites)?;
    let basis = Arc::new(OccupationBasis::new(sites, Statistics::Fermion, None)?);
    let hop = DMatrix::from_fn(sites, sites, |a, b| {
        if a.abs_diff(b) == 1 {
            c(0.5 * j)
        } else {
            c(0.0)
        }
    });
    let mut h = quadratic_hamiltonian(&basis, &hop)?;
    for (idx, state) in basis.states().iter().enumerate() {
        let zz: f64 = state
            .windows(2)
            .map(|w| (1.0 - 2.0 * w[0] as f64) * (1.0 - 2.0 * w[1] as f64))
            .sum();
        h[(idx, idx)] += c(0.25 * j * eta * zz);
    }
    Hamiltonian::new(basis, h)
}

/// Charge-`n` block of `(a₁† a₂†)[[−μ, t], [t, −μ]](a₁ a₂)ᵀ`.
pub fn two_mode_boson_sector(mu: f64, t: f64, n: usize) -> Result<Hamiltonian> {
    if n == 0 {
        return Err(Error::InvalidParameter("boson sector needs N ≥ 1".into()));
    }
    let basis = Arc::new(OccupationBasis::boson_sector(2, n)?);
    let dim = basis.dimension();
    let mut h = CMatrix::zeros(dim, dim);
    for (idx, state) in basis.states().iter().enumerate() {
        let (n1, n2) = (state[0] as f64, state[1] as f64);
        h[(idx, idx)] = c(-mu * (n1 + n2));
        if state[1] > 0 {
            // a₁† a₂
            let target = basis
                .index_of(&[state[0] + 1, state[1] - 1])
                .expect("hop stays in sector");
            h[(target, idx)] += c(t * ((n1 + 1.0) * n2).sqrt());
        }
        if state[0] > 0 {
            let target = basis
                .index_of(&[state[0] - 1, state[1] + 1])
                .expect("hop stays in sector");
            h[(target, idx)] += c(t * ((n2 + 1.0) * n1).sqrt());
        }
    }
    Hamiltonian::new(basis, h)
}

/// Gibbs state `e^{−βH}/Z` through the spectral decomposition of `H`,
/// shifted by the ground-state energy.
pub fn thermal_state(h: &Hamiltonian, beta: f64) -> Result<DensityOperator> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be finite and non-negative, got {beta}"
        )));
    }
    let (energies, vectors) = linalg::eigh(h.matrix());
    let e0 = energies[0];
    let weights: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Numerical(format!("partition function {z} after shift")));
    }
    let mut scaled = vectors.clone();
    for (j, w) in weights.iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|x| *x *= w / z);
    }
    let rho = linalg::hermitize(&(scaled * vectors.adjoint()));
    DensityOperator::new_unchecked(Arc::clone(h.basis()), rho)
}

/// The example states used throughout the documentation and tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    /// `(|0101⟩ + |1010⟩)/√2`.
    Phi4,
    /// `|0⟩ ⊗ (|0⟩ + |1⟩)/√2`, which does not commute with `N̂`.
    Phi2,
    /// `¼(|00⟩⟨00| + |11⟩⟨11|) + ½|ψ₋⟩⟨ψ₋|`, a separable mixture of products
    /// of `σ^x` and `σ^y` eigenstates.
    Qd1,
    /// Four-fermion mixture on `|0000⟩, |0011⟩, |1100⟩, |1111⟩`.
    Fermion4,
}

impl NamedState {
    pub const ALL: [NamedState; 4] = [
        NamedState::Phi4,
        NamedState::Phi2,
        NamedState::Qd1,
        NamedState::Fermion4,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            NamedState::Phi4 => "phi4",
            NamedState::Phi2 => "phi2",
            NamedState::Qd1 => "qd1",
            NamedState::Fermion4 => "fermion4",
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedState::ALL
            .into_iter()
            .find(|n| n.tag() == s)
            .ok_or_else(|| Error::UnknownState(s.to_string()))
    }
}

/// Density matrix of a named state by tag.
pub fn named_state(tag: &str) -> Result<DensityOperator> {
    build_named(tag.parse()?)
}

pub fn build_named(state: NamedState) -> Result<DensityOperator> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match state {
        NamedState::Phi4 => {
            let basis = Arc::new(OccupationBasis::new(4, Statistics::HardcoreBoson, None)?);
            let mut psi = CVector::zeros(basis.dimension());
            psi[basis.index_of(&[0, 1, 0, 1]).unwrap()] = c(s);
            psi[basis.index_of(&[1, 0, 1, 0]).unwrap()] = c(s);
            DensityOperator::from_pure(basis, &psi)
        }
        NamedState::Phi2 => {
            let basis = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, None)?);
            let psi = CVector::from_vec(vec![c(s), c(s), c(0.0), c(0.0)]);
            DensityOperator::from_pure(basis, &psi)
        }
        NamedState::Qd1 => {
            let basis = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, None)?);
            let m = CMatrix::from_row_slice(
                4,
                4,
                &[
                    c(0.25), c(0.0), c(0.0), c(0.0),
                    c(0.0), c(0.25), c(-0.25), c(0.0),
                    c(0.0), c(-0.25), c(0.25), c(0.0),
                    c(0.0), c(0.0), c(0.0), c(0.25),
                ],
            );
            DensityOperator::new(basis, m)
        }
        NamedState::Fermion4 => {
            let basis = Arc::new(OccupationBasis::new(4, Statistics::Fermion, None)?);
            let idx = |occ: [u8; 4]| basis.index_of(&occ).unwrap();
            let (e, a, b, f) = (
                idx([0, 0, 0, 0]),
                idx([0, 0, 1, 1]),
                idx([1, 1, 0, 0]),
                idx([1, 1, 1, 1]),
            );
            let mut m = CMatrix::zeros(16, 16);
            for i in [e, a, b, f] {
                m[(i, i)] = c(0.25);
            }
            m[(a, b)] = c(-0.25);
            m[(b, a)] = c(-0.25);
            DensityOperator::new(basis, m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xxz_two_site_thermal_matches_closed_form() {
        for &(beta, eta) in &[(1.0, 0.0), (0.7, 2.0), (2.5, 4.0)] {
            let h = xxz_chain(2, 1.0, eta).unwrap();
            let rho = thermal_state(&h, beta).unwrap();
            let a = (-beta * eta / 4.0f64).exp();
            let b = (beta * eta / 4.0f64).exp();
            let ch = (beta / 2.0f64).cosh();
            let sh = (beta / 2.0f64).sinh();
            let z = 2.0 * a + 2.0 * b * ch;
            let expected = CMatrix::from_row_slice(
                4,
                4,
                &[
                    c(a), c(0.0), c(0.0), c(0.0),
                    c(0.0), c(b * ch), c(-b * sh), c(0.0),
                    c(0.0), c(-b * sh), c(b * ch), c(0.0),
                    c(0.0), c(0.0), c(0.0), c(a),
                ],
            ) / c(z);
            assert!(linalg::max_abs(&(rho.matrix() - expected)) < 1e-13);
        }
    }

    #[test]
    fn tight_binding_two_sites() {
        let (_, k) = tight_binding(2, 1.3).unwrap();
        let mut ev: Vec<f64> = k.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.3).abs() < 1e-14 && (ev[1] - 1.3).abs() < 1e-14);
    }

    #[test]
    fn interacting_chain_two_sites_by_hand() {
        let h = interacting_chain(2, 1.0, 0.6).unwrap();
        // basis 00, 01, 10, 11; c†_1 c_0 |10⟩ = +|01⟩ for adjacent sites
        let expected = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(0.0), c(0.0), c(0.0), c(0.0),
                c(0.0), c(0.0), c(-1.0), c(0.0),
                c(0.0), c(-1.0), c(0.0), c(0.0),
                c(0.0), c(0.0), c(0.0), c(0.6),
            ],
        );
        assert!(linalg::max_abs(&(h.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn models_conserve_charge() {
        let hs = [
            xxz_chain(4, 1.0, 1.7).unwrap(),
            tight_binding(5, 0.8).unwrap().0,
            interacting_chain(4, 1.0, 2.0).unwrap(),
            xxz_fermion_chain(3, 1.0, 0.5).unwrap(),
        ];
        for h in &hs {
            assert!(linalg::hermiticity_deviation(h.matrix()) < 1e-12);
            assert!(h.total_charge_commutator_norm() < 1e-12);
        }
    }

    #[test]
    fn many_body_size_guard() {
        assert!(tight_binding(15, 1.0).is_err());
        assert!(xxz_chain(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn boson_sector_one_particle_block() {
        let h = two_mode_boson_sector(0.4, 1.0, 1).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(-0.4), c(1.0), c(1.0), c(-0.4)]);
        assert!(linalg::max_abs(&(h.matrix() - expected)) < 1e-15);
        let rho = thermal_state(&h, 0.8).unwrap();
        let th = 0.8f64.tanh();
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((rho.matrix()[(0, 1)].re + 0.5 * th).abs() < 1e-14);
    }

    #[test]
    fn thermal_limits() {
        let h = xxz_chain(3, 1.0, 0.3).unwrap();
        let hot = thermal_state(&h, 0.0).unwrap();
        assert!(linalg::max_abs(&(hot.matrix() - linalg::identity(8) * c(0.125))) < 1e-14);
        let even = xxz_chain(4, 1.0, 0.3).unwrap();
        let cold = thermal_state(&even, 200.0).unwrap();
        let purity: f64 = cold.matrix().iter().map(|z| z.norm_sqr()).sum();
        assert!((purity - 1.0).abs() < 1e-10);
        assert!(thermal_state(&h, -1.0).is_err());
    }

    #[test]
    fn named_state_tags() {
        for s in NamedState::ALL {
            let rho = build_named(s).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-14);
        }
        assert!(matches!(named_state("bell"), Err(Error::UnknownState(_))));
        assert!(named_state("phi2").unwrap().total_charge_commutator_norm() > 0.1);
        assert!(named_state("qd1").unwrap().total_charge_commutator_norm() < 1e-15);
    }
}
