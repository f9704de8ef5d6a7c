#pragma once

#include "sdm/spacetime.hpp"

namespace sdm {

/// Periodic transverse+longitudinal field Ising chain
/// H = J ( sum Z_i Z_{i+1} + h sum X_i + B_z sum Z_i ), Z_{n+1} = Z_1.
struct IsingParams {
    Index n_sites = 8;
    double j = 1.0;
    double h = -1.05;
    double b_z = 0.5;
    // boundary is always periodic
};

/// Temperature in units of J; infinite() gives the maximally mixed state.
struct ThermalSpec {
    double temperature = 100.0;
    static ThermalSpec infinite() { return {std::numeric_limits<double>::infinity()}; }
    double beta() const {
        require(temperature > 0.0, "ThermalSpec: temperature must be > 0");
        return std::isinf(temperature) ? 0.0 : 1.0 / temperature;
    }
};

/// Lieb-Robinson envelope parameters for C |A||B| e^{-mu d} (e^{v|t|} - 1).
struct LRFitParams {
    double c = 0.0;
    double v = 0.0;
    double mu = 0.0;
};

Matrix build_hamiltonian(const IsingParams& p, Index site_cap = 14);
Matrix thermal_state(const Matrix& h, const ThermalSpec& spec);
ChannelSpec evolution(const Matrix& h, double t);

/// Shared eigendecomposition: diagonalize once, evolve many times.
class SpectralCache {
  public:
    explicit SpectralCache(const Matrix& h);
    const RealVector& energies() const { return energies_; }
    const Matrix& basis() const { return basis_; }
    Matrix unitary(double t) const;
    Matrix thermal(const ThermalSpec& spec) const;
    /// To/from the energy eigenbasis.
    Matrix to_eigenbasis(const Matrix& m) const { return basis_.adjoint() * m * basis_; }

  private:
    RealVector energies_;
    Matrix basis_;
};

/// One row of the bound sweep. `commutator_ratio` is
/// |<[O_A(0),O_B(t)]>| / (||O_A||_2 ||O_B||_2) so it compares directly
/// against the bound columns.
struct SweepPoint {
    double time = 0.0;
    double commutator_ratio = 0.0;
    double mt_inf_norm = 0.0;
    double imagitivity2 = 0.0;
    double lower_bound = 0.0;
    BoundReport report;
};

char const* pauli_labels();
Matrix pauli(char label);

/// Per time point: build T for single-site regions {site_a} at 0 and {site_b}
/// at t through the shared eigendecomposition, then fill the bound quartet for
/// the chosen single-site Pauli observable.
std::vector<SweepPoint> commutator_sweep(const IsingParams& p, const ThermalSpec& spec,
                                         Index site_a, Index site_b, char obs,
                                         const std::vector<double>& times);

/// Fast single-site T via a precomputed spectral cache (used by the sweep).
SpacetimeDensityMatrix build_T_single_site(const SpectralCache& cache, const Matrix& rho_eig,
                                           Index site_a, Index site_b, double t, Index n_sites);

/// Fit (C, v, mu) on the early-time log data and verify the envelope
/// dim_A * C |A||B| e^{-mu d}(e^{v|t|}-1) >= ||T-T^dag||_2 across the reports.
/// `sweeps` pairs each sweep with its graph distance d(A,B).
bool lr_envelope_check(const std::vector<std::pair<double, std::vector<SweepPoint>>>& sweeps,
                       LRFitParams* fit, double noise_floor = 1e-12);

/// Multi-time singular values: k single-site slots at `slot_site` separated by
/// dt, past/future split at k/2; descending.
RealVector multi_time_singular_values(const IsingParams& p, const ThermalSpec& spec,
                                      Index slot_site, double dt, Index k);

/// Periodic-ring graph distance.
Index ring_distance(Index a, Index b, Index n);

}  // namespace sdm
