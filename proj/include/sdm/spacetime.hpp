#pragma once

#include "sdm/tensor.hpp"

#include <utility>

namespace sdm {

/// Lattice regions A (time 0) and B (the later slice) inside a larger system.
/// The two regions live on different time slices, so they may overlap or even
/// coincide as site sets.
struct RegionSpec {
    std::vector<Index> a_sites;
    std::vector<Index> b_sites;
    Index total_sites = 0;
    Index local_dim = 2;

    void validate() const;
    Index dim_a() const;
    Index dim_b() const;
    Index dim_total() const;
};

/// Evolution between the two slices: one unitary or a Kraus set on the full system.
struct ChannelSpec {
    enum class Kind { unitary, kraus };
    Kind kind = Kind::unitary;
    std::vector<Matrix> matrices;

    static ChannelSpec from_unitary(Matrix u, double tol = 1e-10);
    static ChannelSpec from_kraus(std::vector<Matrix> ks, double tol = 1e-10);
    Index dim() const;
    /// Adjoint (Heisenberg) action sum_i K_i^dag X K_i; for a unitary, U^dag X U.
    Matrix adjoint_apply(const Matrix& x) const;
};

/// The spacetime density matrix T on H_A ⊗ H_B. Index convention:
/// T[(a,b),(a',b')] with unprimed = ket (output), primed = bra (input),
/// fused as a*dimB + b. Contractions use Tr(T * X).
struct SpacetimeDensityMatrix {
    Matrix matrix;
    SpaceShape shape;  // factors {A, B}
    RegionSpec regions;

    Index dim_a() const { return shape.factor(0).dim; }
    Index dim_b() const { return shape.factor(1).dim; }
};

/// Bounds of Theorems 1-3 and the trace-moment corollary for one (T, O_A, O_B).
struct BoundReport {
    double commutator_abs = 0.0;  // |<[O_A(0), O_B(t)]>| for the inputs as given
    double th1_upper = 0.0;       // ||T - T^dag||_2
    double th3_upper = 0.0;       // ||M_T||_inf
    double th2_lower = 0.0;       // ||T - T^dag||_2 / min(dimA, dimB)
    double im_bound_lower = 0.0;  // (2/min dim)(|Tr T^2| - Re Tr T^2)
    std::pair<Matrix, Matrix> operators_used;  // normalized O_A, O_B
};

/// Defining construction: T[(a,b),(a',b')] = Tr[rho (|a'><a| ⊗ 1_Abar) E†(|b'><b| ⊗ 1_Bbar)]
/// with E† the adjoint channel action, so that Tr(T (O_A⊗O_B)) = Tr(rho O_A U† O_B U).
SpacetimeDensityMatrix build_T(const Matrix& rho, const ChannelSpec& channel,
                               const RegionSpec& regions, double psd_tol = 1e-8);

/// Jamiolkowski state J = sum_ij E†(|i><j|) ⊗ |j><i| = sum_m (K_m†⊗1) SWAP (K_m⊗1);
/// satisfies J (rho ⊗ 1) = T for whole-system regions.
Matrix build_J(const ChannelSpec& channel);

SpacetimeDensityMatrix adjoint_T(const SpacetimeDensityMatrix& t);

Complex trace_moment(const SpacetimeDensityMatrix& t, Index n);
double trace_T_Tdagger(const SpacetimeDensityMatrix& t);

/// Entanglement p-imagitivity ||T - T^dag||_p.
double imagitivity(const SpacetimeDensityMatrix& t, SchattenOrder p);

/// (rho_A, rho_B) from partial traces of T.
std::pair<Matrix, Matrix> marginals(const SpacetimeDensityMatrix& t);

/// Right-hand side of the Hoelder bound ||T||_p ||O_A||_q ||O_B||_q, 1/p + 1/q = 1.
double holder_bound(const SpacetimeDensityMatrix& t, SchattenOrder p, const Matrix& o_a,
                    const Matrix& o_b);

BoundReport commutator_bounds(const SpacetimeDensityMatrix& t, const Matrix& o_a, const Matrix& o_b);

/// Operators achieving |<[O_A,O_B]>| / (||O_A||_2 ||O_B||_2) = ||M_T||_inf
/// (the construction that makes the realignment bound tight). Throws std::domain_error
/// when M = i(T-T†) is numerically zero (no causal contact).
std::pair<Matrix, Matrix> extract_saturating_operators(const SpacetimeDensityMatrix& t);

/// For pure rho: max matched distance between the eigenvalue multisets of
/// T_{AB} and the partially transposed complement construction T_{Abar^t B}.
double spectrum_duality_check(const Matrix& rho_pure, const ChannelSpec& channel,
                              const RegionSpec& regions, double purity_tol = 1e-10);

/// 1 + ||T||_p - ||rho_A||_p - ||rho_B||_p (conjectured >= 0 for p > 1).
double audenaert_slack(const SpacetimeDensityMatrix& t, SchattenOrder p);

/// Monotonicity premise rho = |psi_A><psi_A| ⊗ rho_Abar; returns (||T||_p, ||rho_B||_p).
std::pair<double, double> mono_check(const Vector& psi_a, const Matrix& rho_bar,
                                     const ChannelSpec& channel, const RegionSpec& regions,
                                     SchattenOrder p);

/// Multi-slot generalization: k regions probed between successive channels.
struct MultiIntervalT {
    Matrix matrix;     // rows = fused kets (r1..rk), cols = fused bras (r1'..rk')
    SpaceShape shape;  // one factor per slot
};
MultiIntervalT multi_interval_T(const Matrix& rho, const std::vector<ChannelSpec>& channels,
                                const std::vector<RegionSpec>& slot_regions, Index dim_cap = 1 << 12);

/// Singular values of the multi-slot T reshaped with slots 1..split as past
/// legs (both ket and bra) and the remainder as future legs; descending.
RealVector past_future_singular_values(const MultiIntervalT& t, Index split);

/// -Tr(T log T) with the principal branch; complex in general.
Complex vn_entropy_principal(const SpacetimeDensityMatrix& t, double eig_tol = 1e-12);

/// Distance between two complex eigenvalue multisets (zero-padded to equal
/// size, sorted lexicographically by (Re, Im), max pairwise distance).
double eigenvalue_multiset_distance(Vector a, Vector b);

/// Complement of `sites` in [0, total).
std::vector<Index> complement_sites(const std::vector<Index>& sites, Index total);

}  // namespace sdm
