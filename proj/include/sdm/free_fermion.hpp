#pragma once

#include "sdm/types.hpp"

namespace sdm {

/// Two equal-length-scale intervals of the hopping chain, separated in time.
struct IntervalPair {
    Index a_lo = 0, a_len = 0;  // sites a_lo .. a_lo+a_len-1 at time 0
    Index b_lo = 0, b_len = 0;  // sites at time dt
    double dt = 0.0;

    void validate() const {
        require(a_len >= 1 && b_len >= 1, "IntervalPair: intervals must be non-empty");
    }
};

/// Two-slice propagator matrix, block layout (A rows first, then B rows); the
/// upper-right block carries the operator-ordering minus sign.
struct CorrelationMatrix {
    Matrix c;
    Index n_a = 0;
};

/// Single-particle kernel t with T ∝ exp(-ψ̄ t ψ); t^T = log((1-C)/C).
struct GaussianT {
    Matrix t_single;
    /// e^{ -t }: multiply these (operator order) to compose Gaussian products.
    Matrix exp_minus_kernel() const;
    static GaussianT from_kernel(Matrix kernel);
};

/// Regularized 1F2: sum_k y^k / (k! .. ) with reciprocal Gamma treated as an
/// entire function (exact zeros at nonpositive integers); a=1 fixed as in the
/// half-filling correlator. Throws on non-convergence within the term cap.
Complex hyp1f2_regularized(double b1, double b2, double y, double tol = 1e-13, int term_cap = 400);

/// 1/Gamma(x) as an entire function.
double reciprocal_gamma(double x);

/// Bessel J_0..J_{nmax}(x) for x >= 0 by Miller downward recurrence.
std::vector<double> bessel_j_table(double x, int nmax);

/// <ψ̄(t,s) ψ(0,0)> at half filling: the closed-form 1F2 series for small |t|,
/// its exact Bessel resummation for large |t| (the series cancels
/// catastrophically in double precision beyond |t| ~ 12).
Complex vacuum_correlator(double t, Index s);

/// <ψ(t,s) ψ̄(0,0)> = e^{iπs} <ψ̄(t,s) ψ(0,0)>.
Complex vacuum_correlator_swapped(double t, Index s);

CorrelationMatrix build_correlation_matrix(const IntervalPair& pair);

/// Kernel from C: t = [log((1-C) C^{-1})]^T with eigenvalues of C clamped away
/// from {0,1} by eps_clamp.
GaussianT gaussian_T_from_C(const CorrelationMatrix& c, double eps_clamp = 1e-12,
                            bool* clamped = nullptr);

/// Tr(T_1 ... T_k) = det(1 + Π e^{-t_i}) / Π det(1 + e^{-t_i}), log-domain.
Complex gaussian_trace_product(const std::vector<GaussianT>& kernels);

/// Stable moment evaluations straight from C (no kernel log/inverse):
/// Tr T^n = det[(1-M)^n + M^n], Tr T T† = det[(1-M)(1-M)† + M M†], M = C^T.
Complex gaussian_tr_Tn(const CorrelationMatrix& c, Index n);
double gaussian_tr_TTdagger(const CorrelationMatrix& c);

/// Single-particle entropy -Σ [λ log λ + (1-λ) log(1-λ)] over eig(C),
/// principal branch.
Complex gaussian_entropy(const Matrix& c);

struct MutualInfoPoint {
    double t = 0.0;
    Complex mutual_info;  // S(AB) - S(A) - S(B)
};
/// Two stacked intervals [0,L) separated by each time.
std::vector<MutualInfoPoint> mutual_info_scan(Index l, const std::vector<double>& times);

struct TrT2Point {
    double t = 0.0;
    Complex tr_t2;
};
std::vector<TrT2Point> tr_T2_scan(const IntervalPair& geometry, const std::vector<double>& times);

struct DivergencePoint {
    Index scale = 1;      // all lengths multiplied by this
    double spacing = 1.;  // effective lattice spacing 1/scale
    double log_ratio = 0; // log( Tr TT† / |Tr T^2| )
};
/// Pure-timelike configuration A=[0,8m), B=[3m,5m), dt=6m: no light-ray from A
/// meets B, so the continuum answer is Hermitian while the lattice ratio
/// grows ~ e^{1/a}.
std::vector<DivergencePoint> lattice_divergence_demo(const std::vector<Index>& scales);

}  // namespace sdm
