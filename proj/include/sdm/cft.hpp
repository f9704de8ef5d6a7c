#pragma once

#include "sdm/types.hpp"

#include <array>
#include <functional>

namespace sdm {

/// Two intervals in light-cone coordinates (u,v) = (s-t, s+t), with the
/// ordering iε: A's time coordinates carry +iε, B's carry -iε.
struct CftKinematics {
    double a_lo = 0, a_hi = 0;  // interval A at time 0
    double b_lo = 0, b_hi = 0;  // interval B at time dt
    double dt = 0;
    double ordering_eps = 0;
    double c = 1.0;       // central charge
    double eps_uv = 1.0;  // UV cutoff length

    std::array<Complex, 4> z;     // z1..z4
    std::array<Complex, 4> zbar;  // z̄1..z̄4

    static CftKinematics intervals(double a_lo, double a_hi, double b_lo, double b_hi, double dt,
                                   double c = 1.0, double eps_uv = 1.0, double ordering_eps = 0.0);
    /// Same geometry at a different time separation (for path continuation).
    CftKinematics at_time(double dt_new) const;
};

struct TorusModulus {
    Complex tau;
    Complex tau_bar;  // independent of tau after continuation
};

/// Jacobi theta constants, Mathematica convention, nome argument (|q| < 1).
Complex theta2(Complex q);
Complex theta3(Complex q);
Complex theta4(Complex q);
/// The same evaluated at nome e^{2πiτ} with the q^{1/4} phase taken from τ.
Complex theta2_tau(Complex tau);
Complex theta3_tau(Complex tau);
Complex theta4_tau(Complex tau);

/// Dedekind eta(tau), Im tau > 0.
Complex dedekind_eta(Complex tau);

/// Complete elliptic integral of the first kind, parameter (Mathematica)
/// convention: K(m) = ∫_0^{π/2} (1 - m sin²θ)^{-1/2} dθ, via the complex AGM.
Complex elliptic_K(Complex m);

/// Cross-ratio pair x = (z4-z1)(z3-z2)/((z3-z1)(z4-z2)), x̄ with z -> z̄.
std::pair<Complex, Complex> cross_ratio(const CftKinematics& k);

/// tau = (i/2) K(1-x)/K(x); the bar counterpart is -(i/2) K(1-x̄)/K(x̄).
Complex tau_from_x(Complex x);
Complex taubar_from_xbar(Complex xbar);
TorusModulus modulus_pair(const CftKinematics& k);
/// Inverse map x = θ2(e^{2πiτ})^4 / θ3(e^{2πiτ})^4.
Complex x_from_tau(Complex tau);
Complex xbar_from_taubar(Complex taubar);

/// The modular S transform of the replica torus. The partition function's
/// modulus is 2τ (the theta nome is e^{2πiτ} = e^{iπ(2τ)}), so S acts on the
/// paper's variables as τ -> -1/(4τ), τ̄ -> -1/(4τ̄); it preserves the
/// continuation domain Im τ > 0 > Im τ̄.
TorusModulus modular_S(const TorusModulus& m);

/// Free-fermion two-replica torus partition function
/// Z2 = θ3(e^{2πiτ}) θ3(e^{-2πiτ̄}) / (η(2τ) η(-2τ̄)).
Complex z2_free_fermion(const TorusModulus& m);

using PartitionFn = std::function<Complex(const TorusModulus&)>;

/// Two-interval Tsallis moment Tr ρ^n = (ε⁴/(x x̄ P))^{(n²-1)/(12n)}, with the
/// fractional power tracked continuously along the straight path in dt from
/// the equal-time configuration (which must be non-singular).
Complex ff_tsallis_two_intervals(const CftKinematics& k, Index n);

/// Torus formula Tr T² = Z2(τ,τ̄) 2^{-2c/3} (ε⁴/P)^{1/8} (x/(1-x)²)^{-c/24}
/// (x̄/(1-x̄)²)^{-c/24}, powers path-continued as above.
Complex tr_T2_torus(const CftKinematics& k, const PartitionFn& z2);

struct HolographicSelection {
    Complex disconnected;  // γ: (2c/3) log(L/ε)
    Complex connected;     // γ': (2c/3) log(√(L²-Δt²)/ε)
    bool connected_selected = false;  // minimal real part rule
};
HolographicSelection holographic_two_interval(double l, double dt, double c, double eps_uv);

}  // namespace sdm
