#pragma once

#include "sdm/random.hpp"
#include "sdm/spacetime.hpp"

namespace sdm {

/// Dense statevector over qubits; qubit 0 is the most significant bit of the
/// amplitude index. Gates are applied as tensor updates on the listed qubits,
/// never as full 2^N matrices.
class Statevector {
  public:
    explicit Statevector(Index n_qubits);
    static Statevector from_amplitudes(Vector amps);

    Index n_qubits() const { return n_; }
    const Vector& amplitudes() const { return v_; }

    void apply(const Matrix& gate, const std::vector<Index>& qubits);
    void apply_swap(Index q1, Index q2);
    /// SWAP(q1,q2) controlled on `control` being |on>.
    void apply_cswap(Index control, Index q1, Index q2, bool on = true);
    void apply_phase_rotation(Index qubit, double theta);  // e^{i theta/2 Z}
    void apply_hadamard(Index qubit);

    /// Probability that `qubit` measures to `outcome` in the computational basis.
    double probability(Index qubit, Index outcome) const;

  private:
    Index n_;
    Vector v_;
};

/// Canonical square-root purification |ψ0> = Σ √λ_i |i>_S |i>_R in ρ's
/// eigenbasis, reference of equal dimension; system is the leading factor.
Vector purify(const Matrix& rho);

struct ProtocolSpec {
    Matrix rho;               // state of the full system (purified internally)
    ChannelSpec evolution;    // unitary kind only
    RegionSpec regions;
    double theta = 0.0;       // ancilla rotation for the Tr T^2 run
    long shots = 0;           // 0 = infinite (exact probabilities)
    std::uint64_t seed = 0;
    Matrix reference_rotation;  // optional unitary on R (purification freedom)

    void validate() const;
};

struct ShotEstimate {
    double p_plus = 0.0;       // P(+) of the theta = 0 run (Tr T^2) or the single run
    Complex estimate = 0.0;
    double stderr_est = 0.0;   // propagated sqrt(p(1-p)/shots), 0 for infinite shots
    std::uint64_t seed = 0;
};

/// Overlap protocol for Tr T^2: ancilla |+>, CSWAP_A, R(θ), U⊗U, CSWAP_B, ±-basis
/// measurement; runs θ=0 and θ=-π/2 and combines into a complex Tr T².
ShotEstimate run_trT2(const ProtocolSpec& spec);

/// Overlap protocol for Tr TT† with the A± EPR register: branch |0> applies SWAP_{A+A2},
/// branch |1> applies SWAP_{A+A1} and later SWAP_{B1B2}; both branches evolve
/// with U ⊗ U. Returns dimA (2 P(+) - 1) = Tr T T†.
ShotEstimate run_trTTd(const ProtocolSpec& spec);

/// ||T - T†||_2 from the two protocol outputs, sqrt(2 Tr TT† - 2 Re Tr T²)
/// clamped at zero for small negative statistical fluctuation.
double imagitivity_from_protocols(Complex est_t2, double est_ttd, double strong_tol = 0.5);

}  // namespace sdm
