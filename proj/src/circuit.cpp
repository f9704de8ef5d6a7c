#include "sdm/circuit.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sdm {

Statevector::Statevector(Index n_qubits) : n_(n_qubits) {
    require(n_ >= 1 && n_ <= 26, "Statevector: qubit count out of range");
    v_ = Vector::Zero(Index(1) << n_);
    v_(0) = 1.0;
}

Statevector Statevector::from_amplitudes(Vector amps) {
    Index n = 0;
    while ((Index(1) << n) < amps.size()) ++n;
    require((Index(1) << n) == amps.size(), "Statevector: length must be a power of 2");
    Statevector sv(n);
    sv.v_ = std::move(amps);
    return sv;
}

void Statevector::apply(const Matrix& gate, const std::vector<Index>& qubits) {
    const Index k = static_cast<Index>(qubits.size());
    const Index dk = Index(1) << k;
    require(gate.rows() == dk && gate.cols() == dk, "Statevector::apply: gate dim mismatch");
    for (Index q : qubits) require(q >= 0 && q < n_, "Statevector::apply: qubit out of range");

    std::vector<Index> bit(static_cast<size_t>(k));
    for (Index i = 0; i < k; ++i) bit[static_cast<size_t>(i)] = Index(1) << (n_ - 1 - qubits[static_cast<size_t>(i)]);
    Index mask = 0;
    for (Index b : bit) mask |= b;

    Vector amp(dk);
    const Index dim = v_.size();
    for (Index base = 0; base < dim; ++base) {
        if (base & mask) continue;  // enumerate states with all target bits clear
        for (Index g = 0; g < dk; ++g) {
            Index idx = base;
            for (Index i = 0; i < k; ++i)
                if ((g >> (k - 1 - i)) & 1) idx |= bit[static_cast<size_t>(i)];
            amp(g) = v_(idx);
        }
        const Vector upd = gate * amp;
        for (Index g = 0; g < dk; ++g) {
            Index idx = base;
            for (Index i = 0; i < k; ++i)
                if ((g >> (k - 1 - i)) & 1) idx |= bit[static_cast<size_t>(i)];
            v_(idx) = upd(g);
        }
    }
}

void Statevector::apply_swap(Index q1, Index q2) {
    require(q1 != q2, "apply_swap: distinct qubits required");
    const Index b1 = Index(1) << (n_ - 1 - q1);
    const Index b2 = Index(1) << (n_ - 1 - q2);
    const Index dim = v_.size();
    for (Index i = 0; i < dim; ++i) {
        const bool s1 = i & b1, s2 = i & b2;
        if (s1 && !s2) std::swap(v_(i), v_((i ^ b1) | b2));
    }
}

void Statevector::apply_cswap(Index control, Index q1, Index q2, bool on) {
    require(control != q1 && control != q2 && q1 != q2, "apply_cswap: distinct qubits required");
    const Index bc = Index(1) << (n_ - 1 - control);
    const Index b1 = Index(1) << (n_ - 1 - q1);
    const Index b2 = Index(1) << (n_ - 1 - q2);
    const Index dim = v_.size();
    for (Index i = 0; i < dim; ++i) {
        if (static_cast<bool>(i & bc) != on) continue;
        const bool s1 = i & b1, s2 = i & b2;
        if (s1 && !s2) std::swap(v_(i), v_((i ^ b1) | b2));
    }
}

void Statevector::apply_phase_rotation(Index qubit, double theta) {
    const Index b = Index(1) << (n_ - 1 - qubit);
    const Complex p0 = std::exp(Complex(0, theta / 2.0));
    const Complex p1 = std::exp(Complex(0, -theta / 2.0));
    for (Index i = 0; i < v_.size(); ++i) v_(i) *= (i & b) ? p1 : p0;
}

void Statevector::apply_hadamard(Index qubit) {
    Matrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    apply(h, {qubit});
}

double Statevector::probability(Index qubit, Index outcome) const {
    const Index b = Index(1) << (n_ - 1 - qubit);
    double p = 0.0;
    for (Index i = 0; i < v_.size(); ++i)
        if (static_cast<bool>(i & b) == static_cast<bool>(outcome)) p += std::norm(v_(i));
    return p;
}

Vector purify(const Matrix& rho) {
    require(rho.rows() == rho.cols(), "purify: rho must be square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
    const Index d = rho.rows();
    Vector psi = Vector::Zero(d * d);
    for (Index i = 0; i < d; ++i) {
        const double lam = std::max(es.eigenvalues()(i), 0.0);
        if (lam <= 0.0) continue;
        const double s = std::sqrt(lam);
        for (Index a = 0; a < d; ++a) psi(a * d + i) += s * es.eigenvectors()(a, i);
    }
    psi /= psi.norm();
    return psi;
}

void ProtocolSpec::validate() const {
    regions.validate();
    require(evolution.kind == ChannelSpec::Kind::unitary, "ProtocolSpec: unitary evolution only");
    require(regions.local_dim == 2, "ProtocolSpec: qubit systems only");
    require(theta > -kPi - 1e-12 && theta <= kPi + 1e-12, "ProtocolSpec: theta in (-pi, pi]");
    require(shots >= 0, "ProtocolSpec: shots must be >= 0");
    const Index dim = regions.dim_total();
    require(rho.rows() == dim && evolution.dim() == dim, "ProtocolSpec: dimension mismatch");
    if (reference_rotation.size() > 0)
        require(reference_rotation.rows() == dim && reference_rotation.cols() == dim,
                "ProtocolSpec: reference rotation must act on R (same dim as system)");
}

namespace {

Vector purified_input(const ProtocolSpec& spec) {
    Vector psi = purify(spec.rho);
    if (spec.reference_rotation.size() > 0) {
        const Index d = spec.rho.rows();
        // (1_S ⊗ W_R) |psi>
        Vector out = Vector::Zero(psi.size());
        for (Index a = 0; a < d; ++a)
            out.segment(a * d, d) = spec.reference_rotation * psi.segment(a * d, d);
        psi = std::move(out);
    }
    return psi;
}

double sample_p(double p, long shots, std::uint64_t seed, double* stderr_out) {
    if (shots <= 0) {
        if (stderr_out) *stderr_out = 0.0;
        return p;
    }
    Rng rng(seed);
    std::binomial_distribution<long> bin(shots, std::clamp(p, 0.0, 1.0));
    const double phat = static_cast<double>(bin(rng)) / static_cast<double>(shots);
    if (stderr_out) *stderr_out = std::sqrt(std::max(phat * (1.0 - phat), 0.0) / static_cast<double>(shots));
    return phat;
}

}  // namespace

ShotEstimate run_trT2(const ProtocolSpec& spec) {
    spec.validate();
    const Index n = spec.regions.total_sites;   // system qubits per copy
    const Index nq = 1 + 4 * n;                 // ancilla + 2 x (system + reference)
    require(nq <= 26, "run_trT2: simulator cap exceeded");
    const Vector psi0 = purified_input(spec);

    auto run_theta = [&](double theta) {
        Statevector sv(nq);
        Vector plus(2);
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        Vector amps = plus;
        // amplitudes = |+> ⊗ psi0 ⊗ psi0, assembled by Kronecker of vectors
        Vector tmp(psi0.size() * psi0.size());
        for (Index i = 0; i < psi0.size(); ++i) tmp.segment(i * psi0.size(), psi0.size()) = psi0(i) * psi0;
        Vector full(tmp.size() * 2);
        full.segment(0, tmp.size()) = amps(0) * tmp;
        full.segment(tmp.size(), tmp.size()) = amps(1) * tmp;
        sv = Statevector::from_amplitudes(std::move(full));

        const Index anc = 0;
        std::vector<Index> c1s(static_cast<size_t>(n)), c2s(static_cast<size_t>(n));
        for (Index i = 0; i < n; ++i) {
            c1s[static_cast<size_t>(i)] = 1 + i;            // copy-1 system
            c2s[static_cast<size_t>(i)] = 1 + 2 * n + i;    // copy-2 system
        }
        for (Index s : spec.regions.a_sites) sv.apply_cswap(anc, c1s[static_cast<size_t>(s)], c2s[static_cast<size_t>(s)]);
        sv.apply_phase_rotation(anc, theta);
        const Matrix& u = spec.evolution.matrices.front();
        sv.apply(u, c1s);
        sv.apply(u, c2s);
        for (Index s : spec.regions.b_sites) sv.apply_cswap(anc, c1s[static_cast<size_t>(s)], c2s[static_cast<size_t>(s)]);
        sv.apply_hadamard(anc);  // ±-basis measurement
        return sv.probability(anc, 0);
    };

    ShotEstimate est;
    est.seed = spec.seed;
    double se_re = 0.0, se_im = 0.0;
    const double p_re = sample_p(run_theta(0.0), spec.shots, spec.seed, &se_re);
    const double p_im = sample_p(run_theta(-kPi / 2.0), spec.shots, spec.seed + 1, &se_im);
    est.p_plus = p_re;
    est.estimate = Complex(2.0 * p_re - 1.0, 2.0 * p_im - 1.0);
    est.stderr_est = 2.0 * std::hypot(se_re, se_im);
    return est;
}

ShotEstimate run_trTTd(const ProtocolSpec& spec) {
    spec.validate();
    const Index n = spec.regions.total_sites;
    const Index na = static_cast<Index>(spec.regions.a_sites.size());
    const Index nq = 1 + 4 * n + 2 * na;
    require(nq <= 26, "run_trTTd: simulator cap exceeded");
    const Vector psi0 = purified_input(spec);

    // register layout: [anc][copy1 sys+ref][A+][A-][copy2 sys+ref]
    const Index anc = 0;
    std::vector<Index> c1s(static_cast<size_t>(n)), c2s(static_cast<size_t>(n));
    std::vector<Index> ap(static_cast<size_t>(na)), am(static_cast<size_t>(na));
    for (Index i = 0; i < n; ++i) c1s[static_cast<size_t>(i)] = 1 + i;
    for (Index i = 0; i < na; ++i) {
        ap[static_cast<size_t>(i)] = 1 + 2 * n + i;
        am[static_cast<size_t>(i)] = 1 + 2 * n + na + i;
    }
    for (Index i = 0; i < n; ++i) c2s[static_cast<size_t>(i)] = 1 + 2 * n + 2 * na + i;

    // |+> ⊗ psi0 ⊗ |Phi> ⊗ psi0
    const Index da = spec.regions.dim_a();
    Vector phi = Vector::Zero(da * da);
    for (Index x = 0; x < da; ++x) phi(x * da + x) = 1.0;
    phi /= phi.norm();

    Vector mid(psi0.size() * phi.size());
    for (Index i = 0; i < psi0.size(); ++i) mid.segment(i * phi.size(), phi.size()) = psi0(i) * phi;
    Vector tmp(mid.size() * psi0.size());
    for (Index i = 0; i < mid.size(); ++i) tmp.segment(i * psi0.size(), psi0.size()) = mid(i) * psi0;
    Vector full(tmp.size() * 2);
    const double r = 1.0 / std::sqrt(2.0);
    full.segment(0, tmp.size()) = r * tmp;
    full.segment(tmp.size(), tmp.size()) = r * tmp;
    Statevector sv = Statevector::from_amplitudes(std::move(full));

    // branch 0: SWAP_{A+,A2}; branch 1: SWAP_{A+,A1}
    for (Index i = 0; i < na; ++i) {
        const Index site = spec.regions.a_sites[static_cast<size_t>(i)];
        sv.apply_cswap(anc, ap[static_cast<size_t>(i)], c2s[static_cast<size_t>(site)], /*on=*/false);
        sv.apply_cswap(anc, ap[static_cast<size_t>(i)], c1s[static_cast<size_t>(site)], /*on=*/true);
    }
    const Matrix& u = spec.evolution.matrices.front();
    sv.apply(u, c1s);
    sv.apply(u, c2s);
    for (Index s : spec.regions.b_sites)
        sv.apply_cswap(anc, c1s[static_cast<size_t>(s)], c2s[static_cast<size_t>(s)], /*on=*/true);
    sv.apply_hadamard(anc);

    ShotEstimate est;
    est.seed = spec.seed;
    double se = 0.0;
    const double p = sample_p(sv.probability(anc, 0), spec.shots, spec.seed, &se);
    est.p_plus = p;
    est.estimate = static_cast<double>(da) * (2.0 * p - 1.0);
    est.stderr_est = static_cast<double>(da) * 2.0 * se;
    return est;
}

double imagitivity_from_protocols(Complex est_t2, double est_ttd, double strong_tol) {
    const double sq = 2.0 * est_ttd - 2.0 * est_t2.real();
    require(sq > -strong_tol, "imagitivity_from_protocols: inconsistent inputs");
    return std::sqrt(std::max(sq, 0.0));
}

}  // namespace sdm
