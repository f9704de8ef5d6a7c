#include "sdm/cft.hpp"

#include <cmath>

namespace sdm {

CftKinematics CftKinematics::intervals(double a_lo, double a_hi, double b_lo, double b_hi,
                                       double dt, double c, double eps_uv, double ordering_eps) {
    CftKinematics k;
    k.a_lo = a_lo;
    k.a_hi = a_hi;
    k.b_lo = b_lo;
    k.b_hi = b_hi;
    k.dt = dt;
    k.c = c;
    k.eps_uv = eps_uv;
    const double scale = std::max({std::abs(a_hi - a_lo), std::abs(b_hi - b_lo),
                                   std::abs(b_lo - a_lo) + std::abs(dt), 1.0});
    k.ordering_eps = ordering_eps > 0 ? ordering_eps : 1e-10 * scale;
    require(k.ordering_eps > 0, "CftKinematics: ordering_eps must be positive");
    // t_A = 0 + i eps, t_B = dt - i eps; z = s - t, z̄ = s + t
    const Complex ta(0.0, k.ordering_eps), tb(dt, -k.ordering_eps);
    k.z = {a_lo - ta, a_hi - ta, b_lo - tb, b_hi - tb};
    k.zbar = {a_lo + ta, a_hi + ta, b_lo + tb, b_hi + tb};
    return k;
}

CftKinematics CftKinematics::at_time(double dt_new) const {
    return intervals(a_lo, a_hi, b_lo, b_hi, dt_new, c, eps_uv, ordering_eps);
}

namespace {

constexpr double kSeriesTol = 1e-15;

Complex q_from_tau(Complex tau) { return std::exp(Complex(0, 2.0 * kPi) * tau); }

}  // namespace

Complex theta3(Complex q) {
    require(std::abs(q) < 1.0, "theta3: |q| must be < 1");
    Complex acc = 1.0;
    Complex qn2 = 1.0;  // q^{n^2} built incrementally: q^{(n+1)^2} = q^{n^2} q^{2n+1}
    Complex q2np1 = q;
    for (int n = 1; n < 4000; ++n) {
        qn2 *= q2np1;
        q2np1 *= q * q;
        acc += 2.0 * qn2;
        if (std::abs(qn2) < kSeriesTol) return acc;
    }
    throw std::runtime_error("theta3: series did not converge");
}

Complex theta4(Complex q) { return theta3(-q); }

Complex theta2(Complex q) {
    require(std::abs(q) < 1.0, "theta2: |q| must be < 1");
    // 2 q^{1/4} sum_{n>=0} q^{n(n+1)}, principal q^{1/4}
    Complex acc = 0.0;
    Complex qnn = 1.0;  // q^{n(n+1)}: ratio q^{2(n+1)}
    Complex ratio = q * q;
    for (int n = 0; n < 4000; ++n) {
        acc += qnn;
        if (std::abs(qnn) < kSeriesTol) break;
        qnn *= ratio;
        ratio *= q * q;
    }
    return 2.0 * std::pow(q, 0.25) * acc;
}

Complex theta2_tau(Complex tau) {
    // 2 sum_{n>=0} e^{2πiτ (n+1/2)^2}, the quarter power fixed by τ itself
    Complex acc = 0.0;
    const Complex f = Complex(0, 2.0 * kPi) * tau;
    for (int n = 0; n < 4000; ++n) {
        const double e = (n + 0.5) * (n + 0.5);
        const Complex term = std::exp(f * e);
        acc += term;
        if (std::abs(term) < kSeriesTol) return 2.0 * acc;
    }
    throw std::runtime_error("theta2_tau: series did not converge");
}

Complex theta3_tau(Complex tau) { return theta3(q_from_tau(tau)); }
Complex theta4_tau(Complex tau) { return theta4(q_from_tau(tau)); }

Complex dedekind_eta(Complex tau) {
    require(tau.imag() > 0.0, "dedekind_eta: Im tau must be > 0");
    const Complex q = q_from_tau(tau);
    Complex prod = 1.0;
    Complex qn = 1.0;
    for (int n = 1; n < 8000; ++n) {
        qn *= q;
        prod *= (1.0 - qn);
        if (std::abs(qn) < kSeriesTol) break;
    }
    return std::exp(Complex(0, kPi / 12.0) * tau) * prod;
}

Complex elliptic_K(Complex m) {
    // complex AGM with the principal branch choice at every step
    Complex a = 1.0;
    Complex b = std::sqrt(Complex(1.0) - m);
    for (int it = 0; it < 200; ++it) {
        const Complex an = 0.5 * (a + b);
        Complex bn = std::sqrt(a * b);
        if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;  // right AGM root
        a = an;
        b = bn;
        if (std::abs(a - b) < 1e-16 * std::abs(a)) break;
    }
    return kPi / (2.0 * a);
}

std::pair<Complex, Complex> cross_ratio(const CftKinematics& k) {
    auto cr = [](const std::array<Complex, 4>& z) {
        const Complex num = (z[3] - z[0]) * (z[2] - z[1]);
        const Complex den = (z[2] - z[0]) * (z[3] - z[1]);
        require(std::abs(den) > 0, "cross_ratio: degenerate kinematics");
        return num / den;
    };
    return {cr(k.z), cr(k.zbar)};
}

Complex tau_from_x(Complex x) {
    require(std::abs(x) > 0 && std::abs(x - Complex(1.0)) > 0, "tau_from_x: x in {0,1}");
    return Complex(0, 0.5) * elliptic_K(Complex(1.0) - x) / elliptic_K(x);
}

Complex taubar_from_xbar(Complex xbar) {
    return Complex(0, -0.5) * elliptic_K(Complex(1.0) - xbar) / elliptic_K(xbar);
}

TorusModulus modulus_pair(const CftKinematics& k) {
    const auto [x, xbar] = cross_ratio(k);
    return {tau_from_x(x), taubar_from_xbar(xbar)};
}

Complex x_from_tau(Complex tau) {
    const Complex r = theta2_tau(tau) / theta3_tau(tau);
    const Complex r2 = r * r;
    return r2 * r2;
}

Complex xbar_from_taubar(Complex taubar) { return x_from_tau(-taubar); }

TorusModulus modular_S(const TorusModulus& m) {
    return {-1.0 / (4.0 * m.tau), -1.0 / (4.0 * m.tau_bar)};
}

Complex z2_free_fermion(const TorusModulus& m) {
    require(m.tau.imag() > 0, "z2_free_fermion: Im tau must stay positive");
    require(m.tau_bar.imag() < 0, "z2_free_fermion: Im tau_bar must stay negative");
    return theta3_tau(m.tau) * theta3(std::exp(Complex(0, -2.0 * kPi) * m.tau_bar)) /
           (dedekind_eta(2.0 * m.tau) * dedekind_eta(-2.0 * m.tau_bar));
}

namespace {

/// Continuous-branch power of a base function sampled along a path: the log is
/// accumulated step by step, so windings beyond the principal sheet are kept.
class TrackedPower {
  public:
    explicit TrackedPower(double exponent) : alpha_(exponent) {}
    /// feed the next base value; the ordering iε keeps cone crossings on a
    /// definite side, so the principal log of each step ratio accumulates the
    /// true branch. A slip (true arc beyond a half turn within one step) is
    /// caught by the outer N vs 2N agreement check.
    bool feed(Complex value) {
        require(std::abs(value) > 0, "TrackedPower: base hit zero");
        if (!started_) {
            log_ = std::log(value);
            started_ = true;
        } else {
            log_ += std::log(value / prev_);
        }
        prev_ = value;
        return true;
    }
    Complex value() const { return std::exp(alpha_ * log_); }

  private:
    double alpha_;
    bool started_ = false;
    Complex log_ = 0.0, prev_ = 0.0;
};

struct PathPieces {
    Complex x, xbar, p;  // P = (z2-z1)(z̄2-z̄1)(z4-z3)(z̄4-z̄3)
};

PathPieces pieces_at(const CftKinematics& k) {
    const auto [x, xbar] = cross_ratio(k);
    const Complex p = (k.z[1] - k.z[0]) * (k.zbar[1] - k.zbar[0]) * (k.z[3] - k.z[2]) *
                      (k.zbar[3] - k.zbar[2]);
    return {x, xbar, p};
}

/// Walk dt from 0 to the target, feeding every tracker; doubles the step
/// count until two consecutive resolutions agree (branch-slip detection).
template <typename Feed, typename Value>
void continue_in_time(const CftKinematics& k, const Feed& feed, const Value& value) {
    Complex prev_value;
    bool have_prev = false;
    for (int steps = 512; steps <= (1 << 17); steps *= 2) {
        bool ok = feed(true, pieces_at(k.at_time(0.0)));
        for (int i = 1; ok && i <= steps; ++i) {
            const double dt = k.dt * static_cast<double>(i) / static_cast<double>(steps);
            ok = feed(false, pieces_at(k.at_time(dt)));
        }
        if (ok) {
            const Complex v = value();
            if (have_prev && std::abs(v - prev_value) <= 1e-11 * std::abs(v)) return;
            prev_value = v;
            have_prev = true;
        } else {
            have_prev = false;
        }
    }
    throw std::runtime_error("cft continuation: step refinement exhausted");
}

}  // namespace

Complex ff_tsallis_two_intervals(const CftKinematics& k, Index n) {
    require(n >= 2, "ff_tsallis_two_intervals: n >= 2");
    const double nn = static_cast<double>(n);
    const double exponent = (nn * nn - 1.0) / (12.0 * nn);
    const double e4 = std::pow(k.eps_uv, 4.0);
    TrackedPower power(exponent);
    continue_in_time(
        k,
        [&](bool first, const PathPieces& pc) {
            if (first) power = TrackedPower(exponent);
            return power.feed(e4 / (pc.x * pc.xbar * pc.p));
        },
        [&] { return power.value(); });
    return power.value();
}

Complex tr_T2_torus(const CftKinematics& k, const PartitionFn& z2) {
    const double e4 = std::pow(k.eps_uv, 4.0);
    TrackedPower pw_p(0.125), pw_x(-k.c / 24.0), pw_xb(-k.c / 24.0);
    continue_in_time(
        k,
        [&](bool first, const PathPieces& pc) {
            if (first) {
                pw_p = TrackedPower(0.125);
                pw_x = TrackedPower(-k.c / 24.0);
                pw_xb = TrackedPower(-k.c / 24.0);
            }
            return pw_p.feed(e4 / pc.p) && pw_x.feed(pc.x / ((1.0 - pc.x) * (1.0 - pc.x))) &&
                   pw_xb.feed(pc.xbar / ((1.0 - pc.xbar) * (1.0 - pc.xbar)));
        },
        [&] { return pw_p.value() * pw_x.value() * pw_xb.value(); });
    const TorusModulus m = modulus_pair(k);
    return z2(m) * std::pow(2.0, -2.0 * k.c / 3.0) * pw_p.value() * pw_x.value() * pw_xb.value();
}

HolographicSelection holographic_two_interval(double l, double dt, double c, double eps_uv) {
    require(l > 0 && eps_uv > 0, "holographic_two_interval: need L > 0, eps > 0");
    HolographicSelection sel;
    sel.disconnected = (2.0 * c / 3.0) * std::log(Complex(l / eps_uv));
    const Complex chord = std::sqrt(Complex(l * l - dt * dt)) / eps_uv;
    sel.connected = (2.0 * c / 3.0) * std::log(chord);
    // coincident real parts (dt = 0) resolve to the connected surface, which
    // dominates throughout dt < sqrt(2) L
    sel.connected_selected = sel.connected.real() <= sel.disconnected.real();
    return sel;
}

}  // namespace sdm
