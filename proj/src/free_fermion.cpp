#include "sdm/free_fermion.hpp"

#include "sdm/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <cstdint>
#include <map>

namespace sdm {

double reciprocal_gamma(double x) {
    const double r = std::round(x);
    if (r <= 0.0 && std::abs(x - r) < 1e-12 * std::max(1.0, std::abs(x))) return 0.0;
    if (x > 171.0) return 0.0;  // Gamma overflows; reciprocal underflows
    if (x >= 0.5) return 1.0 / std::tgamma(x);
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return std::tgamma(1.0 - x) * std::sin(kPi * x) / kPi;
}

Complex hyp1f2_regularized(double b1, double b2, double y, double tol, int term_cap) {
    // terms y^k / (Gamma(b1+k) Gamma(b2+k)); with a=1 the (a)_k/k! factor is 1.
    // rgamma zeros can silence a prefix of terms, and |terms| peak near
    // k ~ sqrt(|y|), so convergence is only declared beyond both.
    const int k_min = static_cast<int>(std::ceil(2.0 * std::sqrt(std::abs(y)))) + 6;
    double ypow = 1.0;
    double sum = 0.0;
    bool overflowed = false;
    for (int k = 0; k < term_cap; ++k) {
        const double term = ypow * reciprocal_gamma(b1 + k) * reciprocal_gamma(b2 + k);
        sum += term;
        ypow *= y;
        if (!std::isfinite(ypow)) {
            overflowed = true;
            break;
        }
        if (k > k_min && std::abs(term) < tol && std::abs(ypow * reciprocal_gamma(b1 + k + 1) *
                                                          reciprocal_gamma(b2 + k + 1)) < tol)
            return Complex(sum, 0.0);
    }
    if (overflowed) throw std::runtime_error("hyp1f2_regularized: power overflow");
    throw std::runtime_error("hyp1f2_regularized: no convergence within term cap");
}

std::vector<double> bessel_j_table(double x, int nmax) {
    require(x >= 0.0, "bessel_j_table: x must be >= 0");
    std::vector<double> j(static_cast<size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    // Miller downward recurrence from well above the turning point
    const int start = nmax + static_cast<int>(1.5 * std::cbrt(x) * 8) + 30;
    double jp = 0.0, jc = 1e-300;
    std::vector<double> tmp(static_cast<size_t>(start) + 1, 0.0);
    tmp[static_cast<size_t>(start)] = jc;
    for (int n = start; n > 0; --n) {
        double jm = (2.0 * n / x) * jc - jp;
        jp = jc;
        jc = jm;
        tmp[static_cast<size_t>(n - 1)] = jc;
        if (std::abs(jc) > 1e250) {  // rescale to avoid overflow
            for (int m = n - 1; m <= start; ++m) tmp[static_cast<size_t>(m)] *= 1e-250;
            jc *= 1e-250;
            jp *= 1e-250;
        }
    }
    // normalization J_0 + 2 sum J_2k = 1
    double norm = tmp[0];
    for (size_t n = 2; n <= static_cast<size_t>(start); n += 2) norm += 2.0 * tmp[n];
    for (int n = 0; n <= nmax; ++n) j[static_cast<size_t>(n)] = tmp[static_cast<size_t>(n)] / norm;
    return j;
}

namespace {

double xi_coeff(Index m) {
    if (m == 0) return 0.5;
    const Index mm = std::abs(m) % 4;
    if (mm % 2 == 0) return 0.0;
    const double sign = (mm == 1) ? 1.0 : -1.0;  // sin(pi m / 2) for odd m, m>0
    return sign / (kPi * static_cast<double>(std::abs(m)));  // even in m
}

Complex correlator_series(double t, Index s) {
    const double y = -t * t / 4.0;
    const double sd = static_cast<double>(s);
    const Complex term1 = Complex(0, -t) * hyp1f2_regularized((3 - sd) / 2, (3 + sd) / 2, y);
    const Complex term2 = 2.0 * hyp1f2_regularized((2 - sd) / 2, (2 + sd) / 2, y);
    return 0.25 * (term1 + term2);
}

Complex correlator_bessel(double t, Index s) {
    // G(t,s) = sum_n (-i)^n J_n(t) xi(n-s), folded to n >= 0
    const int nmax = static_cast<int>(t) + static_cast<int>(2.0 * std::cbrt(t + 1.0) * 6) + 40;
    const std::vector<double> j = bessel_j_table(t, nmax);
    Complex acc = j[0] * xi_coeff(-s);
    Complex mi = 1.0;  // (-i)^n
    for (int n = 1; n <= nmax; ++n) {
        mi *= Complex(0, -1);
        acc += mi * j[static_cast<size_t>(n)] * (xi_coeff(n - s) + xi_coeff(-n - s));
    }
    return acc;
}

}  // namespace

Complex vacuum_correlator(double t, Index s) {
    if (t < 0.0) return std::conj(vacuum_correlator(-t, s));
    if (t <= 12.0) return correlator_series(t, s);
    return correlator_bessel(t, s);
}

Complex vacuum_correlator_swapped(double t, Index s) {
    const double sign = (std::abs(s) % 2 == 0) ? 1.0 : -1.0;  // e^{i pi s}
    return sign * vacuum_correlator(t, s);
}

CorrelationMatrix build_correlation_matrix(const IntervalPair& pair) {
    pair.validate();
    const Index na = pair.a_len, nb = pair.b_len, n = na + nb;
    std::map<std::pair<bool, Index>, Complex> cache;  // (time-separated?, distance)
    auto g = [&](bool sep, Index d) {
        const auto key = std::make_pair(sep, d);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const Complex v = vacuum_correlator(sep ? pair.dt : 0.0, d);
        cache.emplace(key, v);
        return v;
    };
    CorrelationMatrix out;
    out.n_a = na;
    out.c.resize(n, n);
    for (Index i = 0; i < na; ++i) {
        const Index si = pair.a_lo + i;
        for (Index jx = 0; jx < na; ++jx) out.c(i, jx) = g(false, si - (pair.a_lo + jx));
        for (Index jx = 0; jx < nb; ++jx) {
            const Index y = pair.b_lo + jx;
            // ordering sign: -<ψ(t,y) ψ̄(0,s)> = -e^{iπ(y-s)} G(t, y-s)
            const double sgn = (std::abs(y - si) % 2 == 0) ? 1.0 : -1.0;
            out.c(i, na + jx) = -sgn * g(true, y - si);
        }
    }
    for (Index i = 0; i < nb; ++i) {
        const Index si = pair.b_lo + i;
        for (Index jx = 0; jx < na; ++jx) out.c(na + i, jx) = g(true, si - (pair.a_lo + jx));
        for (Index jx = 0; jx < nb; ++jx) out.c(na + i, na + jx) = g(false, si - (pair.b_lo + jx));
    }
    return out;
}

Matrix GaussianT::exp_minus_kernel() const { return matrix_exp_eig(-t_single); }

GaussianT GaussianT::from_kernel(Matrix kernel) {
    require(kernel.rows() == kernel.cols(), "GaussianT: kernel must be square");
    GaussianT g;
    g.t_single = std::move(kernel);
    return g;
}

GaussianT gaussian_T_from_C(const CorrelationMatrix& cm, double eps_clamp, bool* clamped) {
    const Matrix& c = cm.c;
    require(c.rows() == c.cols(), "gaussian_T_from_C: C must be square");
    Eigen::ComplexEigenSolver<Matrix> es(c, true);
    require(es.info() == Eigen::Success, "gaussian_T_from_C: eig failed");
    Vector lam = es.eigenvalues();
    bool did = false;
    for (Index i = 0; i < lam.size(); ++i) {
        if (std::abs(lam(i)) < eps_clamp) {
            lam(i) = eps_clamp;
            did = true;
        }
        if (std::abs(1.0 - lam(i)) < eps_clamp) {
            lam(i) = 1.0 - eps_clamp;
            did = true;
        }
    }
    if (clamped) *clamped = did;
    Vector f(lam.size());
    for (Index i = 0; i < lam.size(); ++i) f(i) = std::log((1.0 - lam(i)) / lam(i));
    const Matrix& v = es.eigenvectors();
    Eigen::PartialPivLU<Matrix> lu(v);
    const Matrix log_ratio = v * f.asDiagonal() * lu.solve(Matrix::Identity(c.rows(), c.cols()));
    GaussianT g;
    g.t_single = log_ratio.transpose();
    return g;
}

namespace {

/// log det via LU, returned as (log|det|, arg) folded into a complex log.
Complex log_det(const Matrix& m) {
    Eigen::PartialPivLU<Matrix> lu(m);
    const auto& lumat = lu.matrixLU();
    Complex acc = 0.0;
    for (Index i = 0; i < m.rows(); ++i) acc += std::log(lumat(i, i));
    // permutation parity
    const auto perm = lu.permutationP().indices();
    std::vector<bool> seen(static_cast<size_t>(perm.size()), false);
    int swaps = 0;
    for (Index i = 0; i < perm.size(); ++i) {
        if (seen[static_cast<size_t>(i)]) continue;
        Index jx = i;
        int len = 0;
        while (!seen[static_cast<size_t>(jx)]) {
            seen[static_cast<size_t>(jx)] = true;
            jx = perm(jx);
            ++len;
        }
        swaps += len - 1;
    }
    if (swaps % 2 == 1) acc += Complex(0.0, kPi);
    return acc;
}

}  // namespace

Complex gaussian_trace_product(const std::vector<GaussianT>& kernels) {
    require(!kernels.empty(), "gaussian_trace_product: empty product");
    const Index n = kernels.front().t_single.rows();
    Matrix prod = Matrix::Identity(n, n);
    Complex log_norm = 0.0;
    for (const auto& k : kernels) {
        require(k.t_single.rows() == n, "gaussian_trace_product: dim mismatch");
        const Matrix e = k.exp_minus_kernel();
        prod = (prod * e).eval();
        log_norm += log_det(Matrix::Identity(n, n) + e);
    }
    const Complex log_num = log_det(Matrix::Identity(n, n) + prod);
    return std::exp(log_num - log_norm);
}

Complex gaussian_tr_Tn(const CorrelationMatrix& cm, Index n) {
    require(n >= 1, "gaussian_tr_Tn: n >= 1");
    const Matrix m = cm.c.transpose();
    const Matrix one = Matrix::Identity(m.rows(), m.cols());
    const Matrix a = matrix_power(one - m, n) + matrix_power(m, n);
    return std::exp(log_det(a));
}

double gaussian_tr_TTdagger(const CorrelationMatrix& cm) {
    const Matrix m = cm.c.transpose();
    const Matrix one = Matrix::Identity(m.rows(), m.cols());
    const Matrix a = (one - m) * (one - m).adjoint() + m * m.adjoint();
    return std::exp(log_det(a)).real();
}

Complex gaussian_entropy(const Matrix& c) {
    const Vector lam = eig(c).values;
    Complex s = 0.0;
    for (Index i = 0; i < lam.size(); ++i) {
        for (const Complex z : {lam(i), Complex(1.0) - lam(i)})
            if (std::abs(z) > 1e-14) s -= z * std::log(z);
    }
    return s;
}

std::vector<MutualInfoPoint> mutual_info_scan(Index l, const std::vector<double>& times) {
    require(l >= 8, "mutual_info_scan: L >= 8");
    // S(A) from the equal-time single-interval block
    IntervalPair asingle{0, l, 0, 1, 0.0};
    const Matrix ca = build_correlation_matrix(asingle).c.topLeftCorner(l, l);
    const Complex s_single = gaussian_entropy(ca);

    std::vector<MutualInfoPoint> out(times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(times.size()); ++i) {
        IntervalPair pair{0, l, 0, l, times[static_cast<size_t>(i)]};
        const CorrelationMatrix c = build_correlation_matrix(pair);
        const Complex s_ab = gaussian_entropy(c.c);
        out[static_cast<size_t>(i)] = {times[static_cast<size_t>(i)], s_ab - 2.0 * s_single};
    }
    return out;
}

std::vector<TrT2Point> tr_T2_scan(const IntervalPair& geometry, const std::vector<double>& times) {
    std::vector<TrT2Point> out(times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(times.size()); ++i) {
        IntervalPair pair = geometry;
        pair.dt = times[static_cast<size_t>(i)];
        const CorrelationMatrix c = build_correlation_matrix(pair);
        out[static_cast<size_t>(i)] = {pair.dt, gaussian_tr_Tn(c, 2)};
    }
    return out;
}

std::vector<DivergencePoint> lattice_divergence_demo(const std::vector<Index>& scales) {
    std::vector<DivergencePoint> out;
    out.reserve(scales.size());
    for (Index m : scales) {
        require(m >= 1, "lattice_divergence_demo: scale >= 1");
        IntervalPair pair;
        pair.a_lo = 0;
        pair.a_len = 8 * m;
        pair.b_lo = 3 * m;
        pair.b_len = 2 * m;
        pair.dt = 6.0 * static_cast<double>(m);
        const CorrelationMatrix c = build_correlation_matrix(pair);
        const double lttd = std::log(gaussian_tr_TTdagger(c));
        const Complex t2 = gaussian_tr_Tn(c, 2);
        DivergencePoint p;
        p.scale = m;
        p.spacing = 1.0 / static_cast<double>(m);
        p.log_ratio = lttd - std::log(std::abs(t2));
        out.push_back(p);
    }
    return out;
}

}  // namespace sdm
