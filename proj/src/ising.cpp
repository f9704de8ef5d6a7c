#include "sdm/ising.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace sdm {

Matrix build_hamiltonian(const IsingParams& p, Index site_cap) {
    require(p.n_sites >= 2, "IsingParams: n_sites >= 2");
    require(p.n_sites <= site_cap, "build_hamiltonian: site cap exceeded");
    const Index n = p.n_sites;
    const Index dim = Index(1) << n;
    Matrix h = Matrix::Zero(dim, dim);
    // bit n-1-i of the basis index is site i (site 0 most significant)
    auto zbit = [&](Index state, Index site) { return (state >> (n - 1 - site)) & 1 ? -1.0 : 1.0; };
    for (Index s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (Index i = 0; i < n; ++i) {
            diag += zbit(s, i) * zbit(s, (i + 1) % n);  // periodic ZZ
            diag += p.b_z * zbit(s, i);
        }
        h(s, s) += p.j * diag;
        for (Index i = 0; i < n; ++i) {
            const Index flipped = s ^ (Index(1) << (n - 1 - i));
            h(flipped, s) += p.j * p.h;
        }
    }
    return h;
}

SpectralCache::SpectralCache(const Matrix& h) {
    require((h - h.adjoint()).norm() < 1e-10 * std::max(1.0, h.norm()),
            "SpectralCache: Hamiltonian must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    require(es.info() == Eigen::Success, "SpectralCache: eigensolver failed");
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors();
}

Matrix SpectralCache::unitary(double t) const {
    Vector phases(energies_.size());
    for (Index i = 0; i < energies_.size(); ++i)
        phases(i) = std::exp(Complex(0, -energies_(i) * t));
    return basis_ * phases.asDiagonal() * basis_.adjoint();
}

Matrix SpectralCache::thermal(const ThermalSpec& spec) const {
    const double beta = spec.beta();
    RealVector w(energies_.size());
    const double e0 = energies_.minCoeff();
    for (Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (energies_(i) - e0));
    w /= w.sum();
    return basis_ * w.cast<Complex>().asDiagonal() * basis_.adjoint();
}

Matrix thermal_state(const Matrix& h, const ThermalSpec& spec) {
    return SpectralCache(h).thermal(spec);
}

ChannelSpec evolution(const Matrix& h, double t) {
    return ChannelSpec::from_unitary(SpectralCache(h).unitary(t));
}

char const* pauli_labels() { return "XYZ"; }

Matrix pauli(char label) {
    Matrix m(2, 2);
    switch (label) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        case 'I': m = Matrix::Identity(2, 2); break;
        default: throw std::invalid_argument("pauli: unknown label");
    }
    return m;
}

Index ring_distance(Index a, Index b, Index n) {
    const Index d = std::abs(a - b) % n;
    return std::min(d, n - d);
}

namespace {

// the four embedded |r'><r| units of one site, rotated to the eigenbasis
std::vector<Matrix> site_units_eigenbasis(const SpectralCache& cache, Index site, Index n_sites) {
    std::vector<Matrix> out(4);
    for (Index rp = 0; rp < 2; ++rp)
        for (Index r = 0; r < 2; ++r) {
            Matrix unit = Matrix::Zero(2, 2);
            unit(rp, r) = 1.0;
            out[static_cast<size_t>(rp * 2 + r)] =
                cache.to_eigenbasis(embed_on_sites(unit, {site}, n_sites, 2));
        }
    return out;
}

// T entries from prefix products P[a'2+a] = rho_eig * E_A and B-site units,
// all in the eigenbasis; U^dag E U is an elementwise phase scaling there.
SpacetimeDensityMatrix assemble_single_site_T(const SpectralCache& cache,
                                              const std::vector<Matrix>& prefix,
                                              const std::vector<Matrix>& eb_units, double t,
                                              Index site_a, Index site_b, Index n_sites) {
    const Index dim = cache.energies().size();
    Vector phase(dim);
    for (Index i = 0; i < dim; ++i) phase(i) = std::exp(Complex(0, cache.energies()(i) * t));

    SpacetimeDensityMatrix out;
    out.shape = SpaceShape::two(2, 2);
    out.regions = RegionSpec{{site_a}, {site_b}, n_sites, 2};
    out.matrix = Matrix::Zero(4, 4);
    Matrix ebt(dim, dim);
    for (Index bp = 0; bp < 2; ++bp)
        for (Index b = 0; b < 2; ++b) {
            const Matrix& e = eb_units[static_cast<size_t>(bp * 2 + b)];
            for (Index col = 0; col < dim; ++col)
                ebt.col(col) = phase.cwiseProduct(e.col(col)) * std::conj(phase(col));
            for (Index ap = 0; ap < 2; ++ap)
                for (Index a = 0; a < 2; ++a)
                    out.matrix(a * 2 + b, ap * 2 + bp) =
                        trace_product(prefix[static_cast<size_t>(ap * 2 + a)], ebt);
        }
    return out;
}

Matrix thermal_in_eigenbasis(const SpectralCache& cache, const ThermalSpec& spec) {
    const double beta = spec.beta();
    RealVector w(cache.energies().size());
    const double e0 = cache.energies().minCoeff();
    for (Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (cache.energies()(i) - e0));
    w /= w.sum();
    return Matrix(w.cast<Complex>().asDiagonal());
}

}  // namespace

SpacetimeDensityMatrix build_T_single_site(const SpectralCache& cache, const Matrix& rho_eig,
                                           Index site_a, Index site_b, double t, Index n_sites) {
    const auto ea = site_units_eigenbasis(cache, site_a, n_sites);
    const auto eb = site_units_eigenbasis(cache, site_b, n_sites);
    std::vector<Matrix> prefix(4);
    for (size_t i = 0; i < 4; ++i) prefix[i] = rho_eig * ea[i];
    return assemble_single_site_T(cache, prefix, eb, t, site_a, site_b, n_sites);
}

std::vector<SweepPoint> commutator_sweep(const IsingParams& p, const ThermalSpec& spec,
                                         Index site_a, Index site_b, char obs,
                                         const std::vector<double>& times) {
    require(site_a >= 0 && site_a < p.n_sites && site_b >= 0 && site_b < p.n_sites,
            "commutator_sweep: sites out of range");
    const SpectralCache cache(build_hamiltonian(p));
    const Matrix rho_eig = thermal_in_eigenbasis(cache, spec);
    const auto ea = site_units_eigenbasis(cache, site_a, p.n_sites);
    const auto eb = site_units_eigenbasis(cache, site_b, p.n_sites);
    std::vector<Matrix> prefix(4);
    for (size_t i = 0; i < 4; ++i) prefix[i] = rho_eig * ea[i];
    const Matrix o = pauli(obs);
    const double norms = schatten_norm(o, 2.0) * schatten_norm(o, 2.0);

    std::vector<SweepPoint> out(times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(times.size()); ++idx) {
        const double t = times[static_cast<size_t>(idx)];
        const SpacetimeDensityMatrix st =
            assemble_single_site_T(cache, prefix, eb, t, site_a, site_b, p.n_sites);
        BoundReport r = commutator_bounds(st, o, o);
        SweepPoint pt;
        pt.time = t;
        pt.commutator_ratio = r.commutator_abs / norms;
        pt.mt_inf_norm = r.th3_upper;
        pt.imagitivity2 = r.th1_upper;
        pt.lower_bound = r.th2_lower;
        pt.report = std::move(r);
        out[static_cast<size_t>(idx)] = std::move(pt);
    }
    return out;
}

bool lr_envelope_check(const std::vector<std::pair<double, std::vector<SweepPoint>>>& sweeps,
                       LRFitParams* fit, double noise_floor) {
    require(sweeps.size() >= 2, "lr_envelope_check: need >= 2 separations");
    // v from the early-time slope of log(im2) at the shortest distance
    const auto& nearest = *std::min_element(
        sweeps.begin(), sweeps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<double, double>> pts;  // rising edge (t, log im2)
    double peak = 0.0;
    for (const auto& sp : nearest.second) peak = std::max(peak, sp.imagitivity2);
    for (const auto& sp : nearest.second)
        if (sp.imagitivity2 > std::max(noise_floor, 1e-6 * peak) && sp.imagitivity2 < 0.5 * peak &&
            sp.time > 0)
            pts.push_back({sp.time, std::log(sp.imagitivity2)});
    require(pts.size() >= 2, "lr_envelope_check: insufficient rising-edge data");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
    const double n = static_cast<double>(pts.size());
    const double v = (n * sxy - sx * sy) / std::max(n * sxx - sx * sx, 1e-300);

    // mu from the distance dependence at the end of the rising edge
    double mu = 0.0;
    {
        std::vector<std::pair<double, double>> dl;
        const double t_ref = pts.back().first;
        for (const auto& [d, sweep] : sweeps) {
            double best = noise_floor;
            for (const auto& sp : sweep)
                if (std::abs(sp.time - t_ref) < 1e-9) best = std::max(best, sp.imagitivity2);
            dl.push_back({d, std::log(best)});
        }
        double dx = 0, dy = 0, dxx = 0, dxy = 0;
        for (auto [x, y] : dl) dx += x, dy += y, dxx += x * x, dxy += x * y;
        const double m = static_cast<double>(dl.size());
        mu = -(m * dxy - dx * dy) / std::max(m * dxx - dx * dx, 1e-300);
    }

    // smallest envelope constant covering every sample (dim H_A = 2, |A||B| = 1)
    double c = 0.0;
    const bool shape_ok = v > 0.0 && std::isfinite(v) && std::isfinite(mu);
    for (const auto& [d, sweep] : sweeps)
        for (const auto& sp : sweep) {
            if (sp.time <= 0.0) continue;
            const double env = std::exp(-mu * d) * (std::exp(v * std::abs(sp.time)) - 1.0);
            if (env <= 0 || !std::isfinite(env)) continue;
            c = std::max(c, sp.imagitivity2 / (2.0 * env));
        }
    if (fit) *fit = {c, v, mu};
    if (!shape_ok || !std::isfinite(c) || c <= 0.0) return false;
    for (const auto& [d, sweep] : sweeps)
        for (const auto& sp : sweep) {
            const double env =
                2.0 * c * std::exp(-mu * d) * (std::exp(v * std::abs(sp.time)) - 1.0);
            if (sp.time > 0 && sp.imagitivity2 > env + 1e-9) return false;
        }
    return true;
}

RealVector multi_time_singular_values(const IsingParams& p, const ThermalSpec& spec,
                                      Index slot_site, double dt, Index k) {
    require(k >= 2 && k <= 8, "multi_time_singular_values: k in [2,8]");
    const Matrix h = build_hamiltonian(p);
    const SpectralCache cache(h);
    const Matrix rho = cache.thermal(spec);
    const ChannelSpec step = ChannelSpec::from_unitary(cache.unitary(dt));
    std::vector<ChannelSpec> channels(static_cast<size_t>(k - 1), step);
    RegionSpec slot;
    slot.a_sites = {slot_site};
    slot.b_sites = {slot_site};
    slot.total_sites = p.n_sites;
    slot.local_dim = 2;
    std::vector<RegionSpec> regions(static_cast<size_t>(k), slot);
    const MultiIntervalT t = multi_interval_T(rho, channels, regions);
    return past_future_singular_values(t, k / 2);
}

}  // namespace sdm
