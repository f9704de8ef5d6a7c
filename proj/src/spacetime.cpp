#include "sdm/spacetime.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace sdm {

void RegionSpec::validate() const {
    require(total_sites >= 1, "RegionSpec: total_sites must be >= 1");
    require(local_dim >= 2, "RegionSpec: local_dim must be >= 2");
    require(!a_sites.empty() && !b_sites.empty(), "RegionSpec: regions must be non-empty");
    auto check = [&](const std::vector<Index>& v, const char* name) {
        std::set<Index> seen;
        for (Index s : v) {
            require(s >= 0 && s < total_sites, std::string(name) + ": site out of range");
            require(seen.insert(s).second, std::string(name) + ": duplicate site");
        }
    };
    check(a_sites, "RegionSpec.a_sites");
    check(b_sites, "RegionSpec.b_sites");
}

static Index pow_dim(Index base, size_t n) {
    Index d = 1;
    for (size_t i = 0; i < n; ++i) d *= base;
    return d;
}

Index RegionSpec::dim_a() const { return pow_dim(local_dim, a_sites.size()); }
Index RegionSpec::dim_b() const { return pow_dim(local_dim, b_sites.size()); }
Index RegionSpec::dim_total() const { return pow_dim(local_dim, static_cast<size_t>(total_sites)); }

ChannelSpec ChannelSpec::from_unitary(Matrix u, double tol) {
    validated(u, "ChannelSpec unitary");
    require(u.rows() == u.cols(), "ChannelSpec: unitary must be square");
    const double dev = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
    require(dev <= tol * std::sqrt(static_cast<double>(u.rows())),
            "ChannelSpec: matrix is not unitary within tolerance");
    ChannelSpec c;
    c.kind = Kind::unitary;
    c.matrices = {std::move(u)};
    return c;
}

ChannelSpec ChannelSpec::from_kraus(std::vector<Matrix> ks, double tol) {
    require(!ks.empty(), "ChannelSpec: empty Kraus set");
    const Index d = ks.front().rows();
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& k : ks) {
        validated(k, "ChannelSpec Kraus");
        require(k.rows() == d && k.cols() == d, "ChannelSpec: inconsistent Kraus dims");
        acc += k.adjoint() * k;
    }
    require((acc - Matrix::Identity(d, d)).norm() <= tol * std::sqrt(static_cast<double>(d)),
            "ChannelSpec: Kraus set not trace preserving");
    ChannelSpec c;
    c.kind = Kind::kraus;
    c.matrices = std::move(ks);
    return c;
}

Index ChannelSpec::dim() const {
    require(!matrices.empty(), "ChannelSpec: empty");
    return matrices.front().rows();
}

Matrix ChannelSpec::adjoint_apply(const Matrix& x) const {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& k : matrices) out += k.adjoint() * x * k;
    return out;
}

namespace {

Matrix basis_unit(Index d, Index ket, Index bra) {
    Matrix m = Matrix::Zero(d, d);
    m(ket, bra) = 1.0;
    return m;
}

void check_state(const Matrix& rho, Index dim, double psd_tol) {
    validated(rho, "rho");
    require(rho.rows() == dim && rho.cols() == dim, "rho: dimension mismatch with regions");
    require(std::abs(rho.trace() - Complex(1.0)) < 1e-8, "rho: trace must be 1");
    require((rho - rho.adjoint()).norm() < 1e-8 * std::max(1.0, rho.norm()), "rho: not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() > -psd_tol, "rho: not positive semidefinite");
}

}  // namespace

SpacetimeDensityMatrix build_T(const Matrix& rho, const ChannelSpec& channel,
                               const RegionSpec& regions, double psd_tol) {
    regions.validate();
    const Index dim = regions.dim_total();
    require(channel.dim() == dim, "build_T: channel dimension mismatch");
    check_state(rho, dim, psd_tol);

    const Index da = regions.dim_a(), db = regions.dim_b();
    SpacetimeDensityMatrix t;
    t.shape = SpaceShape::two(da, db);
    t.regions = regions;
    t.matrix = Matrix::Zero(da * db, da * db);

    for (Index b = 0; b < db; ++b) {
        for (Index bp = 0; bp < db; ++bp) {
            const Matrix eb = embed_on_sites(basis_unit(db, bp, b), regions.b_sites,
                                             regions.total_sites, regions.local_dim);
            const Matrix f = channel.adjoint_apply(eb);  // U^dag (|b'><b| ⊗ 1) U
            const Matrix q = f * rho;                    // T entry = Tr[E_A^{a'a} q]
            // Tr[(|a'><a| ⊗ 1_Abar) q] = (Tr_Abar q)_{a,a'} in the A-fused basis
            for (Index a = 0; a < da; ++a) {
                for (Index ap = 0; ap < da; ++ap) {
                    const Matrix ea = embed_on_sites(basis_unit(da, ap, a), regions.a_sites,
                                                     regions.total_sites, regions.local_dim);
                    t.matrix(a * db + b, ap * db + bp) = trace_product(ea, q);
                }
            }
        }
    }
    return t;
}

Matrix build_J(const ChannelSpec& channel) {
    const Index d = channel.dim();
    const Matrix sw = swap_operator(d);
    Matrix j = Matrix::Zero(d * d, d * d);
    const Matrix id = Matrix::Identity(d, d);
    for (const auto& k : channel.matrices) j += kron(k.adjoint(), id) * sw * kron(k, id);
    return j;
}

SpacetimeDensityMatrix adjoint_T(const SpacetimeDensityMatrix& t) {
    SpacetimeDensityMatrix out = t;
    out.matrix = t.matrix.adjoint();
    return out;
}

Complex trace_moment(const SpacetimeDensityMatrix& t, Index n) {
    require(n >= 1, "trace_moment: n >= 1");
    return matrix_power(t.matrix, n).trace();
}

double trace_T_Tdagger(const SpacetimeDensityMatrix& t) { return t.matrix.squaredNorm(); }

double imagitivity(const SpacetimeDensityMatrix& t, SchattenOrder p) {
    return schatten_norm(t.matrix - t.matrix.adjoint(), p);
}

std::pair<Matrix, Matrix> marginals(const SpacetimeDensityMatrix& t) {
    Matrix rho_a = partial_trace(t.matrix, t.shape, {"A"});
    Matrix rho_b = partial_trace(t.matrix, t.shape, {"B"});
    return {std::move(rho_a), std::move(rho_b)};
}

double holder_bound(const SpacetimeDensityMatrix& t, SchattenOrder p, const Matrix& o_a,
                    const Matrix& o_b) {
    require(p.p >= 1.0, "holder_bound: p must be >= 1");
    SchattenOrder q = p.is_inf() ? SchattenOrder(1.0)
               : (p.p == 1.0 ? SchattenOrder::infinity() : SchattenOrder(p.p / (p.p - 1.0)));
    return schatten_norm(t.matrix, p) * schatten_norm(o_a, q) * schatten_norm(o_b, q);
}

BoundReport commutator_bounds(const SpacetimeDensityMatrix& t, const Matrix& o_a, const Matrix& o_b) {
    require(o_a.norm() > 0 && o_b.norm() > 0, "commutator_bounds: operators must be nonzero");
    const Index da = t.dim_a(), db = t.dim_b();
    require(o_a.rows() == da && o_b.rows() == db, "commutator_bounds: operator dims mismatch");

    BoundReport r;
    const Matrix diff = t.matrix - t.matrix.adjoint();
    const Matrix x = kron(o_a, o_b);
    r.commutator_abs = std::abs(trace_product(diff, x));
    r.th1_upper = diff.norm();
    const Matrix m = Complex(0, 1) * diff;
    r.th3_upper = schatten_norm(realign(m, da, db), SchattenOrder::infinity());
    const double mind = static_cast<double>(std::min(da, db));
    r.th2_lower = r.th1_upper / mind;
    const Complex t2 = trace_moment(t, 2);
    r.im_bound_lower = (2.0 / mind) * (std::abs(t2) - t2.real());
    r.operators_used = {o_a / schatten_norm(o_a, 2.0), o_b / schatten_norm(o_b, 2.0)};
    return r;
}

std::pair<Matrix, Matrix> extract_saturating_operators(const SpacetimeDensityMatrix& t) {
    const Index da = t.dim_a(), db = t.dim_b();
    const Matrix m = Complex(0, 1) * (t.matrix - t.matrix.adjoint());
    if (m.norm() < 1e-12 * static_cast<double>(da * db))
        throw std::domain_error("extract_saturating_operators: T is Hermitian (no causal contact)");

    const Matrix mt = realign(m, da, db);
    const Svd dec = svd(mt);
    // top left singular vector u, vectorized as w[(a,a')] = (O_A)_{a'a}^* ...
    // choose (O_A)_{a'a} = conj(u[(a,a')]) so that the contracted M_A has norm sigma_max
    Matrix o_a(da, da);
    for (Index a = 0; a < da; ++a)
        for (Index ap = 0; ap < da; ++ap) o_a(ap, a) = std::conj(dec.u(a * da + ap, 0));
    // M_A[b,b'] = sum_{aa'} M[(ab),(a'b')] (O_A)_{a'a}
    Matrix m_a = Matrix::Zero(db, db);
    for (Index b = 0; b < db; ++b)
        for (Index bp = 0; bp < db; ++bp) {
            Complex acc = 0.0;
            for (Index a = 0; a < da; ++a)
                for (Index ap = 0; ap < da; ++ap)
                    acc += m(a * db + b, ap * db + bp) * o_a(ap, a);
            m_a(b, bp) = acc;
        }
    const double na = m_a.norm();
    require(na > 0, "extract_saturating_operators: degenerate contraction");
    Matrix o_b = m_a.adjoint() / na;
    return {std::move(o_a), std::move(o_b)};
}

double eigenvalue_multiset_distance(Vector a, Vector b) {
    const Index n = std::max(a.size(), b.size());
    std::vector<Complex> va(static_cast<size_t>(n), Complex(0.0)), vb(va);
    for (Index i = 0; i < a.size(); ++i) va[static_cast<size_t>(i)] = a(i);
    for (Index i = 0; i < b.size(); ++i) vb[static_cast<size_t>(i)] = b(i);
    auto less = [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    };
    std::sort(va.begin(), va.end(), less);
    std::sort(vb.begin(), vb.end(), less);
    double worst = 0.0;
    for (size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
    return worst;
}

std::vector<Index> complement_sites(const std::vector<Index>& sites, Index total) {
    std::set<Index> in(sites.begin(), sites.end());
    std::vector<Index> out;
    for (Index s = 0; s < total; ++s)
        if (!in.count(s)) out.push_back(s);
    return out;
}

double spectrum_duality_check(const Matrix& rho_pure, const ChannelSpec& channel,
                              const RegionSpec& regions, double purity_tol) {
    const Complex purity = (rho_pure * rho_pure).trace();
    require(std::abs(purity - Complex(1.0)) < purity_tol * 100 + 1e-8,
            "spectrum_duality_check: rho must be pure");

    const SpacetimeDensityMatrix t_ab = build_T(rho_pure, channel, regions);

    RegionSpec comp = regions;
    comp.a_sites = complement_sites(regions.a_sites, regions.total_sites);
    require(!comp.a_sites.empty(), "spectrum_duality_check: A must not cover the whole system");
    const SpacetimeDensityMatrix t_cb = build_T(rho_pure, channel, comp);
    const Matrix t_cb_pt = partial_transpose(t_cb.matrix, t_cb.shape, "A");

    return eigenvalue_multiset_distance(eig(t_ab.matrix).values, eig(t_cb_pt).values);
}

double audenaert_slack(const SpacetimeDensityMatrix& t, SchattenOrder p) {
    require(p.p > 1.0, "audenaert_slack: p must be > 1");
    const auto [rho_a, rho_b] = marginals(t);
    return 1.0 + schatten_norm(t.matrix, p) - schatten_norm(rho_a, p) - schatten_norm(rho_b, p);
}

std::pair<double, double> mono_check(const Vector& psi_a, const Matrix& rho_bar,
                                     const ChannelSpec& channel, const RegionSpec& regions,
                                     SchattenOrder p) {
    regions.validate();
    const Index da = regions.dim_a();
    require(psi_a.size() == da, "mono_check: psi_a dimension mismatch");
    require(std::abs(psi_a.norm() - 1.0) < 1e-10, "mono_check: psi_a must be normalized");
    const auto abar = complement_sites(regions.a_sites, regions.total_sites);
    Index dbar = 1;
    for (size_t i = 0; i < abar.size(); ++i) dbar *= regions.local_dim;
    require(rho_bar.rows() == dbar && rho_bar.cols() == dbar, "mono_check: rho_bar dim mismatch");

    // assemble |psi_A><psi_A| ⊗ rho_bar on (a_sites, complement) site ordering
    const Matrix proj = psi_a * psi_a.adjoint();
    std::vector<Index> order = regions.a_sites;
    order.insert(order.end(), abar.begin(), abar.end());
    // permutation from (A, Abar) product order into lattice order: build via embed trick
    const Index dim = regions.dim_total();
    Matrix rho = Matrix::Zero(dim, dim);
    const Index k = static_cast<Index>(regions.a_sites.size());
    // fused (A,Abar) index -> lattice fused index
    std::vector<Index> stride(static_cast<size_t>(regions.total_sites));
    Index acc = 1;
    for (Index s = regions.total_sites; s-- > 0;) {
        stride[static_cast<size_t>(s)] = acc;
        acc *= regions.local_dim;
    }
    auto to_lattice = [&](Index fa, Index fb) {
        Index out = 0;
        for (Index i = k; i-- > 0;) {
            out += (fa % regions.local_dim) * stride[static_cast<size_t>(regions.a_sites[static_cast<size_t>(i)])];
            fa /= regions.local_dim;
        }
        for (Index i = static_cast<Index>(abar.size()); i-- > 0;) {
            out += (fb % regions.local_dim) * stride[static_cast<size_t>(abar[static_cast<size_t>(i)])];
            fb /= regions.local_dim;
        }
        return out;
    };
    for (Index ra = 0; ra < da; ++ra)
        for (Index ca = 0; ca < da; ++ca) {
            if (proj(ra, ca) == Complex(0.0)) continue;
            for (Index rb = 0; rb < dbar; ++rb)
                for (Index cb = 0; cb < dbar; ++cb) {
                    if (rho_bar(rb, cb) == Complex(0.0)) continue;
                    rho(to_lattice(ra, rb), to_lattice(ca, cb)) += proj(ra, ca) * rho_bar(rb, cb);
                }
        }

    const SpacetimeDensityMatrix t = build_T(rho, channel, regions);
    const Matrix rho_b = partial_trace(t.matrix, t.shape, {"B"});
    return {schatten_norm(t.matrix, p), schatten_norm(rho_b, p)};
}

MultiIntervalT multi_interval_T(const Matrix& rho, const std::vector<ChannelSpec>& channels,
                                const std::vector<RegionSpec>& slot_regions, Index dim_cap) {
    const size_t k = slot_regions.size();
    require(k >= 2, "multi_interval_T: need at least 2 slots");
    require(channels.size() == k - 1, "multi_interval_T: need k-1 channels for k slots");
    for (const auto& r : slot_regions) {
        require(!r.a_sites.empty(), "multi_interval_T: empty slot region");
        std::set<Index> seen;
        for (Index s : r.a_sites) {
            require(s >= 0 && s < r.total_sites, "multi_interval_T: slot site out of range");
            require(seen.insert(s).second, "multi_interval_T: duplicate slot site");
        }
        require(r.total_sites == slot_regions.front().total_sites &&
                    r.local_dim == slot_regions.front().local_dim,
                "multi_interval_T: inconsistent lattice");
    }
    const Index dim = slot_regions.front().dim_total();
    check_state(rho, dim, 1e-8);

    std::vector<SpaceFactor> factors;
    Index total = 1;
    for (size_t j = 0; j < k; ++j) {
        const Index dj = slot_regions[j].dim_a();
        total *= dj;
        factors.push_back({"R" + std::to_string(j + 1), dj});
    }
    require(total * total <= dim_cap * dim_cap, "multi_interval_T: dimension cap exceeded");

    // Heisenberg-evolved slot basis operators E~_j^{r'r} = W_j^dag (|r'><r| ⊗ 1) W_j,
    // W_j the cumulative evolution up to slot j (adjoint channel composition).
    std::vector<std::vector<Matrix>> etil(k);
    for (size_t j = 0; j < k; ++j) {
        const auto& rg = slot_regions[j];
        const Index dj = rg.dim_a();
        etil[j].resize(static_cast<size_t>(dj * dj));
        for (Index rp = 0; rp < dj; ++rp)
            for (Index r = 0; r < dj; ++r) {
                Matrix e = embed_on_sites(basis_unit(dj, rp, r), rg.a_sites, rg.total_sites,
                                          rg.local_dim);
                for (size_t c = j; c-- > 0;) e = channels[c].adjoint_apply(e);
                etil[j][static_cast<size_t>(rp * dj + r)] = std::move(e);
            }
    }

    // prefix products rho * E1 * ... * Em and suffix products E_{m+1} * ... * Ek
    const size_t half = k / 2;
    auto dim_of = [&](size_t j) { return slot_regions[j].dim_a(); };
    std::vector<Matrix> left{rho};
    std::vector<Index> left_count{1};
    for (size_t j = 0; j < half; ++j) {
        const Index dj = dim_of(j);
        std::vector<Matrix> nxt;
        nxt.reserve(left.size() * static_cast<size_t>(dj * dj));
        for (const auto& lm : left)
            for (Index e = 0; e < dj * dj; ++e) nxt.push_back(lm * etil[j][static_cast<size_t>(e)]);
        left = std::move(nxt);
    }
    std::vector<Matrix> right{Matrix::Identity(dim, dim)};
    for (size_t j = half; j < k; ++j) {
        const Index dj = dim_of(j);
        std::vector<Matrix> nxt;
        nxt.reserve(right.size() * static_cast<size_t>(dj * dj));
        for (const auto& rm : right)
            for (Index e = 0; e < dj * dj; ++e) nxt.push_back(rm * etil[j][static_cast<size_t>(e)]);
        right = std::move(nxt);
    }

    // entry (kets r_j, bras r_j'): flattened slot pair index e_j = r_j' * d_j + r_j
    MultiIntervalT out;
    out.shape = SpaceShape(factors);
    out.matrix = Matrix::Zero(total, total);
    std::vector<Index> kets(k), bras(k);
    const Index nleft = static_cast<Index>(left.size()), nright = static_cast<Index>(right.size());
    for (Index li = 0; li < nleft; ++li) {
        for (Index ri = 0; ri < nright; ++ri) {
            // decode pair indices from li (slots 0..half-1) and ri (slots half..k-1)
            Index tmp = li;
            for (size_t j = half; j-- > 0;) {
                const Index dj = dim_of(j);
                const Index e = tmp % (dj * dj);
                tmp /= dj * dj;
                bras[j] = e / dj;
                kets[j] = e % dj;
            }
            tmp = ri;
            for (size_t j = k; j-- > half;) {
                const Index dj = dim_of(j);
                const Index e = tmp % (dj * dj);
                tmp /= dj * dj;
                bras[j] = e / dj;
                kets[j] = e % dj;
            }
            Index row = 0, col = 0;
            for (size_t j = 0; j < k; ++j) {
                row = row * dim_of(j) + kets[j];
                col = col * dim_of(j) + bras[j];
            }
            out.matrix(row, col) =
                trace_product(left[static_cast<size_t>(li)], right[static_cast<size_t>(ri)]);
        }
    }
    return out;
}

RealVector past_future_singular_values(const MultiIntervalT& t, Index split) {
    const Index k = t.shape.size();
    require(split >= 1 && split <= k - 1, "past_future_singular_values: bad split");
    Index dpast = 1, dfut = 1;
    for (Index j = 0; j < k; ++j) {
        const Index dj = t.shape.factor(j).dim;
        (j < split ? dpast : dfut) *= dj * dj;
    }
    Matrix m(dpast, dfut);
    const Index total = t.shape.dim();
    for (Index row = 0; row < total; ++row) {
        const auto kets = t.shape.unfuse(row);
        for (Index col = 0; col < total; ++col) {
            const auto bras = t.shape.unfuse(col);
            Index past = 0, fut = 0;
            for (Index j = 0; j < k; ++j) {
                const Index dj = t.shape.factor(j).dim;
                const Index pair = kets[static_cast<size_t>(j)] * dj + bras[static_cast<size_t>(j)];
                if (j < split)
                    past = past * (dj * dj) + pair;
                else
                    fut = fut * (dj * dj) + pair;
            }
            m(past, fut) = t.matrix(row, col);
        }
    }
    return singular_values(m);
}

Complex vn_entropy_principal(const SpacetimeDensityMatrix& t, double eig_tol) {
    const Vector ev = eig(t.matrix).values;
    for (Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) < eig_tol)
            throw std::domain_error("vn_entropy_principal: eigenvalue too close to zero");
    const Matrix logt = principal_log_on_cut(t.matrix, eig_tol);
    return -trace_product(t.matrix, logt);
}

}  // namespace sdm
