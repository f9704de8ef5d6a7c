#include "sdm/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <cmath>
#include <random>

namespace sdm {

Matrix kron(const Matrix& a, const Matrix& b) {
    const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    if (ra * rb <= 0 || ca * cb <= 0 ||
        ra > std::numeric_limits<Index>::max() / std::max<Index>(rb, 1))
        throw std::overflow_error("kron: dimension overflow");
    Matrix out(ra * rb, ca * cb);
    for (Index i = 0; i < ra; ++i)
        for (Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, const SpaceShape& shape, const std::vector<std::string>& keep) {
    require(m.rows() == m.cols(), "partial_trace: matrix must be square");
    require(m.rows() == shape.dim(), "partial_trace: dimension mismatch with shape");
    const Index nf = shape.size();
    std::vector<bool> kept(static_cast<size_t>(nf), false);
    for (const auto& lbl : keep) kept[static_cast<size_t>(shape.index_of(lbl))] = true;

    Index dk = 1, dt = 1;
    for (Index f = 0; f < nf; ++f) (kept[static_cast<size_t>(f)] ? dk : dt) *= shape.factor(f).dim;

    Matrix out = Matrix::Zero(dk, dk);
    std::vector<Index> row(static_cast<size_t>(nf)), col(static_cast<size_t>(nf));
    for (Index r = 0; r < dk; ++r) {
        for (Index c = 0; c < dk; ++c) {
            // expand kept indices r,c; sum over traced indices
            Complex acc = 0.0;
            for (Index t = 0; t < dt; ++t) {
                Index rr = r, cc = c, tt = t;
                // rebuild full indices factor by factor (least significant last)
                for (Index f = nf; f-- > 0;) {
                    const Index d = shape.factor(f).dim;
                    if (kept[static_cast<size_t>(f)]) {
                        row[static_cast<size_t>(f)] = rr % d;
                        col[static_cast<size_t>(f)] = cc % d;
                        rr /= d;
                        cc /= d;
                    } else {
                        row[static_cast<size_t>(f)] = col[static_cast<size_t>(f)] = tt % d;
                        tt /= d;
                    }
                }
                acc += m(shape.fuse(row), shape.fuse(col));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

Matrix partial_transpose(const Matrix& m, const SpaceShape& shape, const std::string& label) {
    require(m.rows() == m.cols() && m.rows() == shape.dim(), "partial_transpose: shape mismatch");
    const Index f0 = shape.index_of(label);
    Matrix out(m.rows(), m.cols());
    std::vector<Index> row, col;
    for (Index r = 0; r < m.rows(); ++r) {
        row = shape.unfuse(r);
        for (Index c = 0; c < m.cols(); ++c) {
            col = shape.unfuse(c);
            std::swap(row[static_cast<size_t>(f0)], col[static_cast<size_t>(f0)]);
            out(shape.fuse(row), shape.fuse(col)) = m(r, c);
            std::swap(row[static_cast<size_t>(f0)], col[static_cast<size_t>(f0)]);
        }
    }
    return out;
}

RealVector singular_values(const Matrix& m) {
    Eigen::BDCSVD<Matrix> solver(m);
    return solver.singularValues();
}

double schatten_norm(const Matrix& m, SchattenOrder p) {
    const RealVector s = singular_values(m);
    if (s.size() == 0) return 0.0;
    if (p.is_inf()) return s(0);
    if (p.p == 2.0) return m.norm();  // exact Frobenius, avoids SVD rounding
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p.p);
    return std::pow(acc, 1.0 / p.p);
}

Svd svd(const Matrix& m) {
    Eigen::BDCSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Eig eig(const Matrix& m, bool with_vectors) {
    require(m.rows() == m.cols(), "eig: matrix must be square");
    Eigen::ComplexEigenSolver<Matrix> solver(m, with_vectors);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig: solver did not converge");
    Eig out;
    out.values = solver.eigenvalues();
    if (with_vectors) out.vectors = solver.eigenvectors();
    return out;
}

namespace {

// f applied through an eigendecomposition, with the documented perturbation
// fallback when the eigenbasis is numerically defective.
Matrix apply_via_eig(const Matrix& m, const std::function<Complex(Complex)>& f, bool* warned) {
    // defectiveness is judged by how well V Lambda V^{-1} reproduces the input
    auto attempt = [&](const Matrix& mat, double* recon_err) -> Matrix {
        Eigen::ComplexEigenSolver<Matrix> solver(mat, true);
        if (solver.info() != Eigen::Success) throw std::runtime_error("matrix function: eig failed");
        const Matrix& v = solver.eigenvectors();
        Eigen::PartialPivLU<Matrix> lu(v);
        const Matrix vinv = lu.solve(Matrix::Identity(mat.rows(), mat.cols()));
        *recon_err = (v * solver.eigenvalues().asDiagonal() * vinv - mat).norm() /
                     std::max(1.0, mat.norm());
        Vector fe(solver.eigenvalues().size());
        for (Index i = 0; i < fe.size(); ++i) fe(i) = f(solver.eigenvalues()(i));
        return v * fe.asDiagonal() * vinv;
    };
    double err = 0.0;
    Matrix out = attempt(m, &err);
    if (err < 1e-10 && out.allFinite()) return out;
    // defective (or nearly): perturb by 1e-12*||m||*(random Hermitian) and retry
    if (warned) *warned = true;
    std::mt19937_64 gen(0x5d1ce5);
    std::normal_distribution<double> nd;
    Matrix h(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) h(i, j) = Complex(nd(gen), nd(gen));
    h = 0.5 * (h + h.adjoint()).eval();
    const Matrix pert = m + (1e-12 * std::max(m.norm(), 1.0) / std::max(h.norm(), 1e-300)) * h;
    out = attempt(pert, &err);
    if (err > 1e-4 || !out.allFinite())
        throw std::runtime_error("matrix function: defective matrix, fallback failed");
    return out;
}

}  // namespace

Matrix principal_log(const Matrix& m, double branch_tol, bool* warn_defective) {
    require(m.rows() == m.cols(), "principal_log: matrix must be square");
    // flag eigenvalues on the branch cut first
    const Vector ev = eig(m).values;
    for (Index i = 0; i < ev.size(); ++i) {
        const Complex z = ev(i);
        if (std::abs(z) < branch_tol)
            throw std::domain_error("principal_log: eigenvalue at the origin");
        if (z.real() < 0.0 && std::abs(z.imag()) < branch_tol * std::abs(z))
            throw std::domain_error("principal_log: eigenvalue on the negative real axis");
    }
    return apply_via_eig(m, [](Complex z) { return std::log(z); }, warn_defective);
}

Matrix principal_log_on_cut(const Matrix& m, double zero_tol) {
    require(m.rows() == m.cols(), "principal_log_on_cut: matrix must be square");
    const Vector ev = eig(m).values;
    for (Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) < zero_tol)
            throw std::domain_error("principal_log_on_cut: eigenvalue at the origin");
    return apply_via_eig(
        m,
        [](Complex z) {
            if (z.real() < 0.0 && std::abs(z.imag()) < 1e-13 * std::abs(z))
                return Complex(std::log(std::abs(z)), kPi);
            return std::log(z);
        },
        nullptr);
}

Matrix matrix_exp_eig(const Matrix& m) {
    return apply_via_eig(m, [](Complex z) { return std::exp(z); }, nullptr);
}

Matrix matrix_power(const Matrix& m, Index n) {
    require(m.rows() == m.cols(), "matrix_power: matrix must be square");
    require(n >= 0, "matrix_power: n must be >= 0");
    Matrix acc = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    Index k = n;
    while (k > 0) {
        if (k & 1) acc = (acc * base).eval();
        base = (base * base).eval();
        k >>= 1;
    }
    return acc;
}

Matrix swap_operator(Index d) {
    require(d >= 1, "swap_operator: d must be >= 1");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
    return s;
}

Matrix realign(const Matrix& m, Index dim_a, Index dim_b) {
    require(m.rows() == dim_a * dim_b && m.cols() == m.rows(), "realign: shape mismatch");
    Matrix out(dim_a * dim_a, dim_b * dim_b);
    for (Index a = 0; a < dim_a; ++a)
        for (Index ap = 0; ap < dim_a; ++ap)
            for (Index b = 0; b < dim_b; ++b)
                for (Index bp = 0; bp < dim_b; ++bp)
                    out(a * dim_a + ap, b * dim_b + bp) = m(a * dim_b + b, ap * dim_b + bp);
    return out;
}

Matrix realign(const Matrix& m, const SpaceShape& shape_a, const SpaceShape& shape_b) {
    return realign(m, shape_a.dim(), shape_b.dim());
}

Matrix embed_on_sites(const Matrix& op, const std::vector<Index>& sites, Index n_sites, Index local_dim) {
    const Index k = static_cast<Index>(sites.size());
    Index dop = 1;
    for (Index i = 0; i < k; ++i) {
        require(sites[static_cast<size_t>(i)] >= 0 && sites[static_cast<size_t>(i)] < n_sites,
                "embed_on_sites: site out of range");
        dop *= local_dim;
    }
    require(op.rows() == dop && op.cols() == dop, "embed_on_sites: operator dim mismatch");

    Index dim = 1;
    for (Index i = 0; i < n_sites; ++i) dim *= local_dim;

    // strides: site s has stride local_dim^(n_sites-1-s)
    std::vector<Index> stride(static_cast<size_t>(n_sites));
    Index acc = 1;
    for (Index s = n_sites; s-- > 0;) {
        stride[static_cast<size_t>(s)] = acc;
        acc *= local_dim;
    }

    Matrix out = Matrix::Zero(dim, dim);
    // iterate over full rows; decode the site digits on `sites`
    for (Index r = 0; r < dim; ++r) {
        Index ra = 0;
        for (Index i = 0; i < k; ++i)
            ra = ra * local_dim + (r / stride[static_cast<size_t>(sites[static_cast<size_t>(i)])]) % local_dim;
        const Index base = [&] {
            Index b = r;
            for (Index i = 0; i < k; ++i) {
                const Index st = stride[static_cast<size_t>(sites[static_cast<size_t>(i)])];
                b -= ((r / st) % local_dim) * st;
            }
            return b;
        }();
        for (Index ca = 0; ca < dop; ++ca) {
            if (op(ra, ca) == Complex(0.0)) continue;
            Index c = base;
            Index tmp = ca;
            for (Index i = k; i-- > 0;) {
                c += (tmp % local_dim) * stride[static_cast<size_t>(sites[static_cast<size_t>(i)])];
                tmp /= local_dim;
            }
            out(r, c) += op(ra, ca);
        }
    }
    return out;
}

}  // namespace sdm
