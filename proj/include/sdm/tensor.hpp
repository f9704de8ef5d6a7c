#pragma once

#include "sdm/types.hpp"

#include <optional>

namespace sdm {

/// Tensor (Kronecker) product with the (rowA*rowsB + rowB) index convention.
Matrix kron(const Matrix& a, const Matrix& b);

/// Partial trace keeping the listed factor labels (in shape order).
Matrix partial_trace(const Matrix& m, const SpaceShape& shape, const std::vector<std::string>& keep);

/// Partial transpose over one factor.
Matrix partial_transpose(const Matrix& m, const SpaceShape& shape, const std::string& label);

/// Schatten p-norm from singular values; p=inf is the largest singular value.
double schatten_norm(const Matrix& m, SchattenOrder p);

/// Singular values, descending.
RealVector singular_values(const Matrix& m);

struct Svd {
    Matrix u;
    RealVector sigma;
    Matrix v;  // m = u * sigma.asDiagonal() * v.adjoint()
};
Svd svd(const Matrix& m);

struct Eig {
    Vector values;
    std::optional<Matrix> vectors;
};
/// All eigenvalues (multiplicity included); vectors on request.
Eig eig(const Matrix& m, bool with_vectors = false);

/// Principal-branch matrix logarithm through diagonalization. Eigenvalues on
/// the negative real axis within `branch_tol` are an error; a defective
/// eigenbasis triggers one random Hermitian perturbation of size 1e-12*||m||
/// and a retry (warn_defective is set when the fallback fired).
Matrix principal_log(const Matrix& m, double branch_tol = 1e-12, bool* warn_defective = nullptr);

/// Principal-branch log that admits eigenvalues on the negative real axis,
/// pinning their argument to +pi (used by the entropy of T, whose spectrum
/// generically touches the cut). Only near-zero eigenvalues are rejected.
Matrix principal_log_on_cut(const Matrix& m, double zero_tol = 1e-12);

/// Integer matrix power by repeated squaring; n >= 0.
Matrix matrix_power(const Matrix& m, Index n);

/// Matrix exponential through diagonalization (same defective fallback).
Matrix matrix_exp_eig(const Matrix& m);

/// The d^2 x d^2 permutation S with S|i,j> = |j,i>.
Matrix swap_operator(Index d);

/// Realignment of an operator on H_A⊗H_B: out[(a,a'),(b,b')] = m[(a,b),(a',b')].
Matrix realign(const Matrix& m, Index dim_a, Index dim_b);
Matrix realign(const Matrix& m, const SpaceShape& shape_a, const SpaceShape& shape_b);

/// Embed an operator on the listed sites (tensor order = list order) into the
/// full n_sites lattice, identity elsewhere. Site 0 is the most significant
/// digit of the fused index.
Matrix embed_on_sites(const Matrix& op, const std::vector<Index>& sites, Index n_sites, Index local_dim);

inline double frobenius(const Matrix& m) { return m.norm(); }

inline Complex trace_product(const Matrix& a, const Matrix& b) {
    // Tr(a b) without forming the product
    return (a.transpose().cwiseProduct(b)).sum();
}

}  // namespace sdm
