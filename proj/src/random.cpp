#include "sdm/random.hpp"

namespace sdm {

Matrix random_ginibre(Rng& rng, Index rows, Index cols) {
    std::normal_distribution<double> nd;
    Matrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) g(i, j) = Complex(nd(rng), nd(rng));
    return g;
}

Matrix random_unitary(Rng& rng, Index d) {
    const Matrix g = random_ginibre(rng, d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
        const Complex rii = r(i, i);
        q.col(i) *= (rii == Complex(0.0)) ? Complex(1.0) : rii / std::abs(rii);
    }
    return q;
}

Matrix random_density(Rng& rng, Index d, Index rank) {
    if (rank <= 0) rank = d;
    const Matrix g = random_ginibre(rng, d, rank);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

Matrix random_hermitian(Rng& rng, Index d) {
    const Matrix g = random_ginibre(rng, d, d);
    return 0.5 * (g + g.adjoint());
}

Vector random_state_vector(Rng& rng, Index d) {
    std::normal_distribution<double> nd;
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = Complex(nd(rng), nd(rng));
    v.normalize();
    return v;
}

Matrix random_pure_density(Rng& rng, Index d) {
    const Vector v = random_state_vector(rng, d);
    return v * v.adjoint();
}

}  // namespace sdm
