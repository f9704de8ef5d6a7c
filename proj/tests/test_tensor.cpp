#include "sdm/tensor.hpp"
#include "sdm/random.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace sdm;

namespace {

Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

// direct index-sum partial trace, the oracle for the library routine
Matrix partial_trace_oracle_keep_first(const Matrix& m, Index da, Index db) {
    Matrix out = Matrix::Zero(da, da);
    for (Index a = 0; a < da; ++a)
        for (Index ap = 0; ap < da; ++ap)
            for (Index b = 0; b < db; ++b) out(a, ap) += m(a * db + b, ap * db + b);
    return out;
}

}  // namespace

TEST_CASE("kron identity and diagonal cases") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK((kron(i2, i2) - Matrix::Identity(4, 4)).norm() == doctest::Approx(0.0));

    Matrix d1(2, 2), d2(2, 2);
    d1 << 1, 0, 0, 2;
    d2 << 3, 0, 0, 4;
    Matrix expect = Matrix::Zero(4, 4);
    expect.diagonal() << 3, 4, 6, 8;
    CHECK((kron(d1, d2) - expect).norm() == doctest::Approx(0.0));
}

TEST_CASE("kron bit-flip on both factors maps |00> to |11>") {
    const Matrix xx = kron(pauli_x(), pauli_x());
    Vector v00 = Vector::Zero(4);
    v00(0) = 1.0;
    const Vector v = xx * v00;
    CHECK(std::abs(v(3) - Complex(1.0)) < 1e-15);
    CHECK(v.head(3).norm() < 1e-15);
}

TEST_CASE("partial trace of the maximally entangled projector is I/2") {
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const Matrix proj = bell * bell.adjoint();
    const Matrix red = partial_trace(proj, SpaceShape::two(2, 2), {"A"});
    CHECK((red - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("partial trace of a product is the factor times the trace") {
    Rng rng(11);
    const Matrix a = random_ginibre(rng, 3, 3);
    const Matrix b = random_ginibre(rng, 4, 4);
    const Matrix red = partial_trace(kron(a, b), SpaceShape({{"A", 3}, {"B", 4}}), {"A"});
    CHECK((red - a * b.trace()).norm() < 1e-12);
}

TEST_CASE("partial trace preserves the trace and matches the index-sum oracle") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix m = random_hermitian(rng, 4);
        const SpaceShape shape = SpaceShape::two(2, 2);
        const Matrix red = partial_trace(m, shape, {"A"});
        CHECK(std::abs(red.trace() - m.trace()) < 1e-12);
        CHECK((red - partial_trace_oracle_keep_first(m, 2, 2)).norm() < 1e-13);
    }
    // linearity
    const Matrix m1 = random_ginibre(rng, 6, 6), m2 = random_ginibre(rng, 6, 6);
    const SpaceShape shape({{"A", 2}, {"B", 3}});
    const Complex alpha(0.3, -1.2);
    CHECK((partial_trace(m1 + alpha * m2, shape, {"B"}) -
           (partial_trace(m1, shape, {"B"}) + alpha * partial_trace(m2, shape, {"B"})))
              .norm() < 1e-12);
}

TEST_CASE("schatten norms: identity, diagonal, Frobenius oracle") {
    CHECK(schatten_norm(Matrix::Identity(2, 2), 2.0) == doctest::Approx(std::sqrt(2.0)));
    Matrix d(2, 2);
    d << 3, 0, 0, 4;
    CHECK(schatten_norm(d, SchattenOrder::infinity()) == doctest::Approx(4.0));

    Rng rng(3);
    const Matrix m = random_ginibre(rng, 8, 8);
    double sq = 0.0;
    for (Index i = 0; i < 8; ++i)
        for (Index j = 0; j < 8; ++j) sq += std::norm(m(i, j));
    CHECK(std::abs(schatten_norm(m, 2.0) * schatten_norm(m, 2.0) - sq) < 1e-10 * sq);
}

TEST_CASE("Hoelder inequality on random pairs") {
    Rng rng(5);
    for (int rep = 0; rep < 25; ++rep) {
        const Matrix m = random_ginibre(rng, 5, 5), n = random_ginibre(rng, 5, 5);
        const double lhs = std::abs((m * n).trace());
        CHECK(lhs <= schatten_norm(m, 1.0) * schatten_norm(n, SchattenOrder::infinity()) + 1e-10);
        CHECK(lhs <= schatten_norm(m, 2.0) * schatten_norm(n, 2.0) + 1e-10);
    }
}

TEST_CASE("realign: product operator becomes rank one, norms preserved") {
    Rng rng(17);
    const Matrix x = random_ginibre(rng, 2, 2), y = random_ginibre(rng, 3, 3);
    const Matrix r = realign(kron(x, y), 2, 3);
    CHECK(singular_values(r).tail(singular_values(r).size() - 1).norm() < 1e-12);

    const Matrix m = random_ginibre(rng, 6, 6);
    CHECK(std::abs(realign(m, 2, 3).norm() - m.norm()) < 1e-12);
}

TEST_CASE("realign index rule: single entry moves to the stated slot") {
    // M_{(a=0,b=1),(a'=1,b'=0)} = 1  ->  (M_T)_{(a=0,a'=1),(b=1,b'=0)} = 1
    Matrix m = Matrix::Zero(4, 4);
    m(0 * 2 + 1, 1 * 2 + 0) = 1.0;
    const Matrix r = realign(m, 2, 2);
    CHECK(std::abs(r(0 * 2 + 1, 1 * 2 + 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(r.sum() - Complex(1.0)) < 1e-15);
}

TEST_CASE("realign twice with swapped shapes restores the matrix") {
    Rng rng(23);
    const Matrix m = random_ginibre(rng, 6, 6);
    const Matrix once = realign(m, 2, 3);
    // the realignment is an involution up to the (A<->B index) transpose shape
    Matrix back(6, 6);
    for (Index a = 0; a < 2; ++a)
        for (Index ap = 0; ap < 2; ++ap)
            for (Index b = 0; b < 3; ++b)
                for (Index bp = 0; bp < 3; ++bp)
                    back(a * 3 + b, ap * 3 + bp) = once(a * 2 + ap, b * 3 + bp);
    CHECK((back - m).norm() == doctest::Approx(0.0));
}

TEST_CASE("eig and matrix_power basics") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 1, 2, 3;
    Vector ev = eig(d).values;
    std::sort(ev.data(), ev.data() + 3, [](Complex a, Complex b) { return a.real() < b.real(); });
    CHECK(std::abs(ev(0) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(ev(2) - Complex(3.0)) < 1e-12);

    Rng rng(29);
    const Matrix m = random_ginibre(rng, 5, 5);
    CHECK((matrix_power(m, 3) - m * m * m).norm() < 1e-12 * std::pow(m.norm(), 3));
}

TEST_CASE("principal log: identity, exp round trip, branch-cut flagging") {
    CHECK(principal_log(Matrix::Identity(4, 4)).norm() < 1e-12);

    Rng rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        // spectrum bounded away from the negative real axis: shift by a positive multiple of 1
        Matrix m = random_ginibre(rng, 4, 4);
        m = (m + Matrix::Identity(4, 4) * (2.5 * m.norm())).eval();
        const Matrix lg = principal_log(m);
        CHECK((lg.exp() - m).norm() < 1e-8 * m.norm());  // independent Pade-based exp
        CHECK((matrix_exp_eig(lg) - m).norm() < 1e-8 * m.norm());
    }

    Matrix neg = Matrix::Identity(2, 2);
    neg(0, 0) = -1.0;
    CHECK_THROWS_AS(principal_log(neg), std::domain_error);
}

TEST_CASE("principal log: defective matrix fallback fires and stays usable") {
    Matrix jordan(2, 2);
    jordan << 1, 1, 0, 1;
    bool warned = false;
    const Matrix lg = principal_log(jordan, 1e-12, &warned);
    CHECK(warned);
    CHECK((matrix_exp_eig(lg) - jordan).norm() < 1e-4);
}

TEST_CASE("svd: ordering, nonnegativity, reconstruction") {
    Rng rng(37);
    const Matrix m = random_ginibre(rng, 6, 4);
    const Svd dec = svd(m);
    for (Index i = 0; i + 1 < dec.sigma.size(); ++i) CHECK(dec.sigma(i) >= dec.sigma(i + 1));
    CHECK(dec.sigma.minCoeff() >= 0.0);
    const Matrix rec = dec.u * dec.sigma.asDiagonal() * dec.v.adjoint();
    CHECK((rec - m).norm() < 1e-10 * m.norm());
}

TEST_CASE("swap operator: small cases and the swap-trick trace identity") {
    CHECK(swap_operator(1).rows() == 1);
    CHECK(std::abs(swap_operator(1)(0, 0) - Complex(1.0)) < 1e-15);

    const Matrix s2 = swap_operator(2);
    Vector v01 = Vector::Zero(4), v10 = Vector::Zero(4);
    v01(1) = 1.0;
    v10(2) = 1.0;
    CHECK((s2 * v01 - v10).norm() < 1e-15);
    CHECK((s2 * s2 - Matrix::Identity(4, 4)).norm() < 1e-15);

    Rng rng(41);
    for (Index d : {2, 3, 5}) {
        const Matrix a = random_ginibre(rng, d, d), b = random_ginibre(rng, d, d);
        const Complex lhs = (swap_operator(d) * kron(a, b)).trace();
        // oracle by explicit index summation
        Complex rhs = 0.0;
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j) rhs += a(i, j) * b(j, i);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("embed_on_sites places operators with identity elsewhere") {
    const Matrix x = pauli_x();
    const Matrix full = embed_on_sites(x, {1}, 3, 2);
    // compare against kron(I, X, I)
    const Matrix expect = kron(kron(Matrix::Identity(2, 2), x), Matrix::Identity(2, 2));
    CHECK((full - expect).norm() < 1e-14);

    // two-site, non-adjacent, order matters
    Rng rng(43);
    const Matrix op = random_ginibre(rng, 4, 4);
    const Matrix f2 = embed_on_sites(op, {2, 0}, 3, 2);
    // oracle: permute op's site order (2,0) -> sites: fused (s2,s0)
    Matrix expect2 = Matrix::Zero(8, 8);
    for (Index r = 0; r < 8; ++r)
        for (Index c = 0; c < 8; ++c) {
            const Index r0 = (r >> 2) & 1, r1 = (r >> 1) & 1, r2 = r & 1;
            const Index c0 = (c >> 2) & 1, c1 = (c >> 1) & 1, c2 = c & 1;
            if (r1 != c1) continue;
            expect2(r, c) = op(r2 * 2 + r0, c2 * 2 + c0);
        }
    CHECK((f2 - expect2).norm() < 1e-14);
}

TEST_CASE("SpaceShape fuse/unfuse round trip and validation") {
    const SpaceShape s({{"A", 2}, {"B", 3}, {"C", 2}});
    CHECK(s.dim() == 12);
    for (Index i = 0; i < 12; ++i) CHECK(s.fuse(s.unfuse(i)) == i);
    CHECK_THROWS(SpaceShape({{"A", 2}, {"A", 3}}));
    CHECK_THROWS(SchattenOrder(0.0));
}
