#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

/// One tensor factor of a composite Hilbert space.
struct SpaceFactor {
    std::string label;
    Index dim = 0;
};

/// Ordered tensor factorization of a Hilbert space. The joint index convention
/// is first-factor major: for factors (A,B) the fused index is a*dimB + b.
class SpaceShape {
  public:
    SpaceShape() = default;
    explicit SpaceShape(std::vector<SpaceFactor> factors) : factors_(std::move(factors)) {
        for (const auto& f : factors_) {
            if (f.dim <= 0) throw std::invalid_argument("SpaceShape: factor dim must be positive");
            for (const auto& g : factors_)
                if (&f != &g && f.label == g.label)
                    throw std::invalid_argument("SpaceShape: duplicate label " + f.label);
        }
    }

    static SpaceShape two(Index dim_a, Index dim_b) {
        return SpaceShape({{"A", dim_a}, {"B", dim_b}});
    }

    Index size() const { return static_cast<Index>(factors_.size()); }
    const SpaceFactor& factor(Index i) const { return factors_.at(static_cast<size_t>(i)); }
    const std::vector<SpaceFactor>& factors() const { return factors_; }

    Index dim() const {
        Index d = 1;
        for (const auto& f : factors_) {
            if (d > std::numeric_limits<Index>::max() / f.dim)
                throw std::overflow_error("SpaceShape: dimension product overflow");
            d *= f.dim;
        }
        return d;
    }

    Index index_of(const std::string& label) const {
        for (size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i].label == label) return static_cast<Index>(i);
        throw std::invalid_argument("SpaceShape: unknown label " + label);
    }

    /// Fused index from per-factor indices, first factor major.
    Index fuse(const std::vector<Index>& idx) const {
        if (idx.size() != factors_.size()) throw std::invalid_argument("fuse: arity mismatch");
        Index out = 0;
        for (size_t i = 0; i < factors_.size(); ++i) out = out * factors_[i].dim + idx[i];
        return out;
    }

    std::vector<Index> unfuse(Index fused) const {
        std::vector<Index> idx(factors_.size());
        for (size_t i = factors_.size(); i-- > 0;) {
            idx[i] = fused % factors_[i].dim;
            fused /= factors_[i].dim;
        }
        return idx;
    }

  private:
    std::vector<SpaceFactor> factors_;
};

/// Schatten order: finite p>0 or infinity.
struct SchattenOrder {
    double p = 2.0;
    SchattenOrder() = default;
    SchattenOrder(double order) : p(order) {  // NOLINT: implicit by design
        if (!(p > 0.0)) throw std::invalid_argument("SchattenOrder: p must be > 0");
    }
    static SchattenOrder infinity() { return SchattenOrder(std::numeric_limits<double>::infinity()); }
    bool is_inf() const { return std::isinf(p); }
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline bool all_finite(const Matrix& m) {
    return m.allFinite();
}

/// Checked constructor-style validation for matrices entering the library.
inline const Matrix& validated(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
    return m;
}

}  // namespace sdm
