#include "sdm/serialize.hpp"

namespace sdm {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    std::vector<double> data;
    data.reserve(static_cast<size_t>(2 * m.rows() * m.cols()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            data.push_back(m(i, j).real());
            data.push_back(m(i, j).imag());
        }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    require(static_cast<Index>(data.size()) == 2 * rows * cols, "matrix_from_json: size mismatch");
    Matrix m(rows, cols);
    size_t k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = Complex(data[k], data[k + 1]);
            k += 2;
        }
    return m;
}

json to_json(const SpacetimeDensityMatrix& t) {
    json regions{{"a_sites", t.regions.a_sites},
                 {"b_sites", t.regions.b_sites},
                 {"total_sites", t.regions.total_sites},
                 {"local_dim", t.regions.local_dim}};
    return json{{"dim_a", t.dim_a()}, {"dim_b", t.dim_b()}, {"regions", std::move(regions)},
                {"matrix", matrix_to_json(t.matrix)}};
}

SpacetimeDensityMatrix spacetime_from_json(const json& j) {
    SpacetimeDensityMatrix t;
    t.matrix = matrix_from_json(j.at("matrix"));
    const Index da = j.at("dim_a").get<Index>();
    const Index db = j.at("dim_b").get<Index>();
    require(t.matrix.rows() == da * db && t.matrix.cols() == da * db,
            "spacetime_from_json: inconsistent dims");
    t.shape = SpaceShape::two(da, db);
    const auto& r = j.at("regions");
    t.regions.a_sites = r.at("a_sites").get<std::vector<Index>>();
    t.regions.b_sites = r.at("b_sites").get<std::vector<Index>>();
    t.regions.total_sites = r.at("total_sites").get<Index>();
    t.regions.local_dim = r.at("local_dim").get<Index>();
    return t;
}

json to_json(const BoundReport& r) {
    return json{{"commutator_abs", r.commutator_abs}, {"th1_upper", r.th1_upper},
                {"th3_upper", r.th3_upper},           {"th2_lower", r.th2_lower},
                {"im_bound_lower", r.im_bound_lower},
                {"o_a", matrix_to_json(r.operators_used.first)},
                {"o_b", matrix_to_json(r.operators_used.second)}};
}

}  // namespace sdm
