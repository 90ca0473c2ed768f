#pragma once

#include "schur.hpp"
#include "testers.hpp"

#include "json.hpp"

namespace loctest {

using json = nlohmann::ordered_json;

inline json layout_to_json(const SystemLayout &l) {
    json dims = json::array(), parties = json::array();
    for (const auto &f : l.factors()) {
        dims.push_back(f.dim);
        parties.push_back(party_name(f.party));
    }
    return json{{"dims", dims}, {"parties", parties}};
}

inline SystemLayout layout_from_json(const json &j) {
    const auto &dims = j.at("dims");
    const auto &parties = j.at("parties");
    if (dims.size() != parties.size()) throw std::invalid_argument("layout: dims and parties differ in length");
    std::vector<Factor> f;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const auto p = parties[i].get<std::string>();
        f.push_back({dims[i].get<std::size_t>(), p == "A" ? Party::A : p == "B" ? Party::B : Party::None});
    }
    return SystemLayout(std::move(f));
}

// Row-major [re, im] pairs.
inline json entries_to_json(const Matrix &m) {
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return data;
}

inline Matrix entries_from_json(const json &data, Index rows, Index cols) {
    if (data.size() != static_cast<std::size_t>(rows * cols)) throw std::invalid_argument("entries: wrong length");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const auto &e = data[static_cast<std::size_t>(i * cols + j)];
            m(i, j) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

inline json operator_to_json(const Operator &op) {
    return json{{"layout", layout_to_json(op.layout())}, {"rows", op.dim()}, {"cols", op.dim()}, {"data", entries_to_json(op.matrix())}};
}

inline Operator operator_from_json(const json &j) {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    return Operator(entries_from_json(j.at("data"), rows, cols), layout_from_json(j.at("layout")));
}

inline json state_to_json(const StateVector &s) {
    return json{{"layout", layout_to_json(s.layout())},
                {"subnormalized", s.subnormalized()},
                {"amplitudes", entries_to_json(s.amplitudes().transpose())}};
}

inline StateVector state_from_json(const json &j) {
    auto layout = layout_from_json(j.at("layout"));
    const auto n = static_cast<Index>(layout.total_dim());
    Vector v = entries_from_json(j.at("amplitudes"), 1, n).transpose();
    return StateVector(std::move(v), std::move(layout), j.value("subnormalized", false));
}

inline json tester_to_json(const Tester &t) {
    json j = operator_to_json(t.op());
    j["copies"] = t.copies();
    j["local_dim"] = t.local_dim();
    return j;
}

inline Tester tester_from_json(const json &j) {
    Tester t(operator_from_json(j));
    if (t.copies() != j.at("copies").get<std::size_t>() || t.local_dim() != j.at("local_dim").get<std::size_t>())
        throw std::invalid_argument("tester: metadata does not match layout");
    return t;
}

inline json schur_basis_to_json(const SchurBasis &b) {
    json blocks = json::array();
    for (const auto &blk : b.blocks())
        blocks.push_back(json{{"lambda", blk.lambda.rows()}, {"dim_v", blk.dim_v}, {"dim_w", blk.dim_w}, {"offset", blk.offset}});
    return json{{"copies", b.copies()},
                {"local_dim", b.local_dim()},
                {"blocks", blocks},
                {"isometry", operator_to_json(Operator(b.matrix(), SystemLayout::uniform(b.copies(), b.local_dim())))}};
}

} // namespace loctest
