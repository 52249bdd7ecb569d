#include "banachlab/json_io.hpp"

namespace banachlab::io {

Json to_json(const SeqVector& v) {
    Json entries = Json::array();
    for (const auto& [i, x] : v.entries()) entries.push_back(Json::array({i, x}));
    return Json{{"entries", entries}};
}

SeqVector seq_vector_from_json(const Json& j) {
    SeqVector v;
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 2)
            throw PreconditionError("vector entries must be [index, value] pairs");
        v.set(e[0].get<std::int64_t>(), e[1].get<double>());
    }
    return v;
}

Json to_json(const BlockStructure& bs) {
    Json bounds = Json::array();
    for (std::int64_t b : bs.boundaries()) bounds.push_back(b);
    Json blocks = Json::array();
    for (std::size_t n = 0; n < bs.count(); ++n) blocks.push_back(to_json(bs.basis(n)));
    return Json{{"boundaries", bounds}, {"blocks", blocks}};
}

BlockStructure block_structure_from_json(const Json& j) {
    std::vector<std::int64_t> bounds;
    for (const auto& b : j.at("boundaries")) bounds.push_back(b.get<std::int64_t>());
    std::vector<Eigen::MatrixXd> bases;
    for (const auto& blk : j.at("blocks")) bases.push_back(real_matrix_from_json(blk));
    return BlockStructure(std::move(bounds), std::move(bases));
}

Json to_json(const orlicz::OrliczFn& fn) {
    switch (fn.family()) {
        case orlicz::Family::G: return Json{{"family", "G"}, {"a", 0.5}};
        case orlicz::Family::F: return Json{{"family", "F"}, {"a", 1.0}};
        case orlicz::Family::Fa: return Json{{"family", "Fa"}, {"a", fn.a()}};
    }
    throw PreconditionError("unknown Orlicz family");
}

orlicz::OrliczFn orlicz_fn_from_json(const Json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "G") return orlicz::OrliczFn::G();
    if (family == "F") return orlicz::OrliczFn::F();
    if (family == "Fa") return orlicz::OrliczFn::Fa(j.at("a").get<double>());
    throw PreconditionError("unknown Orlicz family: " + family);
}

Json to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd real_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw PreconditionError("matrix must be a nonempty array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
            throw PreconditionError("ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

Json to_json(const opalg::CMat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

opalg::CMat complex_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw PreconditionError("matrix must be a nonempty array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    opalg::CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw PreconditionError("ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2)
                throw PreconditionError("complex entries must be [re, im] pairs");
            m(r, c) = opalg::Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

} // namespace banachlab::io
