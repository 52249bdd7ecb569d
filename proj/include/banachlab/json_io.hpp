#pragma once

#include <json.hpp>

#include "banachlab/block_structure.hpp"
#include "banachlab/norm.hpp"
#include "banachlab/opalg.hpp"
#include "banachlab/orlicz.hpp"
#include "banachlab/seq_vector.hpp"

namespace banachlab::io {

using Json = nlohmann::ordered_json;

// Vector file format: {"entries": [[index, value], ...]}.
Json to_json(const SeqVector& v);
SeqVector seq_vector_from_json(const Json& j);

// BlockStructure: {"boundaries": [...], "blocks": [[[row-major rows]]...]}.
Json to_json(const BlockStructure& bs);
BlockStructure block_structure_from_json(const Json& j);

// OrliczFn: {"family": "F"|"G"|"Fa", "a": real}.
Json to_json(const orlicz::OrliczFn& fn);
orlicz::OrliczFn orlicz_fn_from_json(const Json& j);

// Real and complex dense matrices; complex entries are [re, im] pairs in
// row-major order.
Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd real_matrix_from_json(const Json& j);
Json to_json(const opalg::CMat& m);
opalg::CMat complex_matrix_from_json(const Json& j);

} // namespace banachlab::io
