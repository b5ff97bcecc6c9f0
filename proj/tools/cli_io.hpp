#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "zrplab/sparse.hpp"

namespace zrp::cli {

using json = nlohmann::ordered_json;

// Exact mode accepts "p/q" and integers only; float mode additionally
// accepts decimals such as "0.4" or "1e-3", converted to the exact fraction
// they denote.
Rational parse_scalar(const std::string& text, const std::string& field, bool float_ok);
std::vector<Rational> parse_scalar_list(const std::string& text, const std::string& field, bool float_ok);
MultiIndex parse_index(const std::string& text, const std::string& field);

// Threads allowed by ZRPLAB_THREADS (default 1).
unsigned thread_cap();

json state_json(const State& s);
State state_from_json(const json& j);

// {"rows", "cols", "domain": [...], "codomain": [...], "entries": [[i, j, "p/q"], ...]}
json operator_json(const SparseOperator& op);
SparseOperator operator_from_json(const json& j);

// Indented JSON with arrays of scalars (and of scalar arrays) kept on one line.
std::string dump(const json& j);

// Writes via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);
// Serialized document with the operator attached; the text is parsed back
// and must rebuild the identical operator (std::logic_error otherwise).
std::string operator_document(json doc, const SparseOperator& op);

}  // namespace zrp::cli
