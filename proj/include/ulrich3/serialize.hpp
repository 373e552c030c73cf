#ifndef ULRICH3_SERIALIZE_HPP
#define ULRICH3_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "ulrich3/cech.hpp"
#include "ulrich3/psheaf.hpp"

namespace ucli {

using Json = nlohmann::ordered_json;

// {rows, cols, source_twists, target_twists,
//  entries: [[row, col, [[num, den, e0, e1, e2, e3], ...]], ...]}
// entries row-major, polynomial terms in key order; reserializing a loaded
// matrix is byte-identical
Json matrix_to_json(const psheaf::PolyMatrix& m);
psheaf::PolyMatrix matrix_from_json(const Json& j);

// {"sheaf": ..., "m": ..., "entries": [{"t": ..., "h": [h0,h1,h2,h3]}, ...],
//  "provenance": {...}}
Json table_to_json(const cech::CohomologyTable& t);
cech::CohomologyTable table_from_json(const Json& j);

std::string render_table_md(const cech::CohomologyTable& t);
std::string render_table_csv(const cech::CohomologyTable& t);

void write_text_atomic(const std::string& path, const std::string& content);

} // namespace ucli

#endif
