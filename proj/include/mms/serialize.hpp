#pragma once

#include <json.hpp>
#include <string>

#include "mms/eisenstein.hpp"
#include "mms/hecke.hpp"
#include "mms/pairing.hpp"

namespace mms {

using Json = nlohmann::ordered_json;

// Integers are written as decimal strings, rationals as "p/q".
Json space_to_json(const SymbolSpace& space);
// Rebuilds the space from family and level and checks every stored table against it;
// throws InvalidInput on malformed documents or any mismatch.
SymbolSpace space_from_json(const Json& doc);

Json operator_to_json(const OperatorMatrix& op);
OperatorMatrix operator_from_json(const Json& doc);

Json pairing_report_to_json(const SymbolSpace& space, const PerfectnessReport& report, bool g_identity);
Json numeric_report_to_json(const NumericReport& report);

// Throws IoError when the file cannot be written or read.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace mms
