#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "becpol/bounds.hpp"
#include "becpol/design.hpp"
#include "becpol/exact.hpp"
#include "becpol/stochastic.hpp"

namespace becpol {

// Resolved run configuration echoed into every artifact: '#' key=value
// preamble lines for CSV, a "config" object for JSON. Keys are emitted in
// sorted order so identical configs serialize identically.
using ConfigEcho = std::map<std::string, std::string>;

// %.17g — doubles survive a write/read/write cycle byte for byte
std::string format_double(double v);
double parse_double(const std::string& s);

// RFC-4180-style body (numeric fields, LF line endings) after the
// '#'-prefixed preamble.
void write_csv(const std::string& path, const ConfigEcho& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct CsvFile {
    ConfigEcho preamble;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvFile read_csv(const std::string& path);

// one value per line after the preamble (external-plotting dump)
void write_values(const std::string& path, const ConfigEcho& config,
                  const std::vector<double>& values);
std::vector<double> read_values(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

// JSON cannot carry non-finite numbers; they become the strings
// "inf"/"-inf"/"nan" and are converted back by json_to_double.
nlohmann::json double_to_json(double v);
double json_to_double(const nlohmann::json& j);

std::string iso8601_utc_now();

// artifact builders
nlohmann::json curve_json(const EscapeCurve& curve);
nlohmann::json bracket_json(const RateBracket& bracket);
nlohmann::json enumeration_report_json(const PreimageEnumeration& enumeration);
nlohmann::json zeta_json(const ZetaResult& result);
nlohmann::json selection_json(const CodeSelection& selection, double z);
nlohmann::json qn_json(const QnGrowth& growth);

std::vector<std::vector<double>> curve_rows(const EscapeCurve& curve);

}  // namespace becpol
