#include "becpol/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace becpol {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::runtime_error("parse_double: not a number: " + s);
    return v;
}

namespace {

void write_preamble(std::ofstream& out, const ConfigEcho& config) {
    for (const auto& [key, value] : config) out << "# " << key << "=" << value << "\n";
}

}  // namespace

void write_csv(const std::string& path, const ConfigEcho& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_preamble(out, config);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvFile file;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(line.find_first_not_of("# "));
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                file.preamble.emplace(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!have_header) {
            file.header = fields;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f));
        file.rows.push_back(std::move(row));
    }
    return file;
}

void write_values(const std::string& path, const ConfigEcho& config,
                  const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_preamble(out, config);
    for (double v : values) out << format_double(v) << "\n";
}

std::vector<double> read_values(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_double(line));
    }
    return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

nlohmann::json double_to_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double json_to_double(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("json_to_double: unexpected value " + s);
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

const char* kind_name(EscapeCurve::Kind kind) {
    switch (kind) {
        case EscapeCurve::Kind::theta_at_z: return "theta_at_z";
        case EscapeCurve::Kind::a_n_sup: return "a_n_sup";
        case EscapeCurve::Kind::b_n_integral: return "b_n_integral";
    }
    return "unknown";
}

}  // namespace

nlohmann::json curve_json(const EscapeCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const CurvePoint& p : curve.points)
        points.push_back({{"n", p.n}, {"exponent_bits", double_to_json(p.exponent_bits)}});
    return {{"kind", kind_name(curve.kind)},
            {"points", points},
            {"tail_lo", curve.tail_lo},
            {"tail_hi", curve.tail_hi},
            {"tail_estimate_bits", double_to_json(curve.tail_estimate)}};
}

nlohmann::json bracket_json(const RateBracket& bracket) {
    return {{"lower_bits", bracket.lower_bits},
            {"upper_bits", bracket.upper_bits},
            {"point_bits", double_to_json(bracket.point_bits)},
            {"slope", bracket.slope},
            {"points_used", bracket.points_used}};
}

nlohmann::json enumeration_report_json(const PreimageEnumeration& enumeration) {
    return {{"depth", enumeration.depth},
            {"target", {{"a", enumeration.target.a}, {"b", enumeration.target.b}}},
            {"cell_count", enumeration.cells.size()},
            {"pruned_words", enumeration.pruned_words},
            {"pruned_mass_bound", enumeration.pruned_mass_bound},
            {"total_length", enumeration.total_length},
            {"exponent_bits", double_to_json(enumeration.exponent_bits())},
            {"length_checks", enumeration.length_checks},
            {"max_length_discrepancy", enumeration.max_length_discrepancy},
            {"discrepancy_flagged", enumeration.discrepancy_flagged}};
}

nlohmann::json zeta_json(const ZetaResult& result) {
    return {{"alpha", result.params.alpha}, {"beta", result.params.beta},
            {"zeta", result.zeta},          {"bound_bits", result.bound_bits},
            {"argmax_z", result.argmax_z},  {"starts", result.starts},
            {"converged", result.converged}};
}

nlohmann::json selection_json(const CodeSelection& selection, double z) {
    return {{"n", selection.n},
            {"z", z},
            {"mode", selection.mode == SelectionMode::rate ? "rate" : "block_error"},
            {"parameter", selection.parameter},
            {"info_set", selection.info_set},
            {"union_bound", selection.union_bound}};
}

nlohmann::json qn_json(const QnGrowth& growth) {
    return {{"alpha", growth.alpha},
            {"beta", growth.beta},
            {"mean_qn", growth.mean_qn},
            {"std_error", growth.std_error},
            {"growth_per_step", growth.growth},
            {"growth_std_error", growth.growth_se},
            {"zeta", growth.zeta_ref},
            {"within_bound", growth.within_bound}};
}

std::vector<std::vector<double>> curve_rows(const EscapeCurve& curve) {
    std::vector<std::vector<double>> rows;
    rows.reserve(curve.points.size());
    for (const CurvePoint& p : curve.points)
        rows.push_back({static_cast<double>(p.n), p.exponent_bits});
    return rows;
}

}  // namespace becpol
