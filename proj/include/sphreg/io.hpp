#pragma once

// File formats: coefficient, rule, sample, results, summary and trace CSVs,
// the flat key = value experiment config, and the SVG strip plot.
//
// Every number is written with 17 significant digits via std::to_chars, which
// round-trips doubles and ignores the process locale.

#include "sphreg/errors.hpp"
#include "sphreg/experiments.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"
#include "sphreg/selection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace sphreg::io {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view text, const std::string& what) {
    const auto s = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InvalidInput(what + ": cannot parse '" + std::string(s) + "' as a number");
    }
    return v;
}

inline long long parse_integer(std::string_view text, const std::string& what) {
    const auto s = trim(text);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InvalidInput(what + ": cannot parse '" + std::string(s) + "' as an integer");
    }
    return v;
}

inline bool parse_bool(std::string_view text, const std::string& what) {
    const auto s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw InvalidInput(what + ": expected true or false, got '" + std::string(s) + "'");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InvalidInput("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw InvalidInput("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string_view> fields;
};

/// Splits CSV text with a mandatory header. Blank lines are skipped. Every
/// data row must carry exactly the header's column count.
inline std::vector<CsvRow> parse_csv(std::string_view text, const std::vector<std::string>& expected_header,
                                     const std::string& source) {
    std::vector<CsvRow> rows;
    std::size_t pos = 0;
    std::size_t line = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto raw = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line;
        if (raw.empty()) continue;
        CsvRow row{line, {}};
        std::size_t p = 0;
        while (true) {
            const auto c = raw.find(',', p);
            row.fields.push_back(trim(raw.substr(p, c == std::string_view::npos ? raw.size() - p : c - p)));
            if (c == std::string_view::npos) break;
            p = c + 1;
        }
        if (!header_seen) {
            header_seen = true;
            bool ok = row.fields.size() == expected_header.size();
            for (std::size_t i = 0; ok && i < row.fields.size(); ++i) ok = row.fields[i] == expected_header[i];
            if (!ok) {
                std::string want;
                for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
                throw InvalidInput(source + ":" + std::to_string(line) + ": expected header '" + want + "'");
            }
            continue;
        }
        if (row.fields.size() != expected_header.size()) {
            throw InvalidInput(source + ":" + std::to_string(line) + ": expected " +
                               std::to_string(expected_header.size()) + " fields, got " +
                               std::to_string(row.fields.size()));
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw InvalidInput(source + ": empty file, header required");
    return rows;
}

// ---- coefficients: k,j,value --------------------------------------------

inline std::string coefficients_csv(const HarmonicCoefficients& c) {
    std::string out = "k,j,value\n";
    for (int k = 0; k <= c.M(); ++k) {
        for (int j = 1; j <= 2 * k + 1; ++j) {
            out += std::to_string(k) + "," + std::to_string(j) + "," + format_double(c(k, j)) + "\n";
        }
    }
    return out;
}

/// The file must contain every (k, j) with k <= M exactly once, for some M.
inline HarmonicCoefficients parse_coefficients(std::string_view text, double radius,
                                               const std::string& source = "coefficients") {
    const auto rows = parse_csv(text, {"k", "j", "value"}, source);
    std::size_t n = rows.size();
    int M = -1;
    while (basis_size(M + 1) <= n) ++M;
    if (M < 0 || basis_size(M) != n) {
        throw InvalidInput(source + ": " + std::to_string(n) + " rows is not a full triangle (M+1)^2");
    }
    HarmonicCoefficients c(M, radius);
    std::vector<bool> seen(n, false);
    for (const auto& r : rows) {
        const auto where = source + ":" + std::to_string(r.line);
        const auto k = parse_integer(r.fields[0], where);
        const auto j = parse_integer(r.fields[1], where);
        if (k < 0 || k > M || j < 1 || j > 2 * k + 1) throw InvalidInput(where + ": index (k, j) out of range");
        const auto idx = DegreeIndex(static_cast<int>(k), static_cast<int>(j)).flat();
        if (seen[idx]) throw InvalidInput(where + ": duplicate entry for (k, j)");
        seen[idx] = true;
        c.values()[static_cast<Eigen::Index>(idx)] = parse_double(r.fields[2], where);
    }
    return c;
}

// ---- cubature rule: x,y,z,weight ----------------------------------------

inline std::string rule_csv(const CubatureRule& rule) {
    std::string out = "x,y,z,weight\n";
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto& p = rule.points()[i];
        out += format_double(p.x()) + "," + format_double(p.y()) + "," + format_double(p.z()) + "," +
               format_double(rule.weights()[i]) + "\n";
    }
    return out;
}

// ---- samples: x,y,z,value ------------------------------------------------

inline std::string samples_csv(const CubatureRule& rule, std::span<const double> values) {
    detail::require(values.size() == rule.size(), "samples_csv: value count does not match rule");
    std::string out = "x,y,z,value\n";
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto& p = rule.points()[i];
        out += format_double(p.x()) + "," + format_double(p.y()) + "," + format_double(p.z()) + "," +
               format_double(values[i]) + "\n";
    }
    return out;
}

/// Sample values at the points of `rule`, in rule order. Each row's point must
/// coincide with the corresponding rule point within 1e-9 (scaled by rho).
inline std::vector<double> parse_samples(std::string_view text, const CubatureRule& rule,
                                         const std::string& source = "samples") {
    const auto rows = parse_csv(text, {"x", "y", "z", "value"}, source);
    if (rows.size() != rule.size()) {
        const auto line = rows.empty() ? std::size_t{1} : rows.back().line;
        throw InvalidInput(source + ":" + std::to_string(line) + ": expected " + std::to_string(rule.size()) +
                           " sample rows for M = " + std::to_string(rule.M()) + ", got " +
                           std::to_string(rows.size()));
    }
    const double tol = 1e-9 * std::max(1.0, rule.radius());
    std::vector<double> values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto where = source + ":" + std::to_string(r.line);
        const double x = parse_double(r.fields[0], where);
        const double y = parse_double(r.fields[1], where);
        const double z = parse_double(r.fields[2], where);
        const auto& p = rule.points()[i];
        if (std::abs(x - p.x()) > tol || std::abs(y - p.y()) > tol || std::abs(z - p.z()) > tol) {
            throw InvalidInput(where + ": point does not match the canonical rule point " + std::to_string(i));
        }
        values[i] = parse_double(r.fields[3], where);
    }
    return values;
}

// ---- experiment outputs -------------------------------------------------

inline std::string results_csv(const std::vector<TrialResult>& results) {
    std::string out = "case,trial,method,relative_error,alpha,lambda\n";
    for (const auto& r : results) {
        out += r.case_name + "," + std::to_string(r.trial) + "," + std::string(method_name(r.method)) + "," +
               format_double(r.relative_error) + "," + format_double(r.chosen_alpha) + "," +
               format_double(r.chosen_lambda) + "\n";
    }
    return out;
}

inline std::string summary_csv(const std::vector<CaseSummary>& summaries) {
    std::string out =
        "case,median_two_step,median_smoothing_only,median_collocation_only,leader_ratio,follows_leader\n";
    for (const auto& s : summaries) {
        out += s.case_name + "," + format_double(s.median_two_step) + "," + format_double(s.median_smoothing_only) +
               "," + format_double(s.median_collocation_only) + "," + format_double(s.leader_ratio) + "," +
               (s.follows_leader ? "true" : "false") + "\n";
    }
    return out;
}

inline std::string trace_csv(const std::vector<TwoStepTraceRecord>& trace) {
    std::string out = "alpha,chosen_lambda,inner_min_diff,outer_diff\n";
    for (const auto& t : trace) {
        out += format_double(t.alpha) + "," + format_double(t.chosen_lambda) + "," + format_double(t.inner_min_diff) +
               "," + format_double(t.outer_diff) + "\n";
    }
    return out;
}

/// Three rows of circles (two-step on top, smoothing-only in the middle,
/// collocation-only at the bottom) along a relative-error axis.
inline std::string strip_plot_svg(const std::vector<TrialResult>& results, const std::string& title) {
    double hi = 0.0;
    for (const auto& r : results) {
        if (std::isfinite(r.relative_error)) hi = std::max(hi, r.relative_error);
    }
    hi = (hi > 0.0) ? hi * 1.05 : 1.0;
    const double left = 130.0;
    const double width = 460.0;
    const double row_y[3] = {60.0, 110.0, 160.0};
    auto xpos = [&](double e) { return left + width * std::clamp(e / hi, 0.0, 1.0); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"230\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\">" + title + "</text>\n";
    const char* labels[3] = {"two-step", "smoothing only", "collocation only"};
    for (int m = 0; m < 3; ++m) {
        s += "<text x=\"" + format_double(left - 10) + "\" y=\"" + format_double(row_y[m] + 4) +
             "\" text-anchor=\"end\">" + labels[m] + "</text>\n";
        s += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(row_y[m]) + "\" x2=\"" +
             format_double(left + width) + "\" y2=\"" + format_double(row_y[m]) + "\" stroke=\"#ddd\"/>\n";
    }
    for (const auto& r : results) {
        s += "<circle cx=\"" + format_double(xpos(r.relative_error)) + "\" cy=\"" +
             format_double(row_y[static_cast<int>(r.method)]) + "\" r=\"5\" fill=\"none\" stroke=\"black\"/>\n";
    }
    const double axis_y = 195.0;
    s += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(axis_y) + "\" x2=\"" +
         format_double(left + width) + "\" y2=\"" + format_double(axis_y) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = hi * t / 4.0;
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 3);
        s += "<text x=\"" + format_double(xpos(v)) + "\" y=\"" + format_double(axis_y + 16) +
             "\" text-anchor=\"middle\">" + std::string(buf, res.ptr) + "</text>\n";
    }
    s += "<text x=\"" + format_double(left + width / 2) + "\" y=\"225\" text-anchor=\"middle\">relative error</text>\n";
    s += "</svg>\n";
    return s;
}

// ---- experiment config --------------------------------------------------

/// Experiment definition plus output locations.
struct RunConfig {
    ExperimentCase experiment;
    std::string output = "results.csv";
    std::string svg;      // empty: no plot
    std::string summary;  // empty: no summary file
};

inline SymbolKind parse_symbol_kind(std::string_view s, const std::string& where) {
    if (s == "sst") return SymbolKind::sst;
    if (s == "sgg") return SymbolKind::sgg;
    if (s == "geometric") return SymbolKind::geometric;
    if (s == "polynomial") return SymbolKind::polynomial;
    throw InvalidInput(where + ": symbol must be one of sst, sgg, geometric, polynomial");
}

/// Grammar: one `key = value` per line; `#` starts a comment; blank lines are
/// ignored; keys may appear once. `preset = fig1a..fig1e` loads a built-in
/// case first, whatever its position, and the other keys override it.
inline RunConfig parse_config(std::string_view text, const std::string& source = "config") {
    struct Entry {
        std::string value;
        std::size_t line;
    };
    std::map<std::string, Entry> entries;
    std::size_t pos = 0;
    std::size_t line = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidInput(source + ":" + std::to_string(line) + ": expected 'key = value'");
        }
        const std::string key(trim(raw.substr(0, eq)));
        const std::string value(trim(raw.substr(eq + 1)));
        if (key.empty()) throw InvalidInput(source + ":" + std::to_string(line) + ": empty key");
        if (!entries.emplace(key, Entry{value, line}).second) {
            throw InvalidInput(source + ":" + std::to_string(line) + ": duplicate key '" + key + "'");
        }
    }

    RunConfig cfg;
    auto& c = cfg.experiment;
    if (auto it = entries.find("preset"); it != entries.end()) {
        const auto& v = it->second.value;
        if (v.size() != 5 || v.rfind("fig1", 0) != 0 || v[4] < 'a' || v[4] > 'e') {
            throw InvalidInput(source + ":" + std::to_string(it->second.line) + ": unknown preset '" + v +
                               "' (expected fig1a..fig1e)");
        }
        c = benchmark_case(v[4]);
    }

    for (const auto& [key, e] : entries) {
        const std::string where = source + ":" + std::to_string(e.line) + ": " + key;
        const auto& v = e.value;
        if (key == "preset") continue;
        else if (key == "name") c.name = v;
        else if (key == "symbol") c.symbol.kind = parse_symbol_kind(v, where);
        else if (key == "symbol_param") c.symbol.param = parse_double(v, where);
        else if (key == "R") c.R = parse_double(v, where);
        else if (key == "rho") c.rho = parse_double(v, where);
        else if (key == "M") c.M = static_cast<int>(parse_integer(v, where));
        else if (key == "upsilon") c.upsilon = parse_double(v, where);
        else if (key == "beta_exponent") c.beta.exponent = parse_double(v, where);
        else if (key == "epsilon") c.epsilon = parse_double(v, where);
        else if (key == "trials") c.trials = static_cast<int>(parse_integer(v, where));
        else if (key == "seed") {
            const auto s = parse_integer(v, where);
            if (s < 0) throw InvalidInput(where + " must be >= 0");
            c.seed = static_cast<std::uint64_t>(s);
        }
        else if (key == "alpha_base") c.alpha_grid.base = parse_double(v, where);
        else if (key == "alpha_factor") c.alpha_grid.factor = parse_double(v, where);
        else if (key == "alpha_count") c.alpha_grid.count = static_cast<int>(parse_integer(v, where));
        else if (key == "alpha_include_zero") c.alpha_grid.include_zero = parse_bool(v, where);
        else if (key == "lambda_base") c.lambda_grid.base = parse_double(v, where);
        else if (key == "lambda_factor") c.lambda_grid.factor = parse_double(v, where);
        else if (key == "lambda_count") c.lambda_grid.count = static_cast<int>(parse_integer(v, where));
        else if (key == "lambda_include_zero") c.lambda_grid.include_zero = parse_bool(v, where);
        else if (key == "self_check") c.self_check = parse_bool(v, where);
        else if (key == "output") cfg.output = v;
        else if (key == "svg") cfg.svg = v;
        else if (key == "summary") cfg.summary = v;
        else throw InvalidInput(source + ":" + std::to_string(e.line) + ": unknown key '" + key + "'");
    }

    try {
        c.validate();
        (void)c.make_symbol();
    } catch (const InvalidInput& ex) {
        throw InvalidInput(source + ": invalid config: " + ex.what());
    }
    if (cfg.output.empty()) throw InvalidInput(source + ": invalid config: output must not be empty");
    return cfg;
}

}  // namespace sphreg::io
