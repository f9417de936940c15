#pragma once

// Minimal INI-style configuration: [section] headers, key = value lines,
// '#' or ';' comments. Every value remembers where it came from so that
// errors can point at line and column.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "photonsurf/errors.hpp"
#include "photonsurf/spacetime.hpp"

namespace photonsurf::io {

struct ConfigValue {
    std::string text;
    int line = 0;
    int column = 0;
};

class Config {
public:
    using Section = std::map<std::string, ConfigValue>;

    Config() = default;
    Config(std::string source, std::map<std::string, Section> sections, std::map<std::string, int> section_lines)
        : source_(std::move(source)), sections_(std::move(sections)), section_lines_(std::move(section_lines)) {}

    const std::string& source() const { return source_; }
    bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
    bool has(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        return it != sections_.end() && it->second.count(key) != 0;
    }
    const std::map<std::string, Section>& sections() const { return sections_; }

    const ConfigValue& value(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        if (it == sections_.end()) fail_at(0, 0, "missing section [" + section + "]");
        auto kv = it->second.find(key);
        if (kv == it->second.end()) {
            fail_at(section_lines_.at(section), 1, "missing key '" + key + "' in section [" + section + "]");
        }
        return kv->second;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = std::nullopt) const {
        if (!has(section, key)) {
            if (fallback) return *fallback;
            value(section, key);
        }
        return value(section, key).text;
    }

    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = std::nullopt) const {
        if (!has(section, key)) {
            if (fallback) return *fallback;
            value(section, key);
        }
        const auto& v = value(section, key);
        return parse_double(v, v.text, v.column);
    }

    int get_int(const std::string& section, const std::string& key, std::optional<int> fallback = std::nullopt) const {
        if (!has(section, key)) {
            if (fallback) return *fallback;
            value(section, key);
        }
        const auto& v = value(section, key);
        int out = 0;
        auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
        if (ec != std::errc() || ptr != v.text.data() + v.text.size()) {
            fail_at(v.line, v.column, "expected an integer for '" + key + "', got '" + v.text + "'");
        }
        return out;
    }

    /// Comma- or whitespace-separated list of reals.
    std::vector<double> get_list(const std::string& section, const std::string& key) const {
        const auto& v = value(section, key);
        std::vector<double> out;
        std::size_t i = 0;
        const std::string& s = v.text;
        while (i < s.size()) {
            while (i < s.size() && (s[i] == ',' || s[i] == ' ' || s[i] == '\t')) ++i;
            if (i >= s.size()) break;
            std::size_t j = i;
            while (j < s.size() && s[j] != ',' && s[j] != ' ' && s[j] != '\t') ++j;
            out.push_back(parse_double(v, s.substr(i, j - i), v.column + static_cast<int>(i)));
            i = j;
        }
        return out;
    }

    /// Location-tagged error for a value that parsed but is not acceptable.
    [[noreturn]] void reject(const std::string& section, const std::string& key, const std::string& why) const {
        const auto& v = value(section, key);
        fail_at(v.line, v.column, why);
    }

    [[noreturn]] void fail_at(int line, int column, const std::string& message) const {
        std::ostringstream os;
        os << source_;
        if (line > 0) os << ":" << line << ":" << column;
        os << ": " << message;
        throw Error(ErrorCode::ConfigParse, os.str());
    }

private:
    double parse_double(const ConfigValue& v, const std::string& token, int column) const {
        std::string t = token;
        double sign = 1.0;
        std::string_view body = t;
        if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
            sign = body.front() == '-' ? -1.0 : 1.0;
            body.remove_prefix(1);
        }
        if (body == "inf" || body == "infinity") return sign * kInfinity;
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
        if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(out)) {
            fail_at(v.line, column, "expected a real number, got '" + token + "'");
        }
        return out;
    }

    std::string source_;
    std::map<std::string, Section> sections_;
    std::map<std::string, int> section_lines_;
};

namespace detail {

inline std::string_view trim(std::string_view s, int* offset = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    if (offset) *offset = static_cast<int>(b);
    return s.substr(b, e - b);
}

inline bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

}  // namespace detail

inline Config parse_config(std::string_view text, const std::string& source = "<config>") {
    std::map<std::string, Config::Section> sections;
    std::map<std::string, int> section_lines;
    Config diag(source, {}, {});
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        // strip comments that start a line or follow whitespace
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if ((raw[i] == '#' || raw[i] == ';') && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
                raw = raw.substr(0, i);
                break;
            }
        }
        int lead = 0;
        const std::string_view line = detail::trim(raw, &lead);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const int col0 = lead + 1;
        if (line.front() == '[') {
            if (line.back() != ']') {
                diag.fail_at(line_no, col0 + static_cast<int>(line.size()), "expected ']' to close section header");
            }
            int off = 0;
            const auto name = detail::trim(line.substr(1, line.size() - 2), &off);
            if (!detail::valid_name(name)) diag.fail_at(line_no, col0 + 1 + off, "invalid section name");
            current = std::string(name);
            if (sections.count(current)) diag.fail_at(line_no, col0, "duplicate section [" + current + "]");
            sections[current];
            section_lines[current] = line_no;
        } else {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) diag.fail_at(line_no, col0, "expected 'key = value'");
            if (current.empty()) diag.fail_at(line_no, col0, "key outside of any [section]");
            int koff = 0;
            const auto key = detail::trim(line.substr(0, eq), &koff);
            if (!detail::valid_name(key)) diag.fail_at(line_no, col0 + koff, "invalid key name");
            int voff = 0;
            const auto value = detail::trim(line.substr(eq + 1), &voff);
            const int vcol = col0 + static_cast<int>(eq) + 1 + voff;
            auto& sec = sections[current];
            if (sec.count(std::string(key))) {
                diag.fail_at(line_no, col0 + koff, "duplicate key '" + std::string(key) + "'");
            }
            sec[std::string(key)] = ConfigValue{std::string(value), line_no, vcol};
        }
        if (end == text.size()) break;
    }
    return Config(source, std::move(sections), std::move(section_lines));
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigParse, path.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

/// (r, f) rows from a CSV file whose header is exactly "r,f".
inline std::pair<std::vector<double>, std::vector<double>> load_metric_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigParse, path.string() + ": cannot open metric table");
    std::string line;
    int line_no = 0;
    std::vector<double> r, f;
    auto fail = [&](int col, const std::string& msg) {
        std::ostringstream os;
        os << path.string() << ":" << line_no << ":" << col << ": " << msg;
        throw Error(ErrorCode::ConfigParse, os.str());
    };
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header) {
            if (t != "r,f") fail(1, "expected header 'r,f'");
            header = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string_view::npos) fail(1, "expected two comma-separated values");
        double a = 0.0, b = 0.0;
        const auto ra = detail::trim(t.substr(0, comma));
        const auto rb = detail::trim(t.substr(comma + 1));
        auto [pa, ea] = std::from_chars(ra.data(), ra.data() + ra.size(), a);
        if (ea != std::errc() || pa != ra.data() + ra.size()) fail(1, "invalid radius value");
        auto [pb, eb] = std::from_chars(rb.data(), rb.data() + rb.size(), b);
        if (eb != std::errc() || pb != rb.data() + rb.size()) fail(static_cast<int>(comma) + 2, "invalid f value");
        r.push_back(a);
        f.push_back(b);
    }
    if (!header) fail(1, "empty metric table");
    return {r, f};
}

/// Spacetime described by the [spacetime] section. `base` resolves relative
/// table paths.
inline ClassSSpacetime spacetime_from_config(const Config& cfg, const std::filesystem::path& base = ".") {
    const std::string sec = "spacetime";
    const std::string family = cfg.get_string(sec, "family");
    const int n = cfg.get_int(sec, "n", 3);
    auto wrap = [&](auto&& build) -> ClassSSpacetime {
        try {
            return build();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::UnknownFamily) cfg.reject(sec, "family", e.what());
            if (e.code() == ErrorCode::InvalidArgument) cfg.reject(sec, "family", e.what());
            throw;
        }
    };
    ClassSSpacetime st = wrap([&]() -> ClassSSpacetime {
        if (family == "custom") {
            if (n < 2) cfg.reject(sec, "n", "custom profiles need n >= 2");
            const auto table_path = base / cfg.get_string(sec, "table");
            auto [r, f] = load_metric_table(table_path);
            const double lo = cfg.get_double(sec, "r_lo", r.front());
            const double hi = cfg.get_double(sec, "r_hi", r.back());
            if (lo < r.front() || hi > r.back()) {
                cfg.reject(sec, cfg.has(sec, "r_lo") ? "r_lo" : "table", "radial interval exceeds the table range");
            }
            return ClassSSpacetime(n, lo, hi, MetricProfile::from_table(r, f, "table " + table_path.string()),
                                   Family::Custom);
        }
        if (n < 3) cfg.reject(sec, "n", "built-in families need n >= 3");
        std::vector<double> params;
        if (family == "schwarzschild") {
            params = {cfg.get_double(sec, "m")};
        } else if (family == "reissner-nordstrom" || family == "rn") {
            params = {cfg.get_double(sec, "m"), cfg.get_double(sec, "q")};
        } else if (family == "schwarzschild-ads" || family == "sads") {
            params = {cfg.get_double(sec, "m"), cfg.get_double(sec, "L")};
        }
        return build_family(family, params, n);
    });
    if (family != "custom" && (cfg.has(sec, "r_lo") || cfg.has(sec, "r_hi"))) {
        st = restrict_interval(st, cfg.get_double(sec, "r_lo", st.r_lo()), cfg.get_double(sec, "r_hi", st.r_hi()));
    }
    return st;
}

}  // namespace photonsurf::io
