#include "relgeo/surface_file.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "relgeo/errors.hpp"

namespace relgeo::chart {

namespace {

using expr::ParseDiagnostic;
using expr::ParseError;

struct KeyValue {
    std::string value;
    std::size_t value_offset = 0;  // byte offset of the value in the file
    std::size_t line_offset = 0;
};

[[noreturn]] void fail(std::size_t offset, const std::string& msg, const std::string& token,
                       std::string_view) {
    throw ParseError({offset, msg, token}, "surface definition file");
}

double parse_real(const std::string& s, std::size_t offset, std::string_view text) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0')) fail(offset, "expected a real number", s, text);
    return v;
}

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

} // namespace

SurfaceDefinition parse_surface_text(std::string_view text, std::string name) {
    std::map<std::string, KeyValue> surface_keys;
    std::map<std::string, KeyValue> norm_keys;

    enum class Section { None, Surface, Normalization };
    Section section = Section::None;

    std::size_t line_start = 0;
    std::size_t pos = 0;
    const std::size_t size = text.size();
    while (pos <= size) {
        if (pos == size || text[pos] == '\n') {
            std::string line(text.substr(line_start, pos - line_start));
            const std::size_t off = line_start;
            line_start = pos + 1;
            ++pos;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (t == "[surface]") {
                section = Section::Surface;
                continue;
            }
            if (t == "[normalization]") {
                section = Section::Normalization;
                continue;
            }
            if (t.front() == '[') fail(off, "unknown section", t, text);
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(off, "expected key = value", t, text);
            const std::string key = trim(line.substr(0, eq));
            std::size_t voff = off + eq + 1;
            while (voff - off < line.size() && (line[voff - off] == ' ' || line[voff - off] == '\t')) ++voff;
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) fail(off, "expected key = value", t, text);
            auto& dest = (section == Section::Surface) ? surface_keys : norm_keys;
            if (section == Section::None) fail(off, "key outside of a section", key, text);
            if (!dest.emplace(key, KeyValue{value, voff, off}).second)
                fail(off, "duplicate key '" + key + "'", key, text);
        } else {
            ++pos;
        }
    }

    auto required = [&](const char* key) -> const KeyValue& {
        auto it = surface_keys.find(key);
        if (it == surface_keys.end())
            fail(text.size(), std::string("missing required key '") + key + "'", key, text);
        return it->second;
    };

    const KeyValue& nkv = required("n");
    const int n = static_cast<int>(parse_real(nkv.value, nkv.value_offset, text));
    if (n < 2 || n > kMaxDim) fail(nkv.value_offset, "n must be 2, 3 or 4", nkv.value, text);

    const auto params = SurfaceChart::default_params(n);
    auto parse_component = [&](const KeyValue& kv) {
        try {
            return expr::parse_expression(kv.value, params);
        } catch (ParseError& e) {
            ParseDiagnostic d = e.diagnostic;
            d.offset += kv.value_offset;  // rebase into the file
            throw ParseError(d, "surface definition file");
        }
    };

    std::vector<expr::Expression> components;
    for (int c = 1; c <= n + 1; ++c) components.push_back(parse_component(required(("x" + std::to_string(c)).c_str())));

    std::vector<Interval> domain;
    for (int i = 1; i <= n; ++i) {
        const KeyValue& kv = required(("domain." + std::to_string(i)).c_str());
        const auto comma = kv.value.find(',');
        if (comma == std::string::npos) fail(kv.value_offset, "domain needs 'a, b'", kv.value, text);
        Interval iv;
        iv.lo = parse_real(trim(kv.value.substr(0, comma)), kv.value_offset, text);
        iv.hi = parse_real(trim(kv.value.substr(comma + 1)), kv.value_offset, text);
        if (!(iv.lo < iv.hi)) fail(kv.value_offset, "domain interval must satisfy a < b", kv.value, text);
        domain.push_back(iv);
    }

    std::vector<expr::Expression> guards;
    for (int k = 1;; ++k) {
        auto it = surface_keys.find("guard." + std::to_string(k));
        if (it == surface_keys.end()) break;
        guards.push_back(parse_component(it->second));
    }

    for (const auto& [key, kv] : surface_keys) {
        if (key == "n" || key.rfind("x", 0) == 0 || key.rfind("domain.", 0) == 0 ||
            key.rfind("guard.", 0) == 0)
            continue;
        fail(kv.line_offset, "unknown key '" + key + "' in [surface]", key, text);
    }

    SurfaceDefinition def{
        SurfaceChart(std::move(name), n, std::move(components), std::move(domain), std::move(guards)),
        std::nullopt};

    if (auto it = norm_keys.find("q"); it != norm_keys.end()) {
        const std::string& v = it->second.value;
        try {
            if (v == "euclidean" || v == "equiaffine" || v.rfind("equiaffine*", 0) == 0 ||
                v.rfind("qaff*", 0) == 0)
                def.normalization = parse_normalization(v, def.chart);
            else
                def.normalization = Normalization::custom(expr::parse_expression(v, params), "q:" + v);
        } catch (ParseError& e) {
            ParseDiagnostic d = e.diagnostic;
            d.offset += it->second.value_offset;
            throw ParseError(d, "surface definition file");
        } catch (const GeometryError& e) {
            fail(it->second.value_offset, e.what(), v, text);
        }
    }
    for (const auto& [key, kv] : norm_keys)
        if (key != "q") fail(kv.line_offset, "unknown key '" + key + "' in [normalization]", key, text);

    return def;
}

SurfaceDefinition load_surface_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GeometryError("cannot open surface file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string base = path;
    if (auto slash = base.find_last_of('/'); slash != std::string::npos) base = base.substr(slash + 1);
    return parse_surface_text(ss.str(), base);
}

} // namespace relgeo::chart
