#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sato/connections.hpp"
#include "sato/errors.hpp"
#include "sato/quivers.hpp"
#include "sato/series.hpp"
#include "sato/virasoro.hpp"

namespace sato {

using json = nlohmann::json;

inline json to_json(const Series& s) { return s.str(); }
inline json to_json(const CycScalar& c) { return c.str(); }
inline json to_json(const OneDimClass& c) { return {{"polypart", c.polypart.str()}, {"residue", c.residue.str()}}; }
inline json to_json(const RamifiedClass& c) {
    return {{"ram", c.ram}, {"polypart", c.polypart.str()}, {"residue", c.residue.str()}};
}
template <class T>
json to_json(const std::vector<T>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline json to_json(const QuiverSpec& s) {
    json f = json::array();
    for (const auto& [k, c] : s.f.simplified_ram().terms()) f.push_back({k, c.str()});
    return {{"n", s.n}, {"sigma", cycle_string(s.sigma)}, {"f", f}, {"p", s.p}, {"kind", to_string(s.kind())}};
}

inline json to_json(const SeriesMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const QuiverSolution& s, long shown) {
    json phis = json::array();
    for (const auto& p : s.phis) phis.push_back(p.truncated(-(shown + 1)).str());
    return {{"root_twist", s.root_twist}, {"order", shown}, {"f", s.f.str()},
            {"constants", to_json(s.constants)}, {"phis", phis}};
}

inline json to_json(const VerificationReport& r) {
    json fails = json::array();
    for (const auto& c : r.failures()) {
        json j{{"vertex", c.vertex}, {"constraint", c.constraint}, {"detail", c.detail}};
        j["exponent"] = c.exponent ? json(*c.exponent) : json(nullptr);
        fails.push_back(j);
    }
    return {{"passed", r.passed}, {"checks", r.checks.size()}, {"failures", fails}};
}

/// A command outcome: named checks plus free-form results.
struct Report {
    struct Check {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    std::string command;
    json input = json::object();
    json results = json::object();
    std::vector<Check> checks;

    void check(std::string name, bool ok, std::string detail = "") {
        checks.push_back({std::move(name), ok, std::move(detail)});
    }
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    json to_json() const {
        json cs = json::array();
        for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        return {{"command", command}, {"input", input}, {"results", results}, {"checks", cs}, {"passed", passed()}};
    }

    std::string text() const {
        std::ostringstream out;
        out << command << "\n";
        render(out, results, "  ");
        for (const auto& c : checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.detail.empty()) out << ": " << c.detail;
            out << "\n";
        }
        out << (passed() ? "PASS" : "FAIL") << "\n";
        return out.str();
    }

private:
    static void render(std::ostream& out, const json& j, const std::string& indent) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string key = j.is_object() ? it.key() : "-";
            if (it->is_structured() && !it->empty() && !is_flat(*it)) {
                out << indent << key << ":\n";
                render(out, *it, indent + "  ");
            } else {
                out << indent << key << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
            }
        }
    }
    static bool is_flat(const json& j) {
        if (!j.is_array()) return false;
        for (const auto& x : j)
            if (x.is_structured()) return false;
        return true;
    }
};

/// A parsed quiver file plus its companion matrix when B is given.
struct LoadedSpec {
    QuiverSpec spec;
    std::optional<CompanionMatrix> companion;
};

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + " column " + std::to_string(col);
}

template <class F>
auto field(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        fail(ErrorKind::Parse, where + ": " + e.what());
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, where + ": " + e.what());
    }
}

inline Permutation parse_sigma(const json& j, int n) {
    if (j.is_string()) return parse_cycles(j.get<std::string>(), n);
    std::string text;
    for (const auto& cycle : j) {
        text += "(";
        for (std::size_t i = 0; i < cycle.size(); ++i) text += (i ? " " : "") + std::to_string(cycle[i].get<int>());
        text += ")";
    }
    return parse_cycles(text, n);
}

}  // namespace detail

/// Keys n, sigma (cycle string or list of cycles), f ([[exponent, "coefficient"], ...]), p, optional B (rows of polynomial strings).
inline LoadedSpec parse_quiver_spec(const std::string& text, const std::string& source = "<input>") {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, source + ": " + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) +
                                   ": malformed JSON");
    }
    if (!j.is_object()) fail(ErrorKind::Parse, source + ": top level must be an object");
    for (const char* key : {"n", "sigma", "f"})
        if (!j.contains(key)) fail(ErrorKind::Parse, source + ": missing key '" + key + "'");
    LoadedSpec out;
    auto& s = out.spec;
    s.n = detail::field(source + ": key 'n'", [&] { return j.at("n").get<int>(); });
    if (s.n < 1) fail(ErrorKind::Parse, source + ": key 'n' must be positive");
    s.sigma = detail::field(source + ": key 'sigma'", [&] { return detail::parse_sigma(j.at("sigma"), s.n); });
    s.p = detail::field(source + ": key 'p'", [&] { return j.value("p", 1); });
    std::vector<Series::Term> terms;
    const json& f = j.at("f");
    if (!f.is_array()) fail(ErrorKind::Parse, source + ": key 'f' must be a list of [exponent, coefficient]");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string where = source + ": f[" + std::to_string(i) + "]";
        terms.push_back(detail::field(where, [&] {
            const json& t = f.at(i);
            if (!t.is_array() || t.size() != 2) fail(ErrorKind::Parse, "expected [exponent, coefficient]");
            const json& c = t.at(1);
            const CycScalar coef = c.is_string() ? CycScalar::parse(c.get<std::string>()) : CycScalar(c.get<long>());
            return Series::Term{t.at(0).get<long>(), coef};
        }));
    }
    s.f = Series::from_terms(terms);
    detail::field(source, [&] {
        s.validate();
        return 0;
    });
    if (j.contains("B")) {
        const json& b = j.at("B");
        if (!b.is_array() || b.size() != static_cast<std::size_t>(s.n))
            fail(ErrorKind::Parse, source + ": key 'B' must have n rows");
        SeriesMatrix m(static_cast<std::size_t>(s.n), static_cast<std::size_t>(s.n));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (!b[r].is_array() || b[r].size() != m.cols())
                fail(ErrorKind::Parse, source + ": B row " + std::to_string(r + 1) + " must have n entries");
            for (std::size_t c = 0; c < m.cols(); ++c)
                m(r, c) = detail::field(
                    source + ": B[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]",
                    [&] { return Series::parse(b[r][c].get<std::string>()); });
        }
        out.companion = make_companion(s.sigma, m);
    }
    return out;
}

inline LoadedSpec load_quiver_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_quiver_spec(ss.str(), path);
}

}  // namespace sato
