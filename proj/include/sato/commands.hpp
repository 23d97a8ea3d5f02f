#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sato/diffops.hpp"
#include "sato/fourier.hpp"
#include "sato/quivers.hpp"
#include "sato/report.hpp"
#include "sato/virasoro.hpp"

namespace sato {

struct RunConfig {
    long order = 12;
    std::optional<int> depth;
    std::uint64_t seed = 0;
    bool random_b = false;   // normal-form: draw B from the seed when the file has none
    bool recover_f = false;  // solve: use the recovered factor instead of the file's f
    std::string data_dir = ".";

    void validate() const {
        if (order < 4) fail(ErrorKind::InvalidArgument, "--order must be at least 4");
        if (depth && *depth < 1) fail(ErrorKind::InvalidArgument, "--depth must be positive");
    }
};

struct VirasoroParams {
    int m = 1, n = 2;
    int T = 12, G = 6, d = 3;
    std::optional<int> string_n, string_k;
};

namespace detail {

inline json companion_json(const CompanionNormalForm& nf) {
    json j{{"classes", to_json(nf.classes)},
           {"certified", nf.certified},
           {"recovered_f", nf.recovered_f.str()},
           {"nonzero_residue", nf.nonzero_residue},
           {"split_depth", nf.split.depth}};
    if (nf.shift) j["shift"] = *nf.shift;
    return j;
}

inline std::string class_list(const std::vector<OneDimClass>& v) {
    std::string s;
    for (const auto& c : v) s += (s.empty() ? "" : " ") + c.str();
    return s;
}

}  // namespace detail

inline Report cmd_normal_form(const LoadedSpec& in, const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "normal-form";
    rep.input = to_json(in.spec);
    const QuiverSpec& spec = in.spec;
    const bool string_p1 = spec.kind() == QuiverKind::String && spec.p == 1;
    if (string_p1) rep.results["ks_classes"] = to_json(ks_normal_form(spec));

    std::optional<CompanionMatrix> cm = in.companion;
    bool generated = false;
    if (!cm && cfg.random_b) {
        const long s = spec.f.simplified_ram().top();
        if (!admissible_degree(spec.sigma, s))
            fail(ErrorKind::DegenerateLeading, "degree " + std::to_string(s) + " is not admissible for sigma");
        cm = random_companion(spec.sigma, s, cfg.seed);
        generated = true;
        rep.results["generated_B"] = to_json(cm->B);
    }
    if (!cm) return rep;

    const auto nf = companion_normal_form(*cm, generated ? std::nullopt : std::optional<Series>(spec.f), cfg.depth);
    rep.results["companion"] = detail::companion_json(nf);
    rep.check("splitting certified", nf.certified);
    if (spec.p == 1 && constant_shift(spec.sigma) == std::optional<int>(spec.n - 1)) {
        const auto ks = ks_normal_form(string_quiver(spec.n, nf.recovered_f));
        rep.check("companion classes equal KS classes of the recovered factor", class_multiset_equal(ks, nf.classes));
    }
    if (nf.shift_law_holds)
        rep.check("shift law with the recovered factor", *nf.shift_law_holds,
                  "k = " + std::to_string(*nf.shift));
    if (nf.supplied_f_consistent) {
        std::string detail;
        if (!*nf.supplied_f_consistent)
            detail = "factor leading with the top coefficient is " + nf.classes[nf.lambda0].str();
        rep.check("supplied f is an exponential factor", *nf.supplied_f_consistent, detail);
    }
    return rep;
}

inline Report cmd_solve(const LoadedSpec& in, const RunConfig& cfg) {
    cfg.validate();
    if (!in.companion) fail(ErrorKind::InvalidArgument, "solve needs a spec with B");
    Report rep;
    rep.command = "solve";
    rep.input = to_json(in.spec);
    const CompanionMatrix& cm = *in.companion;
    Series f = in.spec.f;
    if (cfg.recover_f) f = companion_normal_form(cm, std::nullopt, cfg.depth).recovered_f;
    rep.results["f"] = f.str();
    const auto sheets = moduli_cover(cm, f, cfg.order);
    json js = json::array();
    for (const auto& sh : sheets) {
        const QuiverSpec spec{cm.n, cm.sigma, sh.f, 1};
        const auto v = verify_quiver_solution(sh, spec, cfg.order);
        json j = to_json(sh, cfg.order);
        j["verification"] = to_json(v);
        js.push_back(j);
        std::string detail;
        if (!v.passed) {
            const auto fl = v.failures().front();
            detail = "vertex " + std::to_string(fl.vertex) + " " + fl.constraint + ": " + fl.detail;
        }
        rep.check("sheet " + std::to_string(sh.root_twist) + " verified", v.passed, detail);
    }
    rep.results["sheets"] = js;
    rep.check("sheets pairwise distinct", sheets_distinct(sheets));
    return rep;
}

inline Report cmd_curve(const LoadedSpec& in, const RunConfig&) {
    Report rep;
    rep.command = "curve";
    rep.input = to_json(in.spec);
    const BiPoly curve = classical_limit_curve(in.spec);
    rep.results["curve"] = curve.str();
    rep.check("rational coefficients", curve.has_rational_coefficients());
    rep.check("matches the determinant of the hbar form", curve == classical_limit(hbar_ks_form(in.spec)));
    return rep;
}

inline Report cmd_fourier(const LoadedSpec& in, const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "fourier";
    rep.input = to_json(in.spec);
    const Series f = in.spec.f.part_at_or_above(0);
    if (!same_value(f, in.spec.f)) rep.results["note"] = "negative powers of f dropped: transform uses " + f.str();
    json out = json::array();
    for (int i = 0; i < in.spec.n; ++i) {
        const LftInput li{f, i, in.spec.n};
        const auto res = lft_infty_infty(li, static_cast<int>(cfg.order));
        out.push_back({{"input_f", f.str()}, {"r", res.r}, {"twist", i}, {"output", to_json(res.out)}});
        rep.check("g/h consistency, twist " + std::to_string(i), gh_consistency(li, static_cast<int>(cfg.order)));
    }
    rep.results["transforms"] = out;
    return rep;
}

inline Report cmd_virasoro(const VirasoroParams& p) {
    Report rep;
    rep.command = "virasoro";
    rep.input = {{"m", p.m}, {"n", p.n}, {"T", p.T}, {"G", p.G}, {"d", p.d}};
    if (p.m + p.n != 0) {
        const FockOp lhs = fock_commutator(build_L(p.m, p.T), build_L(p.n, p.T));
        const FockOp rhs = Rational(p.m - p.n) * build_L(p.m + p.n, p.T);
        rep.check("[L_" + std::to_string(p.m) + ", L_" + std::to_string(p.n) + "] = " + std::to_string(p.m - p.n) +
                      " L_" + std::to_string(p.m + p.n),
                  guarded_equal(lhs, rhs, p.d, p.G));
    } else {
        const auto c = central_residual(p.m, p.T, p.d, p.G);
        rep.results["central_residual"] = {{"m", p.m},
                                           {"residual", c.residual.str()},
                                           {"constant", c.constant.get_str()},
                                           {"scalar_on_guard", c.scalar_on_guard}};
    }
    if (p.string_n && p.string_k) {
        rep.input["string_n"] = *p.string_n;
        rep.input["string_k"] = *p.string_k;
        const int nk = *p.string_n * *p.string_k;
        rep.check("L_" + std::to_string(nk) + " = [L_" + std::to_string(nk) + ", L_0]/" + std::to_string(nk),
                  string_identity_check(*p.string_n, *p.string_k, p.T, p.d, p.G));
    }
    return rep;
}

/// The degree-5 worked example and its companions, end to end.
inline Report cmd_verify_example(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "verify-example";
    const LoadedSpec w = load_quiver_spec(cfg.data_dir + "/worked-example.quiver");
    rep.input = to_json(w.spec);
    const CompanionMatrix& cm = *w.companion;

    const std::vector<std::vector<int>> reference{
        {3, 2, 1, 5, 4}, {4, 3, 2, 1, 5}, {5, 4, 3, 2, 1}, {1, 5, 4, 3, 2}, {2, 1, 5, 4, 3}};
    rep.check("congruence pattern", congruence_pattern(5, w.spec.sigma) == reference);

    const auto nf = companion_normal_form(cm, w.spec.f, cfg.depth);
    rep.results["companion"] = detail::companion_json(nf);
    std::vector<OneDimClass> claimed;
    for (long i = 0; i < 5; ++i)
        claimed.push_back(one_dim_class(Series(zeta_pow(5, 2 * i)) * scale_substitute(w.spec.f, zeta_pow(5, i))));
    bool integral = true;
    for (const auto& c : nf.classes) integral = integral && is_integer(c.residue);
    const bool literal = class_multiset_equal(nf.classes, claimed) && integral;
    std::string detail;
    if (!literal)
        detail = "factor leading with z^5 is " + nf.classes[nf.lambda0].str() + ", stated f is " + w.spec.f.str();
    rep.check("normal form equals the stated factors", literal, detail);
    rep.check("shift law with the recovered factor", nf.shift_law_holds.value_or(false),
              "recovered f = " + nf.recovered_f.str());

    bool sweep = true;
    for (long p = 1; p <= 4; ++p)
        for (long q = p + 1; q <= p + 4; ++q) sweep = sweep && commutator(kac_schwarz(p, q), DiffOp::z(p)) == DiffOp(1);
    rep.check("[A^{p,q}, z^p] = 1 for p <= 4, p < q <= p+4", sweep);

    for (const char* name : {"umm-z2.quiver", "string-n3.quiver"}) {
        const LoadedSpec s = load_quiver_spec(cfg.data_dir + "/" + name);
        const BiPoly curve = classical_limit_curve(s.spec);
        rep.results["curves"][name] = curve.str();
        rep.check(std::string("classical curve of ") + name + " is rational", curve.has_rational_coefficients());
    }

    const auto sheets = moduli_cover(cm, nf.recovered_f, cfg.order);
    bool all = true;
    for (const auto& sh : sheets) all = all && verify_quiver_solution(sh, {5, cm.sigma, sh.f, 1}, cfg.order).passed;
    rep.check("moduli sheets verified at order " + std::to_string(cfg.order), all);
    rep.check("moduli sheets pairwise distinct", sheets_distinct(sheets));
    return rep;
}

}  // namespace sato
