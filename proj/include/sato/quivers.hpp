#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sato/coeffs.hpp"
#include "sato/connections.hpp"
#include "sato/detail/cursor.hpp"
#include "sato/levelt_turrittin.hpp"
#include "sato/matrix.hpp"
#include "sato/series.hpp"

namespace sato {

/// One-line permutation of {0..n-1}: sigma[i] is the image of i.
using Permutation = std::vector<int>;

namespace detail {

inline int mod(long a, long n) { return static_cast<int>(((a % n) + n) % n); }

}  // namespace detail

/// Parses cycle notation over 1..n, e.g. "(1 4 2 5 3)" or "(1 2)(3 4)".
inline Permutation parse_cycles(std::string_view text, int n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "degree must be positive");
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    detail::Cursor cur(text);
    if (cur.at_end()) cur.error("expected a cycle");
    while (!cur.at_end()) {
        cur.expect('(');
        std::vector<int> cycle;
        while (!cur.accept(')')) {
            if (cur.at_end()) cur.error("unterminated cycle");
            const long v = cur.small_integer();
            if (v < 1 || v > n) cur.error("index " + std::to_string(v) + " outside 1.." + std::to_string(n));
            if (seen[static_cast<std::size_t>(v - 1)]) cur.error("index " + std::to_string(v) + " repeated");
            seen[static_cast<std::size_t>(v - 1)] = true;
            cycle.push_back(static_cast<int>(v - 1));
            cur.accept(',');
        }
        if (cycle.empty()) cur.error("empty cycle");
        for (std::size_t k = 0; k < cycle.size(); ++k)
            p[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
    }
    return p;
}

/// Cycle notation with 1-based indices; fixed points are omitted unless every point is fixed.
inline std::string cycle_string(const Permutation& p) {
    std::string out;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i] || p[i] == static_cast<int>(i)) continue;
        out += "(";
        std::size_t at = i;
        bool first = true;
        while (!seen[at]) {
            seen[at] = true;
            out += (first ? "" : " ") + std::to_string(at + 1);
            first = false;
            at = static_cast<std::size_t>(p[at]);
        }
        out += ")";
    }
    return out.empty() ? "(1)" : out;
}

inline bool is_permutation(const Permutation& p) {
    std::vector<bool> hit(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || hit[static_cast<std::size_t>(v)]) return false;
        hit[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

inline bool is_n_cycle(const Permutation& p) {
    if (p.empty() || !is_permutation(p)) return false;
    std::size_t len = 0, at = 0;
    do {
        at = static_cast<std::size_t>(p[at]);
        ++len;
    } while (at != 0);
    return len == p.size();
}

/// k with sigma(i) - i = k mod n for every i, if there is one.
inline std::optional<int> constant_shift(const Permutation& p) {
    const long n = static_cast<long>(p.size());
    if (n == 0) return std::nullopt;
    const int k = detail::mod(p[0], n);
    for (long i = 1; i < n; ++i)
        if (detail::mod(p[static_cast<std::size_t>(i)] - i, n) != k) return std::nullopt;
    return k;
}

/// sigma(i) = i + k mod n.
inline Permutation shift_permutation(int n, int k) {
    Permutation p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = detail::mod(i + k, n);
    return p;
}

/// (n n-1 ... 1): the inverse of the z-shift cycle.
inline Permutation string_permutation(int n) { return shift_permutation(n, -1); }

enum class QuiverKind { Permutation, String };

inline std::string_view to_string(QuiverKind k) { return k == QuiverKind::String ? "string" : "permutation"; }

/// A V_i subset V_sigma(i) with A = 1/(p z^{p-1}) D + f and z^p V_i subset V_{i+1}.
struct QuiverSpec {
    int n = 1;
    Permutation sigma{0};
    Series f;
    long p = 1;

    QuiverKind kind() const {
        auto k = constant_shift(sigma);
        return k && detail::mod(*k + 1, n) == 0 ? QuiverKind::String : QuiverKind::Permutation;
    }
    void validate() const {
        if (n < 1 || sigma.size() != static_cast<std::size_t>(n) || !is_permutation(sigma))
            fail(ErrorKind::InvalidArgument, "sigma must be a permutation of 1.." + std::to_string(n));
        if (p < 1) fail(ErrorKind::InvalidArgument, "p must be positive");
    }
};

inline QuiverSpec string_quiver(int n, Series f) { return {n, string_permutation(n), std::move(f), 1}; }

/// B in B(sigma, s): the matrix of A on the generators phi_j.
struct CompanionMatrix {
    int n = 1;
    Permutation sigma{0};
    long s = 0;
    SeriesMatrix B;
};

/// Entry (i, j) is the representative in 1..n of sigma(i) - j mod n.
inline std::vector<std::vector<int>> congruence_pattern(int n, const Permutation& sigma) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int r = detail::mod(sigma[static_cast<std::size_t>(i)] - j, n);
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r == 0 ? n : r;
        }
    return out;
}

struct BValidation {
    bool ok = true;
    std::vector<std::string> violations;
    explicit operator bool() const { return ok; }
};

inline BValidation validate_B(const CompanionMatrix& cm) {
    BValidation v;
    auto bad = [&v](std::string s) {
        v.ok = false;
        v.violations.push_back(std::move(s));
    };
    const int n = cm.n;
    if (n < 1 || cm.sigma.size() != static_cast<std::size_t>(n) || !is_permutation(cm.sigma)) {
        bad("sigma is not a permutation of 1.." + std::to_string(n));
        return v;
    }
    if (cm.B.rows() != static_cast<std::size_t>(n) || !cm.B.square()) {
        bad("B is not " + std::to_string(n) + "x" + std::to_string(n));
        return v;
    }
    auto where = [](std::size_t i, std::size_t j) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    };
    long degree = -1;
    std::optional<CycScalar> top;
    for (std::size_t i = 0; i < cm.B.rows(); ++i)
        for (std::size_t j = 0; j < cm.B.cols(); ++j) {
            const Series e = cm.B(i, j).simplified_ram();
            if (!e.is_exact() || e.ram() != 1 || (!e.is_zero() && e.bottom() < 0)) {
                bad(where(i, j) + ": not a polynomial");
                continue;
            }
            const long slot = cm.sigma[i] - static_cast<long>(j);
            for (const auto& [k, c] : e.terms()) {
                degree = std::max(degree, k);
                if (detail::mod(k - slot, n) != 0)
                    bad("(i) " + where(i, j) + ": z^" + std::to_string(k) + " breaks k = sigma(i) - j mod " +
                        std::to_string(n));
            }
        }
    if (degree != cm.s) {
        bad("(ii) degree " + std::to_string(degree) + " differs from s = " + std::to_string(cm.s));
        return v;
    }
    for (std::size_t i = 0; i < cm.B.rows(); ++i)
        for (std::size_t j = 0; j < cm.B.cols(); ++j) {
            const Series& e = cm.B(i, j);
            const bool slot = detail::mod(cm.sigma[i] - static_cast<long>(j) - cm.s, n) == 0;
            const CycScalar c = e.is_exact() ? e.coeff(cm.s) : CycScalar();
            if (!slot) {
                if (!c.is_zero()) bad("(ii) " + where(i, j) + ": top-degree term outside sigma(i) - j = s");
                continue;
            }
            if (c.is_zero()) {
                bad("(ii) " + where(i, j) + ": top-degree coefficient missing");
            } else if (!top) {
                top = c;
            } else if (!same_value(*top, c)) {
                bad("(ii) " + where(i, j) + ": top coefficient " + c.str() + " differs from " + top->str());
            }
        }
    return v;
}

inline CycScalar top_coefficient(const CompanionMatrix& cm) {
    for (std::size_t i = 0; i < cm.B.rows(); ++i)
        for (std::size_t j = 0; j < cm.B.cols(); ++j)
            if (detail::mod(cm.sigma[i] - static_cast<long>(j) - cm.s, cm.n) == 0) return cm.B(i, j).coeff(cm.s);
    fail(ErrorKind::InvalidCompanion, "no top-degree slot");
}

/// i -> sigma(i) - s: the permutation carried by the leading coefficient.
inline Permutation leading_permutation(const Permutation& sigma, long s) {
    const long n = static_cast<long>(sigma.size());
    Permutation p(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) p[i] = detail::mod(sigma[i] - s, n);
    return p;
}

/// True when the leading coefficient has n distinct eigenvalues.
inline bool admissible_degree(const Permutation& sigma, long s) {
    return is_n_cycle(leading_permutation(sigma, s));
}

/// Validates and builds B from a matrix of exact polynomials; s is read off.
inline CompanionMatrix make_companion(const Permutation& sigma, SeriesMatrix B) {
    CompanionMatrix cm{static_cast<int>(sigma.size()), sigma, 0, std::move(B)};
    long degree = 0;
    for (std::size_t i = 0; i < cm.B.rows(); ++i)
        for (std::size_t j = 0; j < cm.B.cols(); ++j) {
            const Series e = cm.B(i, j).simplified_ram();
            if (!e.is_zero()) degree = std::max(degree, e.top());
        }
    cm.s = degree;
    return cm;
}

/// Seeded member of B(sigma, s): coefficients uniform in -9..9 at every
/// permitted slot below the top and 1 at the top.
inline CompanionMatrix random_companion(const Permutation& sigma, long s, std::uint64_t seed) {
    const int n = static_cast<int>(sigma.size());
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                     static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(s)};
    for (int v : sigma) words.push_back(static_cast<std::uint32_t>(v));
    std::seed_seq seq(words.begin(), words.end());
    std::mt19937_64 rng(seq);
    CompanionMatrix cm{n, sigma, s, SeriesMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Series::Term> ts;
            for (long k = 0; k <= s; ++k) {
                if (detail::mod(k - (sigma[static_cast<std::size_t>(i)] - j), n) != 0) continue;
                const long c = k == s ? 1 : static_cast<long>(rng() % 19) - 9;
                if (c != 0) ts.emplace_back(k, CycScalar(c));
            }
            cm.B(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Series::from_terms(ts);
        }
    return cm;
}

namespace detail {

inline void require_string_p1(const QuiverSpec& spec) {
    spec.validate();
    if (spec.kind() != QuiverKind::String)
        fail(ErrorKind::NotStringQuiver, "sigma " + cycle_string(spec.sigma) + " is not (n n-1 ... 1)");
    if (spec.p != 1) fail(ErrorKind::InvalidArgument, "only p = 1 quivers have a KS connection here");
    const Series f = spec.f.simplified_ram();
    if (!f.is_exact() || f.ram() != 1) fail(ErrorKind::InvalidArgument, "f must be an exact Laurent polynomial");
}

// zeta^t f(zeta^t z), the t-th summand of the KS connection, via the DFT of the z-shift.
inline std::vector<Series> ks_exponents(const QuiverSpec& spec) {
    const int n = spec.n;
    const std::size_t un = static_cast<std::size_t>(n);
    ScalarMatrix shift(un, un), F(un, un);
    for (std::size_t i = 0; i < un; ++i) shift((i + 1) % un, i) = CycScalar(1);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t t = 0; t < un; ++t) F(i, t) = zeta_pow(n, static_cast<long>(i * t));
    const ScalarMatrix D = inverse(F) * shift * F;
    std::vector<Series> out;
    for (std::size_t t = 0; t < un; ++t) {
        for (std::size_t u = 0; u < un; ++u)
            if (u != t && !D(t, u).is_zero()) fail(ErrorKind::InvalidArgument, "DFT failed to diagonalize the shift");
        // z acts by mu = zeta^-t on the t-th eigenline, so D_x acts by 1/mu (D_z + f).
        const CycScalar eps = D(t, t).inverse();
        out.push_back(Series(eps) * scale_substitute(spec.f, eps));
    }
    return out;
}

}  // namespace detail

/// Classes of the KS connection: [class(zeta^i f(zeta^i z)) : i = 0..n-1].
inline std::vector<OneDimClass> ks_normal_form(const QuiverSpec& spec) {
    detail::require_string_p1(spec);
    std::vector<OneDimClass> out;
    for (const auto& l : detail::ks_exponents(spec)) out.push_back(one_dim_class(l));
    return out;
}

/// D_z - B, i.e. M = -B.
inline Connection companion_connection(const CompanionMatrix& cm) {
    auto v = validate_B(cm);
    if (!v) {
        std::string msg = "B is not in B(sigma, s)";
        for (const auto& s : v.violations) msg += "; " + s;
        fail(ErrorKind::InvalidCompanion, msg);
    }
    return Connection(-cm.B);
}

struct CompanionNormalForm {
    std::vector<OneDimClass> classes;  // exponential factors; entry t leads with alpha zeta^t z^s
    SplitResult split;
    bool certified = false;
    std::size_t lambda0 = 0;           // index of the factor leading with alpha z^s
    Series recovered_f;                // polypart + residue/z of that factor
    bool nonzero_residue = false;
    std::optional<int> shift;          // k with sigma(i) - i = k
    std::optional<bool> shift_law_holds;
    std::optional<bool> supplied_f_consistent;
};

namespace detail {

inline void require_cycle(const CompanionMatrix& cm) {
    if (!is_n_cycle(cm.sigma))
        fail(ErrorKind::NotCycle, "sigma " + cycle_string(cm.sigma) + " is not an n-cycle");
}

inline Series laurent_part(const OneDimClass& c) { return c.polypart + Series::monomial(c.residue, -1); }

inline std::vector<OneDimClass> negate_classes(const std::vector<OneDimClass>& v) {
    std::vector<OneDimClass> out;
    for (const auto& c : v) out.push_back({-c.polypart, -c.residue});
    return out;
}

inline std::size_t find_lambda0(const std::vector<OneDimClass>& cls, const CycScalar& alpha, long s) {
    for (std::size_t t = 0; t < cls.size(); ++t) {
        if (cls[t].polypart.is_zero()) {
            if (s == 0 && alpha.is_zero()) return t;
            continue;
        }
        auto [e, a] = cls[t].polypart.leading();
        if (e == s && same_value(a, alpha)) return t;
    }
    fail(ErrorKind::IncompatibleLeading, "no exponential factor leads with the top coefficient");
}

}  // namespace detail

/// The exponential factors {zeta^{-k i} f(zeta^i z)} predicted for a constant shift k.
inline std::vector<OneDimClass> shift_law_classes(const Series& f, int n, int k) {
    std::vector<OneDimClass> out;
    for (int i = 0; i < n; ++i)
        out.push_back(one_dim_class(Series(zeta_pow(n, -static_cast<long>(k) * i)) *
                                    scale_substitute(f, zeta_pow(n, i))));
    return out;
}

/// Normal form of D_z - B by certified splitting. f, when given, is checked
/// for consistency against the factor leading with the top coefficient.
inline CompanionNormalForm companion_normal_form(const CompanionMatrix& cm,
                                                 const std::optional<Series>& f = std::nullopt,
                                                 std::optional<int> depth = std::nullopt) {
    const Connection c = companion_connection(cm);
    detail::require_cycle(cm);
    CompanionNormalForm out;
    out.split = lt_split(c, depth);
    std::string why;
    out.certified = verify_split(c, out.split, &why);
    if (!out.certified) out.split.diagnostics.push_back("verification failed: " + why);
    out.classes = detail::negate_classes(out.split.classes);
    out.lambda0 = detail::find_lambda0(out.classes, top_coefficient(cm), cm.s);
    const OneDimClass& l0 = out.classes[out.lambda0];
    out.recovered_f = detail::laurent_part(l0);
    out.nonzero_residue = !l0.residue.is_zero();
    out.shift = constant_shift(cm.sigma);
    if (out.shift)
        out.shift_law_holds = class_multiset_equal(out.classes, shift_law_classes(out.recovered_f, cm.n, *out.shift));
    if (f) out.supplied_f_consistent = class_equal(one_dim_class(*f), l0);
    return out;
}

/// phi_i = pi^{-1}(1) of V_i on one sheet; phis are known through z^{-order}.
struct QuiverSolution {
    std::vector<Series> phis;
    long order = 0;
    int root_twist = 0;
    Series f;                         // the potential of this sheet
    std::vector<CycScalar> constants;  // constant terms of the phis
};

namespace detail {

inline SplitResult flat_split(const CompanionMatrix& cm, long K) {
    const Connection c = companion_connection(cm);
    require_cycle(cm);
    return lt_split(c, static_cast<int>(cm.s + K + 1), Schedule::Simultaneous, -K);
}

// Rejects f unless it agrees with lambda through z^-1; a residue off by a
// nonzero integer would need a z^r factor and is reported as resonance.
inline void check_sheet_potential(const Series& f, const Series& lambda, int t) {
    const int o = common_order(f.field_order(), lambda.field_order());
    const Series diff = (f.lift(o) - lambda.lift(o)).simplified_ram();
    for (const auto& [num, c] : diff.terms()) {
        if (num < -1) continue;
        if (num >= 0)
            fail(ErrorKind::IncompatibleLeading, "f differs from the exponential factor of sheet " +
                                                     std::to_string(t) + " at z^" + std::to_string(num));
        if (is_integer(c))
            fail(ErrorKind::Resonance, "residue of f is off by the integer " + c.str() + " on sheet " +
                                           std::to_string(t));
        fail(ErrorKind::IncompatibleLeading, "residue of f differs by " + c.str() + " on sheet " + std::to_string(t));
    }
}

// phi = G e_t exp(int (lambda_t - f)): the columns of the splitting gauge are
// formal eigenvectors, and lambda_t - f = O(z^-2) keeps the factor in 1 + O(1/z).
inline QuiverSolution sheet(const SplitResult& sp, std::size_t t, const Series& f, long K) {
    const std::size_t n = sp.gauge.rows();
    const Series lambda = -sp.diagonal[t];
    check_sheet_potential(f, lambda, static_cast<int>(t));
    const int o = common_order(sp.field_order, f.field_order());
    Series delta = lambda.lift(o) - f.lift(o);
    std::vector<Series::Term> low;
    for (const auto& [num, c] : delta.simplified_ram().terms())
        if (num <= -2) low.emplace_back(num, c);
    const Series gamma = integral(Series::from_terms(low, 1, delta.trunc()));
    const Series factor = exp_negative(gamma, K);
    QuiverSolution sol;
    sol.order = K;
    sol.root_twist = static_cast<int>(t);
    sol.f = f;
    for (std::size_t i = 0; i < n; ++i) {
        sol.phis.push_back((sp.gauge(i, t).lift(o) * factor).truncated(-K - 1));
        sol.constants.push_back(sol.phis.back().coeff(0));
    }
    return sol;
}

inline std::size_t sheet_index(const SplitResult& sp, const Series& f) {
    const Series fs = f.simplified_ram();
    if (fs.is_zero()) fail(ErrorKind::IncompatibleLeading, "f = 0 selects no sheet");
    auto [e, a] = fs.leading();
    for (std::size_t t = 0; t < sp.diagonal.size(); ++t) {
        const Series l = -sp.diagonal[t];
        if (l.is_zero()) continue;
        auto [le, la] = l.leading();
        if (le == e && same_value(la, a)) return t;
    }
    fail(ErrorKind::IncompatibleLeading, "leading term of f matches no exponential factor");
}

}  // namespace detail

/// Extra depth that lets every check of verify_quiver_solution see z^{-order}.
inline long verification_margin(const CompanionMatrix& cm) {
    long d = 1;
    for (int i = 0; i < cm.n; ++i) {
        const int r = detail::mod(i - cm.sigma[static_cast<std::size_t>(i)], cm.n);
        d = std::max<long>(d, r == 0 ? cm.n : r);
    }
    return cm.s + d + cm.n;
}

/// Flat section of D_z + f - B on sheet root_twist, known through z^{-order} plus verification_margin.
inline QuiverSolution solve_flat_section(const CompanionMatrix& cm, const Series& f, long order, int root_twist) {
    if (order < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    if (root_twist < 0 || root_twist >= cm.n) fail(ErrorKind::InvalidArgument, "root twist outside 0..n-1");
    const long K = order + verification_margin(cm);
    const SplitResult sp = detail::flat_split(cm, K);
    auto [e, a] = f.simplified_ram().leading();
    const CycScalar want = top_coefficient(cm) * zeta_pow(cm.n, root_twist);
    if (e != cm.s || !same_value(a, want))
        fail(ErrorKind::IncompatibleLeading, "leading term of f must be " + want.str() + "*z^" + std::to_string(cm.s));
    return detail::sheet(sp, static_cast<std::size_t>(root_twist), f, K);
}

/// The n sheets over B: sheet 0 carries f, sheet t the factor leading with alpha zeta^t.
inline std::vector<QuiverSolution> moduli_cover(const CompanionMatrix& cm, const Series& f, long order) {
    if (order < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    const long K = order + verification_margin(cm);
    const SplitResult sp = detail::flat_split(cm, K);
    const std::size_t t0 = detail::sheet_index(sp, f);
    std::vector<QuiverSolution> out(static_cast<std::size_t>(cm.n));
    for (std::size_t t = 0; t < sp.diagonal.size(); ++t) {
        const Series ft = t == t0 ? f : detail::laurent_part(one_dim_class(-sp.diagonal[t]));
        const CycScalar a = ft.simplified_ram().leading().second;
        std::size_t twist = 0;
        const CycScalar alpha = top_coefficient(cm);
        while (twist < out.size() && !same_value(a, alpha * zeta_pow(cm.n, static_cast<long>(twist)))) ++twist;
        if (twist == out.size()) fail(ErrorKind::IncompatibleLeading, "sheet leading term is not alpha zeta^t");
        out[twist] = detail::sheet(sp, t, ft, K);
        out[twist].root_twist = static_cast<int>(twist);
    }
    return out;
}

inline bool sheets_distinct(const std::vector<QuiverSolution>& sheets) {
    for (std::size_t a = 0; a < sheets.size(); ++a)
        for (std::size_t b = a + 1; b < sheets.size(); ++b) {
            bool same = true;
            for (std::size_t i = 0; i < sheets[a].constants.size() && same; ++i)
                same = same_value(sheets[a].constants[i], sheets[b].constants[i]);
            if (same) return false;
        }
    return true;
}

struct ConstraintCheck {
    int vertex = 0;  // 1-based
    std::string constraint;
    bool passed = true;
    std::optional<long> exponent;
    std::string detail;
};

struct VerificationReport {
    bool passed = true;
    std::vector<ConstraintCheck> checks;

    std::vector<ConstraintCheck> failures() const {
        std::vector<ConstraintCheck> out;
        for (const auto& c : checks)
            if (!c.passed) out.push_back(c);
        return out;
    }
};

namespace detail {

// Greedy elimination of z^T .. z^0 against the big-cell generators z^e phi_{j-e}
// of V_j; returns what is left, which must vanish for membership.
inline Series reduce_against(Series psi, const std::vector<Series>& phis, int j) {
    const long n = static_cast<long>(phis.size());
    if (psi.is_zero()) return psi;
    for (long e = psi.top(); e >= 0; --e) {
        if (!psi.known(e)) break;
        const CycScalar c = psi.coeff(e);
        if (c.is_zero()) continue;
        const Series& phi = phis[static_cast<std::size_t>(mod(j - e, n))];
        const CycScalar lead = phi.coeff(0);
        psi = psi - Series::monomial(c / lead, e) * phi;
    }
    return psi;
}

inline ConstraintCheck membership(const Series& psi, const std::vector<Series>& phis, int target, long order,
                                  int vertex, std::string name) {
    ConstraintCheck out{vertex + 1, std::move(name), true, std::nullopt, ""};
    const Series rem = reduce_against(psi, phis, target);
    for (long e = rem.is_zero() ? 0 : rem.top(); e >= -order; --e) {
        if (!rem.known(e)) {
            out.passed = false;
            out.exponent = e;
            out.detail = "remainder unknown at z^" + std::to_string(e) + " (insufficient precision)";
            return out;
        }
        if (!rem.coeff(e).is_zero()) {
            out.passed = false;
            out.exponent = e;
            out.detail = "remainder " + rem.coeff(e).str() + " at z^" + std::to_string(e) + " against V_" +
                         std::to_string(target + 1);
            return out;
        }
    }
    return out;
}

}  // namespace detail

/// Up to z^{-order}: z phi_i in V_{i+1}, (D + f) phi_i in V_sigma(i), and
/// z^{d_i + kn} A phi_i in V_i for k = 0, 1 where d_i = i - sigma(i) mod n in 1..n.
inline VerificationReport verify_quiver_solution(const QuiverSolution& sol, const QuiverSpec& spec, long order) {
    spec.validate();
    VerificationReport rep;
    auto add = [&rep](ConstraintCheck c) {
        rep.passed = rep.passed && c.passed;
        rep.checks.push_back(std::move(c));
    };
    const int n = spec.n;
    if (sol.phis.size() != static_cast<std::size_t>(n)) {
        add({0, "shape", false, std::nullopt, "expected " + std::to_string(n) + " series"});
        return rep;
    }
    int o = sol.f.field_order();
    for (const auto& p : sol.phis) o = common_order(o, p.field_order());
    std::vector<Series> phis;
    for (const auto& p : sol.phis) phis.push_back(p.lift(o));
    const Series f = sol.f.lift(o);
    for (int i = 0; i < n; ++i) {
        const Series& phi = phis[static_cast<std::size_t>(i)];
        ConstraintCheck norm{i + 1, "normalization", true, std::nullopt, ""};
        if (phi.is_zero() || phi.top() > 0 || !phi.known(0) || phi.coeff(0).is_zero()) {
            norm.passed = false;
            norm.detail = "phi must be c + O(1/z) with c != 0";
        }
        add(norm);
        if (!norm.passed) return rep;
    }
    for (int i = 0; i < n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const Series a_phi = derivative(phis[ui]) + f * phis[ui];
        add(detail::membership(Series::z() * phis[ui], phis, detail::mod(i + 1, n), order, i, "z V_i in V_i+1"));
        add(detail::membership(a_phi, phis, spec.sigma[ui], order, i, "A V_i in V_sigma(i)"));
        int d = detail::mod(i - spec.sigma[ui], n);
        if (d == 0) d = n;
        for (long k = 0; k <= 1; ++k)
            add(detail::membership(Series::monomial(CycScalar(1), d + k * n) * a_phi, phis, i, order, i,
                                   "z^" + std::to_string(d + k * n) + " A V_i in V_i"));
    }
    return rep;
}

namespace detail {

inline std::vector<Series> poly_times_linear(const std::vector<Series>& p, const Series& root) {
    std::vector<Series> out(p.size() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k + 1] = out[k + 1] + p[k];
        out[k] = out[k] - root * p[k];
    }
    return out;
}

}  // namespace detail

/// prod_i (y - zeta^i f(zeta^i z)), expanded.
inline BiPoly classical_limit_curve(const QuiverSpec& spec) {
    detail::require_string_p1(spec);
    std::vector<Series> p{Series(1L)};
    for (const auto& l : detail::ks_exponents(spec)) p = detail::poly_times_linear(p, l);
    std::map<long, Series> c;
    for (std::size_t k = 0; k < p.size(); ++k) c[static_cast<long>(k)] = p[k];
    return BiPoly(c);
}

/// hbar D_z + F diag(zeta^i f(zeta^i z)) F^{-1}: the diagonal hbar form moved
/// back to the cyclic basis by the DFT matrix F.
inline Connection hbar_ks_form(const QuiverSpec& spec) {
    detail::require_string_p1(spec);
    const auto ls = detail::ks_exponents(spec);
    const std::size_t n = ls.size();
    SeriesMatrix D(n, n);
    ScalarMatrix Fs(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        D(i, i) = ls[i];
        for (std::size_t t = 0; t < n; ++t) Fs(i, t) = zeta_pow(spec.n, static_cast<long>(i * t));
    }
    return Connection::hbar_form(to_series(Fs) * D * to_series(inverse(Fs)));
}

/// n = 2 string quiver with f = sum a_{2i} z^{2i}, a_{2i} = -(2i+1) t_{2i+1}.
inline QuiverSpec umm_ks_from_potential(const std::map<long, Rational>& t) {
    std::vector<Series::Term> ts;
    for (const auto& [k, v] : t) {
        if (v == 0) continue;
        if (k < 1 || k % 2 == 0) fail(ErrorKind::InvalidArgument, "potential couplings live at odd indices");
        ts.emplace_back(k - 1, CycScalar(Rational(-k * v)));
    }
    if (ts.empty()) fail(ErrorKind::EmptyPotential, "all couplings vanish");
    return string_quiver(2, Series::from_terms(ts));
}

}  // namespace sato
