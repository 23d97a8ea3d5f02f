#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sato/coeffs.hpp"
#include "sato/connections.hpp"
#include "sato/matrix.hpp"
#include "sato/series.hpp"

namespace sato {

enum class Schedule {
    Simultaneous,  // all off-diagonal entries of one exponent in one gauge
    Staggered,     // upper triangle first, then lower triangle
};

struct SplitResult {
    std::vector<OneDimClass> classes;
    std::vector<Series> diagonal;  // lambda_i, known down to the working bound
    SeriesMatrix gauge;            // G with G^{-1} M G + G^{-1} G' = diag + O(z^-2)
    std::vector<std::string> diagnostics;
    long top_exponent = 0;
    int depth = 0;
    int field_order = 1;
};

namespace detail {

// Matrix-valued Laurent polynomial as coefficient matrices at exponents top, top-1, ..., low.
struct CoeffStack {
    long top = 0;
    long low = 0;
    std::vector<ScalarMatrix> c;  // c[top - e]

    ScalarMatrix& at(long e) { return c[static_cast<std::size_t>(top - e)]; }
    const ScalarMatrix& at(long e) const { return c[static_cast<std::size_t>(top - e)]; }
    bool has(long e) const { return e <= top && e >= low; }
};

inline CoeffStack to_stack(const SeriesMatrix& m, long top, long low, int order) {
    CoeffStack s;
    s.top = top;
    s.low = low;
    s.c.assign(static_cast<std::size_t>(top - low + 1), ScalarMatrix(m.rows(), m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Series e = m(i, j).simplified_ram();
            for (const auto& [num, c] : e.terms())
                if (num <= top && num >= low) s.at(num)(i, j) = c.lift(order);
            if (e.trunc() && *e.trunc() >= low)
                fail(ErrorKind::InsufficientPrecision, "connection entry truncated above the working bound");
        }
    return s;
}

inline Series stack_entry(const CoeffStack& s, std::size_t i, std::size_t j, std::optional<long> trunc) {
    std::vector<Series::Term> ts;
    for (long e = s.top; e >= s.low; --e)
        if (!s.at(e)(i, j).is_zero()) ts.emplace_back(e, s.at(e)(i, j));
    return Series::from_terms(ts, 1, trunc);
}

inline bool is_zero_matrix(const ScalarMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) return false;
    return true;
}

// M -> h^{-1} (M h + h') with h = I + G z^{-k}, in place on the stack.
inline void apply_shift_gauge(CoeffStack& m, const ScalarMatrix& g, long k) {
    CoeffStack nstack = m;
    for (long e = m.top - k; e >= m.low; --e) nstack.at(e) = nstack.at(e) + m.at(e + k) * g;
    if (nstack.has(-k - 1)) nstack.at(-k - 1) = nstack.at(-k - 1) - CycScalar(k) * g;
    // Y = h^{-1} N  <=>  Y_e = N_e - G Y_{e+k}
    for (long e = nstack.top - k; e >= nstack.low; --e) nstack.at(e) = nstack.at(e) - g * nstack.at(e + k);
    m = std::move(nstack);
}

// T -> T h with h = I + G z^{-k}.
inline void compose_shift_gauge(CoeffStack& t, const ScalarMatrix& g, long k) {
    for (long e = t.low; e <= t.top - k; ++e) t.at(e) = t.at(e) + t.at(e + k) * g;
}

struct Eigenbasis {
    std::vector<CycScalar> values;
    ScalarMatrix vectors;  // columns
    std::string how;
};

// Eigenbasis of the leading matrix: scaled n-cycle (DFT along the cycle) or diagonal.
inline Eigenbasis leading_eigenbasis(const ScalarMatrix& L, int& order) {
    const std::size_t n = L.rows();
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !L(i, j).is_zero()) diagonal = false;
    if (diagonal) {
        Eigenbasis b{{}, ScalarMatrix::identity(n), "diagonal leading term"};
        for (std::size_t i = 0; i < n; ++i) b.values.push_back(L(i, i));
        return b;
    }
    // Monomial matrix: exactly one nonzero per row and column.
    std::vector<std::size_t> pi(n, n);
    std::vector<bool> hit(n, false);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (L(i, j).is_zero()) continue;
            if (pi[i] != n || hit[j]) fail(ErrorKind::UnsupportedLeading, "leading matrix is not monomial");
            pi[i] = j;
            hit[j] = true;
        }
    for (std::size_t i = 0; i < n; ++i)
        if (pi[i] == n) fail(ErrorKind::DegenerateLeading, "leading matrix is singular");
    std::size_t len = 0, at = 0;
    do {
        at = pi[at];
        ++len;
    } while (at != 0);
    if (len != n)
        fail(ErrorKind::DegenerateLeading,
             "leading permutation is not an n-cycle; eigenvalues repeat (cycle through 1 has length " +
                 std::to_string(len) + ")");
    CycScalar prod(1);
    bool equal = true;
    for (std::size_t i = 0; i < n; ++i) {
        prod = prod * L(i, pi[i]);
        if (L(i, pi[i]) != L(0, pi[0])) equal = false;
    }
    CycScalar root;
    if (equal) {
        root = L(0, pi[0]);
    } else {
        if (!prod.is_rational()) fail(ErrorKind::UnsupportedLeading, "leading cycle product is not rational");
        auto r = rational_root(prod.to_rational(), static_cast<int>(n));
        if (!r) fail(ErrorKind::UnsupportedLeading, "no n-th root of the leading cycle product");
        root = *r;
    }
    order = common_order(order, common_order(static_cast<int>(n), root.order()));
    Eigenbasis b{{}, ScalarMatrix(n, n), "scaled " + std::to_string(n) + "-cycle, DFT eigenvectors"};
    for (std::size_t k = 0; k < n; ++k) {
        const CycScalar lambda = (root * zeta_pow(static_cast<int>(n), static_cast<long>(k))).lift(order);
        b.values.push_back(lambda);
        // L v = lambda v  <=>  v_{pi(i)} = lambda / L(i, pi(i)) * v_i
        CycScalar v(1);
        std::size_t i = 0;
        for (std::size_t t = 0; t < n; ++t) {
            b.vectors(i, k) = v.lift(order);
            v = v * lambda / L(i, pi[i]).lift(order);
            i = pi[i];
        }
    }
    return b;
}

inline long top_exponent(const SeriesMatrix& m, bool& any) {
    long top = 0;
    any = false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Series e = m(i, j).simplified_ram();
            if (e.ram() != 1) fail(ErrorKind::UnsupportedLeading, "ramified connection entries");
            if (e.is_zero()) continue;
            top = any ? std::max(top, e.top()) : e.top();
            any = true;
        }
    return top;
}

}  // namespace detail

/// Smallest depth that certifies the diagonal through z^{-1}.
inline int minimum_depth(long top) { return static_cast<int>(top + 1); }
inline int default_depth(long top) { return static_cast<int>(top + 2); }

/// Splits D + M, M with a leading coefficient of n distinct eigenvalues, into
/// rank-one classes. depth is the number of elimination steps below the top;
/// gauge_low asks for the gauge to be kept down to that exponent (it is exact
/// through z^-depth).
inline SplitResult lt_split(const Connection& c, std::optional<int> depth = std::nullopt,
                            Schedule schedule = Schedule::Simultaneous,
                            std::optional<long> gauge_low = std::nullopt) {
    const std::size_t n = c.dim();
    SplitResult out;
    bool any = false;
    const long m = detail::top_exponent(c.M0, any);
    out.top_exponent = m;
    if (n == 1) {
        const Series l = c.M0(0, 0);
        out.classes.push_back(one_dim_class(l));
        out.diagonal.push_back(l);
        out.gauge = SeriesMatrix::identity(1);
        out.field_order = l.field_order();
        out.diagnostics.push_back("rank one: nothing to split");
        return out;
    }
    if (!any) fail(ErrorKind::DegenerateLeading, "zero connection matrix");
    if (m < 0) fail(ErrorKind::UnsupportedLeading, "top exponent below zero (regular singular input)");
    const int d = depth.value_or(default_depth(m));
    if (d < minimum_depth(m))
        fail(ErrorKind::InsufficientDepth, "depth " + std::to_string(d) + " cannot certify z^-1; need at least " +
                                               std::to_string(minimum_depth(m)));
    out.depth = d;

    int order = field_order(c.M0);
    const long low = std::min(-1L, m - d);
    const ScalarMatrix L = coefficient_matrix(c.M0, m);
    detail::Eigenbasis eb = detail::leading_eigenbasis(L, order);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (same_value(eb.values[i], eb.values[j]))
                fail(ErrorKind::DegenerateLeading, "leading eigenvalues repeat");
    out.field_order = order;
    out.diagnostics.push_back("leading exponent " + std::to_string(m) + ": " + eb.how);

    const ScalarMatrix F = lift(eb.vectors, order);
    const ScalarMatrix Finv = inverse(F);
    detail::CoeffStack st = detail::to_stack(c.M0, m, low, order);
    for (long e = m; e >= low; --e) st.at(e) = Finv * st.at(e) * F;

    const long glow = std::min(-(m + 3), gauge_low.value_or(0));
    detail::CoeffStack gauge;
    gauge.top = 0;
    gauge.low = glow;
    gauge.c.assign(static_cast<std::size_t>(1 - glow), ScalarMatrix(n, n));
    gauge.at(0) = F;

    std::vector<std::vector<CycScalar>> inv_gap(n, std::vector<CycScalar>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) inv_gap[i][j] = (eb.values[i] - eb.values[j]).inverse();

    auto eliminate = [&](long k, auto&& select) {
        const long e = m - k;
        ScalarMatrix G(n, n);
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || !select(i, j)) continue;
                const CycScalar& x = st.at(e)(i, j);
                if (x.is_zero()) continue;
                G(i, j) = -x * inv_gap[i][j];
                ++count;
            }
        if (count == 0) return;
        detail::apply_shift_gauge(st, G, k);
        detail::compose_shift_gauge(gauge, G, k);
        out.diagnostics.push_back("exponent " + std::to_string(e) + ": removed " + std::to_string(count) +
                                  " off-diagonal entries with gauge I + G z^-" + std::to_string(k));
    };
    for (long k = 1; k <= d && m - k >= low; ++k) {
        if (schedule == Schedule::Simultaneous) {
            eliminate(k, [](std::size_t, std::size_t) { return true; });
        } else {
            eliminate(k, [](std::size_t i, std::size_t j) { return i < j; });
            eliminate(k, [](std::size_t i, std::size_t j) { return i > j; });
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        Series lambda = detail::stack_entry(st, i, i, low - 1);
        out.diagonal.push_back(lambda);
        out.classes.push_back(one_dim_class(lambda));
    }
    SeriesMatrix G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G(i, j) = detail::stack_entry(gauge, i, j, glow - 1);
    out.gauge = G;
    return out;
}

/// Certifies a split without reusing the elimination: with D built from the
/// classes, G D - M G - G' must vanish at every exponent >= -1.
inline bool verify_split(const Connection& c, const SplitResult& r, std::string* why = nullptr) {
    auto reject = [why](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    const std::size_t n = c.dim();
    if (r.classes.size() != n) return reject("class count differs from the dimension");
    if (r.gauge.rows() != n || r.gauge.cols() != n) return reject("gauge has the wrong shape");
    if (n == 1) {
        try {
            if (!(one_dim_class(c.M0(0, 0)) == r.classes[0])) return reject("rank-one class differs");
            return true;
        } catch (const Error& e) {
            return reject(e.what());
        }
    }
    int order = common_order(field_order(c.M0), field_order(r.gauge));
    for (const auto& cl : r.classes) order = common_order(order, cl.field_order());
    const SeriesMatrix G = lift(r.gauge, order);
    const SeriesMatrix M = lift(c.M0, order);
    SeriesMatrix D(n, n);
    for (std::size_t i = 0; i < n; ++i)
        D(i, i) = r.classes[i].polypart.lift(order) + Series::monomial(r.classes[i].residue.lift(order), -1);
    ScalarMatrix lead;
    try {
        lead = coefficient_matrix(G, 0);
        (void)inverse(lead);
    } catch (const Error&) {
        return reject("gauge leading matrix is not invertible");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Series& g = G(i, j);
            if (!g.is_zero() && g.top() > 0) return reject("gauge has positive powers of z");
        }
    const SeriesMatrix E = G * D - M * G - derivative(G);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Series& e = E(i, j);
            if (!e.known(-1))
                return reject("residual entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") is not known through z^-1");
            for (const auto& [num, coef] : e.terms())
                if (num >= -1)
                    return reject("residual entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is nonzero at z^" + std::to_string(num));
        }
    return true;
}

}  // namespace sato
