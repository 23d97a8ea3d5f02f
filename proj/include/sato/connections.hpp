#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sato/coeffs.hpp"
#include "sato/matrix.hpp"
#include "sato/series.hpp"

namespace sato {

/// D_z + M on the formal punctured disc at infinity. An hbar-connection is
/// hbar D_z + M with M = M0 + hbar M1; for plain connections only M0 is used.
struct Connection {
    SeriesMatrix M0;
    SeriesMatrix M1;
    bool hbar = false;

    Connection() = default;
    explicit Connection(SeriesMatrix m) : M0(std::move(m)), M1(M0.rows(), M0.cols()) { check(); }
    static Connection hbar_form(SeriesMatrix m0, std::optional<SeriesMatrix> m1 = std::nullopt) {
        Connection c(std::move(m0));
        if (m1) c.M1 = std::move(*m1);
        c.hbar = true;
        c.check();
        return c;
    }

    std::size_t dim() const noexcept { return M0.rows(); }
    const SeriesMatrix& matrix() const noexcept { return M0; }

private:
    void check() const {
        if (!M0.square()) fail(ErrorKind::InvalidArgument, "connection matrix must be square");
        if (M1.rows() != M0.rows() || M1.cols() != M0.cols())
            fail(ErrorKind::InvalidArgument, "hbar part must match the connection shape");
    }
};

/// True when every known coefficient of a - b vanishes.
inline bool agrees(const Series& a, const Series& b) { return (a - b).is_zero(); }

inline bool is_identity_up_to_truncation(const SeriesMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!agrees(m(i, j), Series(i == j ? 1L : 0L))) return false;
    return true;
}

/// M -> g^{-1} M g + (hbar) g^{-1} dg/dz.
inline Connection gauge_transform(const Connection& c, const SeriesMatrix& g, const SeriesMatrix& g_inv) {
    if (g.rows() != c.dim() || g_inv.rows() != c.dim() || !g.square() || !g_inv.square())
        fail(ErrorKind::InvalidArgument, "gauge shape does not match the connection");
    if (!is_identity_up_to_truncation(g * g_inv) || !is_identity_up_to_truncation(g_inv * g))
        fail(ErrorKind::NotInverse, "g_inv is not an inverse of g at the visible orders");
    const SeriesMatrix dterm = g_inv * derivative(g);
    Connection out = c;
    out.M0 = g_inv * c.M0 * g;
    if (c.hbar) {
        out.M1 = g_inv * c.M1 * g + dterm;
    } else {
        out.M0 = out.M0 + dterm;
    }
    return out;
}

/// Lifts a pair of scalars to a common cyclotomic order.
inline std::pair<CycScalar, CycScalar> lift_common(const CycScalar& a, const CycScalar& b) {
    const int o = common_order(a.order(), b.order());
    return {a.lift(o), b.lift(o)};
}

inline bool same_value(const CycScalar& a, const CycScalar& b) {
    auto [x, y] = lift_common(a, b);
    return x == y;
}

inline bool same_value(const Series& a, const Series& b) {
    const int o = common_order(a.field_order(), b.field_order());
    return a.lift(o) == b.lift(o);
}

/// Rank-one class: nonnegative part of lambda and the z^{-1} coefficient mod Z.
struct OneDimClass {
    Series polypart;
    CycScalar residue;

    friend bool class_equal(const OneDimClass& a, const OneDimClass& b) {
        if (!same_value(a.polypart, b.polypart)) return false;
        auto [x, y] = lift_common(a.residue, b.residue);
        return is_integer(x - y);
    }
    /// Exact representative equality (no reduction mod Z).
    friend bool operator==(const OneDimClass& a, const OneDimClass& b) {
        return same_value(a.polypart, b.polypart) && same_value(a.residue, b.residue);
    }
    int field_order() const { return common_order(polypart.field_order(), residue.order()); }
    OneDimClass lift(int order) const { return {polypart.lift(order), residue.lift(order)}; }
    std::string str() const { return "(" + polypart.str() + ", " + residue.str() + ")"; }
};

inline std::ostream& operator<<(std::ostream& os, const OneDimClass& c) { return os << c.str(); }

/// Class data for D_z + lambda with lambda in z^{1/r}: terms of exponent > -1
/// and the residue, modulo (1/r)Z.
struct RamifiedClass {
    int ram = 1;
    Series polypart;
    CycScalar residue;

    friend bool class_equal(const RamifiedClass& a, const RamifiedClass& b) {
        if (!same_value(a.polypart, b.polypart)) return false;
        auto [x, y] = lift_common(a.residue, b.residue);
        const long r = lcm_long(a.ram, b.ram);
        return is_integer((x - y) * CycScalar(r));
    }
    std::string str() const {
        return "(ram " + std::to_string(ram) + ", " + polypart.str() + ", " + residue.str() + ")";
    }
};

inline OneDimClass one_dim_class(const Series& lambda) {
    Series l = lambda.simplified_ram();
    if (l.ram() != 1) fail(ErrorKind::InvalidArgument, "ramified input; use ramified_class");
    if (!l.known(-1))
        fail(ErrorKind::InsufficientPrecision, "class needs lambda known through z^-1: " + lambda.str());
    std::vector<Series::Term> keep;
    for (const auto& t : l.terms())
        if (t.first >= 0) keep.push_back(t);
    return {Series::from_terms(keep), l.coeff(-1)};
}

inline RamifiedClass ramified_class(const Series& lambda) {
    Series l = lambda.simplified_ram();
    const int r = l.ram();
    if (!l.known(-r))
        fail(ErrorKind::InsufficientPrecision, "class needs lambda known through z^-1: " + lambda.str());
    std::vector<Series::Term> keep;
    for (const auto& t : l.terms())
        if (t.first > -r) keep.push_back(t);
    return {r, Series::from_terms(keep, r).simplified_ram(), l.coeff(-r)};
}

/// Degree of the polynomial part, then coefficients lexicographically from the top.
inline bool class_less(const OneDimClass& a0, const OneDimClass& b0) {
    const int o = common_order(a0.field_order(), b0.field_order());
    const OneDimClass a = a0.lift(o), b = b0.lift(o);
    const long da = a.polypart.is_zero() ? -1 : a.polypart.top();
    const long db = b.polypart.is_zero() ? -1 : b.polypart.top();
    if (da != db) return da < db;
    for (long k = da; k >= 0; --k) {
        const CycScalar x = a.polypart.coeff(k), y = b.polypart.coeff(k);
        if (x != y) return lex_less(x.lift(o), y.lift(o));
    }
    return lex_less(a.residue.lift(o), b.residue.lift(o));
}

inline std::vector<OneDimClass> sorted_classes(std::vector<OneDimClass> v) {
    std::stable_sort(v.begin(), v.end(), class_less);
    return v;
}

template <class Class>
bool class_multiset_equal(const std::vector<Class>& a, const std::vector<Class>& b) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size() && !found; ++j)
            if (!used[j] && class_equal(x, b[j])) used[j] = found = true;
        if (!found) return false;
    }
    return true;
}

inline Connection direct_sum(const std::vector<Connection>& cs) {
    std::size_t n = 0;
    bool hbar = false;
    for (const auto& c : cs) {
        n += c.dim();
        hbar = hbar || c.hbar;
    }
    SeriesMatrix m0(n, n), m1(n, n);
    std::size_t off = 0;
    for (const auto& c : cs) {
        for (std::size_t i = 0; i < c.dim(); ++i)
            for (std::size_t j = 0; j < c.dim(); ++j) {
                m0(off + i, off + j) = c.M0(i, j);
                m1(off + i, off + j) = c.M1(i, j);
            }
        off += c.dim();
    }
    Connection out(m0);
    out.M1 = m1;
    out.hbar = hbar;
    return out;
}

inline Connection rank_one(const Series& lambda) {
    SeriesMatrix m(1, 1);
    m(0, 0) = lambda;
    return Connection(m);
}

/// Classes of the diagonal entries; off-diagonal entries must vanish.
inline std::vector<OneDimClass> diagonal_classes(const Connection& c) {
    std::vector<OneDimClass> out;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        for (std::size_t j = 0; j < c.dim(); ++j)
            if (i != j && !c.M0(i, j).is_exact_zero())
                fail(ErrorKind::InvalidArgument, "connection is not diagonal");
        out.push_back(one_dim_class(c.M0(i, i)));
    }
    return out;
}

/// Polynomial in y with exact Laurent-polynomial coefficients in z.
class BiPoly {
public:
    BiPoly() = default;
    explicit BiPoly(std::map<long, Series> coeffs) {
        for (auto& [d, s] : coeffs)
            if (!s.is_exact_zero()) coeffs_.emplace(d, s);
    }

    const std::map<long, Series>& coeffs() const noexcept { return coeffs_; }
    Series coeff(long ydeg) const {
        auto it = coeffs_.find(ydeg);
        return it == coeffs_.end() ? Series() : it->second;
    }
    long degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

    bool has_rational_coefficients() const {
        for (const auto& [d, s] : coeffs_)
            for (const auto& [e, c] : s.terms())
                if (!c.is_rational()) return false;
        return true;
    }

    friend bool operator==(const BiPoly& a, const BiPoly& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        for (const auto& [d, s] : a.coeffs_) {
            auto it = b.coeffs_.find(d);
            if (it == b.coeffs_.end() || !same_value(s, it->second)) return false;
        }
        return true;
    }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    /// Monomials c*y^i*z^j by descending y then descending z: "y^2 - z^4".
    std::string str() const {
        std::string out;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            const long d = it->first;
            const Series& s = it->second;
            std::string ym = d == 0 ? "" : (d == 1 ? "y" : "y^" + std::to_string(d));
            for (const auto& [num, c] : s.terms()) {
                std::string zm = detail::monomial_str(num, s.ram());
                std::string mono = ym.empty() ? zm : (zm.empty() ? ym : ym + "*" + zm);
                auto [neg, body] = detail::term_str(c, mono);
                detail::append_term(out, neg, body);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    std::map<long, Series> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const BiPoly& p) { return os << p.str(); }

/// det(y I - A) by the Faddeev-LeVerrier recursion.
inline BiPoly characteristic_polynomial(const SeriesMatrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!a(i, j).is_exact()) fail(ErrorKind::InvalidArgument, "characteristic polynomial needs exact entries");
    std::map<long, Series> c;
    c[static_cast<long>(n)] = Series(1L);
    SeriesMatrix mk(n, n);
    Series prev(1L);
    for (std::size_t k = 1; k <= n; ++k) {
        SeriesMatrix am = a * mk;
        for (std::size_t i = 0; i < n; ++i) am(i, i) = am(i, i) + prev;
        mk = am;
        SeriesMatrix amk = a * mk;
        Series tr;
        for (std::size_t i = 0; i < n; ++i) tr = tr + amk(i, i);
        prev = CycScalar(make_rational(-1, static_cast<long>(k))) * tr;
        c[static_cast<long>(n - k)] = prev;
    }
    return BiPoly(c);
}

/// det(y I - M|_{hbar=0}).
inline BiPoly classical_limit(const Connection& c) {
    if (!c.hbar) fail(ErrorKind::InvalidArgument, "classical limit needs an hbar-connection");
    return characteristic_polynomial(c.M0);
}

}  // namespace sato
