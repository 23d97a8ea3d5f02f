#pragma once

/**
 * @file coeffs.hpp
 * @brief Exact scalars: rationals and elements of cyclotomic fields Q(zeta_n).
 *
 * An element of Q(zeta_n) is stored as a polynomial of degree < phi(n) in the
 * power basis 1, zeta_n, ..., zeta_n^{phi(n)-1}, i.e. as a residue class in
 * Q[x]/Phi_n(x). The coefficients share one positive denominator, and the
 * representation is kept canonical so that equality is coefficientwise.
 * Values that happen to be rational are always stored with order 1.
 */

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sato/detail/cursor.hpp"
#include "sato/errors.hpp"

namespace sato {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) fail(ErrorKind::DivisionByZero, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline long gcd_long(long a, long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }
inline long lcm_long(long a, long b) { return a / gcd_long(a, b) * b; }

/// Smallest order containing both fields (order 1 stands for Q).
inline int common_order(int a, int b) { return static_cast<int>(lcm_long(a, b)); }

namespace detail {

using IntPoly = std::vector<Integer>;  // low degree first

inline void trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of monic integer polynomials.
inline IntPoly divide_exact(IntPoly num, const IntPoly& den) {
    trim(num);
    const std::size_t dd = den.size() - 1;
    if (num.size() <= dd) return {};
    IntPoly quot(num.size() - dd);
    for (std::size_t i = num.size(); i-- > dd;) {
        Integer c = num[i];
        quot[i - dd] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    return quot;
}

inline IntPoly compute_cyclotomic(int n, std::unordered_map<int, IntPoly>& cache);

inline const IntPoly& cyclotomic(int n) {
    thread_local std::unordered_map<int, IntPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    IntPoly p = compute_cyclotomic(n, cache);
    return cache.emplace(n, std::move(p)).first->second;
}

inline IntPoly compute_cyclotomic(int n, std::unordered_map<int, IntPoly>&) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    IntPoly p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d == 0) p = divide_exact(std::move(p), cyclotomic(d));
    }
    return p;
}

// Reduce an integer polynomial modulo a monic integer polynomial in place.
inline void reduce_mod(IntPoly& p, const IntPoly& modulus) {
    const std::size_t deg = modulus.size() - 1;
    for (std::size_t i = p.size(); i-- > deg;) {
        if (p[i] == 0) continue;
        Integer c = p[i];
        for (std::size_t j = 0; j < deg; ++j) p[i - deg + j] -= c * modulus[j];
        p[i] = 0;
    }
    p.resize(deg, 0);
}

using QPoly = std::vector<Rational>;

inline void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Polynomial division with remainder over Q.
inline std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
    trim(a);
    QPoly q;
    if (a.size() < b.size()) return {q, a};
    q.assign(a.size() - b.size() + 1, 0);
    const Rational& lead = b.back();
    for (std::size_t i = a.size(); i-- >= b.size();) {
        if (a[i] == 0) continue;
        Rational c = a[i] / lead;
        q[i - (b.size() - 1)] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

// Inverse of a modulo m over Q via the extended Euclidean algorithm.
inline QPoly invert_mod(const QPoly& a, const QPoly& m) {
    QPoly r0 = m, r1 = a, s0, s1{Rational(1)};
    trim(r1);
    while (!r1.empty() && r1.size() > 1) {
        auto [q, r] = divmod(r0, r1);
        QPoly s2 = sub(s0, mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) fail(ErrorKind::DivisionByZero, "element is not invertible");
    Rational c = 1 / r1[0];
    for (auto& x : s1) x *= c;
    return s1;
}

}  // namespace detail

class CycScalar;
CycScalar zeta_pow(int n, long k);

/// Exact element of Q(zeta_n).
class CycScalar {
public:
    CycScalar() : num_{Integer(0)}, den_(1) {}
    CycScalar(long v) : num_{Integer(v)}, den_(1) {}  // NOLINT(google-explicit-constructor)
    CycScalar(const Integer& v) : num_{v}, den_(1) {}  // NOLINT(google-explicit-constructor)
    CycScalar(const Rational& q) : num_{q.get_num()}, den_(q.get_den()) {}  // NOLINT

    /// Element sum_k coeffs[k] * zeta_order^k, reduced modulo Phi_order.
    static CycScalar from_coeffs(int order, const std::vector<Rational>& coeffs) {
        if (order < 1) fail(ErrorKind::InvalidArgument, "cyclotomic order must be positive");
        Integer den = 1;
        for (const auto& c : coeffs) den = lcm(den, c.get_den());
        detail::IntPoly num(coeffs.size());
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            num[k] = coeffs[k].get_num() * (den / coeffs[k].get_den());
        return from_raw(order, std::move(num), std::move(den));
    }

    int order() const noexcept { return order_; }
    /// Dimension of the field over Q, i.e. phi(order).
    int degree() const noexcept { return static_cast<int>(num_.size()); }

    Rational coeff(int k) const {
        if (k < 0 || k >= degree()) return 0;
        return make_rational(num_[static_cast<std::size_t>(k)], den_);
    }
    std::vector<Rational> coeffs() const {
        std::vector<Rational> out;
        out.reserve(num_.size());
        for (int k = 0; k < degree(); ++k) out.push_back(coeff(k));
        return out;
    }

    bool is_zero() const noexcept { return order_ == 1 && num_[0] == 0; }
    bool is_one() const noexcept { return order_ == 1 && num_[0] == 1 && den_ == 1; }
    bool is_rational() const noexcept { return order_ == 1; }
    bool is_integer() const noexcept { return order_ == 1 && den_ == 1; }

    Rational to_rational() const {
        if (!is_rational()) fail(ErrorKind::InvalidArgument, "scalar is not rational: " + str());
        return make_rational(num_[0], den_);
    }

    /// The same element viewed in Q(zeta_target); order() must divide target.
    CycScalar lift(int target) const {
        if (target % order_ != 0)
            fail(ErrorKind::OrderMismatch, "cannot lift order " + std::to_string(order_) +
                                               " into order " + std::to_string(target));
        if (order_ == 1 || order_ == target) return *this;
        const std::size_t step = static_cast<std::size_t>(target / order_);
        detail::IntPoly p((num_.size() - 1) * step + 1, 0);
        for (std::size_t k = 0; k < num_.size(); ++k) p[k * step] = num_[k];
        return from_raw(target, std::move(p), den_);
    }

    CycScalar operator-() const {
        CycScalar r = *this;
        for (auto& c : r.num_) c = -c;
        return r;
    }

    friend CycScalar operator+(const CycScalar& a, const CycScalar& b) { return add(a, b, false); }
    friend CycScalar operator-(const CycScalar& a, const CycScalar& b) { return add(a, b, true); }

    friend CycScalar operator*(const CycScalar& a, const CycScalar& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.order_ == 1 && b.order_ == 1) {
            CycScalar r;
            r.num_[0] = a.num_[0] * b.num_[0];
            r.den_ = a.den_ * b.den_;
            r.normalize();
            return r;
        }
        if (a.order_ == 1) return b.scaled(a.num_[0], a.den_);
        if (b.order_ == 1) return a.scaled(b.num_[0], b.den_);
        check_orders(a, b);
        detail::IntPoly p(a.num_.size() + b.num_.size() - 1, 0);
        for (std::size_t i = 0; i < a.num_.size(); ++i) {
            if (a.num_[i] == 0) continue;
            for (std::size_t j = 0; j < b.num_.size(); ++j) p[i + j] += a.num_[i] * b.num_[j];
        }
        return from_raw(a.order_, std::move(p), a.den_ * b.den_);
    }

    friend CycScalar operator/(const CycScalar& a, const CycScalar& b) { return a * b.inverse(); }

    CycScalar& operator+=(const CycScalar& o) { return *this = *this + o; }
    CycScalar& operator-=(const CycScalar& o) { return *this = *this - o; }
    CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }
    CycScalar& operator/=(const CycScalar& o) { return *this = *this / o; }

    CycScalar inverse() const {
        if (is_zero()) fail(ErrorKind::DivisionByZero, "division by zero");
        if (order_ == 1) {
            CycScalar r;
            r.num_[0] = den_;
            r.den_ = num_[0];
            if (r.den_ < 0) {
                r.den_ = -r.den_;
                r.num_[0] = -r.num_[0];
            }
            return r;
        }
        const auto& phi = detail::cyclotomic(order_);
        detail::QPoly m(phi.begin(), phi.end());
        detail::QPoly a;
        for (int k = 0; k < degree(); ++k) a.push_back(coeff(k));
        detail::QPoly inv = detail::invert_mod(a, m);
        return from_coeffs(order_, inv);
    }

    CycScalar pow(long k) const {
        if (k < 0) return inverse().pow(-k);
        CycScalar result(1), base = *this;
        while (k > 0) {
            if (k & 1) result *= base;
            k >>= 1;
            if (k) base *= base;
        }
        return result;
    }

    friend bool operator==(const CycScalar& a, const CycScalar& b) {
        return a.order_ == b.order_ && a.den_ == b.den_ && a.num_ == b.num_;
    }
    friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }

    /// Total order used for deterministic reporting: order first, then
    /// coefficients lexicographically in the power basis.
    friend bool lex_less(const CycScalar& a, const CycScalar& b) {
        if (a.order_ != b.order_) return a.order_ < b.order_;
        for (int k = 0; k < a.degree(); ++k) {
            Rational x = a.coeff(k), y = b.coeff(k);
            if (x != y) return x < y;
        }
        return false;
    }

    /// Renders as "a0 + a1*z5 + a2*z5^2" where zN stands for zeta_N.
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = 0; k < degree(); ++k) {
            Rational c = coeff(k);
            if (c == 0) continue;
            std::string term;
            if (k == 0) {
                term = c.get_str();
            } else {
                std::string z = "z" + std::to_string(order_) + (k > 1 ? "^" + std::to_string(k) : "");
                if (c == 1) term = z;
                else if (c == -1) term = "-" + z;
                else term = c.get_str() + "*" + z;
            }
            if (out.empty()) out = term;
            else if (term[0] == '-') out += " - " + term.substr(1);
            else out += " + " + term;
        }
        return out;
    }

    /// Parses the rendering produced by str(); general +,-,*,/ and parentheses
    /// are accepted, with zN^k for powers of zeta_N.
    static CycScalar parse(std::string_view text) {
        detail::Cursor cur(text);
        CycScalar v = parse_expr(cur);
        if (!cur.at_end()) cur.error("unexpected trailing input");
        return v;
    }

    // Grammar pieces, reused by the series and operator parsers.
    static CycScalar parse_expr(detail::Cursor& cur) {
        CycScalar acc;
        bool first = true;
        for (;;) {
            bool neg = false;
            if (cur.accept('-')) neg = true;
            else if (!first && !cur.accept('+')) break;
            else if (first) cur.accept('+');
            CycScalar t = parse_term(cur);
            acc = neg ? acc - t : acc + t;
            first = false;
        }
        return acc;
    }

    static CycScalar parse_term(detail::Cursor& cur) {
        CycScalar acc = parse_factor(cur);
        for (;;) {
            if (cur.peek() == '*' && !is_series_variable_ahead(cur)) {
                cur.advance();
                acc = acc * parse_factor(cur);
            } else if (cur.accept('/')) {
                acc = acc / parse_factor(cur);
            } else {
                break;
            }
        }
        return acc;
    }

    static CycScalar parse_factor(detail::Cursor& cur) {
        char c = cur.peek();
        if (c == '(') {
            cur.advance();
            CycScalar v = parse_expr(cur);
            cur.expect(')');
            return v;
        }
        if (c == 'z' && std::isdigit(static_cast<unsigned char>(cur.raw(1)))) {
            cur.advance();
            Integer n = cur.unsigned_integer();
            if (!n.fits_sint_p() || n < 1) cur.error("bad root-of-unity order");
            long k = 1;
            if (cur.raw() == '^') {
                cur.advance();
                k = cur.small_integer();
            }
            return zeta_pow(static_cast<int>(n.get_si()), k);
        }
        if (cur.peek_digit()) return CycScalar(cur.unsigned_integer());
        cur.error("expected number, zN or '('");
    }

private:
    int order_ = 1;
    std::vector<Integer> num_;
    Integer den_;

    // After '*', a bare 'z' (not zN) or 'D'/'h' belongs to the enclosing grammar.
    static bool is_series_variable_ahead(detail::Cursor& cur) {
        std::size_t i = 1;
        while (std::isspace(static_cast<unsigned char>(cur.raw(i)))) ++i;
        char n = cur.raw(i);
        if (n == 'z') return !std::isdigit(static_cast<unsigned char>(cur.raw(i + 1)));
        return n == 'D' || n == 'h' || n == 'O';
    }

    static CycScalar from_raw(int order, detail::IntPoly num, Integer den) {
        CycScalar r;
        if (order == 1) {
            Integer s = 0;
            for (auto& c : num) s += c;  // zeta_1 = 1
            r.num_ = {s};
        } else {
            detail::reduce_mod(num, detail::cyclotomic(order));
            r.num_ = std::move(num);
            r.order_ = order;
        }
        r.den_ = std::move(den);
        r.normalize();
        return r;
    }

    static void check_orders(const CycScalar& a, const CycScalar& b) {
        if (a.order_ != b.order_)
            fail(ErrorKind::OrderMismatch, "cannot combine elements of Q(zeta_" + std::to_string(a.order_) +
                                               ") and Q(zeta_" + std::to_string(b.order_) + ")");
    }

    static CycScalar add(const CycScalar& a, const CycScalar& b, bool subtract) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return subtract ? -b : b;
        int order = a.order_;
        if (a.order_ != b.order_) {
            if (a.order_ == 1) order = b.order_;
            else if (b.order_ != 1) check_orders(a, b);
        }
        const std::size_t len = std::max(a.num_.size(), b.num_.size());
        detail::IntPoly p(len, 0);
        if (a.den_ == b.den_) {
            for (std::size_t k = 0; k < a.num_.size(); ++k) p[k] = a.num_[k];
            for (std::size_t k = 0; k < b.num_.size(); ++k) p[k] += subtract ? -b.num_[k] : b.num_[k];
            return from_raw_reduced(order, std::move(p), a.den_);
        }
        for (std::size_t k = 0; k < a.num_.size(); ++k) p[k] = a.num_[k] * b.den_;
        for (std::size_t k = 0; k < b.num_.size(); ++k) {
            Integer t = b.num_[k] * a.den_;
            if (subtract) p[k] -= t;
            else p[k] += t;
        }
        return from_raw_reduced(order, std::move(p), a.den_ * b.den_);
    }

    // Same as from_raw for input already of length phi(order).
    static CycScalar from_raw_reduced(int order, detail::IntPoly num, Integer den) {
        CycScalar r;
        r.order_ = order;
        r.num_ = std::move(num);
        r.den_ = std::move(den);
        r.normalize();
        return r;
    }

    CycScalar scaled(const Integer& n, const Integer& d) const {
        CycScalar r = *this;
        for (auto& c : r.num_) c *= n;
        r.den_ *= d;
        r.normalize();
        return r;
    }

    void normalize() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& c : num_) c = -c;
        }
        bool rational = true;
        for (std::size_t k = 1; k < num_.size(); ++k)
            if (num_[k] != 0) {
                rational = false;
                break;
            }
        if (rational) {
            num_.resize(1);
            order_ = 1;
        }
        if (num_[0] == 0 && rational) {
            den_ = 1;
            return;
        }
        if (den_ == 1) return;
        Integer g = den_;
        for (const auto& c : num_) {
            if (c == 0) continue;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) return;
        }
        den_ /= g;
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
};

inline std::string to_string(const CycScalar& a) { return a.str(); }
inline std::ostream& operator<<(std::ostream& os, const CycScalar& a) { return os << a.str(); }

/// Canonical representative of zeta_n^k.
inline CycScalar zeta_pow(int n, long k) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "zeta_pow requires n >= 1");
    long e = ((k % n) + n) % n;
    if (n == 1 || e == 0) return CycScalar(1);
    std::vector<Rational> c(static_cast<std::size_t>(e) + 1, 0);
    c[static_cast<std::size_t>(e)] = 1;
    return CycScalar::from_coeffs(n, c);
}

inline bool is_integer(const CycScalar& a) { return a.is_integer(); }

enum class ArithOp { Add, Sub, Mul, Div };

inline CycScalar field_arith(const CycScalar& a, const CycScalar& b, ArithOp op) {
    switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
    }
    return {};
}

/// Exact r-th root of an integer if one exists.
inline std::optional<Integer> exact_root(const Integer& v, unsigned long r) {
    if (v < 0) return std::nullopt;
    Integer out;
    if (mpz_root(out.get_mpz_t(), v.get_mpz_t(), r) == 0) return std::nullopt;
    return out;
}

/// An r-th root of a rational inside some cyclotomic field: the positive real
/// root for q > 0, the negative real root for q < 0 and r odd, and
/// |q|^{1/r} * zeta_{2r} for q < 0 and r even. Empty when |q| is not a perfect
/// r-th power.
inline std::optional<CycScalar> rational_root(const Rational& q, int r) {
    if (r < 1) fail(ErrorKind::InvalidArgument, "root index must be positive");
    if (q == 0) return CycScalar(0);
    Integer n = abs(q.get_num());
    auto rn = exact_root(n, static_cast<unsigned long>(r));
    auto rd = exact_root(q.get_den(), static_cast<unsigned long>(r));
    if (!rn || !rd) return std::nullopt;
    CycScalar root(make_rational(*rn, *rd));
    if (q > 0) return root;
    if (r % 2 == 1) return -root;
    return root * zeta_pow(2 * r, 1);
}

}  // namespace sato
