#pragma once

/**
 * @file series.hpp
 * @brief Truncated Laurent and Puiseux series in z with CycScalar coefficients.
 *
 * Exponents are stored as integer numerators over a fixed ramification index
 * e, so z^{k/e} is the term with numerator k. Series descend in 1/z: an
 * optional truncation numerator t means the value is exact for exponents
 * strictly greater than t/e and unknown at or below it. Without a
 * truncation the value is an exact Laurent (or Puiseux) polynomial.
 */

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sato/coeffs.hpp"

namespace sato {

/// Default number of exponents below the leading one kept by working computations.
inline constexpr int kDefaultTruncation = 12;

class Series {
public:
    using Term = std::pair<long, CycScalar>;  // (exponent numerator, coefficient)

    Series() = default;
    Series(const CycScalar& c) {  // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) coeffs_.push_back(c);
    }
    Series(long c) : Series(CycScalar(c)) {}  // NOLINT(google-explicit-constructor)

    /// c * z^{num/ram}.
    static Series monomial(const CycScalar& c, long num, int ram = 1) {
        Series s;
        s.ram_ = checked_ram(ram);
        if (!c.is_zero()) {
            s.top_ = num;
            s.coeffs_.push_back(c);
        }
        return s;
    }
    /// The variable z itself.
    static Series z() { return monomial(CycScalar(1), 1); }

    static Series from_terms(const std::vector<Term>& terms, int ram = 1,
                             std::optional<long> trunc = std::nullopt) {
        Series s;
        s.ram_ = checked_ram(ram);
        s.trunc_ = trunc;
        if (terms.empty()) return s;
        std::map<long, CycScalar> acc;
        for (const auto& [e, c] : terms) acc[e] += c;
        s.assign_from_map(acc);
        return s;
    }

    /// Exact zero carrying only a truncation bound: O(z^{num/ram}).
    static Series big_o(long num, int ram = 1) {
        Series s;
        s.ram_ = checked_ram(ram);
        s.trunc_ = num;
        return s;
    }

    int ram() const noexcept { return ram_; }
    bool is_exact() const noexcept { return !trunc_.has_value(); }
    std::optional<long> trunc() const noexcept { return trunc_; }
    std::optional<Rational> trunc_exponent() const {
        if (!trunc_) return std::nullopt;
        return make_rational(*trunc_, ram_);
    }
    /// True when no term is known (the value may still carry a truncation).
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_exact_zero() const noexcept { return coeffs_.empty() && !trunc_; }

    /// Numerator of the highest known exponent; requires !is_zero().
    long top() const noexcept { return top_; }
    /// Numerator of the lowest known exponent; requires !is_zero().
    long bottom() const noexcept { return top_ - static_cast<long>(coeffs_.size()) + 1; }

    /// Coefficient at exponent num/ram; zero when absent. Unknown (below the
    /// truncation) positions throw InsufficientPrecision.
    CycScalar coeff(long num) const {
        if (trunc_ && num <= *trunc_)
            fail(ErrorKind::InsufficientPrecision,
                 "coefficient at z^(" + std::to_string(num) + "/" + std::to_string(ram_) +
                     ") is below the truncation");
        if (coeffs_.empty() || num > top_ || num < bottom()) return {};
        return coeffs_[static_cast<std::size_t>(top_ - num)];
    }
    /// Coefficient at the integer exponent k (requires k*ram representable).
    CycScalar coeff_at_integer(long k) const { return coeff(k * ram_); }
    bool known(long num) const { return !trunc_ || num > *trunc_; }

    std::vector<Term> terms() const {
        std::vector<Term> out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) out.emplace_back(top_ - static_cast<long>(i), coeffs_[i]);
        return out;
    }
    std::size_t term_count() const {
        return static_cast<std::size_t>(
            std::count_if(coeffs_.begin(), coeffs_.end(), [](const CycScalar& c) { return !c.is_zero(); }));
    }

    /// Highest known term as (exponent, coefficient).
    std::pair<Rational, CycScalar> leading() const {
        if (coeffs_.empty()) fail(ErrorKind::ZeroSeries, "series has no known terms");
        return {make_rational(top_, ram_), coeffs_.front()};
    }

    /// Same value over ramification index ram*factor.
    Series with_ram(int target) const {
        if (target % ram_ != 0)
            fail(ErrorKind::InvalidArgument, "ramification " + std::to_string(ram_) + " does not divide " +
                                                 std::to_string(target));
        if (target == ram_) return *this;
        const long f = target / ram_;
        Series s;
        s.ram_ = target;
        if (trunc_) s.trunc_ = *trunc_ * f;
        if (coeffs_.empty()) return s;
        s.top_ = top_ * f;
        s.coeffs_.assign(static_cast<std::size_t>((static_cast<long>(coeffs_.size()) - 1) * f + 1), CycScalar());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) s.coeffs_[i * static_cast<std::size_t>(f)] = coeffs_[i];
        return s;
    }

    /// Smallest ramification index representing this value.
    Series simplified_ram() const {
        long g = ram_;
        for (const auto& [e, c] : terms()) g = gcd_long(g, e);
        if (trunc_) g = gcd_long(g, *trunc_);
        if (g <= 1) return *this;
        Series s;
        s.ram_ = static_cast<int>(ram_ / g);
        if (trunc_) s.trunc_ = *trunc_ / g;
        std::vector<Term> ts;
        for (auto& [e, c] : terms()) ts.emplace_back(e / g, c);
        std::map<long, CycScalar> m(ts.begin(), ts.end());
        s.assign_from_map(m);
        return s;
    }

    /// Drop everything at or below exponent num/ram and mark it unknown.
    Series truncated(long num) const {
        if (trunc_ && *trunc_ >= num) return *this;
        Series s = *this;
        s.trunc_ = num;
        s.drop_unknown();
        return s;
    }
    /// Forget the truncation marker; only valid when the caller knows the tail vanishes.
    Series assume_exact() const {
        Series s = *this;
        s.trunc_.reset();
        return s;
    }

    /// Terms with exponent >= num/ram, exact.
    Series part_at_or_above(long num) const {
        if (trunc_ && *trunc_ >= num)
            fail(ErrorKind::InsufficientPrecision, "requested part extends below the truncation");
        std::vector<Term> ts;
        for (auto& t : terms())
            if (t.first >= num) ts.push_back(t);
        return from_terms(ts, ram_);
    }

    Series lift(int order) const {
        Series s = *this;
        for (auto& c : s.coeffs_) c = c.lift(order);
        return s;
    }
    /// Least common cyclotomic order of the coefficients.
    int field_order() const {
        int o = 1;
        for (const auto& c : coeffs_) o = common_order(o, c.order());
        return o;
    }

    Series operator-() const {
        Series s = *this;
        for (auto& c : s.coeffs_) c = -c;
        return s;
    }

    friend Series operator+(const Series& a, const Series& b) { return add(a, b, false); }
    friend Series operator-(const Series& a, const Series& b) { return add(a, b, true); }

    friend Series operator*(const Series& a, const Series& b) {
        if (a.is_exact_zero() || b.is_exact_zero()) return Series{};
        const int e = static_cast<int>(lcm_long(a.ram_, b.ram_));
        if (a.ram_ != e || b.ram_ != e) return a.with_ram(e) * b.with_ram(e);
        constexpr long kNone = std::numeric_limits<long>::min();
        long bound = kNone;
        if (a.trunc_) bound = std::max(bound, *a.trunc_ + b.degree_bound());
        if (b.trunc_) bound = std::max(bound, *b.trunc_ + a.degree_bound());
        Series s;
        s.ram_ = e;
        if (bound != kNone) s.trunc_ = bound;
        if (a.coeffs_.empty() || b.coeffs_.empty()) return s;
        const long top = a.top_ + b.top_;
        long low = a.bottom() + b.bottom();
        if (bound != kNone) low = std::max(low, bound + 1);
        if (low > top) return s;
        std::vector<CycScalar> out(static_cast<std::size_t>(top - low + 1));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            const long ea = a.top_ - static_cast<long>(i);
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                const long ex = ea + b.top_ - static_cast<long>(j);
                if (ex < low) break;
                if (b.coeffs_[j].is_zero()) continue;
                out[static_cast<std::size_t>(top - ex)] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        s.top_ = top;
        s.coeffs_ = std::move(out);
        s.trim();
        return s;
    }

    friend Series operator*(const CycScalar& c, const Series& a) {
        if (c.is_zero()) return a.trunc_ ? big_o(*a.trunc_, a.ram_) : Series{};
        Series s = a;
        for (auto& x : s.coeffs_)
            if (!x.is_zero()) x = c * x;
        return s;
    }
    friend Series operator*(const Series& a, const CycScalar& c) { return c * a; }

    Series& operator+=(const Series& o) { return *this = *this + o; }
    Series& operator-=(const Series& o) { return *this = *this - o; }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    /// Multiply by z^{num/ram}.
    Series shifted(long num) const {
        Series s = *this;
        if (!s.coeffs_.empty()) s.top_ += num;
        if (s.trunc_) *s.trunc_ += num;
        return s;
    }

    /// Mathematical equality: common ramification, same known terms, same truncation.
    friend bool operator==(const Series& a, const Series& b) {
        const int e = static_cast<int>(lcm_long(a.ram_, b.ram_));
        if (a.ram_ != e || b.ram_ != e) return a.with_ram(e) == b.with_ram(e);
        return a.trunc_ == b.trunc_ && a.top_eq(b);
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    /// Equality of the known terms above a common bound, ignoring truncation markers.
    friend bool agree_above(const Series& a, const Series& b, const Rational& exponent) {
        Series d = a - b;
        for (const auto& [num, c] : d.terms())
            if (make_rational(num, d.ram_) > exponent) return false;
        return true;
    }

    std::string str() const;
    static Series parse(std::string_view text);

private:
    int ram_ = 1;
    long top_ = 0;
    std::vector<CycScalar> coeffs_;  // coeffs_[i] sits at numerator top_ - i
    std::optional<long> trunc_;

    static int checked_ram(int ram) {
        if (ram < 1) fail(ErrorKind::InvalidArgument, "ramification index must be positive");
        return ram;
    }

    long degree_bound() const {
        long d = std::numeric_limits<long>::min() / 4;
        if (!coeffs_.empty()) d = top_;
        if (trunc_) d = std::max(d, *trunc_);
        return d;
    }

    bool top_eq(const Series& b) const {
        if (coeffs_.size() != b.coeffs_.size()) return false;
        if (coeffs_.empty()) return true;
        return top_ == b.top_ && coeffs_ == b.coeffs_;
    }

    void assign_from_map(const std::map<long, CycScalar>& m) {
        coeffs_.clear();
        if (m.empty()) return;
        top_ = m.rbegin()->first;
        const long low = m.begin()->first;
        coeffs_.assign(static_cast<std::size_t>(top_ - low + 1), CycScalar());
        for (const auto& [e, c] : m) coeffs_[static_cast<std::size_t>(top_ - e)] = c;
        drop_unknown();
    }

    void drop_unknown() {
        if (trunc_ && !coeffs_.empty()) {
            const long keep = top_ - *trunc_;
            if (keep <= 0) coeffs_.clear();
            else if (static_cast<long>(coeffs_.size()) > keep) coeffs_.resize(static_cast<std::size_t>(keep));
        }
        trim();
    }

    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
        std::size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
            top_ -= static_cast<long>(lead);
        }
        if (coeffs_.empty()) top_ = 0;
    }

    static Series add(const Series& a, const Series& b, bool subtract) {
        const int e = static_cast<int>(lcm_long(a.ram_, b.ram_));
        if (a.ram_ != e || b.ram_ != e) return add(a.with_ram(e), b.with_ram(e), subtract);
        Series s;
        s.ram_ = e;
        if (a.trunc_ || b.trunc_)
            s.trunc_ = std::max(a.trunc_.value_or(std::numeric_limits<long>::min()),
                                b.trunc_.value_or(std::numeric_limits<long>::min()));
        if (a.coeffs_.empty() && b.coeffs_.empty()) return s;
        long top, low;
        if (a.coeffs_.empty()) top = b.top_, low = b.bottom();
        else if (b.coeffs_.empty()) top = a.top_, low = a.bottom();
        else top = std::max(a.top_, b.top_), low = std::min(a.bottom(), b.bottom());
        if (s.trunc_) low = std::max(low, *s.trunc_ + 1);
        if (low > top) return s;
        s.top_ = top;
        s.coeffs_.assign(static_cast<std::size_t>(top - low + 1), CycScalar());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            long ex = a.top_ - static_cast<long>(i);
            if (ex < low) break;
            s.coeffs_[static_cast<std::size_t>(top - ex)] = a.coeffs_[i];
        }
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
            long ex = b.top_ - static_cast<long>(i);
            if (ex < low) break;
            auto& slot = s.coeffs_[static_cast<std::size_t>(top - ex)];
            slot = subtract ? slot - b.coeffs_[i] : slot + b.coeffs_[i];
        }
        s.trim();
        return s;
    }

    friend Series derivative(const Series& a);
    friend Series scale_substitute_root(const Series& a, const CycScalar& root);
};

/// Termwise c z^k -> c k z^{k-1}; the truncation moves down by one.
inline Series derivative(const Series& a) {
    Series s;
    s.ram_ = a.ram_;
    if (a.trunc_) s.trunc_ = *a.trunc_ - a.ram_;
    if (a.coeffs_.empty()) return s;
    s.top_ = a.top_ - a.ram_;
    s.coeffs_.resize(a.coeffs_.size());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        const long num = a.top_ - static_cast<long>(i);
        if (num == 0 || a.coeffs_[i].is_zero()) continue;
        s.coeffs_[i] = CycScalar(make_rational(num, a.ram_)) * a.coeffs_[i];
    }
    s.trim();
    return s;
}

/// a(root^ram * z) computed termwise as coefficient(k/ram) * root^k. Selecting
/// the root fixes the branch for ramified series.
inline Series scale_substitute_root(const Series& a, const CycScalar& root) {
    if (root.is_zero()) fail(ErrorKind::ZeroScale, "substitution scale must be nonzero");
    Series s = a;
    if (s.coeffs_.empty()) return s;
    CycScalar p = root.pow(s.top_);
    const CycScalar inv = root.inverse();
    for (auto& c : s.coeffs_) {
        if (!c.is_zero()) c = c * p;
        p = p * inv;
    }
    return s;
}

/// a(c z) for a series with integral exponents.
inline Series scale_substitute(const Series& a, const CycScalar& c) {
    if (c.is_zero()) fail(ErrorKind::ZeroScale, "substitution scale must be nonzero");
    Series s = a.simplified_ram();
    if (s.ram() != 1)
        fail(ErrorKind::InvalidArgument, "scale_substitute on a ramified series needs an explicit root");
    return scale_substitute_root(s, c);
}

/// f(g) for an exact polynomial f (nonnegative integral exponents), by Horner.
inline Series compose(const Series& f, const Series& g) {
    if (!f.is_exact()) fail(ErrorKind::InvalidArgument, "compose requires an exact outer polynomial");
    Series fs = f.simplified_ram();
    if (fs.ram() != 1) fail(ErrorKind::InvalidArgument, "compose requires integral exponents");
    if (fs.is_zero()) return Series{};
    if (fs.bottom() < 0) fail(ErrorKind::InvalidArgument, "compose requires a polynomial outer function");
    Series r(fs.coeff(fs.top()));
    for (long k = fs.top() - 1; k >= 0; --k) r = r * g + Series(fs.coeff(k));
    return r;
}

/// Exponential and polynomial value helpers.
inline Series pow(const Series& a, unsigned k) {
    Series r(1L), base = a;
    while (k) {
        if (k & 1U) r = r * base;
        k >>= 1U;
        if (k) base = base * base;
    }
    return r;
}

/// Termwise antiderivative; a z^-1 term has no Laurent antiderivative.
inline Series integral(const Series& a) {
    std::vector<Series::Term> ts;
    for (const auto& [num, c] : a.terms()) {
        if (num == -a.ram()) fail(ErrorKind::InvalidArgument, "z^-1 term has no Laurent antiderivative");
        ts.emplace_back(num + a.ram(), c * CycScalar(make_rational(a.ram(), num + a.ram())));
    }
    std::optional<long> trunc;
    if (a.trunc()) trunc = *a.trunc() + a.ram();
    return Series::from_terms(ts, a.ram(), trunc);
}

/// exp(g) for g with only negative exponents, known through z^{-terms}.
inline Series exp_negative(const Series& g, long terms) {
    if (!g.is_zero() && g.top() >= 0) fail(ErrorKind::InvalidArgument, "exp_negative needs negative exponents");
    Series out(1L), power(1L);
    for (long j = 1; j <= terms; ++j) {
        power = CycScalar(make_rational(1, j)) * (power * g);
        power = power.truncated(-(terms + 1) * g.ram());
        out = out + power;
    }
    return out.truncated(-(terms + 1) * g.ram());
}

inline std::pair<Rational, CycScalar> leading(const Series& a) { return a.leading(); }

inline std::ostream& operator<<(std::ostream& os, const Series& a) { return os << a.str(); }

namespace detail {

inline std::string exponent_str(long num, int ram) {
    Rational q = make_rational(num, ram);
    if (q.get_den() == 1) return q.get_str();
    return "(" + q.get_str() + ")";
}

inline std::string monomial_str(long num, int ram) {
    if (num == 0) return "";
    if (num == ram) return "z";
    return "z^" + exponent_str(num, ram);
}

// Renders c * mono with the sign pulled out; returns (negative, body).
inline std::pair<bool, std::string> term_str(const CycScalar& c, const std::string& mono) {
    if (c.is_rational()) {
        Rational q = c.to_rational();
        bool neg = q < 0;
        Rational a = neg ? Rational(-q) : q;
        if (mono.empty()) return {neg, a.get_str()};
        if (a == 1) return {neg, mono};
        return {neg, a.get_str() + "*" + mono};
    }
    std::string body = "(" + c.str() + ")";
    return {false, mono.empty() ? body : body + "*" + mono};
}

inline void append_term(std::string& out, bool neg, const std::string& body) {
    if (out.empty()) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
}

inline long parse_exponent_numerator(Cursor& cur, long& den) {
    if (cur.accept('(')) {
        long n = cur.small_integer();
        den = 1;
        if (cur.accept('/')) den = cur.small_integer();
        if (den <= 0) cur.error("bad exponent denominator");
        cur.expect(')');
        return n;
    }
    den = 1;
    return cur.small_integer();
}

}  // namespace detail

inline std::string Series::str() const {
    std::string out;
    for (const auto& [num, c] : terms()) {
        auto [neg, body] = detail::term_str(c, detail::monomial_str(num, ram_));
        detail::append_term(out, neg, body);
    }
    if (trunc_) {
        std::string o = "O(z^" + detail::exponent_str(*trunc_, ram_) + ")";
        detail::append_term(out, false, o);
    }
    return out.empty() ? "0" : out;
}

inline std::string to_string(const Series& s) { return s.str(); }

/// Parses the canonical form, e.g. "z^5 - 14/5*z^4 + (1 + z5)*z + O(z^-12)".
inline Series Series::parse(std::string_view text) {
    detail::Cursor cur(text);
    struct Raw {
        Rational exp;
        CycScalar c;
    };
    std::vector<Raw> raw;
    std::optional<Rational> big_o;
    bool first = true;
    while (!cur.at_end()) {
        bool neg = false;
        if (cur.accept('-')) neg = true;
        else if (!cur.accept('+') && !first) cur.error("expected '+' or '-'");
        first = false;
        if (cur.peek() == 'O') {
            cur.advance();
            cur.expect('(');
            if (cur.peek() != 'z') cur.error("expected z inside O()");
            cur.advance();
            long den = 1, num = 1;
            if (cur.accept('^')) num = detail::parse_exponent_numerator(cur, den);
            cur.expect(')');
            if (neg) cur.error("O() term cannot be negated");
            big_o = make_rational(num, den);
            continue;
        }
        CycScalar c(1);
        bool have_coeff = false;
        char p = cur.peek();
        if (p == '(' || std::isdigit(static_cast<unsigned char>(p)) ||
            (p == 'z' && std::isdigit(static_cast<unsigned char>(cur.raw(1))))) {
            c = CycScalar::parse_term(cur);
            have_coeff = true;
            if (cur.peek() == '*') cur.advance();
            else {
                raw.push_back({Rational(0), neg ? -c : c});
                continue;
            }
        }
        if (cur.peek() != 'z') {
            if (have_coeff) cur.error("expected z after '*'");
            cur.error("expected a term");
        }
        cur.advance();
        Rational e = 1;
        if (cur.accept('^')) {
            long den = 1;
            long num = detail::parse_exponent_numerator(cur, den);
            e = make_rational(num, den);
        }
        raw.push_back({e, neg ? -c : c});
    }
    long ram = 1;
    for (const auto& r : raw) ram = lcm_long(ram, r.exp.get_den().get_si());
    if (big_o) ram = lcm_long(ram, big_o->get_den().get_si());
    std::vector<Term> terms;
    for (const auto& r : raw) {
        Rational n = r.exp * ram;
        terms.emplace_back(n.get_num().get_si(), r.c);
    }
    std::optional<long> trunc;
    if (big_o) trunc = Rational(*big_o * ram).get_num().get_si();
    return from_terms(terms, static_cast<int>(ram), trunc);
}

/// Inverse at the origin of an exact series f = f_1 z + f_2 z^2 + ... with
/// f_1 != 0: returns g with f(g(w)) = w + O(w^{order+1}). The result is the
/// exact polynomial g_1 w + ... + g_order w^order; higher terms are not computed.
inline Series compositional_inverse_at_zero(const Series& f, int order) {
    if (order < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    Series fs = f.simplified_ram();
    if (!fs.is_exact() || fs.ram() != 1 || fs.is_zero() || fs.bottom() < 1)
        fail(ErrorKind::NotInvertible, "inversion at zero needs an exact power series without constant term");
    const CycScalar f1 = fs.coeff(1);
    if (f1.is_zero()) fail(ErrorKind::NotInvertible, "linear coefficient vanishes");
    const auto n = static_cast<std::size_t>(order);
    const long deg = fs.top();
    std::vector<CycScalar> g(n + 1);
    g[1] = f1.inverse();
    auto mul_trunc = [](const std::vector<CycScalar>& a, const std::vector<CycScalar>& b, std::size_t cap) {
        std::vector<CycScalar> r(cap + 1);
        for (std::size_t i = 0; i <= cap && i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; i + j <= cap && j < b.size(); ++j)
                if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
        }
        return r;
    };
    for (std::size_t m = 2; m <= n; ++m) {
        // Horner evaluation of f(g) modulo w^{m+1}, with g known through w^{m-1}.
        std::vector<CycScalar> h(m + 1);
        h[0] = fs.coeff(deg);
        for (long k = deg - 1; k >= 0; --k) {
            h = mul_trunc(h, g, m);
            h[0] += fs.coeff(k);
        }
        g[m] = -h[m] / f1;
    }
    std::vector<Series::Term> terms;
    for (std::size_t k = 1; k <= n; ++k) terms.emplace_back(static_cast<long>(k), g[k]);
    return Series::from_terms(terms);
}

/// Inverse at infinity of a polynomial f of degree r >= 1: a descending
/// Puiseux series w(z) in u = z^{1/r} with f(w) = z. The branch is fixed by
/// the leading coefficient c_0 of w, which must satisfy c_0^r * lead(f) = 1;
/// when not supplied it is taken from rational_root. Returns `order` terms
/// u^1, u^0, ..., u^{2-order} with the remainder marked unknown. Degree one
/// polynomials have an exact inverse.
inline Series compositional_inverse_at_infinity(const Series& f, int order,
                                                std::optional<CycScalar> lead_root = std::nullopt) {
    Series fs = f.simplified_ram();
    if (!fs.is_exact() || fs.ram() != 1 || fs.is_zero() || fs.bottom() < 0 || fs.top() < 1)
        fail(ErrorKind::NotInvertible, "inversion at infinity needs an exact polynomial of degree >= 1");
    const long r = fs.top();
    const CycScalar lead = fs.coeff(r);
    if (r == 1) {
        // w = (z - f_0) / f_1
        const CycScalar inv = lead.inverse();
        return Series::from_terms({{1, inv}, {0, -fs.coeff(0) * inv}});
    }
    CycScalar c0;
    if (lead_root) {
        c0 = *lead_root;
    } else {
        if (!lead.is_rational())
            fail(ErrorKind::NotInvertible, "leading coefficient root must be supplied for irrational leads");
        auto root = rational_root(Rational(1 / lead.to_rational()), static_cast<int>(r));
        if (!root)
            fail(ErrorKind::NotInvertible,
                 "no cyclotomic r-th root of 1/" + lead.to_rational().get_str() + " for r=" + std::to_string(r));
        c0 = *root;
    }
    if (c0.is_zero() || c0.pow(r) * lead != CycScalar(1))
        fail(ErrorKind::NotInvertible, "supplied root does not invert the leading coefficient");
    if (order < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    const int ram = static_cast<int>(r);
    const CycScalar denom = CycScalar(r) * lead * c0.pow(r - 1);
    std::vector<Series::Term> terms{{1, c0}};
    for (long i = 1; i < order; ++i) {
        Series w = Series::from_terms(terms, ram);
        CycScalar known = compose(fs, w).coeff(r - i);
        terms.emplace_back(1 - i, -known / denom);
    }
    return Series::from_terms(terms, ram, 1 - order);
}

/// Compositional inverse: at the origin for exact series of valuation one,
/// otherwise at infinity for polynomials of degree >= 1.
inline Series compositional_inverse(const Series& f, int order) {
    Series fs = f.simplified_ram();
    if (fs.is_exact() && fs.ram() == 1 && !fs.is_zero() && fs.bottom() == 1) return compositional_inverse_at_zero(fs, order);
    return compositional_inverse_at_infinity(fs, order);
}

}  // namespace sato
