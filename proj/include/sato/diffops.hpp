#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sato/coeffs.hpp"
#include "sato/series.hpp"

namespace sato {

/// Normal-ordered element of C[z, 1/z]<d/dz> with a central formal hbar:
/// sum of c * hbar^e * z^a * D^b.
class DiffOp {
public:
    struct Key {
        long a = 0;  // z exponent
        long b = 0;  // D order
        long e = 0;  // hbar degree
        friend bool operator<(const Key& x, const Key& y) {
            return std::tie(x.e, x.b, x.a) < std::tie(y.e, y.b, y.a);
        }
        friend bool operator==(const Key& x, const Key& y) = default;
    };

    DiffOp() = default;
    DiffOp(const CycScalar& c) { add_term({0, 0, 0}, c); }  // NOLINT(google-explicit-constructor)
    DiffOp(long c) : DiffOp(CycScalar(c)) {}               // NOLINT(google-explicit-constructor)

    static DiffOp term(const CycScalar& c, long a, long b = 0, long e = 0) {
        if (b < 0 || e < 0) fail(ErrorKind::InvalidArgument, "D order and hbar degree must be nonnegative");
        DiffOp d;
        d.add_term({a, b, e}, c);
        return d;
    }
    static DiffOp z(long a = 1) { return term(CycScalar(1), a); }
    static DiffOp D(long b = 1) { return term(CycScalar(1), 0, b); }
    static DiffOp hbar() { return term(CycScalar(1), 0, 0, 1); }
    /// Multiplication operator by an exact Laurent polynomial.
    static DiffOp multiplication(const Series& f) {
        if (!f.is_exact()) fail(ErrorKind::InvalidArgument, "multiplication operator needs an exact series");
        Series s = f.simplified_ram();
        if (s.ram() != 1) fail(ErrorKind::InvalidArgument, "multiplication operator needs integral exponents");
        DiffOp d;
        for (const auto& [a, c] : s.terms()) d.add_term({a, 0, 0}, c);
        return d;
    }

    const std::map<Key, CycScalar>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    CycScalar coeff(long a, long b = 0, long e = 0) const {
        auto it = terms_.find({a, b, e});
        return it == terms_.end() ? CycScalar() : it->second;
    }
    long max_hbar_degree() const {
        long m = 0;
        for (const auto& [k, c] : terms_) m = std::max(m, k.e);
        return m;
    }

    friend DiffOp operator+(DiffOp x, const DiffOp& y) {
        for (const auto& [k, c] : y.terms_) x.add_term(k, c);
        return x;
    }
    friend DiffOp operator-(DiffOp x, const DiffOp& y) {
        for (const auto& [k, c] : y.terms_) x.add_term(k, -c);
        return x;
    }
    DiffOp operator-() const {
        DiffOp r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    friend DiffOp operator*(const CycScalar& s, const DiffOp& x) {
        DiffOp r;
        for (const auto& [k, c] : x.terms_) r.add_term(k, s * c);
        return r;
    }

    /// Product in normal order: D^b z^c = sum_k C(b,k) c(c-1)...(c-k+1) z^{c-k} D^{b-k}.
    friend DiffOp operator*(const DiffOp& x, const DiffOp& y) {
        DiffOp r;
        for (const auto& [kx, cx] : x.terms_)
            for (const auto& [ky, cy] : y.terms_) {
                const CycScalar base = cx * cy;
                Integer binom = 1, falling = 1;
                for (long k = 0; k <= kx.b; ++k) {
                    if (k > 0) {
                        binom = binom * (kx.b - k + 1) / k;
                        falling *= ky.a - (k - 1);
                    }
                    if (falling == 0) break;
                    r.add_term({kx.a + ky.a - k, kx.b - k + ky.b, kx.e + ky.e},
                               base * CycScalar(Integer(binom * falling)));
                }
            }
        return r;
    }

    friend bool operator==(const DiffOp& x, const DiffOp& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const DiffOp& x, const DiffOp& y) { return !(x == y); }

    /// hbar -> value, collapsing the grading.
    DiffOp specialize_hbar(const CycScalar& value) const {
        DiffOp r;
        for (const auto& [k, c] : terms_) r.add_term({k.a, k.b, 0}, c * value.pow(k.e));
        return r;
    }

    std::string str() const;
    static DiffOp parse(std::string_view text);

private:
    std::map<Key, CycScalar> terms_;

    void add_term(const Key& k, const CycScalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (inserted) return;
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
};

inline DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

/// A^{p,q} = 1/(p z^{p-1}) D + (1-p)/(2p z^p) + sum_{-p<i<=q} a_i z^i.
/// With an empty map the canonical operator (a_q = 1) is returned.
inline DiffOp kac_schwarz(long p, long q, const std::map<long, CycScalar>& a = {}) {
    if (p < 1) fail(ErrorKind::InvalidArgument, "p must be positive");
    DiffOp op = DiffOp::term(CycScalar(make_rational(1, p)), 1 - p, 1) +
                DiffOp::term(CycScalar(make_rational(1 - p, 2 * p)), -p);
    if (a.empty()) return op + DiffOp::z(q);
    for (const auto& [i, c] : a) {
        if (i <= -p || i > q)
            fail(ErrorKind::BadDegreeRange,
                 "index " + std::to_string(i) + " outside (" + std::to_string(-p) + ", " + std::to_string(q) + "]");
        op = op + DiffOp::term(c, i);
    }
    return op;
}

/// [A, z^{p(i+1)} A / (i+1)] - z^{pi} A; vanishes identically.
inline DiffOp ks_commutator_identity(long p, long q, long i) {
    if (i < 0) fail(ErrorKind::InvalidArgument, "i must be nonnegative");
    const DiffOp A = kac_schwarz(p, q);
    const DiffOp rhs = CycScalar(make_rational(1, i + 1)) * (DiffOp::z(p * (i + 1)) * A);
    return commutator(A, rhs) - DiffOp::z(p * i) * A;
}

/// l_n = -z^n (z D + (1+n)/2).
inline DiffOp witt_op(long n) {
    return -(DiffOp::term(CycScalar(1), n + 1, 1) + DiffOp::term(CycScalar(make_rational(1 + n, 2)), n));
}

/// [l_m, l_n] - (m-n) l_{m+n}; vanishes identically.
inline DiffOp witt_relation(long m, long n) {
    return commutator(witt_op(m), witt_op(n)) - CycScalar(m - n) * witt_op(m + n);
}

/// Applies op to a series. hbar terms need a value for the specialization.
inline Series apply(const DiffOp& op, const Series& s, std::optional<CycScalar> hbar = std::nullopt) {
    Series out;
    long max_b = 0;
    for (const auto& [k, c] : op.terms()) max_b = std::max(max_b, k.b);
    std::vector<Series> ders{s};
    for (long b = 1; b <= max_b; ++b) ders.push_back(derivative(ders.back()));
    for (const auto& [k, c] : op.terms()) {
        CycScalar coef = c;
        if (k.e > 0) {
            if (!hbar) fail(ErrorKind::InvalidArgument, "operator has hbar terms; supply a value");
            coef = coef * hbar->pow(k.e);
        }
        out = out + Series::monomial(coef, k.a) * ders[static_cast<std::size_t>(k.b)];
    }
    return out;
}

namespace detail {

inline std::string diffop_monomial(const DiffOp::Key& k) {
    std::string m;
    auto push = [&m](const std::string& f) { m += (m.empty() ? "" : "*") + f; };
    if (k.e == 1) push("h");
    else if (k.e > 1) push("h^" + std::to_string(k.e));
    if (k.a == 1) push("z");
    else if (k.a != 0) push("z^" + std::to_string(k.a));
    if (k.b == 1) push("D");
    else if (k.b > 1) push("D^" + std::to_string(k.b));
    return m;
}

}  // namespace detail

/// Highest hbar degree first, then highest D order, then ascending z power:
/// "1/2*z^-1*D - 1/4*z^-2 + z^3".
inline std::string DiffOp::str() const {
    std::vector<std::pair<Key, CycScalar>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
        if (x.first.e != y.first.e) return x.first.e > y.first.e;
        if (x.first.b != y.first.b) return x.first.b > y.first.b;
        return x.first.a < y.first.a;
    });
    std::string out;
    for (const auto& [k, c] : ts) {
        auto [neg, body] = detail::term_str(c, detail::diffop_monomial(k));
        detail::append_term(out, neg, body);
    }
    return out.empty() ? "0" : out;
}

inline DiffOp DiffOp::parse(std::string_view text) {
    detail::Cursor cur(text);
    DiffOp out;
    bool first = true;
    while (!cur.at_end()) {
        bool neg = false;
        if (cur.accept('-')) neg = true;
        else if (!cur.accept('+') && !first) cur.error("expected '+' or '-'");
        first = false;
        CycScalar c(1);
        Key k;
        bool need_factor = true;
        char p = cur.peek();
        if (p == '(' || std::isdigit(static_cast<unsigned char>(p)) ||
            (p == 'z' && std::isdigit(static_cast<unsigned char>(cur.raw(1))))) {
            c = CycScalar::parse_term(cur);
            if (!cur.accept('*')) need_factor = false;
        }
        while (need_factor) {
            char v = cur.peek();
            if (v != 'z' && v != 'D' && v != 'h') cur.error("expected z, D or h");
            cur.advance();
            long power = 1;
            if (cur.accept('^')) power = cur.small_integer();
            if (v == 'z') k.a += power;
            else if (power < 0) cur.error("negative power of D or h");
            else if (v == 'D') k.b += power;
            else k.e += power;
            need_factor = cur.accept('*');
        }
        out.add_term(k, neg ? -c : c);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const DiffOp& d) { return os << d.str(); }

}  // namespace sato
