#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sato/coeffs.hpp"
#include "sato/errors.hpp"
#include "sato/series.hpp"

namespace sato {

/// Exponent vector over t_1..t_T (slot k-1 holds the power of t_k).
using MultiIndex = std::vector<int>;

/// Polynomial in t_1..t_T with rational coefficients.
struct FockPoly {
    int T = 0;
    std::map<MultiIndex, Rational> terms;

    explicit FockPoly(int cutoff = 0) : T(cutoff) {}

    static FockPoly monomial(int T, const MultiIndex& e, const Rational& c = Rational(1)) {
        FockPoly p(T);
        if (c != 0) p.terms[e] = c;
        return p;
    }
    void add(const MultiIndex& e, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    friend bool operator==(const FockPoly& a, const FockPoly& b) { return a.T == b.T && a.terms == b.terms; }
};

/// Normal-ordered element of the Weyl algebra in t_1..t_T: sums of
/// c * t^alpha * d^beta with every t to the left of every d. shift bounds how
/// far above its input an index can be pushed; guarded checks use it.
class FockOp {
public:
    using Key = std::pair<MultiIndex, MultiIndex>;

    explicit FockOp(int cutoff = 0, int shift = 0) : T_(cutoff), shift_(shift) {}

    /// c * t_{ts[0]} t_{ts[1]} ... d_{ds[0]} ..., indices 1-based.
    static FockOp monomial(int T, const Rational& c, const std::vector<int>& ts, const std::vector<int>& ds) {
        FockOp op(T);
        MultiIndex a(static_cast<std::size_t>(T)), b(static_cast<std::size_t>(T));
        for (int k : ts) ++a[op.slot(k)];
        for (int k : ds) ++b[op.slot(k)];
        op.add({a, b}, c);
        return op;
    }
    static FockOp constant(int T, const Rational& c) { return monomial(T, c, {}, {}); }

    int cutoff() const noexcept { return T_; }
    int shift() const noexcept { return shift_; }
    void set_shift(int s) { shift_ = s; }
    const std::map<Key, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add(const Key& k, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend FockOp operator+(const FockOp& a, const FockOp& b) {
        check_cutoff(a, b);
        FockOp r = a;
        r.shift_ = std::max(a.shift_, b.shift_);
        for (const auto& [k, c] : b.terms_) r.add(k, c);
        return r;
    }
    friend FockOp operator-(const FockOp& a, const FockOp& b) { return a + Rational(-1) * b; }
    friend FockOp operator*(const Rational& s, const FockOp& a) {
        FockOp r(a.T_, a.shift_);
        for (const auto& [k, c] : a.terms_) r.add(k, s * c);
        return r;
    }
    /// Composition a after b, brought back to normal order.
    friend FockOp operator*(const FockOp& a, const FockOp& b) {
        check_cutoff(a, b);
        FockOp r(a.T_, a.shift_ + b.shift_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_product(ka, kb, ca * cb);
        return r;
    }
    friend bool operator==(const FockOp& a, const FockOp& b) { return a.T_ == b.T_ && a.terms_ == b.terms_; }

    FockPoly apply(const FockPoly& p) const {
        if (p.T != T_) fail(ErrorKind::InvalidArgument, "cutoff mismatch between operator and polynomial");
        FockPoly out(T_);
        for (const auto& [key, c] : terms_) {
            const auto& [alpha, beta] = key;
            for (const auto& [m, pc] : p.terms) {
                Rational factor = c * pc;
                MultiIndex e = m;
                bool killed = false;
                for (std::size_t k = 0; k < e.size() && !killed; ++k) {
                    for (int j = 0; j < beta[k]; ++j) {
                        if (e[k] == 0) {
                            killed = true;
                            break;
                        }
                        factor *= e[k]--;
                    }
                    e[k] += alpha[k];
                }
                if (!killed) out.add(e, factor);
            }
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [key, c] : terms_) {
            std::string mono;
            auto put = [&mono](const char* var, const MultiIndex& e) {
                for (std::size_t k = 0; k < e.size(); ++k) {
                    if (!e[k]) continue;
                    if (!mono.empty()) mono += "*";
                    mono += var + std::to_string(k + 1);
                    if (e[k] > 1) mono += "^" + std::to_string(e[k]);
                }
            };
            put("t", key.first);
            put("d", key.second);
            const bool neg = c < 0;
            const Rational a = neg ? Rational(-c) : c;
            std::string body = mono.empty() ? a.get_str() : (a == 1 ? mono : a.get_str() + "*" + mono);
            if (out.empty()) out = neg ? "-" + body : body;
            else out += (neg ? " - " : " + ") + body;
        }
        return out;
    }

private:
    int T_ = 0;
    int shift_ = 0;
    std::map<Key, Rational> terms_;

    std::size_t slot(int k) const {
        if (k < 1 || k > T_)
            fail(ErrorKind::IndexCutoff, "index " + std::to_string(k) + " outside 1.." + std::to_string(T_));
        return static_cast<std::size_t>(k - 1);
    }
    static void check_cutoff(const FockOp& a, const FockOp& b) {
        if (a.T_ != b.T_) fail(ErrorKind::InvalidArgument, "cutoff mismatch between operators");
    }

    // (t^a d^b)(t^g d^e) = sum_kappa prod_k C(b_k, kappa_k) g_k!/(g_k-kappa_k)! t^{a+g-kappa} d^{b-kappa+e}
    void add_product(const Key& x, const Key& y, const Rational& c) {
        const auto& [a, b] = x;
        const auto& [g, e] = y;
        std::vector<std::size_t> overlap;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (b[k] && g[k]) overlap.push_back(k);
        MultiIndex kappa(a.size());
        auto rec = [&](auto&& self, std::size_t idx, Rational weight) -> void {
            if (idx == overlap.size()) {
                MultiIndex ta(a.size()), td(a.size());
                for (std::size_t k = 0; k < a.size(); ++k) {
                    ta[k] = a[k] + g[k] - kappa[k];
                    td[k] = b[k] - kappa[k] + e[k];
                }
                add({ta, td}, weight);
                return;
            }
            const std::size_t k = overlap[idx];
            Rational w = weight;
            for (int q = 0; q <= std::min(b[k], g[k]); ++q) {
                kappa[k] = q;
                self(self, idx + 1, w);
                // C(b,q+1) g!/(g-q-1)! from C(b,q) g!/(g-q)!
                w = w * make_rational(b[k] - q, q + 1) * (g[k] - q);
            }
            kappa[k] = 0;
        };
        rec(rec, 0, c);
    }
};

inline std::ostream& operator<<(std::ostream& os, const FockOp& op) { return os << op.str(); }

inline FockOp fock_commutator(const FockOp& a, const FockOp& b) {
    FockOp r = a * b - b * a;
    r.set_shift(a.shift() + b.shift());
    return r;
}

/// L_n = 1/2 sum_{k+l=-n} k l t_k t_l + sum_{k-l=-n} k t_k d_l + 1/2 sum_{k+l=n} d_k d_l, k, l >= 1, indices <= T.
inline FockOp build_L(int n, int T) {
    if (T < 1) fail(ErrorKind::InvalidArgument, "cutoff must be positive");
    if (std::abs(n) > 2 * T)
        fail(ErrorKind::IndexCutoff, "L_" + std::to_string(n) + " is empty below cutoff " + std::to_string(T));
    FockOp op(T, std::abs(n));
    const Rational half(1, 2);
    for (int k = 1; k <= T; ++k)
        for (int l = 1; l <= T; ++l) {
            if (k + l == -n) op = op + FockOp::monomial(T, half * k * l, {k, l}, {});
            if (k - l == -n) op = op + FockOp::monomial(T, Rational(k), {k}, {l});
            if (k + l == n) op = op + FockOp::monomial(T, half, {}, {k, l});
        }
    op.set_shift(std::abs(n));
    return op;
}

/// J_n = t_n for n > 0 and -n d_{-n} for n < 0.
inline FockOp build_J(int n, int T) {
    if (n == 0) fail(ErrorKind::J0Undefined, "J_0 is not defined");
    if (std::abs(n) > T)
        fail(ErrorKind::IndexCutoff, "J_" + std::to_string(n) + " needs cutoff >= " + std::to_string(std::abs(n)));
    return n > 0 ? FockOp::monomial(T, Rational(1), {n}, {}) : FockOp::monomial(T, Rational(-n), {}, {-n});
}

/// All monomials of total degree <= d in t_1..t_G, padded to cutoff T.
inline std::vector<MultiIndex> guarded_monomials(int T, int d, int G) {
    std::vector<MultiIndex> out;
    MultiIndex e(static_cast<std::size_t>(T));
    auto rec = [&](auto&& self, int k, int left) -> void {
        if (k > G) {
            out.push_back(e);
            return;
        }
        for (int p = 0; p <= left; ++p) {
            e[static_cast<std::size_t>(k - 1)] = p;
            self(self, k + 1, left - p);
        }
        e[static_cast<std::size_t>(k - 1)] = 0;
    };
    rec(rec, 1, d);
    return out;
}

/// a and b agree on every guarded monomial; G plus the larger shift must fit below T.
inline bool guarded_equal(const FockOp& a, const FockOp& b, int d, int G) {
    if (a.cutoff() != b.cutoff()) fail(ErrorKind::InvalidArgument, "cutoff mismatch between operators");
    const int T = a.cutoff();
    if (G < 1 || d < 0) fail(ErrorKind::InvalidArgument, "guard and degree must be positive");
    const int need = G + std::max(a.shift(), b.shift());
    if (need > T)
        fail(ErrorKind::GuardTooLarge, "guard " + std::to_string(G) + " plus shift " +
                                           std::to_string(need - G) + " exceeds cutoff " + std::to_string(T));
    for (const auto& m : guarded_monomials(T, d, G)) {
        const FockPoly p = FockPoly::monomial(T, m);
        if (!(a.apply(p) == b.apply(p))) return false;
    }
    return true;
}

/// L_{jn} + sum_i r_i J_{jn+i+1} for f = sum r_i z^i.
inline FockOp build_L_deformed(int j, const Series& f, int n_quiver, int T) {
    if (n_quiver < 1) fail(ErrorKind::InvalidArgument, "quiver degree must be positive");
    const Series fs = f.simplified_ram();
    if (!fs.is_exact() || fs.ram() != 1 || (!fs.is_zero() && fs.bottom() < 0))
        fail(ErrorKind::InvalidArgument, "deformation needs an exact polynomial f");
    FockOp op = build_L(j * n_quiver, T);
    for (const auto& [i, c] : fs.terms()) {
        if (!c.is_rational()) fail(ErrorKind::InvalidArgument, "deformation needs rational coefficients");
        const long idx = static_cast<long>(j) * n_quiver + i + 1;
        if (idx == 0) fail(ErrorKind::J0Undefined, "term z^" + std::to_string(i) + " needs J_0");
        op = op + c.to_rational() * build_J(static_cast<int>(idx), T);
    }
    op.set_shift(std::abs(j * n_quiver));
    return op;
}

/// L_{nk} = [L_{nk}, L_0] / (nk) on guarded monomials.
inline bool string_identity_check(int n_quiver, int k, int T, int d, int G) {
    if (n_quiver < 1 || k < 1) fail(ErrorKind::InvalidArgument, "quiver degree and k must be positive");
    const int m = n_quiver * k;
    const FockOp lhs = build_L(m, T);
    const FockOp rhs = make_rational(1, m) * fock_commutator(lhs, build_L(0, T));
    return guarded_equal(lhs, rhs, d, G);
}

/// [L_m, L_{-m}] - 2m L_0 restricted to terms that see guarded monomials.
struct CentralResidual {
    int m = 0;
    FockOp residual;
    Rational constant;
    bool scalar_on_guard = false;
};

inline CentralResidual central_residual(int m, int T, int d, int G) {
    if (G + 2 * std::abs(m) > T)
        fail(ErrorKind::GuardTooLarge, "central check needs guard + 2|m| <= cutoff");
    const FockOp lm = build_L(m, T), ln = build_L(-m, T);
    const FockOp diff = fock_commutator(lm, ln) - Rational(2 * m) * build_L(0, T);
    CentralResidual out{m, FockOp(T), Rational(0), true};
    for (const auto& [key, c] : diff.terms()) {
        bool visible = true;
        for (int k = G + 1; k <= T; ++k) visible = visible && key.second[static_cast<std::size_t>(k - 1)] == 0;
        if (visible) out.residual.add(key, c);
    }
    const auto it = out.residual.terms().find({MultiIndex(static_cast<std::size_t>(T)), MultiIndex(static_cast<std::size_t>(T))});
    if (it != out.residual.terms().end()) out.constant = it->second;
    const FockOp scalar = FockOp::constant(T, out.constant);
    for (const auto& mono : guarded_monomials(T, d, G)) {
        const FockPoly p = FockPoly::monomial(T, mono);
        out.scalar_on_guard = out.scalar_on_guard && diff.apply(p) == scalar.apply(p);
    }
    return out;
}

}  // namespace sato
