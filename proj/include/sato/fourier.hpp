#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "sato/connections.hpp"
#include "sato/errors.hpp"
#include "sato/series.hpp"

namespace sato {

/// D_z + zeta_n^i f(zeta_n^i z) with f an exact polynomial of degree r >= 1.
struct LftInput {
    Series f;
    int twist = 0;
    int n = 1;

    long degree() const {
        const Series fs = f.simplified_ram();
        if (!fs.is_exact() || fs.ram() != 1 || fs.is_zero() || fs.bottom() < 0 || fs.top() < 1)
            fail(ErrorKind::NotInvertible, "Fourier input must be an exact polynomial of degree >= 1: " + f.str());
        return fs.top();
    }
    void validate() const {
        if (n < 1) fail(ErrorKind::InvalidArgument, "n must be positive");
        if (twist < 0 || twist >= n) fail(ErrorKind::InvalidArgument, "twist outside 0..n-1");
        (void)degree();
    }
};

struct LftResult {
    int r = 1;
    int working_order = 0;
    Series finv;        // f^{-1} at infinity, in u = z^{1/r}
    Series w;           // zeta_n^i f^{-1}(zeta_n^i z)
    Series lambda_hat;  // -(1+r)/(2r) z^-1 + w
    Series g, h;        // h = -z lambda_hat, g = (r+1)/(2r) - h
    RamifiedClass out;
};

inline Rational lft_shift(long r) { return make_rational(r + 1, 2 * r); }

/// Local Fourier transform F^(inf,inf) of one twisted rank-one class.
inline LftResult lft_infty_infty(const LftInput& in, int order) {
    in.validate();
    if (order < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    LftResult res;
    const long r = in.degree();
    res.r = static_cast<int>(r);
    res.working_order = std::max(order, static_cast<int>(2 * r + 2));
    res.finv = compositional_inverse_at_infinity(in.f, res.working_order);
    const int L = common_order(in.n * res.r, common_order(res.finv.field_order(), in.f.field_order()));
    res.finv = res.finv.lift(L);
    const CycScalar root = zeta_pow(in.n * res.r, in.twist).lift(L);
    res.w = zeta_pow(in.n, in.twist).lift(L) * scale_substitute_root(res.finv, root);
    const Rational shift = lft_shift(r);
    res.lambda_hat = res.w + Series::monomial(CycScalar(-shift), -1);
    res.h = -(Series::z() * res.lambda_hat);
    res.g = Series(CycScalar(shift)) - res.h;
    res.out = ramified_class(res.lambda_hat);
    return res;
}

/// Re-derives h from g along the substitution chain and compares with the
/// transform's output. The chain uses F(w) = zeta^{-i} f(zeta^{-i} w), whose
/// inverse at infinity is the w of lft_infty_infty. shift replaces (r+1)/(2r)
/// on the chain side only.
inline bool gh_consistency(const LftInput& in, int order = 10, std::optional<Rational> shift = std::nullopt) {
    const LftResult res = lft_infty_infty(in, order);
    const int L = res.lambda_hat.field_order();
    const CycScalar inv = zeta_pow(in.n, -in.twist).lift(L);
    const Series F = inv * scale_substitute(in.f.lift(L), inv);
    const Series W = res.lambda_hat + Series::monomial(CycScalar(lft_shift(res.r)), -1);
    const Series FW = compose(F, W);
    if (!(FW - Series::z()).is_zero()) return false;
    const Series g_chain = FW * W;
    const Series h_chain = Series(CycScalar(shift.value_or(lft_shift(res.r)))) - g_chain;
    const Series diff = h_chain - res.h;
    if (diff.trunc() && *diff.trunc() >= 0) return false;
    return diff.is_zero();
}

/// Transform of the whole KS connection of the degree-n string quiver with
/// potential f, one class per twist.
inline std::vector<RamifiedClass> lft_of_ks(const Series& f, int n, int order) {
    std::vector<RamifiedClass> out;
    for (int i = 0; i < n; ++i) out.push_back(lft_infty_infty({f, i, n}, order).out);
    return out;
}

}  // namespace sato
