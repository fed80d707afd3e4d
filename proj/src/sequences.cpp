#include "lrrw/sequences.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lrrw {

double log_gamma_ratio(double x, double a) {
    if (a == 0.0) return 0.0;
    if (x < 1000.0) return std::lgamma(x + a) - std::lgamma(x);
    const double ix = 1.0 / x;
    const double c1 = a * (a - 1.0) / 2.0;
    const double c2 = -a / 12.0 + a * a / 4.0 - a * a * a / 6.0;
    const double c3 = a * a * (1.0 - a) * (1.0 - a) / 12.0;
    return a * std::log(x) + ix * (c1 + ix * (c2 + ix * c3));
}

double gamma_ratio_np1(double n, double a) {
    // Gamma(n+a)/Gamma(n+1) = Gamma((n+1) + (a-1))/Gamma(n+1); the shifted
    // exponent a-1 lies in [-1, 1] for a in [0, 2], where the series in
    // log_gamma_ratio stays exact at both endpoints.
    return std::exp(log_gamma_ratio(n + 1.0, a - 1.0));
}

SequenceTables build_tables(double alpha, double gamma, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("build_tables: horizon >= 1 required");
    if (!(std::abs(alpha) < 1.0)) throw std::invalid_argument("build_tables: |alpha| < 1 required");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("build_tables: gamma in [0,1) required");

    SequenceTables t;
    t.alpha = alpha;
    t.gamma = gamma;
    t.horizon = horizon;
    const std::size_t n = static_cast<std::size_t>(horizon) + 1;
    t.a.assign(n, 0.0);
    t.A.assign(n, 0.0);
    t.v.assign(n, 0.0);
    t.f.assign(n, 0.0);
    t.b.assign(n, 0.0);
    t.B.assign(n, 0.0);

    t.a[1] = 1.0;
    t.b[1] = 1.0;
    t.A[1] = 1.0;
    t.B[1] = 1.0;
    t.v[1] = 1.0;
    t.f[1] = 1.0;
    for (std::int64_t k = 1; k < horizon; ++k) {
        const double kd = static_cast<double>(k);
        t.a[k + 1] = t.a[k] * (kd / (kd + alpha));
        t.b[k + 1] = t.b[k] * (kd / (kd + gamma));
        t.A[k + 1] = t.A[k] + t.a[k + 1];
        t.B[k + 1] = t.B[k] + t.b[k + 1];
        t.v[k + 1] = t.v[k] + t.a[k + 1] * t.a[k + 1];
        t.f[k + 1] = t.a[k + 1] * t.a[k + 1] / t.v[k + 1];
    }
    return t;
}

double a_ratio_identity(std::int64_t n, double alpha) {
    if (n < 1) throw std::invalid_argument("a_ratio_identity: n >= 1 required");
    if (alpha == 0.0 || n == 1) return 1.0;
    // Gamma(n+alpha)/(Gamma(n+1) Gamma(alpha))
    const double lg = log_gamma_ratio(static_cast<double>(n + 1), alpha - 1.0);
    const double ratio = std::exp(lg - std::lgamma(alpha));
    return (ratio - 1.0) / (alpha - 1.0);
}

VLimit v_limit(double alpha) {
    if (!(std::abs(alpha) < 1.0)) throw std::invalid_argument("v_limit: |alpha| < 1 required");
    if (std::abs(alpha - 0.5) <= 1e-15) return {VLimitKind::Log, std::numbers::pi / 4.0};
    if (alpha < 0.5) {
        const double g = std::tgamma(1.0 + alpha);
        return {VLimitKind::PowerLaw, g * g / (1.0 - 2.0 * alpha)};
    }
    return {VLimitKind::Constant, hyp3f2_unit(alpha)};
}

double a_squared_tail(double alpha, std::int64_t K) {
    // a_k^2 = Gamma(1+alpha)^2 k^{-2a} exp(a(1-a)/k + d2/k^2 + O(k^-3)) with
    // d2 = a(1-a)(1-2a)/6; expand the exponential to second order and close
    // the sum with Euler-Maclaurin at X = K+1:
    //   sum_{k>K} f(k) = int_X^inf f + f(X)/2 - f'(X)/12 + O(f'''(X)).
    const double a = alpha;
    const double g = std::tgamma(1.0 + a);
    const double c1 = a * (1.0 - a);
    const double c2 = a * (1.0 - a) * (1.0 - 2.0 * a) / 6.0 + c1 * c1 / 2.0;
    const double X = static_cast<double>(K) + 1.0;
    const double x2a = std::pow(X, -2.0 * a);
    const double integral = x2a * (X / (2.0 * a - 1.0) + c1 / (2.0 * a) + c2 / ((2.0 * a + 1.0) * X));
    const double fX = x2a * (1.0 + c1 / X + c2 / (X * X));
    const double dfX = x2a / X * (-2.0 * a - (2.0 * a + 1.0) * c1 / X);
    return g * g * (integral + 0.5 * fX - dfX / 12.0);
}

double hyp3f2_unit(double alpha) {
    if (!(alpha > 0.5))
        throw std::invalid_argument("hyp3f2_unit: requires alpha > 1/2 (series diverges or is marginal at "
                                    + std::to_string(alpha) + ")");
    // Neumaier-compensated partial sum of t_k = a_{k+1}^2, k = 0..K-1.
    double sum = 0.0, comp = 0.0, term = 1.0;
    std::int64_t k = 0;
    for (; k < kHyp3f2Terms; ++k) {
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        // integral-comparison bound on the remainder; exits early for large alpha
        if (term * static_cast<double>(k + 1) / (2.0 * alpha - 1.0) < 1e-12 * sum) break;
        const double kd = static_cast<double>(k + 1);
        const double f = kd / (kd + alpha);
        term *= f * f;
    }
    sum += comp;
    if (k == kHyp3f2Terms) sum += a_squared_tail(alpha, kHyp3f2Terms);
    return sum;
}

}  // namespace lrrw
