// Gamma-ratio sequences a_n, A_n, v_n, f_n, b_n, B_n and their limits.
#pragma once

#include <cstdint>
#include <vector>

namespace lrrw {

/// log(Gamma(x + a) / Gamma(x)) for x >= 1, a in [-1, 2].
///
/// For large x the naive lgamma difference loses up to ~1e-9 relative
/// accuracy to cancellation; beyond x = 1000 this switches to the Stirling
/// series a*log x + a(a-1)/(2x) + (-a/12 + a^2/4 - a^3/6)/x^2
/// + a^2(1-a)^2/(12 x^3), whose coefficients are exact at a = 1 and a = 2.
double log_gamma_ratio(double x, double a);

/// Gamma(n + a) / Gamma(n + 1).
double gamma_ratio_np1(double n, double a);

// -----------------------------------------------------------------------------
// Precomputed tables
// -----------------------------------------------------------------------------

/// Tables of the sequences driving the martingale analysis, for n = 1..horizon:
///   a_n: product of (1 + alpha/k)^{-1}, equal to Gamma(n)Gamma(1+alpha)/Gamma(n+alpha)
///   A_n: prefix sums of a
///   v_n: prefix sums of a^2
///   f_n: a_n^2 / v_n (explosion coefficient)
///   b_n, B_n: the same construction with exponent gamma (Z-sequence)
/// Entries are stored at index n; index 0 holds the empty sum/product seed.
struct SequenceTables {
    double alpha = 0.0;
    double gamma = 0.0;
    std::int64_t horizon = 0;
    std::vector<double> a, A, v, f, b, B;

    double lambda(std::int64_t n) const { return 1.0 + gamma / static_cast<double>(n); }
    double gamma_n(std::int64_t n) const { return 1.0 + alpha / static_cast<double>(n); }
};

/// Builds the tables by multiplicative recursion a_{k+1} = a_k k/(k+alpha)
/// (never by direct gamma quotients). Prefix sums accumulate in order 1..N.
SequenceTables build_tables(double alpha, double gamma, std::int64_t horizon);

// -----------------------------------------------------------------------------
// Closed forms and limits
// -----------------------------------------------------------------------------

/// Closed form for A_n / (n a_n):
///   (Gamma(n+alpha)/(Gamma(n+1)Gamma(alpha)) - 1) / (alpha - 1),
/// evaluated via log-gamma; returns 1 for alpha = 0 or n = 1.
double a_ratio_identity(std::int64_t n, double alpha);

enum class VLimitKind { PowerLaw, Log, Constant };

struct VLimit {
    VLimitKind kind;
    double value;
};

/// Limit of the quadratic-variation scale v_n:
///   alpha < 1/2:  v_n / n^{1-2 alpha} -> Gamma(1+alpha)^2/(1-2 alpha)
///   alpha = 1/2:  v_n / log n        -> pi/4
///   alpha > 1/2:  v_n                -> 3F2(1,1,1; alpha+1, alpha+1; 1)
VLimit v_limit(double alpha);

/// The generalized hypergeometric value 3F2(1,1,1; alpha+1, alpha+1; 1)
/// = sum_k (Gamma(alpha+1) k! / Gamma(k+alpha+1))^2, for alpha > 1/2.
///
/// Terms follow the recursion t_{k+1} = t_k ((k+1)/(k+1+alpha))^2. The raw
/// integral-comparison cutoff t_k k/(2 alpha - 1) < 1e-12 is unreachable by
/// summation alone for alpha near 1/2 (it needs ~10^12 terms even at
/// alpha = 1), so the series is truncated after 10^6 terms and closed with
/// an Euler-Maclaurin tail whose own error is far below 1e-12.
double hyp3f2_unit(double alpha);

/// Truncation point used by hyp3f2_unit.
inline constexpr std::int64_t kHyp3f2Terms = 1'000'000;

/// Euler-Maclaurin estimate of sum_{k > K} a_k^2 for the a-sequence with
/// exponent alpha > 1/2. Shared by hyp3f2_unit and the direct-summation
/// cross-checks; relative error O(K^-3) on the tail.
double a_squared_tail(double alpha, std::int64_t K);

}  // namespace lrrw
