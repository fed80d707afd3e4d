// Estimators and goodness-of-fit machinery for ensemble verdicts.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lrrw {

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_paths = 0;
};

/// Sample mean with its standard error (compensated accumulation).
McEstimate mc_mean(std::span<const double> sample);

/// Unbiased sample variance.
double sample_variance(std::span<const double> sample);

/// Standard error of the sample variance, sqrt((m4 - var^2)/n), without a
/// normality assumption.
double variance_stderr(std::span<const double> sample);

double normal_cdf(double x, double mean = 0.0, double variance = 1.0);

/// Survival function of the asymptotic Kolmogorov distribution,
/// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), truncated at 1e-10.
double kolmogorov_sf(double lambda);

/// Regularized upper incomplete gamma Q(a, x); series/continued-fraction split.
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, int df);

// -----------------------------------------------------------------------------
// One-sample Kolmogorov-Smirnov against a Gaussian reference
// -----------------------------------------------------------------------------

struct GofResult {
    double statistic = 0.0;  // KS distance
    double p_value = 0.0;
    std::int64_t sample_size = 0;
    double ref_mean = 0.0;
    double ref_variance = 0.0;
    double level = 0.01;
    bool reject = false;
    bool testable = true;
    std::string note;
};

/// KS distance of the sample against N(mean, variance), p-value from the
/// asymptotic Kolmogorov distribution at lambda = sqrt(n) D. Requires at
/// least 50 points and a positive reference variance.
GofResult ks_test(std::vector<double> sample, double mean, double variance, double level = 0.01);

// -----------------------------------------------------------------------------
// Chi-square goodness of fit with cell pooling
// -----------------------------------------------------------------------------

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 0.0;
    std::int64_t pooled_cells = 0;
};

/// Pearson chi-square of observed counts against expected probabilities.
/// Cells with expected count below min_expected are pooled into one.
ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed,
                               std::span<const double> expected_prob, double min_expected = 5.0);

/// Two-sample chi-square homogeneity test over matched categories, pooling
/// cells whose combined expectation falls below min_expected.
ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> counts_a,
                                      std::span<const std::int64_t> counts_b,
                                      double min_expected = 5.0);

}  // namespace lrrw
