#include "lrrw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrrw {
namespace {

double compensated_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace

McEstimate mc_mean(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("mc_mean: empty sample");
    const double n = static_cast<double>(sample.size());
    const double mean = compensated_sum(sample) / n;
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    const double var = sample.size() > 1 ? ss / (n - 1.0) : 0.0;
    return McEstimate{mean, std::sqrt(var / n), static_cast<std::int64_t>(sample.size())};
}

double sample_variance(std::span<const double> sample) {
    if (sample.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
    const double n = static_cast<double>(sample.size());
    const double mean = compensated_sum(sample) / n;
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    return ss / (n - 1.0);
}

double variance_stderr(std::span<const double> sample) {
    const double n = static_cast<double>(sample.size());
    const double mean = compensated_sum(sample) / n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : sample) {
        const double d2 = (x - mean) * (x - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

double normal_cdf(double x, double mean, double variance) {
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j < 200; ++j) {
        const double term = 2.0 * std::exp(-2.0 * lambda * lambda * j * j);
        sum += sign * term;
        if (term < 1e-10) break;
        sign = -sign;
    }
    return std::clamp(sum, 0.0, 1.0);
}

namespace {

// Regularized lower incomplete gamma by series, upper by Lentz continued
// fraction; standard numeric split at x = a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: invalid arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi_square_sf: df >= 1 required");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

GofResult ks_test(std::vector<double> sample, double mean, double variance, double level) {
    GofResult res;
    res.sample_size = static_cast<std::int64_t>(sample.size());
    res.ref_mean = mean;
    res.ref_variance = variance;
    res.level = level;
    if (sample.size() < 50) {
        res.testable = false;
        res.note = "sample too small for the asymptotic KS distribution (need >= 50)";
        throw std::invalid_argument("ks_test: " + res.note);
    }
    if (!(variance > 0.0)) {
        res.testable = false;
        res.note = "zero reference variance; sample flagged as non-testable";
        throw std::invalid_argument("ks_test: " + res.note);
    }
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = normal_cdf(sample[i], mean, variance);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    res.statistic = d;
    res.p_value = kolmogorov_sf(std::sqrt(n) * d);
    res.reject = res.p_value <= level;
    return res;
}

namespace {

ChiSquareResult chi_square_core(std::span<const double> observed, std::span<const double> expected,
                                double min_expected, int extra_df_loss) {
    // pool low-expectation cells into one
    double pooled_obs = 0.0, pooled_exp = 0.0;
    std::int64_t pooled = 0;
    double stat = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < min_expected) {
            pooled_obs += observed[i];
            pooled_exp += expected[i];
            ++pooled;
            continue;
        }
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
        ++cells;
    }
    if (pooled_exp > 0.0) {
        const double diff = pooled_obs - pooled_exp;
        stat += diff * diff / pooled_exp;
        ++cells;
    }
    ChiSquareResult res;
    res.statistic = stat;
    res.df = std::max(1, cells - 1 - extra_df_loss);
    res.pooled_cells = pooled;
    res.p_value = chi_square_sf(stat, res.df);
    return res;
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed,
                               std::span<const double> expected_prob, double min_expected) {
    if (observed.size() != expected_prob.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    double total = 0.0;
    for (std::int64_t c : observed) total += static_cast<double>(c);
    std::vector<double> obs(observed.size()), exp(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        obs[i] = static_cast<double>(observed[i]);
        exp[i] = expected_prob[i] * total;
    }
    return chi_square_core(obs, exp, min_expected, 0);
}

ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> counts_a,
                                      std::span<const std::int64_t> counts_b,
                                      double min_expected) {
    if (counts_a.size() != counts_b.size() || counts_a.empty())
        throw std::invalid_argument("chi_square_two_sample: size mismatch");
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        na += static_cast<double>(counts_a[i]);
        nb += static_cast<double>(counts_b[i]);
    }
    // statistic sum_i (a_i/na - b_i/nb)^2 / (t_i (1/na + 1/nb)) with t_i the
    // pooled proportion; equivalent to the homogeneity chi-square
    double stat = 0.0;
    int cells = 0;
    std::int64_t pooled = 0;
    double pa = 0.0, pb = 0.0;
    auto add_cell = [&](double a, double b) {
        const double ta = (a + b) * na / (na + nb);
        const double tb = (a + b) * nb / (na + nb);
        if (ta > 0.0) stat += (a - ta) * (a - ta) / ta;
        if (tb > 0.0) stat += (b - tb) * (b - tb) / tb;
        ++cells;
    };
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        const double a = static_cast<double>(counts_a[i]);
        const double b = static_cast<double>(counts_b[i]);
        const double expected_min = (a + b) * std::min(na, nb) / (na + nb);
        if (expected_min < min_expected) {
            pa += a;
            pb += b;
            ++pooled;
            continue;
        }
        add_cell(a, b);
    }
    if (pa + pb > 0.0) add_cell(pa, pb);
    ChiSquareResult res;
    res.statistic = stat;
    res.df = std::max(1, cells - 1);
    res.pooled_cells = pooled;
    res.p_value = chi_square_sf(stat, res.df);
    return res;
}

}  // namespace lrrw
