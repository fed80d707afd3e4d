// One verification operation per limit theorem: estimators, envelope and
// trend criteria, and Gaussian goodness of fit. Every target constant is
// recomputed from DerivedConstants/SuperdiffusiveConstants at call time.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrrw/model.hpp"
#include "lrrw/simulate.hpp"
#include "lrrw/stats.hpp"

namespace lrrw {

struct Metric {
    std::string name;
    double observed = 0.0;
    double target = 0.0;
    double band = 0.0;  // half-width of the acceptance band, 0 if qualitative
    bool pass = false;
};

struct TheoremVerdict {
    std::string id;
    Regime regime = Regime::Diffusive;
    bool pass = false;
    bool qualitative = false;  // trend-based criterion, not a sharp tolerance
    std::vector<Metric> metrics;
    std::string note;
};

// ---------------------------------------------------------------------------
// Strong laws
// ---------------------------------------------------------------------------

/// Ensemble mean of S_n/n at the final checkpoint against mu = omega/(1-alpha)
/// within 3 standard errors. Convergence-rate statistics
/// (S_n/n - mu)^2 n/log n (diffusive) or n/(log n log log n) (critical) are
/// reported as per-checkpoint medians with a qualitative boundedness flag.
TheoremVerdict verify_lln(const Ensemble& ens);

// ---------------------------------------------------------------------------
// Central limit theorems (diffusive and critical only)
// ---------------------------------------------------------------------------

struct CltVerdict {
    GofResult gof;
    Metric variance;
    bool pass = false;
    bool testable = true;
    std::string note;
};

/// KS test of the regime CLT statistic at the final checkpoint against
/// N(0, clt_variance), plus a 4-standard-error comparison of the sample
/// variance. Rejects superdiffusive ensembles.
CltVerdict verify_clt(const Ensemble& ens, double level = 0.01);

/// Entrywise comparison of the empirical covariance of the time-grid
/// statistics against the limit kernel:
///   diffusive  E[W_s W_t] = sigma^2/((1-2 alpha) t) (t/s)^alpha,  s <= t
///   critical   clt_variance * min(s, t)
/// The ensemble must hold checkpoints at floor(n t) (diffusive) or
/// floor(n^t) (critical) for every grid point.
TheoremVerdict verify_fclt_covariance(const Ensemble& ens, const std::vector<double>& time_grid);

// ---------------------------------------------------------------------------
// Trend-based almost-sure limits
// ---------------------------------------------------------------------------

/// Even-moment sums: the cross-path median of the normalized accumulator is
/// compared to clt_variance^r (2r-1)!! at each checkpoint horizon. Passes
/// when the relative error of the median is below 0.35 at the final horizon
/// and has decreased from the first horizon (or stayed below threshold
/// throughout).
TheoremVerdict verify_qsl_moments(const Ensemble& ens);

/// Log-weighted empirical CDFs against the Gaussian reference: per grid
/// point, the cross-path median absolute deviation must shrink from the
/// first to the final checkpoint horizon.
TheoremVerdict verify_asclt(const Ensemble& ens);

/// Iterated-logarithm envelope: per-path sup of the normalized deviation
/// against the limit constant c. Passes when the cross-path median of sup/c
/// lies in [0.4, 1.3] and fewer than 5% of paths exceed 1.6. For
/// superdiffusive ensembles the fluctuation statistic
/// |sqrt(k^{2 alpha - 1})(l_k - l_proxy)| / sqrt(2 log log k) over the
/// stored window is used, with the proxy-substitution bias budget enforced.
TheoremVerdict verify_lil(const Ensemble& ens);

// ---------------------------------------------------------------------------
// Superdiffusive limit variable
// ---------------------------------------------------------------------------

struct LMomentsVerdict {
    McEstimate mean;
    McEstimate second_moment;
    double mean_band = 0.0;           // 4 stderr + fluctuation-scale allowance
    double second_band = 0.0;
    bool mean_pass = false;
    bool second_pass = false;         // band contains the E[M^2]-route value
    bool printed_value_contained = false;  // whether the printed variant also fits
    double target_mean = 0.0;
    double target_second = 0.0;
    double target_second_printed = 0.0;
    bool pass = false;
    std::string note;
};

/// Per-path proxy L ~ horizon^{1-alpha}(S/horizon - mu); first two moments
/// against the closed forms. The second-moment band is checked against the
/// E[M^2]-route value; containment of the printed variant is recorded.
LMomentsVerdict estimate_L(const Ensemble& ens, const SuperdiffusiveConstants& sc);

struct FluctuationVerdict {
    GofResult gof;
    Metric variance;
    double bias_bound = 0.0;  // (n/N)^{alpha - 1/2}, enforced <= 0.1
    double r_n2 = 0.0;        // sigma^2 n a_n^2/(2 alpha - 1) at the small horizon
    bool pass = false;
    bool testable = true;
    std::string note;
};

/// Gaussian fluctuations around the limit variable: per path,
/// sqrt(n^{2 alpha - 1})(l_n - l_proxy) against N(0, sigma^2/(2 alpha - 1)),
/// where l_n is read from the checkpoint at n_small. Rejects configurations
/// whose proxy bias bound exceeds 0.1.
FluctuationVerdict verify_superdiffusive_fluctuations(const Ensemble& ens, std::int64_t n_small,
                                                      double level = 0.01);

// ---------------------------------------------------------------------------
// Helpers shared by verification code and tests
// ---------------------------------------------------------------------------

const CheckpointRecord& checkpoint_at(const PathObservation& path, std::int64_t n);
double double_factorial_odd(int r);  // (2r-1)!! for r >= 1

}  // namespace lrrw
