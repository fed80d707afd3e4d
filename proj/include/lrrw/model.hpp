// Lazy reinforced random walk: model parameters, derived constants and the
// one-step transition kernel on the sufficient statistic (S_n, Z_n).
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lrrw {

enum class Regime { Diffusive, Critical, Superdiffusive };

std::string to_string(Regime r);

/// Absolute tolerance on |alpha - 1/2| below which the walk is classified
/// as critical. Users wanting exact criticality should parameterize with
/// theta*(p-q) = 1/2 exactly representable in binary.
inline constexpr double kCriticalTol = 1e-12;

/// Tolerance for the probability-sum invariant p + q + r = 1.
inline constexpr double kParamSumTol = 1e-12;

// -----------------------------------------------------------------------------
// Parameters
// -----------------------------------------------------------------------------

/// Primitive probabilities of the walk. A step is +1 w.p. p, -1 w.p. q and
/// 0 w.p. r; theta is the probability that the step consults the past.
struct ModelParams {
    double p = 0.0;
    double q = 0.0;
    double r = 1.0;
    double theta = 0.0;

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;

    /// Rescales (p, q, r) by their sum. Never applied implicitly.
    [[nodiscard]] ModelParams renormalized() const;
};

// -----------------------------------------------------------------------------
// Derived scalar constants
// -----------------------------------------------------------------------------

/// Constants that drive every limit theorem:
///   alpha = theta (p - q)        reinforcement drift
///   omega = (1 - theta)(p - q)   lapse drift
///   beta  = p - q
///   tau   = (1 - theta)(p + q)
///   gamma = theta (p + q)
///   sigma2 = tau/(1-gamma) - (omega/(1-alpha))^2
///   mu    = omega/(1-alpha)      almost-sure limit of S_n/n
///   ell   = Gamma(1+alpha)^2/(1-2 alpha)   (only for alpha < 1/2)
struct DerivedConstants {
    double alpha = 0.0;
    double omega = 0.0;
    double beta = 0.0;
    double tau = 0.0;
    double gamma = 0.0;
    double sigma2 = 0.0;
    double mu = 0.0;
    Regime regime = Regime::Diffusive;
    std::optional<double> ell;

    /// Variance of the limiting Gaussian of the regime CLT statistic:
    /// sigma2/(1-2 alpha) in the diffusive regime, tau/(1-gamma) - 4 omega^2
    /// at criticality. The two expressions coincide at alpha = 1/2.
    double clt_variance() const;

    /// LIL envelope constant for the regime statistic.
    double lil_constant() const;
};

Regime classify_regime(double alpha);

DerivedConstants derive_constants(const ModelParams& params);

// -----------------------------------------------------------------------------
// Superdiffusive limit constants
// -----------------------------------------------------------------------------

/// Moments of the almost-sure limits M = lim M_n and
/// L = (M - omega*alpha/(1-alpha)) / Gamma(alpha+1). Only defined for
/// alpha > 1/2.
///
/// second_moment_L follows the defining relation through E[M^2]; the
/// source derivation's final printed simplification disagrees with it
/// (it is strictly positive even for the deterministic p=1 walk where
/// L = 0 a.s.) and is kept only as second_moment_L_printed for side by
/// side reporting.
struct SuperdiffusiveConstants {
    double nabla = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;   // gamma*r/(1-gamma); see closed_form_EM2
    double mean_L = 0.0;
    double second_moment_L = 0.0;
    double mean_M = 0.0;             // beta - omega
    double second_moment_M = 0.0;
    double second_moment_L_printed = 0.0;
};

SuperdiffusiveConstants superdiffusive_constants(const ModelParams& params);

// -----------------------------------------------------------------------------
// Walk state and kernels
// -----------------------------------------------------------------------------

/// Sufficient statistic of the walk after n steps: position s = S_n and
/// nonzero-step count z = Z_n. Invariants: |s| <= z <= n, s == z (mod 2),
/// and s = z = 0 at n = 0.
struct WalkState {
    std::int64_t n = 0;
    std::int64_t s = 0;
    std::int64_t z = 0;

    bool valid() const;
    void validate() const;
};

/// One-step law of the next increment given the current state.
struct StepKernel {
    double p_plus = 0.0;
    double p_minus = 0.0;
    double p_zero = 0.0;
};

/// Law of the first step: (p, q, r).
StepKernel initial_kernel(const ModelParams& params);

/// Marginal kernel on (S_n, Z_n) for n >= 1. With N+ = (z+s)/2,
/// N- = (z-s)/2, N0 = n-z:
///   p_plus  = (1-theta) p + theta (p N+ + q N-)/n
///   p_minus = (1-theta) q + theta (q N+ + p N-)/n
///   p_zero  = r + gamma N0/n
StepKernel transition_kernel(const ModelParams& params, const WalkState& state);

}  // namespace lrrw
