#include "lrrw/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrrw {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Diffusive: return "diffusive";
        case Regime::Critical: return "critical";
        case Regime::Superdiffusive: return "superdiffusive";
    }
    return "?";
}

void ModelParams::validate() const {
    const auto fail = [](const std::string& msg) { throw std::invalid_argument("ModelParams: " + msg); };
    if (!(p >= 0.0)) fail("p >= 0 violated (p = " + std::to_string(p) + ")");
    if (!(q >= 0.0)) fail("q >= 0 violated (q = " + std::to_string(q) + ")");
    if (!(r >= 0.0)) fail("r >= 0 violated (r = " + std::to_string(r) + ")");
    const double sum = p + q + r;
    if (std::abs(sum - 1.0) > kParamSumTol) {
        std::ostringstream os;
        os << "p + q + r = 1 violated (sum = " << sum << ", tolerance " << kParamSumTol << ")";
        fail(os.str());
    }
    if (!(theta >= 0.0) || !(theta < 1.0))
        fail("theta in [0, 1) violated (theta = " + std::to_string(theta) + ")");
}

ModelParams ModelParams::renormalized() const {
    const double sum = p + q + r;
    if (!(sum > 0.0)) throw std::invalid_argument("ModelParams: cannot renormalize, p + q + r <= 0");
    return ModelParams{p / sum, q / sum, r / sum, theta};
}

Regime classify_regime(double alpha) {
    if (std::abs(alpha - 0.5) <= kCriticalTol) return Regime::Critical;
    return alpha < 0.5 ? Regime::Diffusive : Regime::Superdiffusive;
}

double DerivedConstants::clt_variance() const {
    if (regime == Regime::Critical) return tau / (1.0 - gamma) - 4.0 * omega * omega;
    return sigma2 / (1.0 - 2.0 * alpha);
}

double DerivedConstants::lil_constant() const { return std::sqrt(clt_variance()); }

DerivedConstants derive_constants(const ModelParams& params) {
    params.validate();
    DerivedConstants c;
    c.beta = params.p - params.q;
    c.alpha = params.theta * c.beta;
    c.omega = (1.0 - params.theta) * c.beta;
    c.tau = (1.0 - params.theta) * (params.p + params.q);
    c.gamma = params.theta * (params.p + params.q);
    c.mu = c.omega / (1.0 - c.alpha);
    c.sigma2 = c.tau / (1.0 - c.gamma) - c.mu * c.mu;
    c.regime = classify_regime(c.alpha);
    if (c.alpha < 0.5) c.ell = std::tgamma(1.0 + c.alpha) * std::tgamma(1.0 + c.alpha) / (1.0 - 2.0 * c.alpha);
    // sigma2 >= 0 for all valid parameters; anything below rounding noise is a bug.
    if (c.sigma2 < -1e-12) throw std::logic_error("derive_constants: sigma2 < 0");
    if (c.sigma2 < 0.0) c.sigma2 = 0.0;
    return c;
}

SuperdiffusiveConstants superdiffusive_constants(const ModelParams& params) {
    const DerivedConstants dc = derive_constants(params);
    const double a = dc.alpha, w = dc.omega, b = dc.beta, t = dc.tau, g = dc.gamma;
    if (!(a > 0.5))
        throw std::invalid_argument("superdiffusive_constants: requires alpha > 1/2 (alpha = " + std::to_string(a) + ")");

    SuperdiffusiveConstants sc;
    sc.t1 = 2.0 * w * (a * w - (1.0 - a) * b * params.theta) / (1.0 - a);
    // The source derivation prints t2 = gamma*r, but expanding its own h_k
    // identity gives gamma*r/(1-gamma); only the latter reproduces the exact
    // E[M_n^2] recursion (the printed value fails whenever r > 0).
    sc.t2 = g * params.r / (1.0 - g);
    sc.nabla = params.p + params.q + t / ((1.0 - g) * (2.0 * a - 1.0))
             - 2.0 * a * w * w / ((2.0 * a - 1.0) * (a - 1.0) * (a - 1.0))
             + 4.0 * (w * a * (b - 1.0) / ((a - 1.0) * (a - 1.0)))
             + g * sc.t2 / (2.0 * a - g);

    const double ga1 = std::tgamma(a + 1.0);
    const double g2a1 = std::tgamma(2.0 * a + 1.0);
    sc.mean_M = b - w;
    sc.second_moment_M = ga1 * ga1 * sc.nabla / g2a1
                       + a * a * w * (2.0 - b * (params.theta + 1.0)) / ((1.0 - a) * (1.0 - a));

    // Sanity gate: t1/(a-1) + 2 a w^2/(1-a)^2 - 2 w (b-w)/(1-a) vanishes
    // identically; it is what collapses the E[M_n^2] chain to its final form.
    const double identity = sc.t1 / (a - 1.0) + 2.0 * a * w * w / ((1.0 - a) * (1.0 - a))
                          - 2.0 * w * (b - w) / (1.0 - a);
    if (std::abs(identity) > 1e-12)
        throw std::logic_error("superdiffusive_constants: t1 identity violated");

    sc.mean_L = (b * (1.0 - a) - w) / (ga1 * (1.0 - a));
    const double shift = w * a / (1.0 - a);
    sc.second_moment_L =
        (sc.second_moment_M - 2.0 * shift * sc.mean_M + shift * shift) / (ga1 * ga1);
    const double inv = 1.0 / ((1.0 - a) * std::tgamma(a));
    sc.second_moment_L_printed = sc.nabla / g2a1 + 2.0 * w * inv * inv;

    if (sc.second_moment_L < sc.mean_L * sc.mean_L - 1e-12)
        throw std::logic_error("superdiffusive_constants: negative Var(L)");
    return sc;
}

bool WalkState::valid() const {
    if (n < 0 || z < 0) return false;
    if (std::abs(s) > z || z > n) return false;
    if (((s ^ z) & 1) != 0) return false;
    if (n == 0 && (s != 0 || z != 0)) return false;
    return true;
}

void WalkState::validate() const {
    if (!valid()) {
        std::ostringstream os;
        os << "WalkState invariant violated: n=" << n << " s=" << s << " z=" << z;
        throw std::invalid_argument(os.str());
    }
}

StepKernel initial_kernel(const ModelParams& params) {
    return StepKernel{params.p, params.q, params.r};
}

StepKernel transition_kernel(const ModelParams& params, const WalkState& state) {
    state.validate();
    if (state.n < 1)
        throw std::invalid_argument("transition_kernel: n >= 1 required; the first step uses initial_kernel");
    const double n = static_cast<double>(state.n);
    const double nplus = static_cast<double>(state.z + state.s) / 2.0;
    const double nminus = static_cast<double>(state.z - state.s) / 2.0;
    const double nzero = static_cast<double>(state.n - state.z);
    const double th = params.theta;
    StepKernel k;
    k.p_plus = (1.0 - th) * params.p + th * (params.p * nplus + params.q * nminus) / n;
    k.p_minus = (1.0 - th) * params.q + th * (params.q * nplus + params.p * nminus) / n;
    k.p_zero = params.r + th * (params.p + params.q) * nzero / n;
    return k;
}

}  // namespace lrrw
