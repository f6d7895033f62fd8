#ifndef CAPDDP_KERNEL_HPP
#define CAPDDP_KERNEL_HPP

#include <functional>
#include <span>

#include "capddp/random.hpp"

namespace capddp {

/// Normal kernel parameters: location and precision.
struct Atom {
    double mu = 0.0;
    double lambda = 1.0;

    bool operator==(const Atom&) const = default;
};

/// P0 = N(mu | 0, 1/s) x Ga(lambda | eps, eps), independent components.
struct PriorP0 {
    double s = 0.001;
    double eps = 0.001;
};

// Floor applied to sampled precisions.
inline constexpr double kMinPrecision = 1e-12;

double kernel_density(double x, const Atom& theta);
double log_kernel_density(double x, const Atom& theta);

Atom sample_prior_atom(const PriorP0& prior, Rng& rng);

/// One mu -> lambda Gibbs scan of the conjugate-by-component posterior
/// p0(theta) * prod K(x | theta). An empty `assigned` returns a prior draw.
Atom conditional_update_atom(const Atom& theta, std::span<const double> assigned,
                             const PriorP0& prior, Rng& rng);

using AtomSampler = std::function<Atom(Rng&)>;

struct AlphaBetaEstimate {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_se = 0.0;
    double beta_se = 0.0;
};

/// Monte Carlo estimates of
///   alpha = E int K(x|theta)^2 dx           = E sqrt(lambda) / (2 sqrt(pi))
///   beta  = E int K(x|theta_j) K(x|theta_k) = E N(mu_j - mu_k | 0, 1/lambda_j + 1/lambda_k)
/// over independent atom draws. n_mc must be at least 1000.
AlphaBetaEstimate alpha_beta_mc(const AtomSampler& draw, std::size_t n_mc, Rng& rng);
AlphaBetaEstimate alpha_beta_mc(const PriorP0& prior, std::size_t n_mc, Rng& rng);

}  // namespace capddp

#endif  // CAPDDP_KERNEL_HPP
