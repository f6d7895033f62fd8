#include "capddp/kernel.hpp"

#include <cmath>
#include <numbers>

#include "capddp/error.hpp"

namespace capddp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double clamp_precision(double lambda) {
    return lambda < kMinPrecision ? kMinPrecision : lambda;
}

struct MeanAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double standard_error() const {
        const double nn = static_cast<double>(n);
        const double var = (sum_sq - sum * sum / nn) / (nn - 1.0);
        return std::sqrt(std::max(var, 0.0) / nn);
    }
};

}  // namespace

double log_kernel_density(double x, const Atom& theta) {
    const double d = x - theta.mu;
    return 0.5 * (std::log(theta.lambda) - kLogTwoPi) - 0.5 * theta.lambda * d * d;
}

double kernel_density(double x, const Atom& theta) {
    return std::exp(log_kernel_density(x, theta));
}

Atom sample_prior_atom(const PriorP0& prior, Rng& rng) {
    Atom a;
    a.mu = sample_normal(rng, 0.0, 1.0 / std::sqrt(prior.s));
    a.lambda = clamp_precision(sample_gamma(rng, prior.eps, prior.eps));
    return a;
}

Atom conditional_update_atom(const Atom& theta, std::span<const double> assigned,
                             const PriorP0& prior, Rng& rng) {
    if (assigned.empty()) return sample_prior_atom(prior, rng);

    double sum = 0.0;
    for (double x : assigned) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::InvalidArgument, "non-finite observation in atom update");
        }
        sum += x;
    }
    const double n = static_cast<double>(assigned.size());

    Atom out;
    const double post_prec = prior.s + theta.lambda * n;
    out.mu = sample_normal(rng, theta.lambda * sum / post_prec, 1.0 / std::sqrt(post_prec));

    double ss = 0.0;
    for (double x : assigned) {
        const double d = x - out.mu;
        ss += d * d;
    }
    out.lambda = clamp_precision(sample_gamma(rng, prior.eps + 0.5 * n, prior.eps + 0.5 * ss));
    return out;
}

AlphaBetaEstimate alpha_beta_mc(const AtomSampler& draw, std::size_t n_mc, Rng& rng) {
    if (n_mc < 1000) {
        throw Error(ErrorCode::InvalidArgument, "alpha_beta_mc needs at least 1000 draws");
    }
    const double inv_two_sqrt_pi = 0.5 / std::sqrt(std::numbers::pi);
    MeanAccumulator alpha, beta;
    for (std::size_t i = 0; i < n_mc; ++i) {
        const Atom a = draw(rng);
        const Atom b = draw(rng);
        alpha.add(std::sqrt(a.lambda) * inv_two_sqrt_pi);
        const double var = 1.0 / a.lambda + 1.0 / b.lambda;
        const double d = a.mu - b.mu;
        beta.add(std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var));
    }
    return {alpha.mean(), beta.mean(), alpha.standard_error(), beta.standard_error()};
}

AlphaBetaEstimate alpha_beta_mc(const PriorP0& prior, std::size_t n_mc, Rng& rng) {
    return alpha_beta_mc([&prior](Rng& r) { return sample_prior_atom(prior, r); }, n_mc, rng);
}

}  // namespace capddp
