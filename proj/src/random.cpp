#include "capddp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "capddp/error.hpp"

namespace capddp {

double sample_uniform(Rng& rng) {
    // generate_canonical can return exactly 0; the slice and log-space code
    // downstream needs the open interval.
    double u;
    do {
        u = std::generate_canonical<double, 53>(rng);
    } while (u <= 0.0 || u >= 1.0);
    return u;
}

double sample_uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * sample_uniform(rng);
}

double sample_normal(Rng& rng, double mean, double sd) {
    std::normal_distribution<double> dist(mean, sd);
    return dist(rng);
}

double sample_gamma(Rng& rng, double shape, double rate) {
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(rng);
}

double sample_beta(Rng& rng, double a, double b) {
    const double x = sample_gamma(rng, a, 1.0);
    const double y = sample_gamma(rng, b, 1.0);
    const double s = x + y;
    if (s <= 0.0) {
        // Both gammas underflowed (tiny shapes); fall back on the limiting
        // Bernoulli(a / (a + b)) behaviour.
        return sample_uniform(rng) < a / (a + b) ? 1.0 - 1e-16 : 1e-16;
    }
    // keep strictly inside (0,1)
    return std::clamp(x / s, std::numeric_limits<double>::min(), 1.0 - std::numeric_limits<double>::epsilon() / 2);
}

std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> alpha) {
    std::vector<double> out(alpha.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = sample_gamma(rng, alpha[i], 1.0);
        total += out[i];
    }
    if (total <= 0.0) {
        // All components underflowed; pick one vertex with probability
        // proportional to alpha.
        const std::size_t k = sample_categorical(rng, alpha);
        std::fill(out.begin(), out.end(), 0.0);
        out[k] = 1.0;
        return out;
    }
    for (double& v : out) v /= total;
    return out;
}

std::size_t sample_categorical(Rng& rng, std::span<const double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw Error(ErrorCode::Numerical, "categorical weights have no positive finite mass");
    }
    const double target = sample_uniform(rng) * total;
    double running = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        running += weights[i];
        if (target < running) return i;
    }
    // Rounding left target at the very top; return the last positive entry.
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    return weights.size() - 1;
}

}  // namespace capddp
