#ifndef CAPDDP_RANDOM_HPP
#define CAPDDP_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace capddp {

// Single generator type used throughout; the driver owns one per chain.
using Rng = std::mt19937_64;

double sample_uniform(Rng& rng);                            // (0,1), never 0
double sample_uniform(Rng& rng, double lo, double hi);
double sample_normal(Rng& rng, double mean, double sd);
double sample_gamma(Rng& rng, double shape, double rate);
double sample_beta(Rng& rng, double a, double b);
std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> alpha);

// Index drawn proportionally to nonnegative weights.
std::size_t sample_categorical(Rng& rng, std::span<const double> weights);

}  // namespace capddp

#endif  // CAPDDP_RANDOM_HPP
