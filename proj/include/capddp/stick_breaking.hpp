#ifndef CAPDDP_STICK_BREAKING_HPP
#define CAPDDP_STICK_BREAKING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "capddp/random.hpp"

namespace capddp {

// Hard ceiling on how far a single stick sequence may be extended.
inline constexpr std::size_t kMaxSticks = 1'000'000;

/// Finite prefix of a stick-breaking weight sequence. `tail_mass` is the
/// mass not yet assigned to any realized index, 1 - sum(w).
struct WeightVector {
    std::vector<double> w;
    double tail_mass = 1.0;
};

/// w_1 = z_1, w_k = z_k * prod_{r<k} (1 - z_r); tail = prod (1 - z_k).
/// Throws InvalidArgument if any z lies outside (0,1).
WeightVector weights_from_sticks(std::span<const double> z);

/// Indices k (0-based, increasing) with u < w_k. The prefix must be long
/// enough that tail_mass <= u, otherwise an index past the prefix could
/// still qualify and the set would be incomplete.
std::vector<std::size_t> slice_set(const WeightVector& w, double u);

/// Allocation-free variant used inside the sweep.
void slice_set_into(std::span<const double> w, double tail_mass, double u,
                    std::vector<std::size_t>& out);

/// A stick-breaking sequence that can grow on demand by drawing
/// beta(1, c) fractions. Fractions and weights stay in lockstep.
class StickSequence {
 public:
    StickSequence() = default;

    std::size_t size() const noexcept { return z_.size(); }
    std::span<const double> fractions() const noexcept { return z_; }
    std::span<const double> weights() const noexcept { return weights_.w; }
    double tail_mass() const noexcept { return weights_.tail_mass; }
    const WeightVector& weight_vector() const noexcept { return weights_; }

    double weight(std::size_t k) const { return weights_.w.at(k); }
    double fraction(std::size_t k) const { return z_.at(k); }

    void push(double z);
    void extend_from_prior(std::size_t n, double c, Rng& rng);
    void truncate(std::size_t n);

    /// Replace the fractions wholesale and rebuild the weights.
    void assign(std::vector<double> z);

 private:
    std::vector<double> z_;
    WeightVector weights_;
};

/// Smallest N >= 1 such that the first N weights sum to more than 1 - u_star,
/// i.e. the remaining tail is below u_star. Extends `sticks` from the
/// beta(1, c) prior as needed. Throws Numerical once `cap` sticks would be
/// exceeded.
std::size_t truncation_index(StickSequence& sticks, double u_star, double c,
                             Rng& rng, std::size_t cap = kMaxSticks);

}  // namespace capddp

#endif  // CAPDDP_STICK_BREAKING_HPP
