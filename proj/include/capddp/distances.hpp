#ifndef CAPDDP_DISTANCES_HPP
#define CAPDDP_DISTANCES_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "capddp/kernel.hpp"
#include "capddp/model.hpp"
#include "capddp/quadrature.hpp"
#include "capddp/stick_breaking.hpp"

namespace capddp {

/// Per-group weights on the shared atoms, w_jk = sum_l p_jl w_jlk, with the
/// matching p-weighted tail mass in each WeightVector.
struct CompositeWeights {
    std::vector<WeightVector> groups;
};

/// Refuses PDDP states: without common atoms the group weights do not live
/// on a common support.
CompositeWeights composite_weights(const GibbsState& state);

/// sum_k (a_k - b_k)^2, times `scale` (alpha - beta) when given.
double l2_conditional(std::span<const double> wa, std::span<const double> wb,
                      std::optional<double> scale = std::nullopt);

/// Total variation between two discrete measures on common atoms, with each
/// tail lumped into one pseudo-atom: 1/2 sum |a_k - b_k| + 1/2 |tail_a - tail_b|.
double tv_distance(const WeightVector& a, const WeightVector& b);

struct WeightedAtom {
    Atom atom;
    double weight = 0.0;
};

struct CommonAtomApproximation {
    std::vector<double> pool_weights;     // q, one entry per pool atom
    std::vector<std::size_t> assignment;  // target component -> pool index
    double bound = 0.0;                   // sum_j w_j * L1(K(.|psi_j), K(.|theta_l(j)))
};

/// L1 distance between two normal kernels, by quadrature.
double kernel_l1_distance(const Atom& a, const Atom& b);

/// Re-expresses a target mixture on a fixed pool of atoms: components taken
/// in descending weight are each matched injectively to the unused pool atom
/// of smallest kernel L1 distance, and carry their weight over to it.
CommonAtomApproximation approximate_with_common_atoms(std::span<const WeightedAtom> target,
                                                      std::span<const Atom> pool);

using Density = std::function<double(double)>;

/// int (f - g)^2 over the grid, with the quadrature's error estimate.
QuadratureResult exact_l2_quadrature(const Density& f, const Density& g,
                                     const QuadratureGrid& grid);

/// Prefix means: out[t] = mean(values[0..t]).
std::vector<double> running_average(std::span<const double> values);

/// Per-sweep distance record for every unordered group pair (a < b),
/// ordered (0,1), (0,2), ..., (1,2), ...
struct DistanceTrace {
    std::size_t m = 0;
    std::vector<std::uint64_t> sweeps;
    std::vector<std::size_t> n_star;
    std::vector<std::vector<double>> l2;        // [record][pair]
    std::vector<std::vector<double>> tv;        // [record][pair]
    std::vector<std::vector<double>> l2_mean;   // running means, same shape
    std::vector<std::vector<double>> tv_mean;
    std::vector<double> l2_sum;
    std::vector<double> tv_sum;

    std::size_t pairs() const noexcept { return m * (m - 1) / 2; }
    std::size_t size() const noexcept { return sweeps.size(); }

    void record(const GibbsState& state);
};

}  // namespace capddp

#endif  // CAPDDP_DISTANCES_HPP
