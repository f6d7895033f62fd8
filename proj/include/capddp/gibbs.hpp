#ifndef CAPDDP_GIBBS_HPP
#define CAPDDP_GIBBS_HPP

#include <cstddef>
#include <vector>

#include "capddp/model.hpp"
#include "capddp/random.hpp"

namespace capddp {

// Slice-sampling Gibbs sweep shared by both variants. The only variant
// dependence is GibbsState::table_index, which resolves a mixture row (j, l)
// to the atom table it reads.

/// Indicator sums feeding the beta full conditional of z_jlk:
/// eq counts observations on this stick row with d = k, gt those with d > k.
struct StickCounts {
    std::size_t eq = 0;
    std::size_t gt = 0;
};

/// Direct count for one (j, l, k), 0-based. Observations of group j with
/// delta = l and, when j != l, observations of group l with delta = j.
StickCounts stick_counts(const GibbsState& state, std::size_t j, std::size_t l, std::size_t k);

/// eq counts for every pair row (indexed by pair_index) and k < M.
std::vector<std::vector<std::size_t>> stick_eq_table(const GibbsState& state);

// Steps A-F, in the order the sweep applies them.
void step_a_sample_sticks(GibbsState& state, Rng& rng);
void step_b_sample_atoms(GibbsState& state, Rng& rng);
void step_c_sample_slices(GibbsState& state, Rng& rng);
void step_d_truncate(GibbsState& state, Rng& rng);
void step_e_sample_allocations(GibbsState& state, Rng& rng);
void step_f_sample_selection(GibbsState& state, Rng& rng);

struct AllocationOption {
    std::size_t l = 0;  // mixture row (delta)
    std::size_t k = 0;  // component (d)
    double probability = 0.0;
};

/// Joint block conditional of (d_ji, delta_ji) given the slice u_ji:
/// proportional to p_jl * 1(u_ji < w_jlk) * K(x_ji | theta_k), normalized
/// over every (l, k). Options come out ordered by l, then k.
std::vector<AllocationOption> allocation_probabilities(const GibbsState& state, std::size_t j,
                                                       std::size_t i);

struct SweepReport {
    std::uint64_t sweep = 0;
    std::size_t max_occupied = 0;
    std::size_t n_star = 0;
    std::vector<std::size_t> pair_truncation;
    std::size_t clusters = 0;
    double wall_seconds = 0.0;
};

SweepReport sweep(GibbsState& state, Rng& rng);

/// Same sweep, but refuses states that were not built as PDDP.
SweepReport sweep_pddp(GibbsState& state, Rng& rng);

}  // namespace capddp

#endif  // CAPDDP_GIBBS_HPP
