#ifndef CAPDDP_MODEL_HPP
#define CAPDDP_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "capddp/kernel.hpp"
#include "capddp/random.hpp"
#include "capddp/stick_breaking.hpp"

namespace capddp {

// CommonAtoms is the CAPDDP model (one shared atom sequence); UncommonAtoms
// is the PDDP baseline with one atom sequence per pair (j, l), j <= l.
enum class Variant { CommonAtoms, UncommonAtoms };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct ModelConfig {
    std::size_t m = 3;
    double c = 1.0;
    double s = 0.001;
    double eps = 0.001;
    std::vector<double> dirichlet_hyper;  // m x m, row-major
    std::uint64_t seed = 0;
    Variant variant = Variant::CommonAtoms;

    double hyper(std::size_t j, std::size_t l) const { return dirichlet_hyper[j * m + l]; }
    PriorP0 prior() const { return {s, eps}; }
};

/// ModelConfig that has passed validate_config. Only validate_config can
/// construct one.
class ValidatedConfig {
 public:
    const ModelConfig& get() const noexcept { return cfg_; }
    const ModelConfig* operator->() const noexcept { return &cfg_; }

 private:
    explicit ValidatedConfig(ModelConfig cfg) : cfg_(std::move(cfg)) {}
    friend ValidatedConfig validate_config(ModelConfig cfg);
    ModelConfig cfg_;
};

ValidatedConfig validate_config(ModelConfig cfg);

/// a_jl = diag on the diagonal, off elsewhere.
std::vector<double> dirichlet_hyper_diag(std::size_t m, double diag, double off);

struct Dataset {
    std::vector<std::vector<double>> groups;

    std::size_t m() const noexcept { return groups.size(); }
    std::size_t total_size() const noexcept;
};

void validate_dataset(const Dataset& data, std::size_t m);

/// Position of pair (j, l) in upper-triangular storage; symmetric in j, l.
constexpr std::size_t pair_index(std::size_t j, std::size_t l, std::size_t m) noexcept {
    if (j > l) std::swap(j, l);
    return j * m - j * (j - 1) / 2 + (l - j);
}

constexpr std::size_t pair_count(std::size_t m) noexcept { return m * (m + 1) / 2; }

using AtomTable = std::vector<Atom>;

/// Symmetric matrix of stick sequences; (j, l) and (l, j) share storage.
class StickMatrix {
 public:
    StickMatrix() = default;
    explicit StickMatrix(std::size_t m) : m_(m), rows_(pair_count(m)) {}

    std::size_t m() const noexcept { return m_; }
    std::size_t pairs() const noexcept { return rows_.size(); }

    StickSequence& at(std::size_t j, std::size_t l) { return rows_[pair_index(j, l, m_)]; }
    const StickSequence& at(std::size_t j, std::size_t l) const {
        return rows_[pair_index(j, l, m_)];
    }
    StickSequence& row(std::size_t p) { return rows_[p]; }
    const StickSequence& row(std::size_t p) const { return rows_[p]; }

 private:
    std::size_t m_ = 0;
    std::vector<StickSequence> rows_;
};

/// Row-stochastic m x m matrix of selection probabilities p_jl.
class SelectionProbs {
 public:
    SelectionProbs() = default;
    explicit SelectionProbs(std::size_t m) : m_(m), p_(m * m, 1.0 / static_cast<double>(m)) {}

    std::size_t m() const noexcept { return m_; }
    double operator()(std::size_t j, std::size_t l) const { return p_[j * m_ + l]; }
    std::span<const double> row(std::size_t j) const { return {p_.data() + j * m_, m_}; }
    void set_row(std::size_t j, std::span<const double> values);

 private:
    std::size_t m_ = 0;
    std::vector<double> p_;
};

/// Per-observation latent variables, indexed [group][observation]. `d` is
/// the 0-based component index, `delta` the 0-based mixture row l.
struct LatentState {
    std::vector<std::vector<double>> u;
    std::vector<std::vector<std::size_t>> d;
    std::vector<std::vector<std::size_t>> delta;
};

struct GibbsState {
    ModelConfig config;
    Dataset data;
    std::vector<AtomTable> atoms;  // 1 table (CAPDDP) or pair_count(m) tables (PDDP)
    StickMatrix sticks;
    SelectionProbs probs;
    LatentState latent;
    std::size_t max_occupied = 0;  // M: one past the largest 0-based d
    std::size_t n_star = 0;        // realized truncation length
    std::vector<std::size_t> pair_truncation;  // N_jl from the last step D
    std::uint64_t sweep = 0;

    std::size_t m() const noexcept { return config.m; }
    bool common_atoms() const noexcept { return config.variant == Variant::CommonAtoms; }

    /// Atom table used by mixture row (j, l).
    std::size_t table_index(std::size_t j, std::size_t l) const noexcept {
        return common_atoms() ? 0 : pair_index(j, l, config.m);
    }
    const Atom& atom(std::size_t j, std::size_t l, std::size_t k) const {
        return atoms[table_index(j, l)][k];
    }
    /// Weight of the component currently selected by observation (j, i).
    double selected_weight(std::size_t j, std::size_t i) const;
};

enum class InitAllocation {
    QuantileBins,  // d by within-group quantile bins, min(5, n_j) of them
    SingleCluster, // every d = first component
};

GibbsState init_state(const ValidatedConfig& cfg, Dataset data, Rng& rng,
                      InitAllocation init = InitAllocation::QuantileBins);

/// Recompute M from the allocations.
std::size_t compute_max_occupied(const LatentState& latent);

/// Extend every stick sequence and atom table to `n_star` from the prior.
void extend_to(GibbsState& state, std::size_t n_star, Rng& rng);

/// Number of distinct component labels d over all observations.
std::size_t cluster_count(const GibbsState& state);

/// Distinct component labels among group j's observations.
std::size_t cluster_count_group(const GibbsState& state, std::size_t j);

/// Throws State describing the first violated invariant.
void check_invariants(const GibbsState& state);

}  // namespace capddp

#endif  // CAPDDP_MODEL_HPP
