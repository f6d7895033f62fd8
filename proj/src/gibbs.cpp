#include "capddp/gibbs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "capddp/error.hpp"

namespace capddp {

namespace {

double clamp_open_unit(double z) {
    if (z <= 0.0) return std::numeric_limits<double>::min();
    if (z >= 1.0) return 1.0 - std::numeric_limits<double>::epsilon();
    return z;
}

// Scratch space reused across observations within step E. Kernel values are
// memoized per (atom table, k) with a generation stamp so nothing has to be
// cleared between observations.
struct AllocationWorkspace {
    std::vector<std::size_t> slice;
    std::vector<AllocationOption> options;
    std::vector<double> log_mass;
    std::vector<double> mass;
    std::vector<double> kernel_cache;
    std::vector<std::uint64_t> stamp;
    std::uint64_t generation = 0;

    void reset_cache(std::size_t tables, std::size_t n_star) {
        const std::size_t n = tables * n_star;
        if (kernel_cache.size() != n) {
            kernel_cache.assign(n, 0.0);
            stamp.assign(n, 0);
            generation = 0;
        }
    }
};

// Fills ws.options (probability left unset) and ws.log_mass.
void collect_allocation_masses(const GibbsState& st, std::size_t j, std::size_t i,
                               AllocationWorkspace& ws) {
    const double x = st.data.groups[j][i];
    const double u = st.latent.u[j][i];
    ws.options.clear();
    ws.log_mass.clear();
    ++ws.generation;
    for (std::size_t l = 0; l < st.m(); ++l) {
        const double p = st.probs(j, l);
        if (!(p > 0.0)) continue;
        const StickSequence& seq = st.sticks.at(j, l);
        slice_set_into(seq.weights(), seq.tail_mass(), u, ws.slice);
        const double log_p = std::log(p);
        const std::size_t table = st.table_index(j, l);
        for (std::size_t k : ws.slice) {
            const std::size_t slot = table * st.n_star + k;
            if (ws.stamp[slot] != ws.generation) {
                ws.kernel_cache[slot] = log_kernel_density(x, st.atoms[table][k]);
                ws.stamp[slot] = ws.generation;
            }
            ws.options.push_back({l, k, 0.0});
            ws.log_mass.push_back(log_p + ws.kernel_cache[slot]);
        }
    }
}

// Converts ws.log_mass into normalized masses in ws.mass.
void normalize_masses(AllocationWorkspace& ws, std::size_t j, std::size_t i) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (double v : ws.log_mass) max_log = std::max(max_log, v);
    if (ws.log_mass.empty() || !std::isfinite(max_log)) {
        throw Error(ErrorCode::Numerical, "allocation for observation (" + std::to_string(j + 1) +
                                              "," + std::to_string(i + 1) +
                                              ") has zero total mass");
    }
    ws.mass.resize(ws.log_mass.size());
    double total = 0.0;
    for (std::size_t r = 0; r < ws.log_mass.size(); ++r) {
        ws.mass[r] = std::exp(ws.log_mass[r] - max_log);
        total += ws.mass[r];
    }
    for (double& v : ws.mass) v /= total;
}

}  // namespace

StickCounts stick_counts(const GibbsState& st, std::size_t j, std::size_t l, std::size_t k) {
    StickCounts c;
    auto tally = [&](std::size_t group, std::size_t other) {
        const auto& d = st.latent.d[group];
        const auto& delta = st.latent.delta[group];
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (delta[i] != other) continue;
            if (d[i] == k) ++c.eq;
            else if (d[i] > k) ++c.gt;
        }
    };
    tally(j, l);
    if (j != l) tally(l, j);
    return c;
}

std::vector<std::vector<std::size_t>> stick_eq_table(const GibbsState& st) {
    std::vector<std::vector<std::size_t>> eq(st.sticks.pairs(),
                                             std::vector<std::size_t>(st.max_occupied, 0));
    for (std::size_t j = 0; j < st.m(); ++j) {
        for (std::size_t i = 0; i < st.latent.d[j].size(); ++i) {
            eq[pair_index(j, st.latent.delta[j][i], st.m())][st.latent.d[j][i]]++;
        }
    }
    return eq;
}

void step_a_sample_sticks(GibbsState& st, Rng& rng) {
    const auto eq = stick_eq_table(st);
    const double c = st.config.c;
    for (std::size_t p = 0; p < st.sticks.pairs(); ++p) {
        const auto& counts = eq[p];
        std::vector<double> z(st.max_occupied);
        std::size_t greater = 0;
        for (std::size_t k = st.max_occupied; k-- > 0;) {
            const double a = 1.0 + static_cast<double>(counts[k]);
            const double b = c + static_cast<double>(greater);
            z[k] = clamp_open_unit(sample_beta(rng, a, b));
            greater += counts[k];
        }
        st.sticks.row(p).assign(std::move(z));
    }
    st.n_star = st.max_occupied;
}

void step_b_sample_atoms(GibbsState& st, Rng& rng) {
    const std::size_t mx = st.max_occupied;
    const std::size_t tables = st.atoms.size();
    std::vector<std::vector<double>> buckets(tables * mx);
    for (std::size_t j = 0; j < st.m(); ++j) {
        for (std::size_t i = 0; i < st.latent.d[j].size(); ++i) {
            const std::size_t t = st.table_index(j, st.latent.delta[j][i]);
            buckets[t * mx + st.latent.d[j][i]].push_back(st.data.groups[j][i]);
        }
    }
    const PriorP0 prior = st.config.prior();
    for (std::size_t t = 0; t < tables; ++t) {
        auto& table = st.atoms[t];
        table.resize(mx);
        for (std::size_t k = 0; k < mx; ++k) {
            table[k] = conditional_update_atom(table[k], buckets[t * mx + k], prior, rng);
        }
    }
}

void step_c_sample_slices(GibbsState& st, Rng& rng) {
    for (std::size_t j = 0; j < st.m(); ++j) {
        auto& u = st.latent.u[j];
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double w = st.selected_weight(j, i);
            if (!(w > 0.0)) {
                throw Error(ErrorCode::State, "zero weight at the component selected by observation (" +
                                                  std::to_string(j + 1) + "," +
                                                  std::to_string(i + 1) + ")");
            }
            u[i] = sample_uniform(rng, 0.0, w);
            if (!(u[i] > 0.0)) u[i] = std::numeric_limits<double>::min();
        }
    }
}

void step_d_truncate(GibbsState& st, Rng& rng) {
    const std::size_t m = st.m();
    std::vector<double> u_min(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        for (double u : st.latent.u[j]) u_min[j] = std::min(u_min[j], u);
    }
    st.pair_truncation.assign(st.sticks.pairs(), 0);
    std::size_t n_star = st.max_occupied;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = j; l < m; ++l) {
            const double u_star = j == l ? u_min[j] : std::min(u_min[j], u_min[l]);
            const std::size_t n = truncation_index(st.sticks.at(j, l), u_star, st.config.c, rng);
            st.pair_truncation[pair_index(j, l, m)] = n;
            n_star = std::max(n_star, n);
        }
    }
    extend_to(st, n_star, rng);
    st.n_star = n_star;
}

std::vector<AllocationOption> allocation_probabilities(const GibbsState& st, std::size_t j,
                                                       std::size_t i) {
    AllocationWorkspace ws;
    ws.reset_cache(st.atoms.size(), st.n_star);
    collect_allocation_masses(st, j, i, ws);
    normalize_masses(ws, j, i);
    for (std::size_t r = 0; r < ws.options.size(); ++r) ws.options[r].probability = ws.mass[r];
    return ws.options;
}

void step_e_sample_allocations(GibbsState& st, Rng& rng) {
    AllocationWorkspace ws;
    ws.reset_cache(st.atoms.size(), st.n_star);
    for (std::size_t j = 0; j < st.m(); ++j) {
        for (std::size_t i = 0; i < st.data.groups[j].size(); ++i) {
            collect_allocation_masses(st, j, i, ws);
            normalize_masses(ws, j, i);
            const AllocationOption& pick = ws.options[sample_categorical(rng, ws.mass)];
            st.latent.delta[j][i] = pick.l;
            st.latent.d[j][i] = pick.k;
        }
    }
    st.max_occupied = compute_max_occupied(st.latent);
}

void step_f_sample_selection(GibbsState& st, Rng& rng) {
    const std::size_t m = st.m();
    std::vector<double> alpha(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = 0; l < m; ++l) alpha[l] = st.config.hyper(j, l);
        for (std::size_t l : st.latent.delta[j]) alpha[l] += 1.0;
        st.probs.set_row(j, sample_dirichlet(rng, alpha));
    }
}

SweepReport sweep(GibbsState& st, Rng& rng) {
    const auto start = std::chrono::steady_clock::now();
    step_a_sample_sticks(st, rng);
    step_b_sample_atoms(st, rng);
    step_c_sample_slices(st, rng);
    step_d_truncate(st, rng);
    step_e_sample_allocations(st, rng);
    step_f_sample_selection(st, rng);
    const auto stop = std::chrono::steady_clock::now();
    ++st.sweep;

    SweepReport r;
    r.sweep = st.sweep;
    r.max_occupied = st.max_occupied;
    r.n_star = st.n_star;
    r.pair_truncation = st.pair_truncation;
    r.clusters = cluster_count(st);
    r.wall_seconds = std::chrono::duration<double>(stop - start).count();
    return r;
}

SweepReport sweep_pddp(GibbsState& st, Rng& rng) {
    if (st.common_atoms()) {
        throw Error(ErrorCode::InvalidArgument, "sweep_pddp called on a common-atoms state");
    }
    return sweep(st, rng);
}

}  // namespace capddp
