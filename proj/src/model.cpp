#include "capddp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "capddp/error.hpp"

namespace capddp {

std::string to_string(Variant v) {
    return v == Variant::CommonAtoms ? "capddp" : "pddp";
}

Variant variant_from_string(const std::string& name) {
    if (name == "capddp") return Variant::CommonAtoms;
    if (name == "pddp") return Variant::UncommonAtoms;
    throw Error(ErrorCode::Config, "unknown variant '" + name + "' (expected capddp or pddp)");
}

ValidatedConfig validate_config(ModelConfig cfg) {
    if (cfg.m < 2) throw Error(ErrorCode::Config, "m must be >= 2");
    if (!(cfg.c > 0.0)) throw Error(ErrorCode::Config, "c must be positive");
    if (!(cfg.s > 0.0)) throw Error(ErrorCode::Config, "s must be positive");
    if (!(cfg.eps > 0.0)) throw Error(ErrorCode::Config, "eps must be positive");
    if (cfg.dirichlet_hyper.empty()) cfg.dirichlet_hyper.assign(cfg.m * cfg.m, 1.0);
    if (cfg.dirichlet_hyper.size() != cfg.m * cfg.m) {
        throw Error(ErrorCode::Config, "dirichlet_hyper must be an m x m matrix");
    }
    for (double a : cfg.dirichlet_hyper) {
        if (!(a > 0.0)) throw Error(ErrorCode::Config, "every dirichlet_hyper entry must be positive");
    }
    return ValidatedConfig(std::move(cfg));
}

std::vector<double> dirichlet_hyper_diag(std::size_t m, double diag, double off) {
    std::vector<double> a(m * m, off);
    for (std::size_t j = 0; j < m; ++j) a[j * m + j] = diag;
    return a;
}

std::size_t Dataset::total_size() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
}

void validate_dataset(const Dataset& data, std::size_t m) {
    if (data.m() != m) {
        throw Error(ErrorCode::InvalidArgument, "dataset has " + std::to_string(data.m()) +
                                                    " groups, model expects " + std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (data.groups[j].empty()) {
            throw Error(ErrorCode::InvalidArgument, "group " + std::to_string(j + 1) + " is empty");
        }
        for (double x : data.groups[j]) {
            if (!std::isfinite(x)) {
                throw Error(ErrorCode::InvalidArgument,
                            "group " + std::to_string(j + 1) + " has a non-finite value");
            }
        }
    }
}

void SelectionProbs::set_row(std::size_t j, std::span<const double> values) {
    if (values.size() != m_) throw Error(ErrorCode::InvalidArgument, "selection row has wrong length");
    std::copy(values.begin(), values.end(), p_.begin() + static_cast<std::ptrdiff_t>(j * m_));
}

double GibbsState::selected_weight(std::size_t j, std::size_t i) const {
    return sticks.at(j, latent.delta[j][i]).weight(latent.d[j][i]);
}

std::size_t compute_max_occupied(const LatentState& latent) {
    std::size_t mx = 0;
    for (const auto& g : latent.d) {
        for (std::size_t d : g) mx = std::max(mx, d + 1);
    }
    return mx;
}

void extend_to(GibbsState& state, std::size_t n_star, Rng& rng) {
    const PriorP0 prior = state.config.prior();
    for (std::size_t p = 0; p < state.sticks.pairs(); ++p) {
        state.sticks.row(p).extend_from_prior(n_star, state.config.c, rng);
    }
    for (auto& table : state.atoms) {
        while (table.size() < n_star) table.push_back(sample_prior_atom(prior, rng));
    }
    state.n_star = std::max(state.n_star, n_star);
}

GibbsState init_state(const ValidatedConfig& cfg, Dataset data, Rng& rng, InitAllocation init) {
    const ModelConfig& mc = cfg.get();
    validate_dataset(data, mc.m);

    GibbsState st;
    st.config = mc;
    st.data = std::move(data);
    st.sticks = StickMatrix(mc.m);
    st.probs = SelectionProbs(mc.m);
    st.atoms.resize(mc.variant == Variant::CommonAtoms ? 1 : pair_count(mc.m));

    auto& lat = st.latent;
    lat.u.resize(mc.m);
    lat.d.resize(mc.m);
    lat.delta.resize(mc.m);
    for (std::size_t j = 0; j < mc.m; ++j) {
        const auto& xs = st.data.groups[j];
        const std::size_t n = xs.size();
        lat.u[j].assign(n, 0.0);
        lat.delta[j].assign(n, j);
        lat.d[j].assign(n, 0);
        if (init == InitAllocation::QuantileBins) {
            const std::size_t bins = std::min<std::size_t>(5, n);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
            for (std::size_t r = 0; r < n; ++r) lat.d[j][order[r]] = r * bins / n;
        }
    }

    for (std::size_t j = 0; j < mc.m; ++j) {
        std::vector<double> alpha(mc.dirichlet_hyper.begin() + static_cast<std::ptrdiff_t>(j * mc.m),
                                  mc.dirichlet_hyper.begin() + static_cast<std::ptrdiff_t>((j + 1) * mc.m));
        st.probs.set_row(j, sample_dirichlet(rng, alpha));
    }

    st.max_occupied = compute_max_occupied(lat);
    extend_to(st, st.max_occupied, rng);
    st.pair_truncation.assign(st.sticks.pairs(), st.n_star);

    for (std::size_t j = 0; j < mc.m; ++j) {
        for (std::size_t i = 0; i < lat.u[j].size(); ++i) {
            lat.u[j][i] = sample_uniform(rng, 0.0, st.selected_weight(j, i));
        }
    }
    return st;
}

void check_invariants(const GibbsState& st) {
    const std::size_t m = st.m();
    for (std::size_t j = 0; j < m; ++j) {
        const auto row = st.probs.row(j);
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) throw Error(ErrorCode::State, "negative selection probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::State, "selection row not stochastic");
    }
    const std::size_t mx = compute_max_occupied(st.latent);
    if (mx != st.max_occupied) throw Error(ErrorCode::State, "M does not match allocations");
    if (st.n_star < st.max_occupied) throw Error(ErrorCode::State, "N* below M");
    for (std::size_t p = 0; p < st.sticks.pairs(); ++p) {
        if (st.sticks.row(p).size() < st.n_star) throw Error(ErrorCode::State, "stick row shorter than N*");
    }
    for (const auto& table : st.atoms) {
        if (table.size() < st.n_star) throw Error(ErrorCode::State, "atom table shorter than N*");
        for (const Atom& a : table) {
            if (!(a.lambda > 0.0)) throw Error(ErrorCode::State, "non-positive atom precision");
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < st.latent.d[j].size(); ++i) {
            if (st.latent.delta[j][i] >= m) throw Error(ErrorCode::State, "delta out of range");
            if (st.latent.d[j][i] >= st.n_star) throw Error(ErrorCode::State, "d beyond N*");
            if (!(st.latent.u[j][i] < st.selected_weight(j, i))) {
                throw Error(ErrorCode::State, "slice exceeds selected weight");
            }
        }
    }
}

}  // namespace capddp

namespace capddp {

std::size_t cluster_count(const GibbsState& state) {
    std::vector<bool> seen(state.max_occupied, false);
    std::size_t count = 0;
    for (const auto& g : state.latent.d) {
        for (std::size_t d : g) {
            if (d >= seen.size()) seen.resize(d + 1, false);
            if (!seen[d]) {
                seen[d] = true;
                ++count;
            }
        }
    }
    return count;
}

std::size_t cluster_count_group(const GibbsState& state, std::size_t j) {
    std::vector<std::size_t> labels(state.latent.d.at(j));
    std::sort(labels.begin(), labels.end());
    return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

}  // namespace capddp
