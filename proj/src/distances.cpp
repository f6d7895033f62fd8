#include "capddp/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "capddp/error.hpp"

namespace capddp {

CompositeWeights composite_weights(const GibbsState& st) {
    if (!st.common_atoms()) {
        throw Error(ErrorCode::State, "distances are only defined for common-atoms states");
    }
    const std::size_t m = st.m();
    const std::size_t n = st.n_star;
    CompositeWeights out;
    out.groups.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        WeightVector& wj = out.groups[j];
        wj.w.assign(n, 0.0);
        wj.tail_mass = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
            const double p = st.probs(j, l);
            const StickSequence& seq = st.sticks.at(j, l);
            const auto w = seq.weights();
            for (std::size_t k = 0; k < n; ++k) wj.w[k] += p * w[k];
            // Sticks are exactly N* long at sweep end; anything past N* is tail.
            double tail = seq.tail_mass();
            for (std::size_t k = n; k < w.size(); ++k) tail += w[k];
            wj.tail_mass += p * tail;
        }
    }
    return out;
}

double l2_conditional(std::span<const double> wa, std::span<const double> wb,
                      std::optional<double> scale) {
    if (wa.size() != wb.size()) {
        throw Error(ErrorCode::InvalidArgument, "l2_conditional: weight vectors differ in length");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < wa.size(); ++k) {
        const double d = wa[k] - wb[k];
        sum += d * d;
    }
    return scale ? *scale * sum : sum;
}

double tv_distance(const WeightVector& a, const WeightVector& b) {
    if (a.w.size() != b.w.size()) {
        throw Error(ErrorCode::InvalidArgument, "tv_distance: weight vectors differ in length");
    }
    double sum = std::abs(a.tail_mass - b.tail_mass);
    for (std::size_t k = 0; k < a.w.size(); ++k) sum += std::abs(a.w[k] - b.w[k]);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

double kernel_l1_distance(const Atom& a, const Atom& b) {
    const double sa = 1.0 / std::sqrt(a.lambda);
    const double sb = 1.0 / std::sqrt(b.lambda);
    QuadratureGrid grid;
    grid.lo = std::min(a.mu - 12.0 * sa, b.mu - 12.0 * sb);
    grid.hi = std::max(a.mu + 12.0 * sa, b.mu + 12.0 * sb);
    grid.breakpoints = {a.mu, b.mu};
    grid.tolerance = 1e-9;
    const auto r = adaptive_simpson(
        [&](double x) { return std::abs(kernel_density(x, a) - kernel_density(x, b)); }, grid);
    return std::clamp(r.value, 0.0, 2.0);
}

CommonAtomApproximation approximate_with_common_atoms(std::span<const WeightedAtom> target,
                                                      std::span<const Atom> pool) {
    if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "atom pool is empty");
    if (pool.size() < target.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "atom pool is smaller than the target support; no injective matching exists");
    }
    std::vector<std::size_t> order(target.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return target[x].weight > target[y].weight;
    });

    CommonAtomApproximation out;
    out.pool_weights.assign(pool.size(), 0.0);
    out.assignment.assign(target.size(), 0);
    std::vector<bool> used(pool.size(), false);
    for (std::size_t t : order) {
        std::size_t best = pool.size();
        double best_dist = 0.0;
        for (std::size_t q = 0; q < pool.size(); ++q) {
            if (used[q]) continue;
            const double dist = target[t].atom == pool[q] ? 0.0 : kernel_l1_distance(target[t].atom, pool[q]);
            if (best == pool.size() || dist < best_dist) {
                best = q;
                best_dist = dist;
            }
        }
        used[best] = true;
        out.assignment[t] = best;
        out.pool_weights[best] = target[t].weight;
        out.bound += target[t].weight * best_dist;
    }
    return out;
}

QuadratureResult exact_l2_quadrature(const Density& f, const Density& g,
                                     const QuadratureGrid& grid) {
    return adaptive_simpson(
        [&](double x) {
            const double d = f(x) - g(x);
            return d * d;
        },
        grid);
}

std::vector<double> running_average(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "running_average of empty series");
    std::vector<double> out(values.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        sum += values[t];
        out[t] = sum / static_cast<double>(t + 1);
    }
    return out;
}

void DistanceTrace::record(const GibbsState& state) {
    if (m == 0) m = state.m();
    const CompositeWeights cw = composite_weights(state);
    std::vector<double> l2_row, tv_row;
    l2_row.reserve(pairs());
    tv_row.reserve(pairs());
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            l2_row.push_back(l2_conditional(cw.groups[a].w, cw.groups[b].w));
            tv_row.push_back(tv_distance(cw.groups[a], cw.groups[b]));
        }
    }
    const double t = static_cast<double>(size() + 1);
    auto next_mean = [t](std::vector<double>& sums, const std::vector<double>& row) {
        sums.resize(row.size(), 0.0);
        std::vector<double> out(row.size());
        for (std::size_t p = 0; p < row.size(); ++p) {
            sums[p] += row[p];
            out[p] = sums[p] / t;
        }
        return out;
    };
    l2_mean.push_back(next_mean(l2_sum, l2_row));
    tv_mean.push_back(next_mean(tv_sum, tv_row));
    l2.push_back(std::move(l2_row));
    tv.push_back(std::move(tv_row));
    sweeps.push_back(state.sweep);
    n_star.push_back(state.n_star);
}

}  // namespace capddp
