#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "capddp/distances.hpp"
#include "capddp/error.hpp"
#include "capddp/experiments.hpp"
#include "capddp/gibbs.hpp"
#include "doctest.h"

using namespace capddp;

namespace {

GibbsState two_group_state(Variant v = Variant::CommonAtoms) {
    ModelConfig mc;
    mc.m = 2;
    mc.variant = v;
    const auto cfg = validate_config(mc);
    Dataset d;
    d.groups = {{0.0}, {1.0}};
    Rng rng(1);
    return init_state(cfg, d, rng, InitAllocation::SingleCluster);
}

WeightVector random_weights(Rng& rng, std::size_t k) {
    StickSequence s;
    s.extend_from_prior(k, 1.0, rng);
    return s.weight_vector();
}

// Independent closed form: f = mixture of equal-weight unit-variance normals.
double mixture_l2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    auto inner = [](const std::array<double, 3>& x, const std::array<double, 3>& y) {
        double s = 0.0;
        for (double p : x)
            for (double q : y) s += std::exp(-0.25 * (p - q) * (p - q)) / (2.0 * std::sqrt(std::numbers::pi));
        return s / 9.0;
    };
    return inner(a, a) + inner(b, b) - 2.0 * inner(a, b);
}

}  // namespace

TEST_CASE("composite weights: basis selection and hand combination") {
    GibbsState st = two_group_state();
    Rng rng(9);
    extend_to(st, 2, rng);
    st.sticks.at(0, 0).assign({0.6, 0.99});
    st.sticks.at(0, 1).assign({0.2, 0.99});
    st.probs.set_row(0, std::vector<double>{1.0, 0.0});
    auto cw = composite_weights(st);
    CHECK(cw.groups[0].w[0] == doctest::Approx(0.6));

    // rows (0.6, 0.4, ~0) and (0.2, 0.8, ~0) at k = 1..2
    st.sticks.at(0, 0).assign({0.6, 1.0 - 1e-15});
    st.sticks.at(0, 1).assign({0.2, 1.0 - 1e-15});
    st.probs.set_row(0, std::vector<double>{0.5, 0.5});
    cw = composite_weights(st);
    CHECK(cw.groups[0].w[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cw.groups[0].w[1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("composite weights plus weighted tails sum to one") {
    ModelConfig mc;
    const auto cfg = validate_config(mc);
    Rng rng(2);
    Dataset d = generate_example1(std::vector<std::size_t>{20, 10, 20}, rng);
    GibbsState st = init_state(cfg, d, rng);
    for (int s = 0; s < 30; ++s) {
        sweep(st, rng);
        const auto cw = composite_weights(st);
        for (const auto& g : cw.groups) {
            double s2 = g.tail_mass;
            for (double w : g.w) {
                CHECK(w >= 0.0);
                s2 += w;
            }
            CHECK(std::fabs(s2 - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("distances refuse uncommon-atoms states") {
    const GibbsState st = two_group_state(Variant::UncommonAtoms);
    CHECK_THROWS_AS(composite_weights(st), Error);
}

TEST_CASE("l2_conditional values") {
    const std::vector<double> a{0.3, 0.7};
    CHECK(l2_conditional(a, a) == 0.0);
    CHECK(l2_conditional(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 2.0);
    CHECK(l2_conditional(std::vector<double>{1, 0}, std::vector<double>{0, 1}, 0.25) == 0.5);
    CHECK_THROWS_AS(l2_conditional(a, std::vector<double>{1.0}), Error);
}

TEST_CASE("l2_conditional: symmetry and triangle inequality of its root") {
    Rng rng(3);
    for (int r = 0; r < 500; ++r) {
        const auto a = random_weights(rng, 8).w;
        const auto b = random_weights(rng, 8).w;
        const auto c = random_weights(rng, 8).w;
        CHECK(l2_conditional(a, b) == l2_conditional(b, a));
        CHECK(std::sqrt(l2_conditional(a, c)) <=
              std::sqrt(l2_conditional(a, b)) + std::sqrt(l2_conditional(b, c)) + 1e-15);
    }
}

TEST_CASE("tv_distance values") {
    const WeightVector a{{0.7, 0.3}, 0.0};
    const WeightVector b{{0.3, 0.7}, 0.0};
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(a, b) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(tv_distance({{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}) == 1.0);
    // tails are a pseudo-atom
    CHECK(tv_distance({{0.5}, 0.5}, {{0.5}, 0.5}) == 0.0);
    CHECK(tv_distance({{0.8}, 0.2}, {{0.5}, 0.5}) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("cancellation identity on full weight vectors") {
    Rng rng(4);
    for (int r = 0; r < 200; ++r) {
        auto a = random_weights(rng, 1 + r % 20);
        auto b = random_weights(rng, 1 + r % 20);
        a.w.push_back(a.tail_mass);
        b.w.push_back(b.tail_mass);
        double sq = 0.0, cross = 0.0;
        for (std::size_t j = 0; j < a.w.size(); ++j) {
            const double dj = a.w[j] - b.w[j];
            sq += dj * dj;
            for (std::size_t k = j + 1; k < a.w.size(); ++k) cross += dj * (a.w[k] - b.w[k]);
        }
        CHECK(std::fabs(sq + 2.0 * cross) < 1e-10);
    }
}

TEST_CASE("exact L2 by quadrature: example 1 closed forms") {
    QuadratureGrid g;
    g.lo = -60.0;
    g.hi = 60.0;
    g.breakpoints = {-2.0, 2.0};
    auto f = [](std::size_t j) { return [j](double x) { return example1_density(j, x); }; };
    const double d12 = exact_l2_quadrature(f(0), f(1), g).value;
    const double d23 = exact_l2_quadrature(f(1), f(2), g).value;
    const double d13 = exact_l2_quadrature(f(0), f(2), g).value;
    const double closed12 = 0.25 + 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi)) -
                            2.0 / (std::numbers::e * std::sqrt(std::numbers::pi));
    const double closed13 = 0.5 - 64.0 / 3.0 * std::exp(-4.0);
    CHECK(d12 == doctest::Approx(closed12).epsilon(1e-9));
    CHECK(d23 == doctest::Approx(closed12).epsilon(1e-9));
    CHECK(d13 == doctest::Approx(closed13).epsilon(1e-9));
    // high-precision reference values
    CHECK(std::fabs(d12 - 0.03436364278012164) < 1e-9);
    CHECK(std::fabs(d13 - 0.10926637037367082) < 1e-9);
    // published rounded constants
    CHECK(std::fabs(d12 - 0.0346) < 5e-4);
    CHECK(std::fabs(d13 - 0.1093) < 5e-4);
}

TEST_CASE("exact L2 by quadrature: example 2 mixtures") {
    QuadratureGrid g;
    g.lo = -40.0;
    g.hi = 50.0;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            const double q = exact_l2_quadrature([a](double x) { return example2_density(a, x); },
                                                 [b](double x) { return example2_density(b, x); }, g)
                                 .value;
            CHECK(q == doctest::Approx(mixture_l2(kExample2Means[a], kExample2Means[b])).epsilon(1e-9));
            CHECK(std::fabs(q - 0.125375463) < 1e-8);
            CHECK(std::fabs(q - 0.125) < 2e-3);
        }
    }
}

TEST_CASE("kernel L1 distance") {
    CHECK(kernel_l1_distance({0, 1}, {0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
    // equal variances: L1 = 2 (2 Phi(|d|/2) - 1)
    const double d = 1.0;
    const double want = 2.0 * std::erf(d / (2.0 * std::sqrt(2.0)));
    CHECK(kernel_l1_distance({0, 1}, {d, 1}) == doctest::Approx(want).epsilon(1e-8));
    CHECK(kernel_l1_distance({0, 1}, {100, 1}) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("common-atom approximation: exact pool") {
    const std::vector<WeightedAtom> target{{{0, 1}, 0.5}, {{3, 2}, 0.3}, {{-4, 0.5}, 0.2}};
    const std::vector<Atom> pool{{-4, 0.5}, {0, 1}, {3, 2}};
    const auto r = approximate_with_common_atoms(target, pool);
    CHECK(r.bound == 0.0);
    CHECK(r.pool_weights == std::vector<double>{0.2, 0.5, 0.3});
    CHECK(r.assignment == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("common-atom approximation: nearest atom wins") {
    const std::vector<WeightedAtom> target{{{0.0, 1.0}, 1.0}};
    const std::vector<Atom> pool{{2.0, 1.0}, {0.5, 1.0}};
    const auto r = approximate_with_common_atoms(target, pool);
    CHECK(r.assignment[0] == 1);
    CHECK(r.bound == doctest::Approx(kernel_l1_distance({0.0, 1.0}, {0.5, 1.0})));
    CHECK(r.bound < kernel_l1_distance({0.0, 1.0}, {2.0, 1.0}));
}

TEST_CASE("common-atom approximation bound dominates the mixture L1") {
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<WeightedAtom> target;
        std::vector<Atom> pool;
        for (int k = 0; k < 3; ++k) target.push_back({{sample_normal(rng, 0, 2), 1.0 + k}, 1.0 / 3.0});
        for (int q = 0; q < 6; ++q) pool.push_back({sample_normal(rng, 0, 2), sample_gamma(rng, 4, 2)});
        const auto r = approximate_with_common_atoms(target, pool);
        QuadratureGrid g;
        g.lo = -40;
        g.hi = 40;
        for (const auto& t : target) g.breakpoints.push_back(t.atom.mu);
        for (const auto& p : pool) g.breakpoints.push_back(p.mu);
        const double l1 = adaptive_simpson(
                              [&](double x) {
                                  double f = 0.0, h = 0.0;
                                  for (const auto& t : target) f += t.weight * kernel_density(x, t.atom);
                                  for (std::size_t q = 0; q < pool.size(); ++q)
                                      h += r.pool_weights[q] * kernel_density(x, pool[q]);
                                  return std::fabs(f - h);
                              },
                              g)
                              .value;
        CHECK(r.bound >= l1 - 1e-7);
    }
}

TEST_CASE("common-atom approximation needs a large enough pool") {
    const std::vector<WeightedAtom> target{{{0, 1}, 0.5}, {{1, 1}, 0.5}};
    CHECK_THROWS_AS(approximate_with_common_atoms(target, std::vector<Atom>{{0, 1}}), Error);
    CHECK_THROWS_AS(approximate_with_common_atoms(target, std::vector<Atom>{}), Error);
}

TEST_CASE("running averages") {
    CHECK(running_average(std::vector<double>{1.0, 3.0}) == std::vector<double>{1.0, 2.0});
    CHECK(running_average(std::vector<double>(5, 0.25)) == std::vector<double>(5, 0.25));
    Rng rng(6);
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back(sample_normal(rng, 0, 1));
    const auto r = running_average(v);
    for (std::size_t t = 0; t < v.size(); t += 37) {
        double s = 0.0;
        for (std::size_t i = 0; i <= t; ++i) s += v[i];
        CHECK(std::fabs(r[t] - s / (t + 1)) < 1e-12);
    }
    CHECK_THROWS_AS(running_average(std::vector<double>{}), Error);
}

TEST_CASE("distance trace running means match prefix means") {
    const auto cfg = validate_config(ModelConfig{});
    Rng rng(7);
    Dataset d = generate_example1(std::vector<std::size_t>{15, 10, 15}, rng);
    GibbsState st = init_state(cfg, d, rng);
    DistanceTrace tr;
    for (int s = 0; s < 40; ++s) {
        sweep(st, rng);
        tr.record(st);
    }
    CHECK(tr.size() == 40);
    CHECK(tr.pairs() == 3);
    for (std::size_t p = 0; p < 3; ++p) {
        double s = 0.0, t = 0.0;
        for (std::size_t r = 0; r < tr.size(); ++r) {
            s += tr.l2[r][p];
            t += tr.tv[r][p];
            CHECK(std::fabs(tr.l2_mean[r][p] - s / (r + 1)) < 1e-12);
            CHECK(std::fabs(tr.tv_mean[r][p] - t / (r + 1)) < 1e-12);
            CHECK(tr.tv[r][p] >= 0.0);
            CHECK(tr.tv[r][p] <= 1.0);
        }
    }
}
