// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and seeds
// are fixed here and not tuned against results.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ad_oracle.hpp"
#include "capddp/anderson_darling.hpp"
#include "capddp/benchmark.hpp"
#include "capddp/diagnostics.hpp"
#include "capddp/distances.hpp"
#include "capddp/experiments.hpp"
#include "capddp/gibbs.hpp"
#include "capddp/kernel.hpp"
#include "capddp/stick_breaking.hpp"

using namespace capddp;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

template <typename... T>
std::string fmtn(const char* f, T... a) {
    char b[512];
    std::snprintf(b, sizeof b, f, a...);
    return b;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// standard error of the mean from non-overlapping batch means
double batch_se(const std::vector<double>& v, std::size_t batches = 50) {
    const std::size_t bs = v.size() / batches;
    const double m = mean_of(v);
    double s2 = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
        double bm = 0.0;
        for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) bm += v[i];
        bm /= static_cast<double>(bs);
        s2 += (bm - m) * (bm - m);
    }
    return std::sqrt(s2 / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

WeightVector random_weights(Rng& rng, std::size_t k, double c = 1.0) {
    StickSequence s;
    s.extend_from_prior(k, c, rng);
    return s.weight_vector();
}

ValidatedConfig example1_config(Variant v) {
    ModelConfig mc;
    mc.dirichlet_hyper = dirichlet_hyper_diag(3, 3, 1);
    mc.seed = kSeed;
    mc.variant = v;
    return validate_config(mc);
}

ExperimentSpec example1_spec(std::size_t recorded) {
    ExperimentSpec s;
    s.generator = Generator::Example1;
    s.sizes = {80, 30, 80};
    s.burn_in = 2000;
    s.sweeps = s.burn_in + recorded;
    return s;
}

// desk-scale example-1 runs shared by the distance and cluster criteria
const RunArtifacts& desk_run(Variant v) {
    if (v == Variant::CommonAtoms) {
        static const RunArtifacts common = run_experiment(example1_config(v), example1_spec(5000));
        return common;
    }
    static const RunArtifacts uncommon = run_experiment(example1_config(v), example1_spec(5000));
    return uncommon;
}

Outcome stick_identity() {
    Rng rng(kSeed);
    double worst = 0.0;
    for (int r = 0; r < 10000; ++r) {
        const std::size_t k = 1 + static_cast<std::size_t>(sample_uniform(rng) * 200.0);
        const double c = sample_uniform(rng, 0.1, 20.0);
        const WeightVector w = random_weights(rng, k, c);
        double s = w.tail_mass;
        for (double x : w.w) s += x;
        worst = std::max(worst, std::fabs(s - 1.0));
    }
    return {worst < 1e-12, fmt("max |sum w + tail - 1| = %.3g", worst)};
}

Outcome cancellation() {
    Rng rng(kSeed);
    double worst = 0.0;
    for (int r = 0; r < 1000; ++r) {
        const std::size_t k = 1 + static_cast<std::size_t>(sample_uniform(rng) * 60.0);
        WeightVector a = random_weights(rng, k), b = random_weights(rng, k);
        a.w.push_back(a.tail_mass);
        b.w.push_back(b.tail_mass);
        double sq = 0.0, cross = 0.0;
        for (std::size_t j = 0; j < a.w.size(); ++j) {
            const double dj = a.w[j] - b.w[j];
            sq += dj * dj;
            for (std::size_t l = j + 1; l < a.w.size(); ++l) cross += dj * (a.w[l] - b.w[l]);
        }
        worst = std::max(worst, std::fabs(sq + 2.0 * cross));
    }
    return {worst < 1e-10, fmt("max |S| = %.3g", worst)};
}

Outcome l2_equality() {
    Rng rng(kSeed);
    const std::size_t K = 20;
    std::vector<double> wa(K), wb(K);
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        wa[k] = sample_uniform(rng);
        wb[k] = sample_uniform(rng);
        sa += wa[k];
        sb += wb[k];
    }
    for (std::size_t k = 0; k < K; ++k) {
        wa[k] /= sa;
        wb[k] /= sb;
    }
    const double ss = l2_conditional(wa, wb);

    // mu ~ N(0, 1), lambda fixed at 1
    const AtomSampler draw = [](Rng& r) { return Atom{sample_normal(r, 0.0, 1.0), 1.0}; };
    QuadratureGrid grid;
    grid.lo = -15.0;
    grid.hi = 15.0;
    grid.tolerance = 1e-11;
    std::vector<double> d2;
    for (int t = 0; t < 2000; ++t) {
        std::vector<Atom> atoms(K);
        for (auto& a : atoms) a = draw(rng);
        auto mix = [&atoms](const std::vector<double>& w) {
            return [&atoms, w](double x) {
                double f = 0.0;
                for (std::size_t k = 0; k < w.size(); ++k) f += w[k] * kernel_density(x, atoms[k]);
                return f;
            };
        };
        d2.push_back(exact_l2_quadrature(mix(wa), mix(wb), grid).value);
    }
    double var = 0.0;
    const double m = mean_of(d2);
    for (double x : d2) var += (x - m) * (x - m);
    const double se_d2 = std::sqrt(var / (d2.size() - 1.0) / d2.size());

    const double alpha = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
    const AlphaBetaEstimate ab = alpha_beta_mc(draw, 200000, rng);
    const double predicted = (alpha - ab.beta) * ss;
    const double se = std::sqrt(se_d2 * se_d2 + ss * ab.beta_se * ss * ab.beta_se);
    const double z = (m - predicted) / se;
    return {std::fabs(z) < 3.0,
            fmtn("MC mean %.6g vs (alpha-beta) sum d^2 = %.6g, z = %.2f", m, predicted, z)};
}

Outcome closed_form_l2() {
    QuadratureGrid g1;
    g1.lo = -60.0;
    g1.hi = 60.0;
    g1.breakpoints = {-2.0, 2.0};
    auto f1 = [](std::size_t j) { return [j](double x) { return example1_density(j, x); }; };
    const double d12 = exact_l2_quadrature(f1(0), f1(1), g1).value;
    const double d13 = exact_l2_quadrature(f1(0), f1(2), g1).value;
    const double d23 = exact_l2_quadrature(f1(1), f1(2), g1).value;
    QuadratureGrid g2;
    g2.lo = -40.0;
    g2.hi = 50.0;
    auto f2 = [](std::size_t j) { return [j](double x) { return example2_density(j, x); }; };
    double worst2 = 0.0, e2 = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            e2 = exact_l2_quadrature(f2(a), f2(b), g2).value;
            worst2 = std::max(worst2, std::fabs(e2 - 0.125));
        }
    }
    const bool ok = std::fabs(d12 - 0.0346) < 5e-4 && std::fabs(d23 - 0.0346) < 5e-4 &&
                    std::fabs(d13 - 0.1093) < 5e-4 && worst2 < 2e-3;
    return {ok, fmtn("ex1 d12 %.6f d23 %.6f d13 %.6f; ex2 %.6f", d12, d23, d13, e2)};
}

Outcome tv_brute_force() {
    Rng rng(kSeed);
    double worst = 0.0;
    for (int r = 0; r < 200; ++r) {
        const std::size_t k = 1 + r % 12;
        const WeightVector a = random_weights(rng, k), b = random_weights(rng, k);
        std::vector<double> d(k + 1);
        for (std::size_t i = 0; i < k; ++i) d[i] = a.w[i] - b.w[i];
        d[k] = a.tail_mass - b.tail_mass;
        double sup = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << (k + 1)); ++mask) {
            double s = 0.0;
            for (std::size_t i = 0; i <= k; ++i)
                if (mask >> i & 1) s += d[i];
            sup = std::max(sup, std::fabs(s));
        }
        worst = std::max(worst, std::fabs(tv_distance(a, b) - sup));
    }
    // agreement to rounding of a sum of at most 13 terms
    return {worst <= 1e-15, fmt("max |tv - sup_A| = %.3g", worst)};
}

Outcome geweke() {
    ModelConfig mc;
    mc.m = 2;
    mc.c = 1.0;
    mc.s = 1.0;
    mc.eps = 2.0;
    mc.dirichlet_hyper = {2, 1, 1, 3};
    mc.seed = kSeed;
    const auto cfg = validate_config(mc);
    Rng rng(kSeed);
    Dataset d;
    d.groups = {{0.1, -0.3, 0.5}, {1.0, 0.2, -1.0}};
    GibbsState st = init_state(cfg, d, rng);
    const int cycles = 20000, burn = 1000;
    std::vector<double> p11, z111;
    for (int t = 0; t < cycles + burn; ++t) {
        sweep(st, rng);
        // redraw the data given the parameters
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t i = 0; i < 3; ++i) {
                const Atom& a = st.atom(j, st.latent.delta[j][i], st.latent.d[j][i]);
                st.data.groups[j][i] = sample_normal(rng, a.mu, 1.0 / std::sqrt(a.lambda));
            }
        }
        if (t >= burn) {
            p11.push_back(st.probs(0, 0));
            z111.push_back(st.sticks.at(0, 0).fraction(0));
        }
    }
    const double zp = (mean_of(p11) - 2.0 / 3.0) / batch_se(p11);
    const double zz = (mean_of(z111) - 1.0 / (1.0 + mc.c)) / batch_se(z111);
    return {std::fabs(zp) < 4.0 && std::fabs(zz) < 4.0,
            fmtn("p11 %.4f (z %.2f), z111 %.4f (z %.2f)", mean_of(p11), zp, mean_of(z111), zz)};
}

Outcome desk_distances() {
    const DistanceTrace& t = desk_run(Variant::CommonAtoms).distances;
    const auto& mean = t.l2_mean.back();
    const double d12 = mean[0], d13 = mean[1], d23 = mean[2];
    const double sym = std::fabs(d12 - d23) / d12;
    return {d13 > d12 && sym < 0.25,
            fmtn("mean d12 %.4f d13 %.4f d23 %.4f, |d12-d23|/d12 = %.3f", d12, d13, d23, sym)};
}

Outcome predictive_calibration() {
    const RunArtifacts a = run_experiment(example1_config(Variant::CommonAtoms), example1_spec(10000));
    const std::vector<double> x = a.predictive_series(1);
    const BatchDiagnostics d = batch_ad_one_sample(x, 0.0, 2.0, 100, 0.05);
    return {d.batches.size() >= 100 && d.rejection_rate < 0.60,
            fmtn("%zu of %zu batches rejected (%.1f%%)", d.rejections, d.batches.size(), 100.0 * d.rejection_rate)};
}

Outcome delta_t() {
    Rng rng(kSeed);
    ExperimentSpec spec;
    const Dataset data = make_dataset(spec, rng);
    const BenchmarkReport r = benchmark_delta_t(example1_config(Variant::CommonAtoms), data, 500, 0);
    return {r.common.median_seconds < r.uncommon.median_seconds,
            fmtn("median sweep CAPDDP %.1f us, PDDP %.1f us", 1e6 * r.common.median_seconds,
                 1e6 * r.uncommon.median_seconds)};
}

Outcome truncation_law() {
    Rng rng(kSeed);
    const double u_star = 0.05, c = 1.0;
    const int n = 10000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        StickSequence seq;
        const double v = static_cast<double>(truncation_index(seq, u_star, c, rng)) - 1.0;
        s += v;
        s2 += v * v;
    }
    const double m = s / n;
    const double se = std::sqrt((s2 / n - m * m) / (n - 1.0));
    const double target = c * std::log(1.0 / u_star);
    const double z = (m - target) / se;
    return {std::fabs(z) < 3.0, fmtn("mean %.4f vs %.4f, z = %.2f", m, target, z)};
}

Outcome ad_oracles() {
    double worst = 0.0;
    std::size_t cases = 0;
    const std::vector<double> a2{0.0, 1.0, 2.5};
    for (std::size_t nx = 2; nx <= 6; ++nx) {
        for (std::size_t ny = 2; ny <= 6; ++ny) {
            oracle::for_each_multiset(a2, nx, [&](const std::vector<double>& x) {
                oracle::for_each_multiset(a2, ny, [&](const std::vector<double>& y) {
                    if (x.front() == x.back() && y.front() == y.back() && x.front() == y.front()) return;
                    const double want = oracle::ad_two_sample(x, y);
                    worst = std::max(worst, std::fabs(ad_two_sample(x, y).statistic - want) /
                                                std::max(1.0, std::fabs(want)));
                    ++cases;
                });
            });
        }
    }
    const std::vector<double> a1{-1.5, -0.5, 0.0, 0.7, 2.1};
    for (std::size_t n = 2; n <= 6; ++n) {
        oracle::for_each_multiset(a1, n, [&](const std::vector<double>& x) {
            const double want = oracle::ad_one_sample(x, 0.2, 1.7);
            worst = std::max(worst, std::fabs(ad_one_sample_normal(x, 0.2, 1.7).statistic - want) /
                                        std::max(1.0, std::fabs(want)));
            ++cases;
        });
    }
    return {worst <= 1e-12, fmtn("%zu cases, max relative error %.3g", cases, worst)};
}

Outcome cluster_direction() {
    const RunArtifacts& a = desk_run(Variant::CommonAtoms);
    const RunArtifacts& b = desk_run(Variant::UncommonAtoms);
    const auto ga = a.mean_group_clusters(), gb = b.mean_group_clusters();
    return {a.mean_clusters() > b.mean_clusters(),
            fmtn("CAPDDP %.3f vs PDDP %.3f; per group %.3f/%.3f/%.3f vs %.3f/%.3f/%.3f", a.mean_clusters(),
                 b.mean_clusters(), ga[0], ga[1], ga[2], gb[0], gb[1], gb[2])};
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> all{
        {1, "stick weights plus tail sum to one", 1.0, stick_identity},
        {2, "cross terms cancel the squared differences", 1.0, cancellation},
        {3, "expected L2 equals (alpha-beta) sum of squared differences", 60.0, l2_equality},
        {4, "closed-form L2 constants by quadrature", 5.0, closed_form_l2},
        {5, "total variation equals sup over index subsets", 5.0, tv_brute_force},
        {6, "Geweke joint-distribution test", 300.0, geweke},
        {7, "example-1 distance ordering and symmetry", 600.0, desk_distances},
        {8, "example-1 group-2 predictive calibration", 600.0, predictive_calibration},
        {9, "CAPDDP sweep faster than PDDP", 300.0, delta_t},
        {10, "truncation index minus one has mean c log(1/u*)", 10.0, truncation_law},
        {11, "Anderson-Darling statistics match brute force", 10.0, ad_oracles},
        {12, "CAPDDP mean cluster count exceeds PDDP", 900.0, cluster_direction},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s  [%2d] %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", over time");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
