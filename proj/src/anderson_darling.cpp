#include "capddp/anderson_darling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "capddp/error.hpp"

namespace capddp {

namespace {

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double errfix(double n, double x) {
    if (x > 0.8) {
        return (-130.2137 +
                (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x) /
               n;
    }
    const double c = 0.01265 + 0.1757 / n;
    if (x < c) {
        double t = x / c;
        t = std::sqrt(t) * (1.0 - t) * (49.0 * t - 102.0);
        return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n;
    }
    double t = (x - c) / (0.8 - c);
    t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t;
    return t * (0.04213 + 0.01365 / n) / n;
}

// Least-squares quadratic through (x_i, y_i); returns c0 + c1 x + c2 x^2 coefficients.
std::array<double, 3> fit_quadratic(std::span<const double> x, std::span<const double> y) {
    double s[5] = {0, 0, 0, 0, 0};
    double t[3] = {0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (int e = 0; e < 5; ++e) {
            s[e] += p;
            if (e < 3) t[e] += p * y[i];
            p *= x[i];
        }
    }
    // Normal equations, solved by Cramer's rule (3x3, well conditioned here).
    const double a[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    auto det3 = [](const double mtx[3][3]) {
        return mtx[0][0] * (mtx[1][1] * mtx[2][2] - mtx[1][2] * mtx[2][1]) -
               mtx[0][1] * (mtx[1][0] * mtx[2][2] - mtx[1][2] * mtx[2][0]) +
               mtx[0][2] * (mtx[1][0] * mtx[2][1] - mtx[1][1] * mtx[2][0]);
    };
    const double d = det3(a);
    std::array<double, 3> coef{};
    for (int c = 0; c < 3; ++c) {
        double m[3][3];
        for (int r = 0; r < 3; ++r) {
            for (int q = 0; q < 3; ++q) m[r][q] = q == c ? t[r] : a[r][q];
        }
        coef[c] = det3(m) / d;
    }
    return coef;
}

}  // namespace

double ad_asymptotic_cdf(double z) {
    if (z <= 0.0) return 0.0;
    if (z < 2.0) {
        return std::exp(-1.2337141 / z) / std::sqrt(z) *
               (2.00012 +
                (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) *
                    z);
    }
    return std::exp(
        -std::exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z));
}

double ad_cdf(std::size_t n, double z) {
    const double x = ad_asymptotic_cdf(z);
    return std::clamp(x + errfix(static_cast<double>(n), x), 0.0, 1.0);
}

AdResult ad_one_sample_normal(std::span<const double> x, double mean, double variance) {
    if (!(variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "variance must be positive");
    if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "one-sample AD needs at least 2 points");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double sd = std::sqrt(variance);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = normal_cdf(sorted[i], mean, sd);
        const double hi = normal_cdf(sorted[n - 1 - i], mean, sd);
        // Guard the logs against CDF values that rounded to 0 or 1.
        const double log_lo = std::log(std::max(lo, 1e-300));
        const double log_hi = std::log(std::max(1.0 - hi, 1e-300));
        sum += static_cast<double>(2 * i + 1) * (log_lo + log_hi);
    }
    AdResult r;
    r.statistic = -static_cast<double>(n) - sum / static_cast<double>(n);
    r.standardized = r.statistic;
    r.p_value = 1.0 - ad_cdf(n, r.statistic);
    return r;
}

AdResult ad_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || y.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "two-sample AD needs at least 2 points per sample");
    }
    std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<double> pooled;
    pooled.reserve(xs.size() + ys.size());
    std::merge(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(pooled));
    if (pooled.front() == pooled.back()) {
        throw Error(ErrorCode::InvalidArgument, "two-sample AD on an all-tied pooled sample");
    }

    const double N = static_cast<double>(pooled.size());
    const std::array<const std::vector<double>*, 2> samples{&xs, &ys};
    std::array<std::size_t, 2> cursor{0, 0};
    std::array<double, 2> below{0.0, 0.0};  // count of sample values strictly below z*_j
    std::array<double, 2> inner{0.0, 0.0};
    double pooled_below = 0.0;

    std::size_t idx = 0;
    while (idx < pooled.size()) {
        const double z = pooled[idx];
        std::size_t run = idx;
        while (run < pooled.size() && pooled[run] == z) ++run;
        const double lj = static_cast<double>(run - idx);
        const double baj = pooled_below + 0.5 * lj;  // B_j - l_j / 2
        const double denom = baj * (N - baj) - N * lj / 4.0;
        for (int s = 0; s < 2; ++s) {
            const auto& v = *samples[s];
            std::size_t c = cursor[s];
            while (c < v.size() && v[c] == z) ++c;
            const double fij = static_cast<double>(c - cursor[s]);
            const double maij = below[s] + 0.5 * fij;  // M_ij - f_ij / 2
            const double ni = static_cast<double>(v.size());
            const double num = N * maij - ni * baj;
            if (denom > 0.0) inner[s] += lj / N * num * num / denom;
            below[s] += fij;
            cursor[s] = c;
        }
        pooled_below += lj;
        idx = run;
    }

    double a2 = 0.0;
    for (int s = 0; s < 2; ++s) a2 += inner[s] / static_cast<double>(samples[s]->size());
    a2 *= (N - 1.0) / N;

    // Variance of A^2 under H0 (Scholz & Stephens 1987), k = 2.
    const double k = 2.0;
    const double H = 1.0 / static_cast<double>(xs.size()) + 1.0 / static_cast<double>(ys.size());
    const std::size_t n_int = pooled.size();
    double h = 0.0;
    for (std::size_t i = 1; i < n_int; ++i) h += 1.0 / static_cast<double>(i);
    double g = 0.0;
    for (std::size_t i = 1; i + 1 < n_int; ++i) {
        double inner_sum = 0.0;
        for (std::size_t j = i + 1; j < n_int; ++j) inner_sum += 1.0 / static_cast<double>(j);
        g += inner_sum / (N - static_cast<double>(i));
    }
    const double a = (4 * g - 6) * (k - 1) + (10 - 6 * g) * H;
    const double b = (2 * g - 4) * k * k + 8 * h * k + (2 * g - 14 * h - 4) * H - 8 * h + 4 * g - 6;
    const double c = (6 * h + 2 * g - 2) * k * k + (4 * h - 4 * g + 6) * k + (2 * h - 6) * H + 4 * h;
    const double d = (2 * h + 6) * k * k - 4 * h * k;
    const double sigmasq =
        (a * N * N * N + b * N * N + c * N + d) / ((N - 1.0) * (N - 2.0) * (N - 3.0));

    AdResult r;
    r.statistic = a2;
    r.standardized = (a2 - (k - 1)) / std::sqrt(sigmasq);

    static constexpr std::array<double, 7> b0{0.675, 1.281, 1.645, 1.96, 2.326, 2.573, 3.085};
    static constexpr std::array<double, 7> b1{-0.245, 0.25, 0.678, 1.149, 1.822, 2.364, 3.615};
    static constexpr std::array<double, 7> b2{-0.105, -0.305, -0.362, -0.391, -0.396, -0.345, -0.154};
    static constexpr std::array<double, 7> sig{0.25, 0.1, 0.05, 0.025, 0.01, 0.005, 0.001};
    std::array<double, 7> critical{}, log_sig{};
    for (std::size_t i = 0; i < 7; ++i) {
        critical[i] = b0[i] + b1[i] + b2[i];  // m = k - 1 = 1
        log_sig[i] = std::log(sig[i]);
    }
    if (r.standardized < critical.front()) {
        r.p_value = sig.front();
    } else if (r.standardized > critical.back()) {
        r.p_value = sig.back();
    } else {
        const auto coef = fit_quadratic(critical, log_sig);
        const double t = r.standardized;
        r.p_value = std::exp(coef[0] + coef[1] * t + coef[2] * t * t);
    }
    return r;
}

}  // namespace capddp
