#ifndef CAPDDP_ANDERSON_DARLING_HPP
#define CAPDDP_ANDERSON_DARLING_HPP

#include <cstddef>
#include <span>

namespace capddp {

struct AdResult {
    double statistic = 0.0;     // A^2 (two-sample: midrank A^2_akN of Scholz & Stephens)
    double standardized = 0.0;  // two-sample only: (A^2 - 1) / sigma_N
    double p_value = 1.0;
};

/// Two-sample Anderson-Darling test, midrank form so ties are handled. The
/// p-value interpolates log significance against the Scholz-Stephens k = 2
/// critical values and is clipped to [0.001, 0.25] outside the tabulated range.
/// Needs at least 2 observations per sample and a pooled sample that is not
/// all tied.
AdResult ad_two_sample(std::span<const double> x, std::span<const double> y);

/// One-sample A^2 against a fully specified N(mean, variance). p-value from
/// Marsaglia & Marsaglia (2004): the asymptotic distribution plus the
/// finite-n correction.
AdResult ad_one_sample_normal(std::span<const double> x, double mean, double variance);

/// P(A^2 < z) in the n -> infinity limit.
double ad_asymptotic_cdf(double z);

/// P(A^2 < z) for sample size n.
double ad_cdf(std::size_t n, double z);

}  // namespace capddp

#endif  // CAPDDP_ANDERSON_DARLING_HPP
