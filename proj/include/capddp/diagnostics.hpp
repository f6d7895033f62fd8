#ifndef CAPDDP_DIAGNOSTICS_HPP
#define CAPDDP_DIAGNOSTICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "capddp/anderson_darling.hpp"

namespace capddp {

// Consecutive predictive draws are cut into batches of `batch_size`
// (a trailing partial batch is dropped) and each batch is tested.
struct BatchDiagnostics {
    std::size_t batch_size = 100;
    double alpha = 0.05;
    std::vector<AdResult> batches;
    std::size_t rejections = 0;
    double rejection_rate = 0.0;
};

BatchDiagnostics batch_ad_one_sample(std::span<const double> values, double mean, double variance,
                                     std::size_t batch_size = 100, double alpha = 0.05);

/// Batch b of `a` is tested against batch b of `b`; the shorter series sets
/// the batch count.
BatchDiagnostics batch_ad_two_sample(std::span<const double> a, std::span<const double> b,
                                     std::size_t batch_size = 100, double alpha = 0.05);

}  // namespace capddp

#endif  // CAPDDP_DIAGNOSTICS_HPP
