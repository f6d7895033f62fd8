#include "capddp/diagnostics.hpp"

#include <algorithm>
#include <string>

#include "capddp/error.hpp"

namespace capddp {

namespace {

void require_batches(std::size_t n, std::size_t batch_size) {
    if (batch_size < 2) throw Error(ErrorCode::InvalidArgument, "batch size must be at least 2");
    if (n < batch_size) {
        throw Error(ErrorCode::InvalidArgument, "insufficient samples: " + std::to_string(n) +
                                                    " draws, need at least " + std::to_string(batch_size));
    }
}

void tally(BatchDiagnostics& d) {
    d.rejections = static_cast<std::size_t>(std::count_if(
        d.batches.begin(), d.batches.end(), [&](const AdResult& r) { return r.p_value < d.alpha; }));
    d.rejection_rate = static_cast<double>(d.rejections) / static_cast<double>(d.batches.size());
}

}  // namespace

BatchDiagnostics batch_ad_one_sample(std::span<const double> values, double mean, double variance,
                                     std::size_t batch_size, double alpha) {
    require_batches(values.size(), batch_size);
    BatchDiagnostics d;
    d.batch_size = batch_size;
    d.alpha = alpha;
    for (std::size_t start = 0; start + batch_size <= values.size(); start += batch_size) {
        d.batches.push_back(ad_one_sample_normal(values.subspan(start, batch_size), mean, variance));
    }
    tally(d);
    return d;
}

BatchDiagnostics batch_ad_two_sample(std::span<const double> a, std::span<const double> b,
                                     std::size_t batch_size, double alpha) {
    const std::size_t n = std::min(a.size(), b.size());
    require_batches(n, batch_size);
    BatchDiagnostics d;
    d.batch_size = batch_size;
    d.alpha = alpha;
    for (std::size_t start = 0; start + batch_size <= n; start += batch_size) {
        d.batches.push_back(ad_two_sample(a.subspan(start, batch_size), b.subspan(start, batch_size)));
    }
    tally(d);
    return d;
}

}  // namespace capddp
