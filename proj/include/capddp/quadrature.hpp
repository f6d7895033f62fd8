#ifndef CAPDDP_QUADRATURE_HPP
#define CAPDDP_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace capddp {

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;  // sum of Richardson error estimates over accepted panels
};

/// Integration range, plus interior points where the integrand has a kink
/// or jump. Each sub-interval between breakpoints is integrated separately.
struct QuadratureGrid {
    double lo = -10.0;
    double hi = 10.0;
    std::vector<double> breakpoints;
    double tolerance = 1e-10;
    int max_depth = 50;
};

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  const QuadratureGrid& grid);

}  // namespace capddp

#endif  // CAPDDP_QUADRATURE_HPP
