#include "capddp/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "capddp/error.hpp"

namespace capddp {

namespace {

struct Panel {
    double a, b, fa, fm, fb, whole;
};

void integrate_panel(const std::function<double(double)>& f, const Panel& p, double tol,
                     int depth, QuadratureResult& acc) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        acc.value += left + right + delta / 15.0;
        acc.error_bound += std::abs(delta) / 15.0;
        return;
    }
    integrate_panel(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, acc);
    integrate_panel(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  const QuadratureGrid& grid) {
    if (!(grid.hi > grid.lo)) throw Error(ErrorCode::InvalidArgument, "quadrature range is empty");
    std::vector<double> cuts{grid.lo};
    for (double b : grid.breakpoints) {
        if (b > grid.lo && b < grid.hi) cuts.push_back(b);
    }
    cuts.push_back(grid.hi);
    std::sort(cuts.begin(), cuts.end());

    // Pre-split each interval into 16 panels so narrow features are not
    // skipped by the first Simpson estimate.
    constexpr int kInitialPanels = 16;
    const double total_width = grid.hi - grid.lo;
    QuadratureResult acc;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s];
        const double b = cuts[s + 1];
        const double h = (b - a) / kInitialPanels;
        for (int q = 0; q < kInitialPanels; ++q) {
            const double pa = a + q * h;
            const double pb = q + 1 == kInitialPanels ? b : pa + h;
            const double fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
            const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
            const double tol = grid.tolerance * (pb - pa) / total_width;
            integrate_panel(f, {pa, pb, fa, fm, fb, whole}, tol, grid.max_depth, acc);
        }
    }
    return acc;
}

}  // namespace capddp
