#include "capddp/stick_breaking.hpp"

#include <string>

#include "capddp/error.hpp"

namespace capddp {

namespace {

void check_fraction(double z) {
    if (!(z > 0.0 && z < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "stick fraction " + std::to_string(z) + " outside (0,1)");
    }
}

}  // namespace

WeightVector weights_from_sticks(std::span<const double> z) {
    WeightVector out;
    out.w.reserve(z.size());
    double remaining = 1.0;
    for (double zk : z) {
        check_fraction(zk);
        out.w.push_back(zk * remaining);
        remaining *= 1.0 - zk;
    }
    out.tail_mass = remaining;
    return out;
}

void slice_set_into(std::span<const double> w, double tail_mass, double u,
                    std::vector<std::size_t>& out) {
    if (tail_mass > u) {
        throw Error(ErrorCode::State,
                    "slice set requested with tail mass " + std::to_string(tail_mass) +
                        " above slice " + std::to_string(u));
    }
    out.clear();
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (u < w[k]) out.push_back(k);
    }
}

std::vector<std::size_t> slice_set(const WeightVector& w, double u) {
    std::vector<std::size_t> out;
    slice_set_into(w.w, w.tail_mass, u, out);
    return out;
}

void StickSequence::push(double z) {
    check_fraction(z);
    z_.push_back(z);
    weights_.w.push_back(z * weights_.tail_mass);
    weights_.tail_mass *= 1.0 - z;
}

void StickSequence::extend_from_prior(std::size_t n, double c, Rng& rng) {
    while (z_.size() < n) {
        double z = sample_beta(rng, 1.0, c);
        // Clamp into the open interval; beta draws can round onto an endpoint.
        if (z <= 0.0) z = 1e-300;
        if (z >= 1.0) z = 1.0 - 1e-16;
        push(z);
    }
}

void StickSequence::truncate(std::size_t n) {
    if (n >= z_.size()) return;
    z_.resize(n);
    weights_ = weights_from_sticks(z_);
}

void StickSequence::assign(std::vector<double> z) {
    weights_ = weights_from_sticks(z);
    z_ = std::move(z);
}

std::size_t truncation_index(StickSequence& sticks, double u_star, double c,
                             Rng& rng, std::size_t cap) {
    if (!(u_star > 0.0 && u_star < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "u* must lie in (0,1)");
    }
    double tail = 1.0;
    for (std::size_t n = 1;; ++n) {
        if (n > cap) {
            throw Error(ErrorCode::Numerical,
                        "truncation exceeded " + std::to_string(cap) +
                            " sticks (u* = " + std::to_string(u_star) + ")");
        }
        if (sticks.size() < n) sticks.extend_from_prior(n, c, rng);
        tail *= 1.0 - sticks.fraction(n - 1);
        if (tail < u_star) return n;
    }
}

}  // namespace capddp
