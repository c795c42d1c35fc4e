#include "conic/distortion.hpp"

#include <array>
#include <cmath>
#include <string>

#include "conic/errors.hpp"
#include "conic/numerics.hpp"

namespace conic {

double Distortion::apply(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw DomainError("distortion: argument must lie in [0, 1], got " + std::to_string(u));
    }
    if (kind_ == Kind::Identity || gamma_ == 0.0) {
        return u;
    }
    if (u == 0.0 || u == 1.0) {
        return u;
    }
    return normal_cdf(normal_quantile(u) + gamma_);
}

Distortion Distortion::dual() const {
    if (kind_ == Kind::Identity) {
        return *this;
    }
    return Distortion(Kind::Wang, -gamma_);
}

void Distortion::validate() const {
    if (kind_ == Kind::Wang && !std::isfinite(gamma_)) {
        throw InvalidDistortion("distortion: Wang stress level must be finite");
    }
    constexpr std::array<double, 7> probes = {0.0, 1e-9, 0.1, 0.5, 0.9, 1.0 - 1e-9, 1.0};
    double prev = 0.0;
    for (double u : probes) {
        const double v = apply(u);
        if (!(v >= prev && v <= 1.0)) {
            throw InvalidDistortion("distortion: failed monotonicity spot check at u=" +
                                    std::to_string(u));
        }
        prev = v;
    }
    if (apply(0.0) != 0.0 || apply(1.0) != 1.0) {
        throw InvalidDistortion("distortion: must fix 0 and 1");
    }
}

double distorted_expectation_sorted(std::span<const double> sorted_values, const Distortion& d) {
    if (sorted_values.empty()) {
        throw DomainError("distorted_expectation_sorted: empty sample");
    }
    const auto n = static_cast<double>(sorted_values.size());
    double sum = 0.0;
    double prev = 0.0;  // f(0)
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
        const double next = d.apply(static_cast<double>(i + 1) / n);
        sum += sorted_values[i] * (next - prev);
        prev = next;
    }
    return sum;
}

}  // namespace conic
