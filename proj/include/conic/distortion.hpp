#pragma once

#include <span>

namespace conic {

/// A distortion function f: [0,1] -> [0,1], nondecreasing with f(0)=0 and f(1)=1.
///
/// Two families are supported: the identity, and the Wang transform
/// f(u) = Phi(Phi^{-1}(u) + gamma). Positive gamma inflates a distribution
/// function, moving mass toward low outcomes; negative gamma does the
/// opposite. Any finite real gamma is accepted so that duals stay in the
/// family.
class Distortion {
public:
    enum class Kind { Identity, Wang };

    static Distortion identity() { return Distortion(Kind::Identity, 0.0); }
    static Distortion wang(double gamma) { return Distortion(Kind::Wang, gamma); }

    Kind kind() const { return kind_; }
    double gamma() const { return kind_ == Kind::Wang ? gamma_ : 0.0; }

    /// f(u). The endpoints map to themselves by continuity. Throws DomainError
    /// for u outside [0, 1].
    double apply(double u) const;
    double operator()(double u) const { return apply(u); }

    /// The dual 1 - f(1 - u). For Wang(gamma) this is Wang(-gamma).
    Distortion dual() const;

    /// Throws InvalidDistortion if f is not a usable distortion: non-finite
    /// stress, or a failed spot check of monotonicity and boundary values.
    void validate() const;

    friend bool operator==(const Distortion&, const Distortion&) = default;

private:
    Distortion(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {}

    Kind kind_;
    double gamma_;
};

inline Distortion dual(const Distortion& d) { return d.dual(); }

/// Distorted expectation of the empirical law of `sorted_values` (ascending):
/// sum_i x_(i) * (f(i/n) - f((i-1)/n)). With the identity this is the mean.
/// Throws DomainError on empty input.
double distorted_expectation_sorted(std::span<const double> sorted_values, const Distortion& d);

}  // namespace conic
