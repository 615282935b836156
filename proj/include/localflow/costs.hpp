#pragma once

#include <span>
#include <variant>

namespace localflow {

/// f(x) = (a/2) x^2 + c x.
struct QuadraticCost {
    double a = 1.0;
    double c = 0.0;
};

/// f(x) = (alpha/2) x^2 + (beta - alpha) log cosh(x); f'' ranges over (alpha, beta].
struct LogCoshCost {
    double alpha = 1.0;
    double beta = 2.0;
};

struct CostValue {
    double f;
    double f1;
    double f2;
};

/// Strongly convex, twice differentiable scalar edge cost with certified
/// curvature bounds alpha <= f'' <= beta on all of R.
class CostModel {
public:
    using Params = std::variant<QuadraticCost, LogCoshCost>;

    /// Throws InvalidInput unless the curvature bounds are finite and positive.
    explicit CostModel(Params params);

    static CostModel quadratic(double a, double c = 0.0) { return CostModel(QuadraticCost{a, c}); }
    static CostModel logcosh(double alpha, double beta) { return CostModel(LogCoshCost{alpha, beta}); }

    /// Value, first and second derivative. Throws InvalidInput for non-finite x.
    CostValue eval(double x) const;
    double gradient(double x) const;
    double curvature(double x) const;

    /// The unique x with f'(x) = y.
    double inverse_gradient(double y) const;

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    bool is_quadratic() const noexcept { return std::holds_alternative<QuadraticCost>(params_); }
    const Params& params() const noexcept { return params_; }

private:
    Params params_;
    double alpha_;
    double beta_;
};

/// Q = max beta / min alpha over the list. Throws InvalidInput on an empty list.
double condition_number(std::span<const CostModel> costs);

}  // namespace localflow
