#include "localflow/costs.hpp"

#include "localflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace localflow {

namespace {

// log cosh(x) without overflow.
double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

// sech^2(x) = 4 e^{-2|x|} / (1 + e^{-2|x|})^2
double sech2(double x) {
    const double e = std::exp(-2.0 * std::abs(x));
    return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

CostModel::CostModel(Params params) : params_(params) {
    if (const auto* q = std::get_if<QuadraticCost>(&params_)) {
        if (!std::isfinite(q->a) || !std::isfinite(q->c) || q->a <= 0.0)
            throw InvalidInput("quadratic cost needs finite a > 0 and finite c");
        alpha_ = beta_ = q->a;
    } else {
        const auto& l = std::get<LogCoshCost>(params_);
        if (!std::isfinite(l.alpha) || !std::isfinite(l.beta) || l.alpha <= 0.0 || l.beta < l.alpha)
            throw InvalidInput("log-cosh cost needs 0 < alpha <= beta < inf");
        alpha_ = l.alpha;
        beta_ = l.beta;
    }
}

CostValue CostModel::eval(double x) const {
    if (!std::isfinite(x)) throw InvalidInput("cost evaluated at a non-finite point");
    if (const auto* q = std::get_if<QuadraticCost>(&params_)) {
        return {0.5 * q->a * x * x + q->c * x, q->a * x + q->c, q->a};
    }
    const auto& l = std::get<LogCoshCost>(params_);
    const double extra = l.beta - l.alpha;
    return {0.5 * l.alpha * x * x + extra * log_cosh(x), l.alpha * x + extra * std::tanh(x),
            l.alpha + extra * sech2(x)};
}

double CostModel::gradient(double x) const { return eval(x).f1; }

double CostModel::curvature(double x) const { return eval(x).f2; }

double CostModel::inverse_gradient(double y) const {
    if (!std::isfinite(y)) throw InvalidInput("inverse_gradient of a non-finite value");
    if (const auto* q = std::get_if<QuadraticCost>(&params_)) return (y - q->c) / q->a;

    // f' is increasing with slope in [alpha, beta]; grow a bracket, then
    // Newton steps that fall outside it are replaced by bisection.
    const double tol = 1e-12 * std::max(1.0, std::abs(y));
    double lo = y / beta_ - 1.0;
    double hi = y / alpha_ + 1.0;
    for (double width = 1.0; gradient(lo) > y; width *= 2.0) lo -= width;
    for (double width = 1.0; gradient(hi) < y; width *= 2.0) hi += width;

    double x = std::clamp(y / (0.5 * (alpha_ + beta_)), lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        const CostValue v = eval(x);
        const double r = v.f1 - y;
        if (std::abs(r) <= tol) return x;
        if (r > 0.0)
            hi = x;
        else
            lo = x;
        double next = x - r / v.f2;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) return x;
        x = next;
    }
    return x;
}

double condition_number(std::span<const CostModel> costs) {
    if (costs.empty()) throw InvalidInput("condition_number of an empty cost list");
    double min_alpha = costs.front().alpha();
    double max_beta = costs.front().beta();
    for (const CostModel& c : costs) {
        min_alpha = std::min(min_alpha, c.alpha());
        max_beta = std::max(max_beta, c.beta());
    }
    return max_beta / min_alpha;
}

}  // namespace localflow
