#include "localflow/costs.hpp"
#include "localflow/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace localflow;

TEST_CASE("eval at hand-checked points") {
    CostValue v = CostModel::quadratic(1.0, 0.0).eval(2.0);
    CHECK(v.f == doctest::Approx(2.0));
    CHECK(v.f1 == doctest::Approx(2.0));
    CHECK(v.f2 == doctest::Approx(1.0));

    v = CostModel::quadratic(3.0, 1.0).eval(0.0);
    CHECK(v.f == 0.0);
    CHECK(v.f1 == 1.0);
    CHECK(v.f2 == 3.0);

    v = CostModel::logcosh(1.0, 2.0).eval(0.0);
    CHECK(v.f == 0.0);
    CHECK(v.f1 == 0.0);
    CHECK(v.f2 == doctest::Approx(2.0));
}

TEST_CASE("invalid parameters and inputs") {
    CHECK_THROWS_AS(CostModel::quadratic(0.0), InvalidInput);
    CHECK_THROWS_AS(CostModel::quadratic(-1.0), InvalidInput);
    CHECK_THROWS_AS(CostModel::logcosh(2.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(CostModel::logcosh(0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(CostModel::quadratic(1.0).eval(std::numeric_limits<double>::infinity()), InvalidInput);
    CHECK_THROWS_AS(CostModel::quadratic(1.0).eval(std::nan("")), InvalidInput);
}

TEST_CASE("inverse gradient examples") {
    CHECK(CostModel::quadratic(2.0).inverse_gradient(4.0) == doctest::Approx(2.0));
    CHECK(CostModel::quadratic(1.0, 1.0).inverse_gradient(0.0) == doctest::Approx(-1.0));
    CHECK(CostModel::logcosh(1.0, 2.0).inverse_gradient(0.0) == doctest::Approx(0.0));
}

TEST_CASE("condition number") {
    std::vector<CostModel> unit(4, CostModel::quadratic(1.0));
    CHECK(condition_number(unit) == 1.0);
    std::vector<CostModel> mixed{CostModel::logcosh(1.0, 2.0), CostModel::logcosh(2.0, 3.0)};
    CHECK(condition_number(mixed) == doctest::Approx(3.0));
    std::vector<CostModel> single{CostModel::logcosh(1.0, 2.0)};
    CHECK(condition_number(single) == doctest::Approx(2.0));
    CHECK_THROWS_AS(condition_number(std::vector<CostModel>{}), InvalidInput);
}

TEST_CASE("derivatives, curvature bounds and inverse on a grid") {
    const std::vector<CostModel> models{CostModel::quadratic(0.7, -0.3), CostModel::logcosh(1.0, 2.0),
                                        CostModel::logcosh(0.25, 4.0), CostModel::logcosh(1.0, 1.0)};
    const double h = 1e-5;
    for (const CostModel& m : models) {
        for (int i = 0; i <= 400; ++i) {
            const double x = -10.0 + 0.05 * i;
            const CostValue v = m.eval(x);
            CAPTURE(x);
            // second derivative against central differences of the first
            const double fd2 = (m.gradient(x + h) - m.gradient(x - h)) / (2.0 * h);
            CHECK(std::abs(v.f2 - fd2) <= 1e-6 * (1.0 + std::abs(v.f2)));
            // first derivative against central differences of the value
            const double fd1 = (m.eval(x + h).f - m.eval(x - h).f) / (2.0 * h);
            CHECK(std::abs(v.f1 - fd1) <= 1e-5 * (1.0 + std::abs(v.f1)));
            CHECK(v.f2 >= m.alpha());
            CHECK(v.f2 <= m.beta());
            CHECK(std::abs(m.inverse_gradient(v.f1) - x) <= 1e-10);
            const double y = v.f1;
            CHECK(std::abs(m.gradient(m.inverse_gradient(y)) - y) <= 1e-12 * std::max(1.0, std::abs(y)));
        }
    }
}

TEST_CASE("log-cosh stays finite far from the origin") {
    const CostModel m = CostModel::logcosh(1.0, 3.0);
    const CostValue v = m.eval(800.0);
    CHECK(std::isfinite(v.f));
    CHECK(v.f1 == doctest::Approx(800.0 + 2.0));
    CHECK(v.f2 == doctest::Approx(1.0));
    CHECK(m.inverse_gradient(1e6) == doctest::Approx(1e6 - 2.0));
}
