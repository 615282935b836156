#pragma once

#include <stdexcept>
#include <string>

namespace localflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied something the model does not admit: unbalanced flow,
/// disconnected graph, malformed file, support outside a subgraph.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numerical routine did not reach its tolerance within its budget.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Raised by random-walk series routines when the walk has lambda >= 1.
class NonContractiveWalk : public Error {
public:
    explicit NonContractiveWalk(double lambda)
        : Error("random walk is not contractive (lambda = " + std::to_string(lambda) + ")"),
          lambda_(lambda) {}

    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

/// The interlacing constant rho is >= 1, so the localized error bounds say nothing.
class NoGuarantee : public Error {
public:
    explicit NoGuarantee(double rho)
        : Error("localization guarantee void (rho = " + std::to_string(rho) + " >= 1)"), rho_(rho) {}

    double rho() const noexcept { return rho_; }

private:
    double rho_;
};

}  // namespace localflow
