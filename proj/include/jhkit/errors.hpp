#pragma once

#include <stdexcept>
#include <string>

namespace jhkit {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation requested exactly at a kernel singularity.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Root finder was handed an interval that does not bracket the target.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature failed to converge or produced a non-finite value.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No parameter satisfies every constraint of a selection procedure.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run or grid configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace jhkit
