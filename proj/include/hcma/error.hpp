#pragma once

#include <stdexcept>
#include <string>

namespace hcma {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (e.g. eta on the strip boundary).
class DomainError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class InsufficientResolution : public Error {
public:
    using Error::Error;
};

// Boundary potential not in the admissible class (omega + i ddbar v not positive).
class InvalidPotential : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, double tail_bound)
        : Error(what), tail_bound_(tail_bound) {}
    double tail_bound() const noexcept { return tail_bound_; }

private:
    double tail_bound_;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double final_update)
        : Error(what), final_update_(final_update) {}
    double final_update() const noexcept { return final_update_; }

private:
    double final_update_;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

class ConstructiveFailure : public Error {
public:
    ConstructiveFailure(const std::string& what, double best_margin)
        : Error(what), best_margin_(best_margin) {}
    double best_margin() const noexcept { return best_margin_; }

private:
    double best_margin_;
};

}  // namespace hcma
