#pragma once

#include <stdexcept>
#include <string>

namespace optauction {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query outside the support of a distribution or the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Zero density where a virtual cost needs to divide by it.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Demands cannot be covered with the reported capacities.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The mechanism is only defined for regular virtual costs.
class NotRegularError : public Error {
 public:
  using Error::Error;
};

// An allocation curve that rises with the reported cost.
class MonotonicityError : public Error {
 public:
  MonotonicityError(const std::string& what, double lower_cost,
                    double upper_cost)
      : Error(what), lower_cost_(lower_cost), upper_cost_(upper_cost) {}

  double lower_cost() const { return lower_cost_; }
  double upper_cost() const { return upper_cost_; }

 private:
  double lower_cost_;
  double upper_cost_;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Two integration paths of a payment gradient disagree.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace optauction
