#pragma once

#include <stdexcept>
#include <string>

namespace bsk {

/// Raised for any input that violates an operation's precondition.
/// The CLI maps this family to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A set of columns that must be linearly independent is not.
class RankDeficient : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The measurement does not lie in the range of the dictionary.
class Infeasible : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// An exhaustive search would exceed its subset budget.
class BudgetExceeded : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace bsk
