#pragma once

#include <stdexcept>
#include <string>

namespace wbary {

struct AllZeroInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NegativeInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotMeanZero : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotConvex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidSplit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** A pushforward failed its inline mass-conservation or nonnegativity
 *  check; indicates a solver bug, never bad user input. */
struct ConservationError : std::logic_error {
  using std::logic_error::logic_error;
};

/** File read/write or format failure; the message names the file. */
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Singular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wbary
