#pragma once

#include <stdexcept>
#include <string>

namespace homdens {

// Input that violates a graph, pattern or file-format invariant.
class invalid_graph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parse failure in one of the text formats (edge list, dataset, filter blob).
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter outside its admissible range (epsilon, delta, p, fpr, ...).
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Enumeration or search that would exceed its configured budget.
class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homdens
