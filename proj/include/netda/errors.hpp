#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netda {

// Error taxonomy shared by all modules. The CLI maps config_error to exit
// code 2 and numeric_error to exit code 3.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters, ranges, or referenced files.
class config_error : public error {
 public:
  using error::error;
};

// Malformed input data (contact logs, CSV, config files).
class parse_error : public error {
 public:
  using error::error;
};

// Singular or ill-conditioned systems, non-finite intermediates.
class numeric_error : public error {
 public:
  using error::error;
};

// Filesystem failures; message carries the path.
class io_error : public error {
 public:
  using error::error;
};

// Dimension mismatches between vectors, operators, and states.
class shape_error : public error {
 public:
  using error::error;
};

// Caller broke a documented precondition (invalid node id, overlapping
// partition blocks, already-vaccinated target, ...).
class contract_violation : public error {
 public:
  using error::error;
};

// Iterative solver ran out of iterations; carries the best iterate found.
class convergence_error : public numeric_error {
 public:
  convergence_error(const std::string& what, std::vector<double> best,
                    int iterations)
      : numeric_error(what), best_iterate(std::move(best)),
        iterations(iterations) {}

  std::vector<double> best_iterate;
  int iterations = 0;
};

}  // namespace netda
