#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermite {

/// The constitutive matrix at a cell stopped being positive definite.
class SolvabilityError : public std::runtime_error {
 public:
  struct Snapshot {
    double e0x = 0.0, e0y = 0.0, q0 = 0.0;
    double m_value = 0.0;  // scalar M in 1D, smallest eigenvalue in 2D
    long cell = -1;
    int substep = -1;
    double time = 0.0;
  };

  explicit SolvabilityError(const Snapshot& s) : std::runtime_error(describe(s)), snap_(s) {}

  const Snapshot& snapshot() const { return snap_; }

  SolvabilityError with_location(long cell, int substep, double time) const {
    Snapshot s = snap_;
    s.cell = cell;
    s.substep = substep;
    s.time = time;
    return SolvabilityError(s);
  }

 private:
  static std::string describe(const Snapshot& s) {
    std::ostringstream os;
    os.precision(17);
    os << "constitutive matrix not positive definite (E0=(" << s.e0x << "," << s.e0y << "), Q0=" << s.q0
       << ", M=" << s.m_value << ")";
    if (s.cell >= 0) os << " at cell " << s.cell << ", substep " << s.substep << ", t=" << s.time;
    return os.str();
  }
  Snapshot snap_;
};

class NonfiniteError : public std::runtime_error {
 public:
  NonfiniteError(long step, long node, double time)
      : std::runtime_error("nonfinite field value at half-step " + std::to_string(step) + ", node " +
                           std::to_string(node) + ", t=" + std::to_string(time)),
        step_(step),
        node_(node) {}
  long step() const { return step_; }
  long node() const { return node_; }

 private:
  long step_;
  long node_;
};

/// Lists every violated configuration invariant at once.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& p : v) s += "\n  - " + p;
    return s;
  }
  std::vector<std::string> problems_;
};

}  // namespace hermite
