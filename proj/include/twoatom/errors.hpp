#pragma once

#include <stdexcept>
#include <string>

namespace twoatom {

// Input outside the domain of an operation (negative separation, bad angle,
// invalid rate set, ...).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A closed form diverges at the requested point. Near the singularity it
// behaves as coefficient * x^order, e.g. -3/2 * R^-3 for the dipole potential.
class singularity_error : public domain_error {
public:
  singularity_error(const std::string& what, double coefficient, int order)
      : domain_error(what), coefficient_(coefficient), order_(order) {}

  double coefficient() const noexcept { return coefficient_; }
  int order() const noexcept { return order_; }

private:
  double coefficient_;
  int order_;
};

// A search found no solution in its bracket.
class range_error : public std::range_error {
public:
  using std::range_error::range_error;
};

// A request would exceed a hard work limit (e.g. integration step count).
class resource_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An output failed its own invariants; indicates a bug, not bad input.
class consistency_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// A quantity is undefined for the given state (e.g. overlap of a zero vector).
class undefined_error : public domain_error {
public:
  using domain_error::domain_error;
};

}  // namespace twoatom
