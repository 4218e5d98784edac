#pragma once

// Finite atomic singular measures on the unit circle, kept away from the
// point 1, together with the moment functional that controls everything
// downstream.

#include <string>
#include <utility>
#include <vector>

#include "coshift/types.hpp"

namespace coshift {

struct Atom {
  double angle;   // in (0, 2*pi)
  double weight;  // > 0
};

class AtomicMeasure {
 public:
  /// Validates and sorts the atom list. Throws Error with code
  /// "AtomAtOne", "DuplicateAngle", "NonPositiveWeight" or "EmptyMeasure".
  static AtomicMeasure make(std::vector<std::pair<double, double>> pairs);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  double total_mass() const;
  Complex xi(int j) const;  // exp(i * angle_j)

  AtomicMeasure scaled(double c) const;

 private:
  explicit AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

/// M_q(mu) = sum_j weight_j / |1 - xi_j|^q.
double moment(const AtomicMeasure& mu, double q);

/// c * mu with c = min(1, budget / M_q(mu)); never inflates the measure.
AtomicMeasure rescale_to_budget(const AtomicMeasure& mu, double q, double budget);

struct MultiMeasureSystem {
  std::vector<AtomicMeasure> components;
  double q;
  double budget;
};

/// Rescales the inputs onto a geometric budget schedule so that
/// sum_k M_q(mu_k)^(1/q) <= budget. Measures already within budget are
/// kept untouched.
MultiMeasureSystem make_system(std::vector<AtomicMeasure> measures, double q,
                               double budget);

/// Loads {"atoms":[{"angle_turns": <real or "p/q">, "weight": w}, ...]}.
/// Angles in turns are multiplied by 2*pi once on load.
AtomicMeasure load_measure_json(const std::string& path);
AtomicMeasure parse_measure_json(const std::string& text);

}  // namespace coshift
