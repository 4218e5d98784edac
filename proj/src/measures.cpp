#include "coshift/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coshift {

namespace {
// Angles closer to 0 (mod 2*pi) than this put an atom effectively at 1 and
// make the moment functional blow up.
constexpr double kMinAngleGap = 1e-9;
}  // namespace

AtomicMeasure AtomicMeasure::make(std::vector<std::pair<double, double>> pairs) {
  if (pairs.empty()) throw Error("EmptyMeasure", "at least one atom required");
  std::vector<Atom> atoms;
  atoms.reserve(pairs.size());
  for (const auto& [angle, weight] : pairs) {
    if (!(angle > 0.0 && angle < kTwoPi) || angle < kMinAngleGap ||
        kTwoPi - angle < kMinAngleGap)
      throw Error("AtomAtOne", "atom angle " + std::to_string(angle) +
                                   " not in the open interval (0, 2*pi)");
    if (!(weight > 0.0))
      throw Error("NonPositiveWeight",
                  "weight " + std::to_string(weight) + " must be positive");
    atoms.push_back({angle, weight});
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.angle < b.angle; });
  for (size_t j = 1; j < atoms.size(); ++j)
    if (atoms[j].angle == atoms[j - 1].angle)
      throw Error("DuplicateAngle",
                  "duplicate angle " + std::to_string(atoms[j].angle));
  return AtomicMeasure(std::move(atoms));
}

double AtomicMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

Complex AtomicMeasure::xi(int j) const {
  return std::polar(1.0, atoms_[j].angle);
}

AtomicMeasure AtomicMeasure::scaled(double c) const {
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.weight *= c;
  return AtomicMeasure(std::move(atoms));
}

double moment(const AtomicMeasure& mu, double q) {
  double s = 0.0;
  for (int j = 0; j < mu.size(); ++j) {
    const double d = std::abs(1.0 - mu.xi(j));
    s += mu.atoms()[j].weight / std::pow(d, q);
  }
  return s;
}

AtomicMeasure rescale_to_budget(const AtomicMeasure& mu, double q,
                                double budget) {
  const double m = moment(mu, q);
  const double c = std::min(1.0, budget / m);
  return mu.scaled(c);
}

MultiMeasureSystem make_system(std::vector<AtomicMeasure> measures, double q,
                               double budget) {
  if (measures.empty()) throw Error("EmptyMeasure", "system needs components");
  if (!(q > 3.0)) throw Error("BadExponent", "q must exceed 3");
  double total = 0.0;
  for (const auto& mu : measures) total += std::pow(moment(mu, q), 1.0 / q);
  MultiMeasureSystem sys{{}, q, budget};
  if (total <= budget) {
    sys.components = std::move(measures);
    return sys;
  }
  // Allocate shares 3*budget/4^k; their sum stays below budget for any K.
  double share = budget;
  for (auto& mu : measures) {
    share *= 0.25;
    const double alloc = 3.0 * share;
    const double root = std::pow(moment(mu, q), 1.0 / q);
    const double c = root <= alloc ? 1.0 : std::pow(alloc / root, q);
    sys.components.push_back(mu.scaled(c));
  }
  return sys;
}

namespace {

double parse_turns(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos)
      throw Error("ConfigError", "angle_turns string must look like \"p/q\"");
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    if (den == 0.0) throw Error("ConfigError", "zero denominator in angle");
    return num / den;
  }
  return v.get<double>();
}

}  // namespace

AtomicMeasure parse_measure_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("ConfigError", e.what());
  }
  if (!j.contains("atoms") || !j["atoms"].is_array())
    throw Error("ConfigError", "measure config needs an \"atoms\" array");
  std::vector<std::pair<double, double>> pairs;
  for (const auto& a : j["atoms"]) {
    const double turns = parse_turns(a.at("angle_turns"));
    pairs.emplace_back(turns * kTwoPi, a.at("weight").get<double>());
  }
  return AtomicMeasure::make(std::move(pairs));
}

AtomicMeasure load_measure_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_measure_json(ss.str());
}

}  // namespace coshift
