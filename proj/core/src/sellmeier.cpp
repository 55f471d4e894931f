#include "sagnacsim/sellmeier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sagnacsim {

std::string to_string(Axis axis) { return axis == Axis::Y ? "y" : "z"; }

Axis axis_from_string(const std::string& s) {
  if (s == "y" || s == "Y") return Axis::Y;
  if (s == "z" || s == "Z") return Axis::Z;
  throw std::runtime_error("unknown crystal axis '" + s + "' (expected y or z)");
}

namespace {

[[noreturn]] void window_error(const SellmeierSet& set, double lambda_um) {
  std::ostringstream os;
  os << "wavelength " << lambda_um << " um outside validity window ["
     << set.window_lo_um << ", " << set.window_hi_um << "] um of Sellmeier set '"
     << set.source << "'";
  throw std::domain_error(os.str());
}

double index_unchecked(const SellmeierSet& set, double lambda_um) {
  const double l2 = lambda_um * lambda_um;
  double n2 = set.a - set.d * l2;
  for (const auto& [b, c] : set.poles) n2 += b / (1.0 - c / l2);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw std::domain_error("Sellmeier set '" + set.source +
                            "' evaluates to a non-physical index at " +
                            std::to_string(lambda_um) + " um");
  }
  return std::sqrt(n2);
}

}  // namespace

double refractive_index(const SellmeierSet& set, double lambda_um) {
  if (!set.in_window(lambda_um)) window_error(set, lambda_um);
  return index_unchecked(set, lambda_um);
}

double group_index(const SellmeierSet& set, double lambda_um) {
  const double h = kGroupIndexStepUm;
  if (!set.in_window(lambda_um - h) || !set.in_window(lambda_um + h)) {
    window_error(set, lambda_um);
  }
  const double dn = (index_unchecked(set, lambda_um + h) -
                     index_unchecked(set, lambda_um - h)) / (2.0 * h);
  return index_unchecked(set, lambda_um) - lambda_um * dn;
}

std::vector<SellmeierSet> load_sellmeier_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open Sellmeier table file: " + path.string());
  }
  std::vector<SellmeierSet> sets;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    SellmeierSet set;
    std::string axis;
    if (!(is >> set.source)) continue;  // blank line
    if (!(is >> axis >> set.window_lo_um >> set.window_hi_um >> set.a >> set.d)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": malformed Sellmeier record");
    }
    set.axis = axis_from_string(axis);
    double b = 0.0, c = 0.0;
    while (is >> b) {
      if (!(is >> c)) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": dangling pole coefficient");
      }
      set.poles.emplace_back(b, c);
    }
    if (set.poles.empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": Sellmeier record needs at least one pole");
    }
    if (set.window_lo_um <= 0.0 || set.window_hi_um <= set.window_lo_um) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": invalid validity window");
    }
    sets.push_back(std::move(set));
  }
  if (sets.empty()) {
    throw std::runtime_error("Sellmeier table file has no records: " + path.string());
  }
  return sets;
}

const SellmeierSet& find_sellmeier(const std::vector<SellmeierSet>& sets,
                                   const std::string& source) {
  for (const auto& s : sets) {
    if (s.source == source) return s;
  }
  throw std::runtime_error("no Sellmeier set named '" + source + "' in catalog");
}

}  // namespace sagnacsim
