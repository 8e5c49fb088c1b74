#include "mrca/pmf_table.hpp"

#include <cmath>
#include <stdexcept>

namespace mrca {

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

void PmfTable::add(ExtendedLevel value, const Rational& w) {
  entries.push_back({value, to_double(w), w});
}

void PmfTable::add(ExtendedLevel value, double w) {
  entries.push_back({value, w, std::nullopt});
}

double PmfTable::total() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.weight;
  return s;
}

double PmfTable::weight_of(ExtendedLevel value) const {
  for (const auto& e : entries)
    if (e.value == value) return e.weight;
  return 0.0;
}

bool PmfTable::normalized(double tolerance) const {
  const double s = total();
  return s <= 1.0 + tolerance && s + tail_bound >= 1.0 - tolerance;
}

void PmfTable::validate(double tolerance) const {
  for (const auto& e : entries)
    if (!(e.weight >= 0.0)) throw std::logic_error("PmfTable: negative weight at " + e.value.to_string());
  if (!normalized(tolerance)) throw std::logic_error("PmfTable: weights do not normalize");
}

}  // namespace mrca
