#pragma once

#include "rcalc/core/rational.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcalc {

/// A canonical product of atom powers: factors sorted by atom, exponents
/// merged, zero exponents dropped. The empty product is the unit.
///
/// `Atom` must be totally ordered and equality comparable.
template <class Atom>
class PowerProduct {
 public:
  using Factor = std::pair<Atom, Rational>;

  PowerProduct() = default;

  static PowerProduct atom(Atom a) {
    PowerProduct p;
    p.factors_.emplace_back(std::move(a), Rational(1));
    return p;
  }

  static PowerProduct from_factors(std::vector<Factor> factors) {
    PowerProduct p;
    p.factors_ = std::move(factors);
    p.canonicalize();
    return p;
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }

  /// Power of a single atom with exponent 1.
  bool is_single_atom() const { return factors_.size() == 1 && factors_[0].second == 1; }

  PowerProduct pow(const Rational& k) const {
    if (k == 0) return {};
    PowerProduct p = *this;
    for (auto& f : p.factors_) f.second *= k;
    return p;
  }

  friend PowerProduct operator*(const PowerProduct& a, const PowerProduct& b) {
    std::vector<Factor> all = a.factors_;
    all.insert(all.end(), b.factors_.begin(), b.factors_.end());
    return from_factors(std::move(all));
  }

  /// theta such that this == base^theta, when one exists.
  std::optional<Rational> exponent_over(const PowerProduct& base) const {
    if (base.is_unit() || factors_.size() != base.factors_.size()) return std::nullopt;
    Rational theta = factors_[0].second / base.factors_[0].second;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (!(factors_[i].first == base.factors_[i].first)) return std::nullopt;
      if (factors_[i].second != theta * base.factors_[i].second) return std::nullopt;
    }
    return theta;
  }

  friend bool operator==(const PowerProduct& a, const PowerProduct& b) {
    return a.factors_ == b.factors_;
  }

 private:
  void canonicalize() {
    std::stable_sort(factors_.begin(), factors_.end(),
                     [](const Factor& x, const Factor& y) { return x.first < y.first; });
    std::vector<Factor> merged;
    for (auto& f : factors_) {
      if (!merged.empty() && merged.back().first == f.first)
        merged.back().second += f.second;
      else
        merged.push_back(std::move(f));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Factor& f) { return f.second == 0; }),
                 merged.end());
    factors_ = std::move(merged);
  }

  std::vector<Factor> factors_;
};

}  // namespace rcalc
