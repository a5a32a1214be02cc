#pragma once

#include "rcalc/core/const_expr.hpp"
#include "rcalc/core/exponent.hpp"
#include "rcalc/facts/class_token.hpp"
#include "rcalc/facts/weight_expr.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rcalc {

/// An arrow: `subject` lies in RC(pair, constant), strong or weak (dilation 2).
struct RCFact {
  WeightExpr subject;
  ExponentPair pair;
  ConstExpr constant;
  Strength strength = Strength::Strong;

  bool is_strong() const { return strength == Strength::Strong; }
  bool is_weak() const { return strength == Strength::Weak; }

  /// Same statement, constants included.
  bool same_as(const RCFact& o) const {
    return subject == o.subject && pair == o.pair && strength == o.strength && constant == o.constant;
  }

  std::string claim() const { return subject.str() + " in " + class_token(pair, strength); }
  std::string str() const { return claim() + " constant " + constant.str(); }
};

inline RCFact strong_fact(WeightExpr subject, ExponentPair pair, ConstExpr c) {
  return {std::move(subject), std::move(pair), std::move(c), Strength::Strong};
}
inline RCFact weak_fact(WeightExpr subject, ExponentPair pair, ConstExpr c) {
  return {std::move(subject), std::move(pair), std::move(c), Strength::Weak};
}

/// `subject^exponent` is a doubling weight with the given constant.
struct DoublingFact {
  WeightExpr subject;
  Rational exponent;
  ConstExpr constant;

  WeightExpr doubled() const { return subject.pow(exponent); }
  std::string str() const {
    return "doubling " + doubled().str() + " constant " + constant.str();
  }
};

inline DoublingFact make_doubling(WeightExpr subject, const Exponent& exponent, ConstExpr c) {
  if (!exponent.is_rational() || exponent.value() == 0)
    throw Error("doubling exponent must be finite and nonzero, got " + exponent.str());
  return {std::move(subject), exponent.value(), std::move(c)};
}

/// Algebraic identity `lhs = rhs` introduced by a factorization step.
struct WeightIdentity {
  WeightExpr lhs;
  WeightExpr rhs;
  std::string rule;

  std::string str() const { return lhs.str() + " = " + rhs.str(); }
};

/// Deduplicating, insertion-ordered store of facts.
class FactBase {
 public:
  struct Entry {
    RCFact fact;
    std::string rule = "ASSUME";
    std::vector<std::size_t> parents;
    std::optional<std::size_t> subsumed_by;
  };

  struct InsertResult {
    bool inserted = false;
    std::size_t id = 0;
    bool subsumed = false;
  };

  /// Stores a fact unless an identical one exists. A strong fact whose pair is
  /// strictly nested in a stored strong fact with the same subject and the
  /// same constant is kept but marked subsumed (it follows by shrinking).
  InsertResult insert(RCFact fact, std::string rule = "ASSUME", std::vector<std::size_t> parents = {}) {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].fact.same_as(fact)) return {false, i, entries_[i].subsumed_by.has_value()};
    Entry e{std::move(fact), std::move(rule), std::move(parents), std::nullopt};
    if (e.fact.is_strong()) {
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        const RCFact& other = entries_[i].fact;
        if (other.is_strong() && other.subject == e.fact.subject && other.constant == e.fact.constant &&
            !(other.pair == e.fact.pair) && e.fact.pair.nested_in(other.pair)) {
          e.subsumed_by = i;
          break;
        }
      }
    }
    entries_.push_back(std::move(e));
    return {true, entries_.size() - 1, entries_.back().subsumed_by.has_value()};
  }

  bool insert(DoublingFact d) {
    for (const auto& o : doubling_)
      if (o.doubled() == d.doubled() && o.constant == d.constant) return false;
    doubling_.push_back(std::move(d));
    return true;
  }

  void add_identity(WeightIdentity id) { identities_.push_back(std::move(id)); }

  void declare_weight(const std::string& name) {
    for (const auto& n : weights_)
      if (n == name) return;
    weights_.push_back(name);
  }
  bool declared(const std::string& name) const {
    for (const auto& n : weights_)
      if (n == name) return true;
    return false;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<DoublingFact>& doubling() const { return doubling_; }
  const std::vector<WeightIdentity>& identities() const { return identities_; }
  const std::vector<std::string>& weights() const { return weights_; }
  const RCFact& operator[](std::size_t id) const { return entries_.at(id).fact; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
  std::vector<DoublingFact> doubling_;
  std::vector<WeightIdentity> identities_;
  std::vector<std::string> weights_;
};

}  // namespace rcalc
