#pragma once

#include "rcalc/facts/fact.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>

namespace rcalc {

/// Raised when a rule is applied to facts outside its hypotheses.
class RuleError : public Error {
 public:
  using Error::Error;
};

enum class RuleTag {
  SHRINK,
  SPLIT,
  CONCAT,
  SCALE,
  WEAK_PROMOTE,
  WEAK_EXTEND,
  SELF_IMPROVE_RH,
  SELF_IMPROVE_LEFT,
  SELF_IMPROVE_RHS_TO_AQ,
  SELF_IMPROVE_AINF,
  SELF_IMPROVE_WEAK_RH,
  CROSS_ZERO,
  INTERPOLATE,
  FACTOR_IF,
  FACTOR_ONLYIF,
  JONES,
};

inline const char* tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::SHRINK: return "SHRINK";
    case RuleTag::SPLIT: return "SPLIT";
    case RuleTag::CONCAT: return "CONCAT";
    case RuleTag::SCALE: return "SCALE";
    case RuleTag::WEAK_PROMOTE: return "WEAK_PROMOTE";
    case RuleTag::WEAK_EXTEND: return "WEAK_EXTEND";
    case RuleTag::SELF_IMPROVE_RH: return "SELF_IMPROVE_RH";
    case RuleTag::SELF_IMPROVE_LEFT: return "SELF_IMPROVE_LEFT";
    case RuleTag::SELF_IMPROVE_RHS_TO_AQ: return "SELF_IMPROVE_RHS_TO_AQ";
    case RuleTag::SELF_IMPROVE_AINF: return "SELF_IMPROVE_AINF";
    case RuleTag::SELF_IMPROVE_WEAK_RH: return "SELF_IMPROVE_WEAK_RH";
    case RuleTag::CROSS_ZERO: return "CROSS_ZERO";
    case RuleTag::INTERPOLATE: return "INTERPOLATE";
    case RuleTag::FACTOR_IF: return "FACTOR_IF";
    case RuleTag::FACTOR_ONLYIF: return "FACTOR_ONLYIF";
    case RuleTag::JONES: return "JONES";
  }
  return "?";
}

inline std::optional<RuleTag> parse_tag(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(RuleTag::JONES); ++i)
    if (name == tag_name(static_cast<RuleTag>(i))) return static_cast<RuleTag>(i);
  return std::nullopt;
}

/// Qualitative self-improvement moves.
enum class SelfImprove { RH_RIGHT, AP_LEFT, RH_TO_AQ, AINF_TO_AR, WEAK_RH_RIGHT, CROSS_ZERO };

inline constexpr SelfImprove kAllSelfImprove[] = {SelfImprove::RH_RIGHT,   SelfImprove::AP_LEFT,
                                                  SelfImprove::RH_TO_AQ,   SelfImprove::AINF_TO_AR,
                                                  SelfImprove::WEAK_RH_RIGHT, SelfImprove::CROSS_ZERO};

inline const char* variant_name(SelfImprove v) {
  switch (v) {
    case SelfImprove::RH_RIGHT: return "RH_RIGHT";
    case SelfImprove::AP_LEFT: return "AP_LEFT";
    case SelfImprove::RH_TO_AQ: return "RH_TO_AQ";
    case SelfImprove::AINF_TO_AR: return "AINF_TO_AR";
    case SelfImprove::WEAK_RH_RIGHT: return "WEAK_RH_RIGHT";
    case SelfImprove::CROSS_ZERO: return "CROSS_ZERO";
  }
  return "?";
}

inline std::optional<SelfImprove> parse_variant(std::string_view name) {
  for (auto v : kAllSelfImprove)
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

inline RuleTag variant_tag(SelfImprove v) {
  switch (v) {
    case SelfImprove::RH_RIGHT: return RuleTag::SELF_IMPROVE_RH;
    case SelfImprove::AP_LEFT: return RuleTag::SELF_IMPROVE_LEFT;
    case SelfImprove::RH_TO_AQ: return RuleTag::SELF_IMPROVE_RHS_TO_AQ;
    case SelfImprove::AINF_TO_AR: return RuleTag::SELF_IMPROVE_AINF;
    case SelfImprove::WEAK_RH_RIGHT: return RuleTag::SELF_IMPROVE_WEAK_RH;
    case SelfImprove::CROSS_ZERO: return RuleTag::CROSS_ZERO;
  }
  return RuleTag::CROSS_ZERO;
}

/// A user-chosen value for the quantity a self-improvement only asserts to
/// exist, with a named constant standing for the resulting reversal constant.
///
/// The value means: delta (RH_RIGHT, new right end 1+delta), epsilon
/// (AP_LEFT: A_p -> A_{p-eps}), q (RH_TO_AQ), r (AINF_TO_AR), epsilon
/// (WEAK_RH_RIGHT: s -> s+eps), epsilon (CROSS_ZERO: crossing to +-eps).
/// Supplying one is an assumption about the weight, not something the
/// calculus proves.
struct Witness {
  Rational value;
  std::string constant;
};

/// Labels minted for a self-improvement or factorization step.
struct FreshLabels {
  std::string exponent;  // existential exponent symbol
  std::string constant;  // existential constant
  std::string constant2;  // second constant (factorizations)
};

/// Deterministic supply of labels that avoid every name already in use.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(const FactBase& base) {
    for (const auto& w : base.weights()) taken_.insert(w);
    auto note_const = [&](const ConstExpr& c) {
      for (const auto& [atom, k] : c.factors()) taken_.insert(atom.label);
    };
    for (const auto& e : base.entries()) {
      note_const(e.fact.constant);
      for (const auto& [name, k] : e.fact.subject.factors()) taken_.insert(name);
    }
    for (const auto& d : base.doubling()) note_const(d.constant);
  }

  void reserve(const std::string& name) { taken_.insert(name); }

  std::string next(const std::string& prefix) {
    while (true) {
      std::string name = prefix + std::to_string(++counters_[prefix]);
      if (taken_.insert(name).second) return name;
    }
  }

  FreshLabels labels() { return {next("t"), next("E"), {}}; }

 private:
  std::set<std::string> taken_;
  std::map<std::string, int> counters_;
};

// ---------------------------------------------------------------------------
// The three axioms.

inline void require_strong(const RCFact& f, const char* rule) {
  if (!f.is_strong()) throw RuleError(std::string(rule) + " needs a strong fact, got " + f.str());
}

/// Nested arrows keep their constant.
inline RCFact apply_shrink(const RCFact& f, const ExponentPair& target) {
  require_strong(f, "SHRINK");
  if (!target.nested_in(f.pair))
    throw RuleError("SHRINK target " + target.str() + " is not nested in " + f.pair.str());
  return strong_fact(f.subject, target, f.constant);
}

/// Both halves of f at an interior exponent `mid`.
inline std::pair<RCFact, RCFact> apply_split(const RCFact& f, const Exponent& mid) {
  require_strong(f, "SPLIT");
  if (!(f.pair.lo() < mid && mid < f.pair.hi()))
    throw RuleError("SPLIT point " + mid.str() + " is not inside " + f.pair.str());
  return {apply_shrink(f, {f.pair.lo(), mid}), apply_shrink(f, {mid, f.pair.hi()})};
}

/// Abutting arrows compose; constants multiply.
inline RCFact apply_concat(const RCFact& f, const RCFact& g) {
  if (!(f.subject == g.subject))
    throw RuleError("CONCAT needs one subject, got " + f.subject.str() + " and " + g.subject.str());
  if (!f.is_strong() || !g.is_strong())
    throw RuleError("CONCAT needs strong facts; promote weak arrows first");
  if (!(f.pair.hi() == g.pair.lo()))
    throw RuleError("CONCAT needs f.hi == g.lo exactly, got " + f.pair.hi().str() + " and " +
                    g.pair.lo().str());
  return strong_fact(f.subject, {f.pair.lo(), g.pair.hi()}, f.constant * g.constant);
}

/// w -> w^theta. Weak facts scale only by theta > 0.
inline RCFact apply_scale(const RCFact& f, const Rational& theta) {
  if (theta == 0) throw RuleError("SCALE by theta = 0 is undefined");
  if (f.is_weak() && theta < 0)
    throw RuleError("SCALE of a weak fact needs theta > 0 (the doubled ball does not swap sides)");
  return {f.subject.pow(theta), scale_pair(f.pair, theta), scale_const(f.constant, theta), f.strength};
}

// ---------------------------------------------------------------------------
// Weak arrows.

/// Exponent r whose power w^r must be doubling to promote a weak fact: the
/// left exponent, or the right one for a left-infinite weak arrow (those
/// arise by reflecting a right-infinite one, which moves the doubled ball
/// to the finite end).
inline Exponent promotion_exponent(const RCFact& f) {
  return f.pair.lo().is_neg_inf() ? f.pair.hi() : f.pair.lo();
}

/// Label of the factor a doubling constant contributes on promotion.
inline ConstExpr promotion_factor(const ConstExpr& doubling_constant) {
  const auto& fs = doubling_constant.factors();
  if (fs.size() == 1 && fs[0].second == 1 && fs[0].first.kind == ConstAtom::Kind::Named)
    return ConstExpr::named(fs[0].first.label + "'");
  return ConstExpr::named("[" + doubling_constant.str() + "]'");
}

inline RCFact apply_weak_promote(const RCFact& f, const DoublingFact& d) {
  if (!f.is_weak()) throw RuleError("WEAK_PROMOTE needs a weak fact, got " + f.str());
  Exponent r = promotion_exponent(f);
  if (!r.is_rational() || r.value() == 0)
    throw RuleError("WEAK_PROMOTE needs a finite nonzero doubling exponent, got " + r.str());
  if (!(f.subject.pow(r.value()) == d.doubled()))
    throw RuleError("WEAK_PROMOTE needs " + f.subject.pow(r.value()).str() + " doubling, got " + d.str());
  return strong_fact(f.subject, f.pair, f.constant * promotion_factor(d.constant));
}

/// Lowers the left exponent of a weak arrow with 0 < p < lo.
inline RCFact apply_weak_extend(const RCFact& f, const Exponent& p, const std::string& constant_label) {
  if (!f.is_weak()) throw RuleError("WEAK_EXTEND needs a weak fact, got " + f.str());
  if (!(Exponent(0) < p)) throw RuleError("WEAK_EXTEND needs p > 0, got " + p.str());
  if (!(p < f.pair.lo()))
    throw RuleError("WEAK_EXTEND needs p < " + f.pair.lo().str() + ", got " + p.str());
  return weak_fact(f.subject, {p, f.pair.hi()},
                   ConstExpr::existential(constant_label, "weak constant after lowering the left exponent of " +
                                                              f.claim() + " to " + p.str()));
}

// ---------------------------------------------------------------------------
// Self-improvement.

namespace detail {

inline void require_shape(bool ok, SelfImprove v, const RCFact& f, const char* shape) {
  if (!ok)
    throw RuleError(std::string(variant_name(v)) + " needs " + shape + ", got " + f.str());
}

inline Rational witness_positive(const Witness& w, const char* what) {
  if (w.value <= 0) throw RuleError(std::string("witness ") + what + " must be positive");
  return w.value;
}

}  // namespace detail

/// Applies one self-improvement move. Without a witness, the new endpoint is
/// an existential symbol labelled `fresh.exponent` and the new constant an
/// existential atom labelled `fresh.constant`.
inline RCFact apply_self_improve(const RCFact& f, SelfImprove v, const FreshLabels& fresh,
                                 const std::optional<Witness>& witness = std::nullopt) {
  const Exponent& lo = f.pair.lo();
  const Exponent& hi = f.pair.hi();
  auto exists_const = [&](const std::string& note) {
    if (witness) return ConstExpr::named(witness->constant);
    return ConstExpr::existential(fresh.constant, note + " of " + f.claim());
  };
  auto symbol = [&](Exponent a, Exponent b, const std::string& meaning) {
    return Exponent::symbolic(1, make_symbol(fresh.exponent, std::move(a), std::move(b),
                                             meaning + " for " + f.claim()));
  };

  if (v == SelfImprove::WEAK_RH_RIGHT) {
    detail::require_shape(f.is_weak() && lo == Exponent(1) && hi.is_rational() && hi.value() > 1, v, f,
                          "a weak RH(s) fact with 1 < s < inf");
    Exponent s2 = witness ? Exponent(Rational(hi.value() + detail::witness_positive(*witness, "epsilon")))
                          : symbol(hi, Exponent::pos_inf(), "s+epsilon, epsilon>0");
    return weak_fact(f.subject, {lo, s2}, exists_const("weak reverse Hoelder constant"));
  }

  if (!f.is_strong()) throw RuleError(std::string(variant_name(v)) + " needs a strong fact, got " + f.str());

  switch (v) {
    case SelfImprove::RH_RIGHT: {
      detail::require_shape(hi == Exponent(1) && !lo.is_infinite() && lo < Exponent(0), v, f,
                            "an A_p fact (r, 1) with -inf < r < 0");
      Exponent s = witness ? Exponent(Rational(1 + detail::witness_positive(*witness, "delta")))
                           : symbol(Exponent(1), Exponent::pos_inf(), "1+delta, delta>0");
      // The RH_{1+delta} arrow is concatenated onto the A_p arrow.
      return strong_fact(f.subject, {lo, s}, f.constant * exists_const("reverse Hoelder constant"));
    }
    case SelfImprove::AP_LEFT: {
      detail::require_shape(hi == Exponent(1) && lo.is_rational() && lo.value() < 0, v, f,
                            "an A_p fact (1/(1-p), 1) with 1 < p < inf");
      Exponent r;
      if (witness) {
        Rational p = 1 - 1 / lo.value();
        Rational eps = detail::witness_positive(*witness, "epsilon");
        if (eps >= p - 1) throw RuleError("AP_LEFT witness needs epsilon < p - 1");
        r = Exponent(Rational(1 / (1 - (p - eps))));
      } else {
        r = symbol(Exponent::neg_inf(), lo, "1/(1-(p-epsilon)), epsilon>0");
      }
      return strong_fact(f.subject, {r, hi}, exists_const("A_{p-epsilon} constant"));
    }
    case SelfImprove::RH_TO_AQ: {
      detail::require_shape(lo == Exponent(1) && Exponent(1) < hi, v, f, "an RH(s) fact (1, s)");
      Exponent r;
      if (witness) {
        if (witness->value <= 1) throw RuleError("RH_TO_AQ witness needs q > 1");
        r = Exponent(Rational(1 / (1 - witness->value)));
      } else {
        r = symbol(Exponent::neg_inf(), Exponent(0), "1/(1-q), 1<q<inf");
      }
      // The A_q arrow (r, 1) is concatenated onto (1, s).
      return strong_fact(f.subject, {r, hi}, exists_const("A_q constant") * f.constant);
    }
    case SelfImprove::AINF_TO_AR: {
      detail::require_shape(lo == Exponent(0) && hi == Exponent(1), v, f, "an A(inf) fact (0, 1)");
      Exponent r;
      if (witness) {
        if (witness->value <= 1) throw RuleError("AINF_TO_AR witness needs r > 1");
        r = Exponent(Rational(1 / (1 - witness->value)));
      } else {
        r = symbol(Exponent::neg_inf(), Exponent(0), "1/(1-r), 1<r<inf");
      }
      return strong_fact(f.subject, {r, hi}, exists_const("A_r constant"));
    }
    case SelfImprove::CROSS_ZERO: {
      if (hi < Exponent(0)) {
        Exponent e = witness ? Exponent(detail::witness_positive(*witness, "epsilon"))
                             : symbol(Exponent(0), Exponent::pos_inf(), "epsilon>0");
        return strong_fact(f.subject, {lo, e}, exists_const("constant after crossing zero"));
      }
      if (Exponent(0) < lo) {
        Exponent e = witness ? Exponent(Rational(-detail::witness_positive(*witness, "epsilon")))
                             : symbol(Exponent::neg_inf(), Exponent(0), "-epsilon, epsilon>0");
        return strong_fact(f.subject, {e, hi}, exists_const("constant after crossing zero"));
      }
      throw RuleError("CROSS_ZERO needs an arrow on one side of zero, got " + f.str());
    }
    case SelfImprove::WEAK_RH_RIGHT: break;
  }
  throw RuleError("unknown self-improvement");
}

// ---------------------------------------------------------------------------
// Interpolation and factorization.

/// u^theta v^(1-theta) from two arrows crossing zero.
inline RCFact apply_interpolate(const RCFact& f, const RCFact& g, const Rational& theta) {
  require_strong(f, "INTERPOLATE");
  require_strong(g, "INTERPOLATE");
  ExponentPair pair = [&] {
    try {
      return interpolate_exponents(f.pair.lo(), g.pair.lo(), f.pair.hi(), g.pair.hi(), theta);
    } catch (const Error& e) {
      throw RuleError(std::string("INTERPOLATE: ") + e.what());
    }
  }();
  Rational rest = 1 - theta;
  WeightExpr subject = theta == 0 ? g.subject : rest == 0 ? f.subject : f.subject.pow(theta) * g.subject.pow(rest);
  return strong_fact(subject, pair, f.constant.pow(theta) * g.constant.pow(rest));
}

/// u in RC(r, inf) and v in RC(-inf, s) with r < 0 < s give uv in RC(r, s).
inline RCFact apply_factor_if(const RCFact& f, const RCFact& g) {
  require_strong(f, "FACTOR_IF");
  require_strong(g, "FACTOR_IF");
  const Exponent& r = f.pair.lo();
  const Exponent& s = g.pair.hi();
  if (!f.pair.hi().is_pos_inf())
    throw RuleError("FACTOR_IF needs the first factor to reach +inf, got " + f.str());
  if (!g.pair.lo().is_neg_inf())
    throw RuleError("FACTOR_IF needs the second factor to reach -inf, got " + g.str());
  if (!(r < Exponent(0)) || r.is_neg_inf() || !(Exponent(0) < s) || s.is_pos_inf())
    throw RuleError("FACTOR_IF needs finite r < 0 < s, got r = " + r.str() + ", s = " + s.str());
  return strong_fact(f.subject * g.subject, {r, s}, g.constant * f.constant);
}

struct Factorization {
  WeightIdentity identity;
  RCFact first;
  RCFact second;
};

/// w in RC(r, s), r < 0 < s, factors as w = u v with u in RC(r, inf) and
/// v in RC(-inf, s). The factors are fresh atoms with existential constants.
inline Factorization apply_factor_onlyif(const RCFact& f, const std::string& u, const std::string& v,
                                         const FreshLabels& fresh) {
  require_strong(f, "FACTOR_ONLYIF");
  const Exponent& r = f.pair.lo();
  const Exponent& s = f.pair.hi();
  if (!(r < Exponent(0) && Exponent(0) < s))
    throw RuleError("FACTOR_ONLYIF needs an arrow crossing zero, got " + f.str());
  WeightExpr wu = WeightExpr::atom(u), wv = WeightExpr::atom(v);
  std::string origin = " in the factorization of " + f.claim();
  return {{f.subject, wu * wv, "FACTOR_ONLYIF"},
          strong_fact(wu, {r, Exponent::pos_inf()},
                      ConstExpr::existential(fresh.constant, "constant of the RC(r,inf) factor" + origin)),
          strong_fact(wv, {Exponent::neg_inf(), s},
                      ConstExpr::existential(fresh.constant2, "constant of the RC(-inf,s) factor" + origin))};
}

/// w in A_p factors as w = w1 * w2^(1-p) with w1, w2 in A_1.
inline Factorization apply_jones(const RCFact& f, const std::string& w1, const std::string& w2,
                                 const FreshLabels& fresh) {
  require_strong(f, "JONES");
  if (!(f.pair.hi() == Exponent(1)) || !f.pair.lo().is_rational() || f.pair.lo().value() >= 0)
    throw RuleError("JONES needs an A_p fact with 1 < p < inf, got " + f.str());
  Rational p = 1 - 1 / f.pair.lo().value();
  WeightExpr a = WeightExpr::atom(w1), b = WeightExpr::atom(w2);
  ExponentPair a1{Exponent::neg_inf(), Exponent(1)};
  std::string origin = " in the A_1 factorization of " + f.claim();
  return {{f.subject, a * b.pow(1 - p), "JONES"},
          strong_fact(a, a1, ConstExpr::existential(fresh.constant, "A_1 constant" + origin)),
          strong_fact(b, a1, ConstExpr::existential(fresh.constant2, "A_1 constant" + origin))};
}

}  // namespace rcalc
