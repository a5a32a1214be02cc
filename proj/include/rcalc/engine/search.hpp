#pragma once

#include "rcalc/engine/derivation.hpp"
#include "rcalc/facts/fact_file.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace rcalc {

struct SearchOptions {
  int budget = 8;                           // maximum derivation depth
  std::size_t max_facts = 20000;            // saturation cap
  bool self_improve = true;                 // use the qualitative self-improvement moves
  std::vector<Rational> extra_thetas;       // additional SCALE candidates
  std::map<SelfImprove, Witness> witnesses; // turn existential moves concrete
};

struct SearchStats {
  std::size_t facts = 0;
  int levels = 0;
  bool capped = false;
};

/// Level-by-level forward saturation over a fact base. Level d holds every
/// fact first reached by a derivation of depth d; a statement reached twice at
/// the same depth keeps the derivation whose tag sequence is smaller.
class Saturator {
 public:
  Saturator(const FactBase& base, std::optional<Goal> goal, SearchOptions options)
      : goal_(std::move(goal)), opts_(std::move(options)), names_(base) {
    for (const auto& e : base.entries()) add_leaf(e.fact);
    for (const auto& d : base.doubling()) graph_.add_doubling(d);
    if (goal_ && goal_->subject.is_unit()) add_leaf({goal_->subject, goal_->pair, ConstExpr::one(), goal_->strength});
    for (const auto& [v, w] : opts_.witnesses) names_.reserve(w.constant);
  }

  const Derivation& graph() const { return graph_; }
  int depth(std::size_t id) const { return meta_[id].depth; }
  const SearchStats& stats() const { return stats_; }

  /// Runs one more level. Returns false when nothing new appeared.
  bool step() {
    int d = ++stats_.levels;
    std::size_t before = graph_.node_count();
    generate(d);
    stats_.facts = graph_.node_count();
    return graph_.node_count() > before || replaced_;
  }

  /// Nodes at exactly the given depth.
  std::vector<std::size_t> level(int d) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < meta_.size(); ++i)
      if (meta_[i].depth == d && !meta_[i].dead) out.push_back(i);
    return out;
  }

  bool matches(std::size_t id, const Goal& g) const {
    const RCFact& f = graph_.node(id);
    return f.subject == g.subject && f.pair == g.pair && f.strength == g.strength;
  }

  /// Best goal node at a depth: evaluable constants first, then the smaller
  /// tag sequence.
  std::optional<std::size_t> best_match(int d, const Goal& g) const {
    std::optional<std::size_t> best;
    for (auto id : level(d)) {
      if (!matches(id, g)) continue;
      if (!best || better(id, *best)) best = id;
    }
    return best;
  }

  /// The sub-DAG under `id`, renumbered, as a standalone derivation.
  Derivation extract(std::size_t id) const {
    std::set<std::size_t> keep;
    std::vector<std::size_t> stack{id};
    while (!stack.empty()) {
      std::size_t n = stack.back();
      stack.pop_back();
      if (!keep.insert(n).second || graph_.is_leaf(n)) continue;
      for (auto p : graph_.step_of(n).parents) stack.push_back(p);
    }
    Derivation out;
    std::map<std::size_t, std::size_t> remap, dremap;
    for (auto n : keep)
      if (graph_.is_leaf(n)) remap[n] = out.add_leaf(graph_.leaves[n]);
    for (auto n : keep) {
      if (graph_.is_leaf(n)) continue;
      Step s = graph_.step_of(n);
      for (auto& p : s.parents) p = remap.at(p);
      if (s.params.doubling) {
        std::size_t k = *s.params.doubling;
        if (!dremap.count(k)) dremap[k] = out.add_doubling(graph_.doubling[k]);
        s.params.doubling = dremap[k];
      }
      remap[n] = out.apply(s.tag, s.parents, s.params);
    }
    out.goals = {remap.at(id)};
    return out;
  }

 private:
  struct Meta {
    int depth = 0;
    std::vector<std::string> tags;
    bool dead = false;  // superseded by a same-depth derivation with smaller tags
  };

  // Statements are deduplicated by claim, keeping separate slots for
  // evaluable and existential constants so an evaluable route is not lost
  // behind a shallower existential one.
  static std::string slot(const RCFact& f, bool evaluable) { return f.claim() + (evaluable ? "#e" : "#x"); }

  void add_leaf(const RCFact& f) {
    std::string key = slot(f, f.constant.evaluable());
    if (index_.count(key)) return;
    index_[key] = graph_.add_leaf(f);
    meta_.push_back({0, {}, false});
    index_node(index_[key]);
  }

  bool better(std::size_t a, std::size_t b) const {
    bool ea = graph_.node(a).constant.evaluable(), eb = graph_.node(b).constant.evaluable();
    if (ea != eb) return ea;
    if (meta_[a].tags != meta_[b].tags) return meta_[a].tags < meta_[b].tags;
    return a < b;
  }

  std::vector<std::string> tags_for(RuleTag tag, const std::vector<std::size_t>& parents) const {
    std::vector<std::string> out;
    std::set<std::size_t> seen;
    std::function<void(std::size_t)> walk = [&](std::size_t n) {
      if (graph_.is_leaf(n) || !seen.insert(n).second) return;
      for (auto p : graph_.step_of(n).parents) walk(p);
      out.push_back(tag_name(graph_.step_of(n).tag));
    };
    for (auto p : parents) walk(p);
    out.push_back(tag_name(tag));
    return out;
  }

  void offer(int d, RuleTag tag, std::vector<std::size_t> parents, StepParams params) {
    if (stats_.capped) return;
    std::string key;
    try {
      RCFact f = graph_.compute(tag, parents, params);
      bool ev = f.constant.evaluable();
      if (!ev)
        if (auto it = index_.find(slot(f, true)); it != index_.end() && meta_[it->second].depth <= d) return;
      key = slot(f, ev);
    } catch (const Error&) {
      return;
    }
    auto tags = tags_for(tag, parents);
    if (auto it = index_.find(key); it != index_.end()) {
      Meta& m = meta_[it->second];
      if (m.depth < d || !(tags < m.tags)) return;
      // Same depth, smaller tag sequence: the old node stays for its
      // children but stops being a candidate.
      m.dead = true;
      replaced_ = true;
    }
    index_[key] = graph_.apply(tag, std::move(parents), std::move(params));
    meta_.push_back({d, std::move(tags), false});
    index_node(index_[key]);
    if (graph_.node_count() > opts_.max_facts) stats_.capped = true;
  }

  std::vector<Rational> thetas_for(const RCFact& f) const {
    std::set<Rational> out;
    auto add = [&](const Rational& t) {
      if (t != 0 && t != 1) out.insert(t);
    };
    if (goal_ && !goal_->subject.is_unit())
      if (auto t = goal_->subject.exponent_over(f.subject)) add(*t);
    for (const Exponent* e : {&f.pair.lo(), &f.pair.hi()}) {
      if (!e->is_rational() || e->value() == 0) continue;
      add(e->value());
      add(1 / e->value());
    }
    add(-1);
    if (goal_ && f.is_strong() && goal_->strength == Strength::Strong) {
      const Exponent &lo = f.pair.lo(), &hi = f.pair.hi(), &glo = goal_->pair.lo(), &ghi = goal_->pair.hi();
      auto ratio = [&](const Exponent& a, const Exponent& b, int sign) {
        if (!a.is_rational() || !b.is_rational() || a.value() == 0 || b.value() == 0) return;
        Rational t = a.value() / b.value();
        if ((sign > 0 && t > 0) || (sign < 0 && t < 0)) add(t);
      };
      ratio(lo, glo, 1);
      ratio(hi, ghi, 1);
      ratio(hi, glo, -1);
      ratio(lo, ghi, -1);
    }
    for (const auto& t : opts_.extra_thetas) add(t);
    if (f.is_weak())
      for (auto it = out.begin(); it != out.end();) it = *it < 0 ? out.erase(it) : std::next(it);
    return {out.begin(), out.end()};
  }

  void unary(int d, std::size_t id) {
    const RCFact f = graph_.node(id);  // graph_ grows below
    bool from_scale = !graph_.is_leaf(id) && graph_.step_of(id).tag == RuleTag::SCALE;

    if (!from_scale)
      for (const auto& t : thetas_for(f)) {
        StepParams p;
        p.theta = t;
        offer(d, RuleTag::SCALE, {id}, p);
      }

    if (goal_ && f.is_strong() && goal_->strength == Strength::Strong && f.subject == goal_->subject &&
        !(f.pair == goal_->pair) && goal_->pair.nested_in(f.pair)) {
      StepParams p;
      p.target = goal_->pair;
      offer(d, RuleTag::SHRINK, {id}, p);
    }

    if (f.is_weak()) {
      for (std::size_t k = 0; k < graph_.doubling.size(); ++k) {
        StepParams p;
        p.doubling = k;
        offer(d, RuleTag::WEAK_PROMOTE, {id}, p);
      }
      std::set<Rational> ps;
      if (goal_ && goal_->subject == f.subject && goal_->pair.lo().is_rational()) ps.insert(goal_->pair.lo().value());
      for (const auto& dbl : graph_.doubling)
        if (auto t = dbl.doubled().exponent_over(f.subject)) ps.insert(*t);
      for (const auto& pv : ps) {
        if (!(pv > 0) || !(Exponent(pv) < f.pair.lo())) continue;
        StepParams p;
        p.point = Exponent(pv);
        p.fresh.constant = names_.next("E");
        offer(d, RuleTag::WEAK_EXTEND, {id}, p);
      }
    }

    if (opts_.self_improve)
      for (auto v : kAllSelfImprove) {
        StepParams p;
        p.variant = v;
        if (auto w = opts_.witnesses.find(v); w != opts_.witnesses.end()) p.witness = w->second;
        try {
          apply_self_improve(f, v, {"?", "?", {}}, p.witness);
        } catch (const Error&) {
          continue;
        }
        p.fresh = names_.labels();
        offer(d, variant_tag(v), {id}, p);
      }
  }

  /// Rules with two premises on one subject.
  void same_subject(int d, std::size_t a, std::size_t b) {
    const RCFact f = graph_.node(a);
    const RCFact g = graph_.node(b);
    if (!f.is_strong() || !g.is_strong()) return;
    if (f.pair.hi() == g.pair.lo()) offer(d, RuleTag::CONCAT, {a, b}, {});
    // Cut f at an endpoint of g so the pieces can be concatenated.
    for (const Exponent* e : {&g.pair.lo(), &g.pair.hi()}) {
      if (!(f.pair.lo() < *e && *e < f.pair.hi())) continue;
      StepParams p;
      p.target = ExponentPair(f.pair.lo(), *e);
      offer(d, RuleTag::SHRINK, {a}, p);
      p.target = ExponentPair(*e, f.pair.hi());
      offer(d, RuleTag::SHRINK, {a}, p);
    }
  }

  bool usable(std::size_t b, int d, std::size_t known) const {
    return b < known && !meta_[b].dead && meta_[b].depth <= d - 1;
  }

  void generate(int d) {
    replaced_ = false;
    std::vector<std::size_t> frontier = level(d - 1);
    for (auto id : frontier) unary(d, id);
    // Binary rules pair a frontier fact with any earlier fact.
    std::size_t known = graph_.node_count();
    for (auto a : frontier) {
      const RCFact f = graph_.node(a);
      std::vector<std::size_t> peers = by_subject_[f.subject.str()];
      for (auto b : peers) {
        if (!usable(b, d, known)) continue;
        same_subject(d, a, b);
        if (meta_[b].depth < d - 1) same_subject(d, b, a);
      }
      if (!f.is_strong()) continue;
      // Automatic factor products only combine weights with disjoint atoms;
      // powers of one weight multiply into a power already reachable by SCALE.
      if (f.pair.hi().is_pos_inf()) {
        std::vector<std::size_t> rights = left_open_;
        for (auto b : rights)
          if (usable(b, d, known) && disjoint(a, b)) offer(d, RuleTag::FACTOR_IF, {a, b}, {});
      }
      if (f.pair.lo().is_neg_inf()) {
        std::vector<std::size_t> lefts = right_open_;
        for (auto b : lefts)
          if (usable(b, d, known) && meta_[b].depth < d - 1 && disjoint(a, b))
            offer(d, RuleTag::FACTOR_IF, {b, a}, {});
      }
    }
  }

  bool disjoint(std::size_t a, std::size_t b) const {
    for (const auto& [x, i] : graph_.node(a).subject.factors())
      for (const auto& [y, j] : graph_.node(b).subject.factors())
        if (x == y) return false;
    return true;
  }

  void index_node(std::size_t id) {
    const RCFact& f = graph_.node(id);
    by_subject_[f.subject.str()].push_back(id);
    if (f.is_strong() && f.pair.lo().is_neg_inf()) left_open_.push_back(id);
    if (f.is_strong() && f.pair.hi().is_pos_inf()) right_open_.push_back(id);
  }

  std::optional<Goal> goal_;
  SearchOptions opts_;
  FreshNames names_;
  Derivation graph_;
  std::vector<Meta> meta_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<std::size_t>> by_subject_;
  std::vector<std::size_t> left_open_, right_open_;
  SearchStats stats_;
  bool replaced_ = false;
};

struct SearchResult {
  std::optional<Derivation> derivation;
  SearchStats stats;
};

/// Shallowest derivation of `goal` within the budget.
inline SearchResult derive(const FactBase& base, const Goal& goal, const SearchOptions& options = {}) {
  Saturator sat(base, goal, options);
  if (auto hit = sat.best_match(0, goal)) return {sat.extract(*hit), sat.stats()};
  for (int d = 1; d <= options.budget; ++d) {
    bool grew = sat.step();
    if (auto hit = sat.best_match(d, goal)) return {sat.extract(*hit), sat.stats()};
    if (!grew || sat.stats().capped) break;
  }
  return {std::nullopt, sat.stats()};
}

}  // namespace rcalc
