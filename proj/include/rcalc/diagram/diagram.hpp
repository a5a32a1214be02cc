#pragma once

#include "rcalc/engine/derivation.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace rcalc::diagram {

/// Canvas geometry. The axis spans [margin, width - margin]; lanes sit
/// lane_gap apart above (positive) and below (negative) the axis.
struct DiagramSpec {
  double width = 640;
  double margin = 40;
  double lane_gap = 28;
  std::string title;
};

struct Item {
  RCFact fact;
  bool derived = false;  // drawn in the accent colour
};

struct PlacedArrow {
  double x1, x2;
  int lane;  // 1, -1, 2, -2, ...
  bool weak;
  bool derived;
  std::string label;
};

struct Tick {
  double x;
  std::string text;
};

struct Layout {
  DiagramSpec spec;
  std::vector<PlacedArrow> arrows;
  std::vector<Tick> ticks;
  int above = 0;
  int below = 0;

  double title_height() const { return spec.title.empty() ? 8 : 28; }
  double axis_y() const { return title_height() + (above + 0.5) * spec.lane_gap; }
  double height() const { return axis_y() + (below + 0.5) * spec.lane_gap + 24; }
  double lane_y(int lane) const { return axis_y() - lane * spec.lane_gap; }
};

/// phi(t) = t / (1 + |t|), extended by phi(-inf) = -1 and phi(inf) = 1.
inline double compactify(const Exponent& e) {
  if (e.is_neg_inf()) return -1;
  if (e.is_pos_inf()) return 1;
  double t = e.approx();
  return t / (1 + std::abs(t));
}

inline double x_of(const Exponent& e, const DiagramSpec& spec) {
  double W = spec.width - 2 * spec.margin;
  return spec.margin + W * (1 + compactify(e)) / 2;
}

namespace detail {

inline int lane_of(int k) { return k % 2 == 0 ? k / 2 + 1 : -(k / 2 + 1); }

}  // namespace detail

/// Places each fact as one arrow, first-fit over lanes 1, -1, 2, -2, ...
/// Lane choice is for legibility only: above and below mean the same.
inline Layout layout(const std::vector<Item>& items, const DiagramSpec& spec = {}) {
  if (items.empty()) throw Error("diagram needs at least one fact");
  Layout L;
  L.spec = spec;
  const double gap = 6;
  std::vector<std::vector<std::pair<double, double>>> lanes;
  for (const auto& it : items) {
    const RCFact& f = it.fact;
    PlacedArrow a{x_of(f.pair.lo(), spec), x_of(f.pair.hi(), spec), 0, f.is_weak(), it.derived, f.claim()};
    std::size_t k = 0;
    for (;; ++k) {
      if (k == lanes.size()) lanes.emplace_back();
      bool clash = false;
      for (auto [l, r] : lanes[k])
        if (a.x1 < r + gap && l < a.x2 + gap) clash = true;
      if (!clash) break;
    }
    lanes[k].push_back({a.x1, a.x2});
    a.lane = detail::lane_of(static_cast<int>(k));
    L.above = std::max(L.above, a.lane);
    L.below = std::max(L.below, -a.lane);
    L.arrows.push_back(std::move(a));
  }
  auto add_tick = [&](const Exponent& e) {
    std::string text = e.str();
    for (const auto& t : L.ticks)
      if (t.text == text) return;
    L.ticks.push_back({x_of(e, spec), text});
  };
  add_tick(Exponent(0));
  for (const auto& it : items) {
    add_tick(it.fact.pair.lo());
    add_tick(it.fact.pair.hi());
  }
  std::stable_sort(L.ticks.begin(), L.ticks.end(), [](const Tick& a, const Tick& b) { return a.x < b.x; });
  return L;
}

namespace detail {

inline std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

inline constexpr const char* kAccent = "#b03a2e";

inline std::string marker(const char* id, const char* points, int ref_x, const char* fill) {
  return std::string("<marker id=\"") + id + "\" markerWidth=\"10\" markerHeight=\"8\" refX=\"" +
         std::to_string(ref_x) + "\" refY=\"4\" orient=\"auto\" markerUnits=\"userSpaceOnUse\"><polygon points=\"" +
         points + "\" fill=\"" + fill + "\"/></marker>\n";
}

inline std::string header(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fx(width) + "\" height=\"" +
         fx(height) + "\" viewBox=\"0 0 " + fx(width) + " " + fx(height) + "\">\n"
         "<defs>\n" +
         marker("head-end", "0,0 10,4 0,8", 9, "#000000") + marker("head-start", "10,0 0,4 10,8", 1, "#000000") +
         marker("head-end-accent", "0,0 10,4 0,8", 9, kAccent) +
         marker("head-start-accent", "10,0 0,4 10,8", 1, kAccent) +
         "</defs>\n"
         "<rect x=\"0\" y=\"0\" width=\"" + fx(width) + "\" height=\"" + fx(height) + "\" fill=\"#ffffff\"/>\n";
}

// One panel body, shifted down by y0.
inline std::string body(const Layout& L, double y0) {
  const DiagramSpec& s = L.spec;
  std::string out = "<g transform=\"translate(0," + fx(y0) + ")\" font-family=\"sans-serif\">\n";
  if (!s.title.empty())
    out += "<text class=\"title\" x=\"" + fx(s.margin) + "\" y=\"18.00\" font-size=\"14\">" + escape(s.title) + "</text>\n";
  double ay = L.axis_y();
  out += "<path class=\"axis\" d=\"M" + fx(s.margin) + "," + fx(ay) + " H" + fx(s.width - s.margin) +
         "\" stroke=\"#000000\" stroke-width=\"1.5\" fill=\"none\"/>\n";
  double bottom = ay + (L.below + 0.5) * s.lane_gap;
  for (const auto& t : L.ticks) {
    out += "<line class=\"tick\" x1=\"" + fx(t.x) + "\" y1=\"" + fx(ay - 4) + "\" x2=\"" + fx(t.x) + "\" y2=\"" +
           fx(ay + 4) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out += "<text class=\"tick-label\" x=\"" + fx(t.x) + "\" y=\"" + fx(bottom + 14) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + escape(t.text) + "</text>\n";
  }
  for (const auto& a : L.arrows) {
    double y = L.lane_y(a.lane);
    std::string colour = a.derived ? kAccent : "#000000";
    std::string suffix = a.derived ? "-accent" : "";
    out += "<path class=\"arrow " + std::string(a.weak ? "weak" : "strong") + "\" d=\"M" + fx(a.x1) + "," + fx(y) +
           " H" + fx(a.x2) + "\" stroke=\"" + colour + "\" stroke-width=\"2\" fill=\"none\"" +
           (a.weak ? " stroke-dasharray=\"6,4\"" : "") +
           " marker-start=\"url(#head-start" + suffix + ")\" marker-end=\"url(#head-end" + suffix + ")\"/>\n";
    out += "<text class=\"label\" x=\"" + fx((a.x1 + a.x2) / 2) + "\" y=\"" + fx(y - 5) +
           "\" font-size=\"11\" text-anchor=\"middle\" fill=\"" + colour + "\">" + escape(a.label) + "</text>\n";
  }
  out += "</g>\n";
  return out;
}

}  // namespace detail

/// Standalone SVG 1.1 document for one layout.
inline std::string render(const Layout& L) {
  return detail::header(L.spec.width, L.height()) + detail::body(L, 0) + "</svg>\n";
}

/// Several layouts stacked vertically in one document.
inline std::string render_stack(const std::vector<Layout>& panels) {
  if (panels.empty()) throw Error("nothing to render");
  double width = 0, height = 0;
  for (const auto& p : panels) {
    width = std::max(width, p.spec.width);
    height += p.height();
  }
  std::string out = detail::header(width, height);
  double y = 0;
  for (const auto& p : panels) {
    out += detail::body(p, y);
    y += p.height();
  }
  return out + "</svg>\n";
}

/// One panel per derivation step: the parents in black, the result in the
/// accent colour. Consecutive SPLIT steps on the same parent share a panel.
inline std::vector<Layout> derivation_panels(const Derivation& d, DiagramSpec spec = {}) {
  std::vector<Layout> out;
  std::size_t n = d.steps.size();
  int number = 0;
  for (std::size_t i = 0; i < n;) {
    const Step& s = d.steps[i];
    std::size_t j = i + 1;
    if (s.tag == RuleTag::SPLIT)
      while (j < n && d.steps[j].tag == RuleTag::SPLIT && d.steps[j].parents == s.parents) ++j;
    std::vector<Item> items;
    for (auto p : s.parents) items.push_back({d.node(p), false});
    for (std::size_t k = i; k < j; ++k) items.push_back({d.steps[k].fact, true});
    DiagramSpec ps = spec;
    ps.title = std::to_string(++number) + ". " + tag_name(s.tag);
    out.push_back(layout(items, ps));
    i = j;
  }
  if (out.empty()) throw Error("derivation has no steps to draw");
  return out;
}

/// Facts of a base as one figure.
inline Layout fact_layout(const std::vector<RCFact>& facts, const DiagramSpec& spec = {}) {
  std::vector<Item> items;
  for (const auto& f : facts) items.push_back({f, false});
  return layout(items, spec);
}

}  // namespace rcalc::diagram
