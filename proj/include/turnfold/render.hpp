#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "turnfold/machine.hpp"
#include "turnfold/sim.hpp"

namespace turnfold {

struct RenderSpec {
  double scale = 24.0;  // pixels per grid unit
  bool show_states = true;
  bool highlight_blocked = true;
  std::size_t frame_stride = 1;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Box {
  double min_x = std::numeric_limits<double>::max(), min_y = min_x;
  double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
  void add(Embedded e) {
    min_x = std::min(min_x, e.x);
    max_x = std::max(max_x, e.x);
    min_y = std::min(min_y, e.y);
    max_y = std::max(max_y, e.y);
  }
};

// One configuration drawn into a group, with y flipped so the grid's +y points up.
inline std::string frame_group(const Configuration& c, const RenderSpec& spec, double dx, const Box& box) {
  const double pad = spec.scale;
  auto px = [&](GridPoint p) {
    const auto e = embed(p);
    return std::pair{dx + pad + (e.x - box.min_x) * spec.scale, pad + (box.max_y - e.y) * spec.scale};
  };
  std::string out = "<g class=\"frame\">\n";
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const bool hot = spec.highlight_blocked && is_blocked(move_status(c, i));
    auto [x1, y1] = px(c.position(i));
    auto [x2, y2] = px(c.position(i + 1));
    out += "<line class=\"bond" + std::string(hot ? " blocked" : "") + "\" x1=\"" + num(x1) + "\" y1=\"" +
           num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" +
           (hot ? "#d62728" : "#444444") + "\" stroke-width=\"" + num(spec.scale * 0.15) + "\"/>\n";
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto [x, y] = px(c.position(i));
    out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(spec.scale * 0.3) + "\" fill=\"" +
           (c.state(i) == 0 ? "#ffffff" : "#9ecae1") + "\" stroke=\"#222222\"/>\n";
    if (spec.show_states)
      out += "<text x=\"" + num(x) + "\" y=\"" + num(y + spec.scale * 0.12) + "\" font-size=\"" +
             num(spec.scale * 0.35) + "\" text-anchor=\"middle\">" + std::to_string(c.state(i)) + "</text>\n";
  }
  out += "</g>\n";
  return out;
}

inline std::string document(const std::string& body, double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" + body + "</svg>\n";
}

}  // namespace detail

inline std::string render_svg(const Configuration& c, const RenderSpec& spec = {}) {
  if (!(spec.scale > 0)) throw std::invalid_argument("render scale must be positive");
  detail::Box box;
  for (std::size_t i = 0; i < c.size(); ++i) box.add(embed(c.position(i)));
  const double w = (box.max_x - box.min_x) * spec.scale + 2 * spec.scale;
  const double h = (box.max_y - box.min_y) * spec.scale + 2 * spec.scale;
  return detail::document(detail::frame_group(c, spec, 0.0, box), w, h);
}

// Every frame_stride-th configuration of a trajectory, left to right, plus the last one.
inline std::string render_trajectory_svg(const TurningMachine& tm, std::span<const TrajectoryEvent> events,
                                         const RenderSpec& spec = {}) {
  if (!(spec.scale > 0)) throw std::invalid_argument("render scale must be positive");
  const std::size_t stride = std::max<std::size_t>(1, spec.frame_stride);
  std::vector<Configuration> frames{Configuration(tm)};
  Configuration c(tm);
  for (std::size_t k = 0; k < events.size(); ++k) {
    c = apply_move(c, events[k].monomer);
    if ((k + 1) % stride == 0 || k + 1 == events.size()) frames.push_back(c);
  }
  detail::Box box;
  for (const auto& f : frames)
    for (std::size_t i = 0; i < f.size(); ++i) box.add(embed(f.position(i)));
  const double fw = (box.max_x - box.min_x) * spec.scale + 2 * spec.scale;
  const double h = (box.max_y - box.min_y) * spec.scale + 2 * spec.scale;
  std::string body;
  for (std::size_t k = 0; k < frames.size(); ++k) body += detail::frame_group(frames[k], spec, double(k) * fw, box);
  return detail::document(body, fw * double(frames.size()), h);
}

}  // namespace turnfold
