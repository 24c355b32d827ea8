#ifndef PERV_SVG_HPP
#define PERV_SVG_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "perv/transport.hpp"

namespace perv {

namespace svg {

struct Pt {
  double x = 0, y = 0;
};

inline Pt to_pt(const GaussRat& z) { return {z.re.raw().get_d(), z.im.raw().get_d()}; }

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

/// Plane coordinates to canvas pixels (y grows downward on the canvas).
struct View {
  double min_x, max_y, scale, pad;
  Pt map(Pt p) const { return {pad + (p.x - min_x) * scale, pad + (max_y - p.y) * scale}; }
};

/// The avoidance path as a polyline in plane coordinates; detours are semicircles of
/// radius `r` around each intermediate point on the side the word selects.
inline std::vector<Pt> avoidance_polyline(const LocalizedPerv& f, const PathSpec& spec, double r) {
  const Pt a = to_pt(f.point(spec.from)), b = to_pt(f.point(spec.to));
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const Pt u{(b.x - a.x) / len, (b.y - a.y) / len};
  const double phi = std::atan2(u.y, u.x);
  const auto mids = intermediate_indices(f.config(), spec.from, spec.to);
  const Word word = spec.alien || spec.word.empty() ? Word(mids.size(), '+') : spec.word;
  std::vector<Pt> out{a};
  for (std::size_t t = 0; t < mids.size(); ++t) {
    const Pt c = to_pt(f.point(mids[t]));
    // From the incoming side (angle φ+π) to the outgoing side (φ): through φ+3π/2 for '+'
    // (right of travel), through φ+π/2 for '-'.
    const double end = word[t] == '+' ? phi + 2 * M_PI : phi;
    for (int k = 0; k <= 16; ++k) {
      const double th = phi + M_PI + (end - phi - M_PI) * k / 16.0;
      out.push_back({c.x + r * std::cos(th), c.y + r * std::sin(th)});
    }
  }
  out.push_back(b);
  return out;
}

}  // namespace svg

/// Static diagram: points with labels, Stokes directions in an inset compass, and an
/// optional avoidance path. Byte-deterministic for fixed input.
inline std::string render_svg(const LocalizedPerv& f, const std::optional<PathSpec>& path = std::nullopt) {
  using namespace svg;
  std::vector<Pt> pts;
  for (const auto& p : f.config().points()) pts.push_back(to_pt(p));
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k == 0 || pts[k].x < min_x) min_x = pts[k].x;
    if (k == 0 || pts[k].x > max_x) max_x = pts[k].x;
    if (k == 0 || pts[k].y < min_y) min_y = pts[k].y;
    if (k == 0 || pts[k].y > max_y) max_y = pts[k].y;
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  min_x -= span * 0.1;
  max_x += span * 0.1;
  min_y -= span * 0.1;
  max_y += span * 0.1;
  const double scale = 400.0 / std::max(max_x - min_x, max_y - min_y);
  const View view{min_x, max_y, scale, 20};
  const double width = (max_x - min_x) * scale + 40 + 120, height = std::max((max_y - min_y) * scale + 40, 140.0);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (path) {
    if (path->from >= f.size() || path->to >= f.size()) throw Error(ErrorKind::UnknownPoint, "path names a missing point");
    double gap = std::hypot(pts[path->to].x - pts[path->from].x, pts[path->to].y - pts[path->from].y);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) gap = std::min(gap, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
    os << "<polyline class=\"path\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const Pt& p : avoidance_polyline(f, *path, gap * 0.25)) {
      const Pt q = view.map(p);
      os << (first ? "" : " ") << num(q.x) << ',' << num(q.y);
      first = false;
    }
    os << "\"/>\n";
  }

  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Pt q = view.map(pts[k]);
    os << "<circle class=\"point\" cx=\"" << num(q.x) << "\" cy=\"" << num(q.y) << "\" r=\"4\" fill=\"black\"/>\n";
    os << "<text x=\"" << num(q.x + 6) << "\" y=\"" << num(q.y - 6) << "\" font-size=\"12\" font-family=\"sans-serif\">"
       << k << "</text>\n";
  }

  // Compass of Stokes directions.
  const Pt hub{width - 70, 70};
  os << "<circle cx=\"" << num(hub.x) << "\" cy=\"" << num(hub.y) << "\" r=\"50\" fill=\"none\" stroke=\"#999\"/>\n";
  for (const auto& z : stokes_directions(f.config())) {
    const Pt d = to_pt(z);
    const double len = std::hypot(d.x, d.y);
    os << "<line class=\"stokes-ray\" x1=\"" << num(hub.x) << "\" y1=\"" << num(hub.y) << "\" x2=\""
       << num(hub.x + 50 * d.x / len) << "\" y2=\"" << num(hub.y - 50 * d.y / len) << "\" stroke=\"#2471a3\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace perv

#endif  // PERV_SVG_HPP
