#ifndef PERV_FIXTURES_HPP
#define PERV_FIXTURES_HPP

#include <string>
#include <vector>

#include "perv/checks.hpp"
#include "perv/lefschetz.hpp"

namespace perv {

namespace fixtures {

inline Json points_json(const Configuration& cfg) { return io::to_json(cfg); }

/// Records a few transports so the check suite can compare them with the engine.
inline void record(Document& d, const std::vector<std::string>& specs) {
  for (const auto& s : specs) d.observed[s] = evaluate_path(d.sheaf, PathSpec::parse(s));
}

inline Document plain(LocalizedPerv f, const std::string& origin) {
  return {std::move(f), std::nullopt, {}, Json{{"fixture", origin}}};
}

}  // namespace fixtures

/// Fixtures run by `check --all-fixtures`. "corrupted" is available by name only.
inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"unit",          "skyscraper",   "two-point", "collinear-triple",
                                              "collinear-five", "parallelogram", "lefschetz-cubic"};
  return names;
}

/// Deterministic named objects; random data is drawn from a generator seeded with `seed`.
inline Document fixture(const std::string& name, std::uint64_t seed) {
  using fixtures::plain;
  rnd::Gen gen(seed);
  const auto g = [](long re, long im) { return GaussRat(re, im); };
  if (name == "unit") return plain(unit_object(), name);
  if (name == "skyscraper")
    return plain(LocalizedPerv(Configuration({g(0, 0)}), {CircleLocalSystem(QMatrix{{1, 1}, {0, 1}})}, {QMatrix(2, 2)}),
                 name);
  if (name == "two-point") return plain(gen.object(Configuration({g(0, 0), g(2, 1)}), 2), name);
  if (name == "collinear-triple" || name == "corrupted") {
    Document d = plain(gen.object(Configuration({g(0, 0), g(1, 1), g(2, 2)}), 2), name);
    fixtures::record(d, {"0->2:+", "0->2:-", "2->0:-", "0->2:alien"});
    if (name == "corrupted") {
      QMatrix& m = d.observed.at("0->2:-");
      m(0, 0) += Rational(1);
    }
    return d;
  }
  if (name == "collinear-five") {
    std::vector<GaussRat> pts;
    for (long k = 0; k < 5; ++k) pts.push_back(g(1 - k, 2 * k));
    pts.push_back(g(3, 5));
    Document d = plain(gen.object(Configuration(pts), 2), name);
    fixtures::record(d, {"0->4:+-+", "4->0:--+", "0->4:alien"});
    return d;
  }
  if (name == "parallelogram") {
    const LocalizedPerv left = gen.object(Configuration({g(0, 0), g(2, 1)}), 1);
    const LocalizedPerv right = gen.object(Configuration({g(0, 0), g(-1, 3)}), 1);
    Convolution c = convolve(left, right);
    Json prov{{"fixture", name},
              {"factor_points", {{"left", io::to_json(left.config())}, {"right", io::to_json(right.config())}}}};
    return {std::move(c.sheaf), std::move(c.index), {}, std::move(prov)};
  }
  if (name == "lefschetz-cubic") {
    LefschetzSheaf l = lefschetz_sheaf({Rational(1), Rational(0), Rational(-3), Rational(0)});
    return {std::move(l.sheaf), std::nullopt, {}, Json{{"fixture", name}, {"polynomial", "1,0,-3,0"},
                                                      {"rotation", io::to_json(l.report.rotation)}}};
  }
  throw Error(ErrorKind::UnknownObject, "no fixture named '" + name + "'");
}

}  // namespace perv

#endif  // PERV_FIXTURES_HPP
