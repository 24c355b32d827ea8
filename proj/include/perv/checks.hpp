#ifndef PERV_CHECKS_HPP
#define PERV_CHECKS_HPP

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "perv/deformation.hpp"
#include "perv/io.hpp"
#include "perv/random.hpp"
#include "perv/stokes.hpp"

namespace perv {

enum class CheckStatus { Pass, Fail, Skip };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skip: return "SKIP";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;  // witness on failure, reason on skip
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool passed() const {
    return std::none_of(results.begin(), results.end(), [](const CheckResult& r) { return r.status == CheckStatus::Fail; });
  }
  std::string str() const {
    std::ostringstream os;
    for (const auto& r : results) {
      os << r.name << ": " << to_string(r.status);
      if (!r.detail.empty()) os << " (" << r.detail << ")";
      os << '\n';
    }
    return os.str();
  }
};

namespace checks {

/// Thrown inside a check body to report the first counterexample.
struct Witness {
  std::string text;
};

inline std::string mat(const QMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

inline void expect_equal(const QMatrix& got, const QMatrix& want, const std::string& where) {
  if (got != want) throw Witness{where + ": got " + mat(got) + ", expected " + mat(want)};
}

inline void expect(bool ok, const std::string& where) {
  if (!ok) throw Witness{where};
}

inline CheckResult run(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string skip = body();
    return {name, skip.empty() ? CheckStatus::Pass : CheckStatus::Skip, skip};
  } catch (const Witness& w) {
    return {name, CheckStatus::Fail, w.text};
  } catch (const Error& e) {
    return {name, CheckStatus::Fail, e.what()};
  }
}

inline bool has_intermediates(const Configuration& cfg) {
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (i != j && !intermediate_indices(cfg, i, j).empty()) return true;
  return false;
}

/// A non-Stokes direction near ζ, turned slightly counterclockwise.
inline GaussRat near_direction(const Configuration& cfg, const GaussRat& zeta) {
  for (long k = 16;; k *= 2) {
    const GaussRat d = zeta * GaussRat(Rational(k), Rational(1));
    if (!is_stokes_direction(cfg, d)) return d;
  }
}

/// Random small displacement accepted by certify, if one is found quickly.
inline std::optional<Perturbation> small_move(rnd::Gen& gen, const Configuration& cfg) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<GaussRat> d;
    for (std::size_t k = 0; k < cfg.size(); ++k) d.push_back(gen.gauss(3) * GaussRat(Rational(1, 200)));
    try {
      return certify(cfg, d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidPerturbation) throw;
    }
  }
  return std::nullopt;
}

}  // namespace checks

/// Runs every identity the library guarantees on one object. Randomized parts (partner
/// objects, displacements, rotations) draw from a generator seeded with `seed`.
inline CheckReport run_checks(const Document& doc, std::uint64_t seed) {
  using namespace checks;
  const LocalizedPerv& f = doc.sheaf;
  const std::size_t n = f.size();
  rnd::Gen gen(seed);
  CheckReport rep;

  rep.results.push_back(run("json-round-trip", [&] {
    const std::string text = dump(doc);
    const Document back = parse_document(text);
    expect(back == doc, "reloaded document differs");
    expect(dump(back) == text, "second save is not byte-identical");
    return std::string();
  }));

  rep.results.push_back(run("frame-round-trip", [&] {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          expect_equal(to_based_frame(f, i, j, to_direction_frame(f, i, j, f.based(i, j))), f.based(i, j),
                       io::pair_key(i, j));
    return std::string();
  }));

  rep.results.push_back(run("picard-lefschetz", [&] {
    for (const auto& [spec, m] : doc.observed)
      expect_equal(evaluate_path(f, PathSpec::parse(spec)), m, "recorded transport " + spec);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        TransportEngine e(f, i, j);
        if (e.r() == 0 || e.r() > 5) continue;
        ++pairs;
        const QMatrix minus = e.eps(Word(e.r(), '-'));
        const std::string at = io::pair_key(i, j);
        expect_equal(pl_subset_minus(e), minus, at + " subset form");
        expect_equal(pl_recursive_minus(e), minus, at + " recursive form");
        expect(compose_chain_identity_check(f, i, j), at + " chain identity");
        for (const Word& w : all_words(e.r())) expect(flip_confluence_check(f, i, j, w), at + ":" + w + " flip order");
      }
    return pairs == 0 && doc.observed.empty() ? std::string("no pair has intermediate points") : std::string();
  }));

  rep.results.push_back(run("alien-methods-agree", [&] {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          expect_equal(m_alien(f, i, j, AlienMethod::SubsetSum), m_alien(f, i, j, AlienMethod::EcalleWeights),
                       io::pair_key(i, j));
    return std::string();
  }));

  rep.results.push_back(run("alien-determines-object", [&] {
    expect(alien_to_mplus(f.config(), f.phis(), alien_data(f)) == f, "m⁺ not recovered from alien data");
    return std::string();
  }));

  rep.results.push_back(run("log-stokes", [&] {
    for (const auto& z : stokes_directions(f.config())) {
      std::ostringstream at;
      at << "direction " << z;
      expect(log_stokes_check(f, z), at.str());
      expect(log_stokes_check(f, -z), "opposite of " + at.str());
    }
    return std::string();
  }));

  rep.results.push_back(run("unit-law", [&] {
    expect(convolve(f, unit_object()).sheaf == f, "F * unit differs from F");
    expect(convolve(unit_object(), f).sheaf == f, "unit * F differs from F");
    return std::string();
  }));

  rep.results.push_back(run("stokes-multiplicativity-and-leibniz", [&] {
    const auto dirs = stokes_directions(f.config());
    if (dirs.empty()) return std::string("no Stokes direction");
    const GaussRat zeta = dirs[gen.index(dirs.size())];
    for (int attempt = 0; attempt < 20; ++attempt) {
      const LocalizedPerv g = gen.object(gen.line_config(zeta, 2), 2);
      Convolution fg;
      try {
        fg = convolve(f, g);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::HorizontalPair) continue;
        throw;
      }
      expect(stokes_multiplicativity_check(f, g, zeta), "St multiplicativity along the sampled direction");
      expect(stokes_multiplicativity_check(f, g, -zeta), "St multiplicativity along the opposite direction");
      for (const auto& w : differences_on_ray(fg.sheaf.config(), zeta)) {
        std::ostringstream at;
        at << "Leibniz at " << w;
        expect(leibniz_check(f, g, w), at.str());
      }
      return std::string();
    }
    return std::string("no convolvable partner found");
  }));

  rep.results.push_back(run("fourier-monodromy-base-independence", [&] {
    const auto dirs = stokes_directions(f.config());
    const GaussRat b0 = dirs.empty() ? GaussRat(1, 1) : near_direction(f.config(), dirs.front());
    const GaussRat b1 = dirs.empty() ? GaussRat(-1, 2) : near_direction(f.config(), dirs.back());
    const QMatrix p = ft_transport(f, b0, b1);
    expect_equal(ft_monodromy(f, b1) * p, p * ft_monodromy(f, b0), "conjugation by the Fourier transport");
    return std::string();
  }));

  rep.results.push_back(run("rotation-composition", [&] {
    const GaussRat q = gen.nonzero_gauss(2), r = gen.nonzero_gauss(2);
    try {
      expect(rotate_by(rotate_by(f, q), r) == rotate_by(f, q * r), "rotating twice differs from one rotation");
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::HorizontalPair) return std::string("sampled rotation creates a horizontal pair");
      throw;
    }
    return std::string();
  }));

  rep.results.push_back(run("perturb-specialize", [&] {
    if (!has_intermediates(f.config())) return std::string("configuration is already generic");
    const auto p = small_move(gen, f.config());
    if (!p) return std::string("no admissible displacement sampled");
    const LocalizedPerv h = perturb(f, *p);
    expect(is_general_position(h.config()), "perturbed configuration is not generic");
    expect(specialize(h, f.config(), *p) == f, "specialize(perturb(F)) differs from F");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          expect_equal(alien_from_perturbed(h, f.config(), *p, i, j), m_alien(f, i, j), "alien " + io::pair_key(i, j));
    return std::string();
  }));

  rep.results.push_back(run("diagonal-transports-vanish", [&] {
    if (!doc.tensor_index || !doc.provenance.is_object() || !doc.provenance.contains("factor_points"))
      return std::string("not a recorded convolution");
    std::vector<GaussRat> left, right;
    for (const auto& p : doc.provenance.at("factor_points").at("left")) left.push_back(io::gauss_from(p));
    for (const auto& p : doc.provenance.at("factor_points").at("right")) right.push_back(io::gauss_from(p));
    const auto& index = doc.tensor_index->points;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const GaussRat zeta = f.point(b) - f.point(a);
        TransportEngine e(f, a, b);
        for (char side : {'+', '-'}) {
          const QMatrix m = e.eps(Word(e.r(), side));
          for (const auto& s : index[a])
            for (const auto& t : index[b]) {
              const bool parallel = nonnegative_ratio(left[t.left] - left[s.left], zeta) &&
                                    nonnegative_ratio(right[t.right] - right[s.right], zeta);
              if (!parallel)
                expect(m.block(t.offset, s.offset, t.rows, s.cols).is_zero(),
                       io::pair_key(a, b) + " block (" + std::to_string(s.left) + "," + std::to_string(s.right) +
                           ")->(" + std::to_string(t.left) + "," + std::to_string(t.right) + ") is nonzero");
            }
        }
      }
    return std::string();
  }));

  return rep;
}

}  // namespace perv

#endif  // PERV_CHECKS_HPP
