// Command-line front end over a directory of named objects.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "perv/fixtures.hpp"
#include "perv/svg.hpp"

using namespace perv;

namespace {

constexpr int kOk = 0, kUsage = 1, kDataError = 2, kCheckFailure = 3;

struct Options {
  bool json = false;
  std::uint64_t seed = 1;
  unsigned precision = kDefaultPrecision;
  std::string workspace = ".perv";
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

/// "re,im" with rational parts.
GaussRat parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorKind::ParseError, "point '" + text + "' must be re,im");
  return {Rational::parse(parts[0]), Rational::parse(parts[1])};
}

/// "re,im;re,im;..."
std::vector<GaussRat> parse_points(const std::string& text) {
  std::vector<GaussRat> out;
  for (const auto& p : split(text, ';'))
    if (!p.empty()) out.push_back(parse_point(p));
  return out;
}

std::vector<GaussRat> parse_displacements(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("displacements: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "displacements must be a JSON array of {\"re\",\"im\"}");
  std::vector<GaussRat> out;
  for (const auto& d : j) out.push_back(io::gauss_from(d));
  return out;
}

Json certificate_json(const Perturbation& p) {
  Json disp = Json::array();
  for (const auto& d : p.displacements) disp.push_back(io::to_json(d));
  Json sides = Json::array();
  for (const auto& s : p.sides) sides.push_back({{"from", s.from}, {"to", s.to}, {"word", s.word}});
  return {{"displacements", disp}, {"sides", sides}};
}

void print_matrix(const QMatrix& m, const Options& o) {
  if (o.json) std::cout << Json{{"matrix", io::to_json(m)}}.dump(2) << '\n';
  else std::cout << m << '\n';
}

int report_checks(const std::vector<std::pair<std::string, CheckReport>>& reports, const Options& o) {
  bool ok = true;
  Json all = Json::object();
  for (const auto& [name, rep] : reports) {
    ok = ok && rep.passed();
    Json rows = Json::array();
    for (const auto& r : rep.results)
      rows.push_back({{"check", r.name}, {"status", std::string(to_string(r.status))}, {"detail", r.detail}});
    all[name] = rows;
  }
  if (o.json) std::cout << all.dump(2) << '\n';
  else
    for (const auto& [name, rep] : reports) std::cout << "== " << name << '\n' << rep.str();
  return ok ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with localized perverse sheaves on the plane"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("--seed", o.seed, "Seed for randomized data and check suites");
  app.add_option("--precision", o.precision, "Decimal digits for lefschetz-gen");
  app.add_option("--workspace", o.workspace, "Directory holding named objects");

  std::string name, other, out, spec, points, file, fixture_name, base, disp, poly, target;
  std::size_t max_dim = 2, from = 0, to = 0;
  bool all_fixtures = false, direction_frame = false;

  auto* c_new = app.add_subcommand("new", "Create an object from a fixture, a JSON file, or points with random data");
  c_new->add_option("name", name)->required();
  auto* g_src = c_new->add_option_group("source");
  g_src->add_option("--fixture", fixture_name, "Named fixture");
  g_src->add_option("--file", file, "JSON file");
  g_src->add_option("--points", points, "Points \"re,im;re,im;...\" with seeded random data");
  g_src->require_option(1);
  c_new->add_option("--max-dim", max_dim, "Largest stalk dimension for random data");

  auto* c_sum = app.add_subcommand("sum", "Direct sum A ⊕ B");
  auto* c_conv = app.add_subcommand("convolve", "Additive convolution A * B");
  for (auto* c : {c_sum, c_conv}) {
    c->add_option("a", name)->required();
    c->add_option("b", other)->required();
    c->add_option("out", out)->required();
  }

  auto* c_tr = app.add_subcommand("transport", "Transport along a path spec \"i->j:+-\" or \"i->j:alien\"");
  c_tr->add_option("name", name)->required();
  c_tr->add_option("path", spec)->required();
  c_tr->add_flag("--direction-stalks", direction_frame, "Report in direction stalks instead of base stalks");

  auto* c_alien = app.add_subcommand("alien", "Alien derivative transport m^Δ between two points");
  c_alien->add_option("name", name)->required();
  c_alien->add_option("from", from)->required();
  c_alien->add_option("to", to)->required();

  auto* c_stokes = app.add_subcommand("stokes", "Stokes report: directions, operators, logarithms, Δ list, monodromy");
  c_stokes->add_option("name", name)->required();

  auto* c_ft = app.add_subcommand("ftmono", "Monodromy of the generic Fourier stalk");
  c_ft->add_option("name", name)->required();
  c_ft->add_option("--base", base, "Base direction \"re,im\" (default: a non-Stokes direction)");

  auto* c_pert = app.add_subcommand("perturb", "Move the points; prints the side certificate");
  c_pert->add_option("name", name)->required();
  c_pert->add_option("out", out)->required();
  c_pert->add_option("--displacements", disp, "JSON array of {\"re\":\"p/q\",\"im\":\"p/q\"}")->required();

  auto* c_spec = app.add_subcommand("specialize", "Recover the object on the original configuration");
  c_spec->add_option("name", name)->required();
  c_spec->add_option("target", target, "Object whose configuration is the target")->required();
  c_spec->add_option("out", out)->required();
  c_spec->add_option("--displacements", disp, "Displacement that produced NAME from TARGET's configuration")->required();

  auto* c_lef = app.add_subcommand("lefschetz-gen", "Lefschetz object of a one-variable polynomial");
  c_lef->add_option("out", out)->required();
  c_lef->add_option("--poly", poly, "Coefficients, highest degree first, constant term last: \"1,0,-3,0\"")->required();

  auto* c_check = app.add_subcommand("check", "Run the invariant suite");
  auto* g_check = c_check->add_option_group("target");
  g_check->add_option("name", name, "Object in the workspace, or a fixture name");
  g_check->add_flag("--all-fixtures", all_fixtures, "Every built-in fixture");
  g_check->require_option(1);

  auto* c_render = app.add_subcommand("render", "Static SVG diagram");
  c_render->add_option("name", name)->required();
  c_render->add_option("out", out)->required();
  c_render->add_option("--path", spec, "Overlay an avoidance path \"i->j:+-\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kUsage;
  }

  const Workspace ws(o.workspace);
  auto load = [&](const std::string& n) { return ws.load(n); };
  auto save = [&](const std::string& n, const Document& d) {
    ws.save(n, d);
    if (!o.json) std::cout << "saved " << ws.path(n).string() << '\n';
  };

  try {
    if (*c_new) {
      Document d;
      if (!fixture_name.empty()) d = fixture(fixture_name, o.seed);
      else if (!file.empty()) d = parse_document(read_file(file));
      else {
        rnd::Gen gen(o.seed);
        d = {gen.object(Configuration(parse_points(points)), max_dim), std::nullopt, {},
             Json{{"random", {{"seed", o.seed}, {"max_dim", max_dim}}}}};
      }
      save(name, d);
      if (o.json) std::cout << dump(d);
    } else if (*c_sum) {
      save(out, {direct_sum(load(name).sheaf, load(other).sheaf), std::nullopt, {}, Json{{"sum", {name, other}}}});
    } else if (*c_conv) {
      const LocalizedPerv a = load(name).sheaf, b = load(other).sheaf;
      Convolution c = convolve(a, b);
      Json prov{{"convolution", {name, other}},
                {"factor_points", {{"left", io::to_json(a.config())}, {"right", io::to_json(b.config())}}}};
      save(out, {std::move(c.sheaf), std::move(c.index), {}, std::move(prov)});
    } else if (*c_tr) {
      print_matrix(evaluate_path(load(name).sheaf, PathSpec::parse(spec),
                                 direction_frame ? Frame::DirectionStalks : Frame::Based),
                   o);
    } else if (*c_alien) {
      const LocalizedPerv f = load(name).sheaf;
      if (from >= f.size() || to >= f.size() || from == to)
        throw Error(ErrorKind::UnknownPoint, "need two distinct point indices below " + std::to_string(f.size()));
      print_matrix(m_alien(f, from, to), o);
    } else if (*c_stokes) {
      const LocalizedPerv f = load(name).sheaf;
      const auto dirs = stokes_directions(f.config());
      Json rep{{"directions", Json::array()}};
      std::ostringstream text;
      for (const auto& z : dirs) {
        const StokesData s = stokes_operator(f, z);
        Json deltas = Json::array();
        text << "direction " << z << "\n  St = " << s.op << "\n  log St = " << log_stokes(f, z) << '\n';
        for (const auto& w : differences_on_ray(f.config(), z)) {
          const QMatrix d = alien_operator(f, w);
          text << "  Δ_" << w << " = " << d << '\n';
          deltas.push_back({{"omega", io::to_json(w)}, {"delta", io::to_json(d)}});
        }
        rep["directions"].push_back({{"direction", io::to_json(z)},
                                     {"stokes", io::to_json(s.op)},
                                     {"log", io::to_json(log_stokes(f, z))},
                                     {"deltas", deltas}});
      }
      const GaussRat b = dirs.empty() ? GaussRat(1, 1) : checks::near_direction(f.config(), dirs.front());
      const QMatrix mono = ft_monodromy(f, b);
      text << "Fourier monodromy at base " << b << " = " << mono << '\n';
      rep["monodromy"] = {{"base", io::to_json(b)}, {"matrix", io::to_json(mono)}};
      if (o.json) std::cout << rep.dump(2) << '\n';
      else std::cout << text.str();
    } else if (*c_ft) {
      const LocalizedPerv f = load(name).sheaf;
      GaussRat b;
      if (!base.empty()) b = parse_point(base);
      else {
        const auto dirs = stokes_directions(f.config());
        b = dirs.empty() ? GaussRat(1, 1) : checks::near_direction(f.config(), dirs.front());
      }
      print_matrix(ft_monodromy(f, b), o);
    } else if (*c_pert) {
      const Document d = load(name);
      const Perturbation p = certify(d.sheaf.config(), parse_displacements(disp));
      save(out, {perturb(d.sheaf, p), std::nullopt, {}, Json{{"perturbation", certificate_json(p)}, {"of", name}}});
      std::cout << certificate_json(p).dump(2) << '\n';
    } else if (*c_spec) {
      const Configuration cfg = load(target).sheaf.config();
      const Perturbation p = certify(cfg, parse_displacements(disp));
      save(out, {specialize(load(name).sheaf, cfg, p), std::nullopt, {},
                 Json{{"specialization", certificate_json(p)}, {"of", name}}});
    } else if (*c_lef) {
      std::vector<Rational> coeffs;
      for (const auto& c : split(poly, ',')) coeffs.push_back(Rational::parse(c));
      LefschetzSheaf l = lefschetz_sheaf(coeffs, o.precision);
      Json values = Json::array();
      for (const auto& v : l.report.critical_values)
        values.push_back({{"re", v.re}, {"im", v.im}, {"radius", v.radius}, {"surrogate", io::to_json(v.surrogate)}});
      Json prov{{"polynomial", poly},
                {"rotation", io::to_json(l.report.rotation)},
                {"precision", l.report.precision},
                {"critical_values", values}};
      Document d{std::move(l.sheaf), std::nullopt, {}, prov};
      save(out, d);
      if (o.json) std::cout << dump(d);
      else std::cout << prov.dump(2) << '\n';
    } else if (*c_check) {
      std::vector<std::pair<std::string, CheckReport>> reports;
      if (all_fixtures)
        for (const auto& f : fixture_names()) reports.emplace_back(f, run_checks(fixture(f, o.seed), o.seed));
      else if (ws.contains(name))
        reports.emplace_back(name, run_checks(load(name), o.seed));
      else
        reports.emplace_back(name, run_checks(fixture(name, o.seed), o.seed));
      return report_checks(reports, o);
    } else if (*c_render) {
      std::optional<PathSpec> p;
      if (!spec.empty()) p = PathSpec::parse(spec);
      write_file(out, render_svg(load(name).sheaf, p));
      if (!o.json) std::cout << "wrote " << out << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}
