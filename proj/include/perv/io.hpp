#ifndef PERV_IO_HPP
#define PERV_IO_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "perv/convolution.hpp"

namespace perv {

using Json = nlohmann::json;

/// A stored object plus optional records that travel with it: the block provenance of a
/// convolution, transports recorded for later comparison ("observed", keyed by path spec),
/// and free-form provenance.
struct Document {
  LocalizedPerv sheaf;
  std::optional<TensorIndex> tensor_index;
  std::map<std::string, QMatrix> observed;
  Json provenance;  // null when absent
  friend bool operator==(const Document&, const Document&) = default;
};

namespace io {

inline Error parse_error(const std::string& what) { return Error(ErrorKind::ParseError, what); }

inline Json to_json(const Rational& q) { return q.str(); }

inline Rational rational_from(const Json& j) {
  if (!j.is_string()) throw parse_error("rational must be a \"p/q\" string, got " + j.dump());
  return Rational::parse(j.get<std::string>());
}

inline Json to_json(const GaussRat& z) { return Json{{"re", to_json(z.re)}, {"im", to_json(z.im)}}; }

inline GaussRat gauss_from(const Json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) throw parse_error("point must be {\"re\",\"im\"}");
  return {rational_from(j.at("re")), rational_from(j.at("im"))};
}

inline Json to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Rows of "p/q" strings; the expected shape disambiguates empty matrices.
inline QMatrix matrix_from(const Json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array() || j.size() != rows) throw parse_error(what + ": expected " + std::to_string(rows) + " rows");
  QMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw parse_error(what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_from(row[c]);
  }
  return m;
}

inline QMatrix square_from(const Json& j, const std::string& what) {
  if (!j.is_array()) throw parse_error(what + ": expected a matrix");
  return matrix_from(j, j.size(), j.size(), what);
}

inline std::string pair_key(std::size_t i, std::size_t j) { return std::to_string(i) + "->" + std::to_string(j); }

inline Json to_json(const Configuration& cfg) {
  Json pts = Json::array();
  for (const auto& p : cfg.points()) pts.push_back(to_json(p));
  return pts;
}

inline Json to_json(const TensorIndex& index) {
  Json out = Json::array();
  for (const auto& blocks : index.points) {
    Json row = Json::array();
    for (const auto& s : blocks)
      row.push_back({{"left", s.left}, {"right", s.right}, {"offset", s.offset}, {"rows", s.rows}, {"cols", s.cols}});
    out.push_back(std::move(row));
  }
  return out;
}

inline TensorIndex tensor_index_from(const Json& j) {
  if (!j.is_array()) throw parse_error("tensor_index must be an array");
  TensorIndex index;
  for (const auto& row : j) {
    std::vector<Splitting> blocks;
    for (const auto& s : row)
      blocks.push_back({s.at("left").get<std::size_t>(), s.at("right").get<std::size_t>(),
                        s.at("offset").get<std::size_t>(), s.at("rows").get<std::size_t>(),
                        s.at("cols").get<std::size_t>()});
    index.points.push_back(std::move(blocks));
  }
  return index;
}

inline Json to_json(const LocalizedPerv& f) {
  Json phi = Json::array();
  for (std::size_t k = 0; k < f.size(); ++k) phi.push_back({{"dim", f.dim(k)}, {"monodromy", to_json(f.phi(k).monodromy())}});
  Json mplus = Json::object();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (i != j) mplus[pair_key(i, j)] = to_json(f.based(i, j));
  return Json{{"points", to_json(f.config())}, {"phi", phi}, {"mplus", mplus}};
}

inline LocalizedPerv sheaf_from(const Json& j) {
  if (!j.is_object()) throw parse_error("object must be a JSON object");
  for (const char* key : {"points", "phi", "mplus"})
    if (!j.contains(key)) throw parse_error(std::string("missing key \"") + key + "\"");
  std::vector<GaussRat> pts;
  for (const auto& p : j.at("points")) pts.push_back(gauss_from(p));
  const std::size_t n = pts.size();
  std::vector<CircleLocalSystem> phi;
  for (const auto& s : j.at("phi")) {
    const std::size_t d = s.at("dim").get<std::size_t>();
    phi.emplace_back(matrix_from(s.at("monodromy"), d, d, "monodromy"));
  }
  if (phi.size() != n) throw parse_error("phi has " + std::to_string(phi.size()) + " entries for " + std::to_string(n) + " points");
  const Json& m = j.at("mplus");
  std::vector<QMatrix> mplus(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const std::string key = pair_key(a, b);
      if (!m.contains(key)) throw parse_error("mplus is missing \"" + key + "\"");
      mplus[a * n + b] = matrix_from(m.at(key), phi[b].dim(), phi[a].dim(), "mplus " + key);
    }
  if (m.size() != n * (n - (n > 0 ? 1 : 0))) throw parse_error("mplus has unexpected keys");
  return LocalizedPerv(Configuration(pts), std::move(phi), std::move(mplus));
}

/// Shape of the matrix a path spec evaluates to.
inline std::pair<std::size_t, std::size_t> path_shape(const LocalizedPerv& f, const std::string& spec) {
  const PathSpec p = PathSpec::parse(spec);
  if (p.from >= f.size() || p.to >= f.size()) throw parse_error("path spec '" + spec + "' names a missing point");
  return {f.dim(p.to), f.dim(p.from)};
}

}  // namespace io

inline Json to_json(const Document& d) {
  Json j = io::to_json(d.sheaf);
  if (d.tensor_index) j["tensor_index"] = io::to_json(*d.tensor_index);
  if (!d.observed.empty()) {
    Json obs = Json::object();
    for (const auto& [spec, m] : d.observed) obs[spec] = io::to_json(m);
    j["observed"] = obs;
  }
  if (!d.provenance.is_null()) j["provenance"] = d.provenance;
  return j;
}

inline Document document_from(const Json& j) {
  Document d{io::sheaf_from(j), std::nullopt, {}, nullptr};
  for (const auto& [key, value] : j.items())
    if (key != "points" && key != "phi" && key != "mplus" && key != "tensor_index" && key != "observed" &&
        key != "provenance")
      throw io::parse_error("unknown key \"" + key + "\"");
  if (j.contains("tensor_index")) d.tensor_index = io::tensor_index_from(j.at("tensor_index"));
  if (j.contains("observed"))
    for (const auto& [spec, m] : j.at("observed").items()) {
      const auto [rows, cols] = io::path_shape(d.sheaf, spec);
      d.observed[spec] = io::matrix_from(m, rows, cols, "observed " + spec);
    }
  if (j.contains("provenance")) d.provenance = j.at("provenance");
  return d;
}

/// Canonical text: keys sorted, two-space indent, trailing newline.
inline std::string dump(const Document& d) { return to_json(d).dump(2) + "\n"; }

inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw io::parse_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    return document_from(j);
  } catch (const Json::exception& e) {
    throw io::parse_error(std::string("malformed object: ") + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << text;
}

/// Named documents stored as <dir>/<name>.json.
class Workspace {
 public:
  explicit Workspace(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static void check_name(const std::string& name) {
    if (name.empty() || name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") !=
                            std::string::npos || name[0] == '.')
      throw Error(ErrorKind::ParseError, "bad object name '" + name + "'");
  }

  std::filesystem::path path(const std::string& name) const {
    check_name(name);
    return dir_ / (name + ".json");
  }

  bool contains(const std::string& name) const { return std::filesystem::exists(path(name)); }

  Document load(const std::string& name) const {
    if (!contains(name)) throw Error(ErrorKind::UnknownObject, "no object named '" + name + "' in " + dir_.string());
    return parse_document(read_file(path(name)));
  }

  void save(const std::string& name, const Document& d) const {
    std::filesystem::create_directories(dir_);
    write_file(path(name), dump(d));
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace perv

#endif  // PERV_IO_HPP
