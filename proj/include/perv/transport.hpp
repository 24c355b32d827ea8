#ifndef PERV_TRANSPORT_HPP
#define PERV_TRANSPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "perv/sheaf.hpp"

namespace perv {

/// Avoidance word over the intermediate points of [a, b], listed from a to b.
/// '+' passes the point with the path on the right of the direction of travel, '-' on the left.
using Word = std::string;

inline void validate_word(const Word& w) {
  for (char c : w)
    if (c != '+' && c != '-') throw Error(ErrorKind::ParseError, "avoidance word '" + w + "' must use + and -");
}

inline std::size_t count_plus(const Word& w) { return static_cast<std::size_t>(std::count(w.begin(), w.end(), '+')); }
inline std::size_t count_minus(const Word& w) { return w.size() - count_plus(w); }

/// All words of length r in lexicographic order with '+' < '-'.
inline std::vector<Word> all_words(std::size_t r) {
  std::vector<Word> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    Word w(r, '+');
    for (std::size_t k = 0; k < r; ++k)
      if (mask >> (r - 1 - k) & 1) w[k] = '-';
    out.push_back(std::move(w));
  }
  return out;
}

enum class Frame { Based, DirectionStalks };

/// "i->j:+-+" (a rectilinear transport with avoidances), "i->j:" or "i->j" (no
/// intermediates) or "i->j:alien".
struct PathSpec {
  std::size_t from = 0;
  std::size_t to = 0;
  Word word;
  bool alien = false;

  static PathSpec parse(const std::string& text) {
    auto bad = [&] { return Error(ErrorKind::ParseError, "bad path spec '" + text + "'"); };
    const auto arrow = text.find("->");
    if (arrow == std::string::npos || arrow == 0) throw bad();
    const auto colon = text.find(':', arrow);
    const std::string lhs = text.substr(0, arrow);
    const std::string rhs = text.substr(arrow + 2, colon == std::string::npos ? std::string::npos : colon - arrow - 2);
    auto as_index = [&](const std::string& s) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
      return static_cast<std::size_t>(std::stoul(s));
    };
    PathSpec p;
    p.from = as_index(lhs);
    p.to = as_index(rhs);
    if (colon != std::string::npos) {
      std::string tail = text.substr(colon + 1);
      if (tail == "alien") p.alien = true;
      else {
        validate_word(tail);
        p.word = tail;
      }
    }
    return p;
  }

  std::string str() const {
    return std::to_string(from) + "->" + std::to_string(to) + ":" + (alien ? std::string("alien") : word);
  }
};

/// Evaluates avoidance transports along one segment [a_i, a_j] by the flip recursion.
///
/// Internally all matrices live in direction stalks: sources at ζ = a_j − a_i, targets at
/// −ζ, junctions Φ_k(−ζ) → Φ_k(ζ) by clockwise half-monodromy. Every sub-interval of the
/// chain a_i = c_0, c_1, …, c_{r+1} = a_j has a seed word whose transport is read from the
/// stored data; any other word is reached by flipping one position at a time toward the
/// seed:  m^{..-..} = m^{..+..} + m^{>k} H_k m^{<k}.
class TransportEngine {
 public:
  /// `seed_words` (indexed n*i+j, optional) names the word that the stored matrix of
  /// each pair represents; by default every stored matrix is m⁺. `flip_order` (optional)
  /// is a permutation of 0..r−1: among positions still to be flipped, the one appearing
  /// latest in it is unrolled first.
  TransportEngine(const LocalizedPerv& f, std::size_t i, std::size_t j,
                  const std::vector<Word>* seed_words = nullptr,
                  const std::vector<std::size_t>* flip_order = nullptr)
      : f_(f), seeds_(seed_words) {
    if (i >= f.size() || j >= f.size()) throw Error(ErrorKind::UnknownPoint, "path endpoint out of range");
    chain_.push_back(i);
    for (auto k : intermediate_indices(f.config(), i, j)) chain_.push_back(k);
    chain_.push_back(j);
    zeta_ = f.direction(i, j);
    for (std::size_t p = 1; p + 1 < chain_.size(); ++p) junction_.push_back(f.phi(chain_[p]).junction(zeta_));
    rank_.assign(r(), 0);
    if (flip_order) {
      if (flip_order->size() != r()) throw Error(ErrorKind::WordLength, "flip order length");
      std::vector<bool> seen(r(), false);
      for (std::size_t pos = 0; pos < r(); ++pos) {
        std::size_t k = (*flip_order)[pos];
        if (k >= r() || seen[k]) throw Error(ErrorKind::ShapeError, "flip order is not a permutation");
        seen[k] = true;
        rank_[k] = pos;
      }
    } else {
      std::iota(rank_.begin(), rank_.end(), std::size_t{0});
    }
  }

  std::size_t r() const { return chain_.size() - 2; }
  const std::vector<std::size_t>& chain() const { return chain_; }
  const GaussRat& direction() const { return zeta_; }
  /// Junction at the k-th intermediate point (0-based).
  const QMatrix& junction(std::size_t k) const { return junction_.at(k); }

  /// Stored matrix of the sub-interval (c_p, c_q) in direction stalks.
  QMatrix stored(std::size_t p, std::size_t q) const {
    return to_direction_frame(f_, chain_[p], chain_[q], f_.based(chain_[p], chain_[q]));
  }

  /// m^w for the whole segment, direction stalks.
  QMatrix eps(const Word& w) {
    if (w.size() != r())
      throw Error(ErrorKind::WordLength, "word '" + w + "' has length " + std::to_string(w.size()) + ", expected " +
                                             std::to_string(r()));
    validate_word(w);
    return sub(0, r() + 1, w);
  }

  /// m^w for the sub-interval (c_p, c_q); w covers c_{p+1}..c_{q−1}.
  QMatrix sub(std::size_t p, std::size_t q, const Word& w) {
    auto key = std::make_tuple(p, q, w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Word seed = seed_word(p, q);
    std::size_t pick = w.size();
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] != seed[k] && (pick == w.size() || rank_[p + k] > rank_[p + pick])) pick = k;
    QMatrix out;
    if (pick == w.size()) {
      out = stored(p, q);
    } else {
      Word closer = w;
      closer[pick] = seed[pick];
      const std::size_t mid = p + 1 + pick;
      QMatrix detour = sub(mid, q, w.substr(pick + 1)) * junction_[mid - 1] * sub(p, mid, w.substr(0, pick));
      out = sub(p, q, closer);
      if (w[pick] == '-') out += detour;
      else out -= detour;
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

  /// m⁺_{c_{i_s} b} H ⋯ H m⁺_{a c_{i_1}} for the 1-based intermediate subset `through`,
  /// composed straight from stored data.
  QMatrix chain_product(const std::vector<std::size_t>& through) const {
    std::size_t prev = 0;
    QMatrix acc;
    bool first = true;
    for (std::size_t k : through) {
      QMatrix leg = stored(prev, k);
      acc = first ? leg : leg * junction_[prev - 1] * acc;
      first = false;
      prev = k;
    }
    QMatrix last = stored(prev, r() + 1);
    return first ? last : last * junction_[prev - 1] * acc;
  }

  QMatrix to_based(const QMatrix& direction) const {
    return to_based_frame(f_, chain_.front(), chain_.back(), direction);
  }

 private:
  Word seed_word(std::size_t p, std::size_t q) const {
    if (!seeds_) return Word(q - p - 1, '+');
    const Word& s = (*seeds_)[chain_[p] * f_.size() + chain_[q]];
    if (s.size() != q - p - 1) throw Error(ErrorKind::WordLength, "seed word length mismatch");
    return s;
  }

  const LocalizedPerv& f_;
  const std::vector<Word>* seeds_;
  std::vector<std::size_t> chain_;
  GaussRat zeta_;
  std::vector<QMatrix> junction_;
  std::vector<std::size_t> rank_;
  std::map<std::tuple<std::size_t, std::size_t, Word>, QMatrix> memo_;
};

inline QMatrix output_frame(const TransportEngine& e, const QMatrix& direction, Frame frame) {
  return frame == Frame::Based ? e.to_based(direction) : direction;
}

inline QMatrix m_eps(const LocalizedPerv& f, std::size_t i, std::size_t j, const Word& w,
                     Frame frame = Frame::Based, const std::vector<std::size_t>* flip_order = nullptr) {
  TransportEngine e(f, i, j, nullptr, flip_order);
  return output_frame(e, e.eps(w), frame);
}

inline QMatrix m_plus(const LocalizedPerv& f, std::size_t i, std::size_t j, Frame frame = Frame::Based) {
  TransportEngine e(f, i, j);
  return m_eps(f, i, j, Word(e.r(), '+'), frame);
}

inline QMatrix m_minus(const LocalizedPerv& f, std::size_t i, std::size_t j, Frame frame = Frame::Based) {
  TransportEngine e(f, i, j);
  return output_frame(e, e.eps(Word(e.r(), '-')), frame);
}

/// |+|!·|−|!/(r+1)!
inline Rational ecalle_coefficient(const Word& w) {
  validate_word(w);
  return factorial(static_cast<unsigned>(count_plus(w))) * factorial(static_cast<unsigned>(count_minus(w))) /
         factorial(static_cast<unsigned>(w.size() + 1));
}

/// Weight of an s-fold chain in the subset expansion of the alien transport.
inline Rational alien_chain_coefficient(std::size_t s) { return Rational(1, static_cast<long>(s + 1)); }

namespace detail {
/// Calls fn(subset) for every subset of {1..r} as an increasing list.
inline void for_each_subset(std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> s;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    s.clear();
    for (std::size_t k = 0; k < r; ++k)
      if (mask >> k & 1) s.push_back(k + 1);
    fn(s);
  }
}
}  // namespace detail

enum class AlienMethod { SubsetSum, EcalleWeights };

inline QMatrix m_alien_direction(TransportEngine& e, AlienMethod method) {
  QMatrix acc;
  bool first = true;
  auto add = [&](const QMatrix& m) {
    if (first) acc = m;
    else acc += m;
    first = false;
  };
  if (method == AlienMethod::SubsetSum) {
    detail::for_each_subset(e.r(), [&](const std::vector<std::size_t>& s) {
      add(e.chain_product(s) * alien_chain_coefficient(s.size()));
    });
  } else {
    for (const Word& w : all_words(e.r())) add(e.eps(w) * ecalle_coefficient(w));
  }
  return acc;
}

inline QMatrix m_alien(const LocalizedPerv& f, std::size_t i, std::size_t j,
                       AlienMethod method = AlienMethod::SubsetSum, Frame frame = Frame::Based) {
  TransportEngine e(f, i, j);
  return output_frame(e, m_alien_direction(e, method), frame);
}

inline QMatrix evaluate_path(const LocalizedPerv& f, const PathSpec& p, Frame frame = Frame::Based) {
  if (p.alien) return m_alien(f, p.from, p.to, AlienMethod::SubsetSum, frame);
  return m_eps(f, p.from, p.to, p.word, frame);
}

// Picard–Lefschetz consequences, each evaluated independently of the flip recursion
// where possible.

/// m⁻ as the sum over all subsets of junction-composed m⁺ chains.
inline QMatrix pl_subset_minus(TransportEngine& e) {
  QMatrix acc;
  bool first = true;
  detail::for_each_subset(e.r(), [&](const std::vector<std::size_t>& s) {
    QMatrix c = e.chain_product(s);
    if (first) acc = c;
    else acc += c;
    first = false;
  });
  return acc;
}

/// m⁺ + Σ_i m⁺_{a_i b} H_i m⁻_{a a_i}.
inline QMatrix pl_recursive_minus(TransportEngine& e) {
  const std::size_t b = e.r() + 1;
  QMatrix acc = e.stored(0, b);
  for (std::size_t k = 1; k <= e.r(); ++k) acc += e.stored(k, b) * e.junction(k - 1) * e.sub(0, k, Word(k - 1, '-'));
  return acc;
}

/// The composite through every intermediate point, m_{a_r b} H ⋯ H m_{a a_1}.
inline QMatrix full_chain(const TransportEngine& e) {
  std::vector<std::size_t> all(e.r());
  std::iota(all.begin(), all.end(), std::size_t{1});
  return e.chain_product(all);
}

/// Σ_ε (−1)^{|+(ε)|} m^ε.
inline QMatrix signed_word_sum(TransportEngine& e) {
  QMatrix acc;
  bool first = true;
  for (const Word& w : all_words(e.r())) {
    QMatrix m = e.eps(w);
    if (count_plus(w) % 2) m *= Rational(-1);
    if (first) acc = m;
    else acc += m;
    first = false;
  }
  return acc;
}

inline bool compose_chain_identity_check(const LocalizedPerv& f, std::size_t i, std::size_t j) {
  TransportEngine e(f, i, j);
  if (e.r() == 0) throw Error(ErrorKind::WordLength, "composition identity needs intermediate points");
  return full_chain(e) == signed_word_sum(e);
}

/// Every flip order yields the same m^w.
inline bool flip_confluence_check(const LocalizedPerv& f, std::size_t i, std::size_t j, const Word& w) {
  TransportEngine base(f, i, j);
  const QMatrix ref = base.eps(w);
  std::vector<std::size_t> order(base.r());
  std::iota(order.begin(), order.end(), std::size_t{0});
  while (std::next_permutation(order.begin(), order.end())) {
    TransportEngine e(f, i, j, nullptr, &order);
    if (e.eps(w) != ref) return false;
  }
  return true;
}

/// Σ_{k=0}^{m} (−1)^k C(m,k)/(a+k+1) against m!·a!/(m+a+1)!.
inline bool beta_sum_check(unsigned a, unsigned m) {
  if (a == 0 || m == 0) throw Error(ErrorKind::ShapeError, "beta_sum_check needs a, m >= 1");
  Rational lhs(0);
  for (unsigned k = 0; k <= m; ++k) {
    Rational term = binomial(m, k) / Rational(static_cast<long>(a + k + 1));
    lhs += (k % 2) ? -term : term;
  }
  return lhs == factorial(m) * factorial(a) / factorial(m + a + 1);
}

// Triangular recovery -----------------------------------------------------------------

/// Given, for every ordered pair, a target value of some transport functional that
/// depends on the pair's own stored m⁺ with coefficient Id plus terms from strictly
/// shorter sub-intervals, solve for the stored m⁺ (by increasing intermediate count).
inline LocalizedPerv solve_triangular(
    const Configuration& config, const std::vector<CircleLocalSystem>& phi, const std::vector<QMatrix>& targets,
    const std::function<QMatrix(const LocalizedPerv&, std::size_t, std::size_t)>& functional) {
  const std::size_t n = config.size();
  if (targets.size() != n * n) throw Error(ErrorKind::ShapeError, "targets must hold n*n matrices");
  if (phi.size() != n) throw Error(ErrorKind::ShapeError, "phi count mismatch");
  std::vector<QMatrix> work(n * n);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      work[i * n + j] = QMatrix(phi[j].dim(), phi[i].dim());
      if (i != j) pairs.emplace_back(intermediate_indices(config, i, j).size(), i, j);
    }
  std::sort(pairs.begin(), pairs.end());
  for (auto [r, i, j] : pairs) {
    const QMatrix& t = targets[i * n + j];
    if (t.rows() != phi[j].dim() || t.cols() != phi[i].dim())
      throw Error(ErrorKind::ShapeError, "target " + std::to_string(i) + "->" + std::to_string(j) + " has shape " +
                                             t.shape_str());
    work[i * n + j] = QMatrix(phi[j].dim(), phi[i].dim());
    LocalizedPerv partial(config, phi, work);
    work[i * n + j] = t - functional(partial, i, j);
  }
  return LocalizedPerv(config, phi, std::move(work));
}

/// Inverse of the alien presentation: recovers stored m⁺ from based m^Δ for every pair.
inline LocalizedPerv alien_to_mplus(const Configuration& config, const std::vector<CircleLocalSystem>& phi,
                                    const std::vector<QMatrix>& alien_data) {
  return solve_triangular(config, phi, alien_data, [](const LocalizedPerv& f, std::size_t i, std::size_t j) {
    return m_alien(f, i, j, AlienMethod::SubsetSum);
  });
}

/// The based m^Δ family of an object (diagonal entries left as zero matrices).
inline std::vector<QMatrix> alien_data(const LocalizedPerv& f) {
  const std::size_t n = f.size();
  std::vector<QMatrix> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] = i == j ? QMatrix(f.dim(i), f.dim(i)) : m_alien(f, i, j);
  return out;
}

}  // namespace perv

#endif  // PERV_TRANSPORT_HPP
