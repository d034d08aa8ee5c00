#pragma once

// Per-row observation patterns (k observed columns per row), the derived
// co-occurrence weights EᵀE, and the observed entries themselves.

#include "osmc/matcore.hpp"

#include <algorithm>
#include <charconv>
#include <concepts>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace osmc {

/// Malformed text input; the message carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

using ColIndex = std::uint32_t;

/// Which k columns were observed in each of m rows. Row index lists are
/// sorted, distinct and < d. Stored flat (m*k), not as a dense mask.
class ObservationSet {
 public:
  ObservationSet() = default;

  ObservationSet(std::size_t m, std::size_t d, std::size_t k, std::vector<ColIndex> cols)
      : m_(m), d_(d), k_(k), cols_(std::move(cols)) {
    if (cols_.size() != m_ * k_) throw std::invalid_argument("ObservationSet: expected m*k column indices");
    for (std::size_t i = 0; i < m_; ++i) {
      auto r = row_mut(i);
      std::sort(r.begin(), r.end());
      for (std::size_t t = 0; t < k_; ++t) {
        if (r[t] >= d_) throw std::invalid_argument("ObservationSet: column index out of range in row " + std::to_string(i));
        if (t > 0 && r[t] == r[t - 1])
          throw std::invalid_argument("ObservationSet: duplicate column in row " + std::to_string(i));
      }
    }
  }

  std::size_t m() const { return m_; }
  std::size_t d() const { return d_; }
  std::size_t k() const { return k_; }

  std::span<const ColIndex> row(std::size_t i) const { return {cols_.data() + i * k_, k_}; }
  const std::vector<ColIndex>& flat() const { return cols_; }

  friend bool operator==(const ObservationSet&, const ObservationSet&) = default;

 private:
  std::span<ColIndex> row_mut(std::size_t i) { return {cols_.data() + i * k_, k_}; }

  std::size_t m_ = 0, d_ = 0, k_ = 0;
  std::vector<ColIndex> cols_;
};

/// Anything that can produce entry (i, j) of the underlying m x d matrix.
template <typename S>
concept EntrySource = requires(const S& s, Eigen::Index i, Eigen::Index j) {
  { s(i, j) } -> std::convertible_to<double>;
};

/// Observed values aligned with an ObservationSet: values[i*k + t] is the
/// entry at (i, obs.row(i)[t]).
struct ObservedEntries {
  ObservationSet obs;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * obs.k(), obs.k()}; }
};

/// Each row observes a uniformly random k-subset of [0, d), independently
/// across rows (partial Fisher-Yates).
inline ObservationSet sample_mask(std::size_t m, std::size_t d, std::size_t k, Rng& rng) {
  if (k < 2 || k > d)
    throw std::invalid_argument("sample_mask: need 2 <= k <= d (k=" + std::to_string(k) + ", d=" + std::to_string(d) + ")");
  std::vector<ColIndex> perm(d);
  std::iota(perm.begin(), perm.end(), ColIndex{0});
  std::vector<ColIndex> cols(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t j = t + static_cast<std::size_t>(rng.uniform_index(d - t));
      std::swap(perm[t], perm[j]);
    }
    std::copy_n(perm.begin(), k, cols.begin() + static_cast<std::ptrdiff_t>(i * k));
  }
  return ObservationSet(m, d, k, std::move(cols));
}

/// w = EᵀE for the 0/1 mask E: diagonal counts rows observing a column,
/// off-diagonal counts rows observing both columns.
struct CooccurrenceWeights {
  DenseMatrix w;
};

inline CooccurrenceWeights cooccurrence(const ObservationSet& obs) {
  const auto d = static_cast<Eigen::Index>(obs.d());
  DenseMatrix w = DenseMatrix::Zero(d, d);
  for (std::size_t i = 0; i < obs.m(); ++i) {
    const auto r = obs.row(i);
    for (const ColIndex a : r)
      for (const ColIndex b : r) w(a, b) += 1.0;
  }
  return {std::move(w)};
}

/// P_E(x): copy observed entries, zero the rest.
inline DenseMatrix apply_mask(const DenseMatrix& x, const ObservationSet& obs) {
  if (static_cast<std::size_t>(x.rows()) != obs.m() || static_cast<std::size_t>(x.cols()) != obs.d())
    throw std::invalid_argument("apply_mask: matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                " but mask is " + std::to_string(obs.m()) + "x" + std::to_string(obs.d()));
  DenseMatrix out = DenseMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < obs.m(); ++i)
    for (const ColIndex j : obs.row(i)) out(static_cast<Eigen::Index>(i), j) = x(static_cast<Eigen::Index>(i), j);
  return out;
}

/// Read the observed entries out of any entry source.
template <EntrySource S>
ObservedEntries observe(const S& x, const ObservationSet& obs) {
  ObservedEntries out{obs, std::vector<double>(obs.m() * obs.k())};
  for (std::size_t i = 0; i < obs.m(); ++i) {
    const auto r = obs.row(i);
    for (std::size_t t = 0; t < r.size(); ++t)
      out.values[i * obs.k() + t] = static_cast<double>(x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r[t])));
  }
  return out;
}

/// The unordered column pairs of a k=2 observation set, one per row.
inline std::vector<std::pair<ColIndex, ColIndex>> observed_pairs(const ObservationSet& obs) {
  if (obs.k() != 2) throw std::invalid_argument("observed_pairs: requires k = 2");
  std::vector<std::pair<ColIndex, ColIndex>> out;
  out.reserve(obs.m());
  for (std::size_t i = 0; i < obs.m(); ++i) out.emplace_back(obs.row(i)[0], obs.row(i)[1]);
  return out;
}

// Text format: header "m d k", then one line per row with k space-separated
// column indices.

inline void write_observation_set(std::ostream& os, const ObservationSet& obs) {
  os << obs.m() << ' ' << obs.d() << ' ' << obs.k() << '\n';
  for (std::size_t i = 0; i < obs.m(); ++i) {
    const auto r = obs.row(i);
    for (std::size_t t = 0; t < r.size(); ++t) os << (t ? " " : "") << r[t];
    os << '\n';
  }
}

namespace detail {

template <typename T>
T parse_token(const std::string& tok, std::size_t line) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError(line, "non-numeric token '" + tok + "'");
  return value;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

/// Next non-blank line; returns false at EOF.
inline bool next_line(std::istream& is, std::string& line, std::size_t& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

}  // namespace detail

inline ObservationSet read_observation_set(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_line(is, line, lineno)) throw ParseError(lineno + 1, "missing header 'm d k'");
  const auto head = detail::split_ws(line);
  if (head.size() != 3) throw ParseError(lineno, "malformed header, expected 'm d k'");
  const auto m = detail::parse_token<std::size_t>(head[0], lineno);
  const auto d = detail::parse_token<std::size_t>(head[1], lineno);
  const auto k = detail::parse_token<std::size_t>(head[2], lineno);
  std::vector<ColIndex> cols;
  cols.reserve(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    if (!detail::next_line(is, line, lineno)) throw ParseError(lineno + 1, "expected " + std::to_string(m) + " rows");
    const auto toks = detail::split_ws(line);
    if (toks.size() != k) throw ParseError(lineno, "expected " + std::to_string(k) + " column indices");
    std::vector<ColIndex> r;
    for (const auto& t : toks) {
      const auto c = detail::parse_token<std::size_t>(t, lineno);
      if (c >= d) throw ParseError(lineno, "column index " + t + " out of range");
      r.push_back(static_cast<ColIndex>(c));
    }
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) throw ParseError(lineno, "duplicate column index");
    cols.insert(cols.end(), r.begin(), r.end());
  }
  if (detail::next_line(is, line, lineno)) throw ParseError(lineno, "trailing content after last row");
  return ObservationSet(m, d, k, std::move(cols));
}

}  // namespace osmc
