#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace weil {

/// A multi-index n = (n^1, ..., n^d) of nonnegative polynomial degrees.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  std::size_t dim() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  std::span<const int> entries() const { return entries_; }

  /// Total order |n| = n^1 + ... + n^d.
  int total_order() const;
  int max_entry() const;
  /// Number of nonzero components.
  int nonzero_count() const;

  /// Colon-joined form, e.g. "1:0:2".
  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// Graded lexicographic relation: lower total order first, ties broken by
/// the first coordinate at which the indices differ. Throws InvalidArgument
/// on dimension mismatch.
bool order_less(const MultiIndex& a, const MultiIndex& b);

enum class IndexSetKind { TensorProduct, TotalDegree, Custom };

std::string to_string(IndexSetKind kind);
IndexSetKind parse_index_set_kind(const std::string& s);

/// Ordered finite set of multi-indices spanning a polynomial space.
class IndexSet {
 public:
  /// Builds the TP set {max_j n^j <= q} or the TD set {|n| <= q}.
  static IndexSet build(IndexSetKind kind, int q, int d);

  /// An arbitrary set of indices (sorted, duplicates rejected). `q` is the
  /// largest per-coordinate degree present.
  static IndexSet custom(int d, std::vector<MultiIndex> indices);

  IndexSetKind kind() const { return kind_; }
  int q() const { return q_; }
  int dim() const { return d_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Largest per-coordinate degree over the set.
  int max_degree() const;
  /// Position of `n` in the ordering, or size() when absent.
  std::size_t find(const MultiIndex& n) const;
  bool contains(const MultiIndex& n) const { return find(n) != size(); }

 private:
  IndexSet(IndexSetKind kind, int q, int d, std::vector<MultiIndex> indices)
      : kind_(kind), q_(q), d_(d), indices_(std::move(indices)) {}

  IndexSetKind kind_;
  int q_;
  int d_;
  std::vector<MultiIndex> indices_;
};

/// Closed-form cardinality, (q+1)^d for TP and C(q+d, d) for TD. Throws
/// InvalidArgument when the value exceeds 2^53.
std::uint64_t index_set_cardinality(IndexSetKind kind, int q, int d);

}  // namespace weil
