#include "weil/index_set.hpp"

#include <algorithm>
#include <numeric>

#include "weil/errors.hpp"

namespace weil {

namespace {

constexpr std::uint64_t kMaxCardinality = std::uint64_t{1} << 53;

void check_entries(const std::vector<int>& e) {
  for (int v : e) {
    if (v < 0) throw InvalidArgument("multi-index entries must be nonnegative");
  }
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  check_entries(entries_);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : entries_(entries) {
  check_entries(entries_);
}

int MultiIndex::total_order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

int MultiIndex::max_entry() const {
  return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

int MultiIndex::nonzero_count() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(), [](int v) { return v != 0; }));
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ':';
    s += std::to_string(entries_[i]);
  }
  return s;
}

bool order_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("order_less: dimension mismatch");
  const int ta = a.total_order();
  const int tb = b.total_order();
  if (ta != tb) return ta < tb;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a[j] != b[j]) return a[j] < b[j];
  }
  return false;
}

std::string to_string(IndexSetKind kind) {
  switch (kind) {
    case IndexSetKind::TensorProduct: return "TP";
    case IndexSetKind::TotalDegree: return "TD";
    case IndexSetKind::Custom: return "custom";
  }
  return "?";
}

IndexSetKind parse_index_set_kind(const std::string& s) {
  if (s == "TP" || s == "tp") return IndexSetKind::TensorProduct;
  if (s == "TD" || s == "td") return IndexSetKind::TotalDegree;
  throw InvalidArgument("unknown index set kind '" + s + "' (expected TP or TD)");
}

std::uint64_t index_set_cardinality(IndexSetKind kind, int q, int d) {
  if (d < 1) throw InvalidArgument("index set dimension must be >= 1");
  if (q < 0) throw InvalidArgument("polynomial order must be >= 0");
  std::uint64_t n = 1;
  if (kind == IndexSetKind::TensorProduct) {
    const auto base = static_cast<std::uint64_t>(q) + 1;
    for (int i = 0; i < d; ++i) {
      if (n > kMaxCardinality / base) throw InvalidArgument("index set too large");
      n *= base;
    }
  } else if (kind == IndexSetKind::TotalDegree) {
    // C(q+d, d) built as a running product; every partial value is itself a
    // binomial coefficient, so the division is exact.
    const int k = std::min(q, d);
    const std::uint64_t top = static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(d);
    for (int i = 1; i <= k; ++i) {
      const std::uint64_t mult = top - k + i;
      if (n > UINT64_MAX / mult) throw InvalidArgument("index set too large");
      n = n * mult / static_cast<std::uint64_t>(i);
    }
  } else {
    throw InvalidArgument("no closed-form cardinality for custom index sets");
  }
  if (n > kMaxCardinality) throw InvalidArgument("index set too large");
  return n;
}

IndexSet IndexSet::build(IndexSetKind kind, int q, int d) {
  if (kind == IndexSetKind::Custom) throw InvalidArgument("IndexSet::build: use IndexSet::custom");
  const std::uint64_t expected = index_set_cardinality(kind, q, d);

  // Raw enumeration in colexicographic order over the box [0, q]^d, filtered,
  // then sorted into the graded order.
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(expected));
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  int sum = 0;
  while (true) {
    if (kind == IndexSetKind::TensorProduct || sum <= q) out.emplace_back(cur);
    std::size_t j = 0;
    for (; j < cur.size(); ++j) {
      const bool can_advance = kind == IndexSetKind::TensorProduct ? cur[j] < q : sum < q;
      if (can_advance) {
        ++cur[j];
        ++sum;
        break;
      }
      sum -= cur[j];
      cur[j] = 0;
    }
    if (j == cur.size()) break;
  }
  std::sort(out.begin(), out.end(), order_less);
  if (out.size() != expected) throw std::logic_error("index set enumeration mismatch");
  return IndexSet(kind, q, d, std::move(out));
}

IndexSet IndexSet::custom(int d, std::vector<MultiIndex> indices) {
  if (d < 1) throw InvalidArgument("index set dimension must be >= 1");
  if (indices.empty()) throw InvalidArgument("index set must be nonempty");
  int q = 0;
  for (const auto& n : indices) {
    if (n.dim() != static_cast<std::size_t>(d)) throw InvalidArgument("index dimension mismatch");
    q = std::max(q, n.max_entry());
  }
  std::sort(indices.begin(), indices.end(), order_less);
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InvalidArgument("duplicate multi-index in custom set");
  }
  return IndexSet(IndexSetKind::Custom, q, d, std::move(indices));
}

int IndexSet::max_degree() const {
  int m = 0;
  for (const auto& n : indices_) m = std::max(m, n.max_entry());
  return m;
}

std::size_t IndexSet::find(const MultiIndex& n) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), n, order_less);
  if (it != indices_.end() && *it == n) return static_cast<std::size_t>(it - indices_.begin());
  return indices_.size();
}

}  // namespace weil
