#include "depthlab/trees.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "depthlab/errors.hpp"

namespace depthlab {

Permutation::Permutation(std::vector<std::int64_t> values) : values_(std::move(values)) {
  const auto n = static_cast<std::int64_t>(values_.size());
  if (n == 0) throw DomainError("permutation must be nonempty");
  std::vector<bool> seen(values_.size() + 1, false);
  for (std::int64_t v : values_) {
    if (v < 1 || v > n) {
      throw DomainError("permutation value " + std::to_string(v) + " outside 1.." + std::to_string(n));
    }
    if (seen[static_cast<std::size_t>(v)]) {
      throw DomainError("permutation repeats value " + std::to_string(v));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(std::int64_t n) {
  if (n < 1) throw DomainError("permutation size must be positive");
  std::vector<std::int64_t> v(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = k + 1;
  return Permutation(std::move(v));
}

std::int64_t Permutation::position_of(std::int64_t value) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == value) return static_cast<std::int64_t>(i) + 1;
  }
  throw DomainError("value " + std::to_string(value) + " not in permutation");
}

Permutation parse_permutation(std::string_view text) {
  const auto last = text.find_last_not_of(" \t\r\n");
  text = text.substr(0, last == std::string_view::npos ? 0 : last + 1);
  text.remove_prefix(std::min(text.size(), text.find_first_not_of(" \t\r\n")));
  if (text.find('\n') != std::string_view::npos) {
    throw DomainError("permutation must be given on a single line");
  }
  std::vector<std::int64_t> values;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p < end) {
    if (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r') {
      ++p;
      continue;
    }
    std::int64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{} ||
        (next < end && *next != ' ' && *next != '\t' && *next != '\n' && *next != '\r')) {
      throw DomainError("malformed permutation text");
    }
    values.push_back(v);
    p = next;
  }
  return Permutation(std::move(values));
}

bool Bst::contains(std::int64_t key) const {
  std::int64_t node = root();
  while (node != kNone) {
    if (key == node) return true;
    node = key < node ? left(node) : right(node);
  }
  return false;
}

Bst build_bst(const Permutation& perm) {
  Bst tree;
  const auto slots = static_cast<std::size_t>(perm.size()) + 1;
  tree.left_.assign(slots, Bst::kNone);
  tree.right_.assign(slots, Bst::kNone);
  tree.insertion_order_.assign(perm.values().begin(), perm.values().end());
  const std::int64_t root = perm.at(1);
  for (std::int64_t pos = 2; pos <= perm.size(); ++pos) {
    const std::int64_t key = perm.at(pos);
    std::int64_t node = root;
    for (;;) {
      if (key == node) throw DomainError("duplicate key in insertion sequence");
      auto& child = key < node ? tree.left_[static_cast<std::size_t>(node)]
                               : tree.right_[static_cast<std::size_t>(node)];
      if (child == Bst::kNone) {
        child = key;
        break;
      }
      node = child;
    }
  }
  return tree;
}

std::int64_t node_depth(const Bst& tree, std::int64_t key) {
  std::int64_t depth = 0;
  std::int64_t node = tree.root();
  while (node != Bst::kNone) {
    if (key == node) return depth;
    node = key < node ? tree.left(node) : tree.right(node);
    ++depth;
  }
  throw DomainError("key " + std::to_string(key) + " not in tree");
}

std::vector<std::int64_t> depth_plot(const Permutation& perm) {
  const Bst tree = build_bst(perm);
  std::vector<std::int64_t> d(static_cast<std::size_t>(perm.size()));
  for (std::int64_t l = 1; l <= perm.size(); ++l) d[static_cast<std::size_t>(l - 1)] = node_depth(tree, l);
  return d;
}

RecordDecomposition record_decomposition(const Permutation& perm, std::int64_t l) {
  if (l < 1 || l > perm.size()) throw DomainError("key outside 1..n");
  RecordDecomposition rd;
  rd.position = perm.position_of(l);
  std::int64_t running_max = 0;
  std::int64_t running_min = perm.size() + 1;
  for (std::int64_t i = 1; i < rd.position; ++i) {
    const std::int64_t v = perm.at(i);
    if (v < l) {
      rd.s_minus.push_back(i);
      if (v > running_max) {
        running_max = v;
        ++rd.r_minus;
      }
      rd.pi_minus.push_back(v);
    } else {
      rd.s_plus.push_back(i);
      if (v < running_min) {
        running_min = v;
        ++rd.r_plus;
      }
      rd.pi_plus.push_back(v);
    }
  }
  return rd;
}

FindTrace find_select(const Permutation& perm, std::int64_t l) {
  if (l < 1 || l > perm.size()) throw DomainError("rank outside 1..n");
  FindTrace trace;
  std::vector<std::int64_t> list(perm.values().begin(), perm.values().end());
  std::vector<std::int64_t> smaller, larger;
  std::int64_t rank = l;
  for (;;) {
    const std::int64_t pivot = list.front();
    trace.pivot_sequence.push_back(pivot);
    trace.comparisons += static_cast<std::int64_t>(list.size()) - 1;
    smaller.clear();
    larger.clear();
    for (std::size_t i = 1; i < list.size(); ++i) {
      (list[i] < pivot ? smaller : larger).push_back(list[i]);
    }
    const auto k = static_cast<std::int64_t>(smaller.size());
    if (k == rank - 1) {
      trace.selected_value = pivot;
      break;
    }
    if (k >= rank) {
      list.swap(smaller);
    } else {
      rank -= k + 1;
      list.swap(larger);
    }
  }
  trace.recursions = static_cast<std::int64_t>(trace.pivot_sequence.size()) - 1;
  return trace;
}

}  // namespace depthlab
