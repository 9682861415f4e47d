#pragma once

// Permutations, binary search trees grown by sequential insertion, the record
// decomposition of a node's depth, and Hoare's FIND with recursion counting.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace depthlab {

/// A bijection on {1, ..., n}, stored as the sequence of its values.
class Permutation {
 public:
  /// Throws DomainError unless values hold each of 1..n exactly once.
  explicit Permutation(std::vector<std::int64_t> values);

  static Permutation identity(std::int64_t n);

  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  std::span<const std::int64_t> values() const { return values_; }
  /// Value at 1-based position.
  std::int64_t at(std::int64_t position) const {
    return values_[static_cast<std::size_t>(position - 1)];
  }
  /// 1-based position of a value.
  std::int64_t position_of(std::int64_t value) const;

 private:
  std::vector<std::int64_t> values_;
};

/// Parses one line of whitespace-separated integers. Throws DomainError if the
/// text is malformed or not a permutation of 1..n.
Permutation parse_permutation(std::string_view text);

class Bst {
 public:
  static constexpr std::int64_t kNone = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(insertion_order_.size()); }
  std::int64_t root() const { return insertion_order_.empty() ? kNone : insertion_order_.front(); }
  std::int64_t left(std::int64_t key) const { return left_[static_cast<std::size_t>(key)]; }
  std::int64_t right(std::int64_t key) const { return right_[static_cast<std::size_t>(key)]; }
  bool contains(std::int64_t key) const;
  std::span<const std::int64_t> insertion_order() const { return insertion_order_; }

 private:
  friend Bst build_bst(const Permutation& perm);

  std::vector<std::int64_t> left_;
  std::vector<std::int64_t> right_;
  std::vector<std::int64_t> insertion_order_;
};

Bst build_bst(const Permutation& perm);

/// Number of edges from the root to the node holding key. Throws DomainError if absent.
std::int64_t node_depth(const Bst& tree, std::int64_t key);

/// d[l - 1] = depth of key l, l = 1..n.
std::vector<std::int64_t> depth_plot(const Permutation& perm);

/// The predecessors of key l in insertion order split by whether they are
/// smaller or larger than l. Positions are 1-based.
struct RecordDecomposition {
  std::int64_t position = 0;
  std::vector<std::int64_t> s_minus;
  std::vector<std::int64_t> s_plus;
  std::vector<std::int64_t> pi_minus;
  std::vector<std::int64_t> pi_plus;
  std::int64_t r_minus = 0;  // ascending records of pi_minus
  std::int64_t r_plus = 0;   // descending records of pi_plus
};

RecordDecomposition record_decomposition(const Permutation& perm, std::int64_t l);

/// One run of FIND with the head of the list as pivot and order-preserving
/// partitions. recursions counts calls after the initial one.
struct FindTrace {
  std::int64_t selected_value = 0;
  std::int64_t recursions = 0;
  std::int64_t comparisons = 0;
  std::vector<std::int64_t> pivot_sequence;
};

FindTrace find_select(const Permutation& perm, std::int64_t l);

}  // namespace depthlab
