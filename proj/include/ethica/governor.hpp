// Copyright 2026 The Ethica Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A rule-code governor: candidate tasks carry pairwise preference
// annotations per law, and tasks are ordered lexicographically with the
// first law most important.
//
// Tasks and laws are 0-based here. Text surfaces (DSL, CLI, reports) show
// them 1-based as t1.. and l1..

#pragma once

#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ethica/error.hpp"

namespace ethica {

enum class Preference : std::uint8_t {
  incomparable = 0,
  first_preferred = 1,
  second_preferred = 2,
};

inline constexpr std::size_t kAsimovLaws = 3;

/// Pairwise per-law preferences for a fixed set of tasks. Entries are keyed
/// by (law, i, j) with i < j; every entry starts out incomparable.
class LawAnnotationSet {
 public:
  LawAnnotationSet() = default;
  LawAnnotationSet(std::size_t n_tasks, std::size_t n_laws)
      : n_tasks_(n_tasks),
        n_laws_(n_laws),
        relation_(pair_count_for(n_tasks) * n_laws, Preference::incomparable) {}

  static std::size_t pair_count_for(std::size_t n_tasks) {
    return n_tasks < 2 ? 0 : n_tasks * (n_tasks - 1) / 2;
  }

  /// Number of distinct annotation sets; throws if it does not fit 64 bits.
  static std::uint64_t space_size(std::size_t n_tasks, std::size_t n_laws) {
    const std::size_t digits = pair_count_for(n_tasks) * n_laws;
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < digits; ++i) {
      if (size > std::numeric_limits<std::uint64_t>::max() / 3)
        throw Error(ErrorKind::invalid_argument,
                    "annotation space for " + std::to_string(n_tasks) +
                        " tasks and " + std::to_string(n_laws) +
                        " laws is too large to enumerate");
      size *= 3;
    }
    return size;
  }

  /// Canonical decoding: base-3 digits, least significant first, one digit
  /// per (law, pair) entry in law-major order; digit value is the
  /// Preference value.
  static LawAnnotationSet from_index(std::size_t n_tasks, std::size_t n_laws,
                                     std::uint64_t index) {
    LawAnnotationSet set(n_tasks, n_laws);
    if (index >= space_size(n_tasks, n_laws))
      throw Error(ErrorKind::invalid_argument,
                  "annotation index " + std::to_string(index) + " out of range");
    for (auto& entry : set.relation_) {
      entry = static_cast<Preference>(index % 3);
      index /= 3;
    }
    return set;
  }

  std::uint64_t index() const {
    std::uint64_t index = 0;
    for (auto it = relation_.rbegin(); it != relation_.rend(); ++it)
      index = index * 3 + static_cast<std::uint64_t>(*it);
    return index;
  }

  std::size_t n_tasks() const { return n_tasks_; }
  std::size_t n_laws() const { return n_laws_; }
  std::size_t pair_count() const { return pair_count_for(n_tasks_); }

  /// Preference between tasks i and j (any order): first_preferred means i
  /// is preferable to j under `law`.
  Preference get(std::size_t law, std::size_t i, std::size_t j) const {
    const Preference p = relation_[slot(law, i, j)];
    return i < j ? p : mirror(p);
  }

  void set(std::size_t law, std::size_t i, std::size_t j, Preference p) {
    relation_[slot(law, i, j)] = i < j ? p : mirror(p);
  }

  /// True when `better` is strictly preferable to `worse` under `law`.
  bool prefers(std::size_t law, std::size_t better, std::size_t worse) const {
    return get(law, better, worse) == Preference::first_preferred;
  }

  /// Every entry with first/second swapped.
  LawAnnotationSet flipped() const {
    LawAnnotationSet out = *this;
    for (auto& entry : out.relation_) entry = mirror(entry);
    return out;
  }

  bool operator==(const LawAnnotationSet&) const = default;

  static Preference mirror(Preference p) {
    switch (p) {
      case Preference::first_preferred: return Preference::second_preferred;
      case Preference::second_preferred: return Preference::first_preferred;
      default: return p;
    }
  }

  void check_task(std::size_t t) const {
    if (t >= n_tasks_)
      throw Error(ErrorKind::invalid_argument,
                  "task index " + std::to_string(t + 1) + " out of range (1.." +
                      std::to_string(n_tasks_) + ")");
  }

 private:
  std::size_t slot(std::size_t law, std::size_t i, std::size_t j) const {
    check_task(i);
    check_task(j);
    if (i == j)
      throw Error(ErrorKind::invalid_argument,
                  "a task is not annotated against itself");
    if (law >= n_laws_)
      throw Error(ErrorKind::invalid_argument,
                  "law index " + std::to_string(law + 1) + " out of range");
    if (i > j) std::swap(i, j);
    const std::size_t pair = i * n_tasks_ - i * (i + 1) / 2 + (j - i - 1);
    return law * pair_count() + pair;
  }

  std::size_t n_tasks_ = 0;
  std::size_t n_laws_ = 0;
  std::vector<Preference> relation_;
};

enum class TaskOrdering { first_wins, second_wins, equal };

struct TaskComparison {
  TaskOrdering ordering = TaskOrdering::equal;
  std::optional<std::size_t> decided_at_law;

  bool operator==(const TaskComparison&) const = default;
};

enum class RejectionReason { beaten, tie_break, cycle };

inline const char* to_string(RejectionReason r) {
  switch (r) {
    case RejectionReason::beaten: return "beaten";
    case RejectionReason::tie_break: return "tie_break";
    case RejectionReason::cycle: return "cycle";
  }
  return "unknown";
}

struct TaskRejection {
  std::size_t task = 0;
  RejectionReason reason = RejectionReason::tie_break;
  // For `beaten`: the lowest-numbered law at which any task beat it.
  std::optional<std::size_t> law;

  bool operator==(const TaskRejection&) const = default;
};

struct TaskSelection {
  std::size_t selected = 0;
  // Set when every task is beaten by some other task, so the selection
  // came from the fewest-defeats rule instead of pairwise maximality.
  bool cycle = false;
  std::vector<TaskRejection> trace;  // every other task, ascending

  bool operator==(const TaskSelection&) const = default;
};

/// Lexicographic task ordering over a configurable law scan order. The
/// default scans laws in their natural order.
class Governor {
 public:
  Governor() = default;
  explicit Governor(std::vector<std::size_t> law_order)
      : law_order_(std::move(law_order)) {}

  /// Scans laws last-to-first. Used to check that properties notice a
  /// mis-prioritised rule code.
  static Governor reversed(std::size_t n_laws) {
    std::vector<std::size_t> order(n_laws);
    std::iota(order.rbegin(), order.rend(), std::size_t{0});
    return Governor(std::move(order));
  }

  const std::vector<std::size_t>& law_order() const { return law_order_; }

  TaskComparison compare(const LawAnnotationSet& ann, std::size_t t1,
                         std::size_t t2) const {
    ann.check_task(t1);
    ann.check_task(t2);
    if (t1 == t2)
      throw Error(ErrorKind::invalid_argument, "cannot compare a task with itself");
    for (std::size_t law : scan_order(ann)) {
      switch (ann.get(law, t1, t2)) {
        case Preference::first_preferred: return {TaskOrdering::first_wins, law};
        case Preference::second_preferred: return {TaskOrdering::second_wins, law};
        case Preference::incomparable: break;
      }
    }
    return {};
  }

  TaskSelection select(const LawAnnotationSet& ann) const {
    const std::size_t n = ann.n_tasks();
    if (n == 0) throw Error(ErrorKind::empty_input, "no candidate tasks");

    std::vector<std::size_t> defeats(n, 0);
    std::vector<std::optional<std::size_t>> first_loss(n);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t u = 0; u < n; ++u) {
        if (t == u) continue;
        const auto cmp = compare(ann, u, t);
        if (cmp.ordering != TaskOrdering::first_wins) continue;
        ++defeats[t];
        if (!first_loss[t] || *cmp.decided_at_law < *first_loss[t])
          first_loss[t] = cmp.decided_at_law;
      }

    TaskSelection selection;
    selection.selected = 0;
    for (std::size_t t = 1; t < n; ++t)
      if (defeats[t] < defeats[selection.selected]) selection.selected = t;
    selection.cycle = defeats[selection.selected] != 0;

    const std::size_t s = selection.selected;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s) continue;
      const auto cmp = compare(ann, s, t);
      if (cmp.ordering == TaskOrdering::first_wins) {
        selection.trace.push_back({t, RejectionReason::beaten, cmp.decided_at_law});
      } else if (first_loss[t]) {
        selection.trace.push_back({t, RejectionReason::beaten, first_loss[t]});
      } else if (cmp.ordering == TaskOrdering::equal) {
        selection.trace.push_back({t, RejectionReason::tie_break, std::nullopt});
      } else {
        selection.trace.push_back({t, RejectionReason::cycle, std::nullopt});
      }
    }
    return selection;
  }

 private:
  std::vector<std::size_t> scan_order(const LawAnnotationSet& ann) const {
    if (law_order_.empty()) {
      std::vector<std::size_t> order(ann.n_laws());
      std::iota(order.begin(), order.end(), std::size_t{0});
      return order;
    }
    for (std::size_t law : law_order_)
      if (law >= ann.n_laws())
        throw Error(ErrorKind::invalid_argument,
                    "law order names law " + std::to_string(law + 1) +
                        " but only " + std::to_string(ann.n_laws()) + " exist");
    return law_order_;
  }

  std::vector<std::size_t> law_order_;
};

inline TaskComparison lex_compare(const LawAnnotationSet& ann, std::size_t t1,
                                  std::size_t t2) {
  return Governor{}.compare(ann, t1, t2);
}

inline TaskSelection select_task(const LawAnnotationSet& ann) {
  return Governor{}.select(ann);
}

/// A task (other than `selected`) preferred over the selection at some law
/// without the selection being preferred over it at an earlier law.
struct UnjustifiedPreference {
  std::size_t rival = 0;
  std::size_t law = 0;

  bool operator==(const UnjustifiedPreference&) const = default;
};

/// Checks that whenever a rival is preferable to `selected` under law k,
/// the selection is preferable to that rival under some law before k.
/// `only_law` restricts the check to one k. Returns the first offending
/// (rival, law) pair, rivals ascending then laws ascending.
inline std::optional<UnjustifiedPreference> find_unjustified_preference(
    const LawAnnotationSet& ann, std::size_t selected,
    std::optional<std::size_t> only_law = std::nullopt) {
  ann.check_task(selected);
  for (std::size_t rival = 0; rival < ann.n_tasks(); ++rival) {
    if (rival == selected) continue;
    for (std::size_t law = 0; law < ann.n_laws(); ++law) {
      if (only_law && law != *only_law) continue;
      if (!ann.prefers(law, rival, selected)) continue;
      bool justified = false;
      for (std::size_t earlier = 0; earlier < law && !justified; ++earlier)
        justified = ann.prefers(earlier, selected, rival);
      if (!justified) return UnjustifiedPreference{rival, law};
    }
  }
  return std::nullopt;
}

/// Every annotation set for a task/law count, in canonical index order.
/// Indexable, so ranges can be split across workers.
class AnnotationSpace {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = LawAnnotationSet;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = LawAnnotationSet;

    iterator() = default;
    iterator(const AnnotationSpace* space, std::uint64_t index)
        : space_(space), index_(index) {}

    LawAnnotationSet operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      iterator copy = *this;
      ++index_;
      return copy;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const AnnotationSpace* space_ = nullptr;
    std::uint64_t index_ = 0;
  };

  AnnotationSpace(std::size_t n_tasks, std::size_t n_laws)
      : n_tasks_(n_tasks),
        n_laws_(n_laws),
        size_(LawAnnotationSet::space_size(n_tasks, n_laws)) {}

  std::uint64_t size() const { return size_; }
  LawAnnotationSet at(std::uint64_t index) const {
    return LawAnnotationSet::from_index(n_tasks_, n_laws_, index);
  }
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  std::size_t n_tasks_;
  std::size_t n_laws_;
  std::uint64_t size_;
};

inline AnnotationSpace enumerate_annotations(std::size_t n_tasks,
                                             std::size_t n_laws = kAsimovLaws) {
  if (n_tasks < 2)
    throw Error(ErrorKind::invalid_argument,
                "annotation enumeration needs at least two tasks");
  return AnnotationSpace(n_tasks, n_laws);
}

}  // namespace ethica
