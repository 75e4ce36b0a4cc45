// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pandora/rational.hpp"

namespace pandora {

struct Branch;

/// Adaptive policy. An Act node performs action `index` (box, test or element
/// depending on the problem) and continues with the child whose label equals
/// the observed outcome. Leaves stop: Stop keeps the best value found,
/// Outside pays the outside option, Identified names the isolated scenario.
class PolicyTree {
 public:
  enum class Kind { Act, Stop, Outside, Identified };

  PolicyTree() = default;

  static PolicyTree act(std::size_t action) { return PolicyTree(Kind::Act, action); }
  static PolicyTree stop() { return PolicyTree(Kind::Stop, 0); }
  static PolicyTree outside() { return PolicyTree(Kind::Outside, 0); }
  static PolicyTree identified(std::size_t scenario) { return PolicyTree(Kind::Identified, scenario); }

  Kind kind() const { return kind_; }
  bool is_act() const { return kind_ == Kind::Act; }
  bool is_leaf() const { return kind_ != Kind::Act; }
  /// Action id for Act nodes, scenario id for Identified leaves.
  std::size_t index() const { return index_; }

  const std::vector<Branch>& children() const;
  std::vector<Branch>& children();

  /// Child for an outcome label, or nullptr.
  const PolicyTree* child(std::string_view label) const;
  PolicyTree* child(std::string_view label);

  /// Adds (or replaces) the child for `label`; returns *this for chaining.
  PolicyTree& with(std::string label, PolicyTree subtree);

  std::size_t depth() const;
  std::size_t size() const;

  friend bool operator==(const PolicyTree& a, const PolicyTree& b);

 private:
  PolicyTree(Kind kind, std::size_t index) : kind_(kind), index_(index) {}

  Kind kind_ = Kind::Stop;
  std::size_t index_ = 0;
  std::vector<Branch> children_;
};

struct Branch {
  std::string label;
  PolicyTree subtree;

  friend bool operator==(const Branch& a, const Branch& b) {
    return a.label == b.label && a.subtree == b.subtree;
  }
};

inline const std::vector<Branch>& PolicyTree::children() const { return children_; }
inline std::vector<Branch>& PolicyTree::children() { return children_; }

inline const PolicyTree* PolicyTree::child(std::string_view label) const {
  for (const auto& b : children_) {
    if (b.label == label) return &b.subtree;
  }
  return nullptr;
}

inline PolicyTree* PolicyTree::child(std::string_view label) {
  for (auto& b : children_) {
    if (b.label == label) return &b.subtree;
  }
  return nullptr;
}

inline PolicyTree& PolicyTree::with(std::string label, PolicyTree subtree) {
  if (kind_ != Kind::Act) throw Error("only action nodes have children");
  if (PolicyTree* existing = child(label)) {
    *existing = std::move(subtree);
  } else {
    children_.push_back(Branch{std::move(label), std::move(subtree)});
  }
  return *this;
}

inline std::size_t PolicyTree::depth() const {
  std::size_t d = 0;
  for (const auto& b : children_) d = std::max(d, b.subtree.depth());
  return is_act() ? d + 1 : 0;
}

inline std::size_t PolicyTree::size() const {
  std::size_t s = 1;
  for (const auto& b : children_) s += b.subtree.size();
  return s;
}

inline bool operator==(const PolicyTree& a, const PolicyTree& b) {
  return a.kind_ == b.kind_ && a.index_ == b.index_ && a.children_ == b.children_;
}

inline const char* kind_name(PolicyTree::Kind k) {
  switch (k) {
    case PolicyTree::Kind::Act: return "act";
    case PolicyTree::Kind::Stop: return "stop";
    case PolicyTree::Kind::Outside: return "outside";
    case PolicyTree::Kind::Identified: return "identified";
  }
  return "?";
}

namespace detail {
inline void print_tree(const PolicyTree& t, const std::string& prefix, std::ostringstream& os) {
  switch (t.kind()) {
    case PolicyTree::Kind::Act: os << "act " << t.index() << "\n"; break;
    case PolicyTree::Kind::Stop: os << "stop\n"; return;
    case PolicyTree::Kind::Outside: os << "outside\n"; return;
    case PolicyTree::Kind::Identified: os << "identified " << t.index() << "\n"; return;
  }
  for (const auto& b : t.children()) {
    os << prefix << "  [" << b.label << "] ";
    print_tree(b.subtree, prefix + "  ", os);
  }
}
}  // namespace detail

/// Indented text rendering, one node per line.
inline std::string to_text(const PolicyTree& t) {
  std::ostringstream os;
  detail::print_tree(t, "", os);
  return os.str();
}

}  // namespace pandora
