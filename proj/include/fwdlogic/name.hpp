#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fwdlogic {

/// An endpoint or bound-name identifier. Compared by exact text.
class Name {
public:
  Name() = default;
  Name(const char* text) : Name(std::string(text)) {}
  explicit Name(std::string text) : text_(std::move(text)) {
    if (text_.empty()) throw std::invalid_argument("empty name");
    for (char c : text_)
      if (std::isspace(static_cast<unsigned char>(c)))
        throw std::invalid_argument("name contains whitespace: '" + text_ + "'");
  }

  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name& a, const Name& b) { return a.text_ <=> b.text_; }

private:
  std::string text_;
};

using NameSet = std::set<Name>;

inline std::ostream& operator<<(std::ostream& os, const Name& n) { return os << n.str(); }

/// Deterministic fresh-name source: one monotone counter shared by all bases,
/// so "y" becomes "y1", then "u2", "y3", ... Names in `avoid` are skipped.
class NameSupply {
public:
  explicit NameSupply(std::uint64_t seed = 0) : counter_(seed) {}

  Name fresh(const Name& base, const NameSet& avoid = {}) {
    std::string stem = base.str();
    while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back())))
      stem.pop_back();
    for (;;) {
      Name candidate(stem + std::to_string(++counter_));
      if (!avoid.contains(candidate) && !issued_.contains(candidate)) {
        issued_.insert(candidate);
        return candidate;
      }
    }
  }

  /// Marks names as taken so later fresh() calls never return them.
  void reserve(const NameSet& names) { issued_.insert(names.begin(), names.end()); }

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t counter_;
  NameSet issued_;
};

}  // namespace fwdlogic

template <>
struct std::hash<fwdlogic::Name> {
  std::size_t operator()(const fwdlogic::Name& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
