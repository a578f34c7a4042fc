#pragma once

#include <map>
#include <sstream>
#include <string>

#include "oplab/rational.hpp"

namespace oplab {

// Finite rational linear combination of canonical basis keys.
struct LinComb {
  std::map<std::string, Rat> terms;

  LinComb() = default;
  explicit LinComb(const std::string& key, const Rat& c = Rat(1)) {
    if (c != 0) terms.emplace(key, c);
  }

  void add(const std::string& key, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.try_emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  LinComb& operator+=(const LinComb& o) {
    for (auto& [k, c] : o.terms) add(k, c);
    return *this;
  }

  LinComb& operator-=(const LinComb& o) {
    for (auto& [k, c] : o.terms) add(k, -c);
    return *this;
  }

  LinComb& operator*=(const Rat& f) {
    if (f == 0) {
      terms.clear();
      return *this;
    }
    for (auto& [k, c] : terms) c *= f;
    return *this;
  }

  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator*(LinComb a, const Rat& f) { return a *= f; }

  bool is_zero() const { return terms.empty(); }
  bool operator==(const LinComb& o) const { return terms == o.terms; }

  std::string str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms) {
      if (!first) os << " ";
      if (c == 1)
        os << (first ? "" : "+ ");
      else if (c == -1)
        os << "- ";
      else if (c > 0)
        os << (first ? rat_str(c) + "*" : "+ " + rat_str(c) + "*");
      else
        os << "- " << rat_str(-c) << "*";
      os << k;
      first = false;
    }
    return os.str();
  }
};

}  // namespace oplab
