#pragma once

#include <string>
#include <utility>
#include <vector>

namespace refrob {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;  // on failure: the offending data, e.g. a polynomial difference
};

class Report {
 public:
  void add(std::string name, bool passed, std::string detail = {}) {
    checks_.push_back({std::move(name), passed, std::move(detail)});
  }
  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks_) checks_.push_back({prefix + c.name, c.passed, c.detail});
  }

  bool passed() const {
    for (const auto& c : checks_)
      if (!c.passed) return false;
    return true;
  }
  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

 private:
  std::vector<Check> checks_;
};

}  // namespace refrob
