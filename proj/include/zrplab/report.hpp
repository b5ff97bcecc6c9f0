#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace zrp {

// Outcome of an identity check: pass flag, how much was examined, and the
// first counterexample found (empty on pass).
struct CheckReport {
  CheckReport() = default;
  explicit CheckReport(std::string name) : check(std::move(name)) {}

  std::string check;
  bool pass = true;
  std::size_t checked = 0;
  std::string witness;

  void fail(std::string w) {
    if (pass) witness = std::move(w);
    pass = false;
  }
};

}  // namespace zrp
