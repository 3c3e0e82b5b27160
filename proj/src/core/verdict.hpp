#pragma once

// Three-valued check outcomes.  Most questions this toolkit answers are
// semidecidable at best (weak contractibility being the canonical offender),
// so every checker returns Holds / Fails / Unknown rather than bool.
// A Fails always carries a concrete witness string; an Unknown carries the
// reason the method gave up.  `method` records which decision procedure
// produced the verdict, so reports can show *how* an answer was reached.

#include <string>
#include <utility>
#include <vector>

namespace patkit {

struct Verdict {
  enum class Status { Holds, Fails, Unknown };

  Status status = Status::Unknown;
  std::string witness;  // Fails: obstruction; Holds: optional certificate note
  std::string method;

  bool ok() const { return status == Status::Holds; }
  bool failed() const { return status == Status::Fails; }
  bool unknown() const { return status == Status::Unknown; }

  static Verdict holds(std::string method, std::string note = "") {
    return Verdict{Status::Holds, std::move(note), std::move(method)};
  }
  static Verdict fails(std::string witness, std::string method) {
    return Verdict{Status::Fails, std::move(witness), std::move(method)};
  }
  static Verdict unknown(std::string reason, std::string method) {
    return Verdict{Status::Unknown, std::move(reason), std::move(method)};
  }

  const char* status_name() const {
    switch (status) {
      case Status::Holds: return "Holds";
      case Status::Fails: return "Fails";
      default: return "Unknown";
    }
  }
};

// Fails dominates (it is a definite counterexample), then Unknown, then Holds.
// This matches the CLI exit-code precedence.
inline Verdict combine_all(const std::vector<Verdict>& parts, const std::string& method) {
  const Verdict* first_unknown = nullptr;
  for (const auto& v : parts) {
    if (v.failed()) return Verdict::fails(v.witness, method + " <- " + v.method);
    if (v.unknown() && !first_unknown) first_unknown = &v;
  }
  if (first_unknown)
    return Verdict::unknown(first_unknown->witness, method + " <- " + first_unknown->method);
  return Verdict::holds(method);
}

}  // namespace patkit
