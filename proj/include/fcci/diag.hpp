#pragma once

// Diagnostics and result plumbing shared by every stage of the pipeline.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fcci {

struct Span {
  int line = 0;  // 1-based; 0 means "no location"
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  bool valid() const { return line > 0; }
};

enum class Severity { Error, Warning };

// A note attached to a diagnostic; the span is optional.
struct DiagNote {
  std::string message;
  std::optional<Span> span;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;     // stable identifier, e.g. "E302"
  std::string message;
  std::string file;
  Span span;
  std::vector<DiagNote> notes;
  std::vector<std::string> witnesses;  // pretty-printed, for ambiguity errors
};

inline Diagnostic make_error(std::string code, std::string message,
                             Span span = {}, std::string file = {}) {
  Diagnostic d;
  d.code = std::move(code);
  d.message = std::move(message);
  d.span = span;
  d.file = std::move(file);
  return d;
}

// Exit-status category of a diagnostic code.
//   0 success, 1 kind/type, 2 ambiguous, 3 resolution (none/exhausted/incomplete),
//   4 parse, 5 usage or internal.
inline int exit_code_for(const std::string& code) {
  if (code.empty()) return 0;
  if (code == "E001") return 4;
  if (code == "E302") return 2;
  if (code == "E301" || code == "E303" || code == "E304") return 3;
  if (code.size() == 4 && code[0] == 'E' &&
      (code[1] == '1' || code[1] == '2' || code[1] == '4'))
    return 1;
  return 5;
}

// Minimal ok-or-diagnostic result type.
template <class T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}             // NOLINT(google-explicit-constructor)
  Result(Diagnostic diag) : v_(std::move(diag)) {}      // NOLINT(google-explicit-constructor)

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const { return std::get<T>(v_); }
  T& value() { return std::get<T>(v_); }
  const Diagnostic& error() const { return std::get<Diagnostic>(v_); }

 private:
  std::variant<T, Diagnostic> v_;
};

}  // namespace fcci
