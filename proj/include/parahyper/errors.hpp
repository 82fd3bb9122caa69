#ifndef PARAHYPER_ERRORS_HPP
#define PARAHYPER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parahyper {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

struct DegenerateForm : Error {
  explicit DegenerateForm(const std::string& msg) : Error("degenerate bilinear form: " + msg) {}
};

struct DegenerateMetric : Error {
  explicit DegenerateMetric(const std::string& msg) : Error("degenerate metric: " + msg) {}
};

// Raised when the structure-averaged metric is degenerate at an evaluation
// point. The averaging construction does not guarantee nondegeneracy, so this
// is surfaced instead of silently returning a rank-deficient form.
struct DegenerateResult : Error {
  explicit DegenerateResult(const std::string& msg) : Error("degenerate averaged metric: " + msg) {}
};

// Four-step compatible-metric construction hit a degenerate intermediate.
struct DegenerateIntermediate : Error {
  int step;
  DegenerateIntermediate(int step_, const std::string& msg)
      : Error("degenerate intermediate at step " + std::to_string(step_) + ": " + msg),
        step(step_) {}
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& msg) : Error("point outside chart domain: " + msg) {}
};

struct ChartMismatch : Error {
  explicit ChartMismatch(const std::string& msg) : Error("fields live on different charts: " + msg) {}
};

struct IncompatibleInputs : Error {
  explicit IncompatibleInputs(const std::string& msg) : Error("incompatible inputs: " + msg) {}
};

struct NonpositiveF : Error {
  explicit NonpositiveF(const std::string& msg) : Error("warp function must be positive: " + msg) {}
};

struct ApexIncluded : Error {
  explicit ApexIncluded(const std::string& msg) : Error("cone chart must exclude r = 0: " + msg) {}
};

struct ParseError : Error {
  int line, column;
  ParseError(int line_, int column_, const std::string& msg)
      : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
        line(line_), column(column_) {}
};

struct ValidationFailed : Error {
  std::string identity;
  double residual;
  ValidationFailed(const std::string& identity_, double residual_)
      : Error("validation failed: " + identity_ + " (residual " + std::to_string(residual_) + ")"),
        identity(identity_), residual(residual_) {}
};

struct CaseNotFound : Error {
  explicit CaseNotFound(const std::string& msg) : Error("case not found: " + msg) {}
};

struct InvalidConfig : Error {
  explicit InvalidConfig(const std::string& msg) : Error("invalid configuration: " + msg) {}
};

}  // namespace parahyper

#endif
