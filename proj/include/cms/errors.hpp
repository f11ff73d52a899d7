#pragma once

#include <stdexcept>
#include <string>

namespace cms {

// Base class for all toolkit errors.
struct CmsError : std::runtime_error {
  explicit CmsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Graph operation requires strong connectivity.
struct NotIrreducible : CmsError {
  explicit NotIrreducible(const std::string& msg) : CmsError(msg) {}
};

// Distance requested between points of incompatible kinds or dimensions.
struct KindMismatch : CmsError {
  explicit KindMismatch(const std::string& msg) : CmsError(msg) {}
};

// System-file parse error with source position.
struct SyntaxError : CmsError {
  int line, col;
  SyntaxError(int line_, int col_, const std::string& msg)
      : CmsError("syntax error at line " + std::to_string(line_) + ", col " +
                 std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

// Well-formed input that violates a structural requirement.
struct SemanticError : CmsError {
  explicit SemanticError(const std::string& msg) : CmsError(msg) {}
};

// Evaluation outside a function's domain (log of a nonpositive value).
struct DomainError : CmsError {
  explicit DomainError(const std::string& msg) : CmsError(msg) {}
};

// Rejection sampler failed to hit a vertex set within its attempt budget.
struct SamplerExhausted : CmsError {
  explicit SamplerExhausted(const std::string& msg) : CmsError(msg) {}
};

// Point lies in no vertex set of the system.
struct OrphanPoint : CmsError {
  explicit OrphanPoint(const std::string& msg) : CmsError(msg) {}
};

// Exact enumeration would exceed its term cap.
struct CapExceeded : CmsError {
  explicit CapExceeded(const std::string& msg) : CmsError(msg) {}
};

// Edge word does not follow the graph, or does not start where required.
struct InadmissibleWord : CmsError {
  explicit InadmissibleWord(const std::string& msg) : CmsError(msg) {}
};

// Two points expected in the same vertex set are not.
struct VertexMismatch : CmsError {
  explicit VertexMismatch(const std::string& msg) : CmsError(msg) {}
};

// Operation needs a declared contraction rate and the system has none.
struct MissingRate : CmsError {
  explicit MissingRate(const std::string& msg) : CmsError(msg) {}
};

// Operation needs a registered modulus envelope and the system has none.
struct MissingModulus : CmsError {
  explicit MissingModulus(const std::string& msg) : CmsError(msg) {}
};

// Builtin system name not recognized.
struct UnknownBuiltin : CmsError {
  explicit UnknownBuiltin(const std::string& msg) : CmsError(msg) {}
};

// Matrix passed to the chain builtin is not strictly positive stochastic.
struct InvalidStochasticMatrix : CmsError {
  explicit InvalidStochasticMatrix(const std::string& msg) : CmsError(msg) {}
};

// Symbol word uses symbols outside the expected alphabet.
struct WrongAlphabet : CmsError {
  explicit WrongAlphabet(const std::string& msg) : CmsError(msg) {}
};

// Malformed numeric or structural parameters to a toolkit operation.
struct InvalidParams : CmsError {
  explicit InvalidParams(const std::string& msg) : CmsError(msg) {}
};

}  // namespace cms
