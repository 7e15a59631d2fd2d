#pragma once

#include <stdexcept>
#include <string>

namespace ecstates {

// Base of all toolkit errors. code() is the stable machine-readable name;
// the CLI prints it on stderr and exits with status 2.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(const std::string& what) : Error("NotHermitian", what) {}
};

class NotPositive : public Error {
 public:
  explicit NotPositive(const std::string& what) : Error("NotPositive", what) {}
};

class TraceNotOne : public Error {
 public:
  explicit TraceNotOne(const std::string& what) : Error("TraceNotOne", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("DimensionMismatch", what) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error("InvalidParameter", what) {}
};

class NotMember : public Error {
 public:
  explicit NotMember(const std::string& what) : Error("NotMember", what) {}
};

class DependentVectors : public Error {
 public:
  explicit DependentVectors(const std::string& what) : Error("DependentVectors", what) {}
};

class NoChord : public Error {
 public:
  explicit NoChord(const std::string& what) : Error("NoChord", what) {}
};

class InfeasibleBudget : public Error {
 public:
  explicit InfeasibleBudget(const std::string& what) : Error("InfeasibleBudget", what) {}
};

}  // namespace ecstates
