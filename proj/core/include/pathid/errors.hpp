#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pathid {

// Parameter or input outside its documented domain.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A closed form was requested at settings where it does not hold.
class SettingsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnderdeterminedFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A recovered quantity has no meaningful value for the given data
// (e.g. I_H when eta = 0).
class UndefinedQuantityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InconsistentDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnidentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AmbiguousSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompletePlanError : public std::runtime_error {
 public:
  explicit IncompletePlanError(std::vector<std::string> missing);

  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

}  // namespace pathid
