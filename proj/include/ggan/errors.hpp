#pragma once

#include <stdexcept>
#include <string>

namespace ggan {

enum class Err {
  CycleDetected,
  DuplicateName,
  ObservedParentOfLatent,
  UnknownVariable,
  ShapeMismatch,
  NonPositiveTemperature,
  MissingDependencyFn,
  MissingObserved,
  MissingVariable,
  NonFiniteGradient,
  NonFiniteLoss,
  BadDimension,
  BadParameter,
  BadMagic,
  TruncatedFile,
  VersionMismatch,
  CorruptManifest,
  IoError,
  EmptyInput,
};

const char* err_name(Err e);

class GganError : public std::runtime_error {
 public:
  GganError(Err kind, const std::string& what)
      : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

}  // namespace ggan
