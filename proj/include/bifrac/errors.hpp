#pragma once

#include <stdexcept>
#include <string>

namespace bifrac {

// Base class for all numerical-domain errors thrown by this library.
// Messages are prefixed with the concrete class name so that callers
// printing e.what() get a self-identifying diagnostic.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

class SpecialAngle : public Error {
  public:
    explicit SpecialAngle(const std::string& m) : Error("SpecialAngle: " + m) {}
};

class SpecialAngleNeedsLimit : public Error {
  public:
    explicit SpecialAngleNeedsLimit(const std::string& m) : Error("SpecialAngleNeedsLimit: " + m) {}
};

class ForbiddenBand : public Error {
  public:
    explicit ForbiddenBand(const std::string& m) : Error("ForbiddenBand: " + m) {}
};

class QuadratureDivergence : public Error {
  public:
    explicit QuadratureDivergence(const std::string& m) : Error("QuadratureDivergence: " + m) {}
};

class AsymmetricGrid : public Error {
  public:
    explicit AsymmetricGrid(const std::string& m) : Error("AsymmetricGrid: " + m) {}
};

class TailTooFat : public Error {
  public:
    explicit TailTooFat(const std::string& m) : Error("TailTooFat: " + m) {}
};

class DimTooSmall : public Error {
  public:
    explicit DimTooSmall(const std::string& m) : Error("DimTooSmall: " + m) {}
};

class Overflow : public Error {
  public:
    explicit Overflow(const std::string& m) : Error("Overflow: " + m) {}
};

class NotGaussian : public Error {
  public:
    explicit NotGaussian(const std::string& m) : Error("NotGaussian: " + m) {}
};

class PNotSmooth : public Error {
  public:
    explicit PNotSmooth(const std::string& m) : Error("PNotSmooth: " + m) {}
};

class DegenerateGaussian : public Error {
  public:
    explicit DegenerateGaussian(const std::string& m) : Error("DegenerateGaussian: " + m) {}
};

}  // namespace bifrac
