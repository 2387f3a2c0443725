#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace freeholo {

// Root of every error this library throws. MathError marks failures that
// carry mathematical meaning (the CLI maps them to exit code 1), SchemaError
// marks malformed input (exit code 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MathError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

class SingularMatrix : public MathError {
 public:
  SingularMatrix(double sigma_min, double sigma_max)
      : MathError("singular matrix: sigma_min=" + std::to_string(sigma_min) +
                  " sigma_max=" + std::to_string(sigma_max)),
        sigma_min_(sigma_min),
        sigma_max_(sigma_max) {}
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }

 private:
  double sigma_min_;
  double sigma_max_;
};

class DimensionTooSmall : public MathError {
 public:
  using MathError::MathError;
};

class NotIsometric : public MathError {
 public:
  explicit NotIsometric(double defect)
      : MathError("block matrix is not an isometry: defect=" + std::to_string(defect)),
        defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

class OutsideDomain : public MathError {
 public:
  using MathError::MathError;
};

class SyntaxError : public SchemaError {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : SchemaError(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownVariable : public SchemaError {
 public:
  UnknownVariable(int index, std::size_t offset)
      : SchemaError("unknown variable x" + std::to_string(index) + " at byte " +
                    std::to_string(offset)),
        index_(index),
        offset_(offset) {}
  int index() const { return index_; }
  std::size_t offset() const { return offset_; }

 private:
  int index_;
  std::size_t offset_;
};

class NotPolynomial : public MathError {
 public:
  NotPolynomial() : MathError("expression contains inv(); not a free polynomial") {}
};

// Raised when evaluation of a rational expression has to invert a singular
// matrix. The path lists child indices from the root to the failing inv node.
class SingularityHit : public MathError {
 public:
  explicit SingularityHit(std::vector<int> path)
      : MathError("singularity hit at path " + format_path(path)), path_(std::move(path)) {}
  const std::vector<int>& path() const { return path_; }

  static std::string format_path(const std::vector<int>& path) {
    std::string s = "/";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) s += '/';
      s += std::to_string(path[i]);
    }
    return s;
  }

 private:
  std::vector<int> path_;
};

class GramMismatch : public MathError {
 public:
  explicit GramMismatch(double deviation)
      : MathError("Gram matrices of input and output families differ by " +
                  std::to_string(deviation)),
        deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class RankOverflow : public MathError {
 public:
  using MathError::MathError;
};

class BelowFloor : public MathError {
 public:
  BelowFloor(const std::string& what, double min_eigenvalue)
      : MathError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class NoCover : public MathError {
 public:
  explicit NoCover(double best_radius)
      : MathError("no candidate covers the sample set; best radius " +
                  std::to_string(best_radius)),
        best_radius_(best_radius) {}
  double best_radius() const { return best_radius_; }

 private:
  double best_radius_;
};

class TermBlowup : public MathError {
 public:
  using MathError::MathError;
};

class NotInvertible : public MathError {
 public:
  using MathError::MathError;
};

class RootFindingFailure : public MathError {
 public:
  using MathError::MathError;
};

}  // namespace freeholo
