#pragma once

#include "starflow/star.hpp"

namespace starflow {

// Square matrix with formal-series entries, all sharing one frame, backend,
// and truncation order.
class MatrixObservable {
 public:
  MatrixObservable(size_t n, FrameId frame, Backend backend, int order);
  static MatrixObservable identity(size_t n, FrameId frame, Backend backend,
                                   int order);

  size_t size() const { return n_; }
  FrameId frame() const { return e_[0].frame(); }
  Backend backend() const { return e_[0].backend(); }
  int order() const { return e_[0].order(); }

  const FormalSeries& at(size_t i, size_t j) const { return e_.at(i * n_ + j); }
  void set(size_t i, size_t j, FormalSeries v);

  MatrixObservable adjoint() const;  // conjugate transpose
  MatrixObservable operator+(const MatrixObservable& o) const;
  MatrixObservable operator-(const MatrixObservable& o) const;

  double max_deviation(const MatrixObservable& o) const;

 private:
  size_t n_;
  std::vector<FormalSeries> e_;
};

// Entrywise star-matrix product: (A star B)_{ik} = sum_j A_{ij} star B_{jk}.
MatrixObservable matrix_star(const StarProduct& prod, const MatrixObservable& a,
                             const MatrixObservable& b,
                             const FrameCatalog* frames = nullptr);

}  // namespace starflow
