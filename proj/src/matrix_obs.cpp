#include "starflow/matrix_obs.hpp"

namespace starflow {

MatrixObservable::MatrixObservable(size_t n, FrameId frame, Backend backend,
                                   int order)
    : n_(n) {
  if (n == 0) throw std::invalid_argument("matrix observable needs n >= 1");
  e_.assign(n * n, FormalSeries(frame, backend, order));
}

MatrixObservable MatrixObservable::identity(size_t n, FrameId frame, Backend backend,
                                            int order) {
  MatrixObservable m(n, frame, backend, order);
  for (size_t i = 0; i < n; ++i)
    m.set(i, i, FormalSeries::constant(frame, Scalar::one(backend), order));
  return m;
}

void MatrixObservable::set(size_t i, size_t j, FormalSeries v) {
  if (v.frame() != frame() || v.backend() != backend() || v.order() != order())
    throw std::logic_error("matrix entry frame/backend/order mismatch");
  e_.at(i * n_ + j) = std::move(v);
}

MatrixObservable MatrixObservable::adjoint() const {
  MatrixObservable r(n_, frame(), backend(), order());
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = 0; j < n_; ++j) r.set(j, i, at(i, j).conj());
  return r;
}

MatrixObservable MatrixObservable::operator+(const MatrixObservable& o) const {
  if (o.n_ != n_) throw std::logic_error("matrix size mismatch");
  MatrixObservable r = *this;
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
  return r;
}

MatrixObservable MatrixObservable::operator-(const MatrixObservable& o) const {
  if (o.n_ != n_) throw std::logic_error("matrix size mismatch");
  MatrixObservable r = *this;
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
  return r;
}

double MatrixObservable::max_deviation(const MatrixObservable& o) const {
  if (o.n_ != n_) throw std::logic_error("matrix size mismatch");
  double m = 0.0;
  for (size_t k = 0; k < e_.size(); ++k)
    m = std::max(m, e_[k].max_deviation(o.e_[k]));
  return m;
}

MatrixObservable matrix_star(const StarProduct& prod, const MatrixObservable& a,
                             const MatrixObservable& b, const FrameCatalog* frames) {
  if (a.size() != b.size()) throw std::logic_error("matrix size mismatch");
  size_t n = a.size();
  FrameId out_frame =
      prod.kind == StarProduct::Kind::wick ? prod.frame : a.frame();
  MatrixObservable r(n, out_frame, a.backend(), a.order());
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      FormalSeries acc(out_frame, a.backend(), a.order());
      for (size_t j = 0; j < n; ++j)
        acc += star_product(prod, a.at(i, j), b.at(j, k), frames);
      r.set(i, k, acc);
    }
  return r;
}

}  // namespace starflow
