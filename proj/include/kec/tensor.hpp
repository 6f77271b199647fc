#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace kec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense tensor whose indices all run over [0, dim).
///
/// Components are stored row-major: the last index varies fastest.  Index
/// placement (upper/lower) is a convention of the owning type, documented
/// where each tensor is declared.
template <std::size_t Rank>
class CubeTensor {
 public:
  CubeTensor() = default;
  explicit CubeTensor(int dim, double fill = 0.0)
      : dim_(dim), data_(extent(dim), fill) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank, "wrong number of indices");
    return data_[offset(idx...)];
  }

  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank, "wrong number of indices");
    return data_[offset(idx...)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  Vec flat() const { return Eigen::Map<const Vec>(data_.data(), static_cast<Eigen::Index>(data_.size())); }

  static CubeTensor from_flat(int dim, const Vec& flat) {
    CubeTensor out(dim);
    std::copy(flat.data(), flat.data() + flat.size(), out.data_.begin());
    return out;
  }

  CubeTensor& operator+=(const CubeTensor& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  CubeTensor& operator-=(const CubeTensor& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CubeTensor& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend CubeTensor operator-(CubeTensor a, const CubeTensor& b) { return a -= b; }
  friend CubeTensor operator+(CubeTensor a, const CubeTensor& b) { return a += b; }
  friend CubeTensor operator*(double s, CubeTensor a) { return a *= s; }

 private:
  static std::size_t extent(int dim) {
    std::size_t e = 1;
    for (std::size_t r = 0; r < Rank; ++r) e *= static_cast<std::size_t>(dim);
    return e;
  }

  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

using Tensor3 = CubeTensor<3>;
using Tensor4 = CubeTensor<4>;
using Tensor5 = CubeTensor<5>;

template <std::size_t Rank>
double max_abs_diff(const CubeTensor<Rank>& a, const CubeTensor<Rank>& b) {
  double m = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace kec
