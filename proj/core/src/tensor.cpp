#include "glaa/tensor.hpp"

namespace glaa {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorMap = Eigen::Map<const RowMajorMatrix>;
using ColMajorMap = Eigen::Map<const Matrix>;

void check_mode(int mode) {
  if (mode < 1 || mode > 3) throw ValueError("mode must be 1, 2, or 3");
}

}  // namespace

Matrix matricize(const Tensor3& t, int mode) {
  check_mode(mode);
  const auto& d = t.dims();
  const double* data = t.values().data();
  switch (mode) {
    case 1:
      // flat = i1*(p2*p3) + (i2*p3 + i3): contiguous rows.
      return RowMajorMap(data, d[0], d[1] * d[2]);
    case 3:
      // flat = (i1*p2 + i2)*p3 + i3: contiguous columns.
      return ColMajorMap(data, d[2], d[0] * d[1]);
    default: {
      Matrix m(d[1], d[2] * d[0]);
      for (Index i1 = 0; i1 < d[0]; ++i1) {
        for (Index i2 = 0; i2 < d[1]; ++i2) {
          for (Index i3 = 0; i3 < d[2]; ++i3) {
            m(i2, i3 * d[0] + i1) = t(i1, i2, i3);
          }
        }
      }
      return m;
    }
  }
}

Tensor3 refold(const Matrix& m, int mode, const Dims& dims) {
  check_mode(mode);
  const Index other = dims[0] * dims[1] * dims[2] / dims[mode - 1];
  if (m.rows() != dims[mode - 1] || m.cols() != other) {
    throw DimensionError("refold: matrix shape inconsistent with dims/mode");
  }
  Tensor3 t(dims);
  switch (mode) {
    case 1:
      Eigen::Map<RowMajorMatrix>(t.values().data(), dims[0],
                                 dims[1] * dims[2]) = m;
      break;
    case 3:
      Eigen::Map<Matrix>(t.values().data(), dims[2], dims[0] * dims[1]) = m;
      break;
    default:
      for (Index i1 = 0; i1 < dims[0]; ++i1) {
        for (Index i2 = 0; i2 < dims[1]; ++i2) {
          for (Index i3 = 0; i3 < dims[2]; ++i3) {
            t(i1, i2, i3) = m(i2, i3 * dims[0] + i1);
          }
        }
      }
  }
  return t;
}

Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode) {
  check_mode(mode);
  const auto& d = t.dims();
  if (m.cols() != d[mode - 1]) {
    throw DimensionError("mode_product: m.cols() must equal t.dim(mode)");
  }
  Dims out = d;
  out[mode - 1] = m.rows();
  Tensor3 r(out);
  switch (mode) {
    case 1:
      Eigen::Map<RowMajorMatrix>(r.values().data(), out[0], d[1] * d[2]) =
          m * RowMajorMap(t.values().data(), d[0], d[1] * d[2]);
      break;
    case 3:
      Eigen::Map<Matrix>(r.values().data(), out[2], d[0] * d[1]) =
          m * ColMajorMap(t.values().data(), d[2], d[0] * d[1]);
      break;
    default:
      // Slice i1 of the tensor is a contiguous row-major p2 x p3 block.
      for (Index i1 = 0; i1 < d[0]; ++i1) {
        Eigen::Map<RowMajorMatrix>(r.values().data() + i1 * out[1] * d[2],
                                   out[1], d[2]) =
            m * RowMajorMap(t.values().data() + i1 * d[1] * d[2], d[1], d[2]);
      }
  }
  return r;
}

void outer_accumulate(Tensor3& acc, const Vector& x, const Vector& y,
                      const Vector& z, double weight) {
  const auto& d = acc.dims();
  if (x.size() != d[0] || y.size() != d[1] || z.size() != d[2]) {
    throw DimensionError("outer_accumulate: vector lengths must match dims");
  }
  double* data = acc.values().data();
  Index off = 0;
  for (Index i = 0; i < d[0]; ++i) {
    const double wx = weight * x[i];
    for (Index j = 0; j < d[1]; ++j) {
      const double wxy = wx * y[j];
      for (Index k = 0; k < d[2]; ++k) {
        data[off++] += wxy * z[k];
      }
    }
  }
}

}  // namespace glaa
