#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Core>

#include "chiral/types.hpp"

namespace chiral {

// Real quaternion w + x i + y j + z k. Real and complex scalars embed as the
// subfields {x = y = z = 0} and {y = z = 0}, so one dense code path serves
// beta = 1, 2 and 4.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double re) : w(re) {}  // NOLINT(google-explicit-constructor)
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
  explicit Quaternion(const Complex& c) : w(c.real()), x(c.imag()) {}

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double abs() const { return std::sqrt(norm2()); }

  Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }
};

inline constexpr Quaternion operator+(Quaternion a, const Quaternion& b) {
  return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}
inline constexpr Quaternion operator-(Quaternion a, const Quaternion& b) {
  return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}
inline constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }

// Hamilton product; not commutative.
inline constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
inline constexpr Quaternion operator*(const Quaternion& a, double s) {
  return {a.w * s, a.x * s, a.y * s, a.z * s};
}
inline constexpr Quaternion operator*(double s, const Quaternion& a) { return a * s; }
inline constexpr Quaternion operator/(const Quaternion& a, double s) {
  return {a.w / s, a.x / s, a.y / s, a.z / s};
}
inline constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

inline Quaternion conj(const Quaternion& q) { return q.conj(); }
inline double abs2(const Quaternion& q) { return q.norm2(); }
inline double real(const Quaternion& q) { return q.w; }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ',' << q.x << ',' << q.y << ',' << q.z << ')';
}

using QuaternionMatrix = Matrix<Quaternion>;
using QuaternionVector = Vector<Quaternion>;

// Complex 2x2 image of q = (w + x i) + (y + z i) j:
//   [  a      b   ]
//   [ -conj b conj a ]   with a = w + x i, b = y + z i.
// The map is a *-homomorphism: it respects products and sends conj to the adjoint.
inline Eigen::Matrix2cd complex_embedding(const Quaternion& q) {
  const Complex a(q.w, q.x);
  const Complex b(q.y, q.z);
  Eigen::Matrix2cd out;
  out << a, b, -std::conj(b), std::conj(a);
  return out;
}

}  // namespace chiral

namespace Eigen {

template <>
struct NumTraits<chiral::Quaternion> : GenericNumTraits<double> {
  using Real = double;
  using NonInteger = chiral::Quaternion;
  using Nested = chiral::Quaternion;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 4,
    AddCost = 4,
    MulCost = 16
  };
};

}  // namespace Eigen
