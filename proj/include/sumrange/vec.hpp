#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <string>

namespace sumrange {

/// Point of R^d for a small fixed dimension d <= 16. Plain value type,
/// inline storage, no allocation.
class Vec {
  public:
    static constexpr int kMaxDim = 16;

    Vec() = default;
    explicit Vec(int dim) : dim_(dim) {
        assert(dim >= 0 && dim <= kMaxDim);
        c_.fill(0.0);
    }
    Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
        assert(dim_ <= kMaxDim);
        int i = 0;
        for (double x : xs) c_[i++] = x;
    }

    static Vec unit(int dim, int axis) {
        Vec v(dim);
        v[axis] = 1.0;
        return v;
    }

    int dim() const { return dim_; }
    double& operator[](int i) {
        assert(i >= 0 && i < dim_);
        return c_[i];
    }
    double operator[](int i) const {
        assert(i >= 0 && i < dim_);
        return c_[i];
    }

    Vec& operator+=(const Vec& o) {
        assert(dim_ == o.dim_);
        for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        assert(dim_ == o.dim_);
        for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < dim_; ++i) c_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    double dot(const Vec& o) const {
        assert(dim_ == o.dim_);
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
        return s;
    }
    double norm_sq() const { return dot(*this); }
    double norm() const { return std::sqrt(norm_sq()); }
    double dist(const Vec& o) const { return (*this - o).norm(); }

    bool finite() const {
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite(c_[i])) return false;
        return true;
    }
    bool is_zero(double tol = 0.0) const { return norm() <= tol; }

    /// Unit vector in the same direction; requires norm > 0.
    Vec normalized() const {
        double n = norm();
        assert(n > 0.0);
        Vec v = *this;
        v *= 1.0 / n;
        return v;
    }

    bool approx_eq(const Vec& o, double tol) const { return dist(o) <= tol; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        char buf[32];
        for (int i = 0; i < dim_; ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", c_[i]);
            s += buf;
            if (i + 1 < dim_) s += ", ";
        }
        return s + ")";
    }

  private:
    int dim_ = 0;
    std::array<double, kMaxDim> c_{};
};

}  // namespace sumrange
