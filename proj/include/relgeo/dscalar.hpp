#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace relgeo {

inline constexpr int kMaxDim = 4;                // intrinsic dimension cap
inline constexpr int kMaxAmbient = kMaxDim + 1;  // hypersurfaces of R^(n+1)

// Scalar carrying exact first- and second-order partial derivatives with
// respect to the n chart parameters. Arithmetic propagates the derivative
// data by the product and chain rules, so any quantity assembled from
// order-2 seeds keeps usable gradient and Hessian entries.
class D2 {
public:
    D2() = default;
    D2(int n, double value) : n_(n), v_(value) { g_.fill(0.0); h_.fill(0.0); }

    int dim() const { return n_; }
    double v() const { return v_; }
    double d(int i) const { return g_[static_cast<std::size_t>(i)]; }
    double dd(int i, int j) const { return h_[static_cast<std::size_t>(i * kMaxDim + j)]; }

    void set_v(double x) { v_ = x; }
    void set_d(int i, double x) { g_[static_cast<std::size_t>(i)] = x; }
    void set_dd(int i, int j, double x) {
        h_[static_cast<std::size_t>(i * kMaxDim + j)] = x;
        h_[static_cast<std::size_t>(j * kMaxDim + i)] = x;
    }

    D2 operator-() const {
        D2 r = *this;
        r.v_ = -r.v_;
        for (auto& x : r.g_) x = -x;
        for (auto& x : r.h_) x = -x;
        return r;
    }

    D2& operator+=(const D2& o) {
        assert(n_ == o.n_);
        v_ += o.v_;
        for (std::size_t i = 0; i < g_.size(); ++i) g_[i] += o.g_[i];
        for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += o.h_[i];
        return *this;
    }
    D2& operator-=(const D2& o) {
        assert(n_ == o.n_);
        v_ -= o.v_;
        for (std::size_t i = 0; i < g_.size(); ++i) g_[i] -= o.g_[i];
        for (std::size_t i = 0; i < h_.size(); ++i) h_[i] -= o.h_[i];
        return *this;
    }

    friend D2 operator+(D2 a, const D2& b) { return a += b; }
    friend D2 operator-(D2 a, const D2& b) { return a -= b; }

    friend D2 operator*(const D2& a, const D2& b) {
        assert(a.n_ == b.n_);
        D2 r(a.n_, a.v_ * b.v_);
        for (int i = 0; i < a.n_; ++i) r.set_d(i, a.d(i) * b.v_ + a.v_ * b.d(i));
        for (int i = 0; i < a.n_; ++i)
            for (int j = i; j < a.n_; ++j)
                r.set_dd(i, j, a.dd(i, j) * b.v_ + a.d(i) * b.d(j) + a.d(j) * b.d(i) + a.v_ * b.dd(i, j));
        return r;
    }

    friend D2 operator*(double s, D2 a) {
        a.v_ *= s;
        for (auto& x : a.g_) x *= s;
        for (auto& x : a.h_) x *= s;
        return a;
    }
    friend D2 operator*(const D2& a, double s) { return s * a; }
    friend D2 operator+(D2 a, double s) { a.v_ += s; return a; }
    friend D2 operator+(double s, D2 a) { a.v_ += s; return a; }
    friend D2 operator-(D2 a, double s) { a.v_ -= s; return a; }
    friend D2 operator-(double s, const D2& a) { return s + (-a); }
    friend D2 operator/(const D2& a, const D2& b) { return a * inverse(b); }
    friend D2 operator/(const D2& a, double s) { return (1.0 / s) * a; }
    friend D2 operator/(double s, const D2& b) { return s * inverse(b); }

    // 1/f:  d(1/f) = -f'/f^2,  dd(1/f) = (2 f'f' - f f'')/f^3
    friend D2 inverse(const D2& f) {
        const double iv = 1.0 / f.v_;
        D2 r(f.n_, iv);
        for (int i = 0; i < f.n_; ++i) r.set_d(i, -f.d(i) * iv * iv);
        for (int i = 0; i < f.n_; ++i)
            for (int j = i; j < f.n_; ++j)
                r.set_dd(i, j, (2.0 * f.d(i) * f.d(j) * iv - f.dd(i, j)) * iv * iv);
        return r;
    }

    // chain rule for a smooth unary map with given value/derivatives at f.v()
    friend D2 chain(const D2& f, double phi, double dphi, double ddphi) {
        D2 r(f.n_, phi);
        for (int i = 0; i < f.n_; ++i) r.set_d(i, dphi * f.d(i));
        for (int i = 0; i < f.n_; ++i)
            for (int j = i; j < f.n_; ++j)
                r.set_dd(i, j, dphi * f.dd(i, j) + ddphi * f.d(i) * f.d(j));
        return r;
    }

    friend D2 sqrt(const D2& f) {
        const double s = std::sqrt(f.v_);
        return chain(f, s, 0.5 / s, -0.25 / (s * f.v_));
    }
    friend D2 exp(const D2& f) {
        const double e = std::exp(f.v_);
        return chain(f, e, e, e);
    }
    // log of a positive quantity
    friend D2 log(const D2& f) {
        return chain(f, std::log(f.v_), 1.0 / f.v_, -1.0 / (f.v_ * f.v_));
    }
    // log|f| for f != 0 (derivatives coincide with those of log f)
    friend D2 log_abs(const D2& f) {
        return chain(f, std::log(std::abs(f.v_)), 1.0 / f.v_, -1.0 / (f.v_ * f.v_));
    }
    friend D2 abs(const D2& f) { return f.v_ < 0.0 ? -f : f; }
    // f^a for f > 0, real exponent
    friend D2 pow(const D2& f, double a) {
        const double p = std::pow(f.v_, a);
        return chain(f, p, a * p / f.v_, a * (a - 1.0) * p / (f.v_ * f.v_));
    }

private:
    int n_ = 0;
    double v_ = 0.0;
    std::array<double, kMaxDim> g_{};
    std::array<double, kMaxDim * kMaxDim> h_{};
};

} // namespace relgeo
