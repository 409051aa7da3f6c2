#pragma once

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>
#include <string>

#include "mckean/errors.hpp"

namespace mckean::fp {

/// Scalar gain F (applied as F(z)·I_d) and F̃(z) = z F(z).
class Nonlinearity {
public:
  enum class Kind { Constant, Arctan, Rational };

  static Nonlinearity constant(double kappa) { return Nonlinearity(Kind::Constant, kappa); }
  static Nonlinearity arctan() { return Nonlinearity(Kind::Arctan, 0.0); }
  static Nonlinearity rational() { return Nonlinearity(Kind::Rational, 0.0); }

  /// Accepts "constant(κ)", "arctan", "rational".
  static Nonlinearity parse(const std::string& s) {
    if (s == "arctan") return arctan();
    if (s == "rational") return rational();
    static const std::regex re(R"(constant\(\s*([-+0-9.eE]+)\s*\))");
    std::smatch m;
    if (std::regex_match(s, m, re)) return constant(std::stod(m[1].str()));
    throw ValidationError("unknown nonlinearity '" + s + "' (expected constant(k), arctan or rational)");
  }

  Kind kind() const noexcept { return kind_; }
  double kappa() const noexcept { return kappa_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Constant: {
        std::ostringstream os;
        os << "constant(" << kappa_ << ")";
        return os.str();
      }
      case Kind::Arctan: return "arctan";
      case Kind::Rational: return "rational";
    }
    return "?";
  }

  double F(double z) const {
    switch (kind_) {
      case Kind::Constant: return kappa_;
      case Kind::Arctan: return std::atan(z);
      case Kind::Rational: return 1.0 / (1.0 + z * z);
    }
    return 0.0;
  }

  double Ftilde(double z) const { return z * F(z); }

  double Ftilde_prime(double z) const {
    switch (kind_) {
      case Kind::Constant: return kappa_;
      case Kind::Arctan: return std::atan(z) + z / (1.0 + z * z);
      case Kind::Rational: {
        const double q = 1.0 + z * z;
        return (1.0 - z * z) / (q * q);
      }
    }
    return 0.0;
  }

  double sup_F() const {
    switch (kind_) {
      case Kind::Constant: return std::abs(kappa_);
      case Kind::Arctan: return std::numbers::pi / 2;
      case Kind::Rational: return 1.0;
    }
    return 0.0;
  }

  double lipschitz_F() const {
    switch (kind_) {
      case Kind::Constant: return 0.0;
      case Kind::Arctan: return 1.0;
      case Kind::Rational: return 3.0 * std::sqrt(3.0) / 8.0;
    }
    return 0.0;
  }

  /// sup |F̃′| over a dense grid of z ∈ [-1e4, 1e4]; finite iff F̃ is
  /// globally Lipschitz on the sampled range.
  double lipschitz_Ftilde() const {
    double m = 0.0;
    for (int i = -200000; i <= 200000; ++i) {
      const double z = std::copysign(std::expm1(std::abs(i) * 4.6e-5), i);  // log-spaced up to ~1e4
      m = std::max(m, std::abs(Ftilde_prime(z)));
    }
    return m;
  }

private:
  Nonlinearity(Kind k, double kappa) : kind_(k), kappa_(kappa) {}
  Kind kind_;
  double kappa_;
};

} // namespace mckean::fp
