#pragma once

#include <map>
#include <string>
#include <vector>

namespace gplp {

/// Coefficients whose magnitude falls below this are treated as zero.
inline constexpr double kZeroCoefficient = 1e-13;

/// Real linear combination `sum(coeff_i * var_i) + constant`. Variables are
/// kept in lexicographic order and zero coefficients are never stored.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(double constant) : constant_(constant) {}

  static LinearForm variable(const std::string& name, double coeff = 1.0);

  double constant() const { return constant_; }
  const std::map<std::string, double>& coeffs() const { return coeffs_; }
  double coeff(const std::string& var) const;
  bool mentions(const std::string& var) const {
    return coeffs_.count(var) != 0;
  }
  bool is_constant() const { return coeffs_.empty(); }
  std::vector<std::string> variables() const;
  /// Lexicographically smallest variable; empty string for constants.
  const std::string& leading_variable() const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(double factor);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) {
    return a += b;
  }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) {
    return a -= b;
  }
  friend LinearForm operator*(LinearForm a, double k) { return a *= k; }
  friend LinearForm operator*(double k, LinearForm a) { return a *= k; }
  LinearForm operator-() const { return *this * -1.0; }

  void add_term(const std::string& var, double coeff);
  void set_constant(double c) { constant_ = c; }

  /// Replaces `var` by `replacement` everywhere.
  LinearForm substitute(const std::string& var,
                        const LinearForm& replacement) const;
  LinearForm without(const std::string& var) const;

  /// Throws AlgebraError when a variable has no value.
  double evaluate(const std::map<std::string, double>& values) const;

  /// Exact structural equality.
  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  bool approx_equal(const LinearForm& other, double tol) const;

 private:
  std::map<std::string, double> coeffs_;
  double constant_ = 0.0;
};

/// Real formatted with 12 significant digits.
std::string format_real(double value);

/// Human-readable rendering such as `X - Z + 0.5`.
std::string to_string(const LinearForm& form);

}  // namespace gplp
