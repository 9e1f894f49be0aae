#include "gplp/algebra/linear_form.hpp"

#include <cmath>
#include <cstdio>

#include "gplp/errors.hpp"

namespace gplp {

LinearForm LinearForm::variable(const std::string& name, double coeff) {
  LinearForm f;
  f.add_term(name, coeff);
  return f;
}

double LinearForm::coeff(const std::string& var) const {
  auto it = coeffs_.find(var);
  return it == coeffs_.end() ? 0.0 : it->second;
}

std::vector<std::string> LinearForm::variables() const {
  std::vector<std::string> out;
  out.reserve(coeffs_.size());
  for (const auto& [v, c] : coeffs_) out.push_back(v);
  return out;
}

const std::string& LinearForm::leading_variable() const {
  static const std::string empty;
  return coeffs_.empty() ? empty : coeffs_.begin()->first;
}

void LinearForm::add_term(const std::string& var, double coeff) {
  auto [it, inserted] = coeffs_.try_emplace(var, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) <= kZeroCoefficient) coeffs_.erase(it);
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  for (const auto& [v, c] : other.coeffs_) add_term(v, c);
  constant_ += other.constant_;
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  for (const auto& [v, c] : other.coeffs_) add_term(v, -c);
  constant_ -= other.constant_;
  return *this;
}

LinearForm& LinearForm::operator*=(double factor) {
  if (factor == 0.0) {
    coeffs_.clear();
    constant_ = 0.0;
    return *this;
  }
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= factor;
    if (std::abs(it->second) <= kZeroCoefficient)
      it = coeffs_.erase(it);
    else
      ++it;
  }
  constant_ *= factor;
  return *this;
}

LinearForm LinearForm::substitute(const std::string& var,
                                  const LinearForm& replacement) const {
  auto it = coeffs_.find(var);
  if (it == coeffs_.end()) return *this;
  double c = it->second;
  LinearForm out = without(var);
  out += replacement * c;
  return out;
}

LinearForm LinearForm::without(const std::string& var) const {
  LinearForm out = *this;
  out.coeffs_.erase(var);
  return out;
}

double LinearForm::evaluate(const std::map<std::string, double>& values) const {
  double sum = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = values.find(v);
    if (it == values.end())
      throw AlgebraError("no value for variable " + v);
    sum += c * it->second;
  }
  return sum;
}

bool LinearForm::approx_equal(const LinearForm& other, double tol) const {
  if (coeffs_.size() != other.coeffs_.size()) return false;
  auto close = [tol](double a, double b) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  auto a = coeffs_.begin();
  auto b = other.coeffs_.begin();
  for (; a != coeffs_.end(); ++a, ++b) {
    if (a->first != b->first || !close(a->second, b->second)) return false;
  }
  return close(constant_, other.constant_);
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string to_string(const LinearForm& form) {
  std::string out;
  for (const auto& [v, c] : form.coeffs()) {
    double mag = std::abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (format_real(mag) != "1") out += format_real(mag) + "*";
    out += v;
  }
  double k = form.constant();
  if (out.empty()) return format_real(k);
  if (format_real(std::abs(k)) != "0")
    out += (k < 0 ? " - " : " + ") + format_real(std::abs(k));
  return out;
}

}  // namespace gplp
