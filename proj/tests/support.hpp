#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gplp/algebra/success_function.hpp"
#include "gplp/front/program.hpp"

#ifndef GPLP_PROGRAMS_DIR
#define GPLP_PROGRAMS_DIR "programs"
#endif

namespace testing {

inline std::string program_path(const std::string& name) {
  return std::string(GPLP_PROGRAMS_DIR) + "/" + name;
}

inline std::string read_program_text(const std::string& name) {
  std::ifstream in(program_path(name));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline gplp::Program load(const std::string& name) {
  return gplp::parse_program(read_program_text(name));
}

// Scalar normal density written out directly, kept apart from the library.
inline double pdf(double x, double mean, double var) {
  const double pi = 3.14159265358979323846;
  return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) /
         std::sqrt(2.0 * pi * var);
}

inline gplp::LinearForm form(std::map<std::string, double> coeffs,
                             double constant = 0.0) {
  gplp::LinearForm f(constant);
  for (const auto& [v, a] : coeffs) f.add_term(v, a);
  return f;
}

inline gplp::LinearForm var(const std::string& name) {
  return gplp::LinearForm::variable(name);
}

inline double rel_err(double got, double want) {
  double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine);
  }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(integer(0, static_cast<int>(xs.size()) - 1))];
  }
};

// Mixture program with the standard widget parameters, inline so tests do not
// depend on file layout.
inline const char* kMixture = R"(
widget(X) :-
    msw(m, M),
    msw(st(M), Z),
    msw(pt, Y),
    X = Y + Z.

values(m, [a, b]).
values(st(_), real).
values(pt, real).

:- set_sw(m, [0.3, 0.7]),
   set_sw(st(a), norm(2.0, 1.0)),
   set_sw(st(b), norm(3.0, 1.0)),
   set_sw(pt, norm(0.5, 0.1)).
)";

// Kalman program body; callers append obs facts and set_sw lines.
inline const char* kKalmanRules = R"(
kf(N, T) :-
    msw(init, S),
    kf_part(0, N, S, T).

kf_part(I, N, S, T) :-
    I < N, NextI is I+1,
    trans(S, I, NextS),
    emit(NextS, NextI, V),
    obs(NextI, V),
    kf_part(NextI, N, NextS, T).
kf_part(I, N, S, T) :- I=N, T=S.

trans(S, I, NextS) :-
    msw(trans_err, I, E),
    NextS = S + E.

emit(NextS, I, V) :-
    msw(obs_err, I, X),
    V = NextS + X.

values(init, real).
values(trans_err, real).
values(obs_err, real).
)";

inline std::string kalman_program(double mu0, double s0, double ss, double sv,
                                  const std::vector<double>& obs) {
  std::ostringstream os;
  os.precision(17);
  os << kKalmanRules;
  for (std::size_t i = 0; i < obs.size(); ++i)
    os << "obs(" << i + 1 << ", " << std::showpoint << obs[i]
       << std::noshowpoint << ").\n";
  os << ":- set_sw(init, norm(" << mu0 << ", " << s0 << ")),\n"
     << "   set_sw(trans_err, norm(0, " << ss << ")),\n"
     << "   set_sw(obs_err, norm(0, " << sv << ")).\n";
  return os.str();
}

}  // namespace testing
