#include "igopt/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace igopt {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

const std::vector<std::string> kBinary = {"onemax", "leadingones"};
const std::vector<std::string> kContinuous = {"sphere",  "ellipsoid",   "cigar",    "rosenbrock",
                                              "ackley",  "bohachevsky", "schaffer", "rastrigin"};
}  // namespace

bool is_binary_function(const std::string &name) {
  for (const auto &n : kBinary)
    if (n == name) return true;
  return false;
}

bool is_known_function(const std::string &name) {
  if (is_binary_function(name)) return true;
  for (const auto &n : kContinuous)
    if (n == name) return true;
  return false;
}

std::vector<std::string> known_function_names() {
  std::vector<std::string> all = kBinary;
  all.insert(all.end(), kContinuous.begin(), kContinuous.end());
  return all;
}

long long eval_binary(const std::string &name, const BitVector &x) {
  if (x.empty()) throw std::invalid_argument("eval_binary: empty bit vector");
  if (name == "onemax") {
    long long s = 0;
    for (auto b : x) s += b;
    return s;
  }
  if (name == "leadingones") {
    long long s = 0;
    for (auto b : x) {
      if (!b) break;
      ++s;
    }
    return s;
  }
  throw std::invalid_argument("eval_binary: unknown function " + name);
}

double eval_continuous(const std::string &name, const Eigen::VectorXd &x) {
  const int d = static_cast<int>(x.size());
  if (name == "sphere") {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i] * x[i];
    return s;
  }
  if (name == "ellipsoid") {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double c = std::pow(1000.0, static_cast<double>(i) / (d - 1)) * x[i];
      s += c * c;
    }
    return s;
  }
  if (name == "cigar") {
    double s = x[0] * x[0];
    for (int i = 1; i < d; ++i) s += (1000.0 * x[i]) * (1000.0 * x[i]);
    return s;
  }
  if (name == "rosenbrock") {
    double s = 0.0;
    for (int i = 0; i + 1 < d; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = x[i] - 1.0;
      s += 100.0 * a * a + b * b;
    }
    return s;
  }
  if (name == "ackley") {
    double sq = 0.0, cs = 0.0;
    for (int i = 0; i < d; ++i) {
      sq += x[i] * x[i];
      cs += std::cos(2.0 * kPi * x[i]);
    }
    return 20.0 - 20.0 * std::exp(-0.2 * std::sqrt(sq / d)) + std::exp(1.0) - std::exp(cs / d);
  }
  if (name == "bohachevsky") {
    // cos(3 pi x_j) in the usual statement is cos(3 pi x_i) over consecutive pairs.
    double s = 0.0;
    for (int i = 0; i + 1 < d; ++i)
      s += x[i] * x[i] + 2.0 * x[i + 1] * x[i + 1] - 0.3 * std::cos(3.0 * kPi * x[i]) -
           0.4 * std::cos(4.0 * kPi * x[i + 1]) + 0.7;
    return s;
  }
  if (name == "schaffer") {
    double s = 0.0;
    for (int i = 0; i + 1 < d; ++i) {
      const double r2 = x[i] * x[i] + x[i + 1] * x[i + 1];
      const double sn = std::sin(50.0 * std::pow(r2, 0.1));
      s += std::pow(r2, 0.25) * (sn * sn + 1.0);
    }
    return s;
  }
  if (name == "rastrigin") {
    // "10n" with n the dimension: 10 d plus the per-coordinate terms.
    double s = 10.0 * d;
    for (int i = 0; i < d; ++i) s += x[i] * x[i] - 10.0 * std::cos(2.0 * kPi * x[i]);
    return s;
  }
  throw std::invalid_argument("eval_continuous: unknown function " + name);
}

BenchmarkSpec default_spec(const std::string &name, int d) {
  if (!is_known_function(name)) throw std::invalid_argument("unknown benchmark function " + name);
  BenchmarkSpec spec;
  spec.name = name;
  spec.d = d;
  if (is_binary_function(name)) {
    spec.domain = DomainKind::Binary;
    spec.optimum = static_cast<double>(d);
    spec.init_lo = spec.init_hi = 0.0;
    spec.eigen_floor = 0.0;
    spec.budget = name == "onemax" ? 3LL * d * 100 : 4LL * d * 10000;
    spec.target = static_cast<double>(d);
    return spec;
  }
  spec.domain = DomainKind::Continuous;
  spec.optimum = 0.0;
  if (name == "rosenbrock") {
    spec.init_lo = -2.0;
    spec.init_hi = 2.0;
  } else if (name == "ackley") {
    spec.init_lo = 1.0;
    spec.init_hi = 30.0;
  } else if (name == "bohachevsky") {
    spec.init_lo = 1.0;
    spec.init_hi = 15.0;
  } else if (name == "schaffer") {
    spec.init_lo = 10.0;
    spec.init_hi = 100.0;
  } else {
    spec.init_lo = 1.0;
    spec.init_hi = 5.0;
  }
  spec.eigen_floor = name == "schaffer" ? 1e-60 : 1e-30;
  spec.budget = 1000000LL * d;
  spec.target = 1e-10;
  return spec;
}

}  // namespace igopt
