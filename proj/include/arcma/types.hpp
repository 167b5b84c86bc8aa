#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace arcma {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Thrown when an oracle call would exceed its evaluation budget.
/// Runs treat this as normal termination, not as a failure.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// Thrown when an estimator cannot produce a value (e.g. an unsolvable
/// surrogate system). Callers keep their previous estimate.
class EstimationFailed : public std::runtime_error {
 public:
  explicit EstimationFailed(const std::string& what) : std::runtime_error(what) {}
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Decorrelated seed for stream `stream` of a master seed, so one run seed
/// can drive several independent generators (oracle noise, candidate
/// sampling, probes) without sharing state.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x94d049bb133111ebULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(stream_seed(master, stream));
}

}  // namespace arcma
