#include "cnet/params.hpp"

#include <cmath>

namespace cnet {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out = "invalid parameters: ";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "; ";
    out += parts[i];
  }
  return out;
}

}  // namespace

ParameterError::ParameterError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

std::vector<std::string> check_params(const Parameters& p) {
  std::vector<std::string> v;
  auto finite = [&](double x, const char* name) {
    if (!std::isfinite(x)) {
      v.push_back(std::string(name) + " must be finite");
      return false;
    }
    return true;
  };
  auto positive = [&](double x, const char* name) {
    if (finite(x, name) && !(x > 0.0)) v.push_back(std::string(name) + " must be positive");
  };
  auto nonneg = [&](double x, const char* name) {
    if (finite(x, name) && x < 0.0) v.push_back(std::string(name) + " must be non-negative");
  };

  if (finite(p.phi, "phi") && !(p.phi > 1.0)) v.emplace_back("phi must exceed 1");
  if (finite(p.beta, "beta") && !(p.beta > 0.0 && p.beta < 1.0))
    v.emplace_back("beta must lie strictly inside (0,1)");
  if (finite(p.k, "k") && !(p.k > 0.0 && p.k < 1.0))
    v.emplace_back("k must lie strictly inside (0,1)");
  if (finite(p.alpha, "alpha") && !(p.alpha > 0.0 && p.alpha <= 1.0))
    v.emplace_back("alpha must lie in (0,1]");
  positive(p.gamma, "gamma");
  positive(p.delta_d, "delta_d");
  positive(p.delta_u, "delta_u");
  positive(p.w, "w");
  positive(p.p, "p");
  nonneg(p.r_u, "r_u");
  nonneg(p.r_d, "r_d");
  nonneg(p.r_bb, "r_bb");
  if (p.n_agents < 3) v.emplace_back("n_agents must be at least 3");
  if (p.horizon < 1) v.emplace_back("horizon must be at least 1");
  positive(p.a0, "a0");
  positive(p.e0, "e0");
  return v;
}

const Parameters& validate_params(const Parameters& p) {
  auto v = check_params(p);
  if (!v.empty()) throw ParameterError(std::move(v));
  return p;
}

}  // namespace cnet
