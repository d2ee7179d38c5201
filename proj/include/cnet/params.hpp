#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cnet {

/// Every model constant. Defaults are the reference calibration with
/// 250 agents per sector over 1000 periods.
struct Parameters {
  double phi = 2.5;      // output scale, > 1
  double beta = 0.9;     // output elasticity to net worth, in (0,1)
  double gamma = 0.5;    // intermediate goods per unit of output
  double delta_d = 0.5;  // downstream labor per unit of output
  double delta_u = 1.0;  // upstream goods per unit of labor
  double k = 0.1;        // loan-rate parameter, in (0,1)
  double alpha = 0.85;   // prudential coefficient, in (0,1]
  double r_u = 0.05;     // commercial-credit rate
  double r_d = 0.01;     // deposit rate
  double r_bb = 0.01;    // interbank rate
  double w = 1.0;        // wage
  double p = 1.0;        // intermediate goods price
  int n_agents = 250;    // agents per sector
  int horizon = 1000;    // periods
  double a0 = 100.0;     // entry net worth of firms
  double e0 = 100.0;     // entry equity of banks
  std::uint64_t seed = 1;

  bool operator==(const Parameters&) const = default;
};

/// Thrown by validate_params; carries one message per violated constraint.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Returns the list of violated constraints, empty when `p` is valid.
std::vector<std::string> check_params(const Parameters& p);

/// Returns `p` unchanged or throws ParameterError naming every violation.
const Parameters& validate_params(const Parameters& p);

}  // namespace cnet
