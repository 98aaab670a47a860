#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "e2kit/arith.hpp"
#include "e2kit/surd.hpp"
#include "e2kit/weight.hpp"

// The structured set and its smoothed indicator:
//
//   A(x,q,z,a) = { n in (x/4, x] : n = a k (mod q) for some integer k in [0,z) }
//   Phi(n)     = sum over k = n*abar (mod q) of W(k/z)
//
// For z < q/4 (enforced below) at most one residue representative can meet
// the support of W, so Phi(n) = W(k0/z) with k0 = n*abar mod q.  Note the two
// windows are different on purpose: membership uses k0 < z, Phi is supported
// on k0/z in [1/4, 3/4]; the gap is exactly why Phi <= indicator(A).

namespace e2kit {

struct InstanceParams {
  arith::Rational64 tau;  // in (0, 1/2)
  std::int64_t q = 0;
  std::int64_t a = 0;      // normalized to [1, q)
  std::int64_t a_inv = 0;  // abar: a * a_inv = 1 (mod q)
  double z = 0;
  double x = 0;
  double delta = 0;

  double z_pow(double e) const;  // z^e
};

// Validates the parameter windows
//   z in [q^{(1-tau)/(1+tau)} / 2, 2 q^{(1-tau)/(1+tau)}]
//   x in [q^{2/(1+tau)} / 2,       2 q^{2/(1+tau)}]
// plus gcd(a,q) = 1 and z < q/4 (single-representative evaluation of Phi).
// Defaults z and x to the window centers when not given.
InstanceParams derive_params(arith::Rational64 tau, std::int64_t q, std::int64_t a,
                             std::optional<double> z = std::nullopt,
                             std::optional<double> x = std::nullopt,
                             double delta = 0.02);

// flat key=value text record; round-trips exactly
std::string params_to_text(const InstanceParams& p);
InstanceParams params_from_text(const std::string& text);
InstanceParams load_params(const std::string& path);
void save_params(const InstanceParams& p, const std::string& path);

// Phi evaluation helper with precomputed thresholds.
class PhiEval {
 public:
  explicit PhiEval(const InstanceParams& p);

  std::int64_t q() const { return q_; }
  std::int64_t k0(std::int64_t n) const;  // n*abar mod q, in [0, q)
  // increment of k0 per unit step of n along the progression n, n+m, n+2m, ...
  std::int64_t step(std::int64_t m) const;

  double of_k0(std::int64_t k0) const {
    double v = static_cast<double>(k0) / z_;
    return weight::w(v);
  }
  double operator()(std::int64_t n) const { return of_k0(k0(n)); }

  // closed integer support window of Phi: k0 in [support_lo, support_hi]
  std::int64_t support_lo() const { return support_lo_; }
  std::int64_t support_hi() const { return support_hi_; }

 private:
  std::int64_t q_, a_inv_;
  double z_;
  std::int64_t support_lo_, support_hi_;
};

double phi(std::int64_t n, const InstanceParams& p);
bool membership(std::int64_t n, const InstanceParams& p);

inline constexpr std::int64_t kDefaultCeiling = 2'000'000'000;

// Streams the members of A ascending, generated as k-progressions (one
// residue per block of length q), never by scanning every n.  The visitor
// returns false to stop early.
void for_each_member(const InstanceParams& p,
                     const std::function<bool(std::int64_t)>& visit,
                     std::int64_t ceiling = kDefaultCeiling);

std::vector<std::int64_t> members(const InstanceParams& p,
                                  std::int64_t ceiling = kDefaultCeiling);

std::int64_t member_count(const InstanceParams& p);  // closed form, O(z)

struct E2Count {
  std::int64_t count = 0;
  double density_ratio = 0;  // count * log z / z^2
};

E2Count count_e2_in_a(const InstanceParams& p,
                      arith::E2Convention conv = arith::E2Convention::WithMultiplicity,
                      int workers = 0, std::int64_t ceiling = kDefaultCeiling);

}  // namespace e2kit
